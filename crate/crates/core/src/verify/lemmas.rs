//! Seeded randomized checks of the p-adjacency lemmas over corpus lattices.

use std::collections::{BTreeMap, HashMap};
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::arith;
use crate::commgraph::{commensurability_exponents, CommGraph, GraphKind};
use crate::subgroup::SubgroupSet;

use super::corpus::{CorpusData, GroupData};
use super::report::{CheckRecord, VerdictReport};
use super::suites::describe;

/// Share of trials allowed to run with a trivial normal p-subgroup Q.
pub const MAX_TRIVIAL_Q_SHARE: f64 = 0.3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Lemma {
    /// `[VQ : V]` is a power of p.
    ProductAdjacent,
    /// A ~ B ⇒ AQ ~ BQ (index form).
    ProductPreservesAdjacency,
    /// V ~ W ⇒ V∩N ~ W∩N (index form).
    NormalIntersection,
    /// VQ, WQ p-connected ⇒ VQ∩G_i = WQ∩G_i.
    DerivedRigidity,
    /// Nilpotent Δ1 ~ Δ2 ⇒ p'-part of Δ1 lies in Δ1∩Δ2.
    NilpotentComplement,
}

impl Lemma {
    pub const ALL: [Lemma; 5] = [
        Lemma::ProductAdjacent,
        Lemma::ProductPreservesAdjacency,
        Lemma::NormalIntersection,
        Lemma::DerivedRigidity,
        Lemma::NilpotentComplement,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Lemma::ProductAdjacent => "V ~ VQ",
            Lemma::ProductPreservesAdjacency => "A ~ B => AQ ~ BQ",
            Lemma::NormalIntersection => "V ~ W => V^N ~ W^N",
            Lemma::DerivedRigidity => "VQ ~* WQ => VQ^G_i = WQ^G_i",
            Lemma::NilpotentComplement => "nilpotent complement in intersection",
        }
    }

    fn uses_q(&self) -> bool {
        !matches!(self, Lemma::NormalIntersection | Lemma::NilpotentComplement)
    }
}

/// Per (group, prime) sampling tables.
struct PairCtx<'a> {
    group: &'a GroupData,
    group_index: usize,
    p: u64,
    graph: &'a CommGraph,
    component_of: Vec<usize>,
    /// lattice index of the normal core of each p-subgroup
    p_subgroup_cores: Vec<usize>,
    normal_p: Vec<usize>,
    normal: Vec<usize>,
    with_neighbors: Vec<usize>,
    nilpotent: &'a [bool],
    claim_candidates: Vec<usize>,
    /// per derived-series term: normal p-subgroups meeting it in a Sylow subgroup
    rigidity_q: Vec<Vec<usize>>,
}

impl<'a> PairCtx<'a> {
    fn new(group: &'a GroupData, group_index: usize, p: u64, nilpotent: &'a [bool], normal: &[usize]) -> PairCtx<'a> {
        let lattice = &group.lattice;
        let graph = group.graph(p, GraphKind::Commensurability);
        let mut component_of = vec![0; lattice.len()];
        for (c, comp) in graph.components().iter().enumerate() {
            for &v in comp {
                component_of[v] = c;
            }
        }
        let p_subgroups: Vec<usize> = (0..lattice.len())
            .filter(|&i| lattice.get(i).is_p_group(p))
            .collect();
        let p_subgroup_cores = p_subgroups
            .iter()
            .map(|&i| {
                lattice
                    .position_of(&lattice.get(i).normal_core())
                    .expect("core in lattice")
            })
            .collect();
        let normal_p: Vec<usize> = normal
            .iter()
            .copied()
            .filter(|&i| lattice.get(i).is_p_group(p))
            .collect();
        let with_neighbors = (0..lattice.len()).filter(|&i| graph.degree(i) > 0).collect();
        let claim_candidates = (0..lattice.len())
            .filter(|&i| nilpotent[i] && graph.neighbors(i).iter().any(|&j| nilpotent[j]))
            .collect();
        let rigidity_q = group
            .series
            .terms()
            .iter()
            .map(|term| {
                let sylow_order = arith::p_part(term.order() as u64, p) as usize;
                normal_p
                    .iter()
                    .copied()
                    .filter(|&q| lattice.get(q).members().and_count(term.members()) == sylow_order)
                    .collect()
            })
            .collect();
        PairCtx {
            group,
            group_index,
            p,
            graph,
            component_of,
            p_subgroup_cores,
            normal_p,
            normal: normal.to_vec(),
            with_neighbors,
            nilpotent,
            claim_candidates,
            rigidity_q,
        }
    }

    fn has_nontrivial_normal_p(&self) -> bool {
        self.normal_p.len() > 1
    }
}

struct Tally {
    trials: usize,
    violations: usize,
    first_violation: Option<Value>,
}

enum Outcome {
    Checked { pass: bool, detail: Value, trivial_q: bool },
    Skipped,
}

struct Runner<'a> {
    pairs: Vec<PairCtx<'a>>,
    rng: ChaCha8Rng,
    /// lattice index of VQ for every V, keyed by (pair, Q)
    products: HashMap<(usize, usize), Vec<usize>>,
    complements: HashMap<(usize, usize), SubgroupSet>,
}

impl<'a> Runner<'a> {
    fn products(&mut self, pair: usize, q: usize) -> &Vec<usize> {
        let ctx = &self.pairs[pair];
        self.products.entry((pair, q)).or_insert_with(|| {
            let lattice = &ctx.group.lattice;
            let q_sub = lattice.get(q);
            lattice
                .subgroups()
                .iter()
                .map(|v| {
                    let vq = v.product_set(q_sub).expect("Q is normal");
                    lattice.position_of(&vq).expect("product in lattice")
                })
                .collect()
        })
    }

    fn pick<T: Copy>(&mut self, items: &[T]) -> T {
        *items.choose(&mut self.rng).expect("non-empty choice")
    }

    /// Random normal p-subgroup as the core of a random p-subgroup, falling
    /// back to a nontrivial one once the trivial budget is spent.
    fn sample_q(&mut self, pair: usize, trivial_budget_left: bool) -> Option<usize> {
        let cores = self.pairs[pair].p_subgroup_cores.clone();
        let q = self.pick(&cores);
        if q != 0 || trivial_budget_left {
            return Some(q);
        }
        let nontrivial: Vec<usize> = self.pairs[pair].normal_p.iter().copied().filter(|&i| i != 0).collect();
        (!nontrivial.is_empty()).then(|| self.pick(&nontrivial))
    }

    fn trial(&mut self, lemma: Lemma, trivial_budget_left: bool) -> (usize, Outcome) {
        let mut pair = self.rng.gen_range(0..self.pairs.len());
        let mut q = None;
        if lemma.uses_q() && lemma != Lemma::DerivedRigidity {
            q = self.sample_q(pair, trivial_budget_left);
            if q.is_none() {
                let options: Vec<usize> = (0..self.pairs.len())
                    .filter(|&i| self.pairs[i].has_nontrivial_normal_p())
                    .collect();
                if options.is_empty() {
                    return (pair, Outcome::Skipped);
                }
                pair = self.pick(&options);
                q = self.sample_q(pair, trivial_budget_left);
            }
        }
        let outcome = match lemma {
            Lemma::ProductAdjacent => self.product_adjacent(pair, q.unwrap()),
            Lemma::ProductPreservesAdjacency => self.product_preserves(pair, q.unwrap()),
            Lemma::NormalIntersection => self.normal_intersection(pair),
            Lemma::DerivedRigidity => self.derived_rigidity(pair, trivial_budget_left),
            Lemma::NilpotentComplement => self.nilpotent_complement(pair),
        };
        (pair, outcome)
    }

    fn product_adjacent(&mut self, pair: usize, q: usize) -> Outcome {
        let n = self.pairs[pair].group.lattice.len();
        let v = self.rng.gen_range(0..n);
        let vq = self.products(pair, q)[v];
        let ctx = &self.pairs[pair];
        let lattice = &ctx.group.lattice;
        let (vs, vqs) = (lattice.get(v), lattice.get(vq));
        let index = vqs.index_of(vs).ok();
        let pass = index.is_some_and(|i| arith::p_power_exponent(i as u64, ctx.p).is_some());
        Outcome::Checked {
            pass,
            detail: json!({"V": describe(vs), "Q": describe(lattice.get(q)), "index": index}),
            trivial_q: q == 0,
        }
    }

    fn product_preserves(&mut self, pair: usize, q: usize) -> Outcome {
        let candidates = self.pairs[pair].with_neighbors.clone();
        let a = self.pick(&candidates);
        let neighbors = self.pairs[pair].graph.neighbors(a).to_vec();
        let b = self.pick(&neighbors);
        let (aq, bq) = {
            let prods = self.products(pair, q);
            (prods[a], prods[b])
        };
        let ctx = &self.pairs[pair];
        let lattice = &ctx.group.lattice;
        let exps = commensurability_exponents(lattice.get(aq), lattice.get(bq), ctx.p).expect("same parent");
        Outcome::Checked {
            pass: exps.is_some(),
            detail: json!({"A": describe(lattice.get(a)), "B": describe(lattice.get(b)),
                           "Q": describe(lattice.get(q)), "exponents": exps}),
            trivial_q: q == 0,
        }
    }

    fn normal_intersection(&mut self, pair: usize) -> Outcome {
        let candidates = self.pairs[pair].with_neighbors.clone();
        let v = self.pick(&candidates);
        let neighbors = self.pairs[pair].graph.neighbors(v).to_vec();
        let w = self.pick(&neighbors);
        let normals = self.pairs[pair].normal.clone();
        let n = self.pick(&normals);
        let ctx = &self.pairs[pair];
        let lattice = &ctx.group.lattice;
        let vn = lattice.get(v).intersect(lattice.get(n)).expect("same parent");
        let wn = lattice.get(w).intersect(lattice.get(n)).expect("same parent");
        let exps = commensurability_exponents(&vn, &wn, ctx.p).expect("same parent");
        Outcome::Checked {
            pass: exps.is_some(),
            detail: json!({"V": describe(lattice.get(v)), "W": describe(lattice.get(w)),
                           "N": describe(lattice.get(n)), "exponents": exps}),
            trivial_q: false,
        }
    }

    fn derived_rigidity(&mut self, pair: usize, trivial_budget_left: bool) -> Outcome {
        let terms = self.pairs[pair].group.series.terms().len();
        let i = self.rng.gen_range(0..terms);
        let candidates = self.pairs[pair].rigidity_q[i].clone();
        let nontrivial: Vec<usize> = candidates.iter().copied().filter(|&q| q != 0).collect();
        let q = if !trivial_budget_left {
            if nontrivial.is_empty() {
                return Outcome::Skipped;
            }
            self.pick(&nontrivial)
        } else if candidates.is_empty() {
            return Outcome::Skipped;
        } else {
            self.pick(&candidates)
        };
        let prods = self.products(pair, q).clone();
        let ctx = &self.pairs[pair];
        let n = ctx.group.lattice.len();
        let v = self.rng.gen_range(0..n);
        let component = ctx.component_of[prods[v]];
        let ws: Vec<usize> = (0..n).filter(|&w| ctx.component_of[prods[w]] == component).collect();
        let w = *ws.choose(&mut self.rng).expect("V itself qualifies");
        let lattice = &ctx.group.lattice;
        let term = &ctx.group.series.terms()[i];
        let left = lattice.get(prods[v]).members().and(term.members());
        let right = lattice.get(prods[w]).members().and(term.members());
        Outcome::Checked {
            pass: left == right,
            detail: json!({"i": i + 1, "V": describe(lattice.get(v)), "W": describe(lattice.get(w)),
                           "Q": describe(lattice.get(q)), "orders": [left.count(), right.count()]}),
            trivial_q: q == 0,
        }
    }

    fn nilpotent_complement(&mut self, pair: usize) -> Outcome {
        let candidates = self.pairs[pair].claim_candidates.clone();
        if candidates.is_empty() {
            return Outcome::Skipped;
        }
        let d1 = self.pick(&candidates);
        let partners: Vec<usize> = {
            let ctx = &self.pairs[pair];
            ctx.graph
                .neighbors(d1)
                .iter()
                .copied()
                .filter(|&j| ctx.nilpotent[j])
                .collect()
        };
        let d2 = self.pick(&partners);
        let ctx = &self.pairs[pair];
        let lattice = &ctx.group.lattice;
        let p = ctx.p;
        let complement = self
            .complements
            .entry((pair, d1))
            .or_insert_with(|| lattice.get(d1).p_prime_complement(p).expect("nilpotent"));
        let pass = complement.is_subgroup_of(lattice.get(d2));
        Outcome::Checked {
            pass,
            detail: json!({"D1": describe(lattice.get(d1)), "D2": describe(lattice.get(d2)),
                           "complement_order": complement.order()}),
            trivial_q: false,
        }
    }
}

/// Runs each lemma until `trials` applicable instances have been checked, or
/// `2 * trials` attempts have been made.
pub fn verify_lemma_suite(data: &CorpusData, trials: usize, seed: u64) -> VerdictReport {
    let started = Instant::now();
    let mut report = VerdictReport::new("lemmas", seed);

    let nilpotent: Vec<Vec<bool>> = data
        .groups
        .iter()
        .map(|g| g.lattice.subgroups().iter().map(SubgroupSet::is_nilpotent).collect())
        .collect();
    let normals: Vec<Vec<usize>> = data.groups.iter().map(|g| g.lattice.normal_indices()).collect();
    let mut pairs = Vec::new();
    for (gi, g) in data.groups.iter().enumerate() {
        for p in g.dividing_primes() {
            pairs.push(PairCtx::new(g, gi, p, &nilpotent[gi], &normals[gi]));
        }
    }
    if pairs.is_empty() || trials == 0 {
        report.push(CheckRecord::new("*", None, json!({"trials": trials}),
            json!({"applicable_pairs": "at least 1"}), json!({"applicable_pairs": pairs.len()}), false));
        return report.finish(started);
    }

    let mut runner = Runner {
        pairs,
        rng: ChaCha8Rng::seed_from_u64(seed),
        products: HashMap::new(),
        complements: HashMap::new(),
    };
    let max_trivial = (MAX_TRIVIAL_Q_SHARE * trials as f64) as usize;

    for lemma in Lemma::ALL {
        let mut tallies: BTreeMap<(usize, u64), Tally> = BTreeMap::new();
        let (mut applicable, mut attempts, mut skips, mut trivial_q) = (0, 0, 0, 0);
        while applicable < trials && attempts < 2 * trials {
            attempts += 1;
            let (pair, outcome) = runner.trial(lemma, trivial_q < max_trivial);
            match outcome {
                Outcome::Skipped => skips += 1,
                Outcome::Checked { pass, detail, trivial_q: tq } => {
                    applicable += 1;
                    trivial_q += tq as usize;
                    let ctx = &runner.pairs[pair];
                    let tally = tallies.entry((ctx.group_index, ctx.p)).or_insert(Tally {
                        trials: 0,
                        violations: 0,
                        first_violation: None,
                    });
                    tally.trials += 1;
                    if !pass {
                        tally.violations += 1;
                        tally.first_violation.get_or_insert(detail);
                    }
                }
            }
        }
        for ((gi, p), tally) in &tallies {
            report.push(CheckRecord::new(
                &data.groups[*gi].name,
                Some(*p),
                json!({"lemma": lemma.name()}),
                json!({"violations": 0}),
                json!({"trials": tally.trials, "violations": tally.violations,
                       "first_violation": tally.first_violation}),
                tally.violations == 0,
            ));
        }
        let violations: usize = tallies.values().map(|t| t.violations).sum();
        let skip_rate = skips as f64 / attempts as f64;
        let trivial_share = trivial_q as f64 / applicable.max(1) as f64;
        report.skips += skips;
        report.push(CheckRecord::new(
            "*",
            None,
            json!({"lemma": lemma.name(), "trials": trials}),
            json!({"applicable_at_least": trials, "violations": 0, "skip_rate_below": 0.5,
                   "trivial_q_share_at_most": MAX_TRIVIAL_Q_SHARE}),
            json!({"applicable": applicable, "attempts": attempts, "skips": skips,
                   "violations": violations, "trivial_q": trivial_q}),
            applicable >= trials
                && violations == 0
                && skip_rate < 0.5
                && trivial_share <= MAX_TRIVIAL_Q_SHARE + 1e-9,
        ));
    }
    report.finish(started)
}
