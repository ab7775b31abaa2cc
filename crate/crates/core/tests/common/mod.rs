//! Independent reference computations for the integration tests. Nothing
//! here uses the library's group, lattice or graph types.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, VecDeque};

/// A finite group given by an explicit multiplication table on 0..n.
pub struct RefGroup {
    pub mul: Vec<Vec<usize>>,
    pub identity: usize,
}

impl RefGroup {
    /// Closes `gens` under `op` and tabulates the result.
    pub fn generate<E: Ord + Clone>(identity: E, gens: &[E], op: impl Fn(&E, &E) -> E) -> (RefGroup, Vec<E>) {
        let mut seen: BTreeSet<E> = BTreeSet::new();
        let mut queue = VecDeque::from([identity.clone()]);
        seen.insert(identity.clone());
        while let Some(x) = queue.pop_front() {
            for g in gens {
                let y = op(&x, g);
                if seen.insert(y.clone()) {
                    queue.push_back(y);
                }
            }
        }
        let elems: Vec<E> = seen.into_iter().collect();
        let index: BTreeMap<E, usize> = elems.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
        let mul = elems
            .iter()
            .map(|a| elems.iter().map(|b| index[&op(a, b)]).collect())
            .collect();
        (
            RefGroup {
                mul,
                identity: index[&identity],
            },
            elems,
        )
    }

    pub fn order(&self) -> usize {
        self.mul.len()
    }

    fn close(&self, seed: &BTreeSet<usize>) -> BTreeSet<usize> {
        // right multiplication by the seed from the identity reaches every product
        let mut set = BTreeSet::from([self.identity]);
        let mut queue = VecDeque::from([self.identity]);
        while let Some(x) = queue.pop_front() {
            for &g in seed {
                let y = self.mul[x][g];
                if set.insert(y) {
                    queue.push_back(y);
                }
            }
        }
        set
    }

    /// Every subgroup, by repeatedly adjoining single elements.
    pub fn subgroups(&self) -> BTreeSet<BTreeSet<usize>> {
        let trivial = self.close(&BTreeSet::new());
        let mut all = BTreeSet::from([trivial.clone()]);
        let mut frontier = vec![trivial];
        while let Some(h) = frontier.pop() {
            for x in 0..self.order() {
                if h.contains(&x) {
                    continue;
                }
                let mut seed = h.clone();
                seed.insert(x);
                let k = self.close(&seed);
                if all.insert(k.clone()) {
                    frontier.push(k);
                }
            }
        }
        all
    }
}

pub fn p_power(mut n: usize, p: usize) -> bool {
    while n.is_multiple_of(p) {
        n /= p;
    }
    n == 1
}

fn inter(a: &BTreeSet<usize>, b: &BTreeSet<usize>) -> usize {
    a.intersection(b).count()
}

/// Adjacency lists of the commensurability (`containment = false`) or
/// containment graph over the given subgroups.
pub fn graph(subs: &[BTreeSet<usize>], p: usize, containment: bool) -> Vec<Vec<usize>> {
    let n = subs.len();
    let mut adj = vec![Vec::new(); n];
    for i in 0..n {
        for j in i + 1..n {
            let (a, b) = (&subs[i], &subs[j]);
            let k = inter(a, b);
            let ok = if containment {
                (k == a.len() && p_power(b.len() / a.len(), p)) || (k == b.len() && p_power(a.len() / b.len(), p))
            } else {
                p_power(a.len() / k, p) && p_power(b.len() / k, p)
            };
            if ok {
                adj[i].push(j);
                adj[j].push(i);
            }
        }
    }
    adj
}

pub fn bfs(adj: &[Vec<usize>], s: usize) -> Vec<Option<usize>> {
    let mut d = vec![None; adj.len()];
    d[s] = Some(0);
    let mut q = VecDeque::from([s]);
    while let Some(x) = q.pop_front() {
        for &y in &adj[x] {
            if d[y].is_none() {
                d[y] = Some(d[x].unwrap() + 1);
                q.push_back(y);
            }
        }
    }
    d
}

pub fn components(adj: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; adj.len()];
    let mut out = Vec::new();
    for s in 0..adj.len() {
        if seen[s] {
            continue;
        }
        let comp: Vec<usize> = bfs(adj, s)
            .iter()
            .enumerate()
            .filter_map(|(v, d)| d.map(|_| v))
            .collect();
        for &v in &comp {
            seen[v] = true;
        }
        out.push(comp);
    }
    out
}

pub fn diameter(adj: &[Vec<usize>]) -> usize {
    (0..adj.len())
        .map(|s| bfs(adj, s).into_iter().flatten().max().unwrap_or(0))
        .max()
        .unwrap_or(0)
}

#[derive(Debug, PartialEq, Eq)]
pub enum Shape {
    Singleton,
    Complete,
    Star,
    Other,
}

pub fn shape(adj: &[Vec<usize>], comp: &[usize]) -> Shape {
    let n = comp.len();
    let edges: usize = comp.iter().map(|&v| adj[v].len()).sum::<usize>() / 2;
    if n == 1 {
        Shape::Singleton
    } else if edges == n * (n - 1) / 2 {
        Shape::Complete
    } else if edges == n - 1 && comp.iter().any(|&v| adj[v].len() == n - 1) {
        Shape::Star
    } else {
        Shape::Other
    }
}

/// Longest containment distance: the largest finite BFS distance in the
/// containment graph.
pub fn cd(subs: &[BTreeSet<usize>], p: usize) -> usize {
    diameter(&graph(subs, p, true))
}

pub type Perm = Vec<usize>;

/// `a ∘ b`: apply `b` first.
pub fn compose(a: &Perm, b: &Perm) -> Perm {
    b.iter().map(|&x| a[x]).collect()
}

/// 0-based permutation of `0..n` from 1-based cycles.
pub fn perm(n: usize, cycles: &[&[usize]]) -> Perm {
    let mut p: Perm = (0..n).collect();
    for c in cycles {
        for k in 0..c.len() {
            p[c[k] - 1] = c[(k + 1) % c.len()] - 1;
        }
    }
    p
}

pub fn sym(n: usize) -> (RefGroup, Vec<Perm>) {
    let mut gens = vec![];
    if n >= 2 {
        gens.push(perm(n, &[&[1, 2]]));
        gens.push(perm(n, &[&(1..=n).collect::<Vec<_>>()]));
    }
    RefGroup::generate((0..n).collect(), &gens, compose)
}

/// Upper triangular invertible 2x2 matrices mod q as (a, b, d).
pub fn p2q(q: usize) -> (RefGroup, Vec<(usize, usize, usize)>) {
    let mut gens = Vec::new();
    for a in 1..q {
        for d in 1..q {
            gens.push((a, 0, d));
        }
    }
    gens.push((1, 1, 1));
    let mul = |x: &(usize, usize, usize), y: &(usize, usize, usize)| {
        (x.0 * y.0 % q, (x.0 * y.1 + x.1 * y.2) % q, x.2 * y.2 % q)
    };
    RefGroup::generate((1, 0, 1), &gens, mul)
}

pub fn cyclic(n: usize) -> RefGroup {
    RefGroup::generate(0usize, &[1 % n.max(1)], |a, b| (a + b) % n).0
}

pub fn dihedral(n: usize) -> RefGroup {
    // (k, f) = r^k s^f
    let op = |x: &(usize, usize), y: &(usize, usize)| {
        let k = if x.1 == 0 { x.0 + y.0 } else { x.0 + n - y.0 };
        (k % n, (x.1 + y.1) % 2)
    };
    RefGroup::generate((0, 0), &[(1, 0), (0, 1)], op).0
}

pub fn product(factors: &[usize]) -> RefGroup {
    let op = |x: &Vec<usize>, y: &Vec<usize>| x.iter().zip(y).zip(factors).map(|((a, b), n)| (a + b) % n).collect();
    let gens: Vec<Vec<usize>> = (0..factors.len())
        .map(|i| (0..factors.len()).map(|j| usize::from(i == j) % factors[j]).collect())
        .collect();
    RefGroup::generate(vec![0; factors.len()], &gens, op).0
}

/// Sym(3) × Z/2.
pub fn sym3_times_c2() -> RefGroup {
    let op = |x: &(Perm, usize), y: &(Perm, usize)| (compose(&x.0, &y.0), (x.1 + y.1) % 2);
    let gens = vec![
        (perm(3, &[&[1, 2]]), 0),
        (perm(3, &[&[1, 2, 3]]), 0),
        ((0..3).collect(), 1),
    ];
    RefGroup::generate(((0..3).collect(), 0), &gens, op).0
}

/// Number of subgroups per order.
pub fn order_profile(subs: &BTreeSet<BTreeSet<usize>>) -> BTreeMap<usize, usize> {
    let mut m = BTreeMap::new();
    for s in subs {
        *m.entry(s.len()).or_insert(0) += 1;
    }
    m
}
