//! Complete subgroup lattices in canonical order.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::bits::Bits;
use crate::error::{Error, Result};
use crate::group::{ElementId, GroupTable, IDENTITY};
use crate::subgroup::{close_generated, SubgroupSet};

pub const DEFAULT_LATTICE_CAP: usize = 100_000;

/// Largest group order accepted by the generator-tuple oracle.
pub const ORACLE_ORDER_LIMIT: usize = 100;

/// All subgroups of a group, sorted by `(order, membership bit-string)`.
#[derive(Clone, Debug)]
pub struct Lattice {
    parent: Arc<GroupTable>,
    subgroups: Vec<SubgroupSet>,
    by_order: BTreeMap<usize, Vec<usize>>,
}

impl Lattice {
    /// Sorts member sets canonically and recomputes witnesses greedily.
    /// The sets must already be distinct subgroups of `parent`.
    pub fn from_subgroup_sets(parent: &Arc<GroupTable>, mut sets: Vec<Bits>) -> Lattice {
        sets.sort_by(|a, b| a.count().cmp(&b.count()).then_with(|| a.cmp(b)));
        let subgroups: Vec<SubgroupSet> = sets
            .into_par_iter()
            .map(|bits| SubgroupSet::from_subgroup_bits(parent, bits))
            .collect();
        let mut by_order: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (i, s) in subgroups.iter().enumerate() {
            by_order.entry(s.order()).or_default().push(i);
        }
        Lattice {
            parent: parent.clone(),
            subgroups,
            by_order,
        }
    }

    pub fn parent(&self) -> &Arc<GroupTable> {
        &self.parent
    }

    pub fn len(&self) -> usize {
        self.subgroups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subgroups.is_empty()
    }

    pub fn subgroups(&self) -> &[SubgroupSet] {
        &self.subgroups
    }

    pub fn get(&self, i: usize) -> &SubgroupSet {
        &self.subgroups[i]
    }

    pub fn by_order(&self) -> &BTreeMap<usize, Vec<usize>> {
        &self.by_order
    }

    pub fn with_order(&self, order: usize) -> &[usize] {
        self.by_order.get(&order).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Position of the subgroup with exactly these members.
    pub fn position(&self, members: &Bits) -> Option<usize> {
        let order = members.count();
        self.subgroups
            .binary_search_by(|s| {
                s.order()
                    .cmp(&order)
                    .then_with(|| s.members().cmp(members))
            })
            .ok()
    }

    pub fn position_of(&self, sub: &SubgroupSet) -> Option<usize> {
        self.position(sub.members())
    }

    pub fn trivial_index(&self) -> usize {
        0
    }

    pub fn whole_index(&self) -> usize {
        self.subgroups.len() - 1
    }

    /// Index of the closure of `gens`.
    pub fn locate(&self, gens: &[ElementId]) -> Result<usize> {
        let sub = SubgroupSet::closure(&self.parent, gens)?;
        self.position(sub.members()).ok_or(Error::NotFound)
    }

    pub fn normal_indices(&self) -> Vec<usize> {
        let whole = SubgroupSet::whole(&self.parent);
        (0..self.len())
            .filter(|&i| self.subgroups[i].is_normal_in(&whole).unwrap_or(false))
            .collect()
    }

    /// Structural checks: trivial and whole present, distinct sets, Lagrange,
    /// and intersection closure on `samples` seeded random pairs.
    pub fn check_invariants(&self, samples: usize, seed: u64) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidCache(m.to_string()));
        let n = self.parent.order();
        if self.subgroups.first().map(|s| s.order()) != Some(1) {
            return bad("trivial subgroup missing");
        }
        if self.subgroups.last().map(|s| s.order()) != Some(n) {
            return bad("whole group missing");
        }
        for w in self.subgroups.windows(2) {
            let key = |s: &SubgroupSet| (s.order(), s.members().clone());
            if key(&w[0]) >= key(&w[1]) {
                return bad("subgroups not strictly canonically ordered");
            }
        }
        if self.subgroups.iter().any(|s| !n.is_multiple_of(s.order())) {
            return bad("subgroup order does not divide group order");
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..samples {
            let a = &self.subgroups[rng.gen_range(0..self.len())];
            let b = &self.subgroups[rng.gen_range(0..self.len())];
            if self.position(&a.members().and(b.members())).is_none() {
                return bad("lattice not closed under intersection");
            }
        }
        Ok(())
    }
}

/// Every subgroup of `g`: start from the cyclic subgroups, then repeatedly
/// join each known subgroup with each cyclic subgroup until nothing new
/// appears.
pub fn enumerate_subgroups(g: &Arc<GroupTable>, cap: usize) -> Result<Lattice> {
    let n = g.order();
    let mut cyclic_gens: Vec<ElementId> = Vec::new();
    let mut known: Vec<(Bits, Vec<ElementId>)> = Vec::new();
    let mut seen: HashSet<Bits> = HashSet::new();

    for x in 0..n as ElementId {
        let members = close_generated(g, &[x]);
        if seen.insert(members.clone()) {
            if x != IDENTITY {
                cyclic_gens.push(x);
            }
            let gens = if x == IDENTITY { Vec::new() } else { vec![x] };
            known.push((members, gens));
            if known.len() > cap {
                return Err(Error::LatticeCapExceeded { cap });
            }
        }
    }

    let mut next = 0;
    while next < known.len() {
        let (members, gens) = known[next].clone();
        next += 1;
        let joins: Vec<(Bits, ElementId)> = cyclic_gens
            .par_iter()
            .filter(|&&c| !members.contains(c))
            .map(|&c| {
                let mut all = gens.clone();
                all.push(c);
                (close_generated(g, &all), c)
            })
            .collect();
        for (bits, c) in joins {
            if seen.contains(&bits) {
                continue;
            }
            seen.insert(bits.clone());
            let mut all = gens.clone();
            all.push(c);
            known.push((bits, all));
            if known.len() > cap {
                return Err(Error::LatticeCapExceeded { cap });
            }
        }
    }

    Ok(Lattice::from_subgroup_sets(
        g,
        known.into_iter().map(|(bits, _)| bits).collect(),
    ))
}

/// Closure by multiplying every pair of elements until nothing changes.
fn naive_closure(g: &GroupTable, seed: impl IntoIterator<Item = ElementId>) -> BTreeSet<ElementId> {
    let mut set: BTreeSet<ElementId> = seed.into_iter().collect();
    set.insert(IDENTITY);
    loop {
        let cur: Vec<ElementId> = set.iter().copied().collect();
        let before = set.len();
        for &a in &cur {
            for &b in &cur {
                set.insert(g.mul(a, b));
            }
        }
        if set.len() == before {
            return set;
        }
    }
}

/// Closures of all generator tuples of length at most `max_gens`, built
/// level by level with naive pairwise-product closure.
pub fn oracle_enumerate_subgroups(g: &Arc<GroupTable>, max_gens: usize) -> Result<Lattice> {
    let n = g.order();
    if n > ORACLE_ORDER_LIMIT {
        return Err(Error::OracleScaleExceeded {
            order: n,
            limit: ORACLE_ORDER_LIMIT,
        });
    }
    if max_gens < 2 {
        return Err(Error::InvalidSpec("oracle needs max_gens >= 2".into()));
    }
    let mut found: BTreeSet<Vec<ElementId>> = BTreeSet::new();
    let trivial = vec![IDENTITY];
    found.insert(trivial.clone());
    let mut frontier = vec![trivial];
    for _ in 0..max_gens {
        let mut fresh = Vec::new();
        for sub in &frontier {
            for x in 0..n as ElementId {
                if sub.binary_search(&x).is_ok() {
                    continue;
                }
                let closed: Vec<ElementId> =
                    naive_closure(g, sub.iter().copied().chain([x])).into_iter().collect();
                if found.insert(closed.clone()) {
                    fresh.push(closed);
                }
            }
        }
        if fresh.is_empty() {
            break;
        }
        frontier = fresh;
    }
    let sets = found
        .into_iter()
        .map(|ids| Bits::from_ids(n, ids))
        .collect();
    Ok(Lattice::from_subgroup_sets(g, sets))
}

/// `ceil(log2 n)`, the generator count that suffices for any subgroup of
/// a group of order `n`, floored at 2.
pub fn oracle_generator_bound(n: usize) -> usize {
    let mut k = 0;
    while (1usize << k) < n {
        k += 1;
    }
    k.max(2)
}

/// Map from member set to lattice index, for bulk lookups.
pub fn index_map(lattice: &Lattice) -> HashMap<Bits, usize> {
    lattice
        .subgroups()
        .iter()
        .enumerate()
        .map(|(i, s)| (s.members().clone(), i))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{construct, GroupSpec};
    use crate::group::DEFAULT_ORDER_CAP;

    fn group(spec: GroupSpec) -> Arc<GroupTable> {
        Arc::new(construct(&spec, DEFAULT_ORDER_CAP).unwrap())
    }

    #[test]
    fn cyclic_six_has_four_subgroups() {
        let l = enumerate_subgroups(&group(GroupSpec::Cyclic(6)), DEFAULT_LATTICE_CAP).unwrap();
        let orders: Vec<_> = l.subgroups().iter().map(|s| s.order()).collect();
        assert_eq!(orders, vec![1, 2, 3, 6]);
        l.check_invariants(200, 1).unwrap();
    }

    #[test]
    fn small_counts() {
        let count = |s| enumerate_subgroups(&group(s), DEFAULT_LATTICE_CAP).unwrap().len();
        assert_eq!(count(GroupSpec::Sym(4)), 30);
        assert_eq!(count(GroupSpec::Abelian(vec![2, 2])), 5);
        assert_eq!(count(GroupSpec::Sym(3)), 6);
        assert_eq!(count(GroupSpec::Cyclic(1)), 1);
    }

    #[test]
    fn oracle_examples() {
        let l = oracle_enumerate_subgroups(&group(GroupSpec::Cyclic(1)), 2).unwrap();
        assert_eq!(l.len(), 1);
        let l = oracle_enumerate_subgroups(&group(GroupSpec::Sym(3)), 2).unwrap();
        let orders: Vec<_> = l.subgroups().iter().map(|s| s.order()).collect();
        assert_eq!(orders, vec![1, 2, 2, 2, 3, 6]);
        let l = oracle_enumerate_subgroups(&group(GroupSpec::Cyclic(8)), 3).unwrap();
        assert_eq!(l.len(), 4);
        assert!(matches!(
            oracle_enumerate_subgroups(&group(GroupSpec::Sym(5)), 7),
            Err(Error::OracleScaleExceeded { order: 120, .. })
        ));
    }

    #[test]
    fn lattice_cap_is_an_error() {
        assert!(matches!(
            enumerate_subgroups(&group(GroupSpec::Sym(4)), 10),
            Err(Error::LatticeCapExceeded { cap: 10 })
        ));
    }

    #[test]
    fn locate_examples() {
        let g = group(GroupSpec::Sym(4));
        let l = enumerate_subgroups(&g, DEFAULT_LATTICE_CAP).unwrap();
        assert_eq!(l.locate(&[]).unwrap(), 0);
        let id = |s: &str| g.find_label(s).unwrap();
        let t = l.locate(&[id("(1,2)")]).unwrap();
        assert_eq!(l.get(t).order(), 2);
        let d8 = l.locate(&[id("(1,2)"), id("(3,4)"), id("(1,3)(2,4)")]).unwrap();
        assert_eq!(l.get(d8).order(), 8);
        assert_eq!(l.whole_index(), 29);
        assert_eq!(l.normal_indices().len(), 4);
    }

    #[test]
    fn canonical_order_is_deterministic() {
        let g = group(GroupSpec::P2q(5));
        let a = enumerate_subgroups(&g, DEFAULT_LATTICE_CAP).unwrap();
        let b = enumerate_subgroups(&g, DEFAULT_LATTICE_CAP).unwrap();
        assert_eq!(a.subgroups(), b.subgroups());
        let wa: Vec<_> = a.subgroups().iter().map(|s| s.witnesses().to_vec()).collect();
        let wb: Vec<_> = b.subgroups().iter().map(|s| s.witnesses().to_vec()).collect();
        assert_eq!(wa, wb);
    }
}
