//! Subgroups as membership bit vectors over a shared parent table.

use std::fmt;
use std::sync::Arc;

use crate::arith;
use crate::bits::Bits;
use crate::error::{Error, Result};
use crate::group::{ElementId, GroupTable, IDENTITY};

/// Elements reachable from the identity by right multiplication with `gens`.
pub(crate) fn close_generated(g: &GroupTable, gens: &[ElementId]) -> Bits {
    let mut members = Bits::from_ids(g.order(), [IDENTITY]);
    let mut queue = vec![IDENTITY];
    let mut head = 0;
    while head < queue.len() {
        let x = queue[head];
        head += 1;
        let row = g.row(x);
        for &s in gens {
            let y = row[s as usize];
            if members.insert(y) {
                queue.push(y);
            }
        }
    }
    members
}

#[derive(Clone)]
pub struct SubgroupSet {
    parent: Arc<GroupTable>,
    members: Bits,
    order: usize,
    witnesses: Vec<ElementId>,
}

impl PartialEq for SubgroupSet {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.parent, &other.parent) && self.members == other.members
    }
}

impl Eq for SubgroupSet {}

impl fmt::Debug for SubgroupSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<")?;
        for (i, &w) in self.witnesses.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", self.parent.label(w))?;
        }
        write!(f, "> (order {})", self.order)
    }
}

impl SubgroupSet {
    /// Smallest subgroup containing `seed`; the witnesses are the sorted seed.
    pub fn closure(parent: &Arc<GroupTable>, seed: &[ElementId]) -> Result<SubgroupSet> {
        for &x in seed {
            parent.check_id(x)?;
        }
        let mut witnesses = seed.to_vec();
        witnesses.sort_unstable();
        witnesses.dedup();
        let members = close_generated(parent, &witnesses);
        Ok(SubgroupSet::assemble(parent.clone(), members, witnesses))
    }

    pub fn trivial(parent: &Arc<GroupTable>) -> SubgroupSet {
        SubgroupSet::assemble(
            parent.clone(),
            Bits::from_ids(parent.order(), [IDENTITY]),
            Vec::new(),
        )
    }

    pub fn whole(parent: &Arc<GroupTable>) -> SubgroupSet {
        SubgroupSet::assemble(
            parent.clone(),
            Bits::from_ids(parent.order(), 0..parent.order() as ElementId),
            parent.generators().to_vec(),
        )
    }

    /// Wraps a member set after checking it is a subgroup; witnesses are
    /// recomputed greedily.
    pub fn from_members(parent: &Arc<GroupTable>, members: Bits) -> Result<SubgroupSet> {
        if members.len() != parent.order() {
            return Err(Error::ParentMismatch);
        }
        if !members.contains(IDENTITY) {
            return Err(Error::InvalidGenerator("member set lacks the identity".into()));
        }
        let witnesses = parent.greedy_generators(members.ones());
        let closed = close_generated(parent, &witnesses);
        if closed != members {
            return Err(Error::InvalidGenerator("member set is not closed".into()));
        }
        Ok(SubgroupSet::assemble(parent.clone(), members, witnesses))
    }

    /// Trusted constructor for member sets already known to be subgroups.
    pub(crate) fn from_subgroup_bits(parent: &Arc<GroupTable>, members: Bits) -> SubgroupSet {
        let witnesses = parent.greedy_generators(members.ones());
        SubgroupSet::assemble(parent.clone(), members, witnesses)
    }

    fn assemble(parent: Arc<GroupTable>, members: Bits, witnesses: Vec<ElementId>) -> SubgroupSet {
        let order = members.count();
        SubgroupSet {
            parent,
            members,
            order,
            witnesses,
        }
    }

    pub fn parent(&self) -> &Arc<GroupTable> {
        &self.parent
    }

    pub fn members(&self) -> &Bits {
        &self.members
    }

    pub fn into_members(self) -> Bits {
        self.members
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn witnesses(&self) -> &[ElementId] {
        &self.witnesses
    }

    pub fn elements(&self) -> impl Iterator<Item = ElementId> + '_ {
        self.members.ones()
    }

    pub fn contains(&self, x: ElementId) -> bool {
        self.members.contains(x)
    }

    pub fn is_subgroup_of(&self, other: &SubgroupSet) -> bool {
        self.members.is_subset(&other.members)
    }

    pub fn is_trivial(&self) -> bool {
        self.order == 1
    }

    pub fn is_p_group(&self, p: u64) -> bool {
        arith::p_power_exponent(self.order as u64, p).is_some()
    }

    pub fn same_parent(&self, other: &SubgroupSet) -> Result<()> {
        if Arc::ptr_eq(&self.parent, &other.parent) {
            Ok(())
        } else {
            Err(Error::ParentMismatch)
        }
    }

    pub fn intersect(&self, other: &SubgroupSet) -> Result<SubgroupSet> {
        self.same_parent(other)?;
        Ok(SubgroupSet::from_subgroup_bits(
            &self.parent,
            self.members.and(&other.members),
        ))
    }

    /// `[self : sub]` for `sub` contained in `self`.
    pub fn index_of(&self, sub: &SubgroupSet) -> Result<usize> {
        self.same_parent(sub)?;
        if !sub.is_subgroup_of(self) {
            return Err(Error::NotContained);
        }
        Ok(self.order / sub.order)
    }

    /// `{ a q : a in self, q in normal }`, requiring `normal` to be normal in
    /// the parent group.
    pub fn product_set(&self, normal: &SubgroupSet) -> Result<SubgroupSet> {
        self.same_parent(normal)?;
        if !normal.is_normal_in(&SubgroupSet::whole(&self.parent))? {
            return Err(Error::NotNormal);
        }
        let g = &*self.parent;
        let mut members = Bits::new(g.order());
        let qs: Vec<ElementId> = normal.elements().collect();
        for a in self.elements() {
            let row = g.row(a);
            for &q in &qs {
                members.insert(row[q as usize]);
            }
        }
        let expected = self.order * normal.order / self.members.and_count(&normal.members);
        assert_eq!(members.count(), expected, "product order formula violated");
        let mut witnesses: Vec<ElementId> = self
            .witnesses
            .iter()
            .chain(&normal.witnesses)
            .copied()
            .collect();
        witnesses.sort_unstable();
        witnesses.dedup();
        Ok(SubgroupSet::assemble(self.parent.clone(), members, witnesses))
    }

    /// `g A g^-1`
    pub fn conjugate(&self, g: ElementId) -> Result<SubgroupSet> {
        self.parent.check_id(g)?;
        let parent = &*self.parent;
        let members = Bits::from_ids(
            parent.order(),
            self.elements().map(|a| parent.conjugate(a, g)),
        );
        let witnesses = self.witnesses.iter().map(|&w| parent.conjugate(w, g)).collect();
        Ok(SubgroupSet::assemble(self.parent.clone(), members, witnesses))
    }

    fn normalized_by(&self, g: ElementId) -> bool {
        let parent = &*self.parent;
        self.elements()
            .all(|a| self.members.contains(parent.conjugate(a, g)))
    }

    /// Normality of `self` inside `over`, tested on the witnesses of `over`.
    pub fn is_normal_in(&self, over: &SubgroupSet) -> Result<bool> {
        self.same_parent(over)?;
        if !self.is_subgroup_of(over) {
            return Err(Error::NotContained);
        }
        Ok(over.witnesses.iter().all(|&g| self.normalized_by(g)))
    }

    /// Largest subgroup of `self` normal in the parent group.
    pub fn normal_core(&self) -> SubgroupSet {
        let parent = &*self.parent;
        let mut core = self.members.clone();
        for g in 0..parent.order() as ElementId {
            if core.count() == 1 {
                break;
            }
            let conj = Bits::from_ids(
                parent.order(),
                self.elements().map(|a| parent.conjugate(a, g)),
            );
            core = core.and(&conj);
        }
        SubgroupSet::from_subgroup_bits(&self.parent, core)
    }

    /// Subgroup generated by all commutators of pairs of members.
    pub fn derived_subgroup(&self) -> SubgroupSet {
        let parent = &*self.parent;
        let elems: Vec<ElementId> = self.elements().collect();
        let mut commutators = Bits::new(parent.order());
        for &x in &elems {
            for &y in &elems {
                commutators.insert(parent.commutator(x, y));
            }
        }
        let gens = parent.greedy_generators(commutators.ones());
        let members = close_generated(parent, &gens);
        SubgroupSet::assemble(self.parent.clone(), members, gens)
    }

    /// Sylow p-subgroup by p-subgroup ascent: repeatedly adjoin the first
    /// (by id) p-element outside the current subgroup that normalizes it.
    pub fn sylow(&self, p: u64) -> Result<SubgroupSet> {
        if !arith::is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let parent = &*self.parent;
        let target = arith::p_part(self.order as u64, p) as usize;
        let candidates: Vec<ElementId> = self
            .elements()
            .filter(|&x| {
                let k = parent.element_order(x).expect("member id");
                k > 1 && arith::p_power_exponent(k, p).is_some()
            })
            .collect();
        let mut current = SubgroupSet::trivial(&self.parent);
        while current.order < target {
            let next = candidates
                .iter()
                .copied()
                .find(|&x| !current.contains(x) && current.normalized_by(x))
                .expect("a p-subgroup below Sylow order has a p-element normalizing it");
            let mut gens = current.witnesses.clone();
            gens.push(next);
            let members = close_generated(parent, &gens);
            current = SubgroupSet::assemble(self.parent.clone(), members, gens);
        }
        Ok(current)
    }

    /// Every Sylow subgroup normal.
    pub fn is_nilpotent(&self) -> bool {
        arith::factorize(self.order as u64).iter().all(|&(p, _)| {
            self.sylow(p)
                .and_then(|s| s.is_normal_in(self))
                .unwrap_or(false)
        })
    }

    pub fn is_abelian(&self) -> bool {
        let parent = &*self.parent;
        self.witnesses.iter().all(|&x| {
            self.witnesses
                .iter()
                .all(|&y| parent.mul(x, y) == parent.mul(y, x))
        })
    }

    /// Members whose order is coprime to `p`; a subgroup when `self` is
    /// nilpotent.
    pub fn p_prime_complement(&self, p: u64) -> Result<SubgroupSet> {
        if !arith::is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if !self.is_nilpotent() {
            return Err(Error::NotNilpotent);
        }
        let parent = &*self.parent;
        let members = Bits::from_ids(
            parent.order(),
            self.elements()
                .filter(|&x| !parent.element_order(x).expect("member id").is_multiple_of(p)),
        );
        let out = SubgroupSet::from_members(&self.parent, members)?;
        debug_assert_eq!(
            out.order as u64,
            self.order as u64 / arith::p_part(self.order as u64, p)
        );
        Ok(out)
    }
}

/// Derived series `G_1 = G, G_{i+1} = [G_i, G_i]`, stopped once stable.
#[derive(Clone, Debug)]
pub struct DerivedSeries {
    terms: Vec<SubgroupSet>,
}

impl DerivedSeries {
    pub fn of(group: &SubgroupSet) -> DerivedSeries {
        let mut terms = vec![group.clone()];
        loop {
            let next = terms.last().unwrap().derived_subgroup();
            if next.order == terms.last().unwrap().order {
                break;
            }
            terms.push(next);
        }
        DerivedSeries { terms }
    }

    pub fn terms(&self) -> &[SubgroupSet] {
        &self.terms
    }

    pub fn orders(&self) -> Vec<usize> {
        self.terms.iter().map(|t| t.order).collect()
    }

    pub fn is_solvable(&self) -> bool {
        self.terms.last().map(|t| t.is_trivial()).unwrap_or(true)
    }

    /// `G_3` trivial (or the series ended earlier at the trivial group).
    pub fn is_metabelian(&self) -> bool {
        self.is_solvable() && self.terms.len() <= 3
    }
}

pub fn derived_series(g: &Arc<GroupTable>) -> DerivedSeries {
    DerivedSeries::of(&SubgroupSet::whole(g))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub struct StructureFlags {
    pub is_abelian: bool,
    pub is_nilpotent: bool,
    pub is_metabelian: bool,
    pub is_solvable: bool,
}

pub fn structure_flags(g: &Arc<GroupTable>) -> StructureFlags {
    let series = derived_series(g);
    StructureFlags {
        is_abelian: g.is_abelian(),
        is_nilpotent: SubgroupSet::whole(g).is_nilpotent(),
        is_metabelian: series.is_metabelian(),
        is_solvable: series.is_solvable(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{parse_cycles, DEFAULT_ORDER_CAP};

    fn sym4() -> Arc<GroupTable> {
        let t = parse_cycles("(1,2)", 4).unwrap();
        let c = parse_cycles("(1,2,3,4)", 4).unwrap();
        Arc::new(GroupTable::from_permutations(4, &[t, c], DEFAULT_ORDER_CAP).unwrap())
    }

    fn cyclic(n: u32) -> Arc<GroupTable> {
        let gen: Vec<u32> = (0..n).map(|i| (i + 1) % n).collect();
        Arc::new(GroupTable::from_permutations(n as usize, &[gen], DEFAULT_ORDER_CAP).unwrap())
    }

    fn sub(g: &Arc<GroupTable>, labels: &[&str]) -> SubgroupSet {
        let ids: Vec<_> = labels.iter().map(|l| g.find_label(l).unwrap()).collect();
        SubgroupSet::closure(g, &ids).unwrap()
    }

    /// Independent closure: multiply all pairs until no new element appears.
    fn brute_closure(g: &GroupTable, seed: &[ElementId]) -> Vec<ElementId> {
        let mut set: std::collections::BTreeSet<ElementId> = seed.iter().copied().collect();
        set.insert(IDENTITY);
        loop {
            let cur: Vec<_> = set.iter().copied().collect();
            let before = set.len();
            for &a in &cur {
                for &b in &cur {
                    set.insert(g.mul(a, b));
                }
            }
            if set.len() == before {
                return cur;
            }
        }
    }

    #[test]
    fn closure_examples() {
        let g = sym4();
        assert_eq!(SubgroupSet::closure(&g, &[]).unwrap().order(), 1);
        assert_eq!(sub(&g, &["(1,2)"]).order(), 2);
        let s3 = sub(&g, &["(1,2)", "(1,2,3)"]);
        let seed = [g.find_label("(1,2)").unwrap(), g.find_label("(1,2,3)").unwrap()];
        assert_eq!(brute_closure(&g, &seed).len(), 6);
        assert_eq!(s3.elements().collect::<Vec<_>>(), brute_closure(&g, &seed));
    }

    #[test]
    fn intersections_and_indices() {
        let g = sym4();
        let a = sub(&g, &["(1,2)"]);
        let b = sub(&g, &["(3,4)"]);
        assert_eq!(a.intersect(&a).unwrap(), a);
        assert!(a.intersect(&b).unwrap().is_trivial());

        let a4 = SubgroupSet::whole(&g).derived_subgroup();
        assert_eq!(a4.order(), 12);
        let c3 = sub(&g, &["(1,2,3)"]);
        assert_eq!(c3.intersect(&a4).unwrap(), c3);
        assert_eq!(SubgroupSet::whole(&g).index_of(&a4).unwrap(), 2);
        assert_eq!(a.index_of(&a).unwrap(), 1);
        assert!(matches!(a.index_of(&b), Err(Error::NotContained)));
    }

    #[test]
    fn parent_mismatch_is_reported() {
        let g = sym4();
        let h = sym4();
        let a = SubgroupSet::trivial(&g);
        let b = SubgroupSet::trivial(&h);
        assert!(matches!(a.intersect(&b), Err(Error::ParentMismatch)));
    }

    #[test]
    fn product_with_klein_four_is_dihedral() {
        let g = sym4();
        let v4 = sub(&g, &["(1,2)(3,4)", "(1,3)(2,4)"]);
        let t = sub(&g, &["(1,2)"]);
        let vq = t.product_set(&v4).unwrap();
        assert_eq!(vq.order(), 8);
        // brute force pairwise products
        let mut brute = std::collections::BTreeSet::new();
        for a in t.elements() {
            for q in v4.elements() {
                brute.insert(g.mul(a, q));
            }
        }
        assert_eq!(vq.elements().collect::<std::collections::BTreeSet<_>>(), brute);
        assert_eq!(t.product_set(&SubgroupSet::trivial(&g)).unwrap(), t);
        assert_eq!(SubgroupSet::trivial(&g).product_set(&v4).unwrap(), v4);
        assert!(matches!(v4.product_set(&t), Err(Error::NotNormal)));
    }

    #[test]
    fn conjugation_and_normality() {
        let g = sym4();
        let t12 = sub(&g, &["(1,2)"]);
        let s23 = g.find_label("(2,3)").unwrap();
        assert_eq!(t12.conjugate(s23).unwrap(), sub(&g, &["(1,3)"]));
        assert_eq!(t12.conjugate(IDENTITY).unwrap(), t12);
        let whole = SubgroupSet::whole(&g);
        assert!(!t12.is_normal_in(&whole).unwrap());
        assert!(SubgroupSet::trivial(&g).is_normal_in(&t12).unwrap());
        let a4 = whole.derived_subgroup();
        assert!(a4.is_normal_in(&whole).unwrap());
        for x in 0..24 {
            assert_eq!(a4.conjugate(x).unwrap(), a4);
        }
        assert!(matches!(whole.is_normal_in(&t12), Err(Error::NotContained)));
    }

    #[test]
    fn normal_cores() {
        let g = sym4();
        assert!(sub(&g, &["(1,2)"]).normal_core().is_trivial());
        let d8 = sub(&g, &["(1,2)", "(3,4)", "(1,3)(2,4)"]);
        assert_eq!(d8.order(), 8);
        let v4 = sub(&g, &["(1,2)(3,4)", "(1,3)(2,4)"]);
        assert_eq!(d8.normal_core(), v4);
        assert_eq!(v4.normal_core(), v4);
    }

    #[test]
    fn derived_series_of_sym4_and_abelian() {
        assert_eq!(derived_series(&sym4()).orders(), vec![24, 12, 4, 1]);
        assert_eq!(derived_series(&cyclic(6)).orders(), vec![6, 1]);
    }

    #[test]
    fn sylow_subgroups() {
        let g = sym4();
        let whole = SubgroupSet::whole(&g);
        assert_eq!(whole.sylow(2).unwrap().order(), 8);
        assert_eq!(whole.sylow(3).unwrap().order(), 3);
        assert!(whole.sylow(5).unwrap().is_trivial());
        let a4 = whole.derived_subgroup();
        let v4 = a4.sylow(2).unwrap();
        assert_eq!(v4, sub(&g, &["(1,2)(3,4)", "(1,3)(2,4)"]));
        assert!(v4.is_normal_in(&whole).unwrap());
        assert!(matches!(whole.sylow(4), Err(Error::NotPrime(4))));
    }

    #[test]
    fn flags_for_small_groups() {
        let c6 = structure_flags(&cyclic(6));
        assert!(c6.is_abelian && c6.is_nilpotent && c6.is_metabelian && c6.is_solvable);
        let s4 = structure_flags(&sym4());
        assert!(s4.is_solvable && !s4.is_metabelian && !s4.is_nilpotent && !s4.is_abelian);
    }

    #[test]
    fn p_prime_complements() {
        let c12 = cyclic(12);
        let whole = SubgroupSet::whole(&c12);
        let comp = whole.p_prime_complement(2).unwrap();
        assert_eq!(comp.order(), 3);
        assert_eq!(whole.p_prime_complement(5).unwrap(), whole);
        let c8 = SubgroupSet::whole(&cyclic(8));
        assert!(c8.p_prime_complement(2).unwrap().is_trivial());
        let s4 = SubgroupSet::whole(&sym4());
        assert!(matches!(s4.p_prime_complement(2), Err(Error::NotNilpotent)));
    }

    #[test]
    fn from_members_rejects_non_subgroups() {
        let g = sym4();
        let t = g.find_label("(1,2)").unwrap();
        let u = g.find_label("(2,3)").unwrap();
        let bits = Bits::from_ids(24, [IDENTITY, t, u]);
        assert!(SubgroupSet::from_members(&g, bits).is_err());
        let bits = Bits::from_ids(24, [IDENTITY, t]);
        assert_eq!(SubgroupSet::from_members(&g, bits).unwrap().order(), 2);
    }
}
