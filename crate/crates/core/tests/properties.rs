mod common;

use std::sync::{Arc, OnceLock};

use proptest::prelude::*;

use commgraph::arith::{p_part, p_power_exponent, primes_up_to};
use commgraph::commgraph::commensurability_exponents;
use commgraph::constructions::{bs, perm4, BsCoordinates};
use commgraph::verify::{Corpus, CorpusData};
use commgraph::{construct, GroupSpec, GroupTable, SubgroupSet, DEFAULT_LATTICE_CAP, DEFAULT_ORDER_CAP};

fn corpus() -> &'static CorpusData {
    static DATA: OnceLock<CorpusData> = OnceLock::new();
    DATA.get_or_init(|| CorpusData::build(&Corpus::default(), DEFAULT_ORDER_CAP, DEFAULT_LATTICE_CAP).unwrap())
}

/// (group index, subgroup indices) with indices reduced modulo the lattice size.
fn pick(n: usize) -> impl Strategy<Value = (usize, Vec<usize>)> {
    (0..corpus().groups.len(), proptest::collection::vec(any::<usize>(), n))
}

fn subgroup(gi: usize, raw: usize) -> &'static SubgroupSet {
    let l = &corpus().groups[gi].lattice;
    l.get(raw % l.len())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn commensurability_index_is_symmetric((gi, ix) in pick(2)) {
        let (a, b) = (subgroup(gi, ix[0]), subgroup(gi, ix[1]));
        let k = a.intersect(b).unwrap();
        let forward = a.index_of(&k).unwrap() * b.index_of(&k).unwrap();
        let backward = b.index_of(&k).unwrap() * a.index_of(&k).unwrap();
        prop_assert_eq!(forward, backward);
        prop_assert_eq!(forward == 1, a == b);
        for p in primes_up_to(13) {
            let ab = commensurability_exponents(a, b, p).unwrap();
            let ba = commensurability_exponents(b, a, p).unwrap();
            prop_assert_eq!(ab, ba.map(|(x, y)| (y, x)));
        }
    }

    #[test]
    fn product_order_formula((gi, ix) in pick(2)) {
        let g = &corpus().groups[gi];
        let normals = g.lattice.normal_indices();
        let v = subgroup(gi, ix[0]);
        let q = g.lattice.get(normals[ix[1] % normals.len()]);
        let vq = v.product_set(q).unwrap();
        prop_assert_eq!(vq.order() * v.intersect(q).unwrap().order(), v.order() * q.order());
        prop_assert!(v.is_subgroup_of(&vq) && q.is_subgroup_of(&vq));
        prop_assert!(g.lattice.position_of(&vq).is_some());
    }

    #[test]
    fn index_is_multiplicative((gi, ix) in pick(3)) {
        // build a chain A ⊆ B ⊆ C from three random subgroups
        let g = &corpus().groups[gi];
        let c = subgroup(gi, ix[0]);
        let b = subgroup(gi, ix[1]).intersect(c).unwrap();
        let a = subgroup(gi, ix[2]).intersect(&b).unwrap();
        let whole = c.index_of(&a).unwrap();
        prop_assert_eq!(whole, c.index_of(&b).unwrap() * b.index_of(&a).unwrap());
        prop_assert!(g.lattice.position_of(&a).is_some());
    }

    #[test]
    fn nilpotent_subgroups_split((gi, ix) in pick(1), pi in 0usize..6) {
        let h = subgroup(gi, ix[0]);
        prop_assume!(h.is_nilpotent());
        let p = primes_up_to(13)[pi];
        let s = h.sylow(p).unwrap();
        let c = h.p_prime_complement(p).unwrap();
        prop_assert_eq!(s.intersect(&c).unwrap().order(), 1);
        // c is normal in h, not necessarily in the whole group
        let gens: Vec<u32> = s.witnesses().iter().chain(c.witnesses()).copied().collect();
        prop_assert_eq!(&SubgroupSet::closure(h.parent(), &gens).unwrap(), h);
        prop_assert_eq!(s.order() * c.order(), h.order());
        prop_assert_eq!(c.order() as u64, h.order() as u64 / p_part(h.order() as u64, p));
    }

    #[test]
    fn sylow_of_random_subgroup((gi, ix) in pick(1), pi in 0usize..6) {
        let h = subgroup(gi, ix[0]);
        let p = primes_up_to(13)[pi];
        let s = h.sylow(p).unwrap();
        prop_assert!(s.is_subgroup_of(h));
        prop_assert_eq!(s.order() as u64, p_part(h.order() as u64, p));
        prop_assert!(p_power_exponent(s.order() as u64, p).is_some());
    }

    #[test]
    fn normal_core_is_normal_and_contained((gi, ix) in pick(1)) {
        let g = &corpus().groups[gi];
        let h = subgroup(gi, ix[0]);
        let core = h.normal_core();
        prop_assert!(core.is_subgroup_of(h));
        prop_assert!(core.is_normal_in(&SubgroupSet::whole(&g.table)).unwrap());
    }

    #[test]
    fn group_axioms_on_random_triples(gi in 0usize..27, a in any::<u32>(), b in any::<u32>(), c in any::<u32>()) {
        let g = &corpus().groups[gi % corpus().groups.len()].table;
        let n = g.order() as u32;
        let (a, b, c) = (a % n, b % n, c % n);
        prop_assert_eq!(g.mul(g.mul(a, b), c), g.mul(a, g.mul(b, c)));
        prop_assert_eq!(g.mul(a, g.inv(a)), 0);
        prop_assert_eq!(g.mul(0, a), a);
        prop_assert_eq!(g.commutator(a, b), g.mul(g.mul(a, b), g.mul(g.inv(a), g.inv(b))));
    }
}

#[test]
fn sylow_orders_for_every_corpus_group_and_prime() {
    for g in &corpus().groups {
        let whole = SubgroupSet::whole(&g.table);
        for p in primes_up_to(g.order().max(2) as u64) {
            let s = whole.sylow(p).unwrap();
            assert_eq!(s.order() as u64, p_part(g.order() as u64, p), "{} p={p}", g.name);
        }
    }
}

#[test]
fn derived_series_terms_shrink_and_are_normal() {
    for g in &corpus().groups {
        let whole = SubgroupSet::whole(&g.table);
        let terms = g.series.terms();
        assert_eq!(terms[0].order(), g.order());
        for w in terms.windows(2) {
            assert!(w[1].order() < w[0].order(), "{}", g.name);
            assert!(w[1].is_subgroup_of(&w[0]));
        }
        for t in terms {
            assert!(t.is_normal_in(&whole).unwrap(), "{}", g.name);
        }
    }
}

#[test]
fn subgroup_counts_match_reference_lattices() {
    for (spec, reference) in [
        (GroupSpec::Sym(3), common::sym(3).0),
        (GroupSpec::Sym(4), common::sym(4).0),
        (GroupSpec::Dihedral(6), common::dihedral(6)),
        (GroupSpec::Abelian(vec![2, 4]), common::product(&[2, 4])),
        (GroupSpec::Abelian(vec![3, 3]), common::product(&[3, 3])),
        (GroupSpec::Cyclic(12), common::cyclic(12)),
        (GroupSpec::P2q(3), common::p2q(3).0),
    ] {
        let g = corpus().find(&spec).unwrap();
        let ours: std::collections::BTreeMap<usize, usize> =
            g.lattice.by_order().iter().map(|(&o, v)| (o, v.len())).collect();
        assert_eq!(ours, common::order_profile(&reference.subgroups()), "{spec}");
    }
}

fn bs_z3() -> &'static (Arc<GroupTable>, BsCoordinates) {
    static G: OnceLock<(Arc<GroupTable>, BsCoordinates)> = OnceLock::new();
    G.get_or_init(|| {
        let h = construct(&GroupSpec::Cyclic(3), DEFAULT_ORDER_CAP).unwrap();
        let (g, coords) = bs(&h, DEFAULT_ORDER_CAP).unwrap();
        (Arc::new(g), coords)
    })
}

#[test]
fn bs_base_subgroup_is_normal_with_index_24() {
    let (g, coords) = bs_z3();
    assert_eq!(g.order(), 1944);
    let id = perm4("()").unwrap();
    let base: Vec<u32> = (0..4)
        .map(|slot| {
            let mut slots = [0; 4];
            slots[slot] = 1;
            coords.id(slots, id).unwrap()
        })
        .collect();
    let delta = SubgroupSet::closure(g, &base).unwrap();
    assert_eq!(delta.order(), 81);
    let whole = SubgroupSet::whole(g);
    assert!(delta.is_normal_in(&whole).unwrap());
    assert_eq!(whole.index_of(&delta).unwrap(), 24);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    /// Coordinates multiply as (u, σ)(v, τ) = (u · σ(v), στ).
    #[test]
    fn bs_multiplication_matches_coordinates(a in 0u32..1944, b in 0u32..1944) {
        let (g, coords) = bs_z3();
        let x = coords.element(a).clone();
        let y = coords.element(b).clone();
        let xy = coords.element(g.mul(a, b));
        // σ moves coordinate i to σ(i)
        let mut moved = [0u32; 4];
        for i in 0..4 {
            moved[x.perm[i] as usize] = y.slots[i];
        }
        for (i, m) in moved.iter().enumerate() {
            prop_assert_eq!(xy.slots[i], (x.slots[i] + m) % 3);
        }
        prop_assert_eq!(xy.perm, commgraph::constructions::compose4(&x.perm, &y.perm));
    }
}
