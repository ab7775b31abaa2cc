//! Finite groups stored as dense multiplication tables.
//!
//! Element ids are `u32` in `[0, order)`, the identity is always id 0, and ids
//! are handed out in breadth-first order from the identity, multiplying on the
//! right by the generators in the order they were supplied.

use std::collections::HashMap;
use std::fmt;
use std::hash::Hash;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith;
use crate::error::{Error, Result};

pub type ElementId = u32;

pub const IDENTITY: ElementId = 0;

/// Default bound on materialized group orders.
pub const DEFAULT_ORDER_CAP: usize = 5000;

/// Orders up to this size get an exhaustive associativity check.
const EXHAUSTIVE_ASSOC_LIMIT: usize = 512;

#[derive(Clone)]
pub struct GroupTable {
    order: usize,
    mult: Vec<ElementId>,
    inv: Vec<ElementId>,
    labels: Vec<String>,
    generators: Vec<ElementId>,
    factorization: Vec<(u64, u32)>,
}

impl fmt::Debug for GroupTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GroupTable")
            .field("order", &self.order)
            .field("generators", &self.generators)
            .finish_non_exhaustive()
    }
}

impl GroupTable {
    /// Materializes the closure of `gens` under `mul`.
    ///
    /// Ids follow BFS from `identity`; the full table is filled column by
    /// column from the right-multiplication table, so `mul` is only called
    /// `order * gens.len()` times.
    pub fn from_closure<E, M, L>(
        identity: E,
        gens: &[E],
        mul: M,
        label: L,
        cap: usize,
    ) -> Result<GroupTable>
    where
        E: Clone + Eq + Hash,
        M: Fn(&E, &E) -> E,
        L: Fn(&E) -> String,
    {
        let k = gens.len();
        let mut elements = vec![identity.clone()];
        let mut index: HashMap<E, ElementId> = HashMap::from([(identity, IDENTITY)]);
        let mut right: Vec<ElementId> = Vec::new();
        // how each non-identity element was first reached: parent * gens[via]
        let mut parent = vec![IDENTITY];
        let mut via = vec![usize::MAX];

        let mut head = 0;
        while head < elements.len() {
            for (g, gen) in gens.iter().enumerate() {
                let y = mul(&elements[head], gen);
                let id = match index.get(&y) {
                    Some(&id) => id,
                    None => {
                        if elements.len() >= cap {
                            return Err(Error::OrderCapExceeded {
                                order: cap as u128 + 1,
                                cap,
                            });
                        }
                        let id = elements.len() as ElementId;
                        index.insert(y.clone(), id);
                        elements.push(y);
                        parent.push(head as ElementId);
                        via.push(g);
                        id
                    }
                };
                right.push(id);
            }
            head += 1;
        }

        let n = elements.len();
        let mut mult = vec![IDENTITY; n * n];
        for i in 0..n {
            let row = &mut mult[i * n..(i + 1) * n];
            row[0] = i as ElementId;
            for j in 1..n {
                let prefix = row[parent[j] as usize] as usize;
                row[j] = right[prefix * k + via[j]];
            }
        }

        let labels = elements.iter().map(label).collect();
        let mut generators: Vec<ElementId> = gens
            .iter()
            .map(|g| index[g])
            .filter(|&id| id != IDENTITY)
            .collect();
        dedup_in_place(&mut generators);
        Ok(GroupTable::assemble(mult, labels, generators))
    }

    /// Builds a group from an explicit table and checks every table invariant.
    pub fn from_table(mult: Vec<Vec<ElementId>>, labels: Option<Vec<String>>) -> Result<GroupTable> {
        let n = mult.len();
        if n == 0 {
            return Err(Error::InvalidTable("empty table".into()));
        }
        if mult.iter().any(|row| row.len() != n) {
            return Err(Error::InvalidTable("table is not square".into()));
        }
        let labels = match labels {
            Some(l) if l.len() != n => {
                return Err(Error::InvalidTable(format!(
                    "{} labels for {} elements",
                    l.len(),
                    n
                )))
            }
            Some(l) => l,
            None => (0..n).map(|i| i.to_string()).collect(),
        };
        let flat: Vec<ElementId> = mult.into_iter().flatten().collect();
        if let Some(&bad) = flat.iter().find(|&&x| x as usize >= n) {
            return Err(Error::InvalidTable(format!("entry {bad} out of range")));
        }
        for x in 0..n {
            if flat[x] as usize != x || flat[x * n] as usize != x {
                return Err(Error::InvalidTable("id 0 is not the identity".into()));
            }
        }
        for x in 0..n {
            let mut seen = vec![false; n];
            for &y in &flat[x * n..(x + 1) * n] {
                if std::mem::replace(&mut seen[y as usize], true) {
                    return Err(Error::InvalidTable(format!("row {x} repeats {y}")));
                }
            }
        }
        let mut table = GroupTable::assemble(flat, labels, Vec::new());
        table.check_invariants()?;
        table.generators = table.greedy_generators((0..n as ElementId).collect::<Vec<_>>());
        Ok(table)
    }

    pub fn from_permutations(degree: usize, gens: &[Vec<u32>], cap: usize) -> Result<GroupTable> {
        for g in gens {
            validate_permutation(degree, g)?;
        }
        let identity: Vec<u32> = (0..degree as u32).collect();
        GroupTable::from_closure(
            identity,
            gens,
            |x, y| compose(x, y),
            |x| cycle_notation(x),
            cap,
        )
    }

    pub fn from_upper_triangular(q: u32, gens: &[UpperTriangular], cap: usize) -> Result<GroupTable> {
        if !arith::is_prime(q as u64) {
            return Err(Error::NotPrime(q as u64));
        }
        for g in gens {
            if g.a % q == 0 || g.d % q == 0 || g.a >= q || g.b >= q || g.d >= q {
                return Err(Error::InvalidGenerator(format!(
                    "{g} is not a reduced invertible matrix mod {q}"
                )));
            }
        }
        GroupTable::from_closure(
            UpperTriangular::IDENTITY,
            gens,
            |x, y| x.mul(y, q),
            |x| x.to_string(),
            cap,
        )
    }

    fn assemble(mult: Vec<ElementId>, labels: Vec<String>, generators: Vec<ElementId>) -> GroupTable {
        let n = labels.len();
        let mut inv = vec![IDENTITY; n];
        for x in 0..n {
            let row = &mult[x * n..(x + 1) * n];
            inv[x] = row.iter().position(|&y| y == IDENTITY).expect("row without identity")
                as ElementId;
        }
        GroupTable {
            order: n,
            mult,
            inv,
            labels,
            generators,
            factorization: arith::factorize(n as u64),
        }
    }

    /// Checks identity, inverse, range and associativity invariants.
    /// Associativity is exhaustive up to order 512 and sampled on `10 n^2`
    /// seeded random triples above that.
    pub fn check_invariants(&self) -> Result<()> {
        let n = self.order;
        if self.mult.iter().any(|&x| x as usize >= n) {
            return Err(Error::InvalidTable("entry out of range".into()));
        }
        for x in 0..n as ElementId {
            if self.mul(IDENTITY, x) != x || self.mul(x, IDENTITY) != x {
                return Err(Error::InvalidTable("id 0 is not the identity".into()));
            }
            if self.mul(x, self.inv(x)) != IDENTITY {
                return Err(Error::InvalidTable(format!("bad inverse for {x}")));
            }
        }
        let assoc = |a: ElementId, b: ElementId, c: ElementId| {
            self.mul(self.mul(a, b), c) == self.mul(a, self.mul(b, c))
        };
        if n <= EXHAUSTIVE_ASSOC_LIMIT {
            for a in 0..n as ElementId {
                for b in 0..n as ElementId {
                    let ab = self.mul(a, b);
                    let row_ab = self.row(ab);
                    let row_b = self.row(b);
                    let row_a = self.row(a);
                    for c in 0..n {
                        if row_ab[c] != row_a[row_b[c] as usize] {
                            return Err(Error::InvalidTable(format!(
                                "not associative at ({a}, {b}, {c})"
                            )));
                        }
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_a550c);
            for _ in 0..10 * n * n {
                let a = rng.gen_range(0..n) as ElementId;
                let b = rng.gen_range(0..n) as ElementId;
                let c = rng.gen_range(0..n) as ElementId;
                if !assoc(a, b, c) {
                    return Err(Error::InvalidTable(format!(
                        "not associative at ({a}, {b}, {c})"
                    )));
                }
            }
        }
        let back: u64 = self.factorization.iter().map(|&(p, e)| p.pow(e)).product();
        if back != n as u64 {
            return Err(Error::InvalidTable("factorization mismatch".into()));
        }
        Ok(())
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn mul(&self, a: ElementId, b: ElementId) -> ElementId {
        self.mult[a as usize * self.order + b as usize]
    }

    #[inline]
    pub fn inv(&self, a: ElementId) -> ElementId {
        self.inv[a as usize]
    }

    #[inline]
    pub fn row(&self, a: ElementId) -> &[ElementId] {
        &self.mult[a as usize * self.order..(a as usize + 1) * self.order]
    }

    /// `g a g^-1`
    #[inline]
    pub fn conjugate(&self, a: ElementId, g: ElementId) -> ElementId {
        self.mul(self.mul(g, a), self.inv(g))
    }

    /// `[x, y] = x y x^-1 y^-1`
    #[inline]
    pub fn commutator(&self, x: ElementId, y: ElementId) -> ElementId {
        self.mul(self.mul(x, y), self.mul(self.inv(x), self.inv(y)))
    }

    pub fn pow(&self, x: ElementId, mut k: u64) -> ElementId {
        let mut base = x;
        let mut acc = IDENTITY;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            k >>= 1;
        }
        acc
    }

    pub fn element_order(&self, x: ElementId) -> Result<u64> {
        self.check_id(x)?;
        let mut k = 1;
        let mut y = x;
        while y != IDENTITY {
            y = self.mul(y, x);
            k += 1;
        }
        Ok(k)
    }

    pub fn check_id(&self, x: ElementId) -> Result<()> {
        if (x as usize) < self.order {
            Ok(())
        } else {
            Err(Error::InvalidElement {
                id: x,
                order: self.order,
            })
        }
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, x: ElementId) -> &str {
        &self.labels[x as usize]
    }

    pub fn find_label(&self, label: &str) -> Option<ElementId> {
        self.labels.iter().position(|l| l == label).map(|i| i as ElementId)
    }

    /// Generator ids recorded at construction (identity and repeats removed).
    pub fn generators(&self) -> &[ElementId] {
        &self.generators
    }

    pub fn order_factorization(&self) -> &[(u64, u32)] {
        &self.factorization
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order as ElementId;
        (0..n).all(|a| (a + 1..n).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Ascending scan of `candidates`, keeping each one not already in the
    /// closure of those kept so far.
    pub(crate) fn greedy_generators(&self, candidates: impl IntoIterator<Item = ElementId>) -> Vec<ElementId> {
        let mut kept = Vec::new();
        let mut span = crate::bits::Bits::from_ids(self.order, [IDENTITY]);
        for x in candidates {
            if !span.contains(x) {
                kept.push(x);
                span = crate::subgroup::close_generated(self, &kept);
            }
        }
        kept
    }
}

fn dedup_in_place(ids: &mut Vec<ElementId>) {
    let mut seen = std::collections::HashSet::new();
    ids.retain(|id| seen.insert(*id));
}

fn validate_permutation(degree: usize, images: &[u32]) -> Result<()> {
    if images.len() != degree {
        return Err(Error::InvalidGenerator(format!(
            "permutation {images:?} has length {} on {degree} points",
            images.len()
        )));
    }
    let mut seen = vec![false; degree];
    for &x in images {
        if x as usize >= degree || std::mem::replace(&mut seen[x as usize], true) {
            return Err(Error::InvalidGenerator(format!("{images:?} is not a permutation")));
        }
    }
    Ok(())
}

/// `(x * y)(i) = x(y(i))`: apply `y` first.
pub fn compose(x: &[u32], y: &[u32]) -> Vec<u32> {
    y.iter().map(|&i| x[i as usize]).collect()
}

/// Canonical 1-based cycle notation, e.g. `(1,2)(3,4)`; the identity is `()`.
pub fn cycle_notation(images: &[u32]) -> String {
    let mut seen = vec![false; images.len()];
    let mut out = String::new();
    for start in 0..images.len() {
        if seen[start] || images[start] as usize == start {
            continue;
        }
        let mut cycle = Vec::new();
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            cycle.push((i + 1).to_string());
            i = images[i] as usize;
        }
        out.push('(');
        out.push_str(&cycle.join(","));
        out.push(')');
    }
    if out.is_empty() {
        out.push_str("()");
    }
    out
}

/// Parses 1-based cycle notation like `(1,2)(3,4)` into an image vector.
pub fn parse_cycles(text: &str, degree: usize) -> Result<Vec<u32>> {
    let mut images: Vec<u32> = (0..degree as u32).collect();
    let bad = || Error::InvalidGenerator(format!("cannot parse cycle notation {text:?}"));
    let trimmed: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let mut rest = trimmed.as_str();
    // cycles compose right to left like permutation products
    let mut cycles = Vec::new();
    while !rest.is_empty() {
        let body = rest.strip_prefix('(').ok_or_else(bad)?;
        let close = body.find(')').ok_or_else(bad)?;
        let points: Vec<u32> = if body[..close].is_empty() {
            Vec::new()
        } else {
            body[..close]
                .split(',')
                .map(|s| s.parse::<u32>().map_err(|_| bad()))
                .collect::<Result<_>>()?
        };
        if points.iter().any(|&x| x == 0 || x as usize > degree) {
            return Err(bad());
        }
        cycles.push(points);
        rest = &body[close + 1..];
    }
    for points in cycles.iter().rev() {
        let mut cycle: Vec<u32> = (0..degree as u32).collect();
        for (i, &x) in points.iter().enumerate() {
            let next = points[(i + 1) % points.len()];
            cycle[x as usize - 1] = next - 1;
        }
        images = compose(&cycle, &images);
    }
    validate_permutation(degree, &images)?;
    Ok(images)
}

/// Upper-triangular matrix `[[a, b], [0, d]]` over the integers mod q.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct UpperTriangular {
    pub a: u32,
    pub b: u32,
    pub d: u32,
}

impl UpperTriangular {
    pub const IDENTITY: UpperTriangular = UpperTriangular { a: 1, b: 0, d: 1 };

    pub fn new(a: u32, b: u32, d: u32) -> UpperTriangular {
        UpperTriangular { a, b, d }
    }

    pub fn mul(&self, other: &UpperTriangular, q: u32) -> UpperTriangular {
        let q = q as u64;
        let (a, b, d) = (self.a as u64, self.b as u64, self.d as u64);
        let (a2, b2, d2) = (other.a as u64, other.b as u64, other.d as u64);
        UpperTriangular {
            a: (a * a2 % q) as u32,
            b: ((a * b2 + b * d2) % q) as u32,
            d: (d * d2 % q) as u32,
        }
    }
}

impl fmt::Display for UpperTriangular {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.a, self.b, self.d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sym4() -> GroupTable {
        let t = parse_cycles("(1,2)", 4).unwrap();
        let c = parse_cycles("(1,2,3,4)", 4).unwrap();
        GroupTable::from_permutations(4, &[t, c], DEFAULT_ORDER_CAP).unwrap()
    }

    #[test]
    fn sym4_from_transposition_and_four_cycle() {
        let g = sym4();
        assert_eq!(g.order(), 24);
        assert_eq!(g.label(IDENTITY), "()");
        g.check_invariants().unwrap();
        assert_eq!(g.order_factorization(), &[(2, 3), (3, 1)]);
        let four_cycle = g.find_label("(1,2,3,4)").unwrap();
        assert_eq!(g.element_order(four_cycle).unwrap(), 4);
        assert_eq!(g.element_order(IDENTITY).unwrap(), 1);
        assert!(!g.is_abelian());
    }

    #[test]
    fn empty_generators_give_trivial_group() {
        let g = GroupTable::from_permutations(3, &[], DEFAULT_ORDER_CAP).unwrap();
        assert_eq!(g.order(), 1);
        assert!(g.generators().is_empty());
    }

    #[test]
    fn malformed_generators_are_rejected() {
        assert!(matches!(
            GroupTable::from_permutations(3, &[vec![0, 0, 1]], 100),
            Err(Error::InvalidGenerator(_))
        ));
        assert!(matches!(
            GroupTable::from_permutations(3, &[vec![0, 1]], 100),
            Err(Error::InvalidGenerator(_))
        ));
        assert!(matches!(
            GroupTable::from_upper_triangular(5, &[UpperTriangular::new(0, 1, 1)], 100),
            Err(Error::InvalidGenerator(_))
        ));
        assert!(matches!(
            GroupTable::from_upper_triangular(6, &[], 100),
            Err(Error::NotPrime(6))
        ));
    }

    #[test]
    fn order_cap_is_enforced() {
        let t = parse_cycles("(1,2)", 5).unwrap();
        let c = parse_cycles("(1,2,3,4,5)", 5).unwrap();
        assert!(matches!(
            GroupTable::from_permutations(5, &[t, c], 100),
            Err(Error::OrderCapExceeded { cap: 100, .. })
        ));
    }

    #[test]
    fn all_invertible_upper_triangular_mod_5() {
        let mut gens = Vec::new();
        for a in 1..5 {
            for b in 0..5 {
                for d in 1..5 {
                    gens.push(UpperTriangular::new(a, b, d));
                }
            }
        }
        let g = GroupTable::from_upper_triangular(5, &gens, DEFAULT_ORDER_CAP).unwrap();
        assert_eq!(g.order(), 80);
        let b = g.find_label("(1,1,1)").unwrap();
        assert_eq!(g.element_order(b).unwrap(), 5);
    }

    #[test]
    fn explicit_table_round_trip() {
        // Z/3
        let t = vec![vec![0, 1, 2], vec![1, 2, 0], vec![2, 0, 1]];
        let g = GroupTable::from_table(t, None).unwrap();
        assert_eq!(g.order(), 3);
        assert_eq!(g.inv(1), 2);
        assert_eq!(g.generators(), &[1]);

        let not_assoc = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        assert!(matches!(
            GroupTable::from_table(not_assoc, None),
            Err(Error::InvalidTable(_))
        ));
        assert!(GroupTable::from_table(vec![vec![0, 1], vec![1, 1]], None).is_err());
    }

    #[test]
    fn cycle_notation_round_trip() {
        for text in ["()", "(1,2)", "(1,3,2)", "(1,2)(3,4)", "(1,4,3,2)"] {
            let p = parse_cycles(text, 4).unwrap();
            assert_eq!(cycle_notation(&p), text);
        }
        // (1,2)(2,3): apply (2,3) first
        let p = parse_cycles("(1,2)(2,3)", 3).unwrap();
        assert_eq!(cycle_notation(&p), "(1,2,3)");
    }
}
