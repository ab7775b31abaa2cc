//! Declarative group specs and the builders behind them.
//!
//! A spec document is a JSON object with exactly one key, e.g. `{"sym": 4}`,
//! `{"bs": {"cyclic": 3}}` or `{"direct": [{"cyclic": 2}, {"cyclic": 2}]}`.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith;
use crate::error::{Error, Result};
use crate::group::{cycle_notation, ElementId, GroupTable, UpperTriangular};

pub const MAX_SPEC_DEPTH: usize = 4;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GroupSpec {
    Sym(u32),
    Cyclic(u32),
    Dihedral(u32),
    Abelian(Vec<u32>),
    Direct(Vec<GroupSpec>),
    P2q(u32),
    Bs(Box<GroupSpec>),
}

impl GroupSpec {
    pub fn parse(text: &str) -> Result<GroupSpec> {
        let spec: GroupSpec = serde_json::from_str(text).map_err(|e| {
            use serde_json::error::Category;
            match e.classify() {
                Category::Data => Error::InvalidSpec(e.to_string()),
                _ => Error::Syntax {
                    message: e.to_string(),
                    line: e.line(),
                    column: e.column(),
                },
            }
        })?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("spec serializes")
    }

    pub fn depth(&self) -> usize {
        match self {
            GroupSpec::Direct(parts) => 1 + parts.iter().map(GroupSpec::depth).max().unwrap_or(0),
            GroupSpec::Bs(inner) => 1 + inner.depth(),
            _ => 1,
        }
    }

    /// Checks parameter ranges and nesting depth (not the order cap).
    pub fn validate(&self) -> Result<()> {
        if self.depth() > MAX_SPEC_DEPTH {
            return Err(Error::InvalidSpec(format!(
                "nesting depth {} exceeds {MAX_SPEC_DEPTH}",
                self.depth()
            )));
        }
        self.validate_params()
    }

    fn validate_params(&self) -> Result<()> {
        let positive = |n: u32, what: &str| {
            if n == 0 {
                Err(Error::InvalidSpec(format!("{what} parameter must be at least 1")))
            } else {
                Ok(())
            }
        };
        match self {
            GroupSpec::Sym(n) => positive(*n, "sym"),
            GroupSpec::Cyclic(n) => positive(*n, "cyclic"),
            GroupSpec::Dihedral(n) => positive(*n, "dihedral"),
            GroupSpec::Abelian(ns) => ns.iter().try_for_each(|&n| positive(n, "abelian")),
            GroupSpec::Direct(parts) => parts.iter().try_for_each(GroupSpec::validate_params),
            GroupSpec::P2q(q) => {
                if arith::is_prime(*q as u64) {
                    Ok(())
                } else {
                    Err(Error::InvalidSpec(format!("p2q parameter {q} is not prime")))
                }
            }
            GroupSpec::Bs(inner) => inner.validate_params(),
        }
    }

    /// Order from the cardinality formulas, saturating at `u128::MAX`.
    pub fn predicted_order(&self) -> u128 {
        match self {
            GroupSpec::Sym(n) => (1..=*n as u128).fold(1u128, |acc, k| acc.saturating_mul(k)),
            GroupSpec::Cyclic(n) => *n as u128,
            GroupSpec::Dihedral(n) => 2 * *n as u128,
            GroupSpec::Abelian(ns) => ns.iter().fold(1u128, |acc, &n| acc.saturating_mul(n as u128)),
            GroupSpec::Direct(parts) => parts
                .iter()
                .fold(1u128, |acc, s| acc.saturating_mul(s.predicted_order())),
            GroupSpec::P2q(q) => {
                let q = *q as u128;
                q * (q - 1) * (q - 1)
            }
            GroupSpec::Bs(inner) => {
                let h = inner.predicted_order();
                24u128.saturating_mul(h.saturating_pow(4))
            }
        }
    }

    pub fn contains_bs(&self) -> bool {
        match self {
            GroupSpec::Bs(_) => true,
            GroupSpec::Direct(parts) => parts.iter().any(GroupSpec::contains_bs),
            _ => false,
        }
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |ns: &[u32]| ns.iter().map(u32::to_string).collect::<Vec<_>>().join(",");
        match self {
            GroupSpec::Sym(n) => write!(f, "sym({n})"),
            GroupSpec::Cyclic(n) => write!(f, "cyclic({n})"),
            GroupSpec::Dihedral(n) => write!(f, "dihedral({n})"),
            GroupSpec::Abelian(ns) => write!(f, "abelian([{}])", list(ns)),
            GroupSpec::Direct(parts) => {
                let inner: Vec<String> = parts.iter().map(|p| p.to_string()).collect();
                write!(f, "direct([{}])", inner.join(","))
            }
            GroupSpec::P2q(q) => write!(f, "p2q({q})"),
            GroupSpec::Bs(inner) => write!(f, "bs({inner})"),
        }
    }
}

pub fn parse_group_spec(text: &str) -> Result<GroupSpec> {
    GroupSpec::parse(text)
}

/// Builds the table for `spec`, refusing before materialization when the
/// predicted order exceeds `cap`.
pub fn construct(spec: &GroupSpec, cap: usize) -> Result<GroupTable> {
    spec.validate()?;
    let predicted = spec.predicted_order();
    if predicted > cap as u128 {
        return Err(Error::OrderCapExceeded {
            order: predicted,
            cap,
        });
    }
    build(spec, cap)
}

fn build(spec: &GroupSpec, cap: usize) -> Result<GroupTable> {
    match spec {
        GroupSpec::Sym(n) => symmetric(*n as usize, cap),
        GroupSpec::Cyclic(n) => cyclic(*n, cap),
        GroupSpec::Dihedral(n) => dihedral(*n, cap),
        GroupSpec::Abelian(ns) => {
            let factors = ns.iter().map(|&n| cyclic(n, cap)).collect::<Result<Vec<_>>>()?;
            direct_product(&factors, cap)
        }
        GroupSpec::Direct(parts) => {
            let factors = parts.iter().map(|s| build(s, cap)).collect::<Result<Vec<_>>>()?;
            direct_product(&factors, cap)
        }
        GroupSpec::P2q(q) => upper_triangular(*q, cap),
        GroupSpec::Bs(inner) => Ok(bs(&build(inner, cap)?, cap)?.0),
    }
}

pub fn symmetric(n: usize, cap: usize) -> Result<GroupTable> {
    let mut gens = Vec::new();
    if n >= 2 {
        let mut t: Vec<u32> = (0..n as u32).collect();
        t.swap(0, 1);
        gens.push(t);
    }
    if n >= 3 {
        gens.push((0..n as u32).map(|i| (i + 1) % n as u32).collect());
    }
    GroupTable::from_permutations(n, &gens, cap)
}

pub fn cyclic(n: u32, cap: usize) -> Result<GroupTable> {
    let gens: Vec<u32> = if n > 1 { vec![1] } else { Vec::new() };
    GroupTable::from_closure(0u32, &gens, |a, b| (a + b) % n, |a| a.to_string(), cap)
}

/// Symmetries of the n-gon as pairs `r^k s^e`.
pub fn dihedral(n: u32, cap: usize) -> Result<GroupTable> {
    let gens = [(1 % n, 0u32), (0, 1)];
    GroupTable::from_closure(
        (0u32, 0u32),
        &gens,
        |&(k1, e1), &(k2, e2)| {
            let k2 = if e1 == 1 { (n - k2) % n } else { k2 };
            ((k1 + k2) % n, (e1 + e2) % 2)
        },
        |&(k, e)| {
            let rot = match k {
                0 => String::new(),
                1 => "r".to_string(),
                k => format!("r^{k}"),
            };
            match (rot.is_empty(), e) {
                (true, 0) => "1".to_string(),
                (true, _) => "s".to_string(),
                (false, 0) => rot,
                (false, _) => format!("{rot}s"),
            }
        },
        cap,
    )
}

fn primitive_root(q: u32) -> u32 {
    if q == 2 {
        return 1;
    }
    let phi = (q - 1) as u64;
    let factors = arith::factorize(phi);
    (2..q)
        .find(|&g| {
            factors
                .iter()
                .all(|&(f, _)| mod_pow(g as u64, phi / f, q as u64) != 1)
        })
        .expect("prime modulus has a primitive root")
}

fn mod_pow(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        exp >>= 1;
    }
    acc
}

/// The unipotent element `[[1,1],[0,1]]` of P(2,q).
pub const UNIPOTENT: UpperTriangular = UpperTriangular { a: 1, b: 1, d: 1 };

/// P(2,q): invertible upper-triangular 2x2 matrices mod q, labelled `(a,b,d)`.
pub fn upper_triangular(q: u32, cap: usize) -> Result<GroupTable> {
    let g = primitive_root(q);
    let gens = [
        UNIPOTENT,
        UpperTriangular::new(g, 0, 1),
        UpperTriangular::new(1, 0, g),
    ];
    GroupTable::from_upper_triangular(q, &gens, cap)
}

fn tuple_label(parts: impl Iterator<Item = String>) -> String {
    format!("({})", parts.collect::<Vec<_>>().join(","))
}

pub fn direct_product(factors: &[GroupTable], cap: usize) -> Result<GroupTable> {
    let identity = vec![0 as ElementId; factors.len()];
    let mut gens = Vec::new();
    for (slot, f) in factors.iter().enumerate() {
        for &g in f.generators() {
            let mut e = identity.clone();
            e[slot] = g;
            gens.push(e);
        }
    }
    GroupTable::from_closure(
        identity,
        &gens,
        |x, y| {
            factors
                .iter()
                .zip(x.iter().zip(y))
                .map(|(f, (&a, &b))| f.mul(a, b))
                .collect()
        },
        |x| tuple_label(factors.iter().zip(x).map(|(f, &a)| f.label(a).to_string())),
        cap,
    )
}

/// A permutation of the four coordinates, 0-based images.
pub type Perm4 = [u8; 4];

pub const PERM4_IDENTITY: Perm4 = [0, 1, 2, 3];

/// `(x * y)(i) = x(y(i))`
pub fn compose4(x: &Perm4, y: &Perm4) -> Perm4 {
    [x[y[0] as usize], x[y[1] as usize], x[y[2] as usize], x[y[3] as usize]]
}

/// Parses 1-based cycle notation such as `(1,2,3)` into a [`Perm4`].
pub fn perm4(cycles: &str) -> Result<Perm4> {
    let images = crate::group::parse_cycles(cycles, 4)?;
    Ok([images[0] as u8, images[1] as u8, images[2] as u8, images[3] as u8])
}

/// Element of BS(H): coordinates in H^4 and a permutation of the slots.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BsElement {
    pub slots: [ElementId; 4],
    pub perm: Perm4,
}

/// Lookup from BS(H) coordinates to element ids.
#[derive(Clone, Debug)]
pub struct BsCoordinates {
    index: HashMap<BsElement, ElementId>,
    elements: Vec<BsElement>,
}

impl BsCoordinates {
    pub fn id(&self, slots: [ElementId; 4], perm: Perm4) -> Option<ElementId> {
        self.index.get(&BsElement { slots, perm }).copied()
    }

    pub fn element(&self, id: ElementId) -> &BsElement {
        &self.elements[id as usize]
    }
}

/// BS(H) = H^4 ⋊ Sym(4) with `(u, σ)(v, τ) = (u · σ·v, στ)` and
/// `(σ·v)_i = v_{σ^-1(i)}`.
pub fn bs(h: &GroupTable, cap: usize) -> Result<(GroupTable, BsCoordinates)> {
    let predicted = 24u128.saturating_mul((h.order() as u128).saturating_pow(4));
    if predicted > cap as u128 {
        return Err(Error::OrderCapExceeded {
            order: predicted,
            cap,
        });
    }
    let identity = BsElement {
        slots: [0; 4],
        perm: PERM4_IDENTITY,
    };
    let mut gens: Vec<BsElement> = h
        .generators()
        .iter()
        .map(|&g| BsElement {
            slots: [g, 0, 0, 0],
            perm: PERM4_IDENTITY,
        })
        .collect();
    gens.push(BsElement {
        slots: [0; 4],
        perm: [1, 0, 2, 3],
    });
    gens.push(BsElement {
        slots: [0; 4],
        perm: [1, 2, 3, 0],
    });

    let mul = |x: &BsElement, y: &BsElement| {
        let mut inv = [0u8; 4];
        for (i, &s) in x.perm.iter().enumerate() {
            inv[s as usize] = i as u8;
        }
        let mut slots = [0; 4];
        for i in 0..4 {
            slots[i] = h.mul(x.slots[i], y.slots[inv[i] as usize]);
        }
        BsElement {
            slots,
            perm: compose4(&x.perm, &y.perm),
        }
    };
    let label = |x: &BsElement| {
        let perm: Vec<u32> = x.perm.iter().map(|&i| i as u32).collect();
        format!(
            "({},{})",
            tuple_label(x.slots.iter().map(|&a| h.label(a).to_string())),
            cycle_notation(&perm)
        )
    };
    let table = GroupTable::from_closure(identity.clone(), &gens, mul, label, cap)?;

    // Recover coordinates by replaying the table's BFS order.
    let mut elements = vec![identity];
    let mut index = HashMap::new();
    index.insert(elements[0].clone(), 0);
    let mut head = 0;
    while head < elements.len() {
        for g in &gens {
            let y = mul(&elements[head], g);
            if !index.contains_key(&y) {
                index.insert(y.clone(), elements.len() as ElementId);
                elements.push(y);
            }
        }
        head += 1;
    }
    debug_assert_eq!(elements.len(), table.order());
    Ok((table, BsCoordinates { index, elements }))
}
