//! p-local commensurability graphs and p-containment graphs over a lattice.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::arith;
use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::subgroup::SubgroupSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum GraphKind {
    #[serde(rename = "comm")]
    Commensurability,
    #[serde(rename = "cont")]
    Containment,
}

impl GraphKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            GraphKind::Commensurability => "comm",
            GraphKind::Containment => "cont",
        }
    }
}

impl fmt::Display for GraphKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for GraphKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "comm" | "commensurability" => Ok(GraphKind::Commensurability),
            "cont" | "containment" => Ok(GraphKind::Containment),
            other => Err(format!("unknown graph kind {other:?} (expected comm or cont)")),
        }
    }
}

/// Exponents `(a, b)` with `[A : A∩B] = p^a` and `[B : A∩B] = p^b`, if both
/// indices are powers of `p`.
pub fn commensurability_exponents(a: &SubgroupSet, b: &SubgroupSet, p: u64) -> Result<Option<(u32, u32)>> {
    a.same_parent(b)?;
    let common = a.members().and_count(b.members()) as u64;
    Ok(exponents(a.order() as u64, b.order() as u64, common, p))
}

fn exponents(order_a: u64, order_b: u64, common: u64, p: u64) -> Option<(u32, u32)> {
    let ea = arith::p_power_exponent(order_a / common, p)?;
    let eb = arith::p_power_exponent(order_b / common, p)?;
    Some((ea, eb))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Edge {
    pub i: usize,
    pub j: usize,
    /// `[S_i : S_i ∩ S_j] = p^a`
    pub a: u32,
    /// `[S_j : S_i ∩ S_j] = p^b`
    pub b: u32,
}

#[derive(Clone, Debug)]
pub struct CommGraph {
    kind: GraphKind,
    p: u64,
    lattice: Arc<Lattice>,
    adjacency: Vec<Vec<usize>>,
    edges: Vec<Edge>,
}

impl CommGraph {
    /// Evaluates the edge predicate on every pair of lattice members.
    pub fn build(lattice: &Arc<Lattice>, p: u64, kind: GraphKind) -> Result<CommGraph> {
        if !arith::is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let subs = lattice.subgroups();
        let n = subs.len();
        let edges: Vec<Edge> = (0..n)
            .into_par_iter()
            .flat_map_iter(|i| {
                let si = &subs[i];
                (i + 1..n).filter_map(move |j| {
                    let sj = &subs[j];
                    let common = si.members().and_count(sj.members()) as u64;
                    let (a, b) = exponents(si.order() as u64, sj.order() as u64, common, p)?;
                    let keep = match kind {
                        GraphKind::Commensurability => true,
                        // one side must be the intersection itself
                        GraphKind::Containment => a == 0 || b == 0,
                    };
                    keep.then_some(Edge { i, j, a, b })
                })
            })
            .collect();
        let mut adjacency = vec![Vec::new(); n];
        for e in &edges {
            adjacency[e.i].push(e.j);
            adjacency[e.j].push(e.i);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Ok(CommGraph {
            kind,
            p,
            lattice: lattice.clone(),
            adjacency,
            edges,
        })
    }

    pub fn kind(&self) -> GraphKind {
        self.kind
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn lattice(&self) -> &Arc<Lattice> {
        &self.lattice
    }

    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }

    /// Edges with `i < j`, ascending.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.adjacency[u].binary_search(&v).is_ok()
    }

    /// Exponent pair oriented from `u` to `v`.
    pub fn edge_exponents(&self, u: usize, v: usize) -> Option<(u32, u32)> {
        let (lo, hi) = (u.min(v), u.max(v));
        let k = self.edges.binary_search_by(|e| (e.i, e.j).cmp(&(lo, hi))).ok()?;
        let e = self.edges[k];
        Some(if u <= v { (e.a, e.b) } else { (e.b, e.a) })
    }

    /// BFS distances from `source`; `None` for unreachable vertices.
    pub fn distances_from(&self, source: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.vertex_count()];
        dist[source] = Some(0);
        let mut queue = VecDeque::from([source]);
        while let Some(x) = queue.pop_front() {
            let d = dist[x].unwrap();
            for &y in &self.adjacency[x] {
                if dist[y].is_none() {
                    dist[y] = Some(d + 1);
                    queue.push_back(y);
                }
            }
        }
        dist
    }

    pub fn distance(&self, u: usize, v: usize) -> Option<usize> {
        self.distances_from(u)[v]
    }

    /// Connected components as ascending vertex lists, ordered by their
    /// smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.vertex_count();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut comp = vec![start];
            let mut head = 0;
            while head < comp.len() {
                let x = comp[head];
                head += 1;
                for &y in &self.adjacency[x] {
                    if !seen[y] {
                        seen[y] = true;
                        comp.push(y);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn classify_component(&self, vertices: &[usize]) -> ComponentClass {
        let n = vertices.len();
        if n == 1 {
            return ComponentClass::Singleton;
        }
        let edge_count = vertices.iter().map(|&v| self.degree(v)).sum::<usize>() / 2;
        if edge_count == n * (n - 1) / 2 {
            return ComponentClass::Complete;
        }
        if n >= 3 && edge_count == n - 1 {
            if let Some(&center) = vertices.iter().find(|&&v| self.degree(v) == n - 1) {
                return ComponentClass::Star { center };
            }
        }
        ComponentClass::Other
    }

    /// Per-component diameters and classes, plus the connected diameter.
    pub fn analyze(&self) -> GraphAnalysis {
        let components: Vec<ComponentReport> = self
            .components()
            .into_par_iter()
            .map(|vertices| {
                let eccentricities: Vec<usize> = vertices
                    .iter()
                    .map(|&v| {
                        self.distances_from(v)
                            .into_iter()
                            .flatten()
                            .max()
                            .unwrap_or(0)
                    })
                    .collect();
                let diameter = eccentricities.iter().copied().max().unwrap_or(0);
                let class = self.classify_component(&vertices);
                ComponentReport {
                    vertices,
                    diameter,
                    eccentricities,
                    class,
                }
            })
            .collect();
        let connected_diameter = components.iter().map(|c| c.diameter).max().unwrap_or(0);
        GraphAnalysis {
            components,
            connected_diameter,
        }
    }

    /// Every shortest path from `u` to `v`, in lexicographic order.
    pub fn all_geodesics(&self, u: usize, v: usize) -> Result<Vec<Vec<usize>>> {
        let dist = self.distances_from(u);
        if dist[v].is_none() {
            return Err(Error::NotConnected(u, v));
        }
        // walk back from v through vertices one layer closer to u
        fn back(g: &CommGraph, dist: &[Option<usize>], x: usize, suffix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            suffix.push(x);
            let d = dist[x].unwrap();
            if d == 0 {
                out.push(suffix.iter().rev().copied().collect());
            } else {
                for &w in g.neighbors(x) {
                    if dist[w] == Some(d - 1) {
                        back(g, dist, w, suffix, out);
                    }
                }
            }
            suffix.pop();
        }
        let mut out = Vec::new();
        back(self, &dist, v, &mut Vec::new(), &mut out);
        out.sort();
        Ok(out)
    }

    /// Every simple path from `u` to `v` (exponential; small components only).
    pub fn simple_paths(&self, u: usize, v: usize) -> Vec<Vec<usize>> {
        fn dfs(g: &CommGraph, x: usize, target: usize, on_path: &mut [bool], path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if x == target {
                out.push(path.clone());
                return;
            }
            for &y in g.neighbors(x) {
                if !on_path[y] {
                    on_path[y] = true;
                    path.push(y);
                    dfs(g, y, target, on_path, path, out);
                    path.pop();
                    on_path[y] = false;
                }
            }
        }
        let mut on_path = vec![false; self.vertex_count()];
        on_path[u] = true;
        let mut out = Vec::new();
        dfs(self, u, v, &mut on_path, &mut vec![u], &mut out);
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ComponentClass {
    Singleton,
    Complete,
    Star { center: usize },
    Other,
}

impl ComponentClass {
    pub fn name(&self) -> &'static str {
        match self {
            ComponentClass::Singleton => "singleton",
            ComponentClass::Complete => "complete",
            ComponentClass::Star { .. } => "star",
            ComponentClass::Other => "other",
        }
    }

    pub fn center(&self) -> Option<usize> {
        match self {
            ComponentClass::Star { center } => Some(*center),
            _ => None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct ComponentReport {
    pub vertices: Vec<usize>,
    pub diameter: usize,
    pub eccentricities: Vec<usize>,
    pub class: ComponentClass,
}

#[derive(Clone, Debug)]
pub struct GraphAnalysis {
    pub components: Vec<ComponentReport>,
    pub connected_diameter: usize,
}

impl GraphAnalysis {
    pub fn count(&self, pred: impl Fn(&ComponentReport) -> bool) -> usize {
        self.components.iter().filter(|c| pred(c)).count()
    }
}
