use std::collections::BTreeMap;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Deserialize;

use crate::arith;
use crate::commgraph::{CommGraph, GraphAnalysis, GraphKind};
use crate::constructions::{construct, GroupSpec};
use crate::error::{Error, Result};
use crate::group::GroupTable;
use crate::lattice::{enumerate_subgroups, Lattice};
use crate::subgroup::{derived_series, structure_flags, DerivedSeries, StructureFlags};

/// Largest prime examined by the corpus-wide suites.
pub const PRIME_LIMIT: u64 = 13;

#[derive(Clone, Debug, PartialEq, Eq, Deserialize)]
pub struct CorpusEntry {
    #[serde(default)]
    pub name: String,
    pub spec: GroupSpec,
    /// Whether the full lattice is enumerated (off for BS groups by default).
    #[serde(default)]
    pub enumerate: Option<bool>,
}

impl CorpusEntry {
    pub fn new(spec: GroupSpec) -> CorpusEntry {
        CorpusEntry {
            name: spec.to_string(),
            spec,
            enumerate: None,
        }
    }

    pub fn enumerates(&self) -> bool {
        self.enumerate.unwrap_or(!self.spec.contains_bs())
    }
}

#[derive(Clone, Debug)]
pub struct Corpus {
    pub entries: Vec<CorpusEntry>,
}

impl Default for Corpus {
    fn default() -> Corpus {
        use GroupSpec::*;
        let mut specs = vec![Sym(3), Sym(4)];
        specs.extend((2..=12).map(Cyclic));
        specs.extend((3..=8).map(Dihedral));
        specs.push(Abelian(vec![2, 2]));
        specs.push(Abelian(vec![2, 4]));
        specs.push(Abelian(vec![3, 3]));
        specs.push(Direct(vec![Sym(3), Cyclic(2)]));
        specs.extend([P2q(3), P2q(5), P2q(7)]);
        specs.push(Bs(Box::new(Cyclic(3))));
        Corpus {
            entries: specs.into_iter().map(CorpusEntry::new).collect(),
        }
    }
}

impl Corpus {
    /// Reads a JSON array of `{"name": ..., "spec": {...}, "enumerate": ...}`.
    pub fn from_json(text: &str) -> Result<Corpus> {
        let mut entries: Vec<CorpusEntry> = serde_json::from_str(text).map_err(|e| Error::Syntax {
            message: e.to_string(),
            line: e.line(),
            column: e.column(),
        })?;
        for e in &mut entries {
            e.spec.validate()?;
            if e.name.is_empty() {
                e.name = e.spec.to_string();
            }
        }
        Ok(Corpus { entries })
    }
}

/// A corpus member with its lattice and every graph for primes up to
/// [`PRIME_LIMIT`].
pub struct GroupData {
    pub name: String,
    pub spec: GroupSpec,
    pub table: Arc<GroupTable>,
    pub lattice: Arc<Lattice>,
    pub flags: StructureFlags,
    pub series: DerivedSeries,
    graphs: BTreeMap<(u64, GraphKind), (CommGraph, GraphAnalysis)>,
}

impl GroupData {
    pub fn build(name: &str, spec: &GroupSpec, order_cap: usize, lattice_cap: usize) -> Result<GroupData> {
        let table = Arc::new(construct(spec, order_cap)?);
        let lattice = Arc::new(enumerate_subgroups(&table, lattice_cap)?);
        let keys: Vec<(u64, GraphKind)> = arith::primes_up_to(PRIME_LIMIT)
            .into_iter()
            .flat_map(|p| [(p, GraphKind::Commensurability), (p, GraphKind::Containment)])
            .collect();
        let graphs = keys
            .into_par_iter()
            .map(|(p, kind)| {
                let g = CommGraph::build(&lattice, p, kind)?;
                let a = g.analyze();
                Ok(((p, kind), (g, a)))
            })
            .collect::<Result<BTreeMap<_, _>>>()?;
        Ok(GroupData {
            name: name.to_string(),
            spec: spec.clone(),
            flags: structure_flags(&table),
            series: derived_series(&table),
            table,
            lattice,
            graphs,
        })
    }

    pub fn order(&self) -> usize {
        self.table.order()
    }

    pub fn graph(&self, p: u64, kind: GraphKind) -> &CommGraph {
        &self.graphs[&(p, kind)].0
    }

    pub fn analysis(&self, p: u64, kind: GraphKind) -> &GraphAnalysis {
        &self.graphs[&(p, kind)].1
    }

    /// Primes up to [`PRIME_LIMIT`] dividing the group order.
    pub fn dividing_primes(&self) -> Vec<u64> {
        arith::primes_up_to(PRIME_LIMIT)
            .into_iter()
            .filter(|p| (self.order() as u64).is_multiple_of(*p))
            .collect()
    }
}

/// Materialized lattice members of a corpus, in corpus order.
pub struct CorpusData {
    pub groups: Vec<GroupData>,
}

impl CorpusData {
    pub fn build(corpus: &Corpus, order_cap: usize, lattice_cap: usize) -> Result<CorpusData> {
        let groups = corpus
            .entries
            .par_iter()
            .filter(|e| e.enumerates())
            .map(|e| GroupData::build(&e.name, &e.spec, order_cap, lattice_cap))
            .collect::<Result<Vec<_>>>()?;
        Ok(CorpusData { groups })
    }

    pub fn find(&self, spec: &GroupSpec) -> Option<&GroupData> {
        self.groups.iter().find(|g| &g.spec == spec)
    }
}
