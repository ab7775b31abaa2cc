//! Finite-group toolkit: dense group tables, complete subgroup lattices, and
//! p-local commensurability / p-containment graphs with component analysis.

pub mod arith;
pub mod bits;
pub mod cli;
pub mod commgraph;
pub mod constructions;
pub mod error;
pub mod group;
pub mod io;
pub mod lattice;
pub mod subgroup;
pub mod verify;

pub use bits::Bits;
pub use commgraph::{CommGraph, ComponentClass, ComponentReport, GraphAnalysis, GraphKind};
pub use constructions::{construct, parse_group_spec, GroupSpec};
pub use error::{Error, Result};
pub use group::{ElementId, GroupTable, DEFAULT_ORDER_CAP};
pub use lattice::{enumerate_subgroups, oracle_enumerate_subgroups, Lattice, DEFAULT_LATTICE_CAP};
pub use subgroup::{derived_series, structure_flags, DerivedSeries, StructureFlags, SubgroupSet};
