use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("group order {order} exceeds the order cap {cap}")]
    OrderCapExceeded { order: u128, cap: usize },
    #[error("invalid generator: {0}")]
    InvalidGenerator(String),
    #[error("invalid multiplication table: {0}")]
    InvalidTable(String),
    #[error("subgroups belong to different parent groups")]
    ParentMismatch,
    #[error("subgroup is not contained in the given overgroup")]
    NotContained,
    #[error("subgroup is not normal")]
    NotNormal,
    #[error("subgroup is not nilpotent")]
    NotNilpotent,
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("element id {id} out of range for group of order {order}")]
    InvalidElement { id: u32, order: usize },
    #[error("subgroup lattice exceeds the cap of {cap} subgroups")]
    LatticeCapExceeded { cap: usize },
    #[error("oracle enumeration limited to order {limit}, group has order {order}")]
    OracleScaleExceeded { order: usize, limit: usize },
    #[error("subgroup not found in lattice")]
    NotFound,
    #[error("vertices {0} and {1} lie in different components")]
    NotConnected(usize, usize),
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        message: String,
        line: usize,
        column: usize,
    },
    #[error("invalid group spec: {0}")]
    InvalidSpec(String),
    #[error("invalid lattice cache: {0}")]
    InvalidCache(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
