//! Brute-force cross-check: a truncated, discretized chain solved as a
//! banded Hermitian eigenproblem.

mod banded;
mod compare;
mod fd;

pub use banded::HermitianBand;
pub use compare::{
    oracle_compare, oracle_compare_with, oracle_eigenvalues, oracle_spectrum, OracleEigenvalue, OracleMatch,
    OracleReport, EDGE_WEIGHT_LIMIT,
};
pub use fd::{
    assemble_fd, assemble_fd_with, EndCondition, FdChain, Node, NodeKind, DIMENSION_CAP,
    MIN_CELLS_PER_EDGE,
};

/// Windows must stay below this fraction of `(π / h)^2`.
pub const CEILING_FRACTION: f64 = 0.05;
