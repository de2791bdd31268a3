//! Spectral engine for chains of magnetic rings coupled by δ-interactions.

pub mod bands;
pub mod config;
pub mod dispersion;
pub mod duality;
pub mod error;
pub mod scenario;
pub mod transfer;

pub mod gap_solvers;
pub mod oracle;
pub mod report;

mod roots;

pub use bands::{band_structure, classify_first_band, BandStructure};
pub use dispersion::{lambda_pair, trig_kernels, xi, Background, Energy, LambdaPair};
pub use config::{ConfigError, ScenarioConfig};
pub use error::{Result, SpectralError};
pub use gap_solvers::{solve_scenario, GapEigenvalue, Method};
pub use oracle::{assemble_fd, oracle_compare, oracle_eigenvalues, FdChain, OracleReport};
pub use report::{run_command, run_scenario, Command, RunError};
pub use scenario::{ChainScenario, Perturbation, Ring, WeakMode, WeakPerturbation};
pub use transfer::{chain_product, TransferMatrix2};
