//! Analysis of finite-dimensional multipartite quantum states.
//!
//! Subsystems are indexed from 0 and subsystem 0 is the leftmost tensor
//! factor. Text forms used by the command line (`"1,2|3,4"`) are 1-based.

pub mod cli;
pub mod correlations;
pub mod dynamics;
pub mod error;
pub mod factorization;
pub mod fixtures;
pub mod io;
pub mod linalg;
pub mod partition;
pub mod random;
pub mod schmidt;
pub mod state;
pub mod tomography;

pub use correlations::{EventString, Projector};
pub use error::{Error, Result};
pub use linalg::{CMatrix, CVector};
pub use partition::ClusterDecomposition;
pub use state::{AnyState, DensityOperator, StateVector};

/// Seed used wherever a command or example needs randomness and none is given.
pub const DEFAULT_SEED: u64 = 20_240_611;
