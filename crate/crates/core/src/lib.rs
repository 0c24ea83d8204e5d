//! Weighted composition operators between vector-valued Lipschitz spaces on the unit disk.

pub mod cli;
pub mod criteria;
pub mod error;
pub mod estimation;
pub mod fnkernel;
pub mod normedspace;
pub mod scenario;
pub mod verify;
pub mod vspaces;
pub mod wcop;

pub use error::{Error, Result};
pub use fnkernel::{AnalyticScalar, SelfMap, C64};
pub use normedspace::{NormKind, NormedSpace, OperatorMatrix, Vector};
