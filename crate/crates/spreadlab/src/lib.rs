//! Exact computation for finite, finite-alphabet, high-dimensional random
//! arrays: symmetry and independence defects, conditional concentration via
//! martingale energy increments, the propagation constants `γ_k`, and
//! quasirandomness of graphs, hypergraphs and graph families.

pub mod arrays;
pub mod cli;
pub mod concentration;
pub mod constructions;
pub mod defects;
pub mod error;
pub mod prob;
pub mod propagation;
pub mod quasirandom;
pub mod report;

pub use error::{Error, Limits, Result};
pub use prob::Prob;
