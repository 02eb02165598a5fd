//! Schubert varieties of the full flag variety as quiver Grassmannians of a
//! grid quiver: rank vectors, compatible reduced words, the Bott-Samelson
//! dictionary and finite-field point-count oracles.

pub mod bsmap;
pub mod cli;
pub mod dimvec;
pub mod error;
pub mod fforacle;
pub mod gridquiver;
pub mod linalg;
pub mod perm;
pub mod words;

pub use error::{Error, Result};
pub use gridquiver::{DimensionVector, GridQuiver};
pub use perm::Permutation;
pub use words::ReducedWord;
