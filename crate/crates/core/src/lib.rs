//! Sparse matrix multiplication whose cost depends on the number of nonzero
//! inputs and outputs.

pub mod apps;
pub mod bench;
pub mod dense;
pub mod densify;
pub mod dynamic;
pub mod error;
pub mod exponent;
pub mod generate;
pub mod input_sparse;
pub mod isolation;
pub mod matrix;
pub mod mtx;
pub mod naive;
pub mod pipeline;
pub mod scalar;
pub mod trace;
pub mod verify;

pub use error::{Error, Result};
pub use matrix::{SparseMatrix, SupportSet};
pub use pipeline::{multiply_sparse, SparseOptions};
