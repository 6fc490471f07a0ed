//! Top-level multiplication: densification wrapped around the heavy/light
//! backend, with the recursion picked by the entry domain.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::densify::{default_group_width, multiply_integer, multiply_nonnegative, multiply_ring, Backend, DensifyConfig};
use crate::error::Result;
use crate::input_sparse::InputSparseConfig;
use crate::matrix::SparseMatrix;
use crate::scalar::{BigInteger, Boolean, Integer, NonNegative, Semiring, ZMod};
use crate::trace::Trace;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SparseOptions {
    /// Backend handed the compressed products.
    pub backend: Backend,
    pub densify: DensifyConfig,
    /// Leaf size for the ring recursion; `None` uses the group width.
    pub ring_leaf_rows: Option<usize>,
}

impl Default for SparseOptions {
    fn default() -> Self {
        SparseOptions {
            backend: Backend::InputSparse(InputSparseConfig::default()),
            densify: DensifyConfig::default(),
            ring_leaf_rows: None,
        }
    }
}

impl SparseOptions {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.densify.seed = seed;
        self
    }
}

/// Domains that know which densification recursion applies to them.
pub trait Routed: Semiring {
    fn route(
        &self,
        a: &SparseMatrix<Self::Elem>,
        b: &SparseMatrix<Self::Elem>,
        opts: &SparseOptions,
    ) -> Result<(SparseMatrix<Self::Elem>, Trace)>;
}

impl Routed for Boolean {
    /// Runs over counts and thresholds the result.
    fn route(&self, a: &SparseMatrix<bool>, b: &SparseMatrix<bool>, opts: &SparseOptions) -> Result<(SparseMatrix<bool>, Trace)> {
        let count = NonNegative;
        let ac = a.convert(&count, |_| Ok(1u64))?;
        let bc = b.convert(&count, |_| Ok(1u64))?;
        let (c, trace) = multiply_nonnegative(&count, &ac, &bc, &opts.backend, &opts.densify)?;
        Ok((c.convert(self, |v| Ok(*v != 0))?, trace))
    }
}

impl Routed for NonNegative {
    fn route(&self, a: &SparseMatrix<u64>, b: &SparseMatrix<u64>, opts: &SparseOptions) -> Result<(SparseMatrix<u64>, Trace)> {
        multiply_nonnegative(self, a, b, &opts.backend, &opts.densify)
    }
}

impl Routed for Integer {
    fn route(&self, a: &SparseMatrix<i64>, b: &SparseMatrix<i64>, opts: &SparseOptions) -> Result<(SparseMatrix<i64>, Trace)> {
        multiply_integer(self, a, b, &opts.backend, &opts.densify)
    }
}

impl Routed for BigInteger {
    fn route(
        &self,
        a: &SparseMatrix<BigInt>,
        b: &SparseMatrix<BigInt>,
        opts: &SparseOptions,
    ) -> Result<(SparseMatrix<BigInt>, Trace)> {
        multiply_integer(self, a, b, &opts.backend, &opts.densify)
    }
}

impl Routed for ZMod {
    fn route(&self, a: &SparseMatrix<u64>, b: &SparseMatrix<u64>, opts: &SparseOptions) -> Result<(SparseMatrix<u64>, Trace)> {
        let mut cfg = opts.densify;
        let w = cfg.group_width.unwrap_or_else(|| default_group_width(a.nnz() + b.nnz()));
        cfg.group_width = Some(w);
        cfg.leaf_rows = opts.ring_leaf_rows.unwrap_or(w);
        multiply_ring(self, a, b, &opts.backend, &cfg)
    }
}

/// Exact product `AB` (with high probability for integers and rings) and the
/// instrumentation of the run.
pub fn multiply_sparse<D: Routed>(
    dom: &D,
    a: &SparseMatrix<D::Elem>,
    b: &SparseMatrix<D::Elem>,
    opts: &SparseOptions,
) -> Result<(SparseMatrix<D::Elem>, Trace)> {
    dom.route(a, b, opts)
}
