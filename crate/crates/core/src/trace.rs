//! Instrumentation collected during a multiplication. Recording never
//! changes results.

use serde::Serialize;

use crate::matrix::SupportSet;

/// One product issued by `recover` to its backend.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct BackendCall {
    pub rows: usize,
    pub inner: usize,
    pub cols: usize,
    /// `|S|` of the recover call that issued the product.
    pub support: usize,
}

impl BackendCall {
    pub fn cap(&self) -> usize {
        self.rows * self.cols
    }
}

/// One dense product, after trimming empty rows and columns.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DenseCall {
    pub rows: usize,
    pub inner: usize,
    pub cols: usize,
}

/// Candidate support computed at one recursion node.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Candidate {
    pub depth: usize,
    pub support: SupportSet,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Trace {
    pub backend_calls: Vec<BackendCall>,
    pub dense_calls: Vec<DenseCall>,
    pub recover_calls: usize,
    /// Recursion nodes visited by the densification, leaves included.
    pub nodes: usize,
    /// Deepest recursion level reached; the top call is depth 1.
    pub max_depth: usize,
    /// Hash functions used across all recover levels.
    pub hash_functions: usize,
    pub heavy_columns: usize,
    /// Multiply-adds performed by light enumeration.
    pub light_work: u64,
    /// Heavy products that exceeded the memory budget and were enumerated.
    pub budget_fallbacks: usize,
    #[serde(skip)]
    pub candidates: Vec<Candidate>,
}

impl Trace {
    /// Largest `x'·z'` over backend calls issued by recover.
    pub fn max_cap(&self) -> usize {
        self.backend_calls.iter().map(BackendCall::cap).max().unwrap_or(0)
    }

    /// Whether every backend call satisfies `x'·z' ≤ 4|S|`.
    pub fn caps_within_bound(&self) -> bool {
        self.backend_calls.iter().all(|c| c.cap() <= 4 * c.support)
    }

    pub(crate) fn enter(&mut self, depth: usize) {
        self.nodes += 1;
        self.max_depth = self.max_depth.max(depth);
    }
}
