//! Seeded benchmark families and their per-run records.

use std::fmt::Write as _;
use std::str::FromStr;
use std::time::Instant;

use serde::Serialize;

use crate::densify::HashMode;
use crate::error::{Error, Result};
use crate::generate;
use crate::pipeline::{multiply_sparse, SparseOptions};
use crate::scalar::{Integer, NonNegative};
use crate::trace::Trace;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Family {
    /// One entry per row of `A`, two per row of `B`: `m_out ≈ m_in`.
    FullySparse,
    SkewedDegree,
    /// Signed entries whose plain row-pair folds all cancel.
    PlantedCancellation,
    /// All-ones column times all-ones row.
    Rank1DenseOutput,
}

impl Family {
    pub const ALL: [Family; 4] = [
        Family::FullySparse,
        Family::SkewedDegree,
        Family::PlantedCancellation,
        Family::Rank1DenseOutput,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Family::FullySparse => "fully-sparse",
            Family::SkewedDegree => "skewed-degree",
            Family::PlantedCancellation => "planted-cancellation",
            Family::Rank1DenseOutput => "rank1-dense-output",
        }
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown bench family {s:?}")))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BenchRecord {
    pub instance: String,
    pub seed: u64,
    pub m_in: usize,
    pub m_out: usize,
    /// Largest `x'·z'` over compressed backend calls.
    pub max_xz_cap: usize,
    /// `x·z` of the uncompressed product.
    pub full_xz: usize,
    pub time_ms: f64,
    pub mode: &'static str,
    pub trace: Trace,
}

pub fn mode_name(mode: HashMode) -> &'static str {
    match mode {
        HashMode::Deterministic => "det",
        HashMode::Random => "rand",
    }
}

/// Builds the instance of `family` with `m_in` close to `m` and multiplies
/// it once.
pub fn run_one(family: Family, m: usize, seed: u64, opts: &SparseOptions) -> Result<BenchRecord> {
    let opts = opts.with_seed(seed);
    let start = Instant::now();
    let (m_in, m_out, full_xz, trace) = match family {
        Family::FullySparse | Family::SkewedDegree | Family::Rank1DenseOutput => {
            let (a, b) = match family {
                Family::FullySparse => generate::fully_sparse((m / 3).max(2), seed),
                Family::SkewedDegree => generate::skewed_degree((m / 8).max(2), seed),
                _ => generate::rank1_dense_output((m / 2).max(1)),
            };
            let (c, t) = multiply_sparse(&NonNegative, &a, &b, &opts)?;
            (a.nnz() + b.nnz(), c.nnz(), a.rows() * b.cols(), t)
        }
        Family::PlantedCancellation => {
            let n = (m / 8).max(2);
            let (a, b) = generate::planted_cancellation(n, n, n, (4.0 / n as f64).min(1.0), seed);
            let (c, t) = multiply_sparse(&Integer, &a, &b, &opts)?;
            (a.nnz() + b.nnz(), c.nnz(), a.rows() * b.cols(), t)
        }
    };
    Ok(BenchRecord {
        instance: family.name().to_string(),
        seed,
        m_in,
        m_out,
        max_xz_cap: trace.max_cap(),
        full_xz,
        time_ms: start.elapsed().as_secs_f64() * 1e3,
        mode: mode_name(opts.densify.hash),
        trace,
    })
}

pub fn run(families: &[Family], sizes: &[usize], seeds: &[u64], opts: &SparseOptions) -> Result<Vec<BenchRecord>> {
    let mut out = Vec::new();
    for &f in families {
        for &m in sizes {
            for &s in seeds {
                out.push(run_one(f, m, s, opts)?);
            }
        }
    }
    Ok(out)
}

pub const CSV_HEADER: &str = "instance,seed,m_in,m_out,max_xz_cap,time_ms,mode";

pub fn to_csv(records: &[BenchRecord]) -> String {
    let mut out = format!("{CSV_HEADER}\n");
    for r in records {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{:.3},{}",
            r.instance, r.seed, r.m_in, r.m_out, r.max_xz_cap, r.time_ms, r.mode
        );
    }
    out
}
