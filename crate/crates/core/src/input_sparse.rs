//! Heavy/light multiplication for sparse inputs.
//!
//! Columns of `A` with at most `Δ` nonzeros are light and multiplied by
//! enumeration; the remaining heavy columns (at most `nnz(A)/Δ` of them) go
//! through a dense product.

use std::str::FromStr;

use log::warn;
use serde::{Deserialize, Serialize};

use crate::dense::{DenseAlgo, DenseMatrix};
use crate::error::{Error, Result};
use crate::exponent;
use crate::matrix::SparseMatrix;
use crate::naive::{check_dims, naive_multiply, RowAccumulator};
use crate::scalar::Semiring;
use crate::trace::{DenseCall, Trace};

/// How the light/heavy threshold is chosen.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum DeltaPolicy {
    Fixed(usize),
    /// `Δ = ⌈m_in^(σ(r) - 1)⌉` with the closed-form bound on `σ(r)`.
    Auto { r: f64 },
}

impl Default for DeltaPolicy {
    fn default() -> Self {
        DeltaPolicy::Auto { r: 1.0 }
    }
}

impl DeltaPolicy {
    /// The threshold for input size `m_in`, never below 1.
    pub fn resolve(&self, m_in: usize) -> usize {
        match *self {
            DeltaPolicy::Fixed(d) => d.max(1),
            DeltaPolicy::Auto { r } => {
                let e = exponent::sigma_algebraic(r) - 1.0;
                ((m_in.max(1) as f64).powf(e).ceil() as usize).max(1)
            }
        }
    }
}

impl FromStr for DeltaPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.eq_ignore_ascii_case("auto") {
            return Ok(DeltaPolicy::default());
        }
        s.parse::<usize>()
            .map(DeltaPolicy::Fixed)
            .map_err(|_| Error::InvalidArgument(format!("delta must be a count or 'auto', got {s:?}")))
    }
}

pub const DEFAULT_BUDGET_CELLS: usize = 1 << 24;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct InputSparseConfig {
    pub delta: DeltaPolicy,
    pub dense: DenseAlgo,
    /// Largest dense footprint (cells of both factors plus the product)
    /// materialized before falling back to enumeration.
    pub budget_cells: usize,
}

impl Default for InputSparseConfig {
    fn default() -> Self {
        InputSparseConfig {
            delta: DeltaPolicy::default(),
            dense: DenseAlgo::default(),
            budget_cells: DEFAULT_BUDGET_CELLS,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct HeavyLightSplit<E> {
    pub delta: usize,
    /// Light column indices of `A`, increasing.
    pub light: Vec<usize>,
    pub heavy: Vec<usize>,
    pub a_light: SparseMatrix<E>,
    pub a_heavy: SparseMatrix<E>,
    pub b_light: SparseMatrix<E>,
    pub b_heavy: SparseMatrix<E>,
}

/// Splits the nonempty columns of `A` (and the matching rows of `B`) at
/// threshold `delta`; a threshold of 0 is treated as 1.
pub fn split_heavy_light<E: Clone + PartialEq>(
    a: &SparseMatrix<E>,
    b: &SparseMatrix<E>,
    delta: usize,
) -> Result<HeavyLightSplit<E>> {
    check_dims(a, b)?;
    let delta = delta.max(1);
    let counts = a.column_counts();
    let (mut light, mut heavy) = (Vec::new(), Vec::new());
    for (k, &c) in counts.iter().enumerate() {
        if c == 0 {
            continue;
        }
        if c <= delta {
            light.push(k);
        } else {
            heavy.push(k);
        }
    }
    let map = |keep: &[usize]| {
        let mut m = vec![None; a.cols()];
        for (n, &k) in keep.iter().enumerate() {
            m[k] = Some(n);
        }
        m
    };
    Ok(HeavyLightSplit {
        delta,
        a_light: a.select_cols(&map(&light), light.len()),
        a_heavy: a.select_cols(&map(&heavy), heavy.len()),
        b_light: b.select_rows(&light),
        b_heavy: b.select_rows(&heavy),
        light,
        heavy,
    })
}

/// Product of a light pair by enumeration. Each nonzero `B₁[k, j]` meets the
/// at most `delta` nonzeros of column `k` of `A₁`.
pub fn multiply_light<D: Semiring>(
    dom: &D,
    a1: &SparseMatrix<D::Elem>,
    b1: &SparseMatrix<D::Elem>,
    delta: usize,
    trace: &mut Trace,
) -> Result<SparseMatrix<D::Elem>> {
    check_dims(a1, b1)?;
    if let Some((k, &c)) = a1.column_counts().iter().enumerate().find(|(_, &c)| c > delta) {
        return Err(Error::ColumnTooHeavy {
            col: k,
            found: c,
            delta,
        });
    }
    let mut acc = RowAccumulator::new(b1.cols());
    let mut per_row = Vec::with_capacity(a1.rows());
    let mut work = 0u64;
    for i in 0..a1.rows() {
        let (ks, avs) = a1.row(i);
        for (&k, av) in ks.iter().zip(avs) {
            let (js, bvs) = b1.row(k);
            work += js.len() as u64;
            for (&j, bv) in js.iter().zip(bvs) {
                acc.add(dom, j, dom.mul(av, bv)?)?;
            }
        }
        per_row.push(acc.drain(dom));
    }
    trace.light_work += work;
    Ok(SparseMatrix::from_canonical_rows(a1.rows(), b1.cols(), per_row))
}

/// Exact product through a dense kernel, after dropping empty rows of `A`,
/// empty columns of `B` and inner indices unused by either side. Falls back
/// to enumeration when the dense footprint exceeds `budget_cells`.
pub fn dense_product<D: Semiring>(
    dom: &D,
    a: &SparseMatrix<D::Elem>,
    b: &SparseMatrix<D::Elem>,
    algo: DenseAlgo,
    budget_cells: usize,
    trace: &mut Trace,
) -> Result<SparseMatrix<D::Elem>> {
    check_dims(a, b)?;
    let rows: Vec<usize> = (0..a.rows()).filter(|&i| a.row_nnz(i) > 0).collect();
    let a_cols = a.column_counts();
    let inner: Vec<usize> = (0..a.cols()).filter(|&k| a_cols[k] > 0 && b.row_nnz(k) > 0).collect();
    let b_cols = b.column_counts();
    let cols: Vec<usize> = (0..b.cols()).filter(|&j| b_cols[j] > 0).collect();
    if rows.is_empty() || inner.is_empty() || cols.is_empty() {
        return Ok(SparseMatrix::zeros(a.rows(), b.cols()));
    }
    let (r, k, c) = (rows.len(), inner.len(), cols.len());
    let cells = r.saturating_mul(k).saturating_add(k.saturating_mul(c)).saturating_add(r.saturating_mul(c));
    if cells > budget_cells {
        warn!("dense product {r}x{k}x{c} needs {cells} cells, over the budget of {budget_cells}; enumerating instead");
        trace.budget_fallbacks += 1;
        return naive_multiply(dom, a, b);
    }
    trace.dense_calls.push(DenseCall { rows: r, inner: k, cols: c });

    let mut inner_pos = vec![usize::MAX; a.cols()];
    for (n, &kk) in inner.iter().enumerate() {
        inner_pos[kk] = n;
    }
    let mut col_pos = vec![usize::MAX; b.cols()];
    for (n, &j) in cols.iter().enumerate() {
        col_pos[j] = n;
    }
    let mut da = DenseMatrix::filled(r, k, dom.zero());
    for (n, &i) in rows.iter().enumerate() {
        let (ks, vs) = a.row(i);
        for (&kk, v) in ks.iter().zip(vs) {
            if inner_pos[kk] != usize::MAX {
                da.set(n, inner_pos[kk], v.clone());
            }
        }
    }
    let mut db = DenseMatrix::filled(k, c, dom.zero());
    for (n, &kk) in inner.iter().enumerate() {
        let (js, vs) = b.row(kk);
        for (&j, v) in js.iter().zip(vs) {
            db.set(n, col_pos[j], v.clone());
        }
    }
    let dc = dom.dense_multiply(&da, &db, algo)?;
    let mut per_row = vec![Vec::new(); a.rows()];
    for (n, &i) in rows.iter().enumerate() {
        per_row[i] = dc
            .row(n)
            .iter()
            .zip(&cols)
            .filter(|(v, _)| !dom.is_zero(v))
            .map(|(v, &j)| (j, v.clone()))
            .collect();
    }
    Ok(SparseMatrix::from_canonical_rows(a.rows(), b.cols(), per_row))
}

/// `A₁B₁ + A₂B₂` for the heavy/light split of `A`, taken on whichever of
/// `AB` and `(BᵀAᵀ)ᵀ` has the smaller outer dimension first.
pub fn multiply_input_sparse<D: Semiring>(
    dom: &D,
    a: &SparseMatrix<D::Elem>,
    b: &SparseMatrix<D::Elem>,
    cfg: &InputSparseConfig,
    trace: &mut Trace,
) -> Result<SparseMatrix<D::Elem>> {
    check_dims(a, b)?;
    if a.rows() > b.cols() {
        let t = oriented(dom, &b.transpose(), &a.transpose(), cfg, trace)?;
        return Ok(t.transpose());
    }
    oriented(dom, a, b, cfg, trace)
}

fn oriented<D: Semiring>(
    dom: &D,
    a: &SparseMatrix<D::Elem>,
    b: &SparseMatrix<D::Elem>,
    cfg: &InputSparseConfig,
    trace: &mut Trace,
) -> Result<SparseMatrix<D::Elem>> {
    let delta = cfg.delta.resolve(a.nnz() + b.nnz());
    let split = split_heavy_light(a, b, delta)?;
    let light = multiply_light(dom, &split.a_light, &split.b_light, split.delta, trace)?;
    if split.heavy.is_empty() {
        return Ok(light);
    }
    trace.heavy_columns += split.heavy.len();
    let heavy = dense_product(dom, &split.a_heavy, &split.b_heavy, cfg.dense, cfg.budget_cells, trace)?;
    light.add(dom, &heavy)
}
