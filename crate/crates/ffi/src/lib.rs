//! C interface to `sparsemul`.
//!
//! Matrices are opaque `SmMatrix` handles owned by the caller and released
//! with [`sm_matrix_free`]. Every fallible call returns an [`SmStatus`]; the
//! message of the most recent failure on the calling thread is available from
//! [`sm_last_error`]. Indices are 0-based.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use sparsemul::dense::DenseAlgo;
use sparsemul::densify::{Backend, HashMode};
use sparsemul::dynamic::{AnyMatrix, DomainKind};
use sparsemul::exponent::{self, OmegaTable, SigmaMethod, SigmaOptions};
use sparsemul::input_sparse::{DeltaPolicy, InputSparseConfig};
use sparsemul::{Error, SparseOptions};

/// Status codes returned by every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SmStatus {
    Ok = 0,
    NullPointer = 1,
    IndexOutOfRange = 2,
    ValueOutsideDomain = 3,
    DimensionMismatch = 4,
    DomainMismatch = 5,
    Parse = 6,
    Io = 7,
    Overflow = 8,
    NotIsolated = 9,
    InvalidArgument = 10,
    BufferTooSmall = 11,
    Panic = 12,
}

/// Opaque matrix handle.
pub struct SmMatrix(AnyMatrix);

/// Options for [`sm_multiply`]; start from [`sm_options_default`].
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct SmOptions {
    pub seed: u64,
    /// Nonzero selects random hashing instead of the deterministic family.
    pub random_hash: i32,
    /// Heavy/light threshold; 0 picks it from the input size.
    pub delta: u64,
    /// Nonzero multiplies heavy parts with Strassen instead of the cubic loop.
    pub strassen: i32,
}

/// Which bound [`sm_sigma`] computes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SmSigmaMethod {
    Lp = 0,
    Algebraic = 1,
    Omega2 = 2,
    Trivial = 3,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(err: &Error) -> SmStatus {
    match err {
        Error::IndexOutOfRange { .. } => SmStatus::IndexOutOfRange,
        Error::ValueOutsideDomain { .. } | Error::NegativeEntry { .. } => SmStatus::ValueOutsideDomain,
        Error::DimensionMismatch(_) => SmStatus::DimensionMismatch,
        Error::DomainMismatch(_) => SmStatus::DomainMismatch,
        Error::Parse { .. } => SmStatus::Parse,
        Error::Io(_) => SmStatus::Io,
        Error::Overflow(_) => SmStatus::Overflow,
        Error::NotIsolated { .. } => SmStatus::NotIsolated,
        _ => SmStatus::InvalidArgument,
    }
}

/// Runs `f`, recording errors and panics.
fn guard<F: FnOnce() -> Result<(), SmStatus>>(f: F) -> SmStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => SmStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => {
            set_error("internal panic");
            SmStatus::Panic
        }
    }
}

fn fail(err: Error) -> SmStatus {
    set_error(&err.to_string());
    status_of(&err)
}

fn null(what: &str) -> SmStatus {
    set_error(&format!("{what} is null"));
    SmStatus::NullPointer
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, SmStatus> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| {
        set_error(&format!("{what} is not UTF-8"));
        SmStatus::InvalidArgument
    })
}

unsafe fn matrix_arg<'a>(p: *const SmMatrix, what: &str) -> Result<&'a AnyMatrix, SmStatus> {
    p.as_ref().map(|m| &m.0).ok_or_else(|| null(what))
}

fn domain_arg(s: &str) -> Result<DomainKind, SmStatus> {
    s.parse().map_err(fail)
}

fn check_out(out: *mut *mut SmMatrix) -> Result<(), SmStatus> {
    if out.is_null() {
        return Err(null("out"));
    }
    Ok(())
}

unsafe fn store(out: *mut *mut SmMatrix, m: AnyMatrix) -> Result<(), SmStatus> {
    check_out(out)?;
    *out = Box::into_raw(Box::new(SmMatrix(m)));
    Ok(())
}

/// Message for the last failure on this thread; empty if none. Valid until
/// the next call on the same thread.
#[no_mangle]
pub extern "C" fn sm_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

#[no_mangle]
pub extern "C" fn sm_options_default() -> SmOptions {
    SmOptions {
        seed: 0,
        random_hash: 0,
        delta: 0,
        strassen: 0,
    }
}

/// Builds a matrix from `nnz` triplets. `domain` is one of `bool`, `nonneg`,
/// `int`, `bigint`, `gf2`, `zmod:<k>`; duplicates are summed.
///
/// # Safety
/// The three arrays must hold `nnz` elements each (they may be null when
/// `nnz` is 0) and `domain` must be a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn sm_matrix_new(
    domain: *const c_char,
    rows: usize,
    cols: usize,
    row_idx: *const usize,
    col_idx: *const usize,
    values: *const i64,
    nnz: usize,
    out: *mut *mut SmMatrix,
) -> SmStatus {
    guard(|| {
        check_out(out)?;
        let kind = domain_arg(str_arg(domain, "domain")?)?;
        if nnz > 0 && (row_idx.is_null() || col_idx.is_null() || values.is_null()) {
            return Err(null("triplet array"));
        }
        let t: Vec<(usize, usize, i64)> = if nnz == 0 {
            Vec::new()
        } else {
            let (r, c, v) = (
                std::slice::from_raw_parts(row_idx, nnz),
                std::slice::from_raw_parts(col_idx, nnz),
                std::slice::from_raw_parts(values, nnz),
            );
            (0..nnz).map(|k| (r[k], c[k], v[k])).collect()
        };
        let m = AnyMatrix::from_triplets(kind, rows, cols, &t).map_err(fail)?;
        store(out, m)
    })
}

/// # Safety
/// `m` must come from this library and not have been freed; null is ignored.
#[no_mangle]
pub unsafe extern "C" fn sm_matrix_free(m: *mut SmMatrix) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// # Safety
/// `m` must be a live handle or null (which yields 0).
#[no_mangle]
pub unsafe extern "C" fn sm_matrix_rows(m: *const SmMatrix) -> usize {
    m.as_ref().map_or(0, |m| m.0.rows())
}

/// # Safety
/// `m` must be a live handle or null (which yields 0).
#[no_mangle]
pub unsafe extern "C" fn sm_matrix_cols(m: *const SmMatrix) -> usize {
    m.as_ref().map_or(0, |m| m.0.cols())
}

/// # Safety
/// `m` must be a live handle or null (which yields 0).
#[no_mangle]
pub unsafe extern "C" fn sm_matrix_nnz(m: *const SmMatrix) -> usize {
    m.as_ref().map_or(0, |m| m.0.nnz())
}

/// Copies the entries in `(row, col)` order into arrays of capacity `cap`,
/// which must be at least the matrix's nnz. Boolean entries read as 1.
///
/// # Safety
/// `m` must be a live handle; each array must hold `cap` elements.
#[no_mangle]
pub unsafe extern "C" fn sm_matrix_entries(
    m: *const SmMatrix,
    row_idx: *mut usize,
    col_idx: *mut usize,
    values: *mut i64,
    cap: usize,
) -> SmStatus {
    guard(|| {
        let m = matrix_arg(m, "matrix")?;
        let t = m.triplets_i64().map_err(fail)?;
        if t.len() > cap {
            set_error(&format!("buffer holds {cap} entries, matrix has {}", t.len()));
            return Err(SmStatus::BufferTooSmall);
        }
        if !t.is_empty() && (row_idx.is_null() || col_idx.is_null() || values.is_null()) {
            return Err(null("entry buffer"));
        }
        for (k, (i, j, v)) in t.into_iter().enumerate() {
            *row_idx.add(k) = i;
            *col_idx.add(k) = j;
            *values.add(k) = v;
        }
        Ok(())
    })
}

/// # Safety
/// `domain` and `path` must be NUL-terminated strings; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn sm_matrix_read_mtx(domain: *const c_char, path: *const c_char, out: *mut *mut SmMatrix) -> SmStatus {
    guard(|| {
        check_out(out)?;
        let kind = domain_arg(str_arg(domain, "domain")?)?;
        let m = AnyMatrix::read_mtx_file(kind, str_arg(path, "path")?).map_err(fail)?;
        store(out, m)
    })
}

/// # Safety
/// `m` must be a live handle and `path` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn sm_matrix_write_mtx(m: *const SmMatrix, path: *const c_char) -> SmStatus {
    guard(|| {
        let m = matrix_arg(m, "matrix")?;
        m.write_mtx_file(str_arg(path, "path")?).map_err(fail)
    })
}

fn sparse_options(o: &SmOptions) -> SparseOptions {
    let mut opts = SparseOptions {
        backend: Backend::InputSparse(InputSparseConfig {
            delta: if o.delta == 0 {
                DeltaPolicy::default()
            } else {
                DeltaPolicy::Fixed(o.delta as usize)
            },
            dense: if o.strassen != 0 { DenseAlgo::strassen() } else { DenseAlgo::Naive },
            ..Default::default()
        }),
        ..Default::default()
    };
    opts.densify.seed = o.seed;
    opts.densify.hash = if o.random_hash != 0 {
        HashMode::Random
    } else {
        HashMode::Deterministic
    };
    opts
}

/// `out = a·b` through the output-sensitive pipeline. `opts` may be null for
/// defaults.
///
/// # Safety
/// `a`, `b` must be live handles, `opts` null or valid, `out` valid.
#[no_mangle]
pub unsafe extern "C" fn sm_multiply(
    a: *const SmMatrix,
    b: *const SmMatrix,
    opts: *const SmOptions,
    out: *mut *mut SmMatrix,
) -> SmStatus {
    guard(|| {
        check_out(out)?;
        let (a, b) = (matrix_arg(a, "a")?, matrix_arg(b, "b")?);
        let o = opts.as_ref().copied().unwrap_or_else(|| sm_options_default());
        let (c, _) = a.multiply(b, &sparse_options(&o)).map_err(fail)?;
        store(out, c)
    })
}

/// `out = a·b` by direct row-by-row accumulation.
///
/// # Safety
/// `a`, `b` must be live handles and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn sm_naive_multiply(a: *const SmMatrix, b: *const SmMatrix, out: *mut *mut SmMatrix) -> SmStatus {
    guard(|| {
        check_out(out)?;
        let (a, b) = (matrix_arg(a, "a")?, matrix_arg(b, "b")?);
        let c = a.naive_multiply(b).map_err(fail)?;
        store(out, c)
    })
}

/// Sets `*ok` to 1 when `c = a·b` (Freivalds' check with `repetitions`
/// rounds; exact comparison for Boolean matrices), else 0.
///
/// # Safety
/// All handles must be live and `ok` valid.
#[no_mangle]
pub unsafe extern "C" fn sm_verify(
    a: *const SmMatrix,
    b: *const SmMatrix,
    c: *const SmMatrix,
    repetitions: usize,
    seed: u64,
    ok: *mut i32,
) -> SmStatus {
    guard(|| {
        let (a, b, c) = (matrix_arg(a, "a")?, matrix_arg(b, "b")?, matrix_arg(c, "c")?);
        if ok.is_null() {
            return Err(null("ok"));
        }
        let v = AnyMatrix::verify_product(a, b, c, repetitions, seed).map_err(fail)?;
        *ok = i32::from(v);
        Ok(())
    })
}

/// Upper bound on `σ(r)` for `r ∈ [0, 2]`, with the built-in table of
/// rectangular bounds for the `Lp` method.
///
/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn sm_sigma(r: f64, method: SmSigmaMethod, out: *mut f64) -> SmStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let m = match method {
            SmSigmaMethod::Lp => SigmaMethod::Lp,
            SmSigmaMethod::Algebraic => SigmaMethod::Algebraic,
            SmSigmaMethod::Omega2 => SigmaMethod::Omega2,
            SmSigmaMethod::Trivial => SigmaMethod::Trivial,
        };
        let v = exponent::sigma(r, m, &OmegaTable::default_bounds(), &SigmaOptions::default()).map_err(fail)?;
        *out = v;
        Ok(())
    })
}
