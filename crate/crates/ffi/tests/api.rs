use std::ffi::{CStr, CString};
use std::ptr;

use sparsemul_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(sm_last_error()) }.to_string_lossy().into_owned()
}

fn matrix(domain: &str, rows: usize, cols: usize, t: &[(usize, usize, i64)]) -> (SmStatus, *mut SmMatrix) {
    let d = CString::new(domain).unwrap();
    let r: Vec<usize> = t.iter().map(|e| e.0).collect();
    let c: Vec<usize> = t.iter().map(|e| e.1).collect();
    let v: Vec<i64> = t.iter().map(|e| e.2).collect();
    let mut out = ptr::null_mut();
    let s = unsafe { sm_matrix_new(d.as_ptr(), rows, cols, r.as_ptr(), c.as_ptr(), v.as_ptr(), t.len(), &mut out) };
    (s, out)
}

fn entries(m: *const SmMatrix) -> Vec<(usize, usize, i64)> {
    let n = unsafe { sm_matrix_nnz(m) };
    let (mut r, mut c, mut v) = (vec![0; n], vec![0; n], vec![0; n]);
    let s = unsafe { sm_matrix_entries(m, r.as_mut_ptr(), c.as_mut_ptr(), v.as_mut_ptr(), n) };
    assert_eq!(s, SmStatus::Ok);
    (0..n).map(|k| (r[k], c[k], v[k])).collect()
}

#[test]
fn multiply_matches_naive_and_verifies() {
    let (s, a) = matrix("int", 2, 2, &[(0, 0, 1), (0, 1, 2), (1, 1, 3)]);
    assert_eq!(s, SmStatus::Ok);
    let (_, b) = matrix("int", 2, 2, &[(0, 0, 1), (1, 0, 1), (1, 1, 1)]);
    let mut c = ptr::null_mut();
    let opts = sm_options_default();
    assert_eq!(unsafe { sm_multiply(a, b, &opts, &mut c) }, SmStatus::Ok);
    assert_eq!(entries(c), vec![(0, 0, 3), (0, 1, 2), (1, 0, 3), (1, 1, 3)]);
    let mut n = ptr::null_mut();
    assert_eq!(unsafe { sm_naive_multiply(a, b, &mut n) }, SmStatus::Ok);
    assert_eq!(entries(n), entries(c));
    let mut ok = 0;
    assert_eq!(unsafe { sm_verify(a, b, c, 20, 1, &mut ok) }, SmStatus::Ok);
    assert_eq!(ok, 1);
    assert_eq!(unsafe { sm_verify(a, b, a, 20, 1, &mut ok) }, SmStatus::Ok);
    assert_eq!(ok, 0);
    unsafe {
        for m in [a, b, c, n] {
            sm_matrix_free(m);
        }
    }
}

#[test]
fn error_codes() {
    let (s, m) = matrix("bool", 1, 1, &[(0, 0, 2)]);
    assert_eq!(s, SmStatus::ValueOutsideDomain);
    assert!(m.is_null());
    assert!(last_error().contains("bool"));

    let (s, _) = matrix("int", 1, 1, &[(3, 0, 1)]);
    assert_eq!(s, SmStatus::IndexOutOfRange);
    let (s, _) = matrix("real", 1, 1, &[]);
    assert_eq!(s, SmStatus::InvalidArgument);

    let (_, a) = matrix("int", 2, 3, &[]);
    let (_, b) = matrix("int", 2, 3, &[]);
    let (_, z) = matrix("gf2", 3, 3, &[]);
    let mut c = ptr::null_mut();
    assert_eq!(unsafe { sm_multiply(a, b, ptr::null(), &mut c) }, SmStatus::DimensionMismatch);
    assert_eq!(unsafe { sm_multiply(a, z, ptr::null(), &mut c) }, SmStatus::DomainMismatch);
    assert_eq!(unsafe { sm_multiply(ptr::null(), b, ptr::null(), &mut c) }, SmStatus::NullPointer);
    assert_eq!(unsafe { sm_multiply(a, b, ptr::null(), ptr::null_mut()) }, SmStatus::NullPointer);

    let (_, full) = matrix("int", 1, 2, &[(0, 0, 1), (0, 1, 1)]);
    let (mut r, mut cc, mut v) = ([0usize; 1], [0usize; 1], [0i64; 1]);
    let s = unsafe { sm_matrix_entries(full, r.as_mut_ptr(), cc.as_mut_ptr(), v.as_mut_ptr(), 1) };
    assert_eq!(s, SmStatus::BufferTooSmall);
    unsafe {
        for m in [a, b, z, full] {
            sm_matrix_free(m);
        }
        sm_matrix_free(ptr::null_mut());
    }
}

#[test]
fn shape_queries_and_mtx_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = CString::new(dir.path().join("m.mtx").to_str().unwrap()).unwrap();
    let (_, m) = matrix("zmod:5", 3, 4, &[(2, 3, 4), (0, 0, 1)]);
    assert_eq!(unsafe { (sm_matrix_rows(m), sm_matrix_cols(m), sm_matrix_nnz(m)) }, (3, 4, 2));
    assert_eq!(unsafe { sm_matrix_write_mtx(m, path.as_ptr()) }, SmStatus::Ok);
    let d = CString::new("zmod:5").unwrap();
    let mut back = ptr::null_mut();
    assert_eq!(unsafe { sm_matrix_read_mtx(d.as_ptr(), path.as_ptr(), &mut back) }, SmStatus::Ok);
    assert_eq!(entries(back), entries(m));
    let missing = CString::new(dir.path().join("nope.mtx").to_str().unwrap()).unwrap();
    assert_eq!(unsafe { sm_matrix_read_mtx(d.as_ptr(), missing.as_ptr(), &mut back) }, SmStatus::Io);
    assert_eq!(unsafe { sm_matrix_rows(ptr::null()) }, 0);
    unsafe {
        sm_matrix_free(m);
        sm_matrix_free(back);
    }
}

#[test]
fn sigma_bounds() {
    let mut v = 0.0;
    assert_eq!(unsafe { sm_sigma(1.0, SmSigmaMethod::Omega2, &mut v) }, SmStatus::Ok);
    assert!((v - 4.0 / 3.0).abs() < 1e-12);
    assert_eq!(unsafe { sm_sigma(1.0, SmSigmaMethod::Lp, &mut v) }, SmStatus::Ok);
    assert!((v - 1.3458).abs() < 2e-4);
    assert_eq!(unsafe { sm_sigma(3.0, SmSigmaMethod::Trivial, &mut v) }, SmStatus::InvalidArgument);
}
