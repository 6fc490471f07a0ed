//! Seeded instance generators.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::matrix::SparseMatrix;
use crate::scalar::{Integer, NonNegative, Semiring};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Each cell is nonzero independently with probability `density`, with a
/// value drawn by `value` (zeros it returns are dropped).
pub fn random_sparse<D, R, F>(dom: &D, rows: usize, cols: usize, density: f64, rng: &mut R, mut value: F) -> SparseMatrix<D::Elem>
where
    D: Semiring,
    R: Rng,
    F: FnMut(&mut R) -> D::Elem,
{
    let mut t = Vec::new();
    if density > 0.0 {
        for i in 0..rows {
            for j in 0..cols {
                if rng.gen_bool(density.min(1.0)) {
                    t.push((i, j, value(rng)));
                }
            }
        }
    }
    SparseMatrix::from_triplets(dom, rows, cols, t).expect("generated indices are in range")
}

/// Signed entries in `[-bound, bound] \ {0}`.
pub fn random_int<R: Rng>(rows: usize, cols: usize, density: f64, bound: i64, rng: &mut R) -> SparseMatrix<i64> {
    random_sparse(&Integer, rows, cols, density, rng, |r| {
        let v = r.gen_range(1..=bound);
        if r.gen() {
            v
        } else {
            -v
        }
    })
}

/// `n x n` factors with one entry per row of `A` and two per row of `B`, so
/// `m_in = 3n` and `m_out` is about `2n`.
pub fn fully_sparse(n: usize, seed: u64) -> (SparseMatrix<u64>, SparseMatrix<u64>) {
    let mut rng = rng(seed);
    let a = SparseMatrix::from_triplets(&NonNegative, n, n, (0..n).map(|i| (i, rng.gen_range(0..n), 1))).unwrap();
    let mut t = Vec::with_capacity(2 * n);
    for k in 0..n {
        let j = rng.gen_range(0..n);
        t.push((k, j, 1));
        t.push((k, (j + 1 + rng.gen_range(0..n.max(2) - 1)) % n, 1));
    }
    let b = SparseMatrix::from_triplets(&NonNegative, n, n, t).unwrap();
    (a, b)
}

/// A few dense columns in `A` and dense rows in `B` on top of a sparse
/// background: Zipf-like degrees.
pub fn skewed_degree(n: usize, seed: u64) -> (SparseMatrix<u64>, SparseMatrix<u64>) {
    let mut rng = rng(seed);
    let heavy = ((n as f64).sqrt() as usize).max(1);
    let mut ta = Vec::new();
    let mut tb = Vec::new();
    for k in 0..n {
        // Column k of A and row k of B have about n / (k + 1) entries.
        let deg = (n / (k + 1)).clamp(1, n);
        for i in rand::seq::index::sample(&mut rng, n, deg.min(heavy * 4)) {
            ta.push((i, k, rng.gen_range(1..4)));
        }
        for j in rand::seq::index::sample(&mut rng, n, 1 + (k % 2)) {
            tb.push((k, j, rng.gen_range(1..4)));
        }
    }
    (
        SparseMatrix::from_triplets(&NonNegative, n, n, ta).unwrap(),
        SparseMatrix::from_triplets(&NonNegative, n, n, tb).unwrap(),
    )
}

/// Row `2i + 1` of `A` is the negation of row `2i`, so the plain sum of any
/// folded row pair is zero. `rows` is rounded up to even.
pub fn planted_cancellation(rows: usize, inner: usize, cols: usize, density: f64, seed: u64) -> (SparseMatrix<i64>, SparseMatrix<i64>) {
    let mut rng = rng(seed);
    let half = rows.div_ceil(2);
    let top = random_int(half, inner, density, 9, &mut rng);
    let mut t = Vec::with_capacity(2 * top.nnz());
    for (i, k, v) in top.entries() {
        t.push((2 * i, k, *v));
        t.push((2 * i + 1, k, -*v));
    }
    let a = SparseMatrix::from_triplets(&Integer, 2 * half, inner, t).unwrap();
    let b = random_int(inner, cols, density, 9, &mut rng);
    (a, b)
}

/// All-ones column times all-ones row: `m_in = 2n`, `m_out = n²`.
pub fn rank1_dense_output(n: usize) -> (SparseMatrix<u64>, SparseMatrix<u64>) {
    (
        SparseMatrix::from_triplets(&NonNegative, n, 1, (0..n).map(|i| (i, 0, 1))).unwrap(),
        SparseMatrix::from_triplets(&NonNegative, 1, n, (0..n).map(|j| (0, j, 1))).unwrap(),
    )
}

/// Random permutation of `0..n`.
pub fn permutation<R: Rng>(n: usize, rng: &mut R) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    p.shuffle(rng);
    p
}
