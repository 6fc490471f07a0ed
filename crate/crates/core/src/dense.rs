//! Row-major dense matrices and the dense multiplication backends.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{Ring, Semiring};

/// Which dense algorithm the backend runs.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum DenseAlgo {
    #[default]
    Naive,
    /// Strassen recursion; blocks whose smallest side is at most `cutoff`
    /// are multiplied naively.
    Strassen { cutoff: usize },
}

impl DenseAlgo {
    pub const DEFAULT_CUTOFF: usize = 64;

    pub fn strassen() -> Self {
        DenseAlgo::Strassen {
            cutoff: Self::DEFAULT_CUTOFF,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DenseMatrix<E> {
    rows: usize,
    cols: usize,
    data: Vec<E>,
}

impl<E: Clone> DenseMatrix<E> {
    pub fn filled(rows: usize, cols: usize, value: E) -> Self {
        DenseMatrix {
            rows,
            cols,
            data: vec![value; rows * cols],
        }
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<E>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} values for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(DenseMatrix { rows, cols, data })
    }

    pub fn from_rows(rows: Vec<Vec<E>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Ok(DenseMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn identity<D: Semiring<Elem = E>>(dom: &D, n: usize) -> Self {
        let mut m = Self::filled(n, n, dom.zero());
        for i in 0..n {
            m.data[i * n + i] = dom.one();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn values(&self) -> &[E] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> &E {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: E) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[E] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn map<F, T>(&self, f: F) -> DenseMatrix<T>
    where
        F: Fn(&E) -> T,
    {
        DenseMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn try_map<F, T>(&self, f: F) -> Result<DenseMatrix<T>>
    where
        F: Fn(&E) -> Result<T>,
    {
        Ok(DenseMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect::<Result<_>>()?,
        })
    }

    /// Copies the block starting at `(r0, c0)` of size `rows x cols`,
    /// reading zeros past the boundary.
    fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize, zero: &E) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in r0..r0 + rows {
            for j in c0..c0 + cols {
                if i < self.rows && j < self.cols {
                    data.push(self.data[i * self.cols + j].clone());
                } else {
                    data.push(zero.clone());
                }
            }
        }
        DenseMatrix { rows, cols, data }
    }

    fn paste(&mut self, r0: usize, c0: usize, src: &Self) {
        for i in 0..src.rows {
            if r0 + i >= self.rows {
                break;
            }
            for j in 0..src.cols {
                if c0 + j >= self.cols {
                    break;
                }
                self.data[(r0 + i) * self.cols + c0 + j] = src.data[i * src.cols + j].clone();
            }
        }
    }
}

fn check_inner<E>(a: &DenseMatrix<E>, b: &DenseMatrix<E>) -> Result<()> {
    if a.cols != b.rows {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} times {}x{}",
            a.rows, a.cols, b.rows, b.cols
        )));
    }
    Ok(())
}

/// Triple loop in i-k-j order, skipping zero entries of `a`.
pub fn multiply_naive<D: Semiring>(
    dom: &D,
    a: &DenseMatrix<D::Elem>,
    b: &DenseMatrix<D::Elem>,
) -> Result<DenseMatrix<D::Elem>> {
    check_inner(a, b)?;
    let (x, y, z) = (a.rows, a.cols, b.cols);
    let mut out = DenseMatrix::filled(x, z, dom.zero());
    for i in 0..x {
        for k in 0..y {
            let aik = &a.data[i * y + k];
            if dom.is_zero(aik) {
                continue;
            }
            let brow = &b.data[k * z..(k + 1) * z];
            let orow = &mut out.data[i * z..(i + 1) * z];
            for (o, bkj) in orow.iter_mut().zip(brow) {
                if !dom.is_zero(bkj) {
                    dom.add_assign(o, &dom.mul(aik, bkj)?)?;
                }
            }
        }
    }
    Ok(out)
}

/// Dense product over a ring with the chosen algorithm.
pub fn multiply<R: Ring>(
    ring: &R,
    a: &DenseMatrix<R::Elem>,
    b: &DenseMatrix<R::Elem>,
    algo: DenseAlgo,
) -> Result<DenseMatrix<R::Elem>> {
    check_inner(a, b)?;
    match algo {
        DenseAlgo::Naive => multiply_naive(ring, a, b),
        DenseAlgo::Strassen { cutoff } => strassen(ring, a, b, cutoff.max(1)),
    }
}

fn elementwise<R: Ring>(
    ring: &R,
    a: &DenseMatrix<R::Elem>,
    b: &DenseMatrix<R::Elem>,
    subtract: bool,
) -> Result<DenseMatrix<R::Elem>> {
    let data = a
        .data
        .iter()
        .zip(&b.data)
        .map(|(u, v)| if subtract { ring.sub(u, v) } else { ring.add(u, v) })
        .collect::<Result<Vec<_>>>()?;
    Ok(DenseMatrix {
        rows: a.rows,
        cols: a.cols,
        data,
    })
}

/// Rectangular Strassen. Each level pads every odd dimension by one zero
/// row or column and splits into 2x2 blocks.
fn strassen<R: Ring>(
    ring: &R,
    a: &DenseMatrix<R::Elem>,
    b: &DenseMatrix<R::Elem>,
    cutoff: usize,
) -> Result<DenseMatrix<R::Elem>> {
    let (x, y, z) = (a.rows, a.cols, b.cols);
    if x.min(y).min(z) <= cutoff {
        return multiply_naive(ring, a, b);
    }
    let (hx, hy, hz) = (x.div_ceil(2), y.div_ceil(2), z.div_ceil(2));
    let zero = ring.zero();
    let a11 = a.block(0, 0, hx, hy, &zero);
    let a12 = a.block(0, hy, hx, hy, &zero);
    let a21 = a.block(hx, 0, hx, hy, &zero);
    let a22 = a.block(hx, hy, hx, hy, &zero);
    let b11 = b.block(0, 0, hy, hz, &zero);
    let b12 = b.block(0, hz, hy, hz, &zero);
    let b21 = b.block(hy, 0, hy, hz, &zero);
    let b22 = b.block(hy, hz, hy, hz, &zero);

    let add = |p: &DenseMatrix<R::Elem>, q: &DenseMatrix<R::Elem>| elementwise(ring, p, q, false);
    let sub = |p: &DenseMatrix<R::Elem>, q: &DenseMatrix<R::Elem>| elementwise(ring, p, q, true);
    let rec = |p: &DenseMatrix<R::Elem>, q: &DenseMatrix<R::Elem>| strassen(ring, p, q, cutoff);

    let m1 = rec(&add(&a11, &a22)?, &add(&b11, &b22)?)?;
    let m2 = rec(&add(&a21, &a22)?, &b11)?;
    let m3 = rec(&a11, &sub(&b12, &b22)?)?;
    let m4 = rec(&a22, &sub(&b21, &b11)?)?;
    let m5 = rec(&add(&a11, &a12)?, &b22)?;
    let m6 = rec(&sub(&a21, &a11)?, &add(&b11, &b12)?)?;
    let m7 = rec(&sub(&a12, &a22)?, &add(&b21, &b22)?)?;

    let c11 = add(&sub(&add(&m1, &m4)?, &m5)?, &m7)?;
    let c12 = add(&m3, &m5)?;
    let c21 = add(&m2, &m4)?;
    let c22 = add(&add(&sub(&m1, &m2)?, &m3)?, &m6)?;

    let mut out = DenseMatrix::filled(x, z, zero);
    out.paste(0, 0, &c11);
    out.paste(0, hz, &c12);
    out.paste(hx, 0, &c21);
    out.paste(hx, hz, &c22);
    Ok(out)
}
