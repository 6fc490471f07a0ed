//! Row-by-row (Gustavson) sparse product. Every other multiply in the crate
//! is tested against this one.

use crate::error::{Error, Result};
use crate::matrix::SparseMatrix;
use crate::scalar::Semiring;

pub(crate) fn check_dims<E>(a: &SparseMatrix<E>, b: &SparseMatrix<E>) -> Result<()>
where
    E: Clone + PartialEq,
{
    if a.cols() != b.rows() {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} times {}x{}",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        )));
    }
    Ok(())
}

/// Scatter/gather accumulator over one output row.
pub(crate) struct RowAccumulator<E> {
    slots: Vec<Option<E>>,
    touched: Vec<usize>,
}

impl<E: Clone> RowAccumulator<E> {
    pub(crate) fn new(width: usize) -> Self {
        RowAccumulator {
            slots: vec![None; width],
            touched: Vec::new(),
        }
    }

    pub(crate) fn add<D: Semiring<Elem = E>>(&mut self, dom: &D, j: usize, v: E) -> Result<()> {
        match &mut self.slots[j] {
            Some(acc) => dom.add_assign(acc, &v)?,
            slot @ None => {
                *slot = Some(v);
                self.touched.push(j);
            }
        }
        Ok(())
    }

    /// Sorted nonzero entries; resets the accumulator.
    pub(crate) fn drain<D: Semiring<Elem = E>>(&mut self, dom: &D) -> Vec<(usize, E)> {
        self.touched.sort_unstable();
        let mut out = Vec::with_capacity(self.touched.len());
        for &j in &self.touched {
            if let Some(v) = self.slots[j].take() {
                if !dom.is_zero(&v) {
                    out.push((j, v));
                }
            }
        }
        self.touched.clear();
        out
    }
}

/// Exact product `AB`.
pub fn naive_multiply<D: Semiring>(
    dom: &D,
    a: &SparseMatrix<D::Elem>,
    b: &SparseMatrix<D::Elem>,
) -> Result<SparseMatrix<D::Elem>> {
    check_dims(a, b)?;
    let mut acc = RowAccumulator::new(b.cols());
    let mut per_row = Vec::with_capacity(a.rows());
    for i in 0..a.rows() {
        let (ks, avs) = a.row(i);
        for (&k, av) in ks.iter().zip(avs) {
            let (js, bvs) = b.row(k);
            for (&j, bv) in js.iter().zip(bvs) {
                acc.add(dom, j, dom.mul(av, bv)?)?;
            }
        }
        per_row.push(acc.drain(dom));
    }
    Ok(SparseMatrix::from_canonical_rows(a.rows(), b.cols(), per_row))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{Boolean, Integer};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn int(rows: usize, cols: usize, dense: &[i64]) -> SparseMatrix<i64> {
        let ts = dense
            .iter()
            .enumerate()
            .map(|(p, &v)| (p / cols, p % cols, v))
            .collect::<Vec<_>>();
        SparseMatrix::from_triplets(&Integer, rows, cols, ts).unwrap()
    }

    #[test]
    fn identity_times_identity() {
        let id = SparseMatrix::identity(&Integer, 2);
        assert_eq!(naive_multiply(&Integer, &id, &id).unwrap(), id);
    }

    #[test]
    fn two_by_two_example() {
        let a = int(2, 2, &[1, 2, 0, 3]);
        let b = int(2, 2, &[1, 0, 1, 1]);
        // Hand triple loop: [[1+2, 2], [3, 3]].
        assert_eq!(naive_multiply(&Integer, &a, &b).unwrap(), int(2, 2, &[3, 2, 3, 3]));
    }

    #[test]
    fn boolean_row_times_column_saturates() {
        let n = 9;
        let row = SparseMatrix::from_triplets(&Boolean, 1, n, (0..n).map(|k| (0, k, true))).unwrap();
        let col = row.transpose();
        let c = naive_multiply(&Boolean, &row, &col).unwrap();
        assert_eq!(c.to_triplets(), vec![(0, 0, true)]);
    }

    #[test]
    fn dimension_mismatch() {
        let a = SparseMatrix::<i64>::zeros(2, 3);
        assert!(matches!(naive_multiply(&Integer, &a, &a), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn transpose_identity_holds() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let (x, y, z) = (rng.gen_range(1..20), rng.gen_range(1..20), rng.gen_range(1..20));
            let gen = |rng: &mut ChaCha8Rng, r: usize, c: usize| {
                let ts: Vec<_> = (0..r * c / 4).map(|_| (rng.gen_range(0..r), rng.gen_range(0..c), rng.gen_range(-3..4))).collect();
                SparseMatrix::from_triplets(&Integer, r, c, ts).unwrap()
            };
            let a = gen(&mut rng, x, y);
            let b = gen(&mut rng, y, z);
            let direct = naive_multiply(&Integer, &a, &b).unwrap();
            let via_t = naive_multiply(&Integer, &b.transpose(), &a.transpose()).unwrap().transpose();
            assert_eq!(direct, via_t);
            assert!(direct.support().len() <= x * z);
        }
    }
}
