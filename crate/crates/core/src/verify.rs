use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::matrix::SparseMatrix;
use crate::scalar::Semiring;

fn mat_vec<D: Semiring>(dom: &D, m: &SparseMatrix<D::Elem>, v: &[D::Elem]) -> Result<Vec<D::Elem>> {
    (0..m.rows())
        .map(|i| {
            let (cols, vals) = m.row(i);
            let mut acc = dom.zero();
            for (&j, a) in cols.iter().zip(vals) {
                if !dom.is_zero(&v[j]) {
                    dom.add_assign(&mut acc, &dom.mul(a, &v[j])?)?;
                }
            }
            Ok(acc)
        })
        .collect()
}

/// Freivalds' check of `C = AB` with random 0/1 vectors.
///
/// Returns `true` whenever `C = AB`. Over a ring, a wrong `C` is accepted
/// with probability at most `2^-repetitions`: a nonzero row of `AB - C`
/// dotted with a uniform 0/1 vector vanishes with probability at most 1/2.
/// The check compares `A(Bv)` with `Cv` and never subtracts, so it also runs
/// over semirings, where that bound does not apply.
pub fn freivalds_verify<D: Semiring>(
    dom: &D,
    a: &SparseMatrix<D::Elem>,
    b: &SparseMatrix<D::Elem>,
    c: &SparseMatrix<D::Elem>,
    repetitions: usize,
    seed: u64,
) -> Result<bool> {
    if a.cols() != b.rows() || c.rows() != a.rows() || c.cols() != b.cols() {
        return Err(Error::DimensionMismatch(format!(
            "A {}x{}, B {}x{}, C {}x{}",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols(),
            c.rows(),
            c.cols()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..repetitions {
        let v: Vec<D::Elem> = (0..b.cols())
            .map(|_| if rng.gen::<bool>() { dom.one() } else { dom.zero() })
            .collect();
        let bv = mat_vec(dom, b, &v)?;
        let abv = mat_vec(dom, a, &bv)?;
        let cv = mat_vec(dom, c, &v)?;
        if abv != cv {
            return Ok(false);
        }
    }
    Ok(true)
}
