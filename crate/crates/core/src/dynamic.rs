//! Matrices whose domain is chosen at run time, for the CLI and the C API.

use std::fmt;
use std::io::{Read, Write};
use std::path::Path;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::matrix::SparseMatrix;
use crate::mtx;
use crate::naive::naive_multiply;
use crate::pipeline::{multiply_sparse, SparseOptions};
use crate::scalar::{BigInteger, Boolean, Integer, NonNegative, Semiring, ZMod};
use crate::trace::Trace;
use crate::verify::freivalds_verify;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DomainKind {
    Bool,
    NonNeg,
    Int,
    BigInt,
    ZMod(u64),
}

impl FromStr for DomainKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bool" => Ok(DomainKind::Bool),
            "nonneg" => Ok(DomainKind::NonNeg),
            "int" => Ok(DomainKind::Int),
            "bigint" => Ok(DomainKind::BigInt),
            "gf2" => Ok(DomainKind::ZMod(2)),
            _ => {
                let k = s
                    .strip_prefix("zmod:")
                    .and_then(|k| k.parse::<u64>().ok())
                    .ok_or_else(|| Error::InvalidArgument(format!("unknown domain {s:?}")))?;
                ZMod::new(k)?;
                Ok(DomainKind::ZMod(k))
            }
        }
    }
}

impl fmt::Display for DomainKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DomainKind::Bool => write!(f, "bool"),
            DomainKind::NonNeg => write!(f, "nonneg"),
            DomainKind::Int => write!(f, "int"),
            DomainKind::BigInt => write!(f, "bigint"),
            DomainKind::ZMod(k) => write!(f, "zmod:{k}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum AnyMatrix {
    Bool(SparseMatrix<bool>),
    NonNeg(SparseMatrix<u64>),
    Int(SparseMatrix<i64>),
    BigInt(SparseMatrix<BigInt>),
    ZMod(ZMod, SparseMatrix<u64>),
}

/// Runs `$body` with `$dom` bound to the domain and `$m` to the matrix.
macro_rules! with_matrix {
    ($any:expr, $dom:ident, $m:ident => $body:expr) => {
        match $any {
            AnyMatrix::Bool($m) => {
                let $dom = &Boolean;
                $body
            }
            AnyMatrix::NonNeg($m) => {
                let $dom = &NonNegative;
                $body
            }
            AnyMatrix::Int($m) => {
                let $dom = &Integer;
                $body
            }
            AnyMatrix::BigInt($m) => {
                let $dom = &BigInteger;
                $body
            }
            AnyMatrix::ZMod(z, $m) => {
                let $dom = z;
                $body
            }
        }
    };
}

/// Pairs up matrices of one domain and rewraps the result.
macro_rules! with_pair {
    ($a:expr, $b:expr, $dom:ident, $x:ident, $y:ident => $body:expr, $wrap:ident) => {
        match ($a, $b) {
            (AnyMatrix::Bool($x), AnyMatrix::Bool($y)) => {
                let $dom = &Boolean;
                $wrap!(AnyMatrix::Bool, $body)
            }
            (AnyMatrix::NonNeg($x), AnyMatrix::NonNeg($y)) => {
                let $dom = &NonNegative;
                $wrap!(AnyMatrix::NonNeg, $body)
            }
            (AnyMatrix::Int($x), AnyMatrix::Int($y)) => {
                let $dom = &Integer;
                $wrap!(AnyMatrix::Int, $body)
            }
            (AnyMatrix::BigInt($x), AnyMatrix::BigInt($y)) => {
                let $dom = &BigInteger;
                $wrap!(AnyMatrix::BigInt, $body)
            }
            (AnyMatrix::ZMod(z, $x), AnyMatrix::ZMod(w, $y)) if z == w => {
                let $dom = z;
                $wrap!(|m| AnyMatrix::ZMod(*z, m), $body)
            }
            (a, b) => Err(Error::DomainMismatch(format!("{} and {}", a.domain(), b.domain()))),
        }
    };
}

macro_rules! wrap_matrix {
    ($ctor:expr, $body:expr) => {
        $body.map($ctor)
    };
}

macro_rules! wrap_product {
    ($ctor:expr, $body:expr) => {
        $body.map(|(m, t)| (($ctor)(m), t))
    };
}

impl AnyMatrix {
    pub fn domain(&self) -> DomainKind {
        match self {
            AnyMatrix::Bool(_) => DomainKind::Bool,
            AnyMatrix::NonNeg(_) => DomainKind::NonNeg,
            AnyMatrix::Int(_) => DomainKind::Int,
            AnyMatrix::BigInt(_) => DomainKind::BigInt,
            AnyMatrix::ZMod(z, _) => DomainKind::ZMod(z.modulus()),
        }
    }

    pub fn rows(&self) -> usize {
        with_matrix!(self, _d, m => m.rows())
    }

    pub fn cols(&self) -> usize {
        with_matrix!(self, _d, m => m.cols())
    }

    pub fn nnz(&self) -> usize {
        with_matrix!(self, _d, m => m.nnz())
    }

    pub fn zeros(kind: DomainKind, rows: usize, cols: usize) -> Result<Self> {
        Self::from_triplets(kind, rows, cols, &[])
    }

    /// Builds a matrix from integer triplets; each value must be an element
    /// of the domain.
    pub fn from_triplets(kind: DomainKind, rows: usize, cols: usize, triplets: &[(usize, usize, i64)]) -> Result<Self> {
        fn build<D: Semiring>(dom: &D, rows: usize, cols: usize, t: &[(usize, usize, i64)]) -> Result<SparseMatrix<D::Elem>> {
            let converted = t
                .iter()
                .map(|&(i, j, v)| Ok((i, j, dom.from_i64(v)?)))
                .collect::<Result<Vec<_>>>()?;
            SparseMatrix::from_triplets(dom, rows, cols, converted)
        }
        Ok(match kind {
            DomainKind::Bool => AnyMatrix::Bool(build(&Boolean, rows, cols, triplets)?),
            DomainKind::NonNeg => AnyMatrix::NonNeg(build(&NonNegative, rows, cols, triplets)?),
            DomainKind::Int => AnyMatrix::Int(build(&Integer, rows, cols, triplets)?),
            DomainKind::BigInt => AnyMatrix::BigInt(build(&BigInteger, rows, cols, triplets)?),
            DomainKind::ZMod(k) => {
                let z = ZMod::new(k)?;
                AnyMatrix::ZMod(z, build(&z, rows, cols, triplets)?)
            }
        })
    }

    /// Entries as integers; big integers outside the `i64` range fail.
    pub fn triplets_i64(&self) -> Result<Vec<(usize, usize, i64)>> {
        match self {
            AnyMatrix::Bool(m) => Ok(m.entries().map(|(i, j, _)| (i, j, 1)).collect()),
            AnyMatrix::NonNeg(m) | AnyMatrix::ZMod(_, m) => m
                .entries()
                .map(|(i, j, v)| i64::try_from(*v).map(|v| (i, j, v)).map_err(|_| Error::Overflow("i64".into())))
                .collect(),
            AnyMatrix::Int(m) => Ok(m.entries().map(|(i, j, v)| (i, j, *v)).collect()),
            AnyMatrix::BigInt(m) => m
                .entries()
                .map(|(i, j, v)| v.to_i64().map(|v| (i, j, v)).ok_or_else(|| Error::Overflow("i64".into())))
                .collect(),
        }
    }

    pub fn triplets_text(&self) -> Vec<(usize, usize, String)> {
        with_matrix!(self, d, m => m.entries().map(|(i, j, v)| (i, j, d.format(v))).collect())
    }

    pub fn transpose(&self) -> Self {
        match self {
            AnyMatrix::Bool(m) => AnyMatrix::Bool(m.transpose()),
            AnyMatrix::NonNeg(m) => AnyMatrix::NonNeg(m.transpose()),
            AnyMatrix::Int(m) => AnyMatrix::Int(m.transpose()),
            AnyMatrix::BigInt(m) => AnyMatrix::BigInt(m.transpose()),
            AnyMatrix::ZMod(z, m) => AnyMatrix::ZMod(*z, m.transpose()),
        }
    }

    pub fn read_mtx<R: Read>(kind: DomainKind, reader: R) -> Result<Self> {
        Ok(match kind {
            DomainKind::Bool => AnyMatrix::Bool(mtx::read_sparse(&Boolean, reader)?),
            DomainKind::NonNeg => AnyMatrix::NonNeg(mtx::read_sparse(&NonNegative, reader)?),
            DomainKind::Int => AnyMatrix::Int(mtx::read_sparse(&Integer, reader)?),
            DomainKind::BigInt => AnyMatrix::BigInt(mtx::read_sparse(&BigInteger, reader)?),
            DomainKind::ZMod(k) => {
                let z = ZMod::new(k)?;
                AnyMatrix::ZMod(z, mtx::read_sparse(&z, reader)?)
            }
        })
    }

    pub fn read_mtx_file(kind: DomainKind, path: impl AsRef<Path>) -> Result<Self> {
        Self::read_mtx(kind, std::fs::File::open(path)?)
    }

    pub fn write_mtx<W: Write>(&self, writer: W) -> Result<()> {
        with_matrix!(self, d, m => mtx::write_sparse(d, m, writer))
    }

    pub fn write_mtx_file(&self, path: impl AsRef<Path>) -> Result<()> {
        with_matrix!(self, d, m => mtx::write_sparse_file(d, m, path))
    }

    pub fn multiply(&self, other: &AnyMatrix, opts: &SparseOptions) -> Result<(AnyMatrix, Trace)> {
        with_pair!(self, other, d, a, b => multiply_sparse(d, a, b, opts), wrap_product)
    }

    pub fn naive_multiply(&self, other: &AnyMatrix) -> Result<AnyMatrix> {
        with_pair!(self, other, d, a, b => naive_multiply(d, a, b), wrap_matrix)
    }

    /// Checks `C = AB`. Boolean products are compared exactly against the
    /// oracle, since OR-semantics defeat Freivalds' bound; every other domain
    /// uses Freivalds' check.
    pub fn verify_product(a: &AnyMatrix, b: &AnyMatrix, c: &AnyMatrix, repetitions: usize, seed: u64) -> Result<bool> {
        match (a, b, c) {
            (AnyMatrix::Bool(_), AnyMatrix::Bool(_), AnyMatrix::Bool(cm)) => {
                let want = a.naive_multiply(b)?;
                if cm.rows() != want.rows() || cm.cols() != want.cols() {
                    return Err(Error::DimensionMismatch(format!(
                        "C is {}x{}, AB is {}x{}",
                        cm.rows(),
                        cm.cols(),
                        want.rows(),
                        want.cols()
                    )));
                }
                Ok(want == *c)
            }
            (AnyMatrix::NonNeg(x), AnyMatrix::NonNeg(y), AnyMatrix::NonNeg(z)) => {
                freivalds_verify(&NonNegative, x, y, z, repetitions, seed)
            }
            (AnyMatrix::Int(x), AnyMatrix::Int(y), AnyMatrix::Int(z)) => freivalds_verify(&Integer, x, y, z, repetitions, seed),
            (AnyMatrix::BigInt(x), AnyMatrix::BigInt(y), AnyMatrix::BigInt(z)) => {
                freivalds_verify(&BigInteger, x, y, z, repetitions, seed)
            }
            (AnyMatrix::ZMod(d, x), AnyMatrix::ZMod(e, y), AnyMatrix::ZMod(f, z)) if d == e && e == f => {
                freivalds_verify(d, x, y, z, repetitions, seed)
            }
            _ => Err(Error::DomainMismatch(format!("{}, {} and {}", a.domain(), b.domain(), c.domain()))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_domains() {
        assert_eq!("gf2".parse::<DomainKind>().unwrap(), DomainKind::ZMod(2));
        assert_eq!("zmod:4".parse::<DomainKind>().unwrap(), DomainKind::ZMod(4));
        assert!("zmod:1".parse::<DomainKind>().is_err());
        assert!("real".parse::<DomainKind>().is_err());
        for s in ["bool", "nonneg", "int", "bigint", "zmod:7"] {
            assert_eq!(s.parse::<DomainKind>().unwrap().to_string(), s);
        }
    }

    #[test]
    fn multiply_and_verify_every_domain() {
        let t = [(0, 0, 1), (0, 2, 1), (1, 1, 1), (2, 0, 1)];
        for kind in ["bool", "nonneg", "int", "bigint", "zmod:3"] {
            let kind: DomainKind = kind.parse().unwrap();
            let a = AnyMatrix::from_triplets(kind, 3, 3, &t).unwrap();
            let (c, _) = a.multiply(&a, &SparseOptions::default()).unwrap();
            assert_eq!(c, a.naive_multiply(&a).unwrap());
            assert!(AnyMatrix::verify_product(&a, &a, &c, 20, 1).unwrap());
            let wrong = c.naive_multiply(&AnyMatrix::zeros(kind, 3, 3).unwrap()).unwrap();
            assert!(!AnyMatrix::verify_product(&a, &a, &wrong, 20, 1).unwrap());
        }
    }

    #[test]
    fn mixed_domains_rejected() {
        let a = AnyMatrix::zeros(DomainKind::Int, 2, 2).unwrap();
        let b = AnyMatrix::zeros(DomainKind::Bool, 2, 2).unwrap();
        assert!(matches!(a.multiply(&b, &SparseOptions::default()), Err(Error::DomainMismatch(_))));
        let z3 = AnyMatrix::zeros(DomainKind::ZMod(3), 2, 2).unwrap();
        let z5 = AnyMatrix::zeros(DomainKind::ZMod(5), 2, 2).unwrap();
        assert!(z3.naive_multiply(&z5).is_err());
    }

    #[test]
    fn mtx_round_trip() {
        let a = AnyMatrix::from_triplets(DomainKind::Int, 2, 3, &[(0, 1, -4), (1, 2, 9)]).unwrap();
        let mut buf = Vec::new();
        a.write_mtx(&mut buf).unwrap();
        assert_eq!(AnyMatrix::read_mtx(DomainKind::Int, buf.as_slice()).unwrap(), a);
        assert_eq!(a.triplets_i64().unwrap(), vec![(0, 1, -4), (1, 2, 9)]);
    }

    #[test]
    fn values_outside_domain() {
        assert!(AnyMatrix::from_triplets(DomainKind::Bool, 1, 1, &[(0, 0, 2)]).is_err());
        assert!(AnyMatrix::from_triplets(DomainKind::NonNeg, 1, 1, &[(0, 0, -1)]).is_err());
        assert!(AnyMatrix::from_triplets(DomainKind::ZMod(4), 1, 1, &[(0, 0, 4)]).is_err());
    }
}
