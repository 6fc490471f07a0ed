//! Scalar domains.
//!
//! A domain is a value carrying the element operations (`zero`, `add`, `mul`,
//! and `neg` for rings), so that moduli and similar parameters can be chosen
//! at run time. All arithmetic is checked: fixed-width domains report
//! [`Error::Overflow`] instead of wrapping.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use crate::dense::{self, DenseAlgo, DenseMatrix};
use crate::error::{Error, Result};

/// A commutative semiring with checked operations.
pub trait Semiring: Clone + fmt::Debug + Send + Sync + 'static {
    type Elem: Clone + PartialEq + fmt::Debug + Send + Sync + 'static;

    fn name(&self) -> String;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem>;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem>;

    /// Whether `a` is a canonical element of this domain.
    fn contains(&self, _a: &Self::Elem) -> bool {
        true
    }

    /// Embeds a machine integer, rejecting values outside the domain.
    fn from_i64(&self, v: i64) -> Result<Self::Elem>;

    fn parse(&self, text: &str) -> Result<Self::Elem>;

    fn format(&self, a: &Self::Elem) -> String;

    /// Dense product used by the dense backend. Domains without negation only
    /// get Strassen by lifting into a signed carrier.
    fn dense_multiply(
        &self,
        a: &DenseMatrix<Self::Elem>,
        b: &DenseMatrix<Self::Elem>,
        _algo: DenseAlgo,
    ) -> Result<DenseMatrix<Self::Elem>> {
        dense::multiply_naive(self, a, b)
    }

    fn add_assign(&self, acc: &mut Self::Elem, b: &Self::Elem) -> Result<()> {
        *acc = self.add(acc, b)?;
        Ok(())
    }

    fn domain_error(&self, value: impl fmt::Display) -> Error {
        Error::ValueOutsideDomain {
            value: value.to_string(),
            domain: self.name(),
        }
    }
}

/// A semiring with additive inverses.
pub trait Ring: Semiring {
    fn neg(&self, a: &Self::Elem) -> Result<Self::Elem>;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem> {
        self.add(a, &self.neg(b)?)
    }
}

/// Semirings in which a sum of nonzero elements is never zero.
///
/// Folding rows by plain addition cannot lose support in these domains, which
/// is what the deterministic nonnegative densification relies on.
pub trait CancellationFree: Semiring {}

/// Rings embedded in the integers, for the random-coefficient densification.
pub trait IntegerDomain: Ring {
    fn to_bigint(&self, a: &Self::Elem) -> BigInt;
    fn from_bigint(&self, v: &BigInt) -> Result<Self::Elem>;
}

fn parse_i64(text: &str) -> Result<i64> {
    text.trim().parse::<i64>().map_err(|e| Error::Parse {
        line: 0,
        message: format!("bad integer {text:?}: {e}"),
    })
}

/// The Boolean semiring ({0,1}, OR, AND).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Boolean;

impl Semiring for Boolean {
    type Elem = bool;

    fn name(&self) -> String {
        "bool".into()
    }
    fn zero(&self) -> bool {
        false
    }
    fn one(&self) -> bool {
        true
    }
    fn is_zero(&self, a: &bool) -> bool {
        !*a
    }
    fn add(&self, a: &bool, b: &bool) -> Result<bool> {
        Ok(*a || *b)
    }
    fn mul(&self, a: &bool, b: &bool) -> Result<bool> {
        Ok(*a && *b)
    }
    fn from_i64(&self, v: i64) -> Result<bool> {
        match v {
            0 => Ok(false),
            1 => Ok(true),
            _ => Err(self.domain_error(v)),
        }
    }
    fn parse(&self, text: &str) -> Result<bool> {
        self.from_i64(parse_i64(text)?)
    }
    fn format(&self, a: &bool) -> String {
        if *a { "1" } else { "0" }.into()
    }
    fn dense_multiply(
        &self,
        a: &DenseMatrix<bool>,
        b: &DenseMatrix<bool>,
        algo: DenseAlgo,
    ) -> Result<DenseMatrix<bool>> {
        let counts = NonNegative.dense_multiply(&a.map(|&v| v as u64), &b.map(|&v| v as u64), algo)?;
        Ok(counts.map(|&c| c != 0))
    }
}

impl CancellationFree for Boolean {}

/// Nonnegative integers in checked 64-bit arithmetic.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct NonNegative;

impl Semiring for NonNegative {
    type Elem = u64;

    fn name(&self) -> String {
        "nonneg".into()
    }
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn add(&self, a: &u64, b: &u64) -> Result<u64> {
        a.checked_add(*b).ok_or_else(|| Error::Overflow(self.name()))
    }
    fn mul(&self, a: &u64, b: &u64) -> Result<u64> {
        a.checked_mul(*b).ok_or_else(|| Error::Overflow(self.name()))
    }
    fn from_i64(&self, v: i64) -> Result<u64> {
        u64::try_from(v).map_err(|_| self.domain_error(v))
    }
    fn parse(&self, text: &str) -> Result<u64> {
        let t = text.trim();
        if t.starts_with('-') {
            return Err(self.domain_error(t));
        }
        t.parse::<u64>().map_err(|e| Error::Parse {
            line: 0,
            message: format!("bad nonnegative integer {t:?}: {e}"),
        })
    }
    fn format(&self, a: &u64) -> String {
        a.to_string()
    }
    fn dense_multiply(
        &self,
        a: &DenseMatrix<u64>,
        b: &DenseMatrix<u64>,
        algo: DenseAlgo,
    ) -> Result<DenseMatrix<u64>> {
        match algo {
            DenseAlgo::Naive => dense::multiply_naive(self, a, b),
            DenseAlgo::Strassen { .. } => {
                let wide = dense::multiply(&Wide, &a.map(|&v| v as i128), &b.map(|&v| v as i128), algo)?;
                wide.try_map(|&v| u64::try_from(v).map_err(|_| Error::Overflow(self.name())))
            }
        }
    }
}

impl CancellationFree for NonNegative {}

/// Integers in checked 64-bit arithmetic.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Integer;

impl Semiring for Integer {
    type Elem = i64;

    fn name(&self) -> String {
        "int".into()
    }
    fn zero(&self) -> i64 {
        0
    }
    fn one(&self) -> i64 {
        1
    }
    fn is_zero(&self, a: &i64) -> bool {
        *a == 0
    }
    fn add(&self, a: &i64, b: &i64) -> Result<i64> {
        a.checked_add(*b).ok_or_else(|| Error::Overflow(self.name()))
    }
    fn mul(&self, a: &i64, b: &i64) -> Result<i64> {
        a.checked_mul(*b).ok_or_else(|| Error::Overflow(self.name()))
    }
    fn from_i64(&self, v: i64) -> Result<i64> {
        Ok(v)
    }
    fn parse(&self, text: &str) -> Result<i64> {
        parse_i64(text)
    }
    fn format(&self, a: &i64) -> String {
        a.to_string()
    }
    fn dense_multiply(&self, a: &DenseMatrix<i64>, b: &DenseMatrix<i64>, algo: DenseAlgo) -> Result<DenseMatrix<i64>> {
        dense::multiply(self, a, b, algo)
    }
}

impl Ring for Integer {
    fn neg(&self, a: &i64) -> Result<i64> {
        a.checked_neg().ok_or_else(|| Error::Overflow(self.name()))
    }
    fn sub(&self, a: &i64, b: &i64) -> Result<i64> {
        a.checked_sub(*b).ok_or_else(|| Error::Overflow(self.name()))
    }
}

impl IntegerDomain for Integer {
    fn to_bigint(&self, a: &i64) -> BigInt {
        BigInt::from(*a)
    }
    fn from_bigint(&self, v: &BigInt) -> Result<i64> {
        v.to_i64().ok_or_else(|| Error::Overflow(self.name()))
    }
}

/// Unbounded integers.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct BigInteger;

impl Semiring for BigInteger {
    type Elem = BigInt;

    fn name(&self) -> String {
        "bigint".into()
    }
    fn zero(&self) -> BigInt {
        BigInt::zero()
    }
    fn one(&self) -> BigInt {
        BigInt::one()
    }
    fn is_zero(&self, a: &BigInt) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigInt, b: &BigInt) -> Result<BigInt> {
        Ok(a + b)
    }
    fn mul(&self, a: &BigInt, b: &BigInt) -> Result<BigInt> {
        Ok(a * b)
    }
    fn add_assign(&self, acc: &mut BigInt, b: &BigInt) -> Result<()> {
        *acc += b;
        Ok(())
    }
    fn from_i64(&self, v: i64) -> Result<BigInt> {
        Ok(BigInt::from(v))
    }
    fn parse(&self, text: &str) -> Result<BigInt> {
        text.trim().parse::<BigInt>().map_err(|e| Error::Parse {
            line: 0,
            message: format!("bad integer {text:?}: {e}"),
        })
    }
    fn format(&self, a: &BigInt) -> String {
        a.to_string()
    }
    fn dense_multiply(
        &self,
        a: &DenseMatrix<BigInt>,
        b: &DenseMatrix<BigInt>,
        algo: DenseAlgo,
    ) -> Result<DenseMatrix<BigInt>> {
        dense::multiply(self, a, b, algo)
    }
}

impl Ring for BigInteger {
    fn neg(&self, a: &BigInt) -> Result<BigInt> {
        Ok(-a)
    }
    fn sub(&self, a: &BigInt, b: &BigInt) -> Result<BigInt> {
        Ok(a - b)
    }
}

impl IntegerDomain for BigInteger {
    fn to_bigint(&self, a: &BigInt) -> BigInt {
        a.clone()
    }
    fn from_bigint(&self, v: &BigInt) -> Result<BigInt> {
        Ok(v.clone())
    }
}

/// The ring Z/kZ with elements stored as canonical residues `0..k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ZMod {
    modulus: u64,
}

impl ZMod {
    pub fn new(modulus: u64) -> Result<Self> {
        if modulus < 2 {
            return Err(Error::InvalidArgument(format!("modulus must be at least 2, got {modulus}")));
        }
        Ok(ZMod { modulus })
    }

    /// GF(2).
    pub fn gf2() -> Self {
        ZMod { modulus: 2 }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn reduce(&self, v: i64) -> u64 {
        v.rem_euclid(self.modulus as i64) as u64
    }
}

impl Semiring for ZMod {
    type Elem = u64;

    fn name(&self) -> String {
        format!("zmod:{}", self.modulus)
    }
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn add(&self, a: &u64, b: &u64) -> Result<u64> {
        Ok(((*a as u128 + *b as u128) % self.modulus as u128) as u64)
    }
    fn mul(&self, a: &u64, b: &u64) -> Result<u64> {
        Ok(((*a as u128 * *b as u128) % self.modulus as u128) as u64)
    }
    fn contains(&self, a: &u64) -> bool {
        *a < self.modulus
    }
    fn from_i64(&self, v: i64) -> Result<u64> {
        if v < 0 || v as u64 >= self.modulus {
            return Err(self.domain_error(v));
        }
        Ok(v as u64)
    }
    fn parse(&self, text: &str) -> Result<u64> {
        // Files may carry any integer representative.
        let v = text.trim().parse::<i128>().map_err(|e| Error::Parse {
            line: 0,
            message: format!("bad integer {text:?}: {e}"),
        })?;
        Ok(v.rem_euclid(self.modulus as i128) as u64)
    }
    fn format(&self, a: &u64) -> String {
        a.to_string()
    }
    fn dense_multiply(&self, a: &DenseMatrix<u64>, b: &DenseMatrix<u64>, algo: DenseAlgo) -> Result<DenseMatrix<u64>> {
        dense::multiply(self, a, b, algo)
    }
}

impl Ring for ZMod {
    fn neg(&self, a: &u64) -> Result<u64> {
        Ok(if *a == 0 { 0 } else { self.modulus - a })
    }
}

/// Signed 128-bit carrier used to run Strassen over nonnegative inputs.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub(crate) struct Wide;

impl Semiring for Wide {
    type Elem = i128;

    fn name(&self) -> String {
        "i128".into()
    }
    fn zero(&self) -> i128 {
        0
    }
    fn one(&self) -> i128 {
        1
    }
    fn is_zero(&self, a: &i128) -> bool {
        *a == 0
    }
    fn add(&self, a: &i128, b: &i128) -> Result<i128> {
        a.checked_add(*b).ok_or_else(|| Error::Overflow(self.name()))
    }
    fn mul(&self, a: &i128, b: &i128) -> Result<i128> {
        a.checked_mul(*b).ok_or_else(|| Error::Overflow(self.name()))
    }
    fn from_i64(&self, v: i64) -> Result<i128> {
        Ok(v as i128)
    }
    fn parse(&self, text: &str) -> Result<i128> {
        Ok(parse_i64(text)? as i128)
    }
    fn format(&self, a: &i128) -> String {
        a.to_string()
    }
}

impl Ring for Wide {
    fn neg(&self, a: &i128) -> Result<i128> {
        a.checked_neg().ok_or_else(|| Error::Overflow(self.name()))
    }
    fn sub(&self, a: &i128, b: &i128) -> Result<i128> {
        a.checked_sub(*b).ok_or_else(|| Error::Overflow(self.name()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn boolean_rejects_two() {
        assert!(matches!(Boolean.from_i64(2), Err(Error::ValueOutsideDomain { .. })));
        assert!(Boolean.from_i64(1).unwrap());
    }

    #[test]
    fn checked_overflow_is_reported() {
        assert_eq!(Integer.mul(&i64::MAX, &2), Err(Error::Overflow("int".into())));
        assert!(NonNegative.add(&u64::MAX, &1).is_err());
        assert!(NonNegative.from_i64(-1).is_err());
    }

    #[test]
    fn zmod_basics() {
        let z4 = ZMod::new(4).unwrap();
        assert_eq!(z4.add(&3, &3).unwrap(), 2);
        assert_eq!(z4.mul(&2, &2).unwrap(), 0);
        assert_eq!(z4.neg(&1).unwrap(), 3);
        assert_eq!(z4.parse("-1").unwrap(), 3);
        assert!(!z4.contains(&4));
        assert!(ZMod::new(1).is_err());
    }

    fn ring_axioms<R: Ring>(r: &R, a: R::Elem, b: R::Elem, c: R::Elem) {
        let ab = r.mul(&a, &b).unwrap();
        assert_eq!(r.mul(&ab, &c).unwrap(), r.mul(&a, &r.mul(&b, &c).unwrap()).unwrap());
        let lhs = r.mul(&a, &r.add(&b, &c).unwrap()).unwrap();
        let rhs = r.add(&ab, &r.mul(&a, &c).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
        assert_eq!(r.add(&a, &r.add(&b, &c).unwrap()).unwrap(), r.add(&r.add(&a, &b).unwrap(), &c).unwrap());
        assert!(r.is_zero(&r.add(&a, &r.neg(&a).unwrap()).unwrap()));
    }

    proptest! {
        #[test]
        fn zmod_ring_axioms(k in 2u64..50, a in 0u64..1000, b in 0u64..1000, c in 0u64..1000) {
            let r = ZMod::new(k).unwrap();
            ring_axioms(&r, a % k, b % k, c % k);
        }

        #[test]
        fn integer_ring_axioms(a in -1000i64..1000, b in -1000i64..1000, c in -1000i64..1000) {
            ring_axioms(&Integer, a, b, c);
            ring_axioms(&BigInteger, BigInt::from(a), BigInt::from(b), BigInt::from(c));
        }

        #[test]
        fn boolean_distributes(a: bool, b: bool, c: bool) {
            let lhs = Boolean.mul(&a, &Boolean.add(&b, &c).unwrap()).unwrap();
            let rhs = Boolean.add(&Boolean.mul(&a, &b).unwrap(), &Boolean.mul(&a, &c).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
