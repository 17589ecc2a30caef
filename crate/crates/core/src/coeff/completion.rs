use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use super::laurent::{LefschetzLaurent, VirtualDim};
use crate::error::{Error, Result};

/// An element of the dimensional completion, known to precision `P`: a
/// Laurent series in `L^-1` whose exponents below `-P` have been dropped.
#[derive(Clone, PartialEq, Eq, Serialize)]
pub struct CompletionElement {
    coeffs: LefschetzLaurent,
    precision: i32,
}

impl CompletionElement {
    pub fn new(value: &LefschetzLaurent, precision: i32) -> Self {
        CompletionElement { coeffs: truncate(value, precision), precision }
    }

    pub fn zero(precision: i32) -> Self {
        Self::new(&LefschetzLaurent::zero(), precision)
    }

    pub fn precision(&self) -> i32 {
        self.precision
    }

    /// The retained terms, all with exponent `>= -precision`.
    pub fn value(&self) -> &LefschetzLaurent {
        &self.coeffs
    }

    /// `1 / (1 - L^-1)^k = Σ_j binom(j + k - 1, k - 1) L^-j`, truncated.
    pub fn inverse_one_minus_linv_pow(k: u32, precision: i32) -> Self {
        if k == 0 {
            return Self::new(&LefschetzLaurent::one(), precision);
        }
        let mut terms = BTreeMap::new();
        for j in 0..=precision.max(0) {
            terms.insert(-j, binomial(j as u64 + k as u64 - 1, k as u64 - 1));
        }
        Self::new(&LefschetzLaurent::from_terms(terms), precision)
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.precision != other.precision {
            return Err(Error::PrecisionMismatch(self.precision, other.precision));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(Self::new(&(&self.coeffs + &other.coeffs), self.precision))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(Self::new(&(&self.coeffs - &other.coeffs), self.precision))
    }

    /// Product, correct through the precision provided both factors have
    /// bounded-above exponents (top exponent `t` of one factor reduces the
    /// reliable range of the other by `t`; callers pass enough precision).
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(Self::new(&(&self.coeffs * &other.coeffs), self.precision))
    }

    /// Multiplies by an exact class.
    pub fn mul_exact(&self, a: &LefschetzLaurent) -> Self {
        Self::new(&(&self.coeffs * a), self.precision)
    }

    /// Top exponent of the retained terms; `MinusInfinity` when every term at
    /// or above `-precision` vanishes.
    pub fn virtual_dim(&self) -> VirtualDim {
        self.coeffs.virtual_dim()
    }

    pub fn specialize_q(&self, q: u64) -> BigRational {
        self.coeffs.specialize_q(q)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_zero()
    }
}

impl fmt::Display for CompletionElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + O(L^{})", self.coeffs, -self.precision - 1)
    }
}

impl fmt::Debug for CompletionElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

fn truncate(a: &LefschetzLaurent, precision: i32) -> LefschetzLaurent {
    LefschetzLaurent::from_terms(a.terms().filter(|(e, _)| *e >= -precision).map(|(e, c)| (e, c.clone())))
}

pub(crate) fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let mut acc = BigInt::from(1u32);
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::laurent::ll;

    #[test]
    fn truncation_drops_low_exponents() {
        let a = CompletionElement::new(&ll(&[(1, 1), (-1, 1), (-3, 5)]), 2);
        assert_eq!(a.value(), &ll(&[(1, 1), (-1, 1)]));
        assert_eq!(a.virtual_dim(), VirtualDim::Finite(1));
    }

    #[test]
    fn mixed_precision_is_an_error() {
        let a = CompletionElement::zero(3);
        let b = CompletionElement::zero(4);
        assert_eq!(a.add(&b), Err(Error::PrecisionMismatch(3, 4)));
    }

    #[test]
    fn geometric_inverse() {
        let inv = CompletionElement::inverse_one_minus_linv_pow(1, 4);
        let one_minus = CompletionElement::new(&ll(&[(0, 1), (-1, -1)]), 4);
        assert_eq!(inv.mul(&one_minus).unwrap().value(), &LefschetzLaurent::one());
        let inv2 = CompletionElement::inverse_one_minus_linv_pow(2, 3);
        assert_eq!(inv2.value(), &ll(&[(0, 1), (-1, 2), (-2, 3), (-3, 4)]));
    }
}
