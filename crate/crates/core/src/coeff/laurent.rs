use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Virtual dimension of a class: the top `L`-exponent, or `MinusInfinity`
/// for the zero class. Orders below every finite value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum VirtualDim {
    MinusInfinity,
    Finite(i64),
}

impl VirtualDim {
    pub fn finite(self) -> Option<i64> {
        match self {
            VirtualDim::MinusInfinity => None,
            VirtualDim::Finite(d) => Some(d),
        }
    }
}

impl fmt::Display for VirtualDim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VirtualDim::MinusInfinity => write!(f, "-inf"),
            VirtualDim::Finite(d) => write!(f, "{d}"),
        }
    }
}

/// Finite dimensions serialize as integers, the zero class as `"-inf"`.
impl Serialize for VirtualDim {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            VirtualDim::MinusInfinity => s.serialize_str("-inf"),
            VirtualDim::Finite(d) => s.serialize_i64(*d),
        }
    }
}

/// An element of `Z[L, L^-1]`, stored sparsely by exponent with no zero
/// coefficients.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LefschetzLaurent {
    coeffs: BTreeMap<i32, BigInt>,
}

impl LefschetzLaurent {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(1, 0)
    }

    /// The Lefschetz class `L`.
    pub fn l() -> Self {
        Self::monomial(1, 1)
    }

    pub fn monomial(coeff: impl Into<BigInt>, exp: i32) -> Self {
        let mut s = Self::zero();
        s.add_term(exp, coeff.into());
        s
    }

    pub fn from_int(c: impl Into<BigInt>) -> Self {
        Self::monomial(c, 0)
    }

    /// Builds from `(exponent, coefficient)` pairs; repeated exponents add up.
    pub fn from_terms<I, C>(terms: I) -> Self
    where
        I: IntoIterator<Item = (i32, C)>,
        C: Into<BigInt>,
    {
        let mut s = Self::zero();
        for (e, c) in terms {
            s.add_term(e, c.into());
        }
        s
    }

    /// `(L - 1)^k`.
    pub fn l_minus_one_pow(k: u32) -> Self {
        (Self::l() - Self::one()).pow(k)
    }

    /// `[P^k] = 1 + L + ... + L^k`.
    pub fn projective_space(k: u32) -> Self {
        Self::from_terms((0..=k as i32).map(|e| (e, 1)))
    }

    pub(crate) fn add_term(&mut self, exp: i32, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.coeffs.entry(exp) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs.get(&0).is_some_and(|c| c.is_one())
    }

    pub fn coeff(&self, exp: i32) -> BigInt {
        self.coeffs.get(&exp).cloned().unwrap_or_default()
    }

    /// Nonzero terms in increasing exponent order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (i32, &BigInt)> + '_ {
        self.coeffs.iter().map(|(e, c)| (*e, c))
    }

    pub fn top_exponent(&self) -> Option<i32> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn bottom_exponent(&self) -> Option<i32> {
        self.coeffs.keys().next().copied()
    }

    pub fn virtual_dim(&self) -> VirtualDim {
        match self.top_exponent() {
            Some(e) => VirtualDim::Finite(e as i64),
            None => VirtualDim::MinusInfinity,
        }
    }

    /// Multiplies by `L^k`.
    pub fn shift(&self, k: i32) -> Self {
        LefschetzLaurent { coeffs: self.coeffs.iter().map(|(e, c)| (e + k, c.clone())).collect() }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        LefschetzLaurent { coeffs: self.coeffs.iter().map(|(e, x)| (*e, x * c)).collect() }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Applies `L ↦ L^k` (the Adams operation on a line element).
    pub fn adams(&self, k: i32) -> Self {
        LefschetzLaurent { coeffs: self.coeffs.iter().map(|(e, c)| (e * k, c.clone())).collect() }
    }

    /// Exact evaluation at `L = q`.
    pub fn specialize_q(&self, q: u64) -> BigRational {
        let qb = BigInt::from(q);
        let mut acc = BigRational::zero();
        for (e, c) in self.terms() {
            let p = num_traits::pow(qb.clone(), e.unsigned_abs() as usize);
            let term = if e >= 0 {
                BigRational::from_integer(c * p)
            } else {
                BigRational::new(c.clone(), p)
            };
            acc += term;
        }
        acc
    }

    pub fn specialize_f64(&self, q: f64) -> f64 {
        self.terms().map(|(e, c)| c.to_f64().unwrap_or(f64::NAN) * q.powi(e)).sum()
    }

    /// Exact quotient in `Z[L, L^-1]`, or `None` when `other` does not divide.
    pub fn div_exact(&self, other: &Self) -> Option<Self> {
        let (Some(ob), Some(ot)) = (other.bottom_exponent(), other.top_exponent()) else {
            return None;
        };
        if self.is_zero() {
            return Some(Self::zero());
        }
        let lead = other.coeff(ot);
        let mut rem = self.clone();
        let mut quot = Self::zero();
        let floor = self.bottom_exponent().unwrap() - ob;
        while let Some(rt) = rem.top_exponent() {
            let shift = rt - ot;
            if shift < floor {
                return None;
            }
            let rc = rem.coeff(rt);
            if !(&rc % &lead).is_zero() {
                return None;
            }
            let q = Self::monomial(&rc / &lead, shift);
            rem -= &(&q * other);
            quot += &q;
        }
        Some(quot)
    }
}

impl fmt::Debug for LefschetzLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Pretty form, highest power first: `L^3 - L`, `2*L^-1 + 1`.
impl fmt::Display for LefschetzLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms().rev().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            let unit = mag.is_one();
            match e {
                0 => write!(f, "{mag}")?,
                1 if unit => write!(f, "L")?,
                1 => write!(f, "{mag}*L")?,
                _ if unit => write!(f, "L^{e}")?,
                _ => write!(f, "{mag}*L^{e}")?,
            }
        }
        Ok(())
    }
}

impl Serialize for LefschetzLaurent {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut m = s.serialize_map(Some(self.coeffs.len()))?;
        // highest exponent first, matching the pretty form
        for (e, c) in self.coeffs.iter().rev() {
            m.serialize_entry(&e.to_string(), &c.to_string())?;
        }
        m.end()
    }
}

impl<'de> Deserialize<'de> for LefschetzLaurent {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw: BTreeMap<String, String> = BTreeMap::deserialize(d)?;
        let mut s = Self::zero();
        for (k, v) in raw {
            let e: i32 = k.trim().parse().map_err(|_| D::Error::custom(format!("bad exponent {k:?}")))?;
            let c: BigInt = v.trim().parse().map_err(|_| D::Error::custom(format!("bad coefficient {v:?}")))?;
            s.add_term(e, c);
        }
        Ok(s)
    }
}

impl From<i64> for LefschetzLaurent {
    fn from(c: i64) -> Self {
        Self::from_int(c)
    }
}

impl Neg for LefschetzLaurent {
    type Output = Self;
    fn neg(mut self) -> Self {
        self.coeffs.values_mut().for_each(|c| *c = -&*c);
        self
    }
}

impl Neg for &LefschetzLaurent {
    type Output = LefschetzLaurent;
    fn neg(self) -> LefschetzLaurent {
        -self.clone()
    }
}

impl AddAssign<&LefschetzLaurent> for LefschetzLaurent {
    fn add_assign(&mut self, rhs: &LefschetzLaurent) {
        for (e, c) in &rhs.coeffs {
            self.add_term(*e, c.clone());
        }
    }
}

impl SubAssign<&LefschetzLaurent> for LefschetzLaurent {
    fn sub_assign(&mut self, rhs: &LefschetzLaurent) {
        for (e, c) in &rhs.coeffs {
            self.add_term(*e, -c);
        }
    }
}

impl MulAssign<&LefschetzLaurent> for LefschetzLaurent {
    fn mul_assign(&mut self, rhs: &LefschetzLaurent) {
        *self = &*self * rhs;
    }
}

impl Mul for &LefschetzLaurent {
    type Output = LefschetzLaurent;
    fn mul(self, rhs: &LefschetzLaurent) -> LefschetzLaurent {
        let mut out = LefschetzLaurent::zero();
        for (e1, c1) in &self.coeffs {
            for (e2, c2) in &rhs.coeffs {
                out.add_term(e1 + e2, c1 * c2);
            }
        }
        out
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident, $assign:ident) => {
        impl $tr<&LefschetzLaurent> for &LefschetzLaurent {
            type Output = LefschetzLaurent;
            fn $m(self, rhs: &LefschetzLaurent) -> LefschetzLaurent {
                let mut out = self.clone();
                out.$assign(rhs);
                out
            }
        }
        impl $tr for LefschetzLaurent {
            type Output = LefschetzLaurent;
            fn $m(mut self, rhs: LefschetzLaurent) -> LefschetzLaurent {
                self.$assign(&rhs);
                self
            }
        }
        impl $tr<&LefschetzLaurent> for LefschetzLaurent {
            type Output = LefschetzLaurent;
            fn $m(mut self, rhs: &LefschetzLaurent) -> LefschetzLaurent {
                self.$assign(&rhs);
                self
            }
        }
    };
}
forward_binop!(Add, add, add_assign);
forward_binop!(Sub, sub, sub_assign);

impl Mul for LefschetzLaurent {
    type Output = LefschetzLaurent;
    fn mul(self, rhs: LefschetzLaurent) -> LefschetzLaurent {
        &self * &rhs
    }
}

impl Mul<&LefschetzLaurent> for LefschetzLaurent {
    type Output = LefschetzLaurent;
    fn mul(self, rhs: &LefschetzLaurent) -> LefschetzLaurent {
        &self * rhs
    }
}

impl std::iter::Sum for LefschetzLaurent {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::zero(), |a, b| a + b)
    }
}

impl std::iter::Product for LefschetzLaurent {
    fn product<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::one(), |a, b| a * b)
    }
}

/// Shorthand for building classes in tests and presets: `ll(&[(2, 1), (0, -1)])`
/// is `L^2 - 1`.
pub fn ll(terms: &[(i32, i64)]) -> LefschetzLaurent {
    LefschetzLaurent::from_terms(terms.iter().copied())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn virtual_dimension() {
        assert_eq!(ll(&[(2, 1), (0, 1)]).virtual_dim(), VirtualDim::Finite(2));
        assert_eq!(LefschetzLaurent::zero().virtual_dim(), VirtualDim::MinusInfinity);
        // [P^2] L^-3
        let p2 = LefschetzLaurent::projective_space(2).shift(-3);
        assert_eq!(p2.virtual_dim(), VirtualDim::Finite(-1));
        assert!(VirtualDim::MinusInfinity < VirtualDim::Finite(i64::MIN));
    }

    #[test]
    fn specialization() {
        assert_eq!(ll(&[(2, 1), (1, 1), (0, 1)]).specialize_q(2), q(7, 1));
        assert_eq!(ll(&[(1, 1), (-1, -1)]).specialize_q(3), q(8, 3));
        // #PGL_2(F_2) = q^3 - q
        assert_eq!(ll(&[(3, 1), (1, -1)]).specialize_q(2), q(6, 1));
    }

    #[test]
    fn display_form() {
        assert_eq!(ll(&[(3, 1), (1, -1)]).to_string(), "L^3 - L");
        assert_eq!(ll(&[(0, 1), (-1, -2)]).to_string(), "1 - 2*L^-1");
        assert_eq!(LefschetzLaurent::zero().to_string(), "0");
        assert_eq!(ll(&[(1, -1)]).to_string(), "-L");
    }

    #[test]
    fn json_form() {
        let a = ll(&[(2, 1), (0, -1)]);
        let s = serde_json::to_string(&a).unwrap();
        assert_eq!(s, r#"{"2":"1","0":"-1"}"#);
        let b: LefschetzLaurent = serde_json::from_str(r#"{"0":"-1","2":"1"}"#).unwrap();
        assert_eq!(a, b);
        assert!(serde_json::from_str::<LefschetzLaurent>(r#"{"x":"1"}"#).is_err());
    }

    #[test]
    fn exact_division() {
        let a = ll(&[(3, 1), (1, -1)]);
        let b = ll(&[(1, 1), (0, -1)]);
        assert_eq!(a.div_exact(&b), Some(ll(&[(2, 1), (1, 1)])));
        assert_eq!(ll(&[(2, 1), (0, 1)]).div_exact(&b), None);
        let c = ll(&[(0, 1), (-1, -1)]); // 1 - L^-1
        let d = ll(&[(1, 1), (-1, -1)]); // L - L^-1 = L(1 - L^-1)(1 + L^-1)
        assert_eq!(d.div_exact(&c), Some(ll(&[(1, 1), (0, 1)])));
    }
}
