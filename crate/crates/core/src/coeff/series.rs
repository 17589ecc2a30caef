use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::completion::binomial;
use super::laurent::LefschetzLaurent;
use crate::error::{Error, Result};

/// A monomial `T^t z^m`: nonnegative exponents on the ray variables and an
/// integer character marker in the cocharacter lattice.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct GradedMonomial {
    pub t: Vec<u32>,
    pub z: Vec<i64>,
}

impl GradedMonomial {
    pub fn one(t_len: usize, z_len: usize) -> Self {
        GradedMonomial { t: vec![0; t_len], z: vec![0; z_len] }
    }

    pub fn total_degree(&self) -> u32 {
        self.t.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.t.iter().all(|x| *x == 0) && self.z.iter().all(|x| *x == 0)
    }

    pub fn mul(&self, other: &Self) -> Self {
        GradedMonomial {
            t: self.t.iter().zip(&other.t).map(|(a, b)| a + b).collect(),
            z: self.z.iter().zip(&other.z).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        GradedMonomial {
            t: self.t.iter().map(|a| a * k).collect(),
            z: self.z.iter().map(|a| a * k as i64).collect(),
        }
    }
}

/// Which monomials a series keeps: total `T`-degree at most `total`, and
/// optionally each `T`-exponent at most its cap.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Truncation {
    pub total: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub caps: Option<Vec<u32>>,
}

impl Truncation {
    pub fn total(total: u32) -> Self {
        Truncation { total, caps: None }
    }

    /// Box truncation; the total bound is the sum of the caps.
    pub fn boxed(caps: Vec<u32>) -> Self {
        Truncation { total: caps.iter().sum(), caps: Some(caps) }
    }

    pub fn admits(&self, m: &GradedMonomial) -> bool {
        if m.total_degree() > self.total {
            return false;
        }
        match &self.caps {
            Some(caps) => m.t.iter().zip(caps).all(|(e, c)| e <= c),
            None => true,
        }
    }
}

/// Truncated formal series in ray variables `T_α` and character markers
/// `z^m`, with coefficients in `Z[L, L^-1]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedSeries {
    t_vars: Vec<String>,
    z_rank: usize,
    trunc: Truncation,
    terms: BTreeMap<GradedMonomial, LefschetzLaurent>,
}

impl GradedSeries {
    pub fn zero(t_vars: Vec<String>, z_rank: usize, trunc: Truncation) -> Self {
        if let Some(c) = &trunc.caps {
            assert_eq!(c.len(), t_vars.len(), "one cap per ray variable");
        }
        GradedSeries { t_vars, z_rank, trunc, terms: BTreeMap::new() }
    }

    pub fn one(t_vars: Vec<String>, z_rank: usize, trunc: Truncation) -> Self {
        let mut s = Self::zero(t_vars, z_rank, trunc);
        let one = s.unit_monomial();
        s.add_term(one, LefschetzLaurent::one());
        s
    }

    /// Fresh series over the same variables and truncation.
    pub fn zero_like(&self) -> Self {
        Self::zero(self.t_vars.clone(), self.z_rank, self.trunc.clone())
    }

    pub fn one_like(&self) -> Self {
        Self::one(self.t_vars.clone(), self.z_rank, self.trunc.clone())
    }

    /// Default variable names `T0, T1, ...`.
    pub fn var_names(n: usize) -> Vec<String> {
        (0..n).map(|i| format!("T{i}")).collect()
    }

    pub fn unit_monomial(&self) -> GradedMonomial {
        GradedMonomial::one(self.t_vars.len(), self.z_rank)
    }

    pub fn t_vars(&self) -> &[String] {
        &self.t_vars
    }

    pub fn z_rank(&self) -> usize {
        self.z_rank
    }

    pub fn truncation(&self) -> &Truncation {
        &self.trunc
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&GradedMonomial, &LefschetzLaurent)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &GradedMonomial) -> LefschetzLaurent {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn constant_term(&self) -> LefschetzLaurent {
        self.coeff(&self.unit_monomial())
    }

    /// Adds `c · m`; monomials outside the truncation are dropped.
    pub fn add_term(&mut self, m: GradedMonomial, c: LefschetzLaurent) {
        debug_assert_eq!(m.t.len(), self.t_vars.len());
        debug_assert_eq!(m.z.len(), self.z_rank);
        if c.is_zero() || !self.trunc.admits(&m) {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += &c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.t_vars.len() != other.t_vars.len() {
            return Err(Error::DimensionMismatch { expected: self.t_vars.len(), got: other.t_vars.len() });
        }
        if self.z_rank != other.z_rank {
            return Err(Error::DimensionMismatch { expected: self.z_rank, got: other.z_rank });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c);
        }
        Ok(out)
    }

    /// Truncated product; keeps the truncation of `self`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = self.zero_like();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let m = m1.mul(m2);
                if out.trunc.admits(&m) {
                    out.add_term(m, c1 * c2);
                }
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &LefschetzLaurent) -> Self {
        let mut out = self.zero_like();
        for (m, x) in &self.terms {
            out.add_term(m.clone(), x * c);
        }
        out
    }

    /// Multiplies by the monomial `c · m`.
    pub fn mul_monomial(&self, m: &GradedMonomial, c: &LefschetzLaurent) -> Self {
        let mut out = self.zero_like();
        for (m1, x) in &self.terms {
            out.add_term(m1.mul(m), x * c);
        }
        out
    }

    /// Multiplies by `(1 - L^j · mono)^(-mult)`, expanded through the
    /// truncation. `mono` must have positive total degree.
    pub fn mul_geometric_power(&self, j: i32, mono: &GradedMonomial, mult: i64) -> Self {
        assert!(mono.total_degree() > 0, "plethystic factor needs positive T-degree");
        if mult == 0 {
            return self.clone();
        }
        let steps = self.trunc.total / mono.total_degree();
        let mut out = self.clone();
        let mut shifted = self.clone();
        for n in 1..=steps as u64 {
            // coefficient of μ^n in (1 - μ)^(-mult)
            let c = if mult > 0 {
                binomial(n + mult as u64 - 1, n)
            } else if n <= mult.unsigned_abs() {
                let b = binomial(mult.unsigned_abs(), n);
                if n % 2 == 1 { -b } else { b }
            } else {
                break;
            };
            shifted = shifted.mul_monomial(mono, &LefschetzLaurent::monomial(1, j));
            if shifted.is_empty() {
                break;
            }
            let cl = LefschetzLaurent::from_int(c);
            for (m, x) in &shifted.terms {
                out.add_term(m.clone(), x * &cl);
            }
        }
        out
    }

    /// Terms whose character marker is `z^0`: the gradewise integral over
    /// the dual torus.
    pub fn z_degree_zero_part(&self) -> Self {
        let mut out = self.zero_like();
        for (m, c) in &self.terms {
            if m.z.iter().all(|x| *x == 0) {
                out.add_term(m.clone(), c.clone());
            }
        }
        out
    }

    /// Sets every character marker to 1 (drops the `z` grading).
    pub fn forget_z(&self) -> Self {
        let mut out = GradedSeries::zero(self.t_vars.clone(), 0, self.trunc.clone());
        for (m, c) in &self.terms {
            out.add_term(GradedMonomial { t: m.t.clone(), z: vec![] }, c.clone());
        }
        out
    }

    /// Same terms under a (possibly tighter) truncation.
    pub fn retruncate(&self, trunc: Truncation) -> Self {
        let mut out = GradedSeries::zero(self.t_vars.clone(), self.z_rank, trunc);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    /// Coefficient of `T^t` summed over all character markers.
    pub fn coeff_t(&self, t: &[u32]) -> LefschetzLaurent {
        self.terms.iter().filter(|(m, _)| m.t == t).map(|(_, c)| c.clone()).sum()
    }

    /// Coefficients of a one-variable series without markers, indexed by degree.
    pub fn univariate_coeffs(&self) -> Vec<LefschetzLaurent> {
        assert_eq!(self.t_vars.len(), 1);
        (0..=self.trunc.total).map(|k| self.coeff_t(&[k])).collect()
    }

    pub fn to_json(&self) -> SeriesJson {
        SeriesJson {
            t_vars: self.t_vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| TermJson { t: m.t.clone(), z: m.z.clone(), coeff: c.clone() })
                .collect(),
            trunc: self.trunc.total,
            caps: self.trunc.caps.clone(),
        }
    }

    pub fn from_json(j: &SeriesJson) -> Result<Self> {
        let z_rank = j.terms.first().map_or(0, |t| t.z.len());
        let trunc = Truncation { total: j.trunc, caps: j.caps.clone() };
        if let Some(c) = &trunc.caps {
            if c.len() != j.t_vars.len() {
                return Err(Error::Parse("caps length differs from t_vars".into()));
            }
        }
        let mut s = GradedSeries::zero(j.t_vars.clone(), z_rank, trunc);
        for t in &j.terms {
            if t.t.len() != j.t_vars.len() || t.z.len() != z_rank {
                return Err(Error::Parse("term exponent length mismatch".into()));
            }
            s.add_term(GradedMonomial { t: t.t.clone(), z: t.z.clone() }, t.coeff.clone());
        }
        Ok(s)
    }

    /// Univariate series `Σ c_k T^k` from integer coefficients.
    pub fn univariate(coeffs: &[BigInt], trunc: u32) -> Self {
        let mut s = GradedSeries::zero(vec!["T".into()], 0, Truncation::total(trunc));
        for (k, c) in coeffs.iter().enumerate() {
            s.add_term(GradedMonomial { t: vec![k as u32], z: vec![] }, LefschetzLaurent::from_int(c.clone()));
        }
        s
    }
}

/// Wire form of a [`GradedSeries`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesJson {
    pub t_vars: Vec<String>,
    pub terms: Vec<TermJson>,
    pub trunc: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub caps: Option<Vec<u32>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub t: Vec<u32>,
    pub z: Vec<i64>,
    pub coeff: LefschetzLaurent,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::laurent::ll;

    fn mono(t: &[u32]) -> GradedMonomial {
        GradedMonomial { t: t.to_vec(), z: vec![] }
    }

    #[test]
    fn truncated_product() {
        let mut a = GradedSeries::one(vec!["T".into()], 0, Truncation::total(3));
        a.add_term(mono(&[1]), ll(&[(0, 1)]));
        let sq = a.mul(&a).unwrap();
        assert_eq!(sq.univariate_coeffs(), vec![ll(&[(0, 1)]), ll(&[(0, 2)]), ll(&[(0, 1)]), LefschetzLaurent::zero()]);
    }

    #[test]
    fn geometric_factor_and_inverse() {
        let one = GradedSeries::one(vec!["T".into()], 0, Truncation::total(4));
        let g = one.mul_geometric_power(1, &mono(&[1]), 1);
        let coeffs = g.univariate_coeffs();
        assert_eq!(coeffs[3], ll(&[(3, 1)]));
        let back = g.mul_geometric_power(1, &mono(&[1]), -1);
        assert_eq!(back, one);
    }

    #[test]
    fn caps_are_respected() {
        let mut s = GradedSeries::zero(GradedSeries::var_names(2), 0, Truncation::boxed(vec![1, 2]));
        s.add_term(mono(&[2, 0]), LefschetzLaurent::one());
        s.add_term(mono(&[1, 2]), LefschetzLaurent::one());
        assert_eq!(s.len(), 1);
    }

    #[test]
    fn json_shape() {
        let mut s = GradedSeries::zero(vec!["T".into()], 1, Truncation::total(2));
        s.add_term(GradedMonomial { t: vec![1], z: vec![-1] }, ll(&[(1, 1)]));
        let j = serde_json::to_string(&s.to_json()).unwrap();
        assert_eq!(j, r#"{"t_vars":["T"],"terms":[{"t":[1],"z":[-1],"coeff":{"1":"1"}}],"trunc":2}"#);
        let back = GradedSeries::from_json(&serde_json::from_str(&j).unwrap()).unwrap();
        assert_eq!(back, s);
    }
}
