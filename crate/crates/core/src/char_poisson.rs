//! Characters in the evaluation-monomial basis.
//!
//! A class with characters over a lattice `M` is a finite sum
//! `Σ c_m ev(m, ·)` with `ev(m, ·) ev(n, ·) = ev(m + n, ·)`. Integrating over
//! the dual of a quotient `M / N` keeps exactly the monomials with `m ∈ N`,
//! which is all the Fourier calculus below needs.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::coeff::{LefschetzLaurent, VirtualDim};
use crate::error::{Error, Result};
use crate::lattice::{self, Hnf, Point};

/// `Z^rank` modulo an optional relation sublattice (finite or mixed groups).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lattice {
    rank: usize,
    relations: Option<Hnf>,
}

impl Lattice {
    pub fn free(rank: usize) -> Self {
        Lattice { rank, relations: None }
    }

    /// `Z^rank / ⟨relations⟩`; exponents are kept reduced modulo the relations.
    pub fn quotient(rank: usize, relations: &[Point]) -> Self {
        let h = Hnf::new(rank, relations);
        Lattice { rank, relations: (h.rank() > 0).then_some(h) }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn reduce(&self, m: &[i64]) -> Point {
        match &self.relations {
            Some(h) => h.reduce(m),
            None => m.to_vec(),
        }
    }

    /// Membership test for `N` in this group: `m ∈ N + relations`.
    fn sublattice_hnf(&self, n: &Sublattice) -> Hnf {
        let mut gens = n.generators.clone();
        if let Some(h) = &self.relations {
            gens.extend(h.basis());
        }
        Hnf::new(self.rank, &gens)
    }
}

/// A sublattice given by generators (columns of a generator matrix).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sublattice {
    pub generators: Vec<Point>,
}

impl Sublattice {
    pub fn new(generators: Vec<Point>) -> Self {
        Sublattice { generators }
    }

    pub fn zero() -> Self {
        Sublattice { generators: vec![] }
    }

    pub fn full(rank: usize) -> Self {
        Sublattice { generators: (0..rank).map(|i| unit(rank, i)).collect() }
    }

    pub fn hnf(&self, rank: usize) -> Hnf {
        Hnf::new(rank, &self.generators)
    }
}

fn unit(n: usize, i: usize) -> Point {
    let mut v = vec![0; n];
    v[i] = 1;
    v
}

/// A finitely supported function on a lattice with values in `Z[L, L^-1]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharFunction {
    rank: usize,
    support: BTreeMap<Point, LefschetzLaurent>,
}

impl CharFunction {
    pub fn new(rank: usize) -> Self {
        CharFunction { rank, support: BTreeMap::new() }
    }

    /// Characteristic function of a single point.
    pub fn indicator(m: Point) -> Self {
        let mut f = Self::new(m.len());
        f.add(m, LefschetzLaurent::one());
        f
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn add(&mut self, m: Point, v: LefschetzLaurent) {
        assert_eq!(m.len(), self.rank, "point of wrong rank");
        let e = self.support.entry(m).or_default();
        *e += &v;
        if e.is_zero() {
            self.support.retain(|_, v| !v.is_zero());
        }
    }

    pub fn value(&self, m: &[i64]) -> LefschetzLaurent {
        self.support.get(m).cloned().unwrap_or_default()
    }

    pub fn support(&self) -> impl Iterator<Item = (&Point, &LefschetzLaurent)> {
        self.support.iter()
    }

    /// `x ↦ ψ(x - a)`.
    pub fn translate(&self, a: &[i64]) -> Self {
        let mut f = Self::new(self.rank);
        for (m, v) in &self.support {
            f.add(lattice::add(m, a), v.clone());
        }
        f
    }

    /// Zero-extension along `Z^n ↪ Z^n × Z^k`.
    pub fn extend_by_zero(&self, k: usize) -> Self {
        let mut f = Self::new(self.rank + k);
        for (m, v) in &self.support {
            let mut p = m.clone();
            p.extend(std::iter::repeat_n(0, k));
            f.add(p, v.clone());
        }
        f
    }

    pub fn to_json(&self) -> CharFunctionJson {
        CharFunctionJson {
            rank: self.rank,
            support: self.support.iter().map(|(m, v)| SupportPoint { m: m.clone(), value: v.clone() }).collect(),
        }
    }

    pub fn from_json(j: &CharFunctionJson) -> Result<Self> {
        let mut f = Self::new(j.rank);
        for p in &j.support {
            if p.m.len() != j.rank {
                return Err(Error::DimensionMismatch { expected: j.rank, got: p.m.len() });
            }
            f.add(p.m.clone(), p.value.clone());
        }
        Ok(f)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharFunctionJson {
    pub rank: usize,
    pub support: Vec<SupportPoint>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SupportPoint {
    pub m: Point,
    pub value: LefschetzLaurent,
}

/// `Σ c_m ev(m, ·)` over a lattice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharSum {
    lattice: Lattice,
    terms: BTreeMap<Point, LefschetzLaurent>,
}

impl CharSum {
    pub fn zero(lattice: Lattice) -> Self {
        CharSum { lattice, terms: BTreeMap::new() }
    }

    /// The single evaluation monomial `ev(m, ·)`.
    pub fn ev(lattice: Lattice, m: &[i64]) -> Self {
        let mut s = Self::zero(lattice);
        s.add_term(m, LefschetzLaurent::one());
        s
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn add_term(&mut self, m: &[i64], c: LefschetzLaurent) {
        assert_eq!(m.len(), self.lattice.rank(), "exponent of wrong rank");
        if c.is_zero() {
            return;
        }
        let key = self.lattice.reduce(m);
        let e = self.terms.entry(key.clone()).or_default();
        *e += &c;
        if e.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn coeff(&self, m: &[i64]) -> LefschetzLaurent {
        self.terms.get(&self.lattice.reduce(m)).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Point, &LefschetzLaurent)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m, c.clone());
        }
        out
    }

    /// Product with `ev(m,·) ev(n,·) = ev(m+n,·)`.
    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.lattice.clone());
        for (m, c) in &self.terms {
            for (n, d) in &other.terms {
                out.add_term(&lattice::add(m, n), c * d);
            }
        }
        out
    }

    /// Largest virtual dimension of a coefficient; the character part is
    /// ignored.
    pub fn virtual_dim(&self) -> VirtualDim {
        self.terms.values().map(|c| c.virtual_dim()).max().unwrap_or(VirtualDim::MinusInfinity)
    }
}

/// `ψ ↦ Σ_m ψ(m) ev(m, ·)`.
pub fn fourier(psi: &CharFunction) -> CharSum {
    let mut s = CharSum::zero(Lattice::free(psi.rank()));
    for (m, v) in psi.support() {
        s.add_term(m, v.clone());
    }
    s
}

/// Integral over the characters trivial on `n`: `Σ_{m ∈ N} c_m`.
pub fn integrate_dual(s: &CharSum, n: &Sublattice) -> LefschetzLaurent {
    let h = s.lattice().sublattice_hnf(n);
    s.terms().filter(|(m, _)| h.contains(m)).map(|(_, c)| c.clone()).sum()
}

/// A splitting `M = M' ⊕ M''` by complementary integer bases.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Split {
    prime: Vec<Point>,
    double: Vec<Point>,
    inverse: Vec<Point>,
}

impl Split {
    pub fn new(prime: Vec<Point>, double: Vec<Point>) -> Result<Self> {
        let mut cols = prime.clone();
        cols.extend(double.iter().cloned());
        let n = cols.first().map_or(0, |c| c.len());
        if cols.len() != n || cols.iter().any(|c| c.len() != n) {
            return Err(Error::NonComplementarySplit(0));
        }
        let inverse = lattice::inverse_unimodular(&cols).ok_or(Error::NonComplementarySplit(lattice::det(&cols)))?;
        Ok(Split { prime, double, inverse })
    }

    pub fn rank_prime(&self) -> usize {
        self.prime.len()
    }

    pub fn rank_double(&self) -> usize {
        self.double.len()
    }

    /// Components `(m', m'')` of `m` in the two bases.
    pub fn components(&self, m: &[i64]) -> (Point, Point) {
        let n = m.len();
        let coords = lattice::apply(&self.inverse, m, n);
        let k = self.prime.len();
        (coords[..k].to_vec(), coords[k..].to_vec())
    }
}

/// Keeps the monomials whose `M'`-component lies in `n` (given in `M'`
/// coordinates) and projects them to `M''`.
pub fn partial_integrate(s: &CharSum, split: &Split, n: &Sublattice) -> Result<CharSum> {
    if s.lattice().rank() != split.rank_prime() + split.rank_double() {
        return Err(Error::DimensionMismatch {
            expected: split.rank_prime() + split.rank_double(),
            got: s.lattice().rank(),
        });
    }
    let h = n.hnf(split.rank_prime());
    let mut out = CharSum::zero(Lattice::free(split.rank_double()));
    for (m, c) in s.terms() {
        let (mp, mpp) = split.components(m);
        if h.contains(&mp) {
            out.add_term(&mpp, c.clone());
        }
    }
    Ok(out)
}

/// `∫ s · ev(-x, ·)` over the full dual group; recovers `ψ(x)` from `fourier(ψ)`.
pub fn fourier_invert(s: &CharSum, x: &[i64]) -> LefschetzLaurent {
    let neg: Point = x.iter().map(|v| -v).collect();
    let shifted = s.mul(&CharSum::ev(s.lattice().clone(), &neg));
    integrate_dual(&shifted, &Sublattice::zero())
}

/// Both sides of the local Poisson formula for `ψ` on `G`, subgroup `H`, and
/// translate `g`: `(Σ_{h ∈ H} ψ(g + h), ∫_{H^⊥} ψ̂ · ev(-g, ·))`.
pub fn poisson_both_sides(psi: &CharFunction, h: &Sublattice, g: &[i64]) -> (LefschetzLaurent, LefschetzLaurent) {
    let hnf = h.hnf(psi.rank());
    let left: LefschetzLaurent =
        psi.support().filter(|(m, _)| hnf.contains(&lattice::sub(m, g))).map(|(_, v)| v.clone()).sum();
    let neg: Point = g.iter().map(|v| -v).collect();
    let s = fourier(psi).mul(&CharSum::ev(Lattice::free(psi.rank()), &neg));
    let right = integrate_dual(&s, h);
    (left, right)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::ll;

    fn one() -> LefschetzLaurent {
        LefschetzLaurent::one()
    }

    #[test]
    fn fourier_examples() {
        let s = fourier(&CharFunction::indicator(vec![2, -1]));
        assert_eq!(s, CharSum::ev(Lattice::free(2), &[2, -1]));
        assert!(fourier(&CharFunction::new(2)).is_zero());
        let mut psi = CharFunction::new(2);
        psi.add(vec![0, 0], one());
        psi.add(vec![1, 0], LefschetzLaurent::l());
        let s = fourier(&psi);
        assert_eq!(s.coeff(&[0, 0]), one());
        assert_eq!(s.coeff(&[1, 0]), LefschetzLaurent::l());
    }

    #[test]
    fn integration_examples() {
        let m = Lattice::free(1);
        assert_eq!(integrate_dual(&CharSum::ev(m.clone(), &[3]), &Sublattice::new(vec![vec![2]])), LefschetzLaurent::zero());
        assert_eq!(integrate_dual(&CharSum::ev(m.clone(), &[0]), &Sublattice::zero()), one());
        let mut s = CharSum::zero(m);
        s.add_term(&[0], one());
        s.add_term(&[1], LefschetzLaurent::l());
        s.add_term(&[2], ll(&[(2, 1)]));
        assert_eq!(integrate_dual(&s, &Sublattice::new(vec![vec![2]])), ll(&[(2, 1), (0, 1)]));
    }

    #[test]
    fn partial_integration_examples() {
        let split = Split::new(vec![vec![1, 0]], vec![vec![0, 1]]).unwrap();
        let m = Lattice::free(2);
        let out = partial_integrate(&CharSum::ev(m.clone(), &[0, 3]), &split, &Sublattice::zero()).unwrap();
        assert_eq!(out, CharSum::ev(Lattice::free(1), &[3]));
        let out = partial_integrate(&CharSum::ev(m.clone(), &[1, 3]), &split, &Sublattice::zero()).unwrap();
        assert!(out.is_zero());
        let s = CharSum::ev(m.clone(), &[2, 5]).add(&CharSum::ev(m, &[1, 1]));
        let out = partial_integrate(&s, &split, &Sublattice::new(vec![vec![2]])).unwrap();
        assert_eq!(out, CharSum::ev(Lattice::free(1), &[5]));
        assert!(matches!(Split::new(vec![vec![2, 0]], vec![vec![0, 1]]), Err(Error::NonComplementarySplit(2))));
    }

    #[test]
    fn inversion_examples() {
        let x0 = vec![1, -2];
        let s = fourier(&CharFunction::indicator(x0.clone()));
        assert_eq!(fourier_invert(&s, &x0), one());
        assert!(fourier_invert(&s, &[0, 0]).is_zero());
        let mut psi = CharFunction::new(2);
        psi.add(vec![0, 0], one());
        psi.add(vec![1, 0], LefschetzLaurent::l());
        assert_eq!(fourier_invert(&fourier(&psi), &[1, 0]), LefschetzLaurent::l());
    }

    #[test]
    fn poisson_examples() {
        let mut psi = CharFunction::new(1);
        psi.add(vec![0], one());
        psi.add(vec![1], LefschetzLaurent::l());
        let (l, r) = poisson_both_sides(&psi, &Sublattice::new(vec![vec![2]]), &[0]);
        assert_eq!((l.clone(), r.clone()), (one(), one()));
        let (l, r) = poisson_both_sides(&psi, &Sublattice::full(1), &[0]);
        assert_eq!(l, ll(&[(1, 1), (0, 1)]));
        assert_eq!(l, r);
        let (l, r) = poisson_both_sides(&psi, &Sublattice::zero(), &[1]);
        assert_eq!((l, r), (LefschetzLaurent::l(), LefschetzLaurent::l()));
    }

    #[test]
    fn torsion_quotient() {
        // Z / 3Z: ev(1)^3 = ev(0)
        let m = Lattice::quotient(1, &[vec![3]]);
        let e = CharSum::ev(m.clone(), &[1]);
        let cube = e.mul(&e).mul(&e);
        assert_eq!(cube, CharSum::ev(m.clone(), &[0]));
        assert_eq!(integrate_dual(&CharSum::ev(m, &[4]), &Sublattice::new(vec![vec![1]])), one());
    }

    #[test]
    fn json_roundtrip() {
        let j = r#"{"rank":2,"support":[{"m":[1,0],"value":{"1":"1"}}]}"#;
        let f = CharFunction::from_json(&serde_json::from_str(j).unwrap()).unwrap();
        assert_eq!(f.value(&[1, 0]), LefschetzLaurent::l());
        assert_eq!(serde_json::to_string(&f.to_json()).unwrap(), j);
        let s: Sublattice = serde_json::from_str(r#"{"generators":[[2,0],[0,1]]}"#).unwrap();
        assert_eq!(s.generators.len(), 2);
    }
}
