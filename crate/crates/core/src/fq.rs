//! Finite-field ground truth on the projective line: closed-point counts,
//! closed-point Euler products and brute-force counts of maps into toric
//! varieties in Cox coordinates.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::coeff::{GradedSeries, Truncation};
use crate::error::{Error, Result};
use crate::toric::{DegreeVector, Fan};

pub const DEFAULT_BUDGET: u128 = 100_000_000;

/// Enumeration budget: `MTZ_BUDGET` if set and valid, else the default.
pub fn budget_from_env() -> u128 {
    std::env::var("MTZ_BUDGET").ok().and_then(|s| s.trim().parse().ok()).unwrap_or(DEFAULT_BUDGET)
}

/// Table-driven arithmetic in `F_q` for `q ≤ 9`.
#[derive(Clone, Debug)]
pub struct Field {
    q: usize,
    add: Vec<u8>,
    mul: Vec<u8>,
    neg: Vec<u8>,
}

impl Field {
    pub fn new(q: u64) -> Result<Self> {
        // (characteristic, extension degree, reduction polynomial low-to-high without the leading 1)
        let (p, k, modulus): (usize, usize, &[usize]) = match q {
            2 | 3 | 5 | 7 => (q as usize, 1, &[]),
            4 => (2, 2, &[1, 1]),
            8 => (2, 3, &[1, 1, 0]),
            9 => (3, 2, &[1, 0]),
            _ => return Err(Error::UnsupportedField(q)),
        };
        let q = q as usize;
        let digits = |mut x: usize| -> Vec<usize> {
            (0..k)
                .map(|_| {
                    let d = x % p;
                    x /= p;
                    d
                })
                .collect()
        };
        let pack = |v: &[usize]| v.iter().rev().fold(0, |acc, &d| acc * p + d);
        let mut add = vec![0u8; q * q];
        let mut mul = vec![0u8; q * q];
        for a in 0..q {
            for b in 0..q {
                let (da, db) = (digits(a), digits(b));
                let s: Vec<usize> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                add[a * q + b] = pack(&s) as u8;
                let mut prod = vec![0usize; 2 * k];
                for i in 0..k {
                    for j in 0..k {
                        prod[i + j] = (prod[i + j] + da[i] * db[j]) % p;
                    }
                }
                // x^k = -(modulus)
                for deg in (k..2 * k).rev() {
                    let c = prod[deg];
                    if c != 0 {
                        prod[deg] = 0;
                        for (i, &m) in modulus.iter().enumerate() {
                            prod[deg - k + i] = (prod[deg - k + i] + (p - c) * m) % p;
                        }
                    }
                }
                mul[a * q + b] = pack(&prod[..k]) as u8;
            }
        }
        let neg = (0..q).map(|a| (0..q).find(|&b| add[a * q + b] == 0).expect("additive inverse") as u8).collect();
        let f = Field { q, add, mul, neg };
        debug_assert!((1..q).all(|a| (1..q).any(|b| f.mul(a as u8, b as u8) == 1)));
        Ok(f)
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn add(&self, a: u8, b: u8) -> u8 {
        self.add[a as usize * self.q + b as usize]
    }

    pub fn mul(&self, a: u8, b: u8) -> u8 {
        self.mul[a as usize * self.q + b as usize]
    }

    pub fn neg(&self, a: u8) -> u8 {
        self.neg[a as usize]
    }
}

/// Polynomial over a [`Field`], coefficients low to high, no trailing zeros.
type Poly = Vec<u8>;

fn trim(mut p: Poly) -> Poly {
    while p.last() == Some(&0) {
        p.pop();
    }
    p
}

/// Remainder of `a` modulo the monic polynomial `m`.
fn rem_monic(f: &Field, a: &[u8], m: &[u8]) -> Poly {
    let mut r = trim(a.to_vec());
    let dm = m.len() - 1;
    while r.len() > dm {
        let lead = *r.last().expect("nonempty");
        let shift = r.len() - 1 - dm;
        for (i, &c) in m.iter().enumerate() {
            let t = f.mul(lead, c);
            r[shift + i] = f.add(r[shift + i], f.neg(t));
        }
        r = trim(r);
    }
    r
}

fn all_polys(q: usize, len: usize) -> impl Iterator<Item = Poly> {
    let total = q.pow(len as u32);
    (0..total).map(move |mut x| {
        (0..len)
            .map(|_| {
                let d = x % q;
                x /= q;
                d as u8
            })
            .collect()
    })
}

/// Monic irreducible polynomials of degree `1..=dmax`, by increasing degree.
pub fn monic_irreducibles(f: &Field, dmax: usize) -> Vec<Poly> {
    let mut irr: Vec<Poly> = Vec::new();
    for deg in 1..=dmax {
        for lower in all_polys(f.q(), deg) {
            let mut p = lower;
            p.push(1);
            let reducible = irr.iter().take_while(|g| 2 * (g.len() - 1) <= deg).any(|g| rem_monic(f, &p, g).is_empty());
            if !reducible {
                irr.push(p);
            }
        }
    }
    irr
}

fn mobius(n: u64) -> i64 {
    let (mut n, mut m, mut p) = (n, 1i64, 2u64);
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            m = -m;
        }
        p += 1;
    }
    if n > 1 {
        -m
    } else {
        m
    }
}

/// `N_d` for `d = 1..=dmax`: the number of closed points of degree `d` on
/// the projective line over `F_q` (index 0 holds `N_1`).
pub fn closed_point_counts(q: u64, dmax: u32) -> Vec<BigInt> {
    (1..=dmax as u64)
        .map(|d| {
            if d == 1 {
                return BigInt::from(q + 1);
            }
            let s: BigInt = (1..=d)
                .filter(|e| d % e == 0)
                .map(|e| BigInt::from(mobius(e)) * BigInt::from(q).pow((d / e) as u32))
                .sum();
            s / BigInt::from(d)
        })
        .collect()
}

/// Truncated multivariate series over `Q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalSeries {
    trunc: Truncation,
    nvars: usize,
    terms: BTreeMap<Vec<u32>, BigRational>,
}

impl RationalSeries {
    pub fn one(nvars: usize, trunc: Truncation) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(vec![0; nvars], BigRational::one());
        RationalSeries { trunc, nvars, terms }
    }

    fn add_term(&mut self, e: Vec<u32>, c: BigRational) {
        let probe = crate::coeff::GradedMonomial { t: e, z: vec![] };
        if c.is_zero() || !self.trunc.admits(&probe) {
            return;
        }
        let e = probe.t;
        let v = self.terms.entry(e.clone()).or_insert_with(BigRational::zero);
        *v += c;
        if v.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn coeff(&self, e: &[u32]) -> BigRational {
        self.terms.get(e).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &BigRational)> {
        self.terms.iter()
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = RationalSeries { trunc: self.trunc.clone(), nvars: self.nvars, terms: BTreeMap::new() };
        for (a, c) in &self.terms {
            for (b, d) in &other.terms {
                out.add_term(a.iter().zip(b).map(|(x, y)| x + y).collect(), c * d);
            }
        }
        out
    }

    pub fn pow(&self, mut k: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.nvars, self.trunc.clone());
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }
}

/// `∏_{d ≥ 1} f(L ↦ q^d, T ↦ T^d)^{N_d}` truncated like `f`.
///
/// A closed point of degree `d` has residue field `F_{q^d}`, so both the
/// local variable and the class of the affine line are raised to the `d`.
pub fn euler_product_specialize(f: &GradedSeries, q: u64) -> Result<RationalSeries> {
    if f.z_rank() != 0 {
        return Err(Error::DimensionMismatch { expected: 0, got: f.z_rank() });
    }
    let trunc = f.truncation().clone();
    let nvars = f.t_vars().len();
    let counts = closed_point_counts(q, trunc.total.max(1));
    let mut acc = RationalSeries::one(nvars, trunc.clone());
    for d in 1..=trunc.total.max(1) {
        let qd = q.pow(d);
        let mut local = RationalSeries { trunc: trunc.clone(), nvars, terms: BTreeMap::new() };
        for (m, c) in f.terms() {
            local.add_term(m.t.iter().map(|e| e * d).collect(), c.specialize_q(qd));
        }
        let n = &counts[d as usize - 1];
        let n = u64::try_from(n).map_err(|_| Error::BudgetExceeded { needed: u128::MAX, budget: u64::MAX as u128 })?;
        acc = acc.mul(&local.pow(n));
    }
    Ok(acc)
}

/// `q^{2d+1} - q^{2d-1}`: degree-`d` maps from the line to itself.
pub fn count_rational_maps_closed_form(d: u32, q: u64) -> BigInt {
    assert!(d >= 1, "closed form holds for d >= 1");
    let q = BigInt::from(q);
    q.pow(2 * d + 1) - q.pow(2 * d - 1)
}

/// Number of binary forms in an enumeration at the given degrees: `q^{Σ(d_α+1)}`.
pub fn enumeration_size(d: &[i64], q: u64) -> u128 {
    let e: i64 = d.iter().map(|x| x + 1).sum();
    (q as u128).checked_pow(e as u32).unwrap_or(u128::MAX)
}

/// Counts maps from the line to the toric variety, with generic point in
/// the torus, of multidegree `d`, over `F_q`.
///
/// Tuples of nonzero binary forms `(f_α)` with `deg f_α = d_α` are admissible
/// when at every closed point the rays of the vanishing forms span a cone;
/// the raw count is divided by `(q-1)^r` for the free action of the Cox
/// torus. Degrees outside the kernel of `d ↦ Σ d_α ρ_α` carry no maps.
pub fn count_hom_fq(fan: &Fan, d: &DegreeVector, q: u64, budget: u128) -> Result<BigInt> {
    let d = &d.0;
    if d.len() != fan.num_rays() {
        return Err(Error::DimensionMismatch { expected: fan.num_rays(), got: d.len() });
    }
    if !d.iter().all(|&x| x >= 0) || !fan.sequence().in_kernel_of_dual(d) {
        return Ok(BigInt::zero());
    }
    let needed = enumeration_size(d, q);
    if needed > budget {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    let field = Field::new(q)?;
    let dmax = *d.iter().max().unwrap_or(&0) as usize;
    // point 0 is infinity, then the finite closed points
    let irr = monic_irreducibles(&field, dmax);
    let npoints = irr.len() + 1;

    // per ray: vanishing patterns of its forms, with multiplicities
    let mut patterns: Vec<Vec<(Vec<usize>, u128)>> = Vec::with_capacity(d.len());
    let mut cache: BTreeMap<i64, Vec<(Vec<usize>, u128)>> = BTreeMap::new();
    for &deg in d {
        let entry = cache.entry(deg).or_insert_with(|| {
            let mut groups: BTreeMap<Vec<usize>, u128> = BTreeMap::new();
            for coeffs in all_polys(field.q(), deg as usize + 1) {
                if coeffs.iter().all(|&c| c == 0) {
                    continue;
                }
                let mut zeros = Vec::new();
                if coeffs[deg as usize] == 0 {
                    zeros.push(0);
                }
                for (i, p) in irr.iter().enumerate() {
                    if p.len() - 1 <= deg as usize && rem_monic(&field, &coeffs, p).is_empty() {
                        zeros.push(i + 1);
                    }
                }
                *groups.entry(zeros).or_default() += 1;
            }
            groups.into_iter().collect()
        });
        patterns.push(entry.clone());
    }

    let mut masks = vec![0u64; npoints];
    let raw = admissible(fan, &patterns, 0, &mut masks);
    let order = (q as u128 - 1).pow(fan.pic_rank() as u32);
    if !raw.is_multiple_of(order) {
        return Err(Error::NonIntegerQuotient { raw, order });
    }
    Ok(BigInt::from(raw / order))
}

fn admissible(fan: &Fan, patterns: &[Vec<(Vec<usize>, u128)>], alpha: usize, masks: &mut [u64]) -> u128 {
    if alpha == patterns.len() {
        return 1;
    }
    let mut total = 0u128;
    for (zeros, count) in &patterns[alpha] {
        let ok = zeros.iter().all(|&p| fan.is_face_mask(masks[p] | (1 << alpha)));
        if !ok {
            continue;
        }
        for &p in zeros {
            masks[p] |= 1 << alpha;
        }
        total += count * admissible(fan, patterns, alpha + 1, masks);
        for &p in zeros {
            masks[p] &= !(1 << alpha);
        }
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::toric::preset;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn fields() {
        for q in [2, 3, 4, 5, 7, 8, 9] {
            let f = Field::new(q).unwrap();
            let nonzero: Vec<u8> = (1..q as u8).collect();
            // multiplicative group is cyclic of order q-1: every element satisfies a^(q-1) = 1
            for &a in &nonzero {
                let mut x = 1u8;
                for _ in 0..q - 1 {
                    x = f.mul(x, a);
                }
                assert_eq!(x, 1, "q={q} a={a}");
            }
        }
        assert!(matches!(Field::new(6), Err(Error::UnsupportedField(6))));
    }

    #[test]
    fn closed_points() {
        assert_eq!(closed_point_counts(2, 3), big(&[3, 1, 2]));
        assert_eq!(closed_point_counts(3, 2), big(&[4, 3]));
        for q in [2u64, 3, 4, 5] {
            let n = closed_point_counts(q, 6);
            for dd in 1..=6u32 {
                let s: BigInt = (1..=dd).filter(|e| dd % e == 0).map(|e| BigInt::from(e) * &n[e as usize - 1]).sum();
                assert_eq!(s, BigInt::from(q).pow(dd) + 1);
            }
            // irreducible enumeration agrees with the necklace formula
            let f = Field::new(q).unwrap();
            let irr = monic_irreducibles(&f, 3);
            for dd in 1..=3usize {
                let c = irr.iter().filter(|p| p.len() - 1 == dd).count() as i64 + i64::from(dd == 1);
                assert_eq!(BigInt::from(c), n[dd - 1]);
            }
        }
    }

    #[test]
    fn specialized_products() {
        let geo = GradedSeries::univariate(&big(&[1, 1, 1, 1, 1]), 4);
        let s = euler_product_specialize(&geo, 2).unwrap();
        for (k, want) in [1, 3, 7, 15, 31].into_iter().enumerate() {
            assert_eq!(s.coeff(&[k as u32]), BigRational::from_integer(want.into()));
        }
        let one = GradedSeries::univariate(&big(&[1]), 4);
        let s = euler_product_specialize(&one, 3).unwrap();
        assert_eq!(s.terms().count(), 1);
        // (1+T)^3 (1+T^2) (1+T^3)^2 through degree 3
        let s = euler_product_specialize(&GradedSeries::univariate(&big(&[1, 1]), 3), 2).unwrap();
        let want = [1, 3, 4, 6];
        for (k, w) in want.into_iter().enumerate() {
            assert_eq!(s.coeff(&[k as u32]), BigRational::from_integer(w.into()));
        }
    }

    #[test]
    fn map_counts() {
        let p1 = preset("P1").unwrap();
        let c = |d: i64, q| count_hom_fq(&p1, &DegreeVector(vec![d, d]), q, DEFAULT_BUDGET).unwrap();
        assert_eq!(c(1, 2), BigInt::from(6));
        assert_eq!(c(2, 2), BigInt::from(24));
        assert_eq!(c(0, 3), BigInt::from(2));
        for q in [2, 3] {
            for d in 1..=3 {
                assert_eq!(c(d, q), count_rational_maps_closed_form(d as u32, q));
            }
        }
        assert_eq!(count_rational_maps_closed_form(3, 3), BigInt::from(1944));
        assert!(count_hom_fq(&p1, &DegreeVector(vec![1, 2]), 2, DEFAULT_BUDGET).unwrap().is_zero());
        assert!(matches!(
            count_hom_fq(&p1, &DegreeVector(vec![3, 3]), 3, 10),
            Err(Error::BudgetExceeded { .. })
        ));
        let p2 = preset("P2").unwrap();
        assert!(count_hom_fq(&p2, &DegreeVector(vec![1, 1, 1]), 2, DEFAULT_BUDGET).unwrap() > BigInt::zero());
    }
}
