//! Motivic height zeta function of a toric variety over a genus-0 curve:
//! local factors, the coefficients by direct enumeration and by the Fourier
//! route, the leading constant and the stabilization of normalized
//! coefficients.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::coeff::{CompletionElement, CurveData, GradedMonomial, GradedSeries, LefschetzLaurent, Truncation, VirtualDim};
use crate::error::{Error, Result};
use crate::euler::{config_class_of_shape, euler_product_genus0, plethystic_log};
use crate::fq;
use crate::lattice::Point;
use crate::toric::Fan;

/// Coefficients of the height zeta function inside the box `0 ≤ d ≤ dmax`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZetaSeries {
    pub fan: String,
    pub dmax: Vec<u32>,
    pub coeffs: BTreeMap<Vec<u32>, LefschetzLaurent>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZetaSeriesJson {
    pub fan: String,
    pub coeffs: Vec<ZetaCoeffJson>,
    #[serde(rename = "Dmax")]
    pub dmax: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZetaCoeffJson {
    pub d: Vec<u32>,
    pub coeff: LefschetzLaurent,
}

impl ZetaSeries {
    pub fn coeff(&self, d: &[u32]) -> LefschetzLaurent {
        self.coeffs.get(d).cloned().unwrap_or_default()
    }

    pub fn to_json(&self) -> ZetaSeriesJson {
        ZetaSeriesJson {
            fan: self.fan.clone(),
            coeffs: self.coeffs.iter().map(|(d, c)| ZetaCoeffJson { d: d.clone(), coeff: c.clone() }).collect(),
            dmax: self.dmax.clone(),
        }
    }

    pub fn from_json(j: &ZetaSeriesJson) -> Self {
        ZetaSeries {
            fan: j.fan.clone(),
            dmax: j.dmax.clone(),
            coeffs: j.coeffs.iter().filter(|c| !c.coeff.is_zero()).map(|c| (c.d.clone(), c.coeff.clone())).collect(),
        }
    }

    /// Degrees at which `self` and `other` differ.
    pub fn disagreements(&self, other: &Self) -> Vec<Vec<u32>> {
        let keys: std::collections::BTreeSet<&Vec<u32>> = self.coeffs.keys().chain(other.coeffs.keys()).collect();
        keys.into_iter().filter(|d| self.coeff(d) != other.coeff(d)).cloned().collect()
    }
}

fn check_dmax(fan: &Fan, dmax: &[u32]) -> Result<()> {
    if dmax.len() != fan.num_rays() {
        return Err(Error::DimensionMismatch { expected: fan.num_rays(), got: dmax.len() });
    }
    Ok(())
}

/// Lattice points whose cone coordinates fit under `caps` (all of them if
/// `caps` is `None` and the total degree is at most `total`).
fn labels(fan: &Fan, total: u32, caps: Option<&[u32]>) -> Vec<(Point, Vec<u32>)> {
    let n = fan.rank();
    let maxabs = fan.rays().iter().flatten().map(|x| x.unsigned_abs()).max().unwrap_or(1) as i64;
    let bound = total as i64 * maxabs;
    let mut out = Vec::new();
    let mut m = vec![-bound; n];
    loop {
        if m.iter().any(|&x| x != 0) {
            let dec = fan.cone_decompose(&m);
            let v: Vec<u32> = dec.ray_vector(fan.num_rays()).into_iter().map(|x| x as u32).collect();
            let fits = v.iter().sum::<u32>() <= total && caps.is_none_or(|c| v.iter().zip(c).all(|(a, b)| a <= b));
            if fits {
                out.push((m.clone(), v));
            }
        }
        // odometer
        let mut i = 0;
        loop {
            if i == n {
                return out;
            }
            if m[i] < bound {
                m[i] += 1;
                break;
            }
            m[i] = -bound;
            i += 1;
        }
    }
}

/// `1 + Σ_{m ≠ 0} z^m T^{n(m)}`, where `n(m)` are the cone coordinates of `m`.
pub fn local_height_factor(fan: &Fan, trunc: u32) -> GradedSeries {
    let mut s = GradedSeries::one(GradedSeries::var_names(fan.num_rays()), fan.rank(), Truncation::total(trunc));
    for (m, t) in labels(fan, trunc, None) {
        s.add_term(GradedMonomial { t, z: m }, LefschetzLaurent::one());
    }
    s
}

/// `Q(z^ρ T) / ∏_α (1 - z^{ρ_α} T_α)` expanded under `trunc`.
pub fn local_fourier_side(fan: &Fan, trunc: Truncation) -> GradedSeries {
    let k = fan.num_rays();
    let mut s = q_sigma_series(fan, trunc);
    for a in 0..k {
        s = s.mul_geometric_power(0, &ray_monomial(fan, a), 1);
    }
    s
}

fn ray_monomial(fan: &Fan, a: usize) -> GradedMonomial {
    let mut t = vec![0; fan.num_rays()];
    t[a] = 1;
    GradedMonomial { t, z: fan.rays()[a].clone() }
}

/// `Q(z^{ρ_α} T_α)` with character markers.
fn q_sigma_series(fan: &Fan, trunc: Truncation) -> GradedSeries {
    let mut s = GradedSeries::zero(GradedSeries::var_names(fan.num_rays()), fan.rank(), trunc);
    for (e, &c) in fan.q_sigma().terms() {
        let z = fan.sequence().gamma_dual(&e.iter().map(|&x| x as i64).collect::<Vec<_>>());
        s.add_term(GradedMonomial { t: e.clone(), z }, LefschetzLaurent::from_int(c));
    }
    s
}

/// The local height factor and its Fourier side agree through `trunc`.
pub fn local_fourier_check(fan: &Fan, trunc: u32) -> bool {
    local_height_factor(fan, trunc) == local_fourier_side(fan, Truncation::total(trunc))
}

/// Coefficients by summing configuration classes over labeled partitions
/// with zero total label.
pub fn zeta_direct_genus0(fan: &Fan, dmax: &[u32]) -> Result<ZetaSeries> {
    check_dmax(fan, dmax)?;
    let total: u32 = dmax.iter().sum();
    let mut labs = labels(fan, total, Some(dmax));
    labs.sort();
    let mut acc: BTreeMap<Vec<u32>, BTreeMap<Vec<u32>, u64>> = BTreeMap::new();
    let mut state = vec![0u32; dmax.len()];
    let mut shape = Vec::new();
    enumerate_partitions(fan, &labs, 0, dmax, &mut state, &mut shape, &mut acc);
    let twist = LefschetzLaurent::l_minus_one_pow(fan.rank() as u32);
    let mut coeffs = BTreeMap::new();
    for (d, shapes) in acc {
        let c: LefschetzLaurent =
            shapes.into_iter().map(|(s, count)| config_class_of_shape(&s) * LefschetzLaurent::from_int(count)).sum();
        let c = &c * &twist;
        if !c.is_zero() {
            coeffs.insert(d, c);
        }
    }
    Ok(ZetaSeries { fan: fan.name().to_string(), dmax: dmax.to_vec(), coeffs })
}

fn enumerate_partitions(
    fan: &Fan,
    labs: &[(Point, Vec<u32>)],
    i: usize,
    dmax: &[u32],
    state: &mut Vec<u32>,
    shape: &mut Vec<u32>,
    acc: &mut BTreeMap<Vec<u32>, BTreeMap<Vec<u32>, u64>>,
) {
    if i == labs.len() {
        let d: Vec<i64> = state.iter().map(|&x| x as i64).collect();
        if fan.sequence().in_kernel_of_dual(&d) {
            let mut s = shape.clone();
            s.sort_unstable_by(|a, b| b.cmp(a));
            *acc.entry(state.clone()).or_default().entry(s).or_default() += 1;
        }
        return;
    }
    enumerate_partitions(fan, labs, i + 1, dmax, state, shape, acc);
    let v = &labs[i].1;
    let mut k = 0;
    loop {
        k += 1;
        if state.iter().zip(v).zip(dmax).any(|((s, a), m)| s + a > *m) {
            break;
        }
        state.iter_mut().zip(v).for_each(|(s, a)| *s += a);
        shape.push(k);
        enumerate_partitions(fan, labs, i + 1, dmax, state, shape, acc);
        shape.pop();
    }
    state.iter_mut().zip(v).for_each(|(s, a)| *s -= a * (k - 1));
}

/// Coefficients from the Fourier side: `(L-1)^n` times the character-free
/// part of `∏_α EP(1/(1 - z^{ρ_α} T_α)) · EP(Q(z^ρ T))`.
pub fn zeta_fourier_genus0(fan: &Fan, dmax: &[u32]) -> Result<ZetaSeries> {
    check_dmax(fan, dmax)?;
    let trunc = Truncation::boxed(dmax.to_vec());
    let mut s = euler_product_genus0(&q_sigma_series(fan, trunc))?;
    for a in 0..fan.num_rays() {
        let mono = ray_monomial(fan, a);
        // EP of a geometric factor over the line: (1 - μ)^-1 (1 - Lμ)^-1
        s = s.mul_geometric_power(0, &mono, 1).mul_geometric_power(1, &mono, 1);
    }
    let s = s.z_degree_zero_part().scale(&LefschetzLaurent::l_minus_one_pow(fan.rank() as u32));
    let coeffs = s.terms().map(|(m, c)| (m.t.clone(), c.clone())).collect();
    Ok(ZetaSeries { fan: fan.name().to_string(), dmax: dmax.to_vec(), coeffs })
}

/// The leading constant `L^n (1 - L^-1)^{-r} ∏_v Q(L_v^-1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeadingConstant {
    pub exact: Option<LefschetzLaurent>,
    pub truncated: CompletionElement,
}

impl LeadingConstant {
    pub fn specialize_f64(&self, q: u64) -> f64 {
        use num_traits::ToPrimitive;
        match &self.exact {
            Some(e) => e.specialize_f64(q as f64),
            None => self.truncated.specialize_q(q).to_f64().unwrap_or(f64::NAN),
        }
    }
}

/// `Q(u, ..., u) = ∏_k (1 - u^k)^{c_k}` with `c_k ≥ 0`, if such a finite
/// factorization exists.
fn finite_cyclotomic_exponents(f: &[i64]) -> Option<Vec<(u32, u32)>> {
    let deg = f.len() as u32 - 1;
    let coeffs: Vec<num_bigint::BigInt> = f.iter().map(|&c| c.into()).collect();
    let g = plethystic_log(&GradedSeries::univariate(&coeffs, deg)).ok()?;
    let mut out = Vec::new();
    let mut prod = vec![0i64; f.len()];
    prod[0] = 1;
    for (j, m, a) in g.terms() {
        if j != 0 || a > 0 {
            return None;
        }
        let k = m.t[0];
        out.push((k, (-a) as u32));
        for _ in 0..-a {
            for i in (k as usize..prod.len()).rev() {
                prod[i] -= prod[i - k as usize];
            }
        }
    }
    // the factorization must be exact, not only through degree deg
    let full_degree: u32 = out.iter().map(|(k, c)| k * c).sum();
    (full_degree == deg && prod == f).then_some(out)
}

pub fn leading_constant(fan: &Fan, curve: &CurveData, precision: i32) -> Result<LeadingConstant> {
    curve.require_genus0()?;
    let n = fan.rank() as i32;
    let r = fan.pic_rank() as u32;
    let f = fan.q_sigma().diagonal();
    let linv = LefschetzLaurent::monomial(1, -1);
    let one = LefschetzLaurent::one();
    let prefactor_inv = CompletionElement::inverse_one_minus_linv_pow(r, precision + n);

    if let Some(factors) = finite_cyclotomic_exponents(&f) {
        // EP(1 - u^k) = (1 - u^k)(1 - L u^k)
        let mut ep = one.clone();
        for (k, c) in factors {
            let local = (&one - &linv.pow(k)) * (&one - &linv.pow(k - 1));
            ep *= &local.pow(c);
        }
        let numerator = ep.shift(n);
        let denom = (&one - &linv).pow(r);
        let exact = numerator.div_exact(&denom);
        let truncated = match &exact {
            Some(e) => CompletionElement::new(e, precision),
            None => CompletionElement::new(&(prefactor_inv.value() * &ep).shift(n), precision),
        };
        return Ok(LeadingConstant { exact, truncated });
    }

    // each term of the product in u = L^-1 has dimension at most -(u-degree)/2
    let udeg = (2 * (precision + n) + 2).max(0) as u32;
    let coeffs: Vec<num_bigint::BigInt> = f.iter().map(|&c| c.into()).collect();
    let ep = euler_product_genus0(&GradedSeries::univariate(&coeffs, udeg))?;
    let value: LefschetzLaurent = ep.univariate_coeffs().iter().enumerate().map(|(e, c)| c.shift(-(e as i32))).sum();
    let truncated = CompletionElement::new(&(prefactor_inv.value() * &value).shift(n), precision);
    Ok(LeadingConstant { exact: None, truncated })
}

/// `q^n (1 - 1/q)^{-r} ∏_{deg p ≤ max_degree} Q(q^{-deg p})^{N_{deg p}}` in floating point.
pub fn leading_constant_numeric(fan: &Fan, q: u64, max_degree: u32) -> f64 {
    use num_traits::ToPrimitive;
    let f = fan.q_sigma().diagonal();
    let qf = q as f64;
    let counts = fq::closed_point_counts(q, max_degree);
    let mut log = fan.rank() as f64 * qf.ln() - fan.pic_rank() as f64 * (1.0 - 1.0 / qf).ln();
    for (i, n) in counts.iter().enumerate() {
        let u = qf.powi(-(i as i32 + 1));
        let local: f64 = f.iter().enumerate().map(|(k, &c)| c as f64 * u.powi(k as i32)).sum();
        log += n.to_f64().unwrap_or(f64::INFINITY) * local.ln();
    }
    log.exp()
}

/// One normalized coefficient compared with the leading constant.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StabilizationPoint {
    pub d: Vec<u32>,
    pub distance: u32,
    pub dim: VirtualDim,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StabilizationReport {
    pub points: Vec<StabilizationPoint>,
    /// Largest dimension at each distance from the boundary, by distance.
    pub worst_by_distance: Vec<(u32, VirtualDim)>,
    pub strictly_decreasing: bool,
    pub gamma: CompletionElement,
}

/// `dim(a_d L^{-Σ d_α} - γ)` for every computed coefficient, grouped by
/// `min_α d_α`. The worst dimension must drop strictly with the distance
/// until the difference vanishes.
pub fn stabilization_check(fan: &Fan, dmax: &[u32], precision: i32) -> Result<StabilizationReport> {
    let zeta = zeta_direct_genus0(fan, dmax)?;
    let gamma = leading_constant(fan, &CurveData::genus0(), precision)?;
    let mut points = Vec::new();
    for (d, a) in &zeta.coeffs {
        let normalized = a.shift(-(d.iter().sum::<u32>() as i32));
        let dim = match &gamma.exact {
            Some(g) => (&normalized - g).virtual_dim(),
            None => CompletionElement::new(&normalized, precision).sub(&gamma.truncated)?.virtual_dim(),
        };
        points.push(StabilizationPoint { d: d.clone(), distance: *d.iter().min().unwrap_or(&0), dim });
    }
    let mut worst: BTreeMap<u32, VirtualDim> = BTreeMap::new();
    for p in &points {
        let w = worst.entry(p.distance).or_insert(VirtualDim::MinusInfinity);
        *w = (*w).max(p.dim);
    }
    let worst_by_distance: Vec<(u32, VirtualDim)> = worst.into_iter().collect();
    let strictly_decreasing = worst_by_distance
        .windows(2)
        .all(|w| w[1].1 < w[0].1 || (w[0].1 == VirtualDim::MinusInfinity && w[1].1 == VirtualDim::MinusInfinity));
    Ok(StabilizationReport { points, worst_by_distance, strictly_decreasing, gamma: gamma.truncated })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::ll;
    use crate::toric::preset;

    #[test]
    fn local_factor_examples() {
        let p1 = preset("P1").unwrap();
        let h = local_height_factor(&p1, 3);
        assert_eq!(h.len(), 7);
        assert!(h.coeff(&GradedMonomial { t: vec![2, 0], z: vec![2] }).is_one());
        assert!(h.coeff(&GradedMonomial { t: vec![0, 3], z: vec![-3] }).is_one());
        let p2 = preset("P2").unwrap();
        assert_eq!(local_height_factor(&p2, 2).len(), 10);
        assert_eq!(local_height_factor(&p2, 0).len(), 1);
        for name in ["P1", "P2", "P1xP1", "Bl1P2"] {
            assert!(local_fourier_check(&preset(name).unwrap(), 5), "{name}");
        }
        assert!(local_fourier_check(&p2, 0));
    }

    #[test]
    fn p1_coefficients() {
        let p1 = preset("P1").unwrap();
        let direct = zeta_direct_genus0(&p1, &[4, 4]).unwrap();
        let fourier = zeta_fourier_genus0(&p1, &[4, 4]).unwrap();
        assert_eq!(direct, fourier);
        assert_eq!(direct.coeff(&[0, 0]), ll(&[(1, 1), (0, -1)]));
        for d in 1..=4u32 {
            let e = 2 * d as i32;
            assert_eq!(direct.coeff(&[d, d]), ll(&[(e + 1, 1), (e - 1, -1)]));
        }
        assert_eq!(direct.coeffs.len(), 5);
    }

    #[test]
    fn p2_routes_agree() {
        let p2 = preset("P2").unwrap();
        let a = zeta_direct_genus0(&p2, &[2, 2, 2]).unwrap();
        let b = zeta_fourier_genus0(&p2, &[2, 2, 2]).unwrap();
        assert_eq!(a.disagreements(&b), Vec::<Vec<u32>>::new());
        assert_eq!(a.coeff(&[0, 0, 0]), ll(&[(1, 1), (0, -1)]).pow(2));
        // every coefficient is divisible by (L-1)^2
        for c in a.coeffs.values() {
            assert!(c.div_exact(&ll(&[(1, 1), (0, -1)]).pow(2)).is_some());
        }
    }

    #[test]
    fn leading_constants() {
        let g0 = CurveData::genus0();
        let p1 = leading_constant(&preset("P1").unwrap(), &g0, 6).unwrap();
        assert_eq!(p1.exact, Some(ll(&[(1, 1), (-1, -1)])));
        assert!((p1.specialize_f64(5) - 4.8).abs() < 1e-12);
        let p2 = leading_constant(&preset("P2").unwrap(), &g0, 10).unwrap();
        let numeric = leading_constant_numeric(&preset("P2").unwrap(), 5, 40);
        assert!((p2.specialize_f64(5) - numeric).abs() / numeric < 1e-3);
        let pp = leading_constant(&preset("P1xP1").unwrap(), &g0, 6).unwrap();
        assert_eq!(pp.exact, Some(ll(&[(1, 1), (-1, -1)]).pow(2)));
    }

    #[test]
    fn stabilization() {
        let r = stabilization_check(&preset("P1").unwrap(), &[5, 5], 8).unwrap();
        assert!(r.points.iter().filter(|p| p.distance >= 1).all(|p| p.dim == VirtualDim::MinusInfinity));
        assert!(r.strictly_decreasing);
        let r = stabilization_check(&preset("P1").unwrap(), &[0, 0], 8).unwrap();
        assert_eq!(r.points.len(), 1);
    }
}
