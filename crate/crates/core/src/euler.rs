//! Plethystic exponential and logarithm, and motivic Euler products over a
//! genus-0 curve for local factors that do not vary along the curve.
//!
//! `L`, the character markers `z^m` and the `T`-monomials are treated as
//! line elements, so `PE[Σ a · L^j z^m T^e] = ∏ (1 - L^j z^m T^e)^(-a)`.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Mutex, OnceLock};

use crate::coeff::{CurveData, GradedMonomial, GradedSeries, LefschetzLaurent, Truncation};
use crate::error::{Error, Result};

/// Integer multiplicities on line elements `L^j · mono`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlethysticSeries {
    t_vars: Vec<String>,
    z_rank: usize,
    trunc: Truncation,
    terms: BTreeMap<(GradedMonomial, i32), i64>,
}

impl PlethysticSeries {
    pub fn zero(t_vars: Vec<String>, z_rank: usize, trunc: Truncation) -> Self {
        PlethysticSeries { t_vars, z_rank, trunc, terms: BTreeMap::new() }
    }

    /// Adds multiplicity to `L^j · mono`; `mono` must have positive `T`-degree.
    pub fn add(&mut self, j: i32, mono: GradedMonomial, mult: i64) {
        assert!(mono.total_degree() > 0, "plethystic term needs positive T-degree");
        if mult == 0 || !self.trunc.admits(&mono) {
            return;
        }
        let key = (mono, j);
        let v = self.terms.entry(key.clone()).or_default();
        *v += mult;
        if *v == 0 {
            self.terms.remove(&key);
        }
    }

    pub fn get(&self, j: i32, mono: &GradedMonomial) -> i64 {
        self.terms.get(&(mono.clone(), j)).copied().unwrap_or(0)
    }

    /// `(j, mono, multiplicity)` triples.
    pub fn terms(&self) -> impl Iterator<Item = (i32, &GradedMonomial, i64)> {
        self.terms.iter().map(|((m, j), &a)| (*j, m, a))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn truncation(&self) -> &Truncation {
        &self.trunc
    }

    /// Multiplies by a polynomial in `L` (a line-element sum).
    pub fn scale(&self, c: &LefschetzLaurent) -> Result<Self> {
        let mut out = Self::zero(self.t_vars.clone(), self.z_rank, self.trunc.clone());
        for ((m, j), &a) in &self.terms {
            for (k, ck) in c.terms() {
                let ck = i64::try_from(ck).map_err(|_| Error::IdentityViolation("multiplicity overflow".into()))?;
                out.add(j + k, m.clone(), a * ck);
            }
        }
        Ok(out)
    }
}

/// `∏ (1 - L^j · mono)^(-mult)` expanded through the truncation of `g`.
pub fn plethystic_exp(g: &PlethysticSeries) -> GradedSeries {
    let one = GradedSeries::one(g.t_vars.clone(), g.z_rank, g.trunc.clone());
    pe_times(one, g)
}

fn pe_times(mut s: GradedSeries, g: &PlethysticSeries) -> GradedSeries {
    for (j, m, a) in g.terms() {
        s = s.mul_geometric_power(j, m, a);
    }
    s
}

/// The unique `g` with `plethystic_exp(g) = f` through the truncation of `f`.
pub fn plethystic_log(f: &GradedSeries) -> Result<PlethysticSeries> {
    let unit = f.unit_monomial();
    if !f.constant_term().is_one() {
        return Err(Error::NonUnitConstantTerm);
    }
    if f.terms().any(|(m, _)| m.total_degree() == 0 && *m != unit) {
        return Err(Error::NonUnitConstantTerm);
    }
    let mut g = PlethysticSeries::zero(f.t_vars().to_vec(), f.z_rank(), f.truncation().clone());
    let mut residual = f.clone();
    for k in 1..=f.truncation().total {
        let layer: Vec<(GradedMonomial, LefschetzLaurent)> =
            residual.terms().filter(|(m, _)| m.total_degree() == k).map(|(m, c)| (m.clone(), c.clone())).collect();
        for (m, c) in layer {
            for (j, a) in c.terms() {
                let a = i64::try_from(a).map_err(|_| Error::IdentityViolation("multiplicity overflow".into()))?;
                g.add(j, m.clone(), a);
                residual = residual.mul_geometric_power(j, &m, -a);
            }
        }
    }
    Ok(g)
}

/// `∏_{v ∈ C} f` for a local factor `f` constant along a genus-0 curve `C`,
/// computed as `PE[[C] · PL[f]]`.
pub fn euler_product(f: &GradedSeries, curve: &CurveData) -> Result<GradedSeries> {
    let class = curve.class()?;
    let g = plethystic_log(f)?;
    // PE[(1 + L) g] = f · PE[L g]; the generic path handles other classes
    if class == LefschetzLaurent::one() + LefschetzLaurent::l() {
        return Ok(pe_times(f.clone(), &g.scale(&LefschetzLaurent::l())?));
    }
    Ok(plethystic_exp(&g.scale(&class)?))
}

pub fn euler_product_genus0(f: &GradedSeries) -> Result<GradedSeries> {
    euler_product(f, &CurveData::genus0())
}

/// Finite multiset of labels with positive multiplicities.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LabeledPartition<K: Ord> {
    mult: BTreeMap<K, u32>,
}

impl<K: Ord + Clone> LabeledPartition<K> {
    pub fn empty() -> Self {
        LabeledPartition { mult: BTreeMap::new() }
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (K, u32)>) -> Self {
        let mut p = Self::empty();
        for (k, n) in pairs {
            p.insert(k, n);
        }
        p
    }

    pub fn insert(&mut self, k: K, n: u32) {
        if n > 0 {
            *self.mult.entry(k).or_default() += n;
        }
    }

    pub fn remove_one(&mut self, k: &K) {
        if let Some(v) = self.mult.get_mut(k) {
            *v -= 1;
            if *v == 0 {
                self.mult.remove(k);
            }
        }
    }

    pub fn size(&self) -> u32 {
        self.mult.values().sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&K, u32)> {
        self.mult.iter().map(|(k, &n)| (k, n))
    }

    /// Multiplicities sorted decreasingly; the configuration class depends
    /// only on this.
    pub fn shape(&self) -> Vec<u32> {
        let mut s: Vec<u32> = self.mult.values().copied().collect();
        s.sort_unstable_by(|a, b| b.cmp(a));
        s
    }
}

fn shape_cache() -> &'static Mutex<HashMap<Vec<u32>, LefschetzLaurent>> {
    static CACHE: OnceLock<Mutex<HashMap<Vec<u32>, LefschetzLaurent>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Class of configurations of distinct points on a genus-0 curve, `n_i`
/// of them carrying label `i`, for the given multiplicity shape.
pub fn config_class_of_shape(shape: &[u32]) -> LefschetzLaurent {
    let mut key: Vec<u32> = shape.iter().copied().filter(|&n| n > 0).collect();
    key.sort_unstable_by(|a, b| b.cmp(a));
    if key.is_empty() {
        return LefschetzLaurent::one();
    }
    if let Some(v) = shape_cache().lock().expect("cache poisoned").get(&key) {
        return v.clone();
    }
    let k = key.len();
    let mut f = GradedSeries::one(GradedSeries::var_names(k), 0, Truncation::boxed(key.clone()));
    for i in 0..k {
        let mut t = vec![0; k];
        t[i] = 1;
        f.add_term(GradedMonomial { t, z: vec![] }, LefschetzLaurent::one());
    }
    let ep = euler_product_genus0(&f).expect("constant term is 1");
    let v = ep.coeff_t(&key);
    shape_cache().lock().expect("cache poisoned").insert(key, v.clone());
    v
}

pub fn config_class<K: Ord + Clone>(pi: &LabeledPartition<K>, curve: &CurveData) -> Result<LefschetzLaurent> {
    curve.require_genus0()?;
    Ok(config_class_of_shape(&pi.shape()))
}

/// `(L - 1)^{|π|} · config_class(π)`: configurations carrying a unit at each point.
pub fn torsor_twist<K: Ord + Clone>(pi: &LabeledPartition<K>, curve: &CurveData) -> Result<LefschetzLaurent> {
    Ok(LefschetzLaurent::l_minus_one_pow(pi.size()) * config_class(pi, curve)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::ll;

    fn uni(trunc: u32) -> PlethysticSeries {
        PlethysticSeries::zero(vec!["T".into()], 0, Truncation::total(trunc))
    }

    fn t(k: u32) -> GradedMonomial {
        GradedMonomial { t: vec![k], z: vec![] }
    }

    fn series(coeffs: &[LefschetzLaurent], trunc: u32) -> GradedSeries {
        let mut s = GradedSeries::zero(vec!["T".into()], 0, Truncation::total(trunc));
        for (k, c) in coeffs.iter().enumerate() {
            s.add_term(t(k as u32), c.clone());
        }
        s
    }

    #[test]
    fn exp_examples() {
        let mut g = uni(5);
        g.add(0, t(1), 1);
        assert!(plethystic_exp(&g).univariate_coeffs().iter().all(|c| c.is_one()));
        g.add(1, t(1), 1);
        let c = plethystic_exp(&g).univariate_coeffs();
        for (k, ck) in c.iter().enumerate() {
            assert_eq!(*ck, LefschetzLaurent::projective_space(k as u32));
        }
        let mut g = uni(5);
        g.add(0, t(1), 1);
        g.add(0, t(2), -1);
        assert_eq!(plethystic_exp(&g), series(&[1.into(), 1.into()], 5));
    }

    #[test]
    fn log_examples() {
        let g = plethystic_log(&series(&[1.into(), 1.into()], 6)).unwrap();
        assert_eq!(g.get(0, &t(1)), 1);
        assert_eq!(g.get(0, &t(2)), -1);
        assert_eq!(plethystic_exp(&g), series(&[1.into(), 1.into()], 6));
        let g = plethystic_log(&series(&[1.into(), (-1).into()], 6)).unwrap();
        assert_eq!(g.len(), 1);
        assert_eq!(g.get(0, &t(1)), -1);

        let mut s = GradedSeries::one(vec!["T".into()], 1, Truncation::total(4));
        s = s.mul_geometric_power(0, &GradedMonomial { t: vec![1], z: vec![1] }, 1);
        let g = plethystic_log(&s).unwrap();
        assert_eq!(g.len(), 1);
        assert_eq!(g.get(0, &GradedMonomial { t: vec![1], z: vec![1] }), 1);

        assert_eq!(plethystic_log(&series(&[2.into(), 1.into()], 3)), Err(Error::NonUnitConstantTerm));
    }

    #[test]
    fn euler_examples() {
        let geo = series(&vec![LefschetzLaurent::one(); 7], 6);
        let c = euler_product_genus0(&geo).unwrap().univariate_coeffs();
        for (k, ck) in c.iter().enumerate() {
            assert_eq!(*ck, LefschetzLaurent::projective_space(k as u32));
        }
        let c = euler_product_genus0(&series(&[1.into(), 1.into()], 4)).unwrap().univariate_coeffs();
        assert_eq!(c[1], ll(&[(1, 1), (0, 1)]));
        assert_eq!(c[2], ll(&[(2, 1)]));

        let mut s = GradedSeries::one(vec!["T".into()], 1, Truncation::total(5));
        s = s.mul_geometric_power(0, &GradedMonomial { t: vec![1], z: vec![1] }, 1);
        let ep = euler_product_genus0(&s).unwrap();
        assert_eq!(ep.coeff(&GradedMonomial { t: vec![3], z: vec![3] }), LefschetzLaurent::projective_space(3));
        assert_eq!(ep.forget_z().univariate_coeffs()[4], LefschetzLaurent::projective_space(4));
    }

    #[test]
    fn config_classes() {
        let g0 = CurveData::genus0();
        let one = LabeledPartition::from_pairs([(0, 1)]);
        assert_eq!(config_class(&one, &g0).unwrap(), ll(&[(1, 1), (0, 1)]));
        let pair = LabeledPartition::from_pairs([(0, 1), (1, 1)]);
        assert_eq!(config_class(&pair, &g0).unwrap(), ll(&[(2, 1), (1, 1)]));
        let double = LabeledPartition::from_pairs([(0, 2)]);
        assert_eq!(config_class(&double, &g0).unwrap(), ll(&[(2, 1)]));
        assert_eq!(torsor_twist(&one, &g0).unwrap(), ll(&[(2, 1), (0, -1)]));
        assert_eq!(torsor_twist(&pair, &g0).unwrap(), ll(&[(1, 1), (0, -1)]).pow(2) * ll(&[(2, 1), (1, 1)]));
        assert!(torsor_twist(&LabeledPartition::<i32>::empty(), &g0).unwrap().is_one());
    }
}
