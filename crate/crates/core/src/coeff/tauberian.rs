//! Radius of convergence estimates and the transfer of coefficient
//! asymptotics through `F(T) / ∏ (1 - L^{ρ_i} T_i)`.

use std::collections::BTreeMap;

use num_rational::BigRational;

use super::completion::CompletionElement;
use super::laurent::{LefschetzLaurent, VirtualDim};
use crate::error::{Error, Result};

/// Multi-indexed coefficient family `d ↦ a_d`.
pub type CoeffMap = BTreeMap<Vec<u32>, LefschetzLaurent>;

/// `max_i dim(A_i) / i` over a finite prefix `A_1, A_2, ...`, a lower bound
/// for the limsup defining the radius. `None` if every coefficient is zero.
pub fn radius_estimate(prefix: &[LefschetzLaurent]) -> Result<Option<BigRational>> {
    if prefix.is_empty() {
        return Err(Error::EmptyPrefix);
    }
    Ok(prefix
        .iter()
        .enumerate()
        .filter_map(|(i, a)| {
            a.virtual_dim().finite().map(|d| BigRational::new(d.into(), (i as i64 + 1).into()))
        })
        .max())
}

fn pair(rho: &[u32], d: &[u32]) -> i32 {
    rho.iter().zip(d).map(|(r, x)| (r * x) as i32).sum()
}

/// All exponent vectors `0 <= d <= dmax`, lexicographic.
pub fn box_points(dmax: &[u32]) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for &m in dmax {
        out = out
            .into_iter()
            .flat_map(|p: Vec<u32>| {
                (0..=m).map(move |x| {
                    let mut q = p.clone();
                    q.push(x);
                    q
                })
            })
            .collect();
    }
    out
}

/// Coefficients `b_d = Σ_{δ <= d} a_δ L^{⟨ρ, d - δ⟩}` of `F / ∏(1 - L^{ρ_i} T_i)`
/// for all `d <= dmax`. Zero coefficients are omitted.
pub fn tauberian_transfer(a: &CoeffMap, rho: &[u32], dmax: &[u32]) -> Result<CoeffMap> {
    if let Some(k) = a.keys().find(|k| k.len() != rho.len()) {
        return Err(Error::DimensionMismatch { expected: rho.len(), got: k.len() });
    }
    if dmax.len() != rho.len() {
        return Err(Error::DimensionMismatch { expected: rho.len(), got: dmax.len() });
    }
    let mut out = CoeffMap::new();
    for d in box_points(dmax) {
        let mut b = LefschetzLaurent::zero();
        for (delta, coeff) in a.iter() {
            if delta.iter().zip(&d).all(|(x, y)| x <= y) {
                let gap: Vec<u32> = d.iter().zip(delta).map(|(x, y)| x - y).collect();
                b += &coeff.shift(pair(rho, &gap));
            }
        }
        if !b.is_zero() {
            out.insert(d, b);
        }
    }
    Ok(out)
}

/// `F(L^{-ρ}) = Σ a_δ L^{-⟨ρ, δ⟩}` over the given coefficients, truncated at
/// `precision`. Exact when `a` contains every term of dimension `>= -precision`.
pub fn evaluate_at_inverse(a: &CoeffMap, rho: &[u32], precision: i32) -> CompletionElement {
    let mut acc = LefschetzLaurent::zero();
    for (delta, c) in a {
        acc += &c.shift(-pair(rho, delta));
    }
    CompletionElement::new(&acc, precision)
}

/// One row of a stabilisation profile.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransferPoint {
    pub d: Vec<u32>,
    /// `min_i ρ_i d_i`
    pub distance: u32,
    /// `dim(b_d L^{-⟨ρ,d⟩} - F(L^{-ρ}))` at the working precision.
    pub dim: VirtualDim,
}

/// Summary of how fast normalised coefficients approach `F(L^{-ρ})`.
#[derive(Clone, Debug, PartialEq)]
pub struct TransferProfile {
    pub points: Vec<TransferPoint>,
    /// Largest `η` with `dim <= -η · distance` at every point of positive
    /// distance and finite dimension; `None` when no such point exists
    /// (all differences vanish to the working precision).
    pub eta: Option<BigRational>,
    /// Worst dimension at each distance `0, 1, ...` is non-increasing.
    pub monotone: bool,
}

/// Differences `b_d L^{-⟨ρ,d⟩} - F(L^{-ρ})` for all `d <= dmax`, where `a`
/// must hold all coefficients needed for `F(L^{-ρ})` at `precision`.
pub fn transfer_profile(a: &CoeffMap, rho: &[u32], dmax: &[u32], precision: i32) -> Result<TransferProfile> {
    let b = tauberian_transfer(a, rho, dmax)?;
    let limit = evaluate_at_inverse(a, rho, precision);
    let mut points = Vec::new();
    for d in box_points(dmax) {
        let bd = b.get(&d).cloned().unwrap_or_default().shift(-pair(rho, &d));
        let diff = CompletionElement::new(&bd, precision).sub(&limit)?;
        let distance = rho.iter().zip(&d).map(|(r, x)| r * x).min().unwrap_or(0);
        points.push(TransferPoint { d, distance, dim: diff.virtual_dim() });
    }
    let eta = points
        .iter()
        .filter(|p| p.distance > 0)
        .filter_map(|p| p.dim.finite().map(|dim| BigRational::new((-dim).into(), (p.distance as i64).into())))
        .min();
    let max_distance = points.iter().map(|p| p.distance).max().unwrap_or(0);
    let worst: Vec<VirtualDim> = (0..=max_distance)
        .map(|k| points.iter().filter(|p| p.distance == k).map(|p| p.dim).max().unwrap_or(VirtualDim::MinusInfinity))
        .collect();
    let monotone = worst.windows(2).all(|w| w[1] <= w[0]);
    Ok(TransferProfile { points, eta, monotone })
}

/// A worked instance: coefficients of `F`, the weight `ρ`, and how many
/// coefficients per index are needed for `F(L^{-ρ})` at precision `P`.
pub struct TransferExample {
    pub name: &'static str,
    pub rho: Vec<u32>,
    coeff: fn(&[u32]) -> LefschetzLaurent,
}

impl TransferExample {
    /// Coefficients on the box `[0, k]^r`.
    pub fn coefficients(&self, k: u32) -> CoeffMap {
        box_points(&vec![k; self.rho.len()])
            .into_iter()
            .map(|d| {
                let c = (self.coeff)(&d);
                (d, c)
            })
            .filter(|(_, c)| !c.is_zero())
            .collect()
    }

    pub fn profile(&self, dmax: u32, precision: i32) -> Result<TransferProfile> {
        // every shipped family has dim(a_δ L^{-⟨ρ,δ⟩}) <= -|δ|
        let k = dmax.max(precision.max(0) as u32 + 1);
        let a = self.coefficients(k);
        transfer_profile(&a, &self.rho, &vec![dmax; self.rho.len()], precision)
    }
}

/// The shipped transfer instances.
pub fn shipped_examples() -> Vec<TransferExample> {
    vec![
        TransferExample {
            name: "constant, rho=2",
            rho: vec![2],
            coeff: |d| if d[0] == 0 { LefschetzLaurent::one() } else { LefschetzLaurent::zero() },
        },
        TransferExample {
            name: "1 - L T, rho=1",
            rho: vec![1],
            coeff: |d| match d[0] {
                0 => LefschetzLaurent::one(),
                1 => -LefschetzLaurent::l(),
                _ => LefschetzLaurent::zero(),
            },
        },
        TransferExample {
            name: "geometric L^-k, rho=1",
            rho: vec![1],
            coeff: |d| LefschetzLaurent::monomial(1, -(d[0] as i32)),
        },
        TransferExample {
            name: "Kapranov [P^k] L^-2k, rho=1",
            rho: vec![1],
            coeff: |d| LefschetzLaurent::projective_space(d[0]).shift(-2 * d[0] as i32),
        },
        TransferExample {
            name: "two-variable L^-(i+j), rho=(1,1)",
            rho: vec![1, 1],
            coeff: |d| LefschetzLaurent::monomial(1, -((d[0] + d[1]) as i32)),
        },
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::laurent::ll;
    use crate::coeff::series::{GradedMonomial, GradedSeries, Truncation};

    fn one_var(pairs: &[(u32, LefschetzLaurent)]) -> CoeffMap {
        pairs.iter().map(|(k, c)| (vec![*k], c.clone())).collect()
    }

    /// Independent route: multiply the series by geometric factors.
    fn transfer_by_series(a: &CoeffMap, rho: &[u32], dmax: &[u32]) -> CoeffMap {
        let r = rho.len();
        let mut f = GradedSeries::zero(GradedSeries::var_names(r), 0, Truncation::boxed(dmax.to_vec()));
        for (d, c) in a {
            f.add_term(GradedMonomial { t: d.clone(), z: vec![] }, c.clone());
        }
        for i in 0..r {
            let mut e = vec![0; r];
            e[i] = 1;
            f = f.mul_geometric_power(rho[i] as i32, &GradedMonomial { t: e, z: vec![] }, 1);
        }
        f.terms().map(|(m, c)| (m.t.clone(), c.clone())).collect()
    }

    #[test]
    fn radius() {
        let ones = vec![LefschetzLaurent::one(); 5];
        assert_eq!(radius_estimate(&ones).unwrap(), Some(BigRational::from_integer(0.into())));
        let pows: Vec<_> = (1..6).map(|i| LefschetzLaurent::monomial(1, i)).collect();
        assert_eq!(radius_estimate(&pows).unwrap(), Some(BigRational::from_integer(1.into())));
        let kap: Vec<_> = (1..8).map(LefschetzLaurent::projective_space).collect();
        assert_eq!(radius_estimate(&kap).unwrap(), Some(BigRational::from_integer(1.into())));
        assert_eq!(radius_estimate(&[]), Err(Error::EmptyPrefix));
    }

    #[test]
    fn transfer_matches_series_division() {
        let a = one_var(&[(0, LefschetzLaurent::one())]);
        let b = tauberian_transfer(&a, &[2], &[3]).unwrap();
        assert_eq!(b[&vec![3]], ll(&[(6, 1)]));
        assert_eq!(b, transfer_by_series(&a, &[2], &[3]));

        let a = one_var(&[(0, LefschetzLaurent::one()), (1, -LefschetzLaurent::l())]);
        let b = tauberian_transfer(&a, &[1], &[2]).unwrap();
        assert!(!b.contains_key(&vec![2]));
        assert_eq!(b, transfer_by_series(&a, &[1], &[2]));

        let a: CoeffMap = box_points(&[2, 3])
            .into_iter()
            .map(|d| (d.clone(), ll(&[(d[0] as i32 - d[1] as i32, 1), (0, 1)])))
            .collect();
        assert_eq!(tauberian_transfer(&a, &[1, 2], &[2, 3]).unwrap(), transfer_by_series(&a, &[1, 2], &[2, 3]));
    }

    #[test]
    fn geometric_profile_decays() {
        let ex = &shipped_examples()[2];
        let p = ex.profile(6, 20).unwrap();
        for pt in &p.points {
            assert_eq!(pt.dim, VirtualDim::Finite(-2 * (pt.d[0] as i64 + 1)));
        }
        assert!(p.monotone);
        assert_eq!(p.eta, Some(BigRational::new(7.into(), 3.into())));
    }
}
