//! ℒ-functions of rational polyhedral cones: generating series of lattice
//! points graded by a linear form, their residues at `T = 1`, and the
//! identities used to control the pole of the height zeta function.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use serde::Serialize;

use crate::char_poisson::{integrate_dual, CharSum, Lattice, Sublattice};
use crate::coeff::LefschetzLaurent;
use crate::error::{Error, Result};
use crate::lattice::{self, Hnf, Point};

/// A regular fan whose support is a (not necessarily full) convex cone.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConeFan {
    rank: usize,
    rays: Vec<Point>,
    max_cones: Vec<Vec<usize>>,
    faces: Vec<Vec<usize>>,
    support: Vec<Point>,
    support_dim: usize,
}

impl ConeFan {
    /// Validates rays and cones; the support defaults to the cone on all rays.
    pub fn new(rank: usize, rays: Vec<Point>, max_cones: Vec<Vec<usize>>, support: Option<Vec<Point>>) -> Result<Self> {
        for (i, r) in rays.iter().enumerate() {
            if r.len() != rank {
                return Err(Error::DimensionMismatch { expected: rank, got: r.len() });
            }
            if !lattice::is_primitive(r) {
                return Err(Error::NonPrimitiveRay { index: i, ray: r.clone() });
            }
            if let Some(j) = rays[..i].iter().position(|s| s == r) {
                return Err(Error::DuplicateRay(j, i));
            }
        }
        let mut cones = Vec::new();
        for c in max_cones {
            let mut c = c.clone();
            c.sort_unstable();
            c.dedup();
            if c.iter().any(|&a| a >= rays.len()) {
                return Err(Error::InvalidFan(format!("cone {c:?} refers to a missing ray")));
            }
            let cols: Vec<Point> = c.iter().map(|&a| rays[a].clone()).collect();
            let g = lattice::gcd_maximal_minors(&cols);
            if g != 1 {
                return Err(Error::NonUnimodularCone { cone: c, det: g });
            }
            cones.push(c);
        }
        cones.sort();
        let support = support.unwrap_or_else(|| rays.clone());
        let support_dim = lattice::rank(&support);
        let mut faces = std::collections::BTreeSet::new();
        for c in &cones {
            for k in 0..=c.len() {
                for s in lattice::subsets(c.len(), k) {
                    faces.insert(s.iter().map(|&i| c[i]).collect::<Vec<_>>());
                }
            }
        }
        let mut faces: Vec<Vec<usize>> = faces.into_iter().collect();
        faces.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        if faces.is_empty() {
            faces.push(vec![]);
        }
        let cf = ConeFan { rank, rays, max_cones: cones, faces, support, support_dim };
        cf.check_support()?;
        Ok(cf)
    }

    /// The positive orthant of `Z^n` as a single cone.
    pub fn orthant(n: usize) -> Self {
        let rays = (0..n).map(|i| unit(n, i)).collect();
        ConeFan::new(n, rays, vec![(0..n).collect()], None).expect("orthant is regular")
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn rays(&self) -> &[Point] {
        &self.rays
    }

    pub fn max_cones(&self) -> &[Vec<usize>] {
        &self.max_cones
    }

    pub fn faces(&self) -> &[Vec<usize>] {
        &self.faces
    }

    pub fn support_dim(&self) -> usize {
        self.support_dim
    }

    fn cone_rays(&self, cone: &[usize]) -> Vec<Point> {
        cone.iter().map(|&a| self.rays[a].clone()).collect()
    }

    /// `y` lies in the support cone.
    pub fn in_support(&self, y: &[i64]) -> bool {
        in_cone(&self.support, y)
    }

    /// `y` lies in the relative interior of the face.
    pub fn in_relint(&self, face: &[usize], y: &[i64]) -> bool {
        if face.is_empty() {
            return y.iter().all(|&x| x == 0);
        }
        match lattice::solve_in_span(&self.cone_rays(face), y) {
            Some(c) => c.iter().all(|x| x.is_positive()),
            None => false,
        }
    }

    /// Every ray lies in the support, and on a sample box every support point
    /// lies in the relative interior of exactly one face.
    fn check_support(&self) -> Result<()> {
        for (i, r) in self.rays.iter().enumerate() {
            if !self.in_support(r) {
                return Err(Error::InvalidFan(format!("ray {i} lies outside the support")));
            }
        }
        let radius = 3i64;
        for y in box_points(self.rank, radius) {
            let inside = self.in_support(&y);
            let hits = self.faces.iter().filter(|f| self.in_relint(f, &y)).count();
            match (inside, hits) {
                (true, 1) | (false, 0) => {}
                (true, 0) => return Err(Error::InvalidFan(format!("support point {y:?} is not covered"))),
                (false, _) => return Err(Error::InvalidFan(format!("cone point {y:?} lies outside the support"))),
                (true, _) => return Err(Error::OverlappingCones(hits)),
            }
        }
        Ok(())
    }

    fn exponents(&self, lambda0: &[i64]) -> Result<Vec<u64>> {
        self.rays
            .iter()
            .map(|r| {
                let v = lattice::dot(lambda0, r);
                if v <= 0 {
                    Err(Error::NonPositiveDirection { ray: r.clone(), value: v })
                } else {
                    Ok(v as u64)
                }
            })
            .collect()
    }
}

fn unit(n: usize, i: usize) -> Point {
    let mut v = vec![0; n];
    v[i] = 1;
    v
}

fn box_points(n: usize, radius: i64) -> Vec<Point> {
    let mut out = Vec::new();
    let mut p = vec![-radius; n];
    loop {
        out.push(p.clone());
        let mut i = 0;
        loop {
            if i == n {
                return out;
            }
            if p[i] < radius {
                p[i] += 1;
                break;
            }
            p[i] = -radius;
            i += 1;
        }
    }
}

/// Membership in the cone spanned by `gens`, through linearly independent
/// subfamilies (Carathéodory).
pub fn in_cone(gens: &[Point], y: &[i64]) -> bool {
    if y.iter().all(|&x| x == 0) {
        return true;
    }
    let r = lattice::rank(gens);
    for k in 1..=r {
        for s in lattice::subsets(gens.len(), k) {
            let cols: Vec<Point> = s.iter().map(|&i| gens[i].clone()).collect();
            if lattice::rank(&cols) != k {
                continue;
            }
            if let Some(c) = lattice::solve_in_span(&cols, y) {
                if c.iter().all(|x| !x.is_negative()) {
                    return true;
                }
            }
        }
    }
    false
}

/// `Σ_δ ∏_{ℓ ∈ δ} T^{e_ℓ} / (1 - T^{e_ℓ})`, one exponent list per face.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LSeriesRational {
    pub summands: Vec<Vec<u64>>,
}

impl LSeriesRational {
    /// Power-series coefficients through `level`.
    pub fn expand(&self, level: usize) -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); level + 1];
        for s in &self.summands {
            let mut poly = vec![BigInt::zero(); level + 1];
            poly[0] = BigInt::one();
            for &e in s {
                // multiply by T^e + T^{2e} + ...
                let e = e as usize;
                let mut next = vec![BigInt::zero(); level + 1];
                for (k, c) in poly.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                    let mut j = k + e;
                    while j <= level {
                        next[j] += c;
                        j += e;
                    }
                }
                poly = next;
            }
            for (o, p) in out.iter_mut().zip(poly) {
                *o += p;
            }
        }
        out
    }

    /// `((1 - T^a)^k · this)(1)` by exact polynomial division; every
    /// exponent must divide `a` and no summand may have more than `k` factors.
    pub fn special_value(&self, a: u64, k: usize) -> Result<BigInt> {
        let mut total = BigInt::zero();
        for s in &self.summands {
            if s.len() > k {
                return Err(Error::HypothesisViolation(format!("summand with {} factors exceeds order {k}", s.len())));
            }
            total += summand_special_value(s, a, k, &BigInt::one())?;
        }
        Ok(total)
    }
}

/// Value at `T = 1` of `(1 - T^a)^k · weight(T) · ∏ T^e/(1 - T^e)`, where the
/// weight polynomial is only needed through its value at 1.
fn summand_special_value(s: &[u64], a: u64, k: usize, weight_at_one: &BigInt) -> Result<BigInt> {
    let mut poly: Vec<BigInt> = vec![BigInt::one()];
    for &e in s {
        if !a.is_multiple_of(e) {
            return Err(Error::IdentityViolation(format!("exponent {e} does not divide {a}")));
        }
        // T^e (1 - T^a) / (1 - T^e) = T^e (1 + T^e + ... + T^{a-e})
        let mut factor = vec![BigInt::zero(); a as usize + 1];
        for j in 0..a / e {
            factor[(e + j * e) as usize] = BigInt::one();
        }
        poly = poly_mul(&poly, &factor);
    }
    for _ in s.len()..k {
        let mut factor = vec![BigInt::zero(); a as usize + 1];
        factor[0] = BigInt::one();
        factor[a as usize] = -BigInt::one();
        poly = poly_mul(&poly, &factor);
    }
    Ok(poly.iter().sum::<BigInt>() * weight_at_one)
}

fn poly_mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// The ℒ-series of the support along `λ0`, face by face.
pub fn l_series_direction(cf: &ConeFan, lambda0: &[i64]) -> Result<LSeriesRational> {
    let e = cf.exponents(lambda0)?;
    Ok(LSeriesRational { summands: cf.faces.iter().map(|f| f.iter().map(|&a| e[a]).collect()).collect() })
}

/// Lattice points of the support at each level `⟨λ0, y⟩ ≤ level`, by
/// enumeration of a bounding box.
pub fn brute_force_levels(cf: &ConeFan, lambda0: &[i64], level: usize) -> Result<Vec<BigInt>> {
    Ok(points_by_level(cf, lambda0, level)?.iter().map(|p| BigInt::from(p.len())).collect())
}

/// `Σ` over full-dimensional faces of `∏ 1/⟨λ0, ρ⟩`.
pub fn chi_value(cf: &ConeFan, lambda0: &[i64]) -> Result<BigRational> {
    let e = cf.exponents(lambda0)?;
    Ok(cf
        .faces
        .iter()
        .filter(|f| f.len() == cf.support_dim)
        .map(|f| f.iter().fold(BigRational::one(), |acc, &a| acc / BigRational::from_integer(e[a].into())))
        .sum())
}

/// Constants of the residue identity at `T = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidueData {
    pub a: u64,
    pub chi: BigRational,
    pub rank: usize,
    pub special_value: BigInt,
}

impl ResidueData {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "a": self.a,
            "chi": self.chi.to_string(),
            "rank": self.rank,
            "special_value": self.special_value.to_string(),
        })
    }
}

fn lcm_of(e: &[u64]) -> u64 {
    e.iter().fold(1u64, |acc, x| acc.lcm(x))
}

/// Checks `((1 - T^a)^rk · ℒ)(1) = a^rk · χ` with `a` the lcm over all rays.
pub fn residue_check(cf: &ConeFan, lambda0: &[i64]) -> Result<ResidueData> {
    if cf.support_dim != cf.rank {
        return Err(Error::HypothesisViolation("support is not full-dimensional".into()));
    }
    let e = cf.exponents(lambda0)?;
    let a = lcm_of(&e);
    let l = l_series_direction(cf, lambda0)?;
    let value = l.special_value(a, cf.rank)?;
    let chi = chi_value(cf, lambda0)?;
    let expected = BigRational::from_integer(BigInt::from(a).pow(cf.rank as u32)) * &chi;
    if BigRational::from_integer(value.clone()) != expected {
        return Err(Error::IdentityViolation(format!("residue {value} differs from a^rk chi = {expected}")));
    }
    Ok(ResidueData { a, chi, rank: cf.rank, special_value: value })
}

/// A short exact sequence `0 → M → N → Γ → 0`: `i` by its columns in `N`,
/// `j` by its rows (linear forms on `N`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExactSequence {
    pub i: Vec<Point>,
    pub j: Vec<Point>,
}

impl ExactSequence {
    pub fn new(n: usize, i: Vec<Point>, j: Vec<Point>) -> Result<Self> {
        if i.iter().chain(&j).any(|v| v.len() != n) {
            return Err(Error::InexactSequence("entry length differs from rank".into()));
        }
        let s = ExactSequence { i, j };
        s.check(n)?;
        Ok(s)
    }

    /// `j ∘ i = 0`, `i` saturated of full rank, `j` surjective, ranks add up.
    fn check(&self, n: usize) -> Result<()> {
        let composite_zero = self.i.iter().all(|c| self.j.iter().all(|r| lattice::dot(r, c) == 0));
        let i_ok = lattice::gcd_maximal_minors(&self.i) == 1;
        let j_ok = lattice::gcd_maximal_minors(&self.j) == 1;
        if composite_zero && i_ok && j_ok && self.i.len() + self.j.len() == n {
            Ok(())
        } else {
            Err(Error::InexactSequence(format!(
                "composite zero {composite_zero}, saturated {i_ok}, surjective {j_ok}"
            )))
        }
    }

    pub fn rank_n(&self) -> usize {
        self.i.len() + self.j.len()
    }

    pub fn apply_j(&self, y: &[i64]) -> Point {
        self.j.iter().map(|r| lattice::dot(r, y)).collect()
    }

    /// Random sequence of total rank `n` with `rk M = m`, from a random
    /// unimodular matrix.
    pub fn random<R: Rng>(rng: &mut R, n: usize, m: usize) -> Self {
        let u = random_unimodular(rng, n);
        let inv = lattice::inverse_unimodular(&u).expect("unimodular");
        let i = u[..m].to_vec();
        // rows m.. of the inverse: row r of inv has entries inv[c][r]
        let j = (m..n).map(|r| (0..n).map(|c| inv[c][r]).collect()).collect();
        ExactSequence::new(n, i, j).expect("constructed exact")
    }
}

/// Columns of a random unimodular matrix with small entries.
pub fn random_unimodular<R: Rng>(rng: &mut R, n: usize) -> Vec<Point> {
    let mut cols: Vec<Point> = (0..n).map(|i| unit(n, i)).collect();
    for _ in 0..2 * n {
        if n < 2 {
            break;
        }
        let a = rng.gen_range(0..n);
        let mut b = rng.gen_range(0..n - 1);
        if b >= a {
            b += 1;
        }
        let f = rng.gen_range(-1i64..=1);
        let add: Point = cols[b].iter().map(|x| x * f).collect();
        cols[a] = lattice::add(&cols[a], &add);
    }
    if n > 0 && rng.gen_bool(0.5) {
        cols[0] = cols[0].iter().map(|x| -x).collect();
    }
    cols
}

/// Level-by-level comparison of `Σ_{y ∈ Υ, j(y) = 0} T^{⟨λ,y⟩}`, computed
/// with the character integral, against `Σ_{y ∈ Υ ∩ i(M)} T^{⟨λ,y⟩}`.
pub fn char_restrict_check(seq: &ExactSequence, cf: &ConeFan, lambda: &[i64], level: usize) -> Result<bool> {
    let n = seq.rank_n();
    if cf.rank != n {
        return Err(Error::DimensionMismatch { expected: n, got: cf.rank });
    }
    let points = points_by_level(cf, lambda, level)?;
    let gamma = Lattice::free(seq.j.len());
    let image = Hnf::new(n, &seq.i);
    for pts in &points {
        let mut s = CharSum::zero(gamma.clone());
        for y in pts {
            s.add_term(&seq.apply_j(y), LefschetzLaurent::one());
        }
        let left = integrate_dual(&s, &Sublattice::zero());
        let right = LefschetzLaurent::from_int(pts.iter().filter(|y| image.contains(y)).count() as i64);
        if left != right {
            return Ok(false);
        }
    }
    Ok(true)
}

fn points_by_level(cf: &ConeFan, lambda: &[i64], level: usize) -> Result<Vec<Vec<Point>>> {
    let e = cf.exponents(lambda)?;
    let min_e = *e.iter().min().unwrap_or(&1) as i64;
    let maxabs = cf.support.iter().flatten().map(|x| x.abs()).max().unwrap_or(1);
    let radius = Integer::div_ceil(&(level as i64 * maxabs), &min_e);
    let mut out = vec![Vec::new(); level + 1];
    for y in box_points(cf.rank, radius) {
        let l = lattice::dot(lambda, &y);
        if l >= 0 && l as usize <= level && cf.in_support(&y) {
            out[l as usize].push(y);
        }
    }
    Ok(out)
}

/// Outcome of the shifted-cone identity on one `(cone fan, z)` instance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ShiftedConeReport {
    pub identity_holds: bool,
    pub cardinality_bound_holds: bool,
    pub degree_bound_holds: bool,
}

impl ShiftedConeReport {
    pub fn passed(&self) -> bool {
        self.identity_holds && self.cardinality_bound_holds && self.degree_bound_holds
    }
}

/// Rays of the face that vanish on every coordinate in `k`.
fn split_face(cf: &ConeFan, face: &[usize], k: &[usize]) -> (Vec<usize>, Vec<usize>) {
    face.iter().partition(|&&a| k.iter().all(|&i| cf.rays[a][i] == 0))
}

/// Lattice points `y = Σ c_ℓ ρ_ℓ` with all `c_ℓ ≥ 1` over `rays`, and
/// `y_i < z_i` for `i ∈ k`.
fn bounded_relint_points(cf: &ConeFan, rays: &[usize], k: &[usize], z: &[i64]) -> Vec<Point> {
    let n = cf.rank;
    let cap = z.iter().copied().max().unwrap_or(0).max(0);
    let mut out = Vec::new();
    let mut c = vec![1i64; rays.len()];
    if rays.is_empty() {
        let zero = vec![0; n];
        if k.iter().all(|&i| 0 < z[i]) {
            out.push(zero);
        }
        return out;
    }
    if cap < 1 {
        return out;
    }
    loop {
        let y = rays.iter().zip(&c).fold(vec![0; n], |acc, (&a, &ci)| {
            lattice::add(&acc, &cf.rays[a].iter().map(|x| x * ci).collect::<Vec<_>>())
        });
        if k.iter().all(|&i| y[i] < z[i]) {
            out.push(y);
        }
        let mut idx = 0;
        loop {
            if idx == c.len() {
                return out;
            }
            if c[idx] < cap {
                c[idx] += 1;
                break;
            }
            c[idx] = 1;
            idx += 1;
        }
    }
}

/// Inclusion-exclusion for the support shifted by `z` inside the orthant:
/// `ℒ_{Υ ∩ (z + Λ)} = Σ_{δ, K} (-1)^{|K|} ℒ_{δ(K, z)}` through
/// `⟨y, (1,…,1)⟩ ≤ level`, where `δ(K, z)` is the part of the relative
/// interior of `δ` with `y_i < z_i` for `i ∈ K`. Also checks the size and
/// degree bounds on the finite part of each `δ(K, z)`.
pub fn shifted_cone_check(cf: &ConeFan, z: &[i64], level: usize) -> Result<ShiftedConeReport> {
    let n = cf.rank;
    if z.len() != n || z.iter().any(|&x| x < 0) {
        return Err(Error::DimensionMismatch { expected: n, got: z.len() });
    }
    if cf.rays.iter().flatten().any(|&x| x < 0) {
        return Err(Error::HypothesisViolation("rays leave the orthant".into()));
    }
    let ones = vec![1i64; n];
    let points = points_by_level(cf, &ones, level)?;
    let subsets_k: Vec<Vec<usize>> = (0..=n).flat_map(|s| lattice::subsets(n, s)).collect();
    let mut identity_holds = true;
    for y in points.iter().flatten() {
        let left = i64::from(y.iter().zip(z).all(|(a, b)| a >= b));
        let mut right = 0i64;
        for f in &cf.faces {
            if !cf.in_relint(f, y) {
                continue;
            }
            for k in &subsets_k {
                if k.iter().all(|&i| y[i] < z[i]) {
                    right += if k.len() % 2 == 0 { 1 } else { -1 };
                }
            }
        }
        identity_holds &= left == right;
    }
    let z_level: i64 = z.iter().sum();
    let max_ray_level = cf.rays.iter().map(|r| r.iter().sum::<i64>()).max().unwrap_or(0);
    let card_bound = BigInt::from(z_level).pow(n as u32);
    let deg_bound = n as i64 * z_level * max_ray_level;
    let mut cardinality_bound_holds = true;
    let mut degree_bound_holds = true;
    for f in &cf.faces {
        for k in subsets_k.iter().filter(|k| !k.is_empty()) {
            let (_, upper) = split_face(cf, f, k);
            let pts = bounded_relint_points(cf, &upper, k, z);
            cardinality_bound_holds &= BigInt::from(pts.len()) <= card_bound;
            degree_bound_holds &= pts.iter().all(|y| y.iter().sum::<i64>() <= deg_bound);
        }
    }
    Ok(ShiftedConeReport { identity_holds, cardinality_bound_holds, degree_bound_holds })
}

/// Random regular subdivision of the orthant by repeated stellar subdivision.
pub fn random_stellar_fan<R: Rng>(rng: &mut R, n: usize, steps: usize) -> ConeFan {
    let mut rays: Vec<Point> = (0..n).map(|i| unit(n, i)).collect();
    let mut cones: Vec<Vec<usize>> = vec![(0..n).collect()];
    for _ in 0..steps {
        let c = cones[rng.gen_range(0..cones.len())].clone();
        let size = rng.gen_range(2..=n.max(2)).min(n);
        if size < 2 {
            break;
        }
        let mut chosen = c.clone();
        while chosen.len() > size {
            chosen.remove(rng.gen_range(0..chosen.len()));
        }
        let new_ray = chosen.iter().fold(vec![0; n], |acc, &a| lattice::add(&acc, &rays[a]));
        if rays.contains(&new_ray) {
            continue;
        }
        let idx = rays.len();
        rays.push(new_ray);
        let mut next = Vec::new();
        for cone in cones {
            if chosen.iter().all(|a| cone.contains(a)) {
                for &drop in &chosen {
                    let mut sub: Vec<usize> = cone.iter().copied().filter(|&a| a != drop).collect();
                    sub.push(idx);
                    next.push(sub);
                }
            } else {
                next.push(cone);
            }
        }
        cones = next;
    }
    let support = (0..n).map(|i| unit(n, i)).collect();
    ConeFan::new(n, rays, cones, Some(support)).expect("stellar subdivisions stay regular")
}

/// Both sides of the special value of the convolution series at `T = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConvolutionReport {
    /// Coefficients of `f1(T^λ0)` from the shifted-cone decomposition.
    pub series: Vec<LefschetzLaurent>,
    /// The same coefficients by direct enumeration.
    pub enumerated: Vec<LefschetzLaurent>,
    pub residue: ResidueData,
    /// `((1 - T^a)^{rk M} f1(T^λ0))(1)` from the decomposition.
    pub special_value: LefschetzLaurent,
    /// `a^{rk M} · Σ_y a(y) · χ` on the sublattice cone.
    pub product_value: LefschetzLaurent,
}

impl ConvolutionReport {
    pub fn agrees(&self) -> bool {
        self.series == self.enumerated && self.special_value == self.product_value
    }
}

/// The convolution series `f1 = Σ_{y1} a(y1) ℒ_{Λ ∩ M ∩ (y1 + Λ)}` for the
/// orthant `Λ` and a finitely supported weight `a`; `cf` must be a regular
/// fan with support `Λ ∩ M_R`.
pub fn convolution_f1(
    weights: &BTreeMap<Point, LefschetzLaurent>,
    seq: &ExactSequence,
    cf: &ConeFan,
    lambda0: &[i64],
    level: usize,
) -> Result<ConvolutionReport> {
    let n = seq.rank_n();
    let rk_m = seq.i.len();
    if cf.rank != n || cf.support_dim != rk_m {
        return Err(Error::DimensionMismatch { expected: rk_m, got: cf.support_dim });
    }
    if weights.keys().any(|y| y.len() != n || y.iter().any(|&x| x < 0)) {
        return Err(Error::HypothesisViolation("weights must sit in the orthant".into()));
    }
    if cf.rays.iter().any(|r| r.iter().any(|&x| x < 0) || seq.apply_j(r).iter().any(|&x| x != 0)) {
        return Err(Error::HypothesisViolation("rays must lie in the orthant and in the sublattice".into()));
    }
    // Γ^∨ ∩ Λ^∨ = {0} iff M_R meets the open orthant
    let sum = cf.rays.iter().fold(vec![0; n], |acc, r| lattice::add(&acc, r));
    if sum.iter().any(|&x| x <= 0) {
        return Err(Error::HypothesisViolation("sublattice misses the open orthant".into()));
    }
    let e = cf.exponents(lambda0)?;
    let a = lcm_of(&e);
    let subsets_k: Vec<Vec<usize>> = (0..=n).flat_map(|s| lattice::subsets(n, s)).collect();

    let mut series = vec![LefschetzLaurent::zero(); level + 1];
    let mut special_l = LefschetzLaurent::zero();
    for (y1, w) in weights {
        let mut per_weight = vec![BigInt::zero(); level + 1];
        let mut value = BigInt::zero();
        for f in &cf.faces {
            for k in &subsets_k {
                let (lower, upper) = split_face(cf, f, k);
                let sign = if k.len() % 2 == 0 { BigInt::one() } else { -BigInt::one() };
                let finite = bounded_relint_points(cf, &upper, k, y1);
                if finite.is_empty() {
                    continue;
                }
                let open = LSeriesRational { summands: vec![lower.iter().map(|&l| e[l]).collect()] };
                let open_coeffs = open.expand(level);
                for p in &finite {
                    let shift = lattice::dot(lambda0, p) as usize;
                    for (t, c) in open_coeffs.iter().enumerate() {
                        if t + shift <= level {
                            per_weight[t + shift] += &sign * c;
                        }
                    }
                }
                if lower.len() == rk_m {
                    value += &sign * summand_special_value(&open.summands[0], a, rk_m, &BigInt::from(finite.len()))?;
                }
            }
        }
        for (s, c) in series.iter_mut().zip(per_weight) {
            *s += &(w * &LefschetzLaurent::from_int(c));
        }
        special_l += &(w * &LefschetzLaurent::from_int(value));
    }

    // direct enumeration of Σ_{y1} a(y1) Σ_{y ∈ Λ ∩ M, y ≥ y1} T^{⟨λ0, y⟩}
    let points = points_by_level(cf, lambda0, level)?;
    let mut enumerated = vec![LefschetzLaurent::zero(); level + 1];
    for (l, pts) in points.iter().enumerate() {
        for (y1, w) in weights {
            let count = pts.iter().filter(|y| y.iter().zip(y1).all(|(a, b)| a >= b)).count();
            enumerated[l] += &(w * &LefschetzLaurent::from_int(count as i64));
        }
    }

    let chi = chi_value(cf, lambda0)?;
    let scaled = BigRational::from_integer(BigInt::from(a).pow(rk_m as u32)) * &chi;
    if !scaled.is_integer() {
        return Err(Error::IdentityViolation(format!("a^rk chi = {scaled} is not an integer")));
    }
    let total: LefschetzLaurent = weights.values().cloned().sum();
    let product_value = &total * &LefschetzLaurent::from_int(scaled.to_integer());
    let residue = ResidueData { a, chi, rank: rk_m, special_value: scaled.to_integer() };
    Ok(ConvolutionReport { series, enumerated, residue, special_value: special_l, product_value })
}

/// A shipped instance of the convolution identity.
pub struct ConvolutionInstance {
    pub name: &'static str,
    pub seq: ExactSequence,
    pub cf: ConeFan,
    pub weights: BTreeMap<Point, LefschetzLaurent>,
    pub lambda0: Point,
}

/// Instances from the toric sequences of the plane and of `P1 x P1`.
pub fn shipped_convolution_instances() -> Vec<ConvolutionInstance> {
    let plane_seq = ExactSequence::new(3, vec![vec![1, 1, 1]], vec![vec![1, 0, -1], vec![0, 1, -1]]).expect("exact");
    let plane_cf = ConeFan::new(3, vec![vec![1, 1, 1]], vec![vec![0]], None).expect("regular");
    let mut plane_w = BTreeMap::new();
    plane_w.insert(vec![0, 0, 0], LefschetzLaurent::one());
    plane_w.insert(vec![1, 0, 0], LefschetzLaurent::l());

    let quad_seq = ExactSequence::new(
        4,
        vec![vec![1, 1, 0, 0], vec![0, 0, 1, 1]],
        vec![vec![1, -1, 0, 0], vec![0, 0, 1, -1]],
    )
    .expect("exact");
    let quad_cf = ConeFan::new(4, vec![vec![1, 1, 0, 0], vec![0, 0, 1, 1]], vec![vec![0, 1]], None).expect("regular");
    let mut quad_w = BTreeMap::new();
    quad_w.insert(vec![0, 0, 0, 0], LefschetzLaurent::one());
    quad_w.insert(vec![1, 0, 0, 0], LefschetzLaurent::l());
    quad_w.insert(vec![0, 0, 2, 1], LefschetzLaurent::l() - LefschetzLaurent::one());

    vec![
        ConvolutionInstance {
            name: "plane",
            seq: plane_seq.clone(),
            cf: plane_cf.clone(),
            weights: plane_w,
            lambda0: vec![1, 1, 1],
        },
        ConvolutionInstance { name: "plane-zero", seq: plane_seq, cf: plane_cf, weights: BTreeMap::new(), lambda0: vec![1, 1, 1] },
        ConvolutionInstance { name: "quadric", seq: quad_seq, cf: quad_cf, weights: quad_w, lambda0: vec![1, 1, 1, 1] },
    ]
}

/// Shipped cones with their directions: the half-line, the quadrant and the
/// cone on `(1,0), (1,2)` subdivided by `(1,1)`.
pub fn shipped_cone_examples() -> Vec<(&'static str, ConeFan, Point)> {
    vec![
        ("half-line", ConeFan::new(1, vec![vec![1]], vec![vec![0]], None).expect("regular"), vec![1]),
        ("half-line-3", ConeFan::new(1, vec![vec![1]], vec![vec![0]], None).expect("regular"), vec![3]),
        ("quadrant", ConeFan::orthant(2), vec![1, 1]),
        ("subdivided", subdivided_cone(), vec![1, 1]),
    ]
}

pub fn subdivided_cone() -> ConeFan {
    ConeFan::new(2, vec![vec![1, 0], vec![1, 1], vec![1, 2]], vec![vec![0, 1], vec![1, 2]], Some(vec![vec![1, 0], vec![1, 2]]))
        .expect("regular")
}
