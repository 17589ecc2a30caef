//! Complete regular fans, the toric exact sequence and the polynomial that
//! drives the local height factors.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::coeff::LefschetzLaurent;
use crate::error::{Error, Result};
use crate::lattice::{self, Point};

/// Fan description as read from a file, before validation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawFan {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub rank: usize,
    pub rays: Vec<Point>,
    pub max_cones: Vec<Vec<usize>>,
}

/// A validated complete fan whose maximal cones are simplicial and unimodular.
#[derive(Clone, Debug)]
pub struct Fan {
    name: String,
    rank: usize,
    rays: Vec<Point>,
    max_cones: Vec<Vec<usize>>,
    faces: Vec<Vec<usize>>,
    face_masks: HashSet<u64>,
    inverses: Vec<Vec<Point>>,
}

impl PartialEq for Fan {
    fn eq(&self, other: &Self) -> bool {
        self.rank == other.rank && self.rays == other.rays && self.max_cones == other.max_cones
    }
}

/// Unique expansion `m = Σ n_α ρ_α` with every `n_α > 0` over the rays of one cone.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ConeDecomposition {
    pub cone: Vec<usize>,
    pub coefficients: Vec<i64>,
}

impl ConeDecomposition {
    /// The same data as a vector indexed by all rays.
    pub fn ray_vector(&self, num_rays: usize) -> Vec<i64> {
        let mut d = vec![0; num_rays];
        for (&a, &c) in self.cone.iter().zip(&self.coefficients) {
            d[a] = c;
        }
        d
    }
}

pub fn validate_fan(raw: &RawFan) -> Result<Fan> {
    let n = raw.rank;
    if n == 0 {
        return Err(Error::InvalidFan("rank must be positive".into()));
    }
    if raw.rays.len() > 63 {
        return Err(Error::InvalidFan("at most 63 rays are supported".into()));
    }
    for (i, r) in raw.rays.iter().enumerate() {
        if r.len() != n {
            return Err(Error::InvalidFan(format!("ray {i} has length {}, expected {n}", r.len())));
        }
        if r.iter().all(|&x| x == 0) {
            return Err(Error::InvalidFan(format!("ray {i} is zero")));
        }
        if !lattice::is_primitive(r) {
            return Err(Error::NonPrimitiveRay { index: i, ray: r.clone() });
        }
    }
    for i in 0..raw.rays.len() {
        for j in i + 1..raw.rays.len() {
            if raw.rays[i] == raw.rays[j] {
                return Err(Error::DuplicateRay(i, j));
            }
        }
    }
    if raw.max_cones.is_empty() {
        return Err(Error::InvalidFan("no maximal cones".into()));
    }
    let mut cones = Vec::with_capacity(raw.max_cones.len());
    for (k, c) in raw.max_cones.iter().enumerate() {
        let mut c = c.clone();
        c.sort_unstable();
        c.dedup();
        if c.len() != n || c.len() != raw.max_cones[k].len() {
            return Err(Error::InvalidFan(format!("maximal cone {k} must have {n} distinct rays")));
        }
        if let Some(&bad) = c.iter().find(|&&a| a >= raw.rays.len()) {
            return Err(Error::InvalidFan(format!("maximal cone {k} refers to missing ray {bad}")));
        }
        cones.push(c);
    }
    let mut inverses = Vec::with_capacity(cones.len());
    for c in &cones {
        let cols: Vec<Point> = c.iter().map(|&a| raw.rays[a].clone()).collect();
        match lattice::inverse_unimodular(&cols) {
            Some(inv) => inverses.push(inv),
            None => return Err(Error::NonUnimodularCone { cone: c.clone(), det: lattice::det(&cols) }),
        }
    }
    let mut order: Vec<usize> = (0..cones.len()).collect();
    order.sort_by(|&a, &b| cones[a].cmp(&cones[b]));
    let cones: Vec<Vec<usize>> = order.iter().map(|&i| cones[i].clone()).collect();
    let inverses: Vec<Vec<Point>> = order.iter().map(|&i| inverses[i].clone()).collect();
    let mut seen = BTreeSet::new();
    for (k, c) in cones.iter().enumerate() {
        if !seen.insert(c.clone()) {
            return Err(Error::OverlappingCones(k));
        }
    }
    // every wall borders exactly two maximal cones
    let mut walls: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    for c in &cones {
        for skip in 0..n {
            let w: Vec<usize> = c.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &a)| a).collect();
            *walls.entry(w).or_default() += 1;
        }
    }
    if let Some((w, &count)) = walls.iter().find(|(_, &c)| c != 2) {
        return Err(Error::WallConditionViolation { wall: w.clone(), count });
    }
    let mut fan = Fan {
        name: raw.name.clone().unwrap_or_else(|| "custom".into()),
        rank: n,
        rays: raw.rays.clone(),
        max_cones: cones,
        faces: vec![],
        face_masks: HashSet::new(),
        inverses,
    };
    // a generic interior point of each cone must lie in no other maximal cone
    for k in 0..fan.max_cones.len() {
        let p = fan.max_cones[k]
            .iter()
            .enumerate()
            .fold(vec![0i64; n], |acc, (i, &a)| lattice::add(&acc, &scaled(&fan.rays[a], 1009 + 17 * i as i64)));
        let hits = (0..fan.max_cones.len()).filter(|&j| fan.cone_coords(j, &p).iter().all(|&x| x >= 0)).count();
        if hits != 1 {
            return Err(Error::OverlappingCones(k));
        }
    }
    fan.build_faces();
    Ok(fan)
}

fn scaled(v: &[i64], s: i64) -> Point {
    v.iter().map(|x| x * s).collect()
}

fn mask(cone: &[usize]) -> u64 {
    cone.iter().fold(0, |m, &a| m | (1 << a))
}

impl Fan {
    pub fn from_raw(raw: &RawFan) -> Result<Self> {
        validate_fan(raw)
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let raw: RawFan = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        validate_fan(&raw)
    }

    pub fn from_toml_str(s: &str) -> Result<Self> {
        let raw: RawFan = toml::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        validate_fan(&raw)
    }

    /// Reads a fan file; `.toml` files are TOML, everything else JSON.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        if path.extension().is_some_and(|e| e == "toml") {
            Self::from_toml_str(&text)
        } else {
            Self::from_json_str(&text)
        }
    }

    pub fn to_raw(&self) -> RawFan {
        RawFan {
            name: Some(self.name.clone()),
            rank: self.rank,
            rays: self.rays.clone(),
            max_cones: self.max_cones.clone(),
        }
    }

    fn build_faces(&mut self) {
        let mut faces = BTreeSet::new();
        for c in &self.max_cones {
            for k in 0..=c.len() {
                for s in lattice::subsets(c.len(), k) {
                    faces.insert(s.iter().map(|&i| c[i]).collect::<Vec<_>>());
                }
            }
        }
        let mut faces: Vec<Vec<usize>> = faces.into_iter().collect();
        faces.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        self.face_masks = faces.iter().map(|f| mask(f)).collect();
        self.faces = faces;
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// Dimension of the lattice of cocharacters.
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn rays(&self) -> &[Point] {
        &self.rays
    }

    pub fn num_rays(&self) -> usize {
        self.rays.len()
    }

    /// Rank of the Picard group: number of rays minus the rank.
    pub fn pic_rank(&self) -> usize {
        self.rays.len() - self.rank
    }

    pub fn max_cones(&self) -> &[Vec<usize>] {
        &self.max_cones
    }

    /// All cones, the zero cone first, ordered by dimension then lexicographically.
    pub fn faces(&self) -> &[Vec<usize>] {
        &self.faces
    }

    pub fn is_face(&self, cone: &[usize]) -> bool {
        self.face_masks.contains(&mask(cone))
    }

    /// Face test on a bitmask of ray indices.
    pub fn is_face_mask(&self, m: u64) -> bool {
        self.face_masks.contains(&m)
    }

    fn cone_coords(&self, k: usize, m: &[i64]) -> Point {
        lattice::apply(&self.inverses[k], m, self.rank)
    }

    pub fn sequence(&self) -> ToricSequence<'_> {
        ToricSequence { fan: self }
    }

    /// The cone containing `m` in its relative interior and the positive
    /// coefficients of `m` on its rays.
    pub fn cone_decompose(&self, m: &[i64]) -> ConeDecomposition {
        assert_eq!(m.len(), self.rank, "point of wrong rank");
        for (k, c) in self.max_cones.iter().enumerate() {
            let x = self.cone_coords(k, m);
            if x.iter().all(|&v| v >= 0) {
                let (cone, coefficients) = c.iter().zip(&x).filter(|(_, &v)| v > 0).map(|(&a, &v)| (a, v)).unzip();
                return ConeDecomposition { cone, coefficients };
            }
        }
        unreachable!("a validated fan is complete")
    }

    /// `Q(X) = Σ_σ ∏_{α∈σ} X_α ∏_{α∉σ} (1 - X_α)`, expanded.
    ///
    /// The coefficient of the squarefree monomial `X^S` is
    /// `Σ_{σ ⊆ S, σ ∈ Σ} (-1)^{|S \ σ|}`.
    pub fn q_sigma(&self) -> IntPoly {
        let k = self.rays.len();
        let mut p = IntPoly::zero(k);
        for s in 0u64..(1 << k) {
            let size = s.count_ones();
            let mut c = 0i64;
            for f in &self.faces {
                let fm = mask(f);
                if fm & !s == 0 {
                    c += if (size - f.len() as u32).is_multiple_of(2) { 1 } else { -1 };
                }
            }
            if c != 0 {
                let e = (0..k).map(|a| ((s >> a) & 1) as u32).collect();
                p.add_term(e, c);
            }
        }
        p
    }

    /// `Σ_σ (L - 1)^{n - dim σ}`.
    pub fn class_of_x(&self) -> LefschetzLaurent {
        self.faces.iter().map(|f| LefschetzLaurent::l_minus_one_pow((self.rank - f.len()) as u32)).sum()
    }

    /// `Q` at every `X_α = L^-1`, checked against `(1 - L^-1)^r [X] L^-n`.
    pub fn q_sigma_at_linv(&self) -> Result<LefschetzLaurent> {
        let v = self.q_sigma().eval_diagonal(&LefschetzLaurent::monomial(1, -1));
        let one_minus = LefschetzLaurent::one() - LefschetzLaurent::monomial(1, -1);
        let expected = one_minus.pow(self.pic_rank() as u32) * self.class_of_x().shift(-(self.rank as i32));
        if v != expected {
            return Err(Error::IdentityViolation(format!("Q at L^-1 is {v}, expected {expected}")));
        }
        Ok(v)
    }

    /// Product fan on `Z^{n1} × Z^{n2}`; rays of `self` come first.
    pub fn product(&self, other: &Fan) -> Fan {
        let (n1, n2) = (self.rank, other.rank);
        let mut rays = Vec::new();
        for r in &self.rays {
            let mut v = r.clone();
            v.extend(std::iter::repeat_n(0, n2));
            rays.push(v);
        }
        for r in &other.rays {
            let mut v = vec![0; n1];
            v.extend(r.iter().copied());
            rays.push(v);
        }
        let off = self.rays.len();
        let mut max_cones = Vec::new();
        for a in &self.max_cones {
            for b in &other.max_cones {
                let mut c = a.clone();
                c.extend(b.iter().map(|x| x + off));
                max_cones.push(c);
            }
        }
        let raw = RawFan { name: Some(format!("{}x{}", self.name, other.name)), rank: n1 + n2, rays, max_cones };
        validate_fan(&raw).expect("product of valid fans is valid")
    }
}

/// `m ↦ (⟨m, ρ_α⟩)_α` and its dual `d ↦ Σ d_α ρ_α`.
#[derive(Clone, Copy, Debug)]
pub struct ToricSequence<'a> {
    fan: &'a Fan,
}

impl ToricSequence<'_> {
    pub fn gamma(&self, m: &[i64]) -> Vec<i64> {
        self.fan.rays.iter().map(|r| lattice::dot(m, r)).collect()
    }

    pub fn gamma_dual(&self, d: &[i64]) -> Point {
        lattice::apply(&self.fan.rays, d, self.fan.rank)
    }

    pub fn pic_rank(&self) -> usize {
        self.fan.pic_rank()
    }

    /// `γ^∨(d) = 0`, i.e. `d` comes from the Picard group.
    pub fn in_kernel_of_dual(&self, d: &[i64]) -> bool {
        self.gamma_dual(d).iter().all(|&x| x == 0)
    }
}

/// A vector indexed by the rays of a fan.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DegreeVector(pub Vec<i64>);

impl DegreeVector {
    pub fn is_effective(&self) -> bool {
        self.0.iter().all(|&x| x >= 0)
    }
}

/// Degree against the anticanonical class: `Σ_α d_α`.
pub fn anticanonical_degree(d: &DegreeVector) -> i64 {
    d.0.iter().sum()
}

/// Integer polynomial in a fixed number of variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntPoly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, i64>,
}

impl IntPoly {
    pub fn zero(nvars: usize) -> Self {
        IntPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn one(nvars: usize) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(vec![0; nvars], 1);
        p
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = Self::zero(nvars);
        p.add_term(e, 1);
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn add_term(&mut self, e: Vec<u32>, c: i64) {
        assert_eq!(e.len(), self.nvars);
        let v = self.terms.entry(e.clone()).or_default();
        *v += c;
        if *v == 0 {
            self.terms.remove(&e);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &i64)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e: &[u32]) -> i64 {
        self.terms.get(e).copied().unwrap_or(0)
    }

    pub fn min_nonconstant_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum::<u32>()).filter(|&d| d > 0).min()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut p = self.clone();
        for (e, &c) in &other.terms {
            p.add_term(e.clone(), c);
        }
        p
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut p = self.clone();
        for (e, &c) in &other.terms {
            p.add_term(e.clone(), -c);
        }
        p
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars);
        let mut p = Self::zero(self.nvars);
        for (a, &c) in &self.terms {
            for (b, &d) in &other.terms {
                p.add_term(a.iter().zip(b).map(|(x, y)| x + y).collect(), c * d);
            }
        }
        p
    }

    /// Polynomial in the variables of `self` then those of `other`.
    pub fn tensor(&self, other: &Self) -> Self {
        let mut p = Self::zero(self.nvars + other.nvars);
        for (a, &c) in &self.terms {
            for (b, &d) in &other.terms {
                let mut e = a.clone();
                e.extend(b.iter().copied());
                p.add_term(e, c * d);
            }
        }
        p
    }

    /// Value with every variable set to `x`.
    pub fn eval_diagonal(&self, x: &LefschetzLaurent) -> LefschetzLaurent {
        self.terms.iter().map(|(e, &c)| x.pow(e.iter().sum()) * LefschetzLaurent::from_int(c)).sum()
    }

    /// Coefficients of the univariate polynomial `Q(u, ..., u)`.
    pub fn diagonal(&self) -> Vec<i64> {
        let deg = self.terms.keys().map(|e| e.iter().sum::<u32>()).max().unwrap_or(0) as usize;
        let mut out = vec![0; deg + 1];
        for (e, &c) in &self.terms {
            out[e.iter().sum::<u32>() as usize] += c;
        }
        out
    }

    pub fn eval_f64(&self, x: &[f64]) -> f64 {
        self.terms.iter().map(|(e, &c)| c as f64 * e.iter().zip(x).map(|(&k, v)| v.powi(k as i32)).product::<f64>()).sum()
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut ordered: Vec<_> = self.terms.iter().collect();
        ordered.sort_by(|a, b| a.0.iter().sum::<u32>().cmp(&b.0.iter().sum::<u32>()).then_with(|| b.0.cmp(a.0)));
        for (i, (e, &c)) in ordered.into_iter().enumerate() {
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(a, &k)| if k == 1 { format!("X{a}") } else { format!("X{a}^{k}") })
                .collect();
            let sign = if c < 0 { "-" } else { "+" };
            match i {
                0 if c < 0 => write!(f, "-")?,
                0 => {}
                _ => write!(f, " {sign} ")?,
            }
            let a = c.abs();
            if mono.is_empty() {
                write!(f, "{a}")?;
            } else if a == 1 {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "{a}*{}", mono.join("*"))?;
            }
        }
        Ok(())
    }
}

fn cyclic(name: &str, rays: Vec<Point>) -> Fan {
    let k = rays.len();
    let max_cones = (0..k).map(|i| vec![i, (i + 1) % k]).collect();
    validate_fan(&RawFan { name: Some(name.into()), rank: 2, rays, max_cones }).expect("preset fan is valid")
}

/// Projective space of dimension `n`: rays `e_1..e_n, -(e_1+..+e_n)`.
pub fn projective_space(n: usize) -> Fan {
    let mut rays: Vec<Point> = (0..n)
        .map(|i| {
            let mut v = vec![0; n];
            v[i] = 1;
            v
        })
        .collect();
    rays.push(vec![-1; n]);
    let max_cones = lattice::subsets(n + 1, n);
    validate_fan(&RawFan { name: Some(format!("P{n}")), rank: n, rays, max_cones }).expect("preset fan is valid")
}

/// Hirzebruch surface with rays `(1,0), (0,1), (-1,a), (0,-1)`.
pub fn hirzebruch(a: i64) -> Fan {
    cyclic(&format!("Hirzebruch({a})"), vec![vec![1, 0], vec![0, 1], vec![-1, a], vec![0, -1]])
}

/// Blow-up of the plane in one torus-fixed point.
pub fn blowup_p2() -> Fan {
    cyclic("Bl1P2", vec![vec![1, 0], vec![1, 1], vec![0, 1], vec![-1, -1]])
}

pub const PRESET_NAMES: &[&str] = &["P1", "P2", "P1xP1", "Hirzebruch(a)", "Bl1P2"];

/// Looks up a shipped fan: `P1`, `P2`, `Pn`, `P1xP1`, `Hirzebruch(a)` (or `Fa`), `Bl1P2`.
pub fn preset(name: &str) -> Result<Fan> {
    let unknown = || Error::InvalidFan(format!("unknown preset {name:?}; known: {}", PRESET_NAMES.join(", ")));
    let s = name.trim();
    match s {
        "P1xP1" => return Ok(projective_space(1).product(&projective_space(1)).with_name("P1xP1")),
        "Bl1P2" => return Ok(blowup_p2()),
        _ => {}
    }
    if let Some(arg) = s.strip_prefix("Hirzebruch(").and_then(|r| r.strip_suffix(')')) {
        return arg.trim().parse().map(hirzebruch).map_err(|_| unknown());
    }
    if let Some(arg) = s.strip_prefix('F') {
        return arg.parse().map(hirzebruch).map_err(|_| unknown());
    }
    if let Some(arg) = s.strip_prefix('P') {
        return match arg.parse::<usize>() {
            Ok(n) if (1..=6).contains(&n) => Ok(projective_space(n)),
            _ => Err(unknown()),
        };
    }
    Err(unknown())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::ll;

    fn raw_p2() -> RawFan {
        RawFan {
            name: None,
            rank: 2,
            rays: vec![vec![1, 0], vec![0, 1], vec![-1, -1]],
            max_cones: vec![vec![0, 1], vec![1, 2], vec![2, 0]],
        }
    }

    #[test]
    fn validation() {
        let f = validate_fan(&raw_p2()).unwrap();
        assert_eq!(f.pic_rank(), 1);
        assert_eq!(f.faces().len(), 7);
        let mut r = raw_p2();
        r.rays[0] = vec![2, 0];
        assert!(matches!(validate_fan(&r), Err(Error::NonPrimitiveRay { index: 0, .. })));
        let mut r = raw_p2();
        r.max_cones.pop();
        assert!(matches!(validate_fan(&r), Err(Error::WallConditionViolation { .. })));
        let mut r = raw_p2();
        r.rays[2] = vec![1, 0];
        assert!(matches!(validate_fan(&r), Err(Error::DuplicateRay(0, 2))));
        let r = RawFan { name: None, rank: 2, rays: vec![vec![1, 0], vec![1, 2], vec![-1, -1]], max_cones: raw_p2().max_cones };
        assert!(matches!(validate_fan(&r), Err(Error::NonUnimodularCone { .. })));
    }

    #[test]
    fn double_cover_is_rejected() {
        // the six rays of the hexagon fan traversed twice around the origin
        let rays = vec![vec![1, 0], vec![1, 1], vec![0, 1], vec![-1, 0], vec![-1, -1], vec![0, -1]];
        let order = [0usize, 2, 4, 1, 3, 5];
        let max_cones = (0..6).map(|i| vec![order[i], order[(i + 1) % 6]]).collect();
        assert!(validate_fan(&RawFan { name: None, rank: 2, rays, max_cones }).is_err());
    }

    #[test]
    fn decomposition() {
        let f = preset("P2").unwrap();
        assert_eq!(f.cone_decompose(&[0, 0]), ConeDecomposition { cone: vec![], coefficients: vec![] });
        assert_eq!(f.cone_decompose(&[1, 0]), ConeDecomposition { cone: vec![0], coefficients: vec![1] });
        assert_eq!(f.cone_decompose(&[-1, -2]), ConeDecomposition { cone: vec![0, 2], coefficients: vec![1, 2] });
    }

    #[test]
    fn q_sigma_examples() {
        assert_eq!(preset("P1").unwrap().q_sigma().to_string(), "1 - X0*X1");
        assert_eq!(preset("P2").unwrap().q_sigma().to_string(), "1 - X0*X1*X2");
        let q = preset("P1xP1").unwrap().q_sigma();
        let p1 = preset("P1").unwrap().q_sigma();
        assert_eq!(q, p1.tensor(&p1));
        assert_eq!(q.coeff(&[1, 1, 1, 1]), 1);
        assert_eq!(q.coeff(&[1, 1, 0, 0]), -1);
        for name in ["P1", "P2", "P3", "P1xP1", "Hirzebruch(2)", "Bl1P2"] {
            assert_eq!(preset(name).unwrap().q_sigma().min_nonconstant_degree().map(|d| d >= 2), Some(true), "{name}");
        }
    }

    #[test]
    fn classes() {
        assert_eq!(preset("P1").unwrap().class_of_x(), ll(&[(1, 1), (0, 1)]));
        assert_eq!(preset("P2").unwrap().class_of_x(), ll(&[(2, 1), (1, 1), (0, 1)]));
        assert_eq!(preset("P1xP1").unwrap().class_of_x(), ll(&[(2, 1), (1, 2), (0, 1)]));
        assert_eq!(preset("P1").unwrap().q_sigma_at_linv().unwrap(), ll(&[(0, 1), (-2, -1)]));
        assert_eq!(preset("P2").unwrap().q_sigma_at_linv().unwrap(), ll(&[(0, 1), (-3, -1)]));
        assert_eq!(preset("P1xP1").unwrap().q_sigma_at_linv().unwrap(), ll(&[(0, 1), (-2, -1)]).pow(2));
        for name in ["Hirzebruch(3)", "Bl1P2", "P3"] {
            preset(name).unwrap().q_sigma_at_linv().unwrap();
        }
    }

    #[test]
    fn anticanonical() {
        assert_eq!(anticanonical_degree(&DegreeVector(vec![1, 1])), 2);
        assert_eq!(anticanonical_degree(&DegreeVector(vec![4, 4, 4])), 12);
    }

    #[test]
    fn file_formats() {
        let j = r#"{"name":"P2","rank":2,"rays":[[1,0],[0,1],[-1,-1]],"max_cones":[[0,1],[1,2],[2,0]]}"#;
        let f = Fan::from_json_str(j).unwrap();
        assert_eq!(f, preset("P2").unwrap());
        let t = "name = \"P2\"\nrank = 2\nrays = [[1,0],[0,1],[-1,-1]]\nmax_cones = [[0,1],[1,2],[2,0]]\n";
        assert_eq!(Fan::from_toml_str(t).unwrap(), f);
        assert!(matches!(Fan::from_json_str("{"), Err(Error::Parse(_))));
    }
}
