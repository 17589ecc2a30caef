//! Seeded verification suites. Every suite draws from its own ChaCha stream
//! derived from the run seed, so a suite gives the same report whether it
//! runs alone or inside `all`.

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::char_poisson::{
    fourier, fourier_invert, integrate_dual, partial_integrate, poisson_both_sides, CharFunction, CharSum, Lattice,
    Split, Sublattice,
};
use crate::coeff::{GradedMonomial, GradedSeries, LefschetzLaurent, Truncation};
use crate::cone_zeta::{
    brute_force_levels, char_restrict_check, convolution_f1, l_series_direction, random_stellar_fan, residue_check,
    shifted_cone_check, shipped_cone_examples, shipped_convolution_instances, subdivided_cone, ConeFan, ExactSequence,
};
use crate::error::Error;
use crate::euler::{config_class_of_shape, euler_product_genus0, plethystic_exp, plethystic_log};
use crate::fq::{count_hom_fq, count_rational_maps_closed_form, euler_product_specialize};
use crate::height_zeta::{local_fourier_check, zeta_direct_genus0, zeta_fourier_genus0};
use crate::lattice::{self, Point};
use crate::toric::{preset, DegreeVector};

pub const SUITES: [&str; 4] = ["poisson", "fourier", "euler", "cones"];

#[derive(Clone, Debug)]
pub struct VerifyConfig {
    pub seed: u64,
    /// Overrides the per-suite default trial counts.
    pub trials: Option<usize>,
    pub budget: u128,
    /// Run the finite-field counts.
    pub oracle: bool,
}

impl VerifyConfig {
    pub fn new(seed: u64) -> Self {
        VerifyConfig { seed, trials: None, budget: crate::fq::DEFAULT_BUDGET, oracle: true }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    BudgetExceeded,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub name: String,
    pub trials: usize,
    pub failures: usize,
    pub skipped: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_failure: Option<String>,
}

impl CheckReport {
    fn new(name: &str) -> Self {
        CheckReport { name: name.into(), trials: 0, failures: 0, skipped: 0, first_failure: None }
    }

    fn record(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.trials += 1;
        if !ok {
            self.failures += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some(describe());
            }
        }
    }

    fn error(&mut self, e: Error) {
        match e {
            Error::BudgetExceeded { .. } => {
                self.trials += 1;
                self.skipped += 1;
            }
            e => self.record(false, || e.to_string()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub name: String,
    pub status: Status,
    pub checks: Vec<CheckReport>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub status: Status,
    pub suites: Vec<SuiteReport>,
    pub warnings: Vec<String>,
}

impl VerifyReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

fn combine(statuses: impl IntoIterator<Item = Status>) -> Status {
    let mut out = Status::Pass;
    for s in statuses {
        out = match (out, s) {
            (Status::Fail, _) | (_, Status::Fail) => Status::Fail,
            (Status::BudgetExceeded, _) | (_, Status::BudgetExceeded) => Status::BudgetExceeded,
            _ => Status::Pass,
        };
    }
    out
}

/// Runs `suite` (one of [`SUITES`] or `all`).
pub fn run(suite: &str, cfg: &VerifyConfig) -> Result<VerifyReport, Error> {
    let names: Vec<&str> = match suite {
        "all" => SUITES.to_vec(),
        s if SUITES.contains(&s) => vec![s],
        s => return Err(Error::Parse(format!("unknown suite '{s}'"))),
    };
    let mut warnings = Vec::new();
    if cfg.trials == Some(0) {
        warnings.push("trials = 0: randomized checks are vacuous".to_string());
    }
    if !cfg.oracle {
        warnings.push("finite-field oracle disabled".to_string());
    }
    let suites: Vec<SuiteReport> = names.into_iter().map(|name| run_suite(name, cfg)).collect();
    let status = combine(suites.iter().map(|s| s.status));
    Ok(VerifyReport { seed: cfg.seed, status, suites, warnings })
}

fn run_suite(name: &str, cfg: &VerifyConfig) -> SuiteReport {
    let index = SUITES.iter().position(|s| *s == name).expect("known suite") as u64;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(index + 1);
    let checks = match name {
        "poisson" => poisson_suite(&mut rng, cfg.trials.unwrap_or(300)),
        "fourier" => fourier_suite(&mut rng, cfg.trials.unwrap_or(300), cfg),
        "euler" => euler_suite(&mut rng, cfg.trials.unwrap_or(50), cfg),
        _ => cones_suite(&mut rng, cfg.trials.unwrap_or(50)),
    };
    let status = if checks.iter().any(|c| c.failures > 0) {
        Status::Fail
    } else if checks.iter().any(|c| c.skipped > 0) {
        Status::BudgetExceeded
    } else {
        Status::Pass
    };
    SuiteReport { name: name.into(), status, checks }
}

/// A small random Laurent polynomial, possibly zero.
pub fn random_laurent<R: Rng>(rng: &mut R) -> LefschetzLaurent {
    let terms = rng.gen_range(0..=3);
    (0..terms).map(|_| LefschetzLaurent::monomial(rng.gen_range(-3i64..=3), rng.gen_range(-2..=3))).sum()
}

fn random_point<R: Rng>(rng: &mut R, n: usize, r: i64) -> Point {
    (0..n).map(|_| rng.gen_range(-r..=r)).collect()
}

/// Random finitely supported function on `Z^n` with at most 8 support points.
pub fn random_char_function<R: Rng>(rng: &mut R, n: usize) -> CharFunction {
    let mut f = CharFunction::new(n);
    for _ in 0..rng.gen_range(1..=8) {
        f.add(random_point(rng, n, 3), random_laurent(rng));
    }
    f
}

pub fn random_sublattice<R: Rng>(rng: &mut R, n: usize) -> Sublattice {
    Sublattice::new((0..rng.gen_range(0..=n)).map(|_| random_point(rng, n, 3)).collect())
}

fn show(p: &LefschetzLaurent) -> String {
    p.to_string()
}

fn poisson_suite(rng: &mut ChaCha8Rng, trials: usize) -> Vec<CheckReport> {
    let mut identity = CheckReport::new("local poisson identity");
    let mut compose = CheckReport::new("partial integration composes");
    let mut stable = CheckReport::new("zero extension leaves integrals unchanged");
    for _ in 0..trials {
        let n = rng.gen_range(1..=3);
        let psi = random_char_function(rng, n);
        let h = random_sublattice(rng, n);
        // a translate in the span of the support, moved along H
        let support: Vec<Point> = psi.support().map(|(m, _)| m.clone()).collect();
        let mut g = if support.is_empty() { vec![0; n] } else { support[rng.gen_range(0..support.len())].clone() };
        for v in &h.generators {
            let k = rng.gen_range(-2..=2);
            g = lattice::add(&g, &v.iter().map(|x| x * k).collect::<Vec<_>>());
        }
        let (left, right) = poisson_both_sides(&psi, &h, &g);
        identity.record(left == right, || format!("rank {n}, g {g:?}: {} vs {}", show(&left), show(&right)));

        // M = M' + M'' from a random unimodular basis, N inside M'
        let basis = crate::cone_zeta::random_unimodular(rng, n);
        let k = rng.gen_range(0..=n);
        let split = Split::new(basis[..k].to_vec(), basis[k..].to_vec()).expect("unimodular basis");
        let n_prime = random_sublattice(rng, k);
        let embedded = Sublattice::new(n_prime.generators.iter().map(|c| lattice::apply(&basis[..k], c, n)).collect());
        let s = fourier(&psi);
        let direct = integrate_dual(&s, &embedded);
        let staged = integrate_dual(&partial_integrate(&s, &split, &n_prime).expect("ranks match"), &Sublattice::zero());
        compose.record(direct == staged, || format!("rank {n}, split {k}: {} vs {}", show(&direct), show(&staged)));

        let extra = rng.gen_range(1..=2);
        let ext_h =
            Sublattice::new(h.generators.iter().map(|v| v.iter().copied().chain(std::iter::repeat_n(0, extra)).collect()).collect());
        let before = integrate_dual(&s, &h);
        let after = integrate_dual(&fourier(&psi.extend_by_zero(extra)), &ext_h);
        stable.record(before == after, || format!("rank {n} + {extra}: {} vs {}", show(&before), show(&after)));
    }
    vec![identity, compose, stable]
}

fn fourier_suite(rng: &mut ChaCha8Rng, trials: usize, cfg: &VerifyConfig) -> Vec<CheckReport> {
    let mut inversion = CheckReport::new("fourier inversion");
    let mut covariance = CheckReport::new("translation covariance");
    for _ in 0..trials {
        let n = rng.gen_range(1..=3);
        let psi = random_char_function(rng, n);
        let s = fourier(&psi);
        let mut probes: Vec<Point> = psi.support().map(|(m, _)| m.clone()).collect();
        probes.push(random_point(rng, n, 4));
        let ok = probes.iter().all(|x| fourier_invert(&s, x) == psi.value(x));
        inversion.record(ok, || format!("rank {n}: inversion fails on {probes:?}"));
        let a = random_point(rng, n, 3);
        let shifted = fourier(&psi.translate(&a));
        let expected = CharSum::ev(Lattice::free(n), &a).mul(&s);
        covariance.record(shifted == expected, || format!("rank {n}, shift {a:?}"));
    }

    let mut local = CheckReport::new("local height factor equals its fourier side");
    for name in ["P1", "P2", "P3", "P1xP1", "F1", "F2", "Bl1P2"] {
        let fan = preset(name).expect("preset");
        local.record(local_fourier_check(&fan, 5), || name.to_string());
    }

    let mut routes = CheckReport::new("direct and fourier routes agree");
    let mut support = CheckReport::new("coefficients supported on the dual kernel");
    let mut fibration = CheckReport::new("coefficients divisible by (L-1)^n");
    let mut oracle = CheckReport::new("finite-field counts match");
    for (name, dmax) in route_instances() {
        let fan = preset(name).expect("preset");
        let direct = match zeta_direct_genus0(&fan, &dmax) {
            Ok(z) => z,
            Err(e) => {
                routes.error(e);
                continue;
            }
        };
        match zeta_fourier_genus0(&fan, &dmax) {
            Ok(f) => {
                let diff = direct.disagreements(&f);
                routes.record(diff.is_empty(), || format!("{name}: coefficients differ at {diff:?}"));
            }
            Err(e) => routes.error(e),
        }
        let twist = LefschetzLaurent::l_minus_one_pow(fan.rank() as u32);
        for (d, c) in &direct.coeffs {
            let dv: Vec<i64> = d.iter().map(|&x| x as i64).collect();
            support.record(fan.sequence().in_kernel_of_dual(&dv), || format!("{name} at {d:?}"));
            fibration.record(c.div_exact(&twist).is_some(), || format!("{name} at {d:?}: {c}"));
            if cfg.oracle {
                for q in [2u64, 3] {
                    match count_hom_fq(&fan, &DegreeVector(dv.clone()), q, cfg.budget) {
                        Ok(count) => {
                            let expected = c.specialize_q(q);
                            oracle.record(BigRational::from_integer(count.clone()) == expected, || {
                                format!("{name} at {d:?}, q = {q}: count {count}, coefficient gives {expected}")
                            });
                        }
                        Err(e) => oracle.error(e),
                    }
                }
            }
        }
    }
    vec![inversion, covariance, local, routes, support, fibration, oracle]
}

/// Fans and degree boxes on which the two routes and the oracle are compared.
pub fn route_instances() -> Vec<(&'static str, Vec<u32>)> {
    vec![
        ("P1", vec![6, 6]),
        ("P2", vec![3, 3, 3]),
        ("P1xP1", vec![3, 3, 3, 3]),
        ("F1", vec![2, 2, 2, 2]),
        ("Bl1P2", vec![2, 2, 2, 2]),
    ]
}

fn t_mono(k: u32) -> GradedMonomial {
    GradedMonomial { t: vec![k], z: vec![] }
}

/// Random local factor `1 + Σ_{k ≤ 3} c_k T^k` with `c_k` among
/// `0, 1, L, L + 1, L^2 - L`.
pub fn random_local_factor<R: Rng>(rng: &mut R, trunc: u32) -> GradedSeries {
    let choices = [
        LefschetzLaurent::zero(),
        LefschetzLaurent::one(),
        LefschetzLaurent::l(),
        LefschetzLaurent::l() + LefschetzLaurent::one(),
        LefschetzLaurent::monomial(1, 2) - LefschetzLaurent::l(),
    ];
    let mut f = GradedSeries::one(vec!["T".into()], 0, Truncation::total(trunc));
    for k in 1..=3 {
        f.add_term(t_mono(k), choices[rng.gen_range(0..choices.len())].clone());
    }
    f
}

fn random_unit_series<R: Rng>(rng: &mut R, trunc: u32) -> GradedSeries {
    let mut f = GradedSeries::one(vec!["T".into()], 0, Truncation::total(trunc));
    for k in 1..=trunc {
        f.add_term(t_mono(k), random_laurent(rng));
    }
    f
}

fn euler_suite(rng: &mut ChaCha8Rng, trials: usize, cfg: &VerifyConfig) -> Vec<CheckReport> {
    let mut special = CheckReport::new("euler product specializes to the closed-point product");
    let mut multiplicative = CheckReport::new("euler product is multiplicative");
    let mut inverse = CheckReport::new("plethystic exp inverts log");
    let mut line = CheckReport::new("line-element factors give configuration classes");
    for _ in 0..trials {
        let f = random_local_factor(rng, 8);
        match euler_product_genus0(&f) {
            Ok(ep) => {
                for q in [2u64, 3] {
                    match euler_product_specialize(&f, q) {
                        Ok(oracle) => {
                            let ok = (0..=8u32).all(|k| ep.coeff(&t_mono(k)).specialize_q(q) == oracle.coeff(&[k]));
                            special.record(ok, || format!("q = {q}, factor {:?}", f.univariate_coeffs()));
                        }
                        Err(e) => special.error(e),
                    }
                }
            }
            Err(e) => special.error(e),
        }

        let a = random_local_factor(rng, 6);
        let b = random_unit_series(rng, 6);
        let lhs = a.mul(&b).and_then(|ab| euler_product_genus0(&ab));
        let rhs = euler_product_genus0(&a).and_then(|x| euler_product_genus0(&b).and_then(|y| x.mul(&y)));
        multiplicative.record(lhs.is_ok() && lhs == rhs, || format!("factors {:?} and {:?}", a.univariate_coeffs(), b.univariate_coeffs()));

        let g = random_unit_series(rng, 6);
        match plethystic_log(&g) {
            Ok(pl) => inverse.record(plethystic_exp(&pl) == g, || format!("series {:?}", g.univariate_coeffs())),
            Err(e) => inverse.error(e),
        }

        let j = rng.gen_range(-2..=2);
        let c = LefschetzLaurent::monomial(1, j);
        let mut f = GradedSeries::one(vec!["T".into()], 0, Truncation::total(6));
        f.add_term(t_mono(1), c.clone());
        match euler_product_genus0(&f) {
            Ok(ep) => {
                let ok = (0..=6u32).all(|k| ep.coeff(&t_mono(k)) == config_class_of_shape(&[k]) * c.pow(k));
                line.record(ok, || format!("c = L^{j}"));
            }
            Err(e) => line.error(e),
        }
    }

    let mut closed = CheckReport::new("maps of the line match the closed form");
    if cfg.oracle {
        let p1 = preset("P1").expect("preset");
        for q in [2u64, 3] {
            for d in 1..=3u32 {
                match count_hom_fq(&p1, &DegreeVector(vec![d as i64, d as i64]), q, cfg.budget) {
                    Ok(count) => {
                        let expected = count_rational_maps_closed_form(d, q);
                        closed.record(count == expected, || format!("d = {d}, q = {q}: {count} vs {expected}"));
                    }
                    Err(e) => closed.error(e),
                }
            }
        }
    }
    vec![special, multiplicative, inverse, line, closed]
}

fn cones_suite(rng: &mut ChaCha8Rng, trials: usize) -> Vec<CheckReport> {
    let mut series = CheckReport::new("cone series match lattice-point counts");
    let mut residue = CheckReport::new("residue equals a^rk chi");
    for (name, cf, lambda0) in shipped_cone_examples() {
        let ok = l_series_direction(&cf, &lambda0).map(|l| l.expand(40)) == brute_force_levels(&cf, &lambda0, 40);
        series.record(ok, || name.to_string());
        match residue_check(&cf, &lambda0) {
            Ok(_) => residue.record(true, String::new),
            Err(e) => residue.error(e),
        }
    }
    let mut instance = CheckReport::new("subdivided cone residue is 24");
    let r = residue_check(&subdivided_cone(), &[1, 1]);
    instance.record(
        r.as_ref().is_ok_and(|r| r.a == 6 && r.special_value == 24.into() && r.chi == BigRational::new(2.into(), 3.into())),
        || format!("{r:?}"),
    );

    let mut restrict = CheckReport::new("character restriction to the sublattice");
    for _ in 0..trials {
        let n = rng.gen_range(1..=3);
        let m = rng.gen_range(0..=n);
        let seq = ExactSequence::random(rng, n, m);
        let level = rng.gen_range(0..=12);
        match char_restrict_check(&seq, &ConeFan::orthant(n), &vec![1; n], level) {
            Ok(ok) => restrict.record(ok, || format!("{seq:?} at level {level}")),
            Err(e) => restrict.error(e),
        }
    }

    let mut shifted = CheckReport::new("shifted cone decomposition and bounds");
    for _ in 0..trials {
        let n = rng.gen_range(1..=3);
        let steps = rng.gen_range(0..=3);
        let cf = random_stellar_fan(rng, n, steps);
        let z: Vec<i64> = (0..n).map(|_| rng.gen_range(0..=3)).collect();
        let level = if n == 3 { 9 } else { 15 };
        match shifted_cone_check(&cf, &z, level) {
            Ok(r) => shifted.record(r.passed(), || format!("rays {:?}, z {z:?}: {r:?}", cf.rays())),
            Err(e) => shifted.error(e),
        }
    }

    let mut convolution = CheckReport::new("convolution special value by both routes");
    for inst in shipped_convolution_instances() {
        match convolution_f1(&inst.weights, &inst.seq, &inst.cf, &inst.lambda0, 12) {
            Ok(r) => convolution.record(r.agrees(), || inst.name.to_string()),
            Err(e) => convolution.error(e),
        }
    }
    vec![series, residue, instance, restrict, shifted, convolution]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_trials_is_a_vacuous_pass() {
        let mut cfg = VerifyConfig::new(1);
        cfg.trials = Some(0);
        cfg.oracle = false;
        let r = run("poisson", &cfg).unwrap();
        assert_eq!(r.status, Status::Pass);
        assert_eq!(r.warnings.len(), 2);
        assert!(run("nonsense", &cfg).is_err());
    }

    #[test]
    fn small_runs_pass() {
        let mut cfg = VerifyConfig::new(42);
        cfg.trials = Some(10);
        for s in ["poisson", "euler", "cones"] {
            let r = run(s, &cfg).unwrap();
            assert_eq!(r.status, Status::Pass, "{}", r.to_json());
        }
    }

    #[test]
    fn tiny_budget_skips_oracle_counts() {
        let mut cfg = VerifyConfig::new(3);
        cfg.trials = Some(0);
        cfg.budget = 10;
        let r = run("euler", &cfg).unwrap();
        assert_eq!(r.status, Status::BudgetExceeded);
    }
}
