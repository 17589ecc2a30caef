//! `mtz`: command-line front end for the height zeta engine.

mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use mtz_core::fq::{count_hom_fq, DEFAULT_BUDGET};
use mtz_core::height_zeta::{leading_constant, leading_constant_numeric, zeta_direct_genus0, zeta_fourier_genus0};
use mtz_core::toric::{preset, DegreeVector, Fan};
use mtz_core::verify::{self, Status, VerifyConfig};
use mtz_core::{CurveData, Error};
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde_json::{json, Value};

use output::{ExitStatus, Format, Outcome, Table};

#[derive(Parser, Debug)]
#[command(name = "mtz", version, about = "Motivic height zeta functions of toric varieties over the projective line")]
struct Cli {
    /// Output format; JSON is canonical.
    #[arg(long, value_enum, default_value = "json", global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Validate a fan and print its invariants.
    FanCheck(FanArgs),
    /// Coefficients of the height zeta function in a degree box.
    Zeta(ZetaArgs),
    /// Run the seeded verification suites.
    Verify(VerifyArgs),
    /// The leading constant, exactly when possible, and its numeric values.
    LeadingConstant(LeadingArgs),
    /// Count morphisms of given degree over a finite field by enumeration.
    Count(CountArgs),
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct FanSource {
    /// Fan file (`.json` or `.toml`).
    #[arg(long)]
    fan: Option<PathBuf>,
    /// Shipped fan: P1..P6, P1xP1, Hirzebruch(a) or Fa, Bl1P2.
    #[arg(long)]
    preset: Option<String>,
}

impl FanSource {
    fn load(&self) -> Result<Fan, Error> {
        match (&self.fan, &self.preset) {
            (Some(p), _) => Fan::load(p),
            (_, Some(name)) => preset(name),
            _ => unreachable!("clap requires one source"),
        }
    }
}

#[derive(Args, Debug)]
struct FanArgs {
    #[command(flatten)]
    source: FanSource,
}

#[derive(Args, Debug)]
struct OracleArgs {
    /// Enumeration budget in form evaluations.
    #[arg(long, env = "MTZ_BUDGET", default_value_t = DEFAULT_BUDGET)]
    budget: u128,
    /// Symbolic-only mode: skip every finite-field computation.
    #[arg(long)]
    no_oracle: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Route {
    Direct,
    Fourier,
    Both,
}

#[derive(Args, Debug)]
struct ZetaArgs {
    #[command(flatten)]
    source: FanSource,
    /// Degree caps per ray, comma separated; a single value applies to every ray.
    #[arg(long, value_delimiter = ',', required = true)]
    dmax: Vec<u32>,
    #[arg(long, value_enum, default_value = "direct")]
    route: Route,
    /// Field sizes for point-count comparisons.
    #[arg(long, value_delimiter = ',')]
    q: Vec<u64>,
    #[command(flatten)]
    oracle: OracleArgs,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// poisson, fourier, euler, cones or all.
    #[arg(default_value = "all")]
    suite: String,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Trials per randomized check (suite defaults otherwise).
    #[arg(long)]
    trials: Option<usize>,
    #[command(flatten)]
    oracle: OracleArgs,
}

#[derive(Args, Debug)]
struct LeadingArgs {
    #[command(flatten)]
    source: FanSource,
    /// Retained powers of `L^-1` in the completion.
    #[arg(long, default_value_t = 10)]
    precision: i32,
    #[arg(long, value_delimiter = ',', default_value = "5")]
    q: Vec<u64>,
    #[command(flatten)]
    oracle: OracleArgs,
}

#[derive(Args, Debug)]
struct CountArgs {
    #[command(flatten)]
    source: FanSource,
    /// Degree per ray, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    d: Vec<i64>,
    #[arg(long, value_delimiter = ',', default_value = "2")]
    q: Vec<u64>,
    #[command(flatten)]
    oracle: OracleArgs,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::FanCheck(a) => fan_check(a),
        Command::Zeta(a) => zeta(a),
        Command::Verify(a) => run_verify(a),
        Command::LeadingConstant(a) => leading(a),
        Command::Count(a) => count(a),
    };
    match result {
        Ok(out) => {
            print!("{}", out.render(cli.format));
            ExitCode::from(out.status.code())
        }
        Err(e) => {
            eprintln!("error: {e}");
            let code = if matches!(e, Error::BudgetExceeded { .. }) { 3 } else { 2 };
            ExitCode::from(code)
        }
    }
}

fn fan_check(a: &FanArgs) -> Result<Outcome, Error> {
    let fan = a.source.load()?;
    let q = fan.q_sigma();
    let identity = fan.q_sigma_at_linv();
    let class = fan.class_of_x();
    let status = if identity.is_ok() { Status::Pass } else { Status::Fail };
    let json = json!({
        "fan": fan.name(),
        "rank": fan.rank(),
        "rays": fan.rays(),
        "max_cones": fan.max_cones(),
        "pic_rank": fan.pic_rank(),
        "q_sigma": q.to_string(),
        "q_sigma_min_nonconstant_degree": q.min_nonconstant_degree(),
        "class": class,
        "class_text": class.to_string(),
        "special_value_identity": match &identity {
            Ok(v) => json!({ "holds": true, "value": v.to_string() }),
            Err(e) => json!({ "holds": false, "error": e.to_string() }),
        },
        "projective": "asserted, not checked",
    });
    let rows = vec![
        vec!["fan".into(), fan.name().into()],
        vec!["rank".into(), fan.rank().to_string()],
        vec!["rays".into(), format!("{:?}", fan.rays())],
        vec!["pic_rank".into(), fan.pic_rank().to_string()],
        vec!["q_sigma".into(), q.to_string()],
        vec!["class".into(), class.to_string()],
        vec!["special_value_identity".into(), identity.is_ok().to_string()],
    ];
    let text = rows.iter().map(|r| format!("{}: {}\n", r[0], r[1])).collect();
    Ok(Outcome { status, json, table: Table::new(&["key", "value"], rows), text })
}

fn broadcast(dmax: &[u32], len: usize) -> Vec<u32> {
    if dmax.len() == 1 {
        vec![dmax[0]; len]
    } else {
        dmax.to_vec()
    }
}

fn zeta(a: &ZetaArgs) -> Result<Outcome, Error> {
    let fan = a.source.load()?;
    let dmax = broadcast(&a.dmax, fan.num_rays());
    let (main, other) = match a.route {
        Route::Direct => (zeta_direct_genus0(&fan, &dmax)?, None),
        Route::Fourier => (zeta_fourier_genus0(&fan, &dmax)?, None),
        Route::Both => (zeta_direct_genus0(&fan, &dmax)?, Some(zeta_fourier_genus0(&fan, &dmax)?)),
    };
    let mut status = Status::Pass;
    let mut degrees: Vec<Vec<u32>> = main.coeffs.keys().cloned().collect();
    if let Some(o) = &other {
        degrees.extend(o.coeffs.keys().filter(|d| !main.coeffs.contains_key(*d)).cloned());
        degrees.sort();
    }
    let mut coeffs = Vec::new();
    let mut rows = Vec::new();
    let mut text = String::new();
    for d in &degrees {
        let c = main.coeff(d);
        let mut entry = json!({ "d": d, "coeff": c, "text": c.to_string() });
        let mut row: Vec<String> = d.iter().map(|x| x.to_string()).collect();
        row.push(c.to_string());
        text.push_str(&format!("{d:?}: {c}"));
        if let Some(o) = &other {
            let equal = o.coeff(d) == c;
            if !equal {
                status = Status::Fail;
            }
            entry["routes_equal"] = json!(equal);
            row.push(equal.to_string());
            text.push_str(if equal { "  (routes agree)" } else { "  (routes DIFFER)" });
        }
        text.push('\n');
        coeffs.push(entry);
        rows.push(row);
    }
    let mut oracle = Vec::new();
    if !a.oracle.no_oracle {
        for q in &a.q {
            for d in &degrees {
                let dv = DegreeVector(d.iter().map(|&x| x as i64).collect());
                match count_hom_fq(&fan, &dv, *q, a.oracle.budget) {
                    Ok(n) => {
                        let expected = main.coeff(d).specialize_q(*q);
                        let equal = expected == BigRational::from_integer(n.clone());
                        if !equal {
                            status = Status::Fail;
                        }
                        oracle.push(json!({ "d": d, "q": q, "count": n.to_string(), "equal": equal }));
                        text.push_str(&format!("q = {q}, {d:?}: count {n}, {}\n", if equal { "agrees" } else { "DIFFERS" }));
                    }
                    Err(Error::BudgetExceeded { needed, budget }) => {
                        if status == Status::Pass {
                            status = Status::BudgetExceeded;
                        }
                        oracle.push(json!({ "d": d, "q": q, "skipped": format!("needs {needed}, budget {budget}") }));
                        text.push_str(&format!("q = {q}, {d:?}: skipped (budget)\n"));
                    }
                    Err(e) => return Err(e),
                }
            }
        }
    }
    let mut json = json!({
        "fan": fan.name(),
        "Dmax": dmax,
        "route": format!("{:?}", a.route).to_lowercase(),
        "coeffs": coeffs,
    });
    if other.is_some() {
        json["all_routes_equal"] = json!(coeffs_all_equal(&json));
    }
    if !oracle.is_empty() {
        json["oracle"] = Value::Array(oracle);
    }
    let mut header: Vec<String> = (0..fan.num_rays()).map(|i| format!("d{i}")).collect();
    header.push("coeff".into());
    if other.is_some() {
        header.push("routes_equal".into());
    }
    Ok(Outcome { status, json, table: Table { header, rows }, text })
}

fn coeffs_all_equal(json: &Value) -> bool {
    json["coeffs"].as_array().is_some_and(|cs| cs.iter().all(|c| c["routes_equal"] == json!(true)))
}

fn run_verify(a: &VerifyArgs) -> Result<Outcome, Error> {
    let cfg = VerifyConfig { seed: a.seed, trials: a.trials, budget: a.oracle.budget, oracle: !a.oracle.no_oracle };
    let report = verify::run(&a.suite, &cfg)?;
    let mut rows = Vec::new();
    let mut text = String::new();
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    for s in &report.suites {
        for c in &s.checks {
            rows.push(vec![
                s.name.clone(),
                c.name.clone(),
                c.trials.to_string(),
                c.failures.to_string(),
                c.skipped.to_string(),
            ]);
            let verdict = if c.failures > 0 { "FAIL" } else if c.skipped > 0 { "SKIP" } else { "ok" };
            text.push_str(&format!("{:<8} {:<55} {:>5} trials  {verdict}\n", s.name, c.name, c.trials));
            if let Some(f) = &c.first_failure {
                text.push_str(&format!("         first failure: {f}\n"));
            }
        }
    }
    text.push_str(&format!("status: {:?}\n", report.status));
    let json: Value = serde_json::to_value(&report).expect("report serializes");
    Ok(Outcome {
        status: report.status,
        json,
        table: Table::new(&["suite", "check", "trials", "failures", "skipped"], rows),
        text,
    })
}

fn leading(a: &LeadingArgs) -> Result<Outcome, Error> {
    let fan = a.source.load()?;
    let gamma = leading_constant(&fan, &CurveData::genus0(), a.precision)?;
    let mut specs = Vec::new();
    let mut rows = Vec::new();
    let mut text = String::new();
    match &gamma.exact {
        Some(e) => text.push_str(&format!("exact: {e}\n")),
        None => text.push_str("exact: not available\n"),
    }
    text.push_str(&format!("truncated: {}\n", gamma.truncated));
    for &q in &a.q {
        let value = gamma.specialize_f64(q);
        let mut entry = json!({ "q": q, "value": value });
        let mut row = vec![q.to_string(), value.to_string()];
        if a.oracle.no_oracle {
            text.push_str(&format!("q = {q}: {value}\n"));
            row.extend(["".into(), "".into()]);
        } else {
            let numeric = leading_constant_numeric(&fan, q, 40);
            let rel = ((value - numeric) / numeric).abs();
            entry["closed_point_product"] = json!(numeric);
            entry["relative_error"] = json!(rel);
            text.push_str(&format!("q = {q}: {value}  closed-point product {numeric}  relative error {rel:.2e}\n"));
            row.extend([numeric.to_string(), rel.to_string()]);
        }
        specs.push(entry);
        rows.push(row);
    }
    let truncated = gamma.truncated.value();
    let json = json!({
        "fan": fan.name(),
        "precision": a.precision,
        "exact": gamma.exact,
        "exact_text": gamma.exact.as_ref().map(|e| e.to_string()),
        "truncated": truncated,
        "truncated_text": gamma.truncated.to_string(),
        "specializations": specs,
    });
    Ok(Outcome {
        status: Status::Pass,
        json,
        table: Table::new(&["q", "value", "closed_point_product", "relative_error"], rows),
        text,
    })
}

fn count(a: &CountArgs) -> Result<Outcome, Error> {
    if a.oracle.no_oracle {
        return Err(Error::Parse("count needs the finite-field oracle; drop --no-oracle".into()));
    }
    let fan = a.source.load()?;
    if a.d.len() != fan.num_rays() {
        return Err(Error::DimensionMismatch { expected: fan.num_rays(), got: a.d.len() });
    }
    let d = DegreeVector(a.d.clone());
    let mut results = Vec::new();
    let mut rows = Vec::new();
    let mut text = String::new();
    for &q in &a.q {
        let n = count_hom_fq(&fan, &d, q, a.oracle.budget)?;
        results.push(json!({ "fan": fan.name(), "d": a.d, "q": q, "count": n.to_u128().map_or(json!(n.to_string()), |v| json!(v)) }));
        let mut row = vec![fan.name().to_string()];
        row.extend(a.d.iter().map(|x| x.to_string()));
        row.extend([q.to_string(), n.to_string()]);
        rows.push(row);
        text.push_str(&format!("{} d = {:?}, q = {q}: {n}\n", fan.name(), a.d));
    }
    let json = if results.len() == 1 { results.pop().expect("one result") } else { Value::Array(results) };
    let mut header = vec!["fan".to_string()];
    header.extend((0..a.d.len()).map(|i| format!("d{i}")));
    header.extend(["q".into(), "count".into()]);
    Ok(Outcome { status: Status::Pass, json, table: Table { header, rows }, text })
}
