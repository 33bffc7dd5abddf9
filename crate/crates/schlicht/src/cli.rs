//! Batch command-line surface: function-spec ingestion, criterion checking,
//! threshold curves, ODE inspection and falsification sweeps, with CSV/JSON
//! output.
//!
//! Exit codes: 0 success/consistent, 1 counterexample or failed check,
//! 2 usage or spec error. Reports are deterministic byte-for-byte for a given
//! (spec, config, seed); all numbers are printed with 12 significant digits.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::criteria::{
    delta_threshold_detailed, evaluate_criterion_mode, CriterionKind, CriterionParams,
    CriterionResult, PGammaMode, ThresholdOutcome,
};
use crate::error::Error;
use crate::fixtures;
use crate::ode::{gronwall_bounds, reconstruct_f, solve_uv_series, BoundCheck};
use crate::schwarzian::{schwarzian_series, sup_schwarzian};
use crate::series::PowerSeries;
use crate::verifier::{random_budgeted_function, verify_conclusion, GridReport, GridSpec};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum PGammaOpt {
    Literal,
    Repaired,
    Both,
}

#[derive(Parser, Debug)]
#[command(
    name = "schlicht",
    version,
    about = "Schwarzian-derivative inclusion criteria on the unit disk: check, threshold, ode, sweep"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Measure (eta, delta) of a function, evaluate criteria and run the
    /// matching conclusion verifiers
    Check(CheckArgs),
    /// Emit the delta*(eta) threshold curve of a criterion
    Threshold(ThresholdArgs),
    /// Solve y'' + A y = 0 for a function and report Wronskian residual,
    /// Gronwall bounds and the reconstruction residual
    Ode(OdeArgs),
    /// Falsification sweep of seeded random functions against a criterion
    Sweep(SweepArgs),
    /// Print the built-in fixtures and their known constants
    Example(ExampleArgs),
}

#[derive(Args, Debug)]
struct CommonOpts {
    /// Truncation order of the working series
    #[arg(long, default_value_t = 64)]
    order: usize,
    /// Radius of the verification grid (conclusions are sampled inside it)
    #[arg(long, default_value_t = 0.99)]
    radius: f64,
    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// How to treat the P(gamma) criterion's classical third term
    #[arg(long = "p-gamma-mode", value_enum, default_value_t = PGammaOpt::Both)]
    p_gamma_mode: PGammaOpt,
    /// Write the report to this file instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ParamOpts {
    /// Theorem parameter alpha
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    alpha: f64,
    /// Theorem parameter beta
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    beta: f64,
    /// Theorem parameter gamma (for P(gamma))
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    gamma: f64,
}

#[derive(Args, Debug)]
struct CheckArgs {
    /// Function spec: inline JSON or a path to a JSON file
    #[arg(long)]
    spec: String,
    /// Criterion kinds (comma separated), or "all"
    #[arg(long, value_delimiter = ',', required = true)]
    kind: Vec<String>,
    #[command(flatten)]
    params: ParamOpts,
    #[command(flatten)]
    common: CommonOpts,
}

#[derive(Args, Debug)]
struct ThresholdArgs {
    /// Criterion kind
    #[arg(long)]
    kind: String,
    /// Eta grid as start:stop:step, or a single value
    #[arg(long = "eta-grid")]
    eta_grid: String,
    #[command(flatten)]
    params: ParamOpts,
    #[command(flatten)]
    common: CommonOpts,
}

#[derive(Args, Debug)]
struct OdeArgs {
    /// Function spec: inline JSON or a path to a JSON file
    #[arg(long)]
    spec: String,
    #[command(flatten)]
    common: CommonOpts,
}

#[derive(Args, Debug)]
struct SweepArgs {
    /// Criterion kind
    #[arg(long)]
    kind: String,
    /// Number of seeds (0..seeds)
    #[arg(long, default_value_t = 100)]
    seeds: u64,
    /// Schwarzian budget sup|S| for the generator, or "auto" for
    /// 2 * 0.9 * delta*(eta-max)
    #[arg(long, default_value = "auto")]
    budget: String,
    /// Cap on |a_2| of generated functions
    #[arg(long = "eta-max", default_value_t = 0.05)]
    eta_max: f64,
    /// Number of random coefficients in the generator
    #[arg(long = "n-coeffs", default_value_t = 8)]
    n_coeffs: usize,
    #[command(flatten)]
    params: ParamOpts,
    #[command(flatten)]
    common: CommonOpts,
}

#[derive(Args, Debug)]
struct ExampleArgs {
    #[command(flatten)]
    common: CommonOpts,
}

/// A rendered report plus its destination and exit code.
struct Output {
    text: String,
    out: Option<PathBuf>,
    code: i32,
}

#[derive(Debug)]
struct Failure {
    message: String,
    code: i32,
}

fn usage(message: impl Into<String>) -> Failure {
    Failure { message: message.into(), code: 2 }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure { message: e.to_string(), code: 1 }
    }
}

// ---------------------------------------------------------------------------
// function specs
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Deserialize, Serialize)]
struct RandomSpecJson {
    seed: u64,
    n_coeffs: usize,
    two_delta: f64,
    eta_max: f64,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(untagged)]
enum SpecJson {
    Builtin {
        builtin: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        c: Option<[f64; 2]>,
    },
    Coefficients { coefficients: Vec<[f64; 2]> },
    Random { random: RandomSpecJson },
}

/// Validated description of an analytic function.
#[derive(Clone, Debug, PartialEq)]
pub enum FunctionSpec {
    Nehari,
    Moebius(Complex64),
    Koebe,
    Coefficients(Vec<Complex64>),
    Random { seed: u64, n_coeffs: usize, two_delta: f64, eta_max: f64 },
}

impl FunctionSpec {
    /// Parse and validate the JSON form. Coefficient lists must be normalized
    /// (c0 = 0, c1 = 1).
    pub fn from_json_str(text: &str) -> Result<Self, String> {
        let parsed: SpecJson =
            serde_json::from_str(text).map_err(|e| format!("malformed function spec: {e}"))?;
        match parsed {
            SpecJson::Builtin { builtin, c } => match builtin.as_str() {
                "nehari" => Ok(FunctionSpec::Nehari),
                "koebe" => Ok(FunctionSpec::Koebe),
                "moebius" => {
                    let c = c.ok_or("builtin moebius requires \"c\": [re, im]")?;
                    let c = Complex64::new(c[0], c[1]);
                    if !(c.norm() <= 1.0) {
                        return Err(format!("moebius parameter |c| = {} must be <= 1", c.norm()));
                    }
                    Ok(FunctionSpec::Moebius(c))
                }
                other => Err(format!("unknown builtin {other:?} (expected nehari, moebius, koebe)")),
            },
            SpecJson::Coefficients { coefficients } => {
                if coefficients.len() < 2 {
                    return Err("coefficient specs need at least c0 and c1".to_string());
                }
                let coeffs: Vec<Complex64> =
                    coefficients.iter().map(|&[re, im]| Complex64::new(re, im)).collect();
                if coeffs.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
                    return Err("coefficients must be finite".to_string());
                }
                if coeffs[0].norm() > 1e-12 || (coeffs[1] - Complex64::new(1.0, 0.0)).norm() > 1e-12 {
                    return Err(
                        "coefficient specs must be normalized: c0 = 0 and c1 = 1".to_string()
                    );
                }
                Ok(FunctionSpec::Coefficients(coeffs))
            }
            SpecJson::Random { random } => {
                if random.n_coeffs < 2 {
                    return Err("random spec needs n_coeffs >= 2".to_string());
                }
                if !(random.two_delta >= 0.0) || !(random.eta_max >= 0.0) {
                    return Err("random spec needs two_delta >= 0 and eta_max >= 0".to_string());
                }
                Ok(FunctionSpec::Random {
                    seed: random.seed,
                    n_coeffs: random.n_coeffs,
                    two_delta: random.two_delta,
                    eta_max: random.eta_max,
                })
            }
        }
    }

    /// Build the series at the requested order.
    pub fn build(&self, order: usize) -> crate::error::Result<PowerSeries> {
        match self {
            FunctionSpec::Nehari => Ok(fixtures::nehari(order)),
            FunctionSpec::Moebius(c) => Ok(fixtures::moebius(*c, order)),
            FunctionSpec::Koebe => Ok(fixtures::koebe(order)),
            FunctionSpec::Coefficients(coeffs) => {
                let mut v = coeffs.clone();
                if v.len() < order + 1 {
                    v.resize(order + 1, Complex64::new(0.0, 0.0));
                }
                Ok(PowerSeries::new(v))
            }
            FunctionSpec::Random { seed, n_coeffs, two_delta, eta_max } => {
                random_budgeted_function(*seed, *n_coeffs, *two_delta, *eta_max)
            }
        }
    }

    fn echo(&self) -> Value {
        match self {
            FunctionSpec::Nehari => json!({"builtin": "nehari"}),
            FunctionSpec::Moebius(c) => json!({"builtin": "moebius", "c": [c.re, c.im]}),
            FunctionSpec::Koebe => json!({"builtin": "koebe"}),
            FunctionSpec::Coefficients(coeffs) => {
                let arr: Vec<Value> = coeffs.iter().map(|z| json!([z.re, z.im])).collect();
                json!({ "coefficients": arr })
            }
            FunctionSpec::Random { seed, n_coeffs, two_delta, eta_max } => json!({
                "random": {
                    "seed": seed, "n_coeffs": n_coeffs,
                    "two_delta": two_delta, "eta_max": eta_max,
                }
            }),
        }
    }
}

fn load_spec(arg: &str) -> Result<FunctionSpec, Failure> {
    let text = if arg.trim_start().starts_with('{') {
        arg.to_string()
    } else {
        std::fs::read_to_string(arg)
            .map_err(|e| usage(format!("cannot read spec file {arg:?}: {e}")))?
    };
    FunctionSpec::from_json_str(&text).map_err(usage)
}

// ---------------------------------------------------------------------------
// config
// ---------------------------------------------------------------------------

struct RunConfig {
    order: usize,
    radius_cap: f64,
    sup_grid_n: usize,
    grid: GridSpec,
    univalence_points: usize,
    threshold_tol: f64,
    format: Format,
    p_gamma_mode: PGammaOpt,
}

impl RunConfig {
    fn from_common(common: &CommonOpts) -> Result<Self, Failure> {
        if common.order < 8 || common.order > 4096 {
            return Err(usage(format!("--order {} outside [8, 4096]", common.order)));
        }
        let grid = GridSpec::new(common.radius, 24, 96)
            .map_err(|e| usage(format!("--radius invalid: {e}")))?;
        Ok(RunConfig {
            order: common.order,
            radius_cap: 0.999,
            sup_grid_n: 1024,
            grid,
            univalence_points: 1024,
            threshold_tol: 1e-10,
            format: common.format,
            p_gamma_mode: common.p_gamma_mode,
        })
    }

    fn echo(&self) -> Value {
        json!({
            "order": self.order,
            "radius_cap": self.radius_cap,
            "sup_grid_n": self.sup_grid_n,
            "grid_radius": self.grid.radius,
            "radial_steps": self.grid.radial_steps,
            "angular_steps": self.grid.angular_steps,
            "univalence_points": self.univalence_points,
            "threshold_tol": self.threshold_tol,
            "p_gamma_mode": match self.p_gamma_mode {
                PGammaOpt::Literal => "literal",
                PGammaOpt::Repaired => "repaired",
                PGammaOpt::Both => "both",
            },
        })
    }

    fn echo_csv(&self) -> String {
        format!(
            "order={} radius_cap={} sup_grid_n={} grid_radius={} radial_steps={} angular_steps={} \
             univalence_points={} p_gamma_mode={}",
            self.order,
            self.radius_cap,
            self.sup_grid_n,
            self.grid.radius,
            self.grid.radial_steps,
            self.grid.angular_steps,
            self.univalence_points,
            match self.p_gamma_mode {
                PGammaOpt::Literal => "literal",
                PGammaOpt::Repaired => "repaired",
                PGammaOpt::Both => "both",
            }
        )
    }
}

// ---------------------------------------------------------------------------
// rendering helpers
// ---------------------------------------------------------------------------

/// Round to 12 significant decimal digits so printed reports diff
/// meaningfully; the value then prints with at most 12 digits in both JSON
/// and CSV. Negative zero canonicalizes to zero.
fn sig(x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    if !x.is_finite() {
        return x;
    }
    format!("{x:.11e}").parse().expect("scientific round trip")
}

fn fnum(x: f64) -> String {
    format!("{}", sig(x))
}

fn jnum(x: f64) -> Value {
    json!(sig(x))
}

fn jnum_opt(x: Option<f64>) -> Value {
    match x {
        Some(v) => jnum(v),
        None => Value::Null,
    }
}

fn jcomplex(z: Complex64) -> Value {
    json!([sig(z.re), sig(z.im)])
}

fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn grid_report_json(r: &GridReport) -> Value {
    let mut v = json!({
        "quantity": r.quantity,
        "extremum": jnum(r.extremum),
        "threshold": jnum(r.threshold),
        "passed": r.passed,
        "location": jcomplex(r.arg_extremum),
    });
    if let Some(p) = r.partner {
        v["partner"] = jcomplex(p);
    }
    v
}

fn criterion_json(
    result: &CriterionResult,
    mode: Option<&str>,
    advisory: bool,
    checks: &[GridReport],
    consistent: bool,
) -> Value {
    let mut v = json!({
        "kind": result.kind.name(),
        "applicable": result.applicable,
        "lhs": jnum_opt(result.lhs),
        "rhs": jnum(result.rhs),
        "satisfied": result.satisfied,
        "conclusion": result.conclusion,
        "diagnostics": result.diagnostics,
        "checks": checks.iter().map(grid_report_json).collect::<Vec<_>>(),
        "consistent": consistent,
    });
    if let Some(m) = mode {
        v["mode"] = json!(m);
        v["advisory"] = json!(advisory);
    }
    if let Some(ord) = &result.convexity_order {
        v["convexity_order"] = json!({
            "order": jnum(ord.order),
            "boundary_unit": ord.boundary_unit,
        });
    }
    v
}

fn bound_json(b: &BoundCheck) -> Value {
    json!({
        "lhs_max": jnum(b.lhs_max),
        "rhs": jnum(b.rhs),
        "holds": b.holds,
        "boundary_equality": b.boundary_equality,
    })
}

// ---------------------------------------------------------------------------
// subcommands
// ---------------------------------------------------------------------------

fn parse_kinds(raw: &[String]) -> Result<Vec<CriterionKind>, Failure> {
    let mut kinds = Vec::new();
    for entry in raw {
        if entry == "all" {
            kinds.extend(CriterionKind::ALL);
            continue;
        }
        match CriterionKind::from_name(entry) {
            Some(k) => kinds.push(k),
            None => {
                return Err(usage(format!(
                    "unknown criterion kind {entry:?}; expected one of {} or \"all\"",
                    CriterionKind::ALL.map(|k| k.name()).join(", ")
                )))
            }
        }
    }
    Ok(kinds)
}

fn parse_one_kind(raw: &str) -> Result<CriterionKind, Failure> {
    CriterionKind::from_name(raw).ok_or_else(|| {
        usage(format!(
            "unknown criterion kind {raw:?}; expected one of {}",
            CriterionKind::ALL.map(|k| k.name()).join(", ")
        ))
    })
}

/// (mode, label, advisory) rows to evaluate for a kind under the configured
/// P(gamma) handling; non-advisory rows decide the exit code.
fn modes_for(kind: CriterionKind, opt: PGammaOpt) -> Vec<(PGammaMode, Option<&'static str>, bool)> {
    if kind != CriterionKind::PGamma {
        return vec![(PGammaMode::Repaired, None, false)];
    }
    match opt {
        PGammaOpt::Literal => vec![(PGammaMode::Literal, Some("literal"), false)],
        PGammaOpt::Repaired => vec![(PGammaMode::Repaired, Some("repaired"), false)],
        PGammaOpt::Both => vec![
            (PGammaMode::Repaired, Some("repaired"), false),
            (PGammaMode::Literal, Some("literal"), true),
        ],
    }
}

fn cmd_check(args: &CheckArgs) -> Result<Output, Failure> {
    let config = RunConfig::from_common(&args.common)?;
    let kinds = parse_kinds(&args.kind)?;
    let spec = load_spec(&args.spec)?;
    let f = spec.build(config.order)?;
    if !f.is_normalized(1e-12) {
        return Err(usage("function spec must be normalized (c0 = 0, c1 = 1)"));
    }

    let est = sup_schwarzian(&f, config.radius_cap, config.sup_grid_n)?;
    let eta = f.coeff(2).norm();
    let delta = est.two_delta / 2.0;

    let mut rows = Vec::new();
    let mut all_ok = true;
    for kind in &kinds {
        for (mode, label, advisory) in modes_for(*kind, config.p_gamma_mode) {
            let params = CriterionParams {
                eta,
                delta,
                alpha: args.params.alpha,
                beta: args.params.beta,
                gamma: args.params.gamma,
            };
            let result = evaluate_criterion_mode(*kind, &params, mode);
            let checks = if result.satisfied {
                verify_conclusion(&f, *kind, &params, &config.grid, config.univalence_points)?
            } else {
                Vec::new()
            };
            let verifier_passed = checks.iter().all(|c| c.passed);
            let consistent = !result.satisfied || verifier_passed;
            if !advisory {
                all_ok = all_ok && result.applicable && consistent;
            }
            rows.push((result, label, advisory, checks, consistent));
        }
    }
    let code = if all_ok { 0 } else { 1 };

    let text = match config.format {
        Format::Json => {
            let report = json!({
                "tool": "schlicht",
                "version": VERSION,
                "command": "check",
                "config": config.echo(),
                "spec": spec.echo(),
                "eta": jnum(eta),
                "two_delta": jnum(est.two_delta),
                "delta": jnum(delta),
                "sup_argmax": jcomplex(est.argmax),
                "truncation_warning": est.truncation_warning,
                "criteria": rows
                    .iter()
                    .map(|(r, label, advisory, checks, consistent)| {
                        criterion_json(r, *label, *advisory, checks, *consistent)
                    })
                    .collect::<Vec<_>>(),
                "exit_code": code,
            });
            serde_json::to_string_pretty(&report).expect("report serialization") + "\n"
        }
        Format::Csv => {
            let mut s = String::new();
            s.push_str(&format!("# schlicht {VERSION} check\n"));
            s.push_str(&format!("# config {}\n", config.echo_csv()));
            s.push_str(&format!("# spec {}\n", spec.echo()));
            s.push_str(&format!(
                "# eta {} two_delta {} truncation_warning {}\n",
                fnum(eta),
                fnum(est.two_delta),
                est.truncation_warning
            ));
            s.push_str(
                "kind,mode,applicable,lhs,rhs,satisfied,verifier_passed,consistent,conclusion,diagnostics\n",
            );
            for (r, label, _advisory, checks, consistent) in &rows {
                let verifier_passed = checks.iter().all(|c| c.passed);
                s.push_str(&format!(
                    "{},{},{},{},{},{},{},{},{},{}\n",
                    r.kind.name(),
                    label.unwrap_or("-"),
                    r.applicable,
                    r.lhs.map(fnum).unwrap_or_default(),
                    fnum(r.rhs),
                    r.satisfied,
                    verifier_passed,
                    consistent,
                    csv_field(&r.conclusion),
                    csv_field(&r.diagnostics.join("; ")),
                ));
            }
            s
        }
    };
    Ok(Output { text, out: args.common.out.clone(), code })
}

fn parse_eta_grid(raw: &str) -> Result<Vec<f64>, Failure> {
    let parts: Vec<&str> = raw.split(':').collect();
    let parse = |s: &str| -> Result<f64, Failure> {
        s.parse::<f64>().map_err(|_| usage(format!("bad number {s:?} in --eta-grid")))
    };
    match parts.as_slice() {
        [single] => {
            let v = parse(single)?;
            if !(v >= 0.0) {
                return Err(usage("eta must be >= 0"));
            }
            Ok(vec![v])
        }
        [start, stop, step] => {
            let (start, stop, step) = (parse(start)?, parse(stop)?, parse(step)?);
            if !(start >= 0.0 && stop >= start && step > 0.0) {
                return Err(usage("--eta-grid needs 0 <= start <= stop and step > 0"));
            }
            let n = ((stop - start) / step + 1e-9).floor() as usize + 1;
            Ok((0..n).map(|i| start + i as f64 * step).collect())
        }
        _ => Err(usage("--eta-grid must be start:stop:step or a single value")),
    }
}

fn cmd_threshold(args: &ThresholdArgs) -> Result<Output, Failure> {
    let config = RunConfig::from_common(&args.common)?;
    let kind = parse_one_kind(&args.kind)?;
    if kind == CriterionKind::PGamma && config.p_gamma_mode == PGammaOpt::Literal {
        return Err(usage(
            "threshold solving for p_gamma is only available in repaired mode \
             (the literal third term is negative for every delta >= 0)",
        ));
    }
    let etas = parse_eta_grid(&args.eta_grid)?;

    let mut rows = Vec::new();
    for &eta in &etas {
        let p = CriterionParams {
            eta,
            delta: 0.0,
            alpha: args.params.alpha,
            beta: args.params.beta,
            gamma: args.params.gamma,
        };
        match delta_threshold_detailed(kind, &p, config.threshold_tol) {
            ThresholdOutcome::Infeasible { diagnostics } => rows.push((eta, None, false, diagnostics)),
            ThresholdOutcome::Threshold { delta_star, saturated } => {
                rows.push((eta, Some(delta_star), saturated, Vec::new()))
            }
        }
    }

    let text = match config.format {
        Format::Json => {
            let report = json!({
                "tool": "schlicht",
                "version": VERSION,
                "command": "threshold",
                "config": config.echo(),
                "kind": kind.name(),
                "alpha": jnum(args.params.alpha),
                "beta": jnum(args.params.beta),
                "gamma": jnum(args.params.gamma),
                "rows": rows.iter().map(|(eta, star, saturated, diags)| json!({
                    "eta": jnum(*eta),
                    "delta_star": jnum_opt(*star),
                    "applicable": star.is_some(),
                    "saturated": saturated,
                    "diagnostics": diags,
                })).collect::<Vec<_>>(),
            });
            serde_json::to_string_pretty(&report).expect("report serialization") + "\n"
        }
        Format::Csv => {
            let mut s = String::new();
            s.push_str(&format!("# schlicht {VERSION} threshold kind={}\n", kind.name()));
            s.push_str(&format!("# config {}\n", config.echo_csv()));
            s.push_str(&format!(
                "# alpha {} beta {} gamma {}\n",
                fnum(args.params.alpha),
                fnum(args.params.beta),
                fnum(args.params.gamma)
            ));
            s.push_str("eta,delta_star,applicable,saturated,diagnostics\n");
            for (eta, star, saturated, diags) in &rows {
                s.push_str(&format!(
                    "{},{},{},{},{}\n",
                    fnum(*eta),
                    star.map(fnum).unwrap_or_default(),
                    star.is_some(),
                    saturated,
                    csv_field(&diags.join("; ")),
                ));
            }
            s
        }
    };
    Ok(Output { text, out: args.common.out.clone(), code: 0 })
}

fn cmd_ode(args: &OdeArgs) -> Result<Output, Failure> {
    let config = RunConfig::from_common(&args.common)?;
    let spec = load_spec(&args.spec)?;
    let f = spec.build(config.order)?;
    if !f.is_normalized(1e-12) {
        return Err(usage("function spec must be normalized (c0 = 0, c1 = 1)"));
    }

    let est = sup_schwarzian(&f, config.radius_cap, config.sup_grid_n)?;
    let eta = f.coeff(2).norm();
    let delta = est.two_delta / 2.0;

    let a = schwarzian_series(&f)?.scale(Complex64::new(0.5, 0.0));
    let sol = solve_uv_series(&a, a.order() + 2)?.with_c(-f.coeff(2));
    let recon = reconstruct_f(&sol)?;
    let n = recon.order().min(f.order());
    let reconstruction_residual = (0..=n)
        .map(|k| (recon.coeff(k) - f.coeff(k)).norm())
        .fold(0.0, f64::max);
    let gron = gronwall_bounds(&sol, delta, eta, &config.grid);

    let coeff_echo = |s: &PowerSeries| -> Vec<Value> {
        s.coeffs().iter().take(8).map(|&z| jcomplex(z)).collect()
    };

    let text = match config.format {
        Format::Json => {
            let report = json!({
                "tool": "schlicht",
                "version": VERSION,
                "command": "ode",
                "config": config.echo(),
                "spec": spec.echo(),
                "eta": jnum(eta),
                "two_delta": jnum(est.two_delta),
                "delta": jnum(delta),
                "c": jcomplex(sol.c),
                "wronskian_residual": jnum(sol.wronskian_residual),
                "u_coeffs_head": coeff_echo(&sol.u),
                "v_coeffs_head": coeff_echo(&sol.v),
                "reconstruction_residual": jnum(reconstruction_residual),
                "gronwall": {
                    "bound_u": bound_json(&gron.bound_u),
                    "bound_u_over_z": bound_json(&gron.bound_u_over_z),
                    "bound_cu_plus_v": bound_json(&gron.bound_cu_plus_v),
                    "bound_cu_plus_v_minus_1": bound_json(&gron.bound_cu_plus_v_minus_1),
                    "all_hold": gron.all_hold,
                },
            });
            serde_json::to_string_pretty(&report).expect("report serialization") + "\n"
        }
        Format::Csv => {
            let mut s = String::new();
            s.push_str(&format!("# schlicht {VERSION} ode\n"));
            s.push_str(&format!("# config {}\n", config.echo_csv()));
            s.push_str(&format!("# spec {}\n", spec.echo()));
            s.push_str("quantity,value\n");
            s.push_str(&format!("eta,{}\n", fnum(eta)));
            s.push_str(&format!("two_delta,{}\n", fnum(est.two_delta)));
            s.push_str(&format!("c_re,{}\n", fnum(sol.c.re)));
            s.push_str(&format!("c_im,{}\n", fnum(sol.c.im)));
            s.push_str(&format!("wronskian_residual,{}\n", fnum(sol.wronskian_residual)));
            s.push_str(&format!("reconstruction_residual,{}\n", fnum(reconstruction_residual)));
            for (name, b) in [
                ("bound_u", &gron.bound_u),
                ("bound_u_over_z", &gron.bound_u_over_z),
                ("bound_cu_plus_v", &gron.bound_cu_plus_v),
                ("bound_cu_plus_v_minus_1", &gron.bound_cu_plus_v_minus_1),
            ] {
                s.push_str(&format!("{name}_lhs_max,{}\n", fnum(b.lhs_max)));
                s.push_str(&format!("{name}_rhs,{}\n", fnum(b.rhs)));
                s.push_str(&format!("{name}_holds,{}\n", b.holds));
            }
            s.push_str(&format!("gronwall_all_hold,{}\n", gron.all_hold));
            s
        }
    };
    Ok(Output { text, out: args.common.out.clone(), code: 0 })
}

fn cmd_sweep(args: &SweepArgs) -> Result<Output, Failure> {
    let config = RunConfig::from_common(&args.common)?;
    let kind = parse_one_kind(&args.kind)?;
    if args.seeds > 10_000 {
        return Err(usage(format!("--seeds {} above the 10000 cap", args.seeds)));
    }
    if !(args.eta_max >= 0.0) {
        return Err(usage("--eta-max must be >= 0"));
    }

    let params_at = |eta: f64, delta: f64| CriterionParams {
        eta,
        delta,
        alpha: args.params.alpha,
        beta: args.params.beta,
        gamma: args.params.gamma,
    };

    let budget = if args.budget == "auto" {
        let p = params_at(args.eta_max, 0.0);
        match delta_threshold_detailed(kind, &p, config.threshold_tol) {
            ThresholdOutcome::Threshold { delta_star, .. } => 2.0 * 0.9 * delta_star,
            ThresholdOutcome::Infeasible { diagnostics } => {
                return Err(usage(format!(
                    "--budget auto: {} is infeasible at eta-max {} ({}); pass an explicit budget",
                    kind.name(),
                    args.eta_max,
                    diagnostics.join("; ")
                )))
            }
        }
    } else {
        let v: f64 = args
            .budget
            .parse()
            .map_err(|_| usage(format!("--budget must be \"auto\" or a number, got {:?}", args.budget)))?;
        if !(v >= 0.0) {
            return Err(usage("--budget must be >= 0"));
        }
        v
    };

    let mode = match (kind, config.p_gamma_mode) {
        (CriterionKind::PGamma, PGammaOpt::Literal) => PGammaMode::Literal,
        _ => PGammaMode::Repaired,
    };

    let mut pass_pass = 0u64;
    let mut pass_fail = 0u64;
    let mut criterion_fail = 0u64;
    let mut inapplicable = 0u64;
    let mut counterexamples = Vec::new();

    for seed in 0..args.seeds {
        let f = random_budgeted_function(seed, args.n_coeffs, budget, args.eta_max)?;
        let est = sup_schwarzian(&f, config.radius_cap, config.sup_grid_n)?;
        let eta = f.coeff(2).norm();
        let delta = est.two_delta / 2.0;
        let params = params_at(eta, delta);
        let result = evaluate_criterion_mode(kind, &params, mode);
        if !result.applicable {
            inapplicable += 1;
            continue;
        }
        if !result.satisfied {
            criterion_fail += 1;
            continue;
        }
        let checks = verify_conclusion(&f, kind, &params, &config.grid, config.univalence_points)?;
        if checks.iter().all(|c| c.passed) {
            pass_pass += 1;
        } else {
            pass_fail += 1;
            let coeffs: Vec<Value> = f.coeffs().iter().map(|&z| jcomplex(z)).collect();
            counterexamples.push(json!({
                "seed": seed,
                "eta": jnum(eta),
                "two_delta": jnum(est.two_delta),
                "lhs": jnum_opt(result.lhs),
                "rhs": jnum(result.rhs),
                "checks": checks.iter().map(grid_report_json).collect::<Vec<_>>(),
                "coefficients": coeffs,
            }));
        }
    }

    let code = if pass_fail > 0 { 1 } else { 0 };
    let mode_label = match mode {
        PGammaMode::Literal => "literal",
        PGammaMode::Repaired => "repaired",
    };

    let text = match config.format {
        Format::Json => {
            let report = json!({
                "tool": "schlicht",
                "version": VERSION,
                "command": "sweep",
                "config": config.echo(),
                "kind": kind.name(),
                "mode": mode_label,
                "seeds": args.seeds,
                "budget_two_delta": jnum(budget),
                "eta_max": jnum(args.eta_max),
                "n_coeffs": args.n_coeffs,
                "alpha": jnum(args.params.alpha),
                "beta": jnum(args.params.beta),
                "gamma": jnum(args.params.gamma),
                "counts": {
                    "criterion_pass_verifier_pass": pass_pass,
                    "criterion_pass_verifier_fail": pass_fail,
                    "criterion_fail": criterion_fail,
                    "criterion_inapplicable": inapplicable,
                },
                "counterexamples": counterexamples,
                "exit_code": code,
            });
            serde_json::to_string_pretty(&report).expect("report serialization") + "\n"
        }
        Format::Csv => {
            let mut s = String::new();
            s.push_str(&format!(
                "# schlicht {VERSION} sweep kind={} mode={} seeds={} budget_two_delta={} eta_max={} n_coeffs={}\n",
                kind.name(),
                mode_label,
                args.seeds,
                fnum(budget),
                fnum(args.eta_max),
                args.n_coeffs
            ));
            s.push_str(&format!("# config {}\n", config.echo_csv()));
            s.push_str("count,value\n");
            s.push_str(&format!("criterion_pass_verifier_pass,{pass_pass}\n"));
            s.push_str(&format!("criterion_pass_verifier_fail,{pass_fail}\n"));
            s.push_str(&format!("criterion_fail,{criterion_fail}\n"));
            s.push_str(&format!("criterion_inapplicable,{inapplicable}\n"));
            s
        }
    };
    Ok(Output { text, out: args.common.out.clone(), code })
}

fn cmd_example(args: &ExampleArgs) -> Result<Output, Failure> {
    let config = RunConfig::from_common(&args.common)?;
    let pi = std::f64::consts::PI;
    let entries = [
        json!({
            "name": "nehari",
            "spec": {"builtin": "nehari"},
            "description": "(exp(i pi z) - 1)/(i pi): sharp for the univalence bound",
            "known": {
                "two_delta": jnum(pi * pi / 2.0),
                "schwarzian": "constant pi^2/2",
                "eta": jnum(pi / 2.0),
            },
        }),
        json!({
            "name": "moebius",
            "spec": {"builtin": "moebius", "c": [0.3, 0.0]},
            "description": "z/(1 + c z), |c| <= 1: zero Schwarzian, eta = |c|",
            "known": {"two_delta": 0.0, "schwarzian": "identically zero"},
        }),
        json!({
            "name": "koebe",
            "spec": {"builtin": "koebe"},
            "description": "z/(1-z)^2: extremal univalent function, eta = 2",
            "known": {
                "schwarzian": "-6/(1-z^2)^2, unbounded toward the boundary",
                "sup_at_radius_r": "6/(1-r^2)^2",
            },
        }),
    ];
    let text = match config.format {
        Format::Json => {
            let report = json!({
                "tool": "schlicht",
                "version": VERSION,
                "command": "example",
                "fixtures": entries,
            });
            serde_json::to_string_pretty(&report).expect("report serialization") + "\n"
        }
        Format::Csv => {
            let mut s = String::new();
            s.push_str(&format!("# schlicht {VERSION} example\n"));
            s.push_str("name,spec,description\n");
            for e in &entries {
                s.push_str(&format!(
                    "{},{},{}\n",
                    e["name"].as_str().unwrap(),
                    csv_field(&e["spec"].to_string()),
                    csv_field(e["description"].as_str().unwrap()),
                ));
            }
            s
        }
    };
    Ok(Output { text, out: args.common.out.clone(), code: 0 })
}

fn produce(cli: Cli) -> Result<Output, Failure> {
    match &cli.command {
        Command::Check(args) => cmd_check(args),
        Command::Threshold(args) => cmd_threshold(args),
        Command::Ode(args) => cmd_ode(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Example(args) => cmd_example(args),
    }
}

/// Execute with explicit arguments (the first entry is the binary name);
/// returns the text that would reach stdout/stderr and the exit code.
/// Reports routed to `--out` are written to that file.
pub fn run_with_args<I, T>(args: I) -> (String, i32)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => return (e.to_string(), e.exit_code()),
    };
    match produce(cli) {
        Ok(Output { text, out, code }) => match out {
            Some(path) => match std::fs::write(&path, &text) {
                Ok(()) => (String::new(), code),
                Err(e) => (format!("cannot write {path:?}: {e}"), 1),
            },
            None => (text, code),
        },
        Err(f) => (f.message, f.code),
    }
}

/// Entry point for the binary.
pub fn run() -> i32 {
    let (text, code) = run_with_args(std::env::args_os());
    if !text.is_empty() {
        if code == 0 {
            print!("{text}");
        } else {
            eprint!("{text}");
            if !text.ends_with('\n') {
                eprintln!();
            }
        }
    }
    code
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_parsing_accepts_the_documented_forms() {
        assert_eq!(FunctionSpec::from_json_str(r#"{"builtin":"nehari"}"#), Ok(FunctionSpec::Nehari));
        assert_eq!(
            FunctionSpec::from_json_str(r#"{"builtin":"moebius","c":[0.3,0.0]}"#),
            Ok(FunctionSpec::Moebius(Complex64::new(0.3, 0.0)))
        );
        assert!(matches!(
            FunctionSpec::from_json_str(r#"{"coefficients":[[0,0],[1,0],[0.1,0]]}"#),
            Ok(FunctionSpec::Coefficients(_))
        ));
        assert!(matches!(
            FunctionSpec::from_json_str(
                r#"{"random":{"seed":7,"n_coeffs":8,"two_delta":0.5,"eta_max":0.1}}"#
            ),
            Ok(FunctionSpec::Random { seed: 7, .. })
        ));
    }

    #[test]
    fn spec_parsing_rejects_bad_input() {
        assert!(FunctionSpec::from_json_str(r#"{"builtin":"unknown"}"#).is_err());
        assert!(FunctionSpec::from_json_str(r#"{"builtin":"moebius"}"#).is_err());
        // non-normalized coefficients
        assert!(FunctionSpec::from_json_str(r#"{"coefficients":[[0.5,0],[1,0]]}"#).is_err());
        assert!(FunctionSpec::from_json_str(r#"{"coefficients":[[0,0],[2,0]]}"#).is_err());
        assert!(FunctionSpec::from_json_str("not json").is_err());
    }

    #[test]
    fn eta_grid_parsing() {
        assert_eq!(parse_eta_grid("0.3").unwrap(), vec![0.3]);
        let g = parse_eta_grid("0:0.2:0.1").unwrap();
        assert_eq!(g.len(), 3);
        assert!((g[2] - 0.2).abs() < 1e-12);
        assert!(parse_eta_grid("0.2:0.1:0.1").is_err());
        assert!(parse_eta_grid("a:b:c").is_err());
    }

    #[test]
    fn sig_rounds_to_twelve_digits() {
        assert_eq!(sig(0.0), 0.0);
        let x = std::f64::consts::PI * std::f64::consts::PI / 2.0;
        let r = sig(x);
        assert!((r - x).abs() < 1e-10);
        assert_eq!(fnum(r), "4.93480220054");
    }

    #[test]
    fn csv_fields_are_escaped() {
        assert_eq!(csv_field("plain"), "plain");
        assert_eq!(csv_field("a,b"), "\"a,b\"");
        assert_eq!(csv_field("say \"hi\""), "\"say \"\"hi\"\"\"");
    }
}
