//! The sufficiency criteria as predicates in `(eta, delta)` with parameters
//! `(alpha, beta, gamma)`, plus threshold solving for the maximal admissible
//! Schwarzian half-bound `delta*(eta)`.
//!
//! Each criterion couples the second-coefficient modulus `eta = |a_2|` and the
//! Schwarzian half-bound `delta` (where `sup |S(f, .)| = 2 delta`) through a
//! transcendental inequality. Every left-hand side is nondecreasing in
//! `delta`, which makes bisection on `[0, 8]` valid for threshold solving.
//! All evaluation failures (asin arguments outside `[-1, 1]`, nonpositive
//! denominators, parameter ranges, failed preconditions) are reported as
//! diagnostics on the result, never as errors.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

/// Tolerated overshoot when checking asin arguments.
pub const ASIN_DOMAIN_SLACK: f64 = 1e-14;

/// Denominators below this are treated as nonpositive.
pub const DENOMINATOR_FLOOR: f64 = 1e-14;

/// Guard band for strict inequalities, so float-rounded boundary inputs
/// (e.g. eta = 1/3 stored as the nearest double) land on the infeasible side.
const STRICT_GUARD: f64 = 1e-14;

/// Slack for non-strict inequalities, so measured quantities sitting exactly
/// on a bound (the sharp Nehari function has 2 delta = pi^2/2) are accepted
/// regardless of rounding direction.
pub const NONSTRICT_SLACK: f64 = 1e-12;

/// Upper end of the threshold bisection bracket.
pub const DELTA_BRACKET_MAX: f64 = 8.0;

/// One theorem per variant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CriterionKind {
    NehariUnivalence,
    ChiangSst,
    ChiangConvexity,
    ArgFPrimeBeta,
    UnivalenceBeta0,
    Bazilevic,
    RAlpha,
    NonlinearStCv,
    StConvCombo,
    PGamma,
}

impl CriterionKind {
    pub const ALL: [CriterionKind; 10] = [
        CriterionKind::NehariUnivalence,
        CriterionKind::ChiangSst,
        CriterionKind::ChiangConvexity,
        CriterionKind::ArgFPrimeBeta,
        CriterionKind::UnivalenceBeta0,
        CriterionKind::Bazilevic,
        CriterionKind::RAlpha,
        CriterionKind::NonlinearStCv,
        CriterionKind::StConvCombo,
        CriterionKind::PGamma,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CriterionKind::NehariUnivalence => "nehari_univalence",
            CriterionKind::ChiangSst => "chiang_sst",
            CriterionKind::ChiangConvexity => "chiang_convexity",
            CriterionKind::ArgFPrimeBeta => "arg_fprime_beta",
            CriterionKind::UnivalenceBeta0 => "univalence_beta0",
            CriterionKind::Bazilevic => "bazilevic",
            CriterionKind::RAlpha => "r_alpha",
            CriterionKind::NonlinearStCv => "nonlinear_st_cv",
            CriterionKind::StConvCombo => "st_conv_combo",
            CriterionKind::PGamma => "p_gamma",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name() == name)
    }
}

impl std::fmt::Display for CriterionKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// How to treat the P(gamma) criterion, whose classical third term contains
/// the factor `1/(1 - 2 e^{delta/2})`, negative for every `delta >= 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PGammaMode {
    /// Evaluate the inequality with that factor as-is; always flagged
    /// inapplicable for `gamma > 0` since the factor's derivation never holds.
    Literal,
    /// Replace the `|z/u|` estimate by `1/(1 - (delta/2) e^{delta/2})`, valid
    /// while `(delta/2) e^{delta/2} < 1`.
    Repaired,
}

/// Inputs to a criterion: measured `(eta, delta)` plus theorem parameters.
#[derive(Clone, Copy, Debug)]
pub struct CriterionParams {
    /// `|a_2|`.
    pub eta: f64,
    /// Half of `sup |S|`.
    pub delta: f64,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl Default for CriterionParams {
    fn default() -> Self {
        CriterionParams { eta: 0.0, delta: 0.0, alpha: 1.0, beta: 0.0, gamma: 0.0 }
    }
}

/// The convexity order `(2-6h-5(1+h)dE) / (2-2h-(1+h)dE)` delivered by the
/// convexity criterion.
#[derive(Clone, Copy, Debug)]
pub struct ConvexityOrder {
    pub order: f64,
    /// The quotient equals 1 (only at eta = delta = 0), outside the
    /// `[0, 1)` convention for an order of convexity.
    pub boundary_unit: bool,
}

/// Outcome of one criterion evaluation.
#[derive(Clone, Debug)]
pub struct CriterionResult {
    pub kind: CriterionKind,
    /// Parameter ranges and the eta-level precondition hold, and the
    /// left-hand side was evaluable.
    pub applicable: bool,
    /// Left side of the main inequality; `None` when a guard fired.
    pub lhs: Option<f64>,
    /// Right side of the main inequality.
    pub rhs: f64,
    /// `applicable` and the main inequality holds.
    pub satisfied: bool,
    pub diagnostics: Vec<String>,
    /// The geometric property the theorem guarantees.
    pub conclusion: String,
    /// Only set for the convexity criterion.
    pub convexity_order: Option<ConvexityOrder>,
}

struct Terms {
    /// `e^{delta/2}`
    e: f64,
    /// `(delta/2) e^{delta/2}`, the `|u/z - 1|` bound
    t1: f64,
    /// `eta + (1/2)(1+eta) delta e^{delta/2}`, the `|cu+v-1|` bound
    t2: f64,
    /// `eta + (1+eta) delta e^{delta/2}`, the `|cu'+v'|` bound
    t3: f64,
    /// `2 - 2 eta - (1+eta) delta e^{delta/2}`, twice the `|cu+v|` lower bound
    d: f64,
}

fn terms(eta: f64, delta: f64) -> Terms {
    let e = (delta / 2.0).exp();
    Terms {
        e,
        t1: 0.5 * delta * e,
        t2: eta + 0.5 * (1.0 + eta) * delta * e,
        t3: eta + (1.0 + eta) * delta * e,
        d: 2.0 - 2.0 * eta - (1.0 + eta) * delta * e,
    }
}

fn guarded_asin(arg: f64, label: &str, diags: &mut Vec<String>) -> Option<f64> {
    if !arg.is_finite() || arg.abs() > 1.0 + ASIN_DOMAIN_SLACK {
        diags.push(format!("asin domain violation in {label}: argument {arg:.6e}"));
        return None;
    }
    Some(arg.clamp(-1.0, 1.0).asin())
}

/// `coef * asin(arg)`; a zero coefficient drops the term (and its guards).
fn scaled_asin(coef: f64, arg: f64, label: &str, diags: &mut Vec<String>) -> Option<f64> {
    if coef == 0.0 {
        return Some(0.0);
    }
    guarded_asin(arg, label, diags).map(|v| coef * v)
}

/// `coef * asin(num / den)`; a zero coefficient or numerator drops the term.
fn quotient_asin(
    coef: f64,
    num: f64,
    den: f64,
    label: &str,
    diags: &mut Vec<String>,
) -> Option<f64> {
    if coef == 0.0 || num == 0.0 {
        return Some(0.0);
    }
    if den < DENOMINATOR_FLOOR {
        diags.push(format!("nonpositive denominator in {label}: {den:.6e}"));
        return None;
    }
    guarded_asin(num / den, label, diags).map(|v| coef * v)
}

fn validate_ranges(kind: CriterionKind, p: &CriterionParams, diags: &mut Vec<String>) -> bool {
    let mut ok = true;
    let mut reject = |msg: String, diags: &mut Vec<String>| {
        diags.push(msg);
        ok = false;
    };
    if !(p.eta >= 0.0 && p.eta.is_finite()) {
        reject(format!("eta = {} must be a finite nonnegative real", p.eta), diags);
    }
    if !(p.delta >= 0.0 && p.delta.is_finite()) {
        reject(format!("delta = {} must be a finite nonnegative real", p.delta), diags);
    }
    match kind {
        CriterionKind::ChiangSst | CriterionKind::UnivalenceBeta0 => {
            if !(p.alpha > 0.0 && p.alpha <= 1.0) {
                reject(format!("alpha = {} outside (0, 1]", p.alpha), diags);
            }
        }
        CriterionKind::ArgFPrimeBeta => {
            if !(p.alpha > 0.0 && p.alpha <= 1.0) {
                reject(format!("alpha = {} outside (0, 1]", p.alpha), diags);
            }
            if !(p.beta >= 0.0 && p.beta < 1.0) {
                reject(format!("beta = {} outside [0, 1)", p.beta), diags);
            }
        }
        CriterionKind::Bazilevic => {
            if !(p.alpha > 0.0) {
                reject(format!("alpha = {} must be positive", p.alpha), diags);
            }
            if !(p.beta > 0.0 && p.beta <= 1.0) {
                reject(format!("beta = {} outside (0, 1]", p.beta), diags);
            }
        }
        CriterionKind::RAlpha => {
            if !(p.alpha >= 0.0) {
                reject(format!("alpha = {} must be nonnegative", p.alpha), diags);
            }
        }
        CriterionKind::StConvCombo => {
            if !(p.beta >= 0.0) {
                reject(format!("beta = {} must be nonnegative", p.beta), diags);
            }
        }
        CriterionKind::PGamma => {
            if !(p.gamma >= 0.0 && p.gamma < 1.0) {
                reject(format!("gamma = {} outside [0, 1)", p.gamma), diags);
            }
        }
        CriterionKind::NehariUnivalence
        | CriterionKind::ChiangConvexity
        | CriterionKind::NonlinearStCv => {}
    }
    ok
}

/// The strict eta-level precondition of each theorem (its "limiting argument
/// as delta -> 0" feasibility condition).
fn precondition(
    kind: CriterionKind,
    p: &CriterionParams,
    mode: PGammaMode,
    diags: &mut Vec<String>,
) -> bool {
    let fail = |msg: String, diags: &mut Vec<String>| {
        diags.push(format!("precondition fails: {msg}"));
        false
    };
    match kind {
        CriterionKind::NehariUnivalence => true,
        CriterionKind::ChiangSst => {
            let bound = (p.alpha * FRAC_PI_2).sin();
            if p.eta < bound {
                true
            } else {
                fail(format!("eta = {} >= sin(alpha pi/2) = {bound}", p.eta), diags)
            }
        }
        CriterionKind::ChiangConvexity => {
            // same float expression as the main inequality at delta = 0
            if 6.0 * p.eta < 2.0 - STRICT_GUARD {
                true
            } else {
                fail(format!("eta = {} not below 1/3", p.eta), diags)
            }
        }
        CriterionKind::ArgFPrimeBeta => {
            let first = match guarded_asin(
                p.beta * (1.0 + p.eta) * (1.0 + p.eta),
                "precondition asin(beta (1+eta)^2)",
                diags,
            ) {
                Some(v) => v,
                None => return false,
            };
            let second = match guarded_asin(p.eta, "precondition asin(eta)", diags) {
                Some(v) => v,
                None => return false,
            };
            let lhs = first + 2.0 * second;
            if lhs < p.alpha * FRAC_PI_2 {
                true
            } else {
                fail(
                    format!("asin(beta(1+eta)^2) + 2 asin(eta) = {lhs} not below alpha pi/2"),
                    diags,
                )
            }
        }
        CriterionKind::UnivalenceBeta0 => {
            let bound = (p.alpha * FRAC_PI_4).sin();
            if p.eta < bound {
                true
            } else {
                fail(format!("eta = {} >= sin(alpha pi/4) = {bound}", p.eta), diags)
            }
        }
        CriterionKind::Bazilevic => {
            let bound = (p.beta * PI / (2.0 * (1.0 + p.alpha))).sin();
            if p.eta < bound {
                true
            } else {
                fail(format!("eta = {} >= sin(beta pi / (2(1+alpha))) = {bound}", p.eta), diags)
            }
        }
        CriterionKind::RAlpha => {
            if p.eta >= 1.0 - DENOMINATOR_FLOOR {
                return fail(format!("eta = {} too close to 1", p.eta), diags);
            }
            let first = match guarded_asin(p.eta, "precondition asin(eta)", diags) {
                Some(v) => v,
                None => return false,
            };
            let second = match quotient_asin(
                1.0,
                2.0 * p.eta * p.alpha,
                1.0 - p.eta,
                "precondition asin(2 eta alpha / (1-eta))",
                diags,
            ) {
                Some(v) => v,
                None => return false,
            };
            let lhs = 2.0 * first + second;
            if lhs < FRAC_PI_2 {
                true
            } else {
                fail(format!("2 asin(eta) + asin(2 eta alpha/(1-eta)) = {lhs} not below pi/2"), diags)
            }
        }
        CriterionKind::NonlinearStCv => {
            if p.eta > 1.0 / 3.0 {
                return fail(format!("eta = {} above 1/3", p.eta), diags);
            }
            let first = match scaled_asin(p.alpha.abs(), p.eta, "precondition |alpha| asin(eta)", diags)
            {
                Some(v) => v,
                None => return false,
            };
            let second = match quotient_asin(
                p.beta.abs(),
                2.0 * p.eta,
                1.0 - p.eta,
                "precondition |beta| asin(2 eta/(1-eta))",
                diags,
            ) {
                Some(v) => v,
                None => return false,
            };
            let lhs = first + second;
            if lhs < FRAC_PI_2 {
                true
            } else {
                fail(
                    format!("|alpha| asin(eta) + |beta| asin(2 eta/(1-eta)) = {lhs} not below pi/2"),
                    diags,
                )
            }
        }
        CriterionKind::StConvCombo => {
            let first = match guarded_asin(p.eta, "precondition asin(eta)", diags) {
                Some(v) => v,
                None => return false,
            };
            let second = match quotient_asin(
                1.0,
                2.0 * p.beta * p.eta,
                1.0 - p.eta,
                "precondition asin(2 beta eta/(1-eta))",
                diags,
            ) {
                Some(v) => v,
                None => return false,
            };
            let lhs = first + second;
            if lhs < FRAC_PI_2 {
                true
            } else {
                fail(format!("asin(eta) + asin(2 beta eta/(1-eta)) = {lhs} not below pi/2"), diags)
            }
        }
        CriterionKind::PGamma => {
            let coef = p.gamma / (1.0 - p.gamma);
            match mode {
                PGammaMode::Literal => {
                    // This form of the precondition divides by (eta - 1),
                    // negative for eta < 1; evaluated literally and annotated.
                    if (p.eta - 1.0).abs() < DENOMINATOR_FLOOR {
                        return fail(format!("eta = {} makes eta - 1 vanish", p.eta), diags);
                    }
                    let arg = coef / (p.eta - 1.0);
                    if coef != 0.0 && arg < 0.0 {
                        diags.push(format!(
                            "p_gamma literal precondition: asin argument (gamma/(1-gamma))/(eta-1) = {arg:.6e} \
                             is negative for eta < 1 (formula evaluated literally)"
                        ));
                    }
                    let first = match guarded_asin(
                        arg,
                        "precondition asin((gamma/(1-gamma))/(eta-1))",
                        diags,
                    ) {
                        Some(v) => v,
                        None => return false,
                    };
                    let second = match guarded_asin(p.eta, "precondition asin(eta)", diags) {
                        Some(v) => v,
                        None => return false,
                    };
                    let lhs = first + second;
                    if lhs < FRAC_PI_2 {
                        true
                    } else {
                        fail(format!("literal p_gamma precondition sum = {lhs} not below pi/2"), diags)
                    }
                }
                PGammaMode::Repaired => {
                    let first = match guarded_asin(p.eta, "precondition asin(eta)", diags) {
                        Some(v) => v,
                        None => return false,
                    };
                    let second = match quotient_asin(
                        1.0,
                        coef,
                        1.0 - p.eta,
                        "precondition asin((gamma/(1-gamma))/(1-eta))",
                        diags,
                    ) {
                        Some(v) => v,
                        None => return false,
                    };
                    let lhs = first + second;
                    if lhs < FRAC_PI_2 {
                        true
                    } else {
                        fail(format!("repaired p_gamma precondition sum = {lhs} not below pi/2"), diags)
                    }
                }
            }
        }
    }
}

struct MainInequality {
    lhs: Option<f64>,
    rhs: f64,
    strict: bool,
    /// Set by the literal P(gamma) mode: the inequality was evaluated but its
    /// derivation is void, so the criterion must not count as applicable.
    derivation_void: bool,
}

fn main_inequality(
    kind: CriterionKind,
    p: &CriterionParams,
    mode: PGammaMode,
    diags: &mut Vec<String>,
) -> MainInequality {
    let t = terms(p.eta, p.delta);
    let mut derivation_void = false;
    let (lhs, rhs, strict) = match kind {
        CriterionKind::NehariUnivalence => (Some(2.0 * p.delta), PI * PI / 2.0, false),
        CriterionKind::ChiangSst => {
            let lhs = (|| {
                Some(
                    guarded_asin(t.t1, "asin((delta/2) e^(delta/2))", diags)?
                        + guarded_asin(t.t2, "asin(eta + (1+eta)(delta/2) e^(delta/2))", diags)?,
                )
            })();
            (lhs, p.alpha * FRAC_PI_2, false)
        }
        CriterionKind::ChiangConvexity => {
            (Some(6.0 * p.eta + 5.0 * (1.0 + p.eta) * p.delta * t.e), 2.0, true)
        }
        CriterionKind::ArgFPrimeBeta => {
            let lhs = (|| {
                let first = guarded_asin(
                    p.beta * (1.0 + p.eta) * (1.0 + p.eta) * t.e * t.e,
                    "asin(beta (1+eta)^2 e^delta)",
                    diags,
                )?;
                let second = guarded_asin(t.t2, "asin(eta + (1+eta)(delta/2) e^(delta/2))", diags)?;
                Some(first + 2.0 * second)
            })();
            (lhs, p.alpha * FRAC_PI_2, false)
        }
        CriterionKind::UnivalenceBeta0 => (Some(t.t2), (p.alpha * FRAC_PI_4).sin(), false),
        CriterionKind::Bazilevic => {
            let lhs = (|| {
                let first = scaled_asin(
                    (1.0 - p.alpha).abs(),
                    t.t1,
                    "|1-alpha| asin((delta/2) e^(delta/2))",
                    diags,
                )?;
                let second = scaled_asin(
                    1.0 + p.alpha,
                    t.t2,
                    "(1+alpha) asin(eta + (1+eta)(delta/2) e^(delta/2))",
                    diags,
                )?;
                Some(first + second)
            })();
            (lhs, p.beta * FRAC_PI_2, false)
        }
        CriterionKind::RAlpha => {
            let lhs = (|| {
                let first = guarded_asin(t.t2, "asin(eta + (1+eta)(delta/2) e^(delta/2))", diags)?;
                let second = quotient_asin(
                    1.0,
                    4.0 * p.alpha * t.t3,
                    t.d,
                    "asin(4 alpha (eta + (1+eta) delta e^(delta/2)) / (2-2eta-(1+eta) delta e^(delta/2)))",
                    diags,
                )?;
                Some(2.0 * first + second)
            })();
            (lhs, FRAC_PI_2, false)
        }
        CriterionKind::NonlinearStCv => {
            let lhs = (|| {
                let a = p.alpha.abs();
                let b = p.beta.abs();
                let first = scaled_asin(a, t.t1, "|alpha| asin((delta/2) e^(delta/2))", diags)?;
                let second =
                    scaled_asin(a, t.t2, "|alpha| asin(eta + (1+eta)(delta/2) e^(delta/2))", diags)?;
                let third = quotient_asin(
                    b,
                    4.0 * t.t3,
                    t.d,
                    "|beta| asin(4 (eta + (1+eta) delta e^(delta/2)) / (2-2eta-(1+eta) delta e^(delta/2)))",
                    diags,
                )?;
                Some(first + second + third)
            })();
            (lhs, FRAC_PI_2, false)
        }
        CriterionKind::StConvCombo => {
            let lhs = (|| {
                let first = guarded_asin(t.t1, "asin((delta/2) e^(delta/2))", diags)?;
                let second = guarded_asin(t.t2, "asin(eta + (1+eta)(delta/2) e^(delta/2))", diags)?;
                let third = quotient_asin(
                    1.0,
                    4.0 * p.beta * t.t3,
                    t.d,
                    "asin(4 beta (eta + (1+eta) delta e^(delta/2)) / (2-2eta-(1+eta) delta e^(delta/2)))",
                    diags,
                )?;
                Some(first + second + third)
            })();
            (lhs, FRAC_PI_2, false)
        }
        CriterionKind::PGamma => {
            let coef = 2.0 * p.gamma / (1.0 - p.gamma);
            let lhs = (|| {
                let first = guarded_asin(t.t1, "asin((delta/2) e^(delta/2))", diags)?;
                let second = guarded_asin(t.t2, "asin(eta + (1+eta)(delta/2) e^(delta/2))", diags)?;
                let third = if coef == 0.0 {
                    0.0
                } else {
                    match mode {
                        PGammaMode::Literal => {
                            let factor_den = 1.0 - 2.0 * t.e; // <= -1 for delta >= 0
                            diags.push(format!(
                                "p_gamma literal: third-term factor 1/(1-2e^(delta/2)) = {:.6e} is negative \
                                 for all delta >= 0; the estimate chain needs |u-1| < 1 while the available \
                                 bound is |u-1| <= 2e^(delta/2) >= 2, so the criterion is marked inapplicable",
                                1.0 / factor_den
                            ));
                            derivation_void = true;
                            if t.d < DENOMINATOR_FLOOR {
                                diags.push(format!(
                                    "nonpositive denominator in literal p_gamma third term: {:.6e}",
                                    t.d
                                ));
                                return None;
                            }
                            guarded_asin(
                                coef / t.d / factor_den,
                                "literal p_gamma third term",
                                diags,
                            )?
                        }
                        PGammaMode::Repaired => {
                            let m = 1.0 - t.t1;
                            if m < DENOMINATOR_FLOOR {
                                diags.push(format!(
                                    "repaired p_gamma needs (delta/2) e^(delta/2) < 1; \
                                     1 - (delta/2) e^(delta/2) = {m:.6e}"
                                ));
                                return None;
                            }
                            if t.d < DENOMINATOR_FLOOR {
                                diags.push(format!(
                                    "nonpositive denominator in repaired p_gamma third term: {:.6e}",
                                    t.d
                                ));
                                return None;
                            }
                            guarded_asin(coef / (m * t.d), "repaired p_gamma third term", diags)?
                        }
                    }
                };
                Some(first + second + third)
            })();
            (lhs, FRAC_PI_2, false)
        }
    };
    MainInequality { lhs, rhs, strict, derivation_void }
}

fn conclusion_for(kind: CriterionKind, p: &CriterionParams) -> String {
    match kind {
        CriterionKind::NehariUnivalence => "f in S (univalent on the unit disk)".to_string(),
        CriterionKind::ChiangSst => format!(
            "f in SST({0}); further |arg(f(z)/z)| <= {0} pi/2",
            p.alpha
        ),
        CriterionKind::ChiangConvexity => {
            "f in CV((2-6 eta-5(1+eta) delta e^(delta/2)) / (2-2 eta-(1+eta) delta e^(delta/2)))"
                .to_string()
        }
        CriterionKind::ArgFPrimeBeta => {
            format!("|arg(f'(z) - {})| <= {} pi/2", p.beta, p.alpha)
        }
        CriterionKind::UnivalenceBeta0 => {
            format!("|arg f'(z)| <= {} pi/2; in particular f in S", p.alpha)
        }
        CriterionKind::Bazilevic => {
            format!("f strongly {}-Bazilevic of order {}", p.alpha, p.beta)
        }
        CriterionKind::RAlpha => format!("f in R({}): Re(f' + {} z f'') > 0", p.alpha, p.alpha),
        CriterionKind::NonlinearStCv => format!(
            "Re((zf'/f)^{} (1 + zf''/f')^{}) > 0",
            p.alpha, p.beta
        ),
        CriterionKind::StConvCombo => {
            format!("Re(zf'/f + {} z^2 f''/f) > 0", p.beta)
        }
        CriterionKind::PGamma => format!("f in P({})", p.gamma),
    }
}

/// Whether the theorem's parameter ranges and strict eta-level precondition
/// hold (feasibility of the main inequality in the `delta -> 0` limit).
pub fn precondition_strict(
    kind: CriterionKind,
    p: &CriterionParams,
    mode: PGammaMode,
) -> (bool, Vec<String>) {
    let mut diags = Vec::new();
    let ok = validate_ranges(kind, p, &mut diags) && precondition(kind, p, mode, &mut diags);
    (ok, diags)
}

/// Evaluate a criterion; the P(gamma) kind defaults to repaired mode.
pub fn evaluate_criterion(kind: CriterionKind, p: &CriterionParams) -> CriterionResult {
    evaluate_criterion_mode(kind, p, PGammaMode::Repaired)
}

/// Evaluate a criterion with an explicit P(gamma) mode (ignored by the other
/// kinds).
pub fn evaluate_criterion_mode(
    kind: CriterionKind,
    p: &CriterionParams,
    mode: PGammaMode,
) -> CriterionResult {
    let mut diags = Vec::new();
    let ranges_ok = validate_ranges(kind, p, &mut diags);
    let pre_ok = ranges_ok && precondition(kind, p, mode, &mut diags);
    let main = main_inequality(kind, p, mode, &mut diags);

    let applicable = ranges_ok && pre_ok && main.lhs.is_some() && !main.derivation_void;
    let satisfied = applicable
        && match main.lhs {
            Some(l) => {
                if main.strict {
                    l < main.rhs - STRICT_GUARD
                } else {
                    l <= main.rhs + NONSTRICT_SLACK
                }
            }
            None => false,
        };

    let convexity = if kind == CriterionKind::ChiangConvexity {
        let co = convexity_order(p.eta, p.delta);
        if let Some(c) = &co {
            if c.boundary_unit {
                diags.push(
                    "convexity order equals 1 at eta = delta = 0; an order of convexity must be < 1"
                        .to_string(),
                );
            }
        }
        co
    } else {
        None
    };

    CriterionResult {
        kind,
        applicable,
        lhs: main.lhs,
        rhs: main.rhs,
        satisfied,
        diagnostics: diags,
        conclusion: conclusion_for(kind, p),
        convexity_order: convexity,
    }
}

/// The convexity order when the hypothesis `6 eta + 5 (1+eta) delta e^{delta/2} < 2`
/// holds, `None` otherwise. The degenerate point `eta = delta = 0` yields the
/// quotient value 1 with [`ConvexityOrder::boundary_unit`] set instead of
/// silent clamping.
pub fn convexity_order(eta: f64, delta: f64) -> Option<ConvexityOrder> {
    let e = (delta / 2.0).exp();
    let weighted = (1.0 + eta) * delta * e;
    let hypothesis = 6.0 * eta + 5.0 * weighted;
    if !(hypothesis < 2.0 - STRICT_GUARD) {
        return None;
    }
    let order = (2.0 - hypothesis) / (2.0 - 2.0 * eta - weighted);
    Some(ConvexityOrder { order, boundary_unit: order >= 1.0 - 1e-12 })
}

/// Found threshold, or the reason there is none.
#[derive(Clone, Debug)]
pub enum ThresholdOutcome {
    /// `delta = 0` is already infeasible.
    Infeasible { diagnostics: Vec<String> },
    Threshold {
        delta_star: f64,
        /// The criterion was still satisfied at the top of the bracket.
        saturated: bool,
    },
}

/// Supremum `delta*` of the feasible set `{delta >= 0 : criterion satisfied}`,
/// by bisection on `[0, DELTA_BRACKET_MAX]` (valid by monotonicity of the
/// left-hand side in `delta`). The P(gamma) kind is solved in repaired mode.
pub fn delta_threshold_detailed(
    kind: CriterionKind,
    p: &CriterionParams,
    tol: f64,
) -> ThresholdOutcome {
    assert!(tol > 0.0, "threshold tolerance must be positive");
    let feasible = |delta: f64| {
        let q = CriterionParams { delta, ..*p };
        evaluate_criterion_mode(kind, &q, PGammaMode::Repaired).satisfied
    };
    if !feasible(0.0) {
        let q = CriterionParams { delta: 0.0, ..*p };
        let r = evaluate_criterion_mode(kind, &q, PGammaMode::Repaired);
        return ThresholdOutcome::Infeasible { diagnostics: r.diagnostics };
    }
    if feasible(DELTA_BRACKET_MAX) {
        return ThresholdOutcome::Threshold { delta_star: DELTA_BRACKET_MAX, saturated: true };
    }
    let mut lo = 0.0;
    let mut hi = DELTA_BRACKET_MAX;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if feasible(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    ThresholdOutcome::Threshold { delta_star: lo, saturated: false }
}

/// [`delta_threshold_detailed`] reduced to the optional threshold value.
pub fn delta_threshold(kind: CriterionKind, p: &CriterionParams, tol: f64) -> Option<f64> {
    match delta_threshold_detailed(kind, p, tol) {
        ThresholdOutcome::Infeasible { .. } => None,
        ThresholdOutcome::Threshold { delta_star, .. } => Some(delta_star),
    }
}

/// Largest `eta` in (0, 1) at which the combined starlike/convex precondition
/// `asin(eta) + asin(2 beta eta / (1 - eta)) < pi/2` transitions from feasible
/// to infeasible, by bisection. For `beta = 0` the precondition holds for all
/// `eta < 1` and the boundary value 1 is returned.
pub fn eta_root_combo(beta: f64, tol: f64) -> f64 {
    assert!(beta >= 0.0, "beta must be nonnegative");
    assert!(tol > 0.0, "tolerance must be positive");
    let feasible = |eta: f64| {
        if !(eta < 1.0) {
            return false;
        }
        let arg = 2.0 * beta * eta / (1.0 - eta);
        if arg > 1.0 {
            return false;
        }
        eta.asin() + arg.asin() < FRAC_PI_2
    };
    if feasible(1.0 - 1e-12) {
        return 1.0;
    }
    let mut lo = 0.0;
    let mut hi = 1.0;
    while hi - lo > tol.min(1e-12) {
        let mid = 0.5 * (lo + hi);
        if feasible(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}
