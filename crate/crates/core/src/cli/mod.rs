//! Batch verification driven by scenario files.
//!
//! [`load_scenario`] parses and validates a file, [`sample_points`] draws
//! admissible points, [`run`] evaluates the requested checks and
//! [`render_report`] writes a text table or JSON.
//!
//! Sampling uses ChaCha8 seeded with the 64-bit scenario seed through
//! `SeedableRng::seed_from_u64`; every coordinate is drawn uniformly from its
//! box interval, in chart order, on a single thread before any evaluation.

mod scenario;

use std::fmt::Write as _;

use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

pub use scenario::{
    load_scenario, parse_scenario, Check, MetricFamily, Sampling, Scenario, DEFAULT_COUNT,
};

use crate::expr::{Bindings, ExprError, Point};
use crate::families::{FamilyError, POSITIVITY_FLOOR};
use crate::geometry::{
    bianchi_defects, causal_character, frame_at, signature, weyl, CausalCharacter, GeometryError,
    PointFrame,
};
use crate::soliton::{
    classify, gradient_diagnostics, hamilton_value, homothety_defect, lambda_consistency,
    nilpotency_defect, residual, SolitonError, SolitonType,
};

/// Tolerance for candidates with closed-form components.
pub const DEFAULT_TOLERANCE: f64 = 1e-8;
/// Tolerance for candidates evaluated through quadrature.
pub const QUADRATURE_TOLERANCE: f64 = 1e-6;
/// Draw budget per requested point.
pub const ATTEMPTS_PER_POINT: usize = 100;

/// Problems with a scenario or its inputs; all map to exit code 2.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum CliError {
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("missing key `{key}` in [{section}]")]
    Missing { section: String, key: String },
    #[error("[{section}] {key}: {message}")]
    Invalid {
        section: String,
        key: String,
        message: String,
    },
    #[error("unknown check `{0}`; valid checks: {valid}", valid = valid_checks())]
    UnknownCheck(String),
    #[error("only {found} admissible points after {attempts} draws ({wanted} requested)")]
    SamplingExhausted {
        wanted: usize,
        found: usize,
        attempts: usize,
    },
    #[error("invalid --at: {0}")]
    At(String),
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Soliton(#[from] SolitonError),
}

impl CliError {
    fn invalid(section: &str, key: &str, message: impl Into<String>) -> Self {
        CliError::Invalid {
            section: section.to_string(),
            key: key.to_string(),
            message: message.into(),
        }
    }
}

fn valid_checks() -> String {
    Check::ALL.map(Check::name).join(", ")
}

pub type Result<T> = std::result::Result<T, CliError>;

/// Admissible sample points and the number of rejected draws.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub points: Vec<Point>,
    pub rejected: usize,
}

/// Draws `count` admissible points from the scenario box.
///
/// A draw is rejected when `|det g| ≤ 1e-12`, when the Egorov profile is at most
/// `1e-9`, or when the metric cannot be evaluated there. At most
/// `100 × count` draws are made.
pub fn sample_points(s: &Scenario) -> Result<Sample> {
    let Sampling {
        bounds,
        count,
        seed,
    } = &s.sampling;
    let mut rng = ChaCha8Rng::seed_from_u64(*seed);
    let budget = count.saturating_mul(ATTEMPTS_PER_POINT);
    let mut points = Vec::with_capacity(*count);
    let mut rejected = 0;
    let mut attempts = 0;
    while points.len() < *count {
        if attempts == budget {
            return Err(CliError::SamplingExhausted {
                wanted: *count,
                found: points.len(),
                attempts,
            });
        }
        attempts += 1;
        let coords: Vec<f64> = bounds
            .iter()
            .map(|&(lo, hi)| rng.random_range(lo..hi))
            .collect();
        let p = Point::new(coords)?;
        if admissible(s, &p) {
            points.push(p);
        } else {
            rejected += 1;
        }
    }
    Ok(Sample { points, rejected })
}

fn admissible(s: &Scenario, p: &Point) -> bool {
    if let MetricFamily::Egorov(params) = &s.family {
        match params.f().evaluate(p, &Bindings::new()) {
            Ok(f) if f > POSITIVITY_FLOOR => {}
            _ => return false,
        }
    }
    s.metric.is_admissible(p).unwrap_or(false)
}

/// Tolerance applied to every check of `s`.
pub fn effective_tolerance(s: &Scenario) -> f64 {
    s.tolerance.unwrap_or(if s.candidate.has_antiderivative() {
        QUADRATURE_TOLERANCE
    } else {
        DEFAULT_TOLERANCE
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckRecord {
    pub name: String,
    /// Largest residual over the points where the check could be evaluated;
    /// for `hamilton`, the spread `max − min` of the Hamilton quantity.
    /// `null` in JSON when no point could be evaluated.
    pub max_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    /// Points where evaluation failed; any failure fails the check.
    pub errors: usize,
}

/// How often the candidate field was timelike, null, spacelike or zero.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct CausalTally {
    pub timelike: usize,
    pub null: usize,
    pub spacelike: usize,
    pub zero: usize,
}

impl CausalTally {
    fn add(&mut self, c: CausalCharacter) {
        match c {
            CausalCharacter::Timelike => self.timelike += 1,
            CausalCharacter::Null => self.null += 1,
            CausalCharacter::Spacelike => self.spacelike += 1,
            CausalCharacter::Zero => self.zero += 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub scenario: String,
    pub seed: u64,
    pub points_evaluated: usize,
    pub points_rejected: usize,
    pub lambda: f64,
    pub classification: SolitonType,
    pub checks: Vec<CheckRecord>,
    pub causal_character: CausalTally,
    pub overall_pass: bool,
}

struct PointOutcome {
    values: Vec<std::result::Result<f64, String>>,
    causal: Option<CausalCharacter>,
}

/// Samples the scenario and evaluates every requested check at every point.
///
/// Points are evaluated in parallel; aggregation uses only max and min, so the
/// report does not depend on scheduling.
pub fn run(s: &Scenario) -> Result<Report> {
    let sample = sample_points(s)?;
    let outcomes: Vec<PointOutcome> = sample
        .points
        .par_iter()
        .map(|p| evaluate_point(s, p))
        .collect();

    let tolerance = effective_tolerance(s);
    let mut tally = CausalTally::default();
    for o in &outcomes {
        if let Some(c) = o.causal {
            tally.add(c);
        }
    }
    let checks: Vec<CheckRecord> = s
        .checks
        .iter()
        .enumerate()
        .map(|(k, &check)| {
            let mut errors = 0;
            let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
            for o in &outcomes {
                match &o.values[k] {
                    Ok(v) => {
                        lo = lo.min(*v);
                        hi = hi.max(*v);
                    }
                    Err(_) => errors += 1,
                }
            }
            let max_residual = if hi < lo {
                f64::NAN
            } else if check == Check::Hamilton {
                hi - lo
            } else {
                hi
            };
            CheckRecord {
                name: check.name().to_string(),
                max_residual,
                tolerance,
                pass: errors == 0 && max_residual <= tolerance,
                errors,
            }
        })
        .collect();
    let lambda = s.candidate.lambda();
    Ok(Report {
        scenario: s.name.clone(),
        seed: s.sampling.seed,
        points_evaluated: sample.points.len(),
        points_rejected: sample.rejected,
        lambda,
        classification: classify(lambda),
        overall_pass: checks.iter().all(|c| c.pass),
        checks,
        causal_character: tally,
    })
}

fn evaluate_point(s: &Scenario, p: &Point) -> PointOutcome {
    let order = if s.checks.contains(&Check::Bianchi) { 3 } else { 2 };
    let frame = match frame_at(&s.metric, p, order) {
        Ok(f) => f,
        Err(e) => {
            let msg = e.to_string();
            return PointOutcome {
                values: vec![Err(msg); s.checks.len()],
                causal: None,
            };
        }
    };
    let jet = s.candidate.jet(&frame).map_err(|e| e.to_string());
    let causal = jet
        .as_ref()
        .ok()
        .map(|j| causal_character(&frame, &j.field.values));
    let lambda = s.candidate.lambda();
    let values = s
        .checks
        .iter()
        .map(|&check| {
            let needs_jet = || jet.as_ref().map_err(Clone::clone);
            Ok(match check {
                Check::Residual => residual(&frame, &s.candidate, needs_jet()?).amax(),
                Check::LambdaConsistency => {
                    lambda_consistency(&frame, &needs_jet()?.field, lambda).abs()
                }
                Check::Hamilton | Check::Diagnostics => {
                    let j = needs_jet()?;
                    let h = j
                        .potential
                        .as_ref()
                        .ok_or_else(|| SolitonError::NotGradient.to_string())?;
                    if check == Check::Hamilton {
                        hamilton_value(&frame, h, &j.field.values, lambda)
                    } else {
                        gradient_diagnostics(&frame, h, &j.field, lambda).max_defect()
                    }
                }
                Check::Nilpotency => {
                    let n = nilpotency_defect(&frame);
                    n.square.max(n.scalar)
                }
                Check::Weyl => weyl(&frame)
                    .map_err(|e| e.to_string())?
                    .into_iter()
                    .fold(0.0f64, |m, w| m.max(w.abs())),
                Check::Bianchi => bianchi_defects(&frame).map_err(|e| e.to_string())?.max(),
                Check::Signature => {
                    if signature(&frame.g).is_lorentzian() {
                        0.0
                    } else {
                        1.0
                    }
                }
                Check::KillingDefect => homothety_defect(&frame, &needs_jet()?.field, s.homothety),
            })
        })
        .map(|r: std::result::Result<f64, String>| match r {
            Ok(v) if !v.is_finite() => Err("non-finite value".to_string()),
            other => other,
        })
        .collect();
    PointOutcome { values, causal }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

/// Renders a report; JSON keys follow the field order of [`Report`].
pub fn render_report(r: &Report, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(r).expect("report serializes");
            s.push('\n');
            s
        }
        Format::Text => render_text(r),
    }
}

fn render_text(r: &Report) -> String {
    let mut out = String::new();
    let t = &r.causal_character;
    let _ = writeln!(out, "scenario        {}", r.scenario);
    let _ = writeln!(out, "seed            {}", r.seed);
    let _ = writeln!(
        out,
        "points          {} evaluated, {} rejected",
        r.points_evaluated, r.points_rejected
    );
    let _ = writeln!(out, "lambda          {} ({})", r.lambda, r.classification);
    let _ = writeln!(
        out,
        "causal          timelike {}, null {}, spacelike {}, zero {}",
        t.timelike, t.null, t.spacelike, t.zero
    );
    let _ = writeln!(out);
    let _ = writeln!(
        out,
        "{:<20} {:>14} {:>11} {:>7}  result",
        "check", "max residual", "tolerance", "errors"
    );
    for c in &r.checks {
        let _ = writeln!(
            out,
            "{:<20} {:>14.6e} {:>11.3e} {:>7}  {}",
            c.name,
            c.max_residual,
            c.tolerance,
            c.errors,
            if c.pass { "pass" } else { "FAIL" }
        );
    }
    let _ = writeln!(out);
    let _ = writeln!(
        out,
        "overall         {}",
        if r.overall_pass { "PASS" } else { "FAIL" }
    );
    out
}

/// Parses `u=0.1,v=2,x1=-1` into a point; unspecified coordinates are 0.
pub fn parse_at(s: &Scenario, text: &str) -> Result<Point> {
    let chart = s.chart();
    let mut coords = vec![0.0; chart.dim()];
    let mut seen = vec![false; chart.dim()];
    for item in text.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let (name, value) = item
            .split_once('=')
            .ok_or_else(|| CliError::At(format!("expected name=value, got `{item}`")))?;
        let i = chart.index_of(name.trim())?;
        if seen[i] {
            return Err(CliError::At(format!("`{}` given twice", name.trim())));
        }
        seen[i] = true;
        coords[i] = value
            .trim()
            .parse::<f64>()
            .map_err(|_| CliError::At(format!("`{}` is not a number", value.trim())))?;
    }
    Ok(Point::new(coords)?)
}

/// Human-readable dump of the connection and curvature at `p`.
pub fn describe_frame(s: &Scenario, p: &Point) -> Result<String> {
    const ZERO: f64 = 1e-14;
    let chart = s.chart();
    let frame: PointFrame = frame_at(&s.metric, p, 2)?;
    let d = frame.dim();
    let name = |i: usize| chart.name(i);
    let mut out = String::new();
    let at: Vec<String> = (0..d).map(|i| format!("{}={}", name(i), p[i])).collect();
    let _ = writeln!(out, "point           {}", at.join(", "));
    let _ = writeln!(out, "det g           {:.12e}", frame.det);
    let sig = signature(&frame.g);
    let _ = writeln!(
        out,
        "signature       ({}, {}, {})",
        sig.negative, sig.zero, sig.positive
    );
    let _ = writeln!(out, "\nmetric g_ij");
    write_matrix(&mut out, &frame.g);
    let _ = writeln!(out, "\nChristoffel symbols Γ^k_ij (nonzero, i ≤ j)");
    for k in 0..d {
        for i in 0..d {
            for j in i..d {
                let v = frame.christoffel(k, i, j);
                if v.abs() > ZERO {
                    let _ = writeln!(out, "  Γ^{}_({},{}) = {:.12e}", name(k), name(i), name(j), v);
                }
            }
        }
    }
    let _ = writeln!(
        out,
        "\ncurvature R(a,b,c,e) = g(R(∂a,∂b)∂c,∂e) (nonzero, a < b, c < e, (a,b) ≤ (c,e))"
    );
    for a in 0..d {
        for b in (a + 1)..d {
            for c in a..d {
                for e in (c + 1)..d {
                    if (c, e) < (a, b) {
                        continue;
                    }
                    let v = frame.riemann_form(a, b, c, e);
                    if v.abs() > ZERO {
                        let _ = writeln!(
                            out,
                            "  R({},{},{},{}) = {:.12e}",
                            name(a),
                            name(b),
                            name(c),
                            name(e),
                            v
                        );
                    }
                }
            }
        }
    }
    let _ = writeln!(out, "\nRicci tensor Ric_ij");
    write_matrix(&mut out, &frame.ricci);
    let _ = writeln!(out, "\nscalar curvature {:.12e}", frame.scalar_curvature);
    let n = nilpotency_defect(&frame);
    let _ = writeln!(out, "max |Q²|         {:.12e}", n.square);
    if d >= 3 {
        let w = weyl(&frame)?.into_iter().fold(0.0, |m: f64, w| m.max(w.abs()));
        let _ = writeln!(out, "max |W|          {w:.12e}");
    }
    if let Ok(jet) = s.candidate.jet(&frame) {
        let x: &DVector<f64> = &jet.field.values;
        let comps: Vec<String> = x.iter().map(|v| format!("{v:.12e}")).collect();
        let _ = writeln!(out, "\ncandidate field  ({})", comps.join(", "));
        let _ = writeln!(out, "causal character {}", causal_character(&frame, x));
    }
    Ok(out)
}

fn write_matrix(out: &mut String, m: &nalgebra::DMatrix<f64>) {
    for i in 0..m.nrows() {
        let row: Vec<String> = (0..m.ncols()).map(|j| format!("{:>20.12e}", m[(i, j)])).collect();
        let _ = writeln!(out, "  {}", row.join(" "));
    }
}

/// Family constructors and their scenario keys.
pub const FAMILIES: &str = "\
egorov          g = du dv + f(u) Σ dx_i²
  [metric]      n, f (expression in u), domain = lo, hi (f > 1e-9 on it)
  particular    lambda, optional field_lambda, optional primitive (of Ric_uu)
  general       lambda, a, b, K, c0, c = c_1..c_n, k = k_1..k_n, A.i.j (skew)
  gradient      lambda = 0 (steady potential with h'' = -Ric_uu/2)

cahen_wallach   g = (Σ κ_i x_i²) du² + du dv + Σ dx_i²
  [metric]      kappa = κ_1..κ_n (non-zero), optional n
  particular    lambda, optional field_lambda
  general       lambda, a, b, c.i.j (skew, c_ij (κ_i − κ_j) = 0), d1, d2
  gradient      lambda = 0, alpha, beta (h = alpha + beta u + Σκ u²/4)

epsilon         cahen_wallach with every κ_i = ε
  [metric]      n, epsilon (non-zero)
  particular, general, gradient as for cahen_wallach

custom          arbitrary symmetric metric
  [metric]      coordinates = c1, c2, ...; g.<a>.<b> = expression
  [parameters]  name = value, usable in custom expressions

candidates on any metric:
  vector        lambda, X.<coord> = expression
  potential     lambda, h = expression
";
