//! Scenario files: a flat `key = value` format with `[section]` headers.
//!
//! ```text
//! name = optional-name          # before any section; defaults to the file stem
//! [metric]
//! family = egorov | cahen_wallach | epsilon | custom
//! [parameters]                  # named constants for custom expressions
//! [candidate]
//! kind = particular | general | gradient | vector | potential
//! lambda = 1
//! [sampling]
//! box.u = -1, 1
//! count = 100
//! seed = 42
//! [checks]
//! enable = residual, nilpotency
//! ```
//!
//! Blank lines and lines starting with `#` are ignored. Keys may appear once per
//! section and unknown sections or keys are errors. See the README for the
//! keys accepted by each family and candidate kind.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use nalgebra::DMatrix;

use super::CliError;
use crate::expr::{parse, Bindings, Chart, Expression};
use crate::families::{
    cw_general_soliton, cw_gradient_potential, cw_metric, cw_particular_soliton,
    egorov_general_soliton, egorov_gradient_potential, egorov_metric, egorov_particular_soliton,
    epsilon_params, CWGeneralConstants, CWParams, EgorovGeneralConstants,
    EgorovParams,
};
use crate::geometry::{MetricSpec, ScalarFieldSpec, VectorFieldSpec};
use crate::soliton::SolitonCandidate;

type Result<T> = std::result::Result<T, CliError>;

/// Verification checks a scenario may request.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Check {
    Residual,
    LambdaConsistency,
    Hamilton,
    Diagnostics,
    Nilpotency,
    Weyl,
    Bianchi,
    Signature,
    KillingDefect,
}

impl Check {
    pub const ALL: [Check; 9] = [
        Check::Residual,
        Check::LambdaConsistency,
        Check::Hamilton,
        Check::Diagnostics,
        Check::Nilpotency,
        Check::Weyl,
        Check::Bianchi,
        Check::Signature,
        Check::KillingDefect,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Check::Residual => "residual",
            Check::LambdaConsistency => "lambda_consistency",
            Check::Hamilton => "hamilton",
            Check::Diagnostics => "diagnostics",
            Check::Nilpotency => "nilpotency",
            Check::Weyl => "weyl",
            Check::Bianchi => "bianchi",
            Check::Signature => "signature",
            Check::KillingDefect => "killing_defect",
        }
    }

    pub fn from_name(name: &str) -> Option<Check> {
        Check::ALL.into_iter().find(|c| c.name() == name)
    }

    /// Checks that only make sense for gradient candidates.
    pub fn needs_potential(self) -> bool {
        matches!(self, Check::Hamilton | Check::Diagnostics)
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// The metric a scenario runs on.
#[derive(Debug, Clone)]
pub enum MetricFamily {
    Egorov(EgorovParams),
    CahenWallach(CWParams),
    Epsilon { epsilon: f64, params: CWParams },
    Custom,
}

impl MetricFamily {
    pub fn name(&self) -> &'static str {
        match self {
            MetricFamily::Egorov(_) => "egorov",
            MetricFamily::CahenWallach(_) => "cahen_wallach",
            MetricFamily::Epsilon { .. } => "epsilon",
            MetricFamily::Custom => "custom",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sampling {
    /// One `(lo, hi)` interval per chart coordinate.
    pub bounds: Vec<(f64, f64)>,
    pub count: usize,
    pub seed: u64,
}

/// A fully validated scenario, ready to sample and run.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub name: String,
    pub family: MetricFamily,
    pub metric: MetricSpec,
    pub candidate: SolitonCandidate,
    pub sampling: Sampling,
    /// Explicit tolerance; `None` selects the default for the candidate.
    pub tolerance: Option<f64>,
    pub checks: Vec<Check>,
    /// Constant `c` of the `killing_defect` check `𝓛_X g = c g`.
    pub homothety: f64,
}

impl Scenario {
    pub fn chart(&self) -> &Chart {
        self.metric.chart()
    }
}

/// Reads and validates a scenario file; the file stem names it unless a
/// top-level `name` key is present.
pub fn load_scenario(path: impl AsRef<Path>) -> Result<Scenario> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "scenario".to_string());
    parse_scenario(&text, &stem)
}

/// Parses scenario text; `default_name` is used when no `name` key is given.
pub fn parse_scenario(text: &str, default_name: &str) -> Result<Scenario> {
    let mut doc = Document::parse(text)?;
    let name = doc
        .take("", "name")
        .map(|e| e.value)
        .unwrap_or_else(|| default_name.to_string());

    let parameters = doc.parameters()?;
    let (family, metric) = doc.metric(&parameters)?;
    let candidate = doc.candidate(&family, &metric, &parameters)?;
    let sampling = doc.sampling(&family, metric.chart())?;
    let (checks, tolerance, homothety) = doc.checks()?;
    if !candidate.is_gradient() {
        if let Some(c) = checks.iter().find(|c| c.needs_potential()) {
            return Err(CliError::invalid(
                "checks",
                "enable",
                format!("`{c}` needs a gradient candidate (kind = gradient or potential)"),
            ));
        }
    }
    doc.finish()?;
    Ok(Scenario {
        name,
        family,
        metric,
        candidate,
        sampling,
        tolerance,
        checks,
        homothety,
    })
}

#[derive(Debug, Clone)]
struct Entry {
    value: String,
    line: usize,
}

const SECTIONS: [&str; 5] = ["metric", "parameters", "candidate", "sampling", "checks"];

/// Raw `section → key → value` map; keys are removed as they are consumed so
/// leftovers can be reported.
struct Document {
    sections: BTreeMap<String, BTreeMap<String, Entry>>,
}

impl Document {
    fn parse(text: &str) -> Result<Self> {
        let mut sections: BTreeMap<String, BTreeMap<String, Entry>> = BTreeMap::new();
        sections.insert(String::new(), BTreeMap::new());
        let mut current = String::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            if let Some(rest) = trimmed.strip_prefix('[') {
                let name = rest.strip_suffix(']').ok_or_else(|| CliError::Syntax {
                    line,
                    message: "unterminated section header".into(),
                })?;
                let name = name.trim();
                if !SECTIONS.contains(&name) {
                    return Err(CliError::Syntax {
                        line,
                        message: format!(
                            "unknown section [{name}]; expected one of {}",
                            SECTIONS.join(", ")
                        ),
                    });
                }
                if sections.contains_key(name) {
                    return Err(CliError::Syntax {
                        line,
                        message: format!("section [{name}] appears twice"),
                    });
                }
                sections.insert(name.to_string(), BTreeMap::new());
                current = name.to_string();
                continue;
            }
            let (key, value) = trimmed.split_once('=').ok_or_else(|| CliError::Syntax {
                line,
                message: format!("expected `key = value`, got `{trimmed}`"),
            })?;
            let key = key.trim();
            if key.is_empty() {
                return Err(CliError::Syntax {
                    line,
                    message: "empty key".into(),
                });
            }
            let section = sections.get_mut(&current).expect("current section exists");
            let entry = Entry {
                value: value.trim().to_string(),
                line,
            };
            if section.insert(key.to_string(), entry).is_some() {
                return Err(CliError::Syntax {
                    line,
                    message: format!("duplicate key `{key}`"),
                });
            }
        }
        Ok(Self { sections })
    }

    fn take(&mut self, section: &str, key: &str) -> Option<Entry> {
        self.sections.get_mut(section)?.remove(key)
    }

    fn require(&mut self, section: &str, key: &str) -> Result<Entry> {
        self.take(section, key).ok_or_else(|| CliError::Missing {
            section: section.to_string(),
            key: key.to_string(),
        })
    }

    /// Removes and returns every key in `section` starting with `prefix`.
    fn take_prefixed(&mut self, section: &str, prefix: &str) -> Vec<(String, Entry)> {
        let Some(map) = self.sections.get_mut(section) else {
            return Vec::new();
        };
        let keys: Vec<String> = map
            .keys()
            .filter(|k| k.starts_with(prefix))
            .cloned()
            .collect();
        keys.into_iter()
            .map(|k| {
                let e = map.remove(&k).expect("key listed above");
                (k[prefix.len()..].to_string(), e)
            })
            .collect()
    }

    fn number(&mut self, section: &str, key: &str) -> Result<Option<f64>> {
        self.take(section, key)
            .map(|e| parse_number(section, key, &e.value))
            .transpose()
    }

    fn required_number(&mut self, section: &str, key: &str) -> Result<f64> {
        let e = self.require(section, key)?;
        parse_number(section, key, &e.value)
    }

    fn list(&mut self, section: &str, key: &str) -> Result<Option<Vec<f64>>> {
        self.take(section, key)
            .map(|e| parse_list(section, key, &e.value))
            .transpose()
    }

    fn finish(self) -> Result<()> {
        for (section, map) in &self.sections {
            if let Some((key, entry)) = map.iter().next() {
                let location = if section.is_empty() {
                    "top level".to_string()
                } else {
                    format!("[{section}]")
                };
                return Err(CliError::Syntax {
                    line: entry.line,
                    message: format!("unknown key `{key}` in {location}"),
                });
            }
        }
        Ok(())
    }

    fn parameters(&mut self) -> Result<Bindings> {
        let mut out = Bindings::new();
        for (key, entry) in self.take_prefixed("parameters", "") {
            let value = parse_number("parameters", &key, &entry.value)?;
            out.insert(key, value);
        }
        Ok(out)
    }

    fn metric(&mut self, parameters: &Bindings) -> Result<(MetricFamily, MetricSpec)> {
        let family = self.require("metric", "family")?.value;
        let n = self
            .take("metric", "n")
            .map(|e| parse_count("metric", "n", &e.value))
            .transpose()?;
        match family.as_str() {
            "egorov" => {
                let n = n.ok_or_else(|| CliError::Missing {
                    section: "metric".into(),
                    key: "n".into(),
                })?;
                let f = self.require("metric", "f")?.value;
                let domain = self.require("metric", "domain")?;
                let (lo, hi) = parse_interval("metric", "domain", &domain.value)?;
                let params = EgorovParams::parse(n, &f, (lo, hi))?;
                let metric = egorov_metric(&params)?;
                Ok((MetricFamily::Egorov(params), metric))
            }
            "cahen_wallach" => {
                let kappa = self.list("metric", "kappa")?.ok_or_else(|| CliError::Missing {
                    section: "metric".into(),
                    key: "kappa".into(),
                })?;
                if let Some(n) = n {
                    if n != kappa.len() {
                        return Err(CliError::invalid(
                            "metric",
                            "kappa",
                            format!("n = {n} but {} values given", kappa.len()),
                        ));
                    }
                }
                let params = CWParams::new(kappa)?;
                let metric = cw_metric(&params)?;
                Ok((MetricFamily::CahenWallach(params), metric))
            }
            "epsilon" => {
                let n = n.ok_or_else(|| CliError::Missing {
                    section: "metric".into(),
                    key: "n".into(),
                })?;
                let epsilon = self.required_number("metric", "epsilon")?;
                let params = epsilon_params(n, epsilon)?;
                let metric = cw_metric(&params)?;
                Ok((MetricFamily::Epsilon { epsilon, params }, metric))
            }
            "custom" => {
                let coords = self.require("metric", "coordinates")?.value;
                let names: Vec<&str> = coords.split(',').map(str::trim).collect();
                let chart = Chart::new(&names)?;
                let d = chart.dim();
                let names: Vec<String> = parameters.keys().cloned().collect();
                let mut rows = vec![vec![Expression::zero(); d]; d];
                let mut seen = vec![vec![false; d]; d];
                for (key, entry) in self.take_prefixed("metric", "g.") {
                    let (a, b) = key.split_once('.').ok_or_else(|| {
                        CliError::invalid("metric", &format!("g.{key}"), "expected g.<coord>.<coord>")
                    })?;
                    let (i, j) = (chart.index_of(a)?, chart.index_of(b)?);
                    if seen[i][j] {
                        return Err(CliError::invalid(
                            "metric",
                            &format!("g.{key}"),
                            "entry given twice (g is symmetric)",
                        ));
                    }
                    let e = parse(&entry.value, &chart, &names)?;
                    rows[i][j] = e.clone();
                    rows[j][i] = e;
                    seen[i][j] = true;
                    seen[j][i] = true;
                }
                let metric = MetricSpec::new(chart, rows, parameters.clone())
                    ?;
                Ok((MetricFamily::Custom, metric))
            }
            other => Err(CliError::invalid(
                "metric",
                "family",
                format!("unknown family `{other}`; expected egorov, cahen_wallach, epsilon or custom"),
            )),
        }
    }

    fn candidate(
        &mut self,
        family: &MetricFamily,
        metric: &MetricSpec,
        parameters: &Bindings,
    ) -> Result<SolitonCandidate> {
        const S: &str = "candidate";
        let kind = self.require(S, "kind")?.value;
        let lambda = self.required_number(S, "lambda")?;
        let field_lambda = self.number(S, "field_lambda")?;
        if field_lambda.is_some() && !matches!(kind.as_str(), "particular" | "general") {
            return Err(CliError::invalid(
                S,
                "field_lambda",
                "only particular and general candidates are built from a lambda",
            ));
        }
        let build_lambda = field_lambda.unwrap_or(lambda);
        let chart = metric.chart();
        let n = chart.dim().saturating_sub(2);
        let names: Vec<String> = parameters.keys().cloned().collect();
        let family_only = |kind: &str| {
            CliError::invalid(S, "kind", format!("`{kind}` needs a family metric, not custom"))
        };

        let candidate = match (kind.as_str(), family) {
            ("particular", MetricFamily::Egorov(p)) => {
                let primitive = self
                    .take(S, "primitive")
                    .map(|e| parse(&e.value, p.chart(), &[] as &[&str]))
                    .transpose()?;
                egorov_particular_soliton(p, build_lambda, primitive)?
            }
            ("particular", MetricFamily::CahenWallach(p) | MetricFamily::Epsilon { params: p, .. }) => {
                cw_particular_soliton(p, build_lambda)?
            }
            ("general", MetricFamily::Egorov(p)) => {
                let mut k = EgorovGeneralConstants::zero(n);
                k.a = self.number(S, "a")?.unwrap_or(0.0);
                k.b = self.number(S, "b")?.unwrap_or(0.0);
                k.quadratic = self.number(S, "K")?.unwrap_or(0.0);
                k.c0 = self.number(S, "c0")?.unwrap_or(0.0);
                if let Some(c) = self.list(S, "c")? {
                    k.c = c;
                }
                if let Some(kk) = self.list(S, "k")? {
                    k.k = kk;
                }
                k.rotation = self.skew_matrix(S, "A", n)?;
                egorov_general_soliton(p, build_lambda, &k)?
            }
            ("general", MetricFamily::CahenWallach(p) | MetricFamily::Epsilon { params: p, .. }) => {
                let mut k = CWGeneralConstants::zero(n);
                k.a = self.number(S, "a")?.unwrap_or(0.0);
                k.b = self.number(S, "b")?.unwrap_or(0.0);
                k.c = self.skew_matrix(S, "c", n)?;
                if let Some(d1) = self.list(S, "d1")? {
                    k.d1 = d1;
                }
                if let Some(d2) = self.list(S, "d2")? {
                    k.d2 = d2;
                }
                cw_general_soliton(p, build_lambda, &k)?
            }
            ("gradient", MetricFamily::Egorov(p)) => egorov_gradient_potential(p, lambda)?,
            ("gradient", MetricFamily::CahenWallach(p) | MetricFamily::Epsilon { params: p, .. }) => {
                let alpha = self.number(S, "alpha")?.unwrap_or(0.0);
                let beta = self.number(S, "beta")?.unwrap_or(0.0);
                cw_gradient_potential(p, alpha, beta, lambda)?
            }
            ("particular" | "general" | "gradient", MetricFamily::Custom) => {
                return Err(family_only(&kind))
            }
            ("vector", _) => {
                let mut comps = vec![Expression::zero(); chart.dim()];
                for (coord, entry) in self.take_prefixed(S, "X.") {
                    let i = chart.index_of(&coord)?;
                    comps[i] = parse(&entry.value, chart, &names)?;
                }
                let x = VectorFieldSpec::new(chart.clone(), comps, parameters.clone())
                    ?;
                SolitonCandidate::vector(x, lambda)?
            }
            ("potential", _) => {
                let h = self.require(S, "h")?;
                let h = parse(&h.value, chart, &names)?;
                let h = ScalarFieldSpec::new(chart.clone(), h, parameters.clone())
                    ?;
                SolitonCandidate::gradient(h, lambda)?
            }
            (other, _) => {
                return Err(CliError::invalid(
                    S,
                    "kind",
                    format!(
                        "unknown kind `{other}`; expected particular, general, gradient, vector or potential"
                    ),
                ))
            }
        };
        Ok(candidate.with_lambda(lambda)?)
    }

    /// `prefix.i.j = value` sets entry `(i, j)` and its negative at `(j, i)`;
    /// indices are 1-based.
    fn skew_matrix(&mut self, section: &str, prefix: &str, n: usize) -> Result<DMatrix<f64>> {
        let mut m = DMatrix::zeros(n, n);
        for (key, entry) in self.take_prefixed(section, &format!("{prefix}.")) {
            let full = format!("{prefix}.{key}");
            let bad = || CliError::invalid(section, &full, format!("expected {prefix}.<i>.<j> with 1 ≤ i < j ≤ {n}"));
            let (i, j) = key.split_once('.').ok_or_else(bad)?;
            let (i, j): (usize, usize) = (i.parse().map_err(|_| bad())?, j.parse().map_err(|_| bad())?);
            if !(1 <= i && i < j && j <= n) {
                return Err(bad());
            }
            let v = parse_number(section, &full, &entry.value)?;
            m[(i - 1, j - 1)] = v;
            m[(j - 1, i - 1)] = -v;
        }
        Ok(m)
    }

    fn sampling(&mut self, family: &MetricFamily, chart: &Chart) -> Result<Sampling> {
        const S: &str = "sampling";
        let mut bounds = vec![(-1.0, 1.0); chart.dim()];
        for (coord, entry) in self.take_prefixed(S, "box.") {
            let i = chart.index_of(&coord)?;
            bounds[i] = parse_interval(S, &format!("box.{coord}"), &entry.value)?;
        }
        if let MetricFamily::Egorov(p) = family {
            let (lo, hi) = bounds[0];
            let (dlo, dhi) = p.u_domain();
            if lo < dlo || hi > dhi {
                return Err(CliError::invalid(
                    S,
                    "box.u",
                    format!("u-interval ({lo}, {hi}) leaves the declared domain ({dlo}, {dhi})"),
                ));
            }
        }
        let count = self
            .take(S, "count")
            .map(|e| parse_count(S, "count", &e.value))
            .transpose()?
            .unwrap_or(DEFAULT_COUNT);
        if count == 0 {
            return Err(CliError::invalid(S, "count", "must be at least 1"));
        }
        let seed = self
            .take(S, "seed")
            .map(|e| {
                e.value
                    .parse::<u64>()
                    .map_err(|_| CliError::invalid(S, "seed", format!("`{}` is not a 64-bit unsigned integer", e.value)))
            })
            .transpose()?
            .unwrap_or(0);
        Ok(Sampling {
            bounds,
            count,
            seed,
        })
    }

    fn checks(&mut self) -> Result<(Vec<Check>, Option<f64>, f64)> {
        const S: &str = "checks";
        let enable = self.require(S, "enable")?;
        let mut checks = Vec::new();
        for name in enable.value.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let check = Check::from_name(name).ok_or_else(|| CliError::UnknownCheck(name.to_string()))?;
            if !checks.contains(&check) {
                checks.push(check);
            }
        }
        if checks.is_empty() {
            return Err(CliError::invalid(S, "enable", "no checks listed"));
        }
        let tolerance = self.number(S, "tolerance")?;
        if let Some(t) = tolerance {
            check_tolerance(t)?;
        }
        let homothety = self.number(S, "homothety")?.unwrap_or(0.0);
        Ok((checks, tolerance, homothety))
    }
}

/// Default number of sample points.
pub const DEFAULT_COUNT: usize = 100;

pub(crate) fn check_tolerance(t: f64) -> Result<()> {
    if !(t.is_finite() && t > 0.0) {
        return Err(CliError::invalid("checks", "tolerance", format!("must be positive, got {t}")));
    }
    Ok(())
}

fn parse_number(section: &str, key: &str, text: &str) -> Result<f64> {
    match text.trim().parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(CliError::invalid(section, key, format!("`{}` is not a finite number", text.trim()))),
    }
}

fn parse_count(section: &str, key: &str, text: &str) -> Result<usize> {
    text.trim()
        .parse::<usize>()
        .map_err(|_| CliError::invalid(section, key, format!("`{}` is not a non-negative integer", text.trim())))
}

fn parse_list(section: &str, key: &str, text: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(|item| parse_number(section, key, item))
        .collect()
}

fn parse_interval(section: &str, key: &str, text: &str) -> Result<(f64, f64)> {
    let values = parse_list(section, key, text)?;
    match values[..] {
        [lo, hi] if lo < hi => Ok((lo, hi)),
        [lo, hi] => Err(CliError::invalid(section, key, format!("empty interval ({lo}, {hi})"))),
        _ => Err(CliError::invalid(section, key, "expected `lo, hi`")),
    }
}
