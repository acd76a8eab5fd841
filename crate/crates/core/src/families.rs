//! Egorov, Cahen–Wallach and ε-space metrics on `ℝ^{n+2}` with coordinates
//! `(u, v, x1, …, xn)`, and the soliton fields and potentials they carry.
//!
//! The cross term `du dv` is realized as `g(∂_u, ∂_v) = 1`.
//!
//! Integrals in `u` are [`Node::Antiderivative`](crate::expr::Node) nodes based at the
//! midpoint of the Egorov `u`-domain; the free additive constants of the
//! general solutions absorb the choice of base point.

use nalgebra::DMatrix;
use thiserror::Error;

use crate::expr::{parse, sum, Bindings, Chart, ExprError, Expression, Point};
use crate::geometry::{GeometryError, MetricSpec, ScalarFieldSpec, VectorFieldSpec};
use crate::soliton::{SolitonCandidate, SolitonError};

/// Largest supported `n` (so `d = n + 2 ≤ 14`).
pub const MAX_N: usize = 12;
/// Egorov `f` must exceed this on its domain.
pub const POSITIVITY_FLOOR: f64 = 1e-9;
/// Number of equispaced probes used to validate conditions in `u`.
pub const PROBES: usize = 1000;
/// Tolerance of probe-based identities in `u` (primitives, the `4K` constraint).
pub const PROBE_TOLERANCE: f64 = 1e-8;
/// Tolerance of exact constant relations (skewness, `c_ij(κ_i − κ_j) = 0`).
pub const EXACT_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FamilyError {
    #[error("n must be in 1..={MAX_N}, got {0}")]
    Dimension(usize),
    #[error("invalid u-domain ({0}, {1})")]
    Domain(f64, f64),
    #[error("f must be a function of u alone")]
    NotFunctionOfU,
    #[error("f = {value:e} ≤ {POSITIVITY_FLOOR:e} at u = {u}")]
    NotPositive { u: f64, value: f64 },
    #[error("kappa_{index} must be a non-zero real number, got {value}")]
    Kappa { index: usize, value: f64 },
    #[error("epsilon must be non-zero and finite, got {0}")]
    Epsilon(f64),
    #[error("expected {expected} values for `{what}`, got {got}")]
    Shape {
        what: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("`{what}` is not skew-symmetric (max |M + Mᵀ| = {max:e})")]
    NotSkew { what: &'static str, max: f64 },
    #[error("constraint b f' + (a + b u)(f'' − f'²/f) = 4K violated by {max_violation:e} at u = {at_u}")]
    EgorovConstraint { max_violation: f64, at_u: f64 },
    #[error("c_ij (kappa_i − kappa_j) ≠ 0 at {0:?}")]
    KappaCoupling(Vec<(usize, usize, f64)>),
    #[error("primitive derivative differs from Ric_uu by {max:e} at u = {at_u}")]
    PrimitiveMismatch { max: f64, at_u: f64 },
    #[error("gradient solitons in this family are steady; lambda = {0} requested")]
    NonSteadyGradient(f64),
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Soliton(#[from] SolitonError),
}

pub type Result<T> = std::result::Result<T, FamilyError>;

/// Chart `(u, v, x1, …, xn)`.
pub fn walker_chart(n: usize) -> Result<Chart> {
    check_n(n)?;
    let mut names = vec!["u".to_string(), "v".to_string()];
    names.extend((1..=n).map(|i| format!("x{i}")));
    Ok(Chart::new(&names)?)
}

const U: usize = 0;
const V: usize = 1;

fn x_index(i: usize) -> usize {
    2 + i
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 || n > MAX_N {
        return Err(FamilyError::Dimension(n));
    }
    Ok(())
}

fn check_len(what: &'static str, expected: usize, got: usize) -> Result<()> {
    if expected != got {
        return Err(FamilyError::Shape {
            what,
            expected,
            got,
        });
    }
    Ok(())
}

fn check_skew(what: &'static str, m: &DMatrix<f64>) -> Result<()> {
    let max = (m + m.transpose()).amax();
    if max > EXACT_TOLERANCE {
        return Err(FamilyError::NotSkew { what, max });
    }
    Ok(())
}

fn c(value: f64) -> Expression {
    Expression::constant(value)
}

/// Parameters of an Egorov metric `du dv + f(u) Σ dx_i²`.
#[derive(Debug, Clone)]
pub struct EgorovParams {
    n: usize,
    chart: Chart,
    f: Expression,
    df: Expression,
    d2f: Expression,
    u_domain: (f64, f64),
}

impl EgorovParams {
    /// `f` must be built on [`walker_chart`]`(n)`, depend only on `u`, and stay
    /// above [`POSITIVITY_FLOOR`] on [`PROBES`] interior probes of `u_domain`.
    pub fn new(n: usize, f: Expression, u_domain: (f64, f64)) -> Result<Self> {
        let chart = walker_chart(n)?;
        let (lo, hi) = u_domain;
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(FamilyError::Domain(lo, hi));
        }
        if f.max_coordinate().is_some_and(|i| i != U)
            || (1..chart.dim()).any(|i| f.depends_on(i))
            || !f.parameters().is_empty()
        {
            return Err(FamilyError::NotFunctionOfU);
        }
        let df = f.differentiate(U);
        let d2f = df.differentiate(U);
        let params = Self {
            n,
            chart,
            f,
            df,
            d2f,
            u_domain,
        };
        for u in params.probes() {
            let value = params.eval_u(&params.f, u)?;
            if !(value > POSITIVITY_FLOOR) {
                return Err(FamilyError::NotPositive { u, value });
            }
        }
        Ok(params)
    }

    /// Parses `f` from text on the Egorov chart.
    pub fn parse(n: usize, f: &str, u_domain: (f64, f64)) -> Result<Self> {
        let chart = walker_chart(n)?;
        let f = parse(f, &chart, &[] as &[&str])?;
        Self::new(n, f, u_domain)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn f(&self) -> &Expression {
        &self.f
    }

    pub fn u_domain(&self) -> (f64, f64) {
        self.u_domain
    }

    /// Base point of the antiderivatives.
    pub fn u_mid(&self) -> f64 {
        0.5 * (self.u_domain.0 + self.u_domain.1)
    }

    /// Interior probe abscissae `lo + (k + ½)(hi − lo)/PROBES`.
    pub fn probes(&self) -> impl Iterator<Item = f64> {
        let (lo, hi) = self.u_domain;
        (0..PROBES).map(move |k| lo + (k as f64 + 0.5) * (hi - lo) / PROBES as f64)
    }

    fn eval_u(&self, e: &Expression, u: f64) -> Result<f64> {
        let mut coords = vec![0.0; self.chart.dim()];
        coords[U] = u;
        Ok(e.evaluate(&Point::new(coords)?, &Bindings::new())?)
    }

    fn u(&self) -> Expression {
        self.chart.coord_at(U)
    }

    /// `Ric_uu = n/(4f²)·((f')² − 2 f f'')`, built symbolically.
    pub fn ricci_uu(&self) -> Expression {
        let n = self.n as f64;
        let bracket = self.df.powi(2) - c(2.0) * self.f.clone() * self.d2f.clone();
        (c(n) / (c(4.0) * self.f.powi(2)) * bracket).simplify()
    }

    /// `(f')² − 2 f f''`; identically zero exactly for the flat members.
    pub fn flatness_bracket(&self) -> Expression {
        (self.df.powi(2) - c(2.0) * self.f.clone() * self.d2f.clone()).simplify()
    }

    fn antiderivative_u(&self, integrand: Expression) -> Result<Expression> {
        Ok(Expression::antiderivative(&self.chart, integrand, U, self.u_mid())?.simplify())
    }

    fn coords(&self) -> Vec<Expression> {
        (0..self.chart.dim()).map(|i| self.chart.coord_at(i)).collect()
    }
}

/// `g = du dv + f(u) Σ dx_i²`.
pub fn egorov_metric(params: &EgorovParams) -> Result<MetricSpec> {
    let mut entries = vec![(U, V, Expression::one())];
    for i in 0..params.n {
        entries.push((x_index(i), x_index(i), params.f.clone()));
    }
    Ok(MetricSpec::from_entries(
        params.chart.clone(),
        &entries,
        Bindings::new(),
    )?)
}

/// `X = (−½ ∫Ric_uu du + λ v) ∂_v + Σ (λ/2) x_i ∂_i`.
///
/// `primitive`, when supplied, is used for `∫Ric_uu du` after checking that its
/// derivative matches `Ric_uu` on the probes; otherwise an antiderivative node is
/// used.
pub fn egorov_particular_soliton(
    params: &EgorovParams,
    lambda: f64,
    primitive: Option<Expression>,
) -> Result<SolitonCandidate> {
    let ric = params.ricci_uu();
    let primitive = match primitive {
        Some(p) => {
            if (1..params.chart.dim()).any(|i| p.depends_on(i)) || p.max_coordinate().is_some_and(|i| i >= params.chart.dim()) {
                return Err(FamilyError::NotFunctionOfU);
            }
            let dp = p.differentiate(U);
            let mut worst = (0.0f64, params.u_domain.0);
            for u in params.probes() {
                let gap = (params.eval_u(&dp, u)? - params.eval_u(&ric, u)?).abs();
                if !(gap <= worst.0) {
                    worst = (gap, u);
                }
            }
            if !(worst.0 <= PROBE_TOLERANCE) {
                return Err(FamilyError::PrimitiveMismatch {
                    max: worst.0,
                    at_u: worst.1,
                });
            }
            p
        }
        None => params.antiderivative_u(ric)?,
    };
    let x = params.coords();
    let mut comps = vec![Expression::zero(); params.chart.dim()];
    comps[V] = (c(-0.5) * primitive + c(lambda) * x[V].clone()).simplify();
    for i in 0..params.n {
        comps[x_index(i)] = (c(lambda / 2.0) * x[x_index(i)].clone()).simplify();
    }
    let field = VectorFieldSpec::new(params.chart.clone(), comps, Bindings::new())?;
    Ok(SolitonCandidate::vector(field, lambda)?)
}

/// Free constants of the general Egorov soliton.
#[derive(Debug, Clone, PartialEq)]
pub struct EgorovGeneralConstants {
    pub a: f64,
    pub b: f64,
    /// Coefficient `K` of `Σ x_i²` in `X_v`.
    pub quadratic: f64,
    pub c0: f64,
    pub c: Vec<f64>,
    pub k: Vec<f64>,
    /// Skew-symmetric `n×n` rotation block `A`.
    pub rotation: DMatrix<f64>,
}

impl EgorovGeneralConstants {
    pub fn zero(n: usize) -> Self {
        Self {
            a: 0.0,
            b: 0.0,
            quadratic: 0.0,
            c0: 0.0,
            c: vec![0.0; n],
            k: vec![0.0; n],
            rotation: DMatrix::zeros(n, n),
        }
    }
}

/// Largest `|b f' + (a + b u)(f'' − f'²/f) − 4K|` over the probes, with its location.
pub fn egorov_constraint_violation(
    params: &EgorovParams,
    a: f64,
    b: f64,
    quadratic: f64,
) -> Result<(f64, f64)> {
    let u = params.u();
    let f = params.f.clone();
    let lhs = c(b) * params.df.clone()
        + (c(a) + c(b) * u) * (params.d2f.clone() - params.df.powi(2) / f);
    let expr = (lhs - c(4.0 * quadratic)).simplify();
    let mut worst = (0.0f64, params.u_domain.0);
    for u in params.probes() {
        let v = params.eval_u(&expr, u)?.abs();
        if !(v <= worst.0) {
            worst = (v, u);
        }
    }
    Ok(worst)
}

/// The general soliton field of an Egorov space:
///
/// ```text
/// X_u = a + b u
/// X_v = c0 + (λ − b) v − ½ ∫Ric_uu du + Σ k_i x_i + K Σ x_i²
/// X_i = c_i − ∫ k_i/f du + (λ/2 − (a + b u) f'/(2f)) x_i + Σ_{j≠i} A_ij x_j
/// ```
///
/// with `b f' + (a + b u)(f'' − f'²/f) = 4K` on the whole `u`-domain.
pub fn egorov_general_soliton(
    params: &EgorovParams,
    lambda: f64,
    k: &EgorovGeneralConstants,
) -> Result<SolitonCandidate> {
    let n = params.n;
    check_len("c", n, k.c.len())?;
    check_len("k", n, k.k.len())?;
    check_len("rotation rows", n, k.rotation.nrows())?;
    check_len("rotation columns", n, k.rotation.ncols())?;
    check_skew("rotation", &k.rotation)?;
    let (max_violation, at_u) = egorov_constraint_violation(params, k.a, k.b, k.quadratic)?;
    if !(max_violation <= PROBE_TOLERANCE) {
        return Err(FamilyError::EgorovConstraint {
            max_violation,
            at_u,
        });
    }

    let x = params.coords();
    let u = params.u();
    let xs: Vec<Expression> = (0..n).map(|i| x[x_index(i)].clone()).collect();
    let affine_u = c(k.a) + c(k.b) * u;

    let mut comps = vec![Expression::zero(); params.chart.dim()];
    comps[U] = affine_u.simplify();
    let ric_primitive = params.antiderivative_u(params.ricci_uu())?;
    comps[V] = sum([
        c(k.c0),
        c(lambda - k.b) * x[V].clone(),
        c(-0.5) * ric_primitive,
        sum((0..n).map(|i| c(k.k[i]) * xs[i].clone())),
        c(k.quadratic) * sum(xs.iter().map(|xi| xi.powi(2))),
    ])
    .simplify();
    let stretch = c(lambda / 2.0) - affine_u * params.df.clone() / (c(2.0) * params.f.clone());
    for i in 0..n {
        let drift = if k.k[i] == 0.0 {
            Expression::zero()
        } else {
            params.antiderivative_u(c(k.k[i]) / params.f.clone())?
        };
        let rotation = sum(
            (0..n)
                .filter(|&j| j != i)
                .map(|j| c(k.rotation[(i, j)]) * xs[j].clone()),
        );
        comps[x_index(i)] =
            sum([c(k.c[i]), -drift, stretch.clone() * xs[i].clone(), rotation]).simplify();
    }
    let field = VectorFieldSpec::new(params.chart.clone(), comps, Bindings::new())?;
    Ok(SolitonCandidate::vector(field, lambda)?)
}

/// Steady gradient potential `h(u)` with `h'' = −½ Ric_uu`.
///
/// Written as `h(u) = u·∫_m^u g − ∫_m^u t·g(t) dt` for `g = −½ Ric_uu`, which needs
/// only single antiderivatives (`h' = ∫_m^u g`, `h'' = g`). Only `λ = 0` exists on
/// these spaces; other values are rejected.
pub fn egorov_gradient_potential(params: &EgorovParams, lambda: f64) -> Result<SolitonCandidate> {
    if lambda != 0.0 {
        return Err(FamilyError::NonSteadyGradient(lambda));
    }
    let u = params.u();
    let g = (c(-0.5) * params.ricci_uu()).simplify();
    let h = (u.clone() * params.antiderivative_u(g.clone())? - params.antiderivative_u(u * g)?)
        .simplify();
    let h = ScalarFieldSpec::new(params.chart.clone(), h, Bindings::new())?;
    Ok(SolitonCandidate::gradient(h, 0.0)?)
}

/// Parameters of a Cahen–Wallach metric `(Σ κ_i x_i²) du² + du dv + Σ dx_i²`.
#[derive(Debug, Clone, PartialEq)]
pub struct CWParams {
    kappa: Vec<f64>,
    chart: Chart,
}

impl CWParams {
    pub fn new(kappa: Vec<f64>) -> Result<Self> {
        let chart = walker_chart(kappa.len())?;
        if let Some((index, &value)) = kappa
            .iter()
            .enumerate()
            .find(|(_, k)| !(k.is_finite() && **k != 0.0))
        {
            return Err(FamilyError::Kappa { index, value });
        }
        Ok(Self { kappa, chart })
    }

    pub fn n(&self) -> usize {
        self.kappa.len()
    }

    pub fn kappa(&self) -> &[f64] {
        &self.kappa
    }

    pub fn kappa_sum(&self) -> f64 {
        self.kappa.iter().sum()
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    fn coords(&self) -> Vec<Expression> {
        (0..self.chart.dim()).map(|i| self.chart.coord_at(i)).collect()
    }

    /// `Σ κ_i x_i²`
    pub fn g_uu(&self) -> Expression {
        let x = self.coords();
        sum(self
            .kappa
            .iter()
            .enumerate()
            .map(|(i, &k)| c(k) * x[x_index(i)].powi(2)))
        .simplify()
    }
}

pub fn cw_metric(params: &CWParams) -> Result<MetricSpec> {
    let mut entries = vec![(U, U, params.g_uu()), (U, V, Expression::one())];
    for i in 0..params.n() {
        entries.push((x_index(i), x_index(i), Expression::one()));
    }
    Ok(MetricSpec::from_entries(
        params.chart.clone(),
        &entries,
        Bindings::new(),
    )?)
}

/// `X = (0, ½(Σκ_i) u + λ v, (λ/2) x_1, …, (λ/2) x_n)`.
pub fn cw_particular_soliton(params: &CWParams, lambda: f64) -> Result<SolitonCandidate> {
    cw_general_soliton(params, lambda, &CWGeneralConstants::zero(params.n()))
}

/// Free constants of the general Cahen–Wallach soliton.
#[derive(Debug, Clone, PartialEq)]
pub struct CWGeneralConstants {
    pub a: f64,
    pub b: f64,
    /// Skew-symmetric `n×n` matrix with `c_ij (κ_i − κ_j) = 0`.
    pub c: DMatrix<f64>,
    /// Coefficients of `e^{−u√κ}` (κ > 0) or `sin(u√−κ)` (κ < 0).
    pub d1: Vec<f64>,
    /// Coefficients of `e^{u√κ}` (κ > 0) or `cos(u√−κ)` (κ < 0).
    pub d2: Vec<f64>,
}

impl CWGeneralConstants {
    pub fn zero(n: usize) -> Self {
        Self {
            a: 0.0,
            b: 0.0,
            c: DMatrix::zeros(n, n),
            d1: vec![0.0; n],
            d2: vec![0.0; n],
        }
    }
}

/// Solution of `h'' = κ h` with the given basis coefficients.
pub fn cw_mode(chart: &Chart, kappa: f64, d1: f64, d2: f64) -> Expression {
    let u = chart.coord_at(U);
    let root = kappa.abs().sqrt();
    let e = if kappa > 0.0 {
        c(d1) * (c(-root) * u.clone()).exp() + c(d2) * (c(root) * u).exp()
    } else {
        c(d1) * (c(root) * u.clone()).sin() + c(d2) * (c(root) * u).cos()
    };
    e.simplify()
}

fn check_coupling(kappa: &[f64], m: &DMatrix<f64>) -> Result<()> {
    let n = kappa.len();
    let mut bad = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let v = m[(i, j)] * (kappa[i] - kappa[j]);
            if i != j && v.abs() > EXACT_TOLERANCE {
                bad.push((i + 1, j + 1, v));
            }
        }
    }
    if bad.is_empty() {
        Ok(())
    } else {
        Err(FamilyError::KappaCoupling(bad))
    }
}

/// The general soliton field of a Cahen–Wallach space:
///
/// ```text
/// X_u = a
/// X_v = b + λ v + (Σκ_i) u/2 − Σ x_i h_i'(u)
/// X_j = (λ/2) x_j + h_j(u) + Σ_{i≠j} c_ij x_i
/// ```
///
/// with `h_i'' = κ_i h_i`.
pub fn cw_general_soliton(
    params: &CWParams,
    lambda: f64,
    k: &CWGeneralConstants,
) -> Result<SolitonCandidate> {
    let n = params.n();
    check_len("c rows", n, k.c.nrows())?;
    check_len("c columns", n, k.c.ncols())?;
    check_len("d1", n, k.d1.len())?;
    check_len("d2", n, k.d2.len())?;
    check_skew("c", &k.c)?;
    check_coupling(&params.kappa, &k.c)?;

    let x = params.coords();
    let modes: Vec<Expression> = (0..n)
        .map(|i| cw_mode(&params.chart, params.kappa[i], k.d1[i], k.d2[i]))
        .collect();
    let mut comps = vec![Expression::zero(); params.chart.dim()];
    comps[U] = c(k.a);
    comps[V] = sum([
        c(k.b),
        c(lambda) * x[V].clone(),
        c(0.5 * params.kappa_sum()) * x[U].clone(),
        -sum((0..n).map(|i| x[x_index(i)].clone() * modes[i].differentiate(U))),
    ])
    .simplify();
    for j in 0..n {
        let rotation = sum(
            (0..n)
                .filter(|&i| i != j)
                .map(|i| c(k.c[(i, j)]) * x[x_index(i)].clone()),
        );
        comps[x_index(j)] = sum([
            c(lambda / 2.0) * x[x_index(j)].clone(),
            modes[j].clone(),
            rotation,
        ])
        .simplify();
    }
    let field = VectorFieldSpec::new(params.chart.clone(), comps, Bindings::new())?;
    Ok(SolitonCandidate::vector(field, lambda)?)
}

/// Steady potential `h(u) = α + β u + ¼ (Σκ_i) u²`; only `λ = 0` is accepted.
pub fn cw_gradient_potential(
    params: &CWParams,
    alpha: f64,
    beta: f64,
    lambda: f64,
) -> Result<SolitonCandidate> {
    if lambda != 0.0 {
        return Err(FamilyError::NonSteadyGradient(lambda));
    }
    let u = params.chart.coord_at(U);
    let h = sum([
        c(alpha),
        c(beta) * u.clone(),
        c(0.25 * params.kappa_sum()) * u.powi(2),
    ])
    .simplify();
    let h = ScalarFieldSpec::new(params.chart.clone(), h, Bindings::new())?;
    Ok(SolitonCandidate::gradient(h, 0.0)?)
}

/// Rotation field `X_j = Σ_{i≠j} c_ij x_i` for skew `c`.
///
/// Killing on flat-transverse metrics whenever `c_ij (κ_i − κ_j) = 0`; on
/// ε-spaces every skew `c` qualifies.
pub fn rotation_field(chart: &Chart, c_skew: &DMatrix<f64>) -> Result<VectorFieldSpec> {
    let n = chart.dim() - 2;
    check_len("c rows", n, c_skew.nrows())?;
    check_len("c columns", n, c_skew.ncols())?;
    check_skew("c", c_skew)?;
    let mut comps = vec![Expression::zero(); chart.dim()];
    for j in 0..n {
        comps[x_index(j)] = sum(
            (0..n)
                .filter(|&i| i != j)
                .map(|i| c(c_skew[(i, j)]) * chart.coord_at(x_index(i))),
        )
        .simplify();
    }
    Ok(VectorFieldSpec::new(chart.clone(), comps, Bindings::new())?)
}

/// Cahen–Wallach parameters with `κ_1 = ⋯ = κ_n = ε`.
///
/// Any non-zero real `ε` is accepted; `±1` are the normalized representatives.
pub fn epsilon_params(n: usize, epsilon: f64) -> Result<CWParams> {
    check_n(n)?;
    if !(epsilon.is_finite() && epsilon != 0.0) {
        return Err(FamilyError::Epsilon(epsilon));
    }
    CWParams::new(vec![epsilon; n])
}

/// `ε Σ x_i² du² + du dv + Σ dx_i²`.
pub fn epsilon_metric(n: usize, epsilon: f64) -> Result<MetricSpec> {
    cw_metric(&epsilon_params(n, epsilon)?)
}

pub fn epsilon_particular_soliton(n: usize, epsilon: f64, lambda: f64) -> Result<SolitonCandidate> {
    cw_particular_soliton(&epsilon_params(n, epsilon)?, lambda)
}

/// General ε-space soliton; every skew `c` is allowed since all κ coincide.
pub fn epsilon_general_soliton(
    n: usize,
    epsilon: f64,
    lambda: f64,
    k: &CWGeneralConstants,
) -> Result<SolitonCandidate> {
    cw_general_soliton(&epsilon_params(n, epsilon)?, lambda, k)
}

/// `h(u) = α + β u + (n/4) ε u²`.
pub fn epsilon_gradient_potential(
    n: usize,
    epsilon: f64,
    alpha: f64,
    beta: f64,
    lambda: f64,
) -> Result<SolitonCandidate> {
    cw_gradient_potential(&epsilon_params(n, epsilon)?, alpha, beta, lambda)
}
