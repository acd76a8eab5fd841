//! Ricci-soliton residuals and diagnostics of gradient potentials.
//!
//! A vector field `X` with constant `λ` is a soliton when
//! `𝓛_X g + Ric − λ g = 0`; a potential `h` is a gradient soliton when
//! `2 Hes_h + Ric − λ g = 0`. Every check here is pointwise and returns the raw
//! residual so callers can aggregate over samples.

use std::fmt;

use nalgebra::{DMatrix, DVector};
use serde::Serialize;
use thiserror::Error;

use crate::expr::Point;
use crate::geometry::{
    covariant_derivative, divergence, frame_at, gradient_jet, hessian, lie_derivative_metric,
    GeometryError, MetricSpec, PointFrame, ScalarFieldSpec, ScalarJet, VectorFieldSpec, VectorJet,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolitonError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("operation needs a gradient candidate")]
    NotGradient,
    #[error("lambda must be finite, got {0}")]
    NonFiniteLambda(f64),
    #[error("field and metric live on different charts")]
    ChartMismatch,
}

impl From<crate::expr::ExprError> for SolitonError {
    fn from(e: crate::expr::ExprError) -> Self {
        SolitonError::Geometry(e.into())
    }
}

pub type Result<T> = std::result::Result<T, SolitonError>;

#[derive(Debug, Clone)]
pub enum CandidateField {
    Vector(VectorFieldSpec),
    /// The soliton field is `grad h`, always recomputed from `h`.
    Gradient(ScalarFieldSpec),
}

/// A soliton field (or potential) together with its constant `λ`.
#[derive(Debug, Clone)]
pub struct SolitonCandidate {
    field: CandidateField,
    lambda: f64,
}

impl SolitonCandidate {
    pub fn vector(x: VectorFieldSpec, lambda: f64) -> Result<Self> {
        Self::new(CandidateField::Vector(x), lambda)
    }

    pub fn gradient(h: ScalarFieldSpec, lambda: f64) -> Result<Self> {
        Self::new(CandidateField::Gradient(h), lambda)
    }

    fn new(field: CandidateField, lambda: f64) -> Result<Self> {
        if !lambda.is_finite() {
            return Err(SolitonError::NonFiniteLambda(lambda));
        }
        Ok(Self { field, lambda })
    }

    pub fn field(&self) -> &CandidateField {
        &self.field
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// Same field, different `λ`.
    pub fn with_lambda(&self, lambda: f64) -> Result<Self> {
        Self::new(self.field.clone(), lambda)
    }

    pub fn is_gradient(&self) -> bool {
        matches!(self.field, CandidateField::Gradient(_))
    }

    pub fn as_vector(&self) -> Option<&VectorFieldSpec> {
        match &self.field {
            CandidateField::Vector(x) => Some(x),
            CandidateField::Gradient(_) => None,
        }
    }

    pub fn as_potential(&self) -> Option<&ScalarFieldSpec> {
        match &self.field {
            CandidateField::Vector(_) => None,
            CandidateField::Gradient(h) => Some(h),
        }
    }

    /// True when evaluating the candidate involves quadrature.
    pub fn has_antiderivative(&self) -> bool {
        match &self.field {
            CandidateField::Vector(x) => x.has_antiderivative(),
            CandidateField::Gradient(h) => h.has_antiderivative(),
        }
    }

    fn check_chart(&self, metric: &MetricSpec) -> Result<()> {
        let chart = match &self.field {
            CandidateField::Vector(x) => x.chart(),
            CandidateField::Gradient(h) => h.chart(),
        };
        if chart != metric.chart() {
            return Err(SolitonError::ChartMismatch);
        }
        Ok(())
    }

    /// Evaluates the candidate at the frame's point.
    pub fn jet(&self, frame: &PointFrame) -> Result<CandidateJet> {
        let p = frame.point();
        Ok(match &self.field {
            CandidateField::Vector(x) => CandidateJet {
                field: x.jet_at(p)?,
                potential: None,
            },
            CandidateField::Gradient(h) => {
                let hj = h.jet_at(p)?;
                CandidateJet {
                    field: gradient_jet(frame, &hj),
                    potential: Some(hj),
                }
            }
        })
    }
}

/// Numeric values of a candidate at one point: the soliton field (`X` or
/// `grad h`) and, for gradient candidates, the potential's jet.
#[derive(Debug, Clone)]
pub struct CandidateJet {
    pub field: VectorJet,
    pub potential: Option<ScalarJet>,
}

/// `λ > 0`, `λ = 0`, `λ < 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SolitonType {
    Shrinking,
    Steady,
    Expanding,
}

impl fmt::Display for SolitonType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SolitonType::Shrinking => "shrinking",
            SolitonType::Steady => "steady",
            SolitonType::Expanding => "expanding",
        })
    }
}

/// Exact sign test.
pub fn classify(lambda: f64) -> SolitonType {
    if lambda > 0.0 {
        SolitonType::Shrinking
    } else if lambda < 0.0 {
        SolitonType::Expanding
    } else {
        SolitonType::Steady
    }
}

/// `𝓛_X g + Ric − λ g` from a precomputed frame and field jet.
pub fn soliton_residual(frame: &PointFrame, x: &VectorJet, lambda: f64) -> DMatrix<f64> {
    lie_derivative_metric(frame, x) + &frame.ricci - &frame.g * lambda
}

/// `2 Hes_h + Ric − λ g` from a precomputed frame and potential jet.
pub fn gradient_residual(frame: &PointFrame, h: &ScalarJet, lambda: f64) -> DMatrix<f64> {
    hessian(frame, h) * 2.0 + &frame.ricci - &frame.g * lambda
}

/// `𝓛_X g + Ric − λ g` at `p`. Gradient candidates use the vector field `grad h`.
pub fn soliton_residual_at(
    metric: &MetricSpec,
    c: &SolitonCandidate,
    p: &Point,
) -> Result<DMatrix<f64>> {
    c.check_chart(metric)?;
    let frame = frame_at(metric, p, 2)?;
    let jet = c.jet(&frame)?;
    Ok(soliton_residual(&frame, &jet.field, c.lambda))
}

/// `2 Hes_h + Ric − λ g` at `p`.
pub fn gradient_residual_at(
    metric: &MetricSpec,
    c: &SolitonCandidate,
    p: &Point,
) -> Result<DMatrix<f64>> {
    c.check_chart(metric)?;
    let h = c.as_potential().ok_or(SolitonError::NotGradient)?;
    let frame = frame_at(metric, p, 2)?;
    Ok(gradient_residual(&frame, &h.jet_at(p)?, c.lambda))
}

/// The defining residual for the candidate's kind.
pub fn residual(frame: &PointFrame, c: &SolitonCandidate, jet: &CandidateJet) -> DMatrix<f64> {
    match &jet.potential {
        Some(h) => gradient_residual(frame, h, c.lambda),
        None => soliton_residual(frame, &jet.field, c.lambda),
    }
}

/// `λ − (2 div X + Sc)/d`.
pub fn lambda_consistency(frame: &PointFrame, x: &VectorJet, lambda: f64) -> f64 {
    lambda - (2.0 * divergence(frame, x) + frame.scalar_curvature) / frame.dim() as f64
}

pub fn lambda_consistency_at(metric: &MetricSpec, c: &SolitonCandidate, p: &Point) -> Result<f64> {
    c.check_chart(metric)?;
    let frame = frame_at(metric, p, 2)?;
    let jet = c.jet(&frame)?;
    Ok(lambda_consistency(&frame, &jet.field, c.lambda))
}

/// `Sc + 2 g(grad h, grad h) − 2 λ h`.
pub fn hamilton_value(frame: &PointFrame, h: &ScalarJet, grad: &DVector<f64>, lambda: f64) -> f64 {
    frame.scalar_curvature + 2.0 * norm_sq(frame, grad) - 2.0 * lambda * h.value
}

pub fn hamilton_value_at(metric: &MetricSpec, c: &SolitonCandidate, p: &Point) -> Result<f64> {
    c.check_chart(metric)?;
    if !c.is_gradient() {
        return Err(SolitonError::NotGradient);
    }
    let frame = frame_at(metric, p, 2)?;
    let jet = c.jet(&frame)?;
    let h = jet.potential.as_ref().expect("gradient candidate has a potential");
    Ok(hamilton_value(&frame, h, &jet.field.values, c.lambda))
}

/// `max |𝓛_X g − c g|`; `c = 0` measures the Killing defect.
pub fn homothety_defect(frame: &PointFrame, x: &VectorJet, c: f64) -> f64 {
    (lie_derivative_metric(frame, x) - &frame.g * c).amax()
}

pub fn homothety_defect_at(
    metric: &MetricSpec,
    x: &VectorFieldSpec,
    c: f64,
    p: &Point,
) -> Result<f64> {
    if x.chart() != metric.chart() {
        return Err(SolitonError::ChartMismatch);
    }
    let frame = frame_at(metric, p, 2)?;
    Ok(homothety_defect(&frame, &x.jet_at(p)?, c))
}

/// Two-step nilpotency of the Ricci operator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Nilpotency {
    /// `max |Q²|` for the Ricci operator `Q = g⁻¹ Ric`.
    pub square: f64,
    /// `|Sc|`
    pub scalar: f64,
}

pub fn nilpotency_defect(frame: &PointFrame) -> Nilpotency {
    let q = &frame.ricci_operator;
    Nilpotency {
        square: (q * q).amax(),
        scalar: frame.scalar_curvature.abs(),
    }
}

pub fn nilpotency_defect_at(metric: &MetricSpec, p: &Point) -> Result<Nilpotency> {
    Ok(nilpotency_defect(&frame_at(metric, p, 2)?))
}

/// Null, geodesic and recurrence structure of `grad h` at a point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DiagnosticsResult {
    /// `g(grad h, grad h)`
    pub norm_sq_grad: f64,
    /// `max_k |(∇_{grad h} grad h)^k|`
    pub geodesic_defect: f64,
    /// Normalized 2×2-minor measure of `∇_{∂_i} grad h ∥ grad h`, maximized over `i`.
    pub recurrence_defect: f64,
    /// `Sc + 2‖grad h‖² − 2λh`
    pub hamilton_value: f64,
    /// `max |Q²|` of the Ricci operator.
    pub nilpotency_defect: f64,
    /// `max_j |Ric(grad h, ∂_j)|`
    pub ricci_grad_defect: f64,
}

impl DiagnosticsResult {
    /// Largest of the quantities that vanish for a steady gradient soliton
    /// with constant scalar curvature.
    pub fn max_defect(&self) -> f64 {
        [
            self.norm_sq_grad.abs(),
            self.geodesic_defect,
            self.recurrence_defect,
            self.ricci_grad_defect,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

fn norm_sq(frame: &PointFrame, x: &DVector<f64>) -> f64 {
    (x.transpose() * &frame.g * x)[(0, 0)]
}

/// Measures how far `w` is from being parallel to `x`: the largest 2×2 minor of
/// the 2×d matrix `[w; x]` over `1 + ‖x‖∞‖w‖∞`.
pub fn parallelism_defect(w: &DVector<f64>, x: &DVector<f64>) -> f64 {
    let d = x.len();
    let mut worst = 0.0f64;
    for a in 0..d {
        for b in (a + 1)..d {
            worst = worst.max((w[a] * x[b] - w[b] * x[a]).abs());
        }
    }
    worst / (1.0 + x.amax() * w.amax())
}

pub fn gradient_diagnostics(
    frame: &PointFrame,
    h: &ScalarJet,
    grad: &VectorJet,
    lambda: f64,
) -> DiagnosticsResult {
    let x = &grad.values;
    let nabla = covariant_derivative(frame, grad);
    let along = nabla.transpose() * x;
    let recurrence_defect = if x.amax() <= 1e-12 {
        0.0
    } else {
        (0..frame.dim())
            .map(|i| parallelism_defect(&nabla.row(i).transpose(), x))
            .fold(0.0, f64::max)
    };
    DiagnosticsResult {
        norm_sq_grad: norm_sq(frame, x),
        geodesic_defect: along.amax(),
        recurrence_defect,
        hamilton_value: hamilton_value(frame, h, x, lambda),
        nilpotency_defect: nilpotency_defect(frame).square,
        ricci_grad_defect: (&frame.ricci * x).amax(),
    }
}

pub fn gradient_diagnostics_at(
    metric: &MetricSpec,
    h: &ScalarFieldSpec,
    lambda: f64,
    p: &Point,
) -> Result<DiagnosticsResult> {
    if h.chart() != metric.chart() {
        return Err(SolitonError::ChartMismatch);
    }
    let frame = frame_at(metric, p, 2)?;
    let hj = h.jet_at(p)?;
    let grad = gradient_jet(&frame, &hj);
    Ok(gradient_diagnostics(&frame, &hj, &grad, lambda))
}
