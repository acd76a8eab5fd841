//! Pointwise pseudo-Riemannian tensor calculus.
//!
//! Conventions used throughout:
//!
//! - Christoffel symbols `Γ^k_{ij} = ½ g^{kl}(∂_i g_{lj} + ∂_j g_{il} − ∂_l g_{ij})`.
//! - Curvature operator `R(X,Y) = ∇_{[X,Y]} − [∇_X, ∇_Y]`, i.e. the negative of the
//!   more common `[∇_X, ∇_Y] − ∇_{[X,Y]}`. In coordinates
//!   `R(∂_i,∂_j)∂_k = R^l_{ijk} ∂_l` with
//!   `R^l_{ijk} = −(∂_iΓ^l_{jk} − ∂_jΓ^l_{ik} + Γ^l_{im}Γ^m_{jk} − Γ^l_{jm}Γ^m_{ik})`.
//! - `Ric(X,Y) = trace(Z ↦ R(X,Z)Y)`, so `Ric_{ij} = R^k_{ikj}`; with the sign above
//!   this is the usual Ricci tensor (the round sphere has positive Ricci curvature).
//! - The lowered tensor is `R_{lijk} = g_{lm} R^m_{ijk}`, so that
//!   `g(R(∂_x,∂_y)∂_z, ∂_w) = R_{wxyz}` (see [`PointFrame::riemann_form`]). As a
//!   4-form, `riemann_form` agrees with the textbook lowered tensor `R_{xyzw}`
//!   built from `[∇_X, ∇_Y] − ∇_{[X,Y]}`.
//! - Lie derivative `(𝓛_X g)_{ij} = X^k ∂_k g_{ij} + g_{kj} ∂_i X^k + g_{ik} ∂_j X^k`.

mod fields;
mod frame;
mod ops;

use std::sync::OnceLock;

use nalgebra::DMatrix;
use thiserror::Error;

use crate::expr::{Bindings, Chart, ExprError, Expression, Point};

pub use fields::{ScalarFieldSpec, ScalarJet, VectorFieldSpec, VectorJet};
pub use frame::{frame_at, PointFrame};
pub use ops::{
    bianchi_defects, causal_character, causal_character_at, covariant_derivative,
    covariant_derivative_at, divergence, divergence_at, gradient, gradient_at, gradient_jet,
    hessian, hessian_at, lie_derivative_metric, lie_derivative_metric_at, signature,
    signature_at, weyl, weyl_at, BianchiDefects, CausalCharacter, Signature,
};

/// Metrics whose `|det g|` is at or below this are singular.
pub const DET_THRESHOLD: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error("metric components ({i},{j}) and ({j},{i}) differ")]
    NotSymmetric { i: usize, j: usize },
    #[error("expected {expected} components, got {got}")]
    Shape { expected: usize, got: usize },
    #[error("expression built on a different chart")]
    ChartMismatch,
    #[error("point has {got} coordinates, chart has {expected}")]
    PointDimension { expected: usize, got: usize },
    #[error("metric is singular at the point (|det g| = {det:e})")]
    Singular { det: f64 },
    #[error("dimension {0} is too small")]
    DimensionTooSmall(usize),
    #[error("third derivatives were not computed for this frame")]
    MissingThirdOrder,
}

pub type Result<T> = std::result::Result<T, GeometryError>;

/// A metric on a chart, given by symbolic components.
///
/// Partial derivatives of the components up to second order are differentiated
/// once at construction; third-order partials are built on first use.
#[derive(Debug, Clone)]
pub struct MetricSpec {
    chart: Chart,
    components: Vec<Expression>,
    params: Bindings,
    first: Vec<Expression>,
    second: Vec<Expression>,
    third: OnceLock<Vec<Expression>>,
}

impl MetricSpec {
    pub fn new(chart: Chart, components: Vec<Vec<Expression>>, params: Bindings) -> Result<Self> {
        let d = chart.dim();
        if components.len() != d {
            return Err(GeometryError::Shape {
                expected: d,
                got: components.len(),
            });
        }
        let mut flat = Vec::with_capacity(d * d);
        for row in components {
            if row.len() != d {
                return Err(GeometryError::Shape {
                    expected: d,
                    got: row.len(),
                });
            }
            flat.extend(row);
        }
        for i in 0..d {
            for j in (i + 1)..d {
                if flat[i * d + j] != flat[j * d + i] {
                    return Err(GeometryError::NotSymmetric { i, j });
                }
            }
        }
        for e in &flat {
            check_chart(e, d)?;
        }
        let first = partials_of(&flat, d, 1);
        let second = partials_of(&first, d, 2);
        Ok(Self {
            chart,
            components: flat,
            params,
            first,
            second,
            third: OnceLock::new(),
        })
    }

    /// Diagonal-plus-off-diagonal convenience constructor: unspecified entries are zero.
    pub fn from_entries(
        chart: Chart,
        entries: &[(usize, usize, Expression)],
        params: Bindings,
    ) -> Result<Self> {
        let d = chart.dim();
        let mut rows = vec![vec![Expression::zero(); d]; d];
        for (i, j, e) in entries {
            if *i >= d || *j >= d {
                return Err(GeometryError::Shape {
                    expected: d,
                    got: (*i).max(*j) + 1,
                });
            }
            rows[*i][*j] = e.clone();
            rows[*j][*i] = e.clone();
        }
        Self::new(chart, rows, params)
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn dim(&self) -> usize {
        self.chart.dim()
    }

    pub fn params(&self) -> &Bindings {
        &self.params
    }

    pub fn component(&self, i: usize, j: usize) -> &Expression {
        &self.components[i * self.dim() + j]
    }

    /// Cached `∂_a g_{ij}`.
    pub fn first_partial(&self, i: usize, j: usize, a: usize) -> &Expression {
        let d = self.dim();
        &self.first[(i * d + j) * d + a]
    }

    pub(crate) fn first_partials(&self) -> &[Expression] {
        &self.first
    }

    pub(crate) fn second_partials(&self) -> &[Expression] {
        &self.second
    }

    pub(crate) fn third_partials(&self) -> &[Expression] {
        self.third
            .get_or_init(|| partials_of(&self.second, self.dim(), 3))
    }

    /// Numeric metric matrix at `p`.
    pub fn metric_at(&self, p: &Point) -> Result<DMatrix<f64>> {
        let d = self.dim();
        self.check_point(p)?;
        let mut g = DMatrix::zeros(d, d);
        for i in 0..d {
            for j in i..d {
                let v = self.components[i * d + j].evaluate(p, &self.params)?;
                g[(i, j)] = v;
                g[(j, i)] = v;
            }
        }
        Ok(g)
    }

    /// `|det g(p)| > DET_THRESHOLD`.
    pub fn is_admissible(&self, p: &Point) -> Result<bool> {
        let g = self.metric_at(p)?;
        Ok(g.determinant().abs() > DET_THRESHOLD)
    }

    pub(crate) fn check_point(&self, p: &Point) -> Result<()> {
        if p.dim() != self.dim() {
            return Err(GeometryError::PointDimension {
                expected: self.dim(),
                got: p.dim(),
            });
        }
        Ok(())
    }

    /// Entrywise structural equality of the simplified components and equal bindings.
    pub fn same_components(&self, other: &MetricSpec) -> bool {
        self.chart == other.chart
            && self.params == other.params
            && self
                .components
                .iter()
                .zip(&other.components)
                .all(|(a, b)| a.simplify() == b.simplify())
    }
}

/// Rejects expressions whose coordinates point outside a `d`-dimensional chart.
pub(crate) fn check_chart(e: &Expression, d: usize) -> Result<()> {
    match e.max_coordinate() {
        Some(i) if i >= d => Err(GeometryError::ChartMismatch),
        _ => Ok(()),
    }
}

/// Differentiates an array whose trailing `order − 1` indices are partial
/// directions, reusing symmetric multi-indices.
fn partials_of(prev: &[Expression], d: usize, order: u32) -> Vec<Expression> {
    let block = d.pow(order - 1);
    let entries = prev.len() / block;
    let mut out: Vec<Option<Expression>> = vec![None; prev.len() * d];
    for entry in 0..entries {
        for rest in 0..block {
            let mut dirs = decode(rest, d, (order - 1) as usize);
            for a in 0..d {
                let idx = (entry * block + rest) * d + a;
                dirs.push(a);
                let mut sorted = dirs.clone();
                sorted.sort_unstable();
                let canonical = entry * block * d + encode(&sorted, d);
                if canonical != idx {
                    if let Some(e) = &out[canonical] {
                        out[idx] = Some(e.clone());
                        dirs.pop();
                        continue;
                    }
                }
                out[idx] = Some(prev[entry * block + rest].differentiate(a));
                dirs.pop();
            }
        }
    }
    out.into_iter()
        .map(|e| e.expect("every slot filled"))
        .collect()
}

fn decode(mut code: usize, d: usize, len: usize) -> Vec<usize> {
    let mut out = vec![0; len];
    for slot in out.iter_mut().rev() {
        *slot = code % d;
        code /= d;
    }
    out
}

fn encode(dirs: &[usize], d: usize) -> usize {
    dirs.iter().fold(0, |acc, &a| acc * d + a)
}
