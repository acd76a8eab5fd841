use nalgebra::{DMatrix, DVector};

use super::{check_chart, GeometryError, Result};
use crate::expr::{Bindings, Chart, Expression, Point};

/// Contravariant vector field `X = X^k ∂_k` with cached symbolic partials.
#[derive(Debug, Clone)]
pub struct VectorFieldSpec {
    chart: Chart,
    components: Vec<Expression>,
    partials: Vec<Expression>,
    params: Bindings,
}

/// Values and first partials of a vector field at a point.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorJet {
    /// `X^k`
    pub values: DVector<f64>,
    /// `(k, a) ↦ ∂_a X^k`
    pub partials: DMatrix<f64>,
}

impl VectorFieldSpec {
    pub fn new(chart: Chart, components: Vec<Expression>, params: Bindings) -> Result<Self> {
        let d = chart.dim();
        if components.len() != d {
            return Err(GeometryError::Shape {
                expected: d,
                got: components.len(),
            });
        }
        for c in &components {
            check_chart(c, d)?;
        }
        let partials = components
            .iter()
            .flat_map(|c| (0..d).map(move |a| c.differentiate(a)))
            .collect();
        Ok(Self {
            chart,
            components,
            partials,
            params,
        })
    }

    pub fn zero(chart: Chart) -> Self {
        let d = chart.dim();
        Self::new(chart, vec![Expression::zero(); d], Bindings::new()).expect("shape matches")
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn components(&self) -> &[Expression] {
        &self.components
    }

    pub fn params(&self) -> &Bindings {
        &self.params
    }

    pub fn has_antiderivative(&self) -> bool {
        self.components.iter().any(Expression::has_antiderivative)
    }

    /// Componentwise `self + other` (parameters merged, `other` wins on clashes).
    pub fn plus(&self, other: &VectorFieldSpec) -> Result<Self> {
        self.combine(other, |a, b| a + b)
    }

    /// Componentwise `self − other`.
    pub fn minus(&self, other: &VectorFieldSpec) -> Result<Self> {
        self.combine(other, |a, b| a - b)
    }

    fn combine(
        &self,
        other: &VectorFieldSpec,
        op: impl Fn(&Expression, &Expression) -> Expression,
    ) -> Result<Self> {
        if self.chart != other.chart {
            return Err(GeometryError::ChartMismatch);
        }
        let components = self
            .components
            .iter()
            .zip(&other.components)
            .map(|(a, b)| op(a, b).simplify())
            .collect();
        let mut params = self.params.clone();
        params.extend(other.params.iter().map(|(k, v)| (k.clone(), *v)));
        Self::new(self.chart.clone(), components, params)
    }

    pub fn jet_at(&self, p: &Point) -> Result<VectorJet> {
        let d = self.chart.dim();
        if p.dim() != d {
            return Err(GeometryError::PointDimension {
                expected: d,
                got: p.dim(),
            });
        }
        let mut values = DVector::zeros(d);
        let mut partials = DMatrix::zeros(d, d);
        for k in 0..d {
            values[k] = self.components[k].evaluate(p, &self.params)?;
            for a in 0..d {
                partials[(k, a)] = self.partials[k * d + a].evaluate(p, &self.params)?;
            }
        }
        Ok(VectorJet { values, partials })
    }
}

/// Scalar field with cached first and second symbolic partials.
#[derive(Debug, Clone)]
pub struct ScalarFieldSpec {
    chart: Chart,
    value: Expression,
    first: Vec<Expression>,
    second: Vec<Expression>,
    params: Bindings,
}

/// Value, first and second partials of a scalar field at a point.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarJet {
    pub value: f64,
    /// `∂_a h`
    pub first: DVector<f64>,
    /// `∂_a ∂_b h`
    pub second: DMatrix<f64>,
}

impl ScalarFieldSpec {
    pub fn new(chart: Chart, value: Expression, params: Bindings) -> Result<Self> {
        let d = chart.dim();
        check_chart(&value, d)?;
        let first: Vec<Expression> = (0..d).map(|a| value.differentiate(a)).collect();
        let mut second = vec![Expression::zero(); d * d];
        for a in 0..d {
            for b in a..d {
                let e = first[a].differentiate(b);
                second[a * d + b] = e.clone();
                second[b * d + a] = e;
            }
        }
        Ok(Self {
            chart,
            value,
            first,
            second,
            params,
        })
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn value(&self) -> &Expression {
        &self.value
    }

    pub fn params(&self) -> &Bindings {
        &self.params
    }

    pub fn has_antiderivative(&self) -> bool {
        self.value.has_antiderivative()
    }

    pub fn jet_at(&self, p: &Point) -> Result<ScalarJet> {
        let d = self.chart.dim();
        if p.dim() != d {
            return Err(GeometryError::PointDimension {
                expected: d,
                got: p.dim(),
            });
        }
        let value = self.value.evaluate(p, &self.params)?;
        let mut first = DVector::zeros(d);
        let mut second = DMatrix::zeros(d, d);
        for a in 0..d {
            first[a] = self.first[a].evaluate(p, &self.params)?;
            for b in a..d {
                let v = self.second[a * d + b].evaluate(p, &self.params)?;
                second[(a, b)] = v;
                second[(b, a)] = v;
            }
        }
        Ok(ScalarJet {
            value,
            first,
            second,
        })
    }
}
