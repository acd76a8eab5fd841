use std::cell::Cell;

use super::{Bindings, ExprError, Expression, Func, Node, Point, Result};

/// Absolute tolerance of antiderivative quadrature.
pub const QUADRATURE_TOLERANCE: f64 = 1e-10;
/// Maximum bisection depth of antiderivative quadrature.
pub const QUADRATURE_MAX_DEPTH: u32 = 40;
/// Maximum number of integrand evaluations per antiderivative value.
pub const QUADRATURE_MAX_EVALUATIONS: usize = 100_000;

impl Expression {
    /// Evaluate at `point` with parameter values from `params`.
    pub fn evaluate(&self, point: &Point, params: &Bindings) -> Result<f64> {
        self.eval_coords(point.coords(), params)
    }

    /// Same as [`Expression::evaluate`] on a raw coordinate slice.
    pub fn eval_coords(&self, coords: &[f64], params: &Bindings) -> Result<f64> {
        match self.node() {
            Node::Const(c) => Ok(*c),
            Node::Coord(s) => coords
                .get(s.index)
                .copied()
                .ok_or_else(|| ExprError::UnknownCoordinate(s.name.to_string())),
            Node::Param(p) => params
                .get(p.as_ref())
                .copied()
                .ok_or_else(|| ExprError::UnboundParameter(p.to_string())),
            Node::Neg(a) => Ok(-a.eval_coords(coords, params)?),
            Node::Add(a, b) => Ok(a.eval_coords(coords, params)? + b.eval_coords(coords, params)?),
            Node::Sub(a, b) => Ok(a.eval_coords(coords, params)? - b.eval_coords(coords, params)?),
            Node::Mul(a, b) => Ok(a.eval_coords(coords, params)? * b.eval_coords(coords, params)?),
            Node::Div(a, b) => {
                let num = a.eval_coords(coords, params)?;
                let den = b.eval_coords(coords, params)?;
                if den == 0.0 {
                    return Err(ExprError::DivisionByZero);
                }
                Ok(num / den)
            }
            Node::Pow(a, n) => {
                let x = a.eval_coords(coords, params)?;
                if x == 0.0 && *n < 0 {
                    return Err(ExprError::DivisionByZero);
                }
                Ok(x.powi(*n))
            }
            Node::Call(func, a) => apply(*func, a.eval_coords(coords, params)?),
            Node::Antiderivative {
                integrand,
                var,
                base,
            } => {
                let upper = *coords
                    .get(var.index)
                    .ok_or_else(|| ExprError::UnknownCoordinate(var.name.to_string()))?;
                let mut scratch = coords.to_vec();
                adaptive_simpson(
                    |t| {
                        scratch[var.index] = t;
                        integrand.eval_coords(&scratch, params)
                    },
                    *base,
                    upper,
                    QUADRATURE_TOLERANCE,
                    QUADRATURE_MAX_DEPTH,
                )
            }
        }
    }
}

pub(crate) fn apply(func: Func, x: f64) -> Result<f64> {
    let y = match func {
        Func::Exp => x.exp(),
        Func::Ln => {
            if x <= 0.0 {
                return Err(ExprError::Domain { func: "ln", arg: x });
            }
            x.ln()
        }
        Func::Sin => x.sin(),
        Func::Cos => x.cos(),
        Func::Sinh => x.sinh(),
        Func::Cosh => x.cosh(),
        Func::Sqrt => {
            if x <= 0.0 {
                return Err(ExprError::Domain { func: "sqrt", arg: x });
            }
            x.sqrt()
        }
        Func::Atan => x.atan(),
    };
    Ok(y)
}

/// Adaptive Simpson quadrature of `f` over `[a, b]` (either orientation).
///
/// A panel is accepted when the two-halves estimate differs from the whole-panel
/// estimate by at most `15·tol` (the tolerance halves with each bisection), or by
/// a few ulps of the estimate once `tol` falls below rounding noise. Reaching
/// `max_depth` without acceptance, or spending more than
/// [`QUADRATURE_MAX_EVALUATIONS`] integrand calls, is an error.
pub fn adaptive_simpson<F>(mut f: F, a: f64, b: f64, tol: f64, max_depth: u32) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    if a == b {
        return Ok(0.0);
    }
    let fa = f(a)?;
    let fb = f(b)?;
    let m = 0.5 * (a + b);
    let fm = f(m)?;
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    let span = Span {
        lower: a,
        upper: b,
        max_depth,
        remaining: Cell::new(QUADRATURE_MAX_EVALUATIONS),
    };
    simpson_panel(&mut f, a, b, fa, fm, fb, whole, tol, max_depth, &span)
}

struct Span {
    lower: f64,
    upper: f64,
    max_depth: u32,
    remaining: Cell<usize>,
}

impl Span {
    fn spend(&self, calls: usize) -> Result<()> {
        match self.remaining.get().checked_sub(calls) {
            Some(left) => {
                self.remaining.set(left);
                Ok(())
            }
            None => Err(self.failure()),
        }
    }

    fn failure(&self) -> ExprError {
        ExprError::Quadrature {
            lower: self.lower,
            upper: self.upper,
            depth: self.max_depth,
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn simpson_panel<F>(
    f: &mut F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
    span: &Span,
) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    span.spend(2)?;
    let flm = f(lm)?;
    let frm = f(rm)?;
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let refined = left + right;
    let delta = refined - whole;
    let noise = 64.0 * f64::EPSILON * (left.abs() + right.abs());
    if !refined.is_finite() {
        return Err(span.failure());
    }
    if delta.abs() <= 15.0 * tol || delta.abs() <= noise {
        return Ok(refined + delta / 15.0);
    }
    if depth == 0 {
        return Err(span.failure());
    }
    let l = simpson_panel(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1, span)?;
    let r = simpson_panel(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1, span)?;
    Ok(l + r)
}
