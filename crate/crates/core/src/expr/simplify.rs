use super::eval::apply;
use super::{Expression, Node};

impl Expression {
    /// Conservative bottom-up simplification.
    ///
    /// Rules: constant folding (only when the folded value is finite), `x+0`,
    /// `0+x`, `x-0`, `x*1`, `1*x`, `x*0`, `0*x`, `0/c` for a nonzero constant
    /// `c`, `x^0`, `x^1`, `--x`, and an antiderivative of the zero integrand.
    /// Nothing is distributed or factored. One pass reaches a fixed point.
    pub fn simplify(&self) -> Expression {
        match self.node() {
            Node::Const(_) | Node::Coord(_) | Node::Param(_) => self.clone(),
            Node::Neg(a) => {
                let a = a.simplify();
                if let Some(c) = a.as_constant() {
                    return Expression::constant(-c);
                }
                if let Node::Neg(inner) = a.node() {
                    return inner.clone();
                }
                Expression::new(Node::Neg(a))
            }
            Node::Add(a, b) => {
                let (a, b) = (a.simplify(), b.simplify());
                match (a.as_constant(), b.as_constant()) {
                    (Some(x), Some(y)) => fold(x + y).unwrap_or_else(|| a + b),
                    (Some(x), _) if x == 0.0 => b,
                    (_, Some(y)) if y == 0.0 => a,
                    _ => a + b,
                }
            }
            Node::Sub(a, b) => {
                let (a, b) = (a.simplify(), b.simplify());
                match (a.as_constant(), b.as_constant()) {
                    (Some(x), Some(y)) => fold(x - y).unwrap_or_else(|| a - b),
                    (_, Some(y)) if y == 0.0 => a,
                    _ => a - b,
                }
            }
            Node::Mul(a, b) => {
                let (a, b) = (a.simplify(), b.simplify());
                match (a.as_constant(), b.as_constant()) {
                    (Some(x), Some(y)) => fold(x * y).unwrap_or_else(|| a * b),
                    (Some(x), _) | (_, Some(x)) if x == 0.0 => Expression::zero(),
                    (Some(x), _) if x == 1.0 => b,
                    (_, Some(y)) if y == 1.0 => a,
                    _ => a * b,
                }
            }
            Node::Div(a, b) => {
                let (a, b) = (a.simplify(), b.simplify());
                match (a.as_constant(), b.as_constant()) {
                    (Some(x), Some(y)) if y != 0.0 => fold(x / y).unwrap_or_else(|| a / b),
                    (Some(x), Some(y)) if x == 0.0 && y != 0.0 => Expression::zero(),
                    _ => a / b,
                }
            }
            Node::Pow(a, n) => {
                let a = a.simplify();
                match (n, a.as_constant()) {
                    (0, _) => Expression::one(),
                    (1, _) => a,
                    (_, Some(x)) if !(x == 0.0 && *n < 0) => {
                        fold(x.powi(*n)).unwrap_or_else(|| a.powi(*n))
                    }
                    _ => a.powi(*n),
                }
            }
            Node::Call(func, a) => {
                let a = a.simplify();
                if let Some(x) = a.as_constant() {
                    if let Some(folded) = apply(*func, x).ok().and_then(fold) {
                        return folded;
                    }
                }
                Expression::call(*func, a)
            }
            Node::Antiderivative {
                integrand,
                var,
                base,
            } => {
                let integrand = integrand.simplify();
                if integrand.is_zero() {
                    return Expression::zero();
                }
                Expression::new(Node::Antiderivative {
                    integrand,
                    var: var.clone(),
                    base: *base,
                })
            }
        }
    }
}

fn fold(value: f64) -> Option<Expression> {
    value.is_finite().then(|| Expression::constant(value))
}
