use super::{Chart, Expression, Func, Node, Result};

impl Expression {
    /// Exact partial derivative with respect to chart coordinate `index`, simplified.
    pub fn differentiate(&self, index: usize) -> Expression {
        self.derive(index).simplify()
    }

    /// [`Expression::differentiate`] by coordinate name.
    pub fn differentiate_by(&self, chart: &Chart, coordinate: &str) -> Result<Expression> {
        Ok(self.differentiate(chart.index_of(coordinate)?))
    }

    fn derive(&self, var: usize) -> Expression {
        match self.node() {
            Node::Const(_) | Node::Param(_) => Expression::zero(),
            Node::Coord(s) => {
                if s.index == var {
                    Expression::one()
                } else {
                    Expression::zero()
                }
            }
            Node::Neg(a) => -a.derive(var),
            Node::Add(a, b) => a.derive(var) + b.derive(var),
            Node::Sub(a, b) => a.derive(var) - b.derive(var),
            Node::Mul(a, b) => a.derive(var) * b.clone() + a.clone() * b.derive(var),
            Node::Div(a, b) => {
                (a.derive(var) * b.clone() - a.clone() * b.derive(var)) / b.powi(2)
            }
            Node::Pow(a, n) => match n {
                0 => Expression::zero(),
                _ => Expression::constant(f64::from(*n)) * a.powi(n - 1) * a.derive(var),
            },
            Node::Call(func, a) => {
                let outer = match func {
                    Func::Exp => a.exp(),
                    Func::Ln => Expression::one() / a.clone(),
                    Func::Sin => a.cos(),
                    Func::Cos => -a.sin(),
                    Func::Sinh => Expression::call(Func::Cosh, a.clone()),
                    Func::Cosh => Expression::call(Func::Sinh, a.clone()),
                    Func::Sqrt => Expression::one() / (Expression::constant(2.0) * a.sqrt()),
                    Func::Atan => Expression::one() / (Expression::one() + a.powi(2)),
                };
                outer * a.derive(var)
            }
            Node::Antiderivative {
                integrand,
                var: of,
                base,
            } => {
                if of.index == var {
                    integrand.clone()
                } else {
                    // differentiation never introduces antiderivatives, so the
                    // nesting invariant carries over
                    Expression::new(Node::Antiderivative {
                        integrand: integrand.derive(var),
                        var: of.clone(),
                        base: *base,
                    })
                }
            }
        }
    }
}
