use std::fmt;

use super::parse::ANTIDERIVATIVE_KEYWORD;
use super::{Expression, Node};

// Binding strength, loosest first.
const SUM: u8 = 1;
const PRODUCT: u8 = 2;
const UNARY: u8 = 3;
const ATOM: u8 = 5;

fn precedence(node: &Node) -> u8 {
    match node {
        Node::Add(..) | Node::Sub(..) => SUM,
        Node::Mul(..) | Node::Div(..) => PRODUCT,
        Node::Neg(_) => UNARY,
        Node::Pow(..) => 4,
        Node::Const(c) if *c < 0.0 || (*c == 0.0 && c.is_sign_negative()) => UNARY,
        _ => ATOM,
    }
}

fn write_at(f: &mut fmt::Formatter<'_>, e: &Expression, min: u8) -> fmt::Result {
    if precedence(e.node()) < min {
        write!(f, "({e})")
    } else {
        write!(f, "{e}")
    }
}

fn write_const(f: &mut fmt::Formatter<'_>, c: f64) -> fmt::Result {
    if c.is_finite() {
        // `{}` on f64 prints the shortest string that round-trips, without exponent.
        write!(f, "{c}")
    } else {
        write!(f, "({c})")
    }
}

/// Prints in the parser's text format; `parse(e.to_string())` reproduces
/// parser-built trees exactly.
impl fmt::Display for Expression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.node() {
            Node::Const(c) => write_const(f, *c),
            Node::Coord(s) => write!(f, "{}", s.name),
            Node::Param(p) => write!(f, "{p}"),
            Node::Neg(a) => {
                write!(f, "-")?;
                write_at(f, a, UNARY)
            }
            Node::Add(a, b) => {
                write_at(f, a, SUM)?;
                write!(f, " + ")?;
                write_at(f, b, PRODUCT)
            }
            Node::Sub(a, b) => {
                write_at(f, a, SUM)?;
                write!(f, " - ")?;
                write_at(f, b, PRODUCT)
            }
            Node::Mul(a, b) => {
                write_at(f, a, PRODUCT)?;
                write!(f, "*")?;
                write_at(f, b, UNARY)
            }
            Node::Div(a, b) => {
                write_at(f, a, PRODUCT)?;
                write!(f, "/")?;
                write_at(f, b, UNARY)
            }
            Node::Pow(a, n) => {
                write_at(f, a, ATOM)?;
                write!(f, "^{n}")
            }
            Node::Call(func, a) => write!(f, "{}({a})", func.name()),
            Node::Antiderivative {
                integrand,
                var,
                base,
            } => {
                write!(f, "{ANTIDERIVATIVE_KEYWORD}({integrand}, {}, ", var.name)?;
                write_const(f, *base)?;
                write!(f, ")")
            }
        }
    }
}
