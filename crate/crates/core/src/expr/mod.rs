//! Scalar expressions over chart coordinates and named parameters.
//!
//! An [`Expression`] is an immutable, reference-counted tree. Coordinates are
//! resolved to chart indices when the tree is built, so evaluation never does
//! name lookups for them. Parameters stay symbolic until evaluation, where they
//! are bound through a [`Bindings`] map.
//!
//! The one non-elementary node is the antiderivative
//! `∫_{base}^{var} integrand d(var)`. Its derivative is exact (the integrand, or
//! the antiderivative of the integrand's partial for other coordinates) and its
//! value comes from adaptive Simpson quadrature.

mod diff;
mod display;
mod eval;
mod parse;
mod simplify;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

use thiserror::Error;

pub use eval::{
    adaptive_simpson, QUADRATURE_MAX_DEPTH, QUADRATURE_MAX_EVALUATIONS, QUADRATURE_TOLERANCE,
};
pub use parse::parse;

/// Values for named parameters.
pub type Bindings = BTreeMap<String, f64>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExprError {
    #[error("syntax error at byte {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("unknown identifier `{name}` at byte {position}")]
    UnknownIdentifier { name: String, position: usize },
    #[error("unknown function `{name}` at byte {position}")]
    UnknownFunction { name: String, position: usize },
    #[error("unknown coordinate `{0}`")]
    UnknownCoordinate(String),
    #[error("invalid chart: {0}")]
    InvalidChart(String),
    #[error("invalid point: {0}")]
    InvalidPoint(String),
    #[error("domain error: {func} undefined at {arg}")]
    Domain { func: &'static str, arg: f64 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("quadrature did not converge on [{lower}, {upper}] within depth {depth} and the evaluation budget")]
    Quadrature { lower: f64, upper: f64, depth: u32 },
    #[error("unbound parameter `{0}`")]
    UnboundParameter(String),
    #[error("antiderivative in `{0}` nested inside another antiderivative in the same variable")]
    NestedAntiderivative(String),
}

pub type Result<T> = std::result::Result<T, ExprError>;

/// Ordered coordinate names of a chart.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chart {
    names: Arc<[String]>,
}

impl Chart {
    pub fn new<S: AsRef<str>>(names: &[S]) -> Result<Self> {
        if names.len() < 2 {
            return Err(ExprError::InvalidChart(format!(
                "need at least 2 coordinates, got {}",
                names.len()
            )));
        }
        let mut owned: Vec<String> = Vec::with_capacity(names.len());
        for name in names {
            let name = name.as_ref().trim();
            if !is_identifier(name) {
                return Err(ExprError::InvalidChart(format!("`{name}` is not an identifier")));
            }
            if Func::from_name(name).is_some() {
                return Err(ExprError::InvalidChart(format!("`{name}` is a function name")));
            }
            if owned.iter().any(|n| n == name) {
                return Err(ExprError::InvalidChart(format!("duplicate coordinate `{name}`")));
            }
            owned.push(name.to_string());
        }
        Ok(Self { names: owned.into() })
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, index: usize) -> &str {
        &self.names[index]
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| ExprError::UnknownCoordinate(name.to_string()))
    }

    /// Expression for the coordinate function `name`.
    pub fn coord(&self, name: &str) -> Result<Expression> {
        let index = self.index_of(name)?;
        Ok(self.coord_at(index))
    }

    pub fn coord_at(&self, index: usize) -> Expression {
        Expression::new(Node::Coord(Symbol {
            index,
            name: Arc::from(self.names[index].as_str()),
        }))
    }
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// A point of a chart: one finite value per coordinate.
#[derive(Debug, Clone, PartialEq)]
pub struct Point(Vec<f64>);

impl Point {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
            return Err(ExprError::InvalidPoint(format!("non-finite coordinate {bad}")));
        }
        Ok(Self(values))
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }
}

impl std::ops::Index<usize> for Point {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Func {
    Exp,
    Ln,
    Sin,
    Cos,
    Sinh,
    Cosh,
    Sqrt,
    Atan,
}

impl Func {
    pub const ALL: [Func; 8] = [
        Func::Exp,
        Func::Ln,
        Func::Sin,
        Func::Cos,
        Func::Sinh,
        Func::Cosh,
        Func::Sqrt,
        Func::Atan,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Ln => "ln",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Sinh => "sinh",
            Func::Cosh => "cosh",
            Func::Sqrt => "sqrt",
            Func::Atan => "atan",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        Func::ALL.into_iter().find(|f| f.name() == name)
    }
}

/// A chart coordinate as it appears inside an expression.
#[derive(Debug, Clone, PartialEq)]
pub struct Symbol {
    pub index: usize,
    pub name: Arc<str>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Node {
    Const(f64),
    Coord(Symbol),
    Param(Arc<str>),
    Neg(Expression),
    Add(Expression, Expression),
    Sub(Expression, Expression),
    Mul(Expression, Expression),
    Div(Expression, Expression),
    Pow(Expression, i32),
    Call(Func, Expression),
    /// `∫_{base}^{var} integrand d(var)`; `integrand` is written in terms of `var` itself.
    Antiderivative {
        integrand: Expression,
        var: Symbol,
        base: f64,
    },
}

/// Immutable scalar expression tree.
#[derive(Clone, PartialEq)]
pub struct Expression(Arc<Node>);

impl Expression {
    pub fn new(node: Node) -> Self {
        Self(Arc::new(node))
    }

    pub fn node(&self) -> &Node {
        &self.0
    }

    pub fn constant(value: f64) -> Self {
        Self::new(Node::Const(value))
    }

    pub fn zero() -> Self {
        Self::constant(0.0)
    }

    pub fn one() -> Self {
        Self::constant(1.0)
    }

    pub fn param(name: &str) -> Self {
        Self::new(Node::Param(Arc::from(name)))
    }

    pub fn powi(&self, exponent: i32) -> Self {
        Self::new(Node::Pow(self.clone(), exponent))
    }

    pub fn call(func: Func, arg: Expression) -> Self {
        Self::new(Node::Call(func, arg))
    }

    pub fn exp(&self) -> Self {
        Self::call(Func::Exp, self.clone())
    }

    pub fn ln(&self) -> Self {
        Self::call(Func::Ln, self.clone())
    }

    pub fn sin(&self) -> Self {
        Self::call(Func::Sin, self.clone())
    }

    pub fn cos(&self) -> Self {
        Self::call(Func::Cos, self.clone())
    }

    pub fn sqrt(&self) -> Self {
        Self::call(Func::Sqrt, self.clone())
    }

    /// `∫_{base}^{var} integrand d(var)` where `var` is chart coordinate `var_index`.
    pub fn antiderivative(
        chart: &Chart,
        integrand: Expression,
        var_index: usize,
        base: f64,
    ) -> Result<Self> {
        if var_index >= chart.dim() {
            return Err(ExprError::UnknownCoordinate(format!("#{var_index}")));
        }
        let var = Symbol {
            index: var_index,
            name: Arc::from(chart.name(var_index)),
        };
        Self::antiderivative_of(integrand, var, base)
    }

    pub(crate) fn antiderivative_of(integrand: Expression, var: Symbol, base: f64) -> Result<Self> {
        if integrand.has_antiderivative_in(var.index) {
            return Err(ExprError::NestedAntiderivative(var.name.to_string()));
        }
        if !base.is_finite() {
            return Err(ExprError::InvalidPoint(format!("antiderivative base {base}")));
        }
        Ok(Self::new(Node::Antiderivative {
            integrand,
            var,
            base,
        }))
    }

    pub fn as_constant(&self) -> Option<f64> {
        match self.node() {
            Node::Const(c) => Some(*c),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.as_constant() == Some(0.0)
    }

    fn children(&self) -> Vec<&Expression> {
        match self.node() {
            Node::Const(_) | Node::Coord(_) | Node::Param(_) => vec![],
            Node::Neg(a) | Node::Pow(a, _) | Node::Call(_, a) => vec![a],
            Node::Add(a, b) | Node::Sub(a, b) | Node::Mul(a, b) | Node::Div(a, b) => vec![a, b],
            Node::Antiderivative { integrand, .. } => vec![integrand],
        }
    }

    fn any_node(&self, pred: &impl Fn(&Node) -> bool) -> bool {
        pred(self.node()) || self.children().into_iter().any(|c| c.any_node(pred))
    }

    /// True if the expression mentions coordinate `index` (including as an
    /// antiderivative variable).
    pub fn depends_on(&self, index: usize) -> bool {
        self.any_node(&|n| match n {
            Node::Coord(s) => s.index == index,
            Node::Antiderivative { var, .. } => var.index == index,
            _ => false,
        })
    }

    /// Largest coordinate index mentioned, if any.
    pub fn max_coordinate(&self) -> Option<usize> {
        let own = match self.node() {
            Node::Coord(s) => Some(s.index),
            Node::Antiderivative { var, .. } => Some(var.index),
            _ => None,
        };
        self.children()
            .into_iter()
            .filter_map(Expression::max_coordinate)
            .chain(own)
            .max()
    }

    pub fn has_antiderivative(&self) -> bool {
        self.any_node(&|n| matches!(n, Node::Antiderivative { .. }))
    }

    fn has_antiderivative_in(&self, index: usize) -> bool {
        self.any_node(&|n| matches!(n, Node::Antiderivative { var, .. } if var.index == index))
    }

    /// Names of the parameters appearing in the expression.
    pub fn parameters(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_params(&mut out);
        out.sort();
        out.dedup();
        out
    }

    fn collect_params(&self, out: &mut Vec<String>) {
        if let Node::Param(p) = self.node() {
            out.push(p.to_string());
        }
        for c in self.children() {
            c.collect_params(out);
        }
    }

    /// Number of nodes in the tree.
    pub fn size(&self) -> usize {
        1 + self.children().into_iter().map(Expression::size).sum::<usize>()
    }
}

impl fmt::Debug for Expression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Expression({self})")
    }
}

macro_rules! binary_op {
    ($trait:ident, $method:ident, $variant:ident) => {
        impl $trait<Expression> for Expression {
            type Output = Expression;
            fn $method(self, rhs: Expression) -> Expression {
                Expression::new(Node::$variant(self, rhs))
            }
        }
        impl $trait<&Expression> for &Expression {
            type Output = Expression;
            fn $method(self, rhs: &Expression) -> Expression {
                Expression::new(Node::$variant(self.clone(), rhs.clone()))
            }
        }
        impl $trait<f64> for Expression {
            type Output = Expression;
            fn $method(self, rhs: f64) -> Expression {
                Expression::new(Node::$variant(self, Expression::constant(rhs)))
            }
        }
        impl $trait<Expression> for f64 {
            type Output = Expression;
            fn $method(self, rhs: Expression) -> Expression {
                Expression::new(Node::$variant(Expression::constant(self), rhs))
            }
        }
    };
}

binary_op!(Add, add, Add);
binary_op!(Sub, sub, Sub);
binary_op!(Mul, mul, Mul);
binary_op!(Div, div, Div);

impl Neg for Expression {
    type Output = Expression;
    fn neg(self) -> Expression {
        Expression::new(Node::Neg(self))
    }
}

impl Neg for &Expression {
    type Output = Expression;
    fn neg(self) -> Expression {
        Expression::new(Node::Neg(self.clone()))
    }
}

/// Sum of the terms, `0` when empty. Zero constants are dropped.
pub fn sum<I: IntoIterator<Item = Expression>>(terms: I) -> Expression {
    terms
        .into_iter()
        .filter(|t| !t.is_zero())
        .reduce(|acc, t| acc + t)
        .unwrap_or_else(Expression::zero)
}
