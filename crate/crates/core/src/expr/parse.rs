//! Recursive-descent parser for the expression text format.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor (('*' | '/') factor)*
//! factor := '-' factor | base ('^' signed-integer)?
//! base   := number | identifier | fn '(' expr ')' | '(' expr ')'
//!         | 'antiderivative' '(' expr ',' coordinate ',' signed-number ')'
//! ```
//!
//! `^` binds tighter than unary minus, so `-u^2` is `-(u^2)`.

use std::sync::Arc;

use super::{is_identifier, Chart, ExprError, Expression, Func, Node, Result, Symbol};

pub(crate) const ANTIDERIVATIVE_KEYWORD: &str = "antiderivative";

/// Parse `text` against `chart`. Identifiers must be chart coordinates or one of
/// `parameter_names`.
pub fn parse<S: AsRef<str>>(text: &str, chart: &Chart, parameter_names: &[S]) -> Result<Expression> {
    let params: Vec<&str> = parameter_names.iter().map(|s| s.as_ref()).collect();
    for p in &params {
        if !is_identifier(p) {
            return Err(ExprError::Syntax {
                position: 0,
                message: format!("parameter name `{p}` is not an identifier"),
            });
        }
    }
    let mut parser = Parser {
        src: text.as_bytes(),
        pos: 0,
        chart,
        params,
    };
    let e = parser.expr()?;
    parser.skip_ws();
    if parser.pos < parser.src.len() {
        return Err(parser.error("unexpected trailing input"));
    }
    Ok(e)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    chart: &'a Chart,
    params: Vec<&'a str>,
}

impl<'a> Parser<'a> {
    fn error(&self, message: &str) -> ExprError {
        ExprError::Syntax {
            position: self.pos,
            message: message.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(&format!("expected `{}`", c as char)))
        }
    }

    fn expr(&mut self) -> Result<Expression> {
        let mut lhs = self.term()?;
        loop {
            if self.eat(b'+') {
                lhs = Expression::new(Node::Add(lhs, self.term()?));
            } else if self.eat(b'-') {
                lhs = Expression::new(Node::Sub(lhs, self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expression> {
        let mut lhs = self.factor()?;
        loop {
            if self.eat(b'*') {
                lhs = Expression::new(Node::Mul(lhs, self.factor()?));
            } else if self.eat(b'/') {
                lhs = Expression::new(Node::Div(lhs, self.factor()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn factor(&mut self) -> Result<Expression> {
        if self.eat(b'-') {
            return Ok(Expression::new(Node::Neg(self.factor()?)));
        }
        let base = self.base()?;
        if self.eat(b'^') {
            let exponent = self.signed_integer()?;
            return Ok(Expression::new(Node::Pow(base, exponent)));
        }
        Ok(base)
    }

    fn signed_integer(&mut self) -> Result<i32> {
        self.skip_ws();
        let start = self.pos;
        if matches!(self.src.get(self.pos), Some(b'-') | Some(b'+')) {
            self.pos += 1;
        }
        let digits = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == digits {
            self.pos = start;
            return Err(self.error("expected integer exponent"));
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        text.parse::<i32>().map_err(|_| ExprError::Syntax {
            position: start,
            message: format!("exponent `{text}` out of range"),
        })
    }

    fn number(&mut self) -> Result<f64> {
        self.skip_ws();
        let start = self.pos;
        let bytes = self.src;
        let mut i = self.pos;
        while i < bytes.len() && bytes[i].is_ascii_digit() {
            i += 1;
        }
        if i < bytes.len() && bytes[i] == b'.' {
            i += 1;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
        }
        if i == start || (i == start + 1 && bytes[start] == b'.') {
            return Err(self.error("expected number"));
        }
        if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
            let mut j = i + 1;
            if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                j += 1;
            }
            let exp_digits = j;
            while j < bytes.len() && bytes[j].is_ascii_digit() {
                j += 1;
            }
            if j > exp_digits {
                i = j;
            }
        }
        let text = std::str::from_utf8(&bytes[start..i]).expect("ascii");
        self.pos = i;
        text.parse::<f64>().map_err(|_| ExprError::Syntax {
            position: start,
            message: format!("bad number `{text}`"),
        })
    }

    fn signed_number(&mut self) -> Result<f64> {
        if self.eat(b'-') {
            Ok(-self.number()?)
        } else {
            self.eat(b'+');
            self.number()
        }
    }

    fn identifier(&mut self) -> Option<(usize, &'a str)> {
        self.skip_ws();
        let start = self.pos;
        let bytes = self.src;
        match bytes.get(start) {
            Some(c) if c.is_ascii_alphabetic() || *c == b'_' => {}
            _ => return None,
        }
        let mut i = start + 1;
        while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
            i += 1;
        }
        self.pos = i;
        Some((start, std::str::from_utf8(&bytes[start..i]).expect("ascii")))
    }

    fn base(&mut self) -> Result<Expression> {
        match self.peek() {
            None => Err(self.error("unexpected end of input")),
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                self.expect(b')')?;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => Ok(Expression::constant(self.number()?)),
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let (start, name) = self.identifier().expect("identifier start checked");
                if self.peek() == Some(b'(') {
                    return self.call(start, name);
                }
                if let Ok(index) = self.chart.index_of(name) {
                    return Ok(self.chart.coord_at(index));
                }
                if self.params.contains(&name) {
                    return Ok(Expression::new(Node::Param(Arc::from(name))));
                }
                Err(ExprError::UnknownIdentifier {
                    name: name.to_string(),
                    position: start,
                })
            }
            Some(c) => Err(self.error(&format!("unexpected character `{}`", c as char))),
        }
    }

    fn call(&mut self, start: usize, name: &str) -> Result<Expression> {
        if name == ANTIDERIVATIVE_KEYWORD {
            self.expect(b'(')?;
            let integrand = self.expr()?;
            self.expect(b',')?;
            let var_pos = self.pos;
            let (_, var_name) = self
                .identifier()
                .ok_or_else(|| self.error("expected coordinate name"))?;
            let index = self.chart.index_of(var_name).map_err(|_| ExprError::UnknownIdentifier {
                name: var_name.to_string(),
                position: var_pos,
            })?;
            self.expect(b',')?;
            let base = self.signed_number()?;
            self.expect(b')')?;
            let var = Symbol {
                index,
                name: Arc::from(var_name),
            };
            return Expression::antiderivative_of(integrand, var, base);
        }
        let func = Func::from_name(name).ok_or_else(|| ExprError::UnknownFunction {
            name: name.to_string(),
            position: start,
        })?;
        self.expect(b'(')?;
        let arg = self.expr()?;
        self.expect(b')')?;
        Ok(Expression::call(func, arg))
    }
}
