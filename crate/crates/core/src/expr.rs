//! A small parser for rational expressions in named variables, used by
//! the cover registry and the command line. Grammar (whitespace is
//! ignored):
//!
//! ```text
//! expr  := term { ('+' | '-') term }
//! term  := unary { ('*' | '/') unary }
//! unary := '-' unary | power
//! power := atom [ '^' uint ]
//! atom  := integer | identifier | '(' expr ')'
//! ```

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::exact::{QuadElem, Rational, RingTag};
use crate::function_field::{BivarPoly, CurveModel, FFElem};
use crate::poly::Poly;

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(i64),
    Var(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Num(i64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn tokenize(text: &str) -> Result<Vec<(usize, Token)>> {
    let mut out = Vec::new();
    let bytes: Vec<char> = text.chars().collect();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let pos = i;
        match c {
            ' ' | '\t' => {
                i += 1;
                continue;
            }
            '+' => out.push((pos, Token::Plus)),
            '-' => out.push((pos, Token::Minus)),
            '*' => out.push((pos, Token::Star)),
            '/' => out.push((pos, Token::Slash)),
            '^' => out.push((pos, Token::Caret)),
            '(' => out.push((pos, Token::LParen)),
            ')' => out.push((pos, Token::RParen)),
            '0'..='9' => {
                let mut n: i64 = 0;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    n = n
                        .checked_mul(10)
                        .and_then(|n| n.checked_add(bytes[i] as i64 - '0' as i64))
                        .ok_or_else(|| Error::Parse {
                            pos,
                            msg: "integer literal too large".into(),
                        })?;
                    i += 1;
                }
                out.push((pos, Token::Num(n)));
                continue;
            }
            c if c.is_ascii_alphabetic() => {
                let mut name = String::new();
                while i < bytes.len() && bytes[i].is_ascii_alphanumeric() {
                    name.push(bytes[i]);
                    i += 1;
                }
                out.push((pos, Token::Ident(name)));
                continue;
            }
            other => {
                return Err(Error::Parse {
                    pos,
                    msg: format!("unexpected character `{other}`"),
                })
            }
        }
        i += 1;
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<(usize, Token)>,
    at: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.at).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.tokens.get(self.at).map_or(self.end, |(p, _)| *p)
    }

    fn bump(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.at).map(|(_, t)| t.clone());
        self.at += 1;
        t
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(Token::Plus) => {
                    self.bump();
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Some(Token::Minus) => {
                    self.bump();
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Some(Token::Star) => {
                    self.bump();
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
                }
                Some(Token::Slash) => {
                    self.bump();
                    lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.peek() == Some(&Token::Minus) {
            self.bump();
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.peek() == Some(&Token::Caret) {
            self.bump();
            let pos = self.pos();
            match self.bump() {
                Some(Token::Num(n)) if (0..=64).contains(&n) => {
                    return Ok(Expr::Pow(Box::new(base), n as u32));
                }
                _ => {
                    return Err(Error::Parse {
                        pos,
                        msg: "exponent must be an integer in 0..=64".into(),
                    })
                }
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        let pos = self.pos();
        match self.bump() {
            Some(Token::Num(n)) => Ok(Expr::Num(n)),
            Some(Token::Ident(name)) => Ok(Expr::Var(name)),
            Some(Token::LParen) => {
                let inner = self.expr()?;
                let pos = self.pos();
                match self.bump() {
                    Some(Token::RParen) => Ok(inner),
                    _ => Err(Error::Parse {
                        pos,
                        msg: "expected `)`".into(),
                    }),
                }
            }
            other => Err(Error::Parse {
                pos,
                msg: format!("expected a value, got {other:?}"),
            }),
        }
    }
}

pub fn parse(text: &str) -> Result<Expr> {
    let tokens = tokenize(text)?;
    let mut parser = Parser {
        tokens,
        at: 0,
        end: text.len(),
    };
    let expr = parser.expr()?;
    if parser.at != parser.tokens.len() {
        return Err(Error::Parse {
            pos: parser.pos(),
            msg: "trailing input".into(),
        });
    }
    Ok(expr)
}

/// Value domain an expression can evaluate into.
pub trait ExprContext {
    type Value: Clone;
    fn constant(&self, n: i64) -> Self::Value;
    fn variable(&self, name: &str) -> Result<Self::Value>;
    fn add(&self, a: &Self::Value, b: &Self::Value) -> Self::Value;
    fn sub(&self, a: &Self::Value, b: &Self::Value) -> Self::Value;
    fn mul(&self, a: &Self::Value, b: &Self::Value) -> Self::Value;
    fn neg(&self, a: &Self::Value) -> Self::Value;
    fn div(&self, a: &Self::Value, b: &Self::Value) -> Result<Self::Value>;
    fn pow(&self, a: &Self::Value, e: u32) -> Self::Value;
}

pub fn eval<C: ExprContext>(expr: &Expr, ctx: &C) -> Result<C::Value> {
    match expr {
        Expr::Num(n) => Ok(ctx.constant(*n)),
        Expr::Var(name) => ctx.variable(name),
        Expr::Neg(a) => Ok(ctx.neg(&eval(a, ctx)?)),
        Expr::Add(a, b) => Ok(ctx.add(&eval(a, ctx)?, &eval(b, ctx)?)),
        Expr::Sub(a, b) => Ok(ctx.sub(&eval(a, ctx)?, &eval(b, ctx)?)),
        Expr::Mul(a, b) => Ok(ctx.mul(&eval(a, ctx)?, &eval(b, ctx)?)),
        Expr::Div(a, b) => ctx.div(&eval(a, ctx)?, &eval(b, ctx)?),
        Expr::Pow(a, e) => Ok(ctx.pow(&eval(a, ctx)?, *e)),
    }
}

fn resolve_named(
    ring: RingTag,
    params: &BTreeMap<String, Rational>,
    name: &str,
) -> Option<QuadElem> {
    if let Some(value) = params.get(name) {
        return Some(QuadElem::from_rational(ring, value.clone()));
    }
    if name == "w" {
        return QuadElem::zeta(ring).ok();
    }
    None
}

/// Evaluates expressions in `x`, `y` (and parameters) as function-field
/// elements on a fixed curve.
pub struct FunctionFieldContext {
    pub curve: Arc<CurveModel>,
    pub params: BTreeMap<String, Rational>,
}

impl ExprContext for FunctionFieldContext {
    type Value = FFElem;

    fn constant(&self, n: i64) -> FFElem {
        FFElem::constant(
            &self.curve,
            QuadElem::from_rational(self.curve.ring, Rational::from_integer(n.into())),
        )
    }

    fn variable(&self, name: &str) -> Result<FFElem> {
        match name {
            "x" => Ok(FFElem::x(&self.curve)),
            "y" => Ok(FFElem::y(&self.curve)),
            _ => resolve_named(self.curve.ring, &self.params, name)
                .map(|c| FFElem::constant(&self.curve, c))
                .ok_or_else(|| Error::Parse {
                    pos: 0,
                    msg: format!("unknown variable `{name}`"),
                }),
        }
    }

    fn add(&self, a: &FFElem, b: &FFElem) -> FFElem {
        a.add(b)
    }
    fn sub(&self, a: &FFElem, b: &FFElem) -> FFElem {
        a.sub(b)
    }
    fn mul(&self, a: &FFElem, b: &FFElem) -> FFElem {
        a.mul(b)
    }
    fn neg(&self, a: &FFElem) -> FFElem {
        a.neg()
    }
    fn div(&self, a: &FFElem, b: &FFElem) -> Result<FFElem> {
        a.div(b)
    }
    fn pow(&self, a: &FFElem, e: u32) -> FFElem {
        a.pow(e)
    }
}

/// Evaluates expressions in `s`, `t` (and parameters) as bivariate
/// polynomials; division is restricted to nonzero constants.
pub struct BivarContext {
    pub ring: RingTag,
    pub params: BTreeMap<String, Rational>,
}

impl ExprContext for BivarContext {
    type Value = BivarPoly;

    fn constant(&self, n: i64) -> BivarPoly {
        BivarPoly::constant(QuadElem::from_rational(
            self.ring,
            Rational::from_integer(n.into()),
        ))
    }

    fn variable(&self, name: &str) -> Result<BivarPoly> {
        match name {
            "s" => Ok(BivarPoly::var_s(self.ring)),
            "t" => Ok(BivarPoly::var_t(self.ring)),
            _ => resolve_named(self.ring, &self.params, name)
                .map(BivarPoly::constant)
                .ok_or_else(|| Error::Parse {
                    pos: 0,
                    msg: format!("unknown variable `{name}`"),
                }),
        }
    }

    fn add(&self, a: &BivarPoly, b: &BivarPoly) -> BivarPoly {
        a.add(b)
    }
    fn sub(&self, a: &BivarPoly, b: &BivarPoly) -> BivarPoly {
        a.sub(b)
    }
    fn mul(&self, a: &BivarPoly, b: &BivarPoly) -> BivarPoly {
        a.mul(b)
    }
    fn neg(&self, a: &BivarPoly) -> BivarPoly {
        a.neg()
    }
    fn div(&self, a: &BivarPoly, b: &BivarPoly) -> Result<BivarPoly> {
        let c = b
            .terms()
            .next()
            .filter(|_| b.term_count() == 1)
            .filter(|(&(i, j), _)| i == 0 && j == 0)
            .map(|(_, c)| c.clone())
            .ok_or_else(|| Error::Parse {
                pos: 0,
                msg: "polynomial division is restricted to constants".into(),
            })?;
        Ok(a.mul(&BivarPoly::constant(c.inv()?)))
    }
    fn pow(&self, a: &BivarPoly, e: u32) -> BivarPoly {
        a.pow(e)
    }
}

/// Evaluates expressions in `x` (and parameters) as univariate
/// polynomials; division is restricted to nonzero constants.
pub struct PolyContext {
    pub ring: RingTag,
    pub params: BTreeMap<String, Rational>,
}

impl ExprContext for PolyContext {
    type Value = Poly;

    fn constant(&self, n: i64) -> Poly {
        Poly::constant(QuadElem::from_rational(
            self.ring,
            Rational::from_integer(n.into()),
        ))
    }

    fn variable(&self, name: &str) -> Result<Poly> {
        match name {
            "x" => Ok(Poly::x(self.ring)),
            _ => resolve_named(self.ring, &self.params, name)
                .map(Poly::constant)
                .ok_or_else(|| Error::Parse {
                    pos: 0,
                    msg: format!("unknown variable `{name}`"),
                }),
        }
    }

    fn add(&self, a: &Poly, b: &Poly) -> Poly {
        a.add(b)
    }
    fn sub(&self, a: &Poly, b: &Poly) -> Poly {
        a.sub(b)
    }
    fn mul(&self, a: &Poly, b: &Poly) -> Poly {
        a.mul(b)
    }
    fn neg(&self, a: &Poly) -> Poly {
        a.neg()
    }
    fn div(&self, a: &Poly, b: &Poly) -> Result<Poly> {
        if b.degree() == Some(0) {
            Ok(a.scale(&b.coeff(0).inv()?))
        } else {
            Err(Error::Parse {
                pos: 0,
                msg: "polynomial division is restricted to constants".into(),
            })
        }
    }
    fn pow(&self, a: &Poly, e: u32) -> Poly {
        a.pow(e)
    }
}

/// Parse a rational literal of the form `p`, `-p`, `p/q`.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let s = text.trim();
    let (num_text, den_text) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: i64 = num_text.parse().map_err(|_| Error::Parse {
        pos: 0,
        msg: format!("invalid rational `{text}`"),
    })?;
    let den: i64 = den_text.parse().map_err(|_| Error::Parse {
        pos: 0,
        msg: format!("invalid rational `{text}`"),
    })?;
    if den == 0 {
        return Err(Error::Parse {
            pos: 0,
            msg: "zero denominator".into(),
        });
    }
    Ok(Rational::new(num.into(), den.into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    fn ff_ctx(ring: RingTag) -> FunctionFieldContext {
        let curve = if ring == RingTag::Rational || ring == RingTag::Eisenstein {
            CurveModel::weierstrass(ring, QuadElem::zero(ring), QuadElem::one(ring)).unwrap()
        } else {
            CurveModel::weierstrass(ring, QuadElem::one(ring), QuadElem::zero(ring)).unwrap()
        };
        FunctionFieldContext {
            curve,
            params: BTreeMap::new(),
        }
    }

    #[test]
    fn parse_and_eval_in_the_function_field() {
        let ctx = ff_ctx(RingTag::Rational);
        let e = parse("-y/x^2").unwrap();
        let got = eval(&e, &ctx).unwrap();
        let x = FFElem::x(&ctx.curve);
        let y = FFElem::y(&ctx.curve);
        assert_eq!(got, y.neg().div(&x.mul(&x)).unwrap());

        let e = parse("(2 - 2*y) / x^2").unwrap();
        let got = eval(&e, &ctx).unwrap();
        let two = FFElem::constant(&ctx.curve, QuadElem::from_rational(RingTag::Rational, rat(2, 1)));
        assert_eq!(
            got,
            two.sub(&y.scale(&QuadElem::from_rational(RingTag::Rational, rat(2, 1))))
                .div(&x.mul(&x))
                .unwrap()
        );
    }

    #[test]
    fn zeta_and_parameters_resolve() {
        let mut ctx = ff_ctx(RingTag::Eisenstein);
        ctx.params.insert("b".into(), rat(2, 1));
        let got = eval(&parse("w*x + b").unwrap(), &ctx).unwrap();
        let x = FFElem::x(&ctx.curve);
        let omega = QuadElem::zeta(RingTag::Eisenstein).unwrap();
        let two = FFElem::constant(&ctx.curve, QuadElem::from_rational(RingTag::Eisenstein, rat(2, 1)));
        assert_eq!(got, x.scale(&omega).add(&two));
        // 1/2 + 3/2*w parses as rational-coefficient arithmetic
        let got = eval(&parse("1/2 + 3/2*w").unwrap(), &ctx).unwrap();
        let expected = FFElem::constant(
            &ctx.curve,
            QuadElem::new(RingTag::Eisenstein, rat(1, 2), rat(3, 2)),
        );
        assert_eq!(got, expected);
    }

    #[test]
    fn bivariate_context() {
        let ctx = BivarContext {
            ring: RingTag::Rational,
            params: BTreeMap::new(),
        };
        let f = eval(&parse("t^6 - s^2*(s+1)^3").unwrap(), &ctx).unwrap();
        assert_eq!(f.deg_t(), 6);
        assert_eq!(f.deg_s(), 5);
        assert!(eval(&parse("t/s").unwrap(), &ctx).is_err());
        assert!(eval(&parse("t/2").unwrap(), &ctx).is_ok());
    }

    #[test]
    fn parse_errors_carry_positions() {
        assert!(matches!(parse("x +"), Err(Error::Parse { .. })));
        assert!(matches!(parse("x ^ y"), Err(Error::Parse { .. })));
        assert!(matches!(parse("(x"), Err(Error::Parse { .. })));
        assert!(matches!(parse("x $ y"), Err(Error::Parse { .. })));
        assert!(matches!(parse("x y"), Err(Error::Parse { .. })));
    }

    #[test]
    fn rational_literals() {
        assert_eq!(parse_rational("3").unwrap(), rat(3, 1));
        assert_eq!(parse_rational("-2").unwrap(), rat(-2, 1));
        assert_eq!(parse_rational("5/10").unwrap(), rat(1, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("a").is_err());
    }

    #[test]
    fn unknown_variables_error() {
        let ctx = ff_ctx(RingTag::Rational);
        assert!(eval(&parse("q + 1").unwrap(), &ctx).is_err());
        // w is undefined over the plain rationals
        assert!(eval(&parse("w").unwrap(), &ctx).is_err());
    }
}
