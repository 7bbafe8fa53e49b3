//! Polynomial expressions: a small recursive-descent grammar.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor (('*' | '/') factor)*
//! factor := '-' factor | base ('^' nat)?
//! base   := nat | 'i' | ident | '(' expr ')'
//! ident  := letters digits          e.g. z1, w2, lambda1
//! ```
//!
//! Division is only by nonzero constants, so `1/2`, `i/2` and `(i/2)*z1` are
//! fine while `1/z1` is rejected. Juxtaposition is never multiplication.

use std::fmt;

use malachite_nz::natural::Natural;
use num_traits::Zero;
use thiserror::Error;

use crate::number::GaussRational;
use crate::series::TruncatedSeries;
use crate::vars::VarDecl;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExprErrorKind {
    #[error("unexpected character `{0}`")]
    UnexpectedChar(char),
    #[error("non-ASCII character `{0}`")]
    NonAscii(char),
    #[error("decimal literals are not supported")]
    Decimal,
    #[error("expected {expected}, found {found}")]
    Unexpected { expected: &'static str, found: String },
    #[error("undeclared identifier `{0}`")]
    Undeclared(String),
    #[error("exponent must be a nonnegative integer literal")]
    BadExponent,
    #[error("exponent {0} is too large")]
    ExponentTooLarge(String),
    #[error("division by a non-constant expression")]
    NonConstantDivisor,
    #[error("division by zero")]
    DivisionByZero,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{column}: {kind}")]
pub struct ExprError {
    pub line: usize,
    pub column: usize,
    pub kind: ExprErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExprWarning {
    /// The expanded polynomial has terms above the requested order; they were
    /// dropped.
    Truncated { order: u32, max_degree: u32 },
}

impl fmt::Display for ExprWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExprWarning::Truncated { order, max_degree } => {
                write!(f, "terms up to degree {max_degree} exceed truncation order {order} and were dropped")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Number(Natural),
    ImaginaryUnit,
    /// Position in the variable declaration.
    Var(usize),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    /// Quotient by an expression that evaluates to a nonzero constant.
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
}

impl Expr {
    /// An upper bound for the total degree of the expanded polynomial.
    pub fn degree_bound(&self) -> u64 {
        match self {
            Expr::Number(_) | Expr::ImaginaryUnit => 0,
            Expr::Var(_) => 1,
            Expr::Neg(a) => a.degree_bound(),
            Expr::Add(a, b) | Expr::Sub(a, b) => a.degree_bound().max(b.degree_bound()),
            Expr::Mul(a, b) => a.degree_bound().saturating_add(b.degree_bound()),
            Expr::Div(a, _) => a.degree_bound(),
            Expr::Pow(a, e) => a.degree_bound().saturating_mul(*e as u64),
        }
    }

    /// Expands the expression as a series in `nvars` variables at `order`.
    fn eval(&self, nvars: usize, order: u32) -> TruncatedSeries {
        match self {
            Expr::Number(n) => {
                TruncatedSeries::constant(nvars, order, GaussRational::real(crate::number::Rational::from(n)))
            }
            Expr::ImaginaryUnit => TruncatedSeries::constant(nvars, order, GaussRational::i()),
            Expr::Var(v) => TruncatedSeries::var(nvars, order, *v),
            Expr::Neg(a) => -a.eval(nvars, order),
            Expr::Add(a, b) => &a.eval(nvars, order) + &b.eval(nvars, order),
            Expr::Sub(a, b) => &a.eval(nvars, order) - &b.eval(nvars, order),
            Expr::Mul(a, b) => &a.eval(nvars, order) * &b.eval(nvars, order),
            Expr::Div(a, b) => {
                let inv = b.eval(nvars, 0).constant_term().inv().expect("divisor checked when parsed");
                a.eval(nvars, order).scale(&inv)
            }
            Expr::Pow(a, e) => a.eval(nvars, order).pow(*e),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Num(Natural),
    Ident(String, Option<usize>),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Num(n) => format!("number `{n}`"),
            Tok::Ident(name, Some(k)) => format!("identifier `{name}{k}`"),
            Tok::Ident(name, None) => format!("identifier `{name}`"),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Star => "`*`".into(),
            Tok::Slash => "`/`".into(),
            Tok::Caret => "`^`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::End => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(text: &str) -> Result<Vec<Spanned>, ExprError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut line, mut col) = (1, 1);
    let mut k = 0;
    let err = |line, column, kind| ExprError { line, column, kind };
    while k < chars.len() {
        let ch = chars[k];
        let (l0, c0) = (line, col);
        if ch == '\n' {
            line += 1;
            col = 1;
            k += 1;
            continue;
        }
        if ch.is_ascii_whitespace() {
            col += 1;
            k += 1;
            continue;
        }
        if !ch.is_ascii() {
            return Err(err(l0, c0, ExprErrorKind::NonAscii(ch)));
        }
        let start = k;
        let tok = if ch.is_ascii_digit() {
            while k < chars.len() && chars[k].is_ascii_digit() {
                k += 1;
            }
            if k < chars.len() && chars[k] == '.' {
                return Err(err(l0, c0, ExprErrorKind::Decimal));
            }
            let digits: String = chars[start..k].iter().collect();
            Tok::Num(digits.parse().expect("ascii digits"))
        } else if ch.is_ascii_alphabetic() {
            while k < chars.len() && chars[k].is_ascii_alphabetic() {
                k += 1;
            }
            let name: String = chars[start..k].iter().collect();
            let digit_start = k;
            while k < chars.len() && chars[k].is_ascii_digit() {
                k += 1;
            }
            let index = (k > digit_start)
                .then(|| chars[digit_start..k].iter().collect::<String>().parse().unwrap_or(usize::MAX));
            Tok::Ident(name, index)
        } else {
            k += 1;
            match ch {
                '+' => Tok::Plus,
                '-' => Tok::Minus,
                '*' => Tok::Star,
                '/' => Tok::Slash,
                '^' => Tok::Caret,
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                _ => return Err(err(l0, c0, ExprErrorKind::UnexpectedChar(ch))),
            }
        };
        col += k - start;
        out.push(Spanned { tok, line: l0, column: c0 });
    }
    out.push(Spanned { tok: Tok::End, line, column: col });
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Spanned>,
    pos: usize,
    vars: &'a VarDecl,
}

impl Parser<'_> {
    fn peek(&self) -> &Spanned {
        &self.toks[self.pos]
    }

    fn bump(&mut self) -> Spanned {
        let t = self.toks[self.pos].clone();
        if t.tok != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn fail<T>(&self, at: &Spanned, kind: ExprErrorKind) -> Result<T, ExprError> {
        Err(ExprError { line: at.line, column: at.column, kind })
    }

    fn unexpected<T>(&self, expected: &'static str) -> Result<T, ExprError> {
        let at = self.peek().clone();
        self.fail(&at, ExprErrorKind::Unexpected { expected, found: at.tok.describe() })
    }

    fn expr(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek().tok {
                Tok::Plus => {
                    self.bump();
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Tok::Minus => {
                    self.bump();
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.factor()?;
        loop {
            match self.peek().tok {
                Tok::Star => {
                    self.bump();
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.factor()?));
                }
                Tok::Slash => {
                    self.bump();
                    let at = self.peek().clone();
                    let rhs = self.factor()?;
                    if rhs.degree_bound() > 0 && has_var(&rhs) {
                        return self.fail(&at, ExprErrorKind::NonConstantDivisor);
                    }
                    if rhs.eval(self.vars.len(), 0).constant_term().is_zero() {
                        return self.fail(&at, ExprErrorKind::DivisionByZero);
                    }
                    lhs = Expr::Div(Box::new(lhs), Box::new(rhs));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn factor(&mut self) -> Result<Expr, ExprError> {
        if self.peek().tok == Tok::Minus {
            self.bump();
            return Ok(Expr::Neg(Box::new(self.factor()?)));
        }
        let base = self.base()?;
        if self.peek().tok != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let at = self.bump();
        match at.tok {
            Tok::Num(ref n) => match u32::try_from(n) {
                Ok(e) => Ok(Expr::Pow(Box::new(base), e)),
                Err(_) => self.fail(&at, ExprErrorKind::ExponentTooLarge(n.to_string())),
            },
            _ => self.fail(&at, ExprErrorKind::BadExponent),
        }
    }

    fn base(&mut self) -> Result<Expr, ExprError> {
        let at = self.peek().clone();
        match at.tok {
            Tok::Num(n) => {
                self.bump();
                Ok(Expr::Number(n))
            }
            Tok::Ident(ref name, None) if name == "i" => {
                self.bump();
                Ok(Expr::ImaginaryUnit)
            }
            Tok::Ident(ref name, index) => {
                self.bump();
                let spelled = match index {
                    Some(k) => format!("{name}{k}"),
                    None => name.clone(),
                };
                match index.and_then(|k| self.vars.resolve(name, k)) {
                    Some(pos) => Ok(Expr::Var(pos)),
                    None => self.fail(&at, ExprErrorKind::Undeclared(spelled)),
                }
            }
            Tok::LParen => {
                self.bump();
                let inner = self.expr()?;
                if self.peek().tok != Tok::RParen {
                    return self.unexpected("`)`");
                }
                self.bump();
                Ok(inner)
            }
            _ => self.unexpected("a number, `i`, a variable or `(`"),
        }
    }
}

fn has_var(e: &Expr) -> bool {
    match e {
        Expr::Number(_) | Expr::ImaginaryUnit => false,
        Expr::Var(_) => true,
        Expr::Neg(a) | Expr::Pow(a, _) => has_var(a),
        Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => has_var(a) || has_var(b),
    }
}

/// Parses `text` into an expression tree over the declared variables.
pub fn parse_ast(text: &str, vars: &VarDecl) -> Result<Expr, ExprError> {
    let mut p = Parser { toks: lex(text)?, pos: 0, vars };
    let e = p.expr()?;
    if p.peek().tok != Tok::End {
        return p.unexpected("an operator or end of input");
    }
    Ok(e)
}

/// Parses and expands `text` at truncation `order`.
pub fn parse_expr(text: &str, vars: &VarDecl, order: u32) -> Result<TruncatedSeries, ExprError> {
    parse_expr_with_warnings(text, vars, order).map(|(s, _)| s)
}

/// Headroom above `order` used to detect dropped terms exactly.
const WARN_HEADROOM: u64 = 64;

/// Like [`parse_expr`], also reporting terms lost to truncation.
pub fn parse_expr_with_warnings(
    text: &str,
    vars: &VarDecl,
    order: u32,
) -> Result<(TruncatedSeries, Vec<ExprWarning>), ExprError> {
    let ast = parse_ast(text, vars)?;
    let bound = ast.degree_bound();
    let wide = bound.min(order as u64 + WARN_HEADROOM).max(order as u64) as u32;
    let full = ast.eval(vars.len(), wide);
    let mut warnings = Vec::new();
    if let Some(max_degree) = full.max_degree().filter(|&d| d > order) {
        warnings.push(ExprWarning::Truncated { order, max_degree });
    }
    Ok((full.truncate(order), warnings))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::MultiIndex;

    fn zw() -> VarDecl {
        VarDecl::parse("z:2,w:2").unwrap()
    }

    fn q(n: i64, d: i64) -> GaussRational {
        GaussRational::ratio(n, d)
    }

    #[test]
    fn sphere_defining_function() {
        let rho = parse_expr("-(i/2)*(z2 - w2) - z1*w1", &zw(), 8).unwrap();
        let half_i = q(1, 2) * GaussRational::i();
        let expected = TruncatedSeries::from_terms(
            4,
            8,
            [
                (MultiIndex::new([0, 1, 0, 0]), -half_i.clone()),
                (MultiIndex::new([0, 0, 0, 1]), half_i),
                (MultiIndex::new([1, 0, 1, 0]), GaussRational::from(-1)),
            ],
        )
        .unwrap();
        assert_eq!(rho, expected);
    }

    #[test]
    fn truncation_warning() {
        let (s, w) = parse_expr_with_warnings("z1^2", &zw(), 1).unwrap();
        assert!(s.is_zero());
        assert_eq!(s.order(), 1);
        assert_eq!(w, vec![ExprWarning::Truncated { order: 1, max_degree: 2 }]);
        let (_, w) = parse_expr_with_warnings("z1^2 - z1*z1 + z1", &zw(), 1).unwrap();
        assert!(w.is_empty());
    }

    #[test]
    fn precedence() {
        let d = VarDecl::parse("z:1").unwrap();
        let v = |t: &str| parse_expr(t, &d, 6).unwrap();
        assert_eq!(v("-z1^2"), -v("z1*z1"));
        assert_eq!(v("2*z1^2 + 1"), v("1 + z1*z1*2"));
        assert_eq!(v("(1 + z1)^3"), v("1 + 3*z1 + 3*z1^2 + z1^3"));
        assert_eq!(v("1 - 2 - 3"), v("-4"));
        assert_eq!(v("i*i"), v("-1"));
        assert_eq!(v("z1/2/2"), v("z1/4"));
        assert_eq!(v("z1/(1+1)"), v("z1/2"));
        assert_eq!(v("z1^0"), v("1"));
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse_expr("z1 + q", &zw(), 4).unwrap_err();
        assert_eq!((e.line, e.column), (1, 6));
        assert_eq!(e.kind, ExprErrorKind::Undeclared("q".into()));
        let e = parse_expr("z1 +\n  2z1", &zw(), 4).unwrap_err();
        assert_eq!((e.line, e.column), (2, 4));
        assert!(matches!(e.kind, ExprErrorKind::Unexpected { .. }));
        assert_eq!(parse_expr("z3", &zw(), 4).unwrap_err().kind, ExprErrorKind::Undeclared("z3".into()));
        assert_eq!(parse_expr("z1^-1", &zw(), 4).unwrap_err().kind, ExprErrorKind::BadExponent);
        assert_eq!(parse_expr("z1^(2)", &zw(), 4).unwrap_err().kind, ExprErrorKind::BadExponent);
        assert_eq!(parse_expr("1.5*z1", &zw(), 4).unwrap_err().kind, ExprErrorKind::Decimal);
        assert_eq!(parse_expr("1/z1", &zw(), 4).unwrap_err().kind, ExprErrorKind::NonConstantDivisor);
        assert_eq!(parse_expr("z1/(1-1)", &zw(), 4).unwrap_err().kind, ExprErrorKind::DivisionByZero);
        assert_eq!(parse_expr("z₁", &zw(), 4).unwrap_err().kind, ExprErrorKind::NonAscii('₁'));
        assert!(parse_expr("(z1", &zw(), 4).is_err());
        assert!(parse_expr("z1 z2", &zw(), 4).is_err());
        assert!(parse_expr("", &zw(), 4).is_err());
    }

    #[test]
    fn multi_letter_names() {
        let d = VarDecl::parse("omega:3,lambda:2").unwrap();
        let s = parse_expr("omega3 - 2*i*omega1*omega2*lambda1*lambda2", &d, 8).unwrap();
        assert_eq!(s.num_terms(), 2);
        assert_eq!(s.coeff(&MultiIndex::new([1, 1, 0, 1, 1])), GaussRational::from_ints(0, -2));
    }

    #[test]
    fn rendered_expression_reparses() {
        let s = parse_expr("(1/2 - 3*i)*z1^2*w2 - i*z2 + 7/3 - i/5*w1", &zw(), 5).unwrap();
        assert_eq!(parse_expr(&s.to_expr(&zw()), &zw(), 5).unwrap(), s);
    }
}
