//! Surface syntax for rational functions in `q, x0, x1, ...`.
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary (('*' | '/') unary)*
//! unary := '-' unary | pow
//! pow   := atom ('^' sint)?
//! atom  := int | 'q' | var | call | '(' expr ')'
//! var   := 'x' digits
//! call  := 'qpoch' '(' expr ',' sint ')'
//! sint  := '-'? int
//! ```
//!
//! Whitespace is insignificant. Exponents and Pochhammer lengths are integer
//! literals; negative values are allowed.

use std::fmt;

use ct_forge_core::laurent::qpochhammer;
use ct_forge_core::{BigRat, ExpVec, FactoredForm, LaurentPoly, QMonomial, QRat};
use num_bigint::BigInt;
use num_traits::ToPrimitive;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl BinOp {
    fn symbol(self) -> char {
        match self {
            BinOp::Add => '+',
            BinOp::Sub => '-',
            BinOp::Mul => '*',
            BinOp::Div => '/',
        }
    }

    fn prec(self) -> u8 {
        match self {
            BinOp::Add | BinOp::Sub => 1,
            BinOp::Mul | BinOp::Div => 2,
        }
    }
}

#[derive(Clone, Debug)]
pub enum ExprKind {
    Int(BigInt),
    Q,
    Var(usize),
    Neg(Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i64),
    QPoch(Box<Expr>, i64),
}

/// A node of the syntax tree. Equality ignores spans.
#[derive(Clone, Debug)]
pub struct Expr {
    pub kind: ExprKind,
    pub span: Span,
}

impl PartialEq for Expr {
    fn eq(&self, other: &Self) -> bool {
        use ExprKind::*;
        match (&self.kind, &other.kind) {
            (Int(a), Int(b)) => a == b,
            (Q, Q) => true,
            (Var(a), Var(b)) => a == b,
            (Neg(a), Neg(b)) => a == b,
            (Binary(o1, l1, r1), Binary(o2, l2, r2)) => o1 == o2 && l1 == l2 && r1 == r2,
            (Pow(a, e1), Pow(b, e2)) | (QPoch(a, e1), QPoch(b, e2)) => e1 == e2 && a == b,
            _ => false,
        }
    }
}

impl Eq for Expr {}

impl Expr {
    pub fn new(kind: ExprKind) -> Self {
        Expr {
            kind,
            span: Span::default(),
        }
    }

    fn prec(&self) -> u8 {
        match &self.kind {
            ExprKind::Binary(op, ..) => op.prec(),
            ExprKind::Neg(_) => 3,
            ExprKind::Pow(..) => 4,
            _ => 5,
        }
    }
}

fn write_wrapped(f: &mut fmt::Formatter<'_>, e: &Expr, paren: bool) -> fmt::Result {
    if paren {
        write!(f, "({e})")
    } else {
        write!(f, "{e}")
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ExprKind::Int(n) => write!(f, "{n}"),
            ExprKind::Q => f.write_str("q"),
            ExprKind::Var(v) => write!(f, "x{v}"),
            ExprKind::Neg(e) => {
                f.write_str("-")?;
                write_wrapped(f, e, e.prec() < 3)
            }
            ExprKind::Binary(op, l, r) => {
                write_wrapped(f, l, l.prec() < op.prec())?;
                write!(f, " {} ", op.symbol())?;
                write_wrapped(f, r, r.prec() <= op.prec())
            }
            ExprKind::Pow(b, e) => {
                write_wrapped(f, b, b.prec() <= 4)?;
                write!(f, "^{e}")
            }
            ExprKind::QPoch(b, n) => write!(f, "qpoch({b}, {n})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Punct(char),
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Int(n) => format!("integer {n}"),
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Punct(c) => format!("`{c}`"),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub found: String,
    pub expected: Vec<String>,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "syntax error at line {}, column {}: found {}",
            self.line, self.column, self.found
        )?;
        if !self.expected.is_empty() {
            write!(f, ", expected one of {}", self.expected.join(" "))?;
        }
        Ok(())
    }
}

impl std::error::Error for ParseError {}

fn line_col(src: &str, offset: usize) -> (usize, usize) {
    let before = &src[..offset.min(src.len())];
    let line = before.matches('\n').count() + 1;
    let col = before
        .rfind('\n')
        .map_or(before.len(), |i| before.len() - i - 1)
        + 1;
    (line, col)
}

fn lex(src: &str) -> Result<Vec<(Tok, Span)>, ParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        let start = i;
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        if c.is_ascii_digit() {
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let n: BigInt = src[start..i].parse().expect("digits");
            out.push((Tok::Int(n), Span { start, end: i }));
        } else if c.is_ascii_alphabetic() {
            while i < bytes.len() && bytes[i].is_ascii_alphanumeric() {
                i += 1;
            }
            out.push((Tok::Ident(src[start..i].into()), Span { start, end: i }));
        } else if "+-*/^(),".contains(c) {
            i += 1;
            out.push((Tok::Punct(c), Span { start, end: i }));
        } else {
            let (line, column) = line_col(src, start);
            let ch = src[start..].chars().next().unwrap_or(c);
            return Err(ParseError {
                line,
                column,
                found: format!("`{ch}`"),
                expected: Vec::new(),
            });
        }
    }
    out.push((
        Tok::Eof,
        Span {
            start: src.len(),
            end: src.len(),
        },
    ));
    Ok(out)
}

const ATOM_START: &[&str] = &["integer", "`q`", "`x<n>`", "`qpoch`", "`(`", "`-`"];

struct Parser<'a> {
    src: &'a str,
    toks: Vec<(Tok, Span)>,
    pos: usize,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn span(&self) -> Span {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> (Tok, Span) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: &[&str]) -> ParseError {
        let (line, column) = line_col(self.src, self.span().start);
        ParseError {
            line,
            column,
            found: self.peek().describe(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
        }
    }

    fn eat(&mut self, c: char) -> bool {
        if *self.peek() == Tok::Punct(c) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char, also: &[&str]) -> Result<Span, ParseError> {
        if *self.peek() == Tok::Punct(c) {
            Ok(self.bump().1)
        } else {
            let want = format!("`{c}`");
            let mut exp: Vec<&str> = also.to_vec();
            exp.push(&want);
            Err(self.error(&exp))
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Tok::Punct('+') => BinOp::Add,
                Tok::Punct('-') => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.term()?;
            lhs = binary(op, lhs, rhs);
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek() {
                Tok::Punct('*') => BinOp::Mul,
                Tok::Punct('/') => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.unary()?;
            lhs = binary(op, lhs, rhs);
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        let start = self.span().start;
        if self.eat('-') {
            let inner = self.unary()?;
            let end = inner.span.end;
            return Ok(Expr {
                kind: ExprKind::Neg(Box::new(inner)),
                span: Span { start, end },
            });
        }
        self.pow()
    }

    fn pow(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if self.eat('^') {
            let (e, end) = self.sint()?;
            let start = base.span.start;
            return Ok(Expr {
                kind: ExprKind::Pow(Box::new(base), e),
                span: Span { start, end },
            });
        }
        Ok(base)
    }

    fn sint(&mut self) -> Result<(i64, usize), ParseError> {
        let neg = self.eat('-');
        match self.peek().clone() {
            Tok::Int(n) => {
                let Some(v) = n.to_i64() else {
                    return Err(self.error(&["an integer that fits in 64 bits"]));
                };
                let end = self.bump().1.end;
                Ok((if neg { -v } else { v }, end))
            }
            _ if neg => Err(self.error(&["integer"])),
            _ => Err(self.error(&["integer", "`-`"])),
        }
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let span = self.span();
        let kind = match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                ExprKind::Int(n)
            }
            Tok::Ident(name) if name == "q" => {
                self.bump();
                ExprKind::Q
            }
            Tok::Ident(name) if name == "qpoch" => {
                self.bump();
                self.expect('(', &[])?;
                let base = self.expr()?;
                self.expect(',', &["`+`", "`-`", "`*`", "`/`", "`^`"])?;
                let (n, _) = self.sint()?;
                let end = self.expect(')', &[])?.end;
                return Ok(Expr {
                    kind: ExprKind::QPoch(Box::new(base), n),
                    span: Span {
                        start: span.start,
                        end,
                    },
                });
            }
            Tok::Ident(name) => match parse_var(&name) {
                Some(v) => {
                    self.bump();
                    ExprKind::Var(v)
                }
                None => return Err(self.error(ATOM_START)),
            },
            Tok::Punct('(') => {
                self.bump();
                let inner = self.expr()?;
                let end = self.expect(')', &["`+`", "`-`", "`*`", "`/`", "`^`"])?.end;
                return Ok(Expr {
                    kind: inner.kind,
                    span: Span {
                        start: span.start,
                        end,
                    },
                });
            }
            _ => return Err(self.error(ATOM_START)),
        };
        Ok(Expr { kind, span })
    }
}

fn binary(op: BinOp, l: Expr, r: Expr) -> Expr {
    let span = Span {
        start: l.span.start,
        end: r.span.end,
    };
    Expr {
        kind: ExprKind::Binary(op, Box::new(l), Box::new(r)),
        span,
    }
}

/// `x12` -> 12.
pub fn parse_var(name: &str) -> Option<usize> {
    let digits = name.strip_prefix('x')?;
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    digits.parse().ok()
}

pub fn parse_expression(src: &str) -> Result<Expr, ParseError> {
    let mut p = Parser {
        src,
        toks: lex(src)?,
        pos: 0,
    };
    let e = p.expr()?;
    if *p.peek() != Tok::Eof {
        return Err(p.error(&["`+`", "`-`", "`*`", "`/`", "`^`", "end of input"]));
    }
    Ok(e)
}

/// Lowered value: a factored rational function when the expression is a
/// product of monomials and binomial powers, otherwise a Laurent polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Value {
    Form(FactoredForm),
    Poly(LaurentPoly),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LowerError {
    pub span: Span,
    pub message: String,
}

impl fmt::Display for LowerError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "cannot lower characters {}..{}: {}",
            self.span.start, self.span.end, self.message
        )
    }
}

impl std::error::Error for LowerError {}

impl Value {
    /// As a factored form, if the value has that shape.
    pub fn to_form(&self) -> Option<FactoredForm> {
        match self {
            Value::Form(f) => Some(f.clone()),
            Value::Poly(p) => poly_to_form(p),
        }
    }

    pub fn to_poly(&self) -> Option<LaurentPoly> {
        match self {
            Value::Poly(p) => Some(p.clone()),
            Value::Form(f) => f.expand_exact().ok(),
        }
    }

    pub fn max_var(&self) -> Option<usize> {
        match self {
            Value::Form(f) => f.max_var(),
            Value::Poly(p) => p.max_var(),
        }
    }
}

/// `c m` or `c1 m1 + c2 m2 = c1 m1 (1 - r M)` with `r` a power of `q`
/// times a rational.
pub fn poly_to_form(p: &LaurentPoly) -> Option<FactoredForm> {
    let terms: Vec<(&ExpVec, &QRat)> = p.terms().collect();
    match terms.as_slice() {
        [] => Some(FactoredForm::zero()),
        [(m, c)] => Some(FactoredForm::monomial_form((*c).clone(), (*m).clone())),
        [(m1, c1), (m2, c2)] => {
            let ratio = c2.checked_div(c1).ok()?;
            let (rc, rq) = (-ratio).as_q_monomial()?;
            let mut f = FactoredForm::monomial_form((*c1).clone(), (*m1).clone());
            f.mul_binomial(QMonomial::new(rc, rq, m2.mul(&m1.inv())), 1)
                .ok()?;
            Some(f)
        }
        _ => None,
    }
}

fn err(e: &Expr, message: impl Into<String>) -> LowerError {
    LowerError {
        span: e.span,
        message: message.into(),
    }
}

fn need_poly(e: &Expr, v: Value) -> Result<LaurentPoly, LowerError> {
    v.to_poly()
        .ok_or_else(|| err(e, "a sum or power involves a denominator factor"))
}

pub fn lower(e: &Expr) -> Result<Value, LowerError> {
    match &e.kind {
        ExprKind::Int(n) => Ok(Value::Poly(LaurentPoly::constant(QRat::from_rat(
            BigRat::from_integer(n.clone()),
        )))),
        ExprKind::Q => Ok(Value::Poly(LaurentPoly::constant(QRat::q()))),
        ExprKind::Var(v) => Ok(Value::Poly(LaurentPoly::var(*v))),
        ExprKind::Neg(inner) => Ok(match lower(inner)? {
            Value::Poly(p) => Value::Poly(-p),
            Value::Form(mut f) => {
                f.mul_scalar(&-QRat::one());
                Value::Form(f)
            }
        }),
        ExprKind::Binary(op, l, r) => {
            let (lv, rv) = (lower(l)?, lower(r)?);
            match op {
                BinOp::Add | BinOp::Sub => {
                    let (lp, rp) = (need_poly(l, lv)?, need_poly(r, rv)?);
                    let sum = if *op == BinOp::Add {
                        &lp + &rp
                    } else {
                        &lp - &rp
                    };
                    // a two-term sum is kept as a binomial factor when it is one
                    Ok(match sum.len() {
                        2 => poly_to_form(&sum).map_or(Value::Poly(sum), Value::Form),
                        _ => Value::Poly(sum),
                    })
                }
                BinOp::Mul => {
                    if let (Some(lf), Some(rf)) = (lv.to_form(), rv.to_form()) {
                        return Ok(Value::Form(lf.mul(&rf)));
                    }
                    Ok(Value::Poly(&need_poly(l, lv)? * &need_poly(r, rv)?))
                }
                BinOp::Div => {
                    let rf = rv.to_form().ok_or_else(|| {
                        err(r, "division is not by a product of monomials and binomials")
                    })?;
                    let inv = rf.inv().map_err(|x| err(r, x.to_string()))?;
                    if let Some(lf) = lv.to_form() {
                        return Ok(Value::Form(lf.mul(&inv)));
                    }
                    if inv.factor_count() == 0 {
                        let lp = need_poly(l, lv)?;
                        return Ok(Value::Poly(lp.mul_term(inv.monomial(), inv.scalar())));
                    }
                    Err(err(
                        e,
                        "a general polynomial over binomial factors has no factored form",
                    ))
                }
            }
        }
        ExprKind::Pow(b, k) => {
            let k32 = i32::try_from(*k).map_err(|_| err(e, "exponent out of range"))?;
            let bv = lower(b)?;
            if let Some(f) = bv.to_form() {
                return f
                    .pow(k32)
                    .map(Value::Form)
                    .map_err(|x| err(e, x.to_string()));
            }
            if *k < 0 {
                return Err(err(
                    e,
                    "negative power of a polynomial that is not a binomial",
                ));
            }
            let p = need_poly(b, bv)?;
            Ok(Value::Poly(
                (0..*k).fold(LaurentPoly::one(), |acc, _| &acc * &p),
            ))
        }
        ExprKind::QPoch(b, n) => {
            let base = match lower(b)? {
                Value::Poly(p) if p.len() == 1 => {
                    let (m, c) = p.terms().next().expect("one term");
                    let (rc, rq) = c
                        .as_q_monomial()
                        .ok_or_else(|| err(b, "qpoch base needs a coefficient c*q^s"))?;
                    QMonomial::new(rc, rq, m.clone())
                }
                Value::Form(f) if f.factor_count() == 0 && !f.is_zero() => {
                    let (rc, rq) = f
                        .scalar()
                        .as_q_monomial()
                        .ok_or_else(|| err(b, "qpoch base needs a coefficient c*q^s"))?;
                    QMonomial::new(rc, rq, f.monomial().clone())
                }
                _ => return Err(err(b, "qpoch base must be a single monomial")),
            };
            qpochhammer(&base, *n)
                .map(Value::Form)
                .map_err(|x| err(e, x.to_string()))
        }
    }
}

/// Parses and lowers in one step.
pub fn parse_and_lower(src: &str) -> Result<Value, String> {
    let ast = parse_expression(src).map_err(|e| e.to_string())?;
    lower(&ast).map_err(|e| e.to_string())
}
