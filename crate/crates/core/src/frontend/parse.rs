//! Lexer, parser and lowering for form, field and vector-valued form expressions.
//!
//! ```text
//! sum     := tensor (('+' | '-') tensor)*
//! tensor  := product ('@' product)?
//! product := unary (('*' | '^' | <juxtaposition>) unary | '/' INT)*
//! unary   := ('-' | '+') unary | postfix
//! postfix := primary ('^' INT)*
//! primary := NUMBER | xK | dxK | d/dxK | Id | 'd' '(' sum ')' | '(' sum ')'
//! ```
//!
//! `^` followed by an integer literal is a power, otherwise a wedge.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exterior::{HomogeneousField, HomogeneousForm};
use crate::scalar_poly::{HomogeneousPolynomial, Scalar};
use crate::vvforms::VectorValuedForm;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub struct Span {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

pub(crate) fn parse_error(span: Span, message: impl Into<String>) -> Error {
    Error::Parse {
        line: span.line,
        column: span.column,
        message: message.into(),
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub(crate) enum Tok {
    Int(BigInt),
    Var(usize),
    Dx(usize),
    FieldSym(usize),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    At,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Eq,
    Dot,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Int(v) => format!("number {v}"),
            Tok::Var(k) => format!("x{}", k + 1),
            Tok::Dx(k) => format!("dx{}", k + 1),
            Tok::FieldSym(k) => format!("d/dx{}", k + 1),
            Tok::Ident(s) => format!("'{s}'"),
            Tok::Plus => "'+'".into(),
            Tok::Minus => "'-'".into(),
            Tok::Star => "'*'".into(),
            Tok::Caret => "'^'".into(),
            Tok::Slash => "'/'".into(),
            Tok::At => "'@'".into(),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::LBracket => "'['".into(),
            Tok::RBracket => "']'".into(),
            Tok::Comma => "','".into(),
            Tok::Eq => "'='".into(),
            Tok::Dot => "'.'".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

fn variable_index(digits: &str, span: Span) -> Result<usize> {
    let k: usize = digits
        .parse()
        .map_err(|_| parse_error(span, format!("bad variable index {digits:?}")))?;
    if k == 0 {
        return Err(parse_error(span, "variables are numbered from 1"));
    }
    Ok(k - 1)
}

pub(crate) fn lex(text: &str) -> Result<Vec<(Tok, Span)>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let span = Span { line, column: col };
        let start = i;
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        let tok = if c.is_ascii_digit() {
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            Tok::Int(s.parse().expect("digits"))
        } else if c.is_ascii_alphabetic() || c == '_' {
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let word: String = chars[start..i].iter().collect();
            let rest: String = chars[i..].iter().take(3).collect();
            if word == "d" && rest == "/dx" {
                let j = i + 3;
                let mut e = j;
                while e < chars.len() && chars[e].is_ascii_digit() {
                    e += 1;
                }
                if e == j {
                    return Err(parse_error(span, "expected a variable index after d/dx"));
                }
                let digits: String = chars[j..e].iter().collect();
                i = e;
                Tok::FieldSym(variable_index(&digits, span)?)
            } else if let Some(d) = word.strip_prefix("dx").filter(|d| is_index(d)) {
                Tok::Dx(variable_index(d, span)?)
            } else if let Some(d) = word.strip_prefix('x').filter(|d| is_index(d)) {
                Tok::Var(variable_index(d, span)?)
            } else {
                Tok::Ident(word)
            }
        } else {
            i += 1;
            match c {
                '+' => Tok::Plus,
                '-' | '−' => Tok::Minus,
                '*' => Tok::Star,
                '^' | '∧' => Tok::Caret,
                '/' => Tok::Slash,
                '@' | '⊗' => Tok::At,
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                '[' => Tok::LBracket,
                ']' => Tok::RBracket,
                ',' => Tok::Comma,
                '=' => Tok::Eq,
                '.' => Tok::Dot,
                other => return Err(parse_error(span, format!("unexpected character {other:?}"))),
            }
        };
        col += i - start;
        out.push((tok, span));
    }
    out.push((Tok::Eof, Span { line, column: col }));
    Ok(out)
}

fn is_index(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_ascii_digit())
}

/// Expression tree before lowering.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum ExprAst {
    Number(BigInt, Span),
    Var(usize, Span),
    Dx(usize, Span),
    Field(usize, Span),
    Identity(Span),
    Differential(Box<ExprAst>, Span),
    Neg(Box<ExprAst>, Span),
    Sum(Box<ExprAst>, Box<ExprAst>, Span),
    Difference(Box<ExprAst>, Box<ExprAst>, Span),
    Product(Box<ExprAst>, Box<ExprAst>, Span),
    Power(Box<ExprAst>, u32, Span),
    Quotient(Box<ExprAst>, BigInt, Span),
    Tensor(Box<ExprAst>, Box<ExprAst>, Span),
}

impl ExprAst {
    pub fn span(&self) -> Span {
        match self {
            ExprAst::Number(_, s)
            | ExprAst::Var(_, s)
            | ExprAst::Dx(_, s)
            | ExprAst::Field(_, s)
            | ExprAst::Identity(s)
            | ExprAst::Differential(_, s)
            | ExprAst::Neg(_, s)
            | ExprAst::Sum(_, _, s)
            | ExprAst::Difference(_, _, s)
            | ExprAst::Product(_, _, s)
            | ExprAst::Power(_, _, s)
            | ExprAst::Quotient(_, _, s)
            | ExprAst::Tensor(_, _, s) => *s,
        }
    }

    /// Largest variable index mentioned, 1-based.
    pub fn max_variable(&self) -> usize {
        match self {
            ExprAst::Number(..) | ExprAst::Identity(_) => 0,
            ExprAst::Var(k, _) | ExprAst::Dx(k, _) | ExprAst::Field(k, _) => k + 1,
            ExprAst::Differential(e, _)
            | ExprAst::Neg(e, _)
            | ExprAst::Power(e, _, _)
            | ExprAst::Quotient(e, _, _) => e.max_variable(),
            ExprAst::Sum(a, b, _)
            | ExprAst::Difference(a, b, _)
            | ExprAst::Product(a, b, _)
            | ExprAst::Tensor(a, b, _) => a.max_variable().max(b.max_variable()),
        }
    }
}

pub(crate) struct Parser {
    toks: Vec<(Tok, Span)>,
    pos: usize,
}

impl Parser {
    pub(crate) fn new(text: &str) -> Result<Self> {
        Ok(Parser {
            toks: lex(text)?,
            pos: 0,
        })
    }

    pub(crate) fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    pub(crate) fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].0
    }

    pub(crate) fn span(&self) -> Span {
        self.toks[self.pos].1
    }

    pub(crate) fn bump(&mut self) -> (Tok, Span) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    pub(crate) fn expect(&mut self, tok: Tok) -> Result<Span> {
        if *self.peek() == tok {
            Ok(self.bump().1)
        } else {
            Err(parse_error(
                self.span(),
                format!(
                    "expected {}, found {}",
                    tok.describe(),
                    self.peek().describe()
                ),
            ))
        }
    }

    pub(crate) fn expect_end(&self) -> Result<()> {
        if *self.peek() == Tok::Eof {
            Ok(())
        } else {
            Err(parse_error(
                self.span(),
                format!("unexpected {}", self.peek().describe()),
            ))
        }
    }

    pub(crate) fn integer(&mut self) -> Result<BigInt> {
        let negative = if *self.peek() == Tok::Minus {
            self.bump();
            true
        } else {
            false
        };
        match self.bump() {
            (Tok::Int(v), _) => Ok(if negative { -v } else { v }),
            (t, s) => Err(parse_error(
                s,
                format!("expected an integer, found {}", t.describe()),
            )),
        }
    }

    pub(crate) fn sum(&mut self) -> Result<ExprAst> {
        let mut lhs = self.tensor()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    let s = self.bump().1;
                    lhs = ExprAst::Sum(Box::new(lhs), Box::new(self.tensor()?), s);
                }
                Tok::Minus => {
                    let s = self.bump().1;
                    lhs = ExprAst::Difference(Box::new(lhs), Box::new(self.tensor()?), s);
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn tensor(&mut self) -> Result<ExprAst> {
        let lhs = self.product()?;
        if *self.peek() == Tok::At {
            let s = self.bump().1;
            let rhs = self.product()?;
            return Ok(ExprAst::Tensor(Box::new(lhs), Box::new(rhs), s));
        }
        Ok(lhs)
    }

    fn starts_primary(&self) -> bool {
        match self.peek() {
            Tok::Int(_) | Tok::Var(_) | Tok::Dx(_) | Tok::FieldSym(_) | Tok::LParen => true,
            Tok::Ident(w) => w == "Id" || (w == "d" && *self.peek_at(1) == Tok::LParen),
            _ => false,
        }
    }

    fn product(&mut self) -> Result<ExprAst> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Tok::Star | Tok::Caret => {
                    let s = self.bump().1;
                    lhs = ExprAst::Product(Box::new(lhs), Box::new(self.unary()?), s);
                }
                Tok::Slash => {
                    let s = self.bump().1;
                    match self.bump() {
                        (Tok::Int(v), vs) => {
                            if v.is_zero() {
                                return Err(parse_error(vs, "division by zero"));
                            }
                            lhs = ExprAst::Quotient(Box::new(lhs), v, s);
                        }
                        (t, ts) => {
                            return Err(parse_error(
                                ts,
                                format!("expected an integer divisor, found {}", t.describe()),
                            ))
                        }
                    }
                }
                _ if self.starts_primary() => {
                    let s = self.span();
                    lhs = ExprAst::Product(Box::new(lhs), Box::new(self.unary()?), s);
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<ExprAst> {
        match self.peek() {
            Tok::Minus => {
                let s = self.bump().1;
                Ok(ExprAst::Neg(Box::new(self.unary()?), s))
            }
            Tok::Plus => {
                self.bump();
                self.unary()
            }
            _ => self.postfix(),
        }
    }

    fn postfix(&mut self) -> Result<ExprAst> {
        let mut base = self.primary()?;
        while *self.peek() == Tok::Caret {
            let Tok::Int(e) = self.peek_at(1).clone() else {
                break;
            };
            let s = self.bump().1;
            self.bump();
            let e = e
                .to_u32()
                .ok_or_else(|| parse_error(s, "exponent too large"))?;
            base = ExprAst::Power(Box::new(base), e, s);
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<ExprAst> {
        let (tok, s) = self.bump();
        match tok {
            Tok::Int(v) => Ok(ExprAst::Number(v, s)),
            Tok::Var(k) => Ok(ExprAst::Var(k, s)),
            Tok::Dx(k) => Ok(ExprAst::Dx(k, s)),
            Tok::FieldSym(k) => Ok(ExprAst::Field(k, s)),
            Tok::Ident(w) if w == "Id" => Ok(ExprAst::Identity(s)),
            Tok::Ident(w) if w == "d" => {
                self.expect(Tok::LParen)?;
                let inner = self.sum()?;
                self.expect(Tok::RParen)?;
                Ok(ExprAst::Differential(Box::new(inner), s))
            }
            Tok::LParen => {
                let inner = self.sum()?;
                self.expect(Tok::RParen)?;
                Ok(inner)
            }
            other => Err(parse_error(s, format!("unexpected {}", other.describe()))),
        }
    }
}

/// Parses an expression without lowering it.
pub fn parse_ast(text: &str) -> Result<ExprAst> {
    let mut p = Parser::new(text)?;
    let e = p.sum()?;
    p.expect_end()?;
    Ok(e)
}

/// A possibly inhomogeneous value, split into homogeneous pieces.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Value {
    Forms(BTreeMap<(i64, i64), HomogeneousForm>),
    Fields(BTreeMap<i64, HomogeneousField>),
    VectorForms(BTreeMap<(i64, i64), VectorValuedForm>),
}

/// A homogeneous lowered value.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Parsed {
    Form(HomogeneousForm),
    Field(HomogeneousField),
    VectorForm(VectorValuedForm),
}

impl Parsed {
    pub fn kind(&self) -> &'static str {
        match self {
            Parsed::Form(_) => "form",
            Parsed::Field(_) => "field",
            Parsed::VectorForm(_) => "vector-valued-form",
        }
    }

    pub fn render(&self) -> String {
        match self {
            Parsed::Form(f) => f.render(),
            Parsed::Field(f) => f.render(),
            Parsed::VectorForm(f) => f.render(),
        }
    }
}

fn single<K: Ord + Clone, V>(key: K, v: V) -> BTreeMap<K, V> {
    BTreeMap::from([(key, v)])
}

fn merge<K: Ord + Clone, V: Clone>(
    mut a: BTreeMap<K, V>,
    b: BTreeMap<K, V>,
    add: impl Fn(&V, &V) -> Result<V>,
) -> Result<BTreeMap<K, V>> {
    for (k, v) in b {
        let next = match a.get(&k) {
            Some(prev) => add(prev, &v)?,
            None => v,
        };
        a.insert(k, next);
    }
    Ok(a)
}

struct Lowering {
    n: usize,
}

impl Lowering {
    fn index(&self, k: usize, s: Span) -> Result<usize> {
        if k < self.n {
            Ok(k)
        } else {
            Err(parse_error(
                s,
                format!("x{} exceeds the variable count n = {}", k + 1, self.n),
            ))
        }
    }

    fn constant(&self, v: Scalar) -> Value {
        Value::Forms(single((0, 0), HomogeneousForm::constant(self.n, v)))
    }

    fn lower(&self, e: &ExprAst) -> Result<Value> {
        let at = |err: Error| match err {
            Error::Parse { .. } => err,
            other => parse_error(e.span(), other.to_string()),
        };
        match e {
            ExprAst::Number(v, _) => Ok(self.constant(Scalar::from_integer(v.clone()))),
            ExprAst::Var(k, s) => {
                let f = HomogeneousForm::coordinate(self.n, self.index(*k, *s)?)?;
                Ok(Value::Forms(single((0, 1), f)))
            }
            ExprAst::Dx(k, s) => {
                let f = HomogeneousForm::dx(self.n, self.index(*k, *s)?)?;
                Ok(Value::Forms(single((1, 1), f)))
            }
            ExprAst::Field(k, s) => {
                let f = HomogeneousField::coordinate(self.n, self.index(*k, *s)?)?;
                Ok(Value::Fields(single(-1, f)))
            }
            ExprAst::Identity(_) => Ok(Value::VectorForms(single(
                (1, 0),
                VectorValuedForm::identity(self.n),
            ))),
            ExprAst::Differential(inner, _) => match self.lower(inner)? {
                Value::Forms(m) => Ok(Value::Forms(
                    m.into_values()
                        .map(|f| {
                            let g = f.d();
                            (g.bidegree(), g)
                        })
                        .collect(),
                )),
                _ => Err(parse_error(e.span(), "d(...) applies to forms only")),
            },
            ExprAst::Neg(inner, _) => Ok(scale(self.lower(inner)?, &-Scalar::one())),
            ExprAst::Quotient(inner, v, _) => Ok(scale(
                self.lower(inner)?,
                &Scalar::new(BigInt::one(), v.clone()),
            )),
            ExprAst::Sum(a, b, _) => add(self.lower(a)?, self.lower(b)?).map_err(at),
            ExprAst::Difference(a, b, _) => {
                add(self.lower(a)?, scale(self.lower(b)?, &-Scalar::one())).map_err(at)
            }
            ExprAst::Product(a, b, _) => mul(self.lower(a)?, self.lower(b)?).map_err(at),
            ExprAst::Power(base, k, _) => {
                let b = self.lower(base)?;
                let mut acc = self.constant(Scalar::one());
                for _ in 0..*k {
                    acc = mul(acc, b.clone()).map_err(at)?;
                }
                Ok(acc)
            }
            ExprAst::Tensor(a, b, _) => tensor(self.lower(a)?, self.lower(b)?).map_err(at),
        }
    }
}

fn scale(v: Value, s: &Scalar) -> Value {
    match v {
        Value::Forms(m) => Value::Forms(m.into_iter().map(|(k, f)| (k, f.scale(s))).collect()),
        Value::Fields(m) => Value::Fields(m.into_iter().map(|(k, f)| (k, f.scale(s))).collect()),
        Value::VectorForms(m) => {
            Value::VectorForms(m.into_iter().map(|(k, f)| (k, f.scale(s))).collect())
        }
    }
}

fn add(a: Value, b: Value) -> Result<Value> {
    match (a, b) {
        (Value::Forms(a), Value::Forms(b)) => Ok(Value::Forms(merge(a, b, |x, y| x.add(y))?)),
        (Value::Fields(a), Value::Fields(b)) => Ok(Value::Fields(merge(a, b, |x, y| x.add(y))?)),
        (Value::VectorForms(a), Value::VectorForms(b)) => {
            Ok(Value::VectorForms(merge(a, b, |x, y| x.add(y))?))
        }
        (a, b) => Err(Error::InvalidTerm(format!(
            "cannot add a {} and a {}",
            kind_name(&a),
            kind_name(&b)
        ))),
    }
}

fn kind_name(v: &Value) -> &'static str {
    match v {
        Value::Forms(_) => "form",
        Value::Fields(_) => "vector field",
        Value::VectorForms(_) => "vector-valued form",
    }
}

fn polynomial_pieces(
    m: &BTreeMap<(i64, i64), HomogeneousForm>,
) -> Result<Vec<HomogeneousPolynomial>> {
    m.values()
        .filter(|f| !f.is_zero() || f.degree() == 0)
        .map(|f| {
            f.to_polynomial().ok_or_else(|| {
                Error::InvalidTerm(
                    "a vector field can only be multiplied by a function; use @ for a tensor"
                        .to_string(),
                )
            })
        })
        .collect()
}

fn mul(a: Value, b: Value) -> Result<Value> {
    match (a, b) {
        (Value::Forms(a), Value::Forms(b)) => {
            let mut out = BTreeMap::new();
            for x in a.values() {
                for y in b.values() {
                    let p = x.wedge(y)?;
                    out = merge(out, single(p.bidegree(), p), |u, v| u.add(v))?;
                }
            }
            Ok(Value::Forms(out))
        }
        (Value::Forms(f), Value::Fields(x)) | (Value::Fields(x), Value::Forms(f)) => {
            let mut out = BTreeMap::new();
            for p in polynomial_pieces(&f)? {
                for field in x.values() {
                    let g = field.mul_polynomial(&p)?;
                    out = merge(out, single(g.weight(), g), |u, v| u.add(v))?;
                }
            }
            Ok(Value::Fields(out))
        }
        (Value::Forms(f), Value::VectorForms(k)) => {
            let mut out = BTreeMap::new();
            for omega in f.values() {
                for kk in k.values() {
                    let g = kk.wedge_form(omega)?;
                    out = merge(out, single((g.degree(), g.weight()), g), |u, v| u.add(v))?;
                }
            }
            Ok(Value::VectorForms(out))
        }
        (a, b) => Err(Error::InvalidTerm(format!(
            "cannot multiply a {} by a {}",
            kind_name(&a),
            kind_name(&b)
        ))),
    }
}

fn tensor(a: Value, b: Value) -> Result<Value> {
    match (a, b) {
        (Value::Forms(f), Value::Fields(x)) => {
            let mut out = BTreeMap::new();
            let n = f.values().next().map(HomogeneousForm::n).unwrap_or(0);
            for omega in f.values() {
                for field in x.values() {
                    let (r, b) = omega.bidegree();
                    let g =
                        VectorValuedForm::from_pairs(n, r, b + field.weight(), [(omega, field)])?;
                    out = merge(out, single((g.degree(), g.weight()), g), |u, v| u.add(v))?;
                }
            }
            Ok(Value::VectorForms(out))
        }
        (a, b) => Err(Error::InvalidTerm(format!(
            "@ expects a form on the left and a vector field on the right, got a {} and a {}",
            kind_name(&a),
            kind_name(&b)
        ))),
    }
}

/// Lowers an expression in `n` variables (inferred from the largest index when `None`).
pub fn lower(ast: &ExprAst, n: Option<usize>) -> Result<Value> {
    let n = n.unwrap_or_else(|| ast.max_variable().max(1));
    Lowering { n }.lower(ast)
}

fn homogeneous<K: Ord + Clone + fmt::Debug, V: Clone>(
    m: BTreeMap<K, V>,
    is_zero: impl Fn(&V) -> bool,
    span: Span,
) -> Result<V> {
    let nonzero: Vec<(&K, &V)> = m.iter().filter(|(_, v)| !is_zero(v)).collect();
    match nonzero.len() {
        0 => Ok(m
            .into_iter()
            .next()
            .map(|(_, v)| v)
            .expect("every lowered value has a piece")),
        1 => Ok(nonzero[0].1.clone()),
        _ => {
            let keys: Vec<String> = nonzero.iter().map(|(k, _)| format!("{k:?}")).collect();
            let _ = span;
            Err(Error::Inhomogeneous(keys.join(", ")))
        }
    }
}

/// Parses and lowers a homogeneous form, field or vector-valued form.
pub fn parse_value(text: &str, n: Option<usize>) -> Result<Parsed> {
    let ast = parse_ast(text)?;
    let span = ast.span();
    match lower(&ast, n)? {
        Value::Forms(m) => Ok(Parsed::Form(homogeneous(
            m,
            HomogeneousForm::is_zero,
            span,
        )?)),
        Value::Fields(m) => Ok(Parsed::Field(homogeneous(
            m,
            HomogeneousField::is_zero,
            span,
        )?)),
        Value::VectorForms(m) => Ok(Parsed::VectorForm(homogeneous(
            m,
            VectorValuedForm::is_zero,
            span,
        )?)),
    }
}

/// Parses a homogeneous differential form.
pub fn parse_form(text: &str, n: Option<usize>) -> Result<HomogeneousForm> {
    match parse_value(text, n)? {
        Parsed::Form(f) => Ok(f),
        other => Err(Error::InvalidTerm(format!(
            "expected a form, got a {}",
            other.kind()
        ))),
    }
}

/// Parses a homogeneous polynomial (a 0-form).
pub fn parse_polynomial(text: &str, n: Option<usize>) -> Result<HomogeneousPolynomial> {
    let f = parse_form(text, n)?;
    f.to_polynomial()
        .ok_or_else(|| Error::InvalidTerm(format!("expected a function, got {}", f.render())))
}

/// Parses a homogeneous vector field.
pub fn parse_field(text: &str, n: Option<usize>) -> Result<HomogeneousField> {
    match parse_value(text, n)? {
        Parsed::Field(f) => Ok(f),
        other => Err(Error::InvalidTerm(format!(
            "expected a vector field, got a {}",
            other.kind()
        ))),
    }
}

/// Parses a vector-valued form; a vector field `X` is read as `1 @ X`.
pub fn parse_vector_form(text: &str, n: Option<usize>) -> Result<VectorValuedForm> {
    match parse_value(text, n)? {
        Parsed::VectorForm(f) => Ok(f),
        Parsed::Field(x) => field_as_vector_form(&x),
        Parsed::Form(f) => Err(Error::InvalidTerm(format!(
            "expected a vector-valued form, got the form {}",
            f.render()
        ))),
    }
}

pub(crate) fn field_as_vector_form(x: &HomogeneousField) -> Result<VectorValuedForm> {
    let one = HomogeneousForm::one(x.n());
    VectorValuedForm::from_pairs(x.n(), 0, x.weight(), [(&one, x)])
}
