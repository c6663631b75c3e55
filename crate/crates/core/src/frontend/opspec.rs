//! Operator specifications.
//!
//! ```text
//! ops   := ['-'] term (('+' | '-') term)*
//! term  := [INT ['/' INT] ['*']] comp
//! comp  := atom ('.' atom)*
//! atom  := 'd' | 'L' '[' vv ']' | 'i' '[' vv ']' | 'lm' '[' form ']'
//!        | 'idop' '(' key '=' value (',' key '=' value)* ')'
//!        | 'tri' '(' form ')' | '(' ops ')'
//! ```
//!
//! `A . B` applies `B` first. Inside `L[..]` and `i[..]` a vector field `X`
//! stands for `1 @ X`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::parse::{lower, parse_error, ExprAst, Parser, Span, Tok, Value};
use crate::applications::{omega_triangle, IntegrableOneForm};
use crate::error::{Error, Result};
use crate::exterior::HomogeneousForm;
use crate::operators::{DiffOperator, IdFamily};
use crate::scalar_poly::{scalar_string, Scalar};
use crate::vvforms::{GradedEndomorphism, VectorValuedForm};

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum OpAst {
    D(Span),
    Lie(ExprAst, Span),
    Contraction(ExprAst, Span),
    Multiplication(ExprAst, Span),
    IdOp {
        q: Option<i64>,
        a: Option<i64>,
        w1: Option<ExprAst>,
        w2: Option<ExprAst>,
        mu: Option<ExprAst>,
        span: Span,
    },
    Triangle(ExprAst, Span),
    Scaled(Scalar, Box<OpAst>, Span),
    Sum(Box<OpAst>, Box<OpAst>, Span),
    Compose(Box<OpAst>, Box<OpAst>, Span),
}

impl OpAst {
    fn span(&self) -> Span {
        match self {
            OpAst::D(s)
            | OpAst::Lie(_, s)
            | OpAst::Contraction(_, s)
            | OpAst::Multiplication(_, s)
            | OpAst::IdOp { span: s, .. }
            | OpAst::Triangle(_, s)
            | OpAst::Scaled(_, _, s)
            | OpAst::Sum(_, _, s)
            | OpAst::Compose(_, _, s) => *s,
        }
    }

    pub fn max_variable(&self) -> usize {
        match self {
            OpAst::D(_) => 0,
            OpAst::Lie(e, _)
            | OpAst::Contraction(e, _)
            | OpAst::Multiplication(e, _)
            | OpAst::Triangle(e, _) => e.max_variable(),
            OpAst::IdOp { w1, w2, mu, .. } => [w1, w2, mu]
                .iter()
                .filter_map(|e| e.as_ref().map(ExprAst::max_variable))
                .max()
                .unwrap_or(0),
            OpAst::Scaled(_, e, _) => e.max_variable(),
            OpAst::Sum(a, b, _) | OpAst::Compose(a, b, _) => a.max_variable().max(b.max_variable()),
        }
    }
}

fn ops(p: &mut Parser) -> Result<OpAst> {
    let mut lhs = if *p.peek() == Tok::Minus {
        let s = p.bump().1;
        OpAst::Scaled(-Scalar::one(), Box::new(term(p)?), s)
    } else {
        term(p)?
    };
    loop {
        match p.peek() {
            Tok::Plus => {
                let s = p.bump().1;
                lhs = OpAst::Sum(Box::new(lhs), Box::new(term(p)?), s);
            }
            Tok::Minus => {
                let s = p.bump().1;
                let rhs = OpAst::Scaled(-Scalar::one(), Box::new(term(p)?), s);
                lhs = OpAst::Sum(Box::new(lhs), Box::new(rhs), s);
            }
            _ => return Ok(lhs),
        }
    }
}

fn term(p: &mut Parser) -> Result<OpAst> {
    let Tok::Int(num) = p.peek().clone() else {
        return comp(p);
    };
    let s = p.bump().1;
    let mut c = Scalar::from_integer(num);
    if *p.peek() == Tok::Slash {
        p.bump();
        let den = p.integer()?;
        if den.is_zero() {
            return Err(parse_error(s, "division by zero"));
        }
        c /= Scalar::from_integer(den);
    }
    if *p.peek() == Tok::Star {
        p.bump();
    }
    Ok(OpAst::Scaled(c, Box::new(comp(p)?), s))
}

fn comp(p: &mut Parser) -> Result<OpAst> {
    let mut lhs = atom(p)?;
    while *p.peek() == Tok::Dot {
        let s = p.bump().1;
        lhs = OpAst::Compose(Box::new(lhs), Box::new(atom(p)?), s);
    }
    Ok(lhs)
}

fn bracketed(p: &mut Parser, open: Tok, close: Tok) -> Result<ExprAst> {
    p.expect(open)?;
    let e = p.sum()?;
    p.expect(close)?;
    Ok(e)
}

fn atom(p: &mut Parser) -> Result<OpAst> {
    let (tok, s) = p.bump();
    match tok {
        Tok::LParen => {
            let inner = ops(p)?;
            p.expect(Tok::RParen)?;
            Ok(inner)
        }
        Tok::Ident(w) => match w.as_str() {
            "d" => Ok(OpAst::D(s)),
            "L" => Ok(OpAst::Lie(bracketed(p, Tok::LBracket, Tok::RBracket)?, s)),
            "i" => Ok(OpAst::Contraction(
                bracketed(p, Tok::LBracket, Tok::RBracket)?,
                s,
            )),
            "lm" => Ok(OpAst::Multiplication(
                bracketed(p, Tok::LBracket, Tok::RBracket)?,
                s,
            )),
            "tri" => Ok(OpAst::Triangle(bracketed(p, Tok::LParen, Tok::RParen)?, s)),
            "idop" => {
                p.expect(Tok::LParen)?;
                let op = idop_fields(p, s)?;
                p.expect(Tok::RParen)?;
                Ok(op)
            }
            other => Err(parse_error(s, format!("unknown operator '{other}'"))),
        },
        other => Err(parse_error(
            s,
            format!("expected an operator, found {}", describe(&other)),
        )),
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Eof => "end of input".to_string(),
        other => format!("{other:?}"),
    }
}

fn idop_fields(p: &mut Parser, span: Span) -> Result<OpAst> {
    let (mut q, mut a, mut w1, mut w2, mut mu) = (None, None, None, None, None);
    loop {
        let (tok, ks) = p.bump();
        let Tok::Ident(key) = tok else {
            return Err(parse_error(ks, "expected one of q, a, w1, w2, mu"));
        };
        p.expect(Tok::Eq)?;
        let small = |v: BigInt| -> Result<i64> {
            i64::try_from(v).map_err(|_| parse_error(ks, "integer out of range"))
        };
        let dup = || parse_error(ks, format!("duplicate key '{key}'"));
        match key.as_str() {
            "q" if q.is_none() => q = Some(small(p.integer()?)?),
            "a" if a.is_none() => a = Some(small(p.integer()?)?),
            "w1" if w1.is_none() => w1 = Some(p.sum()?),
            "w2" if w2.is_none() => w2 = Some(p.sum()?),
            "mu" if mu.is_none() => mu = Some(p.sum()?),
            "q" | "a" | "w1" | "w2" | "mu" => return Err(dup()),
            other => return Err(parse_error(ks, format!("unknown idop key '{other}'"))),
        }
        if *p.peek() == Tok::Comma {
            p.bump();
        } else {
            break;
        }
    }
    Ok(OpAst::IdOp {
        q,
        a,
        w1,
        w2,
        mu,
        span,
    })
}

/// Parses an operator specification into its syntax tree.
pub fn parse_operator_ast(text: &str) -> Result<OpAst> {
    let mut p = Parser::new(text)?;
    let op = ops(&mut p)?;
    p.expect_end()?;
    Ok(op)
}

/// A concrete operator on forms.
#[derive(Clone, Debug)]
pub enum Operator {
    Diff(DiffOperator),
    Family(IdFamily),
    Triangle(IntegrableOneForm),
    Sum(Vec<Operator>),
    Scaled(Scalar, Box<Operator>),
    Compose(Box<Operator>, Box<Operator>),
}

fn scale_diff(op: &DiffOperator, s: &Scalar) -> Result<DiffOperator> {
    let (q, a) = op.bidegree();
    DiffOperator::new(
        op.n(),
        q,
        a,
        op.k().scale(s),
        op.l().scale(s),
        op.mu().scale(s),
    )
}

fn scale_family(f: &IdFamily, s: &Scalar) -> Result<IdFamily> {
    let (q, a) = f.bidegree();
    IdFamily::new(q, a, f.w1().scale(s), f.w2().scale(s), f.mu().scale(s))
}

pub(crate) fn triangle_family(omega: &IntegrableOneForm) -> Result<IdFamily> {
    let half = omega
        .form()
        .d()
        .scale(&Scalar::new(BigInt::one(), BigInt::from(2)));
    IdFamily::new(2, omega.weight(), omega.form().clone(), half.clone(), half)
}

impl Operator {
    /// The canonical `L_K + i_L + λ_μ` triple when the operator is of order one by construction.
    pub fn to_diff(&self) -> Result<Option<DiffOperator>> {
        Ok(match self {
            Operator::Diff(d) => Some(d.clone()),
            Operator::Family(f) => Some(f.to_operator()?),
            Operator::Triangle(w) => Some(triangle_family(w)?.to_operator()?),
            Operator::Sum(parts) => {
                let mut acc: Option<DiffOperator> = None;
                for part in parts {
                    let Some(d) = part.to_diff()? else {
                        return Ok(None);
                    };
                    acc = Some(match acc {
                        Some(prev) => prev.add(&d)?,
                        None => d,
                    });
                }
                acc
            }
            Operator::Scaled(s, inner) => match inner.to_diff()? {
                Some(d) => Some(scale_diff(&d, s)?),
                None => None,
            },
            Operator::Compose(..) => None,
        })
    }

    /// The operator as an element of the family generated by `Id`, when it is given as one.
    pub fn as_family(&self) -> Result<Option<IdFamily>> {
        Ok(match self {
            Operator::Family(f) => Some(f.clone()),
            Operator::Triangle(w) => Some(triangle_family(w)?),
            Operator::Diff(d) if *d == DiffOperator::exterior_derivative(d.n()) => {
                let n = d.n();
                Some(IdFamily::new(
                    1,
                    0,
                    HomogeneousForm::one(n),
                    HomogeneousForm::zero(n, 1, 0),
                    HomogeneousForm::zero(n, 1, 0),
                )?)
            }
            Operator::Scaled(s, inner) => match inner.as_family()? {
                Some(f) => Some(scale_family(&f, s)?),
                None => None,
            },
            _ => None,
        })
    }

    pub fn render(&self) -> String {
        match self {
            Operator::Diff(d) => render_diff(d),
            Operator::Family(f) => f.render(),
            Operator::Triangle(w) => format!("tri({})", w.form().render()),
            Operator::Sum(parts) => parts
                .iter()
                .map(|p| p.render_grouped())
                .collect::<Vec<_>>()
                .join(" + "),
            Operator::Scaled(s, inner) => {
                format!("{}*{}", scalar_string(s), inner.render_grouped())
            }
            Operator::Compose(a, b) => {
                format!("{} . {}", a.render_grouped(), b.render_grouped())
            }
        }
    }

    fn render_grouped(&self) -> String {
        let text = self.render();
        let atomic = match self {
            Operator::Family(_) | Operator::Triangle(_) => true,
            Operator::Diff(_) => !text.contains(" + "),
            _ => false,
        };
        if atomic {
            text
        } else {
            format!("({text})")
        }
    }
}

fn render_diff(d: &DiffOperator) -> String {
    if *d == DiffOperator::exterior_derivative(d.n()) {
        return "d".to_string();
    }
    let mut parts = Vec::new();
    if !d.k().is_zero() {
        parts.push(format!("L[{}]", d.k().render()));
    }
    if !d.l().is_zero() {
        parts.push(format!("i[{}]", d.l().render()));
    }
    if !d.mu().is_zero() {
        parts.push(format!("lm[{}]", d.mu().render()));
    }
    if parts.is_empty() {
        "0".to_string()
    } else {
        parts.join(" + ")
    }
}

impl fmt::Display for Operator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl GradedEndomorphism for Operator {
    fn n(&self) -> usize {
        match self {
            Operator::Diff(d) => d.n(),
            Operator::Family(f) => f.n(),
            Operator::Triangle(w) => w.n(),
            Operator::Sum(parts) => parts[0].n(),
            Operator::Scaled(_, inner) => inner.n(),
            Operator::Compose(a, _) => a.n(),
        }
    }

    fn bidegree(&self) -> (i64, i64) {
        match self {
            Operator::Diff(d) => d.bidegree(),
            Operator::Family(f) => f.bidegree(),
            Operator::Triangle(w) => (2, w.weight()),
            Operator::Sum(parts) => parts[0].bidegree(),
            Operator::Scaled(_, inner) => inner.bidegree(),
            Operator::Compose(a, b) => {
                let ((q1, a1), (q2, a2)) = (a.bidegree(), b.bidegree());
                (q1 + q2, a1 + a2)
            }
        }
    }

    fn apply(&self, tau: &HomogeneousForm) -> Result<HomogeneousForm> {
        match self {
            Operator::Diff(d) => d.apply(tau),
            Operator::Family(f) => f.apply(tau),
            Operator::Triangle(w) => omega_triangle(w, tau),
            Operator::Sum(parts) => {
                let mut acc = parts[0].apply(tau)?;
                for p in &parts[1..] {
                    acc = acc.add(&p.apply(tau)?)?;
                }
                Ok(acc)
            }
            Operator::Scaled(s, inner) => Ok(inner.apply(tau)?.scale(s)),
            Operator::Compose(a, b) => a.apply(&b.apply(tau)?),
        }
    }
}

struct OpLowering {
    n: usize,
}

impl OpLowering {
    fn value(&self, e: &ExprAst) -> Result<Value> {
        lower(e, Some(self.n))
    }

    fn single_form(&self, e: &ExprAst) -> Result<HomogeneousForm> {
        match self.value(e)? {
            Value::Forms(m) => pick(
                m.into_values().collect(),
                HomogeneousForm::is_zero,
                e.span(),
            ),
            _ => Err(parse_error(e.span(), "expected a form")),
        }
    }

    fn vector_form(&self, e: &ExprAst) -> Result<Option<VectorValuedForm>> {
        match self.value(e)? {
            Value::VectorForms(m) => pick(
                m.into_values().collect(),
                VectorValuedForm::is_zero,
                e.span(),
            )
            .map(Some),
            Value::Fields(m) => {
                let x = pick(m.into_values().collect(), |f| f.is_zero(), e.span())?;
                super::parse::field_as_vector_form(&x).map(Some)
            }
            Value::Forms(m) if m.values().all(HomogeneousForm::is_zero) => Ok(None),
            Value::Forms(_) => Err(parse_error(e.span(), "expected a vector-valued form")),
        }
    }

    fn zero_part(&self, span: Span) -> Result<Operator> {
        Err(parse_error(span, "zero operator of undetermined bidegree"))
    }

    fn lower(&self, ast: &OpAst) -> Result<Operator> {
        let n = self.n;
        let at = |err: Error| match err {
            Error::Parse { .. } => err,
            other => parse_error(ast.span(), other.to_string()),
        };
        match ast {
            OpAst::D(_) => Ok(Operator::Diff(DiffOperator::exterior_derivative(n))),
            OpAst::Lie(e, s) => {
                let Some(k) = self.vector_form(e)? else {
                    return self.zero_part(*s);
                };
                let (q, a) = (k.degree(), k.weight());
                DiffOperator::new(
                    n,
                    q,
                    a,
                    k,
                    VectorValuedForm::zero(n, q + 1, a),
                    HomogeneousForm::zero(n, q, a),
                )
                .map(Operator::Diff)
                .map_err(at)
            }
            OpAst::Contraction(e, s) => {
                let Some(l) = self.vector_form(e)? else {
                    return self.zero_part(*s);
                };
                let (q, a) = (l.degree() - 1, l.weight());
                DiffOperator::new(
                    n,
                    q,
                    a,
                    VectorValuedForm::zero(n, q, a),
                    l,
                    HomogeneousForm::zero(n, q, a),
                )
                .map(Operator::Diff)
                .map_err(at)
            }
            OpAst::Multiplication(e, _) => Ok(Operator::Diff(DiffOperator::left_multiplication(
                self.single_form(e)?,
            ))),
            OpAst::Triangle(e, _) => IntegrableOneForm::new(self.single_form(e)?)
                .map(Operator::Triangle)
                .map_err(at),
            OpAst::IdOp {
                q,
                a,
                w1,
                w2,
                mu,
                span,
            } => {
                let w1 = match w1 {
                    Some(e) => self.single_form(e)?,
                    None => return Err(parse_error(*span, "idop needs w1")),
                };
                let q = q.unwrap_or(w1.degree() + 1);
                let a = a.unwrap_or(w1.weight());
                let part = |e: &Option<ExprAst>| -> Result<HomogeneousForm> {
                    match e {
                        Some(e) => {
                            let f = self.single_form(e)?;
                            Ok(if f.is_zero() {
                                HomogeneousForm::zero(n, q, a)
                            } else {
                                f
                            })
                        }
                        None => Ok(HomogeneousForm::zero(n, q, a)),
                    }
                };
                let w1 = if w1.is_zero() {
                    HomogeneousForm::zero(n, q - 1, a)
                } else {
                    w1
                };
                IdFamily::new(q, a, w1, part(w2)?, part(mu)?)
                    .map(Operator::Family)
                    .map_err(at)
            }
            OpAst::Scaled(s, inner, _) => {
                let op = self.lower(inner)?;
                if s.is_one() {
                    return Ok(op);
                }
                Ok(match op {
                    Operator::Diff(d) => Operator::Diff(scale_diff(&d, s).map_err(at)?),
                    Operator::Family(f) => Operator::Family(scale_family(&f, s).map_err(at)?),
                    Operator::Scaled(t, inner) => Operator::Scaled(s * t, inner),
                    other => Operator::Scaled(s.clone(), Box::new(other)),
                })
            }
            OpAst::Sum(a, b, s) => {
                let (x, y) = (self.lower(a)?, self.lower(b)?);
                if x.bidegree() != y.bidegree() {
                    return Err(parse_error(
                        *s,
                        format!(
                            "cannot add operators of bidegrees {:?} and {:?}",
                            x.bidegree(),
                            y.bidegree()
                        ),
                    ));
                }
                if let (Operator::Family(f), Operator::Family(g)) = (&x, &y) {
                    let (q, a) = f.bidegree();
                    return IdFamily::new(
                        q,
                        a,
                        f.w1().add(g.w1()).map_err(at)?,
                        f.w2().add(g.w2()).map_err(at)?,
                        f.mu().add(g.mu()).map_err(at)?,
                    )
                    .map(Operator::Family)
                    .map_err(at);
                }
                if let (Operator::Diff(f), Operator::Diff(g)) = (&x, &y) {
                    return f.add(g).map(Operator::Diff).map_err(at);
                }
                let mut parts = Vec::new();
                for op in [x, y] {
                    match op {
                        Operator::Sum(inner) => parts.extend(inner),
                        other => parts.push(other),
                    }
                }
                Ok(Operator::Sum(parts))
            }
            OpAst::Compose(a, b, _) => Ok(Operator::Compose(
                Box::new(self.lower(a)?),
                Box::new(self.lower(b)?),
            )),
        }
    }
}

fn pick<V: Clone>(pieces: Vec<V>, is_zero: impl Fn(&V) -> bool, span: Span) -> Result<V> {
    let nonzero: Vec<&V> = pieces.iter().filter(|v| !is_zero(v)).collect();
    match nonzero.len() {
        0 => Ok(pieces[0].clone()),
        1 => Ok(nonzero[0].clone()),
        _ => Err(parse_error(span, "inhomogeneous argument")),
    }
}

/// Lowers an operator syntax tree in `n` variables (inferred when `None`).
pub fn lower_operator(ast: &OpAst, n: Option<usize>) -> Result<Operator> {
    let n = n.unwrap_or_else(|| ast.max_variable().max(1));
    OpLowering { n }.lower(ast)
}

/// Parses and lowers an operator specification.
pub fn parse_operator(text: &str, n: Option<usize>) -> Result<Operator> {
    lower_operator(&parse_operator_ast(text)?, n)
}

/// Parses the body `q=.., a=.., w1=.., w2=.., mu=..` of an `idop(...)`.
pub fn parse_idop(text: &str, n: Option<usize>) -> Result<IdFamily> {
    let mut p = Parser::new(text)?;
    let span = p.span();
    let ast = idop_fields(&mut p, span)?;
    p.expect_end()?;
    match lower_operator(&ast, n)? {
        Operator::Family(f) => Ok(f),
        _ => unreachable!("idop lowers to a family"),
    }
}
