//! Exact rational scalars, exponent vectors and homogeneous polynomials over ℚ.
//!
//! Everything above this layer (forms, fields, operators) stores its
//! coefficients as [`Scalar`] and its monomials as [`MultiIndex`].

use std::cmp::Ordering;
use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Exact rational number, always kept in lowest terms with a positive denominator.
pub type Scalar = BigRational;

pub fn int(v: i64) -> Scalar {
    BigRational::from_integer(BigInt::from(v))
}

/// `p/q` as an exact scalar. Panics on `q == 0`.
pub fn frac(p: i64, q: i64) -> Scalar {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

/// `(-1)^k`
pub fn sign_power(k: i64) -> Scalar {
    if k.rem_euclid(2) == 0 {
        Scalar::one()
    } else {
        -Scalar::one()
    }
}

/// Renders a scalar as `p` or `p/q`.
pub fn scalar_string(s: &Scalar) -> String {
    s.to_string()
}

/// Parses `p` or `p/q`.
pub fn parse_scalar(text: &str) -> Result<Scalar> {
    let bad = || Error::Config(format!("not an exact rational: {text:?}"));
    let text = text.trim();
    match text.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(p, q))
        }
        None => Ok(BigRational::from_integer(text.parse().map_err(|_| bad())?)),
    }
}

/// Exponent vector `γ = (γ_1, …, γ_n)` of the monomial `x^γ`.
///
/// Ordering is lexicographic with `x1 > x2 > … > xn`: among monomials of one
/// degree, `x1^2` sorts before `x1*x2` before `x2^2`. This is the canonical
/// term order used for printing and for basis enumeration.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn zero(n: usize) -> Self {
        MultiIndex(vec![0; n])
    }

    pub fn unit(n: usize, k: usize) -> Self {
        let mut e = vec![0; n];
        e[k] = 1;
        MultiIndex(e)
    }

    pub fn new(exponents: Vec<u32>) -> Self {
        MultiIndex(exponents)
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn get(&self, k: usize) -> u32 {
        self.0[k]
    }

    /// `|γ|`
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `γ + e_k`
    pub fn plus_unit(&self, k: usize) -> MultiIndex {
        let mut e = self.0.clone();
        e[k] += 1;
        MultiIndex(e)
    }

    /// `γ − e_k`, or `None` when `γ_k = 0`.
    pub fn minus_unit(&self, k: usize) -> Option<MultiIndex> {
        if self.0[k] == 0 {
            return None;
        }
        let mut e = self.0.clone();
        e[k] -= 1;
        Some(MultiIndex(e))
    }

    /// All exponent vectors of total degree `c` in `n` variables, in canonical order.
    pub fn all_of_degree(n: usize, c: u32) -> Vec<MultiIndex> {
        fn fill(n: usize, left: u32, prefix: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
            if prefix.len() + 1 == n {
                prefix.push(left);
                out.push(MultiIndex(prefix.clone()));
                prefix.pop();
                return;
            }
            for e in (0..=left).rev() {
                prefix.push(e);
                fill(n, left - e, prefix, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        if n == 0 {
            if c == 0 {
                out.push(MultiIndex(Vec::new()));
            }
            return out;
        }
        fill(n, c, &mut Vec::with_capacity(n), &mut out);
        out
    }

    /// `x1^2*x3`, or the empty string for the constant monomial.
    pub fn render(&self) -> String {
        let mut parts = Vec::new();
        for (i, &e) in self.0.iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(format!("x{}", i + 1)),
                _ => parts.push(format!("x{}^{}", i + 1, e)),
            }
        }
        parts.join("*")
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        other.0.cmp(&self.0)
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Element of `S(c)`: a homogeneous polynomial of degree `c` in `n` variables.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct HomogeneousPolynomial {
    n: usize,
    degree: u32,
    terms: BTreeMap<MultiIndex, Scalar>,
}

impl HomogeneousPolynomial {
    pub fn zero(n: usize, degree: u32) -> Self {
        HomogeneousPolynomial {
            n,
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(n: usize, value: Scalar) -> Self {
        let mut p = Self::zero(n, 0);
        if !value.is_zero() {
            p.terms.insert(MultiIndex::zero(n), value);
        }
        p
    }

    pub fn one(n: usize) -> Self {
        Self::constant(n, Scalar::one())
    }

    /// The coordinate function `x_{k+1}` (0-based `k`).
    pub fn var(n: usize, k: usize) -> Result<Self> {
        if k >= n {
            return Err(Error::IndexOutOfRange { index: k, n });
        }
        Ok(Self::monomial(MultiIndex::unit(n, k), Scalar::one()))
    }

    pub fn monomial(exponents: MultiIndex, coeff: Scalar) -> Self {
        let mut p = Self::zero(exponents.n(), exponents.degree());
        if !coeff.is_zero() {
            p.terms.insert(exponents, coeff);
        }
        p
    }

    /// Builds a polynomial from terms, summing repeats and dropping zeros.
    pub fn from_terms<I>(n: usize, degree: u32, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (MultiIndex, Scalar)>,
    {
        let mut p = Self::zero(n, degree);
        for (g, c) in terms {
            if g.n() != n {
                return Err(Error::VariableMismatch {
                    left: n,
                    right: g.n(),
                });
            }
            if g.degree() != degree {
                return Err(Error::InvalidTerm(format!(
                    "monomial {} has degree {}, expected {}",
                    g.render(),
                    g.degree(),
                    degree
                )));
            }
            p.accumulate(g, c);
        }
        Ok(p)
    }

    fn accumulate(&mut self, g: MultiIndex, c: Scalar) {
        accumulate(&mut self.terms, g, c);
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &BTreeMap<MultiIndex, Scalar> {
        &self.terms
    }

    pub fn coefficient(&self, g: &MultiIndex) -> Scalar {
        self.terms.get(g).cloned().unwrap_or_else(Scalar::zero)
    }

    fn check_n(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::VariableMismatch {
                left: self.n,
                right: other.n,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_n(other)?;
        if self.degree != other.degree {
            return Err(Error::BidegreeMismatch {
                left: format!("degree {}", self.degree),
                right: format!("degree {}", other.degree),
            });
        }
        let mut out = self.clone();
        for (g, c) in &other.terms {
            out.accumulate(g.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Scalar::one())
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        let mut out = Self::zero(self.n, self.degree);
        if s.is_zero() {
            return out;
        }
        for (g, c) in &self.terms {
            out.terms.insert(g.clone(), c * s);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_n(other)?;
        let mut out = Self::zero(self.n, self.degree + other.degree);
        for (g, c) in &self.terms {
            for (h, e) in &other.terms {
                out.accumulate(g.add(h), c * e);
            }
        }
        Ok(out)
    }

    /// `∂p/∂x_{k+1}` (0-based `k`).
    pub fn partial(&self, k: usize) -> Result<Self> {
        if k >= self.n {
            return Err(Error::IndexOutOfRange {
                index: k,
                n: self.n,
            });
        }
        let mut out = Self::zero(self.n, self.degree.saturating_sub(1));
        for (g, c) in &self.terms {
            if let Some(h) = g.minus_unit(k) {
                out.accumulate(h, c * int(g.get(k) as i64));
            }
        }
        Ok(out)
    }

    pub fn render(&self) -> String {
        render_linear_combination(self.terms.iter().map(|(g, c)| (c, g.render())))
    }
}

impl fmt::Display for HomogeneousPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// Adds `c` into `map[key]`, dropping the entry when it cancels.
pub(crate) fn accumulate<K: Ord>(map: &mut BTreeMap<K, Scalar>, key: K, c: Scalar) {
    if c.is_zero() {
        return;
    }
    match map.entry(key) {
        Entry::Vacant(v) => {
            v.insert(c);
        }
        Entry::Occupied(mut o) => {
            *o.get_mut() += c;
            if o.get().is_zero() {
                o.remove();
            }
        }
    }
}

/// Joins `coefficient * body` terms as `a + b - c`; an empty body is a pure scalar.
pub(crate) fn render_linear_combination<'a, I>(terms: I) -> String
where
    I: IntoIterator<Item = (&'a Scalar, String)>,
{
    let mut out = String::new();
    for (i, (c, body)) in terms.into_iter().enumerate() {
        let negative = c.is_negative();
        let magnitude = c.abs();
        if i == 0 {
            if negative {
                out.push('-');
            }
        } else {
            out.push_str(if negative { " - " } else { " + " });
        }
        if body.is_empty() {
            out.push_str(&magnitude.to_string());
        } else if magnitude.is_one() {
            out.push_str(&body);
        } else {
            let joiner = if body.starts_with('x') { "*" } else { " " };
            out.push_str(&format!("{magnitude}{joiner}{body}"));
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}
