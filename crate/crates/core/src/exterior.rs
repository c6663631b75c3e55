//! The bigraded algebra `Ω^r(b)` of polynomial differential forms and the
//! graded module `T(b)` of polynomial vector fields.
//!
//! A form of degree `r` and weight `b` is a combination of `x^γ dx_I` with
//! `|I| = r` and `|γ| + r = b`: every `dx_i` carries weight `+1`, every
//! `∂/∂x_i` weight `−1`. Index sets are kept strictly increasing; the
//! permutation sign is folded into the coefficient when a product is
//! normalized. Degrees are signed: `Ω^{-1}` exists and is zero, which keeps
//! `i_X f = 0` on functions an ordinary value.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar_poly::{
    accumulate, int, render_linear_combination, HomogeneousPolynomial, MultiIndex, Scalar,
};

/// Largest supported number of variables (index sets are bitmasks).
pub const MAX_VARIABLES: usize = 32;

/// A strictly increasing set of coordinate indices `I = {i_1 < … < i_r}` naming `dx_I`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default)]
pub struct IndexSet(u32);

impl IndexSet {
    pub const EMPTY: IndexSet = IndexSet(0);

    pub fn single(k: usize) -> Self {
        IndexSet(1 << k)
    }

    /// Normalizes an ordered list `dx_{i_1} ∧ … ∧ dx_{i_r}`.
    ///
    /// Returns `None` for a repeated index (the product vanishes), otherwise
    /// the sorted set and whether sorting costs a sign.
    pub fn from_ordered(indices: &[usize]) -> Option<(IndexSet, bool)> {
        let mut acc = IndexSet::EMPTY;
        let mut negative = false;
        for &k in indices {
            let (next, neg) = acc.wedge(IndexSet::single(k))?;
            acc = next;
            negative ^= neg;
        }
        Some((acc, negative))
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, k: usize) -> bool {
        self.0 >> k & 1 == 1
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let bits = self.0;
        (0..MAX_VARIABLES).filter(move |k| bits >> k & 1 == 1)
    }

    pub fn max_index(self) -> Option<usize> {
        self.iter().last()
    }

    /// `dx_A ∧ dx_B = ± dx_{A∪B}`; `None` when `A ∩ B ≠ ∅`.
    pub fn wedge(self, other: IndexSet) -> Option<(IndexSet, bool)> {
        if self.0 & other.0 != 0 {
            return None;
        }
        let inversions: u32 = other.iter().map(|j| (self.0 >> (j + 1)).count_ones()).sum();
        Some((IndexSet(self.0 | other.0), inversions % 2 == 1))
    }

    /// `i_{∂/∂x_k} dx_I = ± dx_{I∖k}`; `None` when `k ∉ I`.
    pub fn remove(self, k: usize) -> Option<(IndexSet, bool)> {
        if !self.contains(k) {
            return None;
        }
        let before = (self.0 & ((1u32 << k) - 1)).count_ones();
        Some((IndexSet(self.0 & !(1 << k)), before % 2 == 1))
    }

    /// All `r`-subsets of `{0, …, n−1}` in lexicographic order.
    pub fn all_of_size(n: usize, r: usize) -> Vec<IndexSet> {
        fn go(start: usize, n: usize, left: usize, acc: u32, out: &mut Vec<IndexSet>) {
            if left == 0 {
                out.push(IndexSet(acc));
                return;
            }
            for k in start..n {
                if n - k < left {
                    break;
                }
                go(k + 1, n, left - 1, acc | 1 << k, out);
            }
        }
        let mut out = Vec::new();
        if r <= n {
            go(0, n, r, 0, &mut out);
        }
        out
    }

    /// `dx1^dx3`, empty for `I = ∅`.
    pub fn render(self) -> String {
        self.iter()
            .map(|k| format!("dx{}", k + 1))
            .collect::<Vec<_>>()
            .join("^")
    }
}

impl Ord for IndexSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.iter().cmp(other.iter())
    }
}

impl PartialOrd for IndexSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Key of the basis element `x^γ dx_I`.
pub type FormKey = (MultiIndex, IndexSet);

fn bidegree_string(r: i64, b: i64) -> String {
    format!("({r}, {b})")
}

/// Element of `Ω^r(b)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct HomogeneousForm {
    n: usize,
    r: i64,
    b: i64,
    terms: BTreeMap<FormKey, Scalar>,
}

impl HomogeneousForm {
    pub fn zero(n: usize, r: i64, b: i64) -> Self {
        HomogeneousForm {
            n,
            r,
            b,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(n: usize, value: Scalar) -> Self {
        Self::from_polynomial(&HomogeneousPolynomial::constant(n, value))
    }

    pub fn one(n: usize) -> Self {
        Self::constant(n, Scalar::one())
    }

    /// `x^γ dx_I`
    pub fn basis(gamma: MultiIndex, set: IndexSet) -> Self {
        let n = gamma.n();
        let r = set.len() as i64;
        let b = gamma.degree() as i64 + r;
        let mut terms = BTreeMap::new();
        terms.insert((gamma, set), Scalar::one());
        HomogeneousForm { n, r, b, terms }
    }

    /// `dx_{k+1}` (0-based `k`).
    pub fn dx(n: usize, k: usize) -> Result<Self> {
        if k >= n {
            return Err(Error::IndexOutOfRange { index: k, n });
        }
        Ok(Self::basis(MultiIndex::zero(n), IndexSet::single(k)))
    }

    /// The coordinate function `x_{k+1}` as a 0-form.
    pub fn coordinate(n: usize, k: usize) -> Result<Self> {
        if k >= n {
            return Err(Error::IndexOutOfRange { index: k, n });
        }
        Ok(Self::basis(MultiIndex::unit(n, k), IndexSet::EMPTY))
    }

    pub fn from_polynomial(p: &HomogeneousPolynomial) -> Self {
        let mut f = Self::zero(p.n(), 0, p.degree() as i64);
        for (g, c) in p.terms() {
            f.terms.insert((g.clone(), IndexSet::EMPTY), c.clone());
        }
        f
    }

    /// The 0-form as a polynomial; `None` for forms of positive degree.
    pub fn to_polynomial(&self) -> Option<HomogeneousPolynomial> {
        if self.r != 0 || self.b < 0 {
            return None;
        }
        HomogeneousPolynomial::from_terms(
            self.n,
            self.b as u32,
            self.terms.iter().map(|((g, _), c)| (g.clone(), c.clone())),
        )
        .ok()
    }

    /// Builds a form from (possibly repeated) terms, validating every bidegree.
    pub fn from_terms<I>(n: usize, r: i64, b: i64, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (FormKey, Scalar)>,
    {
        let mut f = Self::zero(n, r, b);
        for ((g, set), c) in terms {
            if g.n() != n {
                return Err(Error::VariableMismatch {
                    left: n,
                    right: g.n(),
                });
            }
            if set.max_index().is_some_and(|k| k >= n) {
                return Err(Error::InvalidTerm(format!(
                    "{} uses a variable beyond n = {n}",
                    set.render()
                )));
            }
            let (tr, tb) = (set.len() as i64, g.degree() as i64 + set.len() as i64);
            if (tr, tb) != (r, b) {
                return Err(Error::InvalidTerm(format!(
                    "term {} {} has bidegree {}, expected {}",
                    g.render(),
                    set.render(),
                    bidegree_string(tr, tb),
                    bidegree_string(r, b)
                )));
            }
            accumulate(&mut f.terms, (g, set), c);
        }
        Ok(f)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Form degree `r`.
    pub fn degree(&self) -> i64 {
        self.r
    }

    /// Total weight `b`.
    pub fn weight(&self) -> i64 {
        self.b
    }

    pub fn bidegree(&self) -> (i64, i64) {
        (self.r, self.b)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &BTreeMap<FormKey, Scalar> {
        &self.terms
    }

    pub fn coefficient(&self, key: &FormKey) -> Scalar {
        self.terms.get(key).cloned().unwrap_or_else(Scalar::zero)
    }

    fn check_n(&self, n: usize) -> Result<()> {
        if self.n != n {
            return Err(Error::VariableMismatch {
                left: self.n,
                right: n,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_n(other.n)?;
        if self.bidegree() != other.bidegree() {
            return Err(Error::BidegreeMismatch {
                left: bidegree_string(self.r, self.b),
                right: bidegree_string(other.r, other.b),
            });
        }
        let mut out = self.clone();
        for (k, c) in &other.terms {
            accumulate(&mut out.terms, k.clone(), c.clone());
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
        let mut out = Self::zero(self.n, self.r, self.b);
        if !s.is_zero() {
            for (k, c) in &self.terms {
                out.terms.insert(k.clone(), c * s);
            }
        }
        out
    }

    /// `f τ` for a polynomial `f`.
    pub fn mul_polynomial(&self, f: &HomogeneousPolynomial) -> Result<Self> {
        self.check_n(f.n())?;
        let mut out = Self::zero(self.n, self.r, self.b + f.degree() as i64);
        for ((g, set), c) in &self.terms {
            for (h, e) in f.terms() {
                accumulate(&mut out.terms, (g.add(h), *set), c * e);
            }
        }
        Ok(out)
    }

    /// `self ∧ other`
    pub fn wedge(&self, other: &Self) -> Result<Self> {
        self.check_n(other.n)?;
        let mut out = Self::zero(self.n, self.r + other.r, self.b + other.b);
        for ((g, a), c) in &self.terms {
            for ((h, bset), e) in &other.terms {
                if let Some((set, negative)) = a.wedge(*bset) {
                    let v = c * e;
                    accumulate(
                        &mut out.terms,
                        (g.add(h), set),
                        if negative { -v } else { v },
                    );
                }
            }
        }
        Ok(out)
    }

    /// Exterior differential, bidegree `(1, 0)`.
    pub fn d(&self) -> Self {
        let mut out = Self::zero(self.n, self.r + 1, self.b);
        for ((g, set), c) in &self.terms {
            for k in 0..self.n {
                let Some(h) = g.minus_unit(k) else { continue };
                let Some((s, negative)) = IndexSet::single(k).wedge(*set) else {
                    continue;
                };
                let v = c * int(g.get(k) as i64);
                accumulate(&mut out.terms, (h, s), if negative { -v } else { v });
            }
        }
        out
    }

    /// `i_{∂/∂x_{k+1}} τ`
    pub fn contract_coordinate(&self, k: usize) -> Result<Self> {
        if k >= self.n {
            return Err(Error::IndexOutOfRange {
                index: k,
                n: self.n,
            });
        }
        let mut out = Self::zero(self.n, self.r - 1, self.b - 1);
        for ((g, set), c) in &self.terms {
            if let Some((s, negative)) = set.remove(k) {
                accumulate(
                    &mut out.terms,
                    (g.clone(), s),
                    if negative { -c.clone() } else { c.clone() },
                );
            }
        }
        Ok(out)
    }

    /// `i_X τ`, an element of `Ω^{r−1}(b + weight(X))`.
    pub fn contract(&self, field: &HomogeneousField) -> Result<Self> {
        self.check_n(field.n)?;
        let mut out = Self::zero(self.n, self.r - 1, self.b + field.weight);
        for ((h, k), e) in &field.terms {
            for ((g, set), c) in &self.terms {
                if let Some((s, negative)) = set.remove(*k) {
                    let v = c * e;
                    accumulate(&mut out.terms, (g.add(h), s), if negative { -v } else { v });
                }
            }
        }
        Ok(out)
    }

    /// `i_R τ` with `R` the radial field.
    pub fn contract_radial(&self) -> Self {
        let mut out = Self::zero(self.n, self.r - 1, self.b);
        for ((g, set), c) in &self.terms {
            for k in set.iter() {
                let (s, negative) = set.remove(k).expect("k is in the set");
                accumulate(
                    &mut out.terms,
                    (g.plus_unit(k), s),
                    if negative { -c.clone() } else { c.clone() },
                );
            }
        }
        out
    }

    /// `L_R τ = i_R dτ + d i_R τ`, which equals `b τ`.
    ///
    /// Panics if the Cartan expansion disagrees with `b τ`; that can only
    /// mean an error in `d` or `i_R`.
    pub fn lie_radial(&self) -> Self {
        let cartan = self
            .d()
            .contract_radial()
            .add(&self.contract_radial().d())
            .expect("both Cartan terms share the bidegree of τ");
        assert_eq!(
            cartan,
            self.scale(&int(self.b)),
            "L_R τ must equal b τ for τ of weight {}",
            self.b
        );
        cartan
    }

    /// Unique splitting `τ = (1/b) d i_R τ + (1/b) i_R dτ` into an exact part
    /// and a part annihilated by `i_R`.
    ///
    /// Returns `(exact, radial)`. Undefined for weight `b ≤ 0`.
    pub fn radial_exact_split(&self) -> Result<(Self, Self)> {
        if self.b <= 0 {
            return Err(Error::Domain(format!(
                "radial/exact splitting needs positive weight, got {}",
                self.b
            )));
        }
        let inv = Scalar::one() / int(self.b);
        let exact = self.contract_radial().d().scale(&inv);
        let radial = self.d().contract_radial().scale(&inv);
        Ok((exact, radial))
    }

    pub fn render(&self) -> String {
        render_linear_combination(self.terms.iter().map(|((g, set), c)| {
            let mono = g.render();
            let diff = set.render();
            let body = match (mono.is_empty(), diff.is_empty()) {
                (_, true) => mono,
                (true, false) => diff,
                (false, false) => format!("{mono} {diff}"),
            };
            (c, body)
        }))
    }
}

impl fmt::Display for HomogeneousForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// Element of `T(w)`: `Σ c x^γ ∂/∂x_k` with `|γ| − 1 = w`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct HomogeneousField {
    n: usize,
    weight: i64,
    terms: BTreeMap<(MultiIndex, usize), Scalar>,
}

impl HomogeneousField {
    pub fn zero(n: usize, weight: i64) -> Self {
        HomogeneousField {
            n,
            weight,
            terms: BTreeMap::new(),
        }
    }

    /// `∂/∂x_{k+1}`, of weight `−1`.
    pub fn coordinate(n: usize, k: usize) -> Result<Self> {
        Self::from_terms(n, -1, [((MultiIndex::zero(n), k), Scalar::one())])
    }

    /// `R = Σ x_i ∂/∂x_i`
    pub fn radial(n: usize) -> Self {
        let mut f = Self::zero(n, 0);
        for k in 0..n {
            f.terms.insert((MultiIndex::unit(n, k), k), Scalar::one());
        }
        f
    }

    /// `x^γ ∂/∂x_{k+1}`
    pub fn basis(gamma: MultiIndex, k: usize) -> Self {
        let n = gamma.n();
        let weight = gamma.degree() as i64 - 1;
        let mut terms = BTreeMap::new();
        terms.insert((gamma, k), Scalar::one());
        HomogeneousField { n, weight, terms }
    }

    pub fn from_terms<I>(n: usize, weight: i64, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = ((MultiIndex, usize), Scalar)>,
    {
        let mut f = Self::zero(n, weight);
        for ((g, k), c) in terms {
            if g.n() != n {
                return Err(Error::VariableMismatch {
                    left: n,
                    right: g.n(),
                });
            }
            if k >= n {
                return Err(Error::IndexOutOfRange { index: k, n });
            }
            if g.degree() as i64 - 1 != weight {
                return Err(Error::InvalidTerm(format!(
                    "field term {} d/dx{} has weight {}, expected {weight}",
                    g.render(),
                    k + 1,
                    g.degree() as i64 - 1
                )));
            }
            accumulate(&mut f.terms, (g, k), c);
        }
        Ok(f)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn weight(&self) -> i64 {
        self.weight
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &BTreeMap<(MultiIndex, usize), Scalar> {
        &self.terms
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::VariableMismatch {
                left: self.n,
                right: other.n,
            });
        }
        if self.weight != other.weight {
            return Err(Error::BidegreeMismatch {
                left: format!("field weight {}", self.weight),
                right: format!("field weight {}", other.weight),
            });
        }
        let mut out = self.clone();
        for (k, c) in &other.terms {
            accumulate(&mut out.terms, k.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        let mut out = Self::zero(self.n, self.weight);
        if !s.is_zero() {
            for (k, c) in &self.terms {
                out.terms.insert(k.clone(), c * s);
            }
        }
        out
    }

    /// `f X`
    pub fn mul_polynomial(&self, f: &HomogeneousPolynomial) -> Result<Self> {
        if self.n != f.n() {
            return Err(Error::VariableMismatch {
                left: self.n,
                right: f.n(),
            });
        }
        let mut out = Self::zero(self.n, self.weight + f.degree() as i64);
        for ((g, k), c) in &self.terms {
            for (h, e) in f.terms() {
                accumulate(&mut out.terms, (g.add(h), *k), c * e);
            }
        }
        Ok(out)
    }

    /// The coefficient of `∂/∂x_{k+1}` as a polynomial of degree `weight + 1`.
    pub fn component(&self, k: usize) -> HomogeneousPolynomial {
        let deg = (self.weight + 1).max(0) as u32;
        HomogeneousPolynomial::from_terms(
            self.n,
            deg,
            self.terms
                .iter()
                .filter(|((_, j), _)| *j == k)
                .map(|((g, _), c)| (g.clone(), c.clone())),
        )
        .expect("stored terms have consistent weight")
    }

    pub fn render(&self) -> String {
        render_linear_combination(self.terms.iter().map(|((g, k), c)| {
            let mono = g.render();
            let body = if mono.is_empty() {
                format!("d/dx{}", k + 1)
            } else {
                format!("{mono} d/dx{}", k + 1)
            };
            (c, body)
        }))
    }
}

impl fmt::Display for HomogeneousField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// `R = Σ x_i ∂/∂x_i`
pub fn radial_field(n: usize) -> HomogeneousField {
    HomogeneousField::radial(n)
}

/// Binomial coefficient, zero outside `0 ≤ k ≤ m`.
pub fn binomial(m: i64, k: i64) -> usize {
    if k < 0 || m < 0 || k > m {
        return 0;
    }
    let k = k.min(m - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (m - i) as u128 / (i + 1) as u128;
    }
    acc as usize
}

/// `dim Ω^r(b) = C(n, r) · C(n − 1 + b − r, b − r)` in `n` variables.
pub fn form_dimension(n: usize, r: i64, b: i64) -> usize {
    if r < 0 || b < r || n == 0 && r > 0 {
        return 0;
    }
    if n == 0 {
        return usize::from(b == 0);
    }
    binomial(n as i64, r) * binomial(n as i64 - 1 + b - r, b - r)
}

/// The monomial basis `x^γ dx_I` of `Ω^r(b)` in canonical order, with a
/// coordinate map.
#[derive(Clone, Debug)]
pub struct FormBasis {
    n: usize,
    r: i64,
    b: i64,
    elements: Vec<FormKey>,
    positions: HashMap<FormKey, usize>,
}

impl FormBasis {
    pub fn new(n: usize, r: i64, b: i64) -> Self {
        let mut elements = Vec::new();
        if r >= 0 && b >= r && (r as usize) <= n {
            let sets = IndexSet::all_of_size(n, r as usize);
            for g in MultiIndex::all_of_degree(n, (b - r) as u32) {
                for set in &sets {
                    elements.push((g.clone(), *set));
                }
            }
        }
        let positions = elements
            .iter()
            .enumerate()
            .map(|(i, k)| (k.clone(), i))
            .collect();
        FormBasis {
            n,
            r,
            b,
            elements,
            positions,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn bidegree(&self) -> (i64, i64) {
        (self.r, self.b)
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn keys(&self) -> &[FormKey] {
        &self.elements
    }

    pub fn position(&self, key: &FormKey) -> Option<usize> {
        self.positions.get(key).copied()
    }

    pub fn element(&self, j: usize) -> HomogeneousForm {
        let (g, set) = &self.elements[j];
        HomogeneousForm::basis(g.clone(), *set)
    }

    pub fn iter(&self) -> impl Iterator<Item = HomogeneousForm> + '_ {
        (0..self.len()).map(|j| self.element(j))
    }

    pub fn coordinates(&self, form: &HomogeneousForm) -> Result<Vec<Scalar>> {
        if form.bidegree() != (self.r, self.b) || form.n() != self.n {
            return Err(Error::BidegreeMismatch {
                left: bidegree_string(form.r, form.b),
                right: bidegree_string(self.r, self.b),
            });
        }
        let mut v = vec![Scalar::zero(); self.len()];
        for (k, c) in form.terms() {
            let j = self.position(k).expect("valid form terms are basis keys");
            v[j] = c.clone();
        }
        Ok(v)
    }

    pub fn form(&self, coords: &[Scalar]) -> HomogeneousForm {
        let mut f = HomogeneousForm::zero(self.n, self.r, self.b);
        for (key, c) in self.elements.iter().zip(coords) {
            if !c.is_zero() {
                f.terms.insert(key.clone(), c.clone());
            }
        }
        f
    }
}

/// Alias naming the enumerator role of [`FormBasis`].
pub type FormBasisEnumerator = FormBasis;

/// The monomial basis `x^γ ∂/∂x_k` of `T(w)`.
#[derive(Clone, Debug)]
pub struct FieldBasis {
    n: usize,
    weight: i64,
    elements: Vec<(MultiIndex, usize)>,
}

impl FieldBasis {
    pub fn new(n: usize, weight: i64) -> Self {
        let mut elements = Vec::new();
        if weight >= -1 {
            for g in MultiIndex::all_of_degree(n, (weight + 1) as u32) {
                for k in 0..n {
                    elements.push((g.clone(), k));
                }
            }
        }
        FieldBasis {
            n,
            weight,
            elements,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn weight(&self) -> i64 {
        self.weight
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn element(&self, j: usize) -> HomogeneousField {
        let (g, k) = &self.elements[j];
        HomogeneousField::basis(g.clone(), *k)
    }

    pub fn iter(&self) -> impl Iterator<Item = HomogeneousField> + '_ {
        (0..self.len()).map(|j| self.element(j))
    }

    pub fn coordinates(&self, field: &HomogeneousField) -> Result<Vec<Scalar>> {
        if field.n != self.n || (field.weight != self.weight && !field.is_zero()) {
            return Err(Error::BidegreeMismatch {
                left: format!("field of weight {}", field.weight),
                right: format!("basis of weight {}", self.weight),
            });
        }
        let mut out = vec![Scalar::zero(); self.len()];
        for (key, c) in &field.terms {
            let j = self
                .elements
                .iter()
                .position(|e| e == key)
                .expect("weights agree, so the key is enumerated");
            out[j] = c.clone();
        }
        Ok(out)
    }

    pub fn field(&self, coords: &[Scalar]) -> HomogeneousField {
        let mut f = HomogeneousField::zero(self.n, self.weight);
        for (key, c) in self.elements.iter().zip(coords) {
            if !c.is_zero() {
                f.terms.insert(key.clone(), c.clone());
            }
        }
        f
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar_poly::frac;
    use proptest::prelude::*;

    fn dx(n: usize, k: usize) -> HomogeneousForm {
        HomogeneousForm::dx(n, k).unwrap()
    }

    fn x(n: usize, k: usize) -> HomogeneousForm {
        HomogeneousForm::coordinate(n, k).unwrap()
    }

    fn w(a: &HomogeneousForm, b: &HomogeneousForm) -> HomogeneousForm {
        a.wedge(b).unwrap()
    }

    #[test]
    fn wedge_signs() {
        assert_eq!(w(&dx(2, 0), &dx(2, 1)).render(), "dx1^dx2");
        assert_eq!(w(&dx(2, 1), &dx(2, 0)).render(), "-dx1^dx2");
        assert!(w(&dx(2, 0), &dx(2, 0)).is_zero());
    }

    /// Expands `(x1 dx2) ∧ (x2 dx1)` by brute force over orderings: the
    /// product `dx2 dx1` is the transposition of `dx1 dx2`.
    #[test]
    fn wedge_sign_normalization_matches_permutation_expansion() {
        let lhs = w(&w(&x(2, 0), &dx(2, 1)), &w(&x(2, 1), &dx(2, 0)));
        let (set, negative) = IndexSet::from_ordered(&[1, 0]).unwrap();
        assert!(negative);
        let expected = HomogeneousForm::from_terms(
            2,
            2,
            4,
            [((MultiIndex::new(vec![1, 1]), set), -Scalar::one())],
        )
        .unwrap();
        assert_eq!(lhs, expected);
        assert_eq!(lhs.render(), "-x1*x2 dx1^dx2");
    }

    #[test]
    fn exterior_differential() {
        assert_eq!(w(&x(2, 0), &dx(2, 1)).d().render(), "dx1^dx2");
        assert_eq!(w(&x(2, 0), &x(2, 1)).d().render(), "x1 dx2 + x2 dx1");
        let f = w(&w(&x(2, 0), &x(2, 0)), &x(2, 1));
        assert!(f.d().d().is_zero());
    }

    #[test]
    fn contractions() {
        let d1 = HomogeneousField::coordinate(2, 0).unwrap();
        let d2 = HomogeneousField::coordinate(2, 1).unwrap();
        assert_eq!(w(&dx(2, 0), &dx(2, 1)).contract(&d1).unwrap(), dx(2, 1));
        assert!(dx(2, 0).contract(&d2).unwrap().is_zero());
        let r = radial_field(2);
        assert_eq!(
            w(&dx(2, 0), &dx(2, 1)).contract(&r).unwrap().render(),
            "x1 dx2 - x2 dx1"
        );
        assert_eq!(
            w(&dx(2, 0), &dx(2, 1)).contract(&r).unwrap(),
            w(&dx(2, 0), &dx(2, 1)).contract_radial()
        );
        let zero = x(2, 0).contract(&r).unwrap();
        assert!(zero.is_zero());
        assert_eq!(zero.degree(), -1);
    }

    #[test]
    fn radial_field_shape() {
        let r = radial_field(2);
        assert_eq!(r.render(), "x1 d/dx1 + x2 d/dx2");
        assert_eq!(r.weight(), 0);
        assert_eq!(
            w(&x(2, 0), &dx(2, 0)).contract(&r).unwrap().render(),
            "x1^2"
        );
    }

    #[test]
    fn lie_radial_examples() {
        let t = w(&x(2, 0), &dx(2, 1));
        assert_eq!(t.lie_radial(), t.scale(&int(2)));
        let t = w(&dx(2, 0), &dx(2, 1));
        assert_eq!(t.lie_radial(), t.scale(&int(2)));
        assert!(HomogeneousForm::one(2).lie_radial().is_zero());
    }

    #[test]
    fn radial_exact_split_examples() {
        let t = w(&x(2, 0), &dx(2, 0));
        let (exact, radial) = t.radial_exact_split().unwrap();
        assert_eq!(exact, t);
        assert!(radial.is_zero());

        let t = w(&x(2, 0), &dx(2, 1)).sub(&w(&x(2, 1), &dx(2, 0))).unwrap();
        let (exact, radial) = t.radial_exact_split().unwrap();
        assert!(exact.is_zero());
        assert_eq!(radial, t);

        let f = w(&w(&x(3, 0), &x(3, 1)), &x(3, 2));
        let (exact, radial) = f.d().radial_exact_split().unwrap();
        assert_eq!(exact, f.d());
        assert!(radial.is_zero());

        assert!(matches!(
            HomogeneousForm::one(2).radial_exact_split(),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn basis_dimensions_match_binomial_formula() {
        for n in 1..=4 {
            for r in 0..=n as i64 {
                for b in 0..=7 {
                    let basis = FormBasis::new(n, r, b);
                    assert_eq!(basis.len(), form_dimension(n, r, b), "n={n} r={r} b={b}");
                    let mut keys = basis.keys().to_vec();
                    keys.sort();
                    keys.dedup();
                    assert_eq!(keys.as_slice(), basis.keys(), "canonical and unique");
                }
            }
        }
        assert_eq!(form_dimension(3, 1, 2), 9);
        assert_eq!(FieldBasis::new(3, -1).len(), 3);
        assert_eq!(FieldBasis::new(3, 0).len(), 9);
    }

    #[test]
    fn rendering() {
        let t = w(&x(3, 0), &dx(3, 1))
            .scale(&frac(3, 2))
            .sub(&w(&x(3, 1), &dx(3, 0)))
            .unwrap();
        assert_eq!(t.render(), "3/2*x1 dx2 - x2 dx1");
        assert_eq!(dx(2, 0).scale(&frac(-1, 2)).render(), "-1/2 dx1");
        assert_eq!(HomogeneousForm::zero(2, 1, 1).render(), "0");
    }

    #[test]
    fn from_terms_validation() {
        let bad = HomogeneousForm::from_terms(
            2,
            1,
            2,
            [(
                (MultiIndex::new(vec![2, 0]), IndexSet::single(0)),
                Scalar::one(),
            )],
        );
        assert!(matches!(bad, Err(Error::InvalidTerm(_))));
    }

    pub(crate) fn arb_form(n: usize, r: i64, b: i64) -> impl Strategy<Value = HomogeneousForm> {
        let basis = FormBasis::new(n, r, b);
        let len = basis.len();
        proptest::collection::vec((-2i64..=2, 1i64..=2), len).prop_map(move |cs| {
            basis.form(&cs.iter().map(|&(p, q)| frac(p, q)).collect::<Vec<_>>())
        })
    }

    proptest! {
        #[test]
        fn d_squared_and_leibniz(
            a in arb_form(3, 1, 2),
            b in arb_form(3, 1, 3),
            f in arb_form(3, 0, 2),
        ) {
            prop_assert!(a.d().d().is_zero());
            prop_assert!(f.d().d().is_zero());
            let lhs = w(&a, &b).d();
            let rhs = w(&a.d(), &b).sub(&w(&a, &b.d())).unwrap();
            prop_assert_eq!(lhs, rhs);
            let lhs = w(&f, &b).d();
            let rhs = w(&f.d(), &b).add(&w(&f, &b.d())).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn contraction_antiderivation(
            a in arb_form(3, 1, 2),
            b in arb_form(3, 2, 3),
            xc in proptest::collection::vec(-2i64..=2, 9),
        ) {
            let field = HomogeneousField::from_terms(
                3,
                0,
                (0..3).flat_map(|i| (0..3).map(move |k| (i, k))).zip(&xc)
                    .map(|((i, k), &c)| ((MultiIndex::unit(3, i), k), int(c))),
            ).unwrap();
            let lhs = w(&a, &b).contract(&field).unwrap();
            let rhs = w(&a.contract(&field).unwrap(), &b)
                .sub(&w(&a, &b.contract(&field).unwrap())).unwrap();
            prop_assert_eq!(lhs, rhs);
            prop_assert!(b.contract(&field).unwrap().contract(&field).unwrap().is_zero());
        }

        #[test]
        fn split_properties(t in arb_form(3, 1, 3), u in arb_form(3, 2, 4)) {
            for form in [t, u] {
                let (exact, radial) = form.radial_exact_split().unwrap();
                prop_assert_eq!(exact.add(&radial).unwrap(), form.clone());
                prop_assert!(exact.d().is_zero());
                prop_assert!(radial.contract_radial().is_zero());
                prop_assert_eq!(form.lie_radial(), form.scale(&int(form.weight())));
            }
        }
    }
}
