//! Vector-valued forms `L ∈ Ω^p ⊗ T`, their contraction `i_L` and Lie
//! derivative `L_K = [i_K, d]`.
//!
//! A vector-valued form is stored by coordinate direction,
//! `L = Σ_k ρ_k ⊗ ∂/∂x_k`, with every `ρ_k ∈ Ω^p(a + 1)`; `a` is the
//! weight of `L`. Then `i_L τ = Σ_k ρ_k ∧ i_{∂/∂x_k} τ`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::One;

use crate::error::{Error, Result};
use crate::exterior::{HomogeneousField, HomogeneousForm};
use crate::scalar_poly::{sign_power, HomogeneousPolynomial, Scalar};

/// An element of `Ω^p_T = Ω^p ⊗ T` of weight `a`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct VectorValuedForm {
    n: usize,
    degree: i64,
    weight: i64,
    components: BTreeMap<usize, HomogeneousForm>,
}

impl VectorValuedForm {
    pub fn zero(n: usize, degree: i64, weight: i64) -> Self {
        VectorValuedForm {
            n,
            degree,
            weight,
            components: BTreeMap::new(),
        }
    }

    /// `Id = Σ dx_i ⊗ ∂/∂x_i ∈ Ω^1_T`, of weight 0.
    pub fn identity(n: usize) -> Self {
        let mut id = Self::zero(n, 1, 0);
        for k in 0..n {
            id.components
                .insert(k, HomogeneousForm::dx(n, k).expect("k < n"));
        }
        id
    }

    /// `Σ_k ρ_k ⊗ ∂/∂x_k` from explicit components.
    pub fn from_components<I>(n: usize, degree: i64, weight: i64, components: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, HomogeneousForm)>,
    {
        let mut out = Self::zero(n, degree, weight);
        for (k, rho) in components {
            if k >= n {
                return Err(Error::IndexOutOfRange { index: k, n });
            }
            if rho.n() != n {
                return Err(Error::VariableMismatch {
                    left: n,
                    right: rho.n(),
                });
            }
            if rho.bidegree() != (degree, weight + 1) {
                return Err(Error::BidegreeMismatch {
                    left: format!("component {:?}", rho.bidegree()),
                    right: format!("({}, {})", degree, weight + 1),
                });
            }
            out.add_component(k, &rho)?;
        }
        Ok(out)
    }

    /// `Σ ω_j ⊗ X_j`, normalized so each direction carries one aggregated form.
    pub fn from_pairs<'a, I>(n: usize, degree: i64, weight: i64, pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (&'a HomogeneousForm, &'a HomogeneousField)>,
    {
        let mut out = Self::zero(n, degree, weight);
        for (omega, field) in pairs {
            if omega.degree() != degree || omega.weight() + field.weight() != weight {
                return Err(Error::BidegreeMismatch {
                    left: format!(
                        "pair of degree {} and weight {}",
                        omega.degree(),
                        omega.weight() + field.weight()
                    ),
                    right: format!("({degree}, {weight})"),
                });
            }
            for k in 0..n {
                let g = field.component(k);
                if !g.is_zero() {
                    out.add_component(k, &omega.mul_polynomial(&g)?)?;
                }
            }
        }
        Ok(out)
    }

    fn add_component(&mut self, k: usize, rho: &HomogeneousForm) -> Result<()> {
        let sum = match self.components.get(&k) {
            Some(prev) => prev.add(rho)?,
            None => rho.clone(),
        };
        if sum.is_zero() {
            self.components.remove(&k);
        } else {
            self.components.insert(k, sum);
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Form degree `p` of the form part.
    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn weight(&self) -> i64 {
        self.weight
    }

    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    pub fn components(&self) -> &BTreeMap<usize, HomogeneousForm> {
        &self.components
    }

    /// `ρ_k`, the coefficient form of `∂/∂x_{k+1}`.
    pub fn component(&self, k: usize) -> HomogeneousForm {
        self.components
            .get(&k)
            .cloned()
            .unwrap_or_else(|| HomogeneousForm::zero(self.n, self.degree, self.weight + 1))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if (self.n, self.degree, self.weight) != (other.n, other.degree, other.weight) {
            return Err(Error::BidegreeMismatch {
                left: format!("vector-valued ({}, {})", self.degree, self.weight),
                right: format!("vector-valued ({}, {})", other.degree, other.weight),
            });
        }
        let mut out = self.clone();
        for (k, rho) in &other.components {
            out.add_component(*k, rho)?;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&-Scalar::one()))
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        let mut out = Self::zero(self.n, self.degree, self.weight);
        for (k, rho) in &self.components {
            let v = rho.scale(s);
            if !v.is_zero() {
                out.components.insert(*k, v);
            }
        }
        out
    }

    /// `ω ∧ L = Σ (ω ∧ ρ_k) ⊗ ∂/∂x_k`
    pub fn wedge_form(&self, omega: &HomogeneousForm) -> Result<Self> {
        if omega.n() != self.n {
            return Err(Error::VariableMismatch {
                left: omega.n(),
                right: self.n,
            });
        }
        let mut out = Self::zero(
            self.n,
            self.degree + omega.degree(),
            self.weight + omega.weight(),
        );
        for (k, rho) in &self.components {
            let v = omega.wedge(rho)?;
            if !v.is_zero() {
                out.components.insert(*k, v);
            }
        }
        Ok(out)
    }

    /// `i_L τ ∈ Ω^{p+r−1}(a+b)`; a derivation of degree `p − 1`.
    pub fn contract(&self, tau: &HomogeneousForm) -> Result<HomogeneousForm> {
        if tau.n() != self.n {
            return Err(Error::VariableMismatch {
                left: self.n,
                right: tau.n(),
            });
        }
        let mut out = HomogeneousForm::zero(
            self.n,
            self.degree + tau.degree() - 1,
            self.weight + tau.weight(),
        );
        if tau.degree() <= 0 {
            return Ok(out);
        }
        for (k, rho) in &self.components {
            out = out.add(&rho.wedge(&tau.contract_coordinate(*k)?)?)?;
        }
        Ok(out)
    }

    /// `L_K τ = i_K dτ − (−1)^{p−1} d i_K τ`, bracket of `i_K` (degree `p − 1`) with `d`.
    pub fn lie(&self, tau: &HomogeneousForm) -> Result<HomogeneousForm> {
        let first = self.contract(&tau.d())?;
        let second = self.contract(tau)?.d().scale(&sign_power(self.degree - 1));
        first.sub(&second)
    }

    pub fn render(&self) -> String {
        if self.components.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, rho) in &self.components {
            let body = rho.render();
            let piece = if rho.terms().len() == 1 {
                format!("{body} @ d/dx{}", k + 1)
            } else {
                format!("({body}) @ d/dx{}", k + 1)
            };
            match (out.is_empty(), piece.strip_prefix('-')) {
                (true, _) => out.push_str(&piece),
                (false, Some(rest)) => {
                    out.push_str(" - ");
                    out.push_str(rest);
                }
                (false, None) => {
                    out.push_str(" + ");
                    out.push_str(&piece);
                }
            }
        }
        out
    }
}

impl fmt::Display for VectorValuedForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// A linear map `Ω^r(b) → Ω^{r+q}(b+a)` of fixed bidegree `(q, a)`.
pub trait GradedEndomorphism {
    fn n(&self) -> usize;

    /// `(q, a)`
    fn bidegree(&self) -> (i64, i64);

    fn apply(&self, tau: &HomogeneousForm) -> Result<HomogeneousForm>;
}

/// `τ ↦ i_L τ`
impl GradedEndomorphism for VectorValuedForm {
    fn n(&self) -> usize {
        self.n
    }

    fn bidegree(&self) -> (i64, i64) {
        (self.degree - 1, self.weight)
    }

    fn apply(&self, tau: &HomogeneousForm) -> Result<HomogeneousForm> {
        self.contract(tau)
    }
}

/// Left multiplication `λ_μ`.
#[derive(Clone, Debug)]
pub struct LeftMultiplication(pub HomogeneousForm);

impl GradedEndomorphism for LeftMultiplication {
    fn n(&self) -> usize {
        self.0.n()
    }

    fn bidegree(&self) -> (i64, i64) {
        self.0.bidegree()
    }

    fn apply(&self, tau: &HomogeneousForm) -> Result<HomogeneousForm> {
        self.0.wedge(tau)
    }
}

/// The exterior differential as an operator of bidegree `(1, 0)`.
#[derive(Clone, Copy, Debug)]
pub struct ExteriorDerivative {
    pub n: usize,
}

impl GradedEndomorphism for ExteriorDerivative {
    fn n(&self) -> usize {
        self.n
    }

    fn bidegree(&self) -> (i64, i64) {
        (1, 0)
    }

    fn apply(&self, tau: &HomogeneousForm) -> Result<HomogeneousForm> {
        Ok(tau.d())
    }
}

/// `f ↦ f·1` helper used by tests and the CLI: wraps a polynomial as a 0-form.
pub fn function_form(f: &HomogeneousPolynomial) -> HomogeneousForm {
    HomogeneousForm::from_polynomial(f)
}
