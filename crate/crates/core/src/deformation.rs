//! Deformed polynomial actions `f·τ = α(r,b,c) fτ + β(r,b,c) df∧i_Rτ` on a
//! truncated exterior algebra, and the linearizability classifier for the
//! `Id`-generated operator family.

use std::fmt;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exterior::{FormBasis, HomogeneousForm};
use crate::operators::IdFamily;
use crate::scalar_poly::{
    int, scalar_string, sign_power, HomogeneousPolynomial, MultiIndex, Scalar,
};
use crate::vvforms::{function_form, GradedEndomorphism};

/// `⊕_{r, b ≥ n_r} Ω^r(b)`, the part of the algebra on which a deformed action is defined.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TruncatedAlgebra {
    n: usize,
    thresholds: Vec<i64>,
}

impl TruncatedAlgebra {
    /// `thresholds[r]` is `n_r` for `0 ≤ r ≤ n`.
    pub fn new(n: usize, thresholds: Vec<i64>) -> Result<Self> {
        if thresholds.len() != n + 1 {
            return Err(Error::Config(format!(
                "expected {} thresholds, got {}",
                n + 1,
                thresholds.len()
            )));
        }
        Ok(TruncatedAlgebra { n, thresholds })
    }

    pub fn full(n: usize) -> Self {
        TruncatedAlgebra {
            n,
            thresholds: vec![0; n + 1],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn thresholds(&self) -> &[i64] {
        &self.thresholds
    }

    /// `n_r`; degrees outside `0..=n` carry only the zero form and never truncate.
    pub fn threshold(&self, r: i64) -> i64 {
        usize::try_from(r)
            .ok()
            .and_then(|r| self.thresholds.get(r).copied())
            .unwrap_or(i64::MIN)
    }

    pub fn contains(&self, tau: &HomogeneousForm) -> bool {
        tau.weight() >= self.threshold(tau.degree())
    }
}

/// Parameters `(q, a, t)` of the closed-form family with
/// `k(r) = a(r/q + (−1)^q t)`, `α = (b − k)/(b + c − k)`, `β = 1/(b + c − k)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Teo1Params {
    pub q: i64,
    pub a: i64,
    pub t: Scalar,
}

impl Teo1Params {
    /// `k(r)`
    pub fn shift(&self, r: i64) -> Scalar {
        int(self.a) * (Scalar::new(r.into(), self.q.into()) + sign_power(self.q) * &self.t)
    }

    /// `k(r) = slope·r + offset`
    fn shift_parts(&self) -> (Scalar, Scalar) {
        (
            Scalar::new(self.a.into(), self.q.into()),
            int(self.a) * sign_power(self.q) * &self.t,
        )
    }
}

type CoefficientFn = dyn Fn(i64, i64, i64) -> Option<(Scalar, Scalar)> + Send + Sync;

#[derive(Clone)]
pub enum CoefficientFamily {
    /// `α = 1`, `β = 0`: the usual multiplication.
    Trivial,
    Teo1(Teo1Params),
    /// An explicit `(r, b, c) ↦ (α, β)` table; `None` marks a vanishing denominator.
    Custom {
        label: String,
        table: Arc<CoefficientFn>,
    },
}

impl fmt::Debug for CoefficientFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoefficientFamily::Trivial => f.write_str("Trivial"),
            CoefficientFamily::Teo1(p) => f.debug_tuple("Teo1").field(p).finish(),
            CoefficientFamily::Custom { label, .. } => {
                f.debug_struct("Custom").field("label", label).finish()
            }
        }
    }
}

/// How far above the denominator poles the thresholds are placed.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum TruncationMode {
    /// Smallest `n_r > k(r)`, clamped at 0.
    Minimal,
    /// Additionally `n_r > n` and `α(r,b,1) ≠ ±β(r,b,1)` for every `b ≥ n_r`.
    Generation,
}

/// Coefficients of a deformed action together with the truncation they live on.
#[derive(Clone, Debug)]
pub struct ActionCoefficients {
    family: CoefficientFamily,
    algebra: TruncatedAlgebra,
}

impl ActionCoefficients {
    pub fn trivial(n: usize) -> Self {
        ActionCoefficients {
            family: CoefficientFamily::Trivial,
            algebra: TruncatedAlgebra::full(n),
        }
    }

    pub fn custom<F>(label: &str, algebra: TruncatedAlgebra, table: F) -> Self
    where
        F: Fn(i64, i64, i64) -> Option<(Scalar, Scalar)> + Send + Sync + 'static,
    {
        ActionCoefficients {
            family: CoefficientFamily::Custom {
                label: label.to_string(),
                table: Arc::new(table),
            },
            algebra,
        }
    }

    /// Replaces `β` by `factor·β`, keeping `α` and the truncation.
    pub fn with_scaled_beta(&self, factor: Scalar) -> Self {
        let base = self.clone();
        ActionCoefficients::custom(
            &format!(
                "{} with beta scaled by {}",
                self.label(),
                scalar_string(&factor)
            ),
            self.algebra.clone(),
            move |r, b, c| {
                base.coefficients(r, b, c)
                    .ok()
                    .map(|(al, be)| (al, be * &factor))
            },
        )
    }

    pub fn with_algebra(mut self, algebra: TruncatedAlgebra) -> Self {
        self.algebra = algebra;
        self
    }

    pub fn family(&self) -> &CoefficientFamily {
        &self.family
    }

    pub fn algebra(&self) -> &TruncatedAlgebra {
        &self.algebra
    }

    pub fn n(&self) -> usize {
        self.algebra.n
    }

    pub fn is_trivial(&self) -> bool {
        matches!(self.family, CoefficientFamily::Trivial)
    }

    pub fn teo1_params(&self) -> Option<&Teo1Params> {
        match &self.family {
            CoefficientFamily::Teo1(p) => Some(p),
            _ => None,
        }
    }

    pub fn label(&self) -> String {
        match &self.family {
            CoefficientFamily::Trivial => "trivial".to_string(),
            CoefficientFamily::Teo1(p) => {
                format!("teo1(q={}, a={}, t={})", p.q, p.a, scalar_string(&p.t))
            }
            CoefficientFamily::Custom { label, .. } => label.clone(),
        }
    }

    /// `(α(r,b,c), β(r,b,c))`; `b = c = 0` always gives the usual multiplication.
    pub fn coefficients(&self, r: i64, b: i64, c: i64) -> Result<(Scalar, Scalar)> {
        if b == 0 && c == 0 {
            return Ok((Scalar::one(), Scalar::zero()));
        }
        let domain = || Error::CoefficientDomain { r, b, c };
        match &self.family {
            CoefficientFamily::Trivial => Ok((Scalar::one(), Scalar::zero())),
            CoefficientFamily::Teo1(p) => {
                let shifted = int(b) - p.shift(r);
                let den = &shifted + int(c);
                if den.is_zero() {
                    if c == 0 {
                        return Ok((Scalar::one(), Scalar::zero()));
                    }
                    return Err(domain());
                }
                let beta = den.recip();
                Ok((shifted * &beta, beta))
            }
            CoefficientFamily::Custom { table, .. } => table(r, b, c).ok_or_else(domain),
        }
    }

    /// `α` and `β` as expressions in `r, b, c`, when the family has a closed form.
    pub fn formulas(&self) -> Option<(String, String)> {
        match &self.family {
            CoefficientFamily::Trivial => Some(("1".to_string(), "0".to_string())),
            CoefficientFamily::Teo1(p) => {
                let (slope, offset) = p.shift_parts();
                let num = affine(
                    &[("b", Scalar::one()), ("r", -slope.clone())],
                    &-offset.clone(),
                );
                let den = affine(
                    &[("b", Scalar::one()), ("c", Scalar::one()), ("r", -slope)],
                    &-offset,
                );
                let wrap = |s: String| if s.contains(' ') { format!("({s})") } else { s };
                let den = wrap(den);
                Some((format!("{}/{}", wrap(num), den), format!("1/{den}")))
            }
            CoefficientFamily::Custom { .. } => None,
        }
    }
}

/// `Σ coeff·var + constant` with the printing conventions used for forms.
fn affine(terms: &[(&str, Scalar)], constant: &Scalar) -> String {
    let mut out = String::new();
    let mut push = |c: &Scalar, body: &str| {
        if c.is_zero() {
            return;
        }
        let mag = c.abs();
        let text = match (body.is_empty(), mag.is_one()) {
            (true, _) => scalar_string(&mag),
            (false, true) => body.to_string(),
            (false, false) => format!("{}*{}", scalar_string(&mag), body),
        };
        if out.is_empty() {
            if c.is_negative() {
                out.push('-');
            }
        } else {
            out.push_str(if c.is_negative() { " - " } else { " + " });
        }
        out.push_str(&text);
    };
    for (var, c) in terms {
        push(c, var);
    }
    push(constant, "");
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// The closed-form family with thresholds from [`min_truncation`] in `mode`.
pub fn teo1_coefficients(
    q: i64,
    a: i64,
    t: Scalar,
    n: usize,
    mode: TruncationMode,
) -> Result<ActionCoefficients> {
    if q < 1 {
        return Err(Error::UnsupportedDegree(format!(
            "closed-form coefficients need q >= 1, got {q}"
        )));
    }
    let params = Teo1Params { q, a, t };
    let thresholds = min_truncation(&params, n, mode);
    Ok(ActionCoefficients {
        family: CoefficientFamily::Teo1(params),
        algebra: TruncatedAlgebra { n, thresholds },
    })
}

/// Thresholds `n_r`, `0 ≤ r ≤ n`, keeping every denominator away from zero.
pub fn min_truncation(params: &Teo1Params, n: usize, mode: TruncationMode) -> Vec<i64> {
    (0..=n as i64)
        .map(|r| {
            let k = params.shift(r);
            let floor = k.floor().to_integer();
            let minimal = i64::try_from(floor + 1)
                .expect("threshold fits in i64")
                .max(0);
            match mode {
                TruncationMode::Minimal => minimal,
                TruncationMode::Generation => {
                    let mut m = minimal.max(n as i64 + 1);
                    // α = β exactly at b = k + 1
                    if k.is_integer() {
                        let k1 = i64::try_from(k.to_integer()).expect("shift fits in i64") + 1;
                        if k1 >= m {
                            m = k1 + 1;
                        }
                    }
                    m
                }
            }
        })
        .collect()
}

/// Deformed action `f·τ = α fτ + β df∧i_Rτ` of a homogeneous polynomial on a form.
pub fn act(
    f: &HomogeneousPolynomial,
    tau: &HomogeneousForm,
    coeffs: &ActionCoefficients,
) -> Result<HomogeneousForm> {
    if f.n() != tau.n() {
        return Err(Error::VariableMismatch {
            left: f.n(),
            right: tau.n(),
        });
    }
    if coeffs.is_trivial() {
        return tau.mul_polynomial(f);
    }
    if tau.n() != coeffs.n() {
        return Err(Error::VariableMismatch {
            left: tau.n(),
            right: coeffs.n(),
        });
    }
    let (r, b) = tau.bidegree();
    let threshold = coeffs.algebra.threshold(r);
    if b < threshold {
        return Err(Error::Truncation { r, b, threshold });
    }
    let c = i64::from(f.degree());
    let (alpha, beta) = coeffs.coefficients(r, b, c)?;
    let plain = tau.mul_polynomial(f)?.scale(&alpha);
    if beta.is_zero() || c == 0 {
        return Ok(plain);
    }
    let twist = function_form(f).d().wedge(&tau.contract_radial())?;
    plain.add(&twist.scale(&beta))
}

/// `D = ω₁ ∧ L_Id + (ω₂ + t₁ dω₁) ∧ i_Id + λ_{μ + t₂ dω₁}` with `ω₁, ω₂, μ` radial.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct NormalForm {
    pub omega1: HomogeneousForm,
    pub omega2: HomogeneousForm,
    pub mu: HomogeneousForm,
    pub t1: Scalar,
    pub t2: Scalar,
}

/// Exact components that obstruct linearization.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Obstruction {
    /// Exact part of `ω̃₁`.
    pub omega1_exact: HomogeneousForm,
    /// Exact part of `ω̃₂` not proportional to `dω_{1r}`.
    pub omega2_residue: HomogeneousForm,
    /// Exact part of `μ̃` not proportional to `dω_{1r}`.
    pub mu_residue: HomogeneousForm,
    /// Coordinate of `ω̃₂` along `dω_{1r}` and the value `(−1)^q/q` it must take.
    pub t1: Scalar,
    pub t1_required: Scalar,
}

#[derive(Clone, Debug)]
pub enum Verdict {
    Linearizable {
        /// `None` for `ω̃₁ = 0`, where the usual multiplication already works.
        normal_form: Option<NormalForm>,
        coefficients: ActionCoefficients,
    },
    NotLinearizable {
        obstruction: Obstruction,
        /// Coefficients the counterexample was searched against.
        candidate: ActionCoefficients,
        counterexample: Option<LinearityCounterexample>,
    },
}

#[derive(Clone, Debug)]
pub struct LinearizationReport {
    pub q: i64,
    pub a: i64,
    pub verdict: Verdict,
}

impl LinearizationReport {
    pub fn is_linearizable(&self) -> bool {
        matches!(self.verdict, Verdict::Linearizable { .. })
    }
}

/// `(exact, radial)`, treating weight-zero forms (constants) as radial.
fn split(form: &HomogeneousForm) -> Result<(HomogeneousForm, HomogeneousForm)> {
    let (r, b) = form.bidegree();
    if form.is_zero() || b <= 0 {
        return Ok((HomogeneousForm::zero(form.n(), r, b), form.clone()));
    }
    form.radial_exact_split()
}

/// `(t, residue)` with `exact = t·direction + residue`, where `residue = exact` unless it is a multiple.
fn coordinate_along(
    exact: &HomogeneousForm,
    direction: &HomogeneousForm,
) -> (Scalar, HomogeneousForm) {
    let zero = HomogeneousForm::zero(exact.n(), exact.degree(), exact.weight());
    if exact.is_zero() {
        return (Scalar::zero(), zero);
    }
    if direction.is_zero() || direction.bidegree() != exact.bidegree() {
        return (Scalar::zero(), exact.clone());
    }
    let (key, c) = direction.terms().iter().next().expect("nonzero direction");
    let t = exact.coefficient(key) / c;
    if direction.scale(&t) == *exact {
        (t, zero)
    } else {
        (Scalar::zero(), exact.clone())
    }
}

/// Bounds for the exhaustive verifiers: monomials of degree `≤ c_max`,
/// basis forms of degree `≤ r_max` and weight `≤ b_max`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct CheckBounds {
    pub c_max: i64,
    pub r_max: i64,
    pub b_max: i64,
}

/// Decides whether an operator of the `Id`-generated family is linearizable.
///
/// On failure, a counterexample is searched against the closed-form
/// coefficients with the extracted `t₂` within `search`.
pub fn classify(family: &IdFamily, search: CheckBounds) -> Result<LinearizationReport> {
    let (q, a) = family.bidegree();
    let n = family.n();
    if q < 1 {
        return Err(Error::UnsupportedDegree(format!(
            "linearization is defined for q >= 1, got {q}"
        )));
    }
    if family.w1().is_zero() {
        return Ok(LinearizationReport {
            q,
            a,
            verdict: Verdict::Linearizable {
                normal_form: None,
                coefficients: ActionCoefficients::trivial(n),
            },
        });
    }
    let (w1_exact, w1_radial) = split(family.w1())?;
    let dw1 = w1_radial.d();
    let (w2_exact, w2_radial) = split(family.w2())?;
    let (mu_exact, mu_radial) = split(family.mu())?;
    let (t1, w2_res) = coordinate_along(&w2_exact, &dw1);
    let (t2, mu_res) = coordinate_along(&mu_exact, &dw1);
    let required = sign_power(q) / int(q);
    let t1_ok = dw1.is_zero() || t1 == required;
    let coefficients = teo1_coefficients(q, a, t2.clone(), n, TruncationMode::Minimal)?;
    if w1_exact.is_zero() && w2_res.is_zero() && mu_res.is_zero() && t1_ok {
        return Ok(LinearizationReport {
            q,
            a,
            verdict: Verdict::Linearizable {
                normal_form: Some(NormalForm {
                    omega1: w1_radial,
                    omega2: w2_radial,
                    mu: mu_radial,
                    t1,
                    t2,
                }),
                coefficients,
            },
        });
    }
    let counterexample = match verify_linearity(family, &coefficients, search)? {
        LinearityCheck::Pass { .. } => None,
        LinearityCheck::Counterexample(cx) => Some(cx),
    };
    Ok(LinearizationReport {
        q,
        a,
        verdict: Verdict::NotLinearizable {
            obstruction: Obstruction {
                omega1_exact: w1_exact,
                omega2_residue: w2_res,
                mu_residue: mu_res,
                t1,
                t1_required: required,
            },
            candidate: coefficients,
            counterexample,
        },
    })
}

fn monomials(n: usize, c: i64) -> Vec<HomogeneousPolynomial> {
    MultiIndex::all_of_degree(n, c as u32)
        .into_iter()
        .map(|g| HomogeneousPolynomial::monomial(g, Scalar::one()))
        .collect()
}

/// Basis forms of the truncated algebra within bounds, in `(b, r, index)` order.
fn region_basis(coeffs: &ActionCoefficients, r_max: i64, b_max: i64) -> Vec<HomogeneousForm> {
    let n = coeffs.n();
    let mut out = Vec::new();
    for b in 0..=b_max {
        for r in 0..=r_max.min(n as i64) {
            if b >= coeffs.algebra.threshold(r) {
                out.extend(FormBasis::new(n, r, b).iter());
            }
        }
    }
    out
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LinearityCounterexample {
    pub f: HomogeneousPolynomial,
    pub tau: HomogeneousForm,
    /// `D(f·τ) − f·D(τ)`
    pub residual: HomogeneousForm,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum LinearityCheck {
    Pass { checked: usize },
    Counterexample(LinearityCounterexample),
}

impl LinearityCheck {
    pub fn passed(&self) -> bool {
        matches!(self, LinearityCheck::Pass { .. })
    }
}

/// Checks `D(f·τ) = f·D(τ)` over monomials `f` and basis forms `τ` of the
/// truncated algebra, in `(c, b, r, basis index, monomial index)` order.
pub fn verify_linearity(
    op: &dyn GradedEndomorphism,
    coeffs: &ActionCoefficients,
    bounds: CheckBounds,
) -> Result<LinearityCheck> {
    let n = coeffs.n();
    if op.n() != n {
        return Err(Error::VariableMismatch {
            left: op.n(),
            right: n,
        });
    }
    let basis = region_basis(coeffs, bounds.r_max, bounds.b_max);
    let mut checked = 0;
    for c in 0..=bounds.c_max {
        let fs = monomials(n, c);
        for tau in &basis {
            let d_tau = op.apply(tau)?;
            for f in &fs {
                let lhs = op.apply(&act(f, tau, coeffs)?)?;
                let rhs = if d_tau.is_zero() {
                    HomogeneousForm::zero(n, lhs.degree(), lhs.weight())
                } else {
                    act(f, &d_tau, coeffs)?
                };
                let residual = lhs.sub(&rhs)?;
                checked += 1;
                if !residual.is_zero() {
                    return Ok(LinearityCheck::Counterexample(LinearityCounterexample {
                        f: f.clone(),
                        tau: tau.clone(),
                        residual,
                    }));
                }
            }
        }
    }
    Ok(LinearityCheck::Pass { checked })
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AssociativityCounterexample {
    pub g: HomogeneousPolynomial,
    pub f: HomogeneousPolynomial,
    pub tau: HomogeneousForm,
    /// `(gf)·τ − g·(f·τ)`
    pub residual: HomogeneousForm,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum AssociativityCheck {
    Pass { checked: usize },
    Counterexample(AssociativityCounterexample),
}

impl AssociativityCheck {
    pub fn passed(&self) -> bool {
        matches!(self, AssociativityCheck::Pass { .. })
    }
}

/// Checks `1·τ = τ` and `(gf)·τ = g·(f·τ)` over monomials `f, g` of degree
/// `≤ c_max` and basis forms `τ` of the truncated algebra.
pub fn verify_associativity(
    coeffs: &ActionCoefficients,
    bounds: CheckBounds,
) -> Result<AssociativityCheck> {
    let n = coeffs.n();
    let basis = region_basis(coeffs, bounds.r_max, bounds.b_max);
    let one = HomogeneousPolynomial::one(n);
    let mut checked = 0;
    for tau in &basis {
        let residual = act(&one, tau, coeffs)?.sub(tau)?;
        checked += 1;
        if !residual.is_zero() {
            return Ok(AssociativityCheck::Counterexample(
                AssociativityCounterexample {
                    g: one.clone(),
                    f: one,
                    tau: tau.clone(),
                    residual,
                },
            ));
        }
    }
    let by_degree: Vec<_> = (0..=bounds.c_max).map(|c| monomials(n, c)).collect();
    for c in 0..=bounds.c_max {
        for e in 0..=bounds.c_max {
            for tau in &basis {
                for f in &by_degree[c as usize] {
                    let f_tau = act(f, tau, coeffs)?;
                    for g in &by_degree[e as usize] {
                        let lhs = act(&g.mul(f)?, tau, coeffs)?;
                        let residual = lhs.sub(&act(g, &f_tau, coeffs)?)?;
                        checked += 1;
                        if !residual.is_zero() {
                            return Ok(AssociativityCheck::Counterexample(
                                AssociativityCounterexample {
                                    g: g.clone(),
                                    f: f.clone(),
                                    tau: tau.clone(),
                                    residual,
                                },
                            ));
                        }
                    }
                }
            }
        }
    }
    Ok(AssociativityCheck::Pass { checked })
}

/// The first `t` in `grid` whose closed-form coefficients make `op` pass [`verify_linearity`]
/// on at least one pair; a truncation that empties the search region never matches.
pub fn search_teo1_parameter(
    op: &dyn GradedEndomorphism,
    q: i64,
    a: i64,
    grid: &[Scalar],
    bounds: CheckBounds,
) -> Result<Option<Scalar>> {
    for t in grid {
        let coeffs = teo1_coefficients(q, a, t.clone(), op.n(), TruncationMode::Minimal)?;
        if let LinearityCheck::Pass { checked } = verify_linearity(op, &coeffs, bounds)? {
            if checked > 0 {
                return Ok(Some(t.clone()));
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::DiffOperator;
    use crate::scalar_poly::frac;
    use crate::vvforms::ExteriorDerivative;
    use proptest::prelude::*;

    fn x(n: usize, k: usize) -> HomogeneousForm {
        HomogeneousForm::coordinate(n, k).unwrap()
    }

    fn dx(n: usize, k: usize) -> HomogeneousForm {
        HomogeneousForm::dx(n, k).unwrap()
    }

    fn var(n: usize, k: usize) -> HomogeneousPolynomial {
        HomogeneousPolynomial::var(n, k).unwrap()
    }

    fn def_d(n: usize) -> ActionCoefficients {
        teo1_coefficients(1, 0, Scalar::zero(), n, TruncationMode::Minimal).unwrap()
    }

    fn omega3() -> HomogeneousForm {
        x(3, 0)
            .wedge(&dx(3, 1))
            .unwrap()
            .sub(&x(3, 1).wedge(&dx(3, 0)).unwrap())
            .unwrap()
    }

    fn triangle_family(w: &HomogeneousForm) -> IdFamily {
        let half = w.d().scale(&frac(1, 2));
        IdFamily::new(2, w.weight(), w.clone(), half.clone(), half).unwrap()
    }

    #[test]
    fn act_examples() {
        let c = def_d(3);
        let tau = dx(3, 0);
        assert_eq!(act(&HomogeneousPolynomial::one(3), &tau, &c).unwrap(), tau);
        // ½(z dx + x dz)
        let got = act(&var(3, 2), &tau, &c).unwrap();
        let expected = x(3, 2)
            .wedge(&dx(3, 0))
            .unwrap()
            .add(&x(3, 0).wedge(&dx(3, 2)).unwrap())
            .unwrap()
            .scale(&frac(1, 2));
        assert_eq!(got, expected);
        // i_R τ = 0: only the α term survives
        let f = x(3, 1);
        assert_eq!(
            act(&var(3, 1), &f, &c).unwrap(),
            f.wedge(&f).unwrap().scale(&frac(1, 2))
        );
    }

    #[test]
    fn act_enforces_truncation() {
        let c = def_d(3);
        let r = act(&var(3, 0), &HomogeneousForm::one(3), &c);
        assert_eq!(
            r,
            Err(Error::Truncation {
                r: 0,
                b: 0,
                threshold: 1
            })
        );
        let triv = ActionCoefficients::trivial(3);
        assert_eq!(
            act(&var(3, 0), &HomogeneousForm::one(3), &triv).unwrap(),
            x(3, 0)
        );
    }

    #[test]
    fn coefficient_examples() {
        let c = def_d(3);
        assert_eq!(c.coefficients(1, 2, 3).unwrap(), (frac(2, 5), frac(1, 5)));
        assert_eq!(c.algebra().thresholds(), &[1, 1, 1, 1]);
        assert_eq!(
            c.formulas().unwrap(),
            ("b/(b + c)".to_string(), "1/(b + c)".to_string())
        );

        let t = teo1_coefficients(2, 2, frac(1, 2), 3, TruncationMode::Minimal).unwrap();
        for r in 0..=3 {
            let kappa = frac(r + 1, 2);
            let m = t.algebra().threshold(r);
            for b in m..m + 4 {
                for cc in 0..3 {
                    let den = int(b + cc) - &kappa * int(2);
                    let expected = ((int(b) - &kappa * int(2)) / &den, den.recip());
                    assert_eq!(t.coefficients(r, b, cc).unwrap(), expected);
                }
            }
        }
        assert_eq!(t.algebra().threshold(1), 3);
        assert_eq!(
            t.formulas().unwrap(),
            (
                "(b - r - 1)/(b + c - r - 1)".to_string(),
                "1/(b + c - r - 1)".to_string()
            )
        );
        let a0 = teo1_coefficients(3, 0, frac(5, 7), 3, TruncationMode::Minimal).unwrap();
        assert!(a0.algebra().thresholds().iter().all(|&m| m == 1));
    }

    #[test]
    fn generation_thresholds_avoid_alpha_equal_beta() {
        let d = teo1_coefficients(1, 0, Scalar::zero(), 3, TruncationMode::Generation).unwrap();
        assert_eq!(d.algebra().thresholds(), &[4, 4, 4, 4]);
        let t = teo1_coefficients(2, 2, frac(1, 2), 3, TruncationMode::Generation).unwrap();
        // k(r) = r + 1
        assert_eq!(t.algebra().thresholds(), &[4, 4, 5, 6]);
        for r in 0..=3 {
            let m = t.algebra().threshold(r);
            for b in m..m + 6 {
                let (al, be) = t.coefficients(r, b, 1).unwrap();
                assert!(!(&al * &al - &be * &be).is_zero());
            }
        }
    }

    #[test]
    fn d_is_linear_for_deformed_action_only() {
        let b = CheckBounds {
            c_max: 3,
            r_max: 3,
            b_max: 6,
        };
        let d = ExteriorDerivative { n: 3 };
        assert!(verify_linearity(&d, &def_d(3), b).unwrap().passed());
        match verify_linearity(&d, &ActionCoefficients::trivial(3), b).unwrap() {
            LinearityCheck::Counterexample(cx) => {
                let f = function_form(&cx.f);
                let usual = f
                    .wedge(&cx.tau)
                    .unwrap()
                    .d()
                    .sub(&f.wedge(&cx.tau.d()).unwrap())
                    .unwrap();
                assert_eq!(cx.residual, usual);
                assert!(!usual.is_zero());
            }
            other => panic!("expected a counterexample, got {other:?}"),
        }
    }

    #[test]
    fn associativity_checks() {
        let b = CheckBounds {
            c_max: 2,
            r_max: 3,
            b_max: 4,
        };
        assert!(verify_associativity(&def_d(3), b).unwrap().passed());
        let t = teo1_coefficients(2, 2, frac(1, 2), 3, TruncationMode::Minimal).unwrap();
        assert!(verify_associativity(&t, CheckBounds { b_max: 6, ..b })
            .unwrap()
            .passed());
        let broken = def_d(3).with_scaled_beta(int(2));
        assert!(!verify_associativity(&broken, b).unwrap().passed());
        // degree-zero factors only exercise α(−,−,0) = 1
        let b0 = CheckBounds { c_max: 0, ..b };
        assert!(verify_associativity(&broken, b0).unwrap().passed());
    }

    #[test]
    fn classify_d() {
        let fam = IdFamily::new(
            1,
            0,
            HomogeneousForm::one(3),
            HomogeneousForm::zero(3, 1, 0),
            HomogeneousForm::zero(3, 1, 0),
        )
        .unwrap();
        let bounds = CheckBounds {
            c_max: 2,
            r_max: 3,
            b_max: 4,
        };
        let rep = classify(&fam, bounds).unwrap();
        match rep.verdict {
            Verdict::Linearizable {
                normal_form: Some(nf),
                coefficients,
            } => {
                assert!(nf.t2.is_zero());
                assert_eq!(
                    coefficients.teo1_params().unwrap(),
                    &Teo1Params {
                        q: 1,
                        a: 0,
                        t: Scalar::zero()
                    }
                );
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn classify_triangle() {
        let w = omega3();
        let rep = classify(
            &triangle_family(&w),
            CheckBounds {
                c_max: 2,
                r_max: 3,
                b_max: 5,
            },
        )
        .unwrap();
        match rep.verdict {
            Verdict::Linearizable {
                normal_form: Some(nf),
                coefficients,
            } => {
                assert_eq!(nf.t1, frac(1, 2));
                assert_eq!(nf.t2, frac(1, 2));
                assert_eq!(nf.omega1, w);
                assert!(nf.omega1.contract_radial().is_zero());
                assert!(nf.omega2.contract_radial().is_zero());
                assert!(nf.mu.contract_radial().is_zero());
                let bounds = CheckBounds {
                    c_max: 2,
                    r_max: 3,
                    b_max: 6,
                };
                let op = triangle_family(&w);
                assert!(verify_linearity(&op, &coefficients, bounds)
                    .unwrap()
                    .passed());
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn classify_rejects_exact_residue() {
        let w = omega3();
        let half = w.d().scale(&frac(1, 2));
        // exact and not a multiple of dω = 2 dx1^dx2
        let eta = dx(3, 0).wedge(&dx(3, 2)).unwrap();
        assert!(eta.d().is_zero());
        let w2 = half.add(&eta).unwrap();
        let fam = IdFamily::new(2, 2, w.clone(), w2, w.d().scale(&frac(1, 2))).unwrap();
        let rep = classify(
            &fam,
            CheckBounds {
                c_max: 1,
                r_max: 3,
                b_max: 5,
            },
        )
        .unwrap();
        match rep.verdict {
            Verdict::NotLinearizable {
                obstruction,
                counterexample,
                ..
            } => {
                assert!(obstruction.omega1_exact.is_zero());
                assert!(!obstruction.omega2_residue.is_zero());
                let cx = counterexample.expect("counterexample within bounds");
                let lhs = fam
                    .apply(&act(&cx.f, &cx.tau, &rep_coeffs(&fam)).unwrap())
                    .unwrap();
                let rhs = act(&cx.f, &fam.apply(&cx.tau).unwrap(), &rep_coeffs(&fam)).unwrap();
                assert_eq!(lhs.sub(&rhs).unwrap(), cx.residual);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    fn rep_coeffs(fam: &IdFamily) -> ActionCoefficients {
        let (q, a) = fam.bidegree();
        teo1_coefficients(q, a, frac(1, 2), fam.n(), TruncationMode::Minimal).unwrap()
    }

    #[test]
    fn classify_trivial_and_degree_errors() {
        let fam = IdFamily::new(1, 1, HomogeneousForm::zero(3, 0, 1), dx(3, 0), dx(3, 1)).unwrap();
        let rep = classify(
            &fam,
            CheckBounds {
                c_max: 1,
                r_max: 2,
                b_max: 2,
            },
        )
        .unwrap();
        match &rep.verdict {
            Verdict::Linearizable {
                normal_form: None,
                coefficients,
            } => {
                assert!(coefficients.is_trivial());
                let b = CheckBounds {
                    c_max: 2,
                    r_max: 3,
                    b_max: 3,
                };
                assert!(verify_linearity(&fam, coefficients, b).unwrap().passed());
            }
            other => panic!("unexpected {other:?}"),
        }
        let q0 = IdFamily::new(
            0,
            0,
            HomogeneousForm::zero(3, -1, 0),
            HomogeneousForm::zero(3, 0, 0),
            HomogeneousForm::one(3),
        )
        .unwrap();
        assert!(matches!(
            classify(
                &q0,
                CheckBounds {
                    c_max: 1,
                    r_max: 1,
                    b_max: 1
                }
            ),
            Err(Error::UnsupportedDegree(_))
        ));
    }

    #[test]
    fn classify_rejects_exact_omega1() {
        // ω̃₁ = d(x1 x2) is exact
        let w1 = x(3, 0).wedge(&x(3, 1)).unwrap().d();
        let fam = IdFamily::new(
            2,
            2,
            w1,
            HomogeneousForm::zero(3, 2, 2),
            HomogeneousForm::zero(3, 2, 2),
        )
        .unwrap();
        let rep = classify(
            &fam,
            CheckBounds {
                c_max: 1,
                r_max: 3,
                b_max: 4,
            },
        )
        .unwrap();
        match rep.verdict {
            Verdict::NotLinearizable {
                obstruction,
                counterexample,
                ..
            } => {
                assert!(!obstruction.omega1_exact.is_zero());
                assert!(counterexample.is_some());
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    /// Odd `q`: the coordinate along `dω₁` must be `(−1)^q/q = −1/3`.
    #[test]
    fn odd_degree_sign_of_t1() {
        let n = 4;
        let vol3 = dx(n, 0).wedge(&dx(n, 1)).unwrap().wedge(&dx(n, 2)).unwrap();
        let w1 = vol3.contract_radial();
        let make = |t1: Scalar| {
            IdFamily::new(
                3,
                3,
                w1.clone(),
                w1.d().scale(&t1),
                HomogeneousForm::zero(n, 3, 3),
            )
            .unwrap()
        };
        let bounds = CheckBounds {
            c_max: 1,
            r_max: 4,
            b_max: 6,
        };
        let good = make(frac(-1, 3));
        let rep = classify(&good, bounds).unwrap();
        assert!(rep.is_linearizable());
        if let Verdict::Linearizable { coefficients, .. } = &rep.verdict {
            assert!(verify_linearity(&good, coefficients, bounds)
                .unwrap()
                .passed());
        }
        let bad = make(frac(1, 3));
        let rep = classify(&bad, bounds).unwrap();
        match &rep.verdict {
            Verdict::NotLinearizable {
                obstruction,
                counterexample,
                ..
            } => {
                assert_eq!(obstruction.t1, frac(1, 3));
                assert_eq!(obstruction.t1_required, frac(-1, 3));
                assert!(counterexample.is_some());
            }
            other => panic!("unexpected {other:?}"),
        }
        let grid: Vec<Scalar> = (-6..=6).map(|k| frac(k, 6)).collect();
        assert_eq!(
            search_teo1_parameter(&bad, 3, 3, &grid, bounds).unwrap(),
            None
        );
        assert_eq!(
            search_teo1_parameter(&good, 3, 3, &grid, bounds).unwrap(),
            Some(Scalar::zero())
        );
    }

    #[test]
    fn search_ignores_empty_regions() {
        let op = triangle_family(&omega3());
        let bounds = CheckBounds {
            c_max: 1,
            r_max: 3,
            b_max: 4,
        };
        assert_eq!(
            search_teo1_parameter(&op, 2, 2, &[int(5)], bounds).unwrap(),
            None
        );
        assert_eq!(
            search_teo1_parameter(&op, 2, 2, &[int(5), frac(1, 2)], bounds).unwrap(),
            Some(frac(1, 2))
        );
    }

    #[test]
    fn operator_form_agrees_with_family() {
        let fam = triangle_family(&omega3());
        let op: DiffOperator = fam.to_operator().unwrap();
        let c = teo1_coefficients(2, 2, frac(1, 2), 3, TruncationMode::Minimal).unwrap();
        let b = CheckBounds {
            c_max: 1,
            r_max: 3,
            b_max: 5,
        };
        assert!(verify_linearity(&op, &c, b).unwrap().passed());
    }

    fn arb_params() -> impl Strategy<Value = Teo1Params> {
        (1i64..=4, 0i64..=4, -3i64..=3, 1i64..=3).prop_map(|(q, a, tn, td)| Teo1Params {
            q,
            a,
            t: frac(tn, td),
        })
    }

    proptest! {
        #[test]
        fn closed_form_identities(
            p in arb_params(),
            r in 0i64..=4,
            db in 0i64..=5,
            c in 0i64..=4,
            e in 0i64..=4,
        ) {
            let coeffs = teo1_coefficients(p.q, p.a, p.t.clone(), 8, TruncationMode::Minimal).unwrap();
            let b = coeffs.algebra().threshold(r) + db;
            let (al, be) = coeffs.coefficients(r, b, c).unwrap();
            if b > 0 || c > 0 {
                prop_assert_eq!(&be, &(&al / (int(b) - p.shift(r))));
            }
            let (al_shift, _) = coeffs.coefficients(r + p.q, b + p.a, c).unwrap();
            prop_assert_eq!(&al, &al_shift);
            let (al2, _) = coeffs.coefficients(r, b + c, e).unwrap();
            let (al3, _) = coeffs.coefficients(r, b, c + e).unwrap();
            prop_assert_eq!(&al * al2, al3);
            prop_assert!(coeffs.coefficients(r, b, 0).unwrap().0.is_one());
        }

        #[test]
        fn module_action_laws(
            i in 0usize..3, j in 0usize..3, k in 0usize..3,
            tau in crate::testutil::arb_form(3, 1, 2),
        ) {
            let coeffs = def_d(3);
            let f = var(3, i).mul(&var(3, j)).unwrap();
            let g = var(3, k);
            let lhs = act(&g.mul(&f).unwrap(), &tau, &coeffs).unwrap();
            let rhs = act(&g, &act(&f, &tau, &coeffs).unwrap(), &coeffs).unwrap();
            prop_assert_eq!(lhs, rhs);
            prop_assert_eq!(act(&HomogeneousPolynomial::one(3), &tau, &coeffs).unwrap(), tau);
        }
    }
}
