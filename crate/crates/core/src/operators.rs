//! Order-one differential operators `D = L_K + i_L + λ_μ` of bidegree `(q, a)`.
//!
//! [`DiffOperator`] stores the canonical triple. [`BlackBoxOperator`] wraps
//! any evaluator with declared probe bounds; [`decompose`] recovers the
//! triple from such a black box, and [`bracket_order_test`] checks the
//! vanishing of the double graded commutator `[[D, λ_μ], λ_τ]`.

use std::fmt;

use crate::error::{Error, Result};
use crate::exterior::{FormBasis, HomogeneousForm};
use crate::scalar_poly::{int, sign_power};
use crate::vvforms::{GradedEndomorphism, VectorValuedForm};

/// `D = L_K + i_L + λ_μ` with `K ∈ Ω^q_T`, `L ∈ Ω^{q+1}_T`, `μ ∈ Ω^q`, all of weight `a`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DiffOperator {
    n: usize,
    q: i64,
    a: i64,
    k: VectorValuedForm,
    l: VectorValuedForm,
    mu: HomogeneousForm,
}

impl DiffOperator {
    pub fn new(
        n: usize,
        q: i64,
        a: i64,
        k: VectorValuedForm,
        l: VectorValuedForm,
        mu: HomogeneousForm,
    ) -> Result<Self> {
        if q < -1 {
            return Err(Error::UnsupportedDegree(format!(
                "operator degree {q} < -1"
            )));
        }
        let parts = [
            ("K", k.n(), (k.degree(), k.weight()), (q, a)),
            ("L", l.n(), (l.degree(), l.weight()), (q + 1, a)),
            ("mu", mu.n(), mu.bidegree(), (q, a)),
        ];
        for (name, pn, got, want) in parts {
            if pn != n {
                return Err(Error::VariableMismatch { left: n, right: pn });
            }
            if got != want {
                return Err(Error::BidegreeMismatch {
                    left: format!("{name} {got:?}"),
                    right: format!("{want:?}"),
                });
            }
        }
        Ok(DiffOperator { n, q, a, k, l, mu })
    }

    pub fn zero(n: usize, q: i64, a: i64) -> Self {
        DiffOperator {
            n,
            q,
            a,
            k: VectorValuedForm::zero(n, q, a),
            l: VectorValuedForm::zero(n, q + 1, a),
            mu: HomogeneousForm::zero(n, q, a),
        }
    }

    /// `d = L_Id`
    pub fn exterior_derivative(n: usize) -> Self {
        let mut d = Self::zero(n, 1, 0);
        d.k = VectorValuedForm::identity(n);
        d
    }

    /// `λ_μ`
    pub fn left_multiplication(mu: HomogeneousForm) -> Self {
        let (q, a) = mu.bidegree();
        let mut op = Self::zero(mu.n(), q, a);
        op.mu = mu;
        op
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn bidegree(&self) -> (i64, i64) {
        (self.q, self.a)
    }

    pub fn k(&self) -> &VectorValuedForm {
        &self.k
    }

    pub fn l(&self) -> &VectorValuedForm {
        &self.l
    }

    pub fn mu(&self) -> &HomogeneousForm {
        &self.mu
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        DiffOperator::new(
            self.n,
            self.q,
            self.a,
            self.k.add(&other.k)?,
            self.l.add(&other.l)?,
            self.mu.add(&other.mu)?,
        )
    }

    /// `L_K τ + i_L τ + μ ∧ τ`
    pub fn apply(&self, tau: &HomogeneousForm) -> Result<HomogeneousForm> {
        self.k
            .lie(tau)?
            .add(&self.l.contract(tau)?)?
            .add(&self.mu.wedge(tau)?)
    }

    pub fn render(&self) -> String {
        format!(
            "L[{}] + i[{}] + lm[{}]",
            self.k.render(),
            self.l.render(),
            self.mu.render()
        )
    }
}

impl fmt::Display for DiffOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl GradedEndomorphism for DiffOperator {
    fn n(&self) -> usize {
        self.n
    }

    fn bidegree(&self) -> (i64, i64) {
        (self.q, self.a)
    }

    fn apply(&self, tau: &HomogeneousForm) -> Result<HomogeneousForm> {
        DiffOperator::apply(self, tau)
    }
}

/// Inputs of form degree `≤ r_max` and weight `≤ b_max`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct ProbeBounds {
    pub r_max: i64,
    pub b_max: i64,
}

impl ProbeBounds {
    pub fn contains(&self, tau: &HomogeneousForm) -> bool {
        tau.degree() <= self.r_max && tau.weight() <= self.b_max
    }
}

type Evaluator = dyn Fn(&HomogeneousForm) -> Result<HomogeneousForm> + Send + Sync;

/// A linear map known only through evaluation, valid on inputs within `bounds`.
///
/// Evaluators must be callable concurrently (`Send + Sync`).
pub struct BlackBoxOperator {
    n: usize,
    q: i64,
    a: i64,
    bounds: ProbeBounds,
    eval: Box<Evaluator>,
}

impl BlackBoxOperator {
    pub fn new<F>(n: usize, bidegree: (i64, i64), bounds: ProbeBounds, eval: F) -> Self
    where
        F: Fn(&HomogeneousForm) -> Result<HomogeneousForm> + Send + Sync + 'static,
    {
        BlackBoxOperator {
            n,
            q: bidegree.0,
            a: bidegree.1,
            bounds,
            eval: Box::new(eval),
        }
    }

    /// Hides an operator's structure behind its evaluation map.
    pub fn from_operator<G>(op: G, bounds: ProbeBounds) -> Self
    where
        G: GradedEndomorphism + Send + Sync + 'static,
    {
        let (n, bidegree) = (op.n(), op.bidegree());
        Self::new(n, bidegree, bounds, move |tau| op.apply(tau))
    }

    pub fn bounds(&self) -> ProbeBounds {
        self.bounds
    }
}

impl GradedEndomorphism for BlackBoxOperator {
    fn n(&self) -> usize {
        self.n
    }

    fn bidegree(&self) -> (i64, i64) {
        (self.q, self.a)
    }

    fn apply(&self, tau: &HomogeneousForm) -> Result<HomogeneousForm> {
        if !self.bounds.contains(tau) {
            return Err(Error::OutOfBounds(format!(
                "input of bidegree {:?} exceeds (r <= {}, b <= {})",
                tau.bidegree(),
                self.bounds.r_max,
                self.bounds.b_max
            )));
        }
        let out = (self.eval)(tau)?;
        let want = (tau.degree() + self.q, tau.weight() + self.a);
        if out.bidegree() != want {
            return Err(Error::InvariantViolation(format!(
                "black box mapped {:?} to {:?}, declared bidegree requires {:?}",
                tau.bidegree(),
                out.bidegree(),
                want
            )));
        }
        Ok(out)
    }
}

/// Outcome of [`bracket_order_test`].
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum OrderTest {
    Pass {
        pairs_checked: usize,
    },
    Counterexample {
        mu: HomogeneousForm,
        tau: HomogeneousForm,
        residual: HomogeneousForm,
    },
}

impl OrderTest {
    pub fn passed(&self) -> bool {
        matches!(self, OrderTest::Pass { .. })
    }
}

/// All basis elements of `Ω^r(b)` for `0 ≤ r ≤ r_max`, `0 ≤ b ≤ b_max`, ordered by `(b, r, index)`.
fn basis_within(n: usize, r_max: i64, b_max: i64) -> Vec<HomogeneousForm> {
    let mut out = Vec::new();
    for b in 0..=b_max {
        for r in 0..=r_max.min(n as i64) {
            out.extend(FormBasis::new(n, r, b).iter());
        }
    }
    out
}

/// `[[D, λ_μ], λ_τ](1)` with `[φ, ψ] = φψ − (−1)^{deg φ deg ψ} ψφ`.
pub fn double_bracket_at_one(
    op: &dyn GradedEndomorphism,
    mu: &HomogeneousForm,
    tau: &HomogeneousForm,
) -> Result<HomogeneousForm> {
    let n = op.n();
    let (q, _) = op.bidegree();
    let (m, s) = (mu.degree(), tau.degree());
    let one = HomogeneousForm::one(n);
    // [D, λ_μ](x) = D(μ∧x) − (−1)^{qm} μ∧D(x)
    let inner = |x: &HomogeneousForm| -> Result<HomogeneousForm> {
        op.apply(&mu.wedge(x)?)?
            .sub(&mu.wedge(&op.apply(x)?)?.scale(&sign_power(q * m)))
    };
    inner(tau)?.sub(&tau.wedge(&inner(&one)?)?.scale(&sign_power((q + m) * s)))
}

/// Checks `[[D, λ_μ], λ_τ] = 0` on every pair of basis forms with
/// `deg μ + deg τ ≤ r_max` and `weight μ + weight τ ≤ b_max`.
///
/// The double bracket is evaluated at `1`; vanishing there for all pairs is
/// exactly the statement that `D − λ_{D(1)}` is a derivation.
pub fn bracket_order_test(op: &dyn GradedEndomorphism, bounds: ProbeBounds) -> Result<OrderTest> {
    let basis = basis_within(op.n(), bounds.r_max, bounds.b_max);
    let mut checked = 0;
    for mu in &basis {
        for tau in &basis {
            if mu.degree() + tau.degree() > bounds.r_max
                || mu.weight() + tau.weight() > bounds.b_max
            {
                continue;
            }
            let residual = double_bracket_at_one(op, mu, tau)?;
            checked += 1;
            if !residual.is_zero() {
                return Ok(OrderTest::Counterexample {
                    mu: mu.clone(),
                    tau: tau.clone(),
                    residual,
                });
            }
        }
    }
    Ok(OrderTest::Pass {
        pairs_checked: checked,
    })
}

/// Recovers `(K, L, μ)` from a black box.
///
/// `μ = D(1)`; with `D₀ = D − λ_μ`, `K = Σ D₀(x_i) ⊗ ∂/∂x_i` and
/// `L = Σ (D₀(dx_i) − (−1)^q d D₀(x_i)) ⊗ ∂/∂x_i`. The result is then
/// compared against the black box on every basis input within its bounds.
pub fn decompose(op: &BlackBoxOperator) -> Result<DiffOperator> {
    let n = op.n();
    let (q, a) = op.bidegree();
    let bounds = op.bounds();
    if bounds.r_max < 1 || bounds.b_max < 1 {
        return Err(Error::OutOfBounds(
            "decomposition needs probes of degree and weight 1".to_string(),
        ));
    }
    let mu = op.apply(&HomogeneousForm::one(n))?;
    let mut sigma = Vec::with_capacity(n);
    let mut rho = Vec::with_capacity(n);
    for i in 0..n {
        let xi = HomogeneousForm::coordinate(n, i)?;
        let dxi = HomogeneousForm::dx(n, i)?;
        let s = op.apply(&xi)?.sub(&mu.wedge(&xi)?)?;
        let r = op
            .apply(&dxi)?
            .sub(&mu.wedge(&dxi)?)?
            .sub(&s.d().scale(&sign_power(q)))?;
        sigma.push((i, s));
        rho.push((i, r));
    }
    let k = VectorValuedForm::from_components(n, q, a, sigma)?;
    let l = VectorValuedForm::from_components(n, q + 1, a, rho)?;
    let result = DiffOperator::new(n, q, a, k, l, mu)?;
    for tau in basis_within(n, bounds.r_max, bounds.b_max) {
        let expected = op.apply(&tau)?;
        let got = result.apply(&tau)?;
        if expected != got {
            return Err(Error::NotOrderOne(format!(
                "on {} the operator gives {} but L_K + i_L + λ_μ gives {}",
                tau.render(),
                expected.render(),
                got.render()
            )));
        }
    }
    Ok(result)
}

/// An element `ω̃₁ ∧ L_Id + ω̃₂ ∧ i_Id + λ_μ̃` of the family generated by `Id`,
/// acting as `τ ↦ ω̃₁ ∧ dτ + (r ω̃₂ + μ̃) ∧ τ` on `τ ∈ Ω^r`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IdFamily {
    n: usize,
    q: i64,
    a: i64,
    w1: HomogeneousForm,
    w2: HomogeneousForm,
    mu: HomogeneousForm,
}

impl IdFamily {
    /// `w1 ∈ Ω^{q−1}(a)`, `w2, mu ∈ Ω^q(a)`.
    pub fn new(
        q: i64,
        a: i64,
        w1: HomogeneousForm,
        w2: HomogeneousForm,
        mu: HomogeneousForm,
    ) -> Result<Self> {
        let n = w1.n();
        if q < 0 {
            return Err(Error::UnsupportedDegree(format!("q = {q} < 0")));
        }
        for (name, f, want) in [
            ("w1", &w1, (q - 1, a)),
            ("w2", &w2, (q, a)),
            ("mu", &mu, (q, a)),
        ] {
            if f.n() != n {
                return Err(Error::VariableMismatch {
                    left: n,
                    right: f.n(),
                });
            }
            if f.bidegree() != want {
                return Err(Error::BidegreeMismatch {
                    left: format!("{name} {:?}", f.bidegree()),
                    right: format!("{want:?}"),
                });
            }
        }
        Ok(IdFamily {
            n,
            q,
            a,
            w1,
            w2,
            mu,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn bidegree(&self) -> (i64, i64) {
        (self.q, self.a)
    }

    pub fn w1(&self) -> &HomogeneousForm {
        &self.w1
    }

    pub fn w2(&self) -> &HomogeneousForm {
        &self.w2
    }

    pub fn mu(&self) -> &HomogeneousForm {
        &self.mu
    }

    /// The canonical triple.
    ///
    /// `ω ∧ L_Id = L_{ω∧Id} + (−1)^{deg ω} dω ∧ i_Id`, so `K = ω̃₁ ∧ Id` and
    /// `L = (ω̃₂ + (−1)^{q−1} dω̃₁) ∧ Id`.
    pub fn to_operator(&self) -> Result<DiffOperator> {
        let id = VectorValuedForm::identity(self.n);
        let k = id.wedge_form(&self.w1)?;
        let l_form = self.w2.add(&self.w1.d().scale(&sign_power(self.q - 1)))?;
        let l = id.wedge_form(&l_form)?;
        DiffOperator::new(self.n, self.q, self.a, k, l, self.mu.clone())
    }

    pub fn render(&self) -> String {
        format!(
            "idop(q={}, a={}, w1={}, w2={}, mu={})",
            self.q,
            self.a,
            self.w1.render(),
            self.w2.render(),
            self.mu.render()
        )
    }
}

impl GradedEndomorphism for IdFamily {
    fn n(&self) -> usize {
        self.n
    }

    fn bidegree(&self) -> (i64, i64) {
        (self.q, self.a)
    }

    fn apply(&self, tau: &HomogeneousForm) -> Result<HomogeneousForm> {
        let first = self.w1.wedge(&tau.d())?;
        let coeff = self.w2.scale(&int(tau.degree())).add(&self.mu)?;
        first.add(&coeff.wedge(tau)?)
    }
}

/// `ω̃₁ ∧ L_Id + ω̃₂ ∧ i_Id + λ_μ̃` as a canonical [`DiffOperator`].
pub fn from_id_family(
    q: i64,
    a: i64,
    w1: HomogeneousForm,
    w2: HomogeneousForm,
    mu: HomogeneousForm,
) -> Result<DiffOperator> {
    IdFamily::new(q, a, w1, w2, mu)?.to_operator()
}

/// `true` when two operators agree on every basis input within `bounds`.
pub fn agree_on(
    left: &dyn GradedEndomorphism,
    right: &dyn GradedEndomorphism,
    bounds: ProbeBounds,
) -> Result<bool> {
    for tau in basis_within(left.n(), bounds.r_max, bounds.b_max) {
        if left.apply(&tau)? != right.apply(&tau)? {
            return Ok(false);
        }
    }
    Ok(true)
}
