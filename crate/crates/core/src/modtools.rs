//! Degreewise linear algebra for graded operators and deformed actions:
//! operator matrices, Hilbert tables, degree reduction certificates and
//! minimal generator counts.

use std::collections::BTreeMap;
use std::ops::RangeInclusive;

use num_traits::Zero;

use crate::deformation::{act, ActionCoefficients};
use crate::error::{Error, Result};
use crate::exterior::{FormBasis, HomogeneousForm, IndexSet};
use crate::linalg::{rank_of, Matrix};
use crate::scalar_poly::{HomogeneousPolynomial, MultiIndex, Scalar};
use crate::vvforms::GradedEndomorphism;

/// Matrix of a graded map `Ω^r(b) → Ω^{r'}(b')` in the canonical bases.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DegreeMatrix {
    pub n: usize,
    pub domain: (i64, i64),
    pub codomain: (i64, i64),
    pub matrix: Matrix,
}

impl DegreeMatrix {
    /// Column `j` is the image of the `j`-th basis element.
    pub fn from_map<F>(n: usize, domain: (i64, i64), codomain: (i64, i64), map: F) -> Result<Self>
    where
        F: Fn(&HomogeneousForm) -> Result<HomogeneousForm>,
    {
        let src = FormBasis::new(n, domain.0, domain.1);
        let dst = FormBasis::new(n, codomain.0, codomain.1);
        let columns = src
            .iter()
            .map(|e| dst.coordinates(&map(&e)?))
            .collect::<Result<Vec<_>>>()?;
        Ok(DegreeMatrix {
            n,
            domain,
            codomain,
            matrix: Matrix::from_columns(dst.len(), &columns),
        })
    }

    pub fn rank(&self) -> usize {
        self.matrix.rank()
    }

    pub fn kernel_basis(&self) -> Vec<HomogeneousForm> {
        let src = FormBasis::new(self.n, self.domain.0, self.domain.1);
        self.matrix
            .nullspace()
            .iter()
            .map(|v| src.form(v))
            .collect()
    }
}

/// Matrix of `D` on `Ω^r(b)`.
pub fn operator_matrix(op: &dyn GradedEndomorphism, r: i64, b: i64) -> Result<DegreeMatrix> {
    let (q, a) = op.bidegree();
    DegreeMatrix::from_map(op.n(), (r, b), (r + q, b + a), |t| op.apply(t))
}

/// Matrix of `τ ↦ x_var · τ` on `Ω^r(b)` for a deformed action.
pub fn action_matrix(
    coeffs: &ActionCoefficients,
    var: usize,
    r: i64,
    b: i64,
) -> Result<DegreeMatrix> {
    let n = coeffs.n();
    let x = HomogeneousPolynomial::var(n, var)?;
    DegreeMatrix::from_map(n, (r, b), (r, b + 1), |t| act(&x, t, coeffs))
}

/// One `(r, b)` slice of a Hilbert or generator table.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DegreeRow {
    pub r: i64,
    pub b: i64,
    /// Dimension of the tracked space in this slice.
    pub dimension: usize,
    pub rank: Option<usize>,
    pub kernel: Option<usize>,
    pub generators: Option<usize>,
    /// Weight below the truncation threshold.
    pub out_of_domain: bool,
}

impl DegreeRow {
    pub fn image(&self) -> Option<usize> {
        self.rank
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DegreeTable {
    pub n: usize,
    pub rows: Vec<DegreeRow>,
}

impl DegreeTable {
    pub fn row(&self, r: i64, b: i64) -> Option<&DegreeRow> {
        self.rows.iter().find(|row| row.r == r && row.b == b)
    }
}

/// Rank and nullity of `D` on `Ω^r(b)` for every `b` in `weights`; rows
/// below the thresholds of `algebra` are flagged but still computed.
pub fn kernel_dims(
    op: &dyn GradedEndomorphism,
    r: i64,
    weights: RangeInclusive<i64>,
    algebra: Option<&crate::deformation::TruncatedAlgebra>,
) -> Result<DegreeTable> {
    let mut rows = Vec::new();
    for b in weights {
        let m = operator_matrix(op, r, b)?;
        let dimension = m.matrix.cols();
        let rank = m.rank();
        rows.push(DegreeRow {
            r,
            b,
            dimension,
            rank: Some(rank),
            kernel: Some(dimension - rank),
            generators: None,
            out_of_domain: algebra.is_some_and(|al| b < al.threshold(r)),
        });
    }
    Ok(DegreeTable { n: op.n(), rows })
}

/// A subspace `V(b) ⊆ Ω^r(b)` for each weight, given by spanning forms.
pub trait DegreewiseSubspace {
    fn n(&self) -> usize;
    fn form_degree(&self) -> i64;
    fn spanning_set(&self, b: i64) -> Result<Vec<HomogeneousForm>>;
}

/// All of `Ω^r`.
pub struct FullSpace {
    pub n: usize,
    pub r: i64,
}

impl DegreewiseSubspace for FullSpace {
    fn n(&self) -> usize {
        self.n
    }

    fn form_degree(&self) -> i64 {
        self.r
    }

    fn spanning_set(&self, b: i64) -> Result<Vec<HomogeneousForm>> {
        Ok(FormBasis::new(self.n, self.r, b).iter().collect())
    }
}

/// `V(b) = 0`.
pub struct ZeroSpace {
    pub n: usize,
    pub r: i64,
}

impl DegreewiseSubspace for ZeroSpace {
    fn n(&self) -> usize {
        self.n
    }

    fn form_degree(&self) -> i64 {
        self.r
    }

    fn spanning_set(&self, _b: i64) -> Result<Vec<HomogeneousForm>> {
        Ok(Vec::new())
    }
}

/// `ker D ∩ Ω^r`.
pub struct KernelOf<'a> {
    pub op: &'a dyn GradedEndomorphism,
    pub r: i64,
}

impl DegreewiseSubspace for KernelOf<'_> {
    fn n(&self) -> usize {
        self.op.n()
    }

    fn form_degree(&self) -> i64 {
        self.r
    }

    fn spanning_set(&self, b: i64) -> Result<Vec<HomogeneousForm>> {
        Ok(operator_matrix(self.op, self.r, b)?.kernel_basis())
    }
}

/// `D(Ω^{source})`, a subspace of `Ω^{source + q}`.
pub struct ImageOf<'a> {
    pub op: &'a dyn GradedEndomorphism,
    pub source: i64,
}

impl DegreewiseSubspace for ImageOf<'_> {
    fn n(&self) -> usize {
        self.op.n()
    }

    fn form_degree(&self) -> i64 {
        self.source + self.op.bidegree().0
    }

    fn spanning_set(&self, b: i64) -> Result<Vec<HomogeneousForm>> {
        let a = self.op.bidegree().1;
        FormBasis::new(self.op.n(), self.source, b - a)
            .iter()
            .map(|e| self.op.apply(&e))
            .filter(|f| !matches!(f, Ok(f) if f.is_zero()))
            .collect()
    }
}

/// Explicit spanning sets; weights without an entry are zero.
pub struct ExplicitSubspace {
    pub n: usize,
    pub r: i64,
    pub spans: BTreeMap<i64, Vec<HomogeneousForm>>,
}

impl DegreewiseSubspace for ExplicitSubspace {
    fn n(&self) -> usize {
        self.n
    }

    fn form_degree(&self) -> i64 {
        self.r
    }

    fn spanning_set(&self, b: i64) -> Result<Vec<HomogeneousForm>> {
        Ok(self.spans.get(&b).cloned().unwrap_or_default())
    }
}

fn coordinates(basis: &FormBasis, forms: &[HomogeneousForm]) -> Result<Vec<Vec<Scalar>>> {
    forms.iter().map(|f| basis.coordinates(f)).collect()
}

/// Number of new generators of `V` per weight: `dim V(b)` minus the rank of
/// `{x_i · v : v ∈ V(b−1)}`, checking `x_i · V(b−1) ⊆ V(b)` along the way.
pub fn generator_degrees(
    space: &dyn DegreewiseSubspace,
    coeffs: &ActionCoefficients,
    weights: RangeInclusive<i64>,
) -> Result<DegreeTable> {
    let n = space.n();
    let r = space.form_degree();
    let threshold = coeffs.algebra().threshold(r);
    let vars: Vec<HomogeneousPolynomial> = (0..n)
        .map(|k| HomogeneousPolynomial::var(n, k))
        .collect::<Result<_>>()?;
    let mut rows = Vec::new();
    for b in weights {
        let basis = FormBasis::new(n, r, b);
        let span = coordinates(&basis, &space.spanning_set(b)?)?;
        let dimension = rank_of(&span);
        if b < threshold {
            rows.push(DegreeRow {
                r,
                b,
                dimension,
                rank: None,
                kernel: None,
                generators: None,
                out_of_domain: true,
            });
            continue;
        }
        let mut products = Vec::new();
        if b > threshold {
            for v in space.spanning_set(b - 1)? {
                for x in &vars {
                    let p = act(x, &v, coeffs)?;
                    if !p.is_zero() {
                        products.push((p.clone(), basis.coordinates(&p)?));
                    }
                }
            }
        }
        let product_vectors: Vec<_> = products.iter().map(|(_, c)| c.clone()).collect();
        let mut joint = span.clone();
        joint.extend(product_vectors.iter().cloned());
        if rank_of(&joint) != dimension {
            let witness = products
                .iter()
                .find(|(_, c)| {
                    let mut with = span.clone();
                    with.push(c.clone());
                    rank_of(&with) != dimension
                })
                .map(|(p, _)| p.render())
                .unwrap_or_default();
            return Err(Error::NotASubmodule(format!(
                "x_i · V({}) leaves V({b}): {witness}",
                b - 1
            )));
        }
        rows.push(DegreeRow {
            r,
            b,
            dimension,
            rank: None,
            kernel: None,
            generators: Some(dimension - rank_of(&product_vectors)),
            out_of_domain: false,
        });
    }
    Ok(DegreeTable { n, rows })
}

/// `coefficient · (x_variable · source)`
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ReductionStep {
    pub coefficient: Scalar,
    pub variable: usize,
    pub source: HomogeneousForm,
}

/// An expression of a basis form of weight `b + 1` through the action of
/// linear monomials on forms of weight `b`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ReductionCertificate {
    pub target: HomogeneousForm,
    /// The target sits at the threshold weight and is itself a generator.
    pub generator: bool,
    pub steps: Vec<ReductionStep>,
    /// `target − Σ coefficient · (x_variable · source)`
    pub residual: HomogeneousForm,
}

impl ReductionCertificate {
    pub fn replay(&self, coeffs: &ActionCoefficients) -> Result<HomogeneousForm> {
        if self.generator {
            return Ok(self.target.clone());
        }
        let (r, b) = self.target.bidegree();
        let mut sum = HomogeneousForm::zero(self.target.n(), r, b);
        for step in &self.steps {
            let x = HomogeneousPolynomial::var(self.target.n(), step.variable)?;
            sum = sum.add(&act(&x, &step.source, coeffs)?.scale(&step.coefficient))?;
        }
        Ok(sum)
    }

    pub fn is_exact(&self) -> bool {
        self.residual.is_zero()
    }
}

/// Smallest `k ∈ I` with `γ_k > 0`.
fn case_one_index(gamma: &MultiIndex, set: IndexSet) -> Option<usize> {
    set.iter().find(|&k| gamma.get(k) > 0)
}

/// Writes the single-term form `target` of weight `b + 1` as a combination
/// of `x_k · τ` with `τ` of weight `b`.
///
/// Requires `b > n`, `b ≥ n_r` and `α(r,b,1)² ≠ β(r,b,1)²`.
pub fn reduce_degree(
    target: &HomogeneousForm,
    coeffs: &ActionCoefficients,
) -> Result<ReductionCertificate> {
    let n = target.n();
    let mut terms = target.terms().iter();
    let (((gamma, set), c), None) = (
        terms
            .next()
            .ok_or_else(|| Error::InvalidTerm("zero target".to_string()))?,
        terms.next(),
    ) else {
        return Err(Error::InvalidTerm(format!(
            "reduction target must be a single term, got {}",
            target.render()
        )));
    };
    let (r, w) = target.bidegree();
    let threshold = coeffs.algebra().threshold(r);
    if w < threshold {
        return Err(Error::Truncation { r, b: w, threshold });
    }
    if w == threshold {
        return Ok(ReductionCertificate {
            target: target.clone(),
            generator: true,
            steps: Vec::new(),
            residual: HomogeneousForm::zero(n, r, w),
        });
    }
    let b = w - 1;
    if b <= n as i64 {
        return Err(Error::ReductionUnavailable(format!(
            "source weight {b} is not above n = {n}"
        )));
    }
    let (alpha, beta) = coeffs.coefficients(r, b, 1)?;
    if &alpha * &alpha == &beta * &beta {
        return Err(Error::ReductionUnavailable(format!(
            "alpha^2 = beta^2 at (r, b) = ({r}, {b})"
        )));
    }
    let source = |g: MultiIndex, s: IndexSet| HomogeneousForm::basis(g, s);
    let mut steps = Vec::new();
    if r == 0 {
        if alpha.is_zero() {
            return Err(Error::ReductionUnavailable(format!(
                "alpha vanishes at b = {b}"
            )));
        }
        let k = (0..n).find(|&k| gamma.get(k) > 0).expect("positive weight");
        steps.push(ReductionStep {
            coefficient: c / &alpha,
            variable: k,
            source: source(gamma.minus_unit(k).expect("γ_k > 0"), *set),
        });
    } else if let Some(k) = case_one_index(gamma, *set) {
        steps.push(ReductionStep {
            coefficient: c / (&alpha + &beta),
            variable: k,
            source: source(gamma.minus_unit(k).expect("γ_k > 0"), *set),
        });
    } else {
        let k = (0..n).find(|&k| gamma.get(k) >= 2).ok_or_else(|| {
            Error::InvariantViolation(format!(
                "no exponent >= 2 in {} although b > n",
                target.render()
            ))
        })?;
        let l = set.iter().next().expect("r >= 1");
        let g1 = gamma.minus_unit(k).expect("γ_k >= 2");
        let first = source(g1.clone(), *set);
        let sigma = source(g1, IndexSet::single(k))
            .wedge(&source(MultiIndex::zero(n), *set).contract_coordinate(l)?)?;
        let (sigma_key, sigma_sign) = sigma.terms().iter().next().expect("k ∉ I");
        let second = source(sigma_key.0.clone(), sigma_key.1);
        let xk = HomogeneousPolynomial::var(n, k)?;
        let xl = HomogeneousPolynomial::var(n, l)?;
        let combo = act(&xk, &first, coeffs)?
            .scale(&alpha)
            .sub(&act(&xl, &second, coeffs)?.scale(&(&beta * sigma_sign)))?;
        let lead = combo.coefficient(&(gamma.clone(), *set));
        if lead.is_zero() {
            return Err(Error::InvariantViolation(format!(
                "combination misses the target {}",
                target.render()
            )));
        }
        let scale = c / &lead;
        steps.push(ReductionStep {
            coefficient: &alpha * &scale,
            variable: k,
            source: first,
        });
        steps.push(ReductionStep {
            coefficient: -(&beta * sigma_sign) * &scale,
            variable: l,
            source: second,
        });
        let leftover = combo.scale(&scale).sub(target)?;
        for ((g, s), v) in leftover.terms() {
            let k2 = case_one_index(g, *s).ok_or_else(|| {
                Error::InvariantViolation(format!(
                    "leftover term {} is not reducible in one step",
                    source(g.clone(), *s).render()
                ))
            })?;
            steps.push(ReductionStep {
                coefficient: -(v / (&alpha + &beta)),
                variable: k2,
                source: source(g.minus_unit(k2).expect("γ_k > 0"), *s),
            });
        }
    }
    let mut cert = ReductionCertificate {
        target: target.clone(),
        generator: false,
        steps,
        residual: HomogeneousForm::zero(n, r, w),
    };
    cert.residual = target.sub(&cert.replay(coeffs)?)?;
    Ok(cert)
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum GenerationCheck {
    Pass {
        targets: usize,
    },
    Failure {
        target: HomogeneousForm,
        reason: String,
    },
}

impl GenerationCheck {
    pub fn passed(&self) -> bool {
        matches!(self, GenerationCheck::Pass { .. })
    }
}

/// Reduces every basis form of `Ω^r` with weight in `n_r + 1 ..= n_r + depth`.
pub fn generation_check(
    r: i64,
    coeffs: &ActionCoefficients,
    depth: i64,
) -> Result<GenerationCheck> {
    let n = coeffs.n();
    let threshold = coeffs.algebra().threshold(r);
    let mut targets = 0;
    for w in threshold + 1..=threshold + depth {
        for target in FormBasis::new(n, r, w).iter() {
            targets += 1;
            match reduce_degree(&target, coeffs) {
                Ok(cert) if cert.is_exact() => {}
                Ok(cert) => {
                    return Ok(GenerationCheck::Failure {
                        target,
                        reason: format!("nonzero residual {}", cert.residual.render()),
                    })
                }
                Err(e) => {
                    return Ok(GenerationCheck::Failure {
                        target,
                        reason: e.to_string(),
                    })
                }
            }
        }
    }
    Ok(GenerationCheck::Pass { targets })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::deformation::{teo1_coefficients, TruncatedAlgebra, TruncationMode};
    use crate::operators::{DiffOperator, IdFamily};
    use crate::scalar_poly::frac;
    use crate::vvforms::{ExteriorDerivative, LeftMultiplication};

    fn x(n: usize, k: usize) -> HomogeneousForm {
        HomogeneousForm::coordinate(n, k).unwrap()
    }

    fn dx(n: usize, k: usize) -> HomogeneousForm {
        HomogeneousForm::dx(n, k).unwrap()
    }

    fn monomial_form(exps: &[u32], set: &[usize]) -> HomogeneousForm {
        let (s, _) = IndexSet::from_ordered(set).unwrap();
        HomogeneousForm::basis(MultiIndex::new(exps.to_vec()), s)
    }

    fn omega3() -> HomogeneousForm {
        x(3, 0)
            .wedge(&dx(3, 1))
            .unwrap()
            .sub(&x(3, 1).wedge(&dx(3, 0)).unwrap())
            .unwrap()
    }

    fn triangle(w: &HomogeneousForm) -> IdFamily {
        let half = w.d().scale(&frac(1, 2));
        IdFamily::new(2, w.weight(), w.clone(), half.clone(), half).unwrap()
    }

    fn def_t_generation() -> ActionCoefficients {
        teo1_coefficients(2, 2, frac(1, 2), 3, TruncationMode::Generation).unwrap()
    }

    fn def_d_generation() -> ActionCoefficients {
        teo1_coefficients(1, 0, Scalar::zero(), 3, TruncationMode::Generation).unwrap()
    }

    #[test]
    fn operator_matrix_examples() {
        let m = operator_matrix(&ExteriorDerivative { n: 2 }, 0, 1).unwrap();
        assert_eq!(m.matrix, Matrix::identity(2));
        assert_eq!(m.codomain, (1, 1));
        let zero =
            operator_matrix(&LeftMultiplication(HomogeneousForm::zero(3, 1, 1)), 1, 2).unwrap();
        assert!(zero.matrix.is_zero());
        let fam = triangle(&omega3());
        let m = operator_matrix(&fam, 1, 2).unwrap();
        let dst = FormBasis::new(3, 3, 4);
        for (j, e) in FormBasis::new(3, 1, 2).iter().enumerate() {
            assert_eq!(dst.form(&m.matrix.column(j)), fam.apply(&e).unwrap());
        }
    }

    #[test]
    fn matrices_are_additive() {
        let d = triangle(&omega3()).to_operator().unwrap();
        let lm = DiffOperator::left_multiplication(dx(3, 0).wedge(&dx(3, 2)).unwrap());
        let sum = d.add(&lm).unwrap();
        for b in 1..4 {
            let lhs = operator_matrix(&sum, 1, b).unwrap().matrix;
            let rhs = operator_matrix(&d, 1, b)
                .unwrap()
                .matrix
                .add(&operator_matrix(&lm, 1, b).unwrap().matrix);
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn kernel_examples() {
        let d = ExteriorDerivative { n: 3 };
        let t = kernel_dims(&d, 0, 1..=4, None).unwrap();
        assert!(t.rows.iter().all(|row| row.kernel == Some(0)));
        // closed 1-forms of weight 2 in two variables are d(S(2)): dimension 3
        let t = kernel_dims(&ExteriorDerivative { n: 2 }, 1, 2..=2, None).unwrap();
        assert_eq!(t.rows[0].kernel, Some(3));
        assert_eq!(t.rows[0].dimension, 4);
        let al = TruncatedAlgebra::new(3, vec![1, 1, 1, 1]).unwrap();
        let t = kernel_dims(&d, 1, 0..=2, Some(&al)).unwrap();
        assert!(t.rows[0].out_of_domain);
        assert!(!t.rows[1].out_of_domain);
        for row in &t.rows {
            assert_eq!(row.rank.unwrap() + row.kernel.unwrap(), row.dimension);
        }
    }

    #[test]
    fn action_commutes_with_linearizable_operator_at_matrix_level() {
        let coeffs = teo1_coefficients(2, 2, frac(1, 2), 3, TruncationMode::Minimal).unwrap();
        let fam = triangle(&omega3());
        for r in 0..=1 {
            let b0 = coeffs.algebra().threshold(r);
            for b in b0..b0 + 2 {
                let m_b = operator_matrix(&fam, r, b).unwrap().matrix;
                let m_b1 = operator_matrix(&fam, r, b + 1).unwrap().matrix;
                for var in 0..3 {
                    let x_src = action_matrix(&coeffs, var, r, b).unwrap().matrix;
                    let x_dst = action_matrix(&coeffs, var, r + 2, b + 2).unwrap().matrix;
                    assert_eq!(m_b1.mul(&x_src), x_dst.mul(&m_b));
                }
            }
        }
    }

    #[test]
    fn reduce_case_one() {
        let coeffs = def_t_generation();
        let target = monomial_form(&[5, 0, 0], &[0]);
        let cert = reduce_degree(&target, &coeffs).unwrap();
        assert_eq!(cert.steps.len(), 1);
        assert!(cert.is_exact());
        assert_eq!(cert.replay(&coeffs).unwrap(), target);
    }

    #[test]
    fn reduce_case_two() {
        let coeffs = def_t_generation();
        let target = monomial_form(&[0, 5, 0], &[0]);
        let cert = reduce_degree(&target, &coeffs).unwrap();
        assert!(cert.steps.len() >= 2);
        assert!(cert.is_exact());
        assert_eq!(cert.replay(&coeffs).unwrap(), target);
        let target = monomial_form(&[0, 0, 4], &[0, 1]);
        let cert = reduce_degree(&target, &coeffs).unwrap();
        assert!(cert.is_exact());
    }

    #[test]
    fn reduce_threshold_and_errors() {
        let coeffs = def_t_generation();
        let at = monomial_form(&[3, 0, 0], &[0]);
        let cert = reduce_degree(&at, &coeffs).unwrap();
        assert!(cert.generator && cert.steps.is_empty());
        let below = monomial_form(&[2, 0, 0], &[0]);
        assert!(matches!(
            reduce_degree(&below, &coeffs),
            Err(Error::Truncation { .. })
        ));
        let minimal = teo1_coefficients(1, 0, Scalar::zero(), 3, TruncationMode::Minimal).unwrap();
        let low = monomial_form(&[2, 0, 0], &[0]);
        assert!(matches!(
            reduce_degree(&low, &minimal),
            Err(Error::ReductionUnavailable(_))
        ));
        let two = monomial_form(&[5, 0, 0], &[0])
            .add(&monomial_form(&[4, 1, 0], &[0]))
            .unwrap();
        assert!(matches!(
            reduce_degree(&two, &coeffs),
            Err(Error::InvalidTerm(_))
        ));
    }

    #[test]
    fn generation_checks() {
        assert!(generation_check(1, &def_t_generation(), 3)
            .unwrap()
            .passed());
        assert!(generation_check(1, &def_d_generation(), 3)
            .unwrap()
            .passed());
        for r in 0..=3 {
            assert!(generation_check(r, &def_t_generation(), 2)
                .unwrap()
                .passed());
        }
        let base = def_d_generation();
        let corrupted =
            ActionCoefficients::custom("alpha = beta at b = 5", base.algebra().clone(), {
                let base = base.clone();
                move |r, b, c| {
                    if b == 5 && c == 1 {
                        Some((frac(1, 2), frac(1, 2)))
                    } else {
                        base.coefficients(r, b, c).ok()
                    }
                }
            });
        match generation_check(1, &corrupted, 3).unwrap() {
            GenerationCheck::Failure { target, reason } => {
                assert_eq!(target.weight(), 6);
                assert!(reason.contains("alpha^2 = beta^2"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn def_d_alpha_beta_gap() {
        let coeffs = teo1_coefficients(1, 0, Scalar::zero(), 3, TruncationMode::Minimal).unwrap();
        for b in 1..10 {
            let (al, be) = coeffs.coefficients(1, b, 1).unwrap();
            assert_eq!(&al * &al - &be * &be, frac(b - 1, b + 1));
        }
    }

    #[test]
    fn generators_of_full_space() {
        let coeffs = def_t_generation();
        let t = generator_degrees(&FullSpace { n: 3, r: 1 }, &coeffs, 3..=7).unwrap();
        assert!(t.rows[0].out_of_domain);
        assert_eq!(
            t.row(1, 4).unwrap().generators,
            Some(FormBasis::new(3, 1, 4).len())
        );
        for b in 5..=7 {
            assert_eq!(t.row(1, b).unwrap().generators, Some(0));
        }
        let z = generator_degrees(&ZeroSpace { n: 3, r: 1 }, &coeffs, 4..=6).unwrap();
        assert!(z
            .rows
            .iter()
            .all(|r| r.generators == Some(0) && r.dimension == 0));
    }

    #[test]
    fn generators_reject_non_submodule() {
        let coeffs = teo1_coefficients(1, 0, Scalar::zero(), 3, TruncationMode::Minimal).unwrap();
        let spans = BTreeMap::from([
            (1, vec![dx(3, 0)]),
            (2, vec![x(3, 0).wedge(&dx(3, 0)).unwrap()]),
        ]);
        let v = ExplicitSubspace { n: 3, r: 1, spans };
        assert!(matches!(
            generator_degrees(&v, &coeffs, 1..=2),
            Err(Error::NotASubmodule(_))
        ));
    }

    #[test]
    fn kernel_of_d_is_a_submodule_for_deformed_action() {
        let coeffs = teo1_coefficients(1, 0, Scalar::zero(), 3, TruncationMode::Minimal).unwrap();
        let d = ExteriorDerivative { n: 3 };
        let t = generator_degrees(&KernelOf { op: &d, r: 1 }, &coeffs, 1..=4).unwrap();
        assert_eq!(t.row(1, 1).unwrap().generators, Some(3));
        let trivial = ActionCoefficients::trivial(3);
        assert!(matches!(
            generator_degrees(&KernelOf { op: &d, r: 1 }, &trivial, 1..=3),
            Err(Error::NotASubmodule(_))
        ));
    }
}
