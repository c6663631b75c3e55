//! The linearized exterior differential and the regularity complex
//! `T → Ω¹ → Ω³ → …` of an integrable 1-form, with differential `ω△`.

use std::ops::RangeInclusive;

use num_traits::Zero;

use crate::deformation::{act, teo1_coefficients, ActionCoefficients, TruncationMode};
use crate::error::{Error, Result};
use crate::exterior::{FieldBasis, FormBasis, HomogeneousField, HomogeneousForm};
use crate::linalg::Matrix;
use crate::modtools::operator_matrix;
use crate::scalar_poly::{frac, HomogeneousPolynomial, MultiIndex, Scalar};
use crate::vvforms::{function_form, GradedEndomorphism};

/// A homogeneous 1-form with `i_R ω = 0` and `ω ∧ dω = 0`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IntegrableOneForm {
    omega: HomogeneousForm,
}

impl IntegrableOneForm {
    pub fn new(omega: HomogeneousForm) -> Result<Self> {
        if omega.degree() != 1 {
            return Err(Error::InvariantViolation(format!(
                "expected a 1-form, got degree {}",
                omega.degree()
            )));
        }
        if omega.is_zero() {
            return Err(Error::InvariantViolation("the zero form".to_string()));
        }
        let descent = omega.contract_radial();
        if !descent.is_zero() {
            return Err(Error::InvariantViolation(format!(
                "i_R omega = {} is not zero",
                descent.render()
            )));
        }
        let frobenius = omega.wedge(&omega.d())?;
        if !frobenius.is_zero() {
            return Err(Error::InvariantViolation(format!(
                "omega ^ d omega = {} is not zero",
                frobenius.render()
            )));
        }
        Ok(IntegrableOneForm { omega })
    }

    /// `x1 dx2 − x2 dx1`
    pub fn rotation(n: usize) -> Result<Self> {
        let x = |k| HomogeneousForm::coordinate(n, k);
        let dx = |k| HomogeneousForm::dx(n, k);
        Self::new(x(0)?.wedge(&dx(1)?)?.sub(&x(1)?.wedge(&dx(0)?)?)?)
    }

    /// `i_R(df ∧ dg) = deg f · f dg − deg g · g df`
    pub fn contraction(f: &HomogeneousPolynomial, g: &HomogeneousPolynomial) -> Result<Self> {
        let df = function_form(f).d();
        let dg = function_form(g).d();
        Self::new(df.wedge(&dg)?.contract_radial())
    }

    pub fn form(&self) -> &HomogeneousForm {
        &self.omega
    }

    pub fn n(&self) -> usize {
        self.omega.n()
    }

    /// The weight `e` of `ω`.
    pub fn weight(&self) -> i64 {
        self.omega.weight()
    }

    /// `ω△` as a graded operator of bidegree `(2, e)`.
    pub fn triangle(&self) -> OmegaTriangle<'_> {
        OmegaTriangle { omega: self }
    }
}

/// `κ(r) = (r + 1)/2`
pub fn kappa(r: i64) -> Scalar {
    frac(r + 1, 2)
}

/// `ω△τ = ω ∧ dτ + κ(r) dω ∧ τ`
pub fn omega_triangle(omega: &IntegrableOneForm, tau: &HomogeneousForm) -> Result<HomogeneousForm> {
    let w = omega.form();
    w.wedge(&tau.d())?
        .add(&w.d().wedge(tau)?.scale(&kappa(tau.degree())))
}

/// `ω△X = L_X ω = i_X dω + d i_X ω`
pub fn omega_triangle_field(
    omega: &IntegrableOneForm,
    field: &HomogeneousField,
) -> Result<HomogeneousForm> {
    let w = omega.form();
    w.d().contract(field)?.add(&w.contract(field)?.d())
}

pub struct OmegaTriangle<'a> {
    omega: &'a IntegrableOneForm,
}

impl GradedEndomorphism for OmegaTriangle<'_> {
    fn n(&self) -> usize {
        self.omega.n()
    }

    fn bidegree(&self) -> (i64, i64) {
        (2, self.omega.weight())
    }

    fn apply(&self, tau: &HomogeneousForm) -> Result<HomogeneousForm> {
        omega_triangle(self.omega, tau)
    }
}

/// Coefficients `α = b/(b+c)`, `β = 1/(b+c)` of the linearized exterior differential.
pub fn d_coefficients(n: usize) -> ActionCoefficients {
    teo1_coefficients(1, 0, Scalar::zero(), n, TruncationMode::Minimal).expect("q = 1 is supported")
}

/// Coefficients `α = (b − κ(r)e)/(b + c − κ(r)e)`, `β = 1/(b + c − κ(r)e)` for `ω△`.
pub fn t_coefficients(n: usize, e: i64) -> ActionCoefficients {
    teo1_coefficients(2, e, frac(1, 2), n, TruncationMode::Minimal).expect("q = 2 is supported")
}

pub fn linearized_d_action(
    f: &HomogeneousPolynomial,
    tau: &HomogeneousForm,
) -> Result<HomogeneousForm> {
    act(f, tau, &d_coefficients(tau.n()))
}

pub fn linearized_t_action(
    omega: &IntegrableOneForm,
    f: &HomogeneousPolynomial,
    tau: &HomogeneousForm,
) -> Result<HomogeneousForm> {
    act(f, tau, &t_coefficients(omega.n(), omega.weight()))
}

/// `f·X = b/(b+c) fX` on fields of weight `b ≥ 1`.
pub fn linearized_field_action(
    f: &HomogeneousPolynomial,
    field: &HomogeneousField,
) -> Result<HomogeneousField> {
    let b = field.weight();
    if b < 1 {
        return Err(Error::Domain(format!(
            "the field action needs weight >= 1, got {b}"
        )));
    }
    let c = i64::from(f.degree());
    field.mul_polynomial(f).map(|g| g.scale(&frac(b, b + c)))
}

/// The slice of the complex ending in `Ω¹(w)`: `T(w−e) → Ω¹(w) → Ω³(w+e) → …`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ComplexSlice {
    pub weight: i64,
    /// Dimensions of `T(w−e), Ω¹(w), Ω³(w+e), …`.
    pub dims: Vec<usize>,
    /// `differentials[j]` maps position `j` to position `j + 1`.
    pub differentials: Vec<Matrix>,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RegularityComplex {
    pub omega: IntegrableOneForm,
    pub slices: Vec<ComplexSlice>,
}

/// Matrix of `X ↦ ω△X` from `T(w−e)` to `Ω¹(w)`.
pub fn field_matrix(omega: &IntegrableOneForm, w: i64) -> Result<Matrix> {
    let n = omega.n();
    let src = FieldBasis::new(n, w - omega.weight());
    let dst = FormBasis::new(n, 1, w);
    let columns = src
        .iter()
        .map(|x| dst.coordinates(&omega_triangle_field(omega, &x)?))
        .collect::<Result<Vec<_>>>()?;
    Ok(Matrix::from_columns(dst.len(), &columns))
}

/// Builds the weight slices and checks that consecutive differentials compose to zero.
pub fn build_complex(
    omega: &IntegrableOneForm,
    weights: RangeInclusive<i64>,
) -> Result<RegularityComplex> {
    let n = omega.n() as i64;
    let e = omega.weight();
    let tri = omega.triangle();
    let mut slices = Vec::new();
    for w in weights {
        let mut dims = vec![FieldBasis::new(omega.n(), w - e).len()];
        let mut differentials = vec![field_matrix(omega, w)?];
        let mut r = 1;
        while r <= n {
            let m = operator_matrix(&tri, r, w + (r - 1) / 2 * e)?;
            dims.push(m.matrix.cols());
            if r + 2 <= n {
                differentials.push(m.matrix);
            }
            r += 2;
        }
        for (j, pair) in differentials.windows(2).enumerate() {
            let product = pair[1].mul(&pair[0]);
            if !product.is_zero() {
                return Err(Error::InvariantViolation(format!(
                    "differentials {j} and {} do not compose to zero at weight {w}",
                    j + 1
                )));
            }
        }
        slices.push(ComplexSlice {
            weight: w,
            dims,
            differentials,
        });
    }
    Ok(RegularityComplex {
        omega: omega.clone(),
        slices,
    })
}

/// `φ_ω(w)` and the homology of the complex at `Ω¹(w)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PhiRow {
    pub weight: i64,
    pub dimension: usize,
    /// `dim ker(ω△ : Ω¹(w) → Ω³(w+e))`
    pub phi: usize,
    /// `rank(ω△ : T(w−e) → Ω¹(w))`
    pub incoming_rank: usize,
    pub homology: usize,
}

impl PhiRow {
    pub fn regular(&self) -> bool {
        self.homology == 0
    }
}

pub fn phi_omega(omega: &IntegrableOneForm, weights: RangeInclusive<i64>) -> Result<Vec<PhiRow>> {
    let tri = omega.triangle();
    weights
        .map(|w| {
            let out = operator_matrix(&tri, 1, w)?;
            let dimension = out.matrix.cols();
            let phi = dimension - out.rank();
            let incoming_rank = field_matrix(omega, w)?.rank();
            Ok(PhiRow {
                weight: w,
                dimension,
                phi,
                incoming_rank,
                homology: phi - incoming_rank,
            })
        })
        .collect()
}

/// A failure of `ω△(f·τ) = f·(ω△τ)` under the `ω△` coefficients.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ComplexLinearityFailure {
    pub f: HomogeneousPolynomial,
    pub input: String,
    pub residual: HomogeneousForm,
}

/// Checks S-linearity of every differential of the complex for inputs of
/// total weight `w` in `weights` (fields of weight `w − e ≥ 1`, forms of
/// weight `w + (r−1)/2·e` inside the truncation) against monomials of degree `≤ c_max`.
pub fn check_complex_linearity(
    omega: &IntegrableOneForm,
    weights: RangeInclusive<i64>,
    c_max: i64,
) -> Result<Option<ComplexLinearityFailure>> {
    let n = omega.n();
    let e = omega.weight();
    let coeffs = t_coefficients(n, e);
    let monomials: Vec<HomogeneousPolynomial> = (0..=c_max)
        .flat_map(|c| MultiIndex::all_of_degree(n, c as u32))
        .map(|g| HomogeneousPolynomial::monomial(g, Scalar::from_integer(1.into())))
        .collect();
    for w in weights {
        if w - e >= 1 {
            for x in FieldBasis::new(n, w - e).iter() {
                let image = omega_triangle_field(omega, &x)?;
                for f in &monomials {
                    let lhs = omega_triangle_field(omega, &linearized_field_action(f, &x)?)?;
                    let rhs = act(f, &image, &coeffs)?;
                    let residual = lhs.sub(&rhs)?;
                    if !residual.is_zero() {
                        return Ok(Some(ComplexLinearityFailure {
                            f: f.clone(),
                            input: x.render(),
                            residual,
                        }));
                    }
                }
            }
        }
        let mut r = 1;
        while r <= n as i64 {
            let b = w + (r - 1) / 2 * e;
            if b >= coeffs.algebra().threshold(r) {
                for tau in FormBasis::new(n, r, b).iter() {
                    let image = omega_triangle(omega, &tau)?;
                    for f in &monomials {
                        let lhs = omega_triangle(omega, &act(f, &tau, &coeffs)?)?;
                        let rhs = if image.is_zero() {
                            HomogeneousForm::zero(n, lhs.degree(), lhs.weight())
                        } else {
                            act(f, &image, &coeffs)?
                        };
                        let residual = lhs.sub(&rhs)?;
                        if !residual.is_zero() {
                            return Ok(Some(ComplexLinearityFailure {
                                f: f.clone(),
                                input: tau.render(),
                                residual,
                            }));
                        }
                    }
                }
            }
            r += 2;
        }
    }
    Ok(None)
}

/// `α(r,b,1)² − β(r,b,1)²`, which must be nonzero for degree reduction.
pub fn alpha_beta_gap(coeffs: &ActionCoefficients, r: i64, b: i64) -> Result<Scalar> {
    let (al, be) = coeffs.coefficients(r, b, 1)?;
    Ok(&al * &al - &be * &be)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::{from_id_family, DiffOperator};
    use crate::scalar_poly::int;

    fn x(n: usize, k: usize) -> HomogeneousForm {
        HomogeneousForm::coordinate(n, k).unwrap()
    }

    fn dx(n: usize, k: usize) -> HomogeneousForm {
        HomogeneousForm::dx(n, k).unwrap()
    }

    fn var(n: usize, k: usize) -> HomogeneousPolynomial {
        HomogeneousPolynomial::var(n, k).unwrap()
    }

    fn contraction_fixture() -> IntegrableOneForm {
        let g = var(3, 1).mul(&var(3, 2)).unwrap();
        IntegrableOneForm::contraction(&var(3, 0), &g).unwrap()
    }

    #[test]
    fn fixtures_satisfy_invariants() {
        for n in [2, 3] {
            let w = IntegrableOneForm::rotation(n).unwrap();
            assert_eq!(w.weight(), 2);
        }
        let c = contraction_fixture();
        assert_eq!(c.weight(), 3);
        assert_eq!(c.form().render(), "x1*x2 dx3 + x1*x3 dx2 - 2*x2*x3 dx1");
        let not_radial = x(3, 2).wedge(&dx(3, 0)).unwrap();
        assert!(matches!(
            IntegrableOneForm::new(not_radial),
            Err(Error::InvariantViolation(_))
        ));
        // radial but not integrable: i_R(dx1^dx2 + dx3^dx4) in four variables
        let eta = dx(4, 0)
            .wedge(&dx(4, 1))
            .unwrap()
            .add(&dx(4, 2).wedge(&dx(4, 3)).unwrap())
            .unwrap();
        let non_integrable = eta.contract_radial();
        assert!(matches!(
            IntegrableOneForm::new(non_integrable),
            Err(Error::InvariantViolation(_))
        ));
    }

    #[test]
    fn triangle_examples() {
        let w = IntegrableOneForm::rotation(3).unwrap();
        let one = HomogeneousForm::one(3);
        assert_eq!(
            omega_triangle(&w, &one).unwrap(),
            w.form().d().scale(&frac(1, 2))
        );
        assert!(omega_triangle(&w, w.form()).unwrap().is_zero());
        let eta = x(3, 2).wedge(&dx(3, 2)).unwrap();
        let expected = w
            .form()
            .wedge(&eta.d())
            .unwrap()
            .add(&w.form().d().wedge(&eta).unwrap())
            .unwrap();
        assert_eq!(omega_triangle(&w, &eta).unwrap(), expected);
        let half = w.form().d().scale(&frac(1, 2));
        let op: DiffOperator = from_id_family(2, 2, w.form().clone(), half.clone(), half).unwrap();
        for tau in FormBasis::new(3, 1, 3).iter() {
            assert_eq!(op.apply(&tau).unwrap(), omega_triangle(&w, &tau).unwrap());
        }
    }

    #[test]
    fn triangle_on_fields() {
        let w = IntegrableOneForm::rotation(3).unwrap();
        let r = HomogeneousField::radial(3);
        assert_eq!(
            omega_triangle_field(&w, &r).unwrap(),
            w.form().scale(&int(2))
        );
        let d3 = HomogeneousField::coordinate(3, 2).unwrap();
        assert!(omega_triangle_field(&w, &d3).unwrap().is_zero());
        for x in FieldBasis::new(3, 1).iter() {
            let once = omega_triangle_field(&w, &x).unwrap();
            assert!(omega_triangle(&w, &once).unwrap().is_zero());
        }
    }

    #[test]
    fn complex_and_phi() {
        let w = IntegrableOneForm::rotation(3).unwrap();
        let cx = build_complex(&w, 1..=5).unwrap();
        for s in &cx.slices {
            assert_eq!(s.dims.len(), 3);
            assert_eq!(s.differentials.len(), 2);
        }
        let w2 = IntegrableOneForm::rotation(2).unwrap();
        let cx2 = build_complex(&w2, 1..=4).unwrap();
        assert!(cx2
            .slices
            .iter()
            .all(|s| s.dims.len() == 2 && s.differentials.len() == 1));
        for row in phi_omega(&w2, 1..=5).unwrap() {
            assert_eq!(row.phi, row.dimension);
            assert!(row.homology <= row.phi);
        }
    }

    #[test]
    fn linearized_actions() {
        let tau = dx(3, 0);
        let got = linearized_d_action(&var(3, 2), &tau).unwrap();
        let expected = x(3, 2)
            .wedge(&dx(3, 0))
            .unwrap()
            .add(&x(3, 0).wedge(&dx(3, 2)).unwrap())
            .unwrap()
            .scale(&frac(1, 2));
        assert_eq!(got, expected);
        let w = IntegrableOneForm::rotation(3).unwrap();
        // r = 1, b = κ(1)·2 + 1 = 3, c = 1
        let c = t_coefficients(3, 2);
        assert_eq!(c.coefficients(1, 3, 1).unwrap(), (frac(1, 2), frac(1, 2)));
        let tau = FormBasis::new(3, 1, 3).element(0);
        assert!(linearized_t_action(&w, &var(3, 0), &tau).is_ok());
        let field = HomogeneousField::basis(MultiIndex::new(vec![2, 0, 0]), 1);
        let one = HomogeneousPolynomial::one(3);
        assert_eq!(linearized_field_action(&one, &field).unwrap(), field);
        let scaled = linearized_field_action(&var(3, 0), &field).unwrap();
        assert_eq!(
            scaled,
            field.mul_polynomial(&var(3, 0)).unwrap().scale(&frac(1, 2))
        );
        let low = HomogeneousField::coordinate(3, 0).unwrap();
        assert!(linearized_field_action(&var(3, 0), &low).is_err());
    }

    #[test]
    fn complex_is_linear_for_deformed_action() {
        let w = IntegrableOneForm::rotation(3).unwrap();
        assert_eq!(check_complex_linearity(&w, 1..=5, 2).unwrap(), None);
        let c = contraction_fixture();
        assert_eq!(check_complex_linearity(&c, 1..=5, 1).unwrap(), None);
    }

    #[test]
    fn gaps() {
        let d = d_coefficients(3);
        for b in 1..12 {
            assert_eq!(alpha_beta_gap(&d, 1, b).unwrap(), frac(b - 1, b + 1));
        }
        let t = t_coefficients(3, 2);
        for r in 0..=3 {
            let k = kappa(r) * int(2);
            for b in 5..12 {
                let s = int(b) - &k;
                let expected = (&s * &s - int(1)) / ((&s + int(1)) * (&s + int(1)));
                assert_eq!(alpha_beta_gap(&t, r, b).unwrap(), expected);
            }
        }
    }
}
