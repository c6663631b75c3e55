use proptest::prelude::*;

use crate::exterior::{FormBasis, HomogeneousForm};
use crate::scalar_poly::frac;
use crate::vvforms::VectorValuedForm;

pub(crate) fn arb_form(n: usize, r: i64, b: i64) -> impl Strategy<Value = HomogeneousForm> {
    let basis = FormBasis::new(n, r, b);
    let len = basis.len();
    proptest::collection::vec((-2i64..=2, 1i64..=2), len)
        .prop_map(move |cs| basis.form(&cs.iter().map(|&(p, q)| frac(p, q)).collect::<Vec<_>>()))
}

pub(crate) fn arb_vv(n: usize, p: i64, a: i64) -> impl Strategy<Value = VectorValuedForm> {
    proptest::collection::vec(arb_form(n, p, a + 1), n).prop_map(move |forms| {
        VectorValuedForm::from_components(n, p, a, forms.into_iter().enumerate()).unwrap()
    })
}
