//! Reference computations that share no code with the library beyond reading
//! coefficients out of its values.

#![allow(dead_code)]

use std::collections::BTreeMap;

use formlin::exterior::{HomogeneousForm, IndexSet};
use formlin::scalar_poly::{MultiIndex, Scalar};
use formlin::vvforms::VectorValuedForm;
use num_traits::{One, Zero};

/// `x^γ dx_I ↦ c` with `I` strictly increasing.
pub type Form = BTreeMap<(Vec<u32>, Vec<usize>), Scalar>;
/// `x^γ ↦ c`
pub type Poly = BTreeMap<Vec<u32>, Scalar>;

/// `(weight, dim Ω¹(w), φ_ω(w), rank T(w−2) → Ω¹(w))` for `ω = x1 dx2 − x2 dx1`, `n = 3`,
/// produced by `phi_omega.py` with exact dense elimination.
pub const PHI_ROTATION_N3: [(i64, usize, usize, usize); 8] = [
    (1, 3, 2, 2),
    (2, 9, 6, 3),
    (3, 18, 12, 12),
    (4, 30, 20, 20),
    (5, 45, 30, 30),
    (6, 63, 42, 42),
    (7, 84, 56, 56),
    (8, 108, 72, 72),
];

pub fn from_library(form: &HomogeneousForm) -> Form {
    form.terms()
        .iter()
        .map(|((g, s), c)| ((g.exponents().to_vec(), s.iter().collect()), c.clone()))
        .collect()
}

pub fn to_library(n: usize, r: i64, b: i64, form: &Form) -> HomogeneousForm {
    let terms = form.iter().map(|((g, set), c)| {
        let (s, _) = IndexSet::from_ordered(set).unwrap();
        ((MultiIndex::new(g.clone()), s), c.clone())
    });
    HomogeneousForm::from_terms(n, r, b, terms).unwrap()
}

fn add_term<K: Ord>(map: &mut BTreeMap<K, Scalar>, key: K, c: Scalar) {
    let entry = map.entry(key).or_insert_with(Scalar::zero);
    *entry += c;
}

fn prune<K: Ord + Clone>(map: BTreeMap<K, Scalar>) -> BTreeMap<K, Scalar> {
    map.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}

fn mul_monomial(a: &[u32], b: &[u32]) -> Vec<u32> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn permutation_sign(seq: &[usize]) -> Option<i64> {
    let mut v = seq.to_vec();
    let mut sign = 1;
    for i in 0..v.len() {
        for j in 0..v.len() - 1 - i {
            if v[j] == v[j + 1] {
                return None;
            }
            if v[j] > v[j + 1] {
                v.swap(j, j + 1);
                sign = -sign;
            }
        }
    }
    let mut sorted = v.clone();
    sorted.dedup();
    (sorted.len() == v.len()).then_some(sign)
}

fn permutations(m: usize) -> Vec<Vec<usize>> {
    if m == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(m - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, m - 1);
            out.push(q);
        }
    }
    out
}

fn subsets(n: usize, m: usize) -> Vec<Vec<usize>> {
    if m == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for last in (m - 1)..n {
        for mut s in subsets(last, m - 1) {
            s.push(last);
            out.push(s);
        }
    }
    out
}

fn factorial(m: usize) -> Scalar {
    (1..=m as i64).fold(Scalar::one(), |acc, k| acc * Scalar::from_integer(k.into()))
}

/// `τ(e_{j1}, …, e_{jm})` as a polynomial, with `dx_I(e_I) = 1` for increasing `I`.
pub fn evaluate(tau: &Form, vectors: &[usize]) -> Poly {
    let mut out = Poly::new();
    let Some(sign) = permutation_sign(vectors) else {
        return out;
    };
    let mut sorted = vectors.to_vec();
    sorted.sort_unstable();
    for ((g, set), c) in tau {
        if *set == sorted {
            add_term(&mut out, g.clone(), c * Scalar::from_integer(sign.into()));
        }
    }
    prune(out)
}

/// `i_K τ` from `(i_K τ)(X₁, …) = 1/(k!(ℓ−1)!) Σ_σ sign σ · τ(K(X_σ1, …, X_σk), X_σ(k+1), …)`
/// evaluated on coordinate vectors, for `K = Σ ρ_j ⊗ ∂_j` of form degree `k`.
pub fn contraction_by_permutations(
    n: usize,
    k_degree: usize,
    components: &[(usize, Form)],
    tau: &Form,
    ell: usize,
) -> Form {
    let mut out = Form::new();
    if ell == 0 {
        return out;
    }
    let m = k_degree + ell - 1;
    if m > n {
        return out;
    }
    let norm = Scalar::one() / (factorial(k_degree) * factorial(ell - 1));
    for set in subsets(n, m) {
        let mut value = Poly::new();
        for sigma in permutations(m) {
            let arranged: Vec<usize> = sigma.iter().map(|&i| set[i]).collect();
            let sign = Scalar::from_integer(permutation_sign(&sigma).unwrap().into());
            let (head, tail) = arranged.split_at(k_degree);
            for (j, rho) in components {
                let coefficient = evaluate(rho, head);
                if coefficient.is_empty() {
                    continue;
                }
                let mut slots = vec![*j];
                slots.extend_from_slice(tail);
                let rest = evaluate(tau, &slots);
                for (a, u) in &coefficient {
                    for (b, v) in &rest {
                        add_term(&mut value, mul_monomial(a, b), &sign * u * v);
                    }
                }
            }
        }
        for (g, c) in prune(value) {
            add_term(&mut out, (g, set.clone()), c * &norm);
        }
    }
    prune(out)
}

pub fn vv_components(k: &VectorValuedForm) -> Vec<(usize, Form)> {
    k.components()
        .iter()
        .map(|(j, rho)| (*j, from_library(rho)))
        .collect()
}

fn wedge_ordered(left: &[usize], right: &[usize]) -> Option<(Vec<usize>, i64)> {
    let mut joined = left.to_vec();
    joined.extend_from_slice(right);
    let sign = permutation_sign(&joined)?;
    joined.sort_unstable();
    Some((joined, sign))
}

pub fn wedge(a: &Form, b: &Form) -> Form {
    let mut out = Form::new();
    for ((g, i), u) in a {
        for ((h, j), v) in b {
            if let Some((set, sign)) = wedge_ordered(i, j) {
                add_term(
                    &mut out,
                    (mul_monomial(g, h), set),
                    u * v * Scalar::from_integer(sign.into()),
                );
            }
        }
    }
    prune(out)
}

pub fn poly_form(p: &Poly) -> Form {
    p.iter()
        .map(|(g, c)| ((g.clone(), vec![]), c.clone()))
        .collect()
}

pub fn d(form: &Form) -> Form {
    let mut out = Form::new();
    for ((g, set), c) in form {
        for k in 0..g.len() {
            if g[k] == 0 {
                continue;
            }
            let mut h = g.clone();
            h[k] -= 1;
            if let Some((s, sign)) = wedge_ordered(&[k], set) {
                add_term(
                    &mut out,
                    (h, s),
                    c * Scalar::from_integer((sign * g[k] as i64).into()),
                );
            }
        }
    }
    prune(out)
}

/// `i_R τ` for the radial field `R = Σ x_k ∂_k`.
pub fn radial_contraction(form: &Form) -> Form {
    let mut out = Form::new();
    for ((g, set), c) in form {
        for (pos, &k) in set.iter().enumerate() {
            let mut h = g.clone();
            h[k] += 1;
            let mut rest = set.clone();
            rest.remove(pos);
            let sign = if pos % 2 == 0 { 1 } else { -1 };
            add_term(&mut out, (h, rest), c * Scalar::from_integer(sign.into()));
        }
    }
    prune(out)
}

fn scale(form: &Form, s: &Scalar) -> Form {
    prune(form.iter().map(|(k, c)| (k.clone(), c * s)).collect())
}

fn add(a: &Form, b: &Form) -> Form {
    let mut out = a.clone();
    for (k, c) in b {
        add_term(&mut out, k.clone(), c.clone());
    }
    prune(out)
}

/// `f·τ = b/(b+c) fτ + 1/(b+c) df ∧ i_R τ` for `f` of degree `c`, `τ` of weight `b`.
pub fn dd_action(f: &Poly, c: u32, tau: &Form, b: i64) -> Form {
    let denominator = Scalar::from_integer((b + c as i64).into());
    let alpha = Scalar::from_integer(b.into()) / &denominator;
    let beta = Scalar::one() / denominator;
    let plain = wedge(&poly_form(f), tau);
    let twist = wedge(&d(&poly_form(f)), &radial_contraction(tau));
    add(&scale(&plain, &alpha), &scale(&twist, &beta))
}

pub fn monomials(n: usize, c: u32) -> Vec<Vec<u32>> {
    if n == 0 {
        return if c == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in (0..=c).rev() {
        for mut rest in monomials(n - 1, c - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Exact rank by Gaussian elimination over ℚ.
pub fn rank(vectors: &[Form]) -> usize {
    let mut rows: Vec<Form> = vectors.iter().filter(|v| !v.is_empty()).cloned().collect();
    let mut r = 0;
    while let Some(pivot_row) = rows.iter().position(|v| !v.is_empty()) {
        let pivot = rows.swap_remove(pivot_row);
        let (key, lead) = pivot
            .iter()
            .next()
            .map(|(k, c)| (k.clone(), c.clone()))
            .unwrap();
        for row in rows.iter_mut() {
            if let Some(c) = row.get(&key).cloned() {
                *row = add(row, &scale(&pivot, &(-c / &lead)));
            }
        }
        rows.retain(|v| !v.is_empty());
        r += 1;
    }
    r
}

/// Generator counts of `ker(d) ∩ Ω¹ = d(Ω⁰)` under the `dd` action, found by
/// growing the submodule spanned by generators chosen so far one weight at a time.
pub fn exact_one_form_generators(
    n: usize,
    threshold: i64,
    max_weight: i64,
) -> BTreeMap<i64, (usize, usize)> {
    let mut generators: Vec<(i64, Form)> = Vec::new();
    let mut out = BTreeMap::new();
    for b in threshold.max(1)..=max_weight {
        let space: Vec<Form> = monomials(n, b as u32)
            .into_iter()
            .map(|g| d(&poly_form(&Poly::from([(g, Scalar::one())]))))
            .collect();
        let mut span: Vec<Form> = Vec::new();
        for (w, gen) in &generators {
            for m in monomials(n, (b - w) as u32) {
                span.push(dd_action(
                    &Poly::from([(m, Scalar::one())]),
                    (b - w) as u32,
                    gen,
                    *w,
                ));
            }
        }
        let dimension = rank(&space);
        let mut current = rank(&span);
        let before = current;
        for v in space {
            let mut with = span.clone();
            with.push(v.clone());
            let next = rank(&with);
            if next > current {
                span.push(v.clone());
                generators.push((b, v));
                current = next;
            }
        }
        assert_eq!(current, dimension, "submodule leaves d(Ω⁰) at weight {b}");
        out.insert(b, (dimension, dimension - before));
    }
    out
}
