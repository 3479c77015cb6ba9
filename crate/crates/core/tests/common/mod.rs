#![allow(dead_code)]

use std::collections::BTreeSet;

use inertia_forms::action::FiniteGroupAction;
use inertia_forms::exterior::Form;
use inertia_forms::{Matrix, Poly, Scalar};
use proptest::prelude::*;
use rand::{Rng, RngExt};

pub fn int(n: i64) -> Scalar {
    Scalar::from_int(n)
}

pub fn exponents(n: usize, max_deg: u32) -> impl Strategy<Value = Vec<u32>> {
    prop::collection::vec(0..=max_deg, n).prop_filter("degree bound", move |e| e.iter().sum::<u32>() <= max_deg)
}

pub fn poly(n: usize, max_deg: u32) -> impl Strategy<Value = Poly> {
    prop::collection::vec((exponents(n, max_deg), -4i64..=4), 0..5)
        .prop_map(move |terms| Poly::from_terms(n, terms.into_iter().map(|(e, c)| (e, int(c)))).unwrap())
}

pub fn index_set(n: usize, k: usize) -> impl Strategy<Value = Vec<usize>> {
    prop::sample::subsequence((0..n).collect::<Vec<_>>(), k)
}

pub fn form(n: usize, k: usize, max_deg: u32) -> impl Strategy<Value = Form> {
    prop::collection::vec((index_set(n, k), poly(n, max_deg)), 0..4)
        .prop_map(move |terms| Form::from_terms(n, k, terms).unwrap())
}

pub fn form_any_degree(n: usize, max_deg: u32) -> impl Strategy<Value = Form> {
    (0..=n).prop_flat_map(move |k| form(n, k, max_deg))
}

pub fn matrix(n: usize, m: usize, bound: i64) -> impl Strategy<Value = Matrix> {
    prop::collection::vec(-bound..=bound, n * m).prop_map(move |xs| Matrix::from_fn(n, m, |i, j| int(xs[i * m + j])))
}

pub fn invertible(n: usize) -> impl Strategy<Value = Matrix> {
    matrix(n, n, 3).prop_filter("invertible", |a| !a.determinant().unwrap().is_zero())
}

pub fn random_poly<R: Rng + ?Sized>(rng: &mut R, n: usize, max_deg: u32) -> Poly {
    let count = rng.random_range(0..5);
    let terms = (0..count).map(|_| {
        let mut e = vec![0u32; n];
        let deg = rng.random_range(0..=max_deg);
        for _ in 0..deg {
            e[rng.random_range(0..n)] += 1;
        }
        (e, int(rng.random_range(-4..=4)))
    });
    Poly::from_terms(n, terms).unwrap()
}

pub fn random_index_set<R: Rng + ?Sized>(rng: &mut R, n: usize, k: usize) -> Vec<usize> {
    let mut all: Vec<usize> = (0..n).collect();
    while all.len() > k {
        all.remove(rng.random_range(0..all.len()));
    }
    all
}

pub fn random_form<R: Rng + ?Sized>(rng: &mut R, n: usize, k: usize, max_deg: u32) -> Form {
    let count = rng.random_range(0..4);
    let terms: Vec<_> = (0..count)
        .map(|_| (random_index_set(rng, n, k), random_poly(rng, n, max_deg)))
        .collect();
    Form::from_terms(n, k, terms).unwrap()
}

pub fn random_matrix<R: Rng + ?Sized>(rng: &mut R, n: usize, m: usize, bound: i64) -> Matrix {
    Matrix::from_fn(n, m, |_, _| int(rng.random_range(-bound..=bound)))
}

pub fn random_invertible<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Matrix {
    loop {
        let a = random_matrix(rng, n, n, 3);
        if !a.determinant().unwrap().is_zero() {
            return a;
        }
    }
}

/// `∫₀¹ ι_{∂t} h^*ω dt` for `h(t, x) = (x_base, t·x_fiber)`, computed by
/// building the pulled-back form on `R × R^n` and integrating `t^j` to
/// `1/(j+1)`.
pub fn integral_homotopy(omega: &Form, fiber: &[bool]) -> Form {
    let n = omega.nvars();
    let k = omega.degree();
    assert!(k >= 1);
    let big = n + 1;
    let t = Poly::var(big, 0);
    let lift = |p: &Poly| {
        let terms = p.terms().iter().map(|(e, c)| {
            let tdeg: u32 = e.iter().zip(fiber).filter(|(_, &f)| f).map(|(x, _)| *x).sum();
            let mut ex = vec![tdeg];
            ex.extend_from_slice(e);
            (ex, c.clone())
        });
        Poly::from_terms(big, terms).unwrap()
    };
    let mut pulled = Form::zero(big, k);
    for (idx, p) in omega.terms() {
        let mut frame = Form::function(Poly::one(big));
        for &i in idx {
            let dx = Form::basis(big, vec![i + 1], Poly::one(big));
            let one = if fiber[i] {
                dx.mul_poly(&t)
                    .try_add(&Form::basis(big, vec![0], Poly::var(big, i + 1)))
                    .unwrap()
            } else {
                dx
            };
            frame = frame.wedge(&one);
        }
        pulled = pulled.try_add(&frame.mul_poly(&lift(p))).unwrap();
    }
    let mut terms = Vec::new();
    for (idx, q) in pulled.terms() {
        if idx.first() != Some(&0) {
            continue;
        }
        let rest: Vec<usize> = idx[1..].iter().map(|i| i - 1).collect();
        let integrated = q.terms().iter().map(|(e, c)| {
            let factor = Scalar::from_ratio(1, i64::from(e[0]) + 1);
            (e[1..].to_vec(), c * &factor)
        });
        terms.push((rest, Poly::from_terms(n, integrated).unwrap()));
    }
    Form::from_terms(n, k - 1, terms).unwrap()
}

/// Conjugacy class count by closing the generators under multiplication
/// and sweeping conjugation orbits.
pub fn class_count(generators: &[Matrix]) -> usize {
    let n = generators[0].rows();
    let mut elements = vec![Matrix::identity(n)];
    let mut i = 0;
    while i < elements.len() {
        for g in generators {
            let p = elements[i].mul(g).unwrap();
            if !elements.contains(&p) {
                elements.push(p);
            }
        }
        i += 1;
    }
    let mut seen = BTreeSet::new();
    let mut classes = 0;
    for (a, x) in elements.iter().enumerate() {
        if seen.contains(&a) {
            continue;
        }
        classes += 1;
        for h in &elements {
            let c = h.mul(x).unwrap().mul(&h.inverse().unwrap()).unwrap();
            seen.insert(elements.iter().position(|y| *y == c).unwrap());
        }
    }
    classes
}

/// The finite actions used by the resolution and homotopy checks.
pub fn finite_cases() -> Vec<(&'static str, Vec<Matrix>)> {
    let rot = Matrix::from_ints(&[&[0, -1], &[1, 0]]);
    let refl = Matrix::from_ints(&[&[1, 0], &[0, -1]]);
    vec![
        ("trivial on R^2", vec![Matrix::identity(2)]),
        ("Z/2 sign on R^1", vec![Matrix::from_ints(&[&[-1]])]),
        ("cyclic 4 on R^2", vec![rot.clone()]),
        ("dihedral 8 on R^2", vec![rot, refl]),
    ]
}

pub fn group(generators: &[Matrix]) -> FiniteGroupAction {
    FiniteGroupAction::from_generators(generators).unwrap()
}
