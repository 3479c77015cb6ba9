mod common;

use std::collections::BTreeMap;

use common::*;
use inertia_forms::action::{induce_action, FiniteGroupAction, LoopSpaceModel};
use inertia_forms::brforms::BasicComplex;
use inertia_forms::circle::{circle_basic_dims, circle_relative_complex, CircleModel, CircleWeights, THETA};
use inertia_forms::exterior::Form;
use inertia_forms::graded::{cohomology_dims, monomials, GradedMap, GradedSubspace, Slot, SlotBasis, Subspace};
use inertia_forms::variety::{chart_transfer, cocycle_check, gg_complex, vanishing_ideal_slices, SubspaceArrangement};
use inertia_forms::{Matrix, Poly, Scalar};
use proptest::prelude::*;

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn scalar_vec(n: usize) -> impl Strategy<Value = Vec<Scalar>> {
    prop::collection::vec((-3i64..=3).prop_map(int), n)
}

fn subspace(n: usize) -> impl Strategy<Value = Subspace> {
    prop::collection::vec(scalar_vec(n), 0..=n).prop_map(move |vs| Subspace::span(n, vs).unwrap())
}

/// An arrangement of one or two subspaces, each given by spanning vectors.
fn arrangement(n: usize) -> impl Strategy<Value = SubspaceArrangement> {
    prop::collection::vec(subspace(n), 1..=2)
        .prop_map(move |comps| SubspaceArrangement::from_subspaces(n, comps).unwrap())
}

/// Signed permutation matrices of size `n`.
fn signed_permutation(n: usize) -> impl Strategy<Value = Matrix> {
    (
        Just((0..n).collect::<Vec<_>>()).prop_shuffle(),
        prop::collection::vec(any::<bool>(), n),
    )
        .prop_map(move |(perm, signs)| {
            Matrix::from_fn(n, n, |i, j| {
                if perm[j] == i {
                    int(if signs[j] { -1 } else { 1 })
                } else {
                    int(0)
                }
            })
        })
}

fn finite_group(n: usize) -> impl Strategy<Value = (Vec<Matrix>, FiniteGroupAction)> {
    prop::collection::vec(signed_permutation(n), 1..=2).prop_map(|gens| {
        let g = FiniteGroupAction::from_generators(&gens).unwrap();
        (gens, g)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn span_is_canonical(
        forms in prop::collection::vec(form(2, 1, 2), 1..4),
        scales in prop::collection::vec(prop_oneof![-5i64..=-1, 1i64..=5], 4),
        rotate in 0usize..4,
    ) {
        let a = GradedSubspace::span_from_forms(2, &forms).unwrap();
        let mut shuffled: Vec<Form> = forms.iter().zip(&scales).map(|(f, &c)| f.scale(&int(c))).collect();
        let r = rotate % shuffled.len();
        shuffled.rotate_left(r);
        let b = GradedSubspace::span_from_forms(2, &shuffled).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn dimension_formula(a in subspace(4), b in subspace(4)) {
        let sum = a.sum(&b).unwrap();
        let meet = a.intersection(&b).unwrap();
        prop_assert_eq!(a.dim() + b.dim(), sum.dim() + meet.dim());
        prop_assert!(sum.contains_subspace(&a) && sum.contains_subspace(&b));
        prop_assert!(a.contains_subspace(&meet) && b.contains_subspace(&meet));
    }

    #[test]
    fn ideal_transforms_with_the_arrangement(arr in arrangement(3), a in invertible(3)) {
        let ideal = vanishing_ideal_slices(&arr, 3).unwrap();
        let moved = vanishing_ideal_slices(&arr.transformed(&a).unwrap(), 3).unwrap();
        let a_inv = a.inverse().unwrap();
        for w in 0..=3 {
            prop_assert_eq!(ideal.dim(w), moved.dim(w));
            for p in ideal.polys(w) {
                prop_assert!(moved.contains(&p.linear_substitute(&a_inv).unwrap()).unwrap());
            }
        }
    }

    #[test]
    fn ideal_slices_are_ideal(arr in arrangement(3)) {
        let ideal = vanishing_ideal_slices(&arr, 3).unwrap();
        for w in 0..3 {
            for p in ideal.polys(w) {
                for i in 0..3 {
                    let q = &p * &inertia_forms::Poly::var(3, i);
                    prop_assert!(ideal.contains(&q).unwrap());
                }
            }
        }
    }

    #[test]
    fn quotients_are_d_stable(arr in arrangement(3)) {
        // build checks that d(J) ⊆ J on every slot
        let q = gg_complex(&arr, 3).unwrap();
        let denoms = q.denominators();
        for (slot, sub) in denoms.slots() {
            if slot.degree >= 3 {
                continue;
            }
            let next = Slot::new(slot.weight, slot.degree + 1);
            let d = q.ambient_differential().get(*slot).unwrap();
            let image = sub.image(d).unwrap();
            prop_assert!(denoms.get(next).unwrap().contains_subspace(&image));
        }
    }

    #[test]
    fn smooth_quotient_matches_de_rham(basis in subspace(3)) {
        let r = basis.dim();
        let arr = SubspaceArrangement::from_subspaces(3, vec![basis]).unwrap();
        let q = gg_complex(&arr, 4).unwrap();
        for w in 0..=4 {
            for k in 0..=3 {
                let expected = if k <= w { binomial(r, k) * monomials(r, w - k).len() } else { 0 };
                prop_assert_eq!(q.dim(Slot::new(w, k)), expected, "slot ({}, {})", w, k);
            }
        }
    }

    #[test]
    fn transfers_commute_and_compose(x in arrangement(2), h1 in matrix(4, 3, 2), h2 in matrix(3, 2, 2)) {
        prop_assume!(h1.rank() == 3 && h2.rank() == 2);
        let mid_arr = SubspaceArrangement::from_subspaces(
            3,
            x.components().iter().map(|c| c.image(&h2)).collect::<Result<_, _>>().unwrap(),
        ).unwrap();
        let top_arr = SubspaceArrangement::from_subspaces(
            4,
            mid_arr.components().iter().map(|c| c.image(&h1)).collect::<Result<_, _>>().unwrap(),
        ).unwrap();
        let (top, mid, low) = (gg_complex(&top_arr, 3).unwrap(), gg_complex(&mid_arr, 3).unwrap(), gg_complex(&x, 3).unwrap());
        let first = chart_transfer(&top, &mid, &h1).unwrap();
        let second = chart_transfer(&mid, &low, &h2).unwrap();
        let composite = chart_transfer(&top, &low, &h1.mul(&h2).unwrap()).unwrap();
        for t in [&first, &second, &composite] {
            prop_assert!(t.is_isomorphism());
        }
        prop_assert!(first.commutes_with_differentials(&top, &mid).unwrap());
        prop_assert!(second.commutes_with_differentials(&mid, &low).unwrap());
        prop_assert!(cocycle_check(&composite, &first, &second).unwrap());
    }

    #[test]
    fn loop_model_is_equivariant((_, g) in finite_group(3)) {
        let model = LoopSpaceModel::new(&g).unwrap();
        for piece in model.pieces() {
            let m = g.matrix(piece.element);
            for v in piece.basis().row_vecs() {
                prop_assert_eq!(m.apply(&v), v.clone());
            }
            for h in 0..g.order() {
                let c = g.conjugate(h, piece.element);
                let target = &model.piece(c, piece.block).unwrap().fixed;
                let image = piece.fixed.image(g.matrix(h)).unwrap();
                prop_assert_eq!(&image, target);
            }
        }
        prop_assert_eq!(model.pieces()[0].dim(), 3);
    }

    #[test]
    fn induction_keeps_the_group((_, g) in finite_group(2), pick in any::<prop::sample::Index>()) {
        let x = pick.index(g.order());
        let h = g.subgroup(&[x]).unwrap();
        let rho: BTreeMap<usize, Matrix> = h.iter().map(|&e| (e, g.matrix(e).clone())).collect();
        let induced = induce_action(&g, &h, &rho).unwrap();
        prop_assert_eq!(induced.order(), g.order());
        prop_assert_eq!(induced.blocks() * h.len(), g.order());
        prop_assert_eq!(induced.classes().len(), g.classes().len());
        let all: Vec<usize> = (0..g.order()).collect();
        let full: BTreeMap<usize, Matrix> = all.iter().map(|&e| (e, g.matrix(e).clone())).collect();
        let same = induce_action(&g, &all, &full).unwrap();
        prop_assert_eq!(same.blocks(), 1);
        let a = BasicComplex::build(&g, 2).unwrap().dims();
        let b = BasicComplex::build(&same, 2).unwrap().dims();
        prop_assert_eq!(a, b);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn basic_dims_survive_conjugation((_, g) in finite_group(2), p in invertible(2)) {
        let conj = g.conjugated_by(&p).unwrap();
        let a = BasicComplex::build(&g, 3).unwrap().dims();
        let b = BasicComplex::build(&conj, 3).unwrap().dims();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn basic_dims_survive_rebasing((_, g) in finite_group(2), pick in any::<prop::sample::Index>(), c in invertible(2)) {
        let model = LoopSpaceModel::new(&g).unwrap();
        let i = pick.index(model.pieces().len());
        let d = model.pieces()[i].dim();
        prop_assume!(d > 0);
        let change = c.submatrix(&(0..d).collect::<Vec<_>>(), &(0..d).collect::<Vec<_>>());
        prop_assume!(!change.determinant().unwrap().is_zero());
        let rebased = model.rebased(i, &change).unwrap();
        let a = BasicComplex::build(&g, 3).unwrap().dims();
        let b = BasicComplex::with_model(&g, rebased, 3, &[]).unwrap().dims();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn germ_counts_conjugacy_classes((gens, g) in finite_group(2)) {
        let complex = BasicComplex::build(&g, 2).unwrap();
        let classes = class_count(&gens);
        prop_assert_eq!(complex.germ_dim(), classes);
        let h = complex.cohomology(0).unwrap();
        prop_assert_eq!(h[0], classes);
        prop_assert!(h[1..].iter().all(|&x| x == 0));
        for w in 1..=2 {
            prop_assert!(complex.cohomology(w).unwrap().iter().all(|&x| x == 0));
        }
    }

    #[test]
    fn basic_closure_under_d((_, g) in finite_group(2)) {
        let complex = BasicComplex::build(&g, 3).unwrap();
        for w in 0..=3 {
            for k in 0..complex.max_degree() {
                let slot = Slot::new(w, k);
                let next = complex.basic_subspace(Slot::new(w, k + 1));
                for v in complex.basic_subspace(slot).basis().row_vecs() {
                    prop_assert!(next.contains(&complex.apply_d(slot, &v)));
                }
            }
        }
    }

    #[test]
    fn circle_scaling_keeps_dims(w in prop::collection::vec(prop_oneof![-3i64..=-1, 1i64..=3], 1..=2), c in 2i64..=3) {
        let base = CircleWeights::new(w.clone(), 0).unwrap();
        let scaled = CircleWeights::new(w.iter().map(|x| x * c).collect(), 0).unwrap();
        prop_assert_eq!(circle_basic_dims(&base, 3).unwrap(), circle_basic_dims(&scaled, 3).unwrap());
    }
}

#[test]
fn trivial_group_is_de_rham() {
    let complex = BasicComplex::build(&FiniteGroupAction::trivial(2), 4).unwrap();
    for w in 0..=4 {
        for k in 0..=2 {
            let slot = Slot::new(w, k);
            assert_eq!(complex.dim(slot), SlotBasis::new(2, slot).dim(), "{slot}");
        }
    }
}

#[test]
fn polynomial_de_rham_is_acyclic() {
    for n in 1..=3 {
        let d = GradedMap::exterior_derivative(n, 4).unwrap();
        let mut full = GradedSubspace::new();
        for w in 0..=4 {
            for k in 0..=n {
                let slot = Slot::new(w, k);
                full.insert(slot, Subspace::full(SlotBasis::new(n, slot).dim()));
            }
        }
        for w in 0..=4 {
            let h = cohomology_dims(&full, &d, w, n).unwrap();
            let expected: Vec<usize> = (0..=n).map(|k| usize::from(w == 0 && k == 0)).collect();
            assert_eq!(h, expected, "n = {n}, w = {w}");
        }
    }
}

#[test]
fn circle_relative_forms_kill_dtheta() {
    for (weights, z) in [(vec![1], 0), (vec![1, 2], 0), (vec![1], 1)] {
        let cw = CircleWeights::new(weights, z).unwrap();
        let n = cw.ambient_dim();
        let q = circle_relative_complex(&cw, 3).unwrap();
        for w in 1..=3 {
            for k in 0..n {
                let basis = SlotBasis::new(n, Slot::new(w - 1, k));
                for f in basis.forms() {
                    let form = Form::dx(n, THETA).wedge(&f);
                    if form.is_zero() {
                        continue;
                    }
                    assert!(q.class_of(&form).unwrap().iter().all(Scalar::is_zero));
                }
            }
        }
    }
}

#[test]
fn circle_generator_operators() {
    for (weights, z) in [(vec![1], 0), (vec![2, -1], 0), (vec![1], 1)] {
        let cw = CircleWeights::new(weights, z).unwrap();
        let xi = cw.generator();
        let m = xi.matrix();
        assert_eq!(m.transpose(), m.scale(&int(-1)));
        let n = cw.ambient_dim();
        for w in 0..=3 {
            for k in 0..=n {
                for f in SlotBasis::new(n, Slot::new(w, k)).forms() {
                    if k >= 2 {
                        assert!(f.contract(&xi).unwrap().contract(&xi).unwrap().is_zero());
                    }
                    assert_eq!(
                        f.ext_d().lie_derivative(&xi).unwrap(),
                        f.lie_derivative(&xi).unwrap().ext_d()
                    );
                }
            }
        }
    }
}

/// Invariant polynomial functions of weight `w` killed by every fiber partial,
/// counted by brute force over monomials.
fn invariant_fiber_constants(cw: &CircleWeights, w: usize) -> usize {
    let n = cw.ambient_dim();
    let xi = cw.generator();
    let mask = cw.fiber_mask();
    let basis = monomials(n, w);
    let rows: Vec<Vec<Scalar>> = basis
        .iter()
        .map(|e| {
            let f = Poly::monomial(e.clone(), Scalar::one());
            let lie = Form::function(f.clone()).lie_derivative(&xi).unwrap().coefficient(&[]);
            let mut out: Vec<Scalar> = monomials(n, w).iter().map(|t| lie.coefficient(t)).collect();
            for i in (0..n).filter(|&i| mask[i]) {
                let p = f.partial_derivative(i).unwrap();
                if w > 0 {
                    out.extend(monomials(n, w - 1).iter().map(|t| p.coefficient(t)));
                }
            }
            out
        })
        .collect();
    let cols = rows.first().map_or(0, Vec::len);
    if cols == 0 {
        return basis.len();
    }
    basis.len() - Matrix::from_rows(cols, rows).unwrap().rank()
}

#[test]
fn circle_h0_matches_enumeration() {
    for (weights, z) in [(vec![1], 0), (vec![1], 1), (vec![2], 1), (vec![1, 2], 0), (vec![1], 2)] {
        let cw = CircleWeights::new(weights.clone(), z).unwrap();
        let model = CircleModel::build(&cw, 4).unwrap();
        for w in 0..=4 {
            let h = model.cohomology(w).unwrap();
            assert_eq!(h[0], invariant_fiber_constants(&cw, w), "{weights:?} z={z} w={w}");
            assert_eq!(h[0], 1);
        }
    }
}
