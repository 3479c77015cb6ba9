//! Local model of the loop space of a linear circle action at the identity.
//!
//! Coordinates on `R^{1+2m+z}` are `(θ, x_1, y_1, …, x_m, y_m, u_1, …, u_z)`
//! where `θ` parametrizes the circle near `1`, the `(x_i, y_i)` planes
//! rotate with weight `w_i` and the `u_j` are fixed. Near `θ = 0` the loop
//! space is `(θ-axis × fixed directions) ∪ ({θ = 0} × R^{2m+z})`. Relative
//! forms are taken over the `θ` coordinate.

use rand::Rng;

use crate::algebra::{Matrix, Scalar};
use crate::brforms::random_combination;
use crate::error::{structural, Result};
use crate::exterior::{Form, LinearVectorField};
use crate::graded::{cohomology_dims, GradedMap, GradedSubspace, Slot, Subspace};
use crate::report::{Assertion, DimTable, Report};
use crate::variety::{QuotientComplex, SubspaceArrangement};

/// Index of the circle coordinate.
pub const THETA: usize = 0;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CircleWeights {
    weights: Vec<i64>,
    fixed_dims: usize,
}

impl CircleWeights {
    pub fn new(weights: Vec<i64>, fixed_dims: usize) -> Result<Self> {
        if weights.is_empty() {
            return Err(structural("at least one rotating plane is required"));
        }
        if weights.contains(&0) {
            return Err(structural(
                "weights must be nonzero; use fixed_dims for fixed directions",
            ));
        }
        Ok(Self { weights, fixed_dims })
    }

    pub fn weights(&self) -> &[i64] {
        &self.weights
    }

    pub fn pairs(&self) -> usize {
        self.weights.len()
    }

    pub fn fixed_dims(&self) -> usize {
        self.fixed_dims
    }

    /// Dimension of the space acted on, without `θ`.
    pub fn space_dim(&self) -> usize {
        2 * self.pairs() + self.fixed_dims
    }

    pub fn ambient_dim(&self) -> usize {
        1 + self.space_dim()
    }

    /// `ξ = Σ w_i (x_i ∂_{y_i} − y_i ∂_{x_i})`, zero on `θ` and the fixed
    /// directions.
    pub fn generator(&self) -> LinearVectorField {
        let n = self.ambient_dim();
        let mut a = Matrix::zeros(n, n);
        for (i, &w) in self.weights.iter().enumerate() {
            let (x, y) = (1 + 2 * i, 2 + 2 * i);
            a.set(y, x, Scalar::from_int(w));
            a.set(x, y, Scalar::from_int(-w));
        }
        LinearVectorField::new(a).expect("square generator")
    }

    /// Mask of the fiber coordinates (everything but `θ`).
    pub fn fiber_mask(&self) -> Vec<bool> {
        (0..self.ambient_dim()).map(|i| i != THETA).collect()
    }

    pub fn arrangement(&self) -> SubspaceArrangement {
        let n = self.ambient_dim();
        let unit = |i: usize| {
            let mut v = vec![Scalar::zero(); n];
            v[i] = Scalar::one();
            v
        };
        let fixed_start = 1 + 2 * self.pairs();
        let axis: Vec<_> = std::iter::once(THETA).chain(fixed_start..n).map(unit).collect();
        let slice: Vec<_> = (1..n).map(unit).collect();
        SubspaceArrangement::new(n, vec![axis, slice]).expect("coordinate subspaces")
    }
}

/// Relative forms `Ω^k / (𝓘Ω^k + d𝓘∧Ω^{k−1} + dθ∧Ω^{k−1})` of the loop model.
pub fn circle_relative_complex(cw: &CircleWeights, cutoff: usize) -> Result<QuotientComplex> {
    QuotientComplex::build(&cw.arrangement(), cutoff, &[THETA])
}

/// The relative complex together with its basic subcomplex and the fiberwise
/// homotopy operator, all in complement coordinates of the quotient.
#[derive(Clone, Debug)]
pub struct CircleModel {
    weights: CircleWeights,
    relative: QuotientComplex,
    basic: GradedSubspace,
    differential: GradedMap,
    homotopy: GradedMap,
    evaluation: GradedMap,
    fault: Option<Slot>,
}

impl CircleModel {
    pub fn build(cw: &CircleWeights, cutoff: usize) -> Result<Self> {
        let relative = circle_relative_complex(cw, cutoff)?;
        let n = cw.ambient_dim();
        let xi = cw.generator();
        let mask = cw.fiber_mask();
        let mut basic = GradedSubspace::new();
        let mut homotopy = GradedMap::new(-1);
        let mut evaluation = GradedMap::new(0);
        for w in 0..=cutoff {
            for k in 0..=n {
                let slot = Slot::new(w, k);
                let dim = relative.dim(slot);
                let mut ops = vec![relative.induced_operator(slot, slot, |f| f.lie_derivative(&xi))?];
                if k >= 1 {
                    let down = Slot::new(w, k - 1);
                    ops.push(relative.induced_operator(slot, down, |f| f.contract(&xi))?);
                    homotopy.insert(
                        slot,
                        relative.induced_operator(slot, down, |f| f.homotopy_along(&mask))?,
                    );
                } else {
                    evaluation.insert(
                        slot,
                        relative.induced_operator(slot, slot, |f| Ok(f.vanish_variables(&mask)))?,
                    );
                }
                let refs: Vec<&Matrix> = ops.iter().collect();
                let stacked = Matrix::vstack(dim, &refs)?;
                basic.insert(slot, Subspace::row_space(&stacked.kernel()));
            }
        }
        let model = Self {
            weights: cw.clone(),
            differential: relative.differential().clone(),
            relative,
            basic,
            homotopy,
            evaluation,
            fault: None,
        };
        for w in 0..=cutoff {
            for k in 0..n {
                let slot = Slot::new(w, k);
                let image = model
                    .basic_subspace(slot)
                    .image(model.differential.get(slot).expect("built"))?;
                if !model.basic_subspace(Slot::new(w, k + 1)).contains_subspace(&image) {
                    return Err(crate::Error::InternalConsistency {
                        slot,
                        detail: "differential of a basic form is not basic".into(),
                    });
                }
            }
        }
        Ok(model)
    }

    pub fn weights(&self) -> &CircleWeights {
        &self.weights
    }

    pub fn relative(&self) -> &QuotientComplex {
        &self.relative
    }

    pub fn cutoff(&self) -> usize {
        self.relative.cutoff()
    }

    pub fn max_degree(&self) -> usize {
        self.weights.ambient_dim()
    }

    pub fn basic_subspace(&self, slot: Slot) -> Subspace {
        self.basic
            .get(slot)
            .cloned()
            .unwrap_or_else(|| Subspace::zero(self.relative.dim(slot)))
    }

    pub fn dim(&self, slot: Slot) -> usize {
        self.basic.dim(slot)
    }

    pub fn dims(&self) -> DimTable {
        let mut t = DimTable::new();
        for w in 0..=self.cutoff() {
            for k in 0..=self.max_degree() {
                t.insert(Slot::new(w, k), self.dim(Slot::new(w, k)));
            }
        }
        t
    }

    pub fn relative_dims(&self) -> DimTable {
        self.relative.dims()
    }

    pub fn differential(&self) -> &GradedMap {
        &self.differential
    }

    pub fn cohomology(&self, w: usize) -> Result<Vec<usize>> {
        cohomology_dims(&self.basic, &self.differential, w, self.max_degree())
    }

    pub fn apply_d(&self, slot: Slot, v: &[Scalar]) -> Vec<Scalar> {
        match self.differential.get(slot) {
            Some(d) => d.apply(v),
            None => vec![Scalar::zero(); self.relative.dim(Slot::new(slot.weight, slot.degree + 1))],
        }
    }

    /// Fiberwise homotopy for `k ≥ 1`; at `k = 0` evaluation on the
    /// `θ`-axis (fiber coordinates set to zero).
    pub fn apply_homotopy(&self, slot: Slot, v: &[Scalar]) -> Vec<Scalar> {
        let map = if slot.degree == 0 {
            self.evaluation.get(slot)
        } else {
            self.homotopy.get(slot)
        };
        match map {
            Some(m) => m.apply(v),
            None => vec![Scalar::zero(); self.relative.dim(Slot::new(slot.weight, slot.degree.saturating_sub(1)))],
        }
    }

    pub fn homotopy_identity(&self, slot: Slot, v: &[Scalar]) -> bool {
        let up = Slot::new(slot.weight, slot.degree + 1);
        let kd = self.apply_homotopy(up, &self.apply_d(slot, v));
        if slot.degree == 0 {
            let ev = self.apply_homotopy(slot, v);
            let expected: Vec<Scalar> = v.iter().zip(&ev).map(|(a, b)| a - b).collect();
            return kd == expected;
        }
        let down = Slot::new(slot.weight, slot.degree - 1);
        let dk = self.apply_d(down, &self.apply_homotopy(slot, v));
        dk.iter().zip(&kd).map(|(a, b)| a + b).collect::<Vec<_>>() == v
    }

    pub fn random_basic<R: Rng + ?Sized>(&self, slot: Slot, rng: &mut R) -> Vec<Scalar> {
        random_combination(&self.basic_subspace(slot), rng)
    }

    /// Replaces the differential by zero at the lowest slot where it acts
    /// nontrivially on basic forms.
    pub fn with_fault(&self) -> Self {
        let mut out = self.clone();
        for w in 0..=self.cutoff() {
            for k in 0..self.max_degree() {
                let slot = Slot::new(w, k);
                let d = self.differential.get(slot).expect("built");
                let basis = self.basic_subspace(slot).basis().clone();
                if (0..basis.rows()).any(|i| d.apply(basis.row(i)).iter().any(|x| !x.is_zero())) {
                    let m = out.differential.get_mut(slot).expect("built");
                    *m = Matrix::zeros(m.rows(), m.cols());
                    out.fault = Some(slot);
                    return out;
                }
            }
        }
        out
    }

    pub fn fault(&self) -> Option<Slot> {
        self.fault
    }

    /// Class of a form on the ambient space, in complement coordinates.
    pub fn class_of(&self, form: &Form) -> Result<Vec<Scalar>> {
        self.relative.class_of(form)
    }
}

pub fn circle_basic_dims(cw: &CircleWeights, cutoff: usize) -> Result<DimTable> {
    Ok(CircleModel::build(cw, cutoff)?.dims())
}

/// `H⁰ = 1` at every weight (the line of `θ^w`), `H^k = 0` for `k ≥ 1`, and
/// the fiberwise homotopy identity on every basic basis form.
pub fn circle_check(model: &CircleModel) -> Result<Report> {
    let mut report = Report::new("circle");
    report.table("relative_dims", model.relative_dims().to_json());
    report.table("basic_dims", model.dims().to_json());
    let mut cohomology = DimTable::new();
    for w in 0..=model.cutoff() {
        let h = model.cohomology(w)?;
        for (k, &dim) in h.iter().enumerate() {
            let slot = Slot::new(w, k);
            cohomology.insert(slot, dim);
            let (name, expected) = if k == 0 { ("H0", 1) } else { ("Hk", 0) };
            report.assert(Assertion::new(name, Some(slot), expected, dim));
        }
        for k in 0..=model.max_degree() {
            let slot = Slot::new(w, k);
            let basis = model.basic_subspace(slot).basis().clone();
            let ok = (0..basis.rows()).all(|i| model.homotopy_identity(slot, basis.row(i)));
            report.assert(Assertion::check("homotopy identity", Some(slot), ok));
        }
    }
    report.table("cohomology", cohomology.to_json());
    Ok(report)
}

pub fn circle_cohomology(cw: &CircleWeights, cutoff: usize) -> Result<Report> {
    circle_check(&CircleModel::build(cw, cutoff)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Poly;
    use crate::graded::SlotBasis;

    fn rotation() -> CircleWeights {
        CircleWeights::new(vec![1], 0).unwrap()
    }

    #[test]
    fn generator_matrix() {
        let xi = CircleWeights::new(vec![2], 1).unwrap().generator();
        assert_eq!(
            xi.matrix(),
            &Matrix::from_ints(&[&[0, 0, 0, 0], &[0, 0, -2, 0], &[0, 2, 0, 0], &[0, 0, 0, 0]])
        );
        assert!(CircleWeights::new(vec![0], 0).is_err());
        assert!(CircleWeights::new(vec![], 1).is_err());
    }

    #[test]
    fn ideal_of_loop_model() {
        let q = circle_relative_complex(&rotation(), 2).unwrap();
        let polys = q.ideal().polys(2);
        assert_eq!(polys.len(), 2);
        let th = Poly::var(3, 0);
        assert!(q.ideal().contains(&(&th * &Poly::var(3, 1))).unwrap());
        assert!(q.ideal().contains(&(&th * &Poly::var(3, 2))).unwrap());
    }

    #[test]
    fn relative_dims_match_plane() {
        let q = circle_relative_complex(&rotation(), 6).unwrap();
        for w in 1..=6 {
            for k in 1..=2 {
                let s = Slot::new(w, k);
                assert_eq!(q.dim(s), SlotBasis::new(2, s).dim());
            }
        }
        // dθ ∧ anything is zero
        let dth = Form::dx(3, 0);
        for f in SlotBasis::new(3, Slot::new(2, 1)).forms() {
            assert!(q.class_of(&dth.wedge(&f)).unwrap().iter().all(Scalar::is_zero));
        }
    }

    #[test]
    fn basic_dims_of_rotation() {
        let m = CircleModel::build(&rotation(), 4).unwrap();
        assert_eq!(m.dim(Slot::new(2, 1)), 1);
        assert_eq!(m.dim(Slot::new(1, 1)), 0);
        for w in 0..=4 {
            assert_eq!(m.dim(Slot::new(w, 2)), 0);
        }
        // x dx + y dy spans the (2, 1) slot
        let r = Form::dx(3, 1)
            .mul_poly(&Poly::var(3, 1))
            .try_add(&Form::dx(3, 2).mul_poly(&Poly::var(3, 2)))
            .unwrap();
        let v = m.class_of(&r).unwrap();
        assert!(m.basic_subspace(Slot::new(2, 1)).contains(&v));
    }

    #[test]
    fn rotation_cohomology() {
        for cw in [
            rotation(),
            CircleWeights::new(vec![2], 0).unwrap(),
            CircleWeights::new(vec![1], 1).unwrap(),
        ] {
            let r = circle_cohomology(&cw, 5).unwrap();
            assert!(r.passed(), "{:?}", r.failures().collect::<Vec<_>>());
        }
    }

    #[test]
    fn fault_is_detected() {
        let m = CircleModel::build(&rotation(), 3).unwrap().with_fault();
        assert!(m.fault().is_some());
        assert!(!circle_check(&m).unwrap().passed());
    }

    /// Counts weight-`w` functions on the loop model, modulo the ideal, that
    /// are annihilated by `ξ` and constant along the fiber directions of each
    /// component, by restricting to the two components directly.
    fn closed_function_count(cw: &CircleWeights, w: usize) -> usize {
        let n = cw.ambient_dim();
        let basis = SlotBasis::new(n, Slot::new(w, 0));
        let xi = cw.generator();
        let arr = cw.arrangement();
        let mut rows: Vec<Vec<Scalar>> = Vec::new();
        let mut ideal_rows: Vec<Vec<Scalar>> = Vec::new();
        for comp in arr.components() {
            let a = comp.basis().transpose();
            let d = comp.dim();
            // the θ coordinate of the component, if it contains the θ-axis
            let theta_col = (0..d).find(|&j| !a.get(THETA, j).is_zero());
            let restrict = |p: &Poly| p.compose_linear(&a).unwrap();
            let coords = |p: &Poly, slot: Slot| SlotBasis::new(d, slot).coords(&Form::function(p.clone())).unwrap();
            let add = |target: &mut Vec<Vec<Scalar>>, f: &dyn Fn(&Poly) -> Vec<Scalar>| {
                let cols: Vec<Vec<Scalar>> = basis.forms().iter().map(|e| f(&e.coefficient(&[]))).collect();
                for i in 0..cols.first().map_or(0, Vec::len) {
                    target.push(cols.iter().map(|c| c[i].clone()).collect());
                }
            };
            add(&mut ideal_rows, &|p| coords(&restrict(p), Slot::new(w, 0)));
            for j in (0..d).filter(|&j| Some(j) != theta_col) {
                if w >= 1 {
                    add(&mut rows, &|p| {
                        coords(&restrict(p).partial_derivative(j).unwrap(), Slot::new(w - 1, 0))
                    });
                }
            }
            add(&mut rows, &|p| {
                let moved = Form::function(p.clone())
                    .ext_d()
                    .contract(&xi)
                    .unwrap()
                    .coefficient(&[]);
                coords(&restrict(&moved), Slot::new(w, 0))
            });
        }
        let closed = basis.dim() - Matrix::from_rows(basis.dim(), rows).unwrap().rank();
        let ideal = basis.dim() - Matrix::from_rows(basis.dim(), ideal_rows).unwrap().rank();
        closed - ideal
    }

    #[test]
    fn fixed_direction_cohomology_matches_restriction_count() {
        for cw in [
            rotation(),
            CircleWeights::new(vec![1], 1).unwrap(),
            CircleWeights::new(vec![1, 2], 0).unwrap(),
        ] {
            let m = CircleModel::build(&cw, 4).unwrap();
            for w in 0..=4 {
                assert_eq!(
                    m.cohomology(w).unwrap()[0],
                    closed_function_count(&cw, w),
                    "{cw:?} w={w}"
                );
            }
        }
    }
}
