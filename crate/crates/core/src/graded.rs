//! Exact graded linear algebra over the monomial-form coordinate spaces.
//!
//! The space of polynomial `k`-forms of weight `w` on `R^n` has the
//! canonical basis `x^α dx_I` with `|I| = k`, `|α| = w − k`, ordered
//! lexicographically in `(I, α)`. Subspaces are stored as reduced row
//! echelon bases in those coordinates, so equal subspaces have equal
//! representations.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::Serialize;

use crate::algebra::{Exponents, Matrix, Poly, Scalar};
use crate::error::{structural, Error, Result};
use crate::exterior::Form;

/// A bidegree: weight `w` (coefficient degree plus form degree) and form
/// degree `k`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Slot {
    pub weight: usize,
    pub degree: usize,
}

impl Slot {
    pub fn new(weight: usize, degree: usize) -> Self {
        Self { weight, degree }
    }
}

impl fmt::Display for Slot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(w={}, k={})", self.weight, self.degree)
    }
}

/// All exponent vectors of total degree `d` in `n` variables, sorted.
pub fn monomials(n: usize, d: usize) -> Vec<Exponents> {
    fn rec(n: usize, d: usize, prefix: &mut Exponents, out: &mut Vec<Exponents>) {
        if prefix.len() + 1 == n {
            prefix.push(d as u32);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for a in 0..=d {
            prefix.push(a as u32);
            rec(n, d - a, prefix, out);
            prefix.pop();
        }
    }
    if n == 0 {
        return if d == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    rec(n, d, &mut Vec::with_capacity(n), &mut out);
    out.sort();
    out
}

/// All strictly increasing index sets of size `k` in `0..n`, sorted.
pub fn index_sets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == k {
            out.push(prefix.clone());
            return;
        }
        for i in start..n {
            prefix.push(i);
            rec(i + 1, n, k, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if k <= n {
        rec(0, n, k, &mut Vec::new(), &mut out);
    }
    out
}

/// Ordered monomial-form basis of the weight-`w`, degree-`k` forms on `R^n`.
#[derive(Clone, Debug)]
pub struct SlotBasis {
    nvars: usize,
    slot: Slot,
    elements: Vec<(Vec<usize>, Exponents)>,
    index: HashMap<(Vec<usize>, Exponents), usize>,
}

impl SlotBasis {
    pub fn new(nvars: usize, slot: Slot) -> Self {
        let mut elements = Vec::new();
        if slot.degree <= slot.weight && slot.degree <= nvars {
            let monos = monomials(nvars, slot.weight - slot.degree);
            for idx in index_sets(nvars, slot.degree) {
                for m in &monos {
                    elements.push((idx.clone(), m.clone()));
                }
            }
        }
        let index = elements.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
        Self {
            nvars,
            slot,
            elements,
            index,
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn slot(&self) -> Slot {
        self.slot
    }

    pub fn dim(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[(Vec<usize>, Exponents)] {
        &self.elements
    }

    /// The basis element `x^α dx_I` at position `i`.
    pub fn element_form(&self, i: usize) -> Form {
        let (idx, e) = &self.elements[i];
        Form::basis(self.nvars, idx.clone(), Poly::monomial(e.clone(), Scalar::one()))
    }

    pub fn forms(&self) -> Vec<Form> {
        (0..self.dim()).map(|i| self.element_form(i)).collect()
    }

    /// Coordinates of a form lying in this slot.
    pub fn coords(&self, form: &Form) -> Result<Vec<Scalar>> {
        if form.nvars() != self.nvars || (form.degree() != self.slot.degree && !form.is_zero()) {
            return Err(structural(format!("form does not live in slot {}", self.slot)));
        }
        let mut v = vec![Scalar::zero(); self.dim()];
        for (idx, p) in form.terms() {
            for (e, c) in p.terms() {
                let pos = self
                    .index
                    .get(&(idx.clone(), e.clone()))
                    .ok_or_else(|| structural(format!("form has a term outside slot {}", self.slot)))?;
                v[*pos] = c.clone();
            }
        }
        Ok(v)
    }

    pub fn form(&self, coords: &[Scalar]) -> Form {
        assert_eq!(coords.len(), self.dim(), "coordinate vector has the wrong length");
        let terms = coords.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| {
            let (idx, e) = &self.elements[i];
            (idx.clone(), Poly::monomial(e.clone(), c.clone()))
        });
        Form::from_terms(self.nvars, self.slot.degree, terms).expect("valid slot form")
    }

    /// Matrix of a linear operator from this slot to `target`: column `j` is
    /// the image of basis element `j`.
    pub fn operator_matrix(&self, target: &SlotBasis, op: impl Fn(&Form) -> Result<Form>) -> Result<Matrix> {
        let mut m = Matrix::zeros(target.dim(), self.dim());
        for j in 0..self.dim() {
            let img = op(&self.element_form(j))?;
            let v = target.coords(&img)?;
            for (i, x) in v.into_iter().enumerate() {
                if !x.is_zero() {
                    m.set(i, j, x);
                }
            }
        }
        Ok(m)
    }
}

/// A subspace of `Scalar^ambient`, stored as an RREF basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    ambient: usize,
    basis: Matrix,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Self {
            ambient,
            basis: Matrix::zeros(0, ambient),
            pivots: Vec::new(),
        }
    }

    pub fn full(ambient: usize) -> Self {
        Self {
            ambient,
            basis: Matrix::identity(ambient),
            pivots: (0..ambient).collect(),
        }
    }

    /// Span of the rows of `m`.
    pub fn row_space(m: &Matrix) -> Self {
        let r = m.rref();
        Self {
            ambient: m.cols(),
            basis: r.matrix,
            pivots: r.pivots,
        }
    }

    pub fn span(ambient: usize, vectors: Vec<Vec<Scalar>>) -> Result<Self> {
        Ok(Self::row_space(&Matrix::from_rows(ambient, vectors)?))
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    /// RREF basis, one vector per row.
    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Residual of `v` after eliminating the pivot coordinates; zero iff
    /// `v` lies in the subspace. The residual vanishes on pivot columns.
    pub fn reduce(&self, v: &[Scalar]) -> Vec<Scalar> {
        let mut r = v.to_vec();
        for (i, &p) in self.pivots.iter().enumerate() {
            if r[p].is_zero() {
                continue;
            }
            let f = r[p].clone();
            for (x, b) in r.iter_mut().zip(self.basis.row(i)) {
                if !b.is_zero() {
                    *x = &*x - &(&f * b);
                }
            }
        }
        r
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        self.reduce(v).iter().all(Scalar::is_zero)
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        (0..other.dim()).all(|i| self.contains(other.basis.row(i)))
    }

    /// Coordinates of `v` (assumed to lie in the subspace) in the RREF basis.
    pub fn coordinates(&self, v: &[Scalar]) -> Vec<Scalar> {
        self.pivots.iter().map(|&p| v[p].clone()).collect()
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        if self.ambient != other.ambient {
            return Err(structural("sum of subspaces of different ambient spaces"));
        }
        Ok(Subspace::row_space(&Matrix::vstack(
            self.ambient,
            &[&self.basis, &other.basis],
        )?))
    }

    /// Intersection by the kernel method: pairs `(λ, μ)` with
    /// `λ·A = μ·B` give the common vectors `λ·A`.
    pub fn intersection(&self, other: &Subspace) -> Result<Subspace> {
        if self.ambient != other.ambient {
            return Err(structural("intersection of subspaces of different ambient spaces"));
        }
        if self.dim() == 0 || other.dim() == 0 {
            return Ok(Subspace::zero(self.ambient));
        }
        let stacked = Matrix::vstack(self.ambient, &[&self.basis, &other.basis.scale(&Scalar::from_int(-1))])?;
        let relations = stacked.transpose().kernel();
        let a = self.dim();
        let lambdas = Matrix::from_fn(relations.rows(), a, |i, j| relations.get(i, j).clone());
        Ok(Subspace::row_space(&lambdas.mul(&self.basis)?))
    }

    /// Non-pivot coordinates; their unit vectors span a complement.
    pub fn complement_indices(&self) -> Vec<usize> {
        let mut is_pivot = vec![false; self.ambient];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        (0..self.ambient).filter(|&j| !is_pivot[j]).collect()
    }

    /// Image of the subspace under `m` (`m.cols() == ambient`).
    pub fn image(&self, m: &Matrix) -> Result<Subspace> {
        if m.cols() != self.ambient {
            return Err(structural("operator does not act on this subspace"));
        }
        Ok(Subspace::row_space(&self.basis.mul(&m.transpose())?))
    }
}

/// A quotient `Scalar^n / denom`, represented on the deterministic
/// complement spanned by the non-pivot unit vectors of `denom`.
#[derive(Clone, Debug)]
pub struct QuotientSpace {
    denom: Subspace,
    complement: Vec<usize>,
}

impl QuotientSpace {
    pub fn new(denom: Subspace) -> Self {
        let complement = denom.complement_indices();
        Self { denom, complement }
    }

    pub fn ambient(&self) -> usize {
        self.denom.ambient()
    }

    pub fn dim(&self) -> usize {
        self.complement.len()
    }

    pub fn denominator(&self) -> &Subspace {
        &self.denom
    }

    pub fn complement(&self) -> &[usize] {
        &self.complement
    }

    /// Class of `v` in complement coordinates.
    pub fn project(&self, v: &[Scalar]) -> Vec<Scalar> {
        let r = self.denom.reduce(v);
        self.complement.iter().map(|&j| r[j].clone()).collect()
    }

    /// Canonical representative of a class given in complement coordinates.
    pub fn lift(&self, coords: &[Scalar]) -> Vec<Scalar> {
        let mut v = vec![Scalar::zero(); self.ambient()];
        for (c, &j) in coords.iter().zip(&self.complement) {
            v[j] = c.clone();
        }
        v
    }

    /// Induced map `target ∘ op ∘ lift` in complement coordinates, where
    /// `op` acts on ambient coordinates.
    pub fn induced(&self, target: &QuotientSpace, op: &Matrix) -> Matrix {
        let mut m = Matrix::zeros(target.dim(), self.dim());
        for (j, &col) in self.complement.iter().enumerate() {
            let img = target.project(&op.column(col));
            for (i, x) in img.into_iter().enumerate() {
                if !x.is_zero() {
                    m.set(i, j, x);
                }
            }
        }
        m
    }
}

/// Subspaces indexed by slot; an absent slot is the zero subspace.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GradedSubspace {
    slots: BTreeMap<Slot, Subspace>,
}

impl GradedSubspace {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, slot: Slot, sub: Subspace) {
        self.slots.insert(slot, sub);
    }

    pub fn get(&self, slot: Slot) -> Option<&Subspace> {
        self.slots.get(&slot)
    }

    pub fn dim(&self, slot: Slot) -> usize {
        self.slots.get(&slot).map_or(0, Subspace::dim)
    }

    pub fn slots(&self) -> impl Iterator<Item = (&Slot, &Subspace)> {
        self.slots.iter()
    }

    /// Slotwise span of arbitrary forms on `R^n`, after splitting each into
    /// weight-homogeneous pieces.
    pub fn span_from_forms(nvars: usize, forms: &[Form]) -> Result<Self> {
        let mut vectors: BTreeMap<Slot, Vec<Vec<Scalar>>> = BTreeMap::new();
        let mut bases: BTreeMap<Slot, SlotBasis> = BTreeMap::new();
        for f in forms {
            if f.nvars() != nvars {
                return Err(structural("form on the wrong ambient space"));
            }
            for (w, piece) in f.weight_components() {
                let slot = Slot::new(w, f.degree());
                let basis = bases.entry(slot).or_insert_with(|| SlotBasis::new(nvars, slot));
                vectors.entry(slot).or_default().push(basis.coords(&piece)?);
            }
        }
        let mut out = GradedSubspace::new();
        for (slot, vs) in vectors {
            let n = bases[&slot].dim();
            out.insert(slot, Subspace::span(n, vs)?);
        }
        Ok(out)
    }

    fn combine(
        &self,
        other: &GradedSubspace,
        f: impl Fn(&Subspace, &Subspace) -> Result<Subspace>,
    ) -> Result<GradedSubspace> {
        let mut out = GradedSubspace::new();
        let keys: std::collections::BTreeSet<Slot> = self.slots.keys().chain(other.slots.keys()).copied().collect();
        for slot in keys {
            let (a, b) = match (self.slots.get(&slot), other.slots.get(&slot)) {
                (Some(a), Some(b)) => (a.clone(), b.clone()),
                (Some(a), None) => (a.clone(), Subspace::zero(a.ambient())),
                (None, Some(b)) => (Subspace::zero(b.ambient()), b.clone()),
                (None, None) => unreachable!(),
            };
            out.insert(slot, f(&a, &b)?);
        }
        Ok(out)
    }

    pub fn sum(&self, other: &GradedSubspace) -> Result<GradedSubspace> {
        self.combine(other, Subspace::sum)
    }

    pub fn intersection(&self, other: &GradedSubspace) -> Result<GradedSubspace> {
        self.combine(other, Subspace::intersection)
    }
}

/// Dimension of `slot_dim`-dimensional slot modulo the denominator's slice.
pub fn quotient_dim(slot_dim: usize, denom: &GradedSubspace, slot: Slot) -> usize {
    slot_dim - denom.dim(slot)
}

/// Per-slot matrices of a graded operator. The matrix stored at a source
/// slot maps its coordinates to those of the slot shifted by
/// `degree_shift` in form degree (weight is preserved).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedMap {
    degree_shift: isize,
    maps: BTreeMap<Slot, Matrix>,
}

impl GradedMap {
    pub fn new(degree_shift: isize) -> Self {
        Self {
            degree_shift,
            maps: BTreeMap::new(),
        }
    }

    pub fn degree_shift(&self) -> isize {
        self.degree_shift
    }

    pub fn insert(&mut self, source: Slot, m: Matrix) {
        self.maps.insert(source, m);
    }

    pub fn get(&self, source: Slot) -> Option<&Matrix> {
        self.maps.get(&source)
    }

    pub fn get_mut(&mut self, source: Slot) -> Option<&mut Matrix> {
        self.maps.get_mut(&source)
    }

    pub fn target(&self, source: Slot) -> Option<Slot> {
        let k = source.degree as isize + self.degree_shift;
        (k >= 0).then(|| Slot::new(source.weight, k as usize))
    }

    pub fn maps(&self) -> impl Iterator<Item = (&Slot, &Matrix)> {
        self.maps.iter()
    }

    /// The exterior differential on all forms of weight ≤ `max_weight` on
    /// `R^n`.
    pub fn exterior_derivative(nvars: usize, max_weight: usize) -> Result<GradedMap> {
        let mut d = GradedMap::new(1);
        for w in 0..=max_weight {
            for k in 0..=nvars {
                let src = SlotBasis::new(nvars, Slot::new(w, k));
                let tgt = SlotBasis::new(nvars, Slot::new(w, k + 1));
                d.insert(src.slot(), src.operator_matrix(&tgt, |f| Ok(f.ext_d()))?);
            }
        }
        Ok(d)
    }
}

/// Cohomology dimensions of the subcomplex `sub` of `(C, d)` at weight `w`,
/// for form degrees `0..=max_degree`.
///
/// Fails with [`Error::ComplexNotClosed`] if `d` maps a slot of `sub`
/// outside the next slot of `sub`.
pub fn cohomology_dims(sub: &GradedSubspace, d: &GradedMap, weight: usize, max_degree: usize) -> Result<Vec<usize>> {
    let mut image_ranks = Vec::with_capacity(max_degree + 1);
    let mut kernel_dims = Vec::with_capacity(max_degree + 1);
    for k in 0..=max_degree {
        let slot = Slot::new(weight, k);
        let next = Slot::new(weight, k + 1);
        let Some(space) = sub.get(slot).filter(|s| s.dim() > 0) else {
            image_ranks.push(0);
            kernel_dims.push(0);
            continue;
        };
        let image = match d.get(slot) {
            Some(m) if m.rows() > 0 => space.image(m)?,
            _ => {
                image_ranks.push(0);
                kernel_dims.push(space.dim());
                continue;
            }
        };
        let closed = match sub.get(next) {
            Some(target) => target.contains_subspace(&image),
            None => image.dim() == 0,
        };
        if !closed {
            return Err(Error::ComplexNotClosed { slot });
        }
        image_ranks.push(image.dim());
        kernel_dims.push(space.dim() - image.dim());
    }
    Ok((0..=max_degree)
        .map(|k| kernel_dims[k] - if k == 0 { 0 } else { image_ranks[k - 1] })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn full_complex(n: usize, max_w: usize) -> GradedSubspace {
        let mut g = GradedSubspace::new();
        for w in 0..=max_w {
            for k in 0..=n {
                let b = SlotBasis::new(n, Slot::new(w, k));
                g.insert(b.slot(), Subspace::full(b.dim()));
            }
        }
        g
    }

    #[test]
    fn slot_dimension_formula() {
        // C(n,k) · C(w-k+n-1, n-1)
        assert_eq!(SlotBasis::new(3, Slot::new(2, 1)).dim(), 3 * 3);
        assert_eq!(SlotBasis::new(2, Slot::new(4, 2)).dim(), 3);
        assert_eq!(SlotBasis::new(0, Slot::new(0, 0)).dim(), 1);
        assert_eq!(SlotBasis::new(0, Slot::new(1, 0)).dim(), 0);
        assert_eq!(SlotBasis::new(2, Slot::new(1, 2)).dim(), 0);
    }

    #[test]
    fn span_examples() {
        let g = GradedSubspace::span_from_forms(2, &[Form::dx(2, 0), Form::dx(2, 1)]).unwrap();
        assert_eq!(g.dim(Slot::new(1, 1)), 2);
        let xdx = Form::dx(2, 0).mul_poly(&Poly::var(2, 0));
        let g = GradedSubspace::span_from_forms(2, &[xdx.clone(), xdx.scale(&Scalar::from_int(2))]).unwrap();
        assert_eq!(g.dim(Slot::new(2, 1)), 1);
        let g = GradedSubspace::span_from_forms(2, &[]).unwrap();
        assert_eq!(g.slots().count(), 0);
    }

    #[test]
    fn sum_and_intersection_examples() {
        let a = GradedSubspace::span_from_forms(2, &[Form::dx(2, 0)]).unwrap();
        let b = GradedSubspace::span_from_forms(2, &[Form::dx(2, 1)]).unwrap();
        let s = a.sum(&b).unwrap();
        assert_eq!(s.dim(Slot::new(1, 1)), 2);
        let diag = GradedSubspace::span_from_forms(2, &[Form::dx(2, 0).try_add(&Form::dx(2, 1)).unwrap()]).unwrap();
        assert_eq!(s.intersection(&diag).unwrap(), diag);

        // degree-2 ideal slices of the two axes in R²: {y², xy} ∩ {x², xy} = {xy}
        let x = Poly::var(2, 0);
        let y = Poly::var(2, 1);
        let f = |p: Poly| Form::function(p);
        let ix = GradedSubspace::span_from_forms(2, &[f(&y * &y), f(&x * &y)]).unwrap();
        let iy = GradedSubspace::span_from_forms(2, &[f(&x * &x), f(&x * &y)]).unwrap();
        let expected = GradedSubspace::span_from_forms(2, &[f(&x * &y)]).unwrap();
        assert_eq!(ix.intersection(&iy).unwrap(), expected);
    }

    #[test]
    fn quotient_dim_examples() {
        let slot = Slot::new(2, 1);
        let n = SlotBasis::new(2, slot).dim();
        assert_eq!(quotient_dim(n, &GradedSubspace::new(), slot), n);
        let mut all = GradedSubspace::new();
        all.insert(slot, Subspace::full(n));
        assert_eq!(quotient_dim(n, &all, slot), 0);
    }

    #[test]
    fn quotient_of_loop_model_one_forms() {
        // 1-forms of weight 2 on R³(θ, x, y) modulo dθ-terms, θdx, θdy,
        // x dθ + θ dx, y dθ + θ dy leave {x dx, x dy, y dx, y dy}.
        let n = 3;
        let v = |i| Poly::var(n, i);
        let mut gens = Vec::new();
        for i in 0..n {
            gens.push(Form::dx(n, 0).mul_poly(&v(i)));
        }
        gens.push(Form::dx(n, 1).mul_poly(&v(0)));
        gens.push(Form::dx(n, 2).mul_poly(&v(0)));
        gens.push(Form::function(&v(0) * &v(1)).ext_d());
        gens.push(Form::function(&v(0) * &v(2)).ext_d());
        let denom = GradedSubspace::span_from_forms(n, &gens).unwrap();
        let slot = Slot::new(2, 1);
        assert_eq!(quotient_dim(SlotBasis::new(n, slot).dim(), &denom, slot), 4);
    }

    #[test]
    fn cohomology_of_full_de_rham() {
        let d1 = GradedMap::exterior_derivative(1, 3).unwrap();
        let g1 = full_complex(1, 3);
        assert_eq!(cohomology_dims(&g1, &d1, 0, 1).unwrap(), vec![1, 0]);
        assert_eq!(cohomology_dims(&g1, &d1, 2, 1).unwrap(), vec![0, 0]);
        let d2 = GradedMap::exterior_derivative(2, 3).unwrap();
        let g2 = full_complex(2, 3);
        assert_eq!(cohomology_dims(&g2, &d2, 3, 2).unwrap(), vec![0, 0, 0]);
        assert_eq!(
            cohomology_dims(&GradedSubspace::new(), &d2, 3, 2).unwrap(),
            vec![0, 0, 0]
        );
    }

    #[test]
    fn non_closed_subcomplex_is_reported() {
        let d = GradedMap::exterior_derivative(1, 2).unwrap();
        let mut g = GradedSubspace::new();
        let b = SlotBasis::new(1, Slot::new(2, 0));
        g.insert(b.slot(), Subspace::full(b.dim()));
        let err = cohomology_dims(&g, &d, 2, 1).unwrap_err();
        assert_eq!(err, Error::ComplexNotClosed { slot: Slot::new(2, 0) });
    }

    #[test]
    fn quotient_space_projection() {
        let denom = Subspace::span(3, vec![vec![1.into(), 1.into(), 0.into()]]).unwrap();
        let q = QuotientSpace::new(denom);
        assert_eq!(q.dim(), 2);
        assert_eq!(q.complement(), &[1, 2]);
        // e0 ≡ -e1
        assert_eq!(
            q.project(&[1.into(), 0.into(), 0.into()]),
            vec![Scalar::from_int(-1), Scalar::zero()]
        );
    }
}
