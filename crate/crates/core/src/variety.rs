//! Vanishing ideals of subspace arrangements and their quotient complexes
//! of differential forms.
//!
//! For an arrangement `X ⊂ R^n` with vanishing ideal `I`, the forms on `X`
//! are `Ω^k(R^n) / (I Ω^k + dI ∧ Ω^{k-1})`, optionally further divided by
//! `dx_c ∧ Ω^{k-1}` for base coordinates `c` of a projection (relative
//! forms). Everything is computed one slot `(w, k)` at a time.

use std::collections::BTreeMap;

use crate::algebra::{Matrix, Poly, Scalar};
use crate::error::{structural, Error, Result};
use crate::exterior::Form;
use crate::graded::{cohomology_dims, index_sets, GradedMap, GradedSubspace, QuotientSpace, Slot, SlotBasis, Subspace};
use crate::report::DimTable;

/// A finite union of linear subspaces of `R^n` through the origin.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubspaceArrangement {
    nvars: usize,
    components: Vec<Subspace>,
}

impl SubspaceArrangement {
    /// Builds an arrangement from spanning vectors of each component.
    /// Vectors of a component must be linearly independent; repeated
    /// components are dropped.
    pub fn new(nvars: usize, components: Vec<Vec<Vec<Scalar>>>) -> Result<Self> {
        let mut subs = Vec::new();
        for vectors in components {
            let count = vectors.len();
            let sub = Subspace::span(nvars, vectors)?;
            if sub.dim() != count {
                return Err(structural("arrangement component has dependent basis vectors"));
            }
            subs.push(sub);
        }
        Self::from_subspaces(nvars, subs)
    }

    pub fn from_subspaces(nvars: usize, components: Vec<Subspace>) -> Result<Self> {
        if components.is_empty() {
            return Err(structural("an arrangement needs at least one component"));
        }
        let mut unique: Vec<Subspace> = Vec::new();
        for c in components {
            if c.ambient() != nvars {
                return Err(structural("arrangement component lives in the wrong space"));
            }
            if !unique.contains(&c) {
                unique.push(c);
            }
        }
        Ok(Self {
            nvars,
            components: unique,
        })
    }

    pub fn full(nvars: usize) -> Self {
        Self {
            nvars,
            components: vec![Subspace::full(nvars)],
        }
    }

    pub fn point(nvars: usize) -> Self {
        Self {
            nvars,
            components: vec![Subspace::zero(nvars)],
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn components(&self) -> &[Subspace] {
        &self.components
    }

    /// Image `A · X` under an invertible linear map.
    pub fn transformed(&self, a: &Matrix) -> Result<Self> {
        if !a.is_square() || a.rows() != self.nvars || a.determinant()?.is_zero() {
            return Err(structural(
                "arrangement transform must be invertible of the ambient size",
            ));
        }
        let comps = self.components.iter().map(|c| c.image(a)).collect::<Result<Vec<_>>>()?;
        Self::from_subspaces(self.nvars, comps)
    }
}

/// Degree-by-degree pieces of the vanishing ideal of an arrangement, in the
/// monomial coordinates of the `(w, 0)` slots.
#[derive(Clone, Debug)]
pub struct IdealSlices {
    nvars: usize,
    cutoff: usize,
    slices: GradedSubspace,
}

impl IdealSlices {
    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn slice(&self, w: usize) -> Subspace {
        self.slices
            .get(Slot::new(w, 0))
            .cloned()
            .unwrap_or_else(|| Subspace::zero(SlotBasis::new(self.nvars, Slot::new(w, 0)).dim()))
    }

    pub fn dim(&self, w: usize) -> usize {
        self.slices.dim(Slot::new(w, 0))
    }

    pub fn graded(&self) -> &GradedSubspace {
        &self.slices
    }

    /// RREF basis of the degree-`w` slice as polynomials.
    pub fn polys(&self, w: usize) -> Vec<Poly> {
        let basis = SlotBasis::new(self.nvars, Slot::new(w, 0));
        let slice = self.slice(w);
        (0..slice.dim())
            .map(|i| basis.form(slice.basis().row(i)).coefficient(&[]))
            .collect()
    }

    pub fn contains(&self, p: &Poly) -> Result<bool> {
        let mut ok = true;
        for (w, piece) in Form::function(p.clone()).weight_components() {
            if w > self.cutoff {
                return Err(structural("polynomial exceeds the ideal cutoff"));
            }
            let basis = SlotBasis::new(self.nvars, Slot::new(w, 0));
            ok &= self.slice(w).contains(&basis.coords(&piece)?);
        }
        Ok(ok)
    }
}

/// Restriction of degree-`w` polynomials on `R^n` to a component, as a
/// matrix from monomial coordinates on `R^n` to those on the component.
fn restriction_matrix(nvars: usize, component: &Subspace, w: usize) -> Result<Matrix> {
    let d = component.dim();
    // columns of `a` are the component's basis vectors
    let a = component.basis().transpose();
    let src = SlotBasis::new(nvars, Slot::new(w, 0));
    let tgt = SlotBasis::new(d, Slot::new(w, 0));
    let mut m = Matrix::zeros(tgt.dim(), src.dim());
    for (j, (_, e)) in src.elements().iter().enumerate() {
        let restricted = Poly::monomial(e.clone(), Scalar::one()).compose_linear(&a)?;
        let v = tgt.coords(&Form::function(restricted))?;
        for (i, x) in v.into_iter().enumerate() {
            if !x.is_zero() {
                m.set(i, j, x);
            }
        }
    }
    Ok(m)
}

/// The degree-`w` pieces, `w ≤ cutoff`, of the ideal of polynomials
/// vanishing on every component: the kernel of the joint restriction map.
pub fn vanishing_ideal_slices(arr: &SubspaceArrangement, cutoff: usize) -> Result<IdealSlices> {
    let n = arr.nvars;
    let mut slices = GradedSubspace::new();
    for w in 0..=cutoff {
        let cols = SlotBasis::new(n, Slot::new(w, 0)).dim();
        let blocks = arr
            .components
            .iter()
            .map(|c| restriction_matrix(n, c, w))
            .collect::<Result<Vec<_>>>()?;
        let refs: Vec<&Matrix> = blocks.iter().collect();
        let stacked = Matrix::vstack(cols, &refs)?;
        slices.insert(Slot::new(w, 0), Subspace::row_space(&stacked.kernel()));
    }
    Ok(IdealSlices {
        nvars: n,
        cutoff,
        slices,
    })
}

/// The quotient complex `Ω^•(R^n) / (I Ω^• + dI ∧ Ω^{•-1} [+ dx_c ∧ Ω^{•-1}])`
/// up to a weight cutoff, with its induced differential on the canonical
/// complements.
#[derive(Clone, Debug)]
pub struct QuotientComplex {
    nvars: usize,
    cutoff: usize,
    relative: Vec<usize>,
    ideal: IdealSlices,
    bases: BTreeMap<Slot, SlotBasis>,
    quotients: BTreeMap<Slot, QuotientSpace>,
    ambient_d: GradedMap,
    differential: GradedMap,
}

/// Builds the Grauert–Grothendieck quotient complex of an arrangement.
pub fn gg_complex(arr: &SubspaceArrangement, cutoff: usize) -> Result<QuotientComplex> {
    QuotientComplex::build(arr, cutoff, &[])
}

impl QuotientComplex {
    /// Builds the complex; `relative` lists base coordinates whose
    /// differentials are additionally set to zero.
    pub fn build(arr: &SubspaceArrangement, cutoff: usize, relative: &[usize]) -> Result<Self> {
        let n = arr.nvars;
        if relative.iter().any(|&c| c >= n) {
            return Err(structural("relative coordinate out of range"));
        }
        let ideal = vanishing_ideal_slices(arr, cutoff)?;
        let ideal_polys: Vec<Vec<Poly>> = (0..=cutoff).map(|w| ideal.polys(w)).collect();
        let ideal_diffs: Vec<Vec<Form>> = ideal_polys
            .iter()
            .map(|ps| ps.iter().map(|p| Form::function(p.clone()).ext_d()).collect())
            .collect();

        let mut bases = BTreeMap::new();
        for w in 0..=cutoff {
            for k in 0..=n + 1 {
                let slot = Slot::new(w, k);
                bases.insert(slot, SlotBasis::new(n, slot));
            }
        }

        let mut denominators: BTreeMap<Slot, Subspace> = BTreeMap::new();
        for w in 0..=cutoff {
            for k in 0..=n {
                let slot = Slot::new(w, k);
                let basis = &bases[&slot];
                let mut gens: Vec<Form> = Vec::new();
                if w >= k {
                    for p in &ideal_polys[w - k] {
                        for idx in index_sets(n, k) {
                            gens.push(Form::basis(n, idx, p.clone()));
                        }
                    }
                }
                if k >= 1 {
                    for j in 1..=w {
                        if w - j < k - 1 {
                            break;
                        }
                        let lower = &bases[&Slot::new(w - j, k - 1)];
                        for dp in &ideal_diffs[j] {
                            for f in lower.forms() {
                                gens.push(dp.wedge(&f));
                            }
                        }
                    }
                    if w >= 1 {
                        let lower = &bases[&Slot::new(w - 1, k - 1)];
                        for &c in relative {
                            let dc = Form::dx(n, c);
                            for f in lower.forms() {
                                gens.push(dc.wedge(&f));
                            }
                        }
                    }
                }
                let vectors = gens.iter().map(|g| basis.coords(g)).collect::<Result<Vec<_>>>()?;
                denominators.insert(slot, Subspace::span(basis.dim(), vectors)?);
            }
            let top = Slot::new(w, n + 1);
            denominators.insert(top, Subspace::zero(0));
        }

        let mut ambient_d = GradedMap::new(1);
        for w in 0..=cutoff {
            for k in 0..=n {
                let src = &bases[&Slot::new(w, k)];
                let tgt = &bases[&Slot::new(w, k + 1)];
                ambient_d.insert(src.slot(), src.operator_matrix(tgt, |f| Ok(f.ext_d()))?);
            }
        }

        // d must map each denominator slice into the next one
        for w in 0..=cutoff {
            for k in 0..=n {
                let slot = Slot::new(w, k);
                let image = denominators[&slot].image(ambient_d.get(slot).expect("built"))?;
                if !denominators[&Slot::new(w, k + 1)].contains_subspace(&image) {
                    return Err(Error::InternalConsistency {
                        slot,
                        detail: "differential does not preserve the ideal of relations".into(),
                    });
                }
            }
        }

        let quotients: BTreeMap<Slot, QuotientSpace> = denominators
            .into_iter()
            .map(|(s, d)| (s, QuotientSpace::new(d)))
            .collect();
        let mut differential = GradedMap::new(1);
        for w in 0..=cutoff {
            for k in 0..=n {
                let slot = Slot::new(w, k);
                let q = &quotients[&slot];
                let next = &quotients[&Slot::new(w, k + 1)];
                differential.insert(slot, q.induced(next, ambient_d.get(slot).expect("built")));
            }
        }

        Ok(Self {
            nvars: n,
            cutoff,
            relative: relative.to_vec(),
            ideal,
            bases,
            quotients,
            ambient_d,
            differential,
        })
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn relative_coordinates(&self) -> &[usize] {
        &self.relative
    }

    pub fn ideal(&self) -> &IdealSlices {
        &self.ideal
    }

    pub fn slot_basis(&self, slot: Slot) -> &SlotBasis {
        &self.bases[&slot]
    }

    pub fn quotient(&self, slot: Slot) -> &QuotientSpace {
        &self.quotients[&slot]
    }

    pub fn denominators(&self) -> GradedSubspace {
        let mut g = GradedSubspace::new();
        for (s, q) in &self.quotients {
            g.insert(*s, q.denominator().clone());
        }
        g
    }

    pub fn dim(&self, slot: Slot) -> usize {
        self.quotients.get(&slot).map_or(0, QuotientSpace::dim)
    }

    pub fn dims(&self) -> DimTable {
        let mut t = DimTable::new();
        for w in 0..=self.cutoff {
            for k in 0..=self.nvars {
                t.insert(Slot::new(w, k), self.dim(Slot::new(w, k)));
            }
        }
        t
    }

    /// Differential of the ambient de Rham complex in slot coordinates.
    pub fn ambient_differential(&self) -> &GradedMap {
        &self.ambient_d
    }

    /// Induced differential on complement coordinates.
    pub fn differential(&self) -> &GradedMap {
        &self.differential
    }

    /// Class of a weight-homogeneous form, in complement coordinates.
    pub fn class_of(&self, form: &Form) -> Result<Vec<Scalar>> {
        let w = form.weight().unwrap_or(0);
        let slot = Slot::new(w, form.degree());
        let basis = self
            .bases
            .get(&slot)
            .ok_or_else(|| structural(format!("slot {slot} is beyond the cutoff")))?;
        Ok(self.quotients[&slot].project(&basis.coords(form)?))
    }

    /// Canonical representative of a class.
    pub fn representative(&self, slot: Slot, coords: &[Scalar]) -> Form {
        self.bases[&slot].form(&self.quotients[&slot].lift(coords))
    }

    /// Matrix, on complement coordinates, of the map induced by a linear
    /// operator on forms from `source` to `target`. Fails with an internal
    /// consistency error if the operator does not preserve the relations.
    pub fn induced_operator(&self, source: Slot, target: Slot, op: impl Fn(&Form) -> Result<Form>) -> Result<Matrix> {
        let src = &self.bases[&source];
        let tgt = self
            .bases
            .get(&target)
            .ok_or_else(|| structural(format!("slot {target} is beyond the cutoff")))?;
        let full = src.operator_matrix(tgt, &op)?;
        let denom = self.quotients[&source].denominator();
        let image = denom.image(&full)?;
        if !self.quotients[&target].denominator().contains_subspace(&image) {
            return Err(Error::InternalConsistency {
                slot: source,
                detail: "operator does not descend to the quotient".into(),
            });
        }
        Ok(self.quotients[&source].induced(&self.quotients[&target], &full))
    }

    /// Cohomology of the whole quotient complex at weight `w`.
    pub fn cohomology(&self, w: usize) -> Result<Vec<usize>> {
        let mut all = GradedSubspace::new();
        for k in 0..=self.nvars {
            let s = Slot::new(w, k);
            all.insert(s, Subspace::full(self.dim(s)));
        }
        cohomology_dims(&all, &self.differential, w, self.nvars)
    }
}

/// Map between quotient complexes induced by pulling forms back along a
/// linear embedding.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChartTransfer {
    cutoff: usize,
    maps: GradedMap,
}

impl ChartTransfer {
    pub fn maps(&self) -> &GradedMap {
        &self.maps
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    /// True when every slot matrix is square and invertible.
    pub fn is_isomorphism(&self) -> bool {
        self.maps.maps().all(|(_, m)| m.is_square() && m.rank() == m.rows())
    }

    /// `η ∘ d_src = d_dst ∘ η` on every slot within the cutoff.
    pub fn commutes_with_differentials(&self, src: &QuotientComplex, dst: &QuotientComplex) -> Result<bool> {
        for (slot, eta) in self.maps.maps() {
            let next = Slot::new(slot.weight, slot.degree + 1);
            let Some(eta_next) = self.maps.get(next) else {
                continue;
            };
            let d_src = src.differential.get(*slot).expect("slot within cutoff");
            let d_dst = dst.differential.get(*slot).expect("slot within cutoff");
            if eta_next.mul(d_src)? != d_dst.mul(eta)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Induced map `src → dst` of the pullback along `h: R^m → R^n`
/// (`h` is `n × m`), where `src` lives on `R^n` and `dst` on `R^m`.
///
/// Requires `h` injective and `h^* I_src ⊆ I_dst`; the induced map must be
/// an isomorphism on every slot. Any failure is a chart mismatch.
pub fn chart_transfer(src: &QuotientComplex, dst: &QuotientComplex, h: &Matrix) -> Result<ChartTransfer> {
    let (n, m) = (src.nvars, dst.nvars);
    if h.rows() != n || h.cols() != m {
        return Err(Error::ChartMismatch(format!(
            "embedding is {}x{}, expected {n}x{m}",
            h.rows(),
            h.cols()
        )));
    }
    if h.rank() != m {
        return Err(Error::ChartMismatch("embedding is not injective".into()));
    }
    let cutoff = src.cutoff.min(dst.cutoff);
    for w in 0..=cutoff {
        for p in src.ideal.polys(w) {
            if !dst.ideal.contains(&p.compose_linear(h)?)? {
                return Err(Error::ChartMismatch(format!(
                    "pullback of the source ideal leaves the target ideal in degree {w}"
                )));
            }
        }
    }
    let mut maps = GradedMap::new(0);
    for w in 0..=cutoff {
        for k in 0..=n.max(m) {
            let slot = Slot::new(w, k);
            let src_dim = if k <= n { src.dim(slot) } else { 0 };
            let dst_dim = if k <= m { dst.dim(slot) } else { 0 };
            let mut eta = Matrix::zeros(dst_dim, src_dim);
            if src_dim > 0 && dst_dim > 0 {
                let q_src = &src.quotients[&slot];
                let q_dst = &dst.quotients[&slot];
                let dst_basis = &dst.bases[&slot];
                for j in 0..src_dim {
                    let mut unit = vec![Scalar::zero(); src_dim];
                    unit[j] = Scalar::one();
                    let rep = src.bases[&slot].form(&q_src.lift(&unit));
                    let pulled = rep.pullback(h)?;
                    let col = q_dst.project(&dst_basis.coords(&pulled)?);
                    for (i, x) in col.into_iter().enumerate() {
                        eta.set(i, j, x);
                    }
                }
            }
            if src_dim != dst_dim || eta.rank() != src_dim {
                return Err(Error::ChartMismatch(format!(
                    "induced map is not an isomorphism at slot {slot} ({src_dim} -> {dst_dim})"
                )));
            }
            maps.insert(slot, eta);
        }
    }
    Ok(ChartTransfer { cutoff, maps })
}

/// For charts `a`, `b`, `c` with embeddings `h_ab: R^b → R^a`,
/// `h_bc: R^c → R^b` and `h_ac = h_ab h_bc`, checks that the transfer of the
/// composite equals the composite of the transfers:
/// `η_ac = η_bc ∘ η_ab` slot by slot.
pub fn cocycle_check(composite: &ChartTransfer, first: &ChartTransfer, second: &ChartTransfer) -> Result<bool> {
    for (slot, direct) in composite.maps.maps() {
        let (Some(a), Some(b)) = (first.maps.get(*slot), second.maps.get(*slot)) else {
            // the middle chart has no forms of this degree
            if direct.is_zero() {
                continue;
            }
            return Ok(false);
        };
        if a.rows() != b.cols() || b.rows() != direct.rows() || a.cols() != direct.cols() {
            return Err(structural(format!("transfer shapes do not compose at slot {slot}")));
        }
        if &b.mul(a)? != direct {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<Scalar> {
        v.iter().map(|&x| Scalar::from_int(x)).collect()
    }

    /// θ-axis ∪ (x, y)-plane in R³(θ, x, y).
    pub(crate) fn loop_model() -> SubspaceArrangement {
        SubspaceArrangement::new(
            3,
            vec![vec![ints(&[1, 0, 0])], vec![ints(&[0, 1, 0]), ints(&[0, 0, 1])]],
        )
        .unwrap()
    }

    #[test]
    fn loop_model_ideal_is_theta_x_theta_y() {
        let ideal = vanishing_ideal_slices(&loop_model(), 3).unwrap();
        assert_eq!(ideal.dim(0), 0);
        assert_eq!(ideal.dim(1), 0);
        let th = Poly::var(3, 0);
        let expected = vec![&th * &Poly::var(3, 2), &th * &Poly::var(3, 1)];
        let got = ideal.polys(2);
        assert_eq!(got.len(), 2);
        for p in &expected {
            assert!(ideal.contains(p).unwrap());
        }
    }

    #[test]
    fn full_space_has_zero_ideal() {
        let ideal = vanishing_ideal_slices(&SubspaceArrangement::full(3), 4).unwrap();
        assert!((0..=4).all(|w| ideal.dim(w) == 0));
    }

    #[test]
    fn two_axes_ideal_is_xy() {
        let arr = SubspaceArrangement::new(2, vec![vec![ints(&[1, 0])], vec![ints(&[0, 1])]]).unwrap();
        let ideal = vanishing_ideal_slices(&arr, 2).unwrap();
        assert_eq!(ideal.polys(2), vec![&Poly::var(2, 0) * &Poly::var(2, 1)]);
    }

    #[test]
    fn codimension_matches_linear_ideal() {
        let line = SubspaceArrangement::new(3, vec![vec![ints(&[1, 2, 3])]]).unwrap();
        let ideal = vanishing_ideal_slices(&line, 1).unwrap();
        assert_eq!(ideal.dim(1), 2);
    }

    #[test]
    fn dependent_component_rejected() {
        let err = SubspaceArrangement::new(2, vec![vec![ints(&[1, 1]), ints(&[2, 2])]]);
        assert!(err.is_err());
        let dup = SubspaceArrangement::new(2, vec![vec![ints(&[1, 1])], vec![ints(&[2, 2])]]).unwrap();
        assert_eq!(dup.components().len(), 1);
    }

    #[test]
    fn point_and_full_space_quotients() {
        let q = gg_complex(&SubspaceArrangement::point(2), 3).unwrap();
        for w in 0..=3 {
            for k in 0..=2 {
                let expected = usize::from(w == 0 && k == 0);
                assert_eq!(q.dim(Slot::new(w, k)), expected, "slot ({w},{k})");
            }
        }
        let full = gg_complex(&SubspaceArrangement::full(2), 3).unwrap();
        for w in 0..=3 {
            for k in 0..=2 {
                let s = Slot::new(w, k);
                assert_eq!(full.dim(s), SlotBasis::new(2, s).dim());
            }
        }
    }

    #[test]
    fn relative_loop_model_dims() {
        let q = QuotientComplex::build(&loop_model(), 5, &[0]).unwrap();
        for w in 1..=5 {
            assert_eq!(q.dim(Slot::new(w, 1)), 2 * w, "k=1, w={w}");
            assert_eq!(q.dim(Slot::new(w, 2)), w.saturating_sub(1), "k=2, w={w}");
            assert_eq!(q.dim(Slot::new(w, 0)), 1 + (w + 1), "k=0, w={w}");
            assert_eq!(q.dim(Slot::new(w, 3)), 0);
        }
        assert_eq!(q.dim(Slot::new(0, 0)), 1);
        // dθ is zero in every slot
        let dtheta = Form::dx(3, 0);
        assert!(q.class_of(&dtheta).unwrap().iter().all(Scalar::is_zero));
    }

    #[test]
    fn absolute_loop_model_keeps_dtheta() {
        let q = gg_complex(&loop_model(), 3).unwrap();
        // dθ survives: the θ-axis component carries it
        assert!(!q.class_of(&Form::dx(3, 0)).unwrap().iter().all(Scalar::is_zero));
        assert!(q.dim(Slot::new(2, 1)) > 4);
    }

    #[test]
    fn chart_transfer_point_into_line() {
        let src = gg_complex(&SubspaceArrangement::point(2), 3).unwrap();
        let dst = gg_complex(&SubspaceArrangement::point(1), 3).unwrap();
        let h = Matrix::from_ints(&[&[1], &[0]]);
        let t = chart_transfer(&src, &dst, &h).unwrap();
        assert!(t.is_isomorphism());
        assert_eq!(t.maps().get(Slot::new(0, 0)).unwrap(), &Matrix::identity(1));
    }

    #[test]
    fn chart_transfer_rejects_bad_embeddings() {
        let src = gg_complex(&SubspaceArrangement::full(2), 2).unwrap();
        let dst = gg_complex(&SubspaceArrangement::full(1), 2).unwrap();
        // not an isomorphism: R² does not embed in R¹ this way
        let h = Matrix::from_ints(&[&[1], &[0]]);
        assert!(matches!(chart_transfer(&src, &dst, &h), Err(Error::ChartMismatch(_))));
        let zero = Matrix::from_ints(&[&[0], &[0]]);
        assert!(matches!(
            chart_transfer(&src, &dst, &zero),
            Err(Error::ChartMismatch(_))
        ));
        // ideal incompatibility: y-axis pulled back along the x-axis inclusion
        let yaxis = SubspaceArrangement::new(2, vec![vec![ints(&[0, 1])]]).unwrap();
        let src = gg_complex(&yaxis, 2).unwrap();
        let dst = gg_complex(&SubspaceArrangement::full(1), 2).unwrap();
        assert!(matches!(chart_transfer(&src, &dst, &h), Err(Error::ChartMismatch(_))));
    }

    #[test]
    fn axis_in_plane_matches_line() {
        let xaxis = SubspaceArrangement::new(2, vec![vec![ints(&[1, 0])]]).unwrap();
        let src = gg_complex(&xaxis, 4).unwrap();
        let dst = gg_complex(&SubspaceArrangement::full(1), 4).unwrap();
        let t = chart_transfer(&src, &dst, &Matrix::from_ints(&[&[1], &[0]])).unwrap();
        assert!(t.is_isomorphism());
        assert!(t.commutes_with_differentials(&src, &dst).unwrap());
        for w in 0..=4 {
            assert_eq!(src.dim(Slot::new(w, 0)), 1);
            assert_eq!(src.dim(Slot::new(w, 1)), usize::from(w >= 1));
            assert_eq!(src.dim(Slot::new(w, 2)), 0);
        }
    }

    #[test]
    fn embedding_independence() {
        let xaxis = SubspaceArrangement::new(2, vec![vec![ints(&[1, 0])]]).unwrap();
        let src = gg_complex(&xaxis, 4).unwrap();
        let line = gg_complex(&SubspaceArrangement::full(1), 4).unwrap();
        let h = Matrix::from_ints(&[&[1], &[0]]);
        let g = Matrix::from_ints(&[&[2], &[0]]);
        let eta_h = chart_transfer(&src, &line, &h).unwrap();
        let eta_g = chart_transfer(&src, &line, &g).unwrap();
        assert_ne!(eta_h, eta_g);
        // g = h ∘ φ with φ(t) = 2t
        let phi = chart_transfer(&line, &line, &Matrix::from_ints(&[&[2]])).unwrap();
        assert!(cocycle_check(&eta_g, &eta_h, &phi).unwrap());

        // embeddings agreeing on the arrangement induce the same map
        let plane_axis = gg_complex(&xaxis, 4).unwrap();
        let id = chart_transfer(&src, &plane_axis, &Matrix::identity(2)).unwrap();
        let bent = chart_transfer(&src, &plane_axis, &Matrix::from_ints(&[&[1, 0], &[0, 3]])).unwrap();
        assert_eq!(id, bent);
    }

    #[test]
    fn cocycle_on_three_charts() {
        let a = gg_complex(&SubspaceArrangement::new(3, vec![vec![ints(&[1, 0, 0])]]).unwrap(), 4).unwrap();
        let b = gg_complex(&SubspaceArrangement::new(2, vec![vec![ints(&[1, 1])]]).unwrap(), 4).unwrap();
        let c = gg_complex(&SubspaceArrangement::new(2, vec![vec![ints(&[1, 0])]]).unwrap(), 4).unwrap();
        let h_ab = Matrix::from_ints(&[&[1, 0], &[-1, 1], &[0, 0]]);
        let h_bc = Matrix::from_ints(&[&[1, 0], &[1, 1]]);
        let h_ac = h_ab.mul(&h_bc).unwrap();
        let ab = chart_transfer(&a, &b, &h_ab).unwrap();
        let bc = chart_transfer(&b, &c, &h_bc).unwrap();
        let ac = chart_transfer(&a, &c, &h_ac).unwrap();
        assert!(cocycle_check(&ac, &ab, &bc).unwrap());
        let wrong = chart_transfer(&a, &c, &h_ac.scale(&Scalar::from_int(2))).unwrap();
        assert!(!cocycle_check(&wrong, &ab, &bc).unwrap());
    }

    #[test]
    fn points_in_increasing_dimensions() {
        let p: Vec<_> = (1..=3)
            .map(|n| gg_complex(&SubspaceArrangement::point(n), 3).unwrap())
            .collect();
        let h21 = Matrix::from_ints(&[&[1], &[0]]);
        let h32 = Matrix::from_ints(&[&[1, 0], &[0, 1], &[0, 0]]);
        let t32 = chart_transfer(&p[2], &p[1], &h32).unwrap();
        let t21 = chart_transfer(&p[1], &p[0], &h21).unwrap();
        let t31 = chart_transfer(&p[2], &p[0], &h32.mul(&h21).unwrap()).unwrap();
        assert!(cocycle_check(&t31, &t32, &t21).unwrap());
    }
}
