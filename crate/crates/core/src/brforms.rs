//! Basic relative forms on the loop space of a finite group action.
//!
//! A relative form on the loop space is a family `(ω_p)` with one form per
//! loop piece `p = (g, c)`, written in the piece's own coordinates. Basic
//! families are those invariant under the conjugation action (and, when
//! Lie generators are supplied, horizontal and infinitesimally invariant).

use std::collections::BTreeMap;

use rand::{Rng, RngExt};

use crate::action::{induce_action, transport_map, FiniteGroupAction, LoopSpaceModel};
use crate::algebra::{Matrix, Scalar};
use crate::error::{structural, Error, Result};
use crate::exterior::{Form, LinearVectorField};
use crate::graded::{cohomology_dims, GradedMap, GradedSubspace, Slot, SlotBasis, Subspace};
use crate::report::{Assertion, DimTable, Report};

/// Coordinates of the family space at one slot: the concatenation of the
/// slot bases of all pieces.
#[derive(Clone, Debug)]
struct Layout {
    bases: Vec<SlotBasis>,
    offsets: Vec<usize>,
    dim: usize,
}

impl Layout {
    fn new(dims: &[usize], slot: Slot) -> Self {
        let bases: Vec<SlotBasis> = dims.iter().map(|&d| SlotBasis::new(d, slot)).collect();
        let mut offsets = Vec::with_capacity(bases.len());
        let mut dim = 0;
        for b in &bases {
            offsets.push(dim);
            dim += b.dim();
        }
        Self { bases, offsets, dim }
    }

    fn range(&self, piece: usize) -> std::ops::Range<usize> {
        self.offsets[piece]..self.offsets[piece] + self.bases[piece].dim()
    }
}

/// Places a per-piece block matrix into a family-sized matrix.
fn block_diagonal(src: &Layout, tgt: &Layout, blocks: &[Matrix]) -> Matrix {
    let mut m = Matrix::zeros(tgt.dim, src.dim);
    for (p, b) in blocks.iter().enumerate() {
        let (r0, c0) = (tgt.offsets[p], src.offsets[p]);
        for i in 0..b.rows() {
            for j in 0..b.cols() {
                let x = b.get(i, j);
                if !x.is_zero() {
                    m.set(r0 + i, c0 + j, x.clone());
                }
            }
        }
    }
    m
}

/// The complex of basic relative forms on the loop space, up to a weight
/// cutoff.
#[derive(Clone, Debug)]
pub struct BasicComplex {
    action: FiniteGroupAction,
    model: LoopSpaceModel,
    cutoff: usize,
    max_degree: usize,
    lie: Vec<LinearVectorField>,
    layouts: BTreeMap<Slot, Layout>,
    basic: GradedSubspace,
    family_d: GradedMap,
    homotopy: GradedMap,
    fault: Option<Slot>,
}

impl BasicComplex {
    pub fn build(action: &FiniteGroupAction, cutoff: usize) -> Result<Self> {
        Self::with_model(action, LoopSpaceModel::new(action)?, cutoff, &[])
    }

    /// Also imposes `ι_ξ ω_p = 0` and `𝓛_ξ ω_p = 0` for every Lie generator
    /// `ξ` tangent to a piece.
    pub fn build_horizontal(action: &FiniteGroupAction, cutoff: usize, lie: &[LinearVectorField]) -> Result<Self> {
        Self::with_model(action, LoopSpaceModel::new(action)?, cutoff, lie)
    }

    pub fn with_model(
        action: &FiniteGroupAction,
        model: LoopSpaceModel,
        cutoff: usize,
        lie: &[LinearVectorField],
    ) -> Result<Self> {
        if !lie.is_empty() && action.blocks() != 1 {
            return Err(structural("Lie generators need a single-block action"));
        }
        if lie.iter().any(|xi| xi.dim() != action.block_dim()) {
            return Err(structural("Lie generator has the wrong dimension"));
        }
        let dims: Vec<usize> = model.pieces().iter().map(|p| p.dim()).collect();
        let max_degree = dims.iter().copied().max().unwrap_or(0);
        let mut layouts = BTreeMap::new();
        for w in 0..=cutoff {
            for k in 0..=max_degree + 1 {
                let slot = Slot::new(w, k);
                layouts.insert(slot, Layout::new(&dims, slot));
            }
        }

        let hs = generating_set(action);
        // restrictions of the Lie generators to the pieces they are tangent to
        let restricted: Vec<Vec<LinearVectorField>> = model
            .pieces()
            .iter()
            .map(|p| {
                lie.iter()
                    .filter_map(|xi| p.restrict(xi.matrix()))
                    .map(LinearVectorField::new)
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<_>>()?;

        let mut basic = GradedSubspace::new();
        for w in 0..=cutoff {
            for k in 0..=max_degree {
                let slot = Slot::new(w, k);
                let layout = &layouts[&slot];
                let mut rows: Vec<Vec<Scalar>> = Vec::new();
                for (pi, piece) in model.pieces().iter().enumerate() {
                    for &h in &hs {
                        let q = model
                            .piece_index(action.conjugate(h, piece.element), action.block_map(h, piece.block).0)
                            .expect("conjugate piece");
                        let t = transport_map(action, &model, pi, h);
                        // t*(ω_q) − ω_p = 0
                        let pull = layout.bases[q].operator_matrix(&layout.bases[pi], |f| f.pullback(&t))?;
                        for i in 0..pull.rows() {
                            let mut row = vec![Scalar::zero(); layout.dim];
                            for (j, x) in pull.row(i).iter().enumerate() {
                                row[layout.offsets[q] + j] = x.clone();
                            }
                            let own = layout.offsets[pi] + i;
                            row[own] = &row[own] - &Scalar::one();
                            if row.iter().any(|x| !x.is_zero()) {
                                rows.push(row);
                            }
                        }
                    }
                    for xi in &restricted[pi] {
                        let src = &layout.bases[pi];
                        let mut ops: Vec<Matrix> = vec![src.operator_matrix(src, |f| f.lie_derivative(xi))?];
                        if k >= 1 {
                            let lower = SlotBasis::new(src.nvars(), Slot::new(w, k - 1));
                            ops.push(src.operator_matrix(&lower, |f| f.contract(xi))?);
                        }
                        for op in ops {
                            for i in 0..op.rows() {
                                let mut row = vec![Scalar::zero(); layout.dim];
                                for (j, x) in op.row(i).iter().enumerate() {
                                    row[layout.offsets[pi] + j] = x.clone();
                                }
                                rows.push(row);
                            }
                        }
                    }
                }
                let constraints = Matrix::from_rows(layout.dim, rows)?;
                basic.insert(slot, Subspace::row_space(&constraints.kernel()));
            }
        }

        let mut family_d = GradedMap::new(1);
        let mut homotopy = GradedMap::new(-1);
        for w in 0..=cutoff {
            for k in 0..=max_degree {
                let slot = Slot::new(w, k);
                let src = &layouts[&slot];
                let up = &layouts[&Slot::new(w, k + 1)];
                let blocks = (0..dims.len())
                    .map(|p| src.bases[p].operator_matrix(&up.bases[p], |f| Ok(f.ext_d())))
                    .collect::<Result<Vec<_>>>()?;
                family_d.insert(slot, block_diagonal(src, up, &blocks));
                if k >= 1 {
                    let down = &layouts[&Slot::new(w, k - 1)];
                    let blocks = (0..dims.len())
                        .map(|p| src.bases[p].operator_matrix(&down.bases[p], Form::poincare_homotopy))
                        .collect::<Result<Vec<_>>>()?;
                    homotopy.insert(slot, block_diagonal(src, down, &blocks));
                }
            }
        }

        let complex = Self {
            action: action.clone(),
            model,
            cutoff,
            max_degree,
            lie: lie.to_vec(),
            layouts,
            basic,
            family_d,
            homotopy,
            fault: None,
        };
        complex.check_closed()?;
        Ok(complex)
    }

    fn check_closed(&self) -> Result<()> {
        for w in 0..=self.cutoff {
            for k in 0..self.max_degree {
                let slot = Slot::new(w, k);
                let image = self
                    .basic_subspace(slot)
                    .image(self.family_d.get(slot).expect("built"))?;
                if !self.basic_subspace(Slot::new(w, k + 1)).contains_subspace(&image) {
                    return Err(Error::InternalConsistency {
                        slot,
                        detail: "differential of a basic family is not basic".into(),
                    });
                }
            }
        }
        Ok(())
    }

    /// Replaces the differential by zero at the lowest slot where it acts
    /// nontrivially on basic families.
    pub fn with_fault(&self) -> Self {
        let mut out = self.clone();
        for w in 0..=self.cutoff {
            for k in 0..self.max_degree {
                let slot = Slot::new(w, k);
                let d = self.family_d.get(slot).expect("built");
                let basis = self.basic_subspace(slot).basis().clone();
                let acts = (0..basis.rows()).any(|i| d.apply(basis.row(i)).iter().any(|x| !x.is_zero()));
                if acts {
                    let m = out.family_d.get_mut(slot).expect("built");
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

    pub fn action(&self) -> &FiniteGroupAction {
        &self.action
    }

    pub fn model(&self) -> &LoopSpaceModel {
        &self.model
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn lie_generators(&self) -> &[LinearVectorField] {
        &self.lie
    }

    /// Dimension of the whole family space at a slot.
    pub fn family_dim(&self, slot: Slot) -> usize {
        self.layouts.get(&slot).map_or(0, |l| l.dim)
    }

    pub fn basic_subspace(&self, slot: Slot) -> Subspace {
        self.basic
            .get(slot)
            .cloned()
            .unwrap_or_else(|| Subspace::zero(self.family_dim(slot)))
    }

    pub fn dim(&self, slot: Slot) -> usize {
        self.basic.dim(slot)
    }

    pub fn dims(&self) -> DimTable {
        let mut t = DimTable::new();
        for w in 0..=self.cutoff {
            for k in 0..=self.max_degree {
                t.insert(Slot::new(w, k), self.dim(Slot::new(w, k)));
            }
        }
        t
    }

    /// Number of conjugation orbits of loop pieces: the dimension of the
    /// germ of locally constant invariant functions on the loop space.
    pub fn germ_dim(&self) -> usize {
        self.model.orbits().len()
    }

    pub fn family_differential(&self) -> &GradedMap {
        &self.family_d
    }

    /// Splits a family vector into per-piece forms.
    pub fn family_forms(&self, slot: Slot, v: &[Scalar]) -> Vec<Form> {
        let layout = &self.layouts[&slot];
        (0..layout.bases.len())
            .map(|p| layout.bases[p].form(&v[layout.range(p)]))
            .collect()
    }

    /// Concatenates per-piece forms into a family vector.
    pub fn family_vector(&self, slot: Slot, forms: &[Form]) -> Result<Vec<Scalar>> {
        let layout = self
            .layouts
            .get(&slot)
            .ok_or_else(|| structural(format!("slot {slot} is beyond the cutoff")))?;
        if forms.len() != layout.bases.len() {
            return Err(structural("one form per loop piece is required"));
        }
        let mut v = Vec::with_capacity(layout.dim);
        for (b, f) in layout.bases.iter().zip(forms) {
            v.extend(b.coords(f)?);
        }
        Ok(v)
    }

    /// `d` applied to a family vector.
    pub fn apply_d(&self, slot: Slot, v: &[Scalar]) -> Vec<Scalar> {
        match self.family_d.get(slot) {
            Some(d) => d.apply(v),
            None => vec![Scalar::zero(); self.family_dim(Slot::new(slot.weight, slot.degree + 1))],
        }
    }

    /// The homotopy operator: the Euler homotopy on each piece for `k ≥ 1`;
    /// evaluation at the origin for `k = 0`.
    pub fn apply_homotopy(&self, slot: Slot, v: &[Scalar]) -> Vec<Scalar> {
        if slot.degree == 0 {
            return if slot.weight == 0 {
                v.to_vec()
            } else {
                vec![Scalar::zero(); v.len()]
            };
        }
        match self.homotopy.get(slot) {
            Some(k) => k.apply(v),
            None => vec![Scalar::zero(); self.family_dim(Slot::new(slot.weight, slot.degree - 1))],
        }
    }

    /// `dK + Kd = id` for `k ≥ 1` and `Kd = id − eval₀` for `k = 0`.
    pub fn homotopy_identity(&self, slot: Slot, v: &[Scalar]) -> bool {
        let up = Slot::new(slot.weight, slot.degree + 1);
        let kd = self.apply_homotopy(up, &self.apply_d(slot, v));
        let lhs: Vec<Scalar> = if slot.degree == 0 {
            kd
        } else {
            let down = Slot::new(slot.weight, slot.degree - 1);
            let dk = self.apply_d(down, &self.apply_homotopy(slot, v));
            dk.iter().zip(&kd).map(|(a, b)| a + b).collect()
        };
        let expected: Vec<Scalar> = if slot.degree == 0 {
            let ev = self.apply_homotopy(slot, v);
            v.iter().zip(&ev).map(|(a, b)| a - b).collect()
        } else {
            v.to_vec()
        };
        lhs == expected
    }

    /// Cohomology at weight `w`, degrees `0..=max_degree`.
    pub fn cohomology(&self, w: usize) -> Result<Vec<usize>> {
        cohomology_dims(&self.basic, &self.family_d, w, self.max_degree)
    }

    /// Class functions, one per orbit, as constant families at `(0, 0)`.
    pub fn augmentation(&self) -> Matrix {
        let slot = Slot::new(0, 0);
        let layout = &self.layouts[&slot];
        let mut m = Matrix::zeros(layout.dim, self.germ_dim());
        for (j, orbit) in self.model.orbits().iter().enumerate() {
            for &p in orbit {
                m.set(layout.offsets[p], j, Scalar::one());
            }
        }
        m
    }

    /// A random basic family at a slot: a small-integer combination of the
    /// basis.
    pub fn random_basic<R: Rng + ?Sized>(&self, slot: Slot, rng: &mut R) -> Vec<Scalar> {
        random_combination(&self.basic_subspace(slot), rng)
    }
}

pub(crate) fn random_combination<R: Rng + ?Sized>(sub: &Subspace, rng: &mut R) -> Vec<Scalar> {
    let mut v = vec![Scalar::zero(); sub.ambient()];
    for i in 0..sub.dim() {
        let c = Scalar::from_int(rng.random_range(-5..=5));
        if c.is_zero() {
            continue;
        }
        for (x, b) in v.iter_mut().zip(sub.basis().row(i)) {
            *x = &*x + &(&c * b);
        }
    }
    v
}

/// A small set of elements generating the group, chosen greedily in index
/// order.
fn generating_set(action: &FiniteGroupAction) -> Vec<usize> {
    let mut gens = Vec::new();
    let mut covered = vec![0usize];
    for g in 1..action.order() {
        if !covered.contains(&g) {
            gens.push(g);
            covered = action.subgroup(&gens).expect("indices in range");
        }
    }
    gens
}

/// Checks that the basic complex resolves the germ of invariant locally
/// constant functions: `H⁰` is the class functions at weight 0, all other
/// cohomology vanishes, and the homotopy identity holds on every basis
/// family.
pub fn resolution_check(complex: &BasicComplex) -> Result<Report> {
    let mut report = Report::new("resolution");
    report.table("basic_dims", complex.dims().to_json());
    let mut cohomology = DimTable::new();
    for w in 0..=complex.cutoff {
        let h = complex.cohomology(w)?;
        for (k, &dim) in h.iter().enumerate() {
            let slot = Slot::new(w, k);
            cohomology.insert(slot, dim);
            let expected = if k == 0 && w == 0 { complex.germ_dim() } else { 0 };
            let name = if k == 0 { "H0" } else { "Hk" };
            report.assert(Assertion::new(name, Some(slot), expected, dim));
        }
    }
    report.table("cohomology", cohomology.to_json());

    let aug = complex.augmentation();
    let origin = Slot::new(0, 0);
    let aug_space = Subspace::row_space(&aug.transpose());
    let basic0 = complex.basic_subspace(origin);
    let d0 = complex.family_d.get(origin).expect("built");
    let cycles = basic0.intersection(&Subspace::row_space(&d0.kernel()))?;
    report.assert(Assertion::new(
        "augmentation injective",
        Some(origin),
        complex.germ_dim(),
        aug.rank(),
    ));
    report.assert(Assertion::check(
        "augmentation onto closed functions",
        Some(origin),
        basic0.contains_subspace(&aug_space) && aug_space == cycles,
    ));

    for w in 0..=complex.cutoff {
        for k in 0..=complex.max_degree {
            let slot = Slot::new(w, k);
            let basis = complex.basic_subspace(slot).basis().clone();
            let ok = (0..basis.rows()).all(|i| complex.homotopy_identity(slot, basis.row(i)));
            let stays_basic = k == 0
                || (0..basis.rows()).all(|i| {
                    complex
                        .basic_subspace(Slot::new(w, k - 1))
                        .contains(&complex.apply_homotopy(slot, basis.row(i)))
                });
            report.assert(Assertion::check("homotopy identity", Some(slot), ok && stays_basic));
        }
    }
    Ok(report)
}

/// Compares basic slot dimensions of `G ⋉ (G ×_H V)` with those of `H ⋉ V`.
pub fn morita_check(
    group: &FiniteGroupAction,
    subgroup: &[usize],
    rho: &BTreeMap<usize, Matrix>,
    cutoff: usize,
) -> Result<Report> {
    let induced = induce_action(group, subgroup, rho)?;
    let slice = group.restricted(subgroup, rho)?;
    let big = BasicComplex::build(&induced, cutoff)?;
    let small = BasicComplex::build(&slice, cutoff)?;
    let mut report = Report::new("morita");
    report.table("induced_dims", big.dims().to_json());
    report.table("slice_dims", small.dims().to_json());
    report.assert(Assertion::new("germ dimension", None, small.germ_dim(), big.germ_dim()));
    for w in 0..=cutoff {
        for k in 0..=small.max_degree.max(big.max_degree) {
            let slot = Slot::new(w, k);
            report.assert(Assertion::new("basic dim", Some(slot), small.dim(slot), big.dim(slot)));
        }
    }
    Ok(report)
}
