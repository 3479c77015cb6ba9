//! Finite groups acting linearly, their loop-space models, and induced
//! actions `G ×_H V`.
//!
//! An action lives on a space made of `blocks` disjoint copies of
//! `R^block_dim`; every element maps each block linearly onto some block.
//! Ordinary linear actions have one block. Induced actions have one block
//! per coset of `H`, so `G ×_H V` is a disjoint union of twisted copies of
//! `V` rather than a single vector space.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use crate::algebra::{Matrix, Scalar};
use crate::error::{structural, Error, Result};
use crate::graded::Subspace;
use crate::variety::SubspaceArrangement;

pub const DEFAULT_GROUP_BOUND: usize = 512;

/// A finite group with a linear action on a union of blocks.
#[derive(Clone, Debug)]
pub struct FiniteGroupAction {
    blocks: usize,
    block_dim: usize,
    /// `block_maps[g][c]` is `(target block, matrix)` for the action of `g` on block `c`.
    block_maps: Vec<Vec<(usize, Matrix)>>,
    table: Vec<Vec<usize>>,
    inverses: Vec<usize>,
    classes: Vec<Vec<usize>>,
    class_of: Vec<usize>,
    centralizers: Vec<Vec<usize>>,
}

impl FiniteGroupAction {
    /// Closes a set of invertible `n × n` matrices under multiplication.
    /// Elements appear in breadth-first order of right multiplication by
    /// the generators, starting from the identity.
    pub fn close_group(generators: &[Matrix], bound: usize) -> Result<Self> {
        let n = match generators.first() {
            Some(g) => g.rows(),
            None => return Err(structural("at least one generator is required")),
        };
        for g in generators {
            if !g.is_square() || g.rows() != n {
                return Err(structural("generators must be square matrices of one size"));
            }
            if g.determinant()?.is_zero() {
                return Err(structural("generator is not invertible"));
            }
        }
        let mut elements = vec![Matrix::identity(n)];
        let mut index: HashMap<Matrix, usize> = HashMap::from([(Matrix::identity(n), 0)]);
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for g in generators {
                let p = elements[i].mul(g)?;
                if !index.contains_key(&p) {
                    if elements.len() == bound {
                        return Err(Error::GroupTooLarge { bound });
                    }
                    index.insert(p.clone(), elements.len());
                    queue.push_back(elements.len());
                    elements.push(p);
                }
            }
        }
        let mut table = vec![vec![0; elements.len()]; elements.len()];
        for (a, row) in table.iter_mut().enumerate() {
            for (b, cell) in row.iter_mut().enumerate() {
                *cell = index[&elements[a].mul(&elements[b])?];
            }
        }
        Self::assemble(1, n, elements.into_iter().map(|m| vec![(0, m)]).collect(), table)
    }

    pub fn from_generators(generators: &[Matrix]) -> Result<Self> {
        Self::close_group(generators, DEFAULT_GROUP_BOUND)
    }

    pub fn trivial(n: usize) -> Self {
        Self::from_table(1, n, vec![vec![(0, Matrix::identity(n))]], vec![vec![0]]).expect("trivial group is valid")
    }

    /// Builds an action from an abstract multiplication table (identity at
    /// index 0) and per-element block maps. The action may be non-faithful.
    /// The table is checked for associativity and every product against
    /// the block maps.
    pub fn from_table(
        blocks: usize,
        block_dim: usize,
        block_maps: Vec<Vec<(usize, Matrix)>>,
        table: Vec<Vec<usize>>,
    ) -> Result<Self> {
        let order = block_maps.len();
        if order == 0 || table.len() != order || table.iter().any(|r| r.len() != order) {
            return Err(structural("multiplication table does not match the element list"));
        }
        for maps in &block_maps {
            if maps.len() != blocks {
                return Err(structural("every element needs one map per block"));
            }
            let targets: BTreeSet<usize> = maps.iter().map(|(t, _)| *t).collect();
            if targets.len() != blocks || targets.iter().any(|&t| t >= blocks) {
                return Err(structural("an element must permute the blocks"));
            }
            for (_, m) in maps {
                if !m.is_square() || m.rows() != block_dim {
                    return Err(structural("block matrices must be square of the block size"));
                }
            }
        }
        if (0..order).any(|a| table[0][a] != a || table[a][0] != a) {
            return Err(structural("element 0 must be the identity"));
        }
        for (a, row) in table.iter().enumerate() {
            for (b, &ab) in row.iter().enumerate() {
                if ab >= order {
                    return Err(structural("multiplication table entry out of range"));
                }
                for c in 0..blocks {
                    let (mid, mb) = &block_maps[b][c];
                    let (tgt, ma) = &block_maps[a][*mid];
                    let (tgt_ab, m_ab) = &block_maps[ab][c];
                    if tgt != tgt_ab || &ma.mul(mb)? != m_ab {
                        return Err(structural("block maps do not respect the multiplication table"));
                    }
                }
            }
        }
        for a in 0..order {
            for b in 0..order {
                for c in 0..order {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(structural("multiplication table is not associative"));
                    }
                }
            }
        }
        Self::assemble(blocks, block_dim, block_maps, table)
    }

    /// Derives inverses, classes and centralizers; the table is trusted.
    fn assemble(
        blocks: usize,
        block_dim: usize,
        block_maps: Vec<Vec<(usize, Matrix)>>,
        table: Vec<Vec<usize>>,
    ) -> Result<Self> {
        let order = block_maps.len();
        let mut inverses = Vec::with_capacity(order);
        for row in &table {
            match row.iter().position(|&x| x == 0) {
                Some(i) => inverses.push(i),
                None => return Err(structural("element without an inverse")),
            }
        }
        let mut class_of = vec![usize::MAX; order];
        let mut classes = Vec::new();
        for g in 0..order {
            if class_of[g] != usize::MAX {
                continue;
            }
            let class: BTreeSet<usize> = (0..order).map(|h| table[table[h][g]][inverses[h]]).collect();
            for &x in &class {
                class_of[x] = classes.len();
            }
            classes.push(class.into_iter().collect::<Vec<_>>());
        }
        let centralizers = (0..order)
            .map(|g| (0..order).filter(|&h| table[h][g] == table[g][h]).collect())
            .collect();
        Ok(Self {
            blocks,
            block_dim,
            block_maps,
            table,
            inverses,
            classes,
            class_of,
            centralizers,
        })
    }

    pub fn order(&self) -> usize {
        self.block_maps.len()
    }

    pub fn blocks(&self) -> usize {
        self.blocks
    }

    pub fn block_dim(&self) -> usize {
        self.block_dim
    }

    /// Total dimension of the union of blocks.
    pub fn dim(&self) -> usize {
        self.blocks * self.block_dim
    }

    /// Matrix of `g` on a single-block action.
    pub fn matrix(&self, g: usize) -> &Matrix {
        &self.block_maps[g][0].1
    }

    /// `(target block, matrix)` of `g` on block `c`.
    pub fn block_map(&self, g: usize, c: usize) -> (usize, &Matrix) {
        let (t, m) = &self.block_maps[g][c];
        (*t, m)
    }

    /// Matrix of `g` on the direct sum of the blocks.
    pub fn full_matrix(&self, g: usize) -> Matrix {
        let b = self.block_dim;
        let mut m = Matrix::zeros(self.dim(), self.dim());
        for (c, (t, blk)) in self.block_maps[g].iter().enumerate() {
            for i in 0..b {
                for j in 0..b {
                    m.set(t * b + i, c * b + j, blk.get(i, j).clone());
                }
            }
        }
        m
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inverse(&self, a: usize) -> usize {
        self.inverses[a]
    }

    pub fn conjugate(&self, h: usize, g: usize) -> usize {
        self.table[self.table[h][g]][self.inverses[h]]
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn class_of(&self, g: usize) -> usize {
        self.class_of[g]
    }

    pub fn centralizer(&self, g: usize) -> &[usize] {
        &self.centralizers[g]
    }

    pub fn is_abelian(&self) -> bool {
        self.classes.len() == self.order()
    }

    /// Element of the matrix group, if it belongs to a single-block action.
    pub fn index_of(&self, m: &Matrix) -> Option<usize> {
        (self.blocks == 1).then(|| (0..self.order()).find(|&g| self.matrix(g) == m))?
    }

    /// Closure of a set of elements under the group law.
    pub fn subgroup(&self, generators: &[usize]) -> Result<Vec<usize>> {
        if generators.iter().any(|&g| g >= self.order()) {
            return Err(structural("subgroup generator index out of range"));
        }
        let mut seen = BTreeSet::from([0usize]);
        let mut queue = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            for &g in generators {
                let y = self.table[x][g];
                if seen.insert(y) {
                    queue.push_back(y);
                }
            }
        }
        Ok(seen.into_iter().collect())
    }

    /// Checks that a set of indices is a subgroup.
    pub fn is_subgroup(&self, h: &[usize]) -> bool {
        let set: BTreeSet<usize> = h.iter().copied().collect();
        set.contains(&0)
            && set.iter().all(|&a| a < self.order() && set.contains(&self.inverses[a]))
            && set
                .iter()
                .all(|&a| set.iter().all(|&b| set.contains(&self.table[a][b])))
    }

    /// Extends generator images to a representation on `R^dim` of the
    /// subgroup they generate, checking that it is a homomorphism.
    pub fn extend_representation(
        &self,
        generators: &[usize],
        images: &[Matrix],
        dim: usize,
    ) -> Result<BTreeMap<usize, Matrix>> {
        if generators.len() != images.len() {
            return Err(structural("one representation matrix is needed per subgroup generator"));
        }
        if images.iter().any(|m| !m.is_square() || m.rows() != dim) {
            return Err(structural(
                "representation matrices must be square of the slice dimension",
            ));
        }
        if generators.iter().any(|&g| g >= self.order()) {
            return Err(structural("subgroup generator index out of range"));
        }
        let mut rho = BTreeMap::from([(0usize, Matrix::identity(dim))]);
        let mut queue = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            for (&g, img) in generators.iter().zip(images) {
                let y = self.table[x][g];
                let m = rho[&x].mul(img)?;
                match rho.get(&y) {
                    Some(existing) if existing != &m => {
                        return Err(structural("representation does not respect the group law"));
                    }
                    Some(_) => {}
                    None => {
                        rho.insert(y, m);
                        queue.push_back(y);
                    }
                }
            }
        }
        // closing the orbit of the identity checks every relation x·g; all
        // products follow since every element is a word in the generators
        for (&a, ma) in &rho {
            for (&b, mb) in &rho {
                if rho[&self.table[a][b]] != ma.mul(mb)? {
                    return Err(structural("representation does not respect the group law"));
                }
            }
        }
        Ok(rho)
    }

    /// The subgroup `h` acting on `V` through `rho`, as a single-block action
    /// with elements in increasing index order.
    pub fn restricted(&self, h: &[usize], rho: &BTreeMap<usize, Matrix>) -> Result<Self> {
        if !self.is_subgroup(h) {
            return Err(structural("subgroup is not closed under the group law"));
        }
        let elems: Vec<usize> = h.iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
        let pos: BTreeMap<usize, usize> = elems.iter().enumerate().map(|(i, &g)| (g, i)).collect();
        let dim = rho.get(&0).map_or(0, Matrix::rows);
        let mut maps = Vec::new();
        for g in &elems {
            let m = rho
                .get(g)
                .ok_or_else(|| structural("representation is missing a subgroup element"))?;
            maps.push(vec![(0, m.clone())]);
        }
        let table = elems
            .iter()
            .map(|&a| elems.iter().map(|&b| pos[&self.table[a][b]]).collect())
            .collect();
        Self::from_table(1, dim, maps, table)
    }

    /// Conjugates every matrix by an invertible `p`: `g ↦ p g p⁻¹`.
    pub fn conjugated_by(&self, p: &Matrix) -> Result<Self> {
        if !p.is_square() || p.rows() != self.block_dim {
            return Err(structural("conjugating matrix has the wrong size"));
        }
        let pinv = p.inverse()?;
        let maps = self
            .block_maps
            .iter()
            .map(|ms| {
                ms.iter()
                    .map(|(t, m)| Ok((*t, p.mul(m)?.mul(&pinv)?)))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_table(self.blocks, self.block_dim, maps, self.table.clone())
    }
}

/// `ker(g − I)`.
pub fn fixed_subspace(g: &Matrix) -> Subspace {
    let n = g.rows();
    let shifted = g.sub(&Matrix::identity(n)).expect("square matrix");
    Subspace::row_space(&shifted.kernel())
}

/// Induced action of `G` on `G ×_H V`: one block per left coset `rH`,
/// with representatives the least element index of each coset. The
/// element list and table are those of `G`.
pub fn induce_action(g: &FiniteGroupAction, h: &[usize], rho: &BTreeMap<usize, Matrix>) -> Result<FiniteGroupAction> {
    if !g.is_subgroup(h) {
        return Err(structural("H is not a subgroup of G"));
    }
    let hset: BTreeSet<usize> = h.iter().copied().collect();
    if hset.iter().any(|x| !rho.contains_key(x)) {
        return Err(structural("representation is missing a subgroup element"));
    }
    let dim = rho[&0].rows();
    let mut coset_of = vec![usize::MAX; g.order()];
    let mut reps = Vec::new();
    for x in 0..g.order() {
        if coset_of[x] == usize::MAX {
            for &y in &hset {
                coset_of[g.mul(x, y)] = reps.len();
            }
            reps.push(x);
        }
    }
    let mut maps = Vec::with_capacity(g.order());
    for x in 0..g.order() {
        let mut row = Vec::with_capacity(reps.len());
        for &r in &reps {
            let t = coset_of[g.mul(x, r)];
            let hpart = g.mul(g.inverse(reps[t]), g.mul(x, r));
            row.push((t, rho[&hpart].clone()));
        }
        maps.push(row);
    }
    FiniteGroupAction::from_table(reps.len(), dim, maps, g.table.clone())
}

/// The fixed subspace of `element` inside block `block`, which the element
/// maps to itself, with a chosen basis (by default the RREF basis).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LoopPiece {
    pub element: usize,
    pub block: usize,
    pub fixed: Subspace,
    basis: Matrix,
    /// Converts RREF coordinates to coordinates in `basis`.
    from_rref: Matrix,
}

impl LoopPiece {
    fn new(element: usize, block: usize, fixed: Subspace) -> Self {
        let d = fixed.dim();
        Self {
            element,
            block,
            basis: fixed.basis().clone(),
            fixed,
            from_rref: Matrix::identity(d),
        }
    }

    pub fn dim(&self) -> usize {
        self.fixed.dim()
    }

    /// Basis vectors as rows, in block coordinates.
    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    /// Coordinates in the chosen basis of a vector of the fixed subspace.
    pub fn coords(&self, v: &[Scalar]) -> Vec<Scalar> {
        let rref: Vec<Scalar> = self.fixed.pivots().iter().map(|&c| v[c].clone()).collect();
        self.from_rref.transpose().apply(&rref)
    }

    /// Matrix, in the chosen basis, of a linear map of the block that
    /// preserves the fixed subspace; `None` if it does not.
    pub fn restrict(&self, a: &Matrix) -> Option<Matrix> {
        let d = self.dim();
        let mut r = Matrix::zeros(d, d);
        for j in 0..d {
            let v = a.apply(self.basis.row(j));
            if !self.fixed.contains(&v) {
                return None;
            }
            for (i, x) in self.coords(&v).into_iter().enumerate() {
                r.set(i, j, x);
            }
        }
        Some(r)
    }
}

/// The loop space `{(g, x) : g x = x}` as a list of pieces.
#[derive(Clone, Debug)]
pub struct LoopSpaceModel {
    pieces: Vec<LoopPiece>,
    index: BTreeMap<(usize, usize), usize>,
    orbits: Vec<Vec<usize>>,
}

impl LoopSpaceModel {
    pub fn new(action: &FiniteGroupAction) -> Result<Self> {
        let mut pieces = Vec::new();
        let mut index = BTreeMap::new();
        for g in 0..action.order() {
            for c in 0..action.blocks() {
                let (t, m) = action.block_map(g, c);
                if t == c {
                    index.insert((g, c), pieces.len());
                    pieces.push(LoopPiece::new(g, c, fixed_subspace(m)));
                }
            }
        }
        let model = Self {
            orbits: Vec::new(),
            pieces,
            index,
        };
        model.verify(action)?;
        let orbits = model.compute_orbits(action);
        Ok(Self { orbits, ..model })
    }

    fn verify(&self, action: &FiniteGroupAction) -> Result<()> {
        for p in &self.pieces {
            let (_, m) = action.block_map(p.element, p.block);
            for i in 0..p.dim() {
                if m.apply(p.fixed.basis().row(i)) != p.fixed.basis().row(i) {
                    return Err(Error::InternalConsistency {
                        slot: crate::graded::Slot::new(0, 0),
                        detail: "fixed vector is moved by its element".into(),
                    });
                }
            }
            if p.element == 0 && p.dim() != action.block_dim() {
                return Err(structural("identity does not fix its block"));
            }
            for h in 0..action.order() {
                let (hc, mh) = action.block_map(h, p.block);
                let target = self
                    .piece(action.conjugate(h, p.element), hc)
                    .expect("conjugate fixes image block");
                if p.fixed.image(mh)? != target.fixed {
                    return Err(Error::InternalConsistency {
                        slot: crate::graded::Slot::new(0, 0),
                        detail: "fixed subspaces are not conjugation-equivariant".into(),
                    });
                }
            }
        }
        Ok(())
    }

    fn compute_orbits(&self, action: &FiniteGroupAction) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.pieces.len()];
        let mut orbits = Vec::new();
        for (i, p) in self.pieces.iter().enumerate() {
            if seen[i] {
                continue;
            }
            let mut orbit = BTreeSet::new();
            for h in 0..action.order() {
                let (hc, _) = action.block_map(h, p.block);
                orbit.insert(self.index[&(action.conjugate(h, p.element), hc)]);
            }
            for &j in &orbit {
                seen[j] = true;
            }
            orbits.push(orbit.into_iter().collect());
        }
        orbits
    }

    pub fn pieces(&self) -> &[LoopPiece] {
        &self.pieces
    }

    pub fn piece(&self, element: usize, block: usize) -> Option<&LoopPiece> {
        self.index.get(&(element, block)).map(|&i| &self.pieces[i])
    }

    pub fn piece_index(&self, element: usize, block: usize) -> Option<usize> {
        self.index.get(&(element, block)).copied()
    }

    /// Replaces the basis of one piece by `change · basis` for an invertible
    /// `change`.
    pub fn rebased(&self, piece: usize, change: &Matrix) -> Result<Self> {
        let p = &self.pieces[piece];
        if !change.is_square() || change.rows() != p.dim() || change.determinant()?.is_zero() {
            return Err(structural("basis change must be invertible of the piece dimension"));
        }
        let mut out = self.clone();
        let q = &mut out.pieces[piece];
        q.basis = change.mul(&p.basis)?;
        // basis = C · rref, so rref-coordinates r give basis-coordinates r C⁻¹
        q.from_rref = change.mul(&p.from_rref.inverse()?)?.inverse()?;
        Ok(out)
    }

    /// Conjugation orbits of pieces; for a single block these are the
    /// conjugacy classes.
    pub fn orbits(&self) -> &[Vec<usize>] {
        &self.orbits
    }

    /// The union of the fixed subspaces lying in one block.
    pub fn arrangement(&self, block: usize) -> Result<SubspaceArrangement> {
        let comps: Vec<Subspace> = self
            .pieces
            .iter()
            .filter(|p| p.block == block)
            .map(|p| p.fixed.clone())
            .collect();
        let n = comps.first().map_or(0, Subspace::ambient);
        SubspaceArrangement::from_subspaces(n, comps)
    }
}

/// Matrix of `h` restricted to the fixed space of `(g, c)`, written in the
/// bases of the source piece and of the piece `(h g h⁻¹, h c)`.
pub fn transport_map(action: &FiniteGroupAction, model: &LoopSpaceModel, piece: usize, h: usize) -> Matrix {
    let p = &model.pieces[piece];
    let (hc, mh) = action.block_map(h, p.block);
    let target = model
        .piece(action.conjugate(h, p.element), hc)
        .expect("conjugate piece exists");
    let d = p.dim();
    let mut t = Matrix::zeros(target.dim(), d);
    for j in 0..d {
        let v = mh.apply(p.basis().row(j));
        for (i, x) in target.coords(&v).into_iter().enumerate() {
            t.set(i, j, x);
        }
    }
    t
}
