//! Polynomial differential forms on a fixed coordinate space `R^n`.
//!
//! A form is a sparse map from strictly increasing index sets `I` to
//! polynomial coefficients, representing `Σ_I p_I dx_I`. The weight of a
//! monomial form `x^α dx_I` is `|α| + |I|`; every operator here except
//! `wedge` preserves or shifts weight predictably, which is what makes the
//! per-weight linear algebra in [`crate::graded`] exact and finite.

use std::collections::BTreeMap;
use std::fmt;

use serde::ser::{SerializeMap, SerializeStruct};
use serde::{Serialize, Serializer};

use crate::algebra::{degree_of, Matrix, Poly, Scalar};
use crate::error::{structural, Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Form {
    nvars: usize,
    degree: usize,
    terms: BTreeMap<Vec<usize>, Poly>,
}

/// The linear vector field `ξ(x) = A x`, with `i`-th component `Σ_j A_ij x_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearVectorField {
    matrix: Matrix,
    components: Vec<Poly>,
}

impl LinearVectorField {
    pub fn new(matrix: Matrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(structural("vector field matrix must be square"));
        }
        let n = matrix.rows();
        let components = (0..n)
            .map(|i| {
                let terms = (0..n).map(|j| {
                    let mut e = vec![0; n];
                    e[j] = 1;
                    (e, matrix.get(i, j).clone())
                });
                Poly::from_terms(n, terms).expect("consistent length")
            })
            .collect();
        Ok(Self { matrix, components })
    }

    /// The Euler field `Σ x_i ∂_i`.
    pub fn euler(n: usize) -> Self {
        Self::new(Matrix::identity(n)).expect("square")
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn component(&self, i: usize) -> &Poly {
        &self.components[i]
    }
}

impl Form {
    pub fn zero(nvars: usize, degree: usize) -> Self {
        Self {
            nvars,
            degree,
            terms: BTreeMap::new(),
        }
    }

    /// A 0-form.
    pub fn function(p: Poly) -> Self {
        let mut f = Self::zero(p.nvars(), 0);
        f.add_term(Vec::new(), &p);
        f
    }

    /// The 1-form `dx_i`.
    pub fn dx(nvars: usize, i: usize) -> Self {
        Self::basis(nvars, vec![i], Poly::one(nvars))
    }

    /// `p dx_I`; the index set is sorted and must be free of repeats.
    pub fn basis(nvars: usize, mut indices: Vec<usize>, p: Poly) -> Self {
        assert_eq!(p.nvars(), nvars, "coefficient lives in the wrong ring");
        indices.sort_unstable();
        assert!(indices.windows(2).all(|w| w[0] < w[1]), "repeated index in dx_I");
        assert!(indices.iter().all(|&i| i < nvars), "index out of range");
        let mut f = Self::zero(nvars, indices.len());
        f.add_term(indices, &p);
        f
    }

    /// Builds a form of degree `degree` from `(I, p_I)` pairs.
    pub fn from_terms(
        nvars: usize,
        degree: usize,
        terms: impl IntoIterator<Item = (Vec<usize>, Poly)>,
    ) -> Result<Self> {
        let mut f = Self::zero(nvars, degree);
        for (idx, p) in terms {
            if idx.len() != degree || !idx.windows(2).all(|w| w[0] < w[1]) {
                return Err(structural(format!(
                    "index set {idx:?} is not increasing of size {degree}"
                )));
            }
            if idx.iter().any(|&i| i >= nvars) || p.nvars() != nvars {
                return Err(structural("form term outside the ambient space"));
            }
            f.add_term(idx, &p);
        }
        Ok(f)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn terms(&self) -> &BTreeMap<Vec<usize>, Poly> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, indices: &[usize]) -> Poly {
        self.terms
            .get(indices)
            .cloned()
            .unwrap_or_else(|| Poly::zero(self.nvars))
    }

    fn add_term(&mut self, idx: Vec<usize>, p: &Poly) {
        if p.is_zero() {
            return;
        }
        let entry = self.terms.entry(idx);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(p.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get() + p;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    fn check_same_space(&self, other: &Form) -> Result<()> {
        if self.nvars != other.nvars || self.degree != other.degree {
            return Err(structural(format!(
                "cannot add a {}-form on R^{} to a {}-form on R^{}",
                self.degree, self.nvars, other.degree, other.nvars
            )));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Form) -> Result<Form> {
        self.check_same_space(other)?;
        let mut out = self.clone();
        for (i, p) in &other.terms {
            out.add_term(i.clone(), p);
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Form) -> Result<Form> {
        self.try_add(&other.neg())
    }

    pub fn neg(&self) -> Form {
        self.scale(&Scalar::from_int(-1))
    }

    pub fn scale(&self, c: &Scalar) -> Form {
        let mut out = Form::zero(self.nvars, self.degree);
        for (i, p) in &self.terms {
            out.add_term(i.clone(), &p.scale(c));
        }
        out
    }

    pub fn mul_poly(&self, q: &Poly) -> Form {
        let mut out = Form::zero(self.nvars, self.degree);
        for (i, p) in &self.terms {
            out.add_term(i.clone(), &(p * q));
        }
        out
    }

    /// Exterior product with the sign of the shuffle of index sets.
    pub fn wedge(&self, other: &Form) -> Form {
        assert_eq!(self.nvars, other.nvars, "wedge of forms on different spaces");
        let mut out = Form::zero(self.nvars, self.degree + other.degree);
        if self.degree + other.degree > self.nvars {
            return out;
        }
        for (i, p) in &self.terms {
            for (j, q) in &other.terms {
                if let Some((merged, negative)) = merge_indices(i, j) {
                    let c = p * q;
                    out.add_term(merged, &if negative { -&c } else { c });
                }
            }
        }
        out
    }

    /// Exterior differential `d(Σ p_I dx_I) = Σ_I Σ_i ∂_i p_I dx_i ∧ dx_I`.
    pub fn ext_d(&self) -> Form {
        let mut out = Form::zero(self.nvars, self.degree + 1);
        for (idx, p) in &self.terms {
            for i in 0..self.nvars {
                if idx.contains(&i) {
                    continue;
                }
                let dp = p.partial_derivative(i).expect("index in range");
                if dp.is_zero() {
                    continue;
                }
                let (merged, negative) = merge_indices(&[i], idx).expect("disjoint");
                out.add_term(merged, &if negative { -&dp } else { dp });
            }
        }
        out
    }

    /// Interior product `ι_ξ`.
    pub fn contract(&self, xi: &LinearVectorField) -> Result<Form> {
        if self.degree == 0 {
            return Err(Error::Contract("cannot contract a 0-form".into()));
        }
        if xi.dim() != self.nvars {
            return Err(structural("vector field and form live on different spaces"));
        }
        let mut out = Form::zero(self.nvars, self.degree - 1);
        for (idx, p) in &self.terms {
            for (pos, &i) in idx.iter().enumerate() {
                let comp = xi.component(i);
                if comp.is_zero() {
                    continue;
                }
                let mut rest = idx.clone();
                rest.remove(pos);
                let c = p * comp;
                out.add_term(rest, &if pos % 2 == 1 { -&c } else { c });
            }
        }
        Ok(out)
    }

    /// Lie derivative by Cartan's formula `L_ξ = d ι_ξ + ι_ξ d`.
    pub fn lie_derivative(&self, xi: &LinearVectorField) -> Result<Form> {
        if xi.dim() != self.nvars {
            return Err(structural("vector field and form live on different spaces"));
        }
        let second = self.ext_d().contract(xi)?;
        if self.degree == 0 {
            return Ok(second);
        }
        let first = self.contract(xi)?.ext_d();
        first.try_add(&second)
    }

    /// Pullback `g^* a` along an invertible linear map `x ↦ g x`.
    pub fn pullback_linear(&self, g: &Matrix) -> Result<Form> {
        if !g.is_square() || g.rows() != self.nvars {
            return Err(structural("pullback matrix must be square of the ambient size"));
        }
        if g.determinant()?.is_zero() {
            return Err(structural("pullback along a singular matrix"));
        }
        self.pullback(g)
    }

    /// Pullback along a linear map `y ↦ A y` from `R^m` to `R^n`, where `A`
    /// is `n × m`. Coefficients are substituted and `dx_i ↦ Σ_j A_ij dy_j`.
    pub fn pullback(&self, a: &Matrix) -> Result<Form> {
        if a.rows() != self.nvars {
            return Err(structural(format!(
                "pullback matrix has {} rows, form lives on R^{}",
                a.rows(),
                self.nvars
            )));
        }
        let m = a.cols();
        let one_forms: Vec<Form> = (0..self.nvars)
            .map(|i| {
                let terms = (0..m)
                    .filter(|&j| !a.get(i, j).is_zero())
                    .map(|j| (vec![j], Poly::constant(m, a.get(i, j).clone())));
                Form::from_terms(m, 1, terms).expect("valid 1-form")
            })
            .collect();
        let mut out = Form::zero(m, self.degree);
        for (idx, p) in &self.terms {
            let mut frame = Form::function(Poly::one(m));
            for &i in idx {
                frame = frame.wedge(&one_forms[i]);
            }
            if frame.is_zero() {
                continue;
            }
            let coeff = p.compose_linear(a)?;
            for (j, q) in &frame.terms {
                out.add_term(j.clone(), &(q * &coeff));
            }
        }
        Ok(out)
    }

    /// Splits the form into weight-homogeneous pieces keyed by weight.
    pub fn weight_components(&self) -> BTreeMap<usize, Form> {
        let mut out: BTreeMap<usize, Form> = BTreeMap::new();
        for (idx, p) in &self.terms {
            for (e, c) in p.terms() {
                let w = degree_of(e) + self.degree;
                let f = out.entry(w).or_insert_with(|| Form::zero(self.nvars, self.degree));
                f.add_term(idx.clone(), &Poly::monomial(e.clone(), c.clone()));
            }
        }
        out
    }

    /// The common weight of all terms; `None` for the zero form or a
    /// form mixing weights.
    pub fn weight(&self) -> Option<usize> {
        let comps = self.weight_components();
        if comps.len() == 1 {
            comps.keys().next().copied()
        } else {
            None
        }
    }

    pub fn is_weight_homogeneous(&self) -> bool {
        self.weight_components().len() <= 1
    }

    /// Euler-type homotopy along the coordinates flagged in `fiber`:
    /// each monomial form `x^α dx_I` with fiber weight `m + k > 0` is sent to
    /// `ι_E(x^α dx_I) / (m + k)`, where `E` is the Euler field of the fiber
    /// coordinates, `m` the fiber degree of `x^α` and `k` the number of fiber
    /// indices in `I`. With every coordinate flagged this is the Poincaré
    /// homotopy operator.
    pub fn homotopy_along(&self, fiber: &[bool]) -> Result<Form> {
        if self.degree == 0 {
            return Err(Error::Contract("homotopy operator applied to a 0-form".into()));
        }
        if fiber.len() != self.nvars {
            return Err(structural("fiber mask has the wrong length"));
        }
        let mut out = Form::zero(self.nvars, self.degree - 1);
        for (idx, p) in &self.terms {
            let k = idx.iter().filter(|&&i| fiber[i]).count();
            if k == 0 {
                continue;
            }
            for (e, c) in p.terms() {
                let m: usize = e.iter().zip(fiber).filter(|(_, &f)| f).map(|(&x, _)| x as usize).sum();
                let factor = Scalar::from_ratio(1, (m + k) as i64);
                for (pos, &i) in idx.iter().enumerate() {
                    if !fiber[i] {
                        continue;
                    }
                    let mut rest = idx.clone();
                    rest.remove(pos);
                    let mut ex = e.clone();
                    ex[i] += 1;
                    let sign = if pos % 2 == 1 { -&factor } else { factor.clone() };
                    out.add_term(rest, &Poly::monomial(ex, c * &sign));
                }
            }
        }
        Ok(out)
    }

    /// The Poincaré homotopy operator: `(1/(m+k)) ι_E` on each piece with
    /// coefficient degree `m`, `E` the Euler field.
    pub fn poincare_homotopy(&self) -> Result<Form> {
        self.homotopy_along(&vec![true; self.nvars])
    }

    /// Sets the coordinates flagged in `mask` to zero in every coefficient.
    pub fn vanish_variables(&self, mask: &[bool]) -> Form {
        let mut out = Form::zero(self.nvars, self.degree);
        for (idx, p) in &self.terms {
            out.add_term(idx.clone(), &p.vanish_variables(mask));
        }
        out
    }
}

/// Merges two increasing index lists; returns the merged list and whether
/// the sorting permutation is odd, or `None` if they share an index.
fn merge_indices(a: &[usize], b: &[usize]) -> Option<(Vec<usize>, bool)> {
    let mut inversions = 0usize;
    for &i in a {
        for &j in b {
            if i == j {
                return None;
            }
            if i > j {
                inversions += 1;
            }
        }
    }
    let mut merged: Vec<usize> = a.iter().chain(b).copied().collect();
    merged.sort_unstable();
    Some((merged, inversions % 2 == 1))
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(idx, p)| {
                if idx.is_empty() {
                    format!("({p})")
                } else {
                    let d: Vec<String> = idx.iter().map(|i| format!("dx{i}")).collect();
                    format!("({p}) {}", d.join("^"))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

struct CoefficientMap<'a>(&'a Poly);

impl Serialize for CoefficientMap<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.terms().len()))?;
        for (e, c) in self.0.terms() {
            let key: Vec<String> = e.iter().map(u32::to_string).collect();
            map.serialize_entry(&key.join(","), c)?;
        }
        map.end()
    }
}

struct FormTerm<'a>(&'a [usize], &'a Poly);

impl Serialize for FormTerm<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("FormTerm", 2)?;
        st.serialize_field("indices", self.0)?;
        st.serialize_field("coefficient", &CoefficientMap(self.1))?;
        st.end()
    }
}

/// Serialized as a list of `{indices, coefficient: {"e1,e2,…": scalar}}`.
impl Serialize for Form {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let terms: Vec<FormTerm<'_>> = self.terms.iter().map(|(i, p)| FormTerm(i, p)).collect();
        terms.serialize(s)
    }
}
