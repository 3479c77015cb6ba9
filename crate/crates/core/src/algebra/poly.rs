use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::algebra::{Matrix, MinimalPolynomial, Scalar};
use crate::error::{structural, Result};

/// Exponent vector of a monomial; its length is the ambient dimension.
pub type Exponents = Vec<u32>;

/// Sparse multivariate polynomial with exact coefficients.
///
/// Terms are kept in a sorted map so iteration order (and everything derived
/// from it) is deterministic. Zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Exponents, Scalar>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Self {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Scalar) -> Self {
        Self::monomial(vec![0; nvars], c)
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Scalar::one())
    }

    /// The coordinate function `x_i` (0-based).
    pub fn var(nvars: usize, i: usize) -> Self {
        assert!(i < nvars, "variable index {i} out of range for {nvars} variables");
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(e, Scalar::one())
    }

    pub fn monomial(exps: Exponents, c: Scalar) -> Self {
        let nvars = exps.len();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exps, c);
        }
        Self { nvars, terms }
    }

    /// Builds a polynomial from terms; repeated exponents are summed.
    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Exponents, Scalar)>) -> Result<Self> {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            if e.len() != nvars {
                return Err(structural(format!(
                    "exponent vector of length {} in a {nvars}-variable polynomial",
                    e.len()
                )));
            }
            p.add_term(e, &c);
        }
        Ok(p)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &BTreeMap<Exponents, Scalar> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, e: &[u32]) -> Scalar {
        self.terms.get(e).cloned().unwrap_or_default()
    }

    pub(crate) fn add_term(&mut self, e: Exponents, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get() + c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    /// Highest total degree of a term, `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<usize> {
        self.terms.keys().map(|e| degree_of(e)).max()
    }

    /// True when every term has the same total degree (zero is homogeneous).
    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(|e| degree_of(e));
        match degs.next() {
            None => true,
            Some(d) => degs.all(|x| x == d),
        }
    }

    /// The extension field of the coefficients, if any is irrational.
    pub fn field(&self) -> Option<&std::sync::Arc<MinimalPolynomial>> {
        self.terms.values().find_map(Scalar::field)
    }

    fn check_compatible(&self, other: &Poly) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(structural(format!(
                "polynomials in {} and {} variables",
                self.nvars, other.nvars
            )));
        }
        if let (Some(a), Some(b)) = (self.field(), other.field()) {
            if a != b {
                return Err(structural("polynomials over different extension fields"));
            }
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Poly) -> Result<Poly> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c);
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Poly) -> Result<Poly> {
        self.try_add(&-other)
    }

    pub fn try_mul(&self, other: &Poly) -> Result<Poly> {
        self.mul_truncated(other, None)
    }

    /// Product with every term of total degree above `cutoff` dropped.
    pub fn mul_truncated(&self, other: &Poly, cutoff: Option<usize>) -> Result<Poly> {
        self.check_compatible(other)?;
        let mut out = Poly::zero(self.nvars);
        for (ea, ca) in &self.terms {
            let da = degree_of(ea);
            for (eb, cb) in &other.terms {
                if cutoff.is_some_and(|d| da + degree_of(eb) > d) {
                    continue;
                }
                let e: Exponents = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, &(ca * cb));
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Scalar) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, x)| (e.clone(), x * c)).collect(),
        }
    }

    /// Drops every term of total degree above `cutoff`.
    pub fn truncate(&self, cutoff: usize) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| degree_of(e) <= cutoff)
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    /// Formal partial derivative with respect to `x_i` (0-based).
    pub fn partial_derivative(&self, i: usize) -> Result<Poly> {
        if i >= self.nvars {
            return Err(structural(format!(
                "variable index {i} out of range for {} variables",
                self.nvars
            )));
        }
        let mut out = Poly::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut f = e.clone();
            f[i] -= 1;
            out.add_term(f, &(c * &Scalar::from_int(i64::from(e[i]))));
        }
        Ok(out)
    }

    /// `p(A x)` for a square matrix `A` of size `nvars`.
    pub fn linear_substitute(&self, a: &Matrix) -> Result<Poly> {
        if !a.is_square() || a.rows() != self.nvars {
            return Err(structural(format!(
                "substitution matrix is {}x{}, expected {n}x{n}",
                a.rows(),
                a.cols(),
                n = self.nvars
            )));
        }
        self.compose_linear(a)
    }

    /// `p(A y)` for an `nvars × m` matrix `A`; the result lives in `m`
    /// variables. Covers restriction to a subspace spanned by the columns
    /// of `A`.
    pub fn compose_linear(&self, a: &Matrix) -> Result<Poly> {
        if a.rows() != self.nvars {
            return Err(structural(format!(
                "substitution matrix has {} rows, expected {}",
                a.rows(),
                self.nvars
            )));
        }
        let m = a.cols();
        let images: Vec<Poly> = (0..self.nvars)
            .map(|i| {
                let terms = (0..m).map(|j| {
                    let mut e = vec![0; m];
                    e[j] = 1;
                    (e, a.get(i, j).clone())
                });
                Poly::from_terms(m, terms).expect("consistent length")
            })
            .collect();
        // powers[i][p] = images[i]^p, filled lazily
        let mut powers: Vec<Vec<Poly>> = images.iter().map(|_| vec![Poly::one(m)]).collect();
        let mut out = Poly::zero(m);
        for (e, c) in &self.terms {
            let mut term = Poly::constant(m, c.clone());
            for (i, &p) in e.iter().enumerate() {
                let p = p as usize;
                while powers[i].len() <= p {
                    let next = &powers[i][powers[i].len() - 1] * &images[i];
                    powers[i].push(next);
                }
                if p > 0 {
                    term = &term * &powers[i][p];
                }
            }
            out = &out + &term;
        }
        Ok(out)
    }

    /// Sum of the terms of total degree exactly `m`.
    pub fn graded_component(&self, m: usize) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| degree_of(e) == m)
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    /// Value at the origin.
    pub fn constant_term(&self) -> Scalar {
        self.coefficient(&vec![0; self.nvars])
    }

    /// Sets the variables flagged in `mask` to zero.
    pub fn vanish_variables(&self, mask: &[bool]) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e.iter().zip(mask).all(|(&x, &m)| !m || x == 0))
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }
}

pub(crate) fn degree_of(e: &[u32]) -> usize {
    e.iter().map(|&x| x as usize).sum()
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        self.try_add(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self.try_sub(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        self.try_mul(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &p)| p > 0)
                .map(|(i, &p)| if p == 1 { format!("x{i}") } else { format!("x{i}^{p}") })
                .collect();
            if mono.is_empty() {
                write!(f, "{c}")?;
            } else if c.is_one() {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "({c})*{}", mono.join("*"))?;
            }
        }
        Ok(())
    }
}
