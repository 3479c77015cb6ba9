//! Exact scalars: rationals, and elements of a simple algebraic extension
//! `Q(α) = Q[t]/(m(t))` given by a user-supplied monic minimal polynomial.
//!
//! An extension element whose coordinates in the power basis `1, α, …`
//! are all zero beyond the constant term is stored as a rational. This keeps
//! the representation canonical, so derived equality is semantic equality.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::error::{structural, Error, Result};

/// Monic minimal polynomial of a primitive element, coefficients low to high.
///
/// Irreducibility is trusted. A reducible polynomial yields a ring with zero
/// divisors; inverting a zero divisor then fails with a structural error.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MinimalPolynomial {
    coeffs: Vec<BigRational>,
}

impl MinimalPolynomial {
    /// Builds the polynomial from coefficients `c0, c1, …, cd` (low to high).
    /// The polynomial is normalized to be monic.
    pub fn new(coeffs: Vec<BigRational>) -> Result<Self> {
        let mut coeffs = coeffs;
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        if coeffs.len() < 2 {
            return Err(structural("minimal polynomial must have degree at least 1"));
        }
        let lead = coeffs.last().cloned().expect("nonempty");
        if !lead.is_one() {
            for c in &mut coeffs {
                *c = &*c / &lead;
            }
        }
        if coeffs.len() > 2 && !squarefree(&coeffs) {
            return Err(structural("minimal polynomial has a repeated factor"));
        }
        Ok(Self { coeffs })
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coefficients(&self) -> &[BigRational] {
        &self.coeffs
    }
}

/// An exact field element.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(BigRational),
    Algebraic(AlgebraicNumber),
}

/// Element `Σ c_i α^i` of `Q(α)` with at least one nonzero `c_i`, `i ≥ 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AlgebraicNumber {
    coeffs: Vec<BigRational>,
    field: Arc<MinimalPolynomial>,
}

impl AlgebraicNumber {
    pub fn coefficients(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn field(&self) -> &Arc<MinimalPolynomial> {
        &self.field
    }
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Scalar::Rational(BigRational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::Rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Scalar::Rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    /// Element of `field` with power-basis coordinates `coeffs` (padded or
    /// reduced modulo the minimal polynomial as needed).
    pub fn algebraic(coeffs: Vec<BigRational>, field: &Arc<MinimalPolynomial>) -> Self {
        normalize(reduce_mod(coeffs, field.coefficients()), field)
    }

    /// The primitive element α of `field`.
    pub fn generator(field: &Arc<MinimalPolynomial>) -> Self {
        Self::algebraic(vec![BigRational::zero(), BigRational::one()], field)
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Scalar::Rational(r) if r.is_zero())
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Scalar::Rational(r) if r.is_one())
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rational(r) => Some(r),
            Scalar::Algebraic(_) => None,
        }
    }

    /// The extension field this scalar lives in, if it is irrational.
    pub fn field(&self) -> Option<&Arc<MinimalPolynomial>> {
        match self {
            Scalar::Rational(_) => None,
            Scalar::Algebraic(a) => Some(&a.field),
        }
    }

    /// Power-basis coordinates relative to `field`.
    fn coords_in(&self, field: &MinimalPolynomial) -> Vec<BigRational> {
        let mut out = vec![BigRational::zero(); field.degree()];
        match self {
            Scalar::Rational(r) => out[0] = r.clone(),
            Scalar::Algebraic(a) => out.clone_from(&a.coeffs),
        }
        out
    }

    fn common_field<'a>(&'a self, other: &'a Self) -> Result<Option<&'a Arc<MinimalPolynomial>>> {
        match (self.field(), other.field()) {
            (Some(a), Some(b)) if a != b => Err(structural("scalars belong to different extension fields")),
            (Some(a), _) => Ok(Some(a)),
            (None, b) => Ok(b),
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        match self.common_field(other)? {
            None => Ok(Scalar::Rational(self.rat() + other.rat())),
            Some(f) => {
                let a = self.coords_in(f);
                let b = other.coords_in(f);
                let sum = a.iter().zip(&b).map(|(x, y)| x + y).collect();
                Ok(normalize(sum, f))
            }
        }
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        match self.common_field(other)? {
            None => Ok(Scalar::Rational(self.rat() * other.rat())),
            Some(f) => {
                if let Some(r) = self.as_rational() {
                    return Ok(other.scale_rational(r));
                }
                if let Some(r) = other.as_rational() {
                    return Ok(self.scale_rational(r));
                }
                let prod = poly_mul(&self.coords_in(f), &other.coords_in(f));
                Ok(normalize(reduce_mod(prod, f.coefficients()), f))
            }
        }
    }

    /// Multiplicative inverse; fails on zero or on a zero divisor of a
    /// reducible extension.
    pub fn try_inv(&self) -> Result<Self> {
        match self {
            Scalar::Rational(r) => {
                if r.is_zero() {
                    Err(Error::Structural("division by zero".into()))
                } else {
                    Ok(Scalar::Rational(r.recip()))
                }
            }
            Scalar::Algebraic(a) => {
                let inv = poly_inverse_mod(&a.coeffs, a.field.coefficients())
                    .ok_or_else(|| structural("element is not invertible; the minimal polynomial is reducible"))?;
                Ok(normalize(inv, &a.field))
            }
        }
    }

    pub fn try_div(&self, other: &Self) -> Result<Self> {
        self.try_mul(&other.try_inv()?)
    }

    fn rat(&self) -> &BigRational {
        self.as_rational().expect("rational scalar")
    }

    fn scale_rational(&self, r: &BigRational) -> Self {
        match self {
            Scalar::Rational(x) => Scalar::Rational(x * r),
            Scalar::Algebraic(a) => {
                let coeffs = a.coeffs.iter().map(|c| c * r).collect();
                normalize(coeffs, &a.field)
            }
        }
    }

    pub fn inv(&self) -> Self {
        self.try_inv().unwrap_or_else(|e| panic!("{e}"))
    }

    /// Parses `"p/q"` or an integer.
    pub fn parse_rational(s: &str) -> Result<BigRational> {
        let s = s.trim();
        let parse_int =
            |t: &str| BigInt::from_str(t.trim()).map_err(|_| Error::Config(format!("invalid scalar '{s}'")));
        match s.split_once('/') {
            Some((n, d)) => {
                let d = parse_int(d)?;
                if d.is_zero() {
                    return Err(Error::Config(format!("zero denominator in '{s}'")));
                }
                Ok(BigRational::new(parse_int(n)?, d))
            }
            None => Ok(BigRational::from_integer(parse_int(s)?)),
        }
    }

    /// Canonical string used in JSON and CSV output: `p/q` for rationals and
    /// `[c0, c1, …]` for extension elements.
    pub fn to_canonical_string(&self) -> String {
        self.to_string()
    }
}

fn fmt_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(r) => f.write_str(&fmt_rational(r)),
            Scalar::Algebraic(a) => {
                let parts: Vec<String> = a.coeffs.iter().map(fmt_rational).collect();
                write!(f, "[{}]", parts.join(", "))
            }
        }
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Scalar::Rational(r) => serializer.serialize_str(&fmt_rational(r)),
            Scalar::Algebraic(a) => {
                let parts: Vec<String> = a.coeffs.iter().map(fmt_rational).collect();
                parts.serialize(serializer)
            }
        }
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

impl From<BigRational> for Scalar {
    fn from(r: BigRational) -> Self {
        Scalar::Rational(r)
    }
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

// Operator impls panic when the operands live in different extension fields.
// All scalars of one computation share a field, which is validated where
// scalars enter the system.
macro_rules! binop {
    ($trait:ident, $method:ident, $body:expr) => {
        impl $trait<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                let f: fn(&Scalar, &Scalar) -> Result<Scalar> = $body;
                f(self, rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl $trait<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                $trait::$method(&self, &rhs)
            }
        }
        impl $trait<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                $trait::$method(&self, rhs)
            }
        }
    };
}

binop!(Add, add, |a, b| a.try_add(b));
binop!(Sub, sub, |a, b| a.try_add(&-b));
binop!(Mul, mul, |a, b| a.try_mul(b));
binop!(Div, div, |a, b| a.try_div(b));

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(r) => Scalar::Rational(-r),
            Scalar::Algebraic(a) => Scalar::Algebraic(AlgebraicNumber {
                coeffs: a.coeffs.iter().map(|c| -c).collect(),
                field: a.field.clone(),
            }),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

fn normalize(mut coeffs: Vec<BigRational>, field: &Arc<MinimalPolynomial>) -> Scalar {
    coeffs.resize(field.degree(), BigRational::zero());
    if coeffs[1..].iter().all(Zero::is_zero) {
        Scalar::Rational(coeffs.swap_remove(0))
    } else {
        Scalar::Algebraic(AlgebraicNumber {
            coeffs,
            field: field.clone(),
        })
    }
}

// Dense univariate helpers over Q, coefficients low to high.

fn trim(p: &mut Vec<BigRational>) {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
}

fn poly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Remainder of `p` modulo the monic polynomial `m`.
fn reduce_mod(mut p: Vec<BigRational>, m: &[BigRational]) -> Vec<BigRational> {
    let d = m.len() - 1;
    trim(&mut p);
    while p.len() > d {
        let lead = p.pop().expect("nonempty");
        let shift = p.len() - d;
        for (i, c) in m[..d].iter().enumerate() {
            p[shift + i] -= &lead * c;
        }
        trim(&mut p);
    }
    p
}

/// Quotient and remainder of `a` by nonzero `b`.
fn poly_divrem(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let mut r = a.to_vec();
    trim(&mut r);
    let mut b = b.to_vec();
    trim(&mut b);
    let lead = b.last().expect("nonzero divisor").clone();
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let mut q = vec![BigRational::zero(); r.len() - b.len() + 1];
    while r.len() >= b.len() && !r.is_empty() {
        let shift = r.len() - b.len();
        let c = r.last().expect("nonempty") / &lead;
        for (i, bc) in b.iter().enumerate() {
            r[shift + i] -= &c * bc;
        }
        q[shift] = c;
        trim(&mut r);
    }
    (q, r)
}

fn poly_sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let n = a.len().max(b.len());
    let mut out = vec![BigRational::zero(); n];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        out[i] -= y;
    }
    trim(&mut out);
    out
}

/// Inverse of `a` modulo `m` by the extended Euclidean algorithm, if
/// `gcd(a, m) = 1`.
fn poly_inverse_mod(a: &[BigRational], m: &[BigRational]) -> Option<Vec<BigRational>> {
    let (mut r0, mut r1) = (m.to_vec(), a.to_vec());
    trim(&mut r1);
    let (mut s0, mut s1): (Vec<BigRational>, Vec<BigRational>) = (Vec::new(), vec![BigRational::one()]);
    while !r1.is_empty() {
        let (q, r) = poly_divrem(&r0, &r1);
        let s = poly_sub(&s0, &poly_mul(&q, &s1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
    }
    // r0 = gcd, s0 * a ≡ r0 (mod m)
    if r0.len() != 1 {
        return None;
    }
    let c = r0[0].clone();
    Some(reduce_mod(s0.iter().map(|x| x / &c).collect(), m))
}

fn squarefree(m: &[BigRational]) -> bool {
    let deriv: Vec<BigRational> = m
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
        .collect();
    // gcd(m, m') must be constant
    let (mut a, mut b) = (m.to_vec(), deriv);
    trim(&mut b);
    while !b.is_empty() {
        let (_, r) = poly_divrem(&a, &b);
        a = std::mem::replace(&mut b, r);
    }
    a.len() == 1
}

impl Scalar {
    /// Sign of a rational scalar; `None` for irrational values.
    pub fn signum(&self) -> Option<i32> {
        self.as_rational().map(|r| {
            if r.is_zero() {
                0
            } else if r.is_positive() {
                1
            } else {
                -1
            }
        })
    }
}
