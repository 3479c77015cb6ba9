//! Dense matrices over [`Scalar`].
//!
//! Canonical subspace bases use Gauss–Jordan reduced row echelon form.
//! Ranks and determinants use fraction-free (Bareiss) elimination, which
//! never inverts a pivot; it serves as an independent route to the rank
//! reported by the RREF.

use std::fmt;

use crate::algebra::Scalar;
use crate::error::{structural, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

/// Result of reducing a matrix to reduced row echelon form.
#[derive(Clone, Debug)]
pub struct Rref {
    /// The nonzero rows of the RREF.
    pub matrix: Matrix,
    /// Pivot column of each row of `matrix`.
    pub pivots: Vec<usize>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Scalar::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Scalar::one());
        }
        m
    }

    /// Builds a matrix from rows; all rows must have length `cols`.
    pub fn from_rows(cols: usize, rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for r in rows {
            if r.len() != cols {
                return Err(structural(format!(
                    "row of length {} in a {cols}-column matrix",
                    r.len()
                )));
            }
            data.extend(r);
        }
        Ok(Self { rows: n, cols, data })
    }

    /// Convenience constructor from integer entries.
    pub fn from_ints(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|&x| Scalar::from_int(x)).collect())
            .collect();
        Self::from_rows(cols, rows).expect("rectangular integer matrix")
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn mul(&self, rhs: &Matrix) -> Result<Matrix> {
        if self.cols != rhs.rows {
            return Err(structural(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Matrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.get(i, l);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(l, j);
                    if !b.is_zero() {
                        let v = out.get(i, j) + &(a * b);
                        out.set(i, j, v);
                    }
                }
            }
        }
        Ok(out)
    }

    /// Matrix-vector product `self · v`.
    pub fn apply(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.cols, "vector length does not match column count");
        (0..self.rows)
            .map(|i| {
                let mut acc = Scalar::zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc = acc + a * b;
                    }
                }
                acc
            })
            .collect()
    }

    pub fn add(&self, rhs: &Matrix) -> Result<Matrix> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(structural("matrix shapes differ"));
        }
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect();
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn sub(&self, rhs: &Matrix) -> Result<Matrix> {
        self.add(&rhs.scale(&Scalar::from_int(-1)))
    }

    pub fn scale(&self, c: &Scalar) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * c).collect(),
        }
    }

    /// Stacks matrices vertically; all must share the column count `cols`.
    pub fn vstack(cols: usize, blocks: &[&Matrix]) -> Result<Matrix> {
        let mut data = Vec::new();
        let mut rows = 0;
        for b in blocks {
            if b.cols != cols {
                return Err(structural("vstack of matrices with different column counts"));
            }
            rows += b.rows;
            data.extend_from_slice(&b.data);
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Matrix {
        Matrix::from_fn(rows.len(), cols.len(), |i, j| self.get(rows[i], cols[j]).clone())
    }

    /// Gauss–Jordan reduction; zero rows are dropped.
    pub fn rref(&self) -> Rref {
        let mut rows: Vec<Vec<Scalar>> = self.row_vecs();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == rows.len() {
                break;
            }
            let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
                continue;
            };
            rows.swap(r, p);
            let inv = rows[r][c].inv();
            if !inv.is_one() {
                for x in rows[r][c..].iter_mut() {
                    if !x.is_zero() {
                        *x = &*x * &inv;
                    }
                }
            }
            let pivot_row = rows[r].clone();
            for (i, row) in rows.iter_mut().enumerate() {
                if i == r || row[c].is_zero() {
                    continue;
                }
                let f = row[c].clone();
                for (x, y) in row[c..].iter_mut().zip(&pivot_row[c..]) {
                    if !y.is_zero() {
                        *x = &*x - &(&f * y);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        rows.truncate(r);
        let matrix = Matrix::from_rows(self.cols, rows).expect("rectangular");
        Rref { matrix, pivots }
    }

    /// Rank by fraction-free elimination.
    pub fn rank(&self) -> usize {
        bareiss(self).0
    }

    /// Determinant by fraction-free elimination.
    pub fn determinant(&self) -> Result<Scalar> {
        if !self.is_square() {
            return Err(structural("determinant of a non-square matrix"));
        }
        let (rank, sign, last) = bareiss(self);
        if rank < self.rows {
            return Ok(Scalar::zero());
        }
        Ok(if sign < 0 { -last } else { last })
    }

    pub fn inverse(&self) -> Result<Matrix> {
        if !self.is_square() {
            return Err(structural("inverse of a non-square matrix"));
        }
        let n = self.rows;
        let aug = Matrix::from_fn(n, 2 * n, |i, j| {
            if j < n {
                self.get(i, j).clone()
            } else if j - n == i {
                Scalar::one()
            } else {
                Scalar::zero()
            }
        });
        let red = aug.rref();
        if red.pivots.len() < n || red.pivots[n - 1] >= n {
            return Err(structural("matrix is singular"));
        }
        let cols: Vec<usize> = (n..2 * n).collect();
        let rows: Vec<usize> = (0..n).collect();
        Ok(red.matrix.submatrix(&rows, &cols))
    }

    /// Basis of the right null space `{v : self · v = 0}`, as the rows of a
    /// matrix in reduced row echelon form.
    pub fn kernel(&self) -> Matrix {
        let red = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &red.pivots {
            is_pivot[p] = true;
        }
        let mut basis = Vec::new();
        for f in (0..self.cols).filter(|&j| !is_pivot[j]) {
            let mut v = vec![Scalar::zero(); self.cols];
            v[f] = Scalar::one();
            for (i, &p) in red.pivots.iter().enumerate() {
                let e = red.matrix.get(i, f);
                if !e.is_zero() {
                    v[p] = -e;
                }
            }
            basis.push(v);
        }
        Matrix::from_rows(self.cols, basis).expect("rectangular").rref().matrix
    }
}

/// Fraction-free row elimination. Returns (rank, permutation sign, last
/// pivot), where the last pivot equals the determinant for a nonsingular
/// square matrix up to the sign.
fn bareiss(m: &Matrix) -> (usize, i32, Scalar) {
    let mut a = m.row_vecs();
    let mut prev = Scalar::one();
    let mut sign = 1;
    let mut r = 0;
    for c in 0..m.cols {
        if r == a.len() {
            break;
        }
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        if p != r {
            a.swap(r, p);
            sign = -sign;
        }
        let pivot = a[r][c].clone();
        let (top, below) = a.split_at_mut(r + 1);
        let pivot_row = &top[r];
        for row in below {
            let f = row[c].clone();
            for (x, y) in row[c + 1..m.cols].iter_mut().zip(&pivot_row[c + 1..m.cols]) {
                let v = &(&pivot * &*x) - &(&f * y);
                *x = if prev.is_one() { v } else { &v / &prev };
            }
            row[c] = Scalar::zero();
        }
        prev = pivot;
        r += 1;
    }
    (r, sign, prev)
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            let parts: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            write!(f, "[{}]", parts.join(", "))?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rref_and_rank_agree() {
        let m = Matrix::from_ints(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        let r = m.rref();
        assert_eq!(r.pivots, vec![0, 1]);
        assert_eq!(m.rank(), 2);
        assert_eq!(r.matrix, Matrix::from_ints(&[&[1, 0, 1], &[0, 1, 1]]));
    }

    #[test]
    fn determinant_fraction_free() {
        let m = Matrix::from_ints(&[&[0, 1, 2], &[3, 4, 5], &[6, 7, 9]]);
        // 0(36-35) - 1(27-30) + 2(21-24) = 3 - 6 = -3
        assert_eq!(m.determinant().unwrap(), Scalar::from_int(-3));
        let s = Matrix::from_ints(&[&[1, 2], &[2, 4]]);
        assert_eq!(s.determinant().unwrap(), Scalar::zero());
    }

    #[test]
    fn inverse_roundtrip() {
        let m = Matrix::from_ints(&[&[2, 1], &[1, 1]]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv).unwrap(), Matrix::identity(2));
        assert!(Matrix::from_ints(&[&[1, 1], &[1, 1]]).inverse().is_err());
    }

    #[test]
    fn kernel_basis() {
        let m = Matrix::from_ints(&[&[1, 1, 0], &[0, 0, 1]]);
        let k = m.kernel();
        assert_eq!(k, Matrix::from_ints(&[&[1, -1, 0]]));
        assert!(m.mul(&k.transpose()).unwrap().is_zero());
        assert_eq!(Matrix::zeros(0, 3).kernel(), Matrix::identity(3));
    }
}
