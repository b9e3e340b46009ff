//! Dense exact matrices and canonical subspaces over a [`Field`].
//!
//! Vectors are plain `Vec<F>` coordinate columns. A matrix acts on column
//! vectors, so column `k` of a linear map holds the image of basis vector `k`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Zero;

use crate::poly::Poly;
use crate::scalar::Field;

#[derive(Clone, PartialEq)]
pub struct Matrix<F> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

impl<F: fmt::Debug> fmt::Debug for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| format!("{:?}", self[(r, c)])).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl<F> std::ops::Index<(usize, usize)> for Matrix<F> {
    type Output = F;
    fn index(&self, (r, c): (usize, usize)) -> &F {
        &self.data[r * self.cols + c]
    }
}

impl<F> std::ops::IndexMut<(usize, usize)> for Matrix<F> {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut F {
        &mut self.data[r * self.cols + c]
    }
}

impl<F: Field> Matrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![F::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for k in 0..n {
            m[(k, k)] = F::one();
        }
        m
    }

    /// Panics if the rows have different lengths.
    pub fn from_rows(rows: Vec<Vec<F>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix rows");
        Self { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_columns(cols: &[Vec<F>]) -> Self {
        let c = cols.len();
        let r = cols.first().map_or(0, Vec::len);
        let mut m = Self::zeros(r, c);
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), r, "ragged matrix columns");
            for (i, v) in col.iter().enumerate() {
                m[(i, j)] = v.clone();
            }
        }
        m
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&v| F::from_i64(v)).collect()).collect())
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> F) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data }
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, r: usize) -> Vec<F> {
        self.data[r * self.cols..(r + 1) * self.cols].to_vec()
    }

    pub fn column(&self, c: usize) -> Vec<F> {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn rows_vec(&self) -> Vec<Vec<F>> {
        (0..self.rows).map(|r| self.row(r)).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].clone())
    }

    pub fn conj(&self) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(F::conj).collect() }
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> Matrix<G> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn scale(&self, s: &F) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| v.clone() * s.clone()).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_real(&self) -> bool {
        self.data.iter().all(Field::is_real)
    }

    pub fn trace(&self) -> F {
        (0..self.rows.min(self.cols)).fold(F::zero(), |acc, k| acc + self[(k, k)].clone())
    }

    pub fn mul_vec(&self, v: &[F]) -> Vec<F> {
        assert_eq!(v.len(), self.cols, "matrix-vector dimension mismatch");
        (0..self.rows)
            .map(|r| {
                (0..self.cols).fold(F::zero(), |acc, c| {
                    if v[c].is_zero() {
                        acc
                    } else {
                        acc + self[(r, c)].clone() * v[c].clone()
                    }
                })
            })
            .collect()
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matrix product dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(r, k)];
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = &other[(k, c)];
                    if !b.is_zero() {
                        let cur = std::mem::replace(&mut out[(r, c)], F::zero());
                        out[(r, c)] = cur + a.clone() * b.clone();
                    }
                }
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::identity(self.rows);
        for _ in 0..e {
            acc = acc.matmul(self);
        }
        acc
    }

    /// Row-major flattening, used when matrices are treated as vectors.
    pub fn flatten(&self) -> Vec<F> {
        self.data.clone()
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(p) = (row..m.rows).find(|&r| !m[(r, col)].is_zero()) else {
                continue;
            };
            m.swap_rows(row, p);
            let inv = F::one() / m[(row, col)].clone();
            for c in col..m.cols {
                let v = std::mem::replace(&mut m[(row, c)], F::zero());
                m[(row, c)] = v * inv.clone();
            }
            for r in 0..m.rows {
                if r == row || m[(r, col)].is_zero() {
                    continue;
                }
                let factor = m[(r, col)].clone();
                for c in col..m.cols {
                    if m[(row, c)].is_zero() {
                        continue;
                    }
                    let sub = factor.clone() * m[(row, c)].clone();
                    let v = std::mem::replace(&mut m[(r, c)], F::zero());
                    m[(r, c)] = v - sub;
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of `{v : M v = 0}`.
    pub fn nullspace(&self) -> Vec<Vec<F>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![F::zero(); self.cols];
                v[f] = F::one();
                for (row, &p) in pivots.iter().enumerate() {
                    v[p] = -r[(row, f)].clone();
                }
                v
            })
            .collect()
    }

    /// Determinant by Gaussian elimination over the field.
    pub fn det(&self) -> F {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let mut m = self.clone();
        let n = m.rows;
        let mut det = F::one();
        for col in 0..n {
            let Some(p) = (col..n).find(|&r| !m[(r, col)].is_zero()) else {
                return F::zero();
            };
            if p != col {
                m.swap_rows(p, col);
                det = -det;
            }
            let pivot = m[(col, col)].clone();
            det = det * pivot.clone();
            for r in col + 1..n {
                if m[(r, col)].is_zero() {
                    continue;
                }
                let factor = m[(r, col)].clone() / pivot.clone();
                for c in col..n {
                    let sub = factor.clone() * m[(col, c)].clone();
                    let v = std::mem::replace(&mut m[(r, c)], F::zero());
                    m[(r, c)] = v - sub;
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Option<Self> {
        assert!(self.is_square(), "inverse of a non-square matrix");
        let n = self.rows;
        let aug = Self::from_fn(n, 2 * n, |r, c| {
            if c < n {
                self[(r, c)].clone()
            } else if c - n == r {
                F::one()
            } else {
                F::zero()
            }
        });
        let (red, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        Some(Self::from_fn(n, n, |r, c| red[(r, c + n)].clone()))
    }

    /// Characteristic polynomial `det(tI - A)` by the Faddeev–LeVerrier recursion.
    pub fn char_poly(&self) -> Poly<F> {
        assert!(self.is_square(), "characteristic polynomial of a non-square matrix");
        let n = self.rows;
        let mut coeffs = vec![F::zero(); n + 1];
        coeffs[n] = F::one();
        let mut m = Self::zeros(n, n);
        for k in 1..=n {
            let mut next = self.matmul(&m);
            for d in 0..n {
                let v = std::mem::replace(&mut next[(d, d)], F::zero());
                next[(d, d)] = v + coeffs[n - k + 1].clone();
            }
            let am = self.matmul(&next);
            coeffs[n - k] = -(am.trace() / F::from_i64(k as i64));
            m = next;
        }
        Poly::new(coeffs)
    }

    /// Minimal polynomial (monic) from the first linear dependency among powers.
    pub fn min_poly(&self) -> Poly<F> {
        assert!(self.is_square(), "minimal polynomial of a non-square matrix");
        let n = self.rows;
        let mut powers = vec![Self::identity(n).flatten()];
        let mut cur = Self::identity(n);
        for _ in 1..=n {
            cur = cur.matmul(self);
            powers.push(cur.flatten());
            let ns = Self::from_columns(&powers).nullspace();
            if let Some(v) = ns.into_iter().next() {
                return Poly::new(v).monic();
            }
        }
        unreachable!("Cayley-Hamilton bounds the minimal polynomial degree by n")
    }

    /// Evaluates a polynomial at this matrix.
    pub fn eval_poly(&self, p: &Poly<F>) -> Self {
        let n = self.rows;
        let mut acc = Self::zeros(n, n);
        for c in p.coeffs().iter().rev() {
            acc = acc.matmul(self);
            for d in 0..n {
                let v = std::mem::replace(&mut acc[(d, d)], F::zero());
                acc[(d, d)] = v + c.clone();
            }
        }
        acc
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|r| (0..r).all(|c| self[(r, c)] == self[(c, r)]))
    }
}

impl<F: Field> Add for &Matrix<F> {
    type Output = Matrix<F>;
    fn add(self, rhs: Self) -> Matrix<F> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a.clone() + b.clone()).collect(),
        }
    }
}

impl<F: Field> Sub for &Matrix<F> {
    type Output = Matrix<F>;
    fn sub(self, rhs: Self) -> Matrix<F> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a.clone() - b.clone()).collect(),
        }
    }
}

impl<F: Field> Mul for &Matrix<F> {
    type Output = Matrix<F>;
    fn mul(self, rhs: Self) -> Matrix<F> {
        self.matmul(rhs)
    }
}

impl<F: Field> Neg for &Matrix<F> {
    type Output = Matrix<F>;
    fn neg(self) -> Matrix<F> {
        self.map(|v| -v.clone())
    }
}

pub fn zero_vec<F: Field>(n: usize) -> Vec<F> {
    vec![F::zero(); n]
}

pub fn unit_vec<F: Field>(n: usize, k: usize) -> Vec<F> {
    let mut v = zero_vec(n);
    v[k] = F::one();
    v
}

pub fn vec_add<F: Field>(a: &[F], b: &[F]) -> Vec<F> {
    a.iter().zip(b).map(|(x, y)| x.clone() + y.clone()).collect()
}

pub fn vec_sub<F: Field>(a: &[F], b: &[F]) -> Vec<F> {
    a.iter().zip(b).map(|(x, y)| x.clone() - y.clone()).collect()
}

pub fn vec_scale<F: Field>(a: &[F], s: &F) -> Vec<F> {
    a.iter().map(|x| x.clone() * s.clone()).collect()
}

pub fn vec_is_zero<F: Field>(a: &[F]) -> bool {
    a.iter().all(Zero::is_zero)
}

pub fn vec_conj<F: Field>(a: &[F]) -> Vec<F> {
    a.iter().map(F::conj).collect()
}

/// A linear subspace stored by the nonzero rows of its reduced row echelon
/// form, so equal subspaces compare equal.
#[derive(Clone, PartialEq)]
pub struct Subspace<F> {
    ambient_dim: usize,
    basis: Vec<Vec<F>>,
}

impl<F: Field> fmt::Debug for Subspace<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Subspace")
            .field("ambient_dim", &self.ambient_dim)
            .field("dim", &self.dim())
            .field("basis", &self.basis)
            .finish()
    }
}

impl<F: Field> Subspace<F> {
    pub fn zero(ambient_dim: usize) -> Self {
        Self { ambient_dim, basis: Vec::new() }
    }

    pub fn full(ambient_dim: usize) -> Self {
        Self::span(ambient_dim, (0..ambient_dim).map(|k| unit_vec(ambient_dim, k)))
    }

    /// Span of arbitrary (possibly dependent) vectors.
    pub fn span<I: IntoIterator<Item = Vec<F>>>(ambient_dim: usize, vectors: I) -> Self {
        let rows: Vec<Vec<F>> = vectors.into_iter().collect();
        if rows.is_empty() {
            return Self::zero(ambient_dim);
        }
        for r in &rows {
            assert_eq!(r.len(), ambient_dim, "vector length does not match ambient dimension");
        }
        let (red, pivots) = Matrix::from_rows(rows).rref();
        let basis = (0..pivots.len()).map(|r| red.row(r)).collect();
        Self { ambient_dim, basis }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Canonical (reduced echelon) basis.
    pub fn basis(&self) -> &[Vec<F>] {
        &self.basis
    }

    pub fn contains(&self, v: &[F]) -> bool {
        let mut rows = self.basis.clone();
        rows.push(v.to_vec());
        Matrix::from_rows(rows).rank() == self.dim()
    }

    pub fn is_subspace_of(&self, other: &Self) -> bool {
        self.basis.iter().all(|v| other.contains(v))
    }

    pub fn sum(&self, other: &Self) -> Self {
        Self::span(self.ambient_dim, self.basis.iter().chain(&other.basis).cloned())
    }

    pub fn intersection(&self, other: &Self) -> Self {
        // solve sum a_i u_i = sum b_j w_j
        if self.dim() == 0 || other.dim() == 0 {
            return Self::zero(self.ambient_dim);
        }
        let mut cols: Vec<Vec<F>> = self.basis.clone();
        cols.extend(other.basis.iter().map(|w| w.iter().map(|x| -x.clone()).collect()));
        let ns = Matrix::from_columns(&cols).nullspace();
        let vecs = ns.into_iter().map(|coef| {
            let mut v = zero_vec(self.ambient_dim);
            for (a, u) in coef.iter().zip(&self.basis) {
                v = vec_add(&v, &vec_scale(u, a));
            }
            v
        });
        Self::span(self.ambient_dim, vecs)
    }

    pub fn map(&self, m: &Matrix<F>) -> Self {
        Self::span(m.nrows(), self.basis.iter().map(|v| m.mul_vec(v)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, Rational};

    type M = Matrix<Rational>;

    #[test]
    fn rank_and_nullspace() {
        let m = M::from_i64_rows(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(m.rank(), 2);
        let ns = m.nullspace();
        assert_eq!(ns.len(), 1);
        assert!(vec_is_zero(&m.mul_vec(&ns[0])));
    }

    #[test]
    fn det_and_inverse() {
        let m = M::from_i64_rows(&[&[2, 1], &[1, 1]]);
        assert_eq!(m.det(), rat(1, 1));
        let inv = m.inverse().unwrap();
        assert_eq!(m.matmul(&inv), M::identity(2));
        assert!(M::from_i64_rows(&[&[1, 2], &[2, 4]]).inverse().is_none());
    }

    #[test]
    fn char_poly_matches_trace_det_in_dim_two() {
        let m = M::from_i64_rows(&[&[2, 1], &[1, 1]]);
        // t^2 - 3t + 1
        assert_eq!(m.char_poly(), Poly::from_i64(&[1, -3, 1]));
    }

    #[test]
    fn min_poly_detects_jordan_block() {
        let j = M::from_i64_rows(&[&[1, 1], &[0, 1]]);
        assert_eq!(j.min_poly(), Poly::from_i64(&[1, -2, 1]));
        let i = M::identity(3);
        assert_eq!(i.min_poly(), Poly::from_i64(&[-1, 1]));
    }

    #[test]
    fn subspace_canonical_equality() {
        let a = Subspace::span(3, vec![
            vec![rat(1, 1), rat(1, 1), rat(0, 1)],
            vec![rat(0, 1), rat(1, 1), rat(1, 1)],
        ]);
        let b = Subspace::span(3, vec![
            vec![rat(1, 1), rat(2, 1), rat(1, 1)],
            vec![rat(1, 1), rat(0, 1), rat(-1, 1)],
        ]);
        assert_eq!(a, b);
        let c = Subspace::span(3, vec![vec![rat(1, 1), rat(0, 1), rat(0, 1)]]);
        assert_eq!(a.intersection(&c).dim(), 0);
        assert_eq!(a.sum(&c).dim(), 3);
    }
}
