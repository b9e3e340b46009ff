//! Integer holonomy matrices and lattices `Δ ⋊ Λ` in the 3-dimensional
//! complex solvable groups.
//!
//! Every discrete verdict (real roots, unit-modulus roots, semisimplicity,
//! commutation) is exact. Only eigenvectors are floating point, and each
//! spec records its residuals and independence margin.

use std::fmt;

use nalgebra::{Complex, DMatrix, DVector, Schur};
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::cohomology::{CohomologyError, HolonomyAction};
use crate::linalg::Matrix;
use crate::poly::{
    all_roots_real, count_real_roots, has_unit_modulus_root, palindromic_quartic_unit_root, Poly,
};
use crate::scalar::Rational;

type C64 = Complex<f64>;

/// Bound on eigen-relation residuals, with eigenvectors scaled to max-abs 1.
pub const RESIDUAL_TOLERANCE: f64 = 1e-9;
/// Lower bound on `|det|` of the real coordinates of the `Δ` generators.
pub const INDEPENDENCE_MARGIN: f64 = 1e-6;
/// Largest accepted bound for [`search_palindromic`].
pub const MAX_SEARCH_BOUND: i64 = 50;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LatticeError {
    #[error("matrix must be square of size 2 or 4, got {0}x{1}")]
    BadShape(usize, usize),
    #[error("matrix sizes differ")]
    SizeMismatch,
    #[error("expected a {0}x{0} matrix")]
    WrongSize(usize),
    #[error("polynomial is not squarefree")]
    NotSquarefree,
    #[error("determinant must be {expected}, got {got}")]
    BadDeterminant { expected: &'static str, got: i64 },
    #[error("characteristic polynomial has no non-real root")]
    NoNonRealEigenvalue,
    #[error("eigenvalues do not pair as γ, γ^-1 away from the unit circle")]
    NotReciprocal,
    #[error("holonomy is not semisimple")]
    NotSemisimple,
    #[error("holonomy matrices do not commute")]
    NotCommuting,
    #[error("Δ generators are R-linearly dependent (|det| = {0:e})")]
    DegenerateEigenvectors(f64),
    #[error("λ and μ are R-linearly dependent")]
    DependentLambda,
    #[error("|trace| must exceed 2, got {0}")]
    TraceTooSmall(i64),
    #[error("ε must be non-real")]
    RealEpsilon,
    #[error("search bound {0} exceeds {MAX_SEARCH_BOUND}")]
    BoundTooLarge(i64),
    #[error("eigen-relation residual {0:e} exceeds tolerance")]
    ResidualTooLarge(f64),
    #[error("give exactly one of B or k")]
    AmbiguousHolonomy,
    #[error(transparent)]
    Cohomology(#[from] CohomologyError),
}

type Result<T> = std::result::Result<T, LatticeError>;

/// Square integer matrix of size 2 or 4.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct IntMatrix {
    rows: Vec<Vec<i64>>,
}

impl IntMatrix {
    pub fn new(rows: Vec<Vec<i64>>) -> Result<Self> {
        let n = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != n) {
            return Err(LatticeError::BadShape(n, bad.len()));
        }
        if n != 2 && n != 4 {
            return Err(LatticeError::BadShape(n, n));
        }
        Ok(Self { rows })
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::new((0..n).map(|r| (0..n).map(|c| i64::from(r == c)).collect()).collect())
    }

    pub fn scalar(n: usize, s: i64) -> Result<Self> {
        Self::new((0..n).map(|r| (0..n).map(|c| if r == c { s } else { 0 }).collect()).collect())
    }

    /// Companion matrix of `t^4 + p t^3 + q t^2 + p t + 1`.
    pub fn palindromic_companion(p: i64, q: i64) -> Self {
        Self {
            rows: vec![vec![0, 1, 0, 0], vec![0, 0, 1, 0], vec![0, 0, 0, 1], vec![-1, -p, -q, -p]],
        }
    }

    /// `A ⊕ A`.
    pub fn block_double(&self) -> Result<Self> {
        let n = self.size();
        let m = 2 * n;
        Self::new(
            (0..m)
                .map(|r| (0..m).map(|c| if r / n == c / n { self.rows[r % n][c % n] } else { 0 }).collect())
                .collect(),
        )
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.rows
    }

    pub fn to_rational(&self) -> Matrix<Rational> {
        let n = self.size();
        Matrix::from_fn(n, n, |r, c| Rational::from_integer(self.rows[r][c].into()))
    }

    fn to_complex(&self) -> DMatrix<C64> {
        let n = self.size();
        DMatrix::from_fn(n, n, |r, c| C64::new(self.rows[r][c] as f64, 0.0))
    }

    fn to_f64(&self) -> DMatrix<f64> {
        let n = self.size();
        DMatrix::from_fn(n, n, |r, c| self.rows[r][c] as f64)
    }

    pub fn det(&self) -> i64 {
        let d = self.to_rational().det();
        d.to_integer().try_into().expect("integer determinant fits i64")
    }

    pub fn trace(&self) -> i64 {
        (0..self.size()).map(|k| self.rows[k][k]).sum()
    }
}

/// Integer polynomial, ascending coefficients, nonzero leading term.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IntPolynomial {
    coeffs: Vec<i64>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<i64>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn to_poly(&self) -> Poly<Rational> {
        Poly::new(self.coeffs.iter().map(|&c| Rational::from_integer(c.into())).collect())
    }

    fn from_poly(p: &Poly<Rational>) -> Self {
        Self::new(
            p.coeffs()
                .iter()
                .map(|c| {
                    assert!(c.is_integer(), "integer matrix has integer characteristic polynomial");
                    c.to_integer().try_into().expect("coefficient fits i64")
                })
                .collect(),
        )
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let sign = if c < 0 { "-" } else { "+" };
            if first {
                if c < 0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.abs();
            match (k, a) {
                (0, _) => write!(f, "{a}")?,
                (1, 1) => write!(f, "t")?,
                (1, _) => write!(f, "{a}t")?,
                (_, 1) => write!(f, "t^{k}")?,
                _ => write!(f, "{a}t^{k}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

fn poly_det(m: &[Vec<Poly<Rational>>]) -> Poly<Rational> {
    let n = m.len();
    if n == 1 {
        return m[0][0].clone();
    }
    let mut total = Poly::zero();
    for c in 0..n {
        if m[0][c].is_zero() {
            continue;
        }
        let minor: Vec<Vec<Poly<Rational>>> =
            m[1..].iter().map(|row| row.iter().enumerate().filter(|&(k, _)| k != c).map(|(_, p)| p.clone()).collect()).collect();
        let term = m[0][c].mul(&poly_det(&minor));
        total = if c % 2 == 0 { total.add(&term) } else { total.sub(&term) };
    }
    total
}

/// `det(tI - A)` by cofactor expansion.
pub fn char_poly(a: &IntMatrix) -> IntPolynomial {
    let n = a.size();
    let entries: Vec<Vec<Poly<Rational>>> = (0..n)
        .map(|r| {
            (0..n)
                .map(|c| {
                    let v = Rational::from_integer((-a.rows[r][c]).into());
                    if r == c {
                        Poly::new(vec![v, Rational::one()])
                    } else {
                        Poly::constant(v)
                    }
                })
                .collect()
        })
        .collect();
    IntPolynomial::from_poly(&poly_det(&entries))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct EigenReport {
    pub real_roots: usize,
    pub all_real: bool,
    pub unit_modulus_root: bool,
}

/// Real-root count and unit-circle test for a squarefree polynomial.
pub fn classify_eigen(p: &IntPolynomial) -> Result<EigenReport> {
    let poly = p.to_poly();
    if poly.degree().is_none() || !poly.is_squarefree() {
        return Err(LatticeError::NotSquarefree);
    }
    let real_roots = count_real_roots(&poly);
    let c = p.coeffs();
    let unit_modulus_root = if c.len() == 5 && c[4] == 1 && poly.is_palindromic() {
        palindromic_quartic_unit_root(&Rational::from_integer(c[3].into()), &Rational::from_integer(c[2].into()))
    } else {
        has_unit_modulus_root(&poly)
    };
    Ok(EigenReport { real_roots, all_real: Some(real_roots) == poly.degree(), unit_modulus_root })
}

/// `AB = BA` and both minimal polynomials squarefree.
pub fn semisimple_commuting_check(a: &IntMatrix, b: &IntMatrix) -> Result<bool> {
    if a.size() != b.size() {
        return Err(LatticeError::SizeMismatch);
    }
    let (ra, rb) = (a.to_rational(), b.to_rational());
    Ok(ra.matmul(&rb) == rb.matmul(&ra) && ra.min_poly().is_squarefree() && rb.min_poly().is_squarefree())
}

/// Numeric complex number, serialized as `[re, im]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Complex2(pub f64, pub f64);

impl From<C64> for Complex2 {
    fn from(z: C64) -> Self {
        Complex2(z.re, z.im)
    }
}

impl From<Complex2> for C64 {
    fn from(z: Complex2) -> Self {
        C64::new(z.0, z.1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LatticeKind {
    Nilpotent,
    NonNilpotent,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Classification {
    #[serde(rename = "3a")]
    ThreeA,
    #[serde(rename = "3b")]
    ThreeB,
    #[serde(rename = "n/a")]
    NotApplicable,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tolerances {
    pub residual: f64,
    pub independence: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { residual: RESIDUAL_TOLERANCE, independence: INDEPENDENCE_MARGIN }
    }
}

/// A lattice `Γ = Δ ⋊ Λ` with the data that certifies it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LatticeSpec {
    pub kind: LatticeKind,
    pub a: IntMatrix,
    pub b: Option<IntMatrix>,
    pub k: Option<i64>,
    pub char_poly: String,
    /// Eigenvalue of `A` on `β` (and its inverse on `α`); `λ = log γ`.
    pub gamma: Complex2,
    /// Eigenvalue of `B` on `β`, when `B` is present.
    pub delta: Option<Complex2>,
    pub alpha: Vec<Complex2>,
    pub beta: Vec<Complex2>,
    /// Generators of `Δ ⊂ C^2`.
    pub delta_generators: Vec<[Complex2; 2]>,
    /// Generators of `Λ ⊂ C`.
    pub lambda_generators: Vec<Complex2>,
    pub max_residual: f64,
    pub independence_det: f64,
    pub tolerances: Tolerances,
    pub classification: Classification,
}

impl LatticeSpec {
    /// Holonomy on the real span of `Δ`, as used by the `h^1` formula.
    pub fn holonomy(&self) -> Result<HolonomyAction> {
        let mut gens = vec![self.a.to_rational()];
        if let Some(b) = &self.b {
            gens.push(b.to_rational());
        }
        Ok(HolonomyAction::new(gens)?)
    }
}

/// Eigenvalues via a bounded Schur iteration. Francis shifts can stall on
/// permutation-like matrices, so a failed attempt is retried after a fixed
/// non-orthogonal similarity.
fn eigenvalues(m: &DMatrix<f64>) -> Vec<C64> {
    let n = m.nrows();
    if let Some(s) = Schur::try_new(m.clone(), 1e-14, 10_000) {
        return s.complex_eigenvalues().iter().copied().collect();
    }
    let p = DMatrix::from_fn(n, n, |r, c| match c.cmp(&r) {
        std::cmp::Ordering::Equal => 1.0,
        std::cmp::Ordering::Greater => 0.3 + 0.1 * (r + c) as f64,
        std::cmp::Ordering::Less => 0.0,
    });
    let p_inv = p.clone().try_inverse().expect("unit upper triangular");
    Schur::try_new(p_inv * m * p, 1e-14, 100_000)
        .map(|s| s.complex_eigenvalues().iter().copied().collect())
        .expect("Schur iteration converges after similarity")
}

fn max_abs(v: &DVector<C64>) -> f64 {
    v.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn normalize(v: DVector<C64>) -> DVector<C64> {
    let pivot = v.iter().copied().max_by(|x, y| x.norm().total_cmp(&y.norm())).unwrap_or(C64::new(1.0, 0.0));
    v.map(|z| z / pivot)
}

fn residual(m: &DMatrix<C64>, v: &DVector<C64>, ev: C64) -> f64 {
    max_abs(&(m * v - v * ev))
}

/// Right null vectors of `m` (columns), singular values below `tol` relative.
fn complex_null_space(m: &DMatrix<C64>) -> Vec<DVector<C64>> {
    let svd = m.clone().svd(false, true);
    let v_t = svd.v_t.expect("requested V^T");
    let smax = svd.singular_values.iter().copied().fold(0.0, f64::max).max(1.0);
    let n = m.ncols();
    svd.singular_values
        .iter()
        .enumerate()
        .filter(|(_, &s)| s <= 1e-8 * smax)
        .map(|(k, _)| DVector::from_fn(n, |c, _| v_t[(k, c)].conj()))
        .collect()
}

fn real_null_space(m: &DMatrix<f64>) -> Vec<DVector<f64>> {
    let svd = m.clone().svd(false, true);
    let v_t = svd.v_t.expect("requested V^T");
    let smax = svd.singular_values.iter().copied().fold(0.0, f64::max).max(1.0);
    let n = m.ncols();
    svd.singular_values
        .iter()
        .enumerate()
        .filter(|(_, &s)| s <= 1e-8 * smax)
        .map(|(k, _)| DVector::from_fn(n, |c, _| v_t[(k, c)]))
        .collect()
}

fn stack(a: &DMatrix<C64>, b: &DMatrix<C64>) -> DMatrix<C64> {
    let n = a.ncols();
    DMatrix::from_fn(a.nrows() + b.nrows(), n, |r, c| if r < a.nrows() { a[(r, c)] } else { b[(r - a.nrows(), c)] })
}

fn shifted(m: &DMatrix<C64>, ev: C64) -> DMatrix<C64> {
    m - DMatrix::from_diagonal_element(m.nrows(), m.ncols(), ev)
}

/// A joint eigenvector for `(A, μ)` and `(B, ν)`; real joint eigenspaces of
/// dimension at least 2 yield the non-real vector `v_1 + i v_2`.
fn joint_eigenvector(a: &DMatrix<C64>, mu: C64, b: &DMatrix<C64>, nu: C64) -> Option<DVector<C64>> {
    let stacked = stack(&shifted(a, mu), &shifted(b, nu));
    let real = mu.im.abs() < 1e-12 && nu.im.abs() < 1e-12 && a.iter().chain(b.iter()).all(|z| z.im == 0.0);
    if real {
        let re = stacked.map(|z| z.re);
        let basis = real_null_space(&re);
        match basis.len() {
            0 => None,
            1 => Some(basis[0].map(|x| C64::new(x, 0.0))),
            _ => Some(DVector::from_fn(basis[0].len(), |r, _| C64::new(basis[0][r], basis[1][r]))),
        }
    } else {
        complex_null_space(&stacked).into_iter().next()
    }
}

fn refine_eigenvalue(m: &DMatrix<C64>, v: &DVector<C64>) -> C64 {
    let num = v.dotc(&(m * v));
    let den = v.dotc(v);
    num / den
}

fn log_principal(z: C64) -> C64 {
    C64::new(z.norm().ln(), z.im.atan2(z.re))
}

fn real_coordinates(gens: &[[C64; 2]]) -> DMatrix<f64> {
    DMatrix::from_fn(4, gens.len(), |r, c| {
        let z = gens[c][r / 2];
        if r % 2 == 0 {
            z.re
        } else {
            z.im
        }
    })
}

fn independence_det(gens: &[[C64; 2]]) -> f64 {
    real_coordinates(gens).determinant().abs()
}

fn lambda_independent(l: C64, m: C64, margin: f64) -> bool {
    (l.re * m.im - l.im * m.re).abs() > margin
}

/// Nilpotent-type lattice from `A ∈ GL(2, Z)` with non-real eigenvalue `λ`
/// and arbitrary `β`.
///
/// `Δ` is generated by `(α_1, β_1), (α_2, β_2), (0, α_1), (0, α_2)` with
/// `Aα = λα`, and `Λ = ⟨1, λ⟩`.
pub fn build_lattice_nilpotent(a: &IntMatrix, beta: [C64; 2]) -> Result<LatticeSpec> {
    build_lattice_nilpotent_with(a, beta, &Tolerances::default())
}

pub fn build_lattice_nilpotent_with(a: &IntMatrix, beta: [C64; 2], tol: &Tolerances) -> Result<LatticeSpec> {
    if a.size() != 2 {
        return Err(LatticeError::WrongSize(2));
    }
    let det = a.det();
    if det.abs() != 1 {
        return Err(LatticeError::BadDeterminant { expected: "±1", got: det });
    }
    let cp = char_poly(a);
    if count_real_roots(&cp.to_poly()) > 0 || cp.to_poly().eval(&Rational::zero()).is_zero() {
        return Err(LatticeError::NoNonRealEigenvalue);
    }
    let (tr, d) = (a.trace() as f64, det as f64);
    let disc = tr * tr - 4.0 * d;
    let lambda = C64::new(tr / 2.0, (-disc).sqrt() / 2.0);
    let r = &a.rows;
    let alpha = if r[0][1] != 0 {
        DVector::from_vec(vec![C64::new(r[0][1] as f64, 0.0), lambda - r[0][0] as f64])
    } else {
        DVector::from_vec(vec![lambda - r[1][1] as f64, C64::new(r[1][0] as f64, 0.0)])
    };
    let alpha = normalize(alpha);
    let res = residual(&a.to_complex(), &alpha, lambda);
    if res > tol.residual {
        return Err(LatticeError::ResidualTooLarge(res));
    }
    let zero = C64::new(0.0, 0.0);
    let gens = vec![[alpha[0], beta[0]], [alpha[1], beta[1]], [zero, alpha[0]], [zero, alpha[1]]];
    let det_gens = independence_det(&gens);
    if det_gens <= tol.independence {
        return Err(LatticeError::DegenerateEigenvectors(det_gens));
    }
    Ok(LatticeSpec {
        kind: LatticeKind::Nilpotent,
        a: a.clone(),
        b: None,
        k: None,
        char_poly: cp.to_string(),
        gamma: lambda.into(),
        delta: None,
        alpha: alpha.iter().map(|&z| z.into()).collect(),
        beta: beta.iter().map(|&z| z.into()).collect(),
        delta_generators: gens.iter().map(|g| [g[0].into(), g[1].into()]).collect(),
        lambda_generators: vec![Complex2(1.0, 0.0), lambda.into()],
        max_residual: res,
        independence_det: det_gens,
        tolerances: *tol,
        classification: Classification::NotApplicable,
    })
}

/// The Iwasawa lattice: `λ = i`, `Δ = Z[i]^2` taken directly.
pub fn iwasawa_lattice() -> LatticeSpec {
    let one = C64::new(1.0, 0.0);
    let i = C64::new(0.0, 1.0);
    let zero = C64::new(0.0, 0.0);
    let gens = vec![[one, zero], [i, zero], [zero, one], [zero, i]];
    LatticeSpec {
        kind: LatticeKind::Nilpotent,
        a: IntMatrix { rows: vec![vec![0, -1], vec![1, 0]] },
        b: None,
        k: None,
        char_poly: "t^2 + 1".into(),
        gamma: i.into(),
        delta: None,
        alpha: vec![zero.into(), zero.into()],
        beta: vec![one.into(), i.into()],
        independence_det: independence_det(&gens),
        delta_generators: gens.iter().map(|g| [g[0].into(), g[1].into()]).collect(),
        lambda_generators: vec![one.into(), i.into()],
        max_residual: 0.0,
        tolerances: Tolerances::default(),
        classification: Classification::NotApplicable,
    }
}

/// Second holonomy generator: an explicit `B`, or `(-1)^k I` with `μ = kπi`.
#[derive(Debug, Clone, PartialEq)]
pub enum SecondHolonomy {
    Matrix(IntMatrix),
    Phase(i64),
}

fn check_sl(m: &IntMatrix, size: usize) -> Result<()> {
    if m.size() != size {
        return Err(LatticeError::WrongSize(size));
    }
    let det = m.det();
    if det != 1 {
        return Err(LatticeError::BadDeterminant { expected: "1", got: det });
    }
    Ok(())
}

fn sort_key(z: &C64) -> (i64, i64) {
    ((z.re * 1e9).round() as i64, (z.im * 1e9).round() as i64)
}

/// Non-nilpotent-type lattice from `A ∈ SL(4, Z)` and a second generator.
///
/// `α` and `β` satisfy `Aα = γ^{-1}α`, `Aβ = γβ`, `Bα = δ^{-1}α`,
/// `Bβ = δβ`, where `|γ| > 1` (and `Im γ > 0` when `γ` is non-real).
pub fn build_lattice_nonnilpotent(a: &IntMatrix, second: &SecondHolonomy) -> Result<LatticeSpec> {
    build_lattice_nonnilpotent_with(a, second, &Tolerances::default())
}

pub fn build_lattice_nonnilpotent_with(a: &IntMatrix, second: &SecondHolonomy, tol: &Tolerances) -> Result<LatticeSpec> {
    check_sl(a, 4)?;
    let cp = char_poly(a);
    let poly = cp.to_poly();
    if !poly.is_palindromic() || has_unit_modulus_root(&poly) {
        return Err(LatticeError::NotReciprocal);
    }
    let (b, k) = match second {
        SecondHolonomy::Matrix(b) => {
            check_sl(b, 4)?;
            (b.clone(), None)
        }
        SecondHolonomy::Phase(k) => (IntMatrix::scalar(4, if k % 2 == 0 { 1 } else { -1 })?, Some(*k)),
    };
    let (ra, rb) = (a.to_rational(), b.to_rational());
    if !ra.min_poly().is_squarefree() || !rb.min_poly().is_squarefree() {
        return Err(LatticeError::NotSemisimple);
    }
    if ra.matmul(&rb) != rb.matmul(&ra) {
        return Err(LatticeError::NotCommuting);
    }

    let (ac, bc) = (a.to_complex(), b.to_complex());
    let gamma = eigenvalues(&a.to_f64())
        .into_iter()
        .filter(|z| z.norm() > 1.0 && z.im > -1e-12)
        .max_by(|x, y| sort_key(x).cmp(&sort_key(y)))
        .ok_or(LatticeError::NotReciprocal)?;
    let gamma = if gamma.im.abs() < 1e-12 { C64::new(gamma.re, 0.0) } else { gamma };
    let mut b_eigs = eigenvalues(&b.to_f64());
    b_eigs.sort_by_key(sort_key);
    b_eigs.dedup_by(|x, y| (*x - *y).norm() < 1e-9);

    let mut best: Option<(DVector<C64>, DVector<C64>, f64)> = None;
    for nu in b_eigs {
        let nu = if nu.im.abs() < 1e-12 { C64::new(nu.re, 0.0) } else { nu };
        let (Some(al), Some(be)) = (
            joint_eigenvector(&ac, gamma.inv(), &bc, nu),
            joint_eigenvector(&ac, gamma, &bc, nu.inv()),
        ) else {
            continue;
        };
        let (al, be) = (normalize(al), normalize(be));
        let gens: Vec<[C64; 2]> = (0..4).map(|i| [al[i], be[i]]).collect();
        let d = independence_det(&gens);
        if best.as_ref().is_none_or(|(_, _, bd)| d > *bd) {
            best = Some((al, be, d));
        }
    }
    let Some((alpha, beta, det_gens)) = best else {
        return Err(LatticeError::DegenerateEigenvectors(0.0));
    };
    if det_gens <= tol.independence {
        return Err(LatticeError::DegenerateEigenvectors(det_gens));
    }
    let gamma = refine_eigenvalue(&ac, &beta);
    let delta = refine_eigenvalue(&bc, &beta);
    let max_residual = [
        residual(&ac, &alpha, gamma.inv()),
        residual(&ac, &beta, gamma),
        residual(&bc, &alpha, delta.inv()),
        residual(&bc, &beta, delta),
    ]
    .into_iter()
    .fold(0.0, f64::max);
    if max_residual > tol.residual {
        return Err(LatticeError::ResidualTooLarge(max_residual));
    }
    let lambda = log_principal(gamma);
    let mu = match k {
        Some(k) => C64::new(0.0, k as f64 * std::f64::consts::PI),
        None => log_principal(delta),
    };
    if !lambda_independent(lambda, mu, tol.independence) {
        return Err(LatticeError::DependentLambda);
    }
    let exact_real = all_roots_real(&poly) && all_roots_real(&b.to_rational().char_poly());
    let gens: Vec<[C64; 2]> = (0..4).map(|i| [alpha[i], beta[i]]).collect();
    Ok(LatticeSpec {
        kind: LatticeKind::NonNilpotent,
        a: a.clone(),
        b: Some(b),
        k,
        char_poly: cp.to_string(),
        gamma: gamma.into(),
        delta: Some(delta.into()),
        alpha: alpha.iter().map(|&z| z.into()).collect(),
        beta: beta.iter().map(|&z| z.into()).collect(),
        delta_generators: gens.iter().map(|g| [g[0].into(), g[1].into()]).collect(),
        lambda_generators: vec![lambda.into(), mu.into()],
        max_residual,
        independence_det: det_gens,
        tolerances: *tol,
        classification: if exact_real { Classification::ThreeA } else { Classification::ThreeB },
    })
}

/// Lattice from `A ∈ SL(2, Z)` with real eigenvalues, using the non-real
/// eigenvectors `(a_1, a_2, a_1 ε, a_2 ε)` of `A ⊕ A`, `ε = i·eps_im`.
pub fn nakamura_lattice(a2: &IntMatrix, eps_im: &Rational, k: i64) -> Result<LatticeSpec> {
    nakamura_lattice_with(a2, eps_im, k, &Tolerances::default())
}

pub fn nakamura_lattice_with(a2: &IntMatrix, eps_im: &Rational, k: i64, tol: &Tolerances) -> Result<LatticeSpec> {
    check_sl(a2, 2)?;
    let tr = a2.trace();
    if tr.abs() <= 2 {
        return Err(LatticeError::TraceTooSmall(tr));
    }
    if eps_im.is_zero() {
        return Err(LatticeError::RealEpsilon);
    }
    let eps = C64::new(0.0, crate::scalar::rational_to_f64(eps_im));
    let t = tr as f64;
    let root = (t * t - 4.0).sqrt();
    let gamma = if t > 0.0 { (t + root) / 2.0 } else { (t - root) / 2.0 };
    let r = &a2.rows;
    let eigvec = |ev: f64| -> [f64; 2] {
        let v = if r[0][1] != 0 {
            [r[0][1] as f64, ev - r[0][0] as f64]
        } else {
            [ev - r[1][1] as f64, r[1][0] as f64]
        };
        let m = v[0].abs().max(v[1].abs());
        [v[0] / m, v[1] / m]
    };
    let (av, bv) = (eigvec(1.0 / gamma), eigvec(gamma));
    let lift = |v: [f64; 2]| {
        DVector::from_vec(vec![C64::new(v[0], 0.0), C64::new(v[1], 0.0), eps * v[0], eps * v[1]])
    };
    let (alpha, beta) = (lift(av), lift(bv));
    let a4 = a2.block_double()?;
    let b = IntMatrix::scalar(4, if k % 2 == 0 { 1 } else { -1 })?;
    let (ac, bc) = (a4.to_complex(), b.to_complex());
    let g = C64::new(gamma, 0.0);
    let delta = C64::new(if k % 2 == 0 { 1.0 } else { -1.0 }, 0.0);
    let max_residual = [
        residual(&ac, &alpha, g.inv()),
        residual(&ac, &beta, g),
        residual(&bc, &alpha, delta.inv()),
        residual(&bc, &beta, delta),
    ]
    .into_iter()
    .fold(0.0, f64::max);
    if max_residual > tol.residual {
        return Err(LatticeError::ResidualTooLarge(max_residual));
    }
    let gens: Vec<[C64; 2]> = (0..4).map(|i| [alpha[i], beta[i]]).collect();
    let det_gens = independence_det(&gens);
    if det_gens <= tol.independence {
        return Err(LatticeError::DegenerateEigenvectors(det_gens));
    }
    let lambda = log_principal(g);
    let mu = C64::new(0.0, k as f64 * std::f64::consts::PI);
    if !lambda_independent(lambda, mu, tol.independence) {
        return Err(LatticeError::DependentLambda);
    }
    Ok(LatticeSpec {
        kind: LatticeKind::NonNilpotent,
        char_poly: char_poly(&a4).to_string(),
        a: a4,
        b: Some(b),
        k: Some(k),
        gamma: g.into(),
        delta: Some(delta.into()),
        alpha: alpha.iter().map(|&z| z.into()).collect(),
        beta: beta.iter().map(|&z| z.into()).collect(),
        delta_generators: gens.iter().map(|g| [g[0].into(), g[1].into()]).collect(),
        lambda_generators: vec![lambda.into(), mu.into()],
        max_residual,
        independence_det: det_gens,
        tolerances: *tol,
        classification: Classification::ThreeA,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VerificationReport {
    pub max_residual: f64,
    pub independence_det: f64,
    pub ok: bool,
}

/// Recomputes residuals and independence from the stored data alone.
pub fn verify_lattice_spec(spec: &LatticeSpec) -> VerificationReport {
    let to_vec = |v: &[Complex2]| DVector::from_iterator(v.len(), v.iter().map(|&z| C64::from(z)));
    let (alpha, beta) = (to_vec(&spec.alpha), to_vec(&spec.beta));
    let gamma = C64::from(spec.gamma);
    let ac = spec.a.to_complex();
    let mut residuals = Vec::new();
    match spec.kind {
        LatticeKind::Nilpotent => {
            if alpha.iter().any(|z| z.norm() > 0.0) {
                residuals.push(residual(&ac, &alpha, gamma));
            }
        }
        LatticeKind::NonNilpotent => {
            residuals.push(residual(&ac, &alpha, gamma.inv()));
            residuals.push(residual(&ac, &beta, gamma));
            if let (Some(b), Some(delta)) = (&spec.b, spec.delta) {
                let (bc, delta) = (b.to_complex(), C64::from(delta));
                residuals.push(residual(&bc, &alpha, delta.inv()));
                residuals.push(residual(&bc, &beta, delta));
            }
        }
    }
    let max_residual = residuals.into_iter().fold(0.0, f64::max);
    let gens: Vec<[C64; 2]> = spec.delta_generators.iter().map(|g| [g[0].into(), g[1].into()]).collect();
    let det = independence_det(&gens);
    VerificationReport {
        max_residual,
        independence_det: det,
        ok: max_residual <= spec.tolerances.residual && det > spec.tolerances.independence,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchClass {
    #[serde(rename = "3a")]
    ThreeA,
    #[serde(rename = "3b")]
    ThreeB,
    Excluded,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PalindromicHit {
    pub p: i64,
    pub q: i64,
    pub polynomial: String,
    pub companion: IntMatrix,
    pub classification: SearchClass,
    pub reason: Option<String>,
}

fn classify_palindromic(p: i64, q: i64) -> PalindromicHit {
    let poly = IntPolynomial::new(vec![1, p, q, p, 1]);
    let (classification, reason) = match classify_eigen(&poly) {
        Err(_) => (SearchClass::Excluded, Some("not squarefree")),
        Ok(r) if r.unit_modulus_root => (SearchClass::Excluded, Some("unit-modulus root")),
        Ok(r) if r.real_roots == 4 => (SearchClass::ThreeA, None),
        Ok(r) if r.real_roots == 0 => (SearchClass::ThreeB, None),
        Ok(_) => (SearchClass::Excluded, Some("mixed real and non-real roots")),
    };
    PalindromicHit {
        p,
        q,
        polynomial: poly.to_string(),
        companion: IntMatrix::palindromic_companion(p, q),
        classification,
        reason: reason.map(str::to_string),
    }
}

/// All `t^4 + p t^3 + q t^2 + p t + 1` with `|p|, |q| <= bound`, ordered by `(p, q)`.
pub fn search_palindromic(bound: i64) -> Result<Vec<PalindromicHit>> {
    if !(0..=MAX_SEARCH_BOUND).contains(&bound) {
        return Err(LatticeError::BoundTooLarge(bound));
    }
    let pairs: Vec<(i64, i64)> = (-bound..=bound).flat_map(|p| (-bound..=bound).map(move |q| (p, q))).collect();
    Ok(pairs.par_iter().map(|&(p, q)| classify_palindromic(p, q)).collect())
}

/// Floating-point root data for cross-checking the exact classification.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct NumericRoots {
    pub real_roots: usize,
    pub unit_modulus_root: bool,
}

/// Roots of a monic integer polynomial as companion-matrix eigenvalues.
pub fn numeric_roots(p: &IntPolynomial, tol: f64) -> NumericRoots {
    let c = p.coeffs();
    let n = c.len() - 1;
    let lead = c[n] as f64;
    let comp = DMatrix::from_fn(n, n, |r, col| {
        if r + 1 < n {
            if col == r + 1 {
                1.0
            } else {
                0.0
            }
        } else {
            -(c[col] as f64) / lead
        }
    });
    let roots = eigenvalues(&comp);
    NumericRoots {
        real_roots: roots.iter().filter(|z| z.im.abs() < tol).count(),
        unit_modulus_root: roots.iter().any(|z| (z.norm() - 1.0).abs() < tol),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_display() {
        assert_eq!(IntPolynomial::new(vec![1, -1, 3, -1, 1]).to_string(), "t^4 - t^3 + 3t^2 - t + 1");
        assert_eq!(IntPolynomial::new(vec![1, -3, 1]).to_string(), "t^2 - 3t + 1");
        assert_eq!(IntPolynomial::new(vec![0]).to_string(), "0");
    }

    #[test]
    fn shape_checks() {
        assert!(matches!(IntMatrix::new(vec![vec![1]]), Err(LatticeError::BadShape(1, 1))));
        assert!(matches!(IntMatrix::new(vec![vec![1, 0], vec![0]]), Err(LatticeError::BadShape(2, 1))));
    }

    #[test]
    fn bound_checks() {
        assert_eq!(search_palindromic(51).unwrap_err(), LatticeError::BoundTooLarge(51));
        assert_eq!(search_palindromic(-1).unwrap_err(), LatticeError::BoundTooLarge(-1));
    }
}
