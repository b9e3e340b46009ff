//! Almost complex structures on real Lie algebras and their integrability.
//!
//! `N_J` is bilinear in its two vector arguments once `J` is fixed, so
//! integrability is decided on basis pairs.

use serde::Serialize;
use thiserror::Error;

use crate::lie::{AlgebraForm, LieAlgebra, LieError};
use crate::linalg::{unit_vec, vec_is_zero, vec_sub, Matrix, Subspace};
use crate::scalar::Field;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ComplexStructureError {
    #[error("an almost complex structure needs even dimension, got {0}")]
    OddDimension(usize),
    #[error("matrix must be square")]
    NotSquare,
    #[error("almost complex structure must have real entries")]
    NotReal,
    #[error("J^2 != -I")]
    JSquareViolation,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("J is not integrable: N_J(X{}, X{}) != 0", .0 + 1, .1 + 1)]
    NotIntegrable(usize, usize),
    #[error("subspace is not transverse to its conjugate")]
    NotTransverse,
    #[error("subspace is not invariant under multiplication by i")]
    NotComplexSubspace,
    #[error("conjugation is not the standard one of a complexification")]
    NonStandardConjugation,
    #[error(transparent)]
    Lie(#[from] LieError),
}

type Result<T> = std::result::Result<T, ComplexStructureError>;

/// A real matrix `J` with `J^2 = -I`, acting on column vectors.
#[derive(Clone, PartialEq)]
pub struct AlmostComplexStructure<F> {
    matrix: Matrix<F>,
}

impl<F: Field> std::fmt::Debug for AlmostComplexStructure<F> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "AlmostComplexStructure({:?})", self.matrix)
    }
}

impl<F: Field> AlmostComplexStructure<F> {
    pub fn new(matrix: Matrix<F>) -> Result<Self> {
        if !matrix.is_square() {
            return Err(ComplexStructureError::NotSquare);
        }
        let n = matrix.nrows();
        if n % 2 == 1 {
            return Err(ComplexStructureError::OddDimension(n));
        }
        if !matrix.is_real() {
            return Err(ComplexStructureError::NotReal);
        }
        if matrix.matmul(&matrix) != -&Matrix::identity(n) {
            return Err(ComplexStructureError::JSquareViolation);
        }
        Ok(Self { matrix })
    }

    /// `J X_{2k} = X_{2k+1}`, `J X_{2k+1} = -X_{2k}` (0-based).
    pub fn standard(dim: usize) -> Result<Self> {
        if dim % 2 == 1 {
            return Err(ComplexStructureError::OddDimension(dim));
        }
        let m = Matrix::from_fn(dim, dim, |r, c| {
            if c % 2 == 0 && r == c + 1 {
                F::one()
            } else if c % 2 == 1 && r + 1 == c {
                -F::one()
            } else {
                F::zero()
            }
        });
        Self::new(m)
    }

    /// Builds `J` from the images of the basis vectors, 0-based sparse columns.
    pub fn from_images(dim: usize, images: &[Vec<(usize, F)>]) -> Result<Self> {
        if images.len() != dim {
            return Err(ComplexStructureError::DimensionMismatch { expected: dim, got: images.len() });
        }
        let mut m = Matrix::<F>::zeros(dim, dim);
        for (c, terms) in images.iter().enumerate() {
            for (r, v) in terms {
                if *r >= dim {
                    return Err(ComplexStructureError::DimensionMismatch { expected: dim, got: *r + 1 });
                }
                m[(*r, c)] = m[(*r, c)].clone() + v.clone();
            }
        }
        Self::new(m)
    }

    pub fn matrix(&self) -> &Matrix<F> {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn apply(&self, v: &[F]) -> Vec<F> {
        self.matrix.mul_vec(v)
    }

    pub fn negate(&self) -> Self {
        Self { matrix: -&self.matrix }
    }

    /// `J` expressed in the basis given by the columns of `p`, i.e. `P^{-1} J P`.
    pub fn change_basis(&self, p: &Matrix<F>) -> Result<Self> {
        let inv = p.inverse().ok_or(LieError::SingularBasisChange)?;
        Self::new(inv.matmul(&self.matrix).matmul(p))
    }
}

fn check_dims<F: Field>(l: &LieAlgebra<F>, j: &AlmostComplexStructure<F>) -> Result<()> {
    if l.dim() != j.dim() {
        return Err(ComplexStructureError::DimensionMismatch { expected: l.dim(), got: j.dim() });
    }
    Ok(())
}

fn check_real<F: Field>(l: &LieAlgebra<F>) -> Result<()> {
    if !l.is_real_form() {
        return Err(LieError::WrongForm("real").into());
    }
    Ok(())
}

/// `N_J(X, Y) = [JX, JY] - J[JX, Y] - J[X, JY] - [X, Y]`.
pub fn nijenhuis<F: Field>(
    l: &LieAlgebra<F>,
    j: &AlmostComplexStructure<F>,
    x: &[F],
    y: &[F],
) -> Result<Vec<F>> {
    check_real(l)?;
    check_dims(l, j)?;
    for v in [x, y] {
        if v.len() != l.dim() {
            return Err(ComplexStructureError::DimensionMismatch { expected: l.dim(), got: v.len() });
        }
    }
    let (jx, jy) = (j.apply(x), j.apply(y));
    let a = l.bracket(&jx, &jy);
    let b = j.apply(&l.bracket(&jx, y));
    let c = j.apply(&l.bracket(x, &jy));
    let d = l.bracket(x, y);
    Ok(vec_sub(&vec_sub(&vec_sub(&a, &b), &c), &d))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IntegrabilityReport {
    pub ok: bool,
    /// First basis pair `(i, j)`, `i < j`, 0-based, with `N_J(X_i, X_j) != 0`.
    pub witness: Option<(usize, usize)>,
}

pub fn is_integrable<F: Field>(l: &LieAlgebra<F>, j: &AlmostComplexStructure<F>) -> Result<IntegrabilityReport> {
    check_real(l)?;
    check_dims(l, j)?;
    let n = l.dim();
    for a in 0..n {
        for b in a + 1..n {
            if !vec_is_zero(&nijenhuis(l, j, &unit_vec(n, a), &unit_vec(n, b))?) {
                return Ok(IntegrabilityReport { ok: false, witness: Some((a, b)) });
            }
        }
    }
    Ok(IntegrabilityReport { ok: true, witness: None })
}

/// `true` iff `J[X_i, X_j] = [J X_i, X_j]` on all basis pairs.
pub fn is_complex_lie_algebra<F: Field>(l: &LieAlgebra<F>, j: &AlmostComplexStructure<F>) -> Result<bool> {
    check_dims(l, j)?;
    let n = l.dim();
    Ok((0..n).all(|a| {
        (0..n).all(|b| j.apply(&l.bracket_basis(a, b)) == l.bracket(&j.apply(&unit_vec(n, a)), &unit_vec(n, b)))
    }))
}

/// Complex subalgebra `h` of a complexification with `g_C = h ⊕ conj(h)`.
///
/// `ambient` is the real `2n` description from [`LieAlgebra::complexify`];
/// `basis` is a real subspace of it of real dimension `n` that is stable
/// under multiplication by `i`.
#[derive(Clone, PartialEq)]
pub struct ComplexSubalgebra<F> {
    pub ambient: LieAlgebra<F>,
    pub basis: Subspace<F>,
}

impl<F: Field> std::fmt::Debug for ComplexSubalgebra<F> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ComplexSubalgebra").field("ambient", &self.ambient).field("basis", &self.basis).finish()
    }
}

/// Multiplication by `i` on the block basis `(X_1..X_n, iX_1..iX_n)`.
pub fn complex_unit<F: Field>(n: usize) -> Matrix<F> {
    Matrix::from_fn(2 * n, 2 * n, |r, c| {
        if r == c + n {
            F::one()
        } else if c == r + n {
            -F::one()
        } else {
            F::zero()
        }
    })
}

/// Real subspace of the block description spanned by the complex vectors `vs`
/// (entries in `F` may carry an imaginary part).
pub fn complex_span<F: Field>(n: usize, vs: &[Vec<F>]) -> Subspace<F> {
    let mut out = Vec::with_capacity(2 * vs.len());
    for v in vs {
        let re: Vec<F> = v.iter().map(|x| F::from_rational(x.real_part())).collect();
        let im: Vec<F> = v.iter().map(|x| F::from_rational(x.imag_part())).collect();
        let neg_im: Vec<F> = im.iter().map(|x| -x.clone()).collect();
        out.push(re.iter().chain(im.iter()).cloned().collect());
        out.push(neg_im.into_iter().chain(re).collect());
    }
    Subspace::span(2 * n, out)
}

fn standard_sigma<F: Field>(n: usize) -> Matrix<F> {
    Matrix::from_fn(2 * n, 2 * n, |r, c| match (r == c, r < n) {
        (false, _) => F::zero(),
        (true, true) => F::one(),
        (true, false) => -F::one(),
    })
}

/// `h_J`, the span of `X + iJX`, inside `complexify(L)`.
///
/// Fails with `NotIntegrable` exactly when `h_J` is not closed under the bracket.
pub fn subalgebra_from_j<F: Field>(l: &LieAlgebra<F>, j: &AlmostComplexStructure<F>) -> Result<ComplexSubalgebra<F>> {
    check_real(l)?;
    check_dims(l, j)?;
    let n = l.dim();
    let lc = l.complexify()?;
    let gens: Vec<Vec<F>> = (0..n)
        .map(|k| {
            let mut v = unit_vec::<F>(2 * n, k);
            for (r, c) in j.matrix().column(k).into_iter().enumerate() {
                v[n + r] = c;
            }
            v
        })
        .collect();
    let h = Subspace::span(2 * n, gens.clone());
    for a in 0..n {
        for b in a + 1..n {
            if !h.contains(&lc.bracket(&gens[a], &gens[b])) {
                return Err(ComplexStructureError::NotIntegrable(a, b));
            }
        }
    }
    let sigma = standard_sigma::<F>(n);
    if h.sum(&h.map(&sigma)).dim() != 2 * n {
        return Err(ComplexStructureError::NotTransverse);
    }
    Ok(ComplexSubalgebra { ambient: lc, basis: h })
}

/// The unique `J` with `W = span{X + iJX}`.
///
/// `lc` must be a complexification in the block basis with the standard
/// conjugation; `W` is read in canonical echelon form, so the result does
/// not depend on how its basis was chosen.
pub fn j_from_subspace<F: Field>(lc: &LieAlgebra<F>, w: &Subspace<F>) -> Result<AlmostComplexStructure<F>> {
    let AlgebraForm::Complexification { sigma } = lc.form() else {
        return Err(LieError::WrongForm("complexification").into());
    };
    let total = lc.dim();
    let n = total / 2;
    if *sigma != standard_sigma(n) {
        return Err(ComplexStructureError::NonStandardConjugation);
    }
    if w.ambient_dim() != total {
        return Err(ComplexStructureError::DimensionMismatch { expected: total, got: w.ambient_dim() });
    }
    if w.map(&complex_unit(n)) != *w {
        return Err(ComplexStructureError::NotComplexSubspace);
    }
    if w.dim() != n || w.sum(&w.map(sigma)).dim() != total {
        return Err(ComplexStructureError::NotTransverse);
    }
    let rows = w.basis();
    let mut jm = Matrix::zeros(n, n);
    for (k, row) in rows.iter().enumerate() {
        if !row[k].is_one() || (0..n).any(|c| c != k && !row[c].is_zero()) {
            return Err(ComplexStructureError::NotTransverse);
        }
        for r in 0..n {
            jm[(r, k)] = row[n + r].clone();
        }
    }
    AlmostComplexStructure::new(jm)
}

/// Every `J` that permutes the basis up to sign, in a fixed order.
///
/// Such a `J` pairs the basis vectors (`J X_a = ±X_b`, `J X_b = ∓X_a`), so
/// there are `(dim - 1)!! * 2^(dim/2)` of them.
pub fn signed_permutation_candidates<F: Field>(dim: usize) -> Vec<AlmostComplexStructure<F>> {
    fn matchings(rest: &[usize]) -> Vec<Vec<(usize, usize)>> {
        let Some((&first, tail)) = rest.split_first() else {
            return vec![Vec::new()];
        };
        let mut out = Vec::new();
        for (pos, &partner) in tail.iter().enumerate() {
            let remaining: Vec<usize> =
                tail.iter().enumerate().filter(|&(p, _)| p != pos).map(|(_, &x)| x).collect();
            for mut m in matchings(&remaining) {
                m.insert(0, (first, partner));
                out.push(m);
            }
        }
        out
    }
    if dim % 2 == 1 {
        return Vec::new();
    }
    let idx: Vec<usize> = (0..dim).collect();
    let mut out = Vec::new();
    for m in matchings(&idx) {
        for signs in 0u32..(1 << m.len()) {
            let mut mat = Matrix::zeros(dim, dim);
            for (p, &(a, b)) in m.iter().enumerate() {
                let s = if signs >> p & 1 == 0 { F::one() } else { -F::one() };
                mat[(b, a)] = s.clone();
                mat[(a, b)] = -s;
            }
            out.push(AlmostComplexStructure::new(mat).expect("signed pairing squares to -I"));
        }
    }
    out
}

/// Non-integrable candidates from [`signed_permutation_candidates`] with their witnesses.
pub fn negative_controls<F: Field>(
    l: &LieAlgebra<F>,
) -> Result<Vec<(AlmostComplexStructure<F>, (usize, usize))>> {
    let mut out = Vec::new();
    for j in signed_permutation_candidates(l.dim()) {
        if let Some(w) = is_integrable(l, &j)?.witness {
            out.push((j, w));
        }
    }
    Ok(out)
}
