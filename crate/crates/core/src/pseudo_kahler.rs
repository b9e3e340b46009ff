//! Invariant 2-forms compatible with a complex structure.

use serde::Serialize;
use thiserror::Error;

use crate::cohomology::{ce_d, Cochain, CohomologyError};
use crate::complex_structure::{is_integrable, AlmostComplexStructure, ComplexStructureError};
use crate::lie::LieAlgebra;
use crate::linalg::{unit_vec, Matrix, Subspace};
use crate::poly::Poly;
use crate::scalar::{Field, Rational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PseudoKahlerError {
    #[error("a 2-form is required, got degree {0}")]
    WrongDegree(usize),
    #[error("2-form must have real coefficients")]
    NotReal,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("form is not compatible with J")]
    NotCompatible,
    #[error("J is not integrable: N_J(X{}, X{}) != 0", .0 + 1, .1 + 1)]
    NotIntegrable(usize, usize),
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("grid of {0} points exceeds the evaluation limit")]
    GridTooLarge(u128),
    #[error(transparent)]
    Cohomology(#[from] CohomologyError),
    #[error(transparent)]
    ComplexStructure(#[from] ComplexStructureError),
}

type Result<T> = std::result::Result<T, PseudoKahlerError>;

/// Real invariant 2-form.
#[derive(Clone, PartialEq)]
pub struct TwoForm<F> {
    cochain: Cochain<F>,
}

impl<F: std::fmt::Debug> std::fmt::Debug for TwoForm<F> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "TwoForm({:?})", self.cochain)
    }
}

impl<F: Field> TwoForm<F> {
    pub fn new(cochain: Cochain<F>) -> Result<Self> {
        if cochain.degree() != 2 {
            return Err(PseudoKahlerError::WrongDegree(cochain.degree()));
        }
        if !cochain.is_real() {
            return Err(PseudoKahlerError::NotReal);
        }
        Ok(Self { cochain })
    }

    /// From `(i, j, c)` terms, meaning `c ξ^i ∧ ξ^j` (0-based).
    pub fn from_terms(dim: usize, terms: &[(usize, usize, F)]) -> Result<Self> {
        let c = Cochain::from_terms(dim, 2, terms.iter().map(|(i, j, v)| (vec![*i, *j], v.clone())))?;
        Self::new(c)
    }

    pub fn from_matrix(m: &Matrix<F>) -> Result<Self> {
        Self::new(Cochain::from_matrix(m).ok_or(PseudoKahlerError::NotSymmetric)?)
    }

    /// `Σ ξ^{2k} ∧ ξ^{2k+1}`.
    pub fn standard(dim: usize) -> Result<Self> {
        let terms: Vec<(usize, usize, F)> = (0..dim / 2).map(|k| (2 * k, 2 * k + 1, F::one())).collect();
        Self::from_terms(dim, &terms)
    }

    pub fn cochain(&self) -> &Cochain<F> {
        &self.cochain
    }

    pub fn dim(&self) -> usize {
        self.cochain.dim()
    }

    /// `Ω[i][j] = ω(X_i, X_j)`.
    pub fn matrix(&self) -> Matrix<F> {
        self.cochain.to_matrix()
    }

    pub fn negate(&self) -> Self {
        Self { cochain: self.cochain.scale(&-F::one()) }
    }

    /// The same form read in the basis given by the columns of `p`: `P^T Ω P`.
    pub fn change_basis(&self, p: &Matrix<F>) -> Result<Self> {
        Self::from_matrix(&p.transpose().matmul(&self.matrix()).matmul(p))
    }
}

fn check_dims<F: Field>(w: &TwoForm<F>, j: &AlmostComplexStructure<F>) -> Result<()> {
    if w.dim() != j.dim() {
        return Err(PseudoKahlerError::DimensionMismatch { expected: j.dim(), got: w.dim() });
    }
    Ok(())
}

/// `ω(JX, JY) = ω(X, Y)` on all basis pairs, i.e. `J^T Ω J = Ω`.
pub fn j_compatible<F: Field>(w: &TwoForm<F>, j: &AlmostComplexStructure<F>) -> Result<bool> {
    check_dims(w, j)?;
    let om = w.matrix();
    let jm = j.matrix();
    Ok(jm.transpose().matmul(&om).matmul(jm) == om)
}

/// Gram matrix `G[i][j] = ω(X_i, J X_j)`.
pub fn metric_from<F: Field>(w: &TwoForm<F>, j: &AlmostComplexStructure<F>) -> Result<Matrix<F>> {
    if !j_compatible(w, j)? {
        return Err(PseudoKahlerError::NotCompatible);
    }
    let g = w.matrix().matmul(j.matrix());
    if !g.is_symmetric() {
        return Err(PseudoKahlerError::NotSymmetric);
    }
    Ok(g)
}

/// Inertia of a real symmetric matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Signature {
    pub p: usize,
    pub q: usize,
    pub zero: usize,
}

fn sign_changes(coeffs: &[Rational]) -> usize {
    let signs: Vec<bool> = coeffs.iter().filter(|c| !num_traits::Zero::is_zero(*c)).map(|c| *c > Rational::from_integer(0.into())).collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Exact signature from the characteristic polynomial.
///
/// A symmetric matrix has only real eigenvalues, so Descartes' rule counts
/// the positive roots of `χ(t)` and of `χ(-t)` exactly.
pub fn signature<F: Field>(g: &Matrix<F>) -> Result<Signature> {
    if !g.is_symmetric() || !g.is_real() {
        return Err(PseudoKahlerError::NotSymmetric);
    }
    let chi: Poly<Rational> = g.char_poly().to_rational().ok_or(PseudoKahlerError::NotReal)?;
    let zero = chi.coeffs().iter().take_while(|c| num_traits::Zero::is_zero(*c)).count();
    let p = sign_changes(chi.coeffs());
    let flipped: Vec<Rational> =
        chi.coeffs().iter().enumerate().map(|(k, c)| if k % 2 == 1 { -c.clone() } else { c.clone() }).collect();
    let q = sign_changes(&flipped);
    Ok(Signature { p, q, zero })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum FormClass {
    Kahler { p: usize, q: usize },
    PseudoKahler { p: usize, q: usize },
    Degenerate,
    Incompatible,
    NotClosed,
}

impl FormClass {
    pub fn tag(&self) -> &'static str {
        match self {
            FormClass::Kahler { .. } => "kahler",
            FormClass::PseudoKahler { .. } => "pseudo_kahler",
            FormClass::Degenerate => "degenerate",
            FormClass::Incompatible => "incompatible",
            FormClass::NotClosed => "not_closed",
        }
    }
}

fn require_integrable<F: Field>(l: &LieAlgebra<F>, j: &AlmostComplexStructure<F>) -> Result<()> {
    if let Some((a, b)) = is_integrable(l, j)?.witness {
        return Err(PseudoKahlerError::NotIntegrable(a, b));
    }
    Ok(())
}

fn classify_closed<F: Field>(j: &AlmostComplexStructure<F>, w: &TwoForm<F>) -> Result<FormClass> {
    if !j_compatible(w, j)? {
        return Ok(FormClass::Incompatible);
    }
    let g = metric_from(w, j)?;
    if g.det().is_zero() {
        return Ok(FormClass::Degenerate);
    }
    let Signature { p, q, .. } = signature(&g)?;
    Ok(if q == 0 { FormClass::Kahler { p, q } } else { FormClass::PseudoKahler { p, q } })
}

/// Checks, in order: `dω = 0`, compatibility with `J`, non-degeneracy, signature.
pub fn classify<F: Field>(l: &LieAlgebra<F>, j: &AlmostComplexStructure<F>, w: &TwoForm<F>) -> Result<FormClass> {
    require_integrable(l, j)?;
    check_dims(w, j)?;
    if !ce_d(l, w.cochain())?.is_zero() {
        return Ok(FormClass::NotClosed);
    }
    classify_closed(j, w)
}

/// Proof that a form which need not be left-invariant is closed, carrying
/// its value at the identity. Only the coordinate calculus can issue one.
#[derive(Debug, Clone, PartialEq)]
pub struct ClosednessCertificate<F> {
    value_at_identity: TwoForm<F>,
}

impl<F: Field> ClosednessCertificate<F> {
    pub(crate) fn new(value_at_identity: TwoForm<F>) -> Self {
        Self { value_at_identity }
    }

    pub fn value_at_identity(&self) -> &TwoForm<F> {
        &self.value_at_identity
    }
}

/// Classifies a closed form from its value at the identity.
///
/// Closedness comes from the certificate instead of the invariant
/// differential; the remaining checks are pointwise and match [`classify`].
pub fn classify_pointwise<F: Field>(
    l: &LieAlgebra<F>,
    j: &AlmostComplexStructure<F>,
    cert: &ClosednessCertificate<F>,
) -> Result<FormClass> {
    require_integrable(l, j)?;
    check_dims(cert.value_at_identity(), j)?;
    classify_closed(j, cert.value_at_identity())
}

/// Basis of the closed invariant 2-forms compatible with `J`.
pub fn closed_compatible_forms<F: Field>(l: &LieAlgebra<F>, j: &AlmostComplexStructure<F>) -> Result<Vec<TwoForm<F>>> {
    let n = l.dim();
    if j.dim() != n {
        return Err(PseudoKahlerError::DimensionMismatch { expected: n, got: j.dim() });
    }
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
    let basis: Vec<TwoForm<F>> =
        pairs.iter().map(|&(a, b)| TwoForm::from_terms(n, &[(a, b, F::one())])).collect::<Result<_>>()?;
    // each linear constraint is a row indexed by the pair basis
    let mut rows: Vec<Vec<F>> = Vec::new();
    let diffs: Vec<Cochain<F>> = basis.iter().map(|w| ce_d(l, w.cochain())).collect::<std::result::Result<_, _>>()?;
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                rows.push(diffs.iter().map(|d| d.get(&[a, b, c])).collect());
            }
        }
    }
    let jm = j.matrix();
    let pulled: Vec<Matrix<F>> = basis.iter().map(|w| &jm.transpose().matmul(&w.matrix()).matmul(jm) - &w.matrix()).collect();
    for &(a, b) in &pairs {
        rows.push(pulled.iter().map(|m| m[(a, b)].clone()).collect());
    }
    let kernel = if rows.is_empty() {
        (0..pairs.len()).map(|k| unit_vec(pairs.len(), k)).collect()
    } else {
        Matrix::from_rows(rows).nullspace()
    };
    kernel
        .into_iter()
        .map(|v| {
            let terms: Vec<(usize, usize, F)> = pairs.iter().zip(v).map(|(&(a, b), c)| (a, b, c)).collect();
            TwoForm::from_terms(n, &terms)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DegeneracySweep {
    /// Dimension of the space of closed `J`-compatible invariant 2-forms.
    pub space_dim: usize,
    /// Dimension of the common kernel of all forms in that space.
    pub common_radical_dim: usize,
    /// Points per axis of the evaluation grid `{0..n}^space_dim`, when used.
    pub grid_points_per_axis: Option<usize>,
    pub all_degenerate: bool,
    /// Coefficients (in the space basis) of a non-degenerate form, if found.
    pub witness: Option<Vec<i64>>,
}

/// Largest grid the sweep will evaluate.
pub const MAX_SWEEP_GRID: u128 = 1 << 20;

/// Decides whether every closed `J`-compatible invariant 2-form is degenerate.
///
/// A nonzero common kernel settles it directly, and a non-degenerate probe
/// point settles the other way. Otherwise `det(Σ c_k Ω_k)`
/// is a polynomial of degree at most `n` in each `c_k`, so it vanishes
/// identically iff it vanishes on the grid `{0..n}^r`.
pub fn degeneracy_sweep<F: Field>(l: &LieAlgebra<F>, j: &AlmostComplexStructure<F>) -> Result<DegeneracySweep> {
    let n = l.dim();
    let forms = closed_compatible_forms(l, j)?;
    let r = forms.len();
    let mats: Vec<Matrix<F>> = forms.iter().map(TwoForm::matrix).collect();
    let radical = if r == 0 {
        Subspace::full(n)
    } else {
        let rows: Vec<Vec<F>> = mats.iter().flat_map(|m| m.rows_vec()).collect();
        Subspace::span(n, Matrix::from_rows(rows).nullspace())
    };
    let mut sweep = DegeneracySweep {
        space_dim: r,
        common_radical_dim: radical.dim(),
        grid_points_per_axis: None,
        all_degenerate: true,
        witness: None,
    };
    if radical.dim() > 0 {
        return Ok(sweep);
    }
    let combine = |point: &[i64]| mats.iter().zip(point).fold(Matrix::zeros(n, n), |acc, (om, &c)| &acc + &om.scale(&F::from_i64(c)));
    // probe a few points first
    let axis = n + 1;
    for t in 1..=axis as i64 {
        let point: Vec<i64> = (0..r as u32).map(|k| t.pow(k % 8)).collect();
        if !combine(&point).det().is_zero() {
            sweep.all_degenerate = false;
            sweep.witness = Some(point);
            return Ok(sweep);
        }
    }
    let total = (axis as u128).checked_pow(r as u32).unwrap_or(u128::MAX);
    if total > MAX_SWEEP_GRID {
        return Err(PseudoKahlerError::GridTooLarge(total));
    }
    sweep.grid_points_per_axis = Some(axis);
    let mut point = vec![0i64; r];
    for _ in 0..total {
        if !combine(&point).det().is_zero() {
            sweep.all_degenerate = false;
            sweep.witness = Some(point.clone());
            break;
        }
        for c in point.iter_mut() {
            *c += 1;
            if *c < axis as i64 {
                break;
            }
            *c = 0;
        }
    }
    Ok(sweep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::AlgebraForm;
    use crate::scalar::GaussianRational as G;

    fn g(v: i64) -> G {
        G::from_ints(v, 0)
    }

    #[test]
    fn flat_torus_is_kahler() {
        let l = LieAlgebra::<G>::abelian(4, AlgebraForm::Real).unwrap();
        let j = AlmostComplexStructure::standard(4).unwrap();
        let w = TwoForm::standard(4).unwrap();
        assert!(j_compatible(&w, &j).unwrap());
        assert_eq!(metric_from(&w, &j).unwrap(), Matrix::identity(4));
        assert_eq!(classify(&l, &j, &w).unwrap(), FormClass::Kahler { p: 4, q: 0 });
        assert_eq!(classify(&l, &j, &w.negate()).unwrap(), FormClass::PseudoKahler { p: 0, q: 4 });
    }

    #[test]
    fn incompatible_and_degenerate() {
        let l = LieAlgebra::<G>::abelian(4, AlgebraForm::Real).unwrap();
        let j = AlmostComplexStructure::standard(4).unwrap();
        let w13 = TwoForm::from_terms(4, &[(0, 2, g(1))]).unwrap();
        assert!(!j_compatible(&w13, &j).unwrap());
        assert_eq!(classify(&l, &j, &w13).unwrap(), FormClass::Incompatible);
        let w12 = TwoForm::from_terms(4, &[(0, 1, g(1))]).unwrap();
        assert_eq!(classify(&l, &j, &w12).unwrap(), FormClass::Degenerate);
    }

    #[test]
    fn signature_counts_zero_eigenvalues() {
        let m = Matrix::<G>::from_i64_rows(&[&[1, 0, 0], &[0, -2, 0], &[0, 0, 0]]);
        assert_eq!(signature(&m).unwrap(), Signature { p: 1, q: 1, zero: 1 });
    }

    #[test]
    fn rejects_complex_coefficients() {
        let c = Cochain::from_terms(2, 2, [(vec![0, 1], G::i())]).unwrap();
        assert_eq!(TwoForm::new(c).unwrap_err(), PseudoKahlerError::NotReal);
    }

    #[test]
    fn abelian_sweep_finds_witness() {
        let l = LieAlgebra::<G>::abelian(2, AlgebraForm::Real).unwrap();
        let j = AlmostComplexStructure::standard(2).unwrap();
        let s = degeneracy_sweep(&l, &j).unwrap();
        assert_eq!(s.space_dim, 1);
        assert!(!s.all_degenerate);
        assert_eq!(s.witness, Some(vec![1]));
    }
}
