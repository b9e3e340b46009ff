//! Low-degree Chevalley–Eilenberg cochains, first cohomology and the
//! holomorphic `h^1` of compact complex solvmanifolds.

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::lie::{LieAlgebra, LieError};
use crate::linalg::{unit_vec, Matrix, Subspace};
use crate::poly::count_real_roots_with_multiplicity;
use crate::scalar::{Field, Rational};

/// Highest cochain degree represented.
pub const MAX_DEGREE: usize = 3;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CohomologyError {
    #[error("cochain degree {0} exceeds the supported maximum")]
    DegreeTooHigh(usize),
    #[error("index tuple {0:?} is invalid for a degree-{1} cochain on dimension {2}")]
    BadIndices(Vec<usize>, usize, usize),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("holonomy generators do not commute")]
    NonCommutingHolonomy,
    #[error("holonomy generator {0} is not semisimple")]
    NonSemisimpleGenerator(usize),
    #[error("holonomy generator {0} is singular")]
    SingularGenerator(usize),
    #[error("holonomy generators have size {got}, expected {quotient} or {}", 2 * .quotient)]
    HolonomySize { got: usize, quotient: usize },
    #[error("no separating element found for the holonomy algebra")]
    NoSeparatingElement,
    #[error("the algebra is not nilpotent")]
    NotNilpotent,
    #[error("dimension must be positive")]
    NonPositiveDimension,
    #[error(transparent)]
    Lie(#[from] LieError),
}

type Result<T> = std::result::Result<T, CohomologyError>;

/// Alternating form stored on strictly increasing index tuples (0-based).
#[derive(Clone, PartialEq)]
pub struct Cochain<F> {
    dim: usize,
    degree: usize,
    coeffs: BTreeMap<Vec<usize>, F>,
}

impl<F: std::fmt::Debug> std::fmt::Debug for Cochain<F> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Cochain(deg {}, dim {}):", self.degree, self.dim)?;
        for (k, v) in &self.coeffs {
            let idx: Vec<String> = k.iter().map(|i| (i + 1).to_string()).collect();
            write!(f, " ({v:?})ξ^{}", idx.join("∧ξ^"))?;
        }
        Ok(())
    }
}

/// Sorts `idx` in place and returns the permutation sign, or `None` on a repeat.
fn sort_sign(idx: &mut [usize]) -> Option<bool> {
    let mut negative = false;
    for i in 0..idx.len() {
        for j in 0..idx.len() - 1 - i {
            if idx[j] > idx[j + 1] {
                idx.swap(j, j + 1);
                negative = !negative;
            }
        }
    }
    idx.windows(2).all(|w| w[0] < w[1]).then_some(negative)
}

impl<F: Field> Cochain<F> {
    pub fn zero(dim: usize, degree: usize) -> Result<Self> {
        if degree > MAX_DEGREE {
            return Err(CohomologyError::DegreeTooHigh(degree));
        }
        Ok(Self { dim, degree, coeffs: BTreeMap::new() })
    }

    /// Builds a cochain from `(indices, coefficient)` terms; indices in any
    /// order, repeated entries rejected, duplicate tuples summed.
    pub fn from_terms(dim: usize, degree: usize, terms: impl IntoIterator<Item = (Vec<usize>, F)>) -> Result<Self> {
        let mut c = Self::zero(dim, degree)?;
        for (idx, v) in terms {
            c.add_term(idx, v)?;
        }
        Ok(c)
    }

    /// Dual basis 1-form `ξ^k`.
    pub fn dual(dim: usize, k: usize) -> Self {
        let mut coeffs = BTreeMap::new();
        coeffs.insert(vec![k], F::one());
        Self { dim, degree: 1, coeffs }
    }

    pub fn add_term(&mut self, mut idx: Vec<usize>, v: F) -> Result<()> {
        let bad = CohomologyError::BadIndices(idx.clone(), self.degree, self.dim);
        if idx.len() != self.degree || idx.iter().any(|&i| i >= self.dim) {
            return Err(bad);
        }
        let negative = sort_sign(&mut idx).ok_or(bad)?;
        let v = if negative { -v } else { v };
        let entry = self.coeffs.entry(idx).or_insert_with(F::zero);
        *entry = entry.clone() + v;
        self.coeffs.retain(|_, c| !c.is_zero());
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn terms(&self) -> &BTreeMap<Vec<usize>, F> {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient on an arbitrary index tuple, with the alternating sign.
    pub fn get(&self, idx: &[usize]) -> F {
        let mut sorted = idx.to_vec();
        match sort_sign(&mut sorted) {
            None => F::zero(),
            Some(neg) => {
                let v = self.coeffs.get(&sorted).cloned().unwrap_or_else(F::zero);
                if neg {
                    -v
                } else {
                    v
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.dim, self.degree), (other.dim, other.degree), "cochain shape mismatch");
        let mut out = self.clone();
        for (k, v) in &other.coeffs {
            out.add_term(k.clone(), v.clone()).expect("indices already valid");
        }
        out
    }

    pub fn scale(&self, s: &F) -> Self {
        let mut out = self.clone();
        out.coeffs = self.coeffs.iter().map(|(k, v)| (k.clone(), v.clone() * s.clone())).collect();
        out.coeffs.retain(|_, c| !c.is_zero());
        out
    }

    /// Exterior product; the result must stay within [`MAX_DEGREE`].
    pub fn wedge(&self, other: &Self) -> Result<Self> {
        assert_eq!(self.dim, other.dim, "cochain dimension mismatch");
        let mut out = Self::zero(self.dim, self.degree + other.degree)?;
        for (a, x) in &self.coeffs {
            for (b, y) in &other.coeffs {
                let idx: Vec<usize> = a.iter().chain(b).copied().collect();
                let mut probe = idx.clone();
                if sort_sign(&mut probe).is_some() {
                    out.add_term(idx, x.clone() * y.clone())?;
                }
            }
        }
        Ok(out)
    }

    /// Evaluates a 1-form on a vector.
    pub fn eval1(&self, v: &[F]) -> F {
        assert_eq!(self.degree, 1);
        self.coeffs.iter().fold(F::zero(), |acc, (k, c)| acc + c.clone() * v[k[0]].clone())
    }

    /// Evaluates a 2-form on two vectors.
    pub fn eval2(&self, u: &[F], v: &[F]) -> F {
        assert_eq!(self.degree, 2);
        self.coeffs.iter().fold(F::zero(), |acc, (k, c)| {
            let (a, b) = (k[0], k[1]);
            acc + c.clone() * (u[a].clone() * v[b].clone() - u[b].clone() * v[a].clone())
        })
    }

    /// Antisymmetric matrix `Ω[i][j] = ω(X_i, X_j)` of a 2-form.
    pub fn to_matrix(&self) -> Matrix<F> {
        assert_eq!(self.degree, 2);
        let mut m = Matrix::zeros(self.dim, self.dim);
        for (k, c) in &self.coeffs {
            m[(k[0], k[1])] = c.clone();
            m[(k[1], k[0])] = -c.clone();
        }
        m
    }

    /// 2-form with `ω(X_i, X_j) = m[i][j]`; `m` must be antisymmetric.
    pub fn from_matrix(m: &Matrix<F>) -> Option<Self> {
        let n = m.nrows();
        if m.transpose() != -m {
            return None;
        }
        let terms = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).map(|(i, j)| (vec![i, j], m[(i, j)].clone()));
        Self::from_terms(n, 2, terms).ok()
    }

    pub fn is_real(&self) -> bool {
        self.coeffs.values().all(Field::is_real)
    }
}

/// Chevalley–Eilenberg differential on cochains of degree at most 2.
pub fn ce_d<F: Field>(l: &LieAlgebra<F>, c: &Cochain<F>) -> Result<Cochain<F>> {
    let n = l.dim();
    if c.dim() != n {
        return Err(CohomologyError::DimensionMismatch { expected: n, got: c.dim() });
    }
    let mut out = Cochain::zero(n, c.degree() + 1)?;
    match c.degree() {
        0 => {}
        1 => {
            for i in 0..n {
                for j in i + 1..n {
                    let v = -c.eval1(&l.bracket_basis(i, j));
                    out.add_term(vec![i, j], v)?;
                }
            }
        }
        2 => {
            for i in 0..n {
                for j in i + 1..n {
                    for k in j + 1..n {
                        let (xi, xj, xk) = (unit_vec::<F>(n, i), unit_vec(n, j), unit_vec(n, k));
                        let v = -c.eval2(&l.bracket_basis(i, j), &xk) + c.eval2(&l.bracket_basis(i, k), &xj)
                            - c.eval2(&l.bracket_basis(j, k), &xi);
                        out.add_term(vec![i, j, k], v)?;
                    }
                }
            }
        }
        d => return Err(CohomologyError::DegreeTooHigh(d + 1)),
    }
    Ok(out)
}

/// `dim g - dim [g, g]`.
pub fn h1_lie<F: Field>(l: &LieAlgebra<F>) -> usize {
    l.dim() - l.derived_subalgebra().dim()
}

/// Dimension of the closed 1-forms, computed as the kernel of `d` on 1-cochains.
pub fn closed_one_forms_dim<F: Field>(l: &LieAlgebra<F>) -> usize {
    let n = l.dim();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    if pairs.is_empty() {
        return n;
    }
    let m = Matrix::from_fn(pairs.len(), n, |r, k| {
        let (i, j) = pairs[r];
        -l.structure_constant(i, j, k)
    });
    n - m.rank()
}

/// Holonomy generators acting on `[g, g] / [n, n]`.
///
/// A generator of size `d` (the complex dimension of the quotient) acts
/// complex-linearly in a basis of the quotient; a generator of size `2d`
/// is the real form of that action on an underlying real lattice, as for
/// the integer matrices produced by the lattice builders.
#[derive(Debug, Clone, PartialEq)]
pub struct HolonomyAction {
    generators: Vec<Matrix<Rational>>,
}

impl HolonomyAction {
    pub fn new(generators: Vec<Matrix<Rational>>) -> Result<Self> {
        if let Some(first) = generators.first() {
            let size = first.nrows();
            for g in &generators {
                if !g.is_square() || g.nrows() != size {
                    return Err(CohomologyError::DimensionMismatch { expected: size, got: g.nrows() });
                }
            }
        }
        for (k, g) in generators.iter().enumerate() {
            if num_traits::Zero::is_zero(&g.det()) {
                return Err(CohomologyError::SingularGenerator(k));
            }
            if !g.min_poly().is_squarefree() {
                return Err(CohomologyError::NonSemisimpleGenerator(k));
            }
        }
        for (a, x) in generators.iter().enumerate() {
            for y in &generators[a + 1..] {
                if x.matmul(y) != y.matmul(x) {
                    return Err(CohomologyError::NonCommutingHolonomy);
                }
            }
        }
        Ok(Self { generators })
    }

    pub fn trivial() -> Self {
        Self { generators: Vec::new() }
    }

    pub fn generators(&self) -> &[Matrix<Rational>] {
        &self.generators
    }

    fn size(&self) -> Option<usize> {
        self.generators.first().map(Matrix::nrows)
    }

    /// Complex dimension of the sum of the joint eigenspaces on which every
    /// generator has a real eigenvalue, measured in the generators' own space.
    ///
    /// The generators span a commutative semisimple algebra `A = Q[M_1..M_r]`.
    /// A combination `M = Σ c_j M_j` whose minimal polynomial has degree
    /// `dim A` generates `A`, so each `M_j` is a polynomial in `M` and a joint
    /// eigenvalue tuple is real exactly when the matching root of `M` is.
    pub fn real_eigenspace_dim(&self) -> Result<usize> {
        let Some(size) = self.size() else {
            return Ok(0);
        };
        let alg_dim = commutative_closure_dim(&self.generators, size);
        for t in 1..=64i64 {
            let m = self.generators.iter().enumerate().fold(Matrix::zeros(size, size), |acc, (j, g)| {
                &acc + &g.scale(&Rational::from_integer(t.pow(j as u32).into()))
            });
            if m.min_poly().degree() == Some(alg_dim) {
                return Ok(count_real_roots_with_multiplicity(&m.char_poly()));
            }
        }
        Err(CohomologyError::NoSeparatingElement)
    }
}

fn commutative_closure_dim(gens: &[Matrix<Rational>], size: usize) -> usize {
    let mut span = Subspace::span(size * size, [Matrix::<Rational>::identity(size).flatten()]);
    let mut frontier = vec![Matrix::identity(size)];
    while let Some(m) = frontier.pop() {
        for g in gens {
            let p = m.matmul(g);
            let flat = p.flatten();
            if !span.contains(&flat) {
                span = span.sum(&Subspace::span(size * size, [flat]));
                frontier.push(p);
            }
        }
    }
    span.dim()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct WinkelmannH1 {
    pub h1: usize,
    pub h1_lie: usize,
    #[serde(rename = "dimW")]
    pub dim_w: usize,
}

/// Complex dimension of `[g, g] / [n, n]` for a solvable algebra.
pub fn holonomy_quotient_dim<F: Field>(l: &LieAlgebra<F>) -> Result<usize> {
    let nil = l.nilradical_solvable()?;
    Ok(l.derived_subalgebra().dim() - l.bracket_span(&nil, &nil).dim())
}

/// `h^1 = dim H^1(g) + dim W`, with `W` the part of `[g, g] / [n, n]` on
/// which every holonomy generator is real semisimple.
///
/// An empty action is read as trivial holonomy, so all of the quotient counts.
pub fn winkelmann_h1<F: Field>(l: &LieAlgebra<F>, h: &HolonomyAction) -> Result<WinkelmannH1> {
    let h1_lie = h1_lie(l);
    let quotient = holonomy_quotient_dim(l)?;
    let dim_w = match h.size() {
        _ if quotient == 0 => 0,
        None => quotient,
        Some(s) if s == quotient => h.real_eigenspace_dim()?,
        Some(s) if s == 2 * quotient => h.real_eigenspace_dim()? / 2,
        Some(s) => return Err(CohomologyError::HolonomySize { got: s, quotient }),
    };
    Ok(WinkelmannH1 { h1: h1_lie + dim_w, h1_lie, dim_w })
}

/// Closed holomorphic 1-forms of a complex nilmanifold: `n - dim [g, g]`.
pub fn closed_holomorphic_1forms<F: Field>(lc: &LieAlgebra<F>) -> Result<usize> {
    if !matches!(lc.form(), crate::lie::AlgebraForm::Complex { .. }) {
        return Err(LieError::WrongForm("complex").into());
    }
    if !lc.is_nilpotent() {
        return Err(CohomologyError::NotNilpotent);
    }
    Ok(lc.dim() - lc.derived_subalgebra().dim())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PseudoKahlerObstruction {
    Passes,
    Obstructed,
}

/// Necessary condition `h^1 >= n` for a pseudo-Kähler structure.
pub fn pseudo_kahler_obstruction(n: usize, h1: usize) -> Result<PseudoKahlerObstruction> {
    if n == 0 {
        return Err(CohomologyError::NonPositiveDimension);
    }
    Ok(if h1 < n { PseudoKahlerObstruction::Obstructed } else { PseudoKahlerObstruction::Passes })
}
