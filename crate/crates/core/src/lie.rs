//! Finite-dimensional Lie algebras given by exact structure constants.
//!
//! Only brackets `[X_i, X_j]` with `i < j` are stored; the opposite order is
//! computed, so antisymmetry cannot be violated. Basis indices are 0-based
//! in the API and 1-based in every serialized or printed form.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::linalg::{unit_vec, vec_add, vec_conj, vec_is_zero, vec_scale, vec_sub, zero_vec, Matrix, Subspace};
use crate::poly::{all_roots_imaginary, all_roots_real, Poly};
use crate::scalar::{Field, Rational};

/// Seed used by [`LieAlgebra::classify_type`] unless one is given explicitly.
pub const DEFAULT_SAMPLE_SEED: u64 = 0x5EED_501F;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LieError {
    #[error("a Lie algebra must have positive dimension")]
    ZeroDimension,
    #[error("expected {expected} basis labels, got {got}")]
    LabelCount { expected: usize, got: usize },
    #[error("bracket of basis vector {0} with itself is not a valid entry")]
    DiagonalBracket(usize),
    #[error("basis index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("bracket [{0}, {1}] given twice")]
    DuplicateBracket(usize, usize),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("real form requires real structure constants")]
    NotReal,
    #[error("conjugation matrix must be {0}x{0}")]
    SigmaShape(usize),
    #[error("conjugation is not an involution")]
    SigmaNotInvolution,
    #[error("conjugation does not preserve brackets on the pair ({0}, {1})")]
    SigmaNotAutomorphism(usize, usize),
    #[error("operation requires a {0} algebra")]
    WrongForm(&'static str),
    #[error("the algebra is not solvable")]
    NotSolvable,
    #[error("internal consistency check failed: {0}")]
    InternalCheckFailed(String),
    #[error("change of basis matrix is singular")]
    SingularBasisChange,
}

/// How the coordinates of a [`LieAlgebra`] are to be read.
#[derive(Debug, Clone, PartialEq)]
pub enum AlgebraForm<F> {
    /// A real Lie algebra: structure constants are real.
    Real,
    /// A complex Lie algebra in complex coordinates. The optional
    /// conjugation acts conjugate-linearly as `v -> S * conj(v)`.
    Complex { sigma: Option<Matrix<F>> },
    /// Real `2n`-dimensional description of a complex algebra with basis
    /// `(X_1..X_n, iX_1..iX_n)` and a real-linear conjugation `S`.
    Complexification { sigma: Matrix<F> },
}

impl<F: Field> AlgebraForm<F> {
    pub fn sigma(&self) -> Option<&Matrix<F>> {
        match self {
            AlgebraForm::Real => None,
            AlgebraForm::Complex { sigma } => sigma.as_ref(),
            AlgebraForm::Complexification { sigma } => Some(sigma),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            AlgebraForm::Real => "real",
            AlgebraForm::Complex { .. } => "complex",
            AlgebraForm::Complexification { .. } => "complexification",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct JacobiReport {
    pub ok: bool,
    /// Violating triple `(i, j, k)`, 0-based.
    pub witness: Option<(usize, usize, usize)>,
}

/// Verdict of [`LieAlgebra::classify_type`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AdjointType {
    Nilpotent,
    CompletelySolvable,
    Rigid,
    Mixed,
    Inconclusive,
}

#[derive(Clone, PartialEq)]
pub struct LieAlgebra<F> {
    dim: usize,
    labels: Vec<String>,
    structure: Vec<Vec<F>>,
    form: AlgebraForm<F>,
}

impl<F: Field> std::fmt::Debug for LieAlgebra<F> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut ds = f.debug_struct("LieAlgebra");
        ds.field("dim", &self.dim).field("form", &self.form.name());
        let brackets: Vec<String> = self
            .nonzero_brackets()
            .map(|(i, j, v)| format!("[{},{}]={:?}", self.labels[i], self.labels[j], v))
            .collect();
        ds.field("brackets", &brackets).finish()
    }
}

fn pair_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < n);
    i * n - i * (i + 1) / 2 + (j - i - 1)
}

impl<F: Field> LieAlgebra<F> {
    /// Builds an algebra from brackets `([X_i, X_j], coordinates)`, 0-based.
    ///
    /// Pairs with `i > j` are stored negated; omitted pairs are zero.
    pub fn new(
        labels: Vec<String>,
        brackets: impl IntoIterator<Item = ((usize, usize), Vec<F>)>,
        form: AlgebraForm<F>,
    ) -> Result<Self, LieError> {
        let n = labels.len();
        if n == 0 {
            return Err(LieError::ZeroDimension);
        }
        let mut structure = vec![zero_vec::<F>(n); n * (n - 1) / 2];
        let mut seen = vec![false; structure.len()];
        for ((i, j), out) in brackets {
            for idx in [i, j] {
                if idx >= n {
                    return Err(LieError::IndexOutOfRange { index: idx, dim: n });
                }
            }
            if i == j {
                return Err(LieError::DiagonalBracket(i));
            }
            if out.len() != n {
                return Err(LieError::DimensionMismatch { expected: n, got: out.len() });
            }
            let (a, b, v) = if i < j { (i, j, out) } else { (j, i, out.into_iter().map(|x| -x).collect()) };
            let p = pair_index(n, a, b);
            if seen[p] {
                return Err(LieError::DuplicateBracket(a, b));
            }
            seen[p] = true;
            structure[p] = v;
        }
        let alg = Self { dim: n, labels, structure, form };
        alg.validate_form()?;
        Ok(alg)
    }

    /// Convenience constructor with labels `X1..Xn` and sparse brackets
    /// `(i, j, [(k, c)])`, all 0-based.
    pub fn from_sparse(
        dim: usize,
        brackets: &[(usize, usize, Vec<(usize, F)>)],
        form: AlgebraForm<F>,
    ) -> Result<Self, LieError> {
        let labels = (1..=dim).map(|k| format!("X{k}")).collect();
        let mut dense = Vec::with_capacity(brackets.len());
        for (i, j, terms) in brackets {
            let mut v = zero_vec::<F>(dim);
            for (k, c) in terms {
                if *k >= dim {
                    return Err(LieError::IndexOutOfRange { index: *k, dim });
                }
                v[*k] = v[*k].clone() + c.clone();
            }
            dense.push(((*i, *j), v));
        }
        Self::new(labels, dense, form)
    }

    pub fn abelian(dim: usize, form: AlgebraForm<F>) -> Result<Self, LieError> {
        Self::from_sparse(dim, &[], form)
    }

    fn validate_form(&self) -> Result<(), LieError> {
        let n = self.dim;
        match &self.form {
            AlgebraForm::Real => {
                if !self.structure.iter().flatten().all(Field::is_real) {
                    return Err(LieError::NotReal);
                }
            }
            AlgebraForm::Complex { sigma: None } => {}
            AlgebraForm::Complex { sigma: Some(s) } | AlgebraForm::Complexification { sigma: s } => {
                if s.nrows() != n || s.ncols() != n {
                    return Err(LieError::SigmaShape(n));
                }
                if matches!(self.form, AlgebraForm::Complexification { .. })
                    && !(self.structure.iter().flatten().all(Field::is_real) && s.is_real())
                {
                    return Err(LieError::NotReal);
                }
                if s.matmul(&s.conj()) != Matrix::identity(n) {
                    return Err(LieError::SigmaNotInvolution);
                }
                for i in 0..n {
                    for j in i + 1..n {
                        let lhs = self.apply_sigma(s, &self.bracket_basis(i, j));
                        let rhs = self.bracket(&s.column(i), &s.column(j));
                        if lhs != rhs {
                            return Err(LieError::SigmaNotAutomorphism(i, j));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    fn apply_sigma(&self, s: &Matrix<F>, v: &[F]) -> Vec<F> {
        s.mul_vec(&vec_conj(v))
    }

    /// Conjugation applied to a vector, when the algebra carries one.
    pub fn conjugate(&self, v: &[F]) -> Option<Vec<F>> {
        self.form.sigma().map(|s| self.apply_sigma(s, v))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn form(&self) -> &AlgebraForm<F> {
        &self.form
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self, LieError> {
        if labels.len() != self.dim {
            return Err(LieError::LabelCount { expected: self.dim, got: labels.len() });
        }
        self.labels = labels;
        Ok(self)
    }

    pub fn is_real_form(&self) -> bool {
        matches!(self.form, AlgebraForm::Real)
    }

    /// `[X_i, X_j]` as a coordinate vector.
    pub fn bracket_basis(&self, i: usize, j: usize) -> Vec<F> {
        use std::cmp::Ordering;
        match i.cmp(&j) {
            Ordering::Equal => zero_vec(self.dim),
            Ordering::Less => self.structure[pair_index(self.dim, i, j)].clone(),
            Ordering::Greater => {
                self.structure[pair_index(self.dim, j, i)].iter().map(|x| -x.clone()).collect()
            }
        }
    }

    pub fn structure_constant(&self, i: usize, j: usize, k: usize) -> F {
        self.bracket_basis(i, j)[k].clone()
    }

    /// Nonzero stored brackets `(i, j, [X_i, X_j])` with `i < j`.
    pub fn nonzero_brackets(&self) -> impl Iterator<Item = (usize, usize, &Vec<F>)> + '_ {
        let n = self.dim;
        (0..n)
            .flat_map(move |i| (i + 1..n).map(move |j| (i, j)))
            .map(move |(i, j)| (i, j, &self.structure[pair_index(n, i, j)]))
            .filter(|(_, _, v)| !vec_is_zero(v))
    }

    /// Bilinear extension of the bracket.
    pub fn bracket(&self, u: &[F], v: &[F]) -> Vec<F> {
        let n = self.dim;
        assert_eq!(u.len(), n, "vector dimension mismatch");
        assert_eq!(v.len(), n, "vector dimension mismatch");
        let mut out = zero_vec(n);
        for i in 0..n {
            if u[i].is_zero() {
                continue;
            }
            for j in 0..n {
                if i == j || v[j].is_zero() {
                    continue;
                }
                let c = u[i].clone() * v[j].clone();
                out = vec_add(&out, &vec_scale(&self.bracket_basis(i, j), &c));
            }
        }
        out
    }

    pub fn jacobi_check(&self) -> JacobiReport {
        let n = self.dim;
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let (xi, xj, xk) = (unit_vec::<F>(n, i), unit_vec(n, j), unit_vec(n, k));
                    let a = self.bracket(&self.bracket_basis(i, j), &xk);
                    let b = self.bracket(&self.bracket_basis(j, k), &xi);
                    let c = self.bracket(&self.bracket_basis(k, i), &xj);
                    if !vec_is_zero(&vec_add(&vec_add(&a, &b), &c)) {
                        return JacobiReport { ok: false, witness: Some((i, j, k)) };
                    }
                }
            }
        }
        JacobiReport { ok: true, witness: None }
    }

    /// Matrix of `ad(v) = [v, .]`; column `k` is `[v, X_k]`.
    pub fn adjoint(&self, v: &[F]) -> Result<Matrix<F>, LieError> {
        if v.len() != self.dim {
            return Err(LieError::DimensionMismatch { expected: self.dim, got: v.len() });
        }
        let cols: Vec<Vec<F>> =
            (0..self.dim).map(|k| self.bracket(v, &unit_vec(self.dim, k))).collect();
        Ok(Matrix::from_columns(&cols))
    }

    fn ad_basis(&self, i: usize) -> Matrix<F> {
        let cols: Vec<Vec<F>> = (0..self.dim).map(|k| self.bracket_basis(i, k)).collect();
        Matrix::from_columns(&cols)
    }

    /// Span of `[s, t]` for `s` in `a`, `t` in `b`.
    pub fn bracket_span(&self, a: &Subspace<F>, b: &Subspace<F>) -> Subspace<F> {
        let vecs: Vec<Vec<F>> = a
            .basis()
            .iter()
            .flat_map(|s| b.basis().iter().map(move |t| (s, t)))
            .map(|(s, t)| self.bracket(s, t))
            .collect();
        Subspace::span(self.dim, vecs)
    }

    /// `[g, g]`, the span of all basis brackets.
    pub fn derived_subalgebra(&self) -> Subspace<F> {
        Subspace::span(self.dim, self.structure.iter().cloned())
    }

    /// `g = D0 ⊇ D1 ⊇ ...` until it stabilises (the last entry repeats no further).
    pub fn derived_series(&self) -> Vec<Subspace<F>> {
        let mut series = vec![Subspace::full(self.dim)];
        loop {
            let last = series.last().unwrap();
            let next = self.bracket_span(last, last);
            if next.dim() == last.dim() {
                break;
            }
            series.push(next);
        }
        series
    }

    /// `g = C0 ⊇ C1 = [g, C0] ⊇ ...` until it stabilises.
    pub fn lower_central_series(&self) -> Vec<Subspace<F>> {
        let full = Subspace::full(self.dim);
        let mut series = vec![full.clone()];
        loop {
            let last = series.last().unwrap();
            let next = self.bracket_span(&full, last);
            if next.dim() == last.dim() {
                break;
            }
            series.push(next);
        }
        series
    }

    pub fn is_abelian(&self) -> bool {
        self.structure.iter().all(|v| vec_is_zero(v))
    }

    pub fn is_solvable(&self) -> bool {
        self.derived_series().last().is_some_and(|s| s.dim() == 0)
    }

    pub fn is_nilpotent(&self) -> bool {
        self.lower_central_series().last().is_some_and(|s| s.dim() == 0)
    }

    pub fn center(&self) -> Subspace<F> {
        // v central iff sum_i v_i [X_i, X_k] = 0 for all k
        let n = self.dim;
        let mut rows = Vec::new();
        for k in 0..n {
            let cols: Vec<Vec<F>> = (0..n).map(|i| self.bracket_basis(i, k)).collect();
            rows.extend(Matrix::from_columns(&cols).rows_vec());
        }
        Subspace::span(n, Matrix::from_rows(rows).nullspace())
    }

    pub fn is_ideal(&self, s: &Subspace<F>) -> bool {
        self.bracket_span(&Subspace::full(self.dim), s).is_subspace_of(s)
    }

    pub fn is_subalgebra(&self, s: &Subspace<F>) -> bool {
        self.bracket_span(s, s).is_subspace_of(s)
    }

    /// Nilradical of a solvable algebra, computed as `{v : ad v nilpotent}`.
    ///
    /// With `A` the unital associative algebra generated by `ad(g)`, the set
    /// of nilpotent `ad v` is `ad(g) ∩ rad A`, and in characteristic zero
    /// `rad A = {a : tr(ab) = 0 for all b in A}`, which makes the condition
    /// linear in `v`. The result is re-checked to be an ideal containing
    /// `[g, g]` on which `ad` is nilpotent.
    pub fn nilradical_solvable(&self) -> Result<Subspace<F>, LieError> {
        if !self.is_solvable() {
            return Err(LieError::NotSolvable);
        }
        let n = self.dim;
        let gens: Vec<Matrix<F>> = (0..n).map(|i| self.ad_basis(i)).collect();
        let algebra = associative_closure(&gens, n);
        let traces = Matrix::from_fn(algebra.len(), n, |r, c| gens[c].matmul(&algebra[r]).trace());
        let nil = Subspace::span(n, traces.nullspace());

        if !self.derived_subalgebra().is_subspace_of(&nil) {
            return Err(LieError::InternalCheckFailed("nilradical does not contain [g, g]".into()));
        }
        if !self.is_ideal(&nil) {
            return Err(LieError::InternalCheckFailed("nilradical is not an ideal".into()));
        }
        for v in nil.basis() {
            if !self.adjoint(v)?.pow(n as u32).is_zero() {
                return Err(LieError::InternalCheckFailed("ad is not nilpotent on the nilradical".into()));
            }
        }
        Ok(nil)
    }

    /// `true` iff `tr ad(X_i) = 0` for every basis vector.
    pub fn unimodular_check(&self) -> bool {
        (0..self.dim).all(|i| self.ad_basis(i).trace().is_zero())
    }

    fn rational_char_poly(&self, v: &[F]) -> Result<Poly<Rational>, LieError> {
        self.adjoint(v)?.char_poly().to_rational().ok_or(LieError::NotReal)
    }

    /// Sampled classification of the adjoint eigenvalues with the default seed.
    pub fn classify_type(&self, samples: usize) -> Result<AdjointType, LieError> {
        self.classify_type_seeded(samples, DEFAULT_SAMPLE_SEED)
    }

    /// Checks `ad(X_i)` for every basis vector, then `ad(v)` for `samples`
    /// pseudo-random integer combinations drawn from a ChaCha stream seeded
    /// with `seed`. A larger `samples` only extends the same sequence.
    pub fn classify_type_seeded(&self, samples: usize, seed: u64) -> Result<AdjointType, LieError> {
        if !self.is_real_form() {
            return Err(LieError::WrongForm("real"));
        }
        if !self.is_solvable() {
            return Err(LieError::NotSolvable);
        }
        let n = self.dim;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut vectors: Vec<Vec<F>> = (0..n).map(|k| unit_vec(n, k)).collect();
        for _ in 0..samples {
            let v: Vec<F> = loop {
                let v: Vec<F> = (0..n).map(|_| F::from_i64(rng.gen_range(-5..=5))).collect();
                if !vec_is_zero(&v) {
                    break v;
                }
            };
            vectors.push(v);
        }
        let (mut all_nil, mut all_real, mut all_imag) = (true, true, true);
        let (mut some_nonreal, mut some_nonimag) = (false, false);
        for v in &vectors {
            let p = self.rational_char_poly(v)?;
            let nilpotent = p == Poly::t().pow(n as u32);
            let real = all_roots_real(&p);
            let imag = all_roots_imaginary(&p);
            all_nil &= nilpotent;
            all_real &= real;
            all_imag &= imag;
            some_nonreal |= !real;
            some_nonimag |= !imag;
        }
        Ok(if all_nil {
            AdjointType::Nilpotent
        } else if all_real && !all_imag {
            AdjointType::CompletelySolvable
        } else if all_imag && !all_real {
            AdjointType::Rigid
        } else if some_nonreal && some_nonimag {
            AdjointType::Mixed
        } else {
            AdjointType::Inconclusive
        })
    }

    /// `g ⊗ C` in its real `2n` description with basis `(X_1..X_n, iX_1..iX_n)`
    /// and conjugation `diag(I, -I)`.
    pub fn complexify(&self) -> Result<Self, LieError> {
        if !self.is_real_form() {
            return Err(LieError::WrongForm("real"));
        }
        let n = self.dim;
        let mut brackets = Vec::new();
        for a in 0..2 * n {
            for b in a + 1..2 * n {
                let (ba, bb) = (a / n, b / n);
                let base = self.bracket_basis(a % n, b % n);
                if vec_is_zero(&base) {
                    continue;
                }
                let mut out = zero_vec::<F>(2 * n);
                for (k, c) in base.into_iter().enumerate() {
                    match ba + bb {
                        0 => out[k] = c,
                        1 => out[n + k] = c,
                        _ => out[k] = -c,
                    }
                }
                brackets.push(((a, b), out));
            }
        }
        let mut labels: Vec<String> = self.labels.clone();
        labels.extend(self.labels.iter().map(|l| format!("i{l}")));
        let sigma = Matrix::from_fn(2 * n, 2 * n, |r, c| {
            if r != c {
                F::zero()
            } else if r < n {
                F::one()
            } else {
                -F::one()
            }
        });
        Self::new(labels, brackets, AlgebraForm::Complexification { sigma })
    }

    /// Underlying real algebra of a complex algebra, basis `(X_1, iX_1, X_2, iX_2, ...)`.
    pub fn realify(&self) -> Result<Self, LieError> {
        if !matches!(self.form, AlgebraForm::Complex { .. }) {
            return Err(LieError::WrongForm("complex"));
        }
        let n = self.dim;
        let mut brackets = Vec::new();
        for a in 0..2 * n {
            for b in a + 1..2 * n {
                let base = self.bracket_basis(a / 2, b / 2);
                if vec_is_zero(&base) {
                    continue;
                }
                let quarter_turns = a % 2 + b % 2;
                let mut out = zero_vec::<F>(2 * n);
                for (k, c) in base.into_iter().enumerate() {
                    let (mut re, mut im) = (c.real_part(), c.imag_part());
                    for _ in 0..quarter_turns {
                        (re, im) = (-im, re);
                    }
                    out[2 * k] = F::from_rational(re);
                    out[2 * k + 1] = F::from_rational(im);
                }
                brackets.push(((a, b), out));
            }
        }
        let labels = self.labels.iter().flat_map(|l| [l.clone(), format!("i{l}")]).collect();
        Self::new(labels, brackets, AlgebraForm::Real)
    }

    /// Rewrites the structure constants in the basis formed by the columns of `p`.
    pub fn change_basis(&self, p: &Matrix<F>) -> Result<Self, LieError> {
        let n = self.dim;
        if p.nrows() != n || p.ncols() != n {
            return Err(LieError::DimensionMismatch { expected: n, got: p.nrows() });
        }
        let inv = p.inverse().ok_or(LieError::SingularBasisChange)?;
        let mut brackets = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                let v = inv.mul_vec(&self.bracket(&p.column(a), &p.column(b)));
                brackets.push(((a, b), v));
            }
        }
        let form = match &self.form {
            AlgebraForm::Real => AlgebraForm::Real,
            AlgebraForm::Complex { sigma } => AlgebraForm::Complex {
                sigma: sigma.as_ref().map(|s| inv.matmul(s).matmul(&p.conj())),
            },
            AlgebraForm::Complexification { sigma } => {
                AlgebraForm::Complexification { sigma: inv.matmul(sigma).matmul(p) }
            }
        };
        Self::new(self.labels.clone(), brackets, form)
    }

    /// Same brackets with a different form marker (validated).
    pub fn with_form(&self, form: AlgebraForm<F>) -> Result<Self, LieError> {
        let alg = Self { dim: self.dim, labels: self.labels.clone(), structure: self.structure.clone(), form };
        alg.validate_form()?;
        Ok(alg)
    }
}

/// Basis of the unital associative algebra generated by `gens` (n x n).
fn associative_closure<F: Field>(gens: &[Matrix<F>], n: usize) -> Vec<Matrix<F>> {
    let mut basis = EchelonSet::new(n * n);
    let mut elements: Vec<Matrix<F>> = Vec::new();
    let mut queue: Vec<Matrix<F>> = vec![Matrix::identity(n)];
    queue.extend(gens.iter().cloned());
    while let Some(m) = queue.pop() {
        if basis.insert(m.flatten()) {
            for g in gens {
                queue.push(m.matmul(g));
            }
            elements.push(m);
        }
    }
    elements
}

/// Incrementally maintained row-echelon set for membership tests.
struct EchelonSet<F> {
    rows: Vec<(usize, Vec<F>)>,
    len: usize,
}

impl<F: Field> EchelonSet<F> {
    fn new(len: usize) -> Self {
        Self { rows: Vec::new(), len }
    }

    /// Inserts `v` if it is independent of the stored vectors.
    fn insert(&mut self, mut v: Vec<F>) -> bool {
        debug_assert_eq!(v.len(), self.len);
        for (pivot, row) in &self.rows {
            if !v[*pivot].is_zero() {
                let f = v[*pivot].clone();
                v = vec_sub(&v, &vec_scale(row, &f));
            }
        }
        let Some(p) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = F::one() / v[p].clone();
        let v = vec_scale(&v, &inv);
        for (_, row) in self.rows.iter_mut() {
            if !row[p].is_zero() {
                let f = row[p].clone();
                *row = vec_sub(row, &vec_scale(&v, &f));
            }
        }
        self.rows.push((p, v));
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{gauss, GaussianRational as G};

    fn g(v: i64) -> G {
        G::from_ints(v, 0)
    }

    fn kodaira() -> LieAlgebra<G> {
        LieAlgebra::from_sparse(4, &[(0, 1, vec![(2, g(-1))])], AlgebraForm::Real).unwrap()
    }

    fn two_dim_affine() -> LieAlgebra<G> {
        LieAlgebra::from_sparse(2, &[(0, 1, vec![(1, g(1))])], AlgebraForm::Real).unwrap()
    }

    #[test]
    fn rejects_degenerate_input() {
        assert_eq!(
            LieAlgebra::<G>::from_sparse(0, &[], AlgebraForm::Real).unwrap_err(),
            LieError::ZeroDimension
        );
        assert_eq!(
            LieAlgebra::from_sparse(2, &[(1, 1, vec![(0, g(1))])], AlgebraForm::Real).unwrap_err(),
            LieError::DiagonalBracket(1)
        );
        assert_eq!(
            LieAlgebra::from_sparse(2, &[(0, 1, vec![(0, G::i())])], AlgebraForm::Real).unwrap_err(),
            LieError::NotReal
        );
    }

    #[test]
    fn reversed_pair_is_negated() {
        let l = LieAlgebra::from_sparse(2, &[(1, 0, vec![(1, g(1))])], AlgebraForm::Real).unwrap();
        assert_eq!(l.bracket_basis(0, 1), vec![g(0), g(-1)]);
    }

    #[test]
    fn adjoint_of_zero_is_zero() {
        let l = kodaira();
        assert!(l.adjoint(&zero_vec(4)).unwrap().is_zero());
        assert!(matches!(l.adjoint(&zero_vec(3)), Err(LieError::DimensionMismatch { .. })));
    }

    #[test]
    fn unimodular_two_dim() {
        assert!(!two_dim_affine().unimodular_check());
        assert!(kodaira().unimodular_check());
    }

    #[test]
    fn nilradical_of_affine_line() {
        let l = two_dim_affine();
        let n = l.nilradical_solvable().unwrap();
        assert_eq!(n, Subspace::span(2, vec![vec![g(0), g(1)]]));
    }

    #[test]
    fn not_solvable_is_reported() {
        // sl2: [H,E]=2E, [H,F]=-2F, [E,F]=H
        let sl2 = LieAlgebra::from_sparse(
            3,
            &[(0, 1, vec![(1, g(2))]), (0, 2, vec![(2, g(-2))]), (1, 2, vec![(0, g(1))])],
            AlgebraForm::Real,
        )
        .unwrap();
        assert!(sl2.jacobi_check().ok);
        assert_eq!(sl2.nilradical_solvable().unwrap_err(), LieError::NotSolvable);
        assert_eq!(sl2.classify_type(3).unwrap_err(), LieError::NotSolvable);
    }

    #[test]
    fn complex_sigma_validation() {
        // sigma = identity is the standard conjugation of a complex algebra with real constants
        let l = LieAlgebra::from_sparse(
            3,
            &[(0, 1, vec![(2, g(1))])],
            AlgebraForm::Complex { sigma: Some(Matrix::identity(3)) },
        );
        assert!(l.is_ok());
        // brackets with imaginary constants are not preserved by plain conjugation
        let bad = LieAlgebra::from_sparse(
            3,
            &[(0, 1, vec![(2, gauss((0, 1), (1, 1)))])],
            AlgebraForm::Complex { sigma: Some(Matrix::identity(3)) },
        );
        assert_eq!(bad.unwrap_err(), LieError::SigmaNotAutomorphism(0, 1));
        let not_inv = LieAlgebra::<G>::abelian(
            2,
            AlgebraForm::Complex { sigma: Some(Matrix::from_i64_rows(&[&[2, 0], &[0, 1]])) },
        );
        assert_eq!(not_inv.unwrap_err(), LieError::SigmaNotInvolution);
    }

    #[test]
    fn change_basis_identity_is_noop() {
        let l = kodaira();
        assert_eq!(l.change_basis(&Matrix::identity(4)).unwrap(), l);
        assert_eq!(
            l.change_basis(&Matrix::zeros(4, 4)).unwrap_err(),
            LieError::SingularBasisChange
        );
    }
}
