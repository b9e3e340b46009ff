//! Built-in algebras, complex structures and group laws.
//!
//! Group laws are evaluated in floating point and differentiated
//! numerically at the identity, as an independent check on the exact
//! bracket tables.

use std::collections::BTreeMap;

use nalgebra::{Complex, DMatrix};
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::complex_structure::{is_integrable, AlmostComplexStructure, ComplexStructureError};
use crate::lie::{AdjointType, AlgebraForm, LieAlgebra, LieError};
use crate::scalar::{rat, rational_to_f64, Rational};
use crate::Scalar;

type C64 = Complex<f64>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CatalogError {
    #[error("unknown catalog entry `{0}`")]
    UnknownName(String),
    #[error("parameter `{name}` out of range: {reason}")]
    ParamOutOfRange { name: &'static str, reason: String },
    #[error("malformed parameter assignment `{0}`")]
    BadParam(String),
    #[error("entry `{0}` has no group law")]
    NoGroupLaw(String),
    #[error("point has {got} coordinates, expected {expected}")]
    BadPoint { expected: usize, got: usize },
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error(transparent)]
    ComplexStructure(#[from] ComplexStructureError),
}

type Result<T> = std::result::Result<T, CatalogError>;

/// Entry names accepted by [`get`], with their aliases.
pub const NAMES: &[(&str, &[&str])] = &[
    ("abelian", &["family1"]),
    ("hyperelliptic", &["family2", "example1"]),
    ("inoue-s0", &["family3"]),
    ("primary-kodaira", &["family4", "example2"]),
    ("secondary-kodaira", &["family5"]),
    ("inoue-s-pm", &["family6"]),
    ("example3", &[]),
    ("example4", &[]),
    ("abelian3", &[]),
    ("nilpotent3", &["iwasawa"]),
    ("nonnilpotent3", &[]),
];

/// Multiples of π allowed for `η`.
pub const ETA_CHOICES: [(i64, i64); 4] = [(1, 1), (2, 3), (1, 2), (1, 3)];

const MAX_EXAMPLE3_RANK: usize = 6;
const MAX_ABELIAN_DIM: usize = 16;

#[derive(Debug, Clone, PartialEq)]
pub struct Params {
    pub a: Rational,
    pub b: Rational,
    pub q: Rational,
    /// `η / π`.
    pub eta: Rational,
    pub l: usize,
    pub k: usize,
    /// Root-of-unity orders, one per `R` factor; `None` means all 4.
    pub s: Option<Vec<u32>>,
    pub dim: usize,
}

impl Default for Params {
    fn default() -> Self {
        Self { a: Rational::one(), b: Rational::one(), q: rat(1, 2), eta: rat(1, 2), l: 1, k: 1, s: None, dim: 4 }
    }
}

fn parse_rational(name: &str, v: &str) -> Result<Rational> {
    v.trim().parse::<Rational>().map_err(|_| CatalogError::BadParam(format!("{name}={v}")))
}

fn parse_usize(name: &str, v: &str) -> Result<usize> {
    v.trim().parse::<usize>().map_err(|_| CatalogError::BadParam(format!("{name}={v}")))
}

impl Params {
    /// Applies `name=value` pairs separated by commas, e.g. `a=1/2,b=3` or `s=4:4`.
    pub fn parse_assignments(mut self, text: &str) -> Result<Self> {
        for part in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (name, value) = part.split_once('=').ok_or_else(|| CatalogError::BadParam(part.to_string()))?;
            match name.trim() {
                "a" => self.a = parse_rational("a", value)?,
                "b" => self.b = parse_rational("b", value)?,
                "q" => self.q = parse_rational("q", value)?,
                "eta" => self.eta = parse_rational("eta", value.trim().trim_end_matches("pi").trim_end_matches('*'))?,
                "l" => self.l = parse_usize("l", value)?,
                "k" => self.k = parse_usize("k", value)?,
                "dim" => self.dim = parse_usize("dim", value)?,
                "s" => {
                    let orders = value
                        .split(':')
                        .map(|x| x.trim().parse::<u32>().map_err(|_| CatalogError::BadParam(part.to_string())))
                        .collect::<Result<Vec<_>>>()?;
                    self.s = Some(orders);
                }
                _ => return Err(CatalogError::BadParam(part.to_string())),
            }
        }
        Ok(self)
    }
}

/// Explicit multiplication on `C^m`, identity at the origin.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "law", rename_all = "snake_case")]
pub enum GroupLaw {
    /// Componentwise addition on `C^m`.
    Abelian { complex_dim: usize },
    /// `(w_1 + e^{iηt} z_1, w_2 + z_2)`, `t = Re w_2`; stores `η / π`.
    Hyperelliptic { eta_over_pi: f64 },
    /// `(w_1 + z_1, w_2 - i w̄_1 z_1 + z_2)`.
    PrimaryKodaira,
    /// `(x + x', y + y', z + z' + x y')`.
    Nilpotent,
    /// `(x + x', y + e^x y', z + e^{-x} z')`.
    NonNilpotent,
}

impl GroupLaw {
    pub fn complex_dim(&self) -> usize {
        match self {
            GroupLaw::Abelian { complex_dim } => *complex_dim,
            GroupLaw::Hyperelliptic { .. } | GroupLaw::PrimaryKodaira => 2,
            GroupLaw::Nilpotent | GroupLaw::NonNilpotent => 3,
        }
    }

    fn mul(&self, p: &[C64], q: &[C64]) -> Vec<C64> {
        let i = C64::new(0.0, 1.0);
        match self {
            GroupLaw::Abelian { .. } => p.iter().zip(q).map(|(a, b)| a + b).collect(),
            GroupLaw::Hyperelliptic { eta_over_pi } => {
                let t = p[1].re;
                let rot = (i * eta_over_pi * std::f64::consts::PI * t).exp();
                vec![p[0] + rot * q[0], p[1] + q[1]]
            }
            GroupLaw::PrimaryKodaira => vec![p[0] + q[0], p[1] - i * p[0].conj() * q[0] + q[1]],
            GroupLaw::Nilpotent => vec![p[0] + q[0], p[1] + q[1], p[2] + q[2] + p[0] * q[1]],
            GroupLaw::NonNilpotent => vec![p[0] + q[0], p[1] + p[0].exp() * q[1], p[2] + (-p[0]).exp() * q[2]],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Metadata {
    pub adjoint_type: AdjointType,
    pub unimodular: bool,
    pub kahler: bool,
    /// Real first Betti number of the algebra, `dim g - dim [g, g]`.
    pub b1: usize,
    pub tags: Vec<&'static str>,
}

#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub params: BTreeMap<&'static str, String>,
    pub algebra: LieAlgebra<Scalar>,
    pub j: Option<AlmostComplexStructure<Scalar>>,
    pub group_law: Option<GroupLaw>,
    pub metadata: Metadata,
}

fn s(x: i64) -> Scalar {
    Scalar::from_ints(x, 0)
}

fn q(x: &Rational) -> Scalar {
    Scalar::from(x.clone())
}

fn real4(brackets: &[(usize, usize, Vec<(usize, Scalar)>)]) -> Result<LieAlgebra<Scalar>> {
    let labels = (1..=4).map(|k| format!("X{k}")).collect();
    Ok(LieAlgebra::from_sparse(4, brackets, AlgebraForm::Real)?.with_labels(labels)?)
}

/// `JX_1 = X_2, JX_2 = -X_1, JX_3 = X_4, JX_4 = -X_3` and its higher-dimensional analogue.
fn paired_j(dim: usize) -> Result<AlmostComplexStructure<Scalar>> {
    Ok(AlmostComplexStructure::standard(dim)?)
}

fn family6_j(qv: &Rational) -> Result<AlmostComplexStructure<Scalar>> {
    let mq = -q(qv);
    Ok(AlmostComplexStructure::from_images(
        4,
        &[vec![(1, s(1))], vec![(0, s(-1))], vec![(3, s(1)), (1, mq.clone())], vec![(2, s(-1)), (0, mq)]],
    )?)
}

fn out_of_range(name: &'static str, reason: impl Into<String>) -> CatalogError {
    CatalogError::ParamOutOfRange { name, reason: reason.into() }
}

fn totient(n: u32) -> u32 {
    (1..=n).filter(|&k| num_integer::gcd(k, n) == 1).count() as u32
}

fn example3_orders(p: &Params) -> Result<Vec<u32>> {
    let orders = p.s.clone().unwrap_or_else(|| vec![4; 2 * p.k]);
    if orders.len() != 2 * p.k {
        return Err(out_of_range("s", format!("expected {} orders, got {}", 2 * p.k, orders.len())));
    }
    for &o in &orders {
        // a finite-order automorphism of Z^{2l} has order s only if φ(s) <= 2l
        if o == 0 || totient(o) > 2 * p.l as u32 {
            return Err(out_of_range("s", format!("order {o} cannot preserve Z^{}", 2 * p.l)));
        }
    }
    Ok(orders)
}

fn example3_algebra(l: usize, k: usize) -> Result<LieAlgebra<Scalar>> {
    let n = 2 * l + 2 * k;
    let mut brackets = Vec::new();
    for i in 1..=k {
        let x = 2 * l + 2 * i - 1;
        for jj in 1..=l {
            brackets.push((x, 2 * jj - 2, vec![(2 * jj - 1, s(-1))]));
            brackets.push((x, 2 * jj - 1, vec![(2 * jj - 2, s(1))]));
        }
    }
    let labels = (1..=n).map(|k| format!("X{k}")).collect();
    Ok(LieAlgebra::from_sparse(n, &brackets, AlgebraForm::Real)?.with_labels(labels)?)
}

fn complex3(brackets: &[(usize, usize, Vec<(usize, Scalar)>)]) -> Result<LieAlgebra<Scalar>> {
    let labels = ["X", "Y", "Z"].iter().map(|s| s.to_string()).collect();
    Ok(LieAlgebra::from_sparse(3, brackets, AlgebraForm::Complex { sigma: None })?.with_labels(labels)?)
}

fn canonical(name: &str) -> Option<&'static str> {
    NAMES.iter().find(|(n, aliases)| *n == name || aliases.contains(&name)).map(|(n, _)| *n)
}

fn derived_b1(l: &LieAlgebra<Scalar>) -> usize {
    let real_dim = if l.is_real_form() { l.dim() } else { 2 * l.dim() };
    let derived = if l.is_real_form() { l.derived_subalgebra().dim() } else { 2 * l.derived_subalgebra().dim() };
    real_dim - derived
}

/// Looks up and validates a catalog entry.
pub fn get(name: &str, p: &Params) -> Result<CatalogEntry> {
    let canon = canonical(name).ok_or_else(|| CatalogError::UnknownName(name.to_string()))?;
    let mut shown = BTreeMap::new();
    let (algebra, j, law, adjoint_type, kahler, mut tags): (_, _, _, _, _, Vec<&'static str>) = match canon {
        "abelian" => {
            if p.dim == 0 || p.dim % 2 == 1 || p.dim > MAX_ABELIAN_DIM {
                return Err(out_of_range("dim", format!("must be even in 2..={MAX_ABELIAN_DIM}")));
            }
            shown.insert("dim", p.dim.to_string());
            let labels = (1..=p.dim).map(|k| format!("X{k}")).collect();
            let l = LieAlgebra::abelian(p.dim, AlgebraForm::Real)?.with_labels(labels)?;
            let law = GroupLaw::Abelian { complex_dim: p.dim / 2 };
            (l, Some(paired_j(p.dim)?), Some(law), AdjointType::Nilpotent, true, vec!["complex_torus"])
        }
        "hyperelliptic" => {
            if !ETA_CHOICES.iter().any(|&(n, d)| p.eta == rat(n, d)) {
                return Err(out_of_range("eta", "η/π must be one of 1, 2/3, 1/2, 1/3"));
            }
            shown.insert("eta", format!("{}*pi", p.eta));
            let l = real4(&[(3, 0, vec![(1, s(-1))]), (3, 1, vec![(0, s(1))])])?;
            let law = GroupLaw::Hyperelliptic { eta_over_pi: rational_to_f64(&p.eta) };
            (l, Some(paired_j(4)?), Some(law), AdjointType::Rigid, true, vec!["hyperelliptic_surface"])
        }
        "inoue-s0" => {
            if p.a.is_zero() || p.b.is_zero() {
                return Err(out_of_range(if p.a.is_zero() { "a" } else { "b" }, "must be nonzero"));
            }
            shown.insert("a", p.a.to_string());
            shown.insert("b", p.b.to_string());
            let (a, b) = (q(&p.a), q(&p.b));
            let two_a = a.clone() + a.clone();
            let l = real4(&[
                (3, 0, vec![(0, a.clone()), (1, -b.clone())]),
                (3, 1, vec![(0, b), (1, a)]),
                (3, 2, vec![(2, -two_a)]),
            ])?;
            (l, Some(paired_j(4)?), None, AdjointType::Mixed, false, vec!["inoue_surface"])
        }
        "primary-kodaira" => {
            let l = real4(&[(0, 1, vec![(2, s(-1))])])?;
            (l, Some(paired_j(4)?), Some(GroupLaw::PrimaryKodaira), AdjointType::Nilpotent, false, vec!["kodaira_surface"])
        }
        "secondary-kodaira" => {
            let l = real4(&[(0, 1, vec![(2, s(-1))]), (3, 0, vec![(1, s(-1))]), (3, 1, vec![(0, s(1))])])?;
            (l, Some(paired_j(4)?), None, AdjointType::Rigid, false, vec!["kodaira_surface"])
        }
        "inoue-s-pm" => {
            shown.insert("q", p.q.to_string());
            let l = real4(&[(1, 2, vec![(0, s(-1))]), (3, 1, vec![(1, s(1))]), (3, 2, vec![(2, s(-1))])])?;
            (l, Some(family6_j(&p.q)?), None, AdjointType::CompletelySolvable, false, vec!["inoue_surface"])
        }
        "example3" | "example4" => {
            if !(1..=MAX_EXAMPLE3_RANK).contains(&p.l) {
                return Err(out_of_range("l", format!("must be in 1..={MAX_EXAMPLE3_RANK}")));
            }
            if !(1..=MAX_EXAMPLE3_RANK).contains(&p.k) {
                return Err(out_of_range("k", format!("must be in 1..={MAX_EXAMPLE3_RANK}")));
            }
            shown.insert("l", p.l.to_string());
            shown.insert("k", p.k.to_string());
            let mut tags = vec!["finite_quotient_of_torus"];
            if canon == "example3" {
                let orders = example3_orders(p)?;
                shown.insert("s", orders.iter().map(u32::to_string).collect::<Vec<_>>().join(":"));
            } else {
                tags.push("diffeomorphic_to_torus");
            }
            let l = example3_algebra(p.l, p.k)?;
            let dim = l.dim();
            (l, Some(paired_j(dim)?), None, AdjointType::Rigid, true, tags)
        }
        "abelian3" => {
            let l = LieAlgebra::abelian(3, AlgebraForm::Complex { sigma: None })?
                .with_labels(["X", "Y", "Z"].iter().map(|s| s.to_string()).collect())?;
            (l, None, Some(GroupLaw::Abelian { complex_dim: 3 }), AdjointType::Nilpotent, true, vec!["complex_torus"])
        }
        "nilpotent3" => {
            let l = complex3(&[(0, 1, vec![(2, s(1))])])?;
            (l, None, Some(GroupLaw::Nilpotent), AdjointType::Nilpotent, false, vec!["iwasawa_type"])
        }
        "nonnilpotent3" => {
            let l = complex3(&[(0, 1, vec![(1, s(-1))]), (0, 2, vec![(2, s(1))])])?;
            (l, None, Some(GroupLaw::NonNilpotent), AdjointType::Mixed, false, vec!["non_nilpotent_type"])
        }
        _ => unreachable!("every canonical name is handled"),
    };
    let jacobi = algebra.jacobi_check();
    if !jacobi.ok {
        return Err(CatalogError::Lie(LieError::InternalCheckFailed(format!("jacobi {:?}", jacobi.witness))));
    }
    if let Some(j) = &j {
        if let Some((a, b)) = is_integrable(&algebra, j)?.witness {
            return Err(CatalogError::ComplexStructure(ComplexStructureError::NotIntegrable(a, b)));
        }
    }
    let unimodular = algebra.unimodular_check();
    if unimodular {
        tags.push("unimodular");
    }
    if kahler {
        tags.push("kahler");
    }
    let b1 = derived_b1(&algebra);
    Ok(CatalogEntry {
        name: canon,
        params: shown,
        algebra,
        j,
        group_law: law,
        metadata: Metadata { adjoint_type, unimodular, kahler, b1, tags },
    })
}

/// Entry names with their aliases.
pub fn list() -> impl Iterator<Item = (&'static str, &'static [&'static str])> {
    NAMES.iter().copied()
}

/// Evaluates `p · q`.
pub fn group_law_eval(entry: &CatalogEntry, p: &[C64], q: &[C64]) -> Result<Vec<C64>> {
    let law = entry.group_law.as_ref().ok_or_else(|| CatalogError::NoGroupLaw(entry.name.to_string()))?;
    let m = law.complex_dim();
    for x in [p, q] {
        if x.len() != m {
            return Err(CatalogError::BadPoint { expected: m, got: x.len() });
        }
    }
    Ok(law.mul(p, q))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CrossCheckConfig {
    pub step: f64,
    pub rank_threshold: f64,
}

impl Default for CrossCheckConfig {
    fn default() -> Self {
        Self { step: 1e-4, rank_threshold: 1e-6 }
    }
}

/// Basis-free data compared between the numeric and the stored algebra.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RankInvariants {
    pub dim: usize,
    pub derived_series: Vec<usize>,
    pub lower_central_series: Vec<usize>,
    pub center_dim: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CrossCheckReport {
    /// `constants[i][j][k]`: coefficient of `e_k` in `[e_i, e_j]`, real coordinates.
    pub constants: Vec<Vec<Vec<f64>>>,
    pub max_abs_constant: f64,
    pub numeric: RankInvariants,
    pub stored: RankInvariants,
    pub invariants_match: bool,
}

fn to_complex(x: &[f64]) -> Vec<C64> {
    x.chunks(2).map(|c| C64::new(c[0], c[1])).collect()
}

fn to_real(z: &[C64]) -> Vec<f64> {
    z.iter().flat_map(|c| [c.re, c.im]).collect()
}

/// Structure constants at the identity from the mixed second derivative of
/// the multiplication, `c^k_{ij} = B^k_{ij} - B^k_{ji}`.
fn numeric_constants(law: &GroupLaw, h: f64) -> Vec<Vec<Vec<f64>>> {
    let n = 2 * law.complex_dim();
    let eval = |i: usize, si: f64, j: usize, sj: f64| -> Vec<f64> {
        let mut x = vec![0.0; n];
        let mut y = vec![0.0; n];
        x[i] = si * h;
        y[j] = sj * h;
        to_real(&law.mul(&to_complex(&x), &to_complex(&y)))
    };
    let mut b = vec![vec![vec![0.0; n]; n]; n];
    for i in 0..n {
        for j in 0..n {
            let (pp, pm, mp, mm) = (eval(i, 1.0, j, 1.0), eval(i, 1.0, j, -1.0), eval(i, -1.0, j, 1.0), eval(i, -1.0, j, -1.0));
            for k in 0..n {
                b[i][j][k] = (pp[k] - pm[k] - mp[k] + mm[k]) / (4.0 * h * h);
            }
        }
    }
    (0..n).map(|i| (0..n).map(|j| (0..n).map(|k| b[i][j][k] - b[j][i][k]).collect()).collect()).collect()
}

/// Orthonormal basis (columns) of the column span, singular values above `tol`.
fn span_basis(m: &DMatrix<f64>, tol: f64) -> DMatrix<f64> {
    if m.ncols() == 0 {
        return DMatrix::zeros(m.nrows(), 0);
    }
    let svd = m.clone().svd(true, false);
    let u = svd.u.expect("requested U");
    let keep: Vec<usize> = (0..svd.singular_values.len()).filter(|&k| svd.singular_values[k] > tol).collect();
    DMatrix::from_fn(m.nrows(), keep.len(), |r, c| u[(r, keep[c])])
}

fn numeric_bracket(c: &[Vec<Vec<f64>>], u: &[f64], v: &[f64]) -> Vec<f64> {
    let n = u.len();
    let mut out = vec![0.0; n];
    for i in 0..n {
        for j in 0..n {
            let w = u[i] * v[j];
            if w != 0.0 {
                for k in 0..n {
                    out[k] += w * c[i][j][k];
                }
            }
        }
    }
    out
}

fn bracket_of_spans(c: &[Vec<Vec<f64>>], a: &DMatrix<f64>, b: &DMatrix<f64>, tol: f64) -> DMatrix<f64> {
    let n = a.nrows();
    let mut cols = Vec::new();
    for x in a.column_iter() {
        for y in b.column_iter() {
            let xv: Vec<f64> = x.iter().copied().collect();
            let yv: Vec<f64> = y.iter().copied().collect();
            cols.push(numeric_bracket(c, &xv, &yv));
        }
    }
    let m = DMatrix::from_fn(n, cols.len(), |r, k| cols[k][r]);
    span_basis(&m, tol)
}

fn series_dims(c: &[Vec<Vec<f64>>], tol: f64, derived: bool) -> Vec<usize> {
    let n = c.len();
    let full = DMatrix::<f64>::identity(n, n);
    let mut cur = full.clone();
    let mut dims = vec![n];
    loop {
        let next = bracket_of_spans(c, &cur, if derived { &cur } else { &full }, tol);
        let d = next.ncols();
        if d == *dims.last().expect("nonempty") {
            break;
        }
        dims.push(d);
        if d == 0 {
            break;
        }
        cur = next;
    }
    dims
}

fn numeric_invariants(c: &[Vec<Vec<f64>>], tol: f64) -> RankInvariants {
    let n = c.len();
    // center: x with Σ_i x_i c^k_{ij} = 0 for all j, k
    let m = DMatrix::from_fn(n * n, n, |row, i| c[i][row / n][row % n]);
    let rank = span_basis(&m.transpose(), tol).ncols();
    RankInvariants {
        dim: n,
        derived_series: series_dims(c, tol, true),
        lower_central_series: series_dims(c, tol, false),
        center_dim: n - rank,
    }
}

fn exact_series_dims(series: &[crate::Subspace<Scalar>], scale: usize) -> Vec<usize> {
    let mut dims: Vec<usize> = Vec::new();
    for s in series {
        let d = s.dim() * scale;
        if dims.last() == Some(&d) {
            break;
        }
        dims.push(d);
    }
    dims
}

/// Exact invariants of the stored algebra, in real dimensions.
pub fn stored_invariants(l: &LieAlgebra<Scalar>) -> RankInvariants {
    let scale = if l.is_real_form() { 1 } else { 2 };
    RankInvariants {
        dim: l.dim() * scale,
        derived_series: exact_series_dims(&l.derived_series(), scale),
        lower_central_series: exact_series_dims(&l.lower_central_series(), scale),
        center_dim: l.center().dim() * scale,
    }
}

/// Differentiates the group law at the identity and compares rank
/// invariants with the stored algebra.
pub fn brackets_from_group_law(entry: &CatalogEntry, cfg: &CrossCheckConfig) -> Result<CrossCheckReport> {
    let law = entry.group_law.as_ref().ok_or_else(|| CatalogError::NoGroupLaw(entry.name.to_string()))?;
    let constants = numeric_constants(law, cfg.step);
    let max_abs_constant = constants.iter().flatten().flatten().fold(0.0f64, |m, x| m.max(x.abs()));
    let numeric = numeric_invariants(&constants, cfg.rank_threshold);
    let stored = stored_invariants(&entry.algebra);
    Ok(CrossCheckReport { invariants_match: numeric == stored, constants, max_abs_constant, numeric, stored })
}

/// Largest `|(pq)r - p(qr)|` over `triples` seeded random triples with
/// coordinates in `[-1, 1] + i[-1, 1]`.
pub fn associativity_residual(entry: &CatalogEntry, triples: usize, seed: u64) -> Result<f64> {
    let law = entry.group_law.as_ref().ok_or_else(|| CatalogError::NoGroupLaw(entry.name.to_string()))?;
    let m = law.complex_dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut point = || -> Vec<C64> { (0..m).map(|_| C64::new(rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0))).collect() };
    let mut worst = 0.0f64;
    for _ in 0..triples {
        let (p, q, r) = (point(), point(), point());
        let left = law.mul(&law.mul(&p, &q), &r);
        let right = law.mul(&p, &law.mul(&q, &r));
        let diff = left.iter().zip(&right).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        worst = worst.max(diff);
    }
    Ok(worst)
}
