//! JSON documents for algebras, 2-forms, matrices and holonomy generators.
//!
//! All indices in documents are 1-based.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::cohomology::{CohomologyError, HolonomyAction};
use crate::complex_structure::{AlmostComplexStructure, ComplexStructureError};
use crate::lie::{AlgebraForm, LieAlgebra, LieError};
use crate::linalg::Matrix;
use crate::pseudo_kahler::{PseudoKahlerError, TwoForm};
use crate::scalar::{Field, Rational};
use crate::Scalar;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum IoError {
    #[error("{message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("field `{field}`: {reason}")]
    Schema { field: String, reason: String },
    #[error("Jacobi identity fails on (X{}, X{}, X{})", .0 .0, .0 .1, .0 .2)]
    Jacobi((usize, usize, usize)),
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error(transparent)]
    ComplexStructure(#[from] ComplexStructureError),
    #[error(transparent)]
    PseudoKahler(#[from] PseudoKahlerError),
    #[error(transparent)]
    Cohomology(#[from] CohomologyError),
}

type Result<T> = std::result::Result<T, IoError>;

fn schema(field: impl Into<String>, reason: impl Into<String>) -> IoError {
    IoError::Schema { field: field.into(), reason: reason.into() }
}

fn syntax(e: serde_json::Error) -> IoError {
    IoError::Syntax { line: e.line(), column: e.column(), message: e.to_string() }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FieldKind {
    Real,
    Complex,
    Complexification,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BracketDoc {
    pub i: usize,
    pub j: usize,
    pub out: BTreeMap<usize, Scalar>,
}

/// The algebra document, with optional conjugation `sigma` and complex structure `J`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraDoc {
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis: Option<Vec<String>>,
    pub field: FieldKind,
    #[serde(default)]
    pub brackets: Vec<BracketDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma: Option<Vec<Vec<Scalar>>>,
    #[serde(rename = "J", default, skip_serializing_if = "Option::is_none")]
    pub j: Option<Vec<Vec<Scalar>>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LoadedAlgebra {
    pub algebra: LieAlgebra<Scalar>,
    pub j: Option<AlmostComplexStructure<Scalar>>,
}

fn square(field: &str, rows: &[Vec<Scalar>], n: usize) -> Result<Matrix<Scalar>> {
    if rows.len() != n || rows.iter().any(|r| r.len() != n) {
        return Err(schema(field, format!("expected a {n}x{n} matrix")));
    }
    Ok(Matrix::from_rows(rows.to_vec()))
}

impl AlgebraDoc {
    /// Validates the document; Jacobi is checked when `validate` is set.
    pub fn into_algebra(self, validate: bool) -> Result<LoadedAlgebra> {
        let n = self.dim;
        if n == 0 {
            return Err(schema("dim", "must be positive"));
        }
        let labels = match self.basis {
            Some(b) if b.len() != n => return Err(schema("basis", format!("expected {n} labels, got {}", b.len()))),
            Some(b) => b,
            None => (1..=n).map(|k| format!("X{k}")).collect(),
        };
        let mut seen = BTreeMap::new();
        let mut brackets = Vec::with_capacity(self.brackets.len());
        for (idx, b) in self.brackets.into_iter().enumerate() {
            let at = |f: &str| format!("brackets[{idx}].{f}");
            for (name, v) in [("i", b.i), ("j", b.j)] {
                if !(1..=n).contains(&v) {
                    return Err(schema(at(name), format!("index {v} outside 1..={n}")));
                }
            }
            if b.i == b.j {
                return Err(schema(format!("brackets[{idx}]"), format!("diagonal bracket [X{0}, X{0}] is always zero", b.i)));
            }
            let key = (b.i.min(b.j), b.i.max(b.j));
            if let Some(first) = seen.insert(key, idx) {
                return Err(schema(format!("brackets[{idx}]"), format!("pair ({}, {}) already given in brackets[{first}]", key.0, key.1)));
            }
            let mut v = vec![Scalar::zero(); n];
            for (k, c) in b.out {
                if !(1..=n).contains(&k) {
                    return Err(schema(at("out"), format!("key {k} outside 1..={n}")));
                }
                v[k - 1] = c;
            }
            brackets.push(((b.i - 1, b.j - 1), v));
        }
        let sigma = self.sigma.map(|s| square("sigma", &s, n)).transpose()?;
        let form = match (self.field, sigma) {
            (FieldKind::Real, None) => AlgebraForm::Real,
            (FieldKind::Real, Some(_)) => return Err(schema("sigma", "a real algebra carries no conjugation")),
            (FieldKind::Complex, sigma) => AlgebraForm::Complex { sigma },
            (FieldKind::Complexification, Some(sigma)) => AlgebraForm::Complexification { sigma },
            (FieldKind::Complexification, None) => return Err(schema("sigma", "required for a complexification")),
        };
        let algebra = LieAlgebra::new(labels, brackets, form)?;
        if validate {
            if let Some((a, b, c)) = algebra.jacobi_check().witness {
                return Err(IoError::Jacobi((a + 1, b + 1, c + 1)));
            }
        }
        let j = self.j.map(|rows| square("J", &rows, n).and_then(|m| Ok(AlmostComplexStructure::new(m)?))).transpose()?;
        Ok(LoadedAlgebra { algebra, j })
    }

    pub fn from_algebra(l: &LieAlgebra<Scalar>, j: Option<&AlmostComplexStructure<Scalar>>) -> Self {
        let field = match l.form() {
            AlgebraForm::Real => FieldKind::Real,
            AlgebraForm::Complex { .. } => FieldKind::Complex,
            AlgebraForm::Complexification { .. } => FieldKind::Complexification,
        };
        let brackets = l
            .nonzero_brackets()
            .map(|(i, j, v)| BracketDoc {
                i: i + 1,
                j: j + 1,
                out: v.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(k, c)| (k + 1, c.clone())).collect(),
            })
            .collect();
        AlgebraDoc {
            dim: l.dim(),
            basis: Some(l.labels().to_vec()),
            field,
            brackets,
            sigma: l.form().sigma().map(Matrix::rows_vec),
            j: j.map(|j| j.matrix().rows_vec()),
        }
    }
}

pub fn parse_algebra(text: &str, validate: bool) -> Result<LoadedAlgebra> {
    serde_json::from_str::<AlgebraDoc>(text).map_err(syntax)?.into_algebra(validate)
}

pub fn algebra_to_json(l: &LieAlgebra<Scalar>, j: Option<&AlmostComplexStructure<Scalar>>) -> String {
    serde_json::to_string_pretty(&AlgebraDoc::from_algebra(l, j)).expect("algebra documents serialize")
}

/// One `c ξ^i ∧ ξ^j` entry of a 2-form document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FormTerm {
    pub i: usize,
    pub j: usize,
    pub coeff: Scalar,
}

pub fn parse_two_form(text: &str, dim: usize) -> Result<TwoForm<Scalar>> {
    let terms: Vec<FormTerm> = serde_json::from_str(text).map_err(syntax)?;
    let mut out = Vec::with_capacity(terms.len());
    for (idx, t) in terms.into_iter().enumerate() {
        for (name, v) in [("i", t.i), ("j", t.j)] {
            if !(1..=dim).contains(&v) {
                return Err(schema(format!("[{idx}].{name}"), format!("index {v} outside 1..={dim}")));
            }
        }
        if t.i == t.j {
            return Err(schema(format!("[{idx}]"), "a 2-form term needs two distinct indices"));
        }
        out.push((t.i - 1, t.j - 1, t.coeff));
    }
    Ok(TwoForm::from_terms(dim, &out)?)
}

pub fn parse_matrix(text: &str) -> Result<Vec<Vec<Scalar>>> {
    serde_json::from_str(text).map_err(syntax)
}

/// Parses a complex structure given as a bare matrix or inside an algebra document.
pub fn parse_complex_structure(text: &str, dim: usize) -> Result<AlmostComplexStructure<Scalar>> {
    let value: Value = serde_json::from_str(text).map_err(syntax)?;
    let rows = match value.get("J") {
        Some(j) => j.clone(),
        None => value,
    };
    let rows: Vec<Vec<Scalar>> = serde_json::from_value(rows).map_err(|e| schema("J", e.to_string()))?;
    Ok(AlmostComplexStructure::new(square("J", &rows, dim)?)?)
}

fn rational_matrix(field: &str, v: &Value) -> Result<Matrix<Rational>> {
    let rows: Vec<Vec<Scalar>> = serde_json::from_value(v.clone()).map_err(|e| schema(field, e.to_string()))?;
    let n = rows.len();
    if n == 0 || rows.iter().any(|r| r.len() != n) {
        return Err(schema(field, "expected a non-empty square matrix"));
    }
    if rows.iter().flatten().any(|x| !x.is_real()) {
        return Err(schema(field, "holonomy matrices must be rational"));
    }
    Ok(Matrix::from_fn(n, n, |r, c| rows[r][c].real_part()))
}

/// Holonomy generators: a list of matrices, or an object with integer
/// matrices `a` and optional `b` (a lattice spec, possibly under `spec`).
pub fn parse_holonomy(text: &str) -> Result<HolonomyAction> {
    let value: Value = serde_json::from_str(text).map_err(syntax)?;
    let gens = match &value {
        Value::Array(items) => {
            items.iter().enumerate().map(|(k, m)| rational_matrix(&format!("[{k}]"), m)).collect::<Result<Vec<_>>>()?
        }
        Value::Object(_) => {
            let spec = value.get("spec").unwrap_or(&value);
            let a = spec.get("a").ok_or_else(|| schema("a", "missing holonomy matrix"))?;
            let mut gens = vec![rational_matrix("a", a)?];
            if let Some(b) = spec.get("b").filter(|b| !b.is_null()) {
                gens.push(rational_matrix("b", b)?);
            }
            gens
        }
        _ => return Err(schema("<root>", "expected a list of matrices or a lattice spec")),
    };
    Ok(HolonomyAction::new(gens)?)
}
