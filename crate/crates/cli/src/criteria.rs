//! The acceptance suite behind `paper-report`.

use anyhow::{anyhow, ensure, Result};
use rayon::prelude::*;
use serde_json::{json, Value};

use solvkit::catalog::{associativity_residual, brackets_from_group_law, get, CrossCheckConfig, Params};
use solvkit::cohomology::{
    closed_holomorphic_1forms, ce_d, pseudo_kahler_obstruction, winkelmann_h1, HolonomyAction, PseudoKahlerObstruction,
};
use solvkit::complex_structure::{
    is_integrable, j_from_subspace, negative_controls, nijenhuis, subalgebra_from_j, AlmostComplexStructure,
    ComplexStructureError,
};
use solvkit::coordinate::{
    ext_d, omega_closedness_certificate, omega_coordinate, omega_mc, pullback_translation, restrict_to_identity,
    LatticeTranslation,
};
use solvkit::lattice::{
    build_lattice_nonnilpotent_with, char_poly, classify_eigen, nakamura_lattice_with, numeric_roots, search_palindromic,
    Classification, IntMatrix, IntPolynomial, SearchClass, SecondHolonomy, Tolerances,
};
use solvkit::linalg::{unit_vec, vec_is_zero};
use solvkit::pseudo_kahler::{classify, classify_pointwise, j_compatible, FormClass, TwoForm};
use solvkit::scalar::rat;
use solvkit::{AdjointType, LieAlgebra, Matrix, Rational, Scalar};

use crate::report::Verdict;

pub const FAMILIES: [&str; 6] = ["family1", "family2", "family3", "family4", "family5", "family6"];

/// Knobs shared by the criteria; defaults are the module defaults.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Config {
    pub seed: u64,
    pub lattice: Tolerances,
    pub crosscheck: CrossCheckConfig,
    pub associativity_tol: f64,
    pub triples: usize,
    pub samples: usize,
}

impl Default for Config {
    fn default() -> Self {
        Self {
            seed: solvkit::lie::DEFAULT_SAMPLE_SEED,
            lattice: Tolerances::default(),
            crosscheck: CrossCheckConfig::default(),
            associativity_tol: 1e-9,
            triples: 100,
            samples: 64,
        }
    }
}

type Criterion = fn(&Config) -> Result<(bool, Value)>;

const CRITERIA: [(&str, Criterion); 9] = [
    ("c01_catalog_validity", catalog_validity),
    ("c02_h1_table", winkelmann_table),
    ("c03_phase_lattice_h1", phase_lattice_h1),
    ("c04_explicit_form", explicit_form),
    ("c05_no_invariant_form", no_invariant_form),
    ("c06_structure_round_trip", structure_round_trip),
    ("c07_lattice_search", lattice_search),
    ("c08_group_law_crosscheck", group_law_crosscheck),
    ("c09_rotation_family_kahler", rotation_family_kahler),
];

pub const DETERMINISM_ID: &str = "c10_determinism";

fn run_one(id: &str, f: Criterion, cfg: &Config) -> Verdict {
    match f(cfg) {
        Ok((ok, witness)) => Verdict::new(id, ok, Some(witness)),
        Err(e) => Verdict::new(id, false, Some(json!({ "error": e.to_string() }))),
    }
}

fn run_criteria(cfg: &Config, parallel: bool) -> Vec<Verdict> {
    if parallel {
        CRITERIA.par_iter().map(|(id, f)| run_one(id, *f, cfg)).collect()
    } else {
        CRITERIA.iter().map(|(id, f)| run_one(id, *f, cfg)).collect()
    }
}

/// Runs every criterion; the last one re-runs the others sequentially and
/// compares the serialized verdicts byte for byte.
pub fn run_all(cfg: &Config) -> Vec<Verdict> {
    let mut verdicts = run_criteria(cfg, true);
    let again = run_criteria(cfg, false);
    let a = serde_json::to_string(&verdicts).expect("verdicts serialize");
    let b = serde_json::to_string(&again).expect("verdicts serialize");
    verdicts.push(Verdict::new(
        DETERMINISM_ID,
        a == b,
        Some(json!({ "parallel": crate::report::digest(&[("v", a.as_bytes())]), "sequential": crate::report::digest(&[("v", b.as_bytes())]) })),
    ));
    verdicts
}

fn entry(name: &str) -> Result<solvkit::catalog::CatalogEntry> {
    Ok(get(name, &Params::default())?)
}

fn pair(name: &str) -> Result<(LieAlgebra<Scalar>, AlmostComplexStructure<Scalar>)> {
    let e = entry(name)?;
    let j = e.j.ok_or_else(|| anyhow!("{name} has no complex structure"))?;
    Ok((e.algebra, j))
}

fn catalog_validity(_: &Config) -> Result<(bool, Value)> {
    let mut ok = true;
    let mut rows = serde_json::Map::new();
    for name in FAMILIES {
        let (l, j) = pair(name)?;
        let n = l.dim();
        let jacobi = l.jacobi_check().ok;
        let j_squared = j.matrix().matmul(j.matrix()) == -&Matrix::<Scalar>::identity(n);
        let mut nijenhuis_zero = true;
        for a in 0..n {
            for b in a + 1..n {
                nijenhuis_zero &= vec_is_zero(&nijenhuis(&l, &j, &unit_vec(n, a), &unit_vec(n, b))?);
            }
        }
        ok &= jacobi && j_squared && nijenhuis_zero;
        rows.insert(name.into(), json!({ "jacobi": jacobi, "j_squared": j_squared, "nijenhuis_zero": nijenhuis_zero }));
    }
    Ok((ok, Value::Object(rows)))
}

fn cat_map() -> Result<IntMatrix> {
    Ok(IntMatrix::new(vec![vec![2, 1], vec![1, 1]])?)
}

fn phase_companion() -> IntMatrix {
    IntMatrix::palindromic_companion(-1, 3)
}

fn type_3a_holonomy(cfg: &Config) -> Result<HolonomyAction> {
    Ok(nakamura_lattice_with(&cat_map()?, &rat(1, 1), 1, &cfg.lattice)?.holonomy()?)
}

fn type_3b_holonomy(cfg: &Config) -> Result<HolonomyAction> {
    Ok(build_lattice_nonnilpotent_with(&phase_companion(), &SecondHolonomy::Phase(2), &cfg.lattice)?.holonomy()?)
}

fn winkelmann_table(cfg: &Config) -> Result<(bool, Value)> {
    let nonnil = entry("nonnilpotent3")?.algebra;
    let cases = [
        ("abelian", entry("abelian3")?.algebra, HolonomyAction::trivial(), (3, 0)),
        ("nilpotent", entry("nilpotent3")?.algebra, HolonomyAction::trivial(), (2, 0)),
        ("non_nilpotent_3a", nonnil.clone(), type_3a_holonomy(cfg)?, (1, 2)),
        ("non_nilpotent_3b", nonnil, type_3b_holonomy(cfg)?, (1, 0)),
    ];
    let mut ok = true;
    let mut rows = serde_json::Map::new();
    for (label, l, h, (lie, w)) in cases {
        let got = winkelmann_h1(&l, &h)?;
        ok &= got.h1_lie == lie && got.dim_w == w && got.h1 == lie + w;
        rows.insert(label.into(), serde_json::to_value(got)?);
    }
    Ok((ok, Value::Object(rows)))
}

fn phase_lattice_h1(cfg: &Config) -> Result<(bool, Value)> {
    let a = phase_companion();
    let cp = char_poly(&a);
    let eig = classify_eigen(&cp)?;
    let spec = build_lattice_nonnilpotent_with(&a, &SecondHolonomy::Phase(2), &cfg.lattice)?;
    let ok = cp.to_string() == "t^4 - t^3 + 3t^2 - t + 1"
        && eig.real_roots == 0
        && !eig.unit_modulus_root
        && spec.max_residual <= cfg.lattice.residual
        && spec.classification == Classification::ThreeB;
    Ok((
        ok,
        json!({
            "char_poly": cp.to_string(),
            "real_roots": eig.real_roots,
            "unit_modulus_root": eig.unit_modulus_root,
            "max_residual": spec.max_residual,
            "classification": spec.classification,
        }),
    ))
}

/// Value of the explicit coordinate form at the identity in the real basis
/// `(Re x, Im x, Re y, Im y, Re z, Im z)`.
fn identity_fixture() -> Result<TwoForm<Scalar>> {
    let two = Scalar::from_ints(2, 0);
    Ok(TwoForm::from_terms(6, &[(0, 1, two.clone()), (2, 4, two.clone()), (3, 5, two)])?)
}

fn explicit_form(_: &Config) -> Result<(bool, Value)> {
    let w = omega_coordinate();
    let presentations_equal = omega_mc() == w;
    let d_zero = ext_d(&w)?.is_zero() && ext_d(&omega_mc())?.is_zero();
    let invariant: Vec<bool> = (-2..=2)
        .map(|k| pullback_translation(&w, &LatticeTranslation::new(Rational::from_integer(0.into()), rat(k, 1))) == w)
        .collect();
    let half_breaks = pullback_translation(&w, &LatticeTranslation::new(rat(0, 1), rat(1, 2))) != w;
    let identity_matches = restrict_to_identity(&w)? == identity_fixture()?;
    let l = entry("nonnilpotent3")?.algebra.realify()?;
    let j = AlmostComplexStructure::standard(6)?;
    let verdict = classify_pointwise(&l, &j, &omega_closedness_certificate()?)?;
    let ok = presentations_equal
        && d_zero
        && invariant.iter().all(|&b| b)
        && half_breaks
        && identity_matches
        && verdict == FormClass::PseudoKahler { p: 4, q: 2 };
    Ok((
        ok,
        json!({
            "presentations_equal": presentations_equal,
            "d_omega_zero": d_zero,
            "invariance_k": invariant,
            "half_integer_breaks": half_breaks,
            "identity_matches_fixture": identity_matches,
            "pointwise": verdict,
        }),
    ))
}

fn no_invariant_form(_: &Config) -> Result<(bool, Value)> {
    let nil = entry("nilpotent3")?.algebra;
    let h1 = winkelmann_h1(&nil, &HolonomyAction::trivial())?.h1;
    let obstruction = pseudo_kahler_obstruction(3, h1)?;
    let r_nil = closed_holomorphic_1forms(&nil)?;
    let abelian = entry("abelian3")?.algebra;
    let r_ab = closed_holomorphic_1forms(&abelian)?;
    let ok = h1 == 2 && obstruction == PseudoKahlerObstruction::Obstructed && r_nil == h1 && r_ab == abelian.dim() && r_ab == 3;
    Ok((ok, json!({ "nilpotent_h1": h1, "obstruction": obstruction, "iwasawa_r": r_nil, "abelian_r": r_ab })))
}

/// Frozen non-integrable pairs `(family, J rows)`.
fn negative_fixtures() -> Vec<(&'static str, [[i64; 4]; 4])> {
    let swap = [[0, 0, -1, 0], [0, 0, 0, -1], [1, 0, 0, 0], [0, 1, 0, 0]];
    vec![
        ("family2", swap),
        ("family3", swap),
        ("family4", swap),
        ("family5", swap),
        ("family6", [[0, 1, 0, 0], [-1, 0, 0, 0], [0, 0, 0, -1], [0, 0, 1, 0]]),
    ]
}

fn structure_round_trip(_: &Config) -> Result<(bool, Value)> {
    let mut round_trips = 0;
    let mut ok = true;
    for name in FAMILIES.iter().chain(["example3"].iter()) {
        let (l, j) = pair(name)?;
        let h = subalgebra_from_j(&l, &j)?;
        ok &= j_from_subspace(&h.ambient, &h.basis)? == j;
        round_trips += 1;
    }
    let mut negatives = 0;
    let mut fixtures: Vec<(LieAlgebra<Scalar>, AlmostComplexStructure<Scalar>)> = Vec::new();
    for (name, rows) in negative_fixtures() {
        let m = Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| Scalar::from_ints(x, 0)).collect()).collect());
        fixtures.push((entry(name)?.algebra, AlmostComplexStructure::new(m)?));
    }
    for name in FAMILIES {
        let l = entry(name)?.algebra;
        for (j, _) in negative_controls(&l)? {
            fixtures.push((l.clone(), j));
        }
    }
    for (l, j) in &fixtures {
        let fired = matches!(subalgebra_from_j(l, j), Err(ComplexStructureError::NotIntegrable(..)));
        ok &= fired && !is_integrable(l, j)?.ok;
        negatives += 1;
    }
    Ok((ok, json!({ "round_trips": round_trips, "negative_pairs": negatives })))
}

fn lattice_search(_: &Config) -> Result<(bool, Value)> {
    let small = search_palindromic(3)?;
    let companion_3b = small.iter().any(|h| (h.p, h.q) == (-1, 3) && h.classification == SearchClass::ThreeB);
    let table = search_palindromic(5)?;
    let mut compared = 0;
    let mut disagreements = 0;
    for h in &table {
        let poly = IntPolynomial::new(vec![1, h.p, h.q, h.p, 1]);
        let Ok(exact) = classify_eigen(&poly) else { continue };
        let numeric = numeric_roots(&poly, 1e-7);
        compared += 1;
        if exact.real_roots != numeric.real_roots || exact.unit_modulus_root != numeric.unit_modulus_root {
            disagreements += 1;
        }
    }
    ensure!(compared > 0, "no squarefree polynomials in the bound-5 table");
    Ok((
        companion_3b && disagreements == 0,
        json!({ "contains_companion_3b": companion_3b, "bound5_entries": table.len(), "compared": compared, "disagreements": disagreements }),
    ))
}

fn group_law_crosscheck(cfg: &Config) -> Result<(bool, Value)> {
    let mut ok = true;
    let mut rows = serde_json::Map::new();
    for name in ["example1", "example2", "nilpotent3", "nonnilpotent3"] {
        let e = entry(name)?;
        let report = brackets_from_group_law(&e, &cfg.crosscheck)?;
        let residual = associativity_residual(&e, cfg.triples, cfg.seed)?;
        ok &= report.invariants_match && residual <= cfg.associativity_tol;
        rows.insert(
            name.into(),
            json!({ "invariants_match": report.invariants_match, "numeric": report.numeric, "associativity_residual": residual }),
        );
    }
    Ok((ok, Value::Object(rows)))
}

fn rotation_family_kahler(cfg: &Config) -> Result<(bool, Value)> {
    let (l, j) = pair("example3")?;
    let integrable = is_integrable(&l, &j)?.ok;
    let w = TwoForm::<Scalar>::standard(l.dim())?;
    let closed = ce_d(&l, w.cochain())?.is_zero();
    let compatible = j_compatible(&w, &j)?;
    let verdict = classify(&l, &j, &w)?;
    let sampled = l.classify_type_seeded(cfg.samples, cfg.seed)?;
    let ok = integrable && closed && compatible && verdict == FormClass::Kahler { p: 4, q: 0 } && sampled == AdjointType::Rigid;
    Ok((
        ok,
        json!({ "integrable": integrable, "closed": closed, "compatible": compatible, "verdict": verdict, "sampled_type": sampled }),
    ))
}
