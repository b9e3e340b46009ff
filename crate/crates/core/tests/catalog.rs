use nalgebra::Complex;
use proptest::prelude::*;
use solvkit::catalog::*;
use solvkit::cohomology::closed_one_forms_dim;
use solvkit::complex_structure::is_integrable;
use solvkit::lie::DEFAULT_SAMPLE_SEED;
use solvkit::pseudo_kahler::{classify, FormClass, TwoForm};
use solvkit::scalar::rat;
use solvkit::{AdjointType, Matrix, Scalar};

const FAMILIES: [&str; 6] = ["family1", "family2", "family3", "family4", "family5", "family6"];

fn entry(name: &str) -> CatalogEntry {
    get(name, &Params::default()).unwrap()
}

fn c(re: f64, im: f64) -> Complex<f64> {
    Complex::new(re, im)
}

#[test]
fn families_are_valid_complex_structures() {
    for name in FAMILIES {
        let e = entry(name);
        assert!(e.algebra.jacobi_check().ok, "{name}");
        let j = e.j.as_ref().unwrap();
        assert_eq!(j.matrix().matmul(j.matrix()), -&Matrix::<Scalar>::identity(4), "{name}");
        assert!(is_integrable(&e.algebra, j).unwrap().ok, "{name}");
        assert!(e.metadata.unimodular, "{name}");
    }
}

#[test]
fn betti_numbers_of_families() {
    let b1: Vec<usize> = FAMILIES.iter().map(|n| entry(n).metadata.b1).collect();
    // closed 1-forms are an independent route to b1
    let oracle: Vec<usize> = FAMILIES.iter().map(|n| closed_one_forms_dim(&entry(n).algebra)).collect();
    assert_eq!(b1, oracle);
    assert_eq!(b1, vec![4, 2, 1, 3, 1, 1]);
}

#[test]
fn inoue_s0_brackets() {
    let p = Params { a: rat(2, 1), b: rat(3, 1), ..Params::default() };
    let e = get("inoue-s0", &p).unwrap();
    let l = &e.algebra;
    assert_eq!(l.dim(), 4);
    assert_eq!(l.bracket_basis(3, 0), vec![Scalar::from_ints(2, 0), Scalar::from_ints(-3, 0), Scalar::from_ints(0, 0), Scalar::from_ints(0, 0)]);
    assert_eq!(l.bracket_basis(3, 1), vec![Scalar::from_ints(3, 0), Scalar::from_ints(2, 0), Scalar::from_ints(0, 0), Scalar::from_ints(0, 0)]);
    assert_eq!(l.structure_constant(3, 2, 2), Scalar::from_ints(-4, 0));
    assert_eq!(e.metadata.b1, 1);
}

#[test]
fn abelian_entry() {
    let e = get("abelian", &Params { dim: 4, ..Params::default() }).unwrap();
    assert!(e.algebra.is_abelian());
    assert_eq!(e.j.unwrap().matrix(), solvkit::complex_structure::AlmostComplexStructure::<Scalar>::standard(4).unwrap().matrix());
}

#[test]
fn family6_structure_depends_on_q() {
    for (n, d) in [(0, 1), (1, 2), (-7, 3)] {
        let e = get("inoue-s-pm", &Params { q: rat(n, d), ..Params::default() }).unwrap();
        let j = e.j.unwrap();
        assert_eq!(j.matrix()[(1, 2)], Scalar::from(rat(-n, d)));
    }
}

#[test]
fn example3_brackets_and_rigidity() {
    let e = entry("example3");
    assert_eq!(e.algebra.dim(), 4);
    assert_eq!(e.algebra.structure_constant(3, 0, 1), Scalar::from_ints(-1, 0));
    assert_eq!(e.algebra.structure_constant(3, 1, 0), Scalar::from_ints(1, 0));
    assert_eq!(e.algebra.classify_type_seeded(64, DEFAULT_SAMPLE_SEED).unwrap(), AdjointType::Rigid);
    assert!(e.metadata.tags.contains(&"kahler"));

    let big = get("example3", &Params { l: 2, k: 2, s: Some(vec![4, 6, 3, 1]), ..Params::default() }).unwrap();
    assert_eq!(big.algebra.dim(), 8);
    // odd R-directions act trivially
    for x in 0..8 {
        assert!(big.algebra.bracket_basis(4, x).iter().all(|v| *v == Scalar::from_ints(0, 0)));
    }
    assert_eq!(big.algebra.structure_constant(7, 2, 3), Scalar::from_ints(-1, 0));
}

#[test]
fn example3_carries_a_kahler_form() {
    for (l, k) in [(1, 1), (2, 1), (1, 2)] {
        let e = get("example3", &Params { l, k, ..Params::default() }).unwrap();
        let n = e.algebra.dim();
        let w = TwoForm::<Scalar>::standard(n).unwrap();
        let verdict = classify(&e.algebra, e.j.as_ref().unwrap(), &w).unwrap();
        assert_eq!(verdict, FormClass::Kahler { p: n, q: 0 }, "l={l} k={k}");
    }
}

#[test]
fn metadata_matches_sampling() {
    for (name, _) in list() {
        let e = entry(name);
        let real = if e.algebra.is_real_form() { e.algebra.clone() } else { e.algebra.realify().unwrap() };
        let sampled = real.classify_type_seeded(32, DEFAULT_SAMPLE_SEED).unwrap();
        assert_eq!(sampled, e.metadata.adjoint_type, "{name}");
    }
}

#[test]
fn parameter_ranges() {
    let bad_a = Params { a: rat(0, 1), ..Params::default() };
    assert!(matches!(get("inoue-s0", &bad_a), Err(CatalogError::ParamOutOfRange { name: "a", .. })));
    let bad_eta = Params { eta: rat(1, 5), ..Params::default() };
    assert!(matches!(get("example1", &bad_eta), Err(CatalogError::ParamOutOfRange { name: "eta", .. })));
    let bad_s = Params { s: Some(vec![5, 4]), ..Params::default() };
    assert!(matches!(get("example3", &bad_s), Err(CatalogError::ParamOutOfRange { name: "s", .. })));
    let short_s = Params { s: Some(vec![4]), ..Params::default() };
    assert!(matches!(get("example3", &short_s), Err(CatalogError::ParamOutOfRange { name: "s", .. })));
    assert!(matches!(get("abelian", &Params { dim: 3, ..Params::default() }), Err(CatalogError::ParamOutOfRange { .. })));
    assert_eq!(get("klein", &Params::default()).unwrap_err(), CatalogError::UnknownName("klein".into()));
}

#[test]
fn kodaira_identity() {
    let e = entry("example2");
    let z = [c(0.3, -1.2), c(2.0, 0.5)];
    assert_eq!(group_law_eval(&e, &[c(0.0, 0.0), c(0.0, 0.0)], &z).unwrap(), z.to_vec());
    assert_eq!(group_law_eval(&e, &z, &[c(0.0, 0.0), c(0.0, 0.0)]).unwrap(), z.to_vec());
}

#[test]
fn hyperelliptic_fixture() {
    // t = Re(i) = 0, so the rotation is trivial
    let e = entry("example1");
    let out = group_law_eval(&e, &[c(1.0, 0.0), c(0.0, 1.0)], &[c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
    assert_eq!(out, vec![c(2.0, 0.0), c(0.0, 1.0)]);
    // t = 1 with η = π/2 rotates z_1 by i
    let out = group_law_eval(&e, &[c(0.0, 0.0), c(1.0, 0.0)], &[c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
    assert!((out[0] - c(0.0, 1.0)).norm() < 1e-15);
}

#[test]
fn group_law_errors() {
    assert!(matches!(group_law_eval(&entry("family3"), &[], &[]), Err(CatalogError::NoGroupLaw(_))));
    assert!(matches!(
        group_law_eval(&entry("nilpotent3"), &[c(0.0, 0.0)], &[c(0.0, 0.0)]),
        Err(CatalogError::BadPoint { expected: 3, got: 1 })
    ));
}

#[test]
fn group_laws_are_associative() {
    for name in ["abelian", "example1", "example2", "nilpotent3", "nonnilpotent3", "abelian3"] {
        let r = associativity_residual(&entry(name), 100, 7).unwrap();
        assert!(r <= 1e-9, "{name}: {r}");
    }
}

#[test]
fn crosscheck_reproduces_stored_invariants() {
    let cfg = CrossCheckConfig::default();
    for name in ["abelian", "example1", "example2", "nilpotent3", "nonnilpotent3", "abelian3"] {
        let report = brackets_from_group_law(&entry(name), &cfg).unwrap();
        assert!(report.invariants_match, "{name}: {:?} vs {:?}", report.numeric, report.stored);
    }
}

#[test]
fn crosscheck_details() {
    let cfg = CrossCheckConfig::default();
    let kodaira = brackets_from_group_law(&entry("example2"), &cfg).unwrap();
    assert_eq!(kodaira.numeric.derived_series, vec![4, 1, 0]);
    assert_eq!(kodaira.numeric.lower_central_series, vec![4, 1, 0]);
    assert_eq!(kodaira.numeric.center_dim, 2);

    let abelian = brackets_from_group_law(&entry("abelian"), &cfg).unwrap();
    assert!(abelian.max_abs_constant <= 1e-8);

    let nonnil = brackets_from_group_law(&entry("nonnilpotent3"), &cfg).unwrap();
    assert_eq!(nonnil.numeric.derived_series, vec![6, 4, 0]);
    assert_eq!(nonnil.numeric.lower_central_series, vec![6, 4]);
}

proptest! {
    #[test]
    fn inoue_s0_is_valid_for_nonzero_parameters(an in -6i64..=6, ad in 1i64..=4, bn in -6i64..=6, bd in 1i64..=4) {
        prop_assume!(an != 0 && bn != 0);
        let p = Params { a: rat(an, ad), b: rat(bn, bd), ..Params::default() };
        let e = get("inoue-s0", &p).unwrap();
        prop_assert!(e.metadata.unimodular);
        prop_assert_eq!(e.metadata.b1, 1);
    }

    #[test]
    fn inoue_s_pm_is_integrable_for_every_q(n in -20i64..=20, d in 1i64..=9) {
        let e = get("inoue-s-pm", &Params { q: rat(n, d), ..Params::default() }).unwrap();
        prop_assert!(is_integrable(&e.algebra, e.j.as_ref().unwrap()).unwrap().ok);
    }
}
