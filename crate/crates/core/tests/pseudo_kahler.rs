use num_traits::Zero;
use proptest::prelude::*;
use solvkit::catalog::{get, Params};
use solvkit::complex_structure::AlmostComplexStructure;
use solvkit::coordinate::{omega_coordinate, restrict_to_identity};
use solvkit::pseudo_kahler::*;
use solvkit::scalar::rat;
use solvkit::{LieAlgebra, Matrix, Rational, Scalar};

type J = AlmostComplexStructure<Scalar>;

fn s(x: i64) -> Scalar {
    Scalar::from_ints(x, 0)
}

fn pair(name: &str) -> (LieAlgebra<Scalar>, J) {
    let e = get(name, &Params::default()).unwrap();
    (e.algebra, e.j.unwrap())
}

fn tautological(name: &str) -> (LieAlgebra<Scalar>, J) {
    let real = get(name, &Params::default()).unwrap().algebra.realify().unwrap();
    let j = AlmostComplexStructure::standard(real.dim()).unwrap();
    (real, j)
}

#[test]
fn flat_torus_is_kahler() {
    let (l, j) = pair("abelian");
    let w = TwoForm::standard(4).unwrap();
    assert!(j_compatible(&w, &j).unwrap());
    assert_eq!(metric_from(&w, &j).unwrap(), Matrix::identity(4));
    assert_eq!(classify(&l, &j, &w).unwrap(), FormClass::Kahler { p: 4, q: 0 });
}

#[test]
fn incompatible_form() {
    let (l, j) = pair("abelian");
    let w = TwoForm::from_terms(4, &[(0, 2, s(1))]).unwrap();
    assert!(!j_compatible(&w, &j).unwrap());
    // oracle on (X_1, X_4): ω(JX_1, JX_4) = ω(X_2, -X_3) = 0, but ω(X_1, X_4) = 0 too, so use (X_1, X_3)
    let om = w.matrix();
    let jm = j.matrix();
    assert_ne!(jm.transpose().matmul(&om).matmul(jm)[(0, 2)], om[(0, 2)]);
    assert_eq!(classify(&l, &j, &w).unwrap(), FormClass::Incompatible);
    assert_eq!(metric_from(&w, &j).unwrap_err(), PseudoKahlerError::NotCompatible);
}

#[test]
fn negated_form_negates_the_metric() {
    let (l, j) = pair("abelian");
    let w = TwoForm::standard(4).unwrap();
    assert_eq!(metric_from(&w.negate(), &j).unwrap(), -&metric_from(&w, &j).unwrap());
    assert_eq!(classify(&l, &j, &w.negate()).unwrap(), FormClass::PseudoKahler { p: 0, q: 4 });
}

#[test]
fn indefinite_and_degenerate_forms_on_the_torus() {
    let (l, j) = pair("abelian");
    let split = TwoForm::from_terms(4, &[(0, 1, s(1)), (2, 3, s(-1))]).unwrap();
    assert_eq!(classify(&l, &j, &split).unwrap(), FormClass::PseudoKahler { p: 2, q: 2 });
    let half = TwoForm::from_terms(4, &[(0, 1, s(1))]).unwrap();
    assert_eq!(classify(&l, &j, &half).unwrap(), FormClass::Degenerate);
}

#[test]
fn kodaira_standard_form_is_not_closed() {
    let (l, j) = pair("family4");
    assert_eq!(classify(&l, &j, &TwoForm::standard(4).unwrap()).unwrap(), FormClass::NotClosed);
}

#[test]
fn identity_value_is_compatible_and_nondegenerate() {
    let (_, j) = tautological("nonnilpotent3");
    let w = restrict_to_identity(&omega_coordinate()).unwrap();
    assert!(j_compatible(&w, &j).unwrap());
    let g = metric_from(&w, &j).unwrap();
    assert!(g.is_symmetric());
    assert!(!g.det().is_zero());
}

#[test]
fn non_integrable_j_is_rejected() {
    let (l, _) = pair("family2");
    let bad = AlmostComplexStructure::new(Matrix::from_rows(
        [[0, 0, -1, 0], [0, 0, 0, -1], [1, 0, 0, 0], [0, 1, 0, 0]].iter().map(|r| r.iter().map(|&x| s(x)).collect()).collect(),
    ))
    .unwrap();
    assert!(matches!(classify(&l, &bad, &TwoForm::standard(4).unwrap()), Err(PseudoKahlerError::NotIntegrable(..))));
}

#[test]
fn form_constructors_validate() {
    assert_eq!(
        TwoForm::from_terms(4, &[(0, 1, Scalar::from_ints(0, 1))]).unwrap_err(),
        PseudoKahlerError::NotReal
    );
    let (_, j) = pair("abelian");
    assert!(matches!(j_compatible(&TwoForm::standard(6).unwrap(), &j), Err(PseudoKahlerError::DimensionMismatch { .. })));
    assert_eq!(signature(&Matrix::from_rows(vec![vec![s(0), s(1)], vec![s(0), s(0)]])).unwrap_err(), PseudoKahlerError::NotSymmetric);
}

#[test]
fn iwasawa_admits_no_invariant_pseudo_kahler_form() {
    let (l, j) = tautological("nilpotent3");
    let forms = closed_compatible_forms(&l, &j).unwrap();
    assert!(!forms.is_empty());
    for w in &forms {
        assert!(!matches!(classify(&l, &j, w).unwrap(), FormClass::Kahler { .. } | FormClass::PseudoKahler { .. }));
    }
    let sweep = degeneracy_sweep(&l, &j).unwrap();
    assert!(sweep.all_degenerate);
    assert_eq!(sweep.space_dim, forms.len());
    assert!(sweep.witness.is_none());
}

#[test]
fn sweep_positive_control() {
    let (l, j) = tautological("abelian3");
    let sweep = degeneracy_sweep(&l, &j).unwrap();
    assert!(!sweep.all_degenerate);
    let coeffs = sweep.witness.unwrap();
    let forms = closed_compatible_forms(&l, &j).unwrap();
    let m = forms.iter().zip(&coeffs).fold(Matrix::zeros(6, 6), |acc, (w, &c)| &acc + &w.matrix().scale(&s(c)));
    assert!(!m.det().is_zero());
}

#[test]
fn closed_compatible_forms_really_are() {
    for name in ["family1", "family2", "family3", "family4", "family5", "family6", "example3"] {
        let (l, j) = pair(name);
        for w in closed_compatible_forms(&l, &j).unwrap() {
            assert!(j_compatible(&w, &j).unwrap(), "{name}");
            assert_ne!(classify(&l, &j, &w).unwrap(), FormClass::NotClosed, "{name}");
        }
    }
}

fn arb_basis_change(n: usize) -> impl Strategy<Value = Matrix<Scalar>> {
    prop::collection::vec(-2i64..=2, n * n)
        .prop_map(move |v| Matrix::from_fn(n, n, |r, c| Scalar::from(Rational::from_integer(v[n * r + c].into()) + if r == c { rat(1, 3) } else { rat(0, 1) })))
        .prop_filter("invertible", |m| !m.det().is_zero())
}

/// A family with a form drawn from its closed compatible forms plus an optional arbitrary term.
fn arb_case() -> impl Strategy<Value = (LieAlgebra<Scalar>, J, TwoForm<Scalar>)> {
    let names = prop::sample::select(vec!["family1", "family2", "family3", "family4", "family5", "family6", "example3"]);
    (names, prop::collection::vec(-3i64..=3, 6), prop::option::of((0usize..4, 0usize..4, -2i64..=2))).prop_map(|(name, cs, noise)| {
        let (l, j) = pair(name);
        let forms = closed_compatible_forms(&l, &j).unwrap();
        let mut m = forms.iter().zip(&cs).fold(Matrix::zeros(4, 4), |acc, (w, &c)| &acc + &w.matrix().scale(&s(c)));
        if let Some((a, b, c)) = noise.filter(|(a, b, _)| a != b) {
            m[(a, b)] = m[(a, b)].clone() + s(c);
            m[(b, a)] = m[(b, a)].clone() - s(c);
        }
        (l, j, TwoForm::from_matrix(&m).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn classify_is_basis_independent((l, j, w) in arb_case(), p in arb_basis_change(4)) {
        let before = classify(&l, &j, &w).unwrap();
        let after = classify(&l.change_basis(&p).unwrap(), &j.change_basis(&p).unwrap(), &w.change_basis(&p).unwrap()).unwrap();
        prop_assert_eq!(before, after);
    }

    #[test]
    fn compatible_metrics_are_symmetric((_l, j, w) in arb_case()) {
        if j_compatible(&w, &j).unwrap() {
            prop_assert!(metric_from(&w, &j).unwrap().is_symmetric());
        }
    }

    #[test]
    fn nondegenerate_signatures_fill_the_dimension((l, j, w) in arb_case()) {
        if let FormClass::Kahler { p, q } | FormClass::PseudoKahler { p, q } = classify(&l, &j, &w).unwrap() {
            prop_assert_eq!(p + q, l.dim());
        }
    }
}
