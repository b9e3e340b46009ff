use proptest::prelude::*;
use solvkit::catalog::{get, list, Params};
use solvkit::cohomology::*;
use solvkit::lattice::{build_lattice_nonnilpotent, nakamura_lattice, IntMatrix, SecondHolonomy};
use solvkit::scalar::rat;
use solvkit::{AlgebraForm, LieAlgebra, Matrix, Rational, Scalar};

fn s(x: i64) -> Scalar {
    Scalar::from_ints(x, 0)
}

fn algebra(name: &str) -> LieAlgebra<Scalar> {
    get(name, &Params::default()).unwrap().algebra
}

fn q(rows: &[&[i64]]) -> Matrix<Rational> {
    Matrix::from_i64_rows(rows)
}

fn heisenberg_plus_line() -> LieAlgebra<Scalar> {
    LieAlgebra::from_sparse(4, &[(0, 1, vec![(2, s(1))])], AlgebraForm::Complex { sigma: None }).unwrap()
}

#[test]
fn kodaira_differential_of_third_dual() {
    let l = algebra("family4");
    let d = ce_d(&l, &Cochain::dual(4, 2)).unwrap();
    let expected = Cochain::dual(4, 0).wedge(&Cochain::dual(4, 1)).unwrap();
    assert_eq!(d, expected);
    // oracle: -α([X_i, X_j]) over all pairs
    for i in 0..4 {
        for j in i + 1..4 {
            assert_eq!(d.get(&[i, j]), -l.structure_constant(i, j, 2));
        }
    }
}

#[test]
fn abelian_differential_vanishes() {
    let l = algebra("abelian");
    for k in 0..4 {
        assert!(ce_d(&l, &Cochain::dual(4, k)).unwrap().is_zero());
    }
}

#[test]
fn d_squared_vanishes_on_every_fixture() {
    for (name, _) in list() {
        let l = algebra(name);
        let n = l.dim();
        for k in 0..n {
            let dd = ce_d(&l, &ce_d(&l, &Cochain::dual(n, k)).unwrap()).unwrap();
            assert!(dd.is_zero(), "{name}: ξ^{k}");
        }
    }
}

#[test]
fn degree_cap() {
    let l = algebra("family4");
    let three = Cochain::dual(4, 0).wedge(&Cochain::dual(4, 1)).unwrap().wedge(&Cochain::dual(4, 2)).unwrap();
    assert_eq!(ce_d(&l, &three).unwrap_err(), CohomologyError::DegreeTooHigh(4));
    assert!(matches!(Cochain::<Scalar>::zero(4, 4), Err(CohomologyError::DegreeTooHigh(4))));
}

#[test]
fn h1_of_the_three_dimensional_types() {
    assert_eq!(h1_lie(&algebra("abelian3")), 3);
    assert_eq!(h1_lie(&algebra("nilpotent3")), 2);
    assert_eq!(h1_lie(&algebra("nonnilpotent3")), 1);
}

#[test]
fn h1_routes_agree() {
    for (name, _) in list() {
        let l = algebra(name);
        assert_eq!(h1_lie(&l), closed_one_forms_dim(&l), "{name}");
    }
    let l = heisenberg_plus_line();
    assert_eq!(h1_lie(&l), closed_one_forms_dim(&l));
}

#[test]
fn winkelmann_table() {
    let trivial = HolonomyAction::trivial();
    let abelian = winkelmann_h1(&algebra("abelian3"), &trivial).unwrap();
    assert_eq!((abelian.h1, abelian.dim_w), (3, 0));
    let nil = winkelmann_h1(&algebra("nilpotent3"), &trivial).unwrap();
    assert_eq!((nil.h1, nil.dim_w), (2, 0));

    let nonnil = algebra("nonnilpotent3");
    assert_eq!(holonomy_quotient_dim(&nonnil).unwrap(), 2);
    let cat = IntMatrix::new(vec![vec![2, 1], vec![1, 1]]).unwrap();
    let three_a = nakamura_lattice(&cat, &rat(1, 1), 1).unwrap();
    let h = winkelmann_h1(&nonnil, &three_a.holonomy().unwrap()).unwrap();
    assert_eq!((h.h1_lie, h.dim_w, h.h1), (1, 2, 3));
    let three_b = build_lattice_nonnilpotent(&IntMatrix::palindromic_companion(-1, 3), &SecondHolonomy::Phase(2)).unwrap();
    let h = winkelmann_h1(&nonnil, &three_b.holonomy().unwrap()).unwrap();
    assert_eq!((h.h1_lie, h.dim_w, h.h1), (1, 0, 1));
}

#[test]
fn holonomy_on_the_quotient_directly() {
    let nonnil = algebra("nonnilpotent3");
    let diagonal = HolonomyAction::new(vec![q(&[&[2, 0], &[0, 1]])]).unwrap();
    assert_eq!(winkelmann_h1(&nonnil, &diagonal).unwrap().dim_w, 2);
    // irrational real eigenvalues
    let cat = HolonomyAction::new(vec![q(&[&[2, 1], &[1, 1]])]).unwrap();
    assert_eq!(winkelmann_h1(&nonnil, &cat).unwrap().dim_w, 2);
    let rotation = HolonomyAction::new(vec![q(&[&[0, -1], &[1, 0]])]).unwrap();
    assert_eq!(winkelmann_h1(&nonnil, &rotation).unwrap().dim_w, 0);
    // one real and one non-real joint eigenvalue
    let mixed = HolonomyAction::new(vec![q(&[&[2, 0, 0], &[0, 0, -1], &[0, 1, 0]])]).unwrap();
    assert_eq!(mixed.real_eigenspace_dim().unwrap(), 1);
    // commuting pair: a real generator does not hide a rotation
    let pair = HolonomyAction::new(vec![q(&[&[3, 0], &[0, 3]]), q(&[&[0, -1], &[1, 0]])]).unwrap();
    assert_eq!(winkelmann_h1(&nonnil, &pair).unwrap().dim_w, 0);
    // no holonomy reads as trivial
    assert_eq!(winkelmann_h1(&nonnil, &HolonomyAction::trivial()).unwrap().dim_w, 2);
}

#[test]
fn holonomy_errors() {
    assert_eq!(
        HolonomyAction::new(vec![q(&[&[2, 1], &[1, 1]]), q(&[&[1, 1], &[0, 1]])]).unwrap_err(),
        CohomologyError::NonSemisimpleGenerator(1)
    );
    assert_eq!(
        HolonomyAction::new(vec![q(&[&[2, 1], &[1, 1]]), q(&[&[0, -1], &[1, 0]])]).unwrap_err(),
        CohomologyError::NonCommutingHolonomy
    );
    assert_eq!(HolonomyAction::new(vec![q(&[&[1, 0], &[0, 0]])]).unwrap_err(), CohomologyError::SingularGenerator(0));
    let wrong = HolonomyAction::new(vec![q(&[&[2, 0, 0], &[0, 1, 0], &[0, 0, 1]])]).unwrap();
    assert_eq!(
        winkelmann_h1(&algebra("nonnilpotent3"), &wrong).unwrap_err(),
        CohomologyError::HolonomySize { got: 3, quotient: 2 }
    );
}

#[test]
fn closed_holomorphic_forms() {
    assert_eq!(closed_holomorphic_1forms(&algebra("nilpotent3")).unwrap(), 2);
    assert_eq!(closed_holomorphic_1forms(&algebra("abelian3")).unwrap(), 3);
    assert_eq!(closed_holomorphic_1forms(&heisenberg_plus_line()).unwrap(), 3);
    assert_eq!(closed_holomorphic_1forms(&algebra("nonnilpotent3")).unwrap_err(), CohomologyError::NotNilpotent);
    assert!(closed_holomorphic_1forms(&algebra("family4")).is_err());
}

#[test]
fn torus_iff_full_count() {
    let fixtures = [algebra("nilpotent3"), algebra("abelian3"), heisenberg_plus_line(), algebra("abelian").complexify().unwrap()];
    for l in fixtures.iter().filter(|l| matches!(l.form(), AlgebraForm::Complex { .. })) {
        assert_eq!(closed_holomorphic_1forms(l).unwrap() == l.dim(), l.is_abelian());
    }
}

#[test]
fn obstruction_pattern() {
    use PseudoKahlerObstruction::*;
    assert_eq!(pseudo_kahler_obstruction(3, 2).unwrap(), Obstructed);
    assert_eq!(pseudo_kahler_obstruction(3, 3).unwrap(), Passes);
    assert_eq!(pseudo_kahler_obstruction(3, 1).unwrap(), Obstructed);
    assert_eq!(pseudo_kahler_obstruction(0, 1).unwrap_err(), CohomologyError::NonPositiveDimension);

    let nonnil = algebra("nonnilpotent3");
    let cat = IntMatrix::new(vec![vec![2, 1], vec![1, 1]]).unwrap();
    let a = nakamura_lattice(&cat, &rat(1, 1), 1).unwrap().holonomy().unwrap();
    let b = build_lattice_nonnilpotent(&IntMatrix::palindromic_companion(-1, 3), &SecondHolonomy::Phase(2))
        .unwrap()
        .holonomy()
        .unwrap();
    let cases = [
        (algebra("abelian3"), HolonomyAction::trivial(), Passes),
        (algebra("nilpotent3"), HolonomyAction::trivial(), Obstructed),
        (nonnil.clone(), a, Passes),
        (nonnil, b, Obstructed),
    ];
    for (l, h, expected) in cases {
        let h1 = winkelmann_h1(&l, &h).unwrap().h1;
        assert_eq!(pseudo_kahler_obstruction(3, h1).unwrap(), expected);
    }
}

fn arb_one_form(n: usize) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-5i64..=5, n)
}

proptest! {
    #[test]
    fn d_squared_on_random_one_forms(k in 1usize..=6, coeffs in arb_one_form(4)) {
        let l = algebra(&format!("family{k}"));
        let alpha = Cochain::from_terms(4, 1, coeffs.iter().enumerate().map(|(i, &c)| (vec![i], s(c)))).unwrap();
        let d = ce_d(&l, &alpha).unwrap();
        prop_assert!(ce_d(&l, &d).unwrap().is_zero());
    }

    #[test]
    fn d_is_linear(k in 1usize..=6, a in arb_one_form(4), b in arb_one_form(4)) {
        let l = algebra(&format!("family{k}"));
        let mk = |v: &[i64]| Cochain::from_terms(4, 1, v.iter().enumerate().map(|(i, &c)| (vec![i], s(c)))).unwrap();
        let lhs = ce_d(&l, &mk(&a).add(&mk(&b))).unwrap();
        let rhs = ce_d(&l, &mk(&a)).unwrap().add(&ce_d(&l, &mk(&b)).unwrap());
        prop_assert_eq!(lhs, rhs);
    }
}
