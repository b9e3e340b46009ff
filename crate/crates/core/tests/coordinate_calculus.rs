use num_traits::{One, Zero};
use proptest::prelude::*;
use solvkit::coordinate::*;
use solvkit::pseudo_kahler::{classify, classify_pointwise, metric_from, FormClass, TwoForm};
use solvkit::scalar::{rat, Field, Rational};
use solvkit::{AlgebraForm, LieAlgebra, Matrix, Scalar};
use solvkit::complex_structure::AlmostComplexStructure;

fn s(re: i64) -> Scalar {
    Scalar::from_ints(re, 0)
}

fn nonnilpotent_real() -> LieAlgebra<Scalar> {
    LieAlgebra::from_sparse(
        3,
        &[(0, 1, vec![(1, s(-1))]), (0, 2, vec![(2, s(1))])],
        AlgebraForm::Complex { sigma: None },
    )
    .unwrap()
    .realify()
    .unwrap()
}

#[test]
fn presentations_agree() {
    assert_eq!(omega_mc(), omega_coordinate());
}

#[test]
fn omega_is_closed_in_both_presentations() {
    assert!(ext_d(&omega_coordinate()).unwrap().is_zero());
    assert!(ext_d(&omega_mc()).unwrap().is_zero());
}

#[test]
fn first_mc_term_alone() {
    let [w1, _, _] = maurer_cartan();
    let t = w1.wedge(&w1.conj()).unwrap().scale(&Scalar::i());
    let expected = ExpForm::term(ExpPoly::constant(Scalar::i()), &[DX, DXB]).unwrap();
    assert_eq!(t, expected);
}

#[test]
fn omega_is_real() {
    assert_eq!(omega_coordinate().conj(), omega_coordinate());
}

#[test]
fn omega_cubed_is_a_volume_form() {
    let w = omega_coordinate();
    let vol = w.wedge(&w).unwrap().wedge(&w).unwrap();
    assert_eq!(vol.degree(), 6);
    // only the cross term survives: 3! i dx^dxb^dy^dzb^dyb^dz, and (dy dzb dyb dz)
    // has two inversions, so no sign change
    let c = vol.coeff(&[DX, DXB, DY, DYB, DZ, DZB]);
    assert!(!c.is_zero());
    let expected = ExpPoly::constant(Scalar::from_ints(0, 6));
    assert_eq!(c, expected);
}

#[test]
fn d_squared_on_sample() {
    let f = ExpForm::term(ExpPoly::exp(1, -1), &[DY, DZB]).unwrap();
    let d1 = ext_d(&f).unwrap();
    assert!(!d1.is_zero());
    assert!(ext_d(&d1).unwrap().is_zero());
}

#[test]
fn invariance_for_integer_phases() {
    for k in -2..=2 {
        let t = LatticeTranslation::new(rat(3, 2), Rational::from_integer(k.into()));
        assert_eq!(pullback_translation(&omega_coordinate(), &t), omega_coordinate(), "k = {k}");
    }
}

#[test]
fn half_integer_phase_breaks_invariance() {
    let t = LatticeTranslation::new(Rational::zero(), rat(1, 2));
    let pulled = pullback_translation(&omega_coordinate(), &t);
    assert_ne!(pulled, omega_coordinate());
    assert_eq!(pulled.coeff(&[DY, DZB]), ExpPoly::constant(-Scalar::one()));
    assert_eq!(pulled.coeff(&[DX, DXB]), ExpPoly::constant(Scalar::i()));
}

#[test]
fn real_translations_act_trivially() {
    let t = LatticeTranslation::new(rat(-7, 3), Rational::zero()).with_shifts((rat(1, 1), rat(2, 1)), (rat(0, 1), rat(5, 1)));
    assert_eq!(pullback_translation(&omega_coordinate(), &t), omega_coordinate());
}

#[test]
fn identity_value_matches_fixture() {
    let w = restrict_to_identity(&omega_coordinate()).unwrap();
    let fixture = TwoForm::from_terms(6, &[(0, 1, s(2)), (2, 4, s(2)), (3, 5, s(2))]).unwrap();
    assert_eq!(w, fixture);
}

/// Sylvester-style oracle: LDL^T pivots of a symmetric matrix, with a
/// symmetric pivot swap when a diagonal entry vanishes.
fn inertia_by_elimination(m: &Matrix<Scalar>) -> (usize, usize) {
    let n = m.nrows();
    let mut a: Vec<Vec<Rational>> = (0..n).map(|r| (0..n).map(|c| m[(r, c)].real_part()).collect()).collect();
    let (mut p, mut q) = (0, 0);
    let mut k = 0;
    while k < a.len() {
        let size = a.len();
        if a[k][k].is_zero() {
            if let Some(j) = (k + 1..size).find(|&j| !a[j][j].is_zero()) {
                a.swap(k, j);
                for row in a.iter_mut() {
                    row.swap(k, j);
                }
            } else if let Some(j) = (k + 1..size).find(|&j| !a[k][j].is_zero()) {
                // replace e_k by e_k + e_j, which makes the pivot 2 a[k][j] + a[j][j]
                for c in 0..size {
                    let v = a[j][c].clone();
                    a[k][c] = &a[k][c] + v;
                }
                for r in 0..size {
                    let v = a[r][j].clone();
                    a[r][k] = &a[r][k] + v;
                }
            } else {
                k += 1;
                continue;
            }
        }
        let piv = a[k][k].clone();
        if piv > Rational::zero() {
            p += 1;
        } else {
            q += 1;
        }
        for r in k + 1..size {
            let f = &a[r][k] / &piv;
            for c in k..size {
                let v = &f * &a[k][c];
                a[r][c] = &a[r][c] - v;
            }
        }
        for r in k + 1..size {
            a[r][k] = Rational::zero();
            a[k][r] = Rational::zero();
        }
        k += 1;
    }
    (p, q)
}

#[test]
fn pointwise_verdict_is_indefinite() {
    let l = nonnilpotent_real();
    let j = AlmostComplexStructure::standard(6).unwrap();
    let cert = omega_closedness_certificate().unwrap();
    let g = metric_from(cert.value_at_identity(), &j).unwrap();
    assert!(!g.det().is_zero());
    let (p, q) = inertia_by_elimination(&g);
    assert_eq!((p, q), (4, 2));
    assert_eq!(classify_pointwise(&l, &j, &cert).unwrap(), FormClass::PseudoKahler { p: 4, q: 2 });
}

#[test]
fn identity_value_is_not_an_invariant_closed_form() {
    let l = nonnilpotent_real();
    let j = AlmostComplexStructure::standard(6).unwrap();
    let w = restrict_to_identity(&omega_coordinate()).unwrap();
    assert_eq!(classify(&l, &j, &w).unwrap(), FormClass::NotClosed);
}

fn arb_exp_form() -> impl Strategy<Value = ExpForm> {
    let term = (0usize..6, 0usize..6, -2i64..=2, -2i64..=2, -3i64..=3, -3i64..=3, 0i64..4);
    prop::collection::vec(term, 1..5).prop_map(|terms| {
        let mut f = ExpForm::zero(2).unwrap();
        for (g1, g2, a, b, re, im, ph) in terms {
            if g1 == g2 {
                continue;
            }
            let m = ExpMonomial { a, b, shift: Rational::zero(), phase: rat(ph, 3) };
            let t = ExpForm::term(ExpPoly::monomial(Scalar::from_ints(re, im), m), &[g1, g2]).unwrap();
            f = f.add(&t);
        }
        f
    })
}

proptest! {
    #[test]
    fn d_squared_vanishes(f in arb_exp_form()) {
        prop_assert!(ext_d(&ext_d(&f).unwrap()).unwrap().is_zero());
    }

    #[test]
    fn pullback_is_multiplicative(
        f in arb_exp_form(),
        r1 in -4i64..=4, p1 in -6i64..=6, r2 in -4i64..=4, p2 in -6i64..=6,
    ) {
        let t1 = LatticeTranslation::new(rat(r1, 2), rat(p1, 4));
        let t2 = LatticeTranslation::new(rat(r2, 3), rat(p2, 4));
        let twice = pullback_translation(&pullback_translation(&f, &t1), &t2);
        prop_assert_eq!(twice, pullback_translation(&f, &t1.compose(&t2)));
    }

    #[test]
    fn invariance_iff_integer_phase(num in -12i64..=12, den in 1i64..=6) {
        let theta = rat(num, den);
        let t = LatticeTranslation::new(Rational::one(), theta.clone());
        let fixed = pullback_translation(&omega_coordinate(), &t) == omega_coordinate();
        prop_assert_eq!(fixed, theta.is_integer());
    }

    #[test]
    fn conjugation_is_an_involution(f in arb_exp_form()) {
        prop_assert_eq!(f.conj().conj(), f);
    }
}
