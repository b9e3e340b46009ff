use solvkit::catalog::{get, Params};
use solvkit::complex_structure::*;
use solvkit::linalg::{unit_vec, vec_is_zero};
use solvkit::scalar::rat;
use solvkit::{LieAlgebra, Matrix, Scalar};

type J = AlmostComplexStructure<Scalar>;

fn s(x: i64) -> Scalar {
    Scalar::from_ints(x, 0)
}

fn pair(name: &str) -> (LieAlgebra<Scalar>, J) {
    let e = get(name, &Params::default()).unwrap();
    (e.algebra, e.j.unwrap())
}

fn j_from_rows(rows: [[i64; 4]; 4]) -> J {
    AlmostComplexStructure::new(Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| s(x)).collect()).collect())).unwrap()
}

fn tautological(l: &LieAlgebra<Scalar>) -> (LieAlgebra<Scalar>, J) {
    let real = l.realify().unwrap();
    let j = AlmostComplexStructure::standard(real.dim()).unwrap();
    (real, j)
}

const FAMILIES: [&str; 6] = ["family1", "family2", "family3", "family4", "family5", "family6"];

/// Every fixture: catalog pairs, example 3, and the realified 3-dim types.
fn fixtures() -> Vec<(String, LieAlgebra<Scalar>, J)> {
    let mut out: Vec<(String, LieAlgebra<Scalar>, J)> =
        FAMILIES.iter().chain(["example3"].iter()).map(|n| { let (l, j) = pair(n); (n.to_string(), l, j) }).collect();
    for name in ["abelian3", "nilpotent3", "nonnilpotent3"] {
        let (l, j) = tautological(&get(name, &Params::default()).unwrap().algebra);
        out.push((name.to_string(), l, j));
    }
    out
}

/// Frozen non-integrable pairs: `(family, J rows, first witness)`.
fn negative_fixtures() -> Vec<(&'static str, J, (usize, usize))> {
    vec![
        ("family2", j_from_rows([[0, 0, -1, 0], [0, 0, 0, -1], [1, 0, 0, 0], [0, 1, 0, 0]]), (0, 1)),
        ("family3", j_from_rows([[0, 0, -1, 0], [0, 0, 0, -1], [1, 0, 0, 0], [0, 1, 0, 0]]), (0, 1)),
        ("family4", j_from_rows([[0, 0, -1, 0], [0, 0, 0, -1], [1, 0, 0, 0], [0, 1, 0, 0]]), (0, 1)),
        ("family5", j_from_rows([[0, 0, -1, 0], [0, 0, 0, -1], [1, 0, 0, 0], [0, 1, 0, 0]]), (0, 1)),
        ("family6", j_from_rows([[0, 1, 0, 0], [-1, 0, 0, 0], [0, 0, 0, -1], [0, 0, 1, 0]]), (0, 2)),
    ]
}

#[test]
fn negative_control_scan_is_frozen() {
    let counts: Vec<usize> = FAMILIES.iter().map(|n| negative_controls(&pair(n).0).unwrap().len()).collect();
    assert_eq!(counts, vec![0, 8, 8, 8, 8, 8]);
    for (name, j, witness) in negative_fixtures() {
        let first = negative_controls(&pair(name).0).unwrap().into_iter().next().unwrap();
        assert_eq!(first.0, j, "{name}");
        assert_eq!(first.1, witness, "{name}");
    }
}

#[test]
fn nijenhuis_examples() {
    let (ab, j) = pair("family1");
    for a in 0..4 {
        for b in 0..4 {
            assert!(vec_is_zero(&nijenhuis(&ab, &j, &unit_vec(4, a), &unit_vec(4, b)).unwrap()));
        }
    }
    let (k, jk) = pair("family4");
    assert!(vec_is_zero(&nijenhuis(&k, &jk, &unit_vec(4, 0), &unit_vec(4, 1)).unwrap()));
    for (name, j, (a, b)) in negative_fixtures() {
        let l = pair(name).0;
        assert!(!vec_is_zero(&nijenhuis(&l, &j, &unit_vec(4, a), &unit_vec(4, b)).unwrap()));
        assert_eq!(is_integrable(&l, &j).unwrap().witness, Some((a, b)));
    }
}

#[test]
fn family6_with_the_uncorrected_j() {
    // the J of families 1-5 coincides with the family 6 J at q = 0, and stays integrable
    let l = get("family6", &Params { q: rat(1, 2), ..Params::default() }).unwrap().algebra;
    let plain = AlmostComplexStructure::standard(4).unwrap();
    assert!(is_integrable(&l, &plain).unwrap().ok);
}

#[test]
fn catalog_pairs_are_integrable() {
    for (name, l, j) in fixtures() {
        assert!(is_integrable(&l, &j).unwrap().ok, "{name}");
    }
}

#[test]
fn round_trip_through_complexification() {
    for (name, l, j) in fixtures() {
        let h = subalgebra_from_j(&l, &j).unwrap();
        assert_eq!(h.basis.dim(), l.dim(), "{name}");
        assert_eq!(j_from_subspace(&h.ambient, &h.basis).unwrap(), j, "{name}");
        let sigma = h.ambient.form().sigma().unwrap().clone();
        assert_eq!(j_from_subspace(&h.ambient, &h.basis.map(&sigma)).unwrap(), j.negate(), "{name}");
    }
}

#[test]
fn round_trip_on_every_integrable_candidate() {
    for name in FAMILIES {
        let l = pair(name).0;
        for j in signed_permutation_candidates::<Scalar>(4) {
            if is_integrable(&l, &j).unwrap().ok {
                let h = subalgebra_from_j(&l, &j).unwrap();
                assert_eq!(j_from_subspace(&h.ambient, &h.basis).unwrap(), j);
            }
        }
    }
}

#[test]
fn abelian_plane() {
    let l = LieAlgebra::abelian(2, solvkit::AlgebraForm::Real).unwrap();
    let lc = l.complexify().unwrap();
    // X_1 + i X_2
    let w = complex_span(2, &[vec![s(1), Scalar::from_ints(0, 1)]]);
    let j = j_from_subspace(&lc, &w).unwrap();
    let expected = Matrix::from_rows(vec![vec![s(0), s(-1)], vec![s(1), s(0)]]);
    assert_eq!(j.matrix(), &expected);
    let h = subalgebra_from_j(&l, &j).unwrap();
    assert_eq!(h.basis, w);
}

#[test]
fn transversality_is_required() {
    let lc = LieAlgebra::abelian(2, solvkit::AlgebraForm::Real).unwrap().complexify().unwrap();
    // the complex span of X_1 is σ-stable
    let w = complex_span(2, &[vec![s(1), s(0)]]);
    assert!(matches!(j_from_subspace(&lc, &w), Err(ComplexStructureError::NotTransverse)));
}

#[test]
fn lemma1_equivalence() {
    let mut cases: Vec<(LieAlgebra<Scalar>, J)> = fixtures().into_iter().map(|(_, l, j)| (l, j)).collect();
    for (name, j, _) in negative_fixtures() {
        cases.push((pair(name).0, j));
    }
    for (l, j) in cases {
        let integrable = is_integrable(&l, &j).unwrap().ok;
        let closed = !matches!(subalgebra_from_j(&l, &j), Err(ComplexStructureError::NotIntegrable(..)));
        assert_eq!(integrable, closed);
    }
}

#[test]
fn nijenhuis_identities() {
    let mut cases: Vec<(LieAlgebra<Scalar>, J)> = fixtures().into_iter().map(|(_, l, j)| (l, j)).collect();
    for (name, j, _) in negative_fixtures() {
        cases.push((pair(name).0, j));
    }
    for (l, j) in cases {
        let n = l.dim();
        for a in 0..n {
            for b in 0..n {
                let (x, y) = (unit_vec(n, a), unit_vec(n, b));
                let nxy = nijenhuis(&l, &j, &x, &y).unwrap();
                let nyx = nijenhuis(&l, &j, &y, &x).unwrap();
                assert_eq!(nxy, nyx.iter().map(|v| -v.clone()).collect::<Vec<_>>());
                let njx = nijenhuis(&l, &j, &j.apply(&x), &y).unwrap();
                assert_eq!(njx, j.apply(&nxy).iter().map(|v| -v.clone()).collect::<Vec<_>>());
            }
        }
    }
}

#[test]
fn complex_lie_algebras() {
    let (l, j) = tautological(&get("nonnilpotent3", &Params::default()).unwrap().algebra);
    assert!(is_complex_lie_algebra(&l, &j).unwrap());
    let (f2, j2) = pair("family2");
    assert!(!is_complex_lie_algebra(&f2, &j2).unwrap());
    let (f1, _) = pair("family1");
    for j in signed_permutation_candidates::<Scalar>(4) {
        assert!(is_complex_lie_algebra(&f1, &j).unwrap());
    }
    for (_, l, j) in fixtures() {
        if is_complex_lie_algebra(&l, &j).unwrap() {
            assert!(is_integrable(&l, &j).unwrap().ok);
        }
    }
}
