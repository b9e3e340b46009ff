//! Exterior calculus in the coordinates `(x, y, z)` of the 3-dimensional
//! complex group with `(x, y, z)(x', y', z') = (x + x', y + e^x y', z + e^{-x} z')`.
//!
//! Coefficients are finite sums of `s · e^{ax + b x̄} · e^{c} · e^{iπθ}` with
//! `s` in `Q(i)`, integers `a, b` and rationals `c, θ`. Phases with `2θ` an
//! integer are folded into `s`; the remaining `θ` lives in `[0, 1/2)` and is
//! a formal tag, so relations such as `e^{iπ/3} + e^{-iπ/3} = 1` are not
//! applied. Only integrality of phases is ever decided.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::pseudo_kahler::{ClosednessCertificate, PseudoKahlerError, TwoForm};
use crate::scalar::{Field, GaussianRational, Rational};

type Scalar = GaussianRational;

/// Generator order: `dx, dx̄, dy, dȳ, dz, dz̄`.
pub const GENERATORS: [&str; 6] = ["dx", "dxb", "dy", "dyb", "dz", "dzb"];
pub const DX: usize = 0;
pub const DXB: usize = 1;
pub const DY: usize = 2;
pub const DYB: usize = 3;
pub const DZ: usize = 4;
pub const DZB: usize = 5;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoordinateError {
    #[error("generator index {0} out of range")]
    BadGenerator(usize),
    #[error("form of degree {0} exceeds 6")]
    DegreeTooHigh(usize),
    #[error("coefficient is not a plain number at the identity")]
    NotExactAtIdentity,
    #[error("restriction to the identity is not real")]
    NotReal,
    #[error("form is not closed")]
    NotClosed,
    #[error(transparent)]
    PseudoKahler(#[from] PseudoKahlerError),
}

type Result<T> = std::result::Result<T, CoordinateError>;

/// `e^{a x + b x̄} · e^{shift} · e^{iπ phase}` with `phase` in `[0, 1/2)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExpMonomial {
    pub a: i64,
    pub b: i64,
    pub shift: Rational,
    pub phase: Rational,
}

fn i_power(k: i64) -> Scalar {
    match k.rem_euclid(4) {
        0 => Scalar::one(),
        1 => Scalar::i(),
        2 => -Scalar::one(),
        _ => -Scalar::i(),
    }
}

impl ExpMonomial {
    pub fn unit() -> Self {
        Self::exp(0, 0)
    }

    pub fn exp(a: i64, b: i64) -> Self {
        Self { a, b, shift: Rational::zero(), phase: Rational::zero() }
    }

    /// Canonical monomial and the power of `i` split off its phase.
    fn canonical(a: i64, b: i64, shift: Rational, phase: Rational) -> (Self, Scalar) {
        let doubled = &phase * Rational::from_integer(2.into());
        let k = doubled.floor();
        let rest = phase - &k / Rational::from_integer(2.into());
        let k = k.to_integer().mod_floor(&4.into());
        let k: i64 = (&k).try_into().expect("reduced mod 4");
        (Self { a, b, shift, phase: rest }, i_power(k))
    }

    fn mul(&self, other: &Self) -> (Self, Scalar) {
        Self::canonical(
            self.a + other.a,
            self.b + other.b,
            &self.shift + &other.shift,
            &self.phase + &other.phase,
        )
    }

    fn conj(&self) -> (Self, Scalar) {
        Self::canonical(self.b, self.a, self.shift.clone(), -self.phase.clone())
    }
}

/// Finite sum of exponential monomials with `Q(i)` coefficients.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct ExpPoly {
    terms: BTreeMap<ExpMonomial, Scalar>,
}

impl fmt::Debug for ExpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for ExpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, s)| {
                let mut p = format!("({s})");
                if m.a != 0 || m.b != 0 {
                    p.push_str(&format!("e^({}x+{}xb)", m.a, m.b));
                }
                if !m.shift.is_zero() {
                    p.push_str(&format!("e^({})", m.shift));
                }
                if !m.phase.is_zero() {
                    p.push_str(&format!("e^(iπ·{})", m.phase));
                }
                p
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl ExpPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(s: Scalar) -> Self {
        Self::monomial(s, ExpMonomial::unit())
    }

    pub fn monomial(s: Scalar, m: ExpMonomial) -> Self {
        let mut p = Self::zero();
        p.add_term(m, s);
        p
    }

    pub fn exp(a: i64, b: i64) -> Self {
        Self::monomial(Scalar::one(), ExpMonomial::exp(a, b))
    }

    pub fn terms(&self) -> &BTreeMap<ExpMonomial, Scalar> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, m: ExpMonomial, s: Scalar) {
        let (m, unit) = ExpMonomial::canonical(m.a, m.b, m.shift, m.phase);
        let e = self.terms.entry(m.clone()).or_insert_with(Scalar::zero);
        *e = e.clone() + s * unit;
        if e.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, s) in &other.terms {
            out.add_term(m.clone(), s.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Scalar::one())
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c.clone() * s.clone());
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (m1, s1) in &self.terms {
            for (m2, s2) in &other.terms {
                let (m, unit) = m1.mul(m2);
                out.add_term(m, s1.clone() * s2.clone() * unit);
            }
        }
        out
    }

    pub fn conj(&self) -> Self {
        let mut out = Self::zero();
        for (m, s) in &self.terms {
            let (mc, unit) = m.conj();
            out.add_term(mc, s.conj() * unit);
        }
        out
    }

    /// `∂/∂x` and `∂/∂x̄`.
    fn partials(&self) -> (Self, Self) {
        let (mut px, mut pxb) = (Self::zero(), Self::zero());
        for (m, s) in &self.terms {
            px.add_term(m.clone(), s.clone() * Scalar::from_ints(m.a, 0));
            pxb.add_term(m.clone(), s.clone() * Scalar::from_ints(m.b, 0));
        }
        (px, pxb)
    }

    /// Value at `x = 0`, defined when no constant factor `e^{c}` or formal phase remains.
    pub fn at_identity(&self) -> Result<Scalar> {
        let mut total = Scalar::zero();
        for (m, s) in &self.terms {
            if !m.shift.is_zero() || !m.phase.is_zero() {
                return Err(CoordinateError::NotExactAtIdentity);
            }
            total = total + s.clone();
        }
        Ok(total)
    }
}

/// Sorts generator indices, returning `None` on a repeat and otherwise
/// whether the permutation was odd.
fn sort_sign(idx: &mut [usize]) -> Option<bool> {
    let mut odd = false;
    for i in 0..idx.len() {
        for j in 0..idx.len().saturating_sub(1 + i) {
            if idx[j] > idx[j + 1] {
                idx.swap(j, j + 1);
                odd = !odd;
            }
        }
    }
    idx.windows(2).all(|w| w[0] < w[1]).then_some(odd)
}

/// Exterior form in `dx, dx̄, dy, dȳ, dz, dz̄` with [`ExpPoly`] coefficients.
#[derive(Clone, PartialEq, Eq)]
pub struct ExpForm {
    degree: usize,
    terms: BTreeMap<Vec<usize>, ExpPoly>,
}

impl fmt::Debug for ExpForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for ExpForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(k, c)| {
                let gens: Vec<&str> = k.iter().map(|&g| GENERATORS[g]).collect();
                format!("[{c}] {}", gens.join("^"))
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl ExpForm {
    pub fn zero(degree: usize) -> Result<Self> {
        if degree > 6 {
            return Err(CoordinateError::DegreeTooHigh(degree));
        }
        Ok(Self { degree, terms: BTreeMap::new() })
    }

    pub fn function(f: ExpPoly) -> Self {
        let mut out = Self { degree: 0, terms: BTreeMap::new() };
        if !f.is_zero() {
            out.terms.insert(Vec::new(), f);
        }
        out
    }

    /// `f · dg_1 ∧ ... ∧ dg_k` for generators in any order.
    pub fn term(f: ExpPoly, gens: &[usize]) -> Result<Self> {
        let mut out = Self::zero(gens.len())?;
        out.add_term(gens.to_vec(), f)?;
        Ok(out)
    }

    /// A single generator 1-form.
    pub fn generator(g: usize) -> Result<Self> {
        Self::term(ExpPoly::constant(Scalar::one()), &[g])
    }

    fn add_term(&mut self, mut gens: Vec<usize>, f: ExpPoly) -> Result<()> {
        if let Some(&g) = gens.iter().find(|&&g| g >= 6) {
            return Err(CoordinateError::BadGenerator(g));
        }
        let Some(odd) = sort_sign(&mut gens) else {
            return Ok(());
        };
        let f = if odd { f.neg() } else { f };
        let sum = self.terms.get(&gens).map_or(f.clone(), |e| e.add(&f));
        if sum.is_zero() {
            self.terms.remove(&gens);
        } else {
            self.terms.insert(gens, sum);
        }
        Ok(())
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn terms(&self) -> &BTreeMap<Vec<usize>, ExpPoly> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of `dg_1 ∧ ... ∧ dg_k`, with the sign of the given order.
    pub fn coeff(&self, gens: &[usize]) -> ExpPoly {
        let mut sorted = gens.to_vec();
        match sort_sign(&mut sorted) {
            None => ExpPoly::zero(),
            Some(odd) => {
                let c = self.terms.get(&sorted).cloned().unwrap_or_default();
                if odd {
                    c.neg()
                } else {
                    c
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.degree, other.degree, "adding forms of different degree");
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(k.clone(), c.clone()).expect("valid generators");
        }
        out
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        self.mul_function(&ExpPoly::constant(s.clone()))
    }

    pub fn mul_function(&self, f: &ExpPoly) -> Self {
        let mut out = Self { degree: self.degree, terms: BTreeMap::new() };
        for (k, c) in &self.terms {
            out.add_term(k.clone(), c.mul(f)).expect("valid generators");
        }
        out
    }

    pub fn wedge(&self, other: &Self) -> Result<Self> {
        let mut out = Self::zero(self.degree + other.degree)?;
        for (k1, c1) in &self.terms {
            for (k2, c2) in &other.terms {
                let gens: Vec<usize> = k1.iter().chain(k2).copied().collect();
                out.add_term(gens, c1.mul(c2))?;
            }
        }
        Ok(out)
    }

    /// Complex conjugation: swaps each generator with its conjugate and
    /// conjugates the coefficients.
    pub fn conj(&self) -> Self {
        let mut out = Self { degree: self.degree, terms: BTreeMap::new() };
        for (k, c) in &self.terms {
            let gens: Vec<usize> = k.iter().map(|g| g ^ 1).collect();
            out.add_term(gens, c.conj()).expect("valid generators");
        }
        out
    }
}

/// Exterior derivative; only `x` and `x̄` occur in coefficients.
pub fn ext_d(f: &ExpForm) -> Result<ExpForm> {
    let mut out = ExpForm::zero(f.degree + 1)?;
    for (k, c) in &f.terms {
        let (px, pxb) = c.partials();
        for (g, p) in [(DX, px), (DXB, pxb)] {
            if p.is_zero() {
                continue;
            }
            let mut gens = vec![g];
            gens.extend(k);
            out.add_term(gens, p)?;
        }
    }
    Ok(out)
}

/// `i dx∧dx̄ + dy∧dz̄ + dȳ∧dz`.
pub fn omega_coordinate() -> ExpForm {
    let one = || ExpPoly::constant(Scalar::one());
    let mut w = ExpForm::zero(2).expect("degree 2");
    w.add_term(vec![DX, DXB], ExpPoly::constant(Scalar::i())).expect("valid");
    w.add_term(vec![DY, DZB], one()).expect("valid");
    w.add_term(vec![DYB, DZ], one()).expect("valid");
    w
}

/// Left-invariant forms `ω_1 = dx`, `ω_2 = e^x dy`, `ω_3 = e^{-x} dz`.
pub fn maurer_cartan() -> [ExpForm; 3] {
    let mk = |f: ExpPoly, g| ExpForm::term(f, &[g]).expect("valid");
    [
        mk(ExpPoly::constant(Scalar::one()), DX),
        mk(ExpPoly::exp(1, 0), DY),
        mk(ExpPoly::exp(-1, 0), DZ),
    ]
}

/// The same 2-form assembled from Maurer–Cartan forms:
/// `i ω_1∧ω̄_1 + e^{x̄ - x} ω_2∧ω̄_3 + e^{x - x̄} ω̄_2∧ω_3`.
pub fn omega_mc() -> ExpForm {
    let [w1, w2, w3] = maurer_cartan();
    let t1 = w1.wedge(&w1.conj()).expect("degree 2").scale(&Scalar::i());
    let t2 = w2.wedge(&w3.conj()).expect("degree 2").mul_function(&ExpPoly::exp(-1, 1));
    let t3 = w2.conj().wedge(&w3).expect("degree 2").mul_function(&ExpPoly::exp(1, -1));
    t1.add(&t2).add(&t3)
}

/// Left translation by `(w_1, w_2, w_3)` with `w_1 = re + iπ·im_pi`.
///
/// The `y` and `z` parts are recorded for completeness; the pullback of
/// forms in `dx, dy, dz` and their conjugates does not depend on them.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeTranslation {
    pub w1_re: Rational,
    pub w1_im_pi: Rational,
    pub w2: Option<(Rational, Rational)>,
    pub w3: Option<(Rational, Rational)>,
}

impl LatticeTranslation {
    pub fn new(w1_re: Rational, w1_im_pi: Rational) -> Self {
        Self { w1_re, w1_im_pi, w2: None, w3: None }
    }

    pub fn with_shifts(mut self, w2: (Rational, Rational), w3: (Rational, Rational)) -> Self {
        self.w2 = Some(w2);
        self.w3 = Some(w3);
        self
    }

    /// Product in the group; the `y`, `z` parts of a product involve `e^{w_1}`
    /// and are not tracked.
    pub fn compose(&self, other: &Self) -> Self {
        Self::new(&self.w1_re + &other.w1_re, &self.w1_im_pi + &other.w1_im_pi)
    }
}

/// Pullback along left translation by `t`.
///
/// A term `e^{ax + bx̄} dI` picks up `e^{A w_1 + B w̄_1}` where
/// `A = a + #dy - #dz` and `B = b + #dȳ - #dz̄` in `I`.
pub fn pullback_translation(f: &ExpForm, t: &LatticeTranslation) -> ExpForm {
    let mut out = ExpForm { degree: f.degree, terms: BTreeMap::new() };
    for (k, c) in &f.terms {
        let count = |g| k.iter().filter(|&&h| h == g).count() as i64;
        let (da, db) = (count(DY) - count(DZ), count(DYB) - count(DZB));
        let mut pulled = ExpPoly::zero();
        for (m, s) in &c.terms {
            let (a, b) = (m.a + da, m.b + db);
            let shift = &m.shift + &t.w1_re * Rational::from_integer((a + b).into());
            let phase = &m.phase + &t.w1_im_pi * Rational::from_integer((a - b).into());
            pulled.add_term(ExpMonomial { a: m.a, b: m.b, shift, phase }, s.clone());
        }
        out.add_term(k.clone(), pulled).expect("valid generators");
    }
    out
}

/// Real 2-form at the identity in the real basis `(Re x, Im x, Re y, Im y, Re z, Im z)`,
/// using `dx = du_1 + i du_2`.
pub fn restrict_to_identity(f: &ExpForm) -> Result<TwoForm<Scalar>> {
    if f.degree != 2 {
        return Err(PseudoKahlerError::WrongDegree(f.degree).into());
    }
    // each complex generator as a combination of real du_k
    let real_parts = |g: usize| -> [(usize, Scalar); 2] {
        let base = 2 * (g / 2);
        let sign = if g.is_multiple_of(2) { 1 } else { -1 };
        [(base, Scalar::one()), (base + 1, Scalar::from_ints(0, sign))]
    };
    let mut m = crate::linalg::Matrix::<Scalar>::zeros(6, 6);
    for (k, c) in &f.terms {
        let v = c.at_identity()?;
        for (p, sp) in real_parts(k[0]) {
            for (q, sq) in real_parts(k[1]) {
                if p == q {
                    continue;
                }
                let add = v.clone() * sp.clone() * sq;
                m[(p, q)] = m[(p, q)].clone() + add.clone();
                m[(q, p)] = m[(q, p)].clone() - add;
            }
        }
    }
    if !m.is_real() {
        return Err(CoordinateError::NotReal);
    }
    Ok(TwoForm::from_matrix(&m)?)
}

/// Certificate that `omega_coordinate()` is closed, after checking `dω = 0` exactly.
pub fn omega_closedness_certificate() -> Result<ClosednessCertificate<Scalar>> {
    let w = omega_coordinate();
    if !ext_d(&w)?.is_zero() {
        return Err(CoordinateError::NotClosed);
    }
    Ok(ClosednessCertificate::new(restrict_to_identity(&w)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    #[test]
    fn phases_fold_into_units() {
        let p = ExpPoly::monomial(Scalar::one(), ExpMonomial { phase: rat(1, 2), ..ExpMonomial::unit() });
        assert_eq!(p, ExpPoly::constant(Scalar::i()));
        let q = ExpPoly::monomial(Scalar::one(), ExpMonomial { phase: rat(7, 3), ..ExpMonomial::unit() });
        let (m, unit) = q.terms().iter().next().map(|(m, s)| (m.clone(), s.clone())).unwrap();
        assert_eq!(m.phase, rat(1, 3));
        assert_eq!(unit, Scalar::one());
    }

    #[test]
    fn d_of_exp_dy() {
        let f = ExpForm::term(ExpPoly::exp(1, 0), &[DY]).unwrap();
        let expected = ExpForm::term(ExpPoly::exp(1, 0), &[DX, DY]).unwrap();
        assert_eq!(ext_d(&f).unwrap(), expected);
    }

    #[test]
    fn wedge_is_alternating() {
        let dx = ExpForm::generator(DX).unwrap();
        let dy = ExpForm::generator(DY).unwrap();
        assert!(dx.wedge(&dx).unwrap().is_zero());
        assert_eq!(dx.wedge(&dy).unwrap(), dy.wedge(&dx).unwrap().scale(&-Scalar::one()));
    }

    #[test]
    fn bad_generator() {
        assert_eq!(ExpForm::generator(6).unwrap_err(), CoordinateError::BadGenerator(6));
    }
}
