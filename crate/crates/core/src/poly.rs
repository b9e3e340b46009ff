//! Univariate polynomials over an exact field, with real-root tools over `Q`.

use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::scalar::{Field, GaussianRational, Rational};

/// Dense polynomial, coefficients in increasing degree. The zero polynomial
/// has no coefficients; otherwise the leading coefficient is nonzero.
#[derive(Clone, PartialEq)]
pub struct Poly<F> {
    coeffs: Vec<F>,
}

impl<F: Field> fmt::Debug for Poly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl<F: Field> fmt::Display for Poly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| match k {
                0 => format!("({c})"),
                1 => format!("({c})t"),
                _ => format!("({c})t^{k}"),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

impl<F: Field> Poly<F> {
    pub fn new(mut coeffs: Vec<F>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| F::from_i64(c)).collect())
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: F) -> Self {
        Self::new(vec![c])
    }

    /// The monomial `t`.
    pub fn t() -> Self {
        Self::new(vec![F::zero(), F::one()])
    }

    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> F {
        self.coeffs.get(k).cloned().unwrap_or_else(F::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&F> {
        self.coeffs.last()
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            None => Self::zero(),
            Some(l) => {
                let inv = F::one() / l.clone();
                Self::new(self.coeffs.iter().map(|c| c.clone() * inv.clone()).collect())
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|k| self.coeff(k) + other.coeff(k)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|k| self.coeff(k) - other.coeff(k)).collect())
    }

    pub fn neg(&self) -> Self {
        Self::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }

    pub fn scale(&self, s: &F) -> Self {
        Self::new(self.coeffs.iter().map(|c| c.clone() * s.clone()).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![F::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                let v = std::mem::replace(&mut out[i + j], F::zero());
                out[i + j] = v + a.clone() * b.clone();
            }
        }
        Self::new(out)
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::constant(F::one()), |acc, _| acc.mul(self))
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let dd = divisor.degree().expect("polynomial division by zero");
        let lead = divisor.coeffs[dd].clone();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![F::zero(); self.coeffs.len().saturating_sub(dd).max(1)];
        while rem.len() > dd && !rem.is_empty() {
            let k = rem.len() - 1;
            let c = rem[k].clone() / lead.clone();
            let shift = k - dd;
            for (j, d) in divisor.coeffs.iter().enumerate() {
                let v = std::mem::replace(&mut rem[shift + j], F::zero());
                rem[shift + j] = v - c.clone() * d.clone();
            }
            quot[shift] = c;
            while rem.last().is_some_and(Zero::is_zero) {
                rem.pop();
            }
        }
        (Self::new(quot), Self::new(rem))
    }

    pub fn rem(&self, divisor: &Self) -> Self {
        self.div_rem(divisor).1
    }

    /// Monic greatest common divisor (zero if both inputs are zero).
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c.clone() * F::from_i64(k as i64))
                .collect(),
        )
    }

    pub fn eval(&self, x: &F) -> F {
        self.coeffs.iter().rev().fold(F::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    /// Substitutes another polynomial for the variable.
    pub fn compose(&self, inner: &Self) -> Self {
        self.coeffs
            .iter()
            .rev()
            .fold(Self::zero(), |acc, c| acc.mul(inner).add(&Self::constant(c.clone())))
    }

    /// True when `gcd(p, p') = 1`. Constants count as squarefree.
    pub fn is_squarefree(&self) -> bool {
        match self.degree() {
            None => false,
            Some(0) => true,
            Some(_) => self.gcd(&self.derivative()).degree() == Some(0),
        }
    }

    /// `p / gcd(p, p')`, monic.
    pub fn squarefree_part(&self) -> Self {
        if self.degree().unwrap_or(0) == 0 {
            return self.monic();
        }
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0.monic()
    }

    /// Yun's squarefree factorisation: returns `(s_k, k)` with `p = c * prod s_k^k`.
    pub fn squarefree_decomposition(&self) -> Vec<(Self, u32)> {
        let mut out = Vec::new();
        if self.degree().unwrap_or(0) == 0 {
            return out;
        }
        let f = self.monic();
        let fp = f.derivative();
        let a = f.gcd(&fp);
        let mut b = f.div_rem(&a).0;
        let mut c = fp.div_rem(&a).0;
        let mut d = c.sub(&b.derivative());
        let mut k = 1;
        loop {
            let s = b.gcd(&d);
            if s.degree().unwrap_or(0) > 0 {
                out.push((s.clone(), k));
            }
            b = b.div_rem(&s).0;
            if b.degree().unwrap_or(0) == 0 {
                break;
            }
            c = d.div_rem(&s).0;
            d = c.sub(&b.derivative());
            k += 1;
        }
        out
    }

    /// `t^n p(1/t)` reversed coefficients equal the original.
    pub fn is_palindromic(&self) -> bool {
        let n = self.coeffs.len();
        (0..n / 2).all(|k| self.coeffs[k] == self.coeffs[n - 1 - k])
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> Poly<G> {
        Poly::new(self.coeffs.iter().map(f).collect())
    }

    /// The rational polynomial, when every coefficient is real.
    pub fn to_rational(&self) -> Option<Poly<Rational>> {
        self.coeffs.iter().map(Field::to_rational).collect::<Option<Vec<_>>>().map(Poly::new)
    }

    /// Lifts to Gaussian coefficients.
    pub fn to_gaussian(&self) -> Poly<GaussianRational> {
        Poly::new(
            self.coeffs
                .iter()
                .map(|c| GaussianRational::new(c.real_part(), c.imag_part()))
                .collect(),
        )
    }
}

impl Poly<GaussianRational> {
    pub fn real_poly(&self) -> Poly<Rational> {
        Poly::new(self.coeffs.iter().map(|c| c.re.clone()).collect())
    }

    pub fn imag_poly(&self) -> Poly<Rational> {
        Poly::new(self.coeffs.iter().map(|c| c.im.clone()).collect())
    }
}

fn sign(r: &Rational) -> i32 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

fn sign_variations(signs: impl IntoIterator<Item = i32>) -> usize {
    let mut last = 0;
    let mut count = 0;
    for s in signs.into_iter().filter(|&s| s != 0) {
        if last != 0 && s != last {
            count += 1;
        }
        last = s;
    }
    count
}

/// Sturm chain `p, p', -rem(p, p'), ...` of a rational polynomial.
pub fn sturm_sequence(p: &Poly<Rational>) -> Vec<Poly<Rational>> {
    let mut seq = vec![p.clone()];
    if p.degree().unwrap_or(0) == 0 {
        return seq;
    }
    seq.push(p.derivative());
    loop {
        let n = seq.len();
        let r = seq[n - 2].rem(&seq[n - 1]);
        if r.is_zero() {
            break;
        }
        seq.push(r.neg());
    }
    seq
}

fn variations_at(seq: &[Poly<Rational>], x: &Rational) -> usize {
    sign_variations(seq.iter().map(|q| sign(&q.eval(x))))
}

fn variations_at_infinity(seq: &[Poly<Rational>], positive: bool) -> usize {
    sign_variations(seq.iter().map(|q| match (q.leading(), q.degree()) {
        (Some(l), Some(d)) => {
            let s = sign(l);
            if positive || d % 2 == 0 {
                s
            } else {
                -s
            }
        }
        _ => 0,
    }))
}

/// Number of distinct real roots of a nonzero rational polynomial.
pub fn count_real_roots(p: &Poly<Rational>) -> usize {
    if p.degree().unwrap_or(0) == 0 {
        return 0;
    }
    let seq = sturm_sequence(&p.squarefree_part());
    variations_at_infinity(&seq, false) - variations_at_infinity(&seq, true)
}

/// Number of distinct real roots in the closed interval `[lo, hi]`.
pub fn count_real_roots_in(p: &Poly<Rational>, lo: &Rational, hi: &Rational) -> usize {
    if p.degree().unwrap_or(0) == 0 || lo > hi {
        return 0;
    }
    let sf = p.squarefree_part();
    let seq = sturm_sequence(&sf);
    // V(lo) - V(hi) counts roots in (lo, hi]
    let half_open = variations_at(&seq, lo) - variations_at(&seq, hi);
    half_open + usize::from(sf.eval(lo).is_zero())
}

/// Real roots counted with multiplicity.
pub fn count_real_roots_with_multiplicity(p: &Poly<Rational>) -> usize {
    p.squarefree_decomposition()
        .iter()
        .map(|(s, k)| count_real_roots(s) * *k as usize)
        .sum()
}

/// `q(t) = p(i t)` with Gaussian coefficients.
pub fn substitute_imaginary_axis(p: &Poly<Rational>) -> Poly<GaussianRational> {
    let powers = [
        GaussianRational::from_ints(1, 0),
        GaussianRational::from_ints(0, 1),
        GaussianRational::from_ints(-1, 0),
        GaussianRational::from_ints(0, -1),
    ];
    Poly::new(
        p.coeffs()
            .iter()
            .enumerate()
            .map(|(k, c)| GaussianRational::from(c.clone()) * powers[k % 4].clone())
            .collect(),
    )
}

/// True iff every complex root of `p` is real.
pub fn all_roots_real(p: &Poly<Rational>) -> bool {
    match p.degree() {
        None => false,
        Some(0) => true,
        Some(_) => {
            let sf = p.squarefree_part();
            count_real_roots(&sf) == sf.degree().unwrap_or(0)
        }
    }
}

/// True iff every complex root of `p` lies on the imaginary axis (0 included).
///
/// Uses `p(i t)`: the roots are all imaginary exactly when `p(i t)` is a
/// scalar multiple of a real polynomial whose roots are all real.
pub fn all_roots_imaginary(p: &Poly<Rational>) -> bool {
    let q = substitute_imaginary_axis(p);
    let Some(lead) = q.leading().cloned() else {
        return false;
    };
    let normalized = q.scale(&(GaussianRational::one() / lead));
    match normalized.to_rational() {
        Some(real) => all_roots_real(&real),
        None => false,
    }
}

/// Number of distinct common real roots of two real polynomials.
pub fn common_real_roots(a: &Poly<Rational>, b: &Poly<Rational>) -> usize {
    let g = a.gcd(b);
    if g.is_zero() {
        return usize::MAX;
    }
    count_real_roots(&g)
}

/// Decides whether `p` has a root of modulus one, exactly, via the Cayley
/// transform `t = (u + i)/(u - i)` which sends the real line onto the unit
/// circle minus `t = 1`.
pub fn has_unit_modulus_root(p: &Poly<Rational>) -> bool {
    let Some(n) = p.degree() else {
        return true;
    };
    if p.eval(&Rational::one()).is_zero() {
        return true;
    }
    let i = GaussianRational::i();
    let num = Poly::new(vec![i.clone(), GaussianRational::one()]); // u + i
    let den = Poly::new(vec![-i, GaussianRational::one()]); // u - i
    let mut q = Poly::<GaussianRational>::zero();
    for (k, c) in p.coeffs().iter().enumerate() {
        let term = num.pow(k as u32).mul(&den.pow((n - k) as u32)).scale(&c.clone().into());
        q = q.add(&term);
    }
    let (re, im) = (q.real_poly(), q.imag_poly());
    let g = re.gcd(&im);
    !g.is_zero() && count_real_roots(&g) > 0
}

/// Unit-circle test for a palindromic quartic `t^4 + p t^3 + q t^2 + p t + 1`
/// through `c = (t + 1/t)/2`, which reduces it to `4c^2 + 2pc + (q - 2)`; a
/// unit-circle root corresponds to a real root `c` in `[-1, 1]`.
pub fn palindromic_quartic_unit_root(p: &Rational, q: &Rational) -> bool {
    let reduced = Poly::new(vec![
        q - Rational::from_integer(2.into()),
        p * Rational::from_integer(2.into()),
        Rational::from_integer(4.into()),
    ]);
    count_real_roots_in(&reduced, &-Rational::one(), &Rational::one()) > 0
}
