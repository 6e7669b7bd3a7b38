//! Exact rational functions over the monomial generators.
//!
//! A [`Scalar`] is `coeff · num / Π atomᵢ^{mᵢ}` where `num` is a primitive
//! integer Laurent polynomial and each atom is a normalized polynomial
//! (no monomial factor, primitive, positive leading coefficient). Every
//! denominator that arises from brackets splits into cyclotomic factors
//! `Φₙ(m)` of a primitive monomial `m`, which are irreducible, so keeping
//! the denominator factored makes cancellation a sequence of exact
//! divisions and never needs a multivariate gcd.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::poly::{dense, mono_inv, mono_mul, Mono, Poly, ONE_MONO};

/// A normalized irreducible-or-opaque denominator factor.
pub type Atom = Arc<Poly>;

#[derive(Clone)]
pub struct Scalar {
    coeff: BigRational,
    num: Poly,
    den: Vec<(Atom, u32)>,
}

/// Splits a nonzero polynomial into `content · monomial · Π atoms`.
///
/// Polynomials supported on a single line are split further into cyclotomic
/// factors; the rest (after removing those) is kept as one opaque atom.
pub(crate) fn factor(p: &Poly) -> (BigInt, Mono, Vec<(Atom, u32)>) {
    assert!(!p.is_zero());
    let content = p.content();
    let p = p.div_exact_int(&content);
    let shift = p.min_exponents();
    let p = p.mul_mono(&mono_inv(&shift));
    if p.is_one() {
        return (content, shift, Vec::new());
    }
    let mut atoms = Vec::new();
    let mut extra_shift = ONE_MONO;
    match p.as_univariate() {
        Some((dir, base, coeffs)) if dir != ONE_MONO => {
            let mut rest = coeffs;
            let max_deg = rest.len() - 1;
            // Bracket denominators are products of Φₙ(m) with n at most
            // twice the degree; larger factors stay inside the remainder.
            for n in 1..=2 * max_deg + 2 {
                if dense::totient(n) > rest.len() - 1 {
                    continue;
                }
                let phi = dense::cyclotomic(n);
                let mut mult = 0;
                while rest.len() > 1 {
                    match dense::div_exact(&rest, &phi) {
                        Some(q) => {
                            rest = q;
                            mult += 1;
                        }
                        None => break,
                    }
                }
                if mult > 0 {
                    let atom = Poly::from_univariate(&dir, &ONE_MONO, &phi);
                    let (c, s, a) = normalize_atom(&atom);
                    debug_assert!(c.is_one());
                    for _ in 0..mult {
                        extra_shift = mono_mul(&extra_shift, &s);
                    }
                    atoms.push((a, mult));
                }
                if rest.len() <= 1 {
                    break;
                }
            }
            let rest_poly = Poly::from_univariate(&dir, &base, &rest);
            let (c, s, a) = normalize_atom(&rest_poly);
            extra_shift = mono_mul(&extra_shift, &s);
            if !a.is_one() {
                atoms.push((a, 1));
            }
            // The cyclotomic pieces were built from a unit leading/trailing
            // coefficient, so only the remainder can carry content.
            let content = content * c;
            atoms.sort();
            return (content, mono_mul(&shift, &extra_shift), merge(atoms));
        }
        _ => {}
    }
    atoms.push((Arc::new(p), 1));
    (content, shift, atoms)
}

/// `p = c · m · atom` with atom normalized.
fn normalize_atom(p: &Poly) -> (BigInt, Mono, Atom) {
    let c = p.content();
    let p = p.div_exact_int(&c);
    let s = p.min_exponents();
    (c, s, Arc::new(p.mul_mono(&mono_inv(&s))))
}

fn merge(mut atoms: Vec<(Atom, u32)>) -> Vec<(Atom, u32)> {
    atoms.sort_by(|a, b| a.0.cmp(&b.0));
    let mut out: Vec<(Atom, u32)> = Vec::with_capacity(atoms.len());
    for (a, m) in atoms {
        match out.last_mut() {
            Some((la, lm)) if *la == a => *lm += m,
            _ => out.push((a, m)),
        }
    }
    out.retain(|(_, m)| *m > 0);
    out
}

fn expand(atoms: &[(Atom, u32)]) -> Poly {
    atoms.iter().fold(Poly::one(), |acc, (a, m)| acc.mul(&a.pow(*m)))
}

/// Multiplicity-wise `a \ b` and `b \ a` after removing the common part.
type Atoms = Vec<(Atom, u32)>;

fn split_common(a: &[(Atom, u32)], b: &[(Atom, u32)]) -> (Atoms, Atoms, Atoms) {
    let (mut only_a, mut only_b, mut common) = (Vec::new(), Vec::new(), Vec::new());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            std::cmp::Ordering::Less => {
                only_a.push(a[i].clone());
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                only_b.push(b[j].clone());
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                let (ma, mb) = (a[i].1, b[j].1);
                let m = ma.min(mb);
                common.push((a[i].0.clone(), m));
                if ma > m {
                    only_a.push((a[i].0.clone(), ma - m));
                }
                if mb > m {
                    only_b.push((b[j].0.clone(), mb - m));
                }
                i += 1;
                j += 1;
            }
        }
    }
    only_a.extend_from_slice(&a[i..]);
    only_b.extend_from_slice(&b[j..]);
    (only_a, only_b, common)
}

/// Divides `num` by as many copies of each listed atom as possible.
fn cancel(num: &mut Poly, den: &mut [(Atom, u32)]) {
    for (atom, m) in den.iter_mut() {
        while *m > 0 {
            match num.div_exact(atom) {
                Some(q) => {
                    *num = q;
                    *m -= 1;
                }
                None => break,
            }
        }
    }
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar {
            coeff: BigRational::zero(),
            num: Poly::one(),
            den: Vec::new(),
        }
    }

    pub fn one() -> Self {
        Self::from_rational(BigRational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(BigRational::from_integer(n.into()))
    }

    pub fn from_rational(r: BigRational) -> Self {
        if r.is_zero() {
            return Self::zero();
        }
        Scalar { coeff: r, num: Poly::one(), den: Vec::new() }
    }

    pub fn monomial(m: Mono) -> Self {
        Scalar {
            coeff: BigRational::one(),
            num: Poly::monomial(m, BigInt::one()),
            den: Vec::new(),
        }
    }

    pub fn from_poly(p: Poly) -> Self {
        Self::build(BigRational::one(), p, Vec::new(), false)
    }

    /// `coeff · num / den_poly`, with the denominator split into atoms.
    pub fn from_fraction(coeff: BigRational, num: Poly, den: &Poly) -> Option<Self> {
        if den.is_zero() {
            return None;
        }
        let (c, shift, atoms) = factor(den);
        let num = num.mul_mono(&mono_inv(&shift));
        Some(Self::build(coeff / BigRational::from_integer(c), num, atoms, true))
    }

    fn build(coeff: BigRational, num: Poly, den: Vec<(Atom, u32)>, reduce: bool) -> Self {
        if coeff.is_zero() || num.is_zero() {
            return Self::zero();
        }
        let mut num = num;
        let mut den = merge(den);
        if reduce {
            cancel(&mut num, &mut den);
            den.retain(|(_, m)| *m > 0);
        }
        let content = num.content();
        let num = num.div_exact_int(&content);
        Scalar {
            coeff: coeff * BigRational::from_integer(content),
            num,
            den,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.coeff.is_one() && self.num.is_one() && self.den.is_empty()
    }

    pub fn coeff(&self) -> &BigRational {
        &self.coeff
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator_atoms(&self) -> &[(Atom, u32)] {
        &self.den
    }

    /// The rational value of a constant scalar.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.is_zero() {
            return Some(BigRational::zero());
        }
        if !self.den.is_empty() {
            return None;
        }
        self.num
            .as_constant()
            .map(|c| &self.coeff * BigRational::from_integer(c.clone()))
    }

    /// Numerator and denominator as integer polynomials.
    pub fn to_fraction(&self) -> (Poly, Poly) {
        if self.is_zero() {
            return (Poly::zero(), Poly::one());
        }
        let n = self.num.scale(self.coeff.numer());
        let d = expand(&self.den).scale(self.coeff.denom());
        (n, d)
    }

    pub fn neg(&self) -> Self {
        Scalar {
            coeff: -&self.coeff,
            num: self.num.clone(),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, other: &Scalar) -> Scalar {
        if self.is_zero() || other.is_zero() {
            return Scalar::zero();
        }
        // Atoms of one side were already coprime to its own numerator.
        let mut na = self.num.clone();
        let mut nb = other.num.clone();
        let mut da = self.den.clone();
        let mut db = other.den.clone();
        cancel(&mut nb, &mut da);
        cancel(&mut na, &mut db);
        let mut den = da;
        den.extend(db);
        Self::build(&self.coeff * &other.coeff, na.mul(&nb), den, false)
    }

    pub fn add(&self, other: &Scalar) -> Scalar {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let (only_a, only_b, common) = split_common(&self.den, &other.den);
        let ta = self.num.mul(&expand(&only_b));
        let tb = other.num.mul(&expand(&only_a));
        let (pa, qa) = (self.coeff.numer(), self.coeff.denom());
        let (pb, qb) = (other.coeff.numer(), other.coeff.denom());
        let num = ta.scale(&(pa * qb)).add(&tb.scale(&(pb * qa)));
        if num.is_zero() {
            return Scalar::zero();
        }
        let coeff = BigRational::new(BigInt::one(), qa * qb);
        let mut den = common;
        den.extend(only_a);
        den.extend(only_b);
        Self::build(coeff, num, den, true)
    }

    pub fn sub(&self, other: &Scalar) -> Scalar {
        self.add(&other.neg())
    }

    pub fn inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        let (c, shift, atoms) = factor(&self.num);
        let num = expand(&self.den).mul_mono(&mono_inv(&shift));
        let coeff = BigRational::one() / (&self.coeff * BigRational::from_integer(c));
        Some(Self::build(coeff, num, atoms, false))
    }

    pub fn div(&self, other: &Scalar) -> Option<Scalar> {
        other.inv().map(|i| self.mul(&i))
    }

    pub fn pow(&self, n: i32) -> Option<Scalar> {
        let base = if n < 0 { self.inv()? } else { self.clone() };
        let mut out = Scalar::one();
        for _ in 0..n.unsigned_abs() {
            out = out.mul(&base);
        }
        Some(out)
    }

    pub fn scale(&self, r: &BigRational) -> Scalar {
        if r.is_zero() {
            return Scalar::zero();
        }
        Scalar {
            coeff: &self.coeff * r,
            num: self.num.clone(),
            den: self.den.clone(),
        }
    }

    /// Applies a monomial substitution (a group homomorphism on exponents).
    pub fn map_monomials(&self, f: impl Fn(&Mono) -> Mono) -> Scalar {
        if self.is_zero() {
            return Scalar::zero();
        }
        let num = self.num.map_monomials(&f);
        let den = expand(&self.den).map_monomials(&f);
        Scalar::from_fraction(self.coeff.clone(), num, &den).expect("monomial maps keep denominators nonzero")
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Scalar) -> bool {
        if self.is_zero() || other.is_zero() {
            return self.is_zero() && other.is_zero();
        }
        let (only_a, only_b, _) = split_common(&self.den, &other.den);
        let lhs = self.num.mul(&expand(&only_b)).scale(&(self.coeff.numer() * other.coeff.denom()));
        let rhs = other.num.mul(&expand(&only_a)).scale(&(other.coeff.numer() * self.coeff.denom()));
        lhs == rhs
    }
}

impl Eq for Scalar {}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

impl From<BigRational> for Scalar {
    fn from(r: BigRational) -> Self {
        Scalar::from_rational(r)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $inner:ident) => {
        impl std::ops::$tr<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                Scalar::$inner(self, rhs)
            }
        }
        impl std::ops::$tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                Scalar::$inner(&self, &rhs)
            }
        }
    };
}

forward_binop!(Add, add, add);
forward_binop!(Sub, sub, sub);
forward_binop!(Mul, mul, mul);

impl std::ops::Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::neg(self)
    }
}

impl std::ops::Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::neg(&self)
    }
}

/// Canonical text: `(N) / (D)` with integer polynomials in descending
/// monomial order and the denominator's leading coefficient positive.
impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (n, d) = self.to_fraction();
        let (n, d) = if d.leading().is_some_and(|(_, c)| c.is_negative()) {
            (n.neg(), d.neg())
        } else {
            (n, d)
        };
        write!(f, "({n}) / ({d})")
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Scalar[{self}]")
    }
}
