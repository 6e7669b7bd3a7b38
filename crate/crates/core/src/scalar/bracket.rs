use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::affine::{AffineExpr, ParamSymbol};
use super::eval::Evaluator;
use super::field::Scalar;
use super::halfint::HalfInt;
use super::poly::{Mono, Poly, ONE_MONO, SLOT_Q, SLOT_T, SLOT_V, SLOT_X, SLOT_Y, SLOT_Z};
use crate::error::{Error, EvalError};

/// How `[a]` is realized as a scalar.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Bracket {
    /// `(q^a − q^{−a}) / (q − q^{−1})`.
    Quantum,
    /// `[a] = a`; the rational degeneration.
    Classical,
}

/// Per-slot exponents (half-units) of `q^a`.
pub fn q_power(a: &AffineExpr) -> Mono {
    let m = |p: ParamSymbol| a.coeff(p).twice();
    let (m1, m2, m3) = (m(ParamSymbol::Delta1), m(ParamSymbol::Delta2), m(ParamSymbol::Delta3));
    let half = |t: i64| -> i32 {
        assert!(t % 2 == 0, "q^({a}) is off the generator lattice");
        (t / 2) as i32
    };
    let mut e = ONE_MONO;
    e[SLOT_Q] = a.constant_part().twice() as i32;
    e[SLOT_X] = half(m1 - m2 - m3);
    e[SLOT_Y] = half(m1 + m2 + m3);
    e[SLOT_Z] = m(ParamSymbol::U) as i32;
    e[SLOT_V] = m(ParamSymbol::V) as i32;
    e[SLOT_T] = -m3 as i32;
    e
}

/// Twice the coefficients of `a` on the classical coordinates
/// `(1, d, s, u, v, t)` with `d = δ₁−δ₂`, `s = δ₁+δ₂`, `t = δ₂−δ₃`.
pub(crate) fn classical_coords(a: &AffineExpr) -> [BigRational; 6] {
    let e = q_power(a);
    let r = |n: i64| BigRational::new(n.into(), 2.into());
    let mut out: [BigRational; 6] = Default::default();
    out[SLOT_Q] = r(e[SLOT_Q] as i64);
    for s in [SLOT_X, SLOT_Y, SLOT_Z, SLOT_V, SLOT_T] {
        out[s] = r(e[s] as i64);
    }
    out
}

fn slot_power(slot: usize, e: i32) -> Mono {
    let mut m = ONE_MONO;
    m[slot] = e;
    m
}

/// `[a]` in the chosen realization.
pub fn bracket(b: Bracket, a: &AffineExpr) -> Scalar {
    match b {
        Bracket::Quantum => {
            if a.is_zero() {
                return Scalar::zero();
            }
            // [a] = Q²·(M − M⁻¹)/(Q⁴ − 1) with M = q^a, Q = q^{1/2}.
            let m = q_power(a);
            let mut hi = m;
            hi[SLOT_Q] += 2;
            let mut lo = super::poly::mono_inv(&m);
            lo[SLOT_Q] += 2;
            let num = Poly::from_terms([(hi, BigInt::one()), (lo, -BigInt::one())]);
            let den = Poly::from_terms([(slot_power(SLOT_Q, 4), BigInt::one()), (ONE_MONO, -BigInt::one())]);
            Scalar::from_fraction(BigRational::one(), num, &den).expect("nonzero denominator")
        }
        Bracket::Classical => {
            let c = classical_coords(a);
            let terms = c.iter().enumerate().map(|(slot, v)| {
                let mono = if slot == SLOT_Q { ONE_MONO } else { slot_power(slot, 2) };
                (mono, (v * BigRational::from_integer(2.into())).to_integer())
            });
            Scalar::from_poly(Poly::from_terms(terms)).scale(&BigRational::new(1.into(), 2.into()))
        }
    }
}

/// `[n]! = [n][n−1]⋯[1]`.
pub fn q_factorial(b: Bracket, n: u32) -> Scalar {
    BracketProduct::factorial(n).to_scalar(b)
}

/// `Γ(top)/Γ(bottom)` expanded through `Γ(t+1) = [t]·Γ(t)`.
pub fn qgamma_ratio(b: Bracket, top: &AffineExpr, bottom: &AffineExpr) -> Result<Scalar, Error> {
    Ok(BracketProduct::gamma_ratio(top, bottom)?.to_scalar(b))
}

/// `coeff · Π [aᵢ]^{eᵢ}` kept in factored form.
///
/// Arguments are stored oriented (see [`AffineExpr::oriented`]) so that
/// `[a]` and `[−a]` collapse into one factor. Brackets of nonzero constants
/// are nonzero for generic `q` and in the classical realization, so a zero
/// product only arises from an explicit `[0]` or a zero coefficient.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BracketProduct {
    coeff: BigRational,
    factors: BTreeMap<AffineExpr, i32>,
}

impl BracketProduct {
    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn zero() -> Self {
        Self::constant(BigRational::zero())
    }

    pub fn constant(c: BigRational) -> Self {
        BracketProduct { coeff: c, factors: BTreeMap::new() }
    }

    pub fn from_int(n: i64) -> Self {
        Self::constant(BigRational::from_integer(n.into()))
    }

    pub fn bracket(a: AffineExpr) -> Self {
        Self::one().times_bracket(a, 1).expect("positive power never fails")
    }

    /// Multiplies by `[a]^e`; a negative power of `[0]` is a pole.
    pub fn times_bracket(mut self, a: AffineExpr, e: i32) -> Result<Self, EvalError> {
        if e == 0 || self.is_zero() {
            return Ok(self);
        }
        if a.is_zero() {
            if e < 0 {
                return Err(EvalError::BracketPole(a));
            }
            return Ok(Self::zero());
        }
        let (flip, a) = a.oriented();
        if flip && e % 2 != 0 {
            self.coeff = -self.coeff;
        }
        if a == AffineExpr::constant(HalfInt::ONE) {
            return Ok(self);
        }
        let slot = self.factors.entry(a).or_insert(0);
        *slot += e;
        if *slot == 0 {
            self.factors.remove(&a);
        }
        Ok(self)
    }

    pub fn factorial(n: u32) -> Self {
        (2..=n as i64).fold(Self::one(), |acc, j| {
            acc.times_bracket(AffineExpr::constant(HalfInt::from_int(j)), 1).unwrap()
        })
    }

    /// `Γ(top)/Γ(bottom)` for `top − bottom ∈ ℤ`.
    pub fn gamma_ratio(top: &AffineExpr, bottom: &AffineExpr) -> Result<Self, Error> {
        let m = (*top - *bottom).as_int().ok_or(Error::NonIntegerShift { top: *top, bottom: *bottom })?;
        let mut out = Self::one();
        if m >= 0 {
            for j in 0..m {
                out = out.times_bracket(bottom.plus(HalfInt::from_int(j)), 1)?;
            }
        } else {
            for j in 1..=-m {
                out = out.times_bracket(bottom.plus(HalfInt::from_int(-j)), -1)?;
            }
        }
        Ok(out)
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.coeff.is_one() && self.factors.is_empty()
    }

    pub fn coeff(&self) -> &BigRational {
        &self.coeff
    }

    /// Oriented arguments with their nonzero exponents, ascending.
    pub fn factors(&self) -> impl Iterator<Item = (&AffineExpr, i32)> {
        self.factors.iter().map(|(a, e)| (a, *e))
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        if r.is_zero() {
            return Self::zero();
        }
        BracketProduct { coeff: &self.coeff * r, factors: self.factors.clone() }
    }

    pub fn neg(&self) -> Self {
        BracketProduct { coeff: -&self.coeff, factors: self.factors.clone() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = BracketProduct { coeff: &self.coeff * &other.coeff, factors: self.factors.clone() };
        for (a, e) in &other.factors {
            let slot = out.factors.entry(*a).or_insert(0);
            *slot += e;
            if *slot == 0 {
                out.factors.remove(a);
            }
        }
        out
    }

    pub fn inv(&self) -> Result<Self, EvalError> {
        if self.is_zero() {
            return Err(EvalError::BracketPole(AffineExpr::ZERO));
        }
        Ok(BracketProduct {
            coeff: BigRational::one() / &self.coeff,
            factors: self.factors.iter().map(|(a, e)| (*a, -e)).collect(),
        })
    }

    pub fn div(&self, other: &Self) -> Result<Self, EvalError> {
        Ok(self.mul(&other.inv()?))
    }

    /// Applies an affine substitution to every argument.
    pub fn map_args(&self, f: impl Fn(&AffineExpr) -> AffineExpr) -> Result<Self, EvalError> {
        let mut out = Self::constant(self.coeff.clone());
        for (a, e) in &self.factors {
            out = out.times_bracket(f(a), *e)?;
        }
        Ok(out)
    }

    pub fn to_scalar(&self, b: Bracket) -> Scalar {
        if self.is_zero() {
            return Scalar::zero();
        }
        let mut out = Scalar::from_rational(self.coeff.clone());
        for (a, e) in &self.factors {
            let s = bracket(b, a);
            let s = if *e < 0 { s.inv().expect("oriented nonzero bracket") } else { s };
            for _ in 0..e.unsigned_abs() {
                out = out.mul(&s);
            }
        }
        out
    }

    /// Exact value at a point; a vanishing denominator bracket is reported
    /// by its argument.
    pub fn eval(&self, ev: &impl Evaluator) -> Result<BigRational, EvalError> {
        let mut out = self.coeff.clone();
        if out.is_zero() {
            return Ok(out);
        }
        for (a, e) in &self.factors {
            let v = ev.bracket(a)?;
            if v.is_zero() {
                if *e < 0 {
                    return Err(EvalError::BracketPole(*a));
                }
                return Ok(BigRational::zero());
            }
            let v = if *e < 0 { v.recip() } else { v };
            for _ in 0..e.unsigned_abs() {
                out *= &v;
            }
        }
        Ok(out)
    }

    /// The bracket-erased value: every `[a]` replaced by `a`.
    pub fn erase(&self) -> Scalar {
        self.to_scalar(Bracket::Classical)
    }
}

impl fmt::Display for BracketProduct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let sign = if self.coeff.is_negative() { "-" } else { "" };
        let mag = self.coeff.abs();
        let mut up: Vec<String> = Vec::new();
        let mut down: Vec<String> = Vec::new();
        if !mag.numer().is_one() {
            up.push(mag.numer().to_string());
        }
        if !mag.denom().is_one() {
            down.push(mag.denom().to_string());
        }
        for (a, e) in &self.factors {
            let s = format!("[{a}]");
            let list = if *e > 0 { &mut up } else { &mut down };
            for _ in 0..e.unsigned_abs() {
                list.push(s.clone());
            }
        }
        let top = if up.is_empty() { "1".to_string() } else { up.join("*") };
        match down.len() {
            0 => write!(f, "{sign}{top}"),
            1 => write!(f, "{sign}{top}/{}", down[0]),
            _ => write!(f, "{sign}{top}/({})", down.join("*")),
        }
    }
}

impl fmt::Debug for BracketProduct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BracketProduct({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::eval::QPoint;
    use ParamSymbol::*;

    fn c(n: i64) -> AffineExpr {
        AffineExpr::constant(HalfInt::from_int(n))
    }

    fn d() -> AffineExpr {
        AffineExpr::delta_diff()
    }

    fn rat(n: i64, m: i64) -> BigRational {
        BigRational::new(n.into(), m.into())
    }

    fn q2(delta_diff: i64) -> QPoint {
        QPoint::new(rat(2, 1), 1).with(Delta1, rat(delta_diff, 1)).with(Delta2, rat(0, 1))
    }

    #[test]
    fn basic_values() {
        assert!(bracket(Bracket::Quantum, &c(0)).is_zero());
        assert!(bracket(Bracket::Quantum, &c(1)).is_one());
        let two = bracket(Bracket::Quantum, &c(2));
        let q = Scalar::monomial(slot_power(SLOT_Q, 2));
        let qi = Scalar::monomial(slot_power(SLOT_Q, -2));
        assert_eq!(two, &q + &qi);
        assert_eq!(bracket(Bracket::Classical, &c(2)), Scalar::from_int(2));
        assert_eq!(bracket(Bracket::Quantum, &-d()), bracket(Bracket::Quantum, &d()).neg());
    }

    #[test]
    fn numeric_values_at_q_two() {
        let v = BracketProduct::bracket(d().plus(HalfInt::from_int(-1))).eval(&q2(3)).unwrap();
        assert_eq!(v, rat(5, 2));
        assert_eq!(BracketProduct::factorial(3).eval(&q2(0)).unwrap(), rat(105, 8));
        assert_eq!(q_factorial(Bracket::Quantum, 0), Scalar::one());
        assert_eq!(q_factorial(Bracket::Quantum, 2), bracket(Bracket::Quantum, &c(2)));
        let t = AffineExpr::param(U);
        let g = BracketProduct::gamma_ratio(&t.plus(HalfInt::from_int(2)), &t).unwrap();
        let at = QPoint::new(rat(2, 1), 1).with(U, rat(1, 1));
        assert_eq!(g.eval(&at).unwrap(), rat(5, 2));
    }

    #[test]
    fn gamma_ratio_rules() {
        let t = d();
        let up = BracketProduct::gamma_ratio(&t.plus(HalfInt::ONE), &t).unwrap();
        assert_eq!(up, BracketProduct::bracket(t));
        assert!(BracketProduct::gamma_ratio(&t, &t).unwrap().is_one());
        let down = BracketProduct::gamma_ratio(&t.plus(HalfInt::from_int(-2)), &t).unwrap();
        assert_eq!(down.mul(&BracketProduct::gamma_ratio(&t, &t.plus(HalfInt::from_int(-2))).unwrap()), BracketProduct::one());
        assert!(BracketProduct::gamma_ratio(&t.plus(HalfInt::HALF), &t).is_err());
        assert!(matches!(qgamma_ratio(Bracket::Quantum, &d(), &AffineExpr::param(U)), Err(Error::NonIntegerShift { .. })));
    }

    #[test]
    fn pole_is_named() {
        let s = BracketProduct::one().times_bracket(d().plus(HalfInt::from_int(-1)), -1).unwrap();
        assert_eq!(s.eval(&q2(1)), Err(EvalError::BracketPole(d().plus(HalfInt::from_int(-1)))));
        let ratio = BracketProduct::bracket(d()).div(&BracketProduct::bracket(d().plus(HalfInt::from_int(-1)))).unwrap();
        assert_eq!(ratio.eval(&q2(2)).unwrap(), rat(5, 2));
    }

    #[test]
    fn rendering() {
        let m1 = |k: i64| d().plus(HalfInt::from_twice(-k));
        let p = BracketProduct::bracket(d()).times_bracket(m1(2), -1).unwrap();
        assert_eq!(p.to_string(), "[d]/[d-1]");
        let p = BracketProduct::bracket(c(2)).neg().times_bracket(m1(5), -1).unwrap();
        assert_eq!(p.to_string(), "-[2]/[d-5/2]");
        let p = BracketProduct::bracket(d())
            .times_bracket(d().plus(HalfInt::ONE), 1)
            .and_then(|p| p.times_bracket(m1(4), -1))
            .and_then(|p| p.times_bracket(-m1(2), -1))
            .unwrap();
        assert_eq!(p.to_string(), "-[d]*[d+1]/([d-2]*[d-1])");
        assert_eq!(BracketProduct::one().times_bracket(c(2), -1).unwrap().to_string(), "1/[2]");
    }

    #[test]
    fn scalar_conversion_matches_evaluation() {
        let p = BracketProduct::bracket(d().plus(HalfInt::HALF)).times_bracket(c(3), -2).unwrap();
        let s = p.to_scalar(Bracket::Quantum);
        let pt = QPoint::new(rat(3, 1), 2).with(Delta1, rat(5, 2)).with(Delta2, rat(1, 2));
        assert_eq!(s.eval(&pt).unwrap(), p.eval(&pt).unwrap());
        let e = p.erase();
        assert_eq!(e, bracket(Bracket::Classical, &d().plus(HalfInt::HALF)).scale(&rat(1, 9)));
    }
}
