//! Numeric evaluation of scalars and bracket products.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};

use super::affine::{AffineExpr, ParamSymbol};
use super::bracket::{q_power, BracketProduct};
use super::field::Scalar;
use super::poly::{Mono, Poly, NGEN, SLOT_Q, SLOT_T, SLOT_V, SLOT_X, SLOT_Y, SLOT_Z};
use crate::error::EvalError;

/// A point at which monomials and brackets have exact rational values.
pub trait Evaluator {
    fn monomial(&self, m: &Mono) -> Result<BigRational, EvalError>;
    fn bracket(&self, a: &AffineExpr) -> Result<BigRational, EvalError>;
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

fn poly_value(p: &Poly, ev: &impl Evaluator) -> Result<BigRational, EvalError> {
    let mut acc = BigRational::zero();
    for (m, c) in p.terms() {
        acc += ev.monomial(m)? * BigRational::from_integer(c.clone());
    }
    Ok(acc)
}

impl Scalar {
    pub fn eval(&self, ev: &impl Evaluator) -> Result<BigRational, EvalError> {
        if self.is_zero() {
            return Ok(BigRational::zero());
        }
        // Atoms can be irrational at a point where their product is not
        // (e.g. q^{1/2} ± 1 at q = 2), so retry on the expanded form.
        let per_atom = || -> Result<BigRational, EvalError> {
            let mut den = BigRational::one();
            for (atom, m) in self.denominator_atoms() {
                den *= poly_value(atom, ev)?.pow(*m as i32);
            }
            Ok(den)
        };
        let den = match per_atom() {
            Err(EvalError::Irrational(_)) => poly_value(&self.to_fraction().1, ev)? / self.coeff().denom(),
            other => other?,
        };
        if den.is_zero() {
            return Err(EvalError::Pole);
        }
        Ok(self.coeff() * poly_value(self.numerator(), ev)? / den)
    }
}

/// Exact `b^(p/s)` when it is rational.
fn rational_power(b: &BigRational, e: &BigRational) -> Result<BigRational, EvalError> {
    let p = e.numer().to_i32().ok_or_else(|| EvalError::Irrational(format!("exponent {e} too large")))?;
    let s = e.denom().to_u32().ok_or_else(|| EvalError::Irrational(format!("exponent {e}")))?;
    let raised = b.clone().pow(p);
    if s == 1 {
        return Ok(raised);
    }
    if raised.is_negative() {
        return Err(EvalError::Irrational(format!("({b})^({e})")));
    }
    let root = |n: &BigInt| -> Option<BigInt> {
        let r = n.nth_root(s);
        (Pow::pow(&r, s) == *n).then_some(r)
    };
    match (root(raised.numer()), root(raised.denom())) {
        (Some(n), Some(d)) => Ok(BigRational::new(n, d)),
        _ => Err(EvalError::Irrational(format!("({b})^({e})"))),
    }
}

/// `q = base^order` together with values of the additive parameters.
///
/// Writing `q` as a power lets `q^δ` stay rational for fractional `δ`:
/// with `order` divisible by every parameter denominator all brackets
/// evaluate exactly.
#[derive(Clone, Debug)]
pub struct QPoint {
    base: BigRational,
    order: u32,
    params: BTreeMap<ParamSymbol, BigRational>,
}

impl QPoint {
    pub fn new(base: BigRational, order: u32) -> Self {
        assert!(base.is_positive() && order > 0, "q must be a positive rational power");
        QPoint { base, order, params: BTreeMap::new() }
    }

    pub fn with(mut self, p: ParamSymbol, v: BigRational) -> Self {
        self.params.insert(p, v);
        self
    }

    pub fn params(&self) -> &BTreeMap<ParamSymbol, BigRational> {
        &self.params
    }

    pub fn q(&self) -> BigRational {
        self.base.clone().pow(self.order as i32)
    }

    fn param(&self, p: ParamSymbol) -> Result<BigRational, EvalError> {
        self.params.get(&p).cloned().ok_or_else(|| EvalError::Missing(p.name().into()))
    }

    /// The exponent `r` with `monomial = q^r`.
    fn log_q(&self, m: &Mono) -> Result<BigRational, EvalError> {
        use ParamSymbol::*;
        let half = |e: i32| BigRational::new(e.into(), 2.into());
        let mut r = half(m[SLOT_Q]);
        type Lazy<'a> = &'a dyn Fn() -> Result<BigRational, EvalError>;
        let slots: [(usize, Lazy); 5] = [
            (SLOT_X, &|| Ok(self.param(Delta1)? - self.param(Delta2)?)),
            (SLOT_Y, &|| Ok(self.param(Delta1)? + self.param(Delta2)?)),
            (SLOT_Z, &|| self.param(U)),
            (SLOT_V, &|| self.param(V)),
            (SLOT_T, &|| Ok(self.param(Delta2)? - self.param(Delta3)?)),
        ];
        for (slot, value) in slots {
            if m[slot] != 0 {
                r += half(m[slot]) * value()?;
            }
        }
        Ok(r)
    }
}

impl Evaluator for QPoint {
    fn monomial(&self, m: &Mono) -> Result<BigRational, EvalError> {
        rational_power(&self.base, &(self.log_q(m)? * rat(self.order as i64)))
    }

    fn bracket(&self, a: &AffineExpr) -> Result<BigRational, EvalError> {
        let q = self.q();
        if q.is_one() {
            return Err(EvalError::Undeformed);
        }
        let m = self.monomial(&q_power(a))?;
        Ok((&m - m.recip()) / (&q - q.recip()))
    }
}

/// Parameter values for the classical realization, where the slots hold
/// `d = δ₁−δ₂`, `s = δ₁+δ₂`, `u`, `v`, `t = δ₂−δ₃` as squares.
#[derive(Clone, Debug, Default)]
pub struct ClassicalPoint {
    params: BTreeMap<ParamSymbol, BigRational>,
}

impl ClassicalPoint {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, p: ParamSymbol, v: BigRational) -> Self {
        self.params.insert(p, v);
        self
    }

    fn get(&self, p: ParamSymbol) -> Result<BigRational, EvalError> {
        self.params.get(&p).cloned().ok_or_else(|| EvalError::Missing(p.name().into()))
    }
}

impl Evaluator for ClassicalPoint {
    fn monomial(&self, m: &Mono) -> Result<BigRational, EvalError> {
        use ParamSymbol::*;
        let mut out = BigRational::one();
        for (slot, &e) in m.iter().enumerate().take(NGEN) {
            if e == 0 {
                continue;
            }
            if e % 2 != 0 || slot == SLOT_Q {
                return Err(EvalError::Irrational(format!("slot {slot} has exponent {e}/2 in a classical scalar")));
            }
            let v = match slot {
                SLOT_X => self.get(Delta1)? - self.get(Delta2)?,
                SLOT_Y => self.get(Delta1)? + self.get(Delta2)?,
                SLOT_Z => self.get(U)?,
                SLOT_V => self.get(V)?,
                _ => self.get(Delta2)? - self.get(Delta3)?,
            };
            if v.is_zero() && e < 0 {
                return Err(EvalError::Pole);
            }
            out *= v.pow(e / 2);
        }
        Ok(out)
    }

    fn bracket(&self, a: &AffineExpr) -> Result<BigRational, EvalError> {
        a.eval(&self.params).ok_or_else(|| EvalError::Missing(a.to_string()))
    }
}

/// Direct values for the generator slots (`q^{1/2}`, `x`, `y`, `z`, `v`, `t`).
#[derive(Clone, Debug)]
pub struct GeneratorPoint {
    values: [BigRational; NGEN],
}

impl GeneratorPoint {
    pub fn new(values: [BigRational; NGEN]) -> Self {
        GeneratorPoint { values }
    }
}

impl Evaluator for GeneratorPoint {
    fn monomial(&self, m: &Mono) -> Result<BigRational, EvalError> {
        let mut out = BigRational::one();
        for (v, &e) in self.values.iter().zip(m) {
            if e == 0 {
                continue;
            }
            if v.is_zero() && e < 0 {
                return Err(EvalError::Pole);
            }
            out *= v.clone().pow(e);
        }
        Ok(out)
    }

    fn bracket(&self, a: &AffineExpr) -> Result<BigRational, EvalError> {
        let mut two = [0; NGEN];
        two[SLOT_Q] = 2;
        let q = self.monomial(&two)?;
        if (&q * &q).is_one() {
            return Err(EvalError::Undeformed);
        }
        let m = self.monomial(&q_power(a))?;
        if m.is_zero() {
            return Err(EvalError::Pole);
        }
        Ok((&m - m.recip()) / (&q - q.recip()))
    }
}

/// Floating-point evaluation at `q` and real parameter values.
#[derive(Clone, Debug)]
pub struct FloatPoint {
    pub q: f64,
    pub params: BTreeMap<ParamSymbol, f64>,
}

impl FloatPoint {
    fn log_q(&self, m: &Mono) -> Result<f64, EvalError> {
        use ParamSymbol::*;
        let get = |p: ParamSymbol| self.params.get(&p).copied().ok_or_else(|| EvalError::Missing(p.name().into()));
        let mut r = m[SLOT_Q] as f64 / 2.0;
        for slot in [SLOT_X, SLOT_Y, SLOT_Z, SLOT_V, SLOT_T] {
            if m[slot] == 0 {
                continue;
            }
            let v = match slot {
                SLOT_X => get(Delta1)? - get(Delta2)?,
                SLOT_Y => get(Delta1)? + get(Delta2)?,
                SLOT_Z => get(U)?,
                SLOT_V => get(V)?,
                _ => get(Delta2)? - get(Delta3)?,
            };
            r += m[slot] as f64 / 2.0 * v;
        }
        Ok(r)
    }

    pub fn monomial(&self, m: &Mono) -> Result<f64, EvalError> {
        Ok(self.q.powf(self.log_q(m)?))
    }

    pub fn bracket(&self, a: &AffineExpr) -> Result<f64, EvalError> {
        if self.q == 1.0 {
            return Err(EvalError::Undeformed);
        }
        let m = self.monomial(&q_power(a))?;
        Ok((m - 1.0 / m) / (self.q - 1.0 / self.q))
    }
}

impl Scalar {
    pub fn eval_f64(&self, pt: &FloatPoint) -> Result<f64, EvalError> {
        let value = |p: &Poly| -> Result<f64, EvalError> {
            p.terms().iter().try_fold(0.0, |acc, (m, c)| Ok(acc + c.to_f64().unwrap_or(f64::NAN) * pt.monomial(m)?))
        };
        if self.is_zero() {
            return Ok(0.0);
        }
        let mut den = 1.0;
        for (atom, m) in self.denominator_atoms() {
            den *= value(atom)?.powi(*m as i32);
        }
        if den == 0.0 {
            return Err(EvalError::Pole);
        }
        Ok(self.coeff().to_f64().unwrap_or(f64::NAN) * value(self.numerator())? / den)
    }
}

impl BracketProduct {
    pub fn eval_f64(&self, pt: &FloatPoint) -> Result<f64, EvalError> {
        let mut out = self.coeff().to_f64().unwrap_or(f64::NAN);
        for (a, e) in self.factors() {
            let v = pt.bracket(a)?;
            if v == 0.0 && e < 0 {
                return Err(EvalError::BracketPole(*a));
            }
            out *= v.powi(e);
        }
        Ok(out)
    }
}
