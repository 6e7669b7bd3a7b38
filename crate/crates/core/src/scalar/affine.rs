use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_rational::BigRational;

use super::halfint::HalfInt;

/// The additive parameters a bracket argument may depend on.
///
/// `Delta1..Delta3` are evaluation parameters (w = q^δ), `U` and `V` spectral
/// parameters (z = q^u). The declaration order is the canonical order used
/// everywhere (serialization, sign normalization).
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum ParamSymbol {
    Delta1,
    Delta2,
    Delta3,
    U,
    V,
}

impl ParamSymbol {
    pub const ALL: [ParamSymbol; 5] = [
        ParamSymbol::Delta1,
        ParamSymbol::Delta2,
        ParamSymbol::Delta3,
        ParamSymbol::U,
        ParamSymbol::V,
    ];

    pub const fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            ParamSymbol::Delta1 => "d1",
            ParamSymbol::Delta2 => "d2",
            ParamSymbol::Delta3 => "d3",
            ParamSymbol::U => "u",
            ParamSymbol::V => "v",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|p| p.name() == name)
    }
}

pub const NPARAM: usize = 5;

/// `constant + Σ coeff·param` with half-integer constant and coefficients.
///
/// Ordering compares the parameter coefficients first, so pure constants sort
/// before anything parameter-dependent and brackets in the same parameter
/// direction sort by their constant.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AffineExpr {
    coeffs: [HalfInt; NPARAM],
    constant: HalfInt,
}

impl AffineExpr {
    pub const ZERO: AffineExpr = AffineExpr {
        coeffs: [HalfInt::ZERO; NPARAM],
        constant: HalfInt::ZERO,
    };

    pub fn constant(c: impl Into<HalfInt>) -> Self {
        AffineExpr { constant: c.into(), ..Self::ZERO }
    }

    pub fn half_int(c: HalfInt) -> Self {
        Self::constant(c)
    }

    pub fn param(p: ParamSymbol) -> Self {
        let mut e = Self::ZERO;
        e.coeffs[p.index()] = HalfInt::ONE;
        e
    }

    /// δ₁ − δ₂.
    pub fn delta_diff() -> Self {
        Self::param(ParamSymbol::Delta1) - Self::param(ParamSymbol::Delta2)
    }

    pub fn constant_part(&self) -> HalfInt {
        self.constant
    }

    pub fn coeff(&self, p: ParamSymbol) -> HalfInt {
        self.coeffs[p.index()]
    }

    pub fn coeffs(&self) -> &[HalfInt; NPARAM] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        *self == Self::ZERO
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn plus(self, c: impl Into<HalfInt>) -> Self {
        AffineExpr { constant: self.constant + c.into(), ..self }
    }

    pub fn scale(self, k: i64) -> Self {
        AffineExpr {
            coeffs: self.coeffs.map(|c| c * k),
            constant: self.constant * k,
        }
    }

    /// `(t/2)·self`, if that stays on the half-integer lattice.
    pub fn mul_half(self, t: i64) -> Option<Self> {
        let f = |h: HalfInt| {
            let p = h.twice() * t;
            (p % 2 == 0).then(|| HalfInt::from_twice(p / 2))
        };
        let mut coeffs = [HalfInt::ZERO; NPARAM];
        for (o, c) in coeffs.iter_mut().zip(self.coeffs) {
            *o = f(c)?;
        }
        Some(AffineExpr { coeffs, constant: f(self.constant)? })
    }

    /// Splits off a sign so that the first nonzero parameter coefficient
    /// (or, for constants, the constant) is positive. `[−a] = −[a]` lets a
    /// bracket product store only oriented arguments.
    pub fn oriented(self) -> (bool, Self) {
        let lead = self
            .coeffs
            .iter()
            .copied()
            .find(|c| !c.is_zero())
            .unwrap_or(self.constant);
        if lead.twice() < 0 {
            (true, -self)
        } else {
            (false, self)
        }
    }

    /// Substitutes `a ↦ b` and `b ↦ a` for two parameters.
    pub fn swap_params(self, a: ParamSymbol, b: ParamSymbol) -> Self {
        let mut out = self;
        out.coeffs.swap(a.index(), b.index());
        out
    }

    /// Replaces parameter `p` by the affine expression `by`.
    pub fn substitute(self, p: ParamSymbol, by: &AffineExpr) -> Self {
        let k = self.coeffs[p.index()];
        if k.is_zero() {
            return self;
        }
        let mut out = self;
        out.coeffs[p.index()] = HalfInt::ZERO;
        let scaled = |h: HalfInt| {
            let t = h.twice() * k.twice();
            assert!(t % 2 == 0, "substitution leaves the half-integer lattice");
            HalfInt::from_twice(t / 2)
        };
        for (i, c) in by.coeffs.iter().enumerate() {
            out.coeffs[i] = out.coeffs[i] + scaled(*c);
        }
        out.constant = out.constant + scaled(by.constant);
        out
    }

    /// Value at a rational assignment of the parameters.
    pub fn eval(&self, params: &BTreeMap<ParamSymbol, BigRational>) -> Option<BigRational> {
        let mut acc = self.constant.to_rational();
        for p in ParamSymbol::ALL {
            let c = self.coeffs[p.index()];
            if c.is_zero() {
                continue;
            }
            acc += c.to_rational() * params.get(&p)?;
        }
        Some(acc)
    }

    pub fn eval_f64(&self, params: &BTreeMap<ParamSymbol, f64>) -> Option<f64> {
        let mut acc = self.constant.to_f64();
        for p in ParamSymbol::ALL {
            let c = self.coeffs[p.index()];
            if c.is_zero() {
                continue;
            }
            acc += c.to_f64() * params.get(&p)?;
        }
        Some(acc)
    }

    /// Rational value of a constant expression.
    pub fn as_rational(&self) -> Option<BigRational> {
        self.is_constant().then(|| self.constant.to_rational())
    }

    /// Integer value of a constant expression.
    pub fn as_int(&self) -> Option<i64> {
        if self.is_constant() {
            self.constant.to_int()
        } else {
            None
        }
    }
}

impl From<HalfInt> for AffineExpr {
    fn from(c: HalfInt) -> Self {
        AffineExpr::constant(c)
    }
}

impl From<ParamSymbol> for AffineExpr {
    fn from(p: ParamSymbol) -> Self {
        AffineExpr::param(p)
    }
}

impl Add for AffineExpr {
    type Output = AffineExpr;
    fn add(self, rhs: AffineExpr) -> AffineExpr {
        let mut out = self;
        for i in 0..NPARAM {
            out.coeffs[i] = out.coeffs[i] + rhs.coeffs[i];
        }
        out.constant = out.constant + rhs.constant;
        out
    }
}

impl Add<HalfInt> for AffineExpr {
    type Output = AffineExpr;
    fn add(self, rhs: HalfInt) -> AffineExpr {
        self.plus(rhs)
    }
}

impl Sub for AffineExpr {
    type Output = AffineExpr;
    fn sub(self, rhs: AffineExpr) -> AffineExpr {
        self + (-rhs)
    }
}

impl Sub<HalfInt> for AffineExpr {
    type Output = AffineExpr;
    fn sub(self, rhs: HalfInt) -> AffineExpr {
        self.plus(-rhs)
    }
}

impl Neg for AffineExpr {
    type Output = AffineExpr;
    fn neg(self) -> AffineExpr {
        self.scale(-1)
    }
}

fn write_coeff_term(f: &mut fmt::Formatter<'_>, first: bool, c: HalfInt, name: &str) -> fmt::Result {
    let neg = c.twice() < 0;
    let mag = if neg { -c } else { c };
    match (first, neg) {
        (true, true) => write!(f, "-")?,
        (true, false) => {}
        (false, true) => write!(f, "-")?,
        (false, false) => write!(f, "+")?,
    }
    if mag != HalfInt::ONE {
        write!(f, "{mag}*")?;
    }
    write!(f, "{name}")
}

/// Renders with `d` standing for δ₁ − δ₂ whenever the two evaluation
/// parameters only enter through their difference, e.g. `d-3/2`, `u-d1+1/2`.
impl fmt::Display for AffineExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        let c1 = self.coeffs[ParamSymbol::Delta1.index()];
        let c2 = self.coeffs[ParamSymbol::Delta2.index()];
        let mut skip = [false; NPARAM];
        if !c1.is_zero() && c1 == -c2 {
            write_coeff_term(f, first, c1, "d")?;
            first = false;
            skip[0] = true;
            skip[1] = true;
        }
        for p in ParamSymbol::ALL {
            let c = self.coeffs[p.index()];
            if c.is_zero() || skip[p.index()] {
                continue;
            }
            write_coeff_term(f, first, c, p.name())?;
            first = false;
        }
        if first {
            write!(f, "{}", self.constant)
        } else if !self.constant.is_zero() {
            if self.constant.twice() > 0 {
                write!(f, "+{}", self.constant)
            } else {
                write!(f, "-{}", -self.constant)
            }
        } else {
            Ok(())
        }
    }
}

impl fmt::Debug for AffineExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AffineExpr({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ParamSymbol::*;

    fn d() -> AffineExpr {
        AffineExpr::delta_diff()
    }

    #[test]
    fn renders_difference_as_d() {
        assert_eq!(d().to_string(), "d");
        assert_eq!((d() - HalfInt::from_twice(3)).to_string(), "d-3/2");
        assert_eq!((d() + HalfInt::ONE).to_string(), "d+1");
        assert_eq!(AffineExpr::constant(HalfInt::from_int(2)).to_string(), "2");
        let e = AffineExpr::param(U) - AffineExpr::param(Delta1) + HalfInt::HALF;
        assert_eq!(e.to_string(), "-d1+u+1/2");
    }

    #[test]
    fn orientation_makes_leading_coefficient_positive() {
        let e = -(d()) + HalfInt::ONE;
        let (flipped, o) = e.oriented();
        assert!(flipped);
        assert_eq!(o, d() - HalfInt::ONE);
        let (flipped, o) = AffineExpr::constant(HalfInt::from_int(-2)).oriented();
        assert!(flipped);
        assert_eq!(o.as_int(), Some(2));
    }

    #[test]
    fn swap_and_substitute() {
        let e = d() + HalfInt::HALF;
        assert_eq!(e.swap_params(Delta1, Delta2), -d() + HalfInt::HALF);
        let shifted = AffineExpr::param(U).substitute(U, &(AffineExpr::param(V) + HalfInt::ONE));
        assert_eq!(shifted, AffineExpr::param(V) + HalfInt::ONE);
    }

    #[test]
    fn evaluates_at_rational_point() {
        let mut pt = BTreeMap::new();
        pt.insert(Delta1, BigRational::from_integer(3.into()));
        pt.insert(Delta2, BigRational::from_integer(0.into()));
        let e = d() - HalfInt::ONE;
        assert_eq!(e.eval(&pt), Some(BigRational::from_integer(2.into())));
        assert_eq!(AffineExpr::param(U).eval(&pt), None);
    }
}
