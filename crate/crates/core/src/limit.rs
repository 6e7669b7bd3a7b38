//! The rational (Yangian) limit `q → 1`, where every q-number `[a]` becomes `a`.

use std::collections::BTreeMap;

use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::Error;
use crate::linalg::OpMatrix;
use crate::rep::EvalRep;
use crate::rmatrix::GaussR;
use crate::scalar::{Bracket, BracketProduct, ClassicalPoint, ParamSymbol, QPoint};
use crate::tensor::TensorRep;
use crate::twist::{Twist, TwistVariant};

/// The same sites with the classical bracket.
pub fn classical(rep: &TensorRep) -> Result<TensorRep, Error> {
    TensorRep::new(rep.sites().iter().map(|s| s.with_bracket(Bracket::Classical)).collect::<Vec<EvalRep>>())
}

pub fn yangian_twist(rep: &TensorRep, v: TwistVariant) -> Result<Twist, Error> {
    Twist::build(&classical(rep)?, v)
}

/// Whether erasing the brackets of the q-twist gives the Yangian twist,
/// entry by entry, for both the twist and its inverse.
pub fn erasure_matches(rep: &TensorRep, v: TwistVariant) -> Result<bool, Error> {
    let q = Twist::build(rep, v)?;
    let y = yangian_twist(rep, v)?;
    let erase = |m: &OpMatrix<BracketProduct>| m.map(BracketProduct::erase);
    Ok(erase(q.forward()) == y.forward_scalar() && erase(q.inverse()) == y.inverse_scalar())
}

/// Deviations of the q-twist inverse and the q-R-matrix from their
/// classical values at one deformation.
#[derive(Clone, Debug, PartialEq)]
pub struct LimitSample {
    /// `q − 1`.
    pub eps: f64,
    pub twist_deviation: f64,
    pub r_deviation: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LimitReport {
    pub samples: Vec<LimitSample>,
    /// Least-squares slope of `log deviation` against `log ε`.
    pub order: f64,
}

impl LimitReport {
    fn deviations(&self) -> impl Iterator<Item = f64> + '_ {
        self.samples.iter().map(|s| s.twist_deviation.max(s.r_deviation))
    }

    /// Deviations shrink monotonically and at least linearly in `ε`.
    pub fn converges(&self) -> bool {
        let devs: Vec<f64> = self.deviations().collect();
        let linear = self.samples.windows(2).zip(devs.windows(2)).all(|(s, d)| {
            d[1] == 0.0 || (d[1] < d[0] && d[1] / d[0] <= 1.01 * s[1].eps / s[0].eps)
        });
        linear && self.order >= 0.99
    }

    pub fn final_deviation(&self) -> f64 {
        self.deviations().last().unwrap_or(f64::NAN)
    }
}

fn max_relative_deviation(q: &OpMatrix<BigRational>, c: &OpMatrix<BigRational>) -> f64 {
    q.entries()
        .zip(c.entries())
        .map(|((_, _, a), (_, _, b))| {
            let scale = if b.abs() > BigRational::one() { b.abs() } else { BigRational::one() };
            ((a - b).abs() / scale).to_f64().unwrap_or(f64::INFINITY)
        })
        .fold(0.0, f64::max)
}

/// Smallest order making `q^{a}` rational for every parameter at `point`
/// (exponents are half-integer combinations of the parameters).
fn order_for(point: &BTreeMap<ParamSymbol, BigRational>) -> u32 {
    let l = point.values().fold(num_bigint::BigInt::one(), |acc, v| acc.lcm(v.denom()));
    (l * 2u32).to_u32().expect("parameter denominators are small")
}

/// Compares the q-twist and q-R-matrix at `q = (1+ε/N)^N ≈ 1+ε` with their
/// classical values, exactly, for each `ε`. `N` is the smallest order that
/// keeps every q-power rational at `point`.
pub fn limit_check(rep: &TensorRep, v: TwistVariant, point: &BTreeMap<ParamSymbol, BigRational>, eps: &[BigRational]) -> Result<LimitReport, Error> {
    let cl_rep = classical(rep)?;
    let cl_point = point.iter().fold(ClassicalPoint::new(), |p, (k, x)| p.with(*k, x.clone()));
    let cl_twist = Twist::build(&cl_rep, v)?.eval_inverse(&cl_point)?;
    let cl_r = GaussR::build(&cl_rep)?.eval(&cl_point)?;
    let q_twist = Twist::build(rep, v)?;
    let q_r = GaussR::build(rep)?;
    let order = order_for(point);
    let mut samples = Vec::new();
    for e in eps {
        let base = BigRational::one() + e / BigRational::from_integer(order.into());
        let pt = point.iter().fold(QPoint::new(base, order), |p, (k, x)| p.with(*k, x.clone()));
        let q = pt.q();
        samples.push(LimitSample {
            eps: (q - BigRational::one()).to_f64().unwrap_or(f64::NAN),
            twist_deviation: max_relative_deviation(&q_twist.eval_inverse(&pt)?, &cl_twist),
            r_deviation: max_relative_deviation(&q_r.eval(&pt)?, &cl_r),
        });
    }
    let pts: Vec<(f64, f64)> = samples
        .iter()
        .map(|s| (s.eps, s.twist_deviation.max(s.r_deviation)))
        .filter(|(e, d)| *e > 0.0 && *d > 0.0)
        .map(|(e, d)| (e.ln(), d.ln()))
        .collect();
    Ok(LimitReport { samples, order: slope(&pts) })
}

fn slope(pts: &[(f64, f64)]) -> f64 {
    if pts.len() < 2 {
        return f64::INFINITY;
    }
    let n = pts.len() as f64;
    let (sx, sy) = pts.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x, b + y));
    let (mx, my) = (sx / n, sy / n);
    let (num, den) = pts.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + (x - mx) * (y - my), b + (x - mx) * (x - mx)));
    if den.is_zero() {
        f64::INFINITY
    } else {
        num / den
    }
}

/// `10^{-k}` for `k` in `range`.
pub fn decades(range: std::ops::RangeInclusive<u32>) -> Vec<BigRational> {
    range.map(|k| BigRational::new(1.into(), num_bigint::BigInt::from(10).pow(k))).collect()
}
