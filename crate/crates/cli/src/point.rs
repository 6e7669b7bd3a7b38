//! Numeric parameter assignments.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed};

use qtwist::scalar::{ClassicalPoint, QPoint};
use qtwist::ParamSymbol;

use crate::CliError;

pub fn parse_rational(s: &str) -> Result<BigRational, CliError> {
    let bad = || CliError::Config(format!("not a rational number: {s:?}"));
    let t = s.trim();
    if let Some((n, d)) = t.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d == BigInt::from(0) {
            return Err(bad());
        }
        return Ok(BigRational::new(n, d));
    }
    if let Some((int, frac)) = t.split_once('.') {
        let neg = int.starts_with('-');
        let digits = format!("{}{frac}", int.trim_start_matches(['-', '+']));
        if digits.is_empty() || !digits.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let n: BigInt = digits.parse().map_err(|_| bad())?;
        let r = BigRational::new(n, BigInt::from(10).pow(frac.len() as u32));
        return Ok(if neg { -r } else { r });
    }
    t.parse::<BigInt>().map(BigRational::from_integer).map_err(|_| bad())
}

/// Values of the evaluation parameters, with `q` given either directly or
/// as `base^order`.
#[derive(Clone, Debug)]
pub struct Assignment {
    pub q: Option<BigRational>,
    pub base: Option<(BigRational, u32)>,
    pub params: Vec<(ParamSymbol, BigRational)>,
}

fn exact_root(x: &BigRational, n: u32) -> Option<BigRational> {
    let root = |v: &BigInt| {
        let r = v.nth_root(n);
        (r.pow(n) == *v).then_some(r)
    };
    Some(BigRational::new(root(x.numer())?, root(x.denom())?))
}

impl Assignment {
    /// Smallest order keeping every power of `q` rational.
    fn natural_order(&self) -> u32 {
        let l = self.params.iter().fold(BigInt::one(), |acc, (_, v)| acc.lcm(v.denom()));
        u32::try_from(l * 2u32).unwrap_or(u32::MAX)
    }

    pub fn quantum(&self) -> Result<QPoint, CliError> {
        let (base, order) = match (&self.q, &self.base) {
            (_, Some((b, n))) => (b.clone(), *n),
            (Some(q), None) => {
                let n = self.natural_order();
                let b = exact_root(q, n).ok_or_else(|| {
                    CliError::Config(format!("q = {q} has no rational {n}-th root; give --base and --order with q = base^order instead"))
                })?;
                (b, n)
            }
            (None, None) => return Err(CliError::Config("numeric mode needs --q (or --base with --order)".into())),
        };
        if !base.is_positive() || base.is_one() || order == 0 {
            return Err(CliError::Config("q must be a positive rational other than 1".into()));
        }
        Ok(self.params.iter().fold(QPoint::new(base, order), |p, (k, v)| p.with(*k, v.clone())))
    }

    pub fn classical(&self) -> ClassicalPoint {
        self.params.iter().fold(ClassicalPoint::new(), |p, (k, v)| p.with(*k, v.clone()))
    }

    pub fn get(&self, p: ParamSymbol) -> Option<&BigRational> {
        self.params.iter().find(|(k, _)| *k == p).map(|(_, v)| v)
    }
}
