//! Integer Laurent polynomials over the fixed monomial generators.
//!
//! Slots: `q` = q^{1/2}, `x` = q^{(δ₁−δ₂)/2}, `y` = q^{(δ₁+δ₂)/2},
//! `z` = q^{u/2}, `v` = q^{v/2}, `t` = q^{(δ₂−δ₃)/2}. Exponents count
//! half-units, so the textual form writes a slot power as `x^(f/2)`.
//! Classical (q → 1) scalars reuse the same slots as ordinary variables
//! with even exponents only: `x^(2/2)` is δ₁ − δ₂ itself.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub const NGEN: usize = 6;

pub const SLOT_NAMES: [&str; NGEN] = ["q", "x", "y", "z", "v", "t"];

pub const SLOT_Q: usize = 0;
pub const SLOT_X: usize = 1;
pub const SLOT_Y: usize = 2;
pub const SLOT_Z: usize = 3;
pub const SLOT_V: usize = 4;
pub const SLOT_T: usize = 5;

/// Exponent vector; ordered lexicographically with slot `q` most significant.
pub type Mono = [i32; NGEN];

pub const ONE_MONO: Mono = [0; NGEN];

pub fn mono_mul(a: &Mono, b: &Mono) -> Mono {
    let mut out = *a;
    for i in 0..NGEN {
        out[i] += b[i];
    }
    out
}

pub fn mono_inv(a: &Mono) -> Mono {
    a.map(|e| -e)
}

pub fn mono_div(a: &Mono, b: &Mono) -> Mono {
    mono_mul(a, &mono_inv(b))
}

fn mono_ge(a: &Mono, b: &Mono) -> bool {
    a.iter().zip(b).all(|(x, y)| x >= y)
}

/// Sum of `c·m` terms, sorted by ascending monomial, coefficients nonzero.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Poly {
    terms: Vec<(Mono, BigInt)>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        Self::monomial(ONE_MONO, c)
    }

    pub fn monomial(m: Mono, c: BigInt) -> Self {
        if c.is_zero() {
            Self::zero()
        } else {
            Poly { terms: vec![(m, c)] }
        }
    }

    /// Builds from arbitrary (possibly repeated, unsorted) terms.
    pub fn from_terms(terms: impl IntoIterator<Item = (Mono, BigInt)>) -> Self {
        let mut v: Vec<(Mono, BigInt)> = terms.into_iter().collect();
        v.sort_unstable_by_key(|a| a.0);
        let mut out: Vec<(Mono, BigInt)> = Vec::with_capacity(v.len());
        for (m, c) in v {
            match out.last_mut() {
                Some((lm, lc)) if *lm == m => *lc += c,
                _ => out.push((m, c)),
            }
        }
        out.retain(|(_, c)| !c.is_zero());
        Poly { terms: out }
    }

    pub fn terms(&self) -> &[(Mono, BigInt)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0 == ONE_MONO && self.terms[0].1.is_one()
    }

    /// The single term of a monomial.
    pub fn as_monomial(&self) -> Option<(&Mono, &BigInt)> {
        match self.terms.as_slice() {
            [(m, c)] => Some((m, c)),
            _ => None,
        }
    }

    pub fn as_constant(&self) -> Option<&BigInt> {
        match self.terms.as_slice() {
            [(m, c)] if *m == ONE_MONO => Some(c),
            _ => None,
        }
    }

    /// Largest term in the lexicographic order.
    pub fn leading(&self) -> Option<&(Mono, BigInt)> {
        self.terms.last()
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.terms, &other.terms);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j].clone());
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = &a[i].1 + &b[j].1;
                    if !c.is_zero() {
                        out.push((a[i].0, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Poly { terms: out }
    }

    pub fn neg(&self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect(),
        }
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: &BigInt) -> Poly {
        if k.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, c)| (*m, c * k)).collect(),
        }
    }

    pub fn mul_mono(&self, m: &Mono) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(e, c)| (mono_mul(e, m), c.clone())).collect(),
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        if let Some(k) = other.as_constant() {
            return self.scale(k);
        }
        if let Some(k) = self.as_constant() {
            return other.scale(k);
        }
        let (small, large) = if self.len() <= other.len() { (self, other) } else { (other, self) };
        if let Some((m, c)) = small.as_monomial() {
            return large.mul_mono(m).scale(c);
        }
        let mut acc: BTreeMap<Mono, BigInt> = BTreeMap::new();
        for (ma, ca) in &small.terms {
            for (mb, cb) in &large.terms {
                let m = mono_mul(ma, mb);
                let prod = ca * cb;
                match acc.entry(m) {
                    std::collections::btree_map::Entry::Vacant(v) => {
                        v.insert(prod);
                    }
                    std::collections::btree_map::Entry::Occupied(mut o) => {
                        *o.get_mut() += prod;
                        if o.get().is_zero() {
                            o.remove();
                        }
                    }
                }
            }
        }
        Poly { terms: acc.into_iter().collect() }
    }

    pub fn pow(&self, n: u32) -> Poly {
        let mut out = Poly::one();
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                out = out.mul(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base);
            }
        }
        out
    }

    /// Gcd of the coefficients, signed like the leading coefficient.
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for (_, c) in &self.terms {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        match self.leading() {
            Some((_, c)) if c.is_negative() => -g,
            _ => g,
        }
    }

    /// Divides every coefficient by `k`, which must divide all of them.
    pub fn div_exact_int(&self, k: &BigInt) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (*m, c / k)).collect(),
        }
    }

    /// Componentwise minimum exponent.
    pub fn min_exponents(&self) -> Mono {
        let mut out = match self.terms.first() {
            Some((m, _)) => *m,
            None => return ONE_MONO,
        };
        for (m, _) in &self.terms {
            for i in 0..NGEN {
                out[i] = out[i].min(m[i]);
            }
        }
        out
    }

    pub fn max_exponents(&self) -> Mono {
        let mut out = match self.terms.first() {
            Some((m, _)) => *m,
            None => return ONE_MONO,
        };
        for (m, _) in &self.terms {
            for i in 0..NGEN {
                out[i] = out[i].max(m[i]);
            }
        }
        out
    }

    /// Exact quotient `self / divisor` in the Laurent ring, if it exists.
    pub fn div_exact(&self, divisor: &Poly) -> Option<Poly> {
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        if self.is_zero() {
            return Some(Poly::zero());
        }
        if let Some((m, c)) = divisor.as_monomial() {
            let (q, r) = self.terms.iter().fold((Vec::new(), false), |(mut acc, bad), (e, k)| {
                let (qk, rk) = k.div_rem(c);
                acc.push((mono_div(e, m), qk));
                (acc, bad || !rk.is_zero())
            });
            return (!r).then(|| Poly::from_terms(q));
        }
        let p_shift = self.min_exponents();
        let d_shift = divisor.min_exponents();
        let p = self.mul_mono(&mono_inv(&p_shift));
        let d = divisor.mul_mono(&mono_inv(&d_shift));
        // Degree bound: a divisor cannot have larger degree in any slot.
        let (pmax, dmax) = (p.max_exponents(), d.max_exponents());
        if !mono_ge(&pmax, &dmax) {
            return None;
        }
        let (dlm, dlc) = d.leading().cloned().expect("nonzero divisor");
        let mut rem: BTreeMap<Mono, BigInt> = p.terms.into_iter().collect();
        let mut quot = Vec::new();
        while let Some((lm, lc)) = rem.pop_last() {
            if !mono_ge(&lm, &dlm) {
                return None;
            }
            let (qc, r) = lc.div_rem(&dlc);
            if !r.is_zero() {
                return None;
            }
            let qm = mono_div(&lm, &dlm);
            for (m, c) in &d.terms {
                if *m == dlm {
                    continue;
                }
                let key = mono_mul(m, &qm);
                let sub = c * &qc;
                let entry = rem.entry(key).or_insert_with(BigInt::zero);
                *entry -= sub;
                if entry.is_zero() {
                    rem.remove(&key);
                }
            }
            quot.push((qm, qc));
        }
        let shift = mono_div(&p_shift, &d_shift);
        Some(Poly::from_terms(quot.into_iter().map(|(m, c)| (mono_mul(&m, &shift), c))))
    }

    /// If every exponent vector lies on one line `e₀ + t·dir`, returns the
    /// primitive direction (first nonzero entry positive), the base point
    /// with the smallest `t`, and the dense coefficient list in `t`.
    pub fn as_univariate(&self) -> Option<(Mono, Mono, Vec<BigInt>)> {
        let (base, _) = self.terms.first()?;
        let mut dir: Option<Mono> = None;
        for (m, _) in &self.terms[1..] {
            let diff = mono_div(m, base);
            let g = diff.iter().fold(0i32, |g, &e| g.gcd(&e));
            let mut prim = diff.map(|e| e / g);
            if prim.iter().find(|&&e| e != 0).is_some_and(|&e| e < 0) {
                prim = mono_inv(&prim);
            }
            match dir {
                None => dir = Some(prim),
                Some(d) if d == prim => {}
                Some(_) => return None,
            }
        }
        let dir = match dir {
            Some(d) => d,
            None => return Some((ONE_MONO, *base, vec![self.terms[0].1.clone()])),
        };
        let lead = dir.iter().position(|&e| e != 0).expect("nonzero direction");
        let steps: Vec<i32> = self.terms.iter().map(|(m, _)| (m[lead] - base[lead]) / dir[lead]).collect();
        let tmin = *steps.iter().min().unwrap();
        let tmax = *steps.iter().max().unwrap();
        let mut coeffs = vec![BigInt::zero(); (tmax - tmin + 1) as usize];
        for ((_, c), t) in self.terms.iter().zip(&steps) {
            coeffs[(t - tmin) as usize] = c.clone();
        }
        let start = mono_mul(base, &dir.map(|e| e * tmin));
        Some((dir, start, coeffs))
    }

    /// Rebuilds `base · Σ c_t · dir^t` from a dense coefficient list.
    pub fn from_univariate(dir: &Mono, base: &Mono, coeffs: &[BigInt]) -> Poly {
        Poly::from_terms(coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(t, c)| {
            let step = dir.map(|e| e * t as i32);
            (mono_mul(base, &step), c.clone())
        }))
    }

    pub fn map_monomials(&self, f: impl Fn(&Mono) -> Mono) -> Poly {
        Poly::from_terms(self.terms.iter().map(|(m, c)| (f(m), c.clone())))
    }
}

pub(crate) fn write_mono(f: &mut impl fmt::Write, m: &Mono) -> fmt::Result {
    let mut first = true;
    for (i, e) in m.iter().enumerate() {
        if *e == 0 {
            continue;
        }
        if !first {
            write!(f, " * ")?;
        }
        write!(f, "{}^({}/2)", SLOT_NAMES[i], e)?;
        first = false;
    }
    Ok(())
}

/// Canonical form: terms in descending monomial order, `c * q^(e/2) * ...`.
impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            match (k == 0, neg) {
                (true, true) => write!(f, "-")?,
                (true, false) => {}
                (false, true) => write!(f, " - ")?,
                (false, false) => write!(f, " + ")?,
            }
            write!(f, "{}", c.abs())?;
            if *m != ONE_MONO {
                write!(f, " * ")?;
                write_mono(f, m)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

/// Dense univariate integer polynomials (index = degree), used to split
/// binomials into cyclotomic factors.
pub(crate) mod dense {
    use num_bigint::BigInt;
    use num_integer::Integer;
    use num_traits::{One, Zero};

    pub fn trim(mut p: Vec<BigInt>) -> Vec<BigInt> {
        while p.len() > 1 && p.last().is_some_and(|c| c.is_zero()) {
            p.pop();
        }
        p
    }

    /// Exact division over ℤ; `None` if not divisible.
    pub fn div_exact(p: &[BigInt], d: &[BigInt]) -> Option<Vec<BigInt>> {
        let d = trim(d.to_vec());
        let mut r = trim(p.to_vec());
        if d.len() > r.len() {
            return if r.iter().all(|c| c.is_zero()) { Some(vec![BigInt::zero()]) } else { None };
        }
        let dl = d.last().unwrap().clone();
        let mut q = vec![BigInt::zero(); r.len() - d.len() + 1];
        for i in (0..q.len()).rev() {
            let top = r[i + d.len() - 1].clone();
            if top.is_zero() {
                continue;
            }
            let (qc, rem) = top.div_rem(&dl);
            if !rem.is_zero() {
                return None;
            }
            for (j, dc) in d.iter().enumerate() {
                r[i + j] -= &qc * dc;
            }
            q[i] = qc;
        }
        r.iter().all(|c| c.is_zero()).then(|| trim(q))
    }

    fn mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        out
    }

    /// The n-th cyclotomic polynomial, via Φₙ = Π_{d|n} (x^d − 1)^{μ(n/d)}.
    pub fn cyclotomic(n: usize) -> Vec<BigInt> {
        assert!(n >= 1);
        let mut num = vec![BigInt::one()];
        let mut den = vec![BigInt::one()];
        for d in 1..=n {
            if !n.is_multiple_of(d) {
                continue;
            }
            let mut b = vec![BigInt::zero(); d + 1];
            b[0] = -BigInt::one();
            b[d] = BigInt::one();
            match mobius(n / d) {
                1 => num = mul(&num, &b),
                -1 => den = mul(&den, &b),
                _ => {}
            }
        }
        div_exact(&num, &den).expect("Möbius product is a polynomial")
    }

    fn mobius(mut n: usize) -> i32 {
        let mut sign = 1;
        let mut p = 2;
        while p * p <= n {
            if n.is_multiple_of(p) {
                n /= p;
                if n.is_multiple_of(p) {
                    return 0;
                }
                sign = -sign;
            }
            p += 1;
        }
        if n > 1 {
            sign = -sign;
        }
        sign
    }

    /// Euler's totient, the degree of the n-th cyclotomic polynomial.
    pub fn totient(n: usize) -> usize {
        (1..=n).filter(|k| k.gcd(&n) == 1).count()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(e: i32) -> Mono {
        let mut m = ONE_MONO;
        m[SLOT_X] = e;
        m
    }

    fn q(e: i32) -> Mono {
        let mut m = ONE_MONO;
        m[SLOT_Q] = e;
        m
    }

    fn p(terms: &[(Mono, i64)]) -> Poly {
        Poly::from_terms(terms.iter().map(|(m, c)| (*m, BigInt::from(*c))))
    }

    #[test]
    fn laurent_exact_division() {
        // (x^2 - x^-2) / (x - x^-1) = x + x^-1
        let num = p(&[(x(2), 1), (x(-2), -1)]);
        let den = p(&[(x(1), 1), (x(-1), -1)]);
        assert_eq!(num.div_exact(&den), Some(p(&[(x(1), 1), (x(-1), 1)])));
        // not divisible
        let den2 = p(&[(x(1), 1), (q(1), 1)]);
        assert_eq!(num.div_exact(&den2), None);
    }

    #[test]
    fn mixed_variable_division() {
        let a = p(&[(x(1), 1), (q(1), -1)]);
        let b = p(&[(x(2), 3), (q(-1), 1), (ONE_MONO, 5)]);
        let prod = a.mul(&b);
        assert_eq!(prod.div_exact(&a), Some(b.clone()));
        assert_eq!(prod.div_exact(&b), Some(a));
    }

    #[test]
    fn cyclotomic_polynomials() {
        let phi = |n| dense::cyclotomic(n).iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",");
        assert_eq!(phi(1), "-1,1");
        assert_eq!(phi(2), "1,1");
        assert_eq!(phi(4), "1,0,1");
        assert_eq!(phi(6), "1,-1,1");
        assert_eq!(dense::totient(12), 4);
    }

    #[test]
    fn univariate_detection() {
        let poly = p(&[(mono_mul(&x(4), &q(-2)), 1), (ONE_MONO, -1)]);
        let (dir, base, coeffs) = poly.as_univariate().unwrap();
        assert_eq!(dir, [1, -2, 0, 0, 0, 0]);
        assert_eq!(base, mono_mul(&q(-2), &x(4)));
        assert_eq!(coeffs.len(), 3);
        assert_eq!(Poly::from_univariate(&dir, &base, &coeffs), poly);
        let two_dirs = p(&[(x(1), 1), (q(1), 1), (ONE_MONO, 1)]);
        assert!(two_dirs.as_univariate().is_none());
    }

    #[test]
    fn display_is_canonical() {
        let poly = p(&[(x(2), 1), (x(-2), -1), (q(1), 3)]);
        assert_eq!(poly.to_string(), "3 * q^(1/2) + 1 * x^(2/2) - 1 * x^(-2/2)");
    }
}
