//! Factorizing twists on `V_{λ₁}(w₁) ⊗ V_{λ₂}(w₂)`.
//!
//! Each twist is `Q·(triangular part)`, where the diagonal `Q` is a ratio of
//! q-Gamma functions of the weights. Matrix entries are kept as
//! [`BracketProduct`]s, which makes both the printed tables and the pole
//! structure at numerical points exact.

use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::Pow;

use crate::error::{Error, EvalError};
use crate::linalg::OpMatrix;
use crate::rep::{critical_shift, EvalRep, Gen};
use crate::scalar::{AffineExpr, BracketProduct, Evaluator, HalfInt, Scalar};
use crate::tensor::{factored_zeros, TensorRep};

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum TwistVariant {
    F,
    FHat,
    FTilde,
    FHatTilde,
}

impl TwistVariant {
    pub const ALL: [TwistVariant; 4] = [TwistVariant::F, TwistVariant::FHat, TwistVariant::FTilde, TwistVariant::FHatTilde];

    pub fn name(self) -> &'static str {
        match self {
            TwistVariant::F => "F",
            TwistVariant::FHat => "Fhat",
            TwistVariant::FTilde => "Ftilde",
            TwistVariant::FHatTilde => "Fhattilde",
        }
    }

    /// Tilde twists flip `d → −d` and are upper triangular.
    pub fn is_tilde(self) -> bool {
        matches!(self, TwistVariant::FTilde | TwistVariant::FHatTilde)
    }

    pub fn is_hat(self) -> bool {
        matches!(self, TwistVariant::FHat | TwistVariant::FHatTilde)
    }

    /// The generator whose twisted coproduct is primitive.
    pub fn diagonal_generator(self) -> Gen {
        if self.is_tilde() {
            Gen::A
        } else {
            Gen::D
        }
    }
}

impl fmt::Display for TwistVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TwistVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s.to_ascii_lowercase().as_str() {
            "f" => Ok(TwistVariant::F),
            "fhat" => Ok(TwistVariant::FHat),
            "ftilde" => Ok(TwistVariant::FTilde),
            "fhattilde" | "ftildehat" => Ok(TwistVariant::FHatTilde),
            _ => Err(Error::Rep(format!("unknown twist {s:?}"))),
        }
    }
}

fn lambdas(rep: &TensorRep) -> (HalfInt, HalfInt) {
    (rep.site(0).lambda(), rep.site(1).lambda())
}

fn k(n: i64) -> HalfInt {
    HalfInt::from_int(n)
}

fn br(n: i64) -> BracketProduct {
    BracketProduct::bracket(AffineExpr::constant(k(n)))
}

/// `g(x) = [d + λ₁ − λ₂ + x]` as its argument.
pub fn g(rep: &TensorRep, x: i64) -> AffineExpr {
    let (l1, l2) = lambdas(rep);
    rep.d_expr().plus(l1 - l2 + k(x))
}

/// `g̃(x) = [−d + λ₁ − λ₂ + x]` as its argument.
pub fn g_tilde(rep: &TensorRep, x: i64) -> AffineExpr {
    let (l1, l2) = lambdas(rep);
    (-rep.d_expr()).plus(l1 - l2 + k(x))
}

fn require_pair(rep: &TensorRep) -> Result<(), Error> {
    if rep.len() == 2 {
        Ok(())
    } else {
        Err(Error::Rep(format!("twists act on two sites, found {}", rep.len())))
    }
}

/// Product of `[arg(j)]^e` over `j` in `range`.
fn product(
    range: impl IntoIterator<Item = i64>,
    mut arg: impl FnMut(i64) -> AffineExpr,
    e: i32,
    acc: BracketProduct,
) -> Result<BracketProduct, EvalError> {
    range.into_iter().try_fold(acc, |acc, j| acc.times_bracket(arg(j), e))
}

/// The eigenvalue of `Q⁻¹` on `|ℓ,k⟩` as a finite product.
pub fn diagonal_part(rep: &TensorRep, v: TwistVariant, l: i64, kk: i64) -> Result<BracketProduct, Error> {
    require_pair(rep)?;
    let (l1, l2) = lambdas(rep);
    let d = rep.d_expr();
    let nd = -d;
    let one = BracketProduct::one();
    let out = match v {
        TwistVariant::F => {
            let p = product(0..kk, |j| d.plus(l1 - l2 + k(j - l)), 1, one)?;
            product(0..kk, |j| d.plus(-l1 - l2 + k(j)), -1, p)?
        }
        TwistVariant::FHat => {
            let p = product(1..=l, |j| d.plus(l1 + l2 + k(j - l)), 1, one)?;
            product(1..=l, |j| d.plus(l1 - l2 + k(kk - l + j)), -1, p)?
        }
        TwistVariant::FTilde => {
            let p = product(1..=l, |j| nd.plus(l1 - l2 + k(kk - l + j)), 1, one)?;
            product(1..=l, |j| nd.plus(l1 + l2 + k(j - l)), -1, p)?
        }
        TwistVariant::FHatTilde => {
            let p = product(0..kk, |j| nd.plus(-l1 - l2 + k(j)), 1, one)?;
            product(0..kk, |j| nd.plus(l1 - l2 + k(j - l)), -1, p)?
        }
    };
    Ok(out)
}

/// The same eigenvalue from its closed q-Gamma form in `H⊗1 = λ₁−ℓ`,
/// `1⊗H = λ₂−k`.
pub fn qgamma_diagonal(rep: &TensorRep, v: TwistVariant, l: i64, kk: i64) -> Result<BracketProduct, Error> {
    require_pair(rep)?;
    let (l1, l2) = lambdas(rep);
    let (h1, h2) = (l1 - k(l), l2 - k(kk));
    let s = if v.is_tilde() { -rep.d_expr() } else { rep.d_expr() };
    let at = |c: HalfInt| s.plus(c);
    let gr = |t: HalfInt, b: HalfInt| BracketProduct::gamma_ratio(&at(t), &at(b));
    let one = HalfInt::ONE;
    let (a, b) = match v {
        TwistVariant::F => (gr(h1 - h2, h1 - l2)?, gr(-l1 - l2, -l1 - h2)?),
        TwistVariant::FHat => (gr(h1 - h2 + one, h1 + l2 + one)?, gr(l1 + l2 + one, l1 - h2 + one)?),
        TwistVariant::FTilde => (gr(l1 - h2 + one, h1 - h2 + one)?, gr(h1 + l2 + one, l1 + l2 + one)?),
        TwistVariant::FHatTilde => (gr(-l1 - h2, -l1 - l2)?, gr(h1 - l2, h1 - h2)?),
    };
    Ok(a.mul(&b))
}

/// A twist and its inverse with factored entries (row = output basis
/// vector, column = input).
#[derive(Clone, Debug)]
pub struct Twist {
    rep: TensorRep,
    variant: TwistVariant,
    forward: OpMatrix<BracketProduct>,
    inverse: OpMatrix<BracketProduct>,
}

impl Twist {
    pub fn build(rep: &TensorRep, variant: TwistVariant) -> Result<Self, Error> {
        require_pair(rep)?;
        let dims = rep.dims();
        let (n1, n2) = (dims[0] as i64 - 1, dims[1] as i64 - 1);
        let n = rep.dim();
        let idx = |l: i64, kk: i64| rep.index(&[l as usize, kk as usize]);
        let mut forward = factored_zeros(n, n);
        let mut inverse = factored_zeros(n, n);
        let sign = |m: i64| BracketProduct::from_int(if m % 2 == 0 { 1 } else { -1 });
        for l in 0..=n1 {
            for kk in 0..=n2 {
                let q_lk = diagonal_part(rep, variant, l, kk)?;
                if !variant.is_tilde() {
                    for m in 0..=kk.min(n1 - l) {
                        let num = (1..=m).fold(BracketProduct::one(), |acc, j| acc.mul(&br(n1 - l - j + 1)).mul(&br(kk - j + 1)));
                        let base = num.div(&BracketProduct::factorial(m as u32))?;
                        let inv = product(1..=m, |j| g(rep, kk - l - j), -1, base.mul(&sign(m)))?;
                        inverse.set(idx(l + m, kk - m), idx(l, kk), q_lk.mul(&inv));
                        let fwd = product(1..=m, |j| g(rep, kk - l - 2 * m + j), -1, base)?;
                        let q_out = diagonal_part(rep, variant, l + m, kk - m)?;
                        forward.set(idx(l + m, kk - m), idx(l, kk), fwd.div(&q_out)?);
                    }
                } else {
                    for m in 0..=(n2 - kk).min(l) {
                        let num = (1..=m).fold(BracketProduct::one(), |acc, j| acc.mul(&br(n2 - kk - j + 1)).mul(&br(l - j + 1)));
                        let base = num.div(&BracketProduct::factorial(m as u32))?;
                        let inv = product(1..=m, |j| g_tilde(rep, kk - l + j), -1, base.clone())?;
                        inverse.set(idx(l - m, kk + m), idx(l, kk), q_lk.mul(&inv));
                        let fwd = product(1..=m, |j| g_tilde(rep, kk - l + 2 * m - j), -1, base.mul(&sign(m)))?;
                        let q_out = diagonal_part(rep, variant, l - m, kk + m)?;
                        forward.set(idx(l - m, kk + m), idx(l, kk), fwd.div(&q_out)?);
                    }
                }
            }
        }
        Ok(Twist { rep: rep.clone(), variant, forward, inverse })
    }

    pub fn rep(&self) -> &TensorRep {
        &self.rep
    }

    pub fn variant(&self) -> TwistVariant {
        self.variant
    }

    pub fn forward(&self) -> &OpMatrix<BracketProduct> {
        &self.forward
    }

    pub fn inverse(&self) -> &OpMatrix<BracketProduct> {
        &self.inverse
    }

    pub fn forward_scalar(&self) -> OpMatrix<Scalar> {
        self.rep.realize(&self.forward)
    }

    pub fn inverse_scalar(&self) -> OpMatrix<Scalar> {
        self.rep.realize(&self.inverse)
    }

    pub fn eval_forward(&self, ev: &impl Evaluator) -> Result<OpMatrix<BigRational>, EvalError> {
        self.forward.try_map(|p| p.eval(ev))
    }

    pub fn eval_inverse(&self, ev: &impl Evaluator) -> Result<OpMatrix<BigRational>, EvalError> {
        self.inverse.try_map(|p| p.eval(ev))
    }

    /// `F·Δ(X)·F⁻¹`.
    pub fn conjugate(&self, x: &OpMatrix<Scalar>) -> OpMatrix<Scalar> {
        self.forward_scalar().mul(x).mul(&self.inverse_scalar())
    }

    pub fn twisted_coproduct(&self, gen: Gen, u: &AffineExpr) -> Result<OpMatrix<Scalar>, Error> {
        Ok(self.conjugate(&self.rep.delta_op_scalar(gen, u)?))
    }
}

/// The closed form of the twisted coproduct of `gen`, when it has one
/// (`B`, `C` and the diagonal generator).
pub fn twisted_closed_form(rep: &TensorRep, v: TwistVariant, gen: Gen, u: &AffineExpr) -> Result<Option<OpMatrix<Scalar>>, Error> {
    require_pair(rep)?;
    let (s1, s2): (&EvalRep, &EvalRep) = (rep.site(0), rep.site(1));
    let diag = v.diagonal_generator();
    let pair = |x: Gen, y: Gen| s1.op(x, u).kron(&s2.op(y, u));
    if gen == diag {
        return Ok(Some(pair(diag, diag)));
    }
    let (l1, l2) = lambdas(rep);
    // Numerators as functions of (H⊗1, 1⊗H).
    type Num = fn(HalfInt, HalfInt, HalfInt, HalfInt) -> HalfInt;
    let plus: Num = |h1, _h2, _l1, l2| h1 + l2;
    let minus: Num = |h1, _h2, _l1, l2| h1 - l2;
    let lo: Num = |_h1, h2, l1, _l2| -l1 - h2;
    let hi: Num = |_h1, h2, l1, _l2| l1 - h2;
    let (first, second) = match (gen, v.is_hat()) {
        (Gen::B, false) => (plus, lo),
        (Gen::B, true) => (minus, hi),
        (Gen::C, false) => (minus, hi),
        (Gen::C, true) => (plus, lo),
        _ => return Ok(None),
    };
    let s = if v.is_tilde() { -rep.d_expr() } else { rep.d_expr() };
    let b = rep.bracket();
    let dims = rep.dims();
    let weight_fn = |num: Num| -> Result<OpMatrix<Scalar>, Error> {
        let vals = (0..rep.dim())
            .map(|i| {
                let dg = rep.digits(i);
                let (h1, h2) = (s1.weight(dg[0]), s2.weight(dg[1]));
                let top = BracketProduct::bracket(s.plus(num(h1, h2, l1, l2)));
                Ok(top.times_bracket(s.plus(h1 - h2), -1)?.to_scalar(b))
            })
            .collect::<Result<Vec<_>, Error>>()?;
        debug_assert_eq!(vals.len(), dims.iter().product::<usize>());
        Ok(OpMatrix::diagonal(&vals))
    };
    let (f1, f2) = (weight_fn(first)?, weight_fn(second)?);
    let (t1, t2) = (pair(gen, diag), pair(diag, gen));
    let out = if v.is_hat() { f1.mul(&t1).add(&f2.mul(&t2)) } else { t1.mul(&f1).add(&t2.mul(&f2)) };
    Ok(Some(out))
}

/// Pairs `(ℓ, k)` at which one of the relations
/// `Q̂₂₁ = Q₁₂⁻¹`, `Q̂₁₂⁻¹ = Q₂₁`, `Q̃₁₂⁻¹ = Q₂₁⁻¹|δ₁↔δ₂`, `Q̂̃₁₂⁻¹ = Q₁₂|δ₁↔δ₂`
/// fails, tagged by the relation's position in that list.
pub fn diagonal_relation_failures(rep: &TensorRep) -> Result<Vec<(usize, i64, i64)>, Error> {
    let dims = rep.dims();
    let sw = rep.swapped();
    let ds = rep.delta_swapped();
    let dsw = ds.swapped();
    let b = rep.bracket();
    let mut bad = Vec::new();
    for l in 0..dims[0] as i64 {
        for k in 0..dims[1] as i64 {
            let q = |r: &TensorRep, v, l, k| diagonal_part(r, v, l, k).map(|p| p.to_scalar(b));
            let plain = q(rep, TwistVariant::F, l, k)?;
            let checks = [
                q(&sw, TwistVariant::FHat, k, l)?.mul(&plain),
                q(rep, TwistVariant::FHat, l, k)?.mul(&q(&sw, TwistVariant::F, k, l)?),
                q(rep, TwistVariant::FTilde, l, k)?.div(&q(&dsw, TwistVariant::F, k, l)?).ok_or(Error::Singular)?,
                q(rep, TwistVariant::FHatTilde, l, k)?.mul(&q(&ds, TwistVariant::F, l, k)?),
            ];
            for (i, c) in checks.iter().enumerate() {
                if !c.is_one() {
                    bad.push((i, l, k));
                }
            }
        }
    }
    Ok(bad)
}

/// The recursions in `ℓ` and `k` satisfied by the diagonal parts, checked on
/// every admissible pair. Returns the failing `(ℓ, k, step)` triples.
pub fn recursion_failures(rep: &TensorRep, v: TwistVariant) -> Result<Vec<(i64, i64, char)>, Error> {
    let dims = rep.dims();
    let (n1, n2) = (dims[0] as i64 - 1, dims[1] as i64 - 1);
    let (l1, _) = lambdas(rep);
    let tl1 = l1.twice();
    let tl2 = n2;
    let gg = |x: i64| BracketProduct::bracket(g(rep, x));
    let gt = |x: i64| BracketProduct::bracket(g_tilde(rep, x));
    let b = rep.bracket();
    let mut bad = Vec::new();
    for l in 0..=n1 {
        for kk in 0..=n2 {
            let q = diagonal_part(rep, v, l, kk)?.to_scalar(b);
            if l < n1 {
                let next = diagonal_part(rep, v, l + 1, kk)?.to_scalar(b);
                let ratio = match v {
                    TwistVariant::F => gg(-l - 1).div(&gg(kk - l - 1))?,
                    TwistVariant::FHat => gg(tl2 - l).div(&gg(kk - l))?,
                    TwistVariant::FTilde => gt(kk - l).div(&gt(tl2 - l))?,
                    TwistVariant::FHatTilde => gt(kk - l - 1).div(&gt(-l - 1))?,
                };
                if next != q.mul(&ratio.to_scalar(b)) {
                    bad.push((l, kk, 'l'));
                }
            }
            if kk < n2 {
                let next = diagonal_part(rep, v, l, kk + 1)?.to_scalar(b);
                let k1 = kk + 1;
                let ratio = match v {
                    TwistVariant::F => gg(kk - l).div(&gg(-tl1 + kk))?,
                    TwistVariant::FHat => gg(kk - l + 1).div(&gg(kk + 1))?,
                    TwistVariant::FTilde => gt(k1).div(&gt(k1 - l))?,
                    TwistVariant::FHatTilde => gt(-tl1 + k1 - 1).div(&gt(k1 - l - 1))?,
                };
                if next != q.mul(&ratio.to_scalar(b)) {
                    bad.push((l, kk, 'k'));
                }
            }
        }
    }
    Ok(bad)
}

/// The four families of q-identities behind the eigenvector property, with
/// spectral parameter `u`. Returns a label for every failing instance.
pub fn q_identity_failures(rep: &TensorRep, u: &AffineExpr) -> Result<Vec<String>, Error> {
    require_pair(rep)?;
    let (s1, s2) = (rep.site(0), rep.site(1));
    let (n1, n2) = (s1.two_lambda(), s2.two_lambda());
    let b = rep.bracket();
    let sc = |p: BracketProduct| p.to_scalar(b);
    let bx = |a: AffineExpr| sc(BracketProduct::bracket(a));
    let n = |x: i64| sc(br(x));
    let gg = |x: i64| bx(g(rep, x));
    let gt = |x: i64| bx(g_tilde(rep, x));
    let a1 = |x: i64| bx(s1.a_k(u, x));
    let d1 = |x: i64| bx(s1.d_k(u, x));
    let a2 = |x: i64| bx(s2.a_k(u, x));
    let d2 = |x: i64| bx(s2.d_k(u, x));
    let div = |x: Scalar, y: Scalar| x.div(&y).ok_or(Error::Singular);
    let mut bad = Vec::new();
    for l in 0..=n1 {
        for kk in 0..=n2 {
            for i in 0..=kk {
                let lhs = a2(kk - i).sub(&div(d1(l + i + 1).mul(&n(kk - i)).mul(&n(n2 - kk + i + 1)), n(i + 1).mul(&gg(kk - l - i - 1)))?);
                let rhs = div(d2(kk).mul(&gg(n2 - l)).mul(&gg(-l - 1)), gg(kk - l).mul(&gg(kk - l - i - 1)))?
                    .sub(&div(d1(l).mul(&n(kk + 1)).mul(&n(n2 - kk)), n(i + 1).mul(&gg(kk - l)))?);
                if lhs != rhs {
                    bad.push(format!("1a l={l} k={kk} i={i}"));
                }
            }
            for i in 1..=kk {
                let lhs = d2(kk - i).mul(&n(l + i)).mul(&n(n1 - l - i + 1)).sub(&a1(l + i - 1).mul(&n(i)).mul(&gg(kk - l - i)));
                let rhs = div(d2(kk).mul(&n(l)).mul(&n(n1 - l + 1)).mul(&gg(kk - l - i)), gg(kk - l))?
                    .sub(&div(d1(l).mul(&n(i)).mul(&gg(kk)).mul(&gg(-n1 + kk - 1)), gg(kk - l))?);
                if lhs != rhs {
                    bad.push(format!("1b l={l} k={kk} i={i}"));
                }
            }
            for i in 0..=l {
                let lhs = a2(kk + i).mul(&n(l - i + 1)).mul(&n(n1 - l + i)).add(&d1(l - i + 1).mul(&n(i)).mul(&gt(kk - l + i)));
                let rhs = div(a2(kk).mul(&n(l + 1)).mul(&n(n1 - l)).mul(&gt(kk - l + i)), gt(kk - l))?
                    .add(&div(a1(l).mul(&n(i)).mul(&gt(-n1 + kk)).mul(&gt(kk + 1)), gt(kk - l))?);
                if lhs != rhs {
                    bad.push(format!("2a l={l} k={kk} i={i}"));
                }
            }
            for i in 1..=l {
                let lhs = a1(l - i).mul(&n(kk + i)).mul(&n(n2 - kk - i + 1)).add(&d2(kk + i - 1).mul(&n(i)).mul(&gt(kk - l + i)));
                let rhs = div(a2(kk).mul(&n(i)).mul(&gt(-l)).mul(&gt(n2 - l + 1)), gt(kk - l))?
                    .add(&div(a1(l).mul(&n(kk)).mul(&n(n2 - kk + 1)).mul(&gt(kk - l + i)), gt(kk - l))?);
                if lhs != rhs {
                    bad.push(format!("2b l={l} k={kk} i={i}"));
                }
            }
        }
    }
    Ok(bad)
}

/// The `j` (if any) at which the inverse twist `F⁻¹` fails to exist for
/// `δ₁ − δ₂ = d`, i.e. `d = λ₁ + λ₂ − j + 1` with `1 ≤ j ≤ min(2λ₁, 2λ₂)`.
pub fn inverse_obstruction(l1: HalfInt, l2: HalfInt, d: &BigRational) -> Option<i64> {
    (1..=l1.twice().min(l2.twice())).find(|&j| *d == critical_shift(l1, l2, j).to_rational())
}

/// The same for `F` itself, with `2 ≤ j ≤ 2λ₁ + 2λ₂`.
pub fn forward_obstruction(l1: HalfInt, l2: HalfInt, d: &BigRational) -> Option<i64> {
    (2..=l1.twice() + l2.twice()).find(|&j| *d == critical_shift(l1, l2, j).to_rational())
}

/// Existence of `F⁻¹` in terms of `w₁²/w₂²` and `q`.
pub fn inverse_obstruction_w(l1: HalfInt, l2: HalfInt, ratio_sq: &BigRational, q: &BigRational) -> Option<i64> {
    (1..=l1.twice().min(l2.twice())).find(|&j| *ratio_sq == q.clone().pow(critical_shift(l1, l2, j).twice() as i32))
}

pub fn forward_obstruction_w(l1: HalfInt, l2: HalfInt, ratio_sq: &BigRational, q: &BigRational) -> Option<i64> {
    (2..=l1.twice() + l2.twice()).find(|&j| *ratio_sq == q.clone().pow(critical_shift(l1, l2, j).twice() as i32))
}

pub fn check_inverse_exists(l1: HalfInt, l2: HalfInt, d: &BigRational) -> Result<(), Error> {
    inverse_obstruction(l1, l2, d).map_or(Ok(()), |j| Err(Error::Existence { j }))
}

pub fn check_forward_exists(l1: HalfInt, l2: HalfInt, d: &BigRational) -> Result<(), Error> {
    forward_obstruction(l1, l2, d).map_or(Ok(()), |j| Err(Error::Existence { j }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{Bracket, ParamSymbol, QPoint};

    fn pair(a: i64, b: i64) -> TensorRep {
        let s = |t, p| EvalRep::new(HalfInt::from_twice(t), p, Bracket::Quantum).unwrap();
        TensorRep::pair(s(a, ParamSymbol::Delta1), s(b, ParamSymbol::Delta2)).unwrap()
    }

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn spin_half_inverse_twist() {
        let t = Twist::build(&pair(1, 1), TwistVariant::F).unwrap();
        let inv = t.inverse();
        assert_eq!(inv.get(1, 1).to_string(), "[d]/[d-1]");
        assert_eq!(inv.get(2, 1).to_string(), "-1/[d-1]");
        assert!(inv.get(0, 0).is_one() && inv.get(3, 3).is_one() && inv.get(2, 2).is_one());
        assert!(inv.get(1, 2).is_zero());
    }

    #[test]
    fn forward_times_inverse_is_identity() {
        for v in TwistVariant::ALL {
            for (a, b) in [(1, 1), (2, 1), (1, 2), (2, 2), (3, 1)] {
                let t = Twist::build(&pair(a, b), v).unwrap();
                assert!(t.forward_scalar().mul(&t.inverse_scalar()).is_identity(), "{v} on {a}/2 ⊗ {b}/2");
            }
        }
    }

    #[test]
    fn triangularity() {
        for v in TwistVariant::ALL {
            let t = Twist::build(&pair(2, 2), v).unwrap();
            let (f, fi) = (t.forward_scalar(), t.inverse_scalar());
            if v.is_tilde() {
                assert!(f.is_upper_triangular() && fi.is_upper_triangular());
            } else {
                assert!(f.is_lower_triangular() && fi.is_lower_triangular());
            }
        }
    }

    #[test]
    fn products_agree_with_gamma_forms() {
        for v in TwistVariant::ALL {
            let rep = pair(3, 2);
            for l in 0..=3 {
                for kk in 0..=2 {
                    assert_eq!(diagonal_part(&rep, v, l, kk).unwrap(), qgamma_diagonal(&rep, v, l, kk).unwrap(), "{v} at {l},{kk}");
                }
            }
        }
    }

    #[test]
    fn diagonal_relations() {
        for (a, b) in [(1, 1), (2, 1), (1, 3), (3, 2)] {
            assert_eq!(diagonal_relation_failures(&pair(a, b)).unwrap(), vec![]);
        }
    }

    #[test]
    fn recursions_hold() {
        for v in TwistVariant::ALL {
            assert_eq!(recursion_failures(&pair(2, 3), v).unwrap(), vec![], "{v}");
        }
    }

    #[test]
    fn closed_forms_match_conjugation() {
        let u = AffineExpr::param(ParamSymbol::U);
        for v in TwistVariant::ALL {
            let rep = pair(1, 2);
            let t = Twist::build(&rep, v).unwrap();
            for gen in Gen::ALL {
                if let Some(cf) = twisted_closed_form(&rep, v, gen, &u).unwrap() {
                    assert_eq!(t.twisted_coproduct(gen, &u).unwrap(), cf, "{v} {gen}");
                }
            }
        }
    }

    #[test]
    fn q_identities_hold() {
        let u = AffineExpr::param(ParamSymbol::U);
        for (a, b) in [(1, 1), (1, 2), (2, 1)] {
            assert_eq!(q_identity_failures(&pair(a, b), &u).unwrap(), Vec::<String>::new());
        }
    }

    #[test]
    fn uncorrected_second_tilde_family_fails() {
        // With g̃(k−ℓ+1) in place of g̃(k−ℓ+i) the last family breaks at i = 2.
        let rep = pair(2, 1);
        let u = AffineExpr::param(ParamSymbol::U);
        let (s1, s2) = (rep.site(0), rep.site(1));
        let sc = |a: AffineExpr| BracketProduct::bracket(a).to_scalar(Bracket::Quantum);
        let n = |x: i64| sc(AffineExpr::constant(k(x)));
        let gt = |x: i64| sc(g_tilde(&rep, x));
        let (l, kk, i, n2) = (2, 1, 2, 1);
        let lhs = sc(s1.a_k(&u, l - i)).mul(&n(kk + i)).mul(&n(n2 - kk - i + 1)).add(&sc(s2.d_k(&u, kk + i - 1)).mul(&n(i)).mul(&gt(kk - l + i)));
        let first = sc(s2.a_k(&u, kk)).mul(&n(i)).mul(&gt(-l)).mul(&gt(n2 - l + 1));
        let rhs_with = |shift: i64| {
            first.add(&sc(s1.a_k(&u, l)).mul(&n(kk)).mul(&n(n2 - kk + 1)).mul(&gt(kk - l + shift))).div(&gt(kk - l)).unwrap()
        };
        assert_ne!(lhs, rhs_with(1));
        assert_eq!(lhs, rhs_with(i));
    }

    #[test]
    fn existence_conditions() {
        let h = HalfInt::HALF;
        assert_eq!(inverse_obstruction(h, h, &r(1, 1)), Some(1));
        assert_eq!(inverse_obstruction(h, h, &r(0, 1)), None);
        assert_eq!(forward_obstruction(h, h, &r(0, 1)), Some(2));
        assert_eq!(forward_obstruction(h, h, &r(1, 1)), None);
        assert_eq!(inverse_obstruction_w(h, h, &r(4, 1), &r(2, 1)), Some(1));
        assert!(matches!(check_inverse_exists(h, h, &r(1, 1)), Err(Error::Existence { j: 1 })));
    }

    #[test]
    fn numerical_poles_match_the_conditions() {
        let t = Twist::build(&pair(1, 1), TwistVariant::F).unwrap();
        let at = |d: BigRational| QPoint::new(r(2, 1), 1).with(ParamSymbol::Delta1, d).with(ParamSymbol::Delta2, r(0, 1));
        assert!(matches!(t.eval_inverse(&at(r(1, 1))), Err(EvalError::BracketPole(_))));
        assert!(t.eval_forward(&at(r(1, 1))).is_ok());
        assert!(matches!(t.eval_forward(&at(r(0, 1))), Err(EvalError::BracketPole(_))));
        assert!(t.eval_inverse(&at(r(0, 1))).is_ok());
        assert!(t.eval_inverse(&at(r(3, 1))).is_ok() && t.eval_forward(&at(r(3, 1))).is_ok());
    }
}
