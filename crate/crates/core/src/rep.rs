//! Evaluation representations `V_λ(w)`, `w = q^δ`, in the weight basis
//! `|0⟩, …, |2λ⟩` (highest weight first).

use std::fmt;

use num_rational::BigRational;
use num_traits::{Pow, Zero};

use crate::error::Error;
use crate::linalg::OpMatrix;
use crate::scalar::{bracket::q_power, AffineExpr, Bracket, BracketProduct, HalfInt, ParamSymbol, Scalar};

/// The four entries `T^1_1 = A`, `T^1_2 = B`, `T^2_1 = C`, `T^2_2 = D`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Gen {
    A,
    B,
    C,
    D,
}

impl Gen {
    pub const ALL: [Gen; 4] = [Gen::A, Gen::B, Gen::C, Gen::D];

    /// `(i, j)` with `self = T^i_j`, indices from 1.
    pub fn indices(self) -> (usize, usize) {
        match self {
            Gen::A => (1, 1),
            Gen::B => (1, 2),
            Gen::C => (2, 1),
            Gen::D => (2, 2),
        }
    }

    pub fn from_indices(i: usize, j: usize) -> Gen {
        match (i, j) {
            (1, 1) => Gen::A,
            (1, 2) => Gen::B,
            (2, 1) => Gen::C,
            (2, 2) => Gen::D,
            _ => panic!("T^{i}_{j} is not a generator"),
        }
    }
}

impl fmt::Display for Gen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct EvalRep {
    lambda: HalfInt,
    delta: ParamSymbol,
    bracket: Bracket,
}

fn c(h: HalfInt) -> AffineExpr {
    AffineExpr::constant(h)
}

fn ci(n: i64) -> AffineExpr {
    AffineExpr::constant(HalfInt::from_int(n))
}

impl EvalRep {
    pub fn new(lambda: HalfInt, delta: ParamSymbol, bracket: Bracket) -> Result<Self, Error> {
        Self::of_type(lambda, delta, bracket, 1)
    }

    /// Only type `ε = 1` representations are supported.
    pub fn of_type(lambda: HalfInt, delta: ParamSymbol, bracket: Bracket, epsilon: i8) -> Result<Self, Error> {
        if epsilon != 1 {
            return Err(Error::Rep(format!("type ε = {epsilon} is not supported")));
        }
        if lambda.twice() < 0 {
            return Err(Error::Rep(format!("spin {lambda} is negative")));
        }
        if !matches!(delta, ParamSymbol::Delta1 | ParamSymbol::Delta2 | ParamSymbol::Delta3) {
            return Err(Error::Rep(format!("{} is not an evaluation parameter", delta.name())));
        }
        Ok(EvalRep { lambda, delta, bracket })
    }

    pub fn lambda(&self) -> HalfInt {
        self.lambda
    }

    pub fn two_lambda(&self) -> i64 {
        self.lambda.twice()
    }

    pub fn delta(&self) -> ParamSymbol {
        self.delta
    }

    pub fn delta_expr(&self) -> AffineExpr {
        AffineExpr::param(self.delta)
    }

    pub fn bracket(&self) -> Bracket {
        self.bracket
    }

    pub fn dim(&self) -> usize {
        self.lambda.twice() as usize + 1
    }

    pub fn with_delta(self, delta: ParamSymbol) -> Self {
        EvalRep { delta, ..self }
    }

    pub fn with_bracket(self, bracket: Bracket) -> Self {
        EvalRep { bracket, ..self }
    }

    /// `E|m⟩ = [m]|m−1⟩`.
    pub fn e_factored(&self) -> OpMatrix<BracketProduct> {
        let n = self.dim();
        OpMatrix::from_fn(n, n, |i, j| {
            if j == i + 1 {
                BracketProduct::bracket(ci(j as i64))
            } else {
                BracketProduct::zero()
            }
        })
    }

    /// `F|m⟩ = [2λ−m]|m+1⟩`.
    pub fn f_factored(&self) -> OpMatrix<BracketProduct> {
        let n = self.dim();
        OpMatrix::from_fn(n, n, |i, j| {
            if i == j + 1 {
                BracketProduct::bracket(ci(self.two_lambda() - j as i64))
            } else {
                BracketProduct::zero()
            }
        })
    }

    /// Weight of `|m⟩`: `λ − m`.
    pub fn weight(&self, m: usize) -> HalfInt {
        self.lambda - HalfInt::from_int(m as i64)
    }

    /// `a_k(u) = [u − δ + λ − k + ½]`.
    pub fn a_k(&self, u: &AffineExpr, k: i64) -> AffineExpr {
        *u - self.delta_expr() + c(self.lambda - HalfInt::from_int(k) + HalfInt::HALF)
    }

    /// `d_k(u) = [u − δ − λ + k + ½]`.
    pub fn d_k(&self, u: &AffineExpr, k: i64) -> AffineExpr {
        *u - self.delta_expr() + c(-self.lambda + HalfInt::from_int(k) + HalfInt::HALF)
    }

    /// `A(u) = [u−δ+H+½]`, `B = F`, `C = E`, `D(u) = [u−δ−H+½]`.
    pub fn op_factored(&self, g: Gen, u: &AffineExpr) -> OpMatrix<BracketProduct> {
        let n = self.dim();
        match g {
            Gen::A => OpMatrix::from_fn(n, n, |i, j| {
                if i == j {
                    BracketProduct::bracket(self.a_k(u, i as i64))
                } else {
                    BracketProduct::zero()
                }
            }),
            Gen::D => OpMatrix::from_fn(n, n, |i, j| {
                if i == j {
                    BracketProduct::bracket(self.d_k(u, i as i64))
                } else {
                    BracketProduct::zero()
                }
            }),
            Gen::B => self.f_factored(),
            Gen::C => self.e_factored(),
        }
    }

    pub fn realize(&self, m: &OpMatrix<BracketProduct>) -> OpMatrix<Scalar> {
        m.map(|p| p.to_scalar(self.bracket))
    }

    pub fn e(&self) -> OpMatrix<Scalar> {
        self.realize(&self.e_factored())
    }

    pub fn f(&self) -> OpMatrix<Scalar> {
        self.realize(&self.f_factored())
    }

    pub fn h(&self) -> OpMatrix<Scalar> {
        let d: Vec<Scalar> = (0..self.dim()).map(|m| Scalar::from_rational(self.weight(m).to_rational())).collect();
        OpMatrix::diagonal(&d)
    }

    /// `[2H]`, the bracket applied to the diagonal of `2H`.
    pub fn bracket_2h(&self) -> OpMatrix<Scalar> {
        let d: Vec<Scalar> = (0..self.dim())
            .map(|m| BracketProduct::bracket(c(self.weight(m) * 2)).to_scalar(self.bracket))
            .collect();
        OpMatrix::diagonal(&d)
    }

    /// `q^{a}` as a scalar.
    fn qpow(a: &AffineExpr) -> Scalar {
        Scalar::monomial(q_power(a))
    }

    /// `K = q^{2H}`; only meaningful for the q-bracket.
    pub fn k(&self) -> Result<OpMatrix<Scalar>, Error> {
        self.require_quantum("K")?;
        let d: Vec<Scalar> = (0..self.dim()).map(|m| Self::qpow(&c(self.weight(m) * 2))).collect();
        Ok(OpMatrix::diagonal(&d))
    }

    pub fn k_inv(&self) -> Result<OpMatrix<Scalar>, Error> {
        self.require_quantum("K")?;
        let d: Vec<Scalar> = (0..self.dim()).map(|m| Self::qpow(&c(self.weight(m) * -2))).collect();
        Ok(OpMatrix::diagonal(&d))
    }

    pub fn op(&self, g: Gen, u: &AffineExpr) -> OpMatrix<Scalar> {
        self.realize(&self.op_factored(g, u))
    }

    fn require_quantum(&self, what: &str) -> Result<(), Error> {
        match self.bracket {
            Bracket::Quantum => Ok(()),
            Bracket::Classical => Err(Error::Rep(format!("{what} needs the q-bracket"))),
        }
    }

    /// `(q − q⁻¹)⁻²`.
    fn inv_q_minus_qinv_sq() -> Scalar {
        let diff = Self::qpow(&ci(1)).sub(&Self::qpow(&ci(-1)));
        diff.mul(&diff).inv().expect("q − q⁻¹ ≠ 0")
    }

    /// `(qK + q⁻¹K⁻¹)/(q − q⁻¹)² + FE`.
    pub fn casimir_matrix(&self) -> Result<OpMatrix<Scalar>, Error> {
        let k = self.k()?;
        let ki = self.k_inv()?;
        let q = Self::qpow(&ci(1));
        let qi = Self::qpow(&ci(-1));
        let cartan = k.scale(&q).add(&ki.scale(&qi)).scale(&Self::inv_q_minus_qinv_sq());
        Ok(cartan.add(&self.f().mul(&self.e())))
    }

    /// `(q^{2λ+1} + q^{−2λ−1})/(q − q⁻¹)²`.
    pub fn casimir_eigenvalue(&self) -> Result<Scalar, Error> {
        self.require_quantum("the Casimir element")?;
        let e = self.lambda * 2 + HalfInt::ONE;
        Ok(Self::qpow(&c(e)).add(&Self::qpow(&c(-e))).mul(&Self::inv_q_minus_qinv_sq()))
    }

    /// `[u−δ+λ+1]·[u−δ−λ]`.
    pub fn qdet(&self, u: &AffineExpr) -> BracketProduct {
        let base = *u - self.delta_expr();
        BracketProduct::bracket(base + c(self.lambda + HalfInt::ONE)).mul(&BracketProduct::bracket(base + c(-self.lambda)))
    }

    /// `(z²q/w² + w²/(z²q))/(q−q⁻¹)² − C`, with `C` the Casimir eigenvalue.
    pub fn qdet_casimir_form(&self, u: &AffineExpr) -> Result<Scalar, Error> {
        let x = (*u - self.delta_expr()).scale(2).plus(HalfInt::ONE);
        let head = Self::qpow(&x).add(&Self::qpow(&-x)).mul(&Self::inv_q_minus_qinv_sq());
        Ok(head.sub(&self.casimir_eigenvalue()?))
    }
}

/// The admissible `j` for reducibility of `V_{λ₁}⊗V_{λ₂}`.
fn reducibility_range(l1: HalfInt, l2: HalfInt) -> std::ops::RangeInclusive<i64> {
    1..=l1.twice().min(l2.twice())
}

/// `λ₁ + λ₂ − j + 1`.
pub fn critical_shift(l1: HalfInt, l2: HalfInt, j: i64) -> HalfInt {
    l1 + l2 - HalfInt::from_int(j - 1)
}

/// Reducibility at a real deformation `q > 0, q ≠ 1`, where
/// `w₁²/w₂² = q^{±2c}` is equivalent to `δ₁ − δ₂ = ±c`. Returns the witness `j`.
pub fn is_reducible(l1: HalfInt, l2: HalfInt, delta_diff: &BigRational) -> Option<i64> {
    reducibility_range(l1, l2).find(|&j| {
        let c = critical_shift(l1, l2, j).to_rational();
        *delta_diff == c || *delta_diff == -c
    })
}

/// `q^{2c}` for a half-integer `c`.
pub(crate) fn q_to_twice(q: &BigRational, c: HalfInt) -> BigRational {
    q.clone().pow(c.twice() as i32)
}

/// Reducibility in terms of `w₁, w₂, q` directly (exact rationals).
pub fn is_reducible_w(l1: HalfInt, w1: &BigRational, l2: HalfInt, w2: &BigRational, q: &BigRational) -> Option<i64> {
    if w2.is_zero() || q.is_zero() {
        return None;
    }
    let ratio = (w1 / w2).pow(2);
    reducibility_range(l1, l2).find(|&j| {
        let c = critical_shift(l1, l2, j);
        ratio == q_to_twice(q, c) || ratio == q_to_twice(q, -c)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::QPoint;

    fn rep(twice: i64, b: Bracket) -> EvalRep {
        EvalRep::new(HalfInt::from_twice(twice), ParamSymbol::Delta1, b).unwrap()
    }

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn spin_half_matrices() {
        let v = rep(1, Bracket::Quantum);
        let e = v.e();
        assert!(e.get(0, 1).is_one() && e.get(1, 0).is_zero());
        assert!(v.f().get(1, 0).is_one());
        assert_eq!(v.h().diag(), vec![Scalar::from_rational(r(1, 2)), Scalar::from_rational(r(-1, 2))]);
    }

    #[test]
    fn spin_one_lowering() {
        let two = crate::scalar::parse_scalar("q + q^-1").unwrap();
        assert_eq!(*rep(2, Bracket::Quantum).f().get(1, 0), two);
        assert_eq!(*rep(2, Bracket::Classical).f().get(1, 0), Scalar::from_int(2));
    }

    #[test]
    fn abcd_on_spin_half() {
        let v = rep(1, Bracket::Quantum);
        let u = AffineExpr::param(ParamSymbol::U);
        let a = v.op_factored(Gen::A, &u);
        let base = u - v.delta_expr();
        assert_eq!(*a.get(0, 0), BracketProduct::bracket(base.plus(HalfInt::ONE)));
        assert_eq!(*a.get(1, 1), BracketProduct::bracket(base));
        assert_eq!(*v.op_factored(Gen::D, &u).get(0, 0), BracketProduct::bracket(base));
        assert_eq!(v.op(Gen::B, &u), v.f());
    }

    #[test]
    fn casimir_values() {
        let pt = QPoint::new(r(2, 1), 1);
        assert_eq!(rep(2, Bracket::Quantum).casimir_eigenvalue().unwrap().eval(&pt).unwrap(), r(65, 18));
        let trivial = rep(0, Bracket::Quantum).casimir_eigenvalue().unwrap();
        assert_eq!(trivial, crate::scalar::parse_scalar("(q + q^-1)/(q - q^-1)^2").unwrap());
        assert!(rep(1, Bracket::Classical).casimir_eigenvalue().is_err());
    }

    #[test]
    fn qdet_vanishes_at_the_expected_point() {
        let v = rep(1, Bracket::Quantum);
        let u = AffineExpr::param(ParamSymbol::U);
        let pt = QPoint::new(r(2, 1), 1).with(ParamSymbol::U, r(1, 2)).with(ParamSymbol::Delta1, r(0, 1)).with(ParamSymbol::Delta2, r(0, 1));
        assert!(v.qdet(&u).eval(&pt).unwrap().is_zero());
    }

    #[test]
    fn reducibility_examples() {
        let half = HalfInt::HALF;
        assert_eq!(is_reducible(half, half, &r(1, 1)), Some(1));
        assert_eq!(is_reducible(half, half, &r(-1, 1)), Some(1));
        assert_eq!(is_reducible(half, half, &r(1, 2)), None);
        assert_eq!(is_reducible(HalfInt::from_int(3), HalfInt::ZERO, &r(1, 1)), None);
        assert_eq!(is_reducible_w(half, &r(2, 1), half, &r(1, 1), &r(2, 1)), Some(1));
        assert_eq!(is_reducible_w(half, &r(3, 1), half, &r(1, 1), &r(2, 1)), None);
    }

    #[test]
    fn commutation_relations() {
        for b in [Bracket::Quantum, Bracket::Classical] {
            for twice in 0..=6 {
                let v = rep(twice, b);
                let (e, f, h) = (v.e(), v.f(), v.h());
                assert_eq!(e.commutator(&f), v.bracket_2h(), "2λ = {twice}");
                assert_eq!(h.commutator(&e), e);
                assert_eq!(h.commutator(&f), f.neg());
            }
        }
    }

    #[test]
    fn k_conjugation() {
        let q2 = crate::scalar::parse_scalar("q^2").unwrap();
        for twice in 0..=6 {
            let v = rep(twice, Bracket::Quantum);
            let (k, ki) = (v.k().unwrap(), v.k_inv().unwrap());
            assert_eq!(k.mul(&v.e()).mul(&ki), v.e().scale(&q2));
            assert_eq!(k.mul(&v.f()).mul(&ki), v.f().scale(&q2.inv().unwrap()));
            let cas = v.casimir_matrix().unwrap();
            let ev = v.casimir_eigenvalue().unwrap();
            assert_eq!(cas, OpMatrix::identity(v.dim()).scale(&ev));
        }
    }

    #[test]
    fn classical_cartan_relation() {
        let v = rep(3, Bracket::Classical);
        assert_eq!(v.e().commutator(&v.f()), v.h().scale(&Scalar::from_int(2)));
    }

    #[test]
    fn qdet_matches_casimir_form() {
        let u = AffineExpr::param(ParamSymbol::U);
        for twice in 0..=4 {
            let v = rep(twice, Bracket::Quantum);
            assert_eq!(v.qdet(&u).to_scalar(Bracket::Quantum), v.qdet_casimir_form(&u).unwrap());
        }
    }

    #[test]
    fn rejects_other_types() {
        assert!(EvalRep::of_type(HalfInt::ONE, ParamSymbol::Delta1, Bracket::Quantum, -1).is_err());
        assert!(EvalRep::new(HalfInt::ONE, ParamSymbol::U, Bracket::Quantum).is_err());
    }
}
