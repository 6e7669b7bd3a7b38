//! The R-matrix on `V_{λ₁}(w₁) ⊗ V_{λ₂}(w₂)` from the factorizing twist,
//! `R = F₂₁⁻¹ F₁₂ = R₊ R₀ R₋`.

use num_rational::BigRational;

use crate::error::{Error, EvalError};
use crate::linalg::{embed_two, flip_conjugate, OpMatrix, Ring};
use crate::rep::Gen;
use crate::scalar::{AffineExpr, BracketProduct, Evaluator, HalfInt, Scalar};
use crate::tensor::{factored_zeros, fundamental_r, TensorRep};
use crate::twist::{diagonal_part, g, qgamma_diagonal, Twist, TwistVariant};

/// The Gauss factors of `R`, with factored entries.
#[derive(Clone, Debug)]
pub struct GaussR {
    pub upper: OpMatrix<BracketProduct>,
    pub diagonal: OpMatrix<BracketProduct>,
    pub lower: OpMatrix<BracketProduct>,
}

fn br(n: i64) -> BracketProduct {
    BracketProduct::bracket(AffineExpr::constant(HalfInt::from_int(n)))
}

fn require_pair(rep: &TensorRep) -> Result<(), Error> {
    if rep.len() == 2 {
        Ok(())
    } else {
        Err(Error::Rep(format!("the R-matrix acts on two sites, found {}", rep.len())))
    }
}

impl GaussR {
    pub fn build(rep: &TensorRep) -> Result<Self, Error> {
        require_pair(rep)?;
        let dims = rep.dims();
        let (n1, n2) = (dims[0] as i64 - 1, dims[1] as i64 - 1);
        let n = rep.dim();
        let idx = |l: i64, k: i64| rep.index(&[l as usize, k as usize]);
        let swapped = rep.swapped();
        let mut upper = factored_zeros(n, n);
        let mut diagonal = factored_zeros(n, n);
        let mut lower = factored_zeros(n, n);
        for l in 0..=n1 {
            for k in 0..=n2 {
                // R₀ = Q₂₁⁻¹ Q₁₂.
                let q21 = diagonal_part(&swapped, TwistVariant::F, k, l)?;
                diagonal.set(idx(l, k), idx(l, k), q21.div(&diagonal_part(rep, TwistVariant::F, l, k)?)?);
                for m in 0..=l.min(n2 - k) {
                    let mut e = BracketProduct::factorial(m as u32).inv()?;
                    for j in 1..=m {
                        e = e.mul(&br(l - j + 1)).mul(&br(n2 - k - j + 1)).times_bracket(g(rep, k - l + j), -1)?;
                    }
                    upper.set(idx(l - m, k + m), idx(l, k), e);
                }
                for m in 0..=k.min(n1 - l) {
                    let mut e = BracketProduct::factorial(m as u32).inv()?;
                    for j in 1..=m {
                        e = e.mul(&br(n1 - l - j + 1)).mul(&br(k - j + 1)).times_bracket(g(rep, k - l - 2 * m + j), -1)?;
                    }
                    lower.set(idx(l + m, k - m), idx(l, k), e);
                }
            }
        }
        Ok(GaussR { upper, diagonal, lower })
    }

    pub fn product(&self, rep: &TensorRep) -> OpMatrix<Scalar> {
        let b = rep.bracket();
        let s = |m: &OpMatrix<BracketProduct>| m.map(|p| p.to_scalar(b));
        s(&self.upper).mul(&s(&self.diagonal)).mul(&s(&self.lower))
    }

    pub fn eval(&self, ev: &impl Evaluator) -> Result<OpMatrix<BigRational>, EvalError> {
        let e = |m: &OpMatrix<BracketProduct>| m.try_map(|p| p.eval(ev));
        Ok(e(&self.upper)?.mul(&e(&self.diagonal)?).mul(&e(&self.lower)?))
    }
}

/// `R₀` from its q-Gamma form, `Q̂₁₂ Q₁₂`.
pub fn qgamma_r0(rep: &TensorRep) -> Result<OpMatrix<BracketProduct>, Error> {
    require_pair(rep)?;
    let dims = rep.dims();
    let n = rep.dim();
    let mut out = factored_zeros(n, n);
    for l in 0..dims[0] as i64 {
        for k in 0..dims[1] as i64 {
            let hat = qgamma_diagonal(rep, TwistVariant::FHat, l, k)?;
            let plain = qgamma_diagonal(rep, TwistVariant::F, l, k)?;
            let i = rep.index(&[l as usize, k as usize]);
            out.set(i, i, hat.mul(&plain).inv()?);
        }
    }
    Ok(out)
}

/// `F₂₁` on `V₁⊗V₂`: the twist of the swapped product, conjugated by the flip.
pub fn twist_21(rep: &TensorRep, v: TwistVariant) -> Result<(OpMatrix<Scalar>, OpMatrix<Scalar>), Error> {
    let t = Twist::build(&rep.swapped(), v)?;
    let (d1, d2) = (rep.site(0).dim(), rep.site(1).dim());
    Ok((flip_conjugate(&t.forward_scalar(), d1, d2), flip_conjugate(&t.inverse_scalar(), d1, d2)))
}

/// `F₂₁⁻¹ F₁₂` for the given twist.
pub fn r_from_twists(rep: &TensorRep, v: TwistVariant) -> Result<OpMatrix<Scalar>, Error> {
    let (_, f21_inv) = twist_21(rep, v)?;
    Ok(f21_inv.mul(&Twist::build(rep, v)?.forward_scalar()))
}

pub fn r_matrix(rep: &TensorRep) -> Result<OpMatrix<Scalar>, Error> {
    Ok(GaussR::build(rep)?.product(rep))
}

/// `R₂₁ = P·R(V₂⊗V₁)·P`.
pub fn r_21(rep: &TensorRep) -> Result<OpMatrix<Scalar>, Error> {
    let r = r_matrix(&rep.swapped())?;
    Ok(flip_conjugate(&r, rep.site(0).dim(), rep.site(1).dim()))
}

/// `R₂₁ R₁₂ = 1`.
pub fn is_unitary(rep: &TensorRep) -> Result<bool, Error> {
    Ok(r_21(rep)?.mul(&r_matrix(rep)?).is_identity())
}

/// Generators for which `R·Δ(X) ≠ Δ^op(X)·R`.
pub fn cocommutativity_failures(rep: &TensorRep, u: &AffineExpr) -> Result<Vec<Gen>, Error> {
    let r = r_matrix(rep)?;
    let mut bad = Vec::new();
    for gen in Gen::ALL {
        if r.mul(&rep.delta_op_scalar(gen, u)?) != rep.delta_opposite(gen, u)?.mul(&r) {
            bad.push(gen);
        }
    }
    Ok(bad)
}

/// `F̃₂₁⁻¹ F̃₁₂ = R₂₁|δ₁↔δ₂`, and the same for the hatted tilde twist.
pub fn tilde_relation_holds(rep: &TensorRep, v: TwistVariant) -> Result<bool, Error> {
    Ok(r_from_twists(rep, v)? == r_21(&rep.delta_swapped())?)
}

/// `F̃₁₂⁻¹ = F₂₁⁻¹|δ₁↔δ₂`.
pub fn tilde_inverse_relation_holds(rep: &TensorRep) -> Result<bool, Error> {
    let tilde = Twist::build(rep, TwistVariant::FTilde)?.inverse_scalar();
    Ok(tilde == twist_21(&rep.delta_swapped(), TwistVariant::F)?.1)
}

/// Pairwise R-matrices of a three-site product, embedded.
fn pairwise<T: Ring>(rep: &TensorRep, mut build: impl FnMut(&TensorRep) -> Result<OpMatrix<T>, Error>) -> Result<[OpMatrix<T>; 3], Error> {
    if rep.len() != 3 {
        return Err(Error::Rep(format!("Yang-Baxter needs three sites, found {}", rep.len())));
    }
    let dims = rep.dims();
    let sub = |i: usize, j: usize| TensorRep::pair(*rep.site(i), *rep.site(j));
    let r12 = embed_two(&build(&sub(0, 1)?)?, &dims, 0, 1);
    let r13 = embed_two(&build(&sub(0, 2)?)?, &dims, 0, 2);
    let r23 = embed_two(&build(&sub(1, 2)?)?, &dims, 1, 2);
    Ok([r12, r13, r23])
}

/// `R₁₂ R₁₃ R₂₃ = R₂₃ R₁₃ R₁₂`, symbolically.
pub fn ybe_holds(rep: &TensorRep) -> Result<bool, Error> {
    let [r12, r13, r23] = pairwise(rep, r_matrix)?;
    Ok(r12.mul(&r13).mul(&r23) == r23.mul(&r13).mul(&r12))
}

/// The same relation with exact rational entries at a point.
pub fn ybe_holds_at(rep: &TensorRep, ev: &impl Evaluator) -> Result<bool, Error> {
    let [r12, r13, r23] = pairwise(rep, |r| Ok(GaussR::build(r)?.eval(ev)?))?;
    Ok(r12.mul(&r13).mul(&r23) == r23.mul(&r13).mul(&r12))
}

/// How the spin-½ R-matrix relates to the fundamental trigonometric one.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct FundamentalMatch {
    /// `x = sign·(δ₁−δ₂)`.
    pub sign: i64,
    /// Whether the comparison needs the flip `P·R·P`.
    pub flipped: bool,
}

/// Searches the conventions `x = ±d`, with and without the flip, under which
/// `R` on `V_½⊗V_½` equals `R(z = q^x)` in the basis `11, 12, 21, 22`.
pub fn compare_fundamental(rep: &TensorRep) -> Result<Option<FundamentalMatch>, Error> {
    require_pair(rep)?;
    if rep.dims() != [2, 2] {
        return Err(Error::Rep("the fundamental comparison needs two spin-½ sites".into()));
    }
    let r = r_matrix(rep)?;
    let d = rep.d_expr();
    for sign in [1, -1] {
        let x = if sign == 1 { d } else { -d };
        let fund = rep.realize(&fundamental_r(&x));
        for flipped in [false, true] {
            let cand = if flipped { flip_conjugate(&fund, 2, 2) } else { fund.clone() };
            if cand == r {
                return Ok(Some(FundamentalMatch { sign, flipped }));
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rep::EvalRep;
    use crate::scalar::{Bracket, ParamSymbol, QPoint};

    fn site(twice: i64, p: ParamSymbol, b: Bracket) -> EvalRep {
        EvalRep::new(HalfInt::from_twice(twice), p, b).unwrap()
    }

    fn pair(a: i64, b: i64) -> TensorRep {
        TensorRep::pair(site(a, ParamSymbol::Delta1, Bracket::Quantum), site(b, ParamSymbol::Delta2, Bracket::Quantum)).unwrap()
    }

    #[test]
    fn gauss_product_equals_twist_quotient() {
        for (a, b) in [(1, 1), (1, 2), (2, 1), (2, 2)] {
            let rep = pair(a, b);
            let r = r_matrix(&rep).unwrap();
            assert_eq!(r, r_from_twists(&rep, TwistVariant::F).unwrap(), "{a}/2 ⊗ {b}/2");
            assert_eq!(r, r_from_twists(&rep, TwistVariant::FHat).unwrap(), "hat {a}/2 ⊗ {b}/2");
            assert!(r.get(0, 0).is_one());
        }
    }

    #[test]
    fn tilde_twists_give_the_flipped_r_matrix() {
        for (a, b) in [(1, 1), (1, 2), (2, 3)] {
            let rep = pair(a, b);
            assert!(tilde_relation_holds(&rep, TwistVariant::FTilde).unwrap());
            assert!(tilde_relation_holds(&rep, TwistVariant::FHatTilde).unwrap());
            assert!(tilde_inverse_relation_holds(&rep).unwrap());
        }
    }

    #[test]
    fn r0_gamma_form() {
        let rep = pair(2, 3);
        let g = GaussR::build(&rep).unwrap();
        let gamma = qgamma_r0(&rep).unwrap();
        assert_eq!(rep.realize(&g.diagonal), rep.realize(&gamma));
    }

    #[test]
    fn unitarity_and_intertwining() {
        let u = AffineExpr::param(ParamSymbol::U);
        for (a, b) in [(1, 1), (1, 2), (2, 2)] {
            let rep = pair(a, b);
            assert!(is_unitary(&rep).unwrap());
            assert_eq!(cocommutativity_failures(&rep, &u).unwrap(), vec![]);
        }
    }

    #[test]
    fn yang_baxter_symbolic() {
        for b in [Bracket::Quantum, Bracket::Classical] {
            let rep = TensorRep::new(vec![site(1, ParamSymbol::Delta1, b), site(1, ParamSymbol::Delta2, b), site(2, ParamSymbol::Delta3, b)])
                .unwrap();
            assert!(ybe_holds(&rep).unwrap());
        }
    }

    #[test]
    fn yang_baxter_numeric() {
        let r = |n: i64, d: i64| BigRational::new(n.into(), d.into());
        let rep = TensorRep::new(vec![
            site(1, ParamSymbol::Delta1, Bracket::Quantum),
            site(2, ParamSymbol::Delta2, Bracket::Quantum),
            site(1, ParamSymbol::Delta3, Bracket::Quantum),
        ])
        .unwrap();
        // q = (3/2)^24 keeps every q-power of these parameters rational.
        let pt = QPoint::new(r(3, 2), 24).with(ParamSymbol::Delta1, r(1, 3)).with(ParamSymbol::Delta2, r(-5, 4)).with(ParamSymbol::Delta3, r(2, 1));
        assert!(ybe_holds_at(&rep, &pt).unwrap());
    }

    #[test]
    fn fundamental_convention() {
        let m = compare_fundamental(&pair(1, 1)).unwrap();
        assert!(m.is_some(), "no convention matched");
    }
}
