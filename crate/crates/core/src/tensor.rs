//! Tensor products of evaluation representations and the coproduct of the
//! generating matrix `T(u)`.

use crate::error::Error;
use crate::linalg::{flip_conjugate, join_index, split_index, OpMatrix};
use crate::rep::{EvalRep, Gen};
use crate::scalar::{AffineExpr, Bracket, BracketProduct, HalfInt, Scalar};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TensorRep {
    sites: Vec<EvalRep>,
}

impl TensorRep {
    pub fn new(sites: Vec<EvalRep>) -> Result<Self, Error> {
        let Some(first) = sites.first() else {
            return Err(Error::Rep("empty tensor product".into()));
        };
        if sites.iter().any(|s| s.bracket() != first.bracket()) {
            return Err(Error::Rep("sites use different brackets".into()));
        }
        Ok(TensorRep { sites })
    }

    pub fn pair(a: EvalRep, b: EvalRep) -> Result<Self, Error> {
        Self::new(vec![a, b])
    }

    pub fn sites(&self) -> &[EvalRep] {
        &self.sites
    }

    pub fn site(&self, i: usize) -> &EvalRep {
        &self.sites[i]
    }

    pub fn len(&self) -> usize {
        self.sites.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sites.is_empty()
    }

    pub fn bracket(&self) -> Bracket {
        self.sites[0].bracket()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.sites.iter().map(EvalRep::dim).collect()
    }

    pub fn dim(&self) -> usize {
        self.dims().iter().product()
    }

    /// The sites in reverse order.
    pub fn swapped(&self) -> Self {
        TensorRep { sites: self.sites.iter().rev().copied().collect() }
    }

    /// The first two sites with their evaluation parameters exchanged.
    pub fn delta_swapped(&self) -> Self {
        let mut sites = self.sites.clone();
        let (a, b) = (sites[0].delta(), sites[1].delta());
        sites[0] = sites[0].with_delta(b);
        sites[1] = sites[1].with_delta(a);
        TensorRep { sites }
    }

    /// `d = δ₁ − δ₂` for the first two sites.
    pub fn d_expr(&self) -> AffineExpr {
        self.sites[0].delta_expr() - self.sites[1].delta_expr()
    }

    pub fn index(&self, digits: &[usize]) -> usize {
        join_index(digits, &self.dims())
    }

    pub fn digits(&self, idx: usize) -> Vec<usize> {
        split_index(idx, &self.dims())
    }

    pub fn realize(&self, m: &OpMatrix<BracketProduct>) -> OpMatrix<Scalar> {
        let b = self.bracket();
        m.map(|p| p.to_scalar(b))
    }

    fn require_pair(&self) -> Result<(&EvalRep, &EvalRep), Error> {
        match self.sites.as_slice() {
            [a, b] => Ok((a, b)),
            _ => Err(Error::Rep(format!("expected two sites, found {}", self.sites.len()))),
        }
    }

    /// `H⊗1 − 1⊗H` on `|ℓ,k⟩`: `λ₁ − λ₂ + k − ℓ`.
    pub fn weight_difference(&self, l: i64, k: i64) -> HalfInt {
        self.sites[0].lambda() - self.sites[1].lambda() + HalfInt::from_int(k - l)
    }

    /// The coproduct of `T^i_j(u)` on two sites from its explicit action on
    /// the basis.
    pub fn delta_op(&self, g: Gen, u: &AffineExpr) -> Result<OpMatrix<BracketProduct>, Error> {
        let (s1, s2) = self.require_pair()?;
        let (n1, n2) = (s1.two_lambda(), s2.two_lambda());
        let dims = self.dims();
        let n = self.dim();
        let br = |x: i64| BracketProduct::bracket(AffineExpr::constant(HalfInt::from_int(x)));
        let mut out = factored_zeros(n, n);
        let mut put = |l: i64, k: i64, to: (i64, i64), v: BracketProduct| {
            if (0..=n1).contains(&to.0) && (0..=n2).contains(&to.1) && !v.is_zero() {
                let col = join_index(&[l as usize, k as usize], &dims);
                let row = join_index(&[to.0 as usize, to.1 as usize], &dims);
                out.set(row, col, v);
            }
        };
        for l in 0..=n1 {
            for k in 0..=n2 {
                let a1 = BracketProduct::bracket(s1.a_k(u, l));
                let d1 = BracketProduct::bracket(s1.d_k(u, l));
                let a2 = BracketProduct::bracket(s2.a_k(u, k));
                let d2 = BracketProduct::bracket(s2.d_k(u, k));
                match g {
                    Gen::A => {
                        put(l, k, (l, k), a1.mul(&a2));
                        put(l, k, (l - 1, k + 1), br(l).mul(&br(n2 - k)));
                    }
                    Gen::B => {
                        put(l, k, (l + 1, k), a2.mul(&br(n1 - l)));
                        put(l, k, (l, k + 1), d1.mul(&br(n2 - k)));
                    }
                    Gen::C => {
                        put(l, k, (l, k - 1), a1.mul(&br(k)));
                        put(l, k, (l - 1, k), d2.mul(&br(l)));
                    }
                    Gen::D => {
                        put(l, k, (l + 1, k - 1), br(n1 - l).mul(&br(k)));
                        put(l, k, (l, k), d1.mul(&d2));
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn delta_op_scalar(&self, g: Gen, u: &AffineExpr) -> Result<OpMatrix<Scalar>, Error> {
        Ok(self.realize(&self.delta_op(g, u)?))
    }

    /// `Δ(T^i_j) = Σ_k Δ(T^k_j) ⊗ T^i_k`, nested from the left over all sites.
    pub fn delta_op_general(&self, g: Gen, u: &AffineExpr) -> OpMatrix<Scalar> {
        let (i, j) = g.indices();
        self.left_nested(self.sites.len(), i, j, u)
    }

    fn left_nested(&self, upto: usize, i: usize, j: usize, u: &AffineExpr) -> OpMatrix<Scalar> {
        let last = &self.sites[upto - 1];
        if upto == 1 {
            return last.op(Gen::from_indices(i, j), u);
        }
        let mut acc: Option<OpMatrix<Scalar>> = None;
        for k in 1..=2 {
            let term = self.left_nested(upto - 1, k, j, u).kron(&last.op(Gen::from_indices(i, k), u));
            acc = Some(match acc {
                None => term,
                Some(a) => a.add(&term),
            });
        }
        acc.expect("two terms")
    }

    /// The same coproduct nested from the right: `Σ_k T^k_j ⊗ Δ(T^i_k)`.
    pub fn delta_op_right_nested(&self, g: Gen, u: &AffineExpr) -> OpMatrix<Scalar> {
        let (i, j) = g.indices();
        self.right_nested(0, i, j, u)
    }

    fn right_nested(&self, from: usize, i: usize, j: usize, u: &AffineExpr) -> OpMatrix<Scalar> {
        let first = &self.sites[from];
        if from + 1 == self.sites.len() {
            return first.op(Gen::from_indices(i, j), u);
        }
        let mut acc: Option<OpMatrix<Scalar>> = None;
        for k in 1..=2 {
            let term = first.op(Gen::from_indices(k, j), u).kron(&self.right_nested(from + 1, i, k, u));
            acc = Some(match acc {
                None => term,
                Some(a) => a.add(&term),
            });
        }
        acc.expect("two terms")
    }

    /// `Δ^op(T^i_j)` on `V₁⊗V₂`, obtained as `P·Δ(T^i_j)·P` on `V₂⊗V₁`.
    pub fn delta_opposite(&self, g: Gen, u: &AffineExpr) -> Result<OpMatrix<Scalar>, Error> {
        let (s1, s2) = self.require_pair()?;
        let m = self.swapped().delta_op_scalar(g, u)?;
        Ok(flip_conjugate(&m, s1.dim(), s2.dim()))
    }
}

pub fn factored_zeros(rows: usize, cols: usize) -> OpMatrix<BracketProduct> {
    OpMatrix::from_fn(rows, cols, |_, _| BracketProduct::zero())
}

/// The fundamental R-matrix in the basis `11, 12, 21, 22` at spectral
/// difference `x` (so `z = q^x`).
pub fn fundamental_r(x: &AffineExpr) -> OpMatrix<BracketProduct> {
    let mut r = factored_zeros(4, 4);
    let one = BracketProduct::one();
    r.set(0, 0, one.clone());
    r.set(3, 3, one);
    let den = BracketProduct::bracket(x.plus(HalfInt::ONE)).inv().expect("no pole");
    let diag = BracketProduct::bracket(*x).mul(&den);
    r.set(1, 1, diag.clone());
    r.set(2, 2, diag);
    r.set(1, 2, den.clone());
    r.set(2, 1, den);
    r
}

/// Components `(i, j, p, q)` (from 1) at which
/// `R^{ij}_{kℓ}(v−u) T^k_p(v) T^ℓ_q(u) = T^j_ℓ(u) T^i_k(v) R^{kℓ}_{pq}(v−u)`
/// fails on `rep` with the nested coproduct.
pub fn rtt_failures(rep: &TensorRep, u: &AffineExpr, v: &AffineExpr) -> Vec<(usize, usize, usize, usize)> {
    let r = rep.realize(&fundamental_r(&(*v - *u)));
    let t = |at: &AffineExpr| -> Vec<OpMatrix<Scalar>> { Gen::ALL.iter().map(|&g| rep.delta_op_general(g, at)).collect() };
    let (tu, tv) = (t(u), t(v));
    let pair = |i: usize, j: usize| 2 * (i - 1) + (j - 1);
    fn entry(m: &[OpMatrix<Scalar>], i: usize, j: usize) -> &OpMatrix<Scalar> {
        &m[2 * (i - 1) + (j - 1)]
    }
    let n = rep.dim();
    let mut bad = Vec::new();
    for i in 1..=2 {
        for j in 1..=2 {
            for p in 1..=2 {
                for q in 1..=2 {
                    let mut lhs = OpMatrix::<Scalar>::zeros(n, n);
                    let mut rhs = OpMatrix::<Scalar>::zeros(n, n);
                    for k in 1..=2 {
                        for l in 1..=2 {
                            let a = r.get(pair(i, j), pair(k, l));
                            if !a.is_zero() {
                                lhs = lhs.add(&entry(&tv, k, p).mul(entry(&tu, l, q)).scale(a));
                            }
                            let b = r.get(pair(k, l), pair(p, q));
                            if !b.is_zero() {
                                rhs = rhs.add(&entry(&tu, j, l).mul(entry(&tv, i, k)).scale(b));
                            }
                        }
                    }
                    if lhs != rhs {
                        bad.push((i, j, p, q));
                    }
                }
            }
        }
    }
    bad
}
