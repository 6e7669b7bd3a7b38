use std::sync::OnceLock;

use num_rational::BigRational;
use proptest::prelude::*;

use qtwist::linalg::{flip_conjugate, OpMatrix};
use qtwist::rep::EvalRep;
use qtwist::rmatrix::{ybe_holds_at, GaussR};
use qtwist::scalar::QPoint;
use qtwist::tables::spin_pair;
use qtwist::tensor::TensorRep;
use qtwist::twist::{Twist, TwistVariant};
use qtwist::{Bracket, EvalError, HalfInt, ParamSymbol};

const SPINS: [(i64, i64); 4] = [(1, 1), (1, 2), (2, 1), (2, 2)];

fn twists() -> &'static Vec<Twist> {
    static CELL: OnceLock<Vec<Twist>> = OnceLock::new();
    CELL.get_or_init(|| {
        SPINS
            .iter()
            .flat_map(|&(a, b)| {
                let rep = spin_pair(HalfInt::from_twice(a), HalfInt::from_twice(b), Bracket::Quantum).unwrap();
                TwistVariant::ALL.map(|v| Twist::build(&rep, v).unwrap())
            })
            .collect()
    })
}

fn r_pairs() -> &'static Vec<(TensorRep, GaussR, GaussR)> {
    static CELL: OnceLock<Vec<(TensorRep, GaussR, GaussR)>> = OnceLock::new();
    CELL.get_or_init(|| {
        SPINS
            .iter()
            .map(|&(a, b)| {
                let rep = spin_pair(HalfInt::from_twice(a), HalfInt::from_twice(b), Bracket::Quantum).unwrap();
                let r = GaussR::build(&rep).unwrap();
                let swapped = GaussR::build(&rep.swapped()).unwrap();
                (rep, r, swapped)
            })
            .collect()
    })
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// A point with `q = base^order` and `δᵢ = nᵢ/dᵢ`, where `order` keeps every
/// power of `q` that appears rational.
fn point() -> impl Strategy<Value = QPoint> {
    (2i64..=6, 1i64..=4, -9i64..=9, 1i64..=3, -9i64..=9, 1i64..=3, -9i64..=9).prop_map(|(bn, bd, n1, d1, n2, d2, n3)| {
        let base = if bn == bd { rat(3, 2) } else { rat(bn, bd) };
        let order = 2 * (d1 * d2) as u32;
        QPoint::new(base, order)
            .with(ParamSymbol::Delta1, rat(n1, d1))
            .with(ParamSymbol::Delta2, rat(n2, d2))
            .with(ParamSymbol::Delta3, rat(n3, 1))
    })
}

fn is_pole<T>(r: &Result<T, EvalError>) -> bool {
    matches!(r, Err(EvalError::BracketPole(_)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn twist_times_inverse_is_identity(pt in point(), which in 0usize..16) {
        let t = &twists()[which];
        let (f, fi) = (t.eval_forward(&pt), t.eval_inverse(&pt));
        if let (Ok(f), Ok(fi)) = (&f, &fi) {
            prop_assert!(f.mul(fi).is_identity());
            prop_assert!(fi.mul(f).is_identity());
        } else {
            prop_assert!(is_pole(&f) || is_pole(&fi));
        }
    }

    #[test]
    fn numeric_twist_is_triangular(pt in point(), which in 0usize..16) {
        let t = &twists()[which];
        if let Ok(f) = t.eval_forward(&pt) {
            if t.variant().is_tilde() {
                prop_assert!(f.is_upper_triangular());
            } else {
                prop_assert!(f.is_lower_triangular());
            }
        }
    }

    #[test]
    fn r_is_unitary_at_points(pt in point(), which in 0usize..4) {
        let (rep, r, swapped) = &r_pairs()[which];
        let (d1, d2) = (rep.site(0).dim(), rep.site(1).dim());
        if let (Ok(r12), Ok(rs)) = (r.eval(&pt), swapped.eval(&pt)) {
            let r21: OpMatrix<BigRational> = flip_conjugate(&rs, d1, d2);
            prop_assert!(r21.mul(&r12).is_identity());
        }
    }

    #[test]
    fn ybe_at_random_points(pt in point()) {
        let site = |p| EvalRep::new(HalfInt::HALF, p, Bracket::Quantum).unwrap();
        let rep = TensorRep::new(vec![site(ParamSymbol::Delta1), site(ParamSymbol::Delta2), site(ParamSymbol::Delta3)]).unwrap();
        match ybe_holds_at(&rep, &pt) {
            Ok(ok) => prop_assert!(ok),
            Err(e) => prop_assert!(matches!(e, qtwist::Error::Eval(EvalError::BracketPole(_))), "{e}"),
        }
    }
}
