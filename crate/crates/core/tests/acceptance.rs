//! Acceptance run: one PASS/FAIL line per criterion.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qtwist::limit::{decades, erasure_matches, limit_check};
use qtwist::linalg::OpMatrix;
use qtwist::rep::{is_reducible, EvalRep, Gen};
use qtwist::rmatrix::{cocommutativity_failures, is_unitary, r_from_twists, r_matrix, twist_21, ybe_holds, ybe_holds_at};
use qtwist::scalar::{ClassicalPoint, QPoint};
use qtwist::tables::{is_eigen_column, reference_tables, spin_pair};
use qtwist::tensor::{rtt_failures, TensorRep};
use qtwist::twist::{
    forward_obstruction_w, inverse_obstruction_w, q_identity_failures, twisted_closed_form, Twist, TwistVariant,
};
use qtwist::{AffineExpr, Bracket, BracketProduct, Error, EvalError, HalfInt, ParamSymbol, Scalar};

/// Deviation bound at the smallest ε.
const LIMIT_TOLERANCE: f64 = 1e-4;
/// Slack on the `C·ε` bound extrapolated from the two largest ε.
const LIMIT_SLACK: f64 = 1.0;
const SEED: u64 = 42;
const YBE_POINTS: usize = 10;

type Outcome = Result<String, String>;

fn spins(max_twice: i64) -> impl Iterator<Item = (i64, i64)> {
    (0..=max_twice).flat_map(move |a| (0..=max_twice).map(move |b| (a, b)))
}

fn pair(a: i64, b: i64, bracket: Bracket) -> TensorRep {
    spin_pair(HalfInt::from_twice(a), HalfInt::from_twice(b), bracket).unwrap()
}

fn triple(t: [i64; 3], bracket: Bracket) -> TensorRep {
    let ds = [ParamSymbol::Delta1, ParamSymbol::Delta2, ParamSymbol::Delta3];
    TensorRep::new(t.iter().zip(ds).map(|(&s, d)| EvalRep::new(HalfInt::from_twice(s), d, bracket).unwrap()).collect()).unwrap()
}

fn u() -> AffineExpr {
    AffineExpr::param(ParamSymbol::U)
}

fn r(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err(e: Error) -> String {
    e.to_string()
}

fn criterion_1() -> Outcome {
    let tables = reference_tables();
    let mut entries = 0;
    let mut errata = 0;
    let u = u();
    for t in &tables {
        entries += t.entries.len();
        let left = t.mismatches(true).map_err(err)?;
        ensure(left.is_empty(), || format!("{}⊗{}: mismatches at {left:?}", t.lambda1, t.lambda2))?;
        let literal = t.mismatches(false).map_err(err)?;
        for e in &t.errata {
            errata += 1;
            ensure(literal == vec![(e.row, e.col)], || format!("{}⊗{}: literal mismatches {literal:?}", t.lambda1, t.lambda2))?;
            let rep = t.rep();
            ensure(!is_eigen_column(&rep, &t.matrix(false), e.col, &u).map_err(err)?, || "printed entry is consistent".into())?;
            ensure(is_eigen_column(&rep, &t.matrix(true), e.col, &u).map_err(err)?, || "corrected entry is inconsistent".into())?;
        }
        if t.errata.is_empty() {
            ensure(literal.is_empty(), || format!("{}⊗{}: literal mismatches {literal:?}", t.lambda1, t.lambda2))?;
        }
    }
    Ok(format!(
        "{} tables, all {entries} transcribed entries equal after {errata} replacement (the printed value fails the ΔD eigenvector test, the replacement passes)",
        tables.len()
    ))
}

fn criterion_2() -> Outcome {
    let u = u();
    let mut n = 0;
    for (a, b) in spins(3) {
        let rep = pair(a, b, Bracket::Quantum);
        let fi = Twist::build(&rep, TwistVariant::F).map_err(err)?.inverse_scalar();
        let dd = rep.delta_op_scalar(Gen::D, &u).map_err(err)?;
        let eig: Vec<Scalar> = (0..rep.dim())
            .map(|i| {
                let dg = rep.digits(i);
                BracketProduct::bracket(rep.site(0).d_k(&u, dg[0] as i64))
                    .mul(&BracketProduct::bracket(rep.site(1).d_k(&u, dg[1] as i64)))
                    .to_scalar(Bracket::Quantum)
            })
            .collect();
        ensure(dd.mul(&fi) == fi.mul(&OpMatrix::diagonal(&eig)), || format!("{a}/2 ⊗ {b}/2"))?;
        n += rep.dim();
    }
    Ok(format!("{n} columns over 16 spin pairs are ΔD(u)-eigenvectors with eigenvalue d_ℓ d_k"))
}

fn criterion_3() -> Outcome {
    let u = u();
    let mut forms = 0;
    let mut pairs = 0;
    for (a, b) in spins(2) {
        let rep = pair(a, b, Bracket::Quantum);
        for v in TwistVariant::ALL {
            let t = Twist::build(&rep, v).map_err(err)?;
            let (f21, f21_inv) = twist_21(&rep, v).map_err(err)?;
            for g in Gen::ALL {
                let twisted = t.twisted_coproduct(g, &u).map_err(err)?;
                if let Some(cf) = twisted_closed_form(&rep, v, g, &u).map_err(err)? {
                    ensure(twisted == cf, || format!("{v} {g} on {a}/2 ⊗ {b}/2: closed form"))?;
                    forms += 1;
                }
                let op = f21.mul(&rep.delta_opposite(g, &u).map_err(err)?).mul(&f21_inv);
                ensure(twisted == op, || format!("{v} {g} on {a}/2 ⊗ {b}/2: F₂₁Δ^opF₂₁⁻¹"))?;
                pairs += 1;
            }
        }
    }
    Ok(format!("{forms} closed forms and {pairs} F₁₂ΔF₁₂⁻¹ = F₂₁Δ^opF₂₁⁻¹ checks"))
}

fn criterion_4() -> Outcome {
    let u = u();
    for b in [Bracket::Quantum, Bracket::Classical] {
        for (x, y) in spins(4) {
            let bad = q_identity_failures(&pair(x, y, b), &u).map_err(err)?;
            ensure(bad.is_empty(), || format!("{b:?} {x}/2 ⊗ {y}/2: {}", bad.join(", ")))?;
        }
    }
    Ok("all four families, 2λᵢ ≤ 4, q-bracket and classical bracket".into())
}

fn criterion_5() -> Outcome {
    let u = u();
    for (a, b) in spins(2) {
        let rep = pair(a, b, Bracket::Quantum);
        let r = r_matrix(&rep).map_err(err)?;
        let tag = format!("{a}/2 ⊗ {b}/2");
        ensure(r == r_from_twists(&rep, TwistVariant::F).map_err(err)?, || format!("{tag}: R₊R₀R₋ ≠ F₂₁⁻¹F₁₂"))?;
        ensure(r == r_from_twists(&rep, TwistVariant::FHat).map_err(err)?, || format!("{tag}: F̂"))?;
        ensure((0..rep.dim()).all(|i| if i == 0 { r.get(0, 0).is_one() } else { r.get(i, 0).is_zero() }), || format!("{tag}: R|0,0⟩"))?;
        ensure(is_unitary(&rep).map_err(err)?, || format!("{tag}: R₂₁R₁₂ ≠ 1"))?;
        let bad = cocommutativity_failures(&rep, &u).map_err(err)?;
        ensure(bad.is_empty(), || format!("{tag}: RΔR⁻¹ ≠ Δ^op for {bad:?}"))?;
    }
    Ok("9 spin pairs: Gauss product, F and F̂ quotients, normalization, R₂₁ = R⁻¹, RΔ = Δ^opR".into())
}

fn lcm_order(vals: &[BigRational]) -> u32 {
    let l = vals.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    u32::try_from(l * 2u32).unwrap()
}

fn random_point(rng: &mut ChaCha8Rng) -> QPoint {
    let mut rat = |lim: i64| r(rng.gen_range(-lim..=lim), rng.gen_range(1..=4));
    let deltas = [rat(12), rat(12), rat(12)];
    let base = r(rng.gen_range(2..=7), rng.gen_range(1..=5));
    let base = if base.is_one() { r(3, 2) } else { base };
    let order = lcm_order(&deltas);
    let [a, b, c] = deltas;
    QPoint::new(base, order).with(ParamSymbol::Delta1, a).with(ParamSymbol::Delta2, b).with(ParamSymbol::Delta3, c)
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let half = triple([1, 1, 1], Bracket::Quantum);
    let mut done = 0;
    let mut skipped = 0;
    while done < YBE_POINTS {
        let pt = random_point(&mut rng);
        match ybe_holds_at(&half, &pt) {
            Ok(true) => done += 1,
            Ok(false) => return Err(format!("½⊗½⊗½ fails at {pt:?}")),
            Err(Error::Eval(EvalError::BracketPole(_))) => skipped += 1,
            Err(e) => return Err(err(e)),
        }
    }
    ensure(ybe_holds(&half).map_err(err)?, || "½⊗½⊗½ symbolic".into())?;
    let mut mixed = 0;
    for a in 1..=3 {
        for b in 1..=3 {
            for c in 1..=3 {
                let rep = triple([a, b, c], Bracket::Quantum);
                loop {
                    let pt = random_point(&mut rng);
                    match ybe_holds_at(&rep, &pt) {
                        Ok(true) => break,
                        Ok(false) => return Err(format!("{a}/2⊗{b}/2⊗{c}/2 fails at {pt:?}")),
                        Err(Error::Eval(EvalError::BracketPole(_))) => skipped += 1,
                        Err(e) => return Err(err(e)),
                    }
                }
                mixed += 1;
            }
        }
    }
    Ok(format!(
        "seed {SEED}: ½⊗½⊗½ exact at {YBE_POINTS} points and symbolic in δ₁−δ₂, δ₂−δ₃; {mixed} mixed-spin triples exact ({skipped} pole draws redrawn)"
    ))
}

fn criterion_7() -> Outcome {
    let (u, v) = (u(), AffineExpr::param(ParamSymbol::V));
    for s in 0..=2 {
        let rep = TensorRep::new(vec![EvalRep::new(HalfInt::from_twice(s), ParamSymbol::Delta1, Bracket::Quantum).unwrap()]).unwrap();
        let bad = rtt_failures(&rep, &u, &v);
        ensure(bad.is_empty(), || format!("single site 2λ={s}: {bad:?}"))?;
    }
    for (a, b) in spins(2) {
        let bad = rtt_failures(&pair(a, b, Bracket::Quantum), &u, &v);
        ensure(bad.is_empty(), || format!("two sites {a}/2 ⊗ {b}/2: {bad:?}"))?;
    }
    Ok("16 components, 3 single-site and 9 two-site representations, symbolic in u, v, δ".into())
}

fn criterion_8() -> Outcome {
    let h = HalfInt::HALF;
    let rep = pair(1, 1, Bracket::Quantum);
    let f = Twist::build(&rep, TwistVariant::F).map_err(err)?;
    // q = 2^6 so that d = 1/3 stays rational; w₁²/w₂² = q^{2d}.
    let base = r(2, 1);
    let order = 6;
    let q = QPoint::new(base.clone(), order).q();
    let cases: [(&str, BigRational, Option<i64>, Option<i64>); 4] = [
        ("q²", r(1, 1), Some(1), None),
        ("q⁰", r(0, 1), None, Some(2)),
        ("generic", r(1, 3), None, None),
        ("q⁻²", r(-1, 1), None, None),
    ];
    let mut lines = Vec::new();
    for (name, d, want_inv, want_fwd) in cases {
        let ratio_sq = QPoint::new(base.clone(), order).with(ParamSymbol::Delta1, d.clone()).with(ParamSymbol::Delta2, r(0, 1));
        let ratio_val = {
            use qtwist::scalar::Evaluator;
            ratio_sq.monomial(&qtwist::scalar::bracket::q_power(&AffineExpr::delta_diff().scale(2))).map_err(|e| e.to_string())?
        };
        let inv = inverse_obstruction_w(h, h, &ratio_val, &q);
        let fwd = forward_obstruction_w(h, h, &ratio_val, &q);
        ensure(inv == want_inv && fwd == want_fwd, || format!("{name}: predicates gave {inv:?}, {fwd:?}"))?;
        let num_inv = f.eval_inverse(&ratio_sq);
        let num_fwd = f.eval_forward(&ratio_sq);
        let pole = |x: &Result<_, EvalError>| matches!(x, Err(EvalError::BracketPole(_)));
        ensure(pole(&num_inv) == inv.is_some(), || format!("{name}: inverse numeric {num_inv:?}"))?;
        ensure(pole(&num_fwd) == fwd.is_some(), || format!("{name}: forward numeric {num_fwd:?}"))?;
        ensure(num_inv.is_ok() || pole(&num_inv), || format!("{name}: unexpected error"))?;
        let red = is_reducible(h, h, &d);
        if let Some(j) = inv {
            ensure(red == Some(j), || format!("{name}: inverse obstruction j={j} but reducibility {red:?}"))?;
        }
        lines.push(format!("{name}: F⁻¹ {}, F {}, reducible {}", tag(inv), tag(fwd), red.map_or("no".into(), |j| format!("j={j}"))));
    }
    Ok(lines.join("; "))
}

fn tag(o: Option<i64>) -> String {
    o.map_or("exists".into(), |j| format!("pole j={j}"))
}

fn criterion_9() -> Outcome {
    let points: [[BigRational; 2]; 3] = [[r(1, 3), r(0, 1)], [r(-3, 4), r(1, 2)], [r(2, 1), r(-2, 5)]];
    let eps = decades(3..=6);
    let mut worst: f64 = 0.0;
    let mut min_order = f64::INFINITY;
    for (a, b) in spins(2) {
        let rep = pair(a, b, Bracket::Quantum);
        for p in &points {
            let point: BTreeMap<_, _> = [(ParamSymbol::Delta1, p[0].clone()), (ParamSymbol::Delta2, p[1].clone())].into();
            let rep_l = limit_check(&rep, TwistVariant::F, &point, &eps).map_err(err)?;
            let devs: Vec<f64> = rep_l.samples.iter().map(|s| s.twist_deviation.max(s.r_deviation)).collect();
            let tag = format!("{a}/2 ⊗ {b}/2 at δ = ({}, {})", p[0], p[1]);
            ensure(devs.iter().all(|d| d.is_finite()), || format!("{tag}: non-finite deviation"))?;
            if devs.iter().all(|&d| d == 0.0) {
                continue;
            }
            ensure(devs.windows(2).all(|w| w[1] < w[0]), || format!("{tag}: not monotone {devs:?}"))?;
            let s = &rep_l.samples;
            let c = (devs[0] / s[0].eps).max(devs[1] / s[1].eps);
            let last = s.len() - 1;
            ensure(devs[last] <= LIMIT_SLACK * c * s[last].eps, || format!("{tag}: not O(ε): {devs:?}"))?;
            ensure(devs[last] < LIMIT_TOLERANCE, || format!("{tag}: deviation {} at ε=1e-6", devs[last]))?;
            worst = worst.max(devs[last]);
            min_order = min_order.min(rep_l.order);
        }
    }
    for (a, b) in spins(3) {
        for v in TwistVariant::ALL {
            ensure(erasure_matches(&pair(a, b, Bracket::Quantum), v).map_err(err)?, || format!("{v} {a}/2 ⊗ {b}/2: erasure"))?;
        }
    }
    // Classical R on three sites at rational points.
    for t in [[1, 1, 1], [1, 2, 1], [2, 2, 2]] {
        let rep = triple(t, Bracket::Classical);
        let pt = ClassicalPoint::new().with(ParamSymbol::Delta1, r(1, 3)).with(ParamSymbol::Delta2, r(-5, 2)).with(ParamSymbol::Delta3, r(7, 4));
        ensure(ybe_holds_at(&rep, &pt).map_err(err)?, || format!("classical YBE {t:?}"))?;
    }
    Ok(format!(
        "9 spin pairs × 3 points: max deviation {worst:.2e} at ε=1e-6 (< {LIMIT_TOLERANCE:.0e}), observed order ≥ {min_order:.2}; erasure equal for 2λᵢ ≤ 3; classical YBE holds"
    ))
}

fn main() {
    type Criterion = (&'static str, fn() -> Outcome);
    let criteria: [Criterion; 9] = [
        ("reference tables", criterion_1),
        ("ΔD eigenvectors", criterion_2),
        ("twisted coproducts", criterion_3),
        ("q-number identities", criterion_4),
        ("factorization and Gauss form", criterion_5),
        ("Yang-Baxter equation", criterion_6),
        ("RTT relation", criterion_7),
        ("existence boundary", criterion_8),
        ("q → 1 limit", criterion_9),
    ];
    let results: Vec<(Outcome, Duration)> = std::thread::scope(|s| {
        let handles: Vec<_> = criteria
            .iter()
            .map(|(_, f)| {
                s.spawn(move || {
                    let start = Instant::now();
                    (f(), start.elapsed())
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().unwrap_or_else(|_| (Err("panicked".into()), Duration::ZERO))).collect()
    });
    let mut failed = 0;
    for (i, ((name, _), (res, time))) in criteria.iter().zip(results).enumerate() {
        let secs = time.as_secs_f64();
        match res {
            Ok(detail) => println!("criterion {}: PASS  {name} ({secs:.1}s): {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {}: FAIL  {name} ({secs:.1}s): {detail}", i + 1);
            }
        }
    }
    if failed > 0 {
        eprintln!("{failed} criteria failed");
        std::process::exit(1);
    }
}
