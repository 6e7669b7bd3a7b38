//! Verification suites behind `qtwist verify`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use qtwist::limit::{decades, erasure_matches, limit_check};
use qtwist::linalg::OpMatrix;
use qtwist::rep::{is_reducible, EvalRep, Gen};
use qtwist::rmatrix::{
    cocommutativity_failures, is_unitary, qgamma_r0, r_from_twists, r_matrix, tilde_inverse_relation_holds, tilde_relation_holds, twist_21,
    ybe_holds, ybe_holds_at, GaussR,
};
use qtwist::scalar::QPoint;
use qtwist::tables::{reference_tables, spin_pair};
use qtwist::tensor::{rtt_failures, TensorRep};
use qtwist::twist::{
    check_forward_exists, check_inverse_exists, diagonal_relation_failures, q_identity_failures, recursion_failures, twisted_closed_form, Twist,
    TwistVariant,
};
use qtwist::{AffineExpr, Bracket, BracketProduct, Error, EvalError, HalfInt, ParamSymbol, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, clap::ValueEnum)]
pub enum Suite {
    Tables,
    Identities,
    Twists,
    Rmatrix,
    Ybe,
    Limit,
    All,
}

impl Suite {
    const EACH: [Suite; 6] = [Suite::Tables, Suite::Identities, Suite::Twists, Suite::Rmatrix, Suite::Ybe, Suite::Limit];

    fn name(self) -> &'static str {
        match self {
            Suite::Tables => "tables",
            Suite::Identities => "identities",
            Suite::Twists => "twists",
            Suite::Rmatrix => "rmatrix",
            Suite::Ybe => "ybe",
            Suite::Limit => "limit",
            Suite::All => "all",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Mode {
    Symbolic,
    Numeric,
}

#[derive(Clone, Debug)]
pub struct Case {
    pub suite: &'static str,
    pub name: String,
    pub outcome: Result<String, String>,
}

pub struct Config {
    pub suite: Suite,
    pub max_dim: i64,
    pub seed: u64,
    pub mode: Mode,
}

type Check = Result<String, String>;

fn fail(e: Error) -> String {
    e.to_string()
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn pair(a: i64, b: i64, bracket: Bracket) -> TensorRep {
    spin_pair(HalfInt::from_twice(a), HalfInt::from_twice(b), bracket).expect("nonnegative spins")
}

fn label(a: i64, b: i64) -> String {
    format!("{} ⊗ {}", HalfInt::from_twice(a), HalfInt::from_twice(b))
}

fn pairs(max: i64) -> Vec<(i64, i64)> {
    (0..=max).flat_map(|a| (0..=max).map(move |b| (a, b))).collect()
}

fn u() -> AffineExpr {
    AffineExpr::param(ParamSymbol::U)
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn tables() -> Vec<(String, Check)> {
    let u = u();
    reference_tables()
        .into_iter()
        .map(|t| {
            let name = format!("{} ⊗ {}", t.lambda1, t.lambda2);
            let check = (|| {
                let left = t.mismatches(true).map_err(fail)?;
                ensure(left.is_empty(), || format!("entries differ at {left:?}"))?;
                if t.errata.is_empty() {
                    return Ok(format!("{} entries equal", t.entries.len()));
                }
                let rep = t.rep();
                for e in &t.errata {
                    let printed = qtwist::tables::is_eigen_column(&rep, &t.matrix(false), e.col, &u).map_err(fail)?;
                    let fixed = qtwist::tables::is_eigen_column(&rep, &t.matrix(true), e.col, &u).map_err(fail)?;
                    ensure(!printed && fixed, || "correction is not forced by the eigenvector property".into())?;
                }
                Ok(format!("{} entries equal, {} corrected", t.entries.len(), t.errata.len()))
            })();
            (name, check)
        })
        .collect()
}

fn identities(max: i64) -> Vec<(String, Check)> {
    let u = u();
    let mut out = Vec::new();
    for b in [Bracket::Quantum, Bracket::Classical] {
        for (x, y) in pairs(max) {
            let rep = pair(x, y, b);
            let check = (|| {
                let bad = q_identity_failures(&rep, &u).map_err(fail)?;
                ensure(bad.is_empty(), || bad.join("; "))?;
                let bad = diagonal_relation_failures(&rep).map_err(fail)?;
                ensure(bad.is_empty(), || format!("diagonal parts differ from Γ forms at {bad:?}"))?;
                for v in TwistVariant::ALL {
                    let bad = recursion_failures(&rep, v).map_err(fail)?;
                    ensure(bad.is_empty(), || format!("{v} recursion fails at {bad:?}"))?;
                }
                Ok("q-number families, Γ forms, recursions".to_string())
            })();
            let tag = if b == Bracket::Quantum { "" } else { " (classical)" };
            out.push((format!("{}{tag}", label(x, y)), check));
        }
    }
    out
}

fn twist_case(a: i64, b: i64) -> Check {
    let rep = pair(a, b, Bracket::Quantum);
    let u = u();
    let mut closed = 0;
    for v in TwistVariant::ALL {
        let t = Twist::build(&rep, v).map_err(fail)?;
        let (f, fi) = (t.forward_scalar(), t.inverse_scalar());
        ensure(f.mul(&fi).is_identity(), || format!("{v}·{v}⁻¹ ≠ 1"))?;
        let tri = if v.is_tilde() { f.is_upper_triangular() } else { f.is_lower_triangular() };
        ensure(tri, || format!("{v} has the wrong triangularity"))?;
        let (f21, f21_inv) = twist_21(&rep, v).map_err(fail)?;
        for g in Gen::ALL {
            let twisted = t.twisted_coproduct(g, &u).map_err(fail)?;
            if let Some(cf) = twisted_closed_form(&rep, v, g, &u).map_err(fail)? {
                ensure(twisted == cf, || format!("{v}: twisted Δ{g} differs from its closed form"))?;
                closed += 1;
            }
            let op = f21.mul(&rep.delta_opposite(g, &u).map_err(fail)?).mul(&f21_inv);
            ensure(twisted == op, || format!("{v}: twisted Δ{g} is not symmetric"))?;
        }
    }
    let fi = Twist::build(&rep, TwistVariant::F).map_err(fail)?.inverse_scalar();
    let dd = rep.delta_op_scalar(Gen::D, &u).map_err(fail)?;
    let eig: Vec<Scalar> = (0..rep.dim())
        .map(|i| {
            let dg = rep.digits(i);
            BracketProduct::bracket(rep.site(0).d_k(&u, dg[0] as i64))
                .mul(&BracketProduct::bracket(rep.site(1).d_k(&u, dg[1] as i64)))
                .to_scalar(Bracket::Quantum)
        })
        .collect();
    ensure(dd.mul(&fi) == fi.mul(&OpMatrix::diagonal(&eig)), || "F⁻¹ columns are not ΔD eigenvectors".into())?;
    Ok(format!("4 variants invertible and triangular, {closed} closed forms, ΔD eigenvectors"))
}

/// The existence predicates at `d = δ₁ − δ₂` against numeric poles.
fn existence_case(a: i64, b: i64) -> Check {
    let rep = pair(a, b, Bracket::Quantum);
    let t = Twist::build(&rep, TwistVariant::F).map_err(fail)?;
    let (l1, l2) = (HalfInt::from_twice(a), HalfInt::from_twice(b));
    let mut checked = 0;
    for twice_d in -(a + b + 2)..=(a + b + 2) {
        let d = rat(twice_d, 2);
        // With q = 9 every half-integer power of q is rational.
        let pt = QPoint::new(rat(3, 1), 2).with(ParamSymbol::Delta1, d.clone()).with(ParamSymbol::Delta2, rat(0, 1));
        let pole = |r: Result<OpMatrix<BigRational>, EvalError>| matches!(r, Err(EvalError::BracketPole(_)));
        let inv_blocked = check_inverse_exists(l1, l2, &d).is_err();
        let fwd_blocked = check_forward_exists(l1, l2, &d).is_err();
        ensure(pole(t.eval_inverse(&pt)) == inv_blocked, || format!("F⁻¹ at d = {d}: pole and predicate disagree"))?;
        // With a trivial factor the forward range 2 ≤ j ≤ 2λ₁+2λ₂ is read
        // literally and can flag points where F is the identity.
        let fwd_pole = pole(t.eval_forward(&pt));
        let fwd_ok = if a.min(b) == 0 { !fwd_pole || fwd_blocked } else { fwd_pole == fwd_blocked };
        ensure(fwd_ok, || format!("F at d = {d}: pole and predicate disagree"))?;
        if inv_blocked {
            ensure(is_reducible(l1, l2, &d).is_some(), || format!("F⁻¹ blocked at irreducible d = {d}"))?;
        }
        checked += 1;
    }
    Ok(format!("{checked} points of d agree with the existence predicates"))
}

fn twists(max: i64) -> Vec<(String, Check)> {
    let mut out: Vec<(String, Check)> = pairs(max).into_iter().map(|(a, b)| (label(a, b), twist_case(a, b))).collect();
    for (a, b) in pairs(max.min(2)) {
        out.push((format!("{} existence", label(a, b)), existence_case(a, b)));
    }
    out
}

fn rmatrix_case(a: i64, b: i64) -> Check {
    let rep = pair(a, b, Bracket::Quantum);
    let u = u();
    let v = AffineExpr::param(ParamSymbol::V);
    let r = r_matrix(&rep).map_err(fail)?;
    ensure(r == r_from_twists(&rep, TwistVariant::F).map_err(fail)?, || "R₊R₀R₋ ≠ F₂₁⁻¹F₁₂".into())?;
    ensure(r == r_from_twists(&rep, TwistVariant::FHat).map_err(fail)?, || "R₊R₀R₋ ≠ F̂₂₁⁻¹F̂₁₂".into())?;
    let g = GaussR::build(&rep).map_err(fail)?;
    ensure(g.diagonal == qgamma_r0(&rep).map_err(fail)?, || "R₀ differs from its Γ form".into())?;
    ensure((0..rep.dim()).all(|i| if i == 0 { r.get(0, 0).is_one() } else { r.get(i, 0).is_zero() }), || "R|0,0⟩ ≠ |0,0⟩".into())?;
    ensure(is_unitary(&rep).map_err(fail)?, || "R₂₁R₁₂ ≠ 1".into())?;
    let bad = cocommutativity_failures(&rep, &u).map_err(fail)?;
    ensure(bad.is_empty(), || format!("RΔ ≠ Δ^opR for {bad:?}"))?;
    for t in [TwistVariant::FTilde, TwistVariant::FHatTilde] {
        ensure(tilde_relation_holds(&rep, t).map_err(fail)?, || format!("{t}: quotient is not R₂₁ with δ₁ ↔ δ₂"))?;
    }
    ensure(tilde_inverse_relation_holds(&rep).map_err(fail)?, || "F̃₁₂⁻¹ ≠ F₂₁⁻¹ with δ₁ ↔ δ₂".into())?;
    let bad = rtt_failures(&rep, &u, &v);
    ensure(bad.is_empty(), || format!("RTT fails at {bad:?}"))?;
    Ok("Gauss form, normalization, unitarity, RΔ = Δ^opR, tilde relations, RTT".into())
}

fn rmatrix(max: i64) -> Vec<(String, Check)> {
    let u = u();
    let v = AffineExpr::param(ParamSymbol::V);
    let mut out: Vec<(String, Check)> = (0..=max)
        .map(|s| {
            let site = EvalRep::new(HalfInt::from_twice(s), ParamSymbol::Delta1, Bracket::Quantum).expect("valid spin");
            let rep = TensorRep::new(vec![site]).expect("one site");
            let bad = rtt_failures(&rep, &u, &v);
            let check = if bad.is_empty() { Ok("RTT".to_string()) } else { Err(format!("RTT fails at {bad:?}")) };
            (format!("{} single site", HalfInt::from_twice(s)), check)
        })
        .collect();
    out.extend(pairs(max).into_iter().map(|(a, b)| (label(a, b), rmatrix_case(a, b))));
    out
}

fn triple(t: [i64; 3], bracket: Bracket) -> TensorRep {
    let ds = [ParamSymbol::Delta1, ParamSymbol::Delta2, ParamSymbol::Delta3];
    TensorRep::new(t.iter().zip(ds).map(|(&s, d)| EvalRep::new(HalfInt::from_twice(s), d, bracket).expect("valid spin")).collect()).expect("three sites")
}

fn random_point(rng: &mut ChaCha8Rng) -> QPoint {
    let mut r = |lim: i64| rat(rng.gen_range(-lim..=lim), rng.gen_range(1..=4));
    let deltas = [r(12), r(12), r(12)];
    let base = rat(rng.gen_range(2..=7), rng.gen_range(1..=5));
    let base = if base.is_one() { rat(3, 2) } else { base };
    let l = deltas.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    let order = u32::try_from(l * 2u32).expect("small denominators");
    let [a, b, c] = deltas;
    QPoint::new(base, order).with(ParamSymbol::Delta1, a).with(ParamSymbol::Delta2, b).with(ParamSymbol::Delta3, c)
}

fn ybe_numeric(t: [i64; 3], points: usize, rng: &mut ChaCha8Rng) -> Check {
    let rep = triple(t, Bracket::Quantum);
    let mut done = 0;
    let mut redrawn = 0;
    while done < points {
        let pt = random_point(rng);
        match ybe_holds_at(&rep, &pt) {
            Ok(true) => done += 1,
            Ok(false) => return Err(format!("fails at {pt:?}")),
            Err(Error::Eval(EvalError::BracketPole(_))) => redrawn += 1,
            Err(e) => return Err(fail(e)),
        }
    }
    Ok(format!("{done} exact points ({redrawn} pole draws redrawn)"))
}

fn ybe(max: i64, seed: u64, mode: Mode) -> Vec<(String, Check)> {
    let name = |t: [i64; 3]| t.iter().map(|&s| HalfInt::from_twice(s).to_string()).collect::<Vec<_>>().join(" ⊗ ");
    match mode {
        Mode::Symbolic => {
            let mut out = Vec::new();
            if max >= 1 {
                let check = match ybe_holds(&triple([1, 1, 1], Bracket::Quantum)) {
                    Ok(true) => Ok("symbolic in δ₁, δ₂, δ₃".to_string()),
                    Ok(false) => Err("fails symbolically".to_string()),
                    Err(e) => Err(fail(e)),
                };
                out.push((name([1, 1, 1]), check));
            }
            out
        }
        Mode::Numeric => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut out = Vec::new();
            for a in 1..=max {
                for b in 1..=max {
                    for c in 1..=max {
                        let t = [a, b, c];
                        let points = if t == [1, 1, 1] { 10 } else { 2 };
                        out.push((name(t), ybe_numeric(t, points, &mut rng)));
                    }
                }
            }
            out
        }
    }
}

fn limit_case(a: i64, b: i64) -> Check {
    let rep = pair(a, b, Bracket::Quantum);
    let eps = decades(3..=6);
    let mut worst: f64 = 0.0;
    for (d1, d2) in [(rat(1, 3), rat(0, 1)), (rat(-3, 4), rat(1, 2)), (rat(2, 1), rat(-2, 5))] {
        let point: BTreeMap<_, _> = [(ParamSymbol::Delta1, d1), (ParamSymbol::Delta2, d2)].into();
        let report = limit_check(&rep, TwistVariant::F, &point, &eps).map_err(fail)?;
        ensure(report.converges(), || format!("no O(ε) convergence: {report:?}"))?;
        ensure(report.final_deviation() < 1e-4, || format!("deviation {} at ε = 1e-6", report.final_deviation()))?;
        worst = worst.max(report.final_deviation());
    }
    for v in TwistVariant::ALL {
        ensure(erasure_matches(&rep, v).map_err(fail)?, || format!("{v}: erased q-twist differs from the classical twist"))?;
    }
    Ok(format!("max deviation {worst:.2e} at ε = 1e-6; erasure exact"))
}

fn limit(max: i64) -> Vec<(String, Check)> {
    pairs(max).into_iter().map(|(a, b)| (label(a, b), limit_case(a, b))).collect()
}

fn run_suite(s: Suite, cfg: &Config) -> Vec<(String, Check)> {
    match s {
        Suite::Tables => tables(),
        Suite::Identities => identities(cfg.max_dim),
        Suite::Twists => twists(cfg.max_dim),
        Suite::Rmatrix => rmatrix(cfg.max_dim),
        Suite::Ybe => ybe(cfg.max_dim, cfg.seed, cfg.mode),
        Suite::Limit => limit(cfg.max_dim),
        Suite::All => unreachable!(),
    }
}

/// Runs the selected suites in parallel and returns their cases in a fixed
/// order.
pub fn run(cfg: &Config) -> Vec<Case> {
    let suites: Vec<Suite> = if cfg.suite == Suite::All { Suite::EACH.to_vec() } else { vec![cfg.suite] };
    let results: Vec<Vec<(String, Check)>> = std::thread::scope(|scope| {
        let handles: Vec<_> = suites.iter().map(|&s| scope.spawn(move || run_suite(s, cfg))).collect();
        handles.into_iter().map(|h| h.join().unwrap_or_else(|_| vec![("panic".into(), Err("suite panicked".into()))])).collect()
    });
    suites
        .iter()
        .zip(results)
        .flat_map(|(s, cases)| cases.into_iter().map(move |(name, outcome)| Case { suite: s.name(), name, outcome }))
        .collect()
}

pub fn text_report(cfg: &Config, cases: &[Case]) -> String {
    let mut out = format!("seed {} max-dim {} mode {:?}\n", cfg.seed, cfg.max_dim, cfg.mode).to_lowercase();
    for c in cases {
        let (tag, detail) = match &c.outcome {
            Ok(d) => ("PASS", d),
            Err(d) => ("FAIL", d),
        };
        out.push_str(&format!("{tag}  {}  {}: {detail}\n", c.suite, c.name));
    }
    let failed = cases.iter().filter(|c| c.outcome.is_err()).count();
    out.push_str(&format!("{} cases, {failed} failed\n", cases.len()));
    out
}

pub fn json_report(cfg: &Config, cases: &[Case]) -> serde_json::Value {
    json!({
        "seed": cfg.seed,
        "max_dim": cfg.max_dim,
        "mode": format!("{:?}", cfg.mode).to_lowercase(),
        "passed": cases.iter().all(|c| c.outcome.is_ok()),
        "cases": cases.iter().map(|c| json!({
            "suite": c.suite,
            "case": c.name,
            "pass": c.outcome.is_ok(),
            "detail": match &c.outcome { Ok(d) | Err(d) => d },
        })).collect::<Vec<_>>(),
    })
}
