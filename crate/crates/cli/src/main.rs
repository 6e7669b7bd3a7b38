//! `qtwist`: factorizing twists and R-matrices of quantum affine sl(2)
//! evaluation modules from the command line.

mod output;
mod point;
mod verify;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_rational::BigRational;
use serde_json::json;

use qtwist::linalg::OpMatrix;
use qtwist::rmatrix::{r_from_twists, GaussR};
use qtwist::tables::{reference_tables, spin_pair};
use qtwist::tensor::TensorRep;
use qtwist::twist::{check_forward_exists, check_inverse_exists, Twist, TwistVariant};
use qtwist::{Bracket, BracketProduct, Error, EvalError, HalfInt, ParamSymbol};

use output::{block, json_matrix, metadata, Entry, Format};
use point::{parse_rational, Assignment};
use verify::{Mode, Suite};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("no twist exists at this point: existence condition fails for j = {j}")]
    Existence { j: i64 },
    #[error("pole at this point: {0}")]
    Pole(EvalError),
    #[error("{0}")]
    Failed(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Config(_) | CliError::Io(_) => 1,
            CliError::Existence { .. } | CliError::Pole(_) => 2,
            CliError::Failed(_) => 3,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Existence { j } => CliError::Existence { j },
            Error::Eval(e) => CliError::from(e),
            other => CliError::Config(other.to_string()),
        }
    }
}

impl From<EvalError> for CliError {
    fn from(e: EvalError) -> Self {
        match e {
            EvalError::BracketPole(_) | EvalError::Pole => CliError::Pole(e),
            other => CliError::Config(other.to_string()),
        }
    }
}

#[derive(Parser)]
#[command(name = "qtwist", version, about = "Factorizing twists and R-matrices for U_q(affine sl2) evaluation modules")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print a factorizing twist on V_λ₁(δ₁) ⊗ V_λ₂(δ₂).
    Twist(TwistArgs),
    /// Print the Gauss factors R₊, R₀, R₋ and their product.
    Rmatrix(RArgs),
    /// Run verification suites.
    Verify(VerifyArgs),
    /// Print the reference inverse twists for the seven small spin pairs.
    Tables(TablesArgs),
}

fn parse_spin(s: &str) -> Result<HalfInt, String> {
    let h: HalfInt = s.parse().map_err(|e: qtwist::ParseError| e.to_string())?;
    if h.twice() < 0 {
        return Err(format!("spin must be nonnegative, got {s}"));
    }
    Ok(h)
}

#[derive(Args, Clone)]
struct PairArgs {
    /// Spin of the first factor, e.g. 1/2, .5 or 1.
    #[arg(long, value_parser = parse_spin)]
    l1: HalfInt,
    /// Spin of the second factor.
    #[arg(long, value_parser = parse_spin)]
    l2: HalfInt,
    #[arg(long, value_enum, default_value = "symbolic")]
    mode: Mode,
    /// Use the classical bracket [a] = a (Yangian limit).
    #[arg(long)]
    classical: bool,
    /// Value of q in numeric mode.
    #[arg(long)]
    q: Option<String>,
    /// In numeric mode, q = base^order; lets q^δ stay rational for fractional δ.
    #[arg(long, requires = "order", conflicts_with = "q")]
    base: Option<String>,
    #[arg(long, requires = "base")]
    order: Option<u32>,
    #[arg(long, allow_hyphen_values = true)]
    d1: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    d2: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    u: Option<String>,
    #[arg(long, value_enum, env = "QTWIST_FORMAT", default_value = "text")]
    format: Format,
    /// Write to this file instead of standard output.
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct TwistArgs {
    #[command(flatten)]
    pair: PairArgs,
    /// f, fhat, ftilde or fhattilde.
    #[arg(long, default_value = "f", value_parser = |s: &str| s.parse::<TwistVariant>().map_err(|e| e.to_string()))]
    variant: TwistVariant,
    /// Print F⁻¹ instead of F.
    #[arg(long)]
    inverse: bool,
}

#[derive(Args)]
struct RArgs {
    #[command(flatten)]
    pair: PairArgs,
    /// Also compare the product with F₂₁⁻¹F₁₂ and fail on a mismatch.
    #[arg(long)]
    cross_check: bool,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, value_enum, default_value = "all")]
    suite: Suite,
    /// Largest 2λ used for every factor.
    #[arg(long, default_value_t = 2)]
    max_dim: i64,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, value_enum, default_value = "numeric")]
    mode: Mode,
    #[arg(long, value_enum, env = "QTWIST_FORMAT", default_value = "text")]
    format: Format,
}

#[derive(Args)]
struct TablesArgs {
    #[arg(long, value_enum, env = "QTWIST_FORMAT", default_value = "text")]
    format: Format,
    /// Erase the brackets.
    #[arg(long)]
    classical: bool,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

fn bracket(classical: bool) -> Bracket {
    if classical {
        Bracket::Classical
    } else {
        Bracket::Quantum
    }
}

impl PairArgs {
    fn rep(&self) -> Result<TensorRep, CliError> {
        Ok(spin_pair(self.l1, self.l2, bracket(self.classical))?)
    }

    fn assignment(&self) -> Result<Assignment, CliError> {
        let opt = |s: &Option<String>| s.as_deref().map(parse_rational).transpose();
        let mut params = Vec::new();
        for (p, v, name) in [(ParamSymbol::Delta1, &self.d1, "--d1"), (ParamSymbol::Delta2, &self.d2, "--d2")] {
            params.push((p, opt(v)?.ok_or_else(|| CliError::Config(format!("numeric mode needs {name}")))?));
        }
        if let Some(u) = opt(&self.u)? {
            params.push((ParamSymbol::U, u));
        }
        let base = match (&self.base, self.order) {
            (Some(b), Some(n)) => Some((parse_rational(b)?, n)),
            _ => None,
        };
        let q = opt(&self.q)?;
        if !self.classical && q.is_none() && base.is_none() {
            return Err(CliError::Config("numeric mode needs --q (or --base with --order)".into()));
        }
        Ok(Assignment { q, base, params })
    }

    fn d(&self, a: &Assignment) -> BigRational {
        a.get(ParamSymbol::Delta1).cloned().unwrap_or_default() - a.get(ParamSymbol::Delta2).cloned().unwrap_or_default()
    }

    fn eval(&self, a: &Assignment, m: &OpMatrix<BracketProduct>) -> Result<OpMatrix<BigRational>, CliError> {
        if self.classical {
            Ok(m.try_map(|e| e.eval(&a.classical()))?)
        } else {
            let pt = a.quantum()?;
            Ok(m.try_map(|e| e.eval(&pt))?)
        }
    }

    fn emit(&self, text: &str) -> Result<(), CliError> {
        write_out(self.output.as_ref(), text)
    }
}

fn write_out(path: Option<&PathBuf>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn render<T: Entry>(args: &PairArgs, rep: &TensorRep, blocks: &[(&str, OpMatrix<T>)], extra: serde_json::Value) -> String {
    let b = bracket(args.classical);
    match args.format {
        Format::Json => {
            let mut doc = metadata(rep, b);
            let obj = doc.as_object_mut().expect("object");
            obj.insert("mode".into(), json!(format!("{:?}", args.mode).to_lowercase()));
            if let Some(e) = extra.as_object() {
                obj.extend(e.clone());
            }
            for (name, m) in blocks {
                obj.insert((*name).into(), json_matrix(m));
            }
            format!("{}\n", serde_json::to_string_pretty(&doc).expect("serializable"))
        }
        f => {
            let head = format!(
                "{} V_{}(d1) ⊗ V_{}(d2), basis {}\n",
                if f == Format::Latex { "%" } else { "#" },
                args.l1,
                args.l2,
                output::basis_order(rep).join(" ")
            );
            blocks.iter().fold(head, |acc, (name, m)| acc + &block(name, m, f, b))
        }
    }
}

fn cmd_twist(args: TwistArgs) -> Result<(), CliError> {
    let p = &args.pair;
    let rep = p.rep()?;
    let name = if args.inverse { format!("{}^-1", args.variant) } else { args.variant.to_string() };
    let extra = json!({ "variant": args.variant.name(), "inverse": args.inverse });
    let text = match p.mode {
        Mode::Symbolic => {
            let t = Twist::build(&rep, args.variant)?;
            let m = if args.inverse { t.inverse() } else { t.forward() };
            render(p, &rep, &[("matrix", m.clone())], extra)
                .replacen("# matrix", &format!("# {name}"), 1)
                .replacen("% matrix", &format!("% {name}"), 1)
        }
        Mode::Numeric => {
            let a = p.assignment()?;
            if !args.variant.is_tilde() {
                let d = p.d(&a);
                if args.inverse {
                    check_inverse_exists(p.l1, p.l2, &d)?;
                } else {
                    check_forward_exists(p.l1, p.l2, &d)?;
                }
            }
            let t = Twist::build(&rep, args.variant)?;
            let m = p.eval(&a, if args.inverse { t.inverse() } else { t.forward() })?;
            render(p, &rep, &[("matrix", m)], extra).replacen("# matrix", &format!("# {name}"), 1).replacen("% matrix", &format!("% {name}"), 1)
        }
    };
    p.emit(&text)
}

fn cmd_rmatrix(args: RArgs) -> Result<(), CliError> {
    let p = &args.pair;
    let rep = p.rep()?;
    let g = GaussR::build(&rep)?;
    let text = match p.mode {
        Mode::Symbolic => {
            let product = g.product(&rep);
            if args.cross_check && product != r_from_twists(&rep, TwistVariant::F)? {
                return Err(CliError::Failed("R₊R₀R₋ differs from F₂₁⁻¹F₁₂".into()));
            }
            let f = |m: &OpMatrix<BracketProduct>| m.clone();
            let factored = render(p, &rep, &[("r_plus", f(&g.upper)), ("r_zero", f(&g.diagonal)), ("r_minus", f(&g.lower))], json!({}));
            let prod = render(p, &rep, &[("product", product)], json!({}));
            merge(p.format, factored, prod)
        }
        Mode::Numeric => {
            let a = p.assignment()?;
            let blocks: Vec<(&str, OpMatrix<BigRational>)> =
                vec![("r_plus", p.eval(&a, &g.upper)?), ("r_zero", p.eval(&a, &g.diagonal)?), ("r_minus", p.eval(&a, &g.lower)?)];
            let product = blocks[0].1.mul(&blocks[1].1).mul(&blocks[2].1);
            if args.cross_check {
                let f = r_from_twists(&rep, TwistVariant::F)?;
                let check = if p.classical { f.try_map(|e| e.eval(&a.classical()))? } else { f.try_map(|e| e.eval(&a.quantum()?).map_err(CliError::from))? };
                if check != product {
                    return Err(CliError::Failed("R₊R₀R₋ differs from F₂₁⁻¹F₁₂ at this point".into()));
                }
            }
            let mut all = blocks;
            all.push(("product", product));
            render(p, &rep, &all, json!({}))
        }
    };
    p.emit(&text)
}

/// Joins two renderings of the same pair: JSON objects are merged, other
/// formats concatenated without the second header.
fn merge(format: Format, a: String, b: String) -> String {
    match format {
        Format::Json => {
            let mut x: serde_json::Value = serde_json::from_str(&a).expect("own output");
            let y: serde_json::Value = serde_json::from_str(&b).expect("own output");
            if let (Some(x), Some(y)) = (x.as_object_mut(), y.as_object()) {
                x.extend(y.clone());
            }
            format!("{}\n", serde_json::to_string_pretty(&x).expect("serializable"))
        }
        _ => a + b.split_once('\n').map_or("", |(_, rest)| rest),
    }
}

fn cmd_tables(args: TablesArgs) -> Result<(), CliError> {
    let b = bracket(args.classical);
    let tables = reference_tables();
    let mut docs = Vec::new();
    let mut text = String::new();
    for t in &tables {
        let rep = spin_pair(t.lambda1, t.lambda2, b)?;
        let m = Twist::build(&rep, TwistVariant::F)?.inverse().clone();
        match args.format {
            Format::Json => {
                let mut doc = metadata(&rep, b);
                let obj = doc.as_object_mut().expect("object");
                obj.insert("variant".into(), json!("F"));
                obj.insert("inverse".into(), json!(true));
                obj.insert("matrix".into(), json_matrix(&m));
                docs.push(doc);
            }
            f => {
                let c = if f == Format::Latex { "%" } else { "#" };
                text.push_str(&format!("{c} F^-1 on V_{}(d1) ⊗ V_{}(d2), basis {}\n", t.lambda1, t.lambda2, output::basis_order(&rep).join(" ")));
                text.push_str(&match f {
                    Format::Latex => output::latex_matrix(&m, b),
                    _ => output::text_matrix(&m, b),
                });
                text.push('\n');
            }
        }
    }
    if args.format == Format::Json {
        text = format!("{}\n", serde_json::to_string_pretty(&docs).expect("serializable"));
    }
    write_out(args.output.as_ref(), &text)
}

fn cmd_verify(args: VerifyArgs) -> Result<(), CliError> {
    if args.max_dim < 0 {
        return Err(CliError::Config("--max-dim must be nonnegative".into()));
    }
    let cfg = verify::Config { suite: args.suite, max_dim: args.max_dim, seed: args.seed, mode: args.mode };
    let cases = verify::run(&cfg);
    let report = match args.format {
        Format::Json => format!("{}\n", serde_json::to_string_pretty(&verify::json_report(&cfg, &cases)).expect("serializable")),
        _ => verify::text_report(&cfg, &cases),
    };
    write_out(None, &report)?;
    match cases.iter().find(|c| c.outcome.is_err()) {
        Some(c) => Err(CliError::Failed(format!("{} {}: {}", c.suite, c.name, c.outcome.as_ref().unwrap_err()))),
        None => Ok(()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Twist(a) => cmd_twist(a),
        Command::Rmatrix(a) => cmd_rmatrix(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Tables(a) => cmd_tables(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
