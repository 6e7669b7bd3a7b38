//! Text, JSON and LaTeX renderings of operator matrices.

use std::fmt::Write as _;

use num_rational::BigRational;
use num_traits::{One, Signed};
use serde_json::{json, Value};

use qtwist::linalg::OpMatrix;
use qtwist::tensor::TensorRep;
use qtwist::{Bracket, BracketProduct, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Latex,
    Text,
}

/// A matrix entry that can be printed in every format.
pub trait Entry {
    /// Canonical string, readable back by the scalar parser.
    fn canonical(&self) -> String;
    fn text(&self, b: Bracket) -> String;
    fn latex(&self, b: Bracket) -> String;
}

/// Numerator and denominator factors of a product, with brackets wrapped
/// for display. Constant brackets collapse to integers under the classical
/// bracket.
fn split(p: &BracketProduct, b: Bracket, wrap: fn(&str) -> String) -> (bool, Vec<String>, Vec<String>) {
    let mut coeff = p.coeff().clone();
    let mut up = Vec::new();
    let mut down = Vec::new();
    for (a, e) in p.factors() {
        if b == Bracket::Classical {
            if let Some(c) = a.as_rational() {
                coeff *= c.pow(e);
                continue;
            }
        }
        let s = match b {
            Bracket::Quantum => format!("[{a}]"),
            Bracket::Classical => wrap(&a.to_string()),
        };
        let list = if e > 0 { &mut up } else { &mut down };
        list.extend(std::iter::repeat_n(s, e.unsigned_abs() as usize));
    }
    let neg = coeff.is_negative();
    let mag = coeff.abs();
    if !mag.numer().is_one() || up.is_empty() {
        up.insert(0, mag.numer().to_string());
    }
    if !mag.denom().is_one() {
        down.insert(0, mag.denom().to_string());
    }
    (neg, up, down)
}

impl Entry for BracketProduct {
    fn canonical(&self) -> String {
        self.to_string()
    }

    fn text(&self, b: Bracket) -> String {
        if self.is_zero() {
            return "0".into();
        }
        if b == Bracket::Quantum {
            return self.to_string();
        }
        let (neg, up, down) = split(self, b, |a| format!("({a})"));
        let sign = if neg { "-" } else { "" };
        match down.len() {
            0 => format!("{sign}{}", up.join("*")),
            1 => format!("{sign}{}/{}", up.join("*"), down[0]),
            _ => format!("{sign}{}/({})", up.join("*"), down.join("*")),
        }
    }

    fn latex(&self, b: Bracket) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let (neg, up, down) = split(self, b, |a| format!("({a})"));
        let sign = if neg { "-" } else { "" };
        let num = up.concat();
        if down.is_empty() {
            format!("{sign}{num}")
        } else {
            format!("{sign}\\frac{{{num}}}{{{}}}", down.concat())
        }
    }
}

impl Entry for BigRational {
    fn canonical(&self) -> String {
        self.to_string()
    }

    fn text(&self, _: Bracket) -> String {
        self.to_string()
    }

    fn latex(&self, _: Bracket) -> String {
        if self.is_integer() {
            return self.to_string();
        }
        let sign = if self.is_negative() { "-" } else { "" };
        format!("{sign}\\frac{{{}}}{{{}}}", self.numer().abs(), self.denom())
    }
}

impl Entry for Scalar {
    fn canonical(&self) -> String {
        self.to_string()
    }

    fn text(&self, _: Bracket) -> String {
        self.to_string()
    }

    fn latex(&self, _: Bracket) -> String {
        let (n, d) = self.to_fraction();
        if d.is_one() {
            format!("{n}")
        } else {
            format!("\\frac{{{n}}}{{{d}}}")
        }
    }
}

/// Basis labels `ℓ,k` in matrix order.
pub fn basis_order(rep: &TensorRep) -> Vec<String> {
    (0..rep.dim()).map(|i| rep.digits(i).iter().map(|d| d.to_string()).collect::<Vec<_>>().join(",")).collect()
}

pub fn json_matrix<T: Entry>(m: &OpMatrix<T>) -> Value {
    Value::Array((0..m.rows()).map(|i| Value::Array(m.row(i).iter().map(|e| Value::String(e.canonical())).collect())).collect())
}

pub fn text_matrix<T: Entry>(m: &OpMatrix<T>, b: Bracket) -> String {
    let cells: Vec<Vec<String>> = (0..m.rows()).map(|i| m.row(i).iter().map(|e| e.text(b)).collect()).collect();
    let widths: Vec<usize> = (0..m.cols()).map(|j| cells.iter().map(|r| r[j].chars().count()).max().unwrap_or(0)).collect();
    let mut out = String::new();
    for row in &cells {
        let line: Vec<String> = row.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
        out.push_str(line.join("  ").trim_end());
        out.push('\n');
    }
    out
}

pub fn latex_matrix<T: Entry>(m: &OpMatrix<T>, b: Bracket) -> String {
    let mut out = String::from("\\begin{pmatrix}\n");
    for i in 0..m.rows() {
        let row: Vec<String> = m.row(i).iter().map(|e| e.latex(b)).collect();
        let end = if i + 1 < m.rows() { " \\\\" } else { "" };
        let _ = writeln!(out, "{}{end}", row.join(" & "));
    }
    out.push_str("\\end{pmatrix}\n");
    out
}

/// One named matrix in the chosen format, without the JSON wrapper.
pub fn block<T: Entry>(name: &str, m: &OpMatrix<T>, format: Format, b: Bracket) -> String {
    match format {
        Format::Text => format!("# {name}\n{}", text_matrix(m, b)),
        Format::Latex => format!("% {name}\n{}", latex_matrix(m, b)),
        Format::Json => json_matrix(m).to_string(),
    }
}

pub fn metadata(rep: &TensorRep, b: Bracket) -> Value {
    json!({
        "lambda1": rep.site(0).lambda().to_string(),
        "lambda2": rep.site(1).lambda().to_string(),
        "bracket": match b { Bracket::Quantum => "quantum", Bracket::Classical => "classical" },
        "basis_order": basis_order(rep),
    })
}
