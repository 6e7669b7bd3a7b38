//! Reference inverse twists for small spins and their comparison with the
//! construction.

use crate::error::{Error, ParseError};
use crate::linalg::OpMatrix;
use crate::rep::{EvalRep, Gen};
use crate::scalar::{parse_bracket_product, AffineExpr, Bracket, BracketProduct, HalfInt, ParamSymbol, Scalar};
use crate::tensor::{factored_zeros, TensorRep};
use crate::twist::{Twist, TwistVariant};

const REFERENCE: &str = include_str!("reference_tables.txt");

/// The spin pairs covered by the reference data, in order.
pub const SPIN_PAIRS: [(i64, i64); 7] = [(1, 1), (1, 2), (1, 3), (1, 4), (2, 2), (2, 3), (3, 3)];

/// A basis vector `|ℓ, k⟩`.
pub type Basis = (usize, usize);

#[derive(Clone, Debug, PartialEq)]
pub struct Entry {
    /// Output basis vector `(ℓ, k)`.
    pub row: (usize, usize),
    /// Input basis vector.
    pub col: (usize, usize),
    pub value: BracketProduct,
}

#[derive(Clone, Debug)]
pub struct ReferenceTable {
    pub lambda1: HalfInt,
    pub lambda2: HalfInt,
    pub entries: Vec<Entry>,
    /// Replacements for transcribed entries.
    pub errata: Vec<Entry>,
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse(ParseError::Scalar { pos: line, msg: msg.into() })
}

fn basis(s: &str, line: usize) -> Result<(usize, usize), Error> {
    let d: Vec<usize> = s.chars().map(|c| c.to_digit(10).map(|v| v as usize)).collect::<Option<_>>().ok_or_else(|| parse_err(line, format!("bad basis label {s:?}")))?;
    match d.as_slice() {
        [l, k] => Ok((*l, *k)),
        _ => Err(parse_err(line, format!("bad basis label {s:?}"))),
    }
}

fn row_entry(s: &str, col: (usize, usize), line: usize) -> Result<Entry, Error> {
    let (row, value) = s.trim().split_once(' ').ok_or_else(|| parse_err(line, format!("expected \"row entry\" in {s:?}")))?;
    Ok(Entry { row: basis(row, line)?, col, value: parse_bracket_product(value.trim())? })
}

pub fn parse_tables(text: &str) -> Result<Vec<ReferenceTable>, Error> {
    let mut out: Vec<ReferenceTable> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        let no = i + 1;
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(rest) = line.strip_prefix("table ") {
            let mut it = rest.split_whitespace();
            let mut spin = || -> Result<HalfInt, Error> {
                it.next().ok_or_else(|| parse_err(no, "missing spin"))?.parse().map_err(Error::Parse)
            };
            let (lambda1, lambda2) = (spin()?, spin()?);
            out.push(ReferenceTable { lambda1, lambda2, entries: Vec::new(), errata: Vec::new() });
            continue;
        }
        let table = out.last_mut().ok_or_else(|| parse_err(no, "entry before any table"))?;
        if let Some(rest) = line.strip_prefix("erratum ") {
            let (col, rest) = rest.split_once(' ').ok_or_else(|| parse_err(no, "bad erratum"))?;
            table.errata.push(row_entry(rest, basis(col, no)?, no)?);
            continue;
        }
        let (col, rows) = line.split_once(':').ok_or_else(|| parse_err(no, "expected \"col: ...\""))?;
        let col = basis(col.trim(), no)?;
        for part in rows.split(';') {
            table.entries.push(row_entry(part, col, no)?);
        }
    }
    Ok(out)
}

pub fn reference_tables() -> Vec<ReferenceTable> {
    parse_tables(REFERENCE).expect("embedded reference tables parse")
}

/// `V_{λ₁}(δ₁) ⊗ V_{λ₂}(δ₂)` with the given bracket.
pub fn spin_pair(l1: HalfInt, l2: HalfInt, bracket: Bracket) -> Result<TensorRep, Error> {
    TensorRep::pair(EvalRep::new(l1, ParamSymbol::Delta1, bracket)?, EvalRep::new(l2, ParamSymbol::Delta2, bracket)?)
}

impl ReferenceTable {
    pub fn rep(&self) -> TensorRep {
        spin_pair(self.lambda1, self.lambda2, Bracket::Quantum).expect("valid spins")
    }

    /// The full matrix; columns without entries are fixed vectors.
    pub fn matrix(&self, apply_errata: bool) -> OpMatrix<BracketProduct> {
        let rep = self.rep();
        let n = rep.dim();
        let mut m = factored_zeros(n, n);
        let idx = |(l, k): (usize, usize)| rep.index(&[l, k]);
        for i in 0..n {
            m.set(i, i, BracketProduct::one());
        }
        for e in &self.entries {
            m.set(idx(e.row), idx(e.col), e.value.clone());
        }
        if apply_errata {
            for e in &self.errata {
                m.set(idx(e.row), idx(e.col), e.value.clone());
            }
        }
        m
    }

    pub fn computed(&self) -> Result<OpMatrix<BracketProduct>, Error> {
        Ok(Twist::build(&self.rep(), TwistVariant::F)?.inverse().clone())
    }

    /// Basis pairs `(row, col)` where the construction differs.
    pub fn mismatches(&self, apply_errata: bool) -> Result<Vec<(Basis, Basis)>, Error> {
        let rep = self.rep();
        let want = rep.realize(&self.matrix(apply_errata));
        let got = rep.realize(&self.computed()?);
        Ok(got
            .mismatches(&want)
            .into_iter()
            .map(|(r, c)| {
                let (dr, dc) = (rep.digits(r), rep.digits(c));
                ((dr[0], dr[1]), (dc[0], dc[1]))
            })
            .collect())
    }
}

/// Whether column `col` of `m` is an eigenvector of `ΔX(u)`, for `X` the
/// diagonal generator of the untilded twists, with eigenvalue `d_ℓ d_k`.
pub fn is_eigen_column(rep: &TensorRep, m: &OpMatrix<BracketProduct>, col: (usize, usize), u: &AffineExpr) -> Result<bool, Error> {
    let b = rep.bracket();
    let c = rep.index(&[col.0, col.1]);
    let v: Vec<_> = (0..rep.dim()).map(|i| m.get(i, c).to_scalar(b)).collect();
    let dd = rep.delta_op_scalar(Gen::D, u)?;
    let (s1, s2) = (rep.site(0), rep.site(1));
    let eig = BracketProduct::bracket(s1.d_k(u, col.0 as i64)).mul(&BracketProduct::bracket(s2.d_k(u, col.1 as i64))).to_scalar(b);
    Ok((0..rep.dim()).all(|i| {
        let lhs = (0..rep.dim()).fold(Scalar::zero(), |acc, j| acc.add(&dd.get(i, j).mul(&v[j])));
        lhs == eig.mul(&v[i])
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn embedded_tables_parse() {
        let t = reference_tables();
        assert_eq!(t.len(), 7);
        let pairs: Vec<(i64, i64)> = t.iter().map(|t| (t.lambda1.twice(), t.lambda2.twice())).collect();
        assert_eq!(pairs, SPIN_PAIRS);
        assert_eq!(t[0].entries[0].value.to_string(), "[d]/[d-1]");
    }

    #[test]
    fn construction_matches_after_errata() {
        for t in reference_tables() {
            assert_eq!(t.mismatches(true).unwrap(), vec![], "{} ⊗ {}", t.lambda1, t.lambda2);
        }
    }

    #[test]
    fn erratum_is_the_only_difference_and_is_forced() {
        let t = reference_tables();
        let u = AffineExpr::param(ParamSymbol::U);
        for table in &t[..6] {
            assert_eq!(table.mismatches(false).unwrap(), vec![]);
        }
        let last = &t[6];
        assert_eq!(last.mismatches(false).unwrap(), vec![((3, 0), (0, 3))]);
        assert!(!is_eigen_column(&last.rep(), &last.matrix(false), (0, 3), &u).unwrap());
        assert!(is_eigen_column(&last.rep(), &last.matrix(true), (0, 3), &u).unwrap());
    }

    #[test]
    fn rejects_malformed_lines() {
        assert!(parse_tables("01: 01 [d]").is_err());
        assert!(parse_tables("table 1/2 1/2\n0: 01 [d]").is_err());
        assert!(parse_tables("table 1/2 1/2\n01: 01").is_err());
    }
}
