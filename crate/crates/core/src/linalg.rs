//! Dense matrices over exact or floating rings, with the tensor-site
//! bookkeeping used for coproducts and R-matrix embeddings.

use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::Error;
use crate::scalar::Scalar;

pub trait Ring: Clone + PartialEq + fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;

    fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }
}

pub trait Field: Ring {
    fn inv(&self) -> Option<Self>;
}

impl Ring for Scalar {
    fn zero() -> Self {
        Scalar::zero()
    }
    fn one() -> Self {
        Scalar::one()
    }
    fn is_zero(&self) -> bool {
        Scalar::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        Scalar::add(self, other)
    }
    fn mul(&self, other: &Self) -> Self {
        Scalar::mul(self, other)
    }
    fn neg(&self) -> Self {
        Scalar::neg(self)
    }
    fn sub(&self, other: &Self) -> Self {
        Scalar::sub(self, other)
    }
}

impl Field for Scalar {
    fn inv(&self) -> Option<Self> {
        Scalar::inv(self)
    }
}

impl Ring for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
}

impl Field for BigRational {
    fn inv(&self) -> Option<Self> {
        (!Zero::is_zero(self)).then(|| self.recip())
    }
}

impl Ring for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
}

/// Row-major dense matrix.
#[derive(Clone, PartialEq)]
pub struct OpMatrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T> OpMatrix<T> {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        OpMatrix { rows, cols, data }
    }

    pub fn try_from_fn<E>(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Result<T, E>) -> Result<Self, E> {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j)?);
            }
        }
        Ok(OpMatrix { rows, cols, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        assert!(i < self.rows && j < self.cols);
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &T)> {
        self.data.iter().enumerate().map(move |(n, v)| (n / self.cols, n % self.cols, v))
    }

    pub fn map<U>(&self, mut f: impl FnMut(&T) -> U) -> OpMatrix<U> {
        OpMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(&mut f).collect() }
    }

    pub fn try_map<U, E>(&self, f: impl FnMut(&T) -> Result<U, E>) -> Result<OpMatrix<U>, E> {
        Ok(OpMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect::<Result<_, _>>()? })
    }

    pub fn transpose(&self) -> Self
    where
        T: Clone,
    {
        OpMatrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }
}

impl<T: Ring> OpMatrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        OpMatrix::from_fn(rows, cols, |_, _| T::zero())
    }

    pub fn identity(n: usize) -> Self {
        OpMatrix::from_fn(n, n, |i, j| if i == j { T::one() } else { T::zero() })
    }

    pub fn diagonal(d: &[T]) -> Self {
        let n = d.len();
        OpMatrix::from_fn(n, n, |i, j| if i == j { d[i].clone() } else { T::zero() })
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn diag(&self) -> Vec<T> {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i).clone()).collect()
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out: Self = OpMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * out.cols + j;
                    out.data[idx] = out.data[idx].add(&a.mul(b));
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        OpMatrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j).add(other.get(i, j)))
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        OpMatrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j).sub(other.get(i, j)))
    }

    pub fn scale(&self, c: &T) -> Self {
        self.map(|x| x.mul(c))
    }

    pub fn neg(&self) -> Self {
        self.map(|x| x.neg())
    }

    pub fn kron(&self, other: &Self) -> Self {
        OpMatrix::from_fn(self.rows * other.rows, self.cols * other.cols, |i, j| {
            let a = self.get(i / other.rows, j / other.cols);
            if a.is_zero() {
                return T::zero();
            }
            a.mul(other.get(i % other.rows, j % other.cols))
        })
    }

    /// `[self, other] = self·other − other·self`.
    pub fn commutator(&self, other: &Self) -> Self {
        self.mul(other).sub(&other.mul(self))
    }

    pub fn is_identity(&self) -> bool {
        self.is_square() && self.entries().all(|(i, j, v)| if i == j { *v == T::one() } else { v.is_zero() })
    }

    pub fn is_diagonal(&self) -> bool {
        self.entries().all(|(i, j, v)| i == j || v.is_zero())
    }

    pub fn is_upper_triangular(&self) -> bool {
        self.entries().all(|(i, j, v)| i <= j || v.is_zero())
    }

    pub fn is_lower_triangular(&self) -> bool {
        self.entries().all(|(i, j, v)| i >= j || v.is_zero())
    }

    /// Positions where the two matrices differ.
    pub fn mismatches(&self, other: &Self) -> Vec<(usize, usize)> {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.entries().filter(|(i, j, v)| *v != other.get(*i, *j)).map(|(i, j, _)| (i, j)).collect()
    }
}

impl<T: Field> OpMatrix<T> {
    /// Gauss-Jordan inverse.
    pub fn inverse(&self) -> Result<Self, Error> {
        assert!(self.is_square());
        let n = self.rows;
        let mut a = self.clone();
        let mut inv: Self = OpMatrix::identity(n);
        for col in 0..n {
            let pivot = (col..n).find(|&r| !a.get(r, col).is_zero()).ok_or(Error::Singular)?;
            if pivot != col {
                for j in 0..n {
                    a.data.swap(pivot * n + j, col * n + j);
                    inv.data.swap(pivot * n + j, col * n + j);
                }
            }
            let p = a.get(col, col).inv().ok_or(Error::Singular)?;
            for j in 0..n {
                let (x, y) = (a.get(col, j).mul(&p), inv.get(col, j).mul(&p));
                a.set(col, j, x);
                inv.set(col, j, y);
            }
            for r in 0..n {
                if r == col || a.get(r, col).is_zero() {
                    continue;
                }
                let f = a.get(r, col).clone();
                for j in 0..n {
                    let x = a.get(r, j).sub(&f.mul(a.get(col, j)));
                    let y = inv.get(r, j).sub(&f.mul(inv.get(col, j)));
                    a.set(r, j, x);
                    inv.set(r, j, y);
                }
            }
        }
        Ok(inv)
    }
}

impl<T: fmt::Debug> fmt::Debug for OpMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "OpMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.data[i * self.cols..(i + 1) * self.cols].iter().map(|v| format!("{v:?}")).collect();
            writeln!(f, "  {}", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Digits of a row-major multi-index, first site outermost.
pub fn split_index(mut idx: usize, dims: &[usize]) -> Vec<usize> {
    let mut out = vec![0; dims.len()];
    for s in (0..dims.len()).rev() {
        out[s] = idx % dims[s];
        idx /= dims[s];
    }
    out
}

pub fn join_index(digits: &[usize], dims: &[usize]) -> usize {
    digits.iter().zip(dims).fold(0, |acc, (d, n)| acc * n + d)
}

/// Places a two-site operator `m` (basis `|a⟩⊗|b⟩` on sites `i`, `j`, with
/// `i` outer) into the tensor product over `dims`, acting trivially on the
/// other sites. With `i > j` this also realizes the factor flip.
pub fn embed_two<T: Ring>(m: &OpMatrix<T>, dims: &[usize], i: usize, j: usize) -> OpMatrix<T> {
    assert!(i != j && i < dims.len() && j < dims.len());
    assert_eq!(m.rows(), dims[i] * dims[j]);
    let n: usize = dims.iter().product();
    let mut out = OpMatrix::zeros(n, n);
    for col in 0..n {
        let c = split_index(col, dims);
        let mcol = c[i] * dims[j] + c[j];
        for mrow in 0..m.rows() {
            let v = m.get(mrow, mcol);
            if v.is_zero() {
                continue;
            }
            let mut r = c.clone();
            r[i] = mrow / dims[j];
            r[j] = mrow % dims[j];
            out.set(join_index(&r, dims), col, v.clone());
        }
    }
    out
}

/// `P·m·P` for `m` acting on `V₂⊗V₁`, giving the operator on `V₁⊗V₂`.
pub fn flip_conjugate<T: Ring>(m: &OpMatrix<T>, d1: usize, d2: usize) -> OpMatrix<T> {
    embed_two(m, &[d1, d2], 1, 0)
}

/// Places a single-site operator at site `s`.
pub fn embed_one<T: Ring>(m: &OpMatrix<T>, dims: &[usize], s: usize) -> OpMatrix<T> {
    let left: usize = dims[..s].iter().product();
    let right: usize = dims[s + 1..].iter().product();
    OpMatrix::<T>::identity(left).kron(m).kron(&OpMatrix::identity(right))
}
