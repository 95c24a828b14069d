use std::fmt;
use std::ops::{Index, IndexMut};

use super::scalar::{Rational, Scalar, Tolerance};
use crate::error::{Error, Result};

/// Dense row-major matrix.
///
/// Zero-sized shapes are allowed: an `n x 0` matrix is the basis of the zero
/// subspace and the input matrix of an input-free system.
#[derive(Clone, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

pub type RMatrix = Matrix<Rational>;
pub type FMatrix = Matrix<f64>;

impl<T> Matrix<T> {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_column(&self) -> bool {
        self.cols == 1
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn map<S>(&self, f: impl FnMut(&T) -> S) -> Matrix<S> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &T {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl<T: Scalar> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { T::one() } else { T::zero() })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<T>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::mismatch("from_vec", rows * cols, data.len()));
        }
        Ok(Matrix { rows, cols, data })
    }

    /// Builds from row vectors; rejects ragged input. An empty list yields
    /// a `0 x 0` matrix.
    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().position(|r| r.len() != cols) {
            return Err(Error::mismatch(
                "from_rows",
                format!("{cols} entries per row"),
                format!("{} entries in row {}", rows[bad].len(), bad + 1),
            ));
        }
        let n = rows.len();
        Ok(Matrix {
            rows: n,
            cols,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn column(entries: Vec<T>) -> Self {
        Matrix {
            rows: entries.len(),
            cols: 1,
            data: entries,
        }
    }

    pub fn from_columns(rows: usize, columns: &[Matrix<T>]) -> Self {
        Self::from_fn(rows, columns.len(), |i, j| columns[j][(i, 0)].clone())
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| T::from_i64(v)).collect())
                .collect(),
        )
        .expect("ragged integer rows")
    }

    pub fn parse_rows(rows: &[Vec<String>]) -> Result<Self> {
        let parsed = rows
            .iter()
            .map(|r| r.iter().map(|s| T::parse_scalar(s)).collect::<Result<Vec<T>>>())
            .collect::<Result<Vec<_>>>()?;
        Self::from_rows(parsed)
    }

    pub fn get_col(&self, j: usize) -> Matrix<T> {
        Self::from_fn(self.rows, 1, |i, _| self[(i, j)].clone())
    }

    pub fn columns(&self) -> impl Iterator<Item = Matrix<T>> + '_ {
        (0..self.cols).map(move |j| self.get_col(j))
    }

    pub fn select_columns(&self, idx: &[usize]) -> Matrix<T> {
        Self::from_fn(self.rows, idx.len(), |i, j| self[(i, idx[j])].clone())
    }

    pub fn transpose(&self) -> Matrix<T> {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn submatrix(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> Self {
        let (r0, c0) = (rows.start, cols.start);
        Self::from_fn(rows.len(), cols.len(), |i, j| self[(r0 + i, c0 + j)].clone())
    }

    /// Matrix product. Panics on incompatible shapes.
    pub fn mul(&self, rhs: &Matrix<T>) -> Matrix<T> {
        assert_eq!(
            self.cols, rhs.rows,
            "matrix product of {}x{} and {}x{}",
            self.rows, self.cols, rhs.rows, rhs.cols
        );
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let prod = a.clone() * rhs[(k, j)].clone();
                    let slot = &mut out[(i, j)];
                    *slot = slot.clone() + prod;
                }
            }
        }
        out
    }

    fn zip_with(&self, rhs: &Matrix<T>, f: impl Fn(T, T) -> T) -> Matrix<T> {
        assert_eq!(self.shape(), rhs.shape(), "elementwise shape mismatch");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| f(a.clone(), b.clone()))
                .collect(),
        }
    }

    pub fn add(&self, rhs: &Matrix<T>) -> Matrix<T> {
        self.zip_with(rhs, |a, b| a + b)
    }

    pub fn sub(&self, rhs: &Matrix<T>) -> Matrix<T> {
        self.zip_with(rhs, |a, b| a - b)
    }

    pub fn scale(&self, k: &T) -> Matrix<T> {
        self.map(|x| x.clone() * k.clone())
    }

    pub fn neg(&self) -> Matrix<T> {
        self.map(|x| -x.clone())
    }

    /// Horizontal concatenation; all blocks must share a row count.
    pub fn hcat(blocks: &[&Matrix<T>]) -> Matrix<T> {
        let rows = blocks.first().map_or(0, |b| b.rows);
        assert!(blocks.iter().all(|b| b.rows == rows), "hcat row mismatch");
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = Self::zeros(rows, cols);
        let mut offset = 0;
        for b in blocks {
            for i in 0..rows {
                for j in 0..b.cols {
                    out[(i, offset + j)] = b[(i, j)].clone();
                }
            }
            offset += b.cols;
        }
        out
    }

    /// Vertical concatenation; all blocks must share a column count.
    pub fn vcat(blocks: &[&Matrix<T>]) -> Matrix<T> {
        let cols = blocks.first().map_or(0, |b| b.cols);
        assert!(blocks.iter().all(|b| b.cols == cols), "vcat column mismatch");
        let rows = blocks.iter().map(|b| b.rows).sum();
        let mut data = Vec::with_capacity(rows * cols);
        for b in blocks {
            data.extend(b.data.iter().cloned());
        }
        Matrix { rows, cols, data }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(Scalar::magnitude).fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &Matrix<T>, tol: &Tolerance) -> bool {
        self.shape() == other.shape()
            && self.data.iter().zip(&other.data).all(|(a, b)| a.approx_eq(b, tol))
    }

    pub fn to_f64(&self) -> FMatrix {
        self.map(Scalar::to_f64)
    }

    pub fn into_vec(self) -> Vec<T> {
        self.data
    }
}

impl FMatrix {
    /// Infinity norm (max absolute row sum).
    pub fn norm_inf(&self) -> f64 {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|v| v.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &FMatrix) -> f64 {
        assert_eq!(self.shape(), other.shape());
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

impl<T: fmt::Display> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl<T: fmt::Display> fmt::Display for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.data[i * self.cols + j])?;
            }
        }
        write!(f, "]")
    }
}

/// Kronecker product, shape `(ra * rb) x (ca * cb)`.
pub fn kron<T: Scalar>(a: &Matrix<T>, b: &Matrix<T>) -> Matrix<T> {
    Matrix::from_fn(a.rows * b.rows, a.cols * b.cols, |i, j| {
        a[(i / b.rows, j / b.cols)].clone() * b[(i % b.rows, j % b.cols)].clone()
    })
}

/// The all-ones column `1_k`.
pub fn ones_vector<T: Scalar>(k: usize) -> Result<Matrix<T>> {
    if k == 0 {
        return Err(Error::ZeroSize { what: "ones_vector size" });
    }
    Ok(Matrix::from_fn(k, 1, |_, _| T::one()))
}

/// The averaging matrix `J_k`, every entry `1/k`.
pub fn j_matrix<T: Scalar>(k: usize) -> Result<Matrix<T>> {
    if k == 0 {
        return Err(Error::ZeroSize { what: "j_matrix size" });
    }
    let w = T::one() / T::from_usize(k);
    Ok(Matrix::from_fn(k, k, |_, _| w.clone()))
}
