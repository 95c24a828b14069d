//! Mixed-dimension algebra on equivalence classes of vectors and matrices.
//!
//! Two vectors are equivalent when `x ⊗ 1_a = y ⊗ 1_b` for some replication
//! factors; two matrices when `A ⊗ J_a = B ⊗ J_b`. Every class has a unique
//! member of minimal dimension, the *irreducible* representative, and all
//! class operations here work on concrete representatives, returning results
//! that can be reduced again.

use num_integer::lcm;

use crate::error::{Error, Result};
use crate::numerics::{j_matrix, kron, ones_vector, Matrix, Scalar, Tolerance};

/// A column vector together with its irreducible class representative.
#[derive(Debug, Clone, PartialEq)]
pub struct MixVector<T: Scalar> {
    pub value: Matrix<T>,
    pub irreducible: Matrix<T>,
}

impl<T: Scalar> MixVector<T> {
    /// `value = irreducible ⊗ 1_multiplicity`.
    pub fn multiplicity(&self) -> usize {
        self.value.rows() / self.irreducible.rows()
    }
}

/// A matrix together with its J-irreducible representative:
/// `value = irreducible ⊗ J_multiplier`.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixClassRep<T: Scalar> {
    pub value: Matrix<T>,
    pub irreducible: Matrix<T>,
    pub multiplier: usize,
}

pub(crate) fn divisors_desc(n: usize) -> impl Iterator<Item = usize> {
    (2..=n).rev().filter(move |s| n % s == 0)
}

fn mean<T: Scalar>(items: impl Iterator<Item = T>, count: usize) -> T {
    items.fold(T::zero(), |acc, v| acc + v) / T::from_usize(count)
}

/// If `m` is `m0 ⊗ 1_s` (row blocks of length `s` constant in every column),
/// returns `m0`.
pub(crate) fn strip_row_blocks<T: Scalar>(m: &Matrix<T>, s: usize, tol: &Tolerance) -> Option<Matrix<T>> {
    let (rows, cols) = m.shape();
    let reduced = Matrix::from_fn(rows / s, cols, |i, j| {
        mean((0..s).map(|k| m[(i * s + k, j)].clone()), s)
    });
    for i in 0..rows {
        for j in 0..cols {
            if !m[(i, j)].approx_eq(&reduced[(i / s, j)], tol) {
                return None;
            }
        }
    }
    Some(reduced)
}

/// If `m` is `m0 ⊗ J_s` (every `s x s` block constant), returns `m0`.
pub(crate) fn strip_j_blocks<T: Scalar>(m: &Matrix<T>, s: usize, tol: &Tolerance) -> Option<Matrix<T>> {
    let (rows, cols) = m.shape();
    let block_mean = Matrix::from_fn(rows / s, cols / s, |bi, bj| {
        mean(
            (0..s * s).map(|k| m[(bi * s + k / s, bj * s + k % s)].clone()),
            s * s,
        )
    });
    for i in 0..rows {
        for j in 0..cols {
            if !m[(i, j)].approx_eq(&block_mean[(i / s, j / s)], tol) {
                return None;
            }
        }
    }
    let factor = T::from_usize(s);
    Some(block_mean.map(|v| v.clone() * factor.clone()))
}

/// Repeatedly strips the largest available factor until none is left.
/// Returns the fixed point and the product of stripped factors.
fn strip_greedy<T: Scalar>(
    start: &Matrix<T>,
    dims: impl Fn(&Matrix<T>) -> usize,
    strip: impl Fn(&Matrix<T>, usize) -> Option<Matrix<T>>,
) -> (Matrix<T>, usize) {
    let mut current = start.clone();
    let mut total = 1;
    loop {
        let found = divisors_desc(dims(&current)).find_map(|s| strip(&current, s).map(|m| (s, m)));
        match found {
            Some((s, m)) => {
                current = m;
                total *= s;
            }
            None => return (current, total),
        }
    }
}

fn require_column<T>(op: &'static str, x: &Matrix<T>) -> Result<()> {
    if x.cols() != 1 || x.rows() == 0 {
        return Err(Error::mismatch(
            op,
            "non-empty column vector",
            format!("{}x{}", x.rows(), x.cols()),
        ));
    }
    Ok(())
}

pub fn reduce_vector<T: Scalar>(x: &Matrix<T>) -> Result<MixVector<T>> {
    reduce_vector_with(x, &Tolerance::default())
}

/// Finds the irreducible member of the class of `x`. Under `f64` a block
/// counts as constant when every entry matches the block mean within `tol`,
/// and the irreducible entries are the block means.
pub fn reduce_vector_with<T: Scalar>(x: &Matrix<T>, tol: &Tolerance) -> Result<MixVector<T>> {
    require_column("reduce_vector", x)?;
    let (irreducible, _) = strip_greedy(x, Matrix::rows, |m, s| strip_row_blocks(m, s, tol));
    Ok(MixVector {
        value: x.clone(),
        irreducible,
    })
}

pub fn vec_equivalent<T: Scalar>(x: &Matrix<T>, y: &Matrix<T>) -> Result<bool> {
    vec_equivalent_with(x, y, &Tolerance::default())
}

pub fn vec_equivalent_with<T: Scalar>(x: &Matrix<T>, y: &Matrix<T>, tol: &Tolerance) -> Result<bool> {
    let rx = reduce_vector_with(x, tol)?;
    let ry = reduce_vector_with(y, tol)?;
    Ok(rx.irreducible.approx_eq(&ry.irreducible, tol))
}

/// `x ⊗ 1_{n/m}` for an `m`-vector; `m` must divide `n`.
pub fn lift_vector<T: Scalar>(x: &Matrix<T>, n: usize) -> Result<Matrix<T>> {
    let m = x.rows();
    if m == 0 || n % m != 0 {
        return Err(Error::NotDivisible { from: m, to: n });
    }
    Ok(kron(x, &ones_vector(n / m)?))
}

fn lift_pair<T: Scalar>(op: &'static str, x: &Matrix<T>, y: &Matrix<T>) -> Result<(Matrix<T>, Matrix<T>)> {
    require_column(op, x)?;
    require_column(op, y)?;
    let t = lcm(x.rows(), y.rows());
    Ok((lift_vector(x, t)?, lift_vector(y, t)?))
}

/// `x ⊕ y`: both lifted to `lcm(m, n)` and added.
pub fn vec_add<T: Scalar>(x: &Matrix<T>, y: &Matrix<T>) -> Result<Matrix<T>> {
    let (a, b) = lift_pair("vec_add", x, y)?;
    Ok(a.add(&b))
}

pub fn vec_sub<T: Scalar>(x: &Matrix<T>, y: &Matrix<T>) -> Result<Matrix<T>> {
    let (a, b) = lift_pair("vec_sub", x, y)?;
    Ok(a.sub(&b))
}

pub fn reduce_matrix<T: Scalar>(a: &Matrix<T>) -> MatrixClassRep<T> {
    reduce_matrix_with(a, &Tolerance::default())
}

pub fn reduce_matrix_with<T: Scalar>(a: &Matrix<T>, tol: &Tolerance) -> MatrixClassRep<T> {
    let (irreducible, multiplier) = strip_greedy(
        a,
        |m| num_integer::gcd(m.rows(), m.cols()),
        |m, s| strip_j_blocks(m, s, tol),
    );
    MatrixClassRep {
        value: a.clone(),
        irreducible,
        multiplier,
    }
}

pub fn mat_equivalent<T: Scalar>(a: &Matrix<T>, b: &Matrix<T>) -> bool {
    let tol = Tolerance::default();
    reduce_matrix_with(a, &tol)
        .irreducible
        .approx_eq(&reduce_matrix_with(b, &tol).irreducible, &tol)
}

/// Strips the largest row-block factor `s` with `b = b0 ⊗ 1_s`, treating
/// all columns jointly. Returns `(b0, s)`.
pub fn reduce_matrix_vec<T: Scalar>(b: &Matrix<T>) -> (Matrix<T>, usize) {
    reduce_matrix_vec_with(b, &Tolerance::default())
}

pub fn reduce_matrix_vec_with<T: Scalar>(b: &Matrix<T>, tol: &Tolerance) -> (Matrix<T>, usize) {
    strip_greedy(b, Matrix::rows, |m, s| strip_row_blocks(m, s, tol))
}

/// Vector equivalence of matrices: `b ⊗ 1_a = d ⊗ 1_c` for some `a`, `c`.
pub fn mat_vec_equivalent<T: Scalar>(b: &Matrix<T>, d: &Matrix<T>) -> bool {
    let tol = Tolerance::default();
    let (rb, _) = reduce_matrix_vec_with(b, &tol);
    let (rd, _) = reduce_matrix_vec_with(d, &tol);
    rb.approx_eq(&rd, &tol)
}

/// Second semi-tensor product `(A ⊗ J_{t/n}) (B ⊗ J_{t/p})`, `t = lcm(n, p)`.
pub fn second_stp<T: Scalar>(a: &Matrix<T>, b: &Matrix<T>) -> Matrix<T> {
    let (n, p) = (a.cols(), b.rows());
    let t = lcm(n, p);
    let left = kron(a, &j_matrix(t / n).expect("nonzero factor"));
    let right = kron(b, &j_matrix(t / p).expect("nonzero factor"));
    left.mul(&right)
}

/// Matrix-on-vector action `(A ⊗ J_{t/n}) (x ⊗ 1_{t/r})`, `t = lcm(n, r)`.
pub fn stp_action<T: Scalar>(a: &Matrix<T>, x: &Matrix<T>) -> Result<Matrix<T>> {
    require_column("stp_action", x)?;
    Ok(stp_action_matrix(a, x))
}

/// Column-wise action `(A ⊗ J_{t/n}) (B ⊗ 1_{t/r})`, `t = lcm(cols(A), rows(B))`.
pub fn stp_action_matrix<T: Scalar>(a: &Matrix<T>, b: &Matrix<T>) -> Matrix<T> {
    let (n, r) = (a.cols(), b.rows());
    let t = lcm(n, r);
    let left = kron(a, &j_matrix(t / n).expect("nonzero factor"));
    let right = kron(b, &ones_vector(t / r).expect("nonzero factor"));
    left.mul(&right)
}

/// Identity-based action `(A ⊗ I_{t/n}) (x ⊗ 1_{t/r})`, `t = lcm(n, r)`.
pub fn stp_identity_action<T: Scalar>(a: &Matrix<T>, x: &Matrix<T>) -> Result<Matrix<T>> {
    require_column("stp_identity_action", x)?;
    let (n, r) = (a.cols(), x.rows());
    let t = lcm(n, r);
    let left = kron(a, &Matrix::identity(t / n));
    Ok(left.mul(&lift_vector(x, t)?))
}
