//! Controllability matrices and subspaces, their quotient-space
//! counterparts, the Kalman controllability decomposition and finite-horizon
//! Gramians.

use num_integer::lcm;

use crate::error::{Error, Result};
use crate::mixdim::{lift_vector, reduce_vector_with, vec_equivalent_with, MixVector};
use crate::numerics::{
    column_space_basis_with, expm_apply, inverse_with, rank_with, FMatrix, Matrix, Scalar,
    SubspaceBasis, Tolerance,
};
use crate::systems::LinSys;

#[derive(Debug, Clone, PartialEq)]
pub struct CtrbResult<T: Scalar> {
    /// `[B, AB, ..., A^{n-1}B]`
    pub matrix: Matrix<T>,
    pub rank: usize,
    pub basis: SubspaceBasis<T>,
}

/// Controllable subspace on the quotient space, as irreducible class
/// representatives of a basis.
#[derive(Debug, Clone, PartialEq)]
pub struct QuotientCtrb<T: Scalar> {
    pub reps: Vec<MixVector<T>>,
    pub ambient_class_dim: usize,
}

impl<T: Scalar> QuotientCtrb<T> {
    /// Number of independent classes, counted after lifting every
    /// representative to the lcm of their dimensions.
    pub fn class_rank(&self) -> usize {
        self.class_rank_with(&Tolerance::default())
    }

    pub fn class_rank_with(&self, tol: &Tolerance) -> usize {
        if self.reps.is_empty() {
            return 0;
        }
        let common = self.reps.iter().map(|r| r.irreducible.rows()).fold(1, lcm);
        let lifted: Vec<_> = self
            .reps
            .iter()
            .map(|r| lift_vector(&r.irreducible, common).expect("divides lcm"))
            .collect();
        rank_with(&Matrix::from_columns(common, &lifted), tol)
    }
}

/// Block-triangular form `T A T⁻¹ = [[A11, A12], [0, A22]]`,
/// `T B = [[B_top], [0]]` with `(A11, B_top)` controllable.
#[derive(Debug, Clone, PartialEq)]
pub struct KalmanDecomp<T: Scalar> {
    pub t: Matrix<T>,
    pub t_inv: Matrix<T>,
    pub a11: Matrix<T>,
    pub a12: Matrix<T>,
    pub a22: Matrix<T>,
    pub b_top: Matrix<T>,
    pub ctrb_dim: usize,
}

impl<T: Scalar> KalmanDecomp<T> {
    /// `T A T⁻¹` reassembled from the blocks (with the exact zero block).
    pub fn transformed_a(&self) -> Matrix<T> {
        let (k, n) = (self.ctrb_dim, self.t.rows());
        let top = Matrix::hcat(&[&self.a11, &self.a12]);
        let bottom = Matrix::hcat(&[&Matrix::zeros(n - k, k), &self.a22]);
        Matrix::vcat(&[&top, &bottom])
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Gramian {
    pub w: FMatrix,
    pub t0: f64,
    pub te: f64,
}

fn check_pair<T>(a: &Matrix<T>, b: &Matrix<T>) -> Result<()> {
    if !a.is_square() || b.rows() != a.rows() {
        return Err(Error::mismatch(
            "controllability pair",
            format!("n x n and n x r with n = {}", a.rows()),
            format!("{}x{} and {}x{}", a.rows(), a.cols(), b.rows(), b.cols()),
        ));
    }
    Ok(())
}

/// `[B, AB, ..., A^{n-1}B]`.
pub fn ctrb_matrix<T: Scalar>(a: &Matrix<T>, b: &Matrix<T>) -> Result<Matrix<T>> {
    check_pair(a, b)?;
    let mut blocks = Vec::with_capacity(a.rows());
    let mut current = b.clone();
    for _ in 0..a.rows() {
        let next = a.mul(&current);
        blocks.push(current);
        current = next;
    }
    Ok(Matrix::hcat(&blocks.iter().collect::<Vec<_>>()))
}

/// Controllability matrix grouped by input channel:
/// `[ctrb(A, B_1) | ctrb(A, B_2) | ...]`. Spans the same space as
/// `ctrb_matrix(A, [B_1 | B_2 | ...])`.
pub fn ctrb_matrix_by_channel<T: Scalar>(a: &Matrix<T>, channels: &[&Matrix<T>]) -> Result<Matrix<T>> {
    let parts = channels
        .iter()
        .map(|b| ctrb_matrix(a, b))
        .collect::<Result<Vec<_>>>()?;
    if parts.is_empty() {
        return Ok(Matrix::zeros(a.rows(), 0));
    }
    Ok(Matrix::hcat(&parts.iter().collect::<Vec<_>>()))
}

pub fn ctrb_subspace<T: Scalar>(a: &Matrix<T>, b: &Matrix<T>) -> Result<CtrbResult<T>> {
    ctrb_subspace_with(a, b, &Tolerance::default())
}

pub fn ctrb_subspace_with<T: Scalar>(
    a: &Matrix<T>,
    b: &Matrix<T>,
    tol: &Tolerance,
) -> Result<CtrbResult<T>> {
    let matrix = ctrb_matrix(a, b)?;
    let basis = column_space_basis_with(&matrix, tol);
    Ok(CtrbResult {
        rank: basis.dim(),
        matrix,
        basis,
    })
}

pub fn quotient_ctrb_subspace<T: Scalar>(s: &LinSys<T>) -> QuotientCtrb<T> {
    quotient_ctrb_subspace_with(s, &Tolerance::default())
}

/// Reduces every basis column of the controllable subspace to its
/// irreducible representative and drops duplicate classes.
pub fn quotient_ctrb_subspace_with<T: Scalar>(s: &LinSys<T>, tol: &Tolerance) -> QuotientCtrb<T> {
    let ctrb = ctrb_subspace_with(s.a(), s.b(), tol).expect("LinSys shapes are consistent");
    let mut reps: Vec<MixVector<T>> = Vec::new();
    for v in ctrb.basis.vectors() {
        let rep = reduce_vector_with(&v, tol).expect("basis column");
        let seen = reps.iter().any(|r| {
            vec_equivalent_with(&r.irreducible, &rep.irreducible, tol).expect("columns")
        });
        if !seen {
            reps.push(rep);
        }
    }
    QuotientCtrb {
        reps,
        ambient_class_dim: s.dim(),
    }
}

pub fn kalman_decomposition<T: Scalar>(a: &Matrix<T>, b: &Matrix<T>) -> Result<KalmanDecomp<T>> {
    kalman_decomposition_with(a, b, &Tolerance::default())
}

/// Builds `T⁻¹ = [ctrb basis | e_i ...]`, completing the controllable basis
/// with unit vectors taken lowest index first, and splits `T A T⁻¹`.
pub fn kalman_decomposition_with<T: Scalar>(
    a: &Matrix<T>,
    b: &Matrix<T>,
    tol: &Tolerance,
) -> Result<KalmanDecomp<T>> {
    let n = a.rows();
    let ctrb = ctrb_subspace_with(a, b, tol)?;
    let k = ctrb.rank;
    let mut columns: Vec<Matrix<T>> = ctrb.basis.vectors().collect();
    let mut current_rank = k;
    for i in 0..n {
        if columns.len() == n {
            break;
        }
        let mut e = Matrix::zeros(n, 1);
        e[(i, 0)] = T::one();
        columns.push(e);
        let r = rank_with(&Matrix::from_columns(n, &columns), tol);
        if r > current_rank {
            current_rank = r;
        } else {
            columns.pop();
        }
    }
    let t_inv = Matrix::from_columns(n, &columns);
    let t = inverse_with(&t_inv, tol)?;
    let ta = t.mul(a).mul(&t_inv);
    let tb = t.mul(b);
    Ok(KalmanDecomp {
        a11: ta.submatrix(0..k, 0..k),
        a12: ta.submatrix(0..k, k..n),
        a22: ta.submatrix(k..n, k..n),
        b_top: tb.submatrix(0..k, 0..b.cols()),
        t,
        t_inv,
        ctrb_dim: k,
    })
}

/// `W = ∫_{t0}^{te} e^{Aτ} B Bᵀ e^{Aᵀτ} dτ` by composite Simpson with
/// `quad_steps` panels (two subintervals each).
pub fn ctrb_gramian(a: &FMatrix, b: &FMatrix, t0: f64, te: f64, quad_steps: usize) -> Result<Gramian> {
    check_pair(a, b)?;
    if !(te > t0) {
        return Err(Error::InvalidHorizon { t0, te });
    }
    if quad_steps == 0 {
        return Err(Error::ZeroSize { what: "quadrature panel count" });
    }
    let n = a.rows();
    let intervals = 2 * quad_steps;
    let h = (te - t0) / intervals as f64;
    let mut w = FMatrix::zeros(n, n);
    for i in 0..=intervals {
        let weight = if i == 0 || i == intervals {
            1.0
        } else if i % 2 == 1 {
            4.0
        } else {
            2.0
        };
        let g = expm_apply(a, t0 + i as f64 * h, b);
        w = w.add(&g.mul(&g.transpose()).scale(&weight));
    }
    let w = w.scale(&(h / 3.0));
    // symmetrize away rounding asymmetry
    let w = w.add(&w.transpose()).scale(&0.5);
    Ok(Gramian { w, t0, te })
}
