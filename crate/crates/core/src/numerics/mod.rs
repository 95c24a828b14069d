//! Scalar backends and dense linear algebra.

mod expm;
mod linalg;
mod matrix;
mod scalar;

pub use expm::{expm, expm_apply};
pub use linalg::{
    column_space_basis, column_space_basis_with, in_span, in_span_with, inverse, inverse_with,
    rank, rank_with, row_echelon, solve_with, Echelon, SubspaceBasis,
};
pub use matrix::{j_matrix, kron, ones_vector, FMatrix, Matrix, RMatrix};
pub use scalar::{parse_rational, rat, Rational, Scalar, Tolerance};
