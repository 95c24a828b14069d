use super::matrix::Matrix;
use super::scalar::{Scalar, Tolerance};
use crate::error::{Error, Result};

/// Linearly independent spanning set of a subspace of `R^ambient_dim`,
/// stored as the columns of `basis`. Zero columns encode the zero subspace.
#[derive(Debug, Clone, PartialEq)]
pub struct SubspaceBasis<T: Scalar> {
    ambient_dim: usize,
    basis: Matrix<T>,
}

impl<T: Scalar> SubspaceBasis<T> {
    pub fn zero(ambient_dim: usize) -> Self {
        SubspaceBasis {
            ambient_dim,
            basis: Matrix::zeros(ambient_dim, 0),
        }
    }

    pub fn full(ambient_dim: usize) -> Self {
        SubspaceBasis {
            ambient_dim,
            basis: Matrix::identity(ambient_dim),
        }
    }

    /// Wraps `basis` after checking that its columns are independent.
    pub fn from_independent(basis: Matrix<T>) -> Result<Self> {
        Self::from_independent_with(basis, &Tolerance::default())
    }

    pub fn from_independent_with(basis: Matrix<T>, tol: &Tolerance) -> Result<Self> {
        let r = rank_with(&basis, tol);
        if r != basis.cols() {
            return Err(Error::mismatch(
                "subspace basis rank",
                basis.cols(),
                r,
            ));
        }
        Ok(SubspaceBasis {
            ambient_dim: basis.rows(),
            basis,
        })
    }

    /// Span of the given columns, keeping only the independent ones.
    pub fn span_of(vectors: &Matrix<T>) -> Self {
        column_space_basis(vectors)
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn basis(&self) -> &Matrix<T> {
        &self.basis
    }

    pub fn vectors(&self) -> impl Iterator<Item = Matrix<T>> + '_ {
        self.basis.columns()
    }

    pub fn contains(&self, v: &Matrix<T>) -> Result<bool> {
        in_span(self, v)
    }

    /// Mutual containment of the two spans.
    pub fn same_span(&self, other: &SubspaceBasis<T>, tol: &Tolerance) -> bool {
        if self.ambient_dim != other.ambient_dim || self.dim() != other.dim() {
            return false;
        }
        let joint = Matrix::hcat(&[&self.basis, &other.basis]);
        rank_with(&joint, tol) == self.dim()
    }
}

/// Row reduction summary: rank and pivot columns, leftmost first.
#[derive(Debug, Clone)]
pub struct Echelon<T: Scalar> {
    pub rank: usize,
    pub pivots: Vec<usize>,
    pub reduced: Matrix<T>,
}

/// Gaussian elimination scanning columns left to right with partial (row)
/// pivoting. Under `f64` a pivot counts only if it exceeds
/// `max(rows, cols) * tol.rel * max|m|`; rationals are exact.
pub fn row_echelon<T: Scalar>(m: &Matrix<T>, tol: &Tolerance) -> Echelon<T> {
    let (rows, cols) = m.shape();
    let threshold = tol.rank_threshold(rows, cols, m.max_abs());
    let mut work = m.clone();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        if row == rows {
            break;
        }
        let best = (row..rows)
            .filter(|&i| !work[(i, col)].is_negligible(threshold))
            .max_by(|&a, &b| {
                work[(a, col)]
                    .magnitude()
                    .total_cmp(&work[(b, col)].magnitude())
            });
        let Some(p) = best else {
            for i in row..rows {
                work[(i, col)] = T::zero();
            }
            continue;
        };
        swap_rows(&mut work, row, p);
        let pivot = work[(row, col)].clone();
        for i in row + 1..rows {
            let factor = work[(i, col)].clone() / pivot.clone();
            if factor.is_zero() {
                continue;
            }
            for j in col..cols {
                let delta = factor.clone() * work[(row, j)].clone();
                work[(i, j)] = work[(i, j)].clone() - delta;
            }
            work[(i, col)] = T::zero();
        }
        pivots.push(col);
        row += 1;
    }
    Echelon {
        rank: pivots.len(),
        pivots,
        reduced: work,
    }
}

fn swap_rows<T: Scalar>(m: &mut Matrix<T>, a: usize, b: usize) {
    if a == b {
        return;
    }
    for j in 0..m.cols() {
        let tmp = m[(a, j)].clone();
        m[(a, j)] = m[(b, j)].clone();
        m[(b, j)] = tmp;
    }
}

pub fn rank<T: Scalar>(m: &Matrix<T>) -> usize {
    rank_with(m, &Tolerance::default())
}

pub fn rank_with<T: Scalar>(m: &Matrix<T>, tol: &Tolerance) -> usize {
    row_echelon(m, tol).rank
}

/// Pivot columns of `m`: the leftmost maximal independent subset of its
/// columns, returned as a basis of the column space.
pub fn column_space_basis<T: Scalar>(m: &Matrix<T>) -> SubspaceBasis<T> {
    column_space_basis_with(m, &Tolerance::default())
}

pub fn column_space_basis_with<T: Scalar>(m: &Matrix<T>, tol: &Tolerance) -> SubspaceBasis<T> {
    let ech = row_echelon(m, tol);
    SubspaceBasis {
        ambient_dim: m.rows(),
        basis: m.select_columns(&ech.pivots),
    }
}

pub fn in_span<T: Scalar>(s: &SubspaceBasis<T>, v: &Matrix<T>) -> Result<bool> {
    in_span_with(s, v, &Tolerance::default())
}

pub fn in_span_with<T: Scalar>(s: &SubspaceBasis<T>, v: &Matrix<T>, tol: &Tolerance) -> Result<bool> {
    if v.shape() != (s.ambient_dim, 1) {
        return Err(Error::mismatch(
            "in_span",
            format!("{}x1 vector", s.ambient_dim),
            format!("{}x{}", v.rows(), v.cols()),
        ));
    }
    let joint = Matrix::hcat(&[&s.basis, v]);
    Ok(rank_with(&joint, tol) == s.dim())
}

/// Gauss-Jordan inverse.
pub fn inverse<T: Scalar>(m: &Matrix<T>) -> Result<Matrix<T>> {
    inverse_with(m, &Tolerance::default())
}

pub fn inverse_with<T: Scalar>(m: &Matrix<T>, tol: &Tolerance) -> Result<Matrix<T>> {
    if !m.is_square() {
        return Err(Error::mismatch(
            "inverse",
            "square matrix",
            format!("{}x{}", m.rows(), m.cols()),
        ));
    }
    solve_with(m, &Matrix::identity(m.rows()), tol)
}

/// Solves `a * x = b` for square nonsingular `a`.
pub fn solve_with<T: Scalar>(a: &Matrix<T>, b: &Matrix<T>, tol: &Tolerance) -> Result<Matrix<T>> {
    let n = a.rows();
    if !a.is_square() || b.rows() != n {
        return Err(Error::mismatch(
            "solve",
            format!("square system with {n} rows"),
            format!("{}x{} | {}x{}", a.rows(), a.cols(), b.rows(), b.cols()),
        ));
    }
    let k = b.cols();
    let mut aug = Matrix::hcat(&[a, b]);
    let threshold = tol.rank_threshold(n, n, a.max_abs());
    for col in 0..n {
        let p = (col..n)
            .max_by(|&x, &y| aug[(x, col)].magnitude().total_cmp(&aug[(y, col)].magnitude()))
            .filter(|&p| !aug[(p, col)].is_negligible(threshold))
            .ok_or(Error::Singular("matrix"))?;
        swap_rows(&mut aug, col, p);
        let pivot = aug[(col, col)].clone();
        for j in col..n + k {
            aug[(col, j)] = aug[(col, j)].clone() / pivot.clone();
        }
        for i in 0..n {
            if i == col || aug[(i, col)].is_zero() {
                continue;
            }
            let factor = aug[(i, col)].clone();
            for j in col..n + k {
                let delta = factor.clone() * aug[(col, j)].clone();
                aug[(i, j)] = aug[(i, j)].clone() - delta;
            }
        }
    }
    Ok(aug.submatrix(0..n, n..n + k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{rat, RMatrix};

    fn r(rows: &[&[i64]]) -> RMatrix {
        RMatrix::from_i64_rows(rows)
    }

    #[test]
    fn rank_of_zero_matrix() {
        assert_eq!(rank(&RMatrix::zeros(3, 3)), 0);
        assert_eq!(rank(&Matrix::<f64>::zeros(3, 3)), 0);
    }

    #[test]
    fn rank_double_integrator_ctrb() {
        assert_eq!(rank(&r(&[&[0, 1], &[1, 0]])), 2);
    }

    #[test]
    fn column_basis_keeps_independent_columns() {
        let b = column_space_basis(&r(&[&[0, 1], &[1, 0]]));
        assert_eq!(b.basis(), &r(&[&[0, 1], &[1, 0]]));
        let b = column_space_basis(&r(&[&[1, 2], &[2, 4]]));
        assert_eq!(b.basis(), &r(&[&[1], &[2]]));
    }

    #[test]
    fn span_membership() {
        let e2 = SubspaceBasis::from_independent(r(&[&[0], &[1]])).unwrap();
        assert!(in_span(&e2, &r(&[&[0], &[0]])).unwrap());
        assert!(!in_span(&e2, &r(&[&[1], &[0]])).unwrap());
        assert!(in_span(&e2, &r(&[&[1], &[0], &[0]])).is_err());
        assert!(in_span(&SubspaceBasis::<f64>::zero(2), &Matrix::zeros(2, 1)).unwrap());
    }

    #[test]
    fn dependent_basis_rejected() {
        assert!(SubspaceBasis::from_independent(r(&[&[1, 2], &[2, 4]])).is_err());
    }

    #[test]
    fn inverse_exact() {
        let m = r(&[&[2, 1], &[1, 1]]);
        let inv = inverse(&m).unwrap();
        assert_eq!(inv, r(&[&[1, -1], &[-1, 2]]));
        let half = RMatrix::from_rows(vec![vec![rat(1, 2)]]).unwrap();
        assert_eq!(inverse(&half).unwrap(), r(&[&[2]]));
        assert!(matches!(inverse(&r(&[&[1, 2], &[2, 4]])), Err(Error::Singular(_))));
    }

    #[test]
    fn float_rank_ignores_roundoff() {
        let m = Matrix::from_rows(vec![vec![1.0, 1.0 / 3.0], vec![3.0, 1.0 + 1e-15]]).unwrap();
        assert_eq!(rank(&m), 1);
    }
}
