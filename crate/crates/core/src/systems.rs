//! State-space models and how they move between dimensions.

use crate::error::{Error, Result};
use crate::mixdim::{divisors_desc, strip_j_blocks, strip_row_blocks};
use crate::numerics::{inverse, j_matrix, kron, ones_vector, Matrix, Scalar, Tolerance};

/// Continuous-time pair `ẋ = A x + B u` with `A: n x n`, `B: n x r`.
///
/// `r = 0` is allowed for input-free blocks.
#[derive(Debug, Clone, PartialEq)]
pub struct LinSys<T: Scalar> {
    pub name: String,
    a: Matrix<T>,
    b: Matrix<T>,
}

impl<T: Scalar> LinSys<T> {
    pub fn new(name: impl Into<String>, a: Matrix<T>, b: Matrix<T>) -> Result<Self> {
        if !a.is_square() || a.rows() == 0 {
            return Err(Error::mismatch(
                "state matrix",
                "non-empty square matrix",
                format!("{}x{}", a.rows(), a.cols()),
            ));
        }
        if b.rows() != a.rows() {
            return Err(Error::mismatch("input matrix rows", a.rows(), b.rows()));
        }
        Ok(LinSys {
            name: name.into(),
            a,
            b,
        })
    }

    pub fn a(&self) -> &Matrix<T> {
        &self.a
    }

    pub fn b(&self) -> &Matrix<T> {
        &self.b
    }

    pub fn dim(&self) -> usize {
        self.a.rows()
    }

    pub fn inputs(&self) -> usize {
        self.b.cols()
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn to_f64(&self) -> LinSys<f64> {
        LinSys {
            name: self.name.clone(),
            a: self.a.to_f64(),
            b: self.b.to_f64(),
        }
    }
}

/// Irreducible representative of a system's class together with the factor
/// that was stripped to reach it.
#[derive(Debug, Clone, PartialEq)]
pub struct QuotientSysRep<T: Scalar> {
    pub sys: LinSys<T>,
    pub multiplier_stripped: usize,
}

/// `(A ⊗ J_{n/p}, B ⊗ 1_{n/p})` on dimension `n`.
pub fn lift_system<T: Scalar>(s: &LinSys<T>, n: usize) -> Result<LinSys<T>> {
    let p = s.dim();
    if n == 0 || n % p != 0 {
        return Err(Error::NotDivisible { from: p, to: n });
    }
    let k = n / p;
    Ok(LinSys {
        name: s.name.clone(),
        a: kron(&s.a, &j_matrix(k)?),
        b: kron(&s.b, &ones_vector(k)?),
    })
}

pub fn project_system<T: Scalar>(s: &LinSys<T>) -> QuotientSysRep<T> {
    project_system_with(s, &Tolerance::default())
}

/// Strips the largest common factor `k` with `A = A0 ⊗ J_k` and
/// `B = B0 ⊗ 1_k` at the same time, repeating until none is left.
pub fn project_system_with<T: Scalar>(s: &LinSys<T>, tol: &Tolerance) -> QuotientSysRep<T> {
    let mut current = s.clone();
    let mut stripped = 1;
    loop {
        let step = divisors_desc(current.dim()).find_map(|k| {
            let a = strip_j_blocks(&current.a, k, tol)?;
            let b = strip_row_blocks(&current.b, k, tol)?;
            Some((k, a, b))
        });
        let Some((k, a, b)) = step else { break };
        current.a = a;
        current.b = b;
        stripped *= k;
    }
    QuotientSysRep {
        sys: current,
        multiplier_stripped: stripped,
    }
}

/// Two systems are equivalent when their irreducible representatives agree.
pub fn systems_equivalent<T: Scalar>(s1: &LinSys<T>, s2: &LinSys<T>) -> Result<bool> {
    if s1.inputs() != s2.inputs() {
        return Err(Error::mismatch("systems_equivalent inputs", s1.inputs(), s2.inputs()));
    }
    let tol = Tolerance::default();
    let r1 = project_system_with(s1, &tol).sys;
    let r2 = project_system_with(s2, &tol).sys;
    Ok(r1.a.approx_eq(&r2.a, &tol) && r1.b.approx_eq(&r2.b, &tol))
}

/// Applies the `n`-dimensional member `T ⊗ I_{n/m}` of the pseudo-coordinate
/// class of `t`: returns `(T̃ A T̃⁻¹, T̃ B)`.
pub fn apply_pseudo_transform<T: Scalar>(s: &LinSys<T>, t: &Matrix<T>) -> Result<LinSys<T>> {
    if !t.is_square() || t.rows() == 0 {
        return Err(Error::mismatch(
            "pseudo transform",
            "non-empty square matrix",
            format!("{}x{}", t.rows(), t.cols()),
        ));
    }
    let (m, n) = (t.rows(), s.dim());
    if n % m != 0 {
        return Err(Error::NotDivisible { from: m, to: n });
    }
    let full = kron(t, &Matrix::identity(n / m));
    let inv = inverse(&full).map_err(|_| Error::Singular("transformation"))?;
    Ok(LinSys {
        name: s.name.clone(),
        a: full.mul(&s.a).mul(&inv),
        b: full.mul(&s.b),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{rat, RMatrix};

    fn sys(a: &[&[i64]], b: &[&[i64]]) -> LinSys<crate::numerics::Rational> {
        LinSys::new("s", RMatrix::from_i64_rows(a), RMatrix::from_i64_rows(b)).unwrap()
    }

    fn example_sigma1() -> LinSys<crate::numerics::Rational> {
        sys(&[&[0, 1], &[0, 0]], &[&[0], &[1]])
    }

    fn example_sigma2() -> LinSys<crate::numerics::Rational> {
        sys(&[&[0, 0, 1], &[0, 0, 0], &[0, 1, 0]], &[&[0], &[1], &[0]])
    }

    #[test]
    fn rejects_malformed_systems() {
        assert!(LinSys::new("x", RMatrix::zeros(2, 3), RMatrix::zeros(2, 1)).is_err());
        assert!(LinSys::new("x", RMatrix::zeros(2, 2), RMatrix::zeros(3, 1)).is_err());
        assert!(LinSys::new("x", RMatrix::zeros(2, 2), RMatrix::zeros(2, 0)).is_ok());
    }

    #[test]
    fn lift_to_same_dimension_is_noop() {
        let s = example_sigma1();
        assert_eq!(lift_system(&s, 2).unwrap(), s);
    }

    #[test]
    fn lift_sigma1_to_six() {
        let l = lift_system(&example_sigma1(), 6).unwrap();
        for i in 0..6 {
            for j in 0..6 {
                let want = if i < 3 && j >= 3 { rat(1, 3) } else { rat(0, 1) };
                assert_eq!(l.a()[(i, j)], want);
            }
        }
        assert_eq!(l.b(), &RMatrix::from_i64_rows(&[&[0], &[0], &[0], &[1], &[1], &[1]]));
    }

    #[test]
    fn lift_sigma2_to_six() {
        let l = lift_system(&example_sigma2(), 6).unwrap();
        for i in 0..6 {
            for j in 0..6 {
                let hit = (i < 2 && j >= 4) || (i >= 4 && (2..4).contains(&j));
                let want = if hit { rat(1, 2) } else { rat(0, 1) };
                assert_eq!(l.a()[(i, j)], want, "({i},{j})");
            }
        }
        assert_eq!(l.b(), &RMatrix::from_i64_rows(&[&[0], &[0], &[1], &[1], &[0], &[0]]));
    }

    #[test]
    fn lift_requires_divisibility() {
        match lift_system(&example_sigma1(), 3) {
            Err(Error::NotDivisible { from: 2, to: 3 }) => {}
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn projection_round_trip() {
        let s = example_sigma1();
        let rep = project_system(&lift_system(&s, 4).unwrap());
        assert_eq!(rep.sys, s);
        assert_eq!(rep.multiplier_stripped, 2);
        assert_eq!(project_system(&s).multiplier_stripped, 1);
        let rep = project_system(&lift_system(&example_sigma2(), 12).unwrap());
        assert_eq!(rep.sys, example_sigma2());
        assert_eq!(rep.multiplier_stripped, 4);
    }

    #[test]
    fn projection_needs_joint_factor() {
        // A = 0 is J-reducible by any factor, B = [1, 2]^T is not row-replicated
        let s = sys(&[&[0, 0], &[0, 0]], &[&[1], &[2]]);
        assert_eq!(project_system(&s).multiplier_stripped, 1);
    }

    #[test]
    fn equivalence_examples() {
        let s = example_sigma1();
        assert!(systems_equivalent(&s, &lift_system(&s, 6).unwrap()).unwrap());
        assert!(!systems_equivalent(&s, &example_sigma2()).unwrap());
        let other = sys(&[&[1, 0], &[0, 0]], &[&[0], &[1]]);
        assert!(!systems_equivalent(&s, &other).unwrap());
        let two_inputs = sys(&[&[0]], &[&[1, 1]]);
        assert!(systems_equivalent(&s, &two_inputs).is_err());
    }

    #[test]
    fn pseudo_transform_identity_and_permutation() {
        let s = sys(&[&[1, 2], &[3, 4]], &[&[5], &[6]]);
        assert_eq!(apply_pseudo_transform(&s, &RMatrix::identity(2)).unwrap(), s);
        let p = RMatrix::from_i64_rows(&[&[0, 1], &[1, 0]]);
        let t = apply_pseudo_transform(&s, &p).unwrap();
        assert_eq!(t.a(), &RMatrix::from_i64_rows(&[&[4, 3], &[2, 1]]));
        assert_eq!(t.b(), &RMatrix::from_i64_rows(&[&[6], &[5]]));
    }

    #[test]
    fn pseudo_transform_lifts_smaller_matrix() {
        let s = lift_system(&example_sigma1(), 4).unwrap();
        let t = RMatrix::from_i64_rows(&[&[1, 1], &[0, 1]]);
        let moved = apply_pseudo_transform(&s, &t).unwrap();
        let back = apply_pseudo_transform(&moved, &inverse(&t).unwrap()).unwrap();
        assert_eq!(back, s);
        assert!(apply_pseudo_transform(&s, &RMatrix::identity(3)).is_err());
        let singular = RMatrix::from_i64_rows(&[&[1, 1], &[1, 1]]);
        assert!(matches!(apply_pseudo_transform(&s, &singular), Err(Error::Singular(_))));
    }
}
