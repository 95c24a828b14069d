//! Decision procedures for transients between systems of different
//! dimensions.
//!
//! [`check_realization`] tests whether the embedded controllable subspace of
//! the smaller system can be completed to the whole target space from inside
//! the other system's controllable subspace, and returns the completing
//! subspace as a witness. [`build_transient_model`] assembles the weighted
//! blend on the lcm-dimension space and [`check_modeling_condition`] verifies
//! that its controllable subspace contains both lifted subsystem subspaces.

use num_integer::lcm;

use crate::controllability::{ctrb_matrix_by_channel, ctrb_subspace_with};
use crate::error::{Error, Result};
use crate::mixdim::lift_vector;
use crate::numerics::{
    column_space_basis_with, in_span_with, j_matrix, kron, ones_vector, rank_with, Matrix, Scalar,
    SubspaceBasis, Tolerance,
};
use crate::systems::LinSys;

pub const NOTE_DIRECT_SUM: &str =
    "direct sum read as a pair of subspaces with trivial intersection spanning the target space";
pub const NOTE_SUFFICIENT: &str =
    "the rank condition is sufficient; a failed check means the condition is not met, not that no transient exists";
pub const NOTE_SWAPPED: &str =
    "first system has the larger state space; roles swapped so the smaller subspace is embedded";
pub const NOTE_LIFTED_SUM: &str =
    "subsystem subspaces compared with the blend after lifting to the common dimension";

/// `ẋ = A x`, `ẋᶜ = 0` on dimension `q`: A is padded block-diagonally with a
/// zero block and B with zero rows.
pub fn augment_with_zero_dynamics<T: Scalar>(s: &LinSys<T>, q: usize) -> Result<LinSys<T>> {
    let p = s.dim();
    if q < p {
        return Err(Error::Shrinking { from: p, to: q });
    }
    let a = Matrix::from_fn(q, q, |i, j| {
        if i < p && j < p {
            s.a()[(i, j)].clone()
        } else {
            T::zero()
        }
    });
    let b = Matrix::from_fn(q, s.inputs(), |i, j| {
        if i < p {
            s.b()[(i, j)].clone()
        } else {
            T::zero()
        }
    });
    LinSys::new(s.name.clone(), a, b)
}

/// Zero-padding `φ_n(v) = (v_1, ..., v_m, 0, ..., 0)ᵀ`.
pub fn embed<T: Scalar>(v: &Matrix<T>, n: usize) -> Result<Matrix<T>> {
    let m = v.rows();
    if n < m {
        return Err(Error::Shrinking { from: m, to: n });
    }
    Ok(Matrix::from_fn(n, v.cols(), |i, j| {
        if i < m {
            v[(i, j)].clone()
        } else {
            T::zero()
        }
    }))
}

pub fn embed_subspace<T: Scalar>(s: &SubspaceBasis<T>, n: usize) -> Result<SubspaceBasis<T>> {
    if n < s.ambient_dim() {
        return Err(Error::Shrinking {
            from: s.ambient_dim(),
            to: n,
        });
    }
    // zero-padding preserves column independence
    Ok(SubspaceBasis::span_of(&embed(s.basis(), n)?))
}

/// `U ⊕ V = R^q`: dimensions add up to `q` and the joint rank is `q`.
pub fn direct_sum_check<T: Scalar>(u: &SubspaceBasis<T>, v: &SubspaceBasis<T>, q: usize) -> Result<bool> {
    direct_sum_check_with(u, v, q, &Tolerance::default())
}

pub fn direct_sum_check_with<T: Scalar>(
    u: &SubspaceBasis<T>,
    v: &SubspaceBasis<T>,
    q: usize,
    tol: &Tolerance,
) -> Result<bool> {
    if u.ambient_dim() != q || v.ambient_dim() != q {
        return Err(Error::mismatch(
            "direct_sum_check",
            format!("ambient dimension {q}"),
            format!("{} and {}", u.ambient_dim(), v.ambient_dim()),
        ));
    }
    if u.dim() + v.dim() != q {
        return Ok(false);
    }
    Ok(rank_with(&Matrix::hcat(&[u.basis(), v.basis()]), tol) == q)
}

#[derive(Debug, Clone, PartialEq)]
pub struct RealizationReport<T: Scalar> {
    /// Whether the sufficient rank condition holds.
    pub realizable: bool,
    pub p: usize,
    pub q: usize,
    /// Target dimension `max(p, q)` the smaller subspace is embedded into.
    pub target_dim: usize,
    pub dim_c1: usize,
    pub dim_c2: usize,
    pub c1: SubspaceBasis<T>,
    pub c2: SubspaceBasis<T>,
    /// Completing subspace taken from the larger system's controllable
    /// subspace; empty when the condition fails or no completion is needed.
    pub witness: SubspaceBasis<T>,
    pub swapped: bool,
    pub notes: Vec<String>,
}

pub fn check_realization<T: Scalar>(s1: &LinSys<T>, s2: &LinSys<T>) -> RealizationReport<T> {
    check_realization_with(s1, s2, &Tolerance::default())
}

pub fn check_realization_with<T: Scalar>(
    s1: &LinSys<T>,
    s2: &LinSys<T>,
    tol: &Tolerance,
) -> RealizationReport<T> {
    let c1 = ctrb_subspace_with(s1.a(), s1.b(), tol).expect("LinSys shapes").basis;
    let c2 = ctrb_subspace_with(s2.a(), s2.b(), tol).expect("LinSys shapes").basis;
    let (p, q) = (s1.dim(), s2.dim());
    let swapped = p > q;
    let (small, large) = if swapped { (&c2, &c1) } else { (&c1, &c2) };
    let target = p.max(q);
    let embedded = embed_subspace(small, target).expect("target is the larger dimension");

    // greedy completion, lowest-index column of the larger subspace first
    let mut joint = embedded.basis().clone();
    let mut chosen = Vec::new();
    let mut current = embedded.dim();
    for v in large.vectors() {
        if current == target {
            break;
        }
        let candidate = Matrix::hcat(&[&joint, &v]);
        let r = rank_with(&candidate, tol);
        if r > current {
            joint = candidate;
            current = r;
            chosen.push(v);
        }
    }
    let realizable = current == target;
    let witness = if realizable {
        SubspaceBasis::span_of(&Matrix::from_columns(target, &chosen))
    } else {
        SubspaceBasis::zero(target)
    };

    let mut notes = vec![NOTE_DIRECT_SUM.to_string()];
    if swapped {
        notes.push(NOTE_SWAPPED.to_string());
    }
    if !realizable {
        notes.push(NOTE_SUFFICIENT.to_string());
    }
    RealizationReport {
        realizable,
        p,
        q,
        target_dim: target,
        dim_c1: c1.dim(),
        dim_c2: c2.dim(),
        c1,
        c2,
        witness,
        swapped,
        notes,
    }
}

/// Blend weights, either as formal masses (convex form) or as free positive
/// coefficients.
#[derive(Debug, Clone, PartialEq)]
pub enum Weights<T> {
    Masses(T, T),
    Direct { alpha: T, beta: T },
}

impl<T: Scalar> Weights<T> {
    /// Resolves to `(alpha, beta)`; masses give `alpha = m1 / (m1 + m2)`,
    /// `beta = 1 - alpha`.
    pub fn resolve(&self) -> Result<(T, T)> {
        let positive = |name, v: &T| {
            if *v > T::zero() {
                Ok(())
            } else {
                Err(Error::NonPositiveWeight {
                    name,
                    value: v.to_string(),
                })
            }
        };
        match self {
            Weights::Masses(m1, m2) => {
                positive("m1", m1)?;
                positive("m2", m2)?;
                let mu = m1.clone() / (m1.clone() + m2.clone());
                let rest = T::one() - mu.clone();
                Ok((mu, rest))
            }
            Weights::Direct { alpha, beta } => {
                positive("alpha", alpha)?;
                positive("beta", beta)?;
                Ok((alpha.clone(), beta.clone()))
            }
        }
    }
}

/// Blended transient dynamics on `n = lcm(p, q)`:
/// `ż = (α A1 ⊗ J_{n/p} + β A2 ⊗ J_{n/q}) z + α (B1 ⊗ 1_{n/p}) u1 + β (B2 ⊗ 1_{n/q}) u2`.
#[derive(Debug, Clone, PartialEq)]
pub struct TransientModel<T: Scalar> {
    /// State matrix and combined input matrix `[B1* | B2*]`.
    pub base: LinSys<T>,
    pub alpha: T,
    pub beta: T,
    pub source_dims: (usize, usize),
    pub input_split: (usize, usize),
}

impl<T: Scalar> TransientModel<T> {
    pub fn dim(&self) -> usize {
        self.base.dim()
    }

    pub fn a(&self) -> &Matrix<T> {
        self.base.a()
    }

    pub fn b1_star(&self) -> Matrix<T> {
        let n = self.dim();
        self.base.b().submatrix(0..n, 0..self.input_split.0)
    }

    pub fn b2_star(&self) -> Matrix<T> {
        let n = self.dim();
        let (r, s) = self.input_split;
        self.base.b().submatrix(0..n, r..r + s)
    }

    /// `[ctrb(A*, B1*) | ctrb(A*, B2*)]`, grouped by input channel.
    pub fn ctrb_matrix(&self) -> Matrix<T> {
        ctrb_matrix_by_channel(self.a(), &[&self.b1_star(), &self.b2_star()])
            .expect("blend shapes are consistent")
    }

    pub fn to_f64(&self) -> TransientModel<f64> {
        TransientModel {
            base: self.base.to_f64(),
            alpha: self.alpha.to_f64(),
            beta: self.beta.to_f64(),
            source_dims: self.source_dims,
            input_split: self.input_split,
        }
    }
}

pub fn build_transient_model<T: Scalar>(
    s1: &LinSys<T>,
    s2: &LinSys<T>,
    weights: &Weights<T>,
) -> Result<TransientModel<T>> {
    let (alpha, beta) = weights.resolve()?;
    let (p, q) = (s1.dim(), s2.dim());
    let n = lcm(p, q);
    let a1 = kron(s1.a(), &j_matrix(n / p)?).scale(&alpha);
    let a2 = kron(s2.a(), &j_matrix(n / q)?).scale(&beta);
    let b1 = kron(s1.b(), &ones_vector(n / p)?).scale(&alpha);
    let b2 = kron(s2.b(), &ones_vector(n / q)?).scale(&beta);
    let base = LinSys::new(
        format!("blend({}, {})", s1.name, s2.name),
        a1.add(&a2),
        Matrix::hcat(&[&b1, &b2]),
    )?;
    Ok(TransientModel {
        base,
        alpha,
        beta,
        source_dims: (p, q),
        input_split: (s1.inputs(), s2.inputs()),
    })
}

/// Which subsystem a tested vector was lifted from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Source {
    First,
    Second,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TestedVector<T: Scalar> {
    pub source: Source,
    pub vector: Matrix<T>,
    pub in_cz: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModelingReport<T: Scalar> {
    pub holds: bool,
    pub n: usize,
    pub tested_vectors: Vec<TestedVector<T>>,
    pub dim_cz: usize,
    pub cz: SubspaceBasis<T>,
    pub notes: Vec<String>,
}

pub fn check_modeling_condition<T: Scalar>(
    s1: &LinSys<T>,
    s2: &LinSys<T>,
    model: &TransientModel<T>,
) -> Result<ModelingReport<T>> {
    check_modeling_condition_with(s1, s2, model, &Tolerance::default())
}

/// Lifts every basis vector of both subsystem controllable subspaces to the
/// blend dimension and tests membership in the blend's controllable
/// subspace.
pub fn check_modeling_condition_with<T: Scalar>(
    s1: &LinSys<T>,
    s2: &LinSys<T>,
    model: &TransientModel<T>,
    tol: &Tolerance,
) -> Result<ModelingReport<T>> {
    let n = model.dim();
    if model.source_dims != (s1.dim(), s2.dim())
        || model.input_split != (s1.inputs(), s2.inputs())
        || n != lcm(s1.dim(), s2.dim())
    {
        return Err(Error::mismatch(
            "check_modeling_condition",
            format!(
                "model over dims {:?} with inputs {:?}",
                model.source_dims, model.input_split
            ),
            format!(
                "systems of dims ({}, {}) with inputs ({}, {})",
                s1.dim(),
                s2.dim(),
                s1.inputs(),
                s2.inputs()
            ),
        ));
    }
    let cz = column_space_basis_with(&model.ctrb_matrix(), tol);
    let mut tested = Vec::new();
    for (source, s) in [(Source::First, s1), (Source::Second, s2)] {
        let basis = ctrb_subspace_with(s.a(), s.b(), tol)?.basis;
        for v in basis.vectors() {
            let lifted = lift_vector(&v, n)?;
            let in_cz = in_span_with(&cz, &lifted, tol)?;
            tested.push(TestedVector {
                source,
                vector: lifted,
                in_cz,
            });
        }
    }
    Ok(ModelingReport {
        holds: tested.iter().all(|t| t.in_cz),
        n,
        dim_cz: cz.dim(),
        cz,
        tested_vectors: tested,
        notes: vec![NOTE_LIFTED_SUM.to_string()],
    })
}
