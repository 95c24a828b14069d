use super::matrix::FMatrix;

const MAX_TERMS: usize = 60;

/// Computes `e^{A t} v` without forming the exponential.
///
/// `A t` is scaled by `2^-s` until its infinity norm is at most 1/2, the
/// truncated Taylor series of the scaled exponential is applied to `v`, and
/// the application is repeated `2^s` times.
pub fn expm_apply(a: &FMatrix, t: f64, v: &FMatrix) -> FMatrix {
    assert!(a.is_square() && a.rows() == v.rows(), "expm_apply shape mismatch");
    let norm = a.norm_inf() * t.abs();
    if norm == 0.0 {
        return v.clone();
    }
    let squarings = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as u32
    } else {
        0
    };
    let h = t / f64::from(2u32.pow(squarings));
    let scaled = a.scale(&h);
    let mut w = v.clone();
    for _ in 0..2u64.pow(squarings) {
        w = taylor_apply(&scaled, &w);
    }
    w
}

/// Full matrix exponential `e^{A t}`, column by column.
pub fn expm(a: &FMatrix, t: f64) -> FMatrix {
    expm_apply(a, t, &FMatrix::identity(a.rows()))
}

fn taylor_apply(m: &FMatrix, v: &FMatrix) -> FMatrix {
    let mut sum = v.clone();
    let mut term = v.clone();
    for k in 1..MAX_TERMS {
        term = m.mul(&term).scale(&(1.0 / k as f64));
        sum = sum.add(&term);
        if term.max_abs() <= f64::EPSILON * 1e-2 * sum.max_abs() {
            break;
        }
    }
    sum
}
