//! Known misprints in widely circulated versions of reference examples.
//!
//! When a computed result is recognised as one of those examples, the
//! report attaches a footnote next to the affected entry instead of
//! silently disagreeing with the printed figure.

use crate::numerics::{rat, RMatrix, Scalar};
use crate::realization::{build_transient_model, TransientModel, Weights};
use crate::systems::LinSys;

/// One misprinted entry: 1-based position in the controllability matrix
/// and the value shown in print.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Misprint {
    pub row: usize,
    pub col: usize,
    pub printed: &'static str,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Footnote {
    pub entries: Vec<Misprint>,
    pub text: &'static str,
}

/// The clutch example: a double integrator blended into a three-state
/// chain with weights 3/2 and 1/2.
pub fn reference_blend() -> TransientModel<crate::numerics::Rational> {
    let s1 = LinSys::new(
        "sigma1",
        RMatrix::from_i64_rows(&[&[0, 1], &[0, 0]]),
        RMatrix::from_i64_rows(&[&[0], &[1]]),
    )
    .expect("valid");
    let s2 = LinSys::new(
        "sigma2",
        RMatrix::from_i64_rows(&[&[0, 0, 1], &[0, 0, 0], &[0, 1, 0]]),
        RMatrix::from_i64_rows(&[&[0], &[1], &[0]]),
    )
    .expect("valid");
    build_transient_model(
        &s1,
        &s2,
        &Weights::Direct {
            alpha: rat(3, 2),
            beta: rat(1, 2),
        },
    )
    .expect("positive weights")
}

const SWAPPED_DIGITS: &str = "row 3 of A* is [0, 0, 0, 1/2, 1/2, 1/2] and B1* ends in three entries \
     of 3/2, so A* B1* has 9/4 in row 3; the commonly printed matrix shows 4/9 here while its own \
     span list uses 9/4";

const COPIED_ROWS: &str = "rows 5 and 6 of A* are [0, 0, 1/4, 1/4, 0, 0], so these entries are a \
     quarter of rows 3 and 4 of the previous column; the commonly printed matrix repeats the row 1 \
     values here";

fn ctrb_footnotes() -> Vec<Footnote> {
    let copied = [(6, "27/128"), (9, "3/8"), (10, "3/32"), (11, "3/32"), (12, "3/128")];
    vec![
        Footnote {
            entries: vec![Misprint {
                row: 3,
                col: 2,
                printed: "4/9",
            }],
            text: SWAPPED_DIGITS,
        },
        Footnote {
            entries: [5, 6]
                .iter()
                .flat_map(|&row| copied.iter().map(move |&(col, printed)| Misprint { row, col, printed }))
                .collect(),
            text: COPIED_ROWS,
        },
    ]
}

/// Footnotes for the blend controllability matrix of `model`.
pub fn blend_ctrb_footnotes<T: Scalar>(model: &TransientModel<T>) -> Vec<Footnote> {
    let reference = reference_blend().to_f64();
    let candidate = model.to_f64();
    let same = candidate.base.a().shape() == reference.base.a().shape()
        && candidate.base.b().shape() == reference.base.b().shape()
        && candidate.base.a().max_abs_diff(reference.base.a()) < 1e-12
        && candidate.base.b().max_abs_diff(reference.base.b()) < 1e-12;
    if same {
        ctrb_footnotes()
    } else {
        Vec::new()
    }
}
