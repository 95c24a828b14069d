use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot parse scalar {input:?}: {reason}")]
    ParseScalar { input: String, reason: &'static str },

    #[error("{what} must be at least 1")]
    ZeroSize { what: &'static str },

    #[error("{op}: dimension mismatch (expected {expected}, found {found})")]
    DimensionMismatch {
        op: &'static str,
        expected: String,
        found: String,
    },

    #[error("dimension {from} does not divide dimension {to}")]
    NotDivisible { from: usize, to: usize },

    #[error("cannot embed dimension {from} into smaller dimension {to}")]
    Shrinking { from: usize, to: usize },

    #[error("{0} is singular")]
    Singular(&'static str),

    #[error("weight {name} must be strictly positive, got {value}")]
    NonPositiveWeight { name: &'static str, value: String },

    #[error("horizon end {te} must exceed start {t0}")]
    InvalidHorizon { t0: f64, te: f64 },

    #[error("integration step must be positive, got {0}")]
    InvalidStep(f64),

    #[error("horizon {span} is shorter than ten integration steps of {step}")]
    HorizonTooShort { span: f64, step: f64 },

    #[error(
        "target displacement leaves the controllable subspace \
         (residual {residual:.3e} in the uncontrollable coordinates {component:?})"
    )]
    Unreachable { residual: f64, component: Vec<f64> },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn mismatch(
        op: &'static str,
        expected: impl ToString,
        found: impl ToString,
    ) -> Self {
        Error::DimensionMismatch {
            op,
            expected: expected.to_string(),
            found: found.to_string(),
        }
    }
}
