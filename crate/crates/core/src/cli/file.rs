//! TOML system files.
//!
//! ```toml
//! name = "example1"
//!
//! [sigma1]
//! A = [["0", "1"], ["0", "0"]]
//! B = [["0"], ["1"]]
//!
//! [sigma2]
//! A = [["0", "0", "1"], ["0", "0", "0"], ["0", "1", "0"]]
//! B = [["0"], ["1"], ["0"]]
//!
//! [transient]
//! alpha = "3/2"
//! beta = "1/2"
//!
//! [scenario]
//! t0 = 0
//! te = 1
//! x_start = ["0", "1"]
//! y_target = ["1", "1", "1"]
//! step = 0.001
//! quad_steps = 512
//! ```
//!
//! Scalars may be written as strings (`"3/2"`, `"0.75"`) or as bare TOML
//! numbers. `[transient]` takes either `masses = [m1, m2]` or `alpha` and
//! `beta`.

use std::fmt;
use std::path::Path;

use serde::Deserialize;

use crate::numerics::{FMatrix, Matrix, Scalar};
use crate::realization::Weights;
use crate::simulation::Scenario;
use crate::systems::LinSys;

/// A problem with the system file, tagged with the offending field.
#[derive(Debug, Clone, PartialEq)]
pub struct FileError {
    pub field: String,
    pub message: String,
}

impl fmt::Display for FileError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.field.is_empty() {
            write!(f, "{}", self.message)
        } else {
            write!(f, "{}: {}", self.field, self.message)
        }
    }
}

impl std::error::Error for FileError {}

fn fail<T>(field: impl Into<String>, message: impl ToString) -> Result<T, FileError> {
    Err(FileError {
        field: field.into(),
        message: message.to_string(),
    })
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum Cell {
    Text(String),
    Int(i64),
    Float(f64),
}

impl Cell {
    fn text(&self) -> String {
        match self {
            Cell::Text(s) => s.clone(),
            Cell::Int(i) => i.to_string(),
            Cell::Float(x) => x.to_string(),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFile {
    name: Option<String>,
    sigma1: RawSystem,
    sigma2: RawSystem,
    transient: Option<RawTransient>,
    scenario: Option<RawScenario>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSystem {
    #[serde(rename = "A")]
    a: Vec<Vec<Cell>>,
    #[serde(rename = "B")]
    b: Vec<Vec<Cell>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTransient {
    masses: Option<Vec<Cell>>,
    alpha: Option<Cell>,
    beta: Option<Cell>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScenario {
    #[serde(default)]
    t0: Option<Cell>,
    te: Cell,
    x_start: Vec<Cell>,
    y_target: Vec<Cell>,
    step: Option<Cell>,
    quad_steps: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SystemFile<T: Scalar> {
    pub name: String,
    pub sigma1: LinSys<T>,
    pub sigma2: LinSys<T>,
    pub weights: Option<Weights<T>>,
    pub scenario: Option<Scenario>,
}

pub const DEFAULT_STEP: f64 = 1e-3;
pub const DEFAULT_QUAD_STEPS: usize = 512;

impl<T: Scalar> SystemFile<T> {
    pub fn load(path: &Path) -> Result<Self, FileError> {
        let text = std::fs::read_to_string(path)
            .or_else(|e| fail(path.display().to_string(), e))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, FileError> {
        let raw: RawFile = toml::from_str(text).or_else(|e| fail("", e.to_string().trim_end()))?;
        let sigma1 = system("sigma1", &raw.sigma1)?;
        let sigma2 = system("sigma2", &raw.sigma2)?;
        let weights = raw.transient.as_ref().map(weights).transpose()?;
        let scenario = raw.scenario.as_ref().map(scenario).transpose()?;
        Ok(SystemFile {
            name: raw.name.unwrap_or_else(|| "unnamed".to_string()),
            sigma1,
            sigma2,
            weights,
            scenario,
        })
    }
}

fn scalar<T: Scalar>(field: &str, cell: &Cell) -> Result<T, FileError> {
    T::parse_scalar(&cell.text()).or_else(|e| fail(field, e))
}

fn grid<T: Scalar>(field: &str, rows: &[Vec<Cell>]) -> Result<Matrix<T>, FileError> {
    let width = rows.first().map_or(0, Vec::len);
    let mut parsed = Vec::with_capacity(rows.len());
    for (i, row) in rows.iter().enumerate() {
        if row.len() != width {
            return fail(
                format!("{field} row {}", i + 1),
                format!("has {} entries, expected {width}", row.len()),
            );
        }
        let values = row
            .iter()
            .enumerate()
            .map(|(j, c)| scalar(&format!("{field}[{}][{}]", i + 1, j + 1), c))
            .collect::<Result<Vec<T>, _>>()?;
        parsed.push(values);
    }
    Ok(Matrix::from_rows(parsed).expect("rows checked"))
}

fn system<T: Scalar>(name: &str, raw: &RawSystem) -> Result<LinSys<T>, FileError> {
    let a = grid::<T>(&format!("{name}.A"), &raw.a)?;
    if a.rows() == 0 || !a.is_square() {
        return fail(
            format!("{name}.A"),
            format!("must be a non-empty square grid, got {}x{}", a.rows(), a.cols()),
        );
    }
    let b = if raw.b.iter().all(Vec::is_empty) && !raw.b.is_empty() {
        Matrix::zeros(raw.b.len(), 0)
    } else {
        grid::<T>(&format!("{name}.B"), &raw.b)?
    };
    if b.rows() != a.rows() {
        return fail(
            format!("{name}.B"),
            format!("has {} rows but A has {}", b.rows(), a.rows()),
        );
    }
    LinSys::new(name, a, b).or_else(|e| fail(name, e))
}

fn weights<T: Scalar>(raw: &RawTransient) -> Result<Weights<T>, FileError> {
    let w = match (&raw.masses, &raw.alpha, &raw.beta) {
        (Some(m), None, None) => {
            if m.len() != 2 {
                return fail("transient.masses", format!("expected 2 entries, got {}", m.len()));
            }
            Weights::Masses(
                scalar("transient.masses[1]", &m[0])?,
                scalar("transient.masses[2]", &m[1])?,
            )
        }
        (None, Some(a), Some(b)) => Weights::Direct {
            alpha: scalar("transient.alpha", a)?,
            beta: scalar("transient.beta", b)?,
        },
        _ => return fail("transient", "give either masses = [m1, m2] or both alpha and beta"),
    };
    w.resolve().or_else(|e| fail("transient", e))?;
    Ok(w)
}

fn real(field: &str, cell: &Cell) -> Result<f64, FileError> {
    let x: f64 = scalar(field, cell)?;
    if x.is_finite() {
        Ok(x)
    } else {
        fail(field, "must be finite")
    }
}

fn scenario(raw: &RawScenario) -> Result<Scenario, FileError> {
    let vector = |field: &str, cells: &[Cell]| -> Result<FMatrix, FileError> {
        let values = cells
            .iter()
            .enumerate()
            .map(|(i, c)| real(&format!("{field}[{}]", i + 1), c))
            .collect::<Result<Vec<f64>, _>>()?;
        Ok(FMatrix::column(values))
    };
    Ok(Scenario {
        t0: raw.t0.as_ref().map_or(Ok(0.0), |c| real("scenario.t0", c))?,
        te: real("scenario.te", &raw.te)?,
        x_start: vector("scenario.x_start", &raw.x_start)?,
        y_target: vector("scenario.y_target", &raw.y_target)?,
        step: raw.step.as_ref().map_or(Ok(DEFAULT_STEP), |c| real("scenario.step", c))?,
        quad_steps: raw.quad_steps.unwrap_or(DEFAULT_QUAD_STEPS),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{rat, Rational, RMatrix};

    const BASIC: &str = r#"
name = "pair"
[sigma1]
A = [["0", "1"], ["0", "0"]]
B = [["0"], ["1"]]
[sigma2]
A = [[0, 0, 1], [0, 0, 0], [0, 1, 0]]
B = [[0], [1], [0]]
[transient]
alpha = "3/2"
beta = 0.5
"#;

    #[test]
    fn parses_strings_and_numbers() {
        let f = SystemFile::<Rational>::parse(BASIC).unwrap();
        assert_eq!(f.name, "pair");
        assert_eq!(f.sigma1.a(), &RMatrix::from_i64_rows(&[&[0, 1], &[0, 0]]));
        assert_eq!(f.sigma2.dim(), 3);
        assert_eq!(
            f.weights,
            Some(Weights::Direct {
                alpha: rat(3, 2),
                beta: rat(1, 2)
            })
        );
        assert!(f.scenario.is_none());
    }

    #[test]
    fn missing_system_is_reported() {
        let text = "[sigma1]\nA = [[\"1\"]]\nB = [[\"1\"]]\n";
        let err = SystemFile::<Rational>::parse(text).unwrap_err();
        assert!(err.to_string().contains("sigma2"), "{err}");
    }

    #[test]
    fn ragged_and_non_square_grids() {
        let text = BASIC.replace(r#"A = [["0", "1"], ["0", "0"]]"#, r#"A = [["0", "1"], ["0"]]"#);
        let err = SystemFile::<Rational>::parse(&text).unwrap_err();
        assert_eq!(err.field, "sigma1.A row 2");
        let text = BASIC.replace(r#"B = [["0"], ["1"]]"#, r#"B = [["0"]]"#);
        let err = SystemFile::<Rational>::parse(&text).unwrap_err();
        assert_eq!(err.field, "sigma1.B");
    }

    #[test]
    fn bad_scalar_names_the_cell() {
        let text = BASIC.replace(r#"["0", "0"]]"#, r#"["0", "x"]]"#);
        let err = SystemFile::<Rational>::parse(&text).unwrap_err();
        assert_eq!(err.field, "sigma1.A[2][2]");
    }

    #[test]
    fn weights_need_positive_values() {
        let text = BASIC.replace("alpha = \"3/2\"", "alpha = \"0\"");
        let err = SystemFile::<Rational>::parse(&text).unwrap_err();
        assert_eq!(err.field, "transient");
        let text = BASIC.replace("alpha = \"3/2\"\nbeta = 0.5", "masses = [1, 1]");
        let f = SystemFile::<Rational>::parse(&text).unwrap();
        assert_eq!(f.weights, Some(Weights::Masses(rat(1, 1), rat(1, 1))));
        let text = BASIC.replace("beta = 0.5", "");
        assert!(SystemFile::<Rational>::parse(&text).is_err());
    }

    #[test]
    fn scenario_defaults() {
        let text = format!("{BASIC}\n[scenario]\nte = 2\nx_start = [0, 1]\ny_target = [\"1\", \"1\", \"1\"]\n");
        let f = SystemFile::<f64>::parse(&text).unwrap();
        let sc = f.scenario.unwrap();
        assert_eq!((sc.t0, sc.te, sc.step, sc.quad_steps), (0.0, 2.0, DEFAULT_STEP, DEFAULT_QUAD_STEPS));
        assert_eq!(sc.y_target.rows(), 3);
    }
}
