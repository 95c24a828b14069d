//! Text and JSON rendering of scalars, vectors and matrices.

use num_traits::ToPrimitive;
use serde_json::{json, Value};

use crate::numerics::{Matrix, Rational, Scalar, SubspaceBasis};

/// Scalars that know their machine-readable form.
pub trait JsonScalar: Scalar {
    fn to_json(&self) -> Value;
}

impl JsonScalar for Rational {
    fn to_json(&self) -> Value {
        let int = |b: &num_bigint::BigInt| match b.to_i64() {
            Some(v) => json!(v),
            None => json!(b.to_string()),
        };
        json!({ "num": int(self.numer()), "den": int(self.denom()) })
    }
}

impl JsonScalar for f64 {
    fn to_json(&self) -> Value {
        json!(self)
    }
}

/// Column vector as `[a, b, c]`.
pub fn vec_text<T: Scalar>(v: &Matrix<T>) -> String {
    let items: Vec<String> = v.as_slice().iter().map(ToString::to_string).collect();
    format!("[{}]", items.join(", "))
}

pub fn vec_json<T: JsonScalar>(v: &Matrix<T>) -> Value {
    Value::Array(v.as_slice().iter().map(JsonScalar::to_json).collect())
}

/// One line per row with right-aligned columns.
pub fn matrix_text<T: Scalar>(m: &Matrix<T>, indent: &str) -> String {
    let cells: Vec<Vec<String>> = (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| m[(i, j)].to_string()).collect())
        .collect();
    let width = cells.iter().flatten().map(|c| c.chars().count()).max().unwrap_or(0);
    let mut out = String::new();
    for row in &cells {
        let padded: Vec<String> = row.iter().map(|c| format!("{c:>width$}")).collect();
        out.push_str(&format!("{indent}[{}]\n", padded.join(", ")));
    }
    out
}

pub fn matrix_json<T: JsonScalar>(m: &Matrix<T>) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|i| Value::Array((0..m.cols()).map(|j| m[(i, j)].to_json()).collect()))
            .collect(),
    )
}

pub fn basis_text<T: Scalar>(s: &SubspaceBasis<T>) -> String {
    if s.dim() == 0 {
        return "none".to_string();
    }
    s.vectors().map(|v| vec_text(&v)).collect::<Vec<_>>().join(", ")
}

/// Basis vectors as a list of arrays.
pub fn basis_json<T: JsonScalar>(s: &SubspaceBasis<T>) -> Value {
    Value::Array(s.vectors().map(|v| vec_json(&v)).collect())
}
