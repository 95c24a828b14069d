//! Browser bindings. Every export takes plain text and returns a JSON string
//! of the form `{"ok": true, ...}` or `{"ok": false, "error": "..."}`.

use dvcs_core::cli::file::SystemFile;
use dvcs_core::cli::{blend_report, check_report, cmd_reduce, CLASS_TOLERANCE};
use dvcs_core::numerics::{Rational, Tolerance};
use dvcs_core::simulation::{run_transient_scenario, ControlMode};
use dvcs_core::Error;
use serde_json::{json, Value};
use wasm_bindgen::prelude::wasm_bindgen;

/// Plotting more points than this only slows the page down.
const MAX_PLOT_POINTS: usize = 400;

fn finish(result: Result<Value, String>) -> String {
    match result {
        Ok(mut v) => {
            v["ok"] = json!(true);
            v.to_string()
        }
        Err(e) => json!({ "ok": false, "error": e }).to_string(),
    }
}

/// Irreducible form of a comma separated vector such as `1,1,2,2`.
#[wasm_bindgen]
pub fn reduce_vector(csv: &str) -> String {
    finish(cmd_reduce::<Rational>(csv, &Tolerance::default()).map(|o| json!({ "text": o.text, "data": o.json })))
}

/// Blend matrices plus the realization and modeling checks, computed exactly.
#[wasm_bindgen]
pub fn analyze(toml: &str) -> String {
    finish(analyze_inner(toml))
}

fn analyze_inner(toml: &str) -> Result<Value, String> {
    let f = SystemFile::<Rational>::parse(toml).map_err(|e| e.to_string())?;
    let blend = blend_report(&f)?;
    let check = check_report(&f, &Tolerance::default())?;
    Ok(json!({
        "text": format!("{}\n{}", blend.text, check.text),
        "blend": blend.json,
        "check": check.json,
    }))
}

/// Runs the file's scenario and returns a thinned trajectory for plotting.
#[wasm_bindgen]
pub fn simulate(toml: &str, steer: bool) -> String {
    finish(simulate_inner(toml, steer))
}

fn simulate_inner(toml: &str, steer: bool) -> Result<Value, String> {
    let f = SystemFile::<f64>::parse(toml).map_err(|e| e.to_string())?;
    let weights = f.weights.as_ref().ok_or("missing [transient] table")?;
    let sc = f.scenario.as_ref().ok_or("missing [scenario] table")?;
    let mode = if steer { ControlMode::Steer } else { ControlMode::ZeroInput };
    let out = match run_transient_scenario(&f.sigma1, &f.sigma2, weights, sc, mode) {
        Ok(o) => o,
        Err(Error::Unreachable { residual, .. }) => {
            return Ok(json!({ "reachable": false, "residual": residual }));
        }
        Err(e) => return Err(e.to_string()),
    };
    let tr = &out.trajectory;
    let stride = tr.len().div_ceil(MAX_PLOT_POINTS).max(1);
    let mut picks: Vec<usize> = (0..tr.len()).step_by(stride).collect();
    if picks.last() != Some(&(tr.len() - 1)) {
        picks.push(tr.len() - 1);
    }
    let meta = out.meta();
    Ok(json!({
        "reachable": true,
        "n": tr.dim,
        "times": picks.iter().map(|&i| tr.times[i]).collect::<Vec<_>>(),
        "states": picks.iter().map(|&i| tr.states[i].as_slice().to_vec()).collect::<Vec<_>>(),
        "z_target": out.z_target.as_slice(),
        "endpoint_error": meta.endpoint_error,
        "target_class_error": meta.target_class_error,
        "reached": meta.target_class_error <= CLASS_TOLERANCE,
    }))
}
