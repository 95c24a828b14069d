//! The `dvcs` command-line tool.
//!
//! Exit codes: 0 when the checked condition holds, 1 when it fails or the
//! target class is missed, 2 on usage or input errors.

pub mod file;
pub mod footnotes;
pub mod render;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::controllability::{ctrb_subspace_with, quotient_ctrb_subspace_with};
use crate::mixdim::reduce_vector_with;
use crate::numerics::{Matrix, Rational, Tolerance};
use crate::realization::{
    build_transient_model, check_modeling_condition_with, check_realization_with, Source, Weights,
};
use crate::simulation::{export_trajectory, run_transient_scenario, ControlMode};
use crate::Error;

use file::SystemFile;
use render::{basis_json, basis_text, matrix_json, matrix_text, vec_json, vec_text, JsonScalar};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

/// Largest class error `simulate` accepts as reaching the target.
pub const CLASS_TOLERANCE: f64 = 1e-5;

#[derive(Debug, Parser)]
#[command(
    name = "dvcs",
    version,
    about = "Quotient-space analysis and transient simulation for linear systems of different dimensions"
)]
pub struct Cli {
    /// Emit a single JSON document instead of the text report
    #[arg(long, global = true)]
    pub json: bool,

    /// Relative tolerance for rank and equality decisions (float backend)
    #[arg(long, global = true, value_name = "FLOAT")]
    pub tol: Option<f64>,

    /// Scalar arithmetic used for algebraic decisions
    #[arg(long, global = true, value_enum, default_value_t = Backend::Rational)]
    pub backend: Backend,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Backend {
    Rational,
    Float,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Realization and modeling conditions for the file's system pair
    Check { file: PathBuf },
    /// Controllability matrix, basis and class representatives
    Ctrb {
        file: PathBuf,
        /// sigma1 or sigma2
        #[arg(long, conflicts_with = "blend")]
        system: Option<String>,
        /// Analyse the blended transient model instead
        #[arg(long)]
        blend: bool,
    },
    /// Irreducible representative of a vector's class
    Reduce {
        /// Comma-separated scalars, e.g. "1,1,2,2"
        #[arg(long, allow_hyphen_values = true)]
        vector: String,
    },
    /// Matrices of the blended transient model
    Blend { file: PathBuf },
    /// Run the file's scenario on the blend and write the trajectory as CSV
    Simulate {
        file: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Design a minimum-energy input instead of running with zero input
        #[arg(long)]
        steer: bool,
    },
}

/// Result of one command: exit code plus both renderings.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub code: i32,
    pub text: String,
    pub json: Value,
}

/// Parses `args`, runs the command and writes the report. Returns the exit
/// code.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{rendered}");
                return EXIT_INPUT;
            }
            let _ = write!(out, "{rendered}");
            return EXIT_OK;
        }
    };
    match execute(&cli) {
        Ok(outcome) => {
            let body = if cli.json {
                let mut s = serde_json::to_string_pretty(&outcome.json).expect("serializable");
                s.push('\n');
                s
            } else {
                outcome.text
            };
            if out.write_all(body.as_bytes()).is_err() {
                return EXIT_INPUT;
            }
            outcome.code
        }
        Err(message) => {
            let _ = writeln!(err, "error: {message}");
            EXIT_INPUT
        }
    }
}

/// Runs a parsed command. `Err` carries an input error message (exit 2).
pub fn execute(cli: &Cli) -> Result<Outcome, String> {
    let tol = match cli.tol {
        None => Tolerance::default(),
        Some(t) if t.is_finite() && t > 0.0 => Tolerance::new(t, Tolerance::default().abs),
        Some(t) => return Err(format!("--tol must be a positive number, got {t}")),
    };
    match cli.backend {
        Backend::Rational => dispatch::<Rational>(&cli.command, &tol),
        Backend::Float => dispatch::<f64>(&cli.command, &tol),
    }
}

fn dispatch<T: JsonScalar>(cmd: &Command, tol: &Tolerance) -> Result<Outcome, String> {
    match cmd {
        Command::Check { file } => cmd_check::<T>(file, tol),
        Command::Ctrb {
            file,
            system,
            blend,
        } => cmd_ctrb::<T>(file, system.as_deref(), *blend, tol),
        Command::Reduce { vector } => cmd_reduce::<T>(vector, tol),
        Command::Blend { file } => cmd_blend::<T>(file),
        Command::Simulate { file, out, steer } => cmd_simulate::<T>(file, out, *steer),
    }
}

fn load<T: JsonScalar>(path: &Path) -> Result<SystemFile<T>, String> {
    SystemFile::load(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn require_weights<T: JsonScalar>(f: &SystemFile<T>) -> Result<&Weights<T>, String> {
    f.weights
        .as_ref()
        .ok_or_else(|| "missing [transient] table with masses or alpha/beta".to_string())
}

fn weights_text<T: JsonScalar>(w: &Weights<T>) -> String {
    let (alpha, beta) = w.resolve().expect("validated on load");
    match w {
        Weights::Masses(m1, m2) => {
            format!("masses {m1}, {m2} give alpha = {alpha}, beta = {beta}")
        }
        Weights::Direct { .. } => format!("alpha = {alpha}, beta = {beta}"),
    }
}

fn weights_json<T: JsonScalar>(w: &Weights<T>) -> Value {
    let (alpha, beta) = w.resolve().expect("validated on load");
    let masses = match w {
        Weights::Masses(m1, m2) => json!([m1.to_json(), m2.to_json()]),
        Weights::Direct { .. } => Value::Null,
    };
    json!({ "alpha": alpha.to_json(), "beta": beta.to_json(), "masses": masses })
}

fn source_name(s: Source) -> &'static str {
    match s {
        Source::First => "sigma1",
        Source::Second => "sigma2",
    }
}

pub fn cmd_check<T: JsonScalar>(path: &Path, tol: &Tolerance) -> Result<Outcome, String> {
    check_report(&load::<T>(path)?, tol)
}

/// Realization and modeling report for an already parsed system file.
pub fn check_report<T: JsonScalar>(f: &SystemFile<T>, tol: &Tolerance) -> Result<Outcome, String> {
    let weights = require_weights(&f)?;
    let real = check_realization_with(&f.sigma1, &f.sigma2, tol);
    let model = build_transient_model(&f.sigma1, &f.sigma2, weights).map_err(|e| e.to_string())?;
    let modeling =
        check_modeling_condition_with(&f.sigma1, &f.sigma2, &model, tol).map_err(|e| e.to_string())?;

    let mut reasons = Vec::new();
    if !real.realizable {
        reasons.push("realization condition not met");
    }
    if !modeling.holds {
        reasons.push("modeling condition fails");
    }
    let code = if reasons.is_empty() { EXIT_OK } else { EXIT_FAIL };
    let verdict = if reasons.is_empty() {
        "both conditions hold".to_string()
    } else {
        reasons.join("; ")
    };

    let (small, large) = if real.swapped { ("sigma2", "sigma1") } else { ("sigma1", "sigma2") };
    let mut t = String::new();
    t.push_str(&format!("system file: {}\n", f.name));
    t.push_str(&format!(
        "realization: {small} embedded into {large} (p = {}, q = {}, target dimension {})\n",
        real.p, real.q, real.target_dim
    ));
    t.push_str(&format!("  dim C1 = {}: {}\n", real.dim_c1, basis_text(&real.c1)));
    t.push_str(&format!("  dim C2 = {}: {}\n", real.dim_c2, basis_text(&real.c2)));
    t.push_str(&format!("  witness: {}\n", basis_text(&real.witness)));
    t.push_str(&format!(
        "  condition {}\n",
        if real.realizable { "met" } else { "not met" }
    ));
    for note in &real.notes {
        t.push_str(&format!("  note: {note}\n"));
    }
    t.push_str(&format!(
        "modeling condition on n = {} ({})\n",
        modeling.n,
        weights_text(weights)
    ));
    t.push_str(&format!("  dim Cz = {}: {}\n", modeling.dim_cz, basis_text(&modeling.cz)));
    for tv in &modeling.tested_vectors {
        t.push_str(&format!(
            "  {} {} {}\n",
            source_name(tv.source),
            vec_text(&tv.vector),
            if tv.in_cz { "in Cz" } else { "NOT in Cz" }
        ));
    }
    t.push_str(&format!(
        "  condition {}\n",
        if modeling.holds { "holds" } else { "fails" }
    ));
    for note in &modeling.notes {
        t.push_str(&format!("  note: {note}\n"));
    }
    t.push_str(&format!("result: {verdict}\n"));

    let json = json!({
        "name": f.name,
        "weights": weights_json(weights),
        "realization": {
            "realizable": real.realizable,
            "p": real.p,
            "q": real.q,
            "target_dim": real.target_dim,
            "swapped": real.swapped,
            "dim_c1": real.dim_c1,
            "dim_c2": real.dim_c2,
            "c1": basis_json(&real.c1),
            "c2": basis_json(&real.c2),
            "witness": basis_json(&real.witness),
            "notes": real.notes,
        },
        "modeling": {
            "holds": modeling.holds,
            "n": modeling.n,
            "dim_cz": modeling.dim_cz,
            "cz": basis_json(&modeling.cz),
            "tested_vectors": modeling.tested_vectors.iter().map(|tv| json!({
                "source": source_name(tv.source),
                "vector": vec_json(&tv.vector),
                "in_cz": tv.in_cz,
            })).collect::<Vec<_>>(),
            "notes": modeling.notes,
        },
        "result": verdict,
        "exit_code": code,
    });
    Ok(Outcome { code, text: t, json })
}

pub fn cmd_ctrb<T: JsonScalar>(
    path: &Path,
    system: Option<&str>,
    blend: bool,
    tol: &Tolerance,
) -> Result<Outcome, String> {
    let f = load::<T>(path)?;
    if blend {
        let weights = require_weights(&f)?;
        let model = build_transient_model(&f.sigma1, &f.sigma2, weights).map_err(|e| e.to_string())?;
        let matrix = model.ctrb_matrix();
        let ctrb = crate::numerics::column_space_basis_with(&matrix, tol);
        let notes = footnotes::blend_ctrb_footnotes(&model);
        let (r, s) = model.input_split;

        let mut t = String::new();
        t.push_str(&format!(
            "controllability of the blend of sigma1 and sigma2 (n = {}, inputs {r} + {s})\n",
            model.dim()
        ));
        t.push_str(&format!("weights: {}\n", weights_text(weights)));
        t.push_str("ctrb = [ctrb(A*, B1*) | ctrb(A*, B2*)] =\n");
        t.push_str(&matrix_text(&matrix, "  "));
        t.push_str(&format!("rank = {}\n", ctrb.dim()));
        t.push_str(&format!("basis: {}\n", basis_text(&ctrb)));
        for (i, n) in notes.iter().enumerate() {
            let entries: Vec<String> = n
                .entries
                .iter()
                .map(|e| format!("({},{}) = {}, printed {}", e.row, e.col, matrix[(e.row - 1, e.col - 1)], e.printed))
                .collect();
            t.push_str(&format!("footnote [{}] {}
", i + 1, entries.join("; ")));
            t.push_str(&format!("  {}
", n.text));
        }
        let json = json!({
            "system": "blend",
            "n": model.dim(),
            "weights": weights_json(weights),
            "matrix": matrix_json(&matrix),
            "rank": ctrb.dim(),
            "basis": basis_json(&ctrb),
            "footnotes": notes.iter().map(|n| json!({
                "text": n.text,
                "entries": n.entries.iter().map(|e| json!({
                    "row": e.row,
                    "col": e.col,
                    "value": matrix[(e.row - 1, e.col - 1)].to_json(),
                    "printed": e.printed,
                })).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
        });
        return Ok(Outcome {
            code: EXIT_OK,
            text: t,
            json,
        });
    }

    let name = system.unwrap_or("sigma1");
    let sys = match name {
        "sigma1" => &f.sigma1,
        "sigma2" => &f.sigma2,
        other => return Err(format!("unknown system {other:?}; expected sigma1 or sigma2")),
    };
    let ctrb = ctrb_subspace_with(sys.a(), sys.b(), tol).map_err(|e| e.to_string())?;
    let quotient = quotient_ctrb_subspace_with(sys, tol);
    let reps: Vec<String> = quotient
        .reps
        .iter()
        .map(|r| format!("{} (×{})", vec_text(&r.irreducible), r.multiplicity()))
        .collect();
    let class_rank = quotient.class_rank_with(tol);

    let mut t = String::new();
    t.push_str(&format!(
        "controllability of {name} (n = {}, r = {})\n",
        sys.dim(),
        sys.inputs()
    ));
    t.push_str("ctrb =\n");
    t.push_str(&matrix_text(&ctrb.matrix, "  "));
    t.push_str(&format!("rank = {}\n", ctrb.rank));
    t.push_str(&format!("basis: {}\n", basis_text(&ctrb.basis)));
    t.push_str(&format!(
        "class representatives: {}\n",
        if reps.is_empty() { "none".to_string() } else { reps.join(", ") }
    ));
    t.push_str(&format!("class rank = {class_rank}\n"));
    let json = json!({
        "system": name,
        "n": sys.dim(),
        "inputs": sys.inputs(),
        "matrix": matrix_json(&ctrb.matrix),
        "rank": ctrb.rank,
        "basis": basis_json(&ctrb.basis),
        "class_representatives": quotient.reps.iter().map(|r| json!({
            "irreducible": vec_json(&r.irreducible),
            "multiplicity": r.multiplicity(),
        })).collect::<Vec<_>>(),
        "class_rank": class_rank,
    });
    Ok(Outcome {
        code: EXIT_OK,
        text: t,
        json,
    })
}

pub fn cmd_reduce<T: JsonScalar>(vector: &str, tol: &Tolerance) -> Result<Outcome, String> {
    let values = vector
        .split(',')
        .map(|s| T::parse_scalar(s).map_err(|e| e.to_string()))
        .collect::<Result<Vec<T>, String>>()?;
    let v = Matrix::column(values);
    let mv = reduce_vector_with(&v, tol).map_err(|e| e.to_string())?;
    let text = format!("{} (×{})\n", vec_text(&mv.irreducible), mv.multiplicity());
    let json = json!({
        "input_dim": v.rows(),
        "irreducible": vec_json(&mv.irreducible),
        "multiplicity": mv.multiplicity(),
    });
    Ok(Outcome {
        code: EXIT_OK,
        text,
        json,
    })
}

pub fn cmd_blend<T: JsonScalar>(path: &Path) -> Result<Outcome, String> {
    blend_report(&load::<T>(path)?)
}

pub fn blend_report<T: JsonScalar>(f: &SystemFile<T>) -> Result<Outcome, String> {
    let weights = require_weights(&f)?;
    let model = build_transient_model(&f.sigma1, &f.sigma2, weights).map_err(|e| e.to_string())?;
    let (p, q) = model.source_dims;
    let mut t = String::new();
    t.push_str(&format!(
        "blend of sigma1 (p = {p}) and sigma2 (q = {q}) on n = {}\n",
        model.dim()
    ));
    t.push_str(&format!("weights: {}\n", weights_text(weights)));
    t.push_str("A* =\n");
    t.push_str(&matrix_text(model.a(), "  "));
    let (b1, b2) = (model.b1_star(), model.b2_star());
    for (label, b) in [("B1*", &b1), ("B2*", &b2)] {
        if b.cols() == 1 {
            t.push_str(&format!("{label} = {}^T\n", vec_text(b)));
        } else {
            t.push_str(&format!("{label} =\n"));
            t.push_str(&matrix_text(b, "  "));
        }
    }
    let json = json!({
        "name": f.name,
        "p": p,
        "q": q,
        "n": model.dim(),
        "weights": weights_json(weights),
        "a": matrix_json(model.a()),
        "b1": matrix_json(&b1),
        "b2": matrix_json(&b2),
    });
    Ok(Outcome {
        code: EXIT_OK,
        text: t,
        json,
    })
}

pub fn cmd_simulate<T: JsonScalar>(path: &Path, out: &Path, steer: bool) -> Result<Outcome, String> {
    let f = load::<T>(path)?;
    let weights = require_weights(&f)?;
    let sc = f
        .scenario
        .as_ref()
        .ok_or_else(|| "missing [scenario] table".to_string())?;
    let mode = if steer { ControlMode::Steer } else { ControlMode::ZeroInput };
    let control_label = if steer { "minimum energy" } else { "zero input" };
    let header = format!(
        "scenario: t in [{}, {}], step {}, quad_steps {}, control: {control_label}\n",
        sc.t0, sc.te, sc.step, sc.quad_steps
    );

    let scenario_json = json!({
        "t0": sc.t0,
        "te": sc.te,
        "step": sc.step,
        "quad_steps": sc.quad_steps,
        "control": control_label,
    });

    let outcome = match run_transient_scenario(&f.sigma1, &f.sigma2, weights, sc, mode) {
        Ok(o) => o,
        Err(Error::Unreachable { residual, component }) => {
            let realizable = check_realization_with(&f.sigma1, &f.sigma2, &Tolerance::default()).realizable;
            let text = format!(
                "{header}realization condition: {}\n\
                 target not reachable: residual {residual:e} in the uncontrollable coordinates {component:?}\n\
                 no trajectory written\n\
                 result: target class missed\n",
                if realizable { "met" } else { "not met" },
            );
            let json = json!({
                "scenario": scenario_json,
                "reachable": false,
                "realizable": realizable,
                "residual": residual,
                "uncontrollable_component": component,
                "exit_code": EXIT_FAIL,
            });
            return Ok(Outcome {
                code: EXIT_FAIL,
                text,
                json,
            });
        }
        Err(e) => return Err(e.to_string()),
    };
    export_trajectory(&outcome.trajectory, out).map_err(|e| format!("{}: {e}", out.display()))?;

    let meta = outcome.meta();
    let reached = meta.target_class_error <= CLASS_TOLERANCE;
    let code = if reached { EXIT_OK } else { EXIT_FAIL };
    let text = format!(
        "{header}realization condition: {}\n\
         blend dimension: {}\n\
         z_start = {}\n\
         z_target = {}\n\
         samples: {}\n\
         endpoint_error = {:e}\n\
         target_class_error = {:e}\n\
         trajectory written to {}\n\
         result: target class {} (tolerance {CLASS_TOLERANCE:e})\n",
        if outcome.realization.realizable { "met" } else { "not met" },
        outcome.model.dim(),
        vec_text(&outcome.z_start),
        vec_text(&outcome.z_target),
        outcome.trajectory.len(),
        meta.endpoint_error,
        meta.target_class_error,
        out.display(),
        if reached { "reached" } else { "missed" },
    );
    let json = json!({
        "scenario": scenario_json,
        "class_tolerance": CLASS_TOLERANCE,
        "reachable": true,
        "realizable": outcome.realization.realizable,
        "steer": steer,
        "n": outcome.model.dim(),
        "z_start": vec_json(&outcome.z_start),
        "z_target": vec_json(&outcome.z_target),
        "samples": outcome.trajectory.len(),
        "endpoint_error": meta.endpoint_error,
        "target_class_error": meta.target_class_error,
        "out": out.display().to_string(),
        "exit_code": code,
    });
    Ok(Outcome { code, text, json })
}
