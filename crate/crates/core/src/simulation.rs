//! Steered transients on the blend model: minimum-energy control design,
//! fixed-step RK4 integration and trajectory export.

use std::path::Path;

use num_integer::lcm;

use crate::controllability::{ctrb_gramian, ctrb_subspace_with, kalman_decomposition_with};
use crate::error::{Error, Result};
use crate::mixdim::{lift_vector, reduce_vector_with};
use crate::numerics::{expm_apply, in_span_with, solve_with, FMatrix, Scalar, Tolerance};
use crate::realization::{
    build_transient_model, check_realization, RealizationReport, TransientModel, Weights,
};
use crate::systems::LinSys;

/// Block-constancy tolerance used to reduce integrated end states.
pub const CLASS_BLOCK_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub t0: f64,
    pub te: f64,
    pub x_start: FMatrix,
    pub y_target: FMatrix,
    pub step: f64,
    pub quad_steps: usize,
}

impl Scenario {
    pub fn horizon(&self) -> f64 {
        self.te - self.t0
    }

    pub fn validate(&self, p: usize, q: usize) -> Result<()> {
        if !(self.te > self.t0) {
            return Err(Error::InvalidHorizon {
                t0: self.t0,
                te: self.te,
            });
        }
        if !(self.step > 0.0) {
            return Err(Error::InvalidStep(self.step));
        }
        if self.horizon() < 10.0 * self.step {
            return Err(Error::HorizonTooShort {
                span: self.horizon(),
                step: self.step,
            });
        }
        if self.quad_steps == 0 {
            return Err(Error::ZeroSize { what: "quad_steps" });
        }
        if self.x_start.shape() != (p, 1) {
            return Err(Error::mismatch("x_start", format!("{p}x1"), format!("{:?}", self.x_start.shape())));
        }
        if self.y_target.shape() != (q, 1) {
            return Err(Error::mismatch("y_target", format!("{q}x1"), format!("{:?}", self.y_target.shape())));
        }
        Ok(())
    }
}

/// Closed-form minimum-energy input `u(t) = gain · e^{generator (te - t)} η`,
/// expressed through the controllable block of the Kalman decomposition.
#[derive(Debug, Clone, PartialEq)]
pub struct MinEnergyControl {
    /// `A11ᵀ`
    pub generator: FMatrix,
    /// `B_topᵀ`
    pub gain: FMatrix,
    pub eta: FMatrix,
    pub z0: FMatrix,
    pub z_target: FMatrix,
    pub t0: f64,
    pub te: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ControlSignal {
    Zero {
        channels: usize,
    },
    MinEnergy(MinEnergyControl),
    /// Piecewise-linear interpolation of `values[i]` at `times[i]`.
    Tabulated {
        times: Vec<f64>,
        values: Vec<Vec<f64>>,
        channels: usize,
    },
}

impl ControlSignal {
    pub fn channels(&self) -> usize {
        match self {
            ControlSignal::Zero { channels } | ControlSignal::Tabulated { channels, .. } => *channels,
            ControlSignal::MinEnergy(c) => c.gain.rows(),
        }
    }

    /// Input value at time `t`; zero outside the signal's window.
    pub fn eval(&self, t: f64) -> FMatrix {
        let m = self.channels();
        match self {
            ControlSignal::Zero { .. } => FMatrix::zeros(m, 1),
            ControlSignal::MinEnergy(c) => {
                if t < c.t0 || t > c.te || c.eta.rows() == 0 {
                    return FMatrix::zeros(m, 1);
                }
                c.gain.mul(&expm_apply(&c.generator, c.te - t, &c.eta))
            }
            ControlSignal::Tabulated { times, values, .. } => {
                let (Some(&first), Some(&last)) = (times.first(), times.last()) else {
                    return FMatrix::zeros(m, 1);
                };
                if t < first || t > last {
                    return FMatrix::zeros(m, 1);
                }
                let i = times.partition_point(|&s| s <= t).clamp(1, times.len().max(2) - 1);
                if times.len() == 1 {
                    return FMatrix::column(values[0].clone());
                }
                let (ta, tb) = (times[i - 1], times[i]);
                let w = if tb > ta { (t - ta) / (tb - ta) } else { 0.0 };
                FMatrix::column(
                    values[i - 1]
                        .iter()
                        .zip(&values[i])
                        .map(|(a, b)| a + w * (b - a))
                        .collect(),
                )
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectoryMeta {
    pub endpoint_error: f64,
    pub target_class_error: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub dim: usize,
    pub times: Vec<f64>,
    pub states: Vec<FMatrix>,
    pub meta: Option<TrajectoryMeta>,
}

impl Trajectory {
    pub fn empty(dim: usize) -> Self {
        Trajectory {
            dim,
            times: Vec::new(),
            states: Vec::new(),
            meta: None,
        }
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn last_state(&self) -> Option<&FMatrix> {
        self.states.last()
    }
}

/// Classical RK4 for `ż = A z + B u(t)` with fixed `step`; the last step is
/// shortened to land on `te`.
pub fn rk4_integrate(
    a: &FMatrix,
    bfull: &FMatrix,
    u: &ControlSignal,
    z0: &FMatrix,
    t0: f64,
    te: f64,
    step: f64,
) -> Result<Trajectory> {
    if !(step > 0.0) {
        return Err(Error::InvalidStep(step));
    }
    if !(te > t0) {
        return Err(Error::InvalidHorizon { t0, te });
    }
    let n = a.rows();
    if !a.is_square() || bfull.rows() != n || z0.shape() != (n, 1) || bfull.cols() != u.channels() {
        return Err(Error::mismatch(
            "rk4_integrate",
            format!("A {n}x{n}, B {n}x{}, z0 {n}x1", u.channels()),
            format!("A {:?}, B {:?}, z0 {:?}", a.shape(), bfull.shape(), z0.shape()),
        ));
    }
    let f = |t: f64, z: &FMatrix| a.mul(z).add(&bfull.mul(&u.eval(t)));

    let span = te - t0;
    let full_steps = (span / step).floor() as usize;
    let mut times = vec![t0];
    for k in 1..=full_steps {
        times.push(t0 + k as f64 * step);
    }
    if te - times[times.len() - 1] > 1e-12 * span.max(1.0) {
        times.push(te);
    } else {
        *times.last_mut().expect("non-empty") = te;
    }

    let mut states = Vec::with_capacity(times.len());
    let mut z = z0.clone();
    states.push(z.clone());
    for w in times.windows(2) {
        let (t, h) = (w[0], w[1] - w[0]);
        let k1 = f(t, &z);
        let k2 = f(t + h / 2.0, &z.add(&k1.scale(&(h / 2.0))));
        let k3 = f(t + h / 2.0, &z.add(&k2.scale(&(h / 2.0))));
        let k4 = f(t + h, &z.add(&k3.scale(&h)));
        let incr = k1.add(&k2.scale(&2.0)).add(&k3.scale(&2.0)).add(&k4);
        z = z.add(&incr.scale(&(h / 6.0)));
        states.push(z.clone());
    }
    Ok(Trajectory {
        dim: n,
        times,
        states,
        meta: None,
    })
}

/// Gramian steering from `z0` at `t0` to `z_target` at `te`.
///
/// The displacement `z_target - e^{A(te-t0)} z0` must lie in the
/// controllable subspace; the Gramian is formed on the controllable block of
/// the Kalman decomposition, where it is nonsingular.
pub fn min_energy_control(
    a: &FMatrix,
    bfull: &FMatrix,
    z0: &FMatrix,
    z_target: &FMatrix,
    t0: f64,
    te: f64,
    quad_steps: usize,
) -> Result<ControlSignal> {
    if !(te > t0) {
        return Err(Error::InvalidHorizon { t0, te });
    }
    let n = a.rows();
    if z0.shape() != (n, 1) || z_target.shape() != (n, 1) {
        return Err(Error::mismatch(
            "min_energy_control",
            format!("{n}x1 boundary states"),
            format!("{:?} and {:?}", z0.shape(), z_target.shape()),
        ));
    }
    let tol = Tolerance::default();
    let horizon = te - t0;
    let displacement = z_target.sub(&expm_apply(a, horizon, z0));
    let kd = kalman_decomposition_with(a, bfull, &tol)?;
    let k = kd.ctrb_dim;
    let coords = kd.t.mul(&displacement);

    let ctrb = ctrb_subspace_with(a, bfull, &tol)?;
    if !in_span_with(&ctrb.basis, &displacement, &tol)? {
        let component: Vec<f64> = (k..n).map(|i| coords[(i, 0)]).collect();
        let residual = component.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        return Err(Error::Unreachable { residual, component });
    }

    let eta = if k == 0 {
        FMatrix::zeros(0, 1)
    } else {
        let w = ctrb_gramian(&kd.a11, &kd.b_top, 0.0, horizon, quad_steps)?.w;
        solve_with(&w, &coords.submatrix(0..k, 0..1), &tol)?
    };
    Ok(ControlSignal::MinEnergy(MinEnergyControl {
        generator: kd.a11.transpose(),
        gain: kd.b_top.transpose(),
        eta,
        z0: z0.clone(),
        z_target: z_target.clone(),
        t0,
        te,
    }))
}

/// Distance between the class of `z` (reduced with block tolerance
/// `block_tol`) and the class of `y`, measured on their common lifted
/// dimension.
pub fn class_distance(z: &FMatrix, y: &FMatrix, block_tol: f64) -> Result<f64> {
    let rz = reduce_vector_with(z, &Tolerance::absolute(block_tol))?.irreducible;
    let ry = reduce_vector_with(y, &Tolerance::default())?.irreducible;
    let common = lcm(rz.rows(), ry.rows());
    Ok(lift_vector(&rz, common)?.max_abs_diff(&lift_vector(&ry, common)?))
}

/// Whether the scenario designs a steering input or runs the blend with
/// zero input.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ControlMode {
    Steer,
    ZeroInput,
}

#[derive(Debug, Clone)]
pub struct ScenarioOutcome<T: Scalar> {
    pub model: TransientModel<T>,
    pub realization: RealizationReport<T>,
    pub control: ControlSignal,
    pub trajectory: Trajectory,
    pub z_start: FMatrix,
    pub z_target: FMatrix,
}

impl<T: Scalar> ScenarioOutcome<T> {
    pub fn meta(&self) -> TrajectoryMeta {
        self.trajectory.meta.expect("scenario trajectories carry metadata")
    }

    /// Splits the combined blend input at time `t` into `(u1, u2)`.
    pub fn split_input(&self, t: f64) -> (Vec<f64>, Vec<f64>) {
        let u = self.control.eval(t).into_vec();
        let r = self.model.input_split.0;
        (u[..r].to_vec(), u[r..].to_vec())
    }
}

/// Builds the blend, lifts `x_start` and `y_target` to its dimension,
/// designs the input and integrates over `[t0, te]`.
pub fn run_transient_scenario<T: Scalar>(
    s1: &LinSys<T>,
    s2: &LinSys<T>,
    weights: &Weights<T>,
    sc: &Scenario,
    mode: ControlMode,
) -> Result<ScenarioOutcome<T>> {
    sc.validate(s1.dim(), s2.dim())?;
    let model = build_transient_model(s1, s2, weights)?;
    let realization = check_realization(s1, s2);
    let n = model.dim();
    let z_start = lift_vector(&sc.x_start, n)?;
    let z_target = lift_vector(&sc.y_target, n)?;
    let blend = model.to_f64();
    let (a, b) = (blend.base.a(), blend.base.b());
    let control = match mode {
        ControlMode::Steer => min_energy_control(a, b, &z_start, &z_target, sc.t0, sc.te, sc.quad_steps)?,
        ControlMode::ZeroInput => ControlSignal::Zero { channels: b.cols() },
    };
    let mut trajectory = rk4_integrate(a, b, &control, &z_start, sc.t0, sc.te, sc.step)?;
    let end = trajectory.last_state().expect("at least one step").clone();
    trajectory.meta = Some(TrajectoryMeta {
        endpoint_error: end.max_abs_diff(&z_target),
        target_class_error: class_distance(&end, &sc.y_target, CLASS_BLOCK_TOL)?,
    });
    Ok(ScenarioOutcome {
        model,
        realization,
        control,
        trajectory,
        z_start,
        z_target,
    })
}

/// Writes `t,z1,...,zn` CSV with 17 significant digits per value.
pub fn export_trajectory(tr: &Trajectory, path: impl AsRef<Path>) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    write_trajectory(tr, &mut w)?;
    w.flush()?;
    Ok(())
}

pub fn trajectory_to_csv(tr: &Trajectory) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    write_trajectory(tr, &mut w)?;
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("ascii output"))
}

fn write_trajectory<W: std::io::Write>(tr: &Trajectory, w: &mut csv::Writer<W>) -> Result<()> {
    let mut header = vec!["t".to_string()];
    header.extend((1..=tr.dim).map(|i| format!("z{i}")));
    w.write_record(&header)?;
    for (t, z) in tr.times.iter().zip(&tr.states) {
        let mut row = vec![format!("{t:.16e}")];
        row.extend(z.as_slice().iter().map(|v| format!("{v:.16e}")));
        w.write_record(&row)?;
    }
    Ok(())
}

/// Reads a trajectory written by [`export_trajectory`].
pub fn import_trajectory(path: impl AsRef<Path>) -> Result<Trajectory> {
    let mut r = csv::Reader::from_path(path)?;
    let dim = r.headers()?.len().saturating_sub(1);
    let mut tr = Trajectory::empty(dim);
    for record in r.records() {
        let record = record?;
        let values = record
            .iter()
            .map(|s| {
                s.parse::<f64>().map_err(|_| Error::ParseScalar {
                    input: s.to_string(),
                    reason: "not a number",
                })
            })
            .collect::<Result<Vec<f64>>>()?;
        if values.len() != dim + 1 {
            return Err(Error::mismatch("trajectory row", dim + 1, values.len()));
        }
        tr.times.push(values[0]);
        tr.states.push(FMatrix::column(values[1..].to_vec()));
    }
    Ok(tr)
}
