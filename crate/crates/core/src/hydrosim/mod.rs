//! Method-of-lines integrator for the reduced superfluid hydrodynamics on a
//! periodic 1D grid.
//!
//! ```text
//! dn/dt = -d(n v)/dz
//! dv/dt = -d(v^2/2 + V + mu(n))/dz + lambda n'''/(4n) - lambda n' n''/(2n^2) + lambda n'^3/(4n^3)
//! ```
//!
//! `mu` is the cigar or disk chemical potential at the closure width. The disk
//! case is run in planar symmetry (fields uniform along one transverse axis),
//! which reduces it to the same 1D form.

pub mod fit;
pub mod potential;
pub mod stencil;

use std::f64::consts::{PI, TAU};

use nalgebra::Complex;

use crate::error::{Error, Result};
use crate::polytrope::{
    chemical_potential_cigar, chemical_potential_disk, GeometryKind, PolytropeParams, TrapGeometry,
};
use crate::sound::sound_reduced;
use crate::widths::solve_width;

pub use fit::{fit_frequency, measure_mode_frequency, measure_pulse_speed, FrequencyFit};
pub use potential::PotentialTable;

/// Largest relative amplitude accepted by [`init_standing_wave`].
pub const MAX_WAVE_EPSILON: f64 = 1e-2;
/// Safety factor applied to both stability limits.
pub const CFL_SAFETY: f64 = 0.2;
/// Default periodic box for sound runs, in harmonic lengths.
pub const DEFAULT_BOX_LENGTH: f64 = 100.0;
pub const DEFAULT_POINTS: usize = 2048;
pub const DEFAULT_PULSE_WIDTH: f64 = 5.0;

#[derive(Debug, Clone, PartialEq)]
pub struct HydroState {
    pub grid_length: f64,
    pub n1: Vec<f64>,
    pub v: Vec<f64>,
    pub time: f64,
}

impl HydroState {
    pub fn uniform(n_eq: f64, points: usize, grid_length: f64) -> Result<Self> {
        check_grid(points, grid_length)?;
        if !(n_eq > 0.0) || !n_eq.is_finite() {
            return Err(Error::domain("n_eq", format!("must be > 0, got {n_eq}")));
        }
        Ok(Self {
            grid_length,
            n1: vec![n_eq; points],
            v: vec![0.0; points],
            time: 0.0,
        })
    }

    pub fn points(&self) -> usize {
        self.n1.len()
    }

    pub fn dz(&self) -> f64 {
        self.grid_length / self.n1.len() as f64
    }

    pub fn position(&self, j: usize) -> f64 {
        j as f64 * self.dz()
    }

    /// `sum(n1) dz`; summed in index order so the result is reproducible.
    pub fn mass(&self) -> f64 {
        self.n1.iter().sum::<f64>() * self.dz()
    }

    /// `(1/N) sum_j n1_j exp(-i k z_j)`.
    pub fn mode_amplitude(&self, k: f64) -> Complex<f64> {
        let dz = self.dz();
        let sum = self
            .n1
            .iter()
            .enumerate()
            .fold(Complex::new(0.0, 0.0), |acc, (j, &n)| {
                acc + Complex::from_polar(n, -k * j as f64 * dz)
            });
        sum / self.n1.len() as f64
    }

    /// Position of the density maximum inside `[from, to)`, refined by a
    /// parabola through the neighbouring samples. `NaN` if the window is empty.
    pub fn peak_position(&self, from: f64, to: f64) -> f64 {
        let dz = self.dz();
        let n = self.points();
        let best = (0..n)
            .filter(|&j| {
                let z = j as f64 * dz;
                z >= from && z < to
            })
            .max_by(|&a, &b| self.n1[a].total_cmp(&self.n1[b]));
        let Some(j) = best else { return f64::NAN };
        let left = self.n1[(j + n - 1) % n];
        let mid = self.n1[j];
        let right = self.n1[(j + 1) % n];
        let curvature = left - 2.0 * mid + right;
        let shift = if curvature < 0.0 {
            0.5 * (left - right) / curvature
        } else {
            0.0
        };
        (j as f64 + shift) * dz
    }

    fn check_floor(&self) -> Result<()> {
        check_floor(&self.n1)
    }
}

fn check_grid(points: usize, grid_length: f64) -> Result<()> {
    if points < 8 {
        return Err(Error::domain(
            "points",
            format!("need at least 8, got {points}"),
        ));
    }
    if !(grid_length > 0.0) || !grid_length.is_finite() {
        return Err(Error::domain(
            "box_length",
            format!("must be > 0, got {grid_length}"),
        ));
    }
    Ok(())
}

fn check_floor(n: &[f64]) -> Result<()> {
    match n.iter().position(|&x| !(x > 0.0)) {
        Some(index) => Err(Error::DensityFloorViolation {
            index,
            value: n[index],
        }),
        None => Ok(()),
    }
}

/// `n1 = n_eq (1 + epsilon cos(k z))`, `v = 0`.
pub fn init_standing_wave(
    n_eq: f64,
    epsilon: f64,
    k: f64,
    points: usize,
    grid_length: f64,
) -> Result<HydroState> {
    let mut state = HydroState::uniform(n_eq, points, grid_length)?;
    if !(0.0..=MAX_WAVE_EPSILON).contains(&epsilon) {
        return Err(Error::domain(
            "epsilon",
            format!("must lie in [0, {MAX_WAVE_EPSILON}], got {epsilon}"),
        ));
    }
    let modes = k * grid_length / TAU;
    if !(k > 0.0) || (modes - modes.round()).abs() > 1e-9 * modes.max(1.0) {
        return Err(Error::Incommensurate {
            k,
            length: grid_length,
        });
    }
    let dz = state.dz();
    for (j, n) in state.n1.iter_mut().enumerate() {
        *n = n_eq * (1.0 + epsilon * (k * j as f64 * dz).cos());
    }
    Ok(state)
}

/// `n1 = n_eq (1 + epsilon exp(-(z - z0)^2 / w^2))`, `v = 0`.
pub fn init_gaussian_pulse(
    n_eq: f64,
    epsilon: f64,
    z0: f64,
    w: f64,
    points: usize,
    grid_length: f64,
) -> Result<HydroState> {
    let mut state = HydroState::uniform(n_eq, points, grid_length)?;
    if !(epsilon > -1.0) || !epsilon.is_finite() {
        return Err(Error::domain(
            "epsilon",
            format!("must be > -1, got {epsilon}"),
        ));
    }
    let dz = state.dz();
    if !(w >= 5.0 * dz) {
        return Err(Error::domain(
            "pulse_width",
            format!("{w} is under-resolved; need at least 5 dz = {}", 5.0 * dz),
        ));
    }
    let edge = z0.min(grid_length - z0);
    if !(edge > 0.0) || (-(edge / w).powi(2)).exp() >= 1e-12 {
        return Err(Error::domain(
            "pulse_width",
            format!("pulse at z0 = {z0} with width {w} reaches the box edge"),
        ));
    }
    for (j, n) in state.n1.iter_mut().enumerate() {
        let x = (j as f64 * dz - z0) / w;
        *n = n_eq * (1.0 + epsilon * (-x * x).exp());
    }
    Ok(state)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WidthMode {
    /// Width solved once at the reference density and held fixed.
    FrozenAtEquilibrium,
    /// Width re-solved from the local density at every grid point.
    LocalAdiabatic,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimSettings {
    pub dt: f64,
    pub steps: usize,
    pub width_mode: WidthMode,
    pub record_every: usize,
    /// Sampled `V(z)` on the grid; `None` means zero.
    pub external_potential: Option<Vec<f64>>,
    /// Density at which a frozen width is solved; defaults to the mean density.
    pub reference_density: Option<f64>,
    /// `[from, to)` window in which the density peak is tracked; defaults to the whole box.
    pub peak_window: Option<(f64, f64)>,
}

impl SimSettings {
    pub fn new(dt: f64, steps: usize) -> Self {
        Self {
            dt,
            steps,
            width_mode: WidthMode::FrozenAtEquilibrium,
            record_every: 1,
            external_potential: None,
            reference_density: None,
            peak_window: None,
        }
    }
}

/// Probes recorded during a run.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ProbeSeries {
    pub times: Vec<f64>,
    pub mass: Vec<f64>,
    pub mode_amplitude: Vec<Complex<f64>>,
    pub peak_position: Vec<f64>,
}

impl ProbeSeries {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Samples with `t0 <= t <= t1`.
    pub fn window(&self, t0: f64, t1: f64) -> ProbeSeries {
        let keep: Vec<usize> = (0..self.len())
            .filter(|&i| self.times[i] >= t0 && self.times[i] <= t1)
            .collect();
        ProbeSeries {
            times: keep.iter().map(|&i| self.times[i]).collect(),
            mass: keep.iter().map(|&i| self.mass[i]).collect(),
            mode_amplitude: keep.iter().map(|&i| self.mode_amplitude[i]).collect(),
            peak_position: keep.iter().map(|&i| self.peak_position[i]).collect(),
        }
    }

    /// Largest relative deviation of the mass from its first sample.
    pub fn mass_drift(&self) -> f64 {
        let Some(&m0) = self.mass.first() else {
            return 0.0;
        };
        self.mass
            .iter()
            .fold(0.0f64, |d, m| d.max(((m - m0) / m0).abs()))
    }

    fn record(&mut self, state: &HydroState, k: f64, window: (f64, f64)) {
        self.times.push(state.time);
        self.mass.push(state.mass());
        self.mode_amplitude.push(state.mode_amplitude(k));
        self.peak_position
            .push(state.peak_position(window.0, window.1));
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Closure {
    Frozen(f64),
    Local,
}

/// Right-hand side of the reduced equations for one parameter set.
#[derive(Debug, Clone)]
pub struct HydroModel {
    params: PolytropeParams,
    geom: TrapGeometry,
    closure: Closure,
    potential: Option<Vec<f64>>,
}

impl HydroModel {
    pub fn new(
        params: PolytropeParams,
        geom: TrapGeometry,
        width_mode: WidthMode,
        n_eq_ref: f64,
        potential: Option<Vec<f64>>,
    ) -> Result<Self> {
        let closure = match width_mode {
            WidthMode::FrozenAtEquilibrium => {
                Closure::Frozen(solve_width(&params, &geom, n_eq_ref)?.width)
            }
            WidthMode::LocalAdiabatic => Closure::Local,
        };
        Ok(Self {
            params,
            geom,
            closure,
            potential,
        })
    }

    /// Width used by a frozen closure.
    pub fn frozen_width(&self) -> Option<f64> {
        match self.closure {
            Closure::Frozen(w) => Some(w),
            Closure::Local => None,
        }
    }

    fn width_at(&self, n: f64) -> Result<f64> {
        match self.closure {
            Closure::Frozen(w) => Ok(w),
            Closure::Local => Ok(solve_width(&self.params, &self.geom, n)?.width),
        }
    }

    fn chemical_potential(&self, n: f64) -> Result<f64> {
        let w = self.width_at(n)?;
        match self.geom.kind {
            GeometryKind::Cigar => chemical_potential_cigar(&self.params, n, w),
            GeometryKind::Disk => chemical_potential_disk(&self.params, n, w),
        }
    }

    /// Largest local `|v| + c_s` on the grid.
    pub fn max_signal_speed(&self, n1: &[f64], v: &[f64]) -> Result<f64> {
        let mut c_max = 0.0f64;
        for (&n, &u) in n1.iter().zip(v) {
            let c = sound_reduced(&self.params, self.geom.kind, n, self.width_at(n)?)?;
            c_max = c_max.max(c + u.abs());
        }
        Ok(c_max)
    }

    /// Stable step for the state: [`cfl_cap`] at the current signal speed.
    pub fn stable_dt(&self, state: &HydroState) -> Result<f64> {
        Ok(cfl_cap(
            state.dz(),
            self.params.lambda_qp,
            self.max_signal_speed(&state.n1, &state.v)?,
        ))
    }

    /// Time derivatives `(dn1/dt, dv/dt)` at `(n1, v)`.
    pub fn rhs(
        &self,
        n1: &[f64],
        v: &[f64],
        dz: f64,
        dn: &mut [f64],
        dv: &mut [f64],
    ) -> Result<()> {
        check_floor(n1)?;
        let len = n1.len();
        if let Some(p) = &self.potential {
            if p.len() != len {
                return Err(Error::domain(
                    "potential",
                    format!("{} samples for a {len}-point grid", p.len()),
                ));
            }
        }
        let mut scratch = vec![0.0; len];

        for j in 0..len {
            scratch[j] = n1[j] * v[j];
        }
        stencil::d1(&scratch, dz, dn);
        dn.iter_mut().for_each(|x| *x = -*x);

        for j in 0..len {
            let potential = self.potential.as_ref().map_or(0.0, |p| p[j]);
            scratch[j] = 0.5 * v[j] * v[j] + potential + self.chemical_potential(n1[j])?;
        }
        stencil::d1(&scratch, dz, dv);
        let quantum = quantum_force(n1, dz, self.params.lambda_qp)?;
        for j in 0..len {
            dv[j] = quantum[j] - dv[j];
        }
        Ok(())
    }
}

/// Quantum-pressure force in its expanded three-term form,
/// `lambda [n'''/(4n) - n' n''/(2n^2) + n'^3/(4n^3)]`.
pub fn quantum_force(n: &[f64], dz: f64, lambda_qp: f64) -> Result<Vec<f64>> {
    check_floor(n)?;
    let len = n.len();
    let mut out = vec![0.0; len];
    if lambda_qp == 0.0 {
        return Ok(out);
    }
    let (mut n1, mut n2, mut n3) = (vec![0.0; len], vec![0.0; len], vec![0.0; len]);
    stencil::d1(n, dz, &mut n1);
    stencil::d2(n, dz, &mut n2);
    stencil::d3(n, dz, &mut n3);
    for j in 0..len {
        let inv = 1.0 / n[j];
        let slope = n1[j] * inv;
        out[j] = lambda_qp
            * (0.25 * n3[j] * inv - 0.5 * slope * n2[j] * inv + 0.25 * slope * slope * slope);
    }
    Ok(out)
}

/// Quantum-pressure force as the gradient of the Bohm potential,
/// `(lambda/2) d/dz [ (sqrt n)'' / sqrt n ]`.
pub fn bohm_force(n: &[f64], dz: f64, lambda_qp: f64) -> Result<Vec<f64>> {
    check_floor(n)?;
    let len = n.len();
    let root: Vec<f64> = n.iter().map(|x| x.sqrt()).collect();
    let mut curvature = vec![0.0; len];
    stencil::d2(&root, dz, &mut curvature);
    for (q, r) in curvature.iter_mut().zip(&root) {
        *q /= r;
    }
    let mut out = vec![0.0; len];
    stencil::d1(&curvature, dz, &mut out);
    out.iter_mut().for_each(|x| *x *= 0.5 * lambda_qp);
    Ok(out)
}

/// `0.2 min(dz / c_max, 2 dz^2 / sqrt(lambda))`; a vanishing speed or
/// `lambda` drops the corresponding limit.
pub fn cfl_cap(dz: f64, lambda_qp: f64, c_max: f64) -> f64 {
    let advective = if c_max > 0.0 {
        dz / c_max
    } else {
        f64::INFINITY
    };
    let dispersive = if lambda_qp > 0.0 {
        2.0 * dz * dz / lambda_qp.sqrt()
    } else {
        f64::INFINITY
    };
    CFL_SAFETY * advective.min(dispersive)
}

/// One evaluation of the right-hand side for `state`.
pub fn rhs_eval(
    state: &HydroState,
    params: &PolytropeParams,
    geom: &TrapGeometry,
    settings: &SimSettings,
    n_eq_ref: f64,
) -> Result<(Vec<f64>, Vec<f64>)> {
    state.check_floor()?;
    let model = HydroModel::new(
        *params,
        *geom,
        settings.width_mode,
        n_eq_ref,
        settings.external_potential.clone(),
    )?;
    let len = state.points();
    let (mut dn, mut dv) = (vec![0.0; len], vec![0.0; len]);
    model.rhs(&state.n1, &state.v, state.dz(), &mut dn, &mut dv)?;
    Ok((dn, dv))
}

/// Advances `state` by `settings.steps` classical Runge-Kutta steps and
/// records probes (time, mass, mode amplitude at `probe_k`, peak position)
/// every `record_every` steps, including the initial and final states.
pub fn integrate_run(
    state: &mut HydroState,
    params: &PolytropeParams,
    geom: &TrapGeometry,
    settings: &SimSettings,
    probe_k: f64,
) -> Result<ProbeSeries> {
    state.check_floor()?;
    if !(settings.dt > 0.0) || !settings.dt.is_finite() {
        return Err(Error::domain(
            "dt",
            format!("must be > 0, got {}", settings.dt),
        ));
    }
    if settings.steps == 0 {
        return Err(Error::domain("steps", "must be > 0"));
    }
    if settings.record_every == 0 {
        return Err(Error::domain("record_every", "must be > 0"));
    }
    let n_ref = settings
        .reference_density
        .unwrap_or_else(|| state.mass() / state.grid_length);
    let model = HydroModel::new(
        *params,
        *geom,
        settings.width_mode,
        n_ref,
        settings.external_potential.clone(),
    )?;
    let cap = model.stable_dt(state)?;
    if settings.dt > cap {
        return Err(Error::CflViolation {
            dt: settings.dt,
            cap,
        });
    }

    let window = settings.peak_window.unwrap_or((0.0, state.grid_length));
    let mut series = ProbeSeries::default();
    series.record(state, probe_k, window);

    let mean = state.mass() / state.grid_length;
    let deviation = |n: &[f64]| n.iter().fold(0.0f64, |d, x| d.max((x - mean).abs()));
    let limit = 10.0 * deviation(&state.n1).max(1e-10 * mean);
    let mass0 = state.mass();

    let mut stepper = Rk4::new(state.points());
    for step in 1..=settings.steps {
        stepper.step(&model, state, settings.dt)?;
        let dev = deviation(&state.n1);
        let mass = state.mass();
        if !dev.is_finite() || dev > limit || !(mass.abs() <= 10.0 * mass0.abs()) {
            return Err(Error::Instability {
                time: state.time,
                reason: format!(
                    "density deviation {dev:.3e} exceeds {limit:.3e} (mass {mass:.6e})"
                ),
            });
        }
        if step % settings.record_every == 0 || step == settings.steps {
            series.record(state, probe_k, window);
        }
    }
    Ok(series)
}

struct Rk4 {
    k: [(Vec<f64>, Vec<f64>); 4],
    stage: (Vec<f64>, Vec<f64>),
}

impl Rk4 {
    fn new(len: usize) -> Self {
        let pair = || (vec![0.0; len], vec![0.0; len]);
        Self {
            k: [pair(), pair(), pair(), pair()],
            stage: pair(),
        }
    }

    fn step(&mut self, model: &HydroModel, state: &mut HydroState, dt: f64) -> Result<()> {
        let dz = state.dz();
        let Rk4 {
            k: [k1, k2, k3, k4],
            stage,
        } = self;

        model.rhs(&state.n1, &state.v, dz, &mut k1.0, &mut k1.1)?;
        advance(stage, state, 0.5 * dt, k1);
        model.rhs(&stage.0, &stage.1, dz, &mut k2.0, &mut k2.1)?;
        advance(stage, state, 0.5 * dt, k2);
        model.rhs(&stage.0, &stage.1, dz, &mut k3.0, &mut k3.1)?;
        advance(stage, state, dt, k3);
        model.rhs(&stage.0, &stage.1, dz, &mut k4.0, &mut k4.1)?;

        let sixth = dt / 6.0;
        for j in 0..state.points() {
            state.n1[j] += sixth * (k1.0[j] + 2.0 * k2.0[j] + 2.0 * k3.0[j] + k4.0[j]);
            state.v[j] += sixth * (k1.1[j] + 2.0 * k2.1[j] + 2.0 * k3.1[j] + k4.1[j]);
        }
        state.time += dt;
        Ok(())
    }
}

fn advance(stage: &mut (Vec<f64>, Vec<f64>), state: &HydroState, h: f64, k: &(Vec<f64>, Vec<f64>)) {
    for j in 0..state.points() {
        stage.0[j] = state.n1[j] + h * k.0[j];
        stage.1[j] = state.v[j] + h * k.1[j];
    }
}

/// Box length holding exactly `modes` wavelengths of `k`.
pub fn commensurate_length(k: f64, modes: usize) -> f64 {
    TAU * modes as f64 / k
}

/// Mass of a Gaussian pulse state on an unbounded line, `n_eq L + n_eq eps w sqrt(pi)`.
pub fn pulse_mass(n_eq: f64, epsilon: f64, w: f64, grid_length: f64) -> f64 {
    n_eq * grid_length + n_eq * epsilon * w * PI.sqrt()
}
