use std::collections::BTreeMap;
use std::f64::consts::TAU;
use std::ffi::OsString;
use std::path::PathBuf;
use std::time::Instant;

use clap::Parser;
use polytrope_sound::hydrosim::{
    init_gaussian_pulse, init_standing_wave, integrate_run, HydroModel, PotentialTable, SimSettings,
};
use polytrope_sound::{
    dispersion_omega, regime_params, solve_width, sound_from_width, sound_reduced,
    sweep_sound_curve, Error, PolytropeParams, TrapGeometry,
};

use crate::error::{exit, CliError, Result};
use crate::invocation::{
    first_line, resolve, Cli, DensitySpec, InitialArg, Invocation, ModelSpec, PlotSpec,
    SimulationSpec, Task, WaveGrid,
};
use crate::manifest::{manifest_path, RunManifest};
use crate::svg::{svg_document, PlotRequest};
use crate::table::{
    csv_bytes, read_csv, write_atomic, Cell, DISPERSION_COLUMNS, SIMULATE_COLUMNS, SOUND_COLUMNS,
    SWEEP_COLUMNS, WIDTH_COLUMNS,
};

/// What a successful run produced.
#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub rows: usize,
    pub derived: BTreeMap<String, f64>,
    pub outputs: Vec<PathBuf>,
}

struct Output {
    bytes: Vec<u8>,
    rows: usize,
    derived: BTreeMap<String, f64>,
}

/// Runs `inv`, writes its output and then its manifest.
pub fn execute(inv: &Invocation) -> Result<RunReport> {
    let start = Instant::now();
    let output = match &inv.task {
        Task::Width { model, densities } => width(model, densities)?,
        Task::Sound { model, densities } => sound(model, densities)?,
        Task::Sweep { model, densities } => sweep(model, densities)?,
        Task::Dispersion { model, n_eq, waves } => dispersion(model, *n_eq, waves)?,
        Task::Simulate { model, simulation } => simulate(model, simulation)?,
        Task::Plot(spec) => plot(spec)?,
    };
    write_atomic(&inv.out, &output.bytes)?;
    let outputs = vec![inv.out.clone()];
    let manifest = RunManifest::new(
        inv,
        &output.derived,
        &outputs,
        start.elapsed().as_secs_f64(),
    )?;
    manifest.write(&manifest_path(&inv.out))?;
    Ok(RunReport {
        rows: output.rows,
        derived: output.derived,
        outputs,
    })
}

/// Runs `inv` and maps the outcome to a process exit code, printing any
/// diagnostic to standard error.
pub fn run_command(inv: &Invocation) -> i32 {
    match execute(inv) {
        Ok(_) => exit::SUCCESS,
        Err(e) => report(&e),
    }
}

/// Full command-line entry point: `argv` includes the program name.
pub fn run_cli<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            print!("{e}");
            return exit::SUCCESS;
        }
        Err(e) => {
            eprintln!("polysound: {}", first_line(&e.to_string()));
            return exit::USAGE;
        }
    };
    match resolve(cli.command, None) {
        Ok(inv) => run_command(&inv),
        Err(e) => report(&e),
    }
}

fn report(e: &CliError) -> i32 {
    eprintln!("polysound: {e}");
    e.exit_code()
}

fn setup(model: &ModelSpec) -> Result<(PolytropeParams, TrapGeometry)> {
    Ok((
        regime_params(model.regime.to_core(), model.lambda)?,
        model.trap(),
    ))
}

fn at(n_eq: f64) -> impl Fn(Error) -> Error {
    move |e| Error::AtDensity {
        n_eq,
        source: Box::new(e),
    }
}

fn table(schema: &[&str], rows: Vec<Vec<Cell>>) -> Result<Output> {
    Ok(Output {
        bytes: csv_bytes(schema, &rows)?,
        rows: rows.len(),
        derived: BTreeMap::new(),
    })
}

fn width(model: &ModelSpec, densities: &DensitySpec) -> Result<Output> {
    let (params, geom) = setup(model)?;
    let mut rows = Vec::new();
    for n in densities.values() {
        let sol = solve_width(&params, &geom, n).map_err(at(n))?;
        rows.push(vec![
            n.into(),
            sol.width.into(),
            sol.residual.into(),
            sol.iterations.into(),
        ]);
    }
    table(&WIDTH_COLUMNS, rows)
}

fn sound(model: &ModelSpec, densities: &DensitySpec) -> Result<Output> {
    let (params, geom) = setup(model)?;
    let mut rows = Vec::new();
    for n in densities.values() {
        let w = solve_width(&params, &geom, n).map_err(at(n))?.width;
        let by_density = sound_reduced(&params, geom.kind, n, w).map_err(at(n))?;
        let by_width = sound_from_width(&geom, params.gamma, params.lambda_qp, w).map_err(at(n))?;
        rows.push(vec![n.into(), w.into(), by_density.into(), by_width.into()]);
    }
    table(&SOUND_COLUMNS, rows)
}

fn sweep(model: &ModelSpec, densities: &DensitySpec) -> Result<Output> {
    let (params, geom) = setup(model)?;
    let rows = sweep_sound_curve(&params, &geom, &densities.values())?
        .into_iter()
        .map(|r| {
            vec![
                r.n_eq.into(),
                r.width.into(),
                r.cs_numeric.into(),
                r.cs_lowdim.into(),
                r.cs_3d.into(),
            ]
        })
        .collect();
    table(&SWEEP_COLUMNS, rows)
}

fn dispersion(model: &ModelSpec, n_eq: f64, waves: &WaveGrid) -> Result<Output> {
    let (params, geom) = setup(model)?;
    let w = solve_width(&params, &geom, n_eq).map_err(at(n_eq))?.width;
    let c_s = sound_reduced(&params, geom.kind, n_eq, w).map_err(at(n_eq))?;
    let rows = waves
        .values()
        .into_iter()
        .map(|k| {
            Ok(vec![
                k.into(),
                dispersion_omega(c_s, params.lambda_qp, k)?.omega.into(),
            ])
        })
        .collect::<Result<Vec<_>>>()?;
    let mut out = table(&DISPERSION_COLUMNS, rows)?;
    out.derived.insert("width".into(), w);
    out.derived.insert("c_s".into(), c_s);
    Ok(out)
}

fn simulate(model: &ModelSpec, sim: &SimulationSpec) -> Result<Output> {
    let (params, geom) = setup(model)?;
    let length = sim.box_length;
    let (mut state, probe_k, peak_window) = match sim.initial {
        InitialArg::Wave => (
            init_standing_wave(sim.n_eq, sim.epsilon, sim.k, sim.points, length)?,
            sim.k,
            None,
        ),
        InitialArg::Pulse => (
            init_gaussian_pulse(
                sim.n_eq,
                sim.epsilon,
                0.5 * length,
                sim.pulse_width,
                sim.points,
                length,
            )?,
            TAU / length,
            Some((0.5 * length, length)),
        ),
    };
    let potential = match &sim.potential {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
            Some(PotentialTable::parse(&text)?.sample(length, sim.points))
        }
        None => None,
    };
    let hydro = HydroModel::new(params, geom, sim.width_mode(), sim.n_eq, potential.clone())?;
    let dt = match sim.dt {
        Some(dt) => dt,
        None => 0.9 * hydro.stable_dt(&state)?,
    };

    let mut settings = SimSettings::new(dt, sim.steps);
    settings.width_mode = sim.width_mode();
    settings.record_every = sim.record_every;
    settings.external_potential = potential;
    settings.reference_density = Some(sim.n_eq);
    settings.peak_window = peak_window;
    let series = integrate_run(&mut state, &params, &geom, &settings, probe_k)?;

    let rows = (0..series.len())
        .map(|i| {
            let m = series.mode_amplitude[i];
            vec![
                series.times[i].into(),
                series.mass[i].into(),
                m.re.into(),
                m.im.into(),
                series.peak_position[i].into(),
            ]
        })
        .collect();
    let mut out = table(&SIMULATE_COLUMNS, rows)?;
    out.derived.insert("dt".into(), dt);
    out.derived.insert("mass_drift".into(), series.mass_drift());
    if let Some(w) = hydro.frozen_width() {
        out.derived.insert("frozen_width".into(), w);
    }
    Ok(out)
}

fn plot(spec: &PlotSpec) -> Result<Output> {
    let data = read_csv(&spec.input)?;
    let x = spec
        .x
        .clone()
        .or_else(|| data.header.first().cloned())
        .ok_or_else(|| CliError::usage("plot: input has no columns"))?;
    let y = spec
        .y
        .clone()
        .unwrap_or_else(|| data.header.iter().filter(|h| **h != x).cloned().collect());
    let styles = spec.styles.clone().unwrap_or_default();
    let req = PlotRequest {
        x: &x,
        y: &y,
        styles: &styles,
        log_x: spec.log_x,
    };
    let svg = svg_document(&data, &req)?;
    Ok(Output {
        bytes: svg.into_bytes(),
        rows: y.len(),
        derived: BTreeMap::new(),
    })
}
