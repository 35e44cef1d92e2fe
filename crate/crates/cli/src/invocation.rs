//! Command-line flags, `key = value` config files, and their resolution into
//! a fully specified [`Invocation`].
//!
//! Precedence is flag, then config file, then built-in default. The config
//! file is named by `--config` or, failing that, the `POLYTROPE_SOUND_CONFIG`
//! environment variable.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use polytrope_sound::hydrosim::{
    commensurate_length, WidthMode, DEFAULT_BOX_LENGTH, DEFAULT_POINTS, DEFAULT_PULSE_WIDTH,
};
use polytrope_sound::sound::{DEFAULT_SWEEP_MAX, DEFAULT_SWEEP_MIN, DEFAULT_SWEEP_POINTS};
use polytrope_sound::{log_grid, GeometryKind, Regime, TrapGeometry};
use serde::Serialize;

use crate::error::{CliError, Result};
use crate::svg::LineStyle;

pub const CONFIG_ENV: &str = "POLYTROPE_SOUND_CONFIG";

const DEFAULT_LAMBDA: f64 = 1.0;
const DEFAULT_N_EQ: f64 = 1.0;
const DEFAULT_K: f64 = 0.5;
const DEFAULT_K_MAX: f64 = 5.0;
const DEFAULT_K_POINTS: usize = 101;
const DEFAULT_EPSILON: f64 = 1e-3;
const DEFAULT_STEPS: usize = 1000;
const DEFAULT_RECORD_EVERY: usize = 10;

#[derive(Debug, Parser)]
#[command(
    name = "polysound",
    version,
    about = "Widths and sound velocities of confined polytropic superfluids"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve the equilibrium transverse width.
    Width(Args),
    /// Sound speed by the density formula and by the width-only formula.
    Sound(Args),
    /// Sound speed with its low-dimensional and 3D limits over a density grid.
    Sweep(Args),
    /// Bogoliubov-type dispersion omega(k) at one density.
    Dispersion(Args),
    /// Time-domain hydrodynamics run with probe output.
    Simulate(Args),
    /// Render columns of a CSV file as an SVG line plot.
    Plot(Args),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RegimeArg {
    Bcs,
    Bec,
    Custom,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GeometryArg {
    Cigar,
    Disk,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum WidthModeArg {
    Frozen,
    Local,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum InitialArg {
    Wave,
    Pulse,
}

/// Flags shared by every subcommand. Each one may also appear as a key in the
/// config file (`n-eq = 40` or `n_eq = 40`).
#[derive(Debug, Clone, Default, clap::Args)]
pub struct Args {
    #[arg(long, value_enum)]
    pub regime: Option<RegimeArg>,
    /// BEC coupling (scattering length times particle number, trap units).
    #[arg(long)]
    pub nu: Option<f64>,
    #[arg(long)]
    pub gamma: Option<f64>,
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Gradient-correction strength.
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long, value_enum)]
    pub geometry: Option<GeometryArg>,

    #[arg(long = "n-eq")]
    pub n_eq: Option<f64>,
    #[arg(long = "n-min")]
    pub n_min: Option<f64>,
    #[arg(long = "n-max")]
    pub n_max: Option<f64>,
    #[arg(long = "n-points")]
    pub n_points: Option<usize>,

    #[arg(long)]
    pub k: Option<f64>,
    #[arg(long = "k-min")]
    pub k_min: Option<f64>,
    #[arg(long = "k-max")]
    pub k_max: Option<f64>,
    #[arg(long = "k-points")]
    pub k_points: Option<usize>,

    #[arg(long)]
    pub epsilon: Option<f64>,
    #[arg(long)]
    pub dt: Option<f64>,
    #[arg(long)]
    pub steps: Option<usize>,
    #[arg(long)]
    pub points: Option<usize>,
    #[arg(long = "box-length")]
    pub box_length: Option<f64>,
    #[arg(long = "width-mode", value_enum)]
    pub width_mode: Option<WidthModeArg>,
    #[arg(long, value_enum)]
    pub initial: Option<InitialArg>,
    #[arg(long = "pulse-width")]
    pub pulse_width: Option<f64>,
    #[arg(long = "record-every")]
    pub record_every: Option<usize>,
    /// Two-column `z V(z)` table for an external potential.
    #[arg(long)]
    pub potential: Option<PathBuf>,

    /// CSV file to plot.
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub x: Option<String>,
    #[arg(long, value_delimiter = ',')]
    pub y: Option<Vec<String>>,
    #[arg(long, value_delimiter = ',', value_enum)]
    pub styles: Option<Vec<LineStyle>>,
    #[arg(long = "log-x", num_args = 0..=1, default_missing_value = "true")]
    pub log_x: Option<bool>,

    #[arg(long, env = CONFIG_ENV)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SubcommandKind {
    Width,
    Sound,
    Sweep,
    Dispersion,
    Simulate,
    Plot,
}

impl SubcommandKind {
    pub fn name(self) -> &'static str {
        match self {
            SubcommandKind::Width => "width",
            SubcommandKind::Sound => "sound",
            SubcommandKind::Sweep => "sweep",
            SubcommandKind::Dispersion => "dispersion",
            SubcommandKind::Simulate => "simulate",
            SubcommandKind::Plot => "plot",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum RegimeSpec {
    Bcs,
    Bec { nu: f64 },
    Custom { gamma: f64, alpha: f64 },
}

impl RegimeSpec {
    pub fn to_core(self) -> Regime {
        match self {
            RegimeSpec::Bcs => Regime::Bcs,
            RegimeSpec::Bec { nu } => Regime::Bec { nu },
            RegimeSpec::Custom { gamma, alpha } => Regime::Custom { gamma, alpha },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModelSpec {
    pub regime: RegimeSpec,
    pub geometry: GeometryArg,
    pub lambda: f64,
}

impl ModelSpec {
    pub fn geometry_kind(&self) -> GeometryKind {
        match self.geometry {
            GeometryArg::Cigar => GeometryKind::Cigar,
            GeometryArg::Disk => GeometryKind::Disk,
        }
    }

    pub fn trap(&self) -> TrapGeometry {
        TrapGeometry::unit(self.geometry_kind())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum DensitySpec {
    Single { n_eq: f64 },
    Grid { min: f64, max: f64, points: usize },
}

impl DensitySpec {
    pub fn values(&self) -> Vec<f64> {
        match *self {
            DensitySpec::Single { n_eq } => vec![n_eq],
            DensitySpec::Grid { min, max, points } => log_grid(min, max, points),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum WaveGrid {
    Single { k: f64 },
    Linear { min: f64, max: f64, points: usize },
}

impl WaveGrid {
    pub fn values(&self) -> Vec<f64> {
        match *self {
            WaveGrid::Single { k } => vec![k],
            WaveGrid::Linear { min, max, points } => {
                if points == 1 {
                    return vec![min];
                }
                let step = (max - min) / (points - 1) as f64;
                (0..points).map(|i| min + i as f64 * step).collect()
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimulationSpec {
    pub n_eq: f64,
    pub initial: InitialArg,
    pub k: f64,
    pub epsilon: f64,
    pub pulse_width: f64,
    pub points: usize,
    pub box_length: f64,
    /// `None` picks 90% of the stability cap at run time.
    pub dt: Option<f64>,
    pub steps: usize,
    pub record_every: usize,
    pub width_mode: WidthModeArg,
    pub potential: Option<PathBuf>,
}

impl SimulationSpec {
    pub fn width_mode(&self) -> WidthMode {
        match self.width_mode {
            WidthModeArg::Frozen => WidthMode::FrozenAtEquilibrium,
            WidthModeArg::Local => WidthMode::LocalAdiabatic,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PlotSpec {
    pub input: PathBuf,
    pub x: Option<String>,
    pub y: Option<Vec<String>>,
    pub styles: Option<Vec<LineStyle>>,
    pub log_x: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "subcommand", rename_all = "lowercase")]
pub enum Task {
    Width {
        model: ModelSpec,
        densities: DensitySpec,
    },
    Sound {
        model: ModelSpec,
        densities: DensitySpec,
    },
    Sweep {
        model: ModelSpec,
        densities: DensitySpec,
    },
    Dispersion {
        model: ModelSpec,
        n_eq: f64,
        waves: WaveGrid,
    },
    Simulate {
        model: ModelSpec,
        simulation: SimulationSpec,
    },
    Plot(PlotSpec),
}

/// A validated, fully resolved request.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Invocation {
    pub task: Task,
    pub out: PathBuf,
}

impl Invocation {
    pub fn subcommand(&self) -> SubcommandKind {
        match self.task {
            Task::Width { .. } => SubcommandKind::Width,
            Task::Sound { .. } => SubcommandKind::Sound,
            Task::Sweep { .. } => SubcommandKind::Sweep,
            Task::Dispersion { .. } => SubcommandKind::Dispersion,
            Task::Simulate { .. } => SubcommandKind::Simulate,
            Task::Plot(_) => SubcommandKind::Plot,
        }
    }
}

/// Parses `argv` (including the program name) into an [`Invocation`].
///
/// `config_text` stands in for the config file; when it is `None` the file
/// named by `--config` or the environment is read instead.
pub fn parse_invocation<I, T>(argv: I, config_text: Option<&str>) -> Result<Invocation>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(argv).map_err(|e| CliError::usage(first_line(&e.to_string())))?;
    resolve(cli.command, config_text)
}

pub(crate) fn first_line(text: &str) -> String {
    text.lines()
        .find(|l| !l.trim().is_empty())
        .unwrap_or("")
        .trim()
        .to_string()
}

pub fn resolve(command: Command, config_text: Option<&str>) -> Result<Invocation> {
    let (kind, mut args) = match command {
        Command::Width(a) => (SubcommandKind::Width, a),
        Command::Sound(a) => (SubcommandKind::Sound, a),
        Command::Sweep(a) => (SubcommandKind::Sweep, a),
        Command::Dispersion(a) => (SubcommandKind::Dispersion, a),
        Command::Simulate(a) => (SubcommandKind::Simulate, a),
        Command::Plot(a) => (SubcommandKind::Plot, a),
    };
    let loaded;
    let text = match (config_text, &args.config) {
        (Some(text), _) => Some(text),
        (None, Some(path)) => {
            loaded = std::fs::read_to_string(path).map_err(|e| {
                CliError::usage(format!("config: cannot read {}: {e}", path.display()))
            })?;
            Some(loaded.as_str())
        }
        (None, None) => None,
    };
    if let Some(text) = text {
        let mut entries = parse_config(text)?;
        args.merge(&mut entries)?;
        if let Some((key, entry)) = entries.into_iter().next() {
            return Err(CliError::usage(format!(
                "config line {}: unknown key `{key}`",
                entry.line
            )));
        }
    }
    args.validate()?;

    let out = args
        .out
        .clone()
        .unwrap_or_else(|| PathBuf::from(default_out(kind)));
    let task = match kind {
        SubcommandKind::Width => Task::Width {
            model: args.model()?,
            densities: args.densities(DensitySpec::Single { n_eq: DEFAULT_N_EQ })?,
        },
        SubcommandKind::Sound => Task::Sound {
            model: args.model()?,
            densities: args.densities(DensitySpec::Single { n_eq: DEFAULT_N_EQ })?,
        },
        SubcommandKind::Sweep => Task::Sweep {
            model: args.model()?,
            densities: args.densities(DensitySpec::Grid {
                min: DEFAULT_SWEEP_MIN,
                max: DEFAULT_SWEEP_MAX,
                points: DEFAULT_SWEEP_POINTS,
            })?,
        },
        SubcommandKind::Dispersion => Task::Dispersion {
            model: args.model()?,
            n_eq: args.single_density()?,
            waves: args.waves()?,
        },
        SubcommandKind::Simulate => Task::Simulate {
            model: args.model()?,
            simulation: args.simulation()?,
        },
        SubcommandKind::Plot => Task::Plot(args.plot()?),
    };
    Ok(Invocation { task, out })
}

fn default_out(kind: SubcommandKind) -> String {
    match kind {
        SubcommandKind::Plot => "plot.svg".to_string(),
        other => format!("{}.csv", other.name()),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigEntry {
    pub line: usize,
    pub value: String,
}

/// Parses `key = value` lines. Keys are normalised to the flag spelling
/// (`n_eq` becomes `n-eq`); `#` starts a comment.
pub fn parse_config(text: &str) -> Result<BTreeMap<String, ConfigEntry>> {
    let mut out = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            CliError::usage(format!("config line {}: expected `key = value`", i + 1))
        })?;
        let key = key.trim().replace('_', "-");
        if key.is_empty() {
            return Err(CliError::usage(format!("config line {}: empty key", i + 1)));
        }
        let entry = ConfigEntry {
            line: i + 1,
            value: value.trim().to_string(),
        };
        if out.insert(key.clone(), entry).is_some() {
            return Err(CliError::usage(format!(
                "config line {}: duplicate key `{key}`",
                i + 1
            )));
        }
    }
    Ok(out)
}

trait ConfigValue: Sized {
    fn parse_value(s: &str) -> std::result::Result<Self, String>;
}

macro_rules! from_str_value {
    ($($t:ty),*) => {$(
        impl ConfigValue for $t {
            fn parse_value(s: &str) -> std::result::Result<Self, String> {
                s.parse().map_err(|e| format!("{e}"))
            }
        }
    )*};
}

macro_rules! value_enum_value {
    ($($t:ty),*) => {$(
        impl ConfigValue for $t {
            fn parse_value(s: &str) -> std::result::Result<Self, String> {
                <$t as ValueEnum>::from_str(s, true)
            }
        }
    )*};
}

from_str_value!(f64, usize, bool, String, PathBuf);
value_enum_value!(RegimeArg, GeometryArg, WidthModeArg, InitialArg, LineStyle);

impl<T: ConfigValue> ConfigValue for Vec<T> {
    fn parse_value(s: &str) -> std::result::Result<Self, String> {
        s.split(',').map(|p| T::parse_value(p.trim())).collect()
    }
}

fn take<T: ConfigValue>(
    entries: &mut BTreeMap<String, ConfigEntry>,
    key: &str,
    slot: &mut Option<T>,
) -> Result<()> {
    if let Some(entry) = entries.remove(key) {
        if slot.is_none() {
            let value = T::parse_value(&entry.value).map_err(|e| {
                CliError::usage(format!("config line {}: invalid `{key}`: {e}", entry.line))
            })?;
            *slot = Some(value);
        }
    }
    Ok(())
}

fn finite(name: &str, v: Option<f64>) -> Result<()> {
    match v {
        Some(x) if !x.is_finite() => Err(CliError::usage(format!(
            "--{name}: must be finite, got {x}"
        ))),
        _ => Ok(()),
    }
}

fn require(name: &str, v: Option<f64>, ok: fn(f64) -> bool, what: &str) -> Result<()> {
    finite(name, v)?;
    match v {
        Some(x) if !ok(x) => Err(CliError::usage(format!(
            "--{name}: must be {what}, got {x}"
        ))),
        _ => Ok(()),
    }
}

fn positive(x: f64) -> bool {
    x > 0.0
}

fn non_negative(x: f64) -> bool {
    x >= 0.0
}

impl Args {
    fn merge(&mut self, e: &mut BTreeMap<String, ConfigEntry>) -> Result<()> {
        take(e, "regime", &mut self.regime)?;
        take(e, "nu", &mut self.nu)?;
        take(e, "gamma", &mut self.gamma)?;
        take(e, "alpha", &mut self.alpha)?;
        take(e, "lambda", &mut self.lambda)?;
        take(e, "geometry", &mut self.geometry)?;
        take(e, "n-eq", &mut self.n_eq)?;
        take(e, "n-min", &mut self.n_min)?;
        take(e, "n-max", &mut self.n_max)?;
        take(e, "n-points", &mut self.n_points)?;
        take(e, "k", &mut self.k)?;
        take(e, "k-min", &mut self.k_min)?;
        take(e, "k-max", &mut self.k_max)?;
        take(e, "k-points", &mut self.k_points)?;
        take(e, "epsilon", &mut self.epsilon)?;
        take(e, "dt", &mut self.dt)?;
        take(e, "steps", &mut self.steps)?;
        take(e, "points", &mut self.points)?;
        take(e, "box-length", &mut self.box_length)?;
        take(e, "width-mode", &mut self.width_mode)?;
        take(e, "initial", &mut self.initial)?;
        take(e, "pulse-width", &mut self.pulse_width)?;
        take(e, "record-every", &mut self.record_every)?;
        take(e, "potential", &mut self.potential)?;
        take(e, "input", &mut self.input)?;
        take(e, "x", &mut self.x)?;
        take(e, "y", &mut self.y)?;
        take(e, "styles", &mut self.styles)?;
        take(e, "log-x", &mut self.log_x)?;
        take(e, "out", &mut self.out)?;
        Ok(())
    }

    fn validate(&self) -> Result<()> {
        require("nu", self.nu, positive, "> 0")?;
        require("gamma", self.gamma, |g| g > 1.0, "> 1")?;
        require("alpha", self.alpha, positive, "> 0")?;
        require("lambda", self.lambda, non_negative, ">= 0")?;
        require("n-eq", self.n_eq, non_negative, ">= 0")?;
        require("n-min", self.n_min, positive, "> 0")?;
        require("n-max", self.n_max, positive, "> 0")?;
        require("k", self.k, positive, "> 0")?;
        require("k-min", self.k_min, non_negative, ">= 0")?;
        require("k-max", self.k_max, non_negative, ">= 0")?;
        require("epsilon", self.epsilon, |e| e > 0.0 && e < 1.0, "in (0, 1)")?;
        require("dt", self.dt, positive, "> 0")?;
        require("box-length", self.box_length, positive, "> 0")?;
        require("pulse-width", self.pulse_width, positive, "> 0")?;
        for (name, v) in [
            ("n-points", self.n_points),
            ("k-points", self.k_points),
            ("steps", self.steps),
            ("points", self.points),
            ("record-every", self.record_every),
        ] {
            if v == Some(0) {
                return Err(CliError::usage(format!("--{name}: must be >= 1")));
            }
        }
        Ok(())
    }

    fn model(&self) -> Result<ModelSpec> {
        let regime = match self.regime.unwrap_or(RegimeArg::Bcs) {
            RegimeArg::Bcs => RegimeSpec::Bcs,
            RegimeArg::Bec => RegimeSpec::Bec {
                nu: self.nu.unwrap_or(1.0),
            },
            RegimeArg::Custom => {
                let (Some(gamma), Some(alpha)) = (self.gamma, self.alpha) else {
                    return Err(CliError::usage(
                        "--regime=custom: both --gamma and --alpha are required",
                    ));
                };
                RegimeSpec::Custom { gamma, alpha }
            }
        };
        Ok(ModelSpec {
            regime,
            geometry: self.geometry.unwrap_or(GeometryArg::Cigar),
            lambda: self.lambda.unwrap_or(DEFAULT_LAMBDA),
        })
    }

    fn densities(&self, default: DensitySpec) -> Result<DensitySpec> {
        let grid_flags = self.n_min.is_some() || self.n_max.is_some() || self.n_points.is_some();
        if let Some(n_eq) = self.n_eq {
            if grid_flags {
                return Err(CliError::usage(
                    "--n-eq: cannot be combined with --n-min/--n-max/--n-points",
                ));
            }
            return Ok(DensitySpec::Single { n_eq });
        }
        if !grid_flags {
            return Ok(default);
        }
        let (dmin, dmax, dpoints) = match default {
            DensitySpec::Grid { min, max, points } => (min, max, points),
            DensitySpec::Single { .. } => {
                (DEFAULT_SWEEP_MIN, DEFAULT_SWEEP_MAX, DEFAULT_SWEEP_POINTS)
            }
        };
        let min = self.n_min.unwrap_or(dmin);
        let max = self.n_max.unwrap_or(dmax);
        let points = self.n_points.unwrap_or(dpoints);
        if points > 1 && !(max > min) {
            return Err(CliError::usage(format!(
                "--n-max: density grid must be strictly increasing ({min} .. {max})"
            )));
        }
        Ok(DensitySpec::Grid { min, max, points })
    }

    fn single_density(&self) -> Result<f64> {
        if self.n_min.is_some() || self.n_max.is_some() || self.n_points.is_some() {
            return Err(CliError::usage(
                "--n-min: this subcommand takes a single density (--n-eq)",
            ));
        }
        Ok(self.n_eq.unwrap_or(DEFAULT_N_EQ))
    }

    fn waves(&self) -> Result<WaveGrid> {
        let grid_flags = self.k_min.is_some() || self.k_max.is_some() || self.k_points.is_some();
        if let Some(k) = self.k {
            if grid_flags {
                return Err(CliError::usage(
                    "--k: cannot be combined with --k-min/--k-max/--k-points",
                ));
            }
            return Ok(WaveGrid::Single { k });
        }
        let min = self.k_min.unwrap_or(0.0);
        let max = self.k_max.unwrap_or(DEFAULT_K_MAX);
        let points = self.k_points.unwrap_or(DEFAULT_K_POINTS);
        if points > 1 && !(max > min) {
            return Err(CliError::usage(format!(
                "--k-max: wave-number grid must be strictly increasing ({min} .. {max})"
            )));
        }
        Ok(WaveGrid::Linear { min, max, points })
    }

    fn simulation(&self) -> Result<SimulationSpec> {
        let n_eq = self.single_density()?;
        if !(n_eq > 0.0) {
            return Err(CliError::usage(format!(
                "--n-eq: must be > 0 to simulate, got {n_eq}"
            )));
        }
        let initial = self.initial.unwrap_or(InitialArg::Wave);
        let k = self.k.unwrap_or(DEFAULT_K);
        let box_length = match (self.box_length, initial) {
            (Some(l), _) => l,
            (None, InitialArg::Pulse) => DEFAULT_BOX_LENGTH,
            (None, InitialArg::Wave) => {
                let one = commensurate_length(k, 1);
                commensurate_length(k, ((DEFAULT_BOX_LENGTH / one).round() as usize).max(1))
            }
        };
        Ok(SimulationSpec {
            n_eq,
            initial,
            k,
            epsilon: self.epsilon.unwrap_or(DEFAULT_EPSILON),
            pulse_width: self.pulse_width.unwrap_or(DEFAULT_PULSE_WIDTH),
            points: self.points.unwrap_or(DEFAULT_POINTS),
            box_length,
            dt: self.dt,
            steps: self.steps.unwrap_or(DEFAULT_STEPS),
            record_every: self.record_every.unwrap_or(DEFAULT_RECORD_EVERY),
            width_mode: self.width_mode.unwrap_or(WidthModeArg::Frozen),
            potential: self.potential.clone(),
        })
    }

    fn plot(&self) -> Result<PlotSpec> {
        let input = self
            .input
            .clone()
            .ok_or_else(|| CliError::usage("--input: plot needs a CSV file"))?;
        Ok(PlotSpec {
            input,
            x: self.x.clone(),
            y: self.y.clone(),
            styles: self.styles.clone(),
            log_x: self.log_x.unwrap_or(false),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(argv: &[&str], config: Option<&str>) -> Result<Invocation> {
        let mut full = vec!["polysound"];
        full.extend_from_slice(argv);
        parse_invocation(full, config)
    }

    #[test]
    fn sweep_defaults() {
        let inv = parse(
            &["sweep", "--regime=bec", "--nu=1", "--geometry=cigar"],
            Some(""),
        )
        .unwrap();
        assert_eq!(inv.subcommand(), SubcommandKind::Sweep);
        assert_eq!(
            inv.task,
            Task::Sweep {
                model: ModelSpec {
                    regime: RegimeSpec::Bec { nu: 1.0 },
                    geometry: GeometryArg::Cigar,
                    lambda: 1.0,
                },
                densities: DensitySpec::Grid {
                    min: 1e-4,
                    max: 1e4,
                    points: 200
                },
            }
        );
        assert_eq!(inv.out, PathBuf::from("sweep.csv"));
    }

    #[test]
    fn flag_beats_config() {
        let inv = parse(
            &["sweep", "--regime=bec", "--nu=1"],
            Some("nu = 2\nlambda=0.5\n"),
        )
        .unwrap();
        let Task::Sweep { model, .. } = inv.task else {
            panic!()
        };
        assert_eq!(model.regime, RegimeSpec::Bec { nu: 1.0 });
        assert_eq!(model.lambda, 0.5);
    }

    #[test]
    fn rejects_negative_nu() {
        let err = parse(&["sweep", "--nu=-1"], Some("")).unwrap_err();
        assert_eq!(err.exit_code(), 2);
        assert!(err.to_string().contains("nu"), "{err}");
    }

    #[test]
    fn rejects_unknown_config_key() {
        let err = parse(&["width"], Some("# header\nregime = bec\nfrobnicate = 3\n")).unwrap_err();
        assert_eq!(err.exit_code(), 2);
        assert!(err.to_string().contains("frobnicate"));
        assert!(err.to_string().contains("line 3"));
    }

    #[test]
    fn config_keys_accept_underscores() {
        let inv = parse(
            &["simulate"],
            Some("n_eq = 40\nregime = bec\ninitial = pulse\n"),
        )
        .unwrap();
        let Task::Simulate { simulation, model } = inv.task else {
            panic!()
        };
        assert_eq!(simulation.n_eq, 40.0);
        assert_eq!(simulation.initial, InitialArg::Pulse);
        assert_eq!(simulation.box_length, DEFAULT_BOX_LENGTH);
        assert_eq!(model.regime, RegimeSpec::Bec { nu: 1.0 });
    }

    #[test]
    fn wave_box_is_commensurate() {
        let inv = parse(&["simulate", "--k=0.5"], Some("")).unwrap();
        let Task::Simulate { simulation, .. } = inv.task else {
            panic!()
        };
        let modes = simulation.box_length * 0.5 / std::f64::consts::TAU;
        assert!((modes - modes.round()).abs() < 1e-12);
        assert!((simulation.box_length - 100.0).abs() < 7.0);
    }

    #[test]
    fn grid_and_single_density_conflict() {
        let err = parse(&["sweep", "--n-eq=1", "--n-points=3"], Some("")).unwrap_err();
        assert_eq!(err.exit_code(), 2);
        let err = parse(&["sweep", "--n-min=10", "--n-max=1"], Some("")).unwrap_err();
        assert!(err.to_string().contains("increasing"));
    }

    #[test]
    fn non_finite_and_bad_types() {
        assert!(parse(&["width", "--lambda=inf"], Some("")).is_err());
        assert!(parse(&["width", "--lambda=abc"], Some("")).is_err());
        assert!(parse(&["width"], Some("lambda = abc")).is_err());
        assert!(parse(&["width"], Some("no equals sign")).is_err());
        assert!(parse(&["width"], Some("nu=1\nnu=2")).is_err());
    }

    #[test]
    fn custom_regime_needs_both_parameters() {
        assert!(parse(&["width", "--regime=custom", "--gamma=1.5"], Some("")).is_err());
        let inv = parse(
            &["width", "--regime=custom", "--gamma=1.5", "--alpha=2"],
            Some(""),
        )
        .unwrap();
        let Task::Width { model, .. } = inv.task else {
            panic!()
        };
        assert_eq!(
            model.regime,
            RegimeSpec::Custom {
                gamma: 1.5,
                alpha: 2.0
            }
        );
    }

    #[test]
    fn plot_lists() {
        let inv = parse(
            &[
                "plot",
                "--input=s.csv",
                "--x=n_eq",
                "--y=cs_numeric,cs_3d",
                "--styles=solid,dotted",
                "--log-x",
            ],
            Some(""),
        )
        .unwrap();
        let Task::Plot(spec) = inv.task else { panic!() };
        assert_eq!(spec.y.unwrap(), vec!["cs_numeric", "cs_3d"]);
        assert_eq!(
            spec.styles.unwrap(),
            vec![LineStyle::Solid, LineStyle::Dotted]
        );
        assert!(spec.log_x);
        assert_eq!(inv.out, PathBuf::from("plot.svg"));
    }

    #[test]
    fn help_is_not_an_invocation() {
        assert!(parse(&["--help"], Some("")).is_err());
        assert!(parse(&[], Some("")).is_err());
    }
}
