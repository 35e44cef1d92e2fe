//! Transverse (cigar) and axial (disk) cloud widths.
//!
//! Neglecting space and time derivatives of the width turns its
//! Euler-Lagrange equation into an algebraic constraint. In trap units, with
//! `a` the harmonic length of the tight direction,
//!
//! ```text
//! cigar:  sigma^(2g) - lambda a^4 sigma^(2g-4) - 2 alpha (g-1) R / (g^2 pi^(g-1) omega^2)         = 0
//! disk:   eta^(g+1)  - lambda a^4 eta^(g-3)    - 2 alpha (g-1) R / (g^(3/2) pi^((g-1)/2) omega^2) = 0
//! ```
//!
//! where `R = n^(g-1)` for the local constraint and `R = I_g / I_1` for the
//! variational one. For `lambda > 0` the left-hand side is negative at
//! `lambda^(1/4) a` and strictly increasing beyond it, so the physical root is
//! unique and bracketed from below.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::polytrope::{check_density, GeometryKind, PolytropeParams, TrapGeometry};
use crate::roots::newton_bisect;

/// Relative step tolerance of the width iteration.
pub const WIDTH_TOL: f64 = 1e-14;
/// Iteration cap of the width iteration, bracket growth included.
pub const MAX_ITERATIONS: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    /// Root of the complete constraint.
    Full,
    /// Large-density power law with the gradient term dropped.
    Asymptotic3D,
    /// Width frozen at the harmonic length.
    LowDimLimit,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WidthSolution {
    pub width: f64,
    pub residual: f64,
    pub iterations: usize,
    pub branch: Branch,
}

/// A density sampled on a uniform grid.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityProfile {
    positions: Vec<f64>,
    values: Vec<f64>,
    spacing: f64,
}

impl DensityProfile {
    pub fn new(positions: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if positions.len() != values.len() {
            return Err(Error::domain(
                "profile",
                format!("{} positions but {} values", positions.len(), values.len()),
            ));
        }
        if positions.len() < 2 {
            return Err(Error::domain("profile", "need at least two samples"));
        }
        if let Some(v) = values.iter().find(|v| !(**v >= 0.0) || !v.is_finite()) {
            return Err(Error::domain(
                "profile",
                format!("negative or non-finite density {v}"),
            ));
        }
        let spacing =
            (positions[positions.len() - 1] - positions[0]) / (positions.len() - 1) as f64;
        if !(spacing > 0.0) {
            return Err(Error::domain(
                "profile",
                "positions must be strictly increasing",
            ));
        }
        for (i, w) in positions.windows(2).enumerate() {
            let step = w[1] - w[0];
            if !(step > 0.0) || (step - spacing).abs() > 1e-12 * spacing.max(1.0) {
                return Err(Error::domain(
                    "profile",
                    format!("non-uniform spacing between samples {i} and {}", i + 1),
                ));
            }
        }
        Ok(Self {
            positions,
            values,
            spacing,
        })
    }

    /// Samples `f` at `points` equally spaced positions covering `[start, end]`.
    pub fn sample<F: Fn(f64) -> f64>(start: f64, end: f64, points: usize, f: F) -> Result<Self> {
        if points < 2 {
            return Err(Error::domain("profile", "need at least two samples"));
        }
        let h = (end - start) / (points - 1) as f64;
        let positions: Vec<f64> = (0..points).map(|i| start + h * i as f64).collect();
        let values = positions.iter().map(|&z| f(z)).collect();
        Self::new(positions, values)
    }

    pub fn positions(&self) -> &[f64] {
        &self.positions
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    fn trapezoid<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        let n = self.values.len();
        let interior: f64 = self.values[1..n - 1].iter().map(|&v| f(v)).sum();
        self.spacing * (interior + 0.5 * (f(self.values[0]) + f(self.values[n - 1])))
    }
}

/// Interaction term of the constraint per unit `R`, already divided by `omega^2`.
fn coupling(params: &PolytropeParams, geom: &TrapGeometry) -> f64 {
    let g = params.gamma;
    let num = 2.0 * params.alpha * (g - 1.0);
    let den = match geom.kind {
        GeometryKind::Cigar => g * g * PI.powf(g - 1.0),
        GeometryKind::Disk => g.powf(1.5) * PI.powf(0.5 * (g - 1.0)),
    };
    num / (den * geom.omega_tight * geom.omega_tight)
}

/// Value and derivative of the constraint at `u` for a given interaction term.
fn constraint(params: &PolytropeParams, geom: &TrapGeometry, forcing: f64, u: f64) -> (f64, f64) {
    let g = params.gamma;
    let la4 = params.lambda_qp * geom.char_length.powi(4);
    match geom.kind {
        GeometryKind::Cigar => (
            u.powf(2.0 * g) - la4 * u.powf(2.0 * g - 4.0) - forcing,
            2.0 * g * u.powf(2.0 * g - 1.0) - la4 * (2.0 * g - 4.0) * u.powf(2.0 * g - 5.0),
        ),
        GeometryKind::Disk => (
            u.powf(g + 1.0) - la4 * u.powf(g - 3.0) - forcing,
            (g + 1.0) * u.powf(g) - la4 * (g - 3.0) * u.powf(g - 4.0),
        ),
    }
}

/// Leading power of the constraint: `2 gamma` (cigar) or `gamma + 1` (disk).
fn leading_power(params: &PolytropeParams, kind: GeometryKind) -> f64 {
    match kind {
        GeometryKind::Cigar => 2.0 * params.gamma,
        GeometryKind::Disk => params.gamma + 1.0,
    }
}

/// Lower edge of the physical branch, `lambda^(1/4) a`.
pub fn critical_width(lambda_qp: f64, geom: &TrapGeometry) -> f64 {
    lambda_qp.powf(0.25) * geom.char_length
}

pub fn cigar_width_residual(
    params: &PolytropeParams,
    geom: &TrapGeometry,
    sigma: f64,
    n_eq: f64,
) -> Result<f64> {
    if geom.kind != GeometryKind::Cigar {
        return Err(Error::WrongGeometry { expected: "cigar" });
    }
    width_residual(params, geom, sigma, n_eq)
}

pub fn disk_width_residual(
    params: &PolytropeParams,
    geom: &TrapGeometry,
    eta: f64,
    n_eq: f64,
) -> Result<f64> {
    if geom.kind != GeometryKind::Disk {
        return Err(Error::WrongGeometry { expected: "disk" });
    }
    width_residual(params, geom, eta, n_eq)
}

/// Constraint value at `width` for either geometry.
pub fn width_residual(
    params: &PolytropeParams,
    geom: &TrapGeometry,
    width: f64,
    n_eq: f64,
) -> Result<f64> {
    crate::polytrope::check_positive("width", width)?;
    check_density(n_eq)?;
    let forcing = coupling(params, geom) * n_eq.powf(params.gamma - 1.0);
    Ok(constraint(params, geom, forcing, width).0)
}

pub fn solve_cigar_width(
    params: &PolytropeParams,
    geom: &TrapGeometry,
    n_eq: f64,
) -> Result<WidthSolution> {
    if geom.kind != GeometryKind::Cigar {
        return Err(Error::WrongGeometry { expected: "cigar" });
    }
    solve_width(params, geom, n_eq)
}

pub fn solve_disk_width(
    params: &PolytropeParams,
    geom: &TrapGeometry,
    n_eq: f64,
) -> Result<WidthSolution> {
    if geom.kind != GeometryKind::Disk {
        return Err(Error::WrongGeometry { expected: "disk" });
    }
    solve_width(params, geom, n_eq)
}

/// Equilibrium width at uniform density `n_eq`, dispatching on the geometry.
pub fn solve_width(
    params: &PolytropeParams,
    geom: &TrapGeometry,
    n_eq: f64,
) -> Result<WidthSolution> {
    check_density(n_eq)?;
    solve_for_ratio(params, geom, n_eq.powf(params.gamma - 1.0))
}

/// Width from the action-minimizing constraint, where `moment_ratio = I_gamma / I_1`.
pub fn variational_width(
    params: &PolytropeParams,
    geom: &TrapGeometry,
    moment_ratio: f64,
) -> Result<WidthSolution> {
    if !(moment_ratio >= 0.0) || !moment_ratio.is_finite() {
        return Err(Error::domain(
            "moment_ratio",
            format!("must be >= 0, got {moment_ratio}"),
        ));
    }
    solve_for_ratio(params, geom, moment_ratio)
}

fn solve_for_ratio(
    params: &PolytropeParams,
    geom: &TrapGeometry,
    ratio: f64,
) -> Result<WidthSolution> {
    let forcing = coupling(params, geom) * ratio;
    if !forcing.is_finite() {
        return Err(Error::DegenerateInput(format!(
            "interaction term overflows (ratio {ratio}, omega {})",
            geom.omega_tight
        )));
    }
    let power = leading_power(params, geom.kind);

    if params.lambda_qp == 0.0 {
        if forcing == 0.0 {
            return Err(Error::DegenerateInput(
                "lambda = 0 at zero density has no positive width".into(),
            ));
        }
        let width = forcing.powf(1.0 / power);
        return Ok(WidthSolution {
            width,
            residual: constraint(params, geom, forcing, width).0,
            iterations: 0,
            branch: Branch::Full,
        });
    }

    let lo = critical_width(params.lambda_qp, geom);
    if forcing == 0.0 {
        return Ok(WidthSolution {
            width: lo,
            residual: constraint(params, geom, forcing, lo).0,
            iterations: 0,
            branch: Branch::Full,
        });
    }

    // Grow the upper bracket from the larger of the two limiting widths.
    let mut hi = 2.0 * lo.max(forcing.powf(1.0 / power));
    let mut grown = 0;
    while constraint(params, geom, forcing, hi).0 <= 0.0 {
        hi *= 2.0;
        grown += 1;
        if grown >= MAX_ITERATIONS || !hi.is_finite() {
            return Err(Error::ConvergenceFailure {
                iterations: grown,
                last: hi,
            });
        }
    }

    let root = newton_bisect(
        |u| constraint(params, geom, forcing, u),
        lo,
        hi,
        WIDTH_TOL,
        MAX_ITERATIONS - grown,
    )
    .map_err(|e| match e {
        Error::ConvergenceFailure { iterations, last } => Error::ConvergenceFailure {
            iterations: iterations + grown,
            last,
        },
        other => other,
    })?;

    Ok(WidthSolution {
        width: root.x,
        residual: root.residual,
        iterations: root.iterations + grown,
        branch: Branch::Full,
    })
}

/// Large-density width: the constraint with the gradient term dropped.
pub fn asymptotic_width_3d(
    params: &PolytropeParams,
    geom: &TrapGeometry,
    n_eq: f64,
) -> Result<f64> {
    if !(n_eq > 0.0) || !n_eq.is_finite() {
        return Err(Error::domain(
            "n_eq",
            format!("must be > 0 for the 3D power law, got {n_eq}"),
        ));
    }
    let forcing = coupling(params, geom) * n_eq.powf(params.gamma - 1.0);
    Ok(forcing.powf(1.0 / leading_power(params, geom.kind)))
}

/// `I_gamma / I_1` of a sampled profile by the composite trapezoid rule.
pub fn profile_moment_ratio(profile: &DensityProfile, gamma: f64) -> Result<f64> {
    if !(gamma > 1.0) {
        return Err(Error::domain("gamma", format!("must be > 1, got {gamma}")));
    }
    let first = profile.trapezoid(|v| v);
    if first == 0.0 {
        return Err(Error::DegenerateInput("profile integrates to zero".into()));
    }
    Ok(profile.trapezoid(|v| v.powf(gamma)) / first)
}
