//! Sound velocities of the uniform gas and of the two reduced geometries,
//! the gradient-corrected dispersion relation, and density sweeps.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::polytrope::{
    check_density, check_positive, GeometryKind, PolytropeParams, TrapGeometry,
};
use crate::widths::{asymptotic_width_3d, critical_width, solve_width};

/// Lower end of the default density sweep (trap units).
pub const DEFAULT_SWEEP_MIN: f64 = 1e-4;
/// Upper end of the default density sweep (trap units).
pub const DEFAULT_SWEEP_MAX: f64 = 1e4;
pub const DEFAULT_SWEEP_POINTS: usize = 200;

/// One density point of a sound-velocity curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub n_eq: f64,
    /// Solved equilibrium width.
    pub width: f64,
    /// Sound speed at the solved width.
    pub cs_numeric: f64,
    /// Sound speed with the width frozen at the harmonic length (1D/2D curve).
    pub cs_lowdim: f64,
    /// Sound speed at the asymptotic large-density width (3D curve).
    pub cs_3d: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DispersionBranch {
    Phonon,
    /// `c_s = 0`: only the gradient term survives, `omega = sqrt(lambda) k^2 / 2`.
    FreeParticle,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DispersionPoint {
    pub k: f64,
    pub omega: f64,
    pub branch: DispersionBranch,
}

/// `c_s = sqrt(alpha (gamma - 1) n^(gamma - 1))` for a uniform 3D gas.
pub fn sound_uniform_3d(params: &PolytropeParams, n3d: f64) -> f64 {
    (params.alpha * (params.gamma - 1.0) * n3d.powf(params.gamma - 1.0)).sqrt()
}

/// Cigar sound speed at linear density `n_eq` and transverse width `sigma`.
pub fn sound_cigar(params: &PolytropeParams, n_eq: f64, sigma: f64) -> Result<f64> {
    check_positive("sigma", sigma)?;
    check_density(n_eq)?;
    let g = params.gamma;
    Ok((params.alpha * (g - 1.0) / g).sqrt() * (n_eq / (PI * sigma * sigma)).powf(0.5 * (g - 1.0)))
}

/// Disk sound speed at areal density `n_eq` and axial width `eta`.
pub fn sound_disk(params: &PolytropeParams, n_eq: f64, eta: f64) -> Result<f64> {
    check_positive("eta", eta)?;
    check_density(n_eq)?;
    let g = params.gamma;
    Ok((params.alpha * (g - 1.0) / g.sqrt()).sqrt()
        * (n_eq / (PI.sqrt() * eta)).powf(0.5 * (g - 1.0)))
}

/// Sound speed of the reduced geometry `kind` at a given width.
pub fn sound_reduced(
    params: &PolytropeParams,
    kind: GeometryKind,
    n_eq: f64,
    width: f64,
) -> Result<f64> {
    match kind {
        GeometryKind::Cigar => sound_cigar(params, n_eq, width),
        GeometryKind::Disk => sound_disk(params, n_eq, width),
    }
}

/// Sound speed from the equilibrium width alone,
/// `omega sqrt(gamma (w^4 - lambda a^4) / (2 w^2))`; same form for both geometries.
pub fn sound_from_width(
    geom: &TrapGeometry,
    gamma: f64,
    lambda_qp: f64,
    width: f64,
) -> Result<f64> {
    check_positive("width", width)?;
    let floor = lambda_qp * geom.char_length.powi(4);
    let mut excess = width.powi(4) - floor;
    if excess < 0.0 {
        // rounding at the zero-density root
        if -excess <= 1e-12 * floor {
            excess = 0.0;
        } else {
            return Err(Error::SubcriticalWidth {
                width,
                critical: critical_width(lambda_qp, geom),
            });
        }
    }
    Ok(geom.omega_tight * (gamma * excess / (2.0 * width * width)).sqrt())
}

/// `omega = c_s k sqrt(1 + lambda k^2 / (4 c_s^2))`.
pub fn dispersion_omega(c_s: f64, lambda_qp: f64, k: f64) -> Result<DispersionPoint> {
    if !(c_s >= 0.0) || !c_s.is_finite() {
        return Err(Error::domain("c_s", format!("must be >= 0, got {c_s}")));
    }
    if !(lambda_qp >= 0.0) {
        return Err(Error::domain(
            "lambda",
            format!("must be >= 0, got {lambda_qp}"),
        ));
    }
    if !(k >= 0.0) || !k.is_finite() {
        return Err(Error::domain("k", format!("must be >= 0, got {k}")));
    }
    let (omega, branch) = if c_s == 0.0 {
        (
            0.5 * lambda_qp.sqrt() * k * k,
            DispersionBranch::FreeParticle,
        )
    } else {
        (
            c_s * k * (1.0 + lambda_qp * k * k / (4.0 * c_s * c_s)).sqrt(),
            DispersionBranch::Phonon,
        )
    };
    Ok(DispersionPoint { k, omega, branch })
}

/// `points` logarithmically spaced values covering `[min, max]`.
pub fn log_grid(min: f64, max: f64, points: usize) -> Vec<f64> {
    match points {
        0 => vec![],
        1 => vec![min],
        _ => {
            let (a, b) = (min.ln(), max.ln());
            (0..points)
                .map(|i| match i {
                    0 => min,
                    i if i == points - 1 => max,
                    i => (a + (b - a) * i as f64 / (points - 1) as f64).exp(),
                })
                .collect()
        }
    }
}

pub fn default_density_grid() -> Vec<f64> {
    log_grid(DEFAULT_SWEEP_MIN, DEFAULT_SWEEP_MAX, DEFAULT_SWEEP_POINTS)
}

/// Solved, low-dimensional and 3D sound speeds along a density grid.
pub fn sweep_sound_curve(
    params: &PolytropeParams,
    geom: &TrapGeometry,
    densities: &[f64],
) -> Result<Vec<SweepRow>> {
    if let Some(bad) = densities.iter().find(|n| !(**n > 0.0) || !n.is_finite()) {
        return Err(Error::domain(
            "densities",
            format!("must all be > 0, got {bad}"),
        ));
    }
    if densities.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::domain("densities", "must be strictly increasing"));
    }
    densities
        .iter()
        .map(|&n| sweep_row(params, geom, n))
        .collect()
}

fn sweep_row(params: &PolytropeParams, geom: &TrapGeometry, n_eq: f64) -> Result<SweepRow> {
    let at = |e: Error| Error::AtDensity {
        n_eq,
        source: Box::new(e),
    };
    let width = solve_width(params, geom, n_eq).map_err(at)?.width;
    let width_3d = asymptotic_width_3d(params, geom, n_eq).map_err(at)?;
    Ok(SweepRow {
        n_eq,
        width,
        cs_numeric: sound_reduced(params, geom.kind, n_eq, width).map_err(at)?,
        cs_lowdim: sound_reduced(params, geom.kind, n_eq, geom.char_length).map_err(at)?,
        cs_3d: sound_reduced(params, geom.kind, n_eq, width_3d).map_err(at)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polytrope::{fermi_scales, regime_params, Regime};
    use proptest::prelude::*;

    fn bec() -> PolytropeParams {
        regime_params(Regime::Bec { nu: 1.0 }, 1.0).unwrap()
    }

    fn bcs() -> PolytropeParams {
        regime_params(Regime::Bcs, 1.0).unwrap()
    }

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn uniform_3d() {
        assert!(rel(sound_uniform_3d(&bcs(), 1.0), 1.383_530_267_151_919) < 1e-14);
        assert_eq!(sound_uniform_3d(&bec(), 0.0), 0.0);
        for n in [1e-3, 0.2, 1.0, 17.0, 4e5] {
            let (_, v_f) = fermi_scales(n).unwrap();
            assert!((sound_uniform_3d(&bcs(), n) / v_f - 5f64.sqrt().recip()).abs() < 1e-12);
        }
    }

    #[test]
    fn cigar_values() {
        assert!(rel(sound_cigar(&bec(), 40.0, 3.0).unwrap(), 80f64.sqrt() / 3.0) < 1e-14);
        assert_eq!(sound_cigar(&bcs(), 0.0, 1.3).unwrap(), 0.0);
        let printed = 3f64.sqrt() * (9.0 * PI * PI).powf(1.0 / 6.0) / 5.0;
        let c = sound_cigar(&bcs(), 1.0, 1.0).unwrap();
        assert!(rel(c, printed) < 1e-14);
        assert!(rel(c, 0.731_724_616_142_009_2) < 1e-14);
        assert!(sound_cigar(&bcs(), 1.0, 0.0).is_err());
    }

    #[test]
    fn disk_values() {
        let c = sound_disk(&bec(), 1.0, 1.0).unwrap();
        assert!(rel(c, 2f64.powf(0.75) * PI.powf(0.25)) < 1e-14);
        assert!(rel(c, 2.239_030_269_840_495) < 1e-14);
        assert_eq!(sound_disk(&bec(), 0.0, 1.0).unwrap(), 0.0);
        let printed = PI.sqrt() * 3f64.powf(7.0 / 12.0) / 5f64.powf(0.75);
        let c = sound_disk(&bcs(), 1.0, 1.0).unwrap();
        assert!(rel(c, printed) < 1e-14);
        assert!(rel(c, 1.006_162_588_080_371) < 1e-14);
        assert!(sound_disk(&bcs(), 1.0, -1.0).is_err());
    }

    #[test]
    fn width_only_formula() {
        let cigar = TrapGeometry::cigar();
        let c = sound_from_width(&cigar, 2.0, 1.0, 3.0).unwrap();
        assert!(rel(c, (80.0f64 / 9.0).sqrt()) < 1e-14);
        assert!(rel(c, sound_cigar(&bec(), 40.0, 3.0).unwrap()) < 1e-14);
        assert_eq!(sound_from_width(&cigar, 5.0 / 3.0, 1.0, 1.0).unwrap(), 0.0);
        let c = sound_from_width(&TrapGeometry::disk(), 2.0, 1.0, 2f64.sqrt()).unwrap();
        assert!(rel(c, 1.5f64.sqrt()) < 1e-14);
        assert!(matches!(
            sound_from_width(&cigar, 2.0, 1.0, 0.9),
            Err(Error::SubcriticalWidth { .. })
        ));
    }

    #[test]
    fn dispersion_values() {
        for (c, k) in [(0.5, 0.1), (2.0, 3.0), (1.0, 0.0)] {
            assert_eq!(dispersion_omega(c, 0.0, k).unwrap().omega, c * k);
        }
        let p = dispersion_omega(1.0, 1.0, 2.0).unwrap();
        assert!(rel(p.omega, 2.0 * 2f64.sqrt()) < 1e-15);
        assert_eq!(p.branch, DispersionBranch::Phonon);
        assert_eq!(dispersion_omega(1.7, 1.0, 0.0).unwrap().omega, 0.0);
        let free = dispersion_omega(0.0, 4.0, 3.0).unwrap();
        assert_eq!(free.branch, DispersionBranch::FreeParticle);
        assert_eq!(free.omega, 9.0);
        assert!(dispersion_omega(-1.0, 1.0, 1.0).is_err());
        assert!(dispersion_omega(1.0, 1.0, -1.0).is_err());
    }

    #[test]
    fn sweep_single_point() {
        let rows = sweep_sound_curve(&bec(), &TrapGeometry::cigar(), &[40.0]).unwrap();
        assert_eq!(rows.len(), 1);
        let r = rows[0];
        assert!((r.width - 3.0).abs() < 1e-13);
        assert!(rel(r.cs_numeric, 80f64.sqrt() / 3.0) < 1e-13);
        assert!(rel(r.cs_lowdim, 80f64.sqrt()) < 1e-14);
        assert!(rel(r.cs_3d, 80f64.powf(0.25)) < 1e-14);
        assert!(r.cs_numeric <= r.cs_lowdim.min(r.cs_3d));
    }

    #[test]
    fn sweep_low_density_limit() {
        for p in [bec(), bcs()] {
            for g in [TrapGeometry::cigar(), TrapGeometry::disk()] {
                let r = sweep_sound_curve(&p, &g, &[1e-8]).unwrap()[0];
                assert!((r.cs_numeric / r.cs_lowdim - 1.0).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn sweep_input_validation() {
        let g = TrapGeometry::cigar();
        assert!(sweep_sound_curve(&bec(), &g, &[]).unwrap().is_empty());
        assert!(sweep_sound_curve(&bec(), &g, &[1.0, 1.0]).is_err());
        assert!(sweep_sound_curve(&bec(), &g, &[2.0, 1.0]).is_err());
        assert!(sweep_sound_curve(&bec(), &g, &[0.0, 1.0]).is_err());
    }

    #[test]
    fn sweep_propagates_density() {
        let g = TrapGeometry {
            kind: GeometryKind::Cigar,
            omega_tight: 1e-300,
            char_length: 1e150,
        };
        let err = sweep_sound_curve(&bec(), &g, &[1.0]).unwrap_err();
        assert!(matches!(err, Error::AtDensity { n_eq, .. } if n_eq == 1.0));
    }

    #[test]
    fn default_grid() {
        let grid = default_density_grid();
        assert_eq!(grid.len(), 200);
        assert_eq!(grid[0], 1e-4);
        assert_eq!(grid[199], 1e4);
        assert!(grid.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn sweep_shape() {
        let grid = default_density_grid();
        for p in [bec(), bcs()] {
            for g in [TrapGeometry::cigar(), TrapGeometry::disk()] {
                let rows = sweep_sound_curve(&p, &g, &grid).unwrap();
                for w in rows.windows(2) {
                    assert!(w[1].cs_numeric > w[0].cs_numeric);
                }
                for r in &rows {
                    assert!(r.cs_numeric <= r.cs_lowdim && r.cs_numeric <= r.cs_3d);
                    let alt = sound_from_width(&g, p.gamma, p.lambda_qp, r.width).unwrap();
                    assert!(rel(r.cs_numeric, alt) < 1e-10, "{r:?}");
                }
            }
        }
    }

    proptest! {
        #[test]
        fn dispersion_phase_velocity_nondecreasing(
            c in 1e-3f64..10.0,
            lambda in 0.0f64..4.0,
            k in 1e-3f64..20.0,
            dk in 0.0f64..5.0,
        ) {
            let a = dispersion_omega(c, lambda, k).unwrap().omega;
            let b = dispersion_omega(c, lambda, k + dk).unwrap().omega;
            prop_assert!(a >= c * k * (1.0 - 1e-15));
            prop_assert!(b / (k + dk) >= a / k * (1.0 - 1e-15));
        }

        #[test]
        fn two_routes_agree_at_the_root(
            n in 1e-4f64..1e6,
            gamma in 1.1f64..3.0,
            alpha in 0.5f64..20.0,
            lambda in 0.2f64..2.0,
            disk in any::<bool>(),
        ) {
            let p = PolytropeParams::new(gamma, alpha, lambda).unwrap();
            let g = if disk { TrapGeometry::disk() } else { TrapGeometry::cigar() };
            let w = solve_width(&p, &g, n).unwrap().width;
            let a = sound_reduced(&p, g.kind, n, w).unwrap();
            let b = sound_from_width(&g, gamma, lambda, w).unwrap();
            prop_assert!(rel(a, b) < 1e-9, "{} vs {}", a, b);
        }
    }
}
