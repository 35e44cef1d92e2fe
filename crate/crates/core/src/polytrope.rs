//! Polytropic equation of state and trap geometry.
//!
//! Everything is expressed in trap units: `hbar = m = 1` and, unless a
//! geometry says otherwise, a tight-trap frequency of 1 so that the harmonic
//! length is 1 as well. Densities are linear (cigar) or areal (disk) and
//! velocities come out in units of `omega * a`.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Parameters of the internal energy `E(n) = (alpha/gamma) n^(gamma-1)` plus
/// the gradient correction of strength `lambda_qp`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolytropeParams {
    pub gamma: f64,
    pub alpha: f64,
    pub lambda_qp: f64,
}

impl PolytropeParams {
    pub fn new(gamma: f64, alpha: f64, lambda_qp: f64) -> Result<Self> {
        if !gamma.is_finite() || gamma <= 1.0 {
            return Err(Error::domain("gamma", format!("must be > 1, got {gamma}")));
        }
        if !alpha.is_finite() || alpha <= 0.0 {
            return Err(Error::domain("alpha", format!("must be > 0, got {alpha}")));
        }
        if !lambda_qp.is_finite() || lambda_qp < 0.0 {
            return Err(Error::domain(
                "lambda",
                format!("must be >= 0, got {lambda_qp}"),
            ));
        }
        Ok(Self {
            gamma,
            alpha,
            lambda_qp,
        })
    }

    /// Same equation of state with a different gradient-correction strength.
    pub fn with_lambda(self, lambda_qp: f64) -> Result<Self> {
        Self::new(self.gamma, self.alpha, lambda_qp)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GeometryKind {
    /// Tight harmonic confinement in the transverse plane, free axis `z`.
    Cigar,
    /// Tight harmonic confinement along `z`, free transverse plane.
    Disk,
}

impl GeometryKind {
    pub fn name(self) -> &'static str {
        match self {
            GeometryKind::Cigar => "cigar",
            GeometryKind::Disk => "disk",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrapGeometry {
    pub kind: GeometryKind,
    pub omega_tight: f64,
    pub char_length: f64,
}

impl TrapGeometry {
    /// Builds a geometry from the tight-trap frequency; the harmonic length
    /// follows as `omega^(-1/2)`.
    pub fn new(kind: GeometryKind, omega_tight: f64) -> Result<Self> {
        if !omega_tight.is_finite() || omega_tight <= 0.0 {
            return Err(Error::domain(
                "omega_tight",
                format!("must be > 0, got {omega_tight}"),
            ));
        }
        Ok(Self {
            kind,
            omega_tight,
            char_length: omega_tight.powf(-0.5),
        })
    }

    pub fn cigar() -> Self {
        Self {
            kind: GeometryKind::Cigar,
            omega_tight: 1.0,
            char_length: 1.0,
        }
    }

    pub fn disk() -> Self {
        Self {
            kind: GeometryKind::Disk,
            omega_tight: 1.0,
            char_length: 1.0,
        }
    }

    pub fn unit(kind: GeometryKind) -> Self {
        match kind {
            GeometryKind::Cigar => Self::cigar(),
            GeometryKind::Disk => Self::disk(),
        }
    }
}

/// Where on the crossover the gas sits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Regime {
    Bcs,
    /// `nu = a_s N`, in units of the harmonic length.
    Bec {
        nu: f64,
    },
    Custom {
        gamma: f64,
        alpha: f64,
    },
}

pub fn regime_params(regime: Regime, lambda_qp: f64) -> Result<PolytropeParams> {
    match regime {
        Regime::Bcs => {
            PolytropeParams::new(5.0 / 3.0, 0.3 * (3.0 * PI * PI).powf(2.0 / 3.0), lambda_qp)
        }
        Regime::Bec { nu } => {
            if !nu.is_finite() || nu <= 0.0 {
                return Err(Error::domain("nu", format!("must be > 0, got {nu}")));
            }
            PolytropeParams::new(2.0, 4.0 * PI * nu, lambda_qp)
        }
        Regime::Custom { gamma, alpha } => PolytropeParams::new(gamma, alpha, lambda_qp),
    }
}

/// Bulk energy per particle `(alpha/gamma) n^(gamma-1)` at 3D density `n3d`.
pub fn energy_per_particle(params: &PolytropeParams, n3d: f64) -> f64 {
    params.alpha / params.gamma * n3d.powf(params.gamma - 1.0)
}

/// Chemical potential of the cigar reduction, `(alpha/gamma)(n1/(pi sigma^2))^(gamma-1)`.
pub fn chemical_potential_cigar(params: &PolytropeParams, n1: f64, sigma: f64) -> Result<f64> {
    check_positive("sigma", sigma)?;
    check_density(n1)?;
    Ok(params.alpha / params.gamma * (n1 / (PI * sigma * sigma)).powf(params.gamma - 1.0))
}

/// Chemical potential of the disk reduction, `(alpha/sqrt(gamma))(n1/(sqrt(pi) eta))^(gamma-1)`.
pub fn chemical_potential_disk(params: &PolytropeParams, n1: f64, eta: f64) -> Result<f64> {
    check_positive("eta", eta)?;
    check_density(n1)?;
    Ok(params.alpha / params.gamma.sqrt() * (n1 / (PI.sqrt() * eta)).powf(params.gamma - 1.0))
}

/// `a_s = a_bg (1 - delta / (B - B0))`. Negative results are returned as-is.
pub fn feshbach_scattering_length(a_bg: f64, delta: f64, b0: f64, b: f64) -> Result<f64> {
    if b == b0 {
        return Err(Error::Resonance { b0 });
    }
    Ok(a_bg * (1.0 - delta / (b - b0)))
}

/// Fermi wave number and velocity, `k_F = (3 pi^2 n)^(1/3)` and `v_F = k_F`.
pub fn fermi_scales(n3d: f64) -> Result<(f64, f64)> {
    if !(n3d > 0.0) || !n3d.is_finite() {
        return Err(Error::domain("n3d", format!("must be > 0, got {n3d}")));
    }
    let k_f = (3.0 * PI * PI * n3d).cbrt();
    Ok((k_f, k_f))
}

pub(crate) fn check_positive(name: &'static str, x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(name, format!("must be > 0, got {x}")))
    }
}

pub(crate) fn check_density(n: f64) -> Result<()> {
    if n >= 0.0 && n.is_finite() {
        Ok(())
    } else {
        Err(Error::domain("density", format!("must be >= 0, got {n}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1.0)
    }

    #[test]
    fn regime_coefficients() {
        let bcs = regime_params(Regime::Bcs, 1.0).unwrap();
        assert_eq!(bcs.gamma, 5.0 / 3.0);
        assert!(close(bcs.alpha, 2.871_234_000_188_192, 1e-14));

        let bec = regime_params(Regime::Bec { nu: 1.0 }, 1.0).unwrap();
        assert_eq!(bec.gamma, 2.0);
        assert!(close(bec.alpha, 12.566_370_614_359_172, 1e-15));

        let custom = regime_params(
            Regime::Custom {
                gamma: 1.8,
                alpha: 1.0,
            },
            0.0,
        )
        .unwrap();
        assert_eq!(
            custom,
            PolytropeParams {
                gamma: 1.8,
                alpha: 1.0,
                lambda_qp: 0.0
            }
        );
    }

    #[test]
    fn regime_rejects_bad_input() {
        assert!(matches!(
            regime_params(Regime::Bec { nu: 0.0 }, 1.0),
            Err(Error::Domain { name: "nu", .. })
        ));
        assert!(matches!(
            regime_params(Regime::Bec { nu: -2.0 }, 1.0),
            Err(Error::Domain { name: "nu", .. })
        ));
        assert!(matches!(
            regime_params(
                Regime::Custom {
                    gamma: 1.0,
                    alpha: 1.0
                },
                1.0
            ),
            Err(Error::Domain { name: "gamma", .. })
        ));
        assert!(regime_params(Regime::Bcs, -1.0).is_err());
    }

    #[test]
    fn energy_values() {
        let bec = regime_params(Regime::Bec { nu: 1.0 }, 1.0).unwrap();
        assert!(close(energy_per_particle(&bec, 1.0), 2.0 * PI, 1e-15));
        assert_eq!(energy_per_particle(&bec, 0.0), 0.0);
        let bcs = regime_params(Regime::Bcs, 1.0).unwrap();
        assert!(close(
            energy_per_particle(&bcs, 1.0),
            1.722_740_400_112_915,
            1e-14
        ));
        assert_eq!(energy_per_particle(&bcs, 0.0), 0.0);
    }

    #[test]
    fn cigar_chemical_potential() {
        let bec = regime_params(Regime::Bec { nu: 1.0 }, 1.0).unwrap();
        assert!(close(
            chemical_potential_cigar(&bec, 1.0, 1.0).unwrap(),
            2.0,
            1e-15
        ));
        assert!(close(
            chemical_potential_cigar(&bec, 1.0, 2f64.sqrt()).unwrap(),
            1.0,
            1e-15
        ));
        assert_eq!(chemical_potential_cigar(&bec, 0.0, 1.0).unwrap(), 0.0);
        assert!(chemical_potential_cigar(&bec, 1.0, 0.0).is_err());
        assert!(chemical_potential_cigar(&bec, 1.0, -1.0).is_err());
    }

    #[test]
    fn disk_chemical_potential() {
        let bec = regime_params(Regime::Bec { nu: 1.0 }, 1.0).unwrap();
        let mu1 = chemical_potential_disk(&bec, 1.0, 1.0).unwrap();
        assert!(close(mu1, (8.0 * PI).sqrt(), 1e-15));
        assert!(close(mu1, 5.013_256_549_262_001, 1e-14));
        assert!(close(
            chemical_potential_disk(&bec, 2.0, 1.0).unwrap(),
            2.0 * mu1,
            1e-15
        ));
        assert_eq!(chemical_potential_disk(&bec, 0.0, 1.0).unwrap(), 0.0);
        assert!(chemical_potential_disk(&bec, 1.0, 0.0).is_err());
    }

    #[test]
    fn feshbach() {
        assert!(close(
            feshbach_scattering_length(1.0, 1.0, 0.0, 1e12).unwrap(),
            1.0,
            1e-11
        ));
        assert_eq!(feshbach_scattering_length(1.0, 1.0, 0.0, 1.0).unwrap(), 0.0);
        assert_eq!(
            feshbach_scattering_length(1.0, 1.0, 0.0, 0.0),
            Err(Error::Resonance { b0: 0.0 })
        );
        // BCS side comes back negative
        assert!(feshbach_scattering_length(1.0, 1.0, 0.0, 0.5).unwrap() < 0.0);
    }

    #[test]
    fn fermi() {
        let (k, v) = fermi_scales(1.0).unwrap();
        assert!(close(k, 3.093_667_726_280_136, 1e-14));
        assert_eq!(k, v);
        assert!(close(
            fermi_scales(1.0 / (3.0 * PI * PI)).unwrap().0,
            1.0,
            1e-15
        ));
        assert!(close(
            fermi_scales(8.0 / (3.0 * PI * PI)).unwrap().0,
            2.0,
            1e-15
        ));
        assert!(fermi_scales(0.0).is_err());
        assert!(fermi_scales(-1.0).is_err());
    }

    #[test]
    fn geometry_lengths() {
        let g = TrapGeometry::new(GeometryKind::Cigar, 4.0).unwrap();
        assert!((g.char_length - 0.5).abs() < 1e-12);
        for omega in [0.3, 1.0, 7.5, 1e3] {
            let g = TrapGeometry::new(GeometryKind::Disk, omega).unwrap();
            assert!((g.char_length - omega.powf(-0.5)).abs() < 1e-12);
        }
        assert!(TrapGeometry::new(GeometryKind::Disk, 0.0).is_err());
    }

    proptest! {
        #[test]
        fn chemical_potentials_are_homogeneous(
            gamma in 1.05f64..3.0,
            alpha in 0.1f64..20.0,
            n in 1e-3f64..1e3,
            c in 1e-2f64..1e2,
            width in 0.2f64..5.0,
        ) {
            let p = PolytropeParams::new(gamma, alpha, 1.0).unwrap();
            let scale = c.powf(gamma - 1.0);
            let e = energy_per_particle(&p, c * n);
            prop_assert!((e - scale * energy_per_particle(&p, n)).abs() <= 1e-12 * e);
            let m = chemical_potential_cigar(&p, c * n, width).unwrap();
            prop_assert!((m - scale * chemical_potential_cigar(&p, n, width).unwrap()).abs() <= 1e-12 * m);
            let d = chemical_potential_disk(&p, c * n, width).unwrap();
            prop_assert!((d - scale * chemical_potential_disk(&p, n, width).unwrap()).abs() <= 1e-12 * d);
        }

        #[test]
        fn reduced_potentials_use_effective_density(
            gamma in 1.05f64..3.0,
            alpha in 0.1f64..20.0,
            n in 0.0f64..1e3,
            width in 0.2f64..5.0,
        ) {
            let p = PolytropeParams::new(gamma, alpha, 1.0).unwrap();
            let cigar = chemical_potential_cigar(&p, n, width).unwrap();
            let bulk = energy_per_particle(&p, n / (PI * width * width));
            prop_assert!((cigar - bulk).abs() <= 1e-12 * bulk.max(1e-300));
            let disk = chemical_potential_disk(&p, n, width).unwrap();
            let x = n / (PI.sqrt() * width);
            let expected = alpha / gamma.sqrt() * x.powf(gamma - 1.0);
            prop_assert!((disk - expected).abs() <= 1e-12 * expected.max(1e-300));
        }

        #[test]
        fn feshbach_resonant_part_is_odd(
            a_bg in -5.0f64..5.0,
            delta in -3.0f64..3.0,
            b0 in -10.0f64..10.0,
            d in 1e-3f64..50.0,
        ) {
            let up = feshbach_scattering_length(a_bg, delta, b0, b0 + d).unwrap();
            let down = feshbach_scattering_length(a_bg, delta, b0, b0 - d).unwrap();
            let scale = (a_bg * delta / d).abs() + a_bg.abs() + 1.0;
            prop_assert!((up + down - 2.0 * a_bg).abs() <= 1e-12 * scale);
        }
    }
}
