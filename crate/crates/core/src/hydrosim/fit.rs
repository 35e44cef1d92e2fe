//! Frequency and speed extraction from probe time series.

use nalgebra::{Matrix3, Vector3};

use super::ProbeSeries;
use crate::error::{Error, Result};

/// Minimum number of oscillation periods a series must span.
pub const MIN_PERIODS: f64 = 3.0;

/// Least-squares fit `x(t) ~ A cos(omega t + phi) + offset`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrequencyFit {
    pub omega: f64,
    pub amplitude: f64,
    pub phase: f64,
    pub offset: f64,
    pub rms_residual: f64,
}

/// Angular frequency of the real part of the recorded mode amplitude.
pub fn measure_mode_frequency(series: &ProbeSeries) -> Result<FrequencyFit> {
    let signal: Vec<f64> = series.mode_amplitude.iter().map(|c| c.re).collect();
    fit_frequency(&series.times, &signal)
}

/// Fits a single sinusoid plus offset to `(times, signal)`.
///
/// The starting guess comes from zero crossings of the mean-removed signal;
/// it is then refined by golden-section search on the least-squares residual
/// with amplitude, phase and offset eliminated linearly.
pub fn fit_frequency(times: &[f64], signal: &[f64]) -> Result<FrequencyFit> {
    if times.len() != signal.len() {
        return Err(Error::InsufficientData(
            "times and signal lengths differ".into(),
        ));
    }
    if times.len() < 8 {
        return Err(Error::InsufficientData(format!(
            "only {} samples",
            times.len()
        )));
    }
    let mean = signal.iter().sum::<f64>() / signal.len() as f64;
    let centred: Vec<f64> = signal.iter().map(|x| x - mean).collect();
    let scale = centred.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if !(scale > 1e-14 * mean.abs()) || scale == 0.0 {
        return Err(Error::InsufficientData("signal is constant".into()));
    }

    let crossings = zero_crossings(times, &centred, 0.25 * scale);
    if crossings.len() < 2 {
        return Err(Error::InsufficientData(format!(
            "{} zero crossings; need at least 2",
            crossings.len()
        )));
    }
    let span = crossings[crossings.len() - 1] - crossings[0];
    let guess = std::f64::consts::PI * (crossings.len() - 1) as f64 / span;
    let duration = times[times.len() - 1] - times[0];
    let periods = duration * guess / std::f64::consts::TAU;
    if periods < MIN_PERIODS {
        return Err(Error::InsufficientData(format!(
            "series spans {periods:.2} periods; need {MIN_PERIODS}"
        )));
    }

    let half_width = guess * (0.25 / periods).min(0.05);
    let omega = golden_min(
        |w| project(times, signal, w).map_or(f64::INFINITY, |p| p.1),
        guess - half_width,
        guess + half_width,
        1e-13 * guess,
    );
    let (coef, ssr) = project(times, signal, omega)
        .ok_or_else(|| Error::InsufficientData("singular least-squares system".into()))?;
    Ok(FrequencyFit {
        omega,
        amplitude: coef.x.hypot(coef.y),
        phase: (-coef.y).atan2(coef.x),
        offset: coef.z,
        rms_residual: (ssr / signal.len() as f64).sqrt(),
    })
}

/// Slope of a straight-line fit to the recorded peak positions.
pub fn measure_pulse_speed(series: &ProbeSeries) -> Result<f64> {
    let (t, z) = (&series.times, &series.peak_position);
    if t.len() < 2 {
        return Err(Error::InsufficientData(
            "need at least two peak samples".into(),
        ));
    }
    if z.iter().any(|p| !p.is_finite()) {
        return Err(Error::InvalidWindow("peak position undefined".into()));
    }
    let rising = z.windows(2).all(|w| w[1] >= w[0]);
    let falling = z.windows(2).all(|w| w[1] <= w[0]);
    if !(rising || falling) {
        return Err(Error::InvalidWindow(
            "peak trajectory is not monotone (reflected or wrapped pulse)".into(),
        ));
    }
    let n = t.len() as f64;
    let t_mean = t.iter().sum::<f64>() / n;
    let z_mean = z.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (ti, zi) in t.iter().zip(z) {
        sxy += (ti - t_mean) * (zi - z_mean);
        sxx += (ti - t_mean) * (ti - t_mean);
    }
    if sxx == 0.0 {
        return Err(Error::InsufficientData(
            "all samples at the same time".into(),
        ));
    }
    Ok(sxy / sxx)
}

fn zero_crossings(times: &[f64], x: &[f64], hysteresis: f64) -> Vec<f64> {
    let mut out = Vec::new();
    let mut armed: Option<bool> = None;
    for i in 0..x.len() {
        if i > 0 {
            let (a, b) = (x[i - 1], x[i]);
            if let Some(positive) = armed {
                let crossed = if positive {
                    b <= 0.0 && a > 0.0
                } else {
                    b >= 0.0 && a < 0.0
                };
                if crossed {
                    let frac = if a == b { 0.0 } else { a / (a - b) };
                    out.push(times[i - 1] + frac * (times[i] - times[i - 1]));
                    armed = None;
                }
            }
        }
        if x[i].abs() > hysteresis {
            armed = Some(x[i] > 0.0);
        }
    }
    out
}

/// Coefficients of `a cos + b sin + c` and the residual sum of squares.
fn project(times: &[f64], signal: &[f64], omega: f64) -> Option<(Vector3<f64>, f64)> {
    let mut ata = Matrix3::zeros();
    let mut atb = Vector3::zeros();
    for (&t, &x) in times.iter().zip(signal) {
        let (s, c) = (omega * t).sin_cos();
        let row = Vector3::new(c, s, 1.0);
        ata += row * row.transpose();
        atb += row * x;
    }
    let coef = ata.lu().solve(&atb)?;
    let ssr = times
        .iter()
        .zip(signal)
        .map(|(&t, &x)| {
            let (s, c) = (omega * t).sin_cos();
            let r = x - coef.x * c - coef.y * s - coef.z;
            r * r
        })
        .sum();
    Some((coef, ssr))
}

fn golden_min<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let ratio = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - ratio * (b - a);
    let mut d = a + ratio * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while (b - a).abs() > tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - ratio * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + ratio * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}
