//! Bracketed scalar root finding.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Root {
    pub x: f64,
    pub residual: f64,
    pub iterations: usize,
}

/// Safeguarded Newton iteration on a sign-changing bracket `[lo, hi]`.
///
/// `f` returns the function value and its derivative. A Newton step that
/// leaves the current bracket (or is not finite) is replaced by bisection.
/// Stops when the step or the bracket shrinks below `tol * max(1, |x|)`.
pub fn newton_bisect<F>(f: F, mut lo: f64, mut hi: f64, tol: f64, max_iter: usize) -> Result<Root>
where
    F: Fn(f64) -> (f64, f64),
{
    let (f_lo, _) = f(lo);
    let (f_hi, _) = f(hi);
    if f_lo.is_nan() || f_hi.is_nan() {
        return Err(Error::ConvergenceFailure {
            iterations: 0,
            last: if f_lo.is_nan() { lo } else { hi },
        });
    }
    if f_lo == 0.0 {
        return Ok(Root {
            x: lo,
            residual: 0.0,
            iterations: 0,
        });
    }
    if f_hi == 0.0 {
        return Ok(Root {
            x: hi,
            residual: 0.0,
            iterations: 0,
        });
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::DegenerateInput(format!(
            "no sign change on [{lo}, {hi}] (f = {f_lo}, {f_hi})"
        )));
    }
    let rising = f_hi > 0.0;

    let mut x = 0.5 * (lo + hi);
    for iteration in 1..=max_iter {
        let (fx, dfx) = f(x);
        if fx.is_nan() {
            return Err(Error::ConvergenceFailure {
                iterations: iteration,
                last: x,
            });
        }
        if fx == 0.0 {
            return Ok(Root {
                x,
                residual: 0.0,
                iterations: iteration,
            });
        }
        if (fx > 0.0) == rising {
            hi = x;
        } else {
            lo = x;
        }

        let newton = x - fx / dfx;
        let next = if newton.is_finite() && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };

        let scale = tol * x.abs().max(1.0);
        if (next - x).abs() <= scale || hi - lo <= scale {
            let (residual, _) = f(next);
            if !residual.is_finite() {
                return Err(Error::ConvergenceFailure {
                    iterations: iteration,
                    last: next,
                });
            }
            return Ok(Root {
                x: next,
                residual,
                iterations: iteration,
            });
        }
        x = next;
    }
    Err(Error::ConvergenceFailure {
        iterations: max_iter,
        last: x,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_sqrt_two() {
        let root = newton_bisect(|x| (x * x - 2.0, 2.0 * x), 0.0, 2.0, 1e-15, 100).unwrap();
        assert!((root.x - 2f64.sqrt()).abs() < 1e-15);
        assert!(root.iterations < 10);
    }

    #[test]
    fn falls_back_to_bisection_on_flat_derivative() {
        // derivative deliberately useless
        let root = newton_bisect(|x| (x - 0.3, 0.0), 0.0, 1.0, 1e-14, 200).unwrap();
        assert!((root.x - 0.3).abs() < 1e-13);
    }

    #[test]
    fn decreasing_function() {
        let root =
            newton_bisect(|x| (1.0 - x * x * x, -3.0 * x * x), 0.0, 4.0, 1e-15, 100).unwrap();
        assert!((root.x - 1.0).abs() < 1e-15);
    }

    #[test]
    fn endpoint_root() {
        let root = newton_bisect(|x| (x - 1.0, 1.0), 1.0, 3.0, 1e-14, 10).unwrap();
        assert_eq!(root.x, 1.0);
        assert_eq!(root.iterations, 0);
    }

    #[test]
    fn rejects_missing_bracket() {
        assert!(matches!(
            newton_bisect(|x| (x * x + 1.0, 2.0 * x), -1.0, 1.0, 1e-14, 10),
            Err(Error::DegenerateInput(_))
        ));
    }

    #[test]
    fn reports_iteration_cap() {
        assert!(matches!(
            newton_bisect(|x| (x - 0.123_456_789, 0.0), 0.0, 1.0, 1e-15, 5),
            Err(Error::ConvergenceFailure { iterations: 5, .. })
        ));
    }

    #[test]
    fn nan_residual_is_a_failure() {
        let f = |x: f64| (if x > 0.7 { f64::NAN } else { x - 0.8 }, 1.0);
        assert!(matches!(
            newton_bisect(f, 0.0, 0.9, 1e-14, 50),
            Err(Error::ConvergenceFailure { .. })
        ));
    }
}
