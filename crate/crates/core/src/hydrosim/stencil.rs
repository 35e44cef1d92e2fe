//! Fourth-order central differences on a uniform periodic grid.

#[inline]
fn wrap(i: isize, n: usize) -> usize {
    i.rem_euclid(n as isize) as usize
}

/// First derivative, 5-point stencil.
pub fn d1(f: &[f64], h: f64, out: &mut [f64]) {
    let n = f.len();
    let s = 1.0 / (12.0 * h);
    for i in 0..n {
        let at = |o: isize| f[wrap(i as isize + o, n)];
        out[i] = s * (-at(2) + 8.0 * at(1) - 8.0 * at(-1) + at(-2));
    }
}

/// Second derivative, 5-point stencil.
pub fn d2(f: &[f64], h: f64, out: &mut [f64]) {
    let n = f.len();
    let s = 1.0 / (12.0 * h * h);
    for i in 0..n {
        let at = |o: isize| f[wrap(i as isize + o, n)];
        out[i] = s * (-at(2) + 16.0 * at(1) - 30.0 * at(0) + 16.0 * at(-1) - at(-2));
    }
}

/// Third derivative, 7-point stencil.
pub fn d3(f: &[f64], h: f64, out: &mut [f64]) {
    let n = f.len();
    let s = 1.0 / (8.0 * h * h * h);
    for i in 0..n {
        let at = |o: isize| f[wrap(i as isize + o, n)];
        out[i] = s * (-at(3) + 8.0 * at(2) - 13.0 * at(1) + 13.0 * at(-1) - 8.0 * at(-2) + at(-3));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn max_error(points: usize, order: usize) -> f64 {
        let h = 2.0 * PI / points as f64;
        let z: Vec<f64> = (0..points).map(|i| i as f64 * h).collect();
        let f: Vec<f64> = z.iter().map(|z| (z.sin()).exp()).collect();
        let mut out = vec![0.0; points];
        let exact: Vec<f64> = z
            .iter()
            .map(|&z| {
                let (s, c) = z.sin_cos();
                let e = s.exp();
                match order {
                    1 => c * e,
                    2 => (c * c - s) * e,
                    _ => (c * c * c - 3.0 * s * c - c) * e,
                }
            })
            .collect();
        match order {
            1 => d1(&f, h, &mut out),
            2 => d2(&f, h, &mut out),
            _ => d3(&f, h, &mut out),
        }
        out.iter()
            .zip(&exact)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    #[test]
    fn fourth_order_convergence() {
        for order in 1..=3 {
            let coarse = max_error(64, order);
            let fine = max_error(128, order);
            let rate = (coarse / fine).log2();
            assert!((rate - 4.0).abs() < 0.3, "order {order}: rate {rate}");
        }
    }

    #[test]
    fn exact_on_low_degree_periodic_modes() {
        // cos(z) on 32 points: stencils have a known symbol, so check against it
        let n = 32;
        let h = 2.0 * PI / n as f64;
        let f: Vec<f64> = (0..n).map(|i| (i as f64 * h).cos()).collect();
        let mut out = vec![0.0; n];
        d1(&f, h, &mut out);
        let symbol = (8.0 * h.sin() - (2.0 * h).sin()) / (6.0 * h);
        for (i, v) in out.iter().enumerate() {
            assert!((v + symbol * (i as f64 * h).sin()).abs() < 1e-13);
        }
    }
}
