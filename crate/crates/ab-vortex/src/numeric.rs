//! Small numeric kernels: a bracketing root finder and composite Simpson.

use crate::error::{AbError, Result};

/// Stop bisection once |f(mid)| falls below this.
const F_TOL: f64 = 1e-12;
/// Safety cap; 200 halvings shrink any f64 bracket to a point.
const MAX_ITER: usize = 200;

/// Bracketing bisection refined by one secant step.
///
/// Requires a sign change of `f` over `[lo, hi]`. Bisects until
/// |f(mid)| <= 1e-12 or the bracket collapses, then takes a single secant
/// step from the final bracket endpoints and keeps whichever candidate has
/// the smaller residual.
pub fn bisect_root<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64) -> Result<f64> {
    if !lo.is_finite() || !hi.is_finite() || lo >= hi {
        return Err(AbError::BadBracket { lo, hi });
    }
    let mut a = lo;
    let mut b = hi;
    let mut fa = f(a);
    let mut fb = f(b);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(AbError::NoRoot { lo, hi });
    }

    let mut mid = 0.5 * (a + b);
    for _ in 0..MAX_ITER {
        mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break; // bracket exhausted at f64 resolution
        }
        let fm = f(mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == fa.signum() {
            a = mid;
            fa = fm;
        } else {
            b = mid;
            fb = fm;
        }
        if fm.abs() <= F_TOL {
            break;
        }
    }

    // one secant step across the final bracket
    let denom = fb - fa;
    if denom != 0.0 {
        let secant = a - fa * (b - a) / denom;
        if secant.is_finite() && secant > lo && secant < hi {
            let fs = f(secant);
            let fm = f(mid);
            if fs.abs() < fm.abs() {
                return Ok(secant);
            }
        }
    }
    Ok(mid)
}

/// Composite Simpson over tabulated values on a uniform grid of spacing `h`.
///
/// `values.len()` must be odd (an even number of intervals).
pub fn simpson_uniform(values: &[f64], h: f64) -> f64 {
    assert!(
        values.len() >= 3 && values.len() % 2 == 1,
        "simpson_uniform needs an odd number of nodes >= 3"
    );
    let n = values.len() - 1;
    let mut acc = values[0] + values[n];
    for (j, v) in values.iter().enumerate().take(n).skip(1) {
        acc += if j % 2 == 1 { 4.0 * v } else { 2.0 * v };
    }
    acc * h / 3.0
}

/// Composite Simpson of a function over [a, b] with `intervals` subintervals
/// (rounded up to even).
pub fn simpson_fn<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, intervals: usize) -> f64 {
    let n = if intervals.is_multiple_of(2) {
        intervals.max(2)
    } else {
        intervals + 1
    };
    let h = (b - a) / n as f64;
    let values: Vec<f64> = (0..=n).map(|j| f(a + j as f64 * h)).collect();
    simpson_uniform(&values, h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn bisect_finds_sqrt_two() {
        let root = bisect_root(|x| x * x - 2.0, 0.0, 2.0).unwrap();
        assert!((root - 2.0_f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn bisect_rejects_bracket_without_sign_change() {
        assert!(matches!(
            bisect_root(|x| x * x + 1.0, -1.0, 1.0),
            Err(AbError::NoRoot { .. })
        ));
    }

    #[test]
    fn bisect_accepts_root_at_endpoint() {
        assert_eq!(bisect_root(|x| x, 0.0, 1.0).unwrap(), 0.0);
    }

    #[test]
    fn simpson_integrates_sine() {
        let integral = simpson_fn(f64::sin, 0.0, PI, 256);
        assert!((integral - 2.0).abs() < 1e-8, "got {integral}");
    }

    #[test]
    fn simpson_is_fourth_order() {
        let exact = 1.0 - (-1.0_f64).exp();
        let coarse = (simpson_fn(|x| (-x).exp(), 0.0, 1.0, 16) - exact).abs();
        let fine = (simpson_fn(|x| (-x).exp(), 0.0, 1.0, 32) - exact).abs();
        // halving h should shrink the error by about 16
        assert!(fine * 10.0 < coarse, "coarse={coarse:e} fine={fine:e}");
    }
}
