//! Numerical quadrature: tanh-sinh (double-exponential) rules for real
//! integrands with endpoint singularities, and adaptive Simpson for the
//! complex oscillatory integrals.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Integrate f over [a, b] with the tanh-sinh rule, doubling the node
/// density until successive levels agree to `rel_tol`.
///
/// Handles integrable endpoint singularities; the integrand is never
/// evaluated at the endpoints themselves.
pub fn tanh_sinh<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    rel_tol: f64,
    max_level: u32,
) -> Result<(f64, f64)> {
    if a == b {
        return Ok((0.0, 0.0));
    }
    let r = 0.5 * (b - a);
    let half_pi = std::f64::consts::FRAC_PI_2;
    // node transform x = tanh(pi/2 sinh t), evaluated as a distance from
    // the nearer endpoint (1 - tanh s = 2/(e^(2s) + 1)) so that nodes keep
    // full resolution next to an endpoint singularity
    let g = |t: f64| -> f64 {
        let s = half_pi * t.sinh();
        if s.abs() > 350.0 {
            return 0.0;
        }
        let q = 2.0 / ((2.0 * s.abs()).exp() + 1.0); // 1 - |tanh s|
        let w = half_pi * t.cosh() / s.cosh().powi(2);
        let y = if t >= 0.0 { b - r * q } else { a + r * q };
        // arguments that round onto an endpoint are skipped
        if y <= a.min(b) || y >= a.max(b) {
            return 0.0;
        }
        f(y) * w * r
    };
    let t_max = 6.2f64;
    let mut h = 1.0f64;
    let mut sum = g(0.0);
    let mut k = 1;
    while (k as f64) * h <= t_max {
        sum += g(k as f64 * h) + g(-(k as f64) * h);
        k += 1;
    }
    let mut value = h * sum;
    let mut achieved = f64::INFINITY;
    for _level in 1..=max_level {
        h *= 0.5;
        let mut odd_sum = 0.0;
        let mut k = 1;
        while (k as f64) * h <= t_max {
            odd_sum += g(k as f64 * h) + g(-(k as f64) * h);
            k += 2;
        }
        let prev = value;
        value = 0.5 * value + h * odd_sum;
        let err = (value - prev).abs();
        let scale = value.abs().max(1e-300);
        achieved = err / scale;
        if err <= rel_tol * scale {
            return Ok((value, achieved));
        }
    }
    Err(Error::Tolerance {
        requested: rel_tol,
        achieved,
        msg: format!("tanh-sinh did not converge on [{a}, {b}]; estimate {value}"),
    })
}

fn simpson(f0: Complex64, fm: Complex64, f1: Complex64, h: f64) -> Complex64 {
    (f0 + 4.0 * fm + f1) * (h / 6.0)
}

#[allow(clippy::too_many_arguments)]
fn simpson_rec<F: Fn(f64) -> Complex64>(
    f: &F,
    a: f64,
    b: f64,
    fa: Complex64,
    fm: Complex64,
    fb: Complex64,
    whole: Complex64,
    tol: f64,
    depth: u32,
) -> Result<Complex64> {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson(fa, flm, fm, m - a);
    let right = simpson(fm, frm, fb, b - m);
    let delta = left + right - whole;
    if delta.norm() <= 15.0 * tol {
        return Ok(left + right + delta / 15.0);
    }
    if depth == 0 {
        return Err(Error::Tolerance {
            requested: tol,
            achieved: delta.norm() / 15.0,
            msg: format!("adaptive Simpson depth exhausted on [{a}, {b}]"),
        });
    }
    let lv = simpson_rec(f, a, m, fa, flm, fm, left, tol * 0.5, depth - 1)?;
    let rv = simpson_rec(f, m, b, fm, frm, fb, right, tol * 0.5, depth - 1)?;
    Ok(lv + rv)
}

/// Adaptive Simpson quadrature for a complex integrand, with an absolute
/// tolerance on each panel and a depth cap.
pub fn adaptive_simpson_complex<F: Fn(f64) -> Complex64>(
    f: &F,
    a: f64,
    b: f64,
    tol_abs: f64,
    max_depth: u32,
) -> Result<Complex64> {
    if a == b {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let m = 0.5 * (a + b);
    let fa = f(a);
    let fm = f(m);
    let fb = f(b);
    let whole = simpson(fa, fm, fb, b - a);
    simpson_rec(f, a, b, fa, fm, fb, whole, tol_abs, max_depth)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tanh_sinh_polynomial() {
        let (v, _) = tanh_sinh(|x| x * x, 0.0, 3.0, 1e-12, 12).unwrap();
        assert!((v - 9.0).abs() < 1e-10);
    }

    #[test]
    fn tanh_sinh_endpoint_singularity() {
        // int_0^1 x^(-1/2) dx = 2
        let (v, _) = tanh_sinh(|x| x.powf(-0.5), 0.0, 1.0, 1e-12, 12).unwrap();
        assert!((v - 2.0).abs() < 1e-9, "got {v}");
        // int_0^1 ln(1/x) dx = 1
        let (v, _) = tanh_sinh(|x| -x.ln(), 0.0, 1.0, 1e-12, 12).unwrap();
        assert!((v - 1.0).abs() < 1e-9);
    }

    #[test]
    fn simpson_oscillatory() {
        // int_0^1 e(5 x) dx = (e(5) - 1)/(2 pi i 5) = 0 for integer frequency
        let tau = std::f64::consts::TAU;
        let f = |x: f64| Complex64::new((tau * 5.0 * x).cos(), (tau * 5.0 * x).sin());
        let v = adaptive_simpson_complex(&f, 0.0, 1.0, 1e-12, 30).unwrap();
        assert!(v.norm() < 1e-9);
        // half frequency: int_0^1 e(x/2) dx = (e(1/2)-1)/(pi i) = 2i/pi * ... check value
        let g = |x: f64| Complex64::new((tau * 0.5 * x).cos(), (tau * 0.5 * x).sin());
        let v = adaptive_simpson_complex(&g, 0.0, 1.0, 1e-12, 30).unwrap();
        let expected = Complex64::new(0.0, 2.0 / std::f64::consts::PI);
        assert!((v - expected).norm() < 1e-9);
    }
}
