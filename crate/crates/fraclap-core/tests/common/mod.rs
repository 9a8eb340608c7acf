//! Shared oracles for the integration tests. Everything here evaluates the
//! continuum objects by independent quadrature, never through the library's
//! discretization paths.

#![allow(dead_code)]

use std::f64::consts::PI;

/// Adaptive Simpson with Richardson correction.
pub fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn simp(fa: f64, fm: f64, fb: f64, a: f64, b: f64) -> f64 {
        (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    }
    #[allow(clippy::too_many_arguments)]
    fn rec(
        f: &dyn Fn(f64) -> f64,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: usize,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = f(lm);
        let frm = f(rm);
        let left = simp(fa, flm, fm, a, m);
        let right = simp(fm, frm, fb, m, b);
        if depth == 0 || (left + right - whole).abs() < 15.0 * tol {
            return left + right + (left + right - whole) / 15.0;
        }
        rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
            + rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
    }
    let fa = f(a);
    let fb = f(b);
    let fm = f(0.5 * (a + b));
    rec(f, a, b, fa, fm, fb, simp(fa, fm, fb, a, b), tol, 48)
}

/// Piecewise adaptive integration over the given breakpoints.
pub fn integrate_pieces(f: &dyn Fn(f64) -> f64, pts: &[f64], tol: f64) -> f64 {
    pts.windows(2).map(|w| adaptive_simpson(f, w[0], w[1], tol)).sum()
}

/// `int_R (u(0) - u(y)) |y|^{-1-alpha} dy` for the unit Gaussian, by adaptive
/// quadrature: substitution `y = t^2` kills the origin singularity, the far
/// tail is an exact antiderivative.
pub fn gaussian_singular_integral_1d(alpha: f64) -> f64 {
    let near = |t: f64| -> f64 {
        if t < 1e-3 {
            // -expm1(-t^4/2) * 2 t^{-1-2a} expanded
            t.powf(3.0 - 2.0 * alpha) - 0.25 * t.powf(7.0 - 2.0 * alpha)
        } else {
            -(-t.powi(4) / 2.0).exp_m1() * 2.0 * t.powf(-1.0 - 2.0 * alpha)
        }
    };
    let mid = |y: f64| -> f64 { -(-y * y / 2.0).exp_m1() * y.powf(-1.0 - alpha) };
    let inner = adaptive_simpson(&near, 0.0, 1.0, 1e-13);
    let outer = integrate_pieces(&mid, &[1.0, 2.0, 5.0, 12.0, 40.0], 1e-13);
    let tail = 40f64.powf(-alpha) / alpha;
    2.0 * (inner + outer + tail)
}

/// Same in 2-D, radially reduced.
pub fn gaussian_singular_integral_2d(alpha: f64) -> f64 {
    let near = |t: f64| -> f64 {
        if t < 1e-3 {
            t.powf(3.0 - 2.0 * alpha) - 0.25 * t.powf(7.0 - 2.0 * alpha)
        } else {
            -(-t.powi(4) / 2.0).exp_m1() * 2.0 * t.powf(-1.0 - 2.0 * alpha)
        }
    };
    let mid = |r: f64| -> f64 { -(-r * r / 2.0).exp_m1() * r.powf(-1.0 - alpha) };
    let inner = adaptive_simpson(&near, 0.0, 1.0, 1e-13);
    let outer = integrate_pieces(&mid, &[1.0, 2.0, 5.0, 12.0, 40.0], 1e-13);
    let tail = 40f64.powf(-alpha) / alpha;
    2.0 * PI * (inner + outer + tail)
}

/// Fourier-side action `(-Delta)^{alpha/2} e^{-|x|^2/2}` at the origin, 1-D:
/// `(2 pi)^{-1/2} * 2 int_0^inf xi^alpha e^{-xi^2/2} dxi`, substitution
/// `xi = t^2` for a smooth integrand.
pub fn gaussian_fourier_value_1d(alpha: f64) -> f64 {
    let f = |t: f64| -> f64 { t.powf(2.0 * alpha + 1.0) * (-t.powi(4) / 2.0).exp() * 2.0 };
    let v = integrate_pieces(&f, &[0.0, 1.0, 2.0, 3.5], 1e-13);
    (2.0 * PI).powf(-0.5) * 2.0 * v
}

/// Fourier-side action at the origin, 2-D: `int_0^inf r^{alpha+1} e^{-r^2/2} dr`.
pub fn gaussian_fourier_value_2d(alpha: f64) -> f64 {
    let f = |r: f64| -> f64 { r.powf(alpha + 1.0) * (-r * r / 2.0).exp() };
    integrate_pieces(&f, &[0.0, 1.0, 3.0, 8.0, 12.0], 1e-13)
}

/// Smooth compactly supported bump on `(-width, width)`, height at the center.
pub fn bump(x: f64, width: f64, height: f64) -> f64 {
    let t = x / width;
    if t.abs() < 1.0 {
        height * (1.0 - 1.0 / (1.0 - t * t)).exp()
    } else {
        0.0
    }
}
