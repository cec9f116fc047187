//! Adaptive Gauss-Kronrod quadrature.
//!
//! A 7-point Gauss / 15-point Kronrod pair applied recursively. Used for
//! the closed-form integrals of the Lions family after the change of
//! variables that keeps the exponential integrands bounded, and cell by
//! cell for the Trudinger-Moser functional.

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];

// Gauss weights for the odd-indexed Kronrod nodes (1, 3, 5, 7).
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

const MAX_DEPTH: u32 = 48;

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quad {
    pub value: f64,
    pub error: f64,
}

/// One Kronrod panel: returns (K15 estimate, |K15 - G7|).
pub fn kronrod_panel<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = WGK[7] * fc;
    let mut g = WG[3] * fc;
    for j in 0..7 {
        let dx = h * XGK[j];
        let f1 = f(c - dx);
        let f2 = f(c + dx);
        k += WGK[j] * (f1 + f2);
        if j % 2 == 1 {
            g += WG[j / 2] * (f1 + f2);
        }
    }
    (k * h, ((k - g) * h).abs())
}

fn adapt<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, whole: (f64, f64), rel_tol: f64, abs_tol: f64, depth: u32) -> Quad {
    let (k, err) = whole;
    if err <= abs_tol.max(rel_tol * k.abs()) || depth >= MAX_DEPTH || b - a <= f64::EPSILON * a.abs().max(1.0) {
        return Quad { value: k, error: err };
    }
    let m = 0.5 * (a + b);
    let left = kronrod_panel(f, a, m);
    let right = kronrod_panel(f, m, b);
    let l = adapt(f, a, m, left, rel_tol, 0.5 * abs_tol, depth + 1);
    let r = adapt(f, m, b, right, rel_tol, 0.5 * abs_tol, depth + 1);
    Quad {
        value: l.value + r.value,
        error: l.error + r.error,
    }
}

/// Integrates `f` over `[a, b]` to `max(abs_tol, rel_tol * |I|)`.
///
/// The returned error is the sum of the local Kronrod estimates; it is not
/// checked against the tolerance here (see [`integrate_checked`]).
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, rel_tol: f64, abs_tol: f64) -> Quad {
    if a == b {
        return Quad { value: 0.0, error: 0.0 };
    }
    if b < a {
        let q = integrate(f, b, a, rel_tol, abs_tol);
        return Quad {
            value: -q.value,
            error: q.error,
        };
    }
    let whole = kronrod_panel(&f, a, b);
    adapt(&f, a, b, whole, rel_tol, abs_tol, 0)
}

/// Like [`integrate`] but splits at the given interior breakpoints (kinks or
/// jumps of the integrand) and fails when the final error estimate is larger
/// than a hundred times the requested tolerance.
pub fn integrate_checked<F: Fn(f64) -> f64>(f: F, breakpoints: &[f64], rel_tol: f64, abs_tol: f64) -> Result<Quad> {
    if breakpoints.len() < 2 {
        return Err(Error::InvalidArgument("at least two breakpoints are required".into()));
    }
    let mut total = Quad { value: 0.0, error: 0.0 };
    let pieces = (breakpoints.len() - 1) as f64;
    for w in breakpoints.windows(2) {
        let q = integrate(&f, w[0], w[1], rel_tol, abs_tol / pieces);
        total.value += q.value;
        total.error += q.error;
    }
    let (a, b) = (breakpoints[0], breakpoints[breakpoints.len() - 1]);
    if !total.value.is_finite() || total.error > 100.0 * abs_tol.max(rel_tol * total.value.abs()) {
        return Err(Error::Quadrature {
            a,
            b,
            error: total.error,
        });
    }
    Ok(total)
}
