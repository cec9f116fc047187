//! Radial functions on R^2 in logarithmic coordinates.
//!
//! A radial function `u(|x|)` is stored as `v(s) = u(e^{-s})` sampled on a
//! uniform grid in `s = -log r`. Between nodes `v` is taken piecewise
//! linear and beyond the grid it is extended by zero. With that convention
//!
//! ```text
//! ||u||_{L^2}^2      = 2 pi \int v(s)^2 e^{-2s} ds
//! ||grad u||_{L^2}^2 = 2 pi \int v'(s)^2 ds
//! ```
//!
//! and both integrals are evaluated exactly for the interpolant.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::quadrature::kronrod_panel;

/// Uniform grid in `s = -log r`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogGrid {
    s_min: f64,
    s_max: f64,
    n_points: usize,
    ds: f64,
}

impl LogGrid {
    pub fn new(s_min: f64, s_max: f64, n_points: usize) -> Result<Self> {
        if !(s_min.is_finite() && s_max.is_finite()) || s_min >= s_max {
            return Err(Error::InvalidArgument(format!(
                "log grid needs finite s_min < s_max, got [{s_min}, {s_max}]"
            )));
        }
        if n_points < 2 {
            return Err(Error::InvalidArgument("log grid needs at least 2 points".into()));
        }
        Ok(Self {
            s_min,
            s_max,
            n_points,
            ds: (s_max - s_min) / (n_points - 1) as f64,
        })
    }

    /// Grid with spacing `ds` starting at `s_min`; `s_max` is rounded up to
    /// the next node.
    pub fn with_spacing(s_min: f64, s_max: f64, ds: f64) -> Result<Self> {
        if !(ds > 0.0) || !ds.is_finite() {
            return Err(Error::InvalidArgument(format!("spacing must be positive, got {ds}")));
        }
        let cells = ((s_max - s_min) / ds - 1e-9).ceil().max(1.0) as usize;
        Self::new(s_min, s_min + cells as f64 * ds, cells + 1)
    }

    pub fn s_min(&self) -> f64 {
        self.s_min
    }

    pub fn s_max(&self) -> f64 {
        self.s_max
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn ds(&self) -> f64 {
        self.ds
    }

    pub fn node(&self, i: usize) -> f64 {
        if i + 1 == self.n_points {
            self.s_max
        } else {
            self.s_min + i as f64 * self.ds
        }
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n_points).map(|i| self.node(i))
    }

    /// Index of the node at `s`, if `s` is (to rounding) a grid node.
    pub fn index_of(&self, s: f64) -> Option<usize> {
        let x = (s - self.s_min) / self.ds;
        let k = x.round();
        if k >= 0.0 && (k as usize) < self.n_points && (x - k).abs() < 1e-9 {
            Some(k as usize)
        } else {
            None
        }
    }

    pub fn contains(&self, s: f64) -> bool {
        s >= self.s_min && s <= self.s_max
    }
}

/// Samples `v(s_i)` of a radial function on a [`LogGrid`].
#[derive(Debug, Clone, PartialEq)]
pub struct RadialFunction {
    grid: LogGrid,
    values: Vec<f64>,
}

impl RadialFunction {
    pub fn new(grid: LogGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.n_points() {
            return Err(Error::InvalidArgument(format!(
                "expected {} samples, got {}",
                grid.n_points(),
                values.len()
            )));
        }
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::Sampling {
                index,
                s: grid.node(index),
            });
        }
        Ok(Self { grid, values })
    }

    pub fn zeros(grid: LogGrid) -> Self {
        Self {
            values: vec![0.0; grid.n_points()],
            grid,
        }
    }

    /// Samples a function given directly in the logarithmic variable.
    pub fn from_log_fn<F: Fn(f64) -> f64>(grid: LogGrid, v: F) -> Result<Self> {
        let values = grid.nodes().map(v).collect();
        Self::new(grid, values)
    }

    pub fn grid(&self) -> &LogGrid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0.0)
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Piecewise-linear value at `s`, zero outside the grid.
    pub fn value_at(&self, s: f64) -> f64 {
        if !self.grid.contains(s) {
            return 0.0;
        }
        let x = (s - self.grid.s_min) / self.grid.ds;
        let k = x.round();
        if (x - k).abs() < 1e-9 {
            return self.values[(k as usize).min(self.values.len() - 1)];
        }
        let i = (x.floor() as usize).min(self.values.len() - 2);
        let t = x - i as f64;
        self.values[i] + t * (self.values[i + 1] - self.values[i])
    }

    /// Value of `u` at radius `r`.
    pub fn radial_value(&self, r: f64) -> f64 {
        self.value_at(-r.ln())
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self {
            grid: self.grid,
            values: self.values.iter().map(|v| c * v).collect(),
        }
    }

    pub fn map<F: Fn(f64) -> f64>(&self, f: F) -> Result<Self> {
        Self::new(self.grid, self.values.iter().map(|&v| f(v)).collect())
    }

    fn zip_with(&self, other: &Self, op: impl Fn(f64, f64) -> f64) -> Result<Self> {
        if self.grid != other.grid {
            return Err(Error::InvalidArgument(
                "radial functions live on different grids".into(),
            ));
        }
        Self::new(
            self.grid,
            self.values.iter().zip(&other.values).map(|(&a, &b)| op(a, b)).collect(),
        )
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }
}

/// `||u||_{L^2}`, `||grad u||_{L^2}` and `||u||_{H^1}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormReport {
    pub l2: f64,
    pub grad_l2: f64,
    pub h1: f64,
}

/// L^2 mass of `u` outside a ball.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailMass {
    pub value: f64,
    /// The cut `-log R` lies left of the grid, so nothing was integrated.
    pub truncated: bool,
}

/// Result of [`resample`].
#[derive(Debug, Clone, PartialEq)]
pub struct Resampled {
    pub function: RadialFunction,
    /// Some target nodes fell outside the source grid and were set to zero.
    pub extrapolated: bool,
}

/// Samples `v(s_i) = u(e^{-s_i})`.
pub fn sample_from_closure<U: Fn(f64) -> f64>(u: U, grid: &LogGrid) -> Result<RadialFunction> {
    let mut values = Vec::with_capacity(grid.n_points());
    for (index, s) in grid.nodes().enumerate() {
        let v = u((-s).exp());
        if !v.is_finite() {
            return Err(Error::Sampling { index, s });
        }
        values.push(v);
    }
    RadialFunction::new(*grid, values)
}

/// `m_k = \int_0^h t^k e^{-2t} dt` for k = 0, 1, 2.
fn exp_moments(h: f64) -> [f64; 3] {
    if 2.0 * h < 0.5 {
        // alternating series, 40 terms is far below rounding for 2h < 1/2
        let mut m = [0.0; 3];
        let mut term = 1.0; // (-2)^j h^j / j!
        for j in 0..40 {
            for (k, mk) in m.iter_mut().enumerate() {
                *mk += term * h.powi(k as i32 + 1) / (k + j + 1) as f64;
            }
            term *= -2.0 * h / (j + 1) as f64;
        }
        m
    } else {
        let e = (-2.0 * h).exp();
        [
            0.5 * (1.0 - e),
            0.25 * (1.0 - e * (1.0 + 2.0 * h)),
            0.25 * (1.0 - e * (1.0 + 2.0 * h + 2.0 * h * h)),
        ]
    }
}

/// `\int_{s0}^{s0+h} (a + b t)^2 e^{-2(s0+t)} dt`.
fn linear_square_weighted(a: f64, b: f64, s0: f64, h: f64) -> f64 {
    let m = exp_moments(h);
    (-2.0 * s0).exp() * (a * a * m[0] + 2.0 * a * b * m[1] + b * b * m[2])
}

fn weighted_square_integral(f: &RadialFunction, s_end: f64) -> f64 {
    let g = f.grid();
    let v = f.values();
    let mut acc = 0.0;
    for i in 0..g.n_points() - 1 {
        let s0 = g.node(i);
        if s0 >= s_end {
            break;
        }
        let h_full = g.node(i + 1) - s0;
        let b = (v[i + 1] - v[i]) / h_full;
        let h = h_full.min(s_end - s0);
        if v[i] == 0.0 && b == 0.0 {
            continue;
        }
        acc += linear_square_weighted(v[i], b, s0, h);
    }
    acc
}

/// `||u||_{L^2} = sqrt(2 pi \int v^2 e^{-2s} ds)`.
pub fn l2_norm(f: &RadialFunction) -> f64 {
    (2.0 * PI * weighted_square_integral(f, f64::INFINITY)).sqrt()
}

/// `||grad u||_{L^2} = sqrt(2 pi \int v'^2 ds)` with `v'` the cell slope of
/// the interpolant.
pub fn grad_l2_norm(f: &RadialFunction) -> f64 {
    let ds = f.grid().ds();
    let sum: f64 = f.values().windows(2).map(|w| (w[1] - w[0]).powi(2)).sum();
    (2.0 * PI * sum / ds).sqrt()
}

pub fn norms(f: &RadialFunction) -> NormReport {
    let l2 = l2_norm(f);
    let grad_l2 = grad_l2_norm(f);
    NormReport {
        l2,
        grad_l2,
        h1: (l2 * l2 + grad_l2 * grad_l2).sqrt(),
    }
}

/// `||u||_{L^2(|x| > R)}`, i.e. the part of the grid with `s < -log R`.
pub fn tail_l2_mass(f: &RadialFunction, radius: f64) -> Result<TailMass> {
    if !(radius > 0.0) {
        return Err(Error::InvalidArgument(format!("radius must be positive, got {radius}")));
    }
    let cut = -radius.ln();
    if cut <= f.grid().s_min() {
        return Ok(TailMass {
            value: 0.0,
            truncated: true,
        });
    }
    Ok(TailMass {
        value: (2.0 * PI * weighted_square_integral(f, cut)).sqrt(),
        truncated: false,
    })
}

/// `(2 pi \int |v|^p e^{-2s} ds)^{1/p}`, one Kronrod panel per cell.
pub fn lp_norm(f: &RadialFunction, p: f64) -> f64 {
    let g = f.grid();
    let v = f.values();
    let mut acc = 0.0;
    for i in 0..g.n_points() - 1 {
        if v[i] == 0.0 && v[i + 1] == 0.0 {
            continue;
        }
        let (s0, s1) = (g.node(i), g.node(i + 1));
        let (a, b) = (v[i], (v[i + 1] - v[i]) / (s1 - s0));
        let integrand = |s: f64| (a + b * (s - s0)).abs().powf(p) * (-2.0 * s).exp();
        acc += kronrod_panel(&integrand, s0, s1).0;
    }
    (2.0 * PI * acc).powf(1.0 / p)
}

/// Linear interpolation onto `grid`; nodes outside the source domain get 0.
pub fn resample(f: &RadialFunction, grid: &LogGrid) -> Resampled {
    let mut extrapolated = false;
    let values = grid
        .nodes()
        .map(|s| {
            if f.grid().contains(s) {
                f.value_at(s)
            } else {
                extrapolated = true;
                0.0
            }
        })
        .collect();
    Resampled {
        function: RadialFunction { grid: *grid, values },
        extrapolated,
    }
}
