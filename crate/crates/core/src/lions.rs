//! Closed-form concentration families: the Lions functions `f_alpha`, their
//! rescalings, sums across scales, and profiles.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::radial::{LogGrid, RadialFunction};

/// Default node spacing for profiles; the built-in profiles have knots on
/// multiples of it.
pub const PROFILE_DT: f64 = 1.0 / 64.0;

/// The Lions function `f_alpha` as a closure of `r = |x|`.
///
/// `0` for `r >= 1`, `-log r / sqrt(2 alpha pi)` on `[e^{-alpha}, 1]` and
/// `sqrt(alpha / 2 pi)` inside `e^{-alpha}`.
pub fn lions_f(alpha: f64) -> impl Fn(f64) -> f64 + Copy + Send + Sync {
    let plateau = (alpha / (2.0 * PI)).sqrt();
    let slope = 1.0 / (2.0 * alpha * PI).sqrt();
    let inner = (-alpha).exp();
    move |r: f64| {
        if r >= 1.0 {
            0.0
        } else if r <= inner {
            plateau
        } else {
            -r.ln() * slope
        }
    }
}

/// `f_alpha` in the logarithmic variable: `v(s) = sqrt(alpha / 2 pi) L(s / alpha)`.
///
/// Prefer this to [`lions_f`] when `s` can exceed about 700, where
/// `r = e^{-s}` underflows.
pub fn lions_v(alpha: f64) -> impl Fn(f64) -> f64 + Copy + Send + Sync {
    let plateau = (alpha / (2.0 * PI)).sqrt();
    let slope = 1.0 / (2.0 * alpha * PI).sqrt();
    move |s: f64| {
        if s <= 0.0 {
            0.0
        } else if s >= alpha {
            plateau
        } else {
            s * slope
        }
    }
}

/// `||f_alpha||_{L^2}^2 = (1 - e^{-2 alpha}) / (4 alpha) - e^{-2 alpha} / 2`.
pub fn lions_l2_closed_form(alpha: f64) -> f64 {
    let e = (-2.0 * alpha).exp();
    // -expm1 keeps the small-alpha cancellation under control
    -(-2.0 * alpha).exp_m1() / (4.0 * alpha) - 0.5 * e
}

/// `g(x) = f_alpha(|x| / R)`.
pub fn scaled_g(alpha: f64, radius: f64) -> impl Fn(f64) -> f64 + Copy + Send + Sync {
    let f = lions_f(alpha);
    move |r: f64| f(r / radius)
}

/// `h_alpha = a f_alpha + b f_{alpha^2}`.
pub fn sum_h(a: f64, b: f64, alpha: f64) -> impl Fn(f64) -> f64 + Copy + Send + Sync {
    let f1 = lions_f(alpha);
    let f2 = lions_f(alpha * alpha);
    move |r: f64| a * f1(r) + b * f2(r)
}

/// Grid used for sweeps over the Lions family: `s in [-2, max(4 alpha_max, 50)]`
/// with spacing `ds`. Kinks of `f_alpha` are nodes whenever `alpha / ds` is an
/// integer.
pub fn family_grid(alpha_max: f64, ds: f64) -> Result<LogGrid> {
    LogGrid::with_spacing(-2.0, (4.0 * alpha_max).max(50.0), ds)
}

/// Grid on `[-2, s_max]` whose nodes include `0` and `alpha`, with spacing
/// at most `max_ds`.
pub fn aligned_grid(alpha: f64, s_max: f64, max_ds: f64) -> Result<LogGrid> {
    if !(alpha > 0.0) || !(max_ds > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "aligned grid needs alpha > 0 and ds > 0, got alpha = {alpha}, ds = {max_ds}"
        )));
    }
    let cells = (alpha / max_ds - 1e-9).ceil().max(1.0);
    let ds = alpha / cells;
    let left = (2.0 / ds - 1e-9).ceil();
    LogGrid::with_spacing(-left * ds, s_max.max(alpha + ds), ds)
}

/// Grid for the bubble `(alpha, psi)`: spacing divides `alpha * psi.dt()`, so
/// every profile knot lands on a node, and `s_max = alpha * t_max + tail`.
pub fn bubble_grid(alpha: f64, profile: &Profile, max_ds: f64, tail: f64) -> Result<LogGrid> {
    if !(alpha > 0.0) || !(max_ds > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "bubble grid needs alpha > 0 and ds > 0, got alpha = {alpha}, ds = {max_ds}"
        )));
    }
    let knot = alpha * profile.dt();
    let ds = knot / (knot / max_ds - 1e-9).ceil().max(1.0);
    let left = (2.0 / ds - 1e-9).ceil();
    LogGrid::with_spacing(-left * ds, alpha * profile.t_max() + tail.max(ds), ds)
}

/// A profile: a function on `t >= 0` with `psi(0) = 0`, extended by zero to
/// the left and by its last value to the right of `t_max`. Stored as samples
/// on a uniform grid and interpolated linearly.
#[derive(Debug, Clone, PartialEq)]
pub struct Profile {
    t_max: f64,
    values: Vec<f64>,
}

impl Profile {
    pub fn from_samples(t_max: f64, values: Vec<f64>) -> Result<Self> {
        if !(t_max > 0.0) || values.len() < 2 {
            return Err(Error::InvalidArgument(
                "profile needs t_max > 0 and at least two samples".into(),
            ));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("profile samples must be finite".into()));
        }
        if values[0] != 0.0 {
            return Err(Error::InvalidArgument(format!(
                "profiles vanish at t = 0, got psi(0) = {}",
                values[0]
            )));
        }
        Ok(Self { t_max, values })
    }

    /// Samples `psi` on `[0, t_max]` with `n` points; `psi(0)` must be zero.
    pub fn from_fn<F: Fn(f64) -> f64>(psi: F, t_max: f64, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidArgument("profile needs at least two samples".into()));
        }
        let dt = t_max / (n - 1) as f64;
        Self::from_samples(t_max, (0..n).map(|k| psi(k as f64 * dt)).collect())
    }

    pub fn zero(t_max: f64, n: usize) -> Self {
        Self {
            t_max,
            values: vec![0.0; n.max(2)],
        }
    }

    /// The profile `L`: `t` on `[0, 1]`, `1` afterwards.
    pub fn lions() -> Self {
        Self::lions_shifted(0.0).expect("unshifted L is a valid profile")
    }

    /// `L_a(t) = L(t + a)` for `a <= 0`.
    pub fn lions_shifted(a: f64) -> Result<Self> {
        if a > 0.0 {
            return Err(Error::InvalidArgument(format!(
                "only non-positive shifts keep psi = 0 on t <= 0, got a = {a}"
            )));
        }
        let t_max = 4.0 * (1.0 - a);
        let n = (t_max / PROFILE_DT).round() as usize + 1;
        Self::from_fn(|t| (t + a).clamp(0.0, 1.0), t_max, n)
    }

    pub fn t_max(&self) -> f64 {
        self.t_max
    }

    pub fn dt(&self) -> f64 {
        self.t_max / (self.values.len() - 1) as f64
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.iter().all(|&v| v == 0.0)
    }

    pub fn node(&self, k: usize) -> f64 {
        k as f64 * self.dt()
    }

    pub fn eval(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        if t >= self.t_max {
            return *self.values.last().expect("non-empty");
        }
        let x = t / self.dt();
        let k = x.round();
        if (x - k).abs() < 1e-9 {
            return self.values[k as usize];
        }
        let i = (x.floor() as usize).min(self.values.len() - 2);
        let w = x - i as f64;
        self.values[i] + w * (self.values[i + 1] - self.values[i])
    }

    /// `||psi'||_{L^2(R)}` of the interpolant.
    pub fn grad_norm(&self) -> f64 {
        let dt = self.dt();
        let sum: f64 = self.values.windows(2).map(|w| (w[1] - w[0]).powi(2)).sum();
        (sum / dt).sqrt()
    }

    /// `sup_{t > 0} |psi(t)| / sqrt(t)`, attained at a node for piecewise-linear
    /// profiles.
    pub fn sup_ratio(&self) -> f64 {
        (1..self.values.len()).fold(0.0, |m, k| m.max(self.values[k].abs() / self.node(k).sqrt()))
    }

    /// `psi_lambda(t) = psi(lambda t) / sqrt(lambda)`, so that the bubble at
    /// scale `lambda alpha` with `psi_lambda` equals the bubble at `alpha`
    /// with `psi`.
    pub fn rescaled(&self, lambda: f64) -> Result<Self> {
        if !(lambda > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "rescaling factor must be positive, got {lambda}"
            )));
        }
        let c = lambda.sqrt().recip();
        Self::from_samples(self.t_max / lambda, self.values.iter().map(|v| c * v).collect())
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self {
            t_max: self.t_max,
            values: self.values.iter().map(|v| c * v).collect(),
        }
    }
}

/// The profile of `f_k + f_{2k}` at scale `k`: `t (1 + 1/sqrt 2)` on `[0, 1]`,
/// `1 + t / sqrt 2` on `[1, 2]` and `1 + sqrt 2` afterwards.
pub fn gk_profile() -> Profile {
    let t_max = 8.0;
    let n = (t_max / PROFILE_DT).round() as usize + 1;
    let r = std::f64::consts::FRAC_1_SQRT_2;
    Profile::from_fn(
        |t| {
            if t <= 1.0 {
                t * (1.0 + r)
            } else if t <= 2.0 {
                1.0 + t * r
            } else {
                1.0 + std::f64::consts::SQRT_2
            }
        },
        t_max,
        n,
    )
    .expect("gk profile vanishes at 0")
}

/// A scale `n -> alpha_n` paired with a profile.
#[derive(Clone)]
pub struct ScaledBubble {
    scale: Arc<dyn Fn(usize) -> f64 + Send + Sync>,
    profile: Profile,
}

impl fmt::Debug for ScaledBubble {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ScaledBubble")
            .field("profile_len", &self.profile.len())
            .finish_non_exhaustive()
    }
}

impl ScaledBubble {
    pub fn new<S>(scale: S, profile: Profile) -> Self
    where
        S: Fn(usize) -> f64 + Send + Sync + 'static,
    {
        Self {
            scale: Arc::new(scale),
            profile,
        }
    }

    pub fn scale_at(&self, n: usize) -> f64 {
        (self.scale)(n)
    }

    pub fn profile(&self) -> &Profile {
        &self.profile
    }
}

/// `v(s) = sqrt(alpha / 2 pi) psi(s / alpha)` on `grid`.
pub fn bubble_values(alpha: f64, profile: &Profile, grid: &LogGrid) -> Result<RadialFunction> {
    if !(alpha > 0.0) {
        return Err(Error::InvalidArgument(format!("scale must be positive, got {alpha}")));
    }
    let amp = (alpha / (2.0 * PI)).sqrt();
    RadialFunction::from_log_fn(*grid, |s| amp * profile.eval(s / alpha))
}

/// The `n`-th member `g_n` of a scaled bubble sampled on `grid`.
pub fn bubble_to_function(b: &ScaledBubble, n: usize, grid: &LogGrid) -> Result<RadialFunction> {
    bubble_values(b.scale_at(n), &b.profile, grid)
}
