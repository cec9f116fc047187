//! Finite-parameter checks of the limits satisfied by the Lions families:
//! Orlicz-norm limits, Dirac concentration, the tail integrals `I_alpha`,
//! `J_alpha`, the profile sandwich and the max-law for orthogonal sums.
//!
//! Integrals with `e^{c log^2 r}` weights are written in `s = -log r`, where
//! the combined exponent `c s^2 - k s` is nonpositive on the integration
//! range and the integrands stay bounded.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::lions::{aligned_grid, bubble_grid, bubble_values, lions_l2_closed_form, lions_v, Profile};
use crate::orlicz::{orlicz_norm, OrliczConfig};
use crate::quadrature::integrate_checked;
use crate::radial::{l2_norm, sample_from_closure, LogGrid, RadialFunction};

const QUAD_TOL: f64 = 1e-11;

/// Spacing of the grids used by the sweeps.
pub const SWEEP_DS: f64 = 1.0 / 16.0;

/// `1 / sqrt(4 pi)`, the common limit of the normalized families.
pub fn critical_norm() -> f64 {
    (4.0 * PI).sqrt().recip()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Target {
    Value(f64),
    Infinity,
}

/// A sampled trend towards a target.
///
/// `converged` looks at the last three points only: a finite target needs
/// strictly shrinking errors with a geometric rate below one, the infinite
/// target needs strictly increasing values. `rate_estimate` is the per-step
/// error ratio `sqrt(e_k / e_{k-2})` (or the growth ratio for `Infinity`).
#[derive(Debug, Clone, PartialEq)]
pub struct TrendReport {
    pub parameters: Vec<f64>,
    pub observed: Vec<f64>,
    pub target: Target,
    pub converged: bool,
    pub rate_estimate: f64,
    /// Optional two-sided bounds per point.
    pub bounds: Option<Vec<(f64, f64)>>,
}

impl TrendReport {
    pub fn new(parameters: Vec<f64>, observed: Vec<f64>, target: Target) -> Result<Self> {
        if parameters.len() != observed.len() || parameters.is_empty() {
            return Err(Error::InvalidArgument(
                "trend needs as many observations as parameters, and at least one".into(),
            ));
        }
        if parameters.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidArgument("trend parameters must increase strictly".into()));
        }
        if observed.iter().any(|o| !o.is_finite()) {
            return Err(Error::InvalidArgument("trend observations must be finite".into()));
        }
        let k = observed.len();
        let (converged, rate_estimate) = if k < 3 {
            (false, f64::NAN)
        } else {
            let tail = &observed[k - 3..];
            match target {
                Target::Value(t) => {
                    let e: Vec<f64> = tail.iter().map(|o| (o - t).abs()).collect();
                    let rate = if e[0] > 0.0 { (e[2] / e[0]).sqrt() } else { 0.0 };
                    (e[1] < e[0] && e[2] < e[1] && rate < 1.0 - 1e-3, rate)
                }
                Target::Infinity => {
                    let rate = if tail[0] > 0.0 {
                        (tail[2] / tail[0]).sqrt()
                    } else {
                        f64::INFINITY
                    };
                    (tail[1] > tail[0] && tail[2] > tail[1], rate)
                }
            }
        };
        Ok(Self {
            parameters,
            observed,
            target,
            converged,
            rate_estimate,
            bounds: None,
        })
    }

    /// `|observed - target|`, or `None` for an infinite target.
    pub fn errors(&self) -> Option<Vec<f64>> {
        match self.target {
            Target::Value(t) => Some(self.observed.iter().map(|o| (o - t).abs()).collect()),
            Target::Infinity => None,
        }
    }

    /// Every observation lies in its bounds (up to `tol`); vacuous without bounds.
    pub fn within_bounds(&self, tol: f64) -> bool {
        self.bounds.as_ref().is_none_or(|b| {
            b.iter()
                .zip(&self.observed)
                .all(|(&(lo, hi), &o)| o >= lo - tol && o <= hi + tol)
        })
    }
}

fn check_increasing(values: &[f64], what: &str) -> Result<()> {
    if values.is_empty() || values.iter().any(|a| !(*a > 0.0) || !a.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "{what} must be a non-empty list of positive reals"
        )));
    }
    if values.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidArgument(format!("{what} must be increasing")));
    }
    Ok(())
}

/// `||f_alpha||_L` on the sweep grid.
pub fn lions_orlicz_norm(alpha: f64, cfg: &OrliczConfig) -> Result<f64> {
    let grid = aligned_grid(alpha, alpha + 40.0, SWEEP_DS)?;
    orlicz_norm(&RadialFunction::from_log_fn(grid, lions_v(alpha))?, cfg)
}

/// The two-sided bracket for `||f_alpha||_L`:
/// `sqrt(alpha / (2 pi log(1 + kappa e^{2 alpha} / pi)))` below and
/// `(||grad f_alpha|| + ||f_alpha||_2) / sqrt(4 pi)` above.
pub fn lions_orlicz_bracket(alpha: f64, kappa: f64) -> (f64, f64) {
    // log(1 + kappa e^{2a} / pi) without overflowing e^{2a}
    let log_term = 2.0 * alpha + (kappa / PI).ln() + (PI / kappa * (-2.0 * alpha).exp()).ln_1p();
    let lower = (alpha / (2.0 * PI * log_term)).sqrt();
    let upper = critical_norm() * (1.0 + lions_l2_closed_form(alpha).sqrt());
    (lower, upper)
}

/// `||f_alpha||_L` over `alphas`, targeting `1 / sqrt(4 pi)`, with the
/// per-point bracket attached.
pub fn orlicz_limit_sweep(alphas: &[f64], cfg: &OrliczConfig) -> Result<TrendReport> {
    check_increasing(alphas, "alphas")?;
    let observed = alphas
        .iter()
        .map(|&a| lions_orlicz_norm(a, cfg))
        .collect::<Result<Vec<_>>>()?;
    let mut report = TrendReport::new(alphas.to_vec(), observed, Target::Value(critical_norm()))?;
    report.bounds = Some(alphas.iter().map(|&a| lions_orlicz_bracket(a, cfg.kappa)).collect());
    Ok(report)
}

/// `(I_alpha, J_alpha)`:
///
/// ```text
/// I = \int_{e^-a}^1 r   e^{(2/a) log^2 r} dr = \int_0^a e^{2s^2/a - 2s} ds
/// J = \int_{e^-a}^1 r^2 e^{(2/a) log^2 r} dr = \int_0^a e^{2s^2/a - 3s} ds
/// ```
pub fn tail_integrals(alpha: f64) -> Result<(f64, f64)> {
    if !(alpha > 0.0) {
        return Err(Error::InvalidArgument(format!("alpha must be positive, got {alpha}")));
    }
    // the mass sits within O(1) of both ends
    let cuts = end_breakpoints(0.0, alpha);
    let i = integrate_checked(|s: f64| (2.0 * s * s / alpha - 2.0 * s).exp(), &cuts, QUAD_TOL, 0.0)?;
    let j = integrate_checked(|s: f64| (2.0 * s * s / alpha - 3.0 * s).exp(), &cuts, QUAD_TOL, 0.0)?;
    Ok((i.value, j.value))
}

fn end_breakpoints(a: f64, b: f64) -> Vec<f64> {
    let w = b - a;
    if w <= 8.0 {
        return vec![a, 0.5 * (a + b), b];
    }
    vec![a, a + 2.0, a + 0.5 * w, b - 2.0, b]
}

/// `e^{p a} \int_{e^{-a^2}}^{e^{-a}} e^{q log^2 r / a^2} r dr`, computed as
/// `\int_a^{a^2} e^{p a + q s^2 / a^2 - 2s} ds`.
pub fn pq_integral(p: f64, q: f64, alpha: f64) -> Result<f64> {
    if !(p > 0.0 && p < 2.0 && q > 0.0 && q < 2.0) {
        return Err(Error::Precondition(format!(
            "p and q must lie in (0, 2), got p = {p}, q = {q}"
        )));
    }
    if !(alpha > 1.0) {
        return Err(Error::Precondition(format!(
            "alpha must exceed 1 so that alpha^2 > alpha, got {alpha}"
        )));
    }
    let a2 = alpha * alpha;
    let cuts = end_breakpoints(alpha, a2);
    let q = integrate_checked(
        |s: f64| (p * alpha + q * s * s / a2 - 2.0 * s).exp(),
        &cuts,
        QUAD_TOL,
        0.0,
    )?;
    Ok(q.value)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiracKind {
    /// `\int |grad f_alpha|^2 phi dx`, tends to `phi(0)`.
    Gradient,
    /// `\int (e^{4 pi f_alpha^2} - 1) phi dx`, tends to `2 pi phi(0)`.
    Exponential,
}

/// Pairs `f_alpha` with a radial test function `phi(r)`.
pub fn dirac_test<P: Fn(f64) -> f64>(alpha: f64, phi: P, kind: DiracKind) -> Result<f64> {
    if !(alpha > 0.0) {
        return Err(Error::InvalidArgument(format!("alpha must be positive, got {alpha}")));
    }
    let phi_s = |s: f64| phi((-s).exp());
    match kind {
        // |grad f|^2 = 1 / (2 pi alpha r^2) on the annulus
        DiracKind::Gradient => {
            let q = integrate_checked(phi_s, &end_breakpoints(0.0, alpha), QUAD_TOL, 1e-14)?;
            Ok(q.value / alpha)
        }
        DiracKind::Exponential => {
            // annulus: 4 pi f^2 = 2 s^2 / alpha
            let ring = integrate_checked(
                |s: f64| ((2.0 * s * s / alpha - 2.0 * s).exp() - (-2.0 * s).exp()) * phi_s(s),
                &end_breakpoints(0.0, alpha),
                QUAD_TOL,
                1e-14,
            )?;
            // plateau, t = s - alpha: (e^{2a} - 1) e^{-2s} = (1 - e^{-2a}) e^{-2t}
            let damp = -(-2.0 * alpha).exp_m1();
            let disk = integrate_checked(
                |t: f64| damp * (-2.0 * t).exp() * phi_s(alpha + t),
                &[0.0, 2.0, 8.0, 40.0],
                QUAD_TOL,
                1e-14,
            )?;
            Ok(2.0 * PI * (ring.value + disk.value))
        }
    }
}

/// Sandwich of Prop. "profile" for one profile.
#[derive(Debug, Clone, PartialEq)]
pub struct ProfileBounds {
    /// `sup_{t > 0} |psi(t)| / sqrt(t) / sqrt(4 pi)`
    pub lower: f64,
    /// `||psi'||_2 / sqrt(4 pi)`
    pub upper: f64,
    /// `||g_{alpha, psi}||_L` along the sampled scales.
    pub observed: TrendReport,
}

impl ProfileBounds {
    /// `lower - tol <= observed <= upper + tol` at the last sampled scale.
    pub fn holds_at_tail(&self, tol: f64) -> bool {
        match self.observed.observed.last() {
            Some(&o) => o >= self.lower - tol && o <= self.upper + tol,
            None => false,
        }
    }
}

/// `||g_{alpha, psi}||_L` sampled on its own bubble grid.
pub fn bubble_orlicz_norm(alpha: f64, psi: &Profile, cfg: &OrliczConfig) -> Result<f64> {
    let grid = bubble_grid(alpha, psi, SWEEP_DS, 40.0)?;
    orlicz_norm(&bubble_values(alpha, psi, &grid)?, cfg)
}

pub fn profile_norm_bounds(psi: &Profile, alphas: &[f64], cfg: &OrliczConfig) -> Result<ProfileBounds> {
    check_increasing(alphas, "alphas")?;
    let c = critical_norm();
    let observed = alphas
        .iter()
        .map(|&a| bubble_orlicz_norm(a, psi, cfg))
        .collect::<Result<Vec<_>>>()?;
    let lower = psi.sup_ratio() * c;
    let upper = psi.grad_norm() * c;
    let mut trend = TrendReport::new(alphas.to_vec(), observed, Target::Value(0.5 * (lower + upper)))?;
    trend.bounds = Some(vec![(lower, upper); alphas.len()]);
    Ok(ProfileBounds {
        lower,
        upper,
        observed: trend,
    })
}

/// `||a f_alpha + b f_{alpha^2}||_L` on a grid with nodes at `0`, `alpha`
/// and (for integer `alpha`) `alpha^2`.
pub fn sum_orlicz_norm(a: f64, b: f64, alpha: f64, cfg: &OrliczConfig) -> Result<f64> {
    let grid = aligned_grid(alpha, alpha * alpha + 40.0, SWEEP_DS)?;
    let (f1, f2) = (lions_v(alpha), lions_v(alpha * alpha));
    orlicz_norm(&RadialFunction::from_log_fn(grid, |s| a * f1(s) + b * f2(s))?, cfg)
}

/// `||h_alpha||_L` over `alphas`, targeting `max(|a|, |b|) / sqrt(4 pi)`.
pub fn sum_orlicz_max_check(a: f64, b: f64, alphas: &[f64], cfg: &OrliczConfig) -> Result<TrendReport> {
    check_increasing(alphas, "alphas")?;
    if alphas[0] < 2.0 {
        return Err(Error::Precondition(format!(
            "alpha must be at least 2, got {}",
            alphas[0]
        )));
    }
    let observed = alphas
        .iter()
        .map(|&al| sum_orlicz_norm(a, b, al, cfg))
        .collect::<Result<Vec<_>>>()?;
    TrendReport::new(
        alphas.to_vec(),
        observed,
        Target::Value(a.abs().max(b.abs()) * critical_norm()),
    )
}

/// `\int (alpha_n beta_n)^{-1/2} f(s / alpha_n) g(s / beta_n) ds` over the
/// sampled `ns`; `f` and `g` vanish outside `[0, support]`.
pub fn cross_scale_vanishing<F, G, A, B>(
    f: F,
    g: G,
    support: f64,
    alpha: A,
    beta: B,
    ns: &[usize],
) -> Result<TrendReport>
where
    F: Fn(f64) -> f64,
    G: Fn(f64) -> f64,
    A: Fn(usize) -> f64,
    B: Fn(usize) -> f64,
{
    if !(support > 0.0) || ns.is_empty() {
        return Err(Error::InvalidArgument(
            "need a positive support and at least one index".into(),
        ));
    }
    let mut observed = Vec::with_capacity(ns.len());
    for &n in ns {
        let (a, b) = (alpha(n), beta(n));
        if !(a > 0.0 && b > 0.0) {
            return Err(Error::InvalidArgument(format!("scales must be positive at n = {n}")));
        }
        let end = support * a.min(b);
        // cut at the knots of both rescaled grids so jumps never sit inside a panel
        let pieces = 256;
        let mut cuts: Vec<f64> = (0..=pieces)
            .flat_map(|k| {
                let t = support * k as f64 / pieces as f64;
                [t * a, t * b]
            })
            .filter(|&s| s <= end)
            .collect();
        cuts.push(end);
        cuts.sort_by(f64::total_cmp);
        cuts.dedup_by(|x, y| (*x - *y).abs() <= 1e-12 * end.max(1.0));
        if cuts.len() < 2 {
            observed.push(0.0);
            continue;
        }
        let q = integrate_checked(|s: f64| f(s / a) * g(s / b), &cuts, 1e-10, 1e-14)?;
        observed.push(q.value / (a * b).sqrt());
    }
    let params = ns.iter().map(|&n| n as f64).collect();
    TrendReport::new(params, observed, Target::Value(0.0))
}

/// `||g_alpha||_2` for `g_alpha = f_alpha(x / alpha^theta)`, which vanishes
/// as `alpha -> infinity` when `theta < 1/2`.
pub fn scaled_g_l2(alpha: f64, theta: f64) -> Result<f64> {
    let radius = alpha.powf(theta);
    // f_alpha(x / R) in s: v(s + log R), so shift the grid left by log R
    let shift = radius.ln();
    let grid = LogGrid::with_spacing(-2.0 - shift, alpha - shift + 40.0, SWEEP_DS)?;
    let g = sample_from_closure(crate::lions::scaled_g(alpha, radius), &grid)?;
    Ok(l2_norm(&g))
}
