//! Radial Klein-Gordon equations on a disk,
//!
//! ```text
//! u_tt - Δu + u + u (e^{4 pi u^2} - 1) = 0      (nonlinear)
//! v_tt - Δv + v = 0                              (linear)
//! ```
//!
//! discretized by finite volumes in `r` and velocity Verlet in time.
//!
//! Node `i` sits at `r_i = i dr` and owns the annulus between the cell
//! faces `r_{i -+ 1/2}` (the disk of radius `dr / 2` for the origin). With
//! area weights `w_i` and face fluxes `k_{i+1/2} = 2 pi r_{i+1/2} / dr` the
//! discrete Laplacian is the gradient of `sum k (u_{i+1} - u_i)^2`, so the
//! scheme conserves a discrete energy up to the usual `O(dt^2)` Verlet
//! oscillation. At the origin it reduces to `4 (u_1 - u_0) / dr^2`, the
//! `2 u_rr` symmetry limit. The outer node is held at zero.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::orlicz::{orlicz_norm, OrliczConfig, EXPONENT_CAP};
use crate::quadrature::integrate;
use crate::radial::{LogGrid, RadialFunction};

/// Default Courant number `dt / dr`.
pub const CFL: f64 = 0.5;

/// Half-width of the band around `E_0 = 1` classified as critical.
pub const REGIME_BAND: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RGrid {
    radius: f64,
    n_r: usize,
    dr: f64,
}

impl RGrid {
    pub fn new(radius: f64, n_r: usize) -> Result<Self> {
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "domain radius must be positive, got {radius}"
            )));
        }
        if n_r < 3 {
            return Err(Error::InvalidArgument(format!(
                "need at least 3 radial nodes, got {n_r}"
            )));
        }
        Ok(Self {
            radius,
            n_r,
            dr: radius / (n_r - 1) as f64,
        })
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn n_r(&self) -> usize {
        self.n_r
    }

    pub fn dr(&self) -> f64 {
        self.dr
    }

    pub fn node(&self, i: usize) -> f64 {
        i as f64 * self.dr
    }

    /// Area of the control volume of node `i`.
    pub fn weight(&self, i: usize) -> f64 {
        let dr = self.dr;
        if i == 0 {
            PI * dr * dr / 4.0
        } else if i + 1 == self.n_r {
            // half cell inside the disk
            PI * (self.node(i) - 0.25 * dr) * dr
        } else {
            2.0 * PI * self.node(i) * dr
        }
    }

    /// `2 pi r_{i+1/2} / dr`, the coupling between nodes `i` and `i + 1`.
    pub fn flux(&self, i: usize) -> f64 {
        2.0 * PI * (i as f64 + 0.5)
    }

    fn weights(&self) -> Vec<f64> {
        (0..self.n_r).map(|i| self.weight(i)).collect()
    }

    fn fluxes(&self) -> Vec<f64> {
        (0..self.n_r - 1).map(|i| self.flux(i)).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WaveState {
    pub u: Vec<f64>,
    pub ut: Vec<f64>,
    pub time: f64,
}

impl WaveState {
    pub fn zeros(grid: &RGrid) -> Self {
        Self {
            u: vec![0.0; grid.n_r()],
            ut: vec![0.0; grid.n_r()],
            time: 0.0,
        }
    }

    /// `u - v` and `u_t - v_t` at the time of `self`.
    pub fn difference(&self, other: &Self) -> Result<Self> {
        if self.u.len() != other.u.len() {
            return Err(Error::InvalidArgument("states live on different grids".into()));
        }
        Ok(Self {
            u: self.u.iter().zip(&other.u).map(|(a, b)| a - b).collect(),
            ut: self.ut.iter().zip(&other.ut).map(|(a, b)| a - b).collect(),
            time: self.time,
        })
    }
}

type Radial = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Initial data `(u, u_t)(0) = (phi, psi)`, both vanishing for `r > support`.
#[derive(Clone)]
pub struct CauchyData {
    phi: Radial,
    psi: Radial,
    support: f64,
}

impl fmt::Debug for CauchyData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CauchyData")
            .field("support", &self.support)
            .finish_non_exhaustive()
    }
}

impl CauchyData {
    pub fn new<P, Q>(phi: P, psi: Q, support: f64) -> Result<Self>
    where
        P: Fn(f64) -> f64 + Send + Sync + 'static,
        Q: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        if !(support >= 0.0) || !support.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "support radius must be finite, got {support}"
            )));
        }
        Ok(Self {
            phi: Arc::new(phi),
            psi: Arc::new(psi),
            support,
        })
    }

    pub fn zero() -> Self {
        Self::new(|_| 0.0, |_| 0.0, 0.0).expect("zero data is valid")
    }

    /// `(c f_alpha, 0)`, supported in the unit disk.
    pub fn lions(c: f64, alpha: f64) -> Result<Self> {
        if !(alpha > 0.0) {
            return Err(Error::InvalidArgument(format!("alpha must be positive, got {alpha}")));
        }
        let f = crate::lions::lions_f(alpha);
        Self::new(move |r| c * f(r), |_| 0.0, 1.0)
    }

    /// `(c e^{1 - 1 / (1 - (r / rho)^2)}, 0)` on `r < rho`. Being flat to all
    /// orders at `rho`, it keeps the discrete solution negligible outside the
    /// light cone.
    pub fn bump(c: f64, rho: f64) -> Result<Self> {
        if !(rho > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "bump radius must be positive, got {rho}"
            )));
        }
        Self::new(
            move |r| {
                let x = r / rho;
                if x < 1.0 {
                    c * (1.0 - 1.0 / (1.0 - x * x)).exp()
                } else {
                    0.0
                }
            },
            |_| 0.0,
            rho,
        )
    }

    pub fn scaled(&self, c: f64) -> Self {
        let (phi, psi) = (self.phi.clone(), self.psi.clone());
        Self {
            phi: Arc::new(move |r| c * phi(r)),
            psi: Arc::new(move |r| c * psi(r)),
            support: self.support,
        }
    }

    pub fn support(&self) -> f64 {
        self.support
    }

    /// Projects the data onto `grid` at `t = 0`: each node gets the average
    /// of `phi` and `psi` over its control volume. The outer node is zeroed.
    ///
    /// Point values would put the whole core of a concentrated profile into
    /// the origin node and charge the first cell for a jump the continuous
    /// function spreads over many scales.
    pub fn initial_state(&self, grid: &RGrid) -> Result<WaveState> {
        let n = grid.n_r();
        let half = 0.5 * grid.dr();
        let average = |g: &Radial, i: usize| -> Result<f64> {
            let (a, b) = if i == 0 {
                (0.0, half)
            } else {
                (grid.node(i) - half, grid.node(i) + half)
            };
            let q = integrate(|r: f64| g(r) * r, a, b, 1e-10, 1e-16);
            let v = q.value / (0.5 * (b * b - a * a));
            if !v.is_finite() {
                return Err(Error::Sampling {
                    index: i,
                    s: -grid.node(i).ln(),
                });
            }
            Ok(v)
        };
        let mut u = vec![0.0; n];
        let mut ut = vec![0.0; n];
        for i in 0..n - 1 {
            u[i] = average(&self.phi, i)?;
            ut[i] = average(&self.psi, i)?;
        }
        Ok(WaveState { u, ut, time: 0.0 })
    }
}

/// `f(u) = u (e^{4 pi u^2} - 1)`.
pub fn nonlinearity(u: f64) -> Result<f64> {
    let x = 4.0 * PI * u * u;
    if x > EXPONENT_CAP || !x.is_finite() {
        return Err(Error::BlowUp {
            time: f64::NAN,
            node: 0,
            value: u,
        });
    }
    Ok(u * x.exp_m1())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyReport {
    /// `||u_t||^2`
    pub kinetic: f64,
    /// `||grad u||^2`
    pub gradient: f64,
    /// `(1 / 4 pi) ||e^{4 pi u^2} - 1||_{L^1}`; contains the mass `||u||^2`.
    pub nonlinear: f64,
    pub total: f64,
    /// `||u_t||^2 + ||grad u||^2 + ||u||^2`, the energy of the linear flow.
    pub e_c: f64,
}

/// Discrete energy of `state`; the nonlinear part saturates to infinity
/// past the exponent cap.
pub fn total_energy(state: &WaveState, grid: &RGrid) -> Result<EnergyReport> {
    if state.u.len() != grid.n_r() || state.ut.len() != grid.n_r() {
        return Err(Error::InvalidArgument("state does not match the grid".into()));
    }
    let (mut kinetic, mut mass, mut nonlinear) = (0.0, 0.0, 0.0);
    for i in 0..grid.n_r() {
        let w = grid.weight(i);
        let u = state.u[i];
        kinetic += w * state.ut[i] * state.ut[i];
        mass += w * u * u;
        nonlinear += w * (4.0 * PI * u * u).exp_m1();
    }
    let gradient: f64 = (0..grid.n_r() - 1)
        .map(|i| grid.flux(i) * (state.u[i + 1] - state.u[i]).powi(2))
        .sum();
    let nonlinear = nonlinear / (4.0 * PI);
    Ok(EnergyReport {
        kinetic,
        gradient,
        nonlinear,
        total: kinetic + gradient + nonlinear,
        e_c: kinetic + gradient + mass,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    Subcritical,
    Critical,
    Supercritical,
}

/// Classifies by the discrete `E_0` with the band [`REGIME_BAND`].
pub fn classify_regime(data: &CauchyData, grid: &RGrid) -> Result<(Regime, f64)> {
    let e0 = total_energy(&data.initial_state(grid)?, grid)?.total;
    let regime = if (e0 - 1.0).abs() <= REGIME_BAND {
        Regime::Critical
    } else if e0 < 1.0 {
        Regime::Subcritical
    } else {
        Regime::Supercritical
    };
    Ok((regime, e0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Nonlinear,
    Linear,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvolveConfig {
    pub t_end: f64,
    pub dt: f64,
    pub mode: Mode,
    /// Keep every `store_every`-th step (the first and last are always kept).
    pub store_every: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub grid: RGrid,
    pub mode: Mode,
    pub states: Vec<WaveState>,
}

impl Trajectory {
    pub fn last(&self) -> &WaveState {
        self.states
            .last()
            .expect("a trajectory holds at least the initial state")
    }

    /// Relative drift of the conserved energy of the mode (`total` for the
    /// nonlinear flow, `e_c` for the linear one) over the stored states.
    pub fn energy_drift(&self) -> Result<f64> {
        let pick = |s: &WaveState| -> Result<f64> {
            let e = total_energy(s, &self.grid)?;
            Ok(match self.mode {
                Mode::Nonlinear => e.total,
                Mode::Linear => e.e_c,
            })
        };
        let e0 = pick(&self.states[0])?;
        if e0 == 0.0 {
            return Ok(0.0);
        }
        let mut worst: f64 = 0.0;
        for s in &self.states {
            worst = worst.max((pick(s)? - e0).abs());
        }
        Ok(worst / e0)
    }
}

fn acceleration(u: &[f64], w: &[f64], k: &[f64], mode: Mode, time: f64, out: &mut [f64]) -> Result<()> {
    let n = u.len();
    for i in 0..n - 1 {
        let right = k[i] * (u[i + 1] - u[i]);
        let left = if i == 0 { 0.0 } else { k[i - 1] * (u[i] - u[i - 1]) };
        let potential = match mode {
            Mode::Linear => u[i],
            Mode::Nonlinear => {
                let x = 4.0 * PI * u[i] * u[i];
                if x > EXPONENT_CAP || !x.is_finite() {
                    return Err(Error::BlowUp {
                        time,
                        node: i,
                        value: u[i],
                    });
                }
                u[i] * x.exp()
            }
        };
        out[i] = (right - left) / w[i] - potential;
    }
    out[n - 1] = 0.0;
    Ok(())
}

/// Velocity Verlet from `data` up to `cfg.t_end`.
///
/// Requires `dt <= CFL dr` and `t_end < R - support`, so that the outer
/// Dirichlet node never sees the solution.
pub fn evolve(data: &CauchyData, grid: &RGrid, cfg: &EvolveConfig) -> Result<Trajectory> {
    if !(cfg.dt > 0.0) || cfg.dt > CFL * grid.dr() * (1.0 + 1e-12) {
        return Err(Error::Precondition(format!(
            "dt = {} violates dt <= {CFL} dr = {}",
            cfg.dt,
            CFL * grid.dr()
        )));
    }
    if !(cfg.t_end > 0.0) || cfg.t_end >= grid.radius() - data.support() {
        return Err(Error::Precondition(format!(
            "T = {} must be positive and below R - support = {}",
            cfg.t_end,
            grid.radius() - data.support()
        )));
    }
    if cfg.store_every == 0 {
        return Err(Error::InvalidArgument("store_every must be positive".into()));
    }
    let w = grid.weights();
    let k = grid.fluxes();
    let mut state = data.initial_state(grid)?;
    let n = grid.n_r();
    let mut acc = vec![0.0; n];
    acceleration(&state.u, &w, &k, cfg.mode, 0.0, &mut acc)?;

    let steps = (cfg.t_end / cfg.dt - 1e-9).ceil() as usize;
    let dt = cfg.t_end / steps as f64;
    let mut states = vec![state.clone()];
    for step in 1..=steps {
        for ((u, ut), a) in state.u.iter_mut().zip(&mut state.ut).zip(&acc).take(n - 1) {
            *ut += 0.5 * dt * a;
            *u += dt * *ut;
        }
        state.time = step as f64 * dt;
        acceleration(&state.u, &w, &k, cfg.mode, state.time, &mut acc)?;
        for (ut, a) in state.ut.iter_mut().zip(&acc).take(n - 1) {
            *ut += 0.5 * dt * a;
        }
        if step % cfg.store_every == 0 || step == steps {
            states.push(state.clone());
        }
    }
    Ok(Trajectory {
        grid: *grid,
        mode: cfg.mode,
        states,
    })
}

/// `sup_t E_c(u - v, t)` for the nonlinear `u` and linear `v` started from
/// the same data, over the stored times.
pub fn kinetic_gap(data: &CauchyData, grid: &RGrid, t_end: f64, dt: f64, store_every: usize) -> Result<f64> {
    let run = |mode| {
        evolve(
            data,
            grid,
            &EvolveConfig {
                t_end,
                dt,
                mode,
                store_every,
            },
        )
    };
    let u = run(Mode::Nonlinear)?;
    let v = run(Mode::Linear)?;
    let mut gap: f64 = 0.0;
    for (a, b) in u.states.iter().zip(&v.states) {
        gap = gap.max(total_energy(&a.difference(b)?, grid)?.e_c);
    }
    Ok(gap)
}

/// Moves `u(r)` onto a log grid (`r` from `R` down to `e^{-10} dr`) and
/// returns its Orlicz norm.
pub fn orlicz_snapshot_norm(state: &WaveState, grid: &RGrid, ocfg: &OrliczConfig) -> Result<f64> {
    if state.u.len() != grid.n_r() {
        return Err(Error::InvalidArgument("state does not match the grid".into()));
    }
    let log_grid = LogGrid::with_spacing(-grid.radius().ln(), -grid.dr().ln() + 10.0, 1.0 / 16.0)?;
    let u = &state.u;
    let f = RadialFunction::from_log_fn(log_grid, |s| {
        let x = (-s).exp() / grid.dr();
        let i = (x.floor() as usize).min(grid.n_r() - 2);
        let t = (x - i as f64).clamp(0.0, 1.0);
        u[i] + t * (u[i + 1] - u[i])
    })?;
    orlicz_norm(&f, ocfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nonlinearity_values() {
        assert_eq!(nonlinearity(0.0).unwrap(), 0.0);
        assert_eq!(nonlinearity(-0.3).unwrap(), -nonlinearity(0.3).unwrap());
        assert!((nonlinearity(0.5).unwrap() - 11.0703).abs() < 1e-4);
        assert!(matches!(nonlinearity(10.0), Err(Error::BlowUp { .. })));
    }

    #[test]
    fn origin_stencil_is_twice_u_rr() {
        let g = RGrid::new(1.0, 11).unwrap();
        let w = g.weights();
        let k = g.fluxes();
        // u = r^2 has Laplacian 4 everywhere
        let u: Vec<f64> = (0..11).map(|i| g.node(i).powi(2)).collect();
        let mut a = vec![0.0; 11];
        acceleration(&u, &w, &k, Mode::Linear, 0.0, &mut a).unwrap();
        for i in 0..10 {
            assert!((a[i] + u[i] - 4.0).abs() < 1e-9, "node {i}: {}", a[i] + u[i]);
        }
    }

    #[test]
    fn zero_state_has_zero_energy() {
        let g = RGrid::new(2.0, 64).unwrap();
        let e = total_energy(&WaveState::zeros(&g), &g).unwrap();
        assert_eq!(e.total, 0.0);
        assert_eq!(classify_regime(&CauchyData::zero(), &g).unwrap().0, Regime::Subcritical);
    }

    #[test]
    fn small_plateau_nonlinear_energy() {
        // u = c on a disk of radius rho: (1 / 4 pi)(e^{4 pi c^2} - 1) pi rho^2
        let g = RGrid::new(2.0, 4001).unwrap();
        let (c, rho) = (0.05, 1.0);
        let data = CauchyData::new(move |r| if r <= rho { c } else { 0.0 }, |_| 0.0, rho).unwrap();
        let e = total_energy(&data.initial_state(&g).unwrap(), &g).unwrap();
        let expect = (4.0 * PI * c * c).exp_m1() / (4.0 * PI) * PI * rho * rho;
        assert!((e.nonlinear - expect).abs() < 2e-3 * expect);
    }

    #[test]
    fn preconditions_are_enforced() {
        let g = RGrid::new(10.0, 101).unwrap();
        let data = CauchyData::bump(0.1, 1.0).unwrap();
        let bad_dt = EvolveConfig {
            t_end: 1.0,
            dt: g.dr(),
            mode: Mode::Linear,
            store_every: 1,
        };
        assert!(matches!(evolve(&data, &g, &bad_dt), Err(Error::Precondition(_))));
        let too_long = EvolveConfig {
            t_end: 100.0,
            dt: 0.5 * g.dr(),
            ..bad_dt
        };
        assert!(matches!(evolve(&data, &g, &too_long), Err(Error::Precondition(_))));
    }

    #[test]
    fn zero_data_stays_zero() {
        let g = RGrid::new(3.0, 200).unwrap();
        let cfg = EvolveConfig {
            t_end: 1.0,
            dt: 0.5 * g.dr(),
            mode: Mode::Nonlinear,
            store_every: 10,
        };
        let tr = evolve(&CauchyData::zero(), &g, &cfg).unwrap();
        assert!(tr.states.iter().all(|s| s.u.iter().all(|&u| u == 0.0)));
        assert_eq!(
            kinetic_gap(&CauchyData::zero(), &g, 1.0, 0.5 * g.dr(), 10).unwrap(),
            0.0
        );
    }
}
