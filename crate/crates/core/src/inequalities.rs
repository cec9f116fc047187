//! Auxiliary inequalities: radial decay, the logarithmic inequality
//! `(H_mu)`, superlevel measures and the BMO ball averages of
//! `g_alpha = f_alpha e^{i theta}`.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::quadrature::integrate_checked;
use crate::radial::{grad_l2_norm, l2_norm, lp_norm, RadialFunction};

/// `sup_r |u(r)| r^{2/(2+p)} / (||u||_p^{p/(p+2)} ||grad u||^{2/(p+2)})`
/// against `C_p = ((p+2)/2)^{2/(p+2)}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialBoundReport {
    pub p: f64,
    pub ratio: f64,
    pub constant: f64,
    /// `r` where the ratio is attained.
    pub argmax_r: f64,
}

impl RadialBoundReport {
    pub fn holds(&self) -> bool {
        self.ratio <= self.constant
    }
}

pub fn radial_bound_constant(p: f64) -> f64 {
    ((p + 2.0) / 2.0).powf(2.0 / (p + 2.0))
}

pub fn radial_bound_check(f: &RadialFunction, p: f64) -> Result<RadialBoundReport> {
    if !(p >= 1.0) || !p.is_finite() {
        return Err(Error::InvalidArgument(format!("p must be at least 1, got {p}")));
    }
    let lp = lp_norm(f, p);
    let grad = grad_l2_norm(f);
    let denom = lp.powf(p / (p + 2.0)) * grad.powf(2.0 / (p + 2.0));
    if !(denom > 0.0) {
        return Err(Error::Undefined(format!(
            "radial bound with ||u||_p = {lp}, ||grad u|| = {grad}"
        )));
    }
    let k = 2.0 / (2.0 + p);
    let (mut ratio, mut argmax_r) = (0.0, f64::NAN);
    for (s, v) in f.grid().nodes().zip(f.values()) {
        // r^k = e^{-k s}
        let x = v.abs() * (-k * s).exp();
        if x > ratio {
            ratio = x;
            argmax_r = (-s).exp();
        }
    }
    Ok(RadialBoundReport {
        p,
        ratio: ratio / denom,
        constant: radial_bound_constant(p),
        argmax_r,
    })
}

/// `sup |u(x) - u(y)| / |x - y|^{alpha_h}` over pairs of grid radii on one
/// ray. Quadratic in the number of nodes.
pub fn holder_seminorm(f: &RadialFunction, alpha_h: f64) -> Result<f64> {
    if !(alpha_h > 0.0 && alpha_h < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "Holder index must lie in (0, 1), got {alpha_h}"
        )));
    }
    let r: Vec<f64> = f.grid().nodes().map(|s| (-s).exp()).collect();
    let v = f.values();
    let mut best: f64 = 0.0;
    for i in 0..r.len() {
        for j in i + 1..r.len() {
            let dv = (v[i] - v[j]).abs();
            if dv > 0.0 {
                best = best.max(dv / (r[i] - r[j]).abs().powf(alpha_h));
            }
        }
    }
    Ok(best)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogIneqReport {
    pub lambda: f64,
    pub mu: f64,
    pub alpha_h: f64,
    /// Smallest `C >= 0` with
    /// `||u||_inf^2 <= lambda ||u||_{H_mu}^2 log(C + 8^a mu^-a ||u||_{C^a} / ||u||_{H_mu})`.
    pub empirical_c: f64,
    pub sup: f64,
    pub h_mu: f64,
    pub holder: f64,
}

/// Solves `(H_mu)` for its constant from the measured norms, with
/// `||u||_{H_mu}^2 = ||grad u||^2 + mu^2 ||u||^2` and the inhomogeneous
/// Holder norm `||u||_inf + [u]_{alpha_h}`.
pub fn log_inequality_probe(f: &RadialFunction, lambda: f64, mu: f64, alpha_h: f64) -> Result<LogIneqReport> {
    if !(alpha_h > 0.0 && alpha_h < 1.0) {
        return Err(Error::Precondition(format!(
            "alpha_h must lie in (0, 1), got {alpha_h}"
        )));
    }
    if !(lambda > 1.0 / (2.0 * PI * alpha_h)) {
        return Err(Error::Precondition(format!(
            "lambda must exceed 1 / (2 pi alpha_h) = {}, got {lambda}",
            1.0 / (2.0 * PI * alpha_h)
        )));
    }
    if !(mu > 0.0 && mu <= 1.0) {
        return Err(Error::Precondition(format!("mu must lie in (0, 1], got {mu}")));
    }
    let sup = f.sup_norm();
    let (l2, grad) = (l2_norm(f), grad_l2_norm(f));
    let h_mu = (grad * grad + mu * mu * l2 * l2).sqrt();
    if !(h_mu > 0.0) {
        return Err(Error::Undefined("||u||_{H_mu} vanishes".into()));
    }
    let holder = sup + holder_seminorm(f, alpha_h)?;
    let exponent = sup * sup / (lambda * h_mu * h_mu);
    if exponent > crate::orlicz::EXPONENT_CAP {
        return Err(Error::Overflow {
            index: 0,
            s: f64::NAN,
            exponent,
        });
    }
    let shift = 8f64.powf(alpha_h) * mu.powf(-alpha_h) * holder / h_mu;
    Ok(LogIneqReport {
        lambda,
        mu,
        alpha_h,
        empirical_c: (exponent.exp() - shift).max(0.0),
        sup,
        h_mu,
        holder,
    })
}

/// `|{ |u| >= eps }|`, exact for the piecewise-linear interpolant.
pub fn superlevel_measure(f: &RadialFunction, eps: f64) -> Result<f64> {
    if !(eps > 0.0) {
        return Err(Error::InvalidArgument(format!("eps must be positive, got {eps}")));
    }
    let g = f.grid();
    let v = f.values();
    // |{|u| >= eps}| = 2 pi \int 1 e^{-2s} ds = pi (e^{-2a} - e^{-2b}) per interval
    let piece = |a: f64, b: f64| {
        if b > a {
            PI * ((-2.0 * a).exp() - (-2.0 * b).exp())
        } else {
            0.0
        }
    };
    let mut total = 0.0;
    for i in 0..g.n_points() - 1 {
        let (s0, s1) = (g.node(i), g.node(i + 1));
        let (v0, v1) = (v[i], v[i + 1]);
        for (w0, w1) in [(v0, v1), (-v0, -v1)] {
            // part of the cell where the linear w is >= eps
            if w0 >= eps && w1 >= eps {
                total += piece(s0, s1);
            } else if w0 >= eps || w1 >= eps {
                let t = (eps - w0) / (w1 - w0);
                let sc = s0 + t * (s1 - s0);
                total += if w0 >= eps { piece(s0, sc) } else { piece(sc, s1) };
            }
        }
    }
    Ok(total)
}

/// Ball averages of `g_alpha = f_alpha e^{i theta}` on
/// `B_alpha = B(0, e^{-alpha / 2})`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BmoReport {
    pub alpha: f64,
    /// Mean of `g_alpha` over the ball; the angular factor integrates to 0.
    pub mean: f64,
    /// Mean of `|g_alpha - mean|` by quadrature.
    pub average: f64,
    /// `sqrt(alpha) / (2 sqrt(2 pi)) + (1 - e^{-alpha}) / (2 sqrt(2 pi alpha))`
    pub closed_form: f64,
}

impl BmoReport {
    pub fn relative_error(&self) -> f64 {
        (self.average - self.closed_form).abs() / self.closed_form
    }
}

pub fn bmo_closed_form(alpha: f64) -> f64 {
    let c = (2.0 * PI).sqrt();
    alpha.sqrt() / (2.0 * c) - (-alpha).exp_m1() / (2.0 * c * alpha.sqrt())
}

pub fn bmo_probe(alpha: f64) -> Result<BmoReport> {
    if !(alpha > 0.0) {
        return Err(Error::InvalidArgument(format!("alpha must be positive, got {alpha}")));
    }
    // (1 / pi rho^2) \int_B f_alpha dx = 2 \int_0^inf v(alpha/2 + t) e^{-2t} dt
    let slope = (2.0 * alpha * PI).sqrt().recip();
    let plateau = (alpha / (2.0 * PI)).sqrt();
    let half = 0.5 * alpha;
    let ring = integrate_checked(
        |t: f64| (half + t) * slope * (-2.0 * t).exp(),
        &[0.0, half.min(1.0), half],
        1e-13,
        0.0,
    )?;
    let disk = integrate_checked(
        |t: f64| plateau * (-2.0 * (half + t)).exp(),
        &[0.0, 2.0, 8.0, 40.0],
        1e-13,
        0.0,
    )?;
    Ok(BmoReport {
        alpha,
        mean: 0.0,
        average: 2.0 * (ring.value + disk.value),
        closed_form: bmo_closed_form(alpha),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lions::{aligned_grid, lions_f};
    use crate::radial::{sample_from_closure, LogGrid};

    fn lions(alpha: f64) -> RadialFunction {
        let grid = aligned_grid(alpha, alpha + 20.0, 1.0 / 16.0).unwrap();
        sample_from_closure(lions_f(alpha), &grid).unwrap()
    }

    #[test]
    fn radial_constant_for_p2_is_sqrt2() {
        assert!((radial_bound_constant(2.0) - 2f64.sqrt()).abs() < 1e-15);
        for alpha in [1.0, 5.0, 25.0] {
            assert!(radial_bound_check(&lions(alpha), 2.0).unwrap().holds());
        }
    }

    #[test]
    fn radial_bound_rejects_zero() {
        let f = RadialFunction::zeros(LogGrid::new(0.0, 1.0, 5).unwrap());
        assert!(matches!(radial_bound_check(&f, 2.0), Err(Error::Undefined(_))));
    }

    #[test]
    fn holder_of_constant_and_scaling() {
        let g = LogGrid::with_spacing(-1.0, 6.0, 0.05).unwrap();
        let c = RadialFunction::from_log_fn(g, |_| 2.0).unwrap();
        assert_eq!(holder_seminorm(&c, 0.25).unwrap(), 0.0);
        let hat = sample_from_closure(|r| (1.0 - r).max(0.0), &g).unwrap();
        let h = holder_seminorm(&hat, 0.25).unwrap();
        assert!(h >= 0.99);
        assert!((holder_seminorm(&hat.scaled(-3.0), 0.25).unwrap() - 3.0 * h).abs() < 1e-12);
    }

    #[test]
    fn log_inequality_preconditions() {
        let f = lions(5.0);
        assert!(log_inequality_probe(&f, 0.5, 1.0, 0.25).is_err());
        assert!(log_inequality_probe(&f, 1.0, 1.0, 0.25).is_ok());
        let a = log_inequality_probe(&f, 1.0, 1.0, 0.25).unwrap();
        let b = log_inequality_probe(&f, 2.0, 1.0, 0.25).unwrap();
        assert!(b.empirical_c <= a.empirical_c);
    }

    #[test]
    fn superlevel_of_plateau_disk() {
        let alpha = 6.0;
        let f = lions(alpha);
        let m = superlevel_measure(&f, (alpha / (2.0 * PI)).sqrt()).unwrap();
        assert!(m >= PI * (-2.0 * alpha).exp() * (1.0 - 1e-12));
        let l2 = l2_norm(&f);
        for eps in [0.1, 0.3, 0.5, 0.9] {
            assert!(eps * eps * superlevel_measure(&f, eps).unwrap() <= l2 * l2);
        }
        assert!(superlevel_measure(&f, 0.2).unwrap() >= superlevel_measure(&f, 0.4).unwrap());
    }

    #[test]
    fn bmo_average_matches_closed_form() {
        for alpha in [1.0, 2.0 * PI, 10.0] {
            let b = bmo_probe(alpha).unwrap();
            assert!(b.relative_error() < 1e-6, "{b:?}");
            assert_eq!(b.mean, 0.0);
        }
        assert!((bmo_closed_form(2.0 * PI) - 0.57943).abs() < 1e-5);
    }
}
