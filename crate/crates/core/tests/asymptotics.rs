use std::f64::consts::PI;

use orlicz_core::asymptotics::*;
use orlicz_core::inequalities::log_inequality_probe;
use orlicz_core::lions::{aligned_grid, gk_profile, lions_v, Profile};
use orlicz_core::radial::RadialFunction;
use orlicz_core::OrliczConfig;

#[test]
fn limit_sweep_brackets_and_converges() {
    let cfg = OrliczConfig::default();
    let t = orlicz_limit_sweep(&[10.0, 20.0, 40.0, 80.0], &cfg).unwrap();
    assert!(t.converged);
    let errors = t.errors().unwrap();
    assert!(errors.windows(2).all(|w| w[1] < w[0]));
    // roughly halving per doubling
    assert!(errors.windows(2).all(|w| w[1] / w[0] > 0.3 && w[1] / w[0] < 0.7));
    for (&alpha, &obs) in t.parameters.iter().zip(&t.observed) {
        let (lo, hi) = lions_orlicz_bracket(alpha, 1.0);
        assert!(obs >= lo - 1e-6 && obs <= hi + 1e-6);
    }
}

#[test]
fn tiny_alpha_bound() {
    let n = lions_orlicz_norm(0.01, &OrliczConfig::default()).unwrap();
    assert!(n <= 0.01f64.powf(0.25));
}

#[test]
fn pq_integral_examples() {
    assert!(pq_integral(1.0, 1.0, 20.0).unwrap() < 1e-3);
    let v: Vec<f64> = [10.0, 15.0, 20.0]
        .iter()
        .map(|&a| pq_integral(1.0, 1.0, a).unwrap())
        .collect();
    assert!(v.windows(2).all(|w| w[1] < w[0]));
    let slow: Vec<f64> = [10.0, 20.0]
        .iter()
        .map(|&a| pq_integral(1.9, 1.0, a).unwrap())
        .collect();
    assert!(slow[1] < slow[0] && slow[0] > v[0]);
}

#[test]
fn gk_profile_bounds() {
    let b = profile_norm_bounds(&gk_profile(), &[10.0, 20.0, 40.0], &OrliczConfig::default()).unwrap();
    assert!((b.lower - (1.0 + 0.5f64.sqrt()) / (4.0 * PI).sqrt()).abs() < 1e-3);
    assert!(b.lower <= b.upper);
    assert!(b.holds_at_tail(0.02));
    let zero = profile_norm_bounds(&Profile::zero(4.0, 33), &[10.0, 20.0, 40.0], &OrliczConfig::default()).unwrap();
    assert_eq!((zero.lower, zero.upper), (0.0, 0.0));
    assert!(zero.observed.observed.iter().all(|&v| v == 0.0));
}

#[test]
fn sum_of_orthogonal_bubbles_tends_to_max() {
    let cfg = OrliczConfig::default();
    let t = sum_orlicz_max_check(1.0, 2.0, &[8.0, 16.0, 32.0], &cfg).unwrap();
    assert!(t.observed.windows(2).all(|w| w[1] < w[0]));
    assert!((2.0 / (4.0 * PI).sqrt() - 0.56419).abs() < 1e-5);
    let single = sum_orlicz_norm(1.0, 0.0, 20.0, &cfg).unwrap();
    assert!((single - lions_orlicz_norm(20.0, &cfg).unwrap()).abs() < 1e-3 * single);
}

#[test]
fn cross_scale_positive_and_negative_controls() {
    let l_prime = |t: f64| if (0.0..=1.0).contains(&t) { 1.0 } else { 0.0 };
    let ns = [4, 8, 16, 32];
    let orth = cross_scale_vanishing(l_prime, l_prime, 1.0, |n| n as f64, |n| (n * n) as f64, &ns).unwrap();
    assert!(orth.converged);
    let close = cross_scale_vanishing(l_prime, l_prime, 1.0, |n| n as f64, |n| 2.0 * n as f64, &ns).unwrap();
    assert!(!close.converged);
    assert!(close.observed.last().unwrap() > &0.1);
    let zero = cross_scale_vanishing(|_| 0.0, l_prime, 1.0, |n| n as f64, |n| (n * n) as f64, &ns).unwrap();
    assert!(zero.observed.iter().all(|&v| v == 0.0));
}

#[test]
fn log_inequality_constant_is_uniform_on_lions_family() {
    let mut cs = Vec::new();
    for alpha in [5.0, 10.0, 20.0] {
        let grid = aligned_grid(alpha, alpha + 8.0, 0.25).unwrap();
        let f = RadialFunction::from_log_fn(grid, lions_v(alpha)).unwrap();
        cs.push(log_inequality_probe(&f, 1.0, 1.0, 0.25).unwrap().empirical_c);
    }
    assert!(cs.iter().all(|&c| c.is_finite() && c < 10.0), "{cs:?}");
}
