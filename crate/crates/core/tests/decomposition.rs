use orlicz_core::asymptotics::critical_norm;
use orlicz_core::decomposition::*;
use orlicz_core::lions::{gk_profile, lions_v, Profile};
use orlicz_core::radial::{grad_l2_norm, LogGrid, RadialFunction};
use orlicz_core::{Error, OrliczConfig};

fn run(seq: &RadialSequence) -> DecompositionResult {
    decompose(seq, &ExtractionConfig::default(), &OrliczConfig::default()).unwrap()
}

#[test]
fn single_bubble_is_reconstructed() {
    let r = run(&RadialSequence::single(vec![30, 45, 60]).unwrap());
    assert_eq!(r.levels(), 1);
    let b = &r.bubbles[0];
    assert!((b.grad_norm - 1.0).abs() < 0.1);
    assert!((b.scale_at_ref() - 60.0).abs() < 1.0);
    assert!(r.final_remainder_orlicz() < 0.05 * r.a0_estimate);
    assert!(r.final_stability_defect() < 0.05 * r.grad_energy);
    // the first level carries the largest A
    assert!(r.remainder_orlicz().iter().all(|&a| a <= r.a0_estimate));
}

#[test]
fn orthogonal_bubbles_give_two_levels() {
    let r = run(&RadialSequence::two_orthogonal(vec![20, 30, 40]).unwrap());
    assert_eq!(r.levels(), 2);
    let mut scales: Vec<f64> = r.bubbles.iter().map(|b| b.scale_at_ref()).collect();
    scales.sort_by(f64::total_cmp);
    assert!(
        (scales[0] - 40.0).abs() < 1.0 && (scales[1] - 1600.0).abs() < 2.0,
        "{scales:?}"
    );
    assert!((scales[1] / scales[0]).ln() >= 2.0);
    let o = check_orthogonality(&r.bubbles[0].scales, &r.bubbles[1].scales, 2.0).unwrap();
    assert!(o.orthogonal);
    // A_0 follows the max law, close to 1 / sqrt(4 pi)
    assert!((r.a0_estimate / critical_norm() - 1.0).abs() < 0.3);
    assert!(r.a_budget <= 2.0 * r.grad_energy);
}

#[test]
fn non_orthogonal_bubbles_merge() {
    let r = run(&RadialSequence::two_nonorthogonal(vec![20, 30, 40]).unwrap());
    assert_eq!(r.levels(), 1);
    let target = gk_profile().grad_norm();
    assert!((r.bubbles[0].grad_norm - target).abs() < 0.1 * target);
}

#[test]
fn zero_sequence_is_empty() {
    let grid = LogGrid::with_spacing(-2.0, 50.0, 0.125).unwrap();
    let seq = RadialSequence::new(grid, vec![10, 20, 30], |_, g| Ok(RadialFunction::zeros(*g))).unwrap();
    let r = run(&seq);
    assert_eq!(r.levels(), 0);
    assert_eq!(r.a0_estimate, 0.0);
    assert_eq!(r.stop, StopReason::ZeroSequence);
}

#[test]
fn a0_of_lions_sequence_approaches_critical_norm() {
    let seq = RadialSequence::single(vec![40, 50, 60]).unwrap();
    let a0 = estimate_a0(&seq.members().unwrap(), 3, &OrliczConfig::default()).unwrap();
    assert!((a0 / critical_norm() - 1.0).abs() < 0.05, "{a0}");
}

#[test]
fn scale_detection_is_invariant_under_profile_scaling() {
    let alpha = 30.0;
    let grid = LogGrid::with_spacing(-2.0, 70.0, 1.0 / 16.0).unwrap();
    let a0 = critical_norm();
    let v = lions_v(alpha);
    let once = RadialFunction::from_log_fn(grid, v).unwrap();
    let twice = RadialFunction::from_log_fn(grid, |s| 2.0 * v(s)).unwrap();
    assert_eq!(detect_scale(&once, a0).unwrap().alpha, alpha);
    assert_eq!(detect_scale(&twice, a0).unwrap().alpha, alpha);
    assert!(matches!(
        detect_scale(&RadialFunction::zeros(grid), a0),
        Err(Error::NoConcentration)
    ));
}

#[test]
fn subtracting_the_small_scale_leaves_the_large_one() {
    let n = 30.0;
    let grid = LogGrid::with_spacing(-2.0, n * n + 40.0, 0.125).unwrap();
    let (small, large) = (lions_v(n), lions_v(n * n));
    let u = RadialFunction::from_log_fn(grid, |s| small(s) + large(s)).unwrap();
    let rem = subtract_bubble(&u, n, &Profile::lions()).unwrap();
    let expect = grad_l2_norm(&RadialFunction::from_log_fn(grid, large).unwrap());
    assert!(
        (grad_l2_norm(&rem) - expect).abs() < 0.05,
        "{} vs {expect}",
        grad_l2_norm(&rem)
    );
    // Pythagoras: 1 + |grad r|^2 against |grad u|^2
    let lhs = grad_l2_norm(&u).powi(2);
    assert!((lhs - 1.0 - grad_l2_norm(&rem).powi(2)).abs() < 0.25 * lhs);
}

#[test]
fn compactness_gate() {
    let seq = RadialSequence::single(vec![10, 20, 30]).unwrap();
    let ok = check_compactness(&seq, &[1.0, 2.0, 4.0], 3, 1e-12).unwrap();
    assert!(ok.passes);
    assert!(ok.sup_tail.iter().all(|&t| t == 0.0));

    // a bump sliding off to infinity in |x|
    let grid = LogGrid::with_spacing(-12.0, 4.0, 1.0 / 16.0).unwrap();
    let drifting = RadialSequence::new(grid, vec![2, 4, 8], |n, g| {
        RadialFunction::from_log_fn(*g, |s| (-(s + n as f64).powi(2)).exp())
    })
    .unwrap();
    assert!(!check_compactness(&drifting, &[1.0, 2.0, 4.0], 3, 1e-3).unwrap().passes);
    let cfg = ExtractionConfig::default();
    assert!(matches!(
        decompose(&drifting, &cfg, &OrliczConfig::default()),
        Err(Error::NotCompact { .. })
    ));
}
