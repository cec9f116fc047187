//! Scale and profile extraction for bounded radial sequences.
//!
//! Each level estimates `A = limsup ||r_n||_L` on a trailing window, picks
//! the scale `alpha_n = argmax_{s > 0} 4 (v_n(s) / A)^2 - s`, reads the
//! rescaled functions `psi_n(t) = sqrt(2 pi / alpha_n) v_n(alpha_n t)` on a
//! coarse `t`-grid, averages them over the reference indices and subtracts
//! the resulting bubble from every member.
//!
//! "n -> infinity" is replaced by the trailing reference indices; there is
//! no subsequence search. Sampling `psi_n` on a coarse grid replaces the weak
//! `L^2` limit of `psi_n'` by its projection onto cellwise constants, which
//! is what separates bubbles living at orthogonal scales.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::lions::{bubble_values, lions_v, Profile};
use crate::orlicz::{orlicz_norm, OrliczConfig};
use crate::radial::{grad_l2_norm, norms, tail_l2_mass, LogGrid, RadialFunction};

type Generator = Arc<dyn Fn(usize, &LogGrid) -> Result<RadialFunction> + Send + Sync>;

/// Scale `alpha_n` of one term as a function of `n`.
pub type ScaleLaw = fn(usize) -> f64;

/// `n -> u_n` on a shared grid, sampled at increasing indices.
#[derive(Clone)]
pub struct RadialSequence {
    grid: LogGrid,
    ns: Vec<usize>,
    generator: Generator,
}

impl fmt::Debug for RadialSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RadialSequence")
            .field("grid", &self.grid)
            .field("ns", &self.ns)
            .finish_non_exhaustive()
    }
}

impl RadialSequence {
    pub fn new<G>(grid: LogGrid, ns: Vec<usize>, generator: G) -> Result<Self>
    where
        G: Fn(usize, &LogGrid) -> Result<RadialFunction> + Send + Sync + 'static,
    {
        if ns.is_empty() || ns.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidArgument(
                "sequence indices must be non-empty and increasing".into(),
            ));
        }
        Ok(Self {
            grid,
            ns,
            generator: Arc::new(generator),
        })
    }

    /// `u_n(r) = sum_j c_j f_{alpha_j(n)}(r)`.
    pub fn lions_sum(grid: LogGrid, ns: Vec<usize>, terms: Vec<(f64, ScaleLaw)>) -> Result<Self> {
        Self::new(grid, ns, move |n, g| {
            let parts: Vec<_> = terms.iter().map(|&(c, a)| (c, lions_v(a(n)))).collect();
            RadialFunction::from_log_fn(*g, |s| parts.iter().map(|(c, v)| c * v(s)).sum())
        })
    }

    /// `u_n = f_n`.
    pub fn single(ns: Vec<usize>) -> Result<Self> {
        let top = *ns.last().unwrap_or(&1) as f64;
        let grid = LogGrid::with_spacing(-2.0, top + 40.0, 1.0 / 16.0)?;
        Self::lions_sum(grid, ns, vec![(1.0, |n| n as f64)])
    }

    /// `u_n = f_n + f_{n^2}`: two orthogonal scales.
    pub fn two_orthogonal(ns: Vec<usize>) -> Result<Self> {
        let top = *ns.last().unwrap_or(&1) as f64;
        let grid = LogGrid::with_spacing(-2.0, top * top + 40.0, 1.0 / 8.0)?;
        Self::lions_sum(grid, ns, vec![(1.0, |n| n as f64), (1.0, |n| (n * n) as f64)])
    }

    /// `u_n = f_n + f_{2n}`: comparable scales that share one profile.
    pub fn two_nonorthogonal(ns: Vec<usize>) -> Result<Self> {
        let top = *ns.last().unwrap_or(&1) as f64;
        let grid = LogGrid::with_spacing(-2.0, 2.0 * top + 40.0, 1.0 / 16.0)?;
        Self::lions_sum(grid, ns, vec![(1.0, |n| n as f64), (1.0, |n| 2.0 * n as f64)])
    }

    pub fn grid(&self) -> &LogGrid {
        &self.grid
    }

    pub fn ns(&self) -> &[usize] {
        &self.ns
    }

    pub fn member(&self, n: usize) -> Result<RadialFunction> {
        let f = (self.generator)(n, &self.grid)?;
        if f.grid() != &self.grid {
            return Err(Error::InvalidArgument(format!(
                "member {n} is not sampled on the sequence grid"
            )));
        }
        Ok(f)
    }

    pub fn members(&self) -> Result<Vec<RadialFunction>> {
        self.ns.iter().map(|&n| self.member(n)).collect()
    }

    /// `sup_n ||u_n||_{H^1}` over the sampled indices.
    pub fn h1_bound(&self) -> Result<f64> {
        Ok(self.members()?.iter().map(|f| norms(f).h1).fold(0.0, f64::max))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExtractionConfig {
    /// Trailing indices used for the limsup estimate of `A`.
    pub a0_window: usize,
    /// Trailing indices standing in for `n -> infinity`.
    pub ref_window: usize,
    /// Minimum `|log(beta_n / alpha_n)|` at the last index for two scales to
    /// count as orthogonal.
    pub ortho_threshold: f64,
    /// Maximum number of extraction steps (new levels and merges).
    pub l_max: usize,
    /// Stop when the remainder Orlicz norm falls below this.
    pub rem_tol: f64,
    /// Spacing of the profile grid.
    pub profile_dt: f64,
    /// Cap on the profile grid length `T`.
    pub profile_t_cap: f64,
    /// Radius for the compactness-at-infinity gate.
    pub compact_radius: f64,
    /// Tail mass above which a sequence counts as non-compact, relative to
    /// its `H^1` bound.
    pub compact_tol: f64,
}

impl Default for ExtractionConfig {
    fn default() -> Self {
        Self {
            a0_window: 3,
            ref_window: 3,
            ortho_threshold: 2.0,
            l_max: 6,
            rem_tol: 0.01,
            profile_dt: 1.0 / 8.0,
            profile_t_cap: 64.0,
            compact_radius: std::f64::consts::E,
            compact_tol: 1e-3,
        }
    }
}

impl ExtractionConfig {
    pub fn validate(&self, len: usize) -> Result<()> {
        if self.a0_window == 0 || self.ref_window == 0 || self.l_max == 0 {
            return Err(Error::InvalidArgument("windows and l_max must be positive".into()));
        }
        if self.a0_window > len || self.ref_window > len {
            return Err(Error::InvalidArgument(format!(
                "window ({} / {}) exceeds the {len} sampled indices",
                self.a0_window, self.ref_window
            )));
        }
        let positive = [
            self.ortho_threshold,
            self.rem_tol,
            self.profile_dt,
            self.profile_t_cap,
            self.compact_radius,
            self.compact_tol,
        ];
        if positive.iter().any(|x| !(*x > 0.0) || !x.is_finite()) {
            return Err(Error::InvalidArgument("extraction tolerances must be positive".into()));
        }
        Ok(())
    }
}

/// `max ||u_n||_L` over the last `window` members.
pub fn estimate_a0(members: &[RadialFunction], window: usize, ocfg: &OrliczConfig) -> Result<f64> {
    if window == 0 || window > members.len() {
        return Err(Error::InvalidArgument(format!(
            "a0 window {window} does not fit {} members",
            members.len()
        )));
    }
    members[members.len() - window..]
        .iter()
        .try_fold(0.0, |m: f64, f| Ok(m.max(orlicz_norm(f, ocfg)?)))
}

/// Result of [`detect_scale`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaleDetection {
    pub alpha: f64,
    pub w_max: f64,
    /// `|v(alpha)| < (A / 2) sqrt(alpha)`: the lower bound of the
    /// concentration corollary fails at the detected scale.
    pub degenerate: bool,
}

/// Leftmost grid argmax over `s > 0` of `W(s) = 4 (v(s) / A)^2 - s`.
pub fn detect_scale(f: &RadialFunction, a0: f64) -> Result<ScaleDetection> {
    if !(a0 > 0.0) {
        return Err(Error::InvalidArgument(format!("A0 must be positive, got {a0}")));
    }
    let mut best: Option<(usize, f64)> = None;
    for (i, (s, v)) in f.grid().nodes().zip(f.values()).enumerate() {
        if s <= 0.0 {
            continue;
        }
        let w = 4.0 * (v / a0).powi(2) - s;
        if best.is_none_or(|(_, b)| w > b) {
            best = Some((i, w));
        }
    }
    match best {
        Some((i, w)) if w > 0.0 => {
            let alpha = f.grid().node(i);
            Ok(ScaleDetection {
                alpha,
                w_max: w,
                degenerate: f.values()[i].abs() < 0.5 * a0 * alpha.sqrt(),
            })
        }
        _ => Err(Error::NoConcentration),
    }
}

/// Profile-frame sampling grid: `t_k = k dt`, `k = 0..=len-1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TGrid {
    pub dt: f64,
    pub len: usize,
}

impl TGrid {
    /// Largest grid with spacing `dt` on `[0, min(t_end, cap)]`.
    pub fn covering(t_end: f64, dt: f64, cap: f64) -> Result<Self> {
        let k = (t_end.min(cap) / dt + 1e-9).floor() as usize;
        if k < 1 {
            return Err(Error::InvalidArgument(format!(
                "profile frame [0, {t_end}] holds no cell of width {dt}"
            )));
        }
        Ok(Self { dt, len: k + 1 })
    }

    pub fn t_max(&self) -> f64 {
        self.dt * (self.len - 1) as f64
    }
}

/// `psi_n(t_k) = sqrt(2 pi / alpha_n) v_n(alpha_n t_k)`.
pub fn rescale_to_profile_frame(f: &RadialFunction, alpha: f64, t_grid: &TGrid) -> Result<Vec<f64>> {
    if !(alpha > 0.0) {
        return Err(Error::InvalidArgument(format!("scale must be positive, got {alpha}")));
    }
    let amp = (2.0 * std::f64::consts::PI / alpha).sqrt();
    Ok((0..t_grid.len)
        .map(|k| amp * f.value_at(alpha * k as f64 * t_grid.dt))
        .collect())
}

/// Averages the rescaled samples and re-integrates the averaged increments
/// from `psi(0) = 0`.
pub fn extract_profile(samples: &[Vec<f64>], t_grid: &TGrid) -> Result<Profile> {
    if samples.is_empty() {
        return Err(Error::InvalidArgument(
            "at least one reference index is required".into(),
        ));
    }
    if samples.iter().any(|s| s.len() != t_grid.len) {
        return Err(Error::InvalidArgument("samples do not match the profile grid".into()));
    }
    let m = samples.len() as f64;
    let mean: Vec<f64> = (0..t_grid.len)
        .map(|k| samples.iter().map(|s| s[k]).sum::<f64>() / m)
        .collect();
    let values: Vec<f64> = mean.iter().map(|v| v - mean[0]).collect();
    let profile = Profile::from_samples(t_grid.t_max(), values)?;
    if profile.grad_norm() == 0.0 {
        return Err(Error::EmptyProfile);
    }
    Ok(profile)
}

/// `f - g_{alpha, psi}` on the grid of `f`.
pub fn subtract_bubble(f: &RadialFunction, alpha: f64, psi: &Profile) -> Result<RadialFunction> {
    f.sub(&bubble_values(alpha, psi, f.grid())?)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrthogonalityReport {
    pub orthogonal: bool,
    /// `|log(beta_n / alpha_n)|` at the last index.
    pub margin: f64,
    /// The log-ratio grows (non-strictly) along the samples.
    pub increasing: bool,
}

pub fn check_orthogonality(alpha: &[f64], beta: &[f64], threshold: f64) -> Result<OrthogonalityReport> {
    if alpha.len() != beta.len() || alpha.is_empty() {
        return Err(Error::InvalidArgument(
            "scale samples must have the same non-zero length".into(),
        ));
    }
    if alpha.iter().chain(beta).any(|a| !(*a > 0.0)) {
        return Err(Error::InvalidArgument("scales must be positive".into()));
    }
    let logs: Vec<f64> = alpha.iter().zip(beta).map(|(a, b)| (b / a).ln().abs()).collect();
    let margin = *logs.last().expect("non-empty");
    let increasing = logs.windows(2).all(|w| w[1] >= w[0] - 1e-12);
    Ok(OrthogonalityReport {
        orthogonal: margin >= threshold && increasing,
        margin,
        increasing,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompactnessReport {
    pub radii: Vec<f64>,
    /// `tails[i][j]` is the tail mass of member `i` outside radius `j`.
    pub tails: Vec<Vec<f64>>,
    /// Largest tail over the trailing members, per radius.
    pub sup_tail: Vec<f64>,
    pub passes: bool,
}

/// Tail masses over `(n, R)`; passes when the trailing sup is
/// non-increasing in `R` and ends below `tol`.
pub fn check_compactness(seq: &RadialSequence, radii: &[f64], window: usize, tol: f64) -> Result<CompactnessReport> {
    if radii.is_empty() || radii.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidArgument("radii must be non-empty and increasing".into()));
    }
    let members = seq.members()?;
    if window == 0 || window > members.len() {
        return Err(Error::InvalidArgument(format!(
            "window {window} does not fit the sequence"
        )));
    }
    let tails = members
        .iter()
        .map(|f| {
            radii
                .iter()
                .map(|&r| Ok(tail_l2_mass(f, r)?.value))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let sup_tail: Vec<f64> = (0..radii.len())
        .map(|j| tails[tails.len() - window..].iter().map(|t| t[j]).fold(0.0, f64::max))
        .collect();
    let passes = sup_tail.windows(2).all(|w| w[1] <= w[0]) && *sup_tail.last().expect("non-empty") <= tol;
    Ok(CompactnessReport {
        radii: radii.to_vec(),
        tails,
        sup_tail,
        passes,
    })
}

/// One extracted level.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtractedBubble {
    /// Detected scale at every sampled index.
    pub scales: Vec<f64>,
    pub profile: Profile,
    pub grad_norm: f64,
    /// How many later detections were folded into this level.
    pub merges: usize,
}

impl ExtractedBubble {
    pub fn scale_at_ref(&self) -> f64 {
        *self.scales.last().expect("scales are sampled at every index")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepKind {
    NewLevel,
    Merge,
}

/// Bookkeeping after one extraction step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepRecord {
    pub kind: StepKind,
    /// Index of the level created or updated.
    pub level: usize,
    /// `A` of the remainder after the step.
    pub remainder_orlicz: f64,
    /// `| ||grad u_n||^2 - sum ||psi_j'||^2 - ||grad r_n||^2 |` at the last index.
    pub stability_defect: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    ZeroSequence,
    RemainderSmall,
    NoConcentration,
    /// A detection folded into an existing level no longer lowered `A`.
    Saturated,
    LevelCap,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecompositionResult {
    pub ns: Vec<usize>,
    pub bubbles: Vec<ExtractedBubble>,
    pub steps: Vec<StepRecord>,
    pub a0_estimate: f64,
    /// `||grad u_n||^2` at the last index.
    pub grad_energy: f64,
    /// `sum_j A_j^2` over the `A` estimates that led to a step; bounded by a
    /// multiple of `||grad u_n||^2`.
    pub a_budget: f64,
    pub stop: StopReason,
    pub remainders: Vec<RadialFunction>,
}

impl DecompositionResult {
    pub fn levels(&self) -> usize {
        self.bubbles.len()
    }

    /// Remainder norm after each step.
    pub fn remainder_orlicz(&self) -> Vec<f64> {
        self.steps.iter().map(|s| s.remainder_orlicz).collect()
    }

    pub fn stability_defect(&self) -> Vec<f64> {
        self.steps.iter().map(|s| s.stability_defect).collect()
    }

    pub fn final_remainder_orlicz(&self) -> f64 {
        self.steps.last().map_or(self.a0_estimate, |s| s.remainder_orlicz)
    }

    pub fn final_stability_defect(&self) -> f64 {
        self.steps.last().map_or(0.0, |s| s.stability_defect)
    }
}

struct Extractor<'a> {
    grid: LogGrid,
    cfg: &'a ExtractionConfig,
}

impl Extractor<'_> {
    fn ref_range(&self, len: usize) -> std::ops::Range<usize> {
        len - self.cfg.ref_window..len
    }

    /// Profile grid shared by the reference indices at these scales.
    fn t_grid(&self, scales: &[f64]) -> Result<TGrid> {
        let top = scales[self.ref_range(scales.len())].iter().cloned().fold(0.0, f64::max);
        TGrid::covering(self.grid.s_max() / top, self.cfg.profile_dt, self.cfg.profile_t_cap)
    }

    fn profile_at(&self, members: &[RadialFunction], scales: &[f64]) -> Result<Profile> {
        let t_grid = self.t_grid(scales)?;
        let samples = self
            .ref_range(members.len())
            .map(|i| rescale_to_profile_frame(&members[i], scales[i], &t_grid))
            .collect::<Result<Vec<_>>>()?;
        extract_profile(&samples, &t_grid)
    }
}

/// Runs the extraction loop on `seq`.
pub fn decompose(seq: &RadialSequence, cfg: &ExtractionConfig, ocfg: &OrliczConfig) -> Result<DecompositionResult> {
    cfg.validate(seq.ns().len())?;
    let members = seq.members()?;
    let last = members.len() - 1;
    let grad_energy = grad_l2_norm(&members[last]).powi(2);

    let h1 = members.iter().map(|f| norms(f).h1).fold(0.0, f64::max);
    let gate = check_compactness(
        seq,
        &[cfg.compact_radius],
        cfg.a0_window,
        cfg.compact_tol * h1.max(f64::MIN_POSITIVE),
    )?;
    if !gate.passes {
        return Err(Error::NotCompact { tail: gate.sup_tail[0] });
    }

    let a0 = estimate_a0(&members, cfg.a0_window, ocfg)?;
    let mut result = DecompositionResult {
        ns: seq.ns().to_vec(),
        bubbles: Vec::new(),
        steps: Vec::new(),
        a0_estimate: a0,
        grad_energy,
        a_budget: 0.0,
        stop: StopReason::ZeroSequence,
        remainders: members.clone(),
    };
    if a0 == 0.0 {
        return Ok(result);
    }

    let ex = Extractor { grid: *seq.grid(), cfg };
    let mut rem = members.clone();
    let mut a = a0;
    result.stop = StopReason::LevelCap;
    for _ in 0..cfg.l_max {
        if a <= cfg.rem_tol {
            result.stop = StopReason::RemainderSmall;
            break;
        }
        let scales = match rem
            .iter()
            .map(|f| detect_scale(f, a).map(|d| d.alpha))
            .collect::<Result<Vec<_>>>()
        {
            Ok(s) => s,
            Err(Error::NoConcentration) => {
                result.stop = StopReason::NoConcentration;
                break;
            }
            Err(e) => return Err(e),
        };

        // fold into an existing level when the new scale is comparable to it
        let partner = result.bubbles.iter().position(|b| {
            !check_orthogonality(&b.scales, &scales, cfg.ortho_threshold)
                .map(|o| o.orthogonal)
                .unwrap_or(false)
        });

        let (kind, level, profile, candidate) = match partner {
            Some(j) => {
                let old = &result.bubbles[j];
                let with_old = rem
                    .iter()
                    .zip(&old.scales)
                    .map(|(r, &al)| r.add(&bubble_values(al, &old.profile, r.grid())?))
                    .collect::<Result<Vec<_>>>()?;
                let profile = ex.profile_at(&with_old, &old.scales)?;
                let candidate = with_old
                    .iter()
                    .zip(&old.scales)
                    .map(|(f, &al)| subtract_bubble(f, al, &profile))
                    .collect::<Result<Vec<_>>>()?;
                (StepKind::Merge, j, profile, candidate)
            }
            None => {
                let profile = ex.profile_at(&rem, &scales)?;
                let candidate = rem
                    .iter()
                    .zip(&scales)
                    .map(|(f, &al)| subtract_bubble(f, al, &profile))
                    .collect::<Result<Vec<_>>>()?;
                (StepKind::NewLevel, result.bubbles.len(), profile, candidate)
            }
        };

        let next = estimate_a0(&candidate, cfg.a0_window, ocfg)?;
        if next >= a {
            if kind == StepKind::Merge {
                // the residual carries nothing more at that scale
                result.stop = StopReason::Saturated;
                break;
            }
            return Err(Error::Stagnation {
                level,
                previous: a,
                current: next,
            });
        }
        rem = candidate;
        match kind {
            StepKind::Merge => {
                let b = &mut result.bubbles[level];
                b.grad_norm = profile.grad_norm();
                b.profile = profile;
                b.merges += 1;
            }
            StepKind::NewLevel => result.bubbles.push(ExtractedBubble {
                scales,
                grad_norm: profile.grad_norm(),
                profile,
                merges: 0,
            }),
        }
        result.a_budget += a * a;

        let extracted: f64 = result.bubbles.iter().map(|b| b.grad_norm.powi(2)).sum();
        let defect = (grad_energy - extracted - grad_l2_norm(&rem[last]).powi(2)).abs();
        result.steps.push(StepRecord {
            kind,
            level,
            remainder_orlicz: next,
            stability_defect: defect,
        });
        a = next;
    }
    if result.stop == StopReason::LevelCap && a <= cfg.rem_tol {
        result.stop = StopReason::RemainderSmall;
    }
    result.remainders = rem;
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lions::{gk_profile, lions_f};
    use crate::radial::sample_from_closure;

    #[test]
    fn detects_the_lions_scale() {
        let grid = LogGrid::with_spacing(-2.0, 60.0, 1.0 / 16.0).unwrap();
        let f = sample_from_closure(lions_f(20.0), &grid).unwrap();
        let a0 = crate::asymptotics::critical_norm();
        let d = detect_scale(&f, a0).unwrap();
        assert_eq!(d.alpha, 20.0);
        assert!(!d.degenerate);
        // W is invariant under (f, A) -> (c f, c A)
        assert_eq!(detect_scale(&f.scaled(2.0), 2.0 * a0).unwrap().alpha, 20.0);
        assert_eq!(
            detect_scale(&RadialFunction::zeros(grid), a0),
            Err(Error::NoConcentration)
        );
    }

    #[test]
    fn lions_rescales_to_l() {
        let grid = LogGrid::with_spacing(-2.0, 60.0, 1.0 / 16.0).unwrap();
        let f = sample_from_closure(lions_f(20.0), &grid).unwrap();
        let tg = TGrid::covering(3.0, 0.125, 64.0).unwrap();
        let psi = rescale_to_profile_frame(&f, 20.0, &tg).unwrap();
        let l = Profile::lions();
        for (k, p) in psi.iter().enumerate() {
            assert!((p - l.eval(k as f64 * 0.125)).abs() < 1e-12);
        }
    }

    #[test]
    fn averaging_identical_samples_is_identity() {
        let tg = TGrid::covering(2.0, 0.125, 64.0).unwrap();
        let l: Vec<f64> = (0..tg.len).map(|k| (k as f64 * 0.125).min(1.0)).collect();
        let p = extract_profile(&[l.clone(), l.clone()], &tg).unwrap();
        assert_eq!(p.values(), &l[..]);
        let zero = vec![0.0; tg.len];
        assert_eq!(extract_profile(&[zero], &tg), Err(Error::EmptyProfile));
    }

    #[test]
    fn subtracting_a_bubble_from_itself_leaves_zero() {
        let grid = LogGrid::with_spacing(-2.0, 100.0, 1.0 / 16.0).unwrap();
        let g = gk_profile();
        let b = bubble_values(10.0, &g, &grid).unwrap();
        assert!(subtract_bubble(&b, 10.0, &g).unwrap().is_zero());
    }

    #[test]
    fn orthogonality_examples() {
        let n: Vec<f64> = [20.0, 30.0, 40.0].to_vec();
        let sq: Vec<f64> = n.iter().map(|x| x * x).collect();
        let dbl: Vec<f64> = n.iter().map(|x| 2.0 * x).collect();
        let o = check_orthogonality(&n, &sq, 2.0).unwrap();
        assert!(o.orthogonal && (o.margin - 40f64.ln()).abs() < 1e-12);
        let o = check_orthogonality(&n, &dbl, 2.0).unwrap();
        assert!(!o.orthogonal && (o.margin - 2f64.ln()).abs() < 1e-12);
        assert_eq!(check_orthogonality(&n, &n, 2.0).unwrap().margin, 0.0);
    }

    #[test]
    fn window_larger_than_sequence_is_rejected() {
        let seq = RadialSequence::single(vec![10, 20]).unwrap();
        let cfg = ExtractionConfig::default();
        assert!(decompose(&seq, &cfg, &OrliczConfig::default()).is_err());
    }
}
