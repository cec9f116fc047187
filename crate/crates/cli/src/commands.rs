use std::f64::consts::PI;
use std::fs;
use std::path::PathBuf;

use clap::{Args, ValueEnum};
use rayon::prelude::*;

use orlicz_core::asymptotics::{
    critical_norm, cross_scale_vanishing, dirac_test, lions_orlicz_norm, pq_integral, sum_orlicz_norm, tail_integrals,
    DiracKind, Target, TrendReport,
};
use orlicz_core::decomposition::{decompose as run_decompose, DecompositionResult, ExtractionConfig, RadialSequence};
use orlicz_core::lions::{bubble_grid, bubble_values, gk_profile, lions_v, scaled_g, Profile};
use orlicz_core::orlicz::moser_ratio_probe;
use orlicz_core::radial::{norms, sample_from_closure, LogGrid};
use orlicz_core::verify::{criterion_index, run_criterion, CRITERIA, DEFAULT_SEED};
use orlicz_core::wave::{
    classify_regime, evolve, orlicz_snapshot_norm, total_energy, CauchyData, EvolveConfig, Mode, RGrid, Trajectory, CFL,
};
use orlicz_core::{orlicz_norm, OrliczConfig, RadialFunction};

use crate::output::{num, Sink};
use crate::Failure;

type Outcome = Result<(), Failure>;

fn ocfg(kappa: f64) -> Result<OrliczConfig, Failure> {
    let c = OrliczConfig::with_kappa(kappa);
    c.validate()?;
    Ok(c)
}

fn positive(name: &str, x: f64) -> Result<f64, Failure> {
    if x > 0.0 && x.is_finite() {
        Ok(x)
    } else {
        Err(Failure::usage(format!("--{name} must be positive, got {x}")))
    }
}

fn list<'a>(name: &str, v: &'a Option<Vec<f64>>) -> Result<&'a [f64], Failure> {
    match v {
        Some(v) if !v.is_empty() => {
            if v.windows(2).any(|w| w[1] <= w[0]) {
                return Err(Failure::usage(format!("--{name} must be increasing")));
            }
            Ok(v)
        }
        _ => Err(Failure::usage(format!(
            "--{name} needs a non-empty comma-separated list"
        ))),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Lions,
    Scaled,
    Sum,
    Bubble,
    File,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ProfileName {
    Lions,
    Gk,
}

impl ProfileName {
    fn profile(self) -> Profile {
        match self {
            Self::Lions => Profile::lions(),
            Self::Gk => gk_profile(),
        }
    }
}

#[derive(Debug, Args)]
pub struct NormArgs {
    #[arg(long, value_enum)]
    family: Family,
    #[arg(long, allow_negative_numbers = true)]
    alpha: Option<f64>,
    /// Dilation radius R of the `scaled` family, `f_alpha(x / R)`.
    #[arg(long)]
    radius: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    a: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    b: Option<f64>,
    #[arg(long, value_enum, default_value = "lions")]
    profile: ProfileName,
    /// CSV with columns s,v on a uniform grid, for the `file` family.
    #[arg(long)]
    file: Option<PathBuf>,
    #[arg(long, default_value_t = 1.0)]
    kappa: f64,
}

fn read_profile_file(path: &PathBuf) -> Result<RadialFunction, Failure> {
    let text = fs::read_to_string(path)?;
    let mut s = Vec::new();
    let mut v = Vec::new();
    for (no, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') || (no == 0 && line.starts_with(|c: char| c.is_alphabetic())) {
            continue;
        }
        let mut it = line.split(',').map(|x| x.trim().parse::<f64>());
        match (it.next(), it.next()) {
            (Some(Ok(a)), Some(Ok(b))) => {
                s.push(a);
                v.push(b);
            }
            _ => {
                return Err(Failure::usage(format!(
                    "{}: line {} is not `s,v`",
                    path.display(),
                    no + 1
                )))
            }
        }
    }
    if s.len() < 2 {
        return Err(Failure::usage("profile file needs at least two rows"));
    }
    let grid = LogGrid::new(s[0], s[s.len() - 1], s.len())?;
    let ds = grid.ds();
    if s.iter()
        .enumerate()
        .any(|(i, &x)| (x - grid.node(i)).abs() > 1e-9 * ds.max(1.0))
    {
        return Err(Failure::usage("profile file must use uniformly spaced s"));
    }
    Ok(RadialFunction::new(grid, v)?)
}

pub fn norm(a: &NormArgs, sink: &Sink) -> Outcome {
    let cfg = ocfg(a.kappa)?;
    let need = |name: &str, x: Option<f64>| x.ok_or_else(|| Failure::usage(format!("--{name} is required")));
    let (param, f) = match a.family {
        Family::Lions => {
            let alpha = positive("alpha", need("alpha", a.alpha)?)?;
            let grid = orlicz_core::lions::aligned_grid(alpha, alpha + 40.0, 1.0 / 16.0)?;
            (
                format!("alpha={alpha}"),
                RadialFunction::from_log_fn(grid, lions_v(alpha))?,
            )
        }
        Family::Scaled => {
            let alpha = positive("alpha", need("alpha", a.alpha)?)?;
            let radius = positive("radius", need("radius", a.radius)?)?;
            let shift = radius.ln();
            let grid = LogGrid::with_spacing(-2.0 - shift, alpha - shift + 40.0, 1.0 / 16.0)?;
            (
                format!("alpha={alpha};radius={radius}"),
                sample_from_closure(scaled_g(alpha, radius), &grid)?,
            )
        }
        Family::Sum => {
            let alpha = positive("alpha", need("alpha", a.alpha)?)?;
            let (ca, cb) = (need("a", a.a)?, need("b", a.b)?);
            let grid = orlicz_core::lions::aligned_grid(alpha, alpha * alpha + 40.0, 1.0 / 16.0)?;
            let (f1, f2) = (lions_v(alpha), lions_v(alpha * alpha));
            (
                format!("a={ca};b={cb};alpha={alpha}"),
                RadialFunction::from_log_fn(grid, |s| ca * f1(s) + cb * f2(s))?,
            )
        }
        Family::Bubble => {
            let alpha = positive("alpha", need("alpha", a.alpha)?)?;
            let psi = a.profile.profile();
            let grid = bubble_grid(alpha, &psi, 1.0 / 16.0, 40.0)?;
            (
                format!("alpha={alpha};profile={:?}", a.profile).to_lowercase(),
                bubble_values(alpha, &psi, &grid)?,
            )
        }
        Family::File => {
            let path = a.file.as_ref().ok_or_else(|| Failure::usage("--file is required"))?;
            (format!("file={}", path.display()), read_profile_file(path)?)
        }
    };
    let n = norms(&f);
    let orlicz = orlicz_norm(&f, &cfg)?;
    let family = format!("{:?}", a.family).to_lowercase();
    sink.write_csv(
        "norm",
        "family,param,l2,grad_l2,orlicz",
        &[format!(
            "{family},{param},{},{},{}",
            num(n.l2),
            num(n.grad_l2),
            num(orlicz)
        )],
    )?;
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Probe {
    /// `||f_alpha||_L` towards `1 / sqrt(4 pi)`.
    OrliczLimit,
    /// `I_alpha` towards 1 and `J_alpha` towards 1/3.
    TailIntegrals,
    /// The `(p, q)` integral towards 0.
    Pq,
    /// Gradient Dirac test with a Gaussian, towards 1.
    DiracGradient,
    /// Exponential Dirac test with a Gaussian, towards `2 pi`.
    DiracExponential,
    /// Trudinger-Moser ratio over `--betas`; `converged` flags growth.
    Moser,
    /// `||a f_alpha + b f_{alpha^2}||_L` towards `max(|a|, |b|) / sqrt(4 pi)`.
    SumMax,
    /// Cross-scale integral of `L'` at scales `(n, n^2)`, or `(n, 2n)` with `--close`.
    CrossScale,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, value_enum)]
    probe: Probe,
    #[arg(long, value_delimiter = ',')]
    alphas: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    betas: Option<Vec<f64>>,
    #[arg(long = "alpha-exp")]
    alpha_exp: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    p: f64,
    #[arg(long, default_value_t = 1.0)]
    q: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    a: f64,
    #[arg(long, default_value_t = 2.0, allow_negative_numbers = true)]
    b: f64,
    /// Non-orthogonal scales for `cross-scale`.
    #[arg(long)]
    close: bool,
    #[arg(long, default_value_t = 1.0)]
    kappa: f64,
    /// Exit with code 3 unless the trend is flagged as converged.
    #[arg(long)]
    assert: bool,
}

fn par_eval<F>(params: &[f64], f: F) -> Result<Vec<f64>, Failure>
where
    F: Fn(f64) -> orlicz_core::Result<f64> + Sync,
{
    // collect keeps parameter order whatever the scheduling
    Ok(params
        .par_iter()
        .map(|&p| f(p))
        .collect::<orlicz_core::Result<Vec<_>>>()?)
}

fn trend_rows(t: &TrendReport) -> Vec<String> {
    let target = match t.target {
        Target::Value(v) => num(v),
        Target::Infinity => "inf".into(),
    };
    t.parameters
        .iter()
        .zip(&t.observed)
        .map(|(p, o)| format!("{},{},{target},{}", num(*p), num(*o), t.converged))
        .collect()
}

pub fn sweep(a: &SweepArgs, sink: &Sink) -> Outcome {
    let cfg = ocfg(a.kappa)?;
    let gauss = |r: f64| (-r * r).exp();
    let (header, rows, converged) = match a.probe {
        Probe::TailIntegrals => {
            let alphas = list("alphas", &a.alphas)?;
            let pairs: Vec<(f64, f64)> = alphas
                .par_iter()
                .map(|&al| tail_integrals(al))
                .collect::<orlicz_core::Result<_>>()?;
            let ti = TrendReport::new(alphas.to_vec(), pairs.iter().map(|p| p.0).collect(), Target::Value(1.0))?;
            let tj = TrendReport::new(
                alphas.to_vec(),
                pairs.iter().map(|p| p.1).collect(),
                Target::Value(1.0 / 3.0),
            )?;
            let ok = ti.converged && tj.converged;
            let rows = alphas
                .iter()
                .zip(&pairs)
                .map(|(al, (i, j))| {
                    format!(
                        "{},{},{},{},{},{ok}",
                        num(*al),
                        num(*i),
                        num(1.0),
                        num(*j),
                        num(1.0 / 3.0)
                    )
                })
                .collect();
            ("parameter,i_observed,i_target,j_observed,j_target,converged", rows, ok)
        }
        probe => {
            let t = match probe {
                Probe::OrliczLimit => {
                    let al = list("alphas", &a.alphas)?;
                    TrendReport::new(
                        al.to_vec(),
                        par_eval(al, |x| lions_orlicz_norm(x, &cfg))?,
                        Target::Value(critical_norm()),
                    )?
                }
                Probe::Pq => {
                    let al = list("alphas", &a.alphas)?;
                    TrendReport::new(
                        al.to_vec(),
                        par_eval(al, |x| pq_integral(a.p, a.q, x))?,
                        Target::Value(0.0),
                    )?
                }
                Probe::DiracGradient => {
                    let al = list("alphas", &a.alphas)?;
                    let obs = par_eval(al, |x| dirac_test(x, gauss, DiracKind::Gradient))?;
                    TrendReport::new(al.to_vec(), obs, Target::Value(1.0))?
                }
                Probe::DiracExponential => {
                    let al = list("alphas", &a.alphas)?;
                    let obs = par_eval(al, |x| dirac_test(x, gauss, DiracKind::Exponential))?;
                    TrendReport::new(al.to_vec(), obs, Target::Value(2.0 * PI))?
                }
                Probe::Moser => {
                    let betas = list("betas", &a.betas)?;
                    let ae = positive(
                        "alpha-exp",
                        a.alpha_exp.ok_or_else(|| Failure::usage("--alpha-exp is required"))?,
                    )?;
                    let obs = par_eval(betas, |b| moser_ratio_probe(ae, b, &cfg).map(|r| r.ratio))?;
                    TrendReport::new(betas.to_vec(), obs, Target::Infinity)?
                }
                Probe::SumMax => {
                    let al = list("alphas", &a.alphas)?;
                    if al[0] < 2.0 {
                        return Err(Failure::usage("sum-max needs alphas >= 2"));
                    }
                    let obs = par_eval(al, |x| sum_orlicz_norm(a.a, a.b, x, &cfg))?;
                    TrendReport::new(
                        al.to_vec(),
                        obs,
                        Target::Value(a.a.abs().max(a.b.abs()) * critical_norm()),
                    )?
                }
                Probe::CrossScale => {
                    let al = list("alphas", &a.alphas)?;
                    let ns: Vec<usize> = al.iter().map(|&x| x as usize).collect();
                    if al.iter().any(|&x| x.fract() != 0.0 || x < 1.0) {
                        return Err(Failure::usage("cross-scale takes positive integer indices in --alphas"));
                    }
                    let lp = |t: f64| if (0.0..=1.0).contains(&t) { 1.0 } else { 0.0 };
                    if a.close {
                        cross_scale_vanishing(lp, lp, 1.0, |n| n as f64, |n| 2.0 * n as f64, &ns)?
                    } else {
                        cross_scale_vanishing(lp, lp, 1.0, |n| n as f64, |n| (n * n) as f64, &ns)?
                    }
                }
                Probe::TailIntegrals => unreachable!("handled above"),
            };
            ("parameter,observed,target,converged", trend_rows(&t), t.converged)
        }
    };
    sink.write_csv("sweep", header, &rows)?;
    if a.assert && !converged {
        return Err(Failure::numerical("sweep did not converge"));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SequenceName {
    Single,
    TwoOrthogonal,
    TwoNonorthogonal,
    Custom,
}

#[derive(Debug, Args)]
pub struct DecomposeArgs {
    #[arg(long, value_enum)]
    seq: SequenceName,
    /// Largest index; the sequence is sampled at nmax/2, 3nmax/4 and nmax.
    #[arg(long, default_value_t = 60)]
    nmax: usize,
    /// Terms `c*law` of a custom sum of Lions functions, law one of `n`,
    /// `Kn` or `n^P` (for example `1*n,0.5*n^2`).
    #[arg(long, value_delimiter = ',')]
    bubbles: Option<Vec<String>>,
    #[arg(long = "rem-tol", default_value_t = 0.01)]
    rem_tol: f64,
    #[arg(long = "l-max", default_value_t = 6)]
    l_max: usize,
    #[arg(long = "ortho-threshold", default_value_t = 2.0)]
    ortho_threshold: f64,
    #[arg(long, default_value_t = 1.0)]
    kappa: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Law {
    Linear(f64),
    Power(f64),
}

impl Law {
    fn eval(self, n: usize) -> f64 {
        match self {
            Law::Linear(k) => k * n as f64,
            Law::Power(p) => (n as f64).powf(p),
        }
    }
}

fn parse_term(t: &str) -> Result<(f64, Law), Failure> {
    let bad = || Failure::usage(format!("bad bubble term `{t}`; expected c*n, c*Kn or c*n^P"));
    let (c, law) = t.trim().split_once('*').ok_or_else(bad)?;
    let c: f64 = c.trim().parse().map_err(|_| bad())?;
    let law = law.trim();
    let law = if let Some(p) = law.strip_prefix("n^") {
        Law::Power(p.parse().map_err(|_| bad())?)
    } else if let Some(k) = law.strip_suffix('n') {
        Law::Linear(if k.is_empty() {
            1.0
        } else {
            k.parse().map_err(|_| bad())?
        })
    } else {
        return Err(bad());
    };
    let ok = match law {
        Law::Linear(k) => k > 0.0,
        Law::Power(p) => p > 0.0,
    };
    if !ok || !c.is_finite() {
        return Err(bad());
    }
    Ok((c, law))
}

fn summary_rows(r: &DecompositionResult) -> Vec<String> {
    r.bubbles
        .iter()
        .enumerate()
        .map(|(level, b)| {
            let step = r.steps.iter().rev().find(|s| s.level == level);
            let (rem, defect) = step.map_or((f64::NAN, f64::NAN), |s| (s.remainder_orlicz, s.stability_defect));
            format!(
                "{level},{},{},{},{}",
                num(b.scale_at_ref()),
                num(b.grad_norm),
                num(rem),
                num(defect)
            )
        })
        .collect()
}

pub fn decompose(a: &DecomposeArgs, sink: &Sink) -> Outcome {
    if a.nmax < 4 {
        return Err(Failure::usage("--nmax must be at least 4"));
    }
    let ns = vec![a.nmax / 2, 3 * a.nmax / 4, a.nmax];
    let seq = match a.seq {
        SequenceName::Single => RadialSequence::single(ns)?,
        SequenceName::TwoOrthogonal => RadialSequence::two_orthogonal(ns)?,
        SequenceName::TwoNonorthogonal => RadialSequence::two_nonorthogonal(ns)?,
        SequenceName::Custom => {
            let terms = a
                .bubbles
                .as_ref()
                .filter(|b| !b.is_empty())
                .ok_or_else(|| Failure::usage("--bubbles is required for a custom sequence"))?
                .iter()
                .map(|t| parse_term(t))
                .collect::<Result<Vec<_>, _>>()?;
            let top = terms.iter().map(|(_, l)| l.eval(a.nmax)).fold(0.0, f64::max);
            let ds = if top > 400.0 { 0.125 } else { 0.0625 };
            let grid = LogGrid::with_spacing(-2.0, top + 40.0, ds)?;
            RadialSequence::new(grid, ns, move |n, g| {
                let parts: Vec<_> = terms.iter().map(|&(c, l)| (c, lions_v(l.eval(n)))).collect();
                RadialFunction::from_log_fn(*g, |s| parts.iter().map(|(c, v)| c * v(s)).sum())
            })?
        }
    };
    let cfg = ExtractionConfig {
        rem_tol: a.rem_tol,
        l_max: a.l_max,
        ortho_threshold: a.ortho_threshold,
        ..ExtractionConfig::default()
    };
    let r = run_decompose(&seq, &cfg, &ocfg(a.kappa)?)?;
    eprintln!(
        "levels {}, stop {:?}, A0 {}, grad energy {}",
        r.levels(),
        r.stop,
        num(r.a0_estimate),
        num(r.grad_energy)
    );
    sink.write_csv(
        "decompose_summary",
        "level,scale_at_ref,profile_grad_norm,remainder_orlicz,stability_defect",
        &summary_rows(&r),
    )?;
    if sink.dir().is_some() {
        for (level, b) in r.bubbles.iter().enumerate() {
            let rows: Vec<String> = (0..b.profile.len())
                .map(|k| format!("{},{}", num(b.profile.node(k)), num(b.profile.values()[k])))
                .collect();
            sink.write_csv(&format!("decompose_profile_{level}"), "t,psi", &rows)?;
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DataName {
    Lions,
    Bump,
}

#[derive(Debug, Args)]
pub struct WaveArgs {
    #[arg(long, value_enum, default_value = "lions")]
    data: DataName,
    /// Amplitude of the data.
    #[arg(long, default_value_t = 0.3, allow_negative_numbers = true)]
    c: f64,
    #[arg(long, default_value_t = 8.0)]
    alpha: f64,
    /// Support radius of the `bump` data.
    #[arg(long, default_value_t = 1.0)]
    rho: f64,
    #[arg(long = "T", default_value_t = 1.0)]
    t_end: f64,
    #[arg(long = "R", default_value_t = 2.5)]
    radius: f64,
    #[arg(long, default_value_t = 4096)]
    nr: usize,
    /// Time step; defaults to the CFL limit dr / 2.
    #[arg(long)]
    dt: Option<f64>,
    /// Number of stored time samples (besides t = 0).
    #[arg(long, default_value_t = 32)]
    samples: usize,
    /// Also export the nonlinear trajectory as time,node,u,ut.
    #[arg(long)]
    trajectory: Option<PathBuf>,
    #[arg(long, default_value_t = 1.0)]
    kappa: f64,
}

fn energy_rows(u: &Trajectory, v: &Trajectory, grid: &RGrid, cfg: &OrliczConfig) -> Result<Vec<String>, Failure> {
    u.states
        .par_iter()
        .zip(&v.states)
        .map(|(a, b)| {
            let e = total_energy(a, grid)?;
            let gap = total_energy(&a.difference(b)?, grid)?.e_c;
            let snap = orlicz_snapshot_norm(b, grid, cfg)?;
            Ok(format!("{},{},{},{}", num(a.time), num(e.total), num(gap), num(snap)))
        })
        .collect()
}

pub fn wave(a: &WaveArgs, sink: &Sink) -> Outcome {
    let cfg = ocfg(a.kappa)?;
    let grid = RGrid::new(a.radius, a.nr)?;
    let data = match a.data {
        DataName::Lions => CauchyData::lions(a.c, a.alpha)?,
        DataName::Bump => CauchyData::bump(a.c, a.rho)?,
    };
    let dt = a.dt.unwrap_or(CFL * grid.dr());
    if a.samples == 0 {
        return Err(Failure::usage("--samples must be positive"));
    }
    let steps = (a.t_end / dt).ceil().max(1.0) as usize;
    let store_every = (steps / a.samples).max(1);
    let (regime, e0) = classify_regime(&data, &grid)?;
    eprintln!("regime {:?}, E0 {}", regime, num(e0));
    let run = |mode| {
        evolve(
            &data,
            &grid,
            &EvolveConfig {
                t_end: a.t_end,
                dt,
                mode,
                store_every,
            },
        )
    };
    let (u, v) = rayon::join(|| run(Mode::Nonlinear), || run(Mode::Linear));
    let (u, v) = (u?, v?);
    sink.write_csv(
        "wave",
        "t,E_total,E_c_gap,orlicz_snapshot",
        &energy_rows(&u, &v, &grid, &cfg)?,
    )?;
    eprintln!("relative energy drift {}", num(u.energy_drift()?));
    if let Some(path) = &a.trajectory {
        use std::io::Write;
        let mut w = std::io::BufWriter::new(fs::File::create(path)?);
        writeln!(w, "time,node,u,ut")?;
        for s in &u.states {
            for i in 0..grid.n_r() {
                writeln!(w, "{},{i},{},{}", num(s.time), num(s.u[i]), num(s.ut[i]))?;
            }
        }
        w.flush()?;
    }
    Ok(())
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Comma-separated criterion names; all when absent.
    #[arg(long, value_delimiter = ',')]
    only: Option<Vec<String>>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
}

pub fn verify(a: &VerifyArgs) -> Outcome {
    let names: Vec<&str> = match &a.only {
        Some(v) => {
            for n in v {
                if criterion_index(n).is_none() {
                    return Err(Failure::usage(format!(
                        "unknown criterion `{n}`; known: {}",
                        CRITERIA.join(", ")
                    )));
                }
            }
            v.iter().map(String::as_str).collect()
        }
        None => CRITERIA.to_vec(),
    };
    let mut failed = 0;
    for n in names {
        let o = run_criterion(n, a.seed)?;
        println!("{}", o.line());
        failed += usize::from(!o.passed);
    }
    if failed > 0 {
        return Err(Failure::verification(format!("{failed} criterion(s) failed")));
    }
    Ok(())
}
