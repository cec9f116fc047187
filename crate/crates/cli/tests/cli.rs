use std::fs;
use std::process::{Command, Output};

fn lab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_orlicz-lab"))
        .args(args)
        .env_remove("ORLICZ_LAB_OUT_DIR")
        .output()
        .unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn rows(o: &Output) -> Vec<Vec<String>> {
    stdout(o)
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(String::from).collect())
        .collect()
}

fn field(row: &[String], i: usize) -> f64 {
    row[i].parse().unwrap()
}

#[test]
fn norm_of_lions_family() {
    let o = lab(&["norm", "--family", "lions", "--alpha", "50"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("family,param,l2,grad_l2,orlicz\n"));
    let r = rows(&o);
    assert_eq!(r.len(), 1);
    assert!((field(&r[0], 4) - 0.284).abs() < 2e-3);
    assert!((field(&r[0], 3) - 1.0).abs() < 1e-9);
    // 12 significant digits
    assert_eq!(r[0][4].split('e').next().unwrap().len(), 13);
}

#[test]
fn norm_rejects_bad_input() {
    assert_eq!(code(&lab(&["norm", "--family", "lions", "--alpha", "-1"])), 2);
    assert_eq!(code(&lab(&["norm", "--family", "lions"])), 2);
    assert_eq!(code(&lab(&["norm", "--family", "nope", "--alpha", "1"])), 2);
    assert_eq!(code(&lab(&["frobnicate"])), 2);
}

#[test]
fn norm_of_sum_and_other_families() {
    let o = lab(&["norm", "--family", "sum", "--a", "1", "--b", "2", "--alpha", "8"]);
    assert_eq!(code(&o), 0);
    let v = field(&rows(&o)[0], 4);
    assert!(v > 0.564 && v < 0.564 * 1.3, "{v}");

    let o = lab(&["norm", "--family", "bubble", "--alpha", "20", "--profile", "gk"]);
    assert_eq!(code(&o), 0);
    assert!((field(&rows(&o)[0], 3) - 1.84776).abs() < 1e-3);

    let o = lab(&["norm", "--family", "scaled", "--alpha", "25", "--radius", "5"]);
    assert_eq!(code(&o), 0);
    assert!((field(&rows(&o)[0], 2) - 0.5).abs() < 0.01);
}

#[test]
fn norm_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("v.csv");
    let mut text = String::from("s,v\n");
    for i in 0..=160 {
        let s = -2.0 + i as f64 / 16.0;
        text.push_str(&format!("{s},{}\n", if s >= 0.0 { 1.0 } else { 0.0 }));
    }
    fs::write(&path, text).unwrap();
    let o = lab(&["norm", "--family", "file", "--file", path.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    // v = 1 on s >= 0 (ramp on the last cell before 0): ||u||_2 about sqrt(pi)
    assert!((field(&rows(&o)[0], 2) - std::f64::consts::PI.sqrt()).abs() < 0.15);
}

#[test]
fn sweep_tail_integrals() {
    let o = lab(&["sweep", "--probe", "tail-integrals", "--alphas", "25,50,100"]);
    assert_eq!(code(&o), 0);
    let r = rows(&o);
    assert_eq!(r.len(), 3);
    assert!((field(&r[2], 1) - 1.0).abs() < 0.05);
    assert!((field(&r[2], 3) - 1.0 / 3.0).abs() < 0.02);
}

#[test]
fn sweep_moser_diverges_at_4pi() {
    let o = lab(&[
        "sweep",
        "--probe",
        "moser",
        "--alpha-exp",
        "12.566",
        "--betas",
        "5,10,20",
    ]);
    assert_eq!(code(&o), 0);
    let r = rows(&o);
    assert_eq!(r.len(), 3);
    assert!(field(&r[1], 1) > field(&r[0], 1) && field(&r[2], 1) > field(&r[1], 1));
    assert_eq!(r[0][3], "true");
    assert_eq!(
        code(&lab(&[
            "sweep",
            "--probe",
            "moser",
            "--alpha-exp",
            "12.566",
            "--betas",
            ""
        ])),
        2
    );
    assert_eq!(code(&lab(&["sweep", "--probe", "moser", "--alpha-exp", "12.566"])), 2);
}

#[test]
fn sweep_assert_maps_to_exit_3() {
    let ok = lab(&["sweep", "--probe", "cross-scale", "--alphas", "4,8,16,32", "--assert"]);
    assert_eq!(code(&ok), 0);
    let bad = lab(&[
        "sweep",
        "--probe",
        "cross-scale",
        "--close",
        "--alphas",
        "4,8,16,32",
        "--assert",
    ]);
    assert_eq!(code(&bad), 3);
    assert_eq!(rows(&bad).len(), 4);
}

#[test]
fn sweeps_are_deterministic_across_jobs() {
    let args = ["sweep", "--probe", "orlicz-limit", "--alphas", "10,20,40,80"];
    let one = lab(&[&["--jobs", "1"], &args[..]].concat());
    let four = lab(&[&["--jobs", "4"], &args[..]].concat());
    assert_eq!(code(&one), 0);
    assert_eq!(one.stdout, four.stdout);
    assert_eq!(one.stdout, lab(&args).stdout);
}

#[test]
fn decompose_examples() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = lab(&["decompose", "--seq", "single", "--nmax", "60", "--out", out]);
    assert_eq!(code(&o), 0);
    let summary = fs::read_to_string(dir.path().join("decompose_summary.csv")).unwrap();
    let lines: Vec<&str> = summary.lines().collect();
    assert_eq!(
        lines[0],
        "level,scale_at_ref,profile_grad_norm,remainder_orlicz,stability_defect"
    );
    assert_eq!(lines.len(), 2);
    let rem: f64 = lines[1].split(',').nth(3).unwrap().parse().unwrap();
    assert!(rem < 0.05 * 0.2869);
    let profile = fs::read_to_string(dir.path().join("decompose_profile_0.csv")).unwrap();
    assert!(profile.starts_with("t,psi\n") && profile.lines().count() > 10);

    let o = lab(&["decompose", "--seq", "two-orthogonal", "--nmax", "40"]);
    assert_eq!(code(&o), 0);
    assert_eq!(rows(&o).len(), 2);

    let o = lab(&["decompose", "--seq", "two-nonorthogonal", "--nmax", "40"]);
    assert_eq!(code(&o), 0);
    assert_eq!(rows(&o).len(), 1);

    let o = lab(&["decompose", "--seq", "custom", "--bubbles", "1*n,1*2n", "--nmax", "40"]);
    assert_eq!(code(&o), 0);
    assert_eq!(rows(&o).len(), 1);
    assert_eq!(code(&lab(&["decompose", "--seq", "custom", "--nmax", "40"])), 2);
}

#[test]
fn wave_subcritical_run() {
    let dir = tempfile::tempdir().unwrap();
    let traj = dir.path().join("traj.csv");
    let o = lab(&[
        "wave",
        "--data",
        "lions",
        "--c",
        "0.3",
        "--alpha",
        "8",
        "--T",
        "1",
        "--samples",
        "8",
        "--trajectory",
        traj.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8_lossy(&o.stderr).contains("regime Subcritical"));
    assert!(stdout(&o).starts_with("t,E_total,E_c_gap,orlicz_snapshot\n"));
    let r = rows(&o);
    assert!(r.len() >= 9);
    let e0 = field(&r[0], 1);
    for row in &r {
        assert!((field(row, 1) - e0).abs() < 1e-2 * e0);
    }
    let t = fs::read_to_string(traj).unwrap();
    assert!(t.starts_with("time,node,u,ut\n"));
    assert_eq!(t.lines().count(), 1 + r.len() * 4096);
}

#[test]
fn wave_failures() {
    let o = lab(&["wave", "--data", "lions", "--c", "5", "--alpha", "8"]);
    assert_eq!(code(&o), 4);
    assert!(String::from_utf8_lossy(&o.stderr).contains("blow-up at t ="));
    assert_eq!(code(&lab(&["wave", "--T", "100", "--R", "10"])), 2);
    assert_eq!(code(&lab(&["wave", "--nr", "256", "--dt", "1"])), 2);
}

#[test]
fn verify_subsets() {
    let o = lab(&["verify", "--only", "stability"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert_eq!(out.lines().count(), 1);
    assert!(out.starts_with("PASS  8 stability"));
    assert_eq!(code(&lab(&["verify", "--only", "nope"])), 2);
    let o = lab(&["verify", "--only", "max-law"]);
    assert!(stdout(&o).starts_with("FAIL  7"));
    assert_eq!(code(&o), 1);
}

#[test]
fn config_file_with_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(&cfg, "# norm of f_50\nfamily = lions\nalpha = 50\n").unwrap();
    let c = cfg.to_str().unwrap();
    let from_file = lab(&["--config", c, "norm"]);
    assert_eq!(code(&from_file), 0);
    assert_eq!(
        from_file.stdout,
        lab(&["norm", "--family", "lions", "--alpha", "50"]).stdout
    );
    let overridden = lab(&["--config", c, "norm", "--alpha", "20"]);
    assert!(stdout(&overridden).contains("alpha=20,"));

    fs::write(&cfg, "family = lions\nbogus = 1\n").unwrap();
    assert_eq!(code(&lab(&["--config", c, "norm", "--alpha", "5"])), 2);
    fs::write(&cfg, "no equals sign\n").unwrap();
    assert_eq!(code(&lab(&["--config", c, "norm"])), 2);
}

#[test]
fn output_directory_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_orlicz-lab"))
        .args(["norm", "--family", "lions", "--alpha", "10"])
        .env("ORLICZ_LAB_OUT_DIR", dir.path())
        .output()
        .unwrap();
    assert_eq!(code(&o), 0);
    assert!(o.stdout.is_empty());
    let csv = fs::read_to_string(dir.path().join("norm.csv")).unwrap();
    assert!(csv.starts_with("family,param"));
}
