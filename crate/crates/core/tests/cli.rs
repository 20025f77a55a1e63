use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use wavelab::propagator::gaussian_packet;
use wavelab::{GaussianPacketSpec, Grid1D};

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn wavelab(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wavelab"))
        .args(args)
        .arg("--out")
        .arg(out)
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str], out: &Path) {
    let o = wavelab(args, out);
    assert!(
        o.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&o.stderr)
    );
}

fn read_csv(path: &Path) -> (Vec<String>, Vec<Vec<String>>) {
    let text = std::fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    let header = lines
        .next()
        .unwrap()
        .split(',')
        .map(str::to_string)
        .collect();
    let rows = lines
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect();
    (header, rows)
}

fn num(cell: &str) -> f64 {
    cell.parse().unwrap()
}

fn column(rows: &[Vec<String>], header: &[String], name: &str) -> Vec<f64> {
    let i = header.iter().position(|h| h == name).unwrap();
    rows.iter().map(|r| num(&r[i])).collect()
}

#[test]
fn dispersion_rows() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path();
    ok(
        &[
            "dispersion",
            "--config",
            configs().join("dispersion_kg.cfg").to_str().unwrap(),
        ],
        out,
    );
    let (header, rows) = read_csv(&out.join("dispersion.csv"));
    assert_eq!(
        header.join(","),
        "family,k,omega,group_velocity,p,E,nr_gap,nr_bound"
    );
    assert_eq!(rows.len(), 9);
    assert_eq!(rows[0][0], "klein_gordon");
    assert_eq!(num(&rows[0][1]), 0.0);
    assert_eq!(num(&rows[0][2]), 1.0);

    ok(&["dispersion", "--set", "family=electromagnetic"], out);
    let (header, rows) = read_csv(&out.join("dispersion.csv"));
    assert_eq!(column(&rows, &header, "omega"), column(&rows, &header, "k"));
    assert!(rows.iter().all(|r| r[6].is_empty() && r[7].is_empty()));

    ok(
        &["dispersion", "--set", "k_start=2", "--set", "k_count=1"],
        out,
    );
    let (_, rows) = read_csv(&out.join("dispersion.csv"));
    assert_eq!(rows.len(), 1);
    let row: Vec<f64> = rows[0][1..6].iter().map(|c| num(c)).collect();
    assert_eq!(row, vec![2.0, 2.0, 2.0, 2.0, 2.0]);
}

#[test]
fn config_errors_exit_2_with_location() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.cfg");
    std::fs::write(&cfg, "m = 1\n# fine\nsigmaa = 2\n").unwrap();
    let o = wavelab(
        &["evolve", "--config", cfg.to_str().unwrap()],
        &dir.path().join("o"),
    );
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("bad.cfg:3") && err.contains("sigmaa"), "{err}");

    let o = wavelab(&["evolve", "--set", "dt=soon"], &dir.path().join("o"));
    assert_eq!(o.status.code(), Some(2));
    let o = wavelab(&["evolve", "--set", "n_points=100"], &dir.path().join("o"));
    assert_eq!(o.status.code(), Some(2));
    let o = wavelab(
        &["evolve", "--set", "family=klein_gordon"],
        &dir.path().join("o"),
    );
    assert_eq!(
        o.status.code(),
        Some(2),
        "second-order family needs the spectral scheme"
    );
}

#[test]
fn free_gaussian_keeps_norm() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = configs().join("free_gaussian.cfg");
    ok(&["evolve", "--config", cfg.to_str().unwrap()], dir.path());
    let (header, rows) = read_csv(&dir.path().join("summary.csv"));
    assert_eq!(header.join(","), "t,norm,centroid,width");
    let norms = column(&rows, &header, "norm");
    assert!(norms.len() > 2);
    assert!(
        norms.iter().all(|n| (n - norms[0]).abs() <= 1e-12),
        "{norms:?}"
    );
    let (header, _) = read_csv(&dir.path().join("snapshot_000000.csv"));
    assert_eq!(header.join(","), "t,x,re_psi,im_psi,abs2");
}

#[test]
fn harmonic_ground_state_width_is_constant() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = configs().join("harmonic_ground.cfg");
    ok(&["evolve", "--config", cfg.to_str().unwrap()], dir.path());
    let (header, rows) = read_csv(&dir.path().join("summary.csv"));
    let widths = column(&rows, &header, "width");
    assert!(
        widths.iter().all(|w| (w - widths[0]).abs() <= 1e-6),
        "{widths:?}"
    );
}

#[test]
fn zero_step_run_writes_the_initial_packet() {
    let dir = tempfile::tempdir().unwrap();
    ok(
        &[
            "evolve",
            "--set",
            "n_steps=0",
            "--set",
            "n_points=64",
            "--set",
            "length=16",
            "--set",
            "x0=8",
            "--set",
            "sigma=1.5",
        ],
        dir.path(),
    );
    let files: Vec<_> = std::fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .filter(|n| n.starts_with("snapshot_"))
        .collect();
    assert_eq!(files, vec!["snapshot_000000.csv".to_string()]);
    let (header, rows) = read_csv(&dir.path().join("snapshot_000000.csv"));
    let grid = Grid1D::new(64, 16.0).unwrap();
    let packet = gaussian_packet(
        &GaussianPacketSpec::new(8.0, 1.0, 1.5).unwrap(),
        &grid,
        true,
    );
    let re = column(&rows, &header, "re_psi");
    let im = column(&rows, &header, "im_psi");
    for (j, z) in packet.samples().iter().enumerate() {
        assert_eq!((re[j], im[j]), (z.re, z.im));
    }
}

#[test]
fn non_finite_evolution_exits_3_with_step() {
    let dir = tempfile::tempdir().unwrap();
    for scheme in ["split_step", "crank_nicolson", "spectral"] {
        let o = wavelab(
            &[
                "evolve",
                "--inject-fault",
                "nonfinite",
                "--set",
                &format!("scheme={scheme}"),
            ],
            dir.path(),
        );
        assert_eq!(o.status.code(), Some(3), "{scheme}");
        let err = String::from_utf8_lossy(&o.stderr);
        assert!(err.contains("at step"), "{err}");
    }
}

/// `omega_KG - m c^2 / hbar - hbar k^2 / 2m`, by direct subtraction.
fn direct_gap(k: f64, c: f64) -> f64 {
    ((k * k * c * c + c.powi(4)).sqrt() - c * c - 0.5 * k * k).abs()
}

#[test]
fn single_mode_ladder_matches_sine_law() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = configs().join("nrlimit_mode.cfg");
    ok(&["nrlimit", "--config", cfg.to_str().unwrap()], dir.path());
    let (header, rows) = read_csv(&dir.path().join("nrlimit.csv"));
    assert_eq!(header.join(","), "c,t,deviation,eq18_ratio");
    let cs = column(&rows, &header, "c");
    let ts = column(&rows, &header, "t");
    let devs = column(&rows, &header, "deviation");
    for ((c, t), dev) in cs.iter().zip(&ts).zip(&devs) {
        let expect = 2.0 * (0.5 * direct_gap(2.0, *c) * t).sin().abs();
        assert!(
            (dev - expect).abs() <= 1e-8,
            "c={c} t={t}: {dev} vs {expect}"
        );
        if *t == 0.0 {
            assert_eq!(*dev, 0.0);
        }
    }
}

#[test]
fn two_rung_ladder_records_inverse_square_exponent() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = configs().join("nrlimit.cfg");
    ok(
        &[
            "nrlimit",
            "--config",
            cfg.to_str().unwrap(),
            "--set",
            "c_ladder=10,20",
        ],
        dir.path(),
    );
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("nrlimit.json")).unwrap())
            .unwrap();
    let exponent = report["fit"]["deviation_exponent"].as_f64().unwrap();
    assert!((exponent + 2.0).abs() <= 0.3, "{exponent}");
    assert_eq!(report["ladder"].as_array().unwrap().len(), 2);
    assert_eq!(report["config"]["c_ladder"], "10.0,20.0");

    let o = wavelab(&["nrlimit", "--set", "c_ladder=10"], dir.path());
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn oscillator_rows() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = configs().join("oscillator.cfg");
    for (omega, energy) in [(1.0, 0.5), (2.0, 1.0)] {
        ok(
            &[
                "oscillator",
                "--config",
                cfg.to_str().unwrap(),
                "--set",
                &format!("omega_c={omega}"),
            ],
            dir.path(),
        );
        let (header, rows) = read_csv(&dir.path().join("oscillator.csv"));
        assert_eq!(header.join(","), "method,delta_x,energy");
        let methods: Vec<&str> = rows.iter().map(|r| r[0].as_str()).collect();
        assert_eq!(methods, ["analytic", "golden_section", "imaginary_time"]);
        for e in column(&rows, &header, "energy") {
            assert!((e - energy).abs() <= 1e-6 * energy, "{e} vs {energy}");
        }
    }
    let o = wavelab(
        &[
            "oscillator",
            "--config",
            cfg.to_str().unwrap(),
            "--set",
            "n_points=16",
        ],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&o.stderr).contains("hint"));
}

#[test]
fn verify_passes_and_names_injected_failure() {
    let dir = tempfile::tempdir().unwrap();
    let a = wavelab(&["verify"], dir.path());
    let b = wavelab(&["verify"], dir.path());
    assert!(a.status.success(), "{}", String::from_utf8_lossy(&a.stdout));
    assert_eq!(a.stdout, b.stdout);
    let stdout = String::from_utf8_lossy(&a.stdout);
    assert!(stdout.lines().count() >= 8 && stdout.lines().all(|l| l.starts_with("PASS ")));

    let bad = wavelab(&["verify", "--inject-fault", "dispersion"], dir.path());
    assert_eq!(bad.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&bad.stdout).contains("FAIL plane_wave_exactness"));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("`plane_wave_exactness`"));
}

#[test]
fn seed_selects_the_random_initial_field() {
    let dir = tempfile::tempdir().unwrap();
    let run = |seed: &str, sub: &str| {
        let out = dir.path().join(sub);
        ok(
            &[
                "evolve",
                "--set",
                "initial=random",
                "--set",
                "n_steps=0",
                "--seed",
                seed,
            ],
            &out,
        );
        std::fs::read(out.join("snapshot_000000.csv")).unwrap()
    };
    assert_eq!(run("3", "a"), run("3", "b"));
    assert_ne!(run("3", "a"), run("4", "c"));
    let echoed = std::fs::read_to_string(dir.path().join("c/config.txt")).unwrap();
    assert!(echoed.lines().any(|l| l == "seed = 4"));
}
