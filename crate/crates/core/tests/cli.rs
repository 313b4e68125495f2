use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use diracwalk::io::{load_snapshot, read_rows, ConeRow, DispersionRow, TransformedRow};
use diracwalk::lattice::{Band, Packet, SpinorField};
use diracwalk::spectral::{eigensystem, n_vector, KPoint};
use diracwalk::symmetry::{so12_boost, spin_cover, BoostPlane};
use num_complex::Complex64;
use serde_json::Value;

fn diracwalk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_diracwalk")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn evolve_moves_at_the_group_velocity() {
    let out = diracwalk(&["evolve", "--mu", "0", "--lattice-n", "512", "--steps", "100"]);
    assert_eq!(out.status.code(), Some(0));
    let s = json(&out);
    let d = s["peak_displacement"].as_f64().unwrap();
    assert!((d - 100.0).abs() <= 3.0, "{d}");
    assert!(s["norm_drift"].as_f64().unwrap() < 1e-12);
}

#[test]
fn evolve_with_zero_steps_echoes_the_input() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("run");
    let out = diracwalk(&[
        "evolve", "--mu", "0.2", "--lattice-n", "128", "--steps", "0", "--out", out_dir.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let (meta, field) = load_snapshot(&out_dir.join("snapshot.csv")).unwrap();
    assert_eq!((meta.n, meta.steps), (128, 0));
    let packet = Packet { x0: 32.0, k0: std::f64::consts::FRAC_PI_4, sigma_k: 0.1, band: Band::Minus };
    let expected = SpinorField::gaussian_packet(0.2, 128, packet).unwrap();
    assert_eq!(field.max_abs_diff(&expected), 0.0);
    let summary = read_json(&out_dir.join("summary.json"));
    assert_eq!(summary["peak_displacement"].as_f64(), Some(0.0));
    assert!(out_dir.join("marginal.csv").exists() && out_dir.join("snapshot.json").exists());
}

#[test]
fn variable_mass_evolve_conserves_norm() {
    let out = diracwalk(&["evolve", "--lattice-n", "64", "--lattice-ntau", "64", "--steps", "200", "--tol", "1e-11"]);
    assert_eq!(out.status.code(), Some(0));
    let s = json(&out);
    assert_eq!(s["mode"], "variable_mass");
    assert!(s["norm_drift"].as_f64().unwrap() < 1e-11);
}

#[test]
fn dispersion_and_cone_tables_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let disp = dir.path().join("disp.csv");
    let out = diracwalk(&["dispersion", "--grid", "16", "--out", disp.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let rows: Vec<DispersionRow> = read_rows(fs::File::open(&disp).unwrap()).unwrap();
    assert_eq!(rows.len(), 256);
    for r in &rows {
        assert!((r.omega - (r.mu.cos() * r.k.cos()).clamp(-1.0, 1.0).acos()).abs() < 1e-14);
    }
    let text = fs::read_to_string(&disp).unwrap();
    let mut again = Vec::new();
    diracwalk::io::write_rows(&rows, &mut again).unwrap();
    assert_eq!(text.as_bytes(), again.as_slice());

    let cone = dir.path().join("cone.json");
    let out = diracwalk(&["cone", "--grid", "8", "--format", "json", "--out", cone.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let rows: Vec<ConeRow> = serde_json::from_str(&fs::read_to_string(&cone).unwrap()).unwrap();
    assert_eq!(rows.len(), 64);
    assert!(rows.iter().any(|r| r.region == "B0") && rows.iter().any(|r| r.region != "B0"));
}

#[test]
fn boost_pipeline_from_config() {
    let dir = tempfile::tempdir().unwrap();
    let modes = dir.path().join("modes.csv");
    let mut text = String::from("k,mu\n");
    for i in 0..10 {
        for j in 0..10 {
            text.push_str(&format!("{},{}\n", -1.2 + 0.25 * i as f64, -1.2 + 0.25 * j as f64 + 0.01));
        }
    }
    fs::write(&modes, text).unwrap();
    let cfg = dir.path().join("boost.json");
    fs::write(
        &cfg,
        serde_json::json!({ "xi": 0.5, "phase": [0.1, -0.2, 0.3], "f": "appendixA", "modes_file": modes }).to_string(),
    )
    .unwrap();
    let table = dir.path().join("boosted.csv");
    let out = diracwalk(&["boost", "--config", cfg.to_str().unwrap(), "--out", table.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let rows: Vec<TransformedRow> = read_rows(fs::File::open(&table).unwrap()).unwrap();
    assert!(rows.len() >= 95);
    let i = Complex64::new(0.0, 1.0);
    let spin = spin_cover(&so12_boost(0.5, BoostPlane::P01)).unwrap();
    for r in &rows {
        let n = n_vector(&KPoint::new(r.omega_prime, r.k_prime, r.mu_prime));
        let psi = [Complex64::new(r.re_R, r.im_R), Complex64::new(r.re_L, r.im_L)];
        let a = i * n.n2() * psi[0] + i * (n.n1() - n.n0()) * psi[1];
        let b = i * (n.n0() + n.n1()) * psi[0] - i * n.n2() * psi[1];
        let norm = (psi[0].norm_sqr() + psi[1].norm_sqr()).sqrt();
        assert!((a.norm_sqr() + b.norm_sqr()).sqrt() / norm < 1e-9);
        assert!(r.residual < 1e-9);
        let src = spin.complex() * eigensystem(r.k, r.mu).plus.1;
        assert!((norm - src.norm()).abs() < 1e-12);
    }

    fs::write(&cfg, serde_json::json!({ "xi": 0.5, "f": "atanh", "modes_file": modes }).to_string()).unwrap();
    assert_eq!(diracwalk(&["boost", "--config", cfg.to_str().unwrap()]).status.code(), Some(2));
    fs::write(&cfg, serde_json::json!({ "xi": 0.5, "modes_file": modes, "bogus": 1 }).to_string()).unwrap();
    assert_eq!(diracwalk(&["boost", "--config", cfg.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn flags_override_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.json");
    fs::write(&cfg, r#"{"grid": 4, "format": "json"}"#).unwrap();
    let out = diracwalk(&["dispersion", "--config", cfg.to_str().unwrap()]);
    assert_eq!(json(&out).as_array().unwrap().len(), 16);
    let out = diracwalk(&["dispersion", "--config", cfg.to_str().unwrap(), "--grid", "3"]);
    assert_eq!(json(&out).as_array().unwrap().len(), 9);
}

#[test]
fn verify_exit_codes() {
    let out = diracwalk(&["verify"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["passed"], true);
    assert!(r["generator"].as_str().unwrap().contains("ChaCha8"));

    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("fault.json");
    fs::write(&cfg, r#"{"fault": "tau2", "samples": 100}"#).unwrap();
    let out = diracwalk(&["verify", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let r = json(&out);
    let failed: Vec<&Value> =
        r["invariants"].as_array().unwrap().iter().filter(|x| x["passed"] == false).collect();
    assert!(failed.iter().any(|x| x["suite"] == "spectral"));
}

#[test]
fn bench_schema_and_determinism() {
    let args = ["bench", "--lattice-n", "1024", "--steps", "50", "--seed", "3"];
    let (a, b) = (json(&diracwalk(&args)), json(&diracwalk(&args)));
    let entries = a["entries"].as_array().unwrap();
    assert_eq!(entries.len(), 2);
    for e in entries {
        for key in ["impl", "N", "steps", "seconds", "sites_per_sec"] {
            assert!(e.get(key).is_some(), "missing {key}");
        }
    }
    assert!(a["equivalence"][0]["max_abs_diff"].as_f64().unwrap() < 1e-10);
    let hashes = |v: &Value| -> Vec<String> {
        v["entries"].as_array().unwrap().iter().map(|e| e["state_hash"].as_str().unwrap().to_owned()).collect()
    };
    assert_eq!(hashes(&a), hashes(&b));
}

#[test]
fn fixedmu_report_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = diracwalk(&["fixedmu-report", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let r = read_json(&dir.path().join("report.json"));
    assert_eq!(r["bounded_away"], true);
    assert_eq!(r["orthochronous_checks"]["l_plus"], true);
    assert_eq!(r["orthochronous_checks"]["t2_plus"], false);
    assert_eq!(r["deviation_norms"].as_array().unwrap().len(), 3);
    let gen = fs::read_to_string(dir.path().join("generator.csv")).unwrap();
    assert_eq!(gen.lines().count(), 1 + 3 * 32);
}

#[test]
fn config_and_domain_errors() {
    assert_eq!(diracwalk(&["evolve", "--lattice-n", "7"]).status.code(), Some(2));
    assert_eq!(diracwalk(&["evolve", "--no-such-flag"]).status.code(), Some(2));
    assert_eq!(diracwalk(&["dispersion", "--grid", "0"]).status.code(), Some(2));
    assert_eq!(diracwalk(&["boost", "--xi", "0.2"]).status.code(), Some(2));
    assert_eq!(diracwalk(&["verify", "--config", "/nonexistent/cfg.json"]).status.code(), Some(2));
    assert_eq!(diracwalk(&["evolve", "--steps", "1", "--tol", "-1"]).status.code(), Some(2));
    assert_eq!(diracwalk(&["fixedmu-report", "--mu", "1.5707963267948966"]).status.code(), Some(3));
    assert_eq!(diracwalk(&["--help"]).status.code(), Some(0));
}
