use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn quadint(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_quadint"))
        .args(args)
        .current_dir(dir)
        .env_remove("QUADINT_JOBS")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn config_dir() -> std::path::PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

#[test]
fn verify_json_report_all_pass() {
    let dir = TempDir::new().unwrap();
    let o = quadint(dir.path(), &["verify", "--format", "json", "--out", "report.json"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("report.json")).unwrap()).unwrap();
    let checks = v["checks"].as_array().unwrap();
    assert!(checks.len() >= 10);
    for c in checks {
        assert_eq!(c["status"], "pass", "{c}");
        for key in ["name", "residual_summary", "elapsed_ms"] {
            assert!(c.get(key).is_some());
        }
    }
    assert_eq!(v["fingerprint"].as_str().unwrap().len(), 64);
    assert!(dir.path().join("report.json.manifest.json").exists());
}

#[test]
fn verify_misprinted_ly_fails_involution() {
    let dir = TempDir::new().unwrap();
    let o = quadint(dir.path(), &["verify", "--paper-literal-ly", "--only", "involution", "--format", "json"]);
    assert_eq!(code(&o), 1);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["checks"].as_array().unwrap().iter().any(|c| c["status"] == "fail"));
}

#[test]
fn verify_only_filters() {
    let dir = TempDir::new().unwrap();
    let o = quadint(dir.path(), &["verify", "--only", "involution", "--format", "json", "--sequential"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let checks = v["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 3);
    assert!(checks.iter().all(|c| c["name"].as_str().unwrap().starts_with("involution/")));

    let o = quadint(dir.path(), &["verify", "--only", "no-such-family"]);
    assert_eq!(code(&o), 1);
}

#[test]
fn simulate_free_particle_rows_are_straight() {
    let dir = TempDir::new().unwrap();
    let o = quadint(
        dir.path(),
        &["simulate", "--w0", "0", "--q0", "1,2,3", "--p0", "0.5,-0.25,0.125", "--t-end", "2", "--out", "free.csv"],
    );
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let text = std::fs::read_to_string(dir.path().join("free.csv")).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "t,x,y,z,px,py,pz,H,X1,X2,u,d_sing");
    let mut n = 0;
    for line in lines {
        let v: Vec<f64> = line.split(',').map(|f| f.parse().unwrap()).collect();
        let t = v[0];
        for (i, (q, p)) in [(1.0, 0.5), (2.0, -0.25), (3.0, 0.125)].iter().enumerate() {
            assert!((v[1 + i] - (q + p * t)).abs() < 1e-12);
            assert_eq!(v[4 + i], *p);
        }
        n += 1;
    }
    assert_eq!(n, 21);
    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("free.csv.manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["command"], "simulate");
    assert_eq!(manifest["parameters"]["w0"], "0");
}

#[test]
fn simulate_refuses_point_on_singular_line() {
    let dir = TempDir::new().unwrap();
    let k = 3.0 * (0.25f64 * 0.75).sqrt();
    let q0 = format!("0,{k},0");
    let o = quadint(dir.path(), &["simulate", "--q0", &q0, "--p0", "0,0,0", "--t-end", "1"]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("singular point"), "{}", stderr(&o));
}

#[test]
fn simulate_rejects_bad_parameters() {
    let dir = TempDir::new().unwrap();
    let o = quadint(dir.path(), &["simulate", "--a", "3/4", "--q0", "1,0,0", "--p0", "0,0,0", "--t-end", "1"]);
    assert_eq!(code(&o), 1);
    let o = quadint(dir.path(), &["simulate", "--q0", "1,0", "--p0", "0,0,0", "--t-end", "1"]);
    assert_eq!(code(&o), 1);
    let o = quadint(dir.path(), &["simulate", "--q0", "1,0,0", "--p0", "0,0,0", "--t-end", "-1"]);
    assert_eq!(code(&o), 1);
}

#[test]
fn simulate_from_config_with_override() {
    let dir = TempDir::new().unwrap();
    let conf = config_dir().join("bounded_ic2.conf");
    let o = quadint(
        dir.path(),
        &["simulate", "--config", conf.to_str().unwrap(), "--t-end", "20", "--out", "ic2.csv", "--strict"],
    );
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let out = String::from_utf8_lossy(&o.stdout);
    assert!(out.contains("classification  completed"), "{out}");
    let rows = std::fs::read_to_string(dir.path().join("ic2.csv")).unwrap().lines().count() - 1;
    assert_eq!(rows, 201);
}

#[test]
fn strict_flags_singularity_approach() {
    let dir = TempDir::new().unwrap();
    // Released at rest next to a line: falls in.
    let k = 3.0 * (0.25f64 * 0.75).sqrt();
    let q0 = format!("0,{},0", k - 0.01);
    let base = ["simulate", "--q0", &q0, "--p0", "0,0,0", "--t-end", "5"];
    let o = quadint(dir.path(), &base);
    assert_eq!(code(&o), 0);
    let mut strict = base.to_vec();
    strict.push("--strict");
    let o = quadint(dir.path(), &strict);
    assert_eq!(code(&o), 1, "{}", String::from_utf8_lossy(&o.stdout));
}

#[test]
fn plot_views_and_empty_plot() {
    let dir = TempDir::new().unwrap();
    let o = quadint(
        dir.path(),
        &["simulate", "--q0", "0.0706,0.4235,-0.0513", "--p0", "0.3539,0.3007,0.1024", "--t-end", "10", "--out", "a.csv"],
    );
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    for view in ["xy", "xz", "yz", "3d"] {
        let out = format!("{view}.svg");
        let o = quadint(dir.path(), &["plot", "a.csv", "--view", view, "--out", &out]);
        assert_eq!(code(&o), 0, "{}", stderr(&o));
        let svg = std::fs::read_to_string(dir.path().join(&out)).unwrap();
        assert!(svg.starts_with("<?xml") || svg.starts_with("<svg"));
        assert!(svg.trim_end().ends_with("</svg>"));
        assert_eq!(svg.matches("class=\"trajectory\"").count(), 1);
        assert_eq!(svg.matches("class=\"singular-line\"").count(), 2);
        assert!(svg.contains("stroke-dasharray"));
    }
    let xy = std::fs::read_to_string(dir.path().join("xy.svg")).unwrap();
    let xz = std::fs::read_to_string(dir.path().join("xz.svg")).unwrap();
    assert_ne!(xy, xz);

    let o = quadint(dir.path(), &["plot", "--out", "empty.svg"]);
    assert_eq!(code(&o), 0);
    let svg = std::fs::read_to_string(dir.path().join("empty.svg")).unwrap();
    assert_eq!(svg.matches("class=\"trajectory\"").count(), 0);
    assert_eq!(svg.matches("class=\"singular-line\"").count(), 2);
    assert!(svg.contains("class=\"axes\""));
}

#[test]
fn plot_rejects_bad_header() {
    let dir = TempDir::new().unwrap();
    std::fs::write(dir.path().join("bad.csv"), "time,x\n0,1\n").unwrap();
    let o = quadint(dir.path(), &["plot", "bad.csv", "--out", "bad.svg"]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("malformed input"));
    let o = quadint(dir.path(), &["plot", "missing.csv"]);
    assert_eq!(code(&o), 1);
}

#[test]
fn scan_writes_one_row_per_ic() {
    let dir = TempDir::new().unwrap();
    let o = quadint(dir.path(), &["scan", "--grid", "10", "--seed", "3", "--t-end", "2", "--out", "scan.csv"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let text = std::fs::read_to_string(dir.path().join("scan.csv")).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "idx,x0,y0,z0,px0,py0,pz0,E,min_u,min_dsing,class");
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 10);
    for (i, r) in rows.iter().enumerate() {
        let f: Vec<&str> = r.split(',').collect();
        assert_eq!(f[0], i.to_string());
        assert!(f[7].parse::<f64>().unwrap() < 0.0);
    }

    // Same seed, sequential: identical table.
    let o = quadint(
        dir.path(),
        &["scan", "--grid", "10", "--seed", "3", "--t-end", "2", "--out", "seq.csv", "--sequential"],
    );
    assert_eq!(code(&o), 0);
    assert_eq!(text, std::fs::read_to_string(dir.path().join("seq.csv")).unwrap());
}

#[test]
fn scan_keeps_duplicate_ics() {
    let dir = TempDir::new().unwrap();
    let ic = "0.0706,0.4235,-0.0513,0.3539,0.3007,0.1024";
    std::fs::write(dir.path().join("ics.csv"), format!("x0,y0,z0,px0,py0,pz0\n{ic}\n{ic}\n")).unwrap();
    let o = quadint(dir.path(), &["scan", "--ic-file", "ics.csv", "--t-end", "1", "--out", "dup.csv"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let text = std::fs::read_to_string(dir.path().join("dup.csv")).unwrap();
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0].split_once(',').unwrap().1, rows[1].split_once(',').unwrap().1);
}

#[test]
fn scan_refuses_nonnegative_coupling() {
    let dir = TempDir::new().unwrap();
    for w0 in ["0.5", "0"] {
        let o = quadint(dir.path(), &["scan", "--w0", w0, "--grid", "2"]);
        assert_eq!(code(&o), 1);
        assert!(stderr(&o).contains("w0 < 0"));
    }
}

#[test]
fn usage_errors_and_help() {
    let dir = TempDir::new().unwrap();
    assert_eq!(code(&quadint(dir.path(), &["--help"])), 0);
    assert_eq!(code(&quadint(dir.path(), &["--version"])), 0);
    assert_eq!(code(&quadint(dir.path(), &["frobnicate"])), 1);
    assert_eq!(code(&quadint(dir.path(), &["simulate", "--config", "nope.conf"])), 1);
}

#[test]
fn reruns_are_identical() {
    let dir = TempDir::new().unwrap();
    let args = |out: &'static str| {
        vec!["simulate", "--q0", "1.4184,0.0433,0.2487", "--p0", "-0.4884,-0.0269,0.1008", "--t-end", "5", "--out", out]
    };
    assert_eq!(code(&quadint(dir.path(), &args("r1.csv"))), 0);
    assert_eq!(code(&quadint(dir.path(), &args("r2.csv"))), 0);
    let read = |f: &str| std::fs::read(dir.path().join(f)).unwrap();
    assert_eq!(read("r1.csv"), read("r2.csv"));

    let m1: serde_json::Value = serde_json::from_slice(&read("r1.csv.manifest.json")).unwrap();
    let m2: serde_json::Value = serde_json::from_slice(&read("r2.csv.manifest.json")).unwrap();
    assert_eq!(m1["parameters"], m2["parameters"]);
    assert_eq!(m1["fingerprint"], m2["fingerprint"]);

    for (out, jobs) in [("s1.csv", "1"), ("s4.csv", "4")] {
        let o = Command::new(env!("CARGO_BIN_EXE_quadint"))
            .args(["scan", "--grid", "6", "--seed", "9", "--t-end", "1", "--out", out])
            .env("QUADINT_JOBS", jobs)
            .current_dir(dir.path())
            .output()
            .unwrap();
        assert_eq!(code(&o), 0);
    }
    assert_eq!(read("s1.csv"), read("s4.csv"));
}
