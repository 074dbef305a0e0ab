use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn owl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_owl"))
        .args(args)
        .env_remove("OWL_THREADS")
        .output()
        .expect("owl binary runs")
}

fn config(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../configs")
        .join(name)
        .display()
        .to_string()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn numbers(line: &str, sep: char) -> Vec<f64> {
    line.split(sep).map(|x| x.trim().parse().unwrap()).collect()
}

fn ply_vertices(path: &Path) -> Vec<[f64; 3]> {
    let text = fs::read_to_string(path).unwrap();
    let (_, body) = text.split_once("end_header\n").unwrap();
    body.lines()
        .map(|l| {
            let v = numbers(&l.replace(' ', ","), ',');
            [v[0], v[1], v[2]]
        })
        .collect()
}

fn simulate(cfg: &str, dir: &Path) -> PathBuf {
    let out = dir.join("sim");
    let o = owl(&["simulate", "--config", &config(cfg), "--out", p(&out)]);
    assert!(o.status.success(), "{}", stderr(&o));
    out
}

#[test]
fn simulate_writes_tables_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let out = simulate("cube.json", dir.path());
    let cues = fs::read_to_string(out.join("cues.csv")).unwrap();
    let lines: Vec<&str> = cues.lines().collect();
    assert_eq!(lines.len(), 401);
    assert_eq!(lines[0], "frame,time,point_id,theta,phi,L,wx,wy,wz,erx,ery,erz");
    assert!(!cues.contains('\r'));
    let truth = fs::read_to_string(out.join("truth.csv")).unwrap();
    assert_eq!(truth.lines().next().unwrap(), "frame,time,point_id,rx,ry,rz,tx,ty,tz");
    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["seed"], 1);
    assert_eq!(manifest["metrics"]["n_rows"], 400);
    assert!(manifest["config_digest"].as_str().unwrap().starts_with("sha256:"));
}

#[test]
fn simulate_is_deterministic_across_runs_and_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let mut outputs = Vec::new();
    for threads in ["1", "4", "4"] {
        let out = dir.path().join(format!("run{}", outputs.len()));
        let o = Command::new(env!("CARGO_BIN_EXE_owl"))
            .args(["simulate", "--config", &config("cube_noisy.json"), "--out", p(&out)])
            .env("OWL_THREADS", threads)
            .output()
            .unwrap();
        assert!(o.status.success(), "{}", stderr(&o));
        outputs.push(fs::read(out.join("cues.csv")).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
    assert_eq!(outputs[1], outputs[2]);
}

#[test]
fn config_errors_exit_2_and_name_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.json");
    fs::write(
        &cfg,
        r#"{"objects":[{"kind":"cube","size":1,"samples_per_edge":2,"position":[5,0,0]}],
            "camera":{"kind":"rectilinear","start":[0,0,0],"velocity":[1,0,0]},
            "dt":-0.1,"n_frames":3}"#,
    )
    .unwrap();
    let o = owl(&["simulate", "--config", p(&cfg), "--out", p(&dir.path().join("o"))]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("dt"));

    fs::write(&cfg, r#"{"objects":[],"camera":{"kind":"rectilinear"}}"#).unwrap();
    let o = owl(&["simulate", "--config", p(&cfg), "--out", p(&dir.path().join("o"))]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn io_errors_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("missing.json");
    let o = owl(&["simulate", "--config", p(&missing), "--out", p(dir.path())]);
    assert_eq!(o.status.code(), Some(3));
    let blocker = dir.path().join("file");
    fs::write(&blocker, "x").unwrap();
    let o = owl(&["simulate", "--config", &config("cube.json"), "--out", p(&blocker.join("sub"))]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(owl(&["reconstruct", "--cues", "x.csv", "--out", "o"]).status.code(), Some(2));
    assert_eq!(owl(&["bogus"]).status.code(), Some(2));
}

#[test]
fn digest_ignores_config_whitespace() {
    let dir = tempfile::tempdir().unwrap();
    let text = fs::read_to_string(config("cube.json")).unwrap();
    let value: serde_json::Value = serde_json::from_str(&text).unwrap();
    let compact = dir.path().join("compact.json");
    fs::write(&compact, serde_json::to_string(&value).unwrap()).unwrap();
    let digest = |cfg: &str, name: &str| {
        let out = dir.path().join(name);
        assert!(owl(&["simulate", "--config", cfg, "--out", p(&out)]).status.success());
        let m: serde_json::Value =
            serde_json::from_str(&fs::read_to_string(out.join("manifest.json")).unwrap()).unwrap();
        m["config_digest"].as_str().unwrap().to_owned()
    };
    assert_eq!(digest(&config("cube.json"), "a"), digest(p(&compact), "b"));
}

/// `(frame, point_id) -> r` from truth.csv.
fn truth_positions(path: &Path) -> Vec<(usize, u64, [f64; 3])> {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .skip(1)
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            let v = |i: usize| f[i].parse::<f64>().unwrap();
            (f[0].parse().unwrap(), f[2].parse().unwrap(), [v(3), v(4), v(5)])
        })
        .collect()
}

#[test]
fn reconstruct_with_speed_matches_truth() {
    for cfg in ["cube.json", "street.json"] {
        let dir = tempfile::tempdir().unwrap();
        let sim = simulate(cfg, dir.path());
        let speed = if cfg == "cube.json" { "1" } else { "10" };
        let rec = dir.path().join("rec");
        let o = owl(&[
            "reconstruct",
            "--cues",
            p(&sim.join("cues.csv")),
            "--out",
            p(&rec),
            "--speed",
            speed,
            "--all",
        ]);
        assert!(o.status.success(), "{}", stderr(&o));
        let truth = truth_positions(&sim.join("truth.csv"));
        let mut worst: f64 = 0.0;
        for frame in [0usize, 7, 19] {
            let verts = ply_vertices(&rec.join(format!("cloud_{frame}.ply")));
            let expected: Vec<[f64; 3]> =
                truth.iter().filter(|t| t.0 == frame).map(|t| t.2).collect();
            assert_eq!(verts.len(), expected.len());
            for (a, b) in verts.iter().zip(&expected) {
                for i in 0..3 {
                    worst = worst.max((a[i] - b[i]).abs());
                }
            }
        }
        assert!(worst < 1e-9, "{cfg}: {worst}");
    }
}

#[test]
fn reconstruct_without_speed_is_in_seconds() {
    let dir = tempfile::tempdir().unwrap();
    let sim = simulate("cube.json", dir.path());
    let rec = dir.path().join("rec");
    let o = owl(&["reconstruct", "--cues", p(&sim.join("cues.csv")), "--out", p(&rec), "--frame", "0"]);
    assert!(o.status.success());
    let ply = fs::read_to_string(rec.join("cloud_0.ply")).unwrap();
    assert!(ply.contains("comment units seconds"));
    assert!(ply.contains("element vertex 8\n"));
    let o = owl(&["reconstruct", "--cues", p(&sim.join("cues.csv")), "--out", p(&rec), "--frame", "50"]);
    assert_eq!(o.status.code(), Some(2));
}

fn write_cues(dir: &Path, rows: &[String]) -> PathBuf {
    let path = dir.join("cues.csv");
    let mut text = String::from("frame,time,point_id,theta,phi,L,wx,wy,wz,erx,ery,erz\n");
    for r in rows {
        text.push_str(r);
        text.push('\n');
    }
    fs::write(&path, text).unwrap();
    path
}

#[test]
fn ambiguous_pair_reconstructs_to_one_point() {
    // 5 m at 20 m/s and 10 m at 40 m/s, both head-on along the boresight.
    let dir = tempfile::tempdir().unwrap();
    let cues = write_cues(
        dir.path(),
        &["0,0,0,0,0,4,0,0,0,1,0,0".into(), "0,0,1,0,0,4,0,0,0,1,0,0".into()],
    );
    let rec = dir.path().join("rec");
    assert!(owl(&["reconstruct", "--cues", p(&cues), "--out", p(&rec), "--frame", "0"])
        .status
        .success());
    let v = ply_vertices(&rec.join("cloud_0.ply"));
    assert_eq!(v[0], v[1]);
    assert_eq!(v[0], [0.25, 0.0, 0.0]);
}

#[test]
fn malformed_cues_report_the_row() {
    let dir = tempfile::tempdir().unwrap();
    let cues = write_cues(
        dir.path(),
        &["0,0,0,0,0,4,0,0,0,1,0,0".into(), "0,0,1,0,0,abc,0,0,0,1,0,0".into()],
    );
    let o = owl(&["reconstruct", "--cues", p(&cues), "--out", p(dir.path()), "--all"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("row 3"), "{}", stderr(&o));
    fs::write(&cues, "frame,time\n0,0\n").unwrap();
    let o = owl(&["reconstruct", "--cues", p(&cues), "--out", p(dir.path()), "--all"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn heading_methods_recover_camera_direction() {
    let dir = tempfile::tempdir().unwrap();
    let sim = simulate("cube.json", dir.path());
    for method in ["per-point", "cones"] {
        let out = dir.path().join(format!("{method}.json"));
        let o = owl(&[
            "heading",
            "--cues",
            p(&sim.join("cues.csv")),
            "--frame",
            "10",
            "--method",
            method,
            "--out",
            p(&out),
        ]);
        assert!(o.status.success(), "{}", stderr(&o));
        let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
        let t: Vec<f64> = v["t_hat"].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect();
        assert!((t[0] - 1.0).abs() < 1e-9 && t[1].abs() < 1e-9 && t[2].abs() < 1e-9);
        assert_eq!(v["method"], method);
        assert_eq!(v["n_points"], 8);
        assert!(v["residual_rms"].as_f64().unwrap() < 1e-9);
        assert!(dir.path().join(format!("{method}.manifest.json")).exists());
    }
}

#[test]
fn heading_cones_needs_three_points() {
    let dir = tempfile::tempdir().unwrap();
    let cues = write_cues(dir.path(), &["0,0,0,0,0,4,0,0,0,1,0,0".into()]);
    let o = owl(&["heading", "--cues", p(&cues), "--frame", "0", "--method", "cones", "--out", p(&dir.path().join("h.json"))]);
    assert_eq!(o.status.code(), Some(2));
    let o = owl(&["heading", "--cues", p(&cues), "--frame", "0", "--method", "per-point", "--out", p(&dir.path().join("h.json"))]);
    assert!(o.status.success());
}

fn owlmap(cfg: &str, dir: &Path) -> Vec<Vec<String>> {
    let out = dir.join("owl_traj.csv");
    let o = owl(&["owlmap", "--config", cfg, "--out", p(&out)]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = fs::read_to_string(&out).unwrap();
    assert_eq!(text.lines().next().unwrap(), "track,index,time,re,im");
    text.lines()
        .skip(1)
        .map(|l| l.split(',').map(String::from).collect())
        .collect()
}

#[test]
fn owlmap_scaled_pair_blocks_are_identical() {
    let dir = tempfile::tempdir().unwrap();
    let rows = owlmap(&config("scaled_pair.json"), dir.path());
    let block = |name: &str| -> Vec<String> {
        rows.iter().filter(|r| r[0] == name).map(|r| r[1..].join(",")).collect()
    };
    assert_eq!(block("base").len(), 40);
    assert_eq!(block("base"), block("scaled"));
}

#[test]
fn owlmap_radial_approach_is_on_the_vertical_axis() {
    let dir = tempfile::tempdir().unwrap();
    let rows = owlmap(&config("radial.json"), dir.path());
    let mut prev = f64::INFINITY;
    for r in &rows {
        let (time, re, im): (f64, f64, f64) = (r[2].parse().unwrap(), r[3].parse().unwrap(), r[4].parse().unwrap());
        assert!(re.abs() < 1e-12);
        assert!(im < prev);
        // (r0 - v t) / v with r0 = 10, v = 2.
        assert!((im - (10.0 - 2.0 * time) / 2.0).abs() < 1e-12);
        prev = im;
    }
}

#[test]
fn owlmap_zero_velocity_names_the_sample() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("stall.json");
    fs::write(
        &cfg,
        r#"{"times":{"dt":0.5,"n":5},"tracks":[{"name":"stall","trajectory":
            {"kind":"constant_accel","start":[5,1,0],"velocity":[-1,0,0],"acceleration":[1,0,0]}}]}"#,
    )
    .unwrap();
    let out = dir.path().join("o.csv");
    let o = owl(&["owlmap", "--config", p(&cfg), "--out", p(&out)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("sample 2"), "{}", stderr(&o));
}

fn manifest_metrics(path: &Path) -> serde_json::Value {
    let m: serde_json::Value = serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap();
    m["metrics"].clone()
}

#[test]
fn iso_surfaces() {
    let dir = tempfile::tempdir().unwrap();
    let sphere = dir.path().join("sphere.ply");
    let o = owl(&["iso", "--kind", "sphere", "--t-mag", "1", "--level", "1", "--out", p(&sphere)]);
    assert!(o.status.success(), "{}", stderr(&o));
    let m = manifest_metrics(&dir.path().join("sphere.manifest.json"));
    assert!(m["max_self_oracle_deviation"].as_f64().unwrap() < 1e-9);
    assert_eq!(ply_vertices(&sphere).len() as u64, m["n_points"].as_u64().unwrap());

    let torus = dir.path().join("torus.ply");
    let o = owl(&["iso", "--kind", "torus", "--t-mag", "1", "--level", "1", "--samples", "6", "--out", p(&torus)]);
    assert!(o.status.success());
    let m = manifest_metrics(&dir.path().join("torus.manifest.json"));
    assert!((m["equatorial_ring_radius"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert!(m["max_self_oracle_deviation"].as_f64().unwrap() < 1e-9);

    for level in ["0", "-1"] {
        let o = owl(&["iso", "--kind", "torus", "--t-mag", "1", "--level", level, "--out", p(&torus)]);
        assert_eq!(o.status.code(), Some(2));
    }
}

fn verify(args: &[&str], dir: &Path) -> (Option<i32>, serde_json::Value) {
    let out = dir.join("verify.json");
    let mut full = vec!["verify", "--out", p(&out)];
    full.extend_from_slice(args);
    let o = owl(&full);
    let v = fs::read_to_string(&out)
        .ok()
        .map_or(serde_json::Value::Null, |t| serde_json::from_str(&t).unwrap());
    (o.status.code(), v)
}

fn check<'a>(v: &'a serde_json::Value, name: &str) -> &'a serde_json::Value {
    v["checks"].as_array().unwrap().iter().find(|c| c["name"] == name).unwrap()
}

#[test]
fn verify_default_cube_passes() {
    let dir = tempfile::tempdir().unwrap();
    let (code, v) = verify(&["--config", &config("cube.json")], dir.path());
    assert_eq!(code, Some(0));
    assert_eq!(v["pass"], true);
    let names: Vec<&str> = v["checks"].as_array().unwrap().iter().map(|c| c["name"].as_str().unwrap()).collect();
    assert_eq!(
        names,
        [
            "tor_equivalence",
            "reciprocal_identity",
            "derotation_invariant",
            "heading_exactness",
            "constancy_score",
            "conformal_residual"
        ]
    );
    assert_eq!(check(&v, "constancy_score")["threshold"], 1e-9);
}

#[test]
fn verify_flow_and_noisy_budgets() {
    let dir = tempfile::tempdir().unwrap();
    let (code, v) = verify(&["--config", &config("cube_flow.json")], dir.path());
    assert_eq!(code, Some(0));
    assert_eq!(check(&v, "constancy_score")["threshold"], 1e-2);

    let (code, v) = verify(&["--config", &config("cube_noisy.json")], dir.path());
    assert_eq!(code, Some(0));
    let c = check(&v, "constancy_score");
    assert!(c["threshold"].as_f64().unwrap() > 1e-9);
    assert!(c["note"].as_str().unwrap().contains("noisy"));
}

#[test]
fn verify_fails_on_inconsistent_cues_and_rejects_corrupt_files() {
    let dir = tempfile::tempdir().unwrap();
    let sim = simulate("cube.json", dir.path());
    let cues = sim.join("cues.csv");
    // Scale L of one point in one frame: the cloud is no longer rigid.
    let text = fs::read_to_string(&cues).unwrap();
    let mut lines: Vec<String> = text.lines().map(String::from).collect();
    let mut fields: Vec<String> = lines[20].split(',').map(String::from).collect();
    fields[5] = format!("{:.16e}", fields[5].parse::<f64>().unwrap() * 1.5);
    lines[20] = fields.join(",");
    fs::write(&cues, lines.join("\n") + "\n").unwrap();
    let (code, v) = verify(&["--config", &config("cube.json"), "--cues", p(&cues)], dir.path());
    assert_eq!(code, Some(1));
    assert_eq!(check(&v, "constancy_score")["pass"], false);

    fs::write(&cues, "frame,time,point_id\n1,2\n").unwrap();
    let (code, _) = verify(&["--config", &config("cube.json"), "--cues", p(&cues)], dir.path());
    assert_eq!(code, Some(2));
}
