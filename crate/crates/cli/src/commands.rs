use std::fs;
use std::path::{Path, PathBuf};

use serde::Deserialize;
use serde_json::{json, Value};

use owl_core::cues::{cues_oracle, derotate, flow_rates, motion_field};
use owl_core::geom::{bearing_of, Quaternion};
use owl_core::owl::{
    fit_circle_algebraic, iso_looming_sphere, iso_omega_torus, owl_complex, owl_trajectory,
    rot_from_tor, tor_from_cues, tor_from_vectors, ComplexVal,
};
use owl_core::recon::{
    angle_between, cone_constraints, constancy_score, heading_cones, heading_mean,
    heading_per_point, reconstruct_cloud, ReconstructedCloud,
};
use owl_core::sim::{rotation_at, simulate, CueMode, TrajectorySpec, TruthSample};
use owl_core::{CueSample, SceneConfig, Track, Vec3};

use crate::error::CliError;
use crate::io;
use crate::manifest::{digest_bytes, Manifest};

fn ensure_dir(dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))
}

/// `<dir>/<stem>.manifest.json` next to a single output file.
fn manifest_path(out: &Path) -> PathBuf {
    let stem = out.file_stem().and_then(|s| s.to_str()).unwrap_or("output");
    out.with_file_name(format!("{stem}.manifest.json"))
}

fn file_name(p: &Path) -> String {
    p.file_name().map_or_else(|| p.display().to_string(), |n| n.to_string_lossy().into_owned())
}

fn load_scene(path: &Path) -> Result<(SceneConfig, Value), CliError> {
    let (config, raw): (SceneConfig, Value) = io::read_json(path)?;
    config.validate()?;
    Ok((config, raw))
}

pub fn simulate_cmd(config_path: &Path, out_dir: &Path) -> Result<(), CliError> {
    let (config, raw) = load_scene(config_path)?;
    let sim = simulate(&config)?;
    ensure_dir(out_dir)?;
    io::write(&out_dir.join("cues.csv"), &io::cues_csv(&sim.cues))?;
    io::write(&out_dir.join("truth.csv"), &io::truth_csv(&sim.truth))?;

    let mut m = Manifest::new("simulate", raw);
    m.seed = Some(config.seed);
    m.metric("n_rows", sim.cues.len());
    m.metric("n_frames", config.n_frames);
    m.metric("n_flagged", sim.flagged.len());
    m.outputs = vec!["cues.csv".into(), "truth.csv".into()];
    m.extra.insert(
        "flagged".into(),
        sim.flagged
            .iter()
            .map(|f| json!({"frame": f.frame, "point_id": f.point_id, "reason": f.reason}))
            .collect(),
    );
    io::write_json(&out_dir.join("manifest.json"), &m.to_json())
}

pub enum FrameSelection {
    One(usize),
    All,
}

pub fn reconstruct_cmd(
    cues_path: &Path,
    out_dir: &Path,
    speed: Option<f64>,
    selection: FrameSelection,
) -> Result<(), CliError> {
    if let Some(s) = speed {
        if !(s > 0.0 && s.is_finite()) {
            return Err(CliError::Usage(format!("--speed must be positive, got {s}")));
        }
    }
    let bytes = fs::read(cues_path).map_err(|e| CliError::io(cues_path, e))?;
    let rows = io::read_cues(cues_path)?;
    let frames = io::by_frame(&rows, |c| c.frame);
    let selected: Vec<usize> = match selection {
        FrameSelection::All => frames.keys().copied().collect(),
        FrameSelection::One(k) => {
            if !frames.contains_key(&k) {
                let range = match (frames.keys().next(), frames.keys().last()) {
                    (Some(a), Some(b)) => format!("{a}..={b}"),
                    _ => "none".into(),
                };
                return Err(CliError::Usage(format!(
                    "--frame {k} has no cue rows (frames present: {range})"
                )));
            }
            vec![k]
        }
    };
    ensure_dir(out_dir)?;
    let (scale, units) = match speed {
        Some(s) => (s, "meters"),
        None => (1.0, "seconds"),
    };
    let mut outputs = Vec::new();
    let mut rejects = serde_json::Map::new();
    let (mut n_points, mut n_rejects) = (0, 0);
    for k in &selected {
        let cloud = reconstruct_cloud(&frames[k]);
        let pts: Vec<Vec3> = cloud.points.iter().map(|p| p.p * scale).collect();
        let name = format!("cloud_{k}.ply");
        io::write(&out_dir.join(&name), &io::ply(&pts, &format!("units {units}")))?;
        outputs.push(name);
        n_points += pts.len();
        n_rejects += cloud.rejects.len();
        if !cloud.rejects.is_empty() {
            rejects.insert(
                k.to_string(),
                cloud
                    .rejects
                    .iter()
                    .map(|r| json!({"point_id": r.point_id, "reason": r.reason}))
                    .collect(),
            );
        }
    }
    let mut m = Manifest::new(
        "reconstruct",
        json!({"cues_digest": digest_bytes(&bytes), "speed": speed, "frames": selected}),
    );
    m.metric("n_frames", selected.len());
    m.metric("n_points", n_points);
    m.metric("n_rejects", n_rejects);
    m.metric("units", units);
    m.outputs = outputs;
    m.extra.insert("rejects".into(), Value::Object(rejects));
    io::write_json(&out_dir.join("reconstruct.manifest.json"), &m.to_json())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum HeadingMethod {
    PerPoint,
    Cones,
}

impl HeadingMethod {
    fn name(self) -> &'static str {
        match self {
            HeadingMethod::PerPoint => "per-point",
            HeadingMethod::Cones => "cones",
        }
    }
}

/// Mean relative translation direction of a frame's ground truth.
fn truth_heading(rows: &[TruthSample]) -> Option<Vec3> {
    rows.iter()
        .filter_map(|s| s.t.normalized().ok())
        .fold(Vec3::ZERO, |a, t| a + t)
        .normalized()
        .ok()
}

pub fn heading_cmd(
    cues_path: &Path,
    frame: usize,
    method: HeadingMethod,
    out: &Path,
    truth_path: Option<&Path>,
) -> Result<(), CliError> {
    let bytes = fs::read(cues_path).map_err(|e| CliError::io(cues_path, e))?;
    let rows = io::read_cues(cues_path)?;
    let samples: Vec<CueSample> = rows.into_iter().filter(|c| c.frame == frame).collect();
    let est = match method {
        HeadingMethod::PerPoint => heading_mean(&samples)?,
        HeadingMethod::Cones => heading_cones(&cone_constraints(&samples)?)?,
    };
    let mut result = json!({
        "frame": frame,
        "method": method.name(),
        "t_hat": est.t_hat.to_array(),
        "residual_rms": est.residual_rms,
        "n_points": est.n_points,
    });
    let mut m = Manifest::new(
        "heading",
        json!({"cues_digest": digest_bytes(&bytes), "frame": frame, "method": method.name()}),
    );
    m.metric("residual_rms", est.residual_rms);
    m.metric("n_points", est.n_points);
    if let Some(tp) = truth_path {
        let truth: Vec<TruthSample> =
            io::read_truth(tp)?.into_iter().filter(|s| s.frame == frame).collect();
        let t = truth_heading(&truth)
            .ok_or_else(|| CliError::Data(format!("{}: no usable truth rows for frame {frame}", tp.display())))?;
        let err = angle_between(est.t_hat, t);
        result["heading_error_rad"] = json!(err);
        m.metric("heading_error_rad", err);
    }
    if let Some(dir) = out.parent().filter(|p| !p.as_os_str().is_empty()) {
        ensure_dir(dir)?;
    }
    io::write_json(out, &result)?;
    m.outputs = vec![file_name(out)];
    io::write_json(&manifest_path(out), &m.to_json())
}

fn default_normal() -> Vec3 {
    Vec3::Z
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SampleTimes {
    #[serde(default)]
    start: f64,
    dt: f64,
    n: usize,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct TrackSpec {
    name: String,
    /// Point position relative to an observer fixed at the origin.
    trajectory: TrajectorySpec,
    /// Multiplies both positions and velocities.
    #[serde(default = "one")]
    scale: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct OwlmapConfig {
    #[serde(default = "default_normal")]
    plane_normal: Vec3,
    times: SampleTimes,
    tracks: Vec<TrackSpec>,
}

pub fn owlmap_cmd(config_path: &Path, out: &Path) -> Result<(), CliError> {
    let (cfg, raw): (OwlmapConfig, Value) = io::read_json(config_path)?;
    let invalid = |field: &str, msg: &str| CliError::Config(format!("invalid config field `{field}`: {msg}"));
    if !(cfg.times.dt > 0.0 && cfg.times.dt.is_finite()) {
        return Err(invalid("times.dt", "must be positive"));
    }
    if cfg.times.n == 0 {
        return Err(invalid("times.n", "must be at least 1"));
    }
    if cfg.tracks.is_empty() {
        return Err(invalid("tracks", "at least one track is required"));
    }
    let times: Vec<f64> = (0..cfg.times.n)
        .map(|i| cfg.times.start + i as f64 * cfg.times.dt)
        .collect();
    let mut text = String::from("track,index,time,re,im\n");
    let mut n_samples = 0;
    for (ti, spec) in cfg.tracks.iter().enumerate() {
        if !(spec.scale > 0.0 && spec.scale.is_finite()) {
            return Err(invalid(&format!("tracks[{ti}].scale"), "must be positive"));
        }
        let base = Track::from_trajectory(ti as u64, &spec.trajectory, &times)
            .map_err(|e| CliError::Config(format!("track `{}`: {e}", spec.name)))?;
        let track = Track {
            rel_positions: base.rel_positions.iter().map(|r| *r * spec.scale).collect(),
            rel_velocities: base.rel_velocities.iter().map(|t| *t * spec.scale).collect(),
            ..base
        };
        let traj = owl_trajectory(&track, cfg.plane_normal)
            .map_err(|e| CliError::Data(format!("track `{}`: {e}", spec.name)))?;
        for (i, (time, w)) in traj.iter().enumerate() {
            text.push_str(&format!(
                "{},{i},{},{},{}\n",
                spec.name,
                io::fmt_f64(*time),
                io::fmt_f64(w.re),
                io::fmt_f64(w.im)
            ));
        }
        n_samples += traj.len();
    }
    if let Some(dir) = out.parent().filter(|p| !p.as_os_str().is_empty()) {
        ensure_dir(dir)?;
    }
    io::write(out, &text)?;
    let mut m = Manifest::new("owlmap", raw);
    m.metric("n_tracks", cfg.tracks.len());
    m.metric("n_samples", n_samples);
    m.outputs = vec![file_name(out)];
    io::write_json(&manifest_path(out), &m.to_json())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum IsoKind {
    Sphere,
    Torus,
}

pub fn iso_cmd(kind: IsoKind, t_mag: f64, level: f64, samples: usize, out: &Path) -> Result<(), CliError> {
    let points = match kind {
        IsoKind::Sphere => iso_looming_sphere(t_mag, level, samples),
        IsoKind::Torus => iso_omega_torus(t_mag, level, samples),
    }
    .map_err(|e| CliError::Usage(e.to_string()))?;
    let t = Vec3::X * t_mag;
    let mut max_dev: f64 = 0.0;
    for r in &points {
        let c = cues_oracle(t, *r)?;
        let value = match kind {
            IsoKind::Sphere => c.looming,
            IsoKind::Torus => c.omega.norm(),
        };
        max_dev = max_dev.max((value - level).abs());
    }
    let (kind_name, quantity) = match kind {
        IsoKind::Sphere => ("sphere", "looming"),
        IsoKind::Torus => ("torus", "omega"),
    };
    if let Some(dir) = out.parent().filter(|p| !p.as_os_str().is_empty()) {
        ensure_dir(dir)?;
    }
    io::write(
        out,
        &io::ply(&points, &format!("iso-{quantity} {kind_name}, heading +x, units meters")),
    )?;
    let mut m = Manifest::new(
        "iso",
        json!({"kind": kind_name, "t_mag": t_mag, "level": level, "samples": samples}),
    );
    m.metric("n_points", points.len());
    m.metric("max_self_oracle_deviation", max_dev);
    if kind == IsoKind::Torus {
        let ring = points.iter().map(|p| p.norm()).fold(0.0, f64::max);
        m.metric("equatorial_ring_radius", ring);
    }
    m.outputs = vec![file_name(out)];
    io::write_json(&manifest_path(out), &m.to_json())
}

struct Check {
    name: &'static str,
    value: f64,
    threshold: f64,
    note: String,
}

impl Check {
    fn passed(&self) -> bool {
        self.value <= self.threshold
    }

    fn json(&self) -> Value {
        json!({
            "name": self.name,
            "value": self.value,
            "threshold": self.threshold,
            "pass": self.passed(),
            "note": self.note,
        })
    }
}

fn max_over<T>(items: &[T], f: impl Fn(&T) -> Result<f64, CliError>) -> Result<f64, CliError> {
    items.iter().try_fold(0.0f64, |m, x| Ok(m.max(f(x)?)))
}

/// Image of 100 lines (none through the origin) under the display inversion:
/// worst circle-fit residual and worst distance of the fitted circle from the origin.
fn conformal_residual() -> Result<(f64, f64), CliError> {
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    let (mut worst_fit, mut worst_origin) = (0.0f64, 0.0f64);
    for i in 0..100 {
        let dir = ComplexVal::from_polar(1.0, golden * i as f64);
        let offset = dir * ComplexVal::i() * (0.5 + 0.05 * i as f64);
        let image: Vec<ComplexVal> = (0..64)
            .map(|s| owl_complex(offset + dir * (-5.0 + 10.0 * s as f64 / 63.0)))
            .collect::<Result<_, _>>()?;
        let fit = fit_circle_algebraic(&image)?;
        worst_fit = worst_fit.max(fit.residual_rms);
        worst_origin = worst_origin.max((fit.center.norm() - fit.radius).abs());
    }
    Ok((worst_fit, worst_origin))
}

pub fn verify_cmd(config_path: &Path, cues_path: Option<&Path>, out: &Path) -> Result<(), CliError> {
    let (config, raw) = load_scene(config_path)?;
    let sim = simulate(&config)?;
    let cues = match cues_path {
        Some(p) => io::read_cues(p)?,
        None => sim.cues.clone(),
    };
    let truth = &sim.truth;
    let mut checks = Vec::new();

    let tor_eq = max_over(truth, |s| {
        let c = cues_oracle(s.t, s.r)?;
        let a = tor_from_vectors(s.t, s.r)?.0;
        let b = tor_from_cues(c.looming, c.omega).0;
        Ok(a.max_abs_diff(b) / a.norm().max(1.0))
    })?;
    checks.push(Check {
        name: "tor_equivalence",
        value: tor_eq,
        threshold: 1e-12,
        note: "ToR from vectors vs from cues, relative to max(1, |ToR|)".into(),
    });

    let recip = max_over(truth, |s| {
        let tor = tor_from_vectors(s.t, s.r)?;
        let rot = rot_from_tor(tor)?;
        Ok((tor.0 * rot.0).max_abs_diff(Quaternion::IDENTITY))
    })?;
    checks.push(Check {
        name: "reciprocal_identity",
        value: recip,
        threshold: 1e-12,
        note: "ToR * RoT vs identity".into(),
    });

    let derot = max_over(truth, |s| {
        let spin = rotation_at(&config.rotation_profile, s.time);
        let bearing = bearing_of(s.r)?;
        let fr = flow_rates(s.r, motion_field(s.t, spin, s.r))?;
        let omega = derotate(fr, bearing, spin)?;
        let oracle = cues_oracle(s.t, s.r)?.omega;
        Ok((omega - oracle).max_abs() / oracle.norm().max(1.0))
    })?;
    checks.push(Check {
        name: "derotation_invariant",
        value: derot,
        threshold: 1e-12,
        note: "de-rotated motion field vs oracle omega".into(),
    });

    let heading = max_over(truth, |s| {
        let c = cues_oracle(s.t, s.r)?;
        let h = heading_per_point(c.looming, c.omega, s.r / s.r.norm())?;
        Ok(match s.t.normalized() {
            Ok(t) => (h - t).max_abs(),
            Err(_) => 0.0,
        })
    })?;
    checks.push(Check {
        name: "heading_exactness",
        value: heading,
        threshold: 1e-12,
        note: "per-point heading vs t/|t|".into(),
    });

    let frames = io::by_frame(&cues, |c| c.frame);
    let clouds: Vec<ReconstructedCloud> = frames.values().map(|f| reconstruct_cloud(f)).collect();
    let allow_scale = !matches!(config.camera, TrajectorySpec::Rectilinear { .. });
    let score = constancy_score(&clouds, allow_scale)?;
    let (threshold, note) = if config.noise.is_active() {
        let sigma = config.noise.sigma_l.max(config.noise.sigma_omega * 2f64.sqrt());
        let s_max = clouds
            .iter()
            .flat_map(|c| c.points.iter().map(|p| p.p.norm()))
            .fold(0.0, f64::max);
        let budget = 6.0 * sigma * s_max * s_max / clouds[0].diameter();
        let flow = if config.mode == CueMode::Flow { 1e-2 } else { 0.0 };
        (budget + flow, "noisy budget 6 sigma s_max^2 / diameter".to_owned())
    } else {
        match config.mode {
            CueMode::Oracle => (1e-9, "oracle cues".to_owned()),
            CueMode::Flow => (1e-2, "finite-difference cues".to_owned()),
        }
    };
    checks.push(Check {
        name: "constancy_score",
        value: score,
        threshold,
        note: format!("{note}; allow_scale = {allow_scale}"),
    });

    let (fit, origin) = conformal_residual()?;
    checks.push(Check {
        name: "conformal_residual",
        value: fit.max(origin),
        threshold: 1e-9,
        note: "100 lines mapped to circles through the origin".into(),
    });

    let failed = checks.iter().filter(|c| !c.passed()).count();
    let result = json!({
        "pass": failed == 0,
        "checks": checks.iter().map(Check::json).collect::<Vec<_>>(),
    });
    if let Some(dir) = out.parent().filter(|p| !p.as_os_str().is_empty()) {
        ensure_dir(dir)?;
    }
    io::write_json(out, &result)?;
    let mut m = Manifest::new("verify", raw);
    m.seed = Some(config.seed);
    for c in &checks {
        m.metric(c.name, c.value);
    }
    m.outputs = vec![file_name(out)];
    io::write_json(&manifest_path(out), &m.to_json())?;
    for c in &checks {
        println!(
            "{:<22} {:>12.3e} <= {:>9.1e}  {}",
            c.name,
            c.value,
            c.threshold,
            if c.passed() { "PASS" } else { "FAIL" }
        );
    }
    if failed > 0 {
        return Err(CliError::VerifyFailed(failed));
    }
    Ok(())
}
