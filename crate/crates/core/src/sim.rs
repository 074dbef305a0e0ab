//! Synthetic scenes: rigid objects, a moving and rotating camera, and per-point
//! cue tables in oracle or flow mode.
//!
//! The camera looks along its +x axis with +z up; bearings near ±z are polar and
//! get flagged rather than emitted. Everything is expressed in the camera frame
//! after `relative_track`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cues::{cues_from_track, cues_oracle, CameraState, CueSample, Cues};
use crate::error::{Error, Result};
use crate::geom::{basis_from_bearing, bearing_of, Quaternion, Vec3, UNIT_TOLERANCE};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CueMode {
    #[default]
    Oracle,
    Flow,
}

/// Additive Gaussian noise on the cues: `sigma_l` on `L`, `sigma_omega` on each of
/// the two tangential components of `omega`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseSpec {
    #[serde(default)]
    pub enabled: bool,
    #[serde(default)]
    pub sigma_l: f64,
    #[serde(default)]
    pub sigma_omega: f64,
}

impl NoiseSpec {
    pub fn is_active(&self) -> bool {
        self.enabled && (self.sigma_l > 0.0 || self.sigma_omega > 0.0)
    }
}

/// Camera rotation `omega` [rad/s] (camera frame) from `start` until the next segment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RotationSegment {
    pub start: f64,
    pub omega: Vec3,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Waypoint {
    pub time: f64,
    pub position: Vec3,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum TrajectorySpec {
    Rectilinear {
        start: Vec3,
        velocity: Vec3,
    },
    ConstantAccel {
        start: Vec3,
        velocity: Vec3,
        acceleration: Vec3,
    },
    /// Circle in the plane `z = center.z`.
    Circular {
        center: Vec3,
        radius: f64,
        angular_rate: f64,
        #[serde(default)]
        phase: f64,
    },
    /// Piecewise-linear motion through timed waypoints.
    Polyline { waypoints: Vec<Waypoint> },
}

impl TrajectorySpec {
    /// Position and velocity at `time`.
    pub fn kinematics(&self, time: f64) -> Result<(Vec3, Vec3)> {
        if !time.is_finite() {
            return Err(Error::TimeOutOfRange(time));
        }
        Ok(match self {
            TrajectorySpec::Rectilinear { start, velocity } => (*start + *velocity * time, *velocity),
            TrajectorySpec::ConstantAccel {
                start,
                velocity,
                acceleration,
            } => (
                *start + *velocity * time + *acceleration * (0.5 * time * time),
                *velocity + *acceleration * time,
            ),
            TrajectorySpec::Circular {
                center,
                radius,
                angular_rate,
                phase,
            } => {
                let (s, c) = (phase + angular_rate * time).sin_cos();
                (
                    *center + Vec3::new(c, s, 0.0) * *radius,
                    Vec3::new(-s, c, 0.0) * (radius * angular_rate),
                )
            }
            TrajectorySpec::Polyline { waypoints } => {
                let (first, last) = match (waypoints.first(), waypoints.last()) {
                    (Some(f), Some(l)) if waypoints.len() >= 2 => (f, l),
                    _ => return Err(Error::config("waypoints", "need at least 2 waypoints")),
                };
                if time < first.time || time > last.time {
                    return Err(Error::TimeOutOfRange(time));
                }
                // Segment whose start is the last waypoint at or before `time`.
                let idx = waypoints[..waypoints.len() - 1]
                    .iter()
                    .rposition(|w| w.time <= time)
                    .unwrap_or(0);
                let (a, b) = (waypoints[idx], waypoints[idx + 1]);
                let vel = (b.position - a.position) / (b.time - a.time);
                (a.position + vel * (time - a.time), vel)
            }
        })
    }

    fn validate(&self, field: &str, horizon: (f64, f64)) -> Result<()> {
        match self {
            TrajectorySpec::Rectilinear { velocity, .. } if velocity.norm() == 0.0 => Err(
                Error::config(format!("{field}.velocity"), "rectilinear velocity must be nonzero"),
            ),
            TrajectorySpec::Circular { radius, .. } if !(*radius > 0.0) => {
                Err(Error::config(format!("{field}.radius"), "must be positive"))
            }
            TrajectorySpec::Polyline { waypoints } => {
                if waypoints.len() < 2 {
                    return Err(Error::config(
                        format!("{field}.waypoints"),
                        "need at least 2 waypoints",
                    ));
                }
                if waypoints.windows(2).any(|w| !(w[1].time > w[0].time)) {
                    return Err(Error::config(
                        format!("{field}.waypoints"),
                        "waypoint times must be strictly increasing",
                    ));
                }
                let (lo, hi) = (waypoints[0].time, waypoints[waypoints.len() - 1].time);
                if lo > horizon.0 || hi < horizon.1 {
                    return Err(Error::config(
                        format!("{field}.waypoints"),
                        format!("must cover the sampled interval [{}, {}]", horizon.0, horizon.1),
                    ));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CubeSampling {
    /// Points on the 12 edges (corners included once).
    #[default]
    Edges,
    /// Full `n^3` lattice.
    Lattice,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ObjectShape {
    /// Axis-aligned (in object coordinates) cube centred on the object position.
    Cube {
        size: f64,
        samples_per_edge: usize,
        #[serde(default)]
        sampling: CubeSampling,
    },
    /// Points `i * u + j * v` for `i < nu`, `j < nv`.
    Grid {
        u: Vec3,
        v: Vec3,
        nu: usize,
        nv: usize,
    },
    PointList { points: Vec<Vec3> },
}

fn identity_wxyz() -> [f64; 4] {
    [1.0, 0.0, 0.0, 0.0]
}

/// A rigid, non-rotating body translating with constant `velocity`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObjectSpec {
    #[serde(flatten)]
    pub shape: ObjectShape,
    #[serde(default)]
    pub position: Vec3,
    /// Scalar-first unit quaternion rotating object coordinates into the world.
    #[serde(default = "identity_wxyz")]
    pub orientation: [f64; 4],
    #[serde(default)]
    pub velocity: Vec3,
}

impl ObjectSpec {
    /// Object-frame sample points in enumeration order.
    fn local_points(&self) -> Vec<Vec3> {
        match &self.shape {
            ObjectShape::Cube {
                size,
                samples_per_edge,
                sampling,
            } => {
                let n = *samples_per_edge;
                let coord = |i: usize| -0.5 * size + size * i as f64 / (n - 1) as f64;
                let extreme = |i: usize| i == 0 || i == n - 1;
                let mut pts = Vec::new();
                for i in 0..n {
                    for j in 0..n {
                        for k in 0..n {
                            let on_edge = [i, j, k].iter().filter(|&&c| extreme(c)).count() >= 2;
                            if *sampling == CubeSampling::Lattice || on_edge {
                                pts.push(Vec3::new(coord(i), coord(j), coord(k)));
                            }
                        }
                    }
                }
                pts
            }
            ObjectShape::Grid { u, v, nu, nv } => (0..*nu)
                .flat_map(|i| (0..*nv).map(move |j| *u * i as f64 + *v * j as f64))
                .collect(),
            ObjectShape::PointList { points } => points.clone(),
        }
    }

    fn validate(&self, field: &str) -> Result<()> {
        match &self.shape {
            ObjectShape::Cube {
                size,
                samples_per_edge,
                ..
            } => {
                if !(*size > 0.0) {
                    return Err(Error::config(format!("{field}.size"), "must be positive"));
                }
                if *samples_per_edge < 2 {
                    return Err(Error::config(
                        format!("{field}.samples_per_edge"),
                        "must be at least 2",
                    ));
                }
            }
            ObjectShape::Grid { nu, nv, .. } => {
                if *nu == 0 || *nv == 0 {
                    return Err(Error::config(format!("{field}.nu/nv"), "must be at least 1"));
                }
            }
            ObjectShape::PointList { points } => {
                if points.is_empty() {
                    return Err(Error::config(format!("{field}.points"), "must not be empty"));
                }
            }
        }
        let q = Quaternion::from_wxyz(self.orientation);
        if (q.norm() - 1.0).abs() > UNIT_TOLERANCE {
            return Err(Error::config(
                format!("{field}.orientation"),
                format!("must be a unit quaternion (norm {})", q.norm()),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SceneConfig {
    pub objects: Vec<ObjectSpec>,
    pub camera: TrajectorySpec,
    #[serde(default)]
    pub rotation_profile: Vec<RotationSegment>,
    pub dt: f64,
    pub n_frames: usize,
    #[serde(default)]
    pub mode: CueMode,
    #[serde(default)]
    pub noise: NoiseSpec,
    #[serde(default)]
    pub seed: u64,
}

impl SceneConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::config("dt", format!("must be positive, got {}", self.dt)));
        }
        let min_frames = match self.mode {
            CueMode::Oracle => 1,
            CueMode::Flow => 2,
        };
        if self.n_frames < min_frames {
            return Err(Error::config(
                "n_frames",
                format!("must be at least {min_frames} in {:?} mode", self.mode),
            ));
        }
        if self.objects.is_empty() {
            return Err(Error::config("objects", "at least one object is required"));
        }
        for (i, o) in self.objects.iter().enumerate() {
            o.validate(&format!("objects[{i}]"))?;
        }
        self.camera.validate("camera", self.horizon())?;
        if let Some(first) = self.rotation_profile.first() {
            if first.start != 0.0 {
                return Err(Error::config("rotation_profile[0].start", "must be 0"));
            }
        }
        if self
            .rotation_profile
            .windows(2)
            .any(|w| !(w[1].start > w[0].start))
        {
            return Err(Error::config(
                "rotation_profile",
                "segment starts must be strictly increasing",
            ));
        }
        let n = &self.noise;
        if !(n.sigma_l >= 0.0) || !(n.sigma_omega >= 0.0) {
            return Err(Error::config("noise", "sigmas must be non-negative"));
        }
        Ok(())
    }

    /// Sampled interval. Flow mode pads one step on each side for central differences.
    pub fn horizon(&self) -> (f64, f64) {
        let last = (self.n_frames.max(1) - 1) as f64 * self.dt;
        match self.mode {
            CueMode::Oracle => (0.0, last),
            CueMode::Flow => (-self.dt, last + self.dt),
        }
    }

    pub fn frame_time(&self, frame: usize) -> f64 {
        frame as f64 * self.dt
    }

    /// Track sample times; flow mode includes the padding samples.
    fn track_times(&self) -> Vec<f64> {
        match self.mode {
            CueMode::Oracle => (0..self.n_frames).map(|k| self.frame_time(k)).collect(),
            CueMode::Flow => (-1..=self.n_frames as i64)
                .map(|k| k as f64 * self.dt)
                .collect(),
        }
    }
}

/// Piecewise-constant camera rotation: the rate of the last segment started at or
/// before `time`, with the first segment extended backward to negative times.
pub fn rotation_at(profile: &[RotationSegment], time: f64) -> Vec3 {
    profile
        .iter()
        .rev()
        .find(|s| s.start <= time)
        .or(profile.first())
        .map_or(Vec3::ZERO, |s| s.omega)
}

/// Time-averaged rotation over `[t0, t1]`. Central differences over that window see
/// this mean rather than the instantaneous rate when a segment boundary falls inside.
pub fn mean_rotation(profile: &[RotationSegment], t0: f64, t1: f64) -> Vec3 {
    if !(t1 > t0) {
        return rotation_at(profile, t0);
    }
    let mut acc = Vec3::ZERO;
    for (i, seg) in profile.iter().enumerate() {
        let lo = if i == 0 { t0 } else { seg.start.max(t0) };
        let hi = profile.get(i + 1).map_or(t1, |n| n.start.min(t1));
        if hi > lo {
            acc += seg.omega * (hi - lo);
        }
    }
    acc / (t1 - t0)
}

/// Orientation at `time` (camera to world) integrated from identity at `t = 0`.
pub fn orientation_at(profile: &[RotationSegment], time: f64) -> Quaternion {
    let Some(first) = profile.first() else {
        return Quaternion::IDENTITY;
    };
    if time <= 0.0 {
        return Quaternion::from_rotation_vector(first.omega * time);
    }
    let mut q = Quaternion::IDENTITY;
    for (i, seg) in profile.iter().enumerate() {
        if seg.start >= time {
            break;
        }
        let end = profile.get(i + 1).map_or(time, |n| n.start.min(time));
        q = q * Quaternion::from_rotation_vector(seg.omega * (end - seg.start));
    }
    q
}

pub fn camera_state_at(
    traj: &TrajectorySpec,
    profile: &[RotationSegment],
    time: f64,
    horizon: (f64, f64),
) -> Result<CameraState> {
    // Slack for frame times computed as k * dt.
    let slack = 1e-12 * (horizon.1 - horizon.0).abs().max(1.0);
    if !(time >= horizon.0 - slack && time <= horizon.1 + slack) {
        return Err(Error::TimeOutOfRange(time));
    }
    let (position, velocity) = traj.kinematics(time)?;
    let orientation = orientation_at(profile, time);
    Ok(CameraState {
        position,
        orientation,
        velocity_t: orientation.conjugate().rotate(velocity)?,
        omega_cam: rotation_at(profile, time),
    })
}

/// A scene point in world coordinates with its constant velocity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScenePoint {
    pub id: u64,
    pub position: Vec3,
    pub velocity: Vec3,
}

impl ScenePoint {
    pub fn position_at(&self, time: f64) -> Vec3 {
        self.position + self.velocity * time
    }
}

/// Enumerates all object points: object order, then each object's lattice order.
/// Ids are contiguous from zero.
pub fn build_scene(config: &SceneConfig) -> Result<Vec<ScenePoint>> {
    config.validate()?;
    let mut out = Vec::new();
    for obj in &config.objects {
        let q = Quaternion::from_wxyz(obj.orientation).normalized()?;
        for p in obj.local_points() {
            out.push(ScenePoint {
                id: out.len() as u64,
                position: obj.position + q.rotate(p)?,
                velocity: obj.velocity,
            });
        }
    }
    Ok(out)
}

/// Relative motion of one point sampled over time, in the camera frame.
///
/// `rel_velocities` holds the relative translation `t` of the camera with respect
/// to the point (camera velocity minus point velocity), so that a shrinking range
/// has `t . r > 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct Track {
    pub point_id: u64,
    pub times: Vec<f64>,
    pub rel_positions: Vec<Vec3>,
    pub rel_velocities: Vec<Vec3>,
}

impl Track {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Builds a track from an arbitrary trajectory of the point relative to a
    /// static observer at the origin.
    pub fn from_trajectory(point_id: u64, traj: &TrajectorySpec, times: &[f64]) -> Result<Track> {
        let mut rel_positions = Vec::with_capacity(times.len());
        let mut rel_velocities = Vec::with_capacity(times.len());
        for &t in times {
            let (p, v) = traj.kinematics(t)?;
            rel_positions.push(p);
            rel_velocities.push(-v);
        }
        Ok(Track {
            point_id,
            times: times.to_vec(),
            rel_positions,
            rel_velocities,
        })
    }
}

pub fn relative_track(point: &ScenePoint, config: &SceneConfig) -> Result<Track> {
    let horizon = config.horizon();
    let times = config.track_times();
    let mut rel_positions = Vec::with_capacity(times.len());
    let mut rel_velocities = Vec::with_capacity(times.len());
    for &time in &times {
        let cam = camera_state_at(&config.camera, &config.rotation_profile, time, horizon)?;
        let (_, cam_velocity) = config.camera.kinematics(time)?;
        let to_camera = cam.orientation.conjugate();
        rel_positions.push(to_camera.rotate(point.position_at(time) - cam.position)?);
        rel_velocities.push(to_camera.rotate(cam_velocity - point.velocity)?);
    }
    Ok(Track {
        point_id: point.id,
        times,
        rel_positions,
        rel_velocities,
    })
}

/// Ground truth for one emitted cue row.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruthSample {
    pub frame: usize,
    pub time: f64,
    pub point_id: u64,
    pub r: Vec3,
    pub t: Vec3,
}

/// A (frame, point) pair for which no cue row was produced.
#[derive(Debug, Clone, PartialEq)]
pub struct FlaggedSample {
    pub frame: usize,
    pub point_id: u64,
    pub reason: String,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Simulation {
    pub cues: Vec<CueSample>,
    pub truth: Vec<TruthSample>,
    pub flagged: Vec<FlaggedSample>,
}

impl Simulation {
    /// Cue rows of one frame (rows are sorted by frame, then point id).
    pub fn frame(&self, frame: usize) -> &[CueSample] {
        let lo = self.cues.partition_point(|c| c.frame < frame);
        let hi = self.cues.partition_point(|c| c.frame <= frame);
        &self.cues[lo..hi]
    }

    pub fn truth_frame(&self, frame: usize) -> &[TruthSample] {
        let lo = self.truth.partition_point(|c| c.frame < frame);
        let hi = self.truth.partition_point(|c| c.frame <= frame);
        &self.truth[lo..hi]
    }
}

/// Counter-based generator keyed by `(seed, frame, point_id)`.
pub fn noise_rng(seed: u64, frame: usize, point_id: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&(frame as u64).to_le_bytes());
    key[16..24].copy_from_slice(&point_id.to_le_bytes());
    key[24..].copy_from_slice(b"owlnoise");
    ChaCha8Rng::from_seed(key)
}

fn apply_noise(cues: Cues, r: Vec3, noise: &NoiseSpec, rng: &mut ChaCha8Rng) -> Result<Cues> {
    let basis = basis_from_bearing(bearing_of(r)?)?;
    let n_l: f64 = StandardNormal.sample(rng);
    let n_theta: f64 = StandardNormal.sample(rng);
    let n_phi: f64 = StandardNormal.sample(rng);
    Ok(Cues {
        looming: cues.looming + noise.sigma_l * n_l,
        omega: cues.omega
            + basis.e_theta * (noise.sigma_omega * n_theta)
            + basis.e_phi * (noise.sigma_omega * n_phi),
    })
}

type PointRows = (Vec<(CueSample, TruthSample)>, Vec<FlaggedSample>);

fn simulate_point(point: &ScenePoint, config: &SceneConfig) -> Result<PointRows> {
    let track = relative_track(point, config)?;
    let offset = match config.mode {
        CueMode::Oracle => 0,
        CueMode::Flow => 1,
    };
    let mut rows = Vec::with_capacity(config.n_frames);
    let mut flagged = Vec::new();
    for frame in 0..config.n_frames {
        let k = frame + offset;
        let time = config.frame_time(frame);
        let (r, t) = (track.rel_positions[k], track.rel_velocities[k]);
        let omega_cam = match config.mode {
            CueMode::Oracle => rotation_at(&config.rotation_profile, time),
            CueMode::Flow => {
                mean_rotation(&config.rotation_profile, track.times[k - 1], track.times[k + 1])
            }
        };
        let computed = bearing_of(r).and_then(|bearing| {
            if bearing.is_polar() {
                return Err(Error::PolarSingularity(bearing.phi));
            }
            let cues = match config.mode {
                CueMode::Oracle => cues_oracle(t, r)?,
                CueMode::Flow => cues_from_track(&track, k, omega_cam)?,
            };
            let cues = if config.noise.is_active() {
                let mut rng = noise_rng(config.seed, frame, point.id);
                apply_noise(cues, r, &config.noise, &mut rng)?
            } else {
                cues
            };
            Ok((bearing, cues))
        });
        match computed {
            Ok((bearing, cues)) => rows.push((
                CueSample {
                    frame,
                    time,
                    point_id: point.id,
                    looming: cues.looming,
                    omega: cues.omega,
                    e_r: r / r.norm(),
                    bearing,
                },
                TruthSample {
                    frame,
                    time,
                    point_id: point.id,
                    r,
                    t,
                },
            )),
            Err(e @ (Error::PolarSingularity(_) | Error::RangeTooSmall(_) | Error::ZeroVector)) => {
                flagged.push(FlaggedSample {
                    frame,
                    point_id: point.id,
                    reason: e.to_string(),
                })
            }
            Err(e) => return Err(e),
        }
    }
    Ok((rows, flagged))
}

/// Runs the scene and returns cue rows, aligned ground truth and flagged samples,
/// all sorted by `(frame, point_id)`. Points are processed in parallel; the output
/// does not depend on scheduling.
pub fn simulate(config: &SceneConfig) -> Result<Simulation> {
    let points = build_scene(config)?;
    let per_point: Vec<PointRows> = points
        .par_iter()
        .map(|p| simulate_point(p, config))
        .collect::<Result<_>>()?;
    let mut rows: Vec<(CueSample, TruthSample)> = Vec::new();
    let mut flagged = Vec::new();
    for (r, f) in per_point {
        rows.extend(r);
        flagged.extend(f);
    }
    rows.sort_by_key(|(c, _)| (c.frame, c.point_id));
    flagged.sort_by_key(|f| (f.frame, f.point_id));
    let (cues, truth) = rows.into_iter().unzip();
    Ok(Simulation {
        cues,
        truth,
        flagged,
    })
}

/// Default scenes: a unit cube ahead of a camera in rectilinear motion, and a
/// street made of a ground grid and two facade grids.
pub mod presets {
    use super::*;

    pub fn cube_scene(mode: CueMode, n_frames: usize, dt: f64, velocity: Vec3) -> SceneConfig {
        SceneConfig {
            objects: vec![ObjectSpec {
                shape: ObjectShape::Cube {
                    size: 1.0,
                    samples_per_edge: 2,
                    sampling: CubeSampling::Edges,
                },
                position: Vec3::new(5.0, 0.3, 0.2),
                orientation: identity_wxyz(),
                velocity: Vec3::ZERO,
            }],
            camera: TrajectorySpec::Rectilinear {
                start: Vec3::ZERO,
                velocity,
            },
            rotation_profile: Vec::new(),
            dt,
            n_frames,
            mode,
            noise: NoiseSpec::default(),
            seed: 0,
        }
    }

    pub fn street_scene(mode: CueMode, n_frames: usize, dt: f64, speed: f64) -> SceneConfig {
        let grid = |position: Vec3, u: Vec3, v: Vec3, nu: usize, nv: usize| ObjectSpec {
            shape: ObjectShape::Grid { u, v, nu, nv },
            position,
            orientation: identity_wxyz(),
            velocity: Vec3::ZERO,
        };
        SceneConfig {
            objects: vec![
                // Ground plane 1.5 m below the camera.
                grid(Vec3::new(8.0, -4.0, -1.5), Vec3::X * 2.0, Vec3::Y * 2.0, 8, 5),
                // Facades on both sides of the street.
                grid(Vec3::new(8.0, 6.0, -1.5), Vec3::X * 2.0, Vec3::Z * 1.5, 8, 4),
                grid(Vec3::new(8.0, -6.0, -1.5), Vec3::X * 2.0, Vec3::Z * 1.5, 8, 4),
            ],
            camera: TrajectorySpec::Rectilinear {
                start: Vec3::ZERO,
                velocity: Vec3::X * speed,
            },
            rotation_profile: Vec::new(),
            dt,
            n_frames,
            mode,
            noise: NoiseSpec::default(),
            seed: 0,
        }
    }
}
