//! Perceived looming `L` and perceived rotation `omega` per point.
//!
//! Two routes produce the same cues: the closed form on the relative geometry
//! (`cues_oracle`) and angular flow rates with the camera's own rotation removed
//! (`flow_rates` + `derotate`, or `cues_from_track` on sampled positions).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{basis_from_bearing, bearing_of, Quaternion, SphericalBearing, Vec3};
use crate::sim::Track;

/// Ranges at or below this (meters) are rejected: both cues divide by `|r|`.
pub const EPSILON_RANGE: f64 = 1e-9;

/// Tolerance for the planar check in [`omega_scalar_2d`].
pub const PLANAR_TOLERANCE: f64 = 1e-9;

/// Camera pose and motion at one instant.
///
/// `orientation` maps camera-frame vectors to the world frame. `velocity_t` is the
/// relative translation `t` and `omega_cam` the camera rotation, both expressed in
/// the camera frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CameraState {
    pub position: Vec3,
    pub orientation: Quaternion,
    pub velocity_t: Vec3,
    pub omega_cam: Vec3,
}

/// Looming [1/s] and perceived rotation vector [rad/s] of one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cues {
    pub looming: f64,
    pub omega: Vec3,
}

/// One row of the cue table: the cues of one point at one frame.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CueSample {
    pub frame: usize,
    pub time: f64,
    pub point_id: u64,
    pub looming: f64,
    pub omega: Vec3,
    pub e_r: Vec3,
    pub bearing: SphericalBearing,
}

impl CueSample {
    pub fn cues(&self) -> Cues {
        Cues {
            looming: self.looming,
            omega: self.omega,
        }
    }
}

/// Angular flow of a point in spherical coordinates: `rdot/r`, `theta_dot`, `phi_dot`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlowRates {
    pub r_dot_over_r: f64,
    pub theta_dot: f64,
    pub phi_dot: f64,
}

/// Velocity of a scene point in the camera frame: `-t - Omega x r`.
pub fn motion_field(t: Vec3, omega_cam: Vec3, r: Vec3) -> Vec3 {
    -t - omega_cam.cross(r)
}

fn checked_range(r: Vec3) -> Result<f64> {
    let range = r.norm();
    if !(range > EPSILON_RANGE) {
        return Err(Error::RangeTooSmall(range));
    }
    Ok(range)
}

/// Closed-form cues from the relative translation `t` and range vector `r`.
///
/// `L = t.e_r / |r|` (positive while the range shrinks) and
/// `omega = -(t x e_r) / |r|`, which is orthogonal to the line of sight.
pub fn cues_oracle(t: Vec3, r: Vec3) -> Result<Cues> {
    let range = checked_range(r)?;
    let e_r = r / range;
    Ok(Cues {
        looming: t.dot(e_r) / range,
        omega: e_r.cross(t) / range,
    })
}

/// Decomposes the motion field `v_f` of the point at `r` into spherical rates.
pub fn flow_rates(r: Vec3, v_f: Vec3) -> Result<FlowRates> {
    let range = checked_range(r)?;
    let bearing = bearing_of(r)?;
    let basis = basis_from_bearing(bearing)?;
    let (vr, vt, vp) = basis.components(v_f);
    Ok(FlowRates {
        r_dot_over_r: vr / range,
        theta_dot: vt / (range * bearing.phi.cos()),
        phi_dot: vp / range,
    })
}

/// Removes the camera rotation from measured angular rates.
///
/// `omega_phi = -theta_dot cos(phi) - Omega_phi`, `omega_theta = phi_dot - Omega_theta`.
pub fn derotate(fr: FlowRates, bearing: SphericalBearing, omega_cam: Vec3) -> Result<Vec3> {
    let basis = basis_from_bearing(bearing)?;
    let (_, cam_theta, cam_phi) = basis.components(omega_cam);
    let w_phi = -fr.theta_dot * bearing.phi.cos() - cam_phi;
    let w_theta = fr.phi_dot - cam_theta;
    Ok(basis.e_theta * w_theta + basis.e_phi * w_phi)
}

/// Shortest signed angular difference `a - b`, wrapped to (-pi, pi].
pub fn wrap_angle_diff(a: f64, b: f64) -> f64 {
    use std::f64::consts::{PI, TAU};
    let mut d = (a - b) % TAU;
    if d > PI {
        d -= TAU;
    } else if d <= -PI {
        d += TAU;
    }
    d
}

/// Cues at sample `k` of a track by central differences of log-range and bearing,
/// de-rotated with the camera rotation `omega_cam` at that sample.
pub fn cues_from_track(track: &Track, k: usize, omega_cam: Vec3) -> Result<Cues> {
    let n = track.len();
    if n < 3 || k == 0 || k + 1 >= n {
        return Err(Error::IndexOutOfRange {
            index: k,
            min: 1,
            max: n.saturating_sub(2),
        });
    }
    let (r_prev, r_next) = (track.rel_positions[k - 1], track.rel_positions[k + 1]);
    let span = track.times[k + 1] - track.times[k - 1];
    let range_prev = checked_range(r_prev)?;
    let range_next = checked_range(r_next)?;
    checked_range(track.rel_positions[k])?;

    let b_prev = bearing_of(r_prev)?;
    let b_next = bearing_of(r_next)?;
    let bearing = bearing_of(track.rel_positions[k])?;
    for b in [b_prev, b_next] {
        if b.is_polar() {
            return Err(Error::PolarSingularity(b.phi));
        }
    }

    let looming = -(range_next / range_prev).ln() / span;
    let fr = FlowRates {
        r_dot_over_r: -looming,
        theta_dot: wrap_angle_diff(b_next.theta, b_prev.theta) / span,
        phi_dot: (b_next.phi - b_prev.phi) / span,
    };
    let omega = derotate(fr, bearing, omega_cam)?;
    Ok(Cues { looming, omega })
}

/// Signed planar perceived rotation: the component of `omega` along the unit
/// plane normal. Positive is counter-clockwise seen from the normal's tip.
pub fn omega_scalar_2d(omega: Vec3, plane_normal: Vec3) -> Result<f64> {
    let n = plane_normal.norm();
    if (n - 1.0).abs() > PLANAR_TOLERANCE {
        return Err(Error::NotUnitVector(n));
    }
    let along = omega.dot(plane_normal);
    let off = (omega - plane_normal * along).norm();
    if off > PLANAR_TOLERANCE {
        return Err(Error::NotPlanar(off));
    }
    Ok(along)
}
