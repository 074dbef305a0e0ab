//! Scaled structure and heading from per-point cues, and rigid-shape constancy.
//!
//! Reconstructed points are in seconds: the line of sight scaled by `|r| / |t|`.

use std::collections::{BTreeMap, HashSet};

use nalgebra::{Matrix3, SymmetricEigen, Vector3, SVD};
use serde::{Deserialize, Serialize};

use crate::cues::CueSample;
use crate::error::{Error, Result};
use crate::geom::{Quaternion, Vec3, UNIT_TOLERANCE};
use crate::owl::EPSILON_MAG;

/// Normal matrices with a larger condition number are treated as rank-deficient.
pub const MAX_CONDITION: f64 = 1e12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScaledPoint {
    pub point_id: u64,
    pub p: Vec3,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Reject {
    pub point_id: u64,
    pub reason: String,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ReconstructedCloud {
    pub time: f64,
    pub frame: usize,
    pub points: Vec<ScaledPoint>,
    pub rejects: Vec<Reject>,
}

impl ReconstructedCloud {
    pub fn by_id(&self) -> BTreeMap<u64, Vec3> {
        self.points.iter().map(|s| (s.point_id, s.p)).collect()
    }

    /// Largest pairwise distance between points.
    pub fn diameter(&self) -> f64 {
        let mut d: f64 = 0.0;
        for (i, a) in self.points.iter().enumerate() {
            for b in &self.points[i + 1..] {
                d = d.max(a.p.distance(b.p));
            }
        }
        d
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HeadingEstimate {
    pub t_hat: Vec3,
    pub residual_rms: f64,
    pub n_points: usize,
}

fn cue_magnitude(looming: f64, omega: Vec3) -> Result<f64> {
    let mag = (looming * looming + omega.norm_squared()).sqrt();
    if !(mag > EPSILON_MAG) {
        return Err(Error::ZeroMagnitude(mag));
    }
    Ok(mag)
}

/// `|r| / |t| = 1 / sqrt(L^2 + |omega|^2)` in seconds.
pub fn scaled_range(looming: f64, omega: Vec3) -> Result<f64> {
    Ok(1.0 / cue_magnitude(looming, omega)?)
}

/// Scaled cloud of one frame. Samples whose ratio is too small to invert, or whose
/// id repeats, are listed in `rejects`; the rest are sorted by point id.
pub fn reconstruct_cloud(samples: &[CueSample]) -> ReconstructedCloud {
    let (time, frame) = samples.first().map_or((0.0, 0), |s| (s.time, s.frame));
    let mut points = Vec::with_capacity(samples.len());
    let mut rejects = Vec::new();
    let mut seen = HashSet::new();
    for s in samples {
        if !seen.insert(s.point_id) {
            rejects.push(Reject {
                point_id: s.point_id,
                reason: "duplicate point id".into(),
            });
            continue;
        }
        match scaled_range(s.looming, s.omega) {
            Ok(range) => points.push(ScaledPoint {
                point_id: s.point_id,
                p: s.e_r * range,
            }),
            Err(e) => rejects.push(Reject {
                point_id: s.point_id,
                reason: e.to_string(),
            }),
        }
    }
    points.sort_by_key(|p| p.point_id);
    ReconstructedCloud {
        time,
        frame,
        points,
        rejects,
    }
}

/// Unit heading `(L e_r + omega x e_r) / sqrt(L^2 + |omega|^2)` from one point.
pub fn heading_per_point(looming: f64, omega: Vec3, e_r: Vec3) -> Result<Vec3> {
    let mag = cue_magnitude(looming, omega)?;
    if (e_r.norm() - 1.0).abs() > UNIT_TOLERANCE {
        return Err(Error::NotUnitVector(e_r.norm()));
    }
    Ok((e_r * looming + omega.cross(e_r)) / mag)
}

/// Cone half-angle between heading and line of sight, in `[0, pi]`.
pub fn alpha_from_cues(looming: f64, omega: Vec3) -> Result<f64> {
    cue_magnitude(looming, omega)?;
    Ok(omega.norm().atan2(looming))
}

fn to_na(v: Vec3) -> Vector3<f64> {
    Vector3::new(v.x, v.y, v.z)
}

fn from_na(v: &Vector3<f64>) -> Vec3 {
    Vec3::new(v[0], v[1], v[2])
}

/// Least-squares intersection of cones `t . e_r = cos(alpha)` about the unit lines
/// of sight `e_r`: solves the 3x3 normal equations and normalizes.
pub fn heading_cones(constraints: &[(Vec3, f64)]) -> Result<HeadingEstimate> {
    if constraints.len() < 3 {
        return Err(Error::InsufficientPoints {
            needed: 3,
            got: constraints.len(),
        });
    }
    let mut a = Matrix3::zeros();
    let mut b = Vector3::zeros();
    for &(e, alpha) in constraints {
        let e = to_na(e);
        a += e * e.transpose();
        b += e * alpha.cos();
    }
    let eig = SymmetricEigen::new(a).eigenvalues;
    let (lo, hi) = (eig.min(), eig.max());
    if !(lo > 0.0) || hi / lo > MAX_CONDITION {
        return Err(Error::DegenerateGeometry(format!(
            "line-of-sight normal matrix has condition number {:e}",
            hi / lo.max(0.0)
        )));
    }
    let x = a
        .cholesky()
        .ok_or_else(|| Error::DegenerateGeometry("normal matrix is not positive definite".into()))?
        .solve(&b);
    let t_hat = from_na(&x)
        .normalized()
        .map_err(|_| Error::DegenerateGeometry("cone system has the zero solution".into()))?;
    let sq: f64 = constraints
        .iter()
        .map(|&(e, alpha)| (t_hat.dot(e) - alpha.cos()).powi(2))
        .sum();
    Ok(HeadingEstimate {
        t_hat,
        residual_rms: (sq / constraints.len() as f64).sqrt(),
        n_points: constraints.len(),
    })
}

/// Mean of per-point headings, renormalized. `residual_rms` is the RMS angle [rad]
/// between the individual headings and the mean.
pub fn heading_mean(samples: &[CueSample]) -> Result<HeadingEstimate> {
    if samples.is_empty() {
        return Err(Error::InsufficientPoints { needed: 1, got: 0 });
    }
    let headings = samples
        .iter()
        .map(|s| heading_per_point(s.looming, s.omega, s.e_r))
        .collect::<Result<Vec<_>>>()?;
    let sum = headings.iter().fold(Vec3::ZERO, |acc, h| acc + *h);
    let t_hat = sum
        .normalized()
        .map_err(|_| Error::DegenerateGeometry("per-point headings cancel out".into()))?;
    let sq: f64 = headings
        .iter()
        .map(|h| h.cross(t_hat).norm().atan2(h.dot(t_hat)).powi(2))
        .sum();
    Ok(HeadingEstimate {
        t_hat,
        residual_rms: (sq / headings.len() as f64).sqrt(),
        n_points: headings.len(),
    })
}

/// Cone constraints `(e_r, alpha)` of a frame, in input order.
pub fn cone_constraints(samples: &[CueSample]) -> Result<Vec<(Vec3, f64)>> {
    samples
        .iter()
        .map(|s| Ok((s.e_r, alpha_from_cues(s.looming, s.omega)?)))
        .collect()
}

/// Transform taking cloud `a` onto cloud `b`: `b ~ scale * rotate(a) + translation`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Alignment {
    pub rotation: Quaternion,
    pub translation: Vec3,
    pub scale: f64,
    pub rms: f64,
}

impl Alignment {
    pub fn apply(&self, p: Vec3) -> Result<Vec3> {
        Ok(self.rotation.rotate(p)? * self.scale + self.translation)
    }
}

/// Least-squares rigid (or similarity) alignment over shared point ids, without
/// reflections.
pub fn procrustes_align(
    a: &ReconstructedCloud,
    b: &ReconstructedCloud,
    allow_scale: bool,
) -> Result<Alignment> {
    let bm = b.by_id();
    let pairs: Vec<(Vector3<f64>, Vector3<f64>)> = a
        .by_id()
        .into_iter()
        .filter_map(|(id, p)| bm.get(&id).map(|q| (to_na(p), to_na(*q))))
        .collect();
    if pairs.len() < 3 {
        return Err(Error::InsufficientCorrespondence {
            needed: 3,
            got: pairs.len(),
        });
    }
    let n = pairs.len() as f64;
    let ca = pairs.iter().map(|(p, _)| p).sum::<Vector3<f64>>() / n;
    let cb = pairs.iter().map(|(_, q)| q).sum::<Vector3<f64>>() / n;
    let mut cov = Matrix3::zeros();
    let mut scatter = Matrix3::zeros();
    let mut var_a = 0.0;
    for (p, q) in &pairs {
        let (pa, qb) = (p - ca, q - cb);
        cov += qb * pa.transpose();
        scatter += pa * pa.transpose();
        var_a += pa.norm_squared();
    }
    let spread = SymmetricEigen::new(scatter).eigenvalues;
    let mut spread: Vec<f64> = spread.iter().copied().collect();
    spread.sort_by(|x, y| y.total_cmp(x));
    if !(spread[1] > 1e-12 * spread[0]) {
        return Err(Error::DegenerateGeometry("aligned points are collinear".into()));
    }

    let svd = SVD::new(cov, true, true);
    let (u, v_t) = match (svd.u, svd.v_t) {
        (Some(u), Some(v_t)) => (u, v_t),
        _ => return Err(Error::DegenerateGeometry("SVD did not converge".into())),
    };
    let mut d = Matrix3::identity();
    if (u * v_t).determinant() < 0.0 {
        d[(2, 2)] = -1.0;
    }
    let rot = u * d * v_t;
    let scale = if allow_scale {
        (svd.singular_values.component_mul(&d.diagonal())).sum() / var_a
    } else {
        1.0
    };
    let trans = cb - rot * ca * scale;
    let sq: f64 = pairs
        .iter()
        .map(|(p, q)| (rot * p * scale + trans - q).norm_squared())
        .sum();

    let uq = nalgebra::UnitQuaternion::from_matrix(&rot);
    let mut rotation = Quaternion::new(uq.w, Vec3::new(uq.i, uq.j, uq.k));
    if rotation.w < 0.0 {
        rotation = rotation.scale(-1.0);
    }
    Ok(Alignment {
        rotation,
        translation: from_na(&trans),
        scale,
        rms: (sq / n).sqrt(),
    })
}

/// Worst alignment residual over consecutive clouds, relative to the diameter of
/// the first cloud.
pub fn constancy_score(clouds: &[ReconstructedCloud], allow_scale: bool) -> Result<f64> {
    if clouds.len() < 2 {
        return Err(Error::InsufficientPoints {
            needed: 2,
            got: clouds.len(),
        });
    }
    let diameter = clouds[0].diameter();
    if !(diameter > 0.0) {
        return Err(Error::DegenerateGeometry("first cloud has zero diameter".into()));
    }
    let mut worst: f64 = 0.0;
    for w in clouds.windows(2) {
        worst = worst.max(procrustes_align(&w[0], &w[1], allow_scale)?.rms);
    }
    Ok(worst / diameter)
}

/// Angle [rad] between two nonzero vectors.
pub fn angle_between(a: Vec3, b: Vec3) -> f64 {
    a.cross(b).norm().atan2(a.dot(b))
}
