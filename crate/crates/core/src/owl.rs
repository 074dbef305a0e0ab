//! The ratio of relative translation to range and its reciprocal.
//!
//! In the plane the ratio is the complex number `L + j omega` [1/s]; in space it is
//! the quaternion `ToR = T R^-1 = (L, omega)`. The reciprocal `RoT` has units of
//! seconds and magnitude `|r| / |t|`. The display form of the planar reciprocal is
//! rotated a quarter turn counter-clockwise so that the direction of motion points up.

use std::f64::consts::{FRAC_PI_2, PI};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::cues::{cues_oracle, omega_scalar_2d};
use crate::error::{Error, Result};
use crate::geom::{Quaternion, Vec3};
use crate::sim::Track;

pub type ComplexVal = Complex64;

/// Ratios with magnitude at or below this [1/s] have no finite reciprocal.
pub const EPSILON_MAG: f64 = 1e-12;

/// Translation-over-range quaternion: scalar part `L`, vector part `omega`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ToR(pub Quaternion);

/// Range-over-translation quaternion, the inverse of [`ToR`]. Units: seconds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RoT(pub Quaternion);

impl ToR {
    pub fn looming(&self) -> f64 {
        self.0.w
    }

    pub fn omega(&self) -> Vec3 {
        self.0.v
    }

    /// `sqrt(L^2 + |omega|^2) = |t| / |r|`.
    pub fn magnitude(&self) -> f64 {
        self.0.norm()
    }
}

impl RoT {
    /// `|r| / |t|` in seconds.
    pub fn magnitude(&self) -> f64 {
        self.0.norm()
    }
}

pub fn tover_r_complex(looming: f64, omega_scalar: f64) -> ComplexVal {
    Complex64::new(looming, omega_scalar)
}

/// Planar OWL value `j / z`: the reciprocal of `z`, displayed rotated by +90 degrees.
pub fn owl_complex(z: ComplexVal) -> Result<ComplexVal> {
    let mag = z.norm();
    if !(mag > EPSILON_MAG) {
        return Err(Error::ZeroMagnitude(mag));
    }
    Ok(Complex64::i() * z.inv())
}

pub fn tor_from_cues(looming: f64, omega: Vec3) -> ToR {
    ToR(Quaternion::new(looming, omega))
}

/// `T R^-1` evaluated with quaternion algebra on the pure quaternions of `t` and `r`.
pub fn tor_from_vectors(t: Vec3, r: Vec3) -> Result<ToR> {
    let range = r.norm();
    if !(range > crate::cues::EPSILON_RANGE) {
        return Err(Error::RangeTooSmall(range));
    }
    let r_inv = Quaternion::pure(r).inverse()?;
    Ok(ToR(Quaternion::pure(t) * r_inv))
}

/// `RoT = conj(ToR) / |ToR|^2`.
pub fn rot_from_tor(x: ToR) -> Result<RoT> {
    let mag = x.magnitude();
    if !(mag > EPSILON_MAG) {
        return Err(Error::ZeroMagnitude(mag));
    }
    Ok(RoT(x.0.inverse()?))
}

/// Maps every sample of a planar track into the display OWL plane.
///
/// Returns `(time, owl)` pairs in track order. The observer sits at the origin of
/// the track's frame and `plane_normal` orients the signed rotation.
pub fn owl_trajectory(track: &Track, plane_normal: Vec3) -> Result<Vec<(f64, ComplexVal)>> {
    let normal = plane_normal;
    if (normal.norm() - 1.0).abs() > crate::cues::PLANAR_TOLERANCE {
        return Err(Error::NotUnitVector(normal.norm()));
    }
    let mut out = Vec::with_capacity(track.len());
    for (i, ((&time, &r), &t)) in track
        .times
        .iter()
        .zip(&track.rel_positions)
        .zip(&track.rel_velocities)
        .enumerate()
    {
        for v in [r, t] {
            let off = v.dot(normal).abs();
            if off > crate::cues::PLANAR_TOLERANCE * v.norm().max(1.0) {
                return Err(Error::NotPlanar(off));
            }
        }
        let cues = cues_oracle(t, r)?;
        let z = tover_r_complex(cues.looming, omega_scalar_2d(cues.omega, normal)?);
        if !(z.norm() > EPSILON_MAG) {
            return Err(Error::ZeroVelocitySample(i));
        }
        out.push((time, owl_complex(z)?));
    }
    Ok(out)
}

fn check_positive(value: f64, name: &'static str) -> Result<()> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::NonPositiveParameter(name))
    }
}

/// Direction at angle `alpha` from +x, rotated by `azimuth` about +x.
fn cone_direction(alpha: f64, azimuth: f64) -> Vec3 {
    let (sa, ca) = alpha.sin_cos();
    let (sz, cz) = azimuth.sin_cos();
    Vec3::new(ca, sa * cz, sa * sz)
}

/// Points of constant looming `L` for translation `t_mag * x_hat`.
///
/// The locus `|r| = (t_mag / L) cos(alpha)` is a sphere of diameter `t_mag / L`
/// through the camera. `alpha` steps by `pi / (2 n)` over `[0, pi/2)`, the azimuth
/// by the same step; the boresight sample is emitted once.
pub fn iso_looming_sphere(t_mag: f64, looming: f64, n_samples: usize) -> Result<Vec<Vec3>> {
    check_positive(t_mag, "t_mag")?;
    check_positive(looming, "level")?;
    if n_samples == 0 {
        return Err(Error::NonPositiveParameter("samples"));
    }
    let diameter = t_mag / looming;
    let step = FRAC_PI_2 / n_samples as f64;
    let n_az = 4 * n_samples;
    let mut points = vec![Vec3::X * diameter];
    for i in 1..n_samples {
        let alpha = step * i as f64;
        for j in 0..n_az {
            let az = 2.0 * PI * j as f64 / n_az as f64;
            points.push(cone_direction(alpha, az) * (diameter * alpha.cos()));
        }
    }
    Ok(points)
}

/// Points of constant `|omega|` for translation `t_mag * x_hat`.
///
/// The locus `|r| = (t_mag / w_mag) |sin(alpha)|` is a spindle torus through the
/// camera. `alpha` covers `(0, pi)` in steps of `pi / (2 n)`, so the ring at
/// `alpha = pi/2` is always present.
pub fn iso_omega_torus(t_mag: f64, w_mag: f64, n_samples: usize) -> Result<Vec<Vec3>> {
    check_positive(t_mag, "t_mag")?;
    check_positive(w_mag, "level")?;
    if n_samples == 0 {
        return Err(Error::NonPositiveParameter("samples"));
    }
    let scale = t_mag / w_mag;
    let step = FRAC_PI_2 / n_samples as f64;
    let n_az = 4 * n_samples;
    let mut points = Vec::with_capacity((2 * n_samples - 1) * n_az);
    for i in 1..2 * n_samples {
        let alpha = step * i as f64;
        for j in 0..n_az {
            let az = 2.0 * PI * j as f64 / n_az as f64;
            points.push(cone_direction(alpha, az) * (scale * alpha.sin()));
        }
    }
    Ok(points)
}

/// Algebraic circle `x^2 + y^2 + d x + e y + f = 0` fitted by linear least squares.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircleFit {
    pub center: ComplexVal,
    pub radius: f64,
    /// Constant term of the implicit equation; zero for circles through the origin.
    pub f: f64,
    /// Root-mean-square of the implicit equation over the fitted points.
    pub residual_rms: f64,
}

pub fn fit_circle_algebraic(points: &[ComplexVal]) -> Result<CircleFit> {
    if points.len() < 3 {
        return Err(Error::InsufficientPoints {
            needed: 3,
            got: points.len(),
        });
    }
    let n = points.len();
    let a = DMatrix::from_fn(n, 3, |i, j| match j {
        0 => points[i].re,
        1 => points[i].im,
        _ => 1.0,
    });
    let b = DVector::from_fn(n, |i, _| -points[i].norm_sqr());
    let svd = a.svd(true, true);
    let (smax, smin) = (svd.singular_values.max(), svd.singular_values.min());
    if !(smin > 1e-12 * smax) {
        return Err(Error::DegenerateGeometry("collinear circle-fit samples".into()));
    }
    let sol = svd
        .solve(&b, 0.0)
        .map_err(|e| Error::DegenerateGeometry(e.to_string()))?;
    let (d, e, f) = (sol[0], sol[1], sol[2]);
    let sum_sq: f64 = points
        .iter()
        .map(|p| {
            let res = p.norm_sqr() + d * p.re + e * p.im + f;
            res * res
        })
        .sum();
    let center = Complex64::new(-0.5 * d, -0.5 * e);
    Ok(CircleFit {
        center,
        radius: (center.norm_sqr() - f).max(0.0).sqrt(),
        f,
        residual_rms: (sum_sq / n as f64).sqrt(),
    })
}
