//! Small exact geometry: 3-vectors, Hamilton quaternions and local spherical frames.
//!
//! Spherical convention: `theta` is the azimuth measured from +x in the xy-plane,
//! `phi` the elevation from the xy-plane toward +z. The planar case is `phi = 0`
//! and the poles lie on the ±z axis.

use std::f64::consts::{FRAC_PI_2, PI};
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Bearings closer than this to a pole (in radians) are rejected.
pub const POLAR_TOLERANCE: f64 = 1e-9;

/// Allowed deviation of a unit quaternion's norm from 1.
pub const UNIT_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(try_from = "[f64; 3]", into = "[f64; 3]")]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vec3 {
    pub const ZERO: Vec3 = Vec3::new(0.0, 0.0, 0.0);
    pub const X: Vec3 = Vec3::new(1.0, 0.0, 0.0);
    pub const Y: Vec3 = Vec3::new(0.0, 1.0, 0.0);
    pub const Z: Vec3 = Vec3::new(0.0, 0.0, 1.0);

    #[inline]
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Vec3 { x, y, z }
    }

    /// Checked constructor: rejects NaN and infinite components.
    pub fn try_new(x: f64, y: f64, z: f64) -> Result<Self> {
        let v = Vec3 { x, y, z };
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::NonFinite("Vec3"))
        }
    }

    #[inline]
    pub fn dot(self, o: Vec3) -> f64 {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    #[inline]
    pub fn cross(self, o: Vec3) -> Vec3 {
        Vec3::new(
            self.y * o.z - self.z * o.y,
            self.z * o.x - self.x * o.z,
            self.x * o.y - self.y * o.x,
        )
    }

    #[inline]
    pub fn norm_squared(self) -> f64 {
        self.dot(self)
    }

    #[inline]
    pub fn norm(self) -> f64 {
        self.norm_squared().sqrt()
    }

    pub fn normalized(self) -> Result<Vec3> {
        let n = self.norm();
        if n == 0.0 {
            return Err(Error::ZeroVector);
        }
        Ok(self / n)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    /// Largest absolute component.
    pub fn max_abs(self) -> f64 {
        self.x.abs().max(self.y.abs()).max(self.z.abs())
    }

    pub fn distance(self, o: Vec3) -> f64 {
        (self - o).norm()
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }
}

impl TryFrom<[f64; 3]> for Vec3 {
    type Error = Error;

    fn try_from(a: [f64; 3]) -> Result<Self> {
        Vec3::try_new(a[0], a[1], a[2])
    }
}

impl From<Vec3> for [f64; 3] {
    fn from(v: Vec3) -> Self {
        v.to_array()
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    #[inline]
    fn add(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl AddAssign for Vec3 {
    #[inline]
    fn add_assign(&mut self, o: Vec3) {
        *self = *self + o;
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    #[inline]
    fn sub(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    #[inline]
    fn neg(self) -> Vec3 {
        Vec3::new(-self.x, -self.y, -self.z)
    }
}

impl Mul<f64> for Vec3 {
    type Output = Vec3;
    #[inline]
    fn mul(self, s: f64) -> Vec3 {
        Vec3::new(self.x * s, self.y * s, self.z * s)
    }
}

impl Mul<Vec3> for f64 {
    type Output = Vec3;
    #[inline]
    fn mul(self, v: Vec3) -> Vec3 {
        v * self
    }
}

impl Div<f64> for Vec3 {
    type Output = Vec3;
    #[inline]
    fn div(self, s: f64) -> Vec3 {
        Vec3::new(self.x / s, self.y / s, self.z / s)
    }
}

/// Hamilton quaternion, scalar-first.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Quaternion {
    pub w: f64,
    pub v: Vec3,
}

impl Quaternion {
    pub const IDENTITY: Quaternion = Quaternion::new(1.0, Vec3::ZERO);
    pub const ZERO: Quaternion = Quaternion::new(0.0, Vec3::ZERO);

    #[inline]
    pub const fn new(w: f64, v: Vec3) -> Self {
        Quaternion { w, v }
    }

    /// Pure quaternion `(0, v)`.
    #[inline]
    pub const fn pure(v: Vec3) -> Self {
        Quaternion { w: 0.0, v }
    }

    pub fn from_wxyz(q: [f64; 4]) -> Self {
        Quaternion::new(q[0], Vec3::new(q[1], q[2], q[3]))
    }

    /// Unit quaternion rotating by `angle` radians about `axis`.
    pub fn from_axis_angle(axis: Vec3, angle: f64) -> Result<Self> {
        let a = axis.normalized()?;
        let (s, c) = (0.5 * angle).sin_cos();
        Ok(Quaternion::new(c, a * s))
    }

    /// Exponential map of a rotation vector (axis times angle).
    pub fn from_rotation_vector(rv: Vec3) -> Self {
        let angle = rv.norm();
        if angle == 0.0 {
            return Quaternion::IDENTITY;
        }
        let (s, c) = (0.5 * angle).sin_cos();
        Quaternion::new(c, rv * (s / angle))
    }

    pub fn is_pure(&self) -> bool {
        self.w == 0.0
    }

    #[inline]
    pub fn conjugate(self) -> Quaternion {
        Quaternion::new(self.w, -self.v)
    }

    #[inline]
    pub fn norm_squared(self) -> f64 {
        self.w * self.w + self.v.norm_squared()
    }

    #[inline]
    pub fn norm(self) -> f64 {
        self.norm_squared().sqrt()
    }

    pub fn scale(self, s: f64) -> Quaternion {
        Quaternion::new(self.w * s, self.v * s)
    }

    /// `conj(q) / |q|^2`.
    pub fn inverse(self) -> Result<Quaternion> {
        let n2 = self.norm_squared();
        if n2 == 0.0 {
            return Err(Error::ZeroQuaternion);
        }
        Ok(self.conjugate().scale(1.0 / n2))
    }

    pub fn normalized(self) -> Result<Quaternion> {
        let n = self.norm();
        if n == 0.0 {
            return Err(Error::ZeroQuaternion);
        }
        Ok(self.scale(1.0 / n))
    }

    /// Largest absolute difference over the four components.
    pub fn max_abs_diff(self, o: Quaternion) -> f64 {
        (self.w - o.w).abs().max((self.v - o.v).max_abs())
    }

    /// Rotates `v` by the unit quaternion `self`: vector part of `q (0,v) q^-1`.
    pub fn rotate(self, v: Vec3) -> Result<Vec3> {
        let n = self.norm();
        if (n - 1.0).abs() > UNIT_TOLERANCE {
            return Err(Error::NotUnitQuaternion(n));
        }
        Ok((self * Quaternion::pure(v) * self.conjugate()).v)
    }
}

impl Mul for Quaternion {
    type Output = Quaternion;

    /// Hamilton product: `(a0, a)(b0, b) = (a0 b0 - a.b, a0 b + b0 a + a x b)`.
    #[inline]
    fn mul(self, o: Quaternion) -> Quaternion {
        Quaternion::new(
            self.w * o.w - self.v.dot(o.v),
            o.v * self.w + self.v * o.w + self.v.cross(o.v),
        )
    }
}

pub fn quat_mul(a: Quaternion, b: Quaternion) -> Quaternion {
    a * b
}

pub fn quat_inv(q: Quaternion) -> Result<Quaternion> {
    q.inverse()
}

pub fn rotate_vec(q: Quaternion, v: Vec3) -> Result<Vec3> {
    q.rotate(v)
}

/// Direction on the unit sphere as azimuth `theta` in (-pi, pi] and elevation
/// `phi` in [-pi/2, pi/2].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SphericalBearing {
    pub theta: f64,
    pub phi: f64,
}

impl SphericalBearing {
    pub fn new(theta: f64, phi: f64) -> Self {
        SphericalBearing { theta, phi }
    }

    pub fn is_polar(&self) -> bool {
        self.phi.abs() > FRAC_PI_2 - POLAR_TOLERANCE
    }
}

/// Right-handed orthonormal frame `(e_r, e_theta, e_phi)` at a bearing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphericalBasis {
    pub e_r: Vec3,
    pub e_theta: Vec3,
    pub e_phi: Vec3,
}

impl SphericalBasis {
    /// Components of `v` along `(e_r, e_theta, e_phi)`.
    pub fn components(&self, v: Vec3) -> (f64, f64, f64) {
        (v.dot(self.e_r), v.dot(self.e_theta), v.dot(self.e_phi))
    }
}

pub fn bearing_of(v: Vec3) -> Result<SphericalBearing> {
    let n = v.norm();
    if n == 0.0 {
        return Err(Error::ZeroVector);
    }
    if !n.is_finite() {
        return Err(Error::NonFinite("bearing_of"));
    }
    // atan2 form of asin(z / |v|); stays accurate close to the poles.
    let phi = v.z.atan2(v.x.hypot(v.y));
    let mut theta = v.y.atan2(v.x);
    if theta == -PI {
        theta = PI;
    }
    Ok(SphericalBearing { theta, phi })
}

/// Unit vector pointing along `b`.
pub fn vec_from_bearing(b: SphericalBearing) -> Vec3 {
    let (st, ct) = b.theta.sin_cos();
    let (sp, cp) = b.phi.sin_cos();
    Vec3::new(cp * ct, cp * st, sp)
}

pub fn basis_from_bearing(b: SphericalBearing) -> Result<SphericalBasis> {
    if b.is_polar() {
        return Err(Error::PolarSingularity(b.phi));
    }
    let (st, ct) = b.theta.sin_cos();
    let (sp, cp) = b.phi.sin_cos();
    Ok(SphericalBasis {
        e_r: Vec3::new(cp * ct, cp * st, sp),
        e_theta: Vec3::new(-st, ct, 0.0),
        e_phi: Vec3::new(-sp * ct, -sp * st, cp),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::{FRAC_PI_4, SQRT_2};

    fn close(a: Vec3, b: Vec3, tol: f64) -> bool {
        (a - b).max_abs() <= tol
    }

    fn random_quat(rng: &mut ChaCha8Rng) -> Quaternion {
        Quaternion::new(
            rng.random_range(-2.0..2.0),
            Vec3::new(
                rng.random_range(-2.0..2.0),
                rng.random_range(-2.0..2.0),
                rng.random_range(-2.0..2.0),
            ),
        )
    }

    #[test]
    fn hamilton_units() {
        let i = Quaternion::pure(Vec3::X);
        let j = Quaternion::pure(Vec3::Y);
        let k = Quaternion::pure(Vec3::Z);
        assert_eq!(i * j, k);
        assert_eq!(j * j, Quaternion::new(-1.0, Vec3::ZERO));
        assert_eq!(j * k, i);
        assert_eq!(k * i, j);
        let q = Quaternion::new(0.3, Vec3::new(1.0, -2.0, 0.5));
        assert_eq!(Quaternion::IDENTITY * q, q);
        assert_eq!(q * Quaternion::IDENTITY, q);
    }

    #[test]
    fn pure_product_rule() {
        let a = Vec3::new(1.0, 2.0, 3.0);
        let b = Vec3::new(-0.5, 4.0, 1.5);
        let p = Quaternion::pure(a) * Quaternion::pure(b);
        assert_eq!(p.w, -a.dot(b));
        assert_eq!(p.v, a.cross(b));
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(
            Quaternion::IDENTITY.inverse().unwrap(),
            Quaternion::IDENTITY
        );
        let q = Quaternion::pure(Vec3::new(0.0, 0.0, 2.0));
        assert_eq!(q.inverse().unwrap(), Quaternion::pure(Vec3::new(0.0, 0.0, -0.5)));
        assert_eq!(Quaternion::ZERO.inverse(), Err(Error::ZeroQuaternion));
        assert!(Quaternion::pure(Vec3::X).is_pure());
    }

    #[test]
    fn inverse_and_associativity_on_random_samples() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100_000 {
            let a = random_quat(&mut rng);
            let b = random_quat(&mut rng);
            let c = random_quat(&mut rng);
            if a.norm() < 1e-3 {
                continue;
            }
            let inv = a.inverse().unwrap();
            let prod = a * inv;
            assert!(prod.max_abs_diff(Quaternion::IDENTITY) < 1e-12, "{prod:?}");
            let back = inv.inverse().unwrap();
            assert!(back.max_abs_diff(a) <= 1e-10 * a.norm());
            let l = (a * b) * c;
            let r = a * (b * c);
            let scale = a.norm() * b.norm() * c.norm();
            assert!(l.max_abs_diff(r) <= 1e-10 * scale);
        }
    }

    #[test]
    fn rotation_examples() {
        let v = Vec3::new(1.0, 2.0, 3.0);
        assert_eq!(Quaternion::IDENTITY.rotate(v).unwrap(), v);
        let q = Quaternion::from_axis_angle(Vec3::Z, FRAC_PI_2).unwrap();
        assert!(close(q.rotate(Vec3::X).unwrap(), Vec3::Y, 1e-15));
        let bad = Quaternion::new(2.0, Vec3::ZERO);
        assert!(matches!(bad.rotate(v), Err(Error::NotUnitQuaternion(_))));
    }

    #[test]
    fn rotation_preserves_norm() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..10_000 {
            let q = random_quat(&mut rng).normalized().unwrap();
            let v = Vec3::new(
                rng.random_range(-1.0..1.0),
                rng.random_range(-1.0..1.0),
                rng.random_range(-1.0..1.0),
            );
            let w = rotate_vec(q, v).unwrap();
            assert!((w.norm() - v.norm()).abs() < 1e-12);
        }
    }

    #[test]
    fn bearing_examples() {
        let b = bearing_of(Vec3::X).unwrap();
        assert_eq!((b.theta, b.phi), (0.0, 0.0));
        let b = bearing_of(Vec3::Y).unwrap();
        assert_eq!((b.theta, b.phi), (FRAC_PI_2, 0.0));
        let b = bearing_of(Vec3::Z).unwrap();
        assert_eq!((b.theta, b.phi), (0.0, FRAC_PI_2));
        assert_eq!(bearing_of(Vec3::ZERO), Err(Error::ZeroVector));
        // -0.0 in y would give -pi; the range is (-pi, pi].
        let b = bearing_of(Vec3::new(-1.0, -0.0, 0.0)).unwrap();
        assert_eq!(b.theta, PI);
    }

    #[test]
    fn basis_examples() {
        let b = basis_from_bearing(SphericalBearing::new(0.0, 0.0)).unwrap();
        assert_eq!((b.e_r, b.e_theta, b.e_phi), (Vec3::X, Vec3::Y, Vec3::Z));
        let b = basis_from_bearing(SphericalBearing::new(FRAC_PI_2, 0.0)).unwrap();
        assert!(close(b.e_r, Vec3::Y, 1e-16));
        assert!(close(b.e_theta, -Vec3::X, 1e-16));
        assert!(close(b.e_phi, Vec3::Z, 1e-16));
        let b = basis_from_bearing(SphericalBearing::new(0.0, FRAC_PI_4)).unwrap();
        let h = SQRT_2 / 2.0;
        assert!(close(b.e_r, Vec3::new(h, 0.0, h), 1e-15));
        assert!(close(b.e_phi, Vec3::new(-h, 0.0, h), 1e-15));
        assert!(matches!(
            basis_from_bearing(SphericalBearing::new(0.3, FRAC_PI_2)),
            Err(Error::PolarSingularity(_))
        ));
        assert!(matches!(
            basis_from_bearing(SphericalBearing::new(0.3, -FRAC_PI_2)),
            Err(Error::PolarSingularity(_))
        ));
    }

    #[test]
    fn basis_is_orthonormal_right_handed() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let lim = FRAC_PI_2 - 1e-3;
        for _ in 0..10_000 {
            let b = SphericalBearing::new(rng.random_range(-PI..PI), rng.random_range(-lim..lim));
            let f = basis_from_bearing(b).unwrap();
            for e in [f.e_r, f.e_theta, f.e_phi] {
                assert!((e.norm() - 1.0).abs() < 1e-12);
            }
            assert!(f.e_r.dot(f.e_theta).abs() < 1e-12);
            assert!(f.e_r.dot(f.e_phi).abs() < 1e-12);
            assert!(f.e_theta.dot(f.e_phi).abs() < 1e-12);
            assert!(close(f.e_r.cross(f.e_theta), f.e_phi, 1e-12));
            assert!(close(f.e_r, vec_from_bearing(b), 0.0));
        }
    }

    #[test]
    fn non_finite_rejected() {
        assert!(Vec3::try_new(f64::NAN, 0.0, 0.0).is_err());
        assert!(Vec3::try_from([0.0, f64::INFINITY, 0.0]).is_err());
        let v: Vec3 = serde_json::from_str("[1.0, 2.0, 3.0]").unwrap();
        assert_eq!(v, Vec3::new(1.0, 2.0, 3.0));
    }

    proptest::proptest! {
        #[test]
        fn bearing_round_trip(theta in -PI..PI, phi in -(FRAC_PI_2 - 1e-6)..(FRAC_PI_2 - 1e-6)) {
            // theta = -pi is outside the half-open range and maps to +pi.
            proptest::prop_assume!(theta > -PI);
            let b = SphericalBearing::new(theta, phi);
            let back = bearing_of(vec_from_bearing(b)).unwrap();
            proptest::prop_assert!((back.theta - theta).abs() < 1e-12);
            proptest::prop_assert!((back.phi - phi).abs() < 1e-12);
        }
    }
}
