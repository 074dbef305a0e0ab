//! Looming and perceived rotation as a translation-over-range ratio, its reciprocal
//! (OWL), and scaled reconstruction and heading recovery built on it.

// `!(x > limit)` is used on purpose so that NaN is rejected along with small values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cues;
pub mod error;
pub mod geom;
pub mod owl;
pub mod recon;
pub mod sim;

pub use cues::{CameraState, CueSample, Cues, FlowRates};
pub use error::{Error, Result};
pub use geom::{Quaternion, SphericalBasis, SphericalBearing, Vec3};
pub use owl::{ComplexVal, RoT, ToR};
pub use recon::{HeadingEstimate, ReconstructedCloud, ScaledPoint};
pub use sim::{SceneConfig, Simulation, Track};
