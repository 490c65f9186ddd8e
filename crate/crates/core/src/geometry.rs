//! Yaw-only rigid poses and pinhole projection.
//!
//! World frame is right-handed with z up. A body frame has +x forward,
//! +y left and +z up; yaw is the counterclockwise rotation about +z.
//! Cameras look along body +x, image u grows rightward and v downward.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::{Error, Result, Vec3};

/// Wrap an angle into `[-π, π)`.
pub fn normalize_angle(a: f64) -> f64 {
    let mut r = (a + PI).rem_euclid(TAU);
    if r >= TAU {
        r = 0.0;
    }
    let out = r - PI;
    if out >= PI {
        -PI
    } else {
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Pose {
    pub position: Vec3,
    /// Radians, counterclockwise about +z, in `[-π, π)`.
    pub yaw: f64,
}

impl Default for Pose {
    fn default() -> Self {
        Self::identity()
    }
}

impl Pose {
    pub fn new(position: Vec3, yaw: f64) -> Self {
        Self {
            position,
            yaw: normalize_angle(yaw),
        }
    }

    pub fn identity() -> Self {
        Self {
            position: Vec3::zeros(),
            yaw: 0.0,
        }
    }

    /// Map a body-frame point into the parent frame.
    pub fn transform_point(&self, p_body: &Vec3) -> Vec3 {
        rotate_z(self.yaw, p_body) + self.position
    }

    /// Rotate a body-frame direction into the parent frame (no translation).
    pub fn rotate_vector(&self, v_body: &Vec3) -> Vec3 {
        rotate_z(self.yaw, v_body)
    }

    pub fn inverse(&self) -> Pose {
        let yaw = normalize_angle(-self.yaw);
        Pose {
            position: -rotate_z(-self.yaw, &self.position),
            yaw,
        }
    }

    /// `self ∘ other`: apply `other` first, then `self`.
    pub fn compose(&self, other: &Pose) -> Pose {
        Pose {
            position: self.transform_point(&other.position),
            yaw: normalize_angle(self.yaw + other.yaw),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.position.iter().all(|c| c.is_finite()) && self.yaw.is_finite()
    }

    /// Unit forward (+x body) direction in the parent frame.
    pub fn forward(&self) -> Vec3 {
        Vec3::new(self.yaw.cos(), self.yaw.sin(), 0.0)
    }
}

/// Free-function form of [`Pose::transform_point`].
pub fn transform_point(pose: &Pose, p_body: &Vec3) -> Vec3 {
    pose.transform_point(p_body)
}

fn rotate_z(yaw: f64, v: &Vec3) -> Vec3 {
    let (s, c) = yaw.sin_cos();
    Vec3::new(c * v.x - s * v.y, s * v.x + c * v.y, v.z)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CameraIntrinsics {
    pub fx: f64,
    pub fy: f64,
    pub cx: f64,
    pub cy: f64,
    pub width: u32,
    pub height: u32,
}

impl Default for CameraIntrinsics {
    /// 960x720 stream with a ~55° horizontal field of view.
    fn default() -> Self {
        Self {
            fx: 920.0,
            fy: 920.0,
            cx: 480.0,
            cy: 360.0,
            width: 960,
            height: 720,
        }
    }
}

impl CameraIntrinsics {
    pub fn validate(&self) -> Result<()> {
        let ok = self.fx.is_finite()
            && self.fy.is_finite()
            && self.fx > 0.0
            && self.fy > 0.0
            && self.width >= 1
            && self.height >= 1
            && self.cx >= 0.0
            && self.cx < f64::from(self.width)
            && self.cy >= 0.0
            && self.cy < f64::from(self.height);
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidArgument(format!(
                "camera intrinsics out of range: {self:?}"
            )))
        }
    }

    /// Intrinsics for the same lens sampled `factor` times coarser.
    pub fn downsampled(&self, factor: u32) -> CameraIntrinsics {
        let f = f64::from(factor.max(1));
        let width = (self.width / factor.max(1)).max(1);
        let height = (self.height / factor.max(1)).max(1);
        CameraIntrinsics {
            fx: self.fx / f,
            fy: self.fy / f,
            cx: (self.cx / f).min(f64::from(width) - 1e-9),
            cy: (self.cy / f).min(f64::from(height) - 1e-9),
            width,
            height,
        }
    }

    /// Unit ray in the camera body frame through pixel `(u, v)`.
    pub fn ray_body(&self, u: f64, v: f64) -> Vec3 {
        // inverse of project_camera_frame with depth 1
        Vec3::new(1.0, -(u - self.cx) / self.fx, -(v - self.cy) / self.fy).normalize()
    }
}

/// Project a point already expressed in the camera body frame.
pub fn project_body(k: &CameraIntrinsics, p_body: &Vec3) -> Option<(f64, f64)> {
    let depth = p_body.x;
    if depth <= 0.0 {
        return None;
    }
    let right = -p_body.y;
    let up = p_body.z;
    Some((k.cx + k.fx * right / depth, k.cy - k.fy * up / depth))
}

/// Project a world point into the image of a camera at `camera_pose`.
/// Returns `None` for points at or behind the image plane.
pub fn project_point(camera_pose: &Pose, k: &CameraIntrinsics, p_world: &Vec3) -> Option<(f64, f64)> {
    let p_body = camera_pose.inverse().transform_point(p_world);
    project_body(k, &p_body)
}
