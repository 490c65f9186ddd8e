use nalgebra::{Matrix4, Vector4};
use serde::{Deserialize, Serialize};

use crate::geometry::{normalize_angle, Pose};
use crate::{Error, Result, Vec3};

/// One marker's independent estimate of the camera pose.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MarkerObservation {
    pub marker_id: u32,
    pub camera_pose_estimate: Pose,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoseEstimate {
    pub pose: Pose,
    /// Covariance of the mean over `(x, y, z, yaw)`.
    pub covariance: Matrix4<f64>,
    pub marker_count: usize,
}

/// Fuse per-marker camera estimates: mean position, circular-mean yaw and
/// the sample covariance divided by `N` (zero for a single marker).
pub fn estimate_pose(observations: &[MarkerObservation]) -> Result<PoseEstimate> {
    if observations.is_empty() {
        return Err(Error::NoFix);
    }
    let n = observations.len() as f64;
    let position = observations
        .iter()
        .fold(Vec3::zeros(), |acc, o| acc + o.camera_pose_estimate.position)
        / n;
    let (s, c) = observations.iter().fold((0.0, 0.0), |(s, c), o| {
        let (sy, cy) = o.camera_pose_estimate.yaw.sin_cos();
        (s + sy, c + cy)
    });
    let yaw = normalize_angle(s.atan2(c));

    let mut covariance = Matrix4::zeros();
    if observations.len() > 1 {
        for o in observations {
            let p = o.camera_pose_estimate.position - position;
            let dyaw = normalize_angle(o.camera_pose_estimate.yaw - yaw);
            let d = Vector4::new(p.x, p.y, p.z, dyaw);
            covariance += d * d.transpose();
        }
        covariance /= (n - 1.0) * n;
    }

    Ok(PoseEstimate {
        pose: Pose { position, yaw },
        covariance,
        marker_count: observations.len(),
    })
}
