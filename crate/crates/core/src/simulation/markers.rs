use rand::Rng;
use rand_distr::{Distribution, Normal};

use super::Scene;
use crate::geometry::{project_body, CameraIntrinsics, Pose};
use crate::perception::MarkerObservation;
use crate::{Error, Result, Vec3};

/// Geometric stand-in for fiducial detection.
///
/// A marker is seen when its center projects inside the image, its depth is
/// in `(near, far)` and the camera is on its front side. Each sighting
/// yields the true camera pose perturbed by zero-mean Gaussian noise; four
/// draws (x, y, z, yaw) are taken per visible marker in id order.
#[allow(clippy::too_many_arguments)]
pub fn visible_markers<R: Rng + ?Sized>(
    scene: &Scene,
    cam: &Pose,
    k: &CameraIntrinsics,
    near: f64,
    far: f64,
    sigma_pos: f64,
    sigma_yaw: f64,
    rng: &mut R,
) -> Result<Vec<MarkerObservation>> {
    if !(sigma_pos >= 0.0 && sigma_yaw >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "noise sigmas must be >= 0, got {sigma_pos} and {sigma_yaw}"
        )));
    }
    let pos_noise = Normal::new(0.0, sigma_pos)
        .map_err(|e| Error::InvalidArgument(format!("sigma_pos {sigma_pos}: {e}")))?;
    let yaw_noise = Normal::new(0.0, sigma_yaw)
        .map_err(|e| Error::InvalidArgument(format!("sigma_yaw {sigma_yaw}: {e}")))?;

    let to_cam = cam.inverse();
    let mut markers: Vec<_> = scene.markers.iter().collect();
    markers.sort_by_key(|m| m.id);

    let mut out = Vec::new();
    for m in markers {
        let p = to_cam.transform_point(&m.pose.position);
        if !(p.x > near && p.x < far) {
            continue;
        }
        let Some((u, v)) = project_body(k, &p) else {
            continue;
        };
        if !(u >= 0.0 && u < f64::from(k.width) && v >= 0.0 && v < f64::from(k.height)) {
            continue;
        }
        if (cam.position - m.pose.position).dot(&m.pose.forward()) <= 0.0 {
            continue;
        }
        let noise = Vec3::new(
            pos_noise.sample(rng),
            pos_noise.sample(rng),
            pos_noise.sample(rng),
        );
        let yaw = yaw_noise.sample(rng);
        out.push(MarkerObservation {
            marker_id: m.id,
            camera_pose_estimate: Pose::new(cam.position + noise, cam.yaw + yaw),
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simulation::Marker;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn single(pos: Vec3, yaw: f64) -> Scene {
        Scene {
            markers: vec![Marker { id: 7, pose: Pose::new(pos, yaw), size: 0.15 }],
            ..Scene::default()
        }
    }

    #[test]
    fn marker_ahead_is_seen_exactly() {
        let scene = single(Vec3::new(3.0, 0.0, 1.0), std::f64::consts::PI);
        let cam = Pose::new(Vec3::new(0.0, 0.0, 1.0), 0.0);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let obs = visible_markers(&scene, &cam, &CameraIntrinsics::default(), 0.3, 10.0, 0.0, 0.0, &mut rng).unwrap();
        assert_eq!(obs.len(), 1);
        assert_eq!(obs[0].marker_id, 7);
        assert_eq!(obs[0].camera_pose_estimate, cam);
    }

    #[test]
    fn marker_behind_or_facing_away_is_not_seen() {
        let cam = Pose::new(Vec3::new(0.0, 0.0, 1.0), 0.0);
        let k = CameraIntrinsics::default();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let behind = single(Vec3::new(-3.0, 0.0, 1.0), 0.0);
        assert!(visible_markers(&behind, &cam, &k, 0.3, 10.0, 0.0, 0.0, &mut rng).unwrap().is_empty());
        let away = single(Vec3::new(3.0, 0.0, 1.0), 0.0);
        assert!(visible_markers(&away, &cam, &k, 0.3, 10.0, 0.0, 0.0, &mut rng).unwrap().is_empty());
        let too_far = single(Vec3::new(30.0, 0.0, 1.0), std::f64::consts::PI);
        assert!(visible_markers(&too_far, &cam, &k, 0.3, 10.0, 0.0, 0.0, &mut rng).unwrap().is_empty());
    }

    #[test]
    fn default_wall_grid_gives_eight() {
        let cam = Pose::new(Vec3::new(0.0, 0.0, 1.0), 0.0);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let obs = visible_markers(&Scene::default(), &cam, &CameraIntrinsics::default(), 0.3, 10.0, 0.0, 0.0, &mut rng).unwrap();
        assert_eq!(obs.len(), 8);
        assert!(obs.iter().all(|o| o.camera_pose_estimate == cam));
    }

    #[test]
    fn negative_sigma_rejected() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let cam = Pose::identity();
        assert!(visible_markers(&Scene::default(), &cam, &CameraIntrinsics::default(), 0.3, 10.0, -1.0, 0.0, &mut rng).is_err());
    }
}
