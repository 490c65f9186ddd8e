use serde::{Deserialize, Serialize};

use crate::control::{clamp, VelocityCommand, DEFAULT_LIMIT};
use crate::imaging::ImageBuffer;
use crate::{Error, Result};

/// Depth-map avoidance settings. Depth maps encode proximity: brighter is nearer.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AvoidConfig {
    /// Inclusive trigger level on the brightest depth pixel.
    pub intensity_threshold: u8,
    /// Command units per pixel of offset.
    pub gain: f64,
    pub output_limit: f64,
    /// Depth range mapped onto intensities 255..0, meters.
    pub near_m: f64,
    pub far_m: f64,
    /// Depth maps are rendered this many times coarser than the RGB feed.
    pub downsample: u32,
}

impl Default for AvoidConfig {
    fn default() -> Self {
        Self {
            // ~0.87 m with the default depth range; the leader's ball at the
            // nominal following distance renders at ~231
            intensity_threshold: 240,
            gain: 0.3,
            output_limit: DEFAULT_LIMIT,
            near_m: 0.3,
            far_m: 10.0,
            downsample: 4,
        }
    }
}

impl AvoidConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.near_m > 0.0 && self.near_m < self.far_m) || !self.far_m.is_finite() {
            return Err(Error::invalid_field("avoidance.near_m", "requires 0 < near_m < far_m"));
        }
        if !(self.gain >= 0.0) || !self.gain.is_finite() {
            return Err(Error::invalid_field("avoidance.gain", "must be finite and >= 0"));
        }
        if !(self.output_limit > 0.0) {
            return Err(Error::invalid_field("avoidance.output_limit", "must be > 0"));
        }
        if self.downsample < 1 {
            return Err(Error::invalid_field("avoidance.downsample", "must be >= 1"));
        }
        Ok(())
    }
}

/// Steer away from the brightest (nearest) depth pixel when it reaches the
/// threshold. Ties go to the smallest row-major index.
pub fn depth_avoid(
    depth: &ImageBuffer,
    intensity_threshold: u8,
    gain: f64,
    limit: f64,
) -> Result<Option<VelocityCommand>> {
    if depth.channels() != 1 {
        return Err(Error::InvalidImage(format!(
            "depth_avoid needs a single-channel map, got {} channels",
            depth.channels()
        )));
    }
    let (idx, max) = depth
        .data()
        .iter()
        .enumerate()
        .fold((0usize, 0u8), |best, (i, &v)| if v > best.1 { (i, v) } else { best });
    if max < intensity_threshold {
        return Ok(None);
    }
    let x = (idx % depth.width()) as f64;
    let y = (idx / depth.width()) as f64;
    let dx = x - depth.width() as f64 / 2.0;
    let dy = y - depth.height() as f64 / 2.0;
    Ok(Some(VelocityCommand {
        forward: 0.0,
        lateral: 0.0,
        // obstacle below center → climb, above → descend
        vertical: clamp(gain * dy, limit),
        // obstacle left (dx < 0) → positive yaw rate, i.e. turn right
        yaw_rate: clamp(-gain * dx, limit),
    }))
}
