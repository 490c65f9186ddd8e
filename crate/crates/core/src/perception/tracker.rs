use serde::{Deserialize, Serialize};

use crate::control::{assemble_command, clamp, PidGains, PidState, VelocityCommand, DEFAULT_LIMIT};
use crate::imaging::{
    apply_mask, find_external_components, gaussian_blur_5x5, min_enclosing_circle, morphology,
    offsets_in_frame, rgb_to_hsv, Circle, HsvBounds, ImageBuffer, MorphOp,
};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PlaneGains {
    pub x: PidGains,
    pub y: PidGains,
    pub z: PidGains,
}

impl Default for PlaneGains {
    fn default() -> Self {
        Self {
            x: PidGains::x_plane(),
            y: PidGains::y_plane(),
            z: PidGains::z_plane(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrackerConfig {
    pub bounds: HsvBounds,
    /// Target apparent radius in pixels.
    pub radius_setpoint: f64,
    pub gains: PlaneGains,
    pub output_limit: f64,
    pub min_component_area: usize,
    pub erode_iterations: usize,
    pub dilate_iterations: usize,
    /// Also drive lateral translation from the X-plane output.
    pub lateral_from_x: bool,
}

impl Default for TrackerConfig {
    fn default() -> Self {
        Self {
            bounds: HsvBounds::default(),
            radius_setpoint: 15.0,
            gains: PlaneGains::default(),
            output_limit: DEFAULT_LIMIT,
            min_component_area: 20,
            erode_iterations: 2,
            dilate_iterations: 2,
            lateral_from_x: false,
        }
    }
}

impl TrackerConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.radius_setpoint > 0.0) || !self.radius_setpoint.is_finite() {
            return Err(Error::invalid_field("tracker.radius_setpoint", "must be > 0"));
        }
        if self.min_component_area < 1 {
            return Err(Error::invalid_field("tracker.min_component_area", "must be >= 1"));
        }
        if !(self.output_limit > 0.0) || !self.output_limit.is_finite() {
            return Err(Error::invalid_field("tracker.output_limit", "must be > 0"));
        }
        for (name, g) in [("x", self.gains.x), ("y", self.gains.y), ("z", self.gains.z)] {
            PidGains::new(g.kp, g.ki, g.kd)
                .map_err(|e| Error::invalid_field(format!("tracker.gains.{name}"), e.to_string()))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct TrackerStates {
    pub x: PidState,
    pub y: PidState,
    pub z: PidState,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HudRecord {
    pub circle: Option<Circle>,
    /// `(dx, dy)` from the image center to the circle center.
    pub offset_vector: Option<(f64, f64)>,
    pub altitude: f64,
    pub target_locked: bool,
}

impl HudRecord {
    pub fn lost(altitude: f64) -> Self {
        Self {
            circle: None,
            offset_vector: None,
            altitude,
            target_locked: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrackOutput {
    pub command: VelocityCommand,
    pub hud: HudRecord,
}

/// Run the color-tracking pipeline on one RGB frame.
///
/// When no component reaches `min_component_area` the command is hover and
/// the PID states are left untouched.
pub fn track_frame(
    frame: &ImageBuffer,
    cfg: &TrackerConfig,
    states: &mut TrackerStates,
    dt: f64,
    altitude: f64,
) -> Result<TrackOutput> {
    frame.require_channels(3, "track_frame")?;
    if !(dt > 0.0) {
        return Err(Error::InvalidArgument(format!("track_frame dt must be > 0, got {dt}")));
    }
    let blurred = gaussian_blur_5x5(frame);
    let hsv = rgb_to_hsv(&blurred)?;
    let mask = apply_mask(&hsv, &cfg.bounds)?;
    let opened = morphology(
        &morphology(&mask, MorphOp::Erode, cfg.erode_iterations),
        MorphOp::Dilate,
        cfg.dilate_iterations,
    );
    let components = find_external_components(&opened);
    let Some(target) = components.first().filter(|c| c.area >= cfg.min_component_area) else {
        return Ok(TrackOutput {
            command: VelocityCommand::hover(),
            hud: HudRecord::lost(altitude),
        });
    };

    let points: Vec<(f64, f64)> = target
        .contour
        .iter()
        .map(|&(x, y)| (x as f64, y as f64))
        .collect();
    let circle = min_enclosing_circle(&points)?;
    let off = offsets_in_frame(&circle, frame.width(), frame.height(), cfg.radius_setpoint);

    let x_out = states.x.step(&cfg.gains.x, off.dx, dt)?;
    let y_out = states.y.step(&cfg.gains.y, off.dy, dt)?;
    let z_out = states.z.step(&cfg.gains.z, off.dr, dt)?;
    let mut command = assemble_command(x_out, y_out, z_out, cfg.output_limit);
    if cfg.lateral_from_x {
        command.lateral = clamp(x_out, cfg.output_limit);
    }

    Ok(TrackOutput {
        command,
        hud: HudRecord {
            circle: Some(circle),
            offset_vector: Some((off.dx, off.dy)),
            altitude,
            target_locked: true,
        },
    })
}
