//! Per-frame perception: the color tracker, the depth-map avoidance reflex,
//! fiducial pose fusion and the HUD overlay.

mod avoid;
mod hud;
mod localization;
mod tracker;

pub use avoid::{depth_avoid, AvoidConfig};
pub use hud::{hud_metadata, render_hud, HudMetaRow, HUD_CSV_HEADER};
pub use localization::{estimate_pose, MarkerObservation, PoseEstimate};
pub use tracker::{track_frame, HudRecord, PlaneGains, TrackOutput, TrackerConfig, TrackerStates};
