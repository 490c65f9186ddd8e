//! Kinematic world model: drone response to velocity commands, the
//! synthetic camera and depth renderers, leader waypoints, battery drain
//! and the frame-processing backlog.

mod battery;
mod drone;
mod leader;
mod markers;
mod queue;
mod render;
mod scene;

pub use battery::{battery_step, BatteryParams, BatteryState};
pub use drone::{step_drone, DroneParams, DroneState, DroneStep, GRAVITY};
pub use leader::{leader_step, LeaderProgress, WaypointPlan};
pub use markers::visible_markers;
pub use queue::{frame_queue_step, FrameQueue, ProcessedFrame, QueueParams, QueueStepReport};
pub use render::{depth_intensity, render_camera, render_depth, AgentPose};
pub use scene::{Ball, Marker, Scene, Wall};
