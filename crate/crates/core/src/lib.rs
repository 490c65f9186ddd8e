//! Leader-follower drone tracking simulator.
//!
//! A follower drone keeps a green marker ball attached to a waypoint-driven
//! leader centered in its camera feed using a blur / HSV mask / morphology /
//! contour / enclosing-circle pipeline feeding three PID loops. The same
//! scenario can be flown with a centralized controller that pursues the
//! leader over a lossy, latent message channel, so the two coordination
//! architectures can be compared tick for tick.
//!
//! Module map:
//!
//! - [`geometry`]: yaw-only poses and pinhole projection.
//! - [`imaging`]: raster primitives of the tracking pipeline.
//! - [`control`]: PID loops and the clamped velocity command.
//! - [`perception`]: per-frame tracker, depth avoidance, fiducial fusion, HUD.
//! - [`simulation`]: kinematics, rendering, waypoints, battery, frame backlog.
//! - [`coordination`]: message channel, central pursuit, failure injection.
//! - [`harness`]: scenario config, run loop, metrics and comparisons.

pub mod control;
pub mod coordination;
pub mod error;
pub mod geometry;
pub mod harness;
pub mod imaging;
pub mod perception;
pub mod rounding;
pub mod simulation;

pub use error::{Error, Result};

/// 3-vector in meters (world frame unless stated otherwise, z up).
pub type Vec3 = nalgebra::Vector3<f64>;
