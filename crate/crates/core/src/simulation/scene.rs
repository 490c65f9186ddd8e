use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::geometry::Pose;
use crate::{Error, Result, Vec3};

/// The tracked ball, rigidly attached to one agent.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Ball {
    pub attach_agent: u32,
    /// Position in the carrier's body frame, m. Negative x is behind it.
    pub body_offset: Vec3,
    pub radius: f64,
    pub color: [u8; 3],
}

impl Default for Ball {
    fn default() -> Self {
        Self {
            attach_agent: 0,
            body_offset: Vec3::new(-0.06, 0.0, 0.0),
            radius: 0.02,
            // HSV (60, 255, 200): inside the default green mask
            color: [0, 200, 0],
        }
    }
}

/// A planar fiducial whose front face looks along its pose's +x.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Marker {
    pub id: u32,
    pub pose: Pose,
    #[serde(default = "default_marker_size")]
    pub size: f64,
}

fn default_marker_size() -> f64 {
    0.15
}

/// Axis-aligned box, used for walls and other static obstacles.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Wall {
    pub min: Vec3,
    pub max: Vec3,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Scene {
    pub ball: Ball,
    pub markers: Vec<Marker>,
    pub walls: Vec<Wall>,
    pub background: [u8; 3],
}

impl Default for Scene {
    /// Lab bay with a wall 5 m ahead carrying a 4x2 grid of markers.
    fn default() -> Self {
        let mut markers = Vec::new();
        for (row, z) in [1.4, 0.8].into_iter().enumerate() {
            for (col, y) in [0.6, 0.2, -0.2, -0.6].into_iter().enumerate() {
                markers.push(Marker {
                    id: (row * 4 + col) as u32,
                    pose: Pose::new(Vec3::new(4.99, y, z), -std::f64::consts::PI),
                    size: default_marker_size(),
                });
            }
        }
        Self {
            ball: Ball::default(),
            markers,
            walls: vec![Wall {
                min: Vec3::new(5.0, -3.0, 0.0),
                max: Vec3::new(5.2, 3.0, 3.0),
            }],
            background: [110, 110, 110],
        }
    }
}

impl Scene {
    pub fn validate(&self) -> Result<()> {
        if !(self.ball.radius > 0.0) || !self.ball.radius.is_finite() {
            return Err(Error::invalid_field("scene.ball.radius", "must be > 0"));
        }
        let mut ids = BTreeSet::new();
        for m in &self.markers {
            if !ids.insert(m.id) {
                return Err(Error::invalid_field(
                    "scene.markers",
                    format!("duplicate marker id {}", m.id),
                ));
            }
            if !(m.size > 0.0) {
                return Err(Error::invalid_field("scene.markers.size", "must be > 0"));
            }
        }
        for w in &self.walls {
            if (0..3).any(|i| w.min[i] > w.max[i]) {
                return Err(Error::invalid_field("scene.walls", "min must not exceed max"));
            }
        }
        Ok(())
    }

    pub fn marker(&self, id: u32) -> Option<&Marker> {
        self.markers.iter().find(|m| m.id == id)
    }
}
