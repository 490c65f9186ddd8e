//! Per-plane PID loops and the clamped velocity command.
//!
//! Command units follow the drone's rc scale: each axis lives in
//! `[-limit, limit]` with the default limit of 100 meaning full speed.
//! `yaw_rate > 0` turns right (clockwise seen from above) and `lateral > 0`
//! moves right, matching the image convention where `dx > 0` means right.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub const DEFAULT_LIMIT: f64 = 100.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 3]", into = "[f64; 3]")]
pub struct PidGains {
    pub kp: f64,
    pub ki: f64,
    pub kd: f64,
}

impl PidGains {
    pub fn new(kp: f64, ki: f64, kd: f64) -> Result<Self> {
        for (name, v) in [("kp", kp), ("ki", ki), ("kd", kd)] {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::InvalidArgument(format!(
                    "PID gain {name} = {v} must be finite and non-negative"
                )));
            }
        }
        Ok(Self { kp, ki, kd })
    }

    /// Tuned gains for the horizontal (yaw) plane.
    pub fn x_plane() -> Self {
        Self { kp: 0.3, ki: 0.0, kd: 0.0 }
    }

    /// Tuned gains for the vertical plane.
    pub fn y_plane() -> Self {
        Self { kp: 0.3, ki: 0.08, kd: 1.0 }
    }

    /// Tuned gains for the range (forward) plane.
    pub fn z_plane() -> Self {
        Self { kp: 0.9, ki: 0.06, kd: 0.2 }
    }
}

impl TryFrom<[f64; 3]> for PidGains {
    type Error = Error;

    fn try_from(v: [f64; 3]) -> Result<Self> {
        PidGains::new(v[0], v[1], v[2])
    }
}

impl From<PidGains> for [f64; 3] {
    fn from(g: PidGains) -> Self {
        [g.kp, g.ki, g.kd]
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct PidState {
    /// Accumulated error·seconds.
    pub integral: f64,
    pub prev_error: Option<f64>,
}

impl PidState {
    pub fn reset(&mut self) {
        *self = Self::default();
    }

    /// Advance one sample. The derivative term is zero on the first step
    /// after construction or [`reset`](Self::reset).
    pub fn step(&mut self, gains: &PidGains, error: f64, dt: f64) -> Result<f64> {
        if !(dt > 0.0) {
            return Err(Error::InvalidArgument(format!("PID dt must be > 0, got {dt}")));
        }
        self.integral += error * dt;
        let derivative = match self.prev_error {
            Some(prev) => (error - prev) / dt,
            None => 0.0,
        };
        self.prev_error = Some(error);
        Ok(gains.kp * error + gains.ki * self.integral + gains.kd * derivative)
    }
}

/// Functional form of [`PidState::step`].
pub fn pid_step(gains: &PidGains, state: PidState, error: f64, dt: f64) -> Result<(f64, PidState)> {
    let mut next = state;
    let out = next.step(gains, error, dt)?;
    Ok((out, next))
}

pub fn clamp(output: f64, limit: f64) -> f64 {
    output.max(-limit).min(limit)
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct VelocityCommand {
    pub forward: f64,
    pub lateral: f64,
    pub vertical: f64,
    pub yaw_rate: f64,
}

impl VelocityCommand {
    pub fn hover() -> Self {
        Self::default()
    }

    pub fn is_hover(&self) -> bool {
        *self == Self::hover()
    }

    pub fn clamped(self, limit: f64) -> Self {
        Self {
            forward: clamp(self.forward, limit),
            lateral: clamp(self.lateral, limit),
            vertical: clamp(self.vertical, limit),
            yaw_rate: clamp(self.yaw_rate, limit),
        }
    }

    /// The axes keyed by name, in the order they are sent to the drone.
    pub fn axes(&self) -> [(&'static str, f64); 4] {
        [
            ("forward", self.forward),
            ("lateral", self.lateral),
            ("vertical", self.vertical),
            ("yaw_rate", self.yaw_rate),
        ]
    }
}

/// Map plane outputs onto drone axes: X → yaw rate, Y → vertical (negated,
/// image v grows downward), Z → forward. Lateral stays 0.
pub fn assemble_command(x_out: f64, y_out: f64, z_out: f64, limit: f64) -> VelocityCommand {
    VelocityCommand {
        forward: clamp(z_out, limit),
        lateral: 0.0,
        vertical: clamp(-y_out, limit),
        yaw_rate: clamp(x_out, limit),
    }
}
