use serde::{Deserialize, Serialize};

use super::BatteryState;
use crate::control::{VelocityCommand, DEFAULT_LIMIT};
use crate::geometry::{normalize_angle, Pose};
use crate::{Error, Result, Vec3};

pub const GRAVITY: f64 = 9.81;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DroneParams {
    /// Speed at full command (`command_limit` units), m/s.
    pub max_speed: f64,
    /// Yaw rate at full command, rad/s.
    pub max_yaw_rate: f64,
    /// First-order response time constant, s. Zero means instantaneous.
    pub tau: f64,
    /// Lowest altitude the ranging sensor can hold, m.
    pub ir_floor: f64,
    pub command_limit: f64,
}

impl Default for DroneParams {
    fn default() -> Self {
        Self {
            max_speed: 1.0,
            max_yaw_rate: 1.0,
            tau: 0.2,
            ir_floor: 0.10,
            command_limit: DEFAULT_LIMIT,
        }
    }
}

impl DroneParams {
    pub fn validate(&self) -> Result<()> {
        let pos = |v: f64| v > 0.0 && v.is_finite();
        if !pos(self.max_speed) {
            return Err(Error::invalid_field("drone.max_speed", "must be > 0"));
        }
        if !pos(self.max_yaw_rate) {
            return Err(Error::invalid_field("drone.max_yaw_rate", "must be > 0"));
        }
        if !(self.tau >= 0.0) || !self.tau.is_finite() {
            return Err(Error::invalid_field("drone.tau", "must be >= 0"));
        }
        if !(self.ir_floor >= 0.0) {
            return Err(Error::invalid_field("drone.ir_floor", "must be >= 0"));
        }
        if !pos(self.command_limit) {
            return Err(Error::invalid_field("drone.command_limit", "must be > 0"));
        }
        Ok(())
    }

    /// m/s per command unit.
    pub fn speed_per_unit(&self) -> f64 {
        self.max_speed / self.command_limit
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DroneState {
    pub pose: Pose,
    /// World-frame velocity, m/s.
    pub velocity: Vec3,
    /// Counterclockwise yaw rate, rad/s.
    pub yaw_rate: f64,
    pub battery: BatteryState,
    /// Unpowered: on the floor or falling to it.
    pub grounded: bool,
}

impl DroneState {
    pub fn hovering(pose: Pose, battery: BatteryState) -> Self {
        Self {
            pose,
            velocity: Vec3::zeros(),
            yaw_rate: 0.0,
            battery,
            grounded: false,
        }
    }

    pub fn airborne(&self) -> bool {
        !self.grounded
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DroneStep {
    pub state: DroneState,
    /// The altitude was held at the IR floor this step.
    pub floor_clamped: bool,
}

/// Advance one drone by `dt` under `cmd`.
///
/// Body axes map as forward → +x, lateral (right) → −y, vertical → +z, and a
/// positive yaw-rate command turns clockwise. Velocity and yaw rate follow
/// the target with a first-order lag of time constant `tau`. Unpowered
/// drones fall to the floor and ignore commands.
pub fn step_drone(s: &DroneState, cmd: &VelocityCommand, dt: f64, params: &DroneParams) -> DroneStep {
    let mut next = *s;
    if s.grounded {
        let mut vz = s.velocity.z - GRAVITY * dt;
        let mut z = s.pose.position.z + vz * dt;
        if z <= 0.0 {
            z = 0.0;
            vz = 0.0;
        }
        next.velocity = Vec3::new(0.0, 0.0, vz);
        next.yaw_rate = 0.0;
        next.pose.position.z = z;
        return DroneStep {
            state: next,
            floor_clamped: false,
        };
    }

    let cmd = cmd.clamped(params.command_limit);
    let unit = params.speed_per_unit();
    let body_target = Vec3::new(cmd.forward, -cmd.lateral, cmd.vertical) * unit;
    let target = s.pose.rotate_vector(&body_target);
    let yaw_target = -cmd.yaw_rate / params.command_limit * params.max_yaw_rate;

    let alpha = if params.tau > 0.0 {
        1.0 - (-dt / params.tau).exp()
    } else {
        1.0
    };
    let mut v = s.velocity + (target - s.velocity) * alpha;
    let speed = v.norm();
    if speed > params.max_speed {
        v *= params.max_speed / speed;
    }
    let yaw_rate = s.yaw_rate + (yaw_target - s.yaw_rate) * alpha;

    let mut position = s.pose.position + v * dt;
    let mut floor_clamped = false;
    if position.z < params.ir_floor {
        position.z = params.ir_floor;
        v.z = v.z.max(0.0);
        floor_clamped = true;
    }

    next.pose = Pose {
        position,
        yaw: normalize_angle(s.pose.yaw + yaw_rate * dt),
    };
    next.velocity = v;
    next.yaw_rate = yaw_rate;
    DroneStep {
        state: next,
        floor_clamped,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simulation::BatteryParams;

    fn at(x: f64, y: f64, z: f64, yaw: f64) -> DroneState {
        DroneState::hovering(Pose::new(Vec3::new(x, y, z), yaw), BatteryParams::default().full())
    }

    #[test]
    fn hover_from_rest_is_stationary() {
        let s = at(1.0, 2.0, 1.0, 0.3);
        let out = step_drone(&s, &VelocityCommand::hover(), 0.1, &DroneParams::default());
        assert_eq!(out.state, s);
    }

    #[test]
    fn instant_response_full_forward() {
        let p = DroneParams { tau: 0.0, ..DroneParams::default() };
        let s = at(0.0, 0.0, 1.0, std::f64::consts::FRAC_PI_2);
        let cmd = VelocityCommand { forward: 100.0, ..VelocityCommand::hover() };
        let out = step_drone(&s, &cmd, 1.0, &p).state;
        assert!((out.pose.position - Vec3::new(0.0, 1.0, 1.0)).norm() < 1e-12);
    }

    #[test]
    fn ir_floor_holds_altitude() {
        let p = DroneParams { tau: 0.0, ..DroneParams::default() };
        let s = at(0.0, 0.0, 0.15, 0.0);
        let cmd = VelocityCommand { vertical: -10.0, ..VelocityCommand::hover() };
        let out = step_drone(&s, &cmd, 1.0, &p);
        assert!(out.floor_clamped);
        assert_eq!(out.state.pose.position.z, 0.10);
        assert!(out.state.velocity.z >= 0.0);
    }

    #[test]
    fn lateral_right_and_clockwise_yaw() {
        let p = DroneParams { tau: 0.0, ..DroneParams::default() };
        let s = at(0.0, 0.0, 1.0, 0.0);
        let cmd = VelocityCommand { lateral: 50.0, yaw_rate: 50.0, ..VelocityCommand::hover() };
        let out = step_drone(&s, &cmd, 0.1, &p).state;
        assert!(out.pose.position.y < 0.0);
        assert!(out.pose.yaw < 0.0);
    }

    #[test]
    fn speed_is_capped() {
        let p = DroneParams { tau: 0.0, ..DroneParams::default() };
        let s = at(0.0, 0.0, 1.0, 0.0);
        let cmd = VelocityCommand { forward: 100.0, lateral: 100.0, vertical: 100.0, yaw_rate: 0.0 };
        let out = step_drone(&s, &cmd, 0.1, &p).state;
        assert!((out.velocity.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn unpowered_drone_falls_to_floor() {
        let mut s = at(0.0, 0.0, 1.0, 0.0);
        s.grounded = true;
        let p = DroneParams::default();
        for _ in 0..100 {
            s = step_drone(&s, &VelocityCommand { forward: 100.0, ..Default::default() }, 0.02, &p).state;
        }
        assert_eq!(s.pose.position, Vec3::new(0.0, 0.0, 0.0));
    }

    #[test]
    fn kinematic_consistency_with_instant_response() {
        let p = DroneParams { tau: 0.0, max_speed: 10.0, ..DroneParams::default() };
        let mut s = at(0.0, 0.0, 5.0, 0.0);
        let cmd = VelocityCommand { forward: 20.0, lateral: -10.0, vertical: 5.0, yaw_rate: 0.0 };
        let dt = 0.01;
        for _ in 0..250 {
            s = step_drone(&s, &cmd, dt, &p).state;
        }
        let v = Vec3::new(2.0, 1.0, 0.5);
        assert!((s.pose.position - (Vec3::new(0.0, 0.0, 5.0) + v * 2.5)).norm() < 1e-9);
    }
}
