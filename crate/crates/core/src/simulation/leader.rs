use serde::{Deserialize, Serialize};

use super::{DroneParams, DroneState};
use crate::control::VelocityCommand;
use crate::{Error, Result, Vec3};

/// Relative waypoint legs flown at constant speed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WaypointPlan {
    /// Displacements in the world frame, each relative to the previous target.
    pub legs: Vec<Vec3>,
    /// m/s
    pub speed: f64,
    /// Distance at which a target counts as reached, m.
    pub tolerance: f64,
}

impl Default for WaypointPlan {
    /// Climb 0.5 m into the follower's view, then fly 1.5 m forward at 0.4 m/s.
    fn default() -> Self {
        Self {
            legs: vec![Vec3::new(0.0, 0.0, 0.5), Vec3::new(1.5, 0.0, 0.0)],
            speed: 0.4,
            tolerance: 0.05,
        }
    }
}

impl WaypointPlan {
    pub fn validate(&self) -> Result<()> {
        if !(self.speed > 0.0) || !self.speed.is_finite() {
            return Err(Error::invalid_field("leader.plan.speed", "must be > 0"));
        }
        if !(self.tolerance > 0.0) || !self.tolerance.is_finite() {
            return Err(Error::invalid_field("leader.plan.tolerance", "must be > 0"));
        }
        if self.legs.iter().any(|l| l.iter().any(|c| !c.is_finite())) {
            return Err(Error::invalid_field("leader.plan.legs", "must be finite"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LeaderProgress {
    targets: Vec<Vec3>,
    leg: usize,
}

impl LeaderProgress {
    /// Resolve the relative legs into absolute targets from `start`.
    pub fn new(start: Vec3, plan: &WaypointPlan) -> Self {
        let mut at = start;
        let targets = plan
            .legs
            .iter()
            .map(|leg| {
                at += leg;
                at
            })
            .collect();
        Self { targets, leg: 0 }
    }

    pub fn current_leg(&self) -> usize {
        self.leg
    }

    pub fn current_target(&self) -> Option<Vec3> {
        self.targets.get(self.leg).copied()
    }

    pub fn finished(&self) -> bool {
        self.leg >= self.targets.len()
    }
}

/// Command toward the current target at `plan.speed`, advancing legs as
/// their targets come within tolerance; hover once every leg is done.
pub fn leader_step(
    s: &DroneState,
    plan: &WaypointPlan,
    progress: &LeaderProgress,
    params: &DroneParams,
) -> (VelocityCommand, LeaderProgress) {
    let mut next = progress.clone();
    while let Some(target) = next.current_target() {
        if (target - s.pose.position).norm() <= plan.tolerance {
            next.leg += 1;
        } else {
            break;
        }
    }
    let Some(target) = next.current_target() else {
        return (VelocityCommand::hover(), next);
    };
    let delta = target - s.pose.position;
    let world_v = delta / delta.norm() * plan.speed;
    let body_v = s.pose.inverse().rotate_vector(&world_v);
    let unit = params.speed_per_unit();
    let cmd = VelocityCommand {
        forward: body_v.x / unit,
        lateral: -body_v.y / unit,
        vertical: body_v.z / unit,
        yaw_rate: 0.0,
    }
    .clamped(params.command_limit);
    (cmd, next)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Pose;
    use crate::simulation::{step_drone, BatteryParams};

    fn start() -> DroneState {
        DroneState::hovering(Pose::new(Vec3::new(0.0, 0.0, 0.5), 0.0), BatteryParams::default().full())
    }

    #[test]
    fn empty_plan_hovers() {
        let plan = WaypointPlan { legs: vec![], ..WaypointPlan::default() };
        let p = LeaderProgress::new(Vec3::zeros(), &plan);
        let (cmd, next) = leader_step(&start(), &plan, &p, &DroneParams::default());
        assert!(cmd.is_hover());
        assert!(next.finished());
    }

    #[test]
    fn hovers_within_tolerance_of_last_target() {
        let plan = WaypointPlan { legs: vec![Vec3::new(0.0, 0.0, 0.02)], ..WaypointPlan::default() };
        let s = start();
        let p = LeaderProgress::new(s.pose.position, &plan);
        let (cmd, next) = leader_step(&s, &plan, &p, &DroneParams::default());
        assert!(cmd.is_hover());
        assert!(next.finished());
    }

    #[test]
    fn first_leg_takes_distance_over_speed() {
        // instantaneous response, tight tolerance
        let params = DroneParams { tau: 0.0, ..DroneParams::default() };
        let plan = WaypointPlan { tolerance: 1e-3, ..WaypointPlan::default() };
        let mut s = start();
        let mut p = LeaderProgress::new(s.pose.position, &plan);
        let dt = 0.001;
        let mut t = 0.0;
        while p.current_leg() == 0 {
            let (cmd, next) = leader_step(&s, &plan, &p, &params);
            p = next;
            if p.current_leg() > 0 {
                break;
            }
            assert!((cmd.vertical - 40.0).abs() < 1e-9);
            s = step_drone(&s, &cmd, dt, &params).state;
            t += dt;
            assert!(t < 2.0);
        }
        // leg ends once within tolerance: 1.25 s minus tolerance/speed, to one step
        assert!((t - 1.25).abs() <= 1e-3 / 0.4 + dt + 1e-9, "{t}");
    }

    #[test]
    fn rotated_leader_commands_in_body_frame() {
        let plan = WaypointPlan { legs: vec![Vec3::new(1.0, 0.0, 0.0)], ..WaypointPlan::default() };
        let mut s = start();
        s.pose = Pose::new(s.pose.position, std::f64::consts::FRAC_PI_2);
        let p = LeaderProgress::new(s.pose.position, &plan);
        let (cmd, _) = leader_step(&s, &plan, &p, &DroneParams::default());
        // world +x is on the right of a leader facing +y
        assert!(cmd.forward.abs() < 1e-9);
        assert!((cmd.lateral - 40.0).abs() < 1e-9);
    }
}
