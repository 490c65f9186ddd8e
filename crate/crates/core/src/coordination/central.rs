use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{Message, NodeId, Payload, Telemetry};
use crate::control::VelocityCommand;
use crate::geometry::normalize_angle;
use crate::simulation::DroneParams;
use crate::{Error, Result, Vec3};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CentralConfig {
    /// Leader telemetry older than this yields hover, s.
    pub staleness_timeout_s: f64,
    /// Commanded velocity per meter of position error, 1/s.
    pub pursuit_gain: f64,
    /// Commanded yaw rate per radian of heading error, 1/s.
    pub yaw_gain: f64,
}

impl Default for CentralConfig {
    fn default() -> Self {
        Self { staleness_timeout_s: 0.5, pursuit_gain: 1.0, yaw_gain: 1.0 }
    }
}

impl CentralConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.staleness_timeout_s > 0.0) {
            return Err(Error::invalid_field("central.staleness_timeout_s", "must be > 0"));
        }
        if !(self.pursuit_gain >= 0.0) || !self.pursuit_gain.is_finite() {
            return Err(Error::invalid_field("central.pursuit_gain", "must be finite and >= 0"));
        }
        if !(self.yaw_gain >= 0.0) || !self.yaw_gain.is_finite() {
            return Err(Error::invalid_field("central.yaw_gain", "must be finite and >= 0"));
        }
        Ok(())
    }
}

/// A follower and the point it should hold, in the leader's body frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FollowerSlot {
    pub id: u32,
    pub desired_offset: Vec3,
}

/// Freshest telemetry the central controller has heard from each agent.
#[derive(Debug, Clone, PartialEq)]
pub struct CentralState {
    pub leader_id: u32,
    latest: BTreeMap<u32, (f64, Telemetry)>,
}

impl CentralState {
    pub fn new(leader_id: u32) -> Self {
        Self { leader_id, latest: BTreeMap::new() }
    }

    /// Send time and content of the freshest telemetry from `agent`.
    pub fn latest(&self, agent: u32) -> Option<(f64, &Telemetry)> {
        self.latest.get(&agent).map(|(t, tel)| (*t, tel))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CentralCommand {
    pub follower: u32,
    pub command: VelocityCommand,
    /// Send time of the leader telemetry the command is based on.
    pub basis_sent_at: Option<f64>,
    /// `now` minus `basis_sent_at`.
    pub staleness_s: Option<f64>,
    /// Hover issued because leader telemetry is missing or too old.
    pub stale: bool,
}

impl CentralCommand {
    /// Wrap for sending. A hover issued before any leader telemetry arrived
    /// uses its own send time as the basis.
    pub fn message(&self, now: f64) -> Message {
        Message {
            sender: NodeId::Central,
            receiver: NodeId::Agent(self.follower),
            sent_at: now,
            payload: Payload::Command {
                command: self.command,
                basis_sent_at: self.basis_sent_at.unwrap_or(now),
            },
        }
    }
}

/// Absorb `inbox` and compute one pursuit command per follower.
///
/// The follower is driven toward `leader_pose ⊕ desired_offset` with a
/// proportional velocity law expressed in its own body frame and turned to
/// match the leader's heading. Missing follower telemetry also yields hover.
pub fn central_step(
    state: &mut CentralState,
    inbox: &[Message],
    now: f64,
    followers: &[FollowerSlot],
    cfg: &CentralConfig,
    drone: &DroneParams,
) -> Vec<CentralCommand> {
    for m in inbox {
        if let (NodeId::Agent(id), Payload::Telemetry(t)) = (m.sender, m.payload) {
            let newer = state.latest.get(&id).is_none_or(|(at, _)| m.sent_at >= *at);
            if newer {
                state.latest.insert(id, (m.sent_at, t));
            }
        }
    }

    let leader = state.latest(state.leader_id).map(|(t, tel)| (t, *tel));
    followers
        .iter()
        .map(|slot| {
            let hover = |basis: Option<f64>| CentralCommand {
                follower: slot.id,
                command: VelocityCommand::hover(),
                basis_sent_at: basis,
                staleness_s: basis.map(|b| now - b),
                stale: true,
            };
            let Some((sent_at, lt)) = leader else {
                return hover(None);
            };
            if now - sent_at > cfg.staleness_timeout_s {
                return hover(Some(sent_at));
            }
            let Some((_, ft)) = state.latest(slot.id) else {
                return hover(Some(sent_at));
            };
            let goal = lt.pose.transform_point(&slot.desired_offset);
            let err_body = ft.pose.inverse().rotate_vector(&(goal - ft.pose.position));
            let v = err_body * cfg.pursuit_gain / drone.speed_per_unit();
            let yaw_err = normalize_angle(lt.pose.yaw - ft.pose.yaw);
            let yaw_unit = drone.max_yaw_rate / drone.command_limit;
            let command = VelocityCommand {
                forward: v.x,
                lateral: -v.y,
                vertical: v.z,
                // positive yaw-rate commands turn clockwise
                yaw_rate: -cfg.yaw_gain * yaw_err / yaw_unit,
            }
            .clamped(drone.command_limit);
            CentralCommand {
                follower: slot.id,
                command,
                basis_sent_at: Some(sent_at),
                staleness_s: Some(now - sent_at),
                stale: false,
            }
        })
        .collect()
}
