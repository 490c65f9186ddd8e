//! Coordination architectures: a lossy, latent message channel, the central
//! pursuit controller, the vision-only decentralized follower step and
//! scheduled failures.

mod central;
mod channel;

use serde::{Deserialize, Serialize};

pub use central::{central_step, CentralCommand, CentralConfig, CentralState, FollowerSlot};
pub use channel::{channel_send, Channel, ChannelParams};

use crate::control::VelocityCommand;
use crate::geometry::Pose;
use crate::imaging::ImageBuffer;
use crate::perception::{depth_avoid, track_frame, AvoidConfig, HudRecord, TrackerConfig, TrackerStates};
use crate::{Result, Vec3};

/// Endpoint of a message.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum NodeId {
    Central,
    Agent(u32),
}

/// Snapshot an agent reports about itself.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Telemetry {
    pub pose: Pose,
    pub velocity: Vec3,
    pub battery_ah: f64,
    pub altitude: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Payload {
    Telemetry(Telemetry),
    /// `basis_sent_at` is the send time of the leader telemetry the command
    /// was computed from.
    Command { command: VelocityCommand, basis_sent_at: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Message {
    pub sender: NodeId,
    pub receiver: NodeId,
    pub sent_at: f64,
    pub payload: Payload,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Architecture {
    Centralized,
    Decentralized,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FailureKind {
    Central,
    Leader,
}

/// Architecture of a run plus the times at which the central controller or
/// the leader stop emitting.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SwarmMode {
    pub mode: Architecture,
    central_fails_at: Option<f64>,
    leader_fails_at: Option<f64>,
}

impl SwarmMode {
    pub fn new(mode: Architecture) -> Self {
        Self { mode, central_fails_at: None, leader_fails_at: None }
    }

    pub fn central_alive(&self, now: f64) -> bool {
        self.central_fails_at.is_none_or(|t| now < t)
    }

    pub fn leader_alive(&self, now: f64) -> bool {
        self.leader_fails_at.is_none_or(|t| now < t)
    }

    pub fn failure_time(&self, kind: FailureKind) -> Option<f64> {
        match kind {
            FailureKind::Central => self.central_fails_at,
            FailureKind::Leader => self.leader_fails_at,
        }
    }
}

/// Schedule a failure: from `at` on, the named entity emits nothing. An
/// earlier schedule for the same entity wins.
pub fn inject_failure(mode: SwarmMode, kind: FailureKind, at: f64) -> Result<SwarmMode> {
    if !(at >= 0.0) || !at.is_finite() {
        return Err(crate::Error::InvalidArgument(format!("failure time must be >= 0, got {at}")));
    }
    let mut next = mode;
    let slot = match kind {
        FailureKind::Central => &mut next.central_fails_at,
        FailureKind::Leader => &mut next.leader_fails_at,
    };
    *slot = Some(slot.map_or(at, |t| t.min(at)));
    Ok(next)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecentralizedOutput {
    pub command: VelocityCommand,
    pub hud: HudRecord,
    /// The command came from the avoidance reflex.
    pub avoiding: bool,
}

/// One follower tick from local sensing only. The tracker always runs so
/// the HUD stays current; an avoidance command, when present, replaces the
/// tracker's.
pub fn decentralized_step(
    frame: &ImageBuffer,
    depth: &ImageBuffer,
    tracker: &TrackerConfig,
    states: &mut TrackerStates,
    avoid: &AvoidConfig,
    dt: f64,
    altitude: f64,
) -> Result<DecentralizedOutput> {
    let tracked = track_frame(frame, tracker, states, dt, altitude)?;
    let avoided = depth_avoid(depth, avoid.intensity_threshold, avoid.gain, avoid.output_limit)?;
    Ok(match avoided {
        Some(command) => DecentralizedOutput { command, hud: tracked.hud, avoiding: true },
        None => DecentralizedOutput { command: tracked.command, hud: tracked.hud, avoiding: false },
    })
}
