use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::coordination::{Architecture, CentralConfig, ChannelParams, FailureKind};
use crate::geometry::{CameraIntrinsics, Pose};
use crate::perception::{AvoidConfig, TrackerConfig};
use crate::simulation::{BatteryParams, DroneParams, QueueParams, Scene, WaypointPlan};
use crate::{Error, Result, Vec3};

/// Follow distance behind the ball at which it renders at the 15 px radius
/// setpoint with the default lens and ball: 920 · 0.02 / 15.
const SETPOINT_RANGE_M: f64 = 920.0 * 0.02 / 15.0;
const BALL_BEHIND_LEADER_M: f64 = 0.06;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LeaderSpec {
    pub start: Pose,
    pub plan: WaypointPlan,
}

impl Default for LeaderSpec {
    fn default() -> Self {
        Self {
            start: Pose::new(Vec3::new(0.0, 0.0, 0.5), 0.0),
            plan: WaypointPlan::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FollowerSpec {
    pub start: Pose,
    /// Point to hold, in the leader's body frame.
    pub desired_offset: Vec3,
}

impl Default for FollowerSpec {
    fn default() -> Self {
        let back = BALL_BEHIND_LEADER_M + SETPOINT_RANGE_M;
        Self {
            start: Pose::new(Vec3::new(-back, 0.0, 0.5), 0.0),
            desired_offset: Vec3::new(-back, 0.0, 0.0),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FailureSpec {
    pub kind: FailureKind,
    pub at_s: f64,
}

/// Simulated fiducial sightings used for the localization estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MarkerSensing {
    /// Per-axis position noise of a single sighting, m.
    pub sigma_pos: f64,
    /// Yaw noise of a single sighting, rad.
    pub sigma_yaw: f64,
    /// Markers are seen between `min_range_m` and `max_range_m` of depth.
    pub min_range_m: f64,
    pub max_range_m: f64,
}

impl Default for MarkerSensing {
    fn default() -> Self {
        Self { sigma_pos: 0.02, sigma_yaw: 0.01, min_range_m: 0.3, max_range_m: 10.0 }
    }
}

/// Everything needed to reproduce one run. Agent 0 is the leader; followers
/// are numbered from 1 in list order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Scenario {
    pub duration_s: f64,
    pub tick_dt_s: f64,
    pub seed: u64,
    pub mode: Architecture,
    pub intrinsics: CameraIntrinsics,
    pub scene: Scene,
    pub drone: DroneParams,
    pub battery: BatteryParams,
    pub queue: QueueParams,
    pub leader: LeaderSpec,
    pub followers: Vec<FollowerSpec>,
    pub tracker: TrackerConfig,
    pub avoidance: AvoidConfig,
    pub channel: ChannelParams,
    pub central: CentralConfig,
    pub failures: Vec<FailureSpec>,
    pub markers: MarkerSensing,
}

impl Default for Scenario {
    fn default() -> Self {
        Self {
            duration_s: 20.0,
            tick_dt_s: 1.0 / 30.0,
            seed: 0,
            mode: Architecture::Decentralized,
            intrinsics: CameraIntrinsics::default(),
            scene: Scene::default(),
            drone: DroneParams::default(),
            battery: BatteryParams::default(),
            queue: QueueParams::default(),
            leader: LeaderSpec::default(),
            followers: vec![FollowerSpec::default()],
            tracker: TrackerConfig::default(),
            avoidance: AvoidConfig::default(),
            channel: ChannelParams::default(),
            central: CentralConfig::default(),
            failures: Vec::new(),
            markers: MarkerSensing::default(),
        }
    }
}

fn check_pose(field: &str, p: &Pose) -> Result<()> {
    if !p.is_finite() {
        return Err(Error::invalid_field(field, "must be finite"));
    }
    if !(-std::f64::consts::PI..std::f64::consts::PI).contains(&p.yaw) {
        return Err(Error::invalid_field(format!("{field}.yaw"), "must be in [-pi, pi)"));
    }
    Ok(())
}

impl Scenario {
    pub fn validate(&self) -> Result<()> {
        if !(self.duration_s >= 0.0) || !self.duration_s.is_finite() {
            return Err(Error::invalid_field("duration_s", "must be finite and >= 0"));
        }
        if !(self.tick_dt_s > 0.0) || !self.tick_dt_s.is_finite() {
            return Err(Error::invalid_field("tick_dt_s", "must be > 0"));
        }
        self.intrinsics.validate()?;
        self.scene.validate()?;
        for m in &self.scene.markers {
            check_pose("scene.markers.pose", &m.pose)?;
        }
        self.drone.validate()?;
        self.battery.validate()?;
        self.queue.validate()?;
        check_pose("leader.start", &self.leader.start)?;
        self.leader.plan.validate()?;
        for f in &self.followers {
            check_pose("followers.start", &f.start)?;
            if f.desired_offset.iter().any(|c| !c.is_finite()) {
                return Err(Error::invalid_field("followers.desired_offset", "must be finite"));
            }
        }
        self.tracker.validate()?;
        self.avoidance.validate()?;
        self.channel.validate()?;
        self.central.validate()?;
        for f in &self.failures {
            if !(f.at_s >= 0.0) || !f.at_s.is_finite() {
                return Err(Error::invalid_field("failures.at_s", "must be finite and >= 0"));
            }
        }
        let m = &self.markers;
        if !(m.sigma_pos >= 0.0) || !m.sigma_pos.is_finite() {
            return Err(Error::invalid_field("markers.sigma_pos", "must be finite and >= 0"));
        }
        if !(m.sigma_yaw >= 0.0) || !m.sigma_yaw.is_finite() {
            return Err(Error::invalid_field("markers.sigma_yaw", "must be finite and >= 0"));
        }
        if !(m.min_range_m >= 0.0 && m.min_range_m < m.max_range_m) || !m.max_range_m.is_finite() {
            return Err(Error::invalid_field("markers.min_range_m", "requires 0 <= min_range_m < max_range_m"));
        }
        Ok(())
    }

    /// Number of ticks the run loop executes.
    pub fn tick_count(&self) -> u64 {
        (self.duration_s / self.tick_dt_s + 1e-9).floor() as u64
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario serializes")
    }
}

/// Parse and validate a JSON scenario. Absent fields take their defaults.
pub fn load_scenario(text: &str) -> Result<Scenario> {
    if !text.trim_start().starts_with('{') {
        return Err(Error::ConfigParse("scenario must be a JSON object".into()));
    }
    let s: Scenario = serde_json::from_str(text).map_err(|e| Error::ConfigParse(e.to_string()))?;
    s.validate()?;
    Ok(s)
}

pub fn load_scenario_file(path: &Path) -> Result<Scenario> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    load_scenario(&text)
}
