use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;

use crate::control::VelocityCommand;
use crate::geometry::Pose;
use crate::{Error, Result};

pub const METRICS_CSV_HEADER: &str =
    "tick,time_s,agent,x,y,z,yaw,tracking_error_m,dx,dy,radius,locked,staleness_s,backlog,dropped,battery_ah,event";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Event {
    LeaderFailure,
    CentralFailure,
    LockAcquired,
    LockLost,
    Avoiding,
    StaleHover,
    FloorClamp,
    BatteryDepleted,
}

impl Event {
    pub fn as_str(self) -> &'static str {
        match self {
            Event::LeaderFailure => "leader_failure",
            Event::CentralFailure => "central_failure",
            Event::LockAcquired => "lock_acquired",
            Event::LockLost => "lock_lost",
            Event::Avoiding => "avoiding",
            Event::StaleHover => "stale_hover",
            Event::FloorClamp => "floor_clamp",
            Event::BatteryDepleted => "battery_depleted",
        }
    }
}

/// One agent at one tick: its state when the tick's command was decided,
/// that command, and what happened during the tick. Fields that do not
/// apply to the agent or the architecture are `None`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricsRecord {
    pub tick: u64,
    pub time_s: f64,
    pub agent: u32,
    pub pose: Pose,
    pub airborne: bool,
    /// Distance from the follower to its offset point behind the leader.
    pub tracking_error_m: Option<f64>,
    pub dx: Option<f64>,
    pub dy: Option<f64>,
    pub radius: Option<f64>,
    pub locked: Option<bool>,
    pub staleness_s: Option<f64>,
    pub backlog: Option<usize>,
    /// Messages lost by the channel so far.
    pub dropped: u64,
    pub battery_ah: f64,
    pub command: VelocityCommand,
    pub events: Vec<Event>,
}

impl MetricsRecord {
    pub fn csv_line(&self) -> String {
        fn opt(v: Option<f64>) -> String {
            v.map(|v| format!("{v:.6}")).unwrap_or_default()
        }
        let events: Vec<&str> = self.events.iter().map(|e| e.as_str()).collect();
        let p = &self.pose.position;
        format!(
            "{},{:.6},{},{:.6},{:.6},{:.6},{:.6},{},{},{},{},{},{},{},{},{:.6},{}",
            self.tick,
            self.time_s,
            self.agent,
            p.x,
            p.y,
            p.z,
            self.pose.yaw,
            opt(self.tracking_error_m),
            opt(self.dx),
            opt(self.dy),
            opt(self.radius),
            self.locked.map(|l| u8::from(l).to_string()).unwrap_or_default(),
            opt(self.staleness_s),
            self.backlog.map(|b| b.to_string()).unwrap_or_default(),
            self.dropped,
            self.battery_ah,
            events.join(";"),
        )
    }
}

pub fn metrics_csv(metrics: &[MetricsRecord]) -> String {
    let mut out = String::with_capacity(64 + metrics.len() * 120);
    out.push_str(METRICS_CSV_HEADER);
    out.push('\n');
    for m in metrics {
        let _ = writeln!(out, "{}", m.csv_line());
    }
    out
}

/// Aggregates over a run. Statistics with no samples are `None`.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Summary {
    pub ticks: u64,
    pub agents: usize,
    pub rms_tracking_error_m: Option<f64>,
    pub final_tracking_error_m: Option<f64>,
    /// Locked ticks over ticks since the first lock (vision followers only).
    pub lock_ratio: Option<f64>,
    pub mean_staleness_s: Option<f64>,
    pub messages_sent: u64,
    pub messages_dropped: u64,
    /// When the leader finished its last waypoint leg.
    pub completion_time_s: Option<f64>,
    pub min_airborne_z_m: Option<f64>,
    pub floor_clamp_events: u64,
    pub mean_localization_error_m: Option<f64>,
    pub throughput_fps: Option<f64>,
    pub final_backlog: Option<usize>,
    pub dropped_frames: u64,
}

pub fn summary_json(summary: &Summary) -> String {
    serde_json::to_string_pretty(summary).expect("summary serializes")
}

/// Write `metrics.csv` and `summary.json` into `dir`, creating it if needed.
pub fn write_outputs(metrics: &[MetricsRecord], summary: &Summary, dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let csv = dir.join("metrics.csv");
    std::fs::write(&csv, metrics_csv(metrics)).map_err(|e| Error::io(&csv, e))?;
    let json = dir.join("summary.json");
    std::fs::write(&json, summary_json(summary) + "\n").map_err(|e| Error::io(&json, e))?;
    Ok(())
}
