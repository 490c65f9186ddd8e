//! Scenario configuration, the deterministic run loop, metrics output and
//! the architecture comparison sweep.

mod compare;
mod metrics;
mod rng;
mod run;
mod scenario;

pub use compare::{compare_architectures, compare_csv, CompareRow, COMPARE_CSV_HEADER};
pub use metrics::{metrics_csv, summary_json, write_outputs, Event, MetricsRecord, Summary, METRICS_CSV_HEADER};
pub use rng::{substream, CHANNEL_STREAM, MARKER_NOISE_STREAM};
pub use run::{run_scenario, run_scenario_with, FrameDump, RunOutput, LEADER_ID};
pub use scenario::{
    load_scenario, load_scenario_file, FailureSpec, FollowerSpec, LeaderSpec, MarkerSensing, Scenario,
};
