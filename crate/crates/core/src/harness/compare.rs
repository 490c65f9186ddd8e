use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::coordination::Architecture;
use crate::{Error, Result};

use super::metrics::metrics_csv;
use super::{run_scenario, Scenario};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompareRow {
    pub loss: f64,
    pub latency_s: f64,
    pub mode: Architecture,
    pub rms_tracking_error_m: Option<f64>,
    pub lock_ratio: Option<f64>,
    pub mean_staleness_s: Option<f64>,
    pub messages_dropped: u64,
    /// SHA-256 of the run's metrics CSV.
    pub trace_digest: String,
}

pub const COMPARE_CSV_HEADER: &str = "loss,latency_s,mode,rms_tracking_error_m,lock_ratio,mean_staleness_s,drops,trace_digest";

impl CompareRow {
    pub fn csv_line(&self) -> String {
        let opt = |v: Option<f64>| v.map(|v| format!("{v:.6}")).unwrap_or_default();
        let mode = match self.mode {
            Architecture::Centralized => "centralized",
            Architecture::Decentralized => "decentralized",
        };
        format!(
            "{},{},{},{},{},{},{},{}",
            self.loss,
            self.latency_s,
            mode,
            opt(self.rms_tracking_error_m),
            opt(self.lock_ratio),
            opt(self.mean_staleness_s),
            self.messages_dropped,
            self.trace_digest
        )
    }
}

pub fn compare_csv(rows: &[CompareRow]) -> String {
    let mut out = String::from(COMPARE_CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&r.csv_line());
        out.push('\n');
    }
    out
}

/// Run `s` under both architectures at every (loss, latency) grid point
/// with the scenario's seed. Rows come out loss-major, then latency, then
/// decentralized before centralized.
pub fn compare_architectures(s: &Scenario, losses: &[f64], latencies: &[f64]) -> Result<Vec<CompareRow>> {
    if losses.is_empty() || latencies.is_empty() {
        return Err(Error::EmptyInput("comparison grid"));
    }
    let mut rows = Vec::with_capacity(losses.len() * latencies.len() * 2);
    for &loss in losses {
        for &latency in latencies {
            for mode in [Architecture::Decentralized, Architecture::Centralized] {
                let mut run = s.clone();
                run.mode = mode;
                run.channel.loss_prob = loss;
                run.channel.latency_s = latency;
                let out = run_scenario(&run)?;
                let digest = Sha256::digest(metrics_csv(&out.metrics).as_bytes());
                rows.push(CompareRow {
                    loss,
                    latency_s: latency,
                    mode,
                    rms_tracking_error_m: out.summary.rms_tracking_error_m,
                    lock_ratio: out.summary.lock_ratio,
                    mean_staleness_s: out.summary.mean_staleness_s,
                    messages_dropped: out.summary.messages_dropped,
                    trace_digest: digest.iter().map(|b| format!("{b:02x}")).collect(),
                });
            }
        }
    }
    Ok(rows)
}
