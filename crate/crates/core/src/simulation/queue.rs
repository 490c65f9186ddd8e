use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
struct Pending {
    id: u64,
    arrival: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProcessedFrame {
    pub id: u64,
    pub arrival: f64,
    pub completion: f64,
    pub latency: f64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct QueueStepReport {
    pub processed: Vec<ProcessedFrame>,
    /// Frames evicted this step because the queue was full.
    pub dropped: usize,
}

impl QueueStepReport {
    pub fn mean_latency(&self) -> Option<f64> {
        if self.processed.is_empty() {
            None
        } else {
            Some(self.processed.iter().map(|f| f.latency).sum::<f64>() / self.processed.len() as f64)
        }
    }
}

/// Single-server FIFO model of the frame-processing backlog.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameQueue {
    service_time: f64,
    capacity: Option<usize>,
    pending: VecDeque<Pending>,
    /// Time at which the server finished its last frame.
    server_free_at: f64,
    /// Completion time of the head frame once its service has started.
    head_completion: Option<f64>,
    next_id: u64,
    arrived: u64,
    processed: u64,
    dropped: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct QueueParams {
    pub service_time_s: f64,
    pub capacity: Option<usize>,
}

impl Default for QueueParams {
    fn default() -> Self {
        Self {
            service_time_s: 0.231,
            capacity: None,
        }
    }
}

impl QueueParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.service_time_s > 0.0) || !self.service_time_s.is_finite() {
            return Err(Error::invalid_field("queue.service_time_s", "must be > 0"));
        }
        if self.capacity == Some(0) {
            return Err(Error::invalid_field("queue.capacity", "must be >= 1 when set"));
        }
        Ok(())
    }
}

impl From<QueueParams> for FrameQueue {
    fn from(p: QueueParams) -> Self {
        FrameQueue::new(p.service_time_s, p.capacity)
    }
}

impl Default for FrameQueue {
    fn default() -> Self {
        QueueParams::default().into()
    }
}

impl FrameQueue {
    pub fn new(service_time: f64, capacity: Option<usize>) -> Self {
        Self {
            service_time,
            capacity,
            pending: VecDeque::new(),
            server_free_at: f64::NEG_INFINITY,
            head_completion: None,
            next_id: 0,
            arrived: 0,
            processed: 0,
            dropped: 0,
        }
    }

    pub fn service_time(&self) -> f64 {
        self.service_time
    }

    pub fn capacity(&self) -> Option<usize> {
        self.capacity
    }

    pub fn backlog(&self) -> usize {
        self.pending.len()
    }

    pub fn arrived(&self) -> u64 {
        self.arrived
    }

    pub fn processed(&self) -> u64 {
        self.processed
    }

    pub fn dropped(&self) -> u64 {
        self.dropped
    }
}

/// Enqueue `arrivals` (timestamps) and serve the queue over `[now, now + budget]`.
///
/// Each frame occupies the server for `service_time`; a frame completes in
/// this step only if its service ends inside the window. Latency is
/// completion minus arrival. A bounded queue evicts its oldest frame to make
/// room for a new arrival.
pub fn frame_queue_step(q: &mut FrameQueue, arrivals: &[f64], now: f64, budget: f64) -> Result<QueueStepReport> {
    if !(budget >= 0.0) {
        return Err(Error::InvalidArgument(format!("queue budget must be >= 0, got {budget}")));
    }
    let mut report = QueueStepReport::default();
    for &arrival in arrivals {
        if let Some(cap) = q.capacity {
            while q.pending.len() >= cap {
                q.pending.pop_front();
                q.dropped += 1;
                report.dropped += 1;
            }
        }
        q.pending.push_back(Pending { id: q.next_id, arrival });
        q.next_id += 1;
        q.arrived += 1;
    }

    let window_end = now + budget;
    let mut clock = q.server_free_at.max(now.min(q.pending.front().map_or(now, |f| f.arrival)));
    while let Some(front) = q.pending.front().copied() {
        let completion = q
            .head_completion
            .unwrap_or_else(|| clock.max(front.arrival) + q.service_time);
        // tolerate accumulated float error on exact boundaries
        if completion > window_end + 1e-9 {
            // service has begun and carries over into the next window
            q.head_completion = Some(completion);
            break;
        }
        q.head_completion = None;
        q.pending.pop_front();
        q.processed += 1;
        clock = completion;
        report.processed.push(ProcessedFrame {
            id: front.id,
            arrival: front.arrival,
            completion,
            latency: completion - front.arrival,
        });
    }
    q.server_free_at = clock;
    Ok(report)
}
