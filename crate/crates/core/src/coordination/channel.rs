use rand::Rng;
use serde::{Deserialize, Serialize};

use super::Message;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ChannelParams {
    /// Fixed one-way delay, s.
    pub latency_s: f64,
    /// Extra uniform delay in `[0, jitter_s)`, s.
    pub jitter_s: f64,
    pub loss_prob: f64,
}

impl Default for ChannelParams {
    fn default() -> Self {
        Self { latency_s: 0.0, jitter_s: 0.0, loss_prob: 0.0 }
    }
}

impl ChannelParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.latency_s >= 0.0) || !self.latency_s.is_finite() {
            return Err(Error::invalid_field("channel.latency_s", "must be finite and >= 0"));
        }
        if !(self.jitter_s >= 0.0) || !self.jitter_s.is_finite() {
            return Err(Error::invalid_field("channel.jitter_s", "must be finite and >= 0"));
        }
        if !(0.0..=1.0).contains(&self.loss_prob) {
            return Err(Error::invalid_field("channel.loss_prob", "must be in [0, 1]"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
struct InFlight {
    deliver_at: f64,
    seq: u64,
    message: Message,
}

/// Point-to-point message channel with fixed latency, optional jitter and
/// Bernoulli loss decided at send time.
#[derive(Debug, Clone, PartialEq)]
pub struct Channel {
    params: ChannelParams,
    in_flight: Vec<InFlight>,
    next_seq: u64,
    sent: u64,
    delivered: u64,
    dropped: u64,
}

impl Channel {
    pub fn new(params: ChannelParams) -> Result<Self> {
        params.validate()?;
        Ok(Self { params, in_flight: Vec::new(), next_seq: 0, sent: 0, delivered: 0, dropped: 0 })
    }

    pub fn params(&self) -> &ChannelParams {
        &self.params
    }

    pub fn sent(&self) -> u64 {
        self.sent
    }

    pub fn delivered(&self) -> u64 {
        self.delivered
    }

    pub fn dropped(&self) -> u64 {
        self.dropped
    }

    pub fn in_flight(&self) -> usize {
        self.in_flight.len()
    }

    /// Remove and return every message due by `now`, in delivery order
    /// (ties by send order).
    pub fn deliver(&mut self, now: f64) -> Vec<Message> {
        let due = self.in_flight.partition_point(|f| f.deliver_at <= now + 1e-9);
        let out: Vec<Message> = self.in_flight.drain(..due).map(|f| f.message).collect();
        self.delivered += out.len() as u64;
        out
    }
}

/// Send `m` at `now`. Every send consumes exactly two uniform draws (loss,
/// then jitter), so runs that differ only in loss probability lose nested
/// sets of messages. Returns whether the message was scheduled.
pub fn channel_send<R: Rng + ?Sized>(ch: &mut Channel, m: Message, now: f64, rng: &mut R) -> Result<bool> {
    if now < m.sent_at {
        return Err(Error::InvalidArgument(format!(
            "message sent_at {} is later than now {now}",
            m.sent_at
        )));
    }
    let loss_draw: f64 = rng.random();
    let jitter_draw: f64 = rng.random();
    ch.sent += 1;
    if loss_draw < ch.params.loss_prob {
        ch.dropped += 1;
        return Ok(false);
    }
    let deliver_at = now + ch.params.latency_s + jitter_draw * ch.params.jitter_s;
    let seq = ch.next_seq;
    ch.next_seq += 1;
    let at = ch
        .in_flight
        .partition_point(|f| (f.deliver_at, f.seq) < (deliver_at, seq));
    ch.in_flight.insert(at, InFlight { deliver_at, seq, message: m });
    Ok(true)
}
