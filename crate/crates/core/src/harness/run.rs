use crate::control::VelocityCommand;
use crate::coordination::{
    central_step, channel_send, decentralized_step, inject_failure, Architecture, CentralState, Channel,
    FollowerSlot, Message, NodeId, Payload, SwarmMode, Telemetry,
};
use crate::imaging::ImageBuffer;
use crate::perception::{estimate_pose, HudRecord, TrackerStates};
use crate::simulation::{
    battery_step, frame_queue_step, leader_step, render_camera, render_depth, step_drone, visible_markers,
    AgentPose, DroneState, FrameQueue, LeaderProgress,
};
use crate::Result;

use super::metrics::{Event, MetricsRecord, Summary};
use super::rng::{substream, CHANNEL_STREAM, MARKER_NOISE_STREAM};
use super::Scenario;

pub const LEADER_ID: u32 = 0;

/// Camera and depth views of one vision follower at one tick.
pub struct FrameDump<'a> {
    pub tick: u64,
    pub agent: u32,
    pub frame: &'a ImageBuffer,
    pub depth: &'a ImageBuffer,
    pub hud: &'a HudRecord,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub metrics: Vec<MetricsRecord>,
    pub summary: Summary,
}

struct Follower {
    id: u32,
    slot: FollowerSlot,
    states: TrackerStates,
    queue: FrameQueue,
    locked: bool,
    acquired: bool,
    /// Latest command received over the channel and its basis time.
    mailbox: Option<(VelocityCommand, f64)>,
}

#[derive(Default)]
struct Tally {
    err_sq: f64,
    err_n: u64,
    locked_since_first: u64,
    ticks_since_first: u64,
    staleness_sum: f64,
    staleness_n: u64,
    loc_err_sum: f64,
    loc_err_n: u64,
    floor_events: u64,
    min_airborne_z: Option<f64>,
}

pub fn run_scenario(s: &Scenario) -> Result<RunOutput> {
    run_scenario_with(s, None)
}

/// Run the tick loop, handing every vision follower's views to `dump`.
pub fn run_scenario_with(
    s: &Scenario,
    mut dump: Option<&mut dyn FnMut(&FrameDump<'_>) -> Result<()>>,
) -> Result<RunOutput> {
    s.validate()?;
    let dt = s.tick_dt_s;
    let n = s.tick_count();
    let k = s.intrinsics;
    let k_depth = k.downsampled(s.avoidance.downsample);

    let mut mode = SwarmMode::new(s.mode);
    for f in &s.failures {
        mode = inject_failure(mode, f.kind, f.at_s)?;
    }
    let mut channel_rng = substream(s.seed, CHANNEL_STREAM);
    let mut marker_rng = substream(s.seed, MARKER_NOISE_STREAM);
    let mut channel = Channel::new(s.channel)?;
    let mut central = CentralState::new(LEADER_ID);
    let mut central_inbox: Vec<Message> = Vec::new();

    let full = s.battery.full();
    let mut drones: Vec<DroneState> = std::iter::once(DroneState::hovering(s.leader.start, full))
        .chain(s.followers.iter().map(|f| DroneState::hovering(f.start, full)))
        .collect();
    let mut followers: Vec<Follower> = s
        .followers
        .iter()
        .enumerate()
        .map(|(i, f)| {
            let id = i as u32 + 1;
            Follower {
                id,
                slot: FollowerSlot { id, desired_offset: f.desired_offset },
                states: TrackerStates::default(),
                queue: s.queue.into(),
                locked: false,
                acquired: false,
                mailbox: None,
            }
        })
        .collect();
    let slots: Vec<FollowerSlot> = followers.iter().map(|f| f.slot).collect();
    let mut progress = LeaderProgress::new(s.leader.start.position, &s.leader.plan);
    let mut completion_time = None;
    if progress.finished() {
        completion_time = Some(0.0);
    }
    let mut leader_failed = false;
    let mut central_failed = false;

    let mut metrics = Vec::with_capacity((n as usize) * drones.len());
    let mut tally = Tally::default();

    for tick in 0..n {
        let now = tick as f64 * dt;
        let pre = drones.clone();
        let mut events: Vec<Vec<Event>> = vec![Vec::new(); drones.len()];
        let mut commands = vec![VelocityCommand::hover(); drones.len()];
        let mut huds: Vec<Option<HudRecord>> = vec![None; drones.len()];
        let mut staleness: Vec<Option<f64>> = vec![None; drones.len()];

        if !leader_failed && !mode.leader_alive(now) {
            leader_failed = true;
            drones[0].grounded = true;
            events[0].push(Event::LeaderFailure);
        }
        if s.mode == Architecture::Centralized && !central_failed && !mode.central_alive(now) {
            central_failed = true;
            events[0].push(Event::CentralFailure);
        }

        if !drones[0].grounded {
            let (cmd, next) = leader_step(&drones[0], &s.leader.plan, &progress, &s.drone);
            commands[0] = cmd;
            progress = next;
            if completion_time.is_none() && progress.finished() {
                completion_time = Some(now);
            }
        }

        let agents: Vec<AgentPose> = pre
            .iter()
            .enumerate()
            .map(|(i, d)| AgentPose { id: i as u32, pose: d.pose })
            .collect();

        match s.mode {
            Architecture::Decentralized => {
                for f in followers.iter_mut() {
                    let idx = f.id as usize;
                    let me = &pre[idx];
                    if me.grounded {
                        continue;
                    }
                    let altitude = me.pose.position.z;
                    let frame = render_camera(&s.scene, &me.pose, &k, &agents);
                    let depth = render_depth(&s.scene, &me.pose, &k_depth, s.avoidance.near_m, s.avoidance.far_m, &agents);
                    let out = decentralized_step(&frame, &depth, &s.tracker, &mut f.states, &s.avoidance, dt, altitude)?;
                    commands[idx] = out.command;
                    huds[idx] = Some(out.hud);
                    if out.avoiding {
                        events[idx].push(Event::Avoiding);
                    }
                    if let Some(cb) = dump.as_mut() {
                        cb(&FrameDump { tick, agent: f.id, frame: &frame, depth: &depth, hud: &out.hud })?;
                    }
                }
            }
            Architecture::Centralized => {
                for (i, d) in pre.iter().enumerate() {
                    if d.grounded {
                        continue;
                    }
                    let m = Message {
                        sender: NodeId::Agent(i as u32),
                        receiver: NodeId::Central,
                        sent_at: now,
                        payload: Payload::Telemetry(Telemetry {
                            pose: d.pose,
                            velocity: d.velocity,
                            battery_ah: d.battery.charge_ah,
                            altitude: d.pose.position.z,
                        }),
                    };
                    channel_send(&mut channel, m, now, &mut channel_rng)?;
                }
                route(channel.deliver(now), &mut central_inbox, &mut followers);
                if mode.central_alive(now) {
                    let out = central_step(&mut central, &central_inbox, now, &slots, &s.central, &s.drone);
                    for c in out {
                        channel_send(&mut channel, c.message(now), now, &mut channel_rng)?;
                    }
                }
                central_inbox.clear();
                route(channel.deliver(now), &mut central_inbox, &mut followers);

                for f in &followers {
                    let idx = f.id as usize;
                    if let Some((cmd, basis)) = f.mailbox {
                        let age = now - basis;
                        staleness[idx] = Some(age);
                        if age <= s.central.staleness_timeout_s {
                            commands[idx] = cmd;
                            continue;
                        }
                    }
                    if !pre[idx].grounded {
                        events[idx].push(Event::StaleHover);
                    }
                }
            }
        }

        for (i, d) in drones.iter_mut().enumerate() {
            let step = step_drone(d, &commands[i], dt, &s.drone);
            *d = step.state;
            if step.floor_clamped {
                events[i].push(Event::FloorClamp);
                tally.floor_events += 1;
            }
            if !d.grounded {
                let (battery, depleted) = battery_step(&d.battery, s.battery.hover_draw_a, dt);
                d.battery = battery;
                if depleted {
                    d.grounded = true;
                    events[i].push(Event::BatteryDepleted);
                }
            }
        }

        let mut backlog: Vec<Option<usize>> = vec![None; drones.len()];
        if s.mode == Architecture::Decentralized {
            for f in followers.iter_mut() {
                frame_queue_step(&mut f.queue, &[now], now, dt)?;
                backlog[f.id as usize] = Some(f.queue.backlog());
            }
        }

        for f in &followers {
            let me = &pre[f.id as usize];
            let obs = visible_markers(
                &s.scene,
                &me.pose,
                &k,
                s.markers.min_range_m,
                s.markers.max_range_m,
                s.markers.sigma_pos,
                s.markers.sigma_yaw,
                &mut marker_rng,
            )?;
            if let Ok(est) = estimate_pose(&obs) {
                tally.loc_err_sum += (est.pose.position - me.pose.position).norm();
                tally.loc_err_n += 1;
            }
        }

        for (i, d) in pre.iter().enumerate() {
            let id = i as u32;
            let follower = followers.iter_mut().find(|f| f.id == id);
            let mut rec = MetricsRecord {
                tick,
                time_s: now,
                agent: id,
                pose: d.pose,
                airborne: !d.grounded,
                tracking_error_m: None,
                dx: None,
                dy: None,
                radius: None,
                locked: None,
                staleness_s: staleness[i],
                backlog: backlog[i],
                dropped: channel.dropped(),
                battery_ah: d.battery.charge_ah,
                command: commands[i],
                events: std::mem::take(&mut events[i]),
            };
            if let Some(f) = follower {
                let goal = pre[0].pose.transform_point(&f.slot.desired_offset);
                let err = (goal - d.pose.position).norm();
                rec.tracking_error_m = Some(err);
                tally.err_sq += err * err;
                tally.err_n += 1;
                if let Some(age) = rec.staleness_s {
                    tally.staleness_sum += age;
                    tally.staleness_n += 1;
                }
                if s.mode == Architecture::Decentralized {
                    let hud = huds[i].unwrap_or_else(|| HudRecord::lost(d.pose.position.z));
                    let locked = hud.target_locked;
                    rec.dx = hud.offset_vector.map(|v| v.0);
                    rec.dy = hud.offset_vector.map(|v| v.1);
                    rec.radius = hud.circle.map(|c| c.radius);
                    rec.locked = Some(locked);
                    if locked && !f.locked {
                        rec.events.insert(0, Event::LockAcquired);
                    } else if !locked && f.locked {
                        rec.events.insert(0, Event::LockLost);
                    }
                    f.acquired |= locked;
                    if f.acquired {
                        tally.ticks_since_first += 1;
                        tally.locked_since_first += u64::from(locked);
                    }
                    f.locked = locked;
                }
            }
            if rec.airborne {
                let z = d.pose.position.z;
                tally.min_airborne_z = Some(tally.min_airborne_z.map_or(z, |m: f64| m.min(z)));
            }
            metrics.push(rec);
        }
    }

    let elapsed = n as f64 * dt;
    let vision = s.mode == Architecture::Decentralized && !followers.is_empty();
    let mean = |sum: f64, count: u64| (count > 0).then(|| sum / count as f64);
    let final_err = metrics
        .iter()
        .rev()
        .take_while(|r| r.tick + 1 == n)
        .filter_map(|r| r.tracking_error_m)
        .reduce(f64::max);
    let summary = Summary {
        ticks: n,
        agents: drones.len(),
        rms_tracking_error_m: mean(tally.err_sq, tally.err_n).map(f64::sqrt),
        final_tracking_error_m: final_err,
        lock_ratio: (vision && tally.ticks_since_first > 0)
            .then(|| tally.locked_since_first as f64 / tally.ticks_since_first as f64),
        mean_staleness_s: mean(tally.staleness_sum, tally.staleness_n),
        messages_sent: channel.sent(),
        messages_dropped: channel.dropped(),
        completion_time_s: completion_time,
        min_airborne_z_m: tally.min_airborne_z,
        floor_clamp_events: tally.floor_events,
        mean_localization_error_m: mean(tally.loc_err_sum, tally.loc_err_n),
        throughput_fps: (vision && n > 0).then(|| {
            followers.iter().map(|f| f.queue.processed() as f64).sum::<f64>() / elapsed / followers.len() as f64
        }),
        final_backlog: vision.then(|| followers.iter().map(|f| f.queue.backlog()).max().unwrap_or(0)),
        dropped_frames: followers.iter().map(|f| f.queue.dropped()).sum(),
    };
    Ok(RunOutput { metrics, summary })
}

fn route(delivered: Vec<Message>, central_inbox: &mut Vec<Message>, followers: &mut [Follower]) {
    for m in delivered {
        match (m.receiver, m.payload) {
            (NodeId::Central, _) => central_inbox.push(m),
            (NodeId::Agent(id), Payload::Command { command, basis_sent_at }) => {
                if let Some(f) = followers.iter_mut().find(|f| f.id == id) {
                    if f.mailbox.is_none_or(|(_, b)| basis_sent_at >= b) {
                        f.mailbox = Some((command, basis_sent_at));
                    }
                }
            }
            (NodeId::Agent(_), Payload::Telemetry(_)) => {}
        }
    }
}
