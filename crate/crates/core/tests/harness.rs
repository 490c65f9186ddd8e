use dronefollow::coordination::{Architecture, FailureKind};
use dronefollow::harness::{
    compare_architectures, load_scenario, metrics_csv, run_scenario, run_scenario_with, write_outputs, Event,
    FailureSpec, Scenario, METRICS_CSV_HEADER,
};

fn short(mode: Architecture, duration_s: f64) -> Scenario {
    Scenario { mode, duration_s, ..Scenario::default() }
}

#[test]
fn zero_ticks_give_header_only() {
    let s = load_scenario(r#"{"duration_s": 0}"#).unwrap();
    let out = run_scenario(&s).unwrap();
    assert!(out.metrics.is_empty());
    assert_eq!(metrics_csv(&out.metrics), format!("{METRICS_CSV_HEADER}\n"));
    assert_eq!(out.summary.ticks, 0);
    assert_eq!(out.summary.rms_tracking_error_m, None);
    assert_eq!(out.summary.messages_sent, 0);
}

#[test]
fn row_count_is_ticks_times_agents() {
    for mode in [Architecture::Decentralized, Architecture::Centralized] {
        let s = short(mode, 0.5);
        let out = run_scenario(&s).unwrap();
        assert_eq!(out.metrics.len() as u64, s.tick_count() * 2);
        assert_eq!(metrics_csv(&out.metrics).lines().count() as u64, s.tick_count() * 2 + 1);
        let times: Vec<f64> = out.metrics.iter().map(|r| r.time_s).collect();
        assert!(times.windows(2).all(|w| w[0] <= w[1]));
    }
}

#[test]
fn repeated_runs_are_byte_identical() {
    let mut s = short(Architecture::Centralized, 2.0);
    s.channel.loss_prob = 0.3;
    s.channel.jitter_s = 0.05;
    s.seed = 17;
    let a = metrics_csv(&run_scenario(&s).unwrap().metrics);
    let b = metrics_csv(&run_scenario(&s).unwrap().metrics);
    assert_eq!(a, b);
    s.seed = 18;
    assert_ne!(a, metrics_csv(&run_scenario(&s).unwrap().metrics));
}

#[test]
fn decentralized_ignores_channel_and_central() {
    let base = short(Architecture::Decentralized, 1.0);
    let reference = metrics_csv(&run_scenario(&base).unwrap().metrics);
    let mut lossy = base.clone();
    lossy.channel.loss_prob = 0.9;
    lossy.channel.latency_s = 0.3;
    lossy.failures.push(FailureSpec { kind: FailureKind::Central, at_s: 0.2 });
    let out = run_scenario(&lossy).unwrap();
    assert_eq!(metrics_csv(&out.metrics), reference);
    assert_eq!(out.summary.messages_sent, 0);
}

#[test]
fn centralized_staleness_at_least_round_trip() {
    let mut s = short(Architecture::Centralized, 3.0);
    s.channel.latency_s = 0.1;
    let out = run_scenario(&s).unwrap();
    let ages: Vec<(f64, f64)> = out.metrics.iter().filter_map(|r| r.staleness_s.map(|a| (r.time_s, a))).collect();
    assert!(!ages.is_empty());
    assert!(ages.iter().all(|(_, a)| *a >= 0.1 - 1e-9), "{ages:?}");
    // once leader telemetry flows: telemetry up plus command down
    assert!(ages.iter().filter(|(t, _)| *t >= 0.5).all(|(_, a)| *a >= 0.2 - 1e-9), "{ages:?}");
    let mut slower = s.clone();
    slower.channel.latency_s = 0.2;
    let slow = run_scenario(&slower).unwrap();
    assert!(slow.summary.mean_staleness_s.unwrap() >= out.summary.mean_staleness_s.unwrap());
}

#[test]
fn central_failure_leads_to_hover() {
    let mut s = short(Architecture::Centralized, 7.0);
    s.failures.push(FailureSpec { kind: FailureKind::Central, at_s: 5.0 });
    let out = run_scenario(&s).unwrap();
    for r in out.metrics.iter().filter(|r| r.agent != 0 && r.time_s > 5.5) {
        assert!(r.command.is_hover(), "tick {} {:?}", r.tick, r.command);
        assert!(r.events.contains(&Event::StaleHover));
    }
    assert!(out
        .metrics
        .iter()
        .any(|r| r.agent != 0 && r.time_s < 5.0 && !r.command.is_hover()));
    assert!(out.metrics.iter().any(|r| r.events.contains(&Event::CentralFailure)));
}

#[test]
fn leader_failure_grounds_the_leader() {
    let mut s = short(Architecture::Decentralized, 4.0);
    s.failures.push(FailureSpec { kind: FailureKind::Leader, at_s: 2.0 });
    let out = run_scenario(&s).unwrap();
    let leader: Vec<_> = out.metrics.iter().filter(|r| r.agent == 0).collect();
    assert!(leader.iter().any(|r| r.events.contains(&Event::LeaderFailure)));
    let last = leader.last().unwrap();
    assert!(!last.airborne);
    assert!(last.pose.position.z < 0.5);
}

#[test]
fn ideal_channel_pursuit_converges() {
    let mut s = short(Architecture::Centralized, 20.0);
    s.central.staleness_timeout_s = 1e9;
    let out = run_scenario(&s).unwrap();
    let late: Vec<f64> = out
        .metrics
        .iter()
        .filter(|r| r.agent == 1 && r.time_s >= 15.0)
        .map(|r| r.tracking_error_m.unwrap())
        .collect();
    assert!(late.iter().all(|e| *e < 0.1), "{:?}", late.last());
}

#[test]
fn frame_dump_sees_every_follower_tick() {
    let s = short(Architecture::Decentralized, 0.2);
    let mut seen = Vec::new();
    let mut sink = |d: &dronefollow::harness::FrameDump<'_>| {
        assert_eq!(d.frame.channels(), 3);
        assert_eq!(d.depth.channels(), 1);
        assert_eq!(d.depth.width(), 240);
        seen.push((d.tick, d.agent));
        Ok(())
    };
    let out = run_scenario_with(&s, Some(&mut sink)).unwrap();
    assert_eq!(seen, (0..s.tick_count()).map(|t| (t, 1)).collect::<Vec<_>>());
    let plain = run_scenario(&s).unwrap();
    assert_eq!(out, plain);
}

#[test]
fn compare_rows_cover_grid() {
    let s = short(Architecture::Decentralized, 0.3);
    let rows = compare_architectures(&s, &[0.0, 0.5], &[0.0]).unwrap();
    assert_eq!(rows.len(), 4);
    assert!(rows.iter().all(|r| r.rms_tracking_error_m.unwrap().is_finite()));
    assert_eq!(rows[0].trace_digest, rows[2].trace_digest);
    assert!(compare_architectures(&s, &[], &[0.0]).is_err());
}

#[test]
fn outputs_written() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_scenario(&short(Architecture::Centralized, 0.2)).unwrap();
    write_outputs(&out.metrics, &out.summary, dir.path()).unwrap();
    let csv = std::fs::read_to_string(dir.path().join("metrics.csv")).unwrap();
    assert_eq!(csv.lines().next().unwrap(), METRICS_CSV_HEADER);
    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary["ticks"], 6);
}
