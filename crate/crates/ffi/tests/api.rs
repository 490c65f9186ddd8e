use std::ffi::{c_char, CStr, CString};
use std::ptr;

use dronefollow::geometry::{CameraIntrinsics, Pose};
use dronefollow::harness::{metrics_csv, run_scenario, Scenario, METRICS_CSV_HEADER};
use dronefollow::perception::{track_frame, TrackerConfig, TrackerStates};
use dronefollow::simulation::{render_camera, AgentPose, Scene};
use dronefollow::Vec3;
use dronefollow_ffi::*;

fn last_error() -> String {
    let p = df_last_error_message();
    assert!(!p.is_null(), "expected an error message");
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn take_string(p: *mut c_char) -> String {
    assert!(!p.is_null());
    let s = unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_owned();
    unsafe { df_string_free(p) };
    s
}

fn scenario_from_json(json: &str) -> Result<*mut DfScenario, DfStatus> {
    let c = CString::new(json).unwrap();
    let mut out = ptr::null_mut();
    match unsafe { df_scenario_from_json(c.as_ptr(), &mut out) } {
        DfStatus::Ok => Ok(out),
        st => Err(st),
    }
}

#[test]
fn scenario_json_round_trips_through_handles() {
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { df_scenario_default(&mut s) }, DfStatus::Ok);
    assert_eq!(unsafe { df_scenario_set_seed(s, 42) }, DfStatus::Ok);
    let mut text = ptr::null_mut();
    assert_eq!(unsafe { df_scenario_to_json(s, &mut text) }, DfStatus::Ok);
    let json = take_string(text);
    unsafe { df_scenario_free(s) };

    let again = scenario_from_json(&json).unwrap();
    let mut text2 = ptr::null_mut();
    assert_eq!(unsafe { df_scenario_to_json(again, &mut text2) }, DfStatus::Ok);
    assert_eq!(take_string(text2), json);
    let parsed: Scenario = serde_json::from_str(&json).unwrap();
    assert_eq!(parsed.seed, 42);
    unsafe { df_scenario_free(again) };
}

#[test]
fn config_errors_carry_status_and_message() {
    assert_eq!(scenario_from_json("{\"duration\": 3}").unwrap_err(), DfStatus::Config);
    assert!(last_error().contains("duration"));
    assert_eq!(scenario_from_json("{\"tick_dt_s\": -1}").unwrap_err(), DfStatus::Config);
    assert!(last_error().contains("tick_dt_s"));
    assert_eq!(scenario_from_json("not json").unwrap_err(), DfStatus::Config);

    let bad = CString::new("{\"radius_setpoint\": 0}").unwrap();
    let mut t = ptr::null_mut();
    assert_eq!(unsafe { df_tracker_new(bad.as_ptr(), &mut t) }, DfStatus::Config);
    assert!(t.is_null());
    let list = CString::new("[]").unwrap();
    assert_eq!(unsafe { df_tracker_new(list.as_ptr(), &mut t) }, DfStatus::Config);
    let partial = CString::new("{\"min_component_area\": 5}").unwrap();
    assert_eq!(unsafe { df_tracker_new(partial.as_ptr(), &mut t) }, DfStatus::Ok);
    unsafe { df_tracker_free(t) };
}

#[test]
fn missing_file_is_io() {
    let dir = tempfile::tempdir().unwrap();
    let path = CString::new(dir.path().join("absent.json").to_str().unwrap()).unwrap();
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { df_scenario_from_file(path.as_ptr(), &mut s) }, DfStatus::Io);
    assert!(s.is_null());
}

#[test]
fn null_arguments_are_rejected() {
    assert_eq!(unsafe { df_scenario_default(ptr::null_mut()) }, DfStatus::Null);
    assert!(last_error().contains("out"));
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { df_scenario_from_json(ptr::null(), &mut s) }, DfStatus::Null);
    let mut r = ptr::null_mut();
    assert_eq!(unsafe { df_run(ptr::null(), &mut r) }, DfStatus::Null);
    let mut c = DfCircle::default();
    assert_eq!(unsafe { df_min_enclosing_circle(ptr::null(), 3, &mut c) }, DfStatus::Null);
    let mut res = DfTrackResult::default();
    assert_eq!(
        unsafe { df_tracker_track(ptr::null_mut(), [0u8; 3].as_ptr(), 1, 1, 0.1, 1.0, &mut res) },
        DfStatus::Null
    );
    unsafe {
        df_scenario_free(ptr::null_mut());
        df_run_free(ptr::null_mut());
        df_tracker_free(ptr::null_mut());
        df_string_free(ptr::null_mut());
    }
}

#[test]
fn run_matches_library_and_writes_outputs() {
    let json = "{\"duration_s\": 1.0, \"seed\": 3}";
    let s = scenario_from_json(json).unwrap();
    let mut r = ptr::null_mut();
    assert_eq!(unsafe { df_run(s, &mut r) }, DfStatus::Ok);

    let mut csv = ptr::null_mut();
    assert_eq!(unsafe { df_run_metrics_csv(r, &mut csv) }, DfStatus::Ok);
    let csv = take_string(csv);
    assert_eq!(csv.lines().next().unwrap(), METRICS_CSV_HEADER);
    let direct = run_scenario(&dronefollow::harness::load_scenario(json).unwrap()).unwrap();
    assert_eq!(csv, metrics_csv(&direct.metrics));

    let mut summary = ptr::null_mut();
    assert_eq!(unsafe { df_run_summary_json(r, &mut summary) }, DfStatus::Ok);
    let summary: serde_json::Value = serde_json::from_str(&take_string(summary)).unwrap();
    assert_eq!(summary["ticks"], 30);

    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("nested").join("out");
    let cdir = CString::new(out.to_str().unwrap()).unwrap();
    assert_eq!(unsafe { df_run_write_outputs(r, cdir.as_ptr()) }, DfStatus::Ok);
    assert_eq!(std::fs::read_to_string(out.join("metrics.csv")).unwrap(), csv);
    assert!(out.join("summary.json").is_file());

    unsafe {
        df_run_free(r);
        df_scenario_free(s);
    }
}

#[test]
fn tracker_matches_library_pipeline() {
    let k = CameraIntrinsics::default();
    let cam = Pose::new(Vec3::new(0.0, 0.0, 1.0), 0.0);
    let mut frames = Vec::new();
    for (x, y) in [(1.29, 0.0), (1.4, 0.1), (1.1, -0.08)] {
        let leader = AgentPose { id: 0, pose: Pose::new(Vec3::new(x + 0.06, y, 1.02), 0.0) };
        frames.push(render_camera(&Scene::default(), &cam, &k, &[leader]));
    }
    let blank = render_camera(&Scene::default(), &cam, &k, &[]);

    let mut t = ptr::null_mut();
    assert_eq!(unsafe { df_tracker_new(ptr::null(), &mut t) }, DfStatus::Ok);
    let cfg = TrackerConfig::default();
    let mut states = TrackerStates::default();
    for f in frames.iter().chain([&blank]) {
        let mut res = DfTrackResult::default();
        let st = unsafe {
            df_tracker_track(t, f.data().as_ptr(), f.width(), f.height(), 1.0 / 30.0, 1.0, &mut res)
        };
        assert_eq!(st, DfStatus::Ok);
        let want = track_frame(f, &cfg, &mut states, 1.0 / 30.0, 1.0).unwrap();
        assert_eq!(res.forward, want.command.forward);
        assert_eq!(res.lateral, want.command.lateral);
        assert_eq!(res.vertical, want.command.vertical);
        assert_eq!(res.yaw_rate, want.command.yaw_rate);
        assert_eq!(res.locked, want.hud.target_locked);
        if let Some(c) = want.hud.circle {
            assert_eq!((res.circle.x, res.circle.y, res.circle.radius), (c.x, c.y, c.radius));
        }
    }

    // 920 · 0.02 / 1.29 ≈ 14.3 px at the first pose
    let f = &frames[0];
    let mut res = DfTrackResult::default();
    assert_eq!(unsafe { df_tracker_reset(t) }, DfStatus::Ok);
    assert_eq!(
        unsafe { df_tracker_track(t, f.data().as_ptr(), f.width(), f.height(), 1.0 / 30.0, 1.0, &mut res) },
        DfStatus::Ok
    );
    assert!(res.locked);
    assert!((res.circle.radius - 920.0 * 0.02 / 1.29).abs() < 1.5, "radius {}", res.circle.radius);

    assert_eq!(
        unsafe { df_tracker_track(t, f.data().as_ptr(), f.width(), f.height(), 0.0, 1.0, &mut res) },
        DfStatus::InvalidArgument
    );
    assert_eq!(
        unsafe { df_tracker_track(t, f.data().as_ptr(), 0, 10, 0.1, 1.0, &mut res) },
        DfStatus::InvalidArgument
    );
    unsafe { df_tracker_free(t) };
}

#[test]
fn enclosing_circle_of_right_triangle() {
    let xy = [0.0, 0.0, 4.0, 0.0, 0.0, 3.0];
    let mut c = DfCircle::default();
    assert_eq!(unsafe { df_min_enclosing_circle(xy.as_ptr(), 3, &mut c) }, DfStatus::Ok);
    assert!((c.x - 2.0).abs() < 1e-12 && (c.y - 1.5).abs() < 1e-12 && (c.radius - 2.5).abs() < 1e-12);
    assert_eq!(unsafe { df_min_enclosing_circle(xy.as_ptr(), 0, &mut c) }, DfStatus::InvalidArgument);
}

#[test]
fn errors_are_per_thread_and_cleared_on_success() {
    assert_eq!(scenario_from_json("[]").unwrap_err(), DfStatus::Config);
    let other = std::thread::spawn(|| df_last_error_message().is_null()).join().unwrap();
    assert!(other);
    assert!(!df_last_error_message().is_null());
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { df_scenario_default(&mut s) }, DfStatus::Ok);
    assert!(df_last_error_message().is_null());
    unsafe { df_scenario_free(s) };
}
