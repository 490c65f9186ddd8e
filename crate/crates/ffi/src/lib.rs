//! C ABI over the dronefollow simulator.
//!
//! Every entry point returns a [`DfStatus`]. On failure the message for the
//! calling thread is available from [`df_last_error_message`]. Objects are
//! opaque handles owned by the caller and released with the matching
//! `*_free` function. Strings returned through out-parameters are
//! heap-allocated and must be released with [`df_string_free`].
//!
//! Panics never cross the boundary; they are reported as `DF_STATUS_PANIC`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use dronefollow::harness::{self, RunOutput, Scenario};
use dronefollow::imaging::{min_enclosing_circle, ImageBuffer};
use dronefollow::perception::{track_frame, TrackerConfig, TrackerStates};
use dronefollow::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DfStatus {
    Ok = 0,
    /// A required pointer argument was null.
    Null = 1,
    InvalidArgument = 2,
    /// Scenario or tracker configuration failed to parse or validate.
    Config = 3,
    Io = 4,
    Panic = 5,
}

/// Loaded, validated scenario.
pub struct DfScenario {
    inner: Scenario,
}

/// Completed run with its metrics and summary.
pub struct DfRun {
    inner: RunOutput,
}

/// Color tracker with its PID states.
pub struct DfTracker {
    config: TrackerConfig,
    states: TrackerStates,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct DfCircle {
    pub x: f64,
    pub y: f64,
    pub radius: f64,
}

/// Tracker output for one frame. Command fields are in ±100 units.
/// `circle` is meaningful only when `locked` is true.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct DfTrackResult {
    pub forward: f64,
    pub lateral: f64,
    pub vertical: f64,
    pub yaw_rate: f64,
    pub locked: bool,
    pub circle: DfCircle,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure {
    status: DfStatus,
    message: String,
}

impl Failure {
    fn null(what: &str) -> Self {
        Failure { status: DfStatus::Null, message: format!("{what} is null") }
    }

    fn invalid(message: impl Into<String>) -> Self {
        Failure { status: DfStatus::InvalidArgument, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = if e.is_config() {
            DfStatus::Config
        } else if matches!(e, Error::Io { .. }) {
            DfStatus::Io
        } else {
            DfStatus::InvalidArgument
        };
        Failure { status, message: e.to_string() }
    }
}

fn set_last_error(message: &str) {
    let c = CString::new(message.replace('\0', "\\0")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> DfStatus {
    LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => DfStatus::Ok,
        Ok(Err(fail)) => {
            set_last_error(&fail.message);
            fail.status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_last_error(&format!("panic: {msg}"));
            DfStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure::null(what));
    }
    // SAFETY: caller passes a NUL-terminated string that outlives the call.
    unsafe { CStr::from_ptr(p) }
        .to_str()
        .map_err(|_| Failure::invalid(format!("{what} is not valid UTF-8")))
}

unsafe fn out_arg<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Failure> {
    // SAFETY: non-null out-pointers must be valid for writes.
    unsafe { p.as_mut() }.ok_or_else(|| Failure::null(what))
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    // SAFETY: non-null handles come from the matching constructor.
    unsafe { p.as_ref() }.ok_or_else(|| Failure::null(what))
}

fn to_c_string(s: String) -> Result<*mut c_char, Failure> {
    CString::new(s)
        .map(CString::into_raw)
        .map_err(|_| Failure::invalid("output contains an interior NUL"))
}

/// Message for the most recent failure on this thread, or null.
///
/// The pointer stays valid until the next call into this library on the
/// same thread. Do not free it.
#[no_mangle]
pub extern "C" fn df_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Release a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must be null or a pointer obtained from this library, freed once.
#[no_mangle]
pub unsafe extern "C" fn df_string_free(s: *mut c_char) {
    if !s.is_null() {
        // SAFETY: produced by CString::into_raw in to_c_string.
        drop(unsafe { CString::from_raw(s) });
    }
}

/// Default scenario.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn df_scenario_default(out: *mut *mut DfScenario) -> DfStatus {
    guard(|| {
        let out = unsafe { out_arg(out, "out") }?;
        *out = Box::into_raw(Box::new(DfScenario { inner: Scenario::default() }));
        Ok(())
    })
}

/// Parse and validate a scenario from JSON text.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn df_scenario_from_json(json: *const c_char, out: *mut *mut DfScenario) -> DfStatus {
    guard(|| {
        let text = unsafe { str_arg(json, "json") }?;
        let out = unsafe { out_arg(out, "out") }?;
        let inner = harness::load_scenario(text)?;
        *out = Box::into_raw(Box::new(DfScenario { inner }));
        Ok(())
    })
}

/// Load and validate a scenario from a JSON file.
///
/// # Safety
/// `path` must be a NUL-terminated string; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn df_scenario_from_file(path: *const c_char, out: *mut *mut DfScenario) -> DfStatus {
    guard(|| {
        let path = unsafe { str_arg(path, "path") }?;
        let out = unsafe { out_arg(out, "out") }?;
        let inner = harness::load_scenario_file(Path::new(path))?;
        *out = Box::into_raw(Box::new(DfScenario { inner }));
        Ok(())
    })
}

/// Replace the scenario seed.
///
/// # Safety
/// `scenario` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn df_scenario_set_seed(scenario: *mut DfScenario, seed: u64) -> DfStatus {
    guard(|| {
        let s = unsafe { out_arg(scenario, "scenario") }?;
        s.inner.seed = seed;
        Ok(())
    })
}

/// Fully resolved scenario as JSON. Free with [`df_string_free`].
///
/// # Safety
/// `scenario` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn df_scenario_to_json(scenario: *const DfScenario, out: *mut *mut c_char) -> DfStatus {
    guard(|| {
        let s = unsafe { handle(scenario, "scenario") }?;
        let out = unsafe { out_arg(out, "out") }?;
        *out = to_c_string(s.inner.to_json())?;
        Ok(())
    })
}

/// # Safety
/// `scenario` must be null or a live handle, freed once.
#[no_mangle]
pub unsafe extern "C" fn df_scenario_free(scenario: *mut DfScenario) {
    if !scenario.is_null() {
        // SAFETY: produced by Box::into_raw in a scenario constructor.
        drop(unsafe { Box::from_raw(scenario) });
    }
}

/// Run a scenario to completion.
///
/// # Safety
/// `scenario` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn df_run(scenario: *const DfScenario, out: *mut *mut DfRun) -> DfStatus {
    guard(|| {
        let s = unsafe { handle(scenario, "scenario") }?;
        let out = unsafe { out_arg(out, "out") }?;
        let inner = harness::run_scenario(&s.inner)?;
        *out = Box::into_raw(Box::new(DfRun { inner }));
        Ok(())
    })
}

/// Run summary as JSON. Free with [`df_string_free`].
///
/// # Safety
/// `run` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn df_run_summary_json(run: *const DfRun, out: *mut *mut c_char) -> DfStatus {
    guard(|| {
        let r = unsafe { handle(run, "run") }?;
        let out = unsafe { out_arg(out, "out") }?;
        *out = to_c_string(harness::summary_json(&r.inner.summary))?;
        Ok(())
    })
}

/// Per-tick metrics as CSV with header. Free with [`df_string_free`].
///
/// # Safety
/// `run` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn df_run_metrics_csv(run: *const DfRun, out: *mut *mut c_char) -> DfStatus {
    guard(|| {
        let r = unsafe { handle(run, "run") }?;
        let out = unsafe { out_arg(out, "out") }?;
        *out = to_c_string(harness::metrics_csv(&r.inner.metrics))?;
        Ok(())
    })
}

/// Write `metrics.csv` and `summary.json` under `dir`, creating it if needed.
///
/// # Safety
/// `run` must be a live handle; `dir` must be a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn df_run_write_outputs(run: *const DfRun, dir: *const c_char) -> DfStatus {
    guard(|| {
        let r = unsafe { handle(run, "run") }?;
        let dir = unsafe { str_arg(dir, "dir") }?;
        harness::write_outputs(&r.inner.metrics, &r.inner.summary, Path::new(dir))?;
        Ok(())
    })
}

/// # Safety
/// `run` must be null or a live handle, freed once.
#[no_mangle]
pub unsafe extern "C" fn df_run_free(run: *mut DfRun) {
    if !run.is_null() {
        // SAFETY: produced by Box::into_raw in df_run.
        drop(unsafe { Box::from_raw(run) });
    }
}

/// New tracker. `config_json` may be null for the default configuration;
/// otherwise missing keys take their defaults.
///
/// # Safety
/// `config_json` must be null or NUL-terminated; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn df_tracker_new(config_json: *const c_char, out: *mut *mut DfTracker) -> DfStatus {
    guard(|| {
        let out = unsafe { out_arg(out, "out") }?;
        let config = if config_json.is_null() {
            TrackerConfig::default()
        } else {
            let text = unsafe { str_arg(config_json, "config_json") }?;
            if !text.trim_start().starts_with('{') {
                return Err(Error::ConfigParse("tracker config must be a JSON object".into()).into());
            }
            let cfg: TrackerConfig = serde_json::from_str(text).map_err(|e| Error::ConfigParse(e.to_string()))?;
            cfg.validate()?;
            cfg
        };
        *out = Box::into_raw(Box::new(DfTracker { config, states: TrackerStates::default() }));
        Ok(())
    })
}

/// Track one packed RGB frame (`width * height * 3` bytes, row-major).
///
/// # Safety
/// `tracker` must be a live handle; `rgb` must point to `width * height * 3`
/// readable bytes; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn df_tracker_track(
    tracker: *mut DfTracker,
    rgb: *const u8,
    width: usize,
    height: usize,
    dt: f64,
    altitude: f64,
    out: *mut DfTrackResult,
) -> DfStatus {
    guard(|| {
        let t = unsafe { out_arg(tracker, "tracker") }?;
        let out = unsafe { out_arg(out, "out") }?;
        if rgb.is_null() {
            return Err(Failure::null("rgb"));
        }
        let len = width
            .checked_mul(height)
            .and_then(|n| n.checked_mul(3))
            .ok_or_else(|| Failure::invalid("frame size overflows"))?;
        // SAFETY: caller guarantees len readable bytes.
        let data = unsafe { std::slice::from_raw_parts(rgb, len) }.to_vec();
        let frame = ImageBuffer::new(width, height, 3, data)?;
        let res = track_frame(&frame, &t.config, &mut t.states, dt, altitude)?;
        let c = res.command;
        *out = DfTrackResult {
            forward: c.forward,
            lateral: c.lateral,
            vertical: c.vertical,
            yaw_rate: c.yaw_rate,
            locked: res.hud.target_locked,
            circle: res
                .hud
                .circle
                .map(|c| DfCircle { x: c.x, y: c.y, radius: c.radius })
                .unwrap_or_default(),
        };
        Ok(())
    })
}

/// Reset the tracker's PID states.
///
/// # Safety
/// `tracker` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn df_tracker_reset(tracker: *mut DfTracker) -> DfStatus {
    guard(|| {
        let t = unsafe { out_arg(tracker, "tracker") }?;
        t.states = TrackerStates::default();
        Ok(())
    })
}

/// # Safety
/// `tracker` must be null or a live handle, freed once.
#[no_mangle]
pub unsafe extern "C" fn df_tracker_free(tracker: *mut DfTracker) {
    if !tracker.is_null() {
        // SAFETY: produced by Box::into_raw in df_tracker_new.
        drop(unsafe { Box::from_raw(tracker) });
    }
}

/// Smallest circle enclosing `n` points given as interleaved `x, y` pairs.
///
/// # Safety
/// `xy` must point to `2 * n` readable doubles; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn df_min_enclosing_circle(xy: *const f64, n: usize, out: *mut DfCircle) -> DfStatus {
    guard(|| {
        let out = unsafe { out_arg(out, "out") }?;
        if xy.is_null() {
            return Err(Failure::null("xy"));
        }
        let len = n.checked_mul(2).ok_or_else(|| Failure::invalid("point count overflows"))?;
        // SAFETY: caller guarantees 2 * n readable doubles.
        let flat = unsafe { std::slice::from_raw_parts(xy, len) };
        let pts: Vec<(f64, f64)> = flat.chunks_exact(2).map(|p| (p[0], p[1])).collect();
        let c = min_enclosing_circle(&pts)?;
        *out = DfCircle { x: c.x, y: c.y, radius: c.radius };
        Ok(())
    })
}
