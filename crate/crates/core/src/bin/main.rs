use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use dronefollow::harness::{
    compare_architectures, compare_csv, load_scenario_file, run_scenario_with, write_outputs, FrameDump, Scenario,
};
use dronefollow::imaging::{apply_mask, gaussian_blur_5x5, pnm, rgb_to_hsv, HsvBounds};
use dronefollow::perception::{hud_metadata, render_hud, track_frame, TrackerConfig, TrackerStates, HUD_CSV_HEADER};
use dronefollow::{Error, Result};

#[derive(Parser)]
#[command(name = "dronefollow", version, about = "Leader-follower drone tracking simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario and write metrics.csv and summary.json.
    Run {
        /// Scenario JSON; the built-in default scenario when omitted.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Overrides the scenario seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Output directory, created if missing.
        #[arg(long)]
        out: PathBuf,
        /// Also write HUD frames (PPM), depth maps (PGM) and hud.csv per follower.
        #[arg(long)]
        dump_frames: bool,
    },
    /// Sweep channel loss and latency under both architectures.
    Compare {
        /// Base scenario JSON; the built-in default when omitted.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Channel loss probabilities to sweep.
        #[arg(long, value_delimiter = ',', default_value = "0,0.25,0.5")]
        loss_grid: Vec<f64>,
        /// One-way latencies in seconds.
        #[arg(long, value_delimiter = ',', default_value = "0,0.1,0.2")]
        latency_grid: Vec<f64>,
        /// Overrides the scenario seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Directory for compare.csv.
        #[arg(long)]
        out: PathBuf,
    },
    /// Run one stage of the tracking pipeline on a PPM frame.
    Imgproc {
        /// Input PPM (P6) frame.
        #[arg(long = "in")]
        input: PathBuf,
        /// Stage to run; `track` prints the tracker output as JSON.
        #[arg(long, value_enum)]
        op: Op,
        /// h,s,v,h,s,v (low then high); the ball's green band by default.
        #[arg(long, value_delimiter = ',')]
        bounds: Option<Vec<u8>>,
        /// Output image: PGM for `mask`, the HUD overlay for `track`, PPM otherwise.
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Op {
    Blur,
    Hsv,
    Mask,
    Track,
}

fn scenario(config: Option<&Path>, seed: Option<u64>) -> Result<Scenario> {
    let mut s = match config {
        Some(p) => load_scenario_file(p)?,
        None => Scenario::default(),
    };
    if let Some(seed) = seed {
        s.seed = seed;
    }
    Ok(s)
}

fn write_file(path: &Path, contents: impl AsRef<[u8]>) -> Result<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
    }
    fs::write(path, contents).map_err(|e| Error::io(path, e))
}

fn run(config: Option<&Path>, seed: Option<u64>, out: &Path, dump_frames: bool) -> Result<()> {
    let s = scenario(config, seed)?;
    let frames_dir = out.join("frames");
    let mut hud_rows: std::collections::BTreeMap<u32, String> = Default::default();
    let mut sink = |d: &FrameDump<'_>| -> Result<()> {
        let dir = frames_dir.join(format!("agent_{}", d.agent));
        fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
        pnm::write(&dir.join(format!("tick_{:06}.ppm", d.tick)), &render_hud(d.frame, d.hud))?;
        pnm::write(&dir.join(format!("tick_{:06}.pgm", d.tick)), d.depth)?;
        let rows = hud_rows.entry(d.agent).or_insert_with(|| format!("{HUD_CSV_HEADER}\n"));
        rows.push_str(&hud_metadata(d.tick, d.hud).csv_line());
        rows.push('\n');
        Ok(())
    };
    let output = if dump_frames {
        fs::create_dir_all(&frames_dir).map_err(|e| Error::io(&frames_dir, e))?;
        run_scenario_with(&s, Some(&mut sink))?
    } else {
        run_scenario_with(&s, None)?
    };
    for (agent, rows) in &hud_rows {
        write_file(&frames_dir.join(format!("agent_{agent}")).join("hud.csv"), rows)?;
    }
    write_outputs(&output.metrics, &output.summary, out)?;
    write_file(&out.join("scenario.json"), s.to_json() + "\n")?;
    println!("{}", dronefollow::harness::summary_json(&output.summary));
    Ok(())
}

fn compare(config: Option<&Path>, losses: &[f64], latencies: &[f64], seed: Option<u64>, out: &Path) -> Result<()> {
    let s = scenario(config, seed)?;
    for &l in losses {
        if !(0.0..=1.0).contains(&l) {
            return Err(Error::ConfigInvalid { field: "loss-grid".into(), constraint: format!("{l} not in [0, 1]") });
        }
    }
    for &l in latencies {
        if !(l >= 0.0) || !l.is_finite() {
            return Err(Error::ConfigInvalid { field: "latency-grid".into(), constraint: format!("{l} must be >= 0") });
        }
    }
    let rows = compare_architectures(&s, losses, latencies)?;
    let csv = compare_csv(&rows);
    write_file(&out.join("compare.csv"), &csv)?;
    print!("{csv}");
    Ok(())
}

fn imgproc(input: &Path, op: Op, bounds: Option<&[u8]>, out: &Path) -> Result<()> {
    let frame = pnm::read(input)?;
    let bounds = match bounds {
        Some(&[h0, s0, v0, h1, s1, v1]) => HsvBounds::new([h0, s0, v0], [h1, s1, v1])?,
        Some(b) => return Err(Error::InvalidBounds(format!("expected 6 values h,s,v,h,s,v, got {}", b.len()))),
        None => HsvBounds::default(),
    };
    match op {
        Op::Blur => pnm::write(out, &gaussian_blur_5x5(&frame)),
        Op::Hsv => pnm::write(out, &rgb_to_hsv(&frame)?),
        Op::Mask => pnm::write(out, &apply_mask(&rgb_to_hsv(&frame)?, &bounds)?.to_image()),
        Op::Track => {
            let cfg = TrackerConfig { bounds, ..TrackerConfig::default() };
            let mut states = TrackerStates::default();
            let t = track_frame(&frame, &cfg, &mut states, 1.0 / 30.0, 0.0)?;
            pnm::write(out, &render_hud(&frame, &t.hud))?;
            println!(
                "{}",
                serde_json::json!({
                    "locked": t.hud.target_locked,
                    "circle": t.hud.circle,
                    "offset": t.hud.offset_vector,
                    "command": t.command,
                })
            );
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Run { config, seed, out, dump_frames } => run(config.as_deref(), *seed, out, *dump_frames),
        Command::Compare { config, loss_grid, latency_grid, seed, out } => {
            compare(config.as_deref(), loss_grid, latency_grid, *seed, out)
        }
        Command::Imgproc { input, op, bounds, out } => imgproc(input, *op, bounds.as_deref(), out),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_config() || matches!(e, Error::InvalidBounds(_)) {
                ExitCode::from(2)
            } else {
                ExitCode::FAILURE
            }
        }
    }
}
