use serde::Serialize;

use super::HudRecord;
use crate::imaging::ImageBuffer;

const HUD_COLOR: [u8; 3] = [255, 0, 0];

pub const HUD_CSV_HEADER: &str = "tick,altitude_m,locked,dx,dy,radius";

/// Companion metadata for one annotated frame.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HudMetaRow {
    pub tick: u64,
    pub altitude_m: f64,
    pub locked: bool,
    pub dx: Option<f64>,
    pub dy: Option<f64>,
    pub radius: Option<f64>,
}

impl HudMetaRow {
    pub fn csv_line(&self) -> String {
        let opt = |v: Option<f64>| v.map(|v| format!("{v:.6}")).unwrap_or_default();
        format!(
            "{},{:.6},{},{},{},{}",
            self.tick,
            self.altitude_m,
            u8::from(self.locked),
            opt(self.dx),
            opt(self.dy),
            opt(self.radius)
        )
    }
}

pub fn hud_metadata(tick: u64, hud: &HudRecord) -> HudMetaRow {
    HudMetaRow {
        tick,
        altitude_m: hud.altitude,
        locked: hud.target_locked,
        dx: hud.offset_vector.map(|v| v.0),
        dy: hud.offset_vector.map(|v| v.1),
        radius: hud.circle.map(|c| c.radius),
    }
}

/// Overlay the enclosing circle and the center-to-target segment.
/// Frames without a lock are returned unchanged.
pub fn render_hud(frame: &ImageBuffer, hud: &HudRecord) -> ImageBuffer {
    let mut out = frame.clone();
    if out.channels() != 3 {
        return out;
    }
    let Some(circle) = hud.circle.filter(|_| hud.target_locked) else {
        return out;
    };
    let (w, h) = (out.width() as i64, out.height() as i64);

    let r = circle.radius;
    let x0 = ((circle.x - r - 1.0).floor() as i64).max(0);
    let x1 = ((circle.x + r + 1.0).ceil() as i64).min(w - 1);
    let y0 = ((circle.y - r - 1.0).floor() as i64).max(0);
    let y1 = ((circle.y + r + 1.0).ceil() as i64).min(h - 1);
    for y in y0..=y1 {
        for x in x0..=x1 {
            let d = (x as f64 - circle.x).hypot(y as f64 - circle.y);
            if (d - r).abs() <= 0.5 {
                out.set_pixel(x as usize, y as usize, &HUD_COLOR);
            }
        }
    }

    if let Some((dx, dy)) = hud.offset_vector {
        let (sx, sy) = (w as f64 / 2.0, h as f64 / 2.0);
        let steps = dx.abs().max(dy.abs()).ceil() as i64;
        if steps >= 1 {
            for i in 0..=steps {
                let t = i as f64 / steps as f64;
                let x = (sx + t * dx).round() as i64;
                let y = (sy + t * dy).round() as i64;
                if (0..w).contains(&x) && (0..h).contains(&y) {
                    out.set_pixel(x as usize, y as usize, &HUD_COLOR);
                }
            }
        }
    }
    out
}
