//! Independent oracles shared by the integration and acceptance tests.
#![allow(dead_code)]

use dronefollow::imaging::{Circle, ImageBuffer};

fn covers(c: (f64, f64, f64), pts: &[(f64, f64)]) -> bool {
    pts.iter().all(|p| (p.0 - c.0).hypot(p.1 - c.1) <= c.2 * (1.0 + 1e-12) + 1e-12)
}

/// Smallest circle through every pair (as diameter) and every triple
/// (circumcircle) that covers all points. O(n⁴), fine for n ≤ 12.
pub fn brute_force_circle(pts: &[(f64, f64)]) -> Circle {
    assert!(!pts.is_empty());
    let mut best: Option<(f64, f64, f64)> = None;
    let mut consider = |c: (f64, f64, f64)| {
        if covers(c, pts) && best.is_none_or(|b| c.2 < b.2) {
            best = Some(c);
        }
    };
    if pts.len() == 1 {
        consider((pts[0].0, pts[0].1, 0.0));
    }
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            let (a, b) = (pts[i], pts[j]);
            consider(((a.0 + b.0) / 2.0, (a.1 + b.1) / 2.0, (a.0 - b.0).hypot(a.1 - b.1) / 2.0));
            for &c in &pts[j + 1..] {
                let d = 2.0 * (a.0 * (b.1 - c.1) + b.0 * (c.1 - a.1) + c.0 * (a.1 - b.1));
                if d.abs() < 1e-12 {
                    continue;
                }
                let sa = a.0 * a.0 + a.1 * a.1;
                let sb = b.0 * b.0 + b.1 * b.1;
                let sc = c.0 * c.0 + c.1 * c.1;
                let ux = (sa * (b.1 - c.1) + sb * (c.1 - a.1) + sc * (a.1 - b.1)) / d;
                let uy = (sa * (c.0 - b.0) + sb * (a.0 - c.0) + sc * (b.0 - a.0)) / d;
                consider((ux, uy, (a.0 - ux).hypot(a.1 - uy)));
            }
        }
    }
    // all points identical
    let (x, y, radius) = best.unwrap_or((pts[0].0, pts[0].1, 0.0));
    Circle { x, y, radius }
}

/// HSV on the half-degree hue scale from exact integer arithmetic, rounding
/// half away from zero.
pub fn reference_hsv(r: u8, g: u8, b: u8) -> [u8; 3] {
    let (r, g, b) = (i64::from(r), i64::from(g), i64::from(b));
    let max = r.max(g).max(b);
    let min = r.min(g).min(b);
    if max == min {
        return [0, 0, max as u8];
    }
    let d = max - min;
    let round_div = |p: i64, q: i64| -> i64 {
        // q > 0
        if p >= 0 {
            (2 * p + q) / (2 * q)
        } else {
            -((-2 * p + q) / (2 * q))
        }
    };
    let s = round_div(255 * d, max);
    // hue in half-degrees = 30·(sector numerator)/d + offset
    let (num, offset) = if max == r {
        (g - b, 0)
    } else if max == g {
        (b - r, 60)
    } else {
        (r - g, 120)
    };
    let mut h2 = round_div(30 * num + offset * d, d);
    if h2 < 0 {
        // red sector with g < b: add 180 half-degrees before rounding
        h2 = round_div(30 * num + 180 * d, d);
    }
    [(h2 % 180) as u8, s as u8, max as u8]
}

/// Direct 5x5 binomial convolution in floating point with replicated edges.
pub fn dense_blur(img: &ImageBuffer) -> Vec<f64> {
    let k = [1.0, 4.0, 6.0, 4.0, 1.0];
    let (w, h, ch) = (img.width() as i64, img.height() as i64, img.channels() as i64);
    let mut out = Vec::with_capacity((w * h * ch) as usize);
    for y in 0..h {
        for x in 0..w {
            for c in 0..ch {
                let mut s = 0.0;
                for (j, kj) in k.iter().enumerate() {
                    for (i, ki) in k.iter().enumerate() {
                        let sx = (x + i as i64 - 2).clamp(0, w - 1);
                        let sy = (y + j as i64 - 2).clamp(0, h - 1);
                        s += kj * ki * f64::from(img.data()[((sy * w + sx) * ch + c) as usize]);
                    }
                }
                out.push(s / 256.0);
            }
        }
    }
    out
}
