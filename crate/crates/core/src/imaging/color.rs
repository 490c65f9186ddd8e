use serde::{Deserialize, Serialize};

use super::{BinaryMap, ImageBuffer};
use crate::rounding::round_half_away;
use crate::{Error, Result};

/// HSV triple on the 8-bit scale: hue in half-degrees `[0, 180)`, S and V in `[0, 255]`.
pub type Hsv = [u8; 3];

/// Convert one RGB sample to HSV.
pub fn hsv_pixel(r: u8, g: u8, b: u8) -> Hsv {
    let max = r.max(g).max(b);
    let min = r.min(g).min(b);
    let v = max;
    if max == min {
        return [0, 0, v];
    }
    let (rf, gf, bf) = (f64::from(r), f64::from(g), f64::from(b));
    let d = f64::from(max - min);
    let s = round_half_away(255.0 * d / f64::from(max)) as u8;
    let deg = if max == r {
        let h = 60.0 * (gf - bf) / d;
        if h < 0.0 {
            h + 360.0
        } else {
            h
        }
    } else if max == g {
        60.0 * (bf - rf) / d + 120.0
    } else {
        60.0 * (rf - gf) / d + 240.0
    };
    let h = (round_half_away(deg / 2.0) as u32 % 180) as u8;
    [h, s, v]
}

pub fn rgb_to_hsv(img: &ImageBuffer) -> Result<ImageBuffer> {
    img.require_channels(3, "rgb_to_hsv")?;
    let mut out = Vec::with_capacity(img.data().len());
    // frames are dominated by flat background; skip recomputing repeats
    let mut last_rgb: Option<[u8; 3]> = None;
    let mut last_hsv = [0u8; 3];
    for px in img.data().chunks_exact(3) {
        let rgb = [px[0], px[1], px[2]];
        if last_rgb != Some(rgb) {
            last_hsv = hsv_pixel(rgb[0], rgb[1], rgb[2]);
            last_rgb = Some(rgb);
        }
        out.extend_from_slice(&last_hsv);
    }
    ImageBuffer::new(img.width(), img.height(), 3, out)
}

/// Inclusive HSV box. Hue ranges do not wrap around.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawBounds", into = "RawBounds")]
pub struct HsvBounds {
    lo: Hsv,
    hi: Hsv,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBounds {
    lo: Hsv,
    hi: Hsv,
}

impl TryFrom<RawBounds> for HsvBounds {
    type Error = Error;

    fn try_from(raw: RawBounds) -> Result<Self> {
        HsvBounds::new(raw.lo, raw.hi)
    }
}

impl From<HsvBounds> for RawBounds {
    fn from(b: HsvBounds) -> Self {
        RawBounds { lo: b.lo, hi: b.hi }
    }
}

impl Default for HsvBounds {
    /// The green band used for the tracked ball.
    fn default() -> Self {
        Self {
            lo: [40, 75, 20],
            hi: [80, 255, 255],
        }
    }
}

impl HsvBounds {
    pub fn new(lo: Hsv, hi: Hsv) -> Result<Self> {
        if lo[0] >= 180 || hi[0] >= 180 {
            return Err(Error::InvalidBounds(format!(
                "hue must be below 180, got {}..{}",
                lo[0], hi[0]
            )));
        }
        for (i, name) in ["h", "s", "v"].iter().enumerate() {
            if lo[i] > hi[i] {
                return Err(Error::InvalidBounds(format!(
                    "lo.{name} = {} exceeds hi.{name} = {} (wraparound unsupported)",
                    lo[i], hi[i]
                )));
            }
        }
        Ok(Self { lo, hi })
    }

    pub fn lo(&self) -> Hsv {
        self.lo
    }

    pub fn hi(&self) -> Hsv {
        self.hi
    }

    pub fn contains(&self, p: &[u8]) -> bool {
        (0..3).all(|i| p[i] >= self.lo[i] && p[i] <= self.hi[i])
    }
}

pub fn apply_mask(hsv: &ImageBuffer, bounds: &HsvBounds) -> Result<BinaryMap> {
    hsv.require_channels(3, "apply_mask")?;
    let bits = hsv.data().chunks_exact(3).map(|p| bounds.contains(p)).collect();
    BinaryMap::from_bits(hsv.width(), hsv.height(), bits)
}
