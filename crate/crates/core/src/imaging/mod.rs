//! Raster primitives of the color-tracking pipeline.
//!
//! The pipeline runs blur → HSV → mask → erode → dilate → external
//! components → minimum enclosing circle → pixel offsets. Every stage is a
//! pure function over owned buffers.

mod blur;
mod color;
mod components;
mod enclosing;
mod morphology;
pub mod pnm;

pub use blur::gaussian_blur_5x5;
pub use color::{apply_mask, hsv_pixel, rgb_to_hsv, Hsv, HsvBounds};
pub use components::{find_external_components, Component};
pub use enclosing::min_enclosing_circle;
pub use morphology::{morphology, MorphOp};

use serde::{Deserialize, Serialize};

use crate::geometry::CameraIntrinsics;
use crate::{Error, Result};

/// Row-major 8-bit raster with 1 (gray) or 3 (RGB or HSV) interleaved channels.
#[derive(Clone, PartialEq, Eq)]
pub struct ImageBuffer {
    width: usize,
    height: usize,
    channels: usize,
    data: Vec<u8>,
}

impl std::fmt::Debug for ImageBuffer {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ImageBuffer")
            .field("width", &self.width)
            .field("height", &self.height)
            .field("channels", &self.channels)
            .finish_non_exhaustive()
    }
}

impl ImageBuffer {
    pub fn new(width: usize, height: usize, channels: usize, data: Vec<u8>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidImage(format!("zero dimension {width}x{height}")));
        }
        if channels != 1 && channels != 3 {
            return Err(Error::InvalidImage(format!("unsupported channel count {channels}")));
        }
        let expected = width
            .checked_mul(height)
            .and_then(|n| n.checked_mul(channels))
            .ok_or_else(|| Error::InvalidImage("dimensions overflow".into()))?;
        if data.len() != expected {
            return Err(Error::InvalidImage(format!(
                "data length {} does not match {width}x{height}x{channels}",
                data.len()
            )));
        }
        Ok(Self {
            width,
            height,
            channels,
            data,
        })
    }

    /// Image with every pixel set to `value` (length must equal `channels`).
    pub fn filled(width: usize, height: usize, value: &[u8]) -> Result<Self> {
        Self::new(width, height, value.len(), value.repeat(width * height))
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    pub fn data(&self) -> &[u8] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [u8] {
        &mut self.data
    }

    pub fn into_data(self) -> Vec<u8> {
        self.data
    }

    pub fn pixel(&self, x: usize, y: usize) -> &[u8] {
        let i = (y * self.width + x) * self.channels;
        &self.data[i..i + self.channels]
    }

    pub fn set_pixel(&mut self, x: usize, y: usize, value: &[u8]) {
        let i = (y * self.width + x) * self.channels;
        self.data[i..i + self.channels].copy_from_slice(value);
    }

    pub(crate) fn require_channels(&self, channels: usize, what: &str) -> Result<()> {
        if self.channels == channels {
            Ok(())
        } else {
            Err(Error::InvalidImage(format!(
                "{what} needs {channels}-channel input, got {}",
                self.channels
            )))
        }
    }
}

/// Per-pixel occupancy produced by masking.
#[derive(Clone, PartialEq, Eq)]
pub struct BinaryMap {
    width: usize,
    height: usize,
    bits: Vec<bool>,
}

impl std::fmt::Debug for BinaryMap {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("BinaryMap")
            .field("width", &self.width)
            .field("height", &self.height)
            .field("occupied", &self.count())
            .finish()
    }
}

impl BinaryMap {
    pub fn empty(width: usize, height: usize) -> Self {
        Self {
            width,
            height,
            bits: vec![false; width * height],
        }
    }

    pub fn from_bits(width: usize, height: usize, bits: Vec<bool>) -> Result<Self> {
        if width == 0 || height == 0 || bits.len() != width * height {
            return Err(Error::InvalidImage(format!(
                "binary map {width}x{height} with {} bits",
                bits.len()
            )));
        }
        Ok(Self { width, height, bits })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn get(&self, x: usize, y: usize) -> bool {
        self.bits[y * self.width + x]
    }

    pub fn set(&mut self, x: usize, y: usize, v: bool) {
        self.bits[y * self.width + x] = v;
    }

    pub fn count(&self) -> usize {
        self.bits.iter().filter(|b| **b).count()
    }

    /// True when every occupied pixel of `self` is occupied in `other`.
    pub fn is_subset_of(&self, other: &BinaryMap) -> bool {
        self.bits.iter().zip(&other.bits).all(|(a, b)| !*a || *b)
    }

    /// 0/255 grayscale rendering, for dumps and debugging.
    pub fn to_image(&self) -> ImageBuffer {
        let data = self.bits.iter().map(|b| if *b { 255 } else { 0 }).collect();
        ImageBuffer::new(self.width, self.height, 1, data).expect("map dimensions are valid")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Circle {
    pub x: f64,
    pub y: f64,
    pub radius: f64,
}

impl Circle {
    pub fn contains(&self, x: f64, y: f64, tol: f64) -> bool {
        (x - self.x).hypot(y - self.y) <= self.radius + tol
    }
}

/// Pixel offsets of a detected circle from the image center.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Offsets {
    /// Positive when the object is right of center.
    pub dx: f64,
    /// Positive when the object is below center.
    pub dy: f64,
    /// Positive when the object looks smaller than the set-point (too far).
    pub dr: f64,
}

pub fn compute_offsets(c: &Circle, k: &CameraIntrinsics, radius_setpoint: f64) -> Offsets {
    offsets_in_frame(c, k.width as usize, k.height as usize, radius_setpoint)
}

/// [`compute_offsets`] for a frame of the given size.
pub fn offsets_in_frame(c: &Circle, width: usize, height: usize, radius_setpoint: f64) -> Offsets {
    Offsets {
        dx: c.x - width as f64 / 2.0,
        dy: c.y - height as f64 / 2.0,
        dr: radius_setpoint - c.radius,
    }
}
