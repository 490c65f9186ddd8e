//! The single rounding rule used for every real-to-integer conversion.

/// Round half away from zero.
#[inline]
pub fn round_half_away(x: f64) -> f64 {
    // f64::round already rounds ties away from zero.
    x.round()
}

/// Round half away from zero and clamp into the 8-bit sample range.
#[inline]
pub fn to_u8(x: f64) -> u8 {
    round_half_away(x).clamp(0.0, 255.0) as u8
}
