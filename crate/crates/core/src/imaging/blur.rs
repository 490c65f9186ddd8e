use super::ImageBuffer;

/// `a + 4b + 6c + 4d + e`. Callers keep the result at or below 255·256 + 128.
#[inline(always)]
fn taps(a: u16, b: u16, c: u16, d: u16, e: u16) -> u16 {
    a.wrapping_add(b.wrapping_add(d).wrapping_mul(4))
        .wrapping_add(c.wrapping_mul(6))
        .wrapping_add(e)
}

/// 5x5 binomial blur, `(1,4,6,4,1)⊗(1,4,6,4,1)/256`, per channel.
///
/// Borders replicate the edge sample. The 2-D sum is accumulated exactly in
/// integers and rounded once at the end.
pub fn gaussian_blur_5x5(img: &ImageBuffer) -> ImageBuffer {
    let (w, h, ch) = (img.width(), img.height(), img.channels());
    let src = img.data();
    let stride = w * ch;

    // horizontal pass into u16 (max 16·255)
    let mut tmp = vec![0u16; stride * h];
    let mut padded = vec![0u16; (w + 4) * ch];
    for y in 0..h {
        let row = &src[y * stride..(y + 1) * stride];
        for c in 0..ch {
            let (first, last) = (u16::from(row[c]), u16::from(row[(w - 1) * ch + c]));
            for k in 0..2 {
                padded[k * ch + c] = first;
                padded[(w + 2 + k) * ch + c] = last;
            }
        }
        for (p, &v) in padded[2 * ch..(w + 2) * ch].iter_mut().zip(row) {
            *p = u16::from(v);
        }
        let out = &mut tmp[y * stride..(y + 1) * stride];
        let n = out.len();
        let (p0, p1, p2, p3, p4) = (
            &padded[..n],
            &padded[ch..ch + n],
            &padded[2 * ch..2 * ch + n],
            &padded[3 * ch..3 * ch + n],
            &padded[4 * ch..4 * ch + n],
        );
        for i in 0..n {
            out[i] = taps(p0[i], p1[i], p2[i], p3[i], p4[i]);
        }
    }

    // vertical pass; the full sum is at most 255·256, which still fits a u16
    let mut dst = vec![0u8; stride * h];
    for y in 0..h {
        let [r0, r1, r2, r3, r4]: [&[u16]; 5] = std::array::from_fn(|k| {
            let sy = (y + k).saturating_sub(2).min(h - 1);
            &tmp[sy * stride..(sy + 1) * stride]
        });
        let out = &mut dst[y * stride..(y + 1) * stride];
        let n = out.len();
        let (r0, r1, r2, r3, r4) = (&r0[..n], &r1[..n], &r2[..n], &r3[..n], &r4[..n]);
        for i in 0..n {
            // non-negative, so +128 >> 8 is round-half-away
            out[i] = (taps(r0[i], r1[i], r2[i], r3[i], r4[i]).wrapping_add(128) >> 8) as u8;
        }
    }
    ImageBuffer::new(w, h, ch, dst).expect("same dimensions as input")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Dense 5x5 convolution in floating point, independent of the separable path.
    fn dense_oracle(img: &ImageBuffer) -> Vec<f64> {
        let k1 = [1.0, 4.0, 6.0, 4.0, 1.0];
        let (w, h, ch) = (img.width() as isize, img.height() as isize, img.channels());
        let mut out = Vec::new();
        for y in 0..h {
            for x in 0..w {
                for c in 0..ch {
                    let mut s = 0.0;
                    for dy in -2..=2isize {
                        for dx in -2..=2isize {
                            let sx = (x + dx).clamp(0, w - 1) as usize;
                            let sy = (y + dy).clamp(0, h - 1) as usize;
                            let wgt = k1[(dx + 2) as usize] * k1[(dy + 2) as usize] / 256.0;
                            s += wgt * f64::from(img.pixel(sx, sy)[c]);
                        }
                    }
                    out.push(s);
                }
            }
        }
        out
    }

    #[test]
    fn constant_image_is_unchanged() {
        for v in [0u8, 1, 77, 128, 254, 255] {
            let img = ImageBuffer::filled(9, 7, &[v, 255 - v, v / 2]).unwrap();
            assert_eq!(gaussian_blur_5x5(&img), img);
        }
    }

    #[test]
    fn impulse_center_value() {
        let mut img = ImageBuffer::filled(21, 21, &[0]).unwrap();
        img.set_pixel(10, 10, &[255]);
        let out = gaussian_blur_5x5(&img);
        // 255·36/256 = 35.86
        assert_eq!(out.pixel(10, 10)[0], 36);
        // 255·24/256 = 23.9
        assert_eq!(out.pixel(11, 10)[0], 24);
        assert_eq!(out.pixel(13, 10)[0], 0);
    }

    #[test]
    fn matches_dense_oracle_and_preserves_interior_mass() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..10 {
            let w = rng.random_range(1..30);
            let h = rng.random_range(1..30);
            let ch = if rng.random_bool(0.5) { 1 } else { 3 };
            let data: Vec<u8> = (0..w * h * ch).map(|_| rng.random()).collect();
            let img = ImageBuffer::new(w, h, ch, data).unwrap();
            let out = gaussian_blur_5x5(&img);
            for (a, b) in out.data().iter().zip(dense_oracle(&img)) {
                assert!((f64::from(*a) - b).abs() <= 0.5 + 1e-9);
            }
        }
        // zero border of width 2: all mass stays inside
        let (w, h) = (24, 20);
        let mut img = ImageBuffer::filled(w, h, &[0]).unwrap();
        for y in 4..h - 4 {
            for x in 4..w - 4 {
                img.set_pixel(x, y, &[rng.random()]);
            }
        }
        let out = gaussian_blur_5x5(&img);
        let sum_in: i64 = img.data().iter().map(|v| i64::from(*v)).sum();
        let sum_out: i64 = out.data().iter().map(|v| i64::from(*v)).sum();
        assert!((sum_in - sum_out).abs() as f64 <= 0.5 * (w * h) as f64);
    }
}
