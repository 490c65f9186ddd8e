use serde::{Deserialize, Serialize};

use super::BinaryMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MorphOp {
    Erode,
    Dilate,
}

/// 3x3 square erosion or dilation applied `iterations` times.
/// Out-of-bounds pixels count as unoccupied for both operations.
pub fn morphology(map: &BinaryMap, op: MorphOp, iterations: usize) -> BinaryMap {
    let (w, h) = (map.width(), map.height());
    let mut cur: Vec<bool> = map.bits().to_vec();
    let mut tmp = vec![false; w * h];
    let combine = |a: bool, b: bool, c: bool| match op {
        MorphOp::Erode => a & b & c,
        MorphOp::Dilate => a | b | c,
    };
    for _ in 0..iterations {
        // the square element is separable: a 1x3 pass then a 3x1 pass
        for y in 0..h {
            let row = &cur[y * w..(y + 1) * w];
            let out = &mut tmp[y * w..(y + 1) * w];
            if w == 1 {
                out[0] = combine(false, row[0], false);
                continue;
            }
            out[0] = combine(false, row[0], row[1]);
            out[w - 1] = combine(row[w - 2], row[w - 1], false);
            let (l, m, r) = (&row[..w - 2], &row[1..w - 1], &row[2..]);
            for (i, o) in out[1..w - 1].iter_mut().enumerate() {
                *o = combine(l[i], m[i], r[i]);
            }
        }
        for y in 0..h {
            let mid = &tmp[y * w..(y + 1) * w];
            let up = if y > 0 { Some(&tmp[(y - 1) * w..y * w]) } else { None };
            let down = if y + 1 < h { Some(&tmp[(y + 1) * w..(y + 2) * w]) } else { None };
            let out = &mut cur[y * w..(y + 1) * w];
            match (up, down) {
                (Some(u), Some(d)) => {
                    for i in 0..w {
                        out[i] = combine(u[i], mid[i], d[i]);
                    }
                }
                _ => {
                    for i in 0..w {
                        let u = up.is_some_and(|u| u[i]);
                        let d = down.is_some_and(|d| d[i]);
                        out[i] = combine(u, mid[i], d);
                    }
                }
            }
        }
    }
    BinaryMap::from_bits(w, h, cur).expect("dimensions unchanged")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn block(w: usize, h: usize, x0: usize, y0: usize, bw: usize, bh: usize) -> BinaryMap {
        let mut m = BinaryMap::empty(w, h);
        for y in y0..y0 + bh {
            for x in x0..x0 + bw {
                m.set(x, y, true);
            }
        }
        m
    }

    /// Direct 9-neighbour definition.
    fn naive(map: &BinaryMap, op: MorphOp) -> BinaryMap {
        let (w, h) = (map.width() as isize, map.height() as isize);
        let mut out = BinaryMap::empty(map.width(), map.height());
        for y in 0..h {
            for x in 0..w {
                let mut all = true;
                let mut any = false;
                for dy in -1..=1 {
                    for dx in -1..=1 {
                        let (nx, ny) = (x + dx, y + dy);
                        let v = nx >= 0 && ny >= 0 && nx < w && ny < h && map.get(nx as usize, ny as usize);
                        all &= v;
                        any |= v;
                    }
                }
                let v = match op {
                    MorphOp::Erode => all,
                    MorphOp::Dilate => any,
                };
                out.set(x as usize, y as usize, v);
            }
        }
        out
    }

    #[test]
    fn single_pixel() {
        let m = block(7, 7, 3, 3, 1, 1);
        assert_eq!(morphology(&m, MorphOp::Erode, 1).count(), 0);
        assert_eq!(morphology(&m, MorphOp::Dilate, 1), block(7, 7, 2, 2, 3, 3));
    }

    #[test]
    fn opening_restores_5x5_block() {
        let m = block(11, 11, 3, 3, 5, 5);
        let opened = morphology(&morphology(&m, MorphOp::Erode, 1), MorphOp::Dilate, 1);
        assert_eq!(opened, m);
    }

    #[test]
    fn border_counts_as_unoccupied() {
        let full = block(4, 4, 0, 0, 4, 4);
        assert_eq!(morphology(&full, MorphOp::Erode, 1), block(4, 4, 1, 1, 2, 2));
    }

    fn arb_map() -> impl Strategy<Value = BinaryMap> {
        (1usize..12, 1usize..12).prop_flat_map(|(w, h)| {
            proptest::collection::vec(any::<bool>(), w * h)
                .prop_map(move |bits| BinaryMap::from_bits(w, h, bits).unwrap())
        })
    }

    proptest! {
        #[test]
        fn separable_matches_naive(m in arb_map()) {
            prop_assert_eq!(morphology(&m, MorphOp::Erode, 1), naive(&m, MorphOp::Erode));
            prop_assert_eq!(morphology(&m, MorphOp::Dilate, 1), naive(&m, MorphOp::Dilate));
        }

        #[test]
        fn erode_shrinks_dilate_grows(m in arb_map(), it in 1usize..3) {
            let e = morphology(&m, MorphOp::Erode, it);
            let d = morphology(&m, MorphOp::Dilate, it);
            prop_assert!(e.is_subset_of(&m));
            prop_assert!(m.is_subset_of(&d));
            let opened = morphology(&e, MorphOp::Dilate, it);
            prop_assert!(opened.is_subset_of(&m));
            prop_assert!(opened.is_subset_of(&d));
        }
    }
}
