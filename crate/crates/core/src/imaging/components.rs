use std::collections::VecDeque;

use super::BinaryMap;

/// An 8-connected blob and its outer boundary.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Component {
    /// Member pixels `(x, y)` in row-major order.
    pub pixels: Vec<(usize, usize)>,
    pub area: usize,
    /// Member pixels touching the image border or the component's outside
    /// background through a 4-neighbour. Pixels that only border interior
    /// holes are excluded.
    pub contour: Vec<(usize, usize)>,
}

impl Component {
    fn first_index(&self, width: usize) -> usize {
        let (x, y) = self.pixels[0];
        y * width + x
    }
}

/// Label 8-connected components, largest first (ties: earliest row-major pixel).
pub fn find_external_components(map: &BinaryMap) -> Vec<Component> {
    let (w, h) = (map.width(), map.height());
    let bits = map.bits();
    let mut seen = vec![false; w * h];
    let mut out = Vec::new();
    let mut queue = VecDeque::new();

    for start in 0..w * h {
        if !bits[start] || seen[start] {
            continue;
        }
        seen[start] = true;
        queue.push_back(start);
        let mut pixels = Vec::new();
        while let Some(i) = queue.pop_front() {
            let (x, y) = (i % w, i / w);
            pixels.push((x, y));
            for ny in y.saturating_sub(1)..=(y + 1).min(h - 1) {
                for nx in x.saturating_sub(1)..=(x + 1).min(w - 1) {
                    let j = ny * w + nx;
                    if bits[j] && !seen[j] {
                        seen[j] = true;
                        queue.push_back(j);
                    }
                }
            }
        }
        pixels.sort_unstable_by_key(|&(x, y)| (y, x));
        let contour = external_contour(&pixels);
        out.push(Component {
            area: pixels.len(),
            pixels,
            contour,
        });
    }

    out.sort_by(|a, b| {
        b.area
            .cmp(&a.area)
            .then_with(|| a.first_index(w).cmp(&b.first_index(w)))
    });
    out
}

/// Flood the non-member cells of the bounding box (plus a one-pixel margin
/// standing in for everything outside it) with 4-connectivity; members
/// adjacent to that flood are the external contour.
fn external_contour(pixels: &[(usize, usize)]) -> Vec<(usize, usize)> {
    let min_x = pixels.iter().map(|p| p.0).min().unwrap_or(0);
    let max_x = pixels.iter().map(|p| p.0).max().unwrap_or(0);
    let min_y = pixels.iter().map(|p| p.1).min().unwrap_or(0);
    let max_y = pixels.iter().map(|p| p.1).max().unwrap_or(0);
    let bw = max_x - min_x + 3;
    let bh = max_y - min_y + 3;
    let local = |x: usize, y: usize| (y - min_y + 1) * bw + (x - min_x + 1);

    let mut member = vec![false; bw * bh];
    for &(x, y) in pixels {
        member[local(x, y)] = true;
    }

    let mut outside = vec![false; bw * bh];
    let mut queue = VecDeque::new();
    outside[0] = true;
    queue.push_back(0usize);
    while let Some(i) = queue.pop_front() {
        let (x, y) = (i % bw, i / bw);
        let mut visit = |j: usize| {
            if !member[j] && !outside[j] {
                outside[j] = true;
                queue.push_back(j);
            }
        };
        if x > 0 {
            visit(i - 1);
        }
        if x + 1 < bw {
            visit(i + 1);
        }
        if y > 0 {
            visit(i - bw);
        }
        if y + 1 < bh {
            visit(i + bw);
        }
    }

    pixels
        .iter()
        .copied()
        .filter(|&(x, y)| {
            let i = local(x, y);
            outside[i - 1] || outside[i + 1] || outside[i - bw] || outside[i + bw]
        })
        .collect()
}
