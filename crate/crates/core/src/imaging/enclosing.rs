use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::Circle;
use crate::{Error, Result};

// Fixed shuffle seed: Welzl needs a random order for its expected linear
// bound, the result itself is order independent.
const SHUFFLE_SEED: u64 = 0x5eed_c1c1e;

/// Smallest circle containing every point (Welzl, iterative form).
pub fn min_enclosing_circle(points: &[(f64, f64)]) -> Result<Circle> {
    if points.is_empty() {
        return Err(Error::EmptyInput("min_enclosing_circle needs at least one point"));
    }
    let mut pts = points.to_vec();
    pts.shuffle(&mut ChaCha8Rng::seed_from_u64(SHUFFLE_SEED));

    let tol = |c: &Circle| 1e-12 * c.radius.max(1.0);
    let inside = |c: &Circle, p: (f64, f64)| c.contains(p.0, p.1, tol(c));

    let mut c = point_circle(pts[0]);
    for i in 1..pts.len() {
        if inside(&c, pts[i]) {
            continue;
        }
        c = point_circle(pts[i]);
        for j in 0..i {
            if inside(&c, pts[j]) {
                continue;
            }
            c = diameter_circle(pts[i], pts[j]);
            for k in 0..j {
                if !inside(&c, pts[k]) {
                    c = three_point_circle(pts[i], pts[j], pts[k]);
                }
            }
        }
    }
    Ok(c)
}

fn point_circle(p: (f64, f64)) -> Circle {
    Circle { x: p.0, y: p.1, radius: 0.0 }
}

fn diameter_circle(a: (f64, f64), b: (f64, f64)) -> Circle {
    let x = (a.0 + b.0) / 2.0;
    let y = (a.1 + b.1) / 2.0;
    Circle {
        x,
        y,
        radius: (a.0 - x).hypot(a.1 - y).max((b.0 - x).hypot(b.1 - y)),
    }
}

/// Circumcircle, or the widest diameter circle when the points are collinear.
fn three_point_circle(a: (f64, f64), b: (f64, f64), c: (f64, f64)) -> Circle {
    // work relative to `a` to keep the determinant well conditioned
    let (bx, by) = (b.0 - a.0, b.1 - a.1);
    let (cx, cy) = (c.0 - a.0, c.1 - a.1);
    let d = 2.0 * (bx * cy - by * cx);
    let scale = (bx.abs() + by.abs() + cx.abs() + cy.abs()).max(1e-300);
    if d.abs() <= 1e-12 * scale * scale {
        let candidates = [diameter_circle(a, b), diameter_circle(a, c), diameter_circle(b, c)];
        return candidates
            .into_iter()
            .max_by(|p, q| p.radius.total_cmp(&q.radius))
            .expect("three candidates");
    }
    let b2 = bx * bx + by * by;
    let c2 = cx * cx + cy * cy;
    let ux = (cy * b2 - by * c2) / d;
    let uy = (bx * c2 - cx * b2) / d;
    let center = (a.0 + ux, a.1 + uy);
    let radius = [a, b, c]
        .iter()
        .map(|p| (p.0 - center.0).hypot(p.1 - center.1))
        .fold(0.0, f64::max);
    Circle {
        x: center.0,
        y: center.1,
        radius,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let c = min_enclosing_circle(&[(3.0, -2.0)]).unwrap();
        assert_eq!((c.x, c.y, c.radius), (3.0, -2.0, 0.0));

        let c = min_enclosing_circle(&[(0.0, 0.0), (4.0, 0.0)]).unwrap();
        assert_eq!((c.x, c.y, c.radius), (2.0, 0.0, 2.0));

        let c = min_enclosing_circle(&[(0.0, 0.0), (2.0, 0.0), (1.0, 1.0)]).unwrap();
        assert!((c.x - 1.0).abs() < 1e-12 && c.y.abs() < 1e-12 && (c.radius - 1.0).abs() < 1e-12);
    }

    #[test]
    fn empty_input_rejected() {
        assert!(matches!(min_enclosing_circle(&[]), Err(Error::EmptyInput(_))));
    }

    #[test]
    fn collinear_and_duplicate_points() {
        let c = min_enclosing_circle(&[(0.0, 0.0), (1.0, 1.0), (3.0, 3.0), (3.0, 3.0), (2.0, 2.0)]).unwrap();
        assert!((c.x - 1.5).abs() < 1e-12 && (c.y - 1.5).abs() < 1e-12);
        assert!((c.radius - 4.5f64.sqrt()).abs() < 1e-12);
    }
}
