use super::Scene;
use crate::geometry::{project_body, CameraIntrinsics, Pose};
use crate::imaging::ImageBuffer;
use crate::rounding::{round_half_away, to_u8};
use crate::Vec3;

const MARKER_DARK: [u8; 3] = [0, 0, 0];
const MARKER_LIGHT: [u8; 3] = [255, 255, 255];

/// Agent id and pose, used to place attached scene objects.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AgentPose {
    pub id: u32,
    pub pose: Pose,
}

fn ball_center(scene: &Scene, agents: &[AgentPose]) -> Option<Vec3> {
    agents
        .iter()
        .find(|a| a.id == scene.ball.attach_agent)
        .map(|a| a.pose.transform_point(&scene.ball.body_offset))
}

enum Sprite {
    Disc { u: f64, v: f64, r: f64, color: [u8; 3] },
    Square { u: f64, v: f64, half: f64 },
}

/// Rasterize the RGB view: background, then markers and the ball as flat
/// sprites painted far to near.
pub fn render_camera(scene: &Scene, cam: &Pose, k: &CameraIntrinsics, agents: &[AgentPose]) -> ImageBuffer {
    let (w, h) = (k.width as usize, k.height as usize);
    let mut img = ImageBuffer::filled(w, h, &scene.background).expect("intrinsics have non-zero size");
    let to_cam = cam.inverse();

    let mut sprites: Vec<(f64, usize, Sprite)> = Vec::new();
    for (i, m) in scene.markers.iter().enumerate() {
        let p = to_cam.transform_point(&m.pose.position);
        if let Some((u, v)) = project_body(k, &p) {
            let half = k.fx * m.size / 2.0 / p.x;
            sprites.push((p.x, i, Sprite::Square { u, v, half }));
        }
    }
    if let Some(c) = ball_center(scene, agents) {
        let p = to_cam.transform_point(&c);
        if let Some((u, v)) = project_body(k, &p) {
            let r = round_half_away(k.fx * scene.ball.radius / p.x);
            sprites.push((p.x, usize::MAX, Sprite::Disc { u, v, r, color: scene.ball.color }));
        }
    }
    sprites.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));

    for (_, _, sprite) in &sprites {
        match *sprite {
            Sprite::Disc { u, v, r, color } => fill_disc(&mut img, u, v, r, color),
            Sprite::Square { u, v, half } => {
                fill_square(&mut img, u, v, half, MARKER_DARK);
                fill_square(&mut img, u, v, half / 2.0, MARKER_LIGHT);
            }
        }
    }
    img
}

fn pixel_span(center: f64, half: f64, len: usize) -> Option<(usize, usize)> {
    let lo = (center - half).ceil().max(0.0);
    let hi = (center + half).floor().min(len as f64 - 1.0);
    if hi < lo || !lo.is_finite() || !hi.is_finite() {
        None
    } else {
        Some((lo as usize, hi as usize))
    }
}

fn fill_disc(img: &mut ImageBuffer, u: f64, v: f64, r: f64, color: [u8; 3]) {
    let (Some((x0, x1)), Some((y0, y1))) = (pixel_span(u, r, img.width()), pixel_span(v, r, img.height())) else {
        return;
    };
    let r2 = r * r;
    for y in y0..=y1 {
        let dy = y as f64 - v;
        for x in x0..=x1 {
            let dx = x as f64 - u;
            if dx * dx + dy * dy <= r2 {
                img.set_pixel(x, y, &color);
            }
        }
    }
}

fn fill_square(img: &mut ImageBuffer, u: f64, v: f64, half: f64, color: [u8; 3]) {
    let (Some((x0, x1)), Some((y0, y1))) = (pixel_span(u, half, img.width()), pixel_span(v, half, img.height())) else {
        return;
    };
    for y in y0..=y1 {
        for x in x0..=x1 {
            img.set_pixel(x, y, &color);
        }
    }
}

/// Map a range along the ray to 8 bits: `near` → 255, `far` → 0.
pub fn depth_intensity(d: f64, near: f64, far: f64) -> u8 {
    to_u8(255.0 * (1.0 - (d - near) / (far - near)))
}

/// Render a proximity map: per pixel, the range to the nearest wall or ball
/// surface along the ray, mapped through [`depth_intensity`]. Rays that hit
/// nothing are 0.
pub fn render_depth(
    scene: &Scene,
    cam: &Pose,
    k: &CameraIntrinsics,
    near: f64,
    far: f64,
    agents: &[AgentPose],
) -> ImageBuffer {
    let (w, h) = (k.width as usize, k.height as usize);
    let origin = cam.position;
    let ball = ball_center(scene, agents);
    let mut data = vec![0u8; w * h];
    for y in 0..h {
        for x in 0..w {
            let dir = cam.rotate_vector(&k.ray_body(x as f64, y as f64));
            let mut best = f64::INFINITY;
            for wall in &scene.walls {
                if let Some(t) = ray_box(&origin, &dir, &wall.min, &wall.max) {
                    best = best.min(t);
                }
            }
            if let Some(c) = ball {
                if let Some(t) = ray_sphere(&origin, &dir, &c, scene.ball.radius) {
                    best = best.min(t);
                }
            }
            if best.is_finite() {
                data[y * w + x] = depth_intensity(best, near, far);
            }
        }
    }
    ImageBuffer::new(w, h, 1, data).expect("dimensions from intrinsics")
}

/// Entry distance of a ray into an axis-aligned box (0 when starting inside).
fn ray_box(o: &Vec3, d: &Vec3, min: &Vec3, max: &Vec3) -> Option<f64> {
    let mut t0 = 0.0f64;
    let mut t1 = f64::INFINITY;
    for i in 0..3 {
        if d[i].abs() < 1e-15 {
            if o[i] < min[i] || o[i] > max[i] {
                return None;
            }
            continue;
        }
        let inv = 1.0 / d[i];
        let (a, b) = ((min[i] - o[i]) * inv, (max[i] - o[i]) * inv);
        let (a, b) = if a <= b { (a, b) } else { (b, a) };
        t0 = t0.max(a);
        t1 = t1.min(b);
        if t0 > t1 {
            return None;
        }
    }
    Some(t0)
}

fn ray_sphere(o: &Vec3, d: &Vec3, c: &Vec3, r: f64) -> Option<f64> {
    let oc = o - c;
    let b = oc.dot(d);
    let cc = oc.norm_squared() - r * r;
    let disc = b * b - cc;
    if disc < 0.0 {
        return None;
    }
    let sq = disc.sqrt();
    let t = -b - sq;
    if t >= 0.0 {
        Some(t)
    } else if -b + sq >= 0.0 {
        Some(0.0)
    } else {
        None
    }
}
