//! Deterministic CPU renderer: sphere tracing over an analytic signed
//! distance field of eight rounded boxes.
//!
//! The animal is four spine blocks along the local x axis plus two leg
//! pairs below: one fixed at the inner spine end, one mobile pair whose
//! longitudinal position is the legs' attribute. The cube-to-sphere morph is
//! the rounded-box corner radius. Masks are exact: every hit pixel carries
//! the id of the nearest primitive (1-4 spine, 5-6 fixed legs, 7-8 mobile
//! legs, 0 background).

use crate::error::{Error, Result};
use crate::scene::{validate_scene, SceneParameters};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::ops::{Add, Mul, Neg, Sub};
use std::path::Path;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vec3 {
    pub const fn new(x: f64, y: f64, z: f64) -> Vec3 {
        Vec3 { x, y, z }
    }

    pub fn dot(self, o: Vec3) -> f64 {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn length(self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn normalized(self) -> Vec3 {
        let len = self.length();
        self * (1.0 / len)
    }

    pub fn cross(self, o: Vec3) -> Vec3 {
        Vec3::new(
            self.y * o.z - self.z * o.y,
            self.z * o.x - self.x * o.z,
            self.x * o.y - self.y * o.x,
        )
    }

    fn abs(self) -> Vec3 {
        Vec3::new(self.x.abs(), self.y.abs(), self.z.abs())
    }

    fn max_scalar(self, s: f64) -> Vec3 {
        Vec3::new(self.x.max(s), self.y.max(s), self.z.max(s))
    }

    fn max_component(self) -> f64 {
        self.x.max(self.y).max(self.z)
    }

    fn rotate_x(self, angle: f64) -> Vec3 {
        let (s, c) = angle.sin_cos();
        Vec3::new(self.x, c * self.y - s * self.z, s * self.y + c * self.z)
    }

    fn rotate_y(self, angle: f64) -> Vec3 {
        let (s, c) = angle.sin_cos();
        Vec3::new(c * self.x + s * self.z, self.y, -s * self.x + c * self.z)
    }

    fn rotate_z(self, angle: f64) -> Vec3 {
        let (s, c) = angle.sin_cos();
        Vec3::new(c * self.x - s * self.y, s * self.x + c * self.y, self.z)
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    fn add(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Mul<f64> for Vec3 {
    type Output = Vec3;
    fn mul(self, s: f64) -> Vec3 {
        Vec3::new(self.x * s, self.y * s, self.z * s)
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    fn neg(self) -> Vec3 {
        self * -1.0
    }
}

/// Half-extent of every block.
pub const BLOCK_HALF_EXTENT: f64 = 0.5;
/// Center-to-center spine spacing; leaves a visible seam between blocks.
pub const SPINE_SPACING: f64 = 1.05;
/// Vertical offset of the leg pairs below the spine.
const LEG_DROP: f64 = -1.05;
/// Sideways offset of each leg within a pair.
const LEG_SPREAD: f64 = 0.55;

/// Spine block centers along x, centered on the bending joint at the origin.
const SPINE_X: [f64; 4] = [
    -1.5 * SPINE_SPACING,
    -0.5 * SPINE_SPACING,
    0.5 * SPINE_SPACING,
    1.5 * SPINE_SPACING,
];

/// Longitudinal position of the mobile pair: 0.5 aligns with the last spine
/// block, 0 is one spacing inward, 1 one spacing outward.
pub fn mobile_leg_x(legs_position: f64) -> f64 {
    SPINE_X[3] + (legs_position - 0.5) * 2.0 * SPINE_SPACING
}

/// Signed distance to a rounded box centered at the origin with the given
/// half-extent and corner radius (0 = cube, half-extent = sphere).
pub fn rounded_box_distance(p: Vec3, half_extent: f64, radius: f64) -> f64 {
    let q = p.abs() - Vec3::new(half_extent - radius, half_extent - radius, half_extent - radius);
    q.max_scalar(0.0).length() + q.max_component().min(0.0) - radius
}

/// Block centers in the body frame before bending, indexed by id - 1.
fn block_centers(params: &SceneParameters) -> [Vec3; 8] {
    [
        Vec3::new(SPINE_X[0], 0.0, 0.0),
        Vec3::new(SPINE_X[1], 0.0, 0.0),
        Vec3::new(SPINE_X[2], 0.0, 0.0),
        Vec3::new(SPINE_X[3], 0.0, 0.0),
        Vec3::new(SPINE_X[0], LEG_DROP, LEG_SPREAD),
        Vec3::new(SPINE_X[0], LEG_DROP, -LEG_SPREAD),
        Vec3::new(mobile_leg_x(params.legs_position), LEG_DROP, LEG_SPREAD),
        Vec3::new(mobile_leg_x(params.legs_position), LEG_DROP, -LEG_SPREAD),
    ]
}

/// Ids of the primitives that bend with the outer spine half.
fn bends(id: usize) -> bool {
    matches!(id, 3 | 4 | 7 | 8)
}

/// Signed distance from `point` (world space) to the animal, with the id of
/// the nearest block.
pub fn animal_sdf(point: Vec3, params: &SceneParameters) -> (f64, u8) {
    // Into the body frame: undo translation, then the whole-body rotation
    // (yaw about y, pitch about z, roll about x).
    let p = point - Vec3::new(params.position_x, params.position_y, 0.0);
    let p = p
        .rotate_y(-params.rotation_yaw)
        .rotate_z(-params.rotation_pitch)
        .rotate_x(-params.rotation_roll);

    // The outer spine half and mobile legs rotate about the mid-joint.
    let p_bent = p.rotate_z(-params.bending);

    let radius = params.shape * BLOCK_HALF_EXTENT;
    let centers = block_centers(params);
    let mut best = f64::INFINITY;
    let mut best_id = 0u8;
    for (i, center) in centers.iter().enumerate() {
        let id = i + 1;
        let q = if bends(id) { p_bent } else { p };
        let d = rounded_box_distance(q - *center, BLOCK_HALF_EXTENT, radius);
        if d < best {
            best = d;
            best_id = id as u8;
        }
    }
    (best, best_id)
}

/// Fixed perspective camera.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Camera {
    pub eye: Vec3,
    pub look_at: Vec3,
    pub up: Vec3,
    pub fov_degrees: f64,
}

impl Default for Camera {
    fn default() -> Self {
        Camera {
            eye: Vec3::new(0.0, 3.0, 10.5),
            look_at: Vec3::new(-0.4, -0.9, 0.0),
            up: Vec3::new(0.0, 1.0, 0.0),
            fov_degrees: 45.0,
        }
    }
}

impl Camera {
    /// Ray through the center of pixel (px, py); +x right, +y down.
    pub fn ray(&self, px: usize, py: usize, width: usize, height: usize) -> (Vec3, Vec3) {
        let forward = (self.look_at - self.eye).normalized();
        let right = forward.cross(self.up).normalized();
        let up = right.cross(forward);
        let half_tan = (self.fov_degrees.to_radians() / 2.0).tan();
        let u = ((px as f64 + 0.5) / width as f64 * 2.0 - 1.0) * half_tan;
        let v = (1.0 - (py as f64 + 0.5) / height as f64 * 2.0) * half_tan;
        let dir = (forward + right * u + up * v).normalized();
        (self.eye, dir)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RenderConfig {
    pub width: usize,
    pub height: usize,
    pub camera: Camera,
    /// Direction toward the light.
    pub light_direction: Vec3,
    pub ambient: f64,
    pub max_march_steps: usize,
    pub hit_epsilon: f64,
    pub max_distance: f64,
    /// Color scale endpoints shared by the animal and the background.
    pub red_endpoint: [u8; 3],
    pub blue_endpoint: [u8; 3],
}

impl Default for RenderConfig {
    fn default() -> Self {
        RenderConfig {
            width: 128,
            height: 128,
            camera: Camera::default(),
            light_direction: Vec3::new(-0.35, 0.9, 0.45),
            ambient: 0.35,
            max_march_steps: 96,
            hit_epsilon: 1e-3,
            max_distance: 30.0,
            red_endpoint: [217, 61, 74],
            blue_endpoint: [64, 84, 217],
        }
    }
}

impl RenderConfig {
    /// 64x64 preset used for model training.
    pub fn desk() -> Self {
        RenderConfig { width: 64, height: 64, ..Default::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if self.width < 16 || self.height < 16 {
            return Err(Error::Config(format!(
                "render size must be at least 16x16, got {}x{}",
                self.width, self.height
            )));
        }
        if !(self.hit_epsilon > 0.0) {
            return Err(Error::Config("hit_epsilon must be positive".into()));
        }
        if self.max_march_steps < 32 {
            return Err(Error::Config("need at least 32 march steps".into()));
        }
        Ok(())
    }

    fn lerp_color(&self, t: f64) -> [f64; 3] {
        let mut out = [0.0; 3];
        for c in 0..3 {
            let lo = self.red_endpoint[c] as f64;
            let hi = self.blue_endpoint[c] as f64;
            out[c] = lo + (hi - lo) * t.clamp(0.0, 1.0);
        }
        out
    }
}

/// One rendered sample: 8-bit RGB image, block-id mask, and the parameters
/// that produced them.
#[derive(Debug, Clone, PartialEq)]
pub struct RenderedSample {
    pub width: usize,
    pub height: usize,
    /// Row-major RGB, height * width * 3 bytes.
    pub image: Vec<u8>,
    /// Row-major block ids, height * width bytes; 0 = background.
    pub mask: Vec<u8>,
    pub params: SceneParameters,
}

impl RenderedSample {
    pub fn animal_pixel_fraction(&self) -> f64 {
        let hits = self.mask.iter().filter(|&&m| m != 0).count();
        hits as f64 / self.mask.len() as f64
    }

    pub fn to_png_bytes(&self) -> Result<Vec<u8>> {
        let img =
            image::RgbImage::from_raw(self.width as u32, self.height as u32, self.image.clone())
                .ok_or_else(|| Error::Image("image buffer size mismatch".into()))?;
        let mut bytes = Vec::new();
        img.write_to(&mut std::io::Cursor::new(&mut bytes), image::ImageFormat::Png)?;
        Ok(bytes)
    }

    pub fn mask_png_bytes(&self) -> Result<Vec<u8>> {
        let img =
            image::GrayImage::from_raw(self.width as u32, self.height as u32, self.mask.clone())
                .ok_or_else(|| Error::Image("mask buffer size mismatch".into()))?;
        let mut bytes = Vec::new();
        img.write_to(&mut std::io::Cursor::new(&mut bytes), image::ImageFormat::Png)?;
        Ok(bytes)
    }

    pub fn save(&self, image_path: &Path, mask_path: &Path) -> Result<()> {
        std::fs::write(image_path, self.to_png_bytes()?)?;
        std::fs::write(mask_path, self.mask_png_bytes()?)?;
        Ok(())
    }
}

enum MarchResult {
    Hit { point: Vec3, block_id: u8 },
    Escaped,
    Exhausted,
}

fn march(origin: Vec3, dir: Vec3, params: &SceneParameters, config: &RenderConfig) -> MarchResult {
    let mut t = 0.0;
    for _ in 0..config.max_march_steps {
        let p = origin + dir * t;
        let (d, id) = animal_sdf(p, params);
        if d < config.hit_epsilon {
            return MarchResult::Hit { point: p, block_id: id };
        }
        t += d;
        if t > config.max_distance {
            return MarchResult::Escaped;
        }
    }
    MarchResult::Exhausted
}

/// SDF gradient by central differences.
pub fn sdf_gradient(p: Vec3, params: &SceneParameters) -> Vec3 {
    let h = 1e-4;
    let dx = animal_sdf(p + Vec3::new(h, 0.0, 0.0), params).0
        - animal_sdf(p - Vec3::new(h, 0.0, 0.0), params).0;
    let dy = animal_sdf(p + Vec3::new(0.0, h, 0.0), params).0
        - animal_sdf(p - Vec3::new(0.0, h, 0.0), params).0;
    let dz = animal_sdf(p + Vec3::new(0.0, 0.0, h), params).0
        - animal_sdf(p - Vec3::new(0.0, 0.0, h), params).0;
    Vec3::new(dx, dy, dz) * (1.0 / (2.0 * h))
}

/// Marches the ray of one pixel; returns the hit point and block id.
pub fn trace_pixel(
    params: &SceneParameters,
    config: &RenderConfig,
    px: usize,
    py: usize,
) -> Option<(Vec3, u8)> {
    let (origin, dir) = config.camera.ray(px, py, config.width, config.height);
    match march(origin, dir, params, config) {
        MarchResult::Hit { point, block_id } => Some((point, block_id)),
        _ => None,
    }
}

/// Renders a scene with Lambertian shading; background pixels carry the
/// background attribute on the shared red-blue scale. Deterministic:
/// identical inputs give byte-identical outputs regardless of thread count.
pub fn render_scene(params: &SceneParameters, config: &RenderConfig) -> Result<RenderedSample> {
    config.validate()?;
    let report = validate_scene(params);
    if !report.range_violations.is_empty() {
        return Err(Error::Argument(format!(
            "scene attributes out of range: {}",
            report.range_violations.join(", ")
        )));
    }

    let animal_rgb = config.lerp_color(params.color);
    let background_rgb = config.lerp_color(params.background);
    let light = config.light_direction.normalized();

    struct Row {
        rgb: Vec<u8>,
        mask: Vec<u8>,
        exhausted: usize,
    }

    let rows: Vec<Row> = (0..config.height)
        .into_par_iter()
        .map(|py| {
            let mut rgb = vec![0u8; config.width * 3];
            let mut mask = vec![0u8; config.width];
            let mut exhausted = 0usize;
            for px in 0..config.width {
                let (origin, dir) = config.camera.ray(px, py, config.width, config.height);
                match march(origin, dir, params, config) {
                    MarchResult::Hit { point, block_id } => {
                        let normal = sdf_gradient(point, params).normalized();
                        let diffuse = normal.dot(light).max(0.0);
                        let intensity = config.ambient + (1.0 - config.ambient) * diffuse;
                        for c in 0..3 {
                            rgb[px * 3 + c] =
                                (animal_rgb[c] * intensity).round().clamp(0.0, 255.0) as u8;
                        }
                        mask[px] = block_id;
                    }
                    MarchResult::Escaped => {
                        for c in 0..3 {
                            rgb[px * 3 + c] = background_rgb[c].round() as u8;
                        }
                    }
                    MarchResult::Exhausted => {
                        exhausted += 1;
                        for c in 0..3 {
                            rgb[px * 3 + c] = background_rgb[c].round() as u8;
                        }
                    }
                }
            }
            Row { rgb, mask, exhausted }
        })
        .collect();

    let mut image = Vec::with_capacity(config.width * config.height * 3);
    let mut mask = Vec::with_capacity(config.width * config.height);
    let mut exhausted = 0;
    for row in rows {
        image.extend_from_slice(&row.rgb);
        mask.extend_from_slice(&row.mask);
        exhausted += row.exhausted;
    }

    let budget = (config.width * config.height) as f64;
    if exhausted as f64 > 0.01 * budget {
        return Err(Error::RenderQuality(format!(
            "march budget exhausted on {exhausted} of {} pixels",
            config.width * config.height
        )));
    }

    Ok(RenderedSample {
        width: config.width,
        height: config.height,
        image,
        mask,
        params: params.clone(),
    })
}
