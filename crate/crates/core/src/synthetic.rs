//! Deterministic synthetic scenes for tests, examples and the bundled benchmark.

use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::frontend::{Fixation, FixationSet};
use crate::raster::{gaussian_blur, resize_plane, BinaryMask, Border, Raster, SaliencyMap};
use crate::{Error, Result};

pub fn white_noise(width: usize, height: usize, seed: u64) -> Raster {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let data = (0..width * height).map(|_| rng.gen::<f32>()).collect();
    Raster::new(width, height, 1, data).expect("noise samples lie in [0, 1)")
}

/// Sum of bilinearly upsampled noise octaves with amplitude proportional to
/// cell size, a rough 1/f power spectrum.
fn octave_noise(width: usize, height: usize, rng: &mut ChaCha8Rng) -> Vec<f32> {
    let mut acc = vec![0.0f32; width * height];
    let mut cell = 2usize;
    let mut total_amp = 0.0f32;
    while cell <= width.max(height) {
        let gw = width.div_ceil(cell) + 1;
        let gh = height.div_ceil(cell) + 1;
        let grid: Vec<f32> = (0..gw * gh).map(|_| rng.gen::<f32>() - 0.5).collect();
        let up = resize_plane(&grid, gw, gh, gw * cell, gh * cell);
        let amp = cell as f32;
        for y in 0..height {
            for x in 0..width {
                acc[y * width + x] += amp * up[y * gw * cell + x];
            }
        }
        total_amp += amp;
        cell *= 2;
    }
    acc.iter().map(|v| v / total_amp).collect()
}

/// RGB texture with natural-image-like spatial statistics.
pub fn texture(width: usize, height: usize, seed: u64) -> Raster {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let lum = octave_noise(width, height, &mut rng);
    let tint: Vec<Vec<f32>> = (0..3).map(|_| octave_noise(width, height, &mut rng)).collect();
    let (lo, hi) = lum
        .iter()
        .fold((f32::INFINITY, f32::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    let span = (hi - lo).max(1e-6);
    Raster::rgb_from_fn(width, height, |x, y| {
        let i = y * width + x;
        let l = 0.1 + 0.8 * (lum[i] - lo) / span;
        [l + 0.5 * tint[0][i], l + 0.5 * tint[1][i], l + 0.5 * tint[2][i]]
    })
}

/// Homogeneous square of side `side` with top-left corner at `(x0, y0)` on a
/// homogeneous background.
pub fn square_scene(size: usize, side: usize, x0: usize, y0: usize, fg: f32, bg: f32) -> (Raster, BinaryMask) {
    let mask = BinaryMask::rect(size, size, x0, y0, side, side);
    let img = Raster::gray_from_fn(size, size, |x, y| if mask.get(x, y) { fg } else { bg });
    (img, mask)
}

/// Isotropic Gaussian bump with peak 1 at `(cx, cy)`.
pub fn gaussian_map(width: usize, height: usize, cx: f64, cy: f64, sigma: f64) -> SaliencyMap {
    SaliencyMap::from_fn(width, height, |x, y| {
        let d2 = (x as f64 - cx).powi(2) + (y as f64 - cy).powi(2);
        (-d2 / (2.0 * sigma * sigma)).exp() as f32
    })
}

/// One synthetic benchmark image with everything a manifest entry can carry.
#[derive(Debug, Clone)]
pub struct Scene {
    pub image: Raster,
    pub mask: BinaryMask,
    /// Imperfect "model" saliency map.
    pub map: SaliencyMap,
    pub fixations: FixationSet,
    pub annotations: Vec<BinaryMask>,
    /// Object instances, the salient one first.
    pub instances: Vec<BinaryMask>,
}

fn ellipse(width: usize, height: usize, cx: f64, cy: f64, rx: f64, ry: f64) -> BinaryMask {
    BinaryMask::from_fn(width, height, |x, y| {
        let dx = (x as f64 + 0.5 - cx) / rx;
        let dy = (y as f64 + 0.5 - cy) / ry;
        dx * dx + dy * dy <= 1.0
    })
}

/// A textured scene with one salient ellipse and a smaller distractor.
pub fn scene(width: usize, height: usize, seed: u64) -> Scene {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (w, h) = (width as f64, height as f64);
    let rx = rng.gen_range(0.12..0.25) * w;
    let ry = rng.gen_range(0.15..0.3) * h;
    let cx = rng.gen_range(rx + 2.0..w - rx - 2.0);
    let cy = rng.gen_range(ry + 2.0..h - ry - 2.0);
    let mask = ellipse(width, height, cx, cy, rx, ry);

    // Distractor in the quadrant farthest from the object.
    let dx = if cx < w / 2.0 { 0.8 * w } else { 0.2 * w };
    let dy = if cy < h / 2.0 { 0.8 * h } else { 0.2 * h };
    let distractor = ellipse(width, height, dx, dy, 0.07 * w, 0.07 * h);
    let distractor = BinaryMask::from_fn(width, height, |x, y| distractor.get(x, y) && !mask.get(x, y));

    let bg = texture(width, height, seed.wrapping_mul(31).wrapping_add(1));
    let fg: [f32; 3] = [rng.gen_range(0.6..0.95), rng.gen_range(0.1..0.4), rng.gen_range(0.1..0.5)];
    let image = Raster::rgb_from_fn(width, height, |x, y| {
        let t = [bg.sample(x, y, 0), bg.sample(x, y, 1), bg.sample(x, y, 2)];
        if mask.get(x, y) {
            [fg[0] + 0.05 * t[0], fg[1] + 0.05 * t[1], fg[2] + 0.05 * t[2]]
        } else if distractor.get(x, y) {
            [0.2, 0.5 + 0.1 * t[1], 0.8]
        } else {
            [0.3 + 0.2 * t[0], 0.3 + 0.2 * t[1], 0.3 + 0.2 * t[2]]
        }
    });

    let jitter_x = rng.gen_range(-0.3..0.3) * rx;
    let jitter_y = rng.gen_range(-0.3..0.3) * ry;
    let blob = gaussian_map(width, height, cx + jitter_x, cy + jitter_y, 0.6 * rx.max(ry));
    let side = gaussian_map(width, height, dx, dy, 0.05 * w);
    let noise_level = rng.gen_range(0.05..0.35);
    let mut noise: Vec<f32> = (0..width * height).map(|_| rng.gen::<f32>()).collect();
    noise = gaussian_blur(&noise, width, height, 1.5, Border::Clamp);
    let raw: Vec<f32> = blob
        .values()
        .iter()
        .zip(side.values())
        .zip(&noise)
        .map(|((b, s), n)| b + 0.5 * s + noise_level * n)
        .collect();
    let map = SaliencyMap::normalized(width, height, raw).expect("finite synthetic map");

    let mut points = Vec::new();
    for observer in 0..3u32 {
        for _ in 0..6 {
            let (x, y) = if rng.gen_bool(0.7) {
                (cx + rng.gen_range(-0.8..0.8) * rx, cy + rng.gen_range(-0.8..0.8) * ry)
            } else {
                (rng.gen_range(0.0..w), rng.gen_range(0.0..h))
            };
            let x = (x.clamp(0.0, w - 1.0) * 10.0).round() / 10.0;
            let y = (y.clamp(0.0, h - 1.0) * 10.0).round() / 10.0;
            points.push(Fixation::new(x, y, observer));
        }
    }
    let fixations = FixationSet::new(width, height, points).expect("points clamped to the image");

    let shifted = ellipse(width, height, cx + 1.5, cy - 1.0, rx * 1.1, ry * 0.95);
    Scene {
        image,
        annotations: vec![mask.clone(), shifted],
        instances: vec![mask.clone(), distractor],
        mask,
        map,
        fixations,
    }
}

/// Writes `count` scenes plus a `manifest.toml` into `dir`:
/// `images/`, `masks/`, `maps/` (model maps), `fixations/`, `annotations/`, `instances/`.
pub fn write_benchmark(dir: &Path, count: usize, width: usize, height: usize) -> Result<()> {
    let mut manifest = String::from("# Synthetic salient-object benchmark.\n");
    for i in 0..count {
        let id = format!("scene{i:02}");
        let s = scene(width, height, 1000 + i as u64);
        crate::io::save_raster(&s.image, &dir.join(format!("images/{id}.png")))?;
        crate::io::save_mask(&s.mask, &dir.join(format!("masks/{id}.png")))?;
        crate::io::save_map(&s.map, &dir.join(format!("maps/{id}.png")))?;
        for (k, a) in s.annotations.iter().enumerate() {
            crate::io::save_mask(a, &dir.join(format!("annotations/{id}_{k}.png")))?;
        }
        for (k, m) in s.instances.iter().enumerate() {
            crate::io::save_mask(m, &dir.join(format!("instances/{id}_{k}.png")))?;
        }
        let fix_path = dir.join(format!("fixations/{id}.csv"));
        crate::io::ensure_parent(&fix_path)?;
        std::fs::write(&fix_path, s.fixations.to_csv()).map_err(|e| Error::io(&fix_path, e))?;

        manifest.push_str(&format!(
            "\n[[entry]]\nid = \"{id}\"\nimage = \"images/{id}.png\"\nmask = \"masks/{id}.png\"\n\
             fixations = \"fixations/{id}.csv\"\n\
             annotations = [\"annotations/{id}_0.png\", \"annotations/{id}_1.png\"]\n\
             instances = [\n  {{ mask = \"instances/{id}_0.png\", order = 1 }},\n  \
             {{ mask = \"instances/{id}_1.png\", order = 2 }},\n]\n"
        ));
    }
    let path = dir.join("manifest.toml");
    std::fs::write(&path, manifest).map_err(|e| Error::io(&path, e))
}
