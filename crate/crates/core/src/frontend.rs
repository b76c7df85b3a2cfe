//! Saliency frontends: the first stage of the pipeline.
//!
//! A frontend turns an image (and optionally its eye-tracking data) into a
//! [`SaliencyMap`] at image resolution, normalized to `[0, 1]`.

use std::path::{Path, PathBuf};

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::raster::{gaussian_blur, resize_bilinear, resize_plane, Border, Raster, SaliencyMap};
use crate::{Error, Result};

/// Default fixation blur, roughly one degree of visual angle at typical
/// eye-tracking viewing distances.
pub const DEFAULT_BLUR_SIGMA: f64 = 30.0;

/// Long-side resolution at which the spectral stand-in operates.
pub const STANDIN_RESOLUTION: usize = 64;
const STANDIN_BLUR_SIGMA: f64 = 2.5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Fixation {
    pub x: f64,
    pub y: f64,
    pub observer: u32,
}

impl Fixation {
    pub fn new(x: f64, y: f64, observer: u32) -> Self {
        Fixation { x, y, observer }
    }

    /// Pixel containing the fixation.
    pub fn pixel(&self) -> (usize, usize) {
        (self.x.floor() as usize, self.y.floor() as usize)
    }
}

/// Gaze points recorded on one image.
#[derive(Debug, Clone, PartialEq)]
pub struct FixationSet {
    width: usize,
    height: usize,
    points: Vec<Fixation>,
}

impl FixationSet {
    pub fn new(width: usize, height: usize, points: Vec<Fixation>) -> Result<Self> {
        for p in &points {
            let inside = p.x.is_finite()
                && p.y.is_finite()
                && p.x >= 0.0
                && p.y >= 0.0
                && p.x < width as f64
                && p.y < height as f64;
            if !inside {
                return Err(Error::InvalidInput(format!(
                    "fixation ({}, {}) outside {width}x{height} image",
                    p.x, p.y
                )));
            }
        }
        Ok(FixationSet {
            width,
            height,
            points,
        })
    }

    /// Reads `x,y,observer_id` lines after a one-line header.
    pub fn from_csv(path: &Path, width: usize, height: usize) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(true)
            .trim(csv::Trim::All)
            .from_path(path)
            .map_err(|e| Error::parse(path, e.to_string()))?;
        let mut points = Vec::new();
        for (line, record) in reader.records().enumerate() {
            let record = record.map_err(|e| Error::parse(path, e.to_string()))?;
            let bad = |what: &str| Error::parse(path, format!("line {}: bad {what}", line + 2));
            if record.len() != 3 {
                return Err(bad("field count"));
            }
            let x: f64 = record[0].parse().map_err(|_| bad("x"))?;
            let y: f64 = record[1].parse().map_err(|_| bad("y"))?;
            let observer: u32 = record[2].parse().map_err(|_| bad("observer_id"))?;
            points.push(Fixation { x, y, observer });
        }
        Self::new(width, height, points).map_err(|e| Error::parse(path, e.to_string()))
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,y,observer_id\n");
        for p in &self.points {
            out.push_str(&format!("{},{},{}\n", p.x, p.y, p.observer));
        }
        out
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    pub fn points(&self) -> &[Fixation] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Sorted distinct observer ids.
    pub fn observers(&self) -> Vec<u32> {
        let mut ids: Vec<u32> = self.points.iter().map(|p| p.observer).collect();
        ids.sort_unstable();
        ids.dedup();
        ids
    }

    pub fn without_observer(&self, observer: u32) -> FixationSet {
        FixationSet {
            width: self.width,
            height: self.height,
            points: self.points.iter().copied().filter(|p| p.observer != observer).collect(),
        }
    }

    /// Maps coordinates proportionally into a `width x height` frame.
    pub fn rescaled(&self, width: usize, height: usize) -> FixationSet {
        let sx = width as f64 / self.width as f64;
        let sy = height as f64 / self.height as f64;
        let points = self
            .points
            .iter()
            .map(|p| Fixation {
                x: (p.x * sx).min(width as f64 - 1e-9).max(0.0),
                y: (p.y * sy).min(height as f64 - 1e-9).max(0.0),
                observer: p.observer,
            })
            .collect();
        FixationSet {
            width,
            height,
            points,
        }
    }

    /// Concatenates point lists; all sets must share dimensions.
    pub fn merged<'a>(sets: impl IntoIterator<Item = &'a FixationSet>) -> Option<FixationSet> {
        let mut iter = sets.into_iter();
        let first = iter.next()?.clone();
        Some(iter.fold(first, |mut acc, s| {
            acc.points.extend(s.rescaled(acc.width, acc.height).points);
            acc
        }))
    }
}

/// Which source produces the saliency map for an image.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum FrontendSpec {
    /// Precomputed 8-bit map on disk.
    ExternalMap { path: PathBuf },
    /// Blurred human fixations (upper-bound frontend).
    FixationMap { blur_sigma: f64 },
    /// Fixations of every observer except `held_out`.
    InterObserver { held_out: u32, blur_sigma: f64 },
    /// Built-in spectral-residual map, not a published comparison model.
    SpectralStandin,
}

impl FrontendSpec {
    pub fn validate(&self) -> Result<()> {
        match self {
            FrontendSpec::FixationMap { blur_sigma } | FrontendSpec::InterObserver { blur_sigma, .. }
                if !(*blur_sigma > 0.0 && blur_sigma.is_finite()) =>
            {
                Err(Error::InvalidArgument(format!(
                    "blur_sigma must be > 0, got {blur_sigma}"
                )))
            }
            _ => Ok(()),
        }
    }

    /// Short name used in reports.
    pub fn label(&self) -> &'static str {
        match self {
            FrontendSpec::ExternalMap { .. } => "external",
            FrontendSpec::FixationMap { .. } => "fixations",
            FrontendSpec::InterObserver { .. } => "interobs",
            FrontendSpec::SpectralStandin => "standin-spectral-residual",
        }
    }

    /// Produces a normalized map at the image's resolution.
    pub fn produce(&self, image: &Raster, fixations: Option<&FixationSet>) -> Result<SaliencyMap> {
        self.validate()?;
        let (w, h) = image.dims();
        let need_fix = || {
            fixations.ok_or_else(|| Error::EmptyInput("frontend requires a fixation set".into()))
        };
        let map = match self {
            FrontendSpec::ExternalMap { path } => load_external_map(path, w, h)?,
            FrontendSpec::FixationMap { blur_sigma } => fixation_map(need_fix()?, *blur_sigma)?,
            FrontendSpec::InterObserver {
                held_out,
                blur_sigma,
            } => inter_observer_map(need_fix()?, *held_out, *blur_sigma)?,
            FrontendSpec::SpectralStandin => spectral_standin(image)?,
        };
        if map.dims() != (w, h) {
            return resize_bilinear(&map, w, h).map(|m| crate::raster::normalize_map(&m));
        }
        Ok(map)
    }
}

/// Reads an 8-bit map, resizes it to the target grid and normalizes it.
pub fn load_external_map(path: &Path, width: usize, height: usize) -> Result<SaliencyMap> {
    if width == 0 || height == 0 {
        return Err(Error::InvalidArgument(format!(
            "target size {width}x{height} has a zero dimension"
        )));
    }
    let raw = crate::io::load_map(path)?;
    let resized = resize_bilinear(&raw, width, height)?;
    Ok(crate::raster::normalize_map(&resized))
}

/// Additive fixation histogram convolved with an isotropic Gaussian, normalized.
pub fn fixation_map(fixations: &FixationSet, blur_sigma: f64) -> Result<SaliencyMap> {
    if fixations.is_empty() {
        return Err(Error::EmptyInput("fixation set is empty".into()));
    }
    if !(blur_sigma > 0.0 && blur_sigma.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "blur_sigma must be > 0, got {blur_sigma}"
        )));
    }
    let (w, h) = fixations.dims();
    let mut hist = vec![0.0f32; w * h];
    for p in fixations.points() {
        let (x, y) = p.pixel();
        hist[y * w + x] += 1.0;
    }
    let blurred = gaussian_blur(&hist, w, h, blur_sigma, Border::Zero);
    SaliencyMap::normalized(w, h, blurred)
}

/// Fixation map built from every observer except `held_out`.
pub fn inter_observer_map(fixations: &FixationSet, held_out: u32, blur_sigma: f64) -> Result<SaliencyMap> {
    let others = fixations.without_observer(held_out);
    if others.is_empty() {
        return Err(Error::EmptyInput(format!(
            "no fixations remain after holding out observer {held_out}"
        )));
    }
    fixation_map(&others, blur_sigma)
}

fn fft2(data: &mut [Complex<f32>], w: usize, h: usize, inverse: bool) {
    let mut planner = FftPlanner::<f32>::new();
    let (row, col) = if inverse {
        (planner.plan_fft_inverse(w), planner.plan_fft_inverse(h))
    } else {
        (planner.plan_fft_forward(w), planner.plan_fft_forward(h))
    };
    for r in data.chunks_exact_mut(w) {
        row.process(r);
    }
    let mut column = vec![Complex::new(0.0, 0.0); h];
    for x in 0..w {
        for y in 0..h {
            column[y] = data[y * w + x];
        }
        col.process(&mut column);
        for y in 0..h {
            data[y * w + x] = column[y];
        }
    }
}

/// Squared inverse transform of the spectral residual of one plane; zero
/// for a flat plane.
fn residual_energy(small: &[f32], sw: usize, sh: usize) -> Vec<f32> {
    let (lo, hi) = small
        .iter()
        .fold((f32::INFINITY, f32::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    if hi - lo < 1e-6 {
        return vec![0.0; sw * sh];
    }

    let mut spectrum: Vec<Complex<f32>> = small.iter().map(|&v| Complex::new(v, 0.0)).collect();
    fft2(&mut spectrum, sw, sh, false);

    let peak = spectrum.iter().map(|c| c.norm()).fold(0.0f32, f32::max);
    let eps = peak * 1e-6 + f32::MIN_POSITIVE;
    let log_amp: Vec<f32> = spectrum.iter().map(|c| (c.norm() + eps).ln()).collect();

    // 3x3 mean with wrap-around: the spectrum is periodic.
    let mut residual = vec![0.0f32; sw * sh];
    for y in 0..sh {
        for x in 0..sw {
            let mut acc = 0.0;
            for dy in [sh - 1, 0, 1] {
                for dx in [sw - 1, 0, 1] {
                    acc += log_amp[((y + dy) % sh) * sw + (x + dx) % sw];
                }
            }
            residual[y * sw + x] = log_amp[y * sw + x] - acc / 9.0;
        }
    }

    for (c, r) in spectrum.iter_mut().zip(&residual) {
        *c = Complex::from_polar(r.exp(), c.arg());
    }
    fft2(&mut spectrum, sw, sh, true);
    spectrum.iter().map(|c| c.norm_sqr()).collect()
}

/// Spectral-residual saliency computed at 64 pixels on the long side.
///
/// Per color channel, the log-amplitude spectrum minus its 3x3 local mean is
/// recombined with the original phase. The squared inverse transforms are
/// summed, blurred, upscaled to the image size and normalized.
pub fn spectral_standin(image: &Raster) -> Result<SaliencyMap> {
    if image.is_empty() {
        return Err(Error::InvalidInput("cannot compute saliency of an empty image".into()));
    }
    let (w, h) = image.dims();
    let (sw, sh) = if w >= h {
        (STANDIN_RESOLUTION, ((h * STANDIN_RESOLUTION) as f64 / w as f64).round().max(1.0) as usize)
    } else {
        (((w * STANDIN_RESOLUTION) as f64 / h as f64).round().max(1.0) as usize, STANDIN_RESOLUTION)
    };
    let shrink = w as f64 / sw as f64;
    let mut energy = vec![0.0f32; sw * sh];
    for plane in image.planes() {
        let plane = if shrink > 1.0 {
            gaussian_blur(&plane, w, h, 0.5 * shrink, Border::Clamp)
        } else {
            plane
        };
        let small = resize_plane(&plane, w, h, sw, sh);
        // Mirrored to twice the size so the periodic transform sees no seam.
        let (mw, mh) = (2 * sw, 2 * sh);
        let mirrored: Vec<f32> = (0..mh)
            .flat_map(|y| {
                let sy = if y < sh { y } else { mh - 1 - y };
                let row = &small[sy * sw..(sy + 1) * sw];
                (0..mw).map(move |x| row[if x < sw { x } else { mw - 1 - x }])
            })
            .collect();
        let full = residual_energy(&mirrored, mw, mh);
        for y in 0..sh {
            for x in 0..sw {
                energy[y * sw + x] += full[y * mw + x];
            }
        }
    }
    if energy.iter().all(|&e| e == 0.0) {
        return Ok(SaliencyMap::constant(w, h, 0.0));
    }
    let smooth = gaussian_blur(&energy, sw, sh, STANDIN_BLUR_SIGMA, Border::Clamp);
    let full = resize_plane(&smooth, sw, sh, w, h);
    SaliencyMap::normalized(w, h, full)
}
