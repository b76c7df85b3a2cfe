//! Pixel-grid types shared by every stage of the pipeline.
//!
//! All samples live in `[0, 1]`; 8-bit quantization happens only at file
//! boundaries and inside the metric threshold sweep.

use std::collections::VecDeque;

use crate::{Error, Result};

/// A row-major image with one (gray) or three (RGB) channels.
#[derive(Debug, Clone, PartialEq)]
pub struct Raster {
    width: usize,
    height: usize,
    channels: usize,
    data: Vec<f32>,
}

impl Raster {
    pub fn new(width: usize, height: usize, channels: usize, data: Vec<f32>) -> Result<Self> {
        if channels != 1 && channels != 3 {
            return Err(Error::InvalidInput(format!(
                "raster must have 1 or 3 channels, got {channels}"
            )));
        }
        if data.len() != width * height * channels {
            return Err(Error::InvalidInput(format!(
                "raster data length {} does not match {width}x{height}x{channels}",
                data.len()
            )));
        }
        if let Some(v) = data.iter().find(|v| !v.is_finite() || **v < 0.0 || **v > 1.0) {
            return Err(Error::InvalidInput(format!(
                "raster sample {v} outside [0, 1]"
            )));
        }
        Ok(Raster {
            width,
            height,
            channels,
            data,
        })
    }

    /// Single-channel raster from a per-pixel function; values are clamped to `[0, 1]`.
    pub fn gray_from_fn(width: usize, height: usize, f: impl Fn(usize, usize) -> f32) -> Self {
        let mut data = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                data.push(f(x, y).clamp(0.0, 1.0));
            }
        }
        Raster {
            width,
            height,
            channels: 1,
            data,
        }
    }

    /// Three-channel raster from a per-pixel function; values are clamped to `[0, 1]`.
    pub fn rgb_from_fn(width: usize, height: usize, f: impl Fn(usize, usize) -> [f32; 3]) -> Self {
        let mut data = Vec::with_capacity(width * height * 3);
        for y in 0..height {
            for x in 0..width {
                data.extend(f(x, y).iter().map(|v| v.clamp(0.0, 1.0)));
            }
        }
        Raster {
            width,
            height,
            channels: 3,
            data,
        }
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

    pub fn dims(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    pub fn data(&self) -> &[f32] {
        &self.data
    }

    pub fn is_empty(&self) -> bool {
        self.width == 0 || self.height == 0
    }

    pub fn sample(&self, x: usize, y: usize, c: usize) -> f32 {
        self.data[(y * self.width + x) * self.channels + c]
    }

    /// One plane per channel, each `width * height` long.
    pub fn planes(&self) -> Vec<Vec<f32>> {
        (0..self.channels)
            .map(|c| self.data.iter().skip(c).step_by(self.channels).copied().collect())
            .collect()
    }

    /// Luma plane (Rec. 601 weights for RGB, identity for gray).
    pub fn to_gray(&self) -> Vec<f32> {
        match self.channels {
            1 => self.data.clone(),
            _ => self
                .data
                .chunks_exact(3)
                .map(|p| (0.299 * p[0] + 0.587 * p[1] + 0.114 * p[2]).clamp(0.0, 1.0))
                .collect(),
        }
    }
}

/// Per-pixel saliency in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SaliencyMap {
    width: usize,
    height: usize,
    values: Vec<f32>,
}

impl SaliencyMap {
    pub fn new(width: usize, height: usize, values: Vec<f32>) -> Result<Self> {
        if values.len() != width * height {
            return Err(Error::InvalidInput(format!(
                "map length {} does not match {width}x{height}",
                values.len()
            )));
        }
        if let Some(v) = values
            .iter()
            .find(|v| !v.is_finite() || **v < 0.0 || **v > 1.0)
        {
            return Err(Error::InvalidInput(format!("saliency value {v} outside [0, 1]")));
        }
        Ok(SaliencyMap {
            width,
            height,
            values,
        })
    }

    /// Min-max rescale arbitrary finite values into a map. A constant input
    /// yields an all-zero map.
    pub fn normalized(width: usize, height: usize, raw: Vec<f32>) -> Result<Self> {
        if raw.len() != width * height {
            return Err(Error::InvalidInput(format!(
                "map length {} does not match {width}x{height}",
                raw.len()
            )));
        }
        if raw.is_empty() {
            return Err(Error::InvalidInput("map has no pixels".into()));
        }
        if raw.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("map contains non-finite values".into()));
        }
        let (lo, hi) = raw
            .iter()
            .fold((f32::INFINITY, f32::NEG_INFINITY), |(lo, hi), &v| {
                (lo.min(v), hi.max(v))
            });
        let values = if hi > lo {
            let span = hi - lo;
            raw.into_iter()
                .map(|v| ((v - lo) / span).clamp(0.0, 1.0))
                .collect()
        } else {
            vec![0.0; raw.len()]
        };
        Ok(SaliencyMap {
            width,
            height,
            values,
        })
    }

    pub fn constant(width: usize, height: usize, value: f32) -> Self {
        SaliencyMap {
            width,
            height,
            values: vec![value.clamp(0.0, 1.0); width * height],
        }
    }

    pub fn from_fn(width: usize, height: usize, f: impl Fn(usize, usize) -> f32) -> Self {
        let mut values = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                values.push(f(x, y).clamp(0.0, 1.0));
            }
        }
        SaliencyMap {
            width,
            height,
            values,
        }
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

    pub fn values(&self) -> &[f32] {
        &self.values
    }

    pub fn get(&self, x: usize, y: usize) -> f32 {
        self.values[y * self.width + x]
    }

    /// Location of the maximum; ties resolve to the first pixel in row-major order.
    pub fn argmax(&self) -> (usize, usize) {
        let mut best = 0;
        for (i, &v) in self.values.iter().enumerate() {
            if v > self.values[best] {
                best = i;
            }
        }
        (best % self.width.max(1), best / self.width.max(1))
    }

    /// 8-bit quantization used by the metric threshold sweep.
    pub fn quantized(&self) -> Vec<u8> {
        self.values.iter().map(|&v| quantize(v)).collect()
    }
}

/// `round(255 * v)` clamped to a byte.
pub fn quantize(v: f32) -> u8 {
    (255.0 * v as f64).round().clamp(0.0, 255.0) as u8
}

/// Per-pixel object/background labeling.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BinaryMask {
    width: usize,
    height: usize,
    bits: Vec<bool>,
}

impl BinaryMask {
    pub fn new(width: usize, height: usize, bits: Vec<bool>) -> Result<Self> {
        if bits.len() != width * height {
            return Err(Error::InvalidInput(format!(
                "mask length {} does not match {width}x{height}",
                bits.len()
            )));
        }
        Ok(BinaryMask {
            width,
            height,
            bits,
        })
    }

    pub fn empty(width: usize, height: usize) -> Self {
        BinaryMask {
            width,
            height,
            bits: vec![false; width * height],
        }
    }

    pub fn full(width: usize, height: usize) -> Self {
        BinaryMask {
            width,
            height,
            bits: vec![true; width * height],
        }
    }

    pub fn from_fn(width: usize, height: usize, f: impl Fn(usize, usize) -> bool) -> Self {
        let mut bits = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                bits.push(f(x, y));
            }
        }
        BinaryMask {
            width,
            height,
            bits,
        }
    }

    /// Axis-aligned rectangle `[x0, x0 + w) x [y0, y0 + h)`, clipped to the grid.
    pub fn rect(width: usize, height: usize, x0: usize, y0: usize, w: usize, h: usize) -> Self {
        Self::from_fn(width, height, |x, y| {
            x >= x0 && x < x0 + w && y >= y0 && y < y0 + h
        })
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
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.bits.iter().any(|&b| b)
    }

    pub fn is_full(&self) -> bool {
        self.bits.iter().all(|&b| b)
    }

    pub fn intersection_count(&self, other: &BinaryMask) -> usize {
        self.bits
            .iter()
            .zip(&other.bits)
            .filter(|(a, b)| **a && **b)
            .count()
    }

    pub fn union_count(&self, other: &BinaryMask) -> usize {
        self.bits
            .iter()
            .zip(&other.bits)
            .filter(|(a, b)| **a || **b)
            .count()
    }

    pub fn complement(&self) -> BinaryMask {
        BinaryMask {
            width: self.width,
            height: self.height,
            bits: self.bits.iter().map(|b| !b).collect(),
        }
    }

    /// True when every set pixel of `self` is also set in `other`.
    pub fn is_subset_of(&self, other: &BinaryMask) -> bool {
        self.bits.iter().zip(&other.bits).all(|(a, b)| !*a || *b)
    }

    /// Inclusive bounding box `(x_min, y_min, x_max, y_max)`, `None` when empty.
    pub fn bounding_box(&self) -> Option<(usize, usize, usize, usize)> {
        let mut bb: Option<(usize, usize, usize, usize)> = None;
        for (i, _) in self.bits.iter().enumerate().filter(|(_, b)| **b) {
            let (x, y) = (i % self.width, i / self.width);
            bb = Some(match bb {
                None => (x, y, x, y),
                Some((x0, y0, x1, y1)) => (x0.min(x), y0.min(y), x1.max(x), y1.max(y)),
            });
        }
        bb
    }
}

pub(crate) fn check_dims(expected: (usize, usize), actual: (usize, usize)) -> Result<()> {
    if expected != actual {
        return Err(Error::DimensionMismatch { expected, actual });
    }
    Ok(())
}

/// Min-max rescale to `[0, 1]`; constant maps become all zeros.
pub fn normalize_map(map: &SaliencyMap) -> SaliencyMap {
    SaliencyMap::normalized(map.width, map.height, map.values.clone())
        .expect("a valid saliency map is finite")
}

/// Bilinear resampling with pixel-center alignment and edge clamping.
pub fn resize_bilinear(map: &SaliencyMap, width: usize, height: usize) -> Result<SaliencyMap> {
    if width == 0 || height == 0 {
        return Err(Error::InvalidArgument(format!(
            "resize target {width}x{height} has a zero dimension"
        )));
    }
    if map.width == 0 || map.height == 0 {
        return Err(Error::InvalidInput("cannot resize an empty map".into()));
    }
    let values = resize_plane(&map.values, map.width, map.height, width, height)
        .into_iter()
        .map(|v| v.clamp(0.0, 1.0))
        .collect();
    Ok(SaliencyMap {
        width,
        height,
        values,
    })
}

pub(crate) fn resize_plane(src: &[f32], sw: usize, sh: usize, dw: usize, dh: usize) -> Vec<f32> {
    if sw == dw && sh == dh {
        return src.to_vec();
    }
    let axis = |dst: usize, dn: usize, sn: usize| -> (usize, usize, f32) {
        let pos = ((dst as f64 + 0.5) * sn as f64 / dn as f64 - 0.5).clamp(0.0, (sn - 1) as f64);
        let i0 = pos.floor() as usize;
        let i1 = (i0 + 1).min(sn - 1);
        (i0, i1, (pos - i0 as f64) as f32)
    };
    let xs: Vec<_> = (0..dw).map(|x| axis(x, dw, sw)).collect();
    let mut out = Vec::with_capacity(dw * dh);
    for y in 0..dh {
        let (y0, y1, fy) = axis(y, dh, sh);
        let r0 = &src[y0 * sw..(y0 + 1) * sw];
        let r1 = &src[y1 * sw..(y1 + 1) * sw];
        for &(x0, x1, fx) in &xs {
            let top = r0[x0] + (r0[x1] - r0[x0]) * fx;
            let bottom = r1[x0] + (r1[x1] - r1[x0]) * fx;
            out.push(top + (bottom - top) * fy);
        }
    }
    out
}

/// How a convolution treats samples outside the grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Border {
    /// Repeat the nearest edge sample.
    Clamp,
    /// Treat outside samples as zero.
    Zero,
}

/// Normalized 1-D Gaussian with radius `ceil(4 sigma)`.
pub fn gaussian_kernel(sigma: f64) -> Vec<f32> {
    let radius = (4.0 * sigma).ceil().max(1.0) as i64;
    let k: Vec<f64> = (-radius..=radius)
        .map(|i| (-((i * i) as f64) / (2.0 * sigma * sigma)).exp())
        .collect();
    let sum: f64 = k.iter().sum();
    k.into_iter().map(|v| (v / sum) as f32).collect()
}

/// Separable Gaussian blur of a single plane. `sigma <= 0` returns a copy.
pub fn gaussian_blur(plane: &[f32], width: usize, height: usize, sigma: f64, border: Border) -> Vec<f32> {
    if sigma <= 0.0 || plane.is_empty() {
        return plane.to_vec();
    }
    let kernel = gaussian_kernel(sigma);
    let radius = (kernel.len() / 2) as isize;
    let tap = |line: &[f32], n: usize, i: isize| -> f32 {
        if i >= 0 && (i as usize) < n {
            line[i as usize]
        } else {
            match border {
                Border::Clamp => line[i.clamp(0, n as isize - 1) as usize],
                Border::Zero => 0.0,
            }
        }
    };

    let mut tmp = vec![0.0f32; plane.len()];
    for y in 0..height {
        let row = &plane[y * width..(y + 1) * width];
        for x in 0..width {
            let mut acc = 0.0f32;
            for (j, &w) in kernel.iter().enumerate() {
                acc += w * tap(row, width, x as isize + j as isize - radius);
            }
            tmp[y * width + x] = acc;
        }
    }

    let mut out = vec![0.0f32; plane.len()];
    let mut column = vec![0.0f32; height];
    for x in 0..width {
        for y in 0..height {
            column[y] = tmp[y * width + x];
        }
        for y in 0..height {
            let mut acc = 0.0f32;
            for (j, &w) in kernel.iter().enumerate() {
                acc += w * tap(&column, height, y as isize + j as isize - radius);
            }
            out[y * width + x] = acc;
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Connectivity {
    Four,
    Eight,
}

impl Connectivity {
    fn offsets(self) -> &'static [(isize, isize)] {
        match self {
            Connectivity::Four => &[(1, 0), (-1, 0), (0, 1), (0, -1)],
            Connectivity::Eight => &[
                (1, 0),
                (-1, 0),
                (0, 1),
                (0, -1),
                (1, 1),
                (1, -1),
                (-1, 1),
                (-1, -1),
            ],
        }
    }
}

/// Connected regions of a mask. Background pixels carry label 0; components
/// are numbered `1..=count` in row-major order of their first pixel.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Components {
    pub width: usize,
    pub height: usize,
    pub labels: Vec<u32>,
    pub count: usize,
}

impl Components {
    /// Pixel count per component, indexed by `label - 1`.
    pub fn sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.count];
        for &l in self.labels.iter().filter(|&&l| l > 0) {
            sizes[l as usize - 1] += 1;
        }
        sizes
    }
}

fn flood(
    width: usize,
    height: usize,
    seeds: impl IntoIterator<Item = usize>,
    offsets: &[(isize, isize)],
    mut admit: impl FnMut(usize) -> bool,
) {
    let mut queue: VecDeque<usize> = seeds.into_iter().collect();
    while let Some(i) = queue.pop_front() {
        let (x, y) = ((i % width) as isize, (i / width) as isize);
        for &(dx, dy) in offsets {
            let (nx, ny) = (x + dx, y + dy);
            if nx < 0 || ny < 0 || nx >= width as isize || ny >= height as isize {
                continue;
            }
            let n = ny as usize * width + nx as usize;
            if admit(n) {
                queue.push_back(n);
            }
        }
    }
}

pub fn connected_components(mask: &BinaryMask, connectivity: Connectivity) -> Components {
    let (w, h) = mask.dims();
    let mut labels = vec![0u32; w * h];
    let mut count = 0u32;
    for start in 0..w * h {
        if !mask.bits[start] || labels[start] != 0 {
            continue;
        }
        count += 1;
        labels[start] = count;
        flood(w, h, [start], connectivity.offsets(), |n| {
            if mask.bits[n] && labels[n] == 0 {
                labels[n] = count;
                true
            } else {
                false
            }
        });
    }
    Components {
        width: w,
        height: h,
        labels,
        count: count as usize,
    }
}

/// Sets every background pixel that is not 4-connected to the image border.
pub fn fill_holes(mask: &BinaryMask) -> BinaryMask {
    let (w, h) = mask.dims();
    let mut outside = vec![false; w * h];
    let border = (0..w * h).filter(|&i| {
        let (x, y) = (i % w, i / w);
        x == 0 || y == 0 || x + 1 == w || y + 1 == h
    });
    let seeds: Vec<usize> = border.filter(|&i| !mask.bits[i]).collect();
    for &s in &seeds {
        outside[s] = true;
    }
    flood(w, h, seeds, Connectivity::Four.offsets(), |n| {
        if !mask.bits[n] && !outside[n] {
            outside[n] = true;
            true
        } else {
            false
        }
    });
    BinaryMask {
        width: w,
        height: h,
        bits: outside.into_iter().map(|o| !o).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn map(values: &[f32], w: usize, h: usize) -> SaliencyMap {
        SaliencyMap::new(w, h, values.to_vec()).unwrap()
    }

    #[test]
    fn normalize_affine_rescale() {
        let out = normalize_map(&map(&[0.2, 0.4, 0.6], 3, 1));
        let expected = [0.0, 0.5, 1.0];
        for (a, b) in out.values().iter().zip(expected) {
            assert!((a - b).abs() < 1e-6, "{a} vs {b}");
        }
    }

    #[test]
    fn normalize_constant_is_zero() {
        let out = normalize_map(&map(&[0.7, 0.7], 2, 1));
        assert_eq!(out.values(), &[0.0, 0.0]);
    }

    #[test]
    fn normalize_identity_on_unit_range() {
        let out = normalize_map(&map(&[0.0, 1.0], 2, 1));
        assert_eq!(out.values(), &[0.0, 1.0]);
    }

    #[test]
    fn normalized_rejects_non_finite() {
        let err = SaliencyMap::normalized(2, 1, vec![0.0, f32::NAN]).unwrap_err();
        assert!(matches!(err, Error::InvalidInput(_)));
    }

    #[test]
    fn resize_identity_and_constant() {
        let m = map(&[0.1, 0.2, 0.3, 0.4], 2, 2);
        assert_eq!(resize_bilinear(&m, 2, 2).unwrap(), m);

        let c = SaliencyMap::constant(3, 5, 0.5);
        let r = resize_bilinear(&c, 17, 4).unwrap();
        assert_eq!(r.dims(), (17, 4));
        assert!(r.values().iter().all(|&v| (v - 0.5).abs() < 1e-6));
    }

    #[test]
    fn resize_two_pixel_ramp() {
        // Pixel centers at source coords -0.25, 0.25, 0.75, 1.25 → 0, 0.25, 0.75, 1.
        let r = resize_bilinear(&map(&[0.0, 1.0], 2, 1), 4, 1).unwrap();
        let expected = [0.0, 0.25, 0.75, 1.0];
        for (a, b) in r.values().iter().zip(expected) {
            assert!((a - b).abs() < 1e-6);
        }
        let col = resize_bilinear(&map(&[0.0, 1.0], 1, 2), 1, 4).unwrap();
        assert!(col.values().windows(2).all(|p| p[0] <= p[1]));
    }

    #[test]
    fn resize_zero_target_rejected() {
        let err = resize_bilinear(&map(&[0.0], 1, 1), 0, 3).unwrap_err();
        assert!(matches!(err, Error::InvalidArgument(_)));
    }

    #[test]
    fn components_examples() {
        assert_eq!(connected_components(&BinaryMask::empty(5, 5), Connectivity::Eight).count, 0);

        let mut m = BinaryMask::rect(8, 8, 0, 0, 2, 2);
        for (x, y) in [(5, 5), (6, 5), (5, 6), (6, 6)] {
            m.set(x, y, true);
        }
        let cc = connected_components(&m, Connectivity::Eight);
        assert_eq!(cc.count, 2);
        assert_eq!(cc.sizes(), vec![4, 4]);

        let single = BinaryMask::rect(4, 4, 2, 1, 1, 1);
        let cc = connected_components(&single, Connectivity::Four);
        assert_eq!(cc.count, 1);
        assert_eq!(cc.sizes(), vec![1]);
    }

    #[test]
    fn diagonal_pixels_depend_on_connectivity() {
        let m = BinaryMask::from_fn(3, 3, |x, y| x == y);
        assert_eq!(connected_components(&m, Connectivity::Four).count, 3);
        assert_eq!(connected_components(&m, Connectivity::Eight).count, 1);
    }

    #[test]
    fn fill_interior_hole() {
        let mut m = BinaryMask::rect(9, 9, 2, 2, 5, 5);
        m.set(4, 4, false);
        let filled = fill_holes(&m);
        assert_eq!(filled, BinaryMask::rect(9, 9, 2, 2, 5, 5));
    }

    #[test]
    fn border_background_is_not_a_hole() {
        // U shape opening onto the top border.
        let m = BinaryMask::from_fn(7, 7, |x, y| (1..=5).contains(&x) && y <= 5 && !(x == 3 && y <= 3));
        assert_eq!(fill_holes(&m), m);
        assert_eq!(fill_holes(&BinaryMask::full(4, 3)), BinaryMask::full(4, 3));
    }

    #[test]
    fn diagonal_gap_does_not_leak() {
        // Ring closed only through diagonal contacts still encloses its center.
        let m = BinaryMask::from_fn(5, 5, |x, y| {
            matches!((x, y), (2, 1) | (1, 2) | (3, 2) | (2, 3))
        });
        assert!(fill_holes(&m).get(2, 2));
    }

    #[test]
    fn gaussian_blur_preserves_constant_with_clamp() {
        let plane = vec![0.3f32; 20 * 10];
        let out = gaussian_blur(&plane, 20, 10, 2.0, Border::Clamp);
        assert!(out.iter().all(|v| (v - 0.3).abs() < 1e-5));
    }

    fn flood_count(mask: &BinaryMask) -> usize {
        // Recursive-stack flood fill, independent of the queue-based labeling.
        let (w, h) = mask.dims();
        let mut seen = vec![false; w * h];
        let mut count = 0;
        for s in 0..w * h {
            if !mask.bits()[s] || seen[s] {
                continue;
            }
            count += 1;
            let mut stack = vec![s];
            seen[s] = true;
            while let Some(i) = stack.pop() {
                let (x, y) = (i % w, i / w);
                for ny in y.saturating_sub(1)..=(y + 1).min(h - 1) {
                    for nx in x.saturating_sub(1)..=(x + 1).min(w - 1) {
                        let n = ny * w + nx;
                        if mask.bits()[n] && !seen[n] {
                            seen[n] = true;
                            stack.push(n);
                        }
                    }
                }
            }
        }
        count
    }

    fn arb_mask() -> impl Strategy<Value = BinaryMask> {
        proptest::collection::vec(any::<bool>(), 256)
            .prop_map(|bits| BinaryMask::new(16, 16, bits).unwrap())
    }

    proptest! {
        #[test]
        fn components_match_flood_oracle(mask in arb_mask()) {
            let cc = connected_components(&mask, Connectivity::Eight);
            prop_assert_eq!(cc.count, flood_count(&mask));
            for (l, b) in cc.labels.iter().zip(mask.bits()) {
                prop_assert_eq!(*l > 0, *b);
            }
        }

        #[test]
        fn fill_holes_idempotent_and_monotone(mask in arb_mask()) {
            let once = fill_holes(&mask);
            prop_assert!(mask.is_subset_of(&once));
            prop_assert_eq!(fill_holes(&once), once);
        }

        #[test]
        fn normalize_idempotent(values in proptest::collection::vec(0.0f32..=1.0, 2..40)) {
            let n = values.len();
            let m = SaliencyMap::new(n, 1, values).unwrap();
            let once = normalize_map(&m);
            let twice = normalize_map(&once);
            for (a, b) in once.values().iter().zip(twice.values()) {
                prop_assert!((a - b).abs() < 1e-5);
            }
        }
    }
}
