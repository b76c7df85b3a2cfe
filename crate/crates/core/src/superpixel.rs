//! Graph-based superpixel segmentation (Felzenszwalb–Huttenlocher).
//!
//! Pixels are nodes of an 8-neighborhood grid graph weighted by the Euclidean
//! color distance after Gaussian smoothing. Edges are visited in ascending
//! order and two components merge when the connecting weight does not exceed
//! either component's internal difference plus `k / |C|`. A final pass absorbs
//! components smaller than `min_size` into the neighbor they share the
//! cheapest edge with.
//!
//! Samples are rescaled to the 0–255 range before weighting, so `k` has its
//! customary meaning (the default of 300 is usable as is).

use serde::{Deserialize, Serialize};

use crate::raster::{check_dims, gaussian_blur, BinaryMask, Border, Raster};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SegmentationParams {
    /// Gaussian pre-smoothing standard deviation in pixels; 0 disables smoothing.
    pub sigma: f64,
    /// Scale coefficient on the 0–255 intensity scale.
    pub k: f64,
    /// Minimum segment size in pixels.
    pub min_size: usize,
}

impl Default for SegmentationParams {
    fn default() -> Self {
        SegmentationParams {
            sigma: 1.0,
            k: 300.0,
            min_size: 60,
        }
    }
}

impl SegmentationParams {
    pub fn new(sigma: f64, k: f64, min_size: usize) -> Result<Self> {
        let p = SegmentationParams { sigma, k, min_size };
        p.validate()?;
        Ok(p)
    }

    /// Over-segmenting regime (σ=1, K=100, min=20).
    pub fn fine() -> Self {
        SegmentationParams {
            sigma: 1.0,
            k: 100.0,
            min_size: 20,
        }
    }

    /// Under-segmenting regime (σ=1, K=1000, min=800).
    pub fn coarse() -> Self {
        SegmentationParams {
            sigma: 1.0,
            k: 1000.0,
            min_size: 800,
        }
    }

    /// Intermediate regime (σ=1, K=500, min=50).
    pub fn alternate() -> Self {
        SegmentationParams {
            sigma: 1.0,
            k: 500.0,
            min_size: 50,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.sigma >= 0.0 && self.sigma.is_finite()) {
            return Err(Error::InvalidArgument(format!("sigma must be >= 0, got {}", self.sigma)));
        }
        if !(self.k > 0.0 && self.k.is_finite()) {
            return Err(Error::InvalidArgument(format!("k must be > 0, got {}", self.k)));
        }
        if self.min_size < 1 {
            return Err(Error::InvalidArgument("min_size must be >= 1".into()));
        }
        Ok(())
    }
}

/// Partition of the pixel grid into labeled regions `0..segment_count`.
///
/// Labels are numbered in row-major order of each region's first pixel.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SuperpixelLabeling {
    width: usize,
    height: usize,
    labels: Vec<u32>,
    segment_count: usize,
}

impl SuperpixelLabeling {
    /// Builds a labeling from arbitrary region ids, renumbering them canonically.
    pub fn from_raw(width: usize, height: usize, raw: &[u32]) -> Result<Self> {
        if raw.len() != width * height {
            return Err(Error::InvalidInput(format!(
                "label count {} does not match {width}x{height}",
                raw.len()
            )));
        }
        let mut remap = std::collections::HashMap::new();
        let labels = raw
            .iter()
            .map(|&r| {
                let next = remap.len() as u32;
                *remap.entry(r).or_insert(next)
            })
            .collect();
        Ok(SuperpixelLabeling {
            width,
            height,
            labels,
            segment_count: remap.len(),
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

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn label(&self, x: usize, y: usize) -> u32 {
        self.labels[y * self.width + x]
    }

    pub fn segment_count(&self) -> usize {
        self.segment_count
    }

    /// Pixel count per label.
    pub fn sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.segment_count];
        for &l in &self.labels {
            sizes[l as usize] += 1;
        }
        sizes
    }

    /// Mask of the pixels carrying `label`.
    pub fn region(&self, label: u32) -> BinaryMask {
        BinaryMask::new(
            self.width,
            self.height,
            self.labels.iter().map(|&l| l == label).collect(),
        )
        .expect("labeling dimensions are consistent")
    }

    /// Per-label flag: does the region reach row 0, the last row, column 0 or the last column?
    pub fn touches_border(&self) -> Vec<bool> {
        let (w, h) = (self.width, self.height);
        let mut touches = vec![false; self.segment_count];
        for x in 0..w {
            touches[self.labels[x] as usize] = true;
            touches[self.labels[(h - 1) * w + x] as usize] = true;
        }
        for y in 0..h {
            touches[self.labels[y * w] as usize] = true;
            touches[self.labels[y * w + w - 1] as usize] = true;
        }
        touches
    }
}

struct DisjointSet {
    parent: Vec<u32>,
    rank: Vec<u8>,
    size: Vec<u32>,
    threshold: Vec<f32>,
}

impl DisjointSet {
    fn new(n: usize, initial_threshold: f32) -> Self {
        DisjointSet {
            parent: (0..n as u32).collect(),
            rank: vec![0; n],
            size: vec![1; n],
            threshold: vec![initial_threshold; n],
        }
    }

    fn find(&mut self, mut x: u32) -> u32 {
        let mut root = x;
        while self.parent[root as usize] != root {
            root = self.parent[root as usize];
        }
        while self.parent[x as usize] != root {
            let next = self.parent[x as usize];
            self.parent[x as usize] = root;
            x = next;
        }
        root
    }

    /// Union by rank; returns the surviving root.
    fn join(&mut self, a: u32, b: u32) -> u32 {
        let (a, b) = (a as usize, b as usize);
        let (root, child) = if self.rank[a] < self.rank[b] { (b, a) } else { (a, b) };
        if self.rank[a] == self.rank[b] {
            self.rank[root] += 1;
        }
        self.parent[child] = root as u32;
        self.size[root] += self.size[child];
        root as u32
    }
}

#[derive(Clone, Copy)]
struct Edge {
    weight: f32,
    a: u32,
    b: u32,
}

fn build_edges(planes: &[Vec<f32>], width: usize, height: usize) -> Vec<Edge> {
    let diff = |i: usize, j: usize| -> f32 {
        planes
            .iter()
            .map(|p| {
                let d = p[i] - p[j];
                d * d
            })
            .sum::<f32>()
            .sqrt()
    };
    let mut edges = Vec::with_capacity(width * height * 4);
    for y in 0..height {
        for x in 0..width {
            let i = y * width + x;
            let mut push = |j: usize| {
                edges.push(Edge {
                    weight: diff(i, j),
                    a: i as u32,
                    b: j as u32,
                })
            };
            // Ascending destination index, so generation order is (src, dst) order.
            if x + 1 < width && y > 0 {
                push(i - width + 1);
            }
            if x + 1 < width {
                push(i + 1);
            }
            if y + 1 < height {
                push(i + width);
            }
            if x + 1 < width && y + 1 < height {
                push(i + width + 1);
            }
        }
    }
    edges
}

/// Segments `image` into superpixels. Deterministic: edges are ordered by
/// weight, then source pixel index, then destination pixel index.
pub fn segment(image: &Raster, params: &SegmentationParams) -> Result<SuperpixelLabeling> {
    params.validate()?;
    if image.is_empty() {
        return Err(Error::InvalidInput("cannot segment an empty image".into()));
    }
    let (w, h) = image.dims();
    if (w * h) as u64 * 4 > u32::MAX as u64 {
        return Err(Error::InvalidInput(format!("image of {w}x{h} pixels is too large to segment")));
    }
    let planes: Vec<Vec<f32>> = image
        .planes()
        .into_iter()
        .map(|p| {
            let scaled: Vec<f32> = p.into_iter().map(|v| v * 255.0).collect();
            gaussian_blur(&scaled, w, h, params.sigma, Border::Clamp)
        })
        .collect();

    let unsorted = build_edges(&planes, w, h);
    // Weights are non-negative, so their bit patterns sort like the values.
    let mut keys: Vec<u64> = unsorted
        .iter()
        .enumerate()
        .map(|(i, e)| (e.weight.to_bits() as u64) << 32 | i as u64)
        .collect();
    keys.sort_unstable();
    let edges: Vec<Edge> = keys.iter().map(|&k| unsorted[(k & 0xffff_ffff) as usize]).collect();

    let k = params.k as f32;
    let mut set = DisjointSet::new(w * h, k);
    for e in &edges {
        let a = set.find(e.a);
        let b = set.find(e.b);
        if a != b && e.weight <= set.threshold[a as usize] && e.weight <= set.threshold[b as usize] {
            let root = set.join(a, b);
            set.threshold[root as usize] = e.weight + k / set.size[root as usize] as f32;
        }
    }

    let min_size = params.min_size as u32;
    for e in &edges {
        let a = set.find(e.a);
        let b = set.find(e.b);
        if a != b && (set.size[a as usize] < min_size || set.size[b as usize] < min_size) {
            set.join(a, b);
        }
    }

    let roots: Vec<u32> = (0..(w * h) as u32).map(|i| set.find(i)).collect();
    SuperpixelLabeling::from_raw(w, h, &roots)
}

/// Number of distinct labels with at least one pixel inside `mask`.
pub fn count_superpixels_in(labeling: &SuperpixelLabeling, mask: &BinaryMask) -> Result<usize> {
    check_dims(labeling.dims(), mask.dims())?;
    let mut seen = vec![false; labeling.segment_count()];
    for (&l, &b) in labeling.labels().iter().zip(mask.bits()) {
        if b {
            seen[l as usize] = true;
        }
    }
    Ok(seen.into_iter().filter(|&s| s).count())
}
