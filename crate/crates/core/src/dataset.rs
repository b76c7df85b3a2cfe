//! Dataset manifests and the dataset statistics suite.
//!
//! A manifest is a TOML document with one `[[entry]]` table per image:
//!
//! ```toml
//! [[entry]]
//! id = "img01"                      # optional, defaults to the image file stem
//! image = "images/img01.jpg"
//! mask = "masks/img01.png"          # most-salient-object ground truth
//! fixations = "fixations/img01.csv" # optional
//! annotations = ["ann/img01_a.png", "ann/img01_b.png"]   # optional
//! instances = [{ mask = "inst/img01_0.png", order = 1 }] # optional
//! ```
//!
//! Relative paths resolve against the manifest's directory.

use std::collections::HashSet;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::frontend::{fixation_map, FixationSet, DEFAULT_BLUR_SIGMA};
use crate::metrics::agreement;
use crate::raster::{check_dims, quantize, resize_plane, BinaryMask, Raster, SaliencyMap};
use crate::superpixel::{count_superpixels_in, segment, SegmentationParams};
use crate::{Error, Result};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ManifestFile {
    #[serde(default, rename = "entry")]
    entries: Vec<RawEntry>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEntry {
    id: Option<String>,
    image: PathBuf,
    mask: Option<PathBuf>,
    fixations: Option<PathBuf>,
    #[serde(default)]
    annotations: Vec<PathBuf>,
    #[serde(default)]
    instances: Vec<RawInstance>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawInstance {
    mask: PathBuf,
    order: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InstanceRef {
    pub mask: PathBuf,
    /// Position in which the object was annotated (1 = first).
    pub order: u32,
}

/// One manifest entry with paths already resolved.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Entry {
    pub id: String,
    pub image: PathBuf,
    pub mask: Option<PathBuf>,
    pub fixations: Option<PathBuf>,
    pub annotations: Vec<PathBuf>,
    pub instances: Vec<InstanceRef>,
}

impl Entry {
    pub fn referenced_files(&self) -> Vec<&Path> {
        let mut files = vec![self.image.as_path()];
        files.extend(self.mask.as_deref());
        files.extend(self.fixations.as_deref());
        files.extend(self.annotations.iter().map(PathBuf::as_path));
        files.extend(self.instances.iter().map(|i| i.mask.as_path()));
        files
    }

    /// First referenced file that does not exist.
    pub fn missing_file(&self) -> Option<&Path> {
        self.referenced_files().into_iter().find(|p| !p.exists())
    }

    /// Loads every referenced file, checking that all rasters share dimensions.
    pub fn load(&self) -> Result<LoadedEntry> {
        if let Some(missing) = self.missing_file() {
            return Err(Error::io(
                missing,
                std::io::Error::new(std::io::ErrorKind::NotFound, "file not found"),
            ));
        }
        let image = crate::io::load_raster(&self.image)?;
        let dims = image.dims();
        let load_mask = |p: &Path| -> Result<BinaryMask> {
            let m = crate::io::load_mask(p)?;
            check_dims(dims, m.dims()).map_err(|e| Error::parse(p, e.to_string()))?;
            Ok(m)
        };
        let mask = self.mask.as_deref().map(load_mask).transpose()?;
        let fixations = self
            .fixations
            .as_deref()
            .map(|p| FixationSet::from_csv(p, dims.0, dims.1))
            .transpose()?;
        let annotations = self.annotations.iter().map(|p| load_mask(p)).collect::<Result<_>>()?;
        let mut instances = self
            .instances
            .iter()
            .map(|i| Ok((i.order, load_mask(&i.mask)?)))
            .collect::<Result<Vec<_>>>()?;
        instances.sort_by_key(|(order, _)| *order);
        Ok(LoadedEntry {
            id: self.id.clone(),
            image,
            mask,
            fixations,
            annotations,
            instances,
        })
    }
}

#[derive(Debug, Clone)]
pub struct LoadedEntry {
    pub id: String,
    pub image: Raster,
    pub mask: Option<BinaryMask>,
    pub fixations: Option<FixationSet>,
    pub annotations: Vec<BinaryMask>,
    /// `(annotation order, mask)` sorted by order.
    pub instances: Vec<(u32, BinaryMask)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DatasetManifest {
    pub root: PathBuf,
    pub entries: Vec<Entry>,
}

impl DatasetManifest {
    /// Parses a manifest. Referenced files are not touched.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let root = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Self::parse(&text, &root).map_err(|e| match e {
            Error::InvalidInput(msg) => Error::parse(path, msg),
            other => other,
        })
    }

    /// Parses a manifest and fails on the first referenced file that is missing.
    pub fn load_strict(path: &Path) -> Result<Self> {
        let manifest = Self::load(path)?;
        for entry in &manifest.entries {
            if let Some(missing) = entry.missing_file() {
                return Err(Error::io(
                    missing,
                    std::io::Error::new(std::io::ErrorKind::NotFound, "referenced file not found"),
                ));
            }
        }
        Ok(manifest)
    }

    pub fn parse(text: &str, root: &Path) -> Result<Self> {
        let file: ManifestFile = toml::from_str(text).map_err(|e| Error::InvalidInput(e.to_string()))?;
        let resolve = |p: PathBuf| if p.is_absolute() { p } else { root.join(p) };
        let mut seen = HashSet::new();
        let mut entries = Vec::with_capacity(file.entries.len());
        for raw in file.entries {
            let id = raw.id.unwrap_or_else(|| {
                raw.image
                    .file_stem()
                    .map(|s| s.to_string_lossy().into_owned())
                    .unwrap_or_default()
            });
            if !seen.insert(id.clone()) {
                return Err(Error::InvalidInput(format!("duplicate entry id {id:?}")));
            }
            entries.push(Entry {
                id,
                image: resolve(raw.image),
                mask: raw.mask.map(resolve),
                fixations: raw.fixations.map(resolve),
                annotations: raw.annotations.into_iter().map(resolve).collect(),
                instances: raw
                    .instances
                    .into_iter()
                    .map(|i| InstanceRef {
                        mask: resolve(i.mask),
                        order: i.order,
                    })
                    .collect(),
            });
        }
        Ok(DatasetManifest {
            root: root.to_path_buf(),
            entries,
        })
    }
}

/// Index of the most salient instance: the one containing the fixation-map
/// peak, otherwise the one holding the largest share of fixation mass.
pub fn most_salient_object(instances: &[BinaryMask], fixmap: &SaliencyMap) -> Result<usize> {
    if instances.is_empty() {
        return Err(Error::EmptyInput("no object instances".into()));
    }
    for m in instances {
        check_dims(fixmap.dims(), m.dims())?;
    }
    let (px, py) = fixmap.argmax();
    if let Some(i) = instances.iter().position(|m| m.get(px, py)) {
        return Ok(i);
    }
    let mut best = (0, f64::NEG_INFINITY);
    for (i, m) in instances.iter().enumerate() {
        let mass = fixation_mass_ratio(m, fixmap)?;
        if mass > best.1 {
            best = (i, mass);
        }
    }
    Ok(best.0)
}

/// How the central Gaussian is cut at its top.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Truncation {
    /// Values above the level become zero, removing the central plateau.
    ZeroAbove(f64),
    /// Values above the level are clipped to it.
    ClipAt(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CenterBiasOptions {
    pub sigma: f64,
    /// Grid on which the Gaussian is built before resizing to the image.
    pub canonical: (usize, usize),
    pub truncation: Truncation,
}

impl Default for CenterBiasOptions {
    fn default() -> Self {
        CenterBiasOptions {
            sigma: 50.0,
            canonical: (400, 300),
            truncation: Truncation::ZeroAbove(0.95),
        }
    }
}

/// Truncated central Gaussian at image resolution.
pub fn center_bias_filter(width: usize, height: usize, opts: &CenterBiasOptions) -> Vec<f32> {
    let (cw, ch) = opts.canonical;
    let (cx, cy) = ((cw as f64 - 1.0) / 2.0, (ch as f64 - 1.0) / 2.0);
    let s2 = 2.0 * opts.sigma * opts.sigma;
    let mut grid = Vec::with_capacity(cw * ch);
    for y in 0..ch {
        for x in 0..cw {
            let d2 = (x as f64 - cx).powi(2) + (y as f64 - cy).powi(2);
            grid.push((-d2 / s2).exp() as f32);
        }
    }
    let peak = grid.iter().cloned().fold(0.0f32, f32::max);
    grid.iter_mut().for_each(|v| *v /= peak);
    let mut filter = resize_plane(&grid, cw, ch, width, height);
    for v in &mut filter {
        match opts.truncation {
            Truncation::ZeroAbove(level) if *v as f64 > level => *v = 0.0,
            Truncation::ClipAt(level) if *v as f64 > level => *v = level as f32,
            _ => {}
        }
    }
    filter
}

/// On-center when any object pixel meets a nonzero filter value. Filter
/// values are taken at 8-bit precision, so the far Gaussian tail counts as zero.
pub fn center_bias_classify(gt: &BinaryMask) -> Result<bool> {
    center_bias_classify_with(gt, &CenterBiasOptions::default())
}

pub fn center_bias_classify_with(gt: &BinaryMask, opts: &CenterBiasOptions) -> Result<bool> {
    if gt.is_empty() {
        return Err(Error::InvalidGroundTruth("object mask is empty".into()));
    }
    let filter = center_bias_filter(gt.width(), gt.height(), opts);
    Ok(gt.bits().iter().zip(&filter).any(|(&b, &f)| b && quantize(f) > 0))
}

/// Distance from the bounding-box center to the image center over half the
/// image diagonal, measured between pixel centers.
pub fn normalized_object_distance(gt: &BinaryMask) -> Result<f64> {
    let (x0, y0, x1, y1) = gt
        .bounding_box()
        .ok_or_else(|| Error::InvalidGroundTruth("object mask is empty".into()))?;
    let (w, h) = (gt.width() as f64 - 1.0, gt.height() as f64 - 1.0);
    let half_diag = (w * w + h * h).sqrt() / 2.0;
    if half_diag == 0.0 {
        return Ok(0.0);
    }
    let bx = (x0 + x1) as f64 / 2.0;
    let by = (y0 + y1) as f64 / 2.0;
    let d = ((bx - w / 2.0).powi(2) + (by - h / 2.0).powi(2)).sqrt();
    Ok((d / half_diag).clamp(0.0, 1.0))
}

pub fn size_ratio(gt: &BinaryMask) -> f64 {
    let total = gt.width() * gt.height();
    if total == 0 {
        0.0
    } else {
        gt.count() as f64 / total as f64
    }
}

/// Fraction of fixation points falling inside the instance.
pub fn fixation_ratio(instance: &BinaryMask, fixations: &FixationSet) -> Result<f64> {
    if fixations.is_empty() {
        return Err(Error::EmptyInput("fixation set is empty".into()));
    }
    check_dims(instance.dims(), fixations.dims())?;
    let inside = fixations
        .points()
        .iter()
        .filter(|p| {
            let (x, y) = p.pixel();
            instance.get(x, y)
        })
        .count();
    Ok(inside as f64 / fixations.len() as f64)
}

/// Share of total fixation-map mass inside the instance.
pub fn fixation_mass_ratio(instance: &BinaryMask, fixmap: &SaliencyMap) -> Result<f64> {
    check_dims(instance.dims(), fixmap.dims())?;
    let total: f64 = fixmap.values().iter().map(|&v| v as f64).sum();
    if total == 0.0 {
        return Ok(0.0);
    }
    let inside: f64 = fixmap
        .values()
        .iter()
        .zip(instance.bits())
        .filter(|(_, &b)| b)
        .map(|(&v, _)| v as f64)
        .sum();
    Ok(inside / total)
}

/// Fixation ratio per instance, ordered by annotation order.
pub fn fixation_ratio_by_rank(instances: &[(u32, BinaryMask)], fixations: &FixationSet) -> Result<Vec<f64>> {
    if instances.is_empty() {
        return Err(Error::EmptyInput("no object instances".into()));
    }
    let mut ordered: Vec<&(u32, BinaryMask)> = instances.iter().collect();
    ordered.sort_by_key(|(order, _)| *order);
    ordered.iter().map(|(_, m)| fixation_ratio(m, fixations)).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ObjectStats {
    pub normalized_distance: f64,
    pub size_ratio: f64,
    pub superpixels_object: usize,
    pub superpixels_background: usize,
    pub superpixels_all: usize,
    pub on_center: bool,
    /// `None` when the entry has no fixations.
    pub fixation_ratio: Option<f64>,
}

pub fn object_stats(
    image: &Raster,
    gt: &BinaryMask,
    fixations: Option<&FixationSet>,
    seg: &SegmentationParams,
) -> Result<ObjectStats> {
    check_dims(image.dims(), gt.dims())?;
    let labeling = segment(image, seg)?;
    Ok(ObjectStats {
        normalized_distance: normalized_object_distance(gt)?,
        size_ratio: size_ratio(gt),
        superpixels_object: count_superpixels_in(&labeling, gt)?,
        superpixels_background: count_superpixels_in(&labeling, &gt.complement())?,
        superpixels_all: labeling.segment_count(),
        on_center: center_bias_classify(gt)?,
        fixation_ratio: fixations.map(|f| fixation_ratio(gt, f)).transpose()?,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportRow {
    pub id: String,
    pub stats: ObjectStats,
    /// Mean pairwise annotation agreement, when at least two annotations exist.
    pub agreement: Option<f64>,
    /// Fixation ratio per instance in annotation order.
    pub rank_ratios: Option<Vec<f64>>,
    /// Index (in annotation order) of the instance under the fixation peak.
    pub most_salient_instance: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Histogram {
    pub name: String,
    /// `counts.len() + 1` bin edges.
    pub edges: Vec<f64>,
    pub counts: Vec<usize>,
}

impl Histogram {
    /// Bins over the given edges; values outside fall into the first or last bin.
    pub fn from_edges(name: &str, edges: Vec<f64>, values: impl IntoIterator<Item = f64>) -> Self {
        let bins = edges.len() - 1;
        let mut counts = vec![0; bins];
        for v in values {
            let i = edges[1..bins].partition_point(|&e| e <= v);
            counts[i] += 1;
        }
        Histogram {
            name: name.to_string(),
            edges,
            counts,
        }
    }

    pub fn uniform(name: &str, lo: f64, hi: f64, bins: usize, values: impl IntoIterator<Item = f64>) -> Self {
        let edges = (0..=bins).map(|i| lo + (hi - lo) * i as f64 / bins as f64).collect();
        Self::from_edges(name, edges, values)
    }

    pub fn log_spaced(name: &str, lo: f64, hi: f64, bins: usize, values: impl IntoIterator<Item = f64>) -> Self {
        let (a, b) = (lo.log10(), hi.log10());
        let edges = (0..=bins)
            .map(|i| 10f64.powf(a + (b - a) * i as f64 / bins as f64))
            .collect();
        Self::from_edges(name, edges, values)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DatasetReport {
    pub rows: Vec<ReportRow>,
    /// `(entry id, message)` for entries that could not be processed.
    pub errors: Vec<(String, String)>,
    pub histograms: Vec<Histogram>,
}

fn report_row(entry: &Entry, seg: &SegmentationParams, blur_sigma: f64) -> Result<ReportRow> {
    let loaded = entry.load()?;
    let gt = loaded
        .mask
        .as_ref()
        .ok_or_else(|| Error::InvalidGroundTruth(format!("entry {} has no mask", entry.id)))?;
    let stats = object_stats(&loaded.image, gt, loaded.fixations.as_ref(), seg)?;
    let agreement = if loaded.annotations.len() >= 2 {
        Some(agreement(&loaded.annotations)?)
    } else {
        None
    };
    let (rank_ratios, most_salient_instance) = match (&loaded.fixations, loaded.instances.is_empty()) {
        (Some(fix), false) if !fix.is_empty() => {
            let masks: Vec<BinaryMask> = loaded.instances.iter().map(|(_, m)| m.clone()).collect();
            let fixmap = fixation_map(fix, blur_sigma)?;
            (
                Some(fixation_ratio_by_rank(&loaded.instances, fix)?),
                Some(most_salient_object(&masks, &fixmap)?),
            )
        }
        _ => (None, None),
    };
    Ok(ReportRow {
        id: entry.id.clone(),
        stats,
        agreement,
        rank_ratios,
        most_salient_instance,
    })
}

/// Statistics for every manifest entry. Entries are processed in parallel on
/// the current rayon pool; rows keep manifest order and failures are
/// collected rather than aborting the batch.
pub fn dataset_report(manifest: &DatasetManifest, seg: &SegmentationParams) -> DatasetReport {
    dataset_report_with(manifest, seg, DEFAULT_BLUR_SIGMA)
}

pub fn dataset_report_with(manifest: &DatasetManifest, seg: &SegmentationParams, blur_sigma: f64) -> DatasetReport {
    let results: Vec<Result<ReportRow>> = manifest
        .entries
        .par_iter()
        .map(|e| report_row(e, seg, blur_sigma))
        .collect();
    let mut rows = Vec::new();
    let mut errors = Vec::new();
    for (entry, res) in manifest.entries.iter().zip(results) {
        match res {
            Ok(row) => rows.push(row),
            Err(e) => errors.push((entry.id.clone(), e.to_string())),
        }
    }
    let stat = |f: fn(&ObjectStats) -> f64| rows.iter().map(move |r| f(&r.stats));
    let histograms = vec![
        Histogram::uniform("normalized_distance", 0.0, 1.0, 20, stat(|s| s.normalized_distance)),
        Histogram::log_spaced("size_ratio", 1e-3, 1.0, 20, stat(|s| s.size_ratio)),
        Histogram::uniform("superpixels_object", 0.0, 200.0, 20, stat(|s| s.superpixels_object as f64)),
        Histogram::uniform(
            "superpixels_background",
            0.0,
            200.0,
            20,
            stat(|s| s.superpixels_background as f64),
        ),
        Histogram::uniform("superpixels_all", 0.0, 200.0, 20, stat(|s| s.superpixels_all as f64)),
        Histogram::uniform(
            "fixation_ratio",
            0.0,
            1.0,
            10,
            rows.iter().filter_map(|r| r.stats.fixation_ratio),
        ),
    ];
    DatasetReport {
        rows,
        errors,
        histograms,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontend::Fixation;

    fn fix(w: usize, h: usize, pts: &[(f64, f64)]) -> FixationSet {
        FixationSet::new(w, h, pts.iter().map(|&(x, y)| Fixation::new(x, y, 0)).collect()).unwrap()
    }

    #[test]
    fn most_salient_by_containment() {
        let m = BinaryMask::rect(30, 30, 0, 0, 5, 5);
        let fixmap = crate::synthetic::gaussian_map(30, 30, 2.0, 2.0, 3.0);
        assert_eq!(most_salient_object(std::slice::from_ref(&m), &fixmap).unwrap(), 0);

        let inst = vec![
            BinaryMask::rect(30, 30, 0, 0, 5, 5),
            BinaryMask::rect(30, 30, 20, 0, 5, 5),
            BinaryMask::rect(30, 30, 10, 20, 5, 5),
        ];
        let fixmap = crate::synthetic::gaussian_map(30, 30, 12.0, 22.0, 3.0);
        assert_eq!(most_salient_object(&inst, &fixmap).unwrap(), 2);
        assert!(most_salient_object(&[], &fixmap).is_err());
    }

    #[test]
    fn most_salient_by_mass() {
        // Peak between two instances; A holds most of the mass.
        let fixmap = SaliencyMap::from_fn(10, 1, |x, _| match x {
            0..=3 => 0.6,
            4 => 1.0,
            5..=6 => 0.1,
            _ => 0.0,
        });
        let a = BinaryMask::rect(10, 1, 0, 0, 4, 1);
        let b = BinaryMask::rect(10, 1, 5, 0, 2, 1);
        let total = 2.4 + 1.0 + 0.2;
        assert!((fixation_mass_ratio(&a, &fixmap).unwrap() - 2.4 / total).abs() < 1e-6);
        assert_eq!(most_salient_object(&[b, a], &fixmap).unwrap(), 1);
    }

    #[test]
    fn center_bias_examples() {
        let centered = BinaryMask::rect(400, 300, 150, 100, 100, 100);
        assert!(center_bias_classify(&centered).unwrap());
        let corner = BinaryMask::rect(1024, 768, 0, 0, 5, 5);
        assert!(!center_bias_classify(&corner).unwrap());
        // Only the zeroed central plateau: no overlap.
        let dot = BinaryMask::rect(400, 300, 198, 148, 4, 4);
        assert!(!center_bias_classify(&dot).unwrap());
        assert!(center_bias_classify(&BinaryMask::empty(10, 10)).is_err());
    }

    #[test]
    fn distance_examples() {
        let centered = BinaryMask::rect(41, 31, 10, 5, 21, 21);
        assert_eq!(normalized_object_distance(&centered).unwrap(), 0.0);
        let corner = BinaryMask::rect(40, 30, 0, 0, 1, 1);
        assert!((normalized_object_distance(&corner).unwrap() - 1.0).abs() < 1e-12);
        // Box center at ((W-1)/4, (H-1)/2) with W = 41, H = 31 → (10, 15).
        let left = BinaryMask::rect(41, 31, 8, 13, 5, 5);
        let expected = 10.0 / (0.5 * (40f64 * 40.0 + 30.0 * 30.0).sqrt());
        assert!((normalized_object_distance(&left).unwrap() - expected).abs() < 1e-12);
        assert!(normalized_object_distance(&BinaryMask::empty(3, 3)).is_err());
    }

    #[test]
    fn size_and_fixation_ratios() {
        assert_eq!(size_ratio(&BinaryMask::full(5, 4)), 1.0);
        assert_eq!(size_ratio(&BinaryMask::empty(5, 4)), 0.0);

        let inst = BinaryMask::rect(10, 10, 0, 0, 5, 10);
        let all_in = fix(10, 10, &[(1.0, 1.0), (2.0, 8.0)]);
        assert_eq!(fixation_ratio(&inst, &all_in).unwrap(), 1.0);
        let none_in = fix(10, 10, &[(7.0, 1.0)]);
        assert_eq!(fixation_ratio(&inst, &none_in).unwrap(), 0.0);
        assert!(fixation_ratio(&inst, &fix(10, 10, &[])).is_err());
    }

    #[test]
    fn ratio_by_rank() {
        let a = BinaryMask::rect(10, 10, 0, 0, 5, 10);
        let b = BinaryMask::rect(10, 10, 5, 0, 5, 10);
        let pts: Vec<(f64, f64)> = (0..10).map(|i| (if i < 7 { 1.0 } else { 8.0 }, i as f64)).collect();
        let f = fix(10, 10, &pts);
        // Listed out of order; annotation order decides.
        let r = fixation_ratio_by_rank(&[(2, b.clone()), (1, a.clone())], &f).unwrap();
        assert!((r[0] - 0.7).abs() < 1e-12 && (r[1] - 0.3).abs() < 1e-12);
        assert_eq!(fixation_ratio_by_rank(&[(1, BinaryMask::full(10, 10))], &f).unwrap(), vec![1.0]);
        assert!(fixation_ratio_by_rank(&[], &f).is_err());
    }

    #[test]
    fn histogram_binning() {
        let h = Histogram::uniform("d", 0.0, 1.0, 4, [0.0, 0.24, 0.25, 0.99, 1.0, 1.5, -0.1]);
        assert_eq!(h.counts, vec![3, 1, 0, 3]);
        let l = Histogram::log_spaced("s", 1e-3, 1.0, 3, [1e-4, 0.005, 0.05, 0.5]);
        assert_eq!(l.counts, vec![2, 1, 1]);
        assert!((l.edges[1] - 1e-2).abs() < 1e-12);
    }

    #[test]
    fn manifest_parsing() {
        let text = r#"
            [[entry]]
            image = "img/a.png"
            mask = "gt/a.png"

            [[entry]]
            id = "b"
            image = "/abs/b.png"
            instances = [{ mask = "i/b0.png", order = 2 }]
        "#;
        let m = DatasetManifest::parse(text, Path::new("/data")).unwrap();
        assert_eq!(m.entries.len(), 2);
        assert_eq!(m.entries[0].id, "a");
        assert_eq!(m.entries[0].mask.as_deref(), Some(Path::new("/data/gt/a.png")));
        assert_eq!(m.entries[1].image, PathBuf::from("/abs/b.png"));
        assert_eq!(m.entries[1].instances[0].order, 2);

        let dup = "[[entry]]\nimage = \"a.png\"\n[[entry]]\nimage = \"x/a.png\"\n";
        assert!(DatasetManifest::parse(dup, Path::new(".")).is_err());
        assert!(DatasetManifest::parse("[[entry]]\nimage = 3\n", Path::new(".")).is_err());
    }
}
