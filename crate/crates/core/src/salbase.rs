//! The baseline salient-object model.
//!
//! Saliency detection and segmentation are kept apart: the map only decides
//! *which* superpixels to take, the superpixels decide the object outline.
//! Each stage is exported so the pipeline can be inspected step by step.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::raster::{check_dims, fill_holes, normalize_map, BinaryMask, Raster, SaliencyMap};
use crate::superpixel::{segment, SegmentationParams, SuperpixelLabeling};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SalBaseParams {
    /// Saliency threshold on the normalized map.
    pub beta: f64,
    pub seg: SegmentationParams,
    /// A superpixel is selected when more than this fraction of its pixels
    /// lies above `beta`; 0 means any overlap.
    pub overlap_fraction: f64,
    /// Drop selected superpixels that reach the image boundary.
    pub discard_border: bool,
    /// When the result would be empty, keep the superpixel under the saliency peak.
    pub keep_peak_fallback: bool,
}

impl Default for SalBaseParams {
    fn default() -> Self {
        SalBaseParams {
            beta: 0.7,
            seg: SegmentationParams::default(),
            overlap_fraction: 0.0,
            discard_border: true,
            keep_peak_fallback: false,
        }
    }
}

impl SalBaseParams {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.beta) {
            return Err(Error::InvalidArgument(format!("beta must be in [0, 1], got {}", self.beta)));
        }
        if !(0.0..=1.0).contains(&self.overlap_fraction) {
            return Err(Error::InvalidArgument(format!(
                "overlap_fraction must be in [0, 1], got {}",
                self.overlap_fraction
            )));
        }
        self.seg.validate()
    }
}

/// Why a run produced an empty mask.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EmptyReason {
    /// No superpixel overlapped the thresholded map.
    NoOverlap,
    /// Every overlapping superpixel touched the image boundary.
    BorderDiscardEliminatedAll,
}

impl EmptyReason {
    pub fn as_str(&self) -> &'static str {
        match self {
            EmptyReason::NoOverlap => "no-overlap",
            EmptyReason::BorderDiscardEliminatedAll => "border-discard-eliminated-all",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SalBaseResult {
    pub mask: BinaryMask,
    /// Selected labels in ascending order.
    pub selected_labels: Vec<u32>,
    /// Saliency maximum (first in row-major order).
    pub peak: (usize, usize),
    pub empty_reason: Option<EmptyReason>,
    /// The peak-superpixel fallback replaced an empty selection.
    pub used_fallback: bool,
    pub segment_count: usize,
}

/// Pixels with saliency at or above `beta`.
pub fn truncate_saliency(map: &SaliencyMap, beta: f64) -> BinaryMask {
    BinaryMask::new(
        map.width(),
        map.height(),
        map.values().iter().map(|&v| v as f64 >= beta).collect(),
    )
    .expect("map dimensions are consistent")
}

/// Selection before and after border discard.
fn select_with_trace(
    labeling: &SuperpixelLabeling,
    truncated: &BinaryMask,
    params: &SalBaseParams,
) -> Result<(BTreeSet<u32>, BTreeSet<u32>)> {
    check_dims(labeling.dims(), truncated.dims())?;
    let sizes = labeling.sizes();
    let mut hits = vec![0usize; labeling.segment_count()];
    for (&l, &t) in labeling.labels().iter().zip(truncated.bits()) {
        if t {
            hits[l as usize] += 1;
        }
    }
    let overlapping: BTreeSet<u32> = hits
        .iter()
        .zip(&sizes)
        .enumerate()
        .filter(|(_, (&hit, &size))| hit > 0 && hit as f64 / size as f64 > params.overlap_fraction)
        .map(|(l, _)| l as u32)
        .collect();
    let kept = if params.discard_border {
        let border = labeling.touches_border();
        overlapping.iter().copied().filter(|&l| !border[l as usize]).collect()
    } else {
        overlapping.clone()
    };
    Ok((overlapping, kept))
}

/// Labels overlapping the truncated map, minus border-touching ones when
/// `params.discard_border` is set. Returned in ascending order.
pub fn select_superpixels(
    labeling: &SuperpixelLabeling,
    truncated: &BinaryMask,
    params: &SalBaseParams,
) -> Result<Vec<u32>> {
    Ok(select_with_trace(labeling, truncated, params)?.1.into_iter().collect())
}

/// Union of the given labels' regions.
pub fn rasterize(labeling: &SuperpixelLabeling, labels: &[u32]) -> BinaryMask {
    let mut chosen = vec![false; labeling.segment_count()];
    for &l in labels {
        chosen[l as usize] = true;
    }
    BinaryMask::new(
        labeling.width(),
        labeling.height(),
        labeling.labels().iter().map(|&l| chosen[l as usize]).collect(),
    )
    .expect("labeling dimensions are consistent")
}

/// Full pipeline: segment, threshold, select, rasterize, fill holes.
pub fn run_salbase(image: &Raster, map: &SaliencyMap, params: &SalBaseParams) -> Result<SalBaseResult> {
    params.validate()?;
    check_dims(image.dims(), map.dims())?;
    let labeling = segment(image, &params.seg)?;
    run_salbase_with_labeling(&labeling, map, params)
}

/// Pipeline on a precomputed labeling; lets sweeps over `beta` reuse one segmentation.
pub fn run_salbase_with_labeling(
    labeling: &SuperpixelLabeling,
    map: &SaliencyMap,
    params: &SalBaseParams,
) -> Result<SalBaseResult> {
    params.validate()?;
    check_dims(labeling.dims(), map.dims())?;
    let map = normalize_map(map);
    let peak = map.argmax();
    let truncated = truncate_saliency(&map, params.beta);
    let (overlapping, kept) = select_with_trace(labeling, &truncated, params)?;
    let mut selected: Vec<u32> = kept.into_iter().collect();

    let empty_reason = match (overlapping.is_empty(), selected.is_empty()) {
        (true, _) => Some(EmptyReason::NoOverlap),
        (false, true) => Some(EmptyReason::BorderDiscardEliminatedAll),
        _ => None,
    };
    let used_fallback = empty_reason.is_some() && params.keep_peak_fallback;
    if used_fallback {
        selected = vec![labeling.label(peak.0, peak.1)];
    }

    let mask = fill_holes(&rasterize(labeling, &selected));
    Ok(SalBaseResult {
        mask,
        selected_labels: selected,
        peak,
        empty_reason,
        used_fallback,
        segment_count: labeling.segment_count(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params_no_border() -> SalBaseParams {
        SalBaseParams {
            discard_border: false,
            ..SalBaseParams::default()
        }
    }

    #[test]
    fn truncate_examples() {
        let ramp = SaliencyMap::new(4, 1, vec![0.0, 0.5, 0.8, 1.0]).unwrap();
        assert_eq!(truncate_saliency(&ramp, 0.7).bits(), &[false, false, true, true]);
        assert!(truncate_saliency(&ramp, 0.0).is_full());
        assert_eq!(truncate_saliency(&ramp, 1.0).bits(), &[false, false, false, true]);
    }

    #[test]
    fn beta_outside_unit_interval_rejected() {
        let p = SalBaseParams {
            beta: 1.0001,
            ..SalBaseParams::default()
        };
        assert!(p.validate().is_err());
    }

    fn three_strips() -> SuperpixelLabeling {
        // 9x5 grid: an interior 3x3 block flanked by two border-touching segments.
        let raw: Vec<u32> = (0..45)
            .map(|i| {
                let (x, y) = (i % 9, i / 9);
                if (3..6).contains(&x) && (1..4).contains(&y) {
                    1
                } else if x < 5 {
                    0
                } else {
                    2
                }
            })
            .collect();
        SuperpixelLabeling::from_raw(9, 5, &raw).unwrap()
    }

    #[test]
    fn selection_examples() {
        let lab = three_strips();
        assert_eq!(lab.segment_count(), 3);
        let center = lab.label(4, 2);

        let none = select_superpixels(&lab, &BinaryMask::empty(9, 5), &SalBaseParams::default()).unwrap();
        assert!(none.is_empty());

        let all = select_superpixels(&lab, &BinaryMask::full(9, 5), &params_no_border()).unwrap();
        assert_eq!(all, vec![0, 1, 2]);

        // Truncated region covers the center block and spills onto both border segments.
        let truncated = BinaryMask::rect(9, 5, 2, 1, 5, 3);
        let sel = select_superpixels(&lab, &truncated, &SalBaseParams::default()).unwrap();
        assert_eq!(sel, vec![center]);
    }

    #[test]
    fn overlap_fraction_is_strict() {
        let lab = three_strips();
        let center = lab.label(4, 2);
        // Six of the nine center pixels.
        let truncated = BinaryMask::rect(9, 5, 3, 1, 3, 2);
        let half = SalBaseParams {
            overlap_fraction: 0.5,
            ..SalBaseParams::default()
        };
        assert_eq!(select_superpixels(&lab, &truncated, &half).unwrap(), vec![center]);
        let two_thirds = SalBaseParams {
            overlap_fraction: 6.0 / 9.0,
            ..SalBaseParams::default()
        };
        assert!(select_superpixels(&lab, &truncated, &two_thirds).unwrap().is_empty());
    }

    #[test]
    fn selection_dimension_mismatch() {
        let err = select_superpixels(&three_strips(), &BinaryMask::empty(3, 3), &SalBaseParams::default());
        assert!(matches!(err, Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn zero_map_gives_no_overlap() {
        let img = Raster::gray_from_fn(32, 32, |x, _| x as f32 / 31.0);
        let map = SaliencyMap::constant(32, 32, 0.0);
        let res = run_salbase(&img, &map, &SalBaseParams::default()).unwrap();
        assert!(res.mask.is_empty());
        assert_eq!(res.empty_reason, Some(EmptyReason::NoOverlap));
    }

    #[test]
    fn fallback_keeps_peak_superpixel() {
        let img = Raster::gray_from_fn(32, 32, |x, _| if x < 16 { 0.1 } else { 0.9 });
        let map = SaliencyMap::from_fn(32, 32, |x, y| if (x, y) == (20, 5) { 1.0 } else { 0.0 });
        let params = SalBaseParams {
            keep_peak_fallback: true,
            ..SalBaseParams::default()
        };
        let res = run_salbase(&img, &map, &params).unwrap();
        assert!(res.used_fallback);
        assert_eq!(res.empty_reason, Some(EmptyReason::BorderDiscardEliminatedAll));
        assert!(res.mask.get(20, 5));
        assert_eq!(res.peak, (20, 5));
    }
}
