//! Evaluation measures for saliency maps and object masks.
//!
//! Maps are quantized as `round(255 * s)` and binarized at every integer
//! threshold `T` in `0..=255` (`M = {q >= T}`), which makes the threshold
//! sweep exact. Curves list their points from `T = 255` down to `T = 0`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::frontend::FixationSet;
use crate::raster::{check_dims, quantize, BinaryMask, SaliencyMap};
use crate::{Error, Result};

pub const THRESHOLDS: usize = 256;
/// Default F-measure weight; values below 1 favor precision.
pub const DEFAULT_ALPHA: f64 = 0.3;
/// Quantized threshold at which maps are binarized for the overlap score.
pub const OMEGA_THRESHOLD: u8 = 128;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CurveKind {
    Pr,
    Roc,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub threshold: u8,
    pub x: f64,
    pub y: f64,
}

/// 256 points, one per threshold, in decreasing threshold order.
/// PR curves hold `(recall, precision)`, ROC curves `(fpr, tpr)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Curve {
    pub kind: CurveKind,
    pub points: Vec<CurvePoint>,
}

impl Curve {
    /// `threshold,x,y` text with six decimals.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("threshold,x,y\n");
        for p in &self.points {
            out.push_str(&format!("{},{:.6},{:.6}\n", p.threshold, p.x, p.y));
        }
        out
    }
}

/// False-positive-rate definition used for ROC curves.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum FprVariant {
    /// `|M ∩ Ḡ| / |Ḡ|`.
    #[default]
    Standard,
    /// `|M ∩ G| / (|M ∩ G| + |M̄ ∩ Ḡ|)`, kept for replicating the printed formula.
    Printed,
}

impl fmt::Display for FprVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FprVariant::Standard => "standard",
            FprVariant::Printed => "paper-printed",
        })
    }
}

impl FromStr for FprVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "standard" => Ok(FprVariant::Standard),
            "paper-printed" => Ok(FprVariant::Printed),
            other => Err(Error::InvalidArgument(format!("unknown fpr variant {other:?}"))),
        }
    }
}

/// How a single F-measure is reported for a dataset.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum FMode {
    /// Maximum over thresholds of F computed from the image-averaged P and R.
    #[default]
    MaxThreshold,
    /// F of the image-averaged P and R at one threshold.
    Fixed(u8),
}

impl fmt::Display for FMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FMode::MaxThreshold => f.write_str("max-threshold"),
            FMode::Fixed(t) => write!(f, "fixed:{t}"),
        }
    }
}

impl FromStr for FMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "max-threshold" {
            return Ok(FMode::MaxThreshold);
        }
        s.strip_prefix("fixed:")
            .and_then(|t| t.parse::<u8>().ok())
            .map(FMode::Fixed)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown f-mode {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricOptions {
    pub alpha: f64,
    pub fpr: FprVariant,
    pub f_mode: FMode,
}

impl Default for MetricOptions {
    fn default() -> Self {
        MetricOptions {
            alpha: DEFAULT_ALPHA,
            fpr: FprVariant::Standard,
            f_mode: FMode::MaxThreshold,
        }
    }
}

/// Pixel counts at every threshold.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThresholdCounts {
    pub total: u64,
    /// `|G|`
    pub positives: u64,
    /// `|M|` per threshold.
    pub selected: [u64; THRESHOLDS],
    /// `|M ∩ G|` per threshold.
    pub hits: [u64; THRESHOLDS],
}

impl ThresholdCounts {
    pub fn compute(map: &SaliencyMap, gt: &BinaryMask) -> Result<Self> {
        check_dims(gt.dims(), map.dims())?;
        let mut hist_pos = [0u64; THRESHOLDS];
        let mut hist_neg = [0u64; THRESHOLDS];
        for (&v, &g) in map.values().iter().zip(gt.bits()) {
            let q = quantize(v) as usize;
            if g {
                hist_pos[q] += 1;
            } else {
                hist_neg[q] += 1;
            }
        }
        let mut selected = [0u64; THRESHOLDS];
        let mut hits = [0u64; THRESHOLDS];
        let (mut acc_pos, mut acc_neg) = (0u64, 0u64);
        for t in (0..THRESHOLDS).rev() {
            acc_pos += hist_pos[t];
            acc_neg += hist_neg[t];
            hits[t] = acc_pos;
            selected[t] = acc_pos + acc_neg;
        }
        Ok(ThresholdCounts {
            total: map.values().len() as u64,
            positives: hist_pos.iter().sum(),
            selected,
            hits,
        })
    }

    pub fn precision(&self, t: usize) -> f64 {
        if self.selected[t] == 0 {
            1.0
        } else {
            self.hits[t] as f64 / self.selected[t] as f64
        }
    }

    pub fn recall(&self, t: usize) -> f64 {
        self.hits[t] as f64 / self.positives as f64
    }

    pub fn fpr(&self, t: usize, variant: FprVariant) -> f64 {
        let false_pos = self.selected[t] - self.hits[t];
        match variant {
            FprVariant::Standard => false_pos as f64 / (self.total - self.positives) as f64,
            FprVariant::Printed => {
                let true_neg = self.total - self.positives - false_pos;
                let denom = self.hits[t] + true_neg;
                if denom == 0 {
                    0.0
                } else {
                    self.hits[t] as f64 / denom as f64
                }
            }
        }
    }
}

fn require_positive(gt: &BinaryMask) -> Result<()> {
    if gt.is_empty() {
        return Err(Error::InvalidGroundTruth("ground truth mask is empty".into()));
    }
    Ok(())
}

fn require_two_classes(gt: &BinaryMask) -> Result<()> {
    require_positive(gt)?;
    if gt.is_full() {
        return Err(Error::InvalidGroundTruth("ground truth mask covers the whole image".into()));
    }
    Ok(())
}

fn curve_from(kind: CurveKind, f: impl Fn(usize) -> (f64, f64)) -> Curve {
    let points = (0..THRESHOLDS)
        .rev()
        .map(|t| {
            let (x, y) = f(t);
            CurvePoint {
                threshold: t as u8,
                x,
                y,
            }
        })
        .collect();
    Curve { kind, points }
}

/// Precision/recall at each threshold. Precision of an empty selection is 1.
pub fn pr_curve(map: &SaliencyMap, gt: &BinaryMask) -> Result<Curve> {
    require_positive(gt)?;
    let c = ThresholdCounts::compute(map, gt)?;
    Ok(curve_from(CurveKind::Pr, |t| (c.recall(t), c.precision(t))))
}

/// ROC curve with the standard false positive rate.
pub fn roc_curve(map: &SaliencyMap, gt: &BinaryMask) -> Result<Curve> {
    roc_curve_with(map, gt, FprVariant::Standard)
}

pub fn roc_curve_with(map: &SaliencyMap, gt: &BinaryMask, variant: FprVariant) -> Result<Curve> {
    require_two_classes(gt)?;
    let c = ThresholdCounts::compute(map, gt)?;
    Ok(curve_from(CurveKind::Roc, |t| (c.fpr(t, variant), c.recall(t))))
}

/// Weighted F-measure `(1 + α) P R / (α P + R)`; 0 when undefined.
pub fn f_measure(precision: f64, recall: f64, alpha: f64) -> f64 {
    let num = (1.0 + alpha) * precision * recall;
    let den = alpha * precision + recall;
    if num == 0.0 || den == 0.0 {
        0.0
    } else {
        num / den
    }
}

/// Best F-measure over all thresholds for one image.
pub fn reported_f_measure(map: &SaliencyMap, gt: &BinaryMask, alpha: f64) -> Result<f64> {
    require_positive(gt)?;
    let c = ThresholdCounts::compute(map, gt)?;
    Ok((0..THRESHOLDS)
        .map(|t| f_measure(c.precision(t), c.recall(t), alpha))
        .fold(0.0, f64::max))
}

/// Trapezoidal area under an ROC curve, closed with `(0,0)` and `(1,1)`.
pub fn auc(curve: &Curve) -> f64 {
    let mut pts: Vec<(f64, f64)> = curve.points.iter().map(|p| (p.x, p.y)).collect();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    if pts.first() != Some(&(0.0, 0.0)) {
        pts.insert(0, (0.0, 0.0));
    }
    if pts.last() != Some(&(1.0, 1.0)) {
        pts.push((1.0, 1.0));
    }
    pts.windows(2)
        .map(|w| (w[1].0 - w[0].0) * (w[0].1 + w[1].1) / 2.0)
        .sum()
}

/// AUC of the map's values at positive fixations against negative fixations.
/// Ties count one half; every negative is used.
pub fn shuffled_auc(map: &SaliencyMap, positives: &FixationSet, negatives: &FixationSet) -> Result<f64> {
    if positives.is_empty() || negatives.is_empty() {
        return Err(Error::EmptyInput("shuffled AUC needs positive and negative fixations".into()));
    }
    check_dims(map.dims(), positives.dims())?;
    check_dims(map.dims(), negatives.dims())?;
    let score = |set: &FixationSet| -> Vec<f32> {
        set.points()
            .iter()
            .map(|p| {
                let (x, y) = p.pixel();
                map.get(x, y)
            })
            .collect()
    };
    let mut neg = score(negatives);
    neg.sort_by(f32::total_cmp);
    let pos = score(positives);
    let mut wins = 0.0f64;
    for s in &pos {
        let below = neg.partition_point(|n| n < s);
        let not_above = neg.partition_point(|n| n <= s);
        wins += below as f64 + 0.5 * (not_above - below) as f64;
    }
    Ok(wins / (pos.len() as f64 * neg.len() as f64))
}

/// Intersection over union. Fails when both masks are empty.
pub fn overlap_omega(pred: &BinaryMask, gt: &BinaryMask) -> Result<f64> {
    check_dims(gt.dims(), pred.dims())?;
    let union = pred.union_count(gt);
    if union == 0 {
        return Err(Error::UndefinedOverlap);
    }
    Ok(pred.intersection_count(gt) as f64 / union as f64)
}

/// Mean pairwise Jaccard index over annotators.
pub fn agreement(annotations: &[BinaryMask]) -> Result<f64> {
    if annotations.len() < 2 {
        return Err(Error::InvalidArgument(format!(
            "agreement needs at least 2 annotations, got {}",
            annotations.len()
        )));
    }
    let dims = annotations[0].dims();
    for a in annotations {
        check_dims(dims, a.dims())?;
    }
    let n = annotations.len();
    let mut sum = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            let union = annotations[i].union_count(&annotations[j]);
            if union == 0 {
                return Err(Error::UndefinedPair(i, j));
            }
            sum += annotations[i].intersection_count(&annotations[j]) as f64 / union as f64;
        }
    }
    Ok(2.0 * sum / (n * (n - 1)) as f64)
}

/// Per-image results indexed by threshold.
#[derive(Debug, Clone, PartialEq)]
pub struct ImageEval {
    pub precision: Vec<f64>,
    pub recall: Vec<f64>,
    pub tpr: Vec<f64>,
    pub fpr: Vec<f64>,
    pub f_max: f64,
    pub auc: f64,
    /// `None` when both the binarized map and the ground truth are empty.
    pub omega: Option<f64>,
}

pub fn evaluate_image(map: &SaliencyMap, gt: &BinaryMask, opts: &MetricOptions) -> Result<ImageEval> {
    require_two_classes(gt)?;
    let c = ThresholdCounts::compute(map, gt)?;
    let precision: Vec<f64> = (0..THRESHOLDS).map(|t| c.precision(t)).collect();
    let recall: Vec<f64> = (0..THRESHOLDS).map(|t| c.recall(t)).collect();
    let fpr: Vec<f64> = (0..THRESHOLDS).map(|t| c.fpr(t, opts.fpr)).collect();
    let roc = curve_from(CurveKind::Roc, |t| (fpr[t], recall[t]));
    let f_max = precision
        .iter()
        .zip(&recall)
        .map(|(&p, &r)| f_measure(p, r, opts.alpha))
        .fold(0.0, f64::max);
    let binarized = BinaryMask::new(
        map.width(),
        map.height(),
        map.values().iter().map(|&v| quantize(v) >= OMEGA_THRESHOLD).collect(),
    )?;
    let omega = match overlap_omega(&binarized, gt) {
        Ok(o) => Some(o),
        Err(Error::UndefinedOverlap) => None,
        Err(e) => return Err(e),
    };
    Ok(ImageEval {
        auc: auc(&roc),
        tpr: recall.clone(),
        precision,
        recall,
        fpr,
        f_max,
        omega,
    })
}

/// Dataset-level summary; images are averaged in the order given.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalSummary {
    pub images: usize,
    pub f_measure: f64,
    /// Threshold at which `f_measure` was taken.
    pub f_threshold: u8,
    pub alpha: f64,
    /// Mean of per-image AUCs.
    pub auc: f64,
    /// Mean Ω over images where it is defined.
    pub omega: f64,
    pub omega_images: usize,
    pub precision: Vec<f64>,
    pub recall: Vec<f64>,
    pub tpr: Vec<f64>,
    pub fpr: Vec<f64>,
}

impl EvalSummary {
    pub fn pr_curve(&self) -> Curve {
        curve_from(CurveKind::Pr, |t| (self.recall[t], self.precision[t]))
    }

    pub fn roc_curve(&self) -> Curve {
        curve_from(CurveKind::Roc, |t| (self.fpr[t], self.tpr[t]))
    }
}

pub fn summarize(evals: &[ImageEval], opts: &MetricOptions) -> Result<EvalSummary> {
    if evals.is_empty() {
        return Err(Error::EmptyInput("no evaluated images to summarize".into()));
    }
    let n = evals.len() as f64;
    let mean = |f: fn(&ImageEval) -> &Vec<f64>| -> Vec<f64> {
        (0..THRESHOLDS)
            .map(|t| evals.iter().map(|e| f(e)[t]).sum::<f64>() / n)
            .collect()
    };
    let precision = mean(|e| &e.precision);
    let recall = mean(|e| &e.recall);
    let tpr = mean(|e| &e.tpr);
    let fpr = mean(|e| &e.fpr);
    let f_at = |t: usize| f_measure(precision[t], recall[t], opts.alpha);
    let (f_threshold, f_measure) = match opts.f_mode {
        FMode::Fixed(t) => (t, f_at(t as usize)),
        FMode::MaxThreshold => (0..THRESHOLDS).fold((0u8, f64::NEG_INFINITY), |best, t| {
            let f = f_at(t);
            if f > best.1 {
                (t as u8, f)
            } else {
                best
            }
        }),
    };
    let omegas: Vec<f64> = evals.iter().filter_map(|e| e.omega).collect();
    let omega = if omegas.is_empty() {
        0.0
    } else {
        omegas.iter().sum::<f64>() / omegas.len() as f64
    };
    Ok(EvalSummary {
        images: evals.len(),
        f_measure,
        f_threshold,
        alpha: opts.alpha,
        auc: evals.iter().map(|e| e.auc).sum::<f64>() / n,
        omega,
        omega_images: omegas.len(),
        precision,
        recall,
        tpr,
        fpr,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontend::Fixation;

    fn mask_map(m: &BinaryMask) -> SaliencyMap {
        SaliencyMap::from_fn(m.width(), m.height(), |x, y| if m.get(x, y) { 1.0 } else { 0.0 })
    }

    #[test]
    fn pr_of_perfect_map() {
        let gt = BinaryMask::rect(10, 8, 2, 2, 4, 3);
        let c = pr_curve(&mask_map(&gt), &gt).unwrap();
        assert_eq!(c.points.len(), 256);
        let p = c.points.iter().find(|p| p.threshold == 128).unwrap();
        assert_eq!((p.x, p.y), (1.0, 1.0));
    }

    #[test]
    fn pr_of_constant_map() {
        let gt = BinaryMask::rect(10, 8, 2, 2, 4, 3);
        let c = pr_curve(&SaliencyMap::constant(10, 8, 1.0), &gt).unwrap();
        for p in &c.points {
            assert_eq!(p.x, 1.0);
            assert!((p.y - 12.0 / 80.0).abs() < 1e-12);
        }
    }

    #[test]
    fn empty_selection_has_unit_precision() {
        let gt = BinaryMask::rect(4, 4, 0, 0, 2, 2);
        let c = pr_curve(&SaliencyMap::constant(4, 4, 0.5), &gt).unwrap();
        let top = &c.points[0];
        assert_eq!(top.threshold, 255);
        assert_eq!((top.x, top.y), (0.0, 1.0));
    }

    #[test]
    fn invalid_ground_truth() {
        let m = SaliencyMap::constant(4, 4, 0.5);
        assert!(matches!(pr_curve(&m, &BinaryMask::empty(4, 4)), Err(Error::InvalidGroundTruth(_))));
        assert!(matches!(roc_curve(&m, &BinaryMask::full(4, 4)), Err(Error::InvalidGroundTruth(_))));
        assert!(matches!(roc_curve(&m, &BinaryMask::empty(4, 4)), Err(Error::InvalidGroundTruth(_))));
        assert!(matches!(
            pr_curve(&m, &BinaryMask::full(3, 4)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn f_measure_values() {
        assert_eq!(f_measure(1.0, 1.0, 0.3), 1.0);
        // 1.3 * 0.32 / 0.64
        assert!((f_measure(0.8, 0.4, 0.3) - 0.65).abs() < 1e-12);
        assert_eq!(f_measure(0.0, 0.0, 0.3), 0.0);
        assert_eq!(f_measure(0.7, 0.0, 0.3), 0.0);
        assert!((f_measure(0.6, 0.3, 1.0) - 2.0 * 0.18 / 0.9).abs() < 1e-12);
    }

    #[test]
    fn roc_endpoints_and_perfect_auc() {
        let gt = BinaryMask::rect(9, 9, 3, 3, 3, 3);
        let c = roc_curve(&mask_map(&gt), &gt).unwrap();
        let last = c.points.last().unwrap();
        assert_eq!(last.threshold, 0);
        assert_eq!((last.x, last.y), (1.0, 1.0));
        assert!(c.points.iter().any(|p| p.x == 0.0 && p.y == 1.0));
        assert_eq!(auc(&c), 1.0);
        assert_eq!(reported_f_measure(&mask_map(&gt), &gt, 0.3).unwrap(), 1.0);
    }

    #[test]
    fn auc_reference_curves() {
        let diag = Curve {
            kind: CurveKind::Roc,
            points: (0..=10)
                .map(|i| CurvePoint { threshold: i, x: i as f64 / 10.0, y: i as f64 / 10.0 })
                .collect(),
        };
        assert!((auc(&diag) - 0.5).abs() < 1e-12);
        let step = Curve {
            kind: CurveKind::Roc,
            points: vec![CurvePoint { threshold: 1, x: 0.0, y: 1.0 }],
        };
        assert_eq!(auc(&step), 1.0);
    }

    #[test]
    fn constant_map_auc_is_half() {
        let gt = BinaryMask::rect(10, 10, 1, 1, 3, 3);
        let c = roc_curve(&SaliencyMap::constant(10, 10, 0.4), &gt).unwrap();
        assert!((auc(&c) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn printed_fpr_variant_differs() {
        let gt = BinaryMask::rect(6, 6, 0, 0, 3, 6);
        let map = SaliencyMap::from_fn(6, 6, |x, _| x as f32 / 5.0);
        let std = roc_curve_with(&map, &gt, FprVariant::Standard).unwrap();
        let printed = roc_curve_with(&map, &gt, FprVariant::Printed).unwrap();
        assert_ne!(std, printed);
        assert_eq!("paper-printed".parse::<FprVariant>().unwrap(), FprVariant::Printed);
    }

    #[test]
    fn omega_examples() {
        let a = BinaryMask::rect(8, 1, 0, 0, 4, 1);
        let b = BinaryMask::rect(8, 1, 2, 0, 4, 1);
        assert!((overlap_omega(&a, &b).unwrap() - 2.0 / 6.0).abs() < 1e-12);
        assert_eq!(overlap_omega(&a, &a).unwrap(), 1.0);
        let c = BinaryMask::rect(8, 1, 5, 0, 3, 1);
        assert_eq!(overlap_omega(&a, &c).unwrap(), 0.0);
        assert!(matches!(
            overlap_omega(&BinaryMask::empty(3, 3), &BinaryMask::empty(3, 3)),
            Err(Error::UndefinedOverlap)
        ));
    }

    #[test]
    fn agreement_examples() {
        let a = BinaryMask::rect(10, 10, 0, 0, 4, 4);
        let b = BinaryMask::rect(10, 10, 6, 6, 4, 4);
        assert_eq!(agreement(&[a.clone(), a.clone(), a.clone()]).unwrap(), 1.0);
        assert_eq!(agreement(&[a.clone(), b.clone()]).unwrap(), 0.0);
        assert!((agreement(&[a.clone(), a.clone(), b.clone()]).unwrap() - 1.0 / 3.0).abs() < 1e-12);
        let e = BinaryMask::empty(10, 10);
        assert!(matches!(agreement(&[a.clone(), e.clone(), e]), Err(Error::UndefinedPair(1, 2))));
        assert!(agreement(&[a]).is_err());
    }

    fn fix(w: usize, h: usize, pts: &[(f64, f64)]) -> FixationSet {
        FixationSet::new(w, h, pts.iter().map(|&(x, y)| Fixation::new(x, y, 0)).collect()).unwrap()
    }

    #[test]
    fn shuffled_auc_basics() {
        let pos = fix(20, 20, &[(2.0, 2.0), (3.0, 3.0)]);
        let neg = fix(20, 20, &[(15.0, 15.0), (16.0, 12.0), (2.0, 2.0)]);
        assert_eq!(shuffled_auc(&SaliencyMap::constant(20, 20, 0.3), &pos, &neg).unwrap(), 0.5);

        let map = SaliencyMap::from_fn(20, 20, |x, y| if x < 5 && y < 5 { 1.0 } else { 0.0 });
        // Each positive beats two negatives and ties one: (2 + 0.5) / 3.
        let s = shuffled_auc(&map, &pos, &neg).unwrap();
        assert!((s - 2.5 / 3.0).abs() < 1e-12);
        assert_eq!(shuffled_auc(&map, &pos, &pos).unwrap(), 0.5);
        assert!(shuffled_auc(&map, &pos, &fix(20, 20, &[])).is_err());
    }

    #[test]
    fn mode_parsing() {
        assert_eq!("max-threshold".parse::<FMode>().unwrap(), FMode::MaxThreshold);
        assert_eq!("fixed:128".parse::<FMode>().unwrap(), FMode::Fixed(128));
        assert!("fixed:300".parse::<FMode>().is_err());
        assert_eq!(FMode::Fixed(7).to_string(), "fixed:7");
    }
}
