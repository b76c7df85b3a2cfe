//! Batch driver behind the `salbase` binary.
//!
//! Every command reads a dataset manifest, processes entries on a bounded
//! worker pool and writes results in manifest order, so the worker count
//! never changes an output byte. Tables start with `# key=value` lines that
//! record the configuration they were produced with.
//!
//! Exit codes: 0 success, 1 some entries failed, 2 configuration error.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use crate::dataset::{dataset_report_with, DatasetManifest, Entry, LoadedEntry};
use crate::frontend::{inter_observer_map, fixation_map, FixationSet, FrontendSpec, DEFAULT_BLUR_SIGMA};
use crate::metrics::{evaluate_image, f_measure, shuffled_auc, summarize, FMode, FprVariant, ImageEval, MetricOptions};
use crate::raster::{BinaryMask, SaliencyMap};
use crate::salbase::{run_salbase_with_labeling, SalBaseParams, SalBaseResult};
use crate::superpixel::{segment, SegmentationParams};
use crate::{Error, Result};

pub const EXIT_OK: i32 = 0;
pub const EXIT_PARTIAL: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "salbase", version, about = "Salient object detection baseline and benchmark harness")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the model on every entry and write object masks.
    Segment {
        #[command(flatten)]
        common: CommonArgs,
        #[command(flatten)]
        frontend: FrontendArgs,
        #[command(flatten)]
        model: ModelArgs,
        /// Also export each superpixel labeling as a 16-bit label image.
        #[arg(long)]
        save_labels: bool,
    },
    /// Evaluate saliency maps (or model masks) against ground truth.
    Eval {
        #[command(flatten)]
        common: CommonArgs,
        #[command(flatten)]
        frontend: FrontendArgs,
        #[command(flatten)]
        metrics: MetricArgs,
    },
    /// Evaluate the model over a list of thresholds or segmentation regimes.
    Sweep {
        #[command(flatten)]
        common: CommonArgs,
        #[command(flatten)]
        frontend: FrontendArgs,
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        metrics: MetricArgs,
        #[arg(long, value_enum)]
        param: SweepParam,
        /// Comma-separated values: thresholds for `beta`; `fine`, `default`,
        /// `coarse`, `alternate` or `sigma:k:min` for `seg`.
        #[arg(long)]
        values: Option<String>,
    },
    /// Dataset statistics: center bias, object distance and size, complexity, fixation ratios.
    Stats {
        #[command(flatten)]
        common: CommonArgs,
        #[command(flatten)]
        seg: SegArgs,
        #[arg(long, default_value_t = DEFAULT_BLUR_SIGMA)]
        blur_sigma: f64,
    },
    /// Write blurred fixation maps for every entry with fixations.
    Fixmap {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, default_value_t = DEFAULT_BLUR_SIGMA)]
        blur_sigma: f64,
        /// Leave this observer out (inter-observer map).
        #[arg(long)]
        held_out: Option<u32>,
    },
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    #[arg(long)]
    pub manifest: PathBuf,
    /// Output directory.
    #[arg(long, env = "SALBASE_OUT", default_value = "salbase-out")]
    pub out: PathBuf,
    #[arg(long, default_value_t = 1)]
    pub workers: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FrontendKind {
    /// `<maps>/<id>.png` files.
    External,
    /// Blurred fixations of all observers.
    Fixations,
    /// Blurred fixations of all observers but `--held-out`.
    Interobs,
    /// Built-in spectral-residual stand-in.
    Standin,
}

#[derive(Debug, Clone, Args)]
pub struct FrontendArgs {
    #[arg(long, value_enum, default_value_t = FrontendKind::External)]
    pub frontend: FrontendKind,
    /// Directory of `<id>.png` maps for the external frontend [default: <manifest dir>/maps].
    #[arg(long)]
    pub maps: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_BLUR_SIGMA)]
    pub blur_sigma: f64,
    #[arg(long, default_value_t = 0)]
    pub held_out: u32,
}

#[derive(Debug, Clone, Args)]
pub struct SegArgs {
    #[arg(long, default_value_t = 1.0)]
    pub seg_sigma: f64,
    #[arg(long, default_value_t = 300.0)]
    pub seg_k: f64,
    #[arg(long, default_value_t = 60)]
    pub seg_min: usize,
}

impl SegArgs {
    fn params(&self) -> Result<SegmentationParams> {
        SegmentationParams::new(self.seg_sigma, self.seg_k, self.seg_min)
    }
}

#[derive(Debug, Clone, Args)]
pub struct ModelArgs {
    #[arg(long, default_value_t = 0.7)]
    pub beta: f64,
    #[command(flatten)]
    pub seg: SegArgs,
    #[arg(long, default_value_t = 0.0)]
    pub overlap_fraction: f64,
    /// Keep the superpixel under the saliency peak when the mask would be empty.
    #[arg(long)]
    pub keep_peak_fallback: bool,
    /// Do not discard superpixels touching the image boundary.
    #[arg(long)]
    pub keep_border: bool,
}

impl ModelArgs {
    fn params(&self) -> Result<SalBaseParams> {
        let p = SalBaseParams {
            beta: self.beta,
            seg: self.seg.params()?,
            overlap_fraction: self.overlap_fraction,
            discard_border: !self.keep_border,
            keep_peak_fallback: self.keep_peak_fallback,
        };
        p.validate()?;
        Ok(p)
    }
}

#[derive(Debug, Clone, Args)]
pub struct MetricArgs {
    #[arg(long, default_value_t = crate::metrics::DEFAULT_ALPHA)]
    pub alpha: f64,
    #[arg(long, default_value = "standard")]
    pub fpr: String,
    #[arg(long, default_value = "max-threshold")]
    pub f_mode: String,
    /// Model name for the summary table.
    #[arg(long, default_value = "model")]
    pub model: String,
}

impl MetricArgs {
    fn options(&self) -> Result<MetricOptions> {
        if !(self.alpha > 0.0 && self.alpha.is_finite()) {
            return Err(Error::InvalidArgument(format!("alpha must be > 0, got {}", self.alpha)));
        }
        Ok(MetricOptions {
            alpha: self.alpha,
            fpr: self.fpr.parse::<FprVariant>()?,
            f_mode: self.f_mode.parse::<FMode>()?,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepParam {
    Beta,
    Seg,
}

/// Fully resolved configuration shared by the commands.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub manifest_path: PathBuf,
    pub manifest: DatasetManifest,
    pub out: PathBuf,
    pub workers: usize,
    pub frontend: FrontendKind,
    pub maps_dir: PathBuf,
    pub blur_sigma: f64,
    pub held_out: u32,
    pub params: SalBaseParams,
    pub metrics: MetricOptions,
    pub model: String,
}

impl RunConfig {
    fn new(common: &CommonArgs) -> Result<Self> {
        if common.workers < 1 {
            return Err(Error::InvalidArgument("worker count must be >= 1".into()));
        }
        let manifest = DatasetManifest::load(&common.manifest)?;
        prepare_out_dir(&common.out)?;
        Ok(RunConfig {
            maps_dir: manifest.root.join("maps"),
            manifest_path: common.manifest.clone(),
            manifest,
            out: common.out.clone(),
            workers: common.workers,
            frontend: FrontendKind::External,
            blur_sigma: DEFAULT_BLUR_SIGMA,
            held_out: 0,
            params: SalBaseParams::default(),
            metrics: MetricOptions::default(),
            model: "model".into(),
        })
    }

    fn with_frontend(mut self, f: &FrontendArgs) -> Result<Self> {
        if !(f.blur_sigma > 0.0 && f.blur_sigma.is_finite()) {
            return Err(Error::InvalidArgument(format!("blur sigma must be > 0, got {}", f.blur_sigma)));
        }
        self.frontend = f.frontend;
        if let Some(dir) = &f.maps {
            self.maps_dir = dir.clone();
        }
        if self.frontend == FrontendKind::External && !self.maps_dir.is_dir() {
            return Err(Error::InvalidArgument(format!(
                "map directory {} does not exist",
                self.maps_dir.display()
            )));
        }
        self.blur_sigma = f.blur_sigma;
        self.held_out = f.held_out;
        Ok(self)
    }

    fn pool(&self) -> Result<rayon::ThreadPool> {
        rayon::ThreadPoolBuilder::new()
            .num_threads(self.workers)
            .build()
            .map_err(|e| Error::InvalidArgument(format!("cannot start worker pool: {e}")))
    }

    /// Runs `task` on every entry in the worker pool, returning results in manifest order.
    fn map_entries<T: Send>(&self, task: impl Fn(&Entry) -> Result<T> + Sync) -> Result<Vec<Result<T>>> {
        Ok(self.pool()?.install(|| self.manifest.entries.par_iter().map(&task).collect()))
    }

    fn frontend_spec(&self, entry: &Entry) -> FrontendSpec {
        match self.frontend {
            FrontendKind::External => FrontendSpec::ExternalMap {
                path: self.maps_dir.join(format!("{}.png", entry.id)),
            },
            FrontendKind::Fixations => FrontendSpec::FixationMap {
                blur_sigma: self.blur_sigma,
            },
            FrontendKind::Interobs => FrontendSpec::InterObserver {
                held_out: self.held_out,
                blur_sigma: self.blur_sigma,
            },
            FrontendKind::Standin => FrontendSpec::SpectralStandin,
        }
    }

    fn saliency(&self, entry: &Entry, loaded: &LoadedEntry) -> Result<SaliencyMap> {
        self.frontend_spec(entry)
            .produce(&loaded.image, loaded.fixations.as_ref())
    }

    fn frontend_label(&self) -> &'static str {
        match self.frontend {
            FrontendKind::External => "external",
            FrontendKind::Fixations => "fixations",
            FrontendKind::Interobs => "interobs",
            FrontendKind::Standin => "standin-spectral-residual (built-in, not a published model)",
        }
    }

    fn frontend_metadata(&self, meta: &mut Vec<(String, String)>) {
        meta.push(("frontend".into(), self.frontend_label().into()));
        match self.frontend {
            FrontendKind::External => meta.push(("maps".into(), self.maps_dir.display().to_string())),
            FrontendKind::Fixations => meta.push(("blur_sigma".into(), self.blur_sigma.to_string())),
            FrontendKind::Interobs => {
                meta.push(("blur_sigma".into(), self.blur_sigma.to_string()));
                meta.push(("held_out".into(), self.held_out.to_string()));
            }
            FrontendKind::Standin => {}
        }
    }

    fn model_metadata(&self, meta: &mut Vec<(String, String)>) {
        let p = &self.params;
        meta.push(("beta".into(), p.beta.to_string()));
        meta.push(("seg_sigma".into(), p.seg.sigma.to_string()));
        meta.push(("seg_k".into(), p.seg.k.to_string()));
        meta.push(("seg_min".into(), p.seg.min_size.to_string()));
        meta.push(("overlap_fraction".into(), p.overlap_fraction.to_string()));
        meta.push(("discard_border".into(), p.discard_border.to_string()));
        meta.push(("keep_peak_fallback".into(), p.keep_peak_fallback.to_string()));
    }

    fn metric_metadata(&self, meta: &mut Vec<(String, String)>) {
        let m = &self.metrics;
        meta.push(("model".into(), self.model.clone()));
        meta.push(("alpha".into(), m.alpha.to_string()));
        meta.push(("fpr".into(), m.fpr.to_string()));
        meta.push(("f_mode".into(), m.f_mode.to_string()));
        meta.push(("f_aggregation".into(), "mean-precision-recall-over-images".into()));
        meta.push(("auc_aggregation".into(), "mean-of-image-aucs".into()));
        meta.push(("quantization".into(), "round(255*s), M={q>=T}, T=0..255".into()));
        meta.push(("empty_selection_precision".into(), "1".into()));
        meta.push(("omega_binarization".into(), format!("q>={}", crate::metrics::OMEGA_THRESHOLD)));
        meta.push(("sauc_negatives".into(), "fixations of all other entries, rescaled".into()));
    }

    fn base_metadata(&self, command: &str) -> Vec<(String, String)> {
        vec![
            ("command".into(), command.into()),
            ("manifest".into(), self.manifest_path.display().to_string()),
        ]
    }
}

fn prepare_out_dir(out: &Path) -> Result<()> {
    std::fs::create_dir_all(out).map_err(|e| Error::io(out, e))?;
    let probe = out.join(".salbase-write-probe");
    std::fs::write(&probe, b"").map_err(|e| Error::io(out, e))?;
    std::fs::remove_file(&probe).map_err(|e| Error::io(&probe, e))
}

/// Comma-separated table preceded by `# key=value` metadata lines.
#[derive(Debug, Clone, Default)]
pub struct Table {
    pub metadata: Vec<(String, String)>,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    fn new(metadata: Vec<(String, String)>, header: &[&str]) -> Self {
        Table {
            metadata,
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.metadata {
            let _ = writeln!(out, "# {k}={v}");
        }
        let mut w = csv::WriterBuilder::new().from_writer(Vec::new());
        w.write_record(&self.header).expect("in-memory write");
        for r in &self.rows {
            w.write_record(r).expect("in-memory write");
        }
        out.push_str(&String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 fields"));
        out
    }

    fn write(&self, path: &Path) -> Result<()> {
        write_file(path, &self.render())
    }
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    crate::io::ensure_parent(path)?;
    std::fs::write(path, contents).map_err(|e| Error::io(path, e))
}

pub fn fmt6(v: f64) -> String {
    format!("{v:.6}")
}

fn opt6(v: Option<f64>) -> String {
    v.map(fmt6).unwrap_or_else(|| "absent".into())
}

fn report_errors(cfg: &RunConfig, command: &str, errors: &[(String, String)]) -> Result<()> {
    if errors.is_empty() {
        return Ok(());
    }
    let mut t = Table::new(cfg.base_metadata(command), &["id", "error"]);
    for (id, msg) in errors {
        eprintln!("error: {id}: {msg}");
        t.rows.push(vec![id.clone(), msg.clone()]);
    }
    t.write(&cfg.out.join("errors.csv"))
}

#[derive(Serialize)]
struct Sidecar<'a> {
    id: &'a str,
    frontend: &'a str,
    params: &'a SalBaseParams,
    segment_count: usize,
    selected_label_count: usize,
    peak: [usize; 2],
    empty_reason: Option<&'static str>,
    used_fallback: bool,
    omega: Option<f64>,
}

fn gt_mask<'a>(entry: &Entry, loaded: &'a LoadedEntry) -> Result<&'a BinaryMask> {
    loaded
        .mask
        .as_ref()
        .ok_or_else(|| Error::InvalidGroundTruth(format!("entry {} has no ground-truth mask", entry.id)))
}

struct SegmentOutcome {
    result: SalBaseResult,
    omega: Option<f64>,
}

pub fn cmd_segment(cfg: &RunConfig, save_labels: bool) -> Result<usize> {
    let results = cfg.map_entries(|entry| {
        let loaded = entry.load()?;
        let map = cfg.saliency(entry, &loaded)?;
        let labeling = segment(&loaded.image, &cfg.params.seg)?;
        let result = run_salbase_with_labeling(&labeling, &map, &cfg.params)?;
        let omega = match &loaded.mask {
            Some(gt) => crate::metrics::overlap_omega(&result.mask, gt).ok(),
            None => None,
        };
        let dir = cfg.out.join("masks");
        crate::io::save_mask(&result.mask, &dir.join(format!("{}.png", entry.id)))?;
        if save_labels {
            crate::io::save_labels(&labeling, &cfg.out.join("labels").join(format!("{}.png", entry.id)))?;
        }
        let sidecar = Sidecar {
            id: &entry.id,
            frontend: cfg.frontend_label(),
            params: &cfg.params,
            segment_count: result.segment_count,
            selected_label_count: result.selected_labels.len(),
            peak: [result.peak.0, result.peak.1],
            empty_reason: result.empty_reason.map(|r| r.as_str()),
            used_fallback: result.used_fallback,
            omega,
        };
        let json = serde_json::to_string_pretty(&sidecar).expect("sidecar serializes") + "\n";
        write_file(&dir.join(format!("{}.json", entry.id)), &json)?;
        Ok(SegmentOutcome { result, omega })
    })?;

    let mut meta = cfg.base_metadata("segment");
    cfg.frontend_metadata(&mut meta);
    cfg.model_metadata(&mut meta);
    let mut table = Table::new(
        meta,
        &["id", "omega", "selected", "segments", "peak_x", "peak_y", "empty_reason"],
    );
    let mut errors = Vec::new();
    for (entry, res) in cfg.manifest.entries.iter().zip(results) {
        match res {
            Ok(SegmentOutcome { result, omega }) => {
                match omega {
                    Some(o) => println!("{}\tomega={o:.4}", entry.id),
                    None => println!("{}\tomega=absent", entry.id),
                }
                table.rows.push(vec![
                    entry.id.clone(),
                    opt6(omega),
                    result.selected_labels.len().to_string(),
                    result.segment_count.to_string(),
                    result.peak.0.to_string(),
                    result.peak.1.to_string(),
                    result.empty_reason.map(|r| r.as_str()).unwrap_or("").to_string(),
                ]);
            }
            Err(e) => errors.push((entry.id.clone(), e.to_string())),
        }
    }
    table.write(&cfg.out.join("segment.csv"))?;
    report_errors(cfg, "segment", &errors)?;
    Ok(errors.len())
}

/// Fixations of every other entry, mapped into this entry's frame.
fn shuffled_negatives(all: &[Option<FixationSet>], index: usize, dims: (usize, usize)) -> Option<FixationSet> {
    let others: Vec<FixationSet> = all
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != index)
        .filter_map(|(_, f)| f.as_ref().map(|f| f.rescaled(dims.0, dims.1)))
        .collect();
    FixationSet::merged(&others).filter(|f| !f.is_empty())
}

struct EvalRow {
    id: String,
    eval: ImageEval,
    f_image: f64,
    sauc: Option<f64>,
}

struct EvalRun {
    rows: Vec<EvalRow>,
    errors: Vec<(String, String)>,
}

/// Evaluates one map per entry; `map_for` supplies the map.
fn evaluate_entries(
    cfg: &RunConfig,
    map_for: impl Fn(&Entry, &LoadedEntry) -> Result<SaliencyMap> + Sync,
) -> Result<EvalRun> {
    let loaded = cfg.map_entries(|entry| {
        let loaded = entry.load()?;
        let map = map_for(entry, &loaded)?;
        let gt = gt_mask(entry, &loaded)?;
        let eval = evaluate_image(&map, gt, &cfg.metrics)?;
        Ok((map, loaded.fixations, eval))
    })?;
    let fixations: Vec<Option<FixationSet>> = loaded
        .iter()
        .map(|r| r.as_ref().ok().and_then(|(_, f, _)| f.clone()))
        .collect();

    let mut rows = Vec::new();
    let mut errors = Vec::new();
    for (i, (entry, res)) in cfg.manifest.entries.iter().zip(loaded).enumerate() {
        match res {
            Ok((map, fix, eval)) => {
                let sauc = match (&fix, shuffled_negatives(&fixations, i, map.dims())) {
                    (Some(pos), Some(neg)) if !pos.is_empty() => Some(shuffled_auc(&map, pos, &neg)?),
                    _ => None,
                };
                let f_image = match cfg.metrics.f_mode {
                    FMode::MaxThreshold => eval.f_max,
                    FMode::Fixed(t) => f_measure(
                        eval.precision[t as usize],
                        eval.recall[t as usize],
                        cfg.metrics.alpha,
                    ),
                };
                rows.push(EvalRow {
                    id: entry.id.clone(),
                    eval,
                    f_image,
                    sauc,
                });
            }
            Err(e) => errors.push((entry.id.clone(), e.to_string())),
        }
    }
    Ok(EvalRun { rows, errors })
}

fn mean_sauc(rows: &[EvalRow]) -> Option<f64> {
    let values: Vec<f64> = rows.iter().filter_map(|r| r.sauc).collect();
    (!values.is_empty() && values.len() == rows.len()).then(|| values.iter().sum::<f64>() / values.len() as f64)
}

const SUMMARY_HEADER: &[&str] = &["model", "images", "f_measure", "f_threshold", "auc", "omega", "omega_images", "sauc"];

fn summary_row(model: &str, run: &EvalRun, opts: &MetricOptions) -> Result<Vec<String>> {
    let evals: Vec<ImageEval> = run.rows.iter().map(|r| r.eval.clone()).collect();
    let s = summarize(&evals, opts)?;
    Ok(vec![
        model.to_string(),
        s.images.to_string(),
        fmt6(s.f_measure),
        s.f_threshold.to_string(),
        fmt6(s.auc),
        fmt6(s.omega),
        s.omega_images.to_string(),
        opt6(mean_sauc(&run.rows)),
    ])
}

pub fn cmd_eval(cfg: &RunConfig) -> Result<usize> {
    let run = evaluate_entries(cfg, |entry, loaded| cfg.saliency(entry, loaded))?;
    let mut meta = cfg.base_metadata("eval");
    cfg.frontend_metadata(&mut meta);
    cfg.metric_metadata(&mut meta);

    let mut per_image = Table::new(meta.clone(), &["id", "f_measure", "auc", "omega", "sauc"]);
    for r in &run.rows {
        per_image.rows.push(vec![
            r.id.clone(),
            fmt6(r.f_image),
            fmt6(r.eval.auc),
            opt6(r.eval.omega),
            opt6(r.sauc),
        ]);
    }
    per_image.write(&cfg.out.join("per_image.csv"))?;

    if !run.rows.is_empty() {
        let evals: Vec<ImageEval> = run.rows.iter().map(|r| r.eval.clone()).collect();
        let s = summarize(&evals, &cfg.metrics)?;
        write_file(&cfg.out.join("pr.csv"), &s.pr_curve().to_csv())?;
        write_file(&cfg.out.join("roc.csv"), &s.roc_curve().to_csv())?;
        let mut summary = Table::new(meta, SUMMARY_HEADER);
        summary.rows.push(summary_row(&cfg.model, &run, &cfg.metrics)?);
        summary.write(&cfg.out.join("summary.csv"))?;
        println!(
            "{}: F={:.4} AUC={:.4} omega={:.4} over {} images",
            cfg.model, s.f_measure, s.auc, s.omega, s.images
        );
    }
    report_errors(cfg, "eval", &run.errors)?;
    Ok(run.errors.len())
}

/// Named segmentation regimes accepted by `sweep --param seg`.
pub fn parse_seg_regime(s: &str) -> Result<SegmentationParams> {
    match s {
        "fine" => Ok(SegmentationParams::fine()),
        "default" => Ok(SegmentationParams::default()),
        "coarse" => Ok(SegmentationParams::coarse()),
        "alternate" => Ok(SegmentationParams::alternate()),
        other => {
            let parts: Vec<&str> = other.split(':').collect();
            let bad = || Error::InvalidArgument(format!("bad segmentation regime {other:?}"));
            if parts.len() != 3 {
                return Err(bad());
            }
            SegmentationParams::new(
                parts[0].parse().map_err(|_| bad())?,
                parts[1].parse().map_err(|_| bad())?,
                parts[2].parse().map_err(|_| bad())?,
            )
        }
    }
}

fn mask_as_map(mask: &BinaryMask) -> SaliencyMap {
    let raw = mask.bits().iter().map(|&b| if b { 1.0 } else { 0.0 }).collect();
    SaliencyMap::normalized(mask.width(), mask.height(), raw).expect("binary values are finite")
}

pub fn cmd_sweep(cfg: &RunConfig, param: SweepParam, values: Option<&str>) -> Result<usize> {
    let values: Vec<String> = match values {
        Some(v) => v.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect(),
        None => match param {
            SweepParam::Beta => ["0.5", "0.6", "0.7", "0.8", "0.9"].map(String::from).to_vec(),
            SweepParam::Seg => ["fine", "default", "coarse"].map(String::from).to_vec(),
        },
    };
    if values.is_empty() {
        return Err(Error::InvalidArgument("sweep list is empty".into()));
    }
    let settings: Vec<SalBaseParams> = values
        .iter()
        .map(|v| {
            let mut p = cfg.params;
            match param {
                SweepParam::Beta => {
                    p.beta = v
                        .parse()
                        .map_err(|_| Error::InvalidArgument(format!("bad beta {v:?}")))?
                }
                SweepParam::Seg => p.seg = parse_seg_regime(v)?,
            }
            p.validate()?;
            Ok(p)
        })
        .collect::<Result<_>>()?;

    let name = match param {
        SweepParam::Beta => "beta",
        SweepParam::Seg => "seg",
    };
    let mut meta = cfg.base_metadata("sweep");
    meta.push(("param".into(), name.into()));
    cfg.frontend_metadata(&mut meta);
    cfg.model_metadata(&mut meta);
    cfg.metric_metadata(&mut meta);

    let mut table = Table::new(meta.clone(), &[&["value"], SUMMARY_HEADER].concat());
    let mut curve = Table::new(meta, &["value", "f_measure"]);
    let mut errors = Vec::new();
    for (value, params) in values.iter().zip(&settings) {
        let run = evaluate_entries(cfg, |entry, loaded| {
            let map = cfg.saliency(entry, loaded)?;
            let labeling = segment(&loaded.image, &params.seg)?;
            let res = run_salbase_with_labeling(&labeling, &map, params)?;
            Ok(mask_as_map(&res.mask))
        })?;
        errors.extend(run.errors.iter().map(|(id, e)| (format!("{id}@{name}={value}"), e.clone())));
        if run.rows.is_empty() {
            continue;
        }
        let row = summary_row(&cfg.model, &run, &cfg.metrics)?;
        curve.rows.push(vec![value.clone(), row[2].clone()]);
        table.rows.push([vec![value.clone()], row].concat());
    }
    table.write(&cfg.out.join(format!("sweep_{name}.csv")))?;
    curve.write(&cfg.out.join(format!("sweep_{name}_f.csv")))?;
    report_errors(cfg, "sweep", &errors)?;
    Ok(errors.len())
}

pub fn cmd_stats(cfg: &RunConfig, seg: &SegmentationParams, blur_sigma: f64) -> Result<usize> {
    if !(blur_sigma > 0.0 && blur_sigma.is_finite()) {
        return Err(Error::InvalidArgument(format!("blur sigma must be > 0, got {blur_sigma}")));
    }
    let report = cfg.pool()?.install(|| dataset_report_with(&cfg.manifest, seg, blur_sigma));
    let mut meta = cfg.base_metadata("stats");
    meta.push(("seg_sigma".into(), seg.sigma.to_string()));
    meta.push(("seg_k".into(), seg.k.to_string()));
    meta.push(("seg_min".into(), seg.min_size.to_string()));
    meta.push(("blur_sigma".into(), blur_sigma.to_string()));
    meta.push(("center_bias".into(), "gaussian sigma=50 on 400x300, resized, zeroed above 0.95, support at 8-bit precision".into()));
    meta.push(("distance".into(), "bounding-box center to image center over half diagonal".into()));
    meta.push(("fixation_ratio".into(), "fraction of fixation points".into()));

    let mut table = Table::new(
        meta.clone(),
        &[
            "id",
            "normalized_distance",
            "size_ratio",
            "superpixels_object",
            "superpixels_background",
            "superpixels_all",
            "on_center",
            "fixation_ratio",
            "agreement",
            "most_salient_instance",
            "rank_ratios",
        ],
    );
    for r in &report.rows {
        let s = &r.stats;
        table.rows.push(vec![
            r.id.clone(),
            fmt6(s.normalized_distance),
            fmt6(s.size_ratio),
            s.superpixels_object.to_string(),
            s.superpixels_background.to_string(),
            s.superpixels_all.to_string(),
            s.on_center.to_string(),
            opt6(s.fixation_ratio),
            opt6(r.agreement),
            r.most_salient_instance.map(|i| i.to_string()).unwrap_or_else(|| "absent".into()),
            r.rank_ratios
                .as_ref()
                .map(|v| v.iter().map(|x| fmt6(*x)).collect::<Vec<_>>().join(";"))
                .unwrap_or_else(|| "absent".into()),
        ]);
    }
    table.write(&cfg.out.join("stats.csv"))?;

    let mut hist = Table::new(meta, &["histogram", "bin", "lo", "hi", "count"]);
    for h in &report.histograms {
        for (i, c) in h.counts.iter().enumerate() {
            hist.rows.push(vec![
                h.name.clone(),
                i.to_string(),
                fmt6(h.edges[i]),
                fmt6(h.edges[i + 1]),
                c.to_string(),
            ]);
        }
    }
    hist.write(&cfg.out.join("stats_histograms.csv"))?;

    let on = report.rows.iter().filter(|r| r.stats.on_center).count();
    println!("{} images: {on} on-center, {} off-center", report.rows.len(), report.rows.len() - on);
    report_errors(cfg, "stats", &report.errors)?;
    Ok(report.errors.len())
}

pub fn cmd_fixmap(cfg: &RunConfig, blur_sigma: f64, held_out: Option<u32>) -> Result<usize> {
    if !(blur_sigma > 0.0 && blur_sigma.is_finite()) {
        return Err(Error::InvalidArgument(format!("blur sigma must be > 0, got {blur_sigma}")));
    }
    let results = cfg.map_entries(|entry| {
        let fix_path = entry
            .fixations
            .as_deref()
            .ok_or_else(|| Error::EmptyInput(format!("entry {} has no fixations", entry.id)))?;
        let image = crate::io::load_raster(&entry.image)?;
        let fix = FixationSet::from_csv(fix_path, image.width(), image.height())?;
        let map = match held_out {
            Some(o) => inter_observer_map(&fix, o, blur_sigma)?,
            None => fixation_map(&fix, blur_sigma)?,
        };
        crate::io::save_map(&map, &cfg.out.join("fixmaps").join(format!("{}.png", entry.id)))?;
        Ok(map.argmax())
    })?;
    let mut meta = cfg.base_metadata("fixmap");
    meta.push(("blur_sigma".into(), blur_sigma.to_string()));
    meta.push((
        "held_out".into(),
        held_out.map(|o| o.to_string()).unwrap_or_else(|| "none".into()),
    ));
    let mut table = Table::new(meta, &["id", "peak_x", "peak_y"]);
    let mut errors = Vec::new();
    for (entry, res) in cfg.manifest.entries.iter().zip(results) {
        match res {
            Ok((x, y)) => table.rows.push(vec![entry.id.clone(), x.to_string(), y.to_string()]),
            Err(e) => errors.push((entry.id.clone(), e.to_string())),
        }
    }
    table.write(&cfg.out.join("fixmap.csv"))?;
    report_errors(cfg, "fixmap", &errors)?;
    Ok(errors.len())
}

fn dispatch(command: Command) -> Result<usize> {
    match command {
        Command::Segment {
            common,
            frontend,
            model,
            save_labels,
        } => {
            let mut cfg = RunConfig::new(&common)?.with_frontend(&frontend)?;
            cfg.params = model.params()?;
            cmd_segment(&cfg, save_labels)
        }
        Command::Eval {
            common,
            frontend,
            metrics,
        } => {
            let mut cfg = RunConfig::new(&common)?.with_frontend(&frontend)?;
            cfg.metrics = metrics.options()?;
            cfg.model = metrics.model.clone();
            cmd_eval(&cfg)
        }
        Command::Sweep {
            common,
            frontend,
            model,
            metrics,
            param,
            values,
        } => {
            let mut cfg = RunConfig::new(&common)?.with_frontend(&frontend)?;
            cfg.params = model.params()?;
            cfg.metrics = metrics.options()?;
            cfg.model = metrics.model.clone();
            cmd_sweep(&cfg, param, values.as_deref())
        }
        Command::Stats {
            common,
            seg,
            blur_sigma,
        } => {
            let cfg = RunConfig::new(&common)?;
            cmd_stats(&cfg, &seg.params()?, blur_sigma)
        }
        Command::Fixmap {
            common,
            blur_sigma,
            held_out,
        } => {
            let cfg = RunConfig::new(&common)?;
            cmd_fixmap(&cfg, blur_sigma, held_out)
        }
    }
}

/// Parses arguments, runs the command and returns the process exit code.
pub fn main_from_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
        }
    };
    match dispatch(cli.command) {
        Ok(0) => EXIT_OK,
        Ok(_) => EXIT_PARTIAL,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_CONFIG
        }
    }
}
