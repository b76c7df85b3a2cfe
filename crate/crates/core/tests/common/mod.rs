//! Independent reference implementations used by the integration tests.
//!
//! Everything here is computed the slow way: one pass over the pixels per
//! threshold, AUC as a pairwise rank statistic, sAUC over every pair.

#![allow(dead_code)]

use std::path::{Path, PathBuf};

use salbase::dataset::DatasetManifest;
use salbase::frontend::FixationSet;
use salbase::{BinaryMask, SaliencyMap};

pub const BENCH_DIR: &str = "tests/data/bench";
pub const BENCH_MODEL: &str = "synthetic-model";
pub const BENCH_COUNT: usize = 10;
pub const BENCH_SIZE: (usize, usize) = (64, 48);

pub fn bench_manifest() -> PathBuf {
    Path::new(BENCH_DIR).join("manifest.toml")
}

pub fn golden_dir() -> PathBuf {
    Path::new(BENCH_DIR).join("golden")
}

pub fn bless() -> bool {
    std::env::var("SALBASE_BLESS").is_ok_and(|v| v == "1")
}

pub fn q(v: f32) -> i64 {
    (v as f64 * 255.0).round() as i64
}

/// `(|M|, |M ∩ G|)` at threshold `t`, counted pixel by pixel.
pub fn brute_counts(map: &SaliencyMap, gt: &BinaryMask, t: i64) -> (u64, u64) {
    let mut selected = 0;
    let mut hits = 0;
    for y in 0..gt.height() {
        for x in 0..gt.width() {
            if q(map.get(x, y)) >= t {
                selected += 1;
                if gt.get(x, y) {
                    hits += 1;
                }
            }
        }
    }
    (selected, hits)
}

pub struct OracleEval {
    pub precision: Vec<f64>,
    pub recall: Vec<f64>,
    pub fpr: Vec<f64>,
    pub auc: f64,
    pub omega: Option<f64>,
}

/// Per-threshold precision, recall and standard FPR, indexed by threshold.
pub fn oracle_eval(map: &SaliencyMap, gt: &BinaryMask) -> OracleEval {
    let pos = gt.count() as u64;
    let neg = (gt.width() * gt.height()) as u64 - pos;
    let mut precision = Vec::new();
    let mut recall = Vec::new();
    let mut fpr = Vec::new();
    for t in 0..256 {
        let (sel, hit) = brute_counts(map, gt, t);
        precision.push(if sel == 0 { 1.0 } else { hit as f64 / sel as f64 });
        recall.push(hit as f64 / pos as f64);
        fpr.push((sel - hit) as f64 / neg as f64);
    }
    let bin = BinaryMask::from_fn(map.width(), map.height(), |x, y| q(map.get(x, y)) >= 128);
    let inter = (0..gt.bits().len()).filter(|&i| bin.bits()[i] && gt.bits()[i]).count();
    let union = (0..gt.bits().len()).filter(|&i| bin.bits()[i] || gt.bits()[i]).count();
    OracleEval {
        precision,
        recall,
        fpr,
        auc: rank_auc(map, gt),
        omega: (union > 0).then(|| inter as f64 / union as f64),
    }
}

/// Probability that a random object pixel outranks a random background pixel
/// on the quantized map, ties counting one half.
pub fn rank_auc(map: &SaliencyMap, gt: &BinaryMask) -> f64 {
    let mut pos = Vec::new();
    let mut neg = Vec::new();
    for y in 0..gt.height() {
        for x in 0..gt.width() {
            if gt.get(x, y) {
                pos.push(q(map.get(x, y)));
            } else {
                neg.push(q(map.get(x, y)));
            }
        }
    }
    pairwise(&pos, &neg)
}

fn pairwise<T: PartialOrd>(pos: &[T], neg: &[T]) -> f64 {
    let mut wins = 0.0;
    for p in pos {
        for n in neg {
            if p > n {
                wins += 1.0;
            } else if p == n {
                wins += 0.5;
            }
        }
    }
    wins / (pos.len() * neg.len()) as f64
}

/// Shuffled AUC over all positive/negative fixation pairs.
pub fn oracle_sauc(map: &SaliencyMap, positives: &FixationSet, negatives: &FixationSet) -> f64 {
    let at = |f: &FixationSet| -> Vec<f32> {
        f.points()
            .iter()
            .map(|p| map.get(p.x.floor() as usize, p.y.floor() as usize))
            .collect()
    };
    pairwise(&at(positives), &at(negatives))
}

pub fn f_beta(p: f64, r: f64, alpha: f64) -> f64 {
    if p == 0.0 && r == 0.0 {
        0.0
    } else {
        (1.0 + alpha) * p * r / (alpha * p + r)
    }
}

fn f6(v: f64) -> String {
    format!("{v:.6}")
}

/// Expected `eval` outputs (file name, contents) for the bundled benchmark
/// with default metric options.
pub fn oracle_bench_tables() -> Vec<(&'static str, String)> {
    let manifest_path = bench_manifest();
    let manifest = DatasetManifest::load(&manifest_path).expect("bundled manifest");
    let maps_dir = manifest.root.join("maps");
    let alpha = 0.3;

    let mut ids = Vec::new();
    let mut evals = Vec::new();
    let mut maps = Vec::new();
    let mut fixations = Vec::new();
    for e in &manifest.entries {
        let gt = salbase::io::load_mask(e.mask.as_ref().unwrap()).unwrap();
        let map = salbase::io::load_map(&maps_dir.join(format!("{}.png", e.id))).unwrap();
        let fix = FixationSet::from_csv(e.fixations.as_ref().unwrap(), gt.width(), gt.height()).unwrap();
        ids.push(e.id.clone());
        evals.push(oracle_eval(&map, &gt));
        maps.push(map);
        fixations.push(fix);
    }
    let n = evals.len();
    let sauc: Vec<f64> = (0..n)
        .map(|i| {
            let mut neg = Vec::new();
            for (j, f) in fixations.iter().enumerate() {
                if j != i {
                    neg.extend_from_slice(f.points());
                }
            }
            let (w, h) = maps[i].dims();
            let neg = FixationSet::new(w, h, neg).unwrap();
            oracle_sauc(&maps[i], &fixations[i], &neg)
        })
        .collect();

    let meta = format!(
        "# command=eval\n\
         # manifest={}\n\
         # frontend=external\n\
         # maps={}\n\
         # model={BENCH_MODEL}\n\
         # alpha=0.3\n\
         # fpr=standard\n\
         # f_mode=max-threshold\n\
         # f_aggregation=mean-precision-recall-over-images\n\
         # auc_aggregation=mean-of-image-aucs\n\
         # quantization=round(255*s), M={{q>=T}}, T=0..255\n\
         # empty_selection_precision=1\n\
         # omega_binarization=q>=128\n\
         # sauc_negatives=fixations of all other entries, rescaled\n",
        manifest_path.display(),
        maps_dir.display()
    );

    let absent = |v: Option<f64>| v.map(f6).unwrap_or_else(|| "absent".into());
    let mut per_image = format!("{meta}id,f_measure,auc,omega,sauc\n");
    for i in 0..n {
        let e = &evals[i];
        let f = (0..256).map(|t| f_beta(e.precision[t], e.recall[t], alpha)).fold(0.0, f64::max);
        per_image.push_str(&format!(
            "{},{},{},{},{}\n",
            ids[i],
            f6(f),
            f6(e.auc),
            absent(e.omega),
            f6(sauc[i])
        ));
    }

    let mean = |get: &dyn Fn(&OracleEval) -> &Vec<f64>, t: usize| {
        evals.iter().map(|e| get(e)[t]).sum::<f64>() / n as f64
    };
    let mut pr = String::from("threshold,x,y\n");
    let mut roc = String::from("threshold,x,y\n");
    let mut best = (0usize, f64::NEG_INFINITY);
    for t in (0..256).rev() {
        let p = mean(&|e| &e.precision, t);
        let r = mean(&|e| &e.recall, t);
        let fp = mean(&|e| &e.fpr, t);
        pr.push_str(&format!("{t},{},{}\n", f6(r), f6(p)));
        roc.push_str(&format!("{t},{},{}\n", f6(fp), f6(r)));
        let f = f_beta(p, r, alpha);
        if f >= best.1 {
            best = (t, f);
        }
    }
    let auc = evals.iter().map(|e| e.auc).sum::<f64>() / n as f64;
    let omegas: Vec<f64> = evals.iter().filter_map(|e| e.omega).collect();
    let omega = omegas.iter().sum::<f64>() / omegas.len() as f64;
    let sauc_mean = sauc.iter().sum::<f64>() / n as f64;
    let summary = format!(
        "{meta}model,images,f_measure,f_threshold,auc,omega,omega_images,sauc\n{BENCH_MODEL},{n},{},{},{},{},{},{}\n",
        f6(best.1),
        best.0,
        f6(auc),
        f6(omega),
        omegas.len(),
        f6(sauc_mean)
    );
    vec![
        ("per_image.csv", per_image),
        ("pr.csv", pr),
        ("roc.csv", roc),
        ("summary.csv", summary),
    ]
}

/// Regenerates the bundled benchmark and its golden tables.
pub fn bless_bench() {
    let dir = Path::new(BENCH_DIR);
    let _ = std::fs::remove_dir_all(dir);
    salbase::synthetic::write_benchmark(dir, BENCH_COUNT, BENCH_SIZE.0, BENCH_SIZE.1).unwrap();
    let golden = golden_dir();
    std::fs::create_dir_all(&golden).unwrap();
    for (name, text) in oracle_bench_tables() {
        std::fs::write(golden.join(name), text).unwrap();
    }
}

/// Runs the binary's entry point in-process.
pub fn run_cli(args: &[&str]) -> i32 {
    let mut full = vec!["salbase"];
    full.extend_from_slice(args);
    salbase::cli::main_from_args(full)
}

pub fn read(path: &Path) -> String {
    std::fs::read_to_string(path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}
