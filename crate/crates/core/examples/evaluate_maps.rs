// Precision/recall, ROC, F-measure and AUC for a handful of saliency maps.

use salbase::metrics::{auc, evaluate_image, pr_curve, reported_f_measure, roc_curve, summarize, MetricOptions};
use salbase::synthetic::scene;

pub fn run_example() -> salbase::Result<()> {
    let opts = MetricOptions::default();
    let scenes: Vec<_> = (0..5).map(|i| scene(96, 72, 40 + i)).collect();

    let first = &scenes[0];
    let pr = pr_curve(&first.map, &first.mask)?;
    let roc = roc_curve(&first.map, &first.mask)?;
    println!(
        "image 0: best F {:.3}, AUC {:.3}, {} curve points",
        reported_f_measure(&first.map, &first.mask, opts.alpha)?,
        auc(&roc),
        pr.points.len()
    );

    let evals = scenes
        .iter()
        .map(|s| evaluate_image(&s.map, &s.mask, &opts))
        .collect::<salbase::Result<Vec<_>>>()?;
    let summary = summarize(&evals, &opts)?;
    println!(
        "{} images: F {:.3} at T={}, AUC {:.3}, omega {:.3}",
        summary.images, summary.f_measure, summary.f_threshold, summary.auc, summary.omega
    );
    print!("{}", summary.pr_curve().to_csv().lines().take(4).collect::<Vec<_>>().join("\n"));
    println!("\n...");
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("evaluation example");
}
