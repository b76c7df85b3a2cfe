// Dataset statistics over a generated benchmark: center bias, object
// distance and size, superpixel complexity, fixation ratios, agreement.

use salbase::dataset::{dataset_report, DatasetManifest};
use salbase::synthetic::write_benchmark;
use salbase::SegmentationParams;

pub fn run_example() -> salbase::Result<()> {
    let dir = tempfile::tempdir().map_err(|e| salbase::Error::io(std::env::temp_dir(), e))?;
    write_benchmark(dir.path(), 6, 96, 72)?;
    let manifest = DatasetManifest::load(&dir.path().join("manifest.toml"))?;
    let report = dataset_report(&manifest, &SegmentationParams::default());

    println!("id       dist  size   sp(obj/bg/all) center fix  r_k");
    for row in &report.rows {
        let s = &row.stats;
        println!(
            "{:8} {:.3} {:.4} {:3}/{:3}/{:3}    {:5}  {:.2} {:.2}",
            row.id,
            s.normalized_distance,
            s.size_ratio,
            s.superpixels_object,
            s.superpixels_background,
            s.superpixels_all,
            s.on_center,
            s.fixation_ratio.unwrap_or(f64::NAN),
            row.agreement.unwrap_or(f64::NAN)
        );
    }
    for h in &report.histograms {
        let filled: Vec<String> = h
            .counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(i, c)| format!("[{:.3},{:.3}):{c}", h.edges[i], h.edges[i + 1]))
            .collect();
        println!("{}: {}", h.name, filled.join(" "));
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("statistics example");
}
