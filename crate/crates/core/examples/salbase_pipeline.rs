// The object model stage by stage, then in one call.

use salbase::metrics::overlap_omega;
use salbase::raster::fill_holes;
use salbase::salbase::{rasterize, select_superpixels, truncate_saliency};
use salbase::synthetic::scene;
use salbase::{run_salbase, segment, SalBaseParams};

pub fn run_example() -> salbase::Result<()> {
    let s = scene(128, 96, 3);
    let params = SalBaseParams::default();

    let labeling = segment(&s.image, &params.seg)?;
    let truncated = truncate_saliency(&s.map, params.beta);
    let selected = select_superpixels(&labeling, &truncated, &params)?;
    let mask = fill_holes(&rasterize(&labeling, &selected));
    println!(
        "{} superpixels, {} pixels above beta={}, {} selected, mask of {} pixels",
        labeling.segment_count(),
        truncated.count(),
        params.beta,
        selected.len(),
        mask.count()
    );

    let result = run_salbase(&s.image, &s.map, &params)?;
    assert_eq!(result.mask, mask);
    println!("omega against ground truth: {:.3}", overlap_omega(&result.mask, &s.mask)?);

    for beta in [0.5, 0.7, 0.9] {
        let r = run_salbase(&s.image, &s.map, &SalBaseParams { beta, ..params })?;
        let omega = overlap_omega(&r.mask, &s.mask).unwrap_or(0.0);
        println!("beta {beta}: {} superpixels, omega {omega:.3}", r.selected_labels.len());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("pipeline example");
}
