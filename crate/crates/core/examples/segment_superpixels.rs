// Graph-based superpixels on a synthetic texture at three granularities.

use salbase::synthetic::texture;
use salbase::{segment, SegmentationParams};

pub fn run_example() -> salbase::Result<()> {
    let image = texture(160, 120, 11);
    for (name, params) in [
        ("fine", SegmentationParams::fine()),
        ("default", SegmentationParams::default()),
        ("coarse", SegmentationParams::coarse()),
    ] {
        let labeling = segment(&image, &params)?;
        let sizes = labeling.sizes();
        let border = labeling.touches_border().iter().filter(|&&b| b).count();
        println!(
            "{name:>8}: {:3} segments, smallest {:4} px, {border} touch the border",
            labeling.segment_count(),
            sizes.iter().min().unwrap()
        );
    }

    let out = tempfile::tempdir().map_err(|e| salbase::Error::io(std::env::temp_dir(), e))?;
    let path = out.path().join("labels.png");
    salbase::io::save_labels(&segment(&image, &SegmentationParams::default())?, &path)?;
    println!("label image written to {}", path.display());
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("segmentation example");
}
