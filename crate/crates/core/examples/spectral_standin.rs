// The built-in spectral-residual map as a frontend for the object model.
//
// The stand-in is a simple substitute for a published saliency model and is
// labelled as such in every output.

use salbase::frontend::FrontendSpec;
use salbase::metrics::overlap_omega;
use salbase::synthetic::scene;
use salbase::{run_salbase, SalBaseParams};

pub fn run_example() -> salbase::Result<()> {
    let spec = FrontendSpec::SpectralStandin;
    for seed in 0..3 {
        let s = scene(128, 96, 90 + seed);
        let map = spec.produce(&s.image, None)?;
        let params = SalBaseParams {
            keep_peak_fallback: true,
            ..SalBaseParams::default()
        };
        let result = run_salbase(&s.image, &map, &params)?;
        println!(
            "scene {seed}: {} peak {:?}, mask {} px, omega {:.3}{}",
            spec.label(),
            map.argmax(),
            result.mask.count(),
            overlap_omega(&result.mask, &s.mask).unwrap_or(0.0),
            if result.used_fallback { " (peak fallback)" } else { "" }
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("stand-in example");
}
