macro_rules! example_test {
    ($module:ident, $file:literal) => {
        mod $module {
            include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/", $file));
        }

        #[test]
        fn $module() {
            $module::run_example().expect(concat!($file, " should run"));
        }
    };
}

example_test!(segment_superpixels, "segment_superpixels.rs");
example_test!(salbase_pipeline, "salbase_pipeline.rs");
example_test!(evaluate_maps, "evaluate_maps.rs");
example_test!(fixation_maps, "fixation_maps.rs");
example_test!(spectral_standin, "spectral_standin.rs");
example_test!(dataset_statistics, "dataset_statistics.rs");
example_test!(batch_cli, "batch_cli.rs");
