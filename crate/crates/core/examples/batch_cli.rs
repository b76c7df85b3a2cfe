// The batch driver used as a library: segment a benchmark, then score the masks.

use salbase::cli::main_from_args;
use salbase::synthetic::write_benchmark;

pub fn run_example() -> salbase::Result<()> {
    let dir = tempfile::tempdir().map_err(|e| salbase::Error::io(std::env::temp_dir(), e))?;
    write_benchmark(dir.path(), 4, 96, 72)?;
    let manifest = dir.path().join("manifest.toml");
    let seg_out = dir.path().join("segment");
    let eval_out = dir.path().join("eval");

    let code = main_from_args([
        "salbase",
        "segment",
        "--manifest",
        manifest.to_str().unwrap(),
        "--out",
        seg_out.to_str().unwrap(),
        "--workers",
        "2",
    ]);
    println!("segment exited with {code}");

    let code = main_from_args([
        "salbase",
        "eval",
        "--manifest",
        manifest.to_str().unwrap(),
        "--maps",
        seg_out.join("masks").to_str().unwrap(),
        "--model",
        "salbase",
        "--out",
        eval_out.to_str().unwrap(),
    ]);
    println!("eval exited with {code}");
    let summary = std::fs::read_to_string(eval_out.join("summary.csv"))
        .map_err(|e| salbase::Error::io(eval_out.join("summary.csv"), e))?;
    println!("{}", summary.lines().filter(|l| !l.starts_with('#')).collect::<Vec<_>>().join("\n"));
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("batch example");
}
