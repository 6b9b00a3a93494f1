//! Runs a scenario through the same path as the `chronos` binary and lists
//! the files it wrote.

use chronos::experiments::{parse_config, run_scenario};

fn main() -> chronos::Result<()> {
    let root = std::env::temp_dir().join("chronos-example");
    let out = root.join("out").to_string_lossy().into_owned();
    let cache = root.join("cache").to_string_lossy().into_owned();
    let resolved = parse_config([
        "chronos", "ctoa-arrival", "--gamma", "0.01", "--K", "256", "--target-tau", "0.02765",
        "--format", "csv+svg", "--out", &out, "--cache", &cache,
    ])?;
    let manifest = run_scenario(&resolved.config, &resolved.notices)?;
    for f in &manifest.files {
        println!("{:<20} {:>9} bytes  {}", f.file, f.bytes, &f.sha256[..16]);
    }
    println!("{}", serde_json::to_string_pretty(&manifest.summary)?);
    Ok(())
}
