//! Runs a trimmed preset through the batch harness and checks the manifest.
//!
//! ```text
//! cargo run --release --example figure_batch [preset] [out-dir]
//! ```

use std::path::PathBuf;

use fwkit::harness::{figure_preset, run_batch, verify_manifest, PRESETS};

fn main() -> fwkit::Result<()> {
    let mut args = std::env::args().skip(1);
    let preset = args.next().unwrap_or_else(|| "wolfe".into());
    let dir = args.next().map_or_else(|| std::env::temp_dir().join("fwkit-figure"), PathBuf::from);
    println!("presets: {}", PRESETS.join(", "));

    let mut configs = figure_preset(&preset, false)?;
    for cfg in &mut configs {
        cfg.iterations = cfg.iterations.min(2000);
    }
    let report = run_batch(&configs, &dir, 4)?;
    for entry in &report.entries {
        println!("{:<40} {:<12} {}", entry.file, entry.rule, entry.status);
    }
    let bad = verify_manifest(&dir)?;
    println!("{} traces in {}, {} checksum mismatches", report.entries.len(), dir.display(), bad.len());
    Ok(())
}
