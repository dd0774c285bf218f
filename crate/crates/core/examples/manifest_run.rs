//! Loads a TOML manifest, runs it and writes the CSV outputs, as the CLI does.
//!
//! Usage: `cargo run --release --example manifest_run [manifest.toml]`
//! Without an argument the bundled `examples/small.toml` is used. Output goes
//! to `noma-mec-manifest-run` under the system temp directory.

use std::path::PathBuf;

use noma_mec::cli::{execute, load_manifest};

fn main() -> noma_mec::Result<()> {
    let path = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("examples/small.toml"));
    let mut manifest = load_manifest(&path)?;
    manifest.output_dir = std::env::temp_dir().join("noma-mec-manifest-run");
    println!(
        "{} users, {} slots x {} realizations, schemes {:?}",
        manifest.config.num_users(),
        manifest.config.num_slots,
        manifest.config.num_realizations,
        manifest.schemes.iter().map(|s| s.name()).collect::<Vec<_>>()
    );
    let out = execute(&manifest)?;
    for path in [out.summary, out.trace, out.figure_data].into_iter().flatten() {
        println!("wrote {}", path.display());
    }
    println!("wrote {}", out.metadata.display());
    Ok(())
}
