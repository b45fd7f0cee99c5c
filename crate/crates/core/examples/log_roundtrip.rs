//! Writes a simulated course to a durable log file, reopens it and checks
//! that replay rebuilds the same state and dashboards.
//!
//! `cargo run --example log_roundtrip -- [path]`

use meshat::indicators::snapshot_all;
use meshat::log::export_file;
use meshat::{simulate_course, Platform, SimulationConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = std::env::args()
        .nth(1)
        .map(std::path::PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("meshat-example.jsonl"));
    let config = SimulationConfig {
        weeks: 8,
        ..Default::default()
    };
    let (platform, report) = simulate_course(&config)?;
    export_file(platform.log(), &path)?;
    println!("wrote {} events to {}", platform.last_seq(), path.display());

    let (reopened, torn) = Platform::open(&path)?;
    println!("reopened: {} events, {torn} torn bytes", reopened.last_seq());
    assert_eq!(reopened.state(), platform.state());

    let before = snapshot_all(platform.state(), report.first_week, report.last_week)?;
    let after = snapshot_all(reopened.state(), report.first_week, report.last_week)?;
    let same = before.iter().zip(&after).all(|(a, b)| a.to_json() == b.to_json());
    println!("{} dashboard snapshots, identical: {same}", before.len());
    Ok(())
}
