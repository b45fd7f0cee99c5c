//! Runs a seeded 26-week simulation of the full course and prints the
//! working time each group accumulated.
//!
//! `cargo run --example simulate_course -- [seed] [weeks]`

use std::time::Instant;

use meshat::indicators::compute_project_dashboard;
use meshat::{simulate_course, SimulationConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let mut config = SimulationConfig::default();
    if let Some(seed) = args.next() {
        config.seed = seed.parse()?;
    }
    if let Some(weeks) = args.next() {
        config.weeks = weeks.parse()?;
    }

    let started = Instant::now();
    let (platform, report) = simulate_course(&config)?;
    println!(
        "seed {} : {} events over weeks {} to {} in {:.2?}",
        config.seed,
        report.events,
        report.first_week,
        report.last_week,
        started.elapsed()
    );

    let state = platform.state();
    for group in state.groups() {
        let dashboard = compute_project_dashboard(state, group.id, report.last_week)?;
        println!(
            "{:<12} {:>9} h  tasks {:>2}/{:>2}/{:>2}  delay {:>3} d",
            group.name,
            dashboard.working_time.cumulative_total,
            dashboard.open_tasks.planned,
            dashboard.open_tasks.active,
            dashboard.open_tasks.done,
            dashboard.total_delay_days,
        );
    }
    Ok(())
}
