//! Prints the project dashboard, teamwork ratios and a tutor's monitoring
//! view for one group of a simulated course.
//!
//! `cargo run --example dashboards -- [seed] [week-index]`

use meshat::{
    compute_project_dashboard, compute_teamwork_indicators, simulate_course, SimulationConfig,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let seed = args.next().map(|s| s.parse()).transpose()?.unwrap_or(7);
    let index: u32 = args.next().map(|s| s.parse()).transpose()?.unwrap_or(9);
    let config = SimulationConfig {
        seed,
        weeks: 12,
        ..Default::default()
    };
    let (platform, report) = simulate_course(&config)?;
    let mut week = report.first_week;
    for _ in 0..index.min(config.weeks - 1) {
        week = week.next();
    }

    let state = platform.state();
    let group = state.groups().next().expect("seeded");
    let d = compute_project_dashboard(state, group.id, week)?;
    println!("{} in week {}", group.name, week);
    match d.frame_of_mind {
        Some(fom) => println!("frame of mind {fom:.2} from {} answers", d.frame_of_mind_responses),
        None => println!("frame of mind: no answers"),
    }
    println!("hours this week {}, since the start {}", d.working_time.period_total, d.working_time.cumulative_total);
    for m in &d.working_time.members {
        let name = &state.actor(m.student_id).expect("member").name;
        println!("  {name:<16} {:>7} {:>8}", m.period_hours, m.cumulative_hours);
    }
    println!("tasks planned {} active {} done {}", d.open_tasks.planned, d.open_tasks.active, d.open_tasks.done);
    for del in &d.deliverables_due {
        println!("  {:<28} due {} {:?} delay {} d", del.title, del.due, del.state, del.delay_days);
    }

    let teamwork = compute_teamwork_indicators(state, group.id, week)?;
    for (name, r) in teamwork.all() {
        let note = if r.no_data { " (no data)" } else { "" };
        println!("{name:>14} {:.2} = {}/{}{note}", r.value, r.numerator, r.denominator);
    }

    let view = platform.learning_view(group.technical_tutor_id, group.technical_tutor_id, week)?;
    for panel in &view.groups {
        for s in &panel.students {
            let posts: Vec<&str> = s.recent_posts.iter().map(|p| p.headline.as_str()).collect();
            println!("  {:<16} {:>7} fom {:?} posts {:?}", s.name, s.period_hours, s.frame_of_mind, posts);
        }
    }
    Ok(())
}
