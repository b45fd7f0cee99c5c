//! Seeds the standard course (12 groups of 8) and lists who is in it.

use meshat::{seed_paper_course, Platform, TaxonomyRoot};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut platform = Platform::new();
    let seeded = seed_paper_course(&mut platform)?;
    let state = platform.state();
    let course = state.course().expect("seeded");
    println!("{} ({:?}), {} events", course.name, course.status, platform.last_seq());
    for window in &course.calendar {
        println!("  {:<32} {} .. {}", window.phase.label(), window.start, window.end);
    }
    for id in &seeded.groups {
        let g = state.group(*id).expect("seeded");
        let leader = state.actor(g.leader_id).expect("member");
        println!("{}: {} students, leader {}", g.name, g.size(), leader.name);
    }
    let taxonomy = state.forum().taxonomy();
    for root in TaxonomyRoot::ALL {
        let r = taxonomy.root_of(root).expect("seeded");
        println!("{} has {} subjects", root.label(), taxonomy.children(r.id).count());
    }
    Ok(())
}
