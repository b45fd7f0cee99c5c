//! Asks the policy a few questions, then writes the whole decision table as CSV.
//!
//! `cargo run --example access_policy > table.csv`

use meshat::{seed_course, Action, DecisionTable, Platform, Resource};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut platform = Platform::new();
    let seeded = seed_course(&mut platform, 2, 4)?;
    let state = platform.state();
    let g = state.group(seeded.groups[0]).expect("seeded");
    let other = state.group(seeded.groups[1]).expect("seeded");
    let member = *g.member_ids.iter().find(|m| **m != g.leader_id).expect("members");

    let questions = [
        ("leader reads a member's metacognition", g.leader_id, Action::Read, Resource::StudentMetacogDashboard(member)),
        ("tutor reads a member's metacognition", g.technical_tutor_id, Action::Read, Resource::StudentMetacogDashboard(member)),
        ("student writes in the forum", member, Action::Write, Resource::ForumDiscussion),
        ("other tutor updates tasks", other.management_tutor_id, Action::Write, Resource::Task(g.id)),
        ("member publishes on the group blog", member, Action::Write, Resource::GroupBlog(g.id)),
        ("student writes a contract", member, Action::Write, Resource::LearningContract(member)),
    ];
    for (what, actor, action, resource) in questions {
        let d = platform.authorize(actor, action, &resource)?;
        eprintln!("{:<40} {:<5} {}", what, if d.allow { "allow" } else { "deny" }, d.rule_id);
    }

    let table = DecisionTable::build(state);
    eprintln!("{} rows, {} allowed", table.len(), table.allowed().count());
    table.write_csv(std::io::stdout().lock())?;
    Ok(())
}
