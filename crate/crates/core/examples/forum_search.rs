//! Tutors open tagged discussions, grow the taxonomy and search by subject.

use std::collections::BTreeSet;

use meshat::{seed_course, Phase, Platform, TaxonomyRoot};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut platform = Platform::new();
    let seeded = seed_course(&mut platform, 3, 4)?;
    let tutor = seeded.tutors[0];
    let colleague = seeded.tutors[3];

    let taxonomy = platform.state().forum().taxonomy();
    let roles = taxonomy.root_of(TaxonomyRoot::RolesAndTasks).expect("seeded").id;
    let evaluator = taxonomy.find_path("RolesAndTasks/Evaluator").expect("seeded");
    let development = taxonomy
        .find_path(&format!("ProjectCalendar/{}", Phase::Development.label()))
        .expect("seeded");

    let review = platform.propose_subject(tutor, development, "Phase 3 mid-review")?;
    let rubric = platform.propose_subject(colleague, evaluator, "Rubrics")?;

    let a = platform.create_discussion(tutor, "Mid-review format", "Slides or demo?", &BTreeSet::from([review.id]))?;
    platform.create_discussion(colleague, "Peer grading rubric", "Sharing ours.", &BTreeSet::from([rubric.id]))?;
    platform.create_discussion(tutor, "Grading the demo", "Who grades what?", &BTreeSet::from([rubric.id, review.id]))?;
    platform.reply(colleague, a.id, "Demo, always.")?;

    let forum = platform.read_forum(tutor)?;
    let taxonomy = forum.taxonomy();
    for query in [vec![roles], vec![evaluator, development], vec![review.id]] {
        let labels: Vec<String> = query.iter().filter_map(|id| taxonomy.path(*id)).collect();
        println!("search {labels:?}");
        for hit in forum.search(&query.into_iter().collect())? {
            let d = forum.discussion(hit.discussion_id).expect("hit");
            println!("  {} score {} messages {} : {}", d.id, hit.score, d.messages.len(), d.title);
        }
    }
    Ok(())
}
