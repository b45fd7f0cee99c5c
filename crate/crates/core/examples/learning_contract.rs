//! A student's learning contract: written during the course, frozen until
//! the course closes, then revised with links to blog posts.

use meshat::{seed_course, ContractAnswers, Error, Platform};

fn answers(when: &str) -> ContractAnswers {
    ContractAnswers::from_array([
        format!("{when}: industrial networks"),
        "by configuring the client's PLC bench".into(),
        "the technical tutor".into(),
        "week 2".into(),
        "the bench runs without my notes".into(),
        "the client signs off the commissioning".into(),
    ])
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut platform = Platform::new();
    let seeded = seed_course(&mut platform, 1, 3)?;
    let student = seeded.students[1];

    platform.init_learning_contract(student, student, answers("start"))?;
    match platform.revise_learning_contract(student, student, answers("mid"), vec![]) {
        Err(Error::ContractLocked) => println!("revision refused while the course runs"),
        other => println!("unexpected: {other:?}"),
    }

    platform.write_student_post(student, student, "Finally understood fieldbus timing")?;
    let post_seq = platform.last_seq();
    platform.advance_course(seeded.director)?;

    let c = platform.revise_learning_contract(student, student, answers("end"), vec![post_seq])?;
    println!("status {:?}", c.status);
    for (q, a) in ContractAnswers::QUESTIONS.iter().zip(c.answers.as_array()) {
        println!("  {q} {a}");
    }
    if let Some(rev) = &c.revision {
        println!("revised at {} citing events {:?}", rev.revised_at, rev.linked_seqs);
        println!("  now: {}", rev.answers.what_do_i_want_to_learn);
    }
    Ok(())
}
