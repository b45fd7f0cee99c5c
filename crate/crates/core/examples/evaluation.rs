//! Tutors grade a group on the 0 to 20 scale and adjust individual students
//! by at most two points.

use meshat::{seed_course, Error, Platform};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut platform = Platform::new();
    let seeded = seed_course(&mut platform, 1, 4)?;
    let group = platform.state().group(seeded.groups[0]).expect("seeded").clone();
    let tutor = group.management_tutor_id;
    let members: Vec<_> = group.member_ids.iter().copied().collect();

    platform.evaluate_group(tutor, group.id, 18.5)?;
    platform.evaluate_student(tutor, members[0], 2.0)?;
    platform.evaluate_student(group.technical_tutor_id, members[1], -1.5)?;
    if let Err(Error::AdjustmentOutOfRange(a)) = platform.evaluate_student(tutor, members[2], 2.5) {
        println!("adjustment {a} refused");
    }

    let evaluation = platform.read_evaluation(members[3], group.id)?;
    println!("{} group grade {:?}", group.name, evaluation.group_grade);
    for (student, grade) in &evaluation.individual {
        let name = &platform.state().actor(*student).expect("member").name;
        println!("  {name:<14} {:+.1} -> {:?}", grade.adjustment, grade.grade);
    }
    Ok(())
}
