use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::domain::{CourseStatus, EvaluationChange, Payload, State};
use crate::error::{Error, Result};
use crate::ids::{ActorId, GroupId};
use crate::platform::Platform;
use crate::policy::{Action, Resource};

pub const MAX_GRADE: f64 = 20.0;
pub const MAX_ADJUSTMENT: f64 = 2.0;

/// Stored grading of one group.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct EvaluationRecord {
    pub group_grade: Option<f64>,
    pub adjustments: BTreeMap<ActorId, f64>,
}

/// Derived grades for a group and each of its members.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Evaluation {
    pub group_id: GroupId,
    pub group_grade: Option<f64>,
    pub individual: BTreeMap<ActorId, IndividualGrade>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IndividualGrade {
    pub adjustment: f64,
    pub grade: Option<f64>,
}

pub fn individual_grade(group_grade: f64, adjustment: f64) -> f64 {
    (group_grade + adjustment).clamp(0.0, MAX_GRADE)
}

pub fn compute_evaluation(state: &State, group: GroupId) -> Result<Evaluation> {
    let g = state
        .group(group)
        .ok_or_else(|| Error::UnknownGroup(group.to_string()))?;
    let record = state.evaluation(group);
    let group_grade = record.and_then(|r| r.group_grade);
    let individual = g
        .member_ids
        .iter()
        .map(|&s| {
            let adjustment = record
                .and_then(|r| r.adjustments.get(&s).copied())
                .unwrap_or(0.0);
            let grade = group_grade.map(|gg| individual_grade(gg, adjustment));
            (s, IndividualGrade { adjustment, grade })
        })
        .collect();
    Ok(Evaluation {
        group_id: group,
        group_grade,
        individual,
    })
}

fn check_grading_open(state: &State) -> Result<()> {
    match state.course_status() {
        None => Err(Error::NoCourse),
        Some(CourseStatus::Setup) => Err(Error::WrongCourseStatus("course has not started")),
        Some(_) => Ok(()),
    }
}

impl Platform {
    pub fn evaluate_group(&mut self, actor: ActorId, group: GroupId, grade: f64) -> Result<()> {
        self.authorize_or_fail(actor, Action::Write, &Resource::Evaluation(group))?;
        check_grading_open(self.state())?;
        if !grade.is_finite() || !(0.0..=MAX_GRADE).contains(&grade) {
            return Err(Error::OutOfRange(format!("grade {grade} not in 0..=20")));
        }
        self.commit(
            actor,
            Payload::Evaluation(EvaluationChange::GroupGrade { group_id: group, grade }),
        )?;
        Ok(())
    }

    pub fn evaluate_student(&mut self, actor: ActorId, student: ActorId, adjustment: f64) -> Result<()> {
        let group = self
            .state()
            .actor(student)
            .filter(|a| a.role.is_student())
            .and_then(|a| a.group_id)
            .ok_or_else(|| Error::UnknownActor(student.to_string()))?;
        self.authorize_or_fail(actor, Action::Write, &Resource::Evaluation(group))?;
        check_grading_open(self.state())?;
        if !adjustment.is_finite() || adjustment.abs() > MAX_ADJUSTMENT {
            return Err(Error::AdjustmentOutOfRange(adjustment));
        }
        self.commit(
            actor,
            Payload::Evaluation(EvaluationChange::StudentAdjustment {
                student_id: student,
                adjustment,
            }),
        )?;
        Ok(())
    }

    pub fn read_evaluation(&self, actor: ActorId, group: GroupId) -> Result<Evaluation> {
        self.authorize_or_fail(actor, Action::Read, &Resource::Evaluation(group))?;
        compute_evaluation(self.state(), group)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clamps_to_scale() {
        assert_eq!(individual_grade(19.5, 2.0), 20.0);
        assert_eq!(individual_grade(1.0, -2.0), 0.0);
        assert_eq!(individual_grade(12.0, 1.5), 13.5);
    }
}
