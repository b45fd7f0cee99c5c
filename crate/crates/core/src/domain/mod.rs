//! Course, roster, tasks, deliverables and the activity log they are built from.

mod course;
mod event;
mod state;
mod work;

use std::collections::BTreeSet;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use crate::ids::{ActorId, CourseId, DeliverableId, GroupId, TaskId};
use crate::time::{Hours, Timestamp};

pub use course::{course_calendar, validate_calendar, NewGroup};
pub use event::{
    ActivityEvent, ContractChange, CourseChange, DashboardChange, DeliverableComment, DeliverableDefinition,
    EvaluationChange, EventKind, ForumChange, Payload, PostChange, RosterChange, TaskChange,
    TaskFields, TaxonomyChange,
};
pub use state::State;
pub use work::{NewTask, TaskUpdate};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Phase {
    Tender,
    MasterPlan,
    Development,
    Closure,
}

impl Phase {
    pub const ALL: [Phase; 4] = [
        Phase::Tender,
        Phase::MasterPlan,
        Phase::Development,
        Phase::Closure,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Phase::Tender => "Answer to the call for tender",
            Phase::MasterPlan => "Master plan",
            Phase::Development => "Development",
            Phase::Closure => "Closure and reports",
        }
    }
}

/// One phase of the course calendar. Both dates are inclusive.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhaseWindow {
    pub phase: Phase,
    pub start: NaiveDate,
    pub end: NaiveDate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum CourseStatus {
    Setup,
    Running,
    Closed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Course {
    pub id: CourseId,
    pub name: String,
    pub calendar: Vec<PhaseWindow>,
    pub status: CourseStatus,
    pub created_at: Timestamp,
}

impl Course {
    pub fn phase_on(&self, date: NaiveDate) -> Option<Phase> {
        self.calendar
            .iter()
            .find(|w| w.start <= date && date <= w.end)
            .map(|w| w.phase)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Role {
    Student,
    ProjectLeader,
    TechnicalTutor,
    ManagementTutor,
    TechnicalManager,
    ManagementManager,
    Teacher,
    Director,
}

impl Role {
    pub const ALL: [Role; 8] = [
        Role::Student,
        Role::ProjectLeader,
        Role::TechnicalTutor,
        Role::ManagementTutor,
        Role::TechnicalManager,
        Role::ManagementManager,
        Role::Teacher,
        Role::Director,
    ];

    /// Students and project leaders; a leader is a member of their group.
    pub fn is_student(self) -> bool {
        matches!(self, Role::Student | Role::ProjectLeader)
    }

    pub fn is_tutor(self) -> bool {
        matches!(self, Role::TechnicalTutor | Role::ManagementTutor)
    }

    pub fn is_manager(self) -> bool {
        matches!(self, Role::TechnicalManager | Role::ManagementManager)
    }

    /// Roles that belong to a project group.
    pub fn needs_group(self) -> bool {
        self.is_student() || self.is_tutor()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Actor {
    pub id: ActorId,
    pub name: String,
    pub role: Role,
    pub group_id: Option<GroupId>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProjectGroup {
    pub id: GroupId,
    pub name: String,
    pub member_ids: BTreeSet<ActorId>,
    pub leader_id: ActorId,
    pub technical_tutor_id: ActorId,
    pub management_tutor_id: ActorId,
    pub subject: String,
}

impl ProjectGroup {
    pub fn is_member(&self, actor: ActorId) -> bool {
        self.member_ids.contains(&actor)
    }

    pub fn is_tutor(&self, actor: ActorId) -> bool {
        self.technical_tutor_id == actor || self.management_tutor_id == actor
    }

    pub fn size(&self) -> usize {
        self.member_ids.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum TaskStatus {
    Planned,
    Active,
    Done,
}

/// Outcome of the dependency check made when a task first becomes active.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StartCheck {
    pub at: Timestamp,
    pub had_dependencies: bool,
    pub dependencies_done: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Task {
    pub id: TaskId,
    pub group_id: GroupId,
    pub title: String,
    pub assignee_id: Option<ActorId>,
    pub original_assignee_id: Option<ActorId>,
    pub dependency_ids: BTreeSet<TaskId>,
    pub status: TaskStatus,
    pub planned_start: NaiveDate,
    pub planned_end: NaiveDate,
    pub actual_start: Option<NaiveDate>,
    pub actual_end: Option<NaiveDate>,
    pub status_history: Vec<(Timestamp, TaskStatus)>,
    /// Every assignee change, including the initial one.
    pub assignment_history: Vec<(Timestamp, Option<ActorId>)>,
    pub start_check: Option<StartCheck>,
}

impl Task {
    /// Status in force just before `cutoff`, or `None` if the task did not exist yet.
    pub fn status_before(&self, cutoff: Timestamp) -> Option<TaskStatus> {
        self.status_history
            .iter()
            .take_while(|(ts, _)| *ts < cutoff)
            .last()
            .map(|(_, s)| *s)
    }

    pub fn assignee_before(&self, cutoff: Timestamp) -> Option<ActorId> {
        self.assignment_history
            .iter()
            .take_while(|(ts, _)| *ts < cutoff)
            .last()
            .and_then(|(_, a)| *a)
    }

    pub fn created_at(&self) -> Timestamp {
        self.status_history[0].0
    }

    /// True once the assignee was moved away from the original assignee.
    pub fn reassigned_before(&self, cutoff: Timestamp) -> bool {
        let Some(original) = self.original_assignee_id else {
            return false;
        };
        self.assignment_history
            .iter()
            .take_while(|(ts, _)| *ts < cutoff)
            .any(|(_, a)| matches!(a, Some(b) if *b != original))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Deliverable {
    pub id: DeliverableId,
    pub group_id: GroupId,
    pub title: String,
    pub due: NaiveDate,
    pub defined_at: Timestamp,
    pub submitted_at: Option<Timestamp>,
    pub accepted_at: Option<Timestamp>,
    pub accepted_by: Option<ActorId>,
    pub comment_count: u32,
    pub comment_times: Vec<Timestamp>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TimeEntry {
    pub student_id: ActorId,
    pub date: NaiveDate,
    pub hours: Hours,
}

/// One item of the group's "skills to build" checklist.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkillItem {
    pub skill: String,
    pub done: bool,
}
