use std::collections::BTreeSet;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use super::{CourseStatus, PhaseWindow, Role, SkillItem, TaskStatus, TimeEntry};
use crate::ids::{
    ActorId, CourseId, DeliverableId, DiscussionId, GroupId, PostId, Seq, SubjectId, TaskId,
};
use crate::indicators::SelfReportItem;
use crate::sharing::{ContractAnswers, TaxonomyRoot};
use crate::time::{Period, Timestamp};

/// One entry of the append-only activity log.
///
/// Exported as a single JSON object per line:
/// `{"seq":..,"timestamp":..,"actor_id":..,"kind":..,"payload":..}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ActivityEvent {
    pub seq: Seq,
    pub timestamp: Timestamp,
    pub actor_id: ActorId,
    #[serde(flatten)]
    pub payload: Payload,
}

impl ActivityEvent {
    pub fn kind(&self) -> EventKind {
        self.payload.kind()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum EventKind {
    CourseUpdate,
    RosterUpdate,
    TimeEntry,
    FrameOfMind,
    TaskUpdate,
    DashboardUpdate,
    DeliverableSubmit,
    DeliverableAccept,
    DeliverableComment,
    BlogPost,
    ForumMessage,
    TaxonomyUpdate,
    SelfReport,
    Evaluation,
    ContractUpdate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "payload")]
pub enum Payload {
    CourseUpdate(CourseChange),
    RosterUpdate(RosterChange),
    TimeEntry(TimeEntry),
    FrameOfMind {
        student_id: ActorId,
        period: Period,
        score: u8,
    },
    TaskUpdate(TaskChange),
    DashboardUpdate(DashboardChange),
    DeliverableSubmit {
        deliverable_id: DeliverableId,
    },
    DeliverableAccept {
        deliverable_id: DeliverableId,
    },
    DeliverableComment(DeliverableComment),
    BlogPost(PostChange),
    ForumMessage(ForumChange),
    TaxonomyUpdate(TaxonomyChange),
    SelfReport {
        student_id: ActorId,
        period: Period,
        items: Vec<SelfReportItem>,
    },
    Evaluation(EvaluationChange),
    ContractUpdate(ContractChange),
}

impl Payload {
    pub fn kind(&self) -> EventKind {
        match self {
            Payload::CourseUpdate(_) => EventKind::CourseUpdate,
            Payload::RosterUpdate(_) => EventKind::RosterUpdate,
            Payload::TimeEntry(_) => EventKind::TimeEntry,
            Payload::FrameOfMind { .. } => EventKind::FrameOfMind,
            Payload::TaskUpdate(_) => EventKind::TaskUpdate,
            Payload::DashboardUpdate(_) => EventKind::DashboardUpdate,
            Payload::DeliverableSubmit { .. } => EventKind::DeliverableSubmit,
            Payload::DeliverableAccept { .. } => EventKind::DeliverableAccept,
            Payload::DeliverableComment(_) => EventKind::DeliverableComment,
            Payload::BlogPost(_) => EventKind::BlogPost,
            Payload::ForumMessage(_) => EventKind::ForumMessage,
            Payload::TaxonomyUpdate(_) => EventKind::TaxonomyUpdate,
            Payload::SelfReport { .. } => EventKind::SelfReport,
            Payload::Evaluation(_) => EventKind::Evaluation,
            Payload::ContractUpdate(_) => EventKind::ContractUpdate,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum CourseChange {
    /// Also creates the three taxonomy roots, subjects 1 to 3 in
    /// [`TaxonomyRoot::ALL`] order.
    Created {
        course_id: CourseId,
        name: String,
        calendar: Vec<PhaseWindow>,
    },
    Advanced {
        to: CourseStatus,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum RosterChange {
    ActorRegistered {
        actor_id: ActorId,
        name: String,
        role: Role,
    },
    GroupCreated {
        group_id: GroupId,
        name: String,
        member_ids: BTreeSet<ActorId>,
        leader_id: ActorId,
        technical_tutor_id: ActorId,
        management_tutor_id: ActorId,
        subject: String,
    },
}

/// Complete editable state of a task, recorded in full on every change.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TaskFields {
    pub title: String,
    pub assignee_id: Option<ActorId>,
    pub dependency_ids: BTreeSet<TaskId>,
    pub status: TaskStatus,
    pub planned_start: NaiveDate,
    pub planned_end: NaiveDate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum TaskChange {
    Created {
        task_id: TaskId,
        group_id: GroupId,
        fields: TaskFields,
    },
    Updated {
        task_id: TaskId,
        fields: TaskFields,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeliverableDefinition {
    pub deliverable_id: DeliverableId,
    pub group_id: GroupId,
    pub title: String,
    pub due: NaiveDate,
}

/// Leader-written group dashboard content.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum DashboardChange {
    DefineDeliverable(DeliverableDefinition),
    SetSkills {
        group_id: GroupId,
        items: Vec<SkillItem>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeliverableComment {
    pub deliverable_id: DeliverableId,
    pub body: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum PostChange {
    StudentPost {
        post_id: PostId,
        student_id: ActorId,
        body: String,
    },
    GroupProposal {
        post_id: PostId,
        group_id: GroupId,
        body: String,
    },
    GroupConfirm {
        post_id: PostId,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum ForumChange {
    Opened {
        discussion_id: DiscussionId,
        title: String,
        body: String,
        tags: BTreeSet<SubjectId>,
    },
    Reply {
        discussion_id: DiscussionId,
        body: String,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum TaxonomyChange {
    Seeded {
        subject_id: SubjectId,
        parent_id: Option<SubjectId>,
        root: TaxonomyRoot,
        label: String,
    },
    Proposed {
        subject_id: SubjectId,
        parent_id: SubjectId,
        label: String,
    },
    Renamed {
        subject_id: SubjectId,
        label: String,
    },
    Merged {
        from: SubjectId,
        into: SubjectId,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum EvaluationChange {
    GroupGrade {
        group_id: GroupId,
        grade: f64,
    },
    StudentAdjustment {
        student_id: ActorId,
        adjustment: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum ContractChange {
    Initialized {
        owner_id: ActorId,
        answers: ContractAnswers,
    },
    Revised {
        owner_id: ActorId,
        answers: ContractAnswers,
        linked_seqs: Vec<Seq>,
    },
}

#[cfg(test)]
mod tests {
    use super::*;
    use chrono::TimeZone;
    use chrono::Utc;

    #[test]
    fn record_layout_is_flat_and_ordered() {
        let event = ActivityEvent {
            seq: 7,
            timestamp: Utc.with_ymd_and_hms(2025, 11, 3, 9, 0, 0).unwrap(),
            actor_id: ActorId(4),
            payload: Payload::DeliverableSubmit {
                deliverable_id: DeliverableId(2),
            },
        };
        let line = serde_json::to_string(&event).unwrap();
        assert_eq!(
            line,
            r#"{"seq":7,"timestamp":"2025-11-03T09:00:00Z","actor_id":4,"kind":"DeliverableSubmit","payload":{"deliverable_id":2}}"#
        );
        let back: ActivityEvent = serde_json::from_str(&line).unwrap();
        assert_eq!(back, event);
        assert_eq!(back.kind(), EventKind::DeliverableSubmit);
    }

    #[test]
    fn unknown_kind_is_rejected() {
        let line = r#"{"seq":1,"timestamp":"2025-11-03T09:00:00Z","actor_id":4,"kind":"Nope","payload":{}}"#;
        assert!(serde_json::from_str::<ActivityEvent>(line).is_err());
    }
}
