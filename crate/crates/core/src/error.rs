use crate::ids::Seq;
use crate::policy::{PolicyDecision, RuleId};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("forbidden by {}: {}", .0.rule_id, .0.explanation)]
    Forbidden(PolicyDecision),
    #[error("invalid calendar: {0}")]
    InvalidCalendar(String),
    #[error("value out of range: {0}")]
    OutOfRange(String),
    #[error("adjustment {0} outside [-2, +2]")]
    AdjustmentOutOfRange(f64),
    #[error("no course has been created")]
    NoCourse,
    #[error("a course already exists")]
    CourseExists,
    #[error("course is closed")]
    AlreadyClosed,
    #[error("operation not allowed while the course is {0}")]
    WrongCourseStatus(&'static str),
    #[error("roster is fixed once the course leaves setup")]
    RosterLocked,
    #[error("roster incomplete: {0}")]
    IncompleteRoster(String),
    #[error("leader is not a member of the group")]
    LeaderNotMember,
    #[error("a tutor is also listed as a member")]
    TutorIsMember,
    #[error("the same actor cannot be both tutors of a group")]
    DuplicateTutor,
    #[error("invalid group: {0}")]
    InvalidGroup(String),
    #[error("task dependencies would form a cycle")]
    CycleDetected,
    #[error("unknown actor {0}")]
    UnknownActor(String),
    #[error("unknown group {0}")]
    UnknownGroup(String),
    #[error("unknown task {0}")]
    UnknownTask(String),
    #[error("unknown deliverable {0}")]
    UnknownDeliverable(String),
    #[error("unknown post {0}")]
    UnknownPost(String),
    #[error("unknown discussion {0}")]
    UnknownDiscussion(String),
    #[error("unknown tag {0}")]
    UnknownTag(String),
    #[error("unknown parent subject {0}")]
    UnknownParent(String),
    #[error("unknown resource: {0}")]
    UnknownResource(String),
    #[error("unknown event seq {0}")]
    UnknownEventSeq(Seq),
    #[error("deliverable has not been submitted")]
    NotSubmitted,
    #[error("deliverable already submitted")]
    AlreadySubmitted,
    #[error("deliverable already accepted")]
    AlreadyAccepted,
    #[error("post already published")]
    AlreadyPublished,
    #[error("a discussion needs at least one tag")]
    EmptyTags,
    #[error("label `{0}` already used by a sibling")]
    DuplicateLabel(String),
    #[error("invalid taxonomy operation: {0}")]
    InvalidTaxonomy(String),
    #[error("learning contract cannot be changed while the course is in progress")]
    ContractLocked,
    #[error("learning contract already exists")]
    AlreadyExists,
    #[error("no learning contract for {0}")]
    UnknownContract(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("store already contains events")]
    StoreNotEmpty,
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("log does not match the expected schema at seq {seq}: {reason}")]
    SchemaMismatch { seq: Seq, reason: String },
    #[error("io failure: {0}")]
    Io(#[from] std::io::Error),
    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    /// Stable machine-readable code used on the wire.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Forbidden(_) => "Forbidden",
            Error::InvalidCalendar(_) => "InvalidCalendar",
            Error::OutOfRange(_) => "OutOfRange",
            Error::AdjustmentOutOfRange(_) => "AdjustmentOutOfRange",
            Error::NoCourse => "NoCourse",
            Error::CourseExists => "CourseExists",
            Error::AlreadyClosed => "AlreadyClosed",
            Error::WrongCourseStatus(_) => "WrongCourseStatus",
            Error::RosterLocked => "RosterLocked",
            Error::IncompleteRoster(_) => "IncompleteRoster",
            Error::LeaderNotMember => "LeaderNotMember",
            Error::TutorIsMember => "TutorIsMember",
            Error::DuplicateTutor => "DuplicateTutor",
            Error::InvalidGroup(_) => "InvalidGroup",
            Error::CycleDetected => "CycleDetected",
            Error::UnknownActor(_) => "UnknownActor",
            Error::UnknownGroup(_) => "UnknownGroup",
            Error::UnknownTask(_) => "UnknownTask",
            Error::UnknownDeliverable(_) => "UnknownDeliverable",
            Error::UnknownPost(_) => "UnknownPost",
            Error::UnknownDiscussion(_) => "UnknownDiscussion",
            Error::UnknownTag(_) => "UnknownTag",
            Error::UnknownParent(_) => "UnknownParent",
            Error::UnknownResource(_) => "UnknownResource",
            Error::UnknownEventSeq(_) => "UnknownEventSeq",
            Error::NotSubmitted => "NotSubmitted",
            Error::AlreadySubmitted => "AlreadySubmitted",
            Error::AlreadyAccepted => "AlreadyAccepted",
            Error::AlreadyPublished => "AlreadyPublished",
            Error::EmptyTags => "EmptyTags",
            Error::DuplicateLabel(_) => "DuplicateLabel",
            Error::InvalidTaxonomy(_) => "InvalidTaxonomy",
            Error::ContractLocked => "ContractLocked",
            Error::AlreadyExists => "AlreadyExists",
            Error::UnknownContract(_) => "UnknownContract",
            Error::InvalidInput(_) => "InvalidInput",
            Error::StoreNotEmpty => "StoreNotEmpty",
            Error::InvalidConfig(_) => "InvalidConfig",
            Error::SchemaMismatch { .. } => "SchemaMismatch",
            Error::Io(_) => "IoFailure",
            Error::Internal(_) => "Internal",
        }
    }

    /// Rule behind a policy denial, if any.
    pub fn rule_id(&self) -> Option<RuleId> {
        match self {
            Error::Forbidden(decision) => Some(decision.rule_id),
            _ => None,
        }
    }
}
