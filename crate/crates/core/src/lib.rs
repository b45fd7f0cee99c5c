//! Monitoring and experience sharing for project-based learning courses.
//!
//! Everything that happens in a course is an [`ActivityEvent`] appended to a
//! single log through [`Platform`]. Dashboards and indicators are pure
//! functions of the [`State`] folded from that log, and every read or write
//! is checked by the [`policy`] module.
//!
//! ```
//! use meshat::{seed_paper_course, Platform};
//!
//! let mut platform = Platform::new();
//! let seeded = seed_paper_course(&mut platform).unwrap();
//! assert_eq!(seeded.students.len(), 96);
//! assert_eq!(seeded.tutors.len(), 24);
//! ```

pub mod domain;
pub mod error;
pub mod ids;
pub mod indicators;
pub mod log;
pub mod platform;
pub mod policy;
pub mod sharing;
pub mod sim;
pub mod time;

pub use domain::{
    course_calendar, ActivityEvent, Actor, Course, CourseStatus, Deliverable, EventKind, NewGroup,
    NewTask, Payload, Phase, PhaseWindow, ProjectGroup, Role, SkillItem, State, Task, TaskStatus,
    TaskUpdate, TimeEntry,
};
pub use error::{Error, Result};
pub use ids::{ActorId, CourseId, DeliverableId, DiscussionId, GroupId, PostId, Seq, SubjectId, TaskId};
pub use indicators::{
    compute_learning_view, compute_metacognitive_profile, compute_project_dashboard,
    compute_teamwork_indicators, Dimension, Evaluation, LearningMonitoringView,
    MetacognitiveProfile, ProjectDashboard, Questionnaire, SelfReportItem, TeamworkIndicators,
};
pub use log::{export_log, import_log, FileStore};
pub use platform::{EventSink, Platform};
pub use policy::{Action, DecisionTable, PolicyDecision, Resource, ResourceClass, RuleId};
pub use sharing::{BlogOwner, ContractAnswers, LearningContract, TaxonomyRoot};
pub use sim::{seed_course, seed_paper_course, simulate, simulate_course, SimulationConfig, SimulationRates};
pub use time::{Clock, Hours, ManualClock, Period, SystemClock, Timestamp};
