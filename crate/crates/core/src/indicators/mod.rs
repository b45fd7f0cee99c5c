//! Dashboards and indicators. Every `compute_*` function is a pure function
//! of a [`State`](crate::domain::State), which is itself a fold of the log.

mod dashboard;
mod evaluation;
mod metacog;
mod questionnaire;
mod teamwork;
mod view;

pub use dashboard::{
    compute_project_dashboard, compute_project_dashboard_at, DeliverableState, DeliverableStatus,
    MemberTime, ProjectDashboard, TaskCounts, WorkingTime,
};
pub use evaluation::{
    compute_evaluation, individual_grade, Evaluation, EvaluationRecord, IndividualGrade, MAX_ADJUSTMENT,
    MAX_GRADE,
};
pub use metacog::{compute_metacognitive_profile, MetacognitiveProfile, PeriodScores};
pub use questionnaire::{Dimension, Questionnaire, SelfReportItem};
pub use teamwork::{compute_teamwork_indicators, Ratio, TeamworkIndicators};
pub use view::{
    compute_learning_view, BlogHeadline, DashboardSummary, GroupPanel, LearningMonitoringView,
    StudentSummary,
};

use serde::{Deserialize, Serialize};

use crate::domain::State;
use crate::error::Result;
use crate::ids::GroupId;
use crate::time::Period;

/// Diffable per-(group, period) export of every project dashboard and
/// teamwork field.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DashboardSnapshot {
    pub group_id: GroupId,
    pub period: Period,
    pub seq: crate::ids::Seq,
    pub dashboard: ProjectDashboard,
    pub teamwork: TeamworkIndicators,
}

impl DashboardSnapshot {
    pub fn compute(state: &State, group: GroupId, period: Period) -> Result<DashboardSnapshot> {
        Ok(DashboardSnapshot {
            group_id: group,
            period,
            seq: state.last_seq(),
            dashboard: compute_project_dashboard(state, group, period)?,
            teamwork: compute_teamwork_indicators(state, group, period)?,
        })
    }

    /// Pretty JSON with stable key order.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("snapshot serializes")
    }
}

/// Snapshots for every group over every period from `first` to `last` inclusive.
pub fn snapshot_all(state: &State, first: Period, last: Period) -> Result<Vec<DashboardSnapshot>> {
    let mut out = Vec::new();
    let mut period = first;
    while period <= last {
        for g in state.groups() {
            out.push(DashboardSnapshot::compute(state, g.id, period)?);
        }
        period = period.next();
    }
    Ok(out)
}
