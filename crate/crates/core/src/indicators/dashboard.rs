use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use crate::domain::{Payload, SkillItem, State, TaskStatus};
use crate::error::{Error, Result};
use crate::ids::{ActorId, DeliverableId, GroupId, Seq};
use crate::platform::Platform;
use crate::policy::{Action, Resource};
use crate::time::{end_of_day, Hours, Period};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MemberTime {
    pub student_id: ActorId,
    pub period_hours: Hours,
    pub cumulative_hours: Hours,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WorkingTime {
    pub members: Vec<MemberTime>,
    pub period_total: Hours,
    pub cumulative_total: Hours,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TaskCounts {
    pub planned: u32,
    pub active: u32,
    pub done: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DeliverableState {
    Pending,
    Submitted,
    Accepted,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeliverableStatus {
    pub deliverable_id: DeliverableId,
    pub title: String,
    pub due: NaiveDate,
    pub state: DeliverableState,
    pub delay_days: i64,
}

/// The project group's monitoring dashboard for one week.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProjectDashboard {
    pub group_id: GroupId,
    pub period: Period,
    /// Day the task and deliverable fields are evaluated at (end of that day).
    pub today: NaiveDate,
    pub seq: Seq,
    /// Mean member frame of mind (1..=5) for the period; absent without entries.
    pub frame_of_mind: Option<f64>,
    pub frame_of_mind_responses: u32,
    pub skills_checklist: Vec<SkillItem>,
    pub working_time: WorkingTime,
    pub open_tasks: TaskCounts,
    pub deliverables_due: Vec<DeliverableStatus>,
    pub total_delay_days: i64,
}

/// Dashboard as of the last day of the period.
pub fn compute_project_dashboard(state: &State, group: GroupId, period: Period) -> Result<ProjectDashboard> {
    compute_project_dashboard_at(state, group, period, period.last_day())
}

/// Dashboard with task and deliverable status evaluated at the end of `today`.
///
/// Delay of a deliverable is `max(0, submitted_or_today - due)` in days.
pub fn compute_project_dashboard_at(
    state: &State,
    group: GroupId,
    period: Period,
    today: NaiveDate,
) -> Result<ProjectDashboard> {
    let g = state
        .group(group)
        .ok_or_else(|| Error::UnknownGroup(group.to_string()))?;
    let cutoff = end_of_day(today);
    let last_day = period.last_day();

    let mut fom_sum = 0u32;
    let mut fom_count = 0u32;
    let mut members = Vec::with_capacity(g.size());
    for &student in &g.member_ids {
        if let Some(score) = state.frame_of_mind(student, period) {
            fom_sum += u32::from(score);
            fom_count += 1;
        }
        let mut period_hours = Hours::ZERO;
        let mut cumulative_hours = Hours::ZERO;
        for entry in state.time_entries(student) {
            if entry.date <= last_day {
                cumulative_hours += entry.hours;
                if period.contains_date(entry.date) {
                    period_hours += entry.hours;
                }
            }
        }
        members.push(MemberTime {
            student_id: student,
            period_hours,
            cumulative_hours,
        });
    }
    let working_time = WorkingTime {
        period_total: members.iter().map(|m| m.period_hours).sum(),
        cumulative_total: members.iter().map(|m| m.cumulative_hours).sum(),
        members,
    };

    let mut open_tasks = TaskCounts::default();
    for task in state.tasks_of(group) {
        match task.status_before(cutoff) {
            Some(TaskStatus::Planned) => open_tasks.planned += 1,
            Some(TaskStatus::Active) => open_tasks.active += 1,
            Some(TaskStatus::Done) => open_tasks.done += 1,
            None => {}
        }
    }

    let mut deliverables_due = Vec::new();
    for d in state.deliverables_of(group).filter(|d| d.defined_at < cutoff) {
        let submitted = d.submitted_at.filter(|t| *t < cutoff);
        let state = if d.accepted_at.is_some_and(|t| t < cutoff) {
            DeliverableState::Accepted
        } else if submitted.is_some() {
            DeliverableState::Submitted
        } else {
            DeliverableState::Pending
        };
        let end = submitted.map(|t| t.date_naive()).unwrap_or(today);
        deliverables_due.push(DeliverableStatus {
            deliverable_id: d.id,
            title: d.title.clone(),
            due: d.due,
            state,
            delay_days: (end - d.due).num_days().max(0),
        });
    }
    deliverables_due.sort_by_key(|d| (d.due, d.deliverable_id));
    let total_delay_days = deliverables_due.iter().map(|d| d.delay_days).sum();

    Ok(ProjectDashboard {
        group_id: group,
        period,
        today,
        seq: state.last_seq(),
        frame_of_mind: (fom_count > 0).then(|| f64::from(fom_sum) / f64::from(fom_count)),
        frame_of_mind_responses: fom_count,
        skills_checklist: state.skills(group).to_vec(),
        working_time,
        open_tasks,
        deliverables_due,
        total_delay_days,
    })
}

impl Platform {
    /// Records how a student feels about the project this week (1..=5).
    /// A later entry for the same week replaces the earlier one.
    pub fn record_frame_of_mind(&mut self, actor: ActorId, student: ActorId, period: Period, score: u8) -> Result<()> {
        self.authorize_or_fail(actor, Action::Write, &Resource::TimeEntryStream(student))?;
        if !(1..=5).contains(&score) {
            return Err(Error::OutOfRange(format!("frame of mind {score} not in 1..=5")));
        }
        self.require_running()?;
        self.commit(
            actor,
            Payload::FrameOfMind {
                student_id: student,
                period,
                score,
            },
        )?;
        Ok(())
    }

    pub fn project_dashboard(&self, actor: ActorId, group: GroupId, period: Period) -> Result<ProjectDashboard> {
        self.authorize_or_fail(actor, Action::Read, &Resource::GroupDashboard(group))?;
        compute_project_dashboard(self.state(), group, period)
    }

    pub fn project_dashboard_at(
        &self,
        actor: ActorId,
        group: GroupId,
        period: Period,
        today: NaiveDate,
    ) -> Result<ProjectDashboard> {
        self.authorize_or_fail(actor, Action::Read, &Resource::GroupDashboard(group))?;
        compute_project_dashboard_at(self.state(), group, period, today)
    }
}
