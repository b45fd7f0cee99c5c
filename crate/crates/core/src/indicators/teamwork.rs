//! Teamwork indicators as auditable ratios over a reporting period.
//!
//! | indicator | numerator | denominator |
//! |-----------|-----------|-------------|
//! | activity score | deliverables due so far and accepted | deliverables due so far |
//! | team orientation | members with an event in the period | group size |
//! | team leadership | period-active tasks with an assignee | tasks active in the period |
//! | monitoring | period-active tasks whose status history moved in the period | tasks active in the period |
//! | feedback | deliverable comments in the period (capped at 1) | deliverables submitted in the period |
//! | back-up | reassigned tasks that are done | tasks ever reassigned |
//! | coordination | started tasks whose dependencies were done at start | started tasks with dependencies |
//!
//! A zero denominator yields 1.0 with `no_data` set. Cumulative indicators
//! count everything before the end of the period.

use serde::{Deserialize, Serialize};

use crate::domain::{State, TaskStatus};
use crate::error::{Error, Result};
use crate::ids::GroupId;
use crate::time::Period;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Ratio {
    pub value: f64,
    pub numerator: u32,
    pub denominator: u32,
    /// The denominator was zero; `value` is the vacuous 1.0.
    pub no_data: bool,
}

impl Ratio {
    pub fn of(numerator: u32, denominator: u32) -> Ratio {
        if denominator == 0 {
            Ratio {
                value: 1.0,
                numerator,
                denominator,
                no_data: true,
            }
        } else {
            Ratio {
                value: (f64::from(numerator) / f64::from(denominator)).min(1.0),
                numerator,
                denominator,
                no_data: false,
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TeamworkIndicators {
    pub group_id: GroupId,
    pub period: Period,
    pub activity_score: Ratio,
    #[serde(rename = "to")]
    pub team_orientation: Ratio,
    #[serde(rename = "tl")]
    pub team_leadership: Ratio,
    #[serde(rename = "mo")]
    pub monitoring: Ratio,
    #[serde(rename = "fe")]
    pub feedback: Ratio,
    #[serde(rename = "ba")]
    pub back_up: Ratio,
    #[serde(rename = "co")]
    pub coordination: Ratio,
}

impl TeamworkIndicators {
    pub fn all(&self) -> [(&'static str, Ratio); 7] {
        [
            ("activity_score", self.activity_score),
            ("to", self.team_orientation),
            ("tl", self.team_leadership),
            ("mo", self.monitoring),
            ("fe", self.feedback),
            ("ba", self.back_up),
            ("co", self.coordination),
        ]
    }
}

pub fn compute_teamwork_indicators(state: &State, group: GroupId, period: Period) -> Result<TeamworkIndicators> {
    let g = state
        .group(group)
        .ok_or_else(|| Error::UnknownGroup(group.to_string()))?;
    let start = period.start();
    let end = period.end();

    let (mut due, mut accepted, mut submitted, mut comments) = (0, 0, 0, 0);
    for d in state.deliverables_of(group).filter(|d| d.defined_at < end) {
        if d.due <= period.last_day() {
            due += 1;
            if d.accepted_at.is_some_and(|t| t < end) {
                accepted += 1;
            }
        }
        if d.submitted_at.is_some_and(|t| period.contains(t)) {
            submitted += 1;
        }
        comments += d.comment_times.iter().filter(|t| period.contains(**t)).count() as u32;
    }

    let active_members = g
        .member_ids
        .iter()
        .filter(|m| state.was_active(**m, period))
        .count() as u32;

    let (mut active, mut assigned, mut moved) = (0, 0, 0);
    let (mut reassigned, mut backed_up) = (0, 0);
    let (mut with_deps, mut coordinated) = (0, 0);
    for task in state.tasks_of(group) {
        let active_at_start = task.status_before(start) == Some(TaskStatus::Active);
        let in_period: Vec<_> = task
            .status_history
            .iter()
            .filter(|(ts, _)| period.contains(*ts))
            .collect();
        if active_at_start || in_period.iter().any(|(_, s)| *s == TaskStatus::Active) {
            active += 1;
            if task.assignee_before(end).is_some() {
                assigned += 1;
            }
            if !in_period.is_empty() {
                moved += 1;
            }
        }
        if task.reassigned_before(end) {
            reassigned += 1;
            if task.status_before(end) == Some(TaskStatus::Done) {
                backed_up += 1;
            }
        }
        if let Some(check) = task.start_check.filter(|c| c.at < end && c.had_dependencies) {
            with_deps += 1;
            if check.dependencies_done {
                coordinated += 1;
            }
        }
    }

    Ok(TeamworkIndicators {
        group_id: group,
        period,
        activity_score: Ratio::of(accepted, due),
        team_orientation: Ratio::of(active_members, g.size() as u32),
        team_leadership: Ratio::of(assigned, active),
        monitoring: Ratio::of(moved, active),
        feedback: Ratio::of(comments, submitted),
        back_up: Ratio::of(backed_up, reassigned),
        coordination: Ratio::of(coordinated, with_deps),
    })
}
