use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::dashboard::{compute_project_dashboard, DeliverableState, TaskCounts};
use super::metacog::compute_metacognitive_profile;
use super::teamwork::{compute_teamwork_indicators, TeamworkIndicators};
use super::Dimension;
use crate::domain::State;
use crate::error::{Error, Result};
use crate::ids::{ActorId, GroupId, PostId};
use crate::platform::{forbidden, Platform};
use crate::policy::{Action, Resource};
use crate::sharing::{BlogOwner, PostStatus};
use crate::time::{Hours, Period, Timestamp};

const HEADLINES: usize = 5;
const HEADLINE_CHARS: usize = 80;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlogHeadline {
    pub post_id: PostId,
    pub author_id: ActorId,
    pub created_at: Timestamp,
    pub headline: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DashboardSummary {
    pub frame_of_mind: Option<f64>,
    pub period_hours: Hours,
    pub cumulative_hours: Hours,
    pub open_tasks: TaskCounts,
    pub late_deliverables: u32,
    pub total_delay_days: i64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudentSummary {
    pub student_id: ActorId,
    pub name: String,
    pub period_hours: Hours,
    pub frame_of_mind: Option<u8>,
    pub metacognition: BTreeMap<Dimension, f64>,
    pub recent_posts: Vec<BlogHeadline>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupPanel {
    pub group_id: GroupId,
    pub name: String,
    pub dashboard: DashboardSummary,
    pub teamwork: TeamworkIndicators,
    pub students: Vec<StudentSummary>,
    pub recent_group_posts: Vec<BlogHeadline>,
}

/// Everything a tutor follows for the groups they tutor, for one week.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LearningMonitoringView {
    pub tutor_id: ActorId,
    pub period: Period,
    pub groups: Vec<GroupPanel>,
}

fn headline(body: &str) -> String {
    let first = body.lines().next().unwrap_or_default();
    if first.chars().count() <= HEADLINE_CHARS {
        first.to_string()
    } else {
        let mut s: String = first.chars().take(HEADLINE_CHARS - 1).collect();
        s.push('…');
        s
    }
}

/// Most recent published posts of a blog, created before the end of `period`.
fn recent_headlines(state: &State, owner: BlogOwner, period: Period) -> Vec<BlogHeadline> {
    let Some(blog) = state.blog(owner) else {
        return Vec::new();
    };
    let end = period.end();
    blog.post_ids
        .iter()
        .rev()
        .filter_map(|id| state.post(*id))
        .filter(|p| p.status == PostStatus::Published && p.created_at < end)
        .take(HEADLINES)
        .map(|p| BlogHeadline {
            post_id: p.id,
            author_id: p.author_id,
            created_at: p.created_at,
            headline: headline(&p.body),
        })
        .collect()
}

pub fn compute_learning_view(state: &State, tutor: ActorId, period: Period) -> Result<LearningMonitoringView> {
    state
        .actor(tutor)
        .filter(|a| a.role.is_tutor())
        .ok_or_else(|| Error::UnknownActor(format!("{tutor} is not a tutor")))?;
    let mut groups = Vec::new();
    for g in state.groups().filter(|g| g.is_tutor(tutor)) {
        let dashboard = compute_project_dashboard(state, g.id, period)?;
        let teamwork = compute_teamwork_indicators(state, g.id, period)?;
        let mut students = Vec::with_capacity(g.size());
        for member in &dashboard.working_time.members {
            let actor = state
                .actor(member.student_id)
                .ok_or_else(|| Error::Internal("member without actor".into()))?;
            students.push(StudentSummary {
                student_id: member.student_id,
                name: actor.name.clone(),
                period_hours: member.period_hours,
                frame_of_mind: state.frame_of_mind(member.student_id, period),
                metacognition: compute_metacognitive_profile(state, member.student_id)?.latest,
                recent_posts: recent_headlines(state, BlogOwner::Student(member.student_id), period),
            });
        }
        let late_deliverables = dashboard
            .deliverables_due
            .iter()
            .filter(|d| d.delay_days > 0 && d.state != DeliverableState::Accepted)
            .count() as u32;
        groups.push(GroupPanel {
            group_id: g.id,
            name: g.name.clone(),
            dashboard: DashboardSummary {
                frame_of_mind: dashboard.frame_of_mind,
                period_hours: dashboard.working_time.period_total,
                cumulative_hours: dashboard.working_time.cumulative_total,
                open_tasks: dashboard.open_tasks,
                late_deliverables,
                total_delay_days: dashboard.total_delay_days,
            },
            teamwork,
            students,
            recent_group_posts: recent_headlines(state, BlogOwner::Group(g.id), period),
        });
    }
    Ok(LearningMonitoringView {
        tutor_id: tutor,
        period,
        groups,
    })
}

impl Platform {
    pub fn learning_view(&self, actor: ActorId, tutor: ActorId, period: Period) -> Result<LearningMonitoringView> {
        if !self.state().actor(tutor).is_some_and(|a| a.role.is_tutor()) {
            return Err(forbidden("the learning view exists for tutors only"));
        }
        self.authorize_or_fail(actor, Action::Read, &Resource::TutorView(tutor))?;
        compute_learning_view(self.state(), tutor, period)
    }
}
