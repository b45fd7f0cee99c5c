//! Brute-force recomputation of every indicator straight from the raw log.
//! Nothing here goes through `State`; each value is a fresh scan of events.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use chrono::{Duration, NaiveDate};
use meshat::domain::{
    CourseChange, DashboardChange, EvaluationChange, ForumChange, PostChange, RosterChange, TaskChange,
    TaxonomyChange,
};
use meshat::indicators::{DeliverableState, ProjectDashboard, Ratio};
use meshat::{
    ActivityEvent, ActorId, DeliverableId, Dimension, DiscussionId, GroupId, MetacognitiveProfile, Payload, Period,
    SubjectId, TaskId, TaskStatus, TaxonomyRoot, TeamworkIndicators, Timestamp,
};
use rand::Rng;

pub const RATIO_TOLERANCE: f64 = 1e-9;

pub fn groups(log: &[ActivityEvent]) -> BTreeMap<GroupId, (BTreeSet<ActorId>, ActorId)> {
    let mut out = BTreeMap::new();
    for e in log {
        if let Payload::RosterUpdate(RosterChange::GroupCreated {
            group_id,
            member_ids,
            leader_id,
            ..
        }) = &e.payload
        {
            out.insert(*group_id, (member_ids.clone(), *leader_id));
        }
    }
    out
}

pub fn students(log: &[ActivityEvent]) -> BTreeSet<ActorId> {
    groups(log).values().flat_map(|(m, _)| m.iter().copied()).collect()
}

/// seq, time, status, assignee, dependencies
type Step = (u64, Timestamp, TaskStatus, Option<ActorId>, BTreeSet<TaskId>);

/// Status and assignee of one task after each of its events.
#[derive(Debug, Clone)]
struct TaskTrace {
    group: GroupId,
    steps: Vec<Step>,
}

fn task_traces(log: &[ActivityEvent]) -> BTreeMap<TaskId, TaskTrace> {
    let mut out: BTreeMap<TaskId, TaskTrace> = BTreeMap::new();
    for e in log {
        match &e.payload {
            Payload::TaskUpdate(TaskChange::Created {
                task_id,
                group_id,
                fields,
            }) => {
                out.insert(
                    *task_id,
                    TaskTrace {
                        group: *group_id,
                        steps: vec![(
                            e.seq,
                            e.timestamp,
                            fields.status,
                            fields.assignee_id,
                            fields.dependency_ids.clone(),
                        )],
                    },
                );
            }
            Payload::TaskUpdate(TaskChange::Updated { task_id, fields }) => {
                out.get_mut(task_id).expect("update of a created task").steps.push((
                    e.seq,
                    e.timestamp,
                    fields.status,
                    fields.assignee_id,
                    fields.dependency_ids.clone(),
                ));
            }
            _ => {}
        }
    }
    out
}

impl TaskTrace {
    fn status_before(&self, cutoff: Timestamp) -> Option<TaskStatus> {
        self.steps.iter().rfind(|s| s.1 < cutoff).map(|s| s.2)
    }

    fn status_at_seq(&self, seq: u64) -> Option<TaskStatus> {
        self.steps.iter().rfind(|s| s.0 < seq).map(|s| s.2)
    }
}

#[derive(Debug, Clone)]
struct DeliverableTrace {
    group: GroupId,
    due: NaiveDate,
    defined: Timestamp,
    submitted: Option<Timestamp>,
    accepted: Option<Timestamp>,
    comments: Vec<Timestamp>,
}

fn deliverable_traces(log: &[ActivityEvent]) -> BTreeMap<DeliverableId, DeliverableTrace> {
    let mut out: BTreeMap<DeliverableId, DeliverableTrace> = BTreeMap::new();
    for e in log {
        match &e.payload {
            Payload::DashboardUpdate(DashboardChange::DefineDeliverable(d)) => {
                out.insert(
                    d.deliverable_id,
                    DeliverableTrace {
                        group: d.group_id,
                        due: d.due,
                        defined: e.timestamp,
                        submitted: None,
                        accepted: None,
                        comments: Vec::new(),
                    },
                );
            }
            Payload::DeliverableSubmit { deliverable_id } => {
                let d = out.get_mut(deliverable_id).unwrap();
                assert!(d.submitted.is_none(), "submitted twice");
                d.submitted = Some(e.timestamp);
            }
            Payload::DeliverableAccept { deliverable_id } => {
                let d = out.get_mut(deliverable_id).unwrap();
                assert!(d.accepted.is_none(), "accepted twice");
                d.accepted = Some(e.timestamp);
            }
            Payload::DeliverableComment(c) => out.get_mut(&c.deliverable_id).unwrap().comments.push(e.timestamp),
            _ => {}
        }
    }
    out
}

pub fn day_start(date: NaiveDate) -> Timestamp {
    date.and_hms_opt(0, 0, 0).unwrap().and_utc()
}

#[derive(Debug, Clone, PartialEq)]
pub struct DashboardOracle {
    pub frame_of_mind: Option<f64>,
    pub frame_of_mind_responses: u32,
    /// (student, period centi-hours, cumulative centi-hours)
    pub members: Vec<(ActorId, u64, u64)>,
    pub period_total: u64,
    pub cumulative_total: u64,
    pub planned: u32,
    pub active: u32,
    pub done: u32,
    /// (id, due, state 0 pending / 1 submitted / 2 accepted, delay days)
    pub deliverables: Vec<(DeliverableId, NaiveDate, u8, i64)>,
    pub total_delay: i64,
    pub skills: usize,
}

pub fn dashboard_oracle(log: &[ActivityEvent], group: GroupId, period: Period) -> DashboardOracle {
    let (members, _) = groups(log)[&group].clone();
    let today = period.first_day() + Duration::days(6);
    let cutoff = day_start(today + Duration::days(1));

    let mut fom: BTreeMap<ActorId, u8> = BTreeMap::new();
    let mut hours: BTreeMap<ActorId, (u64, u64)> = members.iter().map(|m| (*m, (0, 0))).collect();
    let mut skills = 0;
    for e in log {
        match &e.payload {
            Payload::FrameOfMind {
                student_id,
                period: p,
                score,
            } if *p == period && members.contains(student_id) => {
                fom.insert(*student_id, *score);
            }
            Payload::TimeEntry(t) if members.contains(&t.student_id) && t.date <= today => {
                let h = hours.get_mut(&t.student_id).unwrap();
                let centi = u64::from(t.hours.centi());
                h.1 += centi;
                if t.date >= period.first_day() {
                    h.0 += centi;
                }
            }
            Payload::DashboardUpdate(DashboardChange::SetSkills { group_id, items }) if *group_id == group => {
                skills = items.len();
            }
            _ => {}
        }
    }
    let fom_n = fom.len() as u32;
    let frame_of_mind = (fom_n > 0).then(|| fom.values().map(|v| f64::from(*v)).sum::<f64>() / f64::from(fom_n));

    let (mut planned, mut active, mut done) = (0, 0, 0);
    for trace in task_traces(log).values().filter(|t| t.group == group) {
        match trace.status_before(cutoff) {
            Some(TaskStatus::Planned) => planned += 1,
            Some(TaskStatus::Active) => active += 1,
            Some(TaskStatus::Done) => done += 1,
            None => {}
        }
    }

    let mut deliverables = Vec::new();
    for (id, d) in deliverable_traces(log) {
        if d.group != group || d.defined >= cutoff {
            continue;
        }
        let submitted = d.submitted.filter(|t| *t < cutoff);
        let accepted = d.accepted.filter(|t| *t < cutoff);
        let state = if accepted.is_some() {
            2
        } else if submitted.is_some() {
            1
        } else {
            0
        };
        let end = submitted.map(|t| t.date_naive()).unwrap_or(today);
        let mut delay = 0;
        let mut day = d.due;
        while day < end {
            delay += 1;
            day += Duration::days(1);
        }
        deliverables.push((id, d.due, state, delay));
    }
    deliverables.sort_by_key(|d| (d.1, d.0));
    let total_delay = deliverables.iter().map(|d| d.3).sum();

    let members: Vec<(ActorId, u64, u64)> = hours.into_iter().map(|(a, (p, c))| (a, p, c)).collect();
    DashboardOracle {
        frame_of_mind,
        frame_of_mind_responses: fom_n,
        period_total: members.iter().map(|m| m.1).sum(),
        cumulative_total: members.iter().map(|m| m.2).sum(),
        members,
        planned,
        active,
        done,
        deliverables,
        total_delay,
        skills,
    }
}

/// Asserts that a computed dashboard equals the oracle; returns a message on mismatch.
pub fn compare_dashboard(got: &ProjectDashboard, want: &DashboardOracle) -> Result<(), String> {
    let fom_ok = match (got.frame_of_mind, want.frame_of_mind) {
        (None, None) => true,
        (Some(a), Some(b)) => (a - b).abs() <= RATIO_TOLERANCE,
        _ => false,
    };
    if !fom_ok || got.frame_of_mind_responses != want.frame_of_mind_responses {
        return Err(format!("frame of mind {:?} vs {:?}", got.frame_of_mind, want.frame_of_mind));
    }
    let members: Vec<(ActorId, u64, u64)> = got
        .working_time
        .members
        .iter()
        .map(|m| {
            (
                m.student_id,
                u64::from(m.period_hours.centi()),
                u64::from(m.cumulative_hours.centi()),
            )
        })
        .collect();
    if members != want.members {
        return Err(format!("member hours {members:?} vs {:?}", want.members));
    }
    if u64::from(got.working_time.period_total.centi()) != want.period_total
        || u64::from(got.working_time.cumulative_total.centi()) != want.cumulative_total
    {
        return Err("working time totals differ".into());
    }
    let t = got.open_tasks;
    if (t.planned, t.active, t.done) != (want.planned, want.active, want.done) {
        return Err(format!("tasks {t:?} vs {:?}", (want.planned, want.active, want.done)));
    }
    let deliverables: Vec<(DeliverableId, NaiveDate, u8, i64)> = got
        .deliverables_due
        .iter()
        .map(|d| {
            let s = match d.state {
                DeliverableState::Pending => 0,
                DeliverableState::Submitted => 1,
                DeliverableState::Accepted => 2,
            };
            (d.deliverable_id, d.due, s, d.delay_days)
        })
        .collect();
    if deliverables != want.deliverables || got.total_delay_days != want.total_delay {
        return Err(format!("deliverables {deliverables:?} vs {:?}", want.deliverables));
    }
    if got.skills_checklist.len() != want.skills {
        return Err("skills checklist differs".into());
    }
    Ok(())
}

/// (numerator, denominator) per teamwork indicator, in the order of
/// [`TeamworkIndicators::all`].
pub fn teamwork_oracle(log: &[ActivityEvent], group: GroupId, period: Period) -> [(u32, u32); 7] {
    let (members, _) = groups(log)[&group].clone();
    let start = day_start(period.first_day());
    let end = day_start(period.first_day() + Duration::days(7));
    let in_period = |t: Timestamp| t >= start && t < end;
    let last_day = period.first_day() + Duration::days(6);

    let (mut due, mut accepted, mut submitted, mut comments) = (0, 0, 0, 0);
    for d in deliverable_traces(log).values().filter(|d| d.group == group && d.defined < end) {
        if d.due <= last_day {
            due += 1;
            if d.accepted.is_some_and(|t| t < end) {
                accepted += 1;
            }
        }
        if d.submitted.is_some_and(in_period) {
            submitted += 1;
        }
        comments += d.comments.iter().filter(|t| in_period(**t)).count() as u32;
    }

    let mut active_members = BTreeSet::new();
    for e in log {
        if members.contains(&e.actor_id) && in_period(e.timestamp) {
            active_members.insert(e.actor_id);
        }
    }

    let traces = task_traces(log);
    let (mut active, mut assigned, mut moved) = (0, 0, 0);
    let (mut reassigned, mut backed_up) = (0, 0);
    let (mut with_deps, mut coordinated) = (0, 0);
    for trace in traces.values().filter(|t| t.group == group) {
        let steps = &trace.steps;
        let was_active = trace.status_before(start) == Some(TaskStatus::Active)
            || steps.iter().any(|s| in_period(s.1) && s.2 == TaskStatus::Active);
        if was_active {
            active += 1;
            let assignee = steps.iter().rfind(|s| s.1 < end).and_then(|s| s.3);
            if assignee.is_some() {
                assigned += 1;
            }
            let changed = steps
                .iter()
                .enumerate()
                .any(|(i, s)| in_period(s.1) && (i == 0 || steps[i - 1].2 != s.2));
            if changed {
                moved += 1;
            }
        }

        if let Some(original) = steps.iter().find_map(|s| s.3) {
            let moved_away = steps.iter().filter(|s| s.1 < end).any(|s| s.3.is_some_and(|a| a != original));
            if moved_away {
                reassigned += 1;
                if trace.status_before(end) == Some(TaskStatus::Done) {
                    backed_up += 1;
                }
            }
        }

        if let Some(first) = steps.iter().find(|s| s.2 != TaskStatus::Planned) {
            if first.1 < end && !first.4.is_empty() {
                with_deps += 1;
                let all_done = first
                    .4
                    .iter()
                    .all(|d| traces[d].status_at_seq(first.0) == Some(TaskStatus::Done));
                if all_done {
                    coordinated += 1;
                }
            }
        }
    }

    [
        (accepted, due),
        (active_members.len() as u32, members.len() as u32),
        (assigned, active),
        (moved, active),
        (comments, submitted),
        (backed_up, reassigned),
        (coordinated, with_deps),
    ]
}

pub fn oracle_ratio(num: u32, den: u32) -> f64 {
    if den == 0 || num >= den {
        1.0
    } else {
        num as f64 / den as f64
    }
}

pub fn compare_teamwork(got: &TeamworkIndicators, want: &[(u32, u32); 7]) -> Result<(), String> {
    for ((name, r), (num, den)) in got.all().iter().zip(want) {
        let Ratio {
            value,
            numerator,
            denominator,
            no_data,
        } = *r;
        if numerator != *num || denominator != *den || no_data != (*den == 0) {
            return Err(format!("{name}: {numerator}/{denominator} vs {num}/{den}"));
        }
        if (value - oracle_ratio(*num, *den)).abs() > RATIO_TOLERANCE {
            return Err(format!("{name}: value {value}"));
        }
        if !(0.0..=1.0).contains(&value) {
            return Err(format!("{name}: {value} outside [0,1]"));
        }
    }
    Ok(())
}

/// Per-period dimension means of a student's latest answers for that period.
pub fn metacog_oracle(log: &[ActivityEvent], student: ActorId) -> BTreeMap<Period, BTreeMap<Dimension, f64>> {
    let mut latest = BTreeMap::new();
    for e in log {
        if let Payload::SelfReport {
            student_id,
            period,
            items,
        } = &e.payload
        {
            if *student_id == student {
                latest.insert(*period, items.clone());
            }
        }
    }
    let mut out = BTreeMap::new();
    for (period, items) in latest {
        let mut scores = BTreeMap::new();
        for d in Dimension::ALL {
            let answers: Vec<f64> = items
                .iter()
                .filter(|i| i.dimension == d)
                .map(|i| f64::from(i.response))
                .collect();
            if !answers.is_empty() {
                scores.insert(d, answers.iter().sum::<f64>() / answers.len() as f64);
            }
        }
        if !scores.is_empty() {
            out.insert(period, scores);
        }
    }
    out
}

pub fn compare_metacog(got: &MetacognitiveProfile, want: &BTreeMap<Period, BTreeMap<Dimension, f64>>) -> Result<(), String> {
    let close = |a: f64, b: f64| (a - b).abs() <= RATIO_TOLERANCE;
    if got.periods.len() != want.len() {
        return Err(format!("{} periods vs {}", got.periods.len(), want.len()));
    }
    for (p, (period, scores)) in got.periods.iter().zip(want) {
        if p.period != *period || p.scores.len() != scores.len() {
            return Err(format!("period {} differs", p.period));
        }
        for (d, v) in scores {
            if !p.scores.get(d).is_some_and(|g| close(*g, *v)) {
                return Err(format!("{d:?} in {period}"));
            }
            if !(1.0..=5.0).contains(v) {
                return Err(format!("{d:?} mean {v} outside the scale"));
            }
        }
    }
    for d in Dimension::ALL {
        let last = want.iter().rev().find_map(|(p, s)| s.get(&d).map(|v| (*p, *v)));
        match (last, got.latest.get(&d)) {
            (None, None) => {}
            (Some((_, v)), Some(g)) if close(v, *g) => {}
            _ => return Err(format!("latest {d:?}")),
        }
        let trend = last.and_then(|(p, v)| {
            let prev = Period::containing(p.first_day() - Duration::days(7));
            want.get(&prev).and_then(|s| s.get(&d)).map(|pv| v - pv)
        });
        match (trend, got.trends.get(&d)) {
            (None, None) => {}
            (Some(t), Some(g)) if close(t, *g) => {}
            _ => return Err(format!("trend {d:?}")),
        }
    }
    Ok(())
}

/// Parent links, roots and discussion tags rebuilt from taxonomy and forum events.
#[derive(Debug, Clone, Default)]
pub struct ForumOracle {
    pub parent: BTreeMap<SubjectId, Option<SubjectId>>,
    pub label: BTreeMap<SubjectId, String>,
    pub tags: BTreeMap<DiscussionId, BTreeSet<SubjectId>>,
    pub last_message: BTreeMap<DiscussionId, Timestamp>,
}

impl ForumOracle {
    pub fn from_log(log: &[ActivityEvent]) -> ForumOracle {
        let mut f = ForumOracle::default();
        for e in log {
            match &e.payload {
                Payload::CourseUpdate(CourseChange::Created { .. }) => {
                    for (i, root) in TaxonomyRoot::ALL.iter().enumerate() {
                        let id = SubjectId(i as u32 + 1);
                        f.parent.insert(id, None);
                        f.label.insert(id, root.label().to_string());
                    }
                }
                Payload::TaxonomyUpdate(TaxonomyChange::Seeded {
                    subject_id,
                    parent_id,
                    label,
                    ..
                }) => {
                    f.parent.insert(*subject_id, *parent_id);
                    f.label.insert(*subject_id, label.clone());
                }
                Payload::TaxonomyUpdate(TaxonomyChange::Proposed {
                    subject_id,
                    parent_id,
                    label,
                }) => {
                    f.parent.insert(*subject_id, Some(*parent_id));
                    f.label.insert(*subject_id, label.clone());
                }
                Payload::TaxonomyUpdate(TaxonomyChange::Renamed { subject_id, label }) => {
                    f.label.insert(*subject_id, label.clone());
                }
                Payload::TaxonomyUpdate(TaxonomyChange::Merged { from, into }) => f.merge(*from, *into),
                Payload::ForumMessage(ForumChange::Opened {
                    discussion_id, tags, ..
                }) => {
                    f.tags.insert(*discussion_id, tags.clone());
                    f.last_message.insert(*discussion_id, e.timestamp);
                }
                Payload::ForumMessage(ForumChange::Reply { discussion_id, .. }) => {
                    f.last_message.insert(*discussion_id, e.timestamp);
                }
                _ => {}
            }
        }
        f
    }

    fn children(&self, id: SubjectId) -> Vec<SubjectId> {
        self.parent
            .iter()
            .filter(|(_, p)| **p == Some(id))
            .map(|(c, _)| *c)
            .collect()
    }

    fn merge(&mut self, from: SubjectId, into: SubjectId) {
        for child in self.children(from) {
            let key = self.label[&child].to_lowercase();
            let twin = self
                .children(into)
                .into_iter()
                .find(|c| *c != child && *c != from && self.label[c].to_lowercase() == key);
            match twin {
                Some(t) => self.merge(child, t),
                None => {
                    self.parent.insert(child, Some(into));
                }
            }
        }
        self.parent.remove(&from);
        self.label.remove(&from);
        for tags in self.tags.values_mut() {
            if tags.remove(&from) {
                tags.insert(into);
            }
        }
    }

    pub fn is_ancestor_or_self(&self, ancestor: SubjectId, mut id: SubjectId) -> bool {
        for _ in 0..=self.parent.len() {
            if id == ancestor {
                return true;
            }
            match self.parent.get(&id).copied().flatten() {
                Some(p) => id = p,
                None => return false,
            }
        }
        false
    }

    /// Scores every discussion against the query by brute force.
    pub fn search(&self, query: &BTreeSet<SubjectId>) -> Vec<(DiscussionId, usize)> {
        let mut hits: Vec<(DiscussionId, usize, Timestamp)> = Vec::new();
        for (id, tags) in &self.tags {
            let mut score = 0;
            for q in query {
                if tags.iter().any(|t| self.is_ancestor_or_self(*q, *t)) {
                    score += 1;
                }
            }
            if score > 0 {
                hits.push((*id, score, self.last_message[id]));
            }
        }
        hits.sort_by(|a, b| b.1.cmp(&a.1).then(b.2.cmp(&a.2)).then(a.0.cmp(&b.0)));
        hits.into_iter().map(|(id, s, _)| (id, s)).collect()
    }

    /// Roots, cycle freedom and sibling uniqueness, checked by walking parent links.
    pub fn integrity(&self) -> Result<(), String> {
        let roots = self.parent.values().filter(|p| p.is_none()).count();
        if roots != 3 {
            return Err(format!("{roots} roots"));
        }
        for id in self.parent.keys() {
            let mut seen = BTreeSet::new();
            let mut cur = *id;
            while let Some(Some(p)) = self.parent.get(&cur) {
                if !seen.insert(cur) {
                    return Err(format!("cycle at {id}"));
                }
                if !self.parent.contains_key(p) {
                    return Err(format!("dangling parent of {cur}"));
                }
                cur = *p;
            }
        }
        let ids: Vec<SubjectId> = self.parent.keys().copied().collect();
        for (i, a) in ids.iter().enumerate() {
            for b in &ids[i + 1..] {
                if self.parent[a] == self.parent[b] && self.label[a].to_lowercase() == self.label[b].to_lowercase() {
                    return Err(format!("{a} and {b} are same-label siblings"));
                }
            }
        }
        Ok(())
    }
}

/// Checks that no contract answer changes while the course is not closed.
pub fn contract_changes_outside_closure(log: &[ActivityEvent]) -> usize {
    let mut closed = false;
    let mut bad = 0;
    for e in log {
        match &e.payload {
            Payload::CourseUpdate(CourseChange::Advanced { to }) => closed = *to == meshat::CourseStatus::Closed,
            Payload::ContractUpdate(meshat::domain::ContractChange::Revised { .. }) if !closed => bad += 1,
            _ => {}
        }
    }
    bad
}

pub fn evaluation_events(log: &[ActivityEvent]) -> Vec<EvaluationChange> {
    log.iter()
        .filter_map(|e| match &e.payload {
            Payload::Evaluation(c) => Some(c.clone()),
            _ => None,
        })
        .collect()
}

pub fn student_post_count(log: &[ActivityEvent]) -> usize {
    log.iter()
        .filter(|e| matches!(e.payload, Payload::BlogPost(PostChange::StudentPost { .. })))
        .count()
}

/// Small random simulation settings: a few groups, a few weeks, random knobs.
pub fn random_config<R: Rng>(rng: &mut R, seed: u64) -> meshat::SimulationConfig {
    let mut c = meshat::SimulationConfig {
        seed,
        groups: rng.gen_range(1..=4),
        members_per_group: rng.gen_range(2..=6),
        weeks: rng.gen_range(1..=14),
        ..Default::default()
    };
    let r = &mut c.rates;
    r.time_entries_per_student_week = rng.gen_range(0.0..6.0);
    r.mean_entry_hours = rng.gen_range(0.5..8.0);
    r.frame_of_mind_probability = rng.gen_range(0.0..=1.0);
    r.self_report_probability = rng.gen_range(0.0..=1.0);
    r.task_ops_per_group_week = rng.gen_range(0.0..12.0);
    r.deliverables_per_group = rng.gen_range(0..=6);
    r.deliverable_step_probability = rng.gen_range(0.0..=1.0);
    r.comments_per_group_week = rng.gen_range(0.0..3.0);
    r.student_posts_per_student_week = rng.gen_range(0.0..1.0);
    r.group_posts_per_group_week = rng.gen_range(0.0..2.0);
    r.discussions_per_week = rng.gen_range(0.0..3.0);
    r.replies_per_week = rng.gen_range(0.0..5.0);
    r.subject_proposals_per_week = rng.gen_range(0.0..2.0);
    r.contract_probability = rng.gen_range(0.0..=1.0);
    r.evaluation_probability = rng.gen_range(0.0..=1.0);
    c
}

/// A seeded, running course on a manual clock set to Monday 3 November 2025, 09:00.
pub struct Fixture {
    pub p: meshat::Platform,
    pub clock: std::sync::Arc<meshat::ManualClock>,
    pub seeded: meshat::sim::SeedSummary,
}

impl Fixture {
    pub fn new(groups: usize, members: usize) -> Fixture {
        let clock = std::sync::Arc::new(meshat::ManualClock::new(meshat::sim::seed_instant()));
        let mut p = meshat::Platform::with_clock(clock.clone());
        let seeded = meshat::seed_course(&mut p, groups, members).expect("seed");
        clock.set(day_start(date(2025, 11, 3)) + Duration::hours(9));
        Fixture { p, clock, seeded }
    }

    pub fn group(&self, i: usize) -> meshat::ProjectGroup {
        self.p.state().group(self.seeded.groups[i]).unwrap().clone()
    }

    /// A member of group `i` that is not its leader.
    pub fn member(&self, i: usize) -> ActorId {
        let g = self.group(i);
        *g.member_ids.iter().find(|m| **m != g.leader_id).unwrap()
    }

    pub fn tick(&self) {
        self.clock.advance(Duration::minutes(1));
    }
}

pub fn date(y: i32, m: u32, d: u32) -> NaiveDate {
    NaiveDate::from_ymd_opt(y, m, d).unwrap()
}

pub fn week_of(y: i32, m: u32, d: u32) -> Period {
    Period::containing(date(y, m, d))
}
