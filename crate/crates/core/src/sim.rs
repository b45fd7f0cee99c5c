//! Course seeding and a deterministic activity simulator.
//!
//! The simulator drives the public operations (so every event passes the
//! policy and validation like any user request) under a manual clock. The
//! same configuration on the same starting log produces the same bytes.

use std::collections::BTreeSet;
use std::sync::Arc;

use chrono::{Duration, NaiveDate};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::domain::{course_calendar, CourseStatus, NewGroup, PhaseWindow, Role, TaskFields, TaskStatus, TaskUpdate};
use crate::error::{Error, Result};
use crate::ids::{ActorId, CourseId, DeliverableId, GroupId, Seq};
use crate::indicators::SelfReportItem;
use crate::platform::Platform;
use crate::sharing::{BlogOwner, ContractAnswers, PostStatus};
use crate::time::{start_of_day, Clock, ManualClock, Period, Timestamp};

/// Who was created by [`seed_course`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeedSummary {
    pub course_id: CourseId,
    pub director: ActorId,
    pub teacher: ActorId,
    pub managers: Vec<ActorId>,
    pub tutors: Vec<ActorId>,
    pub students: Vec<ActorId>,
    pub leaders: Vec<ActorId>,
    pub groups: Vec<GroupId>,
}

/// Instant at which seeding events are stamped.
pub fn seed_instant() -> Timestamp {
    start_of_day(NaiveDate::from_ymd_opt(2025, 10, 15).expect("date")) + Duration::hours(9)
}

/// The course of the case study: 12 groups of 8 students, a technical and a
/// management tutor per group, 2 managers, a teacher and a director.
pub fn seed_paper_course(platform: &mut Platform) -> Result<SeedSummary> {
    seed_course(platform, 12, 8)
}

/// Seeds a course with `groups` groups of `members` students and starts it.
pub fn seed_course(platform: &mut Platform, groups: usize, members: usize) -> Result<SeedSummary> {
    if platform.last_seq() > 0 {
        return Err(Error::StoreNotEmpty);
    }
    if groups == 0 || members < 2 {
        return Err(Error::InvalidConfig("need at least one group of two".into()));
    }
    let calendar = course_calendar();
    let clock = Arc::new(ManualClock::new(seed_instant()));
    let previous = platform.set_clock(clock.clone());
    let result = seed_with(platform, groups, members, &calendar, &clock);
    platform.set_clock(previous);
    result
}

fn seed_with(
    platform: &mut Platform,
    groups: usize,
    members: usize,
    calendar: &[PhaseWindow],
    clock: &ManualClock,
) -> Result<SeedSummary> {
    let course = platform.create_course("Industrial project course", calendar.to_vec())?;
    let director = platform.register_actor("Director", Role::Director)?;
    let teacher = platform.register_actor("Teacher", Role::Teacher)?;
    let managers = vec![
        platform.register_actor("Technical manager", Role::TechnicalManager)?,
        platform.register_actor("Management manager", Role::ManagementManager)?,
    ];
    let mut tutors = Vec::new();
    let mut students = Vec::new();
    let mut leaders = Vec::new();
    let mut group_ids = Vec::new();
    for g in 1..=groups {
        let technical = platform.register_actor(&format!("Technical tutor {g:02}"), Role::TechnicalTutor)?;
        let management = platform.register_actor(&format!("Management tutor {g:02}"), Role::ManagementTutor)?;
        tutors.extend([technical, management]);
        let mut member_ids = BTreeSet::new();
        for m in 1..=members {
            let s = platform.register_actor(&format!("Student {g:02}-{m}"), Role::Student)?;
            member_ids.insert(s);
            students.push(s);
        }
        let leader = *member_ids.first().expect("non-empty");
        let group = platform.create_group(NewGroup {
            name: format!("Project {g:02}"),
            member_ids,
            leader_id: leader,
            technical_tutor_id: technical,
            management_tutor_id: management,
            subject: format!("Industrial client need #{g}"),
        })?;
        leaders.push(leader);
        group_ids.push(group.id);
    }
    clock.set(start_of_day(calendar[0].start) + Duration::hours(8));
    platform.advance_course(director)?;
    Ok(SeedSummary {
        course_id: course.id,
        director,
        teacher,
        managers,
        tutors,
        students,
        leaders,
        groups: group_ids,
    })
}

/// Activity knobs. Counts are expected values per unit; fractional parts
/// are realised by a coin flip.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SimulationRates {
    pub time_entries_per_student_week: f64,
    /// Entry length is uniform in 0.5x..1.5x this, rounded to a quarter hour.
    pub mean_entry_hours: f64,
    pub frame_of_mind_probability: f64,
    pub self_report_probability: f64,
    pub task_ops_per_group_week: f64,
    pub deliverables_per_group: u32,
    /// Chance per deliverable and week that it moves one step (submit or accept).
    pub deliverable_step_probability: f64,
    pub comments_per_group_week: f64,
    pub student_posts_per_student_week: f64,
    pub group_posts_per_group_week: f64,
    pub discussions_per_week: f64,
    pub replies_per_week: f64,
    pub subject_proposals_per_week: f64,
    /// Chance that a student or tutor writes a contract in the first week.
    pub contract_probability: f64,
    /// Chance that a group is graded in the final week.
    pub evaluation_probability: f64,
}

impl Default for SimulationRates {
    fn default() -> Self {
        SimulationRates {
            time_entries_per_student_week: 4.0,
            mean_entry_hours: 3.6,
            frame_of_mind_probability: 0.8,
            self_report_probability: 0.5,
            task_ops_per_group_week: 6.0,
            deliverables_per_group: 4,
            deliverable_step_probability: 0.6,
            comments_per_group_week: 0.8,
            student_posts_per_student_week: 0.3,
            group_posts_per_group_week: 0.5,
            discussions_per_week: 1.0,
            replies_per_week: 3.0,
            subject_proposals_per_week: 0.2,
            contract_probability: 0.5,
            evaluation_probability: 1.0,
        }
    }
}

impl SimulationRates {
    /// Every knob at zero: the simulator writes nothing.
    pub fn zero() -> SimulationRates {
        SimulationRates {
            time_entries_per_student_week: 0.0,
            mean_entry_hours: 0.0,
            frame_of_mind_probability: 0.0,
            self_report_probability: 0.0,
            task_ops_per_group_week: 0.0,
            deliverables_per_group: 0,
            deliverable_step_probability: 0.0,
            comments_per_group_week: 0.0,
            student_posts_per_student_week: 0.0,
            group_posts_per_group_week: 0.0,
            discussions_per_week: 0.0,
            replies_per_week: 0.0,
            subject_proposals_per_week: 0.0,
            contract_probability: 0.0,
            evaluation_probability: 0.0,
        }
    }

    fn knobs(&self) -> [(&'static str, f64); 14] {
        [
            ("time_entries_per_student_week", self.time_entries_per_student_week),
            ("mean_entry_hours", self.mean_entry_hours),
            ("frame_of_mind_probability", self.frame_of_mind_probability),
            ("self_report_probability", self.self_report_probability),
            ("task_ops_per_group_week", self.task_ops_per_group_week),
            ("deliverable_step_probability", self.deliverable_step_probability),
            ("comments_per_group_week", self.comments_per_group_week),
            ("student_posts_per_student_week", self.student_posts_per_student_week),
            ("group_posts_per_group_week", self.group_posts_per_group_week),
            ("discussions_per_week", self.discussions_per_week),
            ("replies_per_week", self.replies_per_week),
            ("subject_proposals_per_week", self.subject_proposals_per_week),
            ("contract_probability", self.contract_probability),
            ("evaluation_probability", self.evaluation_probability),
        ]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SimulationConfig {
    pub seed: u64,
    pub groups: usize,
    pub members_per_group: usize,
    pub weeks: u32,
    /// First simulated week; defaults to the week the course starts.
    pub start: Option<Period>,
    pub rates: SimulationRates,
    /// Close the course after the last week.
    pub close_at_end: bool,
}

impl Default for SimulationConfig {
    fn default() -> Self {
        SimulationConfig {
            seed: 42,
            groups: 12,
            members_per_group: 8,
            weeks: 26,
            start: None,
            rates: SimulationRates::default(),
            close_at_end: false,
        }
    }
}

impl SimulationConfig {
    pub fn validate(&self) -> Result<()> {
        if self.weeks == 0 || self.weeks > 104 {
            return Err(Error::InvalidConfig(format!("weeks must be 1..=104, got {}", self.weeks)));
        }
        if self.groups == 0 || self.members_per_group < 2 {
            return Err(Error::InvalidConfig("need at least one group of two".into()));
        }
        for (name, v) in self.rates.knobs() {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::InvalidConfig(format!("{name} must be a non-negative number")));
            }
            if name.ends_with("probability") && v > 1.0 {
                return Err(Error::InvalidConfig(format!("{name} is a probability")));
            }
        }
        if self.rates.mean_entry_hours * 1.5 > 24.0 {
            return Err(Error::InvalidConfig("mean_entry_hours too large for a day".into()));
        }
        Ok(())
    }
}

/// What a simulation run wrote.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimulationReport {
    pub first_seq: Seq,
    pub last_seq: Seq,
    pub events: u64,
    pub first_week: Period,
    pub last_week: Period,
}

/// Seeds a fresh platform with `config.groups` x `config.members_per_group`
/// and simulates on it.
pub fn simulate_course(config: &SimulationConfig) -> Result<(Platform, SimulationReport)> {
    config.validate()?;
    let mut platform = Platform::new();
    seed_course(&mut platform, config.groups, config.members_per_group)?;
    let report = simulate(&mut platform, config)?;
    Ok((platform, report))
}

/// Appends a simulated history to a running course whose roster matches the
/// configuration.
pub fn simulate(platform: &mut Platform, config: &SimulationConfig) -> Result<SimulationReport> {
    config.validate()?;
    let course = platform.state().course().cloned().ok_or(Error::NoCourse)?;
    if course.status != CourseStatus::Running {
        return Err(Error::WrongCourseStatus("not running"));
    }
    let groups: Vec<_> = platform.state().groups().cloned().collect();
    if groups.len() != config.groups || groups.iter().any(|g| g.size() != config.members_per_group) {
        return Err(Error::InvalidConfig(format!(
            "course has {} groups; configuration expects {} groups of {}",
            groups.len(),
            config.groups,
            config.members_per_group
        )));
    }
    let first_week = config
        .start
        .unwrap_or_else(|| Period::containing(course.calendar[0].start));
    let clock = Arc::new(ManualClock::new(start_of_day(first_week.first_day())));
    let previous = platform.set_clock(clock.clone());
    let first_seq = platform.last_seq() + 1;
    let mut sim = Sim {
        rng: ChaCha8Rng::seed_from_u64(config.seed),
        rates: &config.rates,
        clock: &clock,
    };
    let result = sim.run(platform, first_week, config);
    platform.set_clock(previous);
    let last_week = result?;
    Ok(SimulationReport {
        first_seq,
        last_seq: platform.last_seq(),
        events: platform.last_seq() + 1 - first_seq,
        first_week,
        last_week,
    })
}

#[derive(Debug, Clone, Copy)]
enum Op {
    Contract(ActorId),
    DefineDeliverables(GroupId),
    TimeEntry(ActorId),
    FrameOfMind(ActorId),
    SelfReport(ActorId),
    Task(GroupId),
    DeliverableStep(GroupId, DeliverableId),
    Comment(GroupId),
    StudentPost(ActorId),
    GroupPost(GroupId),
    ConfirmPosts(GroupId),
    Discussion,
    Reply,
    ProposeSubject,
    Grade(GroupId),
}

const PHRASES: [&str; 8] = [
    "Met the client to clarify the requirements",
    "Reworked the planning after the review",
    "Prototype demo went well",
    "We are late on the specification",
    "Split the work between the sub-teams",
    "Testing the integration this week",
    "Question about the receipt rules",
    "Preparing the intermediate report",
];

struct Sim<'a> {
    rng: ChaCha8Rng,
    rates: &'a SimulationRates,
    clock: &'a ManualClock,
}

impl Sim<'_> {
    fn count(&mut self, rate: f64) -> u32 {
        let whole = rate.floor();
        let frac = rate - whole;
        whole as u32 + u32::from(frac > 0.0 && self.rng.gen_bool(frac))
    }

    fn chance(&mut self, p: f64) -> bool {
        p > 0.0 && self.rng.gen_bool(p.min(1.0))
    }

    /// Random instant in working hours of the week.
    fn instant(&mut self, week: Period) -> Timestamp {
        let day = self.rng.gen_range(0..7);
        let secs = self.rng.gen_range(8 * 3600..20 * 3600);
        start_of_day(week.first_day() + Duration::days(day)) + Duration::seconds(secs)
    }

    fn phrase(&mut self) -> String {
        PHRASES.choose(&mut self.rng).expect("non-empty").to_string()
    }

    fn run(&mut self, p: &mut Platform, first_week: Period, config: &SimulationConfig) -> Result<Period> {
        let mut week = first_week;
        let mut last = first_week;
        for w in 0..config.weeks {
            let mut agenda = self.plan_week(p, week, w, config);
            agenda.sort_by_key(|(ts, i, _)| (*ts, *i));
            for (ts, _, op) in agenda {
                self.clock.set(ts);
                self.execute(p, op, week, first_week, config)?;
            }
            last = week;
            week = week.next();
        }
        if config.close_at_end {
            let director = p
                .state()
                .actors()
                .find(|a| a.role == Role::Director)
                .map(|a| a.id)
                .unwrap_or(ActorId::SYSTEM);
            self.clock.set(start_of_day(last.last_day()) + Duration::hours(20));
            p.advance_course(director)?;
        }
        Ok(last)
    }

    fn plan_week(&mut self, p: &Platform, week: Period, w: u32, config: &SimulationConfig) -> Vec<(Timestamp, usize, Op)> {
        let rates = self.rates;
        let state = p.state();
        let mut ops = Vec::new();
        let push = |sim: &mut Self, ops: &mut Vec<(Timestamp, usize, Op)>, op: Op| {
            let ts = sim.instant(week);
            ops.push((ts, ops.len(), op));
        };
        if w == 0 {
            let writers: Vec<ActorId> = state
                .actors()
                .filter(|a| a.role.is_student() || a.role.is_tutor())
                .map(|a| a.id)
                .collect();
            for a in writers {
                if self.chance(rates.contract_probability) {
                    push(self, &mut ops, Op::Contract(a));
                }
            }
        }
        for g in state.groups() {
            if rates.deliverables_per_group > 0 && state.deliverables_of(g.id).next().is_none() {
                let ts = start_of_day(week.first_day()) + Duration::hours(8);
                ops.push((ts, ops.len(), Op::DefineDeliverables(g.id)));
            }
            for &s in &g.member_ids {
                for _ in 0..self.count(rates.time_entries_per_student_week) {
                    push(self, &mut ops, Op::TimeEntry(s));
                }
                if self.chance(rates.frame_of_mind_probability) {
                    push(self, &mut ops, Op::FrameOfMind(s));
                }
                if self.chance(rates.self_report_probability) {
                    push(self, &mut ops, Op::SelfReport(s));
                }
                for _ in 0..self.count(rates.student_posts_per_student_week) {
                    push(self, &mut ops, Op::StudentPost(s));
                }
            }
            for _ in 0..self.count(rates.task_ops_per_group_week) {
                push(self, &mut ops, Op::Task(g.id));
            }
            let deliverables: Vec<DeliverableId> = state.deliverables_of(g.id).map(|d| d.id).collect();
            for d in deliverables {
                if self.chance(rates.deliverable_step_probability) {
                    push(self, &mut ops, Op::DeliverableStep(g.id, d));
                }
            }
            for _ in 0..self.count(rates.comments_per_group_week) {
                push(self, &mut ops, Op::Comment(g.id));
            }
            for _ in 0..self.count(rates.group_posts_per_group_week) {
                push(self, &mut ops, Op::GroupPost(g.id));
            }
            if rates.group_posts_per_group_week > 0.0 {
                push(self, &mut ops, Op::ConfirmPosts(g.id));
            }
            if w + 1 == config.weeks && self.chance(rates.evaluation_probability) {
                let ts = start_of_day(week.last_day()) + Duration::hours(19);
                ops.push((ts, ops.len(), Op::Grade(g.id)));
            }
        }
        for _ in 0..self.count(rates.discussions_per_week) {
            push(self, &mut ops, Op::Discussion);
        }
        for _ in 0..self.count(rates.replies_per_week) {
            push(self, &mut ops, Op::Reply);
        }
        for _ in 0..self.count(rates.subject_proposals_per_week) {
            push(self, &mut ops, Op::ProposeSubject);
        }
        ops
    }

    fn today(&self) -> NaiveDate {
        self.clock.now().date_naive()
    }

    fn execute(&mut self, p: &mut Platform, op: Op, week: Period, first_week: Period, config: &SimulationConfig) -> Result<()> {
        match op {
            Op::Contract(a) => {
                let answers = ContractAnswers::from_array(std::array::from_fn(|i| {
                    format!("{} (answer {} of {a})", PHRASES[i % PHRASES.len()], i + 1)
                }));
                p.init_learning_contract(a, a, answers)?;
            }
            Op::DefineDeliverables(g) => {
                let leader = p.state().group(g).expect("group").leader_id;
                let n = self.rates.deliverables_per_group;
                let span = i64::from(config.weeks) * 7;
                for k in 1..=n {
                    let offset = span * i64::from(k) / i64::from(n) - 3;
                    let due = first_week.first_day() + Duration::days(offset.max(1));
                    p.define_deliverable(leader, g, &format!("Deliverable {k}"), due)?;
                }
            }
            Op::TimeEntry(s) => {
                let factor = self.rng.gen_range(0.5..1.5);
                let hours = (self.rates.mean_entry_hours * factor * 4.0).round() / 4.0;
                let date = self.today();
                p.record_time_entry(s, s, date, hours)?;
            }
            Op::FrameOfMind(s) => {
                let score = self.rng.gen_range(1..=5);
                p.record_frame_of_mind(s, s, week, score)?;
            }
            Op::SelfReport(s) => {
                let prompts: Vec<_> = p
                    .questionnaire()
                    .items()
                    .map(|(d, q)| (d, q.to_string()))
                    .collect();
                let mut items = Vec::new();
                for (dimension, prompt) in prompts {
                    if self.rng.gen_bool(0.75) {
                        items.push(SelfReportItem {
                            dimension,
                            prompt,
                            response: self.rng.gen_range(1..=5),
                        });
                    }
                }
                if items.is_empty() {
                    let (dimension, prompt) = p.questionnaire().items().next().expect("prompts");
                    items.push(SelfReportItem {
                        dimension,
                        prompt: prompt.to_string(),
                        response: 3,
                    });
                }
                p.record_self_report(s, s, week, items)?;
            }
            Op::Task(g) => self.task_op(p, g)?,
            Op::DeliverableStep(g, d) => {
                let group = p.state().group(g).expect("group").clone();
                let del = p.state().deliverable(d).expect("deliverable").clone();
                let now = self.clock.now();
                match (del.submitted_at, del.accepted_at) {
                    (None, _) if del.due <= self.today() + Duration::days(3) => {
                        let members: Vec<_> = group.member_ids.iter().copied().collect();
                        let by = *members.choose(&mut self.rng).expect("members");
                        p.submit_deliverable(by, g, d)?;
                    }
                    (Some(sub), None) if sub < now => {
                        let tutor = if self.rng.gen_bool(0.5) {
                            group.technical_tutor_id
                        } else {
                            group.management_tutor_id
                        };
                        p.accept_deliverable(tutor, g, d)?;
                    }
                    _ => {}
                }
            }
            Op::Comment(g) => {
                let group = p.state().group(g).expect("group").clone();
                let submitted: Vec<_> = p
                    .state()
                    .deliverables_of(g)
                    .filter(|d| d.submitted_at.is_some())
                    .map(|d| d.id)
                    .collect();
                if let Some(&d) = submitted.choose(&mut self.rng) {
                    let by = *[group.technical_tutor_id, group.management_tutor_id, group.leader_id]
                        .choose(&mut self.rng)
                        .expect("non-empty");
                    let body = self.phrase();
                    p.comment_deliverable(by, g, d, &body)?;
                }
            }
            Op::StudentPost(s) => {
                let body = self.phrase();
                p.write_student_post(s, s, &body)?;
            }
            Op::GroupPost(g) => {
                let members: Vec<_> = p.state().group(g).expect("group").member_ids.iter().copied().collect();
                let by = *members.choose(&mut self.rng).expect("members");
                let body = self.phrase();
                p.propose_group_post(by, g, &body)?;
            }
            Op::ConfirmPosts(g) => {
                let leader = p.state().group(g).expect("group").leader_id;
                let drafts: Vec<_> = p
                    .state()
                    .blog(BlogOwner::Group(g))
                    .map(|b| b.post_ids.clone())
                    .unwrap_or_default()
                    .into_iter()
                    .filter(|id| p.state().post(*id).is_some_and(|x| x.status == PostStatus::Draft))
                    .collect();
                for post in drafts {
                    if self.rng.gen_bool(0.8) {
                        p.confirm_group_post(leader, post)?;
                    }
                }
            }
            Op::Discussion => {
                let Some(author) = self.forum_author(p) else {
                    return Ok(());
                };
                let subjects: Vec<_> = p.state().forum().taxonomy().subjects().map(|s| s.id).collect();
                let n = self.rng.gen_range(1..=3.min(subjects.len()));
                let tags: BTreeSet<_> = subjects.choose_multiple(&mut self.rng, n).copied().collect();
                let title = self.phrase();
                let body = self.phrase();
                p.create_discussion(author, &title, &body, &tags)?;
            }
            Op::Reply => {
                let discussions: Vec<_> = p.state().forum().discussions().map(|d| d.id).collect();
                let Some(&d) = discussions.choose(&mut self.rng) else {
                    return Ok(());
                };
                let Some(author) = self.forum_author(p) else {
                    return Ok(());
                };
                let body = self.phrase();
                p.reply(author, d, &body)?;
            }
            Op::ProposeSubject => {
                let Some(author) = self.forum_author(p) else {
                    return Ok(());
                };
                let parents: Vec<_> = p.state().forum().taxonomy().subjects().map(|s| s.id).collect();
                let parent = *parents.choose(&mut self.rng).expect("seeded taxonomy");
                let label = format!("Topic {}", p.state().next_subject_id());
                p.propose_subject(author, parent, &label)?;
            }
            Op::Grade(g) => {
                let group = p.state().group(g).expect("group").clone();
                let grade = f64::from(self.rng.gen_range(16..=36u32)) / 2.0;
                p.evaluate_group(group.technical_tutor_id, g, grade)?;
                for &s in &group.member_ids {
                    if self.rng.gen_bool(0.5) {
                        let adj = f64::from(self.rng.gen_range(-8..=8i32)) / 4.0;
                        p.evaluate_student(group.management_tutor_id, s, adj)?;
                    }
                }
            }
        }
        Ok(())
    }

    fn forum_author(&mut self, p: &Platform) -> Option<ActorId> {
        let authors: Vec<_> = p
            .state()
            .actors()
            .filter(|a| a.role.is_tutor() || a.role.is_manager() || a.role == Role::Director)
            .map(|a| a.id)
            .collect();
        authors.choose(&mut self.rng).copied()
    }

    fn task_op(&mut self, p: &mut Platform, g: GroupId) -> Result<()> {
        let group = p.state().group(g).expect("group").clone();
        let members: Vec<ActorId> = group.member_ids.iter().copied().collect();
        let all: Vec<_> = p.state().tasks_of(g).map(|t| t.id).collect();
        let open: Vec<_> = p
            .state()
            .tasks_of(g)
            .filter(|t| t.status != TaskStatus::Done)
            .map(|t| t.id)
            .collect();
        let actor = if self.rng.gen_bool(0.1) {
            group.technical_tutor_id
        } else {
            *members.choose(&mut self.rng).expect("members")
        };
        let today = self.today();

        if open.len() < 3 || self.rng.gen_bool(0.3) {
            let assignee = self.rng.gen_bool(0.85).then(|| *members.choose(&mut self.rng).expect("members"));
            let mut deps = BTreeSet::new();
            if !all.is_empty() && self.rng.gen_bool(0.4) {
                let n = self.rng.gen_range(1..=2.min(all.len()));
                deps.extend(all.choose_multiple(&mut self.rng, n).copied());
            }
            let fields = TaskFields {
                title: format!("Task {}", p.state().next_task_id()),
                assignee_id: assignee,
                dependency_ids: deps,
                status: TaskStatus::Planned,
                planned_start: today,
                planned_end: today + Duration::days(self.rng.gen_range(7..=28)),
            };
            p.add_task(actor, g, fields)?;
            return Ok(());
        }

        let id = *open.choose(&mut self.rng).expect("open tasks");
        let task = p.state().task(id).expect("task").clone();
        let roll: f64 = self.rng.gen();
        let mut update = TaskUpdate::default();
        if roll < 0.15 && task.assignee_id.is_some() {
            let others: Vec<_> = members.iter().copied().filter(|m| Some(*m) != task.assignee_id).collect();
            update.assignee_id = Some(others.choose(&mut self.rng).copied());
        } else if roll < 0.25 {
            if task.assignee_id.is_none() {
                update.assignee_id = Some(Some(*members.choose(&mut self.rng).expect("members")));
            } else {
                update.planned_end = Some(task.planned_end + Duration::days(7));
            }
        } else {
            update.status = Some(match task.status {
                TaskStatus::Planned => TaskStatus::Active,
                _ => TaskStatus::Done,
            });
        }
        p.update_task(actor, g, id, update)?;
        Ok(())
    }
}
