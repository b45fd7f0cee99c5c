use std::collections::{BTreeMap, BTreeSet};

use super::course::validate_calendar;
use super::event::*;
use super::work::creates_cycle;
use super::{
    Actor, Course, CourseStatus, Deliverable, ProjectGroup, Role, SkillItem, StartCheck, Task,
    TaskStatus, TimeEntry,
};
use crate::error::{Error, Result};
use crate::ids::*;
use crate::indicators::{EvaluationRecord, SelfReportItem, MAX_ADJUSTMENT, MAX_GRADE};
use crate::sharing::{
    Blog, BlogOwner, BlogPost, ContractRevision, ContractStatus, Discussion, Forum,
    LearningContract, Message, PostStatus, SubjectStatus, TaxonomyRoot, TaxonomySubject,
};
use crate::time::{Hours, Period, Timestamp};

/// Everything the log says, folded. Only [`State::apply`] mutates it.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct State {
    course: Option<Course>,
    actors: BTreeMap<ActorId, Actor>,
    groups: BTreeMap<GroupId, ProjectGroup>,
    tasks: BTreeMap<TaskId, Task>,
    deliverables: BTreeMap<DeliverableId, Deliverable>,
    skills: BTreeMap<GroupId, Vec<SkillItem>>,
    time_entries: BTreeMap<ActorId, Vec<TimeEntry>>,
    frame_of_mind: BTreeMap<ActorId, BTreeMap<Period, u8>>,
    self_reports: BTreeMap<ActorId, BTreeMap<Period, Vec<SelfReportItem>>>,
    active_periods: BTreeMap<ActorId, BTreeSet<Period>>,
    blogs: BTreeMap<BlogOwner, Blog>,
    posts: BTreeMap<PostId, BlogPost>,
    forum: Forum,
    contracts: BTreeMap<ActorId, LearningContract>,
    evaluations: BTreeMap<GroupId, EvaluationRecord>,
    kinds: Vec<EventKind>,
    last_timestamp: Option<Timestamp>,
    counters: Counters,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
struct Counters {
    actor: u32,
    group: u32,
    task: u32,
    deliverable: u32,
    post: u32,
    subject: u32,
    discussion: u32,
}

type Check = std::result::Result<(), String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn expect_id<T: PartialEq + std::fmt::Display>(got: T, want: T) -> Check {
    ensure(got == want, || format!("id {got} out of sequence, expected {want}"))
}

impl State {
    /// Folds a whole log. Any inconsistency is reported against the event's seq.
    pub fn replay<'a>(events: impl IntoIterator<Item = &'a ActivityEvent>) -> Result<State> {
        let mut state = State::default();
        for event in events {
            state.apply(event).map_err(|reason| Error::SchemaMismatch {
                seq: event.seq,
                reason,
            })?;
        }
        Ok(state)
    }

    // ---- read accessors ----

    pub fn course(&self) -> Option<&Course> {
        self.course.as_ref()
    }

    pub fn course_status(&self) -> Option<CourseStatus> {
        self.course.as_ref().map(|c| c.status)
    }

    pub fn actor(&self, id: ActorId) -> Option<&Actor> {
        self.actors.get(&id)
    }

    pub fn actors(&self) -> impl Iterator<Item = &Actor> {
        self.actors.values()
    }

    pub fn group(&self, id: GroupId) -> Option<&ProjectGroup> {
        self.groups.get(&id)
    }

    pub fn groups(&self) -> impl Iterator<Item = &ProjectGroup> {
        self.groups.values()
    }

    pub fn task(&self, id: TaskId) -> Option<&Task> {
        self.tasks.get(&id)
    }

    pub(crate) fn tasks(&self) -> &BTreeMap<TaskId, Task> {
        &self.tasks
    }

    pub fn tasks_of(&self, group: GroupId) -> impl Iterator<Item = &Task> {
        self.tasks.values().filter(move |t| t.group_id == group)
    }

    pub fn deliverable(&self, id: DeliverableId) -> Option<&Deliverable> {
        self.deliverables.get(&id)
    }

    pub fn deliverables_of(&self, group: GroupId) -> impl Iterator<Item = &Deliverable> {
        self.deliverables.values().filter(move |d| d.group_id == group)
    }

    pub fn skills(&self, group: GroupId) -> &[SkillItem] {
        self.skills.get(&group).map(Vec::as_slice).unwrap_or_default()
    }

    pub fn time_entries(&self, student: ActorId) -> impl Iterator<Item = &TimeEntry> {
        self.time_entries.get(&student).into_iter().flatten()
    }

    /// Latest frame-of-mind score of a student for a week.
    pub fn frame_of_mind(&self, student: ActorId, period: Period) -> Option<u8> {
        self.frame_of_mind.get(&student)?.get(&period).copied()
    }

    /// Latest self report per week, oldest week first.
    pub fn self_reports(&self, student: ActorId) -> impl Iterator<Item = (Period, &[SelfReportItem])> {
        self.self_reports
            .get(&student)
            .into_iter()
            .flatten()
            .map(|(p, items)| (*p, items.as_slice()))
    }

    pub fn self_report(&self, student: ActorId, period: Period) -> Option<&[SelfReportItem]> {
        self.self_reports.get(&student)?.get(&period).map(Vec::as_slice)
    }

    /// Whether the actor authored at least one event during the period.
    pub fn was_active(&self, actor: ActorId, period: Period) -> bool {
        self.active_periods
            .get(&actor)
            .is_some_and(|p| p.contains(&period))
    }

    pub fn blog(&self, owner: BlogOwner) -> Option<&Blog> {
        self.blogs.get(&owner)
    }

    pub fn blogs(&self) -> impl Iterator<Item = &Blog> {
        self.blogs.values()
    }

    pub fn post(&self, id: PostId) -> Option<&BlogPost> {
        self.posts.get(&id)
    }

    pub fn posts(&self) -> impl Iterator<Item = &BlogPost> {
        self.posts.values()
    }

    pub fn forum(&self) -> &Forum {
        &self.forum
    }

    pub fn contract(&self, owner: ActorId) -> Option<&LearningContract> {
        self.contracts.get(&owner)
    }

    pub fn contracts(&self) -> impl Iterator<Item = &LearningContract> {
        self.contracts.values()
    }

    pub fn evaluation(&self, group: GroupId) -> Option<&EvaluationRecord> {
        self.evaluations.get(&group)
    }

    pub fn event_kind(&self, seq: Seq) -> Option<EventKind> {
        let idx = usize::try_from(seq).ok()?.checked_sub(1)?;
        self.kinds.get(idx).copied()
    }

    pub fn last_seq(&self) -> Seq {
        self.kinds.len() as Seq
    }

    pub fn last_timestamp(&self) -> Option<Timestamp> {
        self.last_timestamp
    }

    pub fn next_actor_id(&self) -> ActorId {
        ActorId(self.counters.actor + 1)
    }

    pub fn next_group_id(&self) -> GroupId {
        GroupId(self.counters.group + 1)
    }

    pub fn next_task_id(&self) -> TaskId {
        TaskId(self.counters.task + 1)
    }

    pub fn next_deliverable_id(&self) -> DeliverableId {
        DeliverableId(self.counters.deliverable + 1)
    }

    pub fn next_post_id(&self) -> PostId {
        PostId(self.counters.post + 1)
    }

    pub fn next_subject_id(&self) -> SubjectId {
        SubjectId(self.counters.subject + 1)
    }

    pub fn next_discussion_id(&self) -> DiscussionId {
        DiscussionId(self.counters.discussion + 1)
    }

    // ---- folding ----

    /// Applies one event. Checks everything first, so a rejected event
    /// leaves the state untouched.
    pub fn apply(&mut self, event: &ActivityEvent) -> Check {
        ensure(event.seq == self.last_seq() + 1, || {
            format!("seq {} does not follow {}", event.seq, self.last_seq())
        })?;
        if let Some(last) = self.last_timestamp {
            ensure(event.timestamp >= last, || "timestamp goes backwards".into())?;
        }
        let actor = event.actor_id;
        ensure(actor == ActorId::SYSTEM || self.actors.contains_key(&actor), || {
            format!("unknown author {actor}")
        })?;
        match &event.payload {
            Payload::CourseUpdate(c) => self.apply_course(c, event.timestamp)?,
            Payload::RosterUpdate(r) => self.apply_roster(r)?,
            Payload::TimeEntry(entry) => {
                self.running_student(entry.student_id)?;
                ensure(entry.hours <= Hours::MAX_ENTRY, || "more than 24 h in one entry".into())?;
                self.time_entries
                    .entry(entry.student_id)
                    .or_default()
                    .push(entry.clone());
            }
            Payload::FrameOfMind {
                student_id,
                period,
                score,
            } => {
                self.running_student(*student_id)?;
                ensure((1..=5).contains(score), || format!("frame of mind {score}"))?;
                self.frame_of_mind
                    .entry(*student_id)
                    .or_default()
                    .insert(*period, *score);
            }
            Payload::TaskUpdate(t) => self.apply_task(t, event.timestamp)?,
            Payload::DashboardUpdate(d) => self.apply_dashboard(d, event.timestamp)?,
            Payload::DeliverableSubmit { deliverable_id } => {
                let d = self.deliverable_ref(*deliverable_id)?;
                ensure(d.submitted_at.is_none(), || "already submitted".into())?;
                self.deliverables.get_mut(deliverable_id).unwrap().submitted_at = Some(event.timestamp);
            }
            Payload::DeliverableAccept { deliverable_id } => {
                let d = self.deliverable_ref(*deliverable_id)?;
                ensure(d.submitted_at.is_some(), || "accepted before submission".into())?;
                ensure(d.accepted_at.is_none(), || "already accepted".into())?;
                let d = self.deliverables.get_mut(deliverable_id).unwrap();
                d.accepted_at = Some(event.timestamp);
                d.accepted_by = Some(actor);
            }
            Payload::DeliverableComment(c) => {
                self.deliverable_ref(c.deliverable_id)?;
                let d = self.deliverables.get_mut(&c.deliverable_id).unwrap();
                d.comment_count += 1;
                d.comment_times.push(event.timestamp);
            }
            Payload::BlogPost(p) => self.apply_post(p, actor, event.timestamp)?,
            Payload::ForumMessage(f) => self.apply_forum(f, actor, event.timestamp)?,
            Payload::TaxonomyUpdate(t) => self.apply_taxonomy(t)?,
            Payload::SelfReport {
                student_id,
                period,
                items,
            } => {
                self.running_student(*student_id)?;
                ensure(!items.is_empty(), || "empty self report".into())?;
                ensure(items.iter().all(|i| (1..=5).contains(&i.response)), || {
                    "self report response outside 1..=5".into()
                })?;
                self.self_reports
                    .entry(*student_id)
                    .or_default()
                    .insert(*period, items.clone());
            }
            Payload::Evaluation(e) => self.apply_evaluation(e)?,
            Payload::ContractUpdate(c) => self.apply_contract(c, event.timestamp)?,
        }
        self.kinds.push(event.kind());
        self.last_timestamp = Some(event.timestamp);
        if actor != ActorId::SYSTEM {
            self.active_periods
                .entry(actor)
                .or_default()
                .insert(Period::of(event.timestamp));
        }
        Ok(())
    }

    fn running_student(&self, student: ActorId) -> Check {
        self.require_running()?;
        let a = self
            .actors
            .get(&student)
            .ok_or_else(|| format!("unknown student {student}"))?;
        ensure(a.role.is_student() && a.group_id.is_some(), || {
            format!("{student} is not a student in a group")
        })
    }

    fn deliverable_ref(&self, id: DeliverableId) -> std::result::Result<&Deliverable, String> {
        self.deliverables
            .get(&id)
            .ok_or_else(|| format!("unknown deliverable {id}"))
    }

    fn apply_course(&mut self, change: &CourseChange, ts: Timestamp) -> Check {
        match change {
            CourseChange::Created {
                course_id,
                name,
                calendar,
            } => {
                ensure(self.course.is_none(), || "course already exists".into())?;
                validate_calendar(calendar).map_err(|e| e.to_string())?;
                self.course = Some(Course {
                    id: *course_id,
                    name: name.clone(),
                    calendar: calendar.clone(),
                    status: CourseStatus::Setup,
                    created_at: ts,
                });
                for root in TaxonomyRoot::ALL {
                    let id = self.next_subject_id();
                    self.counters.subject += 1;
                    self.forum.taxonomy_mut().insert(TaxonomySubject {
                        id,
                        label: root.label().to_string(),
                        parent_id: None,
                        root,
                        status: SubjectStatus::Seed,
                    });
                }
            }
            CourseChange::Advanced { to } => {
                let course = self.course.as_mut().ok_or("no course")?;
                let expected = match course.status {
                    CourseStatus::Setup => CourseStatus::Running,
                    CourseStatus::Running => CourseStatus::Closed,
                    CourseStatus::Closed => return Err("course already closed".into()),
                };
                ensure(*to == expected, || format!("cannot move to {to:?}"))?;
                course.status = *to;
            }
        }
        Ok(())
    }

    fn apply_roster(&mut self, change: &RosterChange) -> Check {
        ensure(self.course_status() == Some(CourseStatus::Setup), || {
            "roster changes need a course in setup".into()
        })?;
        match change {
            RosterChange::ActorRegistered { actor_id, name, role } => {
                expect_id(*actor_id, self.next_actor_id())?;
                self.counters.actor += 1;
                self.actors.insert(
                    *actor_id,
                    Actor {
                        id: *actor_id,
                        name: name.clone(),
                        role: *role,
                        group_id: None,
                    },
                );
                if role.is_student() {
                    let owner = BlogOwner::Student(*actor_id);
                    self.blogs.insert(owner, Blog { owner, post_ids: Vec::new() });
                }
            }
            RosterChange::GroupCreated {
                group_id,
                name,
                member_ids,
                leader_id,
                technical_tutor_id,
                management_tutor_id,
                subject,
            } => {
                expect_id(*group_id, self.next_group_id())?;
                let group = ProjectGroup {
                    id: *group_id,
                    name: name.clone(),
                    member_ids: member_ids.clone(),
                    leader_id: *leader_id,
                    technical_tutor_id: *technical_tutor_id,
                    management_tutor_id: *management_tutor_id,
                    subject: subject.clone(),
                };
                self.check_new_group(&group).map_err(|e| e.to_string())?;
                self.counters.group += 1;
                for m in member_ids {
                    let a = self.actors.get_mut(m).unwrap();
                    a.group_id = Some(*group_id);
                    if m == leader_id {
                        a.role = Role::ProjectLeader;
                    }
                }
                for t in [technical_tutor_id, management_tutor_id] {
                    self.actors.get_mut(t).unwrap().group_id = Some(*group_id);
                }
                let owner = BlogOwner::Group(*group_id);
                self.blogs.insert(owner, Blog { owner, post_ids: Vec::new() });
                self.groups.insert(*group_id, group);
            }
        }
        Ok(())
    }

    /// Roster rules for a group about to be created.
    pub(crate) fn check_new_group(&self, g: &ProjectGroup) -> Result<()> {
        if g.technical_tutor_id == g.management_tutor_id {
            return Err(Error::DuplicateTutor);
        }
        if g.is_member(g.technical_tutor_id) || g.is_member(g.management_tutor_id) {
            return Err(Error::TutorIsMember);
        }
        if !g.is_member(g.leader_id) {
            return Err(Error::LeaderNotMember);
        }
        if g.name.trim().is_empty() {
            return Err(Error::InvalidGroup("group name is empty".into()));
        }
        if g.size() < 2 {
            return Err(Error::InvalidGroup("a group needs at least 2 members".into()));
        }
        for m in &g.member_ids {
            let a = self
                .actor(*m)
                .ok_or_else(|| Error::UnknownActor(m.to_string()))?;
            if !a.role.is_student() {
                return Err(Error::InvalidGroup(format!("{m} is not a student")));
            }
            if a.group_id.is_some() {
                return Err(Error::InvalidGroup(format!("{m} already belongs to a group")));
            }
        }
        for (t, role) in [
            (g.technical_tutor_id, Role::TechnicalTutor),
            (g.management_tutor_id, Role::ManagementTutor),
        ] {
            let a = self
                .actor(t)
                .ok_or_else(|| Error::UnknownActor(t.to_string()))?;
            if a.role != role {
                return Err(Error::InvalidGroup(format!("{t} is not a {role:?}")));
            }
            if a.group_id.is_some() {
                return Err(Error::InvalidGroup(format!("{t} already tutors a group")));
            }
        }
        Ok(())
    }

    fn require_running(&self) -> Check {
        ensure(self.course_status() == Some(CourseStatus::Running), || {
            "course is not running".into()
        })
    }

    fn apply_task(&mut self, change: &TaskChange, ts: Timestamp) -> Check {
        self.require_running()?;
        match change {
            TaskChange::Created {
                task_id,
                group_id,
                fields,
            } => {
                expect_id(*task_id, self.next_task_id())?;
                ensure(self.groups.contains_key(group_id), || format!("unknown group {group_id}"))?;
                self.check_task_fields(*task_id, *group_id, fields)?;
                self.counters.task += 1;
                let mut task = Task {
                    id: *task_id,
                    group_id: *group_id,
                    title: fields.title.clone(),
                    assignee_id: fields.assignee_id,
                    original_assignee_id: fields.assignee_id,
                    dependency_ids: fields.dependency_ids.clone(),
                    status: TaskStatus::Planned,
                    planned_start: fields.planned_start,
                    planned_end: fields.planned_end,
                    actual_start: None,
                    actual_end: None,
                    status_history: vec![(ts, fields.status)],
                    assignment_history: vec![(ts, fields.assignee_id)],
                    start_check: None,
                };
                self.move_task(&mut task, fields.status, ts);
                self.tasks.insert(*task_id, task);
            }
            TaskChange::Updated { task_id, fields } => {
                let group_id = self
                    .tasks
                    .get(task_id)
                    .ok_or_else(|| format!("unknown task {task_id}"))?
                    .group_id;
                self.check_task_fields(*task_id, group_id, fields)?;
                let mut task = self.tasks.remove(task_id).unwrap();
                task.title = fields.title.clone();
                task.planned_start = fields.planned_start;
                task.planned_end = fields.planned_end;
                task.dependency_ids = fields.dependency_ids.clone();
                if task.assignee_id != fields.assignee_id {
                    task.assignee_id = fields.assignee_id;
                    task.assignment_history.push((ts, fields.assignee_id));
                    if task.original_assignee_id.is_none() {
                        task.original_assignee_id = fields.assignee_id;
                    }
                }
                if task.status != fields.status {
                    task.status_history.push((ts, fields.status));
                }
                self.move_task(&mut task, fields.status, ts);
                self.tasks.insert(*task_id, task);
            }
        }
        Ok(())
    }

    /// Sets status and the derived start/end dates and start check.
    fn move_task(&self, task: &mut Task, status: TaskStatus, ts: Timestamp) {
        let date = ts.date_naive();
        if status != TaskStatus::Planned && task.start_check.is_none() {
            let had = !task.dependency_ids.is_empty();
            let done = task
                .dependency_ids
                .iter()
                .all(|d| self.tasks.get(d).is_some_and(|t| t.status == TaskStatus::Done));
            task.start_check = Some(StartCheck {
                at: ts,
                had_dependencies: had,
                dependencies_done: done,
            });
            task.actual_start = Some(date);
        }
        match status {
            TaskStatus::Done if task.status != TaskStatus::Done || task.actual_end.is_none() => {
                task.actual_end = Some(date);
            }
            TaskStatus::Done => {}
            _ => task.actual_end = None,
        }
        task.status = status;
    }

    fn check_task_fields(&self, id: TaskId, group: GroupId, fields: &TaskFields) -> Check {
        ensure(!fields.title.trim().is_empty(), || "task title is empty".into())?;
        ensure(fields.planned_start <= fields.planned_end, || {
            "planned start after planned end".into()
        })?;
        if let Some(a) = fields.assignee_id {
            ensure(self.groups[&group].is_member(a), || format!("assignee {a} is not a member"))?;
        }
        for d in &fields.dependency_ids {
            ensure(*d == id || self.tasks.get(d).is_some_and(|t| t.group_id == group), || {
                format!("dependency {d} is not a task of {group}")
            })?;
        }
        ensure(!creates_cycle(&self.tasks, id, &fields.dependency_ids), || {
            "dependency cycle".into()
        })
    }

    fn apply_dashboard(&mut self, change: &DashboardChange, ts: Timestamp) -> Check {
        self.require_running()?;
        match change {
            DashboardChange::DefineDeliverable(def) => {
                expect_id(def.deliverable_id, self.next_deliverable_id())?;
                ensure(self.groups.contains_key(&def.group_id), || "unknown group".into())?;
                ensure(!def.title.trim().is_empty(), || "deliverable title is empty".into())?;
                self.counters.deliverable += 1;
                self.deliverables.insert(
                    def.deliverable_id,
                    Deliverable {
                        id: def.deliverable_id,
                        group_id: def.group_id,
                        title: def.title.clone(),
                        due: def.due,
                        defined_at: ts,
                        submitted_at: None,
                        accepted_at: None,
                        accepted_by: None,
                        comment_count: 0,
                        comment_times: Vec::new(),
                    },
                );
            }
            DashboardChange::SetSkills { group_id, items } => {
                ensure(self.groups.contains_key(group_id), || "unknown group".into())?;
                self.skills.insert(*group_id, items.clone());
            }
        }
        Ok(())
    }

    fn apply_post(&mut self, change: &PostChange, actor: ActorId, ts: Timestamp) -> Check {
        let (post_id, blog, body, status, published_by) = match change {
            PostChange::StudentPost {
                post_id,
                student_id,
                body,
            } => {
                ensure(*student_id == actor, || "student post by someone else".into())?;
                (*post_id, BlogOwner::Student(*student_id), body, PostStatus::Published, Some(actor))
            }
            PostChange::GroupProposal {
                post_id,
                group_id,
                body,
            } => (*post_id, BlogOwner::Group(*group_id), body, PostStatus::Draft, None),
            PostChange::GroupConfirm { post_id } => {
                let post = self
                    .posts
                    .get(post_id)
                    .ok_or_else(|| format!("unknown post {post_id}"))?;
                let BlogOwner::Group(g) = post.blog else {
                    return Err("confirming a student post".into());
                };
                ensure(post.status == PostStatus::Draft, || "already published".into())?;
                ensure(self.groups[&g].leader_id == actor, || "confirmed by a non-leader".into())?;
                let post = self.posts.get_mut(post_id).unwrap();
                post.status = PostStatus::Published;
                post.published_by = Some(actor);
                return Ok(());
            }
        };
        expect_id(post_id, self.next_post_id())?;
        ensure(self.blogs.contains_key(&blog), || format!("no blog {blog}"))?;
        self.counters.post += 1;
        self.blogs.get_mut(&blog).unwrap().post_ids.push(post_id);
        self.posts.insert(
            post_id,
            BlogPost {
                id: post_id,
                blog,
                author_id: actor,
                body: body.clone(),
                created_at: ts,
                status,
                published_by,
            },
        );
        Ok(())
    }

    fn apply_forum(&mut self, change: &ForumChange, actor: ActorId, ts: Timestamp) -> Check {
        let role = self.actors.get(&actor).map(|a| a.role).ok_or("forum message without author")?;
        ensure(!role.is_student() && role != Role::Teacher, || {
            format!("{role:?} cannot post on the forum")
        })?;
        let message = |body: &String| Message {
            author_id: actor,
            body: body.clone(),
            timestamp: ts,
        };
        match change {
            ForumChange::Opened {
                discussion_id,
                title,
                body,
                tags,
            } => {
                expect_id(*discussion_id, self.next_discussion_id())?;
                ensure(!tags.is_empty(), || "discussion without tags".into())?;
                if let Some(t) = tags.iter().find(|t| self.forum.taxonomy().get(**t).is_none()) {
                    return Err(format!("unknown tag {t}"));
                }
                self.counters.discussion += 1;
                self.forum.insert_discussion(Discussion {
                    id: *discussion_id,
                    title: title.clone(),
                    opener_id: actor,
                    tags: tags.clone(),
                    messages: vec![message(body)],
                });
            }
            ForumChange::Reply { discussion_id, body } => {
                let d = self
                    .forum
                    .discussion_mut(*discussion_id)
                    .ok_or_else(|| format!("unknown discussion {discussion_id}"))?;
                d.messages.push(message(body));
            }
        }
        Ok(())
    }

    fn apply_taxonomy(&mut self, change: &TaxonomyChange) -> Check {
        ensure(self.course.is_some(), || "taxonomy before course".into())?;
        let taxonomy = self.forum.taxonomy();
        match change {
            TaxonomyChange::Seeded {
                subject_id,
                parent_id,
                root,
                label,
            } => {
                expect_id(*subject_id, self.next_subject_id())?;
                let label = taxonomy
                    .validate_seed(*parent_id, *root, label)
                    .map_err(|e| e.to_string())?;
                self.counters.subject += 1;
                self.forum.taxonomy_mut().insert(TaxonomySubject {
                    id: *subject_id,
                    label,
                    parent_id: *parent_id,
                    root: *root,
                    status: SubjectStatus::Seed,
                });
            }
            TaxonomyChange::Proposed {
                subject_id,
                parent_id,
                label,
            } => {
                expect_id(*subject_id, self.next_subject_id())?;
                let label = taxonomy
                    .validate_proposal(*parent_id, label)
                    .map_err(|e| e.to_string())?;
                let root = taxonomy.get(*parent_id).unwrap().root;
                self.counters.subject += 1;
                self.forum.taxonomy_mut().insert(TaxonomySubject {
                    id: *subject_id,
                    label,
                    parent_id: Some(*parent_id),
                    root,
                    status: SubjectStatus::Proposed,
                });
            }
            TaxonomyChange::Renamed { subject_id, label } => {
                let label = taxonomy
                    .validate_rename(*subject_id, label)
                    .map_err(|e| e.to_string())?;
                self.forum.taxonomy_mut().rename(*subject_id, label);
            }
            TaxonomyChange::Merged { from, into } => {
                taxonomy.validate_merge(*from, *into).map_err(|e| e.to_string())?;
                self.forum.merge_subjects(*from, *into);
            }
        }
        Ok(())
    }

    fn apply_evaluation(&mut self, change: &EvaluationChange) -> Check {
        ensure(
            matches!(self.course_status(), Some(CourseStatus::Running | CourseStatus::Closed)),
            || "grading outside a started course".into(),
        )?;
        match change {
            EvaluationChange::GroupGrade { group_id, grade } => {
                ensure(self.groups.contains_key(group_id), || "unknown group".into())?;
                ensure(grade.is_finite() && (0.0..=MAX_GRADE).contains(grade), || {
                    format!("grade {grade}")
                })?;
                self.evaluations.entry(*group_id).or_default().group_grade = Some(*grade);
            }
            EvaluationChange::StudentAdjustment {
                student_id,
                adjustment,
            } => {
                let group = self
                    .actors
                    .get(student_id)
                    .filter(|a| a.role.is_student())
                    .and_then(|a| a.group_id)
                    .ok_or_else(|| format!("unknown student {student_id}"))?;
                ensure(adjustment.is_finite() && adjustment.abs() <= MAX_ADJUSTMENT, || {
                    format!("adjustment {adjustment}")
                })?;
                self.evaluations
                    .entry(group)
                    .or_default()
                    .adjustments
                    .insert(*student_id, *adjustment);
            }
        }
        Ok(())
    }

    fn apply_contract(&mut self, change: &ContractChange, ts: Timestamp) -> Check {
        match change {
            ContractChange::Initialized { owner_id, answers } => {
                ensure(self.actors.contains_key(owner_id), || format!("unknown owner {owner_id}"))?;
                ensure(!self.contracts.contains_key(owner_id), || "contract exists".into())?;
                ensure(self.course_status() != Some(CourseStatus::Closed), || {
                    "contract initialized after closure".into()
                })?;
                self.contracts.insert(
                    *owner_id,
                    LearningContract {
                        owner_id: *owner_id,
                        answers: answers.clone(),
                        status: ContractStatus::Active,
                        created_at: ts,
                        revision: None,
                    },
                );
            }
            ContractChange::Revised {
                owner_id,
                answers,
                linked_seqs,
            } => {
                ensure(self.course_status() == Some(CourseStatus::Closed), || {
                    "contract revised before closure".into()
                })?;
                for seq in linked_seqs {
                    ensure(
                        matches!(self.event_kind(*seq), Some(EventKind::BlogPost | EventKind::ForumMessage)),
                        || format!("link to {seq} is not a blog or forum event"),
                    )?;
                }
                let contract = self
                    .contracts
                    .get_mut(owner_id)
                    .ok_or_else(|| format!("no contract for {owner_id}"))?;
                contract.status = ContractStatus::Revised;
                contract.revision = Some(ContractRevision {
                    answers: answers.clone(),
                    linked_seqs: linked_seqs.clone(),
                    revised_at: ts,
                });
            }
        }
        Ok(())
    }

    // ---- invariants ----

    /// Every structural invariant of the domain. Returns the first violation.
    pub fn check_invariants(&self) -> Check {
        if let Some(c) = &self.course {
            validate_calendar(&c.calendar).map_err(|e| e.to_string())?;
        }
        for a in self.actors.values() {
            if matches!(a.role, Role::Teacher | Role::Director) || a.role.is_manager() {
                ensure(a.group_id.is_none(), || format!("{} has a group", a.id))?;
            }
            if let Some(g) = a.group_id {
                let group = self.groups.get(&g).ok_or_else(|| format!("{} in missing group", a.id))?;
                ensure(group.is_member(a.id) || group.is_tutor(a.id), || {
                    format!("{} not listed in {g}", a.id)
                })?;
            }
            if a.role == Role::ProjectLeader {
                let g = a.group_id.ok_or("leader without group")?;
                ensure(self.groups[&g].leader_id == a.id, || format!("{} leads nothing", a.id))?;
            }
        }
        for g in self.groups.values() {
            ensure(g.is_member(g.leader_id), || format!("{} leader not a member", g.id))?;
            ensure(g.size() >= 2, || format!("{} too small", g.id))?;
            ensure(g.technical_tutor_id != g.management_tutor_id, || "same tutor twice".into())?;
            ensure(!g.is_member(g.technical_tutor_id) && !g.is_member(g.management_tutor_id), || {
                "tutor is a member".into()
            })?;
            for m in &g.member_ids {
                ensure(self.actors.get(m).and_then(|a| a.group_id) == Some(g.id), || {
                    format!("{m} membership mismatch")
                })?;
            }
        }
        for t in self.tasks.values() {
            ensure(!creates_cycle(&self.tasks, t.id, &t.dependency_ids), || {
                format!("cycle through {}", t.id)
            })?;
            if let (Some(s), Some(e)) = (t.actual_start, t.actual_end) {
                ensure(s <= e, || format!("{} ends before it starts", t.id))?;
            }
            ensure(t.status_history.last().map(|(_, s)| *s) == Some(t.status), || {
                format!("{} history disagrees with status", t.id)
            })?;
        }
        for d in self.deliverables.values() {
            if let Some(acc) = d.accepted_at {
                let sub = d.submitted_at.ok_or_else(|| format!("{} accepted unsubmitted", d.id))?;
                ensure(acc >= sub, || format!("{} accepted before submission", d.id))?;
            }
            ensure(d.comment_count as usize == d.comment_times.len(), || "comment count".into())?;
        }
        let students = self.actors.values().filter(|a| a.role.is_student()).count();
        ensure(self.blogs.len() == students + self.groups.len(), || "blog count".into())?;
        for p in self.posts.values() {
            match p.blog {
                BlogOwner::Group(g) => {
                    if p.status == PostStatus::Published {
                        ensure(p.published_by == Some(self.groups[&g].leader_id), || {
                            format!("{} published by a non-leader", p.id)
                        })?;
                    }
                }
                BlogOwner::Student(s) => {
                    ensure(p.author_id == s && p.status == PostStatus::Published, || {
                        format!("{} on a student blog", p.id)
                    })?;
                }
            }
        }
        if self.course.is_some() {
            self.forum.taxonomy().check_integrity()?;
        } else {
            ensure(self.forum.taxonomy().is_empty(), || "taxonomy without a course".into())?;
        }
        for d in self.forum.discussions() {
            ensure(!d.tags.is_empty(), || format!("{} has no tags", d.id))?;
            for m in &d.messages {
                let role = self.actors.get(&m.author_id).map(|a| a.role);
                ensure(role.is_some_and(|r| !r.is_student()), || {
                    format!("student message in {}", d.id)
                })?;
            }
        }
        for c in self.contracts.values() {
            if c.status == ContractStatus::Revised {
                ensure(self.course_status() == Some(CourseStatus::Closed), || {
                    "revised contract before closure".into()
                })?;
            }
        }
        for r in self.evaluations.values() {
            if let Some(g) = r.group_grade {
                ensure((0.0..=MAX_GRADE).contains(&g), || "grade out of range".into())?;
            }
            ensure(r.adjustments.values().all(|a| a.abs() <= MAX_ADJUSTMENT), || {
                "adjustment out of range".into()
            })?;
        }
        Ok(())
    }
}
