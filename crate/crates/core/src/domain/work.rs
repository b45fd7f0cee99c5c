use std::collections::{BTreeMap, BTreeSet};

use chrono::NaiveDate;

use super::{
    ActivityEvent, CourseStatus, DashboardChange, Deliverable, DeliverableComment,
    DeliverableDefinition, Payload, SkillItem, Task, TaskChange, TaskFields, TaskStatus, TimeEntry,
};
use crate::error::{Error, Result};
use crate::ids::{ActorId, DeliverableId, GroupId, TaskId};
use crate::platform::{forbidden, Platform};
use crate::policy::{Action, Resource};
use crate::time::Hours;

/// Fields of a new task.
pub type NewTask = TaskFields;

/// Partial change to a task; `None` leaves a field as it is.
#[derive(Debug, Clone, Default, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct TaskUpdate {
    #[serde(default)]
    pub title: Option<String>,
    /// `Some(None)` unassigns the task.
    #[serde(default, with = "double_option")]
    pub assignee_id: Option<Option<ActorId>>,
    #[serde(default)]
    pub dependency_ids: Option<BTreeSet<TaskId>>,
    #[serde(default)]
    pub status: Option<TaskStatus>,
    #[serde(default)]
    pub planned_start: Option<NaiveDate>,
    #[serde(default)]
    pub planned_end: Option<NaiveDate>,
}

mod double_option {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<T: Serialize, S: Serializer>(v: &Option<Option<T>>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            None => s.serialize_none(),
            Some(inner) => inner.serialize(s),
        }
    }

    pub fn deserialize<'de, T: Deserialize<'de>, D: Deserializer<'de>>(d: D) -> Result<Option<Option<T>>, D::Error> {
        Option::<T>::deserialize(d).map(Some)
    }
}

impl TaskUpdate {
    fn apply_to(&self, task: &Task) -> TaskFields {
        TaskFields {
            title: self.title.clone().unwrap_or_else(|| task.title.clone()),
            assignee_id: self.assignee_id.unwrap_or(task.assignee_id),
            dependency_ids: self
                .dependency_ids
                .clone()
                .unwrap_or_else(|| task.dependency_ids.clone()),
            status: self.status.unwrap_or(task.status),
            planned_start: self.planned_start.unwrap_or(task.planned_start),
            planned_end: self.planned_end.unwrap_or(task.planned_end),
        }
    }
}

/// Whether giving task `id` the dependencies `deps` closes a cycle.
pub(crate) fn creates_cycle(tasks: &BTreeMap<TaskId, Task>, id: TaskId, deps: &BTreeSet<TaskId>) -> bool {
    let mut seen = BTreeSet::new();
    let mut stack: Vec<TaskId> = deps.iter().copied().collect();
    while let Some(t) = stack.pop() {
        if t == id {
            return true;
        }
        if seen.insert(t) {
            if let Some(task) = tasks.get(&t) {
                stack.extend(task.dependency_ids.iter().copied());
            }
        }
    }
    false
}

impl Platform {
    pub(crate) fn require_running(&self) -> Result<()> {
        match self.state().course_status() {
            None => Err(Error::NoCourse),
            Some(CourseStatus::Running) => Ok(()),
            Some(CourseStatus::Setup) => Err(Error::WrongCourseStatus("in setup")),
            Some(CourseStatus::Closed) => Err(Error::WrongCourseStatus("closed")),
        }
    }

    fn check_task_fields(&self, group: GroupId, id: TaskId, fields: &TaskFields) -> Result<()> {
        if fields.title.trim().is_empty() {
            return Err(Error::InvalidInput("task title is empty".into()));
        }
        if fields.planned_start > fields.planned_end {
            return Err(Error::InvalidInput("planned start is after planned end".into()));
        }
        let g = self
            .state()
            .group(group)
            .ok_or_else(|| Error::UnknownGroup(group.to_string()))?;
        if let Some(a) = fields.assignee_id {
            if !g.is_member(a) {
                return Err(Error::InvalidInput(format!("assignee {a} is not a member of {group}")));
            }
        }
        if fields.dependency_ids.contains(&id) {
            return Err(Error::CycleDetected);
        }
        for d in &fields.dependency_ids {
            if self.state().task(*d).is_none_or(|t| t.group_id != group) {
                return Err(Error::UnknownTask(d.to_string()));
            }
        }
        if creates_cycle(self.state().tasks(), id, &fields.dependency_ids) {
            return Err(Error::CycleDetected);
        }
        Ok(())
    }

    pub fn add_task(&mut self, actor: ActorId, group: GroupId, task: NewTask) -> Result<Task> {
        self.authorize_or_fail(actor, Action::Write, &Resource::Task(group))?;
        self.require_running()?;
        let task_id = self.state().next_task_id();
        let mut fields = task;
        fields.title = fields.title.trim().to_string();
        self.check_task_fields(group, task_id, &fields)?;
        self.commit(
            actor,
            Payload::TaskUpdate(TaskChange::Created {
                task_id,
                group_id: group,
                fields,
            }),
        )?;
        Ok(self.state().task(task_id).cloned().expect("just created"))
    }

    /// Applies a partial change. Reassignment keeps the original assignee.
    pub fn update_task(&mut self, actor: ActorId, group: GroupId, task_id: TaskId, update: TaskUpdate) -> Result<Task> {
        let task = self
            .state()
            .task(task_id)
            .filter(|t| t.group_id == group)
            .ok_or_else(|| Error::UnknownTask(task_id.to_string()))?;
        let mut fields = update.apply_to(task);
        self.authorize_or_fail(actor, Action::Write, &Resource::Task(group))?;
        self.require_running()?;
        fields.title = fields.title.trim().to_string();
        self.check_task_fields(group, task_id, &fields)?;
        self.commit(actor, Payload::TaskUpdate(TaskChange::Updated { task_id, fields }))?;
        Ok(self.state().task(task_id).cloned().expect("exists"))
    }

    pub fn list_tasks(&self, actor: ActorId, group: GroupId) -> Result<Vec<Task>> {
        self.authorize_or_fail(actor, Action::Read, &Resource::Task(group))?;
        Ok(self.state().tasks_of(group).cloned().collect())
    }

    /// Logs hours worked on a given day (0 to 24 per entry).
    pub fn record_time_entry(&mut self, actor: ActorId, student: ActorId, date: NaiveDate, hours: f64) -> Result<ActivityEvent> {
        self.authorize_or_fail(actor, Action::Write, &Resource::TimeEntryStream(student))?;
        self.require_running()?;
        let hours = Hours::from_f64(hours)
            .filter(|h| *h <= Hours::MAX_ENTRY)
            .ok_or_else(|| Error::OutOfRange(format!("{hours} h is not within 0..=24")))?;
        self.commit(
            actor,
            Payload::TimeEntry(TimeEntry {
                student_id: student,
                date,
                hours,
            }),
        )
    }

    /// Leader adds a deliverable to the group dashboard.
    pub fn define_deliverable(&mut self, actor: ActorId, group: GroupId, title: &str, due: NaiveDate) -> Result<Deliverable> {
        self.authorize_or_fail(actor, Action::Write, &Resource::GroupDashboard(group))?;
        self.require_running()?;
        let title = title.trim();
        if title.is_empty() {
            return Err(Error::InvalidInput("deliverable title is empty".into()));
        }
        let deliverable_id = self.state().next_deliverable_id();
        self.commit(
            actor,
            Payload::DashboardUpdate(DashboardChange::DefineDeliverable(DeliverableDefinition {
                deliverable_id,
                group_id: group,
                title: title.to_string(),
                due,
            })),
        )?;
        Ok(self.state().deliverable(deliverable_id).cloned().expect("just defined"))
    }

    /// Leader replaces the group's skills checklist.
    pub fn set_skills(&mut self, actor: ActorId, group: GroupId, items: Vec<SkillItem>) -> Result<()> {
        self.authorize_or_fail(actor, Action::Write, &Resource::GroupDashboard(group))?;
        self.require_running()?;
        if items.iter().any(|i| i.skill.trim().is_empty()) {
            return Err(Error::InvalidInput("empty skill".into()));
        }
        self.commit(
            actor,
            Payload::DashboardUpdate(DashboardChange::SetSkills { group_id: group, items }),
        )?;
        Ok(())
    }

    fn deliverable_of(&self, group: GroupId, id: DeliverableId) -> Result<&Deliverable> {
        self.state()
            .deliverable(id)
            .filter(|d| d.group_id == group)
            .ok_or_else(|| Error::UnknownDeliverable(id.to_string()))
    }

    pub fn submit_deliverable(&mut self, actor: ActorId, group: GroupId, id: DeliverableId) -> Result<Deliverable> {
        let d = self.deliverable_of(group, id)?;
        let submitted = d.submitted_at.is_some();
        self.authorize_or_fail(actor, Action::Write, &Resource::Deliverable(group))?;
        if !self.state().group(group).is_some_and(|g| g.is_member(actor)) {
            return Err(forbidden("only a group member submits a deliverable"));
        }
        self.require_running()?;
        if submitted {
            return Err(Error::AlreadySubmitted);
        }
        self.commit(actor, Payload::DeliverableSubmit { deliverable_id: id })?;
        Ok(self.state().deliverable(id).cloned().expect("exists"))
    }

    /// Receipt of a deliverable by one of the group's tutors.
    pub fn accept_deliverable(&mut self, actor: ActorId, group: GroupId, id: DeliverableId) -> Result<Deliverable> {
        let d = self.deliverable_of(group, id)?;
        let (submitted, accepted) = (d.submitted_at.is_some(), d.accepted_at.is_some());
        self.authorize_or_fail(actor, Action::Write, &Resource::Deliverable(group))?;
        if !self.state().group(group).is_some_and(|g| g.is_tutor(actor)) {
            return Err(forbidden("only the group's tutors accept deliverables"));
        }
        self.require_running()?;
        if !submitted {
            return Err(Error::NotSubmitted);
        }
        if accepted {
            return Err(Error::AlreadyAccepted);
        }
        self.commit(actor, Payload::DeliverableAccept { deliverable_id: id })?;
        Ok(self.state().deliverable(id).cloned().expect("exists"))
    }

    /// Comment by a tutor of the group or by its leader.
    pub fn comment_deliverable(&mut self, actor: ActorId, group: GroupId, id: DeliverableId, body: &str) -> Result<Deliverable> {
        self.deliverable_of(group, id)?;
        self.authorize_or_fail(actor, Action::Write, &Resource::Deliverable(group))?;
        if !self
            .state()
            .group(group)
            .is_some_and(|g| g.is_tutor(actor) || g.leader_id == actor)
        {
            return Err(forbidden("only tutors and the leader comment on deliverables"));
        }
        self.require_running()?;
        let body = body.trim();
        if body.is_empty() {
            return Err(Error::InvalidInput("comment is empty".into()));
        }
        self.commit(
            actor,
            Payload::DeliverableComment(DeliverableComment {
                deliverable_id: id,
                body: body.to_string(),
            }),
        )?;
        Ok(self.state().deliverable(id).cloned().expect("exists"))
    }

    pub fn list_deliverables(&self, actor: ActorId, group: GroupId) -> Result<Vec<Deliverable>> {
        self.authorize_or_fail(actor, Action::Read, &Resource::Deliverable(group))?;
        Ok(self.state().deliverables_of(group).cloned().collect())
    }
}
