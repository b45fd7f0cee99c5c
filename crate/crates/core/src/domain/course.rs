use std::collections::BTreeSet;

use chrono::NaiveDate;

use super::{
    Course, CourseChange, CourseStatus, Payload, Phase, PhaseWindow, ProjectGroup, Role,
    RosterChange, TaxonomyChange,
};
use crate::error::{Error, Result};
use crate::ids::{ActorId, CourseId, GroupId, SubjectId};
use crate::platform::Platform;
use crate::policy::{PolicyDecision, RuleId};
use crate::sharing::{TaxonomyRoot, TUTOR_ROLE_SUBJECTS};

fn date(y: i32, m: u32, d: u32) -> NaiveDate {
    NaiveDate::from_ymd_opt(y, m, d).expect("valid date")
}

/// November to mid-April: tender, master plan, development, closure.
pub fn course_calendar() -> Vec<PhaseWindow> {
    vec![
        PhaseWindow {
            phase: Phase::Tender,
            start: date(2025, 11, 1),
            end: date(2025, 11, 30),
        },
        PhaseWindow {
            phase: Phase::MasterPlan,
            start: date(2025, 12, 1),
            end: date(2025, 12, 31),
        },
        PhaseWindow {
            phase: Phase::Development,
            start: date(2026, 1, 1),
            end: date(2026, 3, 31),
        },
        PhaseWindow {
            phase: Phase::Closure,
            start: date(2026, 4, 1),
            end: date(2026, 4, 15),
        },
    ]
}

/// Exactly four windows, one per phase in order, each non-empty and strictly
/// after the previous one.
pub fn validate_calendar(calendar: &[PhaseWindow]) -> Result<()> {
    if calendar.len() != Phase::ALL.len() {
        return Err(Error::InvalidCalendar(format!(
            "expected 4 phases, got {}",
            calendar.len()
        )));
    }
    for (window, phase) in calendar.iter().zip(Phase::ALL) {
        if window.phase != phase {
            return Err(Error::InvalidCalendar(format!(
                "phase {:?} where {phase:?} was expected",
                window.phase
            )));
        }
        if window.start >= window.end {
            return Err(Error::InvalidCalendar(format!("{phase:?} does not end after it starts")));
        }
    }
    for pair in calendar.windows(2) {
        if pair[1].start <= pair[0].end {
            return Err(Error::InvalidCalendar(format!(
                "{:?} overlaps {:?}",
                pair[0].phase, pair[1].phase
            )));
        }
    }
    Ok(())
}

/// Input for [`Platform::create_group`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NewGroup {
    pub name: String,
    pub member_ids: BTreeSet<ActorId>,
    pub leader_id: ActorId,
    pub technical_tutor_id: ActorId,
    pub management_tutor_id: ActorId,
    pub subject: String,
}

impl Platform {
    /// Creates the course and seeds the three taxonomy trees with the tutor
    /// roles and the four phases.
    pub fn create_course(&mut self, name: &str, calendar: Vec<PhaseWindow>) -> Result<Course> {
        if self.state().course().is_some() {
            return Err(Error::CourseExists);
        }
        validate_calendar(&calendar)?;
        let name = name.trim();
        if name.is_empty() {
            return Err(Error::InvalidInput("course name is empty".into()));
        }
        self.commit(
            ActorId::SYSTEM,
            Payload::CourseUpdate(CourseChange::Created {
                course_id: CourseId(1),
                name: name.to_string(),
                calendar,
            }),
        )?;
        let taxonomy = self.state().forum().taxonomy();
        let roots: Vec<SubjectId> = TaxonomyRoot::ALL
            .iter()
            .map(|r| taxonomy.root_of(*r).expect("roots come with the course").id)
            .collect();
        for label in TUTOR_ROLE_SUBJECTS {
            self.seed_subject(Some(roots[0]), TaxonomyRoot::RolesAndTasks, label)?;
        }
        for phase in Phase::ALL {
            self.seed_subject(Some(roots[1]), TaxonomyRoot::ProjectCalendar, phase.label())?;
        }
        Ok(self.state().course().cloned().expect("just created"))
    }

    fn seed_subject(
        &mut self,
        parent: Option<SubjectId>,
        root: TaxonomyRoot,
        label: &str,
    ) -> Result<SubjectId> {
        let label = self.state().forum().taxonomy().validate_seed(parent, root, label)?;
        let subject_id = self.state().next_subject_id();
        self.commit(
            ActorId::SYSTEM,
            Payload::TaxonomyUpdate(TaxonomyChange::Seeded {
                subject_id,
                parent_id: parent,
                root,
                label,
            }),
        )?;
        Ok(subject_id)
    }

    fn require_setup(&self) -> Result<()> {
        match self.state().course_status() {
            None => Err(Error::NoCourse),
            Some(CourseStatus::Setup) => Ok(()),
            Some(_) => Err(Error::RosterLocked),
        }
    }

    /// Adds a person to the roster. Students get their blog here.
    pub fn register_actor(&mut self, name: &str, role: Role) -> Result<ActorId> {
        self.require_setup()?;
        let name = name.trim();
        if name.is_empty() {
            return Err(Error::InvalidInput("actor name is empty".into()));
        }
        if role == Role::ProjectLeader {
            return Err(Error::InvalidInput(
                "leaders are registered as students and designated by their group".into(),
            ));
        }
        let actor_id = self.state().next_actor_id();
        self.commit(
            ActorId::SYSTEM,
            Payload::RosterUpdate(RosterChange::ActorRegistered {
                actor_id,
                name: name.to_string(),
                role,
            }),
        )?;
        Ok(actor_id)
    }

    /// Creates a group with its blog and its subject under GroupProgress.
    /// The leader's role becomes [`Role::ProjectLeader`].
    pub fn create_group(&mut self, group: NewGroup) -> Result<ProjectGroup> {
        self.require_setup()?;
        let group_id = self.state().next_group_id();
        let candidate = ProjectGroup {
            id: group_id,
            name: group.name.trim().to_string(),
            member_ids: group.member_ids,
            leader_id: group.leader_id,
            technical_tutor_id: group.technical_tutor_id,
            management_tutor_id: group.management_tutor_id,
            subject: group.subject.trim().to_string(),
        };
        self.state().check_new_group(&candidate)?;
        let progress = self
            .state()
            .forum()
            .taxonomy()
            .root_of(TaxonomyRoot::GroupProgress)
            .map(|s| s.id)
            .ok_or_else(|| Error::Internal("taxonomy not seeded".into()))?;
        // validate the subject label before anything is written
        self.state()
            .forum()
            .taxonomy()
            .validate_seed(Some(progress), TaxonomyRoot::GroupProgress, &candidate.name)?;
        self.commit(
            ActorId::SYSTEM,
            Payload::RosterUpdate(RosterChange::GroupCreated {
                group_id,
                name: candidate.name.clone(),
                member_ids: candidate.member_ids.clone(),
                leader_id: candidate.leader_id,
                technical_tutor_id: candidate.technical_tutor_id,
                management_tutor_id: candidate.management_tutor_id,
                subject: candidate.subject.clone(),
            }),
        )?;
        self.seed_subject(Some(progress), TaxonomyRoot::GroupProgress, &candidate.name)?;
        Ok(self.state().group(group_id).cloned().expect("just created"))
    }

    /// Director only: Setup to Running (roster must be complete), then Running to Closed.
    pub fn advance_course(&mut self, actor: ActorId) -> Result<Course> {
        let course = self.state().course().ok_or(Error::NoCourse)?;
        if actor != ActorId::SYSTEM {
            self.require_director(actor)?;
        }
        let to = match course.status {
            CourseStatus::Setup => {
                self.check_roster_complete()?;
                CourseStatus::Running
            }
            CourseStatus::Running => CourseStatus::Closed,
            CourseStatus::Closed => return Err(Error::AlreadyClosed),
        };
        self.commit(actor, Payload::CourseUpdate(CourseChange::Advanced { to }))?;
        Ok(self.state().course().cloned().expect("exists"))
    }

    fn check_roster_complete(&self) -> Result<()> {
        let state = self.state();
        if state.groups().next().is_none() {
            return Err(Error::IncompleteRoster("no group has been created".into()));
        }
        if let Some(a) = state
            .actors()
            .find(|a| a.role.needs_group() && a.group_id.is_none())
        {
            return Err(Error::IncompleteRoster(format!("{} ({:?}) has no group", a.id, a.role)));
        }
        Ok(())
    }

    /// Fails with `Forbidden` (default deny) unless the actor is the director.
    pub(crate) fn require_director(&self, actor: ActorId) -> Result<()> {
        let role = self
            .state()
            .actor(actor)
            .ok_or_else(|| Error::UnknownActor(actor.to_string()))?
            .role;
        if role == Role::Director {
            Ok(())
        } else {
            Err(Error::Forbidden(PolicyDecision {
                allow: false,
                rule_id: RuleId::R8,
                explanation: format!("only the director may do this, not a {role:?}"),
            }))
        }
    }

    pub fn group_ids(&self) -> Vec<GroupId> {
        self.state().groups().map(|g| g.id).collect()
    }
}
