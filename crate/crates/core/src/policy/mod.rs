//! Who may read or write what.
//!
//! Every decision is a pure function of the actor's role, the actor's
//! relationship to the resource, the action, the resource class and the
//! course status. Rules are checked in a fixed order and the first rule that
//! applies decides; [`RuleId::R8`] denies everything no other rule covers.
//!
//! | rule | effect |
//! |------|--------|
//! | R1 | owners access their own data; group members read their group's shared interfaces and work on its tasks, deliverables and draft posts |
//! | R2 | students write their own blog and individual dashboard entries |
//! | R3 | group dashboard and group blog publication are written by the project leader only |
//! | R4 | tutors read every interface of their groups and those groups' students, and write tasks, deliverable receipt and evaluations; coordinators read group dashboards |
//! | R5 | a project leader never sees a member's metacognitive dashboard |
//! | R6 | the forum and its taxonomy belong to the tutor side (tutors, managers, director; the teacher reads) |
//! | R7 | learning contracts are readable by all and frozen until the course is closed |
//! | R8 | default deny |

mod table;

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::domain::{CourseStatus, Role, State};
use crate::error::{Error, Result};
use crate::ids::{ActorId, GroupId};

pub use table::{all_resources, DecisionRow, DecisionTable};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Action {
    Read,
    Write,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ResourceClass {
    GroupDashboard,
    StudentMetacogDashboard,
    StudentBlog,
    GroupBlog,
    GroupBlogDraft,
    TutorView,
    ForumDiscussion,
    Taxonomy,
    LearningContract,
    Task,
    Deliverable,
    TimeEntryStream,
    Evaluation,
}

impl ResourceClass {
    pub const ALL: [ResourceClass; 13] = [
        ResourceClass::GroupDashboard,
        ResourceClass::StudentMetacogDashboard,
        ResourceClass::StudentBlog,
        ResourceClass::GroupBlog,
        ResourceClass::GroupBlogDraft,
        ResourceClass::TutorView,
        ResourceClass::ForumDiscussion,
        ResourceClass::Taxonomy,
        ResourceClass::LearningContract,
        ResourceClass::Task,
        ResourceClass::Deliverable,
        ResourceClass::TimeEntryStream,
        ResourceClass::Evaluation,
    ];
}

/// A concrete resource instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(tag = "class", content = "owner")]
pub enum Resource {
    GroupDashboard(GroupId),
    StudentMetacogDashboard(ActorId),
    StudentBlog(ActorId),
    GroupBlog(GroupId),
    GroupBlogDraft(GroupId),
    TutorView(ActorId),
    ForumDiscussion,
    Taxonomy,
    LearningContract(ActorId),
    Task(GroupId),
    Deliverable(GroupId),
    /// A student's time and frame-of-mind entries.
    TimeEntryStream(ActorId),
    /// A group's evaluation: the group grade and individual adjustments.
    Evaluation(GroupId),
}

impl Resource {
    pub fn class(&self) -> ResourceClass {
        match self {
            Resource::GroupDashboard(_) => ResourceClass::GroupDashboard,
            Resource::StudentMetacogDashboard(_) => ResourceClass::StudentMetacogDashboard,
            Resource::StudentBlog(_) => ResourceClass::StudentBlog,
            Resource::GroupBlog(_) => ResourceClass::GroupBlog,
            Resource::GroupBlogDraft(_) => ResourceClass::GroupBlogDraft,
            Resource::TutorView(_) => ResourceClass::TutorView,
            Resource::ForumDiscussion => ResourceClass::ForumDiscussion,
            Resource::Taxonomy => ResourceClass::Taxonomy,
            Resource::LearningContract(_) => ResourceClass::LearningContract,
            Resource::Task(_) => ResourceClass::Task,
            Resource::Deliverable(_) => ResourceClass::Deliverable,
            Resource::TimeEntryStream(_) => ResourceClass::TimeEntryStream,
            Resource::Evaluation(_) => ResourceClass::Evaluation,
        }
    }
}

/// How an actor stands with respect to a resource.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Relationship {
    /// The actor owns the resource.
    Owner,
    /// The actor owns a learning contract they have not written yet.
    OwnerUnsigned,
    /// Leader of the group the resource belongs to.
    Leader,
    /// Non-leader member of that group.
    Member,
    /// One of that group's two tutors.
    Tutor,
    /// The actor belongs to (or tutors) a different group.
    OtherGroup,
    /// No group relation at all.
    Unrelated,
    /// Course-wide resources (forum, taxonomy).
    CourseWide,
}

impl Relationship {
    pub const ALL: [Relationship; 8] = [
        Relationship::Owner,
        Relationship::OwnerUnsigned,
        Relationship::Leader,
        Relationship::Member,
        Relationship::Tutor,
        Relationship::OtherGroup,
        Relationship::Unrelated,
        Relationship::CourseWide,
    ];
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum RuleId {
    R1,
    R2,
    R3,
    R4,
    R5,
    R6,
    R7,
    R8,
}

impl RuleId {
    pub const ALL: [RuleId; 8] = [
        RuleId::R1,
        RuleId::R2,
        RuleId::R3,
        RuleId::R4,
        RuleId::R5,
        RuleId::R6,
        RuleId::R7,
        RuleId::R8,
    ];

    pub fn summary(self) -> &'static str {
        match self {
            RuleId::R1 => "owner and group-internal access",
            RuleId::R2 => "students write their own blog and individual dashboard",
            RuleId::R3 => "group dashboard and blog publication are written by the project leader",
            RuleId::R4 => "tutors access their groups' and students' interfaces",
            RuleId::R5 => "project leaders have no access to members' individual dashboards",
            RuleId::R6 => "the forum is restricted to tutor-side roles",
            RuleId::R7 => "learning contracts are public and frozen until the course closes",
            RuleId::R8 => "default deny",
        }
    }
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolicyDecision {
    pub allow: bool,
    pub rule_id: RuleId,
    pub explanation: String,
}

/// Everything a decision depends on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct DecisionKey {
    pub relationship: Relationship,
    pub role: Role,
    pub action: Action,
    pub class: ResourceClass,
    pub course_status: CourseStatus,
}

/// The rule set, optionally with some rules switched off (used to check that
/// no allow rule is masked by another).
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Policy {
    disabled: BTreeSet<RuleId>,
}

fn is_group_scoped(class: ResourceClass) -> bool {
    use ResourceClass::*;
    matches!(
        class,
        GroupDashboard
            | GroupBlog
            | GroupBlogDraft
            | Task
            | Deliverable
            | Evaluation
            | StudentMetacogDashboard
            | StudentBlog
            | TimeEntryStream
    )
}

impl Policy {
    pub fn new() -> Policy {
        Policy::default()
    }

    pub fn without(rule: RuleId) -> Policy {
        Policy {
            disabled: BTreeSet::from([rule]),
        }
    }

    fn on(&self, rule: RuleId) -> bool {
        !self.disabled.contains(&rule)
    }

    /// The decision for a fully described request.
    pub fn decide(&self, key: DecisionKey) -> PolicyDecision {
        let (allow, rule_id) = self.rule_for(key);
        PolicyDecision {
            allow,
            rule_id,
            explanation: format!(
                "{} {:?} {:?} as {:?} ({:?}): {}",
                if allow { "allow" } else { "deny" },
                key.action,
                key.class,
                key.role,
                key.relationship,
                rule_id.summary()
            ),
        }
    }

    pub(crate) fn rule_for(&self, key: DecisionKey) -> (bool, RuleId) {
        use Action::*;
        use Relationship::*;
        use ResourceClass::*;

        let DecisionKey {
            relationship: rel,
            role,
            action,
            class,
            course_status,
        } = key;
        let tutor_side = role.is_tutor() || role.is_manager() || role == Role::Director;

        if self.on(RuleId::R5) && class == StudentMetacogDashboard && rel == Leader {
            return (false, RuleId::R5);
        }

        if self.on(RuleId::R7) && class == LearningContract {
            match (action, rel) {
                (Read, _) => return (true, RuleId::R7),
                (Write, Owner) => return (course_status == CourseStatus::Closed, RuleId::R7),
                (Write, OwnerUnsigned) if course_status == CourseStatus::Closed => {
                    return (false, RuleId::R7)
                }
                (Write, OwnerUnsigned) => {}
                (Write, _) if course_status != CourseStatus::Closed => return (false, RuleId::R7),
                _ => {}
            }
        }

        if self.on(RuleId::R6) && matches!(class, ForumDiscussion | Taxonomy) {
            let allow = match action {
                Read => tutor_side || role == Role::Teacher,
                Write => tutor_side,
            };
            return (allow, RuleId::R6);
        }

        if self.on(RuleId::R2)
            && rel == Owner
            && role.is_student()
            && action == Write
            && matches!(class, StudentBlog | StudentMetacogDashboard | TimeEntryStream)
        {
            return (true, RuleId::R2);
        }

        if self.on(RuleId::R3) && action == Write && matches!(class, GroupDashboard | GroupBlog) {
            match rel {
                Leader => return (true, RuleId::R3),
                Member => return (false, RuleId::R3),
                _ => {}
            }
        }

        if self.on(RuleId::R1) {
            let allow = match (rel, action) {
                (Owner, Read) => matches!(
                    class,
                    StudentMetacogDashboard | StudentBlog | TimeEntryStream | TutorView
                ),
                (Owner, Write) => class == TutorView,
                (OwnerUnsigned, Write) => class == LearningContract,
                (Leader | Member, Read) => matches!(
                    class,
                    GroupDashboard
                        | GroupBlog
                        | GroupBlogDraft
                        | Task
                        | Deliverable
                        | Evaluation
                        | StudentBlog
                        | TimeEntryStream
                ),
                (Leader | Member, Write) => matches!(class, GroupBlogDraft | Task | Deliverable),
                _ => false,
            };
            if allow {
                return (true, RuleId::R1);
            }
        }

        if self.on(RuleId::R4) {
            let allow = match (rel, action) {
                (Tutor, Read) => is_group_scoped(class),
                (Tutor, Write) => matches!(class, Task | Deliverable | Evaluation),
                (Unrelated, Read) => {
                    class == GroupDashboard && (role.is_manager() || role == Role::Director)
                }
                _ => false,
            };
            if allow {
                return (true, RuleId::R4);
            }
        }

        (false, RuleId::R8)
    }
}

/// Relationship of `actor` to `resource` in the given state.
pub fn relationship(state: &State, actor: ActorId, resource: &Resource) -> Result<Relationship> {
    let who = state
        .actor(actor)
        .ok_or_else(|| Error::UnknownActor(actor.to_string()))?;
    let unknown = || Error::UnknownResource(format!("{resource:?}"));

    let to_group = |group: GroupId| -> Result<Relationship> {
        let g = state.group(group).ok_or_else(unknown)?;
        Ok(if g.leader_id == actor {
            Relationship::Leader
        } else if g.is_member(actor) {
            Relationship::Member
        } else if g.is_tutor(actor) {
            Relationship::Tutor
        } else if who.group_id.is_some() {
            Relationship::OtherGroup
        } else {
            Relationship::Unrelated
        })
    };
    let to_student = |student: ActorId| -> Result<Relationship> {
        let s = state.actor(student).ok_or_else(unknown)?;
        if !s.role.is_student() {
            return Err(unknown());
        }
        if student == actor {
            return Ok(Relationship::Owner);
        }
        match s.group_id {
            Some(g) => to_group(g),
            None if who.group_id.is_some() => Ok(Relationship::OtherGroup),
            None => Ok(Relationship::Unrelated),
        }
    };

    match *resource {
        Resource::ForumDiscussion | Resource::Taxonomy => Ok(Relationship::CourseWide),
        Resource::GroupDashboard(g)
        | Resource::GroupBlog(g)
        | Resource::GroupBlogDraft(g)
        | Resource::Task(g)
        | Resource::Deliverable(g)
        | Resource::Evaluation(g) => to_group(g),
        Resource::StudentMetacogDashboard(s)
        | Resource::StudentBlog(s)
        | Resource::TimeEntryStream(s) => to_student(s),
        Resource::TutorView(t) => {
            let owner = state.actor(t).ok_or_else(unknown)?;
            if !owner.role.is_tutor() {
                return Err(unknown());
            }
            Ok(if t == actor {
                Relationship::Owner
            } else {
                Relationship::Unrelated
            })
        }
        Resource::LearningContract(o) => {
            if o == ActorId::SYSTEM || state.actor(o).is_none() {
                return Err(unknown());
            }
            Ok(match (o == actor, state.contract(o).is_some()) {
                (true, true) => Relationship::Owner,
                (true, false) => Relationship::OwnerUnsigned,
                (false, _) => Relationship::Unrelated,
            })
        }
    }
}

/// Decision key for a request, resolved against the state.
pub fn decision_key(state: &State, actor: ActorId, action: Action, resource: &Resource) -> Result<DecisionKey> {
    let rel = relationship(state, actor, resource)?;
    let role = state.actor(actor).expect("checked by relationship").role;
    Ok(DecisionKey {
        relationship: rel,
        role,
        action,
        class: resource.class(),
        course_status: state.course_status().unwrap_or(CourseStatus::Setup),
    })
}

/// Total decision function over existing actors and resources.
pub fn authorize(state: &State, actor: ActorId, action: Action, resource: &Resource) -> Result<PolicyDecision> {
    Ok(Policy::new().decide(decision_key(state, actor, action, resource)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn key(rel: Relationship, role: Role, action: Action, class: ResourceClass) -> DecisionKey {
        DecisionKey {
            relationship: rel,
            role,
            action,
            class,
            course_status: CourseStatus::Running,
        }
    }

    #[test]
    fn leader_denied_member_metacog_even_for_write() {
        let p = Policy::new();
        for action in [Action::Read, Action::Write] {
            let d = p.decide(key(
                Relationship::Leader,
                Role::ProjectLeader,
                action,
                ResourceClass::StudentMetacogDashboard,
            ));
            assert!(!d.allow);
            assert_eq!(d.rule_id, RuleId::R5);
        }
    }

    #[test]
    fn student_writes_own_metacog_under_r2() {
        let d = Policy::new().decide(key(
            Relationship::Owner,
            Role::Student,
            Action::Write,
            ResourceClass::StudentMetacogDashboard,
        ));
        assert!(d.allow);
        assert_eq!(d.rule_id, RuleId::R2);
    }

    #[test]
    fn contract_write_follows_course_status() {
        let p = Policy::new();
        let mut k = key(Relationship::Owner, Role::Student, Action::Write, ResourceClass::LearningContract);
        for status in [CourseStatus::Setup, CourseStatus::Running] {
            k.course_status = status;
            assert_eq!(p.decide(k).rule_id, RuleId::R7);
            assert!(!p.decide(k).allow);
        }
        k.course_status = CourseStatus::Closed;
        assert!(p.decide(k).allow);

        k.relationship = Relationship::OwnerUnsigned;
        assert!(!p.decide(k).allow);
        k.course_status = CourseStatus::Running;
        let d = p.decide(k);
        assert!(d.allow);
        assert_eq!(d.rule_id, RuleId::R1);
    }

    #[test]
    fn disabling_a_rule_falls_through() {
        let k = key(Relationship::Leader, Role::ProjectLeader, Action::Read, ResourceClass::StudentMetacogDashboard);
        assert_eq!(Policy::without(RuleId::R5).decide(k).rule_id, RuleId::R8);
    }
}
