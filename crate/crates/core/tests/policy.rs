mod common;

use common::Fixture;
use meshat::policy::{all_resources, decision_key, DecisionKey, Policy, Relationship};
use meshat::{
    simulate_course, Action, CourseStatus, DecisionTable, Error, Resource, ResourceClass, Role, RuleId,
    SimulationConfig,
};
use proptest::prelude::*;

const STATUSES: [CourseStatus; 3] = [CourseStatus::Setup, CourseStatus::Running, CourseStatus::Closed];

fn every_key() -> impl Iterator<Item = DecisionKey> {
    Relationship::ALL.into_iter().flat_map(|relationship| {
        Role::ALL.into_iter().flat_map(move |role| {
            [Action::Read, Action::Write].into_iter().flat_map(move |action| {
                ResourceClass::ALL.into_iter().flat_map(move |class| {
                    STATUSES.into_iter().map(move |course_status| DecisionKey {
                        relationship,
                        role,
                        action,
                        class,
                        course_status,
                    })
                })
            })
        })
    })
}

#[test]
fn leader_never_sees_a_member_metacog_dashboard() {
    let f = Fixture::new(1, 4);
    let g = f.group(0);
    let m = f.member(0);
    for action in [Action::Read, Action::Write] {
        let d = f.p.authorize(g.leader_id, action, &Resource::StudentMetacogDashboard(m)).unwrap();
        assert!(!d.allow);
        assert_eq!(d.rule_id, RuleId::R5);
    }
    assert!(matches!(f.p.metacognitive_profile(g.leader_id, m), Err(Error::Forbidden(d)) if d.rule_id == RuleId::R5));
    // the leader still sees their own
    let own = f.p.authorize(g.leader_id, Action::Read, &Resource::StudentMetacogDashboard(g.leader_id)).unwrap();
    assert!(own.allow);
}

#[test]
fn students_write_their_own_entries() {
    let f = Fixture::new(1, 3);
    let s = f.member(0);
    for r in [Resource::StudentBlog(s), Resource::StudentMetacogDashboard(s), Resource::TimeEntryStream(s)] {
        let d = f.p.authorize(s, Action::Write, &r).unwrap();
        assert!(d.allow, "{r:?}");
        assert_eq!(d.rule_id, RuleId::R2);
    }
    let other = f.group(0).leader_id;
    let d = f.p.authorize(other, Action::Write, &Resource::StudentBlog(s)).unwrap();
    assert!(!d.allow);
}

#[test]
fn decisions_carry_an_explanation() {
    let f = Fixture::new(1, 3);
    let d = f.p.authorize(f.member(0), Action::Read, &Resource::ForumDiscussion).unwrap();
    assert!(!d.allow);
    assert_eq!(d.rule_id, RuleId::R6);
    assert!(d.explanation.starts_with("deny"));
    assert!(d.explanation.contains(RuleId::R6.summary()));
}

#[test]
fn unknown_actor_or_resource_is_an_error() {
    let f = Fixture::new(1, 3);
    let s = f.member(0);
    assert!(matches!(
        f.p.authorize(meshat::ActorId(9_999), Action::Read, &Resource::ForumDiscussion),
        Err(Error::UnknownActor(_))
    ));
    assert!(matches!(
        f.p.authorize(s, Action::Read, &Resource::GroupDashboard(meshat::GroupId(77))),
        Err(Error::UnknownResource(_))
    ));
    // a tutor is not a student
    let t = f.group(0).technical_tutor_id;
    assert!(matches!(
        f.p.authorize(s, Action::Read, &Resource::StudentBlog(t)),
        Err(Error::UnknownResource(_))
    ));
}

#[test]
fn table_agrees_with_every_request() {
    let (p, _) = simulate_course(&SimulationConfig {
        seed: 3,
        groups: 3,
        members_per_group: 4,
        weeks: 4,
        ..Default::default()
    })
    .unwrap();
    let state = p.state();
    let table = DecisionTable::build(state);
    let mut seen = std::collections::BTreeSet::new();
    for actor in state.actors() {
        for r in all_resources(state) {
            for action in [Action::Read, Action::Write] {
                let key = decision_key(state, actor.id, action, &r).unwrap();
                let d = p.authorize(actor.id, action, &r).unwrap();
                assert_eq!(table.lookup(&key), Some((d.allow, d.rule_id)), "{key:?}");
                seen.insert((key.relationship, key.role, key.action, key.class));
            }
        }
    }
    // one row per combination that occurs, and no more
    assert_eq!(table.len(), seen.len());
    let rows: Vec<_> = table.rows().collect();
    for w in rows.windows(2) {
        assert!(
            (w[0].relationship, w[0].role, w[0].action, w[0].resource_class)
                < (w[1].relationship, w[1].role, w[1].action, w[1].resource_class)
        );
    }
}

#[test]
fn table_is_deterministic_and_round_trips_through_csv() {
    let f = Fixture::new(2, 3);
    let a = DecisionTable::build(f.p.state());
    let b = DecisionTable::build(&meshat::State::replay(f.p.log()).unwrap());
    assert_eq!(a, b);
    let mut x = Vec::new();
    let mut y = Vec::new();
    a.write_csv(&mut x).unwrap();
    b.write_csv(&mut y).unwrap();
    assert_eq!(x, y);
    let text = String::from_utf8(x.clone()).unwrap();
    assert!(text.starts_with("relationship,role,action,resource_class,allow,rule_id\n"));
    let back = DecisionTable::read_csv(x.as_slice()).unwrap();
    assert_eq!(back, a.rows().collect::<Vec<_>>());
    assert!(DecisionTable::read_csv("relationship,role\nOwner,Nobody\n".as_bytes()).is_err());
}

#[test]
fn tutor_of_another_group_is_denied_everything() {
    let f = Fixture::new(3, 3);
    let table = DecisionTable::build(f.p.state());
    let rows: Vec<_> = table
        .rows()
        .filter(|r| r.relationship == Relationship::OtherGroup && r.role.is_tutor())
        .collect();
    assert!(!rows.is_empty());
    for r in rows {
        assert!(!r.allow, "{r:?}");
        assert_eq!(r.rule_id, RuleId::R8);
    }
}

#[test]
fn group_scoped_rows_for_other_groups_are_denied() {
    let f = Fixture::new(3, 3);
    let table = DecisionTable::build(f.p.state());
    for r in table.rows().filter(|r| r.relationship == Relationship::OtherGroup) {
        assert!(!r.allow, "{r:?}");
    }
}

#[test]
fn every_allow_rule_is_reachable() {
    let full = Policy::new();
    for rule in [RuleId::R1, RuleId::R2, RuleId::R3, RuleId::R4, RuleId::R6, RuleId::R7] {
        let used = every_key().any(|k| {
            let d = full.decide(k);
            d.allow && d.rule_id == rule
        });
        assert!(used, "{rule:?} never allows anything");
        let without = Policy::without(rule);
        let lost = every_key().any(|k| full.decide(k).allow && !without.decide(k).allow);
        assert!(lost, "disabling {rule:?} changes nothing");
    }
}

#[test]
fn tutors_course_wide_access() {
    let f = Fixture::new(1, 3);
    let g = f.group(0);
    for actor in [g.technical_tutor_id, g.management_tutor_id, f.seeded.director, f.seeded.managers[0]] {
        for r in [Resource::ForumDiscussion, Resource::Taxonomy] {
            for action in [Action::Read, Action::Write] {
                assert!(f.p.authorize(actor, action, &r).unwrap().allow);
            }
        }
    }
    let teacher = f.seeded.teacher;
    assert!(f.p.authorize(teacher, Action::Read, &Resource::ForumDiscussion).unwrap().allow);
    assert!(!f.p.authorize(teacher, Action::Write, &Resource::ForumDiscussion).unwrap().allow);
}

fn arb_key() -> impl Strategy<Value = DecisionKey> {
    (
        prop::sample::select(Relationship::ALL.to_vec()),
        prop::sample::select(Role::ALL.to_vec()),
        prop::sample::select(vec![Action::Read, Action::Write]),
        prop::sample::select(ResourceClass::ALL.to_vec()),
        prop::sample::select(STATUSES.to_vec()),
    )
        .prop_map(|(relationship, role, action, class, course_status)| DecisionKey {
            relationship,
            role,
            action,
            class,
            course_status,
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    /// Switching off a granting rule can only take permissions away.
    #[test]
    fn disabling_a_grant_only_removes_permissions(key in arb_key(), rule in prop::sample::select(vec![RuleId::R1, RuleId::R2, RuleId::R3, RuleId::R4, RuleId::R6])) {
        let full = Policy::new().decide(key);
        let less = Policy::without(rule).decide(key);
        prop_assert!(!less.allow || full.allow, "{:?} without {:?}", key, rule);
    }

    /// A leader is denied a member's metacognitive dashboard whatever else holds.
    #[test]
    fn r5_dominates(role in prop::sample::select(Role::ALL.to_vec()), action in prop::sample::select(vec![Action::Read, Action::Write]), status in prop::sample::select(STATUSES.to_vec())) {
        let key = DecisionKey {
            relationship: Relationship::Leader,
            role,
            action,
            class: ResourceClass::StudentMetacogDashboard,
            course_status: status,
        };
        let d = Policy::new().decide(key);
        prop_assert!(!d.allow);
        prop_assert_eq!(d.rule_id, RuleId::R5);
    }

    /// Decisions do not depend on anything outside the key.
    #[test]
    fn decide_is_a_function_of_the_key(key in arb_key()) {
        prop_assert_eq!(Policy::new().decide(key), Policy::new().decide(key));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    /// The two tutors of a group get identical decisions on every resource.
    #[test]
    fn tutors_of_a_group_are_symmetric(seed in 0u64..1_000, weeks in 1u32..6, close in any::<bool>()) {
        let (p, _) = simulate_course(&SimulationConfig { seed, groups: 2, members_per_group: 3, weeks, close_at_end: close, ..Default::default() }).unwrap();
        let state = p.state();
        let resources = all_resources(state);
        for g in state.groups() {
            for r in &resources {
                if matches!(r, Resource::TutorView(_) | Resource::LearningContract(_)) {
                    continue;
                }
                for action in [Action::Read, Action::Write] {
                    let a = p.authorize(g.technical_tutor_id, action, r).unwrap();
                    let b = p.authorize(g.management_tutor_id, action, r).unwrap();
                    prop_assert_eq!((a.allow, a.rule_id), (b.allow, b.rule_id), "{:?} {:?}", action, r);
                }
            }
        }
    }
}
