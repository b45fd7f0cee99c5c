use std::collections::BTreeMap;
use std::io::Write;

use serde::{Deserialize, Serialize};

use super::{decision_key, Action, DecisionKey, Policy, Relationship, Resource, ResourceClass, RuleId};
use crate::domain::{Role, State};
use crate::error::{Error, Result};
use crate::ids::ActorId;

/// One line of the exported decision table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecisionRow {
    pub relationship: Relationship,
    pub role: Role,
    pub action: Action,
    pub resource_class: ResourceClass,
    pub allow: bool,
    pub rule_id: RuleId,
}

/// Every (relationship, role, action, resource class) combination that occurs
/// in a course, with its decision.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecisionTable {
    rows: BTreeMap<(Relationship, Role, Action, ResourceClass), (bool, RuleId)>,
}

impl DecisionTable {
    /// Enumerates every actor against every resource instance of the course.
    pub fn build(state: &State) -> DecisionTable {
        Self::build_with(state, &Policy::new())
    }

    pub fn build_with(state: &State, policy: &Policy) -> DecisionTable {
        let mut rows = BTreeMap::new();
        let resources = all_resources(state);
        for actor in state.actors().map(|a| a.id) {
            for resource in &resources {
                for action in [Action::Read, Action::Write] {
                    let Ok(key) = decision_key(state, actor, action, resource) else {
                        continue;
                    };
                    let decided = policy.rule_for(key);
                    let prev = rows.insert((key.relationship, key.role, key.action, key.class), decided);
                    debug_assert!(prev.is_none() || prev == Some(decided));
                }
            }
        }
        DecisionTable { rows }
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn get(&self, relationship: Relationship, role: Role, action: Action, class: ResourceClass) -> Option<(bool, RuleId)> {
        self.rows.get(&(relationship, role, action, class)).copied()
    }

    pub fn lookup(&self, key: &DecisionKey) -> Option<(bool, RuleId)> {
        self.get(key.relationship, key.role, key.action, key.class)
    }

    pub fn rows(&self) -> impl Iterator<Item = DecisionRow> + '_ {
        self.rows
            .iter()
            .map(|(&(relationship, role, action, resource_class), &(allow, rule_id))| DecisionRow {
                relationship,
                role,
                action,
                resource_class,
                allow,
                rule_id,
            })
    }

    pub fn allowed(&self) -> impl Iterator<Item = DecisionRow> + '_ {
        self.rows().filter(|r| r.allow)
    }

    /// Writes the table as CSV with a header row.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut writer = csv::Writer::from_writer(out);
        for row in self.rows() {
            writer.serialize(row).map_err(csv_err)?;
        }
        writer.flush()?;
        Ok(())
    }

    pub fn read_csv<R: std::io::Read>(input: R) -> Result<Vec<DecisionRow>> {
        let mut reader = csv::Reader::from_reader(input);
        reader
            .deserialize()
            .collect::<std::result::Result<Vec<DecisionRow>, _>>()
            .map_err(csv_err)
    }
}

fn csv_err(e: csv::Error) -> Error {
    Error::InvalidInput(format!("decision table csv: {e}"))
}

/// Every resource instance that exists in the course.
pub fn all_resources(state: &State) -> Vec<Resource> {
    let mut out = vec![Resource::ForumDiscussion, Resource::Taxonomy];
    for g in state.groups() {
        out.extend([
            Resource::GroupDashboard(g.id),
            Resource::GroupBlog(g.id),
            Resource::GroupBlogDraft(g.id),
            Resource::Task(g.id),
            Resource::Deliverable(g.id),
            Resource::Evaluation(g.id),
        ]);
    }
    for a in state.actors() {
        if a.role.is_student() {
            out.extend([
                Resource::StudentMetacogDashboard(a.id),
                Resource::StudentBlog(a.id),
                Resource::TimeEntryStream(a.id),
            ]);
        }
        if a.role.is_tutor() {
            out.push(Resource::TutorView(a.id));
        }
        if a.id != ActorId::SYSTEM {
            out.push(Resource::LearningContract(a.id));
        }
    }
    out
}
