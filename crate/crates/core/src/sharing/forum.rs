//! The tutors' community forum: discussions tagged with subjects of an
//! evolving three-rooted taxonomy, and tag-based search over them.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::domain::{ForumChange, Payload, TaxonomyChange};
use crate::error::{Error, Result};
use crate::ids::{ActorId, DiscussionId, SubjectId};
use crate::platform::Platform;
use crate::policy::{Action, Resource};
use crate::time::Timestamp;

/// The ten tutor roles seeded under [`TaxonomyRoot::RolesAndTasks`].
pub const TUTOR_ROLE_SUBJECTS: [&str; 10] = [
    "Social catalyst",
    "Intellectual catalyst",
    "Individualiser",
    "Autonomiser",
    "Relational coach",
    "Educationalist",
    "Content expert",
    "Evaluator",
    "Qualimetror",
    "Other",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum TaxonomyRoot {
    RolesAndTasks,
    ProjectCalendar,
    GroupProgress,
}

impl TaxonomyRoot {
    pub const ALL: [TaxonomyRoot; 3] = [
        TaxonomyRoot::RolesAndTasks,
        TaxonomyRoot::ProjectCalendar,
        TaxonomyRoot::GroupProgress,
    ];

    pub fn label(self) -> &'static str {
        match self {
            TaxonomyRoot::RolesAndTasks => "RolesAndTasks",
            TaxonomyRoot::ProjectCalendar => "ProjectCalendar",
            TaxonomyRoot::GroupProgress => "GroupProgress",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SubjectStatus {
    Seed,
    Proposed,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TaxonomySubject {
    pub id: SubjectId,
    pub label: String,
    pub parent_id: Option<SubjectId>,
    pub root: TaxonomyRoot,
    pub status: SubjectStatus,
}

fn same_label(a: &str, b: &str) -> bool {
    a.trim().eq_ignore_ascii_case(b.trim())
}

fn clean_label(label: &str) -> Result<String> {
    let label = label.trim();
    if label.is_empty() || label.contains('/') {
        return Err(Error::InvalidInput(format!(
            "subject label `{label}` must be non-empty and contain no `/`"
        )));
    }
    Ok(label.to_string())
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Taxonomy {
    subjects: BTreeMap<SubjectId, TaxonomySubject>,
}

impl Taxonomy {
    pub fn get(&self, id: SubjectId) -> Option<&TaxonomySubject> {
        self.subjects.get(&id)
    }

    pub fn subjects(&self) -> impl Iterator<Item = &TaxonomySubject> {
        self.subjects.values()
    }

    pub fn len(&self) -> usize {
        self.subjects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subjects.is_empty()
    }

    pub fn roots(&self) -> impl Iterator<Item = &TaxonomySubject> {
        self.subjects.values().filter(|s| s.parent_id.is_none())
    }

    pub fn root_of(&self, root: TaxonomyRoot) -> Option<&TaxonomySubject> {
        self.roots().find(|s| s.root == root)
    }

    pub fn children(&self, id: SubjectId) -> impl Iterator<Item = &TaxonomySubject> {
        self.subjects
            .values()
            .filter(move |s| s.parent_id == Some(id))
    }

    pub fn child_labeled(&self, parent: SubjectId, label: &str) -> Option<&TaxonomySubject> {
        self.children(parent).find(|s| same_label(&s.label, label))
    }

    /// The subject and everything below it.
    pub fn subtree(&self, id: SubjectId) -> BTreeSet<SubjectId> {
        let mut children: BTreeMap<SubjectId, Vec<SubjectId>> = BTreeMap::new();
        for s in self.subjects.values() {
            if let Some(p) = s.parent_id {
                children.entry(p).or_default().push(s.id);
            }
        }
        let mut out = BTreeSet::new();
        let mut stack = vec![id];
        while let Some(next) = stack.pop() {
            if out.insert(next) {
                stack.extend(children.get(&next).into_iter().flatten().copied());
            }
        }
        out
    }

    /// Slash-separated labels from the root, e.g. `RolesAndTasks/Evaluator`.
    pub fn path(&self, id: SubjectId) -> Option<String> {
        let mut parts = Vec::new();
        let mut cursor = Some(id);
        while let Some(c) = cursor {
            let s = self.subjects.get(&c)?;
            parts.push(s.label.as_str());
            cursor = s.parent_id;
            if parts.len() > self.subjects.len() {
                return None;
            }
        }
        parts.reverse();
        Some(parts.join("/"))
    }

    pub fn find_path(&self, path: &str) -> Option<SubjectId> {
        let mut parts = path.split('/');
        let first = parts.next()?;
        let mut current = self.roots().find(|s| same_label(&s.label, first))?.id;
        for part in parts {
            current = self.child_labeled(current, part)?.id;
        }
        Some(current)
    }

    /// Three roots, one per [`TaxonomyRoot`], no cycles, every subject in its
    /// root's tree, sibling labels unique.
    pub fn check_integrity(&self) -> std::result::Result<(), String> {
        let roots: Vec<_> = self.roots().collect();
        if roots.len() != 3 {
            return Err(format!("expected 3 roots, found {}", roots.len()));
        }
        let root_kinds: BTreeSet<_> = roots.iter().map(|r| r.root).collect();
        if root_kinds.len() != 3 {
            return Err("roots do not cover the three subject areas".into());
        }
        for s in self.subjects.values() {
            // walk up; a walk longer than the subject count means a cycle
            let mut steps = 0;
            let mut cursor = s;
            while let Some(p) = cursor.parent_id {
                let parent = self
                    .subjects
                    .get(&p)
                    .ok_or_else(|| format!("{} has dangling parent {p}", s.id))?;
                if parent.root != s.root {
                    return Err(format!("{} sits in the wrong tree", s.id));
                }
                cursor = parent;
                steps += 1;
                if steps > self.subjects.len() {
                    return Err(format!("cycle through {}", s.id));
                }
            }
            if cursor.root != s.root {
                return Err(format!("{} reaches a foreign root", s.id));
            }
        }
        let mut seen: BTreeMap<(Option<SubjectId>, String), SubjectId> = BTreeMap::new();
        for s in self.subjects.values() {
            let key = (s.parent_id, s.label.trim().to_ascii_lowercase());
            if let Some(other) = seen.insert(key, s.id) {
                return Err(format!("{} and {other} share a label under one parent", s.id));
            }
        }
        Ok(())
    }

    pub(crate) fn validate_seed(&self, parent: Option<SubjectId>, root: TaxonomyRoot, label: &str) -> Result<String> {
        let label = clean_label(label)?;
        match parent {
            None => {
                if self.root_of(root).is_some() {
                    return Err(Error::InvalidTaxonomy(format!("root {} exists", root.label())));
                }
            }
            Some(p) => {
                let parent = self.get(p).ok_or_else(|| Error::UnknownParent(p.to_string()))?;
                if parent.root != root {
                    return Err(Error::InvalidTaxonomy("seed child outside its root".into()));
                }
                if self.child_labeled(p, &label).is_some() {
                    return Err(Error::DuplicateLabel(label));
                }
            }
        }
        Ok(label)
    }

    pub(crate) fn validate_proposal(&self, parent: SubjectId, label: &str) -> Result<String> {
        let label = clean_label(label)?;
        if self.get(parent).is_none() {
            return Err(Error::UnknownParent(parent.to_string()));
        }
        if self.child_labeled(parent, &label).is_some() {
            return Err(Error::DuplicateLabel(label));
        }
        Ok(label)
    }

    pub(crate) fn validate_rename(&self, id: SubjectId, label: &str) -> Result<String> {
        let label = clean_label(label)?;
        let subject = self.get(id).ok_or_else(|| Error::UnknownTag(id.to_string()))?;
        let Some(parent) = subject.parent_id else {
            return Err(Error::InvalidTaxonomy("roots cannot be renamed".into()));
        };
        if self
            .child_labeled(parent, &label)
            .is_some_and(|other| other.id != id)
        {
            return Err(Error::DuplicateLabel(label));
        }
        Ok(label)
    }

    pub(crate) fn validate_merge(&self, from: SubjectId, into: SubjectId) -> Result<()> {
        let source = self.get(from).ok_or_else(|| Error::UnknownTag(from.to_string()))?;
        let target = self.get(into).ok_or_else(|| Error::UnknownTag(into.to_string()))?;
        if from == into {
            return Err(Error::InvalidTaxonomy("cannot merge a subject into itself".into()));
        }
        if source.parent_id.is_none() {
            return Err(Error::InvalidTaxonomy("roots cannot be merged".into()));
        }
        if source.root != target.root {
            return Err(Error::InvalidTaxonomy("merge across subject areas".into()));
        }
        if self.subtree(from).contains(&into) {
            return Err(Error::InvalidTaxonomy("cannot merge into a descendant".into()));
        }
        Ok(())
    }

    pub(crate) fn insert(&mut self, subject: TaxonomySubject) {
        self.subjects.insert(subject.id, subject);
    }

    pub(crate) fn rename(&mut self, id: SubjectId, label: String) {
        if let Some(s) = self.subjects.get_mut(&id) {
            s.label = label;
        }
    }

    /// Moves `from`'s children under `into`, recursively folding children whose
    /// labels collide, then removes `from`. Returns every removed subject with
    /// the subject that absorbed it.
    pub(crate) fn merge(&mut self, from: SubjectId, into: SubjectId) -> BTreeMap<SubjectId, SubjectId> {
        let mut absorbed = BTreeMap::new();
        self.merge_rec(from, into, &mut absorbed);
        absorbed
    }

    fn merge_rec(&mut self, from: SubjectId, into: SubjectId, absorbed: &mut BTreeMap<SubjectId, SubjectId>) {
        // detach first so `from` never collides with its own children
        if let Some(s) = self.subjects.get_mut(&from) {
            s.parent_id = None;
        }
        let moving: Vec<SubjectId> = self.children(from).map(|s| s.id).collect();
        for child in moving {
            let label = self.subjects[&child].label.clone();
            match self.child_labeled(into, &label).map(|s| s.id) {
                Some(existing) => self.merge_rec(child, existing, absorbed),
                None => {
                    if let Some(s) = self.subjects.get_mut(&child) {
                        s.parent_id = Some(into);
                    }
                }
            }
        }
        self.subjects.remove(&from);
        absorbed.insert(from, into);
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Message {
    pub author_id: ActorId,
    pub body: String,
    pub timestamp: Timestamp,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Discussion {
    pub id: DiscussionId,
    pub title: String,
    pub opener_id: ActorId,
    pub tags: BTreeSet<SubjectId>,
    pub messages: Vec<Message>,
}

impl Discussion {
    pub fn last_activity(&self) -> Option<Timestamp> {
        self.messages.iter().map(|m| m.timestamp).max()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchHit {
    pub discussion_id: DiscussionId,
    /// Number of query tags the discussion matches.
    pub score: usize,
    pub last_activity: Option<Timestamp>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Forum {
    taxonomy: Taxonomy,
    discussions: BTreeMap<DiscussionId, Discussion>,
}

/// Portable form of the forum: the taxonomy plus every discussion.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ForumExport {
    pub taxonomy: Vec<TaxonomySubject>,
    pub discussions: Vec<Discussion>,
}

impl Forum {
    pub fn taxonomy(&self) -> &Taxonomy {
        &self.taxonomy
    }

    pub(crate) fn taxonomy_mut(&mut self) -> &mut Taxonomy {
        &mut self.taxonomy
    }

    pub fn discussion(&self, id: DiscussionId) -> Option<&Discussion> {
        self.discussions.get(&id)
    }

    pub fn discussions(&self) -> impl Iterator<Item = &Discussion> {
        self.discussions.values()
    }

    pub(crate) fn insert_discussion(&mut self, discussion: Discussion) {
        self.discussions.insert(discussion.id, discussion);
    }

    pub(crate) fn discussion_mut(&mut self, id: DiscussionId) -> Option<&mut Discussion> {
        self.discussions.get_mut(&id)
    }

    /// Merges two subjects and re-tags discussions that used absorbed subjects.
    pub(crate) fn merge_subjects(&mut self, from: SubjectId, into: SubjectId) {
        let absorbed = self.taxonomy.merge(from, into);
        let resolve = |mut id: SubjectId| {
            while let Some(next) = absorbed.get(&id) {
                id = *next;
            }
            id
        };
        for d in self.discussions.values_mut() {
            if d.tags.iter().any(|t| absorbed.contains_key(t)) {
                d.tags = d.tags.iter().map(|t| resolve(*t)).collect();
            }
        }
    }

    /// Discussions matching at least one query tag, best first.
    ///
    /// A discussion matches a query tag when it is tagged with that subject
    /// or any subject below it. Hits are ordered by the number of matched
    /// query tags, then by most recent message, then by id.
    pub fn search(&self, tags: &BTreeSet<SubjectId>) -> Result<Vec<SearchHit>> {
        let mut subtrees = Vec::with_capacity(tags.len());
        for tag in tags {
            if self.taxonomy.get(*tag).is_none() {
                return Err(Error::UnknownTag(tag.to_string()));
            }
            subtrees.push(self.taxonomy.subtree(*tag));
        }
        let mut hits: Vec<SearchHit> = self
            .discussions
            .values()
            .filter_map(|d| {
                let score = subtrees
                    .iter()
                    .filter(|sub| d.tags.iter().any(|t| sub.contains(t)))
                    .count();
                (score > 0).then(|| SearchHit {
                    discussion_id: d.id,
                    score,
                    last_activity: d.last_activity(),
                })
            })
            .collect();
        hits.sort_by_key(|h| (Reverse(h.score), Reverse(h.last_activity), h.discussion_id));
        Ok(hits)
    }

    pub fn export(&self) -> ForumExport {
        ForumExport {
            taxonomy: self.taxonomy.subjects.values().cloned().collect(),
            discussions: self.discussions.values().cloned().collect(),
        }
    }

    /// Rebuilds a forum from its export, checking taxonomy integrity and tag references.
    pub fn from_export(export: ForumExport) -> Result<Forum> {
        let mut taxonomy = Taxonomy::default();
        for s in export.taxonomy {
            if taxonomy.subjects.insert(s.id, s.clone()).is_some() {
                return Err(Error::InvalidInput(format!("duplicate subject {}", s.id)));
            }
        }
        taxonomy.check_integrity().map_err(Error::InvalidTaxonomy)?;
        let mut discussions = BTreeMap::new();
        for d in export.discussions {
            if d.tags.is_empty() {
                return Err(Error::EmptyTags);
            }
            if let Some(t) = d.tags.iter().find(|t| taxonomy.get(**t).is_none()) {
                return Err(Error::UnknownTag(t.to_string()));
            }
            if discussions.insert(d.id, d.clone()).is_some() {
                return Err(Error::InvalidInput(format!("duplicate discussion {}", d.id)));
            }
        }
        Ok(Forum {
            taxonomy,
            discussions,
        })
    }
}

fn clean_text(what: &str, text: &str) -> Result<String> {
    let text = text.trim();
    if text.is_empty() {
        return Err(Error::InvalidInput(format!("{what} is empty")));
    }
    Ok(text.to_string())
}

impl Platform {
    pub fn create_discussion(
        &mut self,
        actor: ActorId,
        title: &str,
        body: &str,
        tags: &BTreeSet<SubjectId>,
    ) -> Result<Discussion> {
        self.authorize_or_fail(actor, Action::Write, &Resource::ForumDiscussion)?;
        let title = clean_text("title", title)?;
        let body = clean_text("message body", body)?;
        if tags.is_empty() {
            return Err(Error::EmptyTags);
        }
        let taxonomy = self.state().forum().taxonomy();
        if let Some(t) = tags.iter().find(|t| taxonomy.get(**t).is_none()) {
            return Err(Error::UnknownTag(t.to_string()));
        }
        let discussion_id = self.state().next_discussion_id();
        self.commit(
            actor,
            Payload::ForumMessage(ForumChange::Opened {
                discussion_id,
                title,
                body,
                tags: tags.clone(),
            }),
        )?;
        Ok(self.state().forum().discussion(discussion_id).cloned().expect("just opened"))
    }

    pub fn reply(&mut self, actor: ActorId, discussion: DiscussionId, body: &str) -> Result<Discussion> {
        self.authorize_or_fail(actor, Action::Write, &Resource::ForumDiscussion)?;
        let body = clean_text("message body", body)?;
        if self.state().forum().discussion(discussion).is_none() {
            return Err(Error::UnknownDiscussion(discussion.to_string()));
        }
        self.commit(
            actor,
            Payload::ForumMessage(ForumChange::Reply {
                discussion_id: discussion,
                body,
            }),
        )?;
        Ok(self.state().forum().discussion(discussion).cloned().expect("exists"))
    }

    /// Adds a subject under `parent`. It can be used as a tag immediately.
    pub fn propose_subject(&mut self, actor: ActorId, parent: SubjectId, label: &str) -> Result<TaxonomySubject> {
        self.authorize_or_fail(actor, Action::Write, &Resource::Taxonomy)?;
        let label = self.state().forum().taxonomy().validate_proposal(parent, label)?;
        let subject_id = self.state().next_subject_id();
        self.commit(
            actor,
            Payload::TaxonomyUpdate(TaxonomyChange::Proposed {
                subject_id,
                parent_id: parent,
                label,
            }),
        )?;
        Ok(self.state().forum().taxonomy().get(subject_id).cloned().expect("just proposed"))
    }

    /// Director curation: rename a subject.
    pub fn rename_subject(&mut self, actor: ActorId, subject: SubjectId, label: &str) -> Result<TaxonomySubject> {
        self.authorize_or_fail(actor, Action::Write, &Resource::Taxonomy)?;
        self.require_director(actor)?;
        let label = self.state().forum().taxonomy().validate_rename(subject, label)?;
        self.commit(
            actor,
            Payload::TaxonomyUpdate(TaxonomyChange::Renamed {
                subject_id: subject,
                label,
            }),
        )?;
        Ok(self.state().forum().taxonomy().get(subject).cloned().expect("exists"))
    }

    /// Director curation: fold `from` into `into`; discussions are re-tagged.
    pub fn merge_subjects(&mut self, actor: ActorId, from: SubjectId, into: SubjectId) -> Result<TaxonomySubject> {
        self.authorize_or_fail(actor, Action::Write, &Resource::Taxonomy)?;
        self.require_director(actor)?;
        self.state().forum().taxonomy().validate_merge(from, into)?;
        self.commit(actor, Payload::TaxonomyUpdate(TaxonomyChange::Merged { from, into }))?;
        Ok(self.state().forum().taxonomy().get(into).cloned().expect("exists"))
    }

    pub fn read_forum(&self, actor: ActorId) -> Result<&Forum> {
        self.authorize_or_fail(actor, Action::Read, &Resource::ForumDiscussion)?;
        Ok(self.state().forum())
    }

    pub fn read_taxonomy(&self, actor: ActorId) -> Result<&Taxonomy> {
        self.authorize_or_fail(actor, Action::Read, &Resource::Taxonomy)?;
        Ok(self.state().forum().taxonomy())
    }

    pub fn search_discussions(&self, actor: ActorId, tags: &BTreeSet<SubjectId>) -> Result<Vec<SearchHit>> {
        self.read_forum(actor)?.search(tags)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn subject(id: u32, parent: Option<u32>, root: TaxonomyRoot, label: &str) -> TaxonomySubject {
        TaxonomySubject {
            id: SubjectId(id),
            label: label.into(),
            parent_id: parent.map(SubjectId),
            root,
            status: SubjectStatus::Seed,
        }
    }

    fn small_taxonomy() -> Taxonomy {
        let mut t = Taxonomy::default();
        t.insert(subject(1, None, TaxonomyRoot::RolesAndTasks, "RolesAndTasks"));
        t.insert(subject(2, None, TaxonomyRoot::ProjectCalendar, "ProjectCalendar"));
        t.insert(subject(3, None, TaxonomyRoot::GroupProgress, "GroupProgress"));
        t.insert(subject(4, Some(1), TaxonomyRoot::RolesAndTasks, "Evaluator"));
        t.insert(subject(5, Some(4), TaxonomyRoot::RolesAndTasks, "Peer grading"));
        t.insert(subject(6, Some(1), TaxonomyRoot::RolesAndTasks, "Content expert"));
        t.insert(subject(7, Some(6), TaxonomyRoot::RolesAndTasks, "Peer grading"));
        t.insert(subject(8, Some(6), TaxonomyRoot::RolesAndTasks, "Gantt"));
        t
    }

    #[test]
    fn paths_resolve_both_ways() {
        let t = small_taxonomy();
        assert_eq!(t.path(SubjectId(5)).unwrap(), "RolesAndTasks/Evaluator/Peer grading");
        assert_eq!(t.find_path("RolesAndTasks/Evaluator"), Some(SubjectId(4)));
        assert_eq!(t.find_path("rolesandtasks/evaluator"), Some(SubjectId(4)));
        assert_eq!(t.find_path("RolesAndTasks/Nope"), None);
        t.check_integrity().unwrap();
    }

    #[test]
    fn duplicate_sibling_label_rejected() {
        let t = small_taxonomy();
        assert!(matches!(
            t.validate_proposal(SubjectId(1), " evaluator "),
            Err(Error::DuplicateLabel(_))
        ));
        assert!(t.validate_proposal(SubjectId(4), "Evaluator").is_ok());
        assert!(matches!(t.validate_proposal(SubjectId(99), "x"), Err(Error::UnknownParent(_))));
    }

    #[test]
    fn merge_folds_colliding_children() {
        let mut forum = Forum {
            taxonomy: small_taxonomy(),
            discussions: BTreeMap::new(),
        };
        forum.insert_discussion(Discussion {
            id: DiscussionId(1),
            title: "t".into(),
            opener_id: ActorId(1),
            tags: [SubjectId(7), SubjectId(8)].into(),
            messages: vec![],
        });
        forum.taxonomy.validate_merge(SubjectId(6), SubjectId(4)).unwrap();
        forum.merge_subjects(SubjectId(6), SubjectId(4));
        let t = forum.taxonomy();
        t.check_integrity().unwrap();
        assert!(t.get(SubjectId(6)).is_none());
        assert!(t.get(SubjectId(7)).is_none(), "folded into the existing Peer grading");
        assert_eq!(t.get(SubjectId(8)).unwrap().parent_id, Some(SubjectId(4)));
        let tags = &forum.discussion(DiscussionId(1)).unwrap().tags;
        assert_eq!(tags, &BTreeSet::from([SubjectId(5), SubjectId(8)]));
    }

    #[test]
    fn merge_into_descendant_or_root_rejected() {
        let t = small_taxonomy();
        assert!(t.validate_merge(SubjectId(4), SubjectId(5)).is_err());
        assert!(t.validate_merge(SubjectId(1), SubjectId(2)).is_err());
        assert!(t.validate_merge(SubjectId(4), SubjectId(4)).is_err());
        assert!(t.validate_merge(SubjectId(5), SubjectId(4)).is_ok());
    }

    #[test]
    fn search_counts_descendant_matches() {
        let mut forum = Forum {
            taxonomy: small_taxonomy(),
            discussions: BTreeMap::new(),
        };
        assert!(forum.search(&[SubjectId(4)].into()).unwrap().is_empty());
        let at = |h| chrono::TimeZone::with_ymd_and_hms(&chrono::Utc, 2025, 11, 3, h, 0, 0).unwrap();
        for (id, tags, hour) in [(1, vec![4], 9), (2, vec![5], 10), (3, vec![8], 11), (4, vec![5, 8], 8)] {
            forum.insert_discussion(Discussion {
                id: DiscussionId(id),
                title: format!("d{id}"),
                opener_id: ActorId(1),
                tags: tags.into_iter().map(SubjectId).collect(),
                messages: vec![Message {
                    author_id: ActorId(1),
                    body: "x".into(),
                    timestamp: at(hour),
                }],
            });
        }
        let hits = forum.search(&[SubjectId(4), SubjectId(6)].into()).unwrap();
        let order: Vec<u32> = hits.iter().map(|h| h.discussion_id.0).collect();
        assert_eq!(order, vec![4, 3, 2, 1]);
        assert_eq!(hits[0].score, 2);
        assert!(matches!(forum.search(&[SubjectId(42)].into()), Err(Error::UnknownTag(_))));
    }
}
