use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::domain::{Payload, PostChange};
use crate::error::{Error, Result};
use crate::ids::{ActorId, GroupId, PostId};
use crate::platform::Platform;
use crate::policy::{Action, Resource};
use crate::time::Timestamp;

/// Who a blog belongs to. There is exactly one blog per student and one per group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(tag = "type", content = "id", rename_all = "snake_case")]
pub enum BlogOwner {
    Student(ActorId),
    Group(GroupId),
}

impl fmt::Display for BlogOwner {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BlogOwner::Student(a) => write!(f, "student-{}", a.0),
            BlogOwner::Group(g) => write!(f, "group-{}", g.0),
        }
    }
}

impl FromStr for BlogOwner {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidInput(format!("blog owner `{s}`, expected student-N or group-N"));
        let (kind, id) = s.split_once('-').ok_or_else(bad)?;
        let id: u32 = id.parse().map_err(|_| bad())?;
        match kind {
            "student" => Ok(BlogOwner::Student(ActorId(id))),
            "group" => Ok(BlogOwner::Group(GroupId(id))),
            _ => Err(bad()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Blog {
    pub owner: BlogOwner,
    pub post_ids: Vec<PostId>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum PostStatus {
    Draft,
    Published,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlogPost {
    pub id: PostId,
    pub blog: BlogOwner,
    pub author_id: ActorId,
    pub body: String,
    pub created_at: Timestamp,
    pub status: PostStatus,
    pub published_by: Option<ActorId>,
}

fn check_body(body: &str) -> Result<String> {
    let body = body.trim();
    if body.is_empty() {
        return Err(Error::InvalidInput("post body is empty".into()));
    }
    Ok(body.to_string())
}

impl Platform {
    /// Posts on the author's own blog; student posts are published immediately.
    pub fn write_student_post(&mut self, actor: ActorId, student: ActorId, body: &str) -> Result<BlogPost> {
        self.authorize_or_fail(actor, Action::Write, &Resource::StudentBlog(student))?;
        let body = check_body(body)?;
        let post_id = self.state().next_post_id();
        self.commit(
            actor,
            Payload::BlogPost(PostChange::StudentPost {
                post_id,
                student_id: student,
                body,
            }),
        )?;
        Ok(self.state().post(post_id).cloned().expect("post just written"))
    }

    /// A group member drafts a post for the group blog. Only the leader can publish it.
    pub fn propose_group_post(&mut self, actor: ActorId, group: GroupId, body: &str) -> Result<BlogPost> {
        self.authorize_or_fail(actor, Action::Write, &Resource::GroupBlogDraft(group))?;
        let body = check_body(body)?;
        let post_id = self.state().next_post_id();
        self.commit(
            actor,
            Payload::BlogPost(PostChange::GroupProposal {
                post_id,
                group_id: group,
                body,
            }),
        )?;
        Ok(self.state().post(post_id).cloned().expect("post just written"))
    }

    pub fn confirm_group_post(&mut self, actor: ActorId, post_id: PostId) -> Result<BlogPost> {
        let post = self
            .state()
            .post(post_id)
            .ok_or_else(|| Error::UnknownPost(post_id.to_string()))?;
        let BlogOwner::Group(group) = post.blog else {
            return Err(Error::UnknownPost(format!("{post_id} is not a group post")));
        };
        self.authorize_or_fail(actor, Action::Write, &Resource::GroupBlog(group))?;
        if post.status == PostStatus::Published {
            return Err(Error::AlreadyPublished);
        }
        self.commit(
            actor,
            Payload::BlogPost(PostChange::GroupConfirm { post_id }),
        )?;
        Ok(self.state().post(post_id).cloned().expect("post exists"))
    }

    /// Posts of a blog that `actor` may see, oldest first.
    ///
    /// Drafts on a group blog are only listed for readers allowed to see drafts.
    pub fn read_blog(&self, actor: ActorId, owner: BlogOwner) -> Result<Vec<BlogPost>> {
        let blog = self
            .state()
            .blog(owner)
            .ok_or_else(|| Error::UnknownResource(format!("blog {owner}")))?;
        let (published, drafts) = match owner {
            BlogOwner::Student(s) => (Resource::StudentBlog(s), None),
            BlogOwner::Group(g) => (Resource::GroupBlog(g), Some(Resource::GroupBlogDraft(g))),
        };
        let see_published = self.authorize(actor, Action::Read, &published)?;
        let see_drafts = match &drafts {
            Some(r) => self.authorize(actor, Action::Read, r)?.allow,
            None => false,
        };
        if !see_published.allow && !see_drafts {
            return Err(Error::Forbidden(see_published));
        }
        Ok(blog
            .post_ids
            .iter()
            .filter_map(|id| self.state().post(*id))
            .filter(|p| match p.status {
                PostStatus::Published => see_published.allow,
                PostStatus::Draft => see_drafts,
            })
            .cloned()
            .collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn owner_text_form() {
        assert_eq!(BlogOwner::Student(ActorId(5)).to_string(), "student-5");
        assert_eq!("group-3".parse::<BlogOwner>().unwrap(), BlogOwner::Group(GroupId(3)));
        assert!("team-3".parse::<BlogOwner>().is_err());
        assert!("group-x".parse::<BlogOwner>().is_err());
    }
}
