//! Experience sharing: blogs, the tutors' tagged forum and learning contracts.

mod blog;
mod contract;
mod forum;

pub use blog::{Blog, BlogOwner, BlogPost, PostStatus};
pub use contract::{ContractAnswers, ContractRevision, ContractStatus, LearningContract};
pub use forum::{
    Discussion, Forum, ForumExport, Message, SearchHit, SubjectStatus, Taxonomy, TaxonomyRoot,
    TaxonomySubject, TUTOR_ROLE_SUBJECTS,
};
