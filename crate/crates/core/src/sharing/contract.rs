use serde::{Deserialize, Serialize};

use crate::domain::{ContractChange, CourseStatus, EventKind, Payload};
use crate::error::{Error, Result};
use crate::ids::{ActorId, Seq};
use crate::platform::Platform;
use crate::policy::{Action, Resource};
use crate::time::Timestamp;

/// Answers to the six learning-contract questions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContractAnswers {
    pub what_do_i_want_to_learn: String,
    pub how_will_i_learn_this: String,
    pub who_can_give_support: String,
    pub when_can_i_start: String,
    pub how_will_i_know_i_have_learned: String,
    pub how_will_others_realize_i_have_learned: String,
}

impl ContractAnswers {
    pub const QUESTIONS: [&'static str; 6] = [
        "What do I want to learn?",
        "How will I learn this?",
        "Who can give support?",
        "When can I start?",
        "How will I know that I have learned?",
        "How will others realize that I have learned?",
    ];

    pub fn from_array(answers: [String; 6]) -> ContractAnswers {
        let [a, b, c, d, e, f] = answers;
        ContractAnswers {
            what_do_i_want_to_learn: a,
            how_will_i_learn_this: b,
            who_can_give_support: c,
            when_can_i_start: d,
            how_will_i_know_i_have_learned: e,
            how_will_others_realize_i_have_learned: f,
        }
    }

    pub fn as_array(&self) -> [&str; 6] {
        [
            &self.what_do_i_want_to_learn,
            &self.how_will_i_learn_this,
            &self.who_can_give_support,
            &self.when_can_i_start,
            &self.how_will_i_know_i_have_learned,
            &self.how_will_others_realize_i_have_learned,
        ]
    }

    fn validate(&self) -> Result<()> {
        for (q, a) in Self::QUESTIONS.iter().zip(self.as_array()) {
            if a.trim().is_empty() {
                return Err(Error::InvalidInput(format!("no answer to \"{q}\"")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ContractStatus {
    Active,
    Revised,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContractRevision {
    pub answers: ContractAnswers,
    /// Blog or forum events the revision draws on.
    pub linked_seqs: Vec<Seq>,
    pub revised_at: Timestamp,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LearningContract {
    pub owner_id: ActorId,
    pub answers: ContractAnswers,
    pub status: ContractStatus,
    pub created_at: Timestamp,
    pub revision: Option<ContractRevision>,
}

impl Platform {
    /// Records an actor's contract. Allowed once, before the course closes.
    pub fn init_learning_contract(
        &mut self,
        actor: ActorId,
        owner: ActorId,
        answers: ContractAnswers,
    ) -> Result<LearningContract> {
        self.authorize_or_fail(actor, Action::Write, &Resource::LearningContract(owner))?;
        if self.state().contract(owner).is_some() {
            return Err(Error::AlreadyExists);
        }
        answers.validate()?;
        self.commit(
            actor,
            Payload::ContractUpdate(ContractChange::Initialized {
                owner_id: owner,
                answers,
            }),
        )?;
        Ok(self.state().contract(owner).cloned().expect("just created"))
    }

    /// Revises a contract after the course has closed, linking the blog and
    /// forum events that motivated the revision.
    pub fn revise_learning_contract(
        &mut self,
        actor: ActorId,
        owner: ActorId,
        answers: ContractAnswers,
        linked_seqs: Vec<Seq>,
    ) -> Result<LearningContract> {
        if self.state().contract(owner).is_none() {
            return Err(Error::UnknownContract(owner.to_string()));
        }
        self.authorize_or_fail(actor, Action::Write, &Resource::LearningContract(owner))?;
        if self.state().course_status() != Some(CourseStatus::Closed) {
            return Err(Error::ContractLocked);
        }
        answers.validate()?;
        for seq in &linked_seqs {
            match self.state().event_kind(*seq) {
                Some(EventKind::BlogPost | EventKind::ForumMessage) => {}
                _ => return Err(Error::UnknownEventSeq(*seq)),
            }
        }
        self.commit(
            actor,
            Payload::ContractUpdate(ContractChange::Revised {
                owner_id: owner,
                answers,
                linked_seqs,
            }),
        )?;
        Ok(self.state().contract(owner).cloned().expect("exists"))
    }

    pub fn read_contract(&self, actor: ActorId, owner: ActorId) -> Result<LearningContract> {
        self.authorize_or_fail(actor, Action::Read, &Resource::LearningContract(owner))?;
        self.state()
            .contract(owner)
            .cloned()
            .ok_or_else(|| Error::UnknownContract(owner.to_string()))
    }
}
