use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The four reflexive dimensions of the metacognitive tool. Closed set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Dimension {
    Cognition,
    Metacognition,
    Motivation,
    Behaviour,
}

impl Dimension {
    pub const ALL: [Dimension; 4] = [
        Dimension::Cognition,
        Dimension::Metacognition,
        Dimension::Motivation,
        Dimension::Behaviour,
    ];
}

/// One answered questionnaire item; `response` is on a 1..=5 scale.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SelfReportItem {
    pub dimension: Dimension,
    pub prompt: String,
    pub response: u8,
}

/// Prompts offered per dimension. Prompts can be replaced from a file; the
/// dimensions cannot.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Questionnaire {
    prompts: BTreeMap<Dimension, Vec<String>>,
}

impl Default for Questionnaire {
    fn default() -> Self {
        let prompts = [
            (
                Dimension::Cognition,
                &[
                    "activating prior knowledge",
                    "planning",
                    "creating sub-goals",
                    "learning strategies",
                ][..],
            ),
            (
                Dimension::Metacognition,
                &["feeling of knowing", "judgment of learning", "content evaluation"][..],
            ),
            (
                Dimension::Motivation,
                &["self-efficacy", "task value", "interest", "effort"][..],
            ),
            (
                Dimension::Behaviour,
                &[
                    "engaging in help-seeking behaviour",
                    "modifying learning conditions",
                    "handling task difficulties and demands",
                ][..],
            ),
        ];
        Questionnaire {
            prompts: prompts
                .into_iter()
                .map(|(d, ps)| (d, ps.iter().map(|p| p.to_string()).collect()))
                .collect(),
        }
    }
}

impl Questionnaire {
    /// Every dimension needs at least one non-empty prompt.
    pub fn new(prompts: BTreeMap<Dimension, Vec<String>>) -> Result<Questionnaire> {
        for d in Dimension::ALL {
            let ok = prompts
                .get(&d)
                .is_some_and(|ps| !ps.is_empty() && ps.iter().all(|p| !p.trim().is_empty()));
            if !ok {
                return Err(Error::InvalidConfig(format!("questionnaire has no prompts for {d:?}")));
            }
        }
        Ok(Questionnaire { prompts })
    }

    pub fn from_json(text: &str) -> Result<Questionnaire> {
        let prompts: BTreeMap<Dimension, Vec<String>> = serde_json::from_str(text)
            .map_err(|e| Error::InvalidConfig(format!("questionnaire: {e}")))?;
        Questionnaire::new(prompts)
    }

    pub fn prompts(&self, dimension: Dimension) -> &[String] {
        self.prompts.get(&dimension).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn items(&self) -> impl Iterator<Item = (Dimension, &str)> {
        self.prompts
            .iter()
            .flat_map(|(d, ps)| ps.iter().map(move |p| (*d, p.as_str())))
    }

    pub fn contains(&self, dimension: Dimension, prompt: &str) -> bool {
        self.prompts(dimension).iter().any(|p| p == prompt)
    }
}
