use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{Dimension, SelfReportItem};
use crate::domain::{Payload, State};
use crate::error::{Error, Result};
use crate::ids::ActorId;
use crate::platform::Platform;
use crate::policy::{Action, Resource};
use crate::time::Period;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeriodScores {
    pub period: Period,
    /// Mean response per dimension; a dimension is absent when no item was answered.
    pub scores: BTreeMap<Dimension, f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetacognitiveProfile {
    pub student_id: ActorId,
    pub periods: Vec<PeriodScores>,
    /// Most recent score per dimension.
    pub latest: BTreeMap<Dimension, f64>,
    /// `latest - score of the week before`, only when both weeks have a score.
    pub trends: BTreeMap<Dimension, f64>,
}

pub(crate) fn dimension_means(items: &[SelfReportItem]) -> BTreeMap<Dimension, f64> {
    let mut acc: BTreeMap<Dimension, (u32, u32)> = BTreeMap::new();
    for item in items {
        let e = acc.entry(item.dimension).or_default();
        e.0 += u32::from(item.response);
        e.1 += 1;
    }
    acc.into_iter()
        .map(|(d, (sum, n))| (d, f64::from(sum) / f64::from(n)))
        .collect()
}

pub fn compute_metacognitive_profile(state: &State, student: ActorId) -> Result<MetacognitiveProfile> {
    let actor = state
        .actor(student)
        .filter(|a| a.role.is_student())
        .ok_or_else(|| Error::UnknownActor(student.to_string()))?;
    let periods: Vec<PeriodScores> = state
        .self_reports(actor.id)
        .map(|(period, items)| PeriodScores {
            period,
            scores: dimension_means(items),
        })
        .filter(|p| !p.scores.is_empty())
        .collect();

    let by_period: BTreeMap<Period, &BTreeMap<Dimension, f64>> =
        periods.iter().map(|p| (p.period, &p.scores)).collect();
    let mut latest = BTreeMap::new();
    let mut trends = BTreeMap::new();
    for d in Dimension::ALL {
        let Some((period, score)) = by_period
            .iter()
            .rev()
            .find_map(|(p, s)| s.get(&d).map(|v| (*p, *v)))
        else {
            continue;
        };
        latest.insert(d, score);
        if let Some(prev) = by_period.get(&period.previous()).and_then(|s| s.get(&d)) {
            trends.insert(d, score - prev);
        }
    }

    Ok(MetacognitiveProfile {
        student_id: student,
        periods,
        latest,
        trends,
    })
}

impl Platform {
    /// Stores a student's questionnaire answers for a week, replacing any
    /// earlier answers for that week.
    pub fn record_self_report(
        &mut self,
        actor: ActorId,
        student: ActorId,
        period: Period,
        items: Vec<SelfReportItem>,
    ) -> Result<()> {
        self.authorize_or_fail(actor, Action::Write, &Resource::StudentMetacogDashboard(student))?;
        if items.is_empty() {
            return Err(Error::InvalidInput("self report has no items".into()));
        }
        for item in &items {
            if !(1..=5).contains(&item.response) {
                return Err(Error::OutOfRange(format!("response {} not in 1..=5", item.response)));
            }
            if !self.questionnaire().contains(item.dimension, &item.prompt) {
                return Err(Error::InvalidInput(format!(
                    "`{}` is not a {:?} prompt of the questionnaire",
                    item.prompt, item.dimension
                )));
            }
        }
        self.require_running()?;
        self.commit(
            actor,
            Payload::SelfReport {
                student_id: student,
                period,
                items,
            },
        )?;
        Ok(())
    }

    pub fn metacognitive_profile(&self, actor: ActorId, student: ActorId) -> Result<MetacognitiveProfile> {
        self.authorize_or_fail(actor, Action::Read, &Resource::StudentMetacogDashboard(student))?;
        compute_metacognitive_profile(self.state(), student)
    }
}
