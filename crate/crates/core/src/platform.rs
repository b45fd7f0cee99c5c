use std::sync::Arc;

use crate::domain::{ActivityEvent, Payload, State};
use crate::error::{Error, Result};
use crate::ids::{ActorId, Seq};
use crate::indicators::Questionnaire;
use crate::policy::{self, Action, PolicyDecision, Resource, RuleId};
use crate::time::{Clock, SystemClock};

/// Durable destination for committed events.
pub trait EventSink: Send + Sync {
    fn append(&mut self, event: &ActivityEvent) -> Result<()>;
}

/// The single append point. Every mutating operation validates its input,
/// asks the policy, then commits exactly one event per state change.
pub struct Platform {
    state: State,
    log: Vec<ActivityEvent>,
    clock: Arc<dyn Clock>,
    sink: Option<Box<dyn EventSink>>,
    questionnaire: Questionnaire,
}

impl Default for Platform {
    fn default() -> Self {
        Platform::new()
    }
}

impl std::fmt::Debug for Platform {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Platform")
            .field("last_seq", &self.state.last_seq())
            .field("durable", &self.sink.is_some())
            .finish_non_exhaustive()
    }
}

pub(crate) fn forbidden(explanation: &str) -> Error {
    Error::Forbidden(PolicyDecision {
        allow: false,
        rule_id: RuleId::R8,
        explanation: explanation.to_string(),
    })
}

impl Platform {
    pub fn new() -> Platform {
        Platform::with_clock(Arc::new(SystemClock))
    }

    pub fn with_clock(clock: Arc<dyn Clock>) -> Platform {
        Platform {
            state: State::default(),
            log: Vec::new(),
            clock,
            sink: None,
            questionnaire: Questionnaire::default(),
        }
    }

    /// Rebuilds a platform from a log, checking every event.
    pub fn from_log(events: Vec<ActivityEvent>) -> Result<Platform> {
        let state = State::replay(&events)?;
        let mut p = Platform::new();
        p.state = state;
        p.log = events;
        Ok(p)
    }

    /// Copy of the state and questionnaire without the log or the sink.
    /// Reads on it answer exactly as on `self` at this seq.
    pub fn read_copy(&self) -> Platform {
        Platform {
            state: self.state.clone(),
            log: Vec::new(),
            clock: self.clock.clone(),
            sink: None,
            questionnaire: self.questionnaire.clone(),
        }
    }

    /// Swaps the clock and returns the previous one.
    pub fn set_clock(&mut self, clock: Arc<dyn Clock>) -> Arc<dyn Clock> {
        std::mem::replace(&mut self.clock, clock)
    }

    pub fn clock(&self) -> &Arc<dyn Clock> {
        &self.clock
    }

    pub fn set_sink(&mut self, sink: Box<dyn EventSink>) {
        self.sink = Some(sink);
    }

    pub fn questionnaire(&self) -> &Questionnaire {
        &self.questionnaire
    }

    pub fn set_questionnaire(&mut self, questionnaire: Questionnaire) {
        self.questionnaire = questionnaire;
    }

    pub fn state(&self) -> &State {
        &self.state
    }

    pub fn log(&self) -> &[ActivityEvent] {
        &self.log
    }

    pub fn last_seq(&self) -> Seq {
        self.state.last_seq()
    }

    /// State as it was right after `seq`.
    pub fn state_at(&self, seq: Seq) -> Result<State> {
        let n = usize::try_from(seq).unwrap_or(usize::MAX).min(self.log.len());
        State::replay(&self.log[..n])
    }

    /// Appends one event. The state is updated first; if the sink then
    /// fails, the state is rebuilt from the log without the event.
    pub(crate) fn commit(&mut self, actor: ActorId, payload: Payload) -> Result<ActivityEvent> {
        let now = self.clock.now();
        let timestamp = match self.state.last_timestamp() {
            Some(last) if last > now => last,
            _ => now,
        };
        let event = ActivityEvent {
            seq: self.state.last_seq() + 1,
            timestamp,
            actor_id: actor,
            payload,
        };
        self.state
            .apply(&event)
            .map_err(|reason| Error::Internal(format!("rejected by the log: {reason}")))?;
        if let Some(sink) = self.sink.as_mut() {
            if let Err(e) = sink.append(&event) {
                self.state = State::replay(&self.log)?;
                return Err(e);
            }
        }
        self.log.push(event.clone());
        Ok(event)
    }

    pub fn authorize(&self, actor: ActorId, action: Action, resource: &Resource) -> Result<PolicyDecision> {
        policy::authorize(&self.state, actor, action, resource)
    }

    /// Like [`Platform::authorize`] but turns a denial into an error. Denials
    /// by the contract rule surface as `ContractLocked`.
    pub fn authorize_or_fail(&self, actor: ActorId, action: Action, resource: &Resource) -> Result<PolicyDecision> {
        let decision = self.authorize(actor, action, resource)?;
        if decision.allow {
            Ok(decision)
        } else if decision.rule_id == RuleId::R7 {
            Err(Error::ContractLocked)
        } else {
            Err(Error::Forbidden(decision))
        }
    }
}
