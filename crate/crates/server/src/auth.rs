//! Pre-provisioned accounts and bearer-token sessions.
//!
//! Every actor of the course has an account. Its passcode is derived from
//! the service secret, so nothing but the secret needs to be stored.

use std::collections::HashMap;
use std::sync::Mutex;

use chrono::{Duration, Utc};
use meshat::{ActorId, Timestamp};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub fn passcode(secret: &str, actor: ActorId) -> String {
    let mut h = Sha256::new();
    h.update(secret.as_bytes());
    h.update(actor.0.to_string().as_bytes());
    let mut code = hex::encode(h.finalize());
    code.truncate(16);
    code
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ApiSession {
    pub token: String,
    pub actor_id: ActorId,
    pub expires_at: Timestamp,
}

#[derive(Debug)]
pub struct Sessions {
    secret: String,
    ttl: Duration,
    live: Mutex<HashMap<String, ApiSession>>,
}

impl Sessions {
    pub fn new(secret: &str, ttl: Duration) -> Sessions {
        Sessions {
            secret: secret.to_string(),
            ttl,
            live: Mutex::new(HashMap::new()),
        }
    }

    pub fn check_passcode(&self, actor: ActorId, code: &str) -> bool {
        let expected = passcode(&self.secret, actor);
        expected.len() == code.len()
            && expected
                .bytes()
                .zip(code.bytes())
                .fold(0u8, |acc, (a, b)| acc | (a ^ b))
                == 0
    }

    pub fn open(&self, actor: ActorId) -> ApiSession {
        let session = ApiSession {
            token: uuid::Uuid::new_v4().simple().to_string(),
            actor_id: actor,
            expires_at: Utc::now() + self.ttl,
        };
        let mut live = self.live.lock().expect("sessions lock");
        let now = Utc::now();
        live.retain(|_, s| s.expires_at > now);
        live.insert(session.token.clone(), session.clone());
        session
    }

    /// The actor behind a token, unless it is unknown or expired.
    pub fn resolve(&self, token: &str) -> Option<ActorId> {
        let mut live = self.live.lock().expect("sessions lock");
        match live.get(token) {
            Some(s) if s.expires_at > Utc::now() => Some(s.actor_id),
            Some(_) => {
                live.remove(token);
                None
            }
            None => None,
        }
    }
}
