//! Single writer, many readers.

use std::sync::{Arc, Mutex, RwLock};

use chrono::Duration;
use meshat::{Platform, Questionnaire, Seq};

use crate::api::ApiError;
use crate::auth::Sessions;
use crate::config::Config;
use crate::ServerError;

/// Read-only copy of the platform as of `seq`.
#[derive(Debug)]
pub struct Snapshot {
    pub seq: Seq,
    pub platform: Platform,
}

#[derive(Debug)]
pub struct Service {
    writer: Mutex<Platform>,
    current: RwLock<Arc<Snapshot>>,
    pub sessions: Sessions,
}

impl Service {
    pub fn new(platform: Platform, sessions: Sessions) -> Arc<Service> {
        let current = RwLock::new(Arc::new(Snapshot {
            seq: platform.last_seq(),
            platform: platform.read_copy(),
        }));
        Arc::new(Service {
            writer: Mutex::new(platform),
            current,
            sessions,
        })
    }

    /// Opens the store named by `config`. Returns the number of bytes cut
    /// from an incomplete last record.
    pub fn open(config: &Config) -> Result<(Arc<Service>, u64), ServerError> {
        let (mut platform, torn) = Platform::open(&config.storage).map_err(ServerError::CorruptStore)?;
        if let Some(path) = &config.questionnaire {
            let text = std::fs::read_to_string(path)
                .map_err(|e| ServerError::Config(format!("{}: {e}", path.display())))?;
            let q = Questionnaire::from_json(&text).map_err(|e| ServerError::Config(e.to_string()))?;
            platform.set_questionnaire(q);
        }
        let sessions = Sessions::new(&config.secret, Duration::minutes(config.session_ttl_minutes));
        Ok((Service::new(platform, sessions), torn))
    }

    pub fn snapshot(&self) -> Arc<Snapshot> {
        self.current.read().expect("snapshot lock").clone()
    }

    /// Runs `job` on the writer. The snapshot is republished before this
    /// returns, so a caller always reads its own write.
    pub async fn write<T, F>(self: &Arc<Self>, job: F) -> Result<(T, Seq), ApiError>
    where
        T: Send + 'static,
        F: FnOnce(&mut Platform) -> meshat::Result<T> + Send + 'static,
    {
        let service = self.clone();
        tokio::task::spawn_blocking(move || service.write_now(job))
            .await
            .map_err(|e| ApiError::unavailable(e.to_string()))?
    }

    fn write_now<T>(&self, job: impl FnOnce(&mut Platform) -> meshat::Result<T>) -> Result<(T, Seq), ApiError> {
        let mut platform = self.writer.lock().map_err(|_| ApiError::unavailable("writer failed"))?;
        let before = platform.last_seq();
        let result = job(&mut platform);
        let seq = platform.last_seq();
        if seq != before {
            *self.current.write().expect("snapshot lock") = Arc::new(Snapshot {
                seq,
                platform: platform.read_copy(),
            });
        }
        Ok((result?, seq))
    }
}
