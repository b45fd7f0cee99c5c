//! Service configuration: a TOML file, then `MESHAT_*` environment overrides.

use std::net::{IpAddr, Ipv4Addr};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::ServerError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub bind: IpAddr,
    pub port: u16,
    /// Append-only log file.
    pub storage: PathBuf,
    /// JSON file with the metacognitive prompts; built-in prompts when absent.
    pub questionnaire: Option<PathBuf>,
    /// Secret from which account passcodes are derived.
    pub secret: String,
    pub session_ttl_minutes: i64,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            bind: IpAddr::V4(Ipv4Addr::LOCALHOST),
            port: 8080,
            storage: PathBuf::from("meshat.jsonl"),
            questionnaire: None,
            secret: "change-me".into(),
            session_ttl_minutes: 8 * 60,
        }
    }
}

pub const DEFAULT_FILE: &str = "meshat.toml";

impl Config {
    pub fn from_toml(text: &str) -> Result<Config, ServerError> {
        toml::from_str(text).map_err(|e| ServerError::Config(e.to_string()))
    }

    /// Reads `path`, or `meshat.toml` if it exists, then applies the environment.
    pub fn load(path: Option<&Path>) -> Result<Config, ServerError> {
        let mut config = match path {
            Some(p) => Self::read(p)?,
            None if Path::new(DEFAULT_FILE).exists() => Self::read(Path::new(DEFAULT_FILE))?,
            None => Config::default(),
        };
        config.apply_env(|k| std::env::var(k).ok())?;
        Ok(config)
    }

    fn read(path: &Path) -> Result<Config, ServerError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ServerError::Config(format!("{}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    /// `MESHAT_PORT`, `MESHAT_BIND`, `MESHAT_STORAGE`, `MESHAT_QUESTIONNAIRE`, `MESHAT_SECRET`.
    pub fn apply_env(&mut self, var: impl Fn(&str) -> Option<String>) -> Result<(), ServerError> {
        if let Some(v) = var("MESHAT_PORT") {
            self.port = v
                .parse()
                .map_err(|_| ServerError::Config(format!("MESHAT_PORT `{v}` is not a port")))?;
        }
        if let Some(v) = var("MESHAT_BIND") {
            self.bind = v
                .parse()
                .map_err(|_| ServerError::Config(format!("MESHAT_BIND `{v}` is not an address")))?;
        }
        if let Some(v) = var("MESHAT_STORAGE") {
            self.storage = v.into();
        }
        if let Some(v) = var("MESHAT_QUESTIONNAIRE") {
            self.questionnaire = (!v.is_empty()).then(|| v.into());
        }
        if let Some(v) = var("MESHAT_SECRET") {
            self.secret = v;
        }
        if self.session_ttl_minutes <= 0 {
            return Err(ServerError::Config("session_ttl_minutes must be positive".into()));
        }
        Ok(())
    }
}
