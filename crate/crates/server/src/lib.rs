//! HTTP service over a durable course log.
//!
//! A single writer appends to the log; reads are answered from the most
//! recently published snapshot and carry its seq in the `x-meshat-seq`
//! header.

pub mod api;
pub mod auth;
pub mod config;
pub mod service;

pub use api::{router, ApiError, SEQ_HEADER};
pub use auth::{passcode, ApiSession, Sessions};
pub use config::Config;
pub use service::{Service, Snapshot};

/// Failures that stop the service from starting.
#[derive(Debug, thiserror::Error)]
pub enum ServerError {
    #[error("cannot bind {addr}: {source}")]
    BindFailure {
        addr: std::net::SocketAddr,
        source: std::io::Error,
    },
    #[error("store cannot be opened: {0}")]
    CorruptStore(meshat::Error),
    #[error("configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Binds and serves until ctrl-c.
pub async fn serve(config: Config) -> Result<(), ServerError> {
    let (service, torn) = Service::open(&config)?;
    if torn > 0 {
        tracing::warn!(bytes = torn, "cut an incomplete record from the end of the store");
    }
    tracing::info!(seq = service.snapshot().seq, storage = %config.storage.display(), "store opened");
    let addr = std::net::SocketAddr::new(config.bind, config.port);
    let listener = tokio::net::TcpListener::bind(addr)
        .await
        .map_err(|source| ServerError::BindFailure { addr, source })?;
    tracing::info!(%addr, "listening");
    axum::serve(listener, router(service))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await?;
    Ok(())
}
