#![allow(dead_code)]

use std::sync::Arc;

use axum::body::Body;
use axum::http::{HeaderMap, Method, Request, StatusCode};
use axum::Router;
use chrono::Duration;
use http_body_util::BodyExt;
use meshat::{ActorId, Platform, Seq};
use meshat_server::{passcode, router, Service, Sessions, SEQ_HEADER};
use serde_json::Value;
use tower::ServiceExt;

pub const SECRET: &str = "test-secret";

pub struct App {
    pub service: Arc<Service>,
    pub router: Router,
}

#[derive(Debug)]
pub struct Reply {
    pub status: StatusCode,
    pub headers: HeaderMap,
    pub body: Value,
    pub raw: Vec<u8>,
}

impl Reply {
    pub fn seq(&self) -> Option<Seq> {
        self.headers.get(SEQ_HEADER)?.to_str().ok()?.parse().ok()
    }
}

impl App {
    pub fn new(platform: Platform) -> App {
        Self::with_ttl(platform, Duration::minutes(60))
    }

    pub fn with_ttl(platform: Platform, ttl: Duration) -> App {
        let service = Service::new(platform, Sessions::new(SECRET, ttl));
        App {
            router: router(service.clone()),
            service,
        }
    }

    pub async fn call(&self, method: Method, uri: &str, token: Option<&str>, body: Option<Value>) -> Reply {
        let mut req = Request::builder().method(method).uri(uri);
        if let Some(t) = token {
            req = req.header("authorization", format!("Bearer {t}"));
        }
        let req = match body {
            Some(v) => req
                .header("content-type", "application/json")
                .body(Body::from(serde_json::to_vec(&v).unwrap())),
            None => req.body(Body::empty()),
        }
        .unwrap();
        let resp = self.router.clone().oneshot(req).await.unwrap();
        let status = resp.status();
        let headers = resp.headers().clone();
        let raw = resp.into_body().collect().await.unwrap().to_bytes().to_vec();
        let body = serde_json::from_slice(&raw).unwrap_or(Value::Null);
        Reply {
            status,
            headers,
            body,
            raw,
        }
    }

    pub async fn get(&self, uri: &str, token: &str) -> Reply {
        self.call(Method::GET, uri, Some(token), None).await
    }

    pub async fn post(&self, uri: &str, token: &str, body: Value) -> Reply {
        self.call(Method::POST, uri, Some(token), Some(body)).await
    }

    pub async fn login(&self, actor: ActorId) -> String {
        let r = self
            .call(
                Method::POST,
                "/api/session",
                None,
                Some(serde_json::json!({ "actor_id": actor, "passcode": passcode(SECRET, actor) })),
            )
            .await;
        assert_eq!(r.status, StatusCode::CREATED, "{:?}", r.body);
        r.body["token"].as_str().unwrap().to_string()
    }
}
