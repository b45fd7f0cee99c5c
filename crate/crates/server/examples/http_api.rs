//! Drives the HTTP API in process: log in, record hours, read the dashboard.

use axum::body::Body;
use axum::http::Request;
use chrono::Duration;
use http_body_util::BodyExt;
use meshat::{seed_course, Platform};
use meshat_server::{passcode, router, Service, Sessions, SEQ_HEADER};
use serde_json::{json, Value};
use tower::ServiceExt;

async fn send(app: &axum::Router, method: &str, uri: &str, token: Option<&str>, body: Value) -> (u16, Option<String>, Value) {
    let mut req = Request::builder()
        .method(method)
        .uri(uri)
        .header("content-type", "application/json");
    if let Some(t) = token {
        req = req.header("authorization", format!("Bearer {t}"));
    }
    let resp = app
        .clone()
        .oneshot(req.body(Body::from(body.to_string())).unwrap())
        .await
        .unwrap();
    let status = resp.status().as_u16();
    let seq = resp.headers().get(SEQ_HEADER).map(|v| v.to_str().unwrap().to_string());
    let bytes = resp.into_body().collect().await.unwrap().to_bytes();
    (status, seq, serde_json::from_slice(&bytes).unwrap_or(Value::Null))
}

#[tokio::main]
async fn main() {
    let mut platform = Platform::new();
    let seeded = seed_course(&mut platform, 2, 4).unwrap();
    let service = Service::new(platform, Sessions::new("demo", Duration::hours(1)));
    let app = router(service);

    let student = seeded.leaders[0];
    let (_, _, session) = send(
        &app,
        "POST",
        "/api/session",
        None,
        json!({ "actor_id": student, "passcode": passcode("demo", student) }),
    )
    .await;
    let token = session["token"].as_str().unwrap();
    println!("logged in as {} ({})", student, session["role"]);

    let (status, seq, _) = send(
        &app,
        "POST",
        &format!("/api/students/{}/time", student.0),
        Some(token),
        json!({ "date": "2025-11-04", "hours": 3.5 }),
    )
    .await;
    println!("time entry: {status} at seq {}", seq.unwrap());

    let g = seeded.groups[0].0;
    let (_, seq, dash) = send(&app, "GET", &format!("/api/groups/{g}/dashboard?period=2025-W45"), Some(token), Value::Null).await;
    println!("dashboard at seq {}: {} h this week", seq.unwrap(), dash["dashboard"]["working_time"]["period_total"]);

    let other = seeded.leaders[1];
    let (status, _, err) = send(&app, "GET", &format!("/api/students/{}/metacog", other.0), Some(token), Value::Null).await;
    println!("another group's metacognition: {status} {}", err);
}
