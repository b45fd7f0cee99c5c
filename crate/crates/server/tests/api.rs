mod common;

use axum::http::{Method, StatusCode};
use chrono::Duration;
use common::App;
use meshat::{seed_course, simulate_course, Platform, SimulationConfig};
use serde_json::json;

fn small() -> Platform {
    simulate_course(&SimulationConfig {
        seed: 5,
        groups: 2,
        members_per_group: 3,
        weeks: 2,
        ..Default::default()
    })
    .unwrap()
    .0
}

#[tokio::test]
async fn health_needs_no_session() {
    let app = App::new(small());
    let seq = app.service.snapshot().seq;
    let r = app.call(Method::GET, "/api/health", None, None).await;
    assert_eq!(r.status, StatusCode::OK);
    assert_eq!(r.body, json!({ "status": "ok", "seq": seq }));
    assert_eq!(r.seq(), Some(seq));
}

#[tokio::test]
async fn sessions_gate_every_other_endpoint() {
    let app = App::new(small());
    let r = app.call(Method::GET, "/api/course", None, None).await;
    assert_eq!(r.status, StatusCode::UNAUTHORIZED);
    assert_eq!(r.body["code"], "Unauthenticated");
    let r = app.get("/api/course", "not-a-token").await;
    assert_eq!(r.status, StatusCode::UNAUTHORIZED);

    let bad = app
        .call(
            Method::POST,
            "/api/session",
            None,
            Some(json!({ "actor_id": 1, "passcode": "0000000000000000" })),
        )
        .await;
    assert_eq!(bad.status, StatusCode::UNAUTHORIZED);
    let unknown = app
        .call(
            Method::POST,
            "/api/session",
            None,
            Some(json!({ "actor_id": 999, "passcode": meshat_server::passcode(common::SECRET, meshat::ActorId(999)) })),
        )
        .await;
    assert_eq!(unknown.status, StatusCode::UNAUTHORIZED);

    let token = app.login(meshat::ActorId(1)).await;
    let r = app.get("/api/course", &token).await;
    assert_eq!(r.status, StatusCode::OK);
    assert_eq!(r.body["actors"].as_array().unwrap().len(), 1 + 1 + 2 + 4 + 6);
    assert_eq!(r.body["groups"].as_array().unwrap().len(), 2);
}

#[tokio::test]
async fn expired_sessions_are_refused() {
    let app = App::with_ttl(small(), Duration::seconds(-1));
    let r = app
        .call(
            Method::POST,
            "/api/session",
            None,
            Some(json!({ "actor_id": 1, "passcode": meshat_server::passcode(common::SECRET, meshat::ActorId(1)) })),
        )
        .await;
    let token = r.body["token"].as_str().unwrap();
    let r = app.get("/api/course", token).await;
    assert_eq!(r.status, StatusCode::UNAUTHORIZED);
}

#[tokio::test]
async fn error_bodies_have_a_stable_shape() {
    let mut p = Platform::new();
    let s = seed_course(&mut p, 1, 3).unwrap();
    let app = App::new(p);
    let leader = app.login(s.leaders[0]).await;
    let member = s.students.iter().copied().find(|m| !s.leaders.contains(m)).unwrap();

    let r = app.get(&format!("/api/students/{}/metacog", member.0), &leader).await;
    assert_eq!(r.status, StatusCode::FORBIDDEN);
    assert_eq!(r.body["code"], "Forbidden");
    assert_eq!(r.body["rule_id"], "R5");
    assert!(r.body["message"].as_str().unwrap().contains("R5"));

    let r = app.get("/api/groups/77/dashboard", &leader).await;
    assert_eq!(r.status, StatusCode::NOT_FOUND);
    assert!(r.body.get("rule_id").is_none());

    let r = app.get("/api/groups/abc/dashboard", &leader).await;
    assert_eq!(r.status, StatusCode::BAD_REQUEST);
    let r = app.post(&format!("/api/students/{}/time", s.leaders[0].0), &leader, json!({ "date": "nope" })).await;
    assert_eq!(r.status, StatusCode::BAD_REQUEST);
    assert_eq!(r.body["code"], "BadRequest");

    let r = app
        .post(
            &format!("/api/students/{}/time", s.leaders[0].0),
            &leader,
            json!({ "date": "2025-11-03", "hours": 40 }),
        )
        .await;
    assert_eq!(r.status, StatusCode::UNPROCESSABLE_ENTITY, "{:?}", r.body);

    let r = app.get("/api/blogs/somebody/posts", &leader).await;
    assert_eq!(r.status, StatusCode::BAD_REQUEST);
    let r = app.get("/api/forum/search?tags=x,y", &app.login(s.director).await).await;
    assert_eq!(r.status, StatusCode::BAD_REQUEST);
}

#[tokio::test]
async fn writes_are_read_back_at_their_seq() {
    let mut p = Platform::new();
    let s = seed_course(&mut p, 1, 3).unwrap();
    let app = App::new(p);
    let student = s.leaders[0];
    let token = app.login(student).await;
    let before = app.service.snapshot().seq;
    let r = app
        .post(
            &format!("/api/students/{}/time", student.0),
            &token,
            json!({ "date": "2025-11-03", "hours": 2.5 }),
        )
        .await;
    assert_eq!(r.status, StatusCode::CREATED, "{:?}", r.body);
    assert_eq!(r.seq(), Some(before + 1));
    assert_eq!(r.body["seq"], before + 1);

    let g = s.groups[0].0;
    let r = app.get(&format!("/api/groups/{g}/dashboard?period=2025-W45"), &token).await;
    assert_eq!(r.status, StatusCode::OK, "{:?}", r.body);
    assert_eq!(r.seq(), Some(before + 1));
    assert_eq!(r.body["seq"], before + 1);
    assert_eq!(r.body["period"], "2025-W45");
    let expected = meshat::indicators::DashboardSnapshot::compute(
        app.service.snapshot().platform.state(),
        s.groups[0],
        "2025-W45".parse().unwrap(),
    )
    .unwrap();
    assert_eq!(r.body, serde_json::to_value(&expected).unwrap());
    assert_ne!(expected.dashboard.working_time.period_total, Default::default());
}

#[tokio::test]
async fn decision_table_endpoint_matches_the_library() {
    let p = small();
    let table = meshat::DecisionTable::build(p.state());
    let mut csv = Vec::new();
    table.write_csv(&mut csv).unwrap();
    let app = App::new(p);
    let token = app.login(meshat::ActorId(1)).await;

    let r = app.get("/api/policy/decision-table?format=csv", &token).await;
    assert_eq!(r.status, StatusCode::OK);
    assert_eq!(r.headers["content-type"], "text/csv");
    assert_eq!(r.raw, csv);

    let r = app.get("/api/policy/decision-table", &token).await;
    let rows: Vec<meshat::policy::DecisionRow> = serde_json::from_value(r.body).unwrap();
    assert_eq!(rows, table.rows().collect::<Vec<_>>());
    assert_eq!(rows, meshat::DecisionTable::read_csv(csv.as_slice()).unwrap());

    let r = app.get("/api/policy/decision-table?format=xml", &token).await;
    assert_eq!(r.status, StatusCode::BAD_REQUEST);
}
