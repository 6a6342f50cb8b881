use std::time::Duration;

use axum::body::Body;
use axum::http::{Request, StatusCode};
use domgame_core::strategy::TraceBuilder;
use domgame_core::Player;
use domgame_service::{router, AppState, EngineConfig, Session};
use http_body_util::BodyExt;
use serde_json::{json, Value};
use tower::ServiceExt;

async fn call(app: &AppState, method: &str, uri: &str, body: Option<Value>) -> (StatusCode, Value) {
    let req = Request::builder().method(method).uri(uri).header("content-type", "application/json");
    let req = match body {
        Some(b) => req.body(Body::from(b.to_string())).unwrap(),
        None => req.body(Body::empty()).unwrap(),
    };
    let resp = router(app.clone()).oneshot(req).await.unwrap();
    let status = resp.status();
    let bytes = resp.into_body().collect().await.unwrap().to_bytes();
    (status, serde_json::from_slice(&bytes).unwrap_or(Value::Null))
}

async fn create(app: &AppState, body: Value) -> (String, Value) {
    let (status, v) = call(app, "POST", "/games", Some(body)).await;
    assert_eq!(status, StatusCode::OK, "{v}");
    (v["id"].as_str().unwrap().to_string(), v["view"].clone())
}

const P5: &str = "5\n0 1\n1 2\n2 3\n3 4\n";

#[tokio::test]
async fn engine_opens_p3_at_the_center() {
    let app = AppState::default();
    let (_, view) = create(&app, json!({"edges": "3\n0 1\n1 2\n", "human": "staller", "start": "dominator"})).await;
    assert_eq!(view["over"], true);
    assert_eq!(view["turns"], 1);
    assert_eq!(view["records"][0]["vertex"], 1);
    assert_eq!(view["records"][0]["gain"], 9);
    assert_eq!(view["legal_moves"].as_array().unwrap().len(), 0);
    assert!(view["vertices"].as_array().unwrap().iter().all(|v| v["color"] == "Red"));
    assert_eq!(view["value"], 0);
}

#[tokio::test]
async fn p5_hint_and_view() {
    let app = AppState::default();
    let (id, view) = create(&app, json!({"edges": P5, "human": "dominator"})).await;
    assert_eq!(view["your_turn"], true);
    assert_eq!(view["value"], 15);
    assert_eq!(view["bounds"]["three_fifths"], Value::Null);
    assert_eq!(view["bounds"]["five_eighths"], 3);
    assert_eq!(view["bounds"]["leaf_pair_at_distance_4"], true);
    let (status, hint) = call(&app, "GET", &format!("/games/{id}/hint"), None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(hint["total_turns"], 3);

    // Staller to move after Dominator takes a stem of P5: the center is optimal
    let (id, _) = create(&app, json!({"edges": P5, "human": "staller", "start": "dominator"})).await;
    let (_, view) = call(&app, "GET", &format!("/games/{id}"), None).await;
    assert_eq!(view["to_move"], "staller");
    let (status, hint) = call(&app, "GET", &format!("/games/{id}/hint"), None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(hint["player"], "staller");
    assert_eq!(hint["vertex"], 2);
    assert_eq!(hint["total_turns"], 3);
}

#[tokio::test]
async fn status_codes() {
    let app = AppState::default();
    let (status, _) = call(&app, "GET", "/games/not-a-uuid", None).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
    let (status, _) = call(&app, "GET", &format!("/games/{}", uuid::Uuid::nil()), None).await;
    assert_eq!(status, StatusCode::NOT_FOUND);

    let (status, _) = call(&app, "POST", "/games", Some(json!({"edges": "3\n0 1\n1 2\n2 0\n", "human": "dominator"}))).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    let (status, _) = call(&app, "POST", "/games", Some(json!({"edges": "3\n0 1\n2 2\n", "human": "dominator"}))).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    let (status, _) =
        call(&app, "POST", "/games", Some(json!({"generator": {"kind": "path", "n": 30}, "human": "dominator"}))).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);

    // Dominator takes 1 on P5, so vertex 0 is red
    let (id, _) = create(&app, json!({"edges": P5, "human": "staller"})).await;
    let (_, view) = call(&app, "GET", &format!("/games/{id}"), None).await;
    let red = view["vertices"].as_array().unwrap().iter().find(|v| v["color"] == "Red").unwrap()["id"].clone();
    let (status, err) = call(&app, "POST", &format!("/games/{id}/moves"), Some(json!({"vertex": red}))).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    assert!(err["error"].as_str().unwrap().contains("not a legal move"));
    let (status, _) = call(&app, "POST", &format!("/games/{id}/moves"), Some(json!({"vertex": 99}))).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);

    // the P3 game is over as soon as it is created
    let (id, _) = create(&app, json!({"edges": "3\n0 1\n1 2\n", "human": "staller"})).await;
    let (status, _) = call(&app, "POST", &format!("/games/{id}/moves"), Some(json!({"vertex": 0}))).await;
    assert_eq!(status, StatusCode::CONFLICT);
    let (status, _) = call(&app, "GET", &format!("/games/{id}/hint"), None).await;
    assert_eq!(status, StatusCode::CONFLICT);
}

#[tokio::test]
async fn full_game_through_the_api() {
    let app = AppState::default();
    let (id, mut view) = create(
        &app,
        json!({"generator": {"kind": "caterpillar", "n": 14, "seed": 5}, "human": "dominator", "start": "staller",
               "staller_policy": "random", "seed": 9}),
    )
    .await;
    while view["over"] == false {
        let (_, hint) = call(&app, "GET", &format!("/games/{id}/hint"), None).await;
        let (status, next) = call(&app, "POST", &format!("/games/{id}/moves"), Some(json!({"vertex": hint["vertex"]}))).await;
        assert_eq!(status, StatusCode::OK, "{next}");
        view = next;
    }
    assert_eq!(view["value"], 0);
    assert!(view["turns"].as_u64().unwrap() as i64 <= view["bounds"]["five_eighths"].as_i64().unwrap());
    let decrease: u64 = view["ledger"]["per_phase_decrease"].as_object().unwrap().values().map(|v| v.as_u64().unwrap()).sum();
    assert_eq!(decrease, 3 * 14);
}

#[test]
fn replaying_the_move_log_reproduces_the_state() {
    let forest = domgame_core::graph::random_tree(12, 3);
    let config = EngineConfig { policy: domgame_core::StallerPolicy::Random, seed: 4 };
    let mut s = Session::new(forest.clone(), Player::Staller, Player::Dominator, config).unwrap();
    while !s.builder().is_over() {
        let v = s.builder().state().legal_moves()[0];
        s.human_move(v).unwrap();
    }
    let mut replay = TraceBuilder::new(&forest, Player::Dominator).unwrap();
    for &v in s.move_log() {
        replay.push(v).unwrap();
    }
    assert_eq!(replay.trace(), s.builder().trace());
    assert_eq!(s.view().records, replay.records());
}

#[tokio::test]
async fn idle_sessions_expire() {
    let app = AppState::new(Duration::from_millis(20), 24);
    let (id, _) = create(&app, json!({"edges": P5, "human": "dominator"})).await;
    assert_eq!(app.session_count(), 1);
    tokio::time::sleep(Duration::from_millis(60)).await;
    let (status, _) = call(&app, "GET", &format!("/games/{id}"), None).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
    assert_eq!(app.session_count(), 0);
}
