#![allow(dead_code)]

use axum::body::Body;
use axum::http::{Method, Request, StatusCode};
use axum::Router;
use exhibit_scribe::PackSet;
use exhibit_scribe_gateway::config::GatewayConfig;
use exhibit_scribe_gateway::server::{self, AppState, TOKEN_HEADER};
use http_body_util::BodyExt;
use serde_json::Value;
use tower::ServiceExt;

pub const DOMAIN: &str = "domain-author";
pub const EXHIBIT: &str = "exhibit-author";

/// The demo collection behind the default configuration.
pub fn app() -> Router {
    let config = GatewayConfig::default();
    server::router(AppState::new(exhibit_scribe::demo::demo_kb(), PackSet::builtin(), &config), None)
}

pub async fn call(app: &Router, method: Method, uri: &str, token: Option<&str>, body: Option<Value>) -> (StatusCode, Value) {
    let mut req = Request::builder().method(method).uri(uri);
    if let Some(t) = token {
        req = req.header(TOKEN_HEADER, t);
    }
    let req = match body {
        Some(b) => req
            .header("content-type", "application/json")
            .body(Body::from(b.to_string()))
            .unwrap(),
        None => req.body(Body::empty()).unwrap(),
    };
    let res = app.clone().oneshot(req).await.unwrap();
    let status = res.status();
    let bytes = res.into_body().collect().await.unwrap().to_bytes();
    let value = if bytes.is_empty() {
        Value::Null
    } else {
        serde_json::from_slice(&bytes).unwrap_or_else(|_| Value::String(String::from_utf8_lossy(&bytes).into()))
    };
    (status, value)
}

pub async fn get(app: &Router, uri: &str) -> (StatusCode, Value) {
    call(app, Method::GET, uri, None, None).await
}

pub async fn post(app: &Router, uri: &str, body: Value) -> (StatusCode, Value) {
    call(app, Method::POST, uri, None, Some(body)).await
}

/// A new session; panics unless it was created.
pub async fn session(app: &Router, user_type: &str, language: &str, max_facts: Option<usize>) -> String {
    let mut body = serde_json::json!({ "userType": user_type, "language": language });
    if let Some(n) = max_facts {
        body["maxFacts"] = n.into();
    }
    let (status, v) = post(app, "/api/sessions", body).await;
    assert_eq!(status, StatusCode::CREATED, "{v}");
    v["sessionId"].as_str().unwrap().to_string()
}

pub async fn describe(app: &Router, session: &str, entity: &str) -> (StatusCode, Value) {
    call(app, Method::POST, &format!("/api/sessions/{session}/describe/{entity}"), None, None).await
}

pub async fn say_more(app: &Router, session: &str, entity: &str) -> (StatusCode, Value) {
    call(app, Method::POST, &format!("/api/sessions/{session}/say-more/{entity}"), None, None).await
}

pub fn facts(description: &Value) -> Vec<String> {
    description["factsExpressed"]
        .as_array()
        .unwrap()
        .iter()
        .map(|f| f.as_str().unwrap().to_string())
        .collect()
}

pub fn text(description: &Value) -> &str {
    description["text"].as_str().unwrap()
}

/// Sentence strings, cut at the reported code-point offsets.
pub fn sentences(description: &Value) -> Vec<String> {
    let chars: Vec<char> = text(description).chars().collect();
    description["sentences"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| {
            let (a, b) = (s[0].as_u64().unwrap() as usize, s[1].as_u64().unwrap() as usize);
            chars[a..b].iter().collect()
        })
        .collect()
}
