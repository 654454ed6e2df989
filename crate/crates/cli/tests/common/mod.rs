#![allow(dead_code)]

use std::path::PathBuf;
use std::process::{Command, Output};

use axum::body::Body;
use axum::http::{Request, StatusCode};
use http_body_util::BodyExt;
use marketarch::api::router;
use marketarch::load_model;
use marketarch_core::Model;
use serde_json::Value;
use tower::ServiceExt;

pub fn config_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../core/configs")
        .join(name)
}

pub fn stations() -> PathBuf {
    config_path("stations_baseline.toml")
}

pub fn table1() -> PathBuf {
    config_path("table1_example.toml")
}

pub fn model(path: &std::path::Path) -> Model {
    load_model(path).unwrap()
}

pub fn cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_marketarch"))
        .args(args)
        .env_remove("MARKETARCH_CONFIG")
        .output()
        .expect("binary runs")
}

pub fn cli_json(args: &[&str]) -> Value {
    let out = cli(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("CLI emits JSON")
}

pub async fn request(model: Model, method: &str, uri: &str, body: &str) -> (StatusCode, Value) {
    let req = Request::builder()
        .method(method)
        .uri(uri)
        .header("content-type", "application/json")
        .body(Body::from(body.to_string()))
        .unwrap();
    let resp = router(model).oneshot(req).await.unwrap();
    let status = resp.status();
    let bytes = resp.into_body().collect().await.unwrap().to_bytes();
    let value = serde_json::from_slice(&bytes).unwrap_or(Value::Null);
    (status, value)
}

pub fn block_on<F: std::future::Future>(f: F) -> F::Output {
    tokio::runtime::Builder::new_current_thread()
        .enable_all()
        .build()
        .unwrap()
        .block_on(f)
}

/// Report entry for an architecture by name.
pub fn arch<'a>(report: &'a Value, name: &str) -> &'a Value {
    report["architectures"]
        .as_array()
        .unwrap()
        .iter()
        .find(|a| a["name"] == name)
        .unwrap_or_else(|| panic!("no architecture {name}"))
}
