mod common;

use axum::http::StatusCode;
use common::*;

const FREE: &str = "Independent free flyers";
const SHARED: &str = "Shared core module";

#[tokio::test]
async fn evaluate_baseline() {
    let (status, body) = request(model(&stations()), "POST", "/api/evaluate", "{}").await;
    assert_eq!(status, StatusCode::OK);
    let free = arch(&body, FREE);
    assert_eq!(free["rounded"]["totals"]["revenue"], 1500.0);
    assert_eq!(free["classification"]["max_firms"], 1);
    let shared = arch(&body, SHARED);
    assert_eq!(shared["rounded"]["totals"]["cost"], 837.0);
    assert_eq!(shared["classification"]["max_firms"], 2);
    assert_eq!(body["parameters"]["market_revenue"], 500.0);
    assert_eq!(body["parameters"]["annual_rate"], 0.05);
}

#[tokio::test]
async fn empty_body_is_baseline() {
    let (status, empty) = request(model(&stations()), "POST", "/api/evaluate", "").await;
    assert_eq!(status, StatusCode::OK);
    let (_, braces) = request(model(&stations()), "POST", "/api/evaluate", "{}").await;
    assert_eq!(empty, braces);
}

#[tokio::test]
async fn evaluate_high_demand() {
    let (status, body) = request(model(&stations()), "POST", "/api/evaluate", r#"{"RM": 1000}"#).await;
    assert_eq!(status, StatusCode::OK);
    let profit = arch(&body, FREE)["exact"]["profit_per_firm"].as_f64().unwrap();
    assert!((profit - 73.0).abs() < 1.0, "{profit}");
    assert_eq!(body["parameters"]["market_revenue"], 1000.0);
}

#[tokio::test]
async fn resolved_parameters_replay() {
    let m = model(&stations());
    let (_, first) = request(m.clone(), "POST", "/api/evaluate", r#"{"rate": 0.08, "RM": 640}"#).await;
    let replay = first["parameters"].to_string();
    let (_, second) = request(m, "POST", "/api/evaluate", &replay).await;
    assert_eq!(first, second);
}

#[tokio::test]
async fn malformed_and_infeasible_bodies() {
    let (status, body) = request(model(&stations()), "POST", "/api/evaluate", "{not json").await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert!(body["error"].as_str().unwrap().contains("malformed"));

    let (status, _) = request(model(&stations()), "POST", "/api/evaluate", r#"{"RMM": 1}"#).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);

    let (status, body) = request(model(&stations()), "POST", "/api/evaluate", r#"{"B": 200}"#).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    assert!(body["constraint"].as_str().unwrap().contains("G^S <= B"));
}

#[tokio::test]
async fn region_endpoint() {
    let body = r#"{"diagram": {"purchases_range": {"min": 0, "max": 1500}, "cost_range": {"min": 0, "max": 2500}, "resolution": [16, 11]}}"#;
    let (status, region) = request(model(&stations()), "POST", "/api/region", body).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(region["grid"].as_array().unwrap().len(), 16 * 11);
    assert_eq!(region["boundaries"].as_array().unwrap().len(), 10);
    let points = region["points"].as_array().unwrap();
    assert_eq!(points[0]["classification"]["max_firms"], 1);
    assert_eq!(points[1]["classification"]["max_firms"], 2);
    assert_eq!(region["parameters"]["budget"], 1000.0);

    let degenerate = r#"{"diagram": {"purchases_range": {"min": 5, "max": 5}, "cost_range": {"min": 0, "max": 1}, "resolution": [2, 2]}}"#;
    let (status, _) = request(model(&stations()), "POST", "/api/region", degenerate).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
}

#[tokio::test]
async fn threshold_endpoint() {
    let body = format!(r#"{{"architecture": "{FREE}", "parameter": "RM", "target_firms": 2, "bracket": [0, 2000]}}"#);
    let (status, t) = request(model(&stations()), "POST", "/api/threshold", &body).await;
    assert_eq!(status, StatusCode::OK);
    assert!((t["value"].as_f64().unwrap() - 854.6).abs() <= 0.2);
    assert_eq!(t["direction"], "increasing");

    let body =
        format!(r#"{{"architecture": "{SHARED}", "parameter": "RM", "target_firms": 2, "bracket": [400, 500]}}"#);
    let (status, _) = request(model(&stations()), "POST", "/api/threshold", &body).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);

    let (status, _) = request(model(&stations()), "POST", "/api/threshold", "{}").await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
}

#[tokio::test]
async fn config_endpoint() {
    let (status, body) = request(model(&table1()), "GET", "/api/config", "").await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body["parameters"]["budget"], 1000.0);
    assert_eq!(body["model"]["architectures"].as_array().unwrap().len(), 2);
}
