//! JSON-over-HTTP service.
//!
//! - `GET  /api/config`    resolved base model and parameters
//! - `POST /api/evaluate`  body: overrides; per-architecture accounts
//! - `POST /api/region`    body: `{overrides, diagram}`; boundaries, grid, points
//! - `POST /api/threshold` body: `{overrides, architecture, parameter, target_firms, bracket}`
//!
//! Handlers are pure functions of the loaded model and the request body.
//! Malformed bodies get 400; infeasible scenarios and non-straddling
//! threshold brackets get 422.

use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::State;
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use marketarch_core::model::DiagramWindow;
use marketarch_core::region::CompetitionRegion;
use marketarch_core::report::EvaluationReport;
use marketarch_core::scenario::{find_threshold, ScenarioOverride, SweepParameter, Threshold};
use marketarch_core::{Error, Model};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::{evaluate_report, scenario_model};

pub struct ApiError {
    status: StatusCode,
    message: String,
    constraint: Option<String>,
}

impl From<Error> for ApiError {
    fn from(e: Error) -> Self {
        let (status, constraint) = match &e {
            Error::Infeasible { constraint, .. } => (StatusCode::UNPROCESSABLE_ENTITY, Some(constraint.clone())),
            Error::Bracket(_) => (StatusCode::UNPROCESSABLE_ENTITY, None),
            _ => (StatusCode::BAD_REQUEST, None),
        };
        Self {
            status,
            message: e.to_string(),
            constraint,
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let body = json!({ "error": self.message, "constraint": self.constraint });
        (self.status, Json(body)).into_response()
    }
}

fn parse_body<T: DeserializeOwned + Default>(body: &Bytes) -> Result<T, ApiError> {
    if body.iter().all(u8::is_ascii_whitespace) {
        return Ok(T::default());
    }
    serde_json::from_slice(body).map_err(|e| ApiError {
        status: StatusCode::BAD_REQUEST,
        message: format!("malformed request body: {e}"),
        constraint: None,
    })
}

type AppState = Arc<Model>;

pub fn router(model: Model) -> Router {
    Router::new()
        .route("/api/config", get(config))
        .route("/api/evaluate", post(evaluate))
        .route("/api/region", post(region))
        .route("/api/threshold", post(threshold))
        .with_state(Arc::new(model))
}

async fn config(State(model): State<AppState>) -> Json<serde_json::Value> {
    Json(json!({
        "parameters": model.resolved_parameters(),
        "model": *model,
    }))
}

async fn evaluate(State(model): State<AppState>, body: Bytes) -> Result<Json<EvaluationReport>, ApiError> {
    let ov: ScenarioOverride = parse_body(&body)?;
    Ok(Json(evaluate_report(&model, &ov)?))
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegionRequest {
    #[serde(default)]
    pub overrides: ScenarioOverride,
    pub diagram: Option<DiagramWindow>,
}

#[derive(Debug, Serialize)]
pub struct RegionResponse {
    pub parameters: ScenarioOverride,
    #[serde(flatten)]
    pub region: CompetitionRegion,
}

async fn region(State(model): State<AppState>, body: Bytes) -> Result<Json<RegionResponse>, ApiError> {
    let req: RegionRequest = parse_body(&body)?;
    let mut model = scenario_model(&model, &req.overrides)?;
    if req.diagram.is_some() {
        model.diagram = req.diagram;
    }
    Ok(Json(RegionResponse {
        parameters: model.resolved_parameters(),
        region: model.region()?,
    }))
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ThresholdRequest {
    #[serde(default)]
    pub overrides: ScenarioOverride,
    pub architecture: String,
    pub parameter: SweepParameter,
    pub target_firms: u32,
    pub bracket: [f64; 2],
}

#[derive(Debug, Serialize)]
pub struct ThresholdResponse {
    pub parameters: ScenarioOverride,
    #[serde(flatten)]
    pub threshold: Threshold,
}

async fn threshold(State(model): State<AppState>, body: Bytes) -> Result<Json<ThresholdResponse>, ApiError> {
    let req: ThresholdRequest = serde_json::from_slice(&body).map_err(|e| ApiError {
        status: StatusCode::BAD_REQUEST,
        message: format!("malformed request body: {e}"),
        constraint: None,
    })?;
    let model = scenario_model(&model, &req.overrides)?;
    let threshold = find_threshold(
        &model,
        &req.architecture,
        req.parameter,
        req.target_firms,
        (req.bracket[0], req.bracket[1]),
    )?;
    Ok(Json(ThresholdResponse {
        parameters: model.resolved_parameters(),
        threshold,
    }))
}

pub async fn serve(model: Model, port: u16) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(("0.0.0.0", port)).await?;
    eprintln!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, router(model)).await
}
