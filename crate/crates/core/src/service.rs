//! HTTP facade over the pipeline.
//!
//! Bodies are JSON using the same field names as the plan file. The solve
//! response body is byte-for-byte what `solve --out` writes.

use std::collections::BTreeMap;
use std::net::SocketAddr;

use axum::extract::rejection::BytesRejection;
use axum::body::Bytes;
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::affinity::{self, Relationship, RelationshipSpec};
use crate::capacity::{Table, TableSpec};
use crate::cli::plan_to_json;
use crate::error::Error;
use crate::pipeline::{self, Person, SolveConfig};

pub const DEFAULT_BIND: &str = "127.0.0.1:8080";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldError {
    pub field: String,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorBody {
    pub error: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub fields: Vec<FieldError>,
}

#[derive(Debug)]
pub struct ApiError {
    status: StatusCode,
    body: ErrorBody,
}

impl ApiError {
    fn fields(fields: Vec<FieldError>) -> Self {
        Self {
            status: StatusCode::BAD_REQUEST,
            body: ErrorBody {
                error: "invalid request".into(),
                fields,
            },
        }
    }

    fn field(field: &str, message: impl ToString) -> Self {
        Self::fields(vec![FieldError {
            field: field.into(),
            message: message.to_string(),
        }])
    }
}

impl From<Error> for ApiError {
    fn from(e: Error) -> Self {
        let status = if e.is_internal() {
            StatusCode::INTERNAL_SERVER_ERROR
        } else if e.is_infeasible() {
            StatusCode::UNPROCESSABLE_ENTITY
        } else {
            StatusCode::BAD_REQUEST
        };
        Self {
            status,
            body: ErrorBody {
                error: e.to_string(),
                fields: Vec::new(),
            },
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(self.body)).into_response()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigOverrides {
    pub seed: Option<u64>,
    pub epsilon: Option<f64>,
    pub max_iter: Option<usize>,
    pub neutral_weight: Option<f64>,
}

impl ConfigOverrides {
    pub fn resolve(&self) -> SolveConfig {
        let d = SolveConfig::default();
        SolveConfig {
            epsilon: self.epsilon,
            max_iter: self.max_iter.unwrap_or(d.max_iter),
            neutral_weight: self.neutral_weight.unwrap_or(d.neutral_weight),
            seed: self.seed.unwrap_or(d.seed),
            ..d
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveRequest {
    pub people: Vec<Person>,
    pub relationships: Vec<Relationship>,
    pub tables: Vec<Table>,
    #[serde(default)]
    pub config: ConfigOverrides,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidateRequest {
    pub relationships: Vec<Relationship>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidateResponse {
    pub warnings: Vec<affinity::ContradictionWarning>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsRequest {
    pub people: Vec<Person>,
    pub relationships: Vec<Relationship>,
    pub tables: Vec<Table>,
    pub assignments: BTreeMap<String, String>,
    #[serde(default)]
    pub config: ConfigOverrides,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Health {
    pub status: String,
    pub version: String,
}

// Parses a JSON object field by field so each problem is reported against
// the field it came from.
struct Fields {
    map: Map<String, Value>,
    errors: Vec<FieldError>,
}

impl Fields {
    fn parse(body: &[u8]) -> Result<Self, ApiError> {
        match serde_json::from_slice::<Value>(body) {
            Ok(Value::Object(map)) => Ok(Self { map, errors: Vec::new() }),
            Ok(_) => Err(ApiError::field("", "request body must be a JSON object")),
            Err(e) => Err(ApiError::field("", format!("malformed JSON: {e}"))),
        }
    }

    fn take<T: DeserializeOwned>(&mut self, name: &str, required: bool) -> Option<T> {
        match self.map.remove(name) {
            None | Some(Value::Null) => {
                if required {
                    self.fail(name, "missing field");
                }
                None
            }
            Some(v) => match item_errors::<T>(name, v) {
                Ok(t) => Some(t),
                Err(errs) => {
                    self.errors.extend(errs);
                    None
                }
            },
        }
    }

    fn fail(&mut self, field: &str, message: impl ToString) {
        self.errors.push(FieldError {
            field: field.into(),
            message: message.to_string(),
        });
    }

    fn finish(mut self) -> Result<(), ApiError> {
        for key in self.map.keys() {
            self.errors.push(FieldError {
                field: key.clone(),
                message: "unknown field".into(),
            });
        }
        if self.errors.is_empty() {
            Ok(())
        } else {
            Err(ApiError::fields(self.errors))
        }
    }
}

// Arrays are decoded element by element so errors point at `field[i]`.
fn item_errors<T: DeserializeOwned>(name: &str, v: Value) -> Result<T, Vec<FieldError>> {
    let err = |field: String, e: serde_json::Error| FieldError {
        field,
        message: e.to_string(),
    };
    if let Value::Array(items) = &v {
        let errs: Vec<FieldError> = items
            .iter()
            .enumerate()
            .filter_map(|(i, item)| {
                element_check::<T>(item).err().map(|e| err(format!("{name}[{i}]"), e))
            })
            .collect();
        if !errs.is_empty() {
            return Err(errs);
        }
    }
    serde_json::from_value(v).map_err(|e| vec![err(name.to_owned(), e)])
}

// Decodes a single array element as a one-element array of the target type.
fn element_check<T: DeserializeOwned>(item: &Value) -> Result<(), serde_json::Error> {
    serde_json::from_value::<T>(Value::Array(vec![item.clone()])).map(|_| ())
}

fn people_of(fields: &mut Fields, people: &[Person]) {
    if people.is_empty() {
        fields.fail("people", Error::EmptyGuestList);
    }
    let mut seen = std::collections::HashSet::new();
    for (i, p) in people.iter().enumerate() {
        if !seen.insert(p.id.as_str()) {
            fields.fail(&format!("people[{i}]"), Error::DuplicatePerson(p.id.clone()));
        }
    }
}

fn spec_of(fields: &mut Fields, pairs: Vec<Relationship>, people: Option<&[Person]>) -> Option<RelationshipSpec> {
    if let Some(people) = people {
        let known: std::collections::HashSet<&str> = people.iter().map(|p| p.id.as_str()).collect();
        for (i, r) in pairs.iter().enumerate() {
            for id in [&r.person_a, &r.person_b] {
                if !known.contains(id.as_str()) {
                    fields.fail(&format!("relationships[{i}]"), Error::UnknownPerson(id.clone()));
                }
            }
        }
    }
    RelationshipSpec::new(pairs)
        .map_err(|e| fields.fail("relationships", e))
        .ok()
}

fn tables_of(fields: &mut Fields, tables: Vec<Table>) -> Option<TableSpec> {
    TableSpec::new(tables).map_err(|e| fields.fail("tables", e)).ok()
}

fn config_of(fields: &mut Fields, overrides: Option<ConfigOverrides>) -> SolveConfig {
    let config = overrides.unwrap_or_default().resolve();
    if let Err(e) = config.validate() {
        fields.fail("config", e);
    }
    config
}

struct Problem {
    people: Vec<Person>,
    spec: RelationshipSpec,
    tables: TableSpec,
    config: SolveConfig,
}

fn problem(fields: &mut Fields) -> Option<Problem> {
    let people: Option<Vec<Person>> = fields.take("people", true);
    let pairs: Option<Vec<Relationship>> = fields.take("relationships", true);
    let tables: Option<Vec<Table>> = fields.take("tables", true);
    let overrides: Option<ConfigOverrides> = fields.take("config", false);
    if let Some(p) = &people {
        people_of(fields, p);
    }
    let spec = pairs.and_then(|pairs| spec_of(fields, pairs, people.as_deref()));
    let tables = tables.and_then(|t| tables_of(fields, t));
    let config = config_of(fields, overrides);
    Some(Problem {
        people: people?,
        spec: spec?,
        tables: tables?,
        config,
    })
}

fn body_bytes(body: Result<Bytes, BytesRejection>) -> Result<Bytes, ApiError> {
    body.map_err(|e| ApiError::field("", e.body_text()))
}

fn json_response(body: String) -> Response {
    ([(header::CONTENT_TYPE, "application/json")], body).into_response()
}

/// `POST /api/solve`: the seating plan, identical to the plan file.
pub async fn handle_solve(body: Result<Bytes, BytesRejection>) -> Result<Response, ApiError> {
    let body = body_bytes(body)?;
    let mut fields = Fields::parse(&body)?;
    let problem = problem(&mut fields);
    fields.finish()?;
    let p = problem.ok_or_else(|| ApiError::field("", "invalid request"))?;
    let plan = tokio::task::spawn_blocking(move || {
        pipeline::solve_constrained(&p.people, &p.spec, &p.tables, &p.config)
    })
    .await
    .map_err(|e| Error::Internal(e.to_string()))??;
    Ok(json_response(plan_to_json(&plan)?))
}

/// `POST /api/validate`: contradiction warnings for a relationship list.
pub async fn handle_validate(
    body: Result<Bytes, BytesRejection>,
) -> Result<Json<ValidateResponse>, ApiError> {
    let body = body_bytes(body)?;
    let mut fields = Fields::parse(&body)?;
    let pairs: Option<Vec<Relationship>> = fields.take("relationships", true);
    let spec = pairs.and_then(|p| spec_of(&mut fields, p, None));
    fields.finish()?;
    let spec = spec.unwrap_or_default();
    Ok(Json(ValidateResponse {
        warnings: affinity::detect_contradictions(&spec),
    }))
}

/// `POST /api/metrics`: per-table metrics and objective for an explicit seating.
pub async fn handle_metrics(
    body: Result<Bytes, BytesRejection>,
) -> Result<Json<pipeline::PlanScore>, ApiError> {
    let body = body_bytes(body)?;
    let mut fields = Fields::parse(&body)?;
    let problem = problem(&mut fields);
    let assignments: Option<BTreeMap<String, String>> = fields.take("assignments", true);
    fields.finish()?;
    let (p, assignments) = problem
        .zip(assignments)
        .ok_or_else(|| ApiError::field("", "invalid request"))?;
    pipeline::score_assignment(&p.people, &p.spec, &p.tables, &p.config, &assignments)
        .map(Json)
        .map_err(|e| match e {
            Error::InvalidConfig(m) => ApiError::field("assignments", m),
            Error::UnknownPerson(_) => ApiError::field("assignments", e),
            other => other.into(),
        })
}

/// `GET /api/health`
pub async fn handle_health() -> Json<Health> {
    Json(Health {
        status: "ok".into(),
        version: env!("CARGO_PKG_VERSION").into(),
    })
}

pub fn router() -> Router {
    Router::new()
        .route("/api/solve", post(handle_solve))
        .route("/api/validate", post(handle_validate))
        .route("/api/metrics", post(handle_metrics))
        .route("/api/health", get(handle_health))
}

pub async fn serve(addr: SocketAddr) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    axum::serve(listener, router()).await
}
