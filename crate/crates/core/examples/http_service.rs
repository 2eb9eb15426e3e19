//! Call the HTTP handlers in-process: validate, solve, then re-score a
//! manual move. `seating serve` exposes the same router on a socket.

use axum::body::Body;
use axum::http::Request;
use http_body_util::BodyExt;
use serde_json::{json, Value};
use tower::ServiceExt;

async fn post(path: &str, body: &Value) -> Value {
    let req = Request::post(path)
        .header("content-type", "application/json")
        .body(Body::from(body.to_string()))
        .unwrap();
    let resp = seating::service::router().oneshot(req).await.unwrap();
    let status = resp.status();
    let bytes = resp.into_body().collect().await.unwrap().to_bytes();
    println!("POST {path} -> {status}");
    serde_json::from_slice(&bytes).unwrap()
}

#[tokio::main]
async fn main() {
    let mut request = json!({
        "people": [
            {"id": "b", "name": "Buffy"}, {"id": "x", "name": "Xander"},
            {"id": "s", "name": "Spike"}, {"id": "d", "name": "Dru"},
        ],
        "relationships": [
            {"person_a": "b", "person_b": "x", "category": "keep_together"},
            {"person_a": "s", "person_b": "d", "category": "keep_together"},
            {"person_a": "b", "person_b": "s", "category": "better_apart"},
        ],
        "tables": [{"table_id": "1", "capacity": 2}, {"table_id": "2", "capacity": 2}],
        "config": {"seed": 1},
    });

    let warnings = post("/api/validate", &json!({"relationships": request["relationships"]})).await;
    println!("{warnings}\n");

    let plan = post("/api/solve", &request).await;
    println!("assignments {} objective {}\n", plan["assignments"], plan["objective"]);

    // swap Xander and Dru by hand and re-score
    let mut moved = plan["assignments"].clone();
    let (x, d) = (moved["x"].clone(), moved["d"].clone());
    moved["x"] = d;
    moved["d"] = x;
    request["assignments"] = moved;
    let score = post("/api/metrics", &request).await;
    println!("after the swap, objective {}", score["objective"]);
}
