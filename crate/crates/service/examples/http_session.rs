//! Drive the JSON API in-process from upload to event log.
//!
//! The same requests work against `counterfact serve` with any HTTP client.

use axum::body::Body;
use axum::http::{Method, Request};
use counterfact_service::{router, Store};
use http_body_util::BodyExt;
use serde_json::{json, Value};
use tower::ServiceExt;

const CSV: &str = include_str!("../../core/examples/data/recidivism_synthetic.csv");

async fn send(app: &axum::Router, method: Method, uri: &str, body: Option<String>) -> Value {
    let req = Request::builder()
        .method(method.clone())
        .uri(uri)
        .body(body.map_or_else(Body::empty, Body::from))
        .expect("valid request");
    let resp = app.clone().oneshot(req).await.expect("infallible service");
    let status = resp.status();
    let bytes = resp.into_body().collect().await.expect("body").to_bytes();
    println!("{method} {uri} -> {status}");
    serde_json::from_slice(&bytes).unwrap_or(Value::Null)
}

#[tokio::main]
async fn main() -> Result<(), Box<dyn std::error::Error>> {
    let root = std::env::temp_dir().join(format!("counterfact-example-{}", std::process::id()));
    let app = router(Store::open(&root)?);

    let manifest = send(&app, Method::POST, "/datasets?name=recidivism&types=age:numerical", Some(CSV.into())).await;
    let dataset = manifest["id"].as_str().unwrap_or_default().to_owned();
    println!("  dataset {dataset}: {} rows\n", manifest["n_rows"]);

    let created = send(
        &app,
        Method::POST,
        "/sessions",
        Some(json!({"dataset": dataset, "outcome": "two_year_recid"}).to_string()),
    )
    .await;
    let session = created["id"].as_str().unwrap_or_default().to_owned();

    for constraint in ["sex=female", "age:18..30"] {
        let snap = send(
            &app,
            Method::POST,
            &format!("/sessions/{session}/filters"),
            Some(json!({ "constraint": constraint }).to_string()),
        )
        .await;
        println!("  strength {}\n", snap["strength"]);
    }

    let err = send(
        &app,
        Method::POST,
        &format!("/sessions/{session}/filters"),
        Some(json!({"constraint": "age:90..99"}).to_string()),
    )
    .await;
    println!("  error {err}\n");

    send(&app, Method::DELETE, &format!("/sessions/{session}/filters/sex"), None).await;
    let log = send(&app, Method::GET, &format!("/sessions/{session}/log"), None).await;
    println!("  log {}", serde_json::to_string_pretty(&log)?);

    std::fs::remove_dir_all(root)?;
    Ok(())
}
