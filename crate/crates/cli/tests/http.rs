mod common;

use common::{request, start_server, TRINOMIAL};
use serde_json::json;

fn equilateral() -> serde_json::Value {
    let h = 2.0 * 3f64.sqrt();
    json!({"circles": [{"cx": 0.0, "cy": 0.0, "r": 1.0}, {"cx": 4.0, "cy": 0.0, "r": 1.0}, {"cx": 2.0, "cy": h, "r": 1.0}]})
}

#[test]
fn health() {
    let addr = start_server(2);
    let (status, body) = request(addr, "GET", "/api/health", "");
    assert_eq!(status, 200);
    assert_eq!(body["version"], "v1");
    assert_eq!(body["status"], "ok");
    assert_eq!(body["workers"], 2);
}

#[test]
fn solve_trinomial() {
    let addr = start_server(2);
    let req = json!({"system": TRINOMIAL, "seed": 1, "tasks": 2}).to_string();
    let (status, body) = request(addr, "POST", "/api/solve", &req);
    assert_eq!(status, 200, "{body}");
    assert_eq!(body["version"], "v1");
    let sols = body["solutions"].as_array().unwrap();
    let hit = sols.iter().any(|s| {
        let c = &s["coordinates"];
        let f = |v: &serde_json::Value| v.as_f64().unwrap();
        (f(&c[0]["re"]) - 0.48613).abs() <= 5e-6
            && f(&c[0]["im"]).abs() <= 1e-8
            && (f(&c[1]["re"]) - 0.34258).abs() <= 5e-6
    });
    assert!(hit, "{body}");
}

#[test]
fn solve_error_statuses() {
    let addr = start_server(1);
    let nonsquare = json!({"system": "2 3\nx^2 - y;\nx^3 - z;\n"}).to_string();
    let (status, body) = request(addr, "POST", "/api/solve", &nonsquare);
    assert_eq!(status, 422);
    assert_eq!(body["error"]["code"], "NotSquare");
    assert_eq!(body["version"], "v1");
    let (status, body) = request(addr, "POST", "/api/solve", "{not json");
    assert_eq!(status, 400);
    assert_eq!(body["error"]["code"], "MalformedRequest");
    let syntax = json!({"system": "2\nx + ;\ny;\n"}).to_string();
    assert_eq!(request(addr, "POST", "/api/solve", &syntax).0, 400);
    let version = json!({"system": TRINOMIAL, "version": "v0"}).to_string();
    assert_eq!(request(addr, "POST", "/api/solve", &version).0, 400);
}

#[test]
fn apollonius_round_trip_and_session() {
    let addr = start_server(2);
    let (status, first) = request(addr, "POST", "/api/apollonius", &equilateral().to_string());
    assert_eq!(status, 200, "{first}");
    assert_eq!(first["version"], "v1");
    assert_eq!(first["entries"].as_array().unwrap().len(), 8);
    let token = first["session"].as_str().unwrap().to_string();
    let mut moved = equilateral();
    moved["circles"][0]["cx"] = json!(1e-3);
    moved["session"] = json!(token);
    let (status, second) = request(addr, "POST", "/api/apollonius", &moved.to_string());
    assert_eq!(status, 200);
    assert_eq!(second["session"], token.as_str());
    assert_eq!(second["warm_started"], 8);
}

#[test]
fn apollonius_error_statuses() {
    let addr = start_server(1);
    let same = json!({"circles": [{"cx": 1.0, "cy": 1.0, "r": 1.0}, {"cx": 1.0, "cy": 1.0, "r": 1.0}, {"cx": 1.0, "cy": 1.0, "r": 1.0}]});
    let (status, body) = request(addr, "POST", "/api/apollonius", &same.to_string());
    assert_eq!(status, 422);
    assert_eq!(body["error"]["code"], "IllPosed");
    let mut negative = equilateral();
    negative["circles"][1]["r"] = json!(-1.0);
    assert_eq!(request(addr, "POST", "/api/apollonius", &negative.to_string()).0, 400);
    let two = json!({"circles": [{"cx": 0.0, "cy": 0.0, "r": 1.0}, {"cx": 4.0, "cy": 0.0, "r": 1.0}]});
    assert_eq!(request(addr, "POST", "/api/apollonius", &two.to_string()).0, 400);
}

#[test]
fn concurrent_requests_are_isolated() {
    let addr = start_server(2);
    let handles: Vec<_> = (0..4)
        .map(|k| {
            std::thread::spawn(move || {
                let mut c = equilateral();
                c["circles"][2]["r"] = json!(1.0 + 0.1 * k as f64);
                request(addr, "POST", "/api/apollonius", &c.to_string())
            })
        })
        .collect();
    let sessions: std::collections::HashSet<String> = handles
        .into_iter()
        .map(|h| {
            let (status, body) = h.join().unwrap();
            assert_eq!(status, 200);
            body["session"].as_str().unwrap().to_string()
        })
        .collect();
    assert_eq!(sessions.len(), 4);
}
