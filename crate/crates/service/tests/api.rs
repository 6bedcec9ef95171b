use axum::body::Body;
use axum::http::{Method, Request, StatusCode};
use axum::Router;
use http_body_util::BodyExt;
use serde_json::{json, Value};
use tower::ServiceExt;

use adm_core::formats::parse_design;
use adm_core::{conforms, fixtures, meaning_of, DesignDocument};
use adm_service::{router, AppState};

fn app() -> (AppState, Router) {
    let state = AppState::default();
    state.add_model(Some("rapp"), fixtures::rapp());
    (state.clone(), router(state))
}

async fn call(
    app: &Router,
    method: Method,
    uri: &str,
    body: Option<String>,
) -> (StatusCode, Value) {
    let request = Request::builder()
        .method(method)
        .uri(uri)
        .header("content-type", "application/json")
        .body(body.map(Body::from).unwrap_or_else(Body::empty))
        .unwrap();
    let response = app.clone().oneshot(request).await.unwrap();
    let status = response.status();
    let bytes = response.into_body().collect().await.unwrap().to_bytes();
    let value = if bytes.is_empty() {
        Value::Null
    } else {
        serde_json::from_slice(&bytes).unwrap()
    };
    (status, value)
}

async fn get(app: &Router, uri: &str) -> (StatusCode, Value) {
    call(app, Method::GET, uri, None).await
}

async fn post(app: &Router, uri: &str, body: Value) -> (StatusCode, Value) {
    call(app, Method::POST, uri, Some(body.to_string())).await
}

#[tokio::test]
async fn lists_models() {
    let (_, app) = app();
    let (status, body) = get(&app, "/models").await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(
        body,
        json!([{"id": "rapp", "name": "rapp", "issueCount": 5, "alternativeCount": 12}])
    );
}

#[tokio::test]
async fn returns_canonical_document() {
    let (_, app) = app();
    let (status, body) = get(&app, "/models/rapp").await;
    assert_eq!(status, StatusCode::OK);
    let expected: Value = serde_json::from_str(fixtures::RAPP_DOCUMENT).unwrap();
    assert_eq!(body, expected);
    let (status, body) = get(&app, "/models/nope").await;
    assert_eq!(status, StatusCode::NOT_FOUND);
    assert_eq!(body["error"], "unknown-model");
}

#[tokio::test]
async fn uploads_models() {
    let (_, app) = app();
    let text = fixtures::RAPP_DOCUMENT.to_owned();
    let (status, body) = call(&app, Method::POST, "/models", Some(text)).await;
    assert_eq!(status, StatusCode::CREATED);
    assert_eq!(body["id"], "rapp-2");
    let (_, list) = get(&app, "/models").await;
    assert_eq!(list.as_array().unwrap().len(), 2);

    let self_trigger = json!({
        "name": "bad",
        "issues": [{"id": "I"}],
        "alternatives": [{"id": "A", "issue": "I", "triggers": ["I"]}],
        "incompatible": []
    });
    let (status, body) = post(&app, "/models", self_trigger).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(body["error"], "ill-formed-model");
    assert_eq!(body["violations"][0]["rule"], "self-trigger");

    let (status, body) = post(&app, "/models", json!([1, 2])).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert_eq!(body["error"], "malformed-body");
}

#[tokio::test]
async fn serves_the_meaning() {
    let (_, app) = app();
    let (status, body) = get(&app, "/models/rapp/meaning").await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body["designs"].as_array().unwrap().len(), 22);
    assert_eq!(body["truncated"], false);
    let model = fixtures::rapp();
    let first = DesignDocument::from_design(&model, &meaning_of(&model, None).designs[0]);
    assert_eq!(body["designs"][0], serde_json::to_value(first).unwrap());

    let (_, body) = get(&app, "/models/rapp/meaning?limit=3").await;
    assert_eq!(body["designs"].as_array().unwrap().len(), 3);
    assert_eq!(body["truncated"], true);

    let (_, body) = get(&app, "/models/rapp/meaning?limit=22&wellFounded=true").await;
    assert_eq!(body["designs"].as_array().unwrap().len(), 22);
    assert_eq!(body["truncated"], false);

    let (status, _) = get(&app, "/models/nope/meaning").await;
    assert_eq!(status, StatusCode::NOT_FOUND);
}

#[tokio::test]
async fn checks_conformity() {
    let (_, app) = app();
    let ok = json!({"AppType": "StandAlone", "Robot": "NAO", "Submission": "PureJavaScript"});
    let (status, body) = post(&app, "/models/rapp/conformity", ok).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body, json!({"conforms": true, "violations": []}));

    let clash = json!({
        "AppType": "PlatformBased", "Platform": "Local", "Robot": "ANG", "Submission": "PureJavaScript"
    });
    let (_, body) = post(&app, "/models/rapp/conformity", clash).await;
    assert_eq!(body["conforms"], false);
    assert_eq!(body["violations"][0]["condition"], "C3");
    assert_eq!(
        body["violations"][0]["witnesses"],
        json!(["PlatformBased", "ANG"])
    );

    let (_, body) = post(&app, "/models/rapp/conformity", json!({})).await;
    let conditions: Vec<&str> = body["violations"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v["condition"].as_str().unwrap())
        .collect();
    assert_eq!(conditions, vec!["C4-missing"; 3]);

    let (status, _) = post(&app, "/models/rapp/conformity", json!({"AppType": 3})).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
}

#[tokio::test]
async fn api_conformity_matches_the_library() {
    let (_, app) = app();
    let model = fixtures::rapp();
    let mut designs: Vec<Value> = meaning_of(&model, None)
        .designs
        .iter()
        .map(|d| serde_json::to_value(DesignDocument::from_design(&model, d)).unwrap())
        .collect();
    designs.push(json!({"AppType": "StandAlone"}));
    designs.push(
        json!({"AppType": "StandAlone", "Robot": "NAO", "Submission": "PureCpp", "Lang": "X"}),
    );
    designs.push(
        json!({"AppType": "StandAlone", "Robot": "Electron", "Submission": "PureJavaScript"}),
    );
    for design in designs {
        let (_, body) = post(&app, "/models/rapp/conformity", design.clone()).await;
        let local = conforms(
            &parse_design(&design.to_string()).unwrap().to_design(),
            &model,
        );
        assert_eq!(body, serde_json::to_value(local).unwrap(), "{design}");
    }
}

#[tokio::test]
async fn runs_a_session() {
    let (state, app) = app();
    let (status, session) = post(&app, "/sessions", json!({"modelId": "rapp"})).await;
    assert_eq!(status, StatusCode::CREATED);
    let sid = session["id"].as_str().unwrap().to_owned();
    assert_eq!(session["modelId"], "rapp");
    assert_eq!(
        session["pending"],
        json!(["AppType", "Robot", "Submission"])
    );
    assert_eq!(session["status"]["complete"], false);
    assert_eq!(state.session_count(), 1);

    let choices = format!("/sessions/{sid}/choices");
    let (status, session) = post(
        &app,
        &choices,
        json!({"issue": "AppType", "alternative": "PlatformBased"}),
    )
    .await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(
        session["pending"],
        json!(["Platform", "Robot", "Submission"])
    );
    let robot = &session["allowedAlternatives"][1];
    assert_eq!(robot["issue"], "Robot");
    assert_eq!(
        robot["excluded"],
        json!([{"alternative": "ANG", "conflictsWith": ["PlatformBased"]}])
    );
    let (status, session) = post(
        &app,
        &choices,
        json!({"issue": "Platform", "alternative": "Local"}),
    )
    .await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(session["status"]["viable"], true);
    assert_eq!(session["conforms"], false);

    let (status, session) = call(&app, Method::DELETE, &format!("{choices}/AppType"), None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(session["choices"], json!({}));
    let history = session["history"].as_array().unwrap();
    assert_eq!(history.len(), 4);
    assert_eq!(history[2]["cascade"], false);
    assert_eq!(history[3]["cascade"], true);
    assert_eq!(history[3]["issue"], "Platform");
    assert_eq!(
        session["pending"],
        json!(["AppType", "Robot", "Submission"])
    );

    let (status, body) = call(&app, Method::DELETE, &format!("{choices}/AppType"), None).await;
    assert_eq!(status, StatusCode::CONFLICT);
    assert_eq!(body["error"], "not-resolved");

    let (_, session) = post(
        &app,
        &choices,
        json!({"issue": "Robot", "alternative": "Electron"}),
    )
    .await;
    let submission = session["allowedAlternatives"]
        .as_array()
        .unwrap()
        .iter()
        .find(|o| o["issue"] == "Submission")
        .unwrap()
        .clone();
    let allowed: Vec<&str> = submission["alternatives"]
        .as_array()
        .unwrap()
        .iter()
        .map(|a| a["alternative"].as_str().unwrap())
        .collect();
    assert_eq!(allowed, vec!["RosPackage", "PureCpp"]);
    assert_eq!(
        submission["excluded"],
        json!([{"alternative": "PureJavaScript", "conflictsWith": ["Electron"]}])
    );

    let (status, body) = post(
        &app,
        &choices,
        json!({"issue": "Submission", "alternative": "PureJavaScript"}),
    )
    .await;
    assert_eq!(status, StatusCode::CONFLICT);
    assert_eq!(body["error"], "incompatible-choice");
    assert_eq!(body["witnesses"], json!(["Electron", "PureJavaScript"]));

    let (status, body) = post(
        &app,
        &choices,
        json!({"issue": "AppType", "alternative": "PureCpp"}),
    )
    .await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(body["error"], "wrong-issue");

    let (status, body) = post(
        &app,
        &choices,
        json!({"issue": "Platform", "alternative": "Local"}),
    )
    .await;
    assert_eq!(status, StatusCode::CONFLICT);
    assert_eq!(body["error"], "not-pending");

    let (status, read) = get(&app, &format!("/sessions/{sid}")).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(read["choices"], json!({"Robot": "Electron"}));
}

#[tokio::test]
async fn session_errors() {
    let (state, app) = app();
    let (status, body) = post(&app, "/sessions", json!({"modelId": "nope"})).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
    assert_eq!(body["error"], "unknown-model");
    let (status, _) = post(&app, "/sessions", json!({"model": "rapp"})).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    let (status, body) = get(&app, "/sessions/missing").await;
    assert_eq!(status, StatusCode::NOT_FOUND);
    assert_eq!(body["error"], "unknown-session");

    state.add_model(Some("cycle"), fixtures::mutual_trigger());
    let (status, body) = post(&app, "/sessions", json!({"modelId": "cycle"})).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(body["error"], "cyclic-model");
}

#[tokio::test]
async fn idle_sessions_expire() {
    let state = AppState::new(std::time::Duration::ZERO);
    state.add_model(Some("rapp"), fixtures::rapp());
    let app = router(state.clone());
    let (_, session) = post(&app, "/sessions", json!({"modelId": "rapp"})).await;
    let (status, _) = get(
        &app,
        &format!("/sessions/{}", session["id"].as_str().unwrap()),
    )
    .await;
    assert_eq!(status, StatusCode::NOT_FOUND);
    assert_eq!(state.session_count(), 0);
}

#[test]
fn loads_a_model_directory() {
    let dir = std::env::temp_dir().join(format!("adm-service-load-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    std::fs::write(dir.join("rapp.adm.json"), fixtures::RAPP_DOCUMENT).unwrap();
    std::fs::write(dir.join("broken.json"), "{").unwrap();
    std::fs::write(dir.join("notes.txt"), "ignored").unwrap();
    let state = AppState::default();
    let warnings = state.load_dir(&dir).unwrap();
    std::fs::remove_dir_all(&dir).unwrap();
    assert_eq!(warnings.len(), 1);
    assert!(warnings[0].path.ends_with("broken.json"));
    let ids: Vec<String> = state.model_summaries().into_iter().map(|m| m.id).collect();
    assert_eq!(ids, vec!["rapp"]);
}
