use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::Json;
use serde::Serialize;

use adm_core::{SessionError, ValidationReport, Violation};

#[derive(Debug, Clone, Serialize)]
pub struct ErrorBody {
    pub error: String,
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witnesses: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub violations: Option<Vec<Violation>>,
}

#[derive(Debug, Clone)]
pub struct ApiError {
    pub status: StatusCode,
    pub body: ErrorBody,
}

impl ApiError {
    fn new(status: StatusCode, error: &str, detail: impl Into<String>) -> Self {
        ApiError {
            status,
            body: ErrorBody {
                error: error.to_owned(),
                detail: detail.into(),
                witnesses: None,
                violations: None,
            },
        }
    }

    pub fn bad_request(detail: impl Into<String>) -> Self {
        ApiError::new(StatusCode::BAD_REQUEST, "malformed-body", detail)
    }

    pub fn unknown_model(id: &str) -> Self {
        ApiError::new(
            StatusCode::NOT_FOUND,
            "unknown-model",
            format!("no model with id `{id}`"),
        )
    }

    pub fn unknown_session(id: &str) -> Self {
        ApiError::new(
            StatusCode::NOT_FOUND,
            "unknown-session",
            format!("no session with id `{id}`"),
        )
    }

    pub fn ill_formed(report: ValidationReport) -> Self {
        let detail = report
            .violations
            .iter()
            .map(|v| v.rule.as_str())
            .collect::<Vec<_>>()
            .join(", ");
        let mut err = ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, "ill-formed-model", detail);
        err.body.violations = Some(report.violations);
        err
    }
}

impl From<SessionError> for ApiError {
    fn from(err: SessionError) -> Self {
        let status = match err {
            SessionError::CyclicModel | SessionError::WrongIssue { .. } => {
                StatusCode::UNPROCESSABLE_ENTITY
            }
            SessionError::NotPending(_)
            | SessionError::IncompatibleChoice { .. }
            | SessionError::NotResolved(_) => StatusCode::CONFLICT,
        };
        let witnesses = match &err {
            SessionError::CyclicModel => None,
            SessionError::NotPending(i) | SessionError::NotResolved(i) => Some(vec![i.to_string()]),
            SessionError::WrongIssue { issue, alternative } => {
                Some(vec![issue.to_string(), alternative.to_string()])
            }
            SessionError::IncompatibleChoice { chosen, requested } => {
                Some(vec![chosen.to_string(), requested.to_string()])
            }
        };
        let mut api = ApiError::new(status, err.code(), err.to_string());
        api.body.witnesses = witnesses;
        api
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(self.body)).into_response()
    }
}
