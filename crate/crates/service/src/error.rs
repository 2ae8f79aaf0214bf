use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ServiceError {
    #[error(transparent)]
    Domain(#[from] counterfact::Error),
    #[error("unknown {kind} `{id}`")]
    NotFound { kind: &'static str, id: String },
    #[error("malformed request: {0}")]
    BadRequest(String),
    #[error("storage error: {0}")]
    Io(#[from] std::io::Error),
    #[error("corrupt stored record: {0}")]
    Corrupt(#[from] serde_json::Error),
}

pub type ServiceResult<T> = Result<T, ServiceError>;

#[derive(Serialize)]
struct ErrorBody {
    code: String,
    message: String,
}

impl ServiceError {
    pub fn code(&self) -> &str {
        match self {
            ServiceError::Domain(e) => e.code(),
            ServiceError::NotFound { .. } => "NotFound",
            ServiceError::BadRequest(_) => "MalformedRequest",
            ServiceError::Io(_) => "StorageError",
            ServiceError::Corrupt(_) => "CorruptRecord",
        }
    }

    pub fn status(&self) -> StatusCode {
        use counterfact::Error as E;
        match self {
            ServiceError::Domain(E::UnknownColumn(_)) | ServiceError::NotFound { .. } => {
                StatusCode::NOT_FOUND
            }
            ServiceError::Domain(E::MalformedCsv(_) | E::ConstraintSyntax(_))
            | ServiceError::BadRequest(_) => StatusCode::BAD_REQUEST,
            ServiceError::Domain(_) => StatusCode::UNPROCESSABLE_ENTITY,
            ServiceError::Io(_) | ServiceError::Corrupt(_) => StatusCode::INTERNAL_SERVER_ERROR,
        }
    }
}

impl IntoResponse for ServiceError {
    fn into_response(self) -> Response {
        let status = self.status();
        if status.is_server_error() {
            tracing::error!(error = %self, "request failed");
        }
        let body = ErrorBody {
            code: self.code().to_owned(),
            message: self.to_string(),
        };
        crate::http::canonical_response(status, &body)
    }
}
