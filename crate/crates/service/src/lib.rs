//! HTTP service and batch audits for `counterfact`.

pub mod audit;
pub mod error;
pub mod http;
pub mod store;

pub use audit::{run_analyze, AnalyzeError, AnalyzeRequest, AuditReport};
pub use error::{ServiceError, ServiceResult};
pub use http::router;
pub use store::{Store, StoredDataset};

/// Environment variable naming the data root for the server.
pub const DATA_ROOT_ENV: &str = "COUNTERFACT_DATA_ROOT";
