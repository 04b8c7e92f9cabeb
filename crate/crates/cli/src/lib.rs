//! JSON front end for `lindblad-split`: request parsing, dispatch and
//! result serialization. The binary in `main.rs` is a thin wrapper.

pub mod execute;
pub mod json;
pub mod request;

pub use execute::{execute, JobResult, Options, Status, DEFAULT_SEED};
pub use request::{parse_request, parse_request_value, Command, JobRequest};

use serde_json::Value;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CliError {
    #[error("parse error at {path}: {message}")]
    Parse { path: String, message: String },
    #[error("dimension error: {0}")]
    Dimension(String),
    #[error(transparent)]
    Core(#[from] lindblad_split::Error),
}

impl CliError {
    pub(crate) fn parse(path: &str, message: &str) -> Self {
        Self::Parse {
            path: path.to_string(),
            message: message.to_string(),
        }
    }
}

/// Runs a whole input document. In batch mode the document must be an array
/// of requests and the results come back as an array in the same order.
/// Returns the output document and the process exit code.
pub fn run_document(bytes: &[u8], batch: bool, opts: &Options) -> (Value, Vec<JobResult>, i32) {
    let tol = opts.tol.unwrap_or(lindblad_split::DEFAULT_TOL);
    let doc = match request::parse_document(bytes) {
        Ok(v) => v,
        Err(e) => {
            let r = JobResult::failure(None, tol, &e, Value::Null);
            return (r.to_json(), vec![r.clone()], r.status.exit_code());
        }
    };
    let one = |v: &Value| match parse_request_value(v) {
        Ok(req) => execute(&req, opts),
        Err(e) => {
            let command = v
                .get("command")
                .and_then(Value::as_str)
                .and_then(request::command_name);
            JobResult::failure(command, tol, &e, Value::Null)
        }
    };
    if batch {
        let Some(items) = doc.as_array() else {
            let e = CliError::parse("$", "--batch expects an array of requests");
            let r = JobResult::failure(None, tol, &e, Value::Null);
            return (r.to_json(), vec![r.clone()], r.status.exit_code());
        };
        let results: Vec<JobResult> = items.iter().map(one).collect();
        let code = results.iter().map(|r| r.status.exit_code()).max().unwrap_or(0);
        let out = Value::Array(results.iter().map(JobResult::to_json).collect());
        (out, results, code)
    } else {
        let r = one(&doc);
        (r.to_json(), vec![r.clone()], r.status.exit_code())
    }
}
