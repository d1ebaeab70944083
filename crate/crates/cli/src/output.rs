//! Report rendering: a human summary or one self-describing JSON record
//! per invocation.

use serde_json::{json, Value};

use crate::Format;

pub const FORMAT_VERSION: &str = "1";

/// What a command produced: an overall status, a payload record, and the
/// human-readable lines describing it.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub command: &'static str,
    pub pass: bool,
    pub status: &'static str,
    pub payload: Value,
    pub lines: Vec<String>,
}

impl Outcome {
    pub fn pass(command: &'static str, payload: Value, lines: Vec<String>) -> Outcome {
        Outcome {
            command,
            pass: true,
            status: "pass",
            payload,
            lines,
        }
    }

    pub fn fail(command: &'static str, payload: Value, lines: Vec<String>) -> Outcome {
        Outcome {
            command,
            pass: false,
            status: "fail",
            payload,
            lines,
        }
    }

    pub fn error(err: &ellgal::Error) -> Outcome {
        Outcome {
            command: "error",
            pass: false,
            status: "error",
            payload: json!({ "message": err.to_string() }),
            lines: vec![format!("error: {err}")],
        }
    }
}

pub fn render(outcome: &Outcome, format: Format) -> String {
    match format {
        Format::Structured => {
            let record = json!({
                "version": FORMAT_VERSION,
                "command": outcome.command,
                "status": outcome.status,
                "payload": outcome.payload,
            });
            format!("{}\n", serde_json::to_string_pretty(&record).unwrap())
        }
        Format::Human => {
            let mut out = String::new();
            for line in &outcome.lines {
                out.push_str(line);
                out.push('\n');
            }
            out.push_str(&format!("status: {}\n", outcome.status));
            out
        }
    }
}
