//! Report envelope shared by all subcommands, and the text rendering.
//!
//! Every report is built as one serde value. The JSON rendering prints it
//! as is; the text rendering walks the same value, so both carry identical
//! data.

use serde::Serialize;
use serde_json::Value;

use crate::error::CliError;

/// Version tag of the JSON layout; bumped on incompatible changes.
pub const SCHEMA_VERSION: &str = "nahs-report/1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    /// The command ran to the end (whatever the mathematical verdict).
    Complete,
    /// Stopped at a capability limit; the body holds the stages reached.
    Unsupported,
    /// Stopped on bad input or an I/O failure.
    Error,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ErrorInfo {
    pub kind: &'static str,
    pub message: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report<B: Serialize> {
    pub schema: &'static str,
    pub command: &'static str,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<ErrorInfo>,
    pub warnings: Vec<String>,
    #[serde(flatten)]
    pub body: B,
}

impl<B: Serialize> Report<B> {
    pub fn new(command: &'static str, body: B) -> Self {
        Report {
            schema: SCHEMA_VERSION,
            command,
            status: Status::Complete,
            error: None,
            warnings: Vec::new(),
            body,
        }
    }

    /// Marks the report as stopped by `err`.
    pub fn fail(&mut self, err: &CliError) {
        self.status = match err {
            CliError::Unsupported(_) => Status::Unsupported,
            _ => Status::Error,
        };
        self.error = Some(ErrorInfo {
            kind: err.kind(),
            message: err.message().to_string(),
        });
    }

    pub fn exit_code(&self) -> i32 {
        match (&self.status, &self.error) {
            (Status::Complete, _) => 0,
            (Status::Unsupported, _) => 3,
            (Status::Error, Some(e)) if e.kind == "input" => 2,
            (Status::Error, _) => 1,
        }
    }

    pub fn to_value(&self) -> Value {
        serde_json::to_value(self).expect("reports serialize to JSON")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_value()).expect("reports serialize to JSON")
    }

    pub fn to_text(&self) -> String {
        render_text(&self.to_value())
    }
}

/// Indented `key: value` rendering of a JSON value. Short arrays of scalars
/// stay on one line, other arrays become `-` items; nulls are dropped.
pub fn render_text(v: &Value) -> String {
    let mut out = String::new();
    write_value(&mut out, v, 0);
    out
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("null".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Array(xs) if xs.is_empty() => Some("[]".into()),
        Value::Array(xs) if xs.iter().all(|x| !x.is_array() && !x.is_object()) => {
            let items: Vec<String> = xs.iter().map(|x| scalar(x).unwrap()).collect();
            let inline = items.iter().all(|s| !s.contains(", ")) && items.iter().map(String::len).sum::<usize>() <= 72;
            inline.then(|| format!("[{}]", items.join(", ")))
        }
        Value::Object(m) if m.is_empty() => Some("{}".into()),
        _ => None,
    }
}

fn write_value(out: &mut String, v: &Value, indent: usize) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                if x.is_null() {
                    continue;
                }
                match scalar(x) {
                    Some(s) => out.push_str(&format!("{pad}{k}: {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        write_value(out, x, indent + 1);
                    }
                }
            }
        }
        Value::Array(xs) => {
            for x in xs {
                match scalar(x) {
                    Some(s) => out.push_str(&format!("{pad}- {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}-\n"));
                        write_value(out, x, indent + 1);
                    }
                }
            }
        }
        _ => out.push_str(&format!("{pad}{}\n", scalar(v).unwrap())),
    }
}
