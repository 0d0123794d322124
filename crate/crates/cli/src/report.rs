use std::fmt::{Display, Write};

use serde::Serialize;
use serde_json::Value;
use unipotent_core::matrix::Matrix;
use unipotent_core::tower::Tower;
use unipotent_core::Ring;

use crate::config::OutputFormat;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    /// The procedure succeeded and every check came out true.
    Ok,
    /// The procedure succeeded with a negative answer: not integrable, or a
    /// check came out false.
    Negative,
}

/// What every command prints. All values are strings in the input grammars,
/// so each can be fed back to the parsers.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: &'static str,
    pub status: Status,
    pub inputs: Value,
    pub outputs: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Value>,
    pub elapsed_ms: u64,
}

impl Report {
    pub fn new(command: &'static str, inputs: Value, outputs: Value) -> Report {
        Report { command, status: Status::Ok, inputs, outputs, certificate: None, elapsed_ms: 0 }
    }

    /// Attaches named checks; the status turns negative if any failed.
    pub fn with_certificate(mut self, certificate: Value) -> Report {
        if !all_true(&certificate) {
            self.status = Status::Negative;
        }
        self.certificate = Some(certificate);
        self
    }

    pub fn with_status(mut self, status: Status) -> Report {
        self.status = status;
        self
    }

    pub fn exit_code(&self) -> i32 {
        match self.status {
            Status::Ok => 0,
            Status::Negative => 1,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Json => self.to_json(),
            OutputFormat::Text => {
                let v = serde_json::to_value(self).expect("reports serialize");
                let mut out = String::new();
                text(&v, 0, &mut out);
                out.trim_end().to_string()
            }
        }
    }
}

fn all_true(v: &Value) -> bool {
    match v {
        Value::Bool(b) => *b,
        Value::Array(xs) => xs.iter().all(all_true),
        Value::Object(m) => m.values().all(all_true),
        _ => true,
    }
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::String(s) => Some(s.clone()),
        Value::Null => Some("-".into()),
        Value::Bool(_) | Value::Number(_) => Some(v.to_string()),
        Value::Array(xs) if xs.iter().all(|x| !x.is_array() && !x.is_object()) => {
            Some(format!("[{}]", xs.iter().filter_map(scalar).collect::<Vec<_>>().join(", ")))
        }
        _ => None,
    }
}

fn text(v: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                match scalar(x) {
                    Some(s) => writeln!(out, "{pad}{k}: {s}").unwrap(),
                    None => {
                        writeln!(out, "{pad}{k}:").unwrap();
                        text(x, indent + 1, out);
                    }
                }
            }
        }
        Value::Array(xs) => {
            for x in xs {
                match scalar(x) {
                    Some(s) => writeln!(out, "{pad}{s}").unwrap(),
                    None => {
                        writeln!(out, "{pad}-").unwrap();
                        text(x, indent + 1, out);
                    }
                }
            }
        }
        other => writeln!(out, "{pad}{}", scalar(other).unwrap_or_default()).unwrap(),
    }
}

pub fn strings<T: Display>(xs: &[T]) -> Vec<String> {
    xs.iter().map(ToString::to_string).collect()
}

/// Row-major entries.
pub fn matrix<T: Ring + Display>(m: &Matrix<T>) -> Vec<Vec<String>> {
    m.to_rows().iter().map(|r| strings(r)).collect()
}

/// `[name, definition]` for each generator, in order.
pub fn tower(t: &Tower) -> Vec<[String; 2]> {
    t.generators().iter().map(|g| [g.name().to_string(), g.definition()]).collect()
}
