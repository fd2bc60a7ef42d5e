use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    Inconsistent,
    Unverified,
    Error,
}

impl Status {
    pub fn exit_code(self) -> u8 {
        match self {
            Status::Ok => 0,
            Status::Error => 1,
            Status::Inconsistent | Status::Unverified => 2,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CommandResult {
    pub status: Status,
    /// Command-specific JSON object; its fields are written next to `status`.
    pub payload: Value,
    pub elapsed_ms: u64,
    /// Human-readable lines for stderr.
    pub diagnostics: Vec<String>,
}

impl CommandResult {
    pub fn new(status: Status, payload: impl Serialize) -> Self {
        CommandResult {
            status,
            payload: serde_json::to_value(payload).expect("payload serializes"),
            elapsed_ms: 0,
            diagnostics: Vec::new(),
        }
    }

    pub fn ok(payload: impl Serialize) -> Self {
        Self::new(Status::Ok, payload)
    }

    pub fn error(err: anyhow::Error) -> Self {
        let mut r = Self::new(Status::Error, serde_json::json!({ "error": format!("{err:#}") }));
        r.diagnostics.push(format!("error: {err:#}"));
        r
    }

    pub fn with_diagnostic(mut self, line: impl Into<String>) -> Self {
        self.diagnostics.push(line.into());
        self
    }

    pub fn to_json(&self) -> Value {
        let mut map = match &self.payload {
            Value::Object(m) => m.clone(),
            Value::Null => Map::new(),
            other => {
                let mut m = Map::new();
                m.insert("result".into(), other.clone());
                m
            }
        };
        map.insert("status".into(), serde_json::to_value(self.status).unwrap());
        map.insert("elapsed_ms".into(), self.elapsed_ms.into());
        Value::Object(map)
    }
}
