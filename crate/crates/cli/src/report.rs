use std::time::Duration;

use serde_json::{Map, Value};

/// A run report: ordered `key: value` fields plus free-form body lines.
/// Human output prints the fields then the body; `--json` prints one
/// object with the fields and the body under `body`.
#[derive(Default)]
pub struct Report {
    fields: Vec<(String, Value)>,
    body: Vec<String>,
    extra: Map<String, Value>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        let mut r = Report::default();
        r.field("command", command);
        r
    }

    pub fn field(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        let value = value.into();
        match self.fields.iter_mut().find(|(k, _)| k == key) {
            Some(slot) => slot.1 = value,
            None => self.fields.push((key.to_string(), value)),
        }
        self
    }

    pub fn line(&mut self, text: impl Into<String>) -> &mut Self {
        self.body.push(text.into());
        self
    }

    /// Structured data only shown with `--json`.
    pub fn json_only(&mut self, key: &str, value: Value) -> &mut Self {
        self.extra.insert(key.to_string(), value);
        self
    }

    pub fn timing(&mut self, took: Duration) -> &mut Self {
        self.field("time_ms", (took.as_secs_f64() * 1000.0 * 1000.0).round() / 1000.0)
    }

    pub fn render(&self, json: bool) -> String {
        if json {
            let mut obj = Map::new();
            for (k, v) in &self.fields {
                obj.insert(k.clone(), v.clone());
            }
            for (k, v) in &self.extra {
                obj.insert(k.clone(), v.clone());
            }
            if !self.body.is_empty() {
                obj.insert("body".into(), Value::from(self.body.clone()));
            }
            let mut s = serde_json::to_string_pretty(&Value::Object(obj)).expect("serializable");
            s.push('\n');
            s
        } else {
            let mut s = String::new();
            for (k, v) in &self.fields {
                let v = match v {
                    Value::String(x) => x.clone(),
                    other => other.to_string(),
                };
                s.push_str(&format!("{k}: {v}\n"));
            }
            for l in &self.body {
                s.push_str(l);
                s.push('\n');
            }
            s
        }
    }
}
