use serde::Serialize;
use serde_json::Value;

#[derive(Clone, Copy)]
pub enum Output {
    Json,
    Table,
}

#[derive(Serialize)]
pub struct Report {
    pub schema: u32,
    pub command: &'static str,
    /// The formula the command applied.
    pub formula: &'static str,
    pub inputs: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub holds: Option<bool>,
    pub result: Value,
}

impl Report {
    pub fn new(command: &'static str) -> Self {
        Report { schema: 1, command, formula: "", inputs: Value::Null, holds: None, result: Value::Null }
    }

    pub fn formula(mut self, f: &'static str) -> Self {
        self.formula = f;
        self
    }

    pub fn input(mut self, v: Value) -> Self {
        self.inputs = v;
        self
    }

    pub fn holds(mut self, h: bool) -> Self {
        self.holds = Some(h);
        self
    }

    pub fn result(mut self, v: Value) -> Self {
        self.result = v;
        self
    }

    pub fn render(&self, output: Output) -> String {
        match output {
            Output::Json => serde_json::to_string_pretty(self).expect("report serializes"),
            Output::Table => {
                let mut rows = vec![
                    ("command".to_string(), self.command.to_string()),
                    ("formula".to_string(), self.formula.to_string()),
                ];
                if let Some(h) = self.holds {
                    rows.push(("holds".into(), h.to_string()));
                }
                flatten("", &self.result, &mut rows);
                let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
                rows.iter().map(|(k, v)| format!("{k:width$}  {v}")).collect::<Vec<_>>().join("\n")
            }
        }
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    let key = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
    match v {
        Value::Object(map) => {
            for (k, v) in map {
                flatten(&key(k), v, out);
            }
        }
        Value::Array(items) if items.iter().any(|i| i.is_object() || i.is_array()) => {
            for (i, v) in items.iter().enumerate() {
                flatten(&key(&i.to_string()), v, out);
            }
        }
        Value::String(s) => out.push((prefix.to_string(), s.clone())),
        other => out.push((prefix.to_string(), other.to_string())),
    }
}
