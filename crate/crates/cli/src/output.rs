use dessins_core::{dessin_to_json, dessin_to_text, Dessin};
use serde_json::Value;

use crate::Format;

/// A command's result before it is rendered.
pub enum Output {
    Document(Value),
    Dessin(Dessin),
    /// One JSON value per line.
    Lines(Vec<Value>),
    /// Printed verbatim in both formats.
    Raw(String),
}

impl Output {
    pub fn render(&self, format: Format) -> String {
        match (self, format) {
            (Output::Document(v), Format::Json) => {
                format!("{}\n", serde_json::to_string_pretty(v).expect("value serializes"))
            }
            (Output::Document(v), Format::Text) => text_document(v),
            (Output::Dessin(d), Format::Json) => format!("{}\n", dessin_to_json(d)),
            (Output::Dessin(d), Format::Text) => dessin_to_text(d),
            (Output::Lines(vs), Format::Json) => vs.iter().map(|v| format!("{v}\n")).collect(),
            (Output::Lines(vs), Format::Text) => vs.iter().map(text_document).collect::<Vec<_>>().join("\n"),
            (Output::Raw(s), _) => s.clone(),
        }
    }
}

/// `key: value` lines for the top level of an object, compact JSON below.
fn text_document(v: &Value) -> String {
    match v {
        Value::Object(map) => map
            .iter()
            .map(|(k, v)| match v {
                Value::String(s) => format!("{k}: {s}\n"),
                other => format!("{k}: {other}\n"),
            })
            .collect(),
        other => format!("{other}\n"),
    }
}
