//! Rendering of flat key/value reports as JSON, CSV or text. Numbers use 17
//! significant digits everywhere.

use projconst::numeric::format_g17;
use serde::Serialize;
use serde_json::value::RawValue;

use crate::Format;

pub enum Value {
    Num(f64),
    Bool(bool),
    Str(String),
    Null,
    /// Pre-rendered JSON; flattened to compact text in CSV and text output.
    Json(String),
}

impl Value {
    pub fn opt(x: Option<f64>) -> Value {
        x.map_or(Value::Null, Value::Num)
    }

    pub fn json<T: Serialize>(x: &T) -> Value {
        Value::Json(serde_json::to_string(x).expect("serializable value"))
    }

    fn json_text(&self) -> String {
        match self {
            Value::Num(x) => format_g17(*x),
            Value::Bool(b) => b.to_string(),
            Value::Str(s) => serde_json::to_string(s).expect("string"),
            Value::Null => "null".into(),
            Value::Json(s) => s.clone(),
        }
    }

    fn plain_text(&self) -> String {
        match self {
            Value::Str(s) => s.clone(),
            Value::Null => String::new(),
            other => other.json_text(),
        }
    }
}

pub type Report = Vec<(&'static str, Value)>;

pub fn render(report: &Report, format: Format) -> String {
    match format {
        Format::Json => {
            let body: Vec<String> = report
                .iter()
                .map(|(k, v)| format!("{}:{}", serde_json::to_string(k).expect("key"), v.json_text()))
                .collect();
            let raw = RawValue::from_string(format!("{{{}}}", body.join(","))).expect("valid JSON");
            format!("{}\n", raw.get())
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(report.iter().map(|(k, _)| *k)).expect("in-memory write");
            w.write_record(report.iter().map(|(_, v)| v.plain_text())).expect("in-memory write");
            String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
        }
        Format::Text => {
            let width = report.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
            report.iter().map(|(k, v)| format!("{k:<width$}  {}\n", v.plain_text())).collect()
        }
    }
}
