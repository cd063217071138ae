use std::io::{self, Write};

use clap::ValueEnum;
use serde::Serialize;
use serde_json::{Map, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

/// One output record: a JSON object, its CSV rows and a text rendering.
pub struct Record {
    pub json: Value,
    pub text: String,
    /// Explicit CSV rows; `None` flattens the JSON object into one row.
    pub rows: Option<Vec<Vec<(String, String)>>>,
}

impl Record {
    /// Serializes `value` and prepends the `schema` tag.
    pub fn new(schema: &str, value: &impl Serialize, text: String) -> Self {
        let mut obj = Map::new();
        obj.insert("schema".into(), Value::String(schema.into()));
        match serde_json::to_value(value).expect("records serialize") {
            Value::Object(m) => obj.extend(m),
            other => {
                obj.insert("value".into(), other);
            }
        }
        Record {
            json: Value::Object(obj),
            text,
            rows: None,
        }
    }

    pub fn with_rows(mut self, rows: Vec<Vec<(String, String)>>) -> Self {
        self.rows = Some(rows);
        self
    }

    fn csv_rows(&self) -> Vec<Vec<(String, String)>> {
        if let Some(rows) = &self.rows {
            return rows.clone();
        }
        let Value::Object(obj) = &self.json else {
            return vec![vec![("value".into(), cell(&self.json))]];
        };
        vec![obj.iter().map(|(k, v)| (k.clone(), cell(v))).collect()]
    }
}

/// CSV cell: bare strings, JSON for anything structured.
pub fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

pub fn write_records(records: &[Record], format: Format, out: &mut impl Write) -> io::Result<()> {
    match format {
        Format::Json => {
            for r in records {
                serde_json::to_writer(&mut *out, &r.json)?;
                out.write_all(b"\n")?;
            }
        }
        Format::Text => {
            for r in records {
                out.write_all(r.text.as_bytes())?;
                if !r.text.ends_with('\n') {
                    out.write_all(b"\n")?;
                }
            }
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut *out);
            let mut header: Option<Vec<String>> = None;
            for row in records.iter().flat_map(Record::csv_rows) {
                let keys: Vec<String> = row.iter().map(|(k, _)| k.clone()).collect();
                if header.as_ref() != Some(&keys) {
                    w.write_record(&keys)?;
                    header = Some(keys);
                }
                w.write_record(row.iter().map(|(_, v)| v))?;
            }
            w.flush()?;
        }
    }
    out.flush()
}
