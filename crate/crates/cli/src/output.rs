use serde::Serialize;
use serde_json::Value;

use crate::config::Format;

/// Rounds to 12 significant digits.
pub fn round12(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.11e}").parse().unwrap()
}

pub fn num(x: f64) -> String {
    round12(x).to_string()
}

fn round_value(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            if let Some(x) = n.as_f64() {
                *v = serde_json::Number::from_f64(round12(x)).map_or(Value::Null, Value::Number);
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_value),
        Value::Object(map) => map.values_mut().for_each(round_value),
        _ => {}
    }
}

/// One result in all three renderings.
pub struct Report {
    pub json: Value,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
    pub plain: String,
}

impl Report {
    pub fn new(data: &impl Serialize, header: Vec<&'static str>, rows: Vec<Vec<String>>, plain: String) -> Report {
        let mut json = serde_json::to_value(data).expect("results serialize");
        round_value(&mut json);
        Report {
            json,
            header,
            rows,
            plain,
        }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.json).unwrap();
                s.push('\n');
                s
            }
            Format::Csv => {
                let mut s = self.header.join(",");
                s.push('\n');
                for row in &self.rows {
                    debug_assert_eq!(row.len(), self.header.len());
                    s.push_str(&row.join(","));
                    s.push('\n');
                }
                s
            }
            Format::Plain => {
                let mut s = self.plain.clone();
                if !s.ends_with('\n') {
                    s.push('\n');
                }
                s
            }
        }
    }
}
