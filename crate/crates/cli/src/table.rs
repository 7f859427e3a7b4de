use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::Path;

use crate::config::Format;
use crate::error::{LabError, Result};

/// Rectangular table of sweep results. `None` marks a metric that was not
/// computed (e.g. at an unstable point).
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ResultTable {
    pub metadata: Vec<(String, String)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Option<f64>>>,
}

impl ResultTable {
    pub fn new(columns: Vec<String>) -> Self {
        Self { columns, ..Default::default() }
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    pub fn meta(&self, key: &str) -> Option<&str> {
        self.metadata.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    /// Values of one column, `None` where empty.
    pub fn values(&self, name: &str) -> Option<Vec<Option<f64>>> {
        let c = self.column(name)?;
        Some(self.rows.iter().map(|r| r[c]).collect())
    }

    pub fn to_bytes(&self, format: Format) -> Vec<u8> {
        match format {
            Format::Csv => self.to_csv().into_bytes(),
            Format::Json => self.to_json().into_bytes(),
        }
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        for (k, v) in &self.metadata {
            let _ = writeln!(s, "# {k}: {}", v.replace('\n', " "));
        }
        let _ = writeln!(s, "{}", self.columns.join(","));
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|v| v.map(format_value).unwrap_or_default()).collect();
            let _ = writeln!(s, "{}", cells.join(","));
        }
        s
    }

    pub fn to_json(&self) -> String {
        let quote = |t: &str| serde_json::to_string(t).expect("strings always serialize");
        let mut s = String::from("{\n  \"metadata\": {");
        for (i, (k, v)) in self.metadata.iter().enumerate() {
            let sep = if i == 0 { "" } else { "," };
            let _ = write!(s, "{sep}\n    {}: {}", quote(k), quote(v));
        }
        s.push_str(if self.metadata.is_empty() { "},\n" } else { "\n  },\n" });
        let cols: Vec<String> = self.columns.iter().map(|c| quote(c)).collect();
        let _ = write!(s, "  \"columns\": [{}],\n  \"rows\": [", cols.join(", "));
        for (i, row) in self.rows.iter().enumerate() {
            let cells: Vec<String> = row.iter().map(|v| json_value(*v)).collect();
            let sep = if i == 0 { "" } else { "," };
            let _ = write!(s, "{sep}\n    [{}]", cells.join(", "));
        }
        s.push_str(if self.rows.is_empty() { "]\n}\n" } else { "\n  ]\n}\n" });
        s
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut table = Self::default();
        let mut header = false;
        for (n, line) in text.lines().enumerate() {
            if let Some(meta) = line.strip_prefix("# ") {
                let (k, v) = meta.split_once(": ").unwrap_or((meta, ""));
                table.metadata.push((k.to_string(), v.to_string()));
            } else if !header {
                table.columns = if line.is_empty() { Vec::new() } else { line.split(',').map(str::to_string).collect() };
                header = true;
            } else {
                let row = line.split(',').map(parse_value).collect::<Result<Vec<_>>>()?;
                if row.len() != table.columns.len() {
                    return Err(LabError::config(format!("line {}: expected {} cells", n + 1, table.columns.len())));
                }
                table.rows.push(row);
            }
        }
        Ok(table)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let bad = |m: &str| LabError::config(format!("bad table JSON: {m}"));
        let v: serde_json::Value = serde_json::from_str(text).map_err(|e| bad(&e.to_string()))?;
        let metadata = v["metadata"]
            .as_object()
            .ok_or_else(|| bad("metadata"))?
            .iter()
            .map(|(k, v)| Ok((k.clone(), v.as_str().ok_or_else(|| bad("metadata value"))?.to_string())))
            .collect::<Result<Vec<_>>>()?;
        let columns = v["columns"]
            .as_array()
            .ok_or_else(|| bad("columns"))?
            .iter()
            .map(|c| c.as_str().map(str::to_string).ok_or_else(|| bad("column name")))
            .collect::<Result<Vec<_>>>()?;
        let rows = v["rows"]
            .as_array()
            .ok_or_else(|| bad("rows"))?
            .iter()
            .map(|r| {
                r.as_array()
                    .ok_or_else(|| bad("row"))?
                    .iter()
                    .map(|cell| match cell {
                        serde_json::Value::Null => Ok(None),
                        serde_json::Value::String(t) => parse_value(t),
                        serde_json::Value::Number(x) => Ok(x.as_f64()),
                        _ => Err(bad("cell")),
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { metadata, columns, rows })
    }
}

/// 17 significant digits in scientific notation; infinities as `inf`/`-inf`.
pub fn format_value(v: f64) -> String {
    if v.is_nan() {
        String::new()
    } else if v.is_infinite() {
        if v > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{v:.16e}")
    }
}

fn json_value(v: Option<f64>) -> String {
    match v {
        None => "null".into(),
        Some(x) if x.is_nan() => "null".into(),
        Some(x) if x.is_infinite() => format!("\"{}\"", format_value(x)),
        Some(x) => format_value(x),
    }
}

pub fn parse_value(t: &str) -> Result<Option<f64>> {
    match t.trim() {
        "" => Ok(None),
        "inf" => Ok(Some(f64::INFINITY)),
        "-inf" => Ok(Some(f64::NEG_INFINITY)),
        s => s.parse::<f64>().map(Some).map_err(|_| LabError::config(format!("'{s}' is not a number"))),
    }
}

pub fn write_table(t: &ResultTable, path: &Path, format: Format) -> Result<()> {
    let io = |source| LabError::Io { path: path.display().to_string(), source };
    let mut f = fs::File::create(path).map_err(io)?;
    f.write_all(&t.to_bytes(format)).map_err(io)?;
    f.flush().map_err(io)
}

pub fn read_table(path: &Path) -> Result<ResultTable> {
    let text = fs::read_to_string(path).map_err(|source| LabError::Io { path: path.display().to_string(), source })?;
    match Format::from_path(path) {
        Some(Format::Json) => ResultTable::from_json(&text),
        _ => ResultTable::from_csv(&text),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> ResultTable {
        ResultTable {
            metadata: vec![("preset".into(), "demo".into()), ("note".into(), "a \"quoted\" value".into())],
            columns: vec!["c_g".into(), "q_lb".into(), "n_e".into()],
            rows: vec![
                vec![Some(0.1), Some(f64::INFINITY), None],
                vec![Some(1.0 / 3.0), Some(2.0000000000000004), Some(1e-300)],
            ],
        }
    }

    #[test]
    fn formatting() {
        assert_eq!(format_value(1.0), "1.0000000000000000e0");
        assert_eq!(format_value(-0.1), "-1.0000000000000001e-1");
        assert_eq!(format_value(f64::INFINITY), "inf");
        assert_eq!(format_value(f64::NEG_INFINITY), "-inf");
        assert_eq!(format_value(f64::NAN), "");
    }

    #[test]
    fn empty_table_is_header_and_metadata() {
        let t = ResultTable {
            metadata: vec![("preset".into(), "x".into())],
            columns: vec!["a".into(), "b".into()],
            rows: vec![],
        };
        assert_eq!(t.to_csv(), "# preset: x\na,b\n");
        assert_eq!(ResultTable::from_csv(&t.to_csv()).unwrap(), t);
        assert_eq!(ResultTable::from_json(&t.to_json()).unwrap(), t);
    }

    #[test]
    fn csv_round_trip_is_exact() {
        let t = sample();
        let csv = t.to_csv();
        assert!(csv.contains(",inf,"));
        assert_eq!(ResultTable::from_csv(&csv).unwrap(), t);
    }

    #[test]
    fn json_round_trip_is_exact() {
        let t = sample();
        let back = ResultTable::from_json(&t.to_json()).unwrap();
        assert_eq!(back.columns, t.columns);
        assert_eq!(back.rows, t.rows);
        assert_eq!(back.meta("note"), Some("a \"quoted\" value"));
    }

    #[test]
    fn ragged_csv_is_rejected() {
        assert!(ResultTable::from_csv("a,b\n1,2,3\n").is_err());
        assert!(ResultTable::from_csv("a\nxyz\n").is_err());
    }
}
