//! Machine-readable output tables: CSV with `#` metadata header lines, or a
//! JSON document carrying the same columns plus metadata.

use std::fmt::Write as _;

/// One output column; integers keep their own formatting so index columns
/// stay readable.
pub enum Column {
    Int(String, Vec<i64>),
    Real(String, Vec<f64>),
}

impl Column {
    pub fn name(&self) -> &str {
        match self {
            Column::Int(n, _) => n,
            Column::Real(n, _) => n,
        }
    }

    pub fn len(&self) -> usize {
        match self {
            Column::Int(_, v) => v.len(),
            Column::Real(_, v) => v.len(),
        }
    }

    fn cell(&self, i: usize) -> String {
        match self {
            Column::Int(_, v) => v[i].to_string(),
            Column::Real(_, v) => format_real(v[i]),
        }
    }
}

/// Reals are printed with 17 significant digits: enough to reproduce the
/// f64 bit pattern on re-parse.
pub fn format_real(v: f64) -> String {
    format!("{v:.16e}")
}

pub struct OutputTable {
    pub metadata: Vec<(String, String)>,
    pub columns: Vec<Column>,
}

impl OutputTable {
    pub fn new(metadata: Vec<(String, String)>, columns: Vec<Column>) -> OutputTable {
        let rows = columns.first().map(Column::len).unwrap_or(0);
        assert!(
            columns.iter().all(|c| c.len() == rows),
            "all columns must have equal length"
        );
        OutputTable { metadata, columns }
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.metadata {
            let _ = writeln!(out, "# {k}: {v}");
        }
        let names: Vec<&str> = self.columns.iter().map(Column::name).collect();
        let _ = writeln!(out, "{}", names.join(","));
        let rows = self.columns.first().map(Column::len).unwrap_or(0);
        for i in 0..rows {
            let cells: Vec<String> = self.columns.iter().map(|c| c.cell(i)).collect();
            let _ = writeln!(out, "{}", cells.join(","));
        }
        out
    }

    pub fn to_json(&self) -> String {
        let metadata: serde_json::Map<String, serde_json::Value> = self
            .metadata
            .iter()
            .map(|(k, v)| (k.clone(), serde_json::Value::String(v.clone())))
            .collect();
        let mut data = serde_json::Map::new();
        for c in &self.columns {
            let arr = match c {
                Column::Int(_, v) => serde_json::json!(v),
                Column::Real(_, v) => serde_json::json!(v),
            };
            data.insert(c.name().to_string(), arr);
        }
        let doc = serde_json::json!({
            "metadata": metadata,
            "columns": self.columns.iter().map(Column::name).collect::<Vec<_>>(),
            "data": data,
        });
        serde_json::to_string_pretty(&doc).expect("table serialization")
    }
}
