//! Column tables rendered as CSV or as a JSON object of column arrays.

use serde_json::{Map, Value};

pub enum Column {
    Real(Vec<f64>),
    Text(Vec<String>),
    Flag(Vec<bool>),
    Count(Vec<usize>),
}

impl Column {
    fn len(&self) -> usize {
        match self {
            Column::Real(v) => v.len(),
            Column::Text(v) => v.len(),
            Column::Flag(v) => v.len(),
            Column::Count(v) => v.len(),
        }
    }

    fn cell(&self, i: usize) -> String {
        match self {
            Column::Real(v) => format_real(v[i]),
            Column::Text(v) => v[i].clone(),
            Column::Flag(v) => v[i].to_string(),
            Column::Count(v) => v[i].to_string(),
        }
    }

    fn to_json(&self) -> Value {
        match self {
            Column::Real(v) => v.iter().copied().map(Value::from).collect(),
            Column::Text(v) => v.iter().cloned().map(Value::from).collect(),
            Column::Flag(v) => v.iter().copied().map(Value::from).collect(),
            Column::Count(v) => v.iter().copied().map(Value::from).collect(),
        }
    }
}

/// Shortest decimal string that parses back to the same `f64`.
pub fn format_real(x: f64) -> String {
    format!("{x:?}")
}

#[derive(Default)]
pub struct Table {
    meta: Vec<(String, String)>,
    columns: Vec<(&'static str, Column)>,
}

impl Table {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn meta(mut self, key: &str, value: impl Into<String>) -> Self {
        self.meta.push((key.to_string(), value.into()));
        self
    }

    pub fn column(mut self, name: &'static str, col: Column) -> Self {
        debug_assert!(self
            .columns
            .first()
            .is_none_or(|(_, c)| c.len() == col.len()));
        self.columns.push((name, col));
        self
    }

    fn rows(&self) -> usize {
        self.columns.first().map_or(0, |(_, c)| c.len())
    }

    /// `# key: value` comment lines, a header, then one record per row.
    pub fn to_csv(&self) -> Result<String, csv::Error> {
        let mut out = String::new();
        for (k, v) in &self.meta {
            out.push_str(&format!("# {k}: {v}\n"));
        }
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(self.columns.iter().map(|(name, _)| *name))?;
        for i in 0..self.rows() {
            w.write_record(self.columns.iter().map(|(_, c)| c.cell(i)))?;
        }
        let bytes = w.into_inner().map_err(|e| e.into_error())?;
        out.push_str(&String::from_utf8_lossy(&bytes));
        Ok(out)
    }

    /// Metadata under `meta` (when present), then one array per column.
    pub fn to_json(&self) -> Value {
        let mut obj = Map::new();
        if !self.meta.is_empty() {
            let meta = self
                .meta
                .iter()
                .map(|(k, v)| (k.clone(), Value::from(v.as_str())))
                .collect();
            obj.insert("meta".into(), Value::Object(meta));
        }
        for (name, col) in &self.columns {
            obj.insert((*name).into(), col.to_json());
        }
        Value::Object(obj)
    }
}
