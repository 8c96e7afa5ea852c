//! Result tables and their round-trip-exact CSV and JSON forms.

use std::io::{Read, Write};

use serde_json::{json, Value};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum TableError {
    #[error("row has {got} cells, table has {want} columns")]
    Width { got: usize, want: usize },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

/// Marker written for quantities that are undefined at a row (CSV only).
pub const UNDEFINED: &str = "undefined";

/// 17 significant digits in scientific notation; parses back bit-exactly.
///
/// Non-finite values print as `NaN`, `inf` and `-inf`, which `f64::from_str`
/// also accepts.
pub fn format_float(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        x.to_string()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Number(f64),
    /// Written as `undefined` in CSV and `null` in JSON.
    Undefined,
    Text(String),
}

impl Cell {
    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Self::Number(x) => Some(*x),
            _ => None,
        }
    }

    fn csv_field(&self) -> String {
        match self {
            Self::Number(x) => format_float(*x),
            Self::Undefined => UNDEFINED.to_owned(),
            Self::Text(t) => t.clone(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Self::Number(x) if x.is_finite() => json!(x),
            Self::Number(_) | Self::Undefined => Value::Null,
            Self::Text(t) => json!(t),
        }
    }

    fn parse(field: &str) -> Self {
        if field == UNDEFINED {
            return Self::Undefined;
        }
        match field.parse::<f64>() {
            Ok(x) => Self::Number(x),
            Err(_) => Self::Text(field.to_owned()),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Self::Number(x)
    }
}

impl From<Option<f64>> for Cell {
    fn from(x: Option<f64>) -> Self {
        x.map_or(Self::Undefined, Self::Number)
    }
}

/// Column-named rows in a fixed order.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    columns: Vec<String>,
    rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: Vec<String>) -> Self {
        Self {
            columns,
            rows: Vec::new(),
        }
    }

    pub fn columns(&self) -> &[String] {
        &self.columns
    }

    pub fn rows(&self) -> &[Vec<Cell>] {
        &self.rows
    }

    pub fn push_row(&mut self, row: Vec<Cell>) -> Result<(), TableError> {
        if row.len() != self.columns.len() {
            return Err(TableError::Width {
                got: row.len(),
                want: self.columns.len(),
            });
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// Numeric column by name; undefined and text cells are `None`.
    pub fn column(&self, name: &str) -> Option<Vec<Option<f64>>> {
        let j = self.column_index(name)?;
        Some(self.rows.iter().map(|r| r[j].as_f64()).collect())
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<(), TableError> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::csv_field))?;
        }
        w.flush().map_err(csv::Error::from)?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("csv output is UTF-8")
    }

    pub fn read_csv<R: Read>(reader: R) -> Result<Self, TableError> {
        let mut r = csv::Reader::from_reader(reader);
        let columns = r.headers()?.iter().map(str::to_owned).collect();
        let mut table = Self::new(columns);
        for record in r.records() {
            table.push_row(record?.iter().map(Cell::parse).collect())?;
        }
        Ok(table)
    }

    /// `{"columns": [...], "rows": [[...], ...]}`.
    pub fn to_json(&self) -> Value {
        json!({
            "columns": self.columns,
            "rows": self.rows.iter().map(|r| r.iter().map(Cell::json).collect::<Vec<_>>()).collect::<Vec<_>>(),
        })
    }

    pub fn write_json<W: Write>(&self, writer: W) -> Result<(), TableError> {
        serde_json::to_writer_pretty(writer, &self.to_json())?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn csv_round_trip_is_exact() {
        let mut t = Table::new(vec!["x_Hz".into(), "n_add".into(), "label".into()]);
        t.push_row(vec![0.1.into(), None.into(), Cell::Text("a b".into())])
            .unwrap();
        t.push_row(vec![
            (1.0 / 3.0).into(),
            Some(2.5e-300).into(),
            Cell::Text("c".into()),
        ])
        .unwrap();
        let back = Table::read_csv(t.to_csv_string().as_bytes()).unwrap();
        assert_eq!(back, t);
        assert!(t.push_row(vec![]).is_err());
        let j = t.to_json();
        assert!(j["rows"][0][1].is_null());
        assert_eq!(
            j["rows"][1][0].as_f64().unwrap().to_bits(),
            (1.0f64 / 3.0).to_bits()
        );
    }

    #[test]
    fn specials() {
        assert_eq!(format_float(0.0), "0.0000000000000000e0");
        assert_eq!(
            format_float(f64::INFINITY).parse::<f64>().unwrap(),
            f64::INFINITY
        );
        assert!(format_float(f64::NAN).parse::<f64>().unwrap().is_nan());
    }

    proptest! {
        #[test]
        fn round_trip(bits in any::<u64>()) {
            let x = f64::from_bits(bits);
            prop_assume!(x.is_finite());
            prop_assert_eq!(format_float(x).parse::<f64>().unwrap().to_bits(), x.to_bits());
        }
    }
}
