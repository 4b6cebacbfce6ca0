use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Serialize;

pub enum Cell {
    Float(f64),
    Int(usize),
    Text(String),
    Bool(bool),
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

/// Ten significant digits, plain notation in `[1e-4, 1e10)` and scientific otherwise.
pub fn format_float(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{x:.9e}");
    let rounded: f64 = sci.parse().expect("formatted float parses");
    let a = rounded.abs();
    if (1e-4..1e10).contains(&a) {
        format!("{rounded}")
    } else {
        let (mantissa, exp) = sci.split_once('e').expect("scientific notation");
        let mantissa = mantissa.trim_end_matches('0').trim_end_matches('.');
        format!("{mantissa}e{exp}")
    }
}

fn render(cell: &Cell) -> String {
    match cell {
        Cell::Float(v) => format_float(*v),
        Cell::Int(v) => v.to_string(),
        Cell::Bool(v) => v.to_string(),
        Cell::Text(s) if s.contains([',', '"', '\n']) => format!("\"{}\"", s.replace('"', "\"\"")),
        Cell::Text(s) => s.clone(),
    }
}

pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn to_csv(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.iter().map(render).collect::<Vec<_>>().join(","));
            out.push('\n');
        }
        out
    }
}

pub enum Output {
    Csv(Table),
    Json(serde_json::Value),
}

impl Output {
    pub fn json<T: Serialize>(v: &T) -> Result<Self> {
        Ok(Output::Json(serde_json::to_value(v)?))
    }

    pub fn render(&self) -> Result<String> {
        Ok(match self {
            Output::Csv(t) => t.to_csv(),
            Output::Json(v) => {
                let mut s = serde_json::to_string_pretty(v)?;
                s.push('\n');
                s
            }
        })
    }
}

pub fn config_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".config.json");
    PathBuf::from(s)
}

pub fn write_file(path: &Path, contents: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    fs::write(path, contents).with_context(|| format!("writing {}", path.display()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_keep_ten_significant_digits() {
        assert_eq!(format_float(0.1 + 0.2), "0.3");
        assert_eq!(format_float(1.0 / 3.0), "0.3333333333");
        assert_eq!(format_float(-2.0 / 3.0), "-0.6666666667");
        assert_eq!(format_float(1.234567890123e-7), "1.23456789e-7");
        assert_eq!(format_float(1e-12), "1e-12");
        assert_eq!(format_float(0.0), "0");
        assert_eq!(format_float(12.0), "12");
    }

    #[test]
    fn csv_quotes_text_with_commas() {
        let t = Table { header: vec!["a", "b"], rows: vec![vec![Cell::from("x,y"), Cell::from(1usize)]] };
        assert_eq!(t.to_csv(), "a,b\n\"x,y\",1\n");
    }

    #[test]
    fn config_sits_next_to_output() {
        assert_eq!(config_path(Path::new("out/run.csv")), PathBuf::from("out/run.csv.config.json"));
    }
}
