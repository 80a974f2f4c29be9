use clap::ValueEnum;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum OutputFormat {
    /// Aligned columns for people, 5 decimals.
    #[default]
    Table,
    Csv,
    /// One JSON object per line, full precision.
    Jsonl,
}

/// A rendered human table: header row plus string cells.
pub struct HumanTable {
    headers: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl HumanTable {
    pub fn new(headers: &[&str]) -> Self {
        HumanTable {
            headers: headers.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn row(&mut self, cells: Vec<String>) {
        debug_assert_eq!(cells.len(), self.headers.len());
        self.rows.push(cells);
    }

    pub fn render(&self) -> String {
        let mut widths: Vec<usize> = self.headers.iter().map(|h| h.chars().count()).collect();
        for row in &self.rows {
            for (w, cell) in widths.iter_mut().zip(row) {
                *w = (*w).max(cell.chars().count());
            }
        }
        let line = |cells: &[String]| {
            let padded: Vec<String> = cells
                .iter()
                .zip(&widths)
                .map(|(c, w)| format!("{c:>w$}"))
                .collect();
            padded.join("  ").trim_end().to_string()
        };
        let mut out = line(&self.headers);
        out.push('\n');
        for row in &self.rows {
            out.push_str(&line(row));
            out.push('\n');
        }
        out
    }
}

/// Key/value listing for single-record reports.
pub fn key_values(pairs: &[(&str, String)]) -> String {
    let width = pairs
        .iter()
        .map(|(k, _)| k.chars().count())
        .max()
        .unwrap_or(0);
    pairs
        .iter()
        .map(|(k, v)| format!("{k:<width$}  {v}\n"))
        .collect()
}

pub fn fixed5(x: f64) -> String {
    format!("{x:.5}")
}

pub fn csv_rows<R: Serialize>(rows: &[R]) -> Result<String, String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| e.to_string())?;
    }
    let bytes = w.into_inner().map_err(|e| e.to_string())?;
    String::from_utf8(bytes).map_err(|e| e.to_string())
}

pub fn json_lines<R: Serialize>(rows: &[R]) -> Result<String, String> {
    let mut out = String::new();
    for r in rows {
        out.push_str(&serde_json::to_string(r).map_err(|e| e.to_string())?);
        out.push('\n');
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_aligns_right() {
        let mut t = HumanTable::new(&["q", "value"]);
        t.row(vec!["2".into(), "0.75000".into()]);
        t.row(vec!["10".into(), "1.0".into()]);
        assert_eq!(t.render(), " q    value\n 2  0.75000\n10      1.0\n");
    }

    #[test]
    fn csv_has_header() {
        #[derive(Serialize)]
        struct R {
            a: u32,
            b: f64,
        }
        let s = csv_rows(&[R { a: 1, b: 0.5 }]).unwrap();
        assert_eq!(s, "a,b\n1,0.5\n");
    }
}
