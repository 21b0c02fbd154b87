use std::io::{self, Write};

use super::CliError;

/// A rectangular table of finite reals with `# key = value` metadata lines.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ResultTable {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    pub metadata: Vec<(String, String)>,
}

impl ResultTable {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        ResultTable {
            columns: columns.into_iter().map(Into::into).collect(),
            ..Default::default()
        }
    }

    pub fn push_row(&mut self, row: Vec<f64>) -> Result<(), CliError> {
        if row.len() != self.columns.len() {
            return Err(CliError::Table(format!(
                "row has {} entries, table has {} columns",
                row.len(),
                self.columns.len()
            )));
        }
        if let Some(bad) = row.iter().position(|v| !v.is_finite()) {
            return Err(CliError::Table(format!(
                "non-finite entry in column '{}'",
                self.columns[bad]
            )));
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn meta(&mut self, key: &str, value: impl ToString) {
        self.metadata.push((key.to_string(), value.to_string()));
    }

    pub fn meta_value(&self, key: &str) -> Option<&str> {
        self.metadata
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let idx = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[idx]).collect())
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        for (k, v) in &self.metadata {
            writeln!(out, "# {k} = {v}")?;
        }
        writeln!(out, "{}", self.columns.join(","))?;
        let mut line = String::new();
        for row in &self.rows {
            line.clear();
            for (i, v) in row.iter().enumerate() {
                if i > 0 {
                    line.push(',');
                }
                line.push_str(&format_real(*v));
            }
            writeln!(out, "{line}")?;
        }
        out.flush()
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("CSV output is ASCII")
    }
}

/// 17 significant digits, enough to round-trip any `f64`.
pub fn format_real(v: f64) -> String {
    format!("{v:.16e}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_round_trips() {
        let mut t = ResultTable::new(["a", "b"]);
        t.meta("nu", 2.5);
        t.push_row(vec![0.1, 1.0 / 3.0]).unwrap();
        let text = t.to_csv_string();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "# nu = 2.5");
        assert_eq!(lines[1], "a,b");
        let back: Vec<f64> = lines[2].split(',').map(|s| s.parse().unwrap()).collect();
        assert_eq!(back, vec![0.1, 1.0 / 3.0]);
    }

    #[test]
    fn rejects_ragged_and_non_finite() {
        let mut t = ResultTable::new(["a", "b"]);
        assert!(t.push_row(vec![1.0]).is_err());
        assert!(t.push_row(vec![1.0, f64::NAN]).is_err());
        assert!(t.rows.is_empty());
    }
}
