//! Deterministic CSV and gnuplot emission.

use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};

/// Round-trip-exact decimal rendering (17 significant digits).
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// A CSV sink that goes to a file when a path is given, else to stdout.
pub struct CsvSink {
    out: Box<dyn Write>,
}

impl CsvSink {
    pub fn create(path: Option<&str>) -> Result<Self> {
        let out: Box<dyn Write> = match path {
            Some(p) => Box::new(
                std::fs::File::create(p).with_context(|| format!("creating {p}"))?,
            ),
            None => Box::new(std::io::stdout().lock()),
        };
        Ok(CsvSink { out })
    }

    pub fn header(&mut self, columns: &[&str]) -> Result<()> {
        writeln!(self.out, "{}", columns.join(","))?;
        Ok(())
    }

    pub fn row(&mut self, values: &[f64]) -> Result<()> {
        let rendered: Vec<String> = values.iter().map(|v| fmt_f64(*v)).collect();
        writeln!(self.out, "{}", rendered.join(","))?;
        Ok(())
    }

    /// Trailer written when a sweep aborts mid-way; the rows so far stay valid.
    pub fn error_trailer(&mut self, message: &str) -> Result<()> {
        writeln!(self.out, "# error: {message}")?;
        self.out.flush()?;
        Ok(())
    }

    pub fn finish(mut self) -> Result<()> {
        self.out.flush()?;
        Ok(())
    }
}

/// Emit a gnuplot script that plots the named columns of a CSV file.
pub fn write_plot_script(
    script_path: &Path,
    csv_path: &str,
    x_column: (usize, &str),
    y_columns: &[(usize, &str)],
    title: &str,
) -> Result<()> {
    let mut s = String::new();
    s.push_str("set datafile separator ','\n");
    s.push_str("set key autotitle columnhead outside\n");
    s.push_str(&format!("set title '{title}'\n"));
    s.push_str(&format!("set xlabel '{}'\n", x_column.1));
    let plots: Vec<String> = y_columns
        .iter()
        .map(|(idx, name)| {
            format!("'{csv_path}' using {}:{} with lines title '{name}'", x_column.0, idx)
        })
        .collect();
    s.push_str(&format!("plot {}\n", plots.join(", \\\n     ")));
    std::fs::write(script_path, s)
        .with_context(|| format!("writing plot script {}", script_path.display()))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formatting_round_trips() {
        for x in [0.3f64, 1.0 / 3.0, 255.0f64.sqrt() / 8.0, 1e-300, -4.0e-4] {
            let s = fmt_f64(x);
            let back: f64 = s.parse().unwrap();
            assert_eq!(back, x, "{s}");
        }
    }
}
