//! Run configuration: defaults, `key = value` config files, and the
//! precedence CLI flag > config file > default.

use std::collections::BTreeMap;
use std::path::Path;

use anyhow::{bail, Context, Result};

/// Grid spacing of the radial sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spacing {
    Linear,
    Log,
}

impl std::str::FromStr for Spacing {
    type Err = anyhow::Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "linear" => Ok(Spacing::Linear),
            "log" => Ok(Spacing::Log),
            _ => bail!("spacing must be 'linear' or 'log', got '{s}'"),
        }
    }
}

/// Output format of report payloads.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = anyhow::Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => bail!("format must be 'csv' or 'json', got '{s}'"),
        }
    }
}

/// Resolved run configuration shared by the subcommands.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub alpha: Option<f64>,
    pub alpha_grid: Vec<f64>,
    pub r_min: f64,
    pub r_max: f64,
    pub r_samples: usize,
    pub r_spacing: Spacing,
    pub rel_tol: f64,
    pub epsilon: f64,
    pub t_end: f64,
    pub output: Option<String>,
    pub format: Format,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            alpha: None,
            alpha_grid: vec![0.0, 0.3, 0.6, 0.9, 0.99, 1.0],
            r_min: 1.001,
            r_max: 50.0,
            r_samples: 200,
            r_spacing: Spacing::Log,
            rel_tol: 1e-10,
            epsilon: 1e-4,
            t_end: 100.0,
            output: None,
            format: Format::Csv,
        }
    }
}

/// Parse a line-based `key = value` file; '#' starts a comment.
pub fn parse_config_file(path: &Path) -> Result<BTreeMap<String, String>> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading config file {}", path.display()))?;
    let mut map = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            bail!("{}:{}: expected 'key = value'", path.display(), lineno + 1);
        };
        map.insert(key.trim().to_string(), value.trim().to_string());
    }
    Ok(map)
}

impl RunConfig {
    /// Apply config-file values over the defaults. CLI flags are applied by
    /// the caller afterwards, which gives them the final say.
    pub fn apply_file(&mut self, map: &BTreeMap<String, String>) -> Result<()> {
        for (key, value) in map {
            match key.as_str() {
                "alpha" => self.alpha = Some(value.parse()?),
                "alpha_grid" => {
                    self.alpha_grid = value
                        .split(',')
                        .map(|v| v.trim().parse::<f64>().map_err(Into::into))
                        .collect::<Result<Vec<_>>>()?
                }
                "r_min" => self.r_min = value.parse()?,
                "r_max" => self.r_max = value.parse()?,
                "r_samples" => self.r_samples = value.parse()?,
                "r_spacing" => self.r_spacing = value.parse()?,
                "rel_tol" => self.rel_tol = value.parse()?,
                "epsilon" => self.epsilon = value.parse()?,
                "t_end" => self.t_end = value.parse()?,
                "output" => self.output = Some(value.clone()),
                "format" => self.format = value.parse()?,
                _ => bail!("unknown config key '{key}'"),
            }
        }
        Ok(())
    }

    /// The radial grid implied by the range settings.
    pub fn r_grid(&self) -> Vec<f64> {
        grid(self.r_min, self.r_max, self.r_samples, self.r_spacing)
    }

    /// Either the single requested alpha or the whole grid.
    pub fn alphas(&self) -> Vec<f64> {
        match self.alpha {
            Some(a) => vec![a],
            None => self.alpha_grid.clone(),
        }
    }
}

pub fn grid(min: f64, max: f64, samples: usize, spacing: Spacing) -> Vec<f64> {
    assert!(samples >= 2 && max > min && min > 0.0);
    let n = samples as f64 - 1.0;
    (0..samples)
        .map(|i| match spacing {
            Spacing::Linear => min + (max - min) * i as f64 / n,
            Spacing::Log => (min.ln() + (max.ln() - min.ln()) * i as f64 / n).exp(),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_endpoints_are_exactly_representable() {
        let g = grid(1.001, 50.0, 200, Spacing::Log);
        assert_eq!(g.len(), 200);
        assert!((g[0] - 1.001).abs() < 1e-12);
        assert!((g[199] - 50.0).abs() < 1e-9);
        assert!(g.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn config_file_round_trip() {
        let dir = std::env::temp_dir().join("spincone-config-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("run.conf");
        std::fs::write(&path, "rel_tol = 1e-8  # tighter\nalpha_grid = 0, 0.5\n").unwrap();
        let map = parse_config_file(&path).unwrap();
        let mut cfg = RunConfig::default();
        cfg.apply_file(&map).unwrap();
        assert_eq!(cfg.rel_tol, 1e-8);
        assert_eq!(cfg.alpha_grid, vec![0.0, 0.5]);
        // Untouched keys keep their defaults.
        assert_eq!(cfg.r_samples, 200);
    }
}
