//! `key = value` run configuration with command-line overrides.

use std::fs;
use std::path::{Path, PathBuf};

use tam_core::ensemble::Variant;
use tam_core::{Error, Result};

/// Every run setting, each optional so that file and command-line layers can
/// be merged before defaults apply.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunOverrides {
    pub input: Option<PathBuf>,
    pub runs: Option<usize>,
    pub depth: Option<usize>,
    pub epochs: Option<usize>,
    pub learning_rate: Option<f64>,
    pub lambda: Option<f64>,
    pub hidden_dims: Option<[usize; 2]>,
    pub seeds: Option<Vec<u64>>,
    pub variant: Option<Variant>,
    pub out: Option<PathBuf>,
    pub jobs: Option<usize>,
}

/// Fully resolved run settings.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub input: PathBuf,
    pub runs: usize,
    pub depth: usize,
    pub epochs: usize,
    pub learning_rate: f64,
    /// `None` picks 1 for graphs with anomaly-type tags, 0 otherwise.
    pub lambda: Option<f64>,
    pub hidden_dims: [usize; 2],
    pub seeds: Vec<u64>,
    pub variant: Variant,
    pub out: PathBuf,
    pub jobs: usize,
}

fn invalid(key: &str, value: &str) -> Error {
    Error::Config(format!("invalid value for {key}: {value:?}"))
}

fn number<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value.trim().parse().map_err(|_| invalid(key, value))
}

pub fn parse_hidden(value: &str) -> Result<[usize; 2]> {
    let parts: Vec<&str> = value.split(',').collect();
    match parts.as_slice() {
        [a, b] => Ok([number("hidden_dims", a)?, number("hidden_dims", b)?]),
        _ => Err(invalid("hidden_dims", value)),
    }
}

pub fn parse_seeds(value: &str) -> Result<Vec<u64>> {
    let seeds = value
        .split(',')
        .map(|s| number("seeds", s))
        .collect::<Result<Vec<u64>>>()?;
    if seeds.is_empty() {
        return Err(invalid("seeds", value));
    }
    Ok(seeds)
}

impl RunOverrides {
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let v = value.trim();
        match key {
            "input" => self.input = Some(v.into()),
            "T" => self.runs = Some(number(key, v)?),
            "K" => self.depth = Some(number(key, v)?),
            "epochs" => self.epochs = Some(number(key, v)?),
            "learning_rate" => self.learning_rate = Some(number(key, v)?),
            "lambda" => self.lambda = Some(number(key, v)?),
            "hidden_dims" => self.hidden_dims = Some(parse_hidden(v)?),
            "seeds" => self.seeds = Some(parse_seeds(v)?),
            "variant" => self.variant = Some(v.parse()?),
            "out" => self.out = Some(v.into()),
            "jobs" => self.jobs = Some(number(key, v)?),
            _ => return Err(Error::Config(format!("unknown configuration key {key:?}"))),
        }
        Ok(())
    }

    pub fn parse(text: &str, origin: &Path) -> Result<Self> {
        let mut out = Self::default();
        for (index, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::Config(format!("{}:{}: expected key = value", origin.display(), index + 1))
            })?;
            out.set(key.trim(), value).map_err(|e| {
                Error::Config(format!("{}:{}: {e}", origin.display(), index + 1))
            })?;
        }
        Ok(out)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.into(),
            source,
        })?;
        Self::parse(&text, path)
    }

    /// Values from `over` win.
    pub fn merge(self, over: Self) -> Self {
        Self {
            input: over.input.or(self.input),
            runs: over.runs.or(self.runs),
            depth: over.depth.or(self.depth),
            epochs: over.epochs.or(self.epochs),
            learning_rate: over.learning_rate.or(self.learning_rate),
            lambda: over.lambda.or(self.lambda),
            hidden_dims: over.hidden_dims.or(self.hidden_dims),
            seeds: over.seeds.or(self.seeds),
            variant: over.variant.or(self.variant),
            out: over.out.or(self.out),
            jobs: over.jobs.or(self.jobs),
        }
    }

    pub fn resolve(self) -> Result<RunConfig> {
        let input = self
            .input
            .ok_or_else(|| Error::Config("no input graph given".into()))?;
        let config = RunConfig {
            input,
            runs: self.runs.unwrap_or(3),
            depth: self.depth.unwrap_or(4),
            epochs: self.epochs.unwrap_or(500),
            learning_rate: self.learning_rate.unwrap_or(1e-5),
            lambda: self.lambda,
            hidden_dims: self.hidden_dims.unwrap_or([128, 128]),
            seeds: self.seeds.unwrap_or_else(|| vec![0]),
            variant: self.variant.unwrap_or(Variant::Tam),
            out: self.out.unwrap_or_else(|| "tam-out".into()),
            jobs: self.jobs.unwrap_or(1),
        };
        config.variant.validate(config.depth)?;
        Ok(config)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_then_flags_then_defaults() {
        let file = RunOverrides::parse(
            "# experiment\ninput = data/g\nT = 2\nepochs=10\nhidden_dims = 16,8\n\nvariant = edge-drop:0.1\n",
            Path::new("run.cfg"),
        )
        .unwrap();
        let flags = RunOverrides {
            epochs: Some(20),
            ..Default::default()
        };
        let cfg = file.merge(flags).resolve().unwrap();
        assert_eq!(cfg.runs, 2);
        assert_eq!(cfg.epochs, 20);
        assert_eq!(cfg.depth, 4);
        assert_eq!(cfg.hidden_dims, [16, 8]);
        assert_eq!(cfg.variant, Variant::EdgeDrop(0.1));
        assert_eq!(cfg.learning_rate, 1e-5);
        assert_eq!(cfg.lambda, None);
        assert_eq!(cfg.seeds, vec![0]);
    }

    #[test]
    fn rejects_bad_lines() {
        let p = Path::new("x");
        assert!(RunOverrides::parse("colour = red\n", p).is_err());
        assert!(RunOverrides::parse("T 3\n", p).is_err());
        assert!(RunOverrides::parse("T = three\n", p).is_err());
        assert!(RunOverrides::parse("hidden_dims = 4\n", p).is_err());
        assert!(RunOverrides::parse("seeds = 1,,2\n", p).is_err());
        assert!(RunOverrides::default().resolve().is_err());
        let bad_scale = RunOverrides::parse("input = g\nK = 2\nvariant = single-scale:3\n", p).unwrap();
        assert!(bad_scale.resolve().is_err());
    }
}
