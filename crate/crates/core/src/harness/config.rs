//! `key = value` configuration files. Command-line flags override file
//! values, which override built-in defaults.

use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::protocol::Termination;

use super::sweep::Format;

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Settings {
    pub c_min: Option<f64>,
    pub c_max: Option<f64>,
    pub points: Option<usize>,
    pub depths: Option<Vec<usize>>,
    pub strategies: Option<Vec<Termination>>,
    pub seed: Option<u64>,
    pub trials: Option<u64>,
    pub jobs: Option<usize>,
    pub format: Option<Format>,
    pub out: Option<String>,
}

fn value<T: FromStr>(key: &str, raw: &str) -> Result<T> {
    raw.parse()
        .map_err(|_| Error::InvalidSpec(format!("bad value `{raw}` for `{key}`")))
}

fn list<T: FromStr>(key: &str, raw: &str) -> Result<Vec<T>> {
    raw.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| value(key, s))
        .collect()
}

impl Settings {
    pub fn parse(text: &str) -> Result<Self> {
        let mut s = Self::default();
        for (n, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, raw) = line.split_once('=').ok_or_else(|| {
                Error::InvalidSpec(format!("line {}: expected key = value", n + 1))
            })?;
            let key = key.trim().replace('-', "_");
            let raw = raw.trim().trim_matches('"');
            match key.as_str() {
                "c_min" => s.c_min = Some(value(&key, raw)?),
                "c_max" => s.c_max = Some(value(&key, raw)?),
                "points" => s.points = Some(value(&key, raw)?),
                "depths" => s.depths = Some(list(&key, raw)?),
                "strategy" | "strategies" => s.strategies = Some(list(&key, raw)?),
                "seed" => s.seed = Some(value(&key, raw)?),
                "trials" => s.trials = Some(value(&key, raw)?),
                "jobs" => s.jobs = Some(value(&key, raw)?),
                "format" => s.format = Some(value(&key, raw)?),
                "out" => s.out = Some(raw.to_string()),
                other => {
                    return Err(Error::InvalidSpec(format!(
                        "line {}: unknown key `{other}`",
                        n + 1
                    )))
                }
            }
        }
        Ok(s)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    /// Fields set in `self` win over those in `lower`.
    pub fn over(self, lower: Settings) -> Settings {
        Settings {
            c_min: self.c_min.or(lower.c_min),
            c_max: self.c_max.or(lower.c_max),
            points: self.points.or(lower.points),
            depths: self.depths.or(lower.depths),
            strategies: self.strategies.or(lower.strategies),
            seed: self.seed.or(lower.seed),
            trials: self.trials.or(lower.trials),
            jobs: self.jobs.or(lower.jobs),
            format: self.format.or(lower.format),
            out: self.out.or(lower.out),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_layers() {
        let file = Settings::parse(
            "# sweep\nc_min = 0.2\npoints=11\ndepths = 0, 2\nstrategy = matched-vnm\nformat = json\n",
        )
        .unwrap();
        assert_eq!(file.depths, Some(vec![0, 2]));
        assert_eq!(file.strategies, Some(vec![Termination::MatchedVnm]));
        let cli = Settings {
            points: Some(5),
            ..Settings::default()
        };
        let merged = cli.over(file);
        assert_eq!(merged.points, Some(5));
        assert_eq!(merged.c_min, Some(0.2));
        assert_eq!(merged.format, Some(Format::Json));
    }

    #[test]
    fn rejects_garbage() {
        assert!(Settings::parse("points = many").is_err());
        assert!(Settings::parse("colour = red").is_err());
        assert!(Settings::parse("no equals sign").is_err());
    }
}
