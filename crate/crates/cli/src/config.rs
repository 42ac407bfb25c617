//! Settings merged from a TOML file and command-line flags.

use std::path::{Path, PathBuf};
use std::time::Duration;

use flw_core::saturation::Config;
use flw_core::Fragment;
use serde::Deserialize;

use crate::error::CliError;

/// Names the default config file when `--config` is absent.
pub const CONFIG_ENV: &str = "FLW_CONFIG";

#[derive(Clone, Debug, Default, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct Settings {
    pub seed: Option<u64>,
    pub fragment: Option<String>,
    /// Seconds.
    pub time_budget: Option<f64>,
    pub engine: Option<String>,
    pub literal_bound: Option<usize>,
    pub frontier_budget: Option<usize>,
    pub cap: Option<usize>,
    /// Visited-configuration limit for bounded reachability.
    pub node_budget: Option<usize>,
    pub parallel: Option<bool>,
}

impl Settings {
    /// Reads `explicit`, else the file named by the environment variable, else defaults.
    pub fn load(explicit: Option<&Path>) -> Result<(Settings, Option<PathBuf>), CliError> {
        let path = explicit.map(Path::to_path_buf).or_else(|| std::env::var_os(CONFIG_ENV).map(PathBuf::from));
        let Some(path) = path else {
            return Ok((Settings::default(), None));
        };
        let text = std::fs::read_to_string(&path)
            .map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
        let settings = toml::from_str(&text)
            .map_err(|e| CliError::Config { path: path.display().to_string(), message: e.to_string() })?;
        Ok((settings, Some(path)))
    }

    /// Fields set in `flags` win.
    pub fn overlay(self, flags: Settings) -> Settings {
        Settings {
            seed: flags.seed.or(self.seed),
            fragment: flags.fragment.or(self.fragment),
            time_budget: flags.time_budget.or(self.time_budget),
            engine: flags.engine.or(self.engine),
            literal_bound: flags.literal_bound.or(self.literal_bound),
            frontier_budget: flags.frontier_budget.or(self.frontier_budget),
            cap: flags.cap.or(self.cap),
            node_budget: flags.node_budget.or(self.node_budget),
            parallel: flags.parallel.or(self.parallel),
        }
    }

    pub fn fragment(&self) -> Result<Option<Fragment>, CliError> {
        self.fragment
            .as_deref()
            .map(|f| Fragment::parse(f).map_err(|e| CliError::Usage(format!("--fragment: {e}"))))
            .transpose()
    }

    pub fn time_budget(&self) -> Result<Option<Duration>, CliError> {
        self.time_budget
            .map(|s| Duration::try_from_secs_f64(s).map_err(|_| CliError::Usage(format!("bad time budget {s}"))))
            .transpose()
    }

    pub fn saturation_config(&self) -> Result<Config, CliError> {
        let mut c = Config::default();
        if let Some(e) = &self.engine {
            c.engine = e.parse().map_err(|e| CliError::Usage(format!("--engine: {e}")))?;
        }
        if let Some(b) = self.literal_bound {
            c.literal_bound = b;
        }
        if let Some(t) = self.time_budget()? {
            c.time_budget = t;
        }
        if let Some(b) = self.frontier_budget {
            c.frontier_budget = b;
        }
        if let Some(p) = self.parallel {
            c.parallel = p;
        }
        Ok(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_file() {
        let file: Settings = toml::from_str("seed = 1\ncap = 3\nengine = \"literal\"").unwrap();
        let flags = Settings { cap: Some(5), ..Settings::default() };
        let s = file.overlay(flags);
        assert_eq!((s.seed, s.cap), (Some(1), Some(5)));
        assert_eq!(s.saturation_config().unwrap().engine, flw_core::Engine::Literal);
    }

    #[test]
    fn unknown_keys_rejected() {
        assert!(toml::from_str::<Settings>("sede = 1").is_err());
    }
}
