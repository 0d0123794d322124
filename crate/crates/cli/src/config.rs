use std::path::Path;

use serde::Deserialize;
use unipotent_core::inverse::Budgets;
use unipotent_core::mpoly::DEFAULT_BUDGET;

use crate::error::CliError;

pub const CONFIG_ENV: &str = "UNIPOTENT_CONFIG";

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Json,
    Text,
}

/// Settings read from a TOML file; every key is optional.
#[derive(Clone, Debug, PartialEq, Eq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub groebner_budget: u64,
    pub cyclic_search_budget: usize,
    pub output_format: OutputFormat,
    /// Seeds the random corpora of `selftest`; nothing else is random.
    pub seed: u64,
}

impl Default for Config {
    fn default() -> Self {
        Config { groebner_budget: DEFAULT_BUDGET, cyclic_search_budget: 200, output_format: OutputFormat::Json, seed: 0 }
    }
}

impl Config {
    /// `--config` wins over the environment variable; with neither, defaults.
    pub fn load(flag: Option<&Path>) -> Result<Config, CliError> {
        let from_env = std::env::var_os(CONFIG_ENV).map(std::path::PathBuf::from);
        let config = match flag.map(Path::to_path_buf).or(from_env) {
            Some(path) => {
                let text = std::fs::read_to_string(&path)
                    .map_err(|e| CliError::Input(format!("cannot read config {}: {e}", path.display())))?;
                Config::parse(&text).map_err(|e| CliError::Input(format!("config {}: {e}", path.display())))?
            }
            None => Config::default(),
        };
        config.check()?;
        Ok(config)
    }

    pub fn parse(text: &str) -> Result<Config, toml::de::Error> {
        toml::from_str(text)
    }

    fn check(&self) -> Result<(), CliError> {
        if self.groebner_budget == 0 || self.cyclic_search_budget == 0 {
            return Err(CliError::Input("budgets must be positive".into()));
        }
        Ok(())
    }

    pub fn budgets(&self) -> Budgets {
        Budgets { groebner: self.groebner_budget, cyclic_search: self.cyclic_search_budget }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partial_files_keep_defaults() {
        let c = Config::parse("seed = 7\noutput_format = \"text\"").unwrap();
        assert_eq!(c.seed, 7);
        assert_eq!(c.output_format, OutputFormat::Text);
        assert_eq!(c.groebner_budget, DEFAULT_BUDGET);
        assert!(Config::parse("budget = 3").is_err());
        assert!(Config { groebner_budget: 0, ..Config::default() }.check().is_err());
    }
}
