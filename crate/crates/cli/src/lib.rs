//! Batch front end: reads a TOML run configuration, dispatches to the
//! `evcomb` library and writes CSV tables and plot-ready data.

mod commands;
pub mod config;
mod error;
pub mod table;

use std::path::{Path, PathBuf};

pub use config::{Loaded, RunConfig, Subcommand};
pub use error::{CliError, ConfigError, During};
pub use table::{emit_table, Table};

/// Command-line overrides of the configuration.
#[derive(Debug, Clone, Default)]
pub struct Options {
    pub config: PathBuf,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub subcommand: Option<Subcommand>,
}

const DEFAULT_OUT: &str = "evcomb-out";

/// A named output table, written to `<out>/<name>.csv`.
#[derive(Debug, Clone, PartialEq)]
pub struct Output {
    pub name: String,
    pub table: Table,
}

impl Output {
    fn new(name: impl Into<String>, table: Table) -> Self {
        Self { name: name.into(), table }
    }
}

/// A loaded configuration with its overrides resolved.
pub struct Run {
    pub loaded: Loaded,
    pub path: PathBuf,
    pub subcommand: Subcommand,
    pub seed: u64,
    pub epsilon: f64,
    pub out: PathBuf,
}

impl Run {
    pub fn prepare(options: &Options) -> Result<Self, CliError> {
        let path = options.config.clone();
        let bad = |error: ConfigError| CliError::Config { path: path.clone(), error };
        let loaded = Loaded::load(&path).map_err(bad)?;
        let config = &loaded.config;
        let subcommand = match (options.subcommand, &config.subcommand) {
            (Some(s), _) => s,
            (None, Some(name)) => name.get_ref().parse().map_err(|e: String| bad(loaded.error(name, e)))?,
            (None, None) => {
                return Err(bad(ConfigError::new("no subcommand given in the config or on the command line")))
            }
        };
        let epsilon = config.epsilon.unwrap_or(evcomb::DEFAULT_EPSILON);
        if !(epsilon >= 0.0 && epsilon.is_finite()) {
            return Err(bad(ConfigError::new(format!("epsilon must be a non-negative number, got {epsilon}"))));
        }
        let out = match (&options.out, &config.out) {
            (Some(out), _) => out.clone(),
            (None, Some(out)) => loaded.resolve(out),
            (None, None) => PathBuf::from(DEFAULT_OUT),
        };
        let seed = options.seed.or(config.seed).unwrap_or(0);
        Ok(Self { loaded, path, subcommand, seed, epsilon, out })
    }

    pub fn config(&self) -> &RunConfig {
        &self.loaded.config
    }

    /// Wraps a configuration problem with the config path.
    pub fn bad(&self, error: ConfigError) -> CliError {
        CliError::Config { path: self.path.clone(), error }
    }

    pub fn check<T>(&self, result: Result<T, ConfigError>) -> Result<T, CliError> {
        result.map_err(|e| self.bad(e))
    }

    fn missing(&self, section: &str) -> CliError {
        self.bad(ConfigError::new(format!("subcommand {} needs a [{section}] section", self.subcommand)))
    }

    /// Computes every output table without touching the file system.
    pub fn tables(&self) -> Result<Vec<Output>, CliError> {
        commands::dispatch(self)
    }

    pub fn execute(&self) -> Result<Vec<PathBuf>, CliError> {
        let outputs = self.tables()?;
        write_outputs(&self.out, &outputs)
    }
}

fn write_outputs(dir: &Path, outputs: &[Output]) -> Result<Vec<PathBuf>, CliError> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::Output { path: dir.to_path_buf(), message: e.to_string() })?;
    outputs
        .iter()
        .map(|o| {
            let path = dir.join(format!("{}.csv", o.name));
            emit_table(&o.table, &path)?;
            Ok(path)
        })
        .collect()
}

/// Runs one invocation and returns the files written.
pub fn run(options: &Options) -> Result<Vec<PathBuf>, CliError> {
    Run::prepare(options)?.execute()
}
