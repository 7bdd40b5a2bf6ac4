//! Config-driven experiment runner on top of `faclab-core`: run configs,
//! text formats, CSV tables and manifests.

pub mod commands;
pub mod config;
pub mod error;
pub mod formats;
pub mod output;

use std::path::{Path, PathBuf};

pub use config::Config;
pub use error::{CliError, ConfigError};

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    /// Overrides the config's `out` key; not echoed into the manifest.
    pub out: Option<PathBuf>,
    pub quiet: bool,
    /// Record wall-clock timestamps and runtime in the manifest.
    pub timings: bool,
}

/// Validates `config`, runs its command and returns the manifest path.
/// On failure every file the run created is removed.
pub fn run(config: &Config, opts: &RunOptions) -> Result<PathBuf, CliError> {
    let params = config.validate()?;
    let dir = match &opts.out {
        Some(d) => d.clone(),
        None => Path::new(params.path("out").unwrap_or("out")).to_owned(),
    };
    let mut out = output::Run::new(&dir, opts.quiet)?;
    match commands::execute(&params, &mut out) {
        Ok(()) => out.finish(config, params.seed(), opts.timings),
        Err(e) => {
            out.abandon();
            Err(e)
        }
    }
}
