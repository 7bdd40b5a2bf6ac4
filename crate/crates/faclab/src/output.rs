//! Output directory handling: CSV tables, side files and the run manifest.

use std::collections::BTreeMap;
use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant, SystemTime, UNIX_EPOCH};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::config::Config;
use crate::error::CliError;

pub const MANIFEST: &str = "manifest.json";

/// A CSV file whose header row is written on creation.
pub struct Table {
    inner: csv::Writer<BufWriter<File>>,
}

impl Table {
    pub fn row<I, S>(&mut self, fields: I) -> Result<(), CliError>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[u8]>,
    {
        Ok(self.inner.write_record(fields)?)
    }

    fn finish(mut self) -> io::Result<()> {
        self.inner.flush()
    }
}

/// Renders floats for CSV: shortest round-trip form, `nan` for NaN.
pub fn fmt_f64(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else {
        format!("{x}")
    }
}

/// Shorthand for building a CSV row from displayable values.
#[macro_export]
macro_rules! row {
    ($($x:expr),* $(,)?) => { [$($x.to_string()),*] };
}

#[derive(Serialize)]
struct OutputEntry {
    path: String,
    sha256: String,
}

#[derive(Serialize)]
struct Manifest<'a> {
    command: &'a str,
    config: &'a BTreeMap<String, String>,
    version: &'static str,
    seed: Option<u64>,
    started_unix_ms: Option<u128>,
    finished_unix_ms: Option<u128>,
    runtime_ms: Option<u128>,
    outputs: Vec<OutputEntry>,
}

/// One run's output directory. Files are tracked so a failed run can remove
/// what it wrote; the manifest goes last, via rename.
pub struct Run {
    dir: PathBuf,
    files: Vec<String>,
    tables: Vec<(String, Table)>,
    started: SystemTime,
    clock: Instant,
    pub progress: Progress,
}

impl Run {
    pub fn new(dir: &Path, quiet: bool) -> Result<Self, CliError> {
        fs::create_dir_all(dir)?;
        Ok(Self {
            dir: dir.to_owned(),
            files: Vec::new(),
            tables: Vec::new(),
            started: SystemTime::now(),
            clock: Instant::now(),
            progress: Progress::new(quiet),
        })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn track(&mut self, name: &str) -> Result<PathBuf, CliError> {
        let path = self.dir.join(name);
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent)?;
        }
        self.files.push(name.to_owned());
        Ok(path)
    }

    /// Opens `name` with the given header; rows go through [`Run::table`].
    pub fn open_table(&mut self, name: &str, header: &str) -> Result<(), CliError> {
        let path = self.track(name)?;
        let mut w = csv::WriterBuilder::new()
            .has_headers(false)
            .from_writer(BufWriter::new(File::create(path)?));
        w.write_record(header.split(','))?;
        self.tables.push((name.to_owned(), Table { inner: w }));
        Ok(())
    }

    pub fn table(&mut self, name: &str) -> &mut Table {
        &mut self
            .tables
            .iter_mut()
            .find(|(n, _)| n == name)
            .unwrap_or_else(|| panic!("table {name} was not opened"))
            .1
    }

    /// A plain side file (checkpoints, sets, certificates).
    pub fn create_file(&mut self, name: &str) -> Result<BufWriter<File>, CliError> {
        let path = self.track(name)?;
        Ok(BufWriter::new(File::create(path)?))
    }

    /// Flushes everything and writes the manifest atomically.
    pub fn finish(mut self, config: &Config, seed: Option<u64>, timings: bool) -> Result<PathBuf, CliError> {
        for (_, t) in self.tables.drain(..) {
            t.finish()?;
        }
        let mut outputs = Vec::new();
        for name in &self.files {
            let bytes = fs::read(self.dir.join(name))?;
            outputs.push(OutputEntry {
                path: name.clone(),
                sha256: hex(&Sha256::digest(&bytes)),
            });
        }
        let ms = |t: SystemTime| t.duration_since(UNIX_EPOCH).unwrap_or(Duration::ZERO).as_millis();
        let manifest = Manifest {
            command: &config.command,
            config: &config.entries,
            version: env!("CARGO_PKG_VERSION"),
            seed,
            started_unix_ms: timings.then(|| ms(self.started)),
            finished_unix_ms: timings.then(|| ms(SystemTime::now())),
            runtime_ms: timings.then(|| self.clock.elapsed().as_millis()),
            outputs,
        };
        let tmp = self.dir.join(format!("{MANIFEST}.tmp"));
        let mut f = File::create(&tmp)?;
        serde_json::to_writer_pretty(&mut f, &manifest)?;
        f.write_all(b"\n")?;
        f.sync_all()?;
        let dest = self.dir.join(MANIFEST);
        fs::rename(&tmp, &dest)?;
        self.files.clear();
        Ok(dest)
    }

    /// Removes every file this run created.
    pub fn abandon(mut self) {
        self.tables.clear();
        for name in &self.files {
            let _ = fs::remove_file(self.dir.join(name));
        }
        let _ = fs::remove_file(self.dir.join(format!("{MANIFEST}.tmp")));
    }
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

/// Rate-limited progress lines on standard error.
pub struct Progress {
    quiet: bool,
    last: Instant,
    interval: Duration,
}

impl Progress {
    fn new(quiet: bool) -> Self {
        Self {
            quiet,
            last: Instant::now(),
            interval: Duration::from_secs(2),
        }
    }

    pub fn tick(&mut self, what: &str, done: usize, total: usize) {
        if self.quiet || self.last.elapsed() < self.interval {
            return;
        }
        self.last = Instant::now();
        eprintln!("{what}: {done}/{total}");
    }
}
