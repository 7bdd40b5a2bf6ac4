use std::path::PathBuf;
use std::process::ExitCode;

use clap::{value_parser, Arg, ArgAction, ArgMatches, Command};
use faclab::config::COMMANDS;
use faclab::{CliError, Config, ConfigError, RunOptions};

fn cli() -> Command {
    let mut cmd = Command::new("faclab")
        .version(env!("CARGO_PKG_VERSION"))
        .about("Experiments on factorials modulo primes")
        .subcommand_required(true)
        .arg_required_else_help(true);
    for spec in COMMANDS {
        cmd = cmd.subcommand(
            Command::new(spec.name)
                .about(spec.about)
                .after_help(spec.help_text())
                .arg(Arg::new("config").long("config").value_name("PATH").help("flat key = value config file"))
                .arg(Arg::new("out").long("out").value_name("DIR").help("output directory"))
                .arg(
                    Arg::new("threads")
                        .long("threads")
                        .value_name("N")
                        .value_parser(value_parser!(usize))
                        .help("worker threads (default: all cores)"),
                )
                .arg(Arg::new("timings").long("timings").action(ArgAction::SetTrue).help("record wall-clock times in the manifest"))
                .arg(Arg::new("quiet").long("quiet").short('q').action(ArgAction::SetTrue).help("no progress on stderr"))
                .arg(
                    Arg::new("overrides")
                        .value_name("--KEY VALUE")
                        .num_args(0..)
                        .trailing_var_arg(true)
                        .allow_hyphen_values(true)
                        .help("config entries given as flags, overriding the config file"),
                ),
        );
    }
    cmd
}

fn build(name: &str, m: &ArgMatches) -> Result<(Config, RunOptions, Option<usize>), CliError> {
    let mut config = match m.get_one::<String>("config") {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| ConfigError::field("config", format!("{path}: {e}")))?;
            Config::parse(&text)?
        }
        None => Config::new(name),
    };
    if config.command != name {
        return Err(ConfigError::field("command", format!("config is for `{}`, not `{name}`", config.command)).into());
    }
    let mut opts = RunOptions {
        out: m.get_one::<String>("out").map(PathBuf::from),
        quiet: m.get_flag("quiet"),
        timings: m.get_flag("timings"),
    };
    let mut threads = m.get_one::<usize>("threads").copied();
    let rest: Vec<&String> = m.get_many::<String>("overrides").map(Iterator::collect).unwrap_or_default();
    let mut it = rest.into_iter();
    while let Some(flag) = it.next() {
        if flag == "-q" {
            opts.quiet = true;
            continue;
        }
        let Some(body) = flag.strip_prefix("--") else {
            return Err(ConfigError::general(format!("expected --key value, got `{flag}`")).into());
        };
        let (key, inline) = match body.split_once('=') {
            Some((k, v)) => (k.to_owned(), Some(v.to_owned())),
            None => (body.to_owned(), None),
        };
        match key.as_str() {
            "timings" => opts.timings = true,
            "quiet" => opts.quiet = true,
            _ => {
                let value = match inline {
                    Some(v) => v,
                    None => it
                        .next()
                        .cloned()
                        .ok_or_else(|| ConfigError::field(&key.replace('-', "_"), "missing value"))?,
                };
                match key.as_str() {
                    "out" => opts.out = Some(PathBuf::from(value)),
                    "threads" => {
                        threads = Some(value.parse().map_err(|_| ConfigError::field("threads", "not a count"))?);
                    }
                    "config" => return Err(ConfigError::field("config", "give --config before other keys").into()),
                    _ => config.set(&key.replace('-', "_"), &value)?,
                }
            }
        }
    }
    Ok((config, opts, threads))
}

fn main() -> ExitCode {
    let matches = cli().get_matches();
    let (name, sub) = matches.subcommand().expect("subcommand required");
    let mut quiet = false;
    let result = build(name, sub).and_then(|(config, opts, threads)| {
        quiet = opts.quiet;
        if let Some(n) = threads {
            rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global()
                .map_err(|e| ConfigError::field("threads", e.to_string()))?;
        }
        faclab::run(&config, &opts)
    });
    match result {
        Ok(manifest) => {
            if !quiet {
                eprintln!("wrote {}", manifest.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("faclab: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
