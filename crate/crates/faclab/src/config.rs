//! Flat `key = value` run configs and their per-command schemas.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use faclab_core::combinatorics::BoundKind;
use faclab_core::modular::{is_prime, primes_in};

use crate::error::ConfigError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Int,
    Float,
    Flag,
    /// One prime, or every prime in an inclusive range `a..b`.
    Primes,
    /// Integers: one value, a comma list, or `start:stop:step` (inclusive).
    Sweep,
    Choice(&'static [&'static str]),
    /// An integer or the word `all`.
    IntOrAll,
    Path,
}

impl Kind {
    fn describe(&self) -> String {
        match self {
            Kind::Int => "integer".into(),
            Kind::Float => "number".into(),
            Kind::Flag => "true|false".into(),
            Kind::Primes => "prime or range a..b".into(),
            Kind::Sweep => "n | a,b,c | start:stop:step".into(),
            Kind::Choice(opts) => opts.join("|"),
            Kind::IntOrAll => "integer|all".into(),
            Kind::Path => "path".into(),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Field {
    pub key: &'static str,
    pub kind: Kind,
    /// `None` means required, unless listed in [`OPTIONAL`].
    pub default: Option<&'static str>,
    pub help: &'static str,
}

/// Keys that may be left unset without a default.
const OPTIONAL: &[&str] = &["seed", "resume", "m", "x", "y", "ell", "set_len", "set_n"];

const fn f(key: &'static str, kind: Kind, default: Option<&'static str>, help: &'static str) -> Field {
    Field { key, kind, default, help }
}

#[derive(Debug, Clone, Copy)]
pub struct CommandSpec {
    pub name: &'static str,
    pub about: &'static str,
    pub fields: &'static [Field],
    /// `(file, columns)` for each CSV the command writes.
    pub outputs: &'static [(&'static str, &'static str)],
}

const SEED: Field = f("seed", Kind::Int, None, "RNG seed; mandatory for sampled strategies");
const STRATEGY: &[&str] = &["exact", "sampled"];
const SHAPES: &[&str] = &["wilson_pair", "two_product", "k_term_product", "product_plus_factorials", "cp_form"];
const PROFILES: &[&str] = &[
    "quotient_set",
    "product_set",
    "product_set_small",
    "interval_product",
    "interval_product_energy",
    "energy",
    "moment",
    "double_sum",
];

pub const COMMANDS: &[CommandSpec] = &[
    CommandSpec {
        name: "factorials",
        about: "n! mod p over a window, with checkpoints",
        fields: &[
            f("p", Kind::Primes, None, "modulus"),
            f("start", Kind::Int, Some("0"), "window offset L; values run over n = L+1..L+N"),
            f("n", Kind::Int, None, "window length N"),
            f("stride", Kind::Int, Some("1048576"), "checkpoint spacing"),
            f("zero_tail", Kind::Flag, Some("false"), "allow windows reaching n >= p"),
            f("resume", Kind::Path, None, "checkpoint file to resume from (needs a checkpoint at n = start)"),
        ],
        outputs: &[("factorials.csv", "p,n,value"), ("checkpoints.txt", "p,n,value,checksum")],
    },
    CommandSpec {
        name: "card",
        about: "|A_N| and |A_N·A_N|, exact or sampled",
        fields: &[
            f("p", Kind::Primes, None, "modulus or prime range"),
            f("n", Kind::Sweep, None, "N values"),
            f("strategy", Kind::Choice(STRATEGY), Some("exact"), "product-set cardinality method"),
            f("samples", Kind::Int, Some("100000"), "sampled pairs for the sampled strategy"),
            SEED,
            f("export", Kind::Flag, Some("false"), "write each A_N to sets/p<p>_n<N>.txt"),
        ],
        outputs: &[("card.csv", "p,n,set_len,product_len,product_low,product_high,exact")],
    },
    CommandSpec {
        name: "growth",
        about: "|A_N|, |A_N·A_N| and |A_N/A_N| over an N sweep, with bound overlays",
        fields: &[
            f("p", Kind::Primes, None, "modulus or prime range"),
            f("n", Kind::Sweep, None, "N values"),
            f("constant", Kind::Float, Some("1"), "multiplier on the bound curves"),
            f("cutoff", Kind::Float, Some("1"), "lower cutoff constant of the smallest quotient-set range"),
        ],
        outputs: &[(
            "growth.csv",
            "p,n,set_len,product_len,quotient_len,product_bound,product_case,product_placeholder,quotient_bound,quotient_case",
        )],
    },
    CommandSpec {
        name: "energy",
        about: "multiplicative energy J(S, M) with the energy bound overlay",
        fields: &[
            f("p", Kind::Primes, None, "modulus or prime range"),
            f("left", Kind::Choice(&["interval", "primes", "factorials"]), Some("interval"), "left set S of size parameter N"),
            f("n", Kind::Sweep, None, "N values for the left set"),
            f("right", Kind::Choice(&["factorials", "interval"]), Some("factorials"), "right set M"),
            f("m", Kind::Int, None, "size parameter of the right set"),
            f("constant", Kind::Float, Some("1"), "multiplier on the bound curve"),
        ],
        outputs: &[(
            "energy.csv",
            "p,left,n,right,m,left_len,right_len,energy,diagonal,product_lower,bound,bound_case,placeholder",
        )],
    },
    CommandSpec {
        name: "expsum",
        about: "exponential sums over factorial windows",
        fields: &[
            f("p", Kind::Primes, None, "modulus or prime range"),
            f("start", Kind::Int, Some("0"), "window offset L"),
            f("n", Kind::Sweep, None, "window lengths N"),
            f("mode", Kind::Choice(&["single", "double", "max"]), Some("max"), "which sum"),
            f("a", Kind::Int, Some("1"), "frequency for single and double sums"),
            f("set_n", Kind::Int, None, "double sums run over x in A_{set_n} (default N)"),
            f("strategy", Kind::Choice(&["full", "sampled"]), Some("full"), "max over all a or over samples"),
            f("samples", Kind::Int, Some("4096"), "sampled frequencies"),
            SEED,
            f("cap", Kind::Int, Some("4194304"), "largest p for full frequency scans"),
            f("constant", Kind::Float, Some("1"), "multiplier on the double-sum bound"),
        ],
        outputs: &[("expsum.csv", "p,start,n,mode,a,terms,re,im,abs,bound,ratio")],
    },
    CommandSpec {
        name: "moments",
        about: "exact J_l against the frequency-scan moments",
        fields: &[
            f("p", Kind::Primes, None, "modulus or prime range"),
            f("start", Kind::Int, Some("0"), "window offset L"),
            f("n", Kind::Sweep, None, "window lengths N"),
            f("ell", Kind::Sweep, Some("1,2,3"), "moment orders l"),
            f("cap", Kind::Int, Some("4194304"), "largest p for frequency scans"),
            f("constant", Kind::Float, Some("1"), "multiplier on the moment bound"),
        ],
        outputs: &[(
            "moments.csv",
            "p,start,n,ell,exact,exact_next,even_moment,odd_moment,relative_error,holder_ceiling,bound",
        )],
    },
    CommandSpec {
        name: "solve",
        about: "factorial representations of residues, with certificates",
        fields: &[
            f("p", Kind::Primes, None, "modulus or prime range"),
            f("shape", Kind::Choice(SHAPES), None, "representation shape"),
            f("lambda", Kind::IntOrAll, Some("all"), "target residue, or every residue"),
            f("k", Kind::Int, Some("2"), "number of terms for k_term_product and product_plus_factorials"),
            f("m", Kind::Int, None, "index bound M, clamped to p-1 (p for cp_form) [default: the clamp]"),
            f("c", Kind::Int, Some("1"), "coefficient for cp_form"),
            f("budget", Kind::Int, Some("17179869184"), "word-operation budget per reachability build"),
        ],
        outputs: &[
            ("solve.csv", "p,shape,k,m,lambda,status"),
            ("coverage.csv", "p,shape,k,m,covered,fraction,complete"),
            ("certificates.txt", "key: value blocks"),
        ],
    },
    CommandSpec {
        name: "cp-search",
        about: "smallest c making x!+y!+c(z!+t!) cover every residue",
        fields: &[
            f("p", Kind::Primes, None, "modulus or prime range"),
            f("m", Kind::Int, None, "index bound M, clamped to p [default: p]"),
            f("max_c", Kind::Int, Some("100"), "largest coefficient tried"),
        ],
        outputs: &[("cp_search.csv", "p,m,c,found,tried,verified"), ("cp_misses.csv", "p,c,missed")],
    },
    CommandSpec {
        name: "wilson-check",
        about: "lambda!(p-lambda)! = lambda for every even lambda",
        fields: &[f("p", Kind::Primes, None, "modulus or prime range")],
        outputs: &[("wilson.csv", "p,checked,failures")],
    },
    CommandSpec {
        name: "erdos-stats",
        about: "residues missed by n! mod p, n = 1..p",
        fields: &[
            f("p", Kind::Primes, None, "modulus or prime range"),
            f("cap", Kind::Int, Some("268435456"), "largest p scanned"),
        ],
        outputs: &[
            ("erdos.csv", "p,distinct,missing,missing_fraction"),
            ("erdos_summary.csv", "primes,mean_missing_fraction,min_missing_fraction,max_missing_fraction"),
        ],
    },
    CommandSpec {
        name: "ruzsa-check",
        about: "|X/Y||Z| <= |XZ||ZY| on random triples",
        fields: &[
            f("p", Kind::Primes, None, "moduli drawn from"),
            f("trials", Kind::Int, Some("1000"), "number of triples"),
            f("size", Kind::Int, Some("200"), "largest set size"),
            SEED,
        ],
        outputs: &[("ruzsa.csv", "trial,p,x_len,y_len,z_len,quotient,xz,zy,holds")],
    },
    CommandSpec {
        name: "katz-shen",
        about: "subsets X' with small X'B_1...B_k on random instances",
        fields: &[
            f("p", Kind::Primes, None, "moduli drawn from"),
            f("trials", Kind::Int, Some("10"), "number of instances"),
            f("x_size", Kind::Int, Some("8"), "|X|"),
            f("b_size", Kind::Int, Some("4"), "|B_i|"),
            f("k", Kind::Int, Some("2"), "number of sets B_i"),
            f("strategy", Kind::Choice(&["exhaustive", "greedy", "both"]), Some("both"), "subset search"),
            SEED,
        ],
        outputs: &[("katz_shen.csv", "trial,p,strategy,x_len,subset_len,product_len,ratio")],
    },
    CommandSpec {
        name: "cg-count",
        about: "coprime solutions of x = s0*y in a box",
        fields: &[
            f("p", Kind::Primes, None, "modulus or prime range"),
            f("s0", Kind::IntOrAll, Some("all"), "multiplier, or all multipliers (max reported)"),
            f("x", Kind::Int, None, "box width X (default isqrt p)"),
            f("y", Kind::Int, None, "box height Y (default isqrt p)"),
        ],
        outputs: &[
            ("cg_count.csv", "p,s0,x,y,count,ratio"),
            ("cg_max.csv", "p,x,y,max_count,max_ratio,argmax_s0"),
        ],
    },
    CommandSpec {
        name: "bounds",
        about: "bound curves evaluated on a grid",
        fields: &[
            f("profile", Kind::Choice(PROFILES), None, "which curve"),
            f("p", Kind::Sweep, None, "p values (need not be prime)"),
            f("n", Kind::Sweep, None, "N values"),
            f("m", Kind::Int, None, "|M| for interval_product, interval_product_energy, energy"),
            f("ell", Kind::Int, None, "l for moment"),
            f("set_len", Kind::Int, None, "|A| for double_sum"),
            f("constant", Kind::Float, Some("1"), "multiplier"),
            f("cutoff", Kind::Float, Some("1"), "lower cutoff constant of the smallest quotient-set range"),
        ],
        outputs: &[("bounds.csv", "profile,case,p,n,m,ell,set_len,constant,value,placeholder")],
    },
];

/// Accepted by every command.
pub const COMMON: &[Field] = &[f("out", Kind::Path, Some("out"), "output directory")];

pub fn command(name: &str) -> Option<&'static CommandSpec> {
    COMMANDS.iter().find(|c| c.name == name)
}

impl CommandSpec {
    fn field(&self, key: &str) -> Option<&'static Field> {
        self.fields.iter().chain(COMMON).find(|f| f.key == key)
    }

    /// Text for `--help`: keys, then CSV columns.
    pub fn help_text(&self) -> String {
        let mut s = String::from("Config keys:\n");
        for fd in self.fields.iter().chain(COMMON) {
            let dflt = fd.default.map(|d| format!(" [default: {d}]")).unwrap_or_default();
            let _ = writeln!(s, "  {:<10} {} ({}){dflt}", fd.key, fd.help, fd.kind.describe());
        }
        s.push_str("\nOutputs:\n");
        for (file, cols) in self.outputs {
            let _ = writeln!(s, "  {file}: {cols}");
        }
        s
    }
}

/// A parsed config: the command plus raw string values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Config {
    pub command: String,
    pub entries: BTreeMap<String, String>,
}

fn valid_key(k: &str) -> bool {
    !k.is_empty() && k.bytes().all(|b| b.is_ascii_lowercase() || b.is_ascii_digit() || b == b'_')
}

impl Config {
    pub fn new(command: &str) -> Self {
        Self {
            command: command.to_owned(),
            entries: BTreeMap::new(),
        }
    }

    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut command = None;
        let mut entries = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((k, v)) = line.split_once('=') else {
                return Err(ConfigError::general(format!("line {}: expected `key = value`", i + 1)));
            };
            let (k, v) = (k.trim(), v.trim());
            if !valid_key(k) {
                return Err(ConfigError::general(format!("line {}: bad key `{k}`", i + 1)));
            }
            if v.is_empty() || v.contains(char::is_whitespace) {
                return Err(ConfigError::field(k, "value must be one nonempty token"));
            }
            if k == "command" {
                if command.replace(v.to_owned()).is_some() {
                    return Err(ConfigError::field(k, "given twice"));
                }
            } else if entries.insert(k.to_owned(), v.to_owned()).is_some() {
                return Err(ConfigError::field(k, "given twice"));
            }
        }
        let command = command.ok_or_else(|| ConfigError::field("command", "missing"))?;
        Ok(Self { command, entries })
    }

    /// `command` first, then keys in sorted order.
    pub fn serialize(&self) -> String {
        let mut s = format!("command = {}\n", self.command);
        for (k, v) in &self.entries {
            let _ = writeln!(s, "{k} = {v}");
        }
        s
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        if !valid_key(key) {
            return Err(ConfigError::general(format!("bad key `{key}`")));
        }
        if value.is_empty() || value.contains(char::is_whitespace) {
            return Err(ConfigError::field(key, "value must be one nonempty token"));
        }
        if key == "command" {
            self.command = value.to_owned();
        } else {
            self.entries.insert(key.to_owned(), value.to_owned());
        }
        Ok(())
    }

    /// Checks every key against the command's schema and parses values.
    pub fn validate(&self) -> Result<Params, ConfigError> {
        let spec = command(&self.command)
            .ok_or_else(|| ConfigError::field("command", format!("unknown command `{}`", self.command)))?;
        for k in self.entries.keys() {
            if spec.field(k).is_none() {
                return Err(ConfigError::field(k, format!("not a key of `{}`", spec.name)));
            }
        }
        let mut values = BTreeMap::new();
        for fd in spec.fields.iter().chain(COMMON) {
            let raw = self.entries.get(fd.key).map(String::as_str).or(fd.default);
            match raw {
                Some(r) => {
                    values.insert(fd.key, parse_value(fd, r)?);
                }
                None if OPTIONAL.contains(&fd.key) => {}
                None => return Err(ConfigError::field(fd.key, "required")),
            }
        }
        let params = Params { spec, values };
        params.check_rules()?;
        Ok(params)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Int(u64),
    Float(f64),
    Flag(bool),
    List(Vec<u64>),
    Choice(&'static str),
    All,
    Path(String),
}

fn parse_int(key: &str, s: &str) -> Result<u64, ConfigError> {
    let clean: String = s.chars().filter(|&c| c != '_').collect();
    if let Some((b, e)) = clean.split_once('^') {
        let (b, e): (u64, u32) = (
            b.parse().map_err(|_| ConfigError::field(key, format!("`{s}` is not an integer")))?,
            e.parse().map_err(|_| ConfigError::field(key, format!("`{s}` is not an integer")))?,
        );
        return b.checked_pow(e).ok_or_else(|| ConfigError::field(key, format!("`{s}` overflows")));
    }
    clean
        .parse()
        .map_err(|_| ConfigError::field(key, format!("`{s}` is not a nonnegative integer")))
}

/// Largest number of primes or sweep points a single field may expand to.
const LIST_MAX: usize = 1 << 20;

fn parse_value(fd: &Field, raw: &str) -> Result<Value, ConfigError> {
    let key = fd.key;
    Ok(match fd.kind {
        Kind::Int => Value::Int(parse_int(key, raw)?),
        Kind::Float => {
            let x: f64 = raw.parse().map_err(|_| ConfigError::field(key, format!("`{raw}` is not a number")))?;
            if !x.is_finite() || x <= 0.0 {
                return Err(ConfigError::field(key, "must be a positive finite number"));
            }
            Value::Float(x)
        }
        Kind::Flag => match raw {
            "true" => Value::Flag(true),
            "false" => Value::Flag(false),
            _ => return Err(ConfigError::field(key, "expected true or false")),
        },
        Kind::Primes => {
            let ps: Vec<u64> = match raw.split_once("..") {
                Some((a, b)) => {
                    let (a, b) = (parse_int(key, a)?, parse_int(key, b)?);
                    if a > b {
                        return Err(ConfigError::field(key, "empty range"));
                    }
                    primes_in(a, b).take(LIST_MAX + 1).collect()
                }
                None => {
                    let p = parse_int(key, raw)?;
                    if !is_prime(p) {
                        return Err(ConfigError::field(key, format!("{p} is not prime")));
                    }
                    vec![p]
                }
            };
            if ps.is_empty() {
                return Err(ConfigError::field(key, "range contains no primes"));
            }
            if ps.len() > LIST_MAX {
                return Err(ConfigError::field(key, "range expands to too many primes"));
            }
            Value::List(ps)
        }
        Kind::Sweep => {
            let parts: Vec<&str> = raw.split(':').collect();
            let list = match parts.as_slice() {
                [a, b, step] => {
                    let (a, b, step) = (parse_int(key, a)?, parse_int(key, b)?, parse_int(key, step)?);
                    if step == 0 || a > b {
                        return Err(ConfigError::field(key, "sweep needs start <= stop and step >= 1"));
                    }
                    if (b - a) / step >= LIST_MAX as u64 {
                        return Err(ConfigError::field(key, "sweep has too many points"));
                    }
                    (a..=b).step_by(step as usize).collect()
                }
                [_] => raw.split(',').map(|t| parse_int(key, t)).collect::<Result<Vec<_>, _>>()?,
                _ => return Err(ConfigError::field(key, "expected a list or start:stop:step")),
            };
            Value::List(list)
        }
        Kind::Choice(opts) => Value::Choice(
            opts.iter()
                .find(|&&o| o == raw)
                .ok_or_else(|| ConfigError::field(key, format!("expected one of {}", opts.join(", "))))?,
        ),
        Kind::IntOrAll if raw == "all" => Value::All,
        Kind::IntOrAll => Value::Int(parse_int(key, raw)?),
        Kind::Path => Value::Path(raw.to_owned()),
    })
}

/// Validated parameters for one command.
#[derive(Debug, Clone)]
pub struct Params {
    pub spec: &'static CommandSpec,
    values: BTreeMap<&'static str, Value>,
}

impl Params {
    pub fn get(&self, key: &str) -> Option<&Value> {
        self.values.get(key)
    }

    pub fn int(&self, key: &str) -> Option<u64> {
        match self.values.get(key) {
            Some(Value::Int(v)) => Some(*v),
            _ => None,
        }
    }

    pub fn float(&self, key: &str) -> f64 {
        match self.values.get(key) {
            Some(Value::Float(v)) => *v,
            _ => panic!("`{key}` is not a number field"),
        }
    }

    pub fn flag(&self, key: &str) -> bool {
        matches!(self.values.get(key), Some(Value::Flag(true)))
    }

    pub fn list(&self, key: &str) -> &[u64] {
        match self.values.get(key) {
            Some(Value::List(v)) => v,
            _ => panic!("`{key}` is not a list field"),
        }
    }

    pub fn choice(&self, key: &str) -> &'static str {
        match self.values.get(key) {
            Some(Value::Choice(v)) => v,
            _ => panic!("`{key}` is not a choice field"),
        }
    }

    pub fn path(&self, key: &str) -> Option<&str> {
        match self.values.get(key) {
            Some(Value::Path(v)) => Some(v),
            _ => None,
        }
    }

    pub fn seed(&self) -> Option<u64> {
        self.int("seed")
    }

    fn sampled(&self) -> bool {
        match self.spec.name {
            "card" => self.choice("strategy") == "sampled",
            "expsum" => self.choice("strategy") == "sampled",
            "ruzsa-check" | "katz-shen" => true,
            _ => false,
        }
    }

    fn check_rules(&self) -> Result<(), ConfigError> {
        if self.sampled() && self.seed().is_none() {
            return Err(ConfigError::field("seed", "mandatory for sampled strategies"));
        }
        let positive = |key: &str| match self.int(key) {
            Some(0) => Err(ConfigError::field(key, "must be at least 1")),
            _ => Ok(()),
        };
        for key in ["n", "k", "m", "samples", "trials", "size", "x_size", "b_size", "x", "y", "max_c", "ell", "set_n", "stride", "set_len"] {
            positive(key)?;
        }
        for key in ["n", "ell"] {
            if let Some(Value::List(v)) = self.values.get(key) {
                if v.contains(&0) {
                    return Err(ConfigError::field(key, "values must be at least 1"));
                }
            }
        }
        if self.spec.name == "bounds" {
            let kind = BoundKind::from_name(self.choice("profile")).expect("profile names match");
            let need = match kind {
                BoundKind::IntervalProduct | BoundKind::IntervalProductEnergy | BoundKind::Energy => Some("m"),
                BoundKind::Moment => Some("ell"),
                BoundKind::DoubleSum => Some("set_len"),
                _ => None,
            };
            if let Some(key) = need {
                if !self.values.contains_key(key) {
                    return Err(ConfigError::field(key, format!("required by profile {}", kind.name())));
                }
            }
        }
        if self.spec.name == "energy" && self.int("m").is_none() {
            return Err(ConfigError::field("m", "required"));
        }
        Ok(())
    }
}
