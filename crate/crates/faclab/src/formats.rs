//! Text formats for checkpoints, exported sets and certificates.

use std::io::{self, BufRead, Write};

use faclab_core::factorial::FactorialCheckpoint;
use faclab_core::modular::PrimeModulus;
use faclab_core::represent::{Certificate, Shape, Witness};
use faclab_core::sets::ResidueSet;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
#[error("line {line}: {message}")]
pub struct FormatError {
    pub line: usize,
    pub message: String,
}

fn bad(line: usize, message: impl Into<String>) -> FormatError {
    FormatError {
        line,
        message: message.into(),
    }
}

fn num(line: usize, s: &str) -> Result<u64, FormatError> {
    s.trim().parse().map_err(|_| bad(line, format!("`{}` is not an integer", s.trim())))
}

pub const CHECKPOINT_HEADER: &str = "# p,n,value,checksum";

pub fn write_checkpoints<W: Write>(mut w: W, cps: &[FactorialCheckpoint]) -> io::Result<()> {
    writeln!(w, "{CHECKPOINT_HEADER}")?;
    for cp in cps {
        writeln!(w, "{},{},{},{}", cp.p, cp.n, cp.value, cp.checksum())?;
    }
    Ok(())
}

/// Reads checkpoint lines, rejecting any whose checksum does not match.
pub fn read_checkpoints<R: BufRead>(r: R) -> Result<Vec<FactorialCheckpoint>, FormatError> {
    let mut out = Vec::new();
    for (i, line) in r.lines().enumerate() {
        let line = line.map_err(|e| bad(i + 1, e.to_string()))?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 4 {
            return Err(bad(i + 1, "expected p,n,value,checksum"));
        }
        let (p, n, v, c) = (num(i + 1, f[0])?, num(i + 1, f[1])?, num(i + 1, f[2])?, num(i + 1, f[3])?);
        out.push(FactorialCheckpoint::from_parts(p, n, v, c).map_err(|e| bad(i + 1, e.to_string()))?);
    }
    Ok(out)
}

/// Header `p=<p> n=<card>`, then one residue per line, ascending.
pub fn write_set<W: Write>(mut w: W, set: &ResidueSet) -> io::Result<()> {
    writeln!(w, "p={} n={}", set.modulus().p(), set.len())?;
    for x in set.to_sorted_vec() {
        writeln!(w, "{x}")?;
    }
    Ok(())
}

pub fn read_set<R: BufRead>(r: R) -> Result<ResidueSet, FormatError> {
    let mut lines = r.lines().enumerate();
    let header = match lines.next() {
        Some((_, Ok(h))) => h,
        _ => return Err(bad(1, "missing header")),
    };
    let mut p = None;
    let mut n = None;
    for tok in header.split_whitespace() {
        match tok.split_once('=') {
            Some(("p", v)) => p = Some(num(1, v)?),
            Some(("n", v)) => n = Some(num(1, v)?),
            _ => return Err(bad(1, format!("unexpected header token `{tok}`"))),
        }
    }
    let (Some(p), Some(n)) = (p, n) else {
        return Err(bad(1, "header needs p= and n="));
    };
    let m = PrimeModulus::new(p).map_err(|e| bad(1, e.to_string()))?;
    let mut set = ResidueSet::from_residues(m, []);
    let mut last = None;
    for (i, line) in lines {
        let line = line.map_err(|e| bad(i + 1, e.to_string()))?;
        if line.trim().is_empty() {
            continue;
        }
        let x = num(i + 1, &line)?;
        if x >= p || last.is_some_and(|l| l >= x) {
            return Err(bad(i + 1, "residues must be reduced and strictly ascending"));
        }
        last = Some(x);
        set.insert(x);
    }
    if set.len() as u64 != n {
        return Err(bad(1, format!("header says {n} residues, found {}", set.len())));
    }
    Ok(set)
}

/// `key: value` lines; witnesses as `m:n` pairs or bare indices.
pub fn write_certificate<W: Write>(mut w: W, cert: &Certificate) -> io::Result<()> {
    writeln!(w, "shape: {}", cert.shape)?;
    writeln!(w, "p: {}", cert.p)?;
    writeln!(w, "lambda: {}", cert.lambda)?;
    writeln!(w, "M: {}", cert.bound)?;
    if let Some(c) = cert.c {
        writeln!(w, "c: {c}")?;
    }
    let ws: Vec<String> = cert
        .witnesses
        .iter()
        .map(|w| match w {
            Witness::Pair(a, b) => format!("{a}:{b}"),
            Witness::Single(a) => a.to_string(),
        })
        .collect();
    writeln!(w, "witnesses: {}", ws.join(","))
}

/// Parses blank-line separated certificate blocks.
pub fn parse_certificates(text: &str) -> Result<Vec<Certificate>, FormatError> {
    let mut out = Vec::new();
    let mut block: Vec<(usize, &str)> = Vec::new();
    for (i, line) in text.lines().enumerate().chain([(usize::MAX, "")]) {
        if line.trim().is_empty() {
            if !block.is_empty() {
                out.push(parse_block(&block)?);
                block.clear();
            }
        } else if !line.trim_start().starts_with('#') {
            block.push((i + 1, line));
        }
    }
    Ok(out)
}

fn parse_block(lines: &[(usize, &str)]) -> Result<Certificate, FormatError> {
    let first = lines[0].0;
    let mut shape = None;
    let (mut p, mut lambda, mut bound, mut c, mut witnesses) = (None, None, None, None, None);
    for &(ln, line) in lines {
        let (k, v) = line.split_once(':').ok_or_else(|| bad(ln, "expected `key: value`"))?;
        let v = v.trim();
        let slot_taken = match k.trim() {
            "shape" => shape.replace(v.parse::<Shape>().map_err(|e| bad(ln, e.to_string()))?).is_some(),
            "p" => p.replace(num(ln, v)?).is_some(),
            "lambda" => lambda.replace(num(ln, v)?).is_some(),
            "M" => bound.replace(num(ln, v)?).is_some(),
            "c" => c.replace(num(ln, v)?).is_some(),
            "witnesses" => {
                let ws = v
                    .split(',')
                    .map(|t| match t.split_once(':') {
                        Some((a, b)) => Ok(Witness::Pair(num(ln, a)?, num(ln, b)?)),
                        None => Ok(Witness::Single(num(ln, t)?)),
                    })
                    .collect::<Result<Vec<_>, FormatError>>()?;
                witnesses.replace(ws).is_some()
            }
            other => return Err(bad(ln, format!("unknown key `{other}`"))),
        };
        if slot_taken {
            return Err(bad(ln, "duplicate key"));
        }
    }
    let need = |what: &str| bad(first, format!("certificate missing `{what}`"));
    Ok(Certificate {
        shape: shape.ok_or_else(|| need("shape"))?,
        p: p.ok_or_else(|| need("p"))?,
        lambda: lambda.ok_or_else(|| need("lambda"))?,
        bound: bound.ok_or_else(|| need("M"))?,
        c,
        witnesses: witnesses.ok_or_else(|| need("witnesses"))?,
    })
}
