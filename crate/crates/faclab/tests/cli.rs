use std::collections::HashSet;
use std::fs;
use std::path::Path;
use std::process::Command;

use faclab::config::COMMANDS;
use faclab::{run, CliError, Config, RunOptions};
use faclab_core::modular::PrimeModulus;
use faclab_core::represent::{coverage_report, CoverageShape};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_faclab"))
}

fn opts(dir: &Path) -> RunOptions {
    RunOptions {
        out: Some(dir.to_owned()),
        quiet: true,
        timings: false,
    }
}

fn config(text: &str) -> Config {
    Config::parse(text).unwrap()
}

fn csv_rows(path: &Path) -> Vec<Vec<String>> {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .map(|l| l.split(',').map(str::to_owned).collect())
        .collect()
}

#[test]
fn growth_rows_match_brute_force() {
    let dir = tempfile::tempdir().unwrap();
    run(&config("command = growth\np = 10007\nn = 50:1000:50\n"), &opts(dir.path())).unwrap();
    let rows = csv_rows(&dir.path().join("growth.csv"));
    assert_eq!(rows.len(), 21);
    let p = 10007u64;
    let mut fact = 1u64;
    let mut a = Vec::new();
    for (n, row) in (1..=1000u64).filter(|n| n % 50 == 0).zip(&rows[1..]) {
        while (a.len() as u64) < n {
            fact = fact * (a.len() as u64 + 1) % p;
            a.push(fact);
        }
        let set: HashSet<u64> = a.iter().copied().collect();
        let prod: HashSet<u64> = set.iter().flat_map(|x| set.iter().map(move |y| x * y % p)).collect();
        let inv = |y: u64| (1..p).find(|z| y * z % p == 1).unwrap();
        let invs: Vec<u64> = set.iter().map(|&y| inv(y)).collect();
        let quot: HashSet<u64> = set.iter().flat_map(|x| invs.iter().map(move |z| x * z % p)).collect();
        assert_eq!(row[1], n.to_string());
        assert_eq!(row[2], set.len().to_string());
        assert_eq!(row[3], prod.len().to_string());
        assert_eq!(row[4], quot.len().to_string());
    }
}

#[test]
fn repeated_runs_are_byte_identical() {
    let cfgs = [
        "command = card\np = 10007\nn = 100,400\nstrategy = sampled\nsamples = 2000\nseed = 9\nexport = true\n",
        "command = ruzsa-check\np = 3..500\ntrials = 30\nsize = 40\nseed = 3\n",
        "command = expsum\np = 1009\nn = 30\nstrategy = sampled\nsamples = 64\nseed = 5\n",
        "command = solve\np = 3..60\nshape = product_plus_factorials\nk = 2\n",
    ];
    for text in cfgs {
        let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
        let c = config(text);
        run(&c, &opts(a.path())).unwrap();
        run(&c, &opts(b.path())).unwrap();
        let manifest = fs::read_to_string(a.path().join("manifest.json")).unwrap();
        assert_eq!(manifest, fs::read_to_string(b.path().join("manifest.json")).unwrap());
        let json: serde_json::Value = serde_json::from_str(&manifest).unwrap();
        for out in json["outputs"].as_array().unwrap() {
            let path = out["path"].as_str().unwrap();
            assert_eq!(fs::read(a.path().join(path)).unwrap(), fs::read(b.path().join(path)).unwrap(), "{path}");
        }
    }
}

#[test]
fn manifest_lists_digests_of_every_output() {
    let dir = tempfile::tempdir().unwrap();
    run(&config("command = erdos-stats\np = 100..200\n"), &opts(dir.path())).unwrap();
    let json: serde_json::Value = serde_json::from_slice(&fs::read(dir.path().join("manifest.json")).unwrap()).unwrap();
    assert_eq!(json["command"], "erdos-stats");
    assert_eq!(json["config"]["p"], "100..200");
    assert_eq!(json["runtime_ms"], serde_json::Value::Null);
    let names: Vec<&str> = json["outputs"].as_array().unwrap().iter().map(|o| o["path"].as_str().unwrap()).collect();
    assert_eq!(names, ["erdos.csv", "erdos_summary.csv"]);
    for o in json["outputs"].as_array().unwrap() {
        assert_eq!(o["sha256"].as_str().unwrap().len(), 64);
    }
}

#[test]
fn failed_runs_leave_no_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let err = run(&config("command = erdos-stats\np = 3..300\ncap = 200\n"), &opts(dir.path())).unwrap_err();
    assert_eq!(err.exit_code(), 3);
    assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 0);
}

#[test]
fn all_lambda_solve_matches_coverage_report() {
    let dir = tempfile::tempdir().unwrap();
    run(
        &config("command = solve\np = 5..80\nshape = k_term_product\nk = 2\nm = 6\n"),
        &opts(dir.path()),
    )
    .unwrap();
    for row in &csv_rows(&dir.path().join("coverage.csv"))[1..] {
        let p: u64 = row[0].parse().unwrap();
        let bound: u64 = row[3].parse().unwrap();
        let report = coverage_report(
            &PrimeModulus::new(p).unwrap(),
            CoverageShape::KTermProduct { k: 2, bound },
            1 << 20,
        )
        .unwrap();
        assert_eq!(row[4], report.covered.to_string());
    }
    let certs = fs::read_to_string(dir.path().join("certificates.txt")).unwrap();
    for c in faclab::formats::parse_certificates(&certs).unwrap() {
        assert!(faclab_core::represent::verify_certificate(&c).unwrap().is_valid());
    }
}

#[test]
fn every_csv_has_its_documented_header() {
    let cases = [
        "command = factorials\np = 101\nn = 20\n",
        "command = card\np = 101\nn = 20\n",
        "command = growth\np = 101\nn = 20\n",
        "command = energy\np = 101\nn = 20\nm = 10\n",
        "command = expsum\np = 101\nn = 20\n",
        "command = moments\np = 101\nn = 20\n",
        "command = solve\np = 101\nshape = two_product\n",
        "command = cp-search\np = 101\n",
        "command = wilson-check\np = 101\n",
        "command = erdos-stats\np = 101\n",
        "command = ruzsa-check\np = 101\nseed = 1\ntrials = 3\n",
        "command = katz-shen\np = 101\nseed = 1\ntrials = 2\n",
        "command = cg-count\np = 101\n",
        "command = bounds\nprofile = product_set_small\np = 101\nn = 5\n",
    ];
    assert_eq!(cases.len(), COMMANDS.len());
    for text in cases {
        let dir = tempfile::tempdir().unwrap();
        let c = config(text);
        run(&c, &opts(dir.path())).unwrap();
        let spec = faclab::config::command(&c.command).unwrap();
        for (file, cols) in spec.outputs.iter().filter(|(f, _)| f.ends_with(".csv")) {
            let path = dir.path().join(file);
            if path.exists() {
                let first = fs::read_to_string(path).unwrap();
                assert_eq!(first.lines().next().unwrap(), *cols, "{file}");
            }
        }
        assert!(dir.path().join("manifest.json").exists());
    }
}

#[test]
fn config_roundtrip_for_every_command() {
    for spec in COMMANDS {
        let mut c = Config::new(spec.name);
        for f in spec.fields {
            if let Some(d) = f.default {
                c.set(f.key, d).unwrap();
            }
        }
        let again = Config::parse(&c.serialize()).unwrap();
        assert_eq!(again, c);
        assert_eq!(Config::parse(&again.serialize()).unwrap(), again);
    }
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let code = |args: &[&str]| bin().args(args).output().unwrap().status.code().unwrap();
    assert_eq!(code(&["wilson-check", "--out", out, "-q", "--p", "3..100"]), 0);
    assert_eq!(code(&["wilson-check", "--out", out, "-q", "--p", "100"]), 2);
    assert_eq!(code(&["growth", "--out", out, "-q", "--p", "101", "--n", "5", "--colour", "red"]), 2);
    assert_eq!(code(&["erdos-stats", "--out", out, "-q", "--p", "1009", "--cap", "1000"]), 3);
    assert_eq!(CliError::Verification(String::new()).exit_code(), 4);
}

#[test]
fn config_file_and_flag_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(&cfg, "command = wilson-check\np = 3..50\n").unwrap();
    let out = dir.path().join("o");
    let status = bin()
        .args(["wilson-check", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap(), "-q", "--p", "7"])
        .status()
        .unwrap();
    assert!(status.success());
    assert_eq!(fs::read_to_string(out.join("wilson.csv")).unwrap(), "p,checked,failures\n7,4,0\n");
    let wrong = bin()
        .args(["growth", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(wrong.status.code(), Some(2));
}

#[test]
fn help_documents_columns() {
    let out = bin().args(["growth", "--help"]).output().unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("growth.csv: p,n,set_len,product_len,quotient_len"));
}

#[test]
fn bad_resume_file_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cp = dir.path().join("cp.txt");
    fs::write(&cp, "101,50,91,12345\n").unwrap();
    let mut c = config("command = factorials\np = 101\nstart = 50\nn = 10\n");
    c.set("resume", cp.to_str().unwrap()).unwrap();
    let err = run(&c, &opts(&dir.path().join("o"))).unwrap_err();
    assert!(matches!(err, CliError::Format { .. }), "{err}");
}

#[test]
fn wilson_check_below_ten_thousand() {
    let dir = tempfile::tempdir().unwrap();
    run(&config("command = wilson-check\np = 3..10000\n"), &opts(dir.path())).unwrap();
    let rows = csv_rows(&dir.path().join("wilson.csv"));
    assert_eq!(rows.len() - 1, 1228);
    assert!(rows[1..].iter().all(|r| r[2] == "0"));
}
