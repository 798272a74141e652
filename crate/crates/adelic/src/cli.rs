//! Argument parsing and command dispatch.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::client::{atomic_write, Client};
use crate::error::AppError;
use crate::fixtures;
use crate::pipeline::{analyze_form, analyze_pair, Options};
use crate::report::{Inputs, Report};
use crate::schema::{load_newform_file, parse_newform, LoadedForm};
use crate::selftest::{run_suite, SUITES};

#[derive(Debug, Parser)]
#[command(name = "adelic-image", version, about = "Adelic images of modular forms and their pairs")]
pub struct Cli {
    /// Cache directory for fetched forms.
    #[arg(long, global = true, env = "ADELIC_IMAGE_CACHE")]
    pub cache_dir: Option<PathBuf>,
    /// Never touch the network; cache misses are errors.
    #[arg(long, global = true)]
    pub offline: bool,
    /// Seed for every randomised step.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads (0 picks the number of cores).
    #[arg(long, global = true, default_value_t = 0)]
    pub workers: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Download and cache forms by label.
    Fetch { labels: Vec<String> },
    /// Analyse one form at a range of primes.
    Analyze {
        /// Label or path to a newform JSON file.
        form: String,
        #[command(flatten)]
        common: Common,
    },
    /// Analyse a pair of forms.
    Pair {
        f: String,
        g: String,
        #[command(flatten)]
        common: Common,
        /// Run the tensor-witness criteria.
        #[arg(long)]
        hyp: bool,
        /// Allow the weight-one criterion without the exceptional-image check.
        #[arg(long)]
        generic_weight_one: bool,
    },
    /// Run a built-in self-test suite (or `all`).
    Selftest {
        #[arg(default_value = "all")]
        suite: String,
    },
}

#[derive(Debug, Args)]
pub struct Common {
    /// Inclusive prime range, `A..B`.
    #[arg(long, default_value = "5..30")]
    pub primes: String,
    /// Coefficient bound (at least 37, at most the stored bound).
    #[arg(long)]
    pub bound: Option<u64>,
    /// Write the JSON report here (`-` for stdout).
    #[arg(long)]
    pub json: Option<PathBuf>,
}

pub fn default_cache_dir() -> PathBuf {
    std::env::var_os("HOME")
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("."))
        .join(".cache")
        .join("adelic-image")
}

pub fn parse_primes(s: &str) -> Result<(u64, u64), AppError> {
    let bad = || AppError::Usage(format!("expected a prime range A..B, got {s:?}"));
    let (a, b) = s.split_once("..").ok_or_else(bad)?;
    let a: u64 = a.trim().parse().map_err(|_| bad())?;
    let b: u64 = b.trim().parse().map_err(|_| bad())?;
    if a > b || b > 100_000 {
        return Err(bad());
    }
    Ok((a, b))
}

/// A path if it exists, then the cache, then the vendored fixtures, then the network.
pub fn resolve(client: &Client, spec: &str) -> Result<LoadedForm, AppError> {
    let path = Path::new(spec);
    if path.is_file() {
        return load_newform_file(path);
    }
    let cached = client.form_path(spec);
    if cached.is_file() {
        return load_newform_file(&cached);
    }
    if let Some(text) = fixtures::get(spec) {
        return parse_newform(text);
    }
    load_newform_file(&client.fetch(spec)?)
}

fn emit(out: &mut dyn Write, report: &Report, json: &Option<PathBuf>) -> Result<(), AppError> {
    let stdout = Path::new("<stdout>");
    match json {
        Some(p) if p.as_os_str() == "-" => {
            out.write_all(report.to_json().as_bytes()).map_err(|e| AppError::io(stdout, e))
        }
        Some(p) => {
            atomic_write(p, &report.to_json())?;
            out.write_all(report.to_text().as_bytes()).map_err(|e| AppError::io(stdout, e))
        }
        None => out.write_all(report.to_text().as_bytes()).map_err(|e| AppError::io(stdout, e)),
    }
}

fn options(common: &Common, seed: u64, hyp: bool, generic_weight_one: bool) -> Result<Options, AppError> {
    Ok(Options { primes: parse_primes(&common.primes)?, bound: common.bound, seed, hyp, generic_weight_one })
}

fn inputs(forms: &[&LoadedForm], opts: &Options, bound: u64) -> Inputs {
    Inputs {
        forms: forms.iter().map(|f| f.form.label.clone()).collect(),
        primes: [opts.primes.0, opts.primes.1],
        bound,
        seed: opts.seed,
        hyp: opts.hyp,
    }
}

/// Run a parsed command against `client`, writing human output to `out`.
pub fn run(cli: &Cli, client: &Client, out: &mut dyn Write) -> Result<(), AppError> {
    let stdout = Path::new("<stdout>");
    match &cli.command {
        Command::Fetch { labels } => {
            for l in labels {
                let p = client.fetch(l)?;
                writeln!(out, "{l}\t{}", p.display()).map_err(|e| AppError::io(stdout, e))?;
            }
            Ok(())
        }
        Command::Analyze { form, common } => {
            let opts = options(common, cli.seed, false, false)?;
            let lf = resolve(client, form)?;
            let analysis = analyze_form(&lf, &opts)?;
            let mut report = Report::new("analyze", inputs(&[&lf], &opts, analysis.coefficient_bound));
            report.forms.push(analysis);
            emit(out, &report, &common.json)
        }
        Command::Pair { f, g, common, hyp, generic_weight_one } => {
            let opts = options(common, cli.seed, *hyp, *generic_weight_one)?;
            let lf = resolve(client, f)?;
            let lg = resolve(client, g)?;
            let af = analyze_form(&lf, &opts)?;
            let ag = analyze_form(&lg, &opts)?;
            let bound = af.coefficient_bound.min(ag.coefficient_bound);
            let (pair, assumptions) = analyze_pair(&lf, &lg, &opts)?;
            let mut report = Report::new("pair", inputs(&[&lf, &lg], &opts, bound));
            report.forms = vec![af, ag];
            report.pair = Some(pair);
            report.assume(assumptions);
            emit(out, &report, &common.json)
        }
        Command::Selftest { suite } => {
            let names: Vec<&str> = if suite == "all" { SUITES.to_vec() } else { vec![suite.as_str()] };
            let mut failed = Vec::new();
            for name in names {
                let r = run_suite(name, cli.seed).ok_or_else(|| {
                    AppError::Usage(format!("unknown suite {name:?}; choose from {} or all", SUITES.join(", ")))
                })?;
                writeln!(out, "{} {}", if r.passed() { "PASS" } else { "FAIL" }, r.summary())
                    .map_err(|e| AppError::io(stdout, e))?;
                for c in &r.checks {
                    let tag = if c.passed { "ok" } else { "FAILED" };
                    writeln!(out, "  {tag} {}: {}", c.name, c.detail).map_err(|e| AppError::io(stdout, e))?;
                }
                if !r.passed() {
                    failed.push(name.to_string());
                }
            }
            if failed.is_empty() {
                Ok(())
            } else {
                Err(AppError::Selftest(failed.join(", ")))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_ranges() {
        assert_eq!(parse_primes("5..30").unwrap(), (5, 30));
        assert!(matches!(parse_primes("30..5"), Err(AppError::Usage(_))));
        assert!(matches!(parse_primes("5-30"), Err(AppError::Usage(_))));
    }

    #[test]
    fn parses_pair_command() {
        let cli = Cli::try_parse_from([
            "adelic-image",
            "--offline",
            "pair",
            "11.2.a.a",
            "37.2.a.a",
            "--primes",
            "5..13",
            "--hyp",
        ])
        .unwrap();
        assert!(cli.offline);
        assert!(matches!(cli.command, Command::Pair { hyp: true, .. }));
    }
}
