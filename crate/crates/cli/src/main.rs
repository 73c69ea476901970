//! `tracelab`: runs the verification suites and writes a JSON report.

use clap::error::ErrorKind;
use clap::{Args, CommandFactory, Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;
use tracelab::cats::axioms::AxiomId;
use tracelab::cats::CategoryId;
use tracelab::mat::Tol;
use tracelab::suite::{run, to_canonical_json, SuiteConfig, SuiteKind};

/// Overrides the default equality tolerance when `--tol` is not given.
const TOL_ENV: &str = "TRACELAB_TOL";

#[derive(Parser, Debug)]
#[command(
    name = "tracelab",
    version,
    about = "Property-based verification of partially traced categories"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Partial-trace axioms on every selected category, plus worked examples.
    Axioms(Opts),
    /// Int construction: path composition, compact structure, N preserves traces.
    Intp(Opts),
    /// Coproduct completions and the functors Φ and Ψ.
    Completions(Opts),
    /// Day convolution, Kan extensions and the bang comonad on finite examples.
    Presheaf(Opts),
    /// Every suite.
    All(Opts),
}

#[derive(Args, Debug, Clone)]
struct Opts {
    /// Master seed; every sample derives its own generator from it.
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Samples per (category, axiom).
    #[arg(long, default_value_t = 200, value_parser = positive)]
    samples: u64,
    /// Cap on atom dimensions, on top of each category's own cap.
    #[arg(long, value_parser = positive)]
    dim_max: Option<u64>,
    /// Equality tolerance (default 1e-8, or $TRACELAB_TOL).
    #[arg(long)]
    tol: Option<f64>,
    /// Singular-value cutoff, relative to the largest singular value (floored at 1).
    #[arg(long, default_value_t = Tol::default().rank_tol)]
    rank_tol: f64,
    /// Eigenvalue floor for positivity tests.
    #[arg(long, default_value_t = Tol::default().psd_tol)]
    psd_tol: f64,
    /// Write the JSON report here.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Categories to check (repeatable or comma separated; default all).
    #[arg(long = "category", value_delimiter = ',', value_parser = parse_category)]
    categories: Vec<CategoryId>,
    /// Axioms to check (repeatable or comma separated; default all).
    #[arg(long = "axioms", value_delimiter = ',', value_parser = parse_axiom)]
    axioms: Vec<AxiomId>,
    /// Worker threads; results do not depend on this.
    #[arg(long, default_value_t = 1, value_parser = positive)]
    jobs: u64,
}

fn positive(s: &str) -> Result<u64, String> {
    match s.parse::<u64>() {
        Ok(n) if n >= 1 => Ok(n),
        _ => Err("expected a positive integer".into()),
    }
}

fn parse_category(s: &str) -> Result<CategoryId, String> {
    CategoryId::parse(s).ok_or_else(|| {
        let names: Vec<&str> = CategoryId::ALL.iter().map(|c| c.name()).collect();
        format!(
            "unknown category '{s}' (expected one of {})",
            names.join(", ")
        )
    })
}

fn parse_axiom(s: &str) -> Result<AxiomId, String> {
    AxiomId::parse(s).ok_or_else(|| {
        let names: Vec<&str> = AxiomId::ALL.iter().map(|a| a.name()).collect();
        format!("unknown axiom '{s}' (expected one of {})", names.join(", "))
    })
}

fn eq_tol(flag: Option<f64>) -> Result<f64, String> {
    if let Some(t) = flag {
        return Ok(t);
    }
    match std::env::var(TOL_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| format!("{TOL_ENV}='{v}' is not a number")),
        Err(_) => Ok(Tol::default().eq_tol),
    }
}

fn config(o: &Opts) -> Result<SuiteConfig, String> {
    let d = SuiteConfig::default();
    let cfg = SuiteConfig {
        seed: o.seed,
        samples: o.samples as usize,
        dim_max: o.dim_max.map(|d| d as usize),
        tol: Tol {
            eq_tol: eq_tol(o.tol)?,
            rank_tol: o.rank_tol,
            psd_tol: o.psd_tol,
        },
        categories: if o.categories.is_empty() {
            d.categories
        } else {
            o.categories.clone()
        },
        axioms: if o.axioms.is_empty() {
            d.axioms
        } else {
            o.axioms.clone()
        },
        jobs: o.jobs as usize,
    };
    cfg.validate()?;
    Ok(cfg)
}

fn summarize(report: &serde_json::Value) {
    let Some(suites) = report["suites"].as_object() else {
        return;
    };
    for (name, s) in suites {
        let verdict = if s["pass"].as_bool() == Some(true) {
            "PASS"
        } else {
            "FAIL"
        };
        let entries = s["entries"].as_array().map_or(0, Vec::len);
        let checks = s["checks"].as_array().map_or(0, Vec::len);
        println!("{name}: {verdict} ({entries} axiom entries, {checks} checks)");
        for e in s["entries"].as_array().into_iter().flatten() {
            if e["pass"].as_bool() != Some(true) {
                println!(
                    "  FAIL {} {}: {} failures, {} skipped of {}, max deviation {}",
                    e["category"].as_str().unwrap_or("?"),
                    e["axiom"].as_str().unwrap_or("?"),
                    e["failures"],
                    e["skipped"],
                    e["attempted"],
                    e["max_deviation"]
                );
            }
        }
        for c in s["checks"].as_array().into_iter().flatten() {
            if c["pass"].as_bool() != Some(true) {
                println!(
                    "  FAIL {}: max deviation {}",
                    c["name"].as_str().unwrap_or("?"),
                    c["max_deviation"]
                );
            }
        }
    }
    let verdict = if report["pass"].as_bool() == Some(true) {
        "PASS"
    } else {
        "FAIL"
    };
    println!("overall: {verdict}");
}

/// Parses argv; on a bad invocation prints the error and the relevant usage line, then exits 2.
fn parse_args() -> Result<Cli, ExitCode> {
    let argv: Vec<String> = std::env::args().collect();
    match Cli::try_parse_from(&argv) {
        Ok(cli) => Ok(cli),
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            e.exit()
        }
        Err(e) => {
            let rendered = e.render().to_string();
            if rendered.contains("Usage:") {
                eprint!("{rendered}");
            } else {
                let mut cmd = Cli::command();
                cmd.build();
                let usage = match argv.get(1).and_then(|name| cmd.find_subcommand_mut(name)) {
                    Some(sub) => sub.render_usage(),
                    None => cmd.render_usage(),
                };
                let message = rendered.lines().next().unwrap_or_default();
                eprintln!("{message}\n\n{usage}\n\nFor more information, try '--help'.");
            }
            Err(ExitCode::from(2))
        }
    }
}

fn main() -> ExitCode {
    let cli = match parse_args() {
        Ok(c) => c,
        Err(code) => return code,
    };
    let (kinds, opts): (Vec<SuiteKind>, &Opts) = match &cli.command {
        Command::Axioms(o) => (vec![SuiteKind::Axioms], o),
        Command::Intp(o) => (vec![SuiteKind::Intp], o),
        Command::Completions(o) => (vec![SuiteKind::Completions], o),
        Command::Presheaf(o) => (vec![SuiteKind::Presheaf], o),
        Command::All(o) => (SuiteKind::ALL.to_vec(), o),
    };
    let cfg = match config(opts) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let report = run(&kinds, &cfg);
    if let Some(path) = &opts.report {
        if let Err(e) = std::fs::write(path, to_canonical_json(&report)) {
            eprintln!("error: cannot write report to {}: {e}", path.display());
            return ExitCode::from(2);
        }
    }
    summarize(&report);
    if report["pass"].as_bool() == Some(true) {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
