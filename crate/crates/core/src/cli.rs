//! Command-line front end. [`run`] takes the arguments and output streams so
//! it can be driven from tests; `main` only forwards the exit code.
//!
//! Exit codes: 0 success, 1 failed verification or internal error, 2 usage
//! error (bad arguments, bounds, malformed input).

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::bipartite::{canonicalize, count_for_key, CountCache, DegreeSequence};
use crate::error::Error;
use crate::growth::{
    build_core, build_ntilde, build_reduced_system, growth_coefficients, growth_series_with_cache,
};
use crate::linalg::BigMatrix;
use crate::oracle::{full_transition_matrix_with_bound, verify_all, AUTOMATON_BOUND};
use crate::partitions::refinement_matrix;

#[derive(Parser, Debug)]
#[command(
    name = "braid-growth",
    version,
    about = "Growth series of positive braid monoids over simple elements"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Coefficients a_0..a_L of the growth series of B_n+.
    Growth {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        n: u32,
        #[arg(long, default_value_t = 10)]
        terms: usize,
        #[arg(long, value_enum, default_value_t = Format::Plain)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Count cache file, read if present and rewritten afterwards.
        #[arg(long)]
        cache: Option<PathBuf>,
    },
    /// Number of bipartite graphs with the given degree sequences.
    CountGraphs {
        /// Comma-separated degrees, e.g. 2,1,1.
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long, value_enum, default_value_t = Format::Plain)]
        format: Format,
        #[arg(long)]
        cache: Option<PathBuf>,
    },
    /// One of the labelled matrices of the construction.
    Matrix {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        n: u32,
        #[arg(long, value_enum)]
        kind: MatrixKind,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = AUTOMATON_BOUND)]
        oracle_bound: u32,
        #[arg(long)]
        cache: Option<PathBuf>,
    },
    /// Checks the reduced system against the full automaton.
    Verify {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        n: u32,
        #[arg(long, default_value_t = 4)]
        max_len: usize,
        #[arg(long, default_value_t = AUTOMATON_BOUND)]
        oracle_bound: u32,
    },
    /// Wall time for building T̃ and streaming coefficients, as CSV.
    Bench {
        /// Comma-separated strand counts.
        #[arg(long)]
        n_list: String,
        #[arg(long, default_value_t = 20)]
        terms: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Plain,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MatrixKind {
    Ttilde,
    Core,
    Ntilde,
    M,
    FullT,
}

enum Failure {
    Usage(String),
    Failed(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvariantViolation(_) | Error::Io(_) => Failure::Failed(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Failed(e.to_string())
    }
}

type Outcome = std::result::Result<(), Failure>;

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(()) => 0,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
        Err(Failure::Failed(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            1
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write) -> Outcome {
    match command {
        Command::Growth {
            n,
            terms,
            format,
            out: path,
            cache,
        } => cmd_growth(n, terms, format, path.as_deref(), cache.as_deref(), out),
        Command::CountGraphs {
            a,
            b,
            format,
            cache,
        } => cmd_count_graphs(&a, &b, format, cache.as_deref(), out),
        Command::Matrix {
            n,
            kind,
            format,
            out: path,
            oracle_bound,
            cache,
        } => cmd_matrix(
            n,
            kind,
            format,
            path.as_deref(),
            oracle_bound,
            cache.as_deref(),
            out,
        ),
        Command::Verify {
            n,
            max_len,
            oracle_bound,
        } => cmd_verify(n, max_len, oracle_bound, out),
        Command::Bench { n_list, terms } => cmd_bench(&n_list, terms, out),
    }
}

fn load_cache(path: Option<&Path>) -> Result<CountCache, Failure> {
    match path {
        Some(p) if p.exists() => Ok(CountCache::load(BufReader::new(File::open(p)?))?),
        _ => Ok(CountCache::new()),
    }
}

fn save_cache(path: Option<&Path>, cache: &CountCache) -> Outcome {
    if let Some(p) = path {
        let mut w = BufWriter::new(File::create(p)?);
        cache.save(&mut w)?;
        w.flush()?;
    }
    Ok(())
}

fn emit(text: &str, path: Option<&Path>, out: &mut dyn Write) -> Outcome {
    match path {
        Some(p) => std::fs::write(p, text)?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn cmd_growth(
    n: u32,
    terms: usize,
    format: Format,
    path: Option<&Path>,
    cache_path: Option<&Path>,
    out: &mut dyn Write,
) -> Outcome {
    let mut cache = load_cache(cache_path)?;
    let series = growth_series_with_cache(n, terms, &mut cache)?;
    save_cache(cache_path, &cache)?;
    let text = match format {
        Format::Json => series.to_json() + "\n",
        Format::Csv => series.to_csv(),
        Format::Plain => series.to_plain(),
    };
    emit(&text, path, out)
}

fn cmd_count_graphs(
    a: &str,
    b: &str,
    format: Format,
    cache_path: Option<&Path>,
    out: &mut dyn Write,
) -> Outcome {
    let a: DegreeSequence = a.parse()?;
    let b: DegreeSequence = b.parse()?;
    let key = canonicalize(&a, &b)?;
    let mut cache = load_cache(cache_path)?;
    let count = count_for_key(&key, &mut cache);
    save_cache(cache_path, &cache)?;
    let text = match format {
        Format::Plain => format!("{count}\n"),
        Format::Csv => format!("a,b,count\n{},{},{count}\n", key.first(), key.second()),
        Format::Json => {
            json!({"a": key.first().to_string(), "b": key.second().to_string(), "count": count.to_string()})
                .to_string()
                + "\n"
        }
    };
    emit(&text, None, out)
}

fn cmd_matrix(
    n: u32,
    kind: MatrixKind,
    format: Format,
    path: Option<&Path>,
    oracle_bound: u32,
    cache_path: Option<&Path>,
    out: &mut dyn Write,
) -> Outcome {
    let mut cache = load_cache(cache_path)?;
    let matrix = match kind {
        MatrixKind::Ttilde => build_reduced_system(n, &mut cache)?.ttilde().clone(),
        MatrixKind::Core => build_core(n)?,
        MatrixKind::Ntilde => build_ntilde(n, &mut cache)?,
        MatrixKind::M => refinement_matrix(n)?,
        MatrixKind::FullT => full_transition_matrix_with_bound(n, oracle_bound)?.t,
    };
    save_cache(cache_path, &cache)?;
    let text = match format {
        Format::Json => matrix.to_json() + "\n",
        Format::Csv => matrix_csv(&matrix),
        Format::Plain => matrix_plain(&matrix),
    };
    emit(&text, path, out)
}

/// Header row of column labels, then one labelled row per matrix row.
fn matrix_csv(m: &BigMatrix) -> String {
    let label = |labels: Option<&[String]>, i: usize| {
        labels.map_or_else(|| i.to_string(), |l| l[i].clone())
    };
    let mut s = String::new();
    let header: Vec<String> = (0..m.cols()).map(|j| label(m.col_labels(), j)).collect();
    s.push_str(&format!(",{}\n", header.join(",")));
    for i in 0..m.rows() {
        let row: Vec<String> = m.row(i).iter().map(|x| x.to_string()).collect();
        s.push_str(&format!("{},{}\n", label(m.row_labels(), i), row.join(",")));
    }
    s
}

/// Right-aligned columns, no labels.
fn matrix_plain(m: &BigMatrix) -> String {
    let cells: Vec<Vec<String>> = (0..m.rows())
        .map(|i| m.row(i).iter().map(|x| x.to_string()).collect())
        .collect();
    let width = cells.iter().flatten().map(|c| c.len()).max().unwrap_or(1);
    let mut s = String::new();
    for row in cells {
        let padded: Vec<String> = row.iter().map(|c| format!("{c:>width$}")).collect();
        s.push_str(padded.join(" ").trim_end());
        s.push('\n');
    }
    s
}

fn cmd_verify(n: u32, max_len: usize, bound: u32, out: &mut dyn Write) -> Outcome {
    let report = verify_all(n, max_len, bound, &mut CountCache::new())?;
    writeln!(out, "{}", report.to_json())?;
    if report.all_pass() {
        Ok(())
    } else {
        let failed: Vec<&str> = report
            .entries
            .iter()
            .filter(|e| !e.pass)
            .map(|e| e.identity.as_str())
            .collect();
        Err(Failure::Failed(format!("failed: {}", failed.join("; "))))
    }
}

fn parse_n_list(list: &str) -> Result<Vec<u32>, Failure> {
    let ns: Vec<u32> = list
        .split(',')
        .map(|t| t.trim().parse::<u32>())
        .collect::<Result<_, _>>()
        .map_err(|_| Failure::Usage(format!("bad n list {list:?}")))?;
    if ns.is_empty() || ns.iter().any(|&n| n < 2) {
        return Err(Failure::Usage(format!(
            "every n in {list:?} must be at least 2"
        )));
    }
    Ok(ns)
}

fn cmd_bench(list: &str, terms: usize, out: &mut dyn Write) -> Outcome {
    let ns = parse_n_list(list)?;
    let mut cache = CountCache::new();
    writeln!(out, "n,seconds")?;
    for n in ns {
        let start = Instant::now();
        let system = build_reduced_system(n, &mut cache)?;
        growth_coefficients(&system, terms);
        writeln!(out, "{n},{:.3}", start.elapsed().as_secs_f64())?;
    }
    Ok(())
}
