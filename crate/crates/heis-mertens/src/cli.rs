//! Command-line interface. Exit codes: 0 success, 1 failed run or failed
//! check, 2 bad invocation or bad order file.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use heis_mertens_core::constants::{self, ArithmeticData};
use heis_mertens_core::counting::{brute_force_units, psi_table, EquidistReport};
use heis_mertens_core::{Order, Q};
use serde::Serialize;

use crate::engine::{compute_units, histogram, Cache};
use crate::order_spec::load_order;
use crate::{parse_rational, rational_string, report, selftest};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "heis-mertens", version, about = "Counting and equidistribution of rational points in Heis_7")]
pub struct Cli {
    /// Builtin order (hurwitz, da3) or path to an order-spec JSON file.
    #[arg(long, global = true, default_value = "hurwitz")]
    pub order: String,
    /// Worker threads for counting.
    #[arg(long, global = true, default_value_t = 1)]
    pub threads: usize,
    /// Output file (standard output if absent).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Levels {
    /// Comma-separated ascending levels, e.g. `1,2,4,8` or `1/2,3`.
    #[arg(long, conflicts_with = "s_max")]
    pub s_grid: Option<String>,
    /// A single level.
    #[arg(long)]
    pub s_max: Option<String>,
    /// Restrict to `α, c ∈ scale·O`.
    #[arg(long, default_value_t = 1)]
    pub scale: i64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Count orbits of primitive triples and fit the power law.
    Count(Levels),
    /// Histogram of representatives over the 128 dyadic cells.
    Equidist(Levels),
    /// Table of closed-form constants with their checks.
    Constants {
        /// Discriminant (taken from --order if absent).
        #[arg(long, requires = "units")]
        da: Option<u64>,
        /// Number of units of the order.
        #[arg(long, requires = "da")]
        units: Option<u64>,
        /// Class number, reported as the number of cusps.
        #[arg(long)]
        class_number: Option<u64>,
    },
    /// Randomised invariant checks of the hyperbolic kernel.
    GeomSelftest {
        #[arg(long, default_value_t = 1e-9)]
        tol_exact: f64,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
    /// Compare the counting engine with the brute-force oracle for `s = 1..=S`.
    Oracle {
        #[arg(long, default_value_t = 3)]
        s: u64,
    },
}

#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Run(String),
}

impl Failure {
    pub fn code(&self) -> i32 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Run(_) => 1,
        }
    }
}

fn usage(m: impl Into<String>) -> Failure {
    Failure::Usage(m.into())
}

fn levels(l: &Levels) -> Result<Vec<Q>, Failure> {
    if l.scale < 1 {
        return Err(usage("--scale must be at least 1"));
    }
    let text = match (&l.s_grid, &l.s_max) {
        (Some(g), None) => g.clone(),
        (None, Some(m)) => m.clone(),
        _ => return Err(usage("give exactly one of --s-grid and --s-max")),
    };
    let grid: Vec<Q> = text
        .split(',')
        .map(|t| parse_rational(t).ok_or_else(|| usage(format!("not an exact number: {t:?}"))))
        .collect::<Result<_, _>>()?;
    if grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(usage("--s-grid must be strictly ascending"));
    }
    if grid.iter().any(|s| *s < Q::from_integer(0.into())) {
        return Err(usage("levels must be nonnegative"));
    }
    Ok(grid)
}

fn order(cli: &Cli) -> Result<Order, Failure> {
    load_order(&cli.order).map_err(|e| usage(format!("order {:?}: {e}", cli.order)))
}

fn units_for(cli: &Cli, order: &Order, grid: &[Q], scale: i64) -> Result<Vec<heis_mertens_core::counting::CUnit>, Failure> {
    let cache = Cache::from_env(order, scale).map_err(|e| Failure::Run(format!("checkpoint directory: {e}")))?;
    let top = grid.last().cloned().unwrap_or_else(|| Q::from_integer(0.into()));
    Ok(compute_units(order, &top, scale, cli.threads, cache.as_ref()))
}

fn json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("reports serialise");
    s.push('\n');
    s
}

/// Everything except process exit; returns the text to write and whether
/// the run passed its own checks.
pub fn execute(cli: &Cli) -> Result<(String, bool), Failure> {
    if cli.format == Format::Csv && !matches!(cli.command, Command::Count(_)) {
        return Err(usage("--format csv is only available for count"));
    }
    if cli.threads == 0 {
        return Err(usage("--threads must be at least 1"));
    }
    match &cli.command {
        Command::Count(l) => {
            let grid = levels(l)?;
            let order = order(cli)?;
            let units = units_for(cli, &order, &grid, l.scale)?;
            let r = report::count_report(&order, l.scale, &psi_table(&units, &grid));
            let text = match cli.format {
                Format::Json => json(&r),
                Format::Csv => report::count_csv(&r).map_err(|e| Failure::Run(e.to_string()))?,
            };
            Ok((text, true))
        }
        Command::Equidist(l) => {
            let grid = levels(l)?;
            let order = order(cli)?;
            let units = units_for(cli, &order, &grid, l.scale)?;
            let mut hs = Vec::new();
            for s in &grid {
                match EquidistReport::from_counts(s.clone(), histogram(&units, s)) {
                    Ok(h) => hs.push(h),
                    Err(_) => return Err(Failure::Run(format!("no points at s = {}", rational_string(s)))),
                }
            }
            Ok((json(&report::equidist_report(&order, l.scale, &hs)), true))
        }
        Command::Constants { da, units, class_number } => {
            let d = match (da, units) {
                (Some(da), Some(u)) => ArithmeticData::new(*da, *u, *class_number).map_err(|e| usage(e.to_string()))?,
                _ => {
                    let o = order(cli)?;
                    let mut d = report::arithmetic_data(&o);
                    d.class_number = *class_number;
                    d
                }
            };
            let checks = constants::zeta_and_integrals(2).map_err(|e| Failure::Run(e.to_string()))?;
            let r = report::constants_report(&d, &checks);
            let ok = r.identities.iter().all(|(_, ok)| *ok);
            Ok((json(&r), ok))
        }
        Command::GeomSelftest { tol_exact, tol, samples, seed } => {
            let checks = selftest::run(*seed, *samples, selftest::Tolerances { exact: *tol_exact, numeric: *tol });
            let ok = checks.iter().all(|c| c.pass);
            Ok((json(&checks), ok))
        }
        Command::Oracle { s } => {
            if *s == 0 {
                return Err(usage("--s must be at least 1"));
            }
            let order = order(cli)?;
            let top = Q::from_integer((*s).into());
            let brute = brute_force_units(&order, &top).map_err(|e| Failure::Run(e.to_string()))?;
            let units = units_for(cli, &order, &[top], 1)?;
            #[derive(Serialize)]
            struct Row {
                s: u64,
                engine: u64,
                oracle: u64,
                equal: bool,
            }
            let rows: Vec<Row> = (1..=*s)
                .map(|k| {
                    let engine = units.iter().filter(|u| u.norm as u64 <= k).map(|u| u.count).sum();
                    let oracle = brute.iter().filter(|(c, _)| order.norm(c) as u64 <= k).map(|(_, n)| n).sum();
                    Row { s: k, engine, oracle, equal: engine == oracle }
                })
                .collect();
            let ok = rows.iter().all(|r| r.equal);
            Ok((json(&rows), ok))
        }
    }
}

fn emit(cli: &Cli, text: &str) -> Result<(), Failure> {
    match &cli.out {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure::Run(format!("{}: {e}", p.display()))),
        None => std::io::stdout().write_all(text.as_bytes()).map_err(|e| Failure::Run(e.to_string())),
    }
}

/// Parse arguments, run, write the report; returns the exit code.
pub fn main_with<I: IntoIterator<Item = OsString>>(args: I) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let result = execute(&cli).and_then(|(text, ok)| emit(&cli, &text).map(|_| ok));
    match result {
        Ok(true) => 0,
        Ok(false) => {
            eprintln!("heis-mertens: checks failed (see report)");
            1
        }
        Err(f) => {
            let (Failure::Usage(m) | Failure::Run(m)) = &f;
            eprintln!("heis-mertens: {m}");
            f.code()
        }
    }
}
