//! `bipolar`: run the exact computations from the command line and print JSON reports.
//!
//! Exit status is 0 when every verdict passes, 1 when one fails, 2 on errors.

mod commands;
mod json;
mod report;

use std::process::ExitCode;
use std::time::Instant;

use anyhow::Result;
use clap::{Parser, Subcommand, ValueEnum};

use commands::{CheckKind, Common, ExampleModel, ExampleSet};
use report::Report;

#[derive(Parser, Debug)]
#[command(name = "bipolar", version, about = "Exact operator-valued free probability over C^d")]
struct Cli {
    /// Parameters: a JSON file path, or inline JSON starting with `{`.
    #[arg(long, global = true)]
    params: Option<String>,
    #[arg(long, global = true, value_enum, default_value_t = OutFormat::Json)]
    out: OutFormat,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Longest word a bounded check enumerates.
    #[arg(long, global = true)]
    max_len: Option<usize>,
    /// Denominator bound for case-analysis grids and lattices.
    #[arg(long, global = true)]
    grid_den: Option<u32>,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum OutFormat {
    Json,
    Table,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Count (and optionally list) noncrossing partitions of {1..n}.
    Ncp {
        #[arg(long)]
        count: usize,
        #[arg(long)]
        pairings: bool,
        #[arg(long)]
        list: bool,
    },
    /// B-valued moment of a word, e.g. `--word '1*1*' --b 1,0 --b 1,1 --b 0,1`.
    Moments {
        #[arg(long)]
        word: String,
        /// Interior coefficients; all default to the unit.
        #[arg(long = "b")]
        b: Vec<String>,
        #[arg(long, value_enum)]
        model: Option<ExampleModel>,
    },
    /// g1(0..n) and g2(0..n).
    Gseries {
        #[arg(long)]
        n: usize,
    },
    /// One of G, G', H, H' at (n, b, k).
    Ghmap {
        #[arg(long)]
        map: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value = "1,0")]
        b: String,
    },
    /// M0(n,m,k) for the given triples.
    M0(TripleArgs),
    /// Residual of the M0 expansion for the given triples.
    Residual(TripleArgs),
    Check {
        #[arg(value_enum)]
        which: CheckKind,
        #[arg(long, value_enum)]
        model: Option<ExampleModel>,
        /// Trace weight of the first coordinate, for a cumulant-family input.
        #[arg(long)]
        q: Option<String>,
    },
    /// Scripted subcase reductions or coverage sampling.
    CaseAnalysis {
        /// I, II, III.1 .. III.4, or all.
        #[arg(long, conflicts_with = "coverage")]
        subcase: Option<String>,
        #[arg(long)]
        coverage: bool,
        #[arg(long, default_value_t = 500)]
        samples: usize,
    },
    /// Golden values of the worked examples.
    Examples {
        #[arg(long, value_enum, default_value_t = ExampleSet::All)]
        run: ExampleSet,
    },
}

#[derive(clap::Args, Debug)]
struct TripleArgs {
    /// `n,m,k`; repeatable. Without it every triple with n+m+k <= --max-sum is run.
    #[arg(long)]
    triple: Vec<String>,
    #[arg(long, default_value_t = 3)]
    max_sum: usize,
    /// `invertible` or `m11,m22`.
    #[arg(long, default_value = "invertible")]
    n2: String,
}

fn dispatch(cli: &Cli) -> Result<Report> {
    let cfg = Common {
        params: cli.params.clone(),
        seed: cli.seed,
        max_len: cli.max_len,
        grid_den: cli.grid_den,
    };
    match &cli.cmd {
        Command::Ncp { count, pairings, list } => commands::ncp(*count, *pairings, *list),
        Command::Moments { word, b, model } => commands::moments(&cfg, word, b, *model),
        Command::Gseries { n } => commands::gseries(&cfg, *n),
        Command::Ghmap { map, n, k, b } => commands::ghmap(&cfg, map, *n, *k, b),
        Command::M0(t) => commands::m0(&cfg, &t.n2, &commands::triples(&t.triple, t.max_sum)?),
        Command::Residual(t) => commands::residual(&cfg, &t.n2, &commands::triples(&t.triple, t.max_sum)?),
        Command::Check { which, model, q } => commands::check(&cfg, *which, *model, q.as_deref()),
        Command::CaseAnalysis { subcase, coverage, samples } => {
            commands::case_analysis(&cfg, subcase.as_deref(), *coverage, *samples)
        }
        Command::Examples { run } => commands::examples(*run),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let report = match dispatch(&cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    match cli.out {
        OutFormat::Json => println!("{}", report.to_json()),
        OutFormat::Table => print!("{}", report.to_table()),
    }
    eprintln!("elapsed: {:.3}s", start.elapsed().as_secs_f64());
    if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
