//! `pathcensus` command-line front end.
//!
//! Primary results go to stdout; timings and memo statistics go to stderr.
//! Exit codes: 0 clean, 1 mathematical finding (discrepancy or violated
//! observation), 2 usage or input error.

mod render;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use pathcensus::analysis::{self, VerifyKind};
use pathcensus::oracle::DEFAULT_CENSUS_LIMIT;
use pathcensus::{
    AnalysisError, Composition, Engine, PropertyLimits, ScanLimits, SignedType, Tournament,
};

use crate::render::Format;

#[derive(Parser, Debug)]
#[command(name = "pathcensus", version, about = "Exact oriented Hamiltonian path counts in transitive tournaments")]
struct Cli {
    /// Output format for the primary stream.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Memo cache file, loaded (and verified) before and saved after the command.
    #[arg(long, global = true, env = "PATHCENSUS_CACHE")]
    cache_file: Option<PathBuf>,

    /// Worker threads; 0 uses every core.
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,

    /// Allow totals and orders above the configured limits.
    #[arg(long, global = true)]
    force: bool,

    /// Largest composition total accepted without --force.
    #[arg(long, global = true, default_value_t = analysis::DEFAULT_SCAN_LIMIT, value_parser = clap::value_parser!(u32).range(2..))]
    p_limit: u32,

    /// Largest tournament order for brute-force census without --force.
    #[arg(long, global = true, default_value_t = DEFAULT_CENSUS_LIMIT, value_parser = order_limit)]
    n_limit: usize,

    #[command(subcommand)]
    command: Command,
}

fn order_limit(s: &str) -> Result<usize, String> {
    let n: usize = s.parse().map_err(|e| format!("{e}"))?;
    if n < 3 {
        return Err("must be at least 3".into());
    }
    Ok(n)
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate F on a composition, e.g. `eval 1,2,1,1`.
    Eval { composition: String },
    /// Number of Hamiltonian paths of a signed type in TT_n.
    Census {
        #[arg(short = 'n')]
        n: usize,
        /// Signed type, e.g. `1,-2,1`.
        #[arg(allow_hyphen_values = true)]
        path_type: String,
        /// Also count by brute force over all permutations.
        #[arg(long)]
        oracle: bool,
    },
    /// F over every composition of p, sorted.
    Scan {
        #[arg(short = 'p')]
        p: u32,
        #[arg(long, value_enum, default_value_t = SortOrder::Asc)]
        sort: SortOrder,
    },
    /// Check the maximality observations for every total in --min-p..=--max-p.
    Conjecture {
        #[arg(long, default_value_t = 3)]
        min_p: u32,
        #[arg(long, default_value_t = analysis::DEFAULT_SCAN_LIMIT)]
        max_p: u32,
    },
    /// Compare brute-force censuses with their predicted counts.
    Verify {
        #[arg(long, default_value_t = 8)]
        max_n: usize,
        #[arg(long, value_enum, default_value_t = Kind::Transitive)]
        kind: Kind,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Exhaustive checks of the ordering properties of F.
    Properties {
        #[arg(long, default_value_t = 16)]
        max_total: u32,
    },
    /// Time a full scan with a fresh memo, both evaluation strategies.
    Bench {
        #[arg(short = 'p', default_value_t = analysis::DEFAULT_SCAN_LIMIT)]
        p: u32,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SortOrder {
    /// By value ascending, ties by composition.
    Asc,
    /// By value descending, ties by composition descending.
    Desc,
    /// By composition.
    Composition,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Kind {
    Transitive,
    NearlyTransitive,
    Random,
}

impl From<Kind> for VerifyKind {
    fn from(k: Kind) -> Self {
        match k {
            Kind::Transitive => VerifyKind::Transitive,
            Kind::NearlyTransitive => VerifyKind::NearlyTransitive,
            Kind::Random => VerifyKind::Random,
        }
    }
}

/// Outcome of a command that ran to completion.
enum Outcome {
    Clean,
    Finding,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Finding(String),
}

impl From<AnalysisError> for Failure {
    fn from(e: AnalysisError) -> Self {
        match e {
            AnalysisError::TheoremViolation { .. } => Failure::Finding(e.to_string()),
            e => Failure::Usage(e.to_string()),
        }
    }
}

fn usage(e: impl std::fmt::Display) -> Failure {
    Failure::Usage(e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.jobs > 0 {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.jobs)
            .build_global()
        {
            eprintln!("pathcensus: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok(Outcome::Clean) => ExitCode::SUCCESS,
        Ok(Outcome::Finding) => ExitCode::from(1),
        Err(Failure::Finding(msg)) => {
            eprintln!("pathcensus: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("pathcensus: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Result<Outcome, Failure> {
    let engine = Engine::new();
    if let Some(path) = &cli.cache_file {
        if path.exists() {
            let start = Instant::now();
            engine.load_cache(path).map_err(usage)?;
            eprintln!(
                "loaded {} memo entries from {} in {:.3} s",
                engine.len(),
                path.display(),
                start.elapsed().as_secs_f64()
            );
        }
    }
    let loaded = engine.len();
    let limits = ScanLimits {
        max_p: cli.p_limit,
        force: cli.force,
    };
    let census_limit = if cli.force {
        usize::MAX
    } else {
        cli.n_limit
    };
    let start = Instant::now();
    let out: String;

    let outcome = match &cli.command {
        Command::Eval { composition } => {
            let c: Composition = composition.parse().map_err(usage)?;
            let value = engine.value(&c).map_err(usage)?;
            out = render::eval(cli.format, &c, &value);
            Outcome::Clean
        }
        Command::Census {
            n,
            path_type,
            oracle,
        } => {
            let a: SignedType = path_type.parse().map_err(usage)?;
            let count = analysis::tt_count(&engine, *n, &a)?;
            let brute = if *oracle {
                let t = Tournament::transitive(*n).map_err(usage)?;
                Some(
                    t.census_with_limit(census_limit)
                        .map_err(usage)?
                        .get(&a),
                )
            } else {
                None
            };
            let agrees = brute.as_ref().is_none_or(|b| *b == count);
            out = render::census(cli.format, *n, &a, &count, brute.as_ref());
            if agrees {
                Outcome::Clean
            } else {
                Outcome::Finding
            }
        }
        Command::Scan { p, sort } => {
            let mut report = analysis::scan(&engine, *p, &limits)?;
            match sort {
                SortOrder::Asc => {}
                SortOrder::Desc => report.rows.reverse(),
                SortOrder::Composition => report.rows.sort_by(|a, b| a.composition.cmp(&b.composition)),
            }
            out = render::scan(cli.format, &report);
            Outcome::Clean
        }
        Command::Conjecture { min_p, max_p } => {
            if min_p > max_p {
                return Err(usage(format!("--min-p {min_p} exceeds --max-p {max_p}")));
            }
            let verdicts = (*min_p..=*max_p)
                .map(|p| analysis::check_conjecture(&engine, p, &limits))
                .collect::<Result<Vec<_>, _>>()?;
            out = render::conjecture(cli.format, &verdicts);
            if verdicts.iter().all(|v| v.holds()) {
                Outcome::Clean
            } else {
                Outcome::Finding
            }
        }
        Command::Verify { max_n, kind, seed } => {
            let report = analysis::verify(&engine, (*kind).into(), *max_n, *seed, census_limit)?;
            out = render::verify(cli.format, &report);
            if report.is_clean() {
                Outcome::Clean
            } else {
                Outcome::Finding
            }
        }
        Command::Properties { max_total } => {
            if *max_total > limits.max_p && !limits.force {
                return Err(Failure::Usage(
                    AnalysisError::ScanTooLarge {
                        p: *max_total,
                        limit: limits.max_p,
                    }
                    .to_string(),
                ));
            }
            let report = analysis::run_property_suite(
                &engine,
                &PropertyLimits {
                    max_total: *max_total,
                },
            )?;
            out = render::properties(cli.format, &report);
            if report.passed() {
                Outcome::Clean
            } else {
                Outcome::Finding
            }
        }
        Command::Bench { p } => {
            let t0 = Instant::now();
            let filled = Engine::new();
            let report = analysis::scan(&filled, *p, &limits)?;
            let fill_time = t0.elapsed();

            let t1 = Instant::now();
            let lazy = Engine::new();
            for c in pathcensus::compositions(*p) {
                lazy.value(&c).map_err(usage)?;
            }
            let stack_time = t1.elapsed();
            let agree = filled.snapshot() == lazy.snapshot();
            eprintln!(
                "level-parallel fill: {:.3} s; work-stack evaluation: {:.3} s; threads: {}",
                fill_time.as_secs_f64(),
                stack_time.as_secs_f64(),
                rayon::current_num_threads()
            );
            out = render::bench(cli.format, &report, filled.len(), agree);
            if agree {
                Outcome::Clean
            } else {
                Outcome::Finding
            }
        }
    };

    print!("{out}");
    let stats = engine.stats();
    eprintln!(
        "took {:.3} s; memo entries {}, lookups {}, cache hit {:.2}%",
        start.elapsed().as_secs_f64(),
        stats.entries,
        stats.lookups,
        stats.hit_rate() * 100.0
    );
    if let Some(path) = &cli.cache_file {
        if engine.len() != loaded || !path.exists() {
            engine.save_cache(path).map_err(usage)?;
            eprintln!("saved {} memo entries to {}", engine.len(), path.display());
        }
    }
    Ok(outcome)
}
