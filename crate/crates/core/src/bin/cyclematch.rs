use std::fmt::Write as _;
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use clap::{Parser, Subcommand};
use cyclematch_core::matching::{extend_matching, Matching};
use cyclematch_core::report::{self, Report, Suite};
use cyclematch_core::search::{emc_exact, emc_exact_s1, sweep, Grid, Limits};
use cyclematch_core::{nu_p, stirling_unsigned, Cycle, CyclePerm, Error, Family, SnkSpace, StirlingTable};
use serde_json::json;

const EXIT_INVALID: u8 = 2;
const EXIT_CAPACITY: u8 = 3;
const EXIT_VERIFY_FAILED: u8 = 4;

/// Largest `n` for Stirling number output.
const STIRLING_CAP: usize = 2000;

#[derive(Parser)]
#[command(name = "cyclematch", version, about = "Matching numbers of families of permutations with k cycles")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print [n k], or with --table the triangle up to n as CSV.
    Stirling {
        n: usize,
        k: Option<usize>,
        #[arg(long)]
        table: bool,
    },
    /// The alternating Stirling sum with its terms and the threshold flag.
    Bound {
        n: usize,
        k: usize,
        s: usize,
        #[arg(long)]
        json: bool,
    },
    /// Matching number of a family read from a file of permutations, one per line.
    Nu {
        file: PathBuf,
        n: usize,
        k: usize,
        #[arg(long)]
        json: bool,
    },
    /// Exact largest family with matching number at most s.
    Exact {
        n: usize,
        k: usize,
        s: usize,
        #[command(flatten)]
        limits: LimitArgs,
        /// Solve s = 1 as a maximum clique of the share-a-cycle graph.
        #[arg(long)]
        clique: bool,
    },
    /// Run invariant sweeps and report every checked instance.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
        /// Override each suite's default range of n.
        #[arg(long)]
        max_n: Option<usize>,
    },
    /// Exact search over a grid; ranges are inclusive, written `a..b` or `a`.
    Sweep {
        #[arg(long, value_parser = parse_range)]
        n: RangeInclusive<usize>,
        #[arg(long, value_parser = parse_range)]
        k: RangeInclusive<usize>,
        #[arg(long, value_parser = parse_range, default_value = "1")]
        s: RangeInclusive<usize>,
        #[command(flatten)]
        limits: LimitArgs,
    },
    /// Print the union of the families anchored at the given fixed points.
    Extremal {
        n: usize,
        k: usize,
        #[arg(required = true)]
        points: Vec<usize>,
    },
    /// Find a member of the family anchored at a cycle that extends a matching.
    Extend {
        n: usize,
        k: usize,
        #[arg(long)]
        anchor: String,
        /// Restrict the anchored family to the members listed in this file.
        #[arg(long)]
        family: Option<PathBuf>,
        /// A member of the matching to extend; repeat for several.
        #[arg(long = "matching")]
        matching: Vec<String>,
        #[arg(long)]
        json: bool,
    },
}

#[derive(clap::Args)]
struct LimitArgs {
    #[arg(long, default_value_t = Limits::default().ground_cap)]
    ground_cap: usize,
    #[arg(long, default_value_t = Limits::default().hyperedge_cap)]
    hyperedge_cap: usize,
    #[arg(long, default_value_t = Limits::default().node_limit)]
    node_limit: u64,
}

impl LimitArgs {
    fn limits(&self) -> Limits {
        Limits {
            ground_cap: self.ground_cap,
            hyperedge_cap: self.hyperedge_cap,
            node_limit: self.node_limit,
        }
    }
}

fn parse_range(text: &str) -> Result<RangeInclusive<usize>, String> {
    let num = |s: &str| s.trim().parse::<usize>().map_err(|e| format!("{s:?}: {e}"));
    match text.split_once("..") {
        Some((a, b)) => Ok(num(a)?..=num(b.trim_start_matches('='))?),
        None => {
            let v = num(text)?;
            Ok(v..=v)
        }
    }
}

enum Failure {
    Lib(Error),
    Io(PathBuf, std::io::Error),
    Usage(String),
    Exit(u8),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(msg) = configure_threads() {
        eprintln!("error: {msg}");
        return ExitCode::from(EXIT_INVALID);
    }
    let command_line = std::iter::once("cyclematch".to_string())
        .chain(std::env::args().skip(1))
        .collect::<Vec<_>>()
        .join(" ");
    match run(cli.command, &command_line) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Exit(code)) => ExitCode::from(code),
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::Capacity { .. } => EXIT_CAPACITY,
                _ => EXIT_INVALID,
            })
        }
        Err(Failure::Io(path, e)) => {
            eprintln!("error: {}: {e}", path.display());
            ExitCode::from(EXIT_INVALID)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_INVALID)
        }
    }
}

fn configure_threads() -> Result<(), String> {
    let Ok(raw) = std::env::var("CYCLEMATCH_MAX_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .map_err(|_| format!("CYCLEMATCH_MAX_THREADS must be a positive integer, got {raw:?}"))?;
    if threads == 0 {
        return Err("CYCLEMATCH_MAX_THREADS must be at least 1".into());
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| e.to_string())
}

fn read_family(path: &Path, space: Arc<SnkSpace>) -> Result<Family, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Io(path.to_owned(), e))?;
    Ok(Family::from_lines(space, &text)?)
}

fn run(command: Command, command_line: &str) -> Result<(), Failure> {
    match command {
        Command::Stirling { n, k, table } => {
            if n > STIRLING_CAP {
                return Err(Error::Capacity {
                    what: "stirling row",
                    needed: n.to_string(),
                    limit: STIRLING_CAP.to_string(),
                }
                .into());
            }
            if table {
                if k.is_some() {
                    return Err(Failure::Usage("--table takes only n".into()));
                }
                let t = StirlingTable::new(n);
                let mut out = String::from("n,k,value\n");
                for row in 1..=n {
                    for (col, v) in t.row(row)?.iter().enumerate().skip(1) {
                        writeln!(out, "{row},{col},{v}").unwrap();
                    }
                }
                print!("{out}");
            } else {
                let k = k.ok_or_else(|| Failure::Usage("expected `stirling N K` or `stirling --table N`".into()))?;
                println!("{}", stirling_unsigned(n, k as i64));
            }
        }
        Command::Bound { n, k, s, json } => {
            let b = StirlingTable::new(n).emc_bound(n, k, s)?;
            if json {
                let mut report = Report::new(command_line);
                report.instances.push(report::bound_record(&b));
                print!("{}", report.to_json());
            } else {
                println!("{}", b.value);
                for (i, t) in b.terms.iter().enumerate() {
                    println!("term {} {t}", i + 1);
                }
                println!("threshold_met={}", b.threshold_met());
            }
        }
        Command::Nu { file, n, k, json } => {
            let space = Arc::new(SnkSpace::new(n, k)?);
            let family = read_family(&file, space)?;
            let start = Instant::now();
            let (nu, witness) = nu_p(&family)?;
            if json {
                let mut report = Report::new(command_line);
                let ms = start.elapsed().as_millis() as u64;
                report.instances.push(report::matching_record(&family, nu, &witness, ms));
                print!("{}", report.to_json());
            } else {
                println!("{nu}");
                for p in witness.perms(family.space()) {
                    println!("{p}");
                }
            }
        }
        Command::Exact { n, k, s, limits, clique } => {
            let limits = limits.limits();
            let result = if clique {
                if s != 1 {
                    return Err(Failure::Usage("--clique solves s = 1 only".into()));
                }
                emc_exact_s1(n, k, limits.ground_cap)?
            } else {
                emc_exact(n, k, s, &limits)?
            };
            let mut report = Report::new(command_line);
            report.instances.push(report::emc_record(&result));
            print!("{}", report.to_json());
            if !result.is_exact() {
                return Err(Failure::Exit(EXIT_CAPACITY));
            }
        }
        Command::Verify { suite, max_n } => {
            let suite: Suite = suite.parse()?;
            let outcome = report::verify(suite, max_n)?;
            let mut report = Report::new(command_line);
            report.instances = outcome.records;
            print!("{}", report.to_json());
            eprintln!("{} checks, {} failed", report.instances.len(), outcome.failures);
            if outcome.failures > 0 {
                return Err(Failure::Exit(EXIT_VERIFY_FAILED));
            }
        }
        Command::Sweep { n, k, s, limits } => {
            let grid = Grid { n, k, s };
            let results = sweep(&grid, &limits.limits());
            let mut report = Report::new(command_line);
            report.instances = results.iter().map(report::emc_record).collect();
            print!("{}", report.to_json());
            if results.iter().any(|r| !r.is_exact()) {
                return Err(Failure::Exit(EXIT_CAPACITY));
            }
        }
        Command::Extremal { n, k, points } => {
            let space = Arc::new(SnkSpace::new(n, k)?);
            let family = Family::extremal(space, &points)?;
            print!("{}", family.to_lines());
        }
        Command::Extend { n, k, anchor, family, matching, json } => {
            let space = Arc::new(SnkSpace::new(n, k)?);
            let b: Cycle = anchor.parse()?;
            let mut a = Family::anchored(space.clone(), &b)?;
            if let Some(path) = family {
                a = a.intersection(&read_family(&path, space.clone())?)?;
            }
            let perms = matching
                .iter()
                .map(|t| CyclePerm::parse(t, Some(n)))
                .collect::<Result<Vec<_>, _>>()?;
            let h = Matching::from_perms(&space, &perms)?;
            let found = extend_matching(&a, &b, &h)?;
            if json {
                let mut report = Report::new(command_line);
                report.instances.push(json!({
                    "n": n,
                    "k": k,
                    "anchor": b.to_string(),
                    "candidates": a.len(),
                    "matching": perms.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
                    "found": found.map(|id| space.perm(id).to_string()),
                }));
                print!("{}", report.to_json());
            } else {
                match found {
                    Some(id) => println!("{}", space.perm(id)),
                    None => println!("not_found"),
                }
            }
        }
    }
    Ok(())
}
