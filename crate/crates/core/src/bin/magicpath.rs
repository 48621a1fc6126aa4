use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use magicpath::cycles::{check_path_cycle_bound, count_cycle_fast};
use magicpath::oracle::{self, count_cycle_bruteforce, count_path_bruteforce, CycleConvention, Guard};
use magicpath::output::{self, Format};
use magicpath::search::{self, count_path_fast, SearchOptions};
use magicpath::verify::verify_sweep;
use magicpath::{Convention, CountReport, Error};

/// Largest path length the fast engine accepts without lifting limits.
const FAST_GUARD: u32 = 16;

#[derive(Debug, Parser)]
#[command(name = "magicpath", version, about = "Count edge-magic total labelings of paths and cycles")]
struct Cli {
    #[command(flatten)]
    global: Global,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Global {
    /// Worker threads [default: available parallelism]
    #[arg(long, global = true, env = "MAGICPATH_THREADS", value_parser = clap::value_parser!(u32).range(1..))]
    threads: Option<u32>,

    /// Lift the size guards on the oracle and the fast engine
    #[arg(long, global = true, env = "MAGICPATH_UNSAFE_LIMITS")]
    unsafe_limits: bool,

    /// Report progress on stderr, at most once per second
    #[arg(long, global = true)]
    progress: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Count labelings of a single path
    Count(CountArgs),
    /// Print the solution counts for path lengths 0..=max
    Table(TableArgs),
    /// Compare the fast engine against brute force
    Verify(VerifyArgs),
    /// Count labelings of a cycle
    Cycle(CycleArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    Fast,
    Brute,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ConventionArg {
    Canonical,
    Raw,
}

impl From<ConventionArg> for Convention {
    fn from(c: ConventionArg) -> Self {
        match c {
            ConventionArg::Canonical => Convention::Canonical,
            ConventionArg::Raw => Convention::Raw,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum CycleConventionArg {
    Raw,
    Dihedral,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    Table,
    Csv,
    Json,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Table => Format::Table,
            FormatArg::Csv => Format::Csv,
            FormatArg::Json => Format::Json,
        }
    }
}

#[derive(Debug, Args)]
struct CountArgs {
    /// Number of edges of the path
    #[arg(long, short = 'n')]
    length: u32,
    #[arg(long, value_enum, default_value = "fast")]
    mode: ModeArg,
    #[arg(long, value_enum, default_value = "canonical")]
    convention: ConventionArg,
    /// Include counts per magic constant
    #[arg(long)]
    per_k: bool,
    #[arg(long, value_enum, default_value = "table")]
    format: FormatArg,
    /// Search only the lower half of the constants and mirror the rest
    #[arg(long)]
    halving: bool,
    /// Print every labeling (n <= 4) to stderr
    #[arg(long)]
    list_solutions: bool,
}

#[derive(Debug, Args)]
struct TableArgs {
    /// Largest path length
    #[arg(long = "max")]
    max_n: u32,
    #[arg(long, value_enum, default_value = "fast")]
    mode: ModeArg,
    #[arg(long, value_enum, default_value = "canonical")]
    convention: ConventionArg,
    #[arg(long, value_enum, default_value = "table")]
    format: FormatArg,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// Largest path length to sweep
    #[arg(long = "max", default_value_t = 6)]
    max_n: u32,
}

#[derive(Debug, Args)]
struct CycleArgs {
    /// Number of edges (and vertices) of the cycle
    #[arg(long, short = 'n')]
    length: u32,
    #[arg(long, value_enum, default_value = "raw")]
    convention: CycleConventionArg,
    #[arg(long, value_enum, default_value = "fast")]
    mode: ModeArg,
    /// Compare against the path with the same number of edges
    #[arg(long)]
    compare_path: bool,
    #[arg(long)]
    per_k: bool,
    #[arg(long, value_enum, default_value = "table")]
    format: FormatArg,
}

/// Failure that maps to an exit status.
enum Failure {
    Usage(String),
    Mismatch,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

struct Context {
    options: SearchOptions,
    guard: Guard,
}

impl Context {
    fn new(global: &Global) -> Self {
        let workers = global
            .threads
            .map_or_else(search::default_workers, |t| t as usize);
        Self {
            options: SearchOptions {
                workers,
                complement_halving: false,
                progress: global.progress,
            },
            guard: if global.unsafe_limits {
                Guard::Lifted
            } else {
                Guard::Enforced
            },
        }
    }

    fn check_path(&self, n: u32, mode: ModeArg) -> Result<(), Failure> {
        match mode {
            ModeArg::Brute => Ok(oracle::check_path_guard(n, self.guard)?),
            ModeArg::Fast if self.guard == Guard::Enforced && n > FAST_GUARD => Err(Failure::Usage(format!(
                "fast engine limited to n <= {FAST_GUARD} (got {n}); set MAGICPATH_UNSAFE_LIMITS to run anyway"
            ))),
            ModeArg::Fast => Ok(()),
        }
    }

    fn path_report(&self, n: u32, mode: ModeArg, convention: Convention, halving: bool) -> Result<CountReport, Failure> {
        self.check_path(n, mode)?;
        match mode {
            ModeArg::Brute => Ok(count_path_bruteforce(n, convention, self.guard)?),
            ModeArg::Fast => {
                let options = SearchOptions {
                    complement_halving: halving,
                    ..self.options
                };
                Ok(count_path_fast(n, convention, options)?)
            }
        }
    }
}

fn emit(text: &str) {
    let mut stdout = std::io::stdout().lock();
    // a closed pipe is not an error for a report printer
    let _ = stdout.write_all(text.as_bytes());
    let _ = stdout.flush();
}

fn report_timing(report: &CountReport, format: Format) {
    if format != Format::Json {
        eprintln!(
            "{} n={} {} {}: {:.3}s",
            report.mode.as_str(),
            report.n,
            report.convention,
            match report.family {
                magicpath::Family::Path => "path",
                magicpath::Family::Cycle => "cycle",
            },
            report.elapsed.as_secs_f64()
        );
    }
}

fn run_count(ctx: &Context, args: &CountArgs) -> Result<(), Failure> {
    let convention = args.convention.into();
    let report = ctx.path_report(args.length, args.mode, convention, args.halving)?;
    let format = args.format.into();
    emit(&output::render_one(&report, format, args.per_k));
    report_timing(&report, format);
    if args.list_solutions {
        let solutions = match args.mode {
            ModeArg::Fast => search::path_solutions(args.length, convention)?,
            ModeArg::Brute => {
                if args.length > search::MATERIALIZE_LIMIT {
                    return Err(Failure::Usage(format!(
                        "solution listing limited to n <= {}",
                        search::MATERIALIZE_LIMIT
                    )));
                }
                let mut all = oracle::path_solutions_bruteforce(args.length, ctx.guard)?;
                if convention == Convention::Canonical && args.length > 0 {
                    all.retain(|l| magicpath::model::is_canonical(l).unwrap_or(true));
                }
                all.sort_by(|a, b| a.labels().cmp(b.labels()));
                all
            }
        };
        for s in &solutions {
            let k = magicpath::model::is_magic(s)
                .and_then(|m| m.constant())
                .map_or_else(|| "-".to_string(), |k| k.to_string());
            eprintln!("{s} k={k}");
        }
    }
    Ok(())
}

fn run_table(ctx: &Context, args: &TableArgs) -> Result<(), Failure> {
    let format = args.format.into();
    ctx.check_path(args.max_n, args.mode)?;
    let mut reports = Vec::new();
    for n in 0..=args.max_n {
        let report = ctx.path_report(n, args.mode, args.convention.into(), false)?;
        report_timing(&report, format);
        reports.push(report);
    }
    emit(&output::render_many(&reports, format, false));
    Ok(())
}

fn run_verify(ctx: &Context, args: &VerifyArgs) -> Result<(), Failure> {
    let outcomes = verify_sweep(args.max_n, ctx.options, ctx.guard, |c| {
        emit(&format!("{c}\n"));
    })?;
    match outcomes.iter().find(|c| !c.passed()) {
        None => {
            emit(&format!("all {} cases match\n", outcomes.len()));
            Ok(())
        }
        Some(first) => {
            eprintln!("first divergence: {first}");
            Err(Failure::Mismatch)
        }
    }
}

fn run_cycle(ctx: &Context, args: &CycleArgs) -> Result<(), Failure> {
    let convention = match args.convention {
        CycleConventionArg::Raw => CycleConvention::Raw,
        CycleConventionArg::Dihedral => CycleConvention::Dihedral,
    };
    let n = args.length;
    if n < 3 {
        return Err(Failure::Usage(format!("a cycle needs at least 3 edges (got {n})")));
    }
    if ctx.guard == Guard::Enforced && n > FAST_GUARD {
        return Err(Failure::Usage(format!(
            "cycle engine limited to n <= {FAST_GUARD} (got {n}); set MAGICPATH_UNSAFE_LIMITS to run anyway"
        )));
    }
    let report = match args.mode {
        ModeArg::Fast => count_cycle_fast(n, convention, ctx.options)?,
        ModeArg::Brute => count_cycle_bruteforce(n, convention, ctx.guard)?,
    };
    let check = if args.compare_path {
        Some(check_path_cycle_bound(n, ctx.options)?)
    } else {
        None
    };
    let format = args.format.into();
    emit(&output::render_cycle(&report, check.as_ref(), format, args.per_k));
    report_timing(&report, format);
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let ctx = Context::new(&cli.global);
    let result = match &cli.command {
        Command::Count(args) => run_count(&ctx, args),
        Command::Table(args) => run_table(&ctx, args),
        Command::Verify(args) => run_verify(&ctx, args),
        Command::Cycle(args) => run_cycle(&ctx, args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Mismatch) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
