//! `k3count` command-line frontend.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use k3count::brauer::brauer_report;
use k3count::counters::resolved_count;
use k3count::io::{emit_counts, fingerprint, parse_surface_file, read_table, write_table, CountFormat};
use k3count::lattice::{run_trials, TrialConfig, TrialReport};
use k3count::modarith::{PrimeIter, DEFAULT_SEGMENT_LEN};
use k3count::two_adic::{init_direct, init_efficient};
use k3count::{
    count_one, count_primes, CoefficientBackend, Error, ErrorKind, Execution, ModPBackend, NaiveBackend,
    RangeEntry, SixLineSurface, TraceTable,
};

const PRECISION_VAR: &str = "K3COUNT_PRECISION";
const SEGMENT_VAR: &str = "K3COUNT_SIEVE_SEGMENT";

#[derive(Parser)]
#[command(name = "k3count", version, about = "Exact point counts of double planes branched over six lines")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and validate a surface file.
    Validate { surface: PathBuf },
    /// Print the odd primes of bad reduction.
    BadPrimes { surface: PathBuf },
    /// Build the mod-16 trace table from naive counts at small primes.
    Init {
        surface: PathBuf,
        #[arg(long, value_enum, default_value_t = Method::Efficient)]
        method: Method,
        #[arg(long)]
        out: PathBuf,
    },
    /// Count points at one prime.
    Count {
        surface: PathBuf,
        /// Trace table; not needed for the real-multiplication mode.
        #[arg(long)]
        table: Option<PathBuf>,
        #[arg(short = 'p')]
        p: u64,
        #[arg(long, value_enum, default_value_t = Backend::Naive)]
        backend: Backend,
    },
    /// Count points at every prime up to a bound.
    CountRange {
        surface: PathBuf,
        #[arg(long)]
        table: Option<PathBuf>,
        #[arg(long, default_value_t = 3)]
        min: u64,
        #[arg(long)]
        max: u64,
        /// Output file; standard output if absent.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long, value_enum, default_value_t = Backend::Naive)]
        backend: Backend,
        /// Worker threads.
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Compare the pipeline with naive counts at every good prime up to a bound.
    Verify {
        surface: PathBuf,
        #[arg(long)]
        max: u64,
        /// Trace table; built with the efficient method if absent.
        #[arg(long)]
        table: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Backend::Naive)]
        backend: Backend,
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Run a structural self-test.
    Selftest {
        #[arg(value_enum)]
        lab: Lab,
        #[arg(long)]
        json: bool,
        /// Lattice campaign size.
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long)]
        seed: Option<u64>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Direct,
    Efficient,
}

#[derive(Clone, Copy, ValueEnum)]
enum Backend {
    Naive,
    Coefficient,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Jsonl,
}

#[derive(Clone, Copy, ValueEnum)]
enum Lab {
    Lattice,
    Brauer,
}

fn exit_code(kind: ErrorKind) -> u8 {
    match kind {
        ErrorKind::Usage | ErrorKind::Io => 1,
        ErrorKind::Validation => 2,
        ErrorKind::MathInconsistency => 3,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(e.kind()))
        }
    }
}

fn env_number<T: std::str::FromStr>(name: &str) -> Result<Option<T>, Error> {
    match std::env::var(name) {
        Ok(v) => v
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| Error::Usage(format!("{name}={v} is not a valid number"))),
        Err(_) => Ok(None),
    }
}

fn segment_len() -> Result<usize, Error> {
    Ok(env_number(SEGMENT_VAR)?.unwrap_or(DEFAULT_SEGMENT_LEN))
}

fn backend(b: Backend) -> Box<dyn ModPBackend> {
    match b {
        Backend::Naive => Box::new(NaiveBackend),
        Backend::Coefficient => Box::new(CoefficientBackend::default()),
    }
}

fn execution(jobs: Option<usize>) -> Result<Execution, Error> {
    match jobs {
        Some(0) => Err(Error::Usage("--jobs must be positive".into())),
        Some(1) => Ok(Execution::Sequential),
        Some(n) => {
            if !k3count::par::configure_threads(n) {
                eprintln!("warning: --jobs {n} ignored");
            }
            Ok(Execution::default())
        }
        None => Ok(Execution::default()),
    }
}

fn load_table(surface: &SixLineSurface, path: Option<&Path>) -> Result<Option<TraceTable>, Error> {
    match path {
        Some(path) => {
            let t = read_table(path)?;
            t.check_surface(surface)?;
            Ok(Some(t))
        }
        None if surface.is_rm() => Ok(None),
        None => Err(Error::Usage("--table is required for six-rational-lines surfaces".into())),
    }
}

fn primes(min: u64, max: u64) -> Result<Vec<u64>, Error> {
    Ok(PrimeIter::with_segment_len(min.max(2), max, segment_len()?).collect())
}

fn run(command: Command) -> Result<(), Error> {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match command {
        Command::Validate { surface } => {
            let s = parse_surface_file(&surface)?;
            writeln!(out, "ok {} r={} fingerprint={}", s.name, s.picard_rank, fingerprint(&s)).map_err(io_err)?;
        }
        Command::BadPrimes { surface } => {
            let s = parse_surface_file(&surface)?;
            let list: Vec<String> = s.bad_primes().odd_bad_primes.iter().map(u64::to_string).collect();
            writeln!(out, "{}", list.join(",")).map_err(io_err)?;
        }
        Command::Init { surface, method, out: path } => {
            let s = parse_surface_file(&surface)?;
            let exec = Execution::default();
            let table = match method {
                Method::Direct => {
                    let d = init_direct(&s, exec)?;
                    writeln!(out, "classes: {}", d.witnesses.len()).map_err(io_err)?;
                    writeln!(out, "largest prime: {}", d.largest_prime()).map_err(io_err)?;
                    d.table
                }
                Method::Efficient => {
                    let e = init_efficient(&s, exec)?;
                    writeln!(out, "unknowns: {}", e.unknowns).map_err(io_err)?;
                    writeln!(out, "primes used: {}", e.primes_used).map_err(io_err)?;
                    writeln!(out, "largest prime: {}", e.largest_prime).map_err(io_err)?;
                    e.table
                }
            };
            write_table(&table, &path)?;
        }
        Command::Count { surface, table, p, backend: b } => {
            let s = parse_surface_file(&surface)?;
            let table = load_table(&s, table.as_deref())?;
            let c = count_one(&s, table.as_ref(), p, backend(b).as_ref())?;
            writeln!(
                out,
                "p={} count={} trace_mod16={} class_index={}",
                c.p, c.count, c.trace_mod16, c.class_index
            )
            .map_err(io_err)?;
        }
        Command::CountRange { surface, table, min, max, out: path, format, backend: b, jobs } => {
            let s = parse_surface_file(&surface)?;
            let table = load_table(&s, table.as_deref())?;
            let exec = execution(jobs)?;
            let entries = count_primes(&s, table.as_ref(), &primes(min, max)?, backend(b).as_ref(), exec);
            let format = match format {
                Format::Csv => CountFormat::Csv,
                Format::Jsonl => CountFormat::Jsonl,
            };
            match path {
                Some(path) => {
                    let f = File::create(&path).map_err(|source| {
                        Error::Io(k3count::io::IoError::Io {
                            path: path.display().to_string(),
                            source,
                        })
                    })?;
                    emit_counts(&entries, format, BufWriter::new(f))?;
                }
                None => emit_counts(&entries, format, &mut out)?,
            }
            if let Some(RangeEntry::Failed { p, error }) =
                entries.iter().find(|e| matches!(e, RangeEntry::Failed { .. }))
            {
                return Err(Error::Inconsistency(format!("p = {p}: {error}")));
            }
        }
        Command::Verify { surface, max, table, backend: b, jobs } => {
            let s = parse_surface_file(&surface)?;
            let exec = execution(jobs)?;
            let table = match table {
                Some(_) => load_table(&s, table.as_deref())?,
                None if s.is_rm() => None,
                None => Some(init_efficient(&s, exec)?.table),
            };
            let inv = s.bad_primes();
            let good: Vec<u64> = primes(3, max)?.into_iter().filter(|&p| inv.is_good_prime(p)).collect();
            let be = backend(b);
            let results = exec.map(&good, |&p| -> Result<(u64, u64), Error> {
                let c = count_one(&s, table.as_ref(), p, be.as_ref())?;
                Ok((c.count, resolved_count(&s, p)?))
            });
            for (&p, r) in good.iter().zip(results) {
                let (pipeline, naive) = r?;
                if pipeline != naive {
                    return Err(Error::Inconsistency(format!(
                        "p = {p}: pipeline count {pipeline} differs from naive count {naive}"
                    )));
                }
            }
            writeln!(out, "verified {} good primes up to {max}", good.len()).map_err(io_err)?;
        }
        Command::Selftest { lab, json, trials, seed } => match lab {
            Lab::Lattice => {
                let mut cfg = TrialConfig { trials, ..TrialConfig::default() };
                if let Some(seed) = seed {
                    cfg.seed = seed;
                }
                if let Some(k) = env_number(PRECISION_VAR)? {
                    if !(4..=60).contains(&k) {
                        return Err(Error::Usage(format!("{PRECISION_VAR} must lie in 4..=60")));
                    }
                    cfg.k = k;
                }
                let report = run_trials(&cfg);
                if json {
                    writeln!(out, "{}", serde_json::to_string_pretty(&report).expect("serialisable")).map_err(io_err)?;
                } else {
                    print_lattice(&mut out, &report).map_err(io_err)?;
                }
                if report.failure_count() > 0 {
                    return Err(Error::Inconsistency(format!("{} check failures", report.failure_count())));
                }
                if report.trials < cfg.trials {
                    return Err(Error::Inconsistency(format!(
                        "only {} of {} trials qualified",
                        report.trials, cfg.trials
                    )));
                }
            }
            Lab::Brauer => {
                let report = brauer_report()?;
                if json {
                    writeln!(out, "{}", serde_json::to_string_pretty(&report).expect("serialisable")).map_err(io_err)?;
                } else {
                    print_brauer(&mut out, &report).map_err(io_err)?;
                }
                if !report.ok() {
                    return Err(Error::Inconsistency("Brauer structure check failed".into()));
                }
            }
        },
    }
    out.flush().map_err(io_err)
}

fn io_err(e: io::Error) -> Error {
    Error::Io(k3count::io::IoError::from(e))
}

fn print_lattice(out: &mut impl Write, r: &TrialReport) -> io::Result<()> {
    writeln!(out, "seed {:#x}: {} trials, {} attempts, {} rejected", r.seed, r.trials, r.attempts, r.rejections)?;
    for (name, t) in &r.checks {
        writeln!(out, "  {name:<20} passed {:>5}  failed {}", t.passed, t.failed)?;
    }
    for f in &r.failures {
        writeln!(out, "FAIL attempt {} {}: {}", f.attempt, f.check, f.message)?;
    }
    Ok(())
}

fn print_brauer(out: &mut impl Write, r: &k3count::brauer::BrauerReport) -> io::Result<()> {
    writeln!(out, "even subspace: dim {} (order {})", r.even_dim, r.even_order)?;
    writeln!(out, "relations: rank {}", r.relation_rank)?;
    writeln!(out, "quotient: dim {} (order {})", r.quotient_dim, r.quotient_order)?;
    writeln!(out, "b6 = {}", r.b6)?;
    writeln!(out, "Sym(6) orbit of b6: {} (stabilizer {})", r.sym6_orbit, r.sym6_stabilizer)?;
    writeln!(out, "Alt(6) orbit of b6: {} (rank {})", r.alt6_orbit, r.alt6_orbit_rank)?;
    writeln!(out, "Sym(6) orbit of c: {}", r.c_orbit)?;
    writeln!(out, "sigma -> sigma~:")?;
    for (s, t) in &r.outer.table {
        writeln!(out, "  {s:<14} -> {t}")?;
    }
    writeln!(
        out,
        "transposition image cycle type {:?}; outer: {}",
        r.outer.transposition_image_type, r.outer.is_outer
    )?;
    writeln!(out, "order(G4) = {:?}, order of dual = {:?}", r.s5.g4_order, r.s5.dual_order)?;
    writeln!(
        out,
        "G4^2 equals the printed involution: {}; conjugate to it: {}",
        r.s5.square_matches, r.s5.square_conjugate
    )?;
    writeln!(out, "G4 conjugate to the line 4-cycle action: {}", r.s5.conjugator.is_some())?;
    Ok(())
}
