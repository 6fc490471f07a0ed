use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use sparsemul::apps::{self, Digraph, TripartiteGraph};
use sparsemul::bench::{self, Family};
use sparsemul::dense::DenseAlgo;
use sparsemul::densify::{Backend, HashMode};
use sparsemul::dynamic::{AnyMatrix, DomainKind};
use sparsemul::exponent::{self, LpVariant, OmegaTable, SigmaMethod, SigmaOptions};
use sparsemul::input_sparse::{DeltaPolicy, InputSparseConfig};
use sparsemul::pipeline::SparseOptions;
use sparsemul::scalar::{Integer, ZMod};
use sparsemul::Error;

#[derive(Parser)]
#[command(name = "sparsemul", version, about = "Output-sensitive sparse matrix multiplication")]
struct Cli {
    /// Entry domain: bool, nonneg, int, bigint, gf2 or zmod:<k>.
    #[arg(long, global = true, default_value = "int")]
    domain: String,
    /// Heavy/light threshold: a count or `auto`.
    #[arg(long, global = true, default_value = "auto")]
    delta: String,
    #[arg(long, global = true, value_enum, default_value_t = HashArg::Det)]
    hash: HashArg,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Dense algorithm used for heavy products.
    #[arg(long, global = true, value_enum, default_value_t = BackendArg::Naive)]
    backend: BackendArg,
    /// Write a JSON report with instrumentation to this path.
    #[arg(long, global = true)]
    report: Option<PathBuf>,
    /// Output path; standard output when omitted.
    #[arg(short = 'o', long = "output", global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum HashArg {
    Det,
    Rand,
}

#[derive(Clone, Copy, ValueEnum)]
enum BackendArg {
    Naive,
    Strassen,
}

#[derive(Clone, Copy, ValueEnum)]
enum GraphGen {
    Random,
    Psaet,
}

#[derive(Subcommand)]
enum Command {
    /// Multiply two Matrix Market files.
    Multiply { a: PathBuf, b: PathBuf },
    /// Check C = AB with Freivalds' test (exactly for bool); exit 1 on mismatch.
    Verify {
        a: PathBuf,
        b: PathBuf,
        c: PathBuf,
        #[arg(long, default_value_t = 20)]
        repetitions: usize,
    },
    /// Bounds on σ(r).
    Exponent {
        /// Single value of r.
        #[arg(long)]
        r: Option<f64>,
        /// Grid `start:end:step`, e.g. 0:2:0.05.
        #[arg(long)]
        sweep: Option<String>,
        /// CSV of bounds with header a,b,c,omega.
        #[arg(long)]
        table: Option<PathBuf>,
        /// Use the table for ω = 2 instead of the built-in bounds.
        #[arg(long, conflicts_with = "table")]
        omega2: bool,
        /// lp, algebraic, omega2, trivial; repeatable.
        #[arg(long, default_value = "lp")]
        method: Vec<String>,
        /// Use `Σλa = 1 + σ` in the program.
        #[arg(long)]
        printed_variant: bool,
        /// Also print the solution μ̂ of ω(μ,1,1) = 1 + 2μ for the table.
        #[arg(long)]
        mu_hat: bool,
    },
    /// All-edges triangle detection (or counting) on a tripartite graph.
    Triangle {
        /// Edge list `part1 part2 u v`.
        #[arg(long, conflicts_with = "gen")]
        input: Option<PathBuf>,
        #[arg(long, value_enum)]
        gen: Option<GraphGen>,
        /// Part sizes for --gen random.
        #[arg(long, default_value_t = 32)]
        nx: usize,
        #[arg(long, default_value_t = 32)]
        ny: usize,
        #[arg(long, default_value_t = 32)]
        nz: usize,
        /// Edge probability for --gen random.
        #[arg(long, default_value_t = 0.1)]
        p: f64,
        /// Size n for --gen psaet.
        #[arg(long, default_value_t = 64)]
        n: usize,
        /// Report triangle counts per X-Z edge.
        #[arg(long)]
        count: bool,
        /// Also write the generated graph here.
        #[arg(long)]
        save_graph: Option<PathBuf>,
    },
    /// Recover AB from an approximation C̃ with few wrong entries.
    Correct { a: PathBuf, b: PathBuf, c: PathBuf },
    /// Transitive closure of a digraph given as `u v` lines.
    Closure {
        #[arg(long, conflicts_with = "gen")]
        input: Option<PathBuf>,
        /// Generate a random digraph instead.
        #[arg(long)]
        gen: bool,
        #[arg(long, default_value_t = 64)]
        n: usize,
        #[arg(long, default_value_t = 0.03)]
        p: f64,
    },
    /// Run seeded instance families and emit CSV (and JSON with --report).
    Bench {
        /// Families to run; all when omitted.
        #[arg(long, value_delimiter = ',')]
        family: Vec<String>,
        /// Target input sizes.
        #[arg(long, value_delimiter = ',', default_value = "1000,10000")]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 1)]
        seeds: u64,
    },
}

/// Failure exit codes: 1 for a failed check or computation, 2 for bad input.
enum Failure {
    Check(String),
    Input(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse { .. }
            | Error::ValueOutsideDomain { .. }
            | Error::InvalidArgument(_)
            | Error::DimensionMismatch(_)
            | Error::DomainMismatch(_)
            | Error::IndexOutOfRange { .. }
            | Error::NegativeEntry { .. }
            | Error::Io(_) => Failure::Input(e.to_string()),
            other => Failure::Check(other.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

fn options(cli: &Cli) -> CliResult<SparseOptions> {
    let delta: DeltaPolicy = cli.delta.parse()?;
    let dense = match cli.backend {
        BackendArg::Naive => DenseAlgo::Naive,
        BackendArg::Strassen => DenseAlgo::strassen(),
    };
    let mut opts = SparseOptions {
        backend: Backend::InputSparse(InputSparseConfig {
            delta,
            dense,
            ..Default::default()
        }),
        ..Default::default()
    };
    opts.densify.hash = match cli.hash {
        HashArg::Det => HashMode::Deterministic,
        HashArg::Rand => HashMode::Random,
    };
    opts.densify.seed = cli.seed;
    Ok(opts)
}

fn emit(path: Option<&Path>, text: &str) -> CliResult<()> {
    match path {
        Some(p) => fs::write(p, text)?,
        None => io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn emit_matrix(path: Option<&Path>, m: &AnyMatrix) -> CliResult<()> {
    let mut buf = Vec::new();
    m.write_mtx(&mut buf)?;
    emit(path, &String::from_utf8_lossy(&buf))
}

fn write_report(path: Option<&Path>, value: serde_json::Value) -> CliResult<()> {
    if let Some(p) = path {
        let text = serde_json::to_string_pretty(&value).map_err(|e| Failure::Input(e.to_string()))?;
        fs::write(p, text)?;
    }
    Ok(())
}

fn parse_sweep(s: &str) -> CliResult<Vec<f64>> {
    let parts: Vec<f64> = s
        .split(':')
        .map(|p| p.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| Failure::Input(format!("bad sweep {s:?}, expected start:end:step")))?;
    let [start, end, step] = parts[..] else {
        return Err(Failure::Input(format!("bad sweep {s:?}, expected start:end:step")));
    };
    if !(step > 0.0) || end < start {
        return Err(Failure::Input(format!("bad sweep {s:?}")));
    }
    let n = ((end - start) / step + 1e-9).floor() as usize;
    Ok((0..=n).map(|k| ((start + k as f64 * step) * 1e9).round() / 1e9).collect())
}

fn run(cli: &Cli) -> CliResult<()> {
    let out = cli.output.as_deref();
    let report = cli.report.as_deref();
    let domain: DomainKind = cli.domain.parse()?;
    match &cli.command {
        Command::Multiply { a, b } => {
            let a = AnyMatrix::read_mtx_file(domain, a)?;
            let b = AnyMatrix::read_mtx_file(domain, b)?;
            let start = Instant::now();
            let (c, trace) = a.multiply(&b, &options(cli)?)?;
            let ms = start.elapsed().as_secs_f64() * 1e3;
            emit_matrix(out, &c)?;
            write_report(
                report,
                json!({
                    "command": "multiply",
                    "domain": domain.to_string(),
                    "m_in": a.nnz() + b.nnz(),
                    "m_out": c.nnz(),
                    "max_xz_cap": trace.max_cap(),
                    "caps_within_bound": trace.caps_within_bound(),
                    "time_ms": ms,
                    "trace": trace,
                }),
            )
        }
        Command::Verify { a, b, c, repetitions } => {
            let a = AnyMatrix::read_mtx_file(domain, a)?;
            let b = AnyMatrix::read_mtx_file(domain, b)?;
            let c = AnyMatrix::read_mtx_file(domain, c)?;
            if AnyMatrix::verify_product(&a, &b, &c, *repetitions, cli.seed)? {
                println!("ok");
                Ok(())
            } else {
                Err(Failure::Check("C differs from AB".into()))
            }
        }
        Command::Exponent {
            r,
            sweep,
            table,
            omega2,
            method,
            printed_variant,
            mu_hat,
        } => {
            let table = match (table, omega2) {
                (Some(p), _) => OmegaTable::from_csv_file(p)?,
                (None, true) => OmegaTable::omega2(),
                (None, false) => OmegaTable::default_bounds(),
            };
            let opts = SigmaOptions {
                variant: if *printed_variant { LpVariant::Printed } else { LpVariant::Definition },
                ..Default::default()
            };
            let methods = method
                .iter()
                .map(|m| m.parse::<SigmaMethod>())
                .collect::<sparsemul::Result<Vec<_>>>()?;
            let rs = match (r, sweep) {
                (Some(r), None) => vec![*r],
                (None, Some(s)) => parse_sweep(s)?,
                (None, None) => exponent::grid(0.05)?,
                (Some(_), Some(_)) => return Err(Failure::Input("give either --r or --sweep".into())),
            };
            let rows = exponent::sigma_sweep(&rs, &methods, &table, &opts)?;
            let mut text = exponent::sweep_csv(&rows);
            if *mu_hat {
                text.push_str(&format!("# mu_hat,{:.6}\n", exponent::mu_hat(&table)?));
            }
            emit(out, &text)?;
            write_report(report, json!({ "command": "exponent", "rows": rows }))
        }
        Command::Triangle {
            input,
            gen,
            nx,
            ny,
            nz,
            p,
            n,
            count,
            save_graph,
        } => {
            let g = match (input, gen) {
                (Some(path), _) => TripartiteGraph::parse(&fs::read_to_string(path)?)?,
                (None, Some(GraphGen::Random)) => TripartiteGraph::random((*nx, *ny, *nz), *p, cli.seed),
                (None, Some(GraphGen::Psaet)) => TripartiteGraph::psaet(*n, cli.seed),
                (None, None) => return Err(Failure::Input("give --input or --gen".into())),
            };
            if let Some(path) = save_graph {
                fs::write(path, g.to_text())?;
            }
            let opts = options(cli)?;
            let mut text = String::new();
            let trace = if *count {
                let (counts, trace) = apps::count_triangles_via_mm(&g, &opts)?;
                for ((i, j), c) in counts {
                    text.push_str(&format!("{i} {j} {c}\n"));
                }
                trace
            } else {
                let (edges, trace) = apps::ae_triangle_via_mm(&g, &opts)?;
                for (i, j) in edges {
                    text.push_str(&format!("{i} {j}\n"));
                }
                trace
            };
            emit(out, &text)?;
            write_report(report, json!({ "command": "triangle", "trace": trace }))
        }
        Command::Correct { a, b, c } => {
            let opts = options(cli)?;
            let (a, b, c) = (
                AnyMatrix::read_mtx_file(domain, a)?,
                AnyMatrix::read_mtx_file(domain, b)?,
                AnyMatrix::read_mtx_file(domain, c)?,
            );
            let (fixed, errors) = match (&a, &b, &c) {
                (AnyMatrix::Int(a), AnyMatrix::Int(b), AnyMatrix::Int(c)) => {
                    let r = apps::correct_product(&Integer, a, b, c, &opts)?;
                    (AnyMatrix::Int(r.product), r.error.nnz())
                }
                (AnyMatrix::ZMod(z, a), AnyMatrix::ZMod(_, b), AnyMatrix::ZMod(_, c)) => {
                    let z: ZMod = *z;
                    let r = apps::correct_product(&z, a, b, c, &opts)?;
                    (AnyMatrix::ZMod(z, r.product), r.error.nnz())
                }
                _ => return Err(Failure::Input(format!("correct needs a ring domain (int or zmod), got {domain}"))),
            };
            eprintln!("corrected {errors} entries");
            emit_matrix(out, &fixed)?;
            write_report(report, json!({ "command": "correct", "corrected": errors }))
        }
        Command::Closure { input, gen, n, p } => {
            let g = match (input, gen) {
                (Some(path), _) => Digraph::parse(&fs::read_to_string(path)?)?,
                (None, true) => Digraph::random(*n, *p, cli.seed),
                (None, false) => return Err(Failure::Input("give --input or --gen".into())),
            };
            let run = apps::transitive_closure(&g, &options(cli)?)?;
            let closure = run.closure.expect("closure is set on success");
            emit(out, &closure.to_text())?;
            write_report(
                report,
                json!({ "command": "closure", "rounds": run.rounds, "arcs": closure.arcs.len(), "traces": run.traces }),
            )
        }
        Command::Bench { family, sizes, seeds } => {
            let families = if family.is_empty() {
                Family::ALL.to_vec()
            } else {
                family.iter().map(|f| f.parse()).collect::<sparsemul::Result<Vec<Family>>>()?
            };
            let seeds: Vec<u64> = (0..*seeds).map(|s| cli.seed + s).collect();
            let records = bench::run(&families, sizes, &seeds, &options(cli)?)?;
            emit(out, &bench::to_csv(&records))?;
            write_report(report, json!({ "command": "bench", "runs": records }))
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check(msg)) => {
            eprintln!("sparsemul: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("sparsemul: {msg}");
            ExitCode::from(2)
        }
    }
}
