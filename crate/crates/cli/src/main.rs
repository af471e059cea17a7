//! `wedgelab`: build discretized configuration complexes, compute their
//! homology and run the closed-form verification table.
//!
//! Data goes to stdout, diagnostics to stderr. Exit status 2 means bad
//! arguments, 1 means a build or verification failure.

mod space;

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use wedgelab::config::ConfigComplex;
use wedgelab::homology::HomologyResult;
use wedgelab::partitions::PartitionPoset;
use wedgelab::series::{egf_euler, egf_series, MAX_EGF_DEGREE};
use wedgelab::verify::{
    betti_closed, convention_report, euler_from_formula, run_verification, VerifyOptions,
};

use crate::space::SpaceSpec;

#[derive(Parser)]
#[command(name = "wedgelab", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(clap::Args)]
struct ComplexArgs {
    /// simplex:n | complete:m | skeleton:n:d | file:path
    #[arg(value_name = "SPACE", required_unless_present = "space")]
    space_arg: Option<SpaceSpec>,

    /// Same as the positional SPACE.
    #[arg(long, conflicts_with = "space_arg")]
    space: Option<SpaceSpec>,

    /// Number of points.
    #[arg(long)]
    k: usize,

    /// Build the quotient UD_k instead of D_k.
    #[arg(long)]
    unordered: bool,
}

impl ComplexArgs {
    fn spec(&self) -> &SpaceSpec {
        self.space_arg
            .as_ref()
            .or(self.space.as_ref())
            .expect("clap enforces one of the two")
    }

    fn build(&self) -> Result<ConfigComplex, String> {
        let x = self.spec().build().map_err(|e| e.to_string())?;
        Ok(if self.unordered {
            ConfigComplex::build_unordered(&x, self.k)
        } else {
            ConfigComplex::build_ordered(&x, self.k)
        })
    }
}

#[derive(Subcommand)]
enum Command {
    /// Print a JSON summary of D_k(X): f-vector, dimension, Euler characteristic.
    Build {
        #[command(flatten)]
        complex: ComplexArgs,
        /// Write to this file instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the integer homology of D_k(X) as JSON.
    Homology {
        #[command(flatten)]
        complex: ComplexArgs,
        /// Only compute these degrees (repeatable).
        #[arg(long = "degree")]
        degrees: Vec<usize>,
    },
    /// Cross-check closed forms, recurrences, cell counts and homology.
    Verify {
        #[arg(long, default_value_t = 6)]
        max_n: i64,
        /// Defaults to max-n.
        #[arg(long)]
        max_k: Option<i64>,
        #[arg(long)]
        with_homology: bool,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Worker threads; WEDGELAB_JOBS takes precedence.
        #[arg(long)]
        jobs: Option<usize>,
        #[arg(long, hide = true)]
        corrupt_boundary: bool,
    },
    /// Euler characteristics read off e^(x + y - x e^(-y)).
    Egf {
        #[arg(long, default_value_t = 12)]
        max_degree: usize,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Closed-form β_{k,n} and χ_{k,n} for 1 <= k <= n + 1 <= max-n + 1.
    Table {
        #[arg(long, default_value_t = 8)]
        max_n: i64,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Hasse diagram of the ordered partial partition poset as a JSON edge list.
    Poset {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        k: usize,
    },
}

enum Failure {
    Usage(String),
    Run(String),
}

impl Failure {
    fn exit(self) -> ExitCode {
        match self {
            Failure::Usage(msg) => {
                eprintln!("error: {msg}");
                ExitCode::from(2)
            }
            Failure::Run(msg) => {
                eprintln!("error: {msg}");
                ExitCode::from(1)
            }
        }
    }
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("plain data serializes");
    s.push('\n');
    s
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| Failure::Run(format!("{}: {e}", path.display()))),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Failure::Run(e.to_string())),
    }
}

fn cmd_build(complex: &ComplexArgs, out: Option<&PathBuf>) -> Result<(), Failure> {
    let c = complex.build().map_err(Failure::Run)?;
    emit(&json(&c.summary(&complex.spec().to_string())), out)
}

fn cmd_homology(complex: &ComplexArgs, degrees: &[usize]) -> Result<(), Failure> {
    let c = complex.build().map_err(Failure::Run)?;
    let cx = c.chain_complex().map_err(|e| Failure::Run(e.to_string()))?;
    let result = if degrees.is_empty() {
        cx.homology()
    } else {
        let mut ds = degrees.to_vec();
        ds.sort_unstable();
        ds.dedup();
        HomologyResult {
            degrees: ds.into_iter().map(|d| cx.homology_in_degree(d)).collect(),
        }
    };
    emit(&json(&result), None)
}

fn cmd_verify(opts: VerifyOptions, format: Format, jobs: Option<usize>) -> Result<(), Failure> {
    let env_jobs = std::env::var("WEDGELAB_JOBS").ok();
    let jobs = match env_jobs {
        Some(v) => Some(
            v.parse::<usize>()
                .map_err(|_| Failure::Usage(format!("WEDGELAB_JOBS={v:?} is not a count")))?,
        ),
        None => jobs,
    };
    let threads = jobs
        .or_else(|| std::thread::available_parallelism().ok().map(Into::into))
        .unwrap_or(1)
        .max(1);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Failure::Run(e.to_string()))?;
    let table = pool.install(|| run_verification(&opts));

    if opts.max_n >= 3 && opts.max_k >= 3 {
        if let Ok(r) = convention_report(3, 3) {
            eprintln!(
                "note: recurrence at (k,n)=(3,3): base β_{{j,j-1}}=j! gives {}, base j!-1 gives {}, closed form {}",
                r.base_factorial, r.base_factorial_minus_one, r.closed
            );
        }
    }
    for row in table.failures() {
        for d in &row.detail {
            eprintln!("mismatch at (k,n)=({},{}): {d}", row.k, row.n);
        }
    }
    let text = match format {
        Format::Json => json(&table),
        Format::Csv => table.to_csv(),
    };
    emit(&text, None)?;
    if table.all_pass() {
        Ok(())
    } else {
        Err(Failure::Run(format!(
            "{} of {} rows failed",
            table.failures().count(),
            table.rows.len()
        )))
    }
}

#[derive(Serialize)]
struct EulerRow {
    k: usize,
    n: i64,
    euler: String,
}

#[derive(Serialize)]
struct EulerTable {
    rows: Vec<EulerRow>,
}

fn render_euler(rows: Vec<EulerRow>, format: Format) -> String {
    match format {
        Format::Json => json(&EulerTable { rows }),
        Format::Csv => {
            let mut s = String::from("k,n,euler\n");
            for r in rows {
                s.push_str(&format!("{},{},{}\n", r.k, r.n, r.euler));
            }
            s
        }
    }
}

fn cmd_egf(max_degree: usize, format: Format) -> Result<(), Failure> {
    if max_degree > MAX_EGF_DEGREE {
        return Err(Failure::Usage(format!(
            "--max-degree {max_degree} exceeds {MAX_EGF_DEGREE}"
        )));
    }
    let series = egf_series(max_degree).map_err(|e| Failure::Run(e.to_string()))?;
    let mut rows = Vec::new();
    // χ_{k,n} sits at x^k y^(n+1)
    for k in 0..=max_degree {
        for m in 1..=max_degree - k {
            let chi = egf_euler(&series, k, m).map_err(|e| Failure::Run(e.to_string()))?;
            rows.push(EulerRow {
                k,
                n: m as i64 - 1,
                euler: chi.to_string(),
            });
        }
    }
    emit(&render_euler(rows, format), None)
}

#[derive(Serialize)]
struct ClosedRow {
    k: i64,
    n: i64,
    betti: String,
    euler: String,
}

#[derive(Serialize)]
struct ClosedTable {
    rows: Vec<ClosedRow>,
}

fn cmd_table(max_n: i64, format: Format) -> Result<(), Failure> {
    if max_n < 0 {
        return Err(Failure::Usage("--max-n must be nonnegative".into()));
    }
    let mut rows = Vec::new();
    for n in 0..=max_n {
        for k in 1..=n + 1 {
            let betti = betti_closed(k, n).map_err(|e| Failure::Run(e.to_string()))?;
            let euler = euler_from_formula(k, n).map_err(|e| Failure::Run(e.to_string()))?;
            rows.push(ClosedRow {
                k,
                n,
                betti: betti.to_string(),
                euler: euler.to_string(),
            });
        }
    }
    let text = match format {
        Format::Json => json(&ClosedTable { rows }),
        Format::Csv => {
            let mut s = String::from("k,n,betti,euler\n");
            for r in rows {
                s.push_str(&format!("{},{},{},{}\n", r.k, r.n, r.betti, r.euler));
            }
            s
        }
    };
    emit(&text, None)
}

fn cmd_poset(n: u32, k: usize) -> Result<(), Failure> {
    let poset = PartitionPoset::build(n, k).map_err(|e| Failure::Usage(e.to_string()))?;
    let mut s = serde_json::to_string(&poset.hasse_edges()).expect("edges serialize");
    s.push('\n');
    emit(&s, None)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Build { complex, out } => cmd_build(complex, out.as_ref()),
        Command::Homology { complex, degrees } => cmd_homology(complex, degrees),
        Command::Verify {
            max_n,
            max_k,
            with_homology,
            format,
            jobs,
            corrupt_boundary,
        } => {
            let mut opts = VerifyOptions::new(*max_n, max_k.unwrap_or(*max_n), *with_homology);
            opts.corrupt_boundary = *corrupt_boundary;
            cmd_verify(opts, *format, *jobs)
        }
        Command::Egf { max_degree, format } => cmd_egf(*max_degree, *format),
        Command::Table { max_n, format } => cmd_table(*max_n, *format),
        Command::Poset { n, k } => cmd_poset(*n, *k),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => f.exit(),
    }
}
