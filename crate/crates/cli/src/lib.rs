//! `udl`: build lattice unit-distance configurations, count irredundant
//! paths and check the bound chain end to end.

mod verify;

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{ArgGroup, Parser, Subcommand};
use serde::Serialize;
use thiserror::Error;

use udl_core::bounds::{self, BoundsError};
use udl_core::config::{self, choose_params, build_config, ConfigError, ConfigParams, PointSet};
use udl_core::gaussian::{self, GaussianError};
use udl_core::numtheory::{APClass, ChebyshevKind, NumTheoryError, PrimeTable};
use udl_core::paths::{self, PathError, DEFAULT_STEP_BUDGET};
use udl_core::udgraph::{self, GraphError};

pub use verify::{verify_all, BoundCheck, PathStats, RunReport, VerifyOptions};

/// Environment variable that replaces the default DFS step budget.
pub const STEP_BUDGET_ENV: &str = "UDL_STEP_BUDGET";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Path(#[from] PathError),
    #[error(transparent)]
    NumTheory(#[from] NumTheoryError),
    #[error(transparent)]
    Gaussian(#[from] GaussianError),
    #[error(transparent)]
    Bounds(#[from] BoundsError),
    #[error(transparent)]
    UnitEquation(#[from] bounds::UnitEquationError),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("could not start worker pool: {0}")]
    Pool(String),
}

#[derive(Debug, Parser)]
#[command(name = "udl", version, about = "Exact unit-distance configurations and path-count checks")]
pub struct Cli {
    /// Worker threads for graph building and path search (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    pub workers: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parameters and point set of the grid configuration for n points.
    Config {
        #[arg(long)]
        n: u64,
        /// Write the points as `x y` lines.
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Unit-distance graph of the configuration or of a point file.
    #[command(group(ArgGroup::new("source").required(true).args(["n", "points"])))]
    Graph {
        #[arg(long)]
        n: Option<u64>,
        /// `x y`-per-line point file; needs --m.
        #[arg(long, requires = "m")]
        points: Option<PathBuf>,
        /// Squared target distance (defaults to the configuration's m).
        #[arg(long)]
        m: Option<u64>,
        /// Write the sorted `x1 y1 x2 y2` edge list.
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Irredundant path counts of length k on the peeled configuration graph.
    Paths {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        step_budget: Option<u64>,
        /// Write `x_v y_v x_w y_w count` for every joined ordered pair.
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Lattice points on the circle x² + y² = m.
    Reps {
        #[arg(long)]
        m: u64,
    },
    /// π, ϑ and ψ for the residue class a mod d up to n.
    Chebyshev {
        #[arg(long)]
        n: u64,
        #[arg(long, default_value_t = 4)]
        d: u64,
        #[arg(long, default_value_t = 1)]
        a: u64,
    },
    /// CSV table of the closed-form bounds for k = 2..=k-max.
    Bounds {
        #[arg(long)]
        n: u64,
        /// Group rank (defaults to the configuration's rank for n).
        #[arg(long)]
        r: Option<u64>,
        #[arg(long, default_value_t = 0.5)]
        epsilon: f64,
        #[arg(long, default_value_t = 8)]
        k_max: u64,
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Run the whole pipeline and print a JSON report of every check.
    Verify {
        #[arg(long)]
        n: u64,
        #[arg(long, default_value_t = 3)]
        k_max: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        step_budget: Option<u64>,
        /// Also write the report to this file.
        #[arg(long)]
        emit: Option<PathBuf>,
    },
}

/// What a command produced: text for stdout, files to write, and whether
/// every check passed.
#[derive(Debug, Default)]
pub struct Output {
    pub stdout: String,
    pub files: Vec<(PathBuf, String)>,
    pub passed: bool,
}

impl Output {
    fn ok(stdout: String) -> Self {
        Self {
            stdout,
            files: Vec::new(),
            passed: true,
        }
    }

    fn emit(mut self, path: Option<PathBuf>, contents: impl FnOnce() -> String) -> Self {
        if let Some(p) = path {
            self.files.push((p, contents()));
        }
        self
    }
}

pub fn dispatch<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    dispatch_to(argv, &mut stdout.lock(), &mut stderr.lock())
}

/// [`dispatch`] with explicit streams: 0 ok, 1 failed verification, 2 usage
/// or runtime error.
pub fn dispatch_to<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = err.write_all(text.as_bytes());
                2
            } else {
                let _ = out.write_all(text.as_bytes());
                0
            };
        }
    };
    let result = run(cli).and_then(|output| {
        for (path, contents) in &output.files {
            std::fs::write(path, contents).map_err(|source| CliError::Io {
                path: path.clone(),
                source,
            })?;
        }
        Ok(output)
    });
    match result {
        Ok(output) => {
            let _ = out.write_all(output.stdout.as_bytes());
            let _ = out.flush();
            if output.passed {
                0
            } else {
                1
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

pub fn run(cli: Cli) -> Result<Output, CliError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.workers)
        .build()
        .map_err(|e| CliError::Pool(e.to_string()))?;
    pool.install(|| run_command(cli.command))
}

/// `--step-budget`, else `UDL_STEP_BUDGET`, else the default.
pub fn resolve_step_budget(flag: Option<u64>) -> Result<u64, CliError> {
    if let Some(b) = flag {
        return Ok(b);
    }
    match std::env::var(STEP_BUDGET_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("{STEP_BUDGET_ENV}={v:?} is not a step count"))),
        Err(_) => Ok(DEFAULT_STEP_BUDGET),
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize");
    s.push('\n');
    s
}

#[derive(Serialize)]
struct ConfigSummary<'a> {
    params: &'a ConfigParams,
    rank_window: Option<config::RankWindow>,
    theta: f64,
    log_n_over_4: f64,
    generators: Option<config::GeneratorSet>,
}

#[derive(Serialize)]
struct GraphSummary {
    m: u64,
    edge_count: usize,
    degree_summary: udgraph::DegreeSummary,
}

#[derive(Serialize)]
struct EndpointPair {
    v: (i64, i64),
    w: (i64, i64),
    count: u64,
}

#[derive(Serialize)]
struct PathsSummary {
    n: u64,
    k: usize,
    peeled: udgraph::DegreeSummary,
    projected_steps: u128,
    total_paths: u64,
    lower_bound_per_start: u64,
    max_pair: Option<EndpointPair>,
}

#[derive(Serialize)]
struct ChebyshevSummary {
    x: u64,
    d: u64,
    a: u64,
    pi: f64,
    theta: f64,
    psi: f64,
}

fn run_command(command: Command) -> Result<Output, CliError> {
    match command {
        Command::Config { n, emit } => {
            let params = choose_params(n)?;
            let (theta, log_n_over_4) = config::theta_budget(&params);
            let summary = ConfigSummary {
                params: &params,
                rank_window: config::rank_bounds(n).ok(),
                theta,
                log_n_over_4,
                generators: config::generators(&params).ok(),
            };
            Ok(Output::ok(to_json(&summary)).emit(emit, || build_config(&params).to_text()))
        }
        Command::Graph { n, points, m, emit } => {
            let (points, m) = match (n, points) {
                (_, Some(path)) => {
                    let text = std::fs::read_to_string(&path).map_err(|source| CliError::Io { path, source })?;
                    (PointSet::parse(&text)?, m.expect("clap enforces --m with --points"))
                }
                (Some(n), None) => {
                    let params = choose_params(n)?;
                    (build_config(&params), m.unwrap_or(params.m))
                }
                (None, None) => unreachable!("clap requires --n or --points"),
            };
            let g = udgraph::build_graph(&points, m)?;
            let summary = GraphSummary {
                m,
                edge_count: g.edge_count(),
                degree_summary: udgraph::degree_summary(&g),
            };
            Ok(Output::ok(to_json(&summary)).emit(emit, || g.edge_list_text()))
        }
        Command::Paths { n, k, step_budget, emit } => {
            let budget = resolve_step_budget(step_budget)?;
            let params = choose_params(n)?;
            let g = udgraph::build_graph(&build_config(&params), params.m)?;
            let h = udgraph::peel(&g, udgraph::default_peel_threshold(&g));
            let starts: Vec<usize> = (0..h.vertex_count()).collect();
            let projected = paths::ensure_within_budget(&h, &starts, k, budget)?;
            let best = paths::max_pair_count(&h, k)?;
            let peeled = udgraph::degree_summary(&h);
            let coords = |v: usize| {
                let p = h.point(v);
                (p.a, p.b)
            };
            let summary = PathsSummary {
                n,
                k,
                peeled,
                projected_steps: projected,
                total_paths: best.total.count,
                lower_bound_per_start: paths::path_count_lower_bound(peeled.min_degree as u64, k),
                max_pair: best.best.map(|b| EndpointPair {
                    v: coords(b.v),
                    w: coords(b.w),
                    count: b.count,
                }),
            };
            let pairs = match emit {
                Some(_) => paths::pair_counts(&h, k)?,
                None => Vec::new(),
            };
            Ok(Output::ok(to_json(&summary)).emit(emit, || paths::pair_counts_text(&h, &pairs)))
        }
        Command::Reps { m } => {
            let points = lattice_points(m)?;
            let mut text = String::new();
            for p in points {
                writeln!(text, "{} {}", p.a, p.b).unwrap();
            }
            Ok(Output::ok(text))
        }
        Command::Chebyshev { n, d, a } => {
            let cls = APClass::new(d, a)?;
            let table = PrimeTable::new(n);
            let summary = ChebyshevSummary {
                x: n,
                d,
                a,
                pi: table.chebyshev(ChebyshevKind::Pi, n, cls),
                theta: table.chebyshev(ChebyshevKind::Theta, n, cls),
                psi: table.chebyshev(ChebyshevKind::Psi, n, cls),
            };
            Ok(Output::ok(to_json(&summary)))
        }
        Command::Bounds { n, r, epsilon, k_max, emit } => {
            if n < 3 {
                return Err(CliError::Usage(format!("bounds needs n >= 3, got {n}")));
            }
            if k_max < 2 {
                return Err(CliError::Usage(format!("--k-max must be at least 2, got {k_max}")));
            }
            let r = match r {
                Some(r) => r,
                None => choose_params(n.max(4))?.group_rank() as u64,
            };
            let rows = bounds::bound_rows(n, r, epsilon, 2..=k_max)?;
            let csv = bounds::rows_to_csv(&rows);
            Ok(Output::ok(csv.clone()).emit(emit, || csv))
        }
        Command::Verify {
            n,
            k_max,
            seed,
            step_budget,
            emit,
        } => {
            let opts = VerifyOptions {
                seed,
                step_budget: resolve_step_budget(step_budget)?,
            };
            let report = verify_all(n, k_max, &opts)?;
            let json = to_json(&report);
            let mut output = Output::ok(json.clone()).emit(emit, || json);
            output.passed = report.all_passed();
            Ok(output)
        }
    }
}

/// Sorted lattice points of norm `m`: through the Gaussian factorization when
/// `m` is a product of distinct primes `≡ 1 mod 4`, by direct search otherwise.
pub fn lattice_points(m: u64) -> Result<Vec<gaussian::GaussInt>, CliError> {
    if m == 0 {
        return Err(CliError::Usage("--m must be positive".into()));
    }
    match split_primes(m) {
        Some(primes) if !primes.is_empty() => Ok(gaussian::representations(&primes)?.into_iter().collect()),
        _ => Ok(gaussian::lattice_points_on_circle(m)),
    }
}

/// The prime factors of `m` if they are distinct and all `≡ 1 mod 4`.
fn split_primes(mut m: u64) -> Option<Vec<u64>> {
    let mut primes = Vec::new();
    let mut p = 2u64;
    while p * p <= m {
        if m % p == 0 {
            m /= p;
            if m % p == 0 || p % 4 != 1 {
                return None;
            }
            primes.push(p);
        }
        p += 1;
    }
    if m > 1 {
        if m % 4 != 1 {
            return None;
        }
        primes.push(m);
    }
    Some(primes)
}
