//! Command-line front end: argument parsing, run configuration and the four
//! run modes.

use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use sleig::harness::expected::{self, BlockReport};
use sleig::harness::output::{write_csv, write_json};
use sleig::harness::{run_sweep, solve, suite, ProblemSpec, SolveOptions, SweepOptions, DEFAULT_NT};
use sleig::moments::{moment_oracle, moments, moments_general};
use sleig::{BoundaryConditions, ExponentPair};

/// Environment variable capping the worker-thread count.
pub const WORKERS_ENV: &str = "SLEIG_WORKERS";

/// Moment validation threshold on `|q_m - oracle| / (1 + |q_0|)`.
pub const MOMENT_TOL: f64 = 1e-12;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Failure(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Failure(_) => 1,
        }
    }
}

impl From<sleig::Error> for CliError {
    fn from(e: sleig::Error) -> Self {
        match e {
            sleig::Error::Config(_)
            | sleig::Error::InvalidBoundary(_)
            | sleig::Error::InvalidExponent { .. }
            | sleig::Error::InvalidTerm(_)
            | sleig::Error::UnknownBuiltin(_)
            | sleig::Error::SizeTooSmall(_)
            | sleig::Error::InvalidArgument(_) => CliError::Config(e.to_string()),
            _ => CliError::Failure(e.to_string()),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Failure(e.to_string())
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Serialize)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "sleig", version, about = "Legendre-Galerkin eigenvalues of singular Sturm-Liouville problems")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Eigenvalues (and corrected eigenvalues) at one or more sizes N.
    Solve(ProblemArgs),
    /// Convergence sweep over an N grid.
    Sweep(SweepArgs),
    /// Re-run the published convergence tables and diff against them.
    ReproduceTables(OutputArgs),
    /// Compare the recurrence moments with Gauss-Jacobi quadrature.
    ValidateMoments(MomentArgs),
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Write to a file instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ProblemArgs {
    /// Built-in problem name or path to a TOML problem file.
    #[arg(long)]
    pub problem: String,
    /// Named boundary conditions, overriding the problem's own.
    #[arg(long)]
    pub bc: Option<String>,
    /// Basis sizes, e.g. `49,99,199` or `50-400:25`.
    #[arg(long = "N", value_name = "LIST", value_parser = parse_list)]
    pub n: Vec<Vec<usize>>,
    /// Eigenvalue indices, e.g. `5,10,20` or `1-15`.
    #[arg(long, value_name = "LIST", value_parser = parse_list)]
    pub k: Vec<Vec<usize>>,
    #[arg(long)]
    pub no_correction: bool,
    #[arg(long)]
    pub no_split: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    /// Self-reference size; defaults to max(1601, 2·max(N)+1).
    #[arg(long = "Nt")]
    pub n_t: Option<usize>,
    /// Skip the reference solve (no relative errors).
    #[arg(long, conflicts_with = "n_t")]
    pub no_reference: bool,
}

#[derive(Debug, Args)]
pub struct MomentArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub beta: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub gamma: f64,
    /// Highest moment index.
    #[arg(long = "M", default_value_t = 60)]
    pub m: usize,
}

/// `a,b,c`, `lo-hi` and `lo-hi:step` items, comma separated.
pub fn parse_list(s: &str) -> std::result::Result<Vec<usize>, String> {
    let mut out = Vec::new();
    for item in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let (range, step) = match item.split_once(':') {
            Some((r, st)) => (r, st.parse::<usize>().map_err(|e| format!("bad step in `{item}`: {e}"))?),
            None => (item, 1),
        };
        if step == 0 {
            return Err(format!("zero step in `{item}`"));
        }
        match range.split_once('-') {
            Some((lo, hi)) => {
                let lo: usize = lo.parse().map_err(|e| format!("bad bound in `{item}`: {e}"))?;
                let hi: usize = hi.parse().map_err(|e| format!("bad bound in `{item}`: {e}"))?;
                if lo > hi {
                    return Err(format!("empty range `{item}`"));
                }
                out.extend((lo..=hi).step_by(step));
            }
            None => out.push(range.parse().map_err(|e| format!("bad integer `{item}`: {e}"))?),
        }
    }
    if out.is_empty() {
        return Err("empty list".into());
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Mode {
    Solve,
    Sweep,
    ReproduceTables,
    ValidateMoments,
}

/// Everything a run needs, after validation.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub mode: Mode,
    pub problem: Option<String>,
    pub bc: Option<String>,
    pub n: Vec<usize>,
    pub k: Vec<usize>,
    pub n_t: Option<usize>,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub correction: bool,
    pub split: bool,
    pub beta: f64,
    pub gamma: f64,
    pub m: usize,
}

impl RunConfig {
    fn empty(mode: Mode, output: &OutputArgs) -> Self {
        Self {
            mode,
            problem: None,
            bc: None,
            n: Vec::new(),
            k: Vec::new(),
            n_t: None,
            format: output.format,
            out: output.out.clone(),
            correction: true,
            split: true,
            beta: 0.0,
            gamma: 0.0,
            m: 0,
        }
    }

    fn with_problem(mode: Mode, p: &ProblemArgs) -> Self {
        let sorted = |v: &[Vec<usize>]| {
            let mut v: Vec<usize> = v.concat();
            v.sort_unstable();
            v.dedup();
            v
        };
        Self {
            problem: Some(p.problem.clone()),
            bc: p.bc.clone(),
            n: sorted(&p.n),
            k: sorted(&p.k),
            correction: !p.no_correction,
            split: !p.no_split,
            ..Self::empty(mode, &p.output)
        }
    }

    pub fn from_cli(cli: &Cli) -> CliResult<Self> {
        let cfg = match &cli.command {
            Command::Solve(p) => Self::with_problem(Mode::Solve, p),
            Command::Sweep(s) => {
                let mut cfg = Self::with_problem(Mode::Sweep, &s.problem);
                let n_max = cfg.n.iter().copied().max().unwrap_or(0);
                cfg.n_t = match (s.no_reference, s.n_t) {
                    (true, _) => None,
                    (false, Some(nt)) => Some(nt),
                    (false, None) => Some(DEFAULT_NT.max(2 * n_max + 1)),
                };
                cfg
            }
            Command::ReproduceTables(o) => Self::empty(Mode::ReproduceTables, o),
            Command::ValidateMoments(m) => Self {
                beta: m.beta,
                gamma: m.gamma,
                m: m.m,
                ..Self::empty(Mode::ValidateMoments, &OutputArgs { format: Format::Csv, out: None })
            },
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> CliResult<()> {
        let bad = |m: String| Err(CliError::Config(m));
        match self.mode {
            Mode::Solve | Mode::Sweep => {
                if self.problem.is_none() {
                    return bad("--problem is required".into());
                }
                if self.n.is_empty() {
                    return bad("--N is required".into());
                }
                if self.k.is_empty() {
                    return bad("--k is required".into());
                }
                if let Some(&n) = self.n.iter().find(|&&n| n < 4) {
                    return bad(format!("N = {n} is too small (need N >= 4)"));
                }
                if self.k.contains(&0) {
                    return bad("eigenvalue indices start at 1".into());
                }
                if let Some(name) = &self.bc {
                    if BoundaryConditions::by_name(name).is_none() {
                        return bad(format!("unknown boundary conditions `{name}`"));
                    }
                }
            }
            Mode::ValidateMoments => {
                ExponentPair::new(self.beta, self.gamma).map_err(|e| CliError::Config(e.to_string()))?;
            }
            Mode::ReproduceTables => {}
        }
        Ok(())
    }

    /// Builtin name first, then a TOML file path.
    pub fn problem_spec(&self) -> CliResult<ProblemSpec> {
        let name = self.problem.as_deref().ok_or_else(|| CliError::Config("--problem is required".into()))?;
        let bc = self.bc.as_deref().and_then(BoundaryConditions::by_name);
        if let Some(spec) = suite::lookup(name, bc) {
            return Ok(spec);
        }
        let path = Path::new(name);
        if !path.exists() {
            return Err(CliError::Config(format!("`{name}` is neither a built-in problem nor a readable file")));
        }
        let mut spec = ProblemSpec::load(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        if let Some(b) = bc {
            spec.bc = b;
        }
        Ok(spec)
    }

    fn solve_options(&self) -> SolveOptions {
        SolveOptions {
            split: self.split,
            correction: self.correction,
        }
    }
}

/// Sizes the rayon pool from [`WORKERS_ENV`] when it is set.
pub fn init_workers() -> CliResult<()> {
    let Ok(v) = std::env::var(WORKERS_ENV) else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Config(format!("{WORKERS_ENV} must be a positive integer, got `{v}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Config(e.to_string()))
}

fn sink<'a>(out: &Option<PathBuf>, stdout: &'a mut dyn Write) -> CliResult<Box<dyn Write + 'a>> {
    Ok(match out {
        Some(p) => Box::new(File::create(p).map_err(|e| CliError::Config(format!("{}: {e}", p.display())))?),
        None => Box::new(stdout),
    })
}

/// Runs one command. Tables go to `--out` (or `stdout`), summaries to `stdout`.
pub fn run(cfg: &RunConfig, stdout: &mut dyn Write) -> CliResult<()> {
    match cfg.mode {
        Mode::Solve => run_solve(cfg, stdout),
        Mode::Sweep => run_sweep_mode(cfg, stdout),
        Mode::ReproduceTables => run_reproduce(cfg, stdout),
        Mode::ValidateMoments => run_moments(cfg, stdout),
    }
}

#[derive(Debug, Serialize)]
struct SolveRow {
    problem: String,
    n: usize,
    k: usize,
    lambda: Option<f64>,
    mu: Option<f64>,
    residual: Option<f64>,
}

fn run_solve(cfg: &RunConfig, stdout: &mut dyn Write) -> CliResult<()> {
    let spec = cfg.problem_spec()?;
    let problem = spec.problem()?;
    let k_max = *cfg.k.iter().max().expect("validated");
    let mut rows = Vec::new();
    for &n in &cfg.n {
        let sol = solve(&problem, spec.even, n, k_max, cfg.solve_options())?;
        for &k in &cfg.k {
            rows.push(SolveRow {
                problem: spec.name.clone(),
                n,
                k,
                lambda: sol.lambda(k),
                mu: sol.mu(k),
                residual: sol.pairs.get(k - 1).map(|p| p.residual),
            });
        }
    }
    let mut w = sink(&cfg.out, stdout)?;
    match cfg.format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut w, &rows).map_err(|e| CliError::Failure(e.to_string()))?;
            writeln!(w)?;
        }
        Format::Csv => {
            let mut c = csv::Writer::from_writer(w);
            c.write_record(["problem", "N", "k", "lambda", "mu", "residual"])
                .map_err(|e| CliError::Failure(e.to_string()))?;
            let num = |v: Option<f64>| v.map(|x| format!("{x:.16e}")).unwrap_or_default();
            for r in &rows {
                c.write_record([r.problem.clone(), r.n.to_string(), r.k.to_string(), num(r.lambda), num(r.mu), num(r.residual)])
                    .map_err(|e| CliError::Failure(e.to_string()))?;
            }
            c.flush()?;
        }
    }
    let missing = rows.iter().filter(|r| r.lambda.is_none()).count();
    if missing > 0 {
        return Err(CliError::Failure(format!("{missing} requested eigenvalues exceed the basis size")));
    }
    Ok(())
}

fn run_sweep_mode(cfg: &RunConfig, stdout: &mut dyn Write) -> CliResult<()> {
    let spec = cfg.problem_spec()?;
    let opts = SweepOptions {
        k: cfg.k.clone(),
        grid: cfg.n.clone(),
        n_t: cfg.n_t,
        solve: cfg.solve_options(),
    };
    let res = run_sweep(&spec, &opts)?;
    let failures: Vec<String> = res
        .points
        .iter()
        .filter_map(|p| p.error.as_ref().map(|e| format!("k={} N={}: {e}", p.k, p.n)))
        .collect();
    {
        let w = sink(&cfg.out, stdout)?;
        let results = std::slice::from_ref(&res);
        match cfg.format {
            Format::Csv => write_csv(results, w)?,
            Format::Json => write_json(results, w)?,
        }
    }
    if failures.is_empty() {
        Ok(())
    } else {
        Err(CliError::Failure(format!("{} solves failed; first: {}", failures.len(), failures[0])))
    }
}

fn run_reproduce(cfg: &RunConfig, stdout: &mut dyn Write) -> CliResult<()> {
    let mut reports: Vec<BlockReport> = Vec::new();
    for table in expected::tables() {
        reports.extend(expected::reproduce(&table, SolveOptions::default())?);
    }
    let mut failed = 0;
    for r in &reports {
        let bad: Vec<_> = r.cells.iter().filter(|c| !c.pass).collect();
        let ok = r.pass();
        failed += usize::from(!ok);
        writeln!(
            stdout,
            "{} {:<18} p = {:<5} {:>3} cells {}",
            r.potential,
            r.bc,
            r.p_predicted,
            r.cells.len(),
            if ok { "ok".to_string() } else { format!("FAILED ({} cells)", bad.len()) }
        )?;
        for c in bad {
            writeln!(stdout, "    k={} N={} {}: expected {:e}, got {:?}", c.k, c.n, c.what, c.expected, c.got)?;
        }
    }
    if let Some(path) = &cfg.out {
        let cells: Vec<_> = reports.iter().flat_map(|r| r.cells.iter()).collect();
        let f = File::create(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        match cfg.format {
            Format::Json => serde_json::to_writer_pretty(f, &cells).map_err(|e| CliError::Failure(e.to_string()))?,
            Format::Csv => {
                let mut c = csv::Writer::from_writer(f);
                for cell in cells {
                    c.serialize(cell).map_err(|e| CliError::Failure(e.to_string()))?;
                }
                c.flush()?;
            }
        }
    }
    if failed > 0 {
        return Err(CliError::Failure(format!("{failed} of {} blocks differ from the published tables", reports.len())));
    }
    Ok(())
}

fn run_moments(cfg: &RunConfig, stdout: &mut dyn Write) -> CliResult<()> {
    let e = ExponentPair::new(cfg.beta, cfg.gamma)?;
    let q = moments(e, cfg.m)?.values;
    let scale = 1.0 + q[0].abs();
    let (mut worst, mut at) = (0.0_f64, 0);
    for (m, v) in q.iter().enumerate() {
        let d = (v - moment_oracle(e, m)).abs() / scale;
        if d > worst {
            (worst, at) = (d, m);
        }
    }
    writeln!(stdout, "beta = {}, gamma = {}, M = {}", cfg.beta, cfg.gamma, cfg.m)?;
    writeln!(stdout, "max |q_m - quadrature| / (1 + |q_0|) = {worst:.3e} at m = {at}")?;
    let mut pass = worst <= MOMENT_TOL;
    if cfg.beta == 0.0 || cfg.gamma == 0.0 || cfg.beta == cfg.gamma {
        let g = moments_general(e, cfg.m)?.values;
        let d = q.iter().zip(&g).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max) / scale;
        writeln!(stdout, "special vs general path: {d:.3e}")?;
        pass &= d <= MOMENT_TOL;
    }
    if pass {
        writeln!(stdout, "ok (tolerance {MOMENT_TOL:e})")?;
        Ok(())
    } else {
        Err(CliError::Failure(format!("moment deviation above {MOMENT_TOL:e}")))
    }
}
