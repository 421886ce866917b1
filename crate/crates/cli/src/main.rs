//! `cest`: generate hypergraphs, compute extreme tensor eigenvalues, check the
//! kernels against brute-force oracles and rerun the experiment table.
//!
//! Exit codes: 0 success, 1 usage, 2 unreadable or invalid input, 3 numerical
//! failure (including a failed `verify`).

mod bench;
mod record;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use cest_core::verify::{self, VerifyOptions};
use cest_core::{
    format_hypergraph, generators, multi_start, read_hypergraph, sunflower_lambda_star, tensor_apply, Direction,
    EigKind, Error, GammaPolicy, Hypergraph, LineSearchParams, MultiStartReport64, SolverConfig64, TensorSelector,
    TolScaling,
};

use record::{append_csv, format_lambda, RunRecord};

#[derive(Parser)]
#[command(name = "cest", version, about = "Extreme H- and Z-eigenvalues of hypergraph tensors")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a hypergraph from one of the built-in families.
    Gen(GenArgs),
    /// Multi-start solve on a hypergraph file.
    Solve(SolveArgs),
    /// Run the oracle suite; exits 3 naming the first failing check.
    Verify(VerifyArgs),
    /// Run the experiment table and print one row per case.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Squid,
    Sunflower,
    Grid,
    BlowupPetersen,
    Icosahedron,
}

#[derive(Args)]
struct GenArgs {
    family: Family,
    /// Edge size (squid, sunflower).
    #[arg(long, default_value_t = 4)]
    k: usize,
    /// Number of petals (sunflower).
    #[arg(long, default_value_t = 10)]
    delta: usize,
    /// Subdivision level (grid, icosahedron).
    #[arg(long, default_value_t = 1)]
    s: u32,
    /// Blow-up factor (blowup-petersen).
    #[arg(long, default_value_t = 2)]
    t: usize,
    /// Output file; standard output if omitted.
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Scaling {
    Off,
    On,
    Auto,
}

#[derive(Args)]
struct SolverFlags {
    #[arg(long, default_value_t = 1)]
    starts: usize,
    #[arg(long, env = "CEST_SEED", default_value_t = 0)]
    seed: u64,
    /// L-BFGS memory.
    #[arg(long, default_value_t = 5)]
    memory: usize,
    #[arg(long, default_value_t = 0.01)]
    eta: f64,
    #[arg(long, default_value_t = 0.5)]
    beta: f64,
    /// Curvature floor below which a correction pair is ignored.
    #[arg(long, default_value_t = 1e-10)]
    kappa: f64,
    #[arg(long, default_value_t = 1e-6)]
    grad_tol: f64,
    #[arg(long, default_value_t = 1e-8)]
    step_tol: f64,
    #[arg(long, default_value_t = 1e-16)]
    fval_tol: f64,
    #[arg(long, default_value_t = 5000)]
    max_iter: usize,
    /// Initial Hessian scaling: bb1, bb2, dai or mix.
    #[arg(long, default_value = "mix", value_parser = parse_core::<GammaPolicy>)]
    gamma: GammaPolicy,
    /// Multiply the tolerances by sqrt(n); auto does so for n > 10^4.
    #[arg(long, value_enum, default_value_t = Scaling::Auto)]
    scale_tols: Scaling,
    /// Worker threads for multi-start; results do not depend on it.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

impl SolverFlags {
    fn config(&self) -> SolverConfig64 {
        SolverConfig64 {
            memory: self.memory,
            line_search: LineSearchParams {
                eta: self.eta,
                beta: self.beta,
                ..LineSearchParams::default()
            },
            kappa: self.kappa,
            grad_tol: self.grad_tol,
            step_tol: self.step_tol,
            fval_tol: self.fval_tol,
            max_iter: self.max_iter,
            tol_scaling: match self.scale_tols {
                Scaling::Off => TolScaling::Off,
                Scaling::On => TolScaling::On,
                Scaling::Auto => TolScaling::Auto,
            },
            gamma_policy: self.gamma,
            seed: self.seed,
            jobs: self.jobs,
        }
    }
}

#[derive(Args)]
struct SolveArgs {
    input: PathBuf,
    /// adj, lap or slap.
    #[arg(long, default_value = "adj", value_parser = parse_core::<TensorSelector>)]
    tensor: TensorSelector,
    /// h or z.
    #[arg(long, default_value = "h", value_parser = parse_core::<EigKind>)]
    eig: EigKind,
    /// min or max.
    #[arg(long, default_value = "min", value_parser = parse_core::<Direction>)]
    dir: Direction,
    /// Known eigenvalue for the accuracy rate. Sunflower Laplacian H maxima
    /// get the closed-form value automatically.
    #[arg(long, allow_negative_numbers = true)]
    reference: Option<f64>,
    /// Append a record to this CSV file.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Family label for the CSV record; defaults to the file stem.
    #[arg(long)]
    family: Option<String>,
    #[command(flatten)]
    solver: SolverFlags,
}

#[derive(Args)]
struct VerifyArgs {
    /// Largest dimension for the dense-tensor checks (at most 13).
    #[arg(long, default_value_t = 13)]
    max_n: usize,
    #[arg(long, default_value_t = 20)]
    samples: usize,
    #[arg(long, env = "CEST_SEED", default_value_t = 2024)]
    seed: u64,
    /// Swap the Laplacian kernel for the signless one, to see the suite fail.
    #[arg(long, hide = true)]
    flip_laplacian_sign: bool,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, default_value_t = 100)]
    starts: usize,
    #[arg(long, env = "CEST_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Drop the largest instance of each family.
    #[arg(long)]
    quick: bool,
    #[arg(long)]
    csv: Option<PathBuf>,
}

fn parse_core<T: std::str::FromStr<Err = Error>>(s: &str) -> Result<T, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

enum Failure {
    Usage(String),
    Input(String),
    Numeric(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Input(_) => 2,
            Failure::Numeric(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Input(m) | Failure::Numeric(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let msg = e.to_string();
        match e {
            Error::InvalidParameter(_) | Error::IsolatedVertexInHMode(_) => Failure::Usage(msg),
            Error::Parse { .. }
            | Error::Io(_)
            | Error::NoEdges
            | Error::WrongArity { .. }
            | Error::IndexOutOfRange { .. }
            | Error::DuplicateVertexInEdge { .. }
            | Error::DuplicateEdge { .. }
            | Error::IsolatedVertex { .. }
            | Error::OrderTooSmall(_)
            | Error::OddOrder(_)
            | Error::InvalidGraph(_) => Failure::Input(msg),
            Error::DimensionMismatch { .. }
            | Error::TooLarge { .. }
            | Error::NonPositiveB(_)
            | Error::LineSearchFailed(_)
            | Error::BracketFailure { .. }
            | Error::NotNonnegative(_)
            | Error::NoConvergence(_) => Failure::Numeric(msg),
        }
    }
}

fn io_failure(path: &Path, e: std::io::Error) -> Failure {
    Failure::Input(format!("{}: {e}", path.display()))
}

fn cmd_gen(args: &GenArgs) -> Result<(), Failure> {
    let h = match args.family {
        Family::Squid => generators::squid(args.k)?,
        Family::Sunflower => generators::sunflower(args.k, args.delta)?,
        Family::Grid => generators::grid(args.s)?,
        Family::BlowupPetersen => generators::blowup(&generators::petersen(), args.t)?,
        Family::Icosahedron => generators::icosahedron(args.s)?,
    };
    let text = format_hypergraph(&h);
    match &args.out {
        Some(path) => std::fs::write(path, text).map_err(|e| io_failure(path, e))?,
        None => print!("{text}"),
    }
    Ok(())
}

fn auto_reference(h: &Hypergraph, sel: TensorSelector, kind: EigKind, dir: Direction) -> Option<f64> {
    if sel != TensorSelector::Laplacian || kind != EigKind::H || dir != Direction::Max {
        return None;
    }
    let delta = h.sunflower_degree()?;
    sunflower_lambda_star(h.k(), delta).ok()
}

fn record_for(
    family: String,
    h: &Hypergraph,
    (sel, kind, dir): (TensorSelector, EigKind, Direction),
    report: &MultiStartReport64,
    seconds: f64,
    seed: u64,
) -> RunRecord {
    RunRecord {
        family,
        n: h.n(),
        m: h.m(),
        k: h.k(),
        selector: sel.to_string(),
        eig: kind.to_string(),
        direction: dir.to_string(),
        starts: report.runs.len(),
        best_lambda: format_lambda(report.best_lambda),
        accuracy: report.accuracy_rate,
        median_iters: report.median_iters(),
        wall_time_s: seconds,
        seed,
    }
}

fn cmd_solve(args: &SolveArgs) -> Result<(), Failure> {
    if args.solver.starts == 0 {
        return Err(Failure::Usage("--starts must be at least 1".into()));
    }
    let h = read_hypergraph(&args.input).map_err(|e| match e {
        Error::Io(msg) => Failure::Input(format!("{}: {msg}", args.input.display())),
        e => e.into(),
    })?;
    let cfg = args.solver.config();
    let reference = args
        .reference
        .or_else(|| auto_reference(&h, args.tensor, args.eig, args.dir));
    let clock = Instant::now();
    let report = multi_start(&h, args.tensor, args.eig, args.dir, &cfg, args.solver.starts, reference)?;
    let seconds = clock.elapsed().as_secs_f64();
    let best = report.best();

    println!(
        "input: {} (n = {}, m = {}, k = {})",
        args.input.display(),
        h.n(),
        h.m(),
        h.k()
    );
    println!(
        "problem: {} {} {}, {} starts, seed {}",
        args.tensor, args.eig, args.dir, args.solver.starts, args.solver.seed
    );
    println!("best lambda: {:.4}", report.best_lambda);
    println!("best lambda (full): {}", format_lambda(report.best_lambda));
    if let (Some(r), Some(acc)) = (reference, report.accuracy_rate) {
        println!("reference: {}", format_lambda(r));
        println!("relative error: {:.3e}", (report.best_lambda - r).abs() / r.abs().max(f64::MIN_POSITIVE));
        println!("accuracy: {:.1}%", 100.0 * acc);
    }
    println!("residual: {:.3e}", best.residual_inf);
    println!(
        "status: {} after {} iterations (median over starts {})",
        best.status,
        best.iters,
        report.median_iters()
    );

    if let Some(path) = &args.csv {
        let family = args.family.clone().unwrap_or_else(|| {
            args.input
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_default()
        });
        let rec = record_for(family, &h, (args.tensor, args.eig, args.dir), &report, seconds, args.solver.seed);
        append_csv(path, &[rec]).map_err(|e| io_failure(path, e))?;
    }
    Ok(())
}

fn cmd_verify(args: &VerifyArgs) -> Result<(), Failure> {
    if args.max_n > 13 {
        return Err(Failure::Usage(format!(
            "--max-n {} too large for dense oracles (at most 13)",
            args.max_n
        )));
    }
    let opts = VerifyOptions {
        max_n: args.max_n,
        samples: args.samples,
        seed: args.seed,
    };
    let flip = args.flip_laplacian_sign;
    let kernel = move |h: &Hypergraph, sel: TensorSelector, x: &[f64]| {
        let sel = if flip && sel == TensorSelector::Laplacian {
            TensorSelector::SignlessLaplacian
        } else {
            sel
        };
        tensor_apply(h, sel, x)
    };
    let checks = verify::run_with_kernel(&opts, &kernel)?;
    println!("{:<36} {:>11} {:>11} {:>7}  result", "check", "worst", "tolerance", "cases");
    for c in &checks {
        println!(
            "{:<36} {:>11.3e} {:>11.1e} {:>7}  {}",
            c.name,
            c.worst,
            c.tolerance,
            c.cases,
            if c.passed { "pass" } else { "FAIL" }
        );
    }
    match verify::first_failure(&checks) {
        None => {
            println!("all {} checks passed", checks.len());
            Ok(())
        }
        Some(c) => Err(Failure::Numeric(format!(
            "check {} failed: worst {:.3e} exceeds {:.1e}",
            c.name, c.worst, c.tolerance
        ))),
    }
}

fn cmd_bench(args: &BenchArgs) -> Result<(), Failure> {
    if args.starts == 0 {
        return Err(Failure::Usage("--starts must be at least 1".into()));
    }
    let cfg = SolverConfig64 {
        seed: args.seed,
        jobs: args.jobs,
        ..SolverConfig64::default()
    };
    println!(
        "{:<28} {:>6} {:>6} {:>3} {:>5} {:>3} {:>4} {:>10} {:>9} {:>6} {:>9}",
        "family", "n", "m", "k", "T", "eig", "dir", "lambda", "accuracy", "iters", "time(s)"
    );
    let mut records = Vec::new();
    for case in bench::suite(args.quick)? {
        let clock = Instant::now();
        let report = multi_start(
            &case.graph,
            case.selector,
            case.kind,
            case.direction,
            &cfg,
            args.starts,
            case.reference,
        )?;
        let seconds = clock.elapsed().as_secs_f64();
        let rec = record_for(
            case.family,
            &case.graph,
            (case.selector, case.kind, case.direction),
            &report,
            seconds,
            args.seed,
        );
        println!(
            "{:<28} {:>6} {:>6} {:>3} {:>5} {:>3} {:>4} {:>10.4} {:>8.0}% {:>6} {:>9.3}",
            rec.family,
            rec.n,
            rec.m,
            rec.k,
            rec.selector,
            rec.eig,
            rec.direction,
            report.best_lambda,
            100.0 * rec.accuracy.unwrap_or(f64::NAN),
            rec.median_iters,
            seconds
        );
        records.push(rec);
    }
    if let Some(path) = &args.csv {
        append_csv(path, &records).map_err(|e| io_failure(path, e))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match &cli.command {
        Command::Gen(a) => cmd_gen(a),
        Command::Solve(a) => cmd_solve(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Bench(a) => cmd_bench(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
