//! The CEST iteration: L-BFGS directions, Cayley retraction and backtracking
//! on the unit sphere, plus multi-start global search.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::cayley::{backtrack, retract, LineSearchParams};
use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;
use crate::lbfgs::{GammaPolicy, LbfgsHistory};
use crate::merit::{Direction, Merit, MeritPoint, Objective};
use crate::scalar::{dot, norm2, Scalar};
use crate::tensor::{EigKind, TensorSelector};

/// Relative tolerance of the accuracy-rate metric.
pub const ACCURACY_TOL: f64 = 1e-8;

/// Problem size above which [`TolScaling::Auto`] multiplies the tolerances by `sqrt(n)`.
pub const AUTO_SCALE_THRESHOLD: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TolScaling {
    Off,
    On,
    /// On when `n > 10^4`.
    Auto,
}

impl TolScaling {
    pub fn factor<T: Scalar>(self, n: usize) -> T {
        let on = match self {
            TolScaling::Off => false,
            TolScaling::On => true,
            TolScaling::Auto => n > AUTO_SCALE_THRESHOLD,
        };
        if on {
            T::from_usize_lossy(n).sqrt()
        } else {
            T::one()
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig<T> {
    /// L-BFGS memory `L`.
    pub memory: usize,
    pub line_search: LineSearchParams<T>,
    /// Curvature floor below which a correction pair is ignored.
    pub kappa: T,
    pub grad_tol: T,
    pub step_tol: T,
    pub fval_tol: T,
    pub max_iter: usize,
    pub tol_scaling: TolScaling,
    pub gamma_policy: GammaPolicy,
    pub seed: u64,
    /// Worker threads for multi-start; results do not depend on it.
    pub jobs: usize,
}

impl<T: Scalar> Default for SolverConfig<T> {
    fn default() -> Self {
        Self {
            memory: 5,
            line_search: LineSearchParams::default(),
            kappa: T::lit(1e-10),
            grad_tol: T::lit(1e-6),
            step_tol: T::lit(1e-8),
            fval_tol: T::lit(1e-16),
            max_iter: 5000,
            tol_scaling: TolScaling::Auto,
            gamma_policy: GammaPolicy::RandomMix,
            seed: 0,
            jobs: 1,
        }
    }
}

impl<T: Scalar> SolverConfig<T> {
    pub fn validate(&self) -> Result<()> {
        self.line_search.validate()?;
        for (name, v) in [
            ("kappa", self.kappa),
            ("grad_tol", self.grad_tol),
            ("step_tol", self.step_tol),
            ("fval_tol", self.fval_tol),
        ] {
            if !(v > T::zero()) {
                return Err(Error::InvalidParameter(format!("{name} must be positive, got {v}")));
            }
        }
        if self.kappa >= T::one() {
            return Err(Error::InvalidParameter(format!("kappa = {} not in (0, 1)", self.kappa)));
        }
        Ok(())
    }

    /// `(grad_tol, step_tol, fval_tol)` after optional `sqrt(n)` scaling.
    pub fn effective_tolerances(&self, n: usize) -> (T, T, T) {
        let s = self.tol_scaling.factor::<T>(n);
        (self.grad_tol * s, self.step_tol * s, self.fval_tol * s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SolveStatus {
    /// `||g||_inf` fell below the gradient tolerance.
    GradConverged,
    /// Both the step and the relative change of `f` became negligible.
    StagnationConverged,
    IterCap,
    /// The line search could not find a decrease; usually the gradient noise floor.
    Stalled,
}

impl fmt::Display for SolveStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SolveStatus::GradConverged => "grad",
            SolveStatus::StagnationConverged => "stagnation",
            SolveStatus::IterCap => "itercap",
            SolveStatus::Stalled => "stalled",
        })
    }
}

#[derive(Debug, Clone)]
pub struct SolveResult<T> {
    pub lambda: T,
    pub x: Vec<T>,
    pub status: SolveStatus,
    pub iters: usize,
    /// Merit values `f(x_1), f(x_2), ...` (negated eigenvalue estimates when maximising).
    pub f_trace: Vec<T>,
    /// Accepted damping factors, one per iteration.
    pub alphas: Vec<T>,
    pub residual_inf: T,
    pub grad_inf: T,
    /// Iterations where the L-BFGS direction was not a descent direction and
    /// steepest descent was used instead.
    pub descent_fallbacks: usize,
    pub seed: u64,
}

impl<T: Scalar> SolveResult<T> {
    fn from_point(point: MeritPoint<T>, status: SolveStatus, trace: Trace<T>, seed: u64) -> Self {
        Self {
            lambda: point.lambda(),
            residual_inf: point.residual_inf(),
            grad_inf: point.grad_inf(),
            x: point.x,
            status,
            iters: trace.alphas.len(),
            f_trace: trace.f,
            alphas: trace.alphas,
            descent_fallbacks: trace.fallbacks,
            seed,
        }
    }

    pub fn converged(&self) -> bool {
        matches!(
            self.status,
            SolveStatus::GradConverged | SolveStatus::StagnationConverged
        )
    }
}

#[derive(Debug)]
struct Trace<T> {
    f: Vec<T>,
    alphas: Vec<T>,
    fallbacks: usize,
}

/// A point drawn uniformly from the unit sphere: normalised standard normal samples.
pub fn sample_unit<T: Scalar, R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<T> {
    loop {
        let v: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
        let nrm = v.iter().map(|a| a * a).sum::<f64>().sqrt();
        if nrm > 0.0 {
            return v.iter().map(|a| T::lit(a / nrm)).collect();
        }
    }
}

fn stagnated<T: Scalar>(old: &MeritPoint<T>, new: &MeritPoint<T>, step_tol: T, fval_tol: T) -> bool {
    let dx = old
        .x
        .iter()
        .zip(&new.x)
        .fold(T::zero(), |acc, (&a, &b)| acc.max((a - b).abs()));
    let df = (new.f - old.f).abs() / (T::one() + old.f.abs());
    dx < step_tol && df < fval_tol
}

fn check_problem(h: &Hypergraph, kind: EigKind) -> Result<()> {
    if !h.k().is_multiple_of(2) {
        return Err(Error::OddOrder(h.k()));
    }
    if kind == EigKind::H {
        if let Some(&v) = h.isolated_vertices().first() {
            return Err(Error::IsolatedVertexInHMode(v));
        }
    }
    Ok(())
}

/// One CEST run from `x0`, or from a random unit vector drawn with `config.seed`.
pub fn solve<T: Scalar>(
    h: &Hypergraph,
    sel: TensorSelector,
    kind: EigKind,
    dir: Direction,
    config: &SolverConfig<T>,
    x0: Option<&[T]>,
) -> Result<SolveResult<T>> {
    config.validate()?;
    check_problem(h, kind)?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let x0 = match x0 {
        Some(x) => x.to_vec(),
        None => sample_unit(&mut rng, h.n()),
    };
    let merit = Merit::new(h, sel, kind, dir);
    run_cest(&merit, h.n(), config, x0, &mut rng)
}

/// The CEST loop on an arbitrary sphere objective.
pub fn run_cest<T, O, R>(objective: &O, n: usize, config: &SolverConfig<T>, x0: Vec<T>, rng: &mut R) -> Result<SolveResult<T>>
where
    T: Scalar,
    O: Objective<T> + ?Sized,
    R: Rng + ?Sized,
{
    let (grad_tol, step_tol, fval_tol) = config.effective_tolerances(n);
    let mut history = LbfgsHistory::new(n, config.memory, config.kappa, config.gamma_policy);
    let mut point = objective.evaluate(&x0)?;
    let mut trace = Trace {
        f: vec![point.f],
        alphas: Vec::new(),
        fallbacks: 0,
    };

    for _ in 0..config.max_iter {
        if point.grad_inf() < grad_tol {
            return Ok(SolveResult::from_point(point, SolveStatus::GradConverged, trace, config.seed));
        }
        let gamma = history.gamma(rng);
        let mut p = history.two_loop(&point.g, gamma)?;
        if !(dot(&p, &point.g) < T::zero()) {
            trace.fallbacks += 1;
            history.clear();
            p = point.g.iter().map(|&v| -v).collect();
        }
        let step = match backtrack(objective, &point, &p, &config.line_search) {
            Ok(step) => step,
            Err(Error::LineSearchFailed(_)) => {
                let smallest = powi_usize(config.line_search.beta, config.line_search.max_backtracks);
                let trial = objective.evaluate(&retract(&point.x, &p, smallest))?;
                let status = if stagnated(&point, &trial, step_tol, fval_tol) {
                    SolveStatus::StagnationConverged
                } else {
                    SolveStatus::Stalled
                };
                return Ok(SolveResult::from_point(point, status, trace, config.seed));
            }
            Err(e) => return Err(e),
        };
        let next = step.point;
        let s: Vec<T> = next.x.iter().zip(&point.x).map(|(&a, &b)| a - b).collect();
        let y: Vec<T> = next.g.iter().zip(&point.g).map(|(&a, &b)| a - b).collect();
        history.push_pair(s, y)?;
        trace.f.push(next.f);
        trace.alphas.push(step.alpha);
        let done = stagnated(&point, &next, step_tol, fval_tol);
        point = next;
        if done {
            return Ok(SolveResult::from_point(
                point,
                SolveStatus::StagnationConverged,
                trace,
                config.seed,
            ));
        }
    }
    let status = if point.grad_inf() < grad_tol {
        SolveStatus::GradConverged
    } else {
        SolveStatus::IterCap
    };
    Ok(SolveResult::from_point(point, status, trace, config.seed))
}

fn powi_usize<T: Scalar>(base: T, e: usize) -> T {
    (0..e).fold(T::one(), |acc, _| acc * base)
}

/// Results of `N` independent CEST runs.
#[derive(Debug, Clone)]
pub struct MultiStartReport<T> {
    pub runs: Vec<SolveResult<T>>,
    pub direction: Direction,
    pub best_lambda: T,
    pub best_index: usize,
    pub reference: Option<T>,
    /// Fraction of runs within `1e-8` relative of the reference.
    pub accuracy_rate: Option<f64>,
}

impl<T: Scalar> MultiStartReport<T> {
    pub fn from_runs(runs: Vec<SolveResult<T>>, direction: Direction, reference: Option<T>) -> Self {
        assert!(!runs.is_empty(), "at least one run");
        let mut best_index = 0;
        for (i, r) in runs.iter().enumerate() {
            if direction.better(r.lambda, runs[best_index].lambda) {
                best_index = i;
            }
        }
        let lambdas: Vec<T> = runs.iter().map(|r| r.lambda).collect();
        Self {
            best_lambda: runs[best_index].lambda,
            best_index,
            accuracy_rate: reference.map(|r| accuracy_rate(&lambdas, r)),
            reference,
            direction,
            runs,
        }
    }

    pub fn best(&self) -> &SolveResult<T> {
        &self.runs[self.best_index]
    }

    /// Median iteration count over the runs.
    pub fn median_iters(&self) -> usize {
        let mut it: Vec<usize> = self.runs.iter().map(|r| r.iters).collect();
        it.sort_unstable();
        it[it.len() / 2]
    }

    pub fn total_iters(&self) -> usize {
        self.runs.iter().map(|r| r.iters).sum()
    }
}

/// `|{i : |lambda_i - ref| / (1 + |ref|) <= 1e-8}| / N`.
pub fn accuracy_rate<T: Scalar>(lambdas: &[T], reference: T) -> f64 {
    if lambdas.is_empty() {
        return 0.0;
    }
    let tol = T::lit(ACCURACY_TOL);
    let hits = lambdas
        .iter()
        .filter(|&&l| (l - reference).abs() / (T::one() + reference.abs()) <= tol)
        .count();
    hits as f64 / lambdas.len() as f64
}

/// Runs `starts` independent solves; run `i` uses seed `config.seed + i`.
pub fn multi_start<T: Scalar>(
    h: &Hypergraph,
    sel: TensorSelector,
    kind: EigKind,
    dir: Direction,
    config: &SolverConfig<T>,
    starts: usize,
    reference: Option<T>,
) -> Result<MultiStartReport<T>> {
    if starts == 0 {
        return Err(Error::InvalidParameter("multi-start needs at least one start".into()));
    }
    config.validate()?;
    check_problem(h, kind)?;
    let run = |i: usize| {
        let cfg = SolverConfig {
            seed: config.seed.wrapping_add(i as u64),
            ..config.clone()
        };
        solve(h, sel, kind, dir, &cfg, None)
    };
    let results: Vec<Result<SolveResult<T>>> = if config.jobs <= 1 {
        (0..starts).map(run).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(config.jobs)
            .build()
            .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?;
        pool.install(|| (0..starts).into_par_iter().map(run).collect())
    };
    let runs = results.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(MultiStartReport::from_runs(runs, dir, reference))
}

/// Relative error `|a - b| / |b|`.
pub fn relative_error<T: Scalar>(a: T, b: T) -> T {
    (a - b).abs() / b.abs()
}

/// Euclidean norm of the final iterate minus one.
pub fn sphere_defect<T: Scalar>(x: &[T]) -> T {
    (norm2(x) - T::one()).abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators;

    #[test]
    fn sample_unit_is_unit_and_deterministic() {
        for seed in 0..5 {
            let a: Vec<f64> = sample_unit(&mut ChaCha8Rng::seed_from_u64(seed), 17);
            let b: Vec<f64> = sample_unit(&mut ChaCha8Rng::seed_from_u64(seed), 17);
            assert_eq!(a, b);
            assert!(sphere_defect(&a) < 1e-14);
        }
    }

    #[test]
    fn sample_unit_has_zero_mean() {
        let n = 4;
        let samples = 10_000;
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut mean = vec![0.0; n];
        for _ in 0..samples {
            let x: Vec<f64> = sample_unit(&mut rng, n);
            for (m, v) in mean.iter_mut().zip(&x) {
                *m += v / samples as f64;
            }
        }
        let bound = 5.0 / ((samples * n) as f64).sqrt();
        assert!(mean.iter().all(|m| m.abs() < bound), "{mean:?} vs {bound}");
    }

    #[test]
    fn single_edge_laplacian_minimum_is_zero() {
        let h = Hypergraph::new(4, 4, &[[0, 1, 2, 3]], false).unwrap();
        let cfg = SolverConfig::<f64>::default();
        let r = multi_start(&h, TensorSelector::Laplacian, EigKind::H, Direction::Min, &cfg, 10, Some(0.0)).unwrap();
        assert!(r.best_lambda.abs() < 1e-8, "{}", r.best_lambda);
    }

    #[test]
    fn eigenvector_start_is_immediately_converged() {
        let h = Hypergraph::new(4, 4, &[[0, 1, 2, 3]], false).unwrap();
        let cfg = SolverConfig::<f64>::default();
        let x0 = [0.5; 4];
        let r = solve(&h, TensorSelector::Adjacency, EigKind::H, Direction::Max, &cfg, Some(&x0)).unwrap();
        assert_eq!(r.status, SolveStatus::GradConverged);
        assert_eq!(r.iters, 0);
        let report = MultiStartReport::from_runs(vec![r], Direction::Max, Some(1.0));
        assert_eq!(report.accuracy_rate, Some(1.0));
    }

    #[test]
    fn accuracy_rate_formula() {
        let lambdas = [1.0, 1.0 + 1e-9, 1.0 + 3e-8, 0.5];
        // tolerance is relative to 1 + |ref| = 2
        assert_eq!(accuracy_rate(&lambdas, 1.0), 0.5);
        assert_eq!(accuracy_rate(&[1.0 + 1.9e-8], 1.0), 1.0);
    }

    #[test]
    fn odd_order_and_isolated_vertices_rejected() {
        let h3 = Hypergraph::new(3, 3, &[[0, 1, 2]], false).unwrap();
        let cfg = SolverConfig::<f64>::default();
        assert!(matches!(
            solve(&h3, TensorSelector::Adjacency, EigKind::H, Direction::Min, &cfg, None),
            Err(Error::OddOrder(3))
        ));
        let iso = Hypergraph::new(2, 3, &[[0, 1]], true).unwrap();
        assert!(matches!(
            solve(&iso, TensorSelector::Laplacian, EigKind::H, Direction::Min, &cfg, None),
            Err(Error::IsolatedVertexInHMode(2))
        ));
        assert!(solve(&iso, TensorSelector::Laplacian, EigKind::Z, Direction::Max, &cfg, None).is_ok());
    }

    #[test]
    fn tolerance_scaling() {
        let cfg = SolverConfig::<f64>::default();
        assert_eq!(cfg.effective_tolerances(100).0, 1e-6);
        let (g, s, f) = cfg.effective_tolerances(40_000);
        assert!((g - 2e-4).abs() < 1e-18 && (s - 2e-6).abs() < 1e-18 && (f - 2e-14).abs() < 1e-28);
        let off = SolverConfig {
            tol_scaling: TolScaling::Off,
            ..cfg.clone()
        };
        assert_eq!(off.effective_tolerances(40_000).0, 1e-6);
        let on = SolverConfig { tol_scaling: TolScaling::On, ..cfg };
        assert_eq!(on.effective_tolerances(4).0, 2e-6);
    }

    #[test]
    fn invalid_config_rejected() {
        let h = generators::sunflower(4, 2).unwrap();
        let cfg = SolverConfig::<f64> {
            grad_tol: 0.0,
            ..SolverConfig::default()
        };
        assert!(solve(&h, TensorSelector::Adjacency, EigKind::H, Direction::Min, &cfg, None).is_err());
        let cfg = SolverConfig::<f64> {
            kappa: 1.5,
            ..SolverConfig::default()
        };
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn deterministic_given_seed() {
        let h = generators::squid(4).unwrap();
        let cfg = SolverConfig::<f64> {
            seed: 42,
            ..SolverConfig::default()
        };
        let a = solve(&h, TensorSelector::Adjacency, EigKind::H, Direction::Min, &cfg, None).unwrap();
        let b = solve(&h, TensorSelector::Adjacency, EigKind::H, Direction::Min, &cfg, None).unwrap();
        assert_eq!(a.f_trace, b.f_trace);
        assert_eq!(a.x, b.x);
        assert_eq!(a.lambda.to_bits(), b.lambda.to_bits());
    }

    #[test]
    fn parallel_multi_start_matches_sequential() {
        let h = generators::squid(4).unwrap();
        let seq = SolverConfig::<f64> {
            seed: 5,
            ..SolverConfig::default()
        };
        let par = SolverConfig { jobs: 3, ..seq.clone() };
        let a = multi_start(&h, TensorSelector::Adjacency, EigKind::H, Direction::Min, &seq, 6, None).unwrap();
        let b = multi_start(&h, TensorSelector::Adjacency, EigKind::H, Direction::Min, &par, 6, None).unwrap();
        for (ra, rb) in a.runs.iter().zip(&b.runs) {
            assert_eq!(ra.f_trace, rb.f_trace);
        }
    }

    #[test]
    fn runs_in_single_precision() {
        let h = generators::sunflower(4, 3).unwrap();
        let cfg = SolverConfig::<f32> {
            grad_tol: 1e-4,
            step_tol: 1e-6,
            fval_tol: 1e-7,
            kappa: 1e-6,
            ..SolverConfig::default()
        };
        let r = multi_start(&h, TensorSelector::Laplacian, EigKind::Z, Direction::Max, &cfg, 5, None).unwrap();
        assert!((r.best_lambda - 3.0).abs() < 1e-3, "{}", r.best_lambda);
    }
}
