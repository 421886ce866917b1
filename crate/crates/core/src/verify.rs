//! Cross-checks of every kernel against its brute-force oracle.
//!
//! Each check reports the worst error it saw and the tolerance it was held to.
//! The product kernel under test is injectable so that a deliberately broken
//! kernel can be shown to fail the suite.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::cayley::{retract, step_displacement};
use crate::error::Result;
use crate::generators;
use crate::hypergraph::{Hypergraph, SimpleGraph};
use crate::lbfgs::{GammaPolicy, LbfgsHistory};
use crate::merit::{evaluate, rayleigh_ratio, tangency, Direction};
use crate::oracle::{
    dense_apply, dense_cayley, dense_lbfgs_matrix, dense_matrix, dense_oracle, finite_difference_gradient,
    symmetric_eigenvalues, DENSE_ENTRY_CAP,
};
use crate::scalar::{dot, norm2};
use crate::solver::{multi_start, sample_unit, SolveStatus, SolverConfig};
use crate::tensor::{tensor_apply, EigKind, ProductResult, TensorSelector};

pub const PRODUCT_TOL: f64 = 1e-12;
pub const GRADIENT_TOL: f64 = 1e-6;
pub const TANGENCY_TOL: f64 = 1e-10;
pub const TWO_LOOP_TOL: f64 = 1e-12;
pub const CAYLEY_TOL: f64 = 1e-12;
pub const SPHERE_TOL: f64 = 1e-12;
pub const RESIDUAL_TOL: f64 = 1e-5;
pub const MATRIX_EIGEN_TOL: f64 = 1e-8;

/// Product kernel under test.
pub type ProductKernel<'a> = dyn Fn(&Hypergraph, TensorSelector, &[f64]) -> Result<ProductResult<f64>> + 'a;

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    /// Largest dimension for the dense-tensor checks.
    pub max_n: usize,
    /// Random vectors per instance.
    pub samples: usize,
    pub seed: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            max_n: 13,
            samples: 20,
            seed: 2024,
        }
    }
}

#[derive(Debug, Clone)]
pub struct CheckOutcome {
    pub name: String,
    pub tolerance: f64,
    pub worst: f64,
    pub cases: usize,
    pub passed: bool,
}

impl CheckOutcome {
    fn new(name: impl Into<String>, tolerance: f64, worst: f64, cases: usize) -> Self {
        Self {
            name: name.into(),
            tolerance,
            worst,
            cases,
            passed: cases > 0 && worst <= tolerance,
        }
    }
}

/// Instances small enough for a dense tensor.
pub fn small_instances(max_n: usize) -> Vec<(String, Hypergraph)> {
    let tri = SimpleGraph::new(3, &[(0, 1), (1, 2), (0, 2)]).expect("triangle");
    let candidates: Vec<(String, Result<Hypergraph>)> = vec![
        ("sunflower(4,1)".into(), generators::sunflower(4, 1)),
        ("sunflower(4,3)".into(), generators::sunflower(4, 3)),
        ("sunflower(6,2)".into(), generators::sunflower(6, 2)),
        ("squid(4)".into(), generators::squid(4)),
        ("grid(0)".into(), generators::grid(0)),
        ("grid(1)".into(), generators::grid(1)),
        ("blowup(triangle,2)".into(), generators::blowup(&tri, 2)),
        ("blowup(triangle,3)".into(), generators::blowup(&tri, 3)),
        ("petersen-2graph".into(), generators::from_simple_graph(&generators::petersen())),
    ];
    candidates
        .into_iter()
        .filter_map(|(name, h)| h.ok().map(|h| (name, h)))
        .filter(|(_, h)| {
            h.n() <= max_n
                && (h.n() as u128)
                    .checked_pow(h.k() as u32)
                    .is_some_and(|e| e <= DENSE_ENTRY_CAP)
        })
        .collect()
}

/// Instances for gradient checks (`n <= 31`).
pub fn gradient_instances() -> Vec<(String, Hypergraph)> {
    let mut out = vec![
        ("sunflower(4,10)".to_string(), generators::sunflower(4, 10).expect("sunflower")),
        ("squid(4)".to_string(), generators::squid(4).expect("squid")),
        ("grid(2)".to_string(), generators::grid(2).expect("grid")),
        (
            "blowup(petersen,2)".to_string(),
            generators::blowup(&generators::petersen(), 2).expect("blowup"),
        ),
        ("squid(6)".to_string(), generators::squid(6).expect("squid")),
    ];
    out.retain(|(_, h)| h.n() <= 31);
    out
}

fn normal_vec(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.sample(StandardNormal)).collect()
}

fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / (1.0 + b.abs())
}

fn selector_check_name(sel: TensorSelector) -> &'static str {
    match sel {
        TensorSelector::Adjacency => "adjacency-vs-dense",
        TensorSelector::Laplacian => "laplacian-vs-dense",
        TensorSelector::SignlessLaplacian => "signless-laplacian-vs-dense",
    }
}

/// Sparse products against the dense tensor, plus the `T x^k = x'(T x^{k-1})` identity.
pub fn check_products(opts: &VerifyOptions, kernel: &ProductKernel<'_>) -> Result<Vec<CheckOutcome>> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let instances = small_instances(opts.max_n);
    let mut out = Vec::new();
    let mut identity_worst = 0.0f64;
    let mut identity_cases = 0;
    for sel in TensorSelector::ALL {
        let mut worst = 0.0f64;
        let mut cases = 0;
        for (_, h) in &instances {
            let dense = dense_oracle::<f64>(h, sel)?;
            for _ in 0..opts.samples {
                let x = normal_vec(&mut rng, h.n());
                let sparse = kernel(h, sel, &x)?;
                let reference = dense_apply(&dense, &x)?;
                for (a, b) in sparse.vec.iter().zip(&reference.vec) {
                    worst = worst.max(rel_err(*a, *b));
                }
                worst = worst.max(rel_err(sparse.scalar, reference.scalar));
                identity_worst = identity_worst.max(rel_err(dot(&x, &sparse.vec), sparse.scalar));
                cases += 1;
                identity_cases += 1;
            }
        }
        out.push(CheckOutcome::new(selector_check_name(sel), PRODUCT_TOL, worst, cases));
    }
    out.push(CheckOutcome::new(
        "scalar-identity",
        PRODUCT_TOL,
        identity_worst,
        identity_cases,
    ));
    Ok(out)
}

/// Merit gradient against central differences of the unnormalised ratio, and
/// tangency `x'g = 0`.
pub fn check_gradient(opts: &VerifyOptions) -> Result<Vec<CheckOutcome>> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0x9e37);
    let mut worst = 0.0f64;
    let mut tangent_worst = 0.0f64;
    let mut cases = 0;
    for (_, h) in gradient_instances() {
        for sel in TensorSelector::ALL {
            for kind in [EigKind::H, EigKind::Z] {
                for dir in [Direction::Min, Direction::Max] {
                    let x: Vec<f64> = sample_unit(&mut rng, h.n());
                    let p = evaluate(&h, sel, kind, dir, &x)?;
                    let sign = dir.sign::<f64>();
                    let fd = finite_difference_gradient(
                        |z| sign * rayleigh_ratio(&h, sel, kind, z).expect("dimension matches"),
                        &p.x,
                        1e-6,
                    );
                    // project onto the tangent space at x
                    let radial = dot(&fd, &p.x);
                    for ((&gi, &fi), &xi) in p.g.iter().zip(&fd).zip(&p.x) {
                        worst = worst.max((gi - (fi - radial * xi)).abs());
                    }
                    tangent_worst = tangent_worst.max(tangency(&p).abs());
                    cases += 1;
                }
            }
        }
    }
    Ok(vec![
        CheckOutcome::new("gradient-vs-finite-differences", GRADIENT_TOL, worst, cases),
        CheckOutcome::new("gradient-tangency", TANGENCY_TOL, tangent_worst, cases),
    ])
}

/// Two-loop recursion against the explicitly assembled L-BFGS matrix.
pub fn check_two_loop(opts: &VerifyOptions) -> Result<Vec<CheckOutcome>> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0x51ed);
    let mut worst = 0.0f64;
    let mut cases = 0;
    for n in 1..=10 {
        for memory in 0..=3 {
            for extra in 0..3 {
                let kappa = 1e-3;
                let policy = [GammaPolicy::Bb1, GammaPolicy::Bb2, GammaPolicy::Dai][extra];
                let mut hist = LbfgsHistory::new(n, memory, kappa, policy);
                for j in 0..memory + extra {
                    let s = normal_vec(&mut rng, n);
                    // every third pair has negative curvature and must be skipped
                    let y: Vec<f64> = if j % 3 == 2 {
                        s.iter().map(|v| -v).collect()
                    } else {
                        s.iter().map(|v| v * (1.0 + rng.random::<f64>()) + 0.1 * rng.sample::<f64, _>(StandardNormal)).collect()
                    };
                    hist.push_pair(s, y)?;
                }
                let g = normal_vec(&mut rng, n);
                let gamma = hist.gamma(&mut rng);
                let p = hist.two_loop(&g, gamma)?;
                let pairs: Vec<(Vec<f64>, Vec<f64>, f64)> =
                    hist.pairs().map(|c| (c.s.clone(), c.y.clone(), c.rho)).collect();
                let hm = dense_lbfgs_matrix(n, gamma, &pairs);
                let scale = 1.0 + hm.amax() * norm2(&g);
                for i in 0..n {
                    let expected: f64 = -(0..n).map(|j| hm[(i, j)] * g[j]).sum::<f64>();
                    worst = worst.max((p[i] - expected).abs() / scale);
                }
                cases += 1;
            }
        }
    }
    Ok(vec![CheckOutcome::new("two-loop-vs-dense-bfgs", TWO_LOOP_TOL, worst, cases)])
}

/// Closed-form Cayley step against the explicit orthogonal matrix, the
/// displacement formula, and norm preservation over a long chain of steps.
pub fn check_cayley(opts: &VerifyOptions) -> Result<Vec<CheckOutcome>> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0xca7e);
    let mut worst = 0.0f64;
    let mut disp_worst = 0.0f64;
    let mut cases = 0;
    for n in [2, 3, 5, 10, 25, 50] {
        for _ in 0..opts.samples {
            let x: Vec<f64> = sample_unit(&mut rng, n);
            let p = normal_vec(&mut rng, n);
            let alpha = 2.0 * rng.random::<f64>();
            let closed = retract(&x, &p, alpha);
            let explicit = dense_cayley(&x, &p, alpha);
            for (a, b) in closed.iter().zip(&explicit) {
                worst = worst.max((a - b).abs());
            }
            let direct: f64 = closed.iter().zip(&x).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
            disp_worst = disp_worst.max((step_displacement(&x, &p, alpha) - direct).abs());
            cases += 1;
        }
    }
    let mut x: Vec<f64> = sample_unit(&mut rng, 20);
    let mut norm_worst = 0.0f64;
    for _ in 0..10_000 {
        let p = normal_vec(&mut rng, 20);
        x = retract(&x, &p, rng.random::<f64>());
        norm_worst = norm_worst.max((norm2(&x) - 1.0).abs());
    }
    Ok(vec![
        CheckOutcome::new("cayley-vs-dense", CAYLEY_TOL, worst, cases),
        CheckOutcome::new("step-displacement", CAYLEY_TOL, disp_worst, cases),
        CheckOutcome::new("sphere-norm-10k-retractions", SPHERE_TOL, norm_worst, 10_000),
    ])
}

/// End-to-end runs: monotone merit trace, descent directions and the
/// eigenpair residual certificate at gradient-converged exits.
pub fn check_solver_runs(opts: &VerifyOptions) -> Result<Vec<CheckOutcome>> {
    let mut monotone_violations = 0usize;
    let mut fallbacks = 0usize;
    let mut residual_worst = 0.0f64;
    let mut runs = 0;
    let cfg = SolverConfig::<f64> {
        seed: opts.seed,
        ..SolverConfig::default()
    };
    for (_, h) in gradient_instances().into_iter().take(3) {
        for sel in TensorSelector::ALL {
            for kind in [EigKind::H, EigKind::Z] {
                let report = multi_start(&h, sel, kind, Direction::Min, &cfg, 3, None)?;
                for r in &report.runs {
                    monotone_violations += r.f_trace.windows(2).filter(|w| !(w[1] < w[0])).count();
                    fallbacks += r.descent_fallbacks;
                    if r.status == SolveStatus::GradConverged {
                        residual_worst = residual_worst.max(r.residual_inf / (1.0 + r.lambda.abs()));
                    }
                    runs += 1;
                }
            }
        }
    }
    Ok(vec![
        CheckOutcome::new("strictly-decreasing-trace", 0.0, monotone_violations as f64, runs),
        CheckOutcome::new("descent-directions", 0.0, fallbacks as f64, runs),
        CheckOutcome::new("residual-certificate", RESIDUAL_TOL, residual_worst, runs),
    ])
}

/// On the Petersen graph as a 2-uniform hypergraph, the extreme H-eigenvalues
/// of `A`, `L` and `Q` are extreme matrix eigenvalues.
pub fn check_matrix_reduction(opts: &VerifyOptions) -> Result<Vec<CheckOutcome>> {
    let h = generators::from_simple_graph(&generators::petersen())?;
    let cfg = SolverConfig::<f64> {
        seed: opts.seed,
        ..SolverConfig::default()
    };
    let mut worst = 0.0f64;
    let mut cases = 0;
    for sel in TensorSelector::ALL {
        let m = dense_matrix(&dense_oracle::<f64>(&h, sel)?).expect("order two");
        let ev = symmetric_eigenvalues(&m);
        for (dir, exact) in [(Direction::Min, ev[0]), (Direction::Max, ev[ev.len() - 1])] {
            let report = multi_start(&h, sel, EigKind::H, dir, &cfg, 10, None)?;
            worst = worst.max((report.best_lambda - exact).abs());
            cases += 1;
        }
    }
    Ok(vec![CheckOutcome::new(
        "k2-petersen-vs-matrix-eigensolver",
        MATRIX_EIGEN_TOL,
        worst,
        cases,
    )])
}

/// Runs the whole suite against `kernel`.
pub fn run_with_kernel(opts: &VerifyOptions, kernel: &ProductKernel<'_>) -> Result<Vec<CheckOutcome>> {
    let mut out = check_products(opts, kernel)?;
    out.extend(check_gradient(opts)?);
    out.extend(check_two_loop(opts)?);
    out.extend(check_cayley(opts)?);
    out.extend(check_solver_runs(opts)?);
    out.extend(check_matrix_reduction(opts)?);
    Ok(out)
}

/// Runs the whole suite against the production kernels.
pub fn run(opts: &VerifyOptions) -> Result<Vec<CheckOutcome>> {
    run_with_kernel(opts, &|h, sel, x| tensor_apply(h, sel, x))
}

pub fn first_failure(outcomes: &[CheckOutcome]) -> Option<&CheckOutcome> {
    outcomes.iter().find(|c| !c.passed)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_instance_filter() {
        assert!(small_instances(13).iter().all(|(_, h)| h.n() <= 13));
        assert!(small_instances(3).is_empty());
        assert_eq!(small_instances(13).len(), 9);
    }

    #[test]
    fn product_checks_pass() {
        let opts = VerifyOptions {
            samples: 5,
            ..VerifyOptions::default()
        };
        let out = check_products(&opts, &|h, sel, x| tensor_apply(h, sel, x)).unwrap();
        assert!(first_failure(&out).is_none(), "{out:?}");
    }

    #[test]
    fn sign_flip_in_laplacian_is_caught() {
        let opts = VerifyOptions {
            samples: 3,
            ..VerifyOptions::default()
        };
        let broken = |h: &Hypergraph, sel: TensorSelector, x: &[f64]| {
            let sel = if sel == TensorSelector::Laplacian {
                TensorSelector::SignlessLaplacian
            } else {
                sel
            };
            tensor_apply(h, sel, x)
        };
        let out = check_products(&opts, &broken).unwrap();
        assert_eq!(first_failure(&out).unwrap().name, "laplacian-vs-dense");
    }
}
