//! Reference values used to check the solver: a closed form for sunflowers,
//! a Perron iteration for nonnegative tensors and a shifted power method.

use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;
use crate::merit::{evaluate, Direction, MeritPoint};
use crate::scalar::{norm2, powu, Scalar};
use crate::solver::{SolveResult, SolveStatus, SolverConfig};
use crate::tensor::{tensor_apply, EigKind, TensorSelector};

/// Largest Laplacian H-eigenvalue of the `k`-uniform sunflower with maximum
/// degree `delta`: the root of `(1 - l)^{k-1} (l - delta) + delta = 0` in
/// `(delta, delta + 1]`, found by bisection on `t = l - delta`.
pub fn sunflower_lambda_star<T: Scalar>(k: usize, delta: usize) -> Result<T> {
    if !k.is_multiple_of(2) {
        return Err(Error::OddOrder(k));
    }
    if k < 4 || delta == 0 {
        return Err(Error::InvalidParameter(format!(
            "sunflower closed form needs even k >= 4 and delta >= 1, got k = {k}, delta = {delta}"
        )));
    }
    let d = T::from_usize_lossy(delta);
    let poly = |t: T| powu(T::one() - d - t, k - 1) * t + d;
    let (mut lo, mut hi) = (T::zero(), T::one());
    let (p_lo, p_hi) = (poly(lo), poly(hi));
    if p_hi == T::zero() {
        return Ok(d + hi);
    }
    if !(p_lo > T::zero() && p_hi < T::zero()) {
        return Err(Error::BracketFailure {
            lo: delta as f64,
            hi: delta as f64 + 1.0,
        });
    }
    let rel = T::lit(1e-14);
    for _ in 0..200 {
        let mid = (lo + hi) / T::lit(2.0);
        if mid <= lo || mid >= hi {
            break;
        }
        if poly(mid) > T::zero() {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= rel * (d + lo) {
            break;
        }
    }
    Ok(d + (lo + hi) / T::lit(2.0))
}

/// Outcome of the Perron iteration.
#[derive(Debug, Clone)]
pub struct PerronResult<T> {
    pub lambda: T,
    pub lower: T,
    pub upper: T,
    /// Positive eigenvector, unit in the 2-norm.
    pub x: Vec<T>,
    pub iters: usize,
}

/// Largest H-eigenvalue of a nonnegative, weakly irreducible hypergraph tensor
/// by the Ng-Qi-Zhou iteration `x <- (T x^{k-1})^{[1/(k-1)]}` with min/max
/// ratio bounds `lower <= lambda <= upper`.
///
/// The iteration runs on `T + I`, which has the same eigenvectors and is
/// primitive, so it converges also for odd-bipartite hypergraphs where the
/// unshifted iteration oscillates.
pub fn ng_qi_zhou<T: Scalar>(h: &Hypergraph, sel: TensorSelector, tol: T, max_iter: usize) -> Result<PerronResult<T>> {
    if !sel.is_nonnegative() {
        return Err(Error::NotNonnegative("laplacian"));
    }
    if !h.is_connected() {
        return Err(Error::InvalidParameter(
            "Perron iteration needs a connected hypergraph".into(),
        ));
    }
    let k = h.k();
    let shift = T::one();
    let inv = T::one() / T::from_usize_lossy(k - 1);
    let n = h.n();
    let mut x = vec![T::one() / T::from_usize_lossy(n).sqrt(); n];
    for iter in 1..=max_iter {
        let t = tensor_apply(h, sel, &x)?;
        let mut lower = T::infinity();
        let mut upper = T::neg_infinity();
        let mut y = Vec::with_capacity(n);
        for (&tv, &xi) in t.vec.iter().zip(&x) {
            let xp = powu(xi, k - 1);
            let yi = tv + shift * xp;
            let ratio = yi / xp;
            lower = lower.min(ratio);
            upper = upper.max(ratio);
            y.push(yi);
        }
        if upper - lower < tol {
            return Ok(PerronResult {
                lambda: (lower + upper) / T::lit(2.0) - shift,
                lower: lower - shift,
                upper: upper - shift,
                x,
                iters: iter,
            });
        }
        let root: Vec<T> = y.iter().map(|&v| v.powf(inv)).collect();
        let nrm = norm2(&root);
        x = root.into_iter().map(|v| v / nrm).collect();
    }
    Err(Error::NoConvergence(max_iter))
}

/// Shifted power iteration `x <- (s x - g(x)) / ||s x - g(x)||` on the merit
/// function. The shift `s` is halved before each step and doubled until the
/// step gives sufficient decrease `f(x+) - f(x) <= eta g'(x+ - x)`.
///
/// This is a baseline for cross-checking the main solver; it shares the merit
/// evaluation but neither the direction nor the retraction.
pub fn shifted_power_method<T: Scalar>(
    h: &Hypergraph,
    sel: TensorSelector,
    kind: EigKind,
    dir: Direction,
    x0: &[T],
    config: &SolverConfig<T>,
) -> Result<SolveResult<T>> {
    if !h.k().is_multiple_of(2) {
        return Err(Error::OddOrder(h.k()));
    }
    let (grad_tol, step_tol, fval_tol) = config.effective_tolerances(h.n());
    let min_shift = T::lit(1e-8);
    let max_shift = T::lit(1e30);
    let eta = config.line_search.eta;
    let mut shift = T::one();
    let mut point = evaluate(h, sel, kind, dir, x0)?;
    let mut f_trace = vec![point.f];
    let mut iters = 0;
    let finish = |point: MeritPoint<T>, status, iters, f_trace: Vec<T>| SolveResult {
        lambda: point.lambda(),
        residual_inf: point.residual_inf(),
        grad_inf: point.grad_inf(),
        x: point.x,
        status,
        iters,
        f_trace,
        alphas: Vec::new(),
        descent_fallbacks: 0,
        seed: config.seed,
    };
    while iters < config.max_iter {
        if point.grad_inf() < grad_tol {
            return Ok(finish(point, SolveStatus::GradConverged, iters, f_trace));
        }
        shift = (shift / T::lit(2.0)).max(min_shift);
        let next = loop {
            let cand: Vec<T> = point.x.iter().zip(&point.g).map(|(&x, &g)| shift * x - g).collect();
            let trial = evaluate(h, sel, kind, dir, &cand)?;
            let slope = trial
                .x
                .iter()
                .zip(&point.x)
                .zip(&point.g)
                .fold(T::zero(), |acc, ((&a, &b), &g)| acc + g * (a - b));
            if slope < T::zero() && trial.f - point.f <= eta * slope {
                break Some(trial);
            }
            shift *= T::lit(2.0);
            if shift > max_shift {
                break None;
            }
        };
        let Some(next) = next else {
            return Ok(finish(point, SolveStatus::Stalled, iters, f_trace));
        };
        iters += 1;
        f_trace.push(next.f);
        let dx = point
            .x
            .iter()
            .zip(&next.x)
            .fold(T::zero(), |acc, (&a, &b)| acc.max((a - b).abs()));
        let df = (next.f - point.f).abs() / (T::one() + point.f.abs());
        point = next;
        if dx < step_tol && df < fval_tol {
            return Ok(finish(point, SolveStatus::StagnationConverged, iters, f_trace));
        }
    }
    if point.grad_inf() < grad_tol {
        return Ok(finish(point, SolveStatus::GradConverged, iters, f_trace));
    }
    Err(Error::NoConvergence(config.max_iter))
}
