use std::cell::Cell;

use cest_core::solver::run_cest;
use cest_core::{
    backtrack, generators, multi_start, sample_unit, shifted_power_method, solve, Direction, EigKind, Error,
    Hypergraph, LineSearchParams, MeritPoint, Objective, SolveStatus, SolverConfig, SolverConfig32, SolverConfig64,
    TensorSelector,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn small_families() -> Vec<(&'static str, Hypergraph)> {
    vec![
        ("squid(4)", generators::squid(4).unwrap()),
        ("sunflower(4,10)", generators::sunflower(4, 10).unwrap()),
        ("sunflower(6,3)", generators::sunflower(6, 3).unwrap()),
        ("grid(1)", generators::grid(1).unwrap()),
        ("grid(2)", generators::grid(2).unwrap()),
        ("blowup(petersen,2)", generators::blowup(&generators::petersen(), 2).unwrap()),
        ("icosahedron(0)", generators::icosahedron(0).unwrap()),
    ]
}

fn best_power(h: &Hypergraph, sel: TensorSelector, kind: EigKind, dir: Direction, starts: u64) -> f64 {
    let cfg = SolverConfig64 {
        max_iter: 100_000,
        ..SolverConfig64::default()
    };
    let mut best: Option<f64> = None;
    for seed in 0..starts {
        let x0: Vec<f64> = sample_unit(&mut ChaCha8Rng::seed_from_u64(seed), h.n());
        let r = shifted_power_method(h, sel, kind, dir, &x0, &cfg).unwrap();
        best = Some(match best {
            Some(b) if !dir.better(r.lambda, b) => b,
            _ => r.lambda,
        });
    }
    best.unwrap()
}

#[test]
fn power_method_baseline_reproduces_known_values() {
    let squid = generators::squid(4).unwrap();
    let l = best_power(&squid, TensorSelector::Adjacency, EigKind::H, Direction::Min, 20);
    assert!((l + 1.3320).abs() < 5e-5, "{l}");
    let grid = generators::grid(2).unwrap();
    let l = best_power(&grid, TensorSelector::Laplacian, EigKind::H, Direction::Max, 20);
    assert!((l - 6.5754).abs() < 5e-5, "{l}");
}

#[test]
fn power_method_agrees_with_cest_on_small_families() {
    let cfg = SolverConfig64::default();
    for (name, h) in small_families().into_iter().filter(|(_, h)| h.n() <= 31) {
        for sel in TensorSelector::ALL {
            let dir = if sel == TensorSelector::Adjacency {
                Direction::Min
            } else {
                Direction::Max
            };
            let cest = multi_start(&h, sel, EigKind::H, dir, &cfg, 30, None).unwrap().best_lambda;
            let power = best_power(&h, sel, EigKind::H, dir, 30);
            assert!((cest - power).abs() <= 1e-6, "{name} {sel}: cest {cest} power {power}");
        }
    }
}

#[test]
fn odd_bipartite_laplacian_and_signless_share_maximum() {
    let cfg = SolverConfig64::default();
    // the Petersen graph has odd cycles, so its blow-up is not odd-bipartite
    for (name, h) in small_families().into_iter().filter(|(name, _)| !name.starts_with("blowup")) {
        for kind in [EigKind::H, EigKind::Z] {
            let l = multi_start(&h, TensorSelector::Laplacian, kind, Direction::Max, &cfg, 30, None)
                .unwrap()
                .best_lambda;
            let q = multi_start(&h, TensorSelector::SignlessLaplacian, kind, Direction::Max, &cfg, 30, None)
                .unwrap()
                .best_lambda;
            assert!((l - q).abs() <= 1e-6, "{name} {kind}: L {l} Q {q}");
        }
    }
}

#[test]
fn sequential_runs_are_bitwise_reproducible() {
    let h = generators::grid(2).unwrap();
    let cfg = SolverConfig64 {
        seed: 99,
        ..SolverConfig64::default()
    };
    let a = solve(&h, TensorSelector::Laplacian, EigKind::H, Direction::Max, &cfg, None).unwrap();
    let b = solve(&h, TensorSelector::Laplacian, EigKind::H, Direction::Max, &cfg, None).unwrap();
    assert_eq!(a.f_trace, b.f_trace);
    assert_eq!(a.x, b.x);
    assert_eq!(a.lambda.to_bits(), b.lambda.to_bits());
}

#[test]
fn parallel_multi_start_matches_sequential() {
    let h = generators::squid(4).unwrap();
    let seq = SolverConfig64::default();
    let par = SolverConfig64 {
        jobs: 4,
        ..SolverConfig64::default()
    };
    let a = multi_start(&h, TensorSelector::Adjacency, EigKind::H, Direction::Min, &seq, 16, None).unwrap();
    let b = multi_start(&h, TensorSelector::Adjacency, EigKind::H, Direction::Min, &par, 16, None).unwrap();
    for (x, y) in a.runs.iter().zip(&b.runs) {
        assert_eq!(x.f_trace, y.f_trace);
    }
    assert_eq!(a.best_index, b.best_index);
}

#[test]
fn single_precision_solver_runs() {
    let h = generators::squid(4).unwrap();
    let cfg = SolverConfig32 {
        grad_tol: 1e-3,
        ..SolverConfig32::default()
    };
    let r = multi_start(&h, TensorSelector::Adjacency, EigKind::H, Direction::Min, &cfg, 10, None).unwrap();
    assert!((r.best_lambda + 1.3320).abs() < 1e-3, "{}", r.best_lambda);
}

/// Any step away from the start increases the merit value.
struct Wall {
    calls: Cell<usize>,
}

impl Objective<f64> for Wall {
    fn evaluate(&self, x: &[f64]) -> cest_core::Result<MeritPoint<f64>> {
        self.calls.set(self.calls.get() + 1);
        let f = if self.calls.get() == 1 { 0.0 } else { 1.0 };
        let mut g = vec![0.0; x.len()];
        g[1] = -1.0;
        Ok(MeritPoint {
            x: x.to_vec(),
            f,
            g,
            t_scalar: f,
            b_scalar: 1.0,
            t_vec: vec![0.0; x.len()],
            b_vec: vec![0.0; x.len()],
            sign: 1.0,
        })
    }
}

#[test]
fn line_search_gives_up_after_sixty_halvings() {
    let wall = Wall { calls: Cell::new(0) };
    let start = wall.evaluate(&[1.0, 0.0]).unwrap();
    let err = backtrack(&wall, &start, &[0.0, 1.0], &LineSearchParams::default()).unwrap_err();
    assert_eq!(err, Error::LineSearchFailed(60));
    assert_eq!(wall.calls.get(), 1 + 61);
}

#[test]
fn failed_line_search_ends_the_run_without_error() {
    let wall = Wall { calls: Cell::new(0) };
    let cfg = SolverConfig::<f64>::default();
    let r = run_cest(&wall, 2, &cfg, vec![1.0, 0.0], &mut ChaCha8Rng::seed_from_u64(0)).unwrap();
    assert_eq!(r.status, SolveStatus::Stalled);
    assert_eq!(r.iters, 0);
    assert_eq!(r.x, vec![1.0, 0.0]);
}

#[test]
fn invalid_inputs_are_rejected() {
    let odd = Hypergraph::new(3, 3, &[[0, 1, 2]], false).unwrap();
    let cfg = SolverConfig64::default();
    assert_eq!(
        solve(&odd, TensorSelector::Adjacency, EigKind::H, Direction::Min, &cfg, None).unwrap_err(),
        Error::OddOrder(3)
    );
    let isolated = Hypergraph::new(4, 5, &[[0, 1, 2, 3]], true).unwrap();
    assert_eq!(
        solve(&isolated, TensorSelector::Adjacency, EigKind::H, Direction::Min, &cfg, None).unwrap_err(),
        Error::IsolatedVertexInHMode(4)
    );
    assert!(solve(&isolated, TensorSelector::Adjacency, EigKind::Z, Direction::Min, &cfg, None).is_ok());
    let bad = SolverConfig64 {
        memory: 5,
        line_search: LineSearchParams {
            eta: 1.5,
            ..LineSearchParams::default()
        },
        ..SolverConfig64::default()
    };
    assert!(solve(&isolated, TensorSelector::Adjacency, EigKind::Z, Direction::Min, &bad, None).is_err());
}
