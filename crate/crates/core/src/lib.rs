//! Extreme H- and Z-eigenvalues of the adjacency, Laplacian and signless
//! Laplacian tensors of even-uniform hypergraphs.
//!
//! The tensors are never stored: products `T x^{k-1}` and `T x^k` are computed
//! directly from the `m x k` edge matrix. Eigenvalues are found by minimising
//! the ratio `T x^k / B x^k` on the unit sphere with L-BFGS directions, a
//! Cayley-transform retraction and a backtracking line search (the CEST
//! iteration), restarted from many random points.
//!
//! ```
//! use cest_core::{generators, multi_start, Direction, EigKind, SolverConfig, TensorSelector};
//!
//! let squid = generators::squid(4).unwrap();
//! let cfg = SolverConfig::<f64> { seed: 7, ..Default::default() };
//! let report = multi_start(&squid, TensorSelector::Adjacency, EigKind::H, Direction::Min, &cfg, 10, None).unwrap();
//! assert!((report.best_lambda + 1.3320).abs() < 1e-4);
//! ```
//!
//! Numeric code is generic over [`Scalar`] (`f32` or `f64`); the `*64`
//! aliases fix the usual double-precision choice.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cayley;
pub mod error;
pub mod generators;
pub mod hypergraph;
pub mod io;
pub mod lbfgs;
pub mod merit;
pub mod oracle;
pub mod reference;
pub mod scalar;
pub mod solver;
pub mod tensor;
pub mod verify;

pub use cayley::{backtrack, retract, step_displacement, LineSearchParams};
pub use error::{Error, Result};
pub use hypergraph::{Hypergraph, SimpleGraph};
pub use io::{format_hypergraph, parse_hypergraph, read_hypergraph, write_hypergraph};
pub use lbfgs::{GammaPolicy, LbfgsHistory};
pub use merit::{evaluate, Direction, Merit, MeritPoint, Objective};
pub use reference::{ng_qi_zhou, shifted_power_method, sunflower_lambda_star, PerronResult};
pub use scalar::Scalar;
pub use solver::{
    accuracy_rate, multi_start, sample_unit, solve, MultiStartReport, SolveResult, SolveStatus, SolverConfig,
    TolScaling,
};
pub use tensor::{adjacency_apply, b_apply, degree_apply, tensor_apply, EigKind, ProductResult, TensorSelector};

pub type SolverConfig64 = SolverConfig<f64>;
pub type SolveResult64 = SolveResult<f64>;
pub type MultiStartReport64 = MultiStartReport<f64>;
pub type MeritPoint64 = MeritPoint<f64>;
pub type ProductResult64 = ProductResult<f64>;
pub type LbfgsHistory64 = LbfgsHistory<f64>;

pub type SolverConfig32 = SolverConfig<f32>;
pub type SolveResult32 = SolveResult<f32>;
pub type MultiStartReport32 = MultiStartReport<f32>;
