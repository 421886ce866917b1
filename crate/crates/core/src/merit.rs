//! The spherical merit function `f(x) = T x^k / B x^k` and its gradient.
//!
//! Maximisation is handled by negating both `f` and `g`, so every optimiser in
//! this crate only ever minimises.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;
use crate::scalar::{dot, norm2, norm_inf, Scalar};
use crate::tensor::{b_apply, tensor_apply, EigKind, TensorSelector};

/// Which extreme eigenvalue is sought.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    Min,
    Max,
}

impl Direction {
    /// `+1` for `Min`, `-1` for `Max`.
    pub fn sign<T: Scalar>(self) -> T {
        match self {
            Direction::Min => T::one(),
            Direction::Max => -T::one(),
        }
    }

    /// Whether `a` is a better extreme than `b` in this direction.
    pub fn better<T: Scalar>(self, a: T, b: T) -> bool {
        match self {
            Direction::Min => a < b,
            Direction::Max => a > b,
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::Min => "min",
            Direction::Max => "max",
        })
    }
}

impl FromStr for Direction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "min" => Ok(Direction::Min),
            "max" => Ok(Direction::Max),
            other => Err(Error::InvalidParameter(format!("unknown direction {other:?}"))),
        }
    }
}

/// A point on the unit sphere with everything the optimiser needs there.
#[derive(Debug, Clone)]
pub struct MeritPoint<T> {
    pub x: Vec<T>,
    /// Signed merit value (`-lambda` when maximising).
    pub f: T,
    /// Signed gradient; orthogonal to `x`.
    pub g: Vec<T>,
    pub t_scalar: T,
    pub b_scalar: T,
    pub t_vec: Vec<T>,
    pub b_vec: Vec<T>,
    pub sign: T,
}

impl<T: Scalar> MeritPoint<T> {
    /// The eigenvalue estimate `T x^k / B x^k`, never negated.
    pub fn lambda(&self) -> T {
        self.sign * self.f
    }

    pub fn grad_inf(&self) -> T {
        norm_inf(&self.g)
    }

    /// `|| T x^{k-1} - lambda B x^{k-1} ||_inf`.
    pub fn residual_inf(&self) -> T {
        let lambda = self.lambda();
        self.t_vec
            .iter()
            .zip(&self.b_vec)
            .fold(T::zero(), |acc, (&t, &b)| acc.max((t - lambda * b).abs()))
    }
}

/// Something the line search can evaluate at points of the sphere.
pub trait Objective<T> {
    fn evaluate(&self, x: &[T]) -> Result<MeritPoint<T>>;
}

/// The merit function of one (hypergraph, tensor, eigenvalue kind, direction) problem.
#[derive(Debug, Clone, Copy)]
pub struct Merit<'a> {
    pub graph: &'a Hypergraph,
    pub selector: TensorSelector,
    pub kind: EigKind,
    pub direction: Direction,
}

impl<'a> Merit<'a> {
    pub fn new(graph: &'a Hypergraph, selector: TensorSelector, kind: EigKind, direction: Direction) -> Self {
        Self {
            graph,
            selector,
            kind,
            direction,
        }
    }
}

impl<T: Scalar> Objective<T> for Merit<'_> {
    fn evaluate(&self, x: &[T]) -> Result<MeritPoint<T>> {
        evaluate(self.graph, self.selector, self.kind, self.direction, x)
    }
}

/// Evaluates `f` and `g` at `x / ||x||`.
pub fn evaluate<T: Scalar>(
    h: &Hypergraph,
    sel: TensorSelector,
    kind: EigKind,
    dir: Direction,
    x: &[T],
) -> Result<MeritPoint<T>> {
    let k = h.k();
    if !k.is_multiple_of(2) {
        return Err(Error::OddOrder(k));
    }
    if x.len() != h.n() {
        return Err(Error::DimensionMismatch {
            expected: h.n(),
            found: x.len(),
        });
    }
    let nrm = norm2(x);
    if !(nrm > T::zero()) || !nrm.is_finite() {
        return Err(Error::NonPositiveB(nrm.to_f64_lossy()));
    }
    let x: Vec<T> = x.iter().map(|&v| v / nrm).collect();
    let t = tensor_apply(h, sel, &x)?;
    let b = b_apply(kind, k, &x)?;
    if !(b.scalar > T::zero()) {
        return Err(Error::NonPositiveB(b.scalar.to_f64_lossy()));
    }
    let sign = dir.sign::<T>();
    let ratio = t.scalar / b.scalar;
    let scale = sign * T::from_usize_lossy(k) / b.scalar;
    let g = t
        .vec
        .iter()
        .zip(&b.vec)
        .map(|(&tv, &bv)| scale * (tv - ratio * bv))
        .collect();
    Ok(MeritPoint {
        x,
        f: sign * ratio,
        g,
        t_scalar: t.scalar,
        b_scalar: b.scalar,
        t_vec: t.vec,
        b_vec: b.vec,
        sign,
    })
}

/// `T x^k / B x^k` at an arbitrary nonzero `x`, without normalising.
pub fn rayleigh_ratio<T: Scalar>(h: &Hypergraph, sel: TensorSelector, kind: EigKind, x: &[T]) -> Result<T> {
    let t = tensor_apply(h, sel, x)?;
    let b = b_apply(kind, h.k(), x)?;
    Ok(t.scalar / b.scalar)
}

/// Tangency defect `x' g` of a merit point.
pub fn tangency<T: Scalar>(p: &MeritPoint<T>) -> T {
    dot(&p.x, &p.g)
}
