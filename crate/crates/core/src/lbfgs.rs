//! Limited-memory BFGS search directions.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::error::{Error, Result};
use crate::scalar::{dot, Scalar};

/// Scaling `gamma` of the initial matrix `gamma * I` in the two-loop recursion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GammaPolicy {
    /// `y's / y'y`
    Bb1,
    /// `s's / y's`
    Bb2,
    /// `||s|| / ||y||`, the geometric mean of the two BB steps.
    Dai,
    /// One of the three above, chosen uniformly at random every iteration.
    RandomMix,
}

impl fmt::Display for GammaPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GammaPolicy::Bb1 => "bb1",
            GammaPolicy::Bb2 => "bb2",
            GammaPolicy::Dai => "dai",
            GammaPolicy::RandomMix => "mix",
        })
    }
}

impl FromStr for GammaPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "bb1" => Ok(GammaPolicy::Bb1),
            "bb2" => Ok(GammaPolicy::Bb2),
            "dai" => Ok(GammaPolicy::Dai),
            "mix" | "random" => Ok(GammaPolicy::RandomMix),
            other => Err(Error::InvalidParameter(format!("unknown gamma policy {other:?}"))),
        }
    }
}

/// One stored correction pair.
#[derive(Debug, Clone)]
pub struct CorrectionPair<T> {
    pub s: Vec<T>,
    pub y: Vec<T>,
    /// `1 / y's`, or zero when the curvature `y's` fell below the floor.
    pub rho: T,
}

#[derive(Debug, Clone, Copy)]
struct LastCurvature<T> {
    ys: T,
    ss: T,
    yy: T,
}

/// Ring buffer of the most recent `capacity` correction pairs.
///
/// Pairs whose curvature `y's` is below `kappa` are stored with `rho = 0`:
/// they take a slot but the recursion skips them.
#[derive(Debug, Clone)]
pub struct LbfgsHistory<T> {
    n: usize,
    capacity: usize,
    kappa: T,
    policy: GammaPolicy,
    pairs: VecDeque<CorrectionPair<T>>,
    last: Option<LastCurvature<T>>,
}

impl<T: Scalar> LbfgsHistory<T> {
    pub fn new(n: usize, capacity: usize, kappa: T, policy: GammaPolicy) -> Self {
        Self {
            n,
            capacity,
            kappa,
            policy,
            pairs: VecDeque::with_capacity(capacity),
            last: None,
        }
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    /// Stored pairs, oldest first.
    pub fn pairs(&self) -> impl Iterator<Item = &CorrectionPair<T>> {
        self.pairs.iter()
    }

    pub fn clear(&mut self) {
        self.pairs.clear();
        self.last = None;
    }

    /// Records `s = x_{c+1} - x_c` and `y = g_{c+1} - g_c`, evicting the oldest
    /// pair once the buffer is full.
    pub fn push_pair(&mut self, s: Vec<T>, y: Vec<T>) -> Result<()> {
        for v in [&s, &y] {
            if v.len() != self.n {
                return Err(Error::DimensionMismatch {
                    expected: self.n,
                    found: v.len(),
                });
            }
        }
        let ys = dot(&y, &s);
        let rho = if ys >= self.kappa { T::one() / ys } else { T::zero() };
        self.last = Some(LastCurvature {
            ys,
            ss: dot(&s, &s),
            yy: dot(&y, &y),
        });
        if self.capacity == 0 {
            return Ok(());
        }
        if self.pairs.len() == self.capacity {
            self.pairs.pop_front();
        }
        self.pairs.push_back(CorrectionPair { s, y, rho });
        Ok(())
    }

    /// The three candidate scalings from the most recent pair, or `None` when
    /// there is no pair or its curvature is below the floor.
    pub fn gamma_candidates(&self) -> Option<[T; 3]> {
        let c = self.last?;
        if c.ys < self.kappa {
            return None;
        }
        Some([c.ys / c.yy, c.ss / c.ys, c.ss.sqrt() / c.yy.sqrt()])
    }

    /// Scaling for the next direction; `1` without usable curvature.
    pub fn gamma<R: Rng + ?Sized>(&self, rng: &mut R) -> T {
        let Some([bb1, bb2, dai]) = self.gamma_candidates() else {
            return T::one();
        };
        match self.policy {
            GammaPolicy::Bb1 => bb1,
            GammaPolicy::Bb2 => bb2,
            GammaPolicy::Dai => dai,
            GammaPolicy::RandomMix => [bb1, bb2, dai][rng.random_range(0..3)],
        }
    }

    /// `p = -H g` by the two-loop recursion with `H^(0) = gamma * I`.
    pub fn two_loop(&self, g: &[T], gamma: T) -> Result<Vec<T>> {
        if g.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: g.len(),
            });
        }
        let mut q: Vec<T> = g.iter().map(|&v| -v).collect();
        let mut alphas = vec![T::zero(); self.pairs.len()];
        for (pair, a) in self.pairs.iter().zip(alphas.iter_mut()).rev() {
            if pair.rho.is_zero() {
                continue;
            }
            *a = pair.rho * dot(&pair.s, &q);
            for (qi, &yi) in q.iter_mut().zip(&pair.y) {
                *qi -= *a * yi;
            }
        }
        for qi in q.iter_mut() {
            *qi *= gamma;
        }
        for (pair, &a) in self.pairs.iter().zip(&alphas) {
            if pair.rho.is_zero() {
                continue;
            }
            let beta = pair.rho * dot(&pair.y, &q);
            for (qi, &si) in q.iter_mut().zip(&pair.s) {
                *qi += si * (a - beta);
            }
        }
        Ok(q)
    }
}
