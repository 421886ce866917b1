//! Curvilinear steps on the unit sphere via the Cayley transform, and the
//! backtracking search over the damping factor.

use crate::error::{Error, Result};
use crate::merit::{MeritPoint, Objective};
use crate::scalar::{dot, norm2, Scalar};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineSearchParams<T> {
    /// Sufficient-decrease coefficient, in `(0, 1)`.
    pub eta: T,
    /// Backtracking ratio, in `(0, 1)`.
    pub beta: T,
    pub max_backtracks: usize,
}

impl<T: Scalar> Default for LineSearchParams<T> {
    fn default() -> Self {
        Self {
            eta: T::lit(0.01),
            beta: T::lit(0.5),
            max_backtracks: 60,
        }
    }
}

impl<T: Scalar> LineSearchParams<T> {
    pub fn validate(&self) -> Result<()> {
        let open_unit = |v: T| v > T::zero() && v < T::one();
        if !open_unit(self.eta) {
            return Err(Error::InvalidParameter(format!("eta = {} not in (0, 1)", self.eta)));
        }
        if !open_unit(self.beta) {
            return Err(Error::InvalidParameter(format!("beta = {} not in (0, 1)", self.beta)));
        }
        Ok(())
    }
}

/// Returns `(alpha x'p, ||alpha p||^2)`.
#[inline]
fn step_terms<T: Scalar>(x: &[T], p: &[T], alpha: T) -> (T, T) {
    (alpha * dot(x, p), alpha * alpha * dot(p, p))
}

/// `Q x` for the Cayley transform `Q = (I - W)(I + W)^{-1}` of
/// `W = alpha (x p' - p x')`, in closed form and without forming `W` or `Q`:
///
/// `x(alpha) = ([(1 - alpha x'p)^2 - ||alpha p||^2] x + 2 alpha p) / (1 + ||alpha p||^2 - (alpha x'p)^2)`
pub fn retract<T: Scalar>(x: &[T], p: &[T], alpha: T) -> Vec<T> {
    let (a, b) = step_terms(x, p, alpha);
    let denom = T::one() + b - a * a;
    let cx = ((T::one() - a) * (T::one() - a) - b) / denom;
    let cp = (alpha + alpha) / denom;
    let mut out: Vec<T> = x.iter().zip(p).map(|(&xi, &pi)| cx * xi + cp * pi).collect();
    let nrm = norm2(&out);
    if (nrm - T::one()).abs() > T::lit(1e-14) {
        for v in out.iter_mut() {
            *v /= nrm;
        }
    }
    out
}

/// `|| retract(x, p, alpha) - x ||` in closed form.
pub fn step_displacement<T: Scalar>(x: &[T], p: &[T], alpha: T) -> T {
    let (a, b) = step_terms(x, p, alpha);
    let num = (b - a * a).max(T::zero());
    (T::lit(2.0)) * (num / (T::one() + num)).sqrt()
}

/// An accepted line-search step.
#[derive(Debug, Clone)]
pub struct Step<T> {
    pub alpha: T,
    pub backtracks: usize,
    pub point: MeritPoint<T>,
}

/// Finds the largest `alpha = beta^l`, `l = 0, 1, ...`, with
/// `f(x(alpha)) <= f(x) + eta * alpha * p'g`.
///
/// `p` must be a descent direction at `current`.
pub fn backtrack<T, O>(objective: &O, current: &MeritPoint<T>, p: &[T], params: &LineSearchParams<T>) -> Result<Step<T>>
where
    T: Scalar,
    O: Objective<T> + ?Sized,
{
    let slope = dot(p, &current.g);
    if !(slope < T::zero()) {
        return Err(Error::InvalidParameter(format!(
            "line search needs a descent direction, p'g = {slope}"
        )));
    }
    let mut alpha = T::one();
    for backtracks in 0..=params.max_backtracks {
        let trial = objective.evaluate(&retract(&current.x, p, alpha))?;
        if trial.f.is_finite() && trial.f - current.f <= params.eta * alpha * slope {
            return Ok(Step {
                alpha,
                backtracks,
                point: trial,
            });
        }
        alpha *= params.beta;
    }
    Err(Error::LineSearchFailed(params.max_backtracks))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::dense_cayley;
    use std::cell::RefCell;

    #[test]
    fn zero_step_is_identity() {
        let x = [0.6, 0.0, 0.8];
        assert_eq!(retract(&x, &[1.0, 2.0, 3.0], 0.0), x.to_vec());
        assert_eq!(step_displacement(&x, &[1.0, 2.0, 3.0], 0.0), 0.0);
    }

    #[test]
    fn quarter_turn_in_the_plane() {
        let out = retract::<f64>(&[1.0, 0.0], &[0.0, 1.0], 1.0);
        let oracle = dense_cayley(&[1.0, 0.0], &[0.0, 1.0], 1.0);
        for i in 0..2 {
            assert!((out[i] - [0.0, 1.0][i]).abs() < 1e-15);
            assert!((out[i] - oracle[i]).abs() < 1e-15);
        }
    }

    #[test]
    fn parallel_direction_does_not_move() {
        let x = [0.0f64, 0.6, 0.8];
        let p = [0.0f64, -1.2, -1.6];
        assert_eq!(step_displacement(&x, &p, 0.7), 0.0);
        let y = retract(&x, &p, 0.7);
        for (a, b) in x.iter().zip(&y) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    /// Rejects the first `reject` trial points, then accepts.
    struct Scripted {
        reject: usize,
        calls: RefCell<usize>,
    }

    impl Objective<f64> for Scripted {
        fn evaluate(&self, x: &[f64]) -> Result<MeritPoint<f64>> {
            *self.calls.borrow_mut() += 1;
            let f = if *self.calls.borrow() > self.reject { -1.0 } else { 1.0 };
            Ok(MeritPoint {
                x: x.to_vec(),
                f,
                g: vec![0.0; x.len()],
                t_scalar: f,
                b_scalar: 1.0,
                t_vec: vec![0.0; x.len()],
                b_vec: vec![0.0; x.len()],
                sign: 1.0,
            })
        }
    }

    fn start() -> MeritPoint<f64> {
        MeritPoint {
            x: vec![1.0, 0.0],
            f: 0.0,
            g: vec![0.0, -1.0],
            t_scalar: 0.0,
            b_scalar: 1.0,
            t_vec: vec![0.0; 2],
            b_vec: vec![0.0; 2],
            sign: 1.0,
        }
    }

    #[test]
    fn smallest_acceptable_exponent_is_returned() {
        // rejects alpha = 1 and 0.5, accepts 0.25
        let obj = Scripted {
            reject: 2,
            calls: RefCell::new(0),
        };
        let step = backtrack(&obj, &start(), &[0.0, 1.0], &LineSearchParams::default()).unwrap();
        assert_eq!(step.alpha, 0.25);
        assert_eq!(step.backtracks, 2);
        assert_eq!(*obj.calls.borrow(), 3);
    }

    #[test]
    fn ascent_direction_rejected() {
        let obj = Scripted {
            reject: 0,
            calls: RefCell::new(0),
        };
        assert!(backtrack(&obj, &start(), &[0.0, -1.0], &LineSearchParams::default()).is_err());
    }

    #[test]
    fn params_validated() {
        let mut p = LineSearchParams::<f64>::default();
        assert!(p.validate().is_ok());
        p.eta = 1.0;
        assert!(p.validate().is_err());
        p.eta = 0.5;
        p.beta = 0.0;
        assert!(p.validate().is_err());
    }
}
