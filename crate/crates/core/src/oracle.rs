//! Dense, brute-force reference implementations for small instances.
//!
//! These follow the textbook definitions literally (full `n^k` tensors,
//! explicit BFGS matrices, explicit Cayley matrices) and share no code with
//! the sparse kernels, the two-loop recursion or the closed-form retraction.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;
use crate::scalar::Scalar;
use crate::tensor::{ProductResult, TensorSelector};

/// Upper bound on the number of entries a dense tensor may hold.
pub const DENSE_ENTRY_CAP: u128 = 10_000_000;

/// A dense order-`k`, dimension-`n` tensor stored in row-major multi-index order.
#[derive(Debug, Clone)]
pub struct DenseTensor<T> {
    k: usize,
    n: usize,
    data: Vec<T>,
}

impl<T: Scalar> DenseTensor<T> {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, idx: &[usize]) -> T {
        self.data[self.linear(idx)]
    }

    fn linear(&self, idx: &[usize]) -> usize {
        idx.iter().fold(0, |acc, &i| acc * self.n + i)
    }

    pub fn nonzeros(&self) -> usize {
        self.data.iter().filter(|v| !v.is_zero()).count()
    }

    /// Fraction of nonzero entries.
    pub fn nonzero_fraction(&self) -> f64 {
        self.nonzeros() as f64 / self.data.len() as f64
    }

    /// Whether every entry is invariant under permutations of its index.
    pub fn is_symmetric(&self) -> bool {
        let mut idx = vec![0usize; self.k];
        for lin in 0..self.data.len() {
            unravel(lin, self.n, &mut idx);
            let mut sorted = idx.clone();
            sorted.sort_unstable();
            if self.data[lin] != self.data[self.linear(&sorted)] {
                return false;
            }
        }
        true
    }
}

fn unravel(mut lin: usize, n: usize, idx: &mut [usize]) {
    for slot in idx.iter_mut().rev() {
        *slot = lin % n;
        lin /= n;
    }
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let head = rest.remove(i);
        for mut tail in permutations(&rest) {
            tail.insert(0, head);
            out.push(tail);
        }
    }
    out
}

/// Builds the dense symmetric tensor from its entrywise definition: every
/// permutation of an edge carries `1/(k-1)!` in `A`, and the diagonal of `D`
/// carries the degrees.
pub fn dense_oracle<T: Scalar>(h: &Hypergraph, sel: TensorSelector) -> Result<DenseTensor<T>> {
    let (k, n) = (h.k(), h.n());
    let entries = (n as u128).checked_pow(k as u32).unwrap_or(u128::MAX);
    if entries > DENSE_ENTRY_CAP {
        return Err(Error::TooLarge {
            entries,
            cap: DENSE_ENTRY_CAP,
        });
    }
    let mut t = DenseTensor {
        k,
        n,
        data: vec![T::zero(); entries as usize],
    };
    let fact: f64 = (1..k).map(|i| i as f64).product();
    let adj = T::lit(1.0 / fact);
    let sign = match sel {
        TensorSelector::Laplacian => -T::one(),
        _ => T::one(),
    };
    for e in h.edges() {
        for p in permutations(e) {
            let lin = t.linear(&p);
            t.data[lin] += sign * adj;
        }
    }
    if sel != TensorSelector::Adjacency {
        for (i, &d) in h.degrees().iter().enumerate() {
            let lin = t.linear(&vec![i; k]);
            t.data[lin] += T::from_usize_lossy(d);
        }
    }
    Ok(t)
}

/// Evaluates `T x^{k-1}` and `T x^k` by direct summation over all entries.
pub fn dense_apply<T: Scalar>(t: &DenseTensor<T>, x: &[T]) -> Result<ProductResult<T>> {
    if x.len() != t.n {
        return Err(Error::DimensionMismatch {
            expected: t.n,
            found: x.len(),
        });
    }
    let mut vec = vec![T::zero(); t.n];
    let mut scalar = T::zero();
    let mut idx = vec![0usize; t.k];
    for (lin, &v) in t.data.iter().enumerate() {
        if v.is_zero() {
            continue;
        }
        unravel(lin, t.n, &mut idx);
        let tail: T = idx[1..].iter().fold(T::one(), |acc, &i| acc * x[i]);
        vec[idx[0]] += v * tail;
        scalar += v * tail * x[idx[0]];
    }
    Ok(ProductResult { vec, scalar })
}

/// Symmetric `n x n` matrix of an order-2 dense tensor.
pub fn dense_matrix(t: &DenseTensor<f64>) -> Option<DMatrix<f64>> {
    (t.k == 2).then(|| DMatrix::from_row_slice(t.n, t.n, &t.data))
}

/// Sorted eigenvalues of a dense symmetric matrix.
pub fn symmetric_eigenvalues(m: &DMatrix<f64>) -> Vec<f64> {
    let mut ev: Vec<f64> = m.clone().symmetric_eigen().eigenvalues.iter().copied().collect();
    ev.sort_by(|a, b| a.total_cmp(b));
    ev
}

/// Assembles the L-BFGS inverse-Hessian approximation explicitly:
/// start from `gamma * I` and apply `H <- V' H V + rho s s'`, `V = I - rho y s'`,
/// for the stored pairs from oldest to newest.
pub fn dense_lbfgs_matrix(n: usize, gamma: f64, pairs: &[(Vec<f64>, Vec<f64>, f64)]) -> DMatrix<f64> {
    let mut h = DMatrix::<f64>::identity(n, n) * gamma;
    for (s, y, rho) in pairs {
        let s = DVector::from_column_slice(s);
        let y = DVector::from_column_slice(y);
        let v = DMatrix::<f64>::identity(n, n) - (&y * s.transpose()) * *rho;
        h = v.transpose() * &h * &v + (&s * s.transpose()) * *rho;
    }
    h
}

/// `(I - W)(I + W)^{-1} x` with `W = alpha (x p' - p x')`, via a dense LU solve.
pub fn dense_cayley(x: &[f64], p: &[f64], alpha: f64) -> Vec<f64> {
    let n = x.len();
    let xv = DVector::from_column_slice(x);
    let pv = DVector::from_column_slice(p);
    let w = (&xv * pv.transpose() - &pv * xv.transpose()) * alpha;
    let id = DMatrix::<f64>::identity(n, n);
    let z = (&id + &w).lu().solve(&xv).expect("I + W is invertible for skew-symmetric W");
    ((&id - &w) * z).iter().copied().collect()
}

/// Central finite-difference gradient of `f` at `x`.
pub fn finite_difference_gradient(f: impl Fn(&[f64]) -> f64, x: &[f64], h: f64) -> Vec<f64> {
    let mut xp = x.to_vec();
    (0..x.len())
        .map(|i| {
            let orig = xp[i];
            xp[i] = orig + h;
            let fp = f(&xp);
            xp[i] = orig - h;
            let fm = f(&xp);
            xp[i] = orig;
            (fp - fm) / (2.0 * h)
        })
        .collect()
}

/// Power iteration on the dense tensor `T + shift * I` from the all-ones vector,
/// returning the Perron H-eigenvalue of `T` for nonnegative irreducible `T`.
pub fn dense_perron_value(t: &DenseTensor<f64>, shift: f64, iters: usize) -> f64 {
    let k = t.k;
    let mut x = vec![1.0 / (t.n as f64).powf(1.0 / k as f64); t.n];
    let mut lambda = 0.0;
    for _ in 0..iters {
        let r = dense_apply(t, &x).expect("dimension matches");
        let y: Vec<f64> = r
            .vec
            .iter()
            .zip(&x)
            .map(|(&v, &xi)| v + shift * xi.powi(k as i32 - 1))
            .collect();
        lambda = r.scalar / x.iter().map(|v| v.powi(k as i32)).sum::<f64>();
        let root: Vec<f64> = y.iter().map(|v| v.powf(1.0 / (k as f64 - 1.0))).collect();
        let norm = root.iter().map(|v| v.powi(k as i32)).sum::<f64>().powf(1.0 / k as f64);
        x = root.iter().map(|v| v / norm).collect();
    }
    lambda
}
