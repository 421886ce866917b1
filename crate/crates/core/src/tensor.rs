//! Implicit products of the adjacency, degree, Laplacian and signless
//! Laplacian tensors of a uniform hypergraph with a vector.
//!
//! Nothing of size `n^k` is ever formed: every product walks the `m x k`
//! index matrix once, so a product costs `O(mk + n)`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;
use crate::scalar::{powu, Scalar};

/// Which hypergraph tensor to apply.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TensorSelector {
    /// `A`
    Adjacency,
    /// `L = D - A`
    Laplacian,
    /// `Q = D + A`
    SignlessLaplacian,
}

impl TensorSelector {
    pub const ALL: [TensorSelector; 3] = [
        TensorSelector::Adjacency,
        TensorSelector::Laplacian,
        TensorSelector::SignlessLaplacian,
    ];

    pub fn short_name(self) -> &'static str {
        match self {
            TensorSelector::Adjacency => "adj",
            TensorSelector::Laplacian => "lap",
            TensorSelector::SignlessLaplacian => "slap",
        }
    }

    /// Whether the tensor is entrywise nonnegative.
    pub fn is_nonnegative(self) -> bool {
        !matches!(self, TensorSelector::Laplacian)
    }
}

impl fmt::Display for TensorSelector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short_name())
    }
}

impl FromStr for TensorSelector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "adj" | "a" | "adjacency" => Ok(TensorSelector::Adjacency),
            "lap" | "l" | "laplacian" => Ok(TensorSelector::Laplacian),
            "slap" | "q" | "signless" | "signless-laplacian" => Ok(TensorSelector::SignlessLaplacian),
            other => Err(Error::InvalidParameter(format!("unknown tensor {other:?}"))),
        }
    }
}

/// Eigenpair type, selecting the right-hand tensor `B`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EigKind {
    /// `B = I`: `T x^{k-1} = lambda x^{[k-1]}`.
    H,
    /// `B = E`: `T x^{k-1} = lambda (x'x)^{k/2-1} x`.
    Z,
}

impl fmt::Display for EigKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EigKind::H => "h",
            EigKind::Z => "z",
        })
    }
}

impl FromStr for EigKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "h" => Ok(EigKind::H),
            "z" => Ok(EigKind::Z),
            other => Err(Error::InvalidParameter(format!("unknown eigenvalue kind {other:?}"))),
        }
    }
}

/// `T x^{k-1}` together with `T x^k`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductResult<T> {
    pub vec: Vec<T>,
    pub scalar: T,
}

impl<T: Scalar> ProductResult<T> {
    fn zeros(n: usize) -> Self {
        Self {
            vec: vec![T::zero(); n],
            scalar: T::zero(),
        }
    }
}

fn check_len(h: &Hypergraph, x: &[impl Sized]) -> Result<()> {
    if x.len() != h.n() {
        return Err(Error::DimensionMismatch {
            expected: h.n(),
            found: x.len(),
        });
    }
    Ok(())
}

/// `A x^{k-1}` and `A x^k`.
///
/// Each edge adds, at each of its vertices, the product of `x` over the other
/// `k - 1` vertices. The leave-one-out products come from a prefix and a
/// suffix product pass over the edge.
pub fn adjacency_apply<T: Scalar>(h: &Hypergraph, x: &[T]) -> Result<ProductResult<T>> {
    check_len(h, x)?;
    let k = h.k();
    let mut out = ProductResult::zeros(h.n());
    let mut loo = vec![T::zero(); k];
    let mut total = T::zero();
    for e in h.edges() {
        let mut prefix = T::one();
        for (slot, &v) in loo.iter_mut().zip(e) {
            *slot = prefix;
            prefix *= x[v];
        }
        total += prefix;
        let mut suffix = T::one();
        for (slot, &v) in loo.iter_mut().zip(e).rev() {
            *slot *= suffix;
            suffix *= x[v];
        }
        for (&p, &v) in loo.iter().zip(e) {
            out.vec[v] += p;
        }
    }
    out.scalar = T::from_usize_lossy(k) * total;
    Ok(out)
}

/// `D x^{k-1} = d * x^{[k-1]}` and `D x^k = sum_i d(i) x_i^k`.
pub fn degree_apply<T: Scalar>(h: &Hypergraph, x: &[T]) -> Result<ProductResult<T>> {
    check_len(h, x)?;
    let k = h.k();
    let mut out = ProductResult::zeros(h.n());
    for ((o, &xi), &d) in out.vec.iter_mut().zip(x).zip(h.degrees()) {
        let d = T::from_usize_lossy(d);
        let p = powu(xi, k - 1);
        *o = d * p;
        out.scalar += d * p * xi;
    }
    Ok(out)
}

/// Product with the selected tensor, assembled from the degree and adjacency kernels.
pub fn tensor_apply<T: Scalar>(h: &Hypergraph, sel: TensorSelector, x: &[T]) -> Result<ProductResult<T>> {
    let a = adjacency_apply(h, x)?;
    let sign = match sel {
        TensorSelector::Adjacency => return Ok(a),
        TensorSelector::Laplacian => -T::one(),
        TensorSelector::SignlessLaplacian => T::one(),
    };
    let mut d = degree_apply(h, x)?;
    for (dv, av) in d.vec.iter_mut().zip(&a.vec) {
        *dv += sign * *av;
    }
    d.scalar += sign * a.scalar;
    Ok(d)
}

/// `B x^{k-1}` and `B x^k` for `B = I` (H) or `B = E` (Z).
pub fn b_apply<T: Scalar>(kind: EigKind, k: usize, x: &[T]) -> Result<ProductResult<T>> {
    if !k.is_multiple_of(2) {
        return Err(Error::OddOrder(k));
    }
    match kind {
        EigKind::H => {
            let mut out = ProductResult::zeros(x.len());
            for (o, &xi) in out.vec.iter_mut().zip(x) {
                let p = powu(xi, k - 1);
                *o = p;
                out.scalar += p * xi;
            }
            Ok(out)
        }
        EigKind::Z => {
            let sq = crate::scalar::dot(x, x);
            let c = powu(sq, k / 2 - 1);
            Ok(ProductResult {
                vec: x.iter().map(|&xi| c * xi).collect(),
                scalar: c * sq,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators;

    fn single_edge() -> Hypergraph {
        Hypergraph::new(4, 4, &[[0, 1, 2, 3]], false).unwrap()
    }

    #[test]
    fn adjacency_single_edge_ones() {
        let r = adjacency_apply(&single_edge(), &[1.0; 4]).unwrap();
        assert_eq!(r.vec, vec![1.0; 4]);
        assert_eq!(r.scalar, 4.0);
    }

    #[test]
    fn adjacency_sunflower_at_hub_indicator() {
        let h = generators::sunflower(4, 3).unwrap();
        let mut x = vec![0.0; 10];
        x[0] = 1.0;
        let r = adjacency_apply(&h, &x).unwrap();
        assert!(r.vec.iter().all(|&v| v == 0.0));
        assert_eq!(r.scalar, 0.0);
    }

    #[test]
    fn degree_products() {
        let h = generators::sunflower(4, 3).unwrap();
        assert_eq!(degree_apply(&h, &[1.0; 10]).unwrap().scalar, 12.0);
        let z = degree_apply(&h, &[0.0; 10]).unwrap();
        assert!(z.vec.iter().all(|&v| v == 0.0) && z.scalar == 0.0);
        let mut e1 = vec![0.0; 10];
        e1[0] = 1.0;
        let r = degree_apply(&h, &e1).unwrap();
        let mut expected = vec![0.0; 10];
        expected[0] = 3.0;
        assert_eq!(r.vec, expected);
        assert_eq!(r.scalar, 3.0);
    }

    #[test]
    fn laplacian_and_signless_on_single_edge() {
        let h = single_edge();
        assert_eq!(tensor_apply(&h, TensorSelector::Laplacian, &[1.0; 4]).unwrap().scalar, 0.0);
        assert_eq!(
            tensor_apply(&h, TensorSelector::SignlessLaplacian, &[1.0; 4]).unwrap().scalar,
            8.0
        );
    }

    #[test]
    fn laplacian_is_degree_minus_adjacency() {
        let h = generators::sunflower(4, 3).unwrap();
        let x: Vec<f64> = (0..10).map(|i| ((i * 7 % 11) as f64 - 5.0) / 3.0).collect();
        let d = degree_apply(&h, &x).unwrap();
        let a = adjacency_apply(&h, &x).unwrap();
        let l = tensor_apply(&h, TensorSelector::Laplacian, &x).unwrap();
        let q = tensor_apply(&h, TensorSelector::SignlessLaplacian, &x).unwrap();
        for i in 0..10 {
            assert_eq!(l.vec[i], d.vec[i] - a.vec[i]);
            assert_eq!(q.vec[i], d.vec[i] + a.vec[i]);
        }
        assert_eq!(l.scalar, d.scalar - a.scalar);
        assert_eq!(q.scalar, d.scalar + a.scalar);
    }

    #[test]
    fn b_tensor_products() {
        let h = b_apply(EigKind::H, 4, &[1.0, 2.0]).unwrap();
        assert_eq!(h.vec, vec![1.0, 8.0]);
        assert_eq!(h.scalar, 17.0);
        let z = b_apply(EigKind::Z, 4, &[1.0, 1.0]).unwrap();
        assert_eq!(z.vec, vec![2.0, 2.0]);
        assert_eq!(z.scalar, 4.0);
        let s = 0.5f64.sqrt();
        assert!((b_apply(EigKind::Z, 4, &[s, s]).unwrap().scalar - 1.0).abs() < 1e-15);
        assert_eq!(b_apply(EigKind::H, 3, &[1.0]), Err(Error::OddOrder(3)));
    }

    #[test]
    fn dimension_mismatch() {
        assert_eq!(
            adjacency_apply(&single_edge(), &[1.0; 3]),
            Err(Error::DimensionMismatch {
                expected: 4,
                found: 3
            })
        );
    }

    #[test]
    fn works_in_single_precision() {
        let r = tensor_apply(&single_edge(), TensorSelector::SignlessLaplacian, &[1.0f32; 4]).unwrap();
        assert_eq!(r.scalar, 8.0f32);
    }

    #[test]
    fn selector_parsing() {
        assert_eq!("adj".parse::<TensorSelector>().unwrap(), TensorSelector::Adjacency);
        assert_eq!("Q".parse::<TensorSelector>().unwrap(), TensorSelector::SignlessLaplacian);
        assert!("x".parse::<TensorSelector>().is_err());
        assert_eq!("Z".parse::<EigKind>().unwrap(), EigKind::Z);
    }
}
