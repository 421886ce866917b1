//! Hypergraph families used in the experiments: squids, sunflowers, grids,
//! blow-ups of simple graphs and subdivided icosahedra.
//!
//! Vertex numbering inside each family is an arbitrary but fixed choice;
//! eigenvalues do not depend on it.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::hypergraph::{Hypergraph, SimpleGraph};

fn require_even_order(k: usize) -> Result<()> {
    if !k.is_multiple_of(2) {
        return Err(Error::OddOrder(k));
    }
    if k < 4 {
        return Err(Error::InvalidParameter(format!("order k must be at least 4, got {k}")));
    }
    Ok(())
}

/// The `k`-uniform squid: `k - 1` legs and one head joining the first vertex
/// of every leg with one extra vertex.
///
/// Leg `j` occupies vertices `j*k .. (j+1)*k`; the extra head vertex is the last one.
pub fn squid(k: usize) -> Result<Hypergraph> {
    require_even_order(k)?;
    let n = k * k - k + 1;
    let mut edges: Vec<Vec<usize>> = (0..k - 1).map(|j| (j * k..(j + 1) * k).collect()).collect();
    let mut head: Vec<usize> = (0..k - 1).map(|j| j * k).collect();
    head.push(n - 1);
    edges.push(head);
    Hypergraph::new(k, n, &edges, false)
}

/// A `k`-uniform sunflower with `delta` petals sharing vertex 0.
pub fn sunflower(k: usize, delta: usize) -> Result<Hypergraph> {
    require_even_order(k)?;
    if delta == 0 {
        return Err(Error::InvalidParameter("sunflower needs delta >= 1".into()));
    }
    let n = (k - 1) * delta + 1;
    let edges: Vec<Vec<usize>> = (0..delta)
        .map(|p| {
            let mut e = Vec::with_capacity(k);
            e.push(0);
            e.extend(1 + p * (k - 1)..1 + (p + 1) * (k - 1));
            e
        })
        .collect();
    Hypergraph::new(k, n, &edges, false)
}

/// The 4-uniform grid obtained by subdividing a square `s` times: one edge per
/// cell of the `(2^s + 1)^2` lattice, made of the cell's four corners.
pub fn grid(s: u32) -> Result<Hypergraph> {
    let side = 1usize
        .checked_shl(s)
        .filter(|&c| c.checked_mul(c).is_some())
        .ok_or_else(|| Error::InvalidParameter(format!("grid order {s} too large")))?;
    let w = side + 1;
    let mut edges = Vec::with_capacity(side * side);
    for r in 0..side {
        for c in 0..side {
            let v = r * w + c;
            edges.push([v, v + 1, v + w, v + w + 1]);
        }
    }
    Hypergraph::new(4, w * w, &edges, false)
}

/// Blows each vertex of `g` up into a `t`-set; vertex `v` becomes
/// `v*t .. (v+1)*t` and every graph edge becomes a `2t`-edge.
pub fn blowup(g: &SimpleGraph, t: usize) -> Result<Hypergraph> {
    if t == 0 {
        return Err(Error::InvalidParameter("blow-up size must be at least 1".into()));
    }
    let edges: Vec<Vec<usize>> = g
        .edges()
        .iter()
        .map(|&(u, v)| (u * t..(u + 1) * t).chain(v * t..(v + 1) * t).collect())
        .collect();
    Hypergraph::new(2 * t, g.n() * t, &edges, false)
}

/// Lifts a simple graph to a 2-uniform hypergraph.
pub fn from_simple_graph(g: &SimpleGraph) -> Result<Hypergraph> {
    blowup(g, 1)
}

/// The Petersen graph: outer 5-cycle `0..5`, inner pentagram `5..10`, spokes `i -- i+5`.
pub fn petersen() -> SimpleGraph {
    let mut edges = Vec::with_capacity(15);
    for i in 0..5 {
        edges.push((i, (i + 1) % 5));
        edges.push((5 + i, 5 + (i + 2) % 5));
        edges.push((i, i + 5));
    }
    SimpleGraph::new(10, &edges).expect("petersen graph is simple")
}

const ICOSAHEDRON_FACES: [[usize; 3]; 20] = [
    [0, 11, 5],
    [0, 5, 1],
    [0, 1, 7],
    [0, 7, 10],
    [0, 10, 11],
    [1, 5, 9],
    [5, 11, 4],
    [11, 10, 2],
    [10, 7, 6],
    [7, 1, 8],
    [3, 9, 4],
    [3, 4, 2],
    [3, 2, 6],
    [3, 6, 8],
    [3, 8, 9],
    [4, 9, 5],
    [2, 4, 11],
    [6, 2, 10],
    [8, 6, 7],
    [9, 8, 1],
];

/// Triangle faces of the icosahedral mesh after `s` midpoint subdivisions,
/// with the number of mesh vertices.
pub fn icosahedral_mesh(s: u32) -> (usize, Vec<[usize; 3]>) {
    let mut faces: Vec<[usize; 3]> = ICOSAHEDRON_FACES.to_vec();
    let mut nv = 12;
    for _ in 0..s {
        let mut mid: HashMap<(usize, usize), usize> = HashMap::with_capacity(faces.len() * 3 / 2);
        let mut midpoint = |a: usize, b: usize, nv: &mut usize| {
            *mid.entry((a.min(b), a.max(b))).or_insert_with(|| {
                *nv += 1;
                *nv - 1
            })
        };
        let mut next = Vec::with_capacity(faces.len() * 4);
        for &[a, b, c] in &faces {
            let ab = midpoint(a, b, &mut nv);
            let bc = midpoint(b, c, &mut nv);
            let ca = midpoint(c, a, &mut nv);
            next.push([a, ab, ca]);
            next.push([b, bc, ab]);
            next.push([c, ca, bc]);
            next.push([ab, bc, ca]);
        }
        faces = next;
    }
    (nv, faces)
}

/// The 4-uniform hypergraph of the `s`-times subdivided icosahedron: each
/// triangular face plus its own centre vertex forms one edge. Centre vertices
/// are numbered after the mesh vertices.
pub fn icosahedron(s: u32) -> Result<Hypergraph> {
    if s > 12 {
        return Err(Error::InvalidParameter(format!("icosahedron order {s} too large")));
    }
    let (nv, faces) = icosahedral_mesh(s);
    let edges: Vec<[usize; 4]> = faces
        .iter()
        .enumerate()
        .map(|(f, &[a, b, c])| [a, b, c, nv + f])
        .collect();
    Hypergraph::new(4, nv + faces.len(), &edges, false)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn squid_sizes() {
        let h = squid(4).unwrap();
        assert_eq!((h.n(), h.m()), (13, 4));
        let h6 = squid(6).unwrap();
        assert_eq!((h6.n(), h6.m()), (31, 6));
        let distinct: std::collections::BTreeSet<usize> =
            h6.index_matrix().iter().copied().collect();
        assert_eq!(distinct.len(), 31);
        assert_eq!(squid(5), Err(Error::OddOrder(5)));
    }

    #[test]
    fn squid_head_meets_each_leg_once() {
        let k = 4;
        let h = squid(k).unwrap();
        let head: Vec<usize> = vec![0, 4, 8, 12];
        let head_idx = h.edges().position(|e| e == head.as_slice()).unwrap();
        for (i, e) in h.edges().enumerate() {
            if i == head_idx {
                continue;
            }
            let shared = e.iter().filter(|v| head.contains(v)).count();
            assert_eq!(shared, 1);
        }
    }

    #[test]
    fn sunflower_sizes() {
        let h = sunflower(4, 3).unwrap();
        let fig1 = Hypergraph::from_one_based(4, 10, &[[1, 2, 3, 4], [1, 5, 6, 7], [1, 8, 9, 10]], false)
            .unwrap();
        assert_eq!(h, fig1);
        let one = sunflower(4, 1).unwrap();
        assert_eq!((one.n(), one.m()), (4, 1));
        let ten = sunflower(4, 10).unwrap();
        assert_eq!((ten.n(), ten.m()), (31, 10));
        assert_eq!(sunflower(3, 2), Err(Error::OddOrder(3)));
    }

    #[test]
    fn grid_sizes() {
        assert_eq!((grid(0).unwrap().n(), grid(0).unwrap().m()), (4, 1));
        assert_eq!((grid(2).unwrap().n(), grid(2).unwrap().m()), (25, 16));
        let g3 = grid(3).unwrap();
        assert_eq!((g3.n(), g3.m()), (81, 64));
        // brute-force cell membership count on the 9x9 lattice
        let w = 9;
        for r in 1..w - 1 {
            for c in 1..w - 1 {
                let mut count = 0;
                for cr in 0..w - 1 {
                    for cc in 0..w - 1 {
                        if (cr == r || cr + 1 == r) && (cc == c || cc + 1 == c) {
                            count += 1;
                        }
                    }
                }
                assert_eq!(count, 4);
                assert_eq!(g3.degrees()[r * w + c], count);
            }
        }
    }

    #[test]
    fn petersen_properties() {
        let p = petersen();
        assert_eq!(p.edges().len(), 15);
        assert!(p.degrees().iter().all(|&d| d == 3));
        assert!(!p.is_bipartite());
    }

    #[test]
    fn blowup_sizes() {
        let h = blowup(&petersen(), 2).unwrap();
        assert_eq!((h.k(), h.n(), h.m()), (4, 20, 15));
        let tri = SimpleGraph::new(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        let h3 = blowup(&tri, 3).unwrap();
        assert_eq!((h3.k(), h3.n(), h3.m()), (6, 9, 3));
        let expected = Hypergraph::new(
            6,
            9,
            &[[0, 1, 2, 3, 4, 5], [3, 4, 5, 6, 7, 8], [0, 1, 2, 6, 7, 8]],
            false,
        )
        .unwrap();
        assert_eq!(h3, expected);
        let lifted = from_simple_graph(&tri).unwrap();
        assert_eq!(lifted, Hypergraph::new(2, 3, &[[0, 1], [1, 2], [0, 2]], false).unwrap());
    }

    #[test]
    fn icosahedron_sizes() {
        for (s, n, m) in [(0, 32, 20), (1, 122, 80), (2, 482, 320)] {
            let h = icosahedron(s).unwrap();
            assert_eq!((h.n(), h.m()), (n, m), "s = {s}");
        }
    }

    #[test]
    fn icosahedral_mesh_is_closed() {
        for s in 0..3 {
            let (nv, faces) = icosahedral_mesh(s);
            let mut edge_count: HashMap<(usize, usize), usize> = HashMap::new();
            for f in &faces {
                for i in 0..3 {
                    let (a, b) = (f[i], f[(i + 1) % 3]);
                    *edge_count.entry((a.min(b), a.max(b))).or_default() += 1;
                }
            }
            assert!(edge_count.values().all(|&c| c == 2));
            // Euler characteristic of the sphere
            assert_eq!(nv as i64 - edge_count.len() as i64 + faces.len() as i64, 2);
        }
    }
}
