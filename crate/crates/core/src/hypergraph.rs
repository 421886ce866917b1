//! Uniform hypergraphs stored as a compact `m x k` matrix of vertex indices.

use std::collections::VecDeque;

use crate::error::{Error, Result};

/// A `k`-uniform hypergraph on vertices `0..n`.
///
/// Edges are kept canonical: each row sorted ascending and the rows sorted
/// lexicographically. Two hypergraphs with the same edge set therefore compare
/// equal regardless of the order in which the edges were supplied.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hypergraph {
    k: usize,
    n: usize,
    /// Row-major `m x k` index matrix.
    edges: Vec<usize>,
    degrees: Vec<usize>,
}

impl Hypergraph {
    /// Validates `raw_edges` (0-based) and builds the hypergraph.
    ///
    /// Isolated vertices are rejected unless `allow_isolated` is set.
    pub fn new<E>(k: usize, n: usize, raw_edges: &[E], allow_isolated: bool) -> Result<Self>
    where
        E: AsRef<[usize]>,
    {
        if k < 2 {
            return Err(Error::OrderTooSmall(k));
        }
        if raw_edges.is_empty() {
            return Err(Error::NoEdges);
        }
        let mut rows: Vec<(Vec<usize>, usize)> = Vec::with_capacity(raw_edges.len());
        for (idx, raw) in raw_edges.iter().enumerate() {
            let raw = raw.as_ref();
            if raw.len() != k {
                return Err(Error::WrongArity {
                    edge: idx,
                    expected: k,
                    found: raw.len(),
                });
            }
            if let Some(&v) = raw.iter().find(|&&v| v >= n) {
                return Err(Error::IndexOutOfRange {
                    edge: idx,
                    vertex: v,
                    n,
                });
            }
            let mut row = raw.to_vec();
            row.sort_unstable();
            if let Some(w) = row.windows(2).find(|w| w[0] == w[1]) {
                return Err(Error::DuplicateVertexInEdge {
                    edge: idx,
                    vertex: w[0],
                });
            }
            rows.push((row, idx));
        }
        rows.sort();
        for w in rows.windows(2) {
            if w[0].0 == w[1].0 {
                let (first, edge) = (w[0].1.min(w[1].1), w[0].1.max(w[1].1));
                return Err(Error::DuplicateEdge { edge, first });
            }
        }

        let mut degrees = vec![0usize; n];
        let mut edges = Vec::with_capacity(rows.len() * k);
        for (row, _) in rows {
            for &v in &row {
                degrees[v] += 1;
            }
            edges.extend(row);
        }
        if !allow_isolated {
            if let Some(vertex) = degrees.iter().position(|&d| d == 0) {
                return Err(Error::IsolatedVertex { vertex });
            }
        }
        Ok(Self {
            k,
            n,
            edges,
            degrees,
        })
    }

    /// Same as [`Hypergraph::new`] but with 1-based vertex indices.
    pub fn from_one_based<E>(k: usize, n: usize, raw_edges: &[E], allow_isolated: bool) -> Result<Self>
    where
        E: AsRef<[usize]>,
    {
        let mut shifted = Vec::with_capacity(raw_edges.len());
        for (idx, raw) in raw_edges.iter().enumerate() {
            let mut row = Vec::with_capacity(k);
            for &v in raw.as_ref() {
                if v == 0 {
                    return Err(Error::IndexOutOfRange {
                        edge: idx,
                        vertex: 0,
                        n,
                    });
                }
                row.push(v - 1);
            }
            shifted.push(row);
        }
        Self::new(k, n, &shifted, allow_isolated)
    }

    #[inline]
    pub fn k(&self) -> usize {
        self.k
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.edges.len() / self.k
    }

    #[inline]
    pub fn edge(&self, i: usize) -> &[usize] {
        &self.edges[i * self.k..(i + 1) * self.k]
    }

    /// Edges in canonical order.
    pub fn edges(&self) -> impl ExactSizeIterator<Item = &[usize]> + '_ {
        self.edges.chunks_exact(self.k)
    }

    /// The flat row-major index matrix.
    pub fn index_matrix(&self) -> &[usize] {
        &self.edges
    }

    #[inline]
    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    /// Maximum vertex degree.
    pub fn max_degree(&self) -> usize {
        self.degrees.iter().copied().max().unwrap_or(0)
    }

    pub fn isolated_vertices(&self) -> Vec<usize> {
        (0..self.n).filter(|&i| self.degrees[i] == 0).collect()
    }

    /// Whether the vertex/edge incidence structure is connected.
    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let mut incident: Vec<Vec<usize>> = vec![Vec::new(); self.n];
        for (e, row) in self.edges().enumerate() {
            for &v in row {
                incident[v].push(e);
            }
        }
        let mut seen_v = vec![false; self.n];
        let mut seen_e = vec![false; self.m()];
        let mut queue = VecDeque::from([0usize]);
        seen_v[0] = true;
        let mut count = 1;
        while let Some(v) = queue.pop_front() {
            for &e in &incident[v] {
                if seen_e[e] {
                    continue;
                }
                seen_e[e] = true;
                for &w in self.edge(e) {
                    if !seen_v[w] {
                        seen_v[w] = true;
                        count += 1;
                        queue.push_back(w);
                    }
                }
            }
        }
        count == self.n
    }

    /// If this is a sunflower (one vertex shared by every edge, all other
    /// vertices of degree one), returns its maximum degree.
    pub fn sunflower_degree(&self) -> Option<usize> {
        let m = self.m();
        let hubs: Vec<usize> = (0..self.n).filter(|&i| self.degrees[i] == m).collect();
        let leaves_ok = self
            .degrees
            .iter()
            .enumerate()
            .all(|(i, &d)| hubs.contains(&i) || d == 1);
        (hubs.len() == 1 && leaves_ok && self.n == (self.k - 1) * m + 1).then_some(m)
    }
}

/// An ordinary simple graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimpleGraph {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl SimpleGraph {
    pub fn new(n: usize, raw_edges: &[(usize, usize)]) -> Result<Self> {
        let mut edges = Vec::with_capacity(raw_edges.len());
        for &(u, v) in raw_edges {
            if u == v {
                return Err(Error::InvalidGraph(format!("self-loop at vertex {u}")));
            }
            if u >= n || v >= n {
                return Err(Error::InvalidGraph(format!(
                    "edge ({u}, {v}) outside 0..{n}"
                )));
            }
            edges.push((u.min(v), u.max(v)));
        }
        let mut sorted = edges.clone();
        sorted.sort_unstable();
        if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidGraph(format!(
                "duplicate edge ({}, {})",
                w[0].0, w[0].1
            )));
        }
        Ok(Self { n, edges })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.n];
        for &(u, v) in &self.edges {
            d[u] += 1;
            d[v] += 1;
        }
        d
    }

    /// Two-colouring by breadth-first search.
    pub fn is_bipartite(&self) -> bool {
        let mut adj = vec![Vec::new(); self.n];
        for &(u, v) in &self.edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        let mut colour: Vec<Option<bool>> = vec![None; self.n];
        for start in 0..self.n {
            if colour[start].is_some() {
                continue;
            }
            colour[start] = Some(false);
            let mut queue = VecDeque::from([start]);
            while let Some(u) = queue.pop_front() {
                let cu = colour[u].unwrap();
                for &v in &adj[u] {
                    match colour[v] {
                        None => {
                            colour[v] = Some(!cu);
                            queue.push_back(v);
                        }
                        Some(cv) if cv == cu => return false,
                        _ => {}
                    }
                }
            }
        }
        true
    }

    /// Dense adjacency matrix, row-major.
    pub fn adjacency_matrix(&self) -> Vec<f64> {
        let mut a = vec![0.0; self.n * self.n];
        for &(u, v) in &self.edges {
            a[u * self.n + v] = 1.0;
            a[v * self.n + u] = 1.0;
        }
        a
    }
}
