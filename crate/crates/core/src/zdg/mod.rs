//! Zero-divisor graphs: vertices are the nonzero one- or two-sided zero
//! divisors, and distinct `x`, `y` are adjacent iff `xy = 0` or `yx = 0`.

mod bits;
pub mod blowup;
pub mod iso;

use std::fmt::Write as _;

use rayon::prelude::*;

pub use bits::BitMatrix;
pub use blowup::{compressed_graph, expand, BlowupClass, BlowupGraph, BlowupJson};
pub use iso::{blowup_isomorphic, fingerprint, fingerprint_blowup, graphs_isomorphic, ISO_CAP};

use crate::error::{Error, Result};
use crate::ring::FiniteRing;

/// Largest ring order (and expanded vertex count) handled explicitly.
pub const EXPLICIT_CAP: usize = 1 << 16;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZdGraph {
    adj: BitMatrix,
    labels: Vec<String>,
}

impl ZdGraph {
    /// Edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Self {
        Self { adj: BitMatrix::new(n), labels: Vec::new() }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Self::empty(n);
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidArgument(format!("edge ({u}, {v}) out of range for {n} vertices")));
            }
            if u == v {
                return Err(Error::InvalidArgument(format!("self-loop at {u}")));
            }
            g.add_edge(u, v);
        }
        Ok(g)
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Self::empty(n);
        for u in 0..n {
            for v in u + 1..n {
                g.add_edge(u, v);
            }
        }
        g
    }

    pub fn path(n: usize) -> Self {
        let mut g = Self::empty(n);
        for u in 1..n {
            g.add_edge(u - 1, u);
        }
        g
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.vertex_count() {
            return Err(Error::DimensionMismatch { left: self.vertex_count(), right: labels.len() });
        }
        self.labels = labels;
        Ok(self)
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        (0..self.vertex_count()).map(|u| self.adj.row_count(u)).sum::<usize>() / 2
    }

    pub fn add_edge(&mut self, u: usize, v: usize) {
        assert_ne!(u, v, "zero-divisor graphs have no loops");
        self.adj.set(u, v);
        self.adj.set(v, u);
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj.get(u, v)
    }

    pub fn degree(&self, u: usize) -> usize {
        self.adj.row_count(u)
    }

    pub fn neighbors(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        self.adj.row_iter(u)
    }

    /// Vertex labels (ring element descriptions) when extracted from a ring.
    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub(crate) fn matrix(&self) -> &BitMatrix {
        &self.adj
    }

    /// Edges `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.vertex_count()).flat_map(|u| self.adj.row_iter(u).filter(move |&v| v > u).map(move |v| (u, v))).collect()
    }

    /// Relabels vertex `v` as `perm[v]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        let n = self.vertex_count();
        if perm.len() != n {
            return Err(Error::DimensionMismatch { left: n, right: perm.len() });
        }
        let mut seen = vec![false; n];
        for &p in perm {
            if p >= n || std::mem::replace(&mut seen[p], true) {
                return Err(Error::InvalidArgument("not a permutation".into()));
            }
        }
        let mut g = Self::empty(n);
        for (u, v) in self.edges() {
            g.add_edge(perm[u], perm[v]);
        }
        if !self.labels.is_empty() {
            let mut labels = vec![String::new(); n];
            for (v, l) in self.labels.iter().enumerate() {
                labels[perm[v]] = l.clone();
            }
            g.labels = labels;
        }
        Ok(g)
    }

    /// Whether `map` (vertex of `self` → vertex of `other`) is a bijection
    /// preserving adjacency and non-adjacency.
    pub fn is_isomorphism(&self, other: &Self, map: &[usize]) -> bool {
        let n = self.vertex_count();
        if other.vertex_count() != n || map.len() != n {
            return false;
        }
        let mut seen = vec![false; n];
        for &m in map {
            if m >= n || std::mem::replace(&mut seen[m], true) {
                return false;
            }
        }
        (0..n).all(|u| (u + 1..n).all(|v| self.has_edge(u, v) == other.has_edge(map[u], map[v])))
    }

    /// Plain-text edge list: `n m`, then one sorted `u v` line per edge.
    pub fn to_edge_list(&self) -> String {
        let edges = self.edges();
        let mut out = format!("{} {}\n", self.vertex_count(), edges.len());
        for (u, v) in edges {
            writeln!(out, "{u} {v}").expect("writing to a String");
        }
        out
    }

    pub fn from_edge_list(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let bad = |msg: &str| Error::InvalidArgument(format!("edge list: {msg}"));
        let header = lines.next().ok_or_else(|| bad("missing header"))?;
        let nums = |l: &str| -> Result<Vec<usize>> {
            l.split_whitespace().map(|t| t.parse::<usize>().map_err(|_| bad(&format!("bad number `{t}`")))).collect()
        };
        let h = nums(header)?;
        if h.len() != 2 {
            return Err(bad("header must be `n m`"));
        }
        let edges = lines
            .map(|l| match nums(l)?.as_slice() {
                &[u, v] => Ok((u, v)),
                _ => Err(bad("edge lines must be `u v`")),
            })
            .collect::<Result<Vec<_>>>()?;
        if edges.len() != h[1] {
            return Err(bad(&format!("header promises {} edges, found {}", h[1], edges.len())));
        }
        Self::from_edges(h[0], &edges)
    }
}

/// `Γ(R)` for a ring with at most `cap` elements.
pub fn explicit_graph<R: FiniteRing + Sync + ?Sized>(ring: &R, cap: usize) -> Result<ZdGraph> {
    let order = ring.order();
    if order > cap {
        return Err(Error::CapExceeded { what: "ring order", size: order as u128, cap: cap as u128 });
    }
    // left[x] holds every y with xy = 0, over nonzero x, y (indices shifted by one)
    let m = order - 1;
    let rows: Vec<Vec<u64>> = (1..order)
        .into_par_iter()
        .map(|x| {
            let mut row = vec![0u64; m.div_ceil(64)];
            for y in 1..order {
                if ring.mul(x, y) == 0 {
                    row[(y - 1) / 64] |= 1 << ((y - 1) % 64);
                }
            }
            row
        })
        .collect();
    let zero_left = BitMatrix::from_rows(m, rows);
    let is_vertex: Vec<bool> =
        (0..m).into_par_iter().map(|x| zero_left.row_count(x) > 0 || (0..m).any(|y| zero_left.get(y, x))).collect();
    let vertices: Vec<usize> = (0..m).filter(|&x| is_vertex[x]).collect();
    let n = vertices.len();
    let rows: Vec<Vec<u64>> = vertices
        .par_iter()
        .map(|&x| {
            let mut row = vec![0u64; n.div_ceil(64)];
            for (j, &y) in vertices.iter().enumerate() {
                if x != y && (zero_left.get(x, y) || zero_left.get(y, x)) {
                    row[j / 64] |= 1 << (j % 64);
                }
            }
            row
        })
        .collect();
    let labels = vertices.iter().map(|&x| ring.describe(x + 1)).collect();
    Ok(ZdGraph { adj: BitMatrix::from_rows(n, rows), labels })
}
