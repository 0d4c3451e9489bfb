//! Compressed zero-divisor graphs of two-step graded algebras.
//!
//! When `R³ = 0`, whether `ab = 0` depends only on the linear parts of `a`
//! and `b`, and only up to nonzero scalars. So `Γ(R)` is a blow-up of a graph
//! on the projective points of the generator space: each point becomes a
//! clique or an independent set of `(p − 1)·p^{dim R²}` vertices, and the
//! nonzero elements of `R²` form a clique joined to everything.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::bits::BitMatrix;
use super::ZdGraph;
use crate::constructions::GradedPresentation;
use crate::error::{Error, Result};
use crate::fp::PrimeField;

/// Most projective classes [`compressed_graph`] will build.
pub const CLASS_CAP: usize = 1 << 14;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BlowupClass {
    pub mult: u128,
    pub clique: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlowupGraph {
    universal: u128,
    classes: Vec<BlowupClass>,
    cross: BitMatrix,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlowupJson {
    pub universal: u128,
    pub classes: Vec<BlowupClass>,
    pub cross: Vec<[usize; 2]>,
}

impl BlowupGraph {
    pub fn new(universal: u128, classes: Vec<BlowupClass>, cross: &[(usize, usize)]) -> Result<Self> {
        let n = classes.len();
        if let Some(c) = classes.iter().position(|c| c.mult == 0) {
            return Err(Error::InvalidArgument(format!("class {c} has multiplicity 0")));
        }
        let mut m = BitMatrix::new(n);
        for &(i, j) in cross {
            if i >= n || j >= n || i == j {
                return Err(Error::InvalidArgument(format!("bad cross pair ({i}, {j})")));
            }
            m.set(i, j);
            m.set(j, i);
        }
        Ok(Self { universal, classes, cross: m })
    }

    /// Number of nonzero elements of `R²`.
    pub fn universal(&self) -> u128 {
        self.universal
    }

    pub fn classes(&self) -> &[BlowupClass] {
        &self.classes
    }

    pub fn is_cross(&self, i: usize, j: usize) -> bool {
        self.cross.get(i, j)
    }

    pub(crate) fn cross_matrix(&self) -> &BitMatrix {
        &self.cross
    }

    /// Sorted pairs `(i, j)`, `i < j`, of adjacent classes.
    pub fn cross_pairs(&self) -> Vec<(usize, usize)> {
        (0..self.classes.len()).flat_map(|i| self.cross.row_iter(i).filter(move |&j| j > i).map(move |j| (i, j))).collect()
    }

    pub fn vertex_count(&self) -> u128 {
        self.universal + self.classes.iter().map(|c| c.mult).sum::<u128>()
    }

    pub fn to_json(&self) -> BlowupJson {
        BlowupJson {
            universal: self.universal,
            classes: self.classes.clone(),
            cross: self.cross_pairs().into_iter().map(|(i, j)| [i, j]).collect(),
        }
    }

    pub fn from_json(j: &BlowupJson) -> Result<Self> {
        let pairs: Vec<(usize, usize)> = j.cross.iter().map(|&[a, b]| (a, b)).collect();
        Self::new(j.universal, j.classes.clone(), &pairs)
    }
}

fn encode(p: usize, v: &[u32]) -> usize {
    v.iter().rev().fold(0, |acc, &c| acc * p + c as usize)
}

fn decode(p: usize, n: usize, mut idx: usize) -> Vec<u32> {
    (0..n)
        .map(|_| {
            let c = (idx % p) as u32;
            idx /= p;
            c
        })
        .collect()
}

fn normalize(f: PrimeField, v: &mut [u32]) {
    if let Some(&lead) = v.iter().find(|&&c| c != 0) {
        let inv = f.inv(lead);
        for c in v.iter_mut() {
            *c = f.mul(*c, inv);
        }
    }
}

/// Projective points of `Z_p^n`, each normalized so its first nonzero
/// coordinate is 1, in increasing base-`p` order (first coordinate least
/// significant).
pub fn projective_points(f: PrimeField, n: usize) -> Vec<Vec<u32>> {
    let p = f.p() as usize;
    let total = p.pow(n as u32);
    (1..total)
        .map(|idx| decode(p, n, idx))
        .filter(|v| v.iter().find(|&&c| c != 0) == Some(&1))
        .collect()
}

/// The exact blow-up description of `Γ(R)` for the presentation's algebra.
pub fn compressed_graph(pres: &GradedPresentation) -> Result<BlowupGraph> {
    let f = pres.field();
    let p = f.p() as usize;
    let n = pres.generators();
    let k = pres.square_dim();
    let class_count = (p as u128).checked_pow(n as u32).map(|t| (t - 1) / (p as u128 - 1));
    match class_count {
        Some(c) if c <= CLASS_CAP as u128 => {}
        _ => {
            return Err(Error::CapExceeded {
                what: "projective classes",
                size: class_count.unwrap_or(u128::MAX),
                cap: CLASS_CAP as u128,
            })
        }
    }
    let points = projective_points(f, n);
    let mut class_of = vec![usize::MAX; p.pow(n as u32)];
    for (c, v) in points.iter().enumerate() {
        class_of[encode(p, v)] = c;
    }
    let pk = (p as u128).checked_pow(k as u32).ok_or(Error::CapExceeded {
        what: "order of R²",
        size: u128::MAX,
        cap: u128::MAX,
    })?;
    let mult = (p as u128 - 1).checked_mul(pk).ok_or(Error::CapExceeded {
        what: "class multiplicity",
        size: u128::MAX,
        cap: u128::MAX,
    })?;
    let words = points.len().div_ceil(64);
    let rows: Vec<(bool, Vec<u64>)> = points
        .par_iter()
        .enumerate()
        .map(|(c, v)| {
            let left = pres.left_linear_map(v);
            let right = pres.right_linear_map(v);
            let clique = left.mul_vec(v).expect("dimensions agree").iter().all(|&x| x == 0);
            let mut row = vec![0u64; words];
            for kernel in [left.kernel(), right.kernel()] {
                for mut w in kernel.vectors() {
                    if w.iter().all(|&x| x == 0) {
                        continue;
                    }
                    normalize(f, &mut w);
                    let d = class_of[encode(p, &w)];
                    if d != c {
                        row[d / 64] |= 1 << (d % 64);
                    }
                }
            }
            (clique, row)
        })
        .collect();
    let classes = rows.iter().map(|&(clique, _)| BlowupClass { mult, clique }).collect();
    let cross = BitMatrix::from_rows(points.len(), rows.into_iter().map(|(_, r)| r).collect());
    Ok(BlowupGraph { universal: pk - 1, classes, cross })
}

/// Expands a blow-up into an explicit graph: the universal clique first,
/// then each class's vertices in class order.
pub fn expand(b: &BlowupGraph, cap: usize) -> Result<ZdGraph> {
    let total = b.vertex_count();
    if total > cap as u128 {
        return Err(Error::CapExceeded { what: "expanded vertex count", size: total, cap: cap as u128 });
    }
    let u = b.universal as usize;
    let mut start = Vec::with_capacity(b.classes.len());
    let mut next = u;
    for c in &b.classes {
        start.push(next);
        next += c.mult as usize;
    }
    let n = next;
    let mut g = ZdGraph::empty(n);
    for x in 0..u {
        for y in x + 1..n {
            g.add_edge(x, y);
        }
    }
    let block = |i: usize| start[i]..start[i] + b.classes[i].mult as usize;
    for (i, c) in b.classes.iter().enumerate() {
        if c.clique {
            for x in block(i) {
                for y in x + 1..block(i).end {
                    g.add_edge(x, y);
                }
            }
        }
        for j in b.cross.row_iter(i).filter(|&j| j > i) {
            for x in block(i) {
                for y in block(j) {
                    g.add_edge(x, y);
                }
            }
        }
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{construct, construct_with, Variant};

    #[test]
    fn projective_point_counts() {
        let f = PrimeField::new(3).unwrap();
        assert_eq!(projective_points(f, 6).len(), 364);
        let f = PrimeField::new(2).unwrap();
        assert_eq!(projective_points(f, 6).len(), 63);
    }

    #[test]
    fn a1_shape() {
        let b = compressed_graph(&construct(Variant::A1, 2).unwrap()).unwrap();
        assert_eq!(b.universal(), (1 << 14) - 1);
        assert_eq!(b.classes().len(), 63);
        assert!(b.classes().iter().all(|c| c.clique && c.mult == 1 << 14));
        assert!(b.cross_pairs().is_empty());
        assert_eq!(b.vertex_count(), (1u128 << 20) - 1);
    }

    #[test]
    fn a2_shape() {
        let b = compressed_graph(&construct(Variant::A2, 3).unwrap()).unwrap();
        assert_eq!(b.universal(), 3u128.pow(20) - 1);
        assert_eq!(b.classes().len(), 364);
        assert!(b.classes().iter().all(|c| !c.clique && c.mult == 2 * 3u128.pow(20)));
        assert!(b.cross_pairs().is_empty());
    }

    #[test]
    fn zero_product_algebra_is_complete() {
        let f = PrimeField::new(2).unwrap();
        let all = crate::fp::Subspace::full(f, 3);
        let pres = GradedPresentation::new(f, 3, crate::constructions::Symmetry::Alternating, all).unwrap();
        let b = compressed_graph(&pres).unwrap();
        assert_eq!(b.universal(), 0);
        let g = expand(&b, 100).unwrap();
        assert_eq!(g, ZdGraph::complete(7));
    }

    #[test]
    fn expansion_counts() {
        let b = compressed_graph(&construct_with(Variant::A1, 2, 4).unwrap()).unwrap();
        let g = expand(&b, 1 << 12).unwrap();
        assert_eq!(g.vertex_count(), 511);
        assert!(expand(&b, 100).is_err());
        let k3 = BlowupGraph::new(3, vec![], &[]).unwrap();
        assert_eq!(expand(&k3, 10).unwrap(), ZdGraph::complete(3));
    }

    #[test]
    fn json_round_trip() {
        let b = BlowupGraph::new(1, vec![BlowupClass { mult: 2, clique: false }, BlowupClass { mult: 1, clique: true }], &[(1, 0)])
            .unwrap();
        let j = b.to_json();
        assert_eq!(j.cross, vec![[0, 1]]);
        let text = serde_json::to_string(&j).unwrap();
        let back: BlowupJson = serde_json::from_str(&text).unwrap();
        assert_eq!(BlowupGraph::from_json(&back).unwrap(), b);
    }
}
