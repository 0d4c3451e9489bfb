//! Finite-dimensional associative algebras over Z_p given by structure
//! constants.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fp::{FpMatrix, PrimeField, Subspace};
use crate::ring::FiniteRing;

/// An associative Z_p-algebra with basis `e_0..e_{dim-1}`; the product
/// `e_i e_j` is the coordinate vector `table[(i*dim + j)*dim ..][..dim]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScAlgebra {
    field: PrimeField,
    dim: usize,
    labels: Vec<String>,
    table: Vec<u32>,
    sparse: Vec<Vec<(usize, u32)>>,
}

impl ScAlgebra {
    /// Validating constructor: rejects tables that are not associative on
    /// some basis triple.
    pub fn new(field: PrimeField, labels: Vec<String>, table: Vec<u32>) -> Result<Self> {
        let alg = Self::build(field, labels, table)?;
        alg.check_associativity()?;
        Ok(alg)
    }

    /// For tables that are associative by construction. Debug builds still
    /// verify.
    pub(crate) fn new_trusted(field: PrimeField, labels: Vec<String>, table: Vec<u32>) -> Self {
        let alg = Self::build(field, labels, table).expect("trusted table is well formed");
        debug_assert_eq!(alg.check_associativity(), Ok(()));
        alg
    }

    fn build(field: PrimeField, labels: Vec<String>, table: Vec<u32>) -> Result<Self> {
        let dim = labels.len();
        if table.len() != dim * dim * dim {
            return Err(Error::MalformedTable(format!("expected {} entries, got {}", dim * dim * dim, table.len())));
        }
        let table: Vec<u32> = table.into_iter().map(|c| c % field.p()).collect();
        let sparse = table
            .chunks(dim.max(1))
            .take(dim * dim)
            .map(|prod| prod.iter().enumerate().filter(|(_, &c)| c != 0).map(|(k, &c)| (k, c)).collect())
            .collect();
        Ok(Self { field, dim, labels, table, sparse })
    }

    /// Builds the table from a closure giving `e_i e_j`.
    pub fn from_fn(field: PrimeField, labels: Vec<String>, product: impl Fn(usize, usize) -> Vec<u32>) -> Result<Self> {
        let dim = labels.len();
        let mut table = Vec::with_capacity(dim * dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                let v = product(i, j);
                if v.len() != dim {
                    return Err(Error::DimensionMismatch { left: dim, right: v.len() });
                }
                table.extend(v);
            }
        }
        Self::new(field, labels, table)
    }

    /// `N_{0,p}^d`: the `d`-dimensional algebra with zero multiplication.
    pub fn zero_product(field: PrimeField, dim: usize) -> Self {
        let labels = (1..=dim).map(|i| format!("a{i}")).collect();
        Self::new_trusted(field, labels, vec![0; dim * dim * dim])
    }

    /// Z_p as a one-dimensional algebra over itself.
    pub fn prime_field(field: PrimeField) -> Self {
        Self::new_trusted(field, vec!["1".into()], vec![1])
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Coordinates of `e_i e_j`.
    pub fn product(&self, i: usize, j: usize) -> &[u32] {
        let start = (i * self.dim + j) * self.dim;
        &self.table[start..start + self.dim]
    }

    /// Number of elements, `p^dim`, if it fits.
    pub fn order(&self) -> Option<u128> {
        (self.field.p() as u128).checked_pow(self.dim as u32)
    }

    pub fn check_associativity(&self) -> Result<()> {
        let d = self.dim;
        let f = self.field;
        let mut lhs = vec![0u32; d];
        let mut rhs = vec![0u32; d];
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    lhs.fill(0);
                    rhs.fill(0);
                    // (e_i e_j) e_k
                    for &(l, c) in &self.sparse[i * d + j] {
                        for &(m, c2) in &self.sparse[l * d + k] {
                            lhs[m] = f.add(lhs[m], f.mul(c, c2));
                        }
                    }
                    // e_i (e_j e_k)
                    for &(l, c) in &self.sparse[j * d + k] {
                        for &(m, c2) in &self.sparse[i * d + l] {
                            rhs[m] = f.add(rhs[m], f.mul(c, c2));
                        }
                    }
                    if lhs != rhs {
                        return Err(Error::AssociativityViolation { i, j, k });
                    }
                }
            }
        }
        Ok(())
    }

    /// Bilinear extension of the table to coordinate vectors.
    pub fn mul_coords(&self, a: &[u32], b: &[u32]) -> Vec<u32> {
        let d = self.dim;
        let f = self.field;
        let p = f.p() as u64;
        let mut acc = vec![0u64; d];
        for (i, &ai) in a.iter().enumerate().filter(|(_, &c)| c != 0) {
            for (j, &bj) in b.iter().enumerate().filter(|(_, &c)| c != 0) {
                let s = (ai as u64 * bj as u64) % p;
                for &(k, c) in &self.sparse[i * d + j] {
                    acc[k] += s * c as u64;
                }
            }
        }
        acc.into_iter().map(|x| (x % p) as u32).collect()
    }

    pub fn element(&self, coords: Vec<u32>) -> Result<Element<'_>> {
        if coords.len() != self.dim {
            return Err(Error::DimensionMismatch { left: self.dim, right: coords.len() });
        }
        let coords = coords.into_iter().map(|c| c % self.field.p()).collect();
        Ok(Element { algebra: self, coords })
    }

    pub fn zero(&self) -> Element<'_> {
        Element { algebra: self, coords: vec![0; self.dim] }
    }

    pub fn basis_element(&self, i: usize) -> Element<'_> {
        let mut coords = vec![0; self.dim];
        coords[i] = 1;
        Element { algebra: self, coords }
    }

    /// Matrix of `x ↦ a x`.
    pub fn left_mul_matrix(&self, a: &[u32]) -> FpMatrix {
        self.mul_matrix(|e| self.mul_coords(a, e))
    }

    /// Matrix of `x ↦ x a`.
    pub fn right_mul_matrix(&self, a: &[u32]) -> FpMatrix {
        self.mul_matrix(|e| self.mul_coords(e, a))
    }

    fn mul_matrix(&self, image: impl Fn(&[u32]) -> Vec<u32>) -> FpMatrix {
        let d = self.dim;
        let mut m = FpMatrix::zeros(self.field, d, d);
        let mut e = vec![0u32; d];
        for col in 0..d {
            e[col] = 1;
            for (row, c) in image(&e).into_iter().enumerate() {
                m.set(row, col, c);
            }
            e[col] = 0;
        }
        m
    }

    /// `A²`, the span of all products `e_i e_j`.
    pub fn square_ideal(&self) -> Subspace {
        let rows: Vec<Vec<u32>> = (0..self.dim * self.dim)
            .map(|ij| self.table[ij * self.dim..(ij + 1) * self.dim].to_vec())
            .collect();
        Subspace::span(self.field, self.dim, &rows)
    }

    /// `ann(a) = {x : xa = ax = 0}`.
    pub fn annihilator(&self, a: &[u32]) -> Result<Subspace> {
        if a.len() != self.dim {
            return Err(Error::DimensionMismatch { left: self.dim, right: a.len() });
        }
        let stacked = self.right_mul_matrix(a).vstack(&self.left_mul_matrix(a))?;
        Ok(stacked.kernel())
    }

    pub fn is_ideal(&self, s: &Subspace) -> bool {
        if s.ambient() != self.dim || s.field() != self.field {
            return false;
        }
        let mut e = vec![0u32; self.dim];
        for v in s.basis_vectors() {
            for i in 0..self.dim {
                e[i] = 1;
                let ok = s.contains_unchecked(&self.mul_coords(&e, v)) && s.contains_unchecked(&self.mul_coords(v, &e));
                e[i] = 0;
                if !ok {
                    return false;
                }
            }
        }
        true
    }

    /// Smallest two-sided ideal containing `gens`.
    pub fn ideal_generated(&self, gens: &[Vec<u32>]) -> Result<Subspace> {
        for g in gens {
            if g.len() != self.dim {
                return Err(Error::DimensionMismatch { left: self.dim, right: g.len() });
            }
        }
        let mut span = Subspace::zero(self.field, self.dim);
        let mut queue: VecDeque<Vec<u32>> = gens.iter().cloned().collect();
        let mut e = vec![0u32; self.dim];
        while let Some(v) = queue.pop_front() {
            if span.contains_unchecked(&v) {
                continue;
            }
            span = span.sum(&Subspace::span(self.field, self.dim, std::slice::from_ref(&v)))?;
            for i in 0..self.dim {
                e[i] = 1;
                queue.push_back(self.mul_coords(&e, &v));
                queue.push_back(self.mul_coords(&v, &e));
                e[i] = 0;
            }
        }
        Ok(span)
    }

    /// Quotient by a two-sided ideal. Each ideal basis vector is normalized
    /// so that its highest-index nonzero coordinate is 1 and no other basis
    /// vector touches that coordinate; those coordinates are dropped and the
    /// remaining basis elements (in their original order) span the quotient.
    pub fn quotient(&self, ideal: &Subspace) -> Result<Quotient> {
        if ideal.ambient() != self.dim {
            return Err(Error::DimensionMismatch { left: self.dim, right: ideal.ambient() });
        }
        if ideal.field() != self.field {
            return Err(Error::FieldMismatch { left: self.field.p(), right: ideal.field().p() });
        }
        if !self.is_ideal(ideal) {
            return Err(Error::NotAnIdeal);
        }
        let projection = Projection::new(self.field, self.dim, ideal);
        let labels: Vec<String> = projection.kept.iter().map(|&i| self.labels[i].clone()).collect();
        let q = projection.kept.len();
        let mut table = Vec::with_capacity(q * q * q);
        for &a in &projection.kept {
            for &b in &projection.kept {
                table.extend(projection.apply(self.product(a, b)));
            }
        }
        let algebra = Self::new(self.field, labels, table)?;

        // The projection must be multiplicative on every basis pair of the
        // source algebra, including the eliminated ones.
        let images: Vec<Vec<u32>> = (0..self.dim)
            .map(|i| {
                let mut e = vec![0u32; self.dim];
                e[i] = 1;
                projection.apply(&e)
            })
            .collect();
        for i in 0..self.dim {
            for j in 0..self.dim {
                if projection.apply(self.product(i, j)) != algebra.mul_coords(&images[i], &images[j]) {
                    return Err(Error::NotAnIdeal);
                }
            }
        }
        Ok(Quotient { algebra, projection })
    }

    pub fn direct_sum(a: &Self, b: &Self) -> Result<Self> {
        if a.field != b.field {
            return Err(Error::FieldMismatch { left: a.field.p(), right: b.field.p() });
        }
        let d = a.dim + b.dim;
        let clash = a.labels.iter().any(|l| b.labels.contains(l));
        let labels: Vec<String> = if clash {
            a.labels.iter().map(|l| format!("L.{l}")).chain(b.labels.iter().map(|l| format!("R.{l}"))).collect()
        } else {
            a.labels.iter().chain(&b.labels).cloned().collect()
        };
        let mut table = vec![0u32; d * d * d];
        for i in 0..a.dim {
            for j in 0..a.dim {
                let start = (i * d + j) * d;
                table[start..start + a.dim].copy_from_slice(a.product(i, j));
            }
        }
        for i in 0..b.dim {
            for j in 0..b.dim {
                let start = ((a.dim + i) * d + a.dim + j) * d + a.dim;
                table[start..start + b.dim].copy_from_slice(b.product(i, j));
            }
        }
        Ok(Self::new_trusted(a.field, labels, table))
    }

    /// Base-p index of a coordinate vector, first coordinate least
    /// significant.
    pub fn index_of(&self, coords: &[u32]) -> usize {
        let p = self.field.p() as usize;
        coords.iter().rev().fold(0usize, |acc, &c| acc * p + c as usize)
    }

    pub fn coords_of(&self, mut idx: usize) -> Vec<u32> {
        let p = self.field.p() as usize;
        (0..self.dim)
            .map(|_| {
                let c = (idx % p) as u32;
                idx /= p;
                c
            })
            .collect()
    }

    pub fn format_coords(&self, coords: &[u32]) -> String {
        let terms: Vec<String> = coords
            .iter()
            .zip(&self.labels)
            .filter(|(&c, _)| c != 0)
            .map(|(&c, l)| if c == 1 { l.clone() } else { format!("{c}{l}") })
            .collect();
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join("+")
        }
    }

    pub fn to_json(&self) -> AlgebraJson {
        let mul = (0..self.dim)
            .map(|i| {
                (0..self.dim)
                    .map(|j| self.sparse[i * self.dim + j].iter().map(|&(k, c)| (k, c)).collect())
                    .collect()
            })
            .collect();
        AlgebraJson { p: self.field.p(), dim: self.dim, labels: self.labels.clone(), mul }
    }

    pub fn from_json(j: &AlgebraJson) -> Result<Self> {
        let field = PrimeField::new(j.p)?;
        let d = j.dim;
        if j.labels.len() != d {
            return Err(Error::DimensionMismatch { left: d, right: j.labels.len() });
        }
        if j.mul.len() != d || j.mul.iter().any(|r| r.len() != d) {
            return Err(Error::MalformedTable(format!("`mul` must be {d}x{d}")));
        }
        let mut table = vec![0u32; d * d * d];
        for (i, row) in j.mul.iter().enumerate() {
            for (jj, terms) in row.iter().enumerate() {
                for &(k, c) in terms {
                    if k >= d {
                        return Err(Error::MalformedTable(format!("basis index {k} out of range")));
                    }
                    let slot = &mut table[(i * d + jj) * d + k];
                    *slot = field.add(*slot, c % field.p());
                }
            }
        }
        Self::new(field, j.labels.clone(), table)
    }
}

impl FiniteRing for ScAlgebra {
    fn order(&self) -> usize {
        self.order().and_then(|n| usize::try_from(n).ok()).unwrap_or(usize::MAX)
    }

    fn add(&self, a: usize, b: usize) -> usize {
        let f = self.field;
        let s: Vec<u32> = self.coords_of(a).into_iter().zip(self.coords_of(b)).map(|(x, y)| f.add(x, y)).collect();
        self.index_of(&s)
    }

    fn neg(&self, a: usize) -> usize {
        let f = self.field;
        let s: Vec<u32> = self.coords_of(a).into_iter().map(|x| f.neg(x)).collect();
        self.index_of(&s)
    }

    fn mul(&self, a: usize, b: usize) -> usize {
        self.index_of(&self.mul_coords(&self.coords_of(a), &self.coords_of(b)))
    }

    fn additive_generators(&self) -> Vec<usize> {
        let p = self.field.p() as usize;
        (0..self.dim).map(|i| p.pow(i as u32)).collect()
    }

    fn additive_exponent(&self) -> u64 {
        self.field.p() as u64
    }

    fn describe(&self, a: usize) -> String {
        self.format_coords(&self.coords_of(a))
    }
}

/// Serialized form: `mul[i][j]` lists the nonzero `(k, c)` terms of `e_i e_j`
/// with `k` increasing and `c` in `[1, p)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraJson {
    pub p: u32,
    pub dim: usize,
    pub labels: Vec<String>,
    pub mul: Vec<Vec<Vec<(usize, u32)>>>,
}

#[derive(Clone, Debug)]
pub struct Element<'a> {
    algebra: &'a ScAlgebra,
    coords: Vec<u32>,
}

impl<'a> Element<'a> {
    pub fn coords(&self) -> &[u32] {
        &self.coords
    }

    pub fn algebra(&self) -> &'a ScAlgebra {
        self.algebra
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    fn same_parent(&self, other: &Self) -> Result<()> {
        if std::ptr::eq(self.algebra, other.algebra) {
            Ok(())
        } else {
            Err(Error::ParentMismatch)
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_parent(other)?;
        Ok(Self { algebra: self.algebra, coords: self.algebra.mul_coords(&self.coords, &other.coords) })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_parent(other)?;
        let f = self.algebra.field;
        let coords = self.coords.iter().zip(&other.coords).map(|(&a, &b)| f.add(a, b)).collect();
        Ok(Self { algebra: self.algebra, coords })
    }

    pub fn scale(&self, s: u32) -> Self {
        let f = self.algebra.field;
        Self { algebra: self.algebra, coords: self.coords.iter().map(|&c| f.mul(c, s)).collect() }
    }
}

impl PartialEq for Element<'_> {
    fn eq(&self, other: &Self) -> bool {
        std::ptr::eq(self.algebra, other.algebra) && self.coords == other.coords
    }
}

#[derive(Clone, Debug)]
pub struct Quotient {
    pub algebra: ScAlgebra,
    pub projection: Projection,
}

/// Linear projection `A → A/I` in the coordinates chosen by
/// [`ScAlgebra::quotient`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Projection {
    field: PrimeField,
    kept: Vec<usize>,
    reducers: Vec<(usize, Vec<u32>)>,
}

impl Projection {
    fn new(field: PrimeField, dim: usize, ideal: &Subspace) -> Self {
        // Echelon form with pivots at the highest index: reverse the columns,
        // row reduce, reverse back.
        let mut rev = FpMatrix::zeros(field, ideal.dim(), dim);
        for (r, v) in ideal.basis_vectors().enumerate() {
            for c in 0..dim {
                rev.set(r, dim - 1 - c, v[c]);
            }
        }
        let (red, pivots) = rev.rref_with_pivots();
        let reducers: Vec<(usize, Vec<u32>)> = pivots
            .iter()
            .enumerate()
            .map(|(r, &pc)| {
                let v: Vec<u32> = (0..dim).map(|c| red.get(r, dim - 1 - c)).collect();
                (dim - 1 - pc, v)
            })
            .collect();
        let mut dropped = vec![false; dim];
        for (c, _) in &reducers {
            dropped[*c] = true;
        }
        let kept = (0..dim).filter(|&c| !dropped[c]).collect();
        Self { field, kept, reducers }
    }

    /// Indices of the source basis elements that survive in the quotient.
    pub fn kept(&self) -> &[usize] {
        &self.kept
    }

    /// Source coordinates that were eliminated.
    pub fn eliminated(&self) -> Vec<usize> {
        self.reducers.iter().map(|(c, _)| *c).collect()
    }

    pub fn apply(&self, v: &[u32]) -> Vec<u32> {
        let f = self.field;
        let mut w = v.to_vec();
        for (pc, r) in &self.reducers {
            let factor = w[*pc];
            if factor != 0 {
                for (x, &y) in w.iter_mut().zip(r) {
                    *x = f.sub(*x, f.mul(factor, y));
                }
            }
        }
        self.kept.iter().map(|&c| w[c]).collect()
    }
}
