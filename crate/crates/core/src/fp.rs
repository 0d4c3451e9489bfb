//! Exact linear algebra over the prime field Z_p.
//!
//! Scalars are `u32` values kept in canonical form `[0, p)`. The modulus is
//! bounded by 2^15 so that a product of two scalars fits in a `u32` before
//! reduction.

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const MAX_MODULUS: u32 = 1 << 15;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct PrimeField {
    p: u32,
}

impl TryFrom<u32> for PrimeField {
    type Error = Error;
    fn try_from(p: u32) -> Result<Self> {
        PrimeField::new(p)
    }
}

impl From<PrimeField> for u32 {
    fn from(f: PrimeField) -> u32 {
        f.p
    }
}

impl PrimeField {
    pub fn new(p: u32) -> Result<Self> {
        if p >= MAX_MODULUS {
            return Err(Error::ModulusTooLarge(p));
        }
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Self { p })
    }

    #[inline]
    pub fn p(self) -> u32 {
        self.p
    }

    #[inline]
    pub fn reduce(self, x: i64) -> u32 {
        x.rem_euclid(self.p as i64) as u32
    }

    #[inline]
    pub fn add(self, a: u32, b: u32) -> u32 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(self, a: u32, b: u32) -> u32 {
        (a * b) % self.p
    }

    pub fn pow(self, mut base: u32, mut exp: u64) -> u32 {
        let mut acc = 1 % self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; `a` must be nonzero.
    pub fn inv(self, a: u32) -> u32 {
        debug_assert!(a != 0, "zero has no inverse");
        self.pow(a, (self.p - 2) as u64)
    }
}

impl fmt::Display for PrimeField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Z_{}", self.p)
    }
}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FpVector {
    field: PrimeField,
    coords: Vec<u32>,
}

impl FpVector {
    /// Builds a vector, reducing every coordinate into `[0, p)`.
    pub fn new(field: PrimeField, coords: impl IntoIterator<Item = i64>) -> Self {
        let coords = coords.into_iter().map(|c| field.reduce(c)).collect();
        Self { field, coords }
    }

    pub fn from_canonical(field: PrimeField, coords: Vec<u32>) -> Self {
        debug_assert!(coords.iter().all(|&c| c < field.p()));
        Self { field, coords }
    }

    pub fn zero(field: PrimeField, len: usize) -> Self {
        Self { field, coords: vec![0; len] }
    }

    pub fn unit(field: PrimeField, len: usize, i: usize) -> Self {
        let mut v = Self::zero(field, len);
        v.coords[i] = 1;
        v
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn coords(&self) -> &[u32] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<u32> {
        self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    pub fn scale(&self, s: u32) -> Self {
        let f = self.field;
        Self { field: f, coords: self.coords.iter().map(|&c| f.mul(c, s)).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        let f = self.field;
        let coords = self.coords.iter().zip(&other.coords).map(|(&a, &b)| f.add(a, b)).collect();
        Self { field: f, coords }
    }

    pub fn dot(&self, other: &Self) -> u32 {
        dot(self.field, &self.coords, &other.coords)
    }

    /// Scales so the first nonzero coordinate is 1 (projective normal form).
    pub fn normalized(&self) -> Option<Self> {
        let lead = *self.coords.iter().find(|&&c| c != 0)?;
        Some(self.scale(self.field.inv(lead)))
    }

    /// `true` when `other = λ·self` for some nonzero λ.
    pub fn is_proportional(&self, other: &Self) -> bool {
        match (self.normalized(), other.normalized()) {
            (Some(a), Some(b)) => a == b,
            _ => false,
        }
    }
}

pub(crate) fn dot(f: PrimeField, a: &[u32], b: &[u32]) -> u32 {
    let p = f.p() as u64;
    let s: u64 = a.iter().zip(b).map(|(&x, &y)| (x as u64) * (y as u64)).sum();
    (s % p) as u32
}

/// Dense row-major matrix over Z_p.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FpMatrix {
    field: PrimeField,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl FpMatrix {
    pub fn new(field: PrimeField, rows: usize, cols: usize, data: Vec<u32>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch { left: data.len(), right: rows * cols });
        }
        let data = data.into_iter().map(|c| c % field.p()).collect();
        Ok(Self { field, rows, cols, data })
    }

    pub fn from_ints(field: PrimeField, rows: &[Vec<i64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::DimensionMismatch { left: r.len(), right: cols });
            }
            data.extend(r.iter().map(|&c| field.reduce(c)));
        }
        Ok(Self { field, rows: rows.len(), cols, data })
    }

    pub fn from_rows(field: PrimeField, cols: usize, rows: &[Vec<u32>]) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::DimensionMismatch { left: r.len(), right: cols });
            }
            data.extend(r.iter().map(|&c| c % field.p()));
        }
        Ok(Self { field, rows: rows.len(), cols, data })
    }

    pub fn zeros(field: PrimeField, rows: usize, cols: usize) -> Self {
        Self { field, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(field: PrimeField, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    /// Uniformly random invertible square matrix (rejection sampling).
    pub fn random_invertible<R: Rng + ?Sized>(field: PrimeField, n: usize, rng: &mut R) -> Self {
        loop {
            let data = (0..n * n).map(|_| rng.gen_range(0..field.p())).collect();
            let m = Self { field, rows: n, cols: n, data };
            if m.rank() == n {
                return m;
            }
        }
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[u32] {
        &self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        self.data[i * self.cols + j] = v % self.field.p();
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vector(&self, i: usize) -> FpVector {
        FpVector::from_canonical(self.field, self.row(i).to_vec())
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j);
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch { left: self.cols, right: other.rows });
        }
        let p = self.field.p() as u64;
        let mut out = Self::zeros(self.field, self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let s: u64 = (0..self.cols).map(|k| self.get(i, k) as u64 * other.get(k, j) as u64).sum();
                out.data[i * other.cols + j] = (s % p) as u32;
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[u32]) -> Result<Vec<u32>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch { left: self.cols, right: v.len() });
        }
        Ok((0..self.rows).map(|i| dot(self.field, self.row(i), v)).collect())
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &Self) -> Result<Self> {
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch { left: self.cols, right: other.cols });
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(Self { field: self.field, rows: self.rows + other.rows, cols: self.cols, data })
    }

    /// Reduced row-echelon form and rank. The shape is preserved; zero rows
    /// sink to the bottom.
    pub fn rref(&self) -> (Self, usize) {
        let (m, pivots) = self.rref_with_pivots();
        (m, pivots.len())
    }

    pub fn rref_with_pivots(&self) -> (Self, Vec<usize>) {
        let f = self.field;
        let mut m = self.clone();
        let cols = m.cols;
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == m.rows {
                break;
            }
            let Some(piv) = (r..m.rows).find(|&i| m.get(i, c) != 0) else {
                continue;
            };
            if piv != r {
                for j in 0..cols {
                    m.data.swap(piv * cols + j, r * cols + j);
                }
            }
            let inv = f.inv(m.get(r, c));
            for j in c..cols {
                m.data[r * cols + j] = f.mul(m.data[r * cols + j], inv);
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let factor = m.get(i, c);
                if factor == 0 {
                    continue;
                }
                for j in c..cols {
                    let sub = f.mul(factor, m.data[r * cols + j]);
                    m.data[i * cols + j] = f.sub(m.data[i * cols + j], sub);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1
    }

    /// Right null space `{x : M x = 0}`.
    pub fn kernel(&self) -> Subspace {
        let f = self.field;
        let (r, pivots) = self.rref_with_pivots();
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![0u32; self.cols];
            v[free] = 1;
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(r.get(i, free));
            }
            basis.push(v);
        }
        Subspace::span(f, self.cols, &basis)
    }

    pub fn is_invertible(&self) -> Result<bool> {
        if self.rows != self.cols {
            return Err(Error::NotSquare { rows: self.rows, cols: self.cols });
        }
        Ok(self.rank() == self.rows)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&c| c == 0)
    }
}

impl fmt::Display for FpMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(u32::to_string).collect();
            writeln!(f, "[{}]", row.join(" "))?;
        }
        Ok(())
    }
}

/// A subspace of Z_p^n stored by its reduced row-echelon basis, so that two
/// equal subspaces compare equal structurally.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient: usize,
    basis: FpMatrix,
}

impl Subspace {
    pub fn span(field: PrimeField, ambient: usize, vectors: &[Vec<u32>]) -> Self {
        let m = FpMatrix::from_rows(field, ambient, vectors).expect("vector length must equal the ambient dimension");
        Self::row_space(&m)
    }

    pub fn row_space(m: &FpMatrix) -> Self {
        let (r, rank) = m.rref();
        let basis = FpMatrix { field: m.field, rows: rank, cols: m.cols, data: r.data[..rank * m.cols].to_vec() };
        Self { ambient: m.cols, basis }
    }

    pub fn zero(field: PrimeField, ambient: usize) -> Self {
        Self { ambient, basis: FpMatrix::zeros(field, 0, ambient) }
    }

    pub fn full(field: PrimeField, ambient: usize) -> Self {
        Self { ambient, basis: FpMatrix::identity(field, ambient) }
    }

    pub fn field(&self) -> PrimeField {
        self.basis.field
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.rows
    }

    pub fn basis(&self) -> &FpMatrix {
        &self.basis
    }

    pub fn basis_vectors(&self) -> impl Iterator<Item = &[u32]> {
        (0..self.dim()).map(move |i| self.basis.row(i))
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.field() != other.field() {
            return Err(Error::FieldMismatch { left: self.field().p(), right: other.field().p() });
        }
        if self.ambient != other.ambient {
            return Err(Error::DimensionMismatch { left: self.ambient, right: other.ambient });
        }
        Ok(())
    }

    pub fn contains(&self, v: &[u32]) -> Result<bool> {
        if v.len() != self.ambient {
            return Err(Error::DimensionMismatch { left: self.ambient, right: v.len() });
        }
        Ok(self.contains_unchecked(v))
    }

    /// Membership by reduction against the echelon basis.
    pub(crate) fn contains_unchecked(&self, v: &[u32]) -> bool {
        let f = self.field();
        let mut w = v.to_vec();
        for row in self.basis_vectors() {
            let pc = row.iter().position(|&c| c != 0).expect("echelon rows are nonzero");
            let factor = w[pc];
            if factor != 0 {
                for (x, &r) in w.iter_mut().zip(row) {
                    *x = f.sub(*x, f.mul(factor, r));
                }
            }
        }
        w.iter().all(|&c| c == 0)
    }

    pub fn sum(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        Ok(Self::row_space(&self.basis.vstack(&other.basis)?))
    }

    /// Complement with respect to the standard dot product.
    pub fn orthogonal(&self) -> Self {
        if self.dim() == 0 {
            return Self::full(self.field(), self.ambient);
        }
        self.basis.kernel()
    }

    pub fn intersection(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        self.orthogonal().sum(&other.orthogonal()).map(|s| s.orthogonal())
    }

    pub fn is_subspace_of(&self, other: &Self) -> Result<bool> {
        self.check_compatible(other)?;
        Ok(self.basis_vectors().all(|v| other.contains_unchecked(v)))
    }

    /// Every vector of the subspace, in base-p counting order of the
    /// coefficients on the echelon basis.
    pub fn vectors(&self) -> impl Iterator<Item = Vec<u32>> + '_ {
        let f = self.field();
        let p = f.p() as u64;
        let d = self.dim() as u32;
        let total = p.pow(d);
        (0..total).map(move |mut idx| {
            let mut v = vec![0u32; self.ambient];
            for row in self.basis_vectors() {
                let c = (idx % p) as u32;
                idx /= p;
                if c != 0 {
                    for (x, &r) in v.iter_mut().zip(row) {
                        *x = f.add(*x, f.mul(c, r));
                    }
                }
            }
            v
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn f(p: u32) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    #[test]
    fn field_rejects_composites_and_large_moduli() {
        assert_eq!(PrimeField::new(4), Err(Error::NotPrime(4)));
        assert_eq!(PrimeField::new(1), Err(Error::NotPrime(1)));
        assert!(matches!(PrimeField::new(40009), Err(Error::ModulusTooLarge(_))));
        assert!(PrimeField::new(32749).is_ok());
    }

    #[test]
    fn inverses() {
        for p in [2, 3, 5, 7, 101] {
            let f = f(p);
            for a in 1..p {
                assert_eq!(f.mul(a, f.inv(a)), 1);
            }
        }
    }

    #[test]
    fn rref_identity_and_zero() {
        let id = FpMatrix::identity(f(2), 3);
        assert_eq!(id.rref(), (id.clone(), 3));
        let z = FpMatrix::zeros(f(3), 2, 4);
        assert_eq!(z.rref(), (z.clone(), 0));
    }

    #[test]
    fn rref_dependent_rows() {
        let m = FpMatrix::from_ints(f(5), &[vec![1, 2], vec![2, 4]]).unwrap();
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn kernel_examples() {
        let z = FpMatrix::zeros(f(3), 4, 4);
        assert_eq!(z.kernel().dim(), 4);
        assert_eq!(FpMatrix::identity(f(3), 4).kernel().dim(), 0);
        // Exhaustively, the vectors of Z_2^2 killed by [1 1] are 00 and 11.
        let m = FpMatrix::from_ints(f(2), &[vec![1, 1]]).unwrap();
        let brute: Vec<Vec<u32>> = (0..4u32)
            .map(|i| vec![i & 1, i >> 1])
            .filter(|v| (v[0] + v[1]) % 2 == 0 && v.iter().any(|&c| c != 0))
            .collect();
        assert_eq!(brute, vec![vec![1, 1]]);
        assert_eq!(m.kernel(), Subspace::span(f(2), 2, &brute));
    }

    #[test]
    fn subspace_examples() {
        let f3 = f(3);
        let v = Subspace::span(f3, 3, &[vec![1, 2, 0], vec![0, 1, 1]]);
        assert_eq!(v.sum(&v).unwrap(), v);
        let e1 = Subspace::span(f3, 2, &[vec![1, 0]]);
        let e2 = Subspace::span(f3, 2, &[vec![0, 1]]);
        assert_eq!(e1.intersection(&e2).unwrap().dim(), 0);

        let f2 = f(2);
        let a = Subspace::span(f2, 2, &[vec![1, 1]]);
        let b = Subspace::span(f2, 2, &[vec![0, 1]]);
        let s = a.sum(&b).unwrap();
        // All four vectors of Z_2^2 are reachable.
        assert_eq!(s.vectors().count(), 4);
        assert_eq!(s, Subspace::full(f2, 2));
    }

    #[test]
    fn subspace_mismatch_errors() {
        let a = Subspace::zero(f(3), 2);
        let b = Subspace::zero(f(3), 3);
        assert!(matches!(a.sum(&b), Err(Error::DimensionMismatch { .. })));
        let c = Subspace::zero(f(5), 2);
        assert!(matches!(a.intersection(&c), Err(Error::FieldMismatch { .. })));
    }

    #[test]
    fn invertibility() {
        assert!(FpMatrix::identity(f(5), 3).is_invertible().unwrap());
        assert!(!FpMatrix::zeros(f(5), 3, 3).is_invertible().unwrap());
        let m = FpMatrix::from_ints(f(2), &[vec![1, 1], vec![1, 1]]).unwrap();
        assert!(!m.is_invertible().unwrap());
        let r = FpMatrix::zeros(f(2), 2, 3);
        assert_eq!(r.is_invertible(), Err(Error::NotSquare { rows: 2, cols: 3 }));
    }

    #[test]
    fn random_invertible_has_full_rank() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for p in [2, 3, 5] {
            let m = FpMatrix::random_invertible(f(p), 6, &mut rng);
            assert!(m.is_invertible().unwrap());
        }
    }

    #[test]
    fn projective_normalization() {
        let f5 = f(5);
        let v = FpVector::new(f5, [0, 3, 1]);
        assert_eq!(v.normalized().unwrap().coords(), &[0, 1, 2]);
        assert!(v.is_proportional(&v.scale(4)));
        assert!(!v.is_proportional(&FpVector::new(f5, [0, 1, 1])));
        assert!(FpVector::zero(f5, 3).normalized().is_none());
    }
}
