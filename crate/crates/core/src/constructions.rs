//! Relatively free two-step nilpotent algebras and their quotients.
//!
//! `F₁(p, n)` is free in `var⟨xyz = 0, x² = 0, px = 0⟩` and `F₂(p, n)` in
//! `var⟨xyz = 0, [x, y] = 0, px = 0⟩`. Both have basis
//! `x_1..x_n` followed by the degree-2 monomials in lexicographic order. The
//! `A`/`B` algebras divide out a single degree-2 relation.

use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{Projection, ScAlgebra};
use crate::error::{Error, Result};
use crate::fp::{FpMatrix, FpVector, PrimeField, Subspace};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Symmetry {
    /// `x_j x_i = -x_i x_j`, `x_i² = 0`.
    Alternating,
    /// `x_j x_i = x_i x_j`.
    Commutative,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Variant {
    A1,
    B1,
    A2,
    B2,
}

impl Variant {
    pub const ALL: [Variant; 4] = [Variant::A1, Variant::B1, Variant::A2, Variant::B2];

    pub fn symmetry(self) -> Symmetry {
        match self {
            Variant::A1 | Variant::B1 => Symmetry::Alternating,
            Variant::A2 | Variant::B2 => Symmetry::Commutative,
        }
    }

    /// The defining relation as `((i, j), coefficient)` terms on the
    /// monomials `x_i x_j`, `i < j`, zero-based.
    ///
    /// A: `x₃x₄ − x₁x₂`; B: `x₅x₆ − x₁x₂ − x₃x₄`.
    pub fn relation(self, n: usize) -> Result<Vec<((usize, usize), i64)>> {
        let (terms, needed): (Vec<((usize, usize), i64)>, usize) = match self {
            Variant::A1 | Variant::A2 => (vec![((2, 3), 1), ((0, 1), -1)], 4),
            Variant::B1 | Variant::B2 => (vec![((4, 5), 1), ((0, 1), -1), ((2, 3), -1)], 6),
        };
        if n < needed {
            return Err(Error::InvalidArgument(format!("{self} needs at least {needed} generators, got {n}")));
        }
        Ok(terms)
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Variant::A1 => "A1",
            Variant::B1 => "B1",
            Variant::A2 => "A2",
            Variant::B2 => "B2",
        };
        f.write_str(s)
    }
}

impl FromStr for Variant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "A1" => Ok(Variant::A1),
            "B1" => Ok(Variant::B1),
            "A2" => Ok(Variant::A2),
            "B2" => Ok(Variant::B2),
            _ => Err(Error::InvalidArgument(format!("unknown variant `{s}`"))),
        }
    }
}

/// A two-step graded algebra: generators `x_1..x_n`, the degree-2 monomials
/// allowed by the symmetry, and a subspace of relations among the monomials.
#[derive(Clone, Debug)]
pub struct GradedPresentation {
    field: PrimeField,
    n: usize,
    symmetry: Symmetry,
    monomials: Vec<(usize, usize)>,
    relations: Subspace,
    free: ScAlgebra,
    algebra: ScAlgebra,
    projection: Projection,
}

pub fn degree2_monomials(n: usize, symmetry: Symmetry) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in 0..n {
        let start = match symmetry {
            Symmetry::Alternating => i + 1,
            Symmetry::Commutative => i,
        };
        for j in start..n {
            out.push((i, j));
        }
    }
    out
}

fn monomial_index(n: usize, symmetry: Symmetry, i: usize, j: usize) -> usize {
    debug_assert!(i <= j);
    match symmetry {
        // rows 0..i contribute (n-1) + (n-2) + ... + (n-i)
        Symmetry::Alternating => i * n - i * (i + 1) / 2 + (j - i - 1),
        // rows 0..i contribute n + (n-1) + ... + (n-i+1)
        Symmetry::Commutative => i * n - i * i.saturating_sub(1) / 2 + (j - i),
    }
}

fn free_algebra(field: PrimeField, n: usize, symmetry: Symmetry) -> ScAlgebra {
    let monomials = degree2_monomials(n, symmetry);
    let dim = n + monomials.len();
    let mut labels: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
    labels.extend(monomials.iter().map(|&(i, j)| {
        if i == j {
            format!("x{}^2", i + 1)
        } else {
            format!("x{}x{}", i + 1, j + 1)
        }
    }));
    let lookup = |i: usize, j: usize| monomials.iter().position(|&m| m == (i, j)).expect("monomial exists");
    let mut table = vec![0u32; dim * dim * dim];
    for i in 0..n {
        for j in 0..n {
            let slot = (i * dim + j) * dim + n;
            match symmetry {
                Symmetry::Alternating if i < j => table[slot + lookup(i, j)] = 1,
                Symmetry::Alternating if i > j => table[slot + lookup(j, i)] = field.neg(1),
                Symmetry::Alternating => {}
                Symmetry::Commutative => table[slot + lookup(i.min(j), i.max(j))] = 1,
            }
        }
    }
    ScAlgebra::new_trusted(field, labels, table)
}

impl GradedPresentation {
    /// `relations` lives in the degree-2 space, in the coordinates of
    /// [`degree2_monomials`].
    pub fn new(field: PrimeField, n: usize, symmetry: Symmetry, relations: Subspace) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("need at least one generator".into()));
        }
        let monomials = degree2_monomials(n, symmetry);
        if relations.ambient() != monomials.len() {
            return Err(Error::DimensionMismatch { left: monomials.len(), right: relations.ambient() });
        }
        if relations.field() != field {
            return Err(Error::FieldMismatch { left: field.p(), right: relations.field().p() });
        }
        let free = free_algebra(field, n, symmetry);
        let embedded: Vec<Vec<u32>> = relations
            .basis_vectors()
            .map(|r| {
                let mut v = vec![0u32; n];
                v.extend_from_slice(r);
                v
            })
            .collect();
        let ideal = Subspace::span(field, free.dim(), &embedded);
        let q = free.quotient(&ideal)?;
        Ok(Self { field, n, symmetry, monomials, relations, free, algebra: q.algebra, projection: q.projection })
    }

    pub fn free(field: PrimeField, n: usize, symmetry: Symmetry) -> Result<Self> {
        let m = degree2_monomials(n, symmetry).len();
        Self::new(field, n, symmetry, Subspace::zero(field, m))
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn generators(&self) -> usize {
        self.n
    }

    pub fn symmetry(&self) -> Symmetry {
        self.symmetry
    }

    pub fn monomials(&self) -> &[(usize, usize)] {
        &self.monomials
    }

    pub fn relations(&self) -> &Subspace {
        &self.relations
    }

    pub fn free_algebra(&self) -> &ScAlgebra {
        &self.free
    }

    pub fn algebra(&self) -> &ScAlgebra {
        &self.algebra
    }

    pub fn projection(&self) -> &Projection {
        &self.projection
    }

    /// Dimension of the degree-2 part, which is `R²`.
    pub fn square_dim(&self) -> usize {
        self.algebra.dim() - self.n
    }

    /// Coordinates in the derived algebra of `Σ alpha_i x_i`.
    pub fn linear_element(&self, alpha: &[u32]) -> Vec<u32> {
        let mut v = alpha.to_vec();
        v.resize(self.algebra.dim(), 0);
        v
    }

    /// Matrix of `beta ↦ (Σ alpha_i x_i)(Σ beta_j x_j)` restricted to linear
    /// parts; columns indexed by generators, rows by the degree-2 basis.
    pub fn left_linear_map(&self, alpha: &[u32]) -> FpMatrix {
        self.linear_map(|e| self.algebra.mul_coords(&self.linear_element(alpha), e))
    }

    /// Matrix of `beta ↦ (Σ beta_j x_j)(Σ alpha_i x_i)`.
    pub fn right_linear_map(&self, alpha: &[u32]) -> FpMatrix {
        self.linear_map(|e| self.algebra.mul_coords(e, &self.linear_element(alpha)))
    }

    fn linear_map(&self, image: impl Fn(&[u32]) -> Vec<u32>) -> FpMatrix {
        let k = self.square_dim();
        let mut m = FpMatrix::zeros(self.field, k, self.n);
        let mut e = vec![0u32; self.algebra.dim()];
        for j in 0..self.n {
            e[j] = 1;
            let prod = image(&e);
            debug_assert!(prod[..self.n].iter().all(|&c| c == 0));
            for (r, &c) in prod[self.n..].iter().enumerate() {
                m.set(r, j, c);
            }
            e[j] = 0;
        }
        m
    }

    /// Whether `a·b = 0` for elements with linear parts `alpha`, `beta`
    /// (products ignore the degree-2 parts since `R³ = 0`).
    pub fn product_vanishes(&self, alpha: &FpVector, beta: &FpVector) -> Result<bool> {
        for v in [alpha, beta] {
            if v.len() != self.n {
                return Err(Error::DimensionMismatch { left: self.n, right: v.len() });
            }
            if v.field() != self.field {
                return Err(Error::FieldMismatch { left: self.field.p(), right: v.field().p() });
            }
            if v.is_zero() {
                return Err(Error::ZeroVector);
            }
        }
        let prod = self.algebra.mul_coords(&self.linear_element(alpha.coords()), &self.linear_element(beta.coords()));
        Ok(prod.iter().all(|&c| c == 0))
    }
}

/// `F₁(p, n)`.
pub fn free_m1(p: u32, n: usize) -> Result<GradedPresentation> {
    if n < 2 {
        return Err(Error::InvalidArgument("need n >= 2".into()));
    }
    GradedPresentation::free(PrimeField::new(p)?, n, Symmetry::Alternating)
}

/// `F₂(p, n)`. Construction is allowed at `p = 2`; only certificates for the
/// commutative family are restricted to odd `p`.
pub fn free_m2(p: u32, n: usize) -> Result<GradedPresentation> {
    if n < 2 {
        return Err(Error::InvalidArgument("need n >= 2".into()));
    }
    GradedPresentation::free(PrimeField::new(p)?, n, Symmetry::Commutative)
}

pub const DEFAULT_GENERATORS: usize = 6;

pub fn construct(variant: Variant, p: u32) -> Result<GradedPresentation> {
    construct_with(variant, p, DEFAULT_GENERATORS)
}

/// The variant's quotient on `n` generators (`n ≥ 4` for A, `n ≥ 6` for B).
pub fn construct_with(variant: Variant, p: u32, n: usize) -> Result<GradedPresentation> {
    let field = PrimeField::new(p)?;
    let symmetry = variant.symmetry();
    let rel = relation_vector(variant, field, n)?;
    let relations = Subspace::span(field, rel.len(), &[rel]);
    GradedPresentation::new(field, n, symmetry, relations)
}

fn relation_vector(variant: Variant, field: PrimeField, n: usize) -> Result<Vec<u32>> {
    let symmetry = variant.symmetry();
    let mut v = vec![0u32; degree2_monomials(n, symmetry).len()];
    for ((i, j), c) in variant.relation(n)? {
        v[monomial_index(n, symmetry, i, j)] = field.reduce(c);
    }
    Ok(v)
}

/// Prediction for `a·b = 0` with `a, b ∉ R²`: in the alternating family the
/// product vanishes exactly for proportional linear parts; in the
/// commutative family it never vanishes.
pub fn predicted_vanishing(variant: Variant, alpha: &FpVector, beta: &FpVector) -> bool {
    match variant.symmetry() {
        Symmetry::Alternating => alpha.is_proportional(beta),
        Symmetry::Commutative => false,
    }
}

/// Actual vanishing of the product in the variant's algebra.
pub fn product_criterion(variant: Variant, p: u32, alpha: &FpVector, beta: &FpVector) -> Result<bool> {
    construct(variant, p)?.product_vanishes(alpha, beta)
}

/// A degree-2 relation viewed as a bilinear form on the generator space:
/// skew-symmetric with zero diagonal for the alternating family; for the
/// commutative family `M_ij = M_ji = c_ij` off the diagonal and `M_ii = 2c_ii`
/// (twice the Gram matrix, so it is defined for every p and has the Gram
/// matrix's rank when p is odd).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationForm {
    pub kind: Symmetry,
    pub matrix: FpMatrix,
}

impl RelationForm {
    pub fn from_relation(field: PrimeField, n: usize, symmetry: Symmetry, coeffs: &[u32]) -> Result<Self> {
        let monomials = degree2_monomials(n, symmetry);
        if coeffs.len() != monomials.len() {
            return Err(Error::DimensionMismatch { left: monomials.len(), right: coeffs.len() });
        }
        let mut m = FpMatrix::zeros(field, n, n);
        for (&(i, j), &c) in monomials.iter().zip(coeffs) {
            match symmetry {
                Symmetry::Alternating => {
                    m.set(i, j, c);
                    m.set(j, i, field.neg(c));
                }
                Symmetry::Commutative if i == j => m.set(i, i, field.add(c, c)),
                Symmetry::Commutative => {
                    m.set(i, j, c);
                    m.set(j, i, c);
                }
            }
        }
        Ok(Self { kind: symmetry, matrix: m })
    }

    pub fn rank(&self) -> usize {
        self.matrix.rank()
    }

    /// `Qᵀ M Q`.
    pub fn congruent(&self, q: &FpMatrix) -> Result<Self> {
        let m = q.transpose().mul(&self.matrix)?.mul(q)?;
        Ok(Self { kind: self.kind, matrix: m })
    }

    pub fn satisfies_invariants(&self) -> bool {
        let f = self.matrix.field();
        let n = self.matrix.rows();
        (0..n).all(|i| {
            (0..n).all(|j| match self.kind {
                Symmetry::Alternating => self.matrix.get(i, j) == f.neg(self.matrix.get(j, i)) && (i != j || self.matrix.get(i, i) == 0),
                Symmetry::Commutative => self.matrix.get(i, j) == self.matrix.get(j, i),
            })
        })
    }
}

pub fn relation_form(variant: Variant, p: u32) -> Result<RelationForm> {
    let field = PrimeField::new(p)?;
    let n = DEFAULT_GENERATORS;
    RelationForm::from_relation(field, n, variant.symmetry(), &relation_vector(variant, field, n)?)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub first: Variant,
    pub second: Variant,
    pub p: u32,
    pub rank_first: usize,
    pub rank_second: usize,
    /// Ranks differ, so no generator change can carry one relation onto a
    /// multiple of the other.
    pub separated: bool,
    pub samples: usize,
    pub seed: u64,
    /// Sampled invertible `P` for which the obstruction row vector
    /// `w(P)·Pᵀ` vanishes.
    pub obstruction_solutions: usize,
    /// Sampled `P` with `P M₂ Pᵀ ∈ span(M₁)`, i.e. which would induce a
    /// homomorphism from the second algebra onto the first.
    pub relation_preserving: usize,
}

impl Certificate {
    /// Certified non-isomorphic: the rank invariant separates the pair and
    /// no sample contradicts the obstruction.
    pub fn certifies_noniso(&self) -> bool {
        self.separated && self.obstruction_solutions == 0 && self.relation_preserving == 0
    }
}

/// Row vector built from the last row of `P` whose product with `Pᵀ` would
/// have to vanish for an isomorphism to exist.
pub fn obstruction_vector(symmetry: Symmetry, p: &FpMatrix) -> Vec<u32> {
    let f = p.field();
    let r = |j: usize| p.get(5, j);
    match symmetry {
        Symmetry::Alternating => vec![r(1), f.neg(r(0)), r(3), f.neg(r(2)), f.neg(r(5)), r(4)],
        Symmetry::Commutative => vec![r(1), r(0), r(3), r(2), f.neg(r(5)), f.neg(r(4))],
    }
}

/// Separates two variants of the same family by relation-form rank and
/// replays the obstruction on `samples` seeded random invertible matrices.
pub fn certify_noniso(first: Variant, second: Variant, p: u32, samples: usize, seed: u64) -> Result<Certificate> {
    if first.symmetry() != second.symmetry() {
        return Err(Error::InvalidArgument(format!("{first} and {second} belong to different varieties")));
    }
    let symmetry = first.symmetry();
    if symmetry == Symmetry::Commutative && p == 2 {
        return Err(Error::EvenCharacteristicUnsupported);
    }
    let field = PrimeField::new(p)?;
    let form_first = relation_form(first, p)?;
    let form_second = relation_form(second, p)?;
    let rank_first = form_first.rank();
    let rank_second = form_second.rank();
    let target = Subspace::span(field, 36, &[form_first.matrix.data().to_vec()]);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut obstruction_solutions = 0;
    let mut relation_preserving = 0;
    for _ in 0..samples {
        let m = FpMatrix::random_invertible(field, DEFAULT_GENERATORS, &mut rng);
        let w = obstruction_vector(symmetry, &m);
        if m.mul_vec(&w)?.iter().all(|&c| c == 0) {
            obstruction_solutions += 1;
        }
        let image = m.mul(&form_second.matrix)?.mul(&m.transpose())?;
        if target.contains_unchecked(image.data()) {
            relation_preserving += 1;
        }
    }
    Ok(Certificate {
        first,
        second,
        p,
        rank_first,
        rank_second,
        separated: rank_first != rank_second,
        samples,
        seed,
        obstruction_solutions,
        relation_preserving,
    })
}
