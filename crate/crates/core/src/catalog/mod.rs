//! Finite rings of `var⟨xyz = 0, x² = 0, 2x = 0⟩`.
//!
//! Such a ring is an `F_2`-space `R = V ⊕ R²` whose product is an
//! alternating map `V × V → R²` vanishing on `R²`. It is therefore determined
//! by `m = dim V` and the kernel `K` of the surjection `Λ²V → R²`, and two
//! rings are isomorphic iff their kernels lie in one `GL(m, 2)`-orbit.

pub mod gf2;
pub mod oracle;

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::ScAlgebra;
use crate::constructions::{degree2_monomials, GradedPresentation, Symmetry};
use crate::error::{Error, Result};
use crate::fp::{FpMatrix, PrimeField, Subspace};
use crate::identities::{holds, squares_vanish, Identity, Mode};
use crate::zdg::{blowup_isomorphic, compressed_graph, explicit_graph, fingerprint_blowup, graphs_isomorphic, ISO_CAP};

/// Orders above this are refused outright.
pub const MAX_ORDER_CAP: u64 = 128;
/// Orders above this are accepted with a warning.
pub const DEFAULT_MAX_ORDER: u64 = 64;

/// `(m, K)` with `K ⊆ Λ²(F_2^m)` stored as a reduced echelon basis over the
/// pair basis `e_i ∧ e_j`, `i < j`, in lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RingPresentation {
    m: usize,
    kernel: Vec<u64>,
}

impl RingPresentation {
    pub fn new(m: usize, kernel: &[u64]) -> Result<Self> {
        if m == 0 || m > 11 {
            return Err(Error::InvalidArgument(format!("generator count {m} out of range 1..=11")));
        }
        let n = m * (m - 1) / 2;
        if kernel.iter().any(|&v| n < 64 && v >> n != 0) {
            return Err(Error::InvalidArgument("kernel vector outside Λ²V".into()));
        }
        Ok(Self { m, kernel: gf2::rref(kernel) })
    }

    /// `dim R/R²`.
    pub fn m(&self) -> usize {
        self.m
    }

    /// `dim R²`.
    pub fn k(&self) -> usize {
        self.wedge_dim() - self.kernel.len()
    }

    pub fn wedge_dim(&self) -> usize {
        self.m * (self.m - 1) / 2
    }

    pub fn kernel(&self) -> &[u64] {
        &self.kernel
    }

    pub fn order(&self) -> u64 {
        1 << (self.m + self.k())
    }

    /// The alternating forms vanishing on `K`; a basis of `(Λ²V/K)*`.
    pub fn forms(&self) -> Vec<u64> {
        gf2::orthogonal(&self.kernel, self.wedge_dim())
    }

    /// The image of `K` under `Λ²g`, `g` given by basis images.
    pub fn transformed(&self, images: &[u64]) -> Result<Self> {
        if images.len() != self.m || images.iter().any(|&v| v >> self.m != 0) || gf2::rref(images).len() != self.m {
            return Err(Error::InvalidArgument("basis images are not independent".into()));
        }
        let pairs = gf2::wedge_pairs(self.m);
        let map = gf2::wedge_map(&pairs, images);
        let k: Vec<u64> = self.kernel.iter().map(|&v| gf2::apply(&map, v)).collect();
        Self::new(self.m, &k)
    }

    pub fn presentation(&self) -> Result<GradedPresentation> {
        let f = PrimeField::new(2)?;
        let n = self.wedge_dim();
        debug_assert_eq!(degree2_monomials(self.m, Symmetry::Alternating).len(), n);
        let rows: Vec<Vec<u32>> = self.kernel.iter().map(|&v| (0..n).map(|i| (v >> i & 1) as u32).collect()).collect();
        GradedPresentation::new(f, self.m, Symmetry::Alternating, Subspace::span(f, n, &rows))
    }

    /// Recovers `(m, K)` from an algebra, after checking that it satisfies
    /// `xyz = 0`, `x² = 0` and `2x = 0`.
    pub fn from_algebra(a: &ScAlgebra) -> Result<Self> {
        check_variety(a)?;
        let f = a.field();
        let square = a.square_ideal();
        // complement of R² spanned by standard basis vectors
        let mut v_basis: Vec<Vec<u32>> = Vec::new();
        let mut span = square.clone();
        for i in 0..a.dim() {
            let mut e = vec![0u32; a.dim()];
            e[i] = 1;
            if !span.contains(&e)? {
                span = span.sum(&Subspace::span(f, a.dim(), &[e.clone()]))?;
                v_basis.push(e);
            }
        }
        let m = v_basis.len();
        if m == 0 {
            return Err(Error::InvalidArgument("the zero ring has no presentation".into()));
        }
        let pairs = gf2::wedge_pairs(m);
        // column (i, j) holds u_i u_j; K is the kernel of this map Λ²V → R²
        let mut map = FpMatrix::zeros(f, a.dim(), pairs.len());
        for (col, &(i, j)) in pairs.iter().enumerate() {
            for (row, c) in a.mul_coords(&v_basis[i], &v_basis[j]).into_iter().enumerate() {
                map.set(row, col, c);
            }
        }
        let kernel: Vec<u64> = map
            .kernel()
            .basis_vectors()
            .map(|v| v.iter().enumerate().fold(0u64, |acc, (idx, &c)| acc | u64::from(c) << idx))
            .collect();
        Self::new(m, &kernel)
    }
}

fn check_variety(a: &ScAlgebra) -> Result<()> {
    let xyz = Identity::parse("x1x2x3")?;
    let two_x = Identity::parse("2x1")?;
    if !holds(a, &two_x, Mode::Multilinear)?.holds {
        return Err(Error::OutOfVariety("2x = 0 fails".into()));
    }
    if !squares_vanish(a) {
        return Err(Error::OutOfVariety("x² = 0 fails".into()));
    }
    if !holds(a, &xyz, Mode::Multilinear)?.holds {
        return Err(Error::OutOfVariety("xyz = 0 fails".into()));
    }
    Ok(())
}

/// For each vector `v` of `V`, the dimension of `{ω(v, ·) : ω ∈ W}`.
fn pairing_ranks(m: usize, forms: &[u64]) -> Vec<usize> {
    let pairs = gf2::wedge_pairs(m);
    (0..1u64 << m)
        .map(|v| {
            let functionals: Vec<u64> = forms
                .iter()
                .map(|&w| (0..m).fold(0u64, |acc, j| acc | (gf2::dot(w, gf2::wedge(&pairs, v, 1 << j)) as u64) << j))
                .collect();
            gf2::rref(&functionals).len()
        })
        .collect()
}

/// Ranks of the nonzero elements of a subspace of `Λ²V` (or of its dual),
/// each viewed as an alternating `m × m` matrix; sorted.
fn rank_profile(m: usize, basis: &[u64]) -> Vec<usize> {
    let pairs = gf2::wedge_pairs(m);
    let mut out: Vec<usize> = (1u64..1 << basis.len())
        .map(|sel| {
            let v = basis.iter().enumerate().filter(|&(i, _)| sel >> i & 1 == 1).fold(0, |a, (_, &b)| a ^ b);
            let mut rows = vec![0u64; m];
            for (idx, &(i, j)) in pairs.iter().enumerate() {
                if v >> idx & 1 == 1 {
                    rows[i] |= 1 << j;
                    rows[j] |= 1 << i;
                }
            }
            gf2::rref(&rows).len()
        })
        .collect();
    out.sort_unstable();
    out
}

/// Whether `r ≅ s`, by backtracking over images of the basis of `V`.
pub fn rings_isomorphic(r: &RingPresentation, s: &RingPresentation) -> bool {
    isomorphism(r, s).is_some()
}

/// Basis images `g(e_i)` with `Λ²g(K_r) = K_s`, if any.
pub fn isomorphism(r: &RingPresentation, s: &RingPresentation) -> Option<Vec<u64>> {
    if r.m != s.m || r.kernel.len() != s.kernel.len() {
        return None;
    }
    let m = r.m;
    let pairs = gf2::wedge_pairs(m);
    let (wr, ws) = (r.forms(), s.forms());
    let smaller = |k: &[u64], w: &[u64]| if k.len() <= w.len() { rank_profile(m, k) } else { rank_profile(m, w) };
    if smaller(&r.kernel, &wr) != smaller(&s.kernel, &ws) {
        return None;
    }
    let (inv_r, inv_s) = (pairing_ranks(m, &wr), pairing_ranks(m, &ws));
    let mut hr = inv_r.clone();
    let mut hs = inv_s.clone();
    hr.sort_unstable();
    hs.sort_unstable();
    if hr != hs {
        return None;
    }
    let mut images = Vec::with_capacity(m);
    if extend(&pairs, &wr, &ws, &inv_r, &inv_s, &mut images) {
        Some(images)
    } else {
        None
    }
}

/// `g` maps `K_r` onto `K_s` iff every form of `W_s` pulls back into `W_r`.
/// With only `images[..t]` fixed, the pulled-back form restricted to pairs
/// inside the first `t` coordinates must be a restriction of some form of
/// `W_r`.
fn extend(pairs: &[(usize, usize)], wr: &[u64], ws: &[u64], inv_r: &[usize], inv_s: &[usize], images: &mut Vec<u64>) -> bool {
    let m = inv_r.len().trailing_zeros() as usize;
    let t = images.len();
    if t > 0 {
        let inner: u64 = pairs.iter().enumerate().filter(|(_, &(i, j))| i < t && j < t).fold(0, |a, (idx, _)| a | 1 << idx);
        let restricted_r = gf2::rref(&wr.iter().map(|&w| w & inner).collect::<Vec<_>>());
        for &w in ws {
            let pulled = pairs.iter().enumerate().filter(|(_, &(i, j))| i < t && j < t).fold(0u64, |acc, (idx, &(i, j))| {
                acc | (gf2::dot(w, gf2::wedge(pairs, images[i], images[j])) as u64) << idx
            });
            if !gf2::contains(&restricted_r, pulled) {
                return false;
            }
        }
    }
    if t == m {
        return true;
    }
    let span = gf2::rref(images);
    for cand in 1u64..1 << m {
        if inv_s[cand as usize] != inv_r[1 << t] || gf2::contains(&span, cand) {
            continue;
        }
        images.push(cand);
        if extend(pairs, wr, ws, inv_r, inv_s, images) {
            return true;
        }
        images.pop();
    }
    false
}

#[derive(Clone, Debug, Serialize)]
pub struct CatalogEntry {
    pub order: u64,
    pub m: usize,
    pub k: usize,
    /// Canonical basis of `K`: the least reduced echelon basis in its orbit.
    pub kernel: Vec<u64>,
    pub fingerprint: String,
}

impl CatalogEntry {
    pub fn presentation(&self) -> RingPresentation {
        RingPresentation { m: self.m, kernel: self.kernel.clone() }
    }

    /// Entry for an arbitrary algebra of the variety. Its kernel basis is
    /// not reduced to the orbit representative.
    pub fn from_algebra(a: &ScAlgebra) -> Result<Self> {
        Self::build(RingPresentation::from_algebra(a)?)
    }

    fn build(p: RingPresentation) -> Result<Self> {
        let fingerprint = fingerprint_blowup(&compressed_graph(&p.presentation()?)?);
        Ok(Self { order: p.order(), m: p.m, k: p.k(), kernel: p.kernel, fingerprint })
    }
}

/// Generators of `GL(m, 2)` as basis images: a transposition, an `m`-cycle
/// and the transvection `e_1 ↦ e_1 + e_2`.
fn gl_generators(m: usize) -> Vec<Vec<u64>> {
    if m < 2 {
        return Vec::new();
    }
    let id: Vec<u64> = (0..m).map(|i| 1 << i).collect();
    let mut swap = id.clone();
    swap.swap(0, 1);
    let cycle: Vec<u64> = (0..m).map(|i| 1 << ((i + 1) % m)).collect();
    let mut transvection = id;
    transvection[0] = 0b11;
    vec![swap, cycle, transvection]
}

/// The `GL(m, 2)`-orbits of codimension-`k` subspaces of `Λ²(F_2^m)`, each
/// given by its least member.
pub fn kernel_orbits(m: usize, k: usize) -> Result<Vec<Vec<u64>>> {
    let n = m * (m - 1) / 2;
    if k > n {
        return Ok(Vec::new());
    }
    // enumerate W = K^⊥ of dimension k, the smaller side
    let count = gf2::gaussian_binomial(n, k).unwrap_or(u128::MAX);
    const SUBSPACE_CAP: u128 = 1 << 22;
    if count > SUBSPACE_CAP {
        return Err(Error::CapExceeded { what: "subspaces in one (m, k) cell", size: count, cap: SUBSPACE_CAP });
    }
    let all: Vec<Vec<u64>> = gf2::subspaces(n, k).into_iter().map(|w| gf2::orthogonal(&w, n)).collect();
    let index: HashMap<&[u64], usize> = all.iter().enumerate().map(|(i, s)| (s.as_slice(), i)).collect();
    let pairs = gf2::wedge_pairs(m);
    let maps: Vec<Vec<u64>> = gl_generators(m).iter().map(|g| gf2::wedge_map(&pairs, g)).collect();
    let mut seen = vec![false; all.len()];
    let mut reps = Vec::new();
    for start in 0..all.len() {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut queue = vec![start];
        let mut best = start;
        while let Some(i) = queue.pop() {
            if all[i] < all[best] {
                best = i;
            }
            for map in &maps {
                let image = gf2::rref(&all[i].iter().map(|&v| gf2::apply(map, v)).collect::<Vec<_>>());
                let j = index[image.as_slice()];
                if !seen[j] {
                    seen[j] = true;
                    queue.push(j);
                }
            }
        }
        reps.push(all[best].clone());
    }
    reps.sort();
    Ok(reps)
}

/// One entry per isomorphism class of nonzero rings of order at most
/// `max_order` in the variety.
pub fn enumerate_variety_rings(max_order: u64) -> Result<Vec<CatalogEntry>> {
    if !max_order.is_power_of_two() || max_order < 2 {
        return Err(Error::InvalidArgument(format!("max order {max_order} must be a power of two >= 2")));
    }
    if max_order > MAX_ORDER_CAP {
        return Err(Error::CapExceeded { what: "catalog order", size: max_order as u128, cap: MAX_ORDER_CAP as u128 });
    }
    if max_order > DEFAULT_MAX_ORDER {
        log::warn!("enumerating rings up to order {max_order}; this may take a long time");
    }
    let bits = max_order.trailing_zeros() as usize;
    let cells: Vec<(usize, usize)> =
        (1..=bits).flat_map(|m| (0..=bits - m).filter(move |&k| k <= m * (m - 1) / 2).map(move |k| (m, k))).collect();
    let per_cell: Vec<Vec<CatalogEntry>> = cells
        .par_iter()
        .map(|&(m, k)| {
            kernel_orbits(m, k)?.into_iter().map(|kernel| CatalogEntry::build(RingPresentation { m, kernel })).collect()
        })
        .collect::<Result<_>>()?;
    let mut out: Vec<CatalogEntry> = per_cell.into_iter().flatten().collect();
    out.sort_by(|a, b| (a.order, a.m, &a.kernel).cmp(&(b.order, b.m, &b.kernel)));
    Ok(out)
}

/// Class counts per order.
pub fn class_counts(entries: &[CatalogEntry]) -> BTreeMap<u64, usize> {
    let mut out = BTreeMap::new();
    for e in entries {
        *out.entry(e.order).or_insert(0) += 1;
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub first: usize,
    pub second: usize,
    pub fingerprint: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DeterminacyReport {
    pub order: u64,
    pub classes: usize,
    /// Same-order pairs sharing a fingerprint, each checked by a full
    /// graph isomorphism test.
    pub pairs_checked: usize,
    /// Indices (into the input) of rings with isomorphic graphs that are
    /// not isomorphic as rings.
    pub violations: Vec<Violation>,
}

/// Checks, among entries of the given order, that isomorphic zero-divisor
/// graphs come only from isomorphic rings. Entries are first checked
/// against the variety's identities.
pub fn determinacy_report(entries: &[CatalogEntry], order: u64) -> Result<DeterminacyReport> {
    let selected: Vec<usize> = (0..entries.len()).filter(|&i| entries[i].order == order).collect();
    let mut presentations = HashMap::new();
    let mut blowups = HashMap::new();
    for &i in &selected {
        let p = entries[i].presentation();
        let pres = p.presentation()?;
        check_variety(pres.algebra())?;
        blowups.insert(i, compressed_graph(&pres)?);
        presentations.insert(i, (p, pres));
    }
    let mut buckets: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
    for &i in &selected {
        buckets.entry(entries[i].fingerprint.as_str()).or_default().push(i);
    }
    let mut pairs_checked = 0;
    let mut violations = Vec::new();
    for (fp, members) in buckets {
        for (a, &i) in members.iter().enumerate() {
            for &j in &members[a + 1..] {
                pairs_checked += 1;
                let mut graphs_iso = blowup_isomorphic(&blowups[&i], &blowups[&j]);
                if order as usize <= ISO_CAP {
                    let gi = explicit_graph(presentations[&i].1.algebra(), ISO_CAP)?;
                    let gj = explicit_graph(presentations[&j].1.algebra(), ISO_CAP)?;
                    let explicit = graphs_isomorphic(&gi, &gj)?.is_some();
                    if explicit != graphs_iso {
                        return Err(Error::InvalidArgument(format!(
                            "internal error: compressed and explicit isomorphism tests disagree on entries {i} and {j}"
                        )));
                    }
                    graphs_iso = explicit;
                }
                if graphs_iso && !rings_isomorphic(&presentations[&i].0, &presentations[&j].0) {
                    violations.push(Violation { first: i, second: j, fingerprint: fp.to_string() });
                }
            }
        }
    }
    Ok(DeterminacyReport { order, classes: selected.len(), pairs_checked, violations })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cells() {
        // m = 1: only the zero-multiplication ring of order 2
        let entries = enumerate_variety_rings(2).unwrap();
        assert_eq!(entries.len(), 1);
        assert_eq!((entries[0].m, entries[0].k), (1, 0));
        // m = 2, k = 1, K = 0: the free ring on two generators, order 8
        let free = RingPresentation::new(2, &[]).unwrap();
        assert_eq!((free.k(), free.order()), (1, 8));
        let a = free.presentation().unwrap();
        assert_eq!(a.algebra().dim(), 3);
    }

    #[test]
    fn radical_dimension_separates() {
        // e1∧e2 is pair 0, e3∧e4 is pair 5 in Λ²(F_2^4)
        let r = RingPresentation::new(4, &[1]).unwrap();
        let s = RingPresentation::new(4, &[1 | 1 << 5]).unwrap();
        assert!(!rings_isomorphic(&r, &s));
        assert!(rings_isomorphic(&r, &r));
        let relabeled = r.transformed(&[0b0100, 0b1000, 0b0001, 0b0010]).unwrap();
        assert_ne!(relabeled, r);
        assert!(rings_isomorphic(&r, &relabeled));
        let g = isomorphism(&r, &relabeled).unwrap();
        assert_eq!(r.transformed(&g).unwrap(), relabeled);
    }

    #[test]
    fn from_algebra_recovers_presentation() {
        let r = RingPresentation::new(4, &[1 | 1 << 5, 1 << 2]).unwrap();
        let a = r.presentation().unwrap();
        let back = RingPresentation::from_algebra(a.algebra()).unwrap();
        assert_eq!((back.m(), back.k()), (4, 4));
        assert!(rings_isomorphic(&r, &back));
    }

    #[test]
    fn out_of_variety_is_rejected() {
        let n03 = ScAlgebra::zero_product(PrimeField::new(3).unwrap(), 1);
        assert!(matches!(RingPresentation::from_algebra(&n03), Err(Error::OutOfVariety(_))));
        let f2 = ScAlgebra::prime_field(PrimeField::new(2).unwrap());
        assert!(matches!(RingPresentation::from_algebra(&f2), Err(Error::OutOfVariety(_))));
    }

    #[test]
    fn duplicate_entries_share_a_bucket() {
        let entries = enumerate_variety_rings(32).unwrap();
        let mut doubled = entries.clone();
        doubled.extend(entries.iter().filter(|e| e.order == 32).cloned());
        let r = determinacy_report(&doubled, 32).unwrap();
        assert_eq!(r.classes, 8);
        assert_eq!(r.pairs_checked, 4);
        assert!(r.violations.is_empty());
    }

    #[test]
    fn bad_bounds() {
        assert!(enumerate_variety_rings(12).is_err());
        assert!(enumerate_variety_rings(1 << 10).is_err());
    }
}
