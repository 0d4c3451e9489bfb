//! Bit-packed linear algebra over `F_2`: a vector is a `u64` mask, a
//! subspace is its reduced echelon basis.

/// Reduced echelon basis of the span: each row's pivot is its lowest set
/// bit, pivots are cleared from every other row, rows sorted by pivot.
pub fn rref(rows: &[u64]) -> Vec<u64> {
    let mut basis: Vec<u64> = Vec::new();
    for &r in rows {
        let mut v = r;
        for &b in &basis {
            if v & (b & b.wrapping_neg()) != 0 {
                v ^= b;
            }
        }
        if v == 0 {
            continue;
        }
        let pivot = v & v.wrapping_neg();
        for b in basis.iter_mut() {
            if *b & pivot != 0 {
                *b ^= v;
            }
        }
        basis.push(v);
    }
    basis.sort_unstable_by_key(|b| b.trailing_zeros());
    basis
}

pub fn reduce(basis: &[u64], mut v: u64) -> u64 {
    for &b in basis {
        if v & (b & b.wrapping_neg()) != 0 {
            v ^= b;
        }
    }
    v
}

pub fn contains(basis: &[u64], v: u64) -> bool {
    reduce(basis, v) == 0
}

pub fn dot(a: u64, b: u64) -> bool {
    (a & b).count_ones() % 2 == 1
}

/// Orthogonal complement in `F_2^n` under the standard dot product.
pub fn orthogonal(basis: &[u64], n: usize) -> Vec<u64> {
    let basis = rref(basis);
    let pivots: u64 = basis.iter().map(|b| b & b.wrapping_neg()).fold(0, |a, p| a | p);
    let mut out = Vec::new();
    for f in (0..n).filter(|&f| pivots >> f & 1 == 0) {
        let mut x = 1u64 << f;
        for b in &basis {
            if b >> f & 1 == 1 {
                x |= b & b.wrapping_neg();
            }
        }
        out.push(x);
    }
    rref(&out)
}

/// Number of `d`-dimensional subspaces of `F_2^n`.
pub fn gaussian_binomial(n: usize, d: usize) -> Option<u128> {
    if d > n {
        return Some(0);
    }
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..d {
        num = num.checked_mul((1u128 << (n - i)) - 1)?;
        den = den.checked_mul((1u128 << (i + 1)) - 1)?;
    }
    Some(num / den)
}

/// Every `d`-dimensional subspace of `F_2^n`, as reduced echelon bases.
pub fn subspaces(n: usize, d: usize) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    let mut pivots = Vec::with_capacity(d);
    choose_pivots(n, d, 0, &mut pivots, &mut out);
    out
}

fn choose_pivots(n: usize, d: usize, from: usize, pivots: &mut Vec<usize>, out: &mut Vec<Vec<u64>>) {
    if pivots.len() == d {
        let pivot_mask: u64 = pivots.iter().fold(0, |a, &p| a | 1 << p);
        // free positions of row r: non-pivot columns above its pivot
        let free: Vec<Vec<usize>> = pivots.iter().map(|&p| (p + 1..n).filter(|&c| pivot_mask >> c & 1 == 0).collect()).collect();
        let total: usize = free.iter().map(Vec::len).sum();
        for bits in 0u64..1 << total {
            let mut rows = Vec::with_capacity(d);
            let mut k = 0;
            for (r, &p) in pivots.iter().enumerate() {
                let mut row = 1u64 << p;
                for &c in &free[r] {
                    if bits >> k & 1 == 1 {
                        row |= 1 << c;
                    }
                    k += 1;
                }
                rows.push(row);
            }
            out.push(rows);
        }
        return;
    }
    for p in from..n {
        if n - p < d - pivots.len() {
            break;
        }
        pivots.push(p);
        choose_pivots(n, d, p + 1, pivots, out);
        pivots.pop();
    }
}

/// Pairs `(i, j)`, `i < j`, indexing the basis `e_i ∧ e_j` of `Λ²(F_2^m)`.
pub fn wedge_pairs(m: usize) -> Vec<(usize, usize)> {
    (0..m).flat_map(|i| (i + 1..m).map(move |j| (i, j))).collect()
}

/// `a ∧ b` in the basis of [`wedge_pairs`].
pub fn wedge(pairs: &[(usize, usize)], a: u64, b: u64) -> u64 {
    pairs.iter().enumerate().fold(0, |acc, (idx, &(s, t))| {
        let coef = (a >> s & b >> t ^ a >> t & b >> s) & 1;
        acc | coef << idx
    })
}

/// The matrix of `Λ²g` as column images, for `g` given by the images of
/// the basis vectors.
pub fn wedge_map(pairs: &[(usize, usize)], images: &[u64]) -> Vec<u64> {
    pairs.iter().map(|&(i, j)| wedge(pairs, images[i], images[j])).collect()
}

pub fn apply(columns: &[u64], v: u64) -> u64 {
    columns.iter().enumerate().filter(|&(i, _)| v >> i & 1 == 1).fold(0, |acc, (_, &c)| acc ^ c)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subspace_counts_match_gaussian_binomials() {
        for n in 0..7 {
            for d in 0..=n {
                let all = subspaces(n, d);
                assert_eq!(all.len() as u128, gaussian_binomial(n, d).unwrap(), "n={n} d={d}");
                assert!(all.iter().all(|s| rref(s) == *s));
            }
        }
    }

    #[test]
    fn orthogonal_complement() {
        let k = rref(&[0b011, 0b110]);
        let w = orthogonal(&k, 3);
        assert_eq!(w, vec![0b111]);
        assert!(k.iter().all(|&a| w.iter().all(|&b| !dot(a, b))));
        assert_eq!(orthogonal(&[], 2), vec![0b01, 0b10]);
    }

    #[test]
    fn wedge_is_alternating() {
        let pairs = wedge_pairs(4);
        for a in 0..16u64 {
            assert_eq!(wedge(&pairs, a, a), 0);
            for b in 0..16u64 {
                assert_eq!(wedge(&pairs, a, b), wedge(&pairs, b, a));
            }
        }
        assert_eq!(wedge(&pairs, 0b0001, 0b0010), 1);
    }
}
