//! Brute-force class counts, independent of the `(m, K)` description:
//! every alternating multiplication table on `F_2^d` is generated, those
//! with `xyz = 0` are kept, and `GL(d, 2)`-orbits are counted by marking.

use crate::error::{Error, Result};

/// Largest dimension the oracle will search (`2^24` tables at `d = 4`).
pub const ORACLE_MAX_DIM: usize = 4;

/// A table stores `e_i e_j` for `i < j` in pair order, `d` bits each.
fn pairs(d: usize) -> Vec<(usize, usize)> {
    (0..d).flat_map(|i| (i + 1..d).map(move |j| (i, j))).collect()
}

fn product(ps: &[(usize, usize)], table: &[u64], x: u64, y: u64) -> u64 {
    let mut out = 0;
    for (idx, &(i, j)) in ps.iter().enumerate() {
        // alternating in characteristic 2: e_j e_i = e_i e_j, e_i e_i = 0
        let c = (x >> i & y >> j ^ x >> j & y >> i) & 1;
        if c == 1 {
            out ^= table[idx];
        }
    }
    out
}

fn decode(d: usize, code: u64) -> Vec<u64> {
    let mask = (1u64 << d) - 1;
    (0..d * (d - 1) / 2).map(|idx| code >> (idx * d) & mask).collect()
}

fn encode(d: usize, table: &[u64]) -> u64 {
    table.iter().enumerate().fold(0, |acc, (idx, &v)| acc | v << (idx * d))
}

/// `(xy)z = 0` for all basis elements; `x(yz) = 0` follows by symmetry.
fn in_variety(d: usize, ps: &[(usize, usize)], table: &[u64]) -> bool {
    table.iter().all(|&u| (0..d).all(|l| product(ps, table, u, 1 << l) == 0))
}

/// Invertible `d × d` matrices over `F_2` as (images of the basis, inverse
/// as a lookup table on all vectors).
fn general_linear(d: usize) -> Vec<(Vec<u64>, Vec<u64>)> {
    let size = 1usize << d;
    let mut out = Vec::new();
    for code in 0u64..1 << (d * d) {
        let cols: Vec<u64> = (0..d).map(|i| code >> (i * d) & (size as u64 - 1)).collect();
        let apply = |v: u64| (0..d).filter(|&i| v >> i & 1 == 1).fold(0, |a, i| a ^ cols[i]);
        let mut inverse = vec![u64::MAX; size];
        for v in 0..size as u64 {
            let w = apply(v) as usize;
            if inverse[w] != u64::MAX {
                break;
            }
            inverse[w] = v;
        }
        if inverse.iter().all(|&v| v != u64::MAX) {
            out.push((cols, inverse));
        }
    }
    out
}

/// Number of isomorphism classes of rings of order `2^d` in the variety.
pub fn count_classes(d: usize) -> Result<usize> {
    if d == 0 || d > ORACLE_MAX_DIM {
        return Err(Error::CapExceeded { what: "oracle dimension", size: d as u128, cap: ORACLE_MAX_DIM as u128 });
    }
    let n = d * (d - 1) / 2;
    let total = 1u64 << (n * d);
    let group = general_linear(d);
    let ps = pairs(d);
    let mut seen = vec![false; total as usize];
    let mut classes = 0;
    for code in 0..total {
        if seen[code as usize] {
            continue;
        }
        let table = decode(d, code);
        if !in_variety(d, &ps, &table) {
            continue;
        }
        classes += 1;
        // (g·μ)(x, y) = g μ(g⁻¹x, g⁻¹y)
        for (cols, inverse) in &group {
            let apply = |v: u64| (0..d).filter(|&i| v >> i & 1 == 1).fold(0, |a, i| a ^ cols[i]);
            let image: Vec<u64> =
                ps.iter().map(|&(i, j)| apply(product(&ps, &table, inverse[1 << i], inverse[1 << j]))).collect();
            seen[encode(d, &image) as usize] = true;
        }
    }
    Ok(classes)
}
