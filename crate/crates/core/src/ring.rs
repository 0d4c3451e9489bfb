//! Finite rings addressed by element index.
//!
//! Every ring exposes its elements as indices `0..order()`, with index 0 the
//! zero element. Structure-constant algebras and explicit Cayley tables both
//! implement [`FiniteRing`], which is all the graph and identity code needs.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub trait FiniteRing {
    fn order(&self) -> usize;
    fn add(&self, a: usize, b: usize) -> usize;
    fn neg(&self, a: usize) -> usize;
    fn mul(&self, a: usize, b: usize) -> usize;
    /// Generators of the additive group.
    fn additive_generators(&self) -> Vec<usize>;
    /// Least `n > 0` with `n·x = 0` for every element.
    fn additive_exponent(&self) -> u64;
    fn describe(&self, a: usize) -> String;

    /// `n·a` for an integer `n`, by double-and-add.
    fn scalar(&self, n: i64, a: usize) -> usize {
        let exp = self.additive_exponent() as i64;
        let mut k = n.rem_euclid(exp) as u64;
        let mut acc = 0;
        let mut base = a;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add(acc, base);
            }
            base = self.add(base, base);
            k >>= 1;
        }
        acc
    }
}

/// Largest ring whose axioms [`RingTable::new`] will verify.
pub const TABLE_VERIFY_CAP: usize = 4096;

/// A finite ring given by its additive group `Z_{n_1} x ... x Z_{n_r}` and a
/// full multiplication table. Element indices are mixed-radix encodings of
/// the coordinate tuple, first coordinate least significant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingTable {
    orders: Vec<u64>,
    size: usize,
    mul: Vec<u32>,
}

#[derive(Serialize, Deserialize)]
pub struct RingTableJson {
    pub orders: Vec<u64>,
    pub mul: Vec<Vec<usize>>,
}

impl RingTable {
    /// Builds a ring from its Cayley table and checks distributivity and
    /// associativity. Distributivity is checked against additive generators,
    /// which together with the group structure covers all sums; once the
    /// product is bi-additive, associativity on generator triples implies it
    /// everywhere.
    pub fn new(orders: Vec<u64>, mul: Vec<Vec<usize>>) -> Result<Self> {
        let size = group_size(&orders)?;
        if size > TABLE_VERIFY_CAP {
            return Err(Error::CapExceeded { what: "ring table order", size: size as u128, cap: TABLE_VERIFY_CAP as u128 });
        }
        if mul.len() != size || mul.iter().any(|r| r.len() != size) {
            return Err(Error::MalformedTable(format!("multiplication table must be {size}x{size}")));
        }
        if mul.iter().flatten().any(|&x| x >= size) {
            return Err(Error::MalformedTable("product index out of range".into()));
        }
        let flat = mul.into_iter().flatten().map(|x| x as u32).collect();
        let ring = Self { orders, size, mul: flat };
        ring.verify_axioms()?;
        Ok(ring)
    }

    fn new_trusted(orders: Vec<u64>, mul: Vec<u32>) -> Self {
        let size = mul.len().isqrt();
        Self { orders, size, mul }
    }

    /// The residue ring Z_n.
    pub fn cyclic(n: u64) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidArgument(format!("Z_{n} needs n >= 2")));
        }
        let size = usize::try_from(n).map_err(|_| Error::InvalidArgument("modulus too large".into()))?;
        if size > TABLE_VERIFY_CAP {
            return Err(Error::CapExceeded { what: "ring table order", size: size as u128, cap: TABLE_VERIFY_CAP as u128 });
        }
        let mul = (0..size).flat_map(|a| (0..size).map(move |b| ((a * b) % size) as u32)).collect();
        Ok(Self::new_trusted(vec![n], mul))
    }

    /// Zero-multiplication ring on `Z_n` (for prime `n` this is `N_{0,n}`).
    pub fn zero_product(n: u64) -> Result<Self> {
        let size = n as usize;
        if !(2..=TABLE_VERIFY_CAP).contains(&size) {
            return Err(Error::InvalidArgument(format!("order {n} out of range")));
        }
        Ok(Self::new_trusted(vec![n], vec![0; size * size]))
    }

    /// Materializes any finite ring whose additive group is `Z_{orders[0]} x ...`
    /// in the same index encoding.
    pub fn materialize<R: FiniteRing + ?Sized>(ring: &R, orders: Vec<u64>) -> Result<Self> {
        let size = group_size(&orders)?;
        if size != ring.order() {
            return Err(Error::DimensionMismatch { left: size, right: ring.order() });
        }
        if size > TABLE_VERIFY_CAP {
            return Err(Error::CapExceeded { what: "ring table order", size: size as u128, cap: TABLE_VERIFY_CAP as u128 });
        }
        let mul = (0..size).flat_map(|a| (0..size).map(move |b| ring.mul(a, b) as u32)).collect();
        Ok(Self::new_trusted(orders, mul))
    }

    /// Componentwise ring `A ⊕ B`; `A` occupies the low-order coordinates.
    pub fn direct_sum(a: &Self, b: &Self) -> Result<Self> {
        let size = a.size * b.size;
        if size > TABLE_VERIFY_CAP {
            return Err(Error::CapExceeded { what: "direct sum order", size: size as u128, cap: TABLE_VERIFY_CAP as u128 });
        }
        let mut mul = vec![0u32; size * size];
        for x in 0..size {
            let (xa, xb) = (x % a.size, x / a.size);
            for y in 0..size {
                let (ya, yb) = (y % a.size, y / a.size);
                mul[x * size + y] = (a.mul(xa, ya) + a.size * b.mul(xb, yb)) as u32;
            }
        }
        let mut orders = a.orders.clone();
        orders.extend_from_slice(&b.orders);
        Ok(Self::new_trusted(orders, mul))
    }

    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    pub fn to_json(&self) -> RingTableJson {
        let mul = (0..self.size).map(|a| (0..self.size).map(|b| self.mul(a, b)).collect()).collect();
        RingTableJson { orders: self.orders.clone(), mul }
    }

    pub fn from_json(j: RingTableJson) -> Result<Self> {
        Self::new(j.orders, j.mul)
    }

    fn digits(&self, mut a: usize) -> Vec<u64> {
        self.orders
            .iter()
            .map(|&n| {
                let d = a as u64 % n;
                a /= n as usize;
                d
            })
            .collect()
    }

    fn index(&self, digits: &[u64]) -> usize {
        let mut idx = 0usize;
        for (d, n) in digits.iter().zip(&self.orders).rev() {
            idx = idx * (*n as usize) + *d as usize;
        }
        idx
    }

    fn verify_axioms(&self) -> Result<()> {
        let gens = self.additive_generators();
        for a in 0..self.size {
            for b in 0..self.size {
                for &g in &gens {
                    let bg = self.add(b, g);
                    if self.mul(a, bg) != self.add(self.mul(a, b), self.mul(a, g)) {
                        return Err(Error::RingAxiom { axiom: "left distributivity", a, b, c: g });
                    }
                    if self.mul(bg, a) != self.add(self.mul(b, a), self.mul(g, a)) {
                        return Err(Error::RingAxiom { axiom: "right distributivity", a, b, c: g });
                    }
                }
            }
        }
        for &x in &gens {
            for &y in &gens {
                for &z in &gens {
                    if self.mul(self.mul(x, y), z) != self.mul(x, self.mul(y, z)) {
                        return Err(Error::RingAxiom { axiom: "associativity", a: x, b: y, c: z });
                    }
                }
            }
        }
        Ok(())
    }
}

fn group_size(orders: &[u64]) -> Result<usize> {
    if orders.is_empty() || orders.iter().any(|&n| n < 2) {
        return Err(Error::InvalidArgument("additive orders must be >= 2".into()));
    }
    orders
        .iter()
        .try_fold(1usize, |acc, &n| acc.checked_mul(n as usize))
        .ok_or_else(|| Error::InvalidArgument("ring order overflows".into()))
}

impl FiniteRing for RingTable {
    fn order(&self) -> usize {
        self.size
    }

    fn add(&self, a: usize, b: usize) -> usize {
        let (da, db) = (self.digits(a), self.digits(b));
        let s: Vec<u64> = da.iter().zip(&db).zip(&self.orders).map(|((x, y), n)| (x + y) % n).collect();
        self.index(&s)
    }

    fn neg(&self, a: usize) -> usize {
        let d: Vec<u64> = self.digits(a).iter().zip(&self.orders).map(|(x, n)| (n - x) % n).collect();
        self.index(&d)
    }

    #[inline]
    fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.size + b] as usize
    }

    fn additive_generators(&self) -> Vec<usize> {
        let mut stride = 1usize;
        let mut gens = Vec::with_capacity(self.orders.len());
        for &n in &self.orders {
            gens.push(stride);
            stride *= n as usize;
        }
        gens
    }

    fn additive_exponent(&self) -> u64 {
        self.orders.iter().fold(1, |acc, &n| lcm(acc, n))
    }

    fn describe(&self, a: usize) -> String {
        let d = self.digits(a);
        if d.len() == 1 {
            d[0].to_string()
        } else {
            let parts: Vec<String> = d.iter().map(u64::to_string).collect();
            format!("({})", parts.join(","))
        }
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_ring_arithmetic() {
        let z6 = RingTable::cyclic(6).unwrap();
        assert_eq!(z6.add(4, 5), 3);
        assert_eq!(z6.mul(4, 5), 2);
        assert_eq!(z6.neg(2), 4);
        assert_eq!(z6.scalar(-1, 1), 5);
        assert_eq!(z6.additive_exponent(), 6);
        assert!(RingTable::new(z6.to_json().orders, z6.to_json().mul).is_ok());
    }

    #[test]
    fn broken_distributivity_is_rejected() {
        // Z_3 with 1·1 = 2 but everything else as in Z_3.
        let mut mul: Vec<Vec<usize>> = (0..3).map(|a| (0..3).map(|b| (a * b) % 3).collect()).collect();
        mul[1][1] = 2;
        let err = RingTable::new(vec![3], mul).unwrap_err();
        assert!(matches!(err, Error::RingAxiom { .. }), "{err:?}");
    }

    #[test]
    fn non_associative_table_is_rejected() {
        // Z_2 x Z_2 with generator products chosen bilinearly but
        // non-associatively: g0 g0 = g1, g1 g0 = g0, everything else 0.
        let gen_prod = |i: usize, j: usize| -> usize {
            match (i, j) {
                (0, 0) => 2,
                (1, 0) => 1,
                _ => 0,
            }
        };
        let mut mul = vec![vec![0usize; 4]; 4];
        for a in 0..4 {
            for b in 0..4 {
                let mut acc = 0usize;
                for i in 0..2 {
                    for j in 0..2 {
                        if (a >> i) & 1 == 1 && (b >> j) & 1 == 1 {
                            acc ^= gen_prod(i, j);
                        }
                    }
                }
                mul[a][b] = acc;
            }
        }
        let err = RingTable::new(vec![2, 2], mul).unwrap_err();
        assert!(matches!(err, Error::RingAxiom { axiom: "associativity", .. }), "{err:?}");
    }

    #[test]
    fn direct_sum_is_componentwise() {
        let z2 = RingTable::cyclic(2).unwrap();
        let z3 = RingTable::cyclic(3).unwrap();
        let s = RingTable::direct_sum(&z2, &z3).unwrap();
        assert_eq!(s.order(), 6);
        assert_eq!(s.additive_exponent(), 6);
        // (1,1) is the identity.
        let one = 1 + 2;
        for x in 0..6 {
            assert_eq!(s.mul(one, x), x);
        }
        assert_eq!(s.describe(one), "(1,1)");
    }
}
