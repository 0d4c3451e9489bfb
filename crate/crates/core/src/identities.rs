//! Polynomial identities in noncommuting variables `x1..x9` with integer
//! coefficients, checked on finite rings by substitution.

use std::collections::BTreeMap;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::ScAlgebra;
use crate::error::{Error, Result};
use crate::ring::{FiniteRing, RingTable};

/// Most substitutions an exhaustive check will evaluate.
pub const EXHAUSTIVE_CAP: u128 = 100_000_000;

/// A nonzero polynomial without constant term. Words are sequences of
/// zero-based variable indices; terms are sorted by (length, word).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Identity {
    terms: Vec<(i64, Vec<usize>)>,
}

type Poly = BTreeMap<Vec<usize>, i64>;

fn overflow(pos: usize) -> Error {
    Error::Parse { pos, msg: "coefficient overflow".into() }
}

fn poly_add(a: &mut Poly, b: &Poly, sign: i64, pos: usize) -> Result<()> {
    for (w, &c) in b {
        let e = a.entry(w.clone()).or_insert(0);
        *e = c.checked_mul(sign).and_then(|c| e.checked_add(c)).ok_or_else(|| overflow(pos))?;
    }
    a.retain(|_, c| *c != 0);
    Ok(())
}

fn poly_mul(a: &Poly, b: &Poly, pos: usize) -> Result<Poly> {
    let mut out = Poly::new();
    for (wa, &ca) in a {
        for (wb, &cb) in b {
            let mut w = wa.clone();
            w.extend_from_slice(wb);
            let e = out.entry(w).or_insert(0);
            *e = ca.checked_mul(cb).and_then(|c| e.checked_add(c)).ok_or_else(|| overflow(pos))?;
        }
    }
    out.retain(|_, c| *c != 0);
    Ok(out)
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse { pos: self.pos, msg: msg.into() })
    }

    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn number(&mut self) -> Result<i64> {
        let start = self.pos;
        while self.chars.get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        s.parse().map_err(|_| Error::Parse { pos: start, msg: format!("bad integer `{s}`") })
    }

    fn sign(c: char) -> Option<i64> {
        match c {
            '+' => Some(1),
            '-' | '−' => Some(-1),
            _ => None,
        }
    }

    fn expr(&mut self) -> Result<Poly> {
        let mut acc = Poly::new();
        let mut sign = 1;
        if let Some(s) = self.peek().and_then(Self::sign) {
            sign = s;
            self.pos += 1;
        }
        loop {
            let at = self.pos;
            let t = self.term()?;
            poly_add(&mut acc, &t, sign, at)?;
            match self.peek().and_then(Self::sign) {
                Some(s) => {
                    sign = s;
                    self.pos += 1;
                }
                None => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Poly> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some('*') => {
                    self.pos += 1;
                }
                Some(c) if c == 'x' || c == '(' || c.is_ascii_digit() => {}
                _ => return Ok(acc),
            }
            let at = self.pos;
            let f = self.factor()?;
            acc = poly_mul(&acc, &f, at)?;
        }
    }

    fn factor(&mut self) -> Result<Poly> {
        let base = self.atom()?;
        if self.peek() != Some('^') {
            return Ok(base);
        }
        self.pos += 1;
        self.skip_ws();
        let at = self.pos;
        if !self.chars.get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
            return self.err("expected exponent after `^`");
        }
        let k = self.number()?;
        if k < 1 {
            return Err(Error::Parse { pos: at, msg: "exponent must be positive".into() });
        }
        let mut out = base.clone();
        for _ in 1..k {
            out = poly_mul(&out, &base, at)?;
        }
        Ok(out)
    }

    fn atom(&mut self) -> Result<Poly> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(')') {
                    return self.err("expected `)`");
                }
                self.pos += 1;
                Ok(e)
            }
            Some('x') => {
                self.pos += 1;
                let at = self.pos;
                if !self.chars.get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
                    return self.err("expected variable index after `x`");
                }
                let i = self.number()?;
                if !(1..=9).contains(&i) {
                    return Err(Error::Parse { pos: at, msg: format!("variables are x1..x9, got x{i}") });
                }
                Ok(Poly::from([(vec![i as usize - 1], 1)]))
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.number()?;
                Ok(if n == 0 { Poly::new() } else { Poly::from([(vec![], n)]) })
            }
            Some(c) => self.err(format!("unexpected `{c}`")),
            None => self.err("unexpected end of input"),
        }
    }
}

impl Identity {
    pub fn parse(src: &str) -> Result<Self> {
        let mut p = Parser { chars: src.chars().collect(), pos: 0 };
        let poly = p.expr()?;
        if let Some(c) = p.peek() {
            return p.err(format!("unexpected `{c}`"));
        }
        Self::from_terms(poly.into_iter().map(|(w, c)| (c, w)))
    }

    /// Merges duplicate words and drops zero coefficients.
    pub fn from_terms(terms: impl IntoIterator<Item = (i64, Vec<usize>)>) -> Result<Self> {
        let mut poly = Poly::new();
        for (c, w) in terms {
            if w.is_empty() {
                return Err(Error::Parse { pos: 0, msg: "constant terms are not allowed".into() });
            }
            if w.iter().any(|&v| v > 8) {
                return Err(Error::Parse { pos: 0, msg: "variables are x1..x9".into() });
            }
            poly_add(&mut poly, &Poly::from([(w, c)]), 1, 0)?;
        }
        if poly.is_empty() {
            return Err(Error::Parse { pos: 0, msg: "polynomial is identically zero".into() });
        }
        let mut terms: Vec<(i64, Vec<usize>)> = poly.into_iter().map(|(w, c)| (c, w)).collect();
        terms.sort_by(|a, b| (a.1.len(), &a.1).cmp(&(b.1.len(), &b.1)));
        Ok(Self { terms })
    }

    /// `x1(x2 − x2^n)`.
    pub fn absorbing_power(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidArgument("exponent must be at least 2".into()));
        }
        let mut power = vec![0];
        power.extend(std::iter::repeat_n(1, n));
        Self::from_terms([(1, vec![0, 1]), (-1, power)])
    }

    pub fn terms(&self) -> &[(i64, Vec<usize>)] {
        &self.terms
    }

    /// Zero-based indices of the variables that occur, increasing.
    pub fn variables(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.terms.iter().flat_map(|(_, w)| w.iter().copied()).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// One more than the largest variable index that occurs.
    pub fn arity(&self) -> usize {
        self.variables().last().map_or(0, |&v| v + 1)
    }

    /// Least length of a word with nonzero coefficient.
    pub fn lower_degree(&self) -> usize {
        self.terms.iter().map(|(_, w)| w.len()).min().expect("identity has a term")
    }

    /// Every word uses every occurring variable exactly once.
    pub fn is_multilinear(&self) -> bool {
        let vars = self.variables();
        self.terms.iter().all(|(_, w)| {
            let mut s = w.clone();
            s.sort_unstable();
            s == vars
        })
    }

    /// Value of the polynomial at `values[v]` for each variable `v`.
    pub fn evaluate<R: FiniteRing + ?Sized>(&self, ring: &R, values: &[usize]) -> usize {
        self.terms.iter().fold(0, |acc, (c, w)| {
            let prod = w[1..].iter().fold(values[w[0]], |p, &v| ring.mul(p, values[v]));
            ring.add(acc, ring.scalar(*c, prod))
        })
    }
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (c, w)) in self.terms.iter().enumerate() {
            let (sign, mag) = if *c < 0 { ("-", c.unsigned_abs()) } else { ("+", *c as u64) };
            match (i, sign) {
                (0, "-") => f.write_str("-")?,
                (0, _) => {}
                _ => write!(f, " {sign} ")?,
            }
            if mag != 1 {
                write!(f, "{mag}")?;
            }
            let mut k = 0;
            while k < w.len() {
                let run = w[k..].iter().take_while(|&&v| v == w[k]).count();
                write!(f, "x{}", w[k] + 1)?;
                if run > 1 {
                    write!(f, "^{run}")?;
                }
                k += run;
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// Every substitution; requires `|R|^d ≤` [`EXHAUSTIVE_CAP`].
    Exhaustive,
    /// Substitutions of additive generators only; complete for
    /// multilinear identities.
    Multilinear,
    /// Seeded random substitutions; can only refute.
    Sampled { samples: usize, seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub holds: bool,
    /// Whether `holds == true` is a proof rather than absence of evidence.
    pub complete: bool,
    pub substitutions: u128,
    /// Element indices per variable (index 0 for absent variables).
    pub counterexample: Option<Vec<usize>>,
}

/// Checks whether `f` vanishes on `ring`. Exhaustive search reports the
/// lexicographically least counterexample, first variable most significant.
pub fn holds<R: FiniteRing + Sync + ?Sized>(ring: &R, f: &Identity, mode: Mode) -> Result<Verdict> {
    let vars = f.variables();
    let d = f.arity();
    let domain: Vec<usize> = match mode {
        Mode::Exhaustive => {
            let n = ring.order() as u128;
            let total = n.checked_pow(vars.len() as u32).filter(|&t| t <= EXHAUSTIVE_CAP && ring.order() != usize::MAX);
            if total.is_none() {
                return Err(Error::CapExceeded {
                    what: "substitutions (use multilinear or sampled mode)",
                    size: n.saturating_pow(vars.len() as u32),
                    cap: EXHAUSTIVE_CAP,
                });
            }
            (0..ring.order()).collect()
        }
        Mode::Multilinear => {
            if !f.is_multilinear() {
                return Err(Error::NotMultilinear);
            }
            ring.additive_generators()
        }
        Mode::Sampled { samples, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let order = ring.order();
            for s in 0..samples {
                let mut values = vec![0; d];
                for &v in &vars {
                    values[v] = rng.gen_range(0..order);
                }
                if f.evaluate(ring, &values) != 0 {
                    return Ok(Verdict { holds: false, complete: false, substitutions: s as u128 + 1, counterexample: Some(values) });
                }
            }
            return Ok(Verdict { holds: true, complete: false, substitutions: samples as u128, counterexample: None });
        }
    };
    let m = domain.len();
    let total = (m as u128).pow(vars.len() as u32);
    let search_rest = |first: Option<usize>| -> Option<Vec<usize>> {
        let rest = if first.is_some() { &vars[1..] } else { &vars[..] };
        let mut digits = vec![0usize; rest.len()];
        let mut values = vec![0usize; d];
        if let Some(a) = first {
            values[vars[0]] = domain[a];
        }
        loop {
            for (&v, &i) in rest.iter().zip(&digits) {
                values[v] = domain[i];
            }
            if f.evaluate(ring, &values) != 0 {
                return Some(values);
            }
            // odometer, last variable fastest
            let mut k = rest.len();
            loop {
                if k == 0 {
                    return None;
                }
                k -= 1;
                digits[k] += 1;
                if digits[k] < m {
                    break;
                }
                digits[k] = 0;
            }
        }
    };
    let counterexample = if m == 0 {
        None
    } else {
        (0..m).into_par_iter().find_map_first(|a| search_rest(Some(a)))
    };
    Ok(Verdict { holds: counterexample.is_none(), complete: true, substitutions: total, counterexample })
}

/// `x² = 0` on all of `A`, decided on the basis: it holds iff every
/// `e_i²` vanishes and every `e_i e_j + e_j e_i` vanishes.
pub fn squares_vanish(a: &ScAlgebra) -> bool {
    let f = a.field();
    (0..a.dim()).all(|i| {
        a.product(i, i).iter().all(|&c| c == 0)
            && (i + 1..a.dim()).all(|j| a.product(i, j).iter().zip(a.product(j, i)).all(|(&x, &y)| f.add(x, y) == 0))
    })
}

/// `(n − 1)(m − 1) + 1`.
pub fn direct_sum_degree(n: u64, m: u64) -> Result<u64> {
    if n < 2 || m < 2 {
        return Err(Error::InvalidArgument("exponents must be at least 2".into()));
    }
    (n - 1)
        .checked_mul(m - 1)
        .and_then(|k| k.checked_add(1))
        .ok_or_else(|| Error::InvalidArgument("degree overflows".into()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SumLemmaReport {
    pub n: u64,
    pub m: u64,
    pub degree: u64,
    pub conclusion: Verdict,
}

/// Given `A ⊨ x(y − yⁿ)` and `B ⊨ x(y − yᵐ)`, checks that `A ⊕ B` satisfies
/// `x(y − y^N)` with `N = (n − 1)(m − 1) + 1`. A failed premise is an error.
pub fn verify_sum_lemma(a: &RingTable, n: u64, b: &RingTable, m: u64) -> Result<SumLemmaReport> {
    let degree = direct_sum_degree(n, m)?;
    for (ring, k, side) in [(a, n, "first"), (b, m, "second")] {
        let f = Identity::absorbing_power(k as usize)?;
        if !holds(ring, &f, Mode::Exhaustive)?.holds {
            return Err(Error::PremiseFailure(format!("{side} summand does not satisfy {f}")));
        }
    }
    let sum = RingTable::direct_sum(a, b)?;
    let conclusion = holds(&sum, &Identity::absorbing_power(degree as usize)?, Mode::Exhaustive)?;
    Ok(SumLemmaReport { n, m, degree, conclusion })
}
