use std::sync::OnceLock;

use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use zdg_core::catalog::{rings_isomorphic, RingPresentation};
use zdg_core::constructions::{construct, relation_form, GradedPresentation, RelationForm, Symmetry, Variant};
use zdg_core::identities::{holds, Identity, Mode};
use zdg_core::zdg::{
    blowup_isomorphic, compressed_graph, expand, fingerprint, fingerprint_blowup, graphs_isomorphic, BlowupClass,
};
use zdg_core::{FiniteRing, FpMatrix, PrimeField, RingTable, Subspace, ZdGraph};

fn config() -> Config {
    Config { cases: 10_000, rng_seed: RngSeed::Fixed(0x2d67_5eed), failure_persistence: None, ..Config::default() }
}

const PRIMES: [u32; 4] = [2, 3, 5, 7];

fn field() -> impl Strategy<Value = PrimeField> {
    prop::sample::select(PRIMES.to_vec()).prop_map(|p| PrimeField::new(p).unwrap())
}

fn matrix(max: usize) -> impl Strategy<Value = FpMatrix> {
    (field(), 1..=max, 1..=max).prop_flat_map(|(f, r, c)| {
        prop::collection::vec(0..f.p(), r * c).prop_map(move |d| FpMatrix::new(f, r, c, d).unwrap())
    })
}

/// Two subspaces of the same `Z_p^n`.
fn subspace_pair() -> impl Strategy<Value = (Subspace, Subspace)> {
    (field(), 1..=6usize).prop_flat_map(|(f, n)| {
        let vecs = move || prop::collection::vec(prop::collection::vec(0..f.p(), n), 0..=n);
        (vecs(), vecs()).prop_map(move |(a, b)| (Subspace::span(f, n, &a), Subspace::span(f, n, &b)))
    })
}

fn graph(max: usize) -> impl Strategy<Value = ZdGraph> {
    (1..=max).prop_flat_map(|n| {
        prop::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
            let mut edges = Vec::new();
            let mut k = 0;
            for u in 0..n {
                for v in u + 1..n {
                    if bits[k] {
                        edges.push((u, v));
                    }
                    k += 1;
                }
            }
            ZdGraph::from_edges(n, &edges).unwrap()
        })
    })
}

fn graph_and_perm(max: usize) -> impl Strategy<Value = (ZdGraph, Vec<usize>)> {
    graph(max).prop_flat_map(|g| {
        let n = g.vertex_count();
        (Just(g), Just((0..n).collect::<Vec<_>>()).prop_shuffle())
    })
}

/// The four constructions at small primes, built once.
fn constructions() -> &'static [(Variant, u32, GradedPresentation)] {
    static CELL: OnceLock<Vec<(Variant, u32, GradedPresentation)>> = OnceLock::new();
    CELL.get_or_init(|| {
        let mut out = Vec::new();
        for v in Variant::ALL {
            for p in [2, 3, 5] {
                if v.symmetry() == Symmetry::Commutative && p == 2 {
                    continue;
                }
                out.push((v, p, construct(v, p).unwrap()));
            }
        }
        out
    })
}

fn element(f: PrimeField, dim: usize) -> impl Strategy<Value = Vec<u32>> {
    prop::collection::vec(0..f.p(), dim)
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn rref_is_idempotent(m in matrix(6)) {
        let (r, rank) = m.rref();
        let (rr, rank2) = r.rref();
        prop_assert_eq!(&rr, &r);
        prop_assert_eq!(rank, rank2);
    }

    #[test]
    fn rank_equals_transpose_rank(m in matrix(6)) {
        prop_assert_eq!(m.rank(), m.transpose().rank());
    }

    #[test]
    fn kernel_is_exact(m in matrix(6)) {
        let k = m.kernel();
        prop_assert_eq!(k.dim() + m.rank(), m.cols());
        for v in k.basis_vectors() {
            prop_assert!(m.mul_vec(v).unwrap().iter().all(|&c| c == 0));
        }
    }

    #[test]
    fn sum_and_intersection_dimensions((u, v) in subspace_pair()) {
        let s = u.sum(&v).unwrap();
        let i = u.intersection(&v).unwrap();
        prop_assert_eq!(s.dim() + i.dim(), u.dim() + v.dim());
        prop_assert!(i.is_subspace_of(&u).unwrap() && u.is_subspace_of(&s).unwrap());
    }

    #[test]
    fn constructed_algebras_are_associative(
        (idx, a, b, c) in (0..constructions().len()).prop_flat_map(|i| {
            let (_, p, pres) = &constructions()[i];
            let f = PrimeField::new(*p).unwrap();
            let d = pres.algebra().dim();
            (Just(i), element(f, d), element(f, d), element(f, d))
        })
    ) {
        let alg = constructions()[idx].2.algebra();
        let left = alg.mul_coords(&alg.mul_coords(&a, &b), &c);
        let right = alg.mul_coords(&a, &alg.mul_coords(&b, &c));
        prop_assert_eq!(left, right);
    }

    #[test]
    fn products_depend_only_on_linear_parts(
        (idx, a, b) in (0..constructions().len()).prop_flat_map(|i| {
            let (_, p, pres) = &constructions()[i];
            let f = PrimeField::new(*p).unwrap();
            let d = pres.algebra().dim();
            (Just(i), element(f, d), element(f, d))
        })
    ) {
        let pres = &constructions()[idx].2;
        let n = pres.generators();
        let alg = pres.algebra();
        let la = pres.linear_element(&a[..n]);
        let lb = pres.linear_element(&b[..n]);
        prop_assert_eq!(alg.mul_coords(&a, &b), alg.mul_coords(&la, &lb));
    }

    #[test]
    fn random_quotients_are_associative(
        (f, n, sym, rels, x, y, z) in (field(), 2..=4usize, any::<bool>()).prop_flat_map(|(f, n, alt)| {
            let sym = if alt { Symmetry::Alternating } else { Symmetry::Commutative };
            let mons = zdg_core::constructions::degree2_monomials(n, sym).len();
            let dim = n + mons;
            (
                Just(f), Just(n), Just(sym),
                prop::collection::vec(element(f, mons), 0..=2),
                element(f, dim), element(f, dim), element(f, dim),
            )
        })
    ) {
        let mons = zdg_core::constructions::degree2_monomials(n, sym).len();
        let pres = GradedPresentation::new(f, n, sym, Subspace::span(f, mons, &rels)).unwrap();
        let alg = pres.algebra();
        prop_assert_eq!(alg.dim() + pres.relations().dim(), n + mons);
        let d = alg.dim();
        let (x, y, z) = (&x[..d], &y[..d], &z[..d]);
        prop_assert_eq!(alg.mul_coords(&alg.mul_coords(x, y), z), alg.mul_coords(x, &alg.mul_coords(y, z)));
    }

    #[test]
    fn form_rank_is_a_congruence_invariant(
        v in prop::sample::select(Variant::ALL.to_vec()),
        p in prop::sample::select(vec![3u32, 5, 7]),
        seed in any::<u64>(),
    ) {
        let form = relation_form(v, p).unwrap();
        let f = PrimeField::new(p).unwrap();
        let q = FpMatrix::random_invertible(f, 6, &mut ChaCha8Rng::seed_from_u64(seed));
        let moved = form.congruent(&q).unwrap();
        prop_assert_eq!(moved.rank(), form.rank());
        prop_assert!(moved.satisfies_invariants());
    }

    #[test]
    fn alternating_rank_is_even(f in field(), coeffs in prop::collection::vec(0u32..7, 15)) {
        let coeffs: Vec<u32> = coeffs.iter().map(|&c| c % f.p()).collect();
        let form = RelationForm::from_relation(f, 6, Symmetry::Alternating, &coeffs).unwrap();
        prop_assert_eq!(form.rank() % 2, 0);
        prop_assert!(form.satisfies_invariants());
    }

    #[test]
    fn witnesses_verify_on_relabeled_graphs((g, perm) in graph_and_perm(10)) {
        let h = g.permuted(&perm).unwrap();
        let w = graphs_isomorphic(&g, &h).unwrap().expect("relabeling is an isomorphism");
        prop_assert!(g.is_isomorphism(&h, &w));
        prop_assert_eq!(fingerprint(&g), fingerprint(&h));
        prop_assert!(graphs_isomorphic(&h, &g).unwrap().is_some());
    }

    #[test]
    fn isomorphism_is_symmetric(g in graph(7), h in graph(7)) {
        let gh = graphs_isomorphic(&g, &h).unwrap();
        let hg = graphs_isomorphic(&h, &g).unwrap();
        prop_assert_eq!(gh.is_some(), hg.is_some());
        if let Some(w) = gh {
            prop_assert!(g.is_isomorphism(&h, &w));
        }
        if fingerprint(&g) != fingerprint(&h) {
            prop_assert!(hg.is_none());
        }
        prop_assert!(graphs_isomorphic(&g, &g).unwrap().is_some());
    }

    #[test]
    fn blowup_fingerprint_matches_expansion(
        universal in 0u128..4,
        classes in prop::collection::vec((1u128..4, any::<bool>()), 1..5),
        cross in prop::collection::vec((0usize..4, 0usize..4), 0..6),
    ) {
        let k = classes.len();
        let cross: Vec<(usize, usize)> = cross.into_iter().filter(|&(i, j)| i < k && j < k && i != j).collect();
        let classes = classes.into_iter().map(|(mult, clique)| BlowupClass { mult, clique }).collect();
        let b = zdg_core::BlowupGraph::new(universal, classes, &cross).unwrap();
        let g = expand(&b, 1 << 10).unwrap();
        prop_assert_eq!(fingerprint_blowup(&b), fingerprint(&g));
        prop_assert!(blowup_isomorphic(&b, &b));
    }

    #[test]
    fn catalog_fingerprints_survive_basis_change(
        (m, kernel, images) in (2..=4usize).prop_flat_map(|m| {
            let n = m * (m - 1) / 2;
            (Just(m), prop::collection::vec(0u64..(1 << n), 0..n), prop::collection::vec(1u64..(1 << m), m))
        })
    ) {
        let r = RingPresentation::new(m, &kernel).unwrap();
        let Ok(s) = r.transformed(&images) else {
            // images were dependent
            return Ok(());
        };
        let fr = fingerprint_blowup(&compressed_graph(&r.presentation().unwrap()).unwrap());
        let fs = fingerprint_blowup(&compressed_graph(&s.presentation().unwrap()).unwrap());
        prop_assert_eq!(fr, fs);
        prop_assert!(rings_isomorphic(&r, &s));
    }

    #[test]
    fn identity_evaluation_is_deterministic(
        n in 2u64..=12,
        terms in prop::collection::vec((-3i64..=3, prop::collection::vec(0usize..3, 1..=3)), 1..=3),
        values in prop::collection::vec(0usize..12, 3),
    ) {
        let Ok(f) = Identity::from_terms(terms.clone()) else { return Ok(()) };
        let ring = RingTable::cyclic(n).unwrap();
        let values: Vec<usize> = values.iter().map(|&v| v % n as usize).collect();
        let got = f.evaluate(&ring, &values[..f.arity()]);
        prop_assert_eq!(got, f.evaluate(&ring, &values[..f.arity()]));
        // independent evaluation with integers mod n
        let expected = f.terms().iter().fold(0i64, |acc, (c, w)| {
            let prod = w.iter().fold(1i64, |x, &v| x * values[v] as i64 % n as i64);
            (acc + c * prod).rem_euclid(n as i64)
        });
        prop_assert_eq!(ring.describe(got), expected.to_string());
        if n <= 6 {
            prop_assert_eq!(holds(&ring, &f, Mode::Exhaustive).unwrap(), holds(&ring, &f, Mode::Exhaustive).unwrap());
        }
    }
}
