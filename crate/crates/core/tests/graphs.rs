use zdg_core::constructions::{construct, construct_with, free_m1, free_m2, GradedPresentation, Variant};
use zdg_core::zdg::{
    blowup_isomorphic, compressed_graph, expand, explicit_graph, fingerprint, fingerprint_blowup, graphs_isomorphic,
    EXPLICIT_CAP,
};

fn cross_validate(pres: &GradedPresentation) {
    let explicit = explicit_graph(pres.algebra(), EXPLICIT_CAP).unwrap();
    let blowup = compressed_graph(pres).unwrap();
    assert_eq!(blowup.vertex_count(), explicit.vertex_count() as u128);
    let expanded = expand(&blowup, EXPLICIT_CAP).unwrap();
    let map = graphs_isomorphic(&explicit, &expanded).unwrap().expect("isomorphic");
    assert!(explicit.is_isomorphism(&expanded, &map));
    assert_eq!(fingerprint(&explicit), fingerprint_blowup(&blowup));
}

#[test]
fn compressed_matches_explicit_on_scaled_variants() {
    cross_validate(&construct_with(Variant::A1, 2, 4).unwrap());
    cross_validate(&free_m1(3, 3).unwrap());
    cross_validate(&free_m2(3, 2).unwrap());
    cross_validate(&free_m1(2, 3).unwrap());
}

#[test]
fn every_nonzero_element_is_a_vertex() {
    let pres = construct_with(Variant::A1, 2, 4).unwrap();
    let g = explicit_graph(pres.algebra(), EXPLICIT_CAP).unwrap();
    assert_eq!(g.vertex_count(), (1 << pres.algebra().dim()) - 1);
}

#[test]
fn corollary_pairs_have_isomorphic_graphs() {
    for p in [2, 3, 5] {
        let a = compressed_graph(&construct(Variant::A1, p).unwrap()).unwrap();
        let b = compressed_graph(&construct(Variant::B1, p).unwrap()).unwrap();
        assert!(blowup_isomorphic(&a, &b), "p = {p}");
        assert_eq!(fingerprint_blowup(&a), fingerprint_blowup(&b));
    }
    for p in [3, 5] {
        let a = compressed_graph(&construct(Variant::A2, p).unwrap()).unwrap();
        let b = compressed_graph(&construct(Variant::B2, p).unwrap()).unwrap();
        assert!(blowup_isomorphic(&a, &b), "p = {p}");
    }
    let a1 = compressed_graph(&construct(Variant::A1, 2).unwrap()).unwrap();
    let a2 = compressed_graph(&construct(Variant::A2, 3).unwrap()).unwrap();
    assert!(!blowup_isomorphic(&a1, &a2));
    let a13 = compressed_graph(&construct(Variant::A1, 3).unwrap()).unwrap();
    assert!(!blowup_isomorphic(&a13, &a2));
}
