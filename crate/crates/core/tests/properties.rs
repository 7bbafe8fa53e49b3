mod common;

use common::*;
use crkit_core::geometry::{degeneracy, from_defining};
use crkit_core::parse::parse_expr;
use crkit_core::reflection::formal_containment;
use crkit_core::series::generic_rank;
use crkit_core::vars::VarDecl;
use crkit_core::{corpus, SeriesMap};
use proptest::prelude::*;

proptest! {
    #[test]
    fn ring(a in small(), b in small(), c in small()) {
        ring_laws(&a, &b, &c)?;
    }

    #[test]
    fn associativity(h in small(), g in map(), f in map()) {
        composition_associative(&h, &g, &f)?;
    }

    #[test]
    fn chain(g in small(), f in map()) {
        chain_rule(&g, &f)?;
    }

    #[test]
    fn product_rule(a in small(), b in small()) {
        leibniz(&a, &b)?;
    }

    #[test]
    fn inverse(f in invertible_map()) {
        inverse_round_trip(&f)?;
    }

    #[test]
    fn conjugate(a in small(), b in small()) {
        conjugation(&a, &b)?;
    }

    #[test]
    fn serialization(a in small()) {
        round_trips(&a)?;
    }

    #[test]
    fn truncation_commutes_with_product(a in small(), b in small(), k in 0u32..=ORDER) {
        prop_assert_eq!((&a * &b).truncate(k), &a.truncate(k) * &b.truncate(k));
    }
}

fn sphere_vars() -> VarDecl {
    VarDecl::parse("z:2 w:2").unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Precomposing with an invertible map keeps the generic rank.
    #[test]
    fn rank_is_coordinate_free(p in invertible_map()) {
        let f = SeriesMap::new(vec![
            parse_expr("x1 + x2^2", &VarDecl::parse("x:2").unwrap(), ORDER).unwrap(),
            parse_expr("x1^2 + 2*x1*x2", &VarDecl::parse("x:2").unwrap(), ORDER).unwrap(),
        ]).unwrap();
        let degenerate = SeriesMap::new(vec![
            parse_expr("x1 + x2", &VarDecl::parse("x:2").unwrap(), ORDER).unwrap(),
            parse_expr("(x1 + x2)^2", &VarDecl::parse("x:2").unwrap(), ORDER).unwrap(),
        ]).unwrap();
        prop_assert_eq!(generic_rank(&f.compose(&p).unwrap()).rank, generic_rank(&f).rank);
        prop_assert_eq!(generic_rank(&degenerate.compose(&p).unwrap()).rank, 1);
    }

    /// Real perturbations `t + conj(t)` of the sphere stay hypersurfaces whose
    /// graph identity holds.
    #[test]
    fn perturbed_sphere_graph(t in series(4, ORDER, 2, 4)) {
        let base = parse_expr(corpus::SPHERE.defining, &sphere_vars(), ORDER).unwrap();
        let swap = t.conjugate().remap(4, &[2, 3, 0, 1]).unwrap();
        let rho = &(&base + &t) + &swap;
        prop_assume!(rho.coeff(&crkit_core::MultiIndex::new([0, 1, 0, 0])) != crkit_core::GaussRational::from(0));
        prop_assert!(from_defining(&rho, 2).is_ok());
    }

    /// Adding generators never turns a failed containment into a success.
    #[test]
    fn containment_monotone(extra in prop::collection::vec(series(4, ORDER, 0, 3), 0..3)) {
        let f = corpus::maps(ORDER).into_iter().find(|m| m.name == "bad_dilation").unwrap().map;
        let failing = parse_expr("w2 - z2", &sphere_vars(), ORDER).unwrap();
        let mut gens = vec![failing];
        prop_assert!(!formal_containment(&f, &gens).unwrap().contained);
        gens.extend(extra);
        prop_assert!(!formal_containment(&f, &gens).unwrap().contained);
    }
}

#[test]
fn degeneracy_monotone_in_cutoff() {
    for entry in corpus::HYPERSURFACES {
        let h = entry.build(8);
        let h = if h.is_normal() { h } else { crkit_core::geometry::normalize(&h).unwrap().0 };
        let ds: Vec<usize> = (1..=8).map(|c| degeneracy(&h, c).unwrap().d).collect();
        assert!(ds.windows(2).all(|w| w[1] <= w[0]), "{}: {ds:?}", entry.name);
        assert!(degeneracy(&h, 8).unwrap().stabilized, "{}", entry.name);
    }
}

#[test]
fn empty_generator_list_contains_everything() {
    let f = corpus::maps(ORDER).remove(0).map;
    let c = formal_containment(&f, &[]).unwrap();
    assert!(c.contained);
    assert!(c.residuals.is_empty());
}
