#![allow(dead_code)]

use crkit_core::parse::{parse_expr, parse_series_document, series_document};
use crkit_core::series::{invert_map, Matrix};
use crkit_core::vars::VarDecl;
use crkit_core::{GaussRational, MultiIndex, SeriesMap, TruncatedSeries};
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

pub const ORDER: u32 = 6;
pub const NVARS: usize = 2;

pub fn coeff() -> impl Strategy<Value = GaussRational> {
    (-3i64..=3, -3i64..=3, 1i64..=3)
        .prop_map(|(re, im, den)| &GaussRational::from_ints(re, im) * &GaussRational::ratio(1, den))
}

/// Sparse series in `nvars` variables with every term of degree in
/// `min_degree..=order`.
pub fn series(nvars: usize, order: u32, min_degree: u32, max_terms: usize) -> impl Strategy<Value = TruncatedSeries> {
    let per_var = (order / nvars as u32).max(1);
    prop::collection::vec((prop::collection::vec(0..=per_var, nvars), coeff()), 0..=max_terms).prop_map(move |terms| {
        let terms = terms
            .into_iter()
            .map(|(e, c)| (MultiIndex::new(e), c))
            .filter(|(m, _)| m.degree() >= min_degree && m.degree() <= order);
        TruncatedSeries::from_terms(nvars, order, terms).unwrap()
    })
}

pub fn small() -> impl Strategy<Value = TruncatedSeries> {
    series(NVARS, ORDER, 0, 6)
}

/// Origin-preserving map `C^2 -> C^2`.
pub fn map() -> impl Strategy<Value = SeriesMap> {
    prop::collection::vec(series(NVARS, ORDER, 1, 4), NVARS).prop_map(|c| SeriesMap::new(c).unwrap())
}

/// Origin-preserving map with invertible linear part.
pub fn invertible_map() -> impl Strategy<Value = SeriesMap> {
    (prop::collection::vec(coeff(), NVARS * NVARS), prop::collection::vec(series(NVARS, ORDER, 2, 4), NVARS))
        .prop_filter("singular linear part", |(lin, _)| {
            Matrix::from_rows(lin.chunks(NVARS).map(|r| r.to_vec()).collect()).determinant() != GaussRational::from(0)
        })
        .prop_map(|(lin, higher)| {
            let comps = higher
                .into_iter()
                .enumerate()
                .map(|(i, h)| {
                    let linear = TruncatedSeries::from_terms(
                        NVARS,
                        ORDER,
                        (0..NVARS).map(|j| (MultiIndex::unit(NVARS, j), lin[i * NVARS + j].clone())),
                    )
                    .unwrap();
                    &linear + &h
                })
                .collect();
            SeriesMap::new(comps).unwrap()
        })
}

pub fn ring_laws(a: &TruncatedSeries, b: &TruncatedSeries, c: &TruncatedSeries) -> Result<(), TestCaseError> {
    let zero = TruncatedSeries::zero(NVARS, ORDER);
    let one = TruncatedSeries::one(NVARS, ORDER);
    prop_assert_eq!(a + b, b + a);
    prop_assert_eq!(&(a + b) + c, a + &(b + c));
    prop_assert_eq!(a * b, b * a);
    prop_assert_eq!(&(a * b) * c, a * &(b * c));
    prop_assert_eq!(a * &(b + c), &(a * b) + &(a * c));
    prop_assert_eq!(a + &zero, a.clone());
    prop_assert_eq!(a * &one, a.clone());
    prop_assert_eq!(a + &-a, zero.clone());
    prop_assert_eq!(a - b, a + &-b);
    Ok(())
}

pub fn composition_associative(h: &TruncatedSeries, g: &SeriesMap, f: &SeriesMap) -> Result<(), TestCaseError> {
    let left = h.compose(g).unwrap().compose(f).unwrap();
    let right = h.compose(&g.compose(f).unwrap()).unwrap();
    prop_assert_eq!(left, right);
    Ok(())
}

pub fn chain_rule(g: &TruncatedSeries, f: &SeriesMap) -> Result<(), TestCaseError> {
    let gf = g.compose(f).unwrap();
    for j in 0..NVARS {
        let lhs = gf.derive(j).unwrap();
        let mut rhs = TruncatedSeries::zero(NVARS, lhs.order());
        for k in 0..NVARS {
            let outer = g.derive(k).unwrap().compose(f).unwrap();
            rhs = &rhs + &(&outer * &f.component(k).derive(j).unwrap());
        }
        prop_assert_eq!(lhs, rhs);
    }
    Ok(())
}

pub fn leibniz(a: &TruncatedSeries, b: &TruncatedSeries) -> Result<(), TestCaseError> {
    for j in 0..NVARS {
        let lhs = (a * b).derive(j).unwrap();
        let rhs = &(&a.derive(j).unwrap() * b) + &(a * &b.derive(j).unwrap());
        prop_assert_eq!(lhs, rhs);
    }
    Ok(())
}

pub fn inverse_round_trip(f: &SeriesMap) -> Result<(), TestCaseError> {
    let g = invert_map(f).unwrap();
    let id = SeriesMap::identity(NVARS, ORDER);
    prop_assert_eq!(f.compose(&g).unwrap(), id.clone());
    prop_assert_eq!(g.compose(f).unwrap(), id);
    Ok(())
}

pub fn conjugation(a: &TruncatedSeries, b: &TruncatedSeries) -> Result<(), TestCaseError> {
    prop_assert_eq!(a.conjugate().conjugate(), a.clone());
    prop_assert_eq!((a * b).conjugate(), &a.conjugate() * &b.conjugate());
    prop_assert_eq!((a + b).conjugate(), &a.conjugate() + &b.conjugate());
    Ok(())
}

pub fn round_trips(a: &TruncatedSeries) -> Result<(), TestCaseError> {
    let vars = VarDecl::parse("x:2").unwrap();
    let text = series_document("a", &vars, a).to_text();
    let (back_vars, back) = parse_series_document(&text).unwrap();
    prop_assert_eq!(back_vars, vars.clone());
    prop_assert_eq!(&back, a);
    prop_assert_eq!(series_document("a", &vars, &back).to_text(), text);
    prop_assert_eq!(&parse_expr(&a.to_expr(&vars), &vars, a.order()).unwrap(), a);
    Ok(())
}
