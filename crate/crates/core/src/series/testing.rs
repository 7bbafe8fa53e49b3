//! Small constructors shared by unit tests.

use super::{MultiIndex, TruncatedSeries};
use crate::number::GaussRational;

pub(crate) fn c(re: i64, im: i64) -> GaussRational {
    GaussRational::from_ints(re, im)
}

pub(crate) fn s(nvars: usize, order: u32, terms: &[(&[u32], GaussRational)]) -> TruncatedSeries {
    TruncatedSeries::from_terms(
        nvars,
        order,
        terms.iter().map(|(e, k)| (MultiIndex::new(e.iter().copied()), k.clone())),
    )
    .unwrap()
}
