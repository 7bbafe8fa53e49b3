//! Generic rank of a matrix of truncated series.
//!
//! The rank is the size of the largest square minor whose determinant, as a
//! truncated series, has a nonzero coefficient. Candidate minors come from
//! exact evaluation at a few seeded rational points; the answer is then
//! confirmed by expanding the candidate determinant symbolically.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::linalg::Matrix;
use super::{MultiIndex, SeriesMap, TruncatedSeries};
use crate::number::GaussRational;

pub const RANK_TRIALS: usize = 5;
pub const DEFAULT_RANK_SEED: u64 = 0x5eed_c0de;

const POINT_HEIGHT: i64 = 100;
const MINOR_SEARCH_LIMIT: usize = 5000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RankStatus {
    /// A nonzero minor of the reported size was expanded symbolically and
    /// every larger size was excluded.
    Certified,
    /// The lower bound is certified but some minor of larger size was left
    /// unexamined.
    Probable,
}

/// A minor with a nonzero coefficient in its determinant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankCertificate {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    /// The graded-lex least monomial of the determinant.
    pub monomial: MultiIndex,
    pub coefficient: GaussRational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankResult {
    pub rank: usize,
    pub status: RankStatus,
    /// `None` exactly when the rank is 0.
    pub certificate: Option<RankCertificate>,
}

impl RankResult {
    pub fn is_certified(&self) -> bool {
        self.status == RankStatus::Certified
    }
}

/// Generic rank of the Jacobian of `f`, with the default sampling seed.
pub fn generic_rank(f: &SeriesMap) -> RankResult {
    generic_rank_with_seed(f, DEFAULT_RANK_SEED)
}

pub fn generic_rank_with_seed(f: &SeriesMap, seed: u64) -> RankResult {
    match f.jacobian() {
        Ok(j) => matrix_rank_with_seed(&j, seed),
        // order 0: no first-order information at all
        Err(_) => RankResult { rank: 0, status: RankStatus::Certified, certificate: None },
    }
}

/// Generic rank of a matrix of series sharing one variable set.
pub fn matrix_rank(m: &[Vec<TruncatedSeries>]) -> RankResult {
    matrix_rank_with_seed(m, DEFAULT_RANK_SEED)
}

pub fn matrix_rank_with_seed(m: &[Vec<TruncatedSeries>], seed: u64) -> RankResult {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    assert!(m.iter().all(|r| r.len() == cols), "ragged series matrix");
    let zero = RankResult { rank: 0, status: RankStatus::Certified, certificate: None };
    if m.iter().flatten().all(|e| e.is_zero()) {
        return zero;
    }
    let nvars = m.iter().flatten().next().map_or(0, |e| e.nvars());

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<(usize, Vec<usize>, Vec<usize>)> = None;
    for _ in 0..RANK_TRIALS {
        let point: Vec<GaussRational> = (0..nvars).map(|_| sample(&mut rng)).collect();
        let num = Matrix::from_rows(
            m.iter().map(|r| r.iter().map(|e| e.eval(&point).expect("arity checked")).collect()).collect(),
        );
        let sel_rows = num.greedy_row_basis();
        let sub = num.select(&sel_rows, &(0..cols).collect::<Vec<_>>());
        let sel_cols = sub.transpose().greedy_row_basis();
        if best.as_ref().map_or(true, |(r, _, _)| sel_rows.len() > *r) {
            best = Some((sel_rows.len(), sel_rows, sel_cols));
        }
    }
    let (upper, cand_rows, cand_cols) = best.expect("at least one trial");

    let mut probable = false;
    for size in (1..=upper.min(rows).min(cols)).rev() {
        if size == upper {
            if let Some(cert) = certify(m, &cand_rows, &cand_cols) {
                return RankResult { rank: size, status: status(probable), certificate: Some(cert) };
            }
        }
        let mut examined = 0;
        let mut found = None;
        'search: for rs in combinations(rows, size) {
            for cs in combinations(cols, size) {
                if examined == MINOR_SEARCH_LIMIT {
                    probable = true;
                    break 'search;
                }
                examined += 1;
                if let Some(cert) = certify(m, &rs, &cs) {
                    found = Some(cert);
                    break 'search;
                }
            }
        }
        if let Some(cert) = found {
            return RankResult { rank: size, status: status(probable), certificate: Some(cert) };
        }
    }
    RankResult { status: status(probable), ..zero }
}

fn status(probable: bool) -> RankStatus {
    if probable {
        RankStatus::Probable
    } else {
        RankStatus::Certified
    }
}

fn sample(rng: &mut ChaCha8Rng) -> GaussRational {
    let p = rng.gen_range(-POINT_HEIGHT..=POINT_HEIGHT);
    let q = rng.gen_range(1..=POINT_HEIGHT);
    GaussRational::ratio(p, q)
}

fn certify(m: &[Vec<TruncatedSeries>], rows: &[usize], cols: &[usize]) -> Option<RankCertificate> {
    let det = minor_determinant(m, rows, cols);
    let (monomial, coefficient) = det.leading_term()?;
    Some(RankCertificate {
        rows: rows.to_vec(),
        cols: cols.to_vec(),
        monomial: monomial.clone(),
        coefficient: coefficient.clone(),
    })
}

/// Determinant of the selected square minor, expanded over column subsets.
pub(crate) fn minor_determinant(m: &[Vec<TruncatedSeries>], rows: &[usize], cols: &[usize]) -> TruncatedSeries {
    assert_eq!(rows.len(), cols.len());
    let nvars = m[rows[0]][cols[0]].nvars();
    let order = rows.iter().flat_map(|&r| cols.iter().map(move |&c| m[r][c].order())).min().unwrap_or(0);
    let k = cols.len();
    // partial[mask] = signed sum over injective assignments of the first
    // popcount(mask) rows to the columns in mask
    let mut partial: BTreeMap<u32, TruncatedSeries> = BTreeMap::new();
    partial.insert(0, TruncatedSeries::one(nvars, order));
    for (depth, &r) in rows.iter().enumerate() {
        let mut next: BTreeMap<u32, TruncatedSeries> = BTreeMap::new();
        for (&mask, acc) in &partial {
            debug_assert_eq!(mask.count_ones() as usize, depth);
            for (j, &c) in cols.iter().enumerate() {
                if mask & (1 << j) != 0 || m[r][c].is_zero() {
                    continue;
                }
                let inversions = (mask >> (j + 1)).count_ones();
                let mut term = acc.mul_to(&m[r][c], order);
                if inversions % 2 == 1 {
                    term = -term;
                }
                let slot = next.entry(mask | (1 << j)).or_insert_with(|| TruncatedSeries::zero(nvars, order));
                *slot = &*slot + &term;
            }
        }
        partial = next;
    }
    partial.remove(&((1u32 << k) - 1)).unwrap_or_else(|| TruncatedSeries::zero(nvars, order))
}

/// k-subsets of 0..n in lexicographic order.
fn combinations(n: usize, k: usize) -> impl Iterator<Item = Vec<usize>> {
    let mut cur: Option<Vec<usize>> = (k <= n).then(|| (0..k).collect());
    std::iter::from_fn(move || {
        let out = cur.clone()?;
        let mut next = out.clone();
        let mut i = k;
        loop {
            if i == 0 {
                cur = None;
                break;
            }
            i -= 1;
            if next[i] < n - k + i {
                next[i] += 1;
                for t in i + 1..k {
                    next[t] = next[t - 1] + 1;
                }
                cur = Some(next);
                break;
            }
        }
        Some(out)
    })
}
