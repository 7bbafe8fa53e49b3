use num_traits::Zero;

use super::{check_shapes, ReflectionError};
use crate::geometry::{degeneracy_with_seed, is_minimal_with_seed, Degeneracy, Hypersurface};
use crate::number::GaussRational;
use crate::series::{
    generic_rank_with_seed, MultiIndex, RankResult, SeriesError, SeriesMap, TruncatedSeries, DEFAULT_RANK_SEED,
};

/// `sum h^k / k!` for `h(0) = 0`.
pub fn exp_series(h: &TruncatedSeries) -> Result<TruncatedSeries, SeriesError> {
    if !h.constant_term().is_zero() {
        return Err(SeriesError::NonzeroConstant);
    }
    let order = h.order();
    let mut sum = TruncatedSeries::one(h.nvars(), order);
    let mut power = TruncatedSeries::one(h.nvars(), order);
    for k in 1..=order {
        power = &power * h;
        if power.is_zero() {
            break;
        }
        sum = &sum + &power.scale(&GaussRational::factorial(k).inv().expect("nonzero"));
    }
    Ok(sum)
}

/// The witness `phi_alpha` of a degeneracy computation as a map in `omega`,
/// ordered as the witnesses with `phi_0` moved last.
pub fn witness_invariants(
    target: &Hypersurface,
    deg: &Degeneracy,
) -> Result<(SeriesMap, Vec<MultiIndex>), ReflectionError> {
    let n = target.n();
    let family = crate::geometry::phi_family(target, deg.cutoff)?;
    let zero = MultiIndex::zero(n - 1);
    let mut witnesses: Vec<MultiIndex> = deg.witnesses.iter().filter(|a| **a != zero).cloned().collect();
    if deg.witnesses.contains(&zero) {
        witnesses.push(zero);
    }
    let comps: Vec<TruncatedSeries> = witnesses.iter().map(|a| family[a].clone()).collect();
    let order = comps.iter().map(|c| c.order()).min().unwrap_or(target.order());
    Ok((SeriesMap::with_shape(n, order, comps)?, witnesses))
}

/// The part of `f` determined by the reflection identities: `g o f` for the
/// witness invariants `g` of the target.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialConvergence {
    /// Witness `phi_alpha` of the target, in `omega`, with `phi_0` last.
    pub g: SeriesMap,
    pub witnesses: Vec<MultiIndex>,
    /// `g o f`, in `z`.
    pub gf: SeriesMap,
    pub degeneracy: Degeneracy,
    pub rank: RankResult,
}

pub fn partial_convergence(
    f: &SeriesMap,
    source: &Hypersurface,
    target: &Hypersurface,
    cutoff: u32,
) -> Result<PartialConvergence, ReflectionError> {
    partial_convergence_with_seed(f, source, target, cutoff, DEFAULT_RANK_SEED)
}

pub fn partial_convergence_with_seed(
    f: &SeriesMap,
    source: &Hypersurface,
    target: &Hypersurface,
    cutoff: u32,
    seed: u64,
) -> Result<PartialConvergence, ReflectionError> {
    check_shapes(f, source, target)?;
    let n = source.n();
    if crate::series::Matrix::from_rows(f.linear_part()).determinant().is_zero() {
        return Err(ReflectionError::NotBiholomorphic);
    }
    let minimality = is_minimal_with_seed(source, seed)?;
    if !minimality.minimal || !minimality.rank.is_certified() {
        return Err(ReflectionError::SourceNotMinimal);
    }
    let deg = degeneracy_with_seed(target, cutoff, seed)?;
    if !deg.stabilized {
        return Err(ReflectionError::Unstabilized { cutoff });
    }
    let (g, witnesses) = witness_invariants(target, &deg)?;
    let rank = generic_rank_with_seed(&g, seed);
    let expected = n - deg.d;
    if rank.rank != expected {
        return Err(ReflectionError::RankMismatch { expected, found: rank.rank });
    }
    let gf = g.compose(f)?;
    Ok(PartialConvergence { g, witnesses, gf, degeneracy: deg, rank })
}

/// `g_j(omega) - (g_j o f)(z)` over `(z, omega)`: formal relations satisfied by
/// the graph of `f`.
pub fn transcendence_generators(pc: &PartialConvergence) -> Vec<TruncatedSeries> {
    let n = pc.g.source_nvars();
    let omega: Vec<usize> = (n..2 * n).collect();
    let z: Vec<usize> = (0..n).collect();
    pc.g.components()
        .iter()
        .zip(pc.gf.components())
        .map(|(g, gf)| &g.remap(2 * n, &omega).expect("in range") - &gf.remap(2 * n, &z).expect("in range"))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Containment {
    pub contained: bool,
    /// `b_i(x, f(x))` for each generator.
    pub residuals: Vec<TruncatedSeries>,
}

/// Does the graph of `f` lie in the zero set of the generators, each a series
/// in `(x_1..x_n, y_1..y_n)`?
pub fn formal_containment(f: &SeriesMap, generators: &[TruncatedSeries]) -> Result<Containment, ReflectionError> {
    let n = f.source_nvars();
    if f.target_nvars() != n {
        return Err(ReflectionError::MapShape { expected: n, components: f.target_nvars(), vars: n });
    }
    let graph = {
        let mut comps: Vec<TruncatedSeries> = (0..n).map(|k| TruncatedSeries::var(n, f.order(), k)).collect();
        comps.extend(f.components().iter().cloned());
        SeriesMap::with_shape(n, f.order(), comps)?
    };
    let mut residuals = Vec::with_capacity(generators.len());
    for (index, b) in generators.iter().enumerate() {
        if b.nvars() != 2 * n {
            return Err(ReflectionError::GeneratorArity { index, expected: 2 * n, got: b.nvars() });
        }
        residuals.push(b.compose(&graph)?);
    }
    Ok(Containment { contained: residuals.iter().all(|r| r.is_zero()), residuals })
}
