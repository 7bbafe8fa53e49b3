//! Formal solvers: implicit functions, map inversion, and Newton lifting of
//! truncated solutions of polynomial systems.

use num_traits::Zero;

use super::linalg::{solve_linear, LinearSolution, Matrix};
use super::rank::minor_determinant;
use super::{MultiIndex, SeriesError, SeriesMap, TruncatedSeries};
use crate::number::GaussRational;

/// Solves `rho = 0` for the variable `solve_var`.
///
/// Returns `S` in the remaining variables (original relative order) with
/// `S(0) = 0` and `rho(.., S, ..) = 0` through `rho.order()`.
pub fn implicit_solve(rho: &TruncatedSeries, solve_var: usize) -> Result<TruncatedSeries, SeriesError> {
    let n = rho.nvars();
    if solve_var >= n {
        return Err(SeriesError::VarOutOfRange { index: solve_var, nvars: n });
    }
    if !rho.constant_term().is_zero() {
        return Err(SeriesError::NonzeroConstant);
    }
    let slope = rho.coeff(&MultiIndex::unit(n, solve_var));
    let inv = slope.inv().ok_or(SeriesError::VanishingLinearCoefficient { var: solve_var })?;
    let order = rho.order();
    let rest = n - 1;
    let embed = |s: &TruncatedSeries| -> SeriesMap {
        let mut comps = Vec::with_capacity(n);
        let mut next = 0;
        for k in 0..n {
            if k == solve_var {
                comps.push(s.clone());
            } else {
                comps.push(TruncatedSeries::var(rest, order, next));
                next += 1;
            }
        }
        SeriesMap::with_shape(rest, order, comps).expect("shapes agree")
    };

    // Each pass fixes at least one more degree.
    let mut s = TruncatedSeries::zero(rest, order);
    for _ in 0..=order {
        let residual = rho.compose(&embed(&s))?;
        if residual.is_zero() {
            return Ok(s);
        }
        s = &s - &residual.scale(&inv);
    }
    debug_assert!(rho.compose(&embed(&s))?.is_zero());
    Ok(s)
}

/// Compositional inverse of a square origin-preserving map with invertible
/// linear part.
pub fn invert_map(f: &SeriesMap) -> Result<SeriesMap, SeriesError> {
    let n = f.source_nvars();
    if f.target_nvars() != n {
        return Err(SeriesError::NotSquare { source_nvars: n, target_nvars: f.target_nvars() });
    }
    f.check_origin_preserving()?;
    let order = f.order();
    let a_inv = Matrix::from_rows(f.linear_part()).inverse().ok_or(SeriesError::SingularJacobian)?;
    let apply_inv = |v: &[TruncatedSeries]| -> Vec<TruncatedSeries> {
        (0..n)
            .map(|i| (0..n).fold(TruncatedSeries::zero(n, order), |acc, j| &acc + &v[j].scale(&a_inv[(i, j)])))
            .collect()
    };
    let id = SeriesMap::identity(n, order);
    let mut g = SeriesMap::with_shape(n, order, apply_inv(id.components()))?;
    // pass p fixes degree p; only terms through p take part
    for p in 2..=order {
        let err: Vec<TruncatedSeries> = f
            .truncate(p)
            .compose(&g.truncate(p))?
            .components()
            .iter()
            .zip(id.components())
            .map(|(a, b)| (a - &b.truncate(p)).with_order(order))
            .collect();
        if err.iter().all(|e| e.is_zero()) {
            continue;
        }
        let corr = apply_inv(&err);
        let comps = g.components().iter().zip(&corr).map(|(a, b)| a - b).collect();
        g = SeriesMap::with_shape(n, order, comps)?;
    }
    Ok(g)
}

const MAX_LOOKAHEAD: u32 = 6;

/// Extends a truncated solution `y = g(x)` of `R(x, y) = 0` to `target_order`.
///
/// `R` has the `x` variables first, then one `y` variable per component of
/// `g`, and exactly as many components as `g`. Its stored terms are read as
/// an exact polynomial system. `g` may have constant terms.
///
/// Each new degree is found from the linearized system; when the Jacobian is
/// singular at the origin, a few higher degrees are carried along until the
/// new degree is pinned down.
pub fn newton_extend(r: &SeriesMap, g: &SeriesMap, target_order: u32) -> Result<SeriesMap, SeriesError> {
    let nx = g.source_nvars();
    let ny = g.target_nvars();
    if r.source_nvars() != nx + ny {
        return Err(SeriesError::ArityMismatch { expected: nx + ny, got: r.source_nvars() });
    }
    if r.target_nvars() != ny {
        return Err(SeriesError::NotSquare { source_nvars: ny, target_nvars: r.target_nvars() });
    }
    let seed_order = g.order();
    let poly_order = target_order.max(seed_order) + MAX_LOOKAHEAD + 1;
    let system: Vec<TruncatedSeries> = r.components().iter().map(|c| c.with_order(poly_order)).collect();
    let jac: Vec<Vec<TruncatedSeries>> = system
        .iter()
        .map(|c| (0..ny).map(|j| c.derive(nx + j)).collect::<Result<Vec<_>, _>>())
        .collect::<Result<_, _>>()?;

    let along = |cur: &[TruncatedSeries], s: &TruncatedSeries, order: u32| -> TruncatedSeries {
        let mut comps: Vec<TruncatedSeries> = (0..nx).map(|k| TruncatedSeries::var(nx, order, k)).collect();
        comps.extend(cur.iter().map(|c| c.with_order(order)));
        let v = SeriesMap::with_shape(nx, order, comps).expect("shapes agree");
        s.compose_polynomial(&v, order).expect("arity checked")
    };

    let seed: Vec<TruncatedSeries> = g.components().to_vec();
    for c in &system {
        if let Some(degree) = along(&seed, c, seed_order).valuation() {
            return Err(SeriesError::Inconsistent { degree });
        }
    }
    let jac_seed: Vec<Vec<TruncatedSeries>> =
        jac.iter().map(|row| row.iter().map(|e| along(&seed, e, seed_order)).collect()).collect();
    let all: Vec<usize> = (0..ny).collect();
    if ny > 0 && minor_determinant(&jac_seed, &all, &all).is_zero() {
        return Err(SeriesError::DegenerateJacobian { order: seed_order });
    }
    if target_order <= seed_order {
        return Ok(g.truncate(target_order));
    }

    let mut cur = seed;
    for d in seed_order + 1..=target_order {
        let mut accepted = None;
        for look in 0..=MAX_LOOKAHEAD.min(d - 1) {
            let top = d + look;
            let residual: Vec<TruncatedSeries> = system.iter().map(|c| along(&cur, c, top)).collect();
            let jac_cur: Vec<Vec<TruncatedSeries>> =
                jac.iter().map(|row| row.iter().map(|e| along(&cur, e, top)).collect()).collect();
            match linearized_step(nx, ny, d, top, &residual, &jac_cur) {
                Step::Inconsistent => return Err(SeriesError::Inconsistent { degree: d }),
                Step::Undetermined => continue,
                Step::Solved(delta) => {
                    accepted = Some(delta);
                    break;
                }
            }
        }
        let delta = accepted.ok_or(SeriesError::Underdetermined { degree: d })?;
        cur = cur.iter().zip(&delta).map(|(c, dl)| &c.with_order(d) + dl).collect();
    }
    SeriesMap::with_shape(nx, target_order, cur)
}

enum Step {
    Inconsistent,
    Undetermined,
    Solved(Vec<TruncatedSeries>),
}

/// Sets up `[R]_e + Σ_k [J]_{e−k} δ_k = 0` for degrees `e` in `d..=top`, with
/// unknown homogeneous corrections `δ_d, …, δ_top`.
fn linearized_step(
    nx: usize,
    ny: usize,
    d: u32,
    top: u32,
    residual: &[TruncatedSeries],
    jac: &[Vec<TruncatedSeries>],
) -> Step {
    let mut unknowns: Vec<(usize, MultiIndex)> = Vec::new();
    for k in d..=top {
        for j in 0..ny {
            for mu in MultiIndex::of_degree(nx, k) {
                unknowns.push((j, mu));
            }
        }
    }
    let head = ny * MultiIndex::of_degree(nx, d).len();
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for e in d..=top {
        for i in 0..ny {
            for nu in MultiIndex::of_degree(nx, e) {
                let row: Vec<GaussRational> = unknowns
                    .iter()
                    .map(|(j, mu)| match difference(&nu, mu) {
                        Some(diff) => jac[i][*j].coeff(&diff),
                        None => GaussRational::zero(),
                    })
                    .collect();
                rows.push(row);
                rhs.push(-residual[i].coeff(&nu));
            }
        }
    }
    match solve_linear(&Matrix::from_rows(rows), &rhs) {
        LinearSolution::Inconsistent => Step::Inconsistent,
        LinearSolution::Solved { x, determined } => {
            if !determined[..head].iter().all(|&b| b) {
                return Step::Undetermined;
            }
            let mut delta: Vec<TruncatedSeries> = (0..ny).map(|_| TruncatedSeries::zero(nx, d)).collect();
            for ((j, mu), val) in unknowns[..head].iter().zip(&x) {
                delta[*j] = &delta[*j] + &TruncatedSeries::monomial(d, mu.clone(), val.clone());
            }
            Step::Solved(delta)
        }
    }
}

fn difference(a: &MultiIndex, b: &MultiIndex) -> Option<MultiIndex> {
    let exps: Option<Vec<u32>> = a.exponents().iter().zip(b.exponents()).map(|(x, y)| x.checked_sub(*y)).collect();
    exps.map(MultiIndex::new)
}
