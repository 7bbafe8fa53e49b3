//! Exact truncated multivariate power series over the Gaussian rationals.
//!
//! A [`TruncatedSeries`] of order `N` knows every coefficient of total degree
//! `≤ N` exactly and nothing above. Binary operations combine orders with
//! `min`, derivatives lose one degree, and no operation ever writes a
//! coefficient above the order it can guarantee.

mod compose;
mod linalg;
mod map;
mod rank;
mod solve;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use smallvec::SmallVec;
use thiserror::Error;

use crate::number::GaussRational;
use crate::vars::VarDecl;

pub use linalg::Matrix;
pub use map::SeriesMap;
pub use rank::{
    generic_rank, generic_rank_with_seed, matrix_rank, matrix_rank_with_seed, RankCertificate, RankResult, RankStatus,
    DEFAULT_RANK_SEED, RANK_TRIALS,
};
pub use solve::{implicit_solve, invert_map, newton_extend};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("variable-count mismatch: {left} vs {right}")]
    VarCountMismatch { left: usize, right: usize },
    #[error("arity mismatch: expected {expected}, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("variable index {index} out of range for {nvars} variables")]
    VarOutOfRange { index: usize, nvars: usize },
    #[error("series of order 0 carries no derivative information")]
    NoDerivativeInformation,
    #[error("map is not origin-preserving: component {component} has a nonzero constant term")]
    NotOriginPreserving { component: usize },
    #[error("series has nonzero constant term")]
    NonzeroConstant,
    #[error("linear coefficient of variable {var} vanishes; implicit function theorem inapplicable")]
    VanishingLinearCoefficient { var: usize },
    #[error("map is not square: {source_nvars} source variables, {target_nvars} components")]
    NotSquare { source_nvars: usize, target_nvars: usize },
    #[error("Jacobian at the origin is singular")]
    SingularJacobian,
    #[error("Jacobian determinant vanishes identically along the seed solution (to order {order})")]
    DegenerateJacobian { order: u32 },
    #[error("inconsistent linear system at degree {degree}: seed is not a truncated solution")]
    Inconsistent { degree: u32 },
    #[error("degree {degree} not determined by the linearized system; raise the seed order")]
    Underdetermined { degree: u32 },
}

/// An exponent vector. Ordered graded-lexicographically: total degree first,
/// then the vector with the larger leading exponent first, so that
/// `x1 < x2 < x1² < x1·x2 < x2²`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MultiIndex {
    exps: SmallVec<[u32; 8]>,
    degree: u32,
}

impl MultiIndex {
    pub fn new(exps: impl IntoIterator<Item = u32>) -> Self {
        let exps: SmallVec<[u32; 8]> = exps.into_iter().collect();
        let degree = exps.iter().sum();
        Self { exps, degree }
    }

    pub fn zero(nvars: usize) -> Self {
        Self::new(std::iter::repeat(0).take(nvars))
    }

    pub fn unit(nvars: usize, var: usize) -> Self {
        let mut m = Self::zero(nvars);
        m.exps[var] = 1;
        m.degree = 1;
        m
    }

    pub fn len(&self) -> usize {
        self.exps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exps
    }

    pub fn get(&self, var: usize) -> u32 {
        self.exps[var]
    }

    /// `α! = Π αᵢ!`.
    pub fn factorial(&self) -> GaussRational {
        self.exps.iter().fold(GaussRational::one(), |acc, &e| &acc * &GaussRational::factorial(e))
    }

    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        debug_assert_eq!(self.len(), other.len());
        MultiIndex {
            exps: self.exps.iter().zip(&other.exps).map(|(a, b)| a + b).collect(),
            degree: self.degree + other.degree,
        }
    }

    /// All exponent vectors in `nvars` variables of total degree exactly `d`,
    /// in graded-lex order.
    pub fn of_degree(nvars: usize, d: u32) -> Vec<MultiIndex> {
        fn rec(nvars: usize, d: u32, prefix: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
            if prefix.len() + 1 == nvars {
                prefix.push(d);
                out.push(MultiIndex::new(prefix.iter().copied()));
                prefix.pop();
                return;
            }
            for e in (0..=d).rev() {
                prefix.push(e);
                rec(nvars, d - e, prefix, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        if nvars == 0 {
            if d == 0 {
                out.push(MultiIndex::zero(0));
            }
            return out;
        }
        rec(nvars, d, &mut Vec::with_capacity(nvars), &mut out);
        out
    }

    /// All exponent vectors of total degree `≤ max`, graded-lex order.
    pub fn up_to_degree(nvars: usize, max: u32) -> Vec<MultiIndex> {
        (0..=max).flat_map(|d| Self::of_degree(nvars, d)).collect()
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree.cmp(&other.degree).then_with(|| other.exps.cmp(&self.exps))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.exps.as_slice())
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.exps.iter().map(|e| e.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// A multivariate power series known exactly through total degree `order`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TruncatedSeries {
    nvars: usize,
    order: u32,
    terms: BTreeMap<MultiIndex, GaussRational>,
}

impl TruncatedSeries {
    pub fn zero(nvars: usize, order: u32) -> Self {
        Self { nvars, order, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, order: u32, c: GaussRational) -> Self {
        let mut s = Self::zero(nvars, order);
        s.insert(MultiIndex::zero(nvars), c);
        s
    }

    pub fn one(nvars: usize, order: u32) -> Self {
        Self::constant(nvars, order, GaussRational::one())
    }

    /// The coordinate function `x_var`. Panics if `var >= nvars`.
    pub fn var(nvars: usize, order: u32, var: usize) -> Self {
        assert!(var < nvars, "variable {var} out of range for {nvars} variables");
        let mut s = Self::zero(nvars, order);
        s.insert(MultiIndex::unit(nvars, var), GaussRational::one());
        s
    }

    pub fn monomial(order: u32, exps: MultiIndex, c: GaussRational) -> Self {
        let mut s = Self::zero(exps.len(), order);
        s.insert(exps, c);
        s
    }

    /// Builds a series from terms, summing repeated exponents and dropping
    /// zeros and terms above `order`.
    pub fn from_terms(
        nvars: usize,
        order: u32,
        terms: impl IntoIterator<Item = (MultiIndex, GaussRational)>,
    ) -> Result<Self, SeriesError> {
        let mut s = Self::zero(nvars, order);
        for (m, c) in terms {
            if m.len() != nvars {
                return Err(SeriesError::ArityMismatch { expected: nvars, got: m.len() });
            }
            s.accumulate(m, &c);
        }
        Ok(s)
    }

    fn insert(&mut self, m: MultiIndex, c: GaussRational) {
        if m.degree() <= self.order && !c.is_zero() {
            self.terms.insert(m, c);
        }
    }

    fn accumulate(&mut self, m: MultiIndex, c: &GaussRational) {
        if m.degree() > self.order || c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// Nonzero terms in graded-lex order.
    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &GaussRational)> + Clone {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, m: &MultiIndex) -> GaussRational {
        self.terms.get(m).cloned().unwrap_or_else(GaussRational::zero)
    }

    pub fn constant_term(&self) -> GaussRational {
        self.coeff(&MultiIndex::zero(self.nvars))
    }

    /// True when every known coefficient vanishes.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The graded-lex least nonzero term, if any.
    pub fn leading_term(&self) -> Option<(&MultiIndex, &GaussRational)> {
        self.terms.iter().next()
    }

    /// Lowest total degree with a nonzero coefficient.
    pub fn valuation(&self) -> Option<u32> {
        self.leading_term().map(|(m, _)| m.degree())
    }

    /// Highest total degree with a nonzero coefficient.
    pub fn max_degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(|m| m.degree())
    }

    /// Forgets every coefficient above `order` (never raises the order).
    pub fn truncate(&self, order: u32) -> Self {
        let order = order.min(self.order);
        Self {
            nvars: self.nvars,
            order,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() <= order)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Homogeneous part of degree `d`.
    pub fn homogeneous_part(&self, d: u32) -> Self {
        Self {
            nvars: self.nvars,
            order: self.order,
            terms: self.terms.iter().filter(|(m, _)| m.degree() == d).map(|(m, c)| (m.clone(), c.clone())).collect(),
        }
    }

    /// Same coefficients with a different declared order. Only for callers
    /// that know the stored terms are exact to `order` (e.g. polynomials).
    pub(crate) fn with_order(&self, order: u32) -> Self {
        let mut s = self.truncate(order);
        s.order = order;
        s
    }

    fn check_nvars(&self, other: &Self) -> Result<(), SeriesError> {
        if self.nvars != other.nvars {
            return Err(SeriesError::VarCountMismatch { left: self.nvars, right: other.nvars });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check_nvars(other)?;
        let mut out = self.truncate(other.order);
        for (m, c) in &other.terms {
            out.accumulate(m.clone(), c);
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, SeriesError> {
        self.try_add(&other.neg_ref())
    }

    fn neg_ref(&self) -> Self {
        Self { nvars: self.nvars, order: self.order, terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }

    pub fn scale(&self, c: &GaussRational) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars, self.order);
        }
        Self {
            nvars: self.nvars,
            order: self.order,
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    /// Product with order `min(a.order, b.order)`.
    pub fn try_mul(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check_nvars(other)?;
        Ok(self.mul_to(other, self.order.min(other.order)))
    }

    /// Product truncated at `order`, treating both operands' stored terms as
    /// exact. Callers guarantee `order` does not exceed what the inputs support.
    pub(crate) fn mul_to(&self, other: &Self, order: u32) -> Self {
        let mut out = Self::zero(self.nvars, order);
        let (Some(va), Some(vb)) = (self.valuation(), other.valuation()) else {
            return out;
        };
        if va + vb > order {
            return out;
        }
        for (ma, ca) in &self.terms {
            if ma.degree() + vb > order {
                break;
            }
            for (mb, cb) in &other.terms {
                if ma.degree() + mb.degree() > order {
                    break;
                }
                out.accumulate(ma.add(mb), &(ca * cb));
            }
        }
        out
    }

    /// `self^e` truncated at this series' order.
    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.nvars, self.order);
        for _ in 0..e {
            acc = acc.mul_to(self, self.order);
            if acc.is_zero() {
                break;
            }
        }
        acc
    }

    /// `∂/∂x_var`; the result has order `order − 1`.
    pub fn derive(&self, var: usize) -> Result<Self, SeriesError> {
        if var >= self.nvars {
            return Err(SeriesError::VarOutOfRange { index: var, nvars: self.nvars });
        }
        if self.order == 0 {
            return Err(SeriesError::NoDerivativeInformation);
        }
        let mut out = Self::zero(self.nvars, self.order - 1);
        for (m, c) in &self.terms {
            let e = m.get(var);
            if e == 0 {
                continue;
            }
            let mut exps = m.exps.clone();
            exps[var] -= 1;
            out.insert(MultiIndex::new(exps), c * &GaussRational::from(e as i64));
        }
        Ok(out)
    }

    /// Iterated derivative `∂^γ`, with `γ` over all variables.
    pub fn derive_multi(&self, gamma: &MultiIndex) -> Result<Self, SeriesError> {
        if gamma.len() != self.nvars {
            return Err(SeriesError::ArityMismatch { expected: self.nvars, got: gamma.len() });
        }
        let mut out = self.clone();
        for (var, &e) in gamma.exponents().iter().enumerate() {
            for _ in 0..e {
                out = out.derive(var)?;
            }
        }
        Ok(out)
    }

    /// Complex-conjugates every coefficient; exponents are untouched.
    pub fn conjugate(&self) -> Self {
        Self {
            nvars: self.nvars,
            order: self.order,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.conj())).collect(),
        }
    }

    /// Renames variables: old variable `i` becomes variable `mapping[i]` of a
    /// series in `target_nvars` variables. `mapping` must be injective.
    pub fn remap(&self, target_nvars: usize, mapping: &[usize]) -> Result<Self, SeriesError> {
        if mapping.len() != self.nvars {
            return Err(SeriesError::ArityMismatch { expected: self.nvars, got: mapping.len() });
        }
        if let Some(&bad) = mapping.iter().find(|&&j| j >= target_nvars) {
            return Err(SeriesError::VarOutOfRange { index: bad, nvars: target_nvars });
        }
        let mut out = Self::zero(target_nvars, self.order);
        for (m, c) in &self.terms {
            let mut exps: SmallVec<[u32; 8]> = SmallVec::from_elem(0, target_nvars);
            for (i, &e) in m.exponents().iter().enumerate() {
                exps[mapping[i]] += e;
            }
            out.accumulate(MultiIndex::new(exps), c);
        }
        Ok(out)
    }

    /// Sets the listed variables to zero (the variable count is unchanged).
    pub fn set_zero(&self, vars: &[usize]) -> Self {
        Self {
            nvars: self.nvars,
            order: self.order,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| vars.iter().all(|&v| m.get(v) == 0))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Splits the series by its exponents in `selected` variables.
    ///
    /// Returns, for each exponent vector `α` over `selected` that occurs, the
    /// coefficient series of `x_selected^α` in the remaining variables (kept
    /// in their original relative order). Each coefficient has order
    /// `order − |α|`.
    pub fn partial_coefficients(&self, selected: &[usize]) -> BTreeMap<MultiIndex, TruncatedSeries> {
        let rest: Vec<usize> = (0..self.nvars).filter(|v| !selected.contains(v)).collect();
        let mut out: BTreeMap<MultiIndex, TruncatedSeries> = BTreeMap::new();
        for (m, c) in &self.terms {
            let alpha = MultiIndex::new(selected.iter().map(|&v| m.get(v)));
            let rem = MultiIndex::new(rest.iter().map(|&v| m.get(v)));
            let order = self.order - alpha.degree();
            out.entry(alpha).or_insert_with(|| TruncatedSeries::zero(rest.len(), order)).insert(rem, c.clone());
        }
        out
    }

    /// The coefficient of `x_selected^α`, in the remaining variables.
    pub fn coefficient_of(&self, selected: &[usize], alpha: &MultiIndex) -> TruncatedSeries {
        let rest = self.nvars - selected.len();
        self.partial_coefficients(selected)
            .remove(alpha)
            .unwrap_or_else(|| TruncatedSeries::zero(rest, self.order.saturating_sub(alpha.degree())))
    }

    /// Evaluates the stored polynomial at a point.
    pub fn eval(&self, point: &[GaussRational]) -> Result<GaussRational, SeriesError> {
        if point.len() != self.nvars {
            return Err(SeriesError::ArityMismatch { expected: self.nvars, got: point.len() });
        }
        let max = self.max_degree().unwrap_or(0) as usize;
        // powers[v][e] = point[v]^e
        let powers: Vec<Vec<GaussRational>> = point
            .iter()
            .map(|x| {
                let mut p = Vec::with_capacity(max + 1);
                p.push(GaussRational::one());
                for e in 1..=max {
                    let next = &p[e - 1] * x;
                    p.push(next);
                }
                p
            })
            .collect();
        let mut acc = GaussRational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, &e) in m.exponents().iter().enumerate() {
                if e > 0 {
                    t *= &powers[v][e as usize];
                }
            }
            acc += &t;
        }
        Ok(acc)
    }

    /// Expression rendering with variable names from `decl`, e.g.
    /// `w2 + 2*i*z1*w1`. The output is valid input for the expression parser.
    pub fn to_expr(&self, decl: &VarDecl) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let mono: Vec<String> = m
                .exponents()
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(v, &e)| {
                    let name = decl.name(v);
                    if e == 1 {
                        name
                    } else {
                        format!("{name}^{e}")
                    }
                })
                .collect();
            let negative = c.has_negative_sign();
            let mag = if negative { -c } else { c.clone() };
            let body = match (mag.is_one(), mono.is_empty()) {
                (_, true) => mag.to_expr(),
                (true, false) => mono.join("*"),
                (false, false) => format!("{}*{}", mag.to_expr(), mono.join("*")),
            };
            match (k, negative) {
                (0, true) => out.push_str(&format!("-{body}")),
                (0, false) => out.push_str(&body),
                (_, true) => out.push_str(&format!(" - {body}")),
                (_, false) => out.push_str(&format!(" + {body}")),
            }
        }
        out
    }
}

impl fmt::Debug for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + O({})", self.to_expr(&VarDecl::anonymous(self.nvars)), self.order + 1)
    }
}

/// `a·b`; see [`TruncatedSeries::try_mul`].
pub fn mul(a: &TruncatedSeries, b: &TruncatedSeries) -> Result<TruncatedSeries, SeriesError> {
    a.try_mul(b)
}

/// `∂a/∂x_var`; see [`TruncatedSeries::derive`].
pub fn derive(a: &TruncatedSeries, var: usize) -> Result<TruncatedSeries, SeriesError> {
    a.derive(var)
}

/// Coefficientwise complex conjugate.
pub fn conjugate(a: &TruncatedSeries) -> TruncatedSeries {
    a.conjugate()
}

/// `g ∘ V`; see [`TruncatedSeries::compose`].
pub fn compose(g: &TruncatedSeries, v: &SeriesMap) -> Result<TruncatedSeries, SeriesError> {
    g.compose(v)
}

// Operator sugar. These panic on variable-count mismatch; use the `try_*`
// methods where the arity is not known statically.
impl Add for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn add(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        self.try_add(rhs).expect("series addition")
    }
}

impl Sub for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn sub(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        self.try_sub(rhs).expect("series subtraction")
    }
}

impl Mul for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn mul(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        self.try_mul(rhs).expect("series multiplication")
    }
}

impl Neg for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn neg(self) -> TruncatedSeries {
        self.neg_ref()
    }
}

impl Add for TruncatedSeries {
    type Output = TruncatedSeries;
    fn add(self, rhs: TruncatedSeries) -> TruncatedSeries {
        &self + &rhs
    }
}

impl Sub for TruncatedSeries {
    type Output = TruncatedSeries;
    fn sub(self, rhs: TruncatedSeries) -> TruncatedSeries {
        &self - &rhs
    }
}

impl Mul for TruncatedSeries {
    type Output = TruncatedSeries;
    fn mul(self, rhs: TruncatedSeries) -> TruncatedSeries {
        &self * &rhs
    }
}

impl Neg for TruncatedSeries {
    type Output = TruncatedSeries;
    fn neg(self) -> TruncatedSeries {
        self.neg_ref()
    }
}

#[cfg(test)]
pub(crate) mod testing;

#[cfg(test)]
mod tests {
    use super::testing::{c, s};
    use super::*;

    #[test]
    fn graded_lex_order() {
        let mut v = MultiIndex::up_to_degree(2, 2);
        let expected: Vec<Vec<u32>> = vec![vec![0, 0], vec![1, 0], vec![0, 1], vec![2, 0], vec![1, 1], vec![0, 2]];
        assert_eq!(v.iter().map(|m| m.exponents().to_vec()).collect::<Vec<_>>(), expected);
        v.reverse();
        v.sort();
        assert_eq!(v.iter().map(|m| m.exponents().to_vec()).collect::<Vec<_>>(), expected);
    }

    #[test]
    fn mul_telescoping() {
        let a = s(1, 3, &[(&[0], c(1, 0)), (&[1], c(1, 0))]);
        let b = s(1, 3, &[(&[0], c(1, 0)), (&[1], c(-1, 0))]);
        assert_eq!(&a * &b, s(1, 3, &[(&[0], c(1, 0)), (&[2], c(-1, 0))]));
    }

    #[test]
    fn mul_respects_truncation() {
        let z2 = s(1, 3, &[(&[2], c(1, 0))]);
        let p = &z2 * &z2;
        assert!(p.is_zero());
        assert_eq!(p.order(), 3);
    }

    #[test]
    fn mul_identity_on_sphere_factor() {
        // (−i/2)(z2 − w2) in (z1, z2, w1, w2)
        let half_i = GaussRational::ratio(1, 2) * GaussRational::i();
        let rho = s(4, 5, &[(&[0, 1, 0, 0], -half_i.clone()), (&[0, 0, 0, 1], half_i)]);
        assert_eq!(&rho * &TruncatedSeries::one(4, 5), rho);
    }

    #[test]
    fn mul_order_is_min_and_mismatch_errors() {
        let a = TruncatedSeries::one(2, 4);
        let b = TruncatedSeries::one(2, 2);
        assert_eq!(a.try_mul(&b).unwrap().order(), 2);
        assert_eq!(a.try_mul(&TruncatedSeries::one(3, 2)), Err(SeriesError::VarCountMismatch { left: 2, right: 3 }));
    }

    #[test]
    fn derive_monomial_rule() {
        let a = s(2, 4, &[(&[2, 1], c(1, 0))]);
        let d = a.derive(0).unwrap();
        assert_eq!(d, s(2, 3, &[(&[1, 1], c(2, 0))]));
        let k = TruncatedSeries::constant(2, 4, c(7, 3));
        assert!(k.derive(0).unwrap().is_zero());
        assert_eq!(TruncatedSeries::one(1, 0).derive(0), Err(SeriesError::NoDerivativeInformation));
    }

    #[test]
    fn derive_sphere_conjugate_graph() {
        // ω2 − 2i λ ω1 in (ω1, ω2, λ)
        let phi_bar = s(3, 6, &[(&[0, 1, 0], c(1, 0)), (&[1, 0, 1], c(0, -2))]);
        // coefficient shift: ∂/∂λ moves λω1 to ω1, keeps −2i
        assert_eq!(phi_bar.derive(2).unwrap(), s(3, 5, &[(&[1, 0, 0], c(0, -2))]));
    }

    #[test]
    fn conjugate_examples() {
        let a = s(1, 3, &[(&[1], c(0, 2))]);
        assert_eq!(a.conjugate(), s(1, 3, &[(&[1], c(0, -2))]));
        let phi = s(3, 6, &[(&[0, 1, 0], c(1, 0)), (&[1, 0, 1], c(0, 2))]);
        let phi_bar = s(3, 6, &[(&[0, 1, 0], c(1, 0)), (&[1, 0, 1], c(0, -2))]);
        assert_eq!(phi.conjugate(), phi_bar);
    }

    #[test]
    fn partial_coefficients_split() {
        // ω3 − 2i ω1ω2 λ1λ2
        let s5 = s(5, 8, &[(&[0, 0, 1, 0, 0], c(1, 0)), (&[1, 1, 0, 1, 1], c(0, -2))]);
        let parts = s5.partial_coefficients(&[3, 4]);
        assert_eq!(parts.len(), 2);
        assert_eq!(parts[&MultiIndex::new([0, 0])], s(3, 8, &[(&[0, 0, 1], c(1, 0))]));
        assert_eq!(parts[&MultiIndex::new([1, 1])], s(3, 6, &[(&[1, 1, 0], c(0, -2))]));
    }

    #[test]
    fn eval_and_remap() {
        let a = s(2, 4, &[(&[1, 1], c(2, 0)), (&[0, 0], c(1, 0))]);
        assert_eq!(a.eval(&[c(3, 0), c(0, 1)]).unwrap(), c(1, 6));
        let b = a.remap(3, &[2, 0]).unwrap();
        assert_eq!(b, s(3, 4, &[(&[1, 0, 1], c(2, 0)), (&[0, 0, 0], c(1, 0))]));
    }

    #[test]
    fn expr_rendering() {
        let decl = VarDecl::parse("z:2,w:2").unwrap();
        let phi = s(4, 8, &[(&[0, 0, 0, 1], c(1, 0)), (&[1, 0, 1, 0], c(0, 2))]);
        assert_eq!(phi.to_expr(&decl), "w2 + 2*i*z1*w1");
        let neg = s(4, 8, &[(&[1, 0, 0, 0], c(-1, 0)), (&[2, 0, 0, 0], c(0, -1))]);
        assert_eq!(neg.to_expr(&decl), "-z1 - i*z1^2");
    }
}
