use std::collections::BTreeMap;

use super::{GeometryError, Hypersurface};
use crate::series::{
    generic_rank_with_seed, matrix_rank_with_seed, MultiIndex, RankResult, SeriesMap, TruncatedSeries,
    DEFAULT_RANK_SEED,
};
use crate::vars::VarDecl;

/// The first three Segre maps of a hypersurface in normal coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SegreTriple {
    n: usize,
    /// `z' -> (z', 0)`
    pub v1: SeriesMap,
    /// `(z', xi) -> (z', Phi(xi, 0, z'))`
    pub v2: SeriesMap,
    /// `(z', xi, eta) -> (z', Phi(xi, Phi_bar(eta, 0, xi), z'))`
    pub v3: SeriesMap,
}

impl SegreTriple {
    pub fn v1_vars(&self) -> VarDecl {
        VarDecl::new(&[("z", self.n - 1)]).expect("fixed names")
    }

    pub fn v2_vars(&self) -> VarDecl {
        VarDecl::new(&[("z", self.n - 1), ("xi", self.n - 1)]).expect("fixed names")
    }

    pub fn v3_vars(&self) -> VarDecl {
        VarDecl::new(&[("z", self.n - 1), ("xi", self.n - 1), ("eta", self.n - 1)]).expect("fixed names")
    }

    /// `v3(eta, xi, eta) - v1(eta)`, componentwise, over `(eta, xi)`.
    pub fn collapse_residual(&self) -> Vec<TruncatedSeries> {
        let m = self.n - 1;
        let order = self.v3.order();
        let var = |k: usize| TruncatedSeries::var(2 * m, order, k);
        let args: Vec<TruncatedSeries> = (0..m).map(var).chain((m..2 * m).map(var)).chain((0..m).map(var)).collect();
        let diag = self
            .v3
            .compose(&SeriesMap::with_shape(2 * m, order, args).expect("shapes agree"))
            .expect("origin-preserving");
        let lifted = self.v1.remap_source(2 * m, &(0..m).collect::<Vec<_>>()).expect("in range");
        diag.components().iter().zip(lifted.components()).map(|(a, b)| a - b).collect()
    }
}

fn require_normal(h: &Hypersurface) -> Result<(), GeometryError> {
    if h.is_normal() {
        Ok(())
    } else {
        Err(GeometryError::NotNormal)
    }
}

pub fn segre_maps(h: &Hypersurface) -> Result<SegreTriple, GeometryError> {
    require_normal(h)?;
    let n = h.n();
    let m = n - 1;
    let order = h.order();

    let v1 = {
        let var = |k| TruncatedSeries::var(m, order, k);
        let mut c: Vec<TruncatedSeries> = (0..m).map(var).collect();
        c.push(TruncatedSeries::zero(m, order));
        SeriesMap::with_shape(m, order, c)?
    };

    let v2 = {
        let nv = 2 * m;
        let var = |k| TruncatedSeries::var(nv, order, k);
        // Phi(w' = xi, w_n = 0, z' = z')
        let args: Vec<TruncatedSeries> =
            (m..2 * m).map(var).chain([TruncatedSeries::zero(nv, order)]).chain((0..m).map(var)).collect();
        let last = h.phi().compose(&SeriesMap::with_shape(nv, order, args)?)?;
        let mut c: Vec<TruncatedSeries> = (0..m).map(var).collect();
        c.push(last);
        SeriesMap::with_shape(nv, order, c)?
    };

    let v3 = {
        let nv = 3 * m;
        let var = |k| TruncatedSeries::var(nv, order, k);
        let (z, xi, eta) = (0..m, m..2 * m, 2 * m..3 * m);
        // Phi_bar(omega' = eta, omega_n = 0, lambda = xi)
        let inner_args: Vec<TruncatedSeries> =
            eta.map(var).chain([TruncatedSeries::zero(nv, order)]).chain(xi.clone().map(var)).collect();
        let inner = h.phi_bar().compose(&SeriesMap::with_shape(nv, order, inner_args)?)?;
        let args: Vec<TruncatedSeries> = xi.map(var).chain([inner]).chain(z.clone().map(var)).collect();
        let last = h.phi().compose(&SeriesMap::with_shape(nv, order, args)?)?;
        let mut c: Vec<TruncatedSeries> = z.map(var).collect();
        c.push(last);
        SeriesMap::with_shape(nv, order, c)?
    };

    Ok(SegreTriple { n, v1, v2, v3 })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Minimality {
    pub minimal: bool,
    /// Generic rank of the second Segre map.
    pub rank: RankResult,
    /// Truncation order at which a negative verdict was reached.
    pub order: u32,
}

impl Minimality {
    /// `yes`, or `no (at order N)`: a negative answer only holds up to the
    /// truncation order.
    pub fn verdict(&self) -> String {
        if self.minimal {
            "yes".to_string()
        } else {
            format!("no (at order {})", self.order)
        }
    }
}

pub fn is_minimal(h: &Hypersurface) -> Result<Minimality, GeometryError> {
    is_minimal_with_seed(h, DEFAULT_RANK_SEED)
}

pub fn is_minimal_with_seed(h: &Hypersurface, seed: u64) -> Result<Minimality, GeometryError> {
    let triple = segre_maps(h)?;
    let rank = generic_rank_with_seed(&triple.v2, seed);
    Ok(Minimality { minimal: rank.rank == h.n(), rank, order: h.order() })
}

/// Coefficients `phi_alpha(omega)` of `lambda^alpha` in `Phi_bar(omega, lambda)`.
pub type PhiFamily = BTreeMap<MultiIndex, TruncatedSeries>;

/// Every `phi_alpha` with `|alpha| <= cutoff`, including the zero ones.
pub fn phi_family(h: &Hypersurface, cutoff: u32) -> Result<PhiFamily, GeometryError> {
    if cutoff > h.order() {
        return Err(GeometryError::CutoffTooLarge { cutoff, order: h.order() });
    }
    let n = h.n();
    let lambda: Vec<usize> = (n..2 * n - 1).collect();
    let mut parts = h.phi_bar().partial_coefficients(&lambda);
    Ok(MultiIndex::up_to_degree(n - 1, cutoff)
        .into_iter()
        .map(|alpha| {
            let s = parts.remove(&alpha).unwrap_or_else(|| TruncatedSeries::zero(n, h.order() - alpha.degree()));
            (alpha, s)
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Degeneracy {
    /// `n` minus the generic rank of the gradients of the `phi_alpha`.
    pub d: usize,
    pub stabilized: bool,
    /// Multi-indices whose gradients realize the rank, graded-lex least first.
    pub witnesses: Vec<MultiIndex>,
    pub rank: RankResult,
    pub cutoff: u32,
}

impl Degeneracy {
    pub fn nondegenerate(&self) -> bool {
        self.d == 0
    }
}

fn gradient_rank(family: &PhiFamily, n: usize, max: u32, seed: u64) -> (Vec<MultiIndex>, RankResult) {
    let mut alphas = Vec::new();
    let mut rows = Vec::new();
    for (alpha, phi) in family {
        if alpha.degree() > max || phi.order() == 0 {
            continue;
        }
        alphas.push(alpha.clone());
        rows.push((0..n).map(|j| phi.derive(j).expect("order checked")).collect());
    }
    (alphas, matrix_rank_with_seed(&rows, seed))
}

pub fn degeneracy(h: &Hypersurface, cutoff: u32) -> Result<Degeneracy, GeometryError> {
    degeneracy_with_seed(h, cutoff, DEFAULT_RANK_SEED)
}

pub fn degeneracy_with_seed(h: &Hypersurface, cutoff: u32, seed: u64) -> Result<Degeneracy, GeometryError> {
    if cutoff < 1 {
        return Err(GeometryError::CutoffTooSmall);
    }
    let family = phi_family(h, cutoff)?;
    let n = h.n();
    let (alphas, rank) = gradient_rank(&family, n, cutoff, seed);
    let (_, previous) = gradient_rank(&family, n, cutoff - 1, seed);
    let witnesses =
        rank.certificate.as_ref().map(|c| c.rows.iter().map(|&r| alphas[r].clone()).collect()).unwrap_or_default();
    Ok(Degeneracy { d: n - rank.rank, stabilized: previous.rank == rank.rank, witnesses, rank, cutoff })
}

#[cfg(test)]
mod tests {
    use super::super::tests::{hyp, C3, LEVI_FLAT, PERTURBED, SPHERE};
    use super::*;
    use crate::parse::parse_expr;
    use crate::series::RankStatus;

    fn map(decl: &str, comps: &[&str], order: u32) -> SeriesMap {
        let vars = VarDecl::parse(decl).unwrap();
        SeriesMap::new(comps.iter().map(|c| parse_expr(c, &vars, order).unwrap()).collect()).unwrap()
    }

    #[test]
    fn sphere_segre_maps() {
        let t = segre_maps(&hyp(SPHERE, 2, 8)).unwrap();
        assert_eq!(t.v1, map("z:1", &["z1", "0"], 8));
        assert_eq!(t.v2, map("z:1 xi:1", &["z1", "2*i*z1*xi1"], 8));
        assert_eq!(t.v3, map("z:1 xi:1 eta:1", &["z1", "2*i*xi1*(z1 - eta1)"], 8));
        assert!(t.collapse_residual().iter().all(|r| r.is_zero()));
    }

    #[test]
    fn segre_requires_normal() {
        assert_eq!(segre_maps(&hyp(PERTURBED, 2, 8)), Err(GeometryError::NotNormal));
    }

    #[test]
    fn collapse_on_c3() {
        let t = segre_maps(&hyp(C3, 3, 8)).unwrap();
        assert!(t.collapse_residual().iter().all(|r| r.is_zero()));
    }

    #[test]
    fn minimality_table() {
        let s = is_minimal(&hyp(SPHERE, 2, 8)).unwrap();
        assert!(s.minimal);
        assert_eq!(s.rank.rank, 2);
        assert_eq!(s.rank.status, RankStatus::Certified);
        let flat = is_minimal(&hyp(LEVI_FLAT, 2, 8)).unwrap();
        assert!(!flat.minimal);
        assert_eq!(flat.rank.rank, 1);
        assert_eq!(flat.verdict(), "no (at order 8)");
        assert!(is_minimal(&hyp(C3, 3, 8)).unwrap().minimal);
    }

    #[test]
    fn phi_families() {
        let s = hyp(SPHERE, 2, 8);
        let fam = phi_family(&s, 8).unwrap();
        let om = VarDecl::parse("omega:2").unwrap();
        assert_eq!(fam[&MultiIndex::new([0])], parse_expr("omega2", &om, 8).unwrap());
        assert_eq!(fam[&MultiIndex::new([1])], parse_expr("-2*i*omega1", &om, 7).unwrap());
        assert!(fam.iter().filter(|(a, _)| a.degree() >= 2).all(|(_, p)| p.is_zero()));

        let c = hyp(C3, 3, 8);
        let fam = phi_family(&c, 8).unwrap();
        let om = VarDecl::parse("omega:3").unwrap();
        let nonzero: Vec<&MultiIndex> = fam.iter().filter(|(_, p)| !p.is_zero()).map(|(a, _)| a).collect();
        assert_eq!(nonzero, vec![&MultiIndex::new([0, 0]), &MultiIndex::new([1, 1])]);
        assert_eq!(fam[&MultiIndex::new([1, 1])], parse_expr("-2*i*omega1*omega2", &om, 6).unwrap());
        assert_eq!(phi_family(&c, 9), Err(GeometryError::CutoffTooLarge { cutoff: 9, order: 8 }));
    }

    #[test]
    fn degeneracy_table() {
        let s = degeneracy(&hyp(SPHERE, 2, 8), 8).unwrap();
        assert_eq!((s.d, s.stabilized), (0, true));
        assert_eq!(s.witnesses, vec![MultiIndex::new([0]), MultiIndex::new([1])]);
        let c = degeneracy(&hyp(C3, 3, 8), 8).unwrap();
        assert_eq!((c.d, c.stabilized), (1, true));
        assert_eq!(c.witnesses, vec![MultiIndex::new([0, 0]), MultiIndex::new([1, 1])]);
        let f = degeneracy(&hyp(LEVI_FLAT, 2, 8), 8).unwrap();
        assert_eq!(f.d, 1);
        assert_eq!(f.witnesses, vec![MultiIndex::new([0])]);
        assert_eq!(degeneracy(&hyp(SPHERE, 2, 8), 0), Err(GeometryError::CutoffTooSmall));
        // the quadratic term of the c3 example is invisible at cutoff 1
        let early = degeneracy(&hyp(C3, 3, 8), 1).unwrap();
        assert_eq!((early.d, early.stabilized), (2, true));
        let next = degeneracy(&hyp(C3, 3, 8), 2).unwrap();
        assert_eq!((next.d, next.stabilized), (1, false));
    }
}
