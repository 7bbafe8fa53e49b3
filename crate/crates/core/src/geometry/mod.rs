//! Real hypersurfaces through the origin, given by a complexified defining
//! series `rho(z, w)` in `2n` variables (`w` standing for the conjugate of `z`).
//!
//! The Segre variety graph `z_n = Phi(w, z')` is the central object: it
//! drives normal coordinates, the Segre maps, minimality and degeneracy.

mod fields;
mod segre;

use num_traits::Zero;
use thiserror::Error;

use crate::number::GaussRational;
use crate::parse::{Document, HypersurfaceSpec};
use crate::series::{implicit_solve, invert_map, MultiIndex, SeriesError, SeriesMap, TruncatedSeries};
use crate::vars::VarDecl;

pub use fields::{apply_field, tangent_fields, TangentField};
pub use segre::{
    degeneracy, degeneracy_with_seed, is_minimal, is_minimal_with_seed, phi_family, segre_maps, Degeneracy, Minimality,
    PhiFamily, SegreTriple,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error("defining series must have {expected} variables, found {got}")]
    WrongArity { expected: usize, got: usize },
    #[error("dimension must be at least 1")]
    ZeroDimension,
    #[error("defining series does not vanish at the origin")]
    NotThroughOrigin,
    #[error(
        "reality violated: coefficient of {monomial} is {coefficient} but the conjugate of the \
         coefficient of {mirror} is {mirror_conjugate}"
    )]
    Reality { monomial: MultiIndex, coefficient: GaussRational, mirror: MultiIndex, mirror_conjugate: GaussRational },
    #[error("d rho / d z_n vanishes at the origin")]
    DegenerateNormalDirection,
    #[error("graph identity fails: residual has term {monomial} (internal inconsistency)")]
    GraphIdentity { monomial: MultiIndex },
    #[error("hypersurface is not in normal coordinates")]
    NotNormal,
    #[error("normalization did not produce normal coordinates: {0}")]
    NormalizationFailed(String),
    #[error("declared normal = {declared} but the computed flag is {computed}")]
    DeclaredNormalMismatch { declared: bool, computed: bool },
    #[error("cutoff {cutoff} exceeds truncation order {order}")]
    CutoffTooLarge { cutoff: u32, order: u32 },
    #[error("cutoff must be at least 1")]
    CutoffTooSmall,
}

/// A coordinate change applied to a hypersurface: `new = change(old)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Provenance {
    pub original: TruncatedSeries,
    pub changes: Vec<SeriesMap>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hypersurface {
    n: usize,
    order: u32,
    rho: TruncatedSeries,
    phi: TruncatedSeries,
    phi_bar: TruncatedSeries,
    normal: bool,
    provenance: Provenance,
}

impl Hypersurface {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// Defining series in `(z_1..z_n, w_1..w_n)`.
    pub fn rho(&self) -> &TruncatedSeries {
        &self.rho
    }

    /// Graph form in `(w_1..w_n, z_1..z_{n-1})`.
    pub fn phi(&self) -> &TruncatedSeries {
        &self.phi
    }

    /// Coefficientwise conjugate of the graph form, read as a series in
    /// `(omega_1..omega_n, lambda_1..lambda_{n-1})`.
    pub fn phi_bar(&self) -> &TruncatedSeries {
        &self.phi_bar
    }

    pub fn is_normal(&self) -> bool {
        self.normal
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn rho_vars(&self) -> VarDecl {
        VarDecl::new(&[("z", self.n), ("w", self.n)]).expect("fixed names")
    }

    pub fn phi_vars(&self) -> VarDecl {
        VarDecl::new(&[("w", self.n), ("z", self.n - 1)]).expect("fixed names")
    }

    pub fn phi_bar_vars(&self) -> VarDecl {
        VarDecl::new(&[("omega", self.n), ("lambda", self.n - 1)]).expect("fixed names")
    }

    /// The same hypersurface recomputed at a lower order.
    pub fn truncate(&self, order: u32) -> Result<Hypersurface, GeometryError> {
        from_defining(&self.rho.truncate(order), self.n)
    }

    pub fn from_spec(spec: &HypersurfaceSpec) -> Result<Hypersurface, GeometryError> {
        let h = from_defining(&spec.rho, spec.n)?;
        match spec.declared_normal {
            Some(declared) if declared != h.normal => {
                Err(GeometryError::DeclaredNormalMismatch { declared, computed: h.normal })
            }
            _ => Ok(h),
        }
    }

    pub fn to_document(&self) -> Document {
        let mut d = Document::new("hypersurface");
        d.push_meta("n", self.n).push_meta("normal", self.normal);
        d.push_series("rho", &self.rho_vars(), &self.rho);
        d
    }
}

/// Mirror of a monomial under `z <-> w`.
fn swap_zw(m: &MultiIndex, n: usize) -> MultiIndex {
    let e = m.exponents();
    MultiIndex::new(e[n..].iter().chain(&e[..n]).copied())
}

/// Checks that `rho(z, w)` is the complexification of a real function:
/// conjugating the coefficients and swapping `z` with `w` gives `rho` back.
pub fn check_reality(rho: &TruncatedSeries, n: usize) -> Result<(), GeometryError> {
    let mut candidates: Vec<MultiIndex> = rho.terms().flat_map(|(m, _)| [m.clone(), swap_zw(m, n)]).collect();
    candidates.sort();
    candidates.dedup();
    for m in candidates {
        let mirror = swap_zw(&m, n);
        let coefficient = rho.coeff(&m);
        let mirror_conjugate = rho.coeff(&mirror).conj();
        if coefficient != mirror_conjugate {
            return Err(GeometryError::Reality { monomial: m, coefficient, mirror, mirror_conjugate });
        }
    }
    Ok(())
}

/// Validates a defining series and computes its graph form.
pub fn from_defining(rho: &TruncatedSeries, n: usize) -> Result<Hypersurface, GeometryError> {
    if n == 0 {
        return Err(GeometryError::ZeroDimension);
    }
    if rho.nvars() != 2 * n {
        return Err(GeometryError::WrongArity { expected: 2 * n, got: rho.nvars() });
    }
    if !rho.constant_term().is_zero() {
        return Err(GeometryError::NotThroughOrigin);
    }
    check_reality(rho, n)?;
    if rho.coeff(&MultiIndex::unit(2 * n, n - 1)).is_zero() {
        return Err(GeometryError::DegenerateNormalDirection);
    }
    let solved = implicit_solve(rho, n - 1)?;
    // solved lives in (z_1..z_{n-1}, w_1..w_n); reorder to (w, z')
    let mapping: Vec<usize> = (0..n - 1).map(|k| n + k).chain(0..n).collect();
    let phi = solved.remap(2 * n - 1, &mapping)?;
    let phi_bar = phi.conjugate();
    check_graph_identity(&phi, &phi_bar, n)?;
    let normal = normality(&phi, n);
    Ok(Hypersurface {
        n,
        order: rho.order(),
        rho: rho.clone(),
        phi,
        phi_bar,
        normal,
        provenance: Provenance { original: rho.clone(), changes: Vec::new() },
    })
}

/// `Phi(w', Phi_bar(z, w'), z') = z_n` over the variables `(z, w')`.
fn check_graph_identity(phi: &TruncatedSeries, phi_bar: &TruncatedSeries, n: usize) -> Result<(), GeometryError> {
    let nv = 2 * n - 1;
    let order = phi.order();
    let var = |k: usize| TruncatedSeries::var(nv, order, k);
    // Phi_bar(omega = z, lambda = w')
    let inner = SeriesMap::with_shape(nv, order, (0..nv).map(var).collect())?;
    let conj_graph = phi_bar.compose(&inner)?;
    // Phi(w' , Phi_bar, z')
    let mut args: Vec<TruncatedSeries> = (0..n - 1).map(|j| var(n + j)).collect();
    args.push(conj_graph);
    args.extend((0..n - 1).map(var));
    let lhs = phi.compose(&SeriesMap::with_shape(nv, order, args)?)?;
    let residual = &lhs - &var(n - 1);
    match residual.leading_term() {
        Some((m, _)) => Err(GeometryError::GraphIdentity { monomial: m.clone() }),
        None => Ok(()),
    }
}

/// Both normality identities: `Phi(w', w_n, 0) = w_n` and `Phi(0, w_n, z') = w_n`.
fn normality(phi: &TruncatedSeries, n: usize) -> bool {
    let wn = TruncatedSeries::var(2 * n - 1, phi.order(), n - 1);
    let z_prime: Vec<usize> = (n..2 * n - 1).collect();
    let w_prime: Vec<usize> = (0..n - 1).collect();
    phi.set_zero(&z_prime) == wn && phi.set_zero(&w_prime) == wn
}

/// Moves `H` to coordinates where both normality identities hold.
///
/// The new coordinates keep `z'` and replace `z_n` by the solution `t` of
/// `z_n = Phi(0, t, z')`. Returns the new hypersurface and the change
/// `old -> new`. Errors if the result is still not normal.
pub fn normalize(h: &Hypersurface) -> Result<(Hypersurface, SeriesMap), GeometryError> {
    let n = h.n;
    let order = h.order;
    if h.normal {
        return Ok((h.clone(), SeriesMap::identity(n, order)));
    }
    // Z(z*) = (z*', Phi(0, z*_n, z*')) expresses old coordinates in new ones
    let var = |k: usize| TruncatedSeries::var(n, order, k);
    let mut args: Vec<TruncatedSeries> = (0..n - 1).map(|_| TruncatedSeries::zero(n, order)).collect();
    args.push(var(n - 1));
    args.extend((0..n - 1).map(var));
    let last = h.phi.compose(&SeriesMap::with_shape(n, order, args)?)?;
    let mut z_comps: Vec<TruncatedSeries> = (0..n - 1).map(var).collect();
    z_comps.push(last);
    let old_of_new = SeriesMap::with_shape(n, order, z_comps)?;
    let change = invert_map(&old_of_new).map_err(|e| match e {
        SeriesError::SingularJacobian => GeometryError::NormalizationFailed("singular coordinate change".into()),
        other => other.into(),
    })?;

    let z_side: Vec<usize> = (0..n).collect();
    let w_side: Vec<usize> = (n..2 * n).collect();
    let mut full = Vec::with_capacity(2 * n);
    for c in old_of_new.components() {
        full.push(c.remap(2 * n, &z_side)?);
    }
    for c in old_of_new.components() {
        full.push(c.conjugate().remap(2 * n, &w_side)?);
    }
    let rho_star = h.rho.compose(&SeriesMap::with_shape(2 * n, order, full)?)?;
    let mut star = from_defining(&rho_star, n).map_err(|e| GeometryError::NormalizationFailed(e.to_string()))?;
    if !star.normal {
        return Err(GeometryError::NormalizationFailed(
            "the second normality identity fails after the substitution".into(),
        ));
    }
    star.provenance = Provenance {
        original: h.provenance.original.clone(),
        changes: h.provenance.changes.iter().cloned().chain([change.clone()]).collect(),
    };
    Ok((star, change))
}
