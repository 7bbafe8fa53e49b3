//! Formal holomorphic maps between hypersurfaces and their reflection function
//! `R(z, lambda) = Phi_bar'(f(z), lambda)`.

mod evidence;
mod partial;

use num_traits::Zero;
use thiserror::Error;

use crate::geometry::{segre_maps, GeometryError, Hypersurface, Minimality};
use crate::number::GaussRational;
use crate::parse::Document;
use crate::series::{MultiIndex, SeriesError, SeriesMap, TruncatedSeries};
use crate::vars::VarDecl;

pub use evidence::{convergence_evidence, AlphaEvidence, Evidence};
pub use partial::{
    exp_series, formal_containment, partial_convergence, partial_convergence_with_seed, transcendence_generators,
    witness_invariants, Containment, PartialConvergence,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReflectionError {
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("map must have {expected} components in {expected} variables, found {components} in {vars}")]
    MapShape { expected: usize, components: usize, vars: usize },
    #[error("source and target dimensions differ: {source_n} vs {target_n}")]
    DimensionMismatch { source_n: usize, target_n: usize },
    #[error("requested order {requested} exceeds the available order {available}")]
    OrderTooLarge { requested: u32, available: u32 },
    #[error("derivative of order {derivative} exhausts the truncation order {order}")]
    DerivativeExhausts { derivative: u32, order: u32 },
    #[error("map is not a formal biholomorphism (Jacobian determinant vanishes at 0)")]
    NotBiholomorphic,
    #[error("source hypersurface is not certified minimal")]
    SourceNotMinimal,
    #[error(
        "degeneracy of the target has not stabilized at cutoff {cutoff}; refusing to build a possibly short system"
    )]
    Unstabilized { cutoff: u32 },
    #[error("prerequisite not met: {0}")]
    Prerequisite(String),
    #[error("majorant radius must be positive")]
    NonPositiveRadius,
    #[error("generator {index} has {got} variables, expected {expected}")]
    GeneratorArity { index: usize, expected: usize, got: usize },
    #[error("rank check failed: expected {expected}, found {found}")]
    RankMismatch { expected: usize, found: usize },
}

/// A formal map `f: (C^n, 0) -> (C^n, 0)` between two hypersurfaces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormalMap {
    f: SeriesMap,
    source: Hypersurface,
    target: Hypersurface,
    jacobian_at_0: GaussRational,
}

impl FormalMap {
    pub fn new(f: SeriesMap, source: Hypersurface, target: Hypersurface) -> Result<Self, ReflectionError> {
        check_shapes(&f, &source, &target)?;
        f.check_origin_preserving()?;
        let jacobian_at_0 = crate::series::Matrix::from_rows(f.linear_part()).determinant();
        Ok(Self { f, source, target, jacobian_at_0 })
    }

    pub fn map(&self) -> &SeriesMap {
        &self.f
    }

    pub fn source(&self) -> &Hypersurface {
        &self.source
    }

    pub fn target(&self) -> &Hypersurface {
        &self.target
    }

    pub fn jacobian_at_0(&self) -> &GaussRational {
        &self.jacobian_at_0
    }

    pub fn is_biholomorphism(&self) -> bool {
        !self.jacobian_at_0.is_zero()
    }
}

fn check_shapes(f: &SeriesMap, source: &Hypersurface, target: &Hypersurface) -> Result<(), ReflectionError> {
    if source.n() != target.n() {
        return Err(ReflectionError::DimensionMismatch { source_n: source.n(), target_n: target.n() });
    }
    let n = source.n();
    if f.source_nvars() != n || f.target_nvars() != n {
        return Err(ReflectionError::MapShape { expected: n, components: f.target_nvars(), vars: f.source_nvars() });
    }
    Ok(())
}

fn check_target_shape(f: &SeriesMap, target: &Hypersurface) -> Result<(), ReflectionError> {
    check_shapes(f, target, target)
}

fn vars(groups: &[(&str, usize)]) -> VarDecl {
    VarDecl::new(groups).expect("fixed names")
}

/// Outcome of restricting `rho'(f(z), f_bar(w))` to the complexified source.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MapCheck {
    pub pass: bool,
    /// Order through which the restriction was required to vanish.
    pub order: u32,
    /// The restriction, a series in `(z_1..z_n, w_1..w_{n-1})`.
    pub residual: TruncatedSeries,
}

impl MapCheck {
    /// Graded-lex least monomial of the residual, if any.
    pub fn offending(&self) -> Option<(&MultiIndex, &GaussRational)> {
        self.residual.leading_term()
    }

    pub fn residual_vars(&self) -> VarDecl {
        let n = (self.residual.nvars() + 1) / 2;
        vars(&[("z", n), ("w", n - 1)])
    }
}

/// Does `f` map `source` into `target` through order `k`?
pub fn check_maps_into(
    f: &SeriesMap,
    source: &Hypersurface,
    target: &Hypersurface,
    k: u32,
) -> Result<MapCheck, ReflectionError> {
    check_shapes(f, source, target)?;
    f.check_origin_preserving()?;
    let available = f.order().min(source.order()).min(target.order());
    if k > available {
        return Err(ReflectionError::OrderTooLarge { requested: k, available });
    }
    let n = source.n();
    let order = available;
    // s(z, w) = rho'(f(z), f_bar(w))
    let z_side: Vec<usize> = (0..n).collect();
    let w_side: Vec<usize> = (n..2 * n).collect();
    let mut both = Vec::with_capacity(2 * n);
    for c in f.components() {
        both.push(c.remap(2 * n, &z_side)?);
    }
    for c in f.components() {
        both.push(c.conjugate().remap(2 * n, &w_side)?);
    }
    let s = target.rho().compose(&SeriesMap::with_shape(2 * n, order, both)?)?;

    // w_n := Phi_bar(z, w') over (z, w')
    let nv = 2 * n - 1;
    let var = |k: usize| TruncatedSeries::var(nv, order, k);
    let graph = source.phi_bar().compose(&SeriesMap::with_shape(nv, order, (0..nv).map(var).collect())?)?;
    let args: Vec<TruncatedSeries> = (0..n).map(var).chain((n..nv).map(var)).chain([graph]).collect();
    let restricted = s.compose(&SeriesMap::with_shape(nv, order, args)?)?.truncate(k);
    Ok(MapCheck { pass: restricted.is_zero(), order: k, residual: restricted })
}

/// `R(z, lambda) = Phi_bar'(f(z), lambda)` in `(z_1..z_n, lambda_1..lambda_{n-1})`.
pub fn reflection_function(f: &SeriesMap, target: &Hypersurface) -> Result<TruncatedSeries, ReflectionError> {
    check_target_shape(f, target)?;
    let n = target.n();
    let nv = 2 * n - 1;
    let order = f.order().min(target.order());
    let z_side: Vec<usize> = (0..n).collect();
    let mut args = Vec::with_capacity(nv);
    for c in f.components() {
        args.push(c.remap(nv, &z_side)?);
    }
    args.extend((n..nv).map(|k| TruncatedSeries::var(nv, order, k)));
    Ok(target.phi_bar().compose(&SeriesMap::with_shape(nv, order, args)?)?)
}

pub fn reflection_vars(n: usize) -> VarDecl {
    vars(&[("z", n), ("lambda", n - 1)])
}

/// One `lambda^alpha` coefficient of `d_z^gamma R` along `z = v1(z')`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SegreCoefficient {
    pub alpha: MultiIndex,
    /// The coefficient of `lambda^alpha`, a series in `z'`.
    pub coefficient: TruncatedSeries,
    /// `alpha! * coefficient`; for `gamma = 0` this is `u_alpha`.
    pub psi: TruncatedSeries,
}

/// The `lambda^alpha` coefficients, `|alpha| <= cutoff`, of `d_z^gamma R` at
/// `z = v1(z') = (z', 0)`.
pub fn reflection_on_segre(
    f: &SeriesMap,
    source: &Hypersurface,
    target: &Hypersurface,
    gamma: &MultiIndex,
    cutoff: u32,
) -> Result<Vec<SegreCoefficient>, ReflectionError> {
    check_shapes(f, source, target)?;
    segre_maps(source)?;
    let n = source.n();
    let m = n - 1;
    if gamma.len() != n {
        return Err(SeriesError::ArityMismatch { expected: n, got: gamma.len() }.into());
    }
    let r = reflection_function(f, target)?;
    if gamma.degree() > r.order() {
        return Err(ReflectionError::DerivativeExhausts { derivative: gamma.degree(), order: r.order() });
    }
    let full_gamma = MultiIndex::new(gamma.exponents().iter().copied().chain(std::iter::repeat(0).take(m)));
    let dr = r.derive_multi(&full_gamma)?;
    let order = dr.order();
    let nv = 2 * m;
    let var = |k: usize| TruncatedSeries::var(nv, order, k);
    let args: Vec<TruncatedSeries> =
        (0..m).map(var).chain([TruncatedSeries::zero(nv, order)]).chain((m..nv).map(var)).collect();
    let on_v1 = dr.compose(&SeriesMap::with_shape(nv, order, args)?)?;
    let lambda: Vec<usize> = (m..nv).collect();
    let mut parts = on_v1.partial_coefficients(&lambda);
    let cutoff = cutoff.min(order);
    Ok(MultiIndex::up_to_degree(m, cutoff)
        .into_iter()
        .map(|alpha| {
            let coefficient = parts.remove(&alpha).unwrap_or_else(|| TruncatedSeries::zero(m, order - alpha.degree()));
            let psi = coefficient.scale(&alpha.factorial());
            SegreCoefficient { alpha, coefficient, psi }
        })
        .collect())
}

/// `u_alpha = alpha! * (phi'_alpha o f o v1)(z')`, computed by composition
/// rather than by coefficient extraction.
pub fn u_alpha_by_composition(
    f: &SeriesMap,
    source: &Hypersurface,
    target: &Hypersurface,
    cutoff: u32,
) -> Result<Vec<(MultiIndex, TruncatedSeries)>, ReflectionError> {
    check_shapes(f, source, target)?;
    let triple = segre_maps(source)?;
    let f_on_v1 = f.compose(&triple.v1)?;
    let family = crate::geometry::phi_family(target, cutoff.min(target.order()))?;
    family
        .into_iter()
        .map(|(alpha, phi)| {
            let u = phi.compose(&f_on_v1)?.scale(&alpha.factorial());
            Ok((alpha, u))
        })
        .collect()
}

/// Both sides of `R(v3, f_bar' o v2_bar) = f_bar_n o v2_bar` over `(z', xi, eta)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SegreIdentity {
    pub lhs: TruncatedSeries,
    pub rhs: TruncatedSeries,
    /// `lhs - rhs`, exact through `order`.
    pub residual: TruncatedSeries,
    pub order: u32,
}

impl SegreIdentity {
    pub fn holds(&self) -> bool {
        self.residual.is_zero()
    }
}

pub fn segre_identity_vars(n: usize) -> VarDecl {
    vars(&[("z", n - 1), ("xi", n - 1), ("eta", n - 1)])
}

/// The third-Segre-set identity without checking its hypotheses; the residual
/// certifies failure for maps that do not send `source` into `target`.
pub fn segre_reflection_residual(
    f: &SeriesMap,
    source: &Hypersurface,
    target: &Hypersurface,
) -> Result<SegreIdentity, ReflectionError> {
    check_shapes(f, source, target)?;
    let triple = segre_maps(source)?;
    let n = source.n();
    let m = n - 1;
    let nv = 3 * m;
    let r = reflection_function(f, target)?;

    // v2_bar(xi, eta) = (xi, Phi_bar(eta, 0, xi)), lifted to (z', xi, eta)
    let v2_bar = triple.v2.conjugate().remap_source(nv, &(m..3 * m).collect::<Vec<_>>())?;
    let f_bar_on_v2 = f.conjugate().compose(&v2_bar)?;
    let order = r.order().min(triple.v3.order()).min(f_bar_on_v2.order());

    let mut args: Vec<TruncatedSeries> = triple.v3.components().to_vec();
    args.extend(f_bar_on_v2.components()[..m].iter().cloned());
    let lhs = r.compose(&SeriesMap::with_shape(nv, order, args)?)?;
    let rhs = f_bar_on_v2.component(m).truncate(order);
    let residual = &lhs - &rhs;
    let order = residual.order();
    Ok(SegreIdentity { lhs, rhs, residual, order })
}

/// The third-Segre-set identity, refusing to run unless `f` is known to map
/// `source` into `target` and `source` is certified minimal.
pub fn segre_reflection_identity(
    f: &SeriesMap,
    source: &Hypersurface,
    target: &Hypersurface,
    check: &MapCheck,
    minimality: &Minimality,
) -> Result<SegreIdentity, ReflectionError> {
    if !check.pass {
        return Err(ReflectionError::Prerequisite("the map check did not pass".into()));
    }
    if !minimality.minimal || !minimality.rank.is_certified() {
        return Err(ReflectionError::Prerequisite("the source is not certified minimal".into()));
    }
    segre_reflection_residual(f, source, target)
}

/// The reflection function with its Segre coefficients `u_alpha`.
#[derive(Debug, Clone, PartialEq)]
pub struct ReflectionReport {
    pub n: usize,
    pub r: TruncatedSeries,
    /// `(alpha, u_alpha)` for every `|alpha| <= cutoff`.
    pub u_alpha: Vec<(MultiIndex, TruncatedSeries)>,
    pub cutoff: u32,
    /// True when every `u_alpha` with `|alpha| = cutoff` vanishes, i.e. the
    /// family looks finite at this truncation.
    pub polynomial_flag: bool,
    pub evidence: Option<Evidence>,
}

pub fn reflection_report(
    f: &SeriesMap,
    source: &Hypersurface,
    target: &Hypersurface,
    cutoff: u32,
) -> Result<ReflectionReport, ReflectionError> {
    let r = reflection_function(f, target)?;
    let n = source.n();
    let coeffs = reflection_on_segre(f, source, target, &MultiIndex::zero(n), cutoff)?;
    let cutoff = coeffs.iter().map(|c| c.alpha.degree()).max().unwrap_or(0);
    let polynomial_flag = coeffs.iter().filter(|c| c.alpha.degree() == cutoff).all(|c| c.psi.is_zero());
    Ok(ReflectionReport {
        n,
        r,
        u_alpha: coeffs.into_iter().map(|c| (c.alpha, c.psi)).collect(),
        cutoff,
        polynomial_flag,
        evidence: None,
    })
}

/// `u_1_2` style block label for a multi-index.
pub fn alpha_label(prefix: &str, alpha: &MultiIndex) -> String {
    let parts: Vec<String> = alpha.exponents().iter().map(|e| e.to_string()).collect();
    if parts.is_empty() {
        prefix.to_string()
    } else {
        format!("{prefix}_{}", parts.join("_"))
    }
}

impl ReflectionReport {
    /// Canonical document; only nonzero `u_alpha` are listed.
    pub fn to_document(&self) -> Document {
        let mut d = Document::new("reflection-report");
        d.push_meta("n", self.n)
            .push_meta("order", self.r.order())
            .push_meta("cutoff", self.cutoff)
            .push_meta("polynomial", self.polynomial_flag);
        d.push_series("R", &reflection_vars(self.n), &self.r);
        let zp = vars(&[("z", self.n - 1)]);
        for (alpha, u) in &self.u_alpha {
            if !u.is_zero() {
                d.push_series(&alpha_label("u", alpha), &zp, u);
            }
        }
        if let Some(ev) = &self.evidence {
            ev.write_diagnostics(&mut d);
        }
        d
    }
}
