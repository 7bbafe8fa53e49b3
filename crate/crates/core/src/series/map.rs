use super::{MultiIndex, SeriesError, TruncatedSeries};
use crate::number::GaussRational;

use num_traits::Zero;

/// A tuple of series over a common source variable set.
///
/// All components share the same variable count and truncation order; the
/// constructor truncates every component to the least order supplied.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct SeriesMap {
    source_nvars: usize,
    order: u32,
    components: Vec<TruncatedSeries>,
}

impl SeriesMap {
    pub fn new(components: Vec<TruncatedSeries>) -> Result<Self, SeriesError> {
        let first = components.first().ok_or(SeriesError::ArityMismatch { expected: 1, got: 0 })?;
        let source_nvars = first.nvars();
        let order = components.iter().map(|c| c.order()).min().unwrap_or(0);
        Self::with_shape(source_nvars, order, components)
    }

    /// Like [`SeriesMap::new`] but with an explicit source arity and order, so
    /// that empty maps are representable.
    pub fn with_shape(source_nvars: usize, order: u32, components: Vec<TruncatedSeries>) -> Result<Self, SeriesError> {
        for c in &components {
            if c.nvars() != source_nvars {
                return Err(SeriesError::VarCountMismatch { left: source_nvars, right: c.nvars() });
            }
        }
        let order = components.iter().map(|c| c.order()).fold(order, u32::min);
        let components = components.into_iter().map(|c| c.truncate(order)).collect();
        Ok(Self { source_nvars, order, components })
    }

    pub fn identity(nvars: usize, order: u32) -> Self {
        Self {
            source_nvars: nvars,
            order,
            components: (0..nvars).map(|v| TruncatedSeries::var(nvars, order, v)).collect(),
        }
    }

    pub fn source_nvars(&self) -> usize {
        self.source_nvars
    }

    pub fn target_nvars(&self) -> usize {
        self.components.len()
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn components(&self) -> &[TruncatedSeries] {
        &self.components
    }

    pub fn component(&self, i: usize) -> &TruncatedSeries {
        &self.components[i]
    }

    pub fn into_components(self) -> Vec<TruncatedSeries> {
        self.components
    }

    pub fn is_origin_preserving(&self) -> bool {
        self.components.iter().all(|c| c.constant_term().is_zero())
    }

    pub(crate) fn check_origin_preserving(&self) -> Result<(), SeriesError> {
        match self.components.iter().position(|c| !c.constant_term().is_zero()) {
            Some(component) => Err(SeriesError::NotOriginPreserving { component }),
            None => Ok(()),
        }
    }

    pub fn truncate(&self, order: u32) -> Self {
        let order = order.min(self.order);
        Self {
            source_nvars: self.source_nvars,
            order,
            components: self.components.iter().map(|c| c.truncate(order)).collect(),
        }
    }

    pub fn conjugate(&self) -> Self {
        Self {
            source_nvars: self.source_nvars,
            order: self.order,
            components: self.components.iter().map(|c| c.conjugate()).collect(),
        }
    }

    /// `self ∘ inner`, componentwise.
    pub fn compose(&self, inner: &SeriesMap) -> Result<SeriesMap, SeriesError> {
        let order = self.order.min(inner.order);
        let components = self.components.iter().map(|c| c.compose(inner)).collect::<Result<Vec<_>, _>>()?;
        SeriesMap::with_shape(inner.source_nvars, order, components)
    }

    /// Linear part at the origin: `A[i][j] = ∂F_i/∂x_j(0)`.
    pub fn linear_part(&self) -> Vec<Vec<GaussRational>> {
        self.components
            .iter()
            .map(|c| (0..self.source_nvars).map(|j| c.coeff(&MultiIndex::unit(self.source_nvars, j))).collect())
            .collect()
    }

    /// Jacobian matrix of series, `J[i][j] = ∂F_i/∂x_j`, each of order `order − 1`.
    pub fn jacobian(&self) -> Result<Vec<Vec<TruncatedSeries>>, SeriesError> {
        self.components.iter().map(|c| (0..self.source_nvars).map(|j| c.derive(j)).collect()).collect()
    }

    /// Renames the source variables of every component; see
    /// [`TruncatedSeries::remap`].
    pub fn remap_source(&self, target_nvars: usize, mapping: &[usize]) -> Result<Self, SeriesError> {
        let components =
            self.components.iter().map(|c| c.remap(target_nvars, mapping)).collect::<Result<Vec<_>, _>>()?;
        SeriesMap::with_shape(target_nvars, self.order, components)
    }
}
