//! Exact formal CR geometry of real hypersurfaces in complex space.
//!
//! The [`series`] module is the arithmetic kernel: truncated multivariate power
//! series over the Gaussian rationals. [`parse`] reads polynomial expressions and
//! the canonical document format, [`geometry`] builds hypersurfaces and their
//! Segre maps and invariants, and [`reflection`] studies formal maps between
//! hypersurfaces.

pub mod corpus;
pub mod geometry;
pub mod number;
pub mod parse;
pub mod reflection;
pub mod series;
pub mod vars;

pub use number::GaussRational;
pub use series::{MultiIndex, SeriesError, SeriesMap, TruncatedSeries};
pub use vars::VarDecl;
