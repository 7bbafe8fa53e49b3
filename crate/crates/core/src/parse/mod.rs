//! Reading and writing series: the expression grammar for authoring and the
//! canonical document format for storage.

mod document;
mod expr;

pub use document::{
    expect_kind, hypersurface_from_document, map_document, map_from_blocks, parse_hypersurface_document,
    parse_map_document, parse_series_document, series_document, Block, Document, DocumentError, HypersurfaceSpec,
    Issue, FORMAT_VERSION,
};
pub use expr::{parse_ast, parse_expr, parse_expr_with_warnings, Expr, ExprError, ExprErrorKind, ExprWarning};
