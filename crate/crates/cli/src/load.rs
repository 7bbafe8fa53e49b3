use std::fs;
use std::path::Path;

use crkit_core::geometry::{GeometryError, Hypersurface};
use crkit_core::parse::{expect_kind, hypersurface_from_document, map_from_blocks, Document, HypersurfaceSpec};
use crkit_core::SeriesMap;

use crate::Failure;

pub fn read_document(path: &Path) -> Result<Document, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    Document::parse(&text).map_err(|e| {
        let lines: Vec<String> = e.issues.iter().map(|i| format!("{}: {i}", path.display())).collect();
        Failure::Input(lines.join("\n"))
    })
}

fn input_error(path: &Path, e: impl std::fmt::Display) -> Failure {
    Failure::Input(format!("{}: {e}", path.display()))
}

/// The hypersurface data of a document, truncated to at most `order`.
pub fn load_spec(path: &Path, order: u32) -> Result<HypersurfaceSpec, Failure> {
    let doc = read_document(path)?;
    let mut spec = hypersurface_from_document(&doc).map_err(|e| input_error(path, e))?;
    if spec.rho.order() > order {
        spec.rho = spec.rho.truncate(order);
    }
    Ok(spec)
}

/// Reality and graph failures are check failures; every other problem is an
/// input error.
pub fn geometry_failure(path: &Path, e: GeometryError) -> Failure {
    match e {
        GeometryError::Reality { .. } | GeometryError::GraphIdentity { .. } => {
            Failure::Check(format!("{}: {e}", path.display()))
        }
        other => input_error(path, other),
    }
}

pub fn load_hypersurface(path: &Path, order: u32) -> Result<Hypersurface, Failure> {
    let spec = load_spec(path, order)?;
    Hypersurface::from_spec(&spec).map_err(|e| geometry_failure(path, e))
}

pub fn load_map(path: &Path, order: u32) -> Result<SeriesMap, Failure> {
    let doc = read_document(path)?;
    expect_kind(&doc, "map").map_err(|e| input_error(path, e))?;
    let (_, f) = map_from_blocks(&doc, "f").map_err(|e| input_error(path, e))?;
    Ok(if f.order() > order { f.truncate(order) } else { f })
}
