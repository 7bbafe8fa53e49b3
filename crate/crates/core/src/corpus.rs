//! The bundled example hypersurfaces and maps.

use std::fs;
use std::io;
use std::path::Path;

use crate::geometry::{from_defining, Hypersurface};
use crate::parse::{map_document, parse_expr, Document};
use crate::reflection::exp_series;
use crate::series::{SeriesMap, TruncatedSeries};
use crate::vars::VarDecl;

/// A hypersurface given by its defining function in `(z, w)`.
#[derive(Debug, Clone, Copy)]
pub struct HypersurfaceEntry {
    pub name: &'static str,
    pub n: usize,
    pub defining: &'static str,
    pub minimal: bool,
    pub degeneracy: usize,
}

pub const SPHERE: HypersurfaceEntry =
    HypersurfaceEntry { name: "sphere", n: 2, defining: "-(i/2)*(z2 - w2) - z1*w1", minimal: true, degeneracy: 0 };
pub const LEVI_FLAT: HypersurfaceEntry =
    HypersurfaceEntry { name: "levi_flat", n: 2, defining: "-(i/2)*(z2 - w2)", minimal: false, degeneracy: 1 };
pub const DEGENERATE_C3: HypersurfaceEntry = HypersurfaceEntry {
    name: "degenerate_c3",
    n: 3,
    defining: "-(i/2)*(z3 - w3) - z1*z2*w1*w2",
    minimal: true,
    degeneracy: 1,
};
pub const PERTURBED_SPHERE: HypersurfaceEntry = HypersurfaceEntry {
    name: "perturbed_sphere",
    n: 2,
    defining: "-(i/2)*((z2 + z1^2) - (w2 + w1^2)) - z1*w1",
    minimal: true,
    degeneracy: 0,
};

pub const HYPERSURFACES: [HypersurfaceEntry; 4] = [SPHERE, LEVI_FLAT, DEGENERATE_C3, PERTURBED_SPHERE];

impl HypersurfaceEntry {
    pub fn build(&self, order: u32) -> Hypersurface {
        let vars = VarDecl::new(&[("z", self.n), ("w", self.n)]).expect("fixed names");
        let rho = parse_expr(self.defining, &vars, order).expect("corpus expressions parse");
        from_defining(&rho, self.n).expect("corpus hypersurfaces are real")
    }
}

#[derive(Debug, Clone)]
pub struct MapEntry {
    pub name: &'static str,
    pub source: HypersurfaceEntry,
    pub target: HypersurfaceEntry,
    pub map: SeriesMap,
    /// Whether the map sends source into target.
    pub maps_into: bool,
}

fn polynomial_map(n: usize, components: &[&str], order: u32) -> SeriesMap {
    let vars = VarDecl::new(&[("z", n)]).expect("fixed names");
    SeriesMap::new(components.iter().map(|c| parse_expr(c, &vars, order).expect("corpus expressions parse")).collect())
        .expect("nonempty")
}

/// `(z1 e^h, z2 e^-h, z3)` for an origin-vanishing `h` in three variables.
pub fn f_h(h: &TruncatedSeries) -> SeriesMap {
    let order = h.order();
    let z = |k| TruncatedSeries::var(3, order, k);
    let up = exp_series(h).expect("h vanishes at the origin");
    let down = exp_series(&-h).expect("h vanishes at the origin");
    SeriesMap::new(vec![&z(0) * &up, &z(1) * &down, z(2)]).expect("nonempty")
}

/// The truncated `h` used for the two `f_h` corpus maps.
pub const H: &str = "z1 + z2*z3";

pub fn h_series(scale: i64, order: u32) -> TruncatedSeries {
    let vars = VarDecl::new(&[("z", 3)]).expect("fixed names");
    parse_expr(&format!("{scale}*({H})"), &vars, order).expect("fixed expression")
}

pub fn maps(order: u32) -> Vec<MapEntry> {
    let entry = |name, source, target, map, maps_into| MapEntry { name, source, target, map, maps_into };
    vec![
        entry("sphere_dilation", SPHERE, SPHERE, polynomial_map(2, &["2*z1", "4*z2"], order), true),
        entry("sphere_rotation", SPHERE, SPHERE, polynomial_map(2, &["(3/5 + 4/5*i)*z1", "z2"], order), true),
        entry("bad_dilation", SPHERE, SPHERE, polynomial_map(2, &["z1", "2*z2"], order), false),
        entry("fh_1", DEGENERATE_C3, DEGENERATE_C3, f_h(&h_series(1, order)), true),
        entry("fh_2", DEGENERATE_C3, DEGENERATE_C3, f_h(&h_series(2, order)), true),
    ]
}

pub fn map_entry_document(entry: &MapEntry) -> Document {
    let vars = VarDecl::new(&[("z", entry.map.source_nvars())]).expect("fixed names");
    let mut doc = map_document(&vars, &entry.map);
    doc.push_meta("source", entry.source.name).push_meta("target", entry.target.name);
    doc
}

/// Writes every corpus object as `<name>.crk` under `dir`.
pub fn write_corpus(dir: &Path, order: u32) -> io::Result<Vec<String>> {
    fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    for h in HYPERSURFACES {
        let file = format!("{}.crk", h.name);
        fs::write(dir.join(&file), h.build(order).to_document().to_text())?;
        written.push(file);
    }
    for m in maps(order) {
        let file = format!("{}.crk", m.name);
        fs::write(dir.join(&file), map_entry_document(&m).to_text())?;
        written.push(file);
    }
    Ok(written)
}
