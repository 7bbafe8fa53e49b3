//! Canonical serializations pinned byte for byte. Set `CRKIT_BLESS=1` to
//! rewrite the files after an intended format change.

use std::fs;
use std::path::{Path, PathBuf};

use crkit_core::corpus::{self, DEGENERATE_C3, PERTURBED_SPHERE, SPHERE};
use crkit_core::geometry::{normalize, Hypersurface};
use crkit_core::parse::{
    hypersurface_from_document, map_document, parse_hypersurface_document, parse_map_document, series_document,
    Document,
};
use crkit_core::reflection::reflection_report;
use crkit_core::vars::VarDecl;

fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden/v1")
}

fn check(name: &str, text: &str) {
    let path = golden_dir().join(name);
    if std::env::var_os("CRKIT_BLESS").is_some() {
        fs::create_dir_all(golden_dir()).unwrap();
        fs::write(&path, text).unwrap();
        return;
    }
    let expected = fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert_eq!(text, expected, "{name} drifted from its golden copy");
}

#[test]
fn sphere_defining_series() {
    let h = SPHERE.build(8);
    check("sphere_rho.crk", &series_document("rho", &h.rho_vars(), h.rho()).to_text());
    check("sphere_phi.crk", &series_document("phi", &h.phi_vars(), h.phi()).to_text());
}

#[test]
fn hypersurface_documents() {
    let h = SPHERE.build(8);
    let text = h.to_document().to_text();
    check("sphere.crk", &text);
    let spec = parse_hypersurface_document(&text).unwrap();
    assert_eq!(Hypersurface::from_spec(&spec).unwrap(), h);

    let (normal, _) = normalize(&PERTURBED_SPHERE.build(8)).unwrap();
    check("perturbed_sphere_normalized.crk", &normal.to_document().to_text());
}

#[test]
fn map_documents() {
    let vars = VarDecl::parse("z:2").unwrap();
    let entry = corpus::maps(8).into_iter().find(|m| m.name == "sphere_rotation").unwrap();
    let text = map_document(&vars, &entry.map).to_text();
    check("sphere_rotation.crk", &text);
    assert_eq!(parse_map_document(&text).unwrap().1, entry.map);
}

#[test]
fn reflection_report_document() {
    let c3 = DEGENERATE_C3.build(8);
    let f = corpus::f_h(&corpus::h_series(1, 8));
    let report = reflection_report(&f, &c3, &c3, 8).unwrap().with_evidence(1.0).unwrap();
    check("fh_reflection.crk", &report.to_document().to_text());
}

#[test]
fn bundled_corpus_is_current() {
    let bundled = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus");
    let fresh = tempfile::tempdir().unwrap();
    let written = corpus::write_corpus(fresh.path(), 12).unwrap();
    for file in &written {
        let want = fs::read_to_string(fresh.path().join(file)).unwrap();
        let have = fs::read_to_string(bundled.join(file)).unwrap_or_else(|e| panic!("{file}: {e}"));
        assert_eq!(have, want, "{file} is stale; regenerate with `crkit corpus -o corpus`");
        let doc = Document::parse(&have).unwrap();
        match doc.kind() {
            Some("hypersurface") => {
                Hypersurface::from_spec(&hypersurface_from_document(&doc).unwrap()).unwrap();
            }
            _ => {
                parse_map_document(&have).unwrap();
            }
        }
    }
    assert_eq!(written.len(), corpus::HYPERSURFACES.len() + corpus::maps(12).len());
}
