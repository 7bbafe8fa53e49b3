//! The canonical line-based document format.
//!
//! ```text
//! crkit-series/1
//! kind: hypersurface
//! n: 2
//!
//! series rho
//! variables: z:2 w:2
//! order: 8
//! term 0 1 0 0 = 0/1 -1/2
//! term 0 0 0 1 = 0/1 1/2
//! term 1 0 1 0 = -1/1 0/1
//! end
//! ```
//!
//! Terms are listed in strictly increasing graded-lex order, with canonical
//! `p/q` real and imaginary parts and no zero coefficients, so equal values
//! always produce equal bytes. An optional `diagnostic` section holds
//! floating-point `key: value` lines that never take part in exact checks.
//! Blank lines and lines starting with `#` are ignored when reading.

use std::fmt;

use num_traits::Zero;
use thiserror::Error;

use crate::number::{format_fraction, parse_canonical_fraction, GaussRational};
use crate::series::{MultiIndex, SeriesMap, TruncatedSeries};
use crate::vars::VarDecl;

pub const FORMAT_VERSION: &str = "crkit-series/1";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Issue {
    pub line: usize,
    pub message: String,
}

impl fmt::Display for Issue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.line == 0 {
            write!(f, "{}", self.message)
        } else {
            write!(f, "line {}: {}", self.line, self.message)
        }
    }
}

/// Every problem found in a document, in line order.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct DocumentError {
    pub issues: Vec<Issue>,
}

impl fmt::Display for DocumentError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let lines: Vec<String> = self.issues.iter().map(|i| i.to_string()).collect();
        f.write_str(&lines.join("\n"))
    }
}

impl DocumentError {
    pub fn single(line: usize, message: impl Into<String>) -> Self {
        Self { issues: vec![Issue { line, message: message.into() }] }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block {
    pub label: String,
    pub vars: VarDecl,
    pub series: TruncatedSeries,
    /// Line of the `series` keyword (0 for documents built in memory).
    pub line: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Document {
    meta: Vec<(String, String)>,
    blocks: Vec<Block>,
    diagnostics: Vec<(String, String)>,
}

impl Document {
    pub fn new(kind: &str) -> Self {
        let mut d = Self::default();
        d.push_meta("kind", kind);
        d
    }

    pub fn push_meta(&mut self, key: &str, value: impl fmt::Display) -> &mut Self {
        self.meta.push((key.to_string(), value.to_string()));
        self
    }

    pub fn push_series(&mut self, label: &str, vars: &VarDecl, series: &TruncatedSeries) -> &mut Self {
        assert_eq!(vars.len(), series.nvars(), "declaration does not match series `{label}`");
        self.blocks.push(Block { label: label.to_string(), vars: vars.clone(), series: series.clone(), line: 0 });
        self
    }

    pub fn push_diagnostic(&mut self, key: &str, value: impl fmt::Display) -> &mut Self {
        self.diagnostics.push((key.to_string(), value.to_string()));
        self
    }

    pub fn kind(&self) -> Option<&str> {
        self.meta("kind")
    }

    pub fn meta(&self, key: &str) -> Option<&str> {
        self.meta.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn meta_entries(&self) -> &[(String, String)] {
        &self.meta
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn block(&self, label: &str) -> Option<&Block> {
        self.blocks.iter().find(|b| b.label == label)
    }

    pub fn diagnostics(&self) -> &[(String, String)] {
        &self.diagnostics
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(FORMAT_VERSION);
        out.push('\n');
        for (k, v) in &self.meta {
            out.push_str(&format!("{k}: {v}\n"));
        }
        for b in &self.blocks {
            out.push('\n');
            out.push_str(&format!("series {}\n", b.label));
            out.push_str(&format!("variables: {}\n", b.vars));
            out.push_str(&format!("order: {}\n", b.series.order()));
            for (m, c) in b.series.terms() {
                let exps: Vec<String> = m.exponents().iter().map(|e| e.to_string()).collect();
                out.push_str(&format!(
                    "term {} = {} {}\n",
                    exps.join(" "),
                    format_fraction(c.re()),
                    format_fraction(c.im())
                ));
            }
            out.push_str("end\n");
        }
        if !self.diagnostics.is_empty() {
            out.push_str("\ndiagnostic\n");
            for (k, v) in &self.diagnostics {
                out.push_str(&format!("{k}: {v}\n"));
            }
            out.push_str("end\n");
        }
        out
    }

    /// Parses and validates a document, collecting every issue found.
    pub fn parse(text: &str) -> Result<Document, DocumentError> {
        Reader::default().run(text)
    }
}

#[derive(Default)]
struct Reader {
    issues: Vec<Issue>,
}

enum State {
    Meta,
    Between,
    Series(PartialBlock),
    Diagnostic,
}

struct PartialBlock {
    label: String,
    line: usize,
    vars: Option<VarDecl>,
    order: Option<u32>,
    terms: Vec<(MultiIndex, GaussRational)>,
    prev: Option<MultiIndex>,
}

impl Reader {
    fn issue(&mut self, line: usize, message: impl Into<String>) {
        self.issues.push(Issue { line, message: message.into() });
    }

    fn run(mut self, text: &str) -> Result<Document, DocumentError> {
        let mut doc = Document::default();
        let mut lines = text.lines().enumerate().map(|(k, l)| (k + 1, l));
        match lines.next() {
            Some((_, l)) if l.trim_end() == FORMAT_VERSION => {}
            Some((_, l)) if l.starts_with("crkit-series/") => {
                self.issue(1, format!("unsupported format version `{}` (expected `{FORMAT_VERSION}`)", l.trim_end()));
                return Err(DocumentError { issues: self.issues });
            }
            _ => {
                self.issue(1, format!("missing `{FORMAT_VERSION}` header"));
                return Err(DocumentError { issues: self.issues });
            }
        }
        let mut state = State::Meta;
        for (no, raw) in lines {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            state = match state {
                State::Meta | State::Between => {
                    let in_meta = matches!(state, State::Meta);
                    if let Some(label) = line.strip_prefix("series ") {
                        let label = label.trim();
                        if label.is_empty() || label.contains(char::is_whitespace) {
                            self.issue(no, format!("bad series label `{label}`"));
                        }
                        if doc.blocks.iter().any(|b| b.label == label) {
                            self.issue(no, format!("duplicate series `{label}`"));
                        }
                        State::Series(PartialBlock {
                            label: label.to_string(),
                            line: no,
                            vars: None,
                            order: None,
                            terms: Vec::new(),
                            prev: None,
                        })
                    } else if line == "diagnostic" {
                        State::Diagnostic
                    } else if in_meta {
                        match key_value(line) {
                            Some((k, v)) if doc.meta(k).is_some() => {
                                self.issue(no, format!("duplicate key `{k}`"));
                                let _ = v;
                            }
                            Some((k, v)) => doc.meta.push((k.to_string(), v.to_string())),
                            None => self.issue(no, format!("expected `key: value`, found `{line}`")),
                        }
                        State::Meta
                    } else {
                        self.issue(no, format!("expected `series` or `diagnostic`, found `{line}`"));
                        State::Between
                    }
                }
                State::Series(mut b) => {
                    if line == "end" {
                        if let Some(block) = self.finish(b) {
                            doc.blocks.push(block);
                        }
                        State::Between
                    } else {
                        self.series_line(&mut b, no, line);
                        State::Series(b)
                    }
                }
                State::Diagnostic => {
                    if line == "end" {
                        State::Between
                    } else {
                        match key_value(line) {
                            Some((k, v)) => doc.diagnostics.push((k.to_string(), v.to_string())),
                            None => self.issue(no, format!("expected `key: value`, found `{line}`")),
                        }
                        State::Diagnostic
                    }
                }
            };
        }
        match state {
            State::Series(b) => self.issue(b.line, format!("series `{}` is missing `end`", b.label)),
            State::Diagnostic => self.issue(0, "diagnostic section is missing `end`"),
            _ => {}
        }
        if doc.kind().is_none() {
            self.issue(0, "missing `kind` metadata");
        }
        if self.issues.is_empty() {
            Ok(doc)
        } else {
            self.issues.sort_by_key(|i| i.line);
            Err(DocumentError { issues: self.issues })
        }
    }

    fn series_line(&mut self, b: &mut PartialBlock, no: usize, line: &str) {
        if let Some(rest) = line.strip_prefix("term ") {
            let (Some(vars), Some(order)) = (&b.vars, b.order) else {
                self.issue(no, "`term` before `variables` and `order`");
                return;
            };
            let Some((exps, coeff)) = rest.split_once('=') else {
                self.issue(no, "expected `term <exponents> = <re> <im>`");
                return;
            };
            let exps: Result<Vec<u32>, _> = exps.split_whitespace().map(|e| e.parse::<u32>()).collect();
            let Ok(exps) = exps else {
                self.issue(no, "exponents must be nonnegative integers");
                return;
            };
            if exps.len() != vars.len() {
                self.issue(no, format!("expected {} exponents, found {}", vars.len(), exps.len()));
                return;
            }
            let parts: Vec<&str> = coeff.split_whitespace().collect();
            if parts.len() != 2 {
                self.issue(no, "expected real and imaginary parts `p/q p/q`");
                return;
            }
            let re = parse_canonical_fraction(parts[0]);
            let im = parse_canonical_fraction(parts[1]);
            let (re, im) = match (re, im) {
                (Ok(re), Ok(im)) => (re, im),
                (re, im) => {
                    for e in [re.err(), im.err()].into_iter().flatten() {
                        self.issue(no, e);
                    }
                    return;
                }
            };
            let c = GaussRational::new(re, im);
            let m = MultiIndex::new(exps);
            if c.is_zero() {
                self.issue(no, "zero coefficient: zero terms must be omitted");
            }
            if m.degree() > order {
                self.issue(no, format!("term of degree {} exceeds order {order}", m.degree()));
            }
            match &b.prev {
                Some(p) if *p == m => self.issue(no, format!("duplicate exponent vector {m}")),
                Some(p) if *p > m => self.issue(no, format!("term {m} out of graded-lex order")),
                _ => {}
            }
            b.prev = Some(m.clone());
            b.terms.push((m, c));
        } else if let Some((k, v)) = key_value(line) {
            match k {
                "variables" if b.vars.is_some() => self.issue(no, "duplicate `variables`"),
                "variables" => match VarDecl::parse(v) {
                    Ok(d) => b.vars = Some(d),
                    Err(e) => self.issue(no, e.to_string()),
                },
                "order" if b.order.is_some() => self.issue(no, "duplicate `order`"),
                "order" => match v.parse::<u32>() {
                    Ok(o) if o.to_string() == v => b.order = Some(o),
                    _ => self.issue(no, format!("bad order `{v}`")),
                },
                _ => self.issue(no, format!("unknown key `{k}` in series block")),
            }
        } else {
            self.issue(no, format!("unexpected line `{line}` in series block"));
        }
    }

    fn finish(&mut self, b: PartialBlock) -> Option<Block> {
        let (Some(vars), Some(order)) = (b.vars, b.order) else {
            self.issue(b.line, format!("series `{}` needs `variables` and `order`", b.label));
            return None;
        };
        let series = TruncatedSeries::from_terms(vars.len(), order, b.terms).ok()?;
        Some(Block { label: b.label, vars, series, line: b.line })
    }
}

fn key_value(line: &str) -> Option<(&str, &str)> {
    let (k, v) = line.split_once(':')?;
    let k = k.trim();
    if k.is_empty() || k.contains(char::is_whitespace) {
        return None;
    }
    Some((k, v.trim()))
}

/// A single series as a document of kind `series`.
pub fn series_document(label: &str, vars: &VarDecl, s: &TruncatedSeries) -> Document {
    let mut d = Document::new("series");
    d.push_series(label, vars, s);
    d
}

/// Reads a document of kind `series` holding exactly one block.
pub fn parse_series_document(text: &str) -> Result<(VarDecl, TruncatedSeries), DocumentError> {
    let doc = Document::parse(text)?;
    expect_kind(&doc, "series")?;
    match doc.blocks() {
        [b] => Ok((b.vars.clone(), b.series.clone())),
        other => Err(DocumentError::single(0, format!("expected one series, found {}", other.len()))),
    }
}

/// A map as a document of kind `map` with components `f1, f2, …`.
pub fn map_document(vars: &VarDecl, f: &SeriesMap) -> Document {
    let mut d = Document::new("map");
    d.push_meta("components", f.target_nvars());
    for (k, c) in f.components().iter().enumerate() {
        d.push_series(&format!("f{}", k + 1), vars, c);
    }
    d
}

pub fn parse_map_document(text: &str) -> Result<(VarDecl, SeriesMap), DocumentError> {
    let doc = Document::parse(text)?;
    expect_kind(&doc, "map")?;
    map_from_blocks(&doc, "f")
}

/// Collects blocks `<prefix>1, <prefix>2, …` into a map over a shared
/// declaration.
pub fn map_from_blocks(doc: &Document, prefix: &str) -> Result<(VarDecl, SeriesMap), DocumentError> {
    let mut issues = Vec::new();
    let mut comps = Vec::new();
    let mut vars: Option<VarDecl> = None;
    for k in 1.. {
        let Some(b) = doc.block(&format!("{prefix}{k}")) else { break };
        match &vars {
            None => vars = Some(b.vars.clone()),
            Some(v) if *v != b.vars => issues.push(Issue {
                line: b.line,
                message: format!("component `{}` declares `{}`, expected `{v}`", b.label, b.vars),
            }),
            _ => {}
        }
        comps.push(b.series.clone());
    }
    if let Some(declared) = doc.meta("components") {
        if declared != comps.len().to_string() {
            issues.push(Issue {
                line: 0,
                message: format!("`components: {declared}` but {} components found", comps.len()),
            });
        }
    }
    let Some(vars) = vars else {
        issues.push(Issue { line: 0, message: format!("no `{prefix}1` component") });
        return Err(DocumentError { issues });
    };
    if !issues.is_empty() {
        return Err(DocumentError { issues });
    }
    let f = SeriesMap::new(comps).map_err(|e| DocumentError::single(0, e.to_string()))?;
    Ok((vars, f))
}

/// The defining data of a hypersurface as stored on disk; validated into a
/// geometric object elsewhere.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HypersurfaceSpec {
    pub n: usize,
    pub vars: VarDecl,
    pub rho: TruncatedSeries,
    pub declared_normal: Option<bool>,
}

pub fn parse_hypersurface_document(text: &str) -> Result<HypersurfaceSpec, DocumentError> {
    let doc = Document::parse(text)?;
    hypersurface_from_document(&doc)
}

pub fn hypersurface_from_document(doc: &Document) -> Result<HypersurfaceSpec, DocumentError> {
    expect_kind(doc, "hypersurface")?;
    let mut issues = Vec::new();
    let n = match doc.meta("n").map(|v| v.parse::<usize>()) {
        Some(Ok(n)) if n >= 1 => Some(n),
        Some(_) => {
            issues.push(Issue { line: 0, message: "`n` must be a positive integer".into() });
            None
        }
        None => {
            issues.push(Issue { line: 0, message: "missing `n` metadata".into() });
            None
        }
    };
    let declared_normal = match doc.meta("normal") {
        None => None,
        Some("true") => Some(true),
        Some("false") => Some(false),
        Some(other) => {
            issues.push(Issue { line: 0, message: format!("`normal` must be true or false, found `{other}`") });
            None
        }
    };
    let rho = doc.block("rho");
    if rho.is_none() {
        issues.push(Issue { line: 0, message: "missing `rho` series".into() });
    }
    if let (Some(n), Some(b)) = (n, rho) {
        if b.vars.len() != 2 * n {
            issues.push(Issue {
                line: b.line,
                message: format!("`rho` must have {} variables for n = {n}, found {}", 2 * n, b.vars.len()),
            });
        }
    }
    match (n, rho) {
        (Some(n), Some(b)) if issues.is_empty() => {
            Ok(HypersurfaceSpec { n, vars: b.vars.clone(), rho: b.series.clone(), declared_normal })
        }
        _ => Err(DocumentError { issues }),
    }
}

pub fn expect_kind(doc: &Document, kind: &str) -> Result<(), DocumentError> {
    match doc.kind() {
        Some(k) if k == kind => Ok(()),
        Some(k) => Err(DocumentError::single(0, format!("expected a `{kind}` document, found `{k}`"))),
        None => Err(DocumentError::single(0, "missing `kind` metadata")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_expr;

    fn sphere() -> (VarDecl, TruncatedSeries) {
        let vars = VarDecl::parse("z:2 w:2").unwrap();
        let rho = parse_expr("-(i/2)*(z2 - w2) - z1*w1", &vars, 8).unwrap();
        (vars, rho)
    }

    #[test]
    fn canonical_text() {
        let (vars, rho) = sphere();
        let text = series_document("rho", &vars, &rho).to_text();
        let expected = "crkit-series/1\nkind: series\n\nseries rho\nvariables: z:2 w:2\norder: 8\n\
                        term 0 1 0 0 = 0/1 -1/2\nterm 0 0 0 1 = 0/1 1/2\nterm 1 0 1 0 = -1/1 0/1\nend\n";
        assert_eq!(text, expected);
        assert_eq!(parse_series_document(&text).unwrap(), (vars, rho));
    }

    #[test]
    fn zero_series_has_no_terms() {
        let vars = VarDecl::parse("x:1").unwrap();
        let text = series_document("s", &vars, &TruncatedSeries::zero(1, 3)).to_text();
        assert!(!text.contains("term"));
        assert!(parse_series_document(&text).unwrap().1.is_zero());
    }

    fn body(terms: &str) -> String {
        format!("crkit-series/1\nkind: series\nseries s\nvariables: x:2\norder: 4\n{terms}end\n")
    }

    #[test]
    fn rejects_non_canonical_terms() {
        let zero = Document::parse(&body("term 1 0 = 0/1 0/1\n")).unwrap_err();
        assert!(zero.issues[0].message.contains("zero coefficient"));
        assert_eq!(zero.issues[0].line, 6);
        let dup = Document::parse(&body("term 1 0 = 1/1 0/1\nterm 1 0 = 2/1 0/1\n")).unwrap_err();
        assert!(dup.issues[0].message.contains("duplicate"));
        let unsorted = Document::parse(&body("term 0 1 = 1/1 0/1\nterm 1 0 = 2/1 0/1\n")).unwrap_err();
        assert!(unsorted.issues[0].message.contains("order"));
        let frac = Document::parse(&body("term 1 0 = 2/4 0/1\n")).unwrap_err();
        assert!(frac.issues[0].message.contains("non-canonical"));
        let deg = Document::parse(&body("term 5 0 = 1/1 0/1\n")).unwrap_err();
        assert!(deg.issues[0].message.contains("exceeds order"));
    }

    #[test]
    fn collects_all_issues() {
        let err = Document::parse(&body("term 1 0 = 0/1 0/1\nterm 0 1 = 1/2 x\nterm 0 0 1 = 1/1 0/1\n")).unwrap_err();
        assert_eq!(err.issues.iter().map(|i| i.line).collect::<Vec<_>>(), vec![6, 7, 8]);
    }

    #[test]
    fn version_and_structure() {
        let e = Document::parse("crkit-series/2\nkind: series\n").unwrap_err();
        assert!(e.issues[0].message.contains("unsupported format version"));
        assert!(Document::parse("hello\n").is_err());
        assert!(Document::parse("crkit-series/1\nkind: series\nseries s\nvariables: x:1\norder: 2\n").is_err());
        assert!(Document::parse("crkit-series/1\n").is_err());
    }

    #[test]
    fn diagnostics_round_trip() {
        let (vars, rho) = sphere();
        let mut d = series_document("rho", &vars, &rho);
        d.push_diagnostic("radius", 2.5f64);
        let text = d.to_text();
        assert!(text.ends_with("\ndiagnostic\nradius: 2.5\nend\n"));
        let back = Document::parse(&text).unwrap();
        assert_eq!(back.diagnostics(), d.diagnostics());
        assert_eq!(back.to_text(), text);
    }

    #[test]
    fn hypersurface_spec() {
        let (vars, rho) = sphere();
        let mut d = Document::new("hypersurface");
        d.push_meta("n", 2).push_meta("normal", true).push_series("rho", &vars, &rho);
        let spec = parse_hypersurface_document(&d.to_text()).unwrap();
        assert_eq!(spec.n, 2);
        assert_eq!(spec.declared_normal, Some(true));
        assert_eq!(spec.rho, rho);
        let mut bad = Document::new("hypersurface");
        bad.push_meta("n", 3).push_series("rho", &vars, &rho);
        assert!(parse_hypersurface_document(&bad.to_text()).is_err());
    }

    #[test]
    fn map_round_trip() {
        let vars = VarDecl::parse("z:2").unwrap();
        let f =
            SeriesMap::new(vec![parse_expr("2*z1", &vars, 6).unwrap(), parse_expr("4*z2 + i*z1^3", &vars, 6).unwrap()])
                .unwrap();
        let text = map_document(&vars, &f).to_text();
        assert_eq!(parse_map_document(&text).unwrap(), (vars, f));
    }
}
