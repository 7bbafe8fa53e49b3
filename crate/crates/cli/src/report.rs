use crkit_core::parse::Document;
use crkit_core::vars::VarDecl;
use crkit_core::{GaussRational, MultiIndex, TruncatedSeries};

/// Ordered `key: value` lines plus attached series, rendered either as plain
/// text or as a canonical document.
pub struct Report {
    kind: String,
    lines: Vec<(String, String)>,
    series: Vec<(String, VarDecl, TruncatedSeries)>,
}

impl Report {
    pub fn new(kind: &str) -> Self {
        Self { kind: kind.to_string(), lines: Vec::new(), series: Vec::new() }
    }

    pub fn line(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.lines.push((key.to_string(), value.to_string()));
        self
    }

    pub fn series(&mut self, label: &str, vars: &VarDecl, s: &TruncatedSeries) -> &mut Self {
        self.series.push((label.to_string(), vars.clone(), s.clone()));
        self
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.lines {
            out.push_str(&format!("{k}: {v}\n"));
        }
        for (label, vars, s) in &self.series {
            out.push_str(&format!("{label} = {} + O({})\n", s.to_expr(vars), s.order() + 1));
        }
        out
    }

    pub fn to_document(&self) -> Document {
        let mut d = Document::new(&self.kind);
        for (k, v) in &self.lines {
            d.push_meta(&k.replace(' ', "_"), v);
        }
        for (label, vars, s) in &self.series {
            d.push_series(label, vars, s);
        }
        d
    }
}

pub fn monomial_expr(m: &MultiIndex, vars: &VarDecl) -> String {
    TruncatedSeries::monomial(m.degree() + 1, m.clone(), GaussRational::from(1)).to_expr(vars)
}

pub fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_and_document() {
        let vars = VarDecl::parse("z:2").unwrap();
        let s = TruncatedSeries::var(2, 3, 1);
        let mut r = Report::new("demo");
        r.line("maps into target", yes_no(true)).series("f", &vars, &s);
        assert_eq!(r.to_text(), "maps into target: yes\nf = z2 + O(4)\n");
        let d = r.to_document();
        assert_eq!(d.meta("maps_into_target"), Some("yes"));
        assert!(d.block("f").is_some());
        assert_eq!(monomial_expr(&MultiIndex::new([1, 2]), &vars), "z1*z2^2");
    }
}
