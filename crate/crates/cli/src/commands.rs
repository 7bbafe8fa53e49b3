use std::fs;
use std::path::Path;

use crkit_core::corpus::write_corpus;
use crkit_core::geometry::{
    check_reality, degeneracy_with_seed, is_minimal_with_seed, normalize, GeometryError, Hypersurface, Minimality,
};
use crkit_core::reflection::{
    alpha_label, check_maps_into, formal_containment, partial_convergence_with_seed, reflection_report,
    reflection_vars, segre_identity_vars, segre_reflection_identity, segre_reflection_residual,
    transcendence_generators, FormalMap, MapCheck, ReflectionError,
};
use crkit_core::series::RankResult;
use crkit_core::vars::VarDecl;
use crkit_core::TruncatedSeries;

use crate::config::{AnalyzeArgs, CorpusArgs, Format, MapArgs, NormalizeArgs, ReflectArgs, RunConfig};
use crate::load::{geometry_failure, load_hypersurface, load_map, load_spec};
use crate::report::{monomial_expr, yes_no, Report};
use crate::{Failure, Outcome};

fn vars(groups: &[(&str, usize)]) -> VarDecl {
    VarDecl::new(groups).expect("fixed names")
}

fn emit(r: &Report, format: Format) {
    match format {
        Format::Text => print!("{}", r.to_text()),
        Format::Doc => print!("{}", r.to_document().to_text()),
    }
}

fn outcome(ok: bool) -> Outcome {
    if ok {
        Outcome::Pass
    } else {
        Outcome::CheckFailed
    }
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

/// Adds rank lines; returns false if strict mode rejects a probable rank.
fn rank_lines(r: &mut Report, what: &str, rank: &RankResult, of: usize, vars: &VarDecl, cfg: &RunConfig) -> bool {
    let status = if rank.is_certified() { "certified" } else { "probable" };
    r.line(&format!("{what} rank"), format!("{} of {of} ({status})", rank.rank));
    if let Some(c) = &rank.certificate {
        let list = |v: &[usize]| v.iter().map(|k| k.to_string()).collect::<Vec<_>>().join(" ");
        r.line(
            &format!("{what} certificate"),
            format!(
                "rows {}; cols {}; monomial {}; coefficient {}",
                list(&c.rows),
                list(&c.cols),
                monomial_expr(&c.monomial, vars),
                c.coefficient
            ),
        );
    }
    if cfg.strict && !rank.is_certified() {
        r.line("strict", format!("{what} rank is only probable"));
        return false;
    }
    true
}

pub fn analyze(a: &AnalyzeArgs) -> Result<Outcome, Failure> {
    let cfg = a.common.config()?;
    let path = &a.hypersurface;
    let spec = load_spec(path, cfg.order)?;
    let n = spec.n;
    let order = spec.rho.order();
    let cutoff = cfg.cutoff_at(order)?;
    let mut r = Report::new("analysis");
    r.line("n", n).line("order", order);

    if let Err(e) = check_reality(&spec.rho, n) {
        r.line("reality", format!("fail ({e})"));
        emit(&r, cfg.format);
        return Ok(Outcome::CheckFailed);
    }
    r.line("reality", "pass");
    let h = match Hypersurface::from_spec(&spec) {
        Ok(h) => h,
        Err(e @ GeometryError::GraphIdentity { .. }) => {
            r.line("graph identity", format!("fail ({e})"));
            emit(&r, cfg.format);
            return Ok(Outcome::CheckFailed);
        }
        Err(e) => return Err(geometry_failure(path, e)),
    };
    r.line("graph identity", "pass");
    r.line("normal", yes_no(h.is_normal()));
    let h = if h.is_normal() {
        h
    } else {
        match normalize(&h) {
            Ok((normal, _)) => {
                r.line("normalized", "yes (analysis below is in normal coordinates)");
                normal
            }
            Err(e) => {
                r.line("normalized", format!("fail ({e})"));
                emit(&r, cfg.format);
                return Ok(Outcome::CheckFailed);
            }
        }
    };

    let mut ok = true;
    let m = is_minimal_with_seed(&h, cfg.seed).map_err(|e| geometry_failure(path, e))?;
    r.line("minimal", m.verdict());
    ok &= rank_lines(&mut r, "minimal", &m.rank, n, &vars(&[("z", n - 1), ("xi", n - 1)]), &cfg);

    let deg = degeneracy_with_seed(&h, cutoff, cfg.seed).map_err(|e| geometry_failure(path, e))?;
    r.line("degeneracy", deg.d);
    r.line("stabilized", format!("{} (cutoff {cutoff})", yes_no(deg.stabilized)));
    r.line("holomorphically nondegenerate", yes_no(deg.nondegenerate()));
    let omega = vars(&[("omega", n)]);
    ok &= rank_lines(&mut r, "degeneracy", &deg.rank, n, &omega, &cfg);
    let witnesses: Vec<String> = deg.witnesses.iter().map(|w| w.to_string()).collect();
    r.line("witnesses", witnesses.join(" "));
    let lambda: Vec<usize> = (n..2 * n - 1).collect();
    let parts = h.phi_bar().partial_coefficients(&lambda);
    for w in &deg.witnesses {
        if let Some(phi) = parts.get(w) {
            r.series(&alpha_label("phi", w), &omega, phi);
        }
    }
    emit(&r, cfg.format);
    Ok(outcome(ok))
}

pub fn normalize_command(a: &NormalizeArgs) -> Result<Outcome, Failure> {
    let cfg = a.common.config()?;
    if same_file(&a.hypersurface, &a.output) {
        return Err(Failure::Input("refusing to overwrite the input file".into()));
    }
    let h = load_hypersurface(&a.hypersurface, cfg.order)?;
    let n = h.n();
    let mut r = Report::new("normalization");
    r.line("n", n).line("order", h.order()).line("normal", yes_no(h.is_normal()));
    let (normal, change) = match normalize(&h) {
        Ok(x) => x,
        Err(e) => {
            r.line("normalized", format!("fail ({e})"));
            emit(&r, cfg.format);
            return Ok(Outcome::CheckFailed);
        }
    };
    write_file(&a.output, &normal.to_document().to_text())?;
    r.line("written", a.output.display());
    let z = vars(&[("z", n)]);
    for (k, c) in change.components().iter().enumerate() {
        r.series(&format!("change{}", k + 1), &z, c);
    }
    emit(&r, cfg.format);
    Ok(Outcome::Pass)
}

fn same_file(a: &Path, b: &Path) -> bool {
    match (fs::canonicalize(a), fs::canonicalize(b)) {
        (Ok(x), Ok(y)) => x == y,
        _ => a == b,
    }
}

struct Loaded {
    fm: FormalMap,
    order: u32,
}

fn load_pair(a: &MapArgs, cfg: &RunConfig) -> Result<Loaded, Failure> {
    let source = load_hypersurface(&a.source, cfg.order)?;
    let target = load_hypersurface(&a.target, cfg.order)?;
    let f = load_map(&a.map, cfg.order)?;
    let order = source.order().min(target.order()).min(f.order());
    let cap = |h: Hypersurface, path: &Path| -> Result<Hypersurface, Failure> {
        if h.order() > order {
            h.truncate(order).map_err(|e| geometry_failure(path, e))
        } else {
            Ok(h)
        }
    };
    let source = cap(source, &a.source)?;
    let target = cap(target, &a.target)?;
    let fm = FormalMap::new(f.truncate(order), source, target)
        .map_err(|e| Failure::Input(format!("{}: {e}", a.map.display())))?;
    Ok(Loaded { fm, order })
}

/// The mapping check and third-Segre identity; returns the check and whether
/// every verdict passed.
fn map_section(l: &Loaded, cfg: &RunConfig, r: &mut Report) -> Result<(MapCheck, bool), Failure> {
    let (f, source, target) = (l.fm.map(), l.fm.source(), l.fm.target());
    let n = source.n();
    r.line("n", n).line("order", l.order);
    let check = check_maps_into(f, source, target, l.order).map_err(|e| Failure::Input(e.to_string()))?;
    let mut ok = check.pass;
    if check.pass {
        r.line("maps into target", format!("pass (order {})", check.order));
    } else {
        r.line("maps into target", format!("fail (order {})", check.order));
        if let Some((m, c)) = check.offending() {
            r.line(
                "least offending monomial",
                format!("{} (coefficient {c}, degree {})", monomial_expr(m, &check.residual_vars()), m.degree()),
            );
        }
        r.series("residual", &check.residual_vars(), &check.residual);
    }
    r.line("biholomorphism", format!("{} (jacobian at 0: {})", yes_no(l.fm.is_biholomorphism()), l.fm.jacobian_at_0()));

    if !source.is_normal() {
        r.line("segre identity", "skipped (source not in normal coordinates)");
        return Ok((check, ok));
    }
    let minimality: Minimality = is_minimal_with_seed(source, cfg.seed).map_err(|e| Failure::Input(e.to_string()))?;
    let residual = if !check.pass {
        let id = segre_reflection_residual(f, source, target).map_err(|e| Failure::Input(e.to_string()))?;
        Some((id, "map check failed"))
    } else {
        match segre_reflection_identity(f, source, target, &check, &minimality) {
            Ok(id) => Some((id, "")),
            Err(ReflectionError::Prerequisite(why)) => {
                r.line("segre identity", format!("skipped ({why})"));
                if cfg.strict && minimality.minimal {
                    r.line("strict", "minimality rank is only probable");
                    ok = false;
                }
                None
            }
            Err(e) => return Err(Failure::Input(e.to_string())),
        }
    };
    if let Some((id, note)) = residual {
        let zxe = segre_identity_vars(n);
        if id.holds() {
            r.line("segre identity", format!("pass (order {})", id.order));
        } else {
            let (m, c) = id.residual.leading_term().expect("nonzero residual");
            let why = if note.is_empty() { String::new() } else { format!("; {note}") };
            r.line(
                "segre identity",
                format!(
                    "fail (order {}; least monomial {} with coefficient {c}{why})",
                    id.order,
                    monomial_expr(m, &zxe)
                ),
            );
            r.series("segre_residual", &zxe, &id.residual);
            ok = false;
        }
    }
    Ok((check, ok))
}

pub fn check_map(a: &MapArgs) -> Result<Outcome, Failure> {
    let cfg = a.common.config()?;
    let loaded = load_pair(a, &cfg)?;
    let mut r = Report::new("map-check");
    let (_, ok) = map_section(&loaded, &cfg, &mut r)?;
    emit(&r, cfg.format);
    Ok(outcome(ok))
}

fn series_lines(d: &mut crkit_core::parse::Document, prefix: &str, vars: &VarDecl, s: &[TruncatedSeries]) {
    for (k, c) in s.iter().enumerate() {
        d.push_series(&format!("{prefix}{}", k + 1), vars, c);
    }
}

pub fn reflect(a: &ReflectArgs) -> Result<Outcome, Failure> {
    let cfg = a.map.common.config()?;
    let loaded = load_pair(&a.map, &cfg)?;
    let (f, source, target) = (loaded.fm.map(), loaded.fm.source(), loaded.fm.target());
    let n = source.n();
    let mut r = Report::new("reflection");
    let (check, _) = map_section(&loaded, &cfg, &mut r)?;
    if !check.pass && !a.force {
        emit(&r, cfg.format);
        return Err(Failure::Check("the map check failed; pass --force to reflect anyway".into()));
    }
    if !source.is_normal() {
        emit(&r, cfg.format);
        return Err(Failure::Check("the source is not in normal coordinates; run `crkit normalize` first".into()));
    }
    let cutoff = cfg.cutoff_at(loaded.order)?;
    let report = reflection_report(f, source, target, cutoff)
        .and_then(|rep| rep.with_evidence(a.radius))
        .map_err(|e| Failure::Input(e.to_string()))?;
    fs::create_dir_all(&a.output).map_err(|e| Failure::Input(format!("{}: {e}", a.output.display())))?;
    write_file(&a.output.join("reflection.crk"), &report.to_document().to_text())?;

    r.series("R", &reflection_vars(n), &report.r);
    let nonzero: Vec<String> =
        report.u_alpha.iter().filter(|(_, u)| !u.is_zero()).map(|(alpha, _)| alpha_label("u", alpha)).collect();
    r.line("nonzero segre coefficients", if nonzero.is_empty() { "none".to_string() } else { nonzero.join(" ") });
    r.line("polynomial", yes_no(report.polynomial_flag));
    if let Some(ev) = &report.evidence {
        r.line("growth radius R0", format!("{:.6} (polydisc radius {})", ev.r0, ev.a));
    }

    let pc = match partial_convergence_with_seed(f, source, target, cutoff, cfg.seed) {
        Ok(pc) => pc,
        Err(e) => {
            emit(&r, cfg.format);
            return Err(Failure::Check(format!("partial convergence refused: {e}")));
        }
    };
    let generators = transcendence_generators(&pc);
    let containment = formal_containment(f, &generators).map_err(|e| Failure::Input(e.to_string()))?;
    let d = pc.degeneracy.d;

    let mut doc = crkit_core::parse::Document::new("partial-convergence");
    doc.push_meta("n", n)
        .push_meta("order", pc.gf.order())
        .push_meta("cutoff", cutoff)
        .push_meta("degeneracy", d)
        .push_meta("rank", pc.rank.rank)
        .push_meta("contained", containment.contained)
        .push_meta("transcendence_bound", d);
    series_lines(&mut doc, "g", &vars(&[("omega", n)]), pc.g.components());
    series_lines(&mut doc, "gf", &vars(&[("z", n)]), pc.gf.components());
    series_lines(&mut doc, "b", &vars(&[("z", n), ("omega", n)]), &generators);
    write_file(&a.output.join("partial.crk"), &doc.to_text())?;

    r.line("target degeneracy", d);
    r.line("full system", yes_no(d == 0));
    for (k, c) in pc.gf.components().iter().enumerate() {
        r.series(&format!("gf{}", k + 1), &vars(&[("z", n)]), c);
    }
    r.line("graph contained", yes_no(containment.contained));
    r.line("transcendence bound", format!("D_f <= {d}"));
    r.line("written", a.output.display());
    emit(&r, cfg.format);
    Ok(outcome(containment.contained))
}

pub fn corpus(a: &CorpusArgs) -> Result<Outcome, Failure> {
    if a.order < 2 {
        return Err(Failure::Input(format!("--order must be at least 2, got {}", a.order)));
    }
    let files = write_corpus(&a.output, a.order).map_err(|e| Failure::Input(format!("{}: {e}", a.output.display())))?;
    for f in files {
        println!("{}", a.output.join(f).display());
    }
    Ok(Outcome::Pass)
}
