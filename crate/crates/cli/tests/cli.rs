use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn corpus(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus").join(format!("{name}.crk"))
}

fn crkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_crkit")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn analyze_reports_the_invariants() {
    let o = crkit(&["analyze", path(&corpus("sphere"))]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    for line in ["reality: pass", "minimal: yes", "degeneracy: 0", "holomorphically nondegenerate: yes"] {
        assert!(out.contains(line), "missing {line:?} in\n{out}");
    }

    let out = stdout(&crkit(&["analyze", path(&corpus("degenerate_c3"))]));
    assert!(out.contains("degeneracy: 1\n"));
    assert!(out.contains("phi_1_1 = -2*i*omega1*omega2 + O(7)"));

    let o = crkit(&["analyze", path(&corpus("levi_flat"))]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("minimal: no (at order 8)"));

    let out = stdout(&crkit(&["analyze", path(&corpus("perturbed_sphere"))]));
    assert!(out.contains("normal: no\nnormalized: yes"));
}

#[test]
fn analyze_needs_enough_cutoff_to_stabilize() {
    let o = crkit(&["analyze", path(&corpus("degenerate_c3")), "--cutoff", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("stabilized: no"));
    let o = crkit(&["analyze", path(&corpus("sphere")), "--order", "4", "--cutoff", "5"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn check_map_verdicts() {
    let sphere = corpus("sphere");
    let good = crkit(&["check-map", "-s", path(&sphere), "-t", path(&sphere), "-f", path(&corpus("sphere_dilation"))]);
    assert_eq!(good.status.code(), Some(0));
    assert!(stdout(&good).contains("maps into target: pass (order 8)"));

    let bad = crkit(&["check-map", "-s", path(&sphere), "-t", path(&sphere), "-f", path(&corpus("bad_dilation"))]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(stdout(&bad).contains("least offending monomial: z1*w1 (coefficient 1, degree 2)"));

    let c3 = corpus("degenerate_c3");
    for f in ["fh_1", "fh_2"] {
        let o = crkit(&["check-map", "-s", path(&c3), "-t", path(&c3), "-f", path(&corpus(f))]);
        assert_eq!(o.status.code(), Some(0), "{f}");
    }
}

#[test]
fn doc_format_is_a_document() {
    let sphere = corpus("sphere");
    let o = crkit(&[
        "check-map",
        "-s",
        path(&sphere),
        "-t",
        path(&sphere),
        "-f",
        path(&corpus("sphere_dilation")),
        "--format",
        "doc",
    ]);
    let out = stdout(&o);
    assert!(out.starts_with("crkit-series/1\nkind: map-check\n"), "{out}");
    assert!(out.contains("maps_into_target: pass"));
}

fn reflect(map: &str, out: &Path, extra: &[&str]) -> Output {
    let c3 = corpus("degenerate_c3");
    let mut args = vec!["reflect", "-s", path(&c3), "-t", path(&c3), "-f", map, "-o", path(out)];
    args.extend_from_slice(extra);
    crkit(&args)
}

#[test]
fn reflect_is_independent_of_h() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    let oa = reflect(path(&corpus("fh_1")), &a, &[]);
    let ob = reflect(path(&corpus("fh_2")), &b, &[]);
    assert_eq!(oa.status.code(), Some(0));
    assert_eq!(ob.status.code(), Some(0));
    let out = stdout(&oa);
    assert!(out.contains("R = z3 - 2*i*z1*z2*lambda1*lambda2 + O(9)"));
    assert!(out.contains("gf1 = -2*i*z1*z2 + O(7)"));
    assert!(out.contains("transcendence bound: D_f <= 1"));
    for file in ["reflection.crk", "partial.crk"] {
        assert_eq!(fs::read(a.join(file)).unwrap(), fs::read(b.join(file)).unwrap(), "{file}");
    }
    let partial = fs::read_to_string(a.join("partial.crk")).unwrap();
    assert!(partial.contains("kind: partial-convergence"));
    assert!(partial.contains("contained: true"));
}

#[test]
fn reflect_refuses_failed_checks_unless_forced() {
    let dir = tempfile::tempdir().unwrap();
    let sphere = corpus("sphere");
    let bad = corpus("bad_dilation");
    let run = |out: &Path, extra: &[&str]| {
        let mut args = vec!["reflect", "-s", path(&sphere), "-t", path(&sphere), "-f", path(&bad), "-o", path(out)];
        args.extend_from_slice(extra);
        crkit(&args)
    };
    let refused = run(&dir.path().join("r"), &[]);
    assert_eq!(refused.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&refused.stderr).contains("--force"));
    assert!(!dir.path().join("r/reflection.crk").exists());

    let forced = run(&dir.path().join("f"), &["--force"]);
    assert!(dir.path().join("f/reflection.crk").exists(), "{}", String::from_utf8_lossy(&forced.stderr));
}

#[test]
fn malformed_input_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("broken.crk");
    fs::write(
        &file,
        "crkit-series/1\nkind: hypersurface\nn: 2\n\nseries rho\nvariables: z:2 w:2\norder: 4\nterm 1 0 = x\n",
    )
    .unwrap();
    let o = crkit(&["analyze", path(&file)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("broken.crk"));

    let o = crkit(&["analyze", path(&dir.path().join("missing.crk"))]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn unreal_defining_function_fails_the_check() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("unreal.crk");
    let text = fs::read_to_string(corpus("sphere")).unwrap().replace("= -1/1 0/1", "= -2/1 1/1");
    fs::write(&file, text).unwrap();
    let o = crkit(&["analyze", path(&file)]);
    assert_eq!(o.status.code(), Some(1), "{}", stdout(&o));
}

#[test]
fn normalize_writes_normal_coordinates() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("normal.crk");
    let o = crkit(&["normalize", path(&corpus("perturbed_sphere")), "-o", path(&out)]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let o = crkit(&["analyze", path(&out)]);
    assert!(stdout(&o).contains("normal: yes"));

    let copy = dir.path().join("copy.crk");
    fs::copy(corpus("perturbed_sphere"), &copy).unwrap();
    let before = fs::read(&copy).unwrap();
    let o = crkit(&["normalize", path(&copy), "-o", path(&copy)]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(fs::read(&copy).unwrap(), before);
}
