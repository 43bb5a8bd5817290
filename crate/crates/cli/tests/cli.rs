use std::fs;
use std::path::PathBuf;

use tropfan::fixtures;
use tropfan::io::{parse_fan, write_fan};
use tropfan::linalg::{q, Q};
use tropfan_cli::{run, EXIT_FAIL, EXIT_INPUT, EXIT_PASS};

struct Run {
    code: i32,
    out: String,
    err: String,
}

fn tropfan(args: &[&str], stdin: &str) -> Run {
    let mut argv = vec!["tropfan".to_string()];
    argv.extend(args.iter().map(|s| s.to_string()));
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(&argv, &mut stdin.as_bytes(), &mut out, &mut err);
    Run { code, out: String::from_utf8(out).unwrap(), err: String::from_utf8(err).unwrap() }
}

fn fixture_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

#[test]
fn shipped_fixture_files_are_canonical() {
    for (name, fan) in fixtures::all() {
        let path = fixture_dir().join(format!("{name}.fan"));
        let text = fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        let func: Option<Vec<Q>> = fixtures::function_for(name).map(|v| v.into_iter().map(q).collect());
        assert_eq!(text, write_fan(&fan, func.as_deref()), "{name}");
    }
}

#[test]
fn exit_codes_follow_verdicts() {
    assert_eq!(tropfan(&["thm", "--fixture", "cross"], "").code, EXIT_FAIL);
    assert_eq!(tropfan(&["thm", "--fixture", "elliptic"], "").code, EXIT_PASS);
    assert_eq!(tropfan(&["betti", "--fixture", "nm"], "").code, EXIT_PASS);
    assert_eq!(tropfan(&["kahler", "--fixture", "cross"], "").code, EXIT_FAIL);
    assert_eq!(tropfan(&["balanced", "--fixture", "p2"], "").code, EXIT_PASS);
}

#[test]
fn input_errors_exit_with_two() {
    let r = tropfan(&["validate", "-"], "tropfan-fan v1\nrank 2\nray 1 x\n");
    assert_eq!(r.code, EXIT_INPUT);
    assert!(r.err.contains("line 3"), "{}", r.err);
    assert_eq!(tropfan(&["betti", "--fixture", "nope"], "").code, EXIT_INPUT);
    assert_eq!(tropfan(&["betti", "/no/such/file.fan"], "").code, EXIT_INPUT);
    assert_eq!(tropfan(&["frobnicate"], "").code, EXIT_INPUT);
    let r = tropfan(&["modify", "--fixture", "p2"], "");
    assert_eq!(r.code, EXIT_INPUT, "modify without a function");
}

#[test]
fn reports_are_deterministic_and_hash_the_input() {
    let a = tropfan(&["chow", "--fixture", "u34-fine"], "");
    let b = tropfan(&["chow", "--fixture", "u34-fine"], "");
    assert_eq!(a.out, b.out);
    assert!(a.out.starts_with("command: chow\n"));
    assert!(a.out.lines().any(|l| l == "verdict: pass"), "{}", a.out);
    let text = fs::read_to_string(fixture_dir().join("u34-fine.fan")).unwrap();
    let piped = tropfan(&["chow", "-"], &text);
    let hash = |s: &str| s.lines().find(|l| l.starts_with("input sha256:")).map(str::to_string);
    assert!(hash(&piped.out).is_some());
    assert_eq!(piped.out.lines().skip(2).collect::<Vec<_>>(), a.out.lines().skip(2).collect::<Vec<_>>());
}

#[test]
fn file_and_stdin_inputs_agree() {
    let path = fixture_dir().join("nm.fan");
    let text = fs::read_to_string(&path).unwrap();
    let from_file = tropfan(&["betti", path.to_str().unwrap()], "");
    let from_stdin = tropfan(&["betti", "-"], &text);
    assert_eq!(from_file.code, EXIT_PASS);
    let body = |s: &str| s.lines().skip(2).map(str::to_string).collect::<Vec<_>>();
    assert_eq!(body(&from_file.out), body(&from_stdin.out));
    assert!(from_file.out.contains("betti numbers: (1, 0, 6, 0, 1)"), "{}", from_file.out);
}

#[test]
fn report_file_option() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("thm.txt");
    let r = tropfan(&["--report", report.to_str().unwrap(), "thm", "--fixture", "nm"], "");
    assert_eq!(r.code, EXIT_PASS);
    assert_eq!(fs::read_to_string(&report).unwrap(), r.out);
}

#[test]
fn fan_commands_print_fans_and_chain() {
    let r = tropfan(&["subdivide", "--fixture", "p2", "--cone", "0,1"], "");
    assert_eq!(r.code, EXIT_PASS, "{}", r.err);
    let sub = parse_fan(&r.out).unwrap().fan;
    assert_eq!(sub.num_rays(), 4);
    assert_eq!(sub.maximal_cones().len(), 4);
    assert!(r.err.starts_with("command: subdivide\n"));

    let berg = tropfan(&["bergman", "--uniform", "3", "4", "--fine"], "");
    assert_eq!(berg.code, EXIT_PASS, "{}", berg.err);
    let chow = tropfan(&["chow", "-"], &berg.out);
    assert!(chow.out.contains("(1, 7, 1)"), "{}", chow.out);

    let modified = tropfan(&["modify", "--fixture", "u34-refined"], "");
    assert_eq!(modified.code, EXIT_PASS, "{}", modified.err);
    let graph = parse_fan(&modified.out).unwrap().fan;
    let mut got = graph.rays().to_vec();
    let mut want = fixtures::nm().rays().to_vec();
    got.sort();
    want.sort();
    assert_eq!(got, want);
}

#[test]
fn fixtures_can_be_written() {
    let dir = tempfile::tempdir().unwrap();
    let r = tropfan(&["fixtures", "--write", dir.path().to_str().unwrap()], "");
    assert_eq!(r.code, EXIT_PASS);
    for name in fixtures::NAMES {
        let written = fs::read_to_string(dir.path().join(format!("{name}.fan"))).unwrap();
        let shipped = fs::read_to_string(fixture_dir().join(format!("{name}.fan"))).unwrap();
        assert_eq!(written, shipped, "{name}");
    }
}
