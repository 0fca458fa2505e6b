use std::io::Write;
use std::process::{Command, Stdio};

fn lammu(args: &[&str], stdin: Option<&str>) -> (i32, String, String) {
    let mut child = Command::new(env!("CARGO_BIN_EXE_lammu"))
        .args(args)
        .env("LAMMU_COLOR", "never")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(stdin.unwrap_or("").as_bytes()).unwrap();
    let out = child.wait_with_output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap(), String::from_utf8(out.stderr).unwrap())
}

#[test]
fn help_lists_every_flag() {
    let cases: [(&str, &[&str]); 8] = [
        ("fmt", &[]),
        ("reduce", &["--rules", "--fuel", "--trace"]),
        ("check-simple", &["--cert"]),
        ("infer-simple", &[]),
        ("check-iu", &["--depth", "--width", "--cert"]),
        ("verify", &[]),
        ("metatheory", &["--suite", "--seed", "--cases", "--budget"]),
        ("examples", &["--tree"]),
    ];
    let (code, top, _) = lammu(&["--help"], None);
    assert_eq!(code, 0);
    for (cmd, flags) in cases {
        assert!(top.contains(cmd), "{cmd} missing from --help");
        let (code, help, _) = lammu(&[cmd, "--help"], None);
        assert_eq!(code, 0);
        for f in flags {
            assert!(help.contains(f), "{cmd} --help lacks {f}");
        }
    }
}

#[test]
fn exit_codes() {
    let matrix: [(&[&str], i32); 17] = [
        (&["reduce", "--rules", "beta,mu", "--fuel", "100", "(\\x.x) y"], 0),
        (&["reduce", "--fuel", "3", "(\\x. x x) (\\x. x x)"], 3),
        (&["reduce", "--rules", "gamma", "x"], 2),
        (&["reduce", "(\\x. x"], 2),
        (&["fmt", "A /\\ B -> C"], 0),
        (&["fmt", "|- x : A"], 0),
        (&["fmt", "|- x : "], 2),
        (&["check-simple", "|- \\x.x : A -> A |"], 0),
        (&["check-simple", "|- \\x.x : A -> B |"], 1),
        (&["check-simple", "|- \\x.x : A /\\ B -> A |"], 1),
        (&["infer-simple", "\\x. x x"], 1),
        (&["check-iu", "x:A /\\ (A -> B) |- x x : B |"], 0),
        (&["check-iu", "x:A |- x x : B |"], 3),
        (&["verify", "/nonexistent/certificate.json"], 2),
        (&["metatheory", "--budget", "depth=ten"], 2),
        (&["examples", "nothing"], 2),
        (&["no-such-command"], 2),
    ];
    for (args, expected) in matrix {
        let (code, _, err) = lammu(args, None);
        assert_eq!(code, expected, "{args:?}: {err}");
    }
}

#[test]
fn reduce_prints_normal_form_and_trace() {
    let (_, out, _) = lammu(&["reduce", "--rules", "beta,mu", "--fuel", "100", "(\\x.x) y"], None);
    assert_eq!(out, "y\n");
    let (_, out, _) = lammu(&["reduce", "--trace", "(\\x.x) ((\\y.y) z)"], None);
    assert_eq!(out, "/ beta ~> (\\y.y) z\n/ beta ~> z\nz\n");
}

#[test]
fn examples_pipe_into_verify() {
    for name in ["peirce", "dne", "no-choice", "erasing"] {
        let (code, cert, _) = lammu(&["examples", name], None);
        assert_eq!(code, 0);
        let (code, out, err) = lammu(&["verify"], Some(&cert));
        assert_eq!(code, 0, "{name}: {err}");
        assert!(out.starts_with("valid: "));
    }
    let (_, _, note) = lammu(&["examples", "erasing"], None);
    assert!(note.contains("first one the search found"));
}

#[test]
fn tampered_certificate_is_invalid() {
    let (_, cert, _) = lammu(&["examples", "peirce"], None);
    let bad = cert.replacen("((A -> B) -> A) -> A", "((A -> B) -> A) -> B", 1);
    assert_ne!(bad, cert);
    let (code, _, err) = lammu(&["verify", "-"], Some(&bad));
    assert_eq!(code, 1);
    assert!(err.contains("invalid"));
    let (code, _, _) = lammu(&["verify"], Some("{ not json"));
    assert_eq!(code, 2);
}

#[test]
fn metatheory_reports_seed_and_summary() {
    let (code, out, err) = lammu(&["metatheory", "--suite", "subject-reduction", "--cases", "10", "--seed", "7"], None);
    assert_eq!(code, 0);
    assert!(err.contains("seed 7"));
    assert!(out.ends_with("SUITE subject_reduction RUN 10 FAIL 0 BUDGET_MISS 0\n"));
}

#[test]
fn color_follows_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_lammu"))
        .args(["check-simple", "|- \\x.x : A -> B |"])
        .env("LAMMU_COLOR", "always")
        .output()
        .unwrap();
    assert!(String::from_utf8_lossy(&out.stderr).contains("\x1b[31merror"));
    let (_, _, err) = lammu(&["check-simple", "|- \\x.x : A -> B |"], None);
    assert!(err.starts_with("error: "));
}
