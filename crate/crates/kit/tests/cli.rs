use std::process::Command;

use sabinin_kit::cli::{run, Execution};
use serde_json::Value;

fn sab(args: &str) -> Execution {
    run(std::iter::once("sabinin").chain(args.split_whitespace()))
}

fn sabv(args: &[&str]) -> Execution {
    run(std::iter::once("sabinin").chain(args.iter().copied()))
}

fn fixture_path(name: &str) -> String {
    format!("{}/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn scratch(name: &str, text: &str) -> String {
    let dir = std::env::temp_dir().join(format!("sabinin-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.display().to_string()
}

#[test]
fn rbch_degree_three_shows_half_the_commutator() {
    let r = sab("bch rbch --degree 3");
    assert_eq!(r.code, 0, "{}", r.stdout);
    assert!(r.stdout.contains("weight 2: 1/2*(x1 x2) - 1/2*(x2 x1)"), "{}", r.stdout);
    assert!(r.stdout.contains("weight 3:"));
    assert!(!r.stdout.contains("weight 4:"));
}

#[test]
fn ado_on_the_class_two_table() {
    let r = sab("pbw ado --fixture free-nilp-2-2");
    assert_eq!(r.code, 0);
    assert!(r.stdout.starts_with("injective, quotient dim 7\n"), "{}", r.stdout);
}

#[test]
fn ado_reads_the_same_table_from_a_file() {
    let by_name = sab("pbw ado --fixture free-nilp-2-2");
    let by_path = sab(&format!("pbw ado --fixture {}", fixture_path("free-nilp-2-2.json")));
    assert_eq!(by_path.code, 0);
    assert_eq!(by_name.stdout, by_path.stdout);
}

#[test]
fn verify_all_passes_through_the_binary() {
    let out = Command::new(env!("CARGO_BIN_EXE_sabinin")).args(["verify-all", "--degree", "4"]).output().unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(out.status.code(), Some(0), "{text}");
    assert!(!text.contains("\nfail") && !text.contains("inconclusive"));
}

#[test]
fn usage_and_input_errors_have_their_own_codes() {
    assert_eq!(sab("bch rbch --no-such-flag").code, 2);
    assert_eq!(sab("frobnicate").code, 2);
    assert_eq!(sab("bch rbch --field Fp:4").code, 2);
    assert_eq!(sab("sabinin shu-p --u x0 --v x1 --z x1").code, 2);
    assert_eq!(sab("loop divide --x 1,2,3").code, 2);
    assert_eq!(sab("pbw ado --fixture no-such-fixture").code, 3);
    let bad = scratch("bad.json", "{\"ms\": 3}");
    assert_eq!(sab(&format!("pbw ado --fixture {bad}")).code, 3);
    assert_eq!(sab("pbw ado --fixture mat2").code, 3);
    let r = sab("series brackets --algebra remark-algebra --i 1 --j 1");
    assert_eq!(r.code, 4, "{}", r.stderr);
    assert!(r.stdout.is_empty() && r.stderr.starts_with("error:"));
}

#[test]
fn help_exits_zero() {
    let r = sab("--help");
    assert_eq!(r.code, 0);
    assert!(r.stdout.contains("verify-all"));
}

#[test]
fn output_is_deterministic() {
    for args in ["bch rbch --degree 4", "jennings ado-loop --fixture free-nilp-2-3 --radius 2 --seed 9", "series brackets --i 2 --j 1 --k 1 --seed 3", "mlt piplus --op R[(x1 x2)]"] {
        let (a, b) = (sab(args), sab(args));
        assert_eq!(a, b, "{args}");
        let (a, b) = (sab(&format!("{args} --json")), sab(&format!("{args} --json")));
        assert_eq!(a, b, "{args}");
    }
}

#[test]
fn seed_changes_sampled_inputs_only_when_asked() {
    let a = sab("series brackets --i 1 --j 1 --k 1 --seed 1 --json");
    let b = sab("series brackets --i 1 --j 1 --k 1 --seed 2 --json");
    let (va, vb): (Value, Value) = (serde_json::from_str(&a.stdout).unwrap(), serde_json::from_str(&b.stdout).unwrap());
    assert_ne!(va["output"]["a"], vb["output"]["a"]);
    assert_ne!(va["inputs_digest"], vb["inputs_digest"]);
}

#[test]
fn json_report_shape() {
    let r = sab("bch rbch --degree 3 --json");
    let v: Value = serde_json::from_str(&r.stdout).unwrap();
    assert_eq!(v["command"], "bch rbch");
    assert!(v["inputs_digest"].as_str().unwrap().starts_with("sha256:"));
    assert_eq!(v["passed"], true);
    for c in v["checks"].as_array().unwrap() {
        for key in ["name", "anchor", "status", "witness"] {
            assert!(c.get(key).is_some(), "{key}");
        }
        assert_eq!(c["status"], "pass");
    }
    assert_eq!(v["output"]["components"][1]["element"]["terms"][0][1], "1/2");
    // --json does not change the digest
    let text = sab("bch rbch --degree 3");
    assert!(text.stdout.contains("3 of 3 checks pass"));
    let other: Value = serde_json::from_str(&sab("bch rbch --json --degree 3").stdout).unwrap();
    assert_eq!(other["inputs_digest"], v["inputs_digest"]);
}

#[test]
fn failing_checks_give_exit_one() {
    // the displayed commutator formula fails for matrices
    let r = sab("series brackets --i 1 --j 2 --a 0,1,0,0 --b 0,0,1,0");
    assert_eq!(r.code, 1, "{}", r.stdout);
    assert!(r.stdout.contains("fail         [graded-commutator] graded commutator, displayed formula"));
    assert!(r.stdout.contains("pass         [graded-commutator] graded commutator, leading term (i+1) ab - (j+1) ba"));
    // and holds for scalars
    assert_eq!(sab("series brackets --algebra remark-algebra --i 1 --j 2").code, 4);
}

#[test]
fn sabinin_commands() {
    let r = sab("sabinin shu-p --u x1 --v x2 --z x1");
    assert_eq!(r.code, 0);
    assert!(r.stdout.starts_with("p = -(x1 (x2 x1)) + ((x1 x2) x1)"));
    assert_eq!(sab("sabinin ms --y x1 --z x2").stdout.lines().next().unwrap(), "bracket = -(x1 x2) + (x2 x1)");
    let r = sab("sabinin ms --fixture free-nilp-2-2 --y 1 --z 2");
    assert!(r.stdout.starts_with("bracket = [0, 0, 1]"), "{}", r.stdout);
    assert_eq!(sab("sabinin phi --xs x1 --ys x1,x2").code, 0);
    assert_eq!(sab("sabinin ux --fixture mat2").code, 0);
    let r = sab("sabinin filtration");
    assert!(r.stdout.contains("not nilpotent"), "{}", r.stdout);
    assert!(sab("sabinin filtration --fixture free-nilp-2-3").stdout.contains("nilpotent of class 3"));
}

#[test]
fn loop_commands() {
    let r = sab("loop build");
    assert!(r.stdout.contains("F3 = -1/2*x1*y2 + 1/2*x2*y1 + x3 + y3"), "{}", r.stdout);
    assert_eq!(sab("loop build --fixture nottingham-7-6").code, 0);
    let r = sab("loop divide --x 1,2,3 --y 0,1,-1");
    assert_eq!(r.code, 0);
    assert!(r.stdout.contains("x\\y = [-1, -1, -7/2]"), "{}", r.stdout);
    assert_eq!(sab("loop deviations").code, 0);
    assert_eq!(sab("loop certify --fixture free-nilp-2-3 --depth 3").code, 0);
    let l = scratch("loop.json", r#"{"dim":2,"deg":2,"weights":[1,2],"F":{"1":[["x1","1"],["y1","1"]],"2":[["x2","1"],["y2","1"],["x1*y1","3"]]}}"#);
    let r = sab(&format!("loop certify --fixture {l}"));
    assert_eq!(r.code, 0, "{}", r.stdout);
}

#[test]
fn bch_commands() {
    let r = sab("bch exp --element x1 --degree 2");
    assert!(r.stdout.starts_with("exp = 1 + x1 + 1/2*(x1 x1)"), "{}", r.stdout);
    let e = scratch("g.json", r#"{"trunc":2,"terms":[["1","1"],["x1","1"],["(x1 x1)","1/2"]]}"#);
    assert!(sab(&format!("bch log --element {e}")).stdout.starts_with("log = x1\n"));
    assert_eq!(sabv(&["bch", "log", "--element", "1 + (x1 x2)", "--degree", "2"]).code, 4);
    let r = sabv(&["bch", "exp", "--element", "x1 + x2", "--degree", "2"]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.contains("1/2*(x1 x2)"));
    assert_eq!(sab("bch integrate --fixture free-nilp-3-2").code, 0);
    assert_eq!(sab("bch roundtrip --fixture free-nilp-2-3").code, 0);
}

#[test]
fn series_commands() {
    let a = scratch("a.json", r#"{"depth":3,"coefficients":[["1","0","0","2"],["0","1","0","0"]]}"#);
    let b = scratch("b.json", r#"{"depth":3,"coefficients":[["0","1","1","0"]]}"#);
    let r = sab(&format!("series b-compose --algebra mat2 {a} {b}"));
    assert_eq!(r.code, 0, "{}", r.stdout);
    assert!(r.stdout.starts_with("x^2: [1, 1, 1, 2]\n"));
    let ca = scratch("ca.json", r#"{"depth":2,"terms":[["x1",["1","2","0","0"]]]}"#);
    let r = sab(&format!("series c-mul --algebra mat2 {ca} {ca}"));
    assert_eq!(r.code, 0, "{}", r.stdout);
    assert!(r.stdout.contains("x1: [2, 4, 0, 0]"), "{}", r.stdout);
    let r = sab("series nottingham");
    assert_eq!(r.code, 0);
    assert!(r.stdout.contains("over Fp:7, depth 6"));
    assert_eq!(sab("series brackets --i 2 --j 1 --k 1").code, 0);
}

#[test]
fn envelope_mlt_pbw_jennings_commands() {
    let r = sab("envelope rewrite --tree [[x1,x2],x3]");
    assert_eq!(r.code, 0);
    assert!(r.stdout.contains(" = "));
    for args in ["envelope split", "envelope axioms --fixture sl2-torus", "envelope free", "envelope standard", "envelope standard --fixture sl2-upper"] {
        assert_eq!(sab(args).code, 0, "{args}");
    }
    let ops = sab("envelope split --fixture free-lie-2-3 --json");
    let v: Value = serde_json::from_str(&ops.stdout).unwrap();
    let path = scratch("ops.json", &v["output"].to_string());
    assert_eq!(sab(&format!("envelope free --fixture {path}")).code, 0);
    assert_eq!(sab("envelope free --fixture sl2-torus").code, 3);
    assert_eq!(sab("mlt piplus --op R[x1]").stdout.lines().next().unwrap(), "pi+ = -L[x1] + R[x1]");
    assert_eq!(sab("mlt split --degree 2").code, 0);
    assert_eq!(sab("mlt generation --m 2").code, 0);
    assert_eq!(sab("pbw weight --monomial 1,3").stdout.lines().next().unwrap(), "weight 3");
    assert_eq!(sab("pbw straighten --seq 2,1").stdout.lines().next().unwrap(), "e1*e2 + e3");
    assert_eq!(sab("pbw straighten --seq 4").code, 2);
    let r = sab("jennings dimension-subloops --field Fp:2");
    assert_eq!(r.code, 0, "{}", r.stdout);
    assert!(r.stdout.contains("orders [8, 2, 2, 1"));
    let csv = scratch("z4.csv", "a,b,c,d\n0,1,2,3\n1,2,3,0\n2,3,0,1\n3,0,1,2\n");
    assert_eq!(sab(&format!("jennings dimension-subloops --field Fp:2 --fixture {csv}")).code, 0);
    let r = sab("jennings ado-loop");
    assert!(r.stdout.starts_with("125 points (full lattice)"), "{}", r.stdout);
}
