use std::path::PathBuf;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_drinfeld-ext")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn golden(name: &str) -> String {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    std::fs::read_to_string(p).unwrap()
}

fn line<'a>(text: &'a str, key: &str) -> &'a str {
    text.lines().find_map(|l| l.strip_prefix(key)).unwrap_or_else(|| panic!("no {key} in {text}"))
}

#[test]
fn ext_rank_three_over_two() {
    let o = run(&["ext", "--field", "GF(3)(th)", "--phi", "th+tau^3", "--psi", "th+tau^2"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert_eq!(line(&s, "pi_t: "), "[[th, 0, 0], [0, th, (2*th^3 + th)*tau^2], [tau^2, tau^4, th + tau^6]]");
    assert_eq!(line(&s, "  tau^2: "), "[[0, 0, 0], [0, 0, 2*th^3 + th], [1, 0, 0]]");
    assert_eq!(line(&s, "ga_rank: "), "1");
}

#[test]
fn json_goldens() {
    let cases: [(&[&str], &str); 3] = [
        (&["--json", "ext", "--phi", "th+tau^3", "--psi", "th+tau^2"], "ext_rank3_rank2.json"),
        (&["--json", "sixterm", "--phi", "th+tau^2", "--psi", "th+tau^3", "--delta", "1+tau"], "sixterm_carlitz.json"),
        (
            &["--json", "--field", "FTF(3; gens=a,b,th; inv=a)", "ext-dual", "--phi", "th+b*tau^2", "--psi", "th+a*tau^3"],
            "ext_dual_formal.json",
        ),
    ];
    for (args, file) in cases {
        let o = run(args);
        assert_eq!(o.status.code(), Some(0), "{args:?}");
        assert_eq!(stdout(&o), golden(file), "{file}");
    }
}

#[test]
fn json_matrix_parses_back() {
    let o = run(&["--json", "ext", "--phi", "th+tau^3", "--psi", "th+tau^2"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["ga_rank"], 1);
    assert_eq!(v["pi_t"]["var"], "tau");
    assert_eq!(v["pi_t"]["entries"][2][2], serde_json::json!([[0, "th"], [6, "1"]]));
    assert_eq!(v["basis"].as_array().unwrap().len(), 3);
}

#[test]
fn formal_field_entries() {
    let o = run(&["--field", "FTF(3; gens=a,b,th; inv=a)", "ext", "--phi", "th+a*tau^3", "--psi", "th+b*tau^2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("th + b*b[2]*b[4]/(a[2]*a[5])*tau^6"));
}

#[test]
fn sixterm_blocks() {
    let o = run(&["sixterm", "--phi", "th+tau^2", "--psi", "th+tau^3", "--delta", "1+tau", "--g", "carlitz"]);
    let s = stdout(&o);
    assert_eq!(line(&s, "delta_t: "), "[[0, 0, 2*tau], [0, 0, 2*tau]]");
    assert_eq!(line(&s, "x_t: "), "[[th + tau^2, 0], [1 + tau, th + tau^3]]");
}

#[test]
fn verify_passes_and_is_deterministic() {
    let args = ["--field", "GF(3^2)", "verify", "--phi", "th+tau^3", "--psi", "th+tau^2", "--samples", "100", "--seed", "7"];
    let a = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert!(stdout(&a).contains("result: pass"));
    assert_eq!(stdout(&a), stdout(&run(&args)));
    let j = run(&["--json", "--field", "GF(2^3)", "verify", "--check", "duality", "--phi", "th+tau^3", "--psi", "th+tau^2", "--samples", "10"]);
    assert_eq!(j.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&j)).unwrap();
    assert_eq!(v["passed"], true);
    assert_eq!(v["checked"], 10);
}

#[test]
fn verify_sixterm_enumerate() {
    let o = run(&[
        "--field", "GF(3)", "verify", "--check", "sixterm-con", "--mode", "enumerate", "--phi", "th+tau^3", "--psi", "th+tau^2",
        "--delta", "1", "--bound", "3",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("result: pass"));
}

#[test]
fn exit_codes() {
    // Parse error.
    let o = run(&["ext", "--phi", "th+tau^^3", "--psi", "th+tau^2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("ParseError"));
    // Missing flag.
    assert_eq!(run(&["ext", "--phi", "th+tau^3"]).status.code(), Some(2));
    // Domain error.
    let o = run(&["ext", "--phi", "th+tau^2", "--psi", "th+tau^3"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("UnsupportedRegime"));
    // The oracle needs a finite field.
    let o = run(&["verify", "--phi", "th+tau^3", "--psi", "th+tau^2"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("InvalidField"));
    // Baer sum needs two classes.
    assert_eq!(run(&["baer", "--phi", "th+tau^3", "--psi", "th+tau^2", "--delta", "1"]).status.code(), Some(2));
}

#[test]
fn split_zero_has_zero_witness() {
    let o = run(&["split", "--phi", "th+tau^3", "--psi", "th+tau^2", "--delta", "0"]);
    assert_eq!(stdout(&o), "split\nwitness: [[0]]\n");
    let o = run(&["split", "--phi", "th+tau^3", "--psi", "th+tau^2", "--delta", "tau^2"]);
    assert_eq!(stdout(&o), "not split\n");
}

#[test]
fn class_operations() {
    let base = ["--phi", "th+tau^3", "--psi", "th+tau^2", "--delta", "1"];
    let with = |cmd: &str, extra: &[&str]| {
        let mut v = vec![cmd];
        v.extend(base);
        v.extend(extra);
        stdout(&run(&v))
    };
    assert_eq!(with("act", &["--a", "t"]), "[[th + tau^2]]\n");
    // Pullback by Φ_t and pushout by Ψ_t give the same class as t*δ.
    assert_eq!(line(&with("pullback", &["--g", "th+tau^3"]), "canonical: "), "[[th + tau^2]]");
    assert_eq!(line(&with("pushout", &["--f", "th+tau^2"]), "canonical: "), "[[th + tau^2]]");
    let o = run(&["baer", "--phi", "th+tau^3", "--psi", "th+tau^2", "--delta", "1", "--delta", "tau"]);
    assert_eq!(stdout(&o), "[[1 + tau]]\n");
    assert_eq!(with("assemble", &[]), "[[th + tau^3, 0], [1, th + tau^2]]\n");
    let r = with("reduce", &[]);
    assert_eq!(line(&r, "canonical: "), "[[1]]");
}

#[test]
fn adjoint_round_trip() {
    let k = "GF(3^2)";
    let m = "[[g*tau, 1], [tau^2, 0]]";
    let ad = stdout(&run(&["--field", k, "adjoint", "--delta", m]));
    let back = stdout(&run(&["--field", k, "adjoint", "--sigma", "--delta", ad.trim()]));
    assert_eq!(back.trim(), m);
}

#[test]
fn carlitz_target_and_products() {
    let s = stdout(&run(&["ext-carlitz", "--phi", "th+tau^3", "--e", "2"]));
    assert_eq!(line(&s, "ga_rank: "), "1");
    assert_eq!(
        line(&s, "nilpotent: "),
        "[[0, 0, 0, 1, 0, 0], [0, 0, 0, 0, 1, 0], [0, 0, 0, 0, 0, 1], [0, 0, 0, 0, 0, 0], [0, 0, 0, 0, 0, 0], [0, 0, 0, 0, 0, 0]]"
    );
    let s = stdout(&run(&["ext-prod", "--phi", "th+tau^3", "--phi", "th+tau^4", "--psi", "th+tau^2"]));
    assert_eq!(line(&s, "ga_rank: "), "2");
}

#[test]
fn hom_reports_completeness() {
    let s = stdout(&run(&["hom", "--phi", "th+tau^3", "--psi", "th+tau"]));
    assert_eq!(s, "dim: 0\ncomplete: true\n");
    let s = stdout(&run(&["hom", "--phi", "carlitz", "--psi", "carlitz", "--bound", "2"]));
    assert!(s.starts_with("dim: 3\n"));
}

#[test]
fn out_file() {
    let dir = std::env::temp_dir().join(format!("drinfeld-ext-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("ext.txt");
    let o = run(&["ext", "--phi", "th+tau^3", "--psi", "th+tau^2", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    assert!(std::fs::read_to_string(&path).unwrap().contains("ga_rank: 1"));
    std::fs::remove_dir_all(dir).unwrap();
}
