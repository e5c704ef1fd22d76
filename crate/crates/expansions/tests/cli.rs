use std::process::Command;

use expansions::cli::{run, EXIT_OK, EXIT_PRECISION, EXIT_USAGE};

fn call(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(std::iter::once("expansions").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn ok(args: &[&str]) -> String {
    let (code, out, err) = call(args);
    assert_eq!(code, EXIT_OK, "{args:?}: {err}");
    out
}

#[test]
fn documented_examples() {
    assert_eq!(
        ok(&["digits", "--source", "sqrt:2", "--base", "2", "--count", "50"]),
        "1.01101010000010011110011001100111111100111011110011\n"
    );
    assert_eq!(
        ok(&["complexity", "--word", "powers2", "--max-m", "6", "--horizon", "4096"]).lines().nth(1),
        Some("2,4,6,7,9,11")
    );
    assert_eq!(ok(&["word", "--morphism", "fib", "--prefix", "13"]), "abaababaabaab\n");
}

#[test]
fn words_and_automata() {
    assert_eq!(ok(&["word", "--morphism", "ptm", "--prefix", "17"]), "abbabaabbaababbab\n");
    assert_eq!(ok(&["word", "--morphism", "nesterenko", "--prefix", "10"]), "0121221222\n");
    assert_eq!(ok(&["word", "--morphism", "rudin-shapiro", "--prefix", "16"]), "aaabaabaaaabbbab\n");
    assert_eq!(ok(&["automaton", "word", "--name", "powers2", "--prefix", "20"]), "01101000100000001000\n");
    assert_eq!(ok(&["automaton", "eval", "--name", "ptm", "--n", "9"]), "0\n");
    let export = ok(&["automaton", "export", "--name", "baum_sweet"]);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bs.json");
    std::fs::write(&path, export).unwrap();
    let p = path.to_str().unwrap();
    assert_eq!(ok(&["automaton", "word", "--file", p, "--prefix", "21"]), "110110010100100110010\n");
    let morph = dir.path().join("m.json");
    std::fs::write(&morph, r#"{"src":["a","b"],"dst":["a","b"],"map":{"a":"ab","b":"ba"}}"#).unwrap();
    assert_eq!(ok(&["word", "--morphism", morph.to_str().unwrap(), "--prefix", "8"]), "abbabaab\n");
}

#[test]
fn numeric_commands() {
    let z = ok(&["fib", "zeckendorf", "51"]);
    assert_eq!(z.lines().nth(1), Some("51,9 7 4 2,2,A"));
    assert_eq!(ok(&["fib", "rabbit", "14", "--all"]).trim().len(), 14);
    let b = ok(&["fib", "beatty", "--kind", "phi", "--count", "32"]);
    assert_eq!(b.lines().last(), Some("32,51"));
    assert_eq!(ok(&["bbp", "eval", "--spec", "pi16", "--count", "8"]), "3.243f6a88\n");
    assert_eq!(ok(&["bbp", "digit", "--spec", "pi16", "--position", "1", "--count", "8"]), "243f6a88\n");
    let orbit = ok(&["bbp", "orbit", "--spec", "log2", "--count", "3"]);
    assert_eq!(orbit.lines().nth(2), Some("1,0.000000000000"));
    assert_eq!(orbit.lines().nth(3), Some("2,0.500000000000"));
    assert!(ok(&["fpseries", "verify-ptm", "--order", "256"]).ends_with("256,true\n"));
    assert!(ok(&["fpseries", "mahler", "--order", "256"]).ends_with("256,true,true\n"));
    let cf = ok(&["cf", "expand", "--source", "sqrt:2", "--terms", "3"]);
    assert_eq!(cf, "k,a,p,q\n0,1,1,1\n1,2,3,2\n2,2,7,5\n3,2,17,12\n");
    let fw = ok(&["cf", "from-word", "--A", "1", "--B", "2", "--terms", "5"]);
    let quotients: Vec<&str> = fw.lines().skip(2).map(|l| l.split(',').nth(1).unwrap()).collect();
    assert_eq!(quotients, ["1", "2", "1", "1", "2"]);
    let dual = ok(&["digits", "--source", "rational:1/3", "--base", "2,3", "--count", "4"]);
    assert_eq!(dual, "base,integer,digits\n2,0,0101\n3,0,1000\n");
}

#[test]
fn patterns_and_normality() {
    let p = ok(&["patterns", "--literal", "01101001101001", "--kind", "power:7/3"]);
    assert!(p.lines().any(|l| l == "0,14,6,01101001101001"), "{p}");
    let o = ok(&["patterns", "--word", "ptm", "--kind", "overlap", "--horizon", "2000"]);
    assert_eq!(o, "start,len,root,factor\n");
    let n = ok(&["normality", "--source", "champernowne:10", "--count", "5000", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&n).unwrap();
    assert_eq!(v[0]["digits"], 5000);
}

#[test]
fn output_is_deterministic_across_formats() {
    for f in ["csv", "json", "svg"] {
        let args = ["cf", "roy", "--xmax", "1000", "--format", f];
        assert_eq!(ok(&args), ok(&args));
    }
    assert!(ok(&["fib", "beatty", "--kind", "phi2", "--count", "3", "--format", "svg"]).starts_with("<svg"));
}

#[test]
fn exit_codes() {
    assert_eq!(call(&["nope"]).0, EXIT_USAGE);
    assert_eq!(call(&["digits", "--source", "sqrt:4", "--base", "10", "--count", "3"]).0, EXIT_USAGE);
    assert_eq!(call(&["digits", "--source", "bogus:1", "--base", "10", "--count", "3"]).0, EXIT_USAGE);
    assert_eq!(call(&["cf", "roy", "--precision", "64"]).0, EXIT_USAGE);
    assert_eq!(call(&["cf", "expand", "--source", "rational:1/2", "--terms", "3"]).0, EXIT_USAGE);
    // x - x is exactly 0, so no enclosure ever separates it from a digit boundary.
    let zero = "sum(sqrt:2;mul:-1:sqrt:2)";
    assert_eq!(
        call(&["digits", "--source", zero, "--base", "10", "--count", "3", "--max-bits", "4096"]).0,
        EXIT_PRECISION
    );
    let liouville = ["cf", "expand", "--source", "lacunary:n!@2", "--terms", "30", "--max-bits", "1024"];
    assert_eq!(call(&liouville).0, EXIT_PRECISION);
    assert_eq!(call(&["--help"]).0, EXIT_OK);
}

#[test]
fn binary_reports_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_expansions");
    let out = Command::new(bin).args(["word", "--morphism", "fib", "--prefix", "5"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&out.stdout), "abaab\n");
    let bad = Command::new(bin).args(["digits", "--base", "10"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn pinned_fixtures_reproduce() {
    let (code, out, err) = call(&["fixtures", "check"]);
    assert_eq!(code, EXIT_OK, "{out}{err}");
}
