use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

const DOUBLE_BACK: &str = "p escad 2 3\na 1 2 2\na 2 1 1\n";

fn escad(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_escad"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn result_line(o: &Output) -> String {
    stdout(o)
        .lines()
        .find(|l| l.starts_with("RESULT"))
        .unwrap_or_default()
        .to_string()
}

fn file(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn brute_and_dp_agree_on_double_back() {
    let dir = TempDir::new().unwrap();
    let g = file(&dir, "g.escad", DOUBLE_BACK);
    let brute = escad(&["solve", "--alg", "brute", "--graph", s(&g), "--k", "1"]);
    assert_eq!(brute.status.code(), Some(0));
    assert_eq!(result_line(&brute), "RESULT YES k=1");

    let td = dir.path().join("g.td");
    let dec = escad(&["decompose", "--graph", s(&g), "--out", s(&td)]);
    assert_eq!(dec.status.code(), Some(0));
    for k in ["0", "1", "3"] {
        let b = escad(&["solve", "--alg", "brute", "--graph", s(&g), "--k", k]);
        let d = escad(&["solve", "--alg", "dp", "--graph", s(&g), "--k", k, "--td", s(&td)]);
        let h = escad(&["solve", "--alg", "dp", "--graph", s(&g), "--k", k]);
        assert_eq!(result_line(&b), result_line(&d));
        assert_eq!(result_line(&b), result_line(&h));
    }
    let none = escad(&["solve", "--alg", "dp", "--graph", s(&g), "--k", "0"]);
    assert_eq!(result_line(&none), "RESULT NO");
    assert_eq!(none.status.code(), Some(0));
}

#[test]
fn vi_rejects_multigraphs_and_solves_simple_graphs() {
    let dir = TempDir::new().unwrap();
    let multi = file(&dir, "m.escad", DOUBLE_BACK);
    let o = escad(&["solve", "--alg", "vi", "--graph", s(&multi), "--k", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("simple"));

    let chord = file(&dir, "c.escad", "p escad 3 4\na 1 2 1\na 2 3 1\na 3 1 1\na 1 3 1\n");
    let o = escad(&["solve", "--alg", "vi", "--graph", s(&chord), "--optimize"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(result_line(&o), "RESULT YES k=1");
    let o = escad(&["solve", "--alg", "vi", "--graph", s(&chord), "--k", "1", "--vi-bound", "2"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn optimize_emits_a_verifiable_solution() {
    let dir = TempDir::new().unwrap();
    let g = file(&dir, "g.escad", DOUBLE_BACK);
    let sol = dir.path().join("g.sol");
    for alg in ["brute", "dp"] {
        let o = escad(&["solve", "--alg", alg, "--graph", s(&g), "--optimize", "--emit-solution", s(&sol)]);
        assert_eq!(result_line(&o), "RESULT YES k=1");
        let v = escad(&["verify", "--graph", s(&g), "--k", "1", "--solution", s(&sol)]);
        assert_eq!(v.status.code(), Some(0));
        assert!(stdout(&v).lines().any(|l| l == "VALID"));
    }
}

#[test]
fn verify_examples() {
    let dir = TempDir::new().unwrap();
    let g = file(&dir, "g.escad", DOUBLE_BACK);
    let empty = file(&dir, "empty.sol", "s 0\n");
    let o = escad(&["verify", "--graph", s(&g), "--k", "0", "--solution", s(&empty)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).lines().any(|l| l == "INVALID"));

    let all = file(&dir, "all.sol", "s 3\nd 1 2 2\nd 2 1 1\n");
    let o = escad(&["verify", "--graph", s(&g), "--k", "3", "--solution", s(&all)]);
    assert_eq!(o.status.code(), Some(0));

    let too_many = file(&dir, "many.sol", "s 3\nd 1 2 3\n");
    let o = escad(&["verify", "--graph", s(&g), "--k", "3", "--solution", s(&too_many)]);
    assert_eq!(o.status.code(), Some(1));

    let broken = file(&dir, "broken.sol", "d 1 2 1\n");
    let o = escad(&["verify", "--graph", s(&g), "--k", "3", "--solution", s(&broken)]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn malformed_inputs_exit_2() {
    let dir = TempDir::new().unwrap();
    let bad = file(&dir, "bad.escad", "p escad 2 5\na 1 2 1\n");
    let o = escad(&["solve", "--alg", "brute", "--graph", s(&bad), "--k", "1"]);
    assert_eq!(o.status.code(), Some(2));
    let o = escad(&["decompose", "--graph", s(&bad), "--out", s(&dir.path().join("x.td"))]);
    assert_eq!(o.status.code(), Some(2));
    let missing = dir.path().join("nope.escad");
    let o = escad(&["solve", "--alg", "dp", "--graph", s(&missing), "--k", "1"]);
    assert_eq!(o.status.code(), Some(2));

    let g = file(&dir, "g.escad", DOUBLE_BACK);
    let td = file(&dir, "wrong.td", "s td 1 1 2\nb 1 1\n");
    let o = escad(&["solve", "--alg", "dp", "--graph", s(&g), "--k", "1", "--td", s(&td)]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn resource_caps_exit_3() {
    let dir = TempDir::new().unwrap();
    let g = file(&dir, "g.escad", "p escad 3 6\na 1 2 2\na 2 3 2\na 3 1 2\n");
    let o = escad(&["solve", "--alg", "brute", "--graph", s(&g), "--k", "2", "--max-subsets", "2"]);
    assert_eq!(o.status.code(), Some(3));
    let o = escad(&["solve", "--alg", "dp", "--graph", s(&g), "--k", "2", "--max-table-entries", "1"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn decompose_widths() {
    let dir = TempDir::new().unwrap();
    let cases = [
        ("tree", "p escad 4 4\na 1 2 1\na 3 1 1\na 1 4 2\n", "width=1"),
        (
            "k4",
            "p escad 4 6\na 1 2 1\na 1 3 1\na 1 4 1\na 2 3 1\na 2 4 1\na 3 4 1\n",
            "width=3",
        ),
        ("empty", "p escad 3 0\n", "width=0"),
    ];
    for (name, text, want) in cases {
        let g = file(&dir, name, text);
        let out = dir.path().join(format!("{name}.td"));
        let o = escad(&["decompose", "--graph", s(&g), "--out", s(&out)]);
        assert_eq!(o.status.code(), Some(0));
        assert!(stdout(&o).lines().any(|l| l == want), "{name}: {}", stdout(&o));
        assert!(fs::read_to_string(&out).unwrap().starts_with("s td"));
    }
}

#[test]
fn gen_mcc_prints_budget_and_lifts() {
    let dir = TempDir::new().unwrap();
    let mcc = file(
        &dir,
        "i.mcc",
        "p mcc 6 8 3\nv 1 1\nv 2 1\nv 3 2\nv 4 2\nv 5 3\nv 6 3\n\
         e 1 3\ne 1 5\ne 3 5\ne 2 4\ne 2 6\ne 4 6\ne 1 4\ne 3 6\n",
    );
    let out = dir.path().join("mcc.escad");
    let sol = dir.path().join("mcc.sol");
    let o = escad(&[
        "gen", "mcc", "--input", s(&mcc), "--out", s(&out), "--clique", "1,3,5", "--emit-solution", s(&sol),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).lines().any(|l| l == "k=12"));
    let meta = fs::read_to_string(dir.path().join("mcc.escad.meta")).unwrap();
    assert!(meta.contains("meta k=12"));
    let v = escad(&["verify", "--graph", s(&out), "--k", "12", "--solution", s(&sol)]);
    assert_eq!(v.status.code(), Some(0));

    let o = escad(&[
        "gen", "mcc", "--input", s(&mcc), "--out", s(&out), "--clique", "1,4,5", "--emit-solution", s(&sol),
    ]);
    assert_eq!(o.status.code(), Some(2));

    let degenerate = file(&dir, "d.mcc", "p mcc 3 3 3\nv 1 1\nv 2 2\nv 3 3\ne 1 2\ne 1 3\ne 2 3\n");
    let o = escad(&["gen", "mcc", "--input", s(&degenerate), "--out", s(&out)]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn gen_binpack_exact_and_trivial() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("bp.escad");
    let sol = dir.path().join("bp.sol");
    let o = escad(&[
        "gen", "binpack", "--sizes", "1,1,1,1", "--bins", "2", "--capacity", "2", "--out", s(&out),
        "--packing", "1,2;3,4", "--emit-solution", s(&sol),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).lines().any(|l| l == "k=4"));
    let v = escad(&["verify", "--graph", s(&out), "--k", "4", "--solution", s(&sol)]);
    assert_eq!(v.status.code(), Some(0));

    let o = escad(&["gen", "binpack", "--sizes", "3,3", "--bins", "1", "--capacity", "4", "--out", s(&out)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).lines().any(|l| l == "STAT trivial=no"));
    let r = escad(&["solve", "--alg", "brute", "--graph", s(&out), "--k", "0"]);
    assert_eq!(result_line(&r), "RESULT NO");

    let o = escad(&["gen", "binpack", "--sizes", "0,1", "--bins", "1", "--capacity", "2", "--out", s(&out)]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn gen_vc3_on_k4() {
    let dir = TempDir::new().unwrap();
    let k4 = file(&dir, "k4.edge", "p edge 4 6\ne 1 2\ne 1 3\ne 1 4\ne 2 3\ne 2 4\ne 3 4\n");
    let out = dir.path().join("vc.escad");
    let o = escad(&["gen", "vc3", "--input", s(&k4), "--k", "3", "--out", s(&out)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).lines().any(|l| l == "k=3"));
    let r = escad(&["solve", "--alg", "brute", "--graph", s(&out), "--k", "3"]);
    assert_eq!(result_line(&r), "RESULT YES k=3");

    let path = file(&dir, "p.edge", "p edge 3 2\ne 1 2\ne 2 3\n");
    let o = escad(&["gen", "vc3", "--input", s(&path), "--k", "1", "--out", s(&out)]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn gen_subdivide_header_and_lift() {
    let dir = TempDir::new().unwrap();
    let g = file(&dir, "g.escad", "p escad 2 2\na 1 2 2\n");
    let out = dir.path().join("sub.escad");
    let o = escad(&["gen", "subdivide", "--graph", s(&g), "--out", s(&out)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).lines().any(|l| l == "k=0"));
    let text = fs::read_to_string(&out).unwrap();
    assert_eq!(text.lines().next(), Some("p escad 4 4"));

    let g = file(&dir, "db.escad", DOUBLE_BACK);
    let sol = file(&dir, "db.sol", "s 1\nd 2 1 1\n");
    let lifted = dir.path().join("sub.sol");
    let o = escad(&[
        "gen", "subdivide", "--graph", s(&g), "--out", s(&out), "--solution", s(&sol), "--emit-solution", s(&lifted),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v = escad(&["verify", "--graph", s(&out), "--k", "1", "--solution", s(&lifted)]);
    assert_eq!(v.status.code(), Some(0));
    let r = escad(&["solve", "--alg", "vi", "--graph", s(&out), "--optimize"]);
    assert_eq!(result_line(&r), "RESULT YES k=1");
}

#[test]
fn output_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let g = file(&dir, "g.escad", "p escad 4 6\na 1 2 2\na 2 3 1\na 3 1 1\na 3 4 1\na 4 2 1\n");
    let strip = |o: &Output| {
        stdout(o)
            .lines()
            .filter(|l| !l.starts_with("STAT time_ms"))
            .map(String::from)
            .collect::<Vec<_>>()
    };
    for alg in ["brute", "dp"] {
        let a = escad(&["solve", "--alg", alg, "--graph", s(&g), "--optimize", "--threads", "1"]);
        let b = escad(&["solve", "--alg", alg, "--graph", s(&g), "--optimize", "--threads", "4"]);
        assert_eq!(a.status.code(), Some(0));
        assert_eq!(strip(&a), strip(&b));
    }
}
