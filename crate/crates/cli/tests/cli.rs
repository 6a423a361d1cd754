use std::path::PathBuf;
use std::process::Command;

fn core_path(rel: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../core")
        .join(rel)
        .to_string_lossy()
        .into_owned()
}

fn laver(args: &[&str]) -> (String, i32) {
    let out = Command::new(env!("CARGO_BIN_EXE_laver")).args(args).output().unwrap();
    (String::from_utf8(out.stdout).unwrap(), out.status.code().unwrap())
}

#[test]
fn table_csv_matches_golden() {
    let (out, code) = laver(&["table", "--n", "3", "--format", "csv"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().count(), 65);
    assert_eq!(out, std::fs::read_to_string(core_path("tests/golden/a3.csv")).unwrap());
}

#[test]
fn table_one_based() {
    let (out, _) = laver(&["table", "--n", "2", "--convention", "one"]);
    assert_eq!(out, "1: 2 4 2 4\n2: 3 4 3 4\n3: 4 4 4 4\n4: 1 2 3 4\n");
}

#[test]
fn table_cache_file_is_written() {
    let path = std::env::temp_dir().join(format!("laver-cli-{}.txt", std::process::id()));
    let p = path.to_string_lossy().into_owned();
    let (_, code) = laver(&["table", "--n", "2", "--file", &p]);
    assert_eq!(code, 0);
    let text = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).unwrap();
    assert_eq!(text, "LAVERTABLE v1 n=2 convention=zero\n1 2 2 0\n2 2 3 0\n3 1 0\n");
}

#[test]
fn probe_examples() {
    assert_eq!(laver(&["probe", "--k", "4", "--cap", "8"]), ("known 5\n".into(), 0));
    assert_eq!(
        laver(&["probe", "--k", "16", "--cap", "12"]),
        ("undecided 12\n".into(), 2)
    );
    assert_eq!(laver(&["hprobe", "--k", "3"]), ("known 4\n".into(), 0));
    assert_eq!(laver(&["hprobe", "--k", "4"]), ("undecided 12\n".into(), 2));
    let (json, _) = laver(&["probe", "--k", "1", "--format", "json"]);
    assert_eq!(json, "{\"level\":2,\"status\":\"known\"}\n");
}

#[test]
fn compare_examples() {
    assert_eq!(laver(&["compare", "--a", "1", "--b", "1*1"]), ("less\n".into(), 0));
    assert_eq!(
        laver(&["compare", "--a", "1*(1*1)", "--b", "(1*1)*(1*1)"]),
        ("equiv\n".into(), 0)
    );
    assert_eq!(laver(&["compare", "--a", "1*1", "--b", "1"]), ("greater\n".into(), 0));
}

#[test]
fn term_commands() {
    assert_eq!(laver(&["eval", "--term", "1*1*1", "--n", "4"]), ("3\n".into(), 0));
    assert_eq!(
        laver(&["eval", "--term", "1*1", "--n", "1", "--convention", "one"]),
        ("2\n".into(), 0)
    );
    assert_eq!(
        laver(&["profile", "--term", "1*1", "--cap", "3"]),
        ("n,value\n0,0\n1,0\n2,2\n3,2\n".into(), 0)
    );
    assert_eq!(laver(&["signature", "--term", "1*(1*1)"]), ("known 2\n".into(), 0));
    assert_eq!(laver(&["normalize", "--term", "(1 o 1)*1"]), ("(1*(1*1))\n".into(), 0));
}

#[test]
fn period_commands() {
    assert_eq!(laver(&["period", "--n", "3", "--a", "1"]), ("4\n".into(), 0));
    assert_eq!(
        laver(&["period", "--n", "3", "--a", "8", "--convention", "one"]),
        ("8\n".into(), 0)
    );
    assert_eq!(laver(&["period", "--n", "3", "--a", "8"]).1, 3);
}

#[test]
fn law_checks() {
    let (out, code) = laver(&["check-laws", "--n", "4"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().count(), 4);
    assert!(out.lines().all(|l| l.contains(" holds ")));
    let a = laver(&[
        "check-laws",
        "--n",
        "10",
        "--law",
        "ld",
        "--samples",
        "500",
        "--seed",
        "9",
    ]);
    let b = laver(&[
        "check-laws",
        "--n",
        "10",
        "--law",
        "ld",
        "--samples",
        "500",
        "--seed",
        "9",
    ]);
    assert_eq!(a, b);
    assert_eq!(a.0, "LD n=10 holds checked 500\n");
}

#[test]
fn embed_commands() {
    let (out, code) = laver(&["embed-check", "--file", &core_path("data/successor.embed")]);
    assert_eq!(code, 1);
    assert!(out.contains("crit refuted (f, f, 0)\n"), "{out}");

    let (out, code) = laver(&["embed-check", "--file", &core_path("data/trivial.embed")]);
    assert_eq!(code, 0);
    assert!(out.lines().all(|l| l.contains(" verified ")), "{out}");

    let sample = core_path("data/sample.embed");
    assert_eq!(
        laver(&["embed-critseq", "--file", &sample, "--name", "j", "--k", "4"]),
        ("1 2 3 5\n".into(), 0)
    );
    assert_eq!(
        laver(&["embed-critseq", "--file", &sample, "--name", "j o jj", "--k", "4"]),
        ("1 2 5 9\n".into(), 0)
    );
    assert_eq!(laver(&["embed-critseq", "--file", &sample, "--name", "id"]).1, 3);

    let (out, code) = laver(&["embed-two-sorted", "--file", &sample]);
    assert_eq!(code, 0, "{out}");
    assert!(!out.contains("refuted"));
    assert_eq!(
        laver(&["embed-two-sorted", "--file", &core_path("data/successor.embed")]).1,
        1
    );
}

#[test]
fn usage_and_format_errors_exit_3() {
    assert_eq!(laver(&["bogus"]).1, 3);
    assert_eq!(laver(&["table"]).1, 3);
    assert_eq!(laver(&["compare", "--a", "1*", "--b", "1"]).1, 3);
    assert_eq!(laver(&["table", "--n", "3", "--format", "xml"]).1, 3);
    assert_eq!(laver(&["embed-check", "--file", "/nonexistent/file"]).1, 3);
    assert_eq!(laver(&["--help"]).1, 0);
}

#[test]
fn memory_cap_is_undecided() {
    assert_eq!(laver(&["table", "--n", "12", "--memory-cap", "1000"]).1, 2);
}

#[test]
fn output_is_deterministic() {
    for args in [
        &["table", "--n", "4", "--format", "json"][..],
        &[
            "embed-two-sorted",
            "--file",
            &core_path("data/sample.embed"),
            "--format",
            "json",
        ][..],
    ] {
        assert_eq!(laver(args), laver(args));
    }
}
