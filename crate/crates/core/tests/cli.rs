use std::process::{Command, Output};

fn hankel(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hankel"))
        .args(args)
        .env_remove("HANKEL_MAX_ROWS")
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = hankel(args);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn det(spec: &str, m: &str, k: &str, n: &str) -> String {
    stdout(&["det", "--type", spec, "--m", m, "--k", k, "--n", n])
        .trim()
        .to_string()
}

#[test]
fn published_sequences() {
    let cases = [
        (
            "list:1,0,0",
            "2",
            "0",
            "0..11",
            "1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12",
        ),
        (
            "const:c=0",
            "2",
            "0",
            "0..11",
            "1, 1, 2, 2, 3, 3, 4, 4, 5, 5, 6, 6",
        ),
        (
            "list:1,0,0",
            "-2",
            "0",
            "0..18",
            "1, 0, 0, -1, -1, -2, -2, -3, -3, -4, -4, -5, -5, -6, -6, -7, -7, -8, -8",
        ),
        (
            "const:c=0",
            "2",
            "3",
            "0..18",
            "1, 0, -1, 0, 4, 0, -4, 0, 9, 0, -9, 0, 16, 0, -16, 0, 25, 0, -25",
        ),
        (
            "const:c=0",
            "-2",
            "3",
            "0..18",
            "1, 0, 0, 0, 0, 0, -1, 0, 1, 0, -4, 0, 4, 0, -9, 0, 9, 0, -16",
        ),
        (
            "bc:b=sym,c=sym",
            "0",
            "1",
            "0..7",
            "1, 0, -1, b, -b^2+1, b^3-2*b, -b^4+3*b^2-1, b^5-4*b^3+3*b",
        ),
        (
            "bc:b=1,c=3",
            "1",
            "1",
            "0..12",
            "1, 1, -10, 19, 19, -180, 341, 341, -3230, 6119, 6119, -57960, 109801",
        ),
        (
            "bc:b=1,c=3",
            "-1",
            "1",
            "0..16",
            "1, 0, 0, -1, 2, 2, -19, 36, 36, -341, 646, 646, -6119, 11592, 11592, -109801, 208010",
        ),
    ];
    for (spec, m, k, n, want) in cases {
        assert_eq!(det(spec, m, k, n), want, "{spec} m={m} k={k}");
    }
}

#[test]
fn symbolic_second_column_list() {
    let got = det("bc:b=sym,c=sym", "0", "2", "0..9");
    assert_eq!(
        got,
        "1, 0, 0, -1, 0, b^2, -b^2+1, -b^4+b^2, 2*b^4-3*b^2, b^6-3*b^4+3*b^2-1"
    );
}

#[test]
fn tables() {
    let first_column = |out: String| -> Vec<String> {
        out.lines()
            .map(|l| l.split('\t').next().unwrap().to_string())
            .collect()
    };
    assert_eq!(
        first_column(stdout(&["table", "--type", "const:c=1", "--rows", "4"])),
        ["1", "1", "2", "4", "9"]
    );
    assert_eq!(
        first_column(stdout(&["table", "--type", "list:1,0,0", "--rows", "4"])),
        ["1", "1", "2", "3", "6"]
    );
    let sym = stdout(&["table", "--type", "bc:b=1,c=sym", "--rows", "3"]);
    assert_eq!(sym.lines().nth(2).unwrap(), "c^2+2*c+2\t2*c+1\t1");
    let xy = stdout(&["table", "--type", "xy", "--rows", "2"]);
    assert_eq!(xy.lines().nth(2).unwrap(), "x^2+3*x*y+y^2\t2*x+2*y\t1");
}

#[test]
fn det_formats() {
    let csv = stdout(&[
        "det",
        "--type",
        "const:c=2",
        "--m",
        "1",
        "--k",
        "0",
        "--n",
        "3..5",
        "--format",
        "csv",
    ]);
    assert_eq!(csv, "n,value\n3,4\n4,5\n5,6\n");
    let json = stdout(&[
        "det",
        "--type",
        "const:c=2",
        "--m",
        "1",
        "--k",
        "0",
        "--n",
        "0..1",
        "--format",
        "json",
    ]);
    let doc: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(doc["spec"], "const(c=2)");
    assert_eq!(doc["values"][1]["value"], "2");
}

#[test]
fn verify_exit_codes() {
    assert_eq!(
        hankel(&["verify", "--claim", "THM1", "--m", "0..4", "--n", "0..20", "--seeds", "20"])
            .status
            .code(),
        Some(0)
    );
    let out = hankel(&["verify", "--claim", "CONJ6", "--k", "2", "--m", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(
        text.contains("passed=0") && text.contains("not_covered=222"),
        "{text}"
    );
    let flipped = hankel(&[
        "verify",
        "--claim",
        "THM4",
        "--k",
        "1",
        "--n",
        "0..6",
        "--flip-sign",
    ]);
    assert_eq!(flipped.status.code(), Some(1));
    assert!(String::from_utf8(flipped.stdout)
        .unwrap()
        .contains("m=1 k=1 n=0"));
    assert_eq!(
        hankel(&["verify", "--all", "--budget-cells", "0"])
            .status
            .code(),
        Some(3)
    );
}

#[test]
fn usage_errors_exit_with_two() {
    for args in [
        vec!["verify", "--claim", "THM9"],
        vec![
            "det", "--type", "poly:c=1", "--m", "0", "--k", "0", "--n", "0..3",
        ],
        vec![
            "det",
            "--type",
            "const:c=1",
            "--m",
            "0",
            "--k",
            "0",
            "--n",
            "5..3",
        ],
        vec![
            "det",
            "--type",
            "const:c=1",
            "--m",
            "0",
            "--k",
            "0",
            "--n",
            "0..500",
        ],
        vec!["table", "--type", "xy"],
        vec!["verify"],
    ] {
        assert_eq!(hankel(&args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn row_bound_is_configurable() {
    let run = |bound: &str| {
        Command::new(env!("CARGO_BIN_EXE_hankel"))
            .args([
                "det",
                "--type",
                "const:c=1",
                "--m",
                "0",
                "--k",
                "0",
                "--n",
                "0..20",
            ])
            .env("HANKEL_MAX_ROWS", bound)
            .output()
            .unwrap()
            .status
            .code()
    };
    assert_eq!(run("10"), Some(2));
    assert_eq!(run("40"), Some(0));
}
