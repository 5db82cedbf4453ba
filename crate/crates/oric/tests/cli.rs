use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn oric(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_oric"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn ok(dir: &Path, args: &[&str]) -> String {
    let out = oric(dir, args);
    assert!(
        out.status.success(),
        "oric {args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) {
    fs::write(dir.join(name), text).unwrap();
}

#[test]
fn jaccard_of_two_selections() {
    let dir = tempfile::tempdir().unwrap();
    let header = "rank\tpattern\tfreq_pos\tfreq_neg\tconfidence\tpruned_by\tdescription\n";
    write(
        dir.path(),
        "s.tsv",
        &format!("{header}1\tf0=1\t0.5\t0.1\t0.9\t-\ta\n2\tf1=1\t0.5\t0.1\t0.8\t-\tb\n"),
    );
    write(
        dir.path(),
        "t.tsv",
        &format!("{header}1\tf1=1\t0.5\t0.1\t0.9\t-\tb\n2\tf2=1\t0.5\t0.1\t0.8\t-\tc\n"),
    );
    let out = ok(
        dir.path(),
        &["eval", "jaccard", "--a", "s.tsv", "--b", "t.tsv"],
    );
    let value: f64 = out
        .trim()
        .strip_prefix("jaccard\t")
        .unwrap()
        .parse()
        .unwrap();
    assert!((value - 1.0 / 3.0).abs() < 1e-12);
}

/// Every positive row is `1,1,1,1,1` and every negative row `1,1,2,2,2`, so
/// chain statistics do not depend on which rows are drawn.
fn homogeneous_batch(pos: usize, neg: usize) -> String {
    let mut s = String::from("a,b,c,d,e,label\n");
    for _ in 0..pos {
        s.push_str("1,1,1,1,1,1\n");
    }
    for _ in 0..neg {
        s.push_str("1,1,2,2,2,0\n");
    }
    s
}

#[test]
fn two_updates_at_gamma_one_match_one_pooled_update() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    write(d, "p1.csv", &homogeneous_batch(30, 50));
    write(d, "p2.csv", &homogeneous_batch(20, 40));
    let mut pooled = homogeneous_batch(30, 50);
    pooled.push_str(homogeneous_batch(20, 40).split_once('\n').unwrap().1);
    write(d, "all.csv", &pooled);

    let init = ["-M", "200", "-L", "8", "--gamma", "1", "--d-conf", "10"];
    for model in ["two.oric", "one.oric"] {
        let mut args = vec!["init", "--model", model, "--data", "p1.csv"];
        args.extend(init);
        ok(d, &args);
    }
    ok(d, &["update", "--model", "two.oric", "--data", "p1.csv"]);
    ok(d, &["update", "--model", "two.oric", "--data", "p2.csv"]);
    ok(d, &["update", "--model", "one.oric", "--data", "all.csv"]);
    let two = ok(
        d,
        &[
            "select",
            "--model",
            "two.oric",
            "--format",
            "rows",
            "--include-pruned",
        ],
    );
    let one = ok(
        d,
        &[
            "select",
            "--model",
            "one.oric",
            "--format",
            "rows",
            "--include-pruned",
        ],
    );
    assert!(two.lines().count() > 1);
    assert_eq!(two, one);
}

#[test]
fn truncated_model_is_reported_as_corrupt() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    write(d, "p1.csv", &homogeneous_batch(5, 5));
    ok(
        d,
        &["init", "--model", "m.oric", "--data", "p1.csv", "-M", "50"],
    );
    ok(d, &["update", "--model", "m.oric", "--data", "p1.csv"]);
    let bytes = fs::read(d.join("m.oric")).unwrap();
    fs::write(d.join("m.oric"), &bytes[..bytes.len() / 2]).unwrap();

    let out = oric(d, &["select", "--model", "m.oric"]);
    assert!(!out.status.success());
    let err = String::from_utf8(out.stderr).unwrap();
    assert_eq!(err.lines().count(), 1, "{err}");
    assert!(err.starts_with("error: corrupt-file: "), "{err}");
}

#[test]
fn bad_input_gives_one_line_errors() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    write(d, "nolabel.csv", "a,b\n1,2\n");
    write(d, "bad.csv", "a,label\nx,1\ny,2\n");
    write(d, "good.csv", "a,label\nx,1\ny,0\n");

    let cases: [(&[&str], &str); 4] = [
        (
            &["init", "--model", "m.oric", "--data", "nolabel.csv"],
            "error: missing-label-column: ",
        ),
        (&["select", "--model", "absent.oric"], "error: io: "),
        (
            &["plan", "--theta", "0.5", "--p2", "0.7"],
            "error: invalid-config: ",
        ),
        (&["update", "--model", "m.oric"], "error: usage: "),
    ];
    for (args, prefix) in cases {
        let out = oric(d, args);
        let err = String::from_utf8(out.stderr).unwrap();
        assert!(!out.status.success());
        assert_eq!(err.lines().count(), 1, "{args:?}: {err}");
        assert!(err.starts_with(prefix), "{args:?}: {err}");
    }

    ok(d, &["init", "--model", "m.oric", "--data", "good.csv"]);
    let out = oric(d, &["update", "--model", "m.oric", "--data", "bad.csv"]);
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.starts_with("error: non-binary-label: row 2"), "{err}");
}

#[test]
fn pipeline_writes_features_and_reports() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let files = ok(
        d,
        &[
            "simulate",
            "--out-dir",
            "sim",
            "--rows",
            "3000",
            "--horizon",
            "2",
            "--features",
            "6",
            "--categories",
            "3",
            "--planted",
            "2",
            "--seed",
            "9",
        ],
    );
    assert_eq!(files.lines().count(), 2);
    assert!(d.join("sim/spec.json").exists());
    assert_eq!(
        fs::read_to_string(d.join("sim/planted.tsv"))
            .unwrap()
            .lines()
            .count(),
        3
    );

    ok(
        d,
        &[
            "init",
            "--model",
            "m.oric",
            "--data",
            "sim/period_001.csv",
            "-M",
            "500",
            "--d-conf",
            "5",
        ],
    );
    let report = ok(
        d,
        &[
            "update",
            "--model",
            "m.oric",
            "--data",
            "sim/period_001.csv",
            "--threads",
            "2",
        ],
    );
    assert!(report.starts_with("period 1:"), "{report}");
    ok(
        d,
        &[
            "update",
            "--model",
            "m.oric",
            "--data",
            "sim/period_002.csv",
        ],
    );

    ok(
        d,
        &[
            "select", "--model", "m.oric", "--format", "rows", "--out", "sel.tsv",
        ],
    );
    let selection = fs::read_to_string(d.join("sel.tsv")).unwrap();
    let selected = selection.lines().count() - 1;
    assert!((1..=5).contains(&selected), "{selection}");
    let table = ok(d, &["select", "--model", "m.oric"]);
    assert_eq!(table.lines().count(), selected + 1);

    let emitted = ok(
        d,
        &[
            "emit",
            "--model",
            "m.oric",
            "--data",
            "sim/period_002.csv",
            "--selection",
            "sel.tsv",
            "--out",
            "x.csv",
        ],
    );
    assert!(emitted.starts_with("rows\t3000\n"));
    let features = fs::read_to_string(d.join("x.csv")).unwrap();
    assert_eq!(features.lines().count(), 3001);
    assert_eq!(
        features.lines().next().unwrap().split(',').count(),
        selected + 1
    );

    let exact = ok(
        d,
        &[
            "eval",
            "exact",
            "--model",
            "m.oric",
            "--data",
            "sim/period_002.csv",
            "--format",
            "rows",
        ],
    );
    assert_eq!(exact.lines().count(), selected + 1);
    assert!(exact.starts_with("pattern\tp0_est\tp0_exact"));
}

#[test]
fn plan_reports_chain_budget() {
    let dir = tempfile::tempdir().unwrap();
    let out = ok(dir.path(), &["plan", "--theta", "0.5", "--p2", "0.3"]);
    assert!(out.contains("max_length (L*)\t8\n"), "{out}");
    assert!(out.contains("num_chains (M*)\t766\n"), "{out}");
}
