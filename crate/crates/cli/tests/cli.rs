use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn cfgm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cfgm"))
        .args(args)
        .output()
        .expect("spawn cfgm")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn worked_example() -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../data/worked_example.csv")
        .to_string_lossy()
        .into_owned()
}

#[test]
fn example_matches_golden_output() {
    let out = cfgm(&["example"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert_eq!(text, include_str!("golden/example.txt"));
    for line in [
        "2, 59, 1.87, 31.62, 87.32, 143.02",
        "5, 61.4, 4.26, 14.42, 142.67, 524.58",
        "accumulated series x(0.59) = (55.70, 100.10, 140.07, 174.79, 206.53)",
        "  -190.6591, 1",
        "  31.7388",
        "[a, b] = [0.1152, 53.4382]",
        "response k=1..10 = (55.70, 100.11, 139.69, 174.96, 206.39, 234.40, 259.37, 281.61, 301.43, 319.10)",
        "restored k=1..10 = (55.70, 59.01, 62.10, 62.27, 60.81, 58.39, 55.43, 52.18, 48.80, 45.41)",
        "alpha* = 0.59",
    ] {
        assert!(text.lines().any(|l| l == line), "missing line: {line}");
    }
}

#[test]
fn search_prints_optimal_order_and_trace() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("trace.csv");
    let input = worked_example();
    let out = cfgm(&[
        "search",
        "--input",
        &input,
        "--kind",
        "conformable",
        "--output",
        trace.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert_eq!(stdout(&out).lines().next(), Some("alpha* = 0.59"));
    let trace = fs::read_to_string(trace).unwrap();
    assert_eq!(trace.lines().count(), 202);
    assert!(trace.starts_with("alpha,mape,failure\n0,"));
    assert!(trace.trim_end().ends_with(','));
    assert!(trace.lines().any(|l| l.starts_with("0.59,0.70428")));
}

#[test]
fn wu_search_covers_negative_orders() {
    let input = worked_example();
    let out = cfgm(&["search", "--input", &input, "--kind", "wu"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("\n-2,"));
    assert_eq!(text.lines().count(), 2 + 1 + 401);
}

#[test]
fn predict_zero_horizon_writes_header_only() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("forecast.csv");
    let input = worked_example();
    let out = cfgm(&[
        "predict",
        "--input",
        &input,
        "--alpha",
        "1",
        "--kind",
        "conformable",
        "--horizon",
        "0",
        "--output",
        file.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert_eq!(fs::read_to_string(file).unwrap(), "step,k,forecast\n");
}

#[test]
fn predict_uses_searched_order_by_default() {
    let input = worked_example();
    let out = cfgm(&["predict", "--input", &input, "--horizon", "5"]);
    assert!(out.status.success());
    let rows: Vec<Vec<f64>> = stdout(&out)
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(|c| c.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 5);
    let want = [58.39, 55.43, 52.18, 48.80, 45.41];
    for (r, w) in rows.iter().zip(want) {
        assert!((r[2] - w).abs() < 0.01, "{r:?}");
    }
    assert_eq!(rows[0][1], 6.0);
}

#[test]
fn fit_reports_parameters_and_writes_series() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("fitted.csv");
    let out = cfgm(&[
        "fit",
        "--input",
        "bundled:ng",
        "--series",
        "UAE",
        "--alpha",
        "0.5",
        "--output",
        file.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("model = CFGM\nalpha = 0.5\na = "));
    let fitted = fs::read_to_string(file).unwrap();
    assert_eq!(fitted.lines().next(), Some("k,label,actual,fitted"));
    assert!(fitted.contains("\n1,2008,50.2,50.2\n"));
    assert_eq!(fitted.lines().count(), 10);
}

#[test]
fn tscv_on_bundled_dataset() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("ng");
    let out = cfgm(&[
        "tscv",
        "--input",
        "bundled:ng",
        "--output",
        out_dir.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let summaries: Vec<_> = fs::read_dir(&out_dir)
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .filter(|n| n.ends_with("_summary.csv"))
        .collect();
    assert_eq!(summaries.len(), 11);
    for name in ["UAE", "Qatar", "India"] {
        let subcases = fs::read_to_string(out_dir.join(format!("{name}_subcases.csv"))).unwrap();
        for model in ["CFGM", "FGM"] {
            let n = subcases
                .lines()
                .filter(|l| l.starts_with(&format!("{model},")))
                .count();
            assert_eq!(n, 15, "{name} {model}");
        }
    }
    let hist = fs::read_to_string(out_dir.join("alpha_distribution.csv")).unwrap();
    assert!(hist.contains("CFGM,=0,") && hist.contains("FGM,<0,"));
    let meta = fs::read_to_string(out_dir.join("metadata.csv")).unwrap();
    assert!(meta.contains("aggregation,pooled"));
}

#[test]
fn identical_invocations_give_identical_files() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let path = dir.path().join(name);
        let out = cfgm(&[
            "rolling",
            "--input",
            "bundled:ng",
            "--format",
            "json",
            "--output",
            path.to_str().unwrap(),
        ]);
        assert!(out.status.success(), "{}", stderr(&out));
        fs::read(path).unwrap()
    };
    assert_eq!(run("a.json"), run("b.json"));
}

#[test]
fn rolling_stdout_shows_summaries() {
    let out = cfgm(&[
        "rolling",
        "--input",
        "bundled:ng",
        "--series",
        "Brazil",
        "--aggregation",
        "mean",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(
        text.starts_with("# Brazil_summary\nmodel,phase,mae,mae_std,mse,mse_std,mape,mape_std,n\n")
    );
    assert_eq!(text.lines().filter(|l| l.starts_with("AR,")).count(), 3);
}

#[test]
fn help_documents_exit_codes() {
    let out = cfgm(&["--help"]);
    assert!(out.status.success());
    let text = stdout(&out);
    for code in ["2  usage", "3  input", "4  model", "5  output"] {
        assert!(text.contains(code), "{text}");
    }
}

#[test]
fn usage_errors_exit_2() {
    let input = worked_example();
    for args in [
        vec!["fit", "--input", &input, "--bogus"],
        vec!["fit", "--input", &input, "--alpha", "4.5"],
        vec!["fit", "--input", &input, "--alpha", "1", "--auto"],
        vec!["fit", "--input", &input, "--kind", "spline"],
        vec!["search", "--input", &input, "--lo", "1", "--hi", "0"],
        vec!["tscv", "--input", &input, "--format", "xml"],
    ] {
        let out = cfgm(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}: {}", stderr(&out));
    }
}

#[test]
fn input_errors_exit_3_and_name_the_input() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.csv");
    fs::write(&bad, "year,A\n2001,1.5\n2002,abc\n").unwrap();
    let out = cfgm(&["fit", "--input", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    let err = stderr(&out);
    assert!(
        err.contains("bad.csv") && err.contains("line 3") && err.contains("'abc'"),
        "{err}"
    );

    let out = cfgm(&["fit", "--input", "missing.csv"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).contains("missing.csv"));

    let out = cfgm(&["fit", "--input", "bundled:ng", "--series", "Mars"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).contains("'Mars'"));

    let out = cfgm(&["fit", "--input", "bundled:ng"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn model_errors_exit_4() {
    let dir = tempfile::tempdir().unwrap();
    let short = dir.path().join("short.csv");
    fs::write(&short, "1\n2\n3\n").unwrap();
    let out = cfgm(&["fit", "--input", short.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(4), "{}", stderr(&out));

    let input = worked_example();
    let out = cfgm(&[
        "fit",
        "--input",
        &input,
        "--alpha",
        "-0.5",
        "--kind",
        "conformable",
    ]);
    assert_eq!(out.status.code(), Some(4));
    assert!(stderr(&out).contains("α = -0.5"));
}

#[test]
fn output_errors_exit_5() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("file");
    fs::write(&blocker, "").unwrap();
    let target = blocker.join("out.csv");
    let input = worked_example();
    let out = cfgm(&[
        "predict",
        "--input",
        &input,
        "--output",
        target.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(5));
    assert!(stderr(&out).contains("file"));
}
