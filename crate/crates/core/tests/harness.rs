use std::path::Path;

use fracineq::bounds::{Status, Theorem};
use fracineq::harness::cli::{EXIT_FINDINGS, EXIT_OK, EXIT_USAGE};
use fracineq::harness::report::CSV_COLUMNS;
use fracineq::harness::{cli_main, run_falsify, run_verify_identities, run_verify_theorems, ResultRow, RunReport, SweepConfig};

struct Run {
    code: i32,
    out: String,
    err: String,
}

fn cli(args: &[&str]) -> Run {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("fracineq").chain(args.iter().copied());
    let code = cli_main(argv, &mut out, &mut err);
    Run {
        code,
        out: String::from_utf8(out).unwrap(),
        err: String::from_utf8(err).unwrap(),
    }
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

fn suite(functions: &str, alpha: &str, lambda: &str) -> String {
    format!(
        "schema_version = 1\n\n[[instances]]\nfunctions = [{functions}]\nmaps = [\"identity\", \"scaled:0.7\"]\n\
         a = [0.0]\nb = [1.0]\nalpha = [{alpha}]\nlambda = [{lambda}]\nq = [2.0]\n"
    )
}

#[test]
fn specfun_eval_prints_value() {
    let r = cli(&["specfun", "eval", "gamma", "0.5"]);
    assert_eq!(r.code, EXIT_OK);
    let v: f64 = r.out.trim().parse().unwrap();
    assert!((v - std::f64::consts::PI.sqrt()).abs() < 1e-14);
    let r = cli(&["specfun", "eval", "hyp2f1", "1", "1", "2", "-0.5"]);
    assert_eq!(r.code, EXIT_OK);
    assert_eq!(cli(&["specfun", "eval", "zeta", "2"]).code, EXIT_USAGE);
    assert_eq!(cli(&["specfun", "eval", "beta", "1"]).code, EXIT_USAGE);
    assert_eq!(cli(&["specfun", "eval", "gamma", "0"]).code, EXIT_USAGE);
    assert_eq!(cli(&["bogus"]).code, EXIT_USAGE);
}

#[test]
fn second_order_theorem_on_default_suite_passes() {
    let r = cli(&["theorems", "--which", "T4"]);
    assert_eq!(r.code, EXIT_OK, "{}", r.err);
    let report = RunReport::from_json(&r.out).unwrap();
    assert_eq!(report.summary.fail + report.summary.flag + report.summary.error, 0);
    let mut remark_rows = 0;
    for row in &report.results {
        match row {
            ResultRow::Bound(b) if b.status == Status::Pass => assert!(b.report.as_ref().unwrap().bound_holds_oracle),
            ResultRow::Remark(m) => {
                remark_rows += 1;
                assert!(m.check.as_ref().unwrap().rel_diff.abs() <= 1e-12);
            }
            _ => {}
        }
    }
    assert!(remark_rows > 0);
}

#[test]
fn invalid_alpha_names_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "bad.toml", &suite("\"square\"", "0.5, -1.0", "0.5"));
    let r = cli(&["identities", "--config", &path]);
    assert_eq!(r.code, EXIT_USAGE);
    assert!(r.err.contains("instances[0].alpha[1]"), "{}", r.err);
    assert!(r.err.contains("line 8"), "{}", r.err);
    assert!(r.out.is_empty());
}

#[test]
fn malformed_configs_are_usage_errors() {
    let dir = tempfile::tempdir().unwrap();
    let unknown = write(dir.path(), "u.toml", &(suite("\"square\"", "0.5", "0.5") + "colour = 1\n"));
    let r = cli(&["identities", "--config", &unknown]);
    assert_eq!(r.code, EXIT_USAGE);
    assert!(r.err.contains("colour"), "{}", r.err);
    let fname = write(dir.path(), "f.toml", &suite("\"cube\"", "0.5", "0.5"));
    assert_eq!(cli(&["identities", "--config", &fname]).code, EXIT_USAGE);
    let lambda = write(dir.path(), "l.toml", &suite("\"square\"", "0.5", "0.7"));
    assert_eq!(cli(&["theorems", "--config", &lambda]).code, EXIT_USAGE);
    assert_eq!(cli(&["identities", "--config", "/nonexistent/x.toml"]).code, EXIT_USAGE);
    assert_eq!(cli(&["theorems", "--which", "T9"]).code, EXIT_USAGE);
}

#[test]
fn missing_second_derivative_is_isolated() {
    let cfg = SweepConfig::from_toml_str(&suite("\"abs:0.3\", \"square\"", "0.5, 1.0, 2.0", "0.5")).unwrap();
    let report = run_verify_identities(&cfg);
    assert_eq!(report.results.len(), 2 * 2 * 3 * 2);
    for row in &report.results {
        let ResultRow::Identity(r) = row else { panic!("unexpected row") };
        let missing = r.key.function == "abs:0.3" && r.lemma == fracineq::harness::report::Lemma::SecondDerivative;
        if missing {
            assert_eq!(r.status, Status::Error);
            assert!(r.error.as_deref().unwrap().contains("no derivative of order 2"));
        } else {
            assert_eq!(r.status, Status::Pass, "{:?}", r.key);
            assert!(r.residual.as_ref().unwrap().residual <= 1e-8);
        }
    }
    assert_eq!(report.summary.error, 6);
    assert_eq!(report.exit_code(), EXIT_FINDINGS);
}

#[test]
fn empty_theorem_set() {
    let report = run_verify_theorems(&SweepConfig::default_suite(), &[]);
    assert!(report.results.is_empty());
    assert_eq!(report.summary.total, 0);
    assert_eq!(report.exit_code(), EXIT_OK);
    let r = cli(&["theorems", "--which", ""]);
    assert_eq!(r.code, EXIT_OK, "{}", r.err);
}

#[test]
fn constants_only_suite() {
    let cfg = SweepConfig::from_toml_str(&suite("\"const:1\", \"const:3.5\"", "0.25, 1.0, 3.0", "0.5, 0.1")).unwrap();
    let ids = run_verify_identities(&cfg);
    assert_eq!(ids.summary.pass, ids.summary.total);
    for row in &ids.results {
        let ResultRow::Identity(r) = row else { unreachable!() };
        let res = r.residual.as_ref().unwrap();
        assert!(res.lhs.abs() <= 1e-13 && res.rhs == 0.0);
    }
    let th = run_verify_theorems(&cfg, &Theorem::ALL);
    assert_eq!(th.summary.pass + th.summary.flag, th.summary.total, "{:?}", th.summary);
    for row in &th.results {
        if let ResultRow::Bound(b) = row {
            let r = b.report.as_ref().unwrap();
            assert_eq!((r.oracle_bound, r.paper_bound), (0.0, 0.0));
            assert_eq!(b.status, Status::Pass);
        }
    }
    let fz = run_falsify(&cfg, 20, 3).unwrap();
    let f = fz.falsification.unwrap();
    assert_eq!(f.violations, 0);
    assert_eq!(f.exact_equality, f.certified);
}

#[test]
fn summary_matches_rows() {
    let report = run_verify_theorems(&SweepConfig::default_suite(), &[Theorem::T1, Theorem::T3]);
    let s = report.summary;
    assert_eq!(s.total, report.results.len());
    assert_eq!(s.pass + s.flag + s.fail + s.exploratory + s.error, s.total);
    assert_eq!(s.fail, 0);
}

fn csv_f64(cell: &str) -> Option<f64> {
    if cell.is_empty() {
        None
    } else {
        Some(cell.parse().unwrap())
    }
}

fn same_to_15_digits(x: f64, y: f64) -> bool {
    x == y || (x - y).abs() <= 1e-15 * x.abs().max(y.abs())
}

#[test]
fn json_to_csv_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("t.json");
    let csv_path = dir.path().join("t.csv");
    let r = cli(&["theorems", "--which", "T1,T2,T5", "--out", json.to_str().unwrap()]);
    assert_eq!(r.code, EXIT_FINDINGS, "{}", r.err);
    assert!(r.out.is_empty());
    let r = cli(&["report", "--in", json.to_str().unwrap(), "--out", csv_path.to_str().unwrap()]);
    assert_eq!(r.code, EXIT_OK, "{}", r.err);

    let report = RunReport::from_json(&std::fs::read_to_string(&json).unwrap()).unwrap();
    let mut reader = csv::Reader::from_path(&csv_path).unwrap();
    let header: Vec<String> = reader.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(header, CSV_COLUMNS);
    let col = |name: &str| CSV_COLUMNS.iter().position(|c| *c == name).unwrap();
    let records: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    assert_eq!(records.len(), report.results.len());
    let mut checked = 0;
    for (row, rec) in report.results.iter().zip(&records) {
        match row {
            ResultRow::Bound(b) => {
                assert_eq!(&rec[col("kind")], "bound");
                let r = b.report.as_ref().unwrap();
                let pairs = [
                    ("gap", r.gap),
                    ("paper_bound", r.paper_bound),
                    ("oracle_bound", r.oracle_bound),
                    ("tolerance", r.tolerance),
                    ("paper_vs_oracle_rel_diff", r.paper_vs_oracle_rel_diff),
                    ("alpha", b.key.alpha),
                    ("lambda", b.key.lambda),
                ];
                for (name, want) in pairs {
                    let got = csv_f64(&rec[col(name)]).unwrap();
                    assert!(same_to_15_digits(got, want), "{name}: {got} vs {want}");
                    checked += 1;
                }
                assert_eq!(csv_f64(&rec[col("oracle_loose")]), r.oracle_loose);
            }
            ResultRow::Certification(c) => {
                let want = c.report.as_ref().unwrap().max_violation;
                assert!(same_to_15_digits(csv_f64(&rec[col("max_violation")]).unwrap(), want));
            }
            ResultRow::Remark(m) => {
                let want = m.check.as_ref().unwrap().rel_diff;
                assert!(same_to_15_digits(csv_f64(&rec[col("rel_diff")]).unwrap(), want));
            }
            ResultRow::Identity(_) => unreachable!(),
        }
    }
    assert!(checked > 1000);
    // Direct CSV output matches the converted file.
    let direct = cli(&["theorems", "--which", "T1,T2,T5", "--format", "csv"]);
    assert_eq!(direct.out, std::fs::read_to_string(&csv_path).unwrap());
}

#[test]
fn runs_are_deterministic() {
    let a = cli(&["falsify", "--trials", "300", "--seed", "11"]);
    let b = cli(&["falsify", "--trials", "300", "--seed", "11"]);
    assert_eq!(a.code, EXIT_OK, "{}", a.err);
    assert_eq!(a.out, b.out);
    let c = cli(&["falsify", "--trials", "300", "--seed", "12"]);
    assert_ne!(a.out, c.out);

    // Worker count does not change the output.
    let cfg = SweepConfig::default_suite();
    let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let four = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap();
    let x = one.install(|| run_verify_theorems(&cfg, &Theorem::ALL).to_json().unwrap());
    let y = four.install(|| run_verify_theorems(&cfg, &Theorem::ALL).to_json().unwrap());
    assert_eq!(x, y);
    let x = one.install(|| run_falsify(&cfg, 100, 5).unwrap().to_json().unwrap());
    let y = four.install(|| run_falsify(&cfg, 100, 5).unwrap().to_json().unwrap());
    assert_eq!(x, y);
}

#[test]
fn timing_is_opt_in() {
    let plain = RunReport::from_json(&cli(&["identities"]).out).unwrap();
    assert!(plain.wall_time.is_none());
    let timed = RunReport::from_json(&cli(&["identities", "--timing"]).out).unwrap();
    assert!(timed.wall_time.unwrap() >= 0.0);
}

#[test]
fn falsify_reports_top_candidates() {
    let report = run_falsify(&SweepConfig::default_suite(), 500, 20240501).unwrap();
    let f = report.falsification.as_ref().unwrap();
    assert_eq!(f.trials, 500);
    assert_eq!(f.violations, 0);
    assert_eq!(f.errors, 0);
    assert_eq!(f.certified + f.exploratory, f.evaluations);
    let ratios: Vec<f64> = report
        .results
        .iter()
        .map(|r| match r {
            ResultRow::Bound(b) => b.slack_ratio.unwrap(),
            _ => panic!("unexpected row"),
        })
        .collect();
    assert_eq!(ratios.len(), 10);
    assert!(ratios.windows(2).all(|w| w[0] >= w[1]));
    assert_eq!(Some(ratios[0]), f.max_slack_ratio);
    assert!(ratios[0] <= 1.0);
    assert!(run_falsify(&SweepConfig::default_suite(), 0, 1).is_err());
}

#[test]
fn certify_command() {
    let ok = cli(&["certify", "--fn", "square", "--lambda", "0.5", "--lo", "0", "--hi", "1"]);
    assert_eq!(ok.code, EXIT_OK, "{}", ok.err);
    let v: serde_json::Value = serde_json::from_str(&ok.out).unwrap();
    assert_eq!(v["passed"], true);
    assert_eq!(v["qualifier"], "grid-certified");
    let bad = cli(&["certify", "--fn", "pow1_5", "--lambda", "0.5", "--order", "1", "--lo", "0", "--hi", "1"]);
    assert_eq!(bad.code, EXIT_FINDINGS, "{}", bad.err);
    assert_eq!(cli(&["certify", "--fn", "linear", "--lambda", "0.5"]).code, EXIT_USAGE);
    assert_eq!(cli(&["certify", "--fn", "square", "--lambda", "0.5", "--grid", "3,3"]).code, EXIT_USAGE);
}
