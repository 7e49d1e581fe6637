use std::process::Command;

use cnr::{cmd_solve, parse_graph_spec, scaling_rows};
use cnr_core::stochastic::coupon_expectation;

fn cnr(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_cnr")).args(args).output().expect("binary runs");
    (out.status.code().unwrap_or(-1), String::from_utf8(out.stdout).unwrap(), String::from_utf8(out.stderr).unwrap())
}

fn lengths(csv: &str) -> Vec<usize> {
    csv.lines().skip(2).map(|l| l.rsplit(',').next().unwrap().parse().unwrap()).collect()
}

#[test]
fn spec_examples() {
    assert_eq!(parse_graph_spec("Q4").unwrap().vertex_count(), Some(16));
    assert_eq!(parse_graph_spec("P3xP5").unwrap().vertex_count(), Some(15));
    assert_eq!(parse_graph_spec("T7:42xP2").unwrap().vertex_count(), Some(14));
    assert_eq!(parse_graph_spec("T7:42xT5:7").unwrap().dimension(), 2);
}

#[test]
fn solve_examples() {
    let q3 = cmd_solve("Q3", 2, true, Some(3), None).unwrap();
    assert_eq!(q3.cop_number, Some(Ok(2)));
    assert!(q3.capture_time.unwrap() <= 6);
    assert_eq!(cmd_solve("P3xP5", 2, false, None, None).unwrap().capture_time, Some(3));
    let q2 = cmd_solve("Q2", 1, true, None, None).unwrap();
    assert!(q2.lines().contains(&"cop number exceeds 1".to_string()));

    let (code, out, err) = cnr(&["solve", "P3xP5", "-k", "2"]);
    assert_eq!(code, 0, "{err}");
    assert!(out.contains("capt_2 = 3"));
    assert!(err.contains("seed=0"));
}

#[test]
fn solve_table_export() {
    let path = std::env::temp_dir().join(format!("cnr-table-{}.csv", std::process::id()));
    let (code, _, _) = cnr(&["solve", "P2", "-k", "1", "--table", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    let text = std::fs::read_to_string(&path).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("# cnr solve graph=P2 k=1"));
    assert_eq!(lines.next(), Some("cops,robber,side,value"));
    assert_eq!(lines.count(), 8);
    std::fs::remove_file(path).unwrap();
}

#[test]
fn simulate_squad_on_q11_respects_bound() {
    let (code, out, err) =
        cnr(&["simulate", "Q11", "--cops", "squad", "--robber", "maxmin", "--trials", "50", "--assert-bound", "40"]);
    assert_eq!(code, 0, "{err}");
    let ls = lengths(&out);
    assert_eq!(ls.len(), 50);
    assert!(ls.iter().all(|&l| l <= 40));
    assert!(out.starts_with("# cnr simulate graph=Q11 cops=squad robber=maxmin k=6 "));
}

#[test]
fn simulate_assertion_exit_code() {
    let (code, out, err) =
        cnr(&["simulate", "Q11", "--cops", "squad", "--robber", "maxmin", "--trials", "3", "--assert-bound", "2"]);
    assert_eq!(code, 1);
    assert_eq!(lengths(&out).len(), 3);
    assert!(err.contains("assertion failed"));
}

#[test]
fn simulate_parity_greedy_mean_on_q10() {
    // the antipode is at distance 10, so L - 1 is the coupon time with m = m0 = 5
    let (code, out, _) = cnr(&["simulate", "Q10", "--cops", "parity-greedy", "--robber", "random", "--trials", "2000"]);
    assert_eq!(code, 0);
    let ls = lengths(&out);
    let mean = ls.iter().sum::<usize>() as f64 / ls.len() as f64;
    let want = 1.0 + coupon_expectation(5, 5).unwrap();
    assert!((mean - want).abs() / want < 0.05, "{mean} vs {want}");
}

#[test]
fn simulate_solver_strategies_on_q3() {
    let capt = cmd_solve("Q3", 2, false, None, None).unwrap().capture_time.unwrap();
    let (code, out, _) =
        cnr(&["simulate", "Q3", "--cops", "solver-optimal", "--robber", "solver-optimal", "-k", "2", "--trials", "1"]);
    assert_eq!(code, 0);
    assert_eq!(lengths(&out), vec![capt as usize]);
}

#[test]
fn same_seed_same_csv() {
    let args = ["simulate", "T6:3xT5:9", "--cops", "squad", "--robber", "random", "--trials", "20", "--seed", "11"];
    let (a, b) = (cnr(&args), cnr(&args));
    assert_eq!(a.0, 0, "{}", a.2);
    assert_eq!(a.1, b.1);
    assert!(a.1.lines().next().unwrap().contains("seed=11"));
}

#[test]
fn robber_start_override() {
    let (code, out, err) = cnr(&[
        "simulate",
        "Q4",
        "--cops",
        "parity-greedy",
        "--robber",
        "random",
        "--robber-start",
        "1100",
        "--trials",
        "5",
    ]);
    assert_eq!(code, 0, "{err}");
    assert!(out.contains("robber_start=1100"));
    assert_eq!(cnr(&["simulate", "Q4", "--robber-start", "1102"]).0, 2);
}

#[test]
fn scaling_rows_and_bound_ratio() {
    let rows = scaling_rows(&[11, 100], "maxmin", 3, 0, false).unwrap();
    assert_eq!(rows[0].bound, 40);
    // (1 - eps) T with eps = ln(5 ln 100) / ln 100 and T = 49.5 ln 100
    let l = 100f64.ln();
    assert!((rows[1].threshold.unwrap() - (1.0 - (5.0 * l).ln() / l) * 49.5 * l).abs() < 1e-9);
    for n in [256usize, 512, 1024] {
        let b = scaling_rows(&[n], "maxmin", 1, 0, false).unwrap()[0].bound as f64;
        let ratio = b / (n as f64 * (n as f64).log2());
        assert!((ratio - 1.0).abs() < 0.1, "n={n}: {ratio}");
    }
    let (code, out, _) = cnr(&["scaling", "-n", "8,11", "--trials", "5"]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[1], "n,bound,simulated_max,threshold");
    assert!(lines[3].starts_with("11,40,"));
}

#[test]
fn stochastic_commands() {
    let (code, out, _) = cnr(&["coupon", "-m", "20", "--m0", "10", "--eps", "0.5", "--trials", "2000"]);
    assert_eq!(code, 0);
    let row: Vec<&str> = out.lines().nth(2).unwrap().split(',').collect();
    let (tail, bound): (f64, f64) = (row[7].parse().unwrap(), row[8].parse().unwrap());
    assert!(tail <= bound);

    let (code, out, _) = cnr(&["chain", "-n", "6", "-T", "5", "--check-lemma2"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().count(), 2 + 7 * 6);

    let (code, out, _) = cnr(&["survive", "-n", "16", "--cops", "4", "--trials", "20"]);
    assert_eq!(code, 0);
    assert!(out.lines().nth(1).unwrap().starts_with("n,cops,trials,threshold,required_rounds"));
}

#[test]
fn out_file_and_gnuplot() {
    let dir = std::env::temp_dir().join(format!("cnr-out-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("chain.csv");
    let (code, out, _) = cnr(&["chain", "-n", "4", "-T", "3", "--out", path.to_str().unwrap(), "--gnuplot"]);
    assert_eq!(code, 0);
    assert!(out.is_empty());
    assert!(std::fs::read_to_string(&path).unwrap().starts_with("# cnr chain n=4 T=3"));
    let gp = std::fs::read_to_string(dir.join("chain.csv.gp")).unwrap();
    assert!(gp.contains("using 2:3"));
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn exit_codes() {
    assert_eq!(cnr(&["solve", "Q3x", "-k", "1"]).0, 2);
    assert_eq!(cnr(&["solve", "Q3", "-k", "0"]).0, 2);
    assert_eq!(cnr(&["frobnicate"]).0, 2);
    assert_eq!(cnr(&["simulate", "Q4", "--cops", "lemma1"]).0, 2);
    let (code, _, err) = cnr(&["solve", "Q10", "-k", "4"]);
    assert_eq!(code, 3);
    assert!(err.contains("exceed the solver budget"), "{err}");
}
