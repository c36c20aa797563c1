use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn predgraph(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_predgraph"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn no_arguments_prints_usage_and_exits_1() {
    let o = predgraph(&[]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("Usage"));
}

#[test]
fn unknown_flag_is_a_usage_error() {
    let o = predgraph(&["solve", "--frobnicate"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn runtime_errors_exit_2() {
    let o = predgraph(&["exact", "--problem", "vc", "--input", "/nonexistent/graph.txt"]);
    assert_eq!(o.status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "loop.txt", "a a\n");
    let o = predgraph(&["exact", "--problem", "vc", "--input", &g]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("self-loop"));
}

#[test]
fn exact_maxcut_on_triangle() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "k3.txt", "a b\nb c\na c\n");
    let o = predgraph(&["exact", "--problem", "maxcut", "--input", &g]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("maxcut,2,"));
}

#[test]
fn exact_cover_and_independent_set_use_labels() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "star.txt", "hub x\nhub y\nhub z\n");
    let o = predgraph(&["exact", "--problem", "vc", "--input", &g]);
    assert_eq!(stdout(&o).trim(), "vc,1,hub");
    let o = predgraph(&["exact", "--problem", "mis", "--input", &g]);
    assert_eq!(stdout(&o).trim(), "mis,3,x y z");
    let w = write(dir.path(), "w.txt", "hub 10\nx 1\ny 1\nz 1\n");
    let o = predgraph(&["exact", "--problem", "wvc", "--input", &g, "--weights", &w]);
    assert_eq!(stdout(&o).trim(), "wvc,3,x y z");
}

#[test]
fn weighted_cover_without_weights_fails() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "p.txt", "a b\n");
    let o = predgraph(&["solve", "--problem", "wvc", "--input", &g, "--epsilon", "0.2"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn solve_reports_parts() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g.txt");
    let g = g.to_str().unwrap();
    let o = predgraph(&["gen-graph", "--spec", "planted-vc:cover=5,free=30,p=0.2,seed=3", "--output", g]);
    assert!(o.status.success());
    let o = predgraph(&["solve", "--problem", "vc", "--input", g, "--epsilon", "0.3", "--delta", "5", "--pred-seed", "9"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let out = stdout(&o);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("value,s0,s1,s2,runtime_ms"));
    let row: Vec<f64> = lines.next().unwrap().split(',').map(|x| x.parse().unwrap()).collect();
    assert!(row[0] <= row[1] + row[2] + row[3]);

    let o = predgraph(&["solve", "--problem", "vc", "--input", g, "--algo", "vc2"]);
    assert!(stdout(&o).starts_with("value,runtime_ms\n"));
    let o = predgraph(&["solve", "--problem", "vc", "--input", g, "--algo", "greedy-mis"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn mis_needs_override_above_quarter() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "c.txt", "0 1\n1 2\n2 3\n3 0\n");
    let o = predgraph(&["solve", "--problem", "mis", "--input", &g, "--epsilon", "0.3"]);
    assert_eq!(o.status.code(), Some(2));
    let o = predgraph(&["solve", "--problem", "mis", "--input", &g, "--epsilon", "0.3", "--allow-large-epsilon"]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("value,c1,c2,chosen,runtime_ms\n"));
}

#[test]
fn predictions_round_trip_through_solve() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "c6.txt", "0 1\n1 2\n2 3\n3 4\n4 5\n5 0\n");
    let p = dir.path().join("p.csv");
    let p = p.to_str().unwrap();
    let o = predgraph(&["predict", "--problem", "maxcut", "--input", &g, "--epsilon", "0.45", "--seed", "4", "--output", p]);
    assert!(o.status.success());
    assert!(fs::read_to_string(p).unwrap().starts_with("# epsilon=0.45 seed=4 domain=sign"));
    let o = predgraph(&["solve", "--problem", "maxcut", "--input", &g, "--epsilon", "0.45", "--predictions", p]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let row = stdout(&o).lines().nth(1).unwrap().to_string();
    assert!(row.starts_with("6,6,"), "{row}");
}

#[test]
fn set_cover_generation_and_solve() {
    let dir = tempfile::tempdir().unwrap();
    let s = dir.path().join("s.txt");
    let s = s.to_str().unwrap();
    let o = predgraph(&["gen-setsystem", "--spec", "planted-sc:m=16,blocks=2,extra=5,min=2,max=6,seed=1", "--output", s]);
    assert!(o.status.success());
    let o = predgraph(&["exact", "--problem", "sc", "--input", s]);
    assert!(stdout(&o).starts_with("sc,2,"));
    let o = predgraph(&["solve", "--problem", "sc", "--input", s, "--epsilon", "0.3", "--delta", "8"]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("value,j_learned,j_approx,j_fix,runtime_ms\n"));
}

#[test]
fn experiment_writes_identical_csv_twice() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = |out: &str| {
        format!(
            "problem = mis\n\
             generator = planted-mis:indep=10,rest=15,attach=8,p=0.2,seed=2\n\
             algorithms = learned-mis,pred-only-mis,greedy-mis\n\
             epsilons = 0.10:0.35:0.05\n\
             delta = 6\n\
             trials = 10\n\
             allow_large_epsilon = true\n\
             output = {out}\n"
        )
    };
    let c1 = write(dir.path(), "a.cfg", &cfg("a.csv"));
    let c2 = write(dir.path(), "b.cfg", &cfg("b.csv"));
    let summary = dir.path().join("summary.csv");
    let plot = dir.path().join("plot.csv");
    let o = predgraph(&["experiment", "--config", &c1, "--summary", summary.to_str().unwrap(), "--plot", plot.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(predgraph(&["experiment", "--config", &c2]).status.success());
    let a = fs::read_to_string(dir.path().join("a.csv")).unwrap();
    let b = fs::read_to_string(dir.path().join("b.csv")).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.lines().next(), Some("problem,dataset,algorithm,epsilon,delta,trial,seed,value,opt,ratio,runtime_ms"));
    assert_eq!(a.lines().count(), 1 + 180);
    assert_eq!(fs::read_to_string(summary).unwrap().lines().count(), 1 + 18);
    let plot = fs::read_to_string(plot).unwrap();
    assert_eq!(plot.lines().next(), Some("epsilon,learned-mis,pred-only-mis,greedy-mis"));
    assert_eq!(plot.lines().count(), 7);
}

#[test]
fn bad_config_is_a_runtime_error() {
    let dir = tempfile::tempdir().unwrap();
    let c = write(dir.path(), "bad.cfg", "problem = vc\ngenerator = er:n=5,p=0.5\nalgorithms = greedy-mis\n");
    let o = predgraph(&["experiment", "--config", &c]);
    assert_eq!(o.status.code(), Some(2));
}
