use std::fs;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hecke-zeta")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

/// Leading real number after `=` in an eval line.
fn eval_value(line: &str) -> f64 {
    let v = line.split('=').nth(1).unwrap().trim();
    let end = v[1..].find(['+', '-', ' ']).map(|k| k + 1).unwrap_or(v.len());
    v[..end].parse().unwrap()
}

#[test]
fn eval_at_four_matches_the_euler_product() {
    let o = run(&["eval", "--lambda", "3", "--s", "4", "--basis", "32", "--which", "Z"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let op = eval_value(&stdout(&o));
    assert!(stdout(&o).contains(" ± "));
    let e = run(&["eval", "--lambda", "3", "--s", "4", "--path", "euler"]);
    let euler = eval_value(&stdout(&e));
    assert!((op - 0.9989).abs() < 1e-4);
    assert!((op - euler).abs() < 1e-9, "{op} vs {euler}");
}

#[test]
fn negative_imaginary_parts_parse() {
    let a = run(&["eval", "--s", "0.3-2i", "--basis", "16"]);
    let b = run(&["eval", "--s", "0.3+2i", "--basis", "16"]);
    assert!(a.status.success() && b.status.success(), "{}", stderr(&a));
    assert!(stdout(&a).starts_with("Z(0.3-2i) = "));
    assert_eq!(eval_value(&stdout(&a)), eval_value(&stdout(&b)));
}

#[test]
fn inclusions_pass_at_three() {
    let o = run(&["check", "inclusions", "--lambda", "3", "--n-max", "50"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("all") && !stdout(&o).contains("margin -"));
}

#[test]
fn displayed_variant_fails_the_check() {
    let o = run(&["check", "inclusions", "--variant", "displayed"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("inclusion violated"), "{}", stderr(&o));
}

#[test]
fn lambda_at_two_is_a_config_error() {
    let o = run(&["eval", "--lambda", "2", "--s", "4"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("lambda must exceed 2"));
}

#[test]
fn poles_are_numerical_errors() {
    let o = run(&["eval", "--s", "0.5", "--basis", "8"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("continuation pole"));
}

#[test]
fn thin_funnels_warn() {
    let o = run(&["orbits", "--lambda", "2.02", "--bound", "3"]);
    assert!(o.status.success());
    assert!(stderr(&o).contains("close to 2"), "{}", stderr(&o));
}

#[test]
fn orbit_listing_at_bound_seven() {
    let o = run(&["orbits", "--lambda", "3", "--bound", "7"]);
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "word,len,trace,norm,det,primitive,n_mult");
    assert_eq!(lines.len(), 3, "{text}");
}

#[test]
fn empty_outputs_are_header_only() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("o.csv");
    let o = run(&["orbits", "--bound", "2", "--out", path.to_str().unwrap()]);
    assert!(o.status.success());
    assert_eq!(fs::read_to_string(&path).unwrap(), "word,len,trace,norm,det,primitive,n_mult\n");
}

#[test]
fn grid_is_identical_across_thread_counts_and_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let mut files = Vec::new();
    for t in ["1", "3"] {
        let path = dir.path().join(format!("g{t}.csv"));
        let o = run(&[
            "scan", "--re", "0.6:0.9", "--im", "-0.5:0.5", "--step", "0.25", "--basis", "12", "--threads", t, "--out",
            path.to_str().unwrap(),
        ]);
        assert!(o.status.success(), "{}", stderr(&o));
        files.push(fs::read(&path).unwrap());
    }
    assert_eq!(files[0], files[1]);
    let text = String::from_utf8(files.remove(0)).unwrap();
    assert_eq!(text.lines().count(), 1 + 2 * 5);
    for line in text.lines().skip(1) {
        for field in line.split(',').take(5) {
            let v: f64 = field.parse().unwrap();
            assert_eq!(format!("{v:?}"), field);
        }
    }
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.conf");
    fs::write(&cfg, "# surface\nlambda = 5\nbasis = 16\n").unwrap();
    let c = cfg.to_str().unwrap();
    let from_file = stdout(&run(&["spectrum", "--config", c, "--bound", "30"]));
    let at_five = stdout(&run(&["spectrum", "--lambda", "5", "--bound", "30"]));
    let overridden = stdout(&run(&["spectrum", "--config", c, "--lambda", "3", "--bound", "30"]));
    let at_three = stdout(&run(&["spectrum", "--lambda", "3", "--bound", "30"]));
    assert_eq!(from_file, at_five);
    assert_eq!(overridden, at_three);
    assert_ne!(at_five, at_three);

    fs::write(&cfg, "colour = red\n").unwrap();
    let o = run(&["delta", "--config", c]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("unknown key"));
    let o = run(&["delta", "--config", dir.path().join("missing").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("missing"));
}

#[test]
fn unwritable_output_names_the_path() {
    let o = run(&["orbits", "--bound", "7", "--out", "/nonexistent/dir/o.csv"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("/nonexistent/dir/o.csv"));
}

#[test]
fn checks_pass_at_default_settings() {
    for suite in ["euler", "traces", "factorization"] {
        let o = run(&["check", suite]);
        assert_eq!(o.status.code(), Some(0), "{suite}: {}", stderr(&o));
    }
    let o = run(&["check", "euler", "--threshold", "1e-20"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("exceeds"));
}

#[test]
fn delta_and_residue_rank() {
    let o = run(&["delta", "--basis", "24"]);
    assert!(stdout(&o).starts_with("delta = 0.7519400"), "{}", stdout(&o));
    let o = run(&["residue-rank", "--s0", "0.5", "--basis", "16"]);
    assert!(stdout(&o).contains("[1, 1], total"), "{}", stdout(&o));
    assert_eq!(run(&["residue-rank", "--s0", "0.3"]).status.code(), Some(1));
}

#[test]
fn zeros_in_a_small_box() {
    let o = run(&["zeros", "--re", "0.15:0.3", "--im", "3.4:3.7", "--basis", "24"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows[0], "re,im,residual");
    assert_eq!(rows.len(), 2, "{text}");
    let re: f64 = rows[1].split(',').next().unwrap().parse().unwrap();
    assert!((re - 0.21672).abs() < 1e-3);
}
