use std::fs;
use std::process::{Command, Output};

fn smock(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_smock"))
        .args(args)
        .output()
        .expect("run smock")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn value(o: &Output) -> f64 {
    stdout(o).trim().parse().unwrap()
}

#[test]
fn dist_on_one_row() {
    let o = smock(&["dist", "--x1", "0.6", "--y1", "0", "--x2", "2.4", "--y2", "0"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "1.8\n");
}

#[test]
fn stitch_dist_matches_closed_form() {
    let o = smock(&["stitch-dist", "--j", "3", "0", "--k", "6", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert!((value(&o) - 2.0 * 2f64.sqrt()).abs() < 1e-9);
    let o = smock(&["stitch-dist", "--j", "-1.5", "1.5", "--k", "9", "-3"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn geodesic_lists_network_parts() {
    let o = smock(&["geodesic", "--x1", "0", "--y1", "0", "--x2", "6", "--y2", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("distance 4.82842712475\n"), "{text}");
    assert_eq!(text.matches('↗').count(), 2);
    assert_eq!(text.matches('→').count(), 1);
}

#[test]
fn usage_and_input_errors_exit_2() {
    assert_eq!(smock(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(smock(&["dist", "--x1", "nope", "--y1", "0", "--x2", "1", "--y2", "0"]).status.code(), Some(2));
    assert_eq!(smock(&["stitch-dist", "--j", "1", "0", "--k", "3", "0"]).status.code(), Some(2));
    assert_eq!(smock(&["--pattern", "/nonexistent/pattern.txt", "dist", "--x1", "0", "--y1", "0", "--x2", "1", "--y2", "0"]).status.code(), Some(2));
    assert_eq!(smock(&["dist", "--x1", "-3", "--y1", "0", "--x2", "1", "--y2", "1", "--window", "2"]).status.code(), Some(2));
    assert_eq!(smock(&["--tolerance", "0", "sphere"]).status.code(), Some(2));
}

#[test]
fn pattern_files() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("two.txt");
    fs::write(&good, "# two horizontals\nH 0 0\n\nH 6 0\n").unwrap();
    let g = good.to_str().unwrap();
    let o = smock(&["--pattern", g, "dist", "--x1", "-2", "--y1", "0", "--x2", "8", "--y2", "0"]);
    assert_eq!(o.status.code(), Some(0));
    assert!((value(&o) - 8.0).abs() < 1e-12);
    let bad = dir.path().join("bad.txt");
    fs::write(&bad, "H 0 0\nH 0 x\n").unwrap();
    let o = smock(&["--pattern", bad.to_str().unwrap(), "dist", "--x1", "0", "--y1", "0", "--x2", "1", "--y2", "0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
    assert_eq!(smock(&["--pattern", g, "verify", "--suite", "norm"]).status.code(), Some(2));
}

#[test]
fn render_counts_elements() {
    let o = smock(&["render", "--window", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let svg = stdout(&o);
    assert!(svg.starts_with("<svg"));
    assert_eq!(svg.matches("class=\"stitch\"").count(), 13);
    assert_eq!(svg.matches("<polyline").count(), 0);
    assert!(svg.contains("viewBox=\"-5 -5 10 10\""));

    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("g.svg");
    let o = smock(&["render", "--geodesic", "0", "0", "6", "3", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let svg = fs::read_to_string(out).unwrap();
    assert_eq!(svg.matches("<polyline").count(), 3);
}

#[test]
fn sphere_trace() {
    let o = smock(&["sphere", "--points", "8"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows[0], "x,y");
    assert_eq!(rows[1], "1.5,0");
    assert_eq!(rows.len(), 9);
}

#[test]
fn verify_all_passes_and_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    let args = |p: &str| -> Vec<String> {
        ["verify", "--suite", "all", "--window", "9", "--samples", "2000", "--seed", "5", "--csv", p]
            .map(String::from)
            .to_vec()
    };
    let run = |p: &str| {
        let v = args(p);
        smock(&v.iter().map(String::as_str).collect::<Vec<_>>())
    };
    let o1 = run(a.to_str().unwrap());
    assert_eq!(o1.status.code(), Some(0), "{}", stdout(&o1));
    let o2 = run(b.to_str().unwrap());
    assert_eq!(o1.stdout, o2.stdout);
    let (ca, cb) = (fs::read(&a).unwrap(), fs::read(&b).unwrap());
    assert_eq!(ca, cb);
    let csv = String::from_utf8(ca).unwrap();
    assert!(csv.starts_with("suite,samples,max_abs_error,threshold,pass,witness_x1,witness_y1,witness_x2,witness_y2\n"));
    assert_eq!(csv.lines().count(), 1 + 12);
}

#[test]
fn sequential_flag_gives_identical_csv() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("par.csv");
    let b = dir.path().join("seq.csv");
    for (p, extra) in [(&a, None), (&b, Some("--sequential"))] {
        let mut args = vec!["verify", "--suite", "deviation", "--samples", "300", "--out", p.to_str().unwrap()];
        args.extend(extra);
        assert_eq!(smock(&args).status.code(), Some(0));
    }
    assert_eq!(fs::read(a).unwrap(), fs::read(b).unwrap());
}

#[test]
fn converge_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("c.csv");
    let o = smock(&["converge", "--scales", "1,4,16", "--samples", "100", "--seed", "3", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let csv = fs::read_to_string(&out).unwrap();
    assert_eq!(csv, stdout(&o));
    let rows: Vec<&str> = csv.lines().collect();
    assert_eq!(rows[0], "R,sup_deviation,bound_K_over_R,samples,seed");
    assert_eq!(rows.len(), 4);
    assert!(rows[3].starts_with("16,"));
    assert!(rows[3].ends_with(",100,3"));
    assert_eq!(smock(&["converge", "--scales", "0"]).status.code(), Some(2));
}
