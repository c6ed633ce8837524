use std::path::PathBuf;
use std::process::{Command, Output};

fn problem(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../problems").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_conebvp")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn quick<'a>(cmd: &'a str, file: &'a str, extra: &[&'a str]) -> Vec<&'a str> {
    let mut v = vec![cmd, file, "--grid-n", "32", "--imag-box", "5"];
    v.extend_from_slice(extra);
    v
}

#[test]
fn analyze_reports_the_golden_ratio_below_zero() {
    let m1 = problem("M1.cfg");
    let o = run(&quick("analyze", m1.to_str().unwrap(), &["--gamma", "-0.5"]));
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("relative_index = 1"));
    let o = run(&quick("analyze", m1.to_str().unwrap(), &["--gamma", "-0.5", "--format", "csv"]));
    let csv = stdout(&o);
    assert_eq!(csv.lines().next(), Some("re_p,im_p,order,rank_M,in_strip"));
    assert!(csv.contains("1.618033988750,0.000000000000,1,1,true"));
}

#[test]
fn analyze_at_zero_has_index_zero() {
    let o = run(&quick("analyze", problem("M1.cfg").to_str().unwrap(), &["--gamma", "0"]));
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("relative_index = 0"));
}

#[test]
fn weight_line_through_a_pole_exits_with_3() {
    let gamma = format!("--gamma={}", 1.5 - (1.0 + 5f64.sqrt()) / 2.0);
    let o = run(&quick("analyze", problem("M1.cfg").to_str().unwrap(), &[&gamma]));
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).contains("conormal symbol: FAIL"));
}

#[test]
fn ellipticity_failure_exits_with_2_and_still_reports() {
    let dir = tempfile::tempdir().unwrap();
    let src = std::fs::read_to_string(problem("M1.cfg")).unwrap().replace("expr = \"d^2\"", "expr = \"-d^2\"");
    let path = dir.path().join("wave.cfg");
    std::fs::write(&path, src).unwrap();
    let o = run(&quick("analyze", path.to_str().unwrap(), &["--gamma", "0"]));
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("principal symbol: FAIL"));
}

#[test]
fn parse_errors_exit_with_1_and_a_position() {
    let dir = tempfile::tempdir().unwrap();
    let src = std::fs::read_to_string(problem("M1.cfg")).unwrap().replace("expr = \"d^2\"", "expr = \"d^2 + q\"");
    let path = dir.path().join("bad.cfg");
    std::fs::write(&path, &src).unwrap();
    let o = run(&["analyze", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let line = src.lines().position(|l| l.contains("d^2 + q")).unwrap() + 1;
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains(&format!("bad.cfg:{line}:15: expr: unknown name `q`")), "{err}");
}

#[test]
fn adjoint_of_m1_is_dirichlet_and_conjugates() {
    let o = run(&quick("adjoint", problem("M1.cfg").to_str().unwrap(), &[]));
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("left adjoint condition is equivalent to Dirichlet"));
    assert!(s.contains("right adjoint condition is equivalent to Dirichlet"));
    let residual: f64 = s
        .lines()
        .find_map(|l| l.strip_prefix("# conjugation residual "))
        .and_then(|l| l.split_whitespace().next())
        .unwrap()
        .parse()
        .unwrap();
    assert!(residual < 1e-6);
}

#[test]
fn adjoint_of_m2_conjugates_and_is_neumann() {
    let o = run(&quick("adjoint", problem("M2.cfg").to_str().unwrap(), &[]));
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains(": PASS"));
    assert!(s.contains("left adjoint condition is equivalent to Neumann"));
}

#[test]
fn characteristic_boundary_exits_with_4() {
    let o = run(&["adjoint", problem("characteristic.cfg").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn outputs_are_deterministic_and_written_to_out() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let args = quick("analyze", "", &["--gamma", "0.25", "--out", out]);
    let file = problem("M3.cfg");
    let args: Vec<&str> = args.iter().map(|a| if a.is_empty() { file.to_str().unwrap() } else { a }).collect();
    let first = run(&args);
    assert_eq!(first.status.code(), Some(0));
    let read = |ext: &str| std::fs::read(dir.path().join(format!("M3_gamma0.25.{ext}"))).unwrap();
    let (txt, csv, svg) = (read("txt"), read("csv"), read("svg"));
    assert!(String::from_utf8_lossy(&svg).starts_with("<svg"));
    let second = run(&args);
    assert_eq!(first.stdout, second.stdout);
    assert_eq!((txt, csv, svg), (read("txt"), read("csv"), read("svg")));
}

#[test]
fn adjoint_dump_parses_back() {
    let dir = tempfile::tempdir().unwrap();
    // the adjoint needs t-independent diagonal conditions, so drop the t-term of M1t
    let orig = std::fs::read_to_string(problem("M1t.cfg"))
        .unwrap()
        .replace("[[boundary.left.entry]]\nj = 0\nk = 0\nt_pow = 1\nmatrix = \"1\"\n", "");
    let src = dir.path().join("m1t_dirichlet.cfg");
    std::fs::write(&src, &orig).unwrap();
    let o = run(&quick("adjoint", src.to_str().unwrap(), &[]));
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let path = dir.path().join("adj.cfg");
    std::fs::write(&path, &o.stdout).unwrap();
    let again = run(&quick("adjoint", path.to_str().unwrap(), &[]));
    assert_eq!(again.status.code(), Some(0));
    // the adjoint of the adjoint has the operator of the original problem
    let s = stdout(&again);
    for expr in ["expr = \"x*d\"", "expr = \"d^2\""] {
        assert!(orig.contains(expr) && s.contains(expr), "{expr}\n{s}");
    }
}

#[test]
fn verify_fredholm_passes() {
    let o = run(&["verify", "fredholm"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("1000/1000 pass"));
}

#[test]
fn verify_green_lists_residuals() {
    let o = run(&["verify", "green"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert_eq!(s.lines().filter(|l| l.contains("residual")).count(), 60);
}

#[test]
fn verify_oracle_passes() {
    let o = run(&["verify", "oracle", "--grid-n", "32"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}
