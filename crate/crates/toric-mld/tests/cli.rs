//! End-to-end tests of the command-line interface, including exit codes.

use std::path::PathBuf;
use std::process::{Command, Output};

const A1: &str = "\
name A1
rank 2
ray 1 0
ray 1 2
cone 0 1
boundary 0 0
";

const QUOTIENT: &str = "\
name half(1,1,1)
rank 3
ray 1 0 0
ray 0 1 0
ray -1 -1 2
cone 0 1 2
boundary 0 0 0
";

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("toric-mld-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).expect("scratch dir");
    dir.join(name)
}

fn write_scratch(name: &str, content: &str) -> PathBuf {
    let path = scratch(name);
    std::fs::write(&path, content).expect("write scratch file");
    path
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_toric-mld"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

fn stderr(output: &Output) -> String {
    String::from_utf8_lossy(&output.stderr).into_owned()
}

#[test]
fn mld_table_for_a1() {
    let file = write_scratch("a1.pair", A1);
    let out = run(&["mld", file.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("pair A1"));
    // Top cone: a_sigma = 1, closed-point mld 1, witness (1, 1).
    assert!(text.contains("(1, 1)"), "table was:\n{text}");
}

#[test]
fn mld_json_contains_spectrum_and_digest() {
    let file = write_scratch("a1json.pair", A1);
    let out = run(&["mld", file.to_str().unwrap(), "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("\"spectrum\":[\"1\",\"2\"]"));
    assert!(text.contains("\"input_digest\":\"fnv1a64:"));
}

#[test]
fn mld_single_cone_selector() {
    let file = write_scratch("a1sel.pair", A1);
    let out = run(&["mld", file.to_str().unwrap(), "--cone", "3", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("\"orbit_mld\":\"1\""));
    let out = run(&["mld", file.to_str().unwrap(), "--cone", "99"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn non_primitive_ray_exits_2_naming_the_ray() {
    let file = write_scratch("nonprim.pair", "rank 2\nray 2 4\ncone 0\nboundary 0\n");
    let out = run(&["mld", file.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = stderr(&out);
    assert!(err.contains("ray 0"), "stderr was:\n{err}");
    assert!(err.contains("not primitive"));
}

#[test]
fn overlapping_fan_exits_3() {
    let file = write_scratch(
        "overlap.pair",
        "rank 2\nray 1 0\nray 0 1\nray 1 1\nray 1 -1\ncone 0 1\ncone 2 3\nboundary 0 0 0 0\n",
    );
    let out = run(&["mld", file.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).contains("not a fan"));
}

#[test]
fn coefficient_out_of_range_exits_3() {
    let file = write_scratch(
        "range.pair",
        "rank 2\nray 1 0\nray 0 1\ncone 0 1\nboundary 3/2 0\n",
    );
    let out = run(&["mld", file.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).contains("outside [0, 1]"));
}

#[test]
fn quotient_cone_value() {
    let file = write_scratch("quot.pair", QUOTIENT);
    let out = run(&["mld", file.to_str().unwrap(), "--json"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("\"orbit_mld\":\"3/2\""));
}

#[test]
fn spectrum_and_stratify_and_classify() {
    let file = write_scratch("a1spec.pair", A1);
    let out = run(&["spectrum", file.to_str().unwrap()]);
    assert_eq!(stdout(&out).trim(), "spectrum: {1, 2}");

    let out = run(&["stratify", file.to_str().unwrap()]);
    let text = stdout(&out);
    assert!(text.contains("mld 1: cones [3]"));
    assert!(text.contains("mld 2: cones [0, 1, 2]"));

    let out = run(&["classify", file.to_str().unwrap()]);
    let text = stdout(&out);
    assert!(text.contains("canonical: yes"));
    assert!(text.contains("terminal: no (cone 3)"));
}

#[test]
fn smooth_reports_index_and_box() {
    let file = write_scratch("a1smooth.pair", A1);
    let out = run(&["smooth", file.to_str().unwrap()]);
    let text = stdout(&out);
    assert!(text.contains("fan smooth: false"));
    assert!(text
        .lines()
        .any(|l| l.starts_with("3") && l.contains("false") && l.contains("2")));
}

#[test]
fn resolve_writes_smooth_fan() {
    let input = write_scratch("a1res.pair", A1);
    let output = scratch("a1res.out.pair");
    let out = run(&[
        "resolve",
        input.to_str().unwrap(),
        "-o",
        output.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("smooth: true"));
    let check = run(&["smooth", output.to_str().unwrap()]);
    assert!(stdout(&check).contains("fan smooth: true"));
}

#[test]
fn resolve_smooth_input_is_stable() {
    let text = "name quadrant\nrank 2\nray 0 1\nray 1 0\ncone 0 1\nboundary 0 0\n";
    let input = write_scratch("quad.pair", text);
    let output = scratch("quad.out.pair");
    run(&[
        "resolve",
        input.to_str().unwrap(),
        "-o",
        output.to_str().unwrap(),
    ]);
    let written = std::fs::read_to_string(&output).unwrap();
    // Identical modulo the canonical name annotation.
    assert!(written.contains("ray 0 1\nray 1 0\ncone 0 1\nboundary 0 0\n"));
}

#[test]
fn witness_on_quotient_reports_matching_discrepancy() {
    let input = write_scratch("quotw.pair", QUOTIENT);
    let output = scratch("quotw.out.pair");
    let out = run(&[
        "witness",
        input.to_str().unwrap(),
        "--cone",
        "7",
        "-o",
        output.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("a_sigma = 3/2"), "output was:\n{text}");
    assert!(text.contains("new ray (0, 0, 1): log discrepancy 3/2 (equals a_sigma: true)"));
    let written = std::fs::read_to_string(&output).unwrap();
    assert!(written.contains("ray 0 0 1"));
}

#[test]
fn witness_on_zero_cone_is_a_usage_error() {
    let input = write_scratch("zerowit.pair", A1);
    let out = run(&[
        "witness",
        input.to_str().unwrap(),
        "--cone",
        "0",
        "-o",
        "/dev/null",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("zero cone"));
}

#[test]
fn low_rank_and_rayless_files_work() {
    let r1 = write_scratch("rank1.pair", "rank 1\nray 1\ncone 0\nboundary 1/2\n");
    let out = run(&["mld", r1.to_str().unwrap(), "--json"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("\"orbit_mld\":\"1/2\""));

    let torus = write_scratch("torus.pair", "rank 2\n");
    let out = run(&["spectrum", torus.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "spectrum: {2}");
}

#[test]
fn witness_at_existing_ray_is_a_noop_with_notice() {
    let input = write_scratch("raywit.pair", A1);
    let output = scratch("raywit.out.pair");
    // Cone 1 is a ray; its witness is its own generator.
    let out = run(&[
        "witness",
        input.to_str().unwrap(),
        "--cone",
        "1",
        "-o",
        output.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("no-op"));
}

#[test]
fn product_of_a1_with_itself() {
    let input = write_scratch("a1prod.pair", A1);
    let output = scratch("a1prod.out.pair");
    let out = run(&[
        "product",
        input.to_str().unwrap(),
        input.to_str().unwrap(),
        "-o",
        output.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let written = std::fs::read_to_string(&output).unwrap();
    assert!(written.contains("rank 4"));
    let check = run(&["mld", output.to_str().unwrap(), "--json"]);
    assert!(stdout(&check).contains("\"dim\":4,\"orbit_mld\":\"2\""));
}

#[test]
fn product_rank_overflow_warns_but_succeeds() {
    let a1 = write_scratch("ow-a1.pair", A1);
    let four = scratch("ow-rank4.pair");
    run(&[
        "product",
        a1.to_str().unwrap(),
        a1.to_str().unwrap(),
        "-o",
        four.to_str().unwrap(),
    ]);
    let eight = scratch("ow-rank8.pair");
    let out = run(&[
        "product",
        four.to_str().unwrap(),
        four.to_str().unwrap(),
        "-o",
        eight.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("warning"));
    assert!(std::fs::read_to_string(&eight).unwrap().contains("rank 8"));
}

#[test]
fn verify_random_passes_and_prints_seed() {
    let out = run(&[
        "verify",
        "--random",
        "--rank",
        "3",
        "--count",
        "10",
        "--seed",
        "7",
        "--props",
        "lsc,bound",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("seed 7"));
    assert!(text.contains("property lsc"));
    assert!(text.contains("0 violations"));
}

#[test]
fn verify_on_files_including_product() {
    let a = write_scratch("va.pair", A1);
    let q = write_scratch("vq.pair", QUOTIENT);
    let out = run(&[
        "verify",
        "--file",
        a.to_str().unwrap(),
        "--file2",
        q.to_str().unwrap(),
        "--props",
        "lsc,product,resolution",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("property product"));
}

#[test]
fn verify_malformed_props_exits_2() {
    let out = run(&["verify", "--random", "--props", "lsc;bound"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn round_trip_via_resolve_output() {
    let input = write_scratch("rt.pair", QUOTIENT);
    let output = scratch("rt.out.pair");
    run(&[
        "resolve",
        input.to_str().unwrap(),
        "-o",
        output.to_str().unwrap(),
    ]);
    let first = std::fs::read_to_string(&output).unwrap();
    let output2 = scratch("rt.out2.pair");
    run(&[
        "resolve",
        output.to_str().unwrap(),
        "-o",
        output2.to_str().unwrap(),
    ]);
    let second = std::fs::read_to_string(&output2).unwrap();
    // Resolving a resolution only re-labels the name line.
    let strip_name = |s: &str| {
        s.lines()
            .filter(|l| !l.starts_with("name"))
            .collect::<Vec<_>>()
            .join("\n")
    };
    assert_eq!(strip_name(&first), strip_name(&second));
}
