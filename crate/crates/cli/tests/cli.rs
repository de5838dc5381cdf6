use std::collections::BTreeMap;
use std::path::Path;
use std::process::{Command, Output};

use octocf::h2moves::sector_matrix;
use octocf::octagon::Trace;
use octocf_cli::commands::{dump_matrices, ExpandOutput, MatrixDump, VerifyOutput};

fn octocf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_octocf")).args(args).env_remove("OCTOCF_SEED").output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn ok(args: &[&str]) -> String {
    let out = octocf(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    stdout(&out)
}

fn expansion(args: &[&str]) -> ExpandOutput {
    serde_json::from_str(&ok(args)).unwrap()
}

#[test]
fn horizontal_direction_is_all_sevens() {
    let e = expansion(&["expand", "--u", "inf", "--side", "neg", "--depth", "4"]);
    assert_eq!(e.expansion.digits(), vec![7, 7, 7, 7]);
    assert_eq!(e.display, "[7; 7, 7, 7]");
}

#[test]
fn u_two_starts_in_sector_one() {
    let e = expansion(&["expand", "--u", "2", "--depth", "1"]);
    assert_eq!(e.expansion.digits()[0], 1);
}

#[test]
fn sector_endpoint_hits_a_boundary() {
    assert!(expansion(&["expand", "--u", "1", "--depth", "3"]).expansion.boundary_hit);
}

#[test]
fn negative_and_irrational_inputs() {
    let e = expansion(&["expand", "--u", "-1-√2", "--depth", "2", "--tie", "highest"]);
    assert!(e.expansion.boundary_hit);
    assert!(!e.input.approximate);
}

#[test]
fn decimals_warn_and_are_flagged() {
    let out = octocf(&["expand", "--u", "0.25", "--depth", "3"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("warning"));
    let e: ExpandOutput = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(e.input.approximate);
}

#[test]
fn parse_errors_exit_with_two() {
    assert_eq!(octocf(&["expand", "--u", "one half"]).status.code(), Some(2));
    assert_eq!(octocf(&["reconstruct", "--prefix", "[9; 1]"]).status.code(), Some(2));
    assert_eq!(octocf(&["render", "--q-prime", "--scale", "0"]).status.code(), Some(2));
    assert_eq!(octocf(&["no-such-command"]).status.code(), Some(2));
}

#[test]
fn missing_or_unwritable_files_exit_with_three() {
    assert_eq!(octocf(&["render", "--trace", "/nonexistent/trace.json"]).status.code(), Some(3));
    assert_eq!(octocf(&["dump-matrices", "--out", "/nonexistent/dir/m.json"]).status.code(), Some(3));
}

#[test]
fn json_output_round_trips() {
    let text = ok(&["expand", "--u", "3/7+1/5√2", "--depth", "6"]);
    let parsed: ExpandOutput = serde_json::from_str(&text).unwrap();
    assert_eq!(serde_json::to_string_pretty(&parsed).unwrap() + "\n", text);

    let dump: MatrixDump = serde_json::from_str(&ok(&["dump-matrices"])).unwrap();
    assert_eq!(dump, dump_matrices());
    for i in 1..=7 {
        assert_eq!(dump.sectors[&i], sector_matrix(i).unwrap());
    }

    let text = ok(&["trace", "--u", "3/7", "--depth", "2"]);
    let trace: Trace = serde_json::from_str(&text).unwrap();
    assert_eq!(trace.digits().len(), 2);
    assert_eq!(serde_json::to_string_pretty(&trace).unwrap() + "\n", text);
}

#[test]
fn reconstruct_and_convergents() {
    let arc: serde_json::Value = serde_json::from_str(&ok(&["reconstruct", "--prefix", "[1; 4]"])).unwrap();
    assert!(arc["display"].as_str().unwrap().starts_with("u ∈"));
    let table = ok(&["convergents", "--alpha", "√2", "--steps", "4", "--text"]);
    assert!(table.contains("17   12"), "{table}");
    let json: serde_json::Value = serde_json::from_str(&ok(&["convergents", "--alpha", "7/3"])).unwrap();
    assert_eq!(json["halted"], true);
}

#[test]
fn simulate_from_a_direction_or_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let run: serde_json::Value = serde_json::from_str(&ok(&["simulate", "--u", "3/7", "--moves", "5"])).unwrap();
    assert_eq!(run["steps"].as_array().unwrap().len(), 5);
    let start = dir.path().join("start.json");
    std::fs::write(&start, run["steps"][4]["state"].to_string()).unwrap();
    let more: serde_json::Value =
        serde_json::from_str(&ok(&["simulate", "--input", start.to_str().unwrap(), "--moves", "3"])).unwrap();
    assert_eq!(more["start"], run["steps"][4]["state"]);
}

#[test]
fn default_verification_passes() {
    let out = octocf(&["verify"]);
    assert_eq!(out.status.code(), Some(0));
    let v: VerifyOutput = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(v.report.passed);
    let sectors: std::collections::BTreeSet<u8> = v.report.sectors.iter().map(|r| r.sector).collect();
    assert_eq!(sectors.into_iter().collect::<Vec<_>>(), (1..=7).collect::<Vec<_>>());
}

#[test]
fn sector_filter() {
    let v: VerifyOutput = serde_json::from_str(&ok(&["verify", "--sector", "1", "--samples", "2"])).unwrap();
    assert_eq!(v.report.sectors.len(), 2);
    assert!(v.report.sectors.iter().all(|r| r.sector == 1));
    assert!(v.report.identities.iter().all(|r| r.sector == 1));
}

#[test]
fn corrupted_constant_fails_with_a_location() {
    let dir = tempfile::tempdir().unwrap();
    let mut bad = sector_matrix(3).unwrap();
    bad.add_to(4, 1, 1);
    let path = dir.path().join("bad.json");
    std::fs::write(&path, serde_json::to_string(&BTreeMap::from([(3u8, bad)])).unwrap()).unwrap();
    let out = octocf(&["verify", "--sector", "3", "--samples", "1", "--expected", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let v: VerifyOutput = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(!v.report.passed);
    let m = v.report.sectors[0].first_mismatch.clone().unwrap();
    assert_eq!((m.row.as_str(), m.col.as_str()), ("(3,l)", "(1,r)"));
}

#[test]
fn random_sampling_follows_the_seed() {
    let run = |seed: &str| {
        let out = Command::new(env!("CARGO_BIN_EXE_octocf"))
            .args(["verify", "--sector", "2", "--samples", "1", "--random", "2"])
            .env("OCTOCF_SEED", seed)
            .output()
            .unwrap();
        assert!(out.status.success());
        serde_json::from_str::<VerifyOutput>(&stdout(&out)).unwrap()
    };
    let (a, b, c) = (run("42"), run("42"), run("43"));
    assert_eq!(a.seed, Some(42));
    assert_eq!(a, b);
    assert_ne!(a.report.sectors[1..], c.report.sectors[1..]);
}

fn write_trace(dir: &Path, args: &[&str]) -> String {
    let path = dir.join("trace.json");
    let mut full = vec!["trace"];
    full.extend_from_slice(args);
    full.extend_from_slice(&["--out", path.to_str().unwrap()]);
    ok(&full);
    path.to_str().unwrap().to_string()
}

/// `x` of each panel caption, in document order.
fn caption_xs(svg: &str) -> Vec<f64> {
    svg.lines()
        .filter(|l| l.contains(r#"class="caption""#))
        .map(|l| l.split(r#" x=""#).nth(1).unwrap().split('"').next().unwrap().parse().unwrap())
        .collect()
}

#[test]
fn sector_one_renders_three_move_panels_left_to_right() {
    let dir = tempfile::tempdir().unwrap();
    let trace = write_trace(dir.path(), &["--u", "2", "--sector", "1"]);
    let svg = ok(&["render", "--trace", &trace]);
    assert_eq!(svg.matches(r#"class="panel move""#).count(), 3);
    assert_eq!(svg.matches(r#"class="panel start""#).count(), 1);
    let xs = caption_xs(&svg);
    assert!(xs.windows(2).all(|w| w[0] < w[1]), "{xs:?}");
}

#[test]
fn empty_trace_is_one_panel() {
    let dir = tempfile::tempdir().unwrap();
    let trace = write_trace(dir.path(), &["--u", "3/7", "--depth", "0"]);
    let svg = ok(&["render", "--trace", &trace]);
    assert_eq!(svg.matches("<g class=").count(), 1);
    assert_eq!(svg.matches("<polygon").count(), 3);
}

#[test]
fn q_prime_has_three_labeled_quadrilaterals() {
    let svg = ok(&["render", "--q-prime", "--overlay", "1/2"]);
    assert_eq!(svg.matches("<polygon").count(), 3);
    assert_eq!(svg.matches(r#"class="direction""#).count(), 3);
    for i in 1..=3 {
        assert!(svg.contains(&format!(r#"data-label="{i}""#)));
        assert!(svg.contains(&format!(">{i}</text>")));
    }
}

#[test]
fn rendering_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let trace = write_trace(dir.path(), &["--u", "-5/3", "--depth", "2"]);
    let a = dir.path().join("a.svg");
    let b = dir.path().join("b.svg");
    for out in [&a, &b] {
        ok(&["render", "--trace", &trace, "--scale", "37.5", "--original", "--out", out.to_str().unwrap()]);
    }
    let (a, b) = (std::fs::read(a).unwrap(), std::fs::read(b).unwrap());
    assert!(!a.is_empty());
    assert_eq!(a, b);
}
