use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use puml_metrics_testkit::{generate, GenOptions};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_puml-metrics"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write(path: &Path, text: &str) {
    fs::create_dir_all(path.parent().unwrap()).unwrap();
    fs::write(path, text).unwrap();
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

const TEN: &str = "@startuml\nparticipant A\nparticipant B\n\
A -> B : m1\nB -> A : m2\nA -> B : m3\nB -> A : m4\nA -> B : m5\n\
B -> A : m6\nA -> B : m7\nB -> A : m8\nA -> B : m9\nB -> A : m10\n@enduml\n";

#[test]
fn compare_with_itself_is_all_zero() {
    let dir = tempfile::tempdir().unwrap();
    let gt = dir.path().join("x.puml");
    write(&gt, TEN);
    let out = run(&["compare", p(&gt), p(&gt), "--format", "csv"]);
    assert!(out.status.success());
    let csv = stdout(&out);
    assert!(
        csv.lines().skip(1).all(|l| l.split(',').nth(4) == Some("0")),
        "{csv}"
    );
}

#[test]
fn one_flipped_arrow_in_ten_is_ten_percent() {
    let dir = tempfile::tempdir().unwrap();
    let gt = dir.path().join("x.puml");
    let cand = dir.path().join("y.puml");
    write(&gt, TEN);
    write(&cand, &TEN.replace("A -> B : m5", "B -> A : m5"));
    let out = run(&["compare", p(&gt), p(&cand), "--format", "csv"]);
    assert!(out.status.success());
    let csv = stdout(&out);
    assert!(
        csv.contains("aggregate,,edge_direction,substitution,1,10,10.00"),
        "{csv}"
    );
    let table = stdout(&run(&["compare", p(&gt), p(&cand)]));
    assert!(
        table
            .lines()
            .any(|l| l.starts_with("Substitution (%)") && l.contains("10.00")),
        "{table}"
    );
}

#[test]
fn identical_trees_and_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for i in 0..6 {
        let text = generate(&mut rng, 10 + 7 * i, &GenOptions::default()).render();
        write(&dir.path().join(format!("gt/sub/f{i}.puml")), &text);
        write(&dir.path().join(format!("cand/sub/f{i}.puml")), &text);
    }
    let out_dir = dir.path().join("out");
    let out = run(&[
        "evaluate",
        p(&dir.path().join("gt")),
        p(&dir.path().join("cand")),
        "--format",
        "json",
        "--out",
        p(&out_dir),
        "--jobs",
        "3",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    for name in ["table.txt", "per_file.csv", "report.json", "bins.csv"] {
        assert!(out_dir.join(name).is_file(), "{name}");
    }
    let json = stdout(&out);
    assert_eq!(fs::read_to_string(out_dir.join("report.json")).unwrap(), json);
    assert!(json.contains("\"sub/f5.puml\""));
    let per_file = fs::read_to_string(out_dir.join("per_file.csv")).unwrap();
    assert!(per_file.lines().skip(1).all(|l| l.split(',').nth(4) == Some("0")));
}

#[test]
fn missing_candidates_are_reported_not_fatal() {
    let dir = tempfile::tempdir().unwrap();
    write(&dir.path().join("gt/a.puml"), TEN);
    write(&dir.path().join("gt/b.puml"), TEN);
    write(&dir.path().join("cand/a.puml"), TEN);
    let out = run(&[
        "evaluate",
        p(&dir.path().join("gt")),
        p(&dir.path().join("cand")),
        "--format",
        "json",
    ]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("b.puml"));
    assert!(String::from_utf8_lossy(&out.stderr).contains("b.puml"));
}

#[test]
fn manifest_selects_listed_pairs_only() {
    let dir = tempfile::tempdir().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for i in 0..50 {
        let text = generate(&mut rng, 12, &GenOptions::default()).render();
        write(&dir.path().join(format!("gt/f{i:02}.puml")), &text);
        write(&dir.path().join(format!("cand/f{i:02}.puml")), &text);
    }
    let manifest = dir.path().join("pairs.csv");
    write(
        &manifest,
        "ground_truth,candidate,label\ngt/f03.puml,cand/f03.puml,three\ngt/f17.puml,cand/f17.puml,seventeen\ngt/f42.puml,cand/f42.puml,forty-two\n",
    );
    let out = run(&["evaluate", "--manifest", p(&manifest), "--format", "csv"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = stdout(&out);
    let mut files: Vec<&str> = csv
        .lines()
        .filter_map(|l| l.strip_prefix("file,"))
        .map(|l| l.split(',').next().unwrap())
        .collect();
    files.dedup();
    assert_eq!(files, ["three", "seventeen", "forty-two"]);
}

#[test]
fn patch_naming_unknown_file_fails_with_its_name() {
    let dir = tempfile::tempdir().unwrap();
    write(&dir.path().join("gt/a.puml"), TEN);
    let patch = dir.path().join("p.diff");
    write(
        &patch,
        "--- a/ghost.puml\n+++ b/ghost.puml\n@@ -1 +1 @@\n-x\n+y\n",
    );
    let out = run(&["from-patch", p(&patch), p(&dir.path().join("gt"))]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("ghost.puml"));
}

#[test]
fn empty_patch_reports_zero_errors_for_every_file() {
    let dir = tempfile::tempdir().unwrap();
    write(&dir.path().join("gt/a.puml"), TEN);
    write(&dir.path().join("gt/b.puml"), TEN);
    let patch = dir.path().join("p.diff");
    write(&patch, "");
    let out = run(&[
        "from-patch",
        p(&patch),
        p(&dir.path().join("gt")),
        "--format",
        "csv",
    ]);
    assert!(out.status.success());
    let csv = stdout(&out);
    assert!(csv.contains("file,a.puml,") && csv.contains("file,b.puml,"));
    assert!(csv.lines().skip(1).all(|l| l.split(',').nth(4) == Some("0")));
}

#[test]
fn malformed_patch_is_an_operational_error() {
    let dir = tempfile::tempdir().unwrap();
    write(&dir.path().join("gt/a.puml"), TEN);
    let patch = dir.path().join("p.diff");
    write(&patch, "--- a/a.puml\n+++ b/a.puml\n@@ -x +1 @@\n");
    let out = run(&["from-patch", p(&patch), p(&dir.path().join("gt"))]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn flags_override_config_values() {
    let dir = tempfile::tempdir().unwrap();
    let gt = dir.path().join("x.puml");
    write(&gt, TEN);
    let config = dir.path().join("metrics.conf");
    write(&config, "# defaults\nformat = csv\ntau=0.5\nbins = 10,20\n");
    let from_config = stdout(&run(&["--config", p(&config), "compare", p(&gt), p(&gt)]));
    assert!(from_config.starts_with("scope,file,category"), "{from_config}");
    let overridden = stdout(&run(&[
        "--config",
        p(&config),
        "compare",
        p(&gt),
        p(&gt),
        "--format",
        "json",
    ]));
    assert!(overridden.trim_start().starts_with('{'));
    assert!(
        overridden.contains("\"1-10\"") && overridden.contains("\"11-20\""),
        "{overridden}"
    );

    write(&config, "colour = blue\n");
    let bad = run(&["--config", p(&config), "compare", p(&gt), p(&gt)]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("colour"));
}

#[test]
fn fail_threshold_sets_a_distinct_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let gt = dir.path().join("x.puml");
    let cand = dir.path().join("y.puml");
    write(&gt, TEN);
    write(&cand, &TEN.replace("A -> B : m5", "B -> A : m5"));
    assert_eq!(
        run(&["compare", p(&gt), p(&cand), "--fail-threshold", "0.05"])
            .status
            .code(),
        Some(3)
    );
    assert_eq!(
        run(&["compare", p(&gt), p(&cand), "--fail-threshold", "10%"])
            .status
            .code(),
        Some(0)
    );
    assert_eq!(
        run(&["compare", p(&gt), p(&cand), "--fail-threshold", "2"])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn invalid_tau_and_unreadable_inputs_fail() {
    let dir = tempfile::tempdir().unwrap();
    let gt = dir.path().join("x.puml");
    write(&gt, TEN);
    assert_eq!(
        run(&["compare", p(&gt), p(&gt), "--tau", "1.5"]).status.code(),
        Some(1)
    );
    assert_eq!(
        run(&["compare", p(&gt), "/nonexistent/y.puml"]).status.code(),
        Some(1)
    );
}

#[test]
fn count_and_normalize_subcommands() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("x.puml");
    write(&f, "@startuml\nactor U\n# U ..> A : hi\n@enduml\n");
    let counts = stdout(&run(&["count", p(&f)]));
    assert!(counts.contains("\"participant_count\": 1"), "{counts}");
    let normalized = stdout(&run(&["normalize", p(&f)]));
    assert_eq!(normalized, "@startuml\nparticipant U\nU --> A : hi\n@enduml\n");
    let partial = stdout(&run(&["normalize", p(&f), "--rules", "actor-to-participant"]));
    assert_eq!(partial, "@startuml\nparticipant U\n# U ..> A : hi\n@enduml\n");
}

#[test]
fn reports_do_not_depend_on_worker_count() {
    let dir = tempfile::tempdir().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for i in 0..20 {
        let gt = generate(&mut rng, 8 + 4 * i, &GenOptions::default());
        let (cand, _, _) = puml_metrics_testkit::mutate(&gt, &mut rng, 4);
        write(&dir.path().join(format!("gt/f{i}.puml")), &gt.render());
        write(&dir.path().join(format!("cand/f{i}.puml")), &cand.render());
    }
    let (gt, cand) = (dir.path().join("gt"), dir.path().join("cand"));
    let one = stdout(&run(&[
        "evaluate",
        p(&gt),
        p(&cand),
        "--format",
        "json",
        "--jobs",
        "1",
    ]));
    let many = stdout(&run(&[
        "evaluate",
        p(&gt),
        p(&cand),
        "--format",
        "json",
        "--jobs",
        "4",
    ]));
    let again = stdout(&run(&[
        "evaluate",
        p(&gt),
        p(&cand),
        "--format",
        "json",
        "--jobs",
        "4",
    ]));
    assert!(!one.is_empty());
    assert_eq!(one, many);
    assert_eq!(many, again);
}
