//! Acceptance gate: runs every criterion, prints one PASS/FAIL line each and
//! exits nonzero if any fails.

use std::collections::BTreeSet;
use std::fs;
use std::panic::{self, AssertUnwindSafe};
use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use puml_metrics::alignment::linear_sum_assignment;
use puml_metrics::pipeline::evaluate_texts;
use puml_metrics::report::{parse_json, render_table};
use puml_metrics::{
    classify_line, levenshtein, line_diff, normalize_script, parse_script, CategoryCell, ErrorCategory,
    ErrorKind, EvalOptions, FileMetrics, RuleSet,
};
use puml_metrics_testkit::oracle;
use puml_metrics_testkit::{dataset_corpus, generate, mutate, Expected, GenOptions, Script, DATASET_BINS};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_puml-metrics")
}

fn eval(gt: &str, cand: &str) -> FileMetrics {
    evaluate_texts("x.puml", gt, cand, &EvalOptions::default())
        .unwrap()
        .metrics
}

fn observed(m: &FileMetrics) -> Expected {
    let mut counts = Expected::new();
    for e in &m.errors {
        *counts.entry((e.category, e.kind)).or_default() += 1;
    }
    counts
}

/// Ground truths in normal form plus scripts using `actor`.
fn synthetic_corpus(rng: &mut ChaCha8Rng, n: usize) -> Vec<Script> {
    let plain = GenOptions::default();
    let actor = GenOptions {
        allow_actor: true,
        ..GenOptions::default()
    };
    (0..n)
        .map(|i| {
            let size = rng.gen_range(5..100);
            generate(rng, size, if i % 2 == 0 { &plain } else { &actor })
        })
        .collect()
}

fn identity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let scripts: Vec<String> = (0..40)
        .map(|_| {
            let size = rng.gen_range(5..100);
            generate(&mut rng, size, &GenOptions::default()).render()
        })
        .collect();
    let kinds: BTreeSet<String> = scripts
        .iter()
        .flat_map(|s| s.lines().map(|l| format!("{:?}", classify_line(l))))
        .collect();
    ensure(kinds.len() == 8, || format!("corpus covers only {kinds:?}"))?;
    let start = Instant::now();
    for s in &scripts {
        let m = eval(s, s);
        ensure(m.errors.is_empty(), || {
            format!("errors on identity: {:?}", m.errors)
        })?;
        for cell in m.cells.values() {
            for kind in ErrorKind::ALL {
                if let Some(rate) = cell.rate(kind) {
                    ensure(rate.num == 0, || "non-zero rate on identity".into())?;
                }
            }
        }
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(1), || format!("took {elapsed:?}"))?;
    Ok(format!(
        "{} scripts, all 8 line kinds, {elapsed:.0?}",
        scripts.len()
    ))
}

fn mutation_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let trials = 250;
    let mut injected = 0;
    for t in 0..trials {
        let size = rng.gen_range(5..100);
        let gt = generate(&mut rng, size, &GenOptions::default());
        let k = rng.gen_range(1..=8);
        let (cand, applied, expected) = mutate(&gt, &mut rng, k);
        injected += applied.len();
        let got = observed(&eval(&gt.render(), &cand.render()));
        ensure(got == expected, || {
            format!("trial {t}: {applied:?}: expected {expected:?}, got {got:?}")
        })?;
    }
    Ok(format!("{trials} trials, {injected} injected edits"))
}

fn assignment() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let trials = 1200;
    for _ in 0..trials {
        let rows = rng.gen_range(1..=6);
        let cols = rng.gen_range(1..=6);
        let costs: Vec<Vec<i64>> = (0..rows)
            .map(|_| (0..cols).map(|_| rng.gen_range(-20..60)).collect())
            .collect();
        let total: i64 = linear_sum_assignment(&costs)
            .iter()
            .map(|&(r, c)| costs[r][c])
            .sum();
        let best = oracle::brute_force_assignment(&costs);
        ensure(total == best, || {
            format!("{costs:?}: got {total}, optimum {best}")
        })?;
    }
    Ok(format!("{trials} matrices up to 6x6"))
}

fn levenshtein_oracle() -> Outcome {
    ensure(levenshtein("kitten", "sitting") == 3, || "kitten/sitting".into())?;
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let alphabet: Vec<char> = "abcdé ->".chars().collect();
    let trials = 2000;
    for _ in 0..trials {
        let word = |rng: &mut ChaCha8Rng| -> String {
            let len = rng.gen_range(0..=20);
            (0..len)
                .map(|_| alphabet[rng.gen_range(0..alphabet.len())])
                .collect()
        };
        let (a, b) = (word(&mut rng), word(&mut rng));
        ensure(levenshtein(&a, &b) == oracle::levenshtein(&a, &b), || {
            format!("{a:?} vs {b:?}")
        })?;
    }
    Ok(format!("{trials} pairs, kitten/sitting = 3"))
}

/// The `row` line of a rendered table, split into columns after the label.
fn table_row(table: &str, row: &str) -> Vec<String> {
    table
        .lines()
        .find_map(|l| l.strip_prefix(row))
        .map(|rest| rest.split_whitespace().map(str::to_string).collect())
        .unwrap_or_default()
}

fn table_arithmetic() -> Outcome {
    let mut cells = puml_metrics::metrics::Cells::new();
    for cat in ErrorCategory::ALL {
        cells.insert(
            cat,
            CategoryCell {
                gt_total: 500,
                ..CategoryCell::default()
            },
        );
    }
    cells.insert(
        ErrorCategory::Node,
        CategoryCell {
            insertions: 226,
            deletions: 0,
            substitutions: 0,
            gt_total: 1736,
        },
    );
    let table = render_table(&cells);
    let header: Vec<&str> = table
        .lines()
        .next()
        .unwrap_or_default()
        .split("  ")
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .collect();
    let col = |label: &str| header.iter().position(|h| *h == label);
    let (node, edge_type) = match (col("Node"), col("Direction type")) {
        (Some(n), Some(e)) => (n, e),
        _ => return Err(format!("unexpected header {header:?}")),
    };
    let ins = table_row(&table, "Insertion (%)");
    let del = table_row(&table, "Deletion (%)");
    ensure(ins.get(node).map(String::as_str) == Some("13.02"), || {
        table.clone()
    })?;
    ensure(ins.get(edge_type).map(String::as_str) == Some("0.00"), || {
        table.clone()
    })?;
    ensure(del.get(edge_type).map(String::as_str) == Some("0.00"), || {
        table.clone()
    })?;

    // A flipped or restyled arrow never yields an edge-type insertion or
    // deletion, so those cells stay at zero through the whole pipeline.
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..50 {
        let size = rng.gen_range(5..60);
        let gt = generate(&mut rng, size, &GenOptions::default());
        let (cand, _, _) = mutate(&gt, &mut rng, 6);
        let m = eval(&gt.render(), &cand.render());
        let et = m.cells.get(&ErrorCategory::EdgeType).copied().unwrap_or_default();
        ensure(et.insertions == 0 && et.deletions == 0, || {
            "edge-type insertion/deletion".into()
        })?;
    }
    Ok("226/1736 renders 13.02, edge-type insertion/deletion 0.00".into())
}

fn random_pair(rng: &mut ChaCha8Rng) -> (String, String) {
    let size = rng.gen_range(3..80);
    let gt = generate(rng, size, &GenOptions::default());
    if rng.gen_bool(0.25) {
        let other = rng.gen_range(3..80);
        return (gt.render(), generate(rng, other, &GenOptions::default()).render());
    }
    let k = rng.gen_range(0..=10);
    (gt.render(), mutate(&gt, rng, k).0.render())
}

fn swap_symmetry() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let trials = 150;
    for t in 0..trials {
        let (a, b) = random_pair(&mut rng);
        let ab = eval(&a, &b);
        let ba = eval(&b, &a);
        for cat in ErrorCategory::ALL {
            let f = ab.cells.get(&cat).copied().unwrap_or_default();
            let r = ba.cells.get(&cat).copied().unwrap_or_default();
            ensure(
                f.insertions == r.deletions
                    && f.deletions == r.insertions
                    && f.substitutions == r.substitutions,
                || format!("pair {t}, {cat:?}: {f:?} vs swapped {r:?}"),
            )?;
        }
    }
    Ok(format!("{trials} pairs"))
}

fn write(path: &Path, text: &str) {
    fs::create_dir_all(path.parent().unwrap()).unwrap();
    fs::write(path, text).unwrap();
}

fn run_cli(args: &[&str]) -> Result<String, String> {
    let out = Command::new(bin())
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!("{args:?}: {}", String::from_utf8_lossy(&out.stderr)));
    }
    Ok(String::from_utf8_lossy(&out.stdout).into_owned())
}

fn patch_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let root = tempfile::tempdir().map_err(|e| e.to_string())?;
    let trials = 120;
    for t in 0..trials {
        let (gt_text, cand_text) = random_pair(&mut rng);
        let dir = root.path().join(format!("t{t}"));
        let gt_path = dir.join("gt/diagram.puml");
        let cand_path = dir.join("cand/diagram.puml");
        let patch_path = dir.join("native.diff");
        write(&gt_path, &gt_text);
        write(&cand_path, &cand_text);
        let gt = parse_script("diagram.puml", &gt_text).map_err(|e| e.to_string())?;
        let normalized = normalize_script(&cand_text, &RuleSet::default());
        let cand = parse_script("diagram.puml", &normalized).map_err(|e| e.to_string())?;
        write(&patch_path, &line_diff(&gt, &cand).to_unified(3));

        let s = |p: &Path| p.to_str().unwrap().to_string();
        let native = run_cli(&["compare", &s(&gt_path), &s(&cand_path), "--format", "json"])?;
        let patched = run_cli(&[
            "from-patch",
            &s(&patch_path),
            &s(&dir.join("gt")),
            "--format",
            "json",
        ])?;
        ensure(native == patched, || format!("pair {t}: reports differ"))?;
    }
    Ok(format!("{trials} pairs byte-identical"))
}

fn bins() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let root = tempfile::tempdir().map_err(|e| e.to_string())?;
    let corpus = dataset_corpus(&mut rng, 6);
    let mut expected = Expected::new();
    for f in &corpus {
        write(&root.path().join("gt").join(&f.name), &f.ground_truth.render());
        write(&root.path().join("cand").join(&f.name), &f.candidate.render());
        for (key, n) in &f.expected {
            *expected.entry(*key).or_default() += n;
        }
    }
    let lines: usize = corpus
        .iter()
        .map(|f| f.ground_truth.render().lines().count())
        .sum();
    let out = root.path().join("out");
    let s = |p: &Path| p.to_str().unwrap().to_string();
    let start = Instant::now();
    run_cli(&[
        "evaluate",
        &s(&root.path().join("gt")),
        &s(&root.path().join("cand")),
        "--out",
        &s(&out),
        "--format",
        "json",
    ])?;
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(5), || format!("took {elapsed:?}"))?;

    let report = parse_json(&fs::read_to_string(out.join("report.json")).map_err(|e| e.to_string())?)
        .map_err(|e| e.to_string())?;
    let got: Vec<(String, usize)> = report
        .bins
        .iter()
        .map(|b| (b.label.clone(), b.file_count))
        .collect();
    let want: Vec<(String, usize)> = DATASET_BINS
        .iter()
        .enumerate()
        .map(|(i, &(lo, hi, n))| (format!("{}-{}", if i == 0 { 1 } else { lo }, hi), n))
        .collect();
    ensure(got == want, || format!("bins {got:?}, want {want:?}"))?;
    let mut totals = Expected::new();
    for (cat, cell) in &report.aggregate {
        for kind in ErrorKind::ALL {
            if cell.count(kind) > 0 {
                totals.insert((*cat, kind), cell.count(kind));
            }
        }
    }
    ensure(totals == expected, || {
        format!("aggregate {totals:?}, injected {expected:?}")
    })?;
    Ok(format!(
        "50 files, {lines} lines, bins 10/13/5/13/9, {elapsed:.0?}"
    ))
}

fn normalization() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut rewrites = 0;
    for t in 0..100 {
        let size = rng.gen_range(5..100);
        let gt = generate(&mut rng, size, &GenOptions::default()).render();
        let mut cand = String::new();
        for line in gt.lines() {
            let trimmed = line.trim_start();
            let indent = &line[..line.len() - trimmed.len()];
            let rewritten = if trimmed.starts_with("participant ") && rng.gen_bool(0.7) {
                format!("{indent}actor {}", &trimmed["participant ".len()..])
            } else if line.contains(" --> ") && rng.gen_bool(0.7) {
                line.replacen(" --> ", " ..> ", 1)
            } else {
                line.to_string()
            };
            rewrites += usize::from(rewritten != line);
            cand.push_str(&rewritten);
            cand.push('\n');
        }
        let m = eval(&gt, &cand);
        ensure(m.errors.is_empty(), || format!("script {t}: {:?}", m.errors))?;
    }
    ensure(rewrites > 100, || format!("only {rewrites} rewrites"))?;

    let rules = RuleSet::default();
    let mut corpus = synthetic_corpus(&mut rng, 60);
    for f in dataset_corpus(&mut rng, 6) {
        corpus.push(f.ground_truth);
        corpus.push(f.candidate);
    }
    for script in &corpus {
        let once = normalize_script(&script.render(), &rules);
        ensure(normalize_script(&once, &rules) == once, || {
            format!("not idempotent:\n{once}")
        })?;
    }
    Ok(format!(
        "{rewrites} lenient rewrites with zero errors, idempotent on {} scripts",
        corpus.len()
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("identity suite", identity),
        ("mutation oracle", mutation_oracle),
        ("assignment optimality", assignment),
        ("levenshtein oracle", levenshtein_oracle),
        ("table arithmetic and format", table_arithmetic),
        ("swap symmetry", swap_symmetry),
        ("patch-path equivalence", patch_equivalence),
        ("bin reproduction", bins),
        ("normalization idempotence and leniency", normalization),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let outcome = panic::catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            Err(e
                .downcast_ref::<String>()
                .cloned()
                .unwrap_or_else(|| "panicked".into()))
        });
        match outcome {
            Ok(detail) => println!("criterion {}: PASS  {name} ({detail})", i + 1),
            Err(reason) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {reason}", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
