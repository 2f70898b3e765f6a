use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use log::{info, warn};
use puml_metrics::pipeline::{compare_files, evaluate_dirs, evaluate_manifest, evaluate_patch};
use puml_metrics::puml::normalize_script_logged;
use puml_metrics::report::write_outputs;
use puml_metrics::{
    count_components, parse_script, render, BinEdges, DatasetReport, EvalOptions, ReportFormat, RuleSet,
};

/// Exit status when an aggregate rate exceeds `--fail-threshold`.
const THRESHOLD_EXCEEDED: u8 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "puml-metrics",
    version,
    about = "Structural error metrics for PlantUML sequence diagrams"
)]
struct Cli {
    /// key=value file with defaults for the flags below.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compare one ground-truth script with one candidate.
    Compare {
        ground_truth: PathBuf,
        candidate: PathBuf,
        #[command(flatten)]
        opts: EvalArgs,
    },
    /// Evaluate a ground-truth directory against a same-named candidate
    /// directory, or the pairs listed in a manifest.
    Evaluate {
        #[arg(required_unless_present = "manifest", requires = "candidate_dir")]
        gt_dir: Option<PathBuf>,
        #[arg(conflicts_with = "manifest")]
        candidate_dir: Option<PathBuf>,
        /// CSV with header ground_truth,candidate,label.
        #[arg(long)]
        manifest: Option<PathBuf>,
        #[command(flatten)]
        opts: EvalArgs,
    },
    /// Evaluate a unified diff against the ground-truth tree it applies to.
    FromPatch {
        patch: PathBuf,
        gt_dir: PathBuf,
        #[command(flatten)]
        opts: EvalArgs,
    },
    /// Print ground-truth component counts.
    Count {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    /// Print the normalized form of a script.
    Normalize {
        file: PathBuf,
        #[arg(long)]
        rules: Option<String>,
    },
}

#[derive(Args, Debug, Default)]
struct EvalArgs {
    /// json, csv, table or tsv.
    #[arg(long)]
    format: Option<String>,
    /// Directory for table.txt, per_file.csv, report.json and bins.csv.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Pairs above this normalized edit distance count as unrelated.
    #[arg(long)]
    tau: Option<f64>,
    /// Upper edges of the line-count bins, e.g. 20,30,40,50,100.
    #[arg(long)]
    bins: Option<String>,
    #[arg(long)]
    no_normalize: bool,
    /// Comma-separated normalization rule keys.
    #[arg(long)]
    rules: Option<String>,
    #[arg(long)]
    jobs: Option<usize>,
    /// Fail when any aggregate rate exceeds this fraction (or "N%").
    #[arg(long)]
    fail_threshold: Option<String>,
}

/// Flag values after merging the config file underneath the command line.
struct Settings {
    format: ReportFormat,
    out: Option<PathBuf>,
    fail_threshold: Option<f64>,
    options: EvalOptions,
}

fn read_config(path: &Path) -> Result<BTreeMap<String, String>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
    let mut map = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            bail!("{}:{}: expected key=value", path.display(), i + 1);
        };
        let key = key.trim().trim_start_matches("--").replace('_', "-");
        const KEYS: [&str; 8] = [
            "format",
            "out",
            "tau",
            "bins",
            "no-normalize",
            "rules",
            "jobs",
            "fail-threshold",
        ];
        if !KEYS.contains(&key.as_str()) {
            bail!("{}:{}: unknown key {key:?}", path.display(), i + 1);
        }
        map.insert(key, value.trim().to_string());
    }
    Ok(map)
}

fn parse_threshold(s: &str) -> Result<f64> {
    let s = s.trim();
    let value = match s.strip_suffix('%') {
        Some(p) => p.trim().parse::<f64>().map(|v| v / 100.0),
        None => s.parse::<f64>(),
    }
    .with_context(|| format!("invalid fail threshold {s:?}"))?;
    if !(0.0..=1.0).contains(&value) {
        bail!("fail threshold {s:?} is outside 0..1");
    }
    Ok(value)
}

fn parse_bool(key: &str, s: &str) -> Result<bool> {
    match s.to_ascii_lowercase().as_str() {
        "true" | "yes" | "1" | "on" => Ok(true),
        "false" | "no" | "0" | "off" => Ok(false),
        _ => bail!("invalid boolean for {key}: {s:?}"),
    }
}

fn settings(args: &EvalArgs, config: &BTreeMap<String, String>) -> Result<Settings> {
    let pick = |flag: Option<String>, key: &str| flag.or_else(|| config.get(key).cloned());
    let mut options = EvalOptions::default();
    let format = match pick(args.format.clone(), "format") {
        Some(f) => f.parse()?,
        None => ReportFormat::Table,
    };
    if let Some(tau) = pick(args.tau.map(|t| t.to_string()), "tau") {
        options.tau = tau.parse().with_context(|| format!("invalid tau {tau:?}"))?;
    }
    if let Some(bins) = pick(args.bins.clone(), "bins") {
        options.bins = bins.parse::<BinEdges>()?;
    }
    if let Some(rules) = pick(args.rules.clone(), "rules") {
        options.rules = RuleSet::parse_keys(&rules)?;
    }
    if let Some(jobs) = pick(args.jobs.map(|j| j.to_string()), "jobs") {
        options.jobs = Some(jobs.parse().with_context(|| format!("invalid jobs {jobs:?}"))?);
    }
    options.normalize = !(args.no_normalize
        || match config.get("no-normalize") {
            Some(v) => parse_bool("no-normalize", v)?,
            None => false,
        });
    Ok(Settings {
        format,
        out: pick(args.out.as_ref().map(|p| p.display().to_string()), "out").map(PathBuf::from),
        fail_threshold: pick(args.fail_threshold.clone(), "fail-threshold")
            .map(|t| parse_threshold(&t))
            .transpose()?,
        options,
    })
}

/// Prints and writes the report; returns the exit status.
fn emit(report: &DatasetReport, settings: &Settings) -> Result<ExitCode> {
    for missing in &report.coverage.missing_candidates {
        warn!("no candidate for {missing}");
    }
    print!("{}", render(report, settings.format));
    if let Some(dir) = &settings.out {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        for path in
            write_outputs(report, dir).with_context(|| format!("writing outputs to {}", dir.display()))?
        {
            info!("wrote {}", path.display());
        }
    }
    if let (Some(limit), Some(rate)) = (settings.fail_threshold, report.max_rate()) {
        if rate.as_f64() > limit {
            warn!(
                "aggregate rate {}% exceeds threshold {:.2}%",
                rate.percent_string(),
                limit * 100.0
            );
            return Ok(ExitCode::from(THRESHOLD_EXCEEDED));
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn run(cli: Cli) -> Result<ExitCode> {
    let config = match &cli.config {
        Some(path) => read_config(path)?,
        None => BTreeMap::new(),
    };
    match cli.command {
        Command::Compare {
            ground_truth,
            candidate,
            opts,
        } => {
            let s = settings(&opts, &config)?;
            let report = compare_files(&ground_truth, &candidate, &s.options).with_context(|| {
                format!(
                    "comparing {} with {}",
                    ground_truth.display(),
                    candidate.display()
                )
            })?;
            emit(&report, &s)
        }
        Command::Evaluate {
            gt_dir,
            candidate_dir,
            manifest,
            opts,
        } => {
            let s = settings(&opts, &config)?;
            let report = match (manifest, gt_dir, candidate_dir) {
                (Some(m), _, _) => evaluate_manifest(&m, &s.options)
                    .with_context(|| format!("evaluating manifest {}", m.display()))?,
                (None, Some(gt), Some(cand)) => evaluate_dirs(&gt, &cand, &s.options)
                    .with_context(|| format!("evaluating {} against {}", cand.display(), gt.display()))?,
                _ => bail!("evaluate needs GT_DIR and CANDIDATE_DIR, or --manifest"),
            };
            emit(&report, &s)
        }
        Command::FromPatch { patch, gt_dir, opts } => {
            let s = settings(&opts, &config)?;
            let text = fs::read_to_string(&patch).with_context(|| format!("reading {}", patch.display()))?;
            let report = evaluate_patch(&text, &gt_dir, &s.options)
                .with_context(|| format!("applying {} to {}", patch.display(), gt_dir.display()))?;
            emit(&report, &s)
        }
        Command::Count { files } => {
            let mut all = BTreeMap::new();
            for path in files {
                let text =
                    fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
                let name = path.display().to_string();
                let script = parse_script(&name, &text).with_context(|| format!("parsing {name}"))?;
                for w in &script.warnings {
                    warn!("{name}: {w:?}");
                }
                all.insert(name, count_components(&script));
            }
            println!("{}", serde_json::to_string_pretty(&all)?);
            Ok(ExitCode::SUCCESS)
        }
        Command::Normalize { file, rules } => {
            let rules = match rules.or_else(|| config.get("rules").cloned()) {
                Some(keys) => RuleSet::parse_keys(&keys)?,
                None => RuleSet::default(),
            };
            let text = fs::read_to_string(&file).with_context(|| format!("reading {}", file.display()))?;
            let (normalized, changes) = normalize_script_logged(&text, &rules);
            for c in &changes {
                info!(
                    "line {}: {:?}: {:?} -> {:?}",
                    c.line_no, c.rule, c.before, c.after
                );
            }
            print!("{normalized}");
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::FAILURE
        }
    }
}
