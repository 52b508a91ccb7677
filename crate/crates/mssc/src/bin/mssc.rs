//! Benchmark CLI: seeded multi-start clustering experiments, published-style
//! result tables, and an oracle self-check suite.

use std::collections::HashMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use mssc::bench::{
    self, emit_report, load_dataset, multistart, write_table_header, write_table_row, DataFormat,
    EmitFormat, MultistartConfig, RunConfig, RunReport,
};
use mssc::core::{solution_from_assignment, Assignment, Dataset};
use mssc::grasp::{AlphaRule, RandomSource};
use mssc::improve::{ImproveConfig, ImproveMode};
use mssc::incremental::{add_delta, merge_delta, remove_delta};
use mssc::oracle::{brute_objective, exhaustive_optimum, make_two_squares};
use mssc::starters::{merging_start, merging_start_basic, StarterConfig, StarterKind};
use mssc::{Error, Result};

#[derive(Parser)]
#[command(
    name = "mssc",
    version,
    about = "Minimum sum-of-squares clustering benchmark harness"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a seeded multi-start experiment on one dataset.
    Run(RunArgs),
    /// Reproduce benchmark result tables for the datasets found in a
    /// directory.
    Table(TableArgs),
    /// Run the oracle self-check suite.
    Verify(VerifyArgs),
}

#[derive(Args, Default)]
struct RunArgs {
    /// key=value config file; command-line flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    dataset: Option<PathBuf>,
    /// matrix | tsplib
    #[arg(long)]
    format: Option<String>,
    #[arg(long)]
    k: Option<usize>,
    /// merging | merging-basic | construction | separation |
    /// random-partition | random-points | kmeanspp
    #[arg(long)]
    starter: Option<String>,
    /// GRASP factor for the merging starters (>= 1).
    #[arg(long)]
    alpha: Option<f64>,
    /// on | off — randomized selection in construction/separation.
    #[arg(long)]
    grasp: Option<String>,
    /// hybrid | lloyd | phase3 | none
    #[arg(long)]
    improve: Option<String>,
    #[arg(long = "lloyd-cap")]
    lloyd_cap: Option<usize>,
    #[arg(long)]
    restarts: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    threads: Option<usize>,
    /// Report destination; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// csv | table
    #[arg(long)]
    emit: Option<String>,
}

#[derive(Args)]
struct TableArgs {
    /// small | medium | large | alpha-study
    #[arg(long)]
    preset: String,
    #[arg(long = "data-dir")]
    data_dir: PathBuf,
    /// Override the preset's restart count.
    #[arg(long)]
    restarts: Option<usize>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    threads: usize,
    /// Also write the rows as CSV to this path.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

fn main() {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Run(args) => run_command(args),
        Command::Table(args) => table_command(args),
        Command::Verify(args) => verify_command(args),
    };
    if let Err(error) = outcome {
        // Machine-readable error on stderr, one JSON object per line.
        let payload = serde_json::json!({
            "error": error.kind(),
            "message": error.to_string(),
        });
        eprintln!("{payload}");
        std::process::exit(1);
    }
}

/// Settings assembled from defaults, then the config file, then flags.
fn build_run_config(args: &RunArgs) -> Result<RunConfig> {
    let mut file_values: HashMap<String, String> = HashMap::new();
    if let Some(path) = &args.config {
        file_values = parse_config_file(path)?;
    }
    let from_file = |key: &str| file_values.get(key).cloned();

    let dataset_path = args
        .dataset
        .clone()
        .or_else(|| from_file("dataset").map(PathBuf::from))
        .ok_or_else(|| Error::Config("missing required option 'dataset'".into()))?;
    let k = match (&args.k, from_file("k")) {
        (Some(k), _) => *k,
        (None, Some(text)) => text
            .parse()
            .map_err(|_| Error::Config(format!("invalid k '{text}' in config file")))?,
        (None, None) => return Err(Error::Config("missing required option 'k'".into())),
    };

    let format: DataFormat = args
        .format
        .clone()
        .or_else(|| from_file("format"))
        .unwrap_or_else(|| "matrix".into())
        .parse()?;
    let kind: StarterKind = args
        .starter
        .clone()
        .or_else(|| from_file("starter"))
        .unwrap_or_else(|| "construction".into())
        .parse()?;
    let alpha = match (args.alpha, from_file("alpha")) {
        (Some(a), _) => a,
        (None, Some(text)) => text
            .parse()
            .map_err(|_| Error::Config(format!("invalid alpha '{text}' in config file")))?,
        (None, None) => 1.5,
    };
    let grasp = parse_switch(
        &args
            .grasp
            .clone()
            .or_else(|| from_file("grasp"))
            .unwrap_or_else(|| "on".into()),
    )?;
    let mode: ImproveMode = args
        .improve
        .clone()
        .or_else(|| from_file("improve"))
        .unwrap_or_else(|| "hybrid".into())
        .parse()?;
    let lloyd_cap = parse_or_default(args.lloyd_cap, from_file("lloyd-cap"), 10, "lloyd-cap")?;
    let restarts = parse_or_default(args.restarts, from_file("restarts"), 1, "restarts")?;
    let seed = parse_or_default(args.seed, from_file("seed"), 1, "seed")?;
    let threads = parse_or_default(args.threads, from_file("threads"), 1, "threads")?;
    let emit: EmitFormat = args
        .emit
        .clone()
        .or_else(|| from_file("emit"))
        .unwrap_or_else(|| "table".into())
        .parse()?;
    let out = args
        .out
        .clone()
        .or_else(|| from_file("out").map(PathBuf::from));

    if restarts == 0 {
        return Err(Error::Config("restarts must be at least 1".into()));
    }
    Ok(RunConfig {
        dataset_path,
        format,
        multistart: MultistartConfig {
            k,
            starter: StarterConfig {
                kind,
                alpha: AlphaRule::new(alpha)?,
                grasp_enabled: grasp,
                seed,
            },
            improve: ImproveConfig { lloyd_cap, mode },
            restarts,
            seed,
            threads,
        },
        out,
        emit,
    })
}

fn parse_or_default<T: std::str::FromStr>(
    flag: Option<T>,
    file: Option<String>,
    default: T,
    key: &str,
) -> Result<T> {
    match (flag, file) {
        (Some(v), _) => Ok(v),
        (None, Some(text)) => text
            .parse()
            .map_err(|_| Error::Config(format!("invalid {key} '{text}' in config file"))),
        (None, None) => Ok(default),
    }
}

fn parse_switch(text: &str) -> Result<bool> {
    match text {
        "on" => Ok(true),
        "off" => Ok(false),
        other => Err(Error::Config(format!(
            "expected 'on' or 'off', got '{other}'"
        ))),
    }
}

fn parse_config_file(path: &Path) -> Result<HashMap<String, String>> {
    let text = std::fs::read_to_string(path)?;
    let mut values = HashMap::new();
    for (number, line) in text.lines().enumerate() {
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let Some((key, value)) = trimmed.split_once('=') else {
            return Err(Error::Parse {
                path: path.display().to_string(),
                line: number + 1,
                message: format!("expected key=value, got '{trimmed}'"),
            });
        };
        values.insert(key.trim().to_string(), value.trim().to_string());
    }
    Ok(values)
}

fn run_command(args: RunArgs) -> Result<()> {
    let config = build_run_config(&args)?;
    let report = bench::run_multistart(&config)?;
    if report.outcomes.is_empty() {
        let detail = report
            .failures
            .first()
            .map_or_else(String::new, |(_, message)| format!(": {message}"));
        return Err(Error::Config(format!("all restarts failed{detail}")));
    }
    match &config.out {
        Some(path) => bench::emit_report_to_path(&report, config.emit, path)?,
        None => {
            let mut stdout = std::io::stdout().lock();
            emit_report(&report, config.emit, &mut stdout)?;
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// table
// ---------------------------------------------------------------------------

struct Preset {
    datasets: &'static [&'static str],
    ks: &'static [usize],
    restarts: usize,
    /// (starter, alpha) columns to run.
    columns: &'static [(StarterKind, f64)],
}

fn preset(name: &str) -> Result<Preset> {
    match name {
        "small" => Ok(Preset {
            datasets: &["ruspini75", "fisher", "gr202", "gr666"],
            ks: &[2, 3, 4, 5, 6, 7, 8, 9, 10],
            restarts: 1000,
            columns: &[
                (StarterKind::Merging, 1.5),
                (StarterKind::Construction, 1.5),
            ],
        }),
        "medium" => Ok(Preset {
            datasets: &["tsplib1060", "tsplib3038", "pendigit"],
            ks: &[2, 5, 10, 15, 20, 25],
            restarts: 1000,
            columns: &[
                (StarterKind::Merging, 1.5),
                (StarterKind::Construction, 1.5),
            ],
        }),
        "large" => Ok(Preset {
            datasets: &["letter", "kegg", "pla85900"],
            ks: &[2, 5, 10, 15, 20, 25],
            restarts: 100,
            columns: &[
                (StarterKind::Merging, 1.5),
                (StarterKind::Construction, 1.5),
            ],
        }),
        // The alpha sensitivity study: merging at 1.1 / 1.5 / 2.0.
        "alpha-study" => Ok(Preset {
            datasets: &["kegg"],
            ks: &[2, 5, 10, 15, 20, 25],
            restarts: 100,
            columns: &[
                (StarterKind::Merging, 1.1),
                (StarterKind::Merging, 1.5),
                (StarterKind::Merging, 2.0),
            ],
        }),
        other => Err(Error::Config(format!("unknown preset '{other}'"))),
    }
}

/// Finds `<name>.<ext>` in the data directory for the extensions we load.
fn find_dataset_file(dir: &Path, name: &str) -> Option<(PathBuf, DataFormat)> {
    for (ext, format) in [
        ("txt", DataFormat::Matrix),
        ("csv", DataFormat::Matrix),
        ("data", DataFormat::Matrix),
        ("tsp", DataFormat::Tsplib),
    ] {
        let candidate = dir.join(format!("{name}.{ext}"));
        if candidate.is_file() {
            return Some((candidate, format));
        }
    }
    None
}

fn table_command(args: TableArgs) -> Result<()> {
    let preset = preset(&args.preset)?;
    let restarts = args.restarts.unwrap_or(preset.restarts);
    let mut reports: Vec<RunReport> = Vec::new();

    {
        let mut stdout = std::io::stdout().lock();
        write_table_header(&mut stdout)?;
    }
    for name in preset.datasets {
        let Some((path, format)) = find_dataset_file(&args.data_dir, name) else {
            eprintln!(
                "note: {name}: no file in {}, skipped",
                args.data_dir.display()
            );
            continue;
        };
        let dataset = load_dataset(&path, format)?;
        for &k in preset.ks {
            for &(kind, alpha) in preset.columns {
                let config = MultistartConfig {
                    k,
                    starter: StarterConfig {
                        kind,
                        alpha: AlphaRule::new(alpha)?,
                        grasp_enabled: true,
                        seed: args.seed,
                    },
                    improve: ImproveConfig::default(),
                    restarts,
                    seed: args.seed,
                    threads: args.threads,
                };
                let report = multistart(&dataset, &config);
                let mut stdout = std::io::stdout().lock();
                write_table_row(&report, &mut stdout)?;
                stdout.flush()?;
                reports.push(report);
            }
        }
    }

    if reports.is_empty() {
        return Err(Error::Config(format!(
            "no preset datasets found in {}",
            args.data_dir.display()
        )));
    }
    if let Some(path) = args.out {
        let mut writer = csv::Writer::from_path(path)
            .map_err(|e| Error::Config(format!("csv open failed: {e}")))?;
        for report in &reports {
            writer
                .serialize(report.summary())
                .map_err(|e| Error::Config(format!("csv write failed: {e}")))?;
        }
        writer.flush()?;
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

struct Checker {
    failures: usize,
}

impl Checker {
    fn report(&mut self, name: &str, passed: bool, detail: String) {
        if passed {
            println!("PASS {name}: {detail}");
        } else {
            self.failures += 1;
            println!("FAIL {name}: {detail}");
        }
    }
}

fn verify_command(args: VerifyArgs) -> Result<()> {
    let mut checker = Checker { failures: 0 };

    delta_cross_checks(&mut checker, args.seed);
    two_squares_checks(&mut checker);
    brute_consistency(&mut checker, args.seed);
    exhaustive_recovery(&mut checker, args.seed);
    merging_equivalence(&mut checker, args.seed);

    if checker.failures > 0 {
        return Err(Error::Config(format!(
            "{} verify checks failed",
            checker.failures
        )));
    }
    println!("verify: all checks passed");
    Ok(())
}

/// Incremental add/remove/merge deltas against from-scratch recomputation
/// on randomized clusters, d up to 20.
fn delta_cross_checks(checker: &mut Checker, seed: u64) {
    let mut rng = RandomSource::new(seed);
    let cases = 100_000;
    let mut worst = 0.0f64;
    for _ in 0..cases {
        let d = 1 + rng.index(20);
        let m = 1 + rng.index(49);
        let points: Vec<Vec<f64>> = (0..m + 1)
            .map(|_| (0..d).map(|_| rng.uniform() * 10.0 - 5.0).collect())
            .collect();
        let dataset = Dataset::from_rows("delta", &points).unwrap();
        let members: Vec<usize> = (0..m).collect();
        let stats = mssc::core::ClusterStats::from_members(&dataset, &members).unwrap();
        let extra = dataset.point(m);

        let sse = |idx: &[usize]| -> f64 {
            if idx.is_empty() {
                return 0.0;
            }
            let c = mssc::core::centroid(&dataset, idx).unwrap();
            idx.iter()
                .map(|&i| mssc::core::sq_dist(dataset.point(i), &c))
                .sum()
        };

        // Add.
        let with_extra: Vec<usize> = (0..=m).collect();
        let expected = sse(&with_extra) - stats.wss;
        let got = add_delta(&stats, extra).unwrap();
        worst = worst.max(rel_gap(got, expected));

        // Remove (needs at least two members).
        if m >= 2 {
            let without_first: Vec<usize> = (1..m).collect();
            let expected = sse(&without_first) - stats.wss;
            let got = remove_delta(&stats, dataset.point(0)).unwrap();
            worst = worst.max(rel_gap(got, expected));
        }

        // Merge: split the members in two halves.
        if m >= 2 {
            let half = m / 2;
            let left: Vec<usize> = (0..half).collect();
            let right: Vec<usize> = (half..m).collect();
            let a = mssc::core::ClusterStats::from_members(&dataset, &left).unwrap();
            let b = mssc::core::ClusterStats::from_members(&dataset, &right).unwrap();
            let expected = sse(&members) - a.wss - b.wss;
            let got = merge_delta(&a, &b);
            worst = worst.max(rel_gap(got, expected));
        }
    }
    checker.report(
        "incremental-deltas",
        worst <= 1e-9,
        format!("{cases} randomized cases, worst relative gap {worst:.3e}"),
    );
}

fn rel_gap(got: f64, expected: f64) -> f64 {
    (got - expected).abs() / expected.abs().max(1.0)
}

fn two_squares_checks(checker: &mut Checker) {
    let mut worst = 0.0f64;
    for x in [0.0, 0.1, 0.25, 0.30, 0.35] {
        let inst = make_two_squares(x).unwrap();
        let formula = inst.optimal_objective().unwrap();
        let (_, value) = exhaustive_optimum(inst.dataset(), 2).unwrap();
        worst = worst.max((value - formula).abs());
    }
    checker.report(
        "two-squares-exhaustive",
        worst <= 1e-12,
        format!("closed form equals exhaustive optimum, worst gap {worst:.3e}"),
    );

    let mut seven_one_ok = true;
    for i in 0..=20 {
        let x = i as f64 * 0.05;
        let inst = make_two_squares(x).unwrap();
        let six_two = Assignment::new(vec![0, 0, 0, 0, 0, 0, 1, 1], 2).unwrap();
        let base = brute_objective(inst.dataset(), &six_two, 2).unwrap();
        for lone in 0..8 {
            let labels: Vec<usize> = (0..8).map(|j| usize::from(j == lone)).collect();
            let value =
                brute_objective(inst.dataset(), &Assignment::new(labels, 2).unwrap(), 2).unwrap();
            seven_one_ok &= value > base;
        }
    }
    checker.report(
        "two-squares-seven-one",
        seven_one_ok,
        "7-1 splits always cost more than the 6-2 split".into(),
    );
}

fn brute_consistency(checker: &mut Checker, seed: u64) {
    let mut rng = RandomSource::new(seed ^ 0x5eed);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let n = 2 + rng.index(12);
        let d = 1 + rng.index(3);
        let k = 1 + rng.index(n.min(4));
        let rows: Vec<Vec<f64>> = (0..n)
            .map(|_| (0..d).map(|_| rng.uniform() * 6.0).collect())
            .collect();
        let dataset = Dataset::from_rows("brute", &rows).unwrap();
        let labels: Vec<usize> = (0..n)
            .map(|i| if i < k { i } else { rng.index(k) })
            .collect();
        let assignment = Assignment::new(labels, k).unwrap();
        let solution = solution_from_assignment(&dataset, assignment.clone(), k).unwrap();
        let brute = brute_objective(&dataset, &assignment, k).unwrap();
        worst = worst.max(rel_gap(solution.objective, brute));
    }
    checker.report(
        "objective-vs-brute",
        worst <= 1e-9,
        format!("1000 random assignments, worst relative gap {worst:.3e}"),
    );
}

fn exhaustive_recovery(checker: &mut Checker, seed: u64) {
    let mut rng = RandomSource::new(seed ^ 0xface);
    let total = 20;
    let mut recovered = 0;
    for case in 0..total {
        let n = 6 + rng.index(7);
        let d = 1 + rng.index(3);
        let k = 2 + rng.index(2);
        let rows: Vec<Vec<f64>> = (0..n)
            .map(|_| (0..d).map(|_| rng.uniform() * 10.0).collect())
            .collect();
        let dataset = Dataset::from_rows(format!("inst{case}"), &rows).unwrap();
        let (_, best) = exhaustive_optimum(&dataset, k).unwrap();
        let config = MultistartConfig {
            k,
            starter: StarterConfig::new(StarterKind::Construction),
            improve: ImproveConfig::default(),
            restarts: 200,
            seed: case,
            threads: 1,
        };
        let report = multistart(&dataset, &config);
        if let Some(found) = report.best_objective() {
            if (found - best).abs() <= 1e-9 * best.abs().max(1.0) {
                recovered += 1;
            }
        }
    }
    checker.report(
        "exhaustive-recovery",
        recovered >= total - 1,
        format!("multi-start found the enumerated optimum on {recovered}/{total} instances"),
    );
}

fn merging_equivalence(checker: &mut Checker, seed: u64) {
    let mut rng = RandomSource::new(seed ^ 0xbeef);
    let mut matched = 0;
    let total = 50;
    for _ in 0..total {
        let n = 2 + rng.index(40);
        let k = 1 + rng.index(n.min(6));
        let d = 1 + rng.index(3);
        let rows: Vec<Vec<f64>> = (0..n)
            .map(|_| (0..d).map(|_| rng.uniform() * 20.0).collect())
            .collect();
        let dataset = Dataset::from_rows("merge", &rows).unwrap();
        let mut rng_a = RandomSource::new(0);
        let mut rng_b = RandomSource::new(0);
        let fast = merging_start(&dataset, k, AlphaRule::greedy(), &mut rng_a).unwrap();
        let slow = merging_start_basic(&dataset, k, AlphaRule::greedy(), &mut rng_b).unwrap();
        let mut fast_rows: Vec<Vec<f64>> = fast.centers().map(|c| c.to_vec()).collect();
        let mut slow_rows: Vec<Vec<f64>> = slow.centers().map(|c| c.to_vec()).collect();
        let sort = |rows: &mut Vec<Vec<f64>>| {
            rows.sort_by(|a, b| {
                a.iter()
                    .zip(b)
                    .map(|(x, y)| x.total_cmp(y))
                    .find(|o| o.is_ne())
                    .unwrap_or(std::cmp::Ordering::Equal)
            })
        };
        sort(&mut fast_rows);
        sort(&mut slow_rows);
        let close = fast_rows.len() == slow_rows.len()
            && fast_rows
                .iter()
                .zip(&slow_rows)
                .all(|(a, b)| a.iter().zip(b).all(|(x, y)| (x - y).abs() <= 1e-9));
        matched += usize::from(close);
    }
    checker.report(
        "merging-efficient-vs-basic",
        matched == total,
        format!("identical center sets on {matched}/{total} random instances"),
    );
}
