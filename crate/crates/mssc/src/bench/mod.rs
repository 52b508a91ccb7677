//! The benchmark harness: seeded multi-start experiments over a
//! (starter, improvement) pipeline, best-known lookups, and report
//! emission in CSV or text-table form.

pub mod io;
pub mod registry;

pub use io::{expected_shape, load_dataset, load_matrix, load_tsplib, DataFormat};
pub use registry::{best_known, BestKnownEntry, BestKnownRegistry};

use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::core::Dataset;
use crate::grasp::RandomSource;
use crate::improve::{improve, ImproveConfig};
use crate::starters::StarterConfig;
use crate::{Error, Result};

/// Relative tolerance used when counting how many restarts hit a value.
const HIT_REL_TOL: f64 = 1e-9;

/// The algorithmic half of an experiment: what to run, how many times,
/// and on which seed. Replication `i` always draws from the stream
/// derived from `(seed, i)`, so results do not depend on `threads`.
#[derive(Debug, Clone)]
pub struct MultistartConfig {
    pub k: usize,
    pub starter: StarterConfig,
    pub improve: ImproveConfig,
    pub restarts: usize,
    pub seed: u64,
    pub threads: usize,
}

/// A full experiment description: dataset location plus the multistart
/// settings and where to put the report.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub dataset_path: PathBuf,
    pub format: DataFormat,
    pub multistart: MultistartConfig,
    pub out: Option<PathBuf>,
    pub emit: EmitFormat,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EmitFormat {
    Csv,
    Table,
}

impl std::str::FromStr for EmitFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(EmitFormat::Csv),
            "table" => Ok(EmitFormat::Table),
            other => Err(Error::Config(format!("unknown emit format '{other}'"))),
        }
    }
}

/// One successful restart.
#[derive(Debug, Clone, Copy)]
pub struct RestartOutcome {
    pub index: usize,
    pub objective: f64,
    pub seconds: f64,
}

/// Everything a multi-start run produced: per-restart outcomes, failures,
/// and the registry value it is judged against.
#[derive(Debug, Clone)]
pub struct RunReport {
    pub dataset: String,
    pub k: usize,
    pub starter: String,
    pub alpha: f64,
    pub restarts: usize,
    pub seed: u64,
    pub outcomes: Vec<RestartOutcome>,
    pub failures: Vec<(usize, String)>,
    pub best_known: Option<f64>,
}

impl RunReport {
    /// Lowest objective over the successful restarts.
    pub fn best_objective(&self) -> Option<f64> {
        self.outcomes
            .iter()
            .map(|o| o.objective)
            .min_by(f64::total_cmp)
    }

    /// Restarts whose objective matches `target` within relative 1e-9.
    pub fn hits_at(&self, target: f64) -> usize {
        let tol = HIT_REL_TOL * target.abs().max(1.0);
        self.outcomes
            .iter()
            .filter(|o| o.objective <= target + tol)
            .count()
    }

    /// Restarts that matched the best objective found.
    pub fn hits_at_best(&self) -> usize {
        self.best_objective().map_or(0, |best| self.hits_at(best))
    }

    /// Percentage above the best-known value; negative means a new best.
    pub fn rel_error_pct(&self) -> Option<f64> {
        let best = self.best_objective()?;
        let known = self.best_known?;
        Some(100.0 * (best - known) / known)
    }

    pub fn mean_seconds(&self) -> f64 {
        if self.outcomes.is_empty() {
            return 0.0;
        }
        self.outcomes.iter().map(|o| o.seconds).sum::<f64>() / self.outcomes.len() as f64
    }

    /// The flat summary row the CSV report is made of.
    pub fn summary(&self) -> ReportRow {
        ReportRow {
            dataset: self.dataset.clone(),
            k: self.k,
            starter: self.starter.clone(),
            alpha: self.alpha,
            restarts: self.restarts,
            best_objective: self.best_objective(),
            best_known: self.best_known,
            rel_error_pct: self.rel_error_pct(),
            hits_at_best: self.hits_at_best(),
            mean_time_s: self.mean_seconds(),
            seed: self.seed,
        }
    }
}

/// One CSV row of a report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub dataset: String,
    pub k: usize,
    pub starter: String,
    pub alpha: f64,
    pub restarts: usize,
    pub best_objective: Option<f64>,
    pub best_known: Option<f64>,
    pub rel_error_pct: Option<f64>,
    pub hits_at_best: usize,
    pub mean_time_s: f64,
    pub seed: u64,
}

/// Runs `restarts` independent (starter -> improve) pipelines on an
/// already-loaded dataset. A failed restart is recorded and does not stop
/// the others. With `threads > 1` the restarts run on a local thread pool;
/// the per-restart objectives are identical to a sequential run.
pub fn multistart(dataset: &Dataset, config: &MultistartConfig) -> RunReport {
    let run_one = |index: usize| {
        let clock = Instant::now();
        let mut rng = RandomSource::replication(config.seed, index as u64);
        let result = config
            .starter
            .start_with(dataset, config.k, &mut rng)
            .and_then(|centers| improve(dataset, &centers, &config.improve));
        let seconds = clock.elapsed().as_secs_f64();
        (index, result.map(|s| (s.objective, seconds)))
    };

    let results: Vec<(usize, Result<(f64, f64)>)> = if config.threads <= 1 {
        (0..config.restarts).map(run_one).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(config.threads)
            .build()
            .expect("thread pool");
        pool.install(|| (0..config.restarts).into_par_iter().map(run_one).collect())
    };

    let mut outcomes = Vec::with_capacity(config.restarts);
    let mut failures = Vec::new();
    for (index, result) in results {
        match result {
            Ok((objective, seconds)) => outcomes.push(RestartOutcome {
                index,
                objective,
                seconds,
            }),
            Err(error) => failures.push((index, error.to_string())),
        }
    }

    RunReport {
        dataset: dataset.name().to_string(),
        k: config.k,
        starter: config.starter.kind.to_string(),
        alpha: config.starter.alpha.alpha(),
        restarts: config.restarts,
        seed: config.seed,
        outcomes,
        failures,
        best_known: best_known(dataset.name(), config.k),
    }
}

/// Loads the dataset named by the config and runs the experiment. The
/// cluster count is validated against the dataset up front; errors inside
/// individual restarts are only counted.
pub fn run_multistart(config: &RunConfig) -> Result<RunReport> {
    if config.multistart.restarts == 0 {
        return Err(Error::Config("restarts must be at least 1".into()));
    }
    let dataset = load_dataset(&config.dataset_path, config.format)?;
    if config.multistart.k < 1 || config.multistart.k > dataset.n() {
        return Err(Error::InvalidK {
            k: config.multistart.k,
            n: dataset.n(),
        });
    }
    Ok(multistart(&dataset, &config.multistart))
}

/// Writes a report to `writer` in the requested format. CSV output is
/// byte-identical across runs of the same config except for the time
/// column. A negative relative error is flagged as a new best in the text
/// format.
pub fn emit_report(report: &RunReport, format: EmitFormat, writer: &mut dyn Write) -> Result<()> {
    match format {
        EmitFormat::Csv => {
            let mut csv_writer = csv::Writer::from_writer(writer);
            csv_writer
                .serialize(report.summary())
                .map_err(|e| Error::Config(format!("csv write failed: {e}")))?;
            csv_writer.flush()?;
            Ok(())
        }
        EmitFormat::Table => write_text_table(std::slice::from_ref(report), writer),
    }
}

/// Writes a report to a file path.
pub fn emit_report_to_path(
    report: &RunReport,
    format: EmitFormat,
    path: impl AsRef<std::path::Path>,
) -> Result<()> {
    let mut file = std::fs::File::create(path)?;
    emit_report(report, format, &mut file)
}

/// A found value this far below the best-known one (in percent) counts as
/// a genuinely new best rather than registry rounding; the bundled values
/// carry six significant digits.
const NEW_BEST_PCT: f64 = -1e-3;

/// Header line of the text table.
pub fn write_table_header(writer: &mut dyn Write) -> Result<()> {
    writeln!(
        writer,
        "{:<12} {:>3}  {:<14} {:>6}  {:>13}  {:>13}  {:>8}  {:>6}  {:>10}",
        "dataset",
        "k",
        "starter",
        "alpha",
        "best found",
        "best known",
        "rel err%",
        "hits",
        "time/run s"
    )?;
    Ok(())
}

/// One text-table row for a report.
pub fn write_table_row(report: &RunReport, writer: &mut dyn Write) -> Result<()> {
    let best = report
        .best_objective()
        .map_or_else(|| "-".to_string(), |value| format!("{value:.6E}"));
    let known = report
        .best_known
        .map_or_else(|| "-".to_string(), |value| format!("{value:.6E}"));
    let rel = report.rel_error_pct().map_or_else(
        || "-".to_string(),
        |value| {
            if value < NEW_BEST_PCT {
                format!("{value:.3} (new best)")
            } else {
                format!("{value:.3}")
            }
        },
    );
    writeln!(
        writer,
        "{:<12} {:>3}  {:<14} {:>6.2}  {:>13}  {:>13}  {:>8}  {:>6}  {:>10.6}",
        report.dataset,
        report.k,
        report.starter,
        report.alpha,
        best,
        known,
        rel,
        report.hits_at_best(),
        report.mean_seconds()
    )?;
    if !report.failures.is_empty() {
        writeln!(writer, "  ({} failed restarts)", report.failures.len())?;
    }
    Ok(())
}

/// Multi-row text table in the layout of the published result tables:
/// one row per (dataset, k, starter), relative error and hit counts next
/// to the best-known value.
pub fn write_text_table(reports: &[RunReport], writer: &mut dyn Write) -> Result<()> {
    write_table_header(writer)?;
    for report in reports {
        write_table_row(report, writer)?;
    }
    Ok(())
}

/// Reads back rows written by the CSV emitter.
pub fn parse_report_csv(reader: impl std::io::Read) -> Result<Vec<ReportRow>> {
    let mut csv_reader = csv::Reader::from_reader(reader);
    csv_reader
        .deserialize()
        .collect::<std::result::Result<Vec<ReportRow>, _>>()
        .map_err(|e| Error::Config(format!("csv parse failed: {e}")))
}
