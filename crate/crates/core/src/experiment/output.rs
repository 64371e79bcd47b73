//! Plot-ready tables: one wide CSV per sweep plus a raw per-seed CSV, or a
//! single TOML document.

use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::analysis::AnalysisReport;
use crate::error::ExperimentError;

use super::chainwalk::ChainwalkStudy;
use super::sweep::{Arm, SeedMetrics, SweepKind, SweepResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Csv,
    Toml,
}

impl fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Toml => "toml",
        })
    }
}

impl FromStr for OutputFormat {
    type Err = ExperimentError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "toml" => Ok(OutputFormat::Toml),
            other => Err(ExperimentError::Sweep(format!(
                "unknown output format {other:?}"
            ))),
        }
    }
}

/// Header of the aggregated sweep table.
pub fn sweep_header(kind: SweepKind) -> [&'static str; 5] {
    match kind {
        SweepKind::Penalty => [
            "penalty",
            "failure_rate",
            "failure_stderr",
            "mean_return",
            "steps_to_convergence",
        ],
        SweepKind::Slip => [
            "slip",
            "failure_rate",
            "failure_stderr",
            "mean_return",
            "final_penalty",
        ],
    }
}

const SEED_COLUMNS: [&str; 7] = [
    "seed",
    "failure_rate",
    "behaviour_failure_rate",
    "mean_return",
    "steps_to_convergence",
    "converged",
    "final_penalty",
];

pub fn write_sweep_csv<W: Write>(result: &SweepResult, out: W) -> Result<(), csv::Error> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(sweep_header(result.kind))?;
    for row in &result.rows {
        let last = match result.kind {
            SweepKind::Penalty => row.steps_to_convergence,
            SweepKind::Slip => row.final_penalty,
        };
        w.write_record([
            row.arm.label(result.kind),
            row.failure_rate.to_string(),
            row.failure_stderr.to_string(),
            row.mean_return.to_string(),
            last.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Raw per-seed metrics, preceded by `#` comment lines recording the kind
/// and the seed list.
pub fn write_seed_csv<W: Write>(result: &SweepResult, mut out: W) -> Result<(), csv::Error> {
    let seeds: Vec<String> = result.seeds.iter().map(u64::to_string).collect();
    writeln!(out, "# kind: {}", result.kind)?;
    writeln!(out, "# seeds: {}", seeds.join(" "))?;
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec![result.variable()];
    header.extend(SEED_COLUMNS);
    w.write_record(header)?;
    for row in &result.rows {
        let label = row.arm.label(result.kind);
        for m in &row.per_seed {
            w.write_record([
                label.clone(),
                m.seed.to_string(),
                m.failure_rate.to_string(),
                m.behaviour_failure_rate.to_string(),
                m.mean_return.to_string(),
                m.steps_to_convergence.to_string(),
                m.converged.to_string(),
                m.final_penalty.to_string(),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Reads a per-seed CSV back as `(setting label, metrics)` pairs.
pub fn read_seed_csv(text: &str) -> Result<Vec<(String, SeedMetrics)>, csv::Error> {
    let mut r = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let mut out = Vec::new();
    type Flat = (String, u64, f64, f64, f64, u64, bool, f64);
    for rec in r.deserialize::<Flat>() {
        let (
            label,
            seed,
            failure_rate,
            behaviour_failure_rate,
            mean_return,
            steps_to_convergence,
            converged,
            final_penalty,
        ) = rec?;
        out.push((
            label,
            SeedMetrics {
                seed,
                failure_rate,
                behaviour_failure_rate,
                mean_return,
                steps_to_convergence,
                converged,
                final_penalty,
            },
        ));
    }
    Ok(out)
}

pub fn sweep_to_toml(result: &SweepResult) -> String {
    toml::to_string(result).expect("sweep results serialise")
}

pub fn sweep_from_toml(text: &str) -> Result<SweepResult, toml::de::Error> {
    toml::from_str(text)
}

pub fn write_chainwalk_csv<W: Write>(study: &ChainwalkStudy, out: W) -> Result<(), csv::Error> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "p",
        "label",
        "penalty",
        "failure",
        "optimal_failure",
        "vi_sweeps",
    ])?;
    for row in &study.rows {
        w.write_record([
            row.p.to_string(),
            row.label.as_str().to_string(),
            row.penalty.to_string(),
            row.failure.to_string(),
            row.optimal_failure.to_string(),
            row.vi_sweeps.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn chainwalk_to_toml(study: &ChainwalkStudy) -> String {
    toml::to_string(study).expect("chain-walk rows serialise")
}

pub fn chainwalk_from_toml(text: &str) -> Result<ChainwalkStudy, toml::de::Error> {
    toml::from_str(text)
}

fn create(path: &Path) -> Result<fs::File, ExperimentError> {
    fs::File::create(path).map_err(|source| ExperimentError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn write_text(path: &Path, text: &str) -> Result<(), ExperimentError> {
    fs::write(path, text).map_err(|source| ExperimentError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn csv_err(path: &Path) -> impl FnOnce(csv::Error) -> ExperimentError + '_ {
    move |source| ExperimentError::Csv {
        path: path.to_path_buf(),
        source,
    }
}

fn ensure_dir(dir: &Path) -> Result<(), ExperimentError> {
    fs::create_dir_all(dir).map_err(|source| ExperimentError::Io {
        path: dir.to_path_buf(),
        source,
    })
}

/// Writes `<kind>_sweep.csv` and `<kind>_sweep_seeds.csv`, or
/// `<kind>_sweep.toml`, into `dir`. Returns the paths written.
pub fn emit_sweep(
    result: &SweepResult,
    dir: &Path,
    format: OutputFormat,
) -> Result<Vec<PathBuf>, ExperimentError> {
    ensure_dir(dir)?;
    let stem = format!("{}_sweep", result.kind);
    match format {
        OutputFormat::Csv => {
            let table = dir.join(format!("{stem}.csv"));
            write_sweep_csv(result, create(&table)?).map_err(csv_err(&table))?;
            let raw = dir.join(format!("{stem}_seeds.csv"));
            write_seed_csv(result, create(&raw)?).map_err(csv_err(&raw))?;
            Ok(vec![table, raw])
        }
        OutputFormat::Toml => {
            let path = dir.join(format!("{stem}.toml"));
            write_text(&path, &sweep_to_toml(result))?;
            Ok(vec![path])
        }
    }
}

pub fn emit_chainwalk(
    study: &ChainwalkStudy,
    dir: &Path,
    format: OutputFormat,
) -> Result<PathBuf, ExperimentError> {
    ensure_dir(dir)?;
    let path = dir.join(format!("chainwalk.{format}"));
    match format {
        OutputFormat::Csv => write_chainwalk_csv(study, create(&path)?).map_err(csv_err(&path))?,
        OutputFormat::Toml => write_text(&path, &chainwalk_to_toml(study))?,
    }
    Ok(path)
}

/// The analysis report is always TOML.
pub fn emit_analysis(report: &AnalysisReport, dir: &Path) -> Result<PathBuf, ExperimentError> {
    ensure_dir(dir)?;
    let path = dir.join("analysis.toml");
    write_text(&path, &report.to_toml())?;
    Ok(path)
}

/// Every arm label that may appear in a per-seed CSV for `result`.
pub fn arm_labels(result: &SweepResult) -> Vec<(String, Arm)> {
    result
        .rows
        .iter()
        .map(|r| (r.arm.label(result.kind), r.arm))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiment::sweep::SweepRow;

    fn metrics(seed: u64, failure: f64) -> SeedMetrics {
        SeedMetrics {
            seed,
            failure_rate: failure,
            behaviour_failure_rate: failure + 0.01,
            mean_return: -0.3,
            steps_to_convergence: 1000 + seed,
            converged: seed.is_multiple_of(2),
            final_penalty: -1.5,
        }
    }

    fn sample() -> SweepResult {
        SweepResult {
            kind: SweepKind::Slip,
            seeds: vec![4, 5],
            rows: [0.0, 0.25, 0.5]
                .iter()
                .map(|&sp| {
                    SweepRow::aggregate(
                        Arm::Adaptive(sp),
                        vec![metrics(4, sp / 3.0), metrics(5, 0.1)],
                    )
                })
                .collect(),
        }
    }

    #[test]
    fn three_settings_three_rows() {
        let mut buf = Vec::new();
        write_sweep_csv(&sample(), &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 4);
        assert_eq!(
            lines[0],
            "slip,failure_rate,failure_stderr,mean_return,final_penalty"
        );
        assert!(lines[2].starts_with("0.25,"));
    }

    #[test]
    fn empty_result_is_header_only() {
        let empty = SweepResult {
            kind: SweepKind::Penalty,
            seeds: vec![],
            rows: vec![],
        };
        let mut buf = Vec::new();
        write_sweep_csv(&empty, &mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "penalty,failure_rate,failure_stderr,mean_return,steps_to_convergence\n"
        );
    }

    #[test]
    fn toml_round_trip() {
        let res = sample();
        assert_eq!(sweep_from_toml(&sweep_to_toml(&res)).unwrap(), res);
    }

    #[test]
    fn seed_csv_round_trip() {
        let res = sample();
        let mut buf = Vec::new();
        write_seed_csv(&res, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("# kind: slip\n# seeds: 4 5\n"));
        let back = read_seed_csv(&text).unwrap();
        assert_eq!(back.len(), 6);
        assert_eq!(back[2].0, "0.25");
        assert_eq!(back[2].1, res.rows[1].per_seed[0]);
    }

    #[test]
    fn format_names() {
        assert_eq!("toml".parse::<OutputFormat>().unwrap(), OutputFormat::Toml);
        assert!("json".parse::<OutputFormat>().is_err());
    }
}
