//! Command implementations behind the `grover-ev` binary: single runs,
//! parameter sweeps, and the self-verification suite.
//!
//! Exit codes: 0 success, 1 usage error, 2 legitimate search failure
//! (a sampled-mode miss is data, not tool misuse).

use std::io::Write;
use std::path::PathBuf;

use crate::driver::{
    self, compare_versions, run_ev_at, run_pm_at, run_standard_ev, run_standard_pm,
    run_truncated_ev, SearchResult, SweepCell, Version,
};
use crate::error::{Error, Result};
use crate::filter::MeasureMode;
use crate::measure::EnsembleModel;
use crate::output;
use crate::state::SearchInstance;
use crate::verify::{self, Suite};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_SEARCH_FAILED: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

/// How the marked set is specified: explicitly, or as a count placed
/// randomly with its own seed (kept independent of measurement seeds).
#[derive(Debug, Clone, PartialEq)]
pub enum MarkedSpec {
    Explicit(Vec<u64>),
    Random { count: u64, seed: u64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub num_qubits: usize,
    pub marked: MarkedSpec,
    pub version: Version,
    pub iterations: Option<u64>,
    pub epsilon: f64,
    /// 0 means exact expectation values.
    pub ensemble_size: u64,
    pub seed: u64,
    pub output: Option<PathBuf>,
    pub format: OutputFormat,
}

impl RunConfig {
    fn instance(&self) -> Result<SearchInstance> {
        match &self.marked {
            MarkedSpec::Explicit(list) => SearchInstance::new(self.num_qubits, list),
            MarkedSpec::Random { count, seed } => {
                SearchInstance::random(self.num_qubits, *count, *seed)
            }
        }
    }

    fn mode(&self) -> Result<MeasureMode> {
        if self.ensemble_size == 0 {
            Ok(MeasureMode::Exact)
        } else {
            Ok(MeasureMode::Sampled(EnsembleModel::new(
                self.ensemble_size,
                self.seed,
                self.epsilon,
            )?))
        }
    }

    fn validate(&self) -> Result<()> {
        if !(0.0..1.0).contains(&self.epsilon) {
            return Err(Error::InvalidConfig(format!(
                "epsilon {} must lie in [0, 1)",
                self.epsilon
            )));
        }
        Ok(())
    }
}

fn write_output(path: Option<&PathBuf>, contents: &str) -> Result<()> {
    match path {
        Some(path) => std::fs::write(path, contents)?,
        None => std::io::stdout().write_all(contents.as_bytes())?,
    }
    Ok(())
}

fn execute_run(config: &RunConfig) -> Result<SearchResult> {
    config.validate()?;
    let inst = config.instance()?;
    let mode = config.mode()?;
    match (config.version, config.iterations) {
        (Version::Pm, None) => run_standard_pm(&inst, config.seed),
        (Version::Pm, Some(m)) => run_pm_at(&inst, m, config.seed),
        (Version::EvStandard, None) => run_standard_ev(&inst, &mode),
        (Version::EvStandard, Some(m)) => run_ev_at(&inst, Version::EvStandard, m, &mode, None),
        (Version::EvTruncated, None) => run_truncated_ev(&inst, config.epsilon, &mode),
        (Version::EvTruncated, Some(m)) => {
            run_ev_at(&inst, Version::EvTruncated, m, &mode, None)
        }
    }
}

/// Executes one search and writes its record; exit 2 flags a search miss.
pub fn cmd_run(config: &RunConfig) -> i32 {
    let result = match execute_run(config) {
        Ok(result) => result,
        Err(err) => {
            eprintln!("error: {err}");
            return EXIT_USAGE;
        }
    };
    let rendered = match config.format {
        OutputFormat::Json => match output::result_json(&result) {
            Ok(s) => s,
            Err(err) => {
                eprintln!("error: {err}");
                return EXIT_USAGE;
            }
        },
        OutputFormat::Csv => output::result_csv(&result),
    };
    if let Err(err) = write_output(config.output.as_ref(), &rendered) {
        eprintln!("error: {err}");
        return EXIT_USAGE;
    }
    if result.success {
        EXIT_OK
    } else {
        EXIT_SEARCH_FAILED
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub qubits: Vec<usize>,
    pub marked_counts: Vec<u64>,
    pub r_values: Vec<f64>,
    /// 0 means exact expectation values.
    pub ensemble_size: u64,
    pub seeds_per_cell: u64,
    pub master_seed: u64,
    pub output: Option<PathBuf>,
}

fn execute_sweep(config: &SweepConfig) -> Result<String> {
    if config.qubits.is_empty() || config.marked_counts.is_empty() || config.r_values.is_empty() {
        return Err(Error::InvalidConfig("empty sweep grid".into()));
    }
    let mut grid = Vec::new();
    for &l in &config.qubits {
        for &m in &config.marked_counts {
            for &r in &config.r_values {
                if !(0.0..=1.0).contains(&r) {
                    return Err(Error::InvalidConfig(format!(
                        "r value {r} outside [0, 1]"
                    )));
                }
                grid.push(SweepCell {
                    num_qubits: l,
                    num_marked: m,
                    r,
                });
            }
        }
    }
    let mode = if config.ensemble_size == 0 {
        MeasureMode::Exact
    } else {
        MeasureMode::Sampled(EnsembleModel::new(
            config.ensemble_size,
            config.master_seed,
            0.0,
        )?)
    };
    let seeds: Vec<u64> = (0..config.seeds_per_cell)
        .map(|i| driver::derive_seed(config.master_seed, i, u64::MAX))
        .collect();
    let rows = compare_versions(&grid, &seeds, &mode, config.master_seed)?;
    Ok(output::sweep_csv(&rows))
}

pub fn cmd_sweep(config: &SweepConfig) -> i32 {
    match execute_sweep(config) {
        Ok(csv) => {
            if let Err(err) = write_output(config.output.as_ref(), &csv) {
                eprintln!("error: {err}");
                return EXIT_USAGE;
            }
            EXIT_OK
        }
        Err(err) => {
            eprintln!("error: {err}");
            EXIT_USAGE
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyConfig {
    pub suites: Vec<Suite>,
    pub max_qubits: usize,
}

pub fn cmd_verify(config: &VerifyConfig) -> i32 {
    let reports = match verify::run_suites(&config.suites, config.max_qubits) {
        Ok(reports) => reports,
        Err(err) => {
            eprintln!("error: {err}");
            return EXIT_USAGE;
        }
    };
    let mut all_passed = true;
    for report in &reports {
        println!(
            "{}: {} ({} cases, {})",
            report.suite.name(),
            if report.passed { "PASS" } else { "FAIL" },
            report.cases,
            report.detail
        );
        all_passed &= report.passed;
    }
    if all_passed {
        EXIT_OK
    } else {
        EXIT_SEARCH_FAILED
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base_run_config() -> RunConfig {
        RunConfig {
            num_qubits: 3,
            marked: MarkedSpec::Explicit(vec![5]),
            version: Version::EvTruncated,
            iterations: None,
            epsilon: 0.0,
            ensemble_size: 0,
            seed: 0,
            output: None,
            format: OutputFormat::Json,
        }
    }

    #[test]
    fn run_finds_explicit_marked_item() {
        let result = execute_run(&base_run_config()).unwrap();
        assert_eq!(result.found, Some(5));
        assert!(result.success);
    }

    #[test]
    fn run_rejects_out_of_range_marked_location() {
        let mut config = base_run_config();
        config.marked = MarkedSpec::Explicit(vec![9]);
        assert!(execute_run(&config).is_err());
    }

    #[test]
    fn run_rejects_bad_epsilon() {
        let mut config = base_run_config();
        config.epsilon = 1.5;
        assert!(execute_run(&config).is_err());
    }

    #[test]
    fn run_cascade_over_pair() {
        let mut config = base_run_config();
        config.num_qubits = 2;
        config.marked = MarkedSpec::Explicit(vec![0, 3]);
        config.version = Version::EvStandard;
        let result = execute_run(&config).unwrap();
        assert!(matches!(result.found, Some(0) | Some(3)));
    }

    #[test]
    fn sweep_single_cell_r_one() {
        let config = SweepConfig {
            qubits: vec![8],
            marked_counts: vec![1],
            r_values: vec![1.0],
            ensemble_size: 0,
            seeds_per_cell: 0,
            master_seed: 3,
            output: None,
        };
        let csv = execute_sweep(&config).unwrap();
        let data_line = csv.lines().nth(1).unwrap();
        let fields: Vec<&str> = data_line.split(',').collect();
        // ratio_measured column
        assert_eq!(fields[9], "1.00000000000");
    }

    #[test]
    fn sweep_rejects_empty_grid() {
        let config = SweepConfig {
            qubits: vec![],
            marked_counts: vec![1],
            r_values: vec![0.5],
            ensemble_size: 0,
            seeds_per_cell: 0,
            master_seed: 3,
            output: None,
        };
        assert!(execute_sweep(&config).is_err());
    }

    #[test]
    fn sweep_is_deterministic() {
        let config = SweepConfig {
            qubits: vec![6, 8],
            marked_counts: vec![1, 2],
            r_values: vec![0.1, 0.5],
            ensemble_size: 100,
            seeds_per_cell: 3,
            master_seed: 42,
            output: None,
        };
        assert_eq!(
            execute_sweep(&config).unwrap(),
            execute_sweep(&config).unwrap()
        );
    }

    #[test]
    fn json_record_round_trips() {
        let result = execute_run(&base_run_config()).unwrap();
        let json = output::result_json(&result).unwrap();
        let parsed: SearchResult = serde_json::from_str(&json).unwrap();
        assert_eq!(parsed, result);
    }
}
