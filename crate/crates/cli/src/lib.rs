//! Scenario runner behind the `redsm` binary: resolves a parameter grid,
//! runs every protocol at every grid point and writes one CSV.

pub mod config;

use std::collections::HashMap;
use std::f64::consts::PI;
use std::fmt::Write as _;
use std::io;
use std::path::Path;

use redsm_core::qmath::hermitian_eig;
use redsm_core::tomography::{mub_bases, reference_qubit_state};
use redsm_core::{
    run_batches, AggregateResult, Prng, Protocol, ProtocolConfig, PureMode, SampleBudget, Sampling, StateSource,
    TrialOutcome, TrueState,
};
use tempfile::NamedTempFile;
use thiserror::Error;

pub use config::{parse_config, ConfigError, Scenario, ScenarioName, StateKind, DEFAULT_BATCHES, DEFAULT_SEED};

pub const CSV_HEADER: [&str; 10] = [
    "scenario",
    "protocol",
    "d",
    "theta",
    "nu",
    "N_c",
    "mean_trace_dist",
    "std_trace_dist",
    "batches",
    "seed",
];

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("simulation failed: {0}")]
    Core(#[from] redsm_core::Error),
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridPoint {
    pub d: usize,
    pub theta: f64,
    pub nu: f64,
    pub nc: u64,
}

impl GridPoint {
    /// Seed shared by every protocol at this point. It leaves out `theta`,
    /// so a θ sweep reuses the same states and MUB results stay constant.
    pub fn seed(&self, master: u64) -> u64 {
        Prng::new(master)
            .substream(self.d as u64)
            .substream(self.nc)
            .substream(self.nu.to_bits())
            .seed()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CsvRow {
    pub scenario: ScenarioName,
    pub protocol: Protocol,
    pub point: GridPoint,
    pub mean: f64,
    pub std: f64,
    pub batches: usize,
    pub seed: u64,
}

fn float(x: f64) -> String {
    format!("{x:.8e}")
}

impl CsvRow {
    pub fn record(&self) -> [String; 10] {
        [
            self.scenario.to_string(),
            self.protocol.to_string(),
            self.point.d.to_string(),
            float(self.point.theta),
            float(self.point.nu),
            self.point.nc.to_string(),
            float(self.mean),
            float(self.std),
            self.batches.to_string(),
            self.seed.to_string(),
        ]
    }
}

#[derive(Debug, Clone)]
pub struct Report {
    pub rows: Vec<CsvRow>,
    pub summary: String,
    /// Full results in row order.
    pub results: Vec<AggregateResult>,
}

impl Report {
    /// First trial of the first row; the single reconstruction of `fig5`.
    pub fn first_trial(&self) -> Option<&TrialOutcome> {
        self.results.first().and_then(|r| r.outcomes.first())
    }
}

fn source(s: &Scenario, point: &GridPoint) -> StateSource {
    match s.state {
        StateKind::Pure => StateSource::RandomPure {
            d: point.d,
            mode: PureMode::Nonneg,
        },
        StateKind::Mixed => StateSource::RandomMixed { d: point.d },
        StateKind::NearlyPure => StateSource::NearlyPure {
            d: point.d,
            nu: point.nu,
        },
        StateKind::Reference => StateSource::Fixed(TrueState::Mixed(reference_qubit_state())),
    }
}

pub fn grid(s: &Scenario) -> Vec<GridPoint> {
    let nus = if s.state == StateKind::NearlyPure {
        s.nu.clone()
    } else {
        vec![0.0]
    };
    let mut points = Vec::new();
    for &d in &s.d {
        for &theta in &s.theta {
            for &nu in &nus {
                for &nc in &s.nc {
                    points.push(GridPoint { d, theta, nu, nc });
                }
            }
        }
    }
    points
}

fn describe(p: &GridPoint) -> String {
    format!("d={} theta={:.4}pi nu={} N_c={}", p.d, p.theta / PI, p.nu, p.nc)
}

/// Run every grid point and protocol, write the CSV, return the report.
pub fn run_scenario(s: &Scenario) -> Result<Report, RunError> {
    s.validate()?;
    let sampling = if s.exact { Sampling::Exact } else { Sampling::Finite };
    let mut rows = Vec::new();
    let mut results = Vec::new();
    let mut summary = String::new();
    let mut mub_cache: HashMap<(usize, u64, u64), AggregateResult> = HashMap::new();

    for point in grid(s) {
        let seed = point.seed(s.seed);
        let budget = SampleBudget::new(point.nc, s.batches, s.budget_mode, s.batch_mode)?;
        let mut line = Vec::new();
        for &protocol in &s.protocols {
            if protocol == Protocol::MubQst && mub_bases(point.d).is_err() {
                line.push(format!("{protocol} skipped (d not prime)"));
                continue;
            }
            let config = ProtocolConfig {
                protocol,
                theta: point.theta,
                budget,
                sampling,
            };
            let result = if protocol == Protocol::MubQst {
                let key = (point.d, point.nc, point.nu.to_bits());
                match mub_cache.get(&key) {
                    Some(r) => r.clone(),
                    None => {
                        let r = run_batches(&config, &source(s, &point), seed)?;
                        mub_cache.insert(key, r.clone());
                        r
                    }
                }
            } else {
                run_batches(&config, &source(s, &point), seed)?
            };
            rows.push(CsvRow {
                scenario: s.name,
                protocol,
                point,
                mean: result.mean,
                std: result.std,
                batches: s.batches,
                seed: s.seed,
            });
            results.push(result);
        }
        let mut ranked: Vec<&CsvRow> = rows.iter().filter(|r| r.point == point).collect();
        ranked.sort_by(|a, b| a.mean.total_cmp(&b.mean));
        let order = ranked
            .iter()
            .map(|r| format!("{} {:.3e}", r.protocol, r.mean))
            .collect::<Vec<_>>()
            .join(" < ");
        line.insert(0, order);
        writeln!(summary, "{}: {}", describe(&point), line.join("; ")).expect("writing to a String");
    }

    if s.name == ScenarioName::Fig5 {
        if let Some(trial) = results.first().and_then(|r| r.outcomes.first()) {
            summary.push_str(&reconstruction_report(trial)?);
        }
    }

    write_csv(&s.out, &rows)?;
    Ok(Report { rows, summary, results })
}

fn reconstruction_report(trial: &TrialOutcome) -> Result<String, RunError> {
    let spectrum = hermitian_eig(&trial.state)?;
    let truth = reference_qubit_state();
    let mut out = String::new();
    writeln!(out, "reconstructed state:\n{}", trial.state).expect("writing to a String");
    let eig = spectrum
        .eigenvalues
        .iter()
        .map(|e| format!("{e:.5}"))
        .collect::<Vec<_>>()
        .join(", ");
    writeln!(out, "eigenvalues: {eig}").expect("writing to a String");
    writeln!(out, "max elementwise error: {:.3e}", trial.state.max_abs_diff(&truth)).expect("writing to a String");
    writeln!(out, "trace distance: {:.3e}", trial.trace_dist).expect("writing to a String");
    Ok(out)
}

/// Write through a temporary file in the target directory, so a failed run
/// never leaves a partial CSV behind.
pub fn write_csv(path: &Path, rows: &[CsvRow]) -> Result<(), RunError> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let tmp = NamedTempFile::new_in(dir)?;
    {
        let mut w = csv::Writer::from_writer(tmp.as_file());
        w.write_record(CSV_HEADER)?;
        for row in rows {
            w.write_record(row.record())?;
        }
        w.flush()?;
    }
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}
