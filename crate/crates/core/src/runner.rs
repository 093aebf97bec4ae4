//! Batch orchestration: factor sweeps, repetition with derived seeds,
//! aggregation to means and artifact export.

use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::engine::{run_in, EngineError, RunConfig, RunResult, World};

#[derive(Debug, Error)]
pub enum RunnerError {
    #[error("no rows to export")]
    EmptyInput,
    #[error("invalid sweep: {0}")]
    InvalidSpec(String),
    #[error("unknown factor `{0}`")]
    UnknownFactor(String),
    #[error("level `{level}` is not valid for factor {factor}")]
    BadLevel { factor: Factor, level: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error("thread pool: {0}")]
    Pool(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Factor {
    Routing,
    Leadership,
    #[serde(rename = "role_switching")]
    Switching,
    Memory,
    Consensus,
    Protocols,
}

impl Factor {
    pub const ALL: [Factor; 6] =
        [Factor::Routing, Factor::Leadership, Factor::Switching, Factor::Memory, Factor::Consensus, Factor::Protocols];

    pub fn name(self) -> &'static str {
        match self {
            Factor::Routing => "routing",
            Factor::Leadership => "leadership",
            Factor::Switching => "role_switching",
            Factor::Memory => "memory",
            Factor::Consensus => "consensus",
            Factor::Protocols => "protocols",
        }
    }

    pub fn levels(self) -> &'static [&'static str] {
        match self {
            Factor::Routing => &["strict", "crosslayer"],
            Factor::Leadership => &["single", "functional"],
            Factor::Switching => &["on", "off"],
            Factor::Memory => &["off", "basic", "shared"],
            Factor::Consensus => &["off", "on"],
            Factor::Protocols => &["off", "hetero"],
        }
    }

    pub fn apply(self, base: &RunConfig, level: &str) -> Result<RunConfig, RunnerError> {
        let bad = || RunnerError::BadLevel { factor: self, level: level.to_string() };
        let mut cfg = base.clone();
        match self {
            Factor::Routing => cfg.routing = level.parse().map_err(|_| bad())?,
            Factor::Leadership => cfg.leadership = level.parse().map_err(|_| bad())?,
            Factor::Switching => cfg.switching = parse_switch(level).ok_or_else(bad)?,
            Factor::Memory => cfg.memory = level.parse().map_err(|_| bad())?,
            Factor::Consensus => cfg.consensus.enabled = parse_switch(level).ok_or_else(bad)?,
            Factor::Protocols => cfg.protocols = level.parse().map_err(|_| bad())?,
        }
        Ok(cfg)
    }
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Factor {
    type Err = RunnerError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "routing" => Ok(Factor::Routing),
            "leadership" => Ok(Factor::Leadership),
            "role_switching" | "switching" => Ok(Factor::Switching),
            "memory" => Ok(Factor::Memory),
            "consensus" => Ok(Factor::Consensus),
            "protocols" => Ok(Factor::Protocols),
            _ => Err(RunnerError::UnknownFactor(s.to_string())),
        }
    }
}

pub fn parse_switch(s: &str) -> Option<bool> {
    match s.to_ascii_lowercase().as_str() {
        "on" | "true" | "1" | "yes" => Some(true),
        "off" | "false" | "0" | "no" => Some(false),
        _ => None,
    }
}

pub fn switch_label(on: bool) -> &'static str {
    if on {
        "on"
    } else {
        "off"
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub base: RunConfig,
    /// `None` runs the base configuration as a single level.
    pub factor: Option<Factor>,
    pub levels: Vec<String>,
    pub repetitions: u32,
    pub seed_base: u64,
}

impl SweepSpec {
    pub fn single(base: RunConfig, repetitions: u32, seed_base: u64) -> Self {
        SweepSpec { base, factor: None, levels: Vec::new(), repetitions, seed_base }
    }

    /// Sweep over every level of `factor`.
    pub fn over(base: RunConfig, factor: Factor, repetitions: u32, seed_base: u64) -> Self {
        let levels = factor.levels().iter().map(|s| s.to_string()).collect();
        SweepSpec { base, factor: Some(factor), levels, repetitions, seed_base }
    }

    pub fn validate(&self) -> Result<(), RunnerError> {
        if self.repetitions == 0 {
            return Err(RunnerError::InvalidSpec("repetitions must be positive".into()));
        }
        if self.factor.is_some() && self.levels.is_empty() {
            return Err(RunnerError::InvalidSpec("factor sweep without levels".into()));
        }
        Ok(())
    }

    /// `(label, config)` per level; a bad level keeps its error.
    pub fn level_configs(&self) -> Vec<(String, Result<RunConfig, RunnerError>)> {
        match self.factor {
            None => vec![("base".to_string(), Ok(self.base.clone()))],
            Some(f) => self.levels.iter().map(|l| (format!("{f}={l}"), f.apply(&self.base, l))).collect(),
        }
    }

    pub fn seeds(&self) -> impl Iterator<Item = u64> + '_ {
        (0..u64::from(self.repetitions)).map(|i| self.seed_base + i)
    }
}

/// Means over the completed runs of one level, held at export precision.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AggregateRow {
    pub scenario: String,
    pub routing: String,
    pub leadership: String,
    pub switching: String,
    pub memory: String,
    pub consensus: String,
    pub protocols: String,
    pub time: f64,
    pub msgs: f64,
    pub failures: f64,
    pub n_asset: f64,
    pub n_viol: f64,
    pub n_miss: f64,
    pub crosslayer: f64,
    pub rolesw: f64,
    pub ampi: f64,
}

/// Rounds through the 2-decimal text form so export and parse agree exactly.
pub fn round2(x: f64) -> f64 {
    format!("{x:.2}").parse().expect("formatted float parses")
}

impl AggregateRow {
    pub fn from_runs(cfg: &RunConfig, runs: &[RunResult]) -> Self {
        let n = runs.len().max(1) as f64;
        let mean = |f: &dyn Fn(&RunResult) -> f64| round2(runs.iter().map(f).sum::<f64>() / n);
        AggregateRow {
            scenario: cfg.scenario.clone(),
            routing: cfg.routing.to_string().to_ascii_lowercase(),
            leadership: cfg.leadership.to_string(),
            switching: switch_label(cfg.switching).into(),
            memory: cfg.memory.to_string().to_ascii_lowercase(),
            consensus: switch_label(cfg.consensus.enabled).into(),
            protocols: cfg.protocols.to_string().to_ascii_lowercase(),
            time: mean(&|r| r.metrics.time_t as f64),
            msgs: mean(&|r| r.metrics.msgs_m as f64),
            failures: mean(&|r| r.metrics.failures.f_total as f64),
            n_asset: mean(&|r| r.metrics.failures.n_asset as f64),
            n_viol: mean(&|r| r.metrics.failures.n_viol as f64),
            n_miss: mean(&|r| r.metrics.failures.n_miss as f64),
            crosslayer: mean(&|r| r.metrics.cross_c),
            rolesw: mean(&|r| r.metrics.switches_s as f64),
            ampi: mean(&|r| r.ampi),
        }
    }
}

#[derive(Debug)]
pub struct LevelResult {
    pub label: String,
    pub outcome: Result<LevelRuns, String>,
}

#[derive(Debug)]
pub struct LevelRuns {
    pub row: AggregateRow,
    pub runs: Vec<RunResult>,
}

#[derive(Debug, Default)]
pub struct BatchReport {
    pub levels: Vec<LevelResult>,
}

impl BatchReport {
    pub fn rows(&self) -> Vec<AggregateRow> {
        self.completed().map(|l| l.row.clone()).collect()
    }

    pub fn completed(&self) -> impl Iterator<Item = &LevelRuns> {
        self.levels.iter().filter_map(|l| l.outcome.as_ref().ok())
    }

    pub fn diagnostics(&self) -> Vec<(String, String)> {
        self.levels
            .iter()
            .filter_map(|l| l.outcome.as_ref().err().map(|e| (l.label.clone(), e.clone())))
            .collect()
    }

    pub fn extend(&mut self, other: BatchReport) {
        self.levels.extend(other.levels);
    }
}

fn execute<T, F>(jobs: usize, items: Vec<T>, f: F) -> Result<Vec<Result<RunResult, EngineError>>, RunnerError>
where
    T: Send + Sync,
    F: Fn(&T) -> Result<RunResult, EngineError> + Send + Sync,
{
    if jobs <= 1 {
        return Ok(items.iter().map(f).collect());
    }
    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs).build().map_err(|e| RunnerError::Pool(e.to_string()))?;
    Ok(pool.install(|| items.par_iter().map(f).collect()))
}

/// Runs every level × repetition. Output order is (level, run index)
/// regardless of `jobs`.
pub fn run_batch(world: &World, spec: &SweepSpec, jobs: usize) -> Result<BatchReport, RunnerError> {
    spec.validate()?;
    let levels = spec.level_configs();
    let seeds: Vec<u64> = spec.seeds().collect();
    let mut work = Vec::new();
    for (li, (_, cfg)) in levels.iter().enumerate() {
        if let Ok(cfg) = cfg {
            for &seed in &seeds {
                work.push((li, RunConfig { seed, ..cfg.clone() }));
            }
        }
    }
    let results = execute(jobs, work.clone(), |(_, cfg)| run_in(world, cfg))?;

    let mut per_level: Vec<Vec<Result<RunResult, EngineError>>> = levels.iter().map(|_| Vec::new()).collect();
    for ((li, _), r) in work.into_iter().zip(results) {
        per_level[li].push(r);
    }
    let mut report = BatchReport::default();
    for ((label, cfg), runs) in levels.into_iter().zip(per_level) {
        let outcome = match cfg {
            Err(e) => Err(e.to_string()),
            Ok(cfg) => match runs.into_iter().collect::<Result<Vec<_>, _>>() {
                Ok(runs) => Ok(LevelRuns { row: AggregateRow::from_runs(&cfg, &runs), runs }),
                Err(e) => Err(e.to_string()),
            },
        };
        report.levels.push(LevelResult { label, outcome });
    }
    Ok(report)
}

/// Every catalog scenario under `base`, one level per scenario.
pub fn run_suite(world: &World, base: &RunConfig, repetitions: u32, seed_base: u64, jobs: usize) -> Result<BatchReport, RunnerError> {
    let mut report = BatchReport::default();
    for id in world.catalog.ids() {
        let spec = SweepSpec::single(RunConfig { scenario: id.to_string(), ..base.clone() }, repetitions, seed_base);
        let mut part = run_batch(world, &spec, jobs)?;
        for l in &mut part.levels {
            l.label = id.to_string();
        }
        report.extend(part);
    }
    Ok(report)
}

#[derive(Serialize)]
struct CsvRow<'a> {
    scenario: &'a str,
    routing: &'a str,
    leadership: &'a str,
    switching: &'a str,
    memory: &'a str,
    consensus: &'a str,
    protocols: &'a str,
    time: String,
    msgs: String,
    failures: String,
    n_asset: String,
    n_viol: String,
    n_miss: String,
    crosslayer: String,
    rolesw: String,
    ampi: String,
}

impl<'a> From<&'a AggregateRow> for CsvRow<'a> {
    fn from(r: &'a AggregateRow) -> Self {
        let f = |x: f64| format!("{x:.2}");
        CsvRow {
            scenario: &r.scenario,
            routing: &r.routing,
            leadership: &r.leadership,
            switching: &r.switching,
            memory: &r.memory,
            consensus: &r.consensus,
            protocols: &r.protocols,
            time: f(r.time),
            msgs: f(r.msgs),
            failures: f(r.failures),
            n_asset: f(r.n_asset),
            n_viol: f(r.n_viol),
            n_miss: f(r.n_miss),
            crosslayer: f(r.crosslayer),
            rolesw: f(r.rolesw),
            ampi: f(r.ampi),
        }
    }
}

pub fn csv_string(rows: &[AggregateRow]) -> Result<String, RunnerError> {
    if rows.is_empty() {
        return Err(RunnerError::EmptyInput);
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(CsvRow::from(r))?;
    }
    let bytes = w.into_inner().map_err(|e| RunnerError::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn export_csv(rows: &[AggregateRow], path: &Path) -> Result<(), RunnerError> {
    let text = csv_string(rows)?;
    fs::write(path, text)?;
    Ok(())
}

pub fn parse_csv(text: &str) -> Result<Vec<AggregateRow>, RunnerError> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    Ok(r.deserialize().collect::<Result<Vec<AggregateRow>, _>>()?)
}

#[derive(Serialize)]
struct RunRow<'a> {
    run_id: &'a str,
    scenario: &'a str,
    seed: u64,
    leader: &'a str,
    time: u64,
    msgs: u64,
    n_cross: u64,
    crosslayer: String,
    failures: u64,
    n_asset: u64,
    n_viol: u64,
    n_miss: u64,
    rolesw: u64,
    ampi: String,
    digest: String,
}

fn run_id(level: &str, index: usize, r: &RunResult) -> String {
    let clean: String = level.chars().map(|c| if c.is_ascii_alphanumeric() || c == '_' { c } else { '-' }).collect();
    format!("{}__{clean}__{index:03}", r.config.scenario)
}

/// Writes `summary.csv`, `runs.csv` and per-run logs and reports under `dir`.
pub fn write_outputs(report: &BatchReport, dir: &Path) -> Result<(), RunnerError> {
    let runs_dir = dir.join("runs");
    fs::create_dir_all(&runs_dir)?;
    export_csv(&report.rows(), &dir.join("summary.csv"))?;
    let mut w = csv::Writer::from_path(dir.join("runs.csv"))?;
    for level in &report.levels {
        let Ok(done) = &level.outcome else { continue };
        for (i, r) in done.runs.iter().enumerate() {
            let id = run_id(&level.label, i, r);
            fs::write(runs_dir.join(format!("{id}.log")), r.log_jsonl())?;
            fs::write(runs_dir.join(format!("{id}.report.txt")), r.report.render())?;
            let m = &r.metrics;
            w.serialize(RunRow {
                run_id: &id,
                scenario: &r.config.scenario,
                seed: r.config.seed,
                leader: r.leader.as_str(),
                time: m.time_t,
                msgs: m.msgs_m,
                n_cross: m.n_cross,
                crosslayer: format!("{:.4}", m.cross_c),
                failures: m.failures.f_total,
                n_asset: m.failures.n_asset,
                n_viol: m.failures.n_viol,
                n_miss: m.failures.n_miss,
                rolesw: m.switches_s,
                ampi: format!("{:.4}", r.ampi),
                digest: r.digest(),
            })?;
        }
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::routing::RoutingPolicy;

    fn world() -> World {
        World::default()
    }

    #[test]
    fn routing_sweep_has_zero_cross_under_strict() {
        let base = RunConfig::for_scenario("ScienceExploration");
        let rep = run_batch(&world(), &SweepSpec::over(base, Factor::Routing, 20, 1), 1).unwrap();
        let rows = rep.rows();
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[0].routing, "strict");
        assert_eq!(rows[0].crosslayer, 0.0);
        assert!(rows[1].crosslayer > 0.0);
        assert!(rows.iter().all(|r| rep.levels.len() == 2 && r.scenario == "ScienceExploration"));
    }

    #[test]
    fn single_run_aggregate_equals_run() {
        let rep = run_batch(&world(), &SweepSpec::single(RunConfig::default(), 1, 9), 1).unwrap();
        let done = rep.completed().next().unwrap();
        let (row, r) = (&done.row, &done.runs[0]);
        assert_eq!(row.time, r.metrics.time_t as f64);
        assert_eq!(row.msgs, r.metrics.msgs_m as f64);
        assert_eq!(row.failures, r.metrics.failures.f_total as f64);
        assert_eq!(row.rolesw, r.metrics.switches_s as f64);
        assert!((row.ampi - r.ampi).abs() <= 0.005);
    }

    #[test]
    fn parallel_matches_sequential_and_repeats() {
        let spec = SweepSpec::over(RunConfig { outage_p: 0.2, ..RunConfig::default() }, Factor::Memory, 6, 100);
        let a = csv_string(&run_batch(&world(), &spec, 1).unwrap().rows()).unwrap();
        let b = csv_string(&run_batch(&world(), &spec, 4).unwrap().rows()).unwrap();
        let c = csv_string(&run_batch(&world(), &spec, 1).unwrap().rows()).unwrap();
        assert_eq!(a, b);
        assert_eq!(a, c);
    }

    #[test]
    fn bad_level_reports_and_others_emit() {
        let mut spec = SweepSpec::over(RunConfig::default(), Factor::Routing, 2, 0);
        spec.levels.push("diagonal".into());
        let rep = run_batch(&world(), &spec, 1).unwrap();
        assert_eq!(rep.rows().len(), 2);
        assert_eq!(rep.diagnostics().len(), 1);
        let spec = SweepSpec::single(RunConfig::for_scenario("Missing"), 1, 0);
        let rep = run_batch(&world(), &spec, 1).unwrap();
        assert!(rep.rows().is_empty());
        assert!(rep.diagnostics()[0].1.contains("Missing"));
    }

    #[test]
    fn csv_format_and_round_trip() {
        let mut row = AggregateRow::from_runs(&RunConfig::default(), &[]);
        row.ampi = 0.519;
        let text = csv_string(std::slice::from_ref(&row)).unwrap();
        assert_eq!(text.lines().count(), 2);
        assert_eq!(
            text.lines().next().unwrap(),
            "scenario,routing,leadership,switching,memory,consensus,protocols,time,msgs,failures,n_asset,n_viol,n_miss,crosslayer,rolesw,ampi"
        );
        assert!(text.lines().nth(1).unwrap().ends_with(",0.52"));
        assert!(matches!(csv_string(&[]), Err(RunnerError::EmptyInput)));

        let rep = run_batch(&world(), &SweepSpec::over(RunConfig { outage_p: 0.3, ..RunConfig::default() }, Factor::Switching, 7, 3), 1).unwrap();
        let rows = rep.rows();
        assert_eq!(parse_csv(&csv_string(&rows).unwrap()).unwrap(), rows);
    }

    #[test]
    fn factor_parsing_and_levels() {
        for f in Factor::ALL {
            assert_eq!(f.name().parse::<Factor>().unwrap(), f);
            for l in f.levels() {
                f.apply(&RunConfig::default(), l).unwrap();
            }
        }
        let cfg = Factor::Routing.apply(&RunConfig::default(), "crosslayer").unwrap();
        assert_eq!(cfg.routing, RoutingPolicy::CrossLayer);
        assert!("speed".parse::<Factor>().is_err());
        assert!(SweepSpec::single(RunConfig::default(), 0, 0).validate().is_err());
    }

    #[test]
    fn outputs_written() {
        let dir = tempfile::tempdir().unwrap();
        let rep = run_batch(&world(), &SweepSpec::single(RunConfig::default(), 2, 0), 1).unwrap();
        write_outputs(&rep, dir.path()).unwrap();
        assert!(dir.path().join("summary.csv").exists());
        let runs = fs::read_to_string(dir.path().join("runs.csv")).unwrap();
        assert_eq!(runs.lines().count(), 3);
        assert_eq!(fs::read_dir(dir.path().join("runs")).unwrap().count(), 4);
    }
}
