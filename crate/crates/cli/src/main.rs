use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::Deserialize;

use marsops_core::consensus::ConsensusConfig;
use marsops_core::engine::{run_in, RunConfig, World};
use marsops_core::leadership::LeadershipMode;
use marsops_core::memory::MemoryMode;
use marsops_core::metrics::{compute_ampi, AmpiConfig, MetricPoint};
use marsops_core::protocols::{default_lexicons, ProtocolMode};
use marsops_core::roster::{build_default_roster, AgentId, Roster};
use marsops_core::routing::{RouteContext, RoutingPolicy, Whitelist};
use marsops_core::runner::{csv_string, parse_switch, run_batch, run_suite, write_outputs, BatchReport, Factor, SweepSpec};
use marsops_core::scenarios::ScenarioCatalog;

#[derive(Parser)]
#[command(name = "marsops", version, about = "Mars base operations simulator and benchmark runner")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario, optionally repeated.
    Run(RunArgs),
    /// Vary one factor over its levels.
    Sweep(SweepArgs),
    /// Run every scenario in the catalog.
    Suite(RunArgs),
    /// List the scenario catalog.
    Scenarios(WorldArgs),
    /// Compute the performance index for given metric means.
    Ampi(AmpiArgs),
    /// Show the path between two agents.
    Route(RouteArgs),
}

#[derive(Args, Clone, Default)]
struct WorldArgs {
    /// Roster override (JSON).
    #[arg(long)]
    roster: Option<PathBuf>,
    /// Whitelist override ("SRC -> DST" per line).
    #[arg(long)]
    whitelist: Option<PathBuf>,
    /// Lexicon overrides (CSV: concept,group,surface).
    #[arg(long)]
    lexicons: Option<PathBuf>,
    /// Additional scenarios (JSON, one script or a list).
    #[arg(long)]
    scenarios: Option<PathBuf>,
}

/// Keys accepted by both the command line and the config file.
#[derive(Args, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct Settings {
    #[arg(long, value_parser = ["strict", "crosslayer"])]
    routing: Option<String>,
    #[arg(long, value_parser = ["single", "functional"])]
    leadership: Option<String>,
    #[arg(long = "role_switching", alias = "role-switching", value_parser = ["on", "off"])]
    role_switching: Option<String>,
    #[arg(long, value_parser = ["off", "basic", "shared"])]
    memory: Option<String>,
    #[arg(long, value_parser = ["off", "on"])]
    consensus: Option<String>,
    #[arg(long = "consensus_rounds", alias = "consensus-rounds")]
    consensus_rounds: Option<u32>,
    #[arg(long = "consensus_quorum", alias = "consensus-quorum")]
    consensus_quorum: Option<f64>,
    #[arg(long, value_parser = ["off", "hetero"])]
    protocols: Option<String>,
    #[arg(long = "outage_rate", alias = "outage-rate")]
    outage_rate: Option<f64>,
    #[arg(long)]
    scenario: Option<String>,
    #[arg(long)]
    runs: Option<u32>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long = "ampi_include_crosslayer", alias = "ampi-include-crosslayer", num_args = 0..=1, default_missing_value = "true")]
    ampi_include_crosslayer: Option<bool>,
    /// Execute staged unsafe actions and misreads.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    faults: Option<bool>,
    /// Parallel runs.
    #[arg(long)]
    jobs: Option<usize>,
}

impl Settings {
    fn or(self, other: Settings) -> Settings {
        Settings {
            routing: self.routing.or(other.routing),
            leadership: self.leadership.or(other.leadership),
            role_switching: self.role_switching.or(other.role_switching),
            memory: self.memory.or(other.memory),
            consensus: self.consensus.or(other.consensus),
            consensus_rounds: self.consensus_rounds.or(other.consensus_rounds),
            consensus_quorum: self.consensus_quorum.or(other.consensus_quorum),
            protocols: self.protocols.or(other.protocols),
            outage_rate: self.outage_rate.or(other.outage_rate),
            scenario: self.scenario.or(other.scenario),
            runs: self.runs.or(other.runs),
            seed: self.seed.or(other.seed),
            ampi_include_crosslayer: self.ampi_include_crosslayer.or(other.ampi_include_crosslayer),
            faults: self.faults.or(other.faults),
            jobs: self.jobs.or(other.jobs),
        }
    }

    fn config(&self) -> Result<RunConfig> {
        let mut cfg = RunConfig::default();
        if let Some(s) = &self.scenario {
            cfg.scenario = s.clone();
        }
        if let Some(v) = &self.routing {
            cfg.routing = v.parse::<RoutingPolicy>().map_err(anyhow::Error::msg)?;
        }
        if let Some(v) = &self.leadership {
            cfg.leadership = v.parse::<LeadershipMode>().map_err(anyhow::Error::msg)?;
        }
        if let Some(v) = &self.role_switching {
            cfg.switching = parse_switch(v).with_context(|| format!("role_switching must be on or off, got `{v}`"))?;
        }
        if let Some(v) = &self.memory {
            cfg.memory = v.parse::<MemoryMode>().map_err(anyhow::Error::msg)?;
        }
        let mut consensus = ConsensusConfig::default();
        if let Some(v) = &self.consensus {
            consensus.enabled = parse_switch(v).with_context(|| format!("consensus must be on or off, got `{v}`"))?;
        }
        if let Some(r) = self.consensus_rounds {
            consensus.rounds = r;
        }
        if let Some(q) = self.consensus_quorum {
            consensus.quorum = q;
        }
        cfg.consensus = consensus;
        if let Some(v) = &self.protocols {
            cfg.protocols = v.parse::<ProtocolMode>().map_err(anyhow::Error::msg)?;
        }
        if let Some(p) = self.outage_rate {
            cfg.outage_p = p;
        }
        if let Some(s) = self.seed {
            cfg.seed = s;
        }
        cfg.ampi = AmpiConfig { include_crosslayer: self.ampi_include_crosslayer.unwrap_or(false), ..AmpiConfig::default() };
        cfg.faults = self.faults.unwrap_or(false);
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Args, Clone)]
struct RunArgs {
    #[command(flatten)]
    settings: Settings,
    #[command(flatten)]
    world: WorldArgs,
    /// TOML file with the same keys as the flags; flags win.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Directory for summary.csv, runs.csv and per-run logs and reports.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl RunArgs {
    fn resolve(&self) -> Result<(Settings, RunConfig)> {
        let file = match &self.config {
            Some(path) => {
                let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
                toml::from_str::<Settings>(&text).with_context(|| format!("parsing {}", path.display()))?
            }
            None => Settings::default(),
        };
        let merged = self.settings.clone().or(file);
        let cfg = merged.config()?;
        Ok((merged, cfg))
    }
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    run: RunArgs,
    /// routing, leadership, role_switching, memory, consensus or protocols.
    #[arg(long)]
    factor: String,
    /// Comma-separated levels; defaults to every level of the factor.
    #[arg(long, value_delimiter = ',')]
    levels: Vec<String>,
}

#[derive(Args)]
struct AmpiArgs {
    #[arg(long)]
    time: f64,
    #[arg(long)]
    msgs: f64,
    #[arg(long)]
    failures: f64,
    #[arg(long)]
    rolesw: f64,
    #[arg(long, default_value_t = 0.0)]
    crosslayer: f64,
    #[arg(long = "ampi_include_crosslayer", alias = "ampi-include-crosslayer")]
    include_crosslayer: bool,
    /// Weights for time, messages, cross-layer, failures, switches.
    #[arg(long, value_delimiter = ',', num_args = 5)]
    weights: Option<Vec<f64>>,
}

#[derive(Args)]
struct RouteArgs {
    #[arg(long)]
    from: String,
    #[arg(long)]
    to: String,
    #[arg(long, default_value = "strict", value_parser = ["strict", "crosslayer"])]
    routing: String,
    /// Use the emergency-phase hub rule.
    #[arg(long)]
    emergency: bool,
    #[command(flatten)]
    world: WorldArgs,
}

fn load_world(args: &WorldArgs) -> Result<World> {
    let roster = match &args.roster {
        Some(p) => Roster::load(p).with_context(|| format!("loading roster {}", p.display()))?,
        None => build_default_roster(),
    };
    let whitelist = match &args.whitelist {
        Some(p) => Whitelist::load(p).with_context(|| format!("loading whitelist {}", p.display()))?,
        None => Whitelist::default_table(),
    };
    let mut lexicons = default_lexicons();
    if let Some(p) = &args.lexicons {
        lexicons.load_overrides(p).with_context(|| format!("loading lexicons {}", p.display()))?;
    }
    let mut catalog = ScenarioCatalog::builtin();
    if let Some(p) = &args.scenarios {
        catalog.load_file(p, &roster).with_context(|| format!("loading scenarios {}", p.display()))?;
    }
    Ok(World::new(roster, whitelist, lexicons, catalog))
}

fn emit(report: &BatchReport, out: Option<&Path>) -> Result<()> {
    for (label, err) in report.diagnostics() {
        eprintln!("level {label} failed: {err}");
    }
    let rows = report.rows();
    if rows.is_empty() {
        bail!("no level completed");
    }
    print!("{}", csv_string(&rows)?);
    if let Some(dir) = out {
        write_outputs(report, dir).with_context(|| format!("writing outputs to {}", dir.display()))?;
        eprintln!("wrote {}", dir.display());
    }
    Ok(())
}

fn cmd_run(args: RunArgs) -> Result<()> {
    let world = load_world(&args.world)?;
    let (settings, cfg) = args.resolve()?;
    let runs = settings.runs.unwrap_or(1);
    if runs == 1 && args.out.is_none() {
        let r = run_in(&world, &cfg)?;
        let m = &r.metrics;
        println!("scenario   {}", cfg.scenario);
        println!("leader     {}", r.leader);
        println!("time       {}", m.time_t);
        println!("msgs       {}", m.msgs_m);
        println!("crosslayer {:.2}", m.cross_c);
        println!(
            "failures   {} (asset {}, violations {}, missed {})",
            m.failures.f_total, m.failures.n_asset, m.failures.n_viol, m.failures.n_miss
        );
        println!("rolesw     {}", m.switches_s);
        println!("ampi       {:.4}", r.ampi);
        println!("digest     {}", r.digest());
        return Ok(());
    }
    let spec = SweepSpec::single(cfg.clone(), runs, cfg.seed);
    let report = run_batch(&world, &spec, settings.jobs.unwrap_or(1))?;
    emit(&report, args.out.as_deref())
}

fn cmd_sweep(args: SweepArgs) -> Result<()> {
    let world = load_world(&args.run.world)?;
    let (settings, cfg) = args.run.resolve()?;
    let factor: Factor = args.factor.parse()?;
    let mut spec = SweepSpec::over(cfg.clone(), factor, settings.runs.unwrap_or(20), cfg.seed);
    if !args.levels.is_empty() {
        spec.levels = args.levels;
    }
    let report = run_batch(&world, &spec, settings.jobs.unwrap_or(1))?;
    emit(&report, args.run.out.as_deref())
}

fn cmd_suite(args: RunArgs) -> Result<()> {
    let world = load_world(&args.world)?;
    let (settings, cfg) = args.resolve()?;
    let report = run_suite(&world, &cfg, settings.runs.unwrap_or(20), cfg.seed, settings.jobs.unwrap_or(1))?;
    emit(&report, args.out.as_deref())
}

fn cmd_scenarios(args: WorldArgs) -> Result<()> {
    let world = load_world(&args)?;
    for s in world.catalog.scripts() {
        let assets: Vec<&str> = s.assets.iter().map(AgentId::as_str).collect();
        println!(
            "{:<22} {:<9} leaders {:<16} J={} assets {}{}",
            s.id,
            format!("{:?}", s.phase),
            s.leader_order.join(">"),
            s.j(),
            if assets.is_empty() { "-".to_string() } else { assets.join(",") },
            if s.consensus_hook.is_some() { " consensus" } else { "" }
        );
    }
    Ok(())
}

fn cmd_ampi(args: AmpiArgs) -> Result<()> {
    let mut cfg = AmpiConfig { include_crosslayer: args.include_crosslayer, ..AmpiConfig::default() };
    if let Some(w) = args.weights {
        cfg.weights = w.try_into().map_err(|_| anyhow::anyhow!("expected five weights"))?;
    }
    let p = MetricPoint { time: args.time, msgs: args.msgs, cross: args.crosslayer, failures: args.failures, switches: args.rolesw };
    println!("{:.4}", compute_ampi(&p, &cfg)?);
    Ok(())
}

fn cmd_route(args: RouteArgs) -> Result<()> {
    let world = load_world(&args.world)?;
    let policy: RoutingPolicy = args.routing.parse().map_err(anyhow::Error::msg)?;
    let mut ctx = RouteContext::new(&world.roster, &world.graph, &world.whitelist, policy);
    ctx.emergency = args.emergency;
    let (from, to) = (AgentId::new(args.from), AgentId::new(args.to));
    let path = ctx.route(&from, &to)?;
    let hops: Vec<String> = path.hops.iter().map(|h| format!("{} -> {}", h.from, h.to)).collect();
    println!("{:?} ({} hops{})", path.kind, path.hop_count(), if ctx.is_shortcut(&from, &to) { ", shortcut" } else { "" });
    for h in hops {
        println!("  {h}");
    }
    Ok(())
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Run(a) => cmd_run(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Suite(a) => cmd_suite(a),
        Command::Scenarios(a) => cmd_scenarios(a),
        Command::Ampi(a) => cmd_ampi(a),
        Command::Route(a) => cmd_route(a),
    }
}
