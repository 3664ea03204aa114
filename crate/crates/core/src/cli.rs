//! The `cmdp` command line.
//!
//! Exit codes: 0 on success, 1 when a queried objective is not satisfied
//! (a "no" decision or a failed verification), 2 on input errors.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use crate::bench::{run_bench, write_csv, BenchConfig};
use crate::error::{Error, Result};
use crate::explicit::{mec_decomposition, unfold_with_limit, DEFAULT_NODE_LIMIT};
use crate::ext::ExtNat;
use crate::gen::{gen_grid, gen_random, gen_streets, Cell, GridSpec, RandomSpec, RoverControl, StreetSpec};
use crate::model::{validate, Cmdp, Instance, StateId};
use crate::solvers::{buchi, positive_reachability, safe, safety_selector, Diagnostic, SemanticsMode, ValueVector};
use crate::strategy::{export_strategy, import_strategy, induced_chain, simulate, verify, CounterSelector, Objective};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NO: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "cmdp", version, about = "Controller synthesis for consumption MDPs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a model file against the structural rules
    Validate { model: PathBuf },
    /// Compute minimal initial loads and a strategy
    Solve(SolveArgs),
    /// Sample one run of a strategy
    Simulate(SimulateArgs),
    /// Check a strategy exactly on its induced Markov chain
    Verify(VerifyArgs),
    /// Unfold resource levels into the state space
    Unfold {
        model: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_NODE_LIMIT)]
        node_limit: u64,
    },
    /// Maximal end components of the unfolding
    Mec {
        model: PathBuf,
        #[arg(long, default_value_t = DEFAULT_NODE_LIMIT)]
        node_limit: u64,
    },
    /// Generate a benchmark model
    #[command(subcommand)]
    Gen(GenCommand),
    /// Run the capacity-scaling benchmark and emit CSV
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ObjectiveArg {
    Safe,
    Posreach,
    Buchi,
}

impl From<ObjectiveArg> for Objective {
    fn from(o: ObjectiveArg) -> Objective {
        match o {
            ObjectiveArg::Safe => Objective::Safe,
            ObjectiveArg::Posreach => Objective::PositiveReach,
            ObjectiveArg::Buchi => Objective::BuchiAs,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SemanticsArg {
    Truncated,
    Literal,
}

impl From<SemanticsArg> for SemanticsMode {
    fn from(s: SemanticsArg) -> SemanticsMode {
        match s {
            SemanticsArg::Truncated => SemanticsMode::Truncated,
            SemanticsArg::Literal => SemanticsMode::Literal,
        }
    }
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    pub model: PathBuf,
    #[arg(long, value_enum)]
    pub objective: ObjectiveArg,
    /// Comma-separated target states; defaults to the targets in the file
    #[arg(long, value_delimiter = ',')]
    pub targets: Option<Vec<String>>,
    #[arg(long, value_enum, default_value = "truncated")]
    pub semantics: SemanticsArg,
    /// Decide whether this load suffices in `--state`
    #[arg(long, requires = "state")]
    pub initial_load: Option<u64>,
    #[arg(long, requires = "initial_load")]
    pub state: Option<String>,
    #[arg(long)]
    pub strategy_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    pub model: PathBuf,
    pub strategy: PathBuf,
    #[arg(long)]
    pub state: String,
    /// Initial load; defaults to the strategy's initial load at the state
    #[arg(long)]
    pub load: Option<u64>,
    #[arg(long, default_value_t = 100)]
    pub steps: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    pub model: PathBuf,
    pub strategy: PathBuf,
    #[arg(long, value_enum)]
    pub objective: ObjectiveArg,
    #[arg(long, value_delimiter = ',')]
    pub targets: Option<Vec<String>>,
    /// Only check this state (default: every state with a finite initial load)
    #[arg(long)]
    pub state: Option<String>,
    #[arg(long, requires = "state")]
    pub load: Option<u64>,
}

#[derive(Debug, Subcommand)]
pub enum GenCommand {
    /// Helicopter and rover on an n x n grid
    Grid {
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, default_value_t = 0.2)]
        slip: f64,
        #[arg(long, default_value_t = 1)]
        move_cost: u64,
        #[arg(long, default_value_t = 1)]
        hover_cost: u64,
        #[arg(long, default_value_t = 10)]
        capacity: u64,
        /// Helicopter target cells as `x:y`, comma separated
        #[arg(long, value_delimiter = ',', value_parser = parse_cell)]
        targets: Vec<Cell>,
        /// The rover follows a fixed sweep instead of being controlled
        #[arg(long)]
        patrol: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Street network with stochastic consumption on every edge
    Streets {
        #[arg(long, default_value_t = 3)]
        rows: usize,
        #[arg(long, default_value_t = 3)]
        cols: usize,
        #[arg(long, default_value_t = 40)]
        capacity: u64,
        /// Consumption outcomes as `cost:prob`, comma separated
        #[arg(long, value_delimiter = ',', value_parser = parse_outcome, default_value = "3:0.2,5:0.6,8:0.2")]
        outcomes: Vec<(u64, f64)>,
        #[arg(long, default_value_t = 2)]
        jitter: u64,
        #[arg(long, value_delimiter = ',', value_parser = parse_cell, default_value = "0:0")]
        charging: Vec<Cell>,
        #[arg(long, value_delimiter = ',', value_parser = parse_cell, default_value = "2:2")]
        targets: Vec<Cell>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Random decreasing model
    Random {
        #[arg(long, default_value_t = 5)]
        states: usize,
        #[arg(long, default_value_t = 2)]
        actions: usize,
        #[arg(long, default_value_t = 0.4)]
        reload_fraction: f64,
        #[arg(long, default_value_t = 10)]
        cap_min: u64,
        #[arg(long, default_value_t = 10)]
        cap_max: u64,
        #[arg(long, default_value_t = 4)]
        max_consumption: u64,
        #[arg(long, default_value_t = 3)]
        max_support: usize,
        #[arg(long, default_value_t = 1)]
        targets: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long, value_delimiter = ',', default_value = "10,20,40,80")]
    pub caps: Vec<u64>,
    #[arg(long, value_delimiter = ',', default_value = "3")]
    pub grid_n: Vec<usize>,
    #[arg(long, default_value_t = 5)]
    pub repeats: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub patrol: bool,
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

fn parse_cell(s: &str) -> std::result::Result<Cell, String> {
    let (x, y) = s.split_once(':').ok_or_else(|| format!("expected `x:y`, got `{s}`"))?;
    let x = x.trim().parse().map_err(|e| format!("bad column in `{s}`: {e}"))?;
    let y = y.trim().parse().map_err(|e| format!("bad row in `{s}`: {e}"))?;
    Ok((x, y))
}

fn parse_outcome(s: &str) -> std::result::Result<(u64, f64), String> {
    let (c, p) = s.split_once(':').ok_or_else(|| format!("expected `cost:prob`, got `{s}`"))?;
    let c = c.trim().parse().map_err(|e| format!("bad cost in `{s}`: {e}"))?;
    let p = p.trim().parse().map_err(|e| format!("bad probability in `{s}`: {e}"))?;
    Ok((c, p))
}

/// Parse `args` (including the program name) and run the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(cli.command, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_INPUT
        }
    }
}

fn execute(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Validate { model } => cmd_validate(&model, out),
        Command::Solve(args) => cmd_solve(&args, out, err),
        Command::Simulate(args) => cmd_simulate(&args, out, err),
        Command::Verify(args) => cmd_verify(&args, out),
        Command::Unfold { model, out: path, node_limit } => cmd_unfold(&model, path.as_deref(), node_limit, out),
        Command::Mec { model, node_limit } => cmd_mec(&model, node_limit, out),
        Command::Gen(g) => cmd_gen(g, out, err),
        Command::Bench(args) => cmd_bench(&args, out, err),
    }
}

fn load_valid(path: &Path) -> Result<Instance> {
    let instance = Instance::load(path)?;
    let report = validate(&instance.model);
    if let Some(v) = report.violations.first() {
        return Err(Error::InvalidModel(format!("{v} ({} violation(s) in total)", report.violations.len())));
    }
    Ok(instance)
}

fn resolve_targets(instance: &Instance, targets: &Option<Vec<String>>) -> Result<Vec<StateId>> {
    match targets {
        Some(names) => instance.model.require_states(names),
        None => Ok(instance.targets.clone().unwrap_or_default()),
    }
}

fn print_json(out: &mut dyn Write, value: &Value) -> Result<()> {
    writeln!(out, "{value}")?;
    Ok(())
}

pub fn cmd_validate(path: &Path, out: &mut dyn Write) -> Result<i32> {
    let instance = Instance::load(path)?;
    let report = validate(&instance.model);
    if report.is_valid() {
        writeln!(out, "valid")?;
        return Ok(EXIT_OK);
    }
    for v in &report.violations {
        writeln!(out, "{v}")?;
    }
    Ok(EXIT_INPUT)
}

/// Values and a selector for the chosen objective.
pub fn solve_objective(
    model: &Cmdp,
    targets: &[StateId],
    objective: ObjectiveArg,
    mode: SemanticsMode,
) -> Result<(ValueVector, CounterSelector, Vec<Diagnostic>)> {
    Ok(match objective {
        ObjectiveArg::Safe => {
            let values = safe(model)?.values;
            let (selector, missing) = safety_selector(model, &values, mode);
            let diags = missing.into_iter().map(|state| Diagnostic::EmptySafeActions { state }).collect();
            (values, selector, diags)
        }
        ObjectiveArg::Posreach => {
            let r = positive_reachability(model, targets, mode)?;
            (r.values, r.selector, r.diagnostics)
        }
        ObjectiveArg::Buchi => {
            let r = buchi(model, targets, mode)?;
            (r.values, r.selector, r.diagnostics)
        }
    })
}

fn cmd_solve(args: &SolveArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let instance = load_valid(&args.model)?;
    let model = &instance.model;
    let targets = resolve_targets(&instance, &args.targets)?;
    let (values, mut selector, diagnostics) = solve_objective(model, &targets, args.objective, args.semantics.into())?;
    for Diagnostic::EmptySafeActions { state } in diagnostics {
        writeln!(err, "warning: no safe action in state `{}` under literal semantics", model.state_name(state))?;
    }
    print_json(out, &values.to_json(model))?;

    if let (Some(d), Some(name)) = (args.initial_load, &args.state) {
        let s = model.require_state(name)?;
        if d > model.capacity() {
            return Err(Error::LoadOutOfRange { load: d, capacity: model.capacity() });
        }
        if values[s].le_u64(d) {
            writeln!(out, "yes")?;
            selector.set_initial(s, Some(ExtNat::Fin(d)));
        } else {
            writeln!(out, "no")?;
            return Ok(EXIT_NO);
        }
    }
    if let Some(path) = &args.strategy_out {
        fs::write(path, export_strategy(model, &selector))?;
    }
    Ok(EXIT_OK)
}

fn cmd_simulate(args: &SimulateArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let instance = load_valid(&args.model)?;
    let model = &instance.model;
    let selector = import_strategy(model, &fs::read_to_string(&args.strategy)?)?;
    let s0 = model.require_state(&args.state)?;
    let load = match args.load {
        Some(d) => d,
        None => match selector.initial(s0) {
            Some(ExtNat::Fin(d)) => d,
            _ => {
                return Err(Error::InvalidStrategy(format!("no finite initial load for `{}`; pass --load", args.state)))
            }
        },
    };
    writeln!(err, "# seed={}", args.seed)?;
    let trace = simulate(model, &selector, s0, load, args.steps, args.seed)?;
    let mut doc = trace.to_json(model);
    doc["seed"] = json!(args.seed);
    print_json(out, &doc)?;
    Ok(EXIT_OK)
}

fn cmd_verify(args: &VerifyArgs, out: &mut dyn Write) -> Result<i32> {
    let instance = load_valid(&args.model)?;
    let model = &instance.model;
    let targets = resolve_targets(&instance, &args.targets)?;
    let selector = import_strategy(model, &fs::read_to_string(&args.strategy)?)?;
    let objective: Objective = args.objective.into();

    let starts: Vec<(StateId, u64)> = match &args.state {
        Some(name) => {
            let s = model.require_state(name)?;
            let d = match (args.load, selector.initial(s)) {
                (Some(d), _) => d,
                (None, Some(ExtNat::Fin(d))) => d,
                _ => return Err(Error::InvalidStrategy(format!("no finite initial load for `{name}`; pass --load"))),
            };
            vec![(s, d)]
        }
        None => model
            .states()
            .filter_map(|s| match selector.initial(s) {
                Some(ExtNat::Fin(d)) if d <= model.capacity() => Some((s, d)),
                _ => None,
            })
            .collect(),
    };

    let mut report = Map::new();
    let mut all = true;
    for (s, d) in starts {
        let chain = induced_chain(model, &selector, s, d)?;
        let v = verify(&chain, &targets, objective);
        all &= v.holds;
        report.insert(
            model.state_name(s).to_owned(),
            json!({
                "load": d,
                "holds": v.holds,
                "chain_nodes": chain.len(),
                "sink_reachable": v.sink_reachable,
                "target_reachable": v.target_reachable,
            }),
        );
    }
    print_json(out, &json!({ "objective": objective.to_string(), "all_hold": all, "states": report }))?;
    Ok(if all { EXIT_OK } else { EXIT_NO })
}

fn cmd_unfold(path: &Path, dump: Option<&Path>, limit: u64, out: &mut dyn Write) -> Result<i32> {
    let instance = load_valid(path)?;
    let x = unfold_with_limit(&instance.model, limit)?;
    print_json(out, &json!({ "nodes": x.num_nodes(), "choices": x.num_choices() }))?;
    if let Some(p) = dump {
        fs::write(p, serde_json::to_string_pretty(&x.to_doc(&instance.model))?)?;
    }
    Ok(EXIT_OK)
}

fn cmd_mec(path: &Path, limit: u64, out: &mut dyn Write) -> Result<i32> {
    let instance = load_valid(path)?;
    let x = unfold_with_limit(&instance.model, limit)?;
    let mecs = mec_decomposition(&x);
    let list: Vec<Value> = mecs
        .iter()
        .map(|m| Value::Array(m.nodes.iter().map(|&v| json!(x.node_name(&instance.model, v))).collect()))
        .collect();
    print_json(out, &json!({ "count": mecs.len(), "mecs": list }))?;
    Ok(EXIT_OK)
}

fn emit(instance: &Instance, path: Option<&Path>, out: &mut dyn Write) -> Result<()> {
    let text = instance.to_json_string();
    match path {
        Some(p) => fs::write(p, text)?,
        None => writeln!(out, "{text}")?,
    }
    Ok(())
}

fn cmd_gen(command: GenCommand, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    match command {
        GenCommand::Grid { n, slip, move_cost, hover_cost, capacity, targets, patrol, seed, out: path } => {
            writeln!(err, "# seed={seed}")?;
            let rover = if patrol { RoverControl::Patrol } else { RoverControl::Joint };
            let spec = GridSpec { n, slip, move_cost, hover_cost, capacity, targets, seed, rover };
            emit(&gen_grid(&spec)?, path.as_deref(), out)?;
        }
        GenCommand::Streets { rows, cols, capacity, outcomes, jitter, charging, targets, seed, out: path } => {
            writeln!(err, "# seed={seed}")?;
            let spec = StreetSpec { rows, cols, capacity, outcomes, jitter, charging, targets, seed };
            emit(&gen_streets(&spec)?, path.as_deref(), out)?;
        }
        GenCommand::Random {
            states,
            actions,
            reload_fraction,
            cap_min,
            cap_max,
            max_consumption,
            max_support,
            targets,
            seed,
            out: path,
        } => {
            writeln!(err, "# seed={seed}")?;
            let spec = RandomSpec {
                states,
                actions,
                reload_fraction,
                capacity: (cap_min, cap_max),
                max_consumption,
                max_support,
                targets,
                seed,
            };
            emit(&gen_random(&spec)?, path.as_deref(), out)?;
        }
    }
    Ok(EXIT_OK)
}

fn cmd_bench(args: &BenchArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    writeln!(err, "# seed={} repeats={}", args.seed, args.repeats)?;
    let config = BenchConfig {
        caps: args.caps.clone(),
        grid_n: args.grid_n.clone(),
        repeats: args.repeats,
        seed: args.seed,
        rover: if args.patrol { RoverControl::Patrol } else { RoverControl::Joint },
    };
    let records = run_bench(&config)?;
    match &args.csv {
        Some(p) => write_csv(&records, fs::File::create(p)?)?,
        None => write_csv(&records, out)?,
    }
    Ok(EXIT_OK)
}
