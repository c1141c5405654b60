//! Command-line front end. Every subcommand writes canonical JSON (sorted keys, integers
//! and `"p/q"` strings only) to stdout and diagnostics to stderr.

mod selftest;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use log::info;
use num_bigint::BigUint;
use serde_json::{json, Value as Json};

use crate::enumerate::{
    build_r_poset, consistent_ideals, count_maximal_minimizers, maximal_consistent_ideals, maximal_minimizers_via_r,
    FactoredCount,
};
use crate::error::{Error, Result};
use crate::kcore::{parse_rat, value_to_json, KVector, Rat, TableFunction, TableOracle, Value};
use crate::labeling::{persistent_report, stereo_instance, synthetic_pair, write_ppm, StereoPair, StereoParams};
use crate::netrep::{pip_from_network, verify_representation, GroupedNetwork};
use crate::oracle_builder::build_pip_via_oracle_with;
use crate::pip::{ideal_join, pip_from_json, pip_to_dot, pip_to_json, Payload, Pip};
use crate::potts::{build_pip_potts, PottsInstance, Relaxation, Route};

pub use selftest::{run_selftest, SelftestReport};

#[derive(Parser, Debug)]
#[command(name = "kpip", version, about = "Minimizer sets of k-submodular functions as posets with inconsistent pairs")]
pub struct Cli {
    /// Seed for generated data.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads (0 = one per core, 1 = sequential).
    #[arg(long, global = true, default_value_t = 0)]
    pub jobs: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Validate an input file (table, grouped network, Potts instance or PIP).
    Check { input: PathBuf },
    /// Build the canonical PIP of a minimizer set.
    BuildPip(BuildArgs),
    /// Stream minimizers, maximal minimizers, or count maximal minimizers.
    Enumerate(EnumerateArgs),
    /// Persistent labelings of a stereo pair.
    Stereo(StereoArgs),
    /// Render a PIP.
    Export(ExportArgs),
    /// Run the randomized brute-force cross-checks.
    Selftest {
        /// Instances per check.
        #[arg(long, default_value_t = 40)]
        count: usize,
    },
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false, id = "source")]
pub struct Source {
    /// Table function JSON, minimized by brute-force oracle calls.
    #[arg(long)]
    pub oracle: Option<PathBuf>,
    /// Grouped flow network JSON.
    #[arg(long)]
    pub network: Option<PathBuf>,
    /// Potts instance JSON.
    #[arg(long)]
    pub potts: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct BuildArgs {
    #[command(flatten)]
    pub source: Source,
    /// Compute the Potts layers from one locking multiflow.
    #[arg(long, requires = "potts")]
    pub locking: bool,
    /// Check NR1 and NR2 exhaustively before using a network.
    #[arg(long, requires = "network")]
    pub verify: bool,
    /// Write the result here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false, id = "mode")]
pub struct Mode {
    #[arg(long)]
    pub all: bool,
    #[arg(long)]
    pub maximal: bool,
    #[arg(long)]
    pub count: bool,
}

#[derive(Args, Debug)]
pub struct EnumerateArgs {
    #[command(flatten)]
    pub mode: Mode,
    /// Stop after this many lines.
    #[arg(long)]
    pub limit: Option<usize>,
    /// A build-pip result, Potts instance, table or grouped network.
    pub input: PathBuf,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum RelaxationArg {
    Average,
    Kovtun,
}

impl From<RelaxationArg> for Relaxation {
    fn from(r: RelaxationArg) -> Self {
        match r {
            RelaxationArg::Average => Relaxation::Average,
            RelaxationArg::Kovtun => Relaxation::Kovtun,
        }
    }
}

#[derive(Args, Debug)]
pub struct StereoArgs {
    #[arg(long, requires = "right", conflicts_with = "synthetic")]
    pub left: Option<PathBuf>,
    #[arg(long, requires = "left")]
    pub right: Option<PathBuf>,
    /// Generate a shifted-pattern pair of size WxH instead of reading images.
    #[arg(long, value_name = "WxH", required_unless_present = "left")]
    pub synthetic: Option<String>,
    #[arg(long, default_value_t = 4)]
    pub k: u8,
    /// Smoothness weight, an integer or `p/q`.
    #[arg(long, default_value = "1")]
    pub lambda: String,
    #[arg(long, value_enum, default_value_t = RelaxationArg::Average)]
    pub relaxation: RelaxationArg,
    /// Keep exact averaged costs instead of rounding them.
    #[arg(long)]
    pub no_round: bool,
    /// Window radius for the SSD costs.
    #[arg(long, default_value_t = 4)]
    pub radius: usize,
    #[arg(long)]
    pub locking: bool,
    /// Write the label map as PPM.
    #[arg(long)]
    pub map: Option<PathBuf>,
    /// Write the generated pair as `<prefix>_left.ppm` and `<prefix>_right.ppm`.
    #[arg(long, requires = "synthetic")]
    pub save_pair: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ExportArgs {
    /// Graphviz output.
    #[arg(long, required = true)]
    pub dot: bool,
    pub input: PathBuf,
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    run_with(args, &mut lock)
}

pub fn run_with<I, T>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    init_logging();
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli, out) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("kpip: {e}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse(_) => 2,
        Error::Validation(_) => 3,
        Error::Internal(_) => 4,
    }
}

fn init_logging() {
    let env = env_logger::Env::new().filter_or("KPIP_LOG", "warn");
    let _ = env_logger::Builder::from_env(env).format_timestamp(None).try_init();
}

fn execute(cli: &Cli, out: &mut dyn Write) -> Result<()> {
    if rayon::ThreadPoolBuilder::new().num_threads(cli.jobs).build_global().is_err() {
        info!("thread pool already configured; --jobs applies to the first command of this process");
    }
    let parallel = cli.jobs != 1;
    match &cli.command {
        Command::Check { input } => check(input, out),
        Command::BuildPip(a) => build(a, parallel, out),
        Command::Enumerate(a) => enumerate(a, parallel, out),
        Command::Stereo(a) => stereo(a, cli.seed, parallel, out),
        Command::Export(a) => export(a, parallel, out),
        Command::Selftest { count } => {
            let report = run_selftest(cli.seed, *count, parallel);
            emit(out, &report.to_json())?;
            match report.failures() {
                0 => Ok(()),
                n => Err(Error::internal(format!("{n} self-test checks failed"))),
            }
        }
    }
}

fn emit(out: &mut dyn Write, v: &Json) -> Result<()> {
    writeln!(out, "{}", serde_json::to_string(v)?)?;
    Ok(())
}

fn read_json(path: &Path) -> Result<Json> {
    let text = if path == Path::new("-") {
        std::io::read_to_string(std::io::stdin())?
    } else {
        std::fs::read_to_string(path).map_err(|e| Error::parse(format!("{}: {e}", path.display())))?
    };
    Ok(serde_json::from_str(&text)?)
}

/// Any input the commands accept, recognized by its keys.
pub enum Input {
    Table(TableFunction),
    Network(GroupedNetwork),
    Potts(PottsInstance),
    Pip { pip: Pip, min: Option<KVector> },
}

impl Input {
    pub fn from_json(v: &Json) -> Result<Input> {
        let has = |key: &str| v.get(key).is_some();
        if has("pip") {
            let pip = pip_from_json(&v["pip"])?;
            let min = match v.get("minimum_minimizer") {
                Some(m) => Some(vector_from_json(m, v["pip"]["k"].as_u64())?),
                None => None,
            };
            Ok(Input::Pip { pip, min })
        } else if has("elements") {
            Ok(Input::Pip { pip: pip_from_json(v)?, min: None })
        } else if has("groups") {
            Ok(Input::Network(GroupedNetwork::from_json(v)?))
        } else if has("unary") || has("unary_raw") {
            Ok(Input::Potts(PottsInstance::from_json(v)?))
        } else if has("n") && has("k") {
            Ok(Input::Table(TableFunction::from_json(v)?))
        } else {
            Err(Error::parse("unrecognized input: expected a table, grouped network, Potts instance or PIP"))
        }
    }

    pub fn load(path: &Path) -> Result<Input> {
        Input::from_json(&read_json(path)?)
    }
}

fn vector_from_json(v: &Json, k: Option<u64>) -> Result<KVector> {
    let labels = v
        .as_array()
        .ok_or_else(|| Error::parse("minimum_minimizer must be an array"))?
        .iter()
        .map(|a| a.as_u64().and_then(|a| u8::try_from(a).ok()).ok_or_else(|| Error::parse("labels must be small integers")))
        .collect::<Result<Vec<u8>>>()?;
    let k = k.map(|k| k as u8).or_else(|| labels.iter().copied().max()).unwrap_or(1).max(1);
    KVector::new(k, labels)
}

fn check(input: &Path, out: &mut dyn Write) -> Result<()> {
    match Input::load(input)? {
        Input::Table(t) => match t.k_submodularity_violation() {
            None => emit(out, &json!({ "k_submodular": true })),
            Some((x, y)) => {
                emit(out, &json!({ "k_submodular": false, "witness": [x.labels(), y.labels()] }))?;
                Err(Error::validation(format!("not k-submodular at x = {x}, y = {y}")))
            }
        },
        Input::Network(g) => {
            let t = g.represented_table();
            verify_representation(&g, &t).map_err(|e| Error::validation(format!("network violates {e:?}")))?;
            emit(out, &json!({ "k_submodular": t.is_k_submodular(), "representation": true }))
        }
        Input::Potts(p) => emit(out, &json!({ "k_submodular": true, "n": p.n, "k": p.k, "edges": p.edges.len() })),
        Input::Pip { pip, .. } => {
            pip.validate().map_err(|e| Error::validation(e.to_string()))?;
            let elementary = crate::pip::is_elementary(&pip).is_ok();
            emit(out, &json!({ "valid": true, "elementary": elementary, "elements": pip.len() }))
        }
    }
}

/// A PIP with every payload replaced by the minimizer of its principal ideal, in
/// canonical form with parts recovered from the minimal pairs.
pub fn canonical_pip(pip: &Pip, minimizer: impl Fn(&[usize]) -> Result<KVector>) -> Result<Pip> {
    let payloads = (0..pip.len())
        .map(|e| minimizer(&pip.down(e).ones().collect::<Vec<_>>()).map(Payload::Vector))
        .collect::<Result<Vec<_>>>()?;
    let mut p = pip.clone();
    p.set_payloads(payloads);
    let parts = p.recovered_parts();
    let mut part_of = vec![0; p.len()];
    for (i, members) in parts.iter().enumerate() {
        members.iter().for_each(|&e| part_of[e] = i);
    }
    p.set_parts(&part_of);
    Ok(p.canonical())
}

type MinimizerMap = Box<dyn Fn(&[usize]) -> Result<KVector> + Send + Sync>;

/// A built PIP along with the minimizer map of its native payloads.
pub struct Built {
    pub pip: Pip,
    pub min_value: Value,
    pub minimum: KVector,
    minimizer: MinimizerMap,
}

impl Built {
    pub fn minimizer(&self, ideal: &[usize]) -> Result<KVector> {
        (self.minimizer)(ideal)
    }

    pub fn to_json(&self) -> Result<Json> {
        let pip = canonical_pip(&self.pip, |i| self.minimizer(i))?;
        Ok(json!({
            "min_value": value_to_json(&self.min_value),
            "minimum_minimizer": self.minimum.labels(),
            "pip": pip_to_json(&pip),
        }))
    }
}

pub fn build_from_table(t: TableFunction, parallel: bool) -> Result<Built> {
    if let Some((x, y)) = t.k_submodularity_violation() {
        return Err(Error::validation(format!("not k-submodular at x = {x}, y = {y}")));
    }
    if t.min_value() == Value::Inf {
        return Err(Error::validation("the table has no finite value"));
    }
    let oracle = TableOracle::new(&t);
    let r = build_pip_via_oracle_with(&oracle, parallel);
    info!("oracle route: {} calls, {} irreducibles", r.oracle_calls, r.irreducibles.len());
    let (pip, min) = (r.pip.clone(), r.minimum_minimizer.clone());
    let map_pip = r.pip;
    Ok(Built {
        pip,
        min_value: r.min_value,
        minimum: min.clone(),
        minimizer: Box::new(move |i| Ok(ideal_join(&map_pip, i, &min))),
    })
}

pub fn build_from_network(g: GroupedNetwork, verify: bool) -> Result<Built> {
    if verify {
        verify_representation(&g, &g.represented_table()).map_err(|e| Error::validation(format!("network violates {e:?}")))?;
    }
    let np = pip_from_network(&g);
    let minimum = np.minimizer(&g, &[])?;
    let min_value = Value::Finite(Rat::from_integer(g.cut_capacity(&g.psi(&minimum))) + g.offset);
    info!("network route: {} elements", np.pip.len());
    let pip = np.pip.clone();
    Ok(Built { pip, min_value, minimum, minimizer: Box::new(move |i| np.minimizer(&g, i)) })
}

pub fn build_from_potts(inst: &PottsInstance, route: Route, parallel: bool) -> Result<Built> {
    let pp = build_pip_potts(inst, route, parallel)?;
    info!("potts route ({route:?}): {} elements, scale {}", pp.pip.len(), pp.network.scale);
    let (pip, minimum, min_value) = (pp.pip.clone(), pp.minimum_minimizer().clone(), Value::Finite(pp.min_value()));
    Ok(Built { pip, min_value, minimum, minimizer: Box::new(move |i| pp.minimizer(i)) })
}

fn build_input(input: Input, route: Route, verify: bool, parallel: bool) -> Result<Built> {
    match input {
        Input::Table(t) => build_from_table(t, parallel),
        Input::Network(g) => build_from_network(g, verify),
        Input::Potts(p) => build_from_potts(&p, route, parallel),
        Input::Pip { pip, min } => {
            let min = min.ok_or_else(|| Error::validation("a bare PIP has no minimum minimizer; pass a build-pip result"))?;
            let p2 = pip.clone();
            let m2 = min.clone();
            Ok(Built {
                pip,
                min_value: Value::zero(),
                minimum: min,
                minimizer: Box::new(move |i| Ok(ideal_join(&p2, i, &m2))),
            })
        }
    }
}

fn build(a: &BuildArgs, parallel: bool, out: &mut dyn Write) -> Result<()> {
    let route = if a.locking { Route::Locking } else { Route::Direct };
    let input = match (&a.source.oracle, &a.source.network, &a.source.potts) {
        (Some(p), _, _) => match Input::load(p)? {
            Input::Table(t) => Input::Table(t),
            _ => return Err(Error::parse("--oracle expects a table function")),
        },
        (_, Some(p), _) => Input::Network(GroupedNetwork::from_json(&read_json(p)?)?),
        (_, _, Some(p)) => Input::Potts(PottsInstance::from_json(&read_json(p)?)?),
        _ => unreachable!("clap requires one source"),
    };
    let v = build_input(input, route, a.verify, parallel)?.to_json()?;
    match &a.out {
        Some(path) => {
            let mut f = std::fs::File::create(path).map_err(|e| Error::validation(format!("{}: {e}", path.display())))?;
            emit(&mut f, &v)
        }
        None => emit(out, &v),
    }
}

fn single_count(c: usize) -> FactoredCount {
    let mut fc = FactoredCount { total: BigUint::from(1u8), factors: Vec::new() };
    fc.multiply(BigUint::from(c));
    fc
}

fn enumerate(a: &EnumerateArgs, parallel: bool, out: &mut dyn Write) -> Result<()> {
    let limit = a.limit.unwrap_or(usize::MAX);
    let input = Input::load(&a.input)?;
    if let Input::Potts(inst) = &input {
        if !a.mode.all {
            let pp = build_pip_potts(inst, Route::Direct, parallel)?;
            let r = build_r_poset(&pp.pip)?;
            if a.mode.count {
                return emit(out, &count_maximal_minimizers(&r).to_json());
            }
            for x in maximal_minimizers_via_r(&pp, &r).take(limit) {
                emit(out, &json!(x?.labels()))?;
            }
            return Ok(());
        }
    }
    let built = build_input(input, Route::Direct, false, parallel)?;
    if a.mode.count {
        return emit(out, &single_count(maximal_consistent_ideals(&built.pip).count()).to_json());
    }
    let ideals = if a.mode.all { consistent_ideals(&built.pip) } else { maximal_consistent_ideals(&built.pip) };
    for ideal in ideals.take(limit) {
        emit(out, &json!(built.minimizer(&ideal)?.labels()))?;
    }
    Ok(())
}

fn export(a: &ExportArgs, parallel: bool, out: &mut dyn Write) -> Result<()> {
    debug_assert!(a.dot);
    let input = Input::load(&a.input)?;
    let pip = match input {
        Input::Pip { pip, .. } => pip,
        other => build_input(other, Route::Direct, false, parallel)?.pip,
    };
    out.write_all(pip_to_dot(&pip).as_bytes())?;
    Ok(())
}

fn parse_size(s: &str) -> Result<(usize, usize)> {
    let (w, h) = s.split_once(['x', 'X']).ok_or_else(|| Error::parse(format!("size {s:?} must look like WxH")))?;
    let parse = |t: &str| t.trim().parse::<usize>().ok().filter(|&v| v > 0).ok_or_else(|| Error::parse(format!("bad size {s:?}")));
    Ok((parse(w)?, parse(h)?))
}

fn stereo(a: &StereoArgs, seed: u64, parallel: bool, out: &mut dyn Write) -> Result<()> {
    let pair = match (&a.left, &a.right, &a.synthetic) {
        (Some(l), Some(r), _) => StereoPair::load(l, r)?,
        (_, _, Some(size)) => {
            let (w, h) = parse_size(size)?;
            let max_d = 2 * (a.k.max(1) as usize - 1);
            let (pair, _) = synthetic_pair(w, h, max_d / 3 / 2 * 2, max_d, seed);
            if let Some(prefix) = &a.save_pair {
                let name = |side: &str| PathBuf::from(format!("{}_{side}.ppm", prefix.display()));
                write_ppm(&pair.left, &name("left"))?;
                write_ppm(&pair.right, &name("right"))?;
            }
            pair
        }
        _ => return Err(Error::parse("give --left and --right, or --synthetic WxH")),
    };
    let lambda = parse_rat(&a.lambda)?;
    let params = StereoParams { k: a.k, lambda, relaxation: a.relaxation.into(), round: !a.no_round, radius: a.radius };
    let inst = stereo_instance(&pair, &params)?;
    let route = if a.locking { Route::Locking } else { Route::Direct };
    let report = persistent_report(&inst, route, parallel)?;
    if let Some(path) = &a.map {
        write_ppm(&report.label_map(pair.width(), pair.height()), path)?;
    }
    let mut stats = report.stats_json();
    stats["width"] = json!(pair.width());
    stats["height"] = json!(pair.height());
    stats["k"] = json!(a.k);
    stats["lambda"] = value_to_json(&Value::Finite(lambda));
    emit(out, &stats)
}
