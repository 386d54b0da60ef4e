use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::{Arg, ArgAction};

use crate::grid::parse_grid;
use crate::CliError;

/// Environment variable supplying the default worker count.
pub const JOBS_ENV: &str = "MINMAX_JOBS";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Command {
    TwoTemp,
    Bilinear,
    WganPoint,
    WganCurve,
    Asymptotic,
    Simulate,
    Compare,
}

impl Command {
    pub const ALL: [Command; 7] = [
        Command::TwoTemp,
        Command::Bilinear,
        Command::WganPoint,
        Command::WganCurve,
        Command::Asymptotic,
        Command::Simulate,
        Command::Compare,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::TwoTemp => "two-temp",
            Command::Bilinear => "bilinear",
            Command::WganPoint => "wgan-point",
            Command::WganCurve => "wgan-curve",
            Command::Asymptotic => "asymptotic",
            Command::Simulate => "simulate",
            Command::Compare => "compare",
        }
    }

    fn about(self) -> &'static str {
        match self {
            Command::TwoTemp => "Finite-temperature values of a matrix game along a temperature schedule",
            Command::Bilinear => "Exact finite-size vs saddle-point free energy of the rank-1 bilinear game",
            Command::WganPoint => "Replica solution of the quadratic WGAN at one (alpha, r)",
            Command::WganCurve => "Learning curves eps_g(alpha) with warm-started continuation",
            Command::Asymptotic => "Large-alpha generalization error as a function of r",
            Command::Simulate => "Finite-size gradient descent-ascent runs, one row per seed",
            Command::Compare => "Simulation averages against the replica prediction",
        }
    }

    fn from_name(s: &str) -> Option<Command> {
        Command::ALL.into_iter().find(|c| c.name() == s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Domain {
    Any,
    Positive,
    NonNegative,
    AtLeastOne,
}

impl Domain {
    fn check(self, v: f64) -> bool {
        v.is_finite()
            && match self {
                Domain::Any => true,
                Domain::Positive => v > 0.0,
                Domain::NonNegative => v >= 0.0,
                Domain::AtLeastOne => v >= 1.0,
            }
    }

    fn describe(self) -> &'static str {
        match self {
            Domain::Any => "a finite number",
            Domain::Positive => "> 0",
            Domain::NonNegative => ">= 0",
            Domain::AtLeastOne => ">= 1",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Float(Domain),
    /// Integer with a minimum.
    Count(usize),
    /// Grid syntax or comma list of floats.
    Grid(Domain),
    /// Comma list of integers with a minimum.
    Counts(usize),
    Choice(&'static [&'static str]),
    Text,
}

#[derive(Debug, Clone, Copy)]
pub struct KeySpec {
    pub name: &'static str,
    pub kind: Kind,
    /// `None` with `required = false` means the key is optional.
    pub default: Option<&'static str>,
    pub required: bool,
    pub help: &'static str,
}

const fn key(name: &'static str, kind: Kind, default: Option<&'static str>, help: &'static str) -> KeySpec {
    KeySpec { name, kind, default, required: false, help }
}

const fn required(name: &'static str, kind: Kind, help: &'static str) -> KeySpec {
    KeySpec { name, kind, default: None, required: true, help }
}

const HYPER: [KeySpec; 5] = [
    key("eta", Kind::Float(Domain::Positive), Some("1"), "real-sample noise strength"),
    key("eta-tilde", Kind::Float(Domain::Positive), Some("1"), "fake-sample noise strength"),
    key("lambda", Kind::Float(Domain::Positive), Some("1"), "discriminator regularization"),
    key("lambda-tilde", Kind::Float(Domain::Positive), Some("1"), "generator regularization"),
    key(
        "convention",
        Kind::Choice(&["doubled", "direct"]),
        Some("doubled"),
        "fake sample complexity: doubled = 2·r·alpha, direct = r·alpha",
    ),
];

const SIM: [KeySpec; 5] = [
    key("d", Kind::Count(2), Some("400"), "dimension"),
    key("seeds", Kind::Count(1), Some("20"), "number of independent runs"),
    key("lr", Kind::Float(Domain::Positive), None, "learning rate for both players (default 0.01/max(alpha, 1))"),
    key("grad-tol", Kind::Float(Domain::NonNegative), Some("1e-7"), "per-coordinate RMS gradient tolerance"),
    key("max-steps", Kind::Count(1), Some("100000"), "step budget per run"),
];

const TOL: KeySpec = key("tol", Kind::Float(Domain::Positive), Some("1e-10"), "residual tolerance");

/// Accepted keys for a subcommand.
pub fn schema(cmd: Command) -> Vec<KeySpec> {
    let mut v = match cmd {
        Command::TwoTemp => vec![
            key("game", Kind::Text, Some("pennies"), "payoff CSV path, or 'pennies' / 'saddle'"),
            key("betas", Kind::Grid(Domain::Positive), Some("10:1000:log:3"), "beta_min schedule"),
            key("ratio", Kind::Float(Domain::AtLeastOne), Some("100"), "beta_max / beta_min"),
            key("norm-dim", Kind::Float(Domain::Positive), Some("1"), "normalization dimension d_x"),
        ],
        Command::Bilinear => vec![
            key("w-xx", Kind::Float(Domain::Any), Some("0"), "x-x coupling"),
            key("w-yy", Kind::Float(Domain::Any), Some("0"), "y-y coupling"),
            key("w-xy", Kind::Float(Domain::Any), Some("0"), "x-y coupling"),
            key("b-x", Kind::Float(Domain::Any), Some("0"), "x field"),
            key("b-y", Kind::Float(Domain::Any), Some("0"), "y field"),
            key("kappa", Kind::Float(Domain::Positive), Some("1"), "d_y / d_x"),
            key("beta-min", Kind::Float(Domain::Positive), Some("2"), "minimizer inverse temperature"),
            key("beta-max", Kind::Float(Domain::Positive), Some("5"), "maximizer inverse temperature"),
            key("d-list", Kind::Counts(1), Some("500,1000,2000,4000"), "increasing d_x values"),
        ],
        Command::WganPoint => {
            let mut v = vec![
                required("alpha", Kind::Float(Domain::NonNegative), "sample complexity n/d"),
                required("r", Kind::Float(Domain::NonNegative), "fake-to-real ratio"),
                key("init", Kind::Choice(&["auto", "informative", "trivial"]), Some("auto"), "starting branch"),
                TOL,
            ];
            v.extend(HYPER);
            v
        }
        Command::WganCurve => {
            let mut v = vec![
                required("r", Kind::Grid(Domain::NonNegative), "fake-to-real ratio(s)"),
                required("alpha-grid", Kind::Grid(Domain::NonNegative), "increasing alpha values"),
                TOL,
            ];
            v.extend(HYPER);
            v
        }
        Command::Asymptotic => vec![
            required("r-grid", Kind::Grid(Domain::Positive), "ratios"),
            key("alpha", Kind::Float(Domain::Positive), Some("1e5"), "alpha for the two-term column"),
        ],
        Command::Simulate | Command::Compare => {
            let mut v = vec![
                required("alpha", Kind::Float(Domain::NonNegative), "sample complexity n/d"),
                required("r", Kind::Float(Domain::NonNegative), "fake-to-real ratio"),
            ];
            v.extend(SIM);
            v.extend(HYPER);
            if cmd == Command::Compare {
                v.push(TOL);
            }
            v
        }
    };
    v.sort_by_key(|k| k.name);
    v
}

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Float(f64),
    Count(usize),
    Floats(Vec<f64>),
    Counts(Vec<usize>),
    Text(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub params: BTreeMap<String, Value>,
    /// Resolved textual values, as written into the output header.
    pub raw: BTreeMap<String, String>,
    pub master_seed: u64,
    pub jobs: usize,
    pub output: Option<PathBuf>,
}

impl RunConfig {
    pub fn float(&self, k: &str) -> f64 {
        match self.params.get(k) {
            Some(Value::Float(v)) => *v,
            other => panic!("key {k} is not a resolved float: {other:?}"),
        }
    }

    pub fn opt_float(&self, k: &str) -> Option<f64> {
        match self.params.get(k) {
            Some(Value::Float(v)) => Some(*v),
            _ => None,
        }
    }

    pub fn count(&self, k: &str) -> usize {
        match self.params.get(k) {
            Some(Value::Count(v)) => *v,
            other => panic!("key {k} is not a resolved count: {other:?}"),
        }
    }

    pub fn floats(&self, k: &str) -> &[f64] {
        match self.params.get(k) {
            Some(Value::Floats(v)) => v,
            other => panic!("key {k} is not a resolved list: {other:?}"),
        }
    }

    pub fn counts(&self, k: &str) -> &[usize] {
        match self.params.get(k) {
            Some(Value::Counts(v)) => v,
            other => panic!("key {k} is not a resolved count list: {other:?}"),
        }
    }

    pub fn text(&self, k: &str) -> &str {
        match self.params.get(k) {
            Some(Value::Text(v)) => v,
            other => panic!("key {k} is not resolved text: {other:?}"),
        }
    }
}

const COMMON: [&str; 3] = ["seed", "jobs", "output"];

fn cli() -> clap::Command {
    let mut root = clap::Command::new("minmax")
        .version(env!("CARGO_PKG_VERSION"))
        .about("Equilibrium values of high-dimensional min-max problems")
        .subcommand_required(true)
        .arg_required_else_help(true);
    for cmd in Command::ALL {
        let mut sub = clap::Command::new(cmd.name())
            .about(cmd.about())
            .allow_negative_numbers(true)
            .arg(Arg::new("config").long("config").value_name("FILE").help("key = value file; flags take precedence"))
            .arg(Arg::new("seed").long("seed").value_name("N").help("master seed [default: 0]"))
            .arg(
                Arg::new("jobs")
                    .long("jobs")
                    .value_name("N")
                    .help(format!("worker threads [default: ${JOBS_ENV} or all cores]")),
            )
            .arg(Arg::new("output").long("output").short('o').value_name("FILE").help("CSV destination [default: stdout]"));
        for k in schema(cmd) {
            let mut help = k.help.to_string();
            if let Some(d) = k.default {
                help.push_str(&format!(" [default: {d}]"));
            }
            if k.required {
                help.push_str(" (required)");
            }
            sub = sub.arg(Arg::new(k.name).long(k.name).value_name("VALUE").action(ArgAction::Set).help(help));
        }
        root = root.subcommand(sub);
    }
    root
}

type FileValues = BTreeMap<String, String>;

/// Reads `key = value` lines; keys before any `[section]` and in the section
/// named after the subcommand apply, other sections are ignored.
fn read_config_file(path: &str, cmd: Command) -> Result<FileValues, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{path}: {e}")))?;
    let mut out = FileValues::new();
    let mut active = true;
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(sec) = line.strip_prefix('[') {
            let name = sec
                .strip_suffix(']')
                .ok_or_else(|| CliError::Config(format!("{path}:{}: malformed section header", i + 1)))?
                .trim();
            if Command::from_name(name).is_none() {
                return Err(CliError::Config(format!("{path}:{}: unknown section [{name}]", i + 1)));
            }
            active = name == cmd.name();
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| CliError::Config(format!("{path}:{}: expected key = value", i + 1)))?;
        if active {
            out.insert(k.trim().replace('_', "-"), v.trim().to_string());
        }
    }
    Ok(out)
}

fn resolve(spec: &KeySpec, text: &str) -> Result<Value, CliError> {
    let name = spec.name;
    let float = |s: &str, d: Domain| -> Result<f64, CliError> {
        let v: f64 = s
            .trim()
            .parse()
            .map_err(|_| CliError::Config(format!("{name}: malformed number {s:?}")))?;
        if d.check(v) {
            Ok(v)
        } else {
            Err(CliError::Config(format!("{name} = {s} is outside its domain (must be {})", d.describe())))
        }
    };
    let count = |s: &str, min: usize| -> Result<usize, CliError> {
        let v: usize = s
            .trim()
            .parse()
            .map_err(|_| CliError::Config(format!("{name}: malformed integer {s:?}")))?;
        if v >= min {
            Ok(v)
        } else {
            Err(CliError::Config(format!("{name} = {v} is outside its domain (must be >= {min})")))
        }
    };
    Ok(match spec.kind {
        Kind::Float(d) => Value::Float(float(text, d)?),
        Kind::Count(min) => Value::Count(count(text, min)?),
        Kind::Grid(d) => {
            let g = parse_grid(name, text)?;
            if let Some(bad) = g.iter().find(|v| !d.check(**v)) {
                return Err(CliError::Config(format!(
                    "{name} contains {bad}, outside its domain (must be {})",
                    d.describe()
                )));
            }
            Value::Floats(g)
        }
        Kind::Counts(min) => Value::Counts(text.split(',').map(|s| count(s, min)).collect::<Result<_, _>>()?),
        Kind::Choice(opts) => {
            let t = text.trim();
            if !opts.contains(&t) {
                return Err(CliError::Config(format!("{name} = {t:?} must be one of {}", opts.join(", "))));
            }
            Value::Text(t.to_string())
        }
        Kind::Text => Value::Text(text.trim().to_string()),
    })
}

fn default_jobs() -> Result<usize, CliError> {
    match std::env::var(JOBS_ENV) {
        Ok(s) => s
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|&j| j >= 1)
            .ok_or_else(|| CliError::Config(format!("{JOBS_ENV} = {s:?} must be a positive integer"))),
        Err(_) => Ok(std::thread::available_parallelism().map_or(1, |n| n.get())),
    }
}

/// Parses the command line (including the program name) and an optional
/// `--config` file into a fully resolved configuration.
pub fn parse_config(args: &[String]) -> Result<RunConfig, CliError> {
    let matches = cli().try_get_matches_from(args).map_err(|e| match e.kind() {
        clap::error::ErrorKind::DisplayHelp
        | clap::error::ErrorKind::DisplayVersion
        | clap::error::ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => CliError::Help(e.render().to_string()),
        _ => CliError::Config(e.render().to_string().trim_end().to_string()),
    })?;
    let (name, sub) = matches.subcommand().expect("subcommand required");
    let command = Command::from_name(name).expect("registered subcommand");
    let specs = schema(command);

    let mut values = match sub.get_one::<String>("config") {
        Some(path) => read_config_file(path, command)?,
        None => FileValues::new(),
    };
    for k in values.keys() {
        if !COMMON.contains(&k.as_str()) && !specs.iter().any(|s| s.name == k) {
            return Err(CliError::Config(format!("unknown key {k:?} for {name}")));
        }
    }
    for id in COMMON.iter().copied().chain(specs.iter().map(|s| s.name)) {
        if let Some(v) = sub.get_one::<String>(id) {
            values.insert(id.to_string(), v.clone());
        }
    }

    let master_seed = match values.get("seed") {
        Some(s) => s
            .trim()
            .parse::<u64>()
            .map_err(|_| CliError::Config(format!("seed: malformed integer {s:?}")))?,
        None => 0,
    };
    let jobs = match values.get("jobs") {
        Some(s) => s
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|&j| j >= 1)
            .ok_or_else(|| CliError::Config(format!("jobs = {s:?} must be a positive integer")))?,
        None => default_jobs()?,
    };
    let output = values.get("output").map(PathBuf::from);

    let mut params = BTreeMap::new();
    let mut raw = BTreeMap::new();
    for spec in &specs {
        let text = match (values.get(spec.name), spec.default) {
            (Some(v), _) => v.clone(),
            (None, Some(d)) => d.to_string(),
            (None, None) if spec.required => {
                return Err(CliError::Config(format!("missing required key {} for {name}", spec.name)));
            }
            (None, None) => continue,
        };
        params.insert(spec.name.to_string(), resolve(spec, &text)?);
        raw.insert(spec.name.to_string(), text.trim().to_string());
    }
    Ok(RunConfig { command, params, raw, master_seed, jobs, output })
}
