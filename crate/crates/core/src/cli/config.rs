//! Experiment configuration: a line-oriented `key = value` format with
//! `[section]` headers.
//!
//! ```text
//! version = 1
//! task = levinson
//!
//! [channel]
//! q = 3
//! l = 0
//!
//! [potential]
//! family = square-well
//! depth = 39.47841760435743
//! r0 = 1
//! ```
//!
//! `[kernel-term]` may repeat, once per separable term. Unknown sections and
//! keys are errors, and every problem found is reported at once.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::model::{ChannelParams, KernelProfile, LocalPotential, PotentialModel, SeparableKernel, Tabulated};

pub const CONFIG_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Task {
    EvalSpecial,
    Solve,
    PhaseShift,
    WronskianAudit,
    BoundStates,
    Levinson,
    SturmCheck,
}

impl Task {
    pub const ALL: [Task; 7] = [
        Task::EvalSpecial,
        Task::Solve,
        Task::PhaseShift,
        Task::WronskianAudit,
        Task::BoundStates,
        Task::Levinson,
        Task::SturmCheck,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Task::EvalSpecial => "eval-special",
            Task::Solve => "solve",
            Task::PhaseShift => "phase-shift",
            Task::WronskianAudit => "wronskian-audit",
            Task::BoundStates => "bound-states",
            Task::Levinson => "levinson",
            Task::SturmCheck => "sturm-check",
        }
    }

    pub fn parse(s: &str) -> Option<Task> {
        Task::ALL.into_iter().find(|t| t.name() == s)
    }

    fn needs_potential(self) -> bool {
        !matches!(self, Task::EvalSpecial)
    }
}

impl fmt::Display for Task {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl OutputFormat {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "csv" => Some(OutputFormat::Csv),
            "json" => Some(OutputFormat::Json),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Zero,
    SquareWell,
    Exponential,
    Gaussian,
    Tabulated,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct PotentialSpec {
    pub family: Option<Family>,
    pub depth: Option<f64>,
    pub range: Option<f64>,
    pub width: Option<f64>,
    pub r0: Option<f64>,
    pub mu: Option<f64>,
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProfileKind {
    GaussianBump,
    PolynomialBump,
    Window,
}

#[derive(Debug, Clone, PartialEq)]
pub struct KernelTermSpec {
    pub line: usize,
    pub profile: Option<ProfileKind>,
    pub strength: Option<f64>,
    pub center: Option<f64>,
    pub width: Option<f64>,
    pub a: Option<f64>,
    pub b: Option<f64>,
    pub lo: Option<f64>,
    pub hi: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spacing {
    Linear,
    Log,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ScanSpec {
    pub k_min: Option<f64>,
    pub k_max: Option<f64>,
    pub k_count: Option<usize>,
    pub k_spacing: Option<Spacing>,
    pub mu_steps: Option<usize>,
    pub e_floor: Option<f64>,
    pub e_count: Option<usize>,
    pub e_min: Option<f64>,
    pub e_max: Option<f64>,
    pub de: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SpecialSpec {
    pub function: Option<String>,
    pub nu: Option<f64>,
    pub x: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveKind {
    Regular,
    Irregular,
    Jost,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SolveSpec {
    pub kind: Option<SolveKind>,
    pub k: Option<f64>,
    pub k_im: Option<f64>,
    pub energy: Option<f64>,
    pub r_max: Option<f64>,
    pub inner: Option<usize>,
    pub outer: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AuditPair {
    Phi,
    Jost,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct AuditSpec {
    pub pair: Option<AuditPair>,
    pub k: Option<f64>,
    pub tolerance: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub ode: f64,
    pub eta: f64,
    pub root: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { ode: 1e-12, eta: 1e-2, root: 1e-12 }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct OutputSpec {
    pub format: Option<OutputFormat>,
    pub path: Option<PathBuf>,
    pub staircase: Option<PathBuf>,
    pub metadata: Option<bool>,
}

/// A parsed configuration. Semantic checks live in [`validate`].
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub version: u32,
    pub task: Task,
    pub channel: Option<(f64, f64)>,
    pub potential: PotentialSpec,
    pub kernel_terms: Vec<KernelTermSpec>,
    /// Row-major coupling matrix; overrides the per-term strengths.
    pub coupling: Option<Vec<Vec<f64>>>,
    pub scan: ScanSpec,
    pub special: SpecialSpec,
    pub solve: SolveSpec,
    pub audit: AuditSpec,
    pub tolerances: Tolerances,
    pub output: OutputSpec,
    /// Directory that relative paths are resolved against.
    pub base_dir: PathBuf,
}

struct Entry {
    key: String,
    value: String,
    line: usize,
}

struct Section {
    name: String,
    line: usize,
    entries: Vec<Entry>,
}

const SECTION_KEYS: &[(&str, &[&str])] = &[
    ("", &["version", "task"]),
    ("channel", &["q", "l"]),
    ("potential", &["family", "depth", "range", "width", "r0", "mu", "csv"]),
    ("kernel-term", &["profile", "strength", "center", "width", "a", "b", "lo", "hi"]),
    ("kernel", &["coupling"]),
    (
        "scan",
        &["k-min", "k-max", "k-count", "k-spacing", "mu-steps", "e-floor", "e-count", "e-min", "e-max", "de"],
    ),
    ("special", &["function", "nu", "x"]),
    ("solve", &["kind", "k", "k-im", "energy", "r-max", "inner", "outer"]),
    ("audit", &["pair", "k", "tolerance"]),
    ("tolerances", &["ode", "eta", "root"]),
    ("output", &["format", "path", "staircase", "metadata"]),
];

fn split_sections(text: &str, diags: &mut Vec<String>) -> Vec<Section> {
    let mut sections = vec![Section { name: String::new(), line: 0, entries: Vec::new() }];
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some(rest) = content.strip_prefix('[') {
            match rest.strip_suffix(']') {
                Some(name) => {
                    let name = name.trim().to_string();
                    if !SECTION_KEYS.iter().any(|(s, _)| *s == name) || name.is_empty() {
                        diags.push(format!("line {line}: unknown section [{name}]"));
                    }
                    sections.push(Section { name, line, entries: Vec::new() });
                }
                None => diags.push(format!("line {line}: malformed section header '{content}'")),
            }
            continue;
        }
        match content.split_once('=') {
            Some((k, v)) => {
                let key = k.trim().to_string();
                let value = v.trim().trim_matches('"').to_string();
                sections.last_mut().expect("root section").entries.push(Entry { key, value, line });
            }
            None => diags.push(format!("line {line}: expected 'key = value', got '{content}'")),
        }
    }
    sections
}

struct Reader<'a> {
    diags: &'a mut Vec<String>,
}

impl Reader<'_> {
    fn num(&mut self, e: &Entry) -> Option<f64> {
        match e.value.parse::<f64>() {
            Ok(v) if v.is_finite() => Some(v),
            _ => {
                self.diags.push(format!("line {}: '{}' must be a finite number, got '{}'", e.line, e.key, e.value));
                None
            }
        }
    }

    fn count(&mut self, e: &Entry) -> Option<usize> {
        match e.value.parse::<usize>() {
            Ok(v) => Some(v),
            Err(_) => {
                self.diags.push(format!("line {}: '{}' must be a non-negative integer, got '{}'", e.line, e.key, e.value));
                None
            }
        }
    }

    fn choice<T>(&mut self, e: &Entry, options: &[(&str, T)]) -> Option<T>
    where
        T: Copy,
    {
        match options.iter().find(|(n, _)| *n == e.value) {
            Some((_, v)) => Some(*v),
            None => {
                let names: Vec<&str> = options.iter().map(|(n, _)| *n).collect();
                self.diags.push(format!(
                    "line {}: '{}' must be one of {}, got '{}'",
                    e.line,
                    e.key,
                    names.join("|"),
                    e.value
                ));
                None
            }
        }
    }

    fn flag(&mut self, e: &Entry) -> Option<bool> {
        match e.value.as_str() {
            "true" | "yes" | "on" => Some(true),
            "false" | "no" | "off" => Some(false),
            _ => {
                self.diags.push(format!("line {}: '{}' must be true or false, got '{}'", e.line, e.key, e.value));
                None
            }
        }
    }
}

fn parse_matrix(text: &str) -> std::result::Result<Vec<Vec<f64>>, String> {
    text.split(';')
        .map(|row| {
            row.split_whitespace()
                .map(|v| v.parse::<f64>().map_err(|_| format!("bad matrix entry '{v}'")))
                .collect::<std::result::Result<Vec<f64>, String>>()
        })
        .collect()
}

/// Parses configuration text. Syntax errors, unknown keys and bad values
/// are collected into one [`Error::Config`].
pub fn parse_config(text: &str, base_dir: &Path) -> Result<ExperimentConfig> {
    let mut diags = Vec::new();
    let sections = split_sections(text, &mut diags);
    let mut version = None;
    let mut task = None;
    let mut channel_q = None;
    let mut channel_l = None;
    let mut potential = PotentialSpec::default();
    let mut kernel_terms = Vec::new();
    let mut coupling = None;
    let mut scan = ScanSpec::default();
    let mut special = SpecialSpec::default();
    let mut solve = SolveSpec::default();
    let mut audit = AuditSpec::default();
    let mut tolerances = Tolerances::default();
    let mut output = OutputSpec::default();
    let mut seen: BTreeMap<String, usize> = BTreeMap::new();

    for section in &sections {
        let Some((_, allowed)) = SECTION_KEYS.iter().find(|(s, _)| *s == section.name) else {
            continue;
        };
        if section.name != "kernel-term" && !section.name.is_empty() {
            if let Some(first) = seen.insert(section.name.clone(), section.line) {
                diags.push(format!(
                    "line {}: section [{}] repeated (first at line {first})",
                    section.line, section.name
                ));
            }
        }
        let mut keys_here: BTreeMap<&str, usize> = BTreeMap::new();
        let mut term = KernelTermSpec {
            line: section.line,
            profile: None,
            strength: None,
            center: None,
            width: None,
            a: None,
            b: None,
            lo: None,
            hi: None,
        };
        for e in &section.entries {
            if !allowed.contains(&e.key.as_str()) {
                let where_ = if section.name.is_empty() { "top level".to_string() } else { format!("[{}]", section.name) };
                diags.push(format!("line {}: unknown key '{}' in {where_}", e.line, e.key));
                continue;
            }
            if let Some(first) = keys_here.insert(e.key.as_str(), e.line) {
                diags.push(format!("line {}: key '{}' repeated (first at line {first})", e.line, e.key));
                continue;
            }
            let mut rd = Reader { diags: &mut diags };
            match (section.name.as_str(), e.key.as_str()) {
                ("", "version") => match e.value.parse::<u32>() {
                    Ok(v) => version = Some(v),
                    Err(_) => rd.diags.push(format!("line {}: version must be an integer", e.line)),
                },
                ("", "task") => match Task::parse(&e.value) {
                    Some(t) => task = Some(t),
                    None => rd.diags.push(format!("line {}: unknown task '{}'", e.line, e.value)),
                },
                ("channel", "q") => channel_q = rd.num(e),
                ("channel", "l") => channel_l = rd.num(e),
                ("potential", "family") => {
                    potential.family = rd.choice(
                        e,
                        &[
                            ("zero", Family::Zero),
                            ("square-well", Family::SquareWell),
                            ("exponential", Family::Exponential),
                            ("gaussian", Family::Gaussian),
                            ("tabulated", Family::Tabulated),
                        ],
                    )
                }
                ("potential", "depth") => potential.depth = rd.num(e),
                ("potential", "range") => potential.range = rd.num(e),
                ("potential", "width") => potential.width = rd.num(e),
                ("potential", "r0") => potential.r0 = rd.num(e),
                ("potential", "mu") => potential.mu = rd.num(e),
                ("potential", "csv") => potential.csv = Some(base_dir.join(&e.value)),
                ("kernel-term", "profile") => {
                    term.profile = rd.choice(
                        e,
                        &[
                            ("gaussian-bump", ProfileKind::GaussianBump),
                            ("polynomial-bump", ProfileKind::PolynomialBump),
                            ("window", ProfileKind::Window),
                        ],
                    )
                }
                ("kernel-term", "strength") => term.strength = rd.num(e),
                ("kernel-term", "center") => term.center = rd.num(e),
                ("kernel-term", "width") => term.width = rd.num(e),
                ("kernel-term", "a") => term.a = rd.num(e),
                ("kernel-term", "b") => term.b = rd.num(e),
                ("kernel-term", "lo") => term.lo = rd.num(e),
                ("kernel-term", "hi") => term.hi = rd.num(e),
                ("kernel", "coupling") => match parse_matrix(&e.value) {
                    Ok(m) => coupling = Some(m),
                    Err(msg) => rd.diags.push(format!("line {}: coupling: {msg}", e.line)),
                },
                ("scan", "k-min") => scan.k_min = rd.num(e),
                ("scan", "k-max") => scan.k_max = rd.num(e),
                ("scan", "k-count") => scan.k_count = rd.count(e),
                ("scan", "k-spacing") => {
                    scan.k_spacing = rd.choice(e, &[("linear", Spacing::Linear), ("log", Spacing::Log)])
                }
                ("scan", "mu-steps") => scan.mu_steps = rd.count(e),
                ("scan", "e-floor") => scan.e_floor = rd.num(e),
                ("scan", "e-count") => scan.e_count = rd.count(e),
                ("scan", "e-min") => scan.e_min = rd.num(e),
                ("scan", "e-max") => scan.e_max = rd.num(e),
                ("scan", "de") => scan.de = rd.num(e),
                ("special", "function") => special.function = Some(e.value.clone()),
                ("special", "nu") => special.nu = rd.num(e),
                ("special", "x") => special.x = rd.num(e),
                ("solve", "kind") => {
                    solve.kind = rd.choice(
                        e,
                        &[("regular", SolveKind::Regular), ("irregular", SolveKind::Irregular), ("jost", SolveKind::Jost)],
                    )
                }
                ("solve", "k") => solve.k = rd.num(e),
                ("solve", "k-im") => solve.k_im = rd.num(e),
                ("solve", "energy") => solve.energy = rd.num(e),
                ("solve", "r-max") => solve.r_max = rd.num(e),
                ("solve", "inner") => solve.inner = rd.count(e),
                ("solve", "outer") => solve.outer = rd.count(e),
                ("audit", "pair") => {
                    audit.pair = rd.choice(e, &[("phi-phi-minus", AuditPair::Phi), ("f-f-minus-k", AuditPair::Jost)])
                }
                ("audit", "k") => audit.k = rd.num(e),
                ("audit", "tolerance") => audit.tolerance = rd.num(e),
                ("tolerances", "ode") => {
                    if let Some(v) = rd.num(e) {
                        tolerances.ode = v
                    }
                }
                ("tolerances", "eta") => {
                    if let Some(v) = rd.num(e) {
                        tolerances.eta = v
                    }
                }
                ("tolerances", "root") => {
                    if let Some(v) = rd.num(e) {
                        tolerances.root = v
                    }
                }
                ("output", "format") => {
                    output.format = rd.choice(e, &[("csv", OutputFormat::Csv), ("json", OutputFormat::Json)])
                }
                ("output", "path") => output.path = Some(base_dir.join(&e.value)),
                ("output", "staircase") => output.staircase = Some(base_dir.join(&e.value)),
                ("output", "metadata") => output.metadata = rd.flag(e),
                _ => unreachable!("key table and match arms disagree"),
            }
        }
        if section.name == "kernel-term" {
            kernel_terms.push(term);
        }
    }

    if version.is_none() && !diags.iter().any(|d| d.contains("version")) {
        diags.push("missing mandatory key 'version'".into());
    }
    if task.is_none() && !diags.iter().any(|d| d.contains("task")) {
        diags.push("missing mandatory key 'task'".into());
    }
    let channel = match (channel_q, channel_l) {
        (Some(q), Some(l)) => Some((q, l)),
        (None, None) => None,
        _ => {
            diags.push("[channel] needs both q and l".into());
            None
        }
    };
    if !diags.is_empty() {
        return Err(Error::Config(diags.join("; ")));
    }
    Ok(ExperimentConfig {
        version: version.expect("checked"),
        task: task.expect("checked"),
        channel,
        potential,
        kernel_terms,
        coupling,
        scan,
        special,
        solve,
        audit,
        tolerances,
        output,
        base_dir: base_dir.to_path_buf(),
    })
}

/// Reads and parses a configuration file; relative paths inside it are
/// resolved against the file's directory.
pub fn load_config(path: &Path) -> Result<ExperimentConfig> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("cannot read config {}: {e}", path.display())))?;
    let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
    parse_config(&text, &base)
}

impl ExperimentConfig {
    pub fn channel_params(&self) -> Option<ChannelParams> {
        self.channel.map(|(q, l)| ChannelParams::new(q, l))
    }

    pub fn r0(&self) -> Option<f64> {
        self.potential.r0
    }

    /// Builds the potential model described by `[potential]`,
    /// `[kernel-term]` and `[kernel]`. Call [`validate`] first for a full
    /// list of problems.
    pub fn potential_model(&self) -> Result<PotentialModel> {
        let p = &self.potential;
        let r0 = p.r0.ok_or_else(|| Error::Config("[potential] r0 is required".into()))?;
        let need = |v: Option<f64>, what: &str| {
            v.ok_or_else(|| Error::Config(format!("[potential] {what} is required for this family")))
        };
        let local = match p.family.unwrap_or(Family::Zero) {
            Family::Zero => LocalPotential::Zero,
            Family::SquareWell => LocalPotential::SquareWell { depth: need(p.depth, "depth")? },
            Family::Exponential => {
                LocalPotential::Exponential { depth: need(p.depth, "depth")?, range: need(p.range, "range")? }
            }
            Family::Gaussian => {
                LocalPotential::Gaussian { depth: need(p.depth, "depth")?, width: need(p.width, "width")? }
            }
            Family::Tabulated => {
                let path = p.csv.as_ref().ok_or_else(|| Error::Config("[potential] csv is required".into()))?;
                let text = std::fs::read_to_string(path)
                    .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
                LocalPotential::Tabulated(Arc::new(Tabulated::from_csv(&text).map_err(to_config)?))
            }
        };
        let profiles = self.kernel_terms.iter().map(term_profile).collect::<Result<Vec<_>>>()?;
        let kernel = match &self.coupling {
            Some(m) => SeparableKernel::with_coupling(profiles, m.clone()).map_err(to_config)?,
            None => {
                let strengths = self
                    .kernel_terms
                    .iter()
                    .map(|t| {
                        t.strength.ok_or_else(|| {
                            Error::Config(format!("[kernel-term] at line {}: strength is required", t.line))
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                SeparableKernel::diagonal(profiles.into_iter().zip(strengths).collect())
            }
        };
        let model = PotentialModel::with_kernel(local, r0, kernel).map_err(to_config)?;
        Ok(model.at_mu(p.mu.unwrap_or(1.0)))
    }
}

fn to_config(e: Error) -> Error {
    match e {
        Error::InvalidInput(m) => Error::Config(m),
        other => other,
    }
}

fn term_profile(t: &KernelTermSpec) -> Result<KernelProfile> {
    let need = |v: Option<f64>, what: &str| {
        v.ok_or_else(|| Error::Config(format!("[kernel-term] at line {}: {what} is required", t.line)))
    };
    match t.profile {
        Some(ProfileKind::GaussianBump) => {
            Ok(KernelProfile::GaussianBump { center: need(t.center, "center")?, width: need(t.width, "width")? })
        }
        Some(ProfileKind::PolynomialBump) => Ok(KernelProfile::PolynomialBump { a: need(t.a, "a")?, b: need(t.b, "b")? }),
        Some(ProfileKind::Window) => Ok(KernelProfile::Window { lo: need(t.lo, "lo")?, hi: need(t.hi, "hi")? }),
        None => Err(Error::Config(format!("[kernel-term] at line {}: profile is required", t.line))),
    }
}

fn check_range(d: &mut Vec<String>, name: &str, lo: Option<f64>, hi: Option<f64>, count: Option<usize>) {
    match (lo, hi, count) {
        (Some(a), Some(b), Some(n)) => {
            if !(a < b) {
                d.push(format!("[scan] {name}: min {a} must be below max {b}"));
            }
            if n < 2 {
                d.push(format!("[scan] {name}: count must be >= 2, got {n}"));
            }
        }
        _ => d.push(format!("[scan] {name}-min, {name}-max and {name}-count are required for this task")),
    }
}

/// Every semantic problem of a parsed configuration, in one list.
pub fn validate(cfg: &ExperimentConfig) -> Vec<String> {
    let mut d = Vec::new();
    if cfg.version != CONFIG_VERSION {
        d.push(format!("unsupported config version {} (expected {CONFIG_VERSION})", cfg.version));
    }
    let tol = &cfg.tolerances;
    for (name, v) in [("ode", tol.ode), ("eta", tol.eta), ("root", tol.root)] {
        if !(v > 0.0 && v < 1.0) {
            d.push(format!("[tolerances] {name} must lie in (0, 1), got {v}"));
        }
    }

    if cfg.task == Task::EvalSpecial {
        let s = &cfg.special;
        match s.function.as_deref() {
            Some(f) if super::run::SPECIAL_FUNCTIONS.contains(&f) => {}
            Some(f) => d.push(format!(
                "[special] unknown function '{f}' (one of {})",
                super::run::SPECIAL_FUNCTIONS.join("|")
            )),
            None => d.push("[special] function is required".into()),
        }
        if s.x.is_none() {
            d.push("[special] x is required".into());
        }
        if s.function.as_deref() != Some("gamma") && s.nu.is_none() {
            d.push("[special] nu is required".into());
        }
        return d;
    }

    let lambda = match cfg.channel {
        None => {
            d.push("[channel] q and l are required for this task".into());
            None
        }
        Some((q, l)) => {
            if q < 2.0 {
                d.push(format!("[channel] q must be >= 2, got {q}"));
            }
            if l < 0.0 {
                d.push(format!("[channel] l must be >= 0, got {l}"));
            }
            Some(l + (q - 2.0) / 2.0)
        }
    };
    if let Some(lam) = lambda {
        let spectral = matches!(cfg.task, Task::Levinson | Task::BoundStates | Task::SturmCheck | Task::PhaseShift);
        if lam == 0.0 && spectral {
            d.push("λ=0 unsupported (half-bound regime)".into());
        } else if lam <= 0.0 && cfg.task.needs_potential() {
            d.push(format!("λ={lam} unsupported: need λ > 0"));
        }
    }

    let p = &cfg.potential;
    let r0 = p.r0;
    match r0 {
        None => d.push("[potential] r0 is required".into()),
        Some(r) if !(r > 0.0) => d.push(format!("[potential] r0 must be positive, got {r}")),
        _ => {}
    }
    if let Some(mu) = p.mu {
        if !(0.0..=1.0).contains(&mu) {
            d.push(format!("[potential] mu must lie in [0, 1], got {mu}"));
        }
    }
    let family = p.family.unwrap_or(Family::Zero);
    let needs: &[(&str, Option<f64>)] = match family {
        Family::Zero => &[],
        Family::SquareWell => &[("depth", p.depth)],
        Family::Exponential => &[("depth", p.depth), ("range", p.range)],
        Family::Gaussian => &[("depth", p.depth), ("width", p.width)],
        Family::Tabulated => &[],
    };
    for (name, v) in needs {
        if v.is_none() {
            d.push(format!("[potential] {name} is required for this family"));
        }
    }
    for (name, v) in [("range", p.range), ("width", p.width)] {
        if let Some(v) = v {
            if !(v > 0.0) {
                d.push(format!("[potential] {name} must be positive, got {v}"));
            }
        }
    }
    if family == Family::Tabulated {
        match &p.csv {
            None => d.push("[potential] csv is required for the tabulated family".into()),
            Some(path) => match std::fs::read_to_string(path) {
                Err(e) => d.push(format!("[potential] cannot read {}: {e}", path.display())),
                Ok(text) => {
                    if let Err(e) = Tabulated::from_csv(&text) {
                        d.push(format!("[potential] {}: {e}", path.display()));
                    }
                }
            },
        }
    }

    for t in &cfg.kernel_terms {
        let at = format!("[kernel-term] at line {}", t.line);
        match t.profile {
            None => d.push(format!("{at}: profile is required")),
            Some(ProfileKind::GaussianBump) => {
                if t.center.is_none() || t.width.is_none() {
                    d.push(format!("{at}: gaussian-bump needs center and width"));
                }
            }
            Some(ProfileKind::PolynomialBump) => {
                if t.a.is_none() || t.b.is_none() {
                    d.push(format!("{at}: polynomial-bump needs a and b"));
                }
            }
            Some(ProfileKind::Window) => match (t.lo, t.hi) {
                (Some(lo), Some(hi)) => {
                    if !(lo >= 0.0 && hi > lo) {
                        d.push(format!("{at}: window needs 0 <= lo < hi"));
                    }
                    if let Some(r0) = r0 {
                        if hi > r0 {
                            d.push(format!(
                                "{at}: kernel support [{lo}, {hi}] exceeds r0={r0}; U(r, r') must vanish for r >= r0"
                            ));
                        }
                    }
                }
                _ => d.push(format!("{at}: window needs lo and hi")),
            },
        }
        if cfg.coupling.is_none() && t.strength.is_none() {
            d.push(format!("{at}: strength is required without a [kernel] coupling matrix"));
        }
    }
    if let Some(m) = &cfg.coupling {
        let n = cfg.kernel_terms.len();
        if m.len() != n || m.iter().any(|row| row.len() != n) {
            d.push(format!("[kernel] coupling must be {n}x{n} to match the kernel terms"));
        } else if (0..n).any(|i| (0..i).any(|j| m[i][j] != m[j][i])) {
            d.push("[kernel] coupling must be symmetric (U(r, r') = U(r', r))".into());
        }
    }
    if !cfg.kernel_terms.is_empty() && lambda == Some(0.0) && !d.iter().any(|x| x.contains("λ=0")) {
        d.push("λ=0 unsupported with a non-local kernel (half-bound regime)".into());
    }

    let s = &cfg.scan;
    match cfg.task {
        Task::PhaseShift => {
            check_range(&mut d, "k", s.k_min, s.k_max, s.k_count);
            if let Some(k) = s.k_min {
                if !(k > 0.0) {
                    d.push(format!("[scan] k-min must be positive, got {k}"));
                }
            }
        }
        Task::SturmCheck => {
            check_range(&mut d, "e", s.e_min, s.e_max, s.e_count);
            if let Some(e) = s.e_max {
                let de = s.de.unwrap_or(0.0);
                if !(e + de < 0.0) {
                    d.push(format!("[scan] e-max + de must be negative, got {}", e + de));
                }
            }
            if let Some(de) = s.de {
                if !(de > 0.0) {
                    d.push(format!("[scan] de must be positive, got {de}"));
                }
            }
        }
        Task::BoundStates | Task::Levinson => {
            if let Some(e) = s.e_floor {
                if !(e < 0.0) {
                    d.push(format!("[scan] e-floor must be negative, got {e}"));
                }
            }
            if let Some(n) = s.e_count {
                if n < 2 {
                    d.push(format!("[scan] e-count must be >= 2, got {n}"));
                }
            }
        }
        Task::Solve => {
            let v = &cfg.solve;
            if v.kind.is_none() {
                d.push("[solve] kind is required".into());
            }
            match (v.k, v.energy) {
                (Some(_), Some(_)) => d.push("[solve] give either k or energy, not both".into()),
                (None, None) => d.push("[solve] k or energy is required".into()),
                _ => {}
            }
            if v.kind == Some(SolveKind::Jost) && v.energy.is_some() {
                d.push("[solve] jost solutions take k, not energy".into());
            }
            if let (Some(rm), Some(r0)) = (v.r_max, r0) {
                if rm < r0 {
                    d.push(format!("[solve] r-max={rm} must be >= r0={r0}"));
                }
            }
        }
        Task::WronskianAudit => {
            let a = &cfg.audit;
            if a.pair.is_none() {
                d.push("[audit] pair is required".into());
            }
            if a.k.is_none() {
                d.push("[audit] k is required".into());
            }
            if a.pair == Some(AuditPair::Phi) {
                if let Some(lam) = lambda {
                    if !(lam > 0.0 && lam < 0.5) {
                        d.push(format!("[audit] phi-phi-minus needs 0 < λ < 1/2, got λ={lam}"));
                    }
                }
            }
            if !cfg.kernel_terms.is_empty() {
                d.push("[audit] Wronskian audits cover local potentials only".into());
            }
        }
        Task::EvalSpecial => {}
    }
    if let Some(n) = s.mu_steps {
        if n == 0 {
            d.push("[scan] mu-steps must be >= 1".into());
        }
    }
    // whatever the model constructors still reject
    if d.is_empty() {
        if let Err(e) = cfg.potential_model() {
            d.push(e.to_string());
        }
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;

    const LEVINSON: &str = "version = 1\ntask = levinson\n[channel]\nq = 3\nl = 0\n[potential]\nfamily = square-well\ndepth = 9\nr0 = 1\n";

    #[test]
    fn parses_a_minimal_config() {
        let cfg = parse_config(LEVINSON, Path::new(".")).unwrap();
        assert_eq!(cfg.task, Task::Levinson);
        assert_eq!(cfg.channel, Some((3.0, 0.0)));
        assert!(validate(&cfg).is_empty());
        let pot = cfg.potential_model().unwrap();
        assert_eq!(pot.r0, 1.0);
    }

    #[test]
    fn reports_every_problem() {
        let text = "task = levinson\nbogus = 1\n[channel]\nq = 3\nl = x\n[nope]\n";
        let err = parse_config(text, Path::new(".")).unwrap_err().to_string();
        for needle in ["version", "bogus", "finite number", "[nope]"] {
            assert!(err.contains(needle), "missing '{needle}' in {err}");
        }
    }

    #[test]
    fn semantic_diagnostics() {
        let text = "version = 1\ntask = levinson\n[channel]\nq = 2\nl = 0\n[potential]\nr0 = -1\n[kernel-term]\nprofile = window\nlo = 0.1\nhi = 0.5\nstrength = -1\n";
        let cfg = parse_config(text, Path::new(".")).unwrap();
        let d = validate(&cfg);
        assert!(d.iter().any(|m| m.contains("λ=0 unsupported (half-bound regime)")), "{d:?}");
        assert!(d.iter().any(|m| m.contains("r0 must be positive")), "{d:?}");

        let text = "version = 1\ntask = bound-states\n[channel]\nq = 3\nl = 0\n[potential]\nr0 = 1\n[kernel-term]\nprofile = window\nlo = 0.1\nhi = 1.5\nstrength = -1\n";
        let cfg = parse_config(text, Path::new(".")).unwrap();
        let d = validate(&cfg);
        assert!(d.iter().any(|m| m.contains("exceeds r0")), "{d:?}");
    }
}
