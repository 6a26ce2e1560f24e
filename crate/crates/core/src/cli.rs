//! Batch front end: `kd-table`, `audit` and `coherence`.
//!
//! Exit codes: 0 when every gating check passes, 1 when a check fails,
//! 2 on a parse or construction error.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::complexify::{monoidal_coherence, COHERENCE_TOL};
use crate::error::{Error, Result};
use crate::frames::{canonical_dual, represent_state, DualPair, FrameFile};
use crate::gpt::{make_system, SystemDescriptor, SystemKind};
use crate::kd::{kd_distribution, kd_frame_pair, kd_table_csv, KdBases, KdBasesFile, Preset};
use crate::linalg::{CMat, MatrixJson};
use crate::random::{random_density, rng};
use crate::structure::{audit_with_tolerances, AuditTolerances, Representation, SystemRep};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CommandName {
    KdTable,
    Audit,
    Coherence,
}

/// Everything a run needs. Loadable from JSON; command-line flags override.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub command: Option<CommandName>,
    /// Systems to audit. Defaults to the quantum system the bases or frame act on.
    pub systems: Vec<SystemDescriptor>,
    /// Preset name for basis `b` (basis `a` is computational), or a bases JSON file.
    pub bases: Option<String>,
    /// Frame file (`FrameFile` JSON) for `audit`.
    pub frame: Option<PathBuf>,
    /// State matrix (`MatrixJson`) for `kd-table`; a seeded random state otherwise.
    pub state: Option<PathBuf>,
    /// Evaluate the KD table through the KD frame pair (needs faithful bases).
    pub via_frame: bool,
    pub dim: Option<usize>,
    /// Real dimensions for `coherence`.
    pub dims: Vec<usize>,
    pub trials: usize,
    pub seed: u64,
    /// Overrides the decomposition threshold (`audit`) or the coherence threshold.
    pub tol: Option<f64>,
    pub tolerances: AuditTolerances,
    pub out: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            command: None,
            systems: Vec::new(),
            bases: None,
            frame: None,
            state: None,
            via_frame: false,
            dim: None,
            dims: Vec::new(),
            trials: 20,
            seed: 0,
            tol: None,
            tolerances: AuditTolerances::default(),
            out: None,
        }
    }
}

impl RunConfig {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Ok(serde_json::from_str(&text)?)
    }

    fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::Invalid("trials must be ≥ 1".into()));
        }
        for p in [&self.frame, &self.state].into_iter().flatten() {
            if !p.exists() {
                return Err(Error::Invalid(format!("{} does not exist", p.display())));
            }
        }
        if let Some(t) = self.tol {
            if !(t.is_finite() && t >= 0.0) {
                return Err(Error::Invalid(format!("invalid tolerance {t}")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "quasirep",
    version,
    about = "Quasiprobability representation tables and audits"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Kirkwood–Dirac table of a state as CSV (a_label,b_label,re,im).
    KdTable(KdTableArgs),
    /// Audit a representation and write a JSON report.
    Audit(AuditArgs),
    /// Check the monoidal coherence of complexification and write a JSON report.
    Coherence(CoherenceArgs),
}

#[derive(Debug, Args, Default)]
pub struct CommonArgs {
    /// JSON run configuration; flags given here override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub trials: Option<usize>,
    #[arg(long)]
    pub tol: Option<f64>,
    /// Output file (stdout if absent).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct KdTableArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// computational | hadamard | fourier, or a bases JSON file.
    #[arg(long)]
    pub bases: Option<String>,
    /// State matrix JSON {"rows","cols","re","im"}.
    #[arg(long)]
    pub state: Option<PathBuf>,
    #[arg(long)]
    pub dim: Option<usize>,
    /// Compute through the KD frame pair; fails on non-faithful bases.
    #[arg(long)]
    pub frame: bool,
}

#[derive(Debug, Args)]
pub struct AuditArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Bases for a KD representation (ignored when --frame is given).
    #[arg(long)]
    pub bases: Option<String>,
    /// Frame file, with an optional dual (canonical dual otherwise).
    #[arg(long)]
    pub frame: Option<PathBuf>,
    #[arg(long)]
    pub dim: Option<usize>,
    /// Systems as kind:dim, e.g. quantum:2 or classical:3. Repeatable.
    #[arg(long = "system", value_parser = parse_system)]
    pub systems: Vec<SystemKind>,
}

#[derive(Debug, Args)]
pub struct CoherenceArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Real dimensions W,V[,Z].
    #[arg(long, value_delimiter = ',')]
    pub dims: Vec<usize>,
}

fn parse_system(s: &str) -> std::result::Result<SystemKind, String> {
    let (kind, dim) = s
        .split_once(':')
        .ok_or_else(|| format!("expected kind:dim, got {s:?}"))?;
    let dim: usize = dim
        .parse()
        .map_err(|e| format!("bad dimension in {s:?}: {e}"))?;
    match kind {
        "quantum" => Ok(SystemKind::Quantum(dim)),
        "classical" => Ok(SystemKind::Classical(dim)),
        _ => Err(format!("unknown system kind {kind:?}")),
    }
}

fn descriptor(kind: SystemKind) -> SystemDescriptor {
    let (name, dim) = match kind {
        SystemKind::Quantum(d) => (crate::gpt::KindName::Quantum, d),
        SystemKind::Classical(n) => (crate::gpt::KindName::Classical, n),
    };
    SystemDescriptor {
        kind: name,
        dim,
        seed: 0,
    }
}

impl Cli {
    /// Merges flags over the optional config file.
    pub fn into_config(self) -> Result<RunConfig> {
        let (name, common) = match &self.command {
            Command::KdTable(a) => (CommandName::KdTable, &a.common),
            Command::Audit(a) => (CommandName::Audit, &a.common),
            Command::Coherence(a) => (CommandName::Coherence, &a.common),
        };
        let mut cfg = match &common.config {
            Some(p) => RunConfig::from_file(p)?,
            None => RunConfig::default(),
        };
        if let Some(c) = cfg.command {
            if c != name {
                return Err(Error::Invalid(format!(
                    "config is for {c:?}, command line asks for {name:?}"
                )));
            }
        }
        cfg.command = Some(name);
        if let Some(s) = common.seed {
            cfg.seed = s;
        }
        if let Some(t) = common.trials {
            cfg.trials = t;
        }
        if common.tol.is_some() {
            cfg.tol = common.tol;
        }
        if common.out.is_some() {
            cfg.out = common.out.clone();
        }
        match self.command {
            Command::KdTable(a) => {
                cfg.bases = a.bases.or(cfg.bases);
                cfg.state = a.state.or(cfg.state);
                cfg.dim = a.dim.or(cfg.dim);
                cfg.via_frame |= a.frame;
            }
            Command::Audit(a) => {
                cfg.bases = a.bases.or(cfg.bases);
                cfg.frame = a.frame.or(cfg.frame);
                cfg.dim = a.dim.or(cfg.dim);
                if !a.systems.is_empty() {
                    cfg.systems = a.systems.into_iter().map(descriptor).collect();
                }
            }
            Command::Coherence(a) => {
                if !a.dims.is_empty() {
                    cfg.dims = a.dims;
                }
            }
        }
        Ok(cfg)
    }
}

/// Text to emit and the exit code it carries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub output: String,
    pub code: i32,
}

pub fn run(cfg: &RunConfig) -> Result<Outcome> {
    cfg.validate()?;
    match cfg.command {
        Some(CommandName::KdTable) => run_kd_table(cfg),
        Some(CommandName::Audit) => run_audit(cfg),
        Some(CommandName::Coherence) => run_coherence(cfg),
        None => Err(Error::Invalid("no command given".into())),
    }
}

fn load_bases(arg: Option<&str>, dim: Option<usize>) -> Result<KdBases> {
    let arg = arg.unwrap_or("hadamard");
    match arg.parse::<Preset>() {
        Ok(preset) => KdBases::preset(preset, dim.unwrap_or(2)),
        Err(_) if Path::new(arg).exists() => {
            let text = std::fs::read_to_string(arg)?;
            let kb = serde_json::from_str::<KdBasesFile>(&text)?.into_bases()?;
            match dim {
                Some(d) if d != kb.dim() => Err(Error::Dimension(format!(
                    "--dim {d} but bases file has dimension {}",
                    kb.dim()
                ))),
                _ => Ok(kb),
            }
        }
        Err(e) => Err(e),
    }
}

fn load_matrix(path: &Path) -> Result<CMat> {
    let text = std::fs::read_to_string(path)?;
    serde_json::from_str::<MatrixJson>(&text)?.to_cmat()
}

pub fn run_kd_table(cfg: &RunConfig) -> Result<Outcome> {
    let rho = cfg.state.as_deref().map(load_matrix).transpose()?;
    let dim = cfg.dim.or(rho.as_ref().map(|r| r.nrows()));
    let kb = load_bases(cfg.bases.as_deref(), dim)?;
    let rho = match rho {
        Some(r) => r,
        None => random_density(&mut rng(cfg.seed), kb.dim()),
    };
    let table = if cfg.via_frame {
        let pair = kd_frame_pair(&kb)?;
        let mu = represent_state(&pair, &rho)?;
        let d = kb.dim();
        CMat::from_fn(d, d, |a, b| mu[a * d + b])
    } else {
        kd_distribution(&kb, &rho)?
    };
    Ok(Outcome {
        output: kd_table_csv(&kb, &table)?,
        code: EXIT_PASS,
    })
}

fn load_pair(path: &Path) -> Result<DualPair> {
    let file: FrameFile = serde_json::from_str(&std::fs::read_to_string(path)?)?;
    let frame = file.frame()?;
    match file.dual_frame()? {
        Some(dual) => DualPair::unchecked(frame, dual),
        None => canonical_dual(&frame),
    }
}

pub fn run_audit(cfg: &RunConfig) -> Result<Outcome> {
    let pair = cfg.frame.as_deref().map(load_pair).transpose()?;
    let mut kinds: Vec<SystemKind> = cfg.systems.iter().map(SystemDescriptor::kind).collect();
    if kinds.is_empty() {
        let d = match &pair {
            Some(p) => p.hilbert_dim(),
            None => cfg.dim.unwrap_or(2),
        };
        kinds.push(SystemKind::Quantum(d));
    }
    let seeds: BTreeMap<SystemKind, u64> = cfg.systems.iter().map(|s| (s.kind(), s.seed)).collect();

    let mut reps = BTreeMap::new();
    for &kind in &kinds {
        let sr = match (kind, &pair) {
            (SystemKind::Classical(n), _) => SystemRep::delta(n),
            (SystemKind::Quantum(d), Some(p)) if p.hilbert_dim() == d => {
                SystemRep::from_pair(p.clone())
            }
            (SystemKind::Quantum(d), Some(p)) => {
                return Err(Error::Dimension(format!(
                    "frame acts on d={}, system is quantum({d})",
                    p.hilbert_dim()
                )))
            }
            (SystemKind::Quantum(d), None) => {
                SystemRep::from_pair(kd_frame_pair(&load_bases(cfg.bases.as_deref(), Some(d))?)?)
            }
        };
        reps.insert(kind, sr);
    }
    let rep = Representation::unchecked(reps)?;
    let systems = kinds
        .iter()
        .map(|&k| make_system(k, seeds.get(&k).copied().unwrap_or(0)))
        .collect::<Result<Vec<_>>>()?;

    let mut tolerances = cfg.tolerances;
    if let Some(t) = cfg.tol {
        tolerances.decomposition = t;
    }
    let report = audit_with_tolerances(&rep, &systems, cfg.trials, cfg.seed, tolerances)?;
    let code = if report.passes() {
        EXIT_PASS
    } else {
        EXIT_FAIL
    };
    Ok(Outcome {
        output: serde_json::to_string_pretty(&report)? + "\n",
        code,
    })
}

pub fn run_coherence(cfg: &RunConfig) -> Result<Outcome> {
    let dims = if cfg.dims.is_empty() {
        vec![3, 3, 2]
    } else {
        cfg.dims.clone()
    };
    let report = monoidal_coherence(&dims, cfg.trials, cfg.seed)?;
    let tol = cfg.tol.unwrap_or(COHERENCE_TOL);
    let code = if report.passes(tol) {
        EXIT_PASS
    } else {
        EXIT_FAIL
    };
    Ok(Outcome {
        output: serde_json::to_string_pretty(&report)? + "\n",
        code,
    })
}

/// Parses arguments, runs, writes the output once, and returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_ERROR
            } else {
                EXIT_PASS
            };
            let _ = e.print();
            return code;
        }
    };
    let result = cli.into_config().and_then(|cfg| {
        let outcome = run(&cfg)?;
        match &cfg.out {
            Some(path) => std::fs::write(path, &outcome.output)?,
            None => print!("{}", outcome.output),
        }
        Ok(outcome.code)
    });
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_ERROR
        }
    }
}
