//! Command front-end: `spectral`, `bounds`, `oracle` and `attack`.
//!
//! Each `cmd_*` returns its output as a string so it can be tested without
//! a process boundary; [`run`] handles files, stderr and exit codes.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use nalgebra::DVector;
use serde::Serialize;
use thiserror::Error;

use crate::attack::{self, AttackError, AttackTrace, Defender, Mode, ProjectedWorstCase, SaturatingFeedback, ZeroInput};
use crate::bounds::{best_bound, BestBound, BoundError, Justification, KStar, Theorem};
use crate::config::{AnalysisConfig, ConfigError};
use crate::oracle::{critical_alpha, OracleError};
use crate::sets::SetError;
use crate::spectral::{rotating_direction, BlockKind, SpectralDecomposition};
use crate::system::LinearSystem;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Bound(BoundError),
    #[error(transparent)]
    Oracle(OracleError),
    #[error(transparent)]
    Attack(AttackError),
    #[error("cannot write {path}: {source}")]
    Io { path: String, source: std::io::Error },
}

impl From<BoundError> for CliError {
    fn from(e: BoundError) -> Self {
        CliError::Bound(e)
    }
}

impl From<OracleError> for CliError {
    fn from(e: OracleError) -> Self {
        CliError::Oracle(e)
    }
}

impl From<AttackError> for CliError {
    fn from(e: AttackError) -> Self {
        CliError::Attack(e)
    }
}

impl From<SetError> for CliError {
    fn from(e: SetError) -> Self {
        CliError::Config(ConfigError::Set(e))
    }
}

impl CliError {
    /// 0 success, 2 config or usage, 3 no applicable bound, 4 oracle
    /// unsupported, 5 numerical failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Usage(_) => 2,
            CliError::Bound(BoundError::NoApplicableBlock) => 3,
            CliError::Bound(_) => 5,
            CliError::Oracle(OracleError::DimensionUnsupported(_)) => 4,
            CliError::Oracle(OracleError::UpperBoundNotEmpty { .. } | OracleError::InvalidAlpha(_) | OracleError::InvalidTolerance(_)) => 2,
            CliError::Oracle(_) => 5,
            CliError::Attack(
                AttackError::RealBlockRequired
                | AttackError::NoSuchBlock(_)
                | AttackError::InvalidAlpha(_)
                | AttackError::BadInitialState { .. }
                | AttackError::InitialStateOutside,
            ) => 2,
            CliError::Attack(_) => 5,
            CliError::Io { .. } => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

fn num(v: f64) -> String {
    format!("{v:.16e}")
}

fn load(cfg: &AnalysisConfig) -> Result<(LinearSystem, SpectralDecomposition)> {
    let sys = cfg.system()?;
    let spec = cfg.spectral(&sys)?;
    Ok((sys, spec))
}

fn kind_label(kind: BlockKind) -> &'static str {
    match kind {
        BlockKind::RealPositive => "real-positive",
        BlockKind::RealNegative => "real-negative",
        BlockKind::RealZero => "real-zero",
        BlockKind::ComplexPair => "complex-pair",
    }
}

/// Support values along one spectral direction `z`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SupportRow {
    pub block: usize,
    /// `phi_j` for real blocks, `psi^l_j` for complex ones.
    pub direction: String,
    pub z: Vec<f64>,
    pub hx_plus: f64,
    pub hx_minus: f64,
    pub hbu_plus: f64,
    pub hbu_minus: f64,
    pub hw_plus: f64,
    pub hw_minus: f64,
}

pub fn support_table(sys: &LinearSystem, spec: &SpectralDecomposition) -> Result<Vec<SupportRow>> {
    let mut rows = Vec::new();
    for (i, b) in spec.blocks.iter().enumerate() {
        let mut dirs: Vec<(String, DVector<f64>)> = Vec::new();
        match (b.kind, b.period) {
            (BlockKind::ComplexPair, Some(m)) => {
                for j in 1..=2 {
                    for l in 0..m as usize {
                        let z = rotating_direction(b, j, l).map_err(ConfigError::Spectral)?;
                        dirs.push((format!("psi{l}_{j}"), z));
                    }
                }
            }
            _ => {
                for (j, z) in b.phi.iter().enumerate() {
                    dirs.push((format!("phi{}", j + 1), z.clone()));
                }
            }
        }
        for (direction, z) in dirs {
            let nz = -&z;
            rows.push(SupportRow {
                block: i,
                direction,
                z: z.iter().copied().collect(),
                hx_plus: sys.h_x(&z)?,
                hx_minus: sys.h_x(&nz)?,
                hbu_plus: sys.h_neg_bu(&z)?,
                hbu_minus: sys.h_neg_bu(&nz)?,
                hw_plus: sys.h_w(&z)?,
                hw_minus: sys.h_w(&nz)?,
            });
        }
    }
    Ok(rows)
}

/// Block list followed by the support table along every `±z`.
pub fn cmd_spectral(cfg: &AnalysisConfig) -> Result<String> {
    let (sys, spec) = load(cfg)?;
    let mut out = String::new();
    for (i, b) in spec.blocks.iter().enumerate() {
        let _ = write!(out, "# block {i}: {} size={}", kind_label(b.kind), b.size);
        if b.kind == BlockKind::ComplexPair {
            let _ = write!(out, " rho={} theta={}", num(b.rho), num(b.theta));
            match (b.angle_rational, b.period) {
                (Some((p, q)), Some(m)) => {
                    let _ = write!(out, " theta/pi={p}/{q} period={m}");
                }
                _ => out.push_str(" theta/pi=irrational"),
            }
        } else {
            let _ = write!(out, " lambda={}", num(b.lambda));
        }
        out.push('\n');
        for (j, phi) in b.phi.iter().enumerate() {
            let v: Vec<String> = phi.iter().map(|x| num(*x)).collect();
            let _ = writeln!(out, "#   phi{} = ({})", j + 1, v.join(", "));
        }
    }
    out.push_str("block,direction,h_X(+z),h_X(-z),h_-BU(+z),h_-BU(-z),h_W(+z),h_W(-z)\n");
    for r in support_table(&sys, &spec)? {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            r.block,
            r.direction,
            num(r.hx_plus),
            num(r.hx_minus),
            num(r.hbu_plus),
            num(r.hbu_minus),
            num(r.hw_plus),
            num(r.hw_minus)
        );
    }
    Ok(out)
}

const THEOREMS: [Theorem; 4] = [Theorem::T1, Theorem::T3, Theorem::T4, Theorem::T6];

/// Per-theorem value at `k`, minimized over blocks.
fn theorem_columns(b: &BestBound, k: usize) -> Vec<String> {
    THEOREMS
        .iter()
        .map(|&t| {
            let v = b
                .sequences
                .iter()
                .filter(|s| s.theorem == t)
                .map(|s| s.per_k[k - 1].bar)
                .fold(f64::INFINITY, f64::min);
            if v.is_finite() {
                num(v)
            } else {
                String::new()
            }
        })
        .collect()
}

fn certificate_line(b: &BestBound) -> String {
    let c = &b.certificate;
    let k = match c.k_star {
        KStar::Finite(k) => k.to_string(),
        KStar::Infinity => "inf".into(),
    };
    let how = match c.justification {
        Justification::LimitFormula => "limit",
        Justification::K1Value => "k1",
        Justification::MinOverComputed => "min-over-computed",
    };
    format!("# certificate alpha={} theorem={} block={} k_star={k} justification={how}\n", num(c.alpha), c.theorem.label(), c.block)
}

/// Per-`k` table of every applicable bound and the overall certificate.
pub fn cmd_bounds(cfg: &AnalysisConfig, k_max: Option<usize>) -> Result<String> {
    let (sys, spec) = load(cfg)?;
    let k_max = k_max.unwrap_or(cfg.k_max);
    let b = best_bound(&sys, &spec, k_max)?;
    let mut out = certificate_line(&b);
    out.push_str("k,bound_T1,bound_T3,bound_T4,bound_T6,min,winner\n");
    for p in &b.per_k {
        let _ = writeln!(out, "{},{},{},{}:b{}", p.k, theorem_columns(&b, p.k).join(","), num(p.value), p.theorem.label(), p.block);
    }
    Ok(out)
}

/// `α*_k` by bisection next to the bound columns.
pub fn cmd_oracle(cfg: &AnalysisConfig, k_max: Option<usize>, alpha_tol: Option<f64>, alpha_hi: Option<f64>) -> Result<String> {
    let (sys, spec) = load(cfg)?;
    if sys.n() != 2 {
        return Err(OracleError::DimensionUnsupported(sys.n()).into());
    }
    let k_max = k_max.unwrap_or(cfg.k_max);
    let tol = alpha_tol.unwrap_or(cfg.alpha_tol);
    let alpha_hi = alpha_hi.or(cfg.oracle.as_ref().and_then(|o| o.alpha_hi));
    let b = best_bound(&sys, &spec, k_max)?;
    let mut out = certificate_line(&b);
    out.push_str("k,alpha_star,bound_T1,bound_T3,bound_T4,bound_T6,winner,alpha_lo,alpha_hi\n");
    for p in &b.per_k {
        // any α above a bound at k empties C_k
        let hi = alpha_hi.unwrap_or(1.05 * p.value + tol);
        let c = critical_alpha(&sys, p.k, tol, hi)?;
        let _ = writeln!(
            out,
            "{},{},{},{}:b{},{},{}",
            p.k,
            num(c.estimate),
            theorem_columns(&b, p.k).join(","),
            p.theorem.label(),
            p.block,
            num(c.lo),
            num(c.hi)
        );
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DefenderKind {
    WorstCase,
    Zero,
    Saturating,
}

impl DefenderKind {
    fn parse(s: &str) -> Result<Self> {
        <Self as ValueEnum>::from_str(s, true).map_err(|_| CliError::Usage(format!("unknown defender {s:?}")))
    }

    pub fn build(self, sys: &LinearSystem) -> Box<dyn Defender> {
        match self {
            DefenderKind::WorstCase => Box::new(ProjectedWorstCase),
            DefenderKind::Zero => Box::new(ZeroInput),
            DefenderKind::Saturating => Box::new(SaturatingFeedback::deadbeat(sys)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum TraceMode {
    #[default]
    Full,
    Scalar,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct AttackArgs {
    pub alpha: Option<f64>,
    pub x0: Option<Vec<f64>>,
    pub block: Option<usize>,
    pub defender: Option<DefenderKind>,
    pub max_steps: Option<usize>,
    pub mode: TraceMode,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AttackOutput {
    pub csv: String,
    pub summary: String,
    pub trace: AttackTrace,
}

fn trace_csv(trace: &AttackTrace, n: usize, m: usize) -> String {
    let mut out = String::new();
    match trace.mode {
        Mode::Scalar => {
            out.push_str("k,xi,omega,upsilon\n");
            for s in &trace.steps {
                let (o, u) = s.applied.as_ref().map_or((String::new(), String::new()), |a| (num(a.omega), num(a.upsilon)));
                let _ = writeln!(out, "{},{},{o},{u}", s.k, num(s.xi));
            }
        }
        Mode::FullState => {
            let mut head = vec!["k".to_string()];
            head.extend((1..=n).map(|i| format!("x{i}")));
            head.extend((1..=m).map(|i| format!("u{i}")));
            head.extend((1..=n).map(|i| format!("w{i}")));
            head.push("in_X".into());
            out.push_str(&head.join(","));
            out.push('\n');
            for s in &trace.steps {
                let mut row = vec![s.k.to_string()];
                row.extend(s.state.iter().map(|v| num(*v)));
                match &s.applied {
                    Some(a) => {
                        row.extend(a.u.iter().map(|v| num(*v)));
                        row.extend(a.w.iter().map(|v| num(*v)));
                    }
                    None => row.extend(std::iter::repeat_n(String::new(), m + n)),
                }
                row.push(s.in_x.to_string());
                out.push_str(&row.join(","));
                out.push('\n');
            }
        }
    }
    out
}

/// Greedy attack trace and a one-line summary.
pub fn cmd_attack(cfg: &AnalysisConfig, args: &AttackArgs) -> Result<AttackOutput> {
    let (sys, spec) = load(cfg)?;
    let preset = cfg.attack.as_ref();
    let alpha = args
        .alpha
        .or(preset.map(|p| p.alpha))
        .ok_or_else(|| CliError::Usage("--alpha is required (no attack section in config)".into()))?;
    let block = match args.block.or(preset.and_then(|p| p.block)) {
        Some(b) => b,
        None => spec
            .blocks
            .iter()
            .position(|b| b.kind == BlockKind::RealPositive)
            .or_else(|| spec.blocks.iter().position(|b| b.kind.is_real()))
            .ok_or(AttackError::RealBlockRequired)?,
    };
    let defender = match args.defender {
        Some(d) => d,
        None => match preset.and_then(|p| p.defender.as_deref()) {
            Some(s) => DefenderKind::parse(s)?,
            None => DefenderKind::WorstCase,
        },
    };
    let x0 = DVector::from_vec(args.x0.clone().or(preset.and_then(|p| p.x0.clone())).unwrap_or_else(|| vec![0.0; sys.n()]));
    let p = attack::project_block(&sys, &spec, block, alpha)?;
    if x0.len() != sys.n() {
        return Err(AttackError::BadInitialState { expected: sys.n(), got: x0.len() }.into());
    }
    let xi0 = p.phi_vector().dot(&x0);
    let max_steps = args.max_steps.or(preset.and_then(|p| p.max_steps)).unwrap_or_else(|| p.default_max_steps(xi0));
    let trace = match args.mode {
        TraceMode::Scalar => attack::simulate_scalar(&p, xi0, max_steps),
        TraceMode::Full => {
            let mut d = defender.build(&sys);
            attack::simulate_fullstate(&sys, &p, &x0, max_steps, d.as_mut())?
        }
    };
    let summary = trace.summary(max_steps);
    Ok(AttackOutput { csv: trace_csv(&trace, sys.n(), sys.m()), summary, trace })
}

#[derive(Debug, Parser)]
#[command(name = "rci-bounds", version, about = "Disturbance-scaling bounds for robust control invariance")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Jordan blocks and support values along their directions.
    Spectral {
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Closed-form bounds for k = 1..K.
    Bounds {
        config: PathBuf,
        #[arg(long = "kmax")]
        k_max: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact critical scaling by bisection (n = 2 only).
    Oracle {
        config: PathBuf,
        #[arg(long = "kmax")]
        k_max: Option<usize>,
        #[arg(long)]
        alpha_tol: Option<f64>,
        #[arg(long)]
        alpha_hi: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Greedy attack along a real eigenvector.
    Attack {
        config: PathBuf,
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        x0: Option<Vec<f64>>,
        #[arg(long)]
        block: Option<usize>,
        #[arg(long, value_enum)]
        defender: Option<DefenderKind>,
        #[arg(long)]
        max_steps: Option<usize>,
        #[arg(long, value_enum, default_value_t = TraceMode::Full)]
        mode: TraceMode,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|source| CliError::Io { path: path.display().to_string(), source }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn dispatch(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Spectral { config, out } => emit(&cmd_spectral(&AnalysisConfig::load(&config)?)?, out.as_ref()),
        Command::Bounds { config, k_max, out } => emit(&cmd_bounds(&AnalysisConfig::load(&config)?, k_max)?, out.as_ref()),
        Command::Oracle { config, k_max, alpha_tol, alpha_hi, out } => {
            emit(&cmd_oracle(&AnalysisConfig::load(&config)?, k_max, alpha_tol, alpha_hi)?, out.as_ref())
        }
        Command::Attack { config, alpha, x0, block, defender, max_steps, mode, out } => {
            let args = AttackArgs { alpha, x0, block, defender, max_steps, mode };
            let res = cmd_attack(&AnalysisConfig::load(&config)?, &args)?;
            match &out {
                Some(_) => {
                    emit(&res.csv, out.as_ref())?;
                    println!("{}", res.summary);
                }
                None => {
                    print!("{}", res.csv);
                    eprintln!("{}", res.summary);
                }
            }
            Ok(())
        }
    }
}

/// Runs a parsed command line and returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    match dispatch(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
