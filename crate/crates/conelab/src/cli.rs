//! Command-line interface: one binary, subcommand style, deterministic
//! experiment orchestration.
//!
//! Exit codes: 0 — all checks passed or not applicable; 1 — a checked claim
//! failed, with a witness report written; 2 — usage or input error;
//! 3 — internal error (resource exhaustion). `CONELAB_THREADS` caps worker
//! parallelism for the search commands; results are merged by trial index,
//! so the thread count never changes a report.

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use num_traits::Zero;
use rayon::prelude::*;

use conelab_core::cone::Cone;
use conelab_core::convolve::{convolve, PowerCache};
use conelab_core::lab::{
    self, aggregate_thm2, aggregate_uniqueness, thm2_probe_pairs, thm2_trial,
    uniqueness_constructive, uniqueness_trial, verify_lemma1_instance, verify_lemma2_instance,
    LabError,
};
use conelab_core::measure::{AtomicMeasure, MeasureError, RegionSpec};
use conelab_core::report::CheckReport;
use conelab_core::sampler::{SamplerConfig, DEFAULT_SEED};
use conelab_core::scalar::{format_rational, parse_rational, Rational, Scalar};

use crate::fejer::{self, GridSpec};
use crate::io::{self, IoError, Measure};

/// Report schema version, printed by `--version`.
pub const VERSION_LINE: &str = concat!(env!("CARGO_PKG_VERSION"), " (report schema 1)");

/// Default path for the report when a claim fails and `--json` was absent:
/// exit code 1 always comes with a witness file.
pub const DEFAULT_REPORT_PATH: &str = "conelab-report.json";

#[derive(Parser)]
#[command(name = "conelab", version = VERSION_LINE)]
#[command(about = "Verification lab for support behaviour of signed measures under convolution")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// Convolve two measures, or compute convolution powers (`conv pow`).
    Conv(ConvCmd),
    /// Print the exact cone-support value of a measure.
    Suppc {
        /// Cone spec: `dim=N,m=P/Q` (1d: `dim=1`).
        #[arg(long)]
        cone: String,
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Verify a support-lemma instance on explicit measures.
    Verify {
        #[command(subcommand)]
        claim: VerifyClaim,
    },
    /// Seeded falsification and uniqueness searches.
    Search {
        #[command(subcommand)]
        kind: SearchKind,
    },
    /// Reproduce the half-plane counterexample numerically.
    Fejer(FejerCmd),
    /// Measure file utilities.
    Measure {
        #[command(subcommand)]
        action: MeasureAction,
    },
}

#[derive(Args)]
pub struct ConvCmd {
    #[command(subcommand)]
    pub sub: Option<ConvSub>,
    /// Input measure files (exactly two).
    #[arg(long = "in")]
    pub inputs: Vec<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Subcommand)]
pub enum ConvSub {
    /// Convolution powers, writing every intermediate power.
    Pow {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(short, long)]
        k: usize,
        /// Output directory; writes `<stem>^1.json` … `<stem>^k.json`.
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Subcommand)]
pub enum VerifyClaim {
    /// Factor-support bound: supports in C(h), supp_C(b*a) ≤ 0 and
    /// supp_C a = −p imply supp_C b ≤ p.
    Lemma1 {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        #[arg(long)]
        cone: String,
        /// Shift of the common containing cone; defaults to the smallest
        /// certified integer shift.
        #[arg(long)]
        h: Option<String>,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Mixed-power-sum support: supp_C of Σ a^{*(k−j)} b^{*j} equals k·r.
    Lemma2 {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        #[arg(long)]
        cone: String,
        /// Common cone-support value r > 0.
        #[arg(long)]
        r: String,
        #[arg(long, default_value_t = 4)]
        kmax: usize,
        #[arg(long)]
        json: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
pub enum SearchKind {
    /// Falsification search for cone-support additivity.
    Thm2 {
        #[arg(long)]
        cone: String,
        #[arg(long, default_value_t = 100)]
        trials: u64,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        atoms_min: usize,
        #[arg(long, default_value_t = 6)]
        atoms_max: usize,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Search for distinct pairs whose powers agree outside the cone.
    Uniqueness {
        #[arg(long)]
        cone: String,
        /// Shift of the containing cone C(h), h > 0.
        #[arg(long, default_value = "2")]
        h: String,
        #[arg(long, default_value_t = 6)]
        kmax: usize,
        #[arg(long, default_value_t = 500)]
        trials: u64,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        atoms_min: usize,
        #[arg(long, default_value_t = 6)]
        atoms_max: usize,
        #[arg(long)]
        json: Option<PathBuf>,
    },
}

#[derive(Args)]
pub struct FejerCmd {
    /// Half-width of the y grid.
    #[arg(long = "L", default_value_t = 200.0)]
    pub half_width: f64,
    /// Power-of-two sample count.
    #[arg(long = "N", default_value_t = 1 << 16)]
    pub samples: usize,
    #[arg(long, default_value_t = 6)]
    pub kmax: usize,
    #[arg(long, default_value_t = 0.02)]
    pub tol: f64,
    #[arg(long)]
    pub json: Option<PathBuf>,
    /// Directory for per-power density CSV tables.
    #[arg(long = "dump-csv")]
    pub dump_csv: Option<PathBuf>,
}

#[derive(Subcommand)]
pub enum MeasureAction {
    /// Dimensions, mode, atom count, and total variation.
    Info {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Load (canonicalizing) and re-save.
    Canon {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Restrict to a region: `all`, `half:P`, `complement:P`, `shell:P,Q`.
    Restrict {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        region: String,
        #[arg(long)]
        cone: Option<String>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Compare two measures on a region.
    EqualOn {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        #[arg(long)]
        region: String,
        #[arg(long)]
        cone: Option<String>,
        /// Weight tolerance (float mode only; exact mode requires 0).
        #[arg(long, default_value_t = 0.0)]
        tol: f64,
    },
    /// Total variation.
    Tv {
        #[arg(long = "in")]
        input: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitStatus {
    Pass,
    ClaimFailed,
    UsageError,
    InternalError,
}

impl ExitStatus {
    pub fn code(self) -> i32 {
        match self {
            ExitStatus::Pass => 0,
            ExitStatus::ClaimFailed => 1,
            ExitStatus::UsageError => 2,
            ExitStatus::InternalError => 3,
        }
    }
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Io(#[from] IoError),
    #[error("{0}")]
    Internal(String),
}

impl CliError {
    fn status(&self) -> ExitStatus {
        match self {
            CliError::Usage(_) | CliError::Io(_) => ExitStatus::UsageError,
            CliError::Internal(_) => ExitStatus::InternalError,
        }
    }
}

impl From<MeasureError> for CliError {
    fn from(e: MeasureError) -> Self {
        CliError::Usage(format!("{e}"))
    }
}

impl From<LabError> for CliError {
    fn from(e: LabError) -> Self {
        CliError::Usage(format!("{e}"))
    }
}

impl From<fejer::FejerError> for CliError {
    fn from(e: fejer::FejerError) -> Self {
        match e {
            fejer::FejerError::GridOverflow { .. } => CliError::Internal(format!("{e}")),
            fejer::FejerError::InvalidGrid(_) => CliError::Usage(format!("{e}")),
        }
    }
}

/// Parses `dim=N,m=P/Q` (slope defaults to 1; ignored when dim = 1).
pub fn parse_cone(spec: &str) -> Result<Cone, String> {
    let mut dim: Option<usize> = None;
    let mut slope: Option<Rational> = None;
    for part in spec.split(',') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        match part.split_once('=') {
            Some(("dim", v)) => {
                dim = Some(v.parse().map_err(|_| format!("bad cone dimension `{v}`"))?);
            }
            Some(("m", v)) => {
                slope = Some(parse_rational(v).map_err(|e| format!("bad cone slope: {e}"))?);
            }
            _ => {
                return Err(format!(
                    "unknown cone field `{part}` (expected dim=N,m=P/Q)"
                ))
            }
        }
    }
    let dim = dim.ok_or("cone spec needs dim=N")?;
    let slope = slope.unwrap_or_else(|| Rational::from_i64(1));
    Cone::new(dim, slope).map_err(|e| format!("{e}"))
}

fn parse_region(spec: &str, cone: Option<&Cone>) -> Result<RegionSpec, CliError> {
    let need_cone = || {
        cone.cloned()
            .ok_or_else(|| CliError::Usage("this region requires --cone".to_string()))
    };
    if spec == "all" {
        return Ok(RegionSpec::All);
    }
    if let Some(p) = spec.strip_prefix("half:") {
        let shift = parse_rational(p).map_err(|e| CliError::Usage(format!("{e}")))?;
        return Ok(RegionSpec::LeftHalfSpace { shift });
    }
    if let Some(p) = spec.strip_prefix("complement:") {
        let shift = parse_rational(p).map_err(|e| CliError::Usage(format!("{e}")))?;
        return Ok(RegionSpec::ConeComplement {
            cone: need_cone()?,
            shift,
        });
    }
    if let Some(p) = spec.strip_prefix("shell:") {
        let (inner, outer) = p
            .split_once(',')
            .ok_or_else(|| CliError::Usage("shell region needs `shell:P,Q`".to_string()))?;
        let inner = parse_rational(inner).map_err(|e| CliError::Usage(format!("{e}")))?;
        let outer = parse_rational(outer).map_err(|e| CliError::Usage(format!("{e}")))?;
        return RegionSpec::cone_shell(need_cone()?, inner, outer)
            .map_err(|e| CliError::Usage(format!("{e}")));
    }
    Err(CliError::Usage(format!(
        "unknown region `{spec}` (expected all | half:P | complement:P | shell:P,Q)"
    )))
}

fn cone_from_flag(spec: &str) -> Result<Cone, CliError> {
    parse_cone(spec).map_err(CliError::Usage)
}

/// Writes the report, honoring the exit-code contract: a failed claim gets
/// a witness file even without `--json`.
fn finish_report(
    name: &str,
    report: &CheckReport,
    json: Option<&Path>,
) -> Result<ExitStatus, CliError> {
    let failed = report.failed();
    let path: Option<PathBuf> = match (json, failed) {
        (Some(p), _) => Some(p.to_path_buf()),
        (None, true) => Some(PathBuf::from(DEFAULT_REPORT_PATH)),
        (None, false) => None,
    };
    if let Some(path) = &path {
        io::save_report(report, path)?;
    }
    if failed {
        println!(
            "{name}: FAILED — {} witness(es), report at {}",
            report.witnesses.len(),
            path.expect("written above").display()
        );
        Ok(ExitStatus::ClaimFailed)
    } else if !report.is_applicable() {
        let violated = report
            .hypotheses
            .iter()
            .find(|h| !h.satisfied)
            .map(|h| h.name.as_str())
            .unwrap_or("?");
        println!("{name}: NOT APPLICABLE (hypothesis `{violated}` failed)");
        Ok(ExitStatus::Pass)
    } else {
        println!("{name}: PASS");
        Ok(ExitStatus::Pass)
    }
}

fn load_exact(path: &Path, what: &str) -> Result<AtomicMeasure<Rational>, CliError> {
    match io::load_measure(path)? {
        Measure::Exact(m) => Ok(m),
        Measure::Float(_) => Err(CliError::Usage(format!(
            "{what}: {} is a float-mode measure, exact mode required",
            path.display()
        ))),
    }
}

/// Smallest certified integer shift h > 0 with both supports in C(h).
fn default_h(
    cone: &Cone,
    a: &AtomicMeasure<Rational>,
    b: &AtomicMeasure<Rational>,
) -> Result<Rational, CliError> {
    let sa = cone.supp_c(a)?;
    let sb = cone.supp_c(b)?;
    let approx = sa.approx().max(sb.approx()).max(0.0);
    let mut h = Rational::from_i64(approx.ceil() as i64 + 1);
    for _ in 0..64 {
        if cone.contains_support(a, &h)? && cone.contains_support(b, &h)? {
            return Ok(h);
        }
        h += Rational::from_i64(1);
    }
    Err(CliError::Internal(
        "could not certify a containing shift".to_string(),
    ))
}

fn cmd_conv(cmd: ConvCmd) -> Result<ExitStatus, CliError> {
    if let Some(ConvSub::Pow { input, k, out }) = cmd.sub {
        if k == 0 {
            return Err(CliError::Usage("power k must be at least 1".to_string()));
        }
        let stem = input
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "measure".to_string());
        match io::load_measure(&input)? {
            Measure::Exact(m) => {
                let mut cache = PowerCache::new(m);
                for i in 1..=k {
                    let p = cache.power(i)?.clone();
                    io::save_measure(&Measure::Exact(p), &out.join(format!("{stem}^{i}.json")))?;
                }
            }
            Measure::Float(m) => {
                let mut cache = PowerCache::new(m);
                for i in 1..=k {
                    let p = cache.power(i)?.clone();
                    io::save_measure(&Measure::Float(p), &out.join(format!("{stem}^{i}.json")))?;
                }
            }
        }
        return Ok(ExitStatus::Pass);
    }
    if cmd.inputs.len() != 2 {
        return Err(CliError::Usage(format!(
            "conv needs exactly two --in measures, got {}",
            cmd.inputs.len()
        )));
    }
    let out = cmd
        .out
        .ok_or_else(|| CliError::Usage("conv needs --out".to_string()))?;
    let a = io::load_measure(&cmd.inputs[0])?;
    let b = io::load_measure(&cmd.inputs[1])?;
    let result = match (a, b) {
        (Measure::Exact(a), Measure::Exact(b)) => Measure::Exact(convolve(&a, &b)?),
        (Measure::Float(a), Measure::Float(b)) => Measure::Float(convolve(&a, &b)?),
        _ => {
            return Err(CliError::Usage(
                "mode mismatch: both inputs must be exact or both float".to_string(),
            ))
        }
    };
    io::save_measure(&result, &out)?;
    Ok(ExitStatus::Pass)
}

fn cmd_suppc(cone: String, input: PathBuf) -> Result<ExitStatus, CliError> {
    let cone = cone_from_flag(&cone)?;
    match io::load_measure(&input)? {
        Measure::Exact(m) => {
            let v = cone.supp_c(&m)?;
            println!("{v}");
        }
        Measure::Float(m) => {
            let v = cone.supp_c_f64(&m)?;
            println!("{v}");
        }
    }
    Ok(ExitStatus::Pass)
}

fn cmd_verify(claim: VerifyClaim) -> Result<ExitStatus, CliError> {
    match claim {
        VerifyClaim::Lemma1 {
            a,
            b,
            cone,
            h,
            json,
        } => {
            let cone = cone_from_flag(&cone)?;
            let a = load_exact(&a, "verify lemma1")?;
            let b = load_exact(&b, "verify lemma1")?;
            let h = match h {
                Some(s) => parse_rational(&s).map_err(|e| CliError::Usage(format!("{e}")))?,
                None => default_h(&cone, &a, &b)?,
            };
            let report = verify_lemma1_instance(&a, &b, &cone, &h)?;
            finish_report("lemma1", &report, json.as_deref())
        }
        VerifyClaim::Lemma2 {
            a,
            b,
            cone,
            r,
            kmax,
            json,
        } => {
            let cone = cone_from_flag(&cone)?;
            let a = load_exact(&a, "verify lemma2")?;
            let b = load_exact(&b, "verify lemma2")?;
            let r = parse_rational(&r).map_err(|e| CliError::Usage(format!("{e}")))?;
            let report = verify_lemma2_instance(&a, &b, &cone, &r, kmax)?;
            finish_report("lemma2", &report, json.as_deref())
        }
    }
}

fn cmd_search(kind: SearchKind) -> Result<ExitStatus, CliError> {
    match kind {
        SearchKind::Thm2 {
            cone,
            trials,
            seed,
            atoms_min,
            atoms_max,
            json,
        } => {
            let cone = cone_from_flag(&cone)?;
            let cfg = SamplerConfig::new(cone, seed)
                .with_atoms(atoms_min, atoms_max)
                .with_trials(trials);
            let started = Instant::now();
            // Trials merge by index, so parallel execution cannot change
            // the report.
            let mut outcomes = Vec::new();
            for (i, (a, b)) in thm2_probe_pairs(&cfg.cone).into_iter().enumerate() {
                outcomes.push(lab::thm2_outcome_for_probe(&cfg.cone, &a, &b, i)?);
            }
            let sampled: Result<Vec<_>, _> = (0..cfg.trials)
                .into_par_iter()
                .map(|i| thm2_trial(&cfg, i))
                .collect();
            outcomes.extend(sampled?);
            let report = aggregate_thm2(&cfg, outcomes);
            eprintln!(
                "search thm2: {} trials in {:.2?}",
                trials,
                started.elapsed()
            );
            finish_report("search thm2", &report, json.as_deref())
        }
        SearchKind::Uniqueness {
            cone,
            h,
            kmax,
            trials,
            seed,
            atoms_min,
            atoms_max,
            json,
        } => {
            let cone = cone_from_flag(&cone)?;
            let h = parse_rational(&h).map_err(|e| CliError::Usage(format!("{e}")))?;
            if h <= Rational::zero() {
                return Err(CliError::Usage("h must be positive".to_string()));
            }
            let cfg = SamplerConfig::new(cone, seed)
                .with_atoms(atoms_min, atoms_max)
                .with_trials(trials);
            let started = Instant::now();
            let outcomes: Result<Vec<_>, _> = (0..cfg.trials)
                .into_par_iter()
                .map(|i| uniqueness_trial(&cfg, &h, kmax, i))
                .collect();
            let constructive = uniqueness_constructive(&cfg, &h, kmax)?;
            let report = aggregate_uniqueness(&cfg, &h, kmax, outcomes?, constructive);
            eprintln!(
                "search uniqueness: {} trials in {:.2?}",
                trials,
                started.elapsed()
            );
            finish_report("search uniqueness", &report, json.as_deref())
        }
    }
}

fn cmd_fejer(cmd: FejerCmd) -> Result<ExitStatus, CliError> {
    let grid = GridSpec::new(cmd.half_width, cmd.samples)?;
    let started = Instant::now();
    let run = fejer::run_counterexample(&grid, cmd.kmax, cmd.tol)?;
    eprintln!(
        "fejer: k ≤ {} verified in {:.2?}",
        cmd.kmax,
        started.elapsed()
    );
    if let Some(dir) = &cmd.dump_csv {
        for k in 1..=cmd.kmax {
            io::dump_density_csv(dir, k, &run.mu_powers[k - 1], &run.nu_powers[k - 1])?;
        }
    }
    finish_report("fejer", &run.report, cmd.json.as_deref())
}

fn cmd_measure(action: MeasureAction) -> Result<ExitStatus, CliError> {
    match action {
        MeasureAction::Info { input } => {
            let m = io::load_measure(&input)?;
            let tv = match &m {
                Measure::Exact(m) => format_rational(&m.total_variation()),
                Measure::Float(m) => format!("{}", m.total_variation()),
            };
            println!(
                "dim={} mode={} atoms={} total_variation={}",
                m.dim(),
                m.mode_name(),
                m.atom_count(),
                tv
            );
            Ok(ExitStatus::Pass)
        }
        MeasureAction::Canon { input, out } => {
            let m = io::load_measure(&input)?;
            io::save_measure(&m, &out)?;
            Ok(ExitStatus::Pass)
        }
        MeasureAction::Restrict {
            input,
            region,
            cone,
            out,
        } => {
            let cone = cone.map(|c| cone_from_flag(&c)).transpose()?;
            let region = parse_region(&region, cone.as_ref())?;
            let m = io::load_measure(&input)?;
            let restricted = match m {
                Measure::Exact(m) => Measure::Exact(m.restrict(&region)?),
                Measure::Float(m) => Measure::Float(m.restrict(&region)?),
            };
            io::save_measure(&restricted, &out)?;
            Ok(ExitStatus::Pass)
        }
        MeasureAction::EqualOn {
            a,
            b,
            region,
            cone,
            tol,
        } => {
            let cone = cone.map(|c| cone_from_flag(&c)).transpose()?;
            let region = parse_region(&region, cone.as_ref())?;
            let a = io::load_measure(&a)?;
            let b = io::load_measure(&b)?;
            let equal = match (a, b) {
                (Measure::Exact(a), Measure::Exact(b)) => {
                    if tol != 0.0 {
                        return Err(CliError::Usage(
                            "exact measures require --tol 0".to_string(),
                        ));
                    }
                    a.equal_on(&b, &region, &Rational::zero())?
                }
                (Measure::Float(a), Measure::Float(b)) => {
                    if tol < 0.0 {
                        return Err(CliError::Usage("--tol must be non-negative".to_string()));
                    }
                    a.equal_on(&b, &region, &tol)?
                }
                _ => {
                    return Err(CliError::Usage(
                        "mode mismatch: both inputs must be exact or both float".to_string(),
                    ))
                }
            };
            println!("{equal}");
            Ok(ExitStatus::Pass)
        }
        MeasureAction::Tv { input } => {
            match io::load_measure(&input)? {
                Measure::Exact(m) => println!("{}", format_rational(&m.total_variation())),
                Measure::Float(m) => println!("{}", m.total_variation()),
            }
            Ok(ExitStatus::Pass)
        }
    }
}

/// Dispatches a parsed command line.
pub fn run(cli: Cli) -> ExitStatus {
    let result = match cli.command {
        Command::Conv(cmd) => cmd_conv(cmd),
        Command::Suppc { cone, input } => cmd_suppc(cone, input),
        Command::Verify { claim } => cmd_verify(claim),
        Command::Search { kind } => cmd_search(kind),
        Command::Fejer(cmd) => cmd_fejer(cmd),
        Command::Measure { action } => cmd_measure(action),
    };
    match result {
        Ok(status) => status,
        Err(e) => {
            eprintln!("error: {e}");
            e.status()
        }
    }
}

/// Builds the global worker pool from `CONELAB_THREADS` (0 or unset: rayon
/// default). Call once before `run`.
pub fn init_thread_pool() {
    if let Ok(v) = std::env::var("CONELAB_THREADS") {
        if let Ok(n) = v.trim().parse::<usize>() {
            if n >= 1 {
                let _ = rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build_global();
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cone_flag_parsing() {
        let c = parse_cone("dim=2,m=1").unwrap();
        assert_eq!(c.dim(), 2);
        assert_eq!(c.slope(), &Rational::from_i64(1));
        let c = parse_cone("dim=1").unwrap();
        assert_eq!(c.dim(), 1);
        let c = parse_cone("dim=3,m=5/2").unwrap();
        assert_eq!(c.slope(), &parse_rational("5/2").unwrap());
        assert!(parse_cone("m=1").is_err());
        assert!(parse_cone("dim=2,m=0").is_err());
        assert!(parse_cone("dim=2,q=1").is_err());
    }

    #[test]
    fn region_parsing() {
        assert!(matches!(
            parse_region("all", None).unwrap(),
            RegionSpec::All
        ));
        assert!(matches!(
            parse_region("half:-3/2", None).unwrap(),
            RegionSpec::LeftHalfSpace { .. }
        ));
        let cone = parse_cone("dim=2,m=1").unwrap();
        assert!(matches!(
            parse_region("complement:0", Some(&cone)).unwrap(),
            RegionSpec::ConeComplement { .. }
        ));
        assert!(parse_region("complement:0", None).is_err());
        assert!(parse_region("shell:1,0", Some(&cone)).is_err());
        assert!(parse_region("shell:0,1", Some(&cone)).is_ok());
        assert!(parse_region("wedge:1", None).is_err());
    }
}
