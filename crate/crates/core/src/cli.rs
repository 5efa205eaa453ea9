//! The `bfic` command line.
//!
//! Every command writes its artifacts into the output directory (`--out`, or
//! `BFIC_OUT_DIR`, or the working directory) with atomic temp-file renames.
//! Settings resolve as flags, then the optional `--config` TOML file, then
//! built-in defaults.
//!
//! Exit codes: 0 success, 1 a verification failed, 2 invalid input.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::channel::{contracted_law, ChannelParams, ContractedLaw};
use crate::entropy::{
    claim_mutual_information, leakage_campaign, verify_claim_independence, verify_hk_closed_forms, EncoderCoupling,
    EncoderPair, IdentityCheck, LeakageMode, VerificationReport, IDENTITY_TOL,
};
use crate::error::Error;
use crate::hk::{self, SplitParams};
use crate::regions::{self, RatePair, RateRegion, Regime, RegionDoc};
use crate::sim::{self, CodeConfig, Scheme};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_INVALID: i32 = 2;

pub const DEFAULT_SEED: u64 = 1;

#[derive(Debug, Parser)]
#[command(
    name = "bfic",
    version,
    about = "Rate regions, HK sum-rates, entropy checks and coding simulations for the binary fading interference channel"
)]
pub struct Cli {
    /// Output directory [default: $BFIC_OUT_DIR, else the working directory]
    #[arg(long, global = true, env = "BFIC_OUT_DIR")]
    pub out: Option<PathBuf>,
    /// Worker thread cap [default: all cores]. Results do not depend on it.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// TOML file supplying defaults for any flag (keys as the long flag names,
    /// with `-` written `_`)
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
    Svg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Which {
    Hk,
    Leakage,
    Independence,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SchemeArg {
    Erasure,
    JointMac,
}

impl From<SchemeArg> for Scheme {
    fn from(s: SchemeArg) -> Self {
        match s {
            SchemeArg::Erasure => Scheme::Erasure,
            SchemeArg::JointMac => Scheme::JointMac,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct ParamArgs {
    /// Direct-link on probability
    #[arg(long)]
    pub pd: Option<f64>,
    /// Cross-link on probability
    #[arg(long)]
    pub pc: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Inner and outer regions: region_inner.csv, region_outer.csv, region.json, region.svg
    Region {
        #[command(flatten)]
        params: ParamArgs,
        /// Write only this artifact [default: all]
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
    /// HK optimum, and the split `(delta1, delta2)` if given: hk.json
    Hk {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        delta1: Option<f64>,
        #[arg(long)]
        delta2: Option<f64>,
    },
    /// Symmetric sum-rate against p_c: curve.csv, curve.svg
    Curve {
        /// [default: 1]
        #[arg(long)]
        pd: Option<f64>,
        /// [default: 0]
        #[arg(long)]
        pc_min: Option<f64>,
        /// [default: 1]
        #[arg(long)]
        pc_max: Option<f64>,
        /// [default: 0.01]
        #[arg(long)]
        step: Option<f64>,
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
    /// Monte-Carlo success rate against symmetric rate: sweep.csv
    Sweep {
        #[command(flatten)]
        params: ParamArgs,
        /// [default: erasure]
        #[arg(long, value_enum)]
        scheme: Option<SchemeArg>,
        /// Block length [default: 1000]
        #[arg(long)]
        n: Option<usize>,
        /// Trials per rate [default: 200]
        #[arg(long)]
        trials: Option<usize>,
        /// [default: 1]
        #[arg(long)]
        seed: Option<u64>,
        /// Single rate instead of a grid
        #[arg(long)]
        rate: Option<f64>,
        /// Grid start [default: analytic threshold - 0.1]
        #[arg(long)]
        rate_min: Option<f64>,
        /// Grid end [default: analytic threshold + 0.1]
        #[arg(long)]
        rate_max: Option<f64>,
        /// [default: 0.01]
        #[arg(long)]
        rate_step: Option<f64>,
    },
    /// Enumeration checks: verify_report.json
    Verify {
        /// [default: all]
        #[arg(long, value_enum)]
        which: Option<Which>,
        /// [default: 1]
        #[arg(long)]
        seed: Option<u64>,
        /// Random cases per leakage campaign and encoder pairs for the
        /// independence check [default: 1000 and 100]
        #[arg(long)]
        trials: Option<usize>,
        /// Block length [default: 1, 2 and 3 for leakage, 2 for independence]
        #[arg(long)]
        n: Option<usize>,
        #[command(flatten)]
        params: ParamArgs,
    },
    /// Same codes over the original and the contracted channel: correlate.csv
    Correlate {
        #[command(flatten)]
        params: ParamArgs,
        /// [default: erasure]
        #[arg(long, value_enum)]
        scheme: Option<SchemeArg>,
        /// [default: 200]
        #[arg(long)]
        n: Option<usize>,
        /// Symmetric rate [default: 0.4]
        #[arg(long)]
        rate: Option<f64>,
        /// [default: 10000]
        #[arg(long)]
        trials: Option<usize>,
        /// [default: 1]
        #[arg(long)]
        seed: Option<u64>,
    },
}

/// Values read from `--config`.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub out: Option<PathBuf>,
    pub threads: Option<usize>,
    pub pd: Option<f64>,
    pub pc: Option<f64>,
    pub delta1: Option<f64>,
    pub delta2: Option<f64>,
    pub pc_min: Option<f64>,
    pub pc_max: Option<f64>,
    pub step: Option<f64>,
    pub format: Option<Format>,
    pub scheme: Option<SchemeArg>,
    pub n: Option<usize>,
    pub trials: Option<usize>,
    pub seed: Option<u64>,
    pub rate: Option<f64>,
    pub rate_min: Option<f64>,
    pub rate_max: Option<f64>,
    pub rate_step: Option<f64>,
    pub which: Option<Which>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Invalid(format!("cannot read config {}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| CliError::Invalid(format!("bad config {}: {e}", path.display())))
    }
}

#[derive(Debug)]
pub enum CliError {
    Invalid(String),
    VerificationFailed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Invalid(_) => EXIT_INVALID,
            CliError::VerificationFailed(_) => EXIT_VERIFY_FAILED,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Invalid(m) => write!(f, "{m}"),
            CliError::VerificationFailed(m) => write!(f, "verification failed: {m}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Invalid(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Invalid(format!("i/o error: {e}"))
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Invalid(format!("csv error: {e}"))
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Invalid(format!("json error: {e}"))
    }
}

/// Resolved settings shared by every command.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub out_dir: PathBuf,
    pub threads: Option<usize>,
    pub file: FileConfig,
}

fn pick<T>(flag: Option<T>, file: Option<T>, default: T) -> T {
    flag.or(file).unwrap_or(default)
}

fn params_from(args: &ParamArgs, file: &FileConfig, default: (f64, f64)) -> Result<ChannelParams, CliError> {
    let pd = pick(args.pd, file.pd, default.0);
    let pc = pick(args.pc, file.pc, default.1);
    let params = ChannelParams::new(pd, pc)?;
    if pd == 0.0 {
        return Err(Error::DegenerateChannel.into());
    }
    Ok(params)
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn run_from<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
        }
    };
    match run(cli) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    let file = match &cli.config {
        Some(path) => FileConfig::load(path)?,
        None => FileConfig::default(),
    };
    let out_dir = cli
        .out
        .clone()
        .or_else(|| file.out.clone())
        .unwrap_or_else(|| PathBuf::from("."));
    let threads = cli.threads.or(file.threads);
    if threads == Some(0) {
        return Err(CliError::Invalid("--threads must be at least 1".into()));
    }
    let cfg = RunConfig { out_dir, threads, file };
    let pool = {
        let mut b = rayon::ThreadPoolBuilder::new();
        if let Some(t) = cfg.threads {
            b = b.num_threads(t);
        }
        b.build().map_err(|e| CliError::Invalid(format!("thread pool: {e}")))?
    };
    pool.install(|| dispatch(&cli.command, &cfg))
}

fn dispatch(command: &Command, cfg: &RunConfig) -> Result<(), CliError> {
    let f = &cfg.file;
    match command {
        Command::Region { params, format } => {
            cmd_region(cfg, &params_from(params, f, (1.0, 0.4))?, format.or(f.format))
        }
        Command::Hk { params, delta1, delta2 } => {
            let p = params_from(params, f, (1.0, 0.6))?;
            let d1 = delta1.or(f.delta1);
            let d2 = delta2.or(f.delta2);
            let split = match (d1, d2) {
                (None, None) => None,
                (a, b) => Some(SplitParams::symmetric(a.unwrap_or(1.0), b.unwrap_or(1.0))?),
            };
            cmd_hk(cfg, &p, split)
        }
        Command::Curve {
            pd,
            pc_min,
            pc_max,
            step,
            format,
        } => {
            let pd = pick(*pd, f.pd, 1.0);
            let grid = linear_grid(
                pick(*pc_min, f.pc_min, 0.0),
                pick(*pc_max, f.pc_max, 1.0),
                pick(*step, f.step, 0.01),
            )?;
            cmd_curve(cfg, pd, &grid, format.or(f.format))
        }
        Command::Sweep {
            params,
            scheme,
            n,
            trials,
            seed,
            rate,
            rate_min,
            rate_max,
            rate_step,
        } => {
            let p = params_from(params, f, (1.0, 0.5))?;
            let scheme: Scheme = pick(*scheme, f.scheme, SchemeArg::Erasure).into();
            let grid = match rate.or(f.rate) {
                Some(r) => vec![r],
                None => {
                    let th = sim::analytic_threshold(&p, scheme);
                    let lo = pick(*rate_min, f.rate_min, (th - 0.1).max(0.0));
                    let hi = pick(*rate_max, f.rate_max, (th + 0.1).min(1.0));
                    linear_grid(lo, hi, pick(*rate_step, f.rate_step, 0.01))?
                }
            };
            let n = pick(*n, f.n, 1000);
            let trials = pick(*trials, f.trials, 200);
            cmd_sweep(cfg, &p, scheme, n, trials, &grid, pick(*seed, f.seed, DEFAULT_SEED))
        }
        Command::Verify {
            which,
            seed,
            trials,
            n,
            params,
        } => {
            let p = params_from(params, f, (0.8, 0.4))?;
            cmd_verify(
                cfg,
                pick(*which, f.which, Which::All),
                pick(*seed, f.seed, DEFAULT_SEED),
                trials.or(f.trials),
                n.or(f.n),
                &p,
            )
        }
        Command::Correlate {
            params,
            scheme,
            n,
            rate,
            trials,
            seed,
        } => {
            let p = params_from(params, f, (0.8, 0.4))?;
            let scheme: Scheme = pick(*scheme, f.scheme, SchemeArg::Erasure).into();
            let config = CodeConfig::symmetric(
                pick(*n, f.n, 200),
                pick(*rate, f.rate, 0.4),
                pick(*seed, f.seed, DEFAULT_SEED),
            )?;
            cmd_correlate(cfg, &p, scheme, &config, pick(*trials, f.trials, 10_000))
        }
    }
}

/// `lo, lo + step, ..., hi`, each value rounded to 12 decimals.
pub fn linear_grid(lo: f64, hi: f64, step: f64) -> Result<Vec<f64>, CliError> {
    if step.is_nan() || step <= 0.0 || !lo.is_finite() || !hi.is_finite() || hi < lo {
        return Err(CliError::Invalid(format!("bad grid [{lo}, {hi}] step {step}")));
    }
    let count = ((hi - lo) / step + 1e-9).floor() as usize + 1;
    if count > 1_000_000 {
        return Err(CliError::Invalid(format!("grid has {count} points")));
    }
    Ok((0..count)
        .map(|i| ((lo + i as f64 * step) * 1e12).round() / 1e12)
        .collect())
}

/// Writes `bytes` to `dir/name` through a temp file in the same directory.
pub fn write_atomic(dir: &Path, name: &str, bytes: &[u8]) -> Result<PathBuf, CliError> {
    std::fs::create_dir_all(dir)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.flush()?;
    let path = dir.join(name);
    tmp.persist(&path).map_err(|e| CliError::from(e.error))?;
    Ok(path)
}

fn csv_bytes<T: Serialize>(rows: impl IntoIterator<Item = T>) -> Result<Vec<u8>, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row)?;
    }
    w.into_inner().map_err(|e| CliError::Invalid(format!("csv error: {e}")))
}

fn wants(format: Option<Format>, f: Format) -> bool {
    format.is_none_or(|g| g == f)
}

#[derive(Serialize)]
struct RegionReport {
    regime: Regime,
    inner: RegionDoc,
    outer: RegionDoc,
    gap: f64,
}

fn cmd_region(cfg: &RunConfig, params: &ChannelParams, format: Option<Format>) -> Result<(), CliError> {
    let regime = regions::classify_regime(params)?;
    let inner = regions::inner_region(params)?;
    let outer = regions::outer_region(params)?;
    let gap = regions::region_gap(&inner, &outer)?;
    let dir = &cfg.out_dir;
    if wants(format, Format::Csv) {
        write_atomic(dir, "region_inner.csv", &csv_bytes(&inner.vertices)?)?;
        write_atomic(dir, "region_outer.csv", &csv_bytes(&outer.vertices)?)?;
    }
    if wants(format, Format::Json) {
        let report = RegionReport {
            regime,
            inner: RegionDoc::new(params, regime, &inner),
            outer: RegionDoc::new(params, regime, &outer),
            gap,
        };
        write_atomic(dir, "region.json", serde_json::to_string_pretty(&report)?.as_bytes())?;
    }
    if wants(format, Format::Svg) {
        write_atomic(dir, "region.svg", region_svg(params, regime, &inner, &outer).as_bytes())?;
    }
    println!(
        "p_d={} p_c={} regime={} inner_vertices={} outer_vertices={} gap={:.6}",
        params.p_d(),
        params.p_c(),
        regime,
        inner.vertices.len(),
        outer.vertices.len(),
        gap
    );
    Ok(())
}

#[derive(Serialize)]
struct HkReport {
    p_d: f64,
    p_c: f64,
    regime: Regime,
    symmetric_sum_rate: f64,
    erasure_sum_rate: f64,
    decode_all_sum_rate: f64,
    optimum: Option<OptimumDoc>,
    split: Option<hk::HkEvaluation>,
}

#[derive(Serialize)]
struct OptimumDoc {
    r_sum: f64,
    c_star: f64,
    delta_star: f64,
}

fn cmd_hk(cfg: &RunConfig, params: &ChannelParams, split: Option<SplitParams>) -> Result<(), CliError> {
    let regime = regions::classify_regime(params)?;
    let optimum = match hk::optimal_sum_rate(params) {
        Ok(o) => Some(OptimumDoc {
            r_sum: o.r_sum,
            c_star: o.c_star,
            delta_star: hk::delta_from_c(o.c_star)?,
        }),
        Err(Error::RegimeMismatch(_)) => None,
        Err(e) => return Err(e.into()),
    };
    let report = HkReport {
        p_d: params.p_d(),
        p_c: params.p_c(),
        regime,
        symmetric_sum_rate: hk::symmetric_sum_rate(params)?,
        erasure_sum_rate: 2.0 * params.p_d() * params.q_c(),
        decode_all_sum_rate: params.union_prob().min(2.0 * params.p_c()).min(2.0 * params.p_d()),
        optimum,
        split: split.map(|s| hk::evaluate(params, &s)).transpose()?,
    };
    write_atomic(
        &cfg.out_dir,
        "hk.json",
        serde_json::to_string_pretty(&report)?.as_bytes(),
    )?;
    println!("regime={} symmetric_sum_rate={:.12}", regime, report.symmetric_sum_rate);
    if let Some(o) = &report.optimum {
        println!(
            "hk optimum r_sum={:.12} c_star={:.12} delta_star={:.12}",
            o.r_sum, o.c_star, o.delta_star
        );
    }
    if let Some(e) = &report.split {
        println!(
            "split delta=({}, {}) r_sum={:.12}",
            e.split.delta1, e.split.delta2, e.r_sum
        );
    }
    Ok(())
}

fn cmd_curve(cfg: &RunConfig, pd: f64, grid: &[f64], format: Option<Format>) -> Result<(), CliError> {
    let rows = hk::sum_rate_curve(pd, grid)?;
    if let Some(bad) = rows.iter().find(|r| r.inner_sum > r.outer_sum + 1e-9) {
        return Err(CliError::VerificationFailed(format!(
            "inner sum {} exceeds outer sum {} at p_c = {}",
            bad.inner_sum, bad.outer_sum, bad.p_c
        )));
    }
    if wants(format, Format::Csv) {
        write_atomic(&cfg.out_dir, "curve.csv", &csv_bytes(&rows)?)?;
    }
    if wants(format, Format::Svg) {
        let inner: Vec<(f64, f64)> = rows.iter().map(|r| (r.p_c, r.inner_sum)).collect();
        let outer: Vec<(f64, f64)> = rows.iter().map(|r| (r.p_c, r.outer_sum)).collect();
        write_atomic(&cfg.out_dir, "curve.svg", curve_svg(pd, &inner, &outer).as_bytes())?;
    }
    println!("p_d={pd} points={}", rows.len());
    Ok(())
}

fn cmd_sweep(
    cfg: &RunConfig,
    params: &ChannelParams,
    scheme: Scheme,
    n: usize,
    trials: usize,
    grid: &[f64],
    seed: u64,
) -> Result<(), CliError> {
    if trials == 0 {
        return Err(CliError::Invalid("--trials must be positive".into()));
    }
    let table = sim::rate_sweep(params, scheme, n, trials, grid, seed)?;
    let mut bytes = Vec::new();
    table.write_csv(&mut bytes)?;
    write_atomic(&cfg.out_dir, "sweep.csv", &bytes)?;
    match table.crossing {
        Some(c) => println!("scheme={scheme} threshold={:.6} crossing={c:.6}", table.threshold),
        None => println!("scheme={scheme} threshold={:.6} crossing=none", table.threshold),
    }
    Ok(())
}

#[derive(Serialize)]
struct VerifySection {
    name: String,
    pass: bool,
    max_deviation: f64,
    checks: Vec<IdentityCheck>,
}

#[derive(Serialize)]
struct VerifyDoc {
    which: Which,
    seed: u64,
    pass: bool,
    sections: Vec<VerifySection>,
}

fn section(name: &str, report: VerificationReport) -> VerifySection {
    VerifySection {
        name: name.into(),
        pass: report.all_pass(),
        max_deviation: report.max_deviation(),
        checks: report.checks,
    }
}

/// The enumeration grid of the HK identity check: `p_c <= p_d` on a 0.1 grid,
/// `delta` on a 0.25 grid and two time-sharing weights.
pub fn hk_verification_grid() -> Vec<(ChannelParams, SplitParams)> {
    let probs: Vec<f64> = (1..=10).map(|i| i as f64 / 10.0).collect();
    let deltas = [0.0, 0.25, 0.5, 0.75, 1.0];
    let mut out = Vec::new();
    for &pd in &probs {
        for &pc in probs.iter().filter(|&&pc| pc <= pd) {
            let params = ChannelParams::new(pd, pc).expect("grid values are valid");
            for d1 in deltas {
                for d2 in deltas {
                    for l1 in [0.5, 0.3] {
                        out.push((params, SplitParams::new(d1, d2, l1).expect("grid values are valid")));
                    }
                }
            }
        }
    }
    out
}

pub fn verify_hk_grid() -> Result<VerificationReport, Error> {
    use rayon::prelude::*;
    let reports: Vec<VerificationReport> = hk_verification_grid()
        .par_iter()
        .map(|(p, s)| verify_hk_closed_forms(p, s))
        .collect::<Result<_, _>>()?;
    let mut all = VerificationReport::default();
    for r in reports {
        all.extend(r);
    }
    Ok(all)
}

fn cmd_verify(
    cfg: &RunConfig,
    which: Which,
    seed: u64,
    trials: Option<usize>,
    n: Option<usize>,
    params: &ChannelParams,
) -> Result<(), CliError> {
    let mut sections = Vec::new();
    let all = which == Which::All;
    if all || which == Which::Hk {
        sections.push(section("hk closed forms", verify_hk_grid()?));
    }
    if all || which == Which::Leakage {
        let ns: Vec<usize> = match n {
            Some(n) => vec![n],
            None => vec![1, 2, 3],
        };
        let trials = trials.unwrap_or(1000);
        let mut report = VerificationReport::default();
        for &n in &ns {
            for mode in [LeakageMode::Exclusive, LeakageMode::IndependentLinks] {
                let s = leakage_campaign(n, mode, trials, seed)?;
                report.push(IdentityCheck::at_least(
                    format!(
                        "min slack of H(Y2|Z,S) - (p2/p1) H(Y1|Z,S), n={n}, mode={mode:?}, cases={}",
                        s.cases
                    ),
                    s.min_slack,
                    0.0,
                ));
            }
        }
        sections.push(section("leakage", report));
    }
    if all || which == Which::Independence {
        let n = n.unwrap_or(2);
        let pairs = trials.unwrap_or(100);
        let mut report = VerificationReport::default();
        for i in 0..pairs as u64 {
            let r = verify_claim_independence(params, n, crate::rng::derive_seed(seed, i, 0))?;
            report.push(IdentityCheck::at_most(
                format!("I(X1;X2|G) pair {i}, n={n}"),
                r.mutual_information,
                0.0,
            ));
        }
        let identity: Vec<u32> = (0..1u32 << n).collect();
        let control = EncoderPair::new(n, identity.clone(), identity, EncoderCoupling::SharedMessage)?;
        let leak = claim_mutual_information(params, &control)?;
        report.push(IdentityCheck::exceeds(
            format!("shared-message control detected, n={n}"),
            leak,
            IDENTITY_TOL,
        ));
        sections.push(section("independence", report));
    }
    let doc = VerifyDoc {
        which,
        seed,
        pass: sections.iter().all(|s| s.pass),
        sections,
    };
    write_atomic(
        &cfg.out_dir,
        "verify_report.json",
        serde_json::to_string_pretty(&doc)?.as_bytes(),
    )?;
    for s in &doc.sections {
        println!(
            "{}: {} ({} checks, max deviation {:.3e})",
            s.name,
            if s.pass { "pass" } else { "FAIL" },
            s.checks.len(),
            s.max_deviation
        );
    }
    if doc.pass {
        Ok(())
    } else {
        let failed: Vec<&str> = doc
            .sections
            .iter()
            .filter(|s| !s.pass)
            .map(|s| s.name.as_str())
            .collect();
        Err(CliError::VerificationFailed(failed.join(", ")))
    }
}

#[derive(Serialize)]
struct CorrelateRow {
    receiver: u8,
    scheme: Scheme,
    err_original: f64,
    err_contracted: f64,
    bound: f64,
    trials: usize,
    n: usize,
    rate: f64,
    p_d: f64,
    p_c: f64,
    seed: u64,
}

fn cmd_correlate(
    cfg: &RunConfig,
    params: &ChannelParams,
    scheme: Scheme,
    config: &CodeConfig,
    trials: usize,
) -> Result<(), CliError> {
    let law = contracted_law(params, ContractedLaw::natural_tag(params))?;
    let res = sim::simulate_correlation_with(params, &law, config, scheme, trials)?;
    let rows = (0..2).map(|i| CorrelateRow {
        receiver: i as u8 + 1,
        scheme,
        err_original: res.err_original[i],
        err_contracted: res.err_contracted[i],
        bound: res.bound[i],
        trials,
        n: config.n,
        rate: config.rates().0,
        p_d: params.p_d(),
        p_c: params.p_c(),
        seed: config.seed,
    });
    write_atomic(&cfg.out_dir, "correlate.csv", &csv_bytes(rows)?)?;
    println!(
        "law={:?} err_original={:?} err_contracted={:?} bound={:?} ci_overlap={}",
        law.tag, res.err_original, res.err_contracted, res.bound, res.ci_overlap
    );
    if res.ci_overlap {
        Ok(())
    } else {
        Err(CliError::VerificationFailed(
            "error rates differ by more than 3 sigma".into(),
        ))
    }
}

const SVG_SIZE: f64 = 480.0;
const MARGIN: f64 = 48.0;

struct Frame {
    x_max: f64,
    y_max: f64,
}

impl Frame {
    fn x(&self, v: f64) -> f64 {
        MARGIN + v / self.x_max * (SVG_SIZE - 2.0 * MARGIN)
    }

    fn y(&self, v: f64) -> f64 {
        SVG_SIZE - MARGIN - v / self.y_max * (SVG_SIZE - 2.0 * MARGIN)
    }

    fn points(&self, pts: impl IntoIterator<Item = (f64, f64)>) -> String {
        pts.into_iter()
            .map(|(a, b)| format!("{:.2},{:.2}", self.x(a), self.y(b)))
            .collect::<Vec<_>>()
            .join(" ")
    }

    fn axes(&self, svg: &mut String, x_label: &str, y_label: &str) {
        let (x0, y0) = (self.x(0.0), self.y(0.0));
        let _ = writeln!(
            svg,
            r#"<line x1="{x0:.2}" y1="{y0:.2}" x2="{:.2}" y2="{y0:.2}" stroke="black"/>"#,
            self.x(self.x_max)
        );
        let _ = writeln!(
            svg,
            r#"<line x1="{x0:.2}" y1="{y0:.2}" x2="{x0:.2}" y2="{:.2}" stroke="black"/>"#,
            self.y(self.y_max)
        );
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{:.2}" font-size="14" text-anchor="middle">{x_label}</text>"#,
            SVG_SIZE / 2.0,
            SVG_SIZE - 12.0
        );
        let _ = writeln!(
            svg,
            r#"<text x="14" y="{:.2}" font-size="14" text-anchor="middle" transform="rotate(-90 14 {:.2})">{y_label}</text>"#,
            SVG_SIZE / 2.0,
            SVG_SIZE / 2.0
        );
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{:.2}" font-size="11" text-anchor="middle">{}</text>"#,
            self.x(self.x_max),
            y0 + 14.0,
            self.x_max
        );
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{:.2}" font-size="11" text-anchor="end">{}</text>"#,
            x0 - 4.0,
            self.y(self.y_max) + 4.0,
            self.y_max
        );
    }
}

fn svg_open() -> String {
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{SVG_SIZE}\" height=\"{SVG_SIZE}\" viewBox=\"0 0 {SVG_SIZE} {SVG_SIZE}\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
    )
}

/// Overlay of both polygons. Vertex coordinates are also emitted as
/// `data-vertices` attributes so the figure can be checked without parsing
/// pixel positions.
pub fn region_svg(params: &ChannelParams, regime: Regime, inner: &RateRegion, outer: &RateRegion) -> String {
    let frame = Frame { x_max: 1.0, y_max: 1.0 };
    let data = |r: &RateRegion| {
        r.vertices
            .iter()
            .map(|v| format!("{},{}", v.r1, v.r2))
            .collect::<Vec<_>>()
            .join(" ")
    };
    let pts = |r: &RateRegion| frame.points(r.vertices.iter().map(|v: &RatePair| (v.r1, v.r2)));
    let mut svg = svg_open();
    let _ = writeln!(
        svg,
        r##"<polygon id="outer" points="{}" data-vertices="{}" fill="none" stroke="#c0392b" stroke-width="2"/>"##,
        pts(outer),
        data(outer)
    );
    let _ = writeln!(
        svg,
        r##"<polygon id="inner" points="{}" data-vertices="{}" fill="#2e86c1" fill-opacity="0.35" stroke="#2e86c1"/>"##,
        pts(inner),
        data(inner)
    );
    frame.axes(&mut svg, "R1", "R2");
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="24" font-size="14" text-anchor="middle">p_d = {}, p_c = {} ({} interference)</text>"#,
        SVG_SIZE / 2.0,
        params.p_d(),
        params.p_c(),
        regime
    );
    svg.push_str("</svg>\n");
    svg
}

pub fn curve_svg(pd: f64, inner: &[(f64, f64)], outer: &[(f64, f64)]) -> String {
    let y_max = outer.iter().chain(inner).map(|p| p.1).fold(0.0, f64::max).max(1e-9);
    let frame = Frame {
        x_max: 1.0,
        y_max: (y_max * 10.0).ceil() / 10.0,
    };
    let mut svg = svg_open();
    let _ = writeln!(
        svg,
        r##"<polyline id="outer" points="{}" fill="none" stroke="#c0392b" stroke-width="2"/>"##,
        frame.points(outer.iter().copied())
    );
    let _ = writeln!(
        svg,
        r##"<polyline id="inner" points="{}" fill="none" stroke="#2e86c1" stroke-width="2"/>"##,
        frame.points(inner.iter().copied())
    );
    frame.axes(&mut svg, "p_c", "symmetric sum-rate");
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="24" font-size="14" text-anchor="middle">p_d = {pd}: inner (blue) and outer (red)</text>"#,
        SVG_SIZE / 2.0
    );
    svg.push_str("</svg>\n");
    svg
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_endpoints_are_clean() {
        let g = linear_grid(0.0, 1.0, 0.01).unwrap();
        assert_eq!(g.len(), 101);
        assert_eq!(g[60], 0.6);
        assert_eq!(*g.last().unwrap(), 1.0);
        assert!(linear_grid(0.5, 0.1, 0.1).is_err());
        assert!(linear_grid(0.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn hk_grid_size() {
        assert_eq!(hk_verification_grid().len(), 55 * 25 * 2);
    }

    #[test]
    fn config_file_parses() {
        let f: FileConfig = toml::from_str("pd = 0.9\nscheme = \"joint-mac\"\nwhich = \"leakage\"\n").unwrap();
        assert_eq!(f.pd, Some(0.9));
        assert_eq!(f.scheme, Some(SchemeArg::JointMac));
        assert_eq!(f.which, Some(Which::Leakage));
        assert!(toml::from_str::<FileConfig>("bogus = 1").is_err());
    }
}
