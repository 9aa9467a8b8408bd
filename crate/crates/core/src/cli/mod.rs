//! Command-line front end: configuration, suite orchestration and table output.

mod suites;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ktypes::{branching, classify_pi00, eigenvalue_table, emit_repartition, render_svg, weyl_dim, FigureStyle};
use crate::specfun::Parameter;

pub use suites::{run_suite, SuiteOutcome, SuiteStatus};

pub const DEFAULT_SEED: u64 = 0xC0FFEE;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Specfun,
    Feps,
    Flip,
    Scaling,
    Ksnorm,
    Nonstd,
    Dims,
}

impl Suite {
    pub const ALL: [Suite; 7] =
        [Suite::Specfun, Suite::Feps, Suite::Flip, Suite::Scaling, Suite::Ksnorm, Suite::Nonstd, Suite::Dims];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Specfun => "specfun",
            Suite::Feps => "feps",
            Suite::Flip => "flip",
            Suite::Scaling => "scaling",
            Suite::Ksnorm => "ksnorm",
            Suite::Nonstd => "nonstd",
            Suite::Dims => "dims",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Svg,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CommandKind {
    #[default]
    Verify,
    Ktypes,
    Eigenvalues,
    Figure,
    ReportDiscrepancy,
}

/// Tolerances of the verification suites. `ksnorm` is in standard errors.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    pub specfun: f64,
    pub feps: f64,
    pub flip: f64,
    pub scaling: f64,
    pub ksnorm: f64,
    pub nonstd: f64,
    pub l2: f64,
    pub diagram: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { specfun: 1e-12, feps: 1e-10, flip: 1e-3, scaling: 1e-3, ksnorm: 3.0, nonstd: 1e-10, l2: 1e-6, diagram: 5e-2 }
    }
}

impl Tolerances {
    fn entries(&self) -> [(&'static str, f64); 8] {
        [
            ("specfun", self.specfun),
            ("feps", self.feps),
            ("flip", self.flip),
            ("scaling", self.scaling),
            ("ksnorm", self.ksnorm),
            ("nonstd", self.nonstd),
            ("l2", self.l2),
            ("diagram", self.diagram),
        ]
    }

    fn set(&mut self, key: &str, value: f64) -> Result<()> {
        let slot = match key {
            "specfun" => &mut self.specfun,
            "feps" => &mut self.feps,
            "flip" => &mut self.flip,
            "scaling" => &mut self.scaling,
            "ksnorm" => &mut self.ksnorm,
            "nonstd" => &mut self.nonstd,
            "l2" => &mut self.l2,
            "diagram" => &mut self.diagram,
            _ => return Err(Error::InvalidParameter(format!("unknown tolerance '{key}'"))),
        };
        *slot = value;
        Ok(())
    }
}

/// Everything a command needs. Unset optional fields fall back to
/// per-command defaults.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub command: CommandKind,
    pub suites: Vec<Suite>,
    /// Restricts `ksnorm` and the diagram check to one `mu`; the spectral
    /// parameter of `eigenvalues` (default 0).
    pub mu: Option<f64>,
    /// Imaginary part of `mu`, used by `eigenvalues`.
    pub mu_im: f64,
    pub delta: Option<i64>,
    pub n: Option<u32>,
    pub l_max: Option<u32>,
    pub grid_m: usize,
    pub grid_l: f64,
    pub quad_points: u64,
    pub quad_budget: u64,
    pub seed: u64,
    pub tolerances: Tolerances,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            command: CommandKind::Verify,
            suites: Suite::ALL.to_vec(),
            mu: None,
            mu_im: 0.0,
            delta: None,
            n: None,
            l_max: None,
            grid_m: 32,
            grid_l: 5.0,
            quad_points: 1_000_000,
            quad_budget: 10_000_000,
            seed: DEFAULT_SEED,
            tolerances: Tolerances::default(),
            out: None,
            format: None,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in self.tolerances.entries() {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidParameter(format!("tolerance {name} = {v} must be positive")));
            }
        }
        if self.suites.is_empty() {
            return Err(Error::InvalidParameter("no suites selected".into()));
        }
        if self.grid_m < 2 || !(self.grid_l.is_finite() && self.grid_l > 0.0) {
            return Err(Error::InvalidParameter(format!("bad grid M = {}, L = {}", self.grid_m, self.grid_l)));
        }
        if self.n == Some(0) {
            return Err(Error::InvalidParameter("n must be positive".into()));
        }
        if self.quad_points < 2 {
            return Err(Error::InvalidParameter("quad_points must be at least 2".into()));
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

#[derive(Debug, Parser)]
#[command(name = "sympseries", version, about = "Degenerate principal series of Sp(n,C): tables, figures and numerical checks")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Run verification suites and write a JSON (or CSV) report.
    Verify(Flags),
    /// K-types up to l_max with their Sp(n) dimensions.
    Ktypes(Flags),
    /// Intertwiner eigenvalues on each K-type.
    Eigenvalues(Flags),
    /// Repartition figure of the K-types at mu = delta = 0 (SVG, plus CSV next to --out).
    Figure(Flags),
    /// Computed classification against the stated mod-4 rule and the figure.
    ReportDiscrepancy(Flags),
}

#[derive(Debug, Args)]
struct Flags {
    /// JSON config file; flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Suite to run (repeatable); default all.
    #[arg(long, value_enum)]
    suite: Vec<Suite>,
    #[arg(long, allow_negative_numbers = true)]
    mu: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    mu_im: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    delta: Option<i64>,
    #[arg(long)]
    n: Option<u32>,
    #[arg(long)]
    l_max: Option<u32>,
    #[arg(long)]
    grid_m: Option<usize>,
    #[arg(long)]
    grid_l: Option<f64>,
    #[arg(long)]
    quad_points: Option<u64>,
    #[arg(long)]
    quad_budget: Option<u64>,
    /// Seed, decimal or 0x-prefixed hex.
    #[arg(long, value_parser = parse_seed)]
    seed: Option<u64>,
    /// Tolerance override NAME=VALUE (repeatable).
    #[arg(long, value_parser = parse_tol)]
    tol: Vec<(String, f64)>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

fn parse_seed(s: &str) -> std::result::Result<u64, String> {
    let parsed = match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(hex, 16),
        None => s.parse(),
    };
    parsed.map_err(|e| format!("bad seed '{s}': {e}"))
}

fn parse_tol(s: &str) -> std::result::Result<(String, f64), String> {
    let (k, v) = s.split_once('=').ok_or_else(|| format!("expected NAME=VALUE, got '{s}'"))?;
    let v: f64 = v.parse().map_err(|e| format!("bad tolerance '{v}': {e}"))?;
    Ok((k.to_string(), v))
}

impl Flags {
    fn into_config(self, command: CommandKind) -> Result<RunConfig> {
        let mut cfg = match &self.config {
            Some(path) => RunConfig::from_json(&fs::read_to_string(path)?)?,
            None => RunConfig::default(),
        };
        cfg.command = command;
        if !self.suite.is_empty() {
            let mut s = self.suite;
            s.sort();
            s.dedup();
            cfg.suites = s;
        }
        cfg.mu = self.mu.or(cfg.mu);
        cfg.mu_im = self.mu_im.unwrap_or(cfg.mu_im);
        cfg.delta = self.delta.or(cfg.delta);
        cfg.n = self.n.or(cfg.n);
        cfg.l_max = self.l_max.or(cfg.l_max);
        cfg.grid_m = self.grid_m.unwrap_or(cfg.grid_m);
        cfg.grid_l = self.grid_l.unwrap_or(cfg.grid_l);
        cfg.quad_points = self.quad_points.unwrap_or(cfg.quad_points);
        cfg.quad_budget = self.quad_budget.unwrap_or(cfg.quad_budget);
        cfg.seed = self.seed.unwrap_or(cfg.seed);
        for (k, v) in self.tol {
            cfg.tolerances.set(&k, v)?;
        }
        cfg.out = self.out.or(cfg.out);
        cfg.format = self.format.or(cfg.format);
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { stderr.write_all(text.as_bytes()) } else { stdout.write_all(text.as_bytes()) };
            return code;
        }
    };
    let (kind, flags) = match cli.command {
        Cmd::Verify(f) => (CommandKind::Verify, f),
        Cmd::Ktypes(f) => (CommandKind::Ktypes, f),
        Cmd::Eigenvalues(f) => (CommandKind::Eigenvalues, f),
        Cmd::Figure(f) => (CommandKind::Figure, f),
        Cmd::ReportDiscrepancy(f) => (CommandKind::ReportDiscrepancy, f),
    };
    let cfg = match flags.into_config(kind) {
        Ok(c) => c,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return EXIT_USAGE;
        }
    };
    let result = match kind {
        CommandKind::Verify => cmd_verify(&cfg, stdout),
        CommandKind::Ktypes => cmd_ktypes(&cfg, stdout).map(|_| EXIT_PASS),
        CommandKind::Eigenvalues => cmd_eigenvalues(&cfg, stdout).map(|_| EXIT_PASS),
        CommandKind::Figure => cmd_figure(&cfg, stdout).map(|_| EXIT_PASS),
        CommandKind::ReportDiscrepancy => cmd_report_discrepancy(&cfg, stdout).map(|_| EXIT_PASS),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            match e {
                Error::Budget(_) => EXIT_BUDGET,
                Error::InvalidParameter(_) | Error::Admissibility { .. } | Error::Unsupported(_) => EXIT_USAGE,
                _ => EXIT_FAIL,
            }
        }
    }
}

fn emit(cfg: &RunConfig, stdout: &mut dyn Write, bytes: &[u8]) -> Result<()> {
    match &cfg.out {
        Some(path) => fs::write(path, bytes)?,
        None => stdout.write_all(bytes)?,
    }
    Ok(())
}

#[derive(Debug, Serialize)]
pub struct VerifyReport {
    pub config: RunConfig,
    pub status: SuiteStatus,
    pub suites: Vec<SuiteOutcome>,
}

impl VerifyReport {
    pub fn exit_code(&self) -> i32 {
        match self.status {
            SuiteStatus::Pass => EXIT_PASS,
            SuiteStatus::Budget => EXIT_BUDGET,
            SuiteStatus::Fail | SuiteStatus::Error => EXIT_FAIL,
        }
    }
}

/// Runs the selected suites in a fixed order. A budget error anywhere makes
/// the overall status `budget`; otherwise any failure or error makes it `fail`.
pub fn verify(cfg: &RunConfig) -> VerifyReport {
    let mut suites_sorted = cfg.suites.clone();
    suites_sorted.sort();
    suites_sorted.dedup();
    let suites: Vec<SuiteOutcome> = suites_sorted.iter().map(|&s| run_suite(s, cfg)).collect();
    let status = if suites.iter().any(|s| s.status == SuiteStatus::Budget) {
        SuiteStatus::Budget
    } else if suites.iter().all(|s| s.status == SuiteStatus::Pass) {
        SuiteStatus::Pass
    } else {
        SuiteStatus::Fail
    };
    VerifyReport { config: cfg.clone(), status, suites }
}

pub fn cmd_verify(cfg: &RunConfig, stdout: &mut dyn Write) -> Result<i32> {
    let report = verify(cfg);
    let bytes = match cfg.format.unwrap_or(Format::Json) {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&report)?;
            s.push('\n');
            s.into_bytes()
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["suite", "status", "check", "residual", "tolerance", "pass"])?;
            for s in &report.suites {
                if s.checks.is_empty() {
                    w.write_record([s.suite, s.status.name(), "", "", "", "false"])?;
                }
                for c in &s.checks {
                    w.write_record([
                        s.suite,
                        s.status.name(),
                        c.check.as_str(),
                        &format!("{:e}", c.residual),
                        &format!("{:e}", c.tolerance),
                        if c.pass { "true" } else { "false" },
                    ])?;
                }
            }
            finish_csv(w)?
        }
        Format::Svg => return Err(Error::InvalidParameter("verify writes json or csv".into())),
    };
    emit(cfg, stdout, &bytes)?;
    Ok(report.exit_code())
}

fn finish_csv(w: csv::Writer<Vec<u8>>) -> Result<Vec<u8>> {
    w.into_inner().map_err(|e| Error::Io(e.into_error()))
}

#[derive(Debug, Serialize)]
struct KTypeRow {
    l: u32,
    l2: u32,
    dim: Option<u64>,
}

pub fn cmd_ktypes(cfg: &RunConfig, stdout: &mut dyn Write) -> Result<()> {
    let n = cfg.n.unwrap_or(2);
    let delta = cfg.delta.unwrap_or(0);
    let rows: Vec<KTypeRow> = branching(delta, cfg.l_max.unwrap_or(5))
        .into_iter()
        .map(|label| KTypeRow { l: label.l, l2: label.l2, dim: weyl_dim(n, label).ok() })
        .collect();
    let bytes = match cfg.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["l", "l2", "dim"])?;
            for r in &rows {
                let dim = r.dim.map(|d| d.to_string()).unwrap_or_default();
                w.write_record([r.l.to_string(), r.l2.to_string(), dim])?;
            }
            finish_csv(w)?
        }
        Format::Json => json_bytes(&serde_json::json!({ "n": n, "delta": delta, "rows": rows }))?,
        Format::Svg => return Err(Error::InvalidParameter("ktypes writes csv or json".into())),
    };
    emit(cfg, stdout, &bytes)
}

fn json_bytes<T: Serialize>(v: &T) -> Result<Vec<u8>> {
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    Ok(s.into_bytes())
}

#[derive(Debug, Serialize)]
struct EigenOut {
    l: u32,
    l2: u32,
    re: Option<f64>,
    im: Option<f64>,
    modulus: Option<f64>,
    error: Option<String>,
}

pub fn cmd_eigenvalues(cfg: &RunConfig, stdout: &mut dyn Write) -> Result<()> {
    let param = Parameter::new(
        Complex64::new(cfg.mu.unwrap_or(0.0), cfg.mu_im),
        cfg.delta.unwrap_or(0),
        cfg.n.unwrap_or(1),
    )?;
    let rows: Vec<EigenOut> = eigenvalue_table(&param, cfg.l_max.unwrap_or(5))
        .into_iter()
        .map(|r| EigenOut {
            l: r.label.l,
            l2: r.label.l2,
            re: r.value.map(|v| v.re),
            im: r.value.map(|v| v.im),
            modulus: r.value.map(|v| v.norm()),
            error: r.error,
        })
        .collect();
    let bytes = match cfg.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["l", "l2", "re", "im", "modulus", "error"])?;
            let num = |v: Option<f64>| v.map(|x| format!("{x:.15e}")).unwrap_or_default();
            for r in &rows {
                w.write_record([
                    r.l.to_string(),
                    r.l2.to_string(),
                    num(r.re),
                    num(r.im),
                    num(r.modulus),
                    r.error.clone().unwrap_or_default(),
                ])?;
            }
            finish_csv(w)?
        }
        Format::Json => json_bytes(&serde_json::json!({ "parameter": param, "rows": rows }))?,
        Format::Svg => return Err(Error::InvalidParameter("eigenvalues writes csv or json".into())),
    };
    emit(cfg, stdout, &bytes)
}

fn repartition_csv(cfg: &RunConfig) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["l2", "l", "sign"])?;
    for p in emit_repartition(cfg.l_max.unwrap_or(5))? {
        w.write_record([p.l2.to_string(), p.l.to_string(), p.sign.to_string()])?;
    }
    finish_csv(w)
}

/// SVG to `--out` (or stdout) with the marker CSV beside it; `--format csv`
/// writes only the CSV.
pub fn cmd_figure(cfg: &RunConfig, stdout: &mut dyn Write) -> Result<()> {
    match cfg.format.unwrap_or(Format::Svg) {
        Format::Svg => {
            let points = emit_repartition(cfg.l_max.unwrap_or(5))?;
            let svg = render_svg(&points, &FigureStyle::default());
            emit(cfg, stdout, svg.as_bytes())?;
            if let Some(path) = &cfg.out {
                fs::write(csv_sibling(path), repartition_csv(cfg)?)?;
            }
            Ok(())
        }
        Format::Csv => emit(cfg, stdout, &repartition_csv(cfg)?),
        Format::Json => {
            let points = emit_repartition(cfg.l_max.unwrap_or(5))?;
            emit(cfg, stdout, &json_bytes(&points)?)
        }
    }
}

fn csv_sibling(path: &Path) -> PathBuf {
    path.with_extension("csv")
}

#[derive(Debug, Serialize)]
struct DiscrepancyRow {
    l: u32,
    l2: u32,
    computed_sign: i64,
    mod4_class: i64,
    figure_class: i64,
    agree: bool,
    figure_agree: bool,
}

pub fn cmd_report_discrepancy(cfg: &RunConfig, stdout: &mut dyn Write) -> Result<()> {
    let n = cfg.n.unwrap_or(2);
    let mut rows = Vec::new();
    for label in branching(0, cfg.l_max.unwrap_or(8)) {
        let r = classify_pi00(n, label)?;
        rows.push(DiscrepancyRow {
            l: label.l,
            l2: label.l2,
            computed_sign: r.computed_sign,
            mod4_class: r.mod4_class,
            figure_class: r.figure_class,
            agree: r.agree,
            figure_agree: r.computed_sign == r.figure_class,
        });
    }
    let disagreements = rows.iter().filter(|r| !r.agree).count();
    let report = serde_json::json!({
        "n": n,
        "l_max": cfg.l_max.unwrap_or(8),
        "rows": rows,
        "disagreements": disagreements,
    });
    emit(cfg, stdout, &json_bytes(&report)?)
}
