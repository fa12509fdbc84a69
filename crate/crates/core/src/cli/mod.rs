//! Batch front-end: `analyze`, `proofcheck`, `scan` and `synthetic` runs
//! producing a JSON report and a plain-text summary.
//!
//! Exit codes: 0 consistent / success, 2 violation-candidate, 1 input or
//! domain errors and failed oracle checks.

pub mod config;

pub use config::{load_manifold, manifold_from_value, ConfigError, LoadedManifold};

use crate::bochner::{BochnerPackage, Section2Residuals};
use crate::cframe::FrameDefects;
use crate::manifold::{
    curvature_package, second_bianchi_residual, validate, zoo, ChartManifold, GeometryError,
    StructureDiagnostics, ZooParams,
};
use crate::tensor::SymmetryKind;
use crate::verify::synthetic::{admissible_projection, evaluate_sides, SyntheticCheck};
use crate::verify::{
    case_deduction, classify, classify_package, family_magnitudes, manifold_proof_steps,
    neighborhood_scan, run_all_flag_combinations, run_synthetic_oracle, synthetic_point,
    CaseConclusion, Classification, ComplexValue, DeductionReport, OracleReport, ScanReport,
    StepInputs, StepResidual, Verdict, VerifyError,
};
use clap::{Parser, ValueEnum};
use serde::Serialize;
use std::collections::BTreeMap;
use std::path::PathBuf;
use std::time::Instant;
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Curvature, Bochner tensor, frame, proof steps and verdict at a point
    Analyze,
    /// Synthetic proof oracle and case engine; with a manifold, as analyze
    Proofcheck,
    /// Verdict at a point plus max ‖R‖ over a grid around it
    Scan,
    /// Raw data of one synthetic draw
    Synthetic,
}

#[derive(Parser, Debug, Clone)]
#[command(name = "bochner-lab", version, about = "Pointwise Bochner-tensor checks on almost Hermitian charts")]
pub struct Cli {
    #[arg(value_enum)]
    pub mode: Mode,
    /// Built-in manifold
    #[arg(long, conflicts_with = "config")]
    pub zoo: Option<String>,
    /// JSON chart or zoo config
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Complex dimension (zoo and synthetic runs)
    #[arg(long)]
    pub n: Option<usize>,
    /// Chart point, comma separated
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub point: Option<Vec<f64>>,
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
    /// Number of synthetic draws
    #[arg(long, default_value_t = 100)]
    pub seeds: usize,
    /// First synthetic seed
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 0.5)]
    pub radius: f64,
    /// Grid points per axis for scans
    #[arg(long, default_value_t = 3)]
    pub grid: usize,
    /// Report path; without it the JSON goes to stdout and the summary to stderr
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Emit `timings: null` so reports are byte-identical across runs
    #[arg(long)]
    pub no_timings: bool,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Verify(#[from] VerifyError),
    #[error(transparent)]
    Tensor(#[from] crate::tensor::TensorError),
    #[error("cannot write report: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ManifoldSource {
    Zoo { name: String, params: ZooParams },
    Config { path: PathBuf },
}

/// Validated run parameters.
#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    pub mode: Mode,
    pub manifold: Option<ManifoldSource>,
    pub n: Option<usize>,
    pub point: Option<Vec<f64>>,
    pub tol: f64,
    pub seeds: usize,
    pub seed: u64,
    pub radius: f64,
    pub grid: usize,
    #[serde(skip)]
    pub out: Option<PathBuf>,
    #[serde(skip)]
    pub timings: bool,
}

impl RunConfig {
    pub fn from_cli(cli: &Cli) -> Result<Self, CliError> {
        let invalid = |m: &str| Err(CliError::Invalid(m.to_string()));
        if !(cli.tol.is_finite() && cli.tol > 0.0) {
            return invalid("--tol must be positive");
        }
        if !(cli.radius.is_finite() && cli.radius > 0.0) {
            return invalid("--radius must be positive");
        }
        if cli.grid == 0 {
            return invalid("--grid must be at least 1");
        }
        if cli.seeds == 0 {
            return invalid("--seeds must be at least 1");
        }
        if cli.config.is_some() && cli.n.is_some() {
            return invalid("--n applies to --zoo and synthetic runs; a config fixes its own dimension");
        }
        let manifold = match (&cli.zoo, &cli.config) {
            (Some(name), None) => Some(ManifoldSource::Zoo {
                name: name.clone(),
                params: ZooParams { n: cli.n, dim: None },
            }),
            (None, Some(path)) => Some(ManifoldSource::Config { path: path.clone() }),
            (None, None) => None,
            (Some(_), Some(_)) => return invalid("give --zoo or --config, not both"),
        };
        match cli.mode {
            Mode::Analyze | Mode::Scan if manifold.is_none() => {
                return invalid("this mode needs --zoo NAME or --config PATH")
            }
            Mode::Synthetic if manifold.is_some() => {
                return invalid("synthetic runs take no manifold")
            }
            _ => {}
        }
        Ok(RunConfig {
            mode: cli.mode,
            manifold,
            n: cli.n,
            point: cli.point.clone(),
            tol: cli.tol,
            seeds: cli.seeds,
            seed: cli.seed,
            radius: cli.radius,
            grid: cli.grid,
            out: cli.out.clone(),
            timings: !cli.no_timings,
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ToolInfo {
    pub name: &'static str,
    pub version: &'static str,
}

#[derive(Clone, Debug, Serialize)]
pub struct CurvatureSummary {
    pub norm_r: f64,
    pub norm_ricci: f64,
    pub scalar: f64,
    pub norm_nabla_r: f64,
    pub norm_nabla_j: f64,
    pub second_bianchi_residual: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct BochnerSummary {
    pub norm_q: f64,
    pub norm_phi_q: f64,
    pub norm_b: f64,
    /// `‖B‖ / ‖R‖`, null when `R = 0`
    pub relative_b: Option<f64>,
    pub residuals: Section2Residuals,
    pub tol: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct FrameSummary {
    pub mu: Vec<f64>,
    pub defects: FrameDefects,
}

#[derive(Clone, Debug, Serialize)]
pub struct FamilyFlags {
    pub magnitudes: [f64; 4],
    /// magnitude above `tol`
    pub nonzero: [bool; 4],
    pub tol: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct SyntheticCheckDump {
    pub check: &'static str,
    pub brute_force: ComplexValue,
    /// closed-form terms the calibration constants multiply
    pub closed_form_terms: Vec<ComplexValue>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SyntheticDump {
    pub seed: u64,
    pub n: usize,
    pub mu: Vec<f64>,
    pub skew_defect: f64,
    pub projection_defect: f64,
    /// max `|g((∇_Z J)Z_α, Z_β̄)|` over `Z ∈ {Z_γ, Z_γ̄}`
    pub type_defect: f64,
    pub checks: Vec<SyntheticCheckDump>,
}

/// Proof-level content; only the parts a mode produces are emitted.
#[derive(Clone, Debug, Default, Serialize)]
pub struct ProofSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub steps: Option<Vec<StepResidual>>,
    /// `tol·(1 + ‖R‖)·(1 + ‖∇J‖ + ‖∇Q‖)`
    #[serde(skip_serializing_if = "Option::is_none")]
    pub step_bound: Option<f64>,
    /// set only where the steps are asserted (`B ≈ 0`)
    #[serde(skip_serializing_if = "Option::is_none")]
    pub steps_within_bound: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub families: Option<FamilyFlags>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub deduction: Option<DeductionReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub case_engine: Option<Vec<DeductionReport>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scan: Option<ScanReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub synthetic: Option<SyntheticDump>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub tool: ToolInfo,
    pub input: RunConfig,
    pub manifold: Option<String>,
    pub point: Option<Vec<f64>>,
    pub warnings: Vec<String>,
    pub structure: Option<StructureDiagnostics>,
    pub curvature: Option<CurvatureSummary>,
    pub bochner: Option<BochnerSummary>,
    pub frame: Option<FrameSummary>,
    pub proof: Option<ProofSection>,
    pub verdict: Option<Classification>,
    pub timings: Option<BTreeMap<String, f64>>,
}

impl Report {
    fn new(cfg: &RunConfig) -> Self {
        Report {
            tool: ToolInfo {
                name: env!("CARGO_PKG_NAME"),
                version: env!("CARGO_PKG_VERSION"),
            },
            input: cfg.clone(),
            manifold: None,
            point: None,
            warnings: Vec::new(),
            structure: None,
            curvature: None,
            bochner: None,
            frame: None,
            proof: None,
            verdict: None,
            timings: None,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }
}

/// Report, exit code and plain-text summary of a run.
#[derive(Debug)]
pub struct Outcome {
    pub report: Report,
    pub exit_code: i32,
    pub summary: String,
}

struct Clock {
    on: bool,
    t: BTreeMap<String, f64>,
}

impl Clock {
    fn time<T>(&mut self, key: &str, f: impl FnOnce() -> T) -> T {
        let start = Instant::now();
        let out = f();
        if self.on {
            *self.t.entry(key.to_string()).or_default() += start.elapsed().as_secs_f64();
        }
        out
    }
}

fn resolve_manifold(src: &ManifoldSource) -> Result<LoadedManifold, CliError> {
    Ok(match src {
        ManifoldSource::Zoo { name, params } => LoadedManifold {
            manifold: zoo(name, params)?,
            warnings: Vec::new(),
        },
        ManifoldSource::Config { path } => load_manifold(path)?,
    })
}

/// Centre of the chart domain: 0 on unbounded axes, the midpoint otherwise.
pub fn default_point(m: &ChartManifold) -> Vec<f64> {
    m.domain()
        .iter()
        .map(|&(lo, hi)| match (lo.is_finite(), hi.is_finite()) {
            (true, true) => 0.5 * (lo + hi),
            (true, false) => lo + 1.0,
            (false, true) => hi - 1.0,
            (false, false) => 0.0,
        })
        .collect()
}

fn pick_point(cfg: &RunConfig, m: &ChartManifold) -> Result<Vec<f64>, CliError> {
    let p = cfg.point.clone().unwrap_or_else(|| default_point(m));
    if p.len() != m.dim() {
        return Err(GeometryError::PointDimension { got: p.len(), dim: m.dim() }.into());
    }
    Ok(p)
}

const LOW_DIMENSION: &str = "theorem requires n > 2";

pub fn run(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let mut clock = Clock {
        on: cfg.timings,
        t: BTreeMap::new(),
    };
    let mut report = Report::new(cfg);
    let mut summary = Vec::new();
    let mut exit_code = 0;
    match (cfg.mode, &cfg.manifold) {
        (Mode::Analyze | Mode::Proofcheck, Some(src)) => {
            analyze(cfg, src, &mut report, &mut clock, &mut summary)?;
        }
        (Mode::Scan, Some(src)) => scan(cfg, src, &mut report, &mut clock, &mut summary)?,
        (Mode::Proofcheck, None) => {
            if !proofcheck_synthetic(cfg, &mut report, &mut clock, &mut summary)? {
                exit_code = 1;
            }
        }
        (Mode::Synthetic, None) => synthetic(cfg, &mut report, &mut clock, &mut summary)?,
        _ => return Err(CliError::Invalid("mode and manifold source do not match".into())),
    }
    if let Some(c) = &report.verdict {
        summary.push(format!(
            "verdict: {} (bochner0 = {}, kahler = {}, flat = {}, tol = {:e})",
            c.verdict.as_str(),
            c.bochner0,
            c.kahler,
            c.flat,
            c.tol
        ));
        if c.verdict == Verdict::ViolationCandidate {
            exit_code = 2;
        }
    }
    report.timings = cfg.timings.then_some(clock.t);
    let mut text = String::new();
    for w in &report.warnings {
        text.push_str(&format!("warning: {w}\n"));
    }
    for line in summary {
        text.push_str(&line);
        text.push('\n');
    }
    Ok(Outcome {
        report,
        exit_code,
        summary: text,
    })
}

fn analyze(
    cfg: &RunConfig,
    src: &ManifoldSource,
    report: &mut Report,
    clock: &mut Clock,
    summary: &mut Vec<String>,
) -> Result<(), CliError> {
    let loaded = clock.time("load", || resolve_manifold(src))?;
    let m = &loaded.manifold;
    report.warnings.extend(loaded.warnings.iter().cloned());
    let p = pick_point(cfg, m)?;
    report.manifold = Some(m.name().to_string());
    report.point = Some(p.clone());
    let n = m.n();
    if n <= 2 {
        report.warnings.push(format!("{LOW_DIMENSION} (n = {n})"));
    }
    let structure = clock.time("structure", || validate(m, &p, cfg.tol))?;
    if !structure.passed {
        return Err(CliError::Invalid(format!(
            "({}, J) is not almost Hermitian at the point: J² defect {:e}, Hermitian defect {:e}",
            m.name(),
            structure.j_square_defect,
            structure.hermitian_defect
        )));
    }
    report.structure = Some(structure);
    let pkg = clock.time("curvature", || curvature_package(m, &p))?;
    let bp = clock.time("bochner", || BochnerPackage::new(&pkg))?;
    let bianchi = clock.time("curvature", || second_bianchi_residual(&pkg));
    let curvature = CurvatureSummary {
        norm_r: pkg.r.max_norm(),
        norm_ricci: pkg.ricci.max_norm(),
        scalar: pkg.scalar,
        norm_nabla_r: pkg.nabla_r.max_norm(),
        norm_nabla_j: pkg.nabla_j.max_norm(),
        second_bianchi_residual: bianchi,
    };
    let norm_b = bp.b.max_norm();
    report.bochner = Some(BochnerSummary {
        norm_q: bp.q.max_norm(),
        norm_phi_q: bp.phi_q.max_norm(),
        norm_b,
        relative_b: (curvature.norm_r > 0.0).then(|| norm_b / curvature.norm_r),
        residuals: bp.residuals.clone(),
        tol: cfg.tol,
    });
    summary.push(format!(
        "{} at {:?}: |R| = {:.6e}, tau = {:.10}, |B| = {:.6e}, |nabla J| = {:.6e}",
        m.name(),
        p,
        curvature.norm_r,
        curvature.scalar,
        norm_b,
        curvature.norm_nabla_j
    ));
    let classification = classify_package(&pkg, &bp, cfg.tol);
    if n > 2 {
        let asserted = classification.bochner0;
        match clock.time("proof", || manifold_proof_steps(&pkg, &bp, cfg.tol, asserted)) {
            Ok((af, steps)) => {
                let inputs = StepInputs {
                    nabla_j: &pkg.nabla_j,
                    dq: &pkg.nabla_q,
                    z: &af.z,
                    zbar: &af.zbar,
                    mu: &af.mu,
                };
                let magnitudes = family_magnitudes(&inputs);
                let nonzero = magnitudes.map(|x| x > cfg.tol);
                let deduction = case_deduction(nonzero, n)?;
                let bound = cfg.tol
                    * (1.0 + curvature.norm_r)
                    * (1.0 + curvature.norm_nabla_j + pkg.nabla_q.max_norm());
                let worst = steps.iter().map(|s| s.residual).fold(0.0, f64::max);
                let within = asserted.then_some(worst <= bound);
                if within == Some(false) {
                    report.warnings.push(format!(
                        "proof-step residual {worst:e} exceeds {bound:e} although B vanishes"
                    ));
                }
                summary.push(format!(
                    "mu = {:?}; worst step residual {:.3e} ({}); case engine: {}{}",
                    af.mu,
                    worst,
                    if asserted { "asserted" } else { "informational, B != 0" },
                    conclusion_text(deduction.conclusion),
                    if asserted { "" } else { " if B vanished" }
                ));
                report.frame = Some(FrameSummary {
                    mu: af.mu.clone(),
                    defects: af.defects(&bp.q1)?,
                });
                report.proof = Some(ProofSection {
                    steps: Some(steps),
                    step_bound: Some(bound),
                    steps_within_bound: within,
                    families: Some(FamilyFlags {
                        magnitudes,
                        nonzero,
                        tol: cfg.tol,
                    }),
                    deduction: Some(deduction),
                    ..Default::default()
                });
            }
            Err(e) => report.warnings.push(format!("no adapted frame diagonalizing Q: {e}")),
        }
    }
    report.curvature = Some(curvature);
    report.verdict = Some(classification);
    Ok(())
}

fn conclusion_text(c: CaseConclusion) -> &'static str {
    match c {
        CaseConclusion::FlatAtP => "flat at p",
        CaseConclusion::KahlerAtP => "Kählerian at p",
        CaseConclusion::Inconclusive => "inconclusive",
    }
}

fn scan(
    cfg: &RunConfig,
    src: &ManifoldSource,
    report: &mut Report,
    clock: &mut Clock,
    summary: &mut Vec<String>,
) -> Result<(), CliError> {
    let loaded = clock.time("load", || resolve_manifold(src))?;
    let m = &loaded.manifold;
    report.warnings.extend(loaded.warnings.iter().cloned());
    let p = pick_point(cfg, m)?;
    report.manifold = Some(m.name().to_string());
    report.point = Some(p.clone());
    if m.n() <= 2 {
        report.warnings.push(format!("{LOW_DIMENSION} (n = {})", m.n()));
    }
    let structure = clock.time("structure", || validate(m, &p, cfg.tol))?;
    report.structure = Some(structure);
    let c = clock.time("classify", || classify(m, &p, cfg.tol))?;
    let s = clock.time("scan", || neighborhood_scan(m, &p, cfg.radius, cfg.grid))?;
    if s.clipped > 0 {
        report
            .warnings
            .push(format!("{} grid points outside the chart domain were skipped", s.clipped));
    }
    summary.push(format!(
        "{}: max |R| = {:.6e} over {} grid points (radius {}, {} per axis)",
        m.name(),
        s.max_norm_r,
        s.sampled,
        cfg.radius,
        s.grid_per_axis
    ));
    report.proof = Some(ProofSection {
        scan: Some(s),
        ..Default::default()
    });
    report.verdict = Some(c);
    Ok(())
}

fn proofcheck_synthetic(
    cfg: &RunConfig,
    report: &mut Report,
    clock: &mut Clock,
    summary: &mut Vec<String>,
) -> Result<bool, CliError> {
    let n = cfg.n.unwrap_or(3);
    if n <= 2 {
        return Err(VerifyError::NotApplicable(n).into());
    }
    let oracle = clock.time("oracle", || run_synthetic_oracle(n, cfg.seeds, cfg.seed, 1e-9))?;
    let cases = clock.time("case_engine", || run_all_flag_combinations(n))?;
    let cases_ok = cases.iter().all(|r| {
        let want = if r.flags == [false; 4] {
            CaseConclusion::KahlerAtP
        } else {
            CaseConclusion::FlatAtP
        };
        r.conclusion == want
    });
    for c in &oracle.checks {
        let constants: Vec<String> = c
            .constants
            .iter()
            .map(|z| format!("{:+.6}{:+.6}i", z.re, z.im))
            .collect();
        summary.push(format!(
            "{:<26} constants [{}]  max relative error {:.3e}",
            c.check,
            constants.join(", "),
            c.max_relative_error
        ));
    }
    summary.push(format!(
        "synthetic oracle n = {n}, {} seeds: {} (max relative error {:.3e}, tolerance {:e})",
        oracle.seeds,
        if oracle.passed { "PASS" } else { "FAIL" },
        oracle.max_relative_error,
        oracle.tolerance
    ));
    summary.push(format!(
        "case engine, 16 flag combinations: {}",
        if cases_ok { "PASS" } else { "FAIL" }
    ));
    let passed = oracle.passed && cases_ok;
    report.proof = Some(ProofSection {
        oracle: Some(oracle),
        case_engine: Some(cases),
        ..Default::default()
    });
    Ok(passed)
}

fn synthetic(
    cfg: &RunConfig,
    report: &mut Report,
    clock: &mut Clock,
    summary: &mut Vec<String>,
) -> Result<(), CliError> {
    let n = cfg.n.unwrap_or(3);
    let sp = synthetic_point(cfg.seed, n, None)?;
    let dump = clock.time("synthetic", || -> Result<SyntheticDump, CliError> {
        let skew_defect = sp.a.symmetry_defect(SymmetryKind::Antisym(1, 2))?;
        let projection_defect = sp.a.distance(&admissible_projection(&sp.a, &sp.j)?)?;
        let s = sp.inputs();
        let mut type_defect = 0.0f64;
        for a in 0..n {
            for b in 0..n {
                for w in s.z.iter().chain(s.zbar.iter()) {
                    let v = sp.a.complex_eval(&[w.clone(), s.z[a].clone(), s.zbar[b].clone()])?;
                    type_defect = type_defect.max(v.norm());
                }
            }
        }
        let mut checks = Vec::new();
        let bianchi_point = sp.with_vanishing_mu(&[1, 2]);
        for c in SyntheticCheck::eq24_checks(n) {
            let (lhs, terms) = evaluate_sides(&sp, c)?;
            checks.push(dump_check(c, lhs, terms));
        }
        for c in SyntheticCheck::bianchi_checks() {
            let (lhs, terms) = evaluate_sides(&bianchi_point, c)?;
            checks.push(dump_check(c, lhs, terms));
        }
        Ok(SyntheticDump {
            seed: cfg.seed,
            n,
            mu: sp.mu.clone(),
            skew_defect,
            projection_defect,
            type_defect,
            checks,
        })
    })?;
    summary.push(format!(
        "synthetic seed {} n = {n}: mu = {:?}, skew defect {:.1e}, type defect {:.1e}",
        cfg.seed, dump.mu, dump.skew_defect, dump.type_defect
    ));
    report.proof = Some(ProofSection {
        synthetic: Some(dump),
        ..Default::default()
    });
    Ok(())
}

fn dump_check(c: SyntheticCheck, lhs: num_complex::Complex64, terms: Vec<num_complex::Complex64>) -> SyntheticCheckDump {
    SyntheticCheckDump {
        check: c.label(),
        brute_force: lhs.into(),
        closed_form_terms: terms.into_iter().map(Into::into).collect(),
    }
}

/// Parses arguments, runs, writes the report and returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let result = RunConfig::from_cli(&cli).and_then(|cfg| {
        let outcome = run(&cfg)?;
        Ok((cfg, outcome))
    });
    match result {
        Ok((cfg, outcome)) => {
            let json = outcome.report.to_json();
            match &cfg.out {
                Some(path) => {
                    if let Err(e) = std::fs::write(path, json) {
                        eprintln!("error: cannot write {}: {e}", path.display());
                        return 1;
                    }
                    print!("{}", outcome.summary);
                }
                None => {
                    print!("{json}");
                    eprint!("{}", outcome.summary);
                }
            }
            outcome.exit_code
        }
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cli(args: &[&str]) -> Cli {
        Cli::try_parse_from(std::iter::once("bochner-lab").chain(args.iter().copied())).unwrap()
    }

    #[test]
    fn run_config_validation() {
        assert!(RunConfig::from_cli(&cli(&["analyze", "--zoo", "flat_cn"])).is_ok());
        assert!(RunConfig::from_cli(&cli(&["analyze"])).is_err());
        assert!(RunConfig::from_cli(&cli(&["synthetic", "--zoo", "flat_cn"])).is_err());
        assert!(RunConfig::from_cli(&cli(&["analyze", "--zoo", "flat_cn", "--tol", "0"])).is_err());
        assert!(RunConfig::from_cli(&cli(&["scan", "--config", "x.json", "--n", "3"])).is_err());
        let c = RunConfig::from_cli(&cli(&["analyze", "--zoo", "flat_cn", "--point", "-1,0.5"])).unwrap();
        assert_eq!(c.point, Some(vec![-1.0, 0.5]));
        assert_eq!(c.tol, 1e-8);
    }

    #[test]
    fn default_point_lies_in_domain() {
        for name in crate::manifold::ZOO_NAMES {
            let m = zoo(name, &ZooParams::default()).unwrap();
            assert!(m.contains(&default_point(&m)), "{name}");
        }
    }

    #[test]
    fn run_reports_verdict_and_exit_code() {
        let cfg = RunConfig::from_cli(&cli(&["analyze", "--zoo", "flat_twisted_j", "--no-timings"])).unwrap();
        let out = run(&cfg).unwrap();
        assert_eq!(out.exit_code, 0);
        assert!(out.report.timings.is_none());
        let proof = out.report.proof.unwrap();
        assert_eq!(proof.deduction.unwrap().conclusion, CaseConclusion::FlatAtP);
        assert_eq!(proof.steps_within_bound, Some(true));
        assert!(out.summary.contains("verdict: consistent"));
    }
}
