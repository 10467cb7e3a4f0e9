use std::fs;
use std::io::BufWriter;
use std::path::Path;

use serde::Serialize;

use wigner_entropy::condition1::{condition1_report, parse_k_grid, ConditionReport, CONDITION_TOL, SUFFICIENCY_TOL};
use wigner_entropy::fock_state::{DensityMatrix, StateSpec};
use wigner_entropy::functionals::{
    marginal_entropy_chain, vacuum_entropy, wigner_entropy, FunctionalReport, CHAIN_TOL, ENTROPY_DIVERGENCE_TOL,
};
use wigner_entropy::numerics::QuadratureSpec;
use wigner_entropy::qubit::{
    boundary_row_error, sweep_disk, sweep_maximum, sweep_minimum, write_sweep_csv, SweepRow,
};
use wigner_entropy::wigner::{
    certify_nonnegative, default_certify_rmax, sample_grid, to_wigner_polynomial, write_grid_csv, GridSpec,
    NonNegativityReport, WignerPolynomial, DEFAULT_NONNEG_TOL,
};

use crate::QuadArgs;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Table minimum must be within this of the vacuum entropy.
pub const SWEEP_TOL: f64 = 1e-6;

#[derive(Debug)]
pub enum Failure {
    Input(String),
    WignerNegative(String),
    ConditionFailed(String),
    Verification(String),
}

impl Failure {
    pub fn code(&self) -> u8 {
        match self {
            Failure::Input(_) => 1,
            Failure::WignerNegative(_) => 2,
            Failure::ConditionFailed(_) => 3,
            Failure::Verification(_) => 4,
        }
    }

    pub fn message(&self) -> String {
        match self {
            Failure::Input(m) => format!("error: {m}"),
            Failure::WignerNegative(m) | Failure::ConditionFailed(m) | Failure::Verification(m) => m.clone(),
        }
    }
}

pub fn input_error(e: impl std::fmt::Display) -> Failure {
    Failure::Input(e.to_string())
}

#[derive(Debug, Clone, Serialize)]
pub struct Tolerances {
    pub nonnegativity: f64,
    pub entropy_refinement: f64,
    pub condition: f64,
    pub sufficiency: f64,
    pub entropy_chain: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            nonnegativity: DEFAULT_NONNEG_TOL,
            entropy_refinement: ENTROPY_DIVERGENCE_TOL,
            condition: CONDITION_TOL,
            sufficiency: SUFFICIENCY_TOL,
            entropy_chain: CHAIN_TOL,
        }
    }
}

/// Echoed in every output.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub state: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output: Option<String>,
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    pub quadrature: QuadratureSpec,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k_grid: Option<Vec<f64>>,
    pub tolerances: Tolerances,
    pub version: &'static str,
}

impl RunConfig {
    pub fn new(command: &str, quadrature: QuadratureSpec) -> Self {
        Self {
            command: command.to_string(),
            state: None,
            output: None,
            seed: None,
            n: None,
            quadrature,
            k_grid: None,
            tolerances: Tolerances::default(),
            version: VERSION,
        }
    }
}

pub fn quad_spec(args: &QuadArgs) -> Result<QuadratureSpec, Failure> {
    let mut spec = QuadratureSpec::default();
    if let Some(r) = args.rmax {
        spec.rmax = r;
    }
    if let Some(n) = args.radial_nodes {
        spec.radial_nodes = n;
    }
    if let Some(n) = args.angular_nodes {
        spec.angular_nodes = n;
    }
    spec.validate().map_err(input_error)?;
    Ok(spec)
}

/// Inline JSON when the argument starts with `{`, otherwise a file path.
pub fn load_state(arg: &str) -> Result<(StateSpec, DensityMatrix), Failure> {
    let text = if arg.trim_start().starts_with('{') {
        arg.to_string()
    } else {
        fs::read_to_string(arg).map_err(|e| Failure::Input(format!("cannot read state file '{arg}': {e}")))?
    };
    let spec = StateSpec::from_json(&text).map_err(input_error)?;
    let rho = spec.to_density_matrix().map_err(input_error)?;
    Ok((spec, rho))
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("reports serialize");
    text.push('\n');
    text
}

/// Writes the JSON report to `out`, or to stdout when no path is given.
pub fn emit<T: Serialize>(value: &T, out: Option<&Path>) -> Result<(), Failure> {
    let text = to_json(value);
    match out {
        Some(path) => fs::write(path, text).map_err(|e| Failure::Input(format!("cannot write '{}': {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn round9(x: f64) -> f64 {
    let r = (x * 1e9).round() / 1e9;
    if r == 0.0 { 0.0 } else { r }
}

fn certify(w: &WignerPolynomial) -> NonNegativityReport {
    certify_nonnegative(w, default_certify_rmax(w), DEFAULT_NONNEG_TOL)
}

fn negative_message(rep: &NonNegativityReport) -> String {
    format!(
        "Wigner negative, witness ({}, {}), polynomial factor {:e}",
        round9(rep.argmin.0),
        round9(rep.argmin.1),
        rep.min_value
    )
}

#[derive(Serialize)]
struct EntropyOutput {
    config: RunConfig,
    state: StateSpec,
    nonnegativity: NonNegativityReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    entropy: Option<FunctionalReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    s_q: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    s_p: Option<f64>,
    /// `S_q + S_p >= 1 + ln π`.
    #[serde(skip_serializing_if = "Option::is_none")]
    uncertainty_ok: Option<bool>,
    /// `S_q + S_p >= S[W]`.
    #[serde(skip_serializing_if = "Option::is_none")]
    subadditivity_ok: Option<bool>,
    /// `S[W] >= 1 + ln π`.
    #[serde(skip_serializing_if = "Option::is_none")]
    above_vacuum: Option<bool>,
}

pub fn entropy(state_arg: &str, out: Option<&Path>, quad: &QuadArgs) -> Result<(), Failure> {
    let spec = quad_spec(quad)?;
    let (state, rho) = load_state(state_arg)?;
    let w = to_wigner_polynomial(&rho).map_err(input_error)?;
    let mut config = RunConfig::new("entropy", spec);
    config.state = Some(state_arg.to_string());
    config.output = out.map(|p| p.display().to_string());
    let nonnegativity = certify(&w);
    let mut output = EntropyOutput {
        config,
        state,
        nonnegativity,
        entropy: None,
        s_q: None,
        s_p: None,
        uncertainty_ok: None,
        subadditivity_ok: None,
        above_vacuum: None,
    };
    if !nonnegativity.is_nonnegative() {
        emit(&output, out)?;
        return Err(Failure::WignerNegative(negative_message(&nonnegativity)));
    }
    let s = wigner_entropy(&w, &spec).map_err(|e| Failure::Verification(e.to_string()))?;
    let chain = marginal_entropy_chain(&w, &spec).map_err(|e| Failure::Verification(e.to_string()))?;
    output.entropy = Some(FunctionalReport::new("wigner_entropy", &s, None));
    output.s_q = Some(chain.s_q);
    output.s_p = Some(chain.s_p);
    output.uncertainty_ok = Some(chain.uncertainty_ok);
    output.subadditivity_ok = Some(chain.subadditivity_ok);
    output.above_vacuum = Some(s.value >= vacuum_entropy() - ENTROPY_DIVERGENCE_TOL);
    emit(&output, out)
}

#[derive(Serialize)]
struct SweepSummary {
    config: RunConfig,
    rows: usize,
    minimum: SweepRow,
    maximum: SweepRow,
    vacuum_entropy: f64,
    boundary_rows: usize,
    boundary_max_error: f64,
    minimum_at_vacuum: bool,
}

pub fn sweep_qubit(n: usize, out: &Path, quad: &QuadArgs) -> Result<(), Failure> {
    let spec = quad_spec(quad)?;
    if n == 0 {
        return Err(Failure::Input("--n must be at least 1".into()));
    }
    let rows = sweep_disk(n, &spec).map_err(|e| Failure::Verification(e.to_string()))?;
    let file = fs::File::create(out).map_err(|e| Failure::Input(format!("cannot write '{}': {e}", out.display())))?;
    write_sweep_csv(&rows, BufWriter::new(file)).map_err(|e| Failure::Input(format!("cannot write '{}': {e}", out.display())))?;
    let minimum = *sweep_minimum(&rows).expect("non-empty sweep");
    let maximum = *sweep_maximum(&rows).expect("non-empty sweep");
    let errors: Vec<f64> = rows.iter().filter_map(boundary_row_error).collect();
    let boundary_max_error = errors.iter().copied().fold(0.0, f64::max);
    let minimum_at_vacuum =
        (minimum.r1, minimum.r3) == (0.0, 1.0) && (minimum.entropy - vacuum_entropy()).abs() <= SWEEP_TOL;
    let mut config = RunConfig::new("sweep-qubit", spec);
    config.n = Some(n);
    config.output = Some(out.display().to_string());
    let summary = SweepSummary {
        config,
        rows: rows.len(),
        minimum,
        maximum,
        vacuum_entropy: vacuum_entropy(),
        boundary_rows: errors.len(),
        boundary_max_error,
        minimum_at_vacuum,
    };
    emit(&summary, None)?;
    if !minimum_at_vacuum || boundary_max_error > SWEEP_TOL {
        return Err(Failure::Verification(format!(
            "sweep check failed: minimum {} at ({}, {}), boundary error {boundary_max_error:e}",
            minimum.entropy, minimum.r1, minimum.r3
        )));
    }
    Ok(())
}

#[derive(Serialize)]
struct ConditionOutput {
    config: RunConfig,
    state: StateSpec,
    report: ConditionReport,
}

pub fn check_condition1(state_arg: &str, out: Option<&Path>, k_grid: &str, quad: &QuadArgs) -> Result<(), Failure> {
    let spec = quad_spec(quad)?;
    let ks = parse_k_grid(k_grid).map_err(input_error)?;
    let (state, rho) = load_state(state_arg)?;
    let w = to_wigner_polynomial(&rho).map_err(input_error)?;
    let report = condition1_report(&w, &ks, &spec).map_err(input_error)?;
    let satisfied = report.condition1_satisfied;
    let abs_sum = report.abs_sum;
    let mut config = RunConfig::new("check-condition1", spec);
    config.state = Some(state_arg.to_string());
    config.output = out.map(|p| p.display().to_string());
    config.k_grid = Some(ks);
    emit(&ConditionOutput { config, state, report }, out)?;
    if satisfied {
        Ok(())
    } else {
        Err(Failure::ConditionFailed(format!("condition not satisfied: sum of |c~_ab| = {abs_sum}")))
    }
}

#[derive(Serialize)]
struct GridSidecar {
    config: RunConfig,
    state: StateSpec,
    grid: GridSpec,
    nonnegativity: NonNegativityReport,
}

pub fn grid(state_arg: &str, out: &Path, extent: f64, points: usize) -> Result<(), Failure> {
    if !(extent > 0.0) || points < 2 {
        return Err(Failure::Input("grid needs extent > 0 and at least 2 points".into()));
    }
    let (state, rho) = load_state(state_arg)?;
    let w = to_wigner_polynomial(&rho).map_err(input_error)?;
    let grid = GridSpec { extent, points };
    let rows = sample_grid(&w, &grid);
    let file = fs::File::create(out).map_err(|e| Failure::Input(format!("cannot write '{}': {e}", out.display())))?;
    write_grid_csv(&rows, BufWriter::new(file)).map_err(|e| Failure::Input(format!("cannot write '{}': {e}", out.display())))?;
    let mut config = RunConfig::new("grid", QuadratureSpec::default());
    config.state = Some(state_arg.to_string());
    config.output = Some(out.display().to_string());
    let sidecar = GridSidecar { config, state, grid, nonnegativity: certify(&w) };
    let sidecar_path = format!("{}.json", out.display());
    emit(&sidecar, Some(Path::new(&sidecar_path)))
}
