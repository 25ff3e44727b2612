//! Named, seeded checks of every identity the library relies on, run as a
//! suite and reported as JSON, CSV or a text table.

mod checks;

use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::category::CategoryData;
use crate::diagram::DiagramError;
use crate::exec::Exec;
use crate::homspace::HomError;
use crate::reps::RepError;
use crate::tube::TubeError;

/// Every check, in report order.
pub const CHECK_NAMES: &[&str] = &[
    "pentagon",
    "hexagon",
    "unit_coherence",
    "rigidity",
    "dimensions",
    "sphericality",
    "modularity",
    "simple_pairing",
    "identity_decomposition",
    "trace_pairing",
    "trace_cyclicity",
    "twisted_duals",
    "dual_decomposition",
    "killing_ring",
    "killing_ring_pair",
    "twisted_s",
    "yang_baxter",
    "crossing_naturality",
    "evaluator_functoriality",
    "tube_identity",
    "tube_associativity",
    "tube_dimension",
    "tube_algebra",
    "functor_laws",
    "naturality",
    "opposite",
    "idempotents",
    "composition_rule",
    "matrix_units",
    "completeness",
];

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("unknown check `{0}`")]
    UnknownCheck(String),
    #[error(transparent)]
    Rep(#[from] RepError),
    #[error(transparent)]
    Tube(#[from] TubeError),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error(transparent)]
    Hom(#[from] HomError),
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    pub name: String,
    pub category: String,
    pub params: String,
    pub seed: u64,
    /// `None` when the check could not be evaluated.
    pub max_residual: Option<f64>,
    pub tolerance: f64,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    /// Seconds. Left out of serialised reports so they stay reproducible.
    #[serde(skip)]
    pub wall_time: f64,
}

/// Knobs for [`run_suite_with`].
#[derive(Clone, Copy, Debug)]
pub struct SuiteOptions {
    pub seed: u64,
    /// Random instances per randomised check; `None` uses each check's default.
    pub instances: Option<usize>,
    pub exec: Exec,
}

/// Result of one check before it is wrapped in a report.
pub(crate) struct Outcome {
    pub residual: f64,
    pub params: String,
    pub detail: Option<String>,
}

impl Outcome {
    fn new(residual: f64, params: impl Into<String>) -> Self {
        Self { residual, params: params.into(), detail: None }
    }
}

fn check_seed(seed: u64, index: usize) -> u64 {
    seed.wrapping_add((index as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

/// Runs one check by name.
pub fn run_check(cat: &CategoryData, name: &str, seed: u64, instances: Option<usize>, exec: Exec) -> Result<CheckReport, VerifyError> {
    let index = CHECK_NAMES
        .iter()
        .position(|&n| n == name)
        .ok_or_else(|| VerifyError::UnknownCheck(name.to_string()))?;
    let check_seed = check_seed(seed, index);
    let mut rng = ChaCha8Rng::seed_from_u64(check_seed);
    let tol = cat.tolerance();
    let start = Instant::now();
    let outcome = checks::dispatch(cat, name, &mut rng, instances, exec);
    let wall_time = start.elapsed().as_secs_f64();
    let (max_residual, params, detail) = match outcome {
        Ok(o) => (Some(o.residual).filter(|r| r.is_finite()), o.params, o.detail),
        Err(e) => (None, String::new(), Some(e.to_string())),
    };
    Ok(CheckReport {
        name: name.to_string(),
        category: cat.name().to_string(),
        params,
        seed: check_seed,
        max_residual,
        tolerance: tol,
        pass: max_residual.is_some_and(|r| r <= tol),
        detail,
        wall_time,
    })
}

/// Runs the selected checks (all when `selection` is empty) in registry
/// order.
pub fn run_suite(cat: &CategoryData, selection: &[&str], seed: u64, exec: Exec) -> Result<Vec<CheckReport>, VerifyError> {
    run_suite_with(cat, selection, SuiteOptions { seed, instances: None, exec })
}

pub fn run_suite_with(cat: &CategoryData, selection: &[&str], opts: SuiteOptions) -> Result<Vec<CheckReport>, VerifyError> {
    if let Some(bad) = selection.iter().find(|s| !CHECK_NAMES.contains(s)) {
        return Err(VerifyError::UnknownCheck(bad.to_string()));
    }
    let names: Vec<&str> = CHECK_NAMES
        .iter()
        .copied()
        .filter(|n| selection.is_empty() || selection.contains(n))
        .collect();
    opts.exec
        .map(names, |n| run_check(cat, n, opts.seed, opts.instances, opts.exec))
        .into_iter()
        .collect()
}

pub fn all_pass(reports: &[CheckReport]) -> bool {
    reports.iter().all(|r| r.pass)
}

fn fmt_residual(r: Option<f64>) -> String {
    r.map_or_else(|| "error".to_string(), |r| format!("{r:.3e}"))
}

/// Plain-text table, one row per check.
pub fn to_text(reports: &[CheckReport]) -> String {
    let width = reports.iter().map(|r| r.name.len()).max().unwrap_or(4).max(5);
    let mut out = format!("{:<width$}  {:>10}  {:>9}  {:<4}  params\n", "check", "residual", "tolerance", "ok");
    for r in reports {
        out.push_str(&format!(
            "{:<width$}  {:>10}  {:>9.1e}  {:<4}  {}",
            r.name,
            fmt_residual(r.max_residual),
            r.tolerance,
            if r.pass { "pass" } else { "FAIL" },
            r.params
        ));
        if let Some(d) = &r.detail {
            out.push_str(&format!("  ({d})"));
        }
        out.push('\n');
    }
    out
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn to_csv(reports: &[CheckReport]) -> String {
    let mut out = String::from("name,category,params,seed,max_residual,tolerance,pass,detail\n");
    for r in reports {
        let fields = [
            csv_field(&r.name),
            csv_field(&r.category),
            csv_field(&r.params),
            r.seed.to_string(),
            r.max_residual.map_or_else(String::new, |x| format!("{x:e}")),
            format!("{:e}", r.tolerance),
            r.pass.to_string(),
            csv_field(r.detail.as_deref().unwrap_or("")),
        ];
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}
