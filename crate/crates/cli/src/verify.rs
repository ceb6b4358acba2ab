use std::f64::consts::{FRAC_PI_2, PI};

use gcslab_core::classifier::{critical_time_free, critical_time_free_cs, critical_time_vi, RatioSet};
use gcslab_core::dynamics::{FieldParams, SeedCoefficients};
use gcslab_core::oracle::{
    l2_distance, propagate, residual_convergence, schrodinger_residual, schrodinger_residual_with, verification_grid,
    PhaseVariant, SpatialGrid, WavefunctionSample,
};
use gcslab_core::roots::brute_force_crossing;
use gcslab_core::states::{cs_specialize, GcsState};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::config::{Format, RunConfig, Suite, VerifyBlock};
use crate::error::CliError;
use crate::output::{json_bytes, Cell, Table};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Below,
    Above,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub measured: Option<f64>,
    pub bound: f64,
    pub relation: Relation,
    pub error: Option<String>,
}

impl Check {
    fn new(name: &str, measured: gcslab_core::Result<f64>, relation: Relation, bound: f64) -> Self {
        let (measured, error) = match measured {
            Ok(v) => (Some(v), None),
            Err(e) => (None, Some(e.to_string())),
        };
        Self {
            name: name.to_string(),
            measured,
            bound,
            relation,
            error,
        }
    }

    pub fn pass(&self) -> bool {
        match (self.measured, self.relation) {
            (Some(v), Relation::Below) => v < self.bound,
            (Some(v), Relation::Above) => v > self.bound,
            (None, _) => false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    pub suite: Suite,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(Check::pass)
    }
}

fn random_state(rng: &mut ChaCha8Rng) -> gcslab_core::Result<GcsState> {
    let f0 = Complex64::from_polar(rng.gen_range(0.5..2.0), rng.gen_range(-PI..PI));
    let seed = SeedCoefficients::from_f0(f0, rng.gen_range(-1.0..1.0))?;
    let field = FieldParams::new(rng.gen_range(0.0..2.0), rng.gen_range(0.0..FRAC_PI_2));
    let zeta = Complex64::from_polar(rng.gen_range(0.0..2.0), rng.gen_range(-PI..PI));
    GcsState::new(seed, field, zeta)
}

fn ground(field: FieldParams, zeta: Complex64) -> gcslab_core::Result<GcsState> {
    GcsState::new(cs_specialize(std::f64::consts::FRAC_1_SQRT_2)?, field, zeta)
}

fn max_over<I>(values: I) -> gcslab_core::Result<f64>
where
    I: IntoIterator<Item = gcslab_core::Result<f64>>,
{
    values.into_iter().try_fold(0.0f64, |acc, v| Ok(acc.max(v?)))
}

fn rs_identity(block: &VerifyBlock) -> Vec<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(block.seed);
    let worst = max_over((0..block.cases).map(|_| {
        let state = random_state(&mut rng)?;
        Ok(state.moments(rng.gen_range(0.0..10.0)).rs_residual().abs())
    }));
    vec![Check::new("max |rs_residual|", worst, Relation::Below, 1e-12)]
}

fn norm(block: &VerifyBlock) -> Vec<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(block.seed ^ 0x6e6f726d);
    let states: Vec<_> = (0..block.cases.min(20)).map(|_| random_state(&mut rng)).collect();
    let sampled = max_over(states.iter().map(|s| {
        let s = s.clone()?;
        let tau = 1.0;
        let grid = verification_grid(&s, tau, SpatialGrid::verification_default())?;
        Ok((WavefunctionSample::from_state(&s, grid, tau)?.norm() - 1.0).abs())
    }));
    let quadrature = max_over(states.iter().map(|s| Ok((s.clone()?.at(1.0)?.norm()? - 1.0).abs())));
    let drift = (|| {
        let state = ground(FieldParams::new(1.5, 0.7), Complex64::new(0.3, 0.8))?;
        let start = WavefunctionSample::from_state(&state, SpatialGrid::verification_default(), 0.0)?;
        Ok(propagate(&start, state.field(), 2.0, 1e-3)?.norm_drift)
    })();
    vec![
        Check::new("max |grid norm - 1|", sampled, Relation::Below, 1e-10),
        Check::new("max |quadrature norm - 1|", quadrature, Relation::Below, 1e-10),
        Check::new(
            "propagation norm drift over tau in [0, 2]",
            drift,
            Relation::Below,
            1e-10,
        ),
    ]
}

fn oracle_distance(state: &GcsState, tau: f64) -> gcslab_core::Result<f64> {
    let grid = verification_grid(state, tau, SpatialGrid::verification_default())?;
    let start = WavefunctionSample::from_state(state, grid, 0.0)?;
    let end = propagate(&start, state.field(), tau, 1e-4)?;
    l2_distance(&end.sample, &WavefunctionSample::from_state(state, grid, tau)?, false)
}

fn propagate_suite() -> Vec<Check> {
    let free = ground(FieldParams::free(), Complex64::new(0.0, 0.0)).and_then(|s| oracle_distance(&s, 1.0));
    let field =
        ground(FieldParams::new(1.0, FRAC_PI_2), Complex64::new(1.0, 0.0)).and_then(|s| oracle_distance(&s, 0.5));
    vec![
        Check::new("free Gaussian L2 distance at tau = 1", free, Relation::Below, 1e-7),
        Check::new("field state L2 distance at tau = 0.5", field, Relation::Below, 1e-6),
    ]
}

fn residual_suite() -> Vec<Check> {
    let grid = SpatialGrid::verification_default();
    let free =
        ground(FieldParams::free(), Complex64::new(0.0, 0.0)).and_then(|s| schrodinger_residual(&s, &grid, 0.5, 1e-4));
    let seed = SeedCoefficients::from_f0(Complex64::new(0.9, -0.2), 0.3);
    let conv = seed
        .and_then(|seed| GcsState::new(seed, FieldParams::new(1.0, 0.4), Complex64::new(0.5, 0.5)))
        .and_then(|s| residual_convergence(&s, &grid, 0.5, &[4e-3, 2e-3]));
    let order_error = conv.map(|c| (c.ratios[0] / 16.0 - 1.0).abs());
    let mutated = ground(FieldParams::new(1.0, FRAC_PI_2), Complex64::new(1.0, 0.0))
        .and_then(|s| schrodinger_residual_with(&s, &grid, 0.5, 1e-3, PhaseVariant::WithoutPhaseIntegral));
    vec![
        Check::new(
            "free Gaussian residual at tau = 0.5, h = 1e-4",
            free,
            Relation::Below,
            1e-6,
        ),
        Check::new("|ratio/16 - 1| for h = 4e-3 -> 2e-3", order_error, Relation::Below, 0.2),
        Check::new("residual without the phase integral", mutated, Relation::Above, 1e-2),
    ]
}

fn critical_times_suite() -> Vec<Check> {
    let free = RatioSet::new(0.9, 0.5, 0.0, 1.0);
    let cs = RatioSet::new(0.5, 0.0, 0.0, 1.0).coherent();
    let vi = RatioSet::new(0.6, 0.6, 0.2, 1.0);
    let cases = [
        ("free GCS X=0.9 Y=0.5", free, critical_time_free(&free), (1.0, 10.0)),
        ("free CS X_sigma=0.5", cs, critical_time_free_cs(&cs), (0.5, 5.0)),
        ("field X=Y=0.6 W=0.2", vi, critical_time_vi(&vi), (0.1, 5.0)),
    ];
    cases
        .into_iter()
        .map(|(name, r, closed, (lo, hi))| {
            let rel = brute_force_crossing(|s| r.ratio_at(s).unwrap_or(f64::NAN), 1.0, lo, hi)
                .map(|root| (root - closed).abs() / closed);
            Check::new(
                &format!("{name}: |t_closed - t_bisect|/t_closed"),
                rel,
                Relation::Below,
                1e-8,
            )
        })
        .collect()
}

pub fn run_suites(block: &VerifyBlock) -> Vec<SuiteReport> {
    let mut seen = Vec::new();
    block
        .suites
        .iter()
        .filter(|s| {
            let fresh = !seen.contains(*s);
            seen.push(**s);
            fresh
        })
        .map(|&suite| SuiteReport {
            suite,
            checks: match suite {
                Suite::RsIdentity => rs_identity(block),
                Suite::Norm => norm(block),
                Suite::Propagate => propagate_suite(),
                Suite::Residual => residual_suite(),
                Suite::CriticalTimes => critical_times_suite(),
            },
        })
        .collect()
}

fn relation_str(r: Relation) -> &'static str {
    match r {
        Relation::Below => "<",
        Relation::Above => ">",
    }
}

pub fn report_json(cfg: &RunConfig, reports: &[SuiteReport]) -> Value {
    let suites: Vec<Value> = reports
        .iter()
        .map(|r| {
            json!({
                "name": r.suite.as_str(),
                "pass": r.pass(),
                "checks": r.checks.iter().map(|c| json!({
                    "name": c.name,
                    "measured": c.measured,
                    "relation": relation_str(c.relation),
                    "bound": c.bound,
                    "pass": c.pass(),
                    "error": c.error,
                })).collect::<Vec<_>>(),
            })
        })
        .collect();
    json!({
        "mode": "verify",
        "units": cfg.units.as_str(),
        "pass": reports.iter().all(SuiteReport::pass),
        "suites": suites,
    })
}

/// Runs the configured suites. The rendered report is returned together
/// with the overall verdict so the caller can set the exit code after
/// writing it.
pub fn run_verify(cfg: &RunConfig) -> Result<(Vec<u8>, bool), CliError> {
    let block = cfg.verify.clone().unwrap_or_default();
    if block.suites.is_empty() {
        return Err(CliError::config("verify.suites is empty"));
    }
    let reports = run_suites(&block);
    let pass = reports.iter().all(SuiteReport::pass);
    let bytes = match cfg.out.format {
        Format::Json => json_bytes(&report_json(cfg, &reports))?,
        Format::Csv => {
            let mut table = Table::new(vec!["suite", "check", "measured", "relation", "bound", "pass", "error"]);
            for r in &reports {
                for c in &r.checks {
                    table.push(vec![
                        Cell::Text(r.suite.as_str().to_string()),
                        Cell::Text(c.name.clone()),
                        Cell::opt(c.measured),
                        Cell::Text(relation_str(c.relation).to_string()),
                        Cell::Num(c.bound),
                        Cell::Bool(c.pass()),
                        c.error.clone().map_or(Cell::Missing, Cell::Text),
                    ]);
                }
            }
            table.to_csv(&format!("gcslab verify units={}", cfg.units.as_str()), cfg.precision()?)?
        }
    };
    Ok((bytes, pass))
}
