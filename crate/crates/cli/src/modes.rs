use std::path::PathBuf;

use gcslab_core::classifier::{classify, physical_conditions_report, RegimeVerdict, SemiclassicalInput};
use gcslab_core::dynamics::PhysicalSetup;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::config::{Format, PacketBlock, RunConfig, SweepAxis, SweepVar, MAX_CELLS};
use crate::error::CliError;
use crate::output::{json_bytes, matrix_csv, Cell, Table};

/// Rendered output: the main document and any sidecar files.
pub struct Rendered {
    pub main: Vec<u8>,
    pub sidecars: Vec<(PathBuf, Vec<u8>)>,
}

impl Rendered {
    fn single(main: Vec<u8>) -> Self {
        Self {
            main,
            sidecars: Vec::new(),
        }
    }
}

fn header(cfg: &RunConfig, mode: &str, setup: &PhysicalSetup) -> String {
    format!(
        "gcslab {mode} units={} length_scale={}",
        cfg.units.as_str(),
        setup.length_scale()
    )
}

fn render_table(cfg: &RunConfig, mode: &str, setup: &PhysicalSetup, table: &Table) -> Result<Rendered, CliError> {
    let precision = cfg.precision()?;
    match cfg.out.format {
        Format::Csv => Ok(Rendered::single(table.to_csv(&header(cfg, mode, setup), precision)?)),
        Format::Json => {
            let mut doc = table.to_json_rows();
            doc["mode"] = json!(mode);
            doc["units"] = json!(cfg.units.as_str());
            doc["length_scale"] = json!(setup.length_scale());
            Ok(Rendered::single(json_bytes(&doc)?))
        }
    }
}

/// Wavefunction table `(q, τ, Re Φ, Im Φ, |Φ|²)`, `τ`-major.
pub fn run_eval(cfg: &RunConfig) -> Result<Rendered, CliError> {
    let setup = cfg.setup()?;
    let state = cfg.state(&setup)?;
    let block = cfg
        .eval
        .as_ref()
        .ok_or_else(|| CliError::config("missing `eval` block"))?;
    let qs = block.q.values("eval.q")?;
    let taus = block.tau.values("eval.tau")?;
    let mut table = Table::new(vec!["q", "tau", "re_phi", "im_phi", "density"]);
    for &tau in &taus {
        let at = state.at(tau).map_err(CliError::from_core_numeric)?;
        for &q in &qs {
            let phi = at.amplitude(q);
            table.push(vec![
                Cell::Num(q),
                Cell::Num(tau),
                Cell::Num(phi.re),
                Cell::Num(phi.im),
                Cell::Num(phi.norm_sqr()),
            ]);
        }
    }
    render_table(cfg, "eval", &setup, &table)
}

/// Closed-form moments in dimensionless and setup units.
pub fn run_moments(cfg: &RunConfig) -> Result<Rendered, CliError> {
    let setup = cfg.setup()?;
    let state = cfg.state(&setup)?;
    let block = cfg
        .moments
        .as_ref()
        .ok_or_else(|| CliError::config("missing `moments` block"))?;
    let taus = block.tau.values("moments.tau")?;
    let l = setup.length_scale();
    let p_unit = setup.hbar() / l;
    let mut table = Table::new(vec![
        "tau",
        "mean_q",
        "mean_p",
        "sigma_q",
        "sigma_p",
        "sigma_qp",
        "rs_residual",
        "t",
        "mean_z",
        "mean_pz",
        "sigma_z",
        "sigma_pz",
    ]);
    for &tau in &taus {
        let m = state.moments(tau);
        table.push(vec![
            Cell::Num(tau),
            Cell::Num(m.mean_q),
            Cell::Num(m.mean_p),
            Cell::Num(m.sigma_q),
            Cell::Num(m.sigma_p),
            Cell::Num(m.sigma_qp),
            Cell::Num(m.rs_residual()),
            Cell::Num(setup.tau_to_time(tau)),
            Cell::Num(m.mean_q * l),
            Cell::Num(m.mean_p * p_unit),
            Cell::Num(m.sigma_q * l),
            Cell::Num(m.sigma_p * p_unit),
        ]);
    }
    render_table(cfg, "moments", &setup, &table)
}

const REGIME_COLUMNS: [&str; 30] = [
    "regime",
    "condition_label",
    "time_value",
    "time_over_t_sigma",
    "recovery_time",
    "X",
    "Y",
    "X_sigma",
    "W",
    "W_sigma",
    "t_sigma",
    "de_broglie",
    "compton",
    "critical_field",
    "soft_factor",
    "momentum_dominates",
    "momentum_dominates_soft",
    "transient_window",
    "spread_dominates",
    "wide_packet",
    "wide_packet_soft",
    "strong_field",
    "strong_field_soft",
    "moderate_field",
    "weak_field",
    "balanced_weak",
    "strong_field_cs",
    "strong_field_cs_soft",
    "weak_field_cs",
    "minimal",
];

fn regime_row(input: &SemiclassicalInput, verdict: &RegimeVerdict) -> Vec<Cell> {
    let r = input.ratios();
    let c = physical_conditions_report(input);
    let t = verdict.time_value();
    vec![
        Cell::Text(verdict.regime.name().to_string()),
        Cell::Text(verdict.label.as_str().to_string()),
        Cell::opt(t),
        Cell::opt(t.map(|t| t / r.t_sigma)),
        Cell::opt(verdict.recovery_time),
        Cell::Num(r.x),
        Cell::Num(r.y),
        Cell::Num(r.x_sigma),
        Cell::Num(r.w),
        Cell::Num(r.w_sigma),
        Cell::Num(r.t_sigma),
        Cell::opt(c.de_broglie),
        Cell::Num(c.compton),
        Cell::Num(c.critical_field),
        Cell::Num(c.soft_factor),
        Cell::Bool(c.momentum_dominates),
        Cell::Bool(c.momentum_dominates_soft),
        Cell::Bool(c.transient_window),
        Cell::Bool(c.spread_dominates),
        Cell::Bool(c.wide_packet),
        Cell::Bool(c.wide_packet_soft),
        Cell::Bool(c.strong_field),
        Cell::Bool(c.strong_field_soft),
        Cell::Bool(c.moderate_field),
        Cell::Bool(c.weak_field),
        Cell::Bool(c.balanced_weak),
        Cell::Bool(c.strong_field_cs),
        Cell::Bool(c.strong_field_cs_soft),
        Cell::Bool(c.weak_field_cs),
        Cell::Bool(input.is_minimal()),
    ]
}

/// One verdict record with ratios and physical-condition flags.
pub fn run_regime(cfg: &RunConfig) -> Result<Rendered, CliError> {
    let setup = cfg.setup()?;
    let packet = cfg.packet()?;
    let input = packet.input(setup).map_err(CliError::from_core_input)?;
    let verdict = classify(&input, packet.kind.into()).map_err(CliError::from_core_input)?;
    let mut table = Table::new(REGIME_COLUMNS.to_vec());
    table.push(regime_row(&input, &verdict));
    let precision = cfg.precision()?;
    match cfg.out.format {
        Format::Csv => Ok(Rendered::single(
            table.to_csv(&header(cfg, "regime", &setup), precision)?,
        )),
        Format::Json => {
            let doc = json!({
                "mode": "regime",
                "units": cfg.units.as_str(),
                "record": table.to_json_record(),
            });
            Ok(Rendered::single(json_bytes(&doc)?))
        }
    }
}

fn cell_input(
    base: &PacketBlock,
    setup: PhysicalSetup,
    assignments: [(SweepVar, f64); 2],
) -> gcslab_core::Result<SemiclassicalInput> {
    let mut packet = base.clone();
    let mut setup = setup;
    for (var, value) in assignments {
        match var {
            SweepVar::Field => setup = setup.with_field(value)?,
            SweepVar::Alpha => setup = setup.with_alpha(value)?,
            SweepVar::SigmaZ => packet.sigma_z = value,
            SweepVar::SigmaPz => packet.sigma_pz = Some(value),
            SweepVar::Pz => packet.p_z = value,
        }
    }
    packet.input(setup)
}

fn thread_pool() -> Result<rayon::ThreadPool, CliError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(raw) = std::env::var("GCSLAB_THREADS") {
        let n: usize = raw
            .trim()
            .parse()
            .ok()
            .filter(|n| *n >= 1)
            .ok_or_else(|| CliError::config(format!("GCSLAB_THREADS must be a positive integer, got `{raw}`")))?;
        builder = builder.num_threads(n);
    }
    builder
        .build()
        .map_err(|e| CliError::config(format!("thread pool: {e}")))
}

fn axis_json(axis: &SweepAxis, values: &[f64]) -> Value {
    json!({
        "var": axis.var.as_str(),
        "scale": match axis.scale { crate::config::Scale::Lin => "lin", crate::config::Scale::Log => "log" },
        "values": values,
    })
}

/// Label matrix over two sweep axes; rows follow `y`, columns follow `x`.
/// Cells whose inputs are invalid are labelled `invalid`.
pub fn run_map(cfg: &RunConfig) -> Result<Rendered, CliError> {
    let setup = cfg.setup()?;
    let packet = cfg.packet()?;
    let sweep = cfg
        .sweep
        .as_ref()
        .ok_or_else(|| CliError::config("missing `sweep` block"))?;
    if sweep.x.var == sweep.y.var {
        return Err(CliError::config("sweep.x and sweep.y must use different variables"));
    }
    let cells = sweep.x.count.saturating_mul(sweep.y.count);
    if cells > MAX_CELLS {
        return Err(CliError::config(format!(
            "sweep has {cells} cells, limit is {MAX_CELLS}"
        )));
    }
    let xs = sweep.x.values("sweep.x")?;
    let ys = sweep.y.values("sweep.y")?;
    let kind = packet.kind.into();
    let pool = thread_pool()?;
    let verdicts: Vec<Option<RegimeVerdict>> = pool.install(|| {
        (0..cells)
            .into_par_iter()
            .map(|k| {
                let (iy, ix) = (k / xs.len(), k % xs.len());
                let input = cell_input(packet, setup, [(sweep.x.var, xs[ix]), (sweep.y.var, ys[iy])]).ok()?;
                classify(&input, kind).ok()
            })
            .collect()
    });
    let label = |v: &Option<RegimeVerdict>| v.map_or("invalid".to_string(), |v| v.label.as_str().to_string());
    let labels: Vec<Vec<String>> = verdicts
        .chunks(xs.len())
        .map(|row| row.iter().map(label).collect())
        .collect();
    let axes = json!({
        "mode": "map",
        "units": cfg.units.as_str(),
        "kind": match packet.kind { crate::config::PacketKind::Gcs => "gcs", crate::config::PacketKind::Cs => "cs" },
        "x": axis_json(&sweep.x, &xs),
        "y": axis_json(&sweep.y, &ys),
    });
    match cfg.out.format {
        Format::Csv => {
            let path = cfg
                .out
                .path
                .as_ref()
                .ok_or_else(|| CliError::config("map with csv output needs out.path for the axes sidecar"))?;
            let mut sidecar = path.as_os_str().to_owned();
            sidecar.push(".axes.json");
            Ok(Rendered {
                main: matrix_csv(&header(cfg, "map", &setup), &labels)?,
                sidecars: vec![(PathBuf::from(sidecar), json_bytes(&axes)?)],
            })
        }
        Format::Json => {
            let regimes: Vec<Vec<&str>> = verdicts
                .chunks(xs.len())
                .map(|row| row.iter().map(|v| v.map_or("invalid", |v| v.regime.name())).collect())
                .collect();
            let times: Vec<Vec<Option<f64>>> = verdicts
                .chunks(xs.len())
                .map(|row| row.iter().map(|v| v.and_then(|v| v.time_value())).collect())
                .collect();
            let mut doc = axes;
            doc["labels"] = json!(labels);
            doc["regimes"] = json!(regimes);
            doc["time_values"] = json!(times);
            Ok(Rendered::single(json_bytes(&doc)?))
        }
    }
}
