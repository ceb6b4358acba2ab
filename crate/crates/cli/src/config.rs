//! Run configuration: a JSON document plus `--dotted.key value` overrides.

use std::f64::consts::FRAC_PI_2;
use std::io::Read;
use std::path::{Path, PathBuf};

use gcslab_core::classifier::{SemiclassicalInput, StateKind};
use gcslab_core::dynamics::{si, PhysicalSetup, SeedCoefficients};
use gcslab_core::states::{cs_specialize, seed_from_spreads, zeta_from_initial, Branch, GcsState};
use num_complex::Complex64;
use serde::Deserialize;
use serde_json::Value;

use crate::error::CliError;

pub const MAX_CELLS: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Eval,
    Moments,
    Regime,
    Map,
    Verify,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Eval => "eval",
            Mode::Moments => "moments",
            Mode::Regime => "regime",
            Mode::Map => "map",
            Mode::Verify => "verify",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Units {
    #[default]
    Si,
    Natural,
}

impl Units {
    pub fn as_str(self) -> &'static str {
        match self {
            Units::Si => "si",
            Units::Natural => "natural",
        }
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParticleBlock {
    pub mass: Option<f64>,
    pub charge: Option<f64>,
    pub hbar: Option<f64>,
    pub c: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldBlock {
    #[serde(rename = "E", default)]
    pub e: f64,
    #[serde(default = "default_alpha")]
    pub alpha: f64,
}

impl Default for FieldBlock {
    fn default() -> Self {
        Self {
            e: 0.0,
            alpha: default_alpha(),
        }
    }
}

fn default_alpha() -> f64 {
    FRAC_PI_2
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeedBlock {
    pub f0: [f64; 2],
    pub g0: [f64; 2],
}

#[derive(Debug, Clone, Copy, Default, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BranchName {
    #[default]
    Spreading,
    Focusing,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SigmasBlock {
    pub sigma_q: f64,
    pub sigma_p: f64,
    #[serde(default)]
    pub branch: BranchName,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoherentBlock {
    pub sigma_q: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeansBlock {
    pub q: f64,
    pub p: f64,
}

/// Dimensionless state: one of `seed`, `sigmas`, `coherent`, and at most
/// one of `zeta`, `means`.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateBlock {
    pub seed: Option<SeedBlock>,
    pub sigmas: Option<SigmasBlock>,
    pub coherent: Option<CoherentBlock>,
    pub zeta: Option<[f64; 2]>,
    pub means: Option<MeansBlock>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PacketKind {
    #[default]
    Gcs,
    Cs,
}

impl From<PacketKind> for StateKind {
    fn from(kind: PacketKind) -> Self {
        match kind {
            PacketKind::Gcs => StateKind::Gcs,
            PacketKind::Cs => StateKind::Cs,
        }
    }
}

/// Physical packet for the classifiers. Without `sigma_pz` the packet is
/// minimal.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PacketBlock {
    pub sigma_z: f64,
    pub sigma_pz: Option<f64>,
    #[serde(default)]
    pub p_z: f64,
    #[serde(default)]
    pub kind: PacketKind,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RangeBlock {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum Axis {
    List(Vec<f64>),
    Range(RangeBlock),
}

impl Axis {
    pub fn values(&self, name: &str) -> Result<Vec<f64>, CliError> {
        let values = match self {
            Axis::List(v) => v.clone(),
            Axis::Range(r) => linspace(r.min, r.max, r.count, Scale::Lin, name)?,
        };
        if values.is_empty() {
            return Err(CliError::config(format!("{name}: no values")));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(CliError::config(format!("{name}: values must be finite")));
        }
        Ok(values)
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvalBlock {
    pub q: Axis,
    pub tau: Axis,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MomentsBlock {
    pub tau: Axis,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
pub enum SweepVar {
    #[serde(rename = "E")]
    Field,
    #[serde(rename = "sigma_z")]
    SigmaZ,
    #[serde(rename = "sigma_pz")]
    SigmaPz,
    #[serde(rename = "p_z")]
    Pz,
    #[serde(rename = "alpha")]
    Alpha,
}

impl SweepVar {
    pub fn as_str(self) -> &'static str {
        match self {
            SweepVar::Field => "E",
            SweepVar::SigmaZ => "sigma_z",
            SweepVar::SigmaPz => "sigma_pz",
            SweepVar::Pz => "p_z",
            SweepVar::Alpha => "alpha",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scale {
    #[default]
    Lin,
    Log,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepAxis {
    pub var: SweepVar,
    pub min: f64,
    pub max: f64,
    pub count: usize,
    #[serde(default)]
    pub scale: Scale,
}

impl SweepAxis {
    pub fn values(&self, name: &str) -> Result<Vec<f64>, CliError> {
        linspace(self.min, self.max, self.count, self.scale, name)
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepBlock {
    pub x: SweepAxis,
    pub y: SweepAxis,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    RsIdentity,
    Norm,
    Propagate,
    Residual,
    CriticalTimes,
}

impl Suite {
    pub const ALL: [Suite; 5] = [
        Suite::RsIdentity,
        Suite::Norm,
        Suite::Propagate,
        Suite::Residual,
        Suite::CriticalTimes,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Suite::RsIdentity => "rs-identity",
            Suite::Norm => "norm",
            Suite::Propagate => "propagate",
            Suite::Residual => "residual",
            Suite::CriticalTimes => "critical-times",
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyBlock {
    #[serde(default = "all_suites")]
    pub suites: Vec<Suite>,
    #[serde(default = "default_cases")]
    pub cases: usize,
    #[serde(default)]
    pub seed: u64,
}

impl Default for VerifyBlock {
    fn default() -> Self {
        Self {
            suites: all_suites(),
            cases: default_cases(),
            seed: 0,
        }
    }
}

fn all_suites() -> Vec<Suite> {
    Suite::ALL.to_vec()
}

fn default_cases() -> usize {
    100
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutBlock {
    pub path: Option<PathBuf>,
    #[serde(default)]
    pub format: Format,
    #[serde(default = "default_precision")]
    pub precision: usize,
}

impl Default for OutBlock {
    fn default() -> Self {
        Self {
            path: None,
            format: Format::Csv,
            precision: default_precision(),
        }
    }
}

fn default_precision() -> usize {
    12
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub mode: Option<Mode>,
    #[serde(default)]
    pub units: Units,
    #[serde(default)]
    pub particle: ParticleBlock,
    #[serde(default)]
    pub field: FieldBlock,
    pub length_scale: Option<f64>,
    pub state: Option<StateBlock>,
    pub packet: Option<PacketBlock>,
    pub eval: Option<EvalBlock>,
    pub moments: Option<MomentsBlock>,
    pub sweep: Option<SweepBlock>,
    pub verify: Option<VerifyBlock>,
    #[serde(default)]
    pub out: OutBlock,
}

fn linspace(min: f64, max: f64, count: usize, scale: Scale, name: &str) -> Result<Vec<f64>, CliError> {
    if count == 0 {
        return Err(CliError::config(format!("{name}: count must be >= 1")));
    }
    if !(min.is_finite() && max.is_finite()) {
        return Err(CliError::config(format!("{name}: bounds must be finite")));
    }
    if scale == Scale::Log && !(min > 0.0 && max > 0.0) {
        return Err(CliError::config(format!("{name}: log scale needs positive bounds")));
    }
    if count == 1 {
        return Ok(vec![min]);
    }
    let last = (count - 1) as f64;
    Ok((0..count)
        .map(|k| {
            let u = k as f64 / last;
            match scale {
                Scale::Lin => min + (max - min) * u,
                Scale::Log => (min.ln() + (max.ln() - min.ln()) * u).exp(),
            }
        })
        .collect())
}

/// Reads the config document from `path` (`-` for standard input).
pub fn read_document(path: &Path) -> Result<Value, CliError> {
    let text = if path == Path::new("-") {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| CliError::io(format!("reading standard input: {e}")))?;
        s
    } else {
        std::fs::read_to_string(path).map_err(|e| CliError::io(format!("reading {}: {e}", path.display())))?
    };
    serde_json::from_str(&text).map_err(|e| CliError::config(format!("{}: {e}", path.display())))
}

/// Applies `--a.b.c value` pairs. Values parse as JSON when they can and
/// are taken as strings otherwise.
pub fn apply_overrides(doc: &mut Value, args: &[String]) -> Result<(), CliError> {
    let mut it = args.iter();
    while let Some(flag) = it.next() {
        let key = flag
            .strip_prefix("--")
            .filter(|k| !k.is_empty())
            .ok_or_else(|| CliError::config(format!("override `{flag}` must look like --dotted.key")))?;
        let raw = it
            .next()
            .ok_or_else(|| CliError::config(format!("override `{flag}` has no value")))?;
        let value = serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.clone()));
        let mut node = &mut *doc;
        let parts: Vec<&str> = key.split('.').collect();
        for (i, part) in parts.iter().enumerate() {
            let map = match node {
                Value::Object(map) => map,
                _ => {
                    return Err(CliError::config(format!(
                        "override `{flag}`: `{}` is not an object",
                        parts[..i].join(".")
                    )))
                }
            };
            if i + 1 == parts.len() {
                map.insert(part.to_string(), value);
                break;
            }
            node = map
                .entry(part.to_string())
                .or_insert_with(|| Value::Object(Default::default()));
        }
    }
    Ok(())
}

pub fn parse_config(doc: Value) -> Result<RunConfig, CliError> {
    serde_json::from_value(doc).map_err(|e| CliError::config(format!("config: {e}")))
}

impl RunConfig {
    pub fn setup(&self) -> Result<PhysicalSetup, CliError> {
        let p = &self.particle;
        let (mass, charge, hbar, c, l) = match self.units {
            Units::Si => (
                si::ELECTRON_MASS,
                -si::ELEMENTARY_CHARGE,
                si::HBAR,
                si::SPEED_OF_LIGHT,
                1e-9,
            ),
            Units::Natural => (1.0, 1.0, 1.0, 1.0, 1.0),
        };
        PhysicalSetup::new(
            p.mass.unwrap_or(mass),
            p.charge.unwrap_or(charge),
            p.c.unwrap_or(c),
            p.hbar.unwrap_or(hbar),
            self.field.e,
            self.field.alpha,
            self.length_scale.unwrap_or(l),
        )
        .map_err(CliError::from_core_input)
    }

    pub fn state(&self, setup: &PhysicalSetup) -> Result<GcsState, CliError> {
        let block = self
            .state
            .as_ref()
            .ok_or_else(|| CliError::config("missing `state` block"))?;
        let given = [block.seed.is_some(), block.sigmas.is_some(), block.coherent.is_some()];
        if given.iter().filter(|g| **g).count() != 1 {
            return Err(CliError::config(
                "state: give exactly one of `seed`, `sigmas`, `coherent`",
            ));
        }
        let seed = if let Some(s) = &block.seed {
            SeedCoefficients::new(Complex64::new(s.f0[0], s.f0[1]), Complex64::new(s.g0[0], s.g0[1]))
        } else if let Some(s) = &block.sigmas {
            let branch = match s.branch {
                BranchName::Spreading => Branch::Spreading,
                BranchName::Focusing => Branch::Focusing,
            };
            seed_from_spreads(s.sigma_q, s.sigma_p, branch)
        } else {
            cs_specialize(block.coherent.as_ref().map(|c| c.sigma_q).unwrap_or_default())
        }
        .map_err(CliError::from_core_input)?;
        let zeta = match (&block.zeta, &block.means) {
            (Some(_), Some(_)) => return Err(CliError::config("state: give at most one of `zeta`, `means`")),
            (Some(z), None) => Complex64::new(z[0], z[1]),
            (None, Some(m)) => zeta_from_initial(&seed, m.q, m.p),
            (None, None) => Complex64::new(0.0, 0.0),
        };
        GcsState::in_setup(seed, zeta, setup).map_err(CliError::from_core_input)
    }

    pub fn packet(&self) -> Result<&PacketBlock, CliError> {
        self.packet
            .as_ref()
            .ok_or_else(|| CliError::config("missing `packet` block"))
    }

    pub fn precision(&self) -> Result<usize, CliError> {
        if (1..=17).contains(&self.out.precision) {
            Ok(self.out.precision)
        } else {
            Err(CliError::config("out.precision must lie in 1..=17"))
        }
    }
}

impl PacketBlock {
    pub fn input(&self, setup: PhysicalSetup) -> gcslab_core::Result<SemiclassicalInput> {
        match self.sigma_pz {
            Some(s) => SemiclassicalInput::new(self.sigma_z, s, self.p_z, setup),
            None => SemiclassicalInput::minimal(self.sigma_z, self.p_z, setup),
        }
    }
}
