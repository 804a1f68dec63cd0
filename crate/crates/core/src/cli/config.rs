//! Config documents for runs and sweeps.
//!
//! A run config is a TOML document with `model_kind`, `coupling`, a `[params]`
//! table, a `[field]` table, the time grid, and optional output settings.
//! Adding a `[sweep]` table (an `axis` path plus a `values` list) turns it
//! into a sweep. Unknown keys anywhere are errors.

use serde::{Deserialize, Serialize};

use super::CliError;
use crate::dynamics::{EvolutionProblem, InitialState, IntegratorKind};
use crate::model::{CouplingKind, FieldModel, ModelKind, PhysicalParams};
use crate::{Spinor4, State2, C64};

/// A single validated run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub model_kind: ModelKind,
    pub coupling: CouplingKind,
    #[serde(default = "default_integrator")]
    pub integrator: IntegratorKind,
    pub params: PhysicalParams,
    pub field: FieldModel,
    /// Complex amplitudes as [re, im] pairs; 4 for the spinor models, 2 for
    /// the baseline. Defaults to the ground (lowest-energy) component.
    #[serde(default)]
    pub initial_state: Option<Vec<[f64; 2]>>,
    pub t0: f64,
    pub t1: f64,
    pub dt: f64,
    #[serde(default = "default_stride")]
    pub sample_stride: usize,
    #[serde(default = "default_prefix")]
    pub output_prefix: String,
    /// Parsed and echoed for forward compatibility; no stochastic component
    /// uses it yet.
    #[serde(default)]
    pub seed: Option<u64>,
}

fn default_integrator() -> IntegratorKind {
    IntegratorKind::ExpMidpoint
}

fn default_stride() -> usize {
    1
}

fn default_prefix() -> String {
    "run".into()
}

impl RunConfig {
    /// The initial state, with the documented ground-component default.
    pub fn resolve_initial_state(&self) -> Result<InitialState, CliError> {
        let dim = self.model_kind.dim();
        match &self.initial_state {
            None => Ok(if dim == 4 {
                // Lowest energy component of the free four-component models.
                InitialState::Four(Spinor4::new(
                    C64::new(0.0, 0.0),
                    C64::new(0.0, 0.0),
                    C64::new(1.0, 0.0),
                    C64::new(0.0, 0.0),
                ))
            } else {
                InitialState::Two(State2::new(C64::new(0.0, 0.0), C64::new(1.0, 0.0)))
            }),
            Some(pairs) => {
                if pairs.len() != dim {
                    return Err(CliError::Config(format!(
                        "component count mismatch: model expects {dim} components, initial_state has {}",
                        pairs.len()
                    )));
                }
                let comps: Vec<C64> = pairs.iter().map(|[re, im]| C64::new(*re, *im)).collect();
                Ok(if dim == 4 {
                    InitialState::Four(Spinor4::new(comps[0], comps[1], comps[2], comps[3]))
                } else {
                    InitialState::Two(State2::new(comps[0], comps[1]))
                })
            }
        }
    }

    /// Assemble and validate the evolution problem this config describes.
    pub fn to_problem(&self) -> Result<EvolutionProblem, CliError> {
        let problem = EvolutionProblem {
            model: self.model_kind,
            coupling: self.coupling,
            params: self.params.clone(),
            field: self.field.clone(),
            initial_state: self.resolve_initial_state()?,
            t0: self.t0,
            t1: self.t1,
            dt: self.dt,
            integrator: self.integrator,
            sample_stride: self.sample_stride,
        };
        problem.validate()?;
        Ok(problem)
    }

    /// A copy with every default materialized, for the JSON summary echo.
    pub fn resolved(&self) -> Result<RunConfig, CliError> {
        let state = self.resolve_initial_state()?;
        let pairs = match state {
            InitialState::Four(s) => s.iter().map(|z| [z.re, z.im]).collect(),
            InitialState::Two(s) => s.iter().map(|z| [z.re, z.im]).collect(),
        };
        Ok(RunConfig {
            initial_state: Some(pairs),
            ..self.clone()
        })
    }
}

/// One run per value of a swept scalar.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub base: RunConfig,
    /// Dotted path of the swept scalar, e.g. `field.amplitude.z` or
    /// `params.omega`.
    pub axis: String,
    pub values: Vec<f64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SweepSection {
    axis: String,
    values: Vec<f64>,
}

/// A parsed config document.
#[derive(Clone, Debug, PartialEq)]
pub enum ParsedConfig {
    Run(RunConfig),
    Sweep(SweepConfig),
}

/// Parse and fully validate a config document. Syntax errors carry TOML
/// line/column positions; semantic errors name the offending field.
pub fn parse_config(text: &str) -> Result<ParsedConfig, CliError> {
    let mut table: toml::Table =
        toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
    let sweep_section = table.remove("sweep");
    let run: RunConfig = toml::Value::Table(table)
        .try_into()
        .map_err(|e: toml::de::Error| CliError::Config(e.to_string()))?;
    // Surface structural problems (bad dt, component mismatch, ...) at parse
    // time rather than when the run starts.
    run.to_problem()?;

    match sweep_section {
        None => Ok(ParsedConfig::Run(run)),
        Some(value) => {
            let section: SweepSection = value
                .try_into()
                .map_err(|e: toml::de::Error| CliError::Config(format!("sweep: {e}")))?;
            if section.values.is_empty() {
                return Err(CliError::Config("sweep.values must not be empty".into()));
            }
            if !section.values.iter().all(|v| v.is_finite()) {
                return Err(CliError::Config("sweep.values must be finite".into()));
            }
            // Reject unknown axis paths (and values that break the config)
            // before any run starts.
            for (k, v) in section.values.iter().enumerate() {
                let mut probe = run.clone();
                set_axis_value(&mut probe, &section.axis, *v)?;
                probe
                    .to_problem()
                    .map_err(|e| CliError::Config(format!("sweep value #{k} ({v}): {e}")))?;
            }
            Ok(ParsedConfig::Sweep(SweepConfig {
                base: run,
                axis: section.axis,
                values: section.values,
            }))
        }
    }
}

/// Set the scalar named by a dotted axis path, e.g. `params.omega`,
/// `params.momentum.z`, `field.amplitude.x`, `field.nu`, `t1`, `dt`.
pub fn set_axis_value(config: &mut RunConfig, path: &str, value: f64) -> Result<(), CliError> {
    let unknown = || CliError::Config(format!("unknown sweep axis '{path}'"));
    let component = |rest: &str| -> Result<usize, CliError> {
        match rest {
            "x" => Ok(0),
            "y" => Ok(1),
            "z" => Ok(2),
            _ => Err(unknown()),
        }
    };
    match path {
        "t0" => config.t0 = value,
        "t1" => config.t1 = value,
        "dt" => config.dt = value,
        "params.hbar" => config.params.hbar = value,
        "params.c" => config.params.c = value,
        "params.mass" => config.params.mass = value,
        "params.omega" => config.params.omega = value,
        "params.mu" => config.params.mu = value,
        "params.gamma" => config.params.gamma = Some(value),
        "params.omega_a" => config.params.omega_a = Some(value),
        _ => {
            if let Some(rest) = path.strip_prefix("params.momentum.") {
                config.params.momentum[component(rest)?] = value;
            } else if let Some(rest) = path.strip_prefix("field.amplitude.") {
                let idx = component(rest)?;
                match &mut config.field {
                    FieldModel::Static { amplitude }
                    | FieldModel::Cosine { amplitude, .. }
                    | FieldModel::GaussianPulse { amplitude, .. } => amplitude[idx] = value,
                    FieldModel::Zero => {
                        return Err(CliError::Config(format!(
                            "axis '{path}' is not available for a zero field"
                        )))
                    }
                }
            } else if let Some(rest) = path.strip_prefix("field.") {
                match (rest, &mut config.field) {
                    ("nu", FieldModel::Cosine { nu, .. })
                    | ("nu", FieldModel::GaussianPulse { nu, .. }) => *nu = value,
                    ("phase", FieldModel::Cosine { phase, .. })
                    | ("phase", FieldModel::GaussianPulse { phase, .. }) => *phase = value,
                    ("center", FieldModel::GaussianPulse { center, .. }) => *center = value,
                    ("width", FieldModel::GaussianPulse { width, .. }) => *width = value,
                    ("nu" | "phase" | "center" | "width", _) => {
                        return Err(CliError::Config(format!(
                            "axis '{path}' is not available for this field type"
                        )))
                    }
                    _ => return Err(unknown()),
                }
            } else {
                return Err(unknown());
            }
        }
    }
    Ok(())
}
