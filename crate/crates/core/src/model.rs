//! Physical parameters, classical field models, and Hamiltonian assembly.
//!
//! Four Hamiltonian variants are supported:
//!
//! - [`hamiltonian_full`]: H(t) = c(α·p) − μ(K·E(t)) + βmc² + β¹ħω, the full
//!   four-component form with the rest energy present.
//! - [`hamiltonian_transformed`]: the same with the βmc² term dropped — the
//!   result of treating the rest-energy phase transformation as if it
//!   commuted with the α terms.
//! - [`hamiltonian_exact_interaction`]: the exact interaction-picture
//!   counterpart U(t)(H_full − βmc²)U†(t) with U(t) = exp(+iβmc²t/ħ), which
//!   leaves residual e^(±2imc²t/ħ) phases on the off-diagonal blocks.
//! - [`hamiltonian_baseline2`]: the conventional two-component model
//!   H₂(t) = ħω_a(1 + σ_z)/2 − μE_axis(t)σ_axis.
//!
//! The coupling operator K is α (parity-admissible: E is polar and βαβ = −α)
//! or Σ (the axial alternative, kept for side-by-side comparison). Both enter
//! with the same sign, V = −μ(K·E).
//!
//! Units are dimensionless in a user-chosen consistent system; ħ and c are
//! explicit parameters defaulting to 1 so tests can set mc², ħω and μE₀
//! independently. The baseline's kinetic term p²/2m is dropped: it is
//! constant in the momentum representation and only contributes a global
//! phase. The quantized-field self-energy is omitted throughout (the field
//! is classical).

use serde::{Deserialize, Serialize};

use crate::algebra::{alpha, beta, beta1, pauli, sigma_big, Axis};
use crate::{Error, Matrix2, Matrix4, Result, C64};

/// Number of uniform samples used by [`validate_weak_field`]. All supplied
/// field models are smooth, so a fixed grid is sufficient.
pub const WEAK_FIELD_SAMPLES: usize = 1000;

fn real(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// Physical constants and atom parameters.
///
/// `omega` is the transition quantum carried by β¹ in the four-component
/// models; the two-component baseline uses its own `omega_a` (the two are
/// related by ω_a = 2ω when the models are compared on the {1,3} block, but
/// the relation is never assumed implicitly).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhysicalParams {
    /// Reduced Planck constant.
    #[serde(default = "default_unit")]
    pub hbar: f64,
    /// Speed of light.
    #[serde(default = "default_unit")]
    pub c: f64,
    /// Rest mass (the rest energy mc² is derived).
    pub mass: f64,
    /// Angular frequency of the atomic transition; ħω is the β¹ quantum.
    pub omega: f64,
    /// Dipole matrix element of the transition.
    pub mu: f64,
    /// Momentum 3-vector p.
    #[serde(default)]
    pub momentum: [f64; 3],
    /// Transition halfwidth Γ, needed only for the weak-field validity ratio.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    /// Transition frequency of the two-component baseline model.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega_a: Option<f64>,
}

fn default_unit() -> f64 {
    1.0
}

impl Default for PhysicalParams {
    fn default() -> Self {
        Self {
            hbar: 1.0,
            c: 1.0,
            mass: 0.0,
            omega: 0.0,
            mu: 0.0,
            momentum: [0.0; 3],
            gamma: None,
            omega_a: None,
        }
    }
}

impl PhysicalParams {
    /// Rest energy mc².
    pub fn rest_energy(&self) -> f64 {
        self.mass * self.c * self.c
    }

    /// Transition quantum ħω.
    pub fn transition_quantum(&self) -> f64 {
        self.hbar * self.omega
    }

    /// Check the numeric invariants, naming the offending field.
    pub fn validate(&self) -> Result<()> {
        let finite = |name: &str, v: f64| -> Result<()> {
            if v.is_finite() {
                Ok(())
            } else {
                Err(Error::InvalidParameter(format!(
                    "params.{name} must be finite"
                )))
            }
        };
        finite("hbar", self.hbar)?;
        finite("c", self.c)?;
        finite("mass", self.mass)?;
        finite("omega", self.omega)?;
        finite("mu", self.mu)?;
        if self.hbar <= 0.0 {
            return Err(Error::InvalidParameter(
                "params.hbar must be positive".into(),
            ));
        }
        if self.c <= 0.0 {
            return Err(Error::InvalidParameter("params.c must be positive".into()));
        }
        if self.mass < 0.0 {
            return Err(Error::InvalidParameter(
                "params.mass must be non-negative".into(),
            ));
        }
        if self.omega < 0.0 {
            return Err(Error::InvalidParameter(
                "params.omega must be non-negative".into(),
            ));
        }
        for (k, p) in self.momentum.iter().enumerate() {
            finite(&format!("momentum[{k}]"), *p)?;
        }
        if let Some(g) = self.gamma {
            finite("gamma", g)?;
            if g <= 0.0 {
                return Err(Error::InvalidParameter(
                    "params.gamma must be positive".into(),
                ));
            }
        }
        if let Some(w) = self.omega_a {
            finite("omega_a", w)?;
            if w < 0.0 {
                return Err(Error::InvalidParameter(
                    "params.omega_a must be non-negative".into(),
                ));
            }
        }
        Ok(())
    }
}

/// Time-dependent classical field E(t) with a fixed polarization vector.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum FieldModel {
    /// No field.
    Zero,
    /// Constant field E(t) = amplitude.
    Static { amplitude: [f64; 3] },
    /// E(t) = amplitude · cos(ν t + phase).
    Cosine {
        amplitude: [f64; 3],
        nu: f64,
        phase: f64,
    },
    /// E(t) = amplitude · exp(−(t−center)²/(2 width²)) · cos(ν t + phase).
    GaussianPulse {
        amplitude: [f64; 3],
        nu: f64,
        phase: f64,
        center: f64,
        width: f64,
    },
}

impl FieldModel {
    /// The field vector at time `t`.
    pub fn at(&self, t: f64) -> [f64; 3] {
        match self {
            FieldModel::Zero => [0.0; 3],
            FieldModel::Static { amplitude } => *amplitude,
            FieldModel::Cosine {
                amplitude,
                nu,
                phase,
            } => {
                let factor = (nu * t + phase).cos();
                amplitude.map(|a| a * factor)
            }
            FieldModel::GaussianPulse {
                amplitude,
                nu,
                phase,
                center,
                width,
            } => {
                let envelope = (-(t - center).powi(2) / (2.0 * width * width)).exp();
                let factor = envelope * (nu * t + phase).cos();
                amplitude.map(|a| a * factor)
            }
        }
    }

    /// The polarization amplitude vector (zero for [`FieldModel::Zero`]).
    pub fn amplitude(&self) -> [f64; 3] {
        match self {
            FieldModel::Zero => [0.0; 3],
            FieldModel::Static { amplitude }
            | FieldModel::Cosine { amplitude, .. }
            | FieldModel::GaussianPulse { amplitude, .. } => *amplitude,
        }
    }

    /// The coordinate axis the field is polarized along, if the amplitude has
    /// exactly one nonzero component.
    pub fn polarization_axis(&self) -> Option<Axis> {
        let amp = self.amplitude();
        let mut axis = None;
        for a in Axis::ALL {
            if amp[a.index()] != 0.0 {
                if axis.is_some() {
                    return None;
                }
                axis = Some(a);
            }
        }
        axis
    }

    /// Check the numeric invariants, naming the offending field.
    pub fn validate(&self) -> Result<()> {
        let check_amp = |amplitude: &[f64; 3]| -> Result<()> {
            if amplitude.iter().all(|a| a.is_finite()) {
                Ok(())
            } else {
                Err(Error::InvalidParameter(
                    "field.amplitude must be finite".into(),
                ))
            }
        };
        let check_nu = |nu: f64| -> Result<()> {
            if nu.is_finite() && nu >= 0.0 {
                Ok(())
            } else {
                Err(Error::InvalidParameter(
                    "field.nu must be non-negative".into(),
                ))
            }
        };
        match self {
            FieldModel::Zero => Ok(()),
            FieldModel::Static { amplitude } => check_amp(amplitude),
            FieldModel::Cosine {
                amplitude,
                nu,
                phase,
            } => {
                check_amp(amplitude)?;
                check_nu(*nu)?;
                if !phase.is_finite() {
                    return Err(Error::InvalidParameter("field.phase must be finite".into()));
                }
                Ok(())
            }
            FieldModel::GaussianPulse {
                amplitude,
                nu,
                phase,
                center,
                width,
            } => {
                check_amp(amplitude)?;
                check_nu(*nu)?;
                if !phase.is_finite() || !center.is_finite() {
                    return Err(Error::InvalidParameter(
                        "field.phase and field.center must be finite".into(),
                    ));
                }
                if !(width.is_finite() && *width > 0.0) {
                    return Err(Error::InvalidParameter(
                        "field.width must be positive".into(),
                    ));
                }
                Ok(())
            }
        }
    }
}

// Deserialization goes through a flat spec so that keys that don't belong to
// the declared field type are rejected with a named diagnostic (serde's
// `deny_unknown_fields` cannot do this for internally tagged enums).
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FieldSpec {
    #[serde(rename = "type")]
    kind: FieldKindName,
    amplitude: Option<[f64; 3]>,
    nu: Option<f64>,
    phase: Option<f64>,
    center: Option<f64>,
    width: Option<f64>,
}

#[derive(Clone, Copy, Deserialize)]
#[serde(rename_all = "snake_case")]
enum FieldKindName {
    Zero,
    Static,
    Cosine,
    GaussianPulse,
}

impl FieldKindName {
    fn as_str(self) -> &'static str {
        match self {
            FieldKindName::Zero => "zero",
            FieldKindName::Static => "static",
            FieldKindName::Cosine => "cosine",
            FieldKindName::GaussianPulse => "gaussian_pulse",
        }
    }
}

impl FieldSpec {
    fn build(self) -> std::result::Result<FieldModel, String> {
        let kind = self.kind;
        let require = |name: &str, v: Option<f64>| {
            v.ok_or_else(|| format!("field.{name} is required for type {}", kind.as_str()))
        };
        let forbid = |name: &str, present: bool| {
            if present {
                Err(format!(
                    "field.{name} is not valid for type {}",
                    kind.as_str()
                ))
            } else {
                Ok(())
            }
        };
        match kind {
            FieldKindName::Zero => {
                forbid("amplitude", self.amplitude.is_some())?;
                forbid("nu", self.nu.is_some())?;
                forbid("phase", self.phase.is_some())?;
                forbid("center", self.center.is_some())?;
                forbid("width", self.width.is_some())?;
                Ok(FieldModel::Zero)
            }
            FieldKindName::Static => {
                let amplitude = self.amplitude.ok_or_else(|| {
                    format!("field.amplitude is required for type {}", kind.as_str())
                })?;
                forbid("nu", self.nu.is_some())?;
                forbid("phase", self.phase.is_some())?;
                forbid("center", self.center.is_some())?;
                forbid("width", self.width.is_some())?;
                Ok(FieldModel::Static { amplitude })
            }
            FieldKindName::Cosine => {
                let amplitude = self.amplitude.ok_or_else(|| {
                    format!("field.amplitude is required for type {}", kind.as_str())
                })?;
                let nu = require("nu", self.nu)?;
                forbid("center", self.center.is_some())?;
                forbid("width", self.width.is_some())?;
                Ok(FieldModel::Cosine {
                    amplitude,
                    nu,
                    phase: self.phase.unwrap_or(0.0),
                })
            }
            FieldKindName::GaussianPulse => {
                let amplitude = self.amplitude.ok_or_else(|| {
                    format!("field.amplitude is required for type {}", kind.as_str())
                })?;
                let nu = require("nu", self.nu)?;
                let center = require("center", self.center)?;
                let width = require("width", self.width)?;
                Ok(FieldModel::GaussianPulse {
                    amplitude,
                    nu,
                    phase: self.phase.unwrap_or(0.0),
                    center,
                    width,
                })
            }
        }
    }
}

impl<'de> Deserialize<'de> for FieldModel {
    fn deserialize<D>(deserializer: D) -> std::result::Result<Self, D::Error>
    where
        D: serde::Deserializer<'de>,
    {
        FieldSpec::deserialize(deserializer)?
            .build()
            .map_err(serde::de::Error::custom)
    }
}

/// Which operator the dipole couples the field through.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CouplingKind {
    /// d = μα: the parity-admissible coupling (α is polar, like E).
    AlphaE,
    /// d = μΣ: the axial alternative, retained for comparison.
    SigmaE,
    /// Free atom, no dipole term.
    None,
}

/// Which Hamiltonian a run evolves under.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    /// Full four-component form including βmc².
    Full,
    /// βmc² dropped outright.
    TransformedLiteral,
    /// Exact interaction picture of the rest-energy transformation.
    TransformedExact,
    /// Conventional two-component model.
    Baseline2,
}

impl ModelKind {
    /// State dimension this model evolves.
    pub fn dim(self) -> usize {
        match self {
            ModelKind::Baseline2 => 2,
            _ => 4,
        }
    }
}

/// α·v for a real 3-vector v.
pub fn alpha_dot(v: [f64; 3]) -> Matrix4 {
    let mut m = Matrix4::zeros();
    for a in Axis::ALL {
        m += alpha(a) * real(v[a.index()]);
    }
    m
}

/// Σ·v for a real 3-vector v.
pub fn sigma_dot(v: [f64; 3]) -> Matrix4 {
    let mut m = Matrix4::zeros();
    for a in Axis::ALL {
        m += sigma_big(a) * real(v[a.index()]);
    }
    m
}

/// c(α·p) − μ(K·E(t)): the terms shared by every four-component variant.
fn kinetic_and_coupling(
    params: &PhysicalParams,
    coupling: CouplingKind,
    field: &FieldModel,
    t: f64,
) -> Matrix4 {
    let mut h = alpha_dot(params.momentum) * real(params.c);
    let e = field.at(t);
    match coupling {
        CouplingKind::AlphaE => h -= alpha_dot(e) * real(params.mu),
        CouplingKind::SigmaE => h -= sigma_dot(e) * real(params.mu),
        CouplingKind::None => {}
    }
    h
}

/// The full Hamiltonian H(t) = c(α·p) − μ(K·E(t)) + βmc² + β¹ħω.
pub fn hamiltonian_full(
    params: &PhysicalParams,
    coupling: CouplingKind,
    field: &FieldModel,
    t: f64,
) -> Result<Matrix4> {
    params.validate()?;
    field.validate()?;
    let mut h = kinetic_and_coupling(params, coupling, field, t);
    h += beta() * real(params.rest_energy());
    h += beta1() * real(params.transition_quantum());
    Ok(h)
}

/// The transformed Hamiltonian H(t) = c(α·p) − μ(K·E(t)) + β¹ħω, i.e. the
/// full form with the βmc² term removed.
pub fn hamiltonian_transformed(
    params: &PhysicalParams,
    coupling: CouplingKind,
    field: &FieldModel,
    t: f64,
) -> Result<Matrix4> {
    params.validate()?;
    field.validate()?;
    let mut h = kinetic_and_coupling(params, coupling, field, t);
    h += beta1() * real(params.transition_quantum());
    Ok(h)
}

/// The exact interaction-picture Hamiltonian
/// H_I(t) = U(t)(H_full(t) − βmc²)U†(t) with U(t) = exp(+iβmc²t/ħ).
///
/// Block-diagonal terms are unchanged; each off-diagonal 2×2 block picks up a
/// phase e^(±2imc²t/ħ). Coincides with [`hamiltonian_transformed`] at t = 0
/// and for massless atoms, and stays Hermitian for all t.
pub fn hamiltonian_exact_interaction(
    params: &PhysicalParams,
    coupling: CouplingKind,
    field: &FieldModel,
    t: f64,
) -> Result<Matrix4> {
    let mut h = hamiltonian_transformed(params, coupling, field, t)?;
    let theta = params.rest_energy() * t / params.hbar;
    let phase = C64::from_polar(1.0, 2.0 * theta);
    for i in 0..2 {
        for j in 2..4 {
            h[(i, j)] *= phase;
            h[(j, i)] *= phase.conj();
        }
    }
    Ok(h)
}

/// The conventional two-component Hamiltonian
/// H₂(t) = ħω_a(1 + σ_z)/2 − μE_axis(t)σ_axis.
///
/// The field must be polarized along `polarization_axis`; the kinetic p²/2m
/// term is omitted (constant in the momentum representation, a global phase).
pub fn hamiltonian_baseline2(
    params: &PhysicalParams,
    field: &FieldModel,
    t: f64,
    polarization_axis: Axis,
) -> Result<Matrix2> {
    params.validate()?;
    field.validate()?;
    let omega_a = params
        .omega_a
        .ok_or_else(|| Error::InvalidParameter("baseline model requires params.omega_a".into()))?;
    let amp = field.amplitude();
    for a in Axis::ALL {
        if a != polarization_axis && amp[a.index()] != 0.0 {
            return Err(Error::InvalidParameter(format!(
                "field polarization not aligned with axis {polarization_axis}"
            )));
        }
    }
    let e_axis = field.at(t)[polarization_axis.index()];
    let projector = (Matrix2::identity() + pauli(Axis::Z)) * real(0.5);
    Ok(projector * real(params.hbar * omega_a)
        - pauli(polarization_axis) * real(params.mu * e_axis))
}

/// Max over sampled t ∈ [0, horizon] of μ|E(t)|/(ħΓ), the weak-field validity
/// ratio. Values ≥ 1 mean the drive is strong enough to split levels; the
/// caller treats that as a regime warning, not an error.
pub fn validate_weak_field(
    params: &PhysicalParams,
    field: &FieldModel,
    horizon: f64,
) -> Result<f64> {
    params.validate()?;
    field.validate()?;
    let gamma = params.gamma.ok_or(Error::MissingHalfwidth)?;
    if !horizon.is_finite() || horizon < 0.0 {
        return Err(Error::InvalidParameter(
            "horizon must be non-negative".into(),
        ));
    }
    let n = WEAK_FIELD_SAMPLES;
    let mut worst: f64 = 0.0;
    for k in 0..n {
        let t = horizon * (k as f64) / ((n - 1) as f64);
        let e = field.at(t);
        let e_norm = (e[0] * e[0] + e[1] * e[1] + e[2] * e[2]).sqrt();
        worst = worst.max(params.mu.abs() * e_norm / (params.hbar * gamma));
    }
    Ok(worst)
}
