//! Derived quantities on states and trajectories: norms, populations, the
//! particle/antiparticle block populations (reported under their
//! radiant/absorptive labels), dipole expectation values, and
//! oscillation-frequency extraction.

use nalgebra::DVector;
use rustfft::FftPlanner;

use crate::algebra::Axis;
use crate::dynamics::Trajectory;
use crate::model::{alpha_dot, sigma_dot, CouplingKind};
use crate::{Error, Matrix4, Result, Spinor4, C64};

/// Spectral peaks must exceed three times the median bin magnitude to count
/// as an oscillation.
pub const PEAK_OVER_MEDIAN: f64 = 3.0;

/// Absolute spectral floor (in population units × sample count) below which
/// a peak is treated as roundoff noise rather than an oscillation.
pub const PEAK_ABS_FLOOR: f64 = 1e-10;

/// Imaginary residue allowed on a Hermitian expectation value.
pub const EXPECTATION_IMAG_TOL: f64 = 1e-12;

/// √(Σ|ψᵢ|²).
pub fn norm(state: &DVector<C64>) -> f64 {
    state.norm()
}

/// |ψᵢ|² for each component.
pub fn populations(state: &DVector<C64>) -> Vec<f64> {
    state.iter().map(|z| z.norm_sqr()).collect()
}

/// (|ψ₁|² + |ψ₂|², |ψ₃|² + |ψ₄|²): the particle/antiparticle block weights,
/// reported as (radiant, absorptive).
pub fn block_populations(state: &Spinor4) -> (f64, f64) {
    (
        state[0].norm_sqr() + state[1].norm_sqr(),
        state[2].norm_sqr() + state[3].norm_sqr(),
    )
}

/// μ⟨ψ|K|ψ⟩ componentwise, with K = α or Σ per the coupling choice.
///
/// The operators are Hermitian so the result is real; an imaginary residue
/// beyond [`EXPECTATION_IMAG_TOL`] (scaled by the state norm) is an internal
/// error. A coupling of `None` has no dipole operator and is rejected.
pub fn dipole_expectation(state: &Spinor4, coupling: CouplingKind, mu: f64) -> Result<[f64; 3]> {
    let operator: fn([f64; 3]) -> Matrix4 = match coupling {
        CouplingKind::AlphaE => alpha_dot,
        CouplingKind::SigmaE => sigma_dot,
        CouplingKind::None => return Err(Error::NoDipoleOperator),
    };
    let mut out = [0.0; 3];
    let scale = state.norm_squared().max(1.0);
    for axis in Axis::ALL {
        let mut unit = [0.0; 3];
        unit[axis.index()] = 1.0;
        let expect: C64 = state.dotc(&(operator(unit) * state));
        if expect.im.abs() > EXPECTATION_IMAG_TOL * scale {
            return Err(Error::ImaginaryResidue { residue: expect.im });
        }
        out[axis.index()] = mu * expect.re;
    }
    Ok(out)
}

/// One row of derived quantities at a sampled time.
#[derive(Clone, Debug, PartialEq)]
pub enum ObservableRecord {
    /// Four-component sample: per-component populations, the block split,
    /// and the dipole expectation (zero when the run has no coupling).
    Spinor {
        t: f64,
        norm: f64,
        populations: [f64; 4],
        pop_radiant: f64,
        pop_absorptive: f64,
        dipole: [f64; 3],
    },
    /// Two-component sample.
    TwoLevel {
        t: f64,
        norm: f64,
        pop_upper: f64,
        pop_lower: f64,
    },
}

impl ObservableRecord {
    pub fn time(&self) -> f64 {
        match self {
            ObservableRecord::Spinor { t, .. } | ObservableRecord::TwoLevel { t, .. } => *t,
        }
    }

    pub fn norm(&self) -> f64 {
        match self {
            ObservableRecord::Spinor { norm, .. } | ObservableRecord::TwoLevel { norm, .. } => {
                *norm
            }
        }
    }
}

/// Derive one [`ObservableRecord`] per sample of a trajectory.
pub fn trajectory_records(trajectory: &Trajectory) -> Result<Vec<ObservableRecord>> {
    let coupling = trajectory.problem.coupling;
    let mu = trajectory.problem.params.mu;
    let mut records = Vec::with_capacity(trajectory.len());
    for (k, t) in trajectory.times.iter().enumerate() {
        let state = &trajectory.states[k];
        let record = if let Some(spinor) = trajectory.spinor(k) {
            let pops = populations(state);
            let (pop_radiant, pop_absorptive) = block_populations(&spinor);
            let dipole = match coupling {
                CouplingKind::None => [0.0; 3],
                _ => dipole_expectation(&spinor, coupling, mu)?,
            };
            ObservableRecord::Spinor {
                t: *t,
                norm: norm(state),
                populations: [pops[0], pops[1], pops[2], pops[3]],
                pop_radiant,
                pop_absorptive,
                dipole,
            }
        } else {
            let pops = populations(state);
            ObservableRecord::TwoLevel {
                t: *t,
                norm: norm(state),
                pop_upper: pops[0],
                pop_lower: pops[1],
            }
        };
        records.push(record);
    }
    Ok(records)
}

/// Which population signal of a trajectory to analyze.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ComponentSelector {
    /// |Ψ_k|² for a 1-based component index 1..=4.
    Population(usize),
    /// Upper population of a two-component run.
    Upper,
    /// Lower population of a two-component run.
    Lower,
    /// Particle-block weight |Ψ₁|² + |Ψ₂|².
    Radiant,
    /// Antiparticle-block weight |Ψ₃|² + |Ψ₄|².
    Absorptive,
}

/// Extract the selected population signal from a trajectory.
pub fn population_signal(trajectory: &Trajectory, selector: ComponentSelector) -> Result<Vec<f64>> {
    let dim = trajectory.dim();
    let index = match selector {
        ComponentSelector::Population(k) => {
            if k == 0 || k > dim {
                return Err(Error::ComponentMismatch(format!(
                    "component {k} out of range for a {dim}-component run"
                )));
            }
            Some(k - 1)
        }
        ComponentSelector::Upper | ComponentSelector::Lower => {
            if dim != 2 {
                return Err(Error::ComponentMismatch(
                    "upper/lower populations need a 2-component run".into(),
                ));
            }
            Some(if selector == ComponentSelector::Upper {
                0
            } else {
                1
            })
        }
        ComponentSelector::Radiant | ComponentSelector::Absorptive => {
            if dim != 4 {
                return Err(Error::ComponentMismatch(
                    "block populations need a 4-component run".into(),
                ));
            }
            None
        }
    };
    let signal = trajectory
        .states
        .iter()
        .map(|s| match (index, selector) {
            (Some(i), _) => s[i].norm_sqr(),
            (None, ComponentSelector::Radiant) => s[0].norm_sqr() + s[1].norm_sqr(),
            (None, _) => s[2].norm_sqr() + s[3].norm_sqr(),
        })
        .collect();
    Ok(signal)
}

/// Dominant angular frequency of the selected population signal.
///
/// See [`dominant_angular_frequency`] for the estimator and its resolution.
pub fn oscillation_frequency(trajectory: &Trajectory, selector: ComponentSelector) -> Result<f64> {
    let signal = population_signal(trajectory, selector)?;
    let times = &trajectory.times;
    if times.len() < 2 {
        return Err(Error::NoOscillation);
    }
    // Keep the uniformly spaced prefix; the final shortened landing step (if
    // any) is dropped so the DFT sees a uniform grid.
    let dt = times[1] - times[0];
    let mut n = times.len();
    for k in 2..times.len() {
        if ((times[k] - times[k - 1]) - dt).abs() > 1e-9 * dt.max(1e-300) {
            n = k;
            break;
        }
    }
    dominant_angular_frequency(dt, &signal[..n])
}

/// Dominant angular frequency of a uniformly sampled signal, estimated from
/// the peak of the mean-removed magnitude spectrum with parabolic
/// interpolation.
///
/// The grid resolution before interpolation is 2π/(n·dt). The peak must rise
/// above [`PEAK_OVER_MEDIAN`] times the median bin magnitude and the
/// absolute floor [`PEAK_ABS_FLOOR`]·n, and must sit at bin index ≥ 2 (at
/// least two full cycles in the window); otherwise no oscillation is
/// detected. At least 16 samples are required.
pub fn dominant_angular_frequency(dt: f64, signal: &[f64]) -> Result<f64> {
    let n = signal.len();
    if n < 16 || !(dt.is_finite() && dt > 0.0) || signal.iter().any(|x| !x.is_finite()) {
        return Err(Error::NoOscillation);
    }
    let mean = signal.iter().sum::<f64>() / n as f64;
    let mut buf: Vec<C64> = signal.iter().map(|&x| C64::new(x - mean, 0.0)).collect();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);

    let half = n / 2;
    let mags: Vec<f64> = (1..=half).map(|k| buf[k].norm()).collect();
    let mut sorted = mags.clone();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let median = sorted[sorted.len() / 2];

    let (peak_offset, &peak) = mags
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
        .unwrap();
    let peak_bin = peak_offset + 1;
    if peak <= PEAK_OVER_MEDIAN * median || peak <= PEAK_ABS_FLOOR * n as f64 || peak_bin < 2 {
        return Err(Error::NoOscillation);
    }

    // Parabolic interpolation on the magnitudes of the peak and its neighbors.
    let left = buf[peak_bin - 1].norm();
    let right = if peak_bin + 1 < n {
        buf[peak_bin + 1].norm()
    } else {
        0.0
    };
    let denom = left - 2.0 * peak + right;
    let delta = if denom.abs() > 0.0 {
        0.5 * (left - right) / denom
    } else {
        0.0
    };
    let delta = delta.clamp(-0.5, 0.5);

    Ok(2.0 * std::f64::consts::PI * (peak_bin as f64 + delta) / (n as f64 * dt))
}
