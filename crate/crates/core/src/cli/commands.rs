//! The four CLI commands and their output writers.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;

use super::config::{set_axis_value, RunConfig, SweepConfig};
use super::CliError;
use crate::algebra::{
    alpha, anticommutator, beta, beta1, commutator, max_abs_diff, max_abs_entry, parity_conjugate,
    pauli, sigma_big, Axis, DEFAULT_TOL,
};
use crate::dynamics::{
    canonical_transform, evolve, step_plan, transform_trajectory, InitialState, Trajectory,
    TransformDirection,
};
use crate::model::{validate_weak_field, CouplingKind, FieldModel, ModelKind};
use crate::observables::{
    oscillation_frequency, population_signal, trajectory_records, ComponentSelector,
    ObservableRecord,
};
use crate::{Matrix4, C64};

/// Numbers are written with 17 significant digits in scientific notation so
/// CSV output round-trips exactly and repeated runs are byte-identical.
fn fmt_num(x: f64) -> String {
    format!("{:.16e}", x)
}

fn csv_quote(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn prepare_output_path(output_dir: &Path, name: &str) -> Result<PathBuf, CliError> {
    let path = output_dir.join(name);
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent)?;
        }
    }
    Ok(path)
}

fn write_records_csv(path: &Path, records: &[ObservableRecord]) -> Result<(), CliError> {
    let mut out = std::io::BufWriter::new(fs::File::create(path)?);
    let four = matches!(
        records.first(),
        Some(ObservableRecord::Spinor { .. }) | None
    );
    if four {
        writeln!(
            out,
            "t,norm,pop1,pop2,pop3,pop4,pop_radiant,pop_absorptive,dx,dy,dz"
        )?;
    } else {
        writeln!(out, "t,norm,pop_upper,pop_lower")?;
    }
    for record in records {
        match record {
            ObservableRecord::Spinor {
                t,
                norm,
                populations,
                pop_radiant,
                pop_absorptive,
                dipole,
            } => {
                writeln!(
                    out,
                    "{},{},{},{},{},{},{},{},{},{},{}",
                    fmt_num(*t),
                    fmt_num(*norm),
                    fmt_num(populations[0]),
                    fmt_num(populations[1]),
                    fmt_num(populations[2]),
                    fmt_num(populations[3]),
                    fmt_num(*pop_radiant),
                    fmt_num(*pop_absorptive),
                    fmt_num(dipole[0]),
                    fmt_num(dipole[1]),
                    fmt_num(dipole[2]),
                )?;
            }
            ObservableRecord::TwoLevel {
                t,
                norm,
                pop_upper,
                pop_lower,
            } => {
                writeln!(
                    out,
                    "{},{},{},{}",
                    fmt_num(*t),
                    fmt_num(*norm),
                    fmt_num(*pop_upper),
                    fmt_num(*pop_lower),
                )?;
            }
        }
    }
    out.flush()?;
    Ok(())
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::Io(format!("JSON serialization failed: {e}")))?;
    fs::write(path, text + "\n")?;
    Ok(())
}

/// Pick the population signal with the largest dynamic range and estimate
/// its dominant angular frequency. None when no oscillation is detected.
pub fn summary_frequency(trajectory: &Trajectory) -> Option<f64> {
    let selectors: Vec<ComponentSelector> = if trajectory.dim() == 4 {
        (1..=4).map(ComponentSelector::Population).collect()
    } else {
        vec![ComponentSelector::Upper, ComponentSelector::Lower]
    };
    let mut best: Option<(f64, ComponentSelector)> = None;
    for selector in selectors {
        let Ok(signal) = population_signal(trajectory, selector) else {
            continue;
        };
        let lo = signal.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = signal.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let range = hi - lo;
        if best.is_none_or(|(r, _)| range > r) {
            best = Some((range, selector));
        }
    }
    oscillation_frequency(trajectory, best?.1).ok()
}

/// JSON summary of one run.
#[derive(Clone, Debug, Serialize)]
pub struct RunSummary {
    pub config: RunConfig,
    pub weak_field_ratio: Option<f64>,
    pub weak_field_ok: Option<bool>,
    pub final_norm_drift: f64,
    pub oscillation_frequency: Option<f64>,
    pub wall_time_s: f64,
    pub steps_per_second: f64,
}

/// What `run` wrote and where.
#[derive(Clone, Debug)]
pub struct RunArtifacts {
    pub summary: RunSummary,
    pub csv_path: PathBuf,
    pub json_path: PathBuf,
}

/// Evolve one configured problem; write `<prefix>.csv` and `<prefix>.json`.
///
/// A validity ratio ≥ 1 still runs; the summary flags `weak_field_ok: false`.
pub fn cmd_run(
    config: &RunConfig,
    output_dir: &Path,
    quiet: bool,
) -> Result<RunArtifacts, CliError> {
    let problem = config.to_problem()?;

    let weak_field_ratio = match config.params.gamma {
        Some(_) => {
            let horizon = config.t1.max(config.t1 - config.t0).max(0.0);
            Some(validate_weak_field(&config.params, &config.field, horizon)?)
        }
        None => None,
    };
    let weak_field_ok = weak_field_ratio.map(|r| r < 1.0);

    let started = Instant::now();
    let trajectory = evolve(&problem)?;
    let wall_time_s = started.elapsed().as_secs_f64();
    let (n_full, remainder) = step_plan(config.t0, config.t1, config.dt);
    let steps = n_full + u64::from(remainder > 0.0);
    let steps_per_second = if wall_time_s > 0.0 {
        steps as f64 / wall_time_s
    } else {
        0.0
    };

    let records = trajectory_records(&trajectory)?;
    let summary = RunSummary {
        config: config.resolved()?,
        weak_field_ratio,
        weak_field_ok,
        final_norm_drift: trajectory.final_norm_drift(),
        oscillation_frequency: summary_frequency(&trajectory),
        wall_time_s,
        steps_per_second,
    };

    let csv_path = prepare_output_path(output_dir, &format!("{}.csv", config.output_prefix))?;
    let json_path = prepare_output_path(output_dir, &format!("{}.json", config.output_prefix))?;
    write_records_csv(&csv_path, &records)?;
    write_json(&json_path, &summary)?;

    if !quiet {
        println!(
            "run {}: {} samples, norm drift {:.3e}, {:.3e} steps/s -> {}",
            config.output_prefix,
            records.len(),
            summary.final_norm_drift,
            summary.steps_per_second,
            csv_path.display(),
        );
        if summary.weak_field_ok == Some(false) {
            println!(
                "  warning: weak-field ratio {:.3} >= 1; level-splitting regime",
                summary.weak_field_ratio.unwrap_or(f64::NAN)
            );
        }
    }

    Ok(RunArtifacts {
        summary,
        csv_path,
        json_path,
    })
}

/// What `sweep` produced: per-value results in values order plus the
/// aggregate CSV.
#[derive(Debug)]
pub struct SweepArtifacts {
    pub results: Vec<Result<RunArtifacts, CliError>>,
    pub aggregate_csv: PathBuf,
}

impl SweepArtifacts {
    pub fn all_ok(&self) -> bool {
        self.results.iter().all(|r| r.is_ok())
    }

    /// 0 when every sub-run succeeded, otherwise the first failure's code.
    pub fn exit_code(&self) -> i32 {
        self.results
            .iter()
            .find_map(|r| r.as_ref().err().map(|e| e.exit_code()))
            .unwrap_or(0)
    }
}

/// Run the base config once per sweep value (concurrently, up to `jobs`
/// workers), writing `<prefix>_<index>.csv/json` per run and an aggregate
/// `<prefix>_sweep.csv` ordered like the values list.
pub fn cmd_sweep(
    sweep: &SweepConfig,
    output_dir: &Path,
    jobs: usize,
    quiet: bool,
) -> Result<SweepArtifacts, CliError> {
    let configs: Vec<RunConfig> = sweep
        .values
        .iter()
        .enumerate()
        .map(|(index, value)| {
            let mut config = sweep.base.clone();
            set_axis_value(&mut config, &sweep.axis, *value)?;
            config.output_prefix = format!("{}_{index}", sweep.base.output_prefix);
            Ok(config)
        })
        .collect::<Result<_, CliError>>()?;

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| CliError::Io(format!("thread pool: {e}")))?;
    let results: Vec<Result<RunArtifacts, CliError>> = pool.install(|| {
        use rayon::prelude::*;
        configs
            .par_iter()
            .map(|config| cmd_run(config, output_dir, true))
            .collect()
    });

    let aggregate_csv = prepare_output_path(
        output_dir,
        &format!("{}_sweep.csv", sweep.base.output_prefix),
    )?;
    let mut out = std::io::BufWriter::new(fs::File::create(&aggregate_csv)?);
    writeln!(out, "value,oscillation_frequency,final_norm_drift,status")?;
    for (value, result) in sweep.values.iter().zip(&results) {
        match result {
            Ok(artifacts) => {
                let freq = artifacts
                    .summary
                    .oscillation_frequency
                    .map(fmt_num)
                    .unwrap_or_default();
                writeln!(
                    out,
                    "{},{},{},ok",
                    fmt_num(*value),
                    freq,
                    fmt_num(artifacts.summary.final_norm_drift),
                )?;
            }
            Err(err) => {
                writeln!(out, "{},,,{}", fmt_num(*value), csv_quote(&err.to_string()))?;
            }
        }
    }
    out.flush()?;

    if !quiet {
        for (value, result) in sweep.values.iter().zip(&results) {
            match result {
                Ok(a) => println!(
                    "sweep {} = {:<12}: frequency {}",
                    sweep.axis,
                    value,
                    a.summary
                        .oscillation_frequency
                        .map(|f| format!("{f:.6}"))
                        .unwrap_or_else(|| "none detected".into()),
                ),
                Err(e) => println!("sweep {} = {:<12}: FAILED ({e})", sweep.axis, value),
            }
        }
        println!("aggregate -> {}", aggregate_csv.display());
    }

    Ok(SweepArtifacts {
        results,
        aggregate_csv,
    })
}

/// One row of the algebra-check table.
#[derive(Clone, Debug)]
pub struct CheckRow {
    pub name: String,
    pub deviation: f64,
    pub pass: bool,
}

fn identity_row(name: String, actual: &Matrix4, expected: &Matrix4) -> CheckRow {
    let deviation = max_abs_diff(actual, expected);
    CheckRow {
        name,
        deviation,
        pass: deviation <= DEFAULT_TOL,
    }
}

/// Every identity the algebra check verifies.
pub fn algebra_check_rows() -> Vec<CheckRow> {
    let mut rows = Vec::new();
    let two_id = Matrix4::identity() * C64::new(2.0, 0.0);
    let zero = Matrix4::zeros();

    for i in Axis::ALL {
        for j in Axis::ALL {
            let expected = if i == j { two_id } else { zero };
            rows.push(identity_row(
                format!(
                    "{{alpha_{i}, alpha_{j}}} = {}",
                    if i == j { "2I" } else { "0" }
                ),
                &anticommutator(&alpha(i), &alpha(j)),
                &expected,
            ));
        }
    }
    for i in Axis::ALL {
        rows.push(identity_row(
            format!("{{alpha_{i}, beta}} = 0"),
            &anticommutator(&alpha(i), &beta()),
            &zero,
        ));
    }
    for i in Axis::ALL {
        rows.push(identity_row(
            format!("alpha_{i} hermitian"),
            &alpha(i).adjoint(),
            &alpha(i),
        ));
        rows.push(identity_row(
            format!("sigma_{i} hermitian"),
            &sigma_big(i).adjoint(),
            &sigma_big(i),
        ));
    }
    rows.push(identity_row(
        "beta hermitian".into(),
        &beta().adjoint(),
        &beta(),
    ));
    rows.push(identity_row(
        "beta1 hermitian".into(),
        &beta1().adjoint(),
        &beta1(),
    ));

    for i in Axis::ALL {
        rows.push(identity_row(
            format!("parity: beta alpha_{i} beta = -alpha_{i}"),
            &parity_conjugate(&alpha(i)),
            &(-alpha(i)),
        ));
        rows.push(identity_row(
            format!("parity: beta sigma_{i} beta = sigma_{i}"),
            &parity_conjugate(&sigma_big(i)),
            &sigma_big(i),
        ));
    }

    rows.push(identity_row(
        "[beta, beta1] = 0".into(),
        &commutator(&beta(), &beta1()),
        &zero,
    ));
    rows.push(identity_row(
        "[beta1, beta1] = 0".into(),
        &commutator(&beta1(), &beta1()),
        &zero,
    ));
    for i in Axis::ALL {
        let magnitude = max_abs_entry(&commutator(&alpha(i), &beta1()));
        rows.push(CheckRow {
            name: format!("beta1 not Dirac: [alpha_{i}, beta1] != 0"),
            deviation: magnitude,
            pass: magnitude > 0.5,
        });
    }

    // Block structure: alpha carries its Pauli matrix on the off-diagonal
    // blocks, sigma on the diagonal blocks.
    for i in Axis::ALL {
        let s = pauli(i);
        let mut alpha_expected = Matrix4::zeros();
        let mut sigma_expected = Matrix4::zeros();
        for r in 0..2 {
            for c in 0..2 {
                alpha_expected[(r, c + 2)] = s[(r, c)];
                alpha_expected[(r + 2, c)] = s[(r, c)];
                sigma_expected[(r, c)] = s[(r, c)];
                sigma_expected[(r + 2, c + 2)] = s[(r, c)];
            }
        }
        rows.push(identity_row(
            format!("alpha_{i} = offdiag blocks of sigma_{i}"),
            &alpha(i),
            &alpha_expected,
        ));
        rows.push(identity_row(
            format!("sigma_{i} = diag blocks of sigma_{i}"),
            &sigma_big(i),
            &sigma_expected,
        ));
    }

    rows
}

/// Print the pass/fail table of operator-algebra identities. Returns true
/// iff every row passes.
pub fn cmd_algebra_check() -> bool {
    let rows = algebra_check_rows();
    println!("{:<44} {:>12}  result", "identity", "max |dev|");
    for row in &rows {
        println!(
            "{:<44} {:>12.3e}  {}",
            row.name,
            row.deviation,
            if row.pass { "pass" } else { "FAIL" }
        );
    }
    let all_pass = rows.iter().all(|r| r.pass);
    let failed = rows.iter().filter(|r| !r.pass).count();
    if all_pass {
        println!("all {} identities pass", rows.len());
    } else {
        println!("{failed} of {} identities FAILED", rows.len());
    }
    all_pass
}

/// JSON output of the comparison experiments.
#[derive(Clone, Debug, Serialize)]
pub struct CompareSummary {
    pub config: RunConfig,
    /// Max population deviation, {1,3}-block of the transformed-literal run
    /// vs the two-component baseline with omega_a = 2 omega.
    pub baseline_vs_literal: f64,
    /// Max population deviation, transformed-literal vs exact
    /// interaction-picture run.
    pub literal_vs_exact: f64,
    /// Max population deviation, full run with the rest-energy phase removed
    /// vs the exact interaction-picture run.
    pub full_transformed_vs_exact: f64,
}

/// What `compare` wrote and where.
#[derive(Clone, Debug)]
pub struct CompareArtifacts {
    pub summary: CompareSummary,
    pub json_path: PathBuf,
}

fn max_population_deviation(a: &Trajectory, b: &Trajectory, pairs: &[(usize, usize)]) -> f64 {
    let mut worst = 0.0f64;
    for (sa, sb) in a.states.iter().zip(&b.states) {
        for &(ia, ib) in pairs {
            worst = worst.max((sa[ia].norm_sqr() - sb[ib].norm_sqr()).abs());
        }
    }
    worst
}

/// Cross-model comparison on a resonant configuration: (a) transformed
/// literal vs the two-component baseline on the {1,3} block, (b) literal vs
/// exact interaction picture, (c) full model plus rest-phase removal vs the
/// exact interaction picture. Writes `<prefix>_compare.json`.
///
/// Requires a four-component model, AlphaE coupling, p = 0, and a z-polarized
/// (or zero) field; anything else is an unsupported comparison.
pub fn cmd_compare(
    config: &RunConfig,
    output_dir: &Path,
    quiet: bool,
) -> Result<CompareArtifacts, CliError> {
    if !matches!(
        config.model_kind,
        ModelKind::Full | ModelKind::TransformedLiteral
    ) {
        return Err(CliError::Unsupported(
            "compare needs model_kind full or transformed_literal".into(),
        ));
    }
    if config.coupling != CouplingKind::AlphaE {
        return Err(CliError::Unsupported(
            "compare needs alpha_e coupling".into(),
        ));
    }
    if config.params.momentum != [0.0; 3] {
        return Err(CliError::Unsupported("compare needs zero momentum".into()));
    }
    let z_polarized =
        config.field.polarization_axis() == Some(Axis::Z) || config.field.amplitude() == [0.0; 3];
    if !z_polarized {
        return Err(CliError::Unsupported(
            "compare needs a z-polarized (or zero) field".into(),
        ));
    }

    let literal_config = RunConfig {
        model_kind: ModelKind::TransformedLiteral,
        ..config.clone()
    };
    let literal = evolve(&literal_config.to_problem()?)?;

    // (a) Baseline on the {1,3} block. The baseline's two-component dipole is
    // off-diagonal, so the same scalar drive enters along x there; its
    // transition frequency is twice the four-component omega (the {1,3}
    // splitting is 2 hbar omega).
    let amplitude_z = config.field.amplitude()[2];
    let baseline_field = match &config.field {
        FieldModel::Zero => FieldModel::Zero,
        FieldModel::Static { .. } => FieldModel::Static {
            amplitude: [amplitude_z, 0.0, 0.0],
        },
        FieldModel::Cosine { nu, phase, .. } => FieldModel::Cosine {
            amplitude: [amplitude_z, 0.0, 0.0],
            nu: *nu,
            phase: *phase,
        },
        FieldModel::GaussianPulse {
            nu,
            phase,
            center,
            width,
            ..
        } => FieldModel::GaussianPulse {
            amplitude: [amplitude_z, 0.0, 0.0],
            nu: *nu,
            phase: *phase,
            center: *center,
            width: *width,
        },
    };
    let InitialState::Four(psi0) = literal_config.resolve_initial_state()? else {
        unreachable!("four-component model");
    };
    let mut baseline_params = config.params.clone();
    baseline_params.omega_a = Some(2.0 * config.params.omega);
    let baseline_config = RunConfig {
        model_kind: ModelKind::Baseline2,
        params: baseline_params,
        field: baseline_field,
        initial_state: Some(vec![[psi0[0].re, psi0[0].im], [psi0[2].re, psi0[2].im]]),
        ..config.clone()
    };
    let baseline = evolve(&baseline_config.to_problem()?)?;
    let baseline_vs_literal = max_population_deviation(&literal, &baseline, &[(0, 0), (2, 1)]);

    // (b) Literal vs exact interaction picture from the same initial state.
    let exact_config = RunConfig {
        model_kind: ModelKind::TransformedExact,
        ..config.clone()
    };
    let exact = evolve(&exact_config.to_problem()?)?;
    let literal_vs_exact =
        max_population_deviation(&literal, &exact, &[(0, 0), (1, 1), (2, 2), (3, 3)]);

    // (c) Full model, rest-energy phase removed pointwise, vs the exact
    // interaction picture started from the transformed initial state.
    let full_config = RunConfig {
        model_kind: ModelKind::Full,
        ..config.clone()
    };
    let full = evolve(&full_config.to_problem()?)?;
    let full_removed = transform_trajectory(&full, &config.params, TransformDirection::RemoveRest)?;
    let psi0_removed = canonical_transform(
        &psi0,
        config.t0,
        &config.params,
        TransformDirection::RemoveRest,
    );
    let exact_c_config = RunConfig {
        model_kind: ModelKind::TransformedExact,
        initial_state: Some(psi0_removed.iter().map(|z| [z.re, z.im]).collect()),
        ..config.clone()
    };
    let exact_c = evolve(&exact_c_config.to_problem()?)?;
    let full_transformed_vs_exact =
        max_population_deviation(&full_removed, &exact_c, &[(0, 0), (1, 1), (2, 2), (3, 3)]);

    let summary = CompareSummary {
        config: config.resolved()?,
        baseline_vs_literal,
        literal_vs_exact,
        full_transformed_vs_exact,
    };
    let json_path = prepare_output_path(
        output_dir,
        &format!("{}_compare.json", config.output_prefix),
    )?;
    write_json(&json_path, &summary)?;

    if !quiet {
        println!("compare {}:", config.output_prefix);
        println!("  baseline vs literal (pops, {{1,3}} block): {baseline_vs_literal:.3e}");
        println!("  literal vs exact (pops):                  {literal_vs_exact:.3e}");
        println!("  full+transform vs exact (pops):           {full_transformed_vs_exact:.3e}");
        println!("  -> {}", json_path.display());
    }

    Ok(CompareArtifacts { summary, json_path })
}
