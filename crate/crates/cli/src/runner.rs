//! Scenario execution: state preparation, optional conditioned measurement
//! sequence, time evolution (exact unitary or Lindblad), observable series,
//! phase-space grids, and deterministic artifact emission.

use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;
use sha2::{Digest, Sha256};

use jcm_core::dynamics::{
    build_hamiltonian, evolve_analytic, evolve_lindblad_scan, DensityMatrix, DynamicsError, Frame,
    InteractionVariant, LindbladOptions, ModelParams, Propagator,
};
use jcm_core::hilbert::{
    coherent_tail_mass, default_truncation, AtomLevel, FieldState, HilbertError, JointState,
};
use jcm_core::measurement::{atom_rotation, project_atom, MeasurementError};
use jcm_core::observables::{
    atomic_inversion, atomic_inversion_rho, entanglement_entropy, mandel_q, mean_photon_number,
    parity_expectation, photon_distribution, quadrature_squeezing, reduced_atom_rho, reduced_field,
    reduced_field_rho, von_neumann_entropy, ObservableError, TimeSeries,
};
use jcm_core::phase_space::{husimi_q, wigner, GridSpec, PhaseSpaceError, PhaseSpaceGrid};
use rayon::prelude::*;

use crate::config::{
    AtomName, ConfigError, FieldSpec, GridRequest, OutputRequest, ScenarioConfig, VariantSpec,
};
use crate::emit::{
    emit_distribution_csv, emit_grid_csv, emit_series_csv, fmt_sig12, EmitError,
};

pub const STRICT_TAIL_LIMIT: f64 = 1e-8;

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("numerical guard: {0}")]
    Guard(String),
    #[error(transparent)]
    Emit(#[from] EmitError),
    #[error("cannot create output directory {path}: {source}")]
    OutDir {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl RunError {
    /// Process exit code: 2 for config errors, 3 for numerical guards,
    /// 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Config(_) => 2,
            RunError::Guard(_) => 3,
            RunError::Emit(_) | RunError::OutDir { .. } => 1,
        }
    }
}

impl From<DynamicsError> for RunError {
    fn from(e: DynamicsError) -> Self {
        RunError::Guard(e.to_string())
    }
}

impl From<HilbertError> for RunError {
    fn from(e: HilbertError) -> Self {
        RunError::Guard(e.to_string())
    }
}

impl From<MeasurementError> for RunError {
    fn from(e: MeasurementError) -> Self {
        RunError::Guard(e.to_string())
    }
}

impl From<ObservableError> for RunError {
    fn from(e: ObservableError) -> Self {
        RunError::Guard(e.to_string())
    }
}

impl From<PhaseSpaceError> for RunError {
    fn from(e: PhaseSpaceError) -> Self {
        RunError::Guard(e.to_string())
    }
}

/// Command-line overrides applied on top of the parsed config.
#[derive(Debug, Default, Clone)]
pub struct Overrides {
    pub strict: bool,
    pub dim: Option<usize>,
}

#[derive(Debug, Serialize)]
pub struct SequenceStepReport {
    pub outcome: String,
    pub probability: f64,
}

#[derive(Debug, Serialize)]
pub struct SequenceReport {
    pub joint_probability: f64,
    pub steps: Vec<SequenceStepReport>,
}

/// Record of a completed run; written as `manifest.json` after every other
/// artifact exists.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub config_hash: String,
    pub dim: usize,
    pub tail_mass: f64,
    pub wall_time_s: f64,
    pub outputs: Vec<String>,
    pub warnings: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sequence: Option<SequenceReport>,
}

enum SampleView<'a> {
    Pure(&'a JointState),
    Mixed(&'a DensityMatrix),
}

fn series_values(names: &[String], view: &SampleView<'_>) -> Result<Vec<f64>, RunError> {
    // observables other than the inversion and entropy act on the reduced
    // field; compute it once per sample
    let needs_field = names.iter().any(|n| n != "inversion" && n != "entropy");
    let field = if needs_field {
        Some(match view {
            SampleView::Pure(joint) => reduced_field(joint),
            SampleView::Mixed(rho) => reduced_field_rho(rho),
        })
    } else {
        None
    };
    names
        .iter()
        .map(|name| -> Result<f64, RunError> {
            let field = field.as_ref();
            Ok(match name.as_str() {
                "inversion" => match view {
                    SampleView::Pure(joint) => atomic_inversion(joint),
                    SampleView::Mixed(rho) => atomic_inversion_rho(rho),
                },
                "entropy" => match view {
                    SampleView::Pure(joint) => entanglement_entropy(joint),
                    SampleView::Mixed(rho) => von_neumann_entropy(&reduced_atom_rho(rho)),
                },
                "parity" => parity_expectation(field.unwrap()),
                "s1" => quadrature_squeezing(field.unwrap()).0,
                "s2" => quadrature_squeezing(field.unwrap()).1,
                "mandel_q" => mandel_q(field.unwrap())?,
                "mean_n" => mean_photon_number(field.unwrap()),
                other => {
                    return Err(RunError::Guard(format!("unschedulable observable {other:?}")))
                }
            })
        })
        .collect()
}

struct GridJob {
    label: &'static str,
    times: Vec<f64>,
    spec: GridSpec,
}

fn grid_spec_for(request: &GridRequest, nbar: f64) -> Result<GridSpec, RunError> {
    let default = GridSpec::default_for(nbar);
    Ok(GridSpec::new(
        request.extent.unwrap_or(default.extent),
        request.points.unwrap_or(default.points),
    )?)
}

fn reduced_of(view: &SampleView<'_>) -> DensityMatrix {
    match view {
        SampleView::Pure(joint) => reduced_field(joint),
        SampleView::Mixed(rho) => reduced_field_rho(rho),
    }
}

fn compute_grid(label: &str, view: &SampleView<'_>, spec: &GridSpec) -> PhaseSpaceGrid {
    let rho = reduced_of(view);
    match label {
        "wigner" => wigner(&rho, spec),
        _ => husimi_q(&rho, spec),
    }
}

/// Execute a validated scenario and write its artifacts into `out_dir`.
pub fn run_scenario(
    config: &ScenarioConfig,
    out_dir: &Path,
    overrides: &Overrides,
) -> Result<RunManifest, RunError> {
    let started = Instant::now();
    std::fs::create_dir_all(out_dir)
        .map_err(|source| RunError::OutDir { path: out_dir.display().to_string(), source })?;

    let params = config.model_params();
    let frame = config.evolution.frame.to_frame();
    let lambda = params.lambda;
    let strict = config.strict || overrides.strict;
    let nbar = config.initial.field.nbar();

    // truncation: CLI override, then config, then the n̄ + 10√n̄ + 10 rule
    let dim = overrides
        .dim
        .or(config.truncation)
        .unwrap_or_else(|| default_truncation(nbar));
    if dim < 2 {
        return Err(ConfigError::Invalid {
            path: "truncation".into(),
            message: "dimension must be at least 2".into(),
        }
        .into());
    }
    if let FieldSpec::Fock { n } = &config.initial.field {
        if *n >= dim {
            return Err(ConfigError::Invalid {
                path: "truncation".into(),
                message: format!("dimension {dim} cannot hold fock state n = {n}"),
            }
            .into());
        }
    }

    let mut warnings = Vec::new();
    let tail_mass = match &config.initial.field {
        FieldSpec::Fock { .. } => 0.0,
        FieldSpec::Coherent { alpha } => coherent_tail_mass(alpha.to_c64(), dim),
        FieldSpec::Cat { beta, .. } => coherent_tail_mass(beta.to_c64(), dim),
    };
    if tail_mass > STRICT_TAIL_LIMIT {
        let message = format!(
            "truncated tail mass {:.3e} exceeds {:.0e} at dim {dim}",
            tail_mass, STRICT_TAIL_LIMIT
        );
        if strict {
            return Err(RunError::Guard(message));
        }
        warnings.push(message);
    }

    let mut field0 = match &config.initial.field {
        FieldSpec::Fock { n } => FieldState::fock(*n, dim)?,
        FieldSpec::Coherent { alpha } => FieldState::coherent(alpha.to_c64(), dim)?,
        FieldSpec::Cat { beta, sign } => FieldState::cat(beta.to_c64(), sign.to_sign(), dim)?,
    };

    // conditioned preparation sequence, threading the field through fresh
    // atoms before the main evolution
    let mut sequence_report = None;
    if let Some(steps) = &config.measurement_sequence {
        let mut reports = Vec::with_capacity(steps.len());
        let mut joint_probability = 1.0;
        for (index, step) in steps.iter().enumerate() {
            let joint = JointState::tensor(&step.atom.to_state(), &field0);
            let evolved = evolve_analytic(&joint, &params, step.interaction_time / lambda)?;
            let pulsed = match &step.pulse {
                Some(p) => atom_rotation(&evolved, p.theta, p.phi),
                None => evolved,
            };
            let outcome = match step.outcome {
                AtomName::G => AtomLevel::G,
                AtomName::E => AtomLevel::E,
            };
            let record = project_atom(&pulsed, outcome).map_err(|e| {
                RunError::Guard(format!("measurement_sequence[{index}]: {e}"))
            })?;
            joint_probability *= record.probability;
            reports.push(SequenceStepReport {
                outcome: outcome.to_string(),
                probability: record.probability,
            });
            field0 = record.post_field;
        }
        sequence_report = Some(SequenceReport { joint_probability, steps: reports });
    }

    let joint0 = JointState::tensor(&config.initial.atom.to_state(), &field0);

    // requested outputs
    let mut series_names: Vec<String> = Vec::new();
    let mut grid_jobs: Vec<GridJob> = Vec::new();
    let mut distribution_times: Vec<f64> = Vec::new();
    for request in &config.outputs {
        match request {
            OutputRequest::Series(name) => {
                if !series_names.iter().any(|n| n == name) {
                    series_names.push(name.clone());
                }
            }
            OutputRequest::Wigner { wigner } => grid_jobs.push(GridJob {
                label: "wigner",
                times: wigner.times.clone(),
                spec: grid_spec_for(wigner, nbar)?,
            }),
            OutputRequest::Husimi { husimi } => grid_jobs.push(GridJob {
                label: "husimi",
                times: husimi.times.clone(),
                spec: grid_spec_for(husimi, nbar)?,
            }),
            OutputRequest::PhotonDistribution { photon_distribution } => {
                distribution_times = photon_distribution.times.clone();
            }
        }
    }

    // scaled sample grid
    let n_samples = config.evolution.n_samples;
    let t_max = config.evolution.t_max;
    let sample_times: Vec<f64> =
        (0..n_samples).map(|k| k as f64 * t_max / (n_samples - 1) as f64).collect();

    let mut outputs: Vec<String> = Vec::new();
    let mut series_data: Vec<Vec<f64>> = vec![Vec::new(); series_names.len()];
    let mut grids: Vec<(String, PhaseSpaceGrid)> = Vec::new();
    let mut distributions: Vec<(String, Vec<f64>)> = Vec::new();

    if params.kappa > 0.0 {
        // merge sample and special times into one ascending Lindblad grid
        let mut merged: Vec<f64> = sample_times.clone();
        for job in &grid_jobs {
            merged.extend_from_slice(&job.times);
        }
        merged.extend_from_slice(&distribution_times);
        merged.sort_by(f64::total_cmp);
        merged.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
        if merged.first().copied() != Some(0.0) {
            merged.insert(0, 0.0);
        }
        let real_grid: Vec<f64> = merged.iter().map(|t| t / lambda).collect();
        let rho0 = DensityMatrix::from_pure_joint(&joint0);
        let opts = LindbladOptions::default();

        let mut result: Result<(), RunError> = Ok(());
        let is_sample: Vec<bool> =
            merged.iter().map(|t| sample_times.iter().any(|s| (s - t).abs() < 1e-12)).collect();
        evolve_lindblad_scan(&rho0, &params, &real_grid, frame, &opts, |index, _t, rho| {
            let scaled = merged[index];
            let view = SampleView::Mixed(rho);
            if is_sample[index] {
                match series_values(&series_names, &view) {
                    Ok(values) => {
                        for (slot, value) in series_data.iter_mut().zip(values) {
                            slot.push(value);
                        }
                    }
                    Err(e) => {
                        result = Err(e);
                        return Err(DynamicsError::InvalidParams("aborted".into()));
                    }
                }
            }
            for job in &grid_jobs {
                for (k, jt) in job.times.iter().enumerate() {
                    if (jt - scaled).abs() < 1e-12 {
                        grids.push((
                            format!("{}_t{k}", job.label),
                            compute_grid(job.label, &view, &job.spec),
                        ));
                    }
                }
            }
            for (k, dt) in distribution_times.iter().enumerate() {
                if (dt - scaled).abs() < 1e-12 {
                    distributions.push((
                        format!("photon_distribution_t{k}"),
                        photon_distribution(&reduced_of(&view)),
                    ));
                }
            }
            Ok(())
        })
        .map_err(|e| match result {
            Err(run_error) => run_error,
            Ok(()) => e.into(),
        })?;
    } else {
        // closed system: evaluate each sample independently
        let evolve_at: Box<dyn Fn(f64) -> Result<JointState, DynamicsError> + Sync> =
            if params.variant == InteractionVariant::Jc && frame == Frame::Rotating {
                let params = params.clone();
                Box::new(move |t_scaled| evolve_analytic(&joint0, &params, t_scaled / lambda))
            } else {
                let h = build_hamiltonian(&params, dim, frame);
                let propagator = Propagator::new(&h)?;
                let joint0 = joint0.clone();
                Box::new(move |t_scaled| propagator.evolve_joint(&joint0, t_scaled / lambda))
            };

        let per_sample: Vec<Result<Vec<f64>, RunError>> = sample_times
            .par_iter()
            .map(|&t| {
                let state = evolve_at(t)?;
                series_values(&series_names, &SampleView::Pure(&state))
            })
            .collect();
        for values in per_sample {
            let values = values?;
            for (slot, value) in series_data.iter_mut().zip(values) {
                slot.push(value);
            }
        }
        for job in &grid_jobs {
            for (k, jt) in job.times.iter().enumerate() {
                let state = evolve_at(*jt)?;
                grids.push((
                    format!("{}_t{k}", job.label),
                    compute_grid(job.label, &SampleView::Pure(&state), &job.spec),
                ));
            }
        }
        for (k, dt) in distribution_times.iter().enumerate() {
            let state = evolve_at(*dt)?;
            distributions.push((
                format!("photon_distribution_t{k}"),
                photon_distribution(&reduced_of(&SampleView::Pure(&state))),
            ));
        }
    }

    // emit artifacts
    for (name, values) in series_names.iter().zip(series_data) {
        let series = TimeSeries::new(name.clone(), sample_times.clone(), values)?;
        let file = format!("{name}.csv");
        emit_series_csv(&series, &out_dir.join(&file))?;
        outputs.push(file);
    }
    for (label, grid) in &grids {
        let file = format!("{label}.csv");
        emit_grid_csv(grid, &out_dir.join(&file))?;
        outputs.push(file);
    }
    for (label, dist) in &distributions {
        let file = format!("{label}.csv");
        emit_distribution_csv(dist, &out_dir.join(&file))?;
        outputs.push(file);
    }

    let manifest = RunManifest {
        config_hash: config_hash(config),
        dim,
        tail_mass,
        wall_time_s: started.elapsed().as_secs_f64(),
        outputs,
        warnings,
        sequence: sequence_report,
    };
    let manifest_json =
        serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    std::fs::write(out_dir.join("manifest.json"), format!("{manifest_json}\n")).map_err(
        |source| RunError::Emit(EmitError::Io {
            path: out_dir.join("manifest.json").display().to_string(),
            source,
        }),
    )?;
    Ok(manifest)
}

/// SHA-256 of the canonical config serialization.
pub fn config_hash(config: &ScenarioConfig) -> String {
    let mut hasher = Sha256::new();
    hasher.update(config.canonical_json().as_bytes());
    let digest = hasher.finalize();
    digest.iter().fold(String::with_capacity(64), |mut acc, byte| {
        use std::fmt::Write;
        let _ = write!(acc, "{byte:02x}");
        acc
    })
}

/// Load, validate, and run a scenario file.
pub fn run_file(
    config_path: &Path,
    out_dir: &Path,
    overrides: &Overrides,
) -> Result<RunManifest, RunError> {
    let text = std::fs::read_to_string(config_path).map_err(|e| {
        RunError::Config(ConfigError::Invalid {
            path: config_path.display().to_string(),
            message: format!("cannot read config: {e}"),
        })
    })?;
    let config = crate::config::parse_config(&text)?;
    run_scenario(&config, out_dir, overrides)
}

/// Human-readable one-line summary for the terminal.
pub fn summarize(manifest: &RunManifest, out_dir: &Path) -> String {
    format!(
        "wrote {} file(s) to {} (dim = {}, tail mass = {}, wall = {:.2}s)",
        manifest.outputs.len() + 1,
        out_dir.display(),
        manifest.dim,
        fmt_sig12(manifest.tail_mass),
        manifest.wall_time_s
    )
}
