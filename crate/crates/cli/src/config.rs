//! Scenario configuration: a JSON schema with validation that reports the
//! path of the offending field.
//!
//! Times in configs are always scaled time λt, matching the emitted series.
//! Complex amplitudes accept either a plain number (real) or an `[re, im]`
//! pair, and always serialize as a pair.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use jcm_core::dynamics::{Frame, InteractionVariant, ModelParams};
use jcm_core::hilbert::{AtomState, CatSign};
use jcm_core::C64;

use crate::catalog;

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("config is not valid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{path}: {message}")]
    Invalid { path: String, message: String },
}

fn invalid(path: &str, message: impl Into<String>) -> ConfigError {
    ConfigError::Invalid { path: path.to_string(), message: message.into() }
}

/// Complex amplitude in configs: `3.0` or `[3.0, -1.0]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cplx(pub f64, pub f64);

impl Cplx {
    pub fn to_c64(self) -> C64 {
        C64::new(self.0, self.1)
    }
}

impl From<C64> for Cplx {
    fn from(z: C64) -> Self {
        Cplx(z.re, z.im)
    }
}

impl Serialize for Cplx {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        [self.0, self.1].serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Cplx {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Real(f64),
            Pair([f64; 2]),
        }
        Ok(match Raw::deserialize(deserializer)? {
            Raw::Real(re) => Cplx(re, 0.0),
            Raw::Pair([re, im]) => Cplx(re, im),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSection {
    #[serde(default)]
    pub omega0: f64,
    #[serde(default)]
    pub omega: f64,
    pub lambda: f64,
    #[serde(default = "default_variant")]
    pub variant: VariantSpec,
    #[serde(default)]
    pub kappa: f64,
}

fn default_variant() -> VariantSpec {
    VariantSpec::Jc
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VariantSpec {
    Jc,
    AntiJc,
}

impl VariantSpec {
    pub fn to_variant(self) -> InteractionVariant {
        match self {
            VariantSpec::Jc => InteractionVariant::Jc,
            VariantSpec::AntiJc => InteractionVariant::AntiJc,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum FieldSpec {
    Fock { n: usize },
    Coherent { alpha: Cplx },
    Cat { beta: Cplx, sign: SignSpec },
}

impl FieldSpec {
    /// Mean photon number used by the truncation rule.
    pub fn nbar(&self) -> f64 {
        match self {
            FieldSpec::Fock { n } => *n as f64,
            FieldSpec::Coherent { alpha } => alpha.to_c64().norm_sqr(),
            FieldSpec::Cat { beta, .. } => beta.to_c64().norm_sqr(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SignSpec {
    Plus,
    Minus,
}

impl SignSpec {
    pub fn to_sign(self) -> CatSign {
        match self {
            SignSpec::Plus => CatSign::Plus,
            SignSpec::Minus => CatSign::Minus,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AtomSpec {
    Named(AtomName),
    Superposition { superposition: BlochAngles },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AtomName {
    G,
    E,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlochAngles {
    pub theta: f64,
    #[serde(default)]
    pub phi: f64,
}

impl AtomSpec {
    pub fn to_state(&self) -> AtomState {
        match self {
            AtomSpec::Named(AtomName::G) => AtomState::ground(),
            AtomSpec::Named(AtomName::E) => AtomState::excited(),
            AtomSpec::Superposition { superposition } => {
                AtomState::superposition(superposition.theta, superposition.phi)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialSection {
    pub field: FieldSpec,
    pub atom: AtomSpec,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FrameSpec {
    Lab,
    Rotating,
}

impl FrameSpec {
    pub fn to_frame(self) -> Frame {
        match self {
            FrameSpec::Lab => Frame::Lab,
            FrameSpec::Rotating => Frame::Rotating,
        }
    }
}

fn default_frame() -> FrameSpec {
    FrameSpec::Rotating
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvolutionSection {
    #[serde(default = "default_frame")]
    pub frame: FrameSpec,
    /// Horizon in scaled time λt.
    pub t_max: f64,
    pub n_samples: usize,
    /// Optional override of `model.kappa`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kappa: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridRequest {
    /// Sample instants in scaled time λt.
    pub times: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub extent: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimesRequest {
    pub times: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OutputRequest {
    Series(String),
    Wigner { wigner: GridRequest },
    Husimi { husimi: GridRequest },
    PhotonDistribution { photon_distribution: TimesRequest },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PulseSpec {
    pub theta: f64,
    #[serde(default)]
    pub phi: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SequenceStepSpec {
    /// Cavity interaction time in scaled time λt.
    pub interaction_time: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pulse: Option<PulseSpec>,
    pub outcome: AtomName,
    #[serde(default = "default_step_atom")]
    pub atom: AtomSpec,
}

fn default_step_atom() -> AtomSpec {
    AtomSpec::Named(AtomName::E)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub model: ModelSection,
    pub initial: InitialSection,
    pub evolution: EvolutionSection,
    #[serde(default)]
    pub outputs: Vec<OutputRequest>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub measurement_sequence: Option<Vec<SequenceStepSpec>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truncation: Option<usize>,
    #[serde(default)]
    pub strict: bool,
}

impl ScenarioConfig {
    /// Effective decay rate: `evolution.kappa` overrides `model.kappa`.
    pub fn kappa(&self) -> f64 {
        self.evolution.kappa.unwrap_or(self.model.kappa)
    }

    pub fn model_params(&self) -> ModelParams {
        ModelParams {
            omega0: self.model.omega0,
            omega: self.model.omega,
            lambda: self.model.lambda,
            variant: self.model.variant.to_variant(),
            kappa: self.kappa(),
        }
    }

    /// Canonical serialization (used for hashing and round-trips).
    pub fn canonical_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }
}

/// Parse and validate a scenario config from JSON text.
pub fn parse_config(text: &str) -> Result<ScenarioConfig, ConfigError> {
    let config: ScenarioConfig = serde_json::from_str(text)?;
    validate(&config)?;
    Ok(config)
}

fn validate(config: &ScenarioConfig) -> Result<(), ConfigError> {
    if !(config.model.lambda > 0.0 && config.model.lambda.is_finite()) {
        return Err(invalid("model.lambda", "coupling must be positive and finite"));
    }
    if config.model.kappa < 0.0 {
        return Err(invalid("model.kappa", "decay rate must be non-negative"));
    }
    if let Some(kappa) = config.evolution.kappa {
        if kappa < 0.0 {
            return Err(invalid("evolution.kappa", "decay rate must be non-negative"));
        }
    }
    if !(config.evolution.t_max > 0.0 && config.evolution.t_max.is_finite()) {
        return Err(invalid("evolution.t_max", "horizon must be positive and finite"));
    }
    if config.evolution.n_samples < 2 {
        return Err(invalid("evolution.n_samples", "need at least 2 samples"));
    }
    match &config.initial.field {
        FieldSpec::Coherent { alpha } => {
            let a = alpha.to_c64();
            if !a.re.is_finite() || !a.im.is_finite() {
                return Err(invalid("initial.field.alpha", "amplitude must be finite"));
            }
        }
        FieldSpec::Cat { beta, sign } => {
            let b = beta.to_c64();
            if !b.re.is_finite() || !b.im.is_finite() {
                return Err(invalid("initial.field.beta", "amplitude must be finite"));
            }
            if b.norm() < 1e-12 && *sign == SignSpec::Minus {
                return Err(invalid("initial.field", "odd cat with beta = 0 is the zero vector"));
            }
        }
        FieldSpec::Fock { .. } => {}
    }
    if let AtomSpec::Superposition { superposition } = &config.initial.atom {
        if !superposition.theta.is_finite() || !superposition.phi.is_finite() {
            return Err(invalid("initial.atom.superposition", "angles must be finite"));
        }
    }
    if let Some(dim) = config.truncation {
        if dim < 2 {
            return Err(invalid("truncation", "dimension must be at least 2"));
        }
        if let FieldSpec::Fock { n } = &config.initial.field {
            if *n >= dim {
                return Err(invalid(
                    "truncation",
                    format!("dimension {dim} cannot hold fock state n = {n}"),
                ));
            }
        }
    }
    for (i, request) in config.outputs.iter().enumerate() {
        let path = format!("outputs[{i}]");
        match request {
            OutputRequest::Series(name) => {
                let known = catalog::series_names().contains(&name.as_str());
                if !known {
                    return Err(invalid(
                        &path,
                        format!(
                            "unknown observable {name:?}; known series: {}",
                            catalog::series_names().join(", ")
                        ),
                    ));
                }
                if name == "mandel_q" && config.initial.field.nbar() == 0.0 {
                    return Err(invalid(
                        &path,
                        "mandel_q is undefined at t = 0 for a vacuum initial field",
                    ));
                }
            }
            OutputRequest::Wigner { wigner: grid } | OutputRequest::Husimi { husimi: grid } => {
                validate_grid(grid, &path)?;
            }
            OutputRequest::PhotonDistribution { photon_distribution } => {
                validate_times(&photon_distribution.times, &path)?;
            }
        }
    }
    if let Some(steps) = &config.measurement_sequence {
        if config.model.variant == VariantSpec::AntiJc {
            return Err(invalid(
                "measurement_sequence",
                "sequences use the dressed-block propagator and require the jc variant",
            ));
        }
        for (i, step) in steps.iter().enumerate() {
            if !(step.interaction_time >= 0.0 && step.interaction_time.is_finite()) {
                return Err(invalid(
                    &format!("measurement_sequence[{i}].interaction_time"),
                    "must be non-negative and finite",
                ));
            }
        }
    }
    Ok(())
}

fn validate_grid(grid: &GridRequest, path: &str) -> Result<(), ConfigError> {
    validate_times(&grid.times, path)?;
    if let Some(extent) = grid.extent {
        if !(extent > 0.0 && extent.is_finite()) {
            return Err(invalid(&format!("{path}.extent"), "must be positive and finite"));
        }
    }
    if let Some(points) = grid.points {
        if points < 2 {
            return Err(invalid(&format!("{path}.points"), "need at least 2 points per axis"));
        }
    }
    Ok(())
}

fn validate_times(times: &[f64], path: &str) -> Result<(), ConfigError> {
    if times.is_empty() {
        return Err(invalid(&format!("{path}.times"), "need at least one sample time"));
    }
    if times.iter().any(|t| !t.is_finite() || *t < 0.0) {
        return Err(invalid(&format!("{path}.times"), "times must be non-negative and finite"));
    }
    Ok(())
}
