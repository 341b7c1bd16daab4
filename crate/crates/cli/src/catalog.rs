//! Registry of the observables the runner can schedule.

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ObservableKind {
    /// One value per sample time, emitted as `lambda_t,value` CSV.
    Series,
    /// Photon-number distribution at requested times.
    Distribution,
    /// Phase-space surface at requested times, long-form `re,im,value` CSV.
    Grid,
}

#[derive(Debug, Clone, Copy)]
pub struct ObservableInfo {
    pub name: &'static str,
    pub module: &'static str,
    pub kind: ObservableKind,
    pub description: &'static str,
}

pub const CATALOG: &[ObservableInfo] = &[
    ObservableInfo {
        name: "inversion",
        module: "observables",
        kind: ObservableKind::Series,
        description: "atomic inversion ⟨σ₃⟩; +1 excited, −1 ground",
    },
    ObservableInfo {
        name: "parity",
        module: "observables",
        kind: ObservableKind::Series,
        description: "photon-number parity ⟨(−1)^n⟩ of the reduced field",
    },
    ObservableInfo {
        name: "s1",
        module: "observables",
        kind: ObservableKind::Series,
        description: "squeezing parameter of X₁ = (a+a†)/2; negative means squeezed",
    },
    ObservableInfo {
        name: "s2",
        module: "observables",
        kind: ObservableKind::Series,
        description: "squeezing parameter of X₂ = i(a−a†)/2",
    },
    ObservableInfo {
        name: "mandel_q",
        module: "observables",
        kind: ObservableKind::Series,
        description: "Mandel Q of the reduced field; negative is sub-Poissonian",
    },
    ObservableInfo {
        name: "entropy",
        module: "observables",
        kind: ObservableKind::Series,
        description: "von Neumann entropy of the reduced atom (nats); equals the \
                      entanglement entropy while the joint state stays pure",
    },
    ObservableInfo {
        name: "mean_n",
        module: "observables",
        kind: ObservableKind::Series,
        description: "mean photon number of the reduced field",
    },
    ObservableInfo {
        name: "photon_distribution",
        module: "observables",
        kind: ObservableKind::Distribution,
        description: "photon-number distribution P(n) at requested times",
    },
    ObservableInfo {
        name: "wigner",
        module: "phase_space",
        kind: ObservableKind::Grid,
        description: "Wigner function of the reduced field at requested times",
    },
    ObservableInfo {
        name: "husimi",
        module: "phase_space",
        kind: ObservableKind::Grid,
        description: "Husimi Q function of the reduced field at requested times",
    },
];

pub fn series_names() -> Vec<&'static str> {
    CATALOG
        .iter()
        .filter(|o| o.kind == ObservableKind::Series)
        .map(|o| o.name)
        .collect()
}

pub fn lookup(name: &str) -> Option<&'static ObservableInfo> {
    CATALOG.iter().find(|o| o.name == name)
}
