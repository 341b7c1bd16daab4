//! Simulation of a single two-level atom coupled to one quantized cavity mode
//! (the Jaynes-Cummings model in the rotating-wave approximation), on a
//! truncated Fock space.
//!
//! The crate is organized around five layers:
//!
//! - [`hilbert`]: basis conventions, state factories (Fock, coherent, cat),
//!   ladder/number/parity operators, and atom ⊗ field tensor assembly.
//! - [`dynamics`]: the (anti-)Jaynes-Cummings Hamiltonian, the exact
//!   dressed-state propagator, a generic eigendecomposition propagator used as
//!   an independent cross-check, and Runge-Kutta integration of the Lindblad
//!   equation with cavity damping.
//! - [`observables`]: atomic inversion, quadrature squeezing, Mandel Q,
//!   photon-number parity, photon distributions, partial traces, and
//!   entanglement entropy.
//! - [`phase_space`]: Wigner and Husimi distributions on a complex-plane grid,
//!   Wigner negativity, lobe tracking, and cat-state fidelities.
//! - [`measurement`]: Ramsey pulses on the atom, projective atom detection
//!   with field-state reduction, and conditioned multi-atom sequences.
//!
//! Conventions used throughout: ħ = 1, the joint basis is ordered
//! |g,0⟩ … |g,dim−1⟩, |e,0⟩ … |e,dim−1⟩ (atom index slowest), and σ₃ is
//! diag(−1, +1) in (g, e) order so that ⟨σ₃⟩ = +1 means the atom is excited.

pub mod dynamics;
pub mod hilbert;
pub mod measurement;
pub mod observables;
pub mod phase_space;

pub use num_complex::Complex64 as C64;

pub use dynamics::{
    evolve_generic, evolve_lindblad, evolve_lindblad_scan, DensityMatrix, DynamicsError, Frame,
    InteractionVariant, LindbladOptions, ModelParams, Propagator,
};
pub use hilbert::{AtomLevel, AtomState, CatSign, FieldState, HilbertError, JointState, Operator};
pub use measurement::{MeasurementError, MeasurementRecord, SequenceStep};
pub use observables::{ObservableError, TimeSeries};
pub use phase_space::{GridSpec, LobeReport, PhaseSpaceError, PhaseSpaceGrid};
