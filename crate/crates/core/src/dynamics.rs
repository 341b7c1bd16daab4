//! Hamiltonian construction and time evolution.
//!
//! Pure states evolve exactly through the dressed-state structure of the
//! Jaynes-Cummings Hamiltonian: in the rotating frame the dynamics decomposes
//! into 2×2 blocks spanning {|e,n⟩, |g,n+1⟩} with generalized Rabi frequency
//! Ωₙ = √(Δ² + 4λ²(n+1)), plus the uncoupled |g,0⟩ and (truncation boundary)
//! |e,dim−1⟩ states. A generic eigendecomposition propagator provides an
//! independent cross-check and handles the lab frame and the anti-JC variant.
//!
//! Density matrices evolve under cavity damping via the Lindblad equation
//! dρ/dt = −i[H,ρ] + κ(aρa† − ½{a†a,ρ}), integrated with fixed-step
//! fourth-order Runge-Kutta and a trace-drift guard. ħ = 1 throughout.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;
use thiserror::Error;

use crate::hilbert::{tensor_product, FieldState, HilbertError, JointState, Operator};

#[derive(Debug, Error)]
pub enum DynamicsError {
    #[error("the analytic propagator supports only the JC variant; use a generic propagator for anti-JC")]
    UnsupportedVariant,
    #[error("operator is not Hermitian (residual {residual:.3e})")]
    NonHermitian { residual: f64 },
    #[error("trace drifted to {drift:.3e} at t = {t} (limit {limit:.1e}); reduce the step size")]
    TraceDrift { t: f64, drift: f64, limit: f64 },
    #[error("time grid must be ascending and start at 0")]
    InvalidTimeGrid,
    #[error("invalid model parameters: {0}")]
    InvalidParams(String),
    #[error("dimension mismatch: {left} vs {right}")]
    DimMismatch { left: usize, right: usize },
    #[error(transparent)]
    Hilbert(#[from] HilbertError),
}

/// Which spin-boson coupling the Hamiltonian carries.
///
/// `Jc` is σ₊a + σ₋a†; `AntiJc` is σ₋a + σ₊a†, the interaction engineered in
/// trapped ions by tuning the drive laser to the lower motional sideband.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InteractionVariant {
    Jc,
    AntiJc,
}

/// Reference frame for the Hamiltonian.
///
/// `Rotating` is the interaction picture with both subsystems rotating at the
/// cavity frequency, leaving H = ½Δσ₃ + coupling. This is the default frame
/// everywhere; `Lab` keeps the bare ½ω₀σ₃ + ω a†a terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Frame {
    Lab,
    Rotating,
}

/// Physical parameters of the model. Times are in units where ħ = 1; the
/// detuning Δ = ω₀ − ω is derived, never stored.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelParams {
    /// Atomic transition angular frequency ω₀.
    pub omega0: f64,
    /// Cavity mode angular frequency ω.
    pub omega: f64,
    /// Atom-field coupling strength λ (> 0).
    pub lambda: f64,
    pub variant: InteractionVariant,
    /// Cavity energy decay rate κ (≥ 0).
    pub kappa: f64,
}

impl ModelParams {
    /// Resonant lossless JC parameters (ω₀ = ω, κ = 0).
    pub fn resonant(lambda: f64) -> Self {
        Self { omega0: 0.0, omega: 0.0, lambda, variant: InteractionVariant::Jc, kappa: 0.0 }
    }

    pub fn with_kappa(mut self, kappa: f64) -> Self {
        self.kappa = kappa;
        self
    }

    pub fn with_variant(mut self, variant: InteractionVariant) -> Self {
        self.variant = variant;
        self
    }

    pub fn with_detuning(mut self, delta: f64) -> Self {
        self.omega0 = self.omega + delta;
        self
    }

    pub fn detuning(&self) -> f64 {
        self.omega0 - self.omega
    }

    pub fn validate(&self) -> Result<(), DynamicsError> {
        if !(self.lambda >= 0.0) {
            return Err(DynamicsError::InvalidParams(format!(
                "coupling lambda must be non-negative, got {}",
                self.lambda
            )));
        }
        if self.kappa < 0.0 {
            return Err(DynamicsError::InvalidParams(format!(
                "decay rate kappa must be non-negative, got {}",
                self.kappa
            )));
        }
        Ok(())
    }
}

/// Hermitian positive-semidefinite matrix with unit trace, over the field or
/// the joint basis.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    dim: usize,
    matrix: DMatrix<C64>,
}

impl DensityMatrix {
    pub const HERMITICITY_TOL: f64 = 1e-10;
    pub const TRACE_TOL: f64 = 1e-8;

    pub fn from_pure_field(state: &FieldState) -> Self {
        let v = state.amplitudes();
        Self { dim: state.dim(), matrix: v * v.adjoint() }
    }

    pub fn from_pure_joint(state: &JointState) -> Self {
        let v = state.amplitudes();
        Self { dim: v.len(), matrix: v * v.adjoint() }
    }

    /// Classical mixture Σ pᵢ |ψᵢ⟩⟨ψᵢ| of field states.
    pub fn mixture(parts: &[(f64, FieldState)]) -> Result<Self, DynamicsError> {
        let dim = parts.first().map(|(_, s)| s.dim()).unwrap_or(0);
        let mut m = DMatrix::zeros(dim, dim);
        for (p, s) in parts {
            if s.dim() != dim {
                return Err(DynamicsError::DimMismatch { left: s.dim(), right: dim });
            }
            let v = s.amplitudes();
            m += (v * v.adjoint()) * C64::new(*p, 0.0);
        }
        Self::from_matrix(m)
    }

    /// Validates Hermiticity and unit trace (not positivity, which is an
    /// O(dim³) eigenvalue check; see [`DensityMatrix::min_eigenvalue`]).
    pub fn from_matrix(matrix: DMatrix<C64>) -> Result<Self, DynamicsError> {
        if matrix.nrows() != matrix.ncols() {
            return Err(DynamicsError::DimMismatch { left: matrix.nrows(), right: matrix.ncols() });
        }
        let herm = (&matrix - matrix.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
        if herm > Self::HERMITICITY_TOL {
            return Err(DynamicsError::NonHermitian { residual: herm });
        }
        let trace = matrix.trace();
        if (trace.re - 1.0).abs() > Self::TRACE_TOL || trace.im.abs() > Self::TRACE_TOL {
            return Err(DynamicsError::InvalidParams(format!("trace {} must be 1", trace)));
        }
        Ok(Self { dim: matrix.nrows(), matrix })
    }

    pub(crate) fn from_raw(matrix: DMatrix<C64>) -> Self {
        Self { dim: matrix.nrows(), matrix }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn trace(&self) -> C64 {
        self.matrix.trace()
    }

    /// Re⟨A⟩ = Re tr(ρA).
    pub fn expectation(&self, op: &Operator) -> f64 {
        (&self.matrix * op.matrix()).trace().re
    }

    /// Smallest eigenvalue (Hermitian eigensolve; use for positivity checks).
    pub fn min_eigenvalue(&self) -> f64 {
        let eig = self.matrix.clone().symmetric_eigen();
        eig.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Real eigenvalue spectrum.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let eig = self.matrix.clone().symmetric_eigen();
        eig.eigenvalues.iter().copied().collect()
    }
}

/// Build the model Hamiltonian on the joint space (dimension 2·dim_field).
///
/// Rotating frame: H = ½Δ σ₃⊗I + λ(σ₊⊗a + σ₋⊗a†).
/// Lab frame:      H = ½ω₀ σ₃⊗I + ω I⊗a†a + λ(σ₊⊗a + σ₋⊗a†).
/// The anti-JC variant swaps the interaction to λ(σ₋⊗a + σ₊⊗a†).
pub fn build_hamiltonian(params: &ModelParams, dim_field: usize, frame: Frame) -> Operator {
    let a = Operator::annihilation(dim_field);
    let adag = Operator::creation(dim_field);
    let lam = C64::new(params.lambda, 0.0);

    let interaction = match params.variant {
        InteractionVariant::Jc => {
            &(&tensor_product(&Operator::sigma_plus(), &a) * lam)
                + &(&tensor_product(&Operator::sigma_minus(), &adag) * lam)
        }
        InteractionVariant::AntiJc => {
            &(&tensor_product(&Operator::sigma_minus(), &a) * lam)
                + &(&tensor_product(&Operator::sigma_plus(), &adag) * lam)
        }
    };

    match frame {
        Frame::Rotating => {
            let atom = tensor_product(&Operator::sigma3(), &Operator::identity(dim_field));
            &(&atom * C64::new(params.detuning() / 2.0, 0.0)) + &interaction
        }
        Frame::Lab => {
            let atom = tensor_product(&Operator::sigma3(), &Operator::identity(dim_field));
            let field = tensor_product(&Operator::identity(2), &Operator::number(dim_field));
            let bare = &(&atom * C64::new(params.omega0 / 2.0, 0.0))
                + &(&field * C64::new(params.omega, 0.0));
            &bare + &interaction
        }
    }
}

/// Exact rotating-frame propagation of a pure joint state by time `t`,
/// using the closed-form 2×2 dressed-block unitaries.
///
/// Each block {|e,n⟩, |g,n+1⟩} rotates at Ωₙ = √(Δ² + 4λ²(n+1)); |g,0⟩
/// acquires the phase e^{+iΔt/2} and the truncation-boundary state
/// |e,dim−1⟩ the phase e^{−iΔt/2}. Only the JC variant is block-diagonal in
/// this structure; anti-JC input is rejected.
pub fn evolve_analytic(
    state: &JointState,
    params: &ModelParams,
    t: f64,
) -> Result<JointState, DynamicsError> {
    if params.variant != InteractionVariant::Jc {
        return Err(DynamicsError::UnsupportedVariant);
    }
    params.validate()?;
    let dim = state.dim_field();
    let delta = params.detuning();
    let lambda = params.lambda;
    let psi = state.amplitudes();
    let mut out = DVector::zeros(2 * dim);

    // uncoupled singletons
    out[0] = C64::from_polar(1.0, delta * t / 2.0) * psi[0];
    out[2 * dim - 1] = C64::from_polar(1.0, -delta * t / 2.0) * psi[2 * dim - 1];

    for n in 0..dim - 1 {
        let g = lambda * ((n + 1) as f64).sqrt();
        let omega_n = (delta * delta + 4.0 * g * g).sqrt();
        let (u_ee, u_gg, u_cross) = if omega_n == 0.0 {
            // fully decoupled block (λ = Δ = 0)
            (C64::new(1.0, 0.0), C64::new(1.0, 0.0), C64::new(0.0, 0.0))
        } else {
            let half = omega_n * t / 2.0;
            let (s, c) = half.sin_cos();
            (
                C64::new(c, -delta / omega_n * s),
                C64::new(c, delta / omega_n * s),
                C64::new(0.0, -2.0 * g / omega_n * s),
            )
        };
        let ce = psi[dim + n];
        let cg = psi[1 + n];
        out[dim + n] = u_ee * ce + u_cross * cg;
        out[1 + n] = u_cross * ce + u_gg * cg;
    }
    Ok(JointState::from_raw(dim, out))
}

/// Unitary propagator e^{−iHt} from a one-time Hermitian eigendecomposition,
/// reusable across many sample times.
pub struct Propagator {
    dim: usize,
    eigenvalues: DVector<f64>,
    eigenvectors: DMatrix<C64>,
}

impl Propagator {
    pub const HERMITICITY_TOL: f64 = 1e-9;

    pub fn new(h: &Operator) -> Result<Self, DynamicsError> {
        let residual = h.hermiticity_residual();
        let scale = h.matrix().iter().map(|z| z.norm()).fold(0.0, f64::max);
        if residual > Self::HERMITICITY_TOL * (1.0 + scale) {
            return Err(DynamicsError::NonHermitian { residual });
        }
        let eig = h.matrix().clone().symmetric_eigen();
        Ok(Self { dim: h.dim(), eigenvalues: eig.eigenvalues, eigenvectors: eig.eigenvectors })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Apply e^{−iHt} to a raw vector.
    pub fn apply(&self, v: &DVector<C64>, t: f64) -> DVector<C64> {
        let mut coeffs = self.eigenvectors.adjoint() * v;
        for (k, c) in coeffs.iter_mut().enumerate() {
            *c *= C64::from_polar(1.0, -self.eigenvalues[k] * t);
        }
        &self.eigenvectors * coeffs
    }

    pub fn evolve_joint(&self, state: &JointState, t: f64) -> Result<JointState, DynamicsError> {
        if state.amplitudes().len() != self.dim {
            return Err(DynamicsError::DimMismatch {
                left: state.amplitudes().len(),
                right: self.dim,
            });
        }
        Ok(JointState::from_raw(state.dim_field(), self.apply(state.amplitudes(), t)))
    }
}

/// One-shot e^{−iHt} application; builds the eigendecomposition internally.
/// Prefer [`Propagator`] when evaluating many sample times.
pub fn evolve_generic(
    state: &JointState,
    h: &Operator,
    t: f64,
) -> Result<JointState, DynamicsError> {
    Propagator::new(h)?.evolve_joint(state, t)
}

/// Collapse (dephasing) time of the Rabi oscillations, t_c = 1/(2λ).
pub fn collapse_time(params: &ModelParams) -> f64 {
    1.0 / (2.0 * params.lambda)
}

/// Revival times t_R(k) = (2π/λ)·√n̄·k for k = 1..=k_max.
///
/// The formula assumes n̄ ≫ 1; below n̄ ≈ 4 the revivals are too broad for it
/// to be meaningful.
pub fn revival_times(params: &ModelParams, nbar: f64, k_max: usize) -> Vec<f64> {
    (1..=k_max)
        .map(|k| 2.0 * std::f64::consts::PI / params.lambda * nbar.sqrt() * k as f64)
        .collect()
}

/// Options for the fixed-step RK4 Lindblad integrator.
#[derive(Debug, Clone)]
pub struct LindbladOptions {
    /// Integration step in scaled time λ·dt.
    pub dt_scaled: f64,
    /// Trace-drift guard: abort when |tr ρ − 1| exceeds this.
    pub trace_limit: f64,
}

impl Default for LindbladOptions {
    fn default() -> Self {
        Self { dt_scaled: 1e-3, trace_limit: 1e-4 }
    }
}

/// Integrate dρ/dt = −i[H,ρ] + κ(aρa† − ½{a†a,ρ}) on the joint space,
/// visiting ρ(t) at each requested sample without retaining the trajectory.
///
/// `t_grid` must be ascending and start at 0 (in real time). The Hamiltonian
/// is the rotating-frame Hamiltonian of `params` unless `frame` says
/// otherwise; the single collapse operator is √κ·(I⊗a), a zero-temperature
/// cavity bath. The commutator and dissipator are applied through the sparse
/// structure of H and a, so one right-hand side costs O(dim²).
pub fn evolve_lindblad_scan(
    rho0: &DensityMatrix,
    params: &ModelParams,
    t_grid: &[f64],
    frame: Frame,
    opts: &LindbladOptions,
    mut visit: impl FnMut(usize, f64, &DensityMatrix) -> Result<(), DynamicsError>,
) -> Result<(), DynamicsError> {
    params.validate()?;
    if t_grid.is_empty()
        || t_grid[0] != 0.0
        || t_grid.windows(2).any(|w| w[1] <= w[0])
        || t_grid.iter().any(|t| !t.is_finite())
    {
        return Err(DynamicsError::InvalidTimeGrid);
    }
    let dim_joint = rho0.dim();
    if dim_joint % 2 != 0 {
        return Err(DynamicsError::DimMismatch { left: dim_joint, right: dim_joint + 1 });
    }
    let dim_field = dim_joint / 2;
    let h = build_hamiltonian(params, dim_field, frame);
    let h_sparse = SparseMatrix::from_dense(h.matrix());
    let kappa = params.kappa;
    // dt_scaled is λ·dt; for the degenerate λ = 0 case treat it as real time
    let dt_max =
        if params.lambda > 0.0 { opts.dt_scaled / params.lambda } else { opts.dt_scaled };

    let mut rho = rho0.matrix().clone();
    let snapshot = DensityMatrix::from_raw(rho.clone());
    visit(0, 0.0, &snapshot)?;

    let mut buffers = Rk4Buffers::new(dim_joint);
    let mut t = 0.0;
    for (index, &target) in t_grid.iter().enumerate().skip(1) {
        let span = target - t;
        let nsub = (span / dt_max).ceil().max(1.0) as usize;
        let dt = span / nsub as f64;
        for _ in 0..nsub {
            rk4_step(&mut rho, dt, &h_sparse, kappa, dim_field, &mut buffers);
        }
        t = target;
        let drift = (rho.trace().re - 1.0).abs();
        if drift > opts.trace_limit {
            return Err(DynamicsError::TraceDrift { t, drift, limit: opts.trace_limit });
        }
        let snapshot = DensityMatrix::from_raw(rho.clone());
        visit(index, t, &snapshot)?;
    }
    Ok(())
}

/// Like [`evolve_lindblad_scan`], collecting ρ(t) at every sample.
pub fn evolve_lindblad(
    rho0: &DensityMatrix,
    params: &ModelParams,
    t_grid: &[f64],
    frame: Frame,
    opts: &LindbladOptions,
) -> Result<Vec<DensityMatrix>, DynamicsError> {
    let mut snapshots = Vec::with_capacity(t_grid.len());
    evolve_lindblad_scan(rho0, params, t_grid, frame, opts, |_, _, rho| {
        snapshots.push(rho.clone());
        Ok(())
    })?;
    Ok(snapshots)
}

/// Nonzero entries of a sparse matrix, grouped for the two one-sided products
/// needed by the commutator.
struct SparseMatrix {
    entries: Vec<(usize, usize, C64)>,
}

impl SparseMatrix {
    fn from_dense(m: &DMatrix<C64>) -> Self {
        let mut entries = Vec::new();
        for j in 0..m.ncols() {
            for i in 0..m.nrows() {
                let v = m[(i, j)];
                if v != C64::new(0.0, 0.0) {
                    entries.push((i, j, v));
                }
            }
        }
        Self { entries }
    }
}

struct Rk4Buffers {
    k: DMatrix<C64>,
    stage: DMatrix<C64>,
    acc: DMatrix<C64>,
    prod: DMatrix<C64>,
}

impl Rk4Buffers {
    fn new(dim: usize) -> Self {
        Self {
            k: DMatrix::zeros(dim, dim),
            stage: DMatrix::zeros(dim, dim),
            acc: DMatrix::zeros(dim, dim),
            prod: DMatrix::zeros(dim, dim),
        }
    }
}

/// out = −i[H,ρ] + κ(aρa† − ½{n̂,ρ}), with a = I⊗a and n̂ = I⊗a†a.
fn lindblad_rhs(
    rho: &DMatrix<C64>,
    h: &SparseMatrix,
    kappa: f64,
    dim_field: usize,
    out: &mut DMatrix<C64>,
    prod: &mut DMatrix<C64>,
) {
    let dim = rho.nrows();
    // M = ρH, then −i[H,ρ] = i(M − M†) because Hρ = (ρH)† for Hermitian H, ρ.
    prod.fill(C64::new(0.0, 0.0));
    for &(k, j, v) in &h.entries {
        // prod[:, j] += ρ[:, k] · v
        for i in 0..dim {
            prod[(i, j)] += rho[(i, k)] * v;
        }
    }
    for j in 0..dim {
        for i in 0..dim {
            let m = prod[(i, j)];
            let mdag = prod[(j, i)].conj();
            out[(i, j)] = C64::new(0.0, 1.0) * (m - mdag);
        }
    }
    if kappa > 0.0 {
        // aρa†: [(m,n),(m',n')] ← √(n+1)√(n'+1) ρ[(m,n+1),(m',n'+1)]
        for j in 0..dim {
            let nj = j % dim_field;
            if nj + 1 < dim_field {
                let sj = ((nj + 1) as f64).sqrt();
                for i in 0..dim {
                    let ni = i % dim_field;
                    if ni + 1 < dim_field {
                        let si = ((ni + 1) as f64).sqrt();
                        out[(i, j)] += C64::new(kappa * si * sj, 0.0) * rho[(i + 1, j + 1)];
                    }
                }
            }
            // −κ/2 (n_i + n_j) ρ[i,j]
            for i in 0..dim {
                let ni = i % dim_field;
                out[(i, j)] -= C64::new(kappa * 0.5 * (ni + nj) as f64, 0.0) * rho[(i, j)];
            }
        }
    }
}

fn add_scaled(dst: &mut DMatrix<C64>, src: &DMatrix<C64>, factor: C64) {
    dst.zip_apply(src, |d, s| *d += s * factor);
}

fn rk4_step(
    rho: &mut DMatrix<C64>,
    dt: f64,
    h: &SparseMatrix,
    kappa: f64,
    dim_field: usize,
    b: &mut Rk4Buffers,
) {
    let half = C64::new(dt / 2.0, 0.0);
    let full = C64::new(dt, 0.0);
    let sixth = C64::new(dt / 6.0, 0.0);
    let two = C64::new(2.0, 0.0);
    let one = C64::new(1.0, 0.0);

    lindblad_rhs(rho, h, kappa, dim_field, &mut b.k, &mut b.prod);
    b.acc.copy_from(&b.k);
    b.stage.copy_from(rho);
    add_scaled(&mut b.stage, &b.k, half);

    lindblad_rhs(&b.stage, h, kappa, dim_field, &mut b.k, &mut b.prod);
    add_scaled(&mut b.acc, &b.k, two);
    b.stage.copy_from(rho);
    add_scaled(&mut b.stage, &b.k, half);

    lindblad_rhs(&b.stage, h, kappa, dim_field, &mut b.k, &mut b.prod);
    add_scaled(&mut b.acc, &b.k, two);
    b.stage.copy_from(rho);
    add_scaled(&mut b.stage, &b.k, full);

    lindblad_rhs(&b.stage, h, kappa, dim_field, &mut b.k, &mut b.prod);
    add_scaled(&mut b.acc, &b.k, one);

    add_scaled(rho, &b.acc, sixth);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::{AtomLevel, AtomState, CatSign};
    use approx::assert_abs_diff_eq;

    fn excited_fock(n: usize, dim: usize) -> JointState {
        JointState::tensor(&AtomState::excited(), &FieldState::fock(n, dim).unwrap())
    }

    #[test]
    fn hamiltonian_is_hermitian() {
        let params = ModelParams { omega0: 3.1, omega: 2.7, lambda: 0.8, variant: InteractionVariant::Jc, kappa: 0.0 };
        for frame in [Frame::Lab, Frame::Rotating] {
            let h = build_hamiltonian(&params, 12, frame);
            assert!(h.hermiticity_residual() < 1e-12);
        }
        let anti = params.with_variant(InteractionVariant::AntiJc);
        let h = build_hamiltonian(&anti, 12, Frame::Rotating);
        assert!(h.hermiticity_residual() < 1e-12);
    }

    #[test]
    fn resonant_rotating_spectrum_is_dressed_pairs() {
        // eigenvalues ±λ√(n+1) for n = 0..dim−2, plus 0 for |g,0⟩ and the
        // truncation singleton |e,dim−1⟩ (also 0 at resonance)
        let lambda = 0.7;
        let dim = 8;
        let h = build_hamiltonian(&ModelParams::resonant(lambda), dim, Frame::Rotating);
        let mut eigs: Vec<f64> = h.matrix().clone().symmetric_eigen().eigenvalues.iter().copied().collect();
        eigs.sort_by(f64::total_cmp);
        let mut expected: Vec<f64> = vec![0.0, 0.0];
        for n in 0..dim - 1 {
            let r = lambda * ((n + 1) as f64).sqrt();
            expected.push(r);
            expected.push(-r);
        }
        expected.sort_by(f64::total_cmp);
        for (a, b) in eigs.iter().zip(expected.iter()) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-12);
        }
    }

    #[test]
    fn decoupled_resonant_rotating_hamiltonian_is_zero() {
        let params = ModelParams { omega0: 1.0, omega: 1.0, lambda: 0.0, variant: InteractionVariant::Jc, kappa: 0.0 };
        let h = build_hamiltonian(&params, 4, Frame::Rotating);
        assert!(h.matrix().iter().all(|z| *z == C64::new(0.0, 0.0)));
    }

    #[test]
    fn rabi_flop_probabilities() {
        // P(remain in |e,n⟩) = cos²(λt√(n+1)) at resonance
        let params = ModelParams::resonant(1.3);
        for n in [0usize, 2, 5] {
            let dim = n + 4;
            let joint = excited_fock(n, dim);
            let root = ((n + 1) as f64).sqrt();
            // quarter flop: λt√(n+1) = π/2 → P = 0
            let t = std::f64::consts::FRAC_PI_2 / (params.lambda * root);
            let evolved = evolve_analytic(&joint, &params, t).unwrap();
            assert_abs_diff_eq!(evolved.amplitude(AtomLevel::E, n).norm_sqr(), 0.0, epsilon = 1e-12);
            // full cycle: λt√(n+1) = π → P = 1
            let evolved = evolve_analytic(&joint, &params, 2.0 * t).unwrap();
            assert_abs_diff_eq!(evolved.amplitude(AtomLevel::E, n).norm_sqr(), 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn ground_vacuum_is_stationary() {
        let params = ModelParams::resonant(1.0).with_detuning(0.35);
        let joint = JointState::tensor(&AtomState::ground(), &FieldState::fock(0, 6).unwrap());
        let evolved = evolve_analytic(&joint, &params, 7.7).unwrap();
        assert_abs_diff_eq!(evolved.amplitude(AtomLevel::G, 0).norm_sqr(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn analytic_rejects_anti_jc() {
        let params = ModelParams::resonant(1.0).with_variant(InteractionVariant::AntiJc);
        let joint = excited_fock(0, 4);
        assert!(matches!(
            evolve_analytic(&joint, &params, 1.0),
            Err(DynamicsError::UnsupportedVariant)
        ));
    }

    #[test]
    fn generic_propagator_matches_analytic() {
        let params = ModelParams::resonant(1.0);
        let h = build_hamiltonian(&params, 8, Frame::Rotating);
        let joint = excited_fock(0, 8);
        let t = std::f64::consts::FRAC_PI_4 / params.lambda;
        let a = evolve_analytic(&joint, &params, t).unwrap();
        let b = evolve_generic(&joint, &h, t).unwrap();
        let diff = (a.amplitudes() - b.amplitudes()).norm();
        assert!(diff < 1e-10, "propagators disagree by {diff}");
    }

    #[test]
    fn generic_propagator_identity_and_reversal() {
        let params = ModelParams::resonant(0.9).with_detuning(0.4);
        let h = build_hamiltonian(&params, 10, Frame::Rotating);
        let prop = Propagator::new(&h).unwrap();
        let joint = JointState::tensor(
            &AtomState::superposition(0.8, 0.3),
            &FieldState::coherent(C64::new(1.2, 0.0), 10).unwrap(),
        );
        let same = prop.evolve_joint(&joint, 0.0).unwrap();
        assert!((same.amplitudes() - joint.amplitudes()).norm() < 1e-12);

        let fwd = prop.evolve_joint(&joint, 3.3).unwrap();
        let back = prop.evolve_joint(&fwd, -3.3).unwrap();
        assert!((back.amplitudes() - joint.amplitudes()).norm() < 1e-10);
    }

    #[test]
    fn propagator_rejects_non_hermitian() {
        let m = Operator::annihilation(4);
        assert!(matches!(Propagator::new(&m), Err(DynamicsError::NonHermitian { .. })));
    }

    #[test]
    fn collapse_and_revival_times() {
        let params = ModelParams::resonant(2.0);
        assert_abs_diff_eq!(collapse_time(&params), 0.25, epsilon = 1e-15);

        let params = ModelParams::resonant(1.0);
        let times = revival_times(&params, 15.0, 2);
        assert_abs_diff_eq!(times[0], 2.0 * std::f64::consts::PI * 15.0_f64.sqrt(), epsilon = 1e-12);
        assert_abs_diff_eq!(times[1], 2.0 * times[0], epsilon = 1e-12);
    }

    #[test]
    fn lindblad_kappa_zero_matches_unitary() {
        let params = ModelParams::resonant(1.0);
        let dim = 12;
        let joint = JointState::tensor(
            &AtomState::excited(),
            &FieldState::coherent(C64::new(1.0, 0.0), dim).unwrap(),
        );
        let rho0 = DensityMatrix::from_pure_joint(&joint);
        let t_grid = [0.0, 0.5, 1.0, 2.0];
        let rhos =
            evolve_lindblad(&rho0, &params, &t_grid, Frame::Rotating, &LindbladOptions::default())
                .unwrap();
        for (&t, rho) in t_grid.iter().zip(&rhos) {
            let psi = evolve_analytic(&joint, &params, t).unwrap();
            let target = DensityMatrix::from_pure_joint(&psi);
            let diff = (rho.matrix() - target.matrix()).iter().map(|z| z.norm()).fold(0.0, f64::max);
            assert!(diff < 1e-6, "t={t}: max entry diff {diff}");
        }
    }

    #[test]
    fn lindblad_uncoupled_empty_cavity_is_static() {
        // |e,0⟩ with λ=0 and κ>0: the cavity is empty and the bath damps only
        // the field, so the whole joint state is stationary
        let params = ModelParams::resonant(0.0).with_kappa(0.3);
        let joint = excited_fock(0, 4);
        let rho0 = DensityMatrix::from_pure_joint(&joint);
        let rhos = evolve_lindblad(&rho0, &params, &[0.0, 1.0, 3.0], Frame::Rotating, &LindbladOptions::default())
            .unwrap();
        let last = rhos.last().unwrap();
        let diff = (last.matrix() - rho0.matrix()).iter().map(|z| z.norm()).fold(0.0, f64::max);
        assert!(diff < 1e-9, "excited empty cavity moved by {diff}");
    }

    #[test]
    fn lindblad_damps_cat_coherence() {
        // with κ>0 a cat state loses its off-diagonal parity structure much
        // faster than its energy
        let dim = 24;
        let params = ModelParams::resonant(1.0).with_kappa(0.05);
        let cat = FieldState::cat(C64::new(2.0, 0.0), CatSign::Plus, dim).unwrap();
        let joint = JointState::tensor(&AtomState::ground(), &cat);
        let rho0 = DensityMatrix::from_pure_joint(&joint);
        let rhos = evolve_lindblad(&rho0, &params, &[0.0, 2.0], Frame::Rotating, &LindbladOptions::default())
            .unwrap();
        let p0 =
            crate::observables::parity_expectation(&crate::observables::reduced_field_rho(&rhos[0]));
        let p1 =
            crate::observables::parity_expectation(&crate::observables::reduced_field_rho(&rhos[1]));
        assert!(p0 > 0.99);
        assert!(p1 < p0 - 0.1, "parity did not decay: {p0} -> {p1}");
    }

    #[test]
    fn lindblad_rejects_bad_grid() {
        let params = ModelParams::resonant(1.0);
        let joint = excited_fock(0, 4);
        let rho0 = DensityMatrix::from_pure_joint(&joint);
        for grid in [vec![], vec![1.0, 2.0], vec![0.0, 2.0, 1.0]] {
            assert!(matches!(
                evolve_lindblad(&rho0, &params, &grid, Frame::Rotating, &LindbladOptions::default()),
                Err(DynamicsError::InvalidTimeGrid)
            ));
        }
    }

    #[test]
    fn anti_jc_couples_ground_vacuum() {
        // anti-JC moves population out of |g,0⟩ (couples |g,n⟩ ↔ |e,n+1⟩),
        // whereas JC leaves it invariant
        let dim = 6;
        let joint = JointState::tensor(&AtomState::ground(), &FieldState::fock(0, dim).unwrap());
        let anti = ModelParams::resonant(1.0).with_variant(InteractionVariant::AntiJc);
        let h = build_hamiltonian(&anti, dim, Frame::Rotating);
        let evolved = evolve_generic(&joint, &h, 0.7).unwrap();
        let stay = evolved.amplitude(AtomLevel::G, 0).norm_sqr();
        assert!(stay < 0.9, "anti-JC left |g,0> invariant (P={stay})");
        assert!(evolved.amplitude(AtomLevel::E, 1).norm_sqr() > 0.05);
    }
}
