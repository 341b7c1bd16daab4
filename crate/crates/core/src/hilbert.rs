//! Truncated bosonic Hilbert space: basis conventions, state factories, ladder
//! and parity operators, and atom ⊗ field tensor assembly.
//!
//! The field basis is the photon-number (Fock) basis {|0⟩, …, |dim−1⟩}. The
//! joint atom-field basis is ordered with the atom index slowest:
//! |g,0⟩, |g,1⟩, …, |g,dim−1⟩, |e,0⟩, …, |e,dim−1⟩.
//!
//! All factory outputs are normalized to unit ℓ² norm. Coherent and cat states
//! are renormalized after truncation so that downstream unitarity checks stay
//! clean; the truncated tail mass is available separately for diagnostics.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;
use thiserror::Error;

/// Tolerance for the unit-norm invariant of state vectors.
pub const NORM_TOL: f64 = 1e-10;

/// Poisson tail mass above which strict coherent-state construction fails.
pub const STRICT_TAIL_LIMIT: f64 = 1e-8;

#[derive(Debug, Error, PartialEq)]
pub enum HilbertError {
    #[error("photon number {n} out of range for truncation dimension {dim}")]
    FockOutOfRange { n: usize, dim: usize },
    #[error("truncation dimension must be at least 2, got {0}")]
    DimTooSmall(usize),
    #[error("truncated tail mass {tail:.3e} exceeds {limit:.1e} at dim {dim}; increase the truncation")]
    TruncationTail { dim: usize, tail: f64, limit: f64 },
    #[error("cat state |β⟩ {sign} |−β⟩ has vanishing norm (undefined state)")]
    ZeroCat { sign: CatSign },
    #[error("state vector has norm {norm} but must be normalized to 1 within {NORM_TOL:.0e}")]
    NotNormalized { norm: f64 },
    #[error("dimension mismatch: {left} vs {right}")]
    DimMismatch { left: usize, right: usize },
}

/// Relative sign between the two coherent components of a cat state.
///
/// `Plus` keeps only even photon numbers, `Minus` only odd ones.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CatSign {
    Plus,
    Minus,
}

impl CatSign {
    pub fn value(self) -> f64 {
        match self {
            CatSign::Plus => 1.0,
            CatSign::Minus => -1.0,
        }
    }
}

impl std::fmt::Display for CatSign {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CatSign::Plus => write!(f, "+"),
            CatSign::Minus => write!(f, "−"),
        }
    }
}

/// The two levels of the atom. `G` is index 0 in the joint basis, `E` index 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AtomLevel {
    G,
    E,
}

impl AtomLevel {
    pub fn index(self) -> usize {
        match self {
            AtomLevel::G => 0,
            AtomLevel::E => 1,
        }
    }
}

impl std::fmt::Display for AtomLevel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            AtomLevel::G => write!(f, "g"),
            AtomLevel::E => write!(f, "e"),
        }
    }
}

/// Pure state of the two-level atom, amplitudes ordered (g, e).
#[derive(Debug, Clone, PartialEq)]
pub struct AtomState {
    amplitudes: [C64; 2],
}

impl AtomState {
    pub fn ground() -> Self {
        Self { amplitudes: [C64::new(1.0, 0.0), C64::new(0.0, 0.0)] }
    }

    pub fn excited() -> Self {
        Self { amplitudes: [C64::new(0.0, 0.0), C64::new(1.0, 0.0)] }
    }

    /// Bloch-sphere state cos(θ/2)|g⟩ + e^{iφ} sin(θ/2)|e⟩.
    pub fn superposition(theta: f64, phi: f64) -> Self {
        let g = C64::new((theta / 2.0).cos(), 0.0);
        let e = C64::from_polar((theta / 2.0).sin(), phi);
        Self { amplitudes: [g, e] }
    }

    pub fn from_amplitudes(g: C64, e: C64) -> Result<Self, HilbertError> {
        let norm = (g.norm_sqr() + e.norm_sqr()).sqrt();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(HilbertError::NotNormalized { norm });
        }
        Ok(Self { amplitudes: [g, e] })
    }

    pub fn amplitude(&self, level: AtomLevel) -> C64 {
        self.amplitudes[level.index()]
    }
}

/// Pure state of the cavity field over the truncated Fock basis.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldState {
    dim: usize,
    amplitudes: DVector<C64>,
}

impl FieldState {
    /// The Fock state |n⟩.
    pub fn fock(n: usize, dim: usize) -> Result<Self, HilbertError> {
        check_dim(dim)?;
        if n >= dim {
            return Err(HilbertError::FockOutOfRange { n, dim });
        }
        let mut amplitudes = DVector::zeros(dim);
        amplitudes[n] = C64::new(1.0, 0.0);
        Ok(Self { dim, amplitudes })
    }

    /// The coherent state |α⟩ with amplitudes cₙ = e^{−|α|²/2} αⁿ/√n!,
    /// computed by the recurrence cₙ₊₁ = cₙ α/√(n+1) and renormalized after
    /// truncation. The photon distribution |cₙ|² is Poissonian with mean |α|².
    pub fn coherent(alpha: C64, dim: usize) -> Result<Self, HilbertError> {
        check_dim(dim)?;
        let mut amplitudes = coherent_column(alpha, dim);
        let norm = amplitudes.norm();
        amplitudes /= C64::new(norm, 0.0);
        Ok(Self { dim, amplitudes })
    }

    /// Like [`FieldState::coherent`] but fails when the truncated Poisson tail
    /// mass exceeds [`STRICT_TAIL_LIMIT`].
    pub fn coherent_strict(alpha: C64, dim: usize) -> Result<Self, HilbertError> {
        let tail = coherent_tail_mass(alpha, dim);
        if tail > STRICT_TAIL_LIMIT {
            return Err(HilbertError::TruncationTail { dim, tail, limit: STRICT_TAIL_LIMIT });
        }
        Self::coherent(alpha, dim)
    }

    /// Normalized cat state ∝ |β⟩ + sign·|−β⟩.
    ///
    /// For `CatSign::Plus` the odd-photon amplitudes vanish identically; for
    /// `CatSign::Minus` the even ones do. β = 0 with `Minus` is the zero
    /// vector and is rejected.
    pub fn cat(beta: C64, sign: CatSign, dim: usize) -> Result<Self, HilbertError> {
        check_dim(dim)?;
        let base = coherent_column(beta, dim);
        let s = sign.value();
        let mut amplitudes = DVector::zeros(dim);
        for n in 0..dim {
            let parity = if n % 2 == 0 { 1.0 } else { -1.0 };
            amplitudes[n] = base[n] * C64::new(1.0 + s * parity, 0.0);
        }
        let norm = amplitudes.norm();
        if norm < 1e-12 {
            return Err(HilbertError::ZeroCat { sign });
        }
        amplitudes /= C64::new(norm, 0.0);
        Ok(Self { dim, amplitudes })
    }

    /// Build from raw amplitudes; must be normalized within [`NORM_TOL`].
    pub fn from_amplitudes(amplitudes: DVector<C64>) -> Result<Self, HilbertError> {
        check_dim(amplitudes.len())?;
        let norm = amplitudes.norm();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(HilbertError::NotNormalized { norm });
        }
        Ok(Self { dim: amplitudes.len(), amplitudes })
    }

    /// Renormalize raw amplitudes (used for post-measurement reduction).
    pub(crate) fn renormalized(mut amplitudes: DVector<C64>) -> Self {
        let norm = amplitudes.norm();
        amplitudes /= C64::new(norm, 0.0);
        Self { dim: amplitudes.len(), amplitudes }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn amplitude(&self, n: usize) -> C64 {
        self.amplitudes[n]
    }

    pub fn amplitudes(&self) -> &DVector<C64> {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.norm()
    }

    /// Inner product ⟨self|other⟩.
    pub fn inner(&self, other: &FieldState) -> C64 {
        self.amplitudes.dotc(&other.amplitudes)
    }
}

/// Pure state of the joint atom-field system.
///
/// Amplitudes are ordered |g,0⟩ … |g,dim−1⟩, |e,0⟩ … |e,dim−1⟩.
#[derive(Debug, Clone, PartialEq)]
pub struct JointState {
    dim_field: usize,
    amplitudes: DVector<C64>,
}

impl JointState {
    /// Kronecker product atom ⊗ field in the documented basis ordering.
    pub fn tensor(atom: &AtomState, field: &FieldState) -> Self {
        let dim = field.dim();
        let mut amplitudes = DVector::zeros(2 * dim);
        for (block, level) in [(0, AtomLevel::G), (1, AtomLevel::E)] {
            let a = atom.amplitude(level);
            for n in 0..dim {
                amplitudes[block * dim + n] = a * field.amplitude(n);
            }
        }
        Self { dim_field: dim, amplitudes }
    }

    pub fn from_amplitudes(dim_field: usize, amplitudes: DVector<C64>) -> Result<Self, HilbertError> {
        check_dim(dim_field)?;
        if amplitudes.len() != 2 * dim_field {
            return Err(HilbertError::DimMismatch { left: amplitudes.len(), right: 2 * dim_field });
        }
        let norm = amplitudes.norm();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(HilbertError::NotNormalized { norm });
        }
        Ok(Self { dim_field, amplitudes })
    }

    pub(crate) fn from_raw(dim_field: usize, amplitudes: DVector<C64>) -> Self {
        debug_assert_eq!(amplitudes.len(), 2 * dim_field);
        Self { dim_field, amplitudes }
    }

    pub fn dim_field(&self) -> usize {
        self.dim_field
    }

    /// Flat index of |level, n⟩.
    pub fn index(&self, level: AtomLevel, n: usize) -> usize {
        level.index() * self.dim_field + n
    }

    pub fn amplitude(&self, level: AtomLevel, n: usize) -> C64 {
        self.amplitudes[self.index(level, n)]
    }

    pub fn amplitudes(&self) -> &DVector<C64> {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.norm()
    }

    pub fn inner(&self, other: &JointState) -> C64 {
        self.amplitudes.dotc(&other.amplitudes)
    }
}

/// Dense complex operator on a truncated space.
#[derive(Debug, Clone, PartialEq)]
pub struct Operator {
    dim: usize,
    matrix: DMatrix<C64>,
}

impl Operator {
    pub fn from_matrix(matrix: DMatrix<C64>) -> Result<Self, HilbertError> {
        if matrix.nrows() != matrix.ncols() {
            return Err(HilbertError::DimMismatch { left: matrix.nrows(), right: matrix.ncols() });
        }
        Ok(Self { dim: matrix.nrows(), matrix })
    }

    /// Annihilation operator: a|n⟩ = √n |n−1⟩.
    pub fn annihilation(dim: usize) -> Self {
        let mut m = DMatrix::zeros(dim, dim);
        for n in 1..dim {
            m[(n - 1, n)] = C64::new((n as f64).sqrt(), 0.0);
        }
        Self { dim, matrix: m }
    }

    /// Creation operator: a†|n⟩ = √(n+1) |n+1⟩, with the truncation
    /// convention a†|dim−1⟩ = 0.
    pub fn creation(dim: usize) -> Self {
        let mut m = DMatrix::zeros(dim, dim);
        for n in 0..dim - 1 {
            m[(n + 1, n)] = C64::new(((n + 1) as f64).sqrt(), 0.0);
        }
        Self { dim, matrix: m }
    }

    /// Number operator n̂ = a†a, diagonal (0, 1, …, dim−1).
    pub fn number(dim: usize) -> Self {
        let mut m = DMatrix::zeros(dim, dim);
        for n in 0..dim {
            m[(n, n)] = C64::new(n as f64, 0.0);
        }
        Self { dim, matrix: m }
    }

    /// Photon-number parity Π = (−1)^n̂, diagonal ±1.
    pub fn parity(dim: usize) -> Self {
        let mut m = DMatrix::zeros(dim, dim);
        for n in 0..dim {
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            m[(n, n)] = C64::new(sign, 0.0);
        }
        Self { dim, matrix: m }
    }

    pub fn identity(dim: usize) -> Self {
        Self { dim, matrix: DMatrix::identity(dim, dim) }
    }

    /// σ₃ = diag(−1, +1) in (g, e) order: ⟨σ₃⟩ = +1 means excited.
    pub fn sigma3() -> Self {
        let mut m = DMatrix::zeros(2, 2);
        m[(0, 0)] = C64::new(-1.0, 0.0);
        m[(1, 1)] = C64::new(1.0, 0.0);
        Self { dim: 2, matrix: m }
    }

    /// σ₊ = |e⟩⟨g|.
    pub fn sigma_plus() -> Self {
        let mut m = DMatrix::zeros(2, 2);
        m[(1, 0)] = C64::new(1.0, 0.0);
        Self { dim: 2, matrix: m }
    }

    /// σ₋ = |g⟩⟨e|.
    pub fn sigma_minus() -> Self {
        let mut m = DMatrix::zeros(2, 2);
        m[(0, 1)] = C64::new(1.0, 0.0);
        Self { dim: 2, matrix: m }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn adjoint(&self) -> Self {
        Self { dim: self.dim, matrix: self.matrix.adjoint() }
    }

    /// Largest entry of |A − A†|; zero (to rounding) for Hermitian operators.
    pub fn hermiticity_residual(&self) -> f64 {
        let adj = self.matrix.adjoint();
        (&self.matrix - adj).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Apply to a raw complex vector.
    pub fn apply_vec(&self, v: &DVector<C64>) -> DVector<C64> {
        &self.matrix * v
    }

    /// Apply to a field state, returning the raw (possibly unnormalized)
    /// image vector.
    pub fn apply(&self, state: &FieldState) -> DVector<C64> {
        &self.matrix * state.amplitudes()
    }

    /// Expectation ⟨ψ|A|ψ⟩ for a pure field state.
    pub fn expectation(&self, state: &FieldState) -> C64 {
        state.amplitudes().dotc(&(&self.matrix * state.amplitudes()))
    }

    /// Expectation over a joint pure state (for joint-space operators).
    pub fn expectation_joint(&self, state: &JointState) -> C64 {
        state.amplitudes().dotc(&(&self.matrix * state.amplitudes()))
    }
}

impl std::ops::Add for &Operator {
    type Output = Operator;
    fn add(self, rhs: &Operator) -> Operator {
        Operator { dim: self.dim, matrix: &self.matrix + &rhs.matrix }
    }
}

impl std::ops::Sub for &Operator {
    type Output = Operator;
    fn sub(self, rhs: &Operator) -> Operator {
        Operator { dim: self.dim, matrix: &self.matrix - &rhs.matrix }
    }
}

impl std::ops::Mul for &Operator {
    type Output = Operator;
    fn mul(self, rhs: &Operator) -> Operator {
        Operator { dim: self.dim, matrix: &self.matrix * &rhs.matrix }
    }
}

impl std::ops::Mul<C64> for &Operator {
    type Output = Operator;
    fn mul(self, rhs: C64) -> Operator {
        Operator { dim: self.dim, matrix: &self.matrix * rhs }
    }
}

/// (a, a†) on the same truncation.
pub fn ladder_operators(dim: usize) -> (Operator, Operator) {
    (Operator::annihilation(dim), Operator::creation(dim))
}

/// Kronecker product A ⊗ B with A the (slow) left factor.
pub fn tensor_product(a: &Operator, b: &Operator) -> Operator {
    let (da, db) = (a.dim(), b.dim());
    let mut m = DMatrix::zeros(da * db, da * db);
    for ia in 0..da {
        for ja in 0..da {
            let aij = a.matrix()[(ia, ja)];
            if aij == C64::new(0.0, 0.0) {
                continue;
            }
            for ib in 0..db {
                for jb in 0..db {
                    m[(ia * db + ib, ja * db + jb)] = aij * b.matrix()[(ib, jb)];
                }
            }
        }
    }
    Operator { dim: da * db, matrix: m }
}

/// Exact coherent amplitudes e^{−|α|²/2} αⁿ/√n! on the truncated basis,
/// without renormalization. This is the ⟨n|α⟩ column used by the phase-space
/// kernels, where the exact (non-renormalized) functional is required.
pub(crate) fn coherent_column(alpha: C64, dim: usize) -> DVector<C64> {
    let mut c = DVector::zeros(dim);
    c[0] = C64::new((-alpha.norm_sqr() / 2.0).exp(), 0.0);
    for n in 0..dim - 1 {
        c[n + 1] = c[n] * alpha / C64::new(((n + 1) as f64).sqrt(), 0.0);
    }
    c
}

/// Poisson tail mass truncated away by representing |α⟩ on `dim` levels.
pub fn coherent_tail_mass(alpha: C64, dim: usize) -> f64 {
    let col = coherent_column(alpha, dim);
    (1.0 - col.norm_squared()).max(0.0)
}

/// Default truncation dimension for mean photon number n̄:
/// ceil(n̄ + 10 √n̄ + 10). The Poisson tail beyond ten standard deviations is
/// below 1e-10 for every n̄ used here.
pub fn default_truncation(nbar: f64) -> usize {
    let dim = (nbar + 10.0 * nbar.sqrt() + 10.0).ceil() as usize;
    dim.max(2)
}

fn check_dim(dim: usize) -> Result<(), HilbertError> {
    if dim < 2 {
        Err(HilbertError::DimTooSmall(dim))
    } else {
        Ok(())
    }
}
