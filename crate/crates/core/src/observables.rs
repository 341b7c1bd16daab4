//! Scalar observables over pure and mixed states: atomic inversion,
//! quadrature squeezing, Mandel Q, photon-number parity, photon
//! distributions, partial traces, and entanglement entropy.
//!
//! Field observables accept either a pure [`FieldState`] or a field
//! [`DensityMatrix`] through [`FieldRef`]; the two inputs take genuinely
//! different code paths (amplitude sums vs matrix bands), which the property
//! tests exploit as a consistency check.
//!
//! Quadratures follow the convention X₁ = (a + a†)/2, X₂ = i(a − a†)/2 with
//! vacuum variance ¼, and the squeezing parameters are
//! sᵢ = ⟨Xᵢ²⟩ − ⟨Xᵢ⟩² − ¼, bounded below by −¼. Expectations involving a a†
//! use the truncated operator (a†|dim−1⟩ = 0), so they agree exactly with the
//! dense-matrix route on the same truncation.

use num_complex::Complex64 as C64;
use thiserror::Error;

use crate::dynamics::DensityMatrix;
use crate::hilbert::{FieldState, JointState};

#[derive(Debug, Error)]
pub enum ObservableError {
    #[error("Mandel Q is undefined for the vacuum (⟨n⟩ = {mean_n:.3e})")]
    VacuumMandelQ { mean_n: f64 },
    #[error("Poisson tail beyond {n_terms} terms is {tail:.3e}, too large for the requested series")]
    SeriesTail { n_terms: usize, tail: f64 },
    #[error("time samples must be strictly ascending and finite")]
    BadTimeGrid,
    #[error("series values must be finite")]
    NonFiniteValue,
}

/// A sampled observable record over scaled time λt.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    times: Vec<f64>,
    values: Vec<f64>,
    label: String,
}

impl TimeSeries {
    pub fn new(
        label: impl Into<String>,
        times: Vec<f64>,
        values: Vec<f64>,
    ) -> Result<Self, ObservableError> {
        if times.len() != values.len()
            || times.iter().any(|t| !t.is_finite())
            || times.windows(2).any(|w| w[1] <= w[0])
        {
            return Err(ObservableError::BadTimeGrid);
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(ObservableError::NonFiniteValue);
        }
        Ok(Self { times, values, label: label.into() })
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}

/// A borrowed field state: pure vector or density matrix.
#[derive(Clone, Copy)]
pub enum FieldRef<'a> {
    Pure(&'a FieldState),
    Mixed(&'a DensityMatrix),
}

impl<'a> From<&'a FieldState> for FieldRef<'a> {
    fn from(s: &'a FieldState) -> Self {
        FieldRef::Pure(s)
    }
}

impl<'a> From<&'a DensityMatrix> for FieldRef<'a> {
    fn from(r: &'a DensityMatrix) -> Self {
        FieldRef::Mixed(r)
    }
}

impl FieldRef<'_> {
    pub fn dim(&self) -> usize {
        match self {
            FieldRef::Pure(s) => s.dim(),
            FieldRef::Mixed(r) => r.dim(),
        }
    }
}

/// Photon-number distribution P(n); sums to 1 within 1e-10 for valid states.
pub fn photon_distribution<'a>(field: impl Into<FieldRef<'a>>) -> Vec<f64> {
    match field.into() {
        FieldRef::Pure(s) => (0..s.dim()).map(|n| s.amplitude(n).norm_sqr()).collect(),
        FieldRef::Mixed(r) => (0..r.dim()).map(|n| r.matrix()[(n, n)].re).collect(),
    }
}

pub fn mean_photon_number<'a>(field: impl Into<FieldRef<'a>>) -> f64 {
    photon_distribution(field).iter().enumerate().map(|(n, p)| n as f64 * p).sum()
}

/// ⟨Π⟩ = Σₙ (−1)ⁿ P(n) ∈ [−1, 1].
pub fn parity_expectation<'a>(field: impl Into<FieldRef<'a>>) -> f64 {
    photon_distribution(field)
        .iter()
        .enumerate()
        .map(|(n, p)| if n % 2 == 0 { *p } else { -*p })
        .sum()
}

/// Mandel Q = (⟨n²⟩ − ⟨n⟩²)/⟨n⟩ − 1; undefined for the vacuum.
pub fn mandel_q<'a>(field: impl Into<FieldRef<'a>>) -> Result<f64, ObservableError> {
    let dist = photon_distribution(field);
    let mean: f64 = dist.iter().enumerate().map(|(n, p)| n as f64 * p).sum();
    if mean < 1e-12 {
        return Err(ObservableError::VacuumMandelQ { mean_n: mean });
    }
    let mean_sq: f64 = dist.iter().enumerate().map(|(n, p)| (n as f64).powi(2) * p).sum();
    Ok((mean_sq - mean * mean) / mean - 1.0)
}

/// First and second ladder moments ⟨a⟩, ⟨a²⟩, ⟨a†a⟩, ⟨a a†⟩ (truncated).
struct LadderMoments {
    a: C64,
    a_sq: C64,
    n: f64,
    a_adag: f64,
}

fn ladder_moments(field: FieldRef<'_>) -> LadderMoments {
    match field {
        FieldRef::Pure(s) => {
            let dim = s.dim();
            let mut a = C64::new(0.0, 0.0);
            let mut a_sq = C64::new(0.0, 0.0);
            let mut n_mean = 0.0;
            let mut a_adag = 0.0;
            for n in 0..dim {
                let c = s.amplitude(n);
                let p = c.norm_sqr();
                n_mean += n as f64 * p;
                if n + 1 < dim {
                    a += c.conj() * C64::new(((n + 1) as f64).sqrt(), 0.0) * s.amplitude(n + 1);
                    a_adag += (n + 1) as f64 * p;
                }
                if n + 2 < dim {
                    let w = (((n + 1) * (n + 2)) as f64).sqrt();
                    a_sq += c.conj() * C64::new(w, 0.0) * s.amplitude(n + 2);
                }
            }
            LadderMoments { a, a_sq, n: n_mean, a_adag }
        }
        FieldRef::Mixed(r) => {
            let dim = r.dim();
            let m = r.matrix();
            let mut a = C64::new(0.0, 0.0);
            let mut a_sq = C64::new(0.0, 0.0);
            let mut n_mean = 0.0;
            let mut a_adag = 0.0;
            for n in 0..dim {
                let p = m[(n, n)].re;
                n_mean += n as f64 * p;
                if n + 1 < dim {
                    // tr(ρa) picks up ρ[n+1, n]·√(n+1)
                    a += C64::new(((n + 1) as f64).sqrt(), 0.0) * m[(n + 1, n)];
                    a_adag += (n + 1) as f64 * p;
                }
                if n + 2 < dim {
                    let w = (((n + 1) * (n + 2)) as f64).sqrt();
                    a_sq += C64::new(w, 0.0) * m[(n + 2, n)];
                }
            }
            LadderMoments { a, a_sq, n: n_mean, a_adag }
        }
    }
}

/// Squeezing parameters (s₁, s₂) of the quadratures X₁ = (a+a†)/2 and
/// X₂ = i(a−a†)/2. Negative values signal squeezing; the floor is −¼.
pub fn quadrature_squeezing<'a>(field: impl Into<FieldRef<'a>>) -> (f64, f64) {
    let m = ladder_moments(field.into());
    let x1 = m.a.re;
    let x2 = -m.a.im;
    let sym = m.a_adag + m.n;
    let x1_sq = 0.25 * (2.0 * m.a_sq.re + sym);
    let x2_sq = 0.25 * (sym - 2.0 * m.a_sq.re);
    (x1_sq - x1 * x1 - 0.25, x2_sq - x2 * x2 - 0.25)
}

/// ⟨σ₃⟩ ∈ [−1, 1] for a pure joint state; +1 means fully excited.
pub fn atomic_inversion(state: &JointState) -> f64 {
    let dim = state.dim_field();
    let psi = state.amplitudes();
    let mut w = 0.0;
    for n in 0..dim {
        w += psi[dim + n].norm_sqr() - psi[n].norm_sqr();
    }
    w
}

/// ⟨σ₃⟩ for a joint density matrix.
pub fn atomic_inversion_rho(rho_joint: &DensityMatrix) -> f64 {
    let dim = rho_joint.dim() / 2;
    let m = rho_joint.matrix();
    let mut w = 0.0;
    for n in 0..dim {
        w += m[(dim + n, dim + n)].re - m[(n, n)].re;
    }
    w
}

/// Reduced field state of a pure joint state (partial trace over the atom).
pub fn reduced_field(state: &JointState) -> DensityMatrix {
    let dim = state.dim_field();
    let psi = state.amplitudes();
    let mut m = nalgebra::DMatrix::zeros(dim, dim);
    for block in [0, dim] {
        for i in 0..dim {
            for j in 0..dim {
                m[(i, j)] += psi[block + i] * psi[block + j].conj();
            }
        }
    }
    DensityMatrix::from_raw(m)
}

/// Reduced 2×2 atom state of a pure joint state (partial trace over the field).
pub fn reduced_atom(state: &JointState) -> DensityMatrix {
    let dim = state.dim_field();
    let psi = state.amplitudes();
    let mut m = nalgebra::DMatrix::zeros(2, 2);
    for n in 0..dim {
        for bi in 0..2 {
            for bj in 0..2 {
                m[(bi, bj)] += psi[bi * dim + n] * psi[bj * dim + n].conj();
            }
        }
    }
    DensityMatrix::from_raw(m)
}

/// Partial trace over the atom for a joint density matrix.
pub fn reduced_field_rho(rho_joint: &DensityMatrix) -> DensityMatrix {
    let dim = rho_joint.dim() / 2;
    let m = rho_joint.matrix();
    let mut out = nalgebra::DMatrix::zeros(dim, dim);
    for block in [0, dim] {
        for i in 0..dim {
            for j in 0..dim {
                out[(i, j)] += m[(block + i, block + j)];
            }
        }
    }
    DensityMatrix::from_raw(out)
}

/// Partial trace over the field for a joint density matrix.
pub fn reduced_atom_rho(rho_joint: &DensityMatrix) -> DensityMatrix {
    let dim = rho_joint.dim() / 2;
    let m = rho_joint.matrix();
    let mut out = nalgebra::DMatrix::zeros(2, 2);
    for n in 0..dim {
        for bi in 0..2 {
            for bj in 0..2 {
                out[(bi, bj)] += m[(bi * dim + n, bj * dim + n)];
            }
        }
    }
    DensityMatrix::from_raw(out)
}

/// Von Neumann entropy −tr ρ ln ρ in nats, from the eigenvalue spectrum.
/// Small negative eigenvalues from partial-trace rounding are clipped.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> f64 {
    rho.eigenvalues()
        .iter()
        .map(|&p| if p > 1e-15 { -p * p.ln() } else { 0.0 })
        .sum()
}

/// Entanglement entropy of a pure joint state, in nats: the von Neumann
/// entropy of the reduced atom, S ∈ [0, ln 2]. Zero iff the state is a
/// product. Divide by ln 2 for bits.
pub fn entanglement_entropy(state: &JointState) -> f64 {
    // 2×2 Hermitian spectrum in closed form: λ± = ½(1 ± √(1 − 4 det))
    let r = reduced_atom(state);
    let m = r.matrix();
    let det = (m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)]).re;
    let disc = (1.0 - 4.0 * det).max(0.0).sqrt();
    let lam = [(1.0 + disc) / 2.0, (1.0 - disc) / 2.0];
    lam.iter().map(|&p| if p > 1e-15 { -p * p.ln() } else { 0.0 }).sum()
}

/// Atomic inversion of an initially excited atom and coherent field with mean
/// photon number n̄, by direct summation of the Poisson-weighted Rabi series
/// W(T) = e^{−n̄} Σₙ n̄ⁿ/n! · cos(2T√(n+1)) over scaled time T = λt.
///
/// This bypasses state propagation entirely and serves as the independent
/// oracle against the propagated inversion. Fails when the Poisson tail
/// beyond `n_terms` exceeds 1e-10.
pub fn inversion_series_analytic(
    nbar: f64,
    t_scaled: &[f64],
    n_terms: usize,
) -> Result<TimeSeries, ObservableError> {
    let mut weights = Vec::with_capacity(n_terms);
    let mut w = (-nbar).exp();
    let mut total = 0.0;
    for n in 0..n_terms {
        weights.push(w);
        total += w;
        w *= nbar / (n + 1) as f64;
    }
    let tail = (1.0 - total).max(0.0);
    if tail > 1e-10 {
        return Err(ObservableError::SeriesTail { n_terms, tail });
    }
    let roots: Vec<f64> = (0..n_terms).map(|n| ((n + 1) as f64).sqrt()).collect();
    let values: Vec<f64> = t_scaled
        .iter()
        .map(|&t| weights.iter().zip(&roots).map(|(w, r)| w * (2.0 * t * r).cos()).sum())
        .collect();
    TimeSeries::new("inversion_series", t_scaled.to_vec(), values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{evolve_analytic, ModelParams};
    use crate::hilbert::{AtomState, CatSign};
    use approx::assert_abs_diff_eq;
    use nalgebra::DMatrix;

    fn coherent(nbar: f64, dim: usize) -> FieldState {
        FieldState::coherent(C64::new(nbar.sqrt(), 0.0), dim).unwrap()
    }

    #[test]
    fn inversion_of_product_states() {
        let field = coherent(2.0, 30);
        let up = JointState::tensor(&AtomState::excited(), &field);
        let down = JointState::tensor(&AtomState::ground(), &field);
        let half = JointState::tensor(&AtomState::superposition(std::f64::consts::FRAC_PI_2, 0.0), &field);
        assert_abs_diff_eq!(atomic_inversion(&up), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(atomic_inversion(&down), -1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(atomic_inversion(&half), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn inversion_at_half_rabi_cycle() {
        // evolved |e,n⟩ at λt√(n+1) = π/2 is fully in |g,n+1⟩
        let params = ModelParams::resonant(1.0);
        let n = 3;
        let joint = JointState::tensor(&AtomState::excited(), &FieldState::fock(n, 8).unwrap());
        let t = std::f64::consts::FRAC_PI_2 / ((n as f64 + 1.0).sqrt());
        let evolved = evolve_analytic(&joint, &params, t).unwrap();
        assert_abs_diff_eq!(atomic_inversion(&evolved), -1.0, epsilon = 1e-12);
    }

    #[test]
    fn series_trivial_values() {
        let ts = inversion_series_analytic(0.0, &[0.0, 0.3, 1.1], 4).unwrap();
        // vacuum: single n=0 term, W(T) = cos 2T
        for (t, v) in ts.times().iter().zip(ts.values()) {
            assert_abs_diff_eq!(*v, (2.0 * t).cos(), epsilon = 1e-12);
        }
        let ts = inversion_series_analytic(15.0, &[0.0], 120).unwrap();
        assert_abs_diff_eq!(ts.values()[0], 1.0, epsilon = 1e-10);
    }

    #[test]
    fn series_rejects_short_sums() {
        assert!(matches!(
            inversion_series_analytic(15.0, &[0.0], 10),
            Err(ObservableError::SeriesTail { .. })
        ));
    }

    #[test]
    fn series_matches_propagation() {
        // independent oracle: direct Poisson-weighted summation vs dressed
        // propagation of |α, e⟩, n̄ = 15
        let nbar = 15.0;
        let dim = crate::hilbert::default_truncation(nbar);
        let joint = JointState::tensor(&AtomState::excited(), &coherent(nbar, dim));
        let params = ModelParams::resonant(1.0);
        let times: Vec<f64> = (0..500).map(|k| k as f64 * 0.1).collect();
        let series = inversion_series_analytic(nbar, &times, 150).unwrap();
        let mut max_err = 0.0_f64;
        for (&t, &w_ref) in times.iter().zip(series.values()) {
            let w = atomic_inversion(&evolve_analytic(&joint, &params, t).unwrap());
            max_err = max_err.max((w - w_ref).abs());
        }
        assert!(max_err < 1e-8, "series vs propagation max err {max_err}");
    }

    #[test]
    fn squeezing_reference_states() {
        let vac = FieldState::fock(0, 8).unwrap();
        let (s1, s2) = quadrature_squeezing(&vac);
        assert_abs_diff_eq!(s1, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(s2, 0.0, epsilon = 1e-12);

        let coh = coherent(15.0, 64);
        let (s1, s2) = quadrature_squeezing(&coh);
        assert_abs_diff_eq!(s1, 0.0, epsilon = 1e-8);
        assert_abs_diff_eq!(s2, 0.0, epsilon = 1e-8);

        // Fock n=1: ⟨X²⟩ = (2n+1)/4 in both quadratures
        let one = FieldState::fock(1, 8).unwrap();
        let (s1, s2) = quadrature_squeezing(&one);
        assert_abs_diff_eq!(s1, 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(s2, 0.5, epsilon = 1e-12);
    }

    #[test]
    fn squeezing_matches_dense_matrix_route() {
        // brute-force oracle: build X₁, X₂ as dense matrices and take
        // expectations the long way
        let state = FieldState::cat(C64::new(1.3, 0.4), CatSign::Plus, 40).unwrap();
        let dim = state.dim();
        let (a, adag) = crate::hilbert::ladder_operators(dim);
        let half = C64::new(0.5, 0.0);
        let i_half = C64::new(0.0, 0.5);
        let x1 = &(&a + &adag) * half;
        let x2 = &(&a - &adag) * i_half;
        let expect = |op: &crate::hilbert::Operator| op.expectation(&state).re;
        let s1_ref = expect(&(&x1 * &x1)) - expect(&x1).powi(2) - 0.25;
        let s2_ref = expect(&(&x2 * &x2)) - expect(&x2).powi(2) - 0.25;
        let (s1, s2) = quadrature_squeezing(&state);
        assert_abs_diff_eq!(s1, s1_ref, epsilon = 1e-12);
        assert_abs_diff_eq!(s2, s2_ref, epsilon = 1e-12);
    }

    #[test]
    fn mandel_q_reference_states() {
        let coh = coherent(9.0, 60);
        assert_abs_diff_eq!(mandel_q(&coh).unwrap(), 0.0, epsilon = 1e-8);

        let five = FieldState::fock(5, 10).unwrap();
        assert_abs_diff_eq!(mandel_q(&five).unwrap(), -1.0, epsilon = 1e-12);

        let vac = FieldState::fock(0, 4).unwrap();
        assert!(matches!(mandel_q(&vac), Err(ObservableError::VacuumMandelQ { .. })));
    }

    #[test]
    fn mandel_q_geometric_distribution() {
        // diagonal state P(n) ∝ xⁿ with x = ½ has ⟨n⟩ = x/(1−x) = 1 and
        // Q = n̄ = 1; oracle by brute-force moments of the truncated
        // distribution (dim 60 leaves a ~1e-18 tail)
        let dim = 60;
        let x: f64 = 0.5;
        let mut m = DMatrix::zeros(dim, dim);
        let norm: f64 = (0..dim).map(|n| x.powi(n as i32)).sum();
        for n in 0..dim {
            m[(n, n)] = C64::new(x.powi(n as i32) / norm, 0.0);
        }
        let rho = DensityMatrix::from_matrix(m).unwrap();
        let q = mandel_q(&rho).unwrap();
        let brute: (f64, f64) = (0..dim).fold((0.0, 0.0), |(m1, m2), n| {
            let p = x.powi(n as i32) / norm;
            (m1 + n as f64 * p, m2 + (n as f64).powi(2) * p)
        });
        let q_ref = (brute.1 - brute.0 * brute.0) / brute.0 - 1.0;
        assert_abs_diff_eq!(q, q_ref, epsilon = 1e-12);
        assert_abs_diff_eq!(q, 1.0, epsilon = 1e-9);
    }

    #[test]
    fn parity_reference_states() {
        let plus = FieldState::cat(C64::new(2.0, 0.0), CatSign::Plus, 30).unwrap();
        let minus = FieldState::cat(C64::new(2.0, 0.0), CatSign::Minus, 30).unwrap();
        assert_abs_diff_eq!(parity_expectation(&plus), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(parity_expectation(&minus), -1.0, epsilon = 1e-12);

        // coherent state: ⟨Π⟩ = e^{−2|α|²}, verified against brute-force
        // signed summation
        let alpha = C64::new(1.3, 0.0);
        let coh = FieldState::coherent(alpha, 40).unwrap();
        let closed = (-2.0 * alpha.norm_sqr()).exp();
        let brute: f64 = (0..40)
            .map(|n| {
                let p = coh.amplitude(n).norm_sqr();
                if n % 2 == 0 { p } else { -p }
            })
            .sum();
        assert_abs_diff_eq!(parity_expectation(&coh), closed, epsilon = 1e-10);
        assert_abs_diff_eq!(parity_expectation(&coh), brute, epsilon = 1e-14);
    }

    #[test]
    fn photon_distribution_matches_poisson() {
        let nbar = 15.0;
        let s = coherent(nbar, 90);
        let dist = photon_distribution(&s);
        assert_abs_diff_eq!(dist.iter().sum::<f64>(), 1.0, epsilon = 1e-10);
        // termwise against the Poisson weights by stable recurrence
        let mut w = (-nbar).exp();
        for (n, p) in dist.iter().enumerate().take(60) {
            assert_abs_diff_eq!(*p, w, epsilon = 1e-10);
            w *= nbar / (n + 1) as f64;
        }
    }

    #[test]
    fn reduced_states_of_product_and_bell() {
        let product = JointState::tensor(&AtomState::excited(), &FieldState::fock(0, 2).unwrap());
        let atom = reduced_atom(&product);
        assert_abs_diff_eq!(atom.matrix()[(0, 0)].re, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(atom.matrix()[(1, 1)].re, 1.0, epsilon = 1e-12);

        // (|g,0⟩ + |e,1⟩)/√2: reduced field is diag(½, ½, 0, …)
        let dim = 4;
        let mut amps = nalgebra::DVector::zeros(2 * dim);
        amps[0] = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        amps[dim + 1] = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let bell = JointState::from_amplitudes(dim, amps).unwrap();
        let field = reduced_field(&bell);
        assert_abs_diff_eq!(field.matrix()[(0, 0)].re, 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(field.matrix()[(1, 1)].re, 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(field.matrix()[(0, 1)].norm(), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(field.trace().re, 1.0, epsilon = 1e-12);

        assert_abs_diff_eq!(entanglement_entropy(&bell), std::f64::consts::LN_2, epsilon = 1e-10);
    }

    #[test]
    fn entropy_of_product_state_is_zero() {
        let joint = JointState::tensor(&AtomState::excited(), &coherent(4.0, 40));
        assert_abs_diff_eq!(entanglement_entropy(&joint), 0.0, epsilon = 1e-10);
    }

    #[test]
    fn observables_agree_between_pure_and_density_paths() {
        let state = FieldState::cat(C64::new(1.7, 0.2), CatSign::Minus, 40).unwrap();
        let rho = DensityMatrix::from_pure_field(&state);
        assert_abs_diff_eq!(
            parity_expectation(&state),
            parity_expectation(&rho),
            epsilon = 1e-10
        );
        assert_abs_diff_eq!(mandel_q(&state).unwrap(), mandel_q(&rho).unwrap(), epsilon = 1e-10);
        let (a1, a2) = quadrature_squeezing(&state);
        let (b1, b2) = quadrature_squeezing(&rho);
        assert_abs_diff_eq!(a1, b1, epsilon = 1e-10);
        assert_abs_diff_eq!(a2, b2, epsilon = 1e-10);
        assert_abs_diff_eq!(
            mean_photon_number(&state),
            mean_photon_number(&rho),
            epsilon = 1e-10
        );
    }
}
