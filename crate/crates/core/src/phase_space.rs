//! Quasi-probability representations of the field: Wigner and Husimi
//! distributions on a complex-plane grid, Wigner negativity, lobe tracking
//! for the bifurcation dynamics, and cat-state fidelities.
//!
//! The Wigner function uses the displaced-parity form
//! W(α) = (2/π) Tr[ρ D(α) Π D†(α)] = (2/π) Tr[ρ D(2α) Π], normalized so the
//! vacuum gives W(0,0) = 2/π. The matrix elements ⟨n|D(β)|m⟩ are generated
//! per grid point from the cached coherent-state column ⟨n|D(β)|0⟩ by the
//! exact recurrence
//!
//!   √(m+1)·d[n,m+1] = √n·d[n−1,m] − β̄·d[n,m],
//!
//! so the result is the exact Wigner function of the truncated state: no
//! basis enlargement is needed for displaced evaluation points.

use nalgebra::DVector;
use num_complex::Complex64 as C64;
use rayon::prelude::*;
use thiserror::Error;

use crate::dynamics::DensityMatrix;
use crate::hilbert::{coherent_column, CatSign, FieldState, HilbertError};
use crate::observables::FieldRef;

#[derive(Debug, Error)]
pub enum PhaseSpaceError {
    #[error("grid must have at least 2 points per axis, got {0}")]
    GridTooSmall(usize),
    #[error("grid extent must be positive and finite, got {0}")]
    BadExtent(f64),
    #[error(transparent)]
    Hilbert(#[from] HilbertError),
}

/// Square, uniform grid [−extent, extent]² in the complex plane.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    pub extent: f64,
    pub points: usize,
}

impl GridSpec {
    pub const DEFAULT_POINTS: usize = 121;

    pub fn new(extent: f64, points: usize) -> Result<Self, PhaseSpaceError> {
        if !(extent > 0.0 && extent.is_finite()) {
            return Err(PhaseSpaceError::BadExtent(extent));
        }
        if points < 2 {
            return Err(PhaseSpaceError::GridTooSmall(points));
        }
        Ok(Self { extent, points })
    }

    /// Default grid for a state of mean photon number n̄: 121×121 over
    /// [−6.5, 6.5]² up to n̄ = 9, extent √n̄ + 4 beyond.
    pub fn default_for(nbar: f64) -> Self {
        let extent = if nbar <= 9.0 { 6.5 } else { nbar.sqrt() + 4.0 };
        Self { extent, points: Self::DEFAULT_POINTS }
    }

    pub fn axis(&self) -> Vec<f64> {
        let n = self.points;
        let h = 2.0 * self.extent / (n - 1) as f64;
        (0..n).map(|k| -self.extent + k as f64 * h).collect()
    }

    pub fn step(&self) -> f64 {
        2.0 * self.extent / (self.points - 1) as f64
    }
}

/// Real-valued phase-space samples on a uniform grid.
///
/// `values` is indexed row-major by (re index, im index).
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseSpaceGrid {
    re_axis: Vec<f64>,
    im_axis: Vec<f64>,
    values: Vec<f64>,
    max_imag_residue: f64,
}

impl PhaseSpaceGrid {
    pub fn re_axis(&self) -> &[f64] {
        &self.re_axis
    }

    pub fn im_axis(&self) -> &[f64] {
        &self.im_axis
    }

    pub fn value(&self, i_re: usize, i_im: usize) -> f64 {
        self.values[i_re * self.im_axis.len() + i_im]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Largest imaginary residue discarded when taking the real part; of
    /// order rounding error for Hermitian input.
    pub fn max_imag_residue(&self) -> f64 {
        self.max_imag_residue
    }

    pub fn min_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Riemann-sum integral Σ v·dA over the grid.
    pub fn integral(&self) -> f64 {
        let h_re = self.re_axis[1] - self.re_axis[0];
        let h_im = self.im_axis[1] - self.im_axis[0];
        self.values.iter().sum::<f64>() * h_re * h_im
    }

    /// Location and value of the grid maximum.
    pub fn argmax(&self) -> (f64, f64, f64) {
        let mut best = (0, 0, f64::NEG_INFINITY);
        for i in 0..self.re_axis.len() {
            for j in 0..self.im_axis.len() {
                let v = self.value(i, j);
                if v > best.2 {
                    best = (i, j, v);
                }
            }
        }
        (self.re_axis[best.0], self.im_axis[best.1], best.2)
    }
}

/// Tr[ρ D(β) Π] evaluated through the column recurrence, for a pure state
/// (rank-1 shortcut) or a density matrix.
fn displaced_parity_trace(field: FieldRef<'_>, beta: C64) -> C64 {
    let dim = field.dim();
    let mut col = coherent_column(beta, dim);
    let mut next: DVector<C64> = DVector::zeros(dim);
    let beta_conj = beta.conj();
    let mut acc = C64::new(0.0, 0.0);
    for m in 0..dim {
        let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
        // contribution of column m: (−1)^m Σ_n ρ[m,n] d[n,m]
        let contrib = match field {
            FieldRef::Pure(s) => {
                // ρ[m,n] = ψ_m ψ̄_n
                let inner: C64 =
                    (0..dim).map(|n| s.amplitude(n).conj() * col[n]).sum();
                s.amplitude(m) * inner
            }
            FieldRef::Mixed(r) => {
                let mat = r.matrix();
                (0..dim).map(|n| mat[(m, n)] * col[n]).sum()
            }
        };
        acc += C64::new(sign, 0.0) * contrib;
        if m + 1 < dim {
            // advance: d[n,m+1] = (√n·d[n−1,m] − β̄·d[n,m]) / √(m+1)
            let root_m1 = ((m + 1) as f64).sqrt();
            next[0] = -beta_conj * col[0] / C64::new(root_m1, 0.0);
            for n in 1..dim {
                next[n] = (C64::new((n as f64).sqrt(), 0.0) * col[n - 1] - beta_conj * col[n])
                    / C64::new(root_m1, 0.0);
            }
            std::mem::swap(&mut col, &mut next);
        }
    }
    acc
}

fn evaluate_grid<F>(spec: &GridSpec, f: F) -> PhaseSpaceGrid
where
    F: Fn(C64) -> C64 + Sync,
{
    let axis = spec.axis();
    let rows: Vec<(Vec<f64>, f64)> = axis
        .par_iter()
        .map(|&re| {
            let mut row = Vec::with_capacity(axis.len());
            let mut residue = 0.0_f64;
            for &im in &axis {
                let v = f(C64::new(re, im));
                residue = residue.max(v.im.abs());
                row.push(v.re);
            }
            (row, residue)
        })
        .collect();
    let mut values = Vec::with_capacity(axis.len() * axis.len());
    let mut max_imag_residue = 0.0_f64;
    for (row, residue) in rows {
        values.extend(row);
        max_imag_residue = max_imag_residue.max(residue);
    }
    PhaseSpaceGrid { re_axis: axis.clone(), im_axis: axis, values, max_imag_residue }
}

/// Wigner function W(α) = (2/π) Tr[ρ D(2α) Π] on the grid.
pub fn wigner<'a>(field: impl Into<FieldRef<'a>>, spec: &GridSpec) -> PhaseSpaceGrid {
    let field = field.into();
    let scale = 2.0 / std::f64::consts::PI;
    evaluate_grid(spec, |alpha| {
        displaced_parity_trace(field, alpha * C64::new(2.0, 0.0)) * C64::new(scale, 0.0)
    })
}

/// Wigner value at a single point.
pub fn wigner_at<'a>(field: impl Into<FieldRef<'a>>, alpha: C64) -> f64 {
    let v = displaced_parity_trace(field.into(), alpha * C64::new(2.0, 0.0));
    2.0 / std::f64::consts::PI * v.re
}

/// Husimi function Q(α) = ⟨α|ρ|α⟩/π on the grid; nonnegative.
pub fn husimi_q<'a>(field: impl Into<FieldRef<'a>>, spec: &GridSpec) -> PhaseSpaceGrid {
    let field = field.into();
    let dim = field.dim();
    let scale = 1.0 / std::f64::consts::PI;
    evaluate_grid(spec, |alpha| {
        let col = coherent_column(alpha, dim);
        let v = match field {
            FieldRef::Pure(s) => {
                let overlap = col.dotc(s.amplitudes());
                C64::new(overlap.norm_sqr(), 0.0)
            }
            FieldRef::Mixed(r) => col.dotc(&(r.matrix() * &col)),
        };
        v * C64::new(scale, 0.0)
    })
}

/// Riemann sum of |min(W, 0)| over the grid: zero for Gaussian states,
/// strictly positive in the presence of interference fringes.
pub fn wigner_negativity(grid: &PhaseSpaceGrid) -> f64 {
    let h_re = grid.re_axis[1] - grid.re_axis[0];
    let h_im = grid.im_axis[1] - grid.im_axis[0];
    grid.values.iter().map(|&v| if v < 0.0 { -v } else { 0.0 }).sum::<f64>() * h_re * h_im
}

/// Parameters of the local-maximum scan used for lobe tracking.
#[derive(Debug, Clone)]
pub struct LobeOptions {
    /// A local maximum must reach this fraction of the global maximum.
    pub rel_threshold: f64,
    /// Maxima closer than this (in quadrature units) merge into one lobe.
    pub merge_radius: f64,
}

impl Default for LobeOptions {
    fn default() -> Self {
        Self { rel_threshold: 0.2, merge_radius: 0.5 }
    }
}

/// Dominant lobes of a Husimi surface at one instant.
#[derive(Debug, Clone)]
pub struct LobeReport {
    /// (re, im, height), strongest first, after merging.
    pub maxima: Vec<(f64, f64, f64)>,
    /// Angular separation of the two dominant lobes, in [0, π]; `None` when
    /// fewer than two maxima resolve (single-lobe flag).
    pub separation: Option<f64>,
}

impl LobeReport {
    pub fn single_lobe(&self) -> bool {
        self.separation.is_none()
    }
}

/// Scan a (Husimi) grid for dominant local maxima. The Husimi surface is
/// used rather than the Wigner surface so interference fringes cannot
/// masquerade as lobes.
pub fn find_lobes(grid: &PhaseSpaceGrid, opts: &LobeOptions) -> LobeReport {
    let nr = grid.re_axis.len();
    let ni = grid.im_axis.len();
    let global_max = grid.max_value();
    let floor = opts.rel_threshold * global_max;
    let mut candidates: Vec<(f64, f64, f64)> = Vec::new();
    for i in 1..nr - 1 {
        for j in 1..ni - 1 {
            let v = grid.value(i, j);
            if v < floor {
                continue;
            }
            let mut is_max = true;
            'scan: for di in -1i64..=1 {
                for dj in -1i64..=1 {
                    if di == 0 && dj == 0 {
                        continue;
                    }
                    let w = grid.value((i as i64 + di) as usize, (j as i64 + dj) as usize);
                    if w > v {
                        is_max = false;
                        break 'scan;
                    }
                }
            }
            if is_max {
                candidates.push((grid.re_axis[i], grid.im_axis[j], v));
            }
        }
    }
    candidates.sort_by(|a, b| b.2.total_cmp(&a.2));
    let mut maxima: Vec<(f64, f64, f64)> = Vec::new();
    for (x, y, v) in candidates {
        let distinct = maxima
            .iter()
            .all(|(px, py, _)| (x - px).powi(2) + (y - py).powi(2) > opts.merge_radius.powi(2));
        if distinct {
            maxima.push((x, y, v));
        }
    }
    let separation = if maxima.len() >= 2 {
        let a0 = maxima[0].1.atan2(maxima[0].0);
        let a1 = maxima[1].1.atan2(maxima[1].0);
        let d = (a0 - a1).rem_euclid(2.0 * std::f64::consts::PI);
        Some(d.min(2.0 * std::f64::consts::PI - d))
    } else {
        None
    };
    LobeReport { maxima, separation }
}

/// Track the counter-rotating lobes of a reduced-field trajectory: one
/// Husimi surface and lobe report per sample.
pub fn bifurcation_track(
    trajectory: &[DensityMatrix],
    spec: &GridSpec,
    opts: &LobeOptions,
) -> Vec<LobeReport> {
    trajectory
        .iter()
        .map(|rho| find_lobes(&husimi_q(rho, spec), opts))
        .collect()
}

/// Fidelity ⟨φ|ρ|φ⟩ (or |⟨φ|ψ⟩|² for pure input) against a pure reference.
pub fn state_fidelity<'a>(field: impl Into<FieldRef<'a>>, reference: &FieldState) -> f64 {
    match field.into() {
        FieldRef::Pure(s) => s.inner(reference).norm_sqr(),
        FieldRef::Mixed(r) => {
            let v = reference.amplitudes();
            v.dotc(&(r.matrix() * v)).re
        }
    }
}

/// Fidelity against the normalized cat state ∝ |β⟩ + sign·|−β⟩.
pub fn cat_fidelity<'a>(
    field: impl Into<FieldRef<'a>>,
    beta: C64,
    sign: CatSign,
) -> Result<f64, PhaseSpaceError> {
    let field = field.into();
    let cat = FieldState::cat(beta, sign, field.dim())?;
    Ok(state_fidelity(field, &cat))
}
