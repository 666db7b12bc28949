//! Wigner–Weisskopf evolution of the single-excitation sector and the
//! entanglement measures of the resulting two-atom state.
//!
//! Times are in units of 1/γ₀.

use std::io::Write;

use nalgebra::{Matrix4, Vector4};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::params::InitialState;
use crate::rates::RateSet;

/// Entry-wise tolerance for the density-matrix invariants.
pub const MATRIX_TOLERANCE: f64 = 1e-12;
/// Eigenvalues of ρρ̃ beyond this are input errors rather than noise.
pub const SPECTRUM_TOLERANCE: f64 = 1e-10;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// c₁|e₁g₂⟩|0⟩ + c₂|g₁e₂⟩|0⟩ + (photon part) at time t.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingleExcitationState {
    b1: Complex64,
    b2: Complex64,
    t: f64,
}

impl SingleExcitationState {
    pub fn new(b1: Complex64, b2: Complex64, t: f64) -> Result<Self> {
        let pop = b1.norm_sqr() + b2.norm_sqr();
        if pop.is_nan() || pop > 1.0 + MATRIX_TOLERANCE {
            return Err(Error::InvalidState(format!("atomic population {pop} exceeds 1")));
        }
        if !(t >= 0.0 && t.is_finite()) {
            return Err(Error::invalid("t", t, "time must be non-negative"));
        }
        Ok(SingleExcitationState { b1, b2, t })
    }

    pub fn b1(&self) -> Complex64 {
        self.b1
    }

    pub fn b2(&self) -> Complex64 {
        self.b2
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    /// Probability that the excitation has gone into the field.
    pub fn p_photon(&self) -> f64 {
        1.0 - self.b1.norm_sqr() - self.b2.norm_sqr()
    }
}

/// Amplitudes at time t. The symmetric and antisymmetric combinations decay
/// independently with Γ₊ and Γ₋ and are shifted by +V and −V.
pub fn evolve(initial: &InitialState, rates: &RateSet, t: f64) -> Result<SingleExcitationState> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::invalid("t", t, "time must be non-negative"));
    }
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let v = rates.v_shift().unwrap_or(0.0);
    let plus = (initial.c_eg() + initial.c_ge()) * s;
    let minus = (initial.c_ge() - initial.c_eg()) * s;
    let plus = plus * Complex64::new(-0.5 * rates.gamma_plus() * t, -v * t).exp();
    let minus = minus * Complex64::new(-0.5 * rates.gamma_minus() * t, v * t).exp();
    SingleExcitationState::new((plus - minus) * s, (plus + minus) * s, t)
}

/// Two-atom density matrix in the basis |e₁e₂⟩, |e₁g₂⟩, |g₁e₂⟩, |g₁g₂⟩.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoAtomDensityMatrix(Matrix4<Complex64>);

impl TwoAtomDensityMatrix {
    /// Checks Hermiticity, unit trace and positivity.
    pub fn new(m: Matrix4<Complex64>) -> Result<Self> {
        let herm = (m - m.adjoint()).camax();
        if herm > MATRIX_TOLERANCE {
            return Err(Error::InvalidDensityMatrix(format!("not Hermitian (deviation {herm:.3e})")));
        }
        let tr = m.trace();
        if (tr - 1.0).norm() > MATRIX_TOLERANCE {
            return Err(Error::InvalidDensityMatrix(format!("trace {tr} differs from 1")));
        }
        let rho = TwoAtomDensityMatrix(m);
        let min = rho.eigenvalues().iter().copied().fold(f64::INFINITY, f64::min);
        if min < -MATRIX_TOLERANCE {
            return Err(Error::InvalidDensityMatrix(format!("negative eigenvalue {min:.3e}")));
        }
        Ok(rho)
    }

    /// |ψ⟩⟨ψ| for a normalized vector.
    pub fn pure(psi: [Complex64; 4]) -> Result<Self> {
        let v = Vector4::from(psi);
        Self::new(v * v.adjoint())
    }

    /// p|ψ⁻⟩⟨ψ⁻| + (1 − p)·I/4.
    pub fn werner(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::invalid("p", p, "mixing weight must lie in [0, 1]"));
        }
        let s = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let psi = Vector4::new(ZERO, -s, s, ZERO);
        let m = psi * psi.adjoint() * Complex64::from(p) + Matrix4::identity() * Complex64::from((1.0 - p) / 4.0);
        Self::new(m)
    }

    pub fn matrix(&self) -> &Matrix4<Complex64> {
        &self.0
    }

    pub fn trace(&self) -> Complex64 {
        self.0.trace()
    }

    /// max |ρ − ρ†|.
    pub fn hermiticity_error(&self) -> f64 {
        (self.0 - self.0.adjoint()).camax()
    }

    /// Eigenvalues of ρ in ascending order.
    pub fn eigenvalues(&self) -> [f64; 4] {
        let mut ev: [f64; 4] = self.0.symmetric_eigenvalues().into();
        ev.sort_by(f64::total_cmp);
        ev
    }
}

/// ρ for a single-excitation state; the excitation lost to the field leaves
/// the atoms in |g₁g₂⟩.
pub fn density_matrix(state: &SingleExcitationState) -> TwoAtomDensityMatrix {
    let mut m = Matrix4::zeros();
    m[(1, 1)] = Complex64::from(state.b1.norm_sqr());
    m[(2, 2)] = Complex64::from(state.b2.norm_sqr());
    m[(1, 2)] = state.b1 * state.b2.conj();
    m[(2, 1)] = m[(1, 2)].conj();
    m[(3, 3)] = Complex64::from(state.p_photon());
    TwoAtomDensityMatrix(m)
}

/// σ_y ⊗ σ_y.
fn spin_flip() -> Matrix4<Complex64> {
    let one = Complex64::from(1.0);
    let mut m = Matrix4::zeros();
    m[(0, 3)] = -one;
    m[(1, 2)] = one;
    m[(2, 1)] = one;
    m[(3, 0)] = -one;
    m
}

/// ρ̃ = (σ_y⊗σ_y) ρ* (σ_y⊗σ_y).
pub fn spin_flipped(rho: &TwoAtomDensityMatrix) -> Matrix4<Complex64> {
    let f = spin_flip();
    f * rho.0.conjugate() * f
}

/// Eigenvalues of ρρ̃ in descending order, with round-off below
/// [`SPECTRUM_TOLERANCE`] cleaned to real non-negative values.
pub fn rho_rho_tilde_eigenvalues(rho: &TwoAtomDensityMatrix) -> Result<[f64; 4]> {
    let product = rho.0 * spin_flipped(rho);
    let ev = product
        .eigenvalues()
        .ok_or_else(|| Error::InvalidDensityMatrix("Schur decomposition of ρρ̃ failed".into()))?;
    let mut out = [0.0; 4];
    for (slot, z) in out.iter_mut().zip(ev.iter()) {
        if z.re < -SPECTRUM_TOLERANCE || z.im.abs() > SPECTRUM_TOLERANCE {
            return Err(Error::InvalidDensityMatrix(format!("ρρ̃ has eigenvalue {z}")));
        }
        *slot = z.re.max(0.0);
    }
    out.sort_by(|a, b| b.total_cmp(a));
    Ok(out)
}

/// Wootters concurrence max(0, √λ₁ − √λ₂ − √λ₃ − √λ₄).
///
/// The √λᵢ are taken as the singular values of Ψᵀ(σ_y⊗σ_y)Ψ with ρ = ΨΨ†,
/// which equals the square roots of the spectrum of ρρ̃ but does not lose
/// half the digits to the square root near zero. The spectrum of ρρ̃ itself
/// is still computed to reject invalid input.
pub fn concurrence_wootters(rho: &TwoAtomDensityMatrix) -> Result<f64> {
    rho_rho_tilde_eigenvalues(rho)?;
    let eig = rho.0.symmetric_eigen();
    let mut psi = eig.eigenvectors;
    for (k, &lambda) in eig.eigenvalues.iter().enumerate() {
        if lambda < -SPECTRUM_TOLERANCE {
            return Err(Error::InvalidDensityMatrix(format!("negative eigenvalue {lambda:.3e}")));
        }
        psi.column_mut(k).scale_mut(lambda.max(0.0).sqrt());
    }
    let tau = psi.transpose() * spin_flip() * psi;
    let mut sv: [f64; 4] = tau.singular_values().into();
    sv.sort_by(|a, b| b.total_cmp(a));
    Ok((sv[0] - sv[1] - sv[2] - sv[3]).clamp(0.0, 1.0))
}

/// Concurrence of the X-shaped single-excitation state, 2|b₁b₂*|, clamped
/// to 1 against rounding.
pub fn concurrence_xstate(state: &SingleExcitationState) -> f64 {
    (2.0 * (state.b1 * state.b2.conj()).norm()).min(1.0)
}

/// l₁ coherence: Σ_{i≠j} |ρ_ij|.
pub fn l1_coherence(rho: &TwoAtomDensityMatrix) -> f64 {
    let mut sum = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            if i != j {
                sum += rho.0[(i, j)].norm();
            }
        }
    }
    sum
}

fn check_grid(t_grid: &[f64]) -> Result<()> {
    if let Some(&bad) = t_grid.iter().find(|t| !(**t >= 0.0 && t.is_finite())) {
        return Err(Error::invalid("t", bad, "times must be non-negative"));
    }
    if let Some(w) = t_grid.windows(2).find(|w| w[1] < w[0]) {
        return Err(Error::invalid("t", w[1], "time grid must be ascending"));
    }
    Ok(())
}

/// (t, C(t)) along an ascending time grid.
pub fn concurrence_series(initial: &InitialState, rates: &RateSet, t_grid: &[f64]) -> Result<Vec<(f64, f64)>> {
    check_grid(t_grid)?;
    t_grid
        .par_iter()
        .map(|&t| evolve(initial, rates, t).map(|s| (t, concurrence_xstate(&s))))
        .collect()
}

/// One line of the dynamics time series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DynamicsRow {
    pub state: SingleExcitationState,
    pub concurrence: f64,
    pub l1_coherence: f64,
}

pub fn time_series(initial: &InitialState, rates: &RateSet, t_grid: &[f64]) -> Result<Vec<DynamicsRow>> {
    check_grid(t_grid)?;
    t_grid
        .par_iter()
        .map(|&t| {
            let state = evolve(initial, rates, t)?;
            let rho = density_matrix(&state);
            Ok(DynamicsRow {
                state,
                concurrence: concurrence_xstate(&state),
                l1_coherence: l1_coherence(&rho),
            })
        })
        .collect()
}

/// Uniform grid of `steps` intervals on [0, t_max].
pub fn uniform_grid(t_max: f64, steps: usize) -> Result<Vec<f64>> {
    if !(t_max > 0.0 && t_max.is_finite()) {
        return Err(Error::invalid("tmax", t_max, "must be positive"));
    }
    if steps == 0 {
        return Err(Error::invalid("steps", 0.0, "must be at least 1"));
    }
    Ok((0..=steps).map(|k| t_max * k as f64 / steps as f64).collect())
}

pub const CSV_HEADER: &str = "t,re_b1,im_b1,re_b2,im_b2,p_photon,concurrence,l1_coherence";

pub fn write_csv<W: Write>(rows: &[DynamicsRow], mut out: W) -> std::io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in rows {
        let s = &r.state;
        writeln!(
            out,
            "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
            s.t, s.b1.re, s.b1.im, s.b2.re, s.b2.im, s.p_photon(), r.concurrence, r.l1_coherence
        )?;
    }
    Ok(())
}
