//! Rates as a sum over the photon modes on the resonant shell |k| = ω₀/c:
//!
//! γ_ab/γ₀ = (3/8π) ∫dΩ (1 − k̂_j²) cos(k·Δ_direct)
//!           − s_j (3/8π) ∫dΩ (1 − k̂_j²) cos(k·Δ_image),
//!
//! with s_j the mirror reflection sign of the dipole component and Δ_image
//! the displacement from atom a to the mirror image of atom b.

use std::f64::consts::PI;

use super::quadrature::GaussLegendre;
use super::QuadratureParams;
use crate::correlators::Pair;
use crate::error::{Error, Result};
use crate::params::{GeometryConfig, PolarizationAxis};

/// Product rule on the unit sphere: Gauss–Legendre in cos θ, uniform in φ.
#[derive(Debug, Clone)]
pub struct SphereRule {
    polar: GaussLegendre,
    n_phi: usize,
}

impl SphereRule {
    pub fn new(n_theta: usize, n_phi: usize) -> Self {
        SphereRule {
            polar: GaussLegendre::new(n_theta),
            n_phi,
        }
    }

    /// (3/8π) ∫dΩ (1 − k̂_j²) cos(k̂·d).
    pub fn kernel(&self, component: PolarizationAxis, d: [f64; 3]) -> f64 {
        let j = component.index();
        let dphi = 2.0 * PI / self.n_phi as f64;
        let mut total = 0.0;
        for (&u, &w) in self.polar.nodes().iter().zip(self.polar.weights()) {
            let sin_theta = (1.0 - u * u).sqrt();
            let mut ring = 0.0;
            for k in 0..self.n_phi {
                let (sp, cp) = (k as f64 * dphi).sin_cos();
                let khat = [sin_theta * cp, sin_theta * sp, u];
                let phase = khat[0] * d[0] + khat[1] * d[1] + khat[2] * d[2];
                ring += (1.0 - khat[j] * khat[j]) * phase.cos();
            }
            total += w * ring;
        }
        total * dphi * 3.0 / (8.0 * PI)
    }
}

/// Displacements (direct, image) from atom a to atom b and to b's image.
pub(crate) fn displacements(pair: Pair, geometry: &GeometryConfig) -> ([f64; 3], Option<[f64; 3]>) {
    let r = match pair {
        Pair::Same => 0.0,
        Pair::Cross => geometry.separation(),
    };
    let image = geometry.boundary().z().map(|z| [r, 0.0, z]);
    ([r, 0.0, 0.0], image)
}

/// Mode sum with an explicit angular order.
pub fn modesum_with_order(
    pol: PolarizationAxis,
    pair: Pair,
    geometry: &GeometryConfig,
    n_theta: usize,
    n_phi: usize,
) -> f64 {
    let rule = SphereRule::new(n_theta, n_phi);
    let (direct, image) = displacements(pair, geometry);
    let mut value = rule.kernel(pol, direct);
    if let Some(d) = image {
        value -= pol.reflection_sign() * rule.kernel(pol, d);
    }
    value
}

/// γ_ab/γ₀ from the angular mode sum. The result is recomputed at twice
/// the angular order; a change above `rel_tol` is reported as insufficient
/// order.
pub fn modesum_rate(
    pol: PolarizationAxis,
    pair: Pair,
    geometry: &GeometryConfig,
    params: &QuadratureParams,
) -> Result<f64> {
    params.validate()?;
    let (nt, np) = params.angular_order;
    let coarse = modesum_with_order(pol, pair, geometry, nt, np);
    let fine = modesum_with_order(pol, pair, geometry, 2 * nt, 2 * np);
    let change = (fine - coarse).abs();
    let tol = params.rel_tol * fine.abs().max(1.0);
    if change > tol {
        return Err(Error::NonConvergence {
            what: format!("mode sum at angular order {nt}x{np}"),
            residual: change,
            tolerance: tol,
        });
    }
    Ok(coarse)
}
