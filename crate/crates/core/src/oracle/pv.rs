//! The dipole-dipole shift as a principal-value integral over frequency,
//!
//! V = −(1/2π) P∫ G₁₂(ω)/(ω − ω₀) dω,
//!
//! with G₁₂ continued to negative frequency as an odd function, so that on
//! the half-line the kernel becomes 2ω/(ω² − ω₀²). G₁₂(ω) grows like ω², so
//! the tail only converges in an averaged sense: it is damped by a regulator
//! e^{−(δω)²} or e^{−δω} and the result is extrapolated to δ → 0.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use super::extrapolate::extrapolate_to_zero;
use super::quadrature::GaussLegendre;
use super::QuadratureParams;
use crate::error::{Error, Result};
use crate::params::{GeometryConfig, PolarizationAxis};
use crate::rates;

/// Smallest separation accepted: the near-zone shift grows like 1/R³.
pub const MIN_SEPARATION: f64 = 1e-2;

const PANEL_NODES: usize = 16;

/// Damping applied to the conditionally convergent tail.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TailRegulator {
    /// e^{−(δω)²}, extrapolated in δ².
    Gaussian,
    /// e^{−δω}, extrapolated in δ.
    Abel,
}

impl TailRegulator {
    fn damping(self, delta: f64, omega: f64) -> f64 {
        match self {
            TailRegulator::Gaussian => (-(delta * omega).powi(2)).exp(),
            TailRegulator::Abel => (-delta * omega).exp(),
        }
    }

    fn step(self, delta: f64) -> f64 {
        match self {
            TailRegulator::Gaussian => delta * delta,
            TailRegulator::Abel => delta,
        }
    }

    /// Cutoff in units of 1/δ; the damping at half the cutoff is below 10⁻¹⁵.
    fn cutoff(self, delta: f64) -> f64 {
        match self {
            TailRegulator::Gaussian => 12.0 / delta,
            TailRegulator::Abel => 80.0 / delta,
        }
    }

    fn other(self) -> Self {
        match self {
            TailRegulator::Gaussian => TailRegulator::Abel,
            TailRegulator::Abel => TailRegulator::Gaussian,
        }
    }
}

/// Principal-value estimate of V/γ₀ with its diagnostics.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ShiftEstimate {
    pub value: f64,
    /// Change when the widest regulator is dropped from the extrapolation.
    pub residual: f64,
    /// |value − estimate with the other regulator|.
    pub regulator_spread: f64,
    /// Change of the narrowest-regulator integral when the cutoff is halved.
    pub cutoff_change: f64,
    pub converged: bool,
}

/// Emission spectrum G₁₂(ω)/γ₀(ω₀): the cross rate at frequency ω, which
/// carries the ω³ density of states.
fn spectrum(pol: PolarizationAxis, geometry: &GeometryConfig, omega: f64) -> f64 {
    let r = geometry.separation();
    let direct = match pol {
        PolarizationAxis::X => rates::longitudinal(omega * r).value,
        PolarizationAxis::Y | PolarizationAxis::Z => rates::transverse(omega * r).value,
    };
    let image = match geometry.boundary().z() {
        None => 0.0,
        Some(z) => {
            let rho = r.hypot(z);
            let s = match pol {
                PolarizationAxis::X => r * r / (rho * rho),
                PolarizationAxis::Y => 0.0,
                PolarizationAxis::Z => z * z / (rho * rho),
            };
            pol.reflection_sign() * rates::dyadic(omega * rho, s).value
        }
    };
    omega.powi(3) * (direct - image)
}

struct Node {
    omega: f64,
    weight: f64,
    /// G(ω)·2ω/(ω + 1).
    h: f64,
}

fn panel_nodes(rule: &GaussLegendre, a: f64, b: f64, n_panels: usize, out: &mut Vec<(f64, f64)>) {
    let width = (b - a) / n_panels as f64;
    for p in 0..n_panels {
        let lo = a + p as f64 * width;
        let c = lo + 0.5 * width;
        for (&x, &w) in rule.nodes().iter().zip(rule.weights()) {
            out.push((c + 0.5 * width * x, 0.5 * width * w));
        }
    }
}

/// V/γ₀ from the principal-value integral.
pub fn pv_shift(pol: PolarizationAxis, geometry: &GeometryConfig, params: &QuadratureParams) -> Result<ShiftEstimate> {
    params.validate()?;
    let r = geometry.separation();
    if r < MIN_SEPARATION {
        return Err(Error::OutOfDomain(format!(
            "separation {r} is below {MIN_SEPARATION}: the near-zone shift exceeds 1e6"
        )));
    }
    let d_max = r.hypot(geometry.boundary().z().unwrap_or(0.0));
    let width = 0.5_f64.min(PI / d_max);
    let rule = GaussLegendre::new(PANEL_NODES);

    let deltas = &params.regulator_sequence;
    let delta_min = *deltas.last().expect("validated non-empty");
    let omega_max = params.tail.cutoff(delta_min).max(params.tail.other().cutoff(delta_min));

    // [0, 2] is handled by subtraction at ω₀ = 1, the rest directly.
    let mut near = Vec::new();
    let n_near = 2 * (1.0 / width).ceil() as usize;
    panel_nodes(&rule, 0.0, 2.0, n_near, &mut near);
    let mut far = Vec::new();
    let n_far = ((omega_max - 2.0) / width).ceil() as usize;
    panel_nodes(&rule, 2.0, 2.0 + n_far as f64 * width, n_far, &mut far);

    let eval = |&(omega, weight): &(f64, f64)| Node {
        omega,
        weight,
        h: spectrum(pol, geometry, omega) * 2.0 * omega / (omega + 1.0),
    };
    let near: Vec<Node> = near.par_iter().map(eval).collect();
    let far: Vec<Node> = far.par_iter().map(eval).collect();
    let h1 = spectrum(pol, geometry, 1.0);

    let integral = |reg: TailRegulator, delta: f64, cutoff: f64| -> f64 {
        let h_at_1 = h1 * reg.damping(delta, 1.0);
        let mut total: f64 = near
            .iter()
            .map(|n| n.weight * (n.h * reg.damping(delta, n.omega) - h_at_1) / (n.omega - 1.0))
            .sum();
        total += far
            .iter()
            .take_while(|n| n.omega <= cutoff)
            .map(|n| n.weight * n.h * reg.damping(delta, n.omega) / (n.omega - 1.0))
            .sum::<f64>();
        -total / (2.0 * PI)
    };

    let estimate = |reg: TailRegulator| {
        let steps: Vec<f64> = deltas.iter().map(|&d| reg.step(d)).collect();
        let values: Vec<f64> = deltas.iter().map(|&d| integral(reg, d, reg.cutoff(delta_min))).collect();
        extrapolate_to_zero(&steps, &values)
    };

    let primary = estimate(params.tail);
    let secondary = estimate(params.tail.other());
    let cut = params.tail.cutoff(delta_min);
    let cutoff_change = (integral(params.tail, delta_min, cut) - integral(params.tail, delta_min, 0.5 * cut)).abs();

    let value = primary.value;
    let regulator_spread = (value - secondary.value).abs();
    let tol = params.shift_rel_tol * value.abs().max(params.abs_tol);
    let converged = primary.residual <= tol && regulator_spread <= tol && cutoff_change <= tol;
    Ok(ShiftEstimate {
        value,
        residual: primary.residual,
        regulator_spread,
        cutoff_change,
        converged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn free(r: f64) -> GeometryConfig {
        GeometryConfig::unbounded(r).unwrap()
    }

    #[test]
    fn matches_conjugate_closed_form() {
        let params = QuadratureParams::default();
        for r in [2.0, 5.0, 10.0] {
            let est = pv_shift(PolarizationAxis::X, &free(r), &params).unwrap();
            let closed = rates::dipole_shift(PolarizationAxis::X, r, free(r).boundary()).unwrap();
            assert!(est.converged);
            assert!(((est.value - closed) / closed).abs() < 1e-6, "R = {r}: {}", est.value);
        }
    }

    #[test]
    fn sign_and_size_at_r10() {
        let est = pv_shift(PolarizationAxis::X, &free(10.0), &QuadratureParams::default()).unwrap();
        assert!(est.value.abs() <= 0.15);
        assert!(est.value > 0.0);
    }

    #[test]
    fn far_separation_vanishes() {
        let est = pv_shift(PolarizationAxis::X, &free(1e3), &QuadratureParams::default()).unwrap();
        assert!(est.value.abs() < 1e-3, "{}", est.value);
    }

    #[test]
    fn regulator_choice_irrelevant_at_r2() {
        let params = QuadratureParams::default();
        let est = pv_shift(PolarizationAxis::X, &free(2.0), &params).unwrap();
        assert!(est.regulator_spread < params.rel_tol * est.value.abs());
        let abel = pv_shift(
            PolarizationAxis::X,
            &free(2.0),
            &QuadratureParams {
                tail: TailRegulator::Abel,
                ..params
            },
        )
        .unwrap();
        assert!((abel.value - est.value).abs() < 1e-5 * est.value.abs());
    }

    #[test]
    fn mirror_geometry_matches_closed_form() {
        let params = QuadratureParams::default();
        for pol in PolarizationAxis::ALL {
            let g = GeometryConfig::with_mirror(3.0, 2.0).unwrap();
            let est = pv_shift(pol, &g, &params).unwrap();
            let closed = rates::dipole_shift(pol, 3.0, g.boundary()).unwrap();
            assert!((est.value - closed).abs() < 1e-5 * closed.abs().max(1e-2), "{pol}: {} vs {closed}", est.value);
        }
    }

    #[test]
    fn tiny_separation_rejected() {
        let params = QuadratureParams::default();
        assert!(matches!(
            pv_shift(PolarizationAxis::X, &free(1e-3), &params),
            Err(Error::OutOfDomain(_))
        ));
    }
}
