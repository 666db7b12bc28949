//! Independent numerical checks of the closed-form rates and shift.

pub mod extrapolate;
pub mod ft;
pub mod modesum;
pub mod pv;
pub mod quadrature;
pub mod validation;

use serde::Serialize;

use crate::error::{Error, Result};

pub use ft::{ft_rate, ft_rate_diagnostics, ft_raw};
pub use modesum::modesum_rate;
pub use pv::{pv_shift, ShiftEstimate, TailRegulator};
pub use validation::{run_validation, ValidationRecord, ValidationReport};

/// Numerical settings shared by the oracles.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureParams {
    /// Regulators ε (1/ω₀) for the time-domain transform, strictly decreasing.
    pub epsilon_sequence: Vec<f64>,
    /// Time horizon (1/ω₀).
    pub t_max: f64,
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// (polar, azimuthal) nodes of the sphere rule.
    pub angular_order: (usize, usize),
    /// Tail regulator widths δ for the principal-value integral, strictly decreasing.
    pub regulator_sequence: Vec<f64>,
    /// Regulator whose extrapolant is reported; the other is the cross-check.
    pub tail: TailRegulator,
    /// Relative tolerance for the principal-value shift.
    pub shift_rel_tol: f64,
}

impl Default for QuadratureParams {
    fn default() -> Self {
        QuadratureParams {
            epsilon_sequence: vec![1e-3, 5e-4, 2.5e-4],
            t_max: 200.0,
            abs_tol: 1e-6,
            rel_tol: 1e-5,
            angular_order: (64, 128),
            regulator_sequence: vec![0.2, 0.1, 0.05, 0.025],
            tail: TailRegulator::Gaussian,
            shift_rel_tol: 1e-3,
        }
    }
}

fn strictly_decreasing_positive(name: &'static str, seq: &[f64]) -> Result<()> {
    if seq.len() < 2 {
        return Err(Error::invalid(name, seq.len() as f64, "needs at least two entries"));
    }
    if let Some(&bad) = seq.iter().find(|x| !(x.is_finite() && **x > 0.0)) {
        return Err(Error::invalid(name, bad, "entries must be positive"));
    }
    if let Some(w) = seq.windows(2).find(|w| w[1] >= w[0]) {
        return Err(Error::invalid(name, w[1], "must be strictly decreasing"));
    }
    Ok(())
}

impl QuadratureParams {
    pub fn validate(&self) -> Result<()> {
        strictly_decreasing_positive("epsilon_sequence", &self.epsilon_sequence)?;
        strictly_decreasing_positive("regulator_sequence", &self.regulator_sequence)?;
        for (name, v) in [
            ("t_max", self.t_max),
            ("abs_tol", self.abs_tol),
            ("rel_tol", self.rel_tol),
            ("shift_rel_tol", self.shift_rel_tol),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::invalid(name, v, "must be positive"));
            }
        }
        let (nt, np) = self.angular_order;
        if nt == 0 || np == 0 {
            return Err(Error::invalid("angular_order", 0.0, "must be positive"));
        }
        Ok(())
    }
}

/// An oracle estimate with its convergence diagnostics.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleValue {
    pub value: f64,
    /// Change when the largest regulator is dropped from the extrapolation.
    pub residual: f64,
    pub empirical_orders: Vec<f64>,
    pub tail_bound: f64,
    pub quad_error: f64,
    /// Largest |Im| seen before extrapolation; zero for an exact integrator.
    pub imaginary_part: f64,
    pub converged: bool,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_params_valid() {
        QuadratureParams::default().validate().unwrap();
    }

    #[test]
    fn rejects_bad_sequences() {
        let p = QuadratureParams {
            epsilon_sequence: vec![1e-3, 1e-3],
            ..QuadratureParams::default()
        };
        assert!(p.validate().is_err());
        let p = QuadratureParams {
            epsilon_sequence: vec![1e-3, -1e-4],
            ..QuadratureParams::default()
        };
        assert!(p.validate().is_err());
        let p = QuadratureParams {
            t_max: 0.0,
            ..QuadratureParams::default()
        };
        assert!(p.validate().is_err());
        let p = QuadratureParams {
            angular_order: (0, 8),
            ..QuadratureParams::default()
        };
        assert!(p.validate().is_err());
    }
}
