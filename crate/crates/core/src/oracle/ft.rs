//! Rates from the time-domain correlators: G_ab(ω₀) = ∫dt e^{iω₀t} W_ab(t),
//! integrated on a panel mesh graded toward every light-cone pole, for a
//! decreasing sequence of regulators ε, then extrapolated to ε → 0.

use num_complex::Complex64;

use super::extrapolate::{extrapolate_to_zero, Extrapolation};
use super::quadrature::{gauss_kronrod21, CompensatedSum};
use super::{OracleValue, QuadratureParams};
use crate::correlators::{CorrelatorSpec, Pair};
use crate::error::{Error, Result};
use crate::params::{GeometryConfig, PolarizationAxis};

/// Panels never exceed this width, so e^{it} is always well resolved.
const MAX_PANEL: f64 = 1.0;

/// Transform of one regulated correlator over (−t_max, t_max).
#[derive(Debug, Clone, Copy)]
pub struct Transform {
    pub value: Complex64,
    /// Sum of per-panel Kronrod error estimates.
    pub quad_error: f64,
    /// ∫|integrand|, the scale that sets the round-off floor.
    pub abs_integral: f64,
    /// Bound on the discarded |t| > t_max remainder.
    pub tail_bound: f64,
    pub panels: usize,
}

/// Panel mesh on [−t_max, t_max], graded geometrically toward each pole at
/// `±times` (+ iε): no panel is wider than its distance to the nearest pole.
pub fn graded_panels(times: &[f64], epsilon: f64, t_max: f64) -> Vec<(f64, f64)> {
    let mut poles: Vec<f64> = times
        .iter()
        .flat_map(|&t| [-t, t])
        .filter(|t| t.abs() < t_max)
        .collect();
    poles.sort_by(f64::total_cmp);
    poles.dedup();

    let mut breaks = vec![-t_max];
    breaks.extend(poles.iter().copied());
    breaks.push(t_max);

    let distance = |a: f64, b: f64| -> f64 {
        let dr = poles
            .iter()
            .map(|&p| {
                if p < a {
                    a - p
                } else if p > b {
                    p - b
                } else {
                    0.0
                }
            })
            .fold(f64::INFINITY, f64::min);
        dr.hypot(epsilon)
    };

    let mut out = Vec::new();
    for w in breaks.windows(2) {
        let mut stack = vec![(w[0], w[1])];
        while let Some((a, b)) = stack.pop() {
            if b - a <= MAX_PANEL.min(distance(a, b)) {
                out.push((a, b));
            } else {
                let m = 0.5 * (a + b);
                stack.push((m, b));
                stack.push((a, m));
            }
        }
    }
    out
}

/// ∫_{−t_max}^{t_max} e^{it} W(t) dt for one regulated correlator.
pub fn transform(spec: &CorrelatorSpec, t_max: f64) -> Transform {
    let integrand = |t: f64| Complex64::new(0.0, t).exp() * spec.eval(t);
    let panels = graded_panels(&spec.light_cone_times(), spec.epsilon(), t_max);
    let mut sum = CompensatedSum::default();
    let mut quad_error = 0.0;
    let mut abs_integral = 0.0;
    for &(a, b) in &panels {
        let est = gauss_kronrod21(&integrand, a, b);
        sum.add(est.value);
        quad_error += est.error;
        abs_integral += est.abs_integral;
    }
    // beyond every light cone the correlator falls off like t⁻⁴
    let edge = spec.eval(t_max).norm().max(spec.eval(-t_max).norm());
    Transform {
        value: sum.value(),
        quad_error,
        abs_integral,
        tail_bound: 2.0 * edge * t_max / 3.0,
        panels: panels.len(),
    }
}

fn check_horizon(geometry: &GeometryConfig, params: &QuadratureParams) -> Result<()> {
    let longest = geometry.separation().hypot(geometry.boundary().z().unwrap_or(0.0));
    if params.t_max < 4.0 * longest {
        return Err(Error::OutOfDomain(format!(
            "t_max = {} is too short for light-cone time {longest}",
            params.t_max
        )));
    }
    Ok(())
}

/// Unnormalized transform extrapolated to ε → 0.
pub fn ft_raw(
    component: PolarizationAxis,
    pair: Pair,
    geometry: &GeometryConfig,
    params: &QuadratureParams,
) -> Result<OracleValue> {
    params.validate()?;
    check_horizon(geometry, params)?;
    let mut values = Vec::with_capacity(params.epsilon_sequence.len());
    let mut quad_error: f64 = 0.0;
    let mut tail_bound: f64 = 0.0;
    let mut imag: f64 = 0.0;
    for &eps in &params.epsilon_sequence {
        let spec = CorrelatorSpec::new(pair, component, *geometry, eps)?;
        let tr = transform(&spec, params.t_max);
        values.push(tr.value.re);
        imag = imag.max(tr.value.im.abs());
        quad_error = quad_error.max(tr.quad_error);
        tail_bound = tail_bound.max(tr.tail_bound);
    }
    let Extrapolation {
        value,
        residual,
        empirical_orders,
    } = extrapolate_to_zero(&params.epsilon_sequence, &values);
    Ok(OracleValue {
        value,
        residual,
        empirical_orders,
        tail_bound,
        quad_error,
        imaginary_part: imag,
        converged: true,
    })
}

/// γ_ab/γ₀ from the transform, normalized by the same pipeline's
/// free-space same-point value. Convergence is reported in the result
/// rather than raised; see [`ft_rate`].
pub fn ft_rate_diagnostics(
    component: PolarizationAxis,
    pair: Pair,
    geometry: &GeometryConfig,
    params: &QuadratureParams,
) -> Result<OracleValue> {
    let free = GeometryConfig::unbounded(geometry.separation())?;
    let norm = ft_raw(PolarizationAxis::X, Pair::Same, &free, params)?;
    let raw = ft_raw(component, pair, geometry, params)?;
    let value = raw.value / norm.value;
    let residual = raw.residual / norm.value.abs() + value.abs() * norm.residual / norm.value.abs();
    let tail_bound = (raw.tail_bound + value.abs() * norm.tail_bound) / norm.value.abs();
    let converged = residual <= 10.0 * params.rel_tol * value.abs().max(1.0) && tail_bound <= params.abs_tol;
    Ok(OracleValue {
        value,
        residual,
        empirical_orders: raw.empirical_orders,
        tail_bound,
        quad_error: raw.quad_error / norm.value.abs(),
        imaginary_part: raw.imaginary_part / norm.value.abs(),
        converged,
    })
}

/// γ_ab/γ₀ from the time-domain oracle. Fails when the ε-extrapolation
/// residual exceeds 10·rel_tol or the truncated tail may exceed abs_tol.
pub fn ft_rate(
    component: PolarizationAxis,
    pair: Pair,
    geometry: &GeometryConfig,
    params: &QuadratureParams,
) -> Result<OracleValue> {
    let out = ft_rate_diagnostics(component, pair, geometry, params)?;
    if out.tail_bound > params.abs_tol {
        return Err(Error::NonConvergence {
            what: "time-domain tail bound".into(),
            residual: out.tail_bound,
            tolerance: params.abs_tol,
        });
    }
    let tol = 10.0 * params.rel_tol * out.value.abs().max(1.0);
    if out.residual > tol {
        return Err(Error::NonConvergence {
            what: "epsilon extrapolation".into(),
            residual: out.residual,
            tolerance: tol,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn panels_cover_interval_in_order() {
        let p = graded_panels(&[0.0, 1.5], 1e-3, 20.0);
        assert_eq!(p.first().unwrap().0, -20.0);
        assert_eq!(p.last().unwrap().1, 20.0);
        assert!(p.windows(2).all(|w| w[0].1 == w[1].0));
        // finest panel is no wider than the regulator
        let min = p.iter().map(|(a, b)| b - a).fold(f64::INFINITY, f64::min);
        assert!(min <= 1e-3);
    }

    #[test]
    fn free_same_point_transform_matches_residue() {
        // ∫ e^{it}/(t − iε)⁴ dt = (π/3) e^{−ε}, times the 1/π² prefactor
        let eps = 1e-2;
        let g = GeometryConfig::unbounded(1.0).unwrap();
        let spec = CorrelatorSpec::new(Pair::Same, PolarizationAxis::X, g, eps).unwrap();
        let tr = transform(&spec, 200.0);
        let exact = (PI / 3.0) * (-eps).exp() / (PI * PI);
        assert!((tr.value.re - exact).abs() < 1e-8 * exact, "{} vs {exact}", tr.value.re);
        assert!(tr.tail_bound < 1e-8);
    }

    #[test]
    fn raw_free_transform_extrapolates_to_pi_over_three() {
        let g = GeometryConfig::unbounded(1.0).unwrap();
        let raw = ft_raw(PolarizationAxis::X, Pair::Same, &g, &QuadratureParams::default()).unwrap();
        let exact = 1.0 / (3.0 * PI);
        assert!((raw.value / exact - 1.0).abs() < 1e-4, "{}", raw.value * 3.0 * PI);
        assert!((raw.empirical_orders[0] - 1.0).abs() < 0.1);
    }

    #[test]
    fn short_horizon_rejected() {
        let params = QuadratureParams {
            t_max: 5.0,
            ..QuadratureParams::default()
        };
        let g = GeometryConfig::with_mirror(2.0, 3.0).unwrap();
        assert!(ft_rate(PolarizationAxis::Y, Pair::Cross, &g, &params).is_err());
    }
}
