//! Vacuum Wightman functions ⟨0|E_j(x_a, t) E_j(x_b, 0)|0⟩ of the electric
//! field along static atomic trajectories, regularized with t → t − iε.
//!
//! Units: c = 1, times in 1/ω₀, lengths in c/ω₀. With the mirror at z = 0,
//! atom 1 sits at (0, 0, Z/2) and atom 2 at (R, 0, Z/2), so the round-trip
//! distance to the mirror is 2z₀ = Z.
//!
//! The xx component is evaluated exactly as printed for this geometry. The
//! yy and zz components come from the same free-space diagonal tensor plus a
//! mirror-image source whose field is reflected with signs diag(+1, +1, −1);
//! applied to xx this construction reproduces the printed expression term
//! by term.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::params::{Boundary, GeometryConfig, PolarizationAxis};

/// ħc/(π² ε₀) in internal units.
pub const FIELD_PREFACTOR: f64 = 1.0 / (PI * PI);

/// Which pair of trajectory points the correlator connects.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pair {
    /// 11 or 22.
    Same,
    /// 12 or 21.
    Cross,
}

impl Pair {
    pub const ALL: [Pair; 2] = [Pair::Same, Pair::Cross];

    pub fn name(self) -> &'static str {
        match self {
            Pair::Same => "same",
            Pair::Cross => "cross",
        }
    }
}

fn check_epsilon(epsilon: f64) -> Result<()> {
    if epsilon > 0.0 && epsilon.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid("epsilon", epsilon, "regulator must be positive"))
    }
}

#[inline]
fn regulated(t: f64, epsilon: f64) -> Complex64 {
    Complex64::new(t, -epsilon)
}

/// Same-point xx correlator,
/// (1/π²)[1/(t − iε)⁴ − (t² + Z²)/((t − iε)² − Z²)³].
pub fn wightman_xx_same(t: f64, boundary: Boundary, epsilon: f64) -> Result<Complex64> {
    check_epsilon(epsilon)?;
    boundary.validate()?;
    Ok(xx_same(t, boundary, epsilon))
}

/// Cross xx correlator,
/// (1/π²)[1/((t − iε)² − R²)² − (t² + Z² − R²)/((t − iε)² − R² − Z²)³].
pub fn wightman_xx_cross(t: f64, separation: f64, boundary: Boundary, epsilon: f64) -> Result<Complex64> {
    check_epsilon(epsilon)?;
    GeometryConfig::new(separation, boundary)?;
    Ok(xx_cross(t, separation, boundary, epsilon))
}

fn xx_same(t: f64, boundary: Boundary, epsilon: f64) -> Complex64 {
    let tau = regulated(t, epsilon);
    let tau2 = tau * tau;
    let free = (tau2 * tau2).inv();
    let value = match boundary {
        Boundary::Unbounded => free,
        Boundary::Mirror(z) => {
            let z2 = z * z;
            let den = tau2 - z2;
            free - (t * t + z2) / (den * den * den)
        }
    };
    value * FIELD_PREFACTOR
}

fn xx_cross(t: f64, r: f64, boundary: Boundary, epsilon: f64) -> Complex64 {
    let tau = regulated(t, epsilon);
    let tau2 = tau * tau;
    let r2 = r * r;
    let direct = tau2 - r2;
    let free = (direct * direct).inv();
    let value = match boundary {
        Boundary::Unbounded => free,
        Boundary::Mirror(z) => {
            let z2 = z * z;
            let den = tau2 - r2 - z2;
            free - (t * t + z2 - r2) / (den * den * den)
        }
    };
    value * FIELD_PREFACTOR
}

/// Diagonal tensor component `component` of the correlator for a pair of
/// atoms in `geometry`. The xx component delegates to the printed forms.
pub fn wightman_tensor(
    component: PolarizationAxis,
    pair: Pair,
    t: f64,
    geometry: &GeometryConfig,
    epsilon: f64,
) -> Result<Complex64> {
    check_epsilon(epsilon)?;
    Ok(CorrelatorSpec::from_parts(pair, component, *geometry, epsilon).eval(t))
}

/// Correlator between arbitrary points `xa`, `xb` (dimensionless positions).
/// With `mirror`, the plane z = 0 is a perfect conductor and both points
/// must lie at z > 0.
pub fn wightman_between(
    component: PolarizationAxis,
    xa: [f64; 3],
    xb: [f64; 3],
    mirror: bool,
    t: f64,
    epsilon: f64,
) -> Result<Complex64> {
    check_epsilon(epsilon)?;
    if mirror && !(xa[2] > 0.0 && xb[2] > 0.0) {
        return Err(Error::OutOfDomain(
            "points must lie above the mirror (z > 0)".into(),
        ));
    }
    Ok(constructed(component, xa, xb, mirror, t, epsilon))
}

fn constructed(
    component: PolarizationAxis,
    xa: [f64; 3],
    xb: [f64; 3],
    mirror: bool,
    t: f64,
    epsilon: f64,
) -> Complex64 {
    let j = component.index();
    let tau = regulated(t, epsilon);
    let tau2 = tau * tau;

    let d = [xa[0] - xb[0], xa[1] - xb[1], xa[2] - xb[2]];
    let d2 = d[0] * d[0] + d[1] * d[1] + d[2] * d[2];
    let den = tau2 - d2;
    let mut value = (den * den).inv() + 2.0 * (d2 - d[j] * d[j]) / (den * den * den);

    if mirror {
        let di = [xa[0] - xb[0], xa[1] - xb[1], xa[2] + xb[2]];
        let di2 = di[0] * di[0] + di[1] * di[1] + di[2] * di[2];
        let den = tau2 - di2;
        let num = t * t + di2 - 2.0 * di[j] * di[j];
        value -= component.reflection_sign() * num / (den * den * den);
    }
    value * FIELD_PREFACTOR
}

/// A fully specified correlator, validated once and cheap to evaluate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelatorSpec {
    pair: Pair,
    component: PolarizationAxis,
    geometry: GeometryConfig,
    epsilon: f64,
}

impl CorrelatorSpec {
    pub fn new(
        pair: Pair,
        component: PolarizationAxis,
        geometry: GeometryConfig,
        epsilon: f64,
    ) -> Result<Self> {
        check_epsilon(epsilon)?;
        Ok(Self::from_parts(pair, component, geometry, epsilon))
    }

    fn from_parts(pair: Pair, component: PolarizationAxis, geometry: GeometryConfig, epsilon: f64) -> Self {
        CorrelatorSpec {
            pair,
            component,
            geometry,
            epsilon,
        }
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// Atom positions (x_a, x_b) in dimensionless coordinates.
    fn positions(&self) -> ([f64; 3], [f64; 3]) {
        let z0 = self.geometry.boundary().z().map_or(0.0, |z| 0.5 * z);
        let xa = [0.0, 0.0, z0];
        let xb = match self.pair {
            Pair::Same => xa,
            Pair::Cross => [self.geometry.separation(), 0.0, z0],
        };
        (xa, xb)
    }

    pub fn eval(&self, t: f64) -> Complex64 {
        let boundary = self.geometry.boundary();
        match (self.component, self.pair) {
            (PolarizationAxis::X, Pair::Same) => xx_same(t, boundary, self.epsilon),
            (PolarizationAxis::X, Pair::Cross) => {
                xx_cross(t, self.geometry.separation(), boundary, self.epsilon)
            }
            _ => {
                let (xa, xb) = self.positions();
                constructed(self.component, xa, xb, !boundary.is_unbounded(), t, self.epsilon)
            }
        }
    }

    /// Non-negative real parts of the poles: the light-cone times of every
    /// direct and reflected path, sorted and deduplicated.
    pub fn light_cone_times(&self) -> Vec<f64> {
        let r = match self.pair {
            Pair::Same => 0.0,
            Pair::Cross => self.geometry.separation(),
        };
        let mut times = vec![r];
        if let Some(z) = self.geometry.boundary().z() {
            times.push(r.hypot(z));
        }
        times.sort_by(f64::total_cmp);
        times.dedup();
        times
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const EPS: f64 = 1e-3;

    fn rel(a: Complex64, b: Complex64) -> f64 {
        (a - b).norm() / b.norm()
    }

    #[test]
    fn unbounded_same_is_pure_free_term() {
        for &t in &[-3.0, 0.2, 1.0, 7.5] {
            let v = wightman_xx_same(t, Boundary::Unbounded, EPS).unwrap();
            let tau = Complex64::new(t, -EPS);
            assert!(rel(v, FIELD_PREFACTOR / (tau * tau * tau * tau)) < 1e-15);
        }
    }

    #[test]
    fn same_at_zero_time_is_real_positive() {
        let v = wightman_xx_same(0.0, Boundary::Unbounded, EPS).unwrap();
        let expected = FIELD_PREFACTOR / EPS.powi(4);
        assert!((v.re - expected).abs() / expected < 1e-14);
        assert!(v.im.abs() < 1e-14 * expected);
    }

    #[test]
    fn regulator_must_be_positive() {
        assert!(wightman_xx_same(1.0, Boundary::Unbounded, 0.0).is_err());
        assert!(wightman_xx_cross(1.0, 1.0, Boundary::Unbounded, -1e-3).is_err());
        let g = GeometryConfig::unbounded(1.0).unwrap();
        assert!(wightman_tensor(PolarizationAxis::Y, Pair::Same, 1.0, &g, 0.0).is_err());
    }

    #[test]
    fn cross_reduces_to_same_at_coincidence() {
        let b = Boundary::Mirror(1.3);
        let same = wightman_xx_same(1.0, b, EPS).unwrap();
        let cross = wightman_xx_cross(1.0, 1e-4, b, EPS).unwrap();
        assert!(rel(cross, same) <= 1e-6);
    }

    #[test]
    fn unbounded_cross_is_first_term_only() {
        let (t, r) = (0.7, 2.0);
        let v = wightman_xx_cross(t, r, Boundary::Unbounded, EPS).unwrap();
        let tau = Complex64::new(t, -EPS);
        let d = tau * tau - r * r;
        assert!(rel(v, FIELD_PREFACTOR / (d * d)) < 1e-15);
    }

    #[test]
    fn xx_tensor_delegates_bit_for_bit() {
        for geometry in [
            GeometryConfig::with_mirror(1.5, 0.4).unwrap(),
            GeometryConfig::unbounded(2.0).unwrap(),
        ] {
            for &t in &[-2.0, 0.1, 0.4, 3.0] {
                let b = geometry.boundary();
                assert_eq!(
                    wightman_tensor(PolarizationAxis::X, Pair::Same, t, &geometry, EPS).unwrap(),
                    wightman_xx_same(t, b, EPS).unwrap()
                );
                assert_eq!(
                    wightman_tensor(PolarizationAxis::X, Pair::Cross, t, &geometry, EPS).unwrap(),
                    wightman_xx_cross(t, geometry.separation(), b, EPS).unwrap()
                );
            }
        }
    }

    #[test]
    fn constructed_xx_matches_printed_expression() {
        let (r, z) = (1.5, 0.8);
        let xa = [0.0, 0.0, 0.5 * z];
        let xb = [r, 0.0, 0.5 * z];
        for &t in &[-1.0, 0.3, 0.8, 1.7, 5.0] {
            let a = wightman_between(PolarizationAxis::X, xa, xb, true, t, EPS).unwrap();
            let b = wightman_xx_cross(t, r, Boundary::Mirror(z), EPS).unwrap();
            assert!(rel(a, b) < 1e-12, "t = {t}");
            let a = wightman_between(PolarizationAxis::X, xa, xa, true, t, EPS).unwrap();
            let b = wightman_xx_same(t, Boundary::Mirror(z), EPS).unwrap();
            assert!(rel(a, b) < 1e-12, "t = {t}");
        }
    }

    #[test]
    fn hermiticity_all_components() {
        let geometry = GeometryConfig::with_mirror(1.1, 0.6).unwrap();
        for c in PolarizationAxis::ALL {
            for pair in Pair::ALL {
                for &t in &[0.05, 0.6, 1.1, 1.25, 4.0, 30.0] {
                    let p = wightman_tensor(c, pair, t, &geometry, EPS).unwrap();
                    let m = wightman_tensor(c, pair, -t, &geometry, EPS).unwrap();
                    assert!(rel(m, p.conj()) <= 1e-12, "{c:?} {pair:?} t={t}");
                }
            }
        }
    }

    #[test]
    fn exchange_symmetry() {
        let z0 = 0.45;
        let x1 = [0.0, 0.0, z0];
        let x2 = [1.7, 0.0, z0];
        for c in PolarizationAxis::ALL {
            for &t in &[0.3, 1.0, 2.2] {
                let a = wightman_between(c, x1, x2, true, t, EPS).unwrap();
                let b = wightman_between(c, x2, x1, true, t, EPS).unwrap();
                assert_eq!(a, b);
            }
        }
    }

    #[test]
    fn boundary_term_negligible_far_from_mirror() {
        let far = GeometryConfig::with_mirror(1.0, 1e3).unwrap();
        let free = GeometryConfig::unbounded(1.0).unwrap();
        for c in PolarizationAxis::ALL {
            for pair in Pair::ALL {
                for &t in &[0.5, 2.0, 5.0, 10.0] {
                    let with = wightman_tensor(c, pair, t, &far, EPS).unwrap();
                    let without = wightman_tensor(c, pair, t, &free, EPS).unwrap();
                    assert!((with - without).norm() <= 1e-6 * without.norm(), "{c:?} {pair:?} t={t}");
                }
            }
        }
    }

    #[test]
    fn tangential_field_vanishes_at_surface() {
        // The printed boundary term carries a real t² in its numerator, so the
        // cancellation at the surface is exact only as ε → 0.
        const EPS: f64 = 1e-9;
        let t = 1.0;
        let free = wightman_xx_same(t, Boundary::Unbounded, EPS).unwrap().norm();
        for c in [PolarizationAxis::X, PolarizationAxis::Y] {
            let x = [0.0, 0.0, 1e-7];
            let v = wightman_between(c, x, x, true, t, EPS).unwrap();
            assert!(v.norm() <= 1e-6 * free, "{c:?}: {}", v.norm() / free);
        }
        // the normal component doubles instead
        let x = [0.0, 0.0, 1e-7];
        let v = wightman_between(PolarizationAxis::Z, x, x, true, t, EPS).unwrap();
        assert!((v.norm() / free - 2.0).abs() < 1e-6);
    }

    #[test]
    fn light_cone_times() {
        let g = GeometryConfig::with_mirror(3.0, 4.0).unwrap();
        let s = CorrelatorSpec::new(Pair::Cross, PolarizationAxis::Y, g, EPS).unwrap();
        assert_eq!(s.light_cone_times(), vec![3.0, 5.0]);
        let s = CorrelatorSpec::new(Pair::Same, PolarizationAxis::Y, g, EPS).unwrap();
        assert_eq!(s.light_cone_times(), vec![0.0, 4.0]);
    }
}
