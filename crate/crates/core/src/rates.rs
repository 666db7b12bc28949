//! Closed-form collective decay rates γ₁₁, γ₁₂, Γ± and the dipole-dipole
//! shift V for the three dipole orientations, in units of γ₀.
//!
//! Every printed rate is a sum of two radiation kernels evaluated at the
//! length of a direct or mirror-image path:
//!
//! * `T(x) = 3[(x² − 1) sin x + x cos x] / (2x³)` for a dipole transverse to
//!   the path,
//! * `L(x) = 3[sin x − x cos x] / x³` for a dipole along the path,
//!
//! and `(1 − s)·T + s·L` in between, where `s` is the squared cosine between
//! the dipole and the path. The image path contributes with the reflection
//! sign of the dipole component (+ for x and y, − for z) and a minus sign
//! overall. Both kernels tend to 1 at the origin through a cancellation of
//! order x³, so below [`SERIES_THRESHOLD`] they switch to Maclaurin series.

use crate::error::{Error, Result};
use crate::params::{Boundary, GeometryConfig, PolarizationAxis};

/// Arguments strictly below this use the series path.
pub const SERIES_THRESHOLD: f64 = 1e-2;

/// Which evaluation path produced a value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Provenance {
    ClosedForm,
    Series,
}

impl Provenance {
    pub fn name(self) -> &'static str {
        match self {
            Provenance::ClosedForm => "closed-form",
            Provenance::Series => "series",
        }
    }

    pub fn join(self, other: Provenance) -> Provenance {
        if self == Provenance::Series || other == Provenance::Series {
            Provenance::Series
        } else {
            Provenance::ClosedForm
        }
    }
}

/// A value tagged with the path that produced it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tagged {
    pub value: f64,
    pub provenance: Provenance,
}

impl Tagged {
    fn closed(value: f64) -> Self {
        Tagged {
            value,
            provenance: Provenance::ClosedForm,
        }
    }

    fn series(value: f64) -> Self {
        Tagged {
            value,
            provenance: Provenance::Series,
        }
    }
}

fn horner(coeffs: &[f64], y: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| acc * y + c)
}

// Maclaurin coefficients in powers of x², through x⁸.
const T_SERIES: [f64; 5] = [1.0, -1.0 / 5.0, 3.0 / 280.0, -1.0 / 3780.0, 1.0 / 266_112.0];
const L_SERIES: [f64; 5] = [1.0, -1.0 / 10.0, 1.0 / 280.0, -1.0 / 15_120.0, 1.0 / 1_330_560.0];

pub mod closed_form {
    //! The kernels exactly as written, with no small-argument protection.

    pub fn transverse(x: f64) -> f64 {
        let (s, c) = x.sin_cos();
        3.0 * ((x * x - 1.0) * s + x * c) / (2.0 * x * x * x)
    }

    pub fn longitudinal(x: f64) -> f64 {
        let (s, c) = x.sin_cos();
        3.0 * (s - x * c) / (x * x * x)
    }

    /// Transverse kernel with sin → −cos, cos → sin.
    pub fn transverse_conjugate(x: f64) -> f64 {
        let (s, c) = x.sin_cos();
        1.5 * (-c / x + s / (x * x) + c / (x * x * x))
    }

    /// Longitudinal kernel with sin → −cos, cos → sin.
    pub fn longitudinal_conjugate(x: f64) -> f64 {
        let (s, c) = x.sin_cos();
        -3.0 * (c + x * s) / (x * x * x)
    }
}

pub mod series {
    //! Maclaurin expansions through order 8.
    use super::{horner, L_SERIES, T_SERIES};

    pub fn transverse(x: f64) -> f64 {
        horner(&T_SERIES, x * x)
    }

    pub fn longitudinal(x: f64) -> f64 {
        horner(&L_SERIES, x * x)
    }

    /// 1 − T(x), summed without forming the difference.
    pub fn one_minus_transverse(x: f64) -> f64 {
        let y = x * x;
        -y * horner(&T_SERIES[1..], y)
    }
}

/// Transverse kernel T(x).
pub fn transverse(x: f64) -> Tagged {
    if x < SERIES_THRESHOLD {
        Tagged::series(series::transverse(x))
    } else {
        Tagged::closed(closed_form::transverse(x))
    }
}

/// Longitudinal kernel L(x).
pub fn longitudinal(x: f64) -> Tagged {
    if x < SERIES_THRESHOLD {
        Tagged::series(series::longitudinal(x))
    } else {
        Tagged::closed(closed_form::longitudinal(x))
    }
}

fn one_minus_transverse(x: f64) -> Tagged {
    if x < SERIES_THRESHOLD {
        Tagged::series(series::one_minus_transverse(x))
    } else {
        Tagged::closed(1.0 - closed_form::transverse(x))
    }
}

/// Mixed kernel for a dipole whose squared direction cosine with the path is `s`.
pub fn dyadic(x: f64, s: f64) -> Tagged {
    let t = transverse(x);
    let l = longitudinal(x);
    Tagged {
        value: (1.0 - s) * t.value + s * l.value,
        provenance: t.provenance.join(l.provenance),
    }
}

fn dyadic_conjugate(x: f64, s: f64) -> f64 {
    (1.0 - s) * closed_form::transverse_conjugate(x) + s * closed_form::longitudinal_conjugate(x)
}

fn check_separation(separation: f64) -> Result<()> {
    if separation > 0.0 && separation.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid("R", separation, "separation must be positive and finite"))
    }
}

/// Squared direction cosine between the dipole axis and the image path
/// (R, 0, Z).
fn image_cosine_sq(pol: PolarizationAxis, r: f64, z: f64) -> f64 {
    let rho2 = r * r + z * z;
    match pol {
        PolarizationAxis::X => r * r / rho2,
        PolarizationAxis::Y => 0.0,
        PolarizationAxis::Z => z * z / rho2,
    }
}

/// Spontaneous emission rate of one atom, γ₁₁/γ₀.
pub fn gamma11(pol: PolarizationAxis, boundary: Boundary) -> Result<f64> {
    gamma11_tagged(pol, boundary).map(|t| t.value)
}

pub fn gamma11_tagged(pol: PolarizationAxis, boundary: Boundary) -> Result<Tagged> {
    boundary.validate()?;
    Ok(match boundary {
        Boundary::Unbounded => Tagged::closed(1.0),
        Boundary::Mirror(z) => match pol {
            PolarizationAxis::X | PolarizationAxis::Y => one_minus_transverse(z),
            PolarizationAxis::Z => {
                let l = longitudinal(z);
                Tagged {
                    value: 1.0 + l.value,
                    provenance: l.provenance,
                }
            }
        },
    })
}

/// Cross-atom modulation of the emission rate, γ₁₂/γ₀.
pub fn gamma12(pol: PolarizationAxis, separation: f64, boundary: Boundary) -> Result<f64> {
    gamma12_tagged(pol, separation, boundary).map(|t| t.value)
}

pub fn gamma12_tagged(pol: PolarizationAxis, separation: f64, boundary: Boundary) -> Result<Tagged> {
    check_separation(separation)?;
    boundary.validate()?;
    let direct = match pol {
        PolarizationAxis::X => longitudinal(separation),
        PolarizationAxis::Y | PolarizationAxis::Z => transverse(separation),
    };
    Ok(match boundary {
        Boundary::Unbounded => direct,
        Boundary::Mirror(z) => {
            let rho = separation.hypot(z);
            let image = dyadic(rho, image_cosine_sq(pol, separation, z));
            Tagged {
                value: direct.value - pol.reflection_sign() * image.value,
                provenance: direct.provenance.join(image.provenance),
            }
        }
    })
}

/// Dipole-dipole shift V/γ₀ (the level shift of the symmetric mode).
///
/// Obtained from γ₁₂ by replacing sin x → −cos x and cos x → sin x in every
/// oscillating term and halving the result, which is the Hilbert transform
/// relation between the emission and shift parts of the self-energy. Diverges
/// like 1/R³ as R → 0.
pub fn dipole_shift(pol: PolarizationAxis, separation: f64, boundary: Boundary) -> Result<f64> {
    check_separation(separation)?;
    boundary.validate()?;
    let direct = match pol {
        PolarizationAxis::X => closed_form::longitudinal_conjugate(separation),
        PolarizationAxis::Y | PolarizationAxis::Z => closed_form::transverse_conjugate(separation),
    };
    let full = match boundary {
        Boundary::Unbounded => direct,
        Boundary::Mirror(z) => {
            let rho = separation.hypot(z);
            direct - pol.reflection_sign() * dyadic_conjugate(rho, image_cosine_sq(pol, separation, z))
        }
    };
    Ok(0.5 * full)
}

/// Collective rates for one configuration, all in units of γ₀.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateSet {
    gamma11: f64,
    gamma12: f64,
    gamma_plus: f64,
    gamma_minus: f64,
    v_shift: Option<f64>,
    provenance11: Provenance,
    provenance12: Provenance,
}

// Γ± may dip below zero by rounding; anything beyond this is a bad input.
const RATE_SLACK: f64 = 1e-12;

impl RateSet {
    /// Builds a rate set from raw values, e.g. for dynamics with
    /// hand-picked rates. Requires γ₁₁ ≥ 0 and |γ₁₂| ≤ γ₁₁.
    pub fn new(gamma11: f64, gamma12: f64, v_shift: Option<f64>) -> Result<Self> {
        if !(gamma11 >= 0.0 && gamma11.is_finite()) {
            return Err(Error::invalid("gamma11", gamma11, "must be non-negative and finite"));
        }
        if !(gamma12.is_finite() && gamma12.abs() <= gamma11 + RATE_SLACK) {
            return Err(Error::invalid("gamma12", gamma12, "must satisfy |gamma12| <= gamma11"));
        }
        if let Some(v) = v_shift {
            if !v.is_finite() {
                return Err(Error::invalid("v_shift", v, "must be finite"));
            }
        }
        Ok(Self::assemble(
            Tagged::closed(gamma11),
            Tagged::closed(gamma12),
            v_shift,
        ))
    }

    fn assemble(g11: Tagged, g12: Tagged, v_shift: Option<f64>) -> Self {
        RateSet {
            gamma11: g11.value,
            gamma12: g12.value,
            gamma_plus: g11.value + g12.value,
            gamma_minus: g11.value - g12.value,
            v_shift,
            provenance11: g11.provenance,
            provenance12: g12.provenance,
        }
    }

    pub fn gamma11(&self) -> f64 {
        self.gamma11
    }

    pub fn gamma12(&self) -> f64 {
        self.gamma12
    }

    /// Γ₊ = γ₁₁ + γ₁₂, decay rate of the symmetric state.
    pub fn gamma_plus(&self) -> f64 {
        self.gamma_plus
    }

    /// Γ₋ = γ₁₁ − γ₁₂, decay rate of the antisymmetric state.
    pub fn gamma_minus(&self) -> f64 {
        self.gamma_minus
    }

    pub fn v_shift(&self) -> Option<f64> {
        self.v_shift
    }

    pub fn provenance_gamma11(&self) -> Provenance {
        self.provenance11
    }

    pub fn provenance_gamma12(&self) -> Provenance {
        self.provenance12
    }

    pub fn with_v_shift(mut self, v: f64) -> Self {
        self.v_shift = Some(v);
        self
    }

    /// The same rates expressed in s⁻¹ given γ₀ in s⁻¹.
    pub fn scaled(&self, gamma0: f64) -> RateSet {
        RateSet {
            gamma11: self.gamma11 * gamma0,
            gamma12: self.gamma12 * gamma0,
            gamma_plus: self.gamma_plus * gamma0,
            gamma_minus: self.gamma_minus * gamma0,
            v_shift: self.v_shift.map(|v| v * gamma0),
            ..*self
        }
    }
}

/// γ₁₁, γ₁₂ and Γ± for a geometry; V is left unset.
pub fn collective_rates(pol: PolarizationAxis, geometry: &GeometryConfig) -> Result<RateSet> {
    let g11 = gamma11_tagged(pol, geometry.boundary())?;
    let g12 = gamma12_tagged(pol, geometry.separation(), geometry.boundary())?;
    Ok(RateSet::assemble(g11, g12, None))
}

/// [`collective_rates`] plus the dipole shift.
pub fn full_rates(pol: PolarizationAxis, geometry: &GeometryConfig) -> Result<RateSet> {
    let v = dipole_shift(pol, geometry.separation(), geometry.boundary())?;
    Ok(collective_rates(pol, geometry)?.with_v_shift(v))
}
