//! Units, atomic parameters and geometry shared by every other module.
//!
//! Internally everything is dimensionless: ħ = c = ε₀ = 1, frequencies are
//! measured in units of the transition frequency ω₀ and rates in units of the
//! free-space single-atom decay rate γ₀. Physical SI values only appear when
//! [`AtomParams`] is built in physical mode, and are converted at the edge.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde_json::Value;

use crate::error::{Error, Result};

/// Reduced Planck constant (J·s).
pub const HBAR: f64 = 1.054_571_817e-34;
/// Vacuum permittivity (F/m).
pub const EPSILON_0: f64 = 8.854_187_812_8e-12;
/// Speed of light in vacuum (m/s).
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
/// Elementary charge (C).
pub const ELEMENTARY_CHARGE: f64 = 1.602_176_634e-19;
/// Bohr radius (m).
pub const BOHR_RADIUS: f64 = 5.291_772_109_03e-11;

/// How inputs and outputs are expressed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum UnitMode {
    /// γ₀ = 1, lengths in units of c/ω₀, times in units of 1/γ₀.
    #[default]
    Normalized,
    /// SI inputs: ω₀ in rad/s, squared dipole moment in C²·m², lengths in m.
    Physical,
}

/// Transition frequency and dipole strength of the (identical) atoms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AtomParams {
    omega0: f64,
    dipole_sq: f64,
    mode: UnitMode,
}

impl AtomParams {
    /// Normalized units: every rate comes out in units of γ₀.
    pub fn normalized() -> Self {
        AtomParams {
            omega0: 1.0,
            dipole_sq: 1.0,
            mode: UnitMode::Normalized,
        }
    }

    /// SI parameters. `dipole_sq` is |e·d|², the squared transition dipole
    /// moment along the polarization axis.
    pub fn physical(omega0: f64, dipole_sq: f64) -> Result<Self> {
        if !(omega0 > 0.0 && omega0.is_finite()) {
            return Err(Error::invalid("omega0", omega0, "must be positive and finite"));
        }
        if !(dipole_sq > 0.0 && dipole_sq.is_finite()) {
            return Err(Error::invalid("dipole_sq", dipole_sq, "must be positive and finite"));
        }
        Ok(AtomParams {
            omega0,
            dipole_sq,
            mode: UnitMode::Physical,
        })
    }

    pub fn mode(&self) -> UnitMode {
        self.mode
    }

    pub fn omega0(&self) -> f64 {
        self.omega0
    }

    pub fn dipole_sq(&self) -> f64 {
        self.dipole_sq
    }

    /// Length unit used to make distances dimensionless: c/ω₀ in physical
    /// mode, 1 in normalized mode.
    pub fn length_unit(&self) -> f64 {
        match self.mode {
            UnitMode::Normalized => 1.0,
            UnitMode::Physical => SPEED_OF_LIGHT / self.omega0,
        }
    }

    pub fn gamma0(&self) -> f64 {
        gamma0(self)
    }
}

impl Default for AtomParams {
    fn default() -> Self {
        AtomParams::normalized()
    }
}

/// Free-space spontaneous emission rate γ₀ = |e d|² ω₀³ / (3π ħ ε₀ c³).
///
/// Returns exactly 1 in normalized mode.
pub fn gamma0(params: &AtomParams) -> f64 {
    match params.mode {
        UnitMode::Normalized => 1.0,
        UnitMode::Physical => {
            params.dipole_sq * params.omega0.powi(3)
                / (3.0 * PI * HBAR * EPSILON_0 * SPEED_OF_LIGHT.powi(3))
        }
    }
}

/// Distance to the mirror, expressed as Z = 2 z₀ ω₀ / c, or no mirror at all.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Boundary {
    Mirror(f64),
    Unbounded,
}

impl Boundary {
    pub fn mirror(z: f64) -> Result<Self> {
        if !(z > 0.0 && z.is_finite()) {
            return Err(Error::invalid("Z", z, "mirror distance must be positive and finite"));
        }
        Ok(Boundary::Mirror(z))
    }

    pub fn z(&self) -> Option<f64> {
        match *self {
            Boundary::Mirror(z) => Some(z),
            Boundary::Unbounded => None,
        }
    }

    pub fn is_unbounded(&self) -> bool {
        matches!(self, Boundary::Unbounded)
    }

    pub(crate) fn validate(&self) -> Result<()> {
        match *self {
            Boundary::Mirror(z) => Boundary::mirror(z).map(|_| ()),
            Boundary::Unbounded => Ok(()),
        }
    }
}

impl fmt::Display for Boundary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Boundary::Mirror(z) => write!(f, "{z}"),
            Boundary::Unbounded => f.write_str("unbounded"),
        }
    }
}

/// Dimensionless two-atom geometry: separation R = r ω₀ / c along x and the
/// common mirror distance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeometryConfig {
    separation: f64,
    boundary: Boundary,
}

impl GeometryConfig {
    pub fn new(separation: f64, boundary: Boundary) -> Result<Self> {
        if !(separation > 0.0 && separation.is_finite()) {
            return Err(Error::invalid("R", separation, "separation must be positive and finite"));
        }
        boundary.validate()?;
        Ok(GeometryConfig {
            separation,
            boundary,
        })
    }

    pub fn with_mirror(separation: f64, z: f64) -> Result<Self> {
        GeometryConfig::new(separation, Boundary::mirror(z)?)
    }

    pub fn unbounded(separation: f64) -> Result<Self> {
        GeometryConfig::new(separation, Boundary::Unbounded)
    }

    /// R.
    pub fn separation(&self) -> f64 {
        self.separation
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }
}

/// Builds a geometry from lengths. `r` and `z0` are in metres in physical
/// mode and in units of c/ω₀ in normalized mode; `z0 = None` removes the
/// mirror.
pub fn make_geometry(r: f64, z0: Option<f64>, params: &AtomParams) -> Result<GeometryConfig> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::invalid("r", r, "separation must be positive and finite"));
    }
    let unit = params.length_unit();
    let boundary = match z0 {
        None => Boundary::Unbounded,
        Some(z0) => {
            if !(z0 > 0.0 && z0.is_finite()) {
                return Err(Error::invalid("z0", z0, "mirror distance must be positive and finite"));
            }
            Boundary::mirror(2.0 * z0 / unit)?
        }
    };
    GeometryConfig::new(r / unit, boundary)
}

/// Common orientation of the two transition dipoles. The atoms sit on the
/// x axis, the mirror is the plane z = 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PolarizationAxis {
    /// Along the interatomic axis.
    X,
    /// Parallel to the mirror, perpendicular to the interatomic axis.
    Y,
    /// Normal to the mirror.
    Z,
}

impl PolarizationAxis {
    pub const ALL: [PolarizationAxis; 3] = [PolarizationAxis::X, PolarizationAxis::Y, PolarizationAxis::Z];

    pub fn index(self) -> usize {
        match self {
            PolarizationAxis::X => 0,
            PolarizationAxis::Y => 1,
            PolarizationAxis::Z => 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            PolarizationAxis::X => "x",
            PolarizationAxis::Y => "y",
            PolarizationAxis::Z => "z",
        }
    }

    /// Mirror reflection sign for this field component: tangential
    /// components flip under reflection, the normal component does not.
    pub fn reflection_sign(self) -> f64 {
        match self {
            PolarizationAxis::X | PolarizationAxis::Y => 1.0,
            PolarizationAxis::Z => -1.0,
        }
    }

    /// Resolves the shared axis of two dipole vectors. Both must be nonzero
    /// and aligned with the same coordinate axis.
    pub fn common(d1: [f64; 3], d2: [f64; 3]) -> Result<Self> {
        let a = Self::from_vector(d1)?;
        let b = Self::from_vector(d2)?;
        if a == b {
            Ok(a)
        } else {
            Err(Error::MixedPolarization)
        }
    }

    fn from_vector(d: [f64; 3]) -> Result<Self> {
        let nonzero: Vec<usize> = (0..3).filter(|&i| d[i] != 0.0).collect();
        match nonzero.as_slice() {
            [0] => Ok(PolarizationAxis::X),
            [1] => Ok(PolarizationAxis::Y),
            [2] => Ok(PolarizationAxis::Z),
            _ => Err(Error::MixedPolarization),
        }
    }
}

impl fmt::Display for PolarizationAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PolarizationAxis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "x" => Ok(PolarizationAxis::X),
            "y" => Ok(PolarizationAxis::Y),
            "z" => Ok(PolarizationAxis::Z),
            other => Err(Error::Config {
                key: "polarization".into(),
                reason: format!("expected one of x, y, z, got `{other}`"),
            }),
        }
    }
}

const NORM_TOLERANCE: f64 = 1e-12;

/// Single-excitation initial state c_eg |e₁g₂⟩ + c_ge |g₁e₂⟩.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InitialState {
    c_eg: Complex64,
    c_ge: Complex64,
}

impl InitialState {
    pub fn new(c_eg: Complex64, c_ge: Complex64) -> Result<Self> {
        let norm = c_eg.norm_sqr() + c_ge.norm_sqr();
        if norm.is_nan() || (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::InvalidState(format!(
                "|c_eg|² + |c_ge|² = {norm:.15}, expected 1"
            )));
        }
        Ok(InitialState { c_eg, c_ge })
    }

    /// ψ⁺ = (|eg⟩ + |ge⟩)/√2.
    pub fn psi_plus() -> Self {
        let a = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        InitialState { c_eg: a, c_ge: a }
    }

    /// ψ⁻ = (|ge⟩ − |eg⟩)/√2.
    pub fn psi_minus() -> Self {
        let a = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        InitialState { c_eg: -a, c_ge: a }
    }

    pub fn c_eg(&self) -> Complex64 {
        self.c_eg
    }

    pub fn c_ge(&self) -> Complex64 {
        self.c_ge
    }
}

/// Mirror distance as given in a configuration file.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MirrorDistance {
    Length(f64),
    Unbounded,
}

/// Run configuration read from JSON:
/// `{"mode": "normalized"|"physical", "omega0", "dipole_sq", "r",
///   "z0": number|"unbounded", "polarization": "x"|"y"|"z"}`.
///
/// Every key is optional so command-line flags can fill the gaps.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunConfig {
    pub mode: Option<UnitMode>,
    pub omega0: Option<f64>,
    pub dipole_sq: Option<f64>,
    pub r: Option<f64>,
    pub z0: Option<MirrorDistance>,
    pub polarization: Option<PolarizationAxis>,
}

fn config_err(key: &str, reason: impl Into<String>) -> Error {
    Error::Config {
        key: key.to_string(),
        reason: reason.into(),
    }
}

fn positive_number(key: &str, v: &Value) -> Result<f64> {
    let x = v
        .as_f64()
        .ok_or_else(|| config_err(key, format!("expected a number, got {v}")))?;
    if x > 0.0 && x.is_finite() {
        Ok(x)
    } else {
        Err(config_err(key, format!("must be positive and finite, got {x}")))
    }
}

impl RunConfig {
    pub fn from_json_str(text: &str) -> Result<Self> {
        let doc: Value =
            serde_json::from_str(text).map_err(|e| config_err("<document>", e.to_string()))?;
        let obj = doc
            .as_object()
            .ok_or_else(|| config_err("<document>", "expected a JSON object"))?;
        let mut cfg = RunConfig::default();
        for (key, v) in obj {
            match key.as_str() {
                "mode" => {
                    cfg.mode = Some(match v.as_str() {
                        Some("normalized") => UnitMode::Normalized,
                        Some("physical") => UnitMode::Physical,
                        _ => {
                            return Err(config_err(
                                key,
                                format!("expected \"normalized\" or \"physical\", got {v}"),
                            ))
                        }
                    })
                }
                "omega0" => cfg.omega0 = Some(positive_number(key, v)?),
                "dipole_sq" => cfg.dipole_sq = Some(positive_number(key, v)?),
                "r" => cfg.r = Some(positive_number(key, v)?),
                "z0" => {
                    cfg.z0 = Some(match v {
                        Value::String(s) if s == "unbounded" => MirrorDistance::Unbounded,
                        Value::Number(_) => MirrorDistance::Length(positive_number(key, v)?),
                        _ => {
                            return Err(config_err(
                                key,
                                format!("expected a number or \"unbounded\", got {v}"),
                            ))
                        }
                    })
                }
                "polarization" => {
                    let s = v
                        .as_str()
                        .ok_or_else(|| config_err(key, format!("expected a string, got {v}")))?;
                    cfg.polarization = Some(s.parse()?);
                }
                other => return Err(config_err(other, "unknown key")),
            }
        }
        Ok(cfg)
    }

    /// Atomic parameters implied by the mode keys.
    pub fn atom_params(&self) -> Result<AtomParams> {
        match self.mode.unwrap_or_default() {
            UnitMode::Normalized => Ok(AtomParams::normalized()),
            UnitMode::Physical => {
                let omega0 = self
                    .omega0
                    .ok_or_else(|| config_err("omega0", "required in physical mode"))?;
                let dipole_sq = self
                    .dipole_sq
                    .ok_or_else(|| config_err("dipole_sq", "required in physical mode"))?;
                AtomParams::physical(omega0, dipole_sq)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma0_normalized_is_one() {
        assert_eq!(gamma0(&AtomParams::normalized()), 1.0);
    }

    #[test]
    fn gamma0_hydrogen_scale() {
        // Hand evaluation of |e a₀|² ω₀³ / (3π ħ ε₀ c³) at ω₀ = 2.455e15 rad/s
        // (40-digit arithmetic, same CODATA constants): 4.485588357608696e6 s⁻¹.
        let d = ELEMENTARY_CHARGE * BOHR_RADIUS;
        let p = AtomParams::physical(2.455e15, d * d).unwrap();
        let g = gamma0(&p);
        assert!((g / 4.485_588_357_608_696e6 - 1.0).abs() < 1e-13, "{g}");
    }

    #[test]
    fn gamma0_linear_in_dipole_sq() {
        let p1 = AtomParams::physical(1e15, 3e-59).unwrap();
        let p2 = AtomParams::physical(1e15, 6e-59).unwrap();
        assert!((gamma0(&p2) / gamma0(&p1) - 2.0).abs() < 1e-15);
    }

    #[test]
    fn physical_rejects_non_positive() {
        assert!(AtomParams::physical(0.0, 1.0).is_err());
        assert!(AtomParams::physical(1.0, -1.0).is_err());
    }

    #[test]
    fn make_geometry_definitions() {
        let p = AtomParams::physical(2.0e15, 1e-58).unwrap();
        let unit = SPEED_OF_LIGHT / 2.0e15;
        let g = make_geometry(unit, Some(unit), &p).unwrap();
        assert!((g.separation() - 1.0).abs() < 1e-15);
        assert!((g.boundary().z().unwrap() - 2.0).abs() < 1e-15);

        let g = make_geometry(PI * unit, None, &p).unwrap();
        assert!((g.separation() - PI).abs() < 1e-14);
        assert_eq!(g.boundary(), Boundary::Unbounded);
    }

    #[test]
    fn make_geometry_rejects_bad_lengths() {
        let p = AtomParams::normalized();
        assert!(make_geometry(0.0, Some(1.0), &p).is_err());
        assert!(make_geometry(1.0, Some(-1.0), &p).is_err());
        assert!(make_geometry(f64::NAN, None, &p).is_err());
    }

    #[test]
    fn geometry_round_trip() {
        let p = AtomParams::normalized();
        let g = make_geometry(1.7, Some(0.35), &p).unwrap();
        let again = GeometryConfig::new(g.separation(), g.boundary()).unwrap();
        assert_eq!(g, again);
    }

    #[test]
    fn mixed_polarization_rejected() {
        assert_eq!(
            PolarizationAxis::common([1.0, 0.0, 0.0], [0.0, 2.0, 0.0]),
            Err(Error::MixedPolarization)
        );
        assert_eq!(
            PolarizationAxis::common([1.0, 1.0, 0.0], [1.0, 1.0, 0.0]),
            Err(Error::MixedPolarization)
        );
        assert_eq!(
            PolarizationAxis::common([0.0, 0.0, 2.0], [0.0, 0.0, -1.0]),
            Ok(PolarizationAxis::Z)
        );
    }

    #[test]
    fn initial_state_normalization() {
        assert!(InitialState::new(Complex64::new(1.0, 0.0), Complex64::new(0.1, 0.0)).is_err());
        let s = InitialState::new(Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8)).unwrap();
        assert_eq!(s.c_ge(), Complex64::new(0.0, 0.8));
        let m = InitialState::psi_minus();
        assert!(m.c_eg().re < 0.0 && m.c_ge().re > 0.0);
    }

    #[test]
    fn config_parsing() {
        let cfg = RunConfig::from_json_str(
            r#"{"mode":"physical","omega0":2e15,"dipole_sq":1e-58,"r":1e-7,"z0":"unbounded","polarization":"y"}"#,
        )
        .unwrap();
        assert_eq!(cfg.z0, Some(MirrorDistance::Unbounded));
        assert_eq!(cfg.polarization, Some(PolarizationAxis::Y));
        assert_eq!(cfg.atom_params().unwrap().mode(), UnitMode::Physical);
    }

    #[test]
    fn config_errors_name_the_key() {
        let err = RunConfig::from_json_str(r#"{"r": "far"}"#).unwrap_err();
        assert!(matches!(err, Error::Config { ref key, .. } if key == "r"));
        let err = RunConfig::from_json_str(r#"{"z0": -1}"#).unwrap_err();
        assert!(matches!(err, Error::Config { ref key, .. } if key == "z0"));
        let err = RunConfig::from_json_str(r#"{"colour": 1}"#).unwrap_err();
        assert!(matches!(err, Error::Config { ref key, .. } if key == "colour"));
        let err = RunConfig::from_json_str(r#"{"mode": "physical"}"#)
            .unwrap()
            .atom_params()
            .unwrap_err();
        assert!(matches!(err, Error::Config { ref key, .. } if key == "omega0"));
    }
}
