//! Browser bindings: a rate heatmap, a concurrence curve and a point query.
//!
//! The plain functions return `twoatom::Result` so they can be tested
//! natively; the `#[wasm_bindgen]` wrappers convert errors to JS exceptions.

use serde_json::json;
use twoatom::dynamics::{concurrence_series, uniform_grid};
use twoatom::rates::{self, collective_rates, full_rates};
use twoatom::{Boundary, Error, GeometryConfig, InitialState, PolarizationAxis, Result};
use wasm_bindgen::prelude::*;

fn bad(key: &str, reason: String) -> Error {
    Error::Config {
        key: key.to_string(),
        reason,
    }
}

fn parse_pol(pol: &str) -> Result<PolarizationAxis> {
    pol.parse()
}

/// Negative or non-finite `z` means no mirror.
fn boundary(z: f64) -> Result<Boundary> {
    if z.is_finite() && z >= 0.0 {
        Boundary::mirror(z)
    } else {
        Ok(Boundary::Unbounded)
    }
}

fn axis(min: f64, max: f64, n: usize, log: bool) -> Result<Vec<f64>> {
    if n < 2 || !(min > 0.0 && max > min && max.is_finite()) {
        return Err(bad(
            "axis",
            format!("needs 0 < min < max and at least 2 points, got [{min}, {max}] x {n}"),
        ));
    }
    let step = |k: usize| k as f64 / (n - 1) as f64;
    Ok((0..n)
        .map(|k| match k {
            0 => min,
            k if k == n - 1 => max,
            k if log => min * (max / min).powf(step(k)),
            k => min + (max - min) * step(k),
        })
        .collect())
}

fn quantity(name: &str, pol: PolarizationAxis, g: &GeometryConfig) -> Result<f64> {
    if name == "v_shift" {
        return rates::dipole_shift(pol, g.separation(), g.boundary());
    }
    let set = collective_rates(pol, g)?;
    match name {
        "gamma11" => Ok(set.gamma11()),
        "gamma12" => Ok(set.gamma12()),
        "gamma_plus" => Ok(set.gamma_plus()),
        "gamma_minus" => Ok(set.gamma_minus()),
        other => Err(bad("quantity", format!("unknown quantity `{other}`"))),
    }
}

/// Row-major surface, R outer and Z inner, `nr * nz` values.
#[allow(clippy::too_many_arguments)]
pub fn surface(
    pol: &str,
    name: &str,
    r_range: (f64, f64),
    z_range: (f64, f64),
    nr: usize,
    nz: usize,
    log: bool,
) -> Result<Vec<f64>> {
    let pol = parse_pol(pol)?;
    let rs = axis(r_range.0, r_range.1, nr, log)?;
    let zs = axis(z_range.0, z_range.1, nz, log)?;
    let mut out = Vec::with_capacity(nr * nz);
    for &r in &rs {
        for &z in &zs {
            out.push(quantity(name, pol, &GeometryConfig::with_mirror(r, z)?)?);
        }
    }
    Ok(out)
}

fn initial(state: &str) -> Result<InitialState> {
    match state {
        "psi+" => Ok(InitialState::psi_plus()),
        "psi-" => Ok(InitialState::psi_minus()),
        other => Err(bad("state", format!("expected psi+ or psi-, got `{other}`"))),
    }
}

/// Interleaved `[t0, C0, t1, C1, ...]`.
pub fn curve(pol: &str, r: f64, z: f64, state: &str, t_max: f64, steps: usize) -> Result<Vec<f64>> {
    let g = GeometryConfig::new(r, boundary(z)?)?;
    let set = full_rates(parse_pol(pol)?, &g)?;
    let grid = uniform_grid(t_max, steps)?;
    let series = concurrence_series(&initial(state)?, &set, &grid)?;
    Ok(series.into_iter().flat_map(|(t, c)| [t, c]).collect())
}

pub fn point(pol: &str, r: f64, z: f64) -> Result<String> {
    let pol = parse_pol(pol)?;
    let g = GeometryConfig::new(r, boundary(z)?)?;
    let set = full_rates(pol, &g)?;
    Ok(json!({
        "pol": pol.name(),
        "R": r,
        "Z": g.boundary().z(),
        "gamma11": set.gamma11(),
        "gamma12": set.gamma12(),
        "gamma_plus": set.gamma_plus(),
        "gamma_minus": set.gamma_minus(),
        "v_shift": set.v_shift(),
        "provenance": set.provenance_gamma11().join(set.provenance_gamma12()).name(),
    })
    .to_string())
}

fn js(e: Error) -> JsError {
    JsError::new(&e.to_string())
}

#[wasm_bindgen]
#[allow(clippy::too_many_arguments)]
pub fn rate_surface(
    pol: &str,
    quantity: &str,
    r_min: f64,
    r_max: f64,
    z_min: f64,
    z_max: f64,
    nr: usize,
    nz: usize,
    log: bool,
) -> std::result::Result<Vec<f64>, JsError> {
    surface(pol, quantity, (r_min, r_max), (z_min, z_max), nr, nz, log).map_err(js)
}

#[wasm_bindgen]
pub fn concurrence_curve(
    pol: &str,
    r: f64,
    z: f64,
    state: &str,
    t_max: f64,
    steps: usize,
) -> std::result::Result<Vec<f64>, JsError> {
    curve(pol, r, z, state, t_max, steps).map_err(js)
}

#[wasm_bindgen]
pub fn rates_at(pol: &str, r: f64, z: f64) -> std::result::Result<String, JsError> {
    point(pol, r, z).map_err(js)
}
