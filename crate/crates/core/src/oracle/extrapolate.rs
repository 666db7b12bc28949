//! Polynomial (Richardson) extrapolation of a sequence F(h_k) to h → 0.

/// Outcome of extrapolating a regulated sequence to zero regulator.
#[derive(Debug, Clone, PartialEq)]
pub struct Extrapolation {
    /// Interpolating polynomial through every sample, evaluated at 0.
    pub value: f64,
    /// |value − extrapolant built from all samples but the largest h|.
    pub residual: f64,
    /// Apparent convergence orders log(|ΔF_k| / |ΔF_{k+1}|) / log(h_k / h_{k+1}).
    pub empirical_orders: Vec<f64>,
}

/// Neville evaluation at 0 of the polynomial through (h_k, f_k).
fn neville_at_zero(h: &[f64], f: &[f64]) -> f64 {
    let mut p = f.to_vec();
    let n = h.len();
    for m in 1..n {
        for i in 0..n - m {
            p[i] = (h[i + m] * p[i] - h[i] * p[i + 1]) / (h[i + m] - h[i]);
        }
    }
    p[0]
}

/// Extrapolates samples `f[k] = F(h[k])` to h = 0. `h` must be strictly
/// decreasing and positive; at least two samples are needed.
pub fn extrapolate_to_zero(h: &[f64], f: &[f64]) -> Extrapolation {
    assert_eq!(h.len(), f.len());
    assert!(h.len() >= 2, "need at least two samples to extrapolate");
    let value = neville_at_zero(h, f);
    let reduced = neville_at_zero(&h[1..], &f[1..]);
    let empirical_orders = (0..h.len().saturating_sub(2))
        .map(|k| {
            let d0 = (f[k] - f[k + 1]).abs();
            let d1 = (f[k + 1] - f[k + 2]).abs();
            (d0 / d1).ln() / (h[k] / h[k + 1]).ln()
        })
        .collect();
    Extrapolation {
        value,
        residual: (value - reduced).abs(),
        empirical_orders,
    }
}
