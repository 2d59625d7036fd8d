//! Quantiles of the F distribution.
//!
//! The regularized incomplete beta function comes from `statrs`; the
//! inversion (bisection to bracket, then safeguarded Newton) lives here.

use statrs::function::beta::{beta_reg, ln_beta};

use crate::error::{Error, Result};

/// `P(F <= x)` for `F ~ F(d1, d2)`.
pub fn f_cdf(d1: u32, d2: u32, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x.is_infinite() {
        return 1.0;
    }
    let (a, b) = (d1 as f64 / 2.0, d2 as f64 / 2.0);
    let y = d1 as f64 * x / (d1 as f64 * x + d2 as f64);
    beta_reg(a, b, y)
}

/// Inverse of `y -> I_y(a, b)`.
fn inverse_beta_reg(a: f64, b: f64, p: f64) -> f64 {
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    // bisection while the bracket is wide; Newton is unreliable near the ends
    for _ in 0..30 {
        let mid = 0.5 * (lo + hi);
        if beta_reg(a, b, mid) < p {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let ln_b = ln_beta(a, b);
    let mut y = 0.5 * (lo + hi);
    for _ in 0..50 {
        let err = beta_reg(a, b, y) - p;
        if err < 0.0 {
            lo = y;
        } else {
            hi = y;
        }
        let density = ((a - 1.0) * y.ln() + (b - 1.0) * (-y).ln_1p() - ln_b).exp();
        let mut next = y - err / density;
        if !(next > lo && next < hi) || !next.is_finite() {
            next = 0.5 * (lo + hi);
        }
        let step = (next - y).abs();
        y = next;
        if step <= 1e-16 * y.max(1e-300) || hi - lo <= f64::EPSILON * y {
            break;
        }
    }
    y
}

/// `x` with `P(F(d1, d2) <= x) = prob`.
pub fn f_quantile(d1: u32, d2: u32, prob: f64) -> Result<f64> {
    if d1 == 0 || d2 == 0 {
        return Err(Error::FQuantile(format!(
            "degrees of freedom ({d1}, {d2}) must be >= 1"
        )));
    }
    if !(prob > 0.0 && prob < 1.0) {
        return Err(Error::FQuantile(format!(
            "probability {prob} outside (0, 1)"
        )));
    }
    let y = inverse_beta_reg(d1 as f64 / 2.0, d2 as f64 / 2.0, prob);
    Ok(d2 as f64 * y / (d1 as f64 * (1.0 - y)))
}
