//! Gamma-function ratios and the Gauss hypergeometric series used as
//! closed-form oracles for the quadrature paths.

use crate::error::{Error, Result};
use statrs::function::gamma::ln_gamma;

/// Gamma(x) for x > 0.
pub fn gamma_pos(x: f64) -> f64 {
    assert!(x > 0.0, "gamma_pos requires x > 0, got {x}");
    ln_gamma(x).exp()
}

/// ln Gamma(x) for x > 0.
pub fn ln_gamma_pos(x: f64) -> f64 {
    assert!(x > 0.0, "ln_gamma_pos requires x > 0, got {x}");
    ln_gamma(x)
}

/// Ratio Gamma(a)/Gamma(b) computed in log space; a, b > 0.
pub fn gamma_ratio(a: f64, b: f64) -> f64 {
    (ln_gamma_pos(a) - ln_gamma_pos(b)).exp()
}

/// Pochhammer symbol (x)_k = x(x+1)...(x+k-1), with (x)_0 = 1.
pub fn pochhammer(x: f64, k: u32) -> f64 {
    let mut acc = 1.0;
    for j in 0..k {
        acc *= x + j as f64;
    }
    acc
}

/// Gauss hypergeometric series 2F1(a, b; c; x) for 0 <= x < 1, c > 0.
///
/// Direct summation; adequate over the radii used in this crate (x <= 0.99)
/// where at most a few thousand terms are needed.
pub fn gauss_2f1(a: f64, b: f64, c: f64, x: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&x) {
        return Err(Error::InvalidParameter(format!(
            "gauss_2f1 requires 0 <= x < 1, got {x}"
        )));
    }
    if c <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "gauss_2f1 requires c > 0, got {c}"
        )));
    }
    let mut term = 1.0f64;
    let mut sum = 1.0f64;
    let max_terms = 200_000u32;
    let mut quiet = 0u8;
    for k in 0..max_terms {
        let kf = k as f64;
        term *= (a + kf) * (b + kf) / ((c + kf) * (kf + 1.0)) * x;
        sum += term;
        if term.abs() <= sum.abs() * 1e-16 {
            quiet += 1;
            if quiet >= 3 {
                return Ok(sum);
            }
        } else {
            quiet = 0;
        }
    }
    Err(Error::NonConvergence {
        what: format!("2F1({a},{b};{c};{x})"),
        nodes: max_terms as usize,
    })
}

/// Value of 2F1(a, b; c; 1) by Gauss's theorem; requires c - a - b > 0.
pub fn gauss_2f1_at_one(a: f64, b: f64, c: f64) -> Result<f64> {
    let d = c - a - b;
    if d <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "2F1 at 1 diverges: c-a-b = {d} <= 0"
        )));
    }
    Ok((ln_gamma_pos(c) + ln_gamma_pos(d) - ln_gamma_pos(c - a) - ln_gamma_pos(c - b)).exp())
}
