//! Gauss-Legendre and Gauss-Jacobi node/weight rules via the Golub-Welsch
//! algorithm (symmetric companion matrix of the three-term recurrence).

use crate::special::ln_gamma_pos;
use nalgebra::DMatrix;

/// Nodes and weights on [-1, 1] for weight (1-x)^a (1+x)^b, a, b > -1.
pub fn gauss_jacobi(deg: usize, a: f64, b: f64) -> Vec<(f64, f64)> {
    assert!(deg >= 2, "need at least 2 nodes");
    assert!(a > -1.0 && b > -1.0, "Jacobi weight exponents must exceed -1");

    let mut m = DMatrix::<f64>::zeros(deg, deg);
    let mut diag = (b - a) / (2.0 + a + b);
    for i in 0..deg - 1 {
        let k = (i + 1) as f64;
        let denom = 2.0 * k + a + b;
        let off = 2.0 / denom
            * (k * (k + a) * (k + b) * (k + a + b) / ((denom + 1.0) * (denom - 1.0))).sqrt();
        m[(i, i)] = diag;
        m[(i, i + 1)] = off;
        m[(i + 1, i)] = off;
        diag = (b * b - a * a) / (denom * (denom + 2.0));
    }
    m[(deg - 1, deg - 1)] = diag;

    let eigen = m.symmetric_eigen();
    // total mass: int (1-x)^a (1+x)^b dx = 2^{a+b+1} B(a+1, b+1)
    let ln_mass = (a + b + 1.0) * std::f64::consts::LN_2 + ln_gamma_pos(a + 1.0)
        + ln_gamma_pos(b + 1.0)
        - ln_gamma_pos(a + b + 2.0);
    let mass = ln_mass.exp();

    let mut pairs: Vec<(f64, f64)> = eigen
        .eigenvalues
        .iter()
        .copied()
        .zip(eigen.eigenvectors.row(0).iter().map(|v| v * v * mass))
        .collect();
    pairs.sort_unstable_by(|x, y| x.0.partial_cmp(&y.0).unwrap());
    pairs
}

/// Nodes and weights on [0, 1] for plain Lebesgue measure.
pub fn gauss_legendre_unit(deg: usize) -> Vec<(f64, f64)> {
    gauss_jacobi(deg, 0.0, 0.0)
        .into_iter()
        .map(|(x, w)| ((x + 1.0) / 2.0, w / 2.0))
        .collect()
}

/// Nodes and weights on [0, 1] for weight u^{n-1} (1-u)^alpha, normalized so
/// the weights sum to exactly one (the weight is a probability density up to
/// the Beta-function constant, which cancels in every use here).
pub fn radial_jacobi_unit(deg: usize, n: u32, alpha: f64) -> Vec<(f64, f64)> {
    // map u = (1+x)/2; (1-u)^alpha u^{n-1} du = const * (1-x)^alpha (1+x)^{n-1} dx
    let raw = gauss_jacobi(deg, alpha, n as f64 - 1.0);
    let total: f64 = raw.iter().map(|&(_, w)| w).sum();
    raw.into_iter().map(|(x, w)| ((x + 1.0) / 2.0, w / total)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::gamma_ratio;

    #[test]
    fn legendre_integrates_polynomials_exactly() {
        let rule = gauss_legendre_unit(8);
        for k in 0..15u32 {
            let got: f64 = rule.iter().map(|&(x, w)| w * x.powi(k as i32)).sum();
            let want = 1.0 / (k as f64 + 1.0);
            assert!((got - want).abs() < 1e-14, "k={k}: {got} vs {want}");
        }
    }

    #[test]
    fn jacobi_moments_match_beta_ratios() {
        // int_0^1 u^{n-1+k} (1-u)^alpha du / int_0^1 u^{n-1} (1-u)^alpha du
        for &(n, alpha) in &[(1u32, -0.5), (2, 0.7), (3, 2.0), (1, -0.99)] {
            let rule = radial_jacobi_unit(24, n, alpha);
            for k in 0..6u32 {
                let got: f64 = rule.iter().map(|&(u, w)| w * u.powi(k as i32)).sum();
                let nf = n as f64;
                let want = gamma_ratio(nf + k as f64, nf)
                    * gamma_ratio(nf + alpha + 1.0, nf + k as f64 + alpha + 1.0);
                assert!(
                    (got - want).abs() < 1e-12 * want.max(1.0),
                    "n={n} alpha={alpha} k={k}: {got} vs {want}"
                );
            }
        }
    }

    #[test]
    fn singular_endpoint_is_handled_analytically() {
        // int_0^1 (1-u)^{-0.9} du converges; the rule must reproduce the first
        // moment of a nearly divergent weight
        let rule = radial_jacobi_unit(32, 1, -0.9);
        let got: f64 = rule.iter().map(|&(u, w)| w * u).sum();
        // E[u] under Beta(1, 0.1) on [0,1] with density prop to (1-u)^{-0.9}:
        // mean = a/(a+b) = 1/1.1
        assert!((got - 1.0 / 1.1).abs() < 1e-12);
    }
}
