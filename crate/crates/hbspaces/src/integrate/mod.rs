//! Deterministic and Monte Carlo integration over the unit sphere S^n, the
//! ball B_n with weight (1-|z|^2)^alpha, and membership-defined subregions.
//!
//! Conventions used everywhere in this crate:
//! - sigma is the rotation-invariant probability measure on S^n;
//! - v is Lebesgue volume normalized so v(B_n) = 1;
//! - for alpha > -1, dv_alpha = c_alpha (1-|z|^2)^alpha dv is a probability
//!   measure (c_alpha = `normalization_constant`).
//!
//! The deterministic sphere rule parametrizes zeta_j = e^{i theta_j} sqrt(t_j)
//! with t on the probability simplex: trapezoid in each angle (spectrally
//! accurate for trigonometric polynomials), Gauss-Legendre in the simplex
//! coordinates. The radial direction of ball integrals uses Gauss-Jacobi in
//! u = r^2 with weight u^{n-1}(1-u)^alpha, which removes the endpoint
//! singularity analytically.

pub mod rules;

use crate::error::{Error, Result};
use crate::special::{gamma_ratio, ln_gamma_pos};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Beta, Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

/// Quadrature and Monte Carlo configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadConfig {
    /// Trapezoid nodes per torus angle (scaled up automatically near poles).
    pub angular_nodes: usize,
    /// Gauss-Legendre nodes per simplex coordinate (moduli directions).
    pub simplex_nodes: usize,
    /// Gauss-Jacobi order for the radial direction of ball integrals.
    pub radial_nodes: usize,
    /// Sample count for Monte Carlo paths.
    pub mc_samples: usize,
    /// Base seed for all Monte Carlo paths.
    pub seed: u64,
    /// Relative self-convergence tolerance for deterministic rules.
    pub rel_tol: f64,
    /// Relative tolerance expected of Monte Carlo estimates.
    pub mc_rel_tol: f64,
    /// Radius of the nearest kernel pole, when the caller knows it; angular
    /// node counts scale like 1/(1 - r * pole_radius) along the radius.
    pub pole_radius: Option<f64>,
    /// Hard cap on auto-scaled angular nodes; beyond it the result is
    /// reported as non-converged rather than silently wrong.
    pub max_angular_nodes: usize,
}

impl Default for QuadConfig {
    fn default() -> Self {
        QuadConfig {
            angular_nodes: 64,
            simplex_nodes: 24,
            radial_nodes: 48,
            mc_samples: 200_000,
            seed: 42,
            rel_tol: 1e-8,
            mc_rel_tol: 1e-3,
            pole_radius: None,
            max_angular_nodes: 16_384,
        }
    }
}

impl QuadConfig {
    pub fn validate(&self) -> Result<()> {
        if self.angular_nodes < 4 || self.simplex_nodes < 4 || self.radial_nodes < 4 {
            return Err(Error::InvalidParameter(
                "all node counts must be at least 4".into(),
            ));
        }
        if self.mc_samples < 1_000 {
            return Err(Error::InvalidParameter(
                "mc_samples must be at least 1000".into(),
            ));
        }
        if !(self.rel_tol > 0.0) || !(self.mc_rel_tol > 0.0) {
            return Err(Error::InvalidParameter("tolerances must be positive".into()));
        }
        Ok(())
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_pole_radius(mut self, r: f64) -> Self {
        self.pole_radius = Some(r);
        self
    }

    /// Angular nodes needed at radius `r` given the pole hint.
    fn angular_nodes_at(&self, r: f64) -> usize {
        let base = self.angular_nodes.max(4);
        let k = match self.pole_radius {
            Some(rho) if rho > 0.0 => {
                let gap = (1.0 - r * rho).max(1e-6);
                base.max((40.0 / gap).ceil() as usize)
            }
            _ => base,
        };
        // keep even so the half rule is nested
        (k + k % 2).min(self.max_angular_nodes)
    }
}

/// Value, error estimate and convergence report of a single integral.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegralResult {
    pub value: Complex64,
    /// Standard error; present exactly when a Monte Carlo path was taken.
    pub stderr: Option<f64>,
    pub nodes_used: usize,
    pub converged: bool,
}

impl IntegralResult {
    pub fn real(&self) -> f64 {
        self.value.re
    }
}

/// c_alpha = Gamma(n+1+alpha) / (Gamma(n+1) Gamma(alpha+1)), the constant
/// making (1-|z|^2)^alpha dv a probability measure against normalized volume.
pub fn normalization_constant(n: u32, alpha: f64) -> Result<f64> {
    if alpha <= -1.0 {
        return Err(Error::DivergentWeight { alpha });
    }
    let nf = n as f64;
    Ok((ln_gamma_pos(nf + 1.0 + alpha) - ln_gamma_pos(nf + 1.0) - ln_gamma_pos(alpha + 1.0)).exp())
}

/// Closed-form sphere moment: int |zeta^m|^2 dsigma = (n-1)! m! / (n-1+|m|)!.
pub fn sphere_monomial_moment(m: &crate::funcrep::MultiIndex) -> f64 {
    let n = m.dimension() as f64;
    m.factorial() * gamma_ratio(n, n + m.order() as f64)
}

/// Closed-form ball moment: int |z^m|^2 dv_alpha
/// = m! Gamma(n+1+alpha) / Gamma(n+1+|m|+alpha), alpha > -1.
pub fn ball_monomial_moment(m: &crate::funcrep::MultiIndex, alpha: f64) -> Result<f64> {
    if alpha <= -1.0 {
        return Err(Error::DivergentWeight { alpha });
    }
    let n = m.dimension() as f64;
    Ok(m.factorial() * gamma_ratio(n + 1.0 + alpha, n + 1.0 + alpha + m.order() as f64))
}

/// Integral of `h` over S^n against the probability measure sigma.
///
/// Deterministic for n in {1, 2, 3}; Monte Carlo with standard error for
/// larger dimensions.
pub fn sphere_integral<H>(h: H, n: u32, cfg: &QuadConfig) -> Result<IntegralResult>
where
    H: Fn(&[Complex64]) -> Complex64,
{
    cfg.validate()?;
    if n == 0 {
        return Err(Error::InvalidParameter("dimension must be >= 1".into()));
    }
    if n <= 3 {
        let mut h = h;
        let k_fine = cfg.angular_nodes_at(1.0);
        let (fine, used_f) = sphere_det(&mut h, n, k_fine, cfg.simplex_nodes);
        let k_coarse = (k_fine * 2 / 3).max(4);
        let k_coarse = k_coarse + k_coarse % 2;
        let s_coarse = (cfg.simplex_nodes * 3 / 4).max(4);
        let (coarse, used_c) = sphere_det(&mut h, n, k_coarse, s_coarse);
        let diff = (fine - coarse).norm();
        let converged = diff <= cfg.rel_tol * fine.norm() + 1e-13;
        Ok(IntegralResult {
            value: fine,
            stderr: None,
            nodes_used: used_f + used_c,
            converged,
        })
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let mut pt = vec![Complex64::new(0.0, 0.0); n as usize];
        let mut sum = Complex64::new(0.0, 0.0);
        let mut sum_sq = 0.0f64;
        for _ in 0..cfg.mc_samples {
            random_sphere_point(&mut rng, &mut pt);
            let v = h(&pt);
            sum += v;
            sum_sq += v.norm_sqr();
        }
        let nn = cfg.mc_samples as f64;
        let mean = sum / nn;
        let var = (sum_sq / nn - mean.norm_sqr()).max(0.0);
        let stderr = (var / nn).sqrt();
        Ok(IntegralResult {
            value: mean,
            stderr: Some(stderr),
            nodes_used: cfg.mc_samples,
            converged: stderr <= cfg.mc_rel_tol * mean.norm().max(1e-12),
        })
    }
}

/// Deterministic simplex-torus rule; returns (value, evaluations).
fn sphere_det<H>(h: &mut H, n: u32, k_theta: usize, k_simplex: usize) -> (Complex64, usize)
where
    H: FnMut(&[Complex64]) -> Complex64,
{
    let mut evals = 0usize;
    let two_pi = 2.0 * std::f64::consts::PI;
    match n {
        1 => {
            let mut sum = Complex64::new(0.0, 0.0);
            for j in 0..k_theta {
                let th = two_pi * j as f64 / k_theta as f64;
                sum += h(&[Complex64::from_polar(1.0, th)]);
                evals += 1;
            }
            (sum / k_theta as f64, evals)
        }
        2 => {
            let gl = rules::gauss_legendre_unit(k_simplex);
            let mut sum = Complex64::new(0.0, 0.0);
            let mut wsum = 0.0f64;
            let mut pt = [Complex64::new(0.0, 0.0); 2];
            for &(t, wt) in &gl {
                let (r1, r2) = (t.sqrt(), (1.0 - t).sqrt());
                let mut angsum = Complex64::new(0.0, 0.0);
                for j1 in 0..k_theta {
                    let th1 = two_pi * j1 as f64 / k_theta as f64;
                    pt[0] = Complex64::from_polar(r1, th1);
                    for j2 in 0..k_theta {
                        let th2 = two_pi * j2 as f64 / k_theta as f64;
                        pt[1] = Complex64::from_polar(r2, th2);
                        angsum += h(&pt);
                        evals += 1;
                    }
                }
                sum += angsum * wt / (k_theta * k_theta) as f64;
                wsum += wt;
            }
            (sum / wsum, evals)
        }
        3 => {
            let gl = rules::gauss_legendre_unit(k_simplex);
            let mut sum = Complex64::new(0.0, 0.0);
            let mut wsum = 0.0f64;
            let mut pt = [Complex64::new(0.0, 0.0); 3];
            for &(u1, w1) in &gl {
                for &(u2, w2) in &gl {
                    let t1 = u1;
                    let t2 = (1.0 - u1) * u2;
                    let t3 = (1.0 - u1) * (1.0 - u2);
                    // simplex density 2! and Jacobian (1-u1)
                    let wt = 2.0 * (1.0 - u1) * w1 * w2;
                    let (r1, r2, r3) = (t1.sqrt(), t2.sqrt(), t3.sqrt());
                    let mut angsum = Complex64::new(0.0, 0.0);
                    for j1 in 0..k_theta {
                        pt[0] = Complex64::from_polar(r1, two_pi * j1 as f64 / k_theta as f64);
                        for j2 in 0..k_theta {
                            pt[1] = Complex64::from_polar(r2, two_pi * j2 as f64 / k_theta as f64);
                            for j3 in 0..k_theta {
                                pt[2] =
                                    Complex64::from_polar(r3, two_pi * j3 as f64 / k_theta as f64);
                                angsum += h(&pt);
                                evals += 1;
                            }
                        }
                    }
                    sum += angsum * wt / (k_theta * k_theta * k_theta) as f64;
                    wsum += wt;
                }
            }
            (sum / wsum, evals)
        }
        _ => unreachable!("deterministic sphere rule only for n <= 3"),
    }
}

fn random_sphere_point<R: Rng>(rng: &mut R, out: &mut [Complex64]) {
    loop {
        let mut nrm = 0.0f64;
        for z in out.iter_mut() {
            let re: f64 = StandardNormal.sample(rng);
            let im: f64 = StandardNormal.sample(rng);
            *z = Complex64::new(re, im);
            nrm += z.norm_sqr();
        }
        if nrm > 1e-20 {
            let inv = nrm.sqrt().recip();
            for z in out.iter_mut() {
                *z *= inv;
            }
            return;
        }
    }
}

/// Integral of `h` over B_n against the probability measure dv_alpha
/// (alpha > -1): Gauss-Jacobi in u = r^2 composed with the sphere rule.
pub fn ball_integral<H>(h: H, n: u32, alpha: f64, cfg: &QuadConfig) -> Result<IntegralResult>
where
    H: Fn(&[Complex64]) -> Complex64,
{
    cfg.validate()?;
    if alpha <= -1.0 {
        return Err(Error::DivergentWeight { alpha });
    }
    if n == 0 {
        return Err(Error::InvalidParameter("dimension must be >= 1".into()));
    }
    if n > 3 {
        return ball_integral_mc(h, n, alpha, cfg);
    }
    let (fine, used_f) = ball_det(&h, n, alpha, cfg, cfg.radial_nodes, cfg.simplex_nodes, 1.0);
    let coarse_radial = (cfg.radial_nodes * 3 / 4).max(4);
    let coarse_simplex = (cfg.simplex_nodes * 3 / 4).max(4);
    let (coarse, used_c) = ball_det(&h, n, alpha, cfg, coarse_radial, coarse_simplex, 2.0 / 3.0);
    let diff = (fine - coarse).norm();
    let converged = diff <= cfg.rel_tol * fine.norm() + 1e-13;
    Ok(IntegralResult {
        value: fine,
        stderr: None,
        nodes_used: used_f + used_c,
        converged,
    })
}

fn ball_det<H>(
    h: &H,
    n: u32,
    alpha: f64,
    cfg: &QuadConfig,
    k_radial: usize,
    k_simplex: usize,
    angular_factor: f64,
) -> (Complex64, usize)
where
    H: Fn(&[Complex64]) -> Complex64,
{
    let radial = rules::radial_jacobi_unit(k_radial, n, alpha);
    let mut sum = Complex64::new(0.0, 0.0);
    let mut evals = 0usize;
    let mut pt = vec![Complex64::new(0.0, 0.0); n as usize];
    for &(u, w) in &radial {
        let r = u.sqrt();
        let kth = cfg.angular_nodes_at(r);
        let kth = (((kth as f64) * angular_factor).ceil() as usize).max(4);
        let kth = kth + kth % 2;
        let (s, e) = sphere_det(
            &mut |zeta: &[Complex64]| {
                for (dst, &z) in pt.iter_mut().zip(zeta) {
                    *dst = z * r;
                }
                h(&pt)
            },
            n,
            kth,
            k_simplex,
        );
        sum += s * w;
        evals += e;
    }
    (sum, evals)
}

fn ball_integral_mc<H>(h: H, n: u32, alpha: f64, cfg: &QuadConfig) -> Result<IntegralResult>
where
    H: Fn(&[Complex64]) -> Complex64,
{
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let beta = Beta::new(n as f64, alpha + 1.0)
        .map_err(|e| Error::InvalidParameter(format!("bad Beta parameters: {e}")))?;
    let mut pt = vec![Complex64::new(0.0, 0.0); n as usize];
    let mut sum = Complex64::new(0.0, 0.0);
    let mut sum_sq = 0.0f64;
    for _ in 0..cfg.mc_samples {
        random_sphere_point(&mut rng, &mut pt);
        let r = beta.sample(&mut rng).sqrt();
        for z in pt.iter_mut() {
            *z *= r;
        }
        let v = h(&pt);
        sum += v;
        sum_sq += v.norm_sqr();
    }
    let nn = cfg.mc_samples as f64;
    let mean = sum / nn;
    let var = (sum_sq / nn - mean.norm_sqr()).max(0.0);
    let stderr = (var / nn).sqrt();
    Ok(IntegralResult {
        value: mean,
        stderr: Some(stderr),
        nodes_used: cfg.mc_samples,
        converged: stderr <= cfg.mc_rel_tol * mean.norm().max(1e-12),
    })
}

/// Importance-sampled Monte Carlo estimate of
/// `int h(z) 1_{membership(z)} dv_alpha(z)` with dv_alpha the probability
/// measure (alpha > -1). Deterministic for a fixed seed.
pub fn region_integral_mc<H, M>(
    h: H,
    membership: M,
    n: u32,
    weight_alpha: f64,
    cfg: &QuadConfig,
) -> Result<IntegralResult>
where
    H: Fn(&[Complex64]) -> Complex64,
    M: Fn(&[Complex64]) -> bool,
{
    cfg.validate()?;
    if weight_alpha <= -1.0 {
        return Err(Error::DivergentWeight { alpha: weight_alpha });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let beta = Beta::new(n as f64, weight_alpha + 1.0)
        .map_err(|e| Error::InvalidParameter(format!("bad Beta parameters: {e}")))?;
    let mut pt = vec![Complex64::new(0.0, 0.0); n as usize];
    let mut sum = Complex64::new(0.0, 0.0);
    let mut sum_sq = 0.0f64;
    let mut hits = 0usize;
    for _ in 0..cfg.mc_samples {
        random_sphere_point(&mut rng, &mut pt);
        let r = beta.sample(&mut rng).sqrt();
        for z in pt.iter_mut() {
            *z *= r;
        }
        if membership(&pt) {
            hits += 1;
            let v = h(&pt);
            sum += v;
            sum_sq += v.norm_sqr();
        }
    }
    let nn = cfg.mc_samples as f64;
    let mean = sum / nn;
    let var = (sum_sq / nn - mean.norm_sqr()).max(0.0);
    let stderr = (var / nn).sqrt();
    Ok(IntegralResult {
        value: mean,
        stderr: Some(stderr),
        nodes_used: cfg.mc_samples,
        converged: hits >= 100,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcrep::{multi_indices_up_to, MultiIndex};

    fn one(_: &[Complex64]) -> Complex64 {
        Complex64::new(1.0, 0.0)
    }

    #[test]
    fn sphere_probability_normalization() {
        let cfg = QuadConfig::default();
        for n in 1..=3u32 {
            let r = sphere_integral(one, n, &cfg).unwrap();
            assert!(r.converged);
            assert!((r.real() - 1.0).abs() < 1e-12, "n={n}: {}", r.real());
        }
    }

    #[test]
    fn sphere_symmetric_coordinate_share() {
        let cfg = QuadConfig::default();
        let r = sphere_integral(|z| Complex64::new(z[0].norm_sqr(), 0.0), 2, &cfg).unwrap();
        assert!((r.real() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn sphere_szego_identity_disc() {
        // int dsigma / |1 - <w,zeta>|^2 = (1-|w|^2)^{-1} at n = 1
        let cfg = QuadConfig::default();
        let w = Complex64::new(0.6, 0.0);
        let r = sphere_integral(
            |z| Complex64::new((Complex64::new(1.0, 0.0) - w * z[0].conj()).norm_sqr().recip(), 0.0),
            1,
            &cfg,
        )
        .unwrap();
        assert!(r.converged);
        assert!((r.real() - 1.5625).abs() < 1e-10, "{}", r.real());
    }

    #[test]
    fn sphere_monomials_match_closed_form() {
        let cfg = QuadConfig {
            angular_nodes: 16,
            simplex_nodes: 16,
            ..QuadConfig::default()
        };
        for n in 1..=2usize {
            for m in multi_indices_up_to(n, 6) {
                let want = sphere_monomial_moment(&m);
                let r = sphere_integral(
                    |z| {
                        let mut t = Complex64::new(1.0, 0.0);
                        for (j, &mj) in m.0.iter().enumerate() {
                            t *= z[j].powu(mj);
                        }
                        t * t.conj()
                    },
                    n as u32,
                    &cfg,
                )
                .unwrap();
                assert!(
                    (r.real() - want).abs() < 1e-12,
                    "n={n} m={m:?}: {} vs {want}",
                    r.real()
                );
            }
        }
    }

    #[test]
    fn sphere_mixed_monomials_vanish() {
        let cfg = QuadConfig {
            angular_nodes: 16,
            simplex_nodes: 12,
            ..QuadConfig::default()
        };
        // zeta^m conj(zeta^m') integrates to zero unless m = m'
        let r = sphere_integral(|z| z[0].powu(2) * z[1].conj(), 2, &cfg).unwrap();
        assert!(r.value.norm() < 1e-13);
        let r = sphere_integral(|z| z[0] * z[0], 1, &cfg).unwrap();
        assert!(r.value.norm() < 1e-13);
    }

    #[test]
    fn ball_probability_normalization() {
        let cfg = QuadConfig::default();
        for &(n, alpha) in &[(1u32, 0.0), (1, -0.5), (2, 1.0)] {
            let r = ball_integral(one, n, alpha, &cfg).unwrap();
            assert!(r.converged);
            assert!((r.real() - 1.0).abs() < 1e-12, "n={n} alpha={alpha}");
        }
        // the torus factor of the n = 3 rule is cubic in the angle count;
        // a constant integrand only needs the minimum
        let cfg = QuadConfig {
            angular_nodes: 8,
            simplex_nodes: 8,
            radial_nodes: 16,
            ..QuadConfig::default()
        };
        let r = ball_integral(one, 3, 0.0, &cfg).unwrap();
        assert!(r.converged);
        assert!((r.real() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn ball_monomial_moment_disc() {
        let cfg = QuadConfig::default();
        let r = ball_integral(|z| Complex64::new(z[0].norm_sqr(), 0.0), 1, 0.0, &cfg).unwrap();
        assert!((r.real() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn ball_monomials_match_gamma_ratio() {
        let cfg = QuadConfig {
            angular_nodes: 16,
            simplex_nodes: 16,
            radial_nodes: 24,
            ..QuadConfig::default()
        };
        for n in 1..=2usize {
            for alpha in [0.0, 2.0, -0.5] {
                for m in multi_indices_up_to(n, 5) {
                    let want = ball_monomial_moment(&m, alpha).unwrap();
                    let r = ball_integral(
                        |z| {
                            let mut t = Complex64::new(1.0, 0.0);
                            for (j, &mj) in m.0.iter().enumerate() {
                                t *= z[j].powu(mj);
                            }
                            t * t.conj()
                        },
                        n as u32,
                        alpha,
                        &cfg,
                    )
                    .unwrap();
                    assert!(
                        (r.real() - want).abs() < 1e-11 * want.max(1.0),
                        "n={n} alpha={alpha} m={m:?}"
                    );
                }
            }
        }
    }

    #[test]
    fn ball_reproducing_kernel_identity() {
        // int dv_alpha / |1-<z,a>|^{2(n+1+alpha)} = (1-|a|^2)^{-(n+1+alpha)}
        let a = Complex64::new(0.7, 0.0);
        let cfg = QuadConfig::default().with_pole_radius(0.7);
        let s = 2.0 * (1.0 + 1.0 + 0.0);
        let r = ball_integral(
            |z| {
                let d = Complex64::new(1.0, 0.0) - z[0] * a.conj();
                Complex64::new(d.norm().powf(-s), 0.0)
            },
            1,
            0.0,
            &cfg,
        )
        .unwrap();
        let want = (1.0f64 - 0.49).powi(-2);
        assert!(r.converged);
        assert!((r.real() - want).abs() < 1e-6 * want, "{} vs {want}", r.real());
    }

    #[test]
    fn normalization_constants() {
        assert!((normalization_constant(1, 0.0).unwrap() - 1.0).abs() < 1e-14);
        assert!((normalization_constant(1, 1.0).unwrap() - 2.0).abs() < 1e-13);
        assert!((normalization_constant(2, 0.0).unwrap() - 1.0).abs() < 1e-14);
        assert!(normalization_constant(1, -1.0).is_err());
    }

    #[test]
    fn normalization_constant_matches_quadrature() {
        // c_alpha * int (1-|z|^2)^alpha dv = 1; check int (1-|z|^2) dv = 1/2
        // at n = 1 (so c_1 = 2)
        let cfg = QuadConfig::default();
        let r = ball_integral(
            |z| Complex64::new(1.0 - z[0].norm_sqr(), 0.0),
            1,
            0.0,
            &cfg,
        )
        .unwrap();
        assert!((r.real() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn region_mc_whole_ball() {
        let cfg = QuadConfig {
            mc_samples: 50_000,
            ..QuadConfig::default()
        };
        let r = region_integral_mc(one, |_| true, 1, 0.0, &cfg).unwrap();
        assert!(r.converged);
        assert!(r.stderr.is_some());
        assert!((r.real() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn region_mc_half_radius_disc() {
        let cfg = QuadConfig {
            mc_samples: 200_000,
            ..QuadConfig::default()
        };
        let r = region_integral_mc(one, |z| z[0].norm() < 0.5, 1, 0.0, &cfg).unwrap();
        assert!(r.converged);
        let err = 4.0 * r.stderr.unwrap() + 1e-3;
        assert!((r.real() - 0.25).abs() < err, "{} vs 0.25", r.real());
    }

    #[test]
    fn region_mc_too_few_hits_flags_nonconvergence() {
        let cfg = QuadConfig {
            mc_samples: 1_000,
            ..QuadConfig::default()
        };
        let r = region_integral_mc(one, |z| z[0].norm() < 0.001, 1, 0.0, &cfg).unwrap();
        assert!(!r.converged);
    }

    #[test]
    fn mc_agrees_with_deterministic_across_seeds() {
        // |value_mc - value_det| <= 4 stderr on >= 99% of seeds
        let det = {
            let cfg = QuadConfig::default();
            ball_integral(|z| Complex64::new(z[0].norm_sqr(), 0.0), 1, 0.5, &cfg)
                .unwrap()
                .real()
        };
        let mut bad = 0;
        for seed in 0..60u64 {
            let cfg = QuadConfig {
                mc_samples: 20_000,
                seed,
                ..QuadConfig::default()
            };
            let mc = region_integral_mc(
                |z| Complex64::new(z[0].norm_sqr(), 0.0),
                |_| true,
                1,
                0.5,
                &cfg,
            )
            .unwrap();
            if (mc.real() - det).abs() > 4.0 * mc.stderr.unwrap() {
                bad += 1;
            }
        }
        assert!(bad <= 1, "{bad} of 60 seeds outside 4 sigma");
    }

    #[test]
    fn self_convergence_under_node_doubling() {
        let base = QuadConfig {
            angular_nodes: 32,
            simplex_nodes: 16,
            radial_nodes: 24,
            ..QuadConfig::default()
        };
        let doubled = QuadConfig {
            angular_nodes: 64,
            simplex_nodes: 32,
            radial_nodes: 48,
            ..base.clone()
        };
        let h = |z: &[Complex64]| {
            let d = Complex64::new(1.0, 0.0) - z[0] * 0.5;
            Complex64::new(d.norm().powf(-3.0), 0.0)
        };
        for n in 1..=2u32 {
            let a = ball_integral(h, n, 0.3, &base).unwrap().real();
            let b = ball_integral(h, n, 0.3, &doubled).unwrap().real();
            assert!((a - b).abs() <= base.rel_tol * b.abs(), "n={n}: {a} vs {b}");
        }
    }

    #[test]
    fn divergent_weight_is_rejected() {
        let cfg = QuadConfig::default();
        assert!(matches!(
            ball_integral(one, 1, -1.0, &cfg),
            Err(Error::DivergentWeight { .. })
        ));
    }

    #[test]
    fn rejects_undersized_config() {
        let cfg = QuadConfig {
            angular_nodes: 2,
            ..QuadConfig::default()
        };
        assert!(sphere_integral(one, 1, &cfg).is_err());
        let cfg = QuadConfig {
            mc_samples: 10,
            ..QuadConfig::default()
        };
        assert!(region_integral_mc(one, |_| true, 1, 0.0, &cfg).is_err());
    }

    #[test]
    fn high_dimension_takes_mc_path() {
        let cfg = QuadConfig {
            mc_samples: 30_000,
            ..QuadConfig::default()
        };
        let r = sphere_integral(one, 4, &cfg).unwrap();
        assert!(r.stderr.is_some());
        assert!((r.real() - 1.0).abs() < 1e-9);
    }
}
