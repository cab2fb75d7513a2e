//! Hyperbolic geometry of the ball: Mobius involutions, the Bergman metric
//! and its unit balls D(z,1), admissible approach regions Gamma(zeta), the
//! invariant measure dlambda = dv/(1-|z|^2)^{n+1}, the disc-intersection
//! region D_r, and the area functions A_r / A_infinity.
//!
//! Region integrals over Gamma(zeta) are truncated at |z| < 1 - eps and
//! reported as truncation curves: the objects here live exactly at the
//! divergence boundary, so a single number would hide the "finite iff"
//! content. Sampling uses a Koranyi-type box around the boundary point, which
//! keeps the acceptance ratio bounded as eps shrinks.

use crate::error::{Error, Result};
use crate::integrate::{
    ball_integral, normalization_constant, region_integral_mc, IntegralResult, QuadConfig,
};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

/// Bergman metric ball radius used by D(z,1).
pub const METRIC_BALL_RADIUS: f64 = 1.0;

/// A point of the unit sphere S^n, |zeta| = 1 to 1e-12.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryPoint(Vec<Complex64>);

impl BoundaryPoint {
    pub fn new(zeta: Vec<Complex64>) -> Result<Self> {
        let nrm = norm(&zeta);
        if (nrm - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter(format!(
                "boundary point must have |zeta| = 1, got {nrm}"
            )));
        }
        Ok(BoundaryPoint(zeta))
    }

    /// The point e_1 = (1, 0, ..., 0).
    pub fn axis(n: u32) -> Self {
        let mut v = vec![Complex64::new(0.0, 0.0); n as usize];
        v[0] = Complex64::new(1.0, 0.0);
        BoundaryPoint(v)
    }

    pub fn coords(&self) -> &[Complex64] {
        &self.0
    }

    pub fn dimension(&self) -> usize {
        self.0.len()
    }
}

pub(crate) fn inner(z: &[Complex64], w: &[Complex64]) -> Complex64 {
    z.iter().zip(w).map(|(a, b)| a * b.conj()).sum()
}

pub(crate) fn norm(z: &[Complex64]) -> f64 {
    z.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
}

/// The involutive automorphism phi_a of the ball: phi_a(0) = a, phi_a(a) = 0,
/// phi_a of phi_a is the identity. Realized by the projection formula
/// phi_a(z) = (a - P_a z - s_a Q_a z) / (1 - <z,a>) with s_a = sqrt(1-|a|^2).
pub fn mobius(a: &[Complex64], z: &[Complex64]) -> Result<Vec<Complex64>> {
    if a.len() != z.len() {
        return Err(Error::DimensionMismatch {
            expected: a.len(),
            got: z.len(),
        });
    }
    let a_sq = a.iter().map(|v| v.norm_sqr()).sum::<f64>();
    if a_sq >= 1.0 {
        return Err(Error::OutsideDomain(format!("|a|^2 = {a_sq} must be < 1")));
    }
    if a_sq == 0.0 {
        return Ok(z.iter().map(|&v| -v).collect());
    }
    let s = (1.0 - a_sq).sqrt();
    let za = inner(z, a);
    let denom = Complex64::new(1.0, 0.0) - za;
    let proj = za / a_sq;
    Ok(a
        .iter()
        .zip(z)
        .map(|(&ai, &zi)| {
            let p = proj * ai;
            let q = zi - p;
            (ai - p - s * q) / denom
        })
        .collect())
}

/// Bergman distance beta(z,w) = (1/2) log((1+|phi_z(w)|)/(1-|phi_z(w)|)).
pub fn bergman_distance(z: &[Complex64], w: &[Complex64]) -> Result<f64> {
    if norm(z) >= 1.0 || norm(w) >= 1.0 {
        return Err(Error::OutsideDomain("metric points must be interior".into()));
    }
    let image = mobius(z, w)?;
    Ok(norm(&image).atanh())
}

/// Normalized volume of D(z, radius) by Monte Carlo membership sampling.
pub fn metric_ball_volume_r(
    z: &[Complex64],
    n: u32,
    radius: f64,
    cfg: &QuadConfig,
) -> Result<IntegralResult> {
    if norm(z) >= 1.0 {
        return Err(Error::OutsideDomain("center must be interior".into()));
    }
    let cap = radius.tanh();
    region_integral_mc(
        |_| Complex64::new(1.0, 0.0),
        |w| match mobius(z, w) {
            Ok(img) => norm(&img) < cap,
            Err(_) => false,
        },
        n,
        0.0,
        cfg,
    )
}

/// Normalized volume of the unit Bergman ball D(z,1).
pub fn metric_ball_volume(z: &[Complex64], n: u32, cfg: &QuadConfig) -> Result<IntegralResult> {
    metric_ball_volume_r(z, n, METRIC_BALL_RADIUS, cfg)
}

/// Exact normalized volume of D(z,r) from the Jacobian of phi_z:
/// R^{2n} (1-|z|^2)^{n+1} / (1-R^2 |z|^2)^{n+1} with R = tanh r.
/// Serves as the independent oracle for the Monte Carlo path.
pub fn metric_ball_volume_closed(center_radius: f64, n: u32, radius: f64) -> f64 {
    let r2 = radius.tanh().powi(2);
    let rho2 = center_radius * center_radius;
    r2.powi(n as i32) * (1.0 - rho2).powi(n as i32 + 1) / (1.0 - r2 * rho2).powi(n as i32 + 1)
}

/// Strict membership test for the admissible approach region
/// Gamma(zeta) = { z : |1 - <z,zeta>| < 1 - |z|^2 }.
pub fn in_admissible_region(z: &[Complex64], zeta: &BoundaryPoint) -> bool {
    let gap = (Complex64::new(1.0, 0.0) - inner(z, zeta.coords())).norm();
    let zn = z.iter().map(|v| v.norm_sqr()).sum::<f64>();
    gap < 1.0 - zn
}

/// Membership in D_r = { w in D : |1 - r w| < 1 - r^2 }, the intersection of
/// the unit disc with the disc |w - 1/r| < 1/r - r.
pub fn in_dr_region(w: Complex64, r: f64) -> bool {
    assert!((0.0..1.0).contains(&r) && r > 0.0, "r must lie in (0,1)");
    (Complex64::new(1.0, 0.0) - r * w).norm() < 1.0 - r * r
}

/// Which power integrand to integrate over Gamma(zeta); the two forms are
/// comparable on the region since 1-|z|^2 and |1-<z,zeta>| are.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RegionForm {
    /// (1-|z|^2)^{-(n+1+t)}
    InvariantPower,
    /// |1-<z,zeta>|^{-(n+1+t)}
    KernelPower,
}

/// One weighted sample of the Gamma(zeta) importance sampler.
struct GammaSample {
    point: Vec<Complex64>,
    /// |1 - <z, zeta>| of the sample.
    delta: f64,
    /// Importance weight; the estimator is mean(g(z) * weight).
    weight: f64,
}

/// Koranyi-box importance sampler for Gamma(zeta): z_1 = 1 - delta e^{i psi}
/// in the frame where zeta = e_1, delta log-uniform on (delta_min, 1), the
/// transverse part uniform in its admissible ball. Membership is exact by
/// construction; points with |z| >= 1 - eps are rejected by the caller.
struct GammaSampler {
    n: usize,
    frame: Vec<Vec<Complex64>>, // unitary with first column zeta
    log_min: f64,
    log_range: f64,
    rng: ChaCha8Rng,
}

impl GammaSampler {
    fn new(zeta: &BoundaryPoint, delta_min: f64, seed: u64) -> Self {
        let n = zeta.dimension();
        GammaSampler {
            n,
            frame: unitary_from_first_column(zeta.coords()),
            log_min: delta_min.ln(),
            log_range: -delta_min.ln(),
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    fn next(&mut self) -> Option<GammaSample> {
        let u: f64 = self.rng.gen();
        let delta = (self.log_min + u * self.log_range).exp();
        let psi = (self.rng.gen::<f64>() - 0.5) * std::f64::consts::PI;
        let z1 = Complex64::new(1.0, 0.0) - Complex64::from_polar(delta, psi);
        let rho_sq = 1.0 - z1.norm_sqr() - delta;
        if rho_sq <= 0.0 {
            return None;
        }
        let mut local = vec![Complex64::new(0.0, 0.0); self.n];
        local[0] = z1;
        let mut trans_factor = 1.0;
        if self.n > 1 {
            let rho_max = rho_sq.sqrt();
            let dim = self.n - 1;
            // uniform point of the 2*dim-dimensional ball of radius rho_max
            let mut v: Vec<Complex64> = (0..dim)
                .map(|_| {
                    let re: f64 = StandardNormal.sample(&mut self.rng);
                    let im: f64 = StandardNormal.sample(&mut self.rng);
                    Complex64::new(re, im)
                })
                .collect();
            let nrm = norm(&v).max(1e-300);
            let radius = rho_max * self.rng.gen::<f64>().powf(1.0 / (2.0 * dim as f64));
            for (dst, src) in local[1..].iter_mut().zip(v.iter_mut()) {
                *dst = *src * (radius / nrm);
            }
            trans_factor = rho_sq.powi(dim as i32);
        }
        let point = apply_unitary(&self.frame, &local);
        // contribution of the proposal densities and volume ratios:
        // delta from the area element, delta * log-range from the log-uniform
        // density, n * rho^{2(n-1)} from the transverse ball
        let weight = delta * delta * self.log_range * self.n as f64 * trans_factor;
        Some(GammaSample {
            point,
            delta,
            weight,
        })
    }
}

/// Truncated integral over Gamma(zeta) of the chosen power form against
/// normalized volume: int over Gamma(zeta), |z| < 1-eps of
/// (1-|z|^2)^{-(n+1+t)} dv or |1-<z,zeta>|^{-(n+1+t)} dv.
pub fn admissible_integral(
    t: f64,
    zeta: &BoundaryPoint,
    eps: f64,
    form: RegionForm,
    n: u32,
    cfg: &QuadConfig,
) -> Result<IntegralResult> {
    let batch = admissible_integral_batch(t, zeta, &[eps], form, n, cfg)?;
    Ok(batch[0])
}

/// Evaluates the truncated integral at several eps levels in one sampling
/// pass (levels share samples, which stabilizes slope estimates).
pub fn admissible_integral_batch(
    t: f64,
    zeta: &BoundaryPoint,
    eps_levels: &[f64],
    form: RegionForm,
    n: u32,
    cfg: &QuadConfig,
) -> Result<Vec<IntegralResult>> {
    cfg.validate()?;
    if zeta.dimension() != n as usize {
        return Err(Error::DimensionMismatch {
            expected: n as usize,
            got: zeta.dimension(),
        });
    }
    if eps_levels.is_empty() || eps_levels.iter().any(|&e| !(0.0 < e && e < 1.0)) {
        return Err(Error::InvalidParameter("eps levels must lie in (0,1)".into()));
    }
    let delta_min = eps_levels.iter().copied().fold(f64::INFINITY, f64::min);
    let mut sampler = GammaSampler::new(zeta, delta_min, cfg.seed);
    let levels = eps_levels.len();
    let mut sums = vec![0.0f64; levels];
    let mut sums_sq = vec![0.0f64; levels];
    let mut hits = vec![0usize; levels];
    let exponent = -(n as f64 + 1.0 + t);
    for _ in 0..cfg.mc_samples {
        let Some(sample) = sampler.next() else { continue };
        let zn_sq: f64 = sample.point.iter().map(|v| v.norm_sqr()).sum();
        debug_assert!({
            let zeta_gap = (Complex64::new(1.0, 0.0) - inner(&sample.point, zeta.coords())).norm();
            let chain = 1.0 - zn_sq + 1e-12 >= zeta_gap && zeta_gap >= 1.0 - zn_sq.sqrt() - 1e-12;
            chain
        });
        let g = match form {
            RegionForm::InvariantPower => (1.0 - zn_sq).powf(exponent),
            RegionForm::KernelPower => sample.delta.powf(exponent),
        };
        let contribution = g * sample.weight;
        let zn = zn_sq.sqrt();
        for (k, &eps) in eps_levels.iter().enumerate() {
            if zn < 1.0 - eps {
                sums[k] += contribution;
                sums_sq[k] += contribution * contribution;
                hits[k] += 1;
            }
        }
    }
    let nn = cfg.mc_samples as f64;
    Ok((0..levels)
        .map(|k| {
            let mean = sums[k] / nn;
            let var = (sums_sq[k] / nn - mean * mean).max(0.0);
            IntegralResult {
                value: Complex64::new(mean, 0.0),
                stderr: Some((var / nn).sqrt()),
                nodes_used: cfg.mc_samples,
                converged: hits[k] >= 100,
            }
        })
        .collect())
}

/// The measure of a Carleson-type query: a closed-form radial weight
/// (dmu = dv_beta, normalized) or a finite mass distribution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum CarlesonMeasure {
    RadialWeight { beta: f64 },
    WeightedSamples { points: Vec<Vec<(f64, f64)>>, masses: Vec<f64> },
}

/// Data of the Carleson function g(z) = mu(D(z,1)) / (1-|z|^2)^{qm+n} used
/// by the derivative-embedding criterion.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CarlesonSpec {
    pub measure: CarlesonMeasure,
    pub q: f64,
    /// Derivative order m.
    pub m: u32,
    pub p: f64,
}

impl CarlesonSpec {
    /// Builds the spec for the embedding H^p into A^q_alpha (q < p) with m
    /// the smallest non-negative integer such that m q + alpha > -1 and
    /// dmu = dv_{mq+alpha}.
    pub fn for_embedding(p: f64, q: f64, alpha: f64) -> Result<Self> {
        if !(q > 0.0 && p > q) {
            return Err(Error::InvalidParameter(format!(
                "Carleson spec requires 0 < q < p, got p={p}, q={q}"
            )));
        }
        let mut m = 0u32;
        while m as f64 * q + alpha <= -1.0 + 1e-12 {
            m += 1;
        }
        Ok(CarlesonSpec {
            measure: CarlesonMeasure::RadialWeight { beta: m as f64 * q + alpha },
            q,
            m,
            p,
        })
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.q > 0.0 && self.p > self.q) {
            return Err(Error::InvalidParameter("Carleson spec requires 0 < q < p".into()));
        }
        if let CarlesonMeasure::RadialWeight { beta } = self.measure {
            if beta <= -1.0 {
                return Err(Error::DivergentWeight { alpha: beta });
            }
        }
        Ok(())
    }
}

/// mu(D(z,1)) for the spec's measure.
///
/// Radial weights integrate in closed reduced form: substituting w = phi_z(u)
/// turns the metric ball into the round ball of radius tanh(1), leaving a
/// smooth integrand handled by the deterministic ball rule. Sample measures
/// sum the masses inside the ball.
pub fn metric_ball_mass(spec: &CarlesonSpec, z: &[Complex64], n: u32, cfg: &QuadConfig) -> Result<f64> {
    spec.validate()?;
    if norm(z) >= 1.0 {
        return Err(Error::OutsideDomain("center must be interior".into()));
    }
    match &spec.measure {
        CarlesonMeasure::RadialWeight { beta } => {
            let beta = *beta;
            let cap = METRIC_BALL_RADIUS.tanh();
            let c_beta = normalization_constant(n, beta)?;
            let z_owned: Vec<Complex64> = z.to_vec();
            let zn_sq: f64 = z.iter().map(|v| v.norm_sqr()).sum();
            let inner_cfg = QuadConfig {
                angular_nodes: cfg.angular_nodes.min(32),
                simplex_nodes: cfg.simplex_nodes.min(16),
                radial_nodes: cfg.radial_nodes.min(32),
                pole_radius: Some(cap * zn_sq.sqrt()),
                ..cfg.clone()
            };
            let res = ball_integral(
                move |v| {
                    let pairing = inner(v, &z_owned) * cap;
                    let one = Complex64::new(1.0, 0.0);
                    let base = (one - pairing).norm();
                    let w_sq = v.iter().map(|x| x.norm_sqr()).sum::<f64>() * cap * cap;
                    Complex64::new(
                        (1.0 - w_sq).powf(beta) * base.powf(-2.0 * (n as f64 + 1.0 + beta)),
                        0.0,
                    )
                },
                n,
                0.0,
                &inner_cfg,
            )?;
            if !res.converged {
                return Err(Error::NonConvergence {
                    what: "metric ball mass".into(),
                    nodes: res.nodes_used,
                });
            }
            Ok(c_beta
                * (1.0 - zn_sq).powf(n as f64 + 1.0 + beta)
                * cap.powi(2 * n as i32)
                * res.real())
        }
        CarlesonMeasure::WeightedSamples { points, masses } => {
            let mut total = 0.0;
            for (pt, &mass) in points.iter().zip(masses) {
                let w: Vec<Complex64> = pt.iter().map(|&(re, im)| Complex64::new(re, im)).collect();
                if w.len() != n as usize {
                    return Err(Error::DimensionMismatch {
                        expected: n as usize,
                        got: w.len(),
                    });
                }
                if bergman_distance(z, &w)? < METRIC_BALL_RADIUS {
                    total += mass;
                }
            }
            Ok(total)
        }
    }
}

/// g(z) = mu(D(z,1)) / (1-|z|^2)^{qm+n}.
pub fn carleson_g(spec: &CarlesonSpec, z: &[Complex64], n: u32, cfg: &QuadConfig) -> Result<f64> {
    let mass = metric_ball_mass(spec, z, n, cfg)?;
    let zn_sq: f64 = z.iter().map(|v| v.norm_sqr()).sum();
    Ok(mass / (1.0 - zn_sq).powf(spec.q * spec.m as f64 + n as f64))
}

/// Integrand of the area functions: an explicit power of (1-|z|^2), or the
/// Carleson function of a measure spec.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum GFunction {
    /// g(z) = (1-|z|^2)^{exponent}
    PowerWeight { exponent: f64 },
    /// g from a Carleson measure spec.
    Carleson(CarlesonSpec),
}

/// Order of the area function: A_r with finite r, or the sup function.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum AreaOrder {
    Finite { r: f64 },
    Infinity,
}

/// Truncated area function at zeta:
/// A_r(g) = [int over Gamma(zeta), |z| < 1-eps of |g|^r dlambda]^{1/r} with
/// dlambda = dv/(1-|z|^2)^{n+1}, or A_infinity(g) = sup |g| over the
/// truncated region (probed along the radial ray and the sampled points).
pub fn area_function(
    g: &GFunction,
    zeta: &BoundaryPoint,
    order: AreaOrder,
    eps: f64,
    n: u32,
    cfg: &QuadConfig,
) -> Result<f64> {
    cfg.validate()?;
    if !(0.0 < eps && eps < 1.0) {
        return Err(Error::InvalidParameter("eps must lie in (0,1)".into()));
    }
    let radial_g = radial_profile(g, n, cfg)?;
    match order {
        AreaOrder::Finite { r } => {
            if !(r > 0.0) {
                return Err(Error::InvalidParameter("area order must be positive".into()));
            }
            let mut sampler = GammaSampler::new(zeta, eps, cfg.seed);
            let mut sum = 0.0f64;
            let mut hits = 0usize;
            for _ in 0..cfg.mc_samples {
                let Some(sample) = sampler.next() else { continue };
                let zn_sq: f64 = sample.point.iter().map(|v| v.norm_sqr()).sum();
                if zn_sq.sqrt() >= 1.0 - eps {
                    continue;
                }
                hits += 1;
                let gv = radial_g(zn_sq);
                sum += gv.powf(r) * (1.0 - zn_sq).powf(-(n as f64 + 1.0)) * sample.weight;
            }
            if hits < 100 {
                return Err(Error::NonConvergence {
                    what: "area function sampling".into(),
                    nodes: cfg.mc_samples,
                });
            }
            Ok((sum / cfg.mc_samples as f64).powf(1.0 / r))
        }
        AreaOrder::Infinity => {
            let mut best: f64 = 0.0;
            // the radial ray r zeta lies in Gamma(zeta) for every r in (0,1)
            let steps = 200;
            for i in 0..=steps {
                let frac = i as f64 / steps as f64;
                let r = 1e-4 + (1.0 - eps - 2e-4) * frac;
                best = best.max(radial_g(r * r));
            }
            let mut sampler = GammaSampler::new(zeta, eps, cfg.seed);
            for _ in 0..cfg.mc_samples.min(20_000) {
                let Some(sample) = sampler.next() else { continue };
                let zn_sq: f64 = sample.point.iter().map(|v| v.norm_sqr()).sum();
                if zn_sq.sqrt() < 1.0 - eps {
                    best = best.max(radial_g(zn_sq));
                }
            }
            Ok(best)
        }
    }
}

/// Precomputes |g| as a function of |z|^2; both supported integrands are
/// radial. Carleson radial weights are tabulated on a radius grid and
/// interpolated in log scale.
fn radial_profile(
    g: &GFunction,
    n: u32,
    cfg: &QuadConfig,
) -> Result<Box<dyn Fn(f64) -> f64 + Send + Sync>> {
    match g {
        GFunction::PowerWeight { exponent } => {
            let e = *exponent;
            Ok(Box::new(move |zn_sq: f64| (1.0 - zn_sq).powf(e)))
        }
        GFunction::Carleson(spec) => {
            spec.validate()?;
            match spec.measure {
                CarlesonMeasure::RadialWeight { .. } => {
                    let grid: Vec<f64> = (0..=24).map(|i| i as f64 / 24.0 * 0.999).collect();
                    let mut values = Vec::with_capacity(grid.len());
                    for &r in &grid {
                        let mut z = vec![Complex64::new(0.0, 0.0); n as usize];
                        z[0] = Complex64::new(r, 0.0);
                        values.push(carleson_g(spec, &z, n, cfg)?.max(1e-300).ln());
                    }
                    Ok(Box::new(move |zn_sq: f64| {
                        let r = zn_sq.sqrt().min(0.999);
                        let x = r / 0.999 * 24.0;
                        let i = (x.floor() as usize).min(23);
                        let frac = x - i as f64;
                        (values[i] * (1.0 - frac) + values[i + 1] * frac).exp()
                    }))
                }
                CarlesonMeasure::WeightedSamples { .. } => Err(Error::Unsupported(
                    "area functions over sample measures are not radial; evaluate carleson_g pointwise".into(),
                )),
            }
        }
    }
}

/// Unitary matrix (column-major) whose first column is the given unit vector.
fn unitary_from_first_column(zeta: &[Complex64]) -> Vec<Vec<Complex64>> {
    let n = zeta.len();
    let mut cols: Vec<Vec<Complex64>> = vec![zeta.to_vec()];
    for j in 0..n {
        if cols.len() == n {
            break;
        }
        let mut v = vec![Complex64::new(0.0, 0.0); n];
        v[j] = Complex64::new(1.0, 0.0);
        for c in &cols {
            let overlap = inner(&v, c);
            for (vi, ci) in v.iter_mut().zip(c) {
                *vi -= overlap * ci;
            }
        }
        let nrm = norm(&v);
        if nrm > 1e-8 {
            for vi in v.iter_mut() {
                *vi /= nrm;
            }
            cols.push(v);
        }
    }
    cols
}

fn apply_unitary(cols: &[Vec<Complex64>], x: &[Complex64]) -> Vec<Complex64> {
    let n = cols[0].len();
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    for (xj, col) in x.iter().zip(cols) {
        for (o, cj) in out.iter_mut().zip(col) {
            *o += xj * cj;
        }
    }
    out
}

/// Haar-ish random unitary (Gram-Schmidt of a Gaussian matrix); used by
/// rotation-equivariance tests and direction sweeps.
pub fn random_unitary<R: Rng>(rng: &mut R, n: usize) -> Vec<Vec<Complex64>> {
    loop {
        let first: Vec<Complex64> = (0..n)
            .map(|_| {
                let re: f64 = StandardNormal.sample(rng);
                let im: f64 = StandardNormal.sample(rng);
                Complex64::new(re, im)
            })
            .collect();
        let nrm = norm(&first);
        if nrm > 1e-6 {
            let unit: Vec<Complex64> = first.into_iter().map(|v| v / nrm).collect();
            return unitary_from_first_column(&unit);
        }
    }
}

/// Applies a unitary produced by [`random_unitary`] to a point.
pub fn rotate(cols: &[Vec<Complex64>], x: &[Complex64]) -> Vec<Complex64> {
    apply_unitary(cols, x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn mobius_defining_properties() {
        let a = vec![c(0.4, 0.2), c(-0.1, 0.3)];
        let zero = vec![c(0.0, 0.0), c(0.0, 0.0)];
        let at_zero = mobius(&a, &zero).unwrap();
        for (x, y) in at_zero.iter().zip(&a) {
            assert!((x - y).norm() < 1e-14);
        }
        let at_a = mobius(&a, &a).unwrap();
        assert!(norm(&at_a) < 1e-14);
    }

    #[test]
    fn mobius_one_dimensional_formula() {
        let a = vec![c(0.5, 0.0)];
        let z = vec![c(0.25, 0.0)];
        let img = mobius(&a, &z).unwrap();
        assert!((img[0] - c(0.25 / 0.875, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn mobius_is_an_involution() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for n in 1..=3usize {
            for _ in 0..50 {
                let a = random_interior_point(&mut rng, n, 0.9);
                let z = random_interior_point(&mut rng, n, 0.97);
                let img = mobius(&a, &z).unwrap();
                assert!(norm(&img) < 1.0 + 1e-12);
                let back = mobius(&a, &img).unwrap();
                let err: f64 = back.iter().zip(&z).map(|(x, y)| (x - y).norm()).sum();
                assert!(err < 1e-12, "involution error {err}");
            }
        }
    }

    #[test]
    fn distance_properties() {
        let z = vec![c(0.3, 0.1)];
        assert!(bergman_distance(&z, &z).unwrap() < 1e-15);
        let origin = vec![c(0.0, 0.0)];
        let a = vec![c(0.5, 0.0)];
        let d = bergman_distance(&origin, &a).unwrap();
        assert!((d - 0.5 * 3.0f64.ln()).abs() < 1e-14);

        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..30 {
            let z = random_interior_point(&mut rng, 2, 0.95);
            let w = random_interior_point(&mut rng, 2, 0.95);
            let d1 = bergman_distance(&z, &w).unwrap();
            let d2 = bergman_distance(&w, &z).unwrap();
            assert!((d1 - d2).abs() < 1e-12);
        }
    }

    #[test]
    fn distance_is_mobius_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..30 {
            let a = random_interior_point(&mut rng, 2, 0.8);
            let z = random_interior_point(&mut rng, 2, 0.9);
            let w = random_interior_point(&mut rng, 2, 0.9);
            let d = bergman_distance(&z, &w).unwrap();
            let dz = mobius(&a, &z).unwrap();
            let dw = mobius(&a, &w).unwrap();
            let d2 = bergman_distance(&dz, &dw).unwrap();
            assert!((d - d2).abs() < 1e-10, "{d} vs {d2}");
        }
    }

    #[test]
    fn metric_ball_volume_at_origin() {
        let cfg = QuadConfig {
            mc_samples: 400_000,
            ..QuadConfig::default()
        };
        for n in 1..=2u32 {
            let z = vec![c(0.0, 0.0); n as usize];
            let got = metric_ball_volume(&z, n, &cfg).unwrap();
            let want = 1.0f64.tanh().powi(2 * n as i32);
            assert!(got.converged);
            let tol = 4.0 * got.stderr.unwrap() + 1e-3;
            assert!((got.real() - want).abs() < tol, "n={n}: {} vs {want}", got.real());
        }
    }

    #[test]
    fn metric_ball_volume_matches_closed_form_off_center() {
        let cfg = QuadConfig {
            mc_samples: 600_000,
            ..QuadConfig::default()
        };
        let z = vec![c(0.5, 0.0)];
        let got = metric_ball_volume(&z, 1, &cfg).unwrap();
        let want = metric_ball_volume_closed(0.5, 1, 1.0);
        let tol = 4.0 * got.stderr.unwrap() + 1e-3;
        assert!((got.real() - want).abs() < tol, "{} vs {want}", got.real());
    }

    #[test]
    fn metric_ball_comparability_band() {
        // v(D(z,1)) / (1-|z|^2)^{n+1} stays in a fixed band
        for n in 1..=2u32 {
            for &rho in &[0.0, 0.5, 0.9, 0.99] {
                let ratio = metric_ball_volume_closed(rho, n, 1.0) / (1.0 - rho * rho).powi(n as i32 + 1);
                assert!((0.05..10.0).contains(&ratio), "n={n} rho={rho}: {ratio}");
            }
        }
    }

    #[test]
    fn admissible_region_membership() {
        let zeta = BoundaryPoint::axis(1);
        assert!(!in_admissible_region(&[c(0.0, 0.0)], &zeta));
        for &r in &[0.1, 0.5, 0.9] {
            assert!(in_admissible_region(&[c(r, 0.0)], &zeta));
            assert!(!in_admissible_region(&[c(-r, 0.0)], &zeta));
        }
    }

    #[test]
    fn admissible_region_is_rotation_equivariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let zeta = BoundaryPoint::axis(2);
        for _ in 0..200 {
            let z = random_interior_point(&mut rng, 2, 0.95);
            let u = random_unitary(&mut rng, 2);
            let uz = rotate(&u, &z);
            let uzeta = BoundaryPoint::new(rotate(&u, zeta.coords())).unwrap();
            // skip points within float noise of the defining boundary
            let gap = (c(1.0, 0.0) - inner(&z, zeta.coords())).norm();
            let margin = (1.0 - z.iter().map(|v| v.norm_sqr()).sum::<f64>()) - gap;
            if margin.abs() < 1e-9 {
                continue;
            }
            assert_eq!(
                in_admissible_region(&z, &zeta),
                in_admissible_region(&uz, &uzeta)
            );
        }
    }

    #[test]
    fn dr_region_membership() {
        for &r in &[0.3, 0.6, 0.9] {
            assert!(in_dr_region(c(r + 0.01 * (1.0 - r), 0.0), r));
            assert!(!in_dr_region(c(0.0, 0.0), r));
            assert!(!in_dr_region(c(r - 0.05, 0.0), r));
            // equivalent circle form
            let w = c(r + 0.3 * (1.0 - r), 0.1 * (1.0 - r));
            let direct = in_dr_region(w, r);
            let circle = w.norm() < 1.0 && (w - 1.0 / r).norm() < 1.0 / r - r;
            assert_eq!(direct, circle);
        }
    }

    #[test]
    fn admissible_volume_is_finite_and_matches_plain_mc() {
        // t = -(n+1) turns the integrand into 1: the truncated region volume
        let cfg = QuadConfig {
            mc_samples: 400_000,
            ..QuadConfig::default()
        };
        let zeta = BoundaryPoint::axis(1);
        let eps = 1e-3;
        let via_sampler =
            admissible_integral(-(1.0 + 1.0), &zeta, eps, RegionForm::InvariantPower, 1, &cfg)
                .unwrap();
        assert!(via_sampler.converged);
        let plain = region_integral_mc(
            |_| c(1.0, 0.0),
            |z| in_admissible_region(z, &zeta) && norm(z) < 1.0 - eps,
            1,
            0.0,
            &cfg,
        )
        .unwrap();
        let tol = 4.0 * (via_sampler.stderr.unwrap() + plain.stderr.unwrap()) + 1e-4;
        assert!(
            (via_sampler.real() - plain.real()).abs() < tol,
            "{} vs {}",
            via_sampler.real(),
            plain.real()
        );
        assert!(via_sampler.real() > 0.0 && via_sampler.real() < 1.0);
    }

    #[test]
    fn admissible_forms_are_comparable() {
        let cfg = QuadConfig {
            mc_samples: 200_000,
            ..QuadConfig::default()
        };
        let zeta = BoundaryPoint::axis(2);
        let eps = 2f64.powi(-8);
        let t = 0.5;
        let a = admissible_integral(t, &zeta, eps, RegionForm::InvariantPower, 2, &cfg)
            .unwrap()
            .real();
        let b = admissible_integral(t, &zeta, eps, RegionForm::KernelPower, 2, &cfg)
            .unwrap()
            .real();
        let band = 2.0f64.powf(2.0 + 1.0 + t);
        let ratio = a / b;
        assert!(ratio > 1.0 / band && ratio < band, "ratio {ratio}");
    }

    #[test]
    fn carleson_g_point_masses() {
        let cfg = QuadConfig::default();
        let w0 = vec![(0.5, 0.0)];
        let spec = CarlesonSpec {
            measure: CarlesonMeasure::WeightedSamples {
                points: vec![w0],
                masses: vec![0.7],
            },
            q: 1.5,
            m: 0,
            p: 3.0,
        };
        // mass centered at z: fully captured
        let z = vec![c(0.5, 0.0)];
        let g = carleson_g(&spec, &z, 1, &cfg).unwrap();
        let want = 0.7 * (1.0 - 0.25f64).powf(-(1.5 * 0.0 + 1.0));
        assert!((g - want).abs() < 1e-12);
        // far center: empty intersection
        let z = vec![c(-0.5, 0.0)];
        assert_eq!(carleson_g(&spec, &z, 1, &cfg).unwrap(), 0.0);
    }

    #[test]
    fn carleson_g_radial_weight_tracks_power_band() {
        // with beta = mq + alpha, g stays within a fixed band of
        // (1-|z|^2)^{1+alpha}
        let cfg = QuadConfig::default();
        let alpha = 0.0;
        let spec = CarlesonSpec::for_embedding(3.0, 1.5, alpha).unwrap();
        assert_eq!(spec.m, 0);
        for &r in &[0.0, 0.4, 0.8, 0.95] {
            let z = vec![c(r, 0.0)];
            let g = carleson_g(&spec, &z, 1, &cfg).unwrap();
            let ratio = g / (1.0 - r * r).powf(1.0 + alpha);
            assert!((0.05..5.0).contains(&ratio), "r={r}: ratio {ratio}");
        }
    }

    #[test]
    fn area_function_constant_g() {
        // alpha = -1 gives g identically 1 and A_infinity = 1
        let cfg = QuadConfig::default();
        let zeta = BoundaryPoint::axis(1);
        let v = area_function(
            &GFunction::PowerWeight { exponent: 0.0 },
            &zeta,
            AreaOrder::Infinity,
            1e-3,
            1,
            &cfg,
        )
        .unwrap();
        assert!((v - 1.0).abs() < 1e-12);
    }

    #[test]
    fn area_function_sup_approached_at_center() {
        let cfg = QuadConfig::default();
        let zeta = BoundaryPoint::axis(1);
        for &alpha in &[-0.5, 0.0, 1.0] {
            let v = area_function(
                &GFunction::PowerWeight { exponent: 1.0 + alpha },
                &zeta,
                AreaOrder::Infinity,
                1e-3,
                1,
                &cfg,
            )
            .unwrap();
            assert!((v - 1.0).abs() < 1e-3, "alpha={alpha}: {v}");
        }
    }

    #[test]
    fn unitary_frame_is_orthonormal() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for n in 1..=3usize {
            let u = random_unitary(&mut rng, n);
            assert_eq!(u.len(), n);
            for i in 0..n {
                for j in 0..n {
                    let dot = inner(&u[i], &u[j]);
                    let want = if i == j { 1.0 } else { 0.0 };
                    assert!((dot.norm() - want).abs() < 1e-10);
                }
            }
        }
    }

    fn random_interior_point(rng: &mut ChaCha8Rng, n: usize, max_r: f64) -> Vec<Complex64> {
        loop {
            let v: Vec<Complex64> = (0..n)
                .map(|_| {
                    let re: f64 = StandardNormal.sample(rng);
                    let im: f64 = StandardNormal.sample(rng);
                    Complex64::new(re, im)
                })
                .collect();
            let nrm = norm(&v);
            if nrm > 1e-9 {
                let scale = rng.gen::<f64>().powf(1.0 / (2.0 * n as f64)) * max_r / nrm;
                return v.into_iter().map(|x| x * scale).collect();
            }
        }
    }
}
