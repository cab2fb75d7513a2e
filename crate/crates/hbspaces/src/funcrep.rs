//! Exact representations of the holomorphic test functions used throughout:
//! multi-index Taylor polynomials and kernel-power combinations
//! `pref * sum_k c_k <z,a>^k (1 - <z,a>)^{-s-k}`.
//!
//! Both families are closed under the radial differential operator
//! `R = sum_j z_j d/dz_j`, so derivative-based norms never fall back to
//! numeric differentiation.

use crate::error::{Error, Result};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Default cap on Taylor truncation degree (combinatorial growth guard).
pub const TRUNCATION_CAP: u32 = 30;

/// Multi-index m = (m_1, ..., m_n) with order |m| = sum m_j.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct MultiIndex(pub Vec<u32>);

impl MultiIndex {
    pub fn order(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn dimension(&self) -> usize {
        self.0.len()
    }

    /// m! = prod m_j!
    pub fn factorial(&self) -> f64 {
        self.0.iter().map(|&m| factorial(m)).product()
    }
}

pub(crate) fn factorial(m: u32) -> f64 {
    (1..=m as u64).map(|k| k as f64).product()
}

/// Sparse polynomial sum a_m z^m keyed by multi-index.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TaylorPolynomial {
    pub dimension: usize,
    pub coefficients: BTreeMap<MultiIndex, Complex64>,
}

impl TaylorPolynomial {
    pub fn new(dimension: usize) -> Self {
        TaylorPolynomial {
            dimension,
            coefficients: BTreeMap::new(),
        }
    }

    pub fn constant(dimension: usize, c: Complex64) -> Self {
        let mut p = Self::new(dimension);
        p.set(MultiIndex(vec![0; dimension]), c);
        p
    }

    /// Single monomial c * z^m.
    pub fn monomial(m: MultiIndex, c: Complex64) -> Self {
        let mut p = Self::new(m.dimension());
        p.set(m, c);
        p
    }

    pub fn set(&mut self, m: MultiIndex, c: Complex64) {
        assert_eq!(m.dimension(), self.dimension, "multi-index dimension mismatch");
        if c == Complex64::new(0.0, 0.0) {
            self.coefficients.remove(&m);
        } else {
            self.coefficients.insert(m, c);
        }
    }

    pub fn add_term(&mut self, m: MultiIndex, c: Complex64) {
        assert_eq!(m.dimension(), self.dimension, "multi-index dimension mismatch");
        let entry = self.coefficients.entry(m).or_insert(Complex64::new(0.0, 0.0));
        *entry += c;
    }

    /// Max |m| over nonzero coefficients; zero polynomial has degree 0.
    pub fn degree(&self) -> u32 {
        self.coefficients.keys().map(MultiIndex::order).max().unwrap_or(0)
    }

    pub fn evaluate(&self, z: &[Complex64]) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (m, &c) in &self.coefficients {
            let mut term = c;
            for (j, &mj) in m.0.iter().enumerate() {
                term *= z[j].powu(mj);
            }
            acc += term;
        }
        acc
    }

    pub fn scale(&self, c: Complex64) -> Self {
        let mut out = self.clone();
        for v in out.coefficients.values_mut() {
            *v *= c;
        }
        out
    }

    fn radial_derivative(&self) -> Self {
        let mut out = TaylorPolynomial::new(self.dimension);
        for (m, &c) in &self.coefficients {
            let o = m.order();
            if o > 0 {
                out.set(m.clone(), c * o as f64);
            }
        }
        out
    }
}

/// Combination `prefactor * sum_k c_k w^k (1-w)^{-s-k}` with `w = <z,a>`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KernelCombo {
    pub dimension: usize,
    /// Pole point a with |a| < 1.
    pub pole: Vec<Complex64>,
    /// Base exponent s > 0.
    pub base_exponent: f64,
    /// (power k, coefficient c_k); powers kept distinct and sorted.
    pub terms: Vec<(u32, Complex64)>,
    pub prefactor: Complex64,
}

impl KernelCombo {
    /// Pure power `(1 - <z,a>)^{-s}`.
    pub fn pure_power(pole: Vec<Complex64>, s: f64) -> Result<Self> {
        Self::new(pole, s, vec![(0, Complex64::new(1.0, 0.0))], Complex64::new(1.0, 0.0))
    }

    pub fn new(
        pole: Vec<Complex64>,
        s: f64,
        terms: Vec<(u32, Complex64)>,
        prefactor: Complex64,
    ) -> Result<Self> {
        if !(s > 0.0) {
            return Err(Error::InvalidParameter(format!("base exponent must be positive, got {s}")));
        }
        let norm_a = norm(&pole);
        if norm_a >= 1.0 {
            return Err(Error::OutsideDomain(format!("pole |a| = {norm_a} must be < 1")));
        }
        let mut merged: BTreeMap<u32, Complex64> = BTreeMap::new();
        for (k, c) in terms {
            *merged.entry(k).or_insert(Complex64::new(0.0, 0.0)) += c;
        }
        Ok(KernelCombo {
            dimension: pole.len(),
            pole,
            base_exponent: s,
            terms: merged.into_iter().collect(),
            prefactor,
        })
    }

    pub fn pole_radius(&self) -> f64 {
        norm(&self.pole)
    }

    /// `w = <z,a> = sum_j z_j conj(a_j)`.
    pub fn pairing(&self, z: &[Complex64]) -> Complex64 {
        inner(z, &self.pole)
    }

    /// Evaluates at pairing value w (|w| < 1); the closed form, never a series.
    pub fn evaluate_at_pairing(&self, w: Complex64) -> Complex64 {
        let one = Complex64::new(1.0, 0.0);
        let base = one - w;
        let mut acc = Complex64::new(0.0, 0.0);
        for &(k, c) in &self.terms {
            // (1-w)^{-s-k}: Re(1-w) > 0 for |w| < 1, principal branch
            acc += c * w.powu(k) * base.powf(-(self.base_exponent + k as f64));
        }
        self.prefactor * acc
    }

    pub fn evaluate(&self, z: &[Complex64]) -> Complex64 {
        self.evaluate_at_pairing(self.pairing(z))
    }

    pub fn scale(&self, c: Complex64) -> Self {
        let mut out = self.clone();
        out.prefactor *= c;
        out
    }

    /// R acts on g(w) as w g'(w); one application maps term (k, c) to
    /// (k, c k) + (k+1, c (s+k)).
    fn radial_derivative(&self) -> Self {
        let mut merged: BTreeMap<u32, Complex64> = BTreeMap::new();
        for &(k, c) in &self.terms {
            *merged.entry(k).or_insert(Complex64::new(0.0, 0.0)) += c * k as f64;
            *merged.entry(k + 1).or_insert(Complex64::new(0.0, 0.0)) +=
                c * (self.base_exponent + k as f64);
        }
        KernelCombo {
            dimension: self.dimension,
            pole: self.pole.clone(),
            base_exponent: self.base_exponent,
            terms: merged.into_iter().collect(),
            prefactor: self.prefactor,
        }
    }
}

/// A holomorphic test function in one of the two exact representations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum HoloFunction {
    Poly(TaylorPolynomial),
    Kernel(KernelCombo),
}

impl HoloFunction {
    pub fn constant(dimension: usize, c: Complex64) -> Self {
        HoloFunction::Poly(TaylorPolynomial::constant(dimension, c))
    }

    pub fn dimension(&self) -> usize {
        match self {
            HoloFunction::Poly(p) => p.dimension,
            HoloFunction::Kernel(k) => k.dimension,
        }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        match self {
            HoloFunction::Poly(p) => HoloFunction::Poly(p.scale(c)),
            HoloFunction::Kernel(k) => HoloFunction::Kernel(k.scale(c)),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("HoloFunction serializes")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        serde_json::from_value(v.clone())
            .map_err(|e| Error::InvalidParameter(format!("bad HoloFunction JSON: {e}")))
    }
}

fn inner(z: &[Complex64], a: &[Complex64]) -> Complex64 {
    z.iter().zip(a).map(|(zi, ai)| zi * ai.conj()).sum()
}

fn norm(z: &[Complex64]) -> f64 {
    z.iter().map(|zi| zi.norm_sqr()).sum::<f64>().sqrt()
}

/// Exact pointwise value of `f` at z in the closed ball.
pub fn evaluate(f: &HoloFunction, z: &[Complex64]) -> Result<Complex64> {
    if z.len() != f.dimension() {
        return Err(Error::DimensionMismatch {
            expected: f.dimension(),
            got: z.len(),
        });
    }
    let r = norm(z);
    if r > 1.0 + 1e-12 {
        return Err(Error::OutsideDomain(format!("|z| = {r} > 1")));
    }
    Ok(match f {
        HoloFunction::Poly(p) => p.evaluate(z),
        HoloFunction::Kernel(k) => k.evaluate(z),
    })
}

/// Exact Rf, staying inside the representation family.
pub fn radial_derivative(f: &HoloFunction) -> HoloFunction {
    match f {
        HoloFunction::Poly(p) => HoloFunction::Poly(p.radial_derivative()),
        HoloFunction::Kernel(k) => HoloFunction::Kernel(k.radial_derivative()),
    }
}

/// N-fold composition of the radial derivative; N = 0 is the identity.
pub fn radial_derivative_power(f: &HoloFunction, n: u32) -> HoloFunction {
    let mut out = f.clone();
    for _ in 0..n {
        out = radial_derivative(&out);
    }
    out
}

/// Taylor polynomial agreeing with the kernel combination through the stated
/// total degree, via the binomial series `(1-w)^{-s} = sum_j (s)_j w^j / j!`
/// and multinomial expansion of `w^d`.
pub fn truncate_to_taylor(f: &KernelCombo, degree: u32) -> Result<TaylorPolynomial> {
    if degree > TRUNCATION_CAP {
        return Err(Error::DegreeCapExceeded {
            degree,
            cap: TRUNCATION_CAP,
        });
    }
    let n = f.dimension;
    // coefficient of w^d across all terms: sum over k <= d of c_k (s+k)_{d-k}/(d-k)!
    let mut w_coeffs = vec![Complex64::new(0.0, 0.0); degree as usize + 1];
    for &(k, c) in &f.terms {
        if k > degree {
            continue;
        }
        for d in k..=degree {
            let j = d - k;
            let poch = crate::special::pochhammer(f.base_exponent + k as f64, j);
            w_coeffs[d as usize] += c * poch / factorial(j);
        }
    }

    // expand w^d = (sum_j z_j conj(a_j))^d into monomials
    let mut out = TaylorPolynomial::new(n);
    let conj_a: Vec<Complex64> = f.pole.iter().map(|a| a.conj()).collect();
    for (d, &wc) in w_coeffs.iter().enumerate() {
        if wc == Complex64::new(0.0, 0.0) {
            continue;
        }
        for m in multi_indices_of_order(n, d as u32) {
            let mut coeff = wc * f.prefactor * multinomial(d as u32, &m.0);
            for (j, &mj) in m.0.iter().enumerate() {
                coeff *= conj_a[j].powu(mj);
            }
            if coeff != Complex64::new(0.0, 0.0) {
                out.add_term(m, coeff);
            }
        }
    }
    Ok(out)
}

/// All multi-indices of length n with |m| = order.
pub fn multi_indices_of_order(n: usize, order: u32) -> Vec<MultiIndex> {
    let mut out = Vec::new();
    let mut current = vec![0u32; n];
    fill(&mut out, &mut current, 0, order);
    fn fill(out: &mut Vec<MultiIndex>, current: &mut Vec<u32>, pos: usize, remaining: u32) {
        if pos + 1 == current.len() {
            current[pos] = remaining;
            out.push(MultiIndex(current.clone()));
            return;
        }
        for v in 0..=remaining {
            current[pos] = v;
            fill(out, current, pos + 1, remaining - v);
        }
    }
    out
}

/// All multi-indices of length n with |m| <= max_order.
pub fn multi_indices_up_to(n: usize, max_order: u32) -> Vec<MultiIndex> {
    (0..=max_order).flat_map(|d| multi_indices_of_order(n, d)).collect()
}

fn multinomial(d: u32, parts: &[u32]) -> f64 {
    // product of binomials keeps every partial product integral
    let mut rem = d;
    let mut acc: u64 = 1;
    for &m in parts {
        acc *= binomial_u64(rem, m);
        rem -= m;
    }
    acc as f64
}

fn binomial_u64(n: u32, k: u32) -> u64 {
    let k = k.min(n - k.min(n));
    let mut acc: u64 = 1;
    for j in 0..k {
        acc = acc * (n - j) as u64 / (j + 1) as u64;
    }
    acc
}

/// Degree-`degree` polynomial with all |m| <= degree populated by complex
/// standard-normal coefficients; deterministic for a fixed seed.
pub fn random_polynomial(n: usize, degree: u32, seed: u64) -> TaylorPolynomial {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = TaylorPolynomial::new(n);
    for m in multi_indices_up_to(n, degree) {
        let re: f64 = StandardNormal.sample(&mut rng);
        let im: f64 = StandardNormal.sample(&mut rng);
        out.set(m, Complex64::new(re, im) / 2f64.sqrt());
    }
    out
}
