//! Decision engine for embeddings, compact embeddings and tight fittings
//! between Hardy spaces `H^p` and weighted Bergman spaces `A^p_alpha` on the
//! unit ball of C^n.
//!
//! The complete truth table over (n, p, q, alpha, beta) is encoded here as a
//! pure function; every verdict carries a machine-readable tag naming the
//! theorem or lemma that decides it.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

/// Default tolerance for boundary comparisons on floating-point parameters.
/// Ties within the tolerance are resolved as equality, so boundary cases
/// (the mathematically interesting ones) are never flipped by float drift.
pub const DEFAULT_TOL: f64 = 1e-12;

/// One of the two space families being compared.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum SpaceSpec {
    /// Hardy space `H^p`, p > 0.
    Hardy { p: f64 },
    /// Weighted Bergman space `A^p_alpha`, p > 0, alpha real.
    Bergman { p: f64, alpha: f64 },
}

impl SpaceSpec {
    pub fn hardy(p: f64) -> Self {
        SpaceSpec::Hardy { p }
    }

    pub fn bergman(p: f64, alpha: f64) -> Self {
        SpaceSpec::Bergman { p, alpha }
    }

    /// Integrability exponent of the space.
    pub fn exponent(&self) -> f64 {
        match *self {
            SpaceSpec::Hardy { p } => p,
            SpaceSpec::Bergman { p, .. } => p,
        }
    }

    /// Bergman weight, if this is a Bergman space.
    pub fn weight(&self) -> Option<f64> {
        match *self {
            SpaceSpec::Hardy { .. } => None,
            SpaceSpec::Bergman { alpha, .. } => Some(alpha),
        }
    }

    /// Validates p > 0 (alpha may be any real number).
    pub fn validate(&self) -> Result<()> {
        let p = self.exponent();
        if !(p > 0.0) || !p.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "exponent must be positive and finite, got {p}"
            )));
        }
        if let Some(a) = self.weight() {
            if !a.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "weight must be finite, got {a}"
                )));
            }
        }
        Ok(())
    }

    fn same_space(&self, other: &SpaceSpec, tol: f64) -> bool {
        match (*self, *other) {
            (SpaceSpec::Hardy { p }, SpaceSpec::Hardy { p: q }) => cmp_tol(p, q, tol).is_eq(),
            (SpaceSpec::Bergman { p, alpha }, SpaceSpec::Bergman { p: q, alpha: beta }) => {
                cmp_tol(p, q, tol).is_eq() && cmp_tol(alpha, beta, tol).is_eq()
            }
            _ => false,
        }
    }
}

impl fmt::Display for SpaceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            SpaceSpec::Hardy { p } => write!(f, "H:{p}"),
            SpaceSpec::Bergman { p, alpha } => write!(f, "A:{p}:{alpha}"),
        }
    }
}

/// Parses `H:p` and `A:p:alpha`, where each number is a decimal or an exact
/// rational literal such as `3/2`.
impl FromStr for SpaceSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let spec = match parts.as_slice() {
            [h, p] if h.eq_ignore_ascii_case("h") => SpaceSpec::hardy(parse_number(p)?),
            [a, p, alpha] if a.eq_ignore_ascii_case("a") => {
                SpaceSpec::bergman(parse_number(p)?, parse_number(alpha)?)
            }
            _ => {
                return Err(Error::InvalidParameter(format!(
                    "cannot parse space spec `{s}` (expected H:p or A:p:alpha)"
                )))
            }
        };
        spec.validate()?;
        Ok(spec)
    }
}

/// Parses a decimal or rational (`num/den`) literal.
pub fn parse_number(s: &str) -> Result<f64> {
    let s = s.trim();
    if let Some((num, den)) = s.split_once('/') {
        let n: f64 = num
            .trim()
            .parse()
            .map_err(|_| Error::InvalidParameter(format!("bad rational numerator `{num}`")))?;
        let d: f64 = den
            .trim()
            .parse()
            .map_err(|_| Error::InvalidParameter(format!("bad rational denominator `{den}`")))?;
        if d == 0.0 {
            return Err(Error::InvalidParameter("rational with zero denominator".into()));
        }
        Ok(n / d)
    } else {
        s.parse()
            .map_err(|_| Error::InvalidParameter(format!("bad numeric literal `{s}`")))
    }
}

/// Three-way comparison with an equality band of width `tol`.
pub fn cmp_tol(a: f64, b: f64, tol: f64) -> Ordering {
    if (a - b).abs() <= tol {
        Ordering::Equal
    } else if a < b {
        Ordering::Less
    } else {
        Ordering::Greater
    }
}

/// Compactness of an embedding; not applicable when there is no containment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Compactness {
    Yes,
    No,
    NotApplicable,
}

/// Which theorem or lemma decides a verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Basis {
    /// Theorem A(a): `A^p_alpha within H^q`, p < q.
    #[serde(rename = "ThmA.a")]
    ThmAa,
    /// Theorem A(b): `H^p within A^q_alpha`, p < q.
    #[serde(rename = "ThmA.b")]
    ThmAb,
    /// Theorem B(a): `A^p_alpha within H^q`, p > q.
    #[serde(rename = "ThmB.a")]
    ThmBa,
    /// Theorem B(b): `H^p within A^q_alpha`, p > q.
    #[serde(rename = "ThmB.b")]
    ThmBb,
    /// Theorem C(a): Bergman into Bergman, p <= q.
    #[serde(rename = "ThmC.a")]
    ThmCa,
    /// Theorem C(b): Bergman into Bergman, p > q.
    #[serde(rename = "ThmC.b")]
    ThmCb,
    /// Theorem 13(a): `A^p_alpha within H^p`, p <= 2.
    #[serde(rename = "Thm13.a")]
    Thm13a,
    /// Theorem 13(b): `A^p_alpha within H^p`, p > 2.
    #[serde(rename = "Thm13.b")]
    Thm13b,
    /// Theorem 13(c): `H^p within A^p_alpha`, p >= 2.
    #[serde(rename = "Thm13.c")]
    Thm13c,
    /// Theorem 13(d): `H^p within A^p_alpha`, p < 2.
    #[serde(rename = "Thm13.d")]
    Thm13d,
    /// Lemma 11(b): `H^2 = A^2_{-1}`.
    #[serde(rename = "Lemma11.b")]
    Lemma11b,
    /// Hardy nesting `H^p within H^q` for p >= q, compact for p > q (remark).
    #[serde(rename = "S6.remark")]
    S6Remark,
    /// Hardy non-nesting for p < q, from sharpness of the growth envelope.
    #[serde(rename = "Lemma3")]
    Lemma3,
    /// Identical parameters.
    #[serde(rename = "identity")]
    Identity,
}

impl Basis {
    pub fn as_str(&self) -> &'static str {
        match self {
            Basis::ThmAa => "ThmA.a",
            Basis::ThmAb => "ThmA.b",
            Basis::ThmBa => "ThmB.a",
            Basis::ThmBb => "ThmB.b",
            Basis::ThmCa => "ThmC.a",
            Basis::ThmCb => "ThmC.b",
            Basis::Thm13a => "Thm13.a",
            Basis::Thm13b => "Thm13.b",
            Basis::Thm13c => "Thm13.c",
            Basis::Thm13d => "Thm13.d",
            Basis::Lemma11b => "Lemma11.b",
            Basis::S6Remark => "S6.remark",
            Basis::Lemma3 => "Lemma3",
            Basis::Identity => "identity",
        }
    }
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Outcome of a classification query.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub contains: bool,
    pub equal: bool,
    pub proper: bool,
    pub compact: Compactness,
    pub basis: Basis,
}

impl Verdict {
    fn contained(equal: bool, compact: bool, basis: Basis) -> Self {
        // identity maps and two-sided inclusions are never compact
        let compact = if equal { Compactness::No } else if compact { Compactness::Yes } else { Compactness::No };
        Verdict {
            contains: true,
            equal,
            proper: !equal,
            compact,
            basis,
        }
    }

    fn not_contained(basis: Basis) -> Self {
        Verdict {
            contains: false,
            equal: false,
            proper: false,
            compact: Compactness::NotApplicable,
            basis,
        }
    }

    /// Structural invariants of the type.
    pub fn check_invariants(&self) -> bool {
        let eq_implies_contains = !self.equal || self.contains;
        let proper_iff = self.proper == (self.contains && !self.equal);
        let na_iff = (self.compact == Compactness::NotApplicable) == !self.contains;
        let eq_implies_noncompact = !self.equal || self.compact == Compactness::No;
        eq_implies_contains && proper_iff && na_iff && eq_implies_noncompact
    }
}

/// Maximal growth rate of functions in a space near the boundary.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "envelope", rename_all = "lowercase")]
pub enum GrowthEnvelope {
    /// |f(z)| = O((1-|z|^2)^{-exponent}).
    Power { exponent: f64 },
    /// At most logarithmic growth (Bergman with n+1+alpha <= 0).
    Logarithmic,
}

/// Status of a tight-fitting claim.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TightStatus {
    /// Settled on the disc (n = 1), modulo extremal uniqueness.
    ProvedN1,
    /// Conjectured for n >= 2.
    Conjectured,
    NotApplicable,
}

/// Whether an embedding is proper, contractive and non-compact, and the
/// conjectured extremal kernel power when it is.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TightFitVerdict {
    pub is_tight: bool,
    pub status: TightStatus,
    /// Kernel power s of the conjectured extremals c(1-<z,a>)^{-s}.
    pub extremal_exponent: Option<f64>,
}

fn validate_pair(source: &SpaceSpec, target: &SpaceSpec, n: u32) -> Result<()> {
    source.validate()?;
    target.validate()?;
    if n < 1 {
        return Err(Error::InvalidParameter(format!("dimension n must be >= 1, got {n}")));
    }
    Ok(())
}

/// Decides `source within target` on the ball of dimension `n`, with the
/// default boundary tolerance.
pub fn classify(source: &SpaceSpec, target: &SpaceSpec, n: u32) -> Result<Verdict> {
    classify_with_tol(source, target, n, DEFAULT_TOL)
}

/// Decides `source within target` with an explicit boundary tolerance.
pub fn classify_with_tol(source: &SpaceSpec, target: &SpaceSpec, n: u32, tol: f64) -> Result<Verdict> {
    validate_pair(source, target, n)?;
    let nf = n as f64;

    // identical parameters: the identity map
    if source.same_space(target, tol) {
        return Ok(Verdict::contained(true, false, Basis::Identity));
    }
    // the single cross-family equality H^2 = A^2_{-1}
    if h2_a2m1_pair(source, target, tol) {
        return Ok(Verdict::contained(true, false, Basis::Lemma11b));
    }

    let verdict = match (*source, *target) {
        (SpaceSpec::Hardy { p }, SpaceSpec::Hardy { p: q }) => match cmp_tol(p, q, tol) {
            Ordering::Less => Verdict::not_contained(Basis::Lemma3),
            Ordering::Equal => Verdict::contained(true, false, Basis::Identity),
            Ordering::Greater => Verdict::contained(false, true, Basis::S6Remark),
        },
        (SpaceSpec::Bergman { p, alpha }, SpaceSpec::Hardy { p: q }) => {
            if cmp_tol(p, q, tol) == Ordering::Less {
                // Theorem A(a): (n+1+alpha)/p <= n/q, compact iff strict
                match cmp_tol((nf + 1.0 + alpha) / p, nf / q, tol) {
                    Ordering::Less => Verdict::contained(false, true, Basis::ThmAa),
                    Ordering::Equal => Verdict::contained(false, false, Basis::ThmAa),
                    Ordering::Greater => Verdict::not_contained(Basis::ThmAa),
                }
            } else {
                // Theorem B(a) / Theorem 13(a)-(b): alpha <= -1 (q <= 2) or
                // alpha < -1 (q > 2); compact iff alpha < -1
                let p_eq_q = cmp_tol(p, q, tol) == Ordering::Equal;
                let q_le_2 = cmp_tol(q, 2.0, tol) != Ordering::Greater;
                let basis = match (p_eq_q, q_le_2) {
                    (true, true) => Basis::Thm13a,
                    (true, false) => Basis::Thm13b,
                    (false, _) => Basis::ThmBa,
                };
                let ord = cmp_tol(alpha, -1.0, tol);
                let contains = if q_le_2 {
                    ord != Ordering::Greater
                } else {
                    ord == Ordering::Less
                };
                if contains {
                    Verdict::contained(false, ord == Ordering::Less, basis)
                } else {
                    Verdict::not_contained(basis)
                }
            }
        }
        (SpaceSpec::Hardy { p }, SpaceSpec::Bergman { p: q, alpha }) => {
            if cmp_tol(p, q, tol) == Ordering::Less {
                // Theorem A(b): n/p <= (n+1+alpha)/q, compact iff strict
                match cmp_tol(nf / p, (nf + 1.0 + alpha) / q, tol) {
                    Ordering::Less => Verdict::contained(false, true, Basis::ThmAb),
                    Ordering::Equal => Verdict::contained(false, false, Basis::ThmAb),
                    Ordering::Greater => Verdict::not_contained(Basis::ThmAb),
                }
            } else {
                // Theorem B(b) / Theorem 13(c)-(d): alpha > -1 (q < 2) or
                // alpha >= -1 (q >= 2); compact iff alpha > -1
                let p_eq_q = cmp_tol(p, q, tol) == Ordering::Equal;
                let q_ge_2 = cmp_tol(q, 2.0, tol) != Ordering::Less;
                let basis = match (p_eq_q, q_ge_2) {
                    (true, true) => Basis::Thm13c,
                    (true, false) => Basis::Thm13d,
                    (false, _) => Basis::ThmBb,
                };
                let ord = cmp_tol(alpha, -1.0, tol);
                let contains = if q_ge_2 {
                    ord != Ordering::Less
                } else {
                    ord == Ordering::Greater
                };
                if contains {
                    Verdict::contained(false, ord == Ordering::Greater, basis)
                } else {
                    Verdict::not_contained(basis)
                }
            }
        }
        (SpaceSpec::Bergman { p, alpha }, SpaceSpec::Bergman { p: q, alpha: beta }) => {
            if cmp_tol(p, q, tol) != Ordering::Greater {
                // Theorem C(a): (n+1+alpha)/p <= (n+1+beta)/q, compact iff strict
                match cmp_tol((nf + 1.0 + alpha) / p, (nf + 1.0 + beta) / q, tol) {
                    Ordering::Less => Verdict::contained(false, true, Basis::ThmCa),
                    Ordering::Equal => Verdict::contained(false, false, Basis::ThmCa),
                    Ordering::Greater => Verdict::not_contained(Basis::ThmCa),
                }
            } else {
                // Theorem C(b): strict (1+alpha)/p < (1+beta)/q; always compact
                if cmp_tol((1.0 + alpha) / p, (1.0 + beta) / q, tol) == Ordering::Less {
                    Verdict::contained(false, true, Basis::ThmCb)
                } else {
                    Verdict::not_contained(Basis::ThmCb)
                }
            }
        }
    };
    debug_assert!(verdict.check_invariants());
    Ok(verdict)
}

fn h2_a2m1_pair(a: &SpaceSpec, b: &SpaceSpec, tol: f64) -> bool {
    let is_h2 = |s: &SpaceSpec| matches!(s, SpaceSpec::Hardy { p } if cmp_tol(*p, 2.0, tol).is_eq());
    let is_a2m1 = |s: &SpaceSpec| {
        matches!(s, SpaceSpec::Bergman { p, alpha }
            if cmp_tol(*p, 2.0, tol).is_eq() && cmp_tol(*alpha, -1.0, tol).is_eq())
    };
    (is_h2(a) && is_a2m1(b)) || (is_a2m1(a) && is_h2(b))
}

/// Maximal boundary growth rate of the space.
pub fn growth_envelope(space: &SpaceSpec, n: u32) -> Result<GrowthEnvelope> {
    space.validate()?;
    if n < 1 {
        return Err(Error::InvalidParameter(format!("dimension n must be >= 1, got {n}")));
    }
    let nf = n as f64;
    Ok(match *space {
        SpaceSpec::Hardy { p } => GrowthEnvelope::Power { exponent: nf / p },
        SpaceSpec::Bergman { p, alpha } => {
            if cmp_tol(nf + 1.0 + alpha, 0.0, DEFAULT_TOL) == Ordering::Greater {
                GrowthEnvelope::Power {
                    exponent: (nf + 1.0 + alpha) / p,
                }
            } else {
                GrowthEnvelope::Logarithmic
            }
        }
    })
}

/// Decides whether `source within target` is a tight fitting (proper,
/// contractive, non-compact) and reports the conjectured extremal kernel
/// power. Tight fittings only arise for natural norms, i.e. Bergman weights
/// above -1.
pub fn tight_fitting(source: &SpaceSpec, target: &SpaceSpec, n: u32) -> Result<TightFitVerdict> {
    tight_fitting_with_tol(source, target, n, DEFAULT_TOL)
}

pub fn tight_fitting_with_tol(
    source: &SpaceSpec,
    target: &SpaceSpec,
    n: u32,
    tol: f64,
) -> Result<TightFitVerdict> {
    validate_pair(source, target, n)?;
    let nf = n as f64;
    let not_tight = TightFitVerdict {
        is_tight: false,
        status: TightStatus::NotApplicable,
        extremal_exponent: None,
    };
    let status = if n == 1 { TightStatus::ProvedN1 } else { TightStatus::Conjectured };

    let verdict = match (*source, *target) {
        (SpaceSpec::Bergman { p, alpha }, SpaceSpec::Bergman { p: q, alpha: beta }) => {
            let weights_natural = alpha > -1.0 + tol && beta > -1.0 + tol;
            let p_lt_q = cmp_tol(p, q, tol) == Ordering::Less;
            let on_curve =
                cmp_tol((nf + 1.0 + alpha) * q, (nf + 1.0 + beta) * p, tol).is_eq();
            if weights_natural && p_lt_q && on_curve {
                TightFitVerdict {
                    is_tight: true,
                    status,
                    extremal_exponent: Some(2.0 * (nf + 1.0 + alpha) / p),
                }
            } else {
                not_tight
            }
        }
        (SpaceSpec::Hardy { p }, SpaceSpec::Bergman { p: q, alpha }) => {
            let weight_natural = alpha > -1.0 + tol;
            let p_lt_q = cmp_tol(p, q, tol) == Ordering::Less;
            let on_curve = cmp_tol(nf * q, (nf + 1.0 + alpha) * p, tol).is_eq();
            if weight_natural && p_lt_q && on_curve {
                TightFitVerdict {
                    is_tight: true,
                    status,
                    extremal_exponent: Some(2.0 * nf / p),
                }
            } else {
                not_tight
            }
        }
        // no tight fitting of the form A^p_alpha within H^q with alpha > -1,
        // and Hardy-into-Hardy inclusions are compact or identical
        _ => not_tight,
    };
    Ok(verdict)
}
