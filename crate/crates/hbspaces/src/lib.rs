//! Embeddings and compact embeddings between Hardy spaces `H^p` and weighted
//! Bergman spaces `A^p_alpha` on the unit ball of C^n, together with a
//! numerical harness that verifies the sharpness, norm-identity, asymptotic
//! and contractivity claims behind the classification at desk scale.
//!
//! # Modules
//!
//! - [`params`]: the pure decision engine — containment, compactness,
//!   equality, growth envelopes and tight fittings over (n, p, q, alpha, beta);
//! - [`funcrep`]: exact holomorphic test functions (sparse Taylor polynomials
//!   and kernel-power combinations) closed under the radial derivative;
//! - [`integrate`]: deterministic quadrature on the sphere and the weighted
//!   ball, plus reproducible Monte Carlo for membership-defined regions;
//! - [`norms`]: Hardy and weighted Bergman norms for all real weights, with
//!   closed-form oracles;
//! - [`geometry`]: hyperbolic geometry of the ball — Mobius involutions,
//!   Bergman metric balls, admissible approach regions and area functions;
//! - [`experiments`]: parameter sweeps that turn each sharpness claim into a
//!   pass/fail table;
//! - [`acceptance`]: the end-to-end verification suite used by `verify-all`.
//!
//! # Normalization convention
//!
//! All measures are probability measures: sigma on the sphere, volume v with
//! v(B_n) = 1, and dv_alpha = c_alpha (1-|z|^2)^alpha dv for alpha > -1.
//! Derivative-based norms (weights alpha <= -1) integrate against the same
//! normalized volume. Texts working with raw Lebesgue measure differ by the
//! constant factor exposed as [`integrate::normalization_constant`].

pub mod acceptance;
pub mod error;
pub mod experiments;
pub mod funcrep;
pub mod geometry;
pub mod integrate;
pub mod norms;
pub mod params;
pub mod special;

pub use error::{Error, Result};
pub use funcrep::{HoloFunction, KernelCombo, MultiIndex, TaylorPolynomial};
pub use integrate::{IntegralResult, QuadConfig};
pub use params::{
    classify, growth_envelope, tight_fitting, Basis, Compactness, GrowthEnvelope, SpaceSpec,
    TightFitVerdict, TightStatus, Verdict,
};
