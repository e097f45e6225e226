//! Weighted Koppelman integral operators for the ∂̄-equation.
//!
//! The crate builds the ingredients of weighted integral representations
//! (exterior-algebra forms, Bochner–Martinelli forms, weights, Hefer forms),
//! models the varieties in scope (the plane, the ℂ² ball, smooth
//! hypersurfaces and the monomial curves `ζ₁ʳ = ζ₂ˢ`), and evaluates the
//! operators `K` and `P` with deterministic quadrature so that the
//! identity `φ = ∂̄Kφ + K∂̄φ + Pφ` can be checked numerically.
//!
//! Module map:
//! - [`exterior`]: sparse forms over `dη₁..dη_N, dζ̄₁..dζ̄_N`, wedge, `δ_η`, numerical ∂̄
//! - [`laurent`]: exact Laurent polynomials in `τ`, residues, numerical semigroups
//! - [`kernels`]: admissible forms, B-forms, weights, Hefer forms
//! - [`geometry`]: hypersurfaces, monomial curves, structure forms, Lelong pairings, SEP limits
//! - [`quad`]: polar Gauss–Legendre quadrature with punctures and principal values
//! - [`solver`]: the operators, Koppelman checks, compact-support solves, moment conditions

pub mod cutoff;
pub mod error;
pub mod exterior;
pub mod fit;
pub mod geometry;
pub mod kernels;
pub mod laurent;
pub mod poly;
pub mod quad;
pub mod solver;

pub use num_complex::Complex64 as Cpx;

pub use cutoff::BumpProfile;
pub use error::{Error, Result};
pub use exterior::{dbar_fd, Blade, ExtForm, FormField, Side};
pub use geometry::{
    cusp_structure_form, gamma_hypersurface, lelong_pair, pullback_gamma_check, sep_regularize,
    Extrapolation, Hypersurface, MonomialCurve, PVSchedule, PvValue, StructureForm,
};
pub use kernels::{
    ball_weight, bm_admissible, bm_components, hefer_single, singular_weight_ga, weight_product,
    AdmissibleForm, BForm, HeferForm, WeightForm,
};
pub use laurent::{LaurentPoly, Semigroup};
pub use poly::Poly;
pub use quad::{integrate, pv_integrate, QuadDomain, QuadResult, Rule};
pub use solver::{
    asymptotic_probe, classify_monomials, compact_support_solve, hartogs_extend, koppelman_k,
    moment_check, projection_p, verify_koppelman, AmbientFn, ChartForm, CompactOptions,
    CompactReport, HartogsCase, HartogsReport, KernelAssembly, MomentReport, ProbeReport,
    SolveReport,
};

/// `2πi`.
pub const TWO_PI_I: Cpx = Cpx::new(0.0, std::f64::consts::TAU);

/// Central-difference step used for numerical ∂̄ unless a caller overrides it.
pub const DEFAULT_FD_STEP: f64 = 1e-4;
