//! Heralded non-Gaussian states from two-mode entangled Gaussians: parameter
//! maps, output wavefunctions, heralding probabilities, non-Gaussianity
//! measures and independent numerical oracles for all of them.

// Negated float comparisons are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod fault;
pub mod heralding;
pub mod metrics;
pub mod optim;
pub mod oracle;
pub mod params;
pub mod quad;
pub mod sampling;
pub mod selftest;
pub mod specfun;
pub mod state;

pub use error::{Error, Result, TmegViolation};
pub use heralding::{
    distribution, optimize_probability, probability_abc, probability_za, ring_locus, Distribution, OptimizeConfig,
    Optimum, ProbabilityResult, RingSpec,
};
pub use params::{gaussian_ops_from, invert_map, map_to_output, validate_tmeg, GaussianOp, OutputParams, TmegParams};
pub use state::{output_fock_vector, psi_out_abc, psi_out_zr, superposition_coeffs, FockSuperposition, FockVector};
