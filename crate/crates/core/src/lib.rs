//! Exact lattice-point generating functions for rational cones, reciprocity
//! checks between closed and open cones, the constant-term elimination
//! trace, and Ehrhart quasi-polynomials of rational polytopes.
//!
//! All arithmetic is exact (`BigInt` / `BigRational`); identities between
//! rational functions are decided on truncated power series and checked
//! against brute-force enumeration.

pub mod cone;
pub mod corpus;
pub mod ctengine;
pub mod ehrhart;
pub mod error;
pub mod exactla;
pub mod genfun;

pub use cone::{triangulate_halfopen, Cone, HalfOpenSimplicialCone, Membership, Mode, Reference, VCone};
pub use ctengine::{
    eliminate_step, elimination_trace, euler_constant_term, negativity_certificate, slack_matrix, Carry, Certificate,
    EliminationTrace, SlackSystem, ThetaSeries,
};
pub use ehrhart::{
    cone_over, count, hilbert_series, quasipolynomial, reciprocity_check, QuasiPolynomial, RationalPolytope,
    UnivariateRatFun,
};
pub use error::{Error, Result};
pub use exactla::{Int, IntMatrix, IntVector, Rat, RatMatrix, RatVector, UnimodularMap};
pub use genfun::{
    brute_force_series, halfopen_reciprocity_check, sigma, stanley_reciprocity_check, HalfOpenSpec, RationalGenFun,
    Sign, TruncatedSeries,
};
