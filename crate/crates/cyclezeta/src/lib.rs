//! Edge zeta functions, graph covers and pseudo-codewords of binary cycle
//! codes.
//!
//! The crate machine-checks, at desk scale, the equivalence between three
//! descriptions of the unscaled pseudo-codewords of a cycle code:
//!
//! * exponent vectors of monomials with nonzero coefficient in the Taylor
//!   expansion of the edge zeta function of the normal graph, computed
//!   exactly as `1 / det(I - UM)` ([`zeta`] on top of [`polyring`]);
//! * nonnegative integer points of the fundamental cone `K(H)` satisfying
//!   the even-parity condition `H p = 0 (mod 2)` ([`cone`]);
//! * edge-usage vectors of backtrackless tailless cycles and products
//!   thereof, enumerated by brute force ([`cycles`]), which is also where
//!   covers enter: [`covers::lift_cycle`] realizes such a cycle as a simple
//!   cycle in an explicit finite cover.
//!
//! All arithmetic is exact: `BigInt` coefficients, `BigRational` cone
//! evaluations, GF(2) kernels. Nothing is floating point.

pub mod codegraph;
pub mod cone;
pub mod covers;
pub mod cycles;
pub mod error;
pub mod gf2;
pub mod polyring;
pub mod zeta;

pub use error::{Error, Result};
