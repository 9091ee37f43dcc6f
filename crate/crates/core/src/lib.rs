//! Scattering and bound states of a particle in q dimensions under a
//! central potential with compact support, optionally plus a separable
//! non-local kernel.
//!
//! The radial problem is reduced to one equation in λ = l + (q − 2)/2.
//! [`specfun`] supplies Γ and Bessel functions of real order, [`radial`]
//! integrates the reduced equation, [`scattering`] extracts phase shifts and
//! audits Wronskians, and [`spectral`] finds bound states and checks that
//! η_λ(0) = n_λ π. [`cli`] drives all of it from configuration files.

// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// coefficient tables are kept at the digits they were published with
#![allow(clippy::excessive_precision)]

pub mod cli;
pub mod error;
pub mod model;
pub mod radial;
pub mod scattering;
pub mod spectral;
pub mod specfun;

pub use error::{Error, ErrorCategory, Result};
