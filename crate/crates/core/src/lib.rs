// SPDX-License-Identifier: Apache-2.0

//! Numerical certification and falsification of generalized monotonicity.
//!
//! The crate checks whether a vector field `F` on a convex domain is
//! monotone, strictly or strongly monotone, pseudomonotone or quasimonotone,
//! by budgeted seeded witness search. It also estimates Clarke generalized
//! Jacobians by sampled finite differences, classifies the resulting matrix
//! hulls as positive (semi)definite, and sweeps translation families `F + ω`
//! along lines of dual vectors to cross-check the link between
//! quasimonotonicity of the family and positive semidefiniteness of the
//! generalized Jacobian.
//!
//! All searches are deterministic for a given seed, independent of whether
//! the `parallel` feature (rayon) is enabled.

pub mod cli;
pub mod domain;
pub mod error;
pub mod expr;
pub mod hull;
pub mod jacobian;
pub mod map;
pub mod monotonicity;
pub mod par;
pub mod registry;
pub mod report;
pub mod rng;
pub mod translation;
pub mod types;

pub use domain::{segment_sample, ConvexDomain};
pub use error::{Error, EvalError, Result};
pub use map::{TestMap, TranslatedMap};
pub use par::Exec;
pub use types::{
    Property, PropertyVerdict, TolerancePolicy, VectorPoint, VerdictStatus, ViolationWitness,
};
