//! Exact extension constructions for monotone sublinear operators.
//!
//! The ambient spaces are `Q^n` and `Q^m` under the coordinatewise order, so
//! every supremum and infimum that appears in the extension constructions is
//! a finite rational linear program. Operators are represented either as
//! componentwise maxima of linear functionals ([`MaxLinOperator`]) or as
//! positive-part compositions `x -> T(x+)` ([`PosPartForm`]).
//!
//! Module map:
//!
//! * [`lattice`]: vectors, lattice operations, ideals, subspaces and cones.
//! * [`lp`]: exact simplex with certificates and vertex enumeration.
//! * [`ops`]: operator forms, evaluation and LP-backed property checks.
//! * [`engine`]: the extension constructions with verification reports.
//! * [`fixtures`]: capacities, Choquet/Lovász functionals, seeded generators
//!   and brute-force oracles.

pub mod engine;
pub mod error;
pub mod fixtures;
pub mod lattice;
pub mod linalg;
pub mod lp;
pub mod ops;
pub mod rational;
mod serde_impl;

pub use serde_impl::serde_rational;

pub use error::{Error, Result};
pub use lattice::{ConeDomain, IdealSpec, SubspaceSpec, Vector};
pub use ops::{DomainedOperator, Form, MaxLinOperator, PosPartForm, Region, Verdict};
pub use rational::Rational;
