//! Exact verification kernel for support behaviour of finite signed atomic
//! measures under convolution.
//!
//! The crate provides:
//!
//! - [`measure`]: finite signed atomic measures on `ℝⁿ` with exact rational
//!   or `f64` scalars, restriction to regions, and comparison on regions;
//! - [`cone`]: the family of circular cones opening along the negative first
//!   axis, shifted-cone membership, the cone-support functional `supp_C`,
//!   and exact ordering of the `a + c·√q` values it produces;
//! - [`convolve`]: sparse exact convolution, convolution powers, mixed power
//!   sums, and the telescoping factorization of `a^{*k} − b^{*k}`;
//! - [`lab`]: checkers and seeded falsification searches for hull additivity
//!   of supports, cone-support additivity, the two support lemmas, and the
//!   uniqueness-from-powers claim;
//! - [`report`]: structured, deterministic check reports;
//! - [`sampler`]: seeded random instance generation under support
//!   constraints.
//!
//! Everything here is `no_std` (with `alloc`); IO, the CLI, and the
//! half-plane counterexample reproduction live in the companion `conelab`
//! crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod cone;
pub mod convolve;
pub mod lab;
pub mod measure;
pub mod report;
pub mod sampler;
pub mod scalar;

pub use cone::{Cone, ConeSupportValue, RadicalSum};
pub use convolve::{convolve, mixed_power_sum, telescoping_difference, PowerCache};
pub use measure::{Atom, AtomicMeasure, MeasureError, RegionSpec};
pub use report::{CheckReport, ClaimId, Cost, Hypothesis, Quantity, Witness};
pub use sampler::{SamplerConfig, SamplerConstraint};
pub use scalar::{format_rational, parse_rational, rational_to_f64, Rational, Scalar};
