//! Reliability estimation for the two-parameter geometric lifetime model.
//!
//! The model `Geo(r, θ)` puts mass `(1-θ)·θ^(x-r)` on `x = r, r+1, ...`:
//! `r` is a minimum warranty life in cycles and `θ` the per-cycle survival
//! probability. This crate provides
//!
//! - [`geomdist`]: the distribution itself — pmf, mission reliability
//!   `R(t) = θ^(t-r)`, k-out-of-m system reliability, stress-strength
//!   reliability `R = P(X ≤ Y)`, and reproducible inverse-transform sampling;
//! - [`combinat`]: exact combinatorics behind the conditional distribution of
//!   one observation given the sufficient statistic `(X₍₁₎, S)`, plus
//!   brute-force enumeration oracles that validate it;
//! - [`estimators`]: maximum-likelihood and Rao-Blackwell unbiased estimators
//!   of `R(t)`, `R_s(t)` and `R`, for complete and type-I censored samples;
//! - [`simlab`]: a deterministic Monte Carlo study engine (MSE, percent
//!   relative efficiency, bias, coverage, zero-covariance diagnostics,
//!   histogram data) with replication-level reproducibility;
//! - [`stream`]: the counter-based splittable random streams the engine and
//!   sampler share.
//!
//! All estimation code is pure: estimators are functions of sample summaries,
//! and every random quantity flows through an externally owned
//! [`stream::RandomStream`], so identical seeds give identical results
//! regardless of thread count.

pub mod combinat;
pub mod error;
pub mod estimators;
pub mod geomdist;
pub mod simlab;
pub mod stream;

pub use error::{Error, Result};
pub use geomdist::{GeoParams, StressStrengthParams, SystemSpec};
pub use stream::RandomStream;
