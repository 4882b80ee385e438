//! Generalized (nonlinear) coherent states and their quantum phase
//! properties.
//!
//! A family is given either by a nonlinearity function `f(n)` or by a
//! discrete spectrum `e_n` with `e_0 = 0` ([`series`]). Ready-made families
//! live in [`systems`], user-defined ones are compiled from text by
//! [`dsl`], and [`phase`] evaluates the Pegg–Barnett phase distribution,
//! the number and phase variances and the squeezing parameters.
//!
//! ```
//! use cohphase::phase::{squeezing_report, PhaseWindow};
//! use cohphase::series::TruncationPolicy;
//! use cohphase::systems::{make, CatalogEntry, SystemId};
//! use num_complex::Complex64;
//!
//! let spec = make(&CatalogEntry::new(SystemId::PensonSolomon)).unwrap();
//! let report = squeezing_report(
//!     &spec,
//!     Complex64::new(1.0, 0.0),
//!     PhaseWindow::default(),
//!     &TruncationPolicy::default(),
//! )
//! .unwrap();
//! assert!(report.s_n.unwrap() < 0.0);
//! ```

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dsl;
pub mod error;
pub mod phase;
pub mod series;
pub mod systems;

pub use error::{Error, Result};
pub use phase::{PhaseDistribution, PhaseWindow, Squeezing, SqueezingReport};
pub use series::{CoefficientTable, SpecKind, StateSpec, TruncationPolicy};
pub use systems::{CatalogEntry, SystemId};
