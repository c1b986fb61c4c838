//! Stratified (Carnot) Lie algebras over the rationals: canonical layer
//! metrics, derivation algebras, Tanaka prolongation and the classification
//! into conformally rigid algebras and nilradicals of rank-one simple
//! algebras.
//!
//! ```
//! use carnot::iface::catalog::Fixture;
//! use carnot::structure::{classify, Verdict};
//!
//! let report = classify(&Fixture::Heisenberg(1).build()).unwrap();
//! assert_eq!(report.verdict, Verdict::Iwasawa);
//! assert_eq!(report.total_dim, 8);
//! ```

pub mod algebra;
pub mod derivations;
pub mod exactlin;
pub mod graded;
pub mod iface;
pub mod lie;
pub mod metric;
pub mod prolong;
pub mod structure;
