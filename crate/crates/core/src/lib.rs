//! Finite frames in ℂ^d, splittings of the frame operator, and numerical
//! verification of the λ-parametrized Loewner-order frame inequalities.
//!
//! Every relation `U ≤ V` is checked by computing the minimum eigenvalue of
//! `V − U` and comparing it against a tolerance scaled by the governing
//! operator norm. The outcome is a [`MarginReport`].

// Negated float comparisons are written so that NaN is rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod frame;
pub mod gen;
pub mod inequalities;
pub mod linalg;
pub mod rng;
pub mod splitting;
pub mod suite;

pub use error::{Error, Result};
pub use frame::{DualKind, DualPair, Frame, FrameBounds};
pub use inequalities::{DualSideQuantities, FamilyReport, LambdaFamily, ScalarBreakdown, ScalarFamilyReport};
pub use linalg::{CVector, ComplexMatrix, HermitianOperator, MarginReport, RelationId, Spectrum, Tolerances, C64};
pub use splitting::{IndexSubset, LemmaOutcome, QuadraticCertificate, ResidualPair, SplitPair, SplitRelation};
