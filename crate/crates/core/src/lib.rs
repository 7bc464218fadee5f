//! Exact-arithmetic analysis of interval exchange transformations.
//!
//! The crate is layered bottom-up:
//!
//! - [`scalar`]: exact rationals and quadratic irrationals.
//! - [`perm`]: permutation combinatorics, the endpoint identification graph
//!   and the type-W predicate.
//! - [`iet`]: the map itself and exact piecewise translations for its powers.
//! - [`dynpart`]: dynamical partitions, `eps_n`, towers and recurrence
//!   statistics.
//! - [`diagnostics`]: rigidity measures, correlations and invariance windows.
//! - [`cli`]: the batch front-end behind the `ietlab` binary.

pub mod cli;
pub mod diagnostics;
pub mod dynpart;
pub mod interval;
pub mod iet;
pub mod perm;
pub mod scalar;
pub mod step;

pub use iet::{Iet, IetError, PiecewiseTranslation};
pub use interval::{Interval, IntervalUnion};
pub use perm::{EndpointGraph, PermError, Permutation};
pub use scalar::{ArithOp, Scalar, ScalarError};
pub use step::StepFunction;
