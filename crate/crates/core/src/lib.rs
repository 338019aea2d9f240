//! Finite bounded Lorentzian metric spaces.
//!
//! A causet is a finite set with a nonnegative "Lorentzian distance" `d`
//! obeying the reverse triangle inequality on chronologically related
//! triples and distinguishing points. This crate validates such spaces and
//! computes the distinction metric, the causal relation, time functions,
//! chains, Gromov-Hausdorff distances, ε-nets and flat comparison geometry,
//! and samples causets from the 1+1 Minkowski diamond.

pub mod causal;
pub mod causet;
pub mod curvature;
pub mod diamond;
pub mod error;
pub mod experiment;
pub mod gamma;
pub mod gh;
pub mod io;
pub mod nets;

pub use causet::{Causet, Rational, ValidationReport, Violation, ViolationKind, DEFAULT_TOL};
pub use error::{Error, Result};
pub use gamma::GammaMatrix;
pub use gh::{Correspondence, GHResult, GhBudget, GhMethod};
