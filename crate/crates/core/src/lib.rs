//! Exact-arithmetic homology of the lamplighter Lie algebra at finite
//! truncations.
//!
//! The library constructs the truncated algebras `Q[x]/x^m ⋊ Qt`, their
//! Chevalley-Eilenberg chain complexes and homology over Q, the
//! weight-graded strata of pure polynomial wedges with their shift
//! isomorphisms and injectivity certificates, and the matrix-group side of
//! the correspondence (exact exp/log, the induced group law, and the
//! homomorphism from the lamplighter group presentation). Everything is
//! computed in exact rational arithmetic; there are no tolerances anywhere.
//!
//! Modules:
//! - [`linalg`]: sparse rational vectors/matrices, rank, kernel bases,
//!   image membership with witnesses.
//! - [`lie`]: structure-constant algebras, the lamplighter truncations,
//!   the triangular matrix model and its isomorphism check.
//! - [`ce`]: chain complex bases, the differential, Betti numbers and
//!   homology representatives.
//! - [`strata`]: weight strata `V = W ⊕ E`, stratum differentials, shift
//!   squares, witness classes, and rank sweeps.
//! - [`malcev`]: exp/log between strict and unitriangular matrices, the
//!   logarithm-of-product group law, group words, and closure probes.
//! - [`checks`]: the named verification checks behind one trait, as driven
//!   by the command line and the acceptance suite.

pub mod ce;
pub mod checks;
pub mod error;
pub mod lie;
pub mod linalg;
pub mod malcev;
pub mod strata;

pub use error::{Error, Result};
