//! Graded Lie algebras of almost Hermitian symmetric structures, their
//! Spencer operators, and the deformation tensor of the normal Cartan
//! connection.

pub mod algebra;
pub mod cli;
pub mod cochain;
pub mod error;
pub mod linalg;
pub mod normalization;
pub mod prolongation;
pub mod spencer;
pub mod testkit;
pub mod verify;

pub use algebra::{build_algebra, Grade, GradedElement, GradedLieAlgebra, StructureKind};
pub use cochain::{OneCochain, TwoCochain};
pub use error::{Error, Result};
