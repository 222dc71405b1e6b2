//! Finite-scale workbench for residuated lattices and their logics.
//!
//! Algebras are finite operation tables. On top of them the crate builds
//! t-norm chains, filters and spectra, free algebras of finitely generated
//! varieties, amalgams and interpolants, Kripke set algebras with
//! quantifiers and substitutions, dual sheaves, and a propositional
//! front end with Lindenbaum algebras and a generic-filter engine.

pub mod algebra;
pub mod amalgam;
pub mod budget;
pub mod corpus;
pub mod error;
pub mod free;
pub mod kripke;
pub mod logic;
pub mod sheaf;
pub mod spectra;

pub use algebra::{Elem, FiniteAlgebra, Table};
pub use error::{Error, Result};
