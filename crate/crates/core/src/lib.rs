//! Generic countable structures built from finite conditions.
//!
//! The crate is organised bottom-up: [`structure`] and [`search`] handle
//! finite relational structures, [`classes`] the concrete amalgamation
//! classes, [`forcing`] conditions and dense requirements, [`autorder`]
//! orders carrying an increasing partial automorphism, and [`analysis`]
//! the verifiers run against built prefixes.

pub mod analysis;
pub mod autorder;
pub mod classes;
pub mod forcing;
pub mod search;
pub mod structure;

pub use classes::{ClassError, ClassTag};
pub use structure::{Elem, Embedding, FinStructure, Signature, StructureError};
