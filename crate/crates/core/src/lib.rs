//! Milnor-Witt K-theory of fields by generators and relations, with exact
//! decision procedures for Grothendieck-Witt and Witt rings, the fundamental
//! ideal filtration, and the characteristic-2 comparison with `I^*`.

pub mod error;
pub mod field;
pub mod forms;
pub mod kmw;
pub mod symbols;
pub mod verify;
pub mod witt;

pub use error::{Error, Result};
pub use field::{Field, FieldElement, FieldSpec};
