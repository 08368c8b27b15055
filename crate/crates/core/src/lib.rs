//! Finite commutative rings with unity.
//!
//! The crate decides whether a finite ring is a direct product of fields in two
//! independent ways (the `f ∈ (f²)` criterion and an idempotent splitting
//! oracle), extracts witnesses when it is not, and runs the generator lifting
//! induction over truncated power series rings `A[z]/(z^N)`.

pub mod budget;
pub mod descriptor;
pub mod error;
pub mod ideal;
pub mod lift;
mod linear;
mod modulus;
pub mod fields;
pub mod parse;
pub mod ring;
pub mod selfcheck;
pub mod spectrum;

pub use budget::SearchBudget;
pub use descriptor::{RingDescriptor, Value};
pub use error::{Error, Result};
pub use ring::{arith, ArithOp, Element, Ring};
