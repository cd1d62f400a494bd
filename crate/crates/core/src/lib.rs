//! Behavior-driven checking of pre/postcondition specifications.
//!
//! A developer writes a function in a small imperative language, annotates
//! it with a precondition, a postcondition and labeled example behaviors,
//! and steps through the behaviors. For each one the checker reports the
//! actual and required truth values of the specification and recommends a
//! correction. Specifications can also be checked for accuracy by
//! enumerating a finite domain of behaviors.

pub mod accuracy;
pub mod corpus;
pub mod correction;
pub mod eval;
pub mod lang;
pub mod session;
pub mod value;
