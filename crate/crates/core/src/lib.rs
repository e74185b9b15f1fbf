//! Counterexample graphs for the Erdős–Pósa property of L-cycles, and the
//! exhaustive checkers that validate them at desk scale.

pub mod cli;
pub mod construct;
pub mod io;
pub mod lset;
pub mod verify;
