//! Finite-level computations around maximal m-step solvable quotients:
//! derived series and solvable quotients of enumerated groups, Fox calculus in
//! finite group rings, the Crowell sequence, and Magnus-matrix models of free
//! solvable groups. All arithmetic is exact.

pub mod fingroup;
pub mod constructions;
pub mod crowell;
pub mod foxcalc;
pub mod grpring;
pub mod models;
#[cfg(any(test, feature = "oracles"))]
pub mod oracle;
pub mod zmodlin;
