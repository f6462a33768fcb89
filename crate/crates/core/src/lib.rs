#![allow(clippy::result_large_err)]

pub mod algebra;
pub mod classify;
pub mod derivations;
pub mod exec;
pub mod format;
pub mod invariants;
pub mod lattice;
pub mod linalg;
pub mod scalar;
pub mod variety;
