//! Equational reasoning for ordered monoids of binary relations and
//! languages with meet, composition and optional join.

pub mod axioms;
pub mod commands;
pub mod error;
pub mod model;
pub mod prover;
pub mod saturation;
pub mod selftest;
pub mod termgraph;
pub mod term;

pub use error::{Error, Result};
