//! Stable semantics for abstract argumentation frameworks, computed directly
//! or by splitting a framework along a cut.

pub mod apx;
pub mod bench;
pub mod cli;
pub mod cuts;
pub mod error;
pub mod framework;
pub mod generator;
pub mod semantics;
pub mod splitting;

pub use error::{Error, Result};
pub use framework::{
    cross_attacks, is_unidirectional, scc_decomposition, validate_framework, ArgumentId, Attack,
    Cut, Extension, Framework, Label, Labeling, LegalityStatus, ValidationReport, Violation,
};
