//! Toolchain for a small dependently typed language with general recursion
//! and a two-point termination effect.
//!
//! The pieces, bottom up:
//!
//! - [`syntax`]: abstract syntax for the implicit and annotated languages,
//!   binding, substitution, and annotation erasure.
//! - [`eval`]: call-by-value small-step reduction of implicit terms, and the
//!   joinability test used by the equality introduction rule.
//! - [`typecheck`]: the syntax-directed checker for annotated terms.
//! - [`logic`]: the target first-order logic of terminating general-recursive
//!   functions: sorts, formulas, the two translations, and simple-sort
//!   checking.
//! - [`kernel`]: an LCF-style checker for proofs in that logic.
//! - [`frontend`]: concrete syntax (parser and printer) for programs,
//!   obligations, and proof scripts.
//! - [`cli`]: the batch driver behind the `teqt` binary.

pub mod cli;
pub mod eval;
pub mod frontend;
pub mod kernel;
pub mod logic;
pub mod syntax;
pub mod typecheck;
