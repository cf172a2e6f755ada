//! A workbench for session-typed π-calculi derived from linear logic.
//!
//! The crate parses processes and typing judgments, validates and infers
//! typing derivations in four systems (two-sided united, its ↷-presentation,
//! intuitionistic, and one-sided classical), executes the reduction
//! semantics, implements the constructive translations between the systems
//! and the intuitionistic-fragment classifier, and ships a property harness
//! that checks the metatheorems at desk scale.
//!
//! All values are immutable after construction and all operations are pure
//! functions, so everything here is safe to share across threads.

pub mod ast;
pub mod checker;
pub mod dynamics;
pub mod harness;
pub mod syntax;
pub mod transform;

pub use ast::{Branches, Context, Judgment, Label, Name, Process, System, TypeExpr};
pub use checker::{
    check_derivation, infer, infer_all, Config, Derivation, InferError, InferenceBudget,
    RuleName, RuleViolation,
};
