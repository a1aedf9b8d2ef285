//! Types, basis-annotated contexts, label sets, unification and algorithmic
//! typing derivations.

mod context;
mod derivation;
mod infer;
mod ty;

use thiserror::Error;

use crate::syntax::Basis;

pub use context::{Context, Entry};
pub use derivation::{Derivation, Rule, StructuralSummary};
pub use infer::{annotate, check, infer, infer_with, InferOptions, Typing};
pub use ty::{unify, Label, Subst, Type};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TypeError {
    #[error("unbound variable {0}")]
    Unbound(String),

    #[error("type mismatch: expected {expected}, found {found}")]
    Mismatch { expected: String, found: String },

    #[error("occurs check failed: {var} occurs in {ty}")]
    Occurs { var: String, ty: String },

    #[error("cannot infer the type of binder `{0}`; add an annotation")]
    Ambiguous(String),

    #[error("type contains unresolved variable {0}")]
    Unresolved(String),

    #[error("linearity violation: `\\{var}` binds a variable used {count} times (must be exactly once)")]
    Linearity { var: String, count: usize },

    #[error("contraction basis conflict for `{var}`: bound in basis {first} and in basis {second}")]
    BasisConflict { var: String, first: Basis, second: Basis },

    #[error("variable `{0}` is bound twice in the context")]
    Duplicate(String),

    #[error("malformed context: {0}")]
    BadContext(String),

    #[error("invalid derivation at rule {rule}: {reason}")]
    InvalidDerivation { rule: String, reason: String },
}
