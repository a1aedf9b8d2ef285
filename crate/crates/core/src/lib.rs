//! The ζ-calculus: a typed λ-calculus whose terms denote ZX diagrams.

pub mod syntax;
pub mod types;
pub mod diagram;
pub mod eval;
pub mod semantics;
pub mod theory;
