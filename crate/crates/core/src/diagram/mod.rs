//! String diagrams over the ZX generators, composed sequentially and in
//! parallel. Wire 0 is the topmost wire.

mod build;
mod dot;
mod json;

use std::fmt;

use num_complex::Complex64;
use thiserror::Error;

use crate::syntax::{Basis, Phase};

pub use build::{caps, cups, permutation, upsilon};
pub use dot::to_dot;
pub use json::{from_json, to_json};

#[derive(Clone, Debug, PartialEq)]
pub enum Diagram {
    Id(usize),
    Spider {
        basis: Basis,
        phase: Phase,
        inputs: usize,
        outputs: usize,
    },
    Had,
    Swap,
    Cup,
    Cap,
    Scalar(Complex64),
    Seq(Box<Diagram>, Box<Diagram>),
    Par(Box<Diagram>, Box<Diagram>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WireArity {
    pub inputs: usize,
    pub outputs: usize,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DiagramError {
    #[error("arity mismatch: {left} outputs feed {right} inputs in {at}")]
    ArityMismatch { left: usize, right: usize, at: String },

    #[error("not a permutation: {0:?}")]
    NotPermutation(Vec<usize>),

    #[error("malformed diagram document: {0}")]
    Malformed(String),
}

impl Diagram {
    pub fn spider(basis: Basis, phase: Phase, inputs: usize, outputs: usize) -> Diagram {
        Diagram::Spider {
            basis,
            phase,
            inputs,
            outputs,
        }
    }

    /// `a` then `b`, dropping identities.
    pub fn seq(a: Diagram, b: Diagram) -> Diagram {
        match (a, b) {
            (Diagram::Id(_), b) => b,
            (a, Diagram::Id(_)) => a,
            (a, b) => Diagram::Seq(Box::new(a), Box::new(b)),
        }
    }

    /// `a` above `b`, merging identities and dropping empty ones.
    pub fn par(a: Diagram, b: Diagram) -> Diagram {
        match (a, b) {
            (Diagram::Id(0), b) => b,
            (a, Diagram::Id(0)) => a,
            (Diagram::Id(m), Diagram::Id(n)) => Diagram::Id(m + n),
            (a, b) => Diagram::Par(Box::new(a), Box::new(b)),
        }
    }

    /// Stacks diagrams top to bottom.
    pub fn par_all(items: impl IntoIterator<Item = Diagram>) -> Diagram {
        let items: Vec<Diagram> = items.into_iter().collect();
        items.into_iter().rev().fold(Diagram::Id(0), |acc, d| Diagram::par(d, acc))
    }

    /// Composes diagrams left to right.
    pub fn seq_all(items: impl IntoIterator<Item = Diagram>) -> Diagram {
        items.into_iter().fold(Diagram::Id(0), |acc, d| match acc {
            Diagram::Id(0) => d,
            acc => Diagram::seq(acc, d),
        })
    }

    /// `Spider(β, 0, 1, 0)` on each of `wires` wires.
    pub fn discard(basis: Basis, wires: usize) -> Diagram {
        Diagram::par_all((0..wires).map(|_| Diagram::spider(basis, Phase::ZERO, 1, 0)))
    }

    pub fn arity(&self) -> Result<WireArity, DiagramError> {
        let (inputs, outputs) = match self {
            Diagram::Id(n) => (*n, *n),
            Diagram::Spider { inputs, outputs, .. } => (*inputs, *outputs),
            Diagram::Had => (1, 1),
            Diagram::Swap => (2, 2),
            Diagram::Cup => (0, 2),
            Diagram::Cap => (2, 0),
            Diagram::Scalar(_) => (0, 0),
            Diagram::Seq(a, b) => {
                let (x, y) = (a.arity()?, b.arity()?);
                if x.outputs != y.inputs {
                    return Err(DiagramError::ArityMismatch {
                        left: x.outputs,
                        right: y.inputs,
                        at: self.describe(),
                    });
                }
                (x.inputs, y.outputs)
            }
            Diagram::Par(a, b) => {
                let (x, y) = (a.arity()?, b.arity()?);
                (x.inputs + y.inputs, x.outputs + y.outputs)
            }
        };
        Ok(WireArity { inputs, outputs })
    }

    /// Number of generator nodes (identities excluded).
    pub fn generator_count(&self) -> usize {
        match self {
            Diagram::Id(_) => 0,
            Diagram::Seq(a, b) | Diagram::Par(a, b) => a.generator_count() + b.generator_count(),
            _ => 1,
        }
    }

    /// Short head-only description used in error messages.
    fn describe(&self) -> String {
        let s = self.to_string();
        if s.chars().count() > 80 {
            format!("{}…", s.chars().take(80).collect::<String>())
        } else {
            s
        }
    }

    /// Inputs and outputs exchanged; denotes the matrix transpose since every
    /// generator is symmetric.
    pub fn transpose(&self) -> Diagram {
        match self {
            Diagram::Id(n) => Diagram::Id(*n),
            Diagram::Spider {
                basis,
                phase,
                inputs,
                outputs,
            } => Diagram::spider(*basis, *phase, *outputs, *inputs),
            Diagram::Had => Diagram::Had,
            Diagram::Swap => Diagram::Swap,
            Diagram::Cup => Diagram::Cap,
            Diagram::Cap => Diagram::Cup,
            Diagram::Scalar(c) => Diagram::Scalar(*c),
            Diagram::Seq(a, b) => Diagram::Seq(Box::new(b.transpose()), Box::new(a.transpose())),
            Diagram::Par(a, b) => Diagram::Par(Box::new(a.transpose()), Box::new(b.transpose())),
        }
    }
}

impl fmt::Display for Diagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Diagram::Id(n) => write!(f, "id{n}"),
            Diagram::Spider {
                basis,
                phase,
                inputs,
                outputs,
            } => write!(f, "{basis}({phase};{inputs}->{outputs})"),
            Diagram::Had => f.write_str("H"),
            Diagram::Swap => f.write_str("swap"),
            Diagram::Cup => f.write_str("cup"),
            Diagram::Cap => f.write_str("cap"),
            Diagram::Scalar(c) => write!(f, "[{c}]"),
            Diagram::Seq(a, b) => write!(f, "({a} ; {b})"),
            Diagram::Par(a, b) => write!(f, "({a} | {b})"),
        }
    }
}
