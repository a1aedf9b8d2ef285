use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{Diagram, DiagramError};
use crate::syntax::{Basis, Phase};

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
enum Node {
    Id {
        wires: usize,
    },
    Spider {
        basis: Basis,
        phase: Phase,
        #[serde(rename = "in")]
        inputs: usize,
        #[serde(rename = "out")]
        outputs: usize,
    },
    Had,
    Swap,
    Cup,
    Cap,
    Scalar {
        re: f64,
        im: f64,
    },
    Seq {
        first: Box<Node>,
        second: Box<Node>,
    },
    Par {
        top: Box<Node>,
        bottom: Box<Node>,
    },
}

fn to_node(d: &Diagram) -> Node {
    match d {
        Diagram::Id(n) => Node::Id { wires: *n },
        Diagram::Spider {
            basis,
            phase,
            inputs,
            outputs,
        } => Node::Spider {
            basis: *basis,
            phase: *phase,
            inputs: *inputs,
            outputs: *outputs,
        },
        Diagram::Had => Node::Had,
        Diagram::Swap => Node::Swap,
        Diagram::Cup => Node::Cup,
        Diagram::Cap => Node::Cap,
        Diagram::Scalar(c) => Node::Scalar { re: c.re, im: c.im },
        Diagram::Seq(a, b) => Node::Seq {
            first: Box::new(to_node(a)),
            second: Box::new(to_node(b)),
        },
        Diagram::Par(a, b) => Node::Par {
            top: Box::new(to_node(a)),
            bottom: Box::new(to_node(b)),
        },
    }
}

fn from_node(n: Node) -> Result<Diagram, DiagramError> {
    Ok(match n {
        Node::Id { wires } => Diagram::Id(wires),
        Node::Spider {
            basis,
            phase,
            inputs,
            outputs,
        } => Diagram::spider(basis, phase, inputs, outputs),
        Node::Had => Diagram::Had,
        Node::Swap => Diagram::Swap,
        Node::Cup => Diagram::Cup,
        Node::Cap => Diagram::Cap,
        Node::Scalar { re, im } => {
            if !re.is_finite() || !im.is_finite() {
                return Err(DiagramError::Malformed("scalar must be finite".into()));
            }
            Diagram::Scalar(Complex64::new(re, im))
        }
        Node::Seq { first, second } => Diagram::Seq(Box::new(from_node(*first)?), Box::new(from_node(*second)?)),
        Node::Par { top, bottom } => Diagram::Par(Box::new(from_node(*top)?), Box::new(from_node(*bottom)?)),
    })
}

impl Serialize for Diagram {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        to_node(self).serialize(s)
    }
}

pub fn to_json(d: &Diagram) -> String {
    serde_json::to_string(&to_node(d)).expect("diagram nodes always serialize")
}

/// Parses a diagram document and checks its arities.
pub fn from_json(text: &str) -> Result<Diagram, DiagramError> {
    let mut de = serde_json::Deserializer::from_str(text);
    de.disable_recursion_limit();
    let node = Node::deserialize(&mut de).map_err(|e| DiagramError::Malformed(e.to_string()))?;
    de.end().map_err(|e| DiagramError::Malformed(e.to_string()))?;
    let d = from_node(node)?;
    d.arity()?;
    Ok(d)
}
