use std::collections::BTreeMap;
use std::fmt::Write;

use super::Diagram;
use crate::syntax::Basis;

/// A wire end: the node it leaves and that node's layer.
#[derive(Clone)]
struct End {
    node: String,
    layer: usize,
}

struct Graph {
    nodes: Vec<(String, String, usize)>,
    edges: Vec<(String, String)>,
}

impl Graph {
    fn add(&mut self, attrs: String, inputs: &[End]) -> End {
        let id = format!("g{}", self.nodes.len());
        let layer = inputs.iter().map(|e| e.layer).max().unwrap_or(0) + 1;
        for e in inputs {
            self.edges.push((e.node.clone(), id.clone()));
        }
        self.nodes.push((id.clone(), attrs, layer));
        End { node: id, layer }
    }

    fn emit(&mut self, d: &Diagram, inputs: Vec<End>) -> Vec<End> {
        let node = |label: String, style: &str| format!("label=\"{label}\", {style}");
        match d {
            Diagram::Id(_) => inputs,
            Diagram::Seq(a, b) => {
                let mid = self.emit(a, inputs);
                self.emit(b, mid)
            }
            Diagram::Par(a, b) => {
                let k = a.arity().map(|x| x.inputs).unwrap_or(0).min(inputs.len());
                let mut top = inputs;
                let bottom = top.split_off(k);
                let mut out = self.emit(a, top);
                out.extend(self.emit(b, bottom));
                out
            }
            Diagram::Spider {
                basis,
                phase,
                outputs,
                ..
            } => {
                let color = match basis {
                    Basis::Zeta => "#99dd99",
                    Basis::Xi => "#ff8888",
                };
                let label = if phase.is_zero() { String::new() } else { phase.to_string() };
                let end = self.add(node(label, &format!("shape=circle, style=filled, fillcolor=\"{color}\"")), &inputs);
                vec![end; *outputs]
            }
            Diagram::Had => vec![self.add(node("H".into(), "shape=square, style=filled, fillcolor=\"#ffff66\""), &inputs)],
            Diagram::Swap => {
                let end = self.add(node(String::new(), "shape=point"), &inputs);
                vec![end; 2]
            }
            Diagram::Cup => {
                let end = self.add(node("cup".into(), "shape=plaintext"), &inputs);
                vec![end; 2]
            }
            Diagram::Cap => {
                self.add(node("cap".into(), "shape=plaintext"), &inputs);
                vec![]
            }
            Diagram::Scalar(c) => {
                self.add(node(format!("{c}"), "shape=diamond"), &inputs);
                vec![]
            }
        }
    }
}

/// Graphviz rendering, left to right, one node per generator.
pub fn to_dot(d: &Diagram) -> String {
    let arity = d.arity().map(|a| (a.inputs, a.outputs)).unwrap_or((0, 0));
    let mut g = Graph {
        nodes: Vec::new(),
        edges: Vec::new(),
    };
    let inputs: Vec<End> = (0..arity.0)
        .map(|i| End {
            node: format!("in{i}"),
            layer: 0,
        })
        .collect();
    let outputs = g.emit(d, inputs);

    let mut s = String::from("digraph diagram {\n  rankdir=LR;\n  node [fontsize=10];\n");
    for i in 0..arity.0 {
        let _ = writeln!(s, "  in{i} [label=\"in{i}\", shape=plaintext];");
    }
    for (id, attrs, _) in &g.nodes {
        let _ = writeln!(s, "  {id} [{attrs}];");
    }
    for (i, _) in outputs.iter().enumerate() {
        let _ = writeln!(s, "  out{i} [label=\"out{i}\", shape=plaintext];");
    }
    for (a, b) in &g.edges {
        let _ = writeln!(s, "  {a} -> {b};");
    }
    for (i, e) in outputs.iter().enumerate() {
        let _ = writeln!(s, "  {} -> out{i};", e.node);
    }
    let mut layers: BTreeMap<usize, Vec<&str>> = BTreeMap::new();
    for (id, _, layer) in &g.nodes {
        layers.entry(*layer).or_default().push(id);
    }
    let ins: Vec<String> = (0..arity.0).map(|i| format!("in{i}")).collect();
    let outs: Vec<String> = (0..outputs.len()).map(|i| format!("out{i}")).collect();
    let mut ranks: Vec<Vec<&str>> = vec![ins.iter().map(String::as_str).collect()];
    ranks.extend(layers.into_values());
    ranks.push(outs.iter().map(String::as_str).collect());
    for r in ranks.into_iter().filter(|r| !r.is_empty()) {
        let _ = writeln!(s, "  {{ rank=same; {}; }}", r.join("; "));
    }
    s.push_str("}\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::Phase;

    #[test]
    fn colors_and_layout() {
        let d = Diagram::seq(
            Diagram::spider(Basis::Zeta, Phase::ZERO, 1, 2),
            Diagram::par(Diagram::spider(Basis::Xi, Phase::PI, 1, 1), Diagram::Had),
        );
        let dot = to_dot(&d);
        assert!(dot.starts_with("digraph"));
        assert!(dot.contains("rankdir=LR"));
        assert!(dot.contains("#99dd99"));
        assert!(dot.contains("#ff8888"));
        assert!(dot.contains("label=\"H\""));
        assert_eq!(dot.matches("[label=\"\", shape=circle").count() + dot.matches("[label=\"pi\", shape=circle").count(), 2);
        assert!(dot.contains("out1"));
    }
}
