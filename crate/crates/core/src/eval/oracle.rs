//! Brute-force tensor contraction, sharing no code with `denote`. Identities,
//! swaps, cups and caps are plain wiring: they only merge index names.

use std::collections::HashMap;
use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use super::{ComplexMatrix, EvalError};
use crate::diagram::Diagram;
use crate::syntax::Basis;

/// Open plus summed indices the oracle accepts.
pub const ORACLE_MAX_INDICES: usize = 24;
/// Open indices the oracle accepts.
pub const ORACLE_MAX_OPEN: usize = 14;

enum Tensor {
    Spider {
        basis: Basis,
        phase: f64,
        legs: Vec<usize>,
        outputs: usize,
    },
    Had {
        input: usize,
        output: usize,
    },
    Scalar(Complex64),
}

#[derive(Default)]
struct Flat {
    parent: Vec<usize>,
    tensors: Vec<Tensor>,
}

impl Flat {
    fn edge(&mut self) -> usize {
        self.parent.push(self.parent.len());
        self.parent.len() - 1
    }

    fn find(&mut self, mut e: usize) -> usize {
        while self.parent[e] != e {
            self.parent[e] = self.parent[self.parent[e]];
            e = self.parent[e];
        }
        e
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        self.parent[ra] = rb;
    }

    fn flatten(&mut self, d: &Diagram, mut inputs: Vec<usize>) -> Result<Vec<usize>, EvalError> {
        Ok(match d {
            Diagram::Id(_) => inputs,
            Diagram::Seq(a, b) => {
                let mid = self.flatten(a, inputs)?;
                self.flatten(b, mid)?
            }
            Diagram::Par(a, b) => {
                let k = a.arity()?.inputs;
                let rest = inputs.split_off(k);
                let mut out = self.flatten(a, inputs)?;
                out.extend(self.flatten(b, rest)?);
                out
            }
            Diagram::Swap => vec![inputs[1], inputs[0]],
            Diagram::Cup => {
                let e = self.edge();
                vec![e, e]
            }
            Diagram::Cap => {
                self.union(inputs[0], inputs[1]);
                vec![]
            }
            Diagram::Had => {
                let o = self.edge();
                self.tensors.push(Tensor::Had {
                    input: inputs[0],
                    output: o,
                });
                vec![o]
            }
            Diagram::Scalar(c) => {
                self.tensors.push(Tensor::Scalar(*c));
                vec![]
            }
            Diagram::Spider {
                basis,
                phase,
                outputs,
                ..
            } => {
                let outs: Vec<usize> = (0..*outputs).map(|_| self.edge()).collect();
                let mut legs = outs.clone();
                legs.extend(inputs);
                self.tensors.push(Tensor::Spider {
                    basis: *basis,
                    phase: phase.value(),
                    legs,
                    outputs: *outputs,
                });
                outs
            }
        })
    }
}

/// `⟨s|b_k⟩` for the two vectors of a basis.
fn basis_vector(basis: Basis, k: usize, s: usize) -> f64 {
    match basis {
        Basis::Zeta => f64::from(u8::from(k == s)),
        Basis::Xi => {
            if k == 1 && s == 1 {
                -FRAC_1_SQRT_2
            } else {
                FRAC_1_SQRT_2
            }
        }
    }
}

/// Contracts `d` by summing over every assignment of its internal indices.
pub fn oracle_contract(d: &Diagram) -> Result<ComplexMatrix, EvalError> {
    let arity = d.arity()?;
    let mut flat = Flat::default();
    let inputs: Vec<usize> = (0..arity.inputs).map(|_| flat.edge()).collect();
    let outputs = flat.flatten(d, inputs.clone())?;

    // Index classes: open positions first, then summed ones.
    let mut class_of: HashMap<usize, usize> = HashMap::new();
    let mut n_classes = 0;
    let mut class = |flat: &mut Flat, e: usize| {
        let root = flat.find(e);
        *class_of.entry(root).or_insert_with(|| {
            n_classes += 1;
            n_classes - 1
        })
    };
    let open_rows: Vec<usize> = outputs.iter().map(|&e| class(&mut flat, e)).collect();
    let open_cols: Vec<usize> = inputs.iter().map(|&e| class(&mut flat, e)).collect();
    let n_open = open_rows.len() + open_cols.len();
    let first_internal = open_rows.iter().chain(&open_cols).max().map_or(0, |m| m + 1);

    let mut tensors = Vec::new();
    for t in std::mem::take(&mut flat.tensors) {
        tensors.push(match t {
            Tensor::Spider {
                basis,
                phase,
                legs,
                outputs,
            } => Tensor::Spider {
                basis,
                phase,
                legs: legs.into_iter().map(|e| class(&mut flat, e)).collect(),
                outputs,
            },
            Tensor::Had { input, output } => Tensor::Had {
                input: class(&mut flat, input),
                output: class(&mut flat, output),
            },
            s => s,
        });
    }
    let n_internal = n_classes - first_internal;
    if n_open > ORACLE_MAX_OPEN || n_open + n_internal > ORACLE_MAX_INDICES {
        return Err(EvalError::OracleTooLarge {
            open: n_open,
            internal: n_internal,
        });
    }
    // Closed wire loops touch no tensor and contribute a factor 2 each.
    let mut loops = 0;
    for e in 0..flat.parent.len() {
        let root = flat.find(e);
        if let std::collections::hash_map::Entry::Vacant(slot) = class_of.entry(root) {
            slot.insert(usize::MAX);
            loops += 1;
        }
    }
    let loop_factor = 2f64.powi(loops);

    let rows = 1usize << open_rows.len();
    let cols = 1usize << open_cols.len();
    let mut out = ComplexMatrix::zeros(rows, cols);
    let mut val = vec![usize::MAX; n_classes];
    for r in 0..rows {
        'col: for c in 0..cols {
            val.iter_mut().for_each(|v| *v = usize::MAX);
            let open = open_rows
                .iter()
                .enumerate()
                .map(|(i, &k)| (k, (r >> (open_rows.len() - 1 - i)) & 1))
                .chain(
                    open_cols
                        .iter()
                        .enumerate()
                        .map(|(i, &k)| (k, (c >> (open_cols.len() - 1 - i)) & 1)),
                );
            for (k, bit) in open {
                if val[k] != usize::MAX && val[k] != bit {
                    continue 'col;
                }
                val[k] = bit;
            }
            let mut sum = Complex64::new(0.0, 0.0);
            for assignment in 0..1usize << n_internal {
                for i in 0..n_internal {
                    val[first_internal + i] = (assignment >> i) & 1;
                }
                let mut prod = Complex64::new(loop_factor, 0.0);
                for t in &tensors {
                    prod *= match t {
                        Tensor::Scalar(s) => *s,
                        Tensor::Had { input, output } => Complex64::new(basis_vector(Basis::Xi, val[*input], val[*output]), 0.0),
                        Tensor::Spider {
                            basis,
                            phase,
                            legs,
                            ..
                        } => {
                            let branch = |k: usize| legs.iter().map(|&l| basis_vector(*basis, k, val[l])).product::<f64>();
                            Complex64::new(branch(0), 0.0) + Complex64::from_polar(branch(1), *phase)
                        }
                    };
                    if prod == Complex64::new(0.0, 0.0) {
                        break;
                    }
                }
                sum += prod;
            }
            out.set(r, c, sum);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eval::denote;
    use crate::syntax::Phase;

    #[test]
    fn agrees_on_copy_spider() {
        let d = Diagram::spider(Basis::Zeta, Phase::ZERO, 1, 2);
        assert_eq!(oracle_contract(&d).unwrap(), denote(&d).unwrap());
    }

    #[test]
    fn snake_is_identity() {
        let snake = Diagram::seq(
            Diagram::par(Diagram::Id(1), Diagram::Cup),
            Diagram::par(Diagram::Cap, Diagram::Id(1)),
        );
        assert_eq!(oracle_contract(&snake).unwrap(), ComplexMatrix::identity(2));
    }

    #[test]
    fn closed_loop_is_two() {
        let circle = Diagram::seq(Diagram::Cup, Diagram::Cap);
        assert_eq!(oracle_contract(&circle).unwrap().get(0, 0), Complex64::new(2.0, 0.0));
    }

    #[test]
    fn hadamard_and_x_spider() {
        let d = Diagram::seq(Diagram::Had, Diagram::spider(Basis::Xi, Phase::HALF_PI, 1, 2));
        assert!(oracle_contract(&d).unwrap().max_diff(&denote(&d).unwrap()) < 1e-12);
    }
}
