use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use super::{ComplexMatrix, EvalError};
use crate::diagram::Diagram;
use crate::syntax::{Basis, Phase};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// `(1/√2)^k`, exact for even `k`.
fn inv_sqrt2_pow(k: usize) -> f64 {
    let half = 0.5f64.powi((k / 2) as i32);
    if k % 2 == 1 {
        half * FRAC_1_SQRT_2
    } else {
        half
    }
}

/// `|β₀⟩^⊗n⟨β₀|^⊗m + e^{iθ}|β₁⟩^⊗n⟨β₁|^⊗m` as a `2^n × 2^m` matrix.
pub fn spider_matrix(basis: Basis, phase: Phase, m: usize, n: usize) -> ComplexMatrix {
    let (rows, cols) = (1usize << n, 1usize << m);
    let u = phase.unit();
    let mut data = vec![ZERO; rows * cols];
    match basis {
        Basis::Zeta => {
            data[0] += ONE;
            data[(rows - 1) * cols + cols - 1] += u;
        }
        Basis::Xi => {
            let norm = inv_sqrt2_pow(n + m);
            for r in 0..rows {
                for c in 0..cols {
                    let odd = (r.count_ones() + c.count_ones()) % 2 == 1;
                    let v = if odd { ONE - u } else { ONE + u };
                    data[r * cols + c] = v * norm;
                }
            }
        }
    }
    ComplexMatrix::from_vec(rows, cols, data)
}

fn generator_matrix(d: &Diagram) -> Option<ComplexMatrix> {
    let h = FRAC_1_SQRT_2;
    Some(match d {
        Diagram::Spider {
            basis,
            phase,
            inputs,
            outputs,
        } => spider_matrix(*basis, *phase, *inputs, *outputs),
        Diagram::Had => ComplexMatrix::from_real(&[&[h, h], &[h, -h]]),
        Diagram::Swap => ComplexMatrix::from_real(&[
            &[1.0, 0.0, 0.0, 0.0],
            &[0.0, 0.0, 1.0, 0.0],
            &[0.0, 1.0, 0.0, 0.0],
            &[0.0, 0.0, 0.0, 1.0],
        ]),
        Diagram::Cup => ComplexMatrix::from_real(&[&[1.0], &[0.0], &[0.0], &[1.0]]),
        Diagram::Cap => ComplexMatrix::from_real(&[&[1.0, 0.0, 0.0, 1.0]]),
        Diagram::Scalar(c) => ComplexMatrix::from_vec(1, 1, vec![*c]),
        _ => return None,
    })
}

/// Inputs, outputs and the widest row space met while evaluating.
fn profile(d: &Diagram) -> (usize, usize, usize) {
    match d {
        Diagram::Id(n) => (*n, *n, *n),
        Diagram::Seq(a, b) => {
            let (ai, _, ap) = profile(a);
            let (_, bo, bp) = profile(b);
            (ai, bo, ap.max(bp))
        }
        Diagram::Par(t, b) => {
            let (ti, to, tp) = profile(t);
            let (bi, bo, bp) = profile(b);
            (ti + bi, to + bo, (tp + bi).max(to + bp))
        }
        _ => {
            let a = d.arity().expect("generators have fixed arity");
            (a.inputs, a.outputs, a.inputs.max(a.outputs))
        }
    }
}

/// Total wires a dense evaluation of `d` holds at once: its inputs plus the
/// widest intermediate layer.
pub fn wires_needed(d: &Diagram) -> Result<usize, EvalError> {
    d.arity()?;
    let (inputs, _, peak) = profile(d);
    Ok(inputs + peak)
}

/// Working state: the partial denotation, rows over the current wires.
struct State {
    width: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl State {
    /// Applies the `2^b × 2^a` matrix `g` to wires `offset .. offset + a`.
    fn apply(&mut self, g: &ComplexMatrix, offset: usize) {
        let a = g.cols().trailing_zeros() as usize;
        let b = g.rows().trailing_zeros() as usize;
        let lo_bits = self.width - offset - a;
        let new_width = offset + b + lo_bits;
        let cols = self.cols;
        let mut out = vec![ZERO; (1usize << new_width) * cols];
        for h in 0..1usize << offset {
            for y in 0..g.rows() {
                for x in 0..g.cols() {
                    let gv = g.get(y, x);
                    if gv == ZERO {
                        continue;
                    }
                    for lo in 0..1usize << lo_bits {
                        let src = ((h << (a + lo_bits)) | (x << lo_bits) | lo) * cols;
                        let dst = ((h << (b + lo_bits)) | (y << lo_bits) | lo) * cols;
                        for c in 0..cols {
                            out[dst + c] += gv * self.data[src + c];
                        }
                    }
                }
            }
        }
        self.width = new_width;
        self.data = out;
    }

    /// Applies `d` at `offset` and returns its output count.
    fn run(&mut self, d: &Diagram, offset: usize) -> usize {
        match d {
            Diagram::Id(n) => *n,
            Diagram::Seq(a, b) => {
                self.run(a, offset);
                self.run(b, offset)
            }
            Diagram::Par(t, b) => {
                let top = self.run(t, offset);
                top + self.run(b, offset + top)
            }
            g => {
                let m = generator_matrix(g).expect("non-structural node is a generator");
                self.apply(&m, offset);
                m.rows().trailing_zeros() as usize
            }
        }
    }
}

pub const DEFAULT_WIRE_BUDGET: usize = 14;

/// The matrix of `d` under the default wire budget.
pub fn denote(d: &Diagram) -> Result<ComplexMatrix, EvalError> {
    denote_with_budget(d, DEFAULT_WIRE_BUDGET)
}

pub fn denote_with_budget(d: &Diagram, budget: usize) -> Result<ComplexMatrix, EvalError> {
    let arity = d.arity()?;
    let needed = wires_needed(d)?;
    if needed > budget {
        return Err(EvalError::WireBudget { needed, budget });
    }
    let cols = 1usize << arity.inputs;
    let mut st = State {
        width: arity.inputs,
        cols,
        data: ComplexMatrix::identity(cols).entries().to_vec(),
    };
    st.run(d, 0);
    debug_assert_eq!(st.width, arity.outputs);
    Ok(ComplexMatrix::from_vec(1usize << arity.outputs, cols, st.data))
}
