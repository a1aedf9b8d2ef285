//! Dense matrix semantics of diagrams, comparison up to a global scalar, and
//! an independent brute-force contraction used as a test oracle.

mod denote;
mod matrix;
mod oracle;

use num_complex::Complex64;
use thiserror::Error;

use crate::diagram::DiagramError;

pub use denote::{denote, denote_with_budget, spider_matrix, wires_needed, DEFAULT_WIRE_BUDGET};
pub use matrix::{format_complex, kron, matmul, ComplexMatrix};
pub use oracle::{oracle_contract, ORACLE_MAX_INDICES, ORACLE_MAX_OPEN};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error(transparent)]
    Diagram(#[from] DiagramError),

    #[error("diagram needs {needed} wires, over the budget of {budget}")]
    WireBudget { needed: usize, budget: usize },

    #[error("oracle limit exceeded: {open} open and {internal} summed indices")]
    OracleTooLarge { open: usize, internal: usize },

    #[error("shape mismatch: {0}")]
    Shape(String),
}

/// How two matrices relate up to a global factor.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Proportional {
    /// `a = c·b` with `c ≠ 0`.
    Factor(Complex64),
    /// Both matrices vanish.
    BothZero,
}

/// The best scalar `c` with `a ≈ c·b`, taken at the largest entry of `b`,
/// and the residual `max |a − c·b|`.
pub fn best_scalar(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<(Complex64, f64), EvalError> {
    check_shapes(a, b)?;
    let (k, bk) = b
        .entries()
        .iter()
        .enumerate()
        .max_by(|x, y| x.1.norm().total_cmp(&y.1.norm()))
        .map(|(k, v)| (k, *v))
        .unwrap_or((0, Complex64::new(0.0, 0.0)));
    if bk.norm() == 0.0 {
        return Ok((Complex64::new(0.0, 0.0), a.max_abs()));
    }
    let c = a.entries()[k] / bk;
    Ok((c, a.max_diff(&b.scale(c))))
}

/// Returns `c ≠ 0` with `max |a − c·b| ≤ tol`, or `BothZero` when both
/// matrices are within `tol` of zero.
pub fn equal_up_to_scalar(a: &ComplexMatrix, b: &ComplexMatrix, tol: f64) -> Result<Option<Proportional>, EvalError> {
    check_shapes(a, b)?;
    let (za, zb) = (a.max_abs() <= tol, b.max_abs() <= tol);
    if za && zb {
        return Ok(Some(Proportional::BothZero));
    }
    if za || zb {
        return Ok(None);
    }
    let (c, dev) = best_scalar(a, b)?;
    Ok((dev <= tol).then_some(Proportional::Factor(c)))
}

/// Entrywise equality within `tol`, no scalar freedom.
pub fn equal_exact(a: &ComplexMatrix, b: &ComplexMatrix, tol: f64) -> Result<bool, EvalError> {
    check_shapes(a, b)?;
    Ok(a.max_diff(b) <= tol)
}

fn check_shapes(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<(), EvalError> {
    if (a.rows(), a.cols()) != (b.rows(), b.cols()) {
        return Err(EvalError::Shape(format!(
            "{}x{} vs {}x{}",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        )));
    }
    Ok(())
}
