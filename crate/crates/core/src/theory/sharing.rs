use crate::diagram::{upsilon, Diagram};
use crate::eval::{denote_with_budget, equal_up_to_scalar};
use crate::semantics::{judgement, share_context, SemanticsError};
use crate::syntax::{Basis, Term};
use crate::types::{Context, InferOptions};

/// Whether `ctx ⊢ term : A` commutes with `n`-fold sharing over `basis`:
/// sharing the result equals running `n` copies on a shared context.
pub fn commutes_with_sharing(
    ctx: &Context,
    term: &Term,
    basis: Basis,
    n: usize,
    tol: f64,
    budget: usize,
) -> Result<bool, SemanticsError> {
    let jd = judgement(ctx, term, &InferOptions::default())?;
    let size = jd.ty.size()?;
    let after = Diagram::seq(jd.diagram.clone(), upsilon(size, basis, n));
    let before = Diagram::seq(
        share_context(ctx, n)?,
        Diagram::par_all((0..n).map(|_| jd.diagram.clone())),
    );
    let (a, b) = (denote_with_budget(&after, budget)?, denote_with_budget(&before, budget)?);
    Ok(equal_up_to_scalar(&a, &b, tol)?.is_some())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse;

    fn commutes(src: &str, basis: Basis, n: usize) -> bool {
        commutes_with_sharing(&Context::empty(), &parse(src).unwrap(), basis, n, 1e-9, 14).unwrap()
    }

    #[test]
    fn basis_states_copy() {
        assert!(commutes("X[1]^pi", Basis::Zeta, 2));
        assert!(commutes("X[1]", Basis::Zeta, 3));
        assert!(commutes("Z[1]^pi", Basis::Xi, 2));
    }

    #[test]
    fn non_basis_state_does_not_copy() {
        assert!(!commutes("Z[1]^pi/2", Basis::Zeta, 2));
    }

    #[test]
    fn single_copy_always_commutes() {
        for src in ["Z[1]^pi/2", "X[1]^pi/2", "Z[2]^pi"] {
            assert!(commutes(src, Basis::Zeta, 1));
        }
    }
}
