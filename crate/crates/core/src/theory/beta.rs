use crate::syntax::Term;

/// One leftmost-outermost step on a redex `(β⁰ x M) N` with `x` used
/// exactly once in `M`.
pub fn beta_step(term: &Term) -> Option<Term> {
    if let Term::App(f, arg) = term {
        if let Term::Abs { phase, var, body, .. } = &**f {
            if phase.is_zero() && body.occurrences(var) == 1 {
                return Some(body.substitute(var, arg));
            }
        }
    }
    match term {
        Term::Unit | Term::Var(_) | Term::Gen { .. } => None,
        Term::Abs {
            basis,
            phase,
            var,
            ann,
            body,
            linear,
        } => beta_step(body).map(|b| Term::Abs {
            basis: *basis,
            phase: *phase,
            var: var.clone(),
            ann: ann.clone(),
            body: Box::new(b),
            linear: *linear,
        }),
        Term::App(a, b) => match beta_step(a) {
            Some(a) => Some(Term::app(a, (**b).clone())),
            None => beta_step(b).map(|b| Term::app((**a).clone(), b)),
        },
        Term::Tup(a, b) => match beta_step(a) {
            Some(a) => Some(Term::tup(a, (**b).clone())),
            None => beta_step(b).map(|b| Term::tup((**a).clone(), b)),
        },
        Term::Let {
            basis,
            left,
            right,
            left_ann,
            right_ann,
            bound,
            body,
        } => {
            let rebuild = |bound: Term, body: Term| Term::Let {
                basis: *basis,
                left: left.clone(),
                right: right.clone(),
                left_ann: left_ann.clone(),
                right_ann: right_ann.clone(),
                bound: Box::new(bound),
                body: Box::new(body),
            };
            match beta_step(bound) {
                Some(m) => Some(rebuild(m, (**body).clone())),
                None => beta_step(body).map(|n| rebuild((**bound).clone(), n)),
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Normalized {
    pub term: Term,
    pub steps: usize,
    pub normal_form: bool,
}

/// Repeats `beta_step` at most `max_steps` times.
pub fn normalize(term: &Term, max_steps: usize) -> Normalized {
    let mut current = term.clone();
    for steps in 0..max_steps {
        match beta_step(&current) {
            Some(next) => current = next,
            None => {
                return Normalized {
                    term: current,
                    steps,
                    normal_form: true,
                }
            }
        }
    }
    let normal_form = beta_step(&current).is_none();
    Normalized {
        term: current,
        steps: max_steps,
        normal_form,
    }
}
