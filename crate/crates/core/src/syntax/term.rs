use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::Phase;
use crate::types::Type;

/// One of the two complementary qubit bases.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Basis {
    /// The computational basis `{|0⟩, |1⟩}`.
    #[serde(rename = "Z")]
    Zeta,
    /// The Hadamard basis `{|+⟩, |−⟩}`.
    #[serde(rename = "X")]
    Xi,
}

impl Basis {
    pub fn complement(self) -> Basis {
        match self {
            Basis::Zeta => Basis::Xi,
            Basis::Xi => Basis::Zeta,
        }
    }

    pub fn letter(self) -> &'static str {
        match self {
            Basis::Zeta => "Z",
            Basis::Xi => "X",
        }
    }

    pub fn from_letter(s: &str) -> Option<Basis> {
        match s {
            "Z" | "z" => Some(Basis::Zeta),
            "X" | "x" => Some(Basis::Xi),
            _ => None,
        }
    }
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.letter())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Term {
    Unit,
    Var(String),
    /// `β_n^α`: a state for `n > 0`, a scalar for `n = 0`, an effect for `n < 0`.
    Gen { basis: Basis, phase: Phase, n: i64 },
    Abs {
        basis: Basis,
        phase: Phase,
        var: String,
        ann: Option<Type>,
        body: Box<Term>,
        /// Written with `\`: the bound variable must occur exactly once.
        linear: bool,
    },
    App(Box<Term>, Box<Term>),
    Tup(Box<Term>, Box<Term>),
    Let {
        basis: Basis,
        left: String,
        right: String,
        left_ann: Option<Type>,
        right_ann: Option<Type>,
        bound: Box<Term>,
        body: Box<Term>,
    },
}

impl Term {
    pub fn var(name: impl Into<String>) -> Term {
        Term::Var(name.into())
    }

    pub fn gen(basis: Basis, phase: Phase, n: i64) -> Term {
        Term::Gen { basis, phase, n }
    }

    pub fn abs(basis: Basis, phase: Phase, var: impl Into<String>, body: Term) -> Term {
        Term::Abs {
            basis,
            phase,
            var: var.into(),
            ann: None,
            body: Box::new(body),
            linear: false,
        }
    }

    pub fn abs_ann(basis: Basis, phase: Phase, var: impl Into<String>, ann: Type, body: Term) -> Term {
        Term::Abs {
            basis,
            phase,
            var: var.into(),
            ann: Some(ann),
            body: Box::new(body),
            linear: false,
        }
    }

    /// `λx M`, elaborated as a phase-free ζ-binder carrying a linearity obligation.
    pub fn lambda(var: impl Into<String>, body: Term) -> Term {
        Term::Abs {
            basis: Basis::Zeta,
            phase: Phase::ZERO,
            var: var.into(),
            ann: None,
            body: Box::new(body),
            linear: true,
        }
    }

    pub fn app(f: Term, a: Term) -> Term {
        Term::App(Box::new(f), Box::new(a))
    }

    pub fn tup(l: Term, r: Term) -> Term {
        Term::Tup(Box::new(l), Box::new(r))
    }

    pub fn let_pair(
        basis: Basis,
        left: impl Into<String>,
        right: impl Into<String>,
        bound: Term,
        body: Term,
    ) -> Term {
        Term::Let {
            basis,
            left: left.into(),
            right: right.into(),
            left_ann: None,
            right_ann: None,
            bound: Box::new(bound),
            body: Box::new(body),
        }
    }

    /// `β̂^α := β^α x x`. The bound wire is a single qubit.
    pub fn rot(basis: Basis, phase: Phase) -> Term {
        Term::abs_ann(basis, phase, "x", Type::Numeral(1), Term::var("x"))
    }

    /// `M ∘ N := β⁰ w. M (N w)` with `w` fresh for both operands.
    pub fn compose_in(basis: Basis, m: Term, n: Term) -> Term {
        let mut avoid: HashSet<String> = m.free_vars().into_iter().collect();
        avoid.extend(n.free_vars());
        let w = fresh_name("w", &avoid);
        Term::abs(
            basis,
            Phase::ZERO,
            w.clone(),
            Term::app(m, Term::app(n, Term::Var(w))),
        )
    }

    /// Composition sugar with the default ζ binder.
    pub fn compose(m: Term, n: Term) -> Term {
        Term::compose_in(Basis::Zeta, m, n)
    }

    /// `H := ζ̂^{π/2} ∘ ξ̂^{π/2} ∘ ζ̂^{π/2}` (composition associates to the right).
    pub fn hadamard() -> Term {
        Term::hadamard_in(Basis::Zeta)
    }

    pub fn hadamard_in(basis: Basis) -> Term {
        let z = || Term::rot(Basis::Zeta, Phase::HALF_PI);
        let x = Term::rot(Basis::Xi, Phase::HALF_PI);
        Term::compose_in(basis, z(), Term::compose_in(basis, x, z()))
    }

    /// Free variables in order of first use.
    pub fn free_vars(&self) -> Vec<String> {
        let mut out = Vec::new();
        let mut bound = Vec::new();
        collect_free(self, &mut bound, &mut out);
        out
    }

    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }

    pub fn has_free(&self, x: &str) -> bool {
        self.occurrences(x) > 0
    }

    /// `ω_x(M)`: free occurrences of `x`.
    pub fn occurrences(&self, x: &str) -> usize {
        match self {
            Term::Unit | Term::Gen { .. } => 0,
            Term::Var(y) => usize::from(y == x),
            Term::Abs { var, body, .. } => {
                if var == x {
                    0
                } else {
                    body.occurrences(x)
                }
            }
            Term::App(a, b) | Term::Tup(a, b) => a.occurrences(x) + b.occurrences(x),
            Term::Let {
                left,
                right,
                bound,
                body,
                ..
            } => {
                let inner = if left == x || right == x {
                    0
                } else {
                    body.occurrences(x)
                };
                bound.occurrences(x) + inner
            }
        }
    }

    /// Equality up to renaming of bound variables.
    pub fn alpha_eq(&self, other: &Term) -> bool {
        alpha_eq_in(self, other, &mut Vec::new(), &mut Vec::new())
    }

    /// Capture-avoiding `self[x := replacement]`.
    pub fn substitute(&self, x: &str, replacement: &Term) -> Term {
        let fv: HashSet<String> = replacement.free_vars().into_iter().collect();
        subst(self, x, replacement, &fv)
    }

    /// Number of AST nodes.
    pub fn size(&self) -> usize {
        match self {
            Term::Unit | Term::Var(_) | Term::Gen { .. } => 1,
            Term::Abs { body, .. } => 1 + body.size(),
            Term::App(a, b) | Term::Tup(a, b) => 1 + a.size() + b.size(),
            Term::Let { bound, body, .. } => 1 + bound.size() + body.size(),
        }
    }
}

/// `base` with primes appended until it avoids `avoid`.
pub fn fresh_name(base: &str, avoid: &HashSet<String>) -> String {
    let mut name = base.to_string();
    while avoid.contains(&name) {
        name.push('\'');
    }
    name
}

fn collect_free(t: &Term, bound: &mut Vec<String>, out: &mut Vec<String>) {
    match t {
        Term::Unit | Term::Gen { .. } => {}
        Term::Var(x) => {
            if !bound.contains(x) && !out.contains(x) {
                out.push(x.clone());
            }
        }
        Term::Abs { var, body, .. } => {
            bound.push(var.clone());
            collect_free(body, bound, out);
            bound.pop();
        }
        Term::App(a, b) | Term::Tup(a, b) => {
            collect_free(a, bound, out);
            collect_free(b, bound, out);
        }
        Term::Let {
            left,
            right,
            bound: m,
            body,
            ..
        } => {
            collect_free(m, bound, out);
            bound.push(left.clone());
            bound.push(right.clone());
            collect_free(body, bound, out);
            bound.pop();
            bound.pop();
        }
    }
}

fn lookup(env: &[String], x: &str) -> Option<usize> {
    env.iter().rposition(|y| y == x)
}

fn alpha_eq_in(a: &Term, b: &Term, ea: &mut Vec<String>, eb: &mut Vec<String>) -> bool {
    match (a, b) {
        (Term::Unit, Term::Unit) => true,
        (Term::Var(x), Term::Var(y)) => match (lookup(ea, x), lookup(eb, y)) {
            (Some(i), Some(j)) => i == j,
            (None, None) => x == y,
            _ => false,
        },
        (
            Term::Gen {
                basis: b1,
                phase: p1,
                n: n1,
            },
            Term::Gen {
                basis: b2,
                phase: p2,
                n: n2,
            },
        ) => b1 == b2 && p1 == p2 && n1 == n2,
        (
            Term::Abs {
                basis: b1,
                phase: p1,
                var: v1,
                ann: a1,
                body: m1,
                linear: l1,
            },
            Term::Abs {
                basis: b2,
                phase: p2,
                var: v2,
                ann: a2,
                body: m2,
                linear: l2,
            },
        ) => {
            if b1 != b2 || p1 != p2 || a1 != a2 || l1 != l2 {
                return false;
            }
            ea.push(v1.clone());
            eb.push(v2.clone());
            let r = alpha_eq_in(m1, m2, ea, eb);
            ea.pop();
            eb.pop();
            r
        }
        (Term::App(f1, x1), Term::App(f2, x2)) | (Term::Tup(f1, x1), Term::Tup(f2, x2)) => {
            alpha_eq_in(f1, f2, ea, eb) && alpha_eq_in(x1, x2, ea, eb)
        }
        (
            Term::Let {
                basis: b1,
                left: l1,
                right: r1,
                left_ann: la1,
                right_ann: ra1,
                bound: m1,
                body: n1,
            },
            Term::Let {
                basis: b2,
                left: l2,
                right: r2,
                left_ann: la2,
                right_ann: ra2,
                bound: m2,
                body: n2,
            },
        ) => {
            if b1 != b2 || la1 != la2 || ra1 != ra2 || !alpha_eq_in(m1, m2, ea, eb) {
                return false;
            }
            ea.push(l1.clone());
            ea.push(r1.clone());
            eb.push(l2.clone());
            eb.push(r2.clone());
            let r = alpha_eq_in(n1, n2, ea, eb);
            ea.truncate(ea.len() - 2);
            eb.truncate(eb.len() - 2);
            r
        }
        _ => false,
    }
}

fn subst(t: &Term, x: &str, n: &Term, fv_n: &HashSet<String>) -> Term {
    match t {
        Term::Unit | Term::Gen { .. } => t.clone(),
        Term::Var(y) => {
            if y == x {
                n.clone()
            } else {
                t.clone()
            }
        }
        Term::Abs {
            basis,
            phase,
            var,
            ann,
            body,
            linear,
        } => {
            if var == x || !body.has_free(x) {
                return t.clone();
            }
            let (var, body) = if fv_n.contains(var) {
                let mut avoid = fv_n.clone();
                avoid.extend(body.free_vars());
                avoid.insert(x.to_string());
                let fresh = fresh_name(var, &avoid);
                let renamed = body.substitute(var, &Term::Var(fresh.clone()));
                (fresh, renamed)
            } else {
                (var.clone(), (**body).clone())
            };
            Term::Abs {
                basis: *basis,
                phase: *phase,
                var,
                ann: ann.clone(),
                body: Box::new(subst(&body, x, n, fv_n)),
                linear: *linear,
            }
        }
        Term::App(a, b) => Term::app(subst(a, x, n, fv_n), subst(b, x, n, fv_n)),
        Term::Tup(a, b) => Term::tup(subst(a, x, n, fv_n), subst(b, x, n, fv_n)),
        Term::Let {
            basis,
            left,
            right,
            left_ann,
            right_ann,
            bound,
            body,
        } => {
            let bound = Box::new(subst(bound, x, n, fv_n));
            if left == x || right == x || !body.has_free(x) {
                return Term::Let {
                    basis: *basis,
                    left: left.clone(),
                    right: right.clone(),
                    left_ann: left_ann.clone(),
                    right_ann: right_ann.clone(),
                    bound,
                    body: body.clone(),
                };
            }
            let mut avoid = fv_n.clone();
            avoid.extend(body.free_vars());
            avoid.insert(x.to_string());
            let mut names = [left.clone(), right.clone()];
            let mut new_body = (**body).clone();
            for name in names.iter_mut() {
                if fv_n.contains(name.as_str()) {
                    let fresh = fresh_name(name, &avoid);
                    avoid.insert(fresh.clone());
                    new_body = new_body.substitute(name, &Term::Var(fresh.clone()));
                    *name = fresh;
                }
            }
            let [left, right] = names;
            Term::Let {
                basis: *basis,
                left,
                right,
                left_ann: left_ann.clone(),
                right_ann: right_ann.clone(),
                bound,
                body: Box::new(subst(&new_body, x, n, fv_n)),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> Term {
        Term::var("x")
    }

    #[test]
    fn free_vars_examples() {
        assert_eq!(x().free_vars(), vec!["x"]);
        let t = Term::abs(Basis::Zeta, Phase::ZERO, "x", Term::tup(x(), Term::var("y")));
        assert_eq!(t.free_vars(), vec!["y"]);
        let l = Term::let_pair(
            Basis::Zeta,
            "a",
            "b",
            Term::var("c"),
            Term::tup(Term::var("a"), Term::var("b")),
        );
        assert_eq!(l.free_vars(), vec!["c"]);
    }

    #[test]
    fn occurrence_counts() {
        assert_eq!(Term::tup(x(), x()).occurrences("x"), 2);
        let share_body = Term::tup(Term::var("f"), Term::var("f"));
        assert_eq!(share_body.occurrences("f"), 2);
        let shadow = Term::abs(Basis::Zeta, Phase::ZERO, "x", x());
        assert_eq!(shadow.occurrences("x"), 0);
    }

    #[test]
    fn alpha_equivalence() {
        let id_x = Term::abs(Basis::Zeta, Phase::ZERO, "x", x());
        let id_y = Term::abs(Basis::Zeta, Phase::ZERO, "y", Term::var("y"));
        assert!(id_x.alpha_eq(&id_y));
        let a = Term::abs(Basis::Zeta, Phase::ZERO, "x", Term::tup(x(), x()));
        let b = Term::abs(Basis::Zeta, Phase::ZERO, "y", Term::tup(Term::var("y"), x()));
        assert!(!a.alpha_eq(&b));
        let p = Term::abs(Basis::Zeta, Phase::HALF_PI, "x", x());
        let q = Term::abs(Basis::Zeta, Phase::radians(std::f64::consts::FRAC_PI_2), "y", Term::var("y"));
        assert!(p.alpha_eq(&q));
    }

    #[test]
    fn substitution_examples() {
        let z1 = Term::gen(Basis::Zeta, Phase::ZERO, 1);
        assert_eq!(Term::tup(x(), x()).substitute("x", &z1), Term::tup(z1.clone(), z1.clone()));
        assert_eq!(x().substitute("x", &Term::Unit), Term::Unit);

        let t = Term::abs(Basis::Zeta, Phase::ZERO, "y", Term::tup(x(), Term::var("y")));
        let s = t.substitute("x", &Term::var("y"));
        let expected = Term::abs(
            Basis::Zeta,
            Phase::ZERO,
            "y'",
            Term::tup(Term::var("y"), Term::var("y'")),
        );
        assert_eq!(s, expected);
    }

    #[test]
    fn substitution_under_let_avoids_capture() {
        let t = Term::let_pair(
            Basis::Zeta,
            "a",
            "b",
            Term::var("p"),
            Term::tup(Term::var("a"), x()),
        );
        let s = t.substitute("x", &Term::var("a"));
        assert_eq!(s.free_vars(), vec!["p", "a"]);
        assert_eq!(s.occurrences("a"), 1);
    }

    #[test]
    fn sugar_shapes() {
        let r = Term::rot(Basis::Xi, Phase::PI);
        assert!(matches!(r, Term::Abs { basis: Basis::Xi, .. }));
        let c = Term::compose(Term::var("w"), Term::var("g"));
        // bound variable must not capture the operand named w
        assert_eq!(c.free_vars(), vec!["w", "g"]);
        assert!(Term::hadamard().is_closed());
    }
}
