use std::collections::BTreeMap;

use crate::syntax::{print, Basis, Phase, Term};
use crate::types::Type;

/// Values for a rule's metavariables.
#[derive(Clone, Debug, PartialEq)]
pub struct Bindings {
    /// The binder's basis β; the complementary basis is written β̄.
    pub basis: Basis,
    pub alpha: Phase,
    pub theta: Phase,
    /// Multiple of π for π-phase generators.
    pub a: i64,
    /// Type of the bound variable.
    pub ty: Type,
    pub x: String,
    /// Fresh variable for renaming rules.
    pub y: String,
    pub m: Term,
    /// Argument (beta) or the second side of a congruence.
    pub n: Term,
}

impl Default for Bindings {
    fn default() -> Self {
        Bindings {
            basis: Basis::Zeta,
            alpha: Phase::ZERO,
            theta: Phase::ZERO,
            a: 0,
            ty: Type::Numeral(1),
            x: "x".into(),
            y: "y".into(),
            m: Term::var("x"),
            n: Term::Unit,
        }
    }
}

impl Bindings {
    /// The bindings a rule actually reads, as printable strings.
    pub fn describe(&self, rule: &EquationRule) -> BTreeMap<String, String> {
        let mut out = BTreeMap::new();
        for slot in rule.slots {
            let v = match *slot {
                "basis" => self.basis.to_string(),
                "alpha" => self.alpha.to_string(),
                "theta" => self.theta.to_string(),
                "a" => self.a.to_string(),
                "A" => self.ty.to_string(),
                "x" => self.x.clone(),
                "y" => self.y.clone(),
                "M" => print(&self.m),
                "N" => print(&self.n),
                other => unreachable!("unknown slot {other}"),
            };
            out.insert(slot.to_string(), v);
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SideCondition {
    None,
    /// `ω_x(M) = 1`.
    LinearIn,
    /// `x ∉ fv(M)`.
    NotFree,
    /// `y ≠ x` and `y ∉ fv(M)`.
    Fresh,
    /// `a ∈ {0, 1}`.
    PiMultiple,
    /// `M ≡ N` in the context extended with `x`.
    Equivalent,
}

/// An equation schema `lhs ≡ rhs` under a side condition.
#[derive(Clone, Copy)]
pub struct EquationRule {
    pub id: &'static str,
    pub display: &'static str,
    /// Metavariables the schema reads.
    pub slots: &'static [&'static str],
    pub side: SideCondition,
    pub lhs: fn(&Bindings) -> Term,
    pub rhs: fn(&Bindings) -> Term,
}

impl std::fmt::Debug for EquationRule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("EquationRule")
            .field("id", &self.id)
            .field("display", &self.display)
            .finish()
    }
}

fn bound(b: &Bindings, basis: Basis, phase: Phase, body: Term) -> Term {
    Term::abs_ann(basis, phase, b.x.clone(), b.ty.clone(), body)
}

fn lam(var: &str, ty: &Type, body: Term) -> Term {
    Term::Abs {
        basis: Basis::Zeta,
        phase: Phase::ZERO,
        var: var.into(),
        ann: Some(ty.clone()),
        body: Box::new(body),
        linear: true,
    }
}

fn pi_gen(b: &Bindings) -> Term {
    Term::gen(b.basis.complement(), Phase::multiple_of_pi(b.a), 1)
}

pub fn rules() -> Vec<EquationRule> {
    vec![
        EquationRule {
            id: "alpha",
            display: "β^α x M ≡ β^α y M[x := y]",
            slots: &["basis", "alpha", "A", "x", "y", "M"],
            side: SideCondition::Fresh,
            lhs: |b| bound(b, b.basis, b.alpha, b.m.clone()),
            rhs: |b| {
                let body = b.m.substitute(&b.x, &Term::var(b.y.clone()));
                Term::abs_ann(b.basis, b.alpha, b.y.clone(), b.ty.clone(), body)
            },
        },
        EquationRule {
            id: "beta-linear",
            display: "(λx M) N ≡ M[x := N]",
            slots: &["A", "x", "M", "N"],
            side: SideCondition::LinearIn,
            lhs: |b| Term::app(lam(&b.x, &b.ty, b.m.clone()), b.n.clone()),
            rhs: |b| b.m.substitute(&b.x, &b.n),
        },
        EquationRule {
            id: "eta",
            display: "λx (M x) ≡ M",
            slots: &["A", "x", "M"],
            side: SideCondition::NotFree,
            lhs: |b| lam(&b.x, &b.ty, Term::app(b.m.clone(), Term::var(b.x.clone()))),
            rhs: |b| b.m.clone(),
        },
        EquationRule {
            id: "cong-abs",
            display: "M ≡ N ⟹ β^α x M ≡ β^α x N",
            slots: &["basis", "alpha", "A", "x", "M", "N"],
            side: SideCondition::Equivalent,
            lhs: |b| bound(b, b.basis, b.alpha, b.m.clone()),
            rhs: |b| bound(b, b.basis, b.alpha, b.n.clone()),
        },
        EquationRule {
            id: "lambda-embed",
            display: "β x M ≡ λx M  (ω_x(M) = 1)",
            slots: &["basis", "A", "x", "M"],
            side: SideCondition::LinearIn,
            lhs: |b| bound(b, b.basis, Phase::ZERO, b.m.clone()),
            rhs: |b| lam(&b.x, &b.ty, b.m.clone()),
        },
        EquationRule {
            id: "phase-absorb",
            display: "(β^α x M) β^θ ≡ (β x M) β^(θ+α)",
            slots: &["basis", "alpha", "theta", "x", "M"],
            side: SideCondition::None,
            lhs: |b| Term::app(bound(b, b.basis, b.alpha, b.m.clone()), Term::gen(b.basis, b.theta, 1)),
            rhs: |b| {
                Term::app(
                    bound(b, b.basis, Phase::ZERO, b.m.clone()),
                    Term::gen(b.basis, b.theta + b.alpha, 1),
                )
            },
        },
        EquationRule {
            id: "rot-compose",
            display: "(β^α x M) ∘ β̂^θ ≡ β^(α+θ) x M",
            slots: &["basis", "alpha", "theta", "x", "M"],
            side: SideCondition::None,
            lhs: |b| Term::compose(bound(b, b.basis, b.alpha, b.m.clone()), Term::rot(b.basis, b.theta)),
            rhs: |b| bound(b, b.basis, b.alpha + b.theta, b.m.clone()),
        },
        EquationRule {
            id: "copy",
            display: "(β^α x M) β̄^(aπ) ≡ M[x := β̄^(aπ)]",
            slots: &["basis", "alpha", "a", "x", "M"],
            side: SideCondition::PiMultiple,
            lhs: |b| Term::app(bound(b, b.basis, b.alpha, b.m.clone()), pi_gen(b)),
            rhs: |b| b.m.substitute(&b.x, &pi_gen(b)),
        },
        EquationRule {
            id: "pi-commute",
            display: "(β^α x M) ∘ β̄̂^(aπ) ≡ β^((-1)^a α) x M[x := β̄̂^(aπ) x]",
            slots: &["basis", "alpha", "a", "x", "M"],
            side: SideCondition::PiMultiple,
            lhs: |b| {
                let flip = Term::rot(b.basis.complement(), Phase::multiple_of_pi(b.a));
                Term::compose(bound(b, b.basis, b.alpha, b.m.clone()), flip)
            },
            rhs: |b| {
                let flip = Term::rot(b.basis.complement(), Phase::multiple_of_pi(b.a));
                let body = b.m.substitute(&b.x, &Term::app(flip, Term::var(b.x.clone())));
                let phase = if b.a == 1 { -b.alpha } else { b.alpha };
                bound(b, b.basis, phase, body)
            },
        },
        EquationRule {
            id: "color-change",
            display: "β^α x M ≡ (β̄^α y M[x := H y]) ∘ H",
            slots: &["basis", "alpha", "A", "x", "y", "M"],
            side: SideCondition::Fresh,
            lhs: |b| bound(b, b.basis, b.alpha, b.m.clone()),
            rhs: |b| {
                let body = b.m.substitute(&b.x, &Term::app(Term::hadamard(), Term::var(b.y.clone())));
                let switched = Term::abs_ann(b.basis.complement(), b.alpha, b.y.clone(), b.ty.clone(), body);
                Term::compose(switched, Term::hadamard())
            },
        },
        EquationRule {
            id: "h-gen",
            display: "H β_1^α ≡ β̄_1^α",
            slots: &["basis", "alpha"],
            side: SideCondition::None,
            lhs: |b| Term::app(Term::hadamard(), Term::gen(b.basis, b.alpha, 1)),
            rhs: |b| Term::gen(b.basis.complement(), b.alpha, 1),
        },
        EquationRule {
            id: "unit-left",
            display: "<*, M> ≡ M",
            slots: &["M"],
            side: SideCondition::None,
            lhs: |b| Term::tup(Term::Unit, b.m.clone()),
            rhs: |b| b.m.clone(),
        },
        EquationRule {
            id: "unit-right",
            display: "<M, *> ≡ M",
            slots: &["M"],
            side: SideCondition::None,
            lhs: |b| Term::tup(b.m.clone(), Term::Unit),
            rhs: |b| b.m.clone(),
        },
    ]
}

pub fn rule(id: &str) -> Option<EquationRule> {
    rules().into_iter().find(|r| r.id == id)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse;

    #[test]
    fn thirteen_schemas() {
        let rs = rules();
        assert_eq!(rs.len(), 13);
        assert!(rule("beta-linear").is_some());
        assert!(rule("h-gen").is_some());
        let mut ids: Vec<_> = rs.iter().map(|r| r.id).collect();
        ids.dedup();
        assert_eq!(ids.len(), 13);
    }

    #[test]
    fn instantiation() {
        let b = Bindings {
            m: parse("<x, x>").unwrap(),
            a: 1,
            ..Bindings::default()
        };
        let copy = rule("copy").unwrap();
        assert!((copy.rhs)(&b).alpha_eq(&parse("<X[1]^pi, X[1]^pi>").unwrap()));
        let beta = rule("beta-linear").unwrap();
        let b = Bindings {
            n: parse("Z[1]").unwrap(),
            ..Bindings::default()
        };
        assert!((beta.lhs)(&b).alpha_eq(&parse("(\\x:1. x) Z[1]").unwrap()));
        assert_eq!(b.describe(&beta).get("N").map(String::as_str), Some("Z[1]"));
    }
}
