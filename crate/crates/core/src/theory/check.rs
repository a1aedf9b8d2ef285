use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use super::rules::{rules, Bindings, EquationRule, SideCondition};
use crate::eval::{best_scalar, denote_with_budget, equal_up_to_scalar, Proportional};
use crate::semantics::{translate, SemanticsError};
use crate::syntax::{parse, Basis, Phase, Term};
use crate::types::{infer, Context, Entry, Type};

/// Wire budget the rule suite evaluates under.
pub const SUITE_WIRE_BUDGET: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Sound,
    Unsound,
    SideConditionUnmet,
    TypeError,
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Status::Sound => "sound",
            Status::Unsound => "unsound",
            Status::SideConditionUnmet => "side-condition-unmet",
            Status::TypeError => "type-error",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RuleVerdict {
    pub rule: String,
    pub bindings: BTreeMap<String, String>,
    pub context: String,
    pub status: Status,
    /// `lhs = scalar · rhs`, as `[re, im]`.
    pub scalar: Option<[f64; 2]>,
    pub deviation: Option<f64>,
    pub detail: Option<String>,
}

impl std::fmt::Display for RuleVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let binds: Vec<String> = self.bindings.iter().map(|(k, v)| format!("{k}={v}")).collect();
        write!(f, "{:<13} {:<21}", self.rule, self.status.to_string())?;
        if let Some([re, im]) = self.scalar {
            write!(f, " scalar={}", crate::eval::format_complex(num_complex::Complex64::new(re, im)))?;
        }
        if let Some(d) = self.deviation {
            write!(f, " deviation={d:.3e}")?;
        }
        write!(f, " [{}]", binds.join(", "))?;
        if !self.context.is_empty() {
            write!(f, " in {}", self.context)?;
        }
        if let Some(d) = &self.detail {
            write!(f, " ({d})")?;
        }
        Ok(())
    }
}

fn side_condition_holds(rule: &EquationRule, b: &Bindings, ctx: &Context, tol: f64, budget: usize) -> Result<bool, String> {
    Ok(match rule.side {
        SideCondition::None => true,
        SideCondition::LinearIn => b.m.occurrences(&b.x) == 1,
        SideCondition::NotFree => !b.m.has_free(&b.x),
        SideCondition::Fresh => b.y != b.x && !b.m.has_free(&b.y) && ctx.get(&b.y).is_none(),
        SideCondition::PiMultiple => b.a == 0 || b.a == 1,
        SideCondition::Equivalent => {
            let mut inner = ctx.clone();
            inner.push(Entry::new(b.x.clone(), b.basis, b.ty.clone())).map_err(|e| e.to_string())?;
            let cmp = compare_terms(&inner, &b.m, &b.n, tol, budget).map_err(|e| e.to_string())?;
            cmp.verdict.is_some()
        }
    })
}

pub(crate) struct Comparison {
    pub verdict: Option<Proportional>,
    /// `max |l − c·r|` for the best scalar `c`.
    pub deviation: f64,
}

/// Denotational comparison of two terms in one context; types must agree
/// up to `⊤` factors.
pub(crate) fn compare_terms(ctx: &Context, l: &Term, r: &Term, tol: f64, budget: usize) -> Result<Comparison, SemanticsError> {
    let lt = infer(ctx, l)?;
    let rt = infer(ctx, r)?;
    if lt.ty.unit_normal() != rt.ty.unit_normal() {
        return Err(crate::types::TypeError::Mismatch {
            expected: lt.ty.to_string(),
            found: rt.ty.to_string(),
        }
        .into());
    }
    let a = denote_with_budget(&translate(&lt.derivation)?.diagram, budget)?;
    let b = denote_with_budget(&translate(&rt.derivation)?.diagram, budget)?;
    Ok(Comparison {
        verdict: equal_up_to_scalar(&a, &b, tol)?,
        deviation: best_scalar(&a, &b)?.1,
    })
}

/// Instantiates `rule`, typechecks both sides in `ctx`, and compares their
/// denotations up to a scalar.
pub fn check_rule_instance(rule: &EquationRule, b: &Bindings, ctx: &Context, tol: f64) -> RuleVerdict {
    check_rule_instance_with_budget(rule, b, ctx, tol, SUITE_WIRE_BUDGET)
}

pub fn check_rule_instance_with_budget(
    rule: &EquationRule,
    b: &Bindings,
    ctx: &Context,
    tol: f64,
    budget: usize,
) -> RuleVerdict {
    let mut v = RuleVerdict {
        rule: rule.id.to_string(),
        bindings: b.describe(rule),
        context: ctx.to_string(),
        status: Status::Sound,
        scalar: None,
        deviation: None,
        detail: None,
    };
    match side_condition_holds(rule, b, ctx, tol, budget) {
        Ok(true) => {}
        Ok(false) => {
            v.status = Status::SideConditionUnmet;
            return v;
        }
        Err(e) => {
            v.status = Status::TypeError;
            v.detail = Some(e);
            return v;
        }
    }
    let (lhs, rhs) = ((rule.lhs)(b), (rule.rhs)(b));
    match compare_terms(ctx, &lhs, &rhs, tol, budget) {
        Ok(cmp) => {
            v.deviation = Some(cmp.deviation);
            match cmp.verdict {
                Some(Proportional::Factor(c)) => v.scalar = Some([c.re, c.im]),
                Some(Proportional::BothZero) => v.detail = Some("both sides vanish".into()),
                None => v.status = Status::Unsound,
            }
        }
        Err(e) => {
            v.status = Status::TypeError;
            v.detail = Some(e.to_string());
        }
    }
    v
}

/// One rule instance of the standard pool.
#[derive(Clone, Debug)]
pub struct PoolInstance {
    pub rule: EquationRule,
    pub bindings: Bindings,
    pub context: Context,
}

const PHASES: [Phase; 3] = [Phase::ZERO, Phase::HALF_PI, Phase::PI];
const BASES: [Basis; 2] = [Basis::Zeta, Basis::Xi];

fn t(src: &str) -> Term {
    parse(src).unwrap_or_else(|e| panic!("pool term `{src}`: {e}"))
}

fn ctx(src: &str) -> Context {
    Context::parse(src).unwrap_or_else(|e| panic!("pool context `{src}`: {e}"))
}

fn one() -> Type {
    Type::Numeral(1)
}

fn pair() -> Type {
    Type::tensor(one(), one())
}

/// Bodies over a bound variable `x` of the given type, with the context
/// they need besides `x`.
pub fn body_pool(ty: &Type) -> Vec<(Term, Context)> {
    let empty = Context::empty;
    if *ty == one() {
        vec![
            (t("x"), empty()),
            (t("<x, x>"), empty()),
            (Term::app(Term::hadamard(), Term::var("x")), empty()),
            (t("Z y:1. <y, x>"), empty()),
            (t("<x, <x, x>>"), empty()),
            (t("X y:1. <x, y>"), empty()),
            (t("rotX^pi/2 x"), empty()),
            (t("<z, x>"), ctx("z:Z:1")),
        ]
    } else {
        vec![
            (t("x"), empty()),
            (t("<x, x>"), empty()),
            (t("let <p, q> = Z x in <q, p>"), empty()),
            (t("Z y:1. <y, x>"), empty()),
            (t("let <p, q> = X x in <H p, q>"), empty()),
        ]
    }
}

/// Closed arguments of the given type.
fn argument_pool(ty: &Type) -> Vec<Term> {
    if *ty == one() {
        vec![t("Z[1]^pi/2"), t("X[1]^pi"), t("X[1]")]
    } else {
        vec![t("<Z[1]^pi/2, X[1]>"), t("<X[1]^pi, Z[1]^pi/2>")]
    }
}

/// Closed functions out of the given type.
fn function_pool(ty: &Type) -> Vec<Term> {
    if *ty == one() {
        vec![t("Z[-1]"), t("X[-1]^pi/2"), t("Z y:1. <y, y>"), Term::hadamard(), t("X y:1. y")]
    } else {
        vec![
            t("\\p:1*1. let <a, b> = Z p in <Z[-1] a, b>"),
            t("Z p:1*1. let <a, b> = X p in <b, a>"),
            t("\\p:1*1. p"),
        ]
    }
}

/// Pairs of bodies over `x`; the last pair of each list is not equivalent.
fn congruence_pool(ty: &Type) -> Vec<(Term, Term)> {
    if *ty == one() {
        vec![
            (t("x"), t("(Z y:1. y) x")),
            (t("<x, x>"), t("(\\p:1*1. p) <x, x>")),
            (t("x"), Term::app(Term::hadamard(), Term::app(Term::hadamard(), Term::var("x")))),
            (t("<x, x>"), t("let <p, q> = Z <x, x> in <q, p>")),
            (t("x"), t("rotX^pi x")),
        ]
    } else {
        vec![
            (t("x"), t("let <p, q> = Z x in <p, q>")),
            (t("<x, x>"), t("<x, (\\p:1*1. p) x>")),
            (t("x"), t("let <p, q> = Z x in <q, p>")),
        ]
    }
}

/// The standard instantiation pool: both bases, phases `{0, π/2, π}`,
/// `a ∈ {0, 1}`, bound variables of type `1` and `1 ⊗ 1`.
pub fn standard_pool() -> Vec<PoolInstance> {
    let mut out = Vec::new();
    for rule in rules() {
        let mut push = |bindings: Bindings, context: Context| {
            out.push(PoolInstance {
                rule,
                bindings,
                context,
            })
        };
        let single_wire = matches!(rule.id, "phase-absorb" | "rot-compose" | "copy" | "pi-commute" | "color-change");
        let types: Vec<Type> = if single_wire { vec![one()] } else { vec![one(), pair()] };
        match rule.id {
            "h-gen" => {
                for basis in BASES {
                    for alpha in PHASES {
                        push(
                            Bindings {
                                basis,
                                alpha,
                                ..Bindings::default()
                            },
                            Context::empty(),
                        );
                    }
                }
            }
            "beta-linear" => {
                for ty in &types {
                    for (m, c) in body_pool(ty) {
                        for n in argument_pool(ty) {
                            push(
                                Bindings {
                                    ty: ty.clone(),
                                    m: m.clone(),
                                    n,
                                    ..Bindings::default()
                                },
                                c.clone(),
                            );
                        }
                    }
                }
            }
            "eta" => {
                for ty in &types {
                    for m in function_pool(ty) {
                        push(
                            Bindings {
                                ty: ty.clone(),
                                m,
                                ..Bindings::default()
                            },
                            Context::empty(),
                        );
                    }
                }
            }
            "cong-abs" => {
                for ty in &types {
                    for (m, n) in congruence_pool(ty) {
                        for basis in BASES {
                            for alpha in PHASES {
                                push(
                                    Bindings {
                                        basis,
                                        alpha,
                                        ty: ty.clone(),
                                        m: m.clone(),
                                        n: n.clone(),
                                        ..Bindings::default()
                                    },
                                    Context::empty(),
                                );
                            }
                        }
                    }
                }
            }
            "unit-left" | "unit-right" => {
                for ty in &types {
                    for (m, c) in body_pool(ty) {
                        for basis in BASES {
                            let mut c = c.clone();
                            c.push(Entry::new("x", basis, ty.clone())).expect("x is fresh in pool contexts");
                            push(
                                Bindings {
                                    basis,
                                    ty: ty.clone(),
                                    m: m.clone(),
                                    ..Bindings::default()
                                },
                                c,
                            );
                        }
                    }
                }
            }
            _ => {
                let thetas: &[Phase] = if matches!(rule.id, "phase-absorb" | "rot-compose") { &PHASES } else { &[Phase::ZERO] };
                let alphas: &[Phase] = if rule.id == "lambda-embed" { &[Phase::ZERO] } else { &PHASES };
                let pis: &[i64] = if matches!(rule.id, "copy" | "pi-commute") { &[0, 1] } else { &[0] };
                for ty in &types {
                    for (m, c) in body_pool(ty) {
                        for basis in BASES {
                            for &alpha in alphas {
                                for &theta in thetas {
                                    for &a in pis {
                                        push(
                                            Bindings {
                                                basis,
                                                alpha,
                                                theta,
                                                a,
                                                ty: ty.clone(),
                                                m: m.clone(),
                                                ..Bindings::default()
                                            },
                                            c.clone(),
                                        );
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    out
}

/// Checks every instance of the standard pool in parallel.
pub fn run_suite(tol: f64) -> Vec<RuleVerdict> {
    standard_pool()
        .par_iter()
        .map(|i| check_rule_instance(&i.rule, &i.bindings, &i.context, tol))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::theory::rules::rule;

    #[test]
    fn documented_instances() {
        let beta = rule("beta-linear").unwrap();
        let b = Bindings {
            n: t("Z[1]"),
            ..Bindings::default()
        };
        let v = check_rule_instance(&beta, &b, &Context::empty(), 1e-9);
        assert_eq!(v.status, Status::Sound, "{v}");
        assert!(v.scalar.is_some());

        let copy = rule("copy").unwrap();
        let b = Bindings {
            m: t("<x, x>"),
            a: 1,
            ..Bindings::default()
        };
        assert_eq!(check_rule_instance(&copy, &b, &Context::empty(), 1e-9).status, Status::Sound);

        let eta = rule("eta").unwrap();
        let b = Bindings {
            m: t("Z[-1]"),
            ..Bindings::default()
        };
        assert_eq!(check_rule_instance(&eta, &b, &Context::empty(), 1e-9).status, Status::Sound);
    }

    #[test]
    fn side_conditions_are_enforced() {
        let beta = rule("beta-linear").unwrap();
        let b = Bindings {
            m: t("<x, x>"),
            n: t("Z[1]^pi/2"),
            ..Bindings::default()
        };
        assert_eq!(check_rule_instance(&beta, &b, &Context::empty(), 1e-9).status, Status::SideConditionUnmet);
        let alpha = rule("alpha").unwrap();
        let b = Bindings {
            m: t("Z q:1. <y, q>"),
            ..Bindings::default()
        };
        let c = Context::parse("y:Z:1").unwrap();
        assert_eq!(check_rule_instance(&alpha, &b, &c, 1e-9).status, Status::SideConditionUnmet);
    }

    #[test]
    fn unsound_equation_is_caught() {
        // The copy rule does not hold for a non-basis state.
        let fake = EquationRule {
            id: "fake-copy",
            display: "",
            slots: &["M"],
            side: SideCondition::None,
            lhs: |b| Term::app(Term::abs_ann(Basis::Zeta, Phase::ZERO, "x", one(), b.m.clone()), t("Z[1]")),
            rhs: |b| b.m.substitute("x", &t("Z[1]")),
        };
        let b = Bindings {
            m: t("<x, x>"),
            ..Bindings::default()
        };
        let v = check_rule_instance(&fake, &b, &Context::empty(), 1e-9);
        assert_eq!(v.status, Status::Unsound);
        assert!(v.deviation.unwrap() > 1e-3);
    }

    #[test]
    fn pool_covers_every_rule() {
        let pool = standard_pool();
        for r in rules() {
            assert!(pool.iter().any(|i| i.rule.id == r.id), "{}", r.id);
        }
    }
}
