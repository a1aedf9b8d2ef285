//! Algorithmic typing. Structural rules sit at fixed places: a variable that
//! is unused gets a W node at its binding site, a variable used `k ≥ 2` times
//! gets one C node of arity `k` there, and X nodes reorder contexts whenever
//! a pair/application/let splits its context between premises.

use std::collections::HashSet;

use super::derivation::{Derivation, Rule};
use super::ty::{unify_in, Subst};
use super::{Context, Entry, Type, TypeError};
use crate::syntax::{fresh_name, Term};

#[derive(Clone, Debug, Default)]
pub struct InferOptions {
    /// Residual type variables default to this type instead of being an error.
    pub default_type: Option<Type>,
    /// The conclusion must have this type.
    pub expected: Option<Type>,
}

/// A successful typing: the principal type, the derivation, and the types
/// of the term's binders in pre-order.
#[derive(Clone, Debug)]
pub struct Typing {
    pub ty: Type,
    pub derivation: Derivation,
    pub binder_types: Vec<Type>,
}

pub fn infer(ctx: &Context, term: &Term) -> Result<Typing, TypeError> {
    infer_with(ctx, term, &InferOptions::default())
}

pub fn check(ctx: &Context, term: &Term, expected: &Type) -> Result<Derivation, TypeError> {
    let opts = InferOptions {
        expected: Some(expected.clone()),
        ..Default::default()
    };
    Ok(infer_with(ctx, term, &opts)?.derivation)
}

pub fn infer_with(ctx: &Context, term: &Term, opts: &InferOptions) -> Result<Typing, TypeError> {
    for x in term.free_vars() {
        if ctx.get(&x).is_none() {
            return Err(TypeError::Unbound(x));
        }
    }
    let mut used: HashSet<String> = ctx.names().map(String::from).collect();
    let term = distinct_binders(term, &mut used);
    let mut st = State::default();
    let mut d = st.derive_general(ctx.entries().to_vec(), term)?;
    if let Some(exp) = &opts.expected {
        unify_in(exp, &d.ty, &mut st.subst).map_err(|_| TypeError::Mismatch {
            expected: exp.to_string(),
            found: st.subst.apply(&d.ty).to_string(),
        })?;
    }
    for (v, name) in st.binders.clone() {
        let t = st.subst.apply(&Type::Var(v));
        if t.is_ground() {
            continue;
        }
        match &opts.default_type {
            Some(def) => {
                for w in vars_of(&t) {
                    unify_in(&Type::Var(w), def, &mut st.subst)?;
                }
            }
            None => return Err(TypeError::Ambiguous(name)),
        }
    }
    zonk(&mut d, &st.subst);
    d.validate()?;
    Ok(Typing {
        ty: d.ty.clone(),
        binder_types: st.binders.iter().map(|(v, _)| st.subst.apply(&Type::Var(*v))).collect(),
        derivation: d,
    })
}

/// Fills every binder annotation with its inferred type.
pub fn annotate(term: &Term, typing: &Typing) -> Term {
    let mut it = typing.binder_types.iter();
    annotate_in(term, &mut it)
}

fn annotate_in<'a>(t: &Term, it: &mut impl Iterator<Item = &'a Type>) -> Term {
    match t {
        Term::Unit | Term::Var(_) | Term::Gen { .. } => t.clone(),
        Term::Abs {
            basis,
            phase,
            var,
            body,
            linear,
            ..
        } => {
            let ann = it.next().cloned();
            Term::Abs {
                basis: *basis,
                phase: *phase,
                var: var.clone(),
                ann,
                body: Box::new(annotate_in(body, it)),
                linear: *linear,
            }
        }
        Term::App(a, b) => {
            let a = annotate_in(a, it);
            Term::app(a, annotate_in(b, it))
        }
        Term::Tup(a, b) => {
            let a = annotate_in(a, it);
            Term::tup(a, annotate_in(b, it))
        }
        Term::Let {
            basis,
            left,
            right,
            bound,
            body,
            ..
        } => {
            let left_ann = it.next().cloned();
            let right_ann = it.next().cloned();
            let bound = annotate_in(bound, it);
            let body = annotate_in(body, it);
            Term::Let {
                basis: *basis,
                left: left.clone(),
                right: right.clone(),
                left_ann,
                right_ann,
                bound: Box::new(bound),
                body: Box::new(body),
            }
        }
    }
}

/// Renames binders so no name is bound twice or shadows the context.
fn distinct_binders(t: &Term, used: &mut HashSet<String>) -> Term {
    let claim = |name: &str, used: &mut HashSet<String>| {
        let n = fresh_name(name, used);
        used.insert(n.clone());
        n
    };
    match t {
        Term::Unit | Term::Var(_) | Term::Gen { .. } => t.clone(),
        Term::Abs {
            basis,
            phase,
            var,
            ann,
            body,
            linear,
        } => {
            let v = claim(var, used);
            let body = if &v == var { (**body).clone() } else { body.substitute(var, &Term::Var(v.clone())) };
            Term::Abs {
                basis: *basis,
                phase: *phase,
                var: v,
                ann: ann.clone(),
                body: Box::new(distinct_binders(&body, used)),
                linear: *linear,
            }
        }
        Term::App(a, b) => {
            let a = distinct_binders(a, used);
            Term::app(a, distinct_binders(b, used))
        }
        Term::Tup(a, b) => {
            let a = distinct_binders(a, used);
            Term::tup(a, distinct_binders(b, used))
        }
        Term::Let {
            basis,
            left,
            right,
            left_ann,
            right_ann,
            bound,
            body,
        } => {
            let bound = distinct_binders(bound, used);
            let l = claim(left, used);
            let r = claim(right, used);
            let mut body = (**body).clone();
            if &l != left {
                body = body.substitute(left, &Term::Var(l.clone()));
            }
            if &r != right {
                body = body.substitute(right, &Term::Var(r.clone()));
            }
            Term::Let {
                basis: *basis,
                left: l,
                right: r,
                left_ann: left_ann.clone(),
                right_ann: right_ann.clone(),
                bound: Box::new(bound),
                body: Box::new(distinct_binders(&body, used)),
            }
        }
    }
}

fn vars_of(t: &Type) -> Vec<u32> {
    match t {
        Type::Var(v) => vec![*v],
        Type::Numeral(_) => vec![],
        Type::Tensor(a, b) => {
            let mut v = vars_of(a);
            v.extend(vars_of(b));
            v
        }
        Type::Dual(a) => vars_of(a),
    }
}

fn zonk(d: &mut Derivation, s: &Subst) {
    d.ty = s.apply(&d.ty);
    let entries = d
        .context
        .entries()
        .iter()
        .map(|e| Entry::new(e.name.clone(), e.basis, s.apply(&e.ty)))
        .collect();
    d.context = Context::from_vec_unchecked(entries);
    for c in &mut d.children {
        zonk(c, s);
    }
}

#[derive(Default)]
struct State {
    subst: Subst,
    next_var: u32,
    next_copy: usize,
    /// Binder type variables in pre-order, with the binder's name.
    binders: Vec<(u32, String)>,
}

impl State {
    fn fresh(&mut self) -> Type {
        let v = self.next_var;
        self.next_var += 1;
        Type::Var(v)
    }

    fn binder_type(&mut self, name: &str, ann: &Option<Type>) -> Result<Type, TypeError> {
        let v = self.next_var;
        self.next_var += 1;
        self.binders.push((v, name.to_string()));
        if let Some(a) = ann {
            unify_in(&Type::Var(v), a, &mut self.subst)?;
        }
        Ok(Type::Var(v))
    }

    fn node(&self, rule: Rule, ctx: Vec<Entry>, term: Term, ty: Type, children: Vec<Derivation>) -> Derivation {
        Derivation {
            rule,
            context: Context::from_vec_unchecked(ctx),
            term,
            ty,
            children,
        }
    }

    /// Context may hold unused or repeatedly used variables.
    fn derive_general(&mut self, ctx: Vec<Entry>, term: Term) -> Result<Derivation, TypeError> {
        for (i, e) in ctx.iter().enumerate() {
            let k = term.occurrences(&e.name);
            if k == 1 {
                continue;
            }
            if k == 0 {
                let mut rest = ctx.clone();
                rest.remove(i);
                let child = self.derive_general(rest, term.clone())?;
                let ty = child.ty.clone();
                return Ok(self.node(Rule::Weaken { index: i }, ctx, term, ty, vec![child]));
            }
            let names: Vec<String> = (0..k)
                .map(|_| {
                    self.next_copy += 1;
                    format!("{}#{}", super::derivation::base_name(&e.name), self.next_copy)
                })
                .collect();
            let renamed = rename_occurrences(&term, &e.name, &names);
            let mut child_ctx: Vec<Entry> = ctx[..i].to_vec();
            child_ctx.extend(names.iter().map(|n| Entry::new(n.clone(), e.basis, e.ty.clone())));
            child_ctx.extend(ctx[i + 1..].iter().cloned());
            let child = self.derive_general(child_ctx, renamed)?;
            let ty = child.ty.clone();
            let rule = Rule::Contract {
                index: i,
                arity: k,
                basis: e.basis,
            };
            return Ok(self.node(rule, ctx, term, ty, vec![child]));
        }
        self.derive_linear(ctx, term)
    }

    /// Splits a linear context between two subterms, inserting an exchange
    /// when the split is not already in order.
    fn split(&self, ctx: &[Entry], left: &Term) -> (Vec<Entry>, Vec<Entry>, Option<Vec<usize>>) {
        let (l, r): (Vec<Entry>, Vec<Entry>) = ctx.iter().cloned().partition(|e| left.has_free(&e.name));
        let joined: Vec<&Entry> = l.iter().chain(r.iter()).collect();
        if joined.iter().zip(ctx).all(|(a, b)| *a == b) {
            return (l, r, None);
        }
        let perm = ctx
            .iter()
            .map(|e| joined.iter().position(|j| j.name == e.name).unwrap())
            .collect();
        (l, r, Some(perm))
    }

    fn wrap_exchange(&self, ctx: Vec<Entry>, perm: Option<Vec<usize>>, inner: Derivation) -> Derivation {
        match perm {
            None => inner,
            Some(perm) => {
                let (term, ty) = (inner.term.clone(), inner.ty.clone());
                self.node(Rule::Exchange { perm }, ctx, term, ty, vec![inner])
            }
        }
    }

    /// Every context entry occurs exactly once in `term`.
    fn derive_linear(&mut self, ctx: Vec<Entry>, term: Term) -> Result<Derivation, TypeError> {
        match &term {
            Term::Unit => Ok(self.node(Rule::Unit, ctx, term, Type::UNIT, vec![])),
            Term::Var(x) => {
                let e = ctx
                    .iter()
                    .find(|e| &e.name == x)
                    .ok_or_else(|| TypeError::Unbound(x.clone()))?;
                let ty = e.ty.clone();
                Ok(self.node(Rule::Var, ctx, term, ty, vec![]))
            }
            Term::Gen { n, .. } => {
                let n = *n;
                let size = u32::try_from(n.unsigned_abs()).map_err(|_| TypeError::Mismatch {
                    expected: "a generator arity that fits in 32 bits".into(),
                    found: n.to_string(),
                })?;
                if n >= 0 {
                    Ok(self.node(Rule::Gen, ctx, term, Type::Numeral(size), vec![]))
                } else {
                    let ty = Type::fun(Type::Numeral(size), Type::UNIT);
                    Ok(self.node(Rule::Effect, ctx, term, ty, vec![]))
                }
            }
            Term::Abs {
                basis,
                var,
                ann,
                body,
                linear,
                ..
            } => {
                if *linear {
                    let count = body.occurrences(var);
                    if count != 1 {
                        return Err(TypeError::Linearity {
                            var: var.clone(),
                            count,
                        });
                    }
                }
                let a = self.binder_type(var, ann)?;
                let mut inner = ctx.clone();
                inner.push(Entry::new(var.clone(), *basis, a.clone()));
                let child = self.derive_general(inner, (**body).clone())?;
                let ty = Type::fun(a, child.ty.clone());
                Ok(self.node(Rule::Abs, ctx, term, ty, vec![child]))
            }
            Term::App(m, n) | Term::Tup(m, n) => {
                let is_app = matches!(term, Term::App(..));
                let (lc, rc, perm) = self.split(&ctx, m);
                let dm = self.derive_linear(lc.clone(), (**m).clone())?;
                let dn = self.derive_linear(rc.clone(), (**n).clone())?;
                let (rule, ty) = if is_app {
                    let res = self.fresh();
                    let want = Type::fun(dn.ty.clone(), res.clone());
                    unify_in(&dm.ty, &want, &mut self.subst).map_err(|_| TypeError::Mismatch {
                        expected: format!("a function accepting {}", self.subst.apply(&dn.ty)),
                        found: self.subst.apply(&dm.ty).to_string(),
                    })?;
                    (Rule::App, res)
                } else {
                    (Rule::Tup, Type::tensor(dm.ty.clone(), dn.ty.clone()))
                };
                let joined: Vec<Entry> = lc.into_iter().chain(rc).collect();
                let inner = self.node(rule, joined, term.clone(), ty, vec![dm, dn]);
                Ok(self.wrap_exchange(ctx, perm, inner))
            }
            Term::Let {
                basis,
                left,
                right,
                left_ann,
                right_ann,
                bound,
                body,
            } => {
                let a = self.binder_type(left, left_ann)?;
                let b = self.binder_type(right, right_ann)?;
                let (lc, rc, perm) = self.split(&ctx, bound);
                let dm = self.derive_linear(lc.clone(), (**bound).clone())?;
                let want = Type::tensor(a.clone(), b.clone());
                unify_in(&dm.ty, &want, &mut self.subst).map_err(|_| TypeError::Mismatch {
                    expected: "a pair A * B".into(),
                    found: self.subst.apply(&dm.ty).to_string(),
                })?;
                let mut inner_ctx = rc.clone();
                inner_ctx.push(Entry::new(left.clone(), *basis, a));
                inner_ctx.push(Entry::new(right.clone(), *basis, b));
                let dn = self.derive_general(inner_ctx, (**body).clone())?;
                let ty = dn.ty.clone();
                let joined: Vec<Entry> = lc.into_iter().chain(rc).collect();
                let inner = self.node(Rule::Let, joined, term.clone(), ty, vec![dm, dn]);
                Ok(self.wrap_exchange(ctx, perm, inner))
            }
        }
    }
}

/// Renames the free occurrences of `x`, left to right, to `names`.
fn rename_occurrences(t: &Term, x: &str, names: &[String]) -> Term {
    let mut i = 0;
    let r = rename_in(t, x, names, &mut i);
    debug_assert_eq!(i, names.len());
    r
}

fn rename_in(t: &Term, x: &str, names: &[String], i: &mut usize) -> Term {
    match t {
        Term::Unit | Term::Gen { .. } => t.clone(),
        Term::Var(y) if y == x => {
            let n = Term::Var(names[*i].clone());
            *i += 1;
            n
        }
        Term::Var(_) => t.clone(),
        Term::Abs {
            basis,
            phase,
            var,
            ann,
            body,
            linear,
        } => {
            if var == x {
                return t.clone();
            }
            Term::Abs {
                basis: *basis,
                phase: *phase,
                var: var.clone(),
                ann: ann.clone(),
                body: Box::new(rename_in(body, x, names, i)),
                linear: *linear,
            }
        }
        Term::App(a, b) => {
            let a = rename_in(a, x, names, i);
            Term::app(a, rename_in(b, x, names, i))
        }
        Term::Tup(a, b) => {
            let a = rename_in(a, x, names, i);
            Term::tup(a, rename_in(b, x, names, i))
        }
        Term::Let {
            basis,
            left,
            right,
            left_ann,
            right_ann,
            bound,
            body,
        } => {
            let bound = rename_in(bound, x, names, i);
            let body = if left == x || right == x {
                (**body).clone()
            } else {
                rename_in(body, x, names, i)
            };
            Term::Let {
                basis: *basis,
                left: left.clone(),
                right: right.clone(),
                left_ann: left_ann.clone(),
                right_ann: right_ann.clone(),
                bound: Box::new(bound),
                body: Box::new(body),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse, Basis};

    fn one() -> Type {
        Type::Numeral(1)
    }

    fn ctx(s: &str) -> Context {
        Context::parse(s).unwrap()
    }

    #[test]
    fn pair_of_shared_variable() {
        let t = infer(&ctx("x:Z:1"), &parse("<x, x>").unwrap()).unwrap();
        assert_eq!(t.ty, Type::tensor(one(), one()));
        assert!(matches!(
            t.derivation.rule,
            Rule::Contract {
                arity: 2,
                basis: Basis::Zeta,
                ..
            }
        ));
    }

    #[test]
    fn higher_order_sharing_type() {
        let t = infer(&Context::empty(), &parse("X f : 1 -> 1*1 . <f,f>").unwrap()).unwrap();
        let a = Type::fun(one(), Type::tensor(one(), one()));
        assert_eq!(t.ty, Type::fun(a.clone(), Type::tensor(a.clone(), a)));
    }

    #[test]
    fn unit_and_generators() {
        assert_eq!(infer(&Context::empty(), &Term::Unit).unwrap().ty, Type::UNIT);
        let eff = infer(&Context::empty(), &parse("Z[-2]").unwrap()).unwrap();
        assert_eq!(eff.ty, Type::fun(Type::Numeral(2), Type::UNIT));
        assert_eq!(eff.derivation.rule, Rule::Effect);
    }

    #[test]
    fn check_examples() {
        let d = check(&Context::empty(), &parse("Z x:1. <x,x>").unwrap(), &Type::fun(one(), Type::tensor(one(), one()))).unwrap();
        let s = d.summary();
        assert_eq!(s.contractions.get("x"), Some(&vec![(2, Basis::Zeta)]));
        assert!(matches!(
            check(&Context::empty(), &Term::Unit, &one()),
            Err(TypeError::Mismatch { .. })
        ));
        let v = check(&ctx("x:Z:1"), &Term::var("x"), &one()).unwrap();
        assert_eq!(v.rule, Rule::Var);
    }

    #[test]
    fn errors() {
        assert_eq!(
            infer(&Context::empty(), &Term::var("y")).unwrap_err(),
            TypeError::Unbound("y".into())
        );
        assert!(matches!(
            infer(&Context::empty(), &parse("\\x:1. <x, x>").unwrap()),
            Err(TypeError::Linearity { count: 2, .. })
        ));
        assert_eq!(
            infer(&Context::empty(), &parse("Z x. x").unwrap()).unwrap_err(),
            TypeError::Ambiguous("x".into())
        );
        assert!(infer(&Context::empty(), &parse("Z[1] Z[1]").unwrap()).is_err());
    }

    #[test]
    fn default_type_resolves_ambiguity() {
        let opts = InferOptions {
            default_type: Some(one()),
            ..Default::default()
        };
        let t = infer_with(&Context::empty(), &parse("Z x. x").unwrap(), &opts).unwrap();
        assert_eq!(t.ty, Type::fun(one(), one()));
    }

    #[test]
    fn exchange_inserted_for_out_of_order_use() {
        let t = infer(&ctx("a:Z:1, b:X:1"), &parse("<b, a>").unwrap()).unwrap();
        assert!(matches!(t.derivation.rule, Rule::Exchange { ref perm } if perm == &vec![1, 0]));
        assert_eq!(t.derivation.summary().exchanges, 1);
    }

    #[test]
    fn unused_context_entries_are_weakened() {
        let t = infer(&ctx("a:Z:1, b:X:1"), &parse("b").unwrap()).unwrap();
        assert_eq!(t.derivation.summary().weakenings.get("a"), Some(&1));
    }

    #[test]
    fn annotate_then_check_gives_same_type() {
        let term = parse("(X f. <f, f>) (Z x:1. <x, x>)").unwrap();
        let t = infer(&Context::empty(), &term).unwrap();
        let annotated = annotate(&term, &t);
        let d = check(&Context::empty(), &annotated, &t.ty).unwrap();
        assert_eq!(d.ty, t.ty);
    }

    #[test]
    fn shadowed_binders_are_renamed() {
        let t = infer(&ctx("x:Z:1"), &parse("<x, (Z x:1. x) Z[1]>").unwrap()).unwrap();
        assert_eq!(t.ty, Type::tensor(one(), one()));
        assert!(t.derivation.summary().contractions.is_empty());
    }

    #[test]
    fn let_types() {
        let t = infer(&ctx("p:Z:1*1"), &parse("let <a, b> = X p in <b, <a, a>>").unwrap()).unwrap();
        assert_eq!(t.ty, Type::tensor(one(), Type::tensor(one(), one())));
        let s = t.derivation.summary();
        assert_eq!(s.contractions.get("a"), Some(&vec![(2, Basis::Xi)]));
    }
}
