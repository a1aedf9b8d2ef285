use std::collections::BTreeMap;

use serde::Serialize;

use super::{Context, Entry, Type, TypeError};
use crate::syntax::{Basis, Term};

/// The rule applied at a derivation node (typing rules and structural rules).
#[derive(Clone, Debug, PartialEq)]
pub enum Rule {
    /// `Γ ⊢ * : ⊤`
    Unit,
    /// `x : A ⊢ x : A`
    Var,
    /// Generator with `n ≥ 0`: a state of `n` qubits (a scalar at `n = 0`).
    Gen,
    /// Generator with `n < 0`: an effect `|n| → ⊤`.
    Effect,
    Abs,
    App,
    Tup,
    Let,
    /// Weakening of the context entry at `index`.
    Weaken { index: usize },
    /// Contraction of `arity` copies into the entry at `index`.
    Contract { index: usize, arity: usize, basis: Basis },
    /// Exchange: entry `i` of the conclusion sits at position `perm[i]` of the premise.
    Exchange { perm: Vec<usize> },
}

impl Rule {
    pub fn tag(&self) -> &'static str {
        match self {
            Rule::Unit => "U",
            Rule::Var => "V",
            Rule::Gen => "G",
            Rule::Effect => "D",
            Rule::Abs => "B",
            Rule::App => "A",
            Rule::Tup => "T",
            Rule::Let => "E",
            Rule::Weaken { .. } => "W",
            Rule::Contract { .. } => "C",
            Rule::Exchange { .. } => "X",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Derivation {
    pub rule: Rule,
    pub context: Context,
    pub term: Term,
    pub ty: Type,
    pub children: Vec<Derivation>,
}

/// Original name of a contraction copy (`x#3` → `x`).
pub(crate) fn base_name(name: &str) -> &str {
    name.split('#').next().unwrap_or(name)
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct StructuralSummary {
    /// Per variable: list of (arity, basis) contractions.
    pub contractions: BTreeMap<String, Vec<(usize, Basis)>>,
    /// Per variable: number of weakenings.
    pub weakenings: BTreeMap<String, usize>,
    pub exchanges: usize,
}

impl Derivation {
    pub fn count_nodes(&self) -> usize {
        1 + self.children.iter().map(Derivation::count_nodes).sum::<usize>()
    }

    /// Visits nodes in pre-order.
    pub fn walk<'a>(&'a self, f: &mut impl FnMut(&'a Derivation)) {
        f(self);
        for c in &self.children {
            c.walk(f);
        }
    }

    pub fn summary(&self) -> StructuralSummary {
        let mut s = StructuralSummary::default();
        self.walk(&mut |d| match &d.rule {
            Rule::Contract { index, arity, basis } => {
                let name = base_name(&d.context.entries()[*index].name).to_string();
                s.contractions.entry(name).or_default().push((*arity, *basis));
            }
            Rule::Weaken { index } => {
                let name = base_name(&d.context.entries()[*index].name).to_string();
                *s.weakenings.entry(name).or_default() += 1;
            }
            Rule::Exchange { .. } => s.exchanges += 1,
            _ => {}
        });
        s
    }

    /// Replays every node's rule against its children's conclusions.
    pub fn validate(&self) -> Result<(), TypeError> {
        for c in &self.children {
            c.validate()?;
        }
        self.validate_node()
    }

    fn fail(&self, reason: impl Into<String>) -> Result<(), TypeError> {
        Err(TypeError::InvalidDerivation {
            rule: self.rule.tag().to_string(),
            reason: reason.into(),
        })
    }

    fn arity(&self, n: usize) -> Result<(), TypeError> {
        if self.children.len() == n {
            Ok(())
        } else {
            self.fail(format!("expected {n} premises, found {}", self.children.len()))
        }
    }

    fn validate_node(&self) -> Result<(), TypeError> {
        if !self.ty.is_ground() || self.context.entries().iter().any(|e| !e.ty.is_ground()) {
            return self.fail("unresolved type variable in conclusion");
        }
        let ctx = self.context.entries();
        match &self.rule {
            Rule::Unit => {
                self.arity(0)?;
                if self.term != Term::Unit || self.ty != Type::UNIT || !ctx.is_empty() {
                    return self.fail("expected `∅ ⊢ * : 0`");
                }
            }
            Rule::Var => {
                self.arity(0)?;
                match (&self.term, ctx) {
                    (Term::Var(x), [e]) if &e.name == x && e.ty == self.ty => {}
                    _ => return self.fail("expected `x : A ⊢ x : A`"),
                }
            }
            Rule::Gen | Rule::Effect => {
                self.arity(0)?;
                let Term::Gen { n, .. } = self.term else {
                    return self.fail("subject is not a generator");
                };
                let expected = if n >= 0 {
                    Type::Numeral(n as u32)
                } else {
                    Type::fun(Type::Numeral(n.unsigned_abs() as u32), Type::UNIT)
                };
                let rule_ok = (n >= 0) == (self.rule == Rule::Gen);
                if !rule_ok || self.ty != expected || !ctx.is_empty() {
                    return self.fail(format!("generator must have type {expected} in the empty context"));
                }
            }
            Rule::Abs => {
                self.arity(1)?;
                let Term::Abs {
                    basis,
                    var,
                    ann,
                    body,
                    linear,
                    ..
                } = &self.term
                else {
                    return self.fail("subject is not an abstraction");
                };
                let child = &self.children[0];
                let Some((last, init)) = child.context.entries().split_last() else {
                    return self.fail("premise context lacks the bound variable");
                };
                if init != ctx || &last.name != var || last.basis != *basis {
                    return self.fail("premise context must extend the conclusion with the bound variable");
                }
                if ann.as_ref().is_some_and(|a| a != &last.ty) {
                    return self.fail("binder annotation disagrees with premise");
                }
                if child.term != **body {
                    return self.fail("premise subject is not the body");
                }
                if *linear && body.occurrences(var) != 1 {
                    return self.fail("λ-binder is not linear");
                }
                if self.ty != Type::fun(last.ty.clone(), child.ty.clone()) {
                    return self.fail("type is not A -> B");
                }
            }
            Rule::App | Rule::Tup => {
                self.arity(2)?;
                let (m, n) = match &self.term {
                    Term::App(m, n) if self.rule == Rule::App => (m, n),
                    Term::Tup(m, n) if self.rule == Rule::Tup => (m, n),
                    _ => return self.fail("subject shape does not match rule"),
                };
                let (dm, dn) = (&self.children[0], &self.children[1]);
                if dm.term != **m || dn.term != **n {
                    return self.fail("premise subjects do not match");
                }
                let joined: Vec<Entry> = dm.context.entries().iter().chain(dn.context.entries()).cloned().collect();
                if joined != ctx {
                    return self.fail("context is not the concatenation of premise contexts");
                }
                let expected = if self.rule == Rule::App {
                    if dm.ty != Type::fun(dn.ty.clone(), self.ty.clone()) {
                        return self.fail("function type does not match argument/result");
                    }
                    self.ty.clone()
                } else {
                    Type::tensor(dm.ty.clone(), dn.ty.clone())
                };
                if self.ty != expected {
                    return self.fail("type is not A * B");
                }
            }
            Rule::Let => {
                self.arity(2)?;
                let Term::Let {
                    basis,
                    left,
                    right,
                    left_ann,
                    right_ann,
                    bound,
                    body,
                } = &self.term
                else {
                    return self.fail("subject is not a let");
                };
                let (dm, dn) = (&self.children[0], &self.children[1]);
                if dm.term != **bound || dn.term != **body || dn.ty != self.ty {
                    return self.fail("premises do not match subject");
                }
                let ne = dn.context.entries();
                if ne.len() < 2 {
                    return self.fail("body context lacks the pattern variables");
                }
                let (rest, pair) = ne.split_at(ne.len() - 2);
                let (a, b) = (&pair[0], &pair[1]);
                if &a.name != left || &b.name != right || a.basis != *basis || b.basis != *basis {
                    return self.fail("pattern variables misplaced in body context");
                }
                if left_ann.as_ref().is_some_and(|t| t != &a.ty) || right_ann.as_ref().is_some_and(|t| t != &b.ty) {
                    return self.fail("pattern annotation disagrees with premise");
                }
                if dm.ty != Type::tensor(a.ty.clone(), b.ty.clone()) {
                    return self.fail("bound term is not of type A * B");
                }
                let joined: Vec<Entry> = dm.context.entries().iter().chain(rest).cloned().collect();
                if joined != ctx {
                    return self.fail("context is not the concatenation of premise contexts");
                }
            }
            Rule::Weaken { index } => {
                self.arity(1)?;
                let child = &self.children[0];
                if *index >= ctx.len() {
                    return self.fail("index out of range");
                }
                let mut expected = ctx.to_vec();
                let dropped = expected.remove(*index);
                if child.context.entries() != expected.as_slice() || child.term != self.term || child.ty != self.ty {
                    return self.fail("premise must be the conclusion without the weakened entry");
                }
                if self.term.has_free(&dropped.name) {
                    return self.fail("weakened variable is used");
                }
            }
            Rule::Contract { index, arity, basis } => {
                self.arity(1)?;
                let child = &self.children[0];
                if *index >= ctx.len() || *arity < 2 {
                    return self.fail("bad index or arity");
                }
                let x = &ctx[*index];
                if x.basis != *basis {
                    return self.fail("contraction basis differs from the variable's basis");
                }
                let ce = child.context.entries();
                if ce.len() != ctx.len() + arity - 1
                    || ce[..*index] != ctx[..*index]
                    || ce[index + arity..] != ctx[index + 1..]
                {
                    return self.fail("premise context does not expand the contracted entry");
                }
                let mut rebuilt = child.term.clone();
                for copy in &ce[*index..index + arity] {
                    if copy.ty != x.ty || copy.basis != x.basis {
                        return self.fail("copies must share the variable's basis and type");
                    }
                    if child.term.occurrences(&copy.name) != 1 {
                        return self.fail("each copy must be used exactly once");
                    }
                    rebuilt = rebuilt.substitute(&copy.name, &Term::Var(x.name.clone()));
                }
                if rebuilt != self.term || child.ty != self.ty {
                    return self.fail("premise subject does not collapse to the conclusion");
                }
            }
            Rule::Exchange { perm } => {
                self.arity(1)?;
                let child = &self.children[0];
                let ce = child.context.entries();
                let mut seen = vec![false; perm.len()];
                if perm.len() != ctx.len() || ce.len() != ctx.len() {
                    return self.fail("permutation length mismatch");
                }
                for (i, &p) in perm.iter().enumerate() {
                    if p >= ce.len() || seen[p] || ce[p] != ctx[i] {
                        return self.fail("not a permutation of the context");
                    }
                    seen[p] = true;
                }
                if child.term != self.term || child.ty != self.ty {
                    return self.fail("exchange must not change subject or type");
                }
            }
        }
        Ok(())
    }
}
