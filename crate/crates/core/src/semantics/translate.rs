use super::{cap_off, context_labels, JudgementDiagram, SemanticsError};
use crate::diagram::{cups, permutation, upsilon, Diagram};
use crate::eval::{denote_with_budget, equal_up_to_scalar, Proportional};
use crate::syntax::Term;
use crate::types::{infer, Context, Derivation, Entry, Rule, TypeError};

pub fn translate(d: &Derivation) -> Result<JudgementDiagram, SemanticsError> {
    d.validate()?;
    let diagram = clause(d)?;
    let arity = diagram.arity()?;
    debug_assert_eq!(arity.inputs, d.context.size()?);
    debug_assert_eq!(arity.outputs, d.ty.size()?);
    Ok(JudgementDiagram {
        context: d.context.clone(),
        term: d.term.clone(),
        ty: d.ty.clone(),
        diagram,
        input_labels: context_labels(&d.context)?,
        output_labels: d.ty.labels()?,
    })
}

fn sizes(ctx: &[Entry]) -> Result<Vec<usize>, TypeError> {
    ctx.iter().map(|e| e.ty.size()).collect()
}

fn clause(d: &Derivation) -> Result<Diagram, SemanticsError> {
    let ctx = d.context.entries();
    let child = |i: usize| clause(&d.children[i]);
    Ok(match &d.rule {
        Rule::Unit => Diagram::Id(0),
        Rule::Var => Diagram::Id(d.ty.size()?),
        Rule::Gen | Rule::Effect => {
            let Term::Gen { basis, phase, n } = &d.term else {
                unreachable!("validated generator node")
            };
            let k = n.unsigned_abs() as usize;
            if *n >= 0 {
                Diagram::spider(*basis, *phase, 0, k)
            } else {
                // The effect's name: bend its inputs round with cups.
                let effect = Diagram::spider(*basis, *phase, k, 0);
                Diagram::seq(cups(k), Diagram::par(Diagram::Id(k), effect))
            }
        }
        Rule::Abs => {
            let Term::Abs { basis, phase, .. } = &d.term else {
                unreachable!("validated abstraction node")
            };
            let g: usize = sizes(ctx)?.iter().sum();
            let (a, _) = d.ty.as_fun().expect("abstraction has a function type");
            let a = a.size()?;
            let phases = Diagram::par_all((0..a).map(|_| Diagram::spider(*basis, *phase, 1, 1)));
            let body = Diagram::seq(Diagram::par(Diagram::Id(g), phases), child(0)?);
            // (Γ, a*, a) → (a*, Γ, a), then the body eats (Γ, a).
            let mut perm: Vec<usize> = (0..g).map(|i| a + i).collect();
            perm.extend(0..a);
            perm.extend((0..a).map(|j| g + a + j));
            Diagram::seq_all([
                Diagram::par(Diagram::Id(g), cups(a)),
                permutation(&perm)?,
                Diagram::par(Diagram::Id(a), body),
            ])
        }
        Rule::App => {
            let (dm, _) = (&d.children[0], &d.children[1]);
            let (a, b) = dm.ty.as_fun().expect("function position has a function type");
            let both = Diagram::par(child(0)?, child(1)?);
            Diagram::seq(both, cap_off(a.size()?, b.size()?))
        }
        Rule::Tup => Diagram::par(child(0)?, child(1)?),
        Rule::Let => {
            let (dm, dn) = (&d.children[0], &d.children[1]);
            let ab = dm.ty.size()?;
            let ne = dn.context.entries();
            let rest: usize = sizes(&ne[..ne.len() - 2])?.iter().sum();
            // (A ⊗ B, Γ_N) → (Γ_N, A ⊗ B)
            let mut perm: Vec<usize> = (0..ab).map(|i| rest + i).collect();
            perm.extend(0..rest);
            Diagram::seq_all([
                Diagram::par(child(0)?, Diagram::Id(rest)),
                permutation(&perm)?,
                child(1)?,
            ])
        }
        Rule::Weaken { index } => {
            let s = sizes(ctx)?;
            let e = &ctx[*index];
            let discard = Diagram::discard(e.basis, s[*index]);
            Diagram::seq(around(&s, *index, discard), child(0)?)
        }
        Rule::Contract { index, arity, basis } => {
            let s = sizes(ctx)?;
            let share = upsilon(s[*index], *basis, *arity);
            Diagram::seq(around(&s, *index, share), child(0)?)
        }
        Rule::Exchange { perm } => {
            let s = sizes(ctx)?;
            let mut premise_sizes = vec![0; s.len()];
            for (i, &p) in perm.iter().enumerate() {
                premise_sizes[p] = s[i];
            }
            let premise_offsets = offsets(&premise_sizes);
            let mut wires = Vec::new();
            for (i, &p) in perm.iter().enumerate() {
                wires.extend((0..s[i]).map(|t| premise_offsets[p] + t));
            }
            Diagram::seq(permutation(&wires)?, child(0)?)
        }
    })
}

fn offsets(sizes: &[usize]) -> Vec<usize> {
    sizes
        .iter()
        .scan(0, |acc, &s| {
            let o = *acc;
            *acc += s;
            Some(o)
        })
        .collect()
}

/// `middle` on the wires of entry `index`, identities elsewhere.
fn around(sizes: &[usize], index: usize, middle: Diagram) -> Diagram {
    let before: usize = sizes[..index].iter().sum();
    let after: usize = sizes[index + 1..].iter().sum();
    Diagram::par_all([Diagram::Id(before), middle, Diagram::Id(after)])
}

/// A substitution `Γ, x, Δ ⊢ M` with `Θ ⊢ N` plugged in for `x`.
#[derive(Clone, Debug)]
pub struct SubstitutionCase {
    pub gamma: Context,
    pub var: Entry,
    pub delta: Context,
    pub theta: Context,
    pub body: Term,
    pub arg: Term,
}

impl SubstitutionCase {
    /// `⟦Γ, Θ, Δ ⊢ M[x := N]⟧` and `⟦Γ, x, Δ ⊢ M⟧ ∘ (id ⊗ ⟦Θ ⊢ N⟧ ⊗ id)`.
    pub fn diagrams(&self) -> Result<(Diagram, Diagram), SemanticsError> {
        let substituted = self.body.substitute(&self.var.name, &self.arg);
        let outer = self.gamma.concat(&self.theta)?.concat(&self.delta)?;
        let lhs = translate(&infer(&outer, &substituted)?.derivation)?;

        let mut inner = self.gamma.clone();
        inner.push(self.var.clone())?;
        let inner = inner.concat(&self.delta)?;
        let m = translate(&infer(&inner, &self.body)?.derivation)?;
        let n = translate(&infer(&self.theta, &self.arg)?.derivation)?;
        if n.ty != self.var.ty {
            return Err(TypeError::Mismatch {
                expected: self.var.ty.to_string(),
                found: n.ty.to_string(),
            }
            .into());
        }
        if lhs.ty.unit_normal() != m.ty.unit_normal() {
            return Err(TypeError::Mismatch {
                expected: m.ty.to_string(),
                found: lhs.ty.to_string(),
            }
            .into());
        }
        let plug = Diagram::par_all([
            Diagram::Id(self.gamma.size()?),
            n.diagram,
            Diagram::Id(self.delta.size()?),
        ]);
        Ok((lhs.diagram, Diagram::seq(plug, m.diagram)))
    }
}

/// Compares both sides of a substitution case up to scalar.
pub fn check_substitution(
    case: &SubstitutionCase,
    tol: f64,
    budget: usize,
) -> Result<Option<Proportional>, SemanticsError> {
    let (lhs, rhs) = case.diagrams()?;
    let (a, b) = (denote_with_budget(&lhs, budget)?, denote_with_budget(&rhs, budget)?);
    Ok(equal_up_to_scalar(&a, &b, tol)?)
}
