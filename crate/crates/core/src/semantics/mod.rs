//! Typing derivations to diagrams. Context wires enter on the left in
//! context order; the subject's type labels the outputs.

mod translate;

use serde::Serialize;
use thiserror::Error;

use crate::diagram::{upsilon, Diagram, DiagramError};
use crate::eval::EvalError;
use crate::syntax::{print, Term};
use crate::types::{infer_with, Context, InferOptions, Label, Type, TypeError};

pub use translate::{check_substitution, translate, SubstitutionCase};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SemanticsError {
    #[error(transparent)]
    Type(#[from] TypeError),

    #[error(transparent)]
    Diagram(#[from] DiagramError),

    #[error(transparent)]
    Eval(#[from] EvalError),

    #[error("expected a function type, found {0}")]
    NotFunction(String),
}

/// A wire label together with the context entry (or argument) it belongs to.
#[derive(Clone, Debug, PartialEq)]
pub struct WireLabel {
    pub owner: String,
    pub label: Label,
}

impl Serialize for WireLabel {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format!("{}:{}", self.owner, self.label))
    }
}

/// `⟦Γ ⊢ M : A⟧` with its boundary labels.
#[derive(Clone, Debug, PartialEq)]
pub struct JudgementDiagram {
    pub context: Context,
    pub term: Term,
    pub ty: Type,
    pub diagram: Diagram,
    pub input_labels: Vec<WireLabel>,
    pub output_labels: Vec<Label>,
}

impl Serialize for JudgementDiagram {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Labels<'a> {
            inputs: &'a [WireLabel],
            outputs: &'a [Label],
        }
        #[derive(Serialize)]
        struct Doc<'a> {
            context: &'a Context,
            term: String,
            #[serde(rename = "type")]
            ty: &'a Type,
            diagram: &'a Diagram,
            labels: Labels<'a>,
        }
        Doc {
            context: &self.context,
            term: print(&self.term),
            ty: &self.ty,
            diagram: &self.diagram,
            labels: Labels {
                inputs: &self.input_labels,
                outputs: &self.output_labels,
            },
        }
        .serialize(s)
    }
}

pub(crate) fn context_labels(ctx: &Context) -> Result<Vec<WireLabel>, TypeError> {
    let mut out = Vec::new();
    for e in ctx.entries() {
        for label in e.ty.labels()? {
            out.push(WireLabel {
                owner: e.name.clone(),
                label,
            });
        }
    }
    Ok(out)
}

/// Infers a typing for `term` in `ctx` and translates it.
pub fn judgement(ctx: &Context, term: &Term, opts: &InferOptions) -> Result<JudgementDiagram, SemanticsError> {
    let typing = infer_with(ctx, term, opts)?;
    let mut jd = translate(&typing.derivation)?;
    jd.term = term.clone();
    Ok(jd)
}

/// Shares every entry of `ctx` `n` times; output is `n` full copies of the
/// context block, one after another.
pub fn share_context(ctx: &Context, n: usize) -> Result<Diagram, TypeError> {
    let sizes: Vec<usize> = ctx.entries().iter().map(|e| e.ty.size()).collect::<Result<_, _>>()?;
    let per_entry = Diagram::par_all(ctx.entries().iter().zip(&sizes).map(|(e, &s)| upsilon(s, e.basis, n)));
    if n <= 1 {
        return Ok(per_entry);
    }
    let total: usize = sizes.iter().sum();
    let mut perm = vec![0; total * n];
    let mut offset = 0;
    for &s in &sizes {
        for j in 0..n {
            for i in 0..s {
                perm[offset * n + j * s + i] = j * total + offset + i;
            }
        }
        offset += s;
    }
    let regroup = crate::diagram::permutation(&perm).expect("regrouping is a permutation");
    Ok(Diagram::seq(per_entry, regroup))
}

/// Plugs wires `(a*, b, a)` together along `a`, leaving `b`.
pub(crate) fn cap_off(a: usize, b: usize) -> Diagram {
    let mut perm: Vec<usize> = (0..a).collect();
    perm.extend((0..b).map(|j| 2 * a + j));
    perm.extend((0..a).map(|j| a + j));
    let order = crate::diagram::permutation(&perm).expect("cap routing is a permutation");
    Diagram::seq(order, Diagram::par(crate::diagram::caps(a), Diagram::Id(b)))
}

/// Reads a state of type `A → B` as a map from `Γ, A` to `B`.
pub fn eval_as_map(jd: &JudgementDiagram) -> Result<JudgementDiagram, SemanticsError> {
    let (a, b) = jd
        .ty
        .as_fun()
        .ok_or_else(|| SemanticsError::NotFunction(jd.ty.to_string()))?;
    let (sa, sb) = (a.size()?, b.size()?);
    let diagram = Diagram::seq(Diagram::par(jd.diagram.clone(), Diagram::Id(sa)), cap_off(sa, sb));
    let mut input_labels = jd.input_labels.clone();
    input_labels.extend(a.labels()?.into_iter().map(|label| WireLabel {
        owner: "arg".into(),
        label,
    }));
    Ok(JudgementDiagram {
        context: jd.context.clone(),
        term: jd.term.clone(),
        ty: b.clone(),
        diagram,
        input_labels,
        output_labels: b.labels()?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::WireArity;
    use crate::syntax::{parse, Basis, Phase};

    #[test]
    fn share_context_shapes() {
        let one = Context::parse("x:Z:1").unwrap();
        assert_eq!(share_context(&one, 2).unwrap(), Diagram::spider(Basis::Zeta, Phase::ZERO, 1, 2));
        assert_eq!(share_context(&Context::empty(), 2).unwrap(), Diagram::Id(0));
        let two = Context::parse("x:Z:1, y:X:1").unwrap();
        assert_eq!(share_context(&two, 2).unwrap().arity().unwrap(), WireArity { inputs: 2, outputs: 4 });
    }

    #[test]
    fn as_map_needs_function_type() {
        let jd = judgement(&Context::empty(), &parse("Z[1]").unwrap(), &InferOptions::default()).unwrap();
        assert!(matches!(eval_as_map(&jd), Err(SemanticsError::NotFunction(_))));
        let f = judgement(&Context::empty(), &parse("Z x:1. <x, x>").unwrap(), &InferOptions::default()).unwrap();
        let m = eval_as_map(&f).unwrap();
        assert_eq!(m.diagram.arity().unwrap(), WireArity { inputs: 1, outputs: 2 });
        assert_eq!(m.input_labels.len(), 1);
    }
}
