use std::collections::HashMap;
use std::fmt;

use serde::{Serialize, Serializer};

use super::TypeError;

/// Types: numerals, tensor products and duals. `TypeVar` only appears during
/// inference.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Type {
    Numeral(u32),
    Tensor(Box<Type>, Box<Type>),
    Dual(Box<Type>),
    Var(u32),
}

impl Type {
    pub const UNIT: Type = Type::Numeral(0);

    pub fn tensor(a: Type, b: Type) -> Type {
        Type::Tensor(Box::new(a), Box::new(b))
    }

    pub fn dual(a: Type) -> Type {
        Type::Dual(Box::new(a))
    }

    /// `A → B := A* ⊗ B`.
    pub fn fun(a: Type, b: Type) -> Type {
        Type::tensor(Type::dual(a), b)
    }

    /// Splits a function type into `(A, B)`.
    pub fn as_fun(&self) -> Option<(&Type, &Type)> {
        match self {
            Type::Tensor(l, r) => match &**l {
                Type::Dual(a) => Some((a, r)),
                _ => None,
            },
            _ => None,
        }
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Type::Numeral(_) => true,
            Type::Tensor(a, b) => a.is_ground() && b.is_ground(),
            Type::Dual(a) => a.is_ground(),
            Type::Var(_) => false,
        }
    }

    /// Number of qubit wires.
    pub fn size(&self) -> Result<usize, TypeError> {
        match self {
            Type::Numeral(n) => Ok(*n as usize),
            Type::Tensor(a, b) => Ok(a.size()? + b.size()?),
            Type::Dual(a) => a.size(),
            Type::Var(v) => Err(TypeError::Unresolved(format!("'t{v}"))),
        }
    }

    /// The ordered label set naming this type's wires.
    pub fn labels(&self) -> Result<Vec<Label>, TypeError> {
        match self {
            Type::Numeral(n) => Ok((0..*n).map(Label::Index).collect()),
            Type::Tensor(a, b) => {
                let mut out: Vec<Label> = a.labels()?.into_iter().map(|l| Label::Left(Box::new(l))).collect();
                out.extend(b.labels()?.into_iter().map(|l| Label::Right(Box::new(l))));
                Ok(out)
            }
            Type::Dual(a) => Ok(a.labels()?.into_iter().map(|l| Label::Star(Box::new(l))).collect()),
            Type::Var(v) => Err(TypeError::Unresolved(format!("'t{v}"))),
        }
    }

    pub fn occurs(&self, v: u32) -> bool {
        match self {
            Type::Var(w) => *w == v,
            Type::Numeral(_) => false,
            Type::Tensor(a, b) => a.occurs(v) || b.occurs(v),
            Type::Dual(a) => a.occurs(v),
        }
    }

    /// Removes `⊤` factors from tensors, so `⊤ ⊗ A` and `A` compare equal.
    pub fn unit_normal(&self) -> Type {
        match self {
            Type::Tensor(a, b) => {
                let (a, b) = (a.unit_normal(), b.unit_normal());
                match (&a, &b) {
                    (Type::Numeral(0), _) => b,
                    (_, Type::Numeral(0)) => a,
                    _ => Type::tensor(a, b),
                }
            }
            Type::Dual(a) => match a.unit_normal() {
                Type::Numeral(0) => Type::Numeral(0),
                a => Type::dual(a),
            },
            other => other.clone(),
        }
    }
}

impl fmt::Display for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn factor(t: &Type, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            match t {
                Type::Tensor(..) => write!(f, "({t})"),
                _ => write!(f, "{t}"),
            }
        }
        match self {
            Type::Numeral(n) => write!(f, "{n}"),
            Type::Var(v) => write!(f, "'t{v}"),
            Type::Dual(a) => {
                factor(a, f)?;
                write!(f, "'")
            }
            Type::Tensor(l, r) => {
                if let Some((a, b)) = self.as_fun() {
                    factor(a, f)?;
                    return write!(f, " -> {b}");
                }
                if l.as_fun().is_some() {
                    write!(f, "({l})")?;
                } else {
                    write!(f, "{l}")?;
                }
                write!(f, " * ")?;
                factor(r, f)
            }
        }
    }
}

impl Serialize for Type {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// A wire name drawn from a type's label set.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Label {
    Index(u32),
    Left(Box<Label>),
    Right(Box<Label>),
    Star(Box<Label>),
}

impl Label {
    pub fn star(self) -> Label {
        Label::Star(Box::new(self))
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Index(i) => write!(f, "{i}"),
            Label::Left(l) => write!(f, "(L,{l})"),
            Label::Right(l) => write!(f, "(R,{l})"),
            Label::Star(l) => write!(f, "{l}*"),
        }
    }
}

impl Serialize for Label {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// A substitution from type variables to types.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Subst(HashMap<u32, Type>);

impl Subst {
    pub fn new() -> Subst {
        Subst::default()
    }

    pub fn get(&self, v: u32) -> Option<&Type> {
        self.0.get(&v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Fully resolves `t` under this substitution.
    pub fn apply(&self, t: &Type) -> Type {
        match t {
            Type::Var(v) => match self.0.get(v) {
                Some(u) => self.apply(u),
                None => t.clone(),
            },
            Type::Numeral(_) => t.clone(),
            Type::Tensor(a, b) => Type::tensor(self.apply(a), self.apply(b)),
            Type::Dual(a) => Type::dual(self.apply(a)),
        }
    }

    fn bind(&mut self, v: u32, t: Type) -> Result<(), TypeError> {
        if let Type::Var(w) = t {
            if w == v {
                return Ok(());
            }
        }
        if t.occurs(v) {
            return Err(TypeError::Occurs {
                var: format!("'t{v}"),
                ty: t.to_string(),
            });
        }
        self.0.insert(v, t);
        Ok(())
    }
}

/// Most general unifier of `a` and `b` extending `subst`. Numerals, tensors
/// and duals are free constructors: `2` does not unify with `1 * 1`.
pub fn unify(a: &Type, b: &Type, subst: &Subst) -> Result<Subst, TypeError> {
    let mut s = subst.clone();
    unify_in(a, b, &mut s)?;
    Ok(s)
}

pub(crate) fn unify_in(a: &Type, b: &Type, s: &mut Subst) -> Result<(), TypeError> {
    let a = s.apply(a);
    let b = s.apply(b);
    match (&a, &b) {
        (Type::Var(v), _) => s.bind(*v, b.clone()),
        (_, Type::Var(v)) => s.bind(*v, a.clone()),
        (Type::Numeral(m), Type::Numeral(n)) if m == n => Ok(()),
        (Type::Tensor(a1, a2), Type::Tensor(b1, b2)) => {
            unify_in(a1, b1, s)?;
            unify_in(a2, b2, s)
        }
        (Type::Dual(x), Type::Dual(y)) => unify_in(x, y, s),
        _ => Err(TypeError::Mismatch {
            expected: a.to_string(),
            found: b.to_string(),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one() -> Type {
        Type::Numeral(1)
    }

    #[test]
    fn sizes() {
        assert_eq!(Type::Numeral(3).size().unwrap(), 3);
        assert_eq!(Type::fun(one(), Type::tensor(one(), one())).size().unwrap(), 3);
        assert_eq!(Type::UNIT.size().unwrap(), 0);
        assert!(Type::Var(0).size().is_err());
    }

    #[test]
    fn label_sets() {
        assert_eq!(Type::Numeral(2).labels().unwrap(), vec![Label::Index(0), Label::Index(1)]);
        assert_eq!(Type::dual(one()).labels().unwrap(), vec![Label::Index(0).star()]);
        let t = Type::tensor(one(), one()).labels().unwrap();
        assert_eq!(t.iter().map(|l| l.to_string()).collect::<Vec<_>>(), vec!["(L,0)", "(R,0)"]);
    }

    #[test]
    fn unify_examples() {
        let s = unify(&Type::Var(0), &one(), &Subst::new()).unwrap();
        assert_eq!(s.apply(&Type::Var(0)), one());

        let s = unify(
            &Type::tensor(Type::Var(0), Type::UNIT),
            &Type::fun(one(), Type::UNIT),
            &Subst::new(),
        )
        .unwrap();
        assert_eq!(s.apply(&Type::Var(0)), Type::dual(one()));

        assert!(unify(&Type::Numeral(2), &Type::tensor(one(), one()), &Subst::new()).is_err());
    }

    #[test]
    fn occurs_check() {
        let r = unify(&Type::Var(0), &Type::dual(Type::Var(0)), &Subst::new());
        assert!(matches!(r, Err(TypeError::Occurs { .. })));
    }

    #[test]
    fn display() {
        assert_eq!(Type::fun(one(), Type::tensor(one(), one())).to_string(), "1 -> 1 * 1");
        let f = Type::fun(one(), one());
        assert_eq!(Type::tensor(f.clone(), f.clone()).to_string(), "(1 -> 1) * (1 -> 1)");
        assert_eq!(Type::fun(f.clone(), one()).to_string(), "(1 -> 1) -> 1");
        assert_eq!(Type::dual(Type::tensor(one(), one())).to_string(), "(1 * 1)'");
    }

    #[test]
    fn unit_normal_form() {
        assert_eq!(Type::tensor(Type::UNIT, one()).unit_normal(), one());
        assert_eq!(Type::tensor(one(), Type::UNIT).unit_normal(), one());
        assert_eq!(Type::fun(one(), Type::UNIT).unit_normal(), Type::dual(one()));
    }
}
