use std::fmt;

use serde::Serialize;

use super::{Type, TypeError};
use crate::syntax::{parse_type, Basis};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Entry {
    pub name: String,
    pub basis: Basis,
    #[serde(rename = "type")]
    pub ty: Type,
}

impl Entry {
    pub fn new(name: impl Into<String>, basis: Basis, ty: Type) -> Entry {
        Entry {
            name: name.into(),
            basis,
            ty,
        }
    }
}

impl fmt::Display for Entry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.name, self.basis, self.ty)
    }
}

/// An ordered typing context `x₁ :β₁ A₁, …, xₙ :βₙ Aₙ`. Order fixes wire order.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
#[serde(transparent)]
pub struct Context {
    entries: Vec<Entry>,
}

impl Context {
    pub fn empty() -> Context {
        Context::default()
    }

    /// Builds a context, rejecting repeated names. A name bound in two
    /// different bases cannot be contracted and is reported as such.
    pub fn new(entries: Vec<Entry>) -> Result<Context, TypeError> {
        for (i, e) in entries.iter().enumerate() {
            if let Some(prev) = entries[..i].iter().find(|p| p.name == e.name) {
                if prev.basis != e.basis {
                    return Err(TypeError::BasisConflict {
                        var: e.name.clone(),
                        first: prev.basis,
                        second: e.basis,
                    });
                }
                return Err(TypeError::Duplicate(e.name.clone()));
            }
        }
        Ok(Context { entries })
    }

    pub(crate) fn from_vec_unchecked(entries: Vec<Entry>) -> Context {
        Context { entries }
    }

    /// Parses `x:Z:1, f:X:1->1*1`.
    pub fn parse(src: &str) -> Result<Context, TypeError> {
        let mut entries = Vec::new();
        for item in src.split(',') {
            let item = item.trim();
            if item.is_empty() {
                continue;
            }
            let mut parts = item.splitn(3, ':');
            let (name, basis, ty) = match (parts.next(), parts.next(), parts.next()) {
                (Some(n), Some(b), Some(t)) => (n.trim(), b.trim(), t.trim()),
                _ => return Err(TypeError::BadContext(format!("expected name:basis:type, got `{item}`"))),
            };
            let valid_name = name.chars().next().is_some_and(|c| c.is_alphabetic() || c == '_')
                && name.chars().all(|c| c.is_alphanumeric() || c == '_' || c == '\'');
            if !valid_name {
                return Err(TypeError::BadContext(format!("invalid variable name `{name}`")));
            }
            let basis = Basis::from_letter(basis)
                .ok_or_else(|| TypeError::BadContext(format!("unknown basis `{basis}` (expected Z or X)")))?;
            let ty = parse_type(ty).map_err(|e| TypeError::BadContext(format!("type of `{name}`: {e}")))?;
            entries.push(Entry::new(name, basis, ty));
        }
        Context::new(entries)
    }

    pub fn entries(&self) -> &[Entry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, name: &str) -> Option<&Entry> {
        self.entries.iter().find(|e| e.name == name)
    }

    pub fn position(&self, name: &str) -> Option<usize> {
        self.entries.iter().position(|e| e.name == name)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(|e| e.name.as_str())
    }

    /// Total wire count.
    pub fn size(&self) -> Result<usize, TypeError> {
        self.entries.iter().map(|e| e.ty.size()).sum()
    }

    pub fn concat(&self, other: &Context) -> Result<Context, TypeError> {
        let mut v = self.entries.clone();
        v.extend(other.entries.iter().cloned());
        Context::new(v)
    }

    pub fn push(&mut self, e: Entry) -> Result<(), TypeError> {
        let mut v = std::mem::take(&mut self.entries);
        v.push(e);
        *self = Context::new(v)?;
        Ok(())
    }
}

impl fmt::Display for Context {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.entries.iter().map(|e| e.to_string()).collect();
        f.write_str(&parts.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_cli_syntax() {
        let ctx = Context::parse("x:Z:1, f:X:1->1*1").unwrap();
        assert_eq!(ctx.len(), 2);
        assert_eq!(ctx.entries()[1].basis, Basis::Xi);
        assert_eq!(ctx.entries()[1].ty.size().unwrap(), 3);
        assert!(Context::parse("").unwrap().is_empty());
    }

    #[test]
    fn display_round_trips() {
        let ctx = Context::parse("x:Z:1, f:X:1 -> 1 * 1").unwrap();
        assert_eq!(Context::parse(&ctx.to_string()).unwrap(), ctx);
    }

    #[test]
    fn rejects_conflicts_and_junk() {
        assert!(matches!(
            Context::parse("x:Z:1, x:X:1"),
            Err(TypeError::BasisConflict { .. })
        ));
        assert!(matches!(Context::parse("x:Z:1, x:Z:1"), Err(TypeError::Duplicate(_))));
        assert!(Context::parse("x:Y:1").is_err());
        assert!(Context::parse("x:Z").is_err());
        assert!(Context::parse("1x:Z:1").is_err());
    }
}
