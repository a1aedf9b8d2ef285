use std::fmt;

use super::Term;

#[derive(Clone, Copy, PartialEq)]
enum Pos {
    /// Extends as far right as possible: top level, binder bodies, tuple slots.
    Open,
    /// Function position of an application.
    Head,
    /// Argument position of an application.
    Arg,
}

/// Concrete syntax for a term. Sugar is never reintroduced, so the output
/// parses back to an α-equivalent term.
pub fn print(t: &Term) -> String {
    let mut s = String::new();
    write_term(&mut s, t, Pos::Open);
    s
}

fn write_term(out: &mut String, t: &Term, pos: Pos) {
    let needs_parens = match t {
        Term::Abs { .. } | Term::Let { .. } => pos != Pos::Open,
        Term::App(..) => pos == Pos::Arg,
        _ => false,
    };
    if needs_parens {
        out.push('(');
    }
    match t {
        Term::Unit => out.push('*'),
        Term::Var(x) => out.push_str(x),
        Term::Gen { basis, phase, n } => {
            out.push_str(&format!("{basis}[{n}]"));
            if !phase.is_zero() {
                out.push_str(&format!("^{phase}"));
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
            if *linear {
                out.push('\\');
            } else {
                out.push_str(basis.letter());
                if !phase.is_zero() {
                    out.push_str(&format!("^{phase}"));
                }
                out.push(' ');
            }
            out.push_str(var);
            if let Some(a) = ann {
                out.push_str(&format!(":{a}"));
            }
            out.push_str(". ");
            write_term(out, body, Pos::Open);
        }
        Term::App(f, a) => {
            write_term(out, f, Pos::Head);
            out.push(' ');
            write_term(out, a, Pos::Arg);
        }
        Term::Tup(l, r) => {
            out.push('<');
            write_term(out, l, Pos::Open);
            out.push_str(", ");
            write_term(out, r, Pos::Open);
            out.push('>');
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
            out.push_str("let <");
            out.push_str(left);
            if let Some(a) = left_ann {
                out.push_str(&format!(":{a}"));
            }
            out.push_str(", ");
            out.push_str(right);
            if let Some(a) = right_ann {
                out.push_str(&format!(":{a}"));
            }
            out.push_str(&format!("> = {basis} "));
            // a binder in the bound slot would swallow the `in`
            write_term(out, bound, Pos::Head);
            out.push_str(" in ");
            write_term(out, body, Pos::Open);
        }
    }
    if needs_parens {
        out.push(')');
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse, Basis, Phase};

    #[test]
    fn examples() {
        let id = Term::abs(Basis::Zeta, Phase::ZERO, "x", Term::var("x"));
        assert_eq!(print(&id), "Z x. x");
        assert_eq!(print(&Term::gen(Basis::Xi, Phase::PI, -1)), "X[-1]^pi");
        assert_eq!(print(&Term::tup(Term::Unit, Term::Unit)), "<*, *>");
    }

    #[test]
    fn nested_binders_round_trip() {
        for src in [
            "(Z x. x) (X^pi/2 y:1. y)",
            "f (Z x. x) z",
            "let <a, b> = Z (Z x:1. <x, x>) * in <b, a>",
            "let <a:1, b:1*1> = X p in a",
            "\\f. \\x:1. f x",
            "X[0]^rad(0.5)",
            "g (f x)",
        ] {
            let t = parse(src).unwrap();
            let back = parse(&print(&t)).unwrap();
            assert!(t.alpha_eq(&back), "{src} -> {}", print(&t));
        }
    }
}
