//! Concrete syntax for ζ-terms and types.
//!
//! ```text
//! term   := comp ; comp := app ("o" app)*        (right-assoc)
//! app    := atom+                                (left-assoc)
//! atom   := "*" | ident | gen | rot | "H" | tuple | letexp | abs | "(" term ")"
//! abs    := ("Z"|"X") ["^" phase] ident [":" type] "." term
//!         | "\" ident [":" type] "." term
//! gen    := ("Z"|"X") "[" int "]" ["^" phase]
//! rot    := "rot" ("Z"|"X") "^" phase
//! tuple  := "<" term "," term ">"
//! letexp := "let" "<" ident [":" type] "," ident [":" type] ">" "=" ("Z"|"X") term "in" term
//! phase  := ["-"] (int "pi" ["/" int] | "pi" ["/" int] | "0" | "rad(" decimal ")")
//! type   := prod ["->" type] ; prod := tfact ("*" tfact)* ; tfact := nat | tfact "'" | "(" type ")"
//! ```

use thiserror::Error;

use super::{Basis, Phase, Term};
use crate::types::Type;

#[derive(Debug, Clone, PartialEq, Error)]
#[error("{line}:{col}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Star,
    Ident(String),
    Int(i64),
    Rad(f64),
    LBracket,
    RBracket,
    LParen,
    RParen,
    Lt,
    Gt,
    Caret,
    Dot,
    Colon,
    Comma,
    Backslash,
    Eq,
    Arrow,
    Minus,
    Slash,
    Prime,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Int(n) => format!("`{n}`"),
            Tok::Rad(r) => format!("`rad({r})`"),
            Tok::Eof => "end of input".into(),
            other => {
                let s = match other {
                    Tok::Star => "*",
                    Tok::LBracket => "[",
                    Tok::RBracket => "]",
                    Tok::LParen => "(",
                    Tok::RParen => ")",
                    Tok::Lt => "<",
                    Tok::Gt => ">",
                    Tok::Caret => "^",
                    Tok::Dot => ".",
                    Tok::Colon => ":",
                    Tok::Comma => ",",
                    Tok::Backslash => "\\",
                    Tok::Eq => "=",
                    Tok::Arrow => "->",
                    Tok::Minus => "-",
                    Tok::Slash => "/",
                    Tok::Prime => "'",
                    _ => unreachable!(),
                };
                format!("`{s}`")
            }
        }
    }
}

const KEYWORDS: &[&str] = &["Z", "X", "H", "let", "in", "o", "pi", "rot", "rotZ", "rotX", "rad"];

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(src: &str) -> Result<Vec<Spanned>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    let err = |line, col, message: String| ParseError { line, col, message };
    while i < chars.len() {
        let c = chars[i];
        let (tl, tc) = (line, col);
        let advance = |n: usize, i: &mut usize, col: &mut usize| {
            *i += n;
            *col += n;
        };
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            advance(1, &mut i, &mut col);
            continue;
        }
        // line comments
        if c == '#' || (c == '-' && chars.get(i + 1) == Some(&'-')) {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let tok = if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
                col += 1;
            }
            let s: String = chars[start..i].iter().collect();
            let n = s
                .parse::<i64>()
                .map_err(|_| err(tl, tc, format!("integer literal `{s}` out of range")))?;
            out.push(Spanned { tok: Tok::Int(n), line: tl, col: tc });
            continue;
        } else if (c.is_alphabetic() && c != 'λ') || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
                col += 1;
            }
            while i < chars.len() && chars[i] == '\'' {
                i += 1;
                col += 1;
            }
            let s: String = chars[start..i].iter().collect();
            if s == "rad" && chars.get(i) == Some(&'(') {
                let body_start = i + 1;
                let mut j = body_start;
                while j < chars.len() && chars[j] != ')' && chars[j] != '\n' {
                    j += 1;
                }
                if chars.get(j) != Some(&')') {
                    return Err(err(tl, tc, "unterminated `rad(`".into()));
                }
                let body: String = chars[body_start..j].iter().collect();
                let v: f64 = body
                    .trim()
                    .parse()
                    .ok()
                    .filter(|v: &f64| v.is_finite())
                    .ok_or_else(|| err(tl, tc, format!("invalid decimal `{body}` in rad(..)")))?;
                col += j + 1 - i;
                i = j + 1;
                out.push(Spanned { tok: Tok::Rad(v), line: tl, col: tc });
            } else {
                out.push(Spanned { tok: Tok::Ident(s), line: tl, col: tc });
            }
            continue;
        } else {
            match c {
                '*' => Tok::Star,
                '[' => Tok::LBracket,
                ']' => Tok::RBracket,
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                '<' => Tok::Lt,
                '>' => Tok::Gt,
                '^' => Tok::Caret,
                '.' => Tok::Dot,
                ':' => Tok::Colon,
                ',' => Tok::Comma,
                '\\' | 'λ' => Tok::Backslash,
                '=' => Tok::Eq,
                '/' => Tok::Slash,
                '\'' => Tok::Prime,
                '-' if chars.get(i + 1) == Some(&'>') => {
                    advance(1, &mut i, &mut col);
                    Tok::Arrow
                }
                '-' => Tok::Minus,
                other => return Err(err(tl, tc, format!("unexpected character `{other}`"))),
            }
        };
        advance(1, &mut i, &mut col);
        out.push(Spanned { tok, line: tl, col: tc });
    }
    out.push(Spanned { tok: Tok::Eof, line, col });
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        let i = (self.pos + k).min(self.toks.len() - 1);
        &self.toks[i].tok
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos < self.toks.len() - 1 {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        let s = &self.toks[self.pos];
        Err(ParseError {
            line: s.line,
            col: s.col,
            message: message.into(),
        })
    }

    fn expect(&mut self, want: Tok) -> Result<(), ParseError> {
        if *self.peek() == want {
            self.bump();
            Ok(())
        } else {
            self.error(format!("expected {}, found {}", want.describe(), self.peek().describe()))
        }
    }

    fn is_kw(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn ident(&mut self) -> Result<String, ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) => {
                self.bump();
                Ok(s)
            }
            Tok::Ident(s) => self.error(format!("`{s}` is reserved and cannot name a variable")),
            other => self.error(format!("expected identifier, found {}", other.describe())),
        }
    }

    fn basis(&mut self) -> Result<Basis, ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) if s == "Z" || s == "X" => {
                self.bump();
                Ok(Basis::from_letter(&s).unwrap())
            }
            other => self.error(format!("expected basis `Z` or `X`, found {}", other.describe())),
        }
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        let head = self.app()?;
        if self.is_kw("o") {
            self.bump();
            let rest = self.term()?;
            Ok(Term::compose(head, rest))
        } else {
            Ok(head)
        }
    }

    fn starts_atom(&self) -> bool {
        match self.peek() {
            Tok::Star | Tok::Lt | Tok::LParen | Tok::Backslash => true,
            Tok::Ident(s) => !matches!(s.as_str(), "in" | "o" | "pi"),
            _ => false,
        }
    }

    fn app(&mut self) -> Result<Term, ParseError> {
        if !self.starts_atom() {
            return self.error(format!("expected a term, found {}", self.peek().describe()));
        }
        let mut t = self.atom()?;
        while self.starts_atom() {
            let a = self.atom()?;
            t = Term::app(t, a);
        }
        Ok(t)
    }

    fn atom(&mut self) -> Result<Term, ParseError> {
        match self.peek().clone() {
            Tok::Star => {
                self.bump();
                Ok(Term::Unit)
            }
            Tok::LParen => {
                self.bump();
                let t = self.term()?;
                self.expect(Tok::RParen)?;
                Ok(t)
            }
            Tok::Lt => {
                self.bump();
                let l = self.term()?;
                self.expect(Tok::Comma)?;
                let r = self.term()?;
                self.expect(Tok::Gt)?;
                Ok(Term::tup(l, r))
            }
            Tok::Backslash => {
                self.bump();
                let var = self.ident()?;
                let ann = self.opt_annotation()?;
                self.expect(Tok::Dot)?;
                let body = self.term()?;
                let mut t = Term::lambda(var, body);
                if let Term::Abs { ann: a, .. } = &mut t {
                    *a = ann;
                }
                Ok(t)
            }
            Tok::Ident(s) => match s.as_str() {
                "H" => {
                    self.bump();
                    Ok(Term::hadamard())
                }
                "let" => self.let_expr(),
                "rot" => {
                    self.bump();
                    let b = self.basis()?;
                    self.rot_tail(b)
                }
                "rotZ" => {
                    self.bump();
                    self.rot_tail(Basis::Zeta)
                }
                "rotX" => {
                    self.bump();
                    self.rot_tail(Basis::Xi)
                }
                "Z" | "X" => {
                    let b = self.basis()?;
                    if *self.peek() == Tok::LBracket {
                        self.bump();
                        let neg = if *self.peek() == Tok::Minus {
                            self.bump();
                            true
                        } else {
                            false
                        };
                        let n = match self.bump() {
                            Tok::Int(n) => n,
                            other => {
                                self.pos -= 1;
                                return self.error(format!("expected integer, found {}", other.describe()));
                            }
                        };
                        self.expect(Tok::RBracket)?;
                        let phase = if *self.peek() == Tok::Caret {
                            self.bump();
                            self.phase()?
                        } else {
                            Phase::ZERO
                        };
                        Ok(Term::gen(b, phase, if neg { -n } else { n }))
                    } else {
                        let phase = if *self.peek() == Tok::Caret {
                            self.bump();
                            self.phase()?
                        } else {
                            Phase::ZERO
                        };
                        let var = self.ident()?;
                        let ann = self.opt_annotation()?;
                        self.expect(Tok::Dot)?;
                        let body = self.term()?;
                        Ok(Term::Abs {
                            basis: b,
                            phase,
                            var,
                            ann,
                            body: Box::new(body),
                            linear: false,
                        })
                    }
                }
                _ => Ok(Term::Var(self.ident()?)),
            },
            other => self.error(format!("expected a term, found {}", other.describe())),
        }
    }

    fn rot_tail(&mut self, b: Basis) -> Result<Term, ParseError> {
        self.expect(Tok::Caret)?;
        let p = self.phase()?;
        Ok(Term::rot(b, p))
    }

    fn let_expr(&mut self) -> Result<Term, ParseError> {
        self.bump();
        self.expect(Tok::Lt)?;
        let left = self.ident()?;
        let left_ann = self.opt_annotation()?;
        self.expect(Tok::Comma)?;
        let right = self.ident()?;
        let right_ann = self.opt_annotation()?;
        self.expect(Tok::Gt)?;
        self.expect(Tok::Eq)?;
        let basis = self.basis()?;
        let bound = self.term()?;
        if !self.is_kw("in") {
            return self.error(format!("expected `in`, found {}", self.peek().describe()));
        }
        self.bump();
        let body = self.term()?;
        if left == right {
            return self.error(format!("let binds `{left}` twice"));
        }
        Ok(Term::Let {
            basis,
            left,
            right,
            left_ann,
            right_ann,
            bound: Box::new(bound),
            body: Box::new(body),
        })
    }

    fn opt_annotation(&mut self) -> Result<Option<Type>, ParseError> {
        if *self.peek() == Tok::Colon {
            self.bump();
            Ok(Some(self.ty()?))
        } else {
            Ok(None)
        }
    }

    fn phase(&mut self) -> Result<Phase, ParseError> {
        let neg = if *self.peek() == Tok::Minus {
            self.bump();
            true
        } else {
            false
        };
        let p = match self.peek().clone() {
            Tok::Rad(r) => {
                self.bump();
                Phase::radians(r)
            }
            Tok::Int(k) => {
                self.bump();
                if self.is_kw("pi") {
                    self.bump();
                    let den = self.opt_den()?;
                    Phase::pi_frac(k, den)
                } else if k == 0 {
                    Phase::ZERO
                } else {
                    return self.error("a nonzero phase must be written as a multiple of `pi` or with `rad(..)`");
                }
            }
            Tok::Ident(s) if s == "pi" => {
                self.bump();
                let den = self.opt_den()?;
                Phase::pi_frac(1, den)
            }
            other => return self.error(format!("expected a phase, found {}", other.describe())),
        };
        Ok(if neg { -p } else { p })
    }

    fn opt_den(&mut self) -> Result<i64, ParseError> {
        if *self.peek() == Tok::Slash && matches!(self.peek_at(1), Tok::Int(_)) {
            self.bump();
            match self.bump() {
                Tok::Int(0) => {
                    self.pos -= 1;
                    self.error("phase denominator must be positive")
                }
                Tok::Int(d) => Ok(d),
                _ => unreachable!(),
            }
        } else {
            Ok(1)
        }
    }

    fn ty(&mut self) -> Result<Type, ParseError> {
        let mut t = self.tfact()?;
        while *self.peek() == Tok::Star {
            self.bump();
            let r = self.tfact()?;
            t = Type::tensor(t, r);
        }
        if *self.peek() == Tok::Arrow {
            self.bump();
            let r = self.ty()?;
            t = Type::fun(t, r);
        }
        Ok(t)
    }

    fn tfact(&mut self) -> Result<Type, ParseError> {
        let mut t = match self.peek().clone() {
            Tok::Int(n) if n >= 0 => {
                self.bump();
                let n = u32::try_from(n).map_err(|_| ParseError {
                    line: self.toks[self.pos - 1].line,
                    col: self.toks[self.pos - 1].col,
                    message: format!("numeral type {n} too large"),
                })?;
                Type::Numeral(n)
            }
            Tok::LParen => {
                self.bump();
                let t = self.ty()?;
                self.expect(Tok::RParen)?;
                t
            }
            other => return self.error(format!("expected a type, found {}", other.describe())),
        };
        while *self.peek() == Tok::Prime {
            self.bump();
            t = Type::dual(t);
        }
        Ok(t)
    }
}

fn parser(src: &str) -> Result<Parser, ParseError> {
    Ok(Parser { toks: lex(src)?, pos: 0 })
}

/// Parses a term, expanding all sugar.
pub fn parse(src: &str) -> Result<Term, ParseError> {
    let mut p = parser(src)?;
    let t = p.term()?;
    if *p.peek() != Tok::Eof {
        return p.error(format!("unexpected {} after term", p.peek().describe()));
    }
    Ok(t)
}

pub fn parse_type(src: &str) -> Result<Type, ParseError> {
    let mut p = parser(src)?;
    let t = p.ty()?;
    if *p.peek() != Tok::Eof {
        return p.error(format!("unexpected {} after type", p.peek().describe()));
    }
    Ok(t)
}

pub fn parse_phase(src: &str) -> Result<Phase, ParseError> {
    let mut p = parser(src)?;
    let ph = p.phase()?;
    if *p.peek() != Tok::Eof {
        return p.error(format!("unexpected {} after phase", p.peek().describe()));
    }
    Ok(ph)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sharing_term() {
        let t = parse("Z x. <x, x>").unwrap();
        let expected = Term::abs(
            Basis::Zeta,
            Phase::ZERO,
            "x",
            Term::tup(Term::var("x"), Term::var("x")),
        );
        assert_eq!(t, expected);
    }

    #[test]
    fn literals() {
        assert_eq!(parse("*").unwrap(), Term::Unit);
        assert_eq!(parse("X[2]^pi").unwrap(), Term::gen(Basis::Xi, Phase::PI, 2));
        assert_eq!(parse("X[-1]^pi").unwrap(), Term::gen(Basis::Xi, Phase::PI, -1));
        assert_eq!(parse("Z[1]").unwrap(), Term::gen(Basis::Zeta, Phase::ZERO, 1));
    }

    #[test]
    fn hadamard_sugar() {
        let h = parse("H").unwrap();
        let manual = parse("rotZ^pi/2 o rotX^pi/2 o rotZ^pi/2").unwrap();
        assert!(h.alpha_eq(&manual));
        assert!(h.alpha_eq(&Term::hadamard()));
    }

    #[test]
    fn phases() {
        assert_eq!(parse_phase("pi/2").unwrap(), Phase::HALF_PI);
        assert_eq!(parse_phase("-pi/2").unwrap(), Phase::pi_frac(3, 2));
        assert_eq!(parse_phase("3pi/4").unwrap(), Phase::pi_frac(3, 4));
        assert_eq!(parse_phase("0").unwrap(), Phase::ZERO);
        assert!(matches!(parse_phase("rad(0.25)").unwrap(), Phase::Radians(r) if (r - 0.25).abs() < 1e-15));
        assert!(parse_phase("3").is_err());
        assert!(parse_phase("pi/0").is_err());
    }

    #[test]
    fn application_and_composition_precedence() {
        let t = parse("f a b o g").unwrap();
        match t {
            Term::Abs { body, .. } => match *body {
                Term::App(l, _) => assert_eq!(*l, parse("f a b").unwrap()),
                other => panic!("unexpected {other:?}"),
            },
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn annotations_and_types() {
        let t = parse("X f : 1 -> 1*1 . <f,f>").unwrap();
        match t {
            Term::Abs { ann: Some(a), .. } => {
                assert_eq!(a, Type::fun(Type::Numeral(1), Type::tensor(Type::Numeral(1), Type::Numeral(1))))
            }
            other => panic!("unexpected {other:?}"),
        }
        assert_eq!(parse_type("1'").unwrap(), Type::dual(Type::Numeral(1)));
        assert_eq!(
            parse_type("(1 -> 1)*1").unwrap(),
            Type::tensor(Type::fun(Type::Numeral(1), Type::Numeral(1)), Type::Numeral(1))
        );
    }

    #[test]
    fn lambda_is_linear_zeta() {
        match parse("\\x. x").unwrap() {
            Term::Abs {
                basis: Basis::Zeta,
                linear: true,
                phase,
                ..
            } => assert!(phase.is_zero()),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn let_expression() {
        let t = parse("let <a, b> = X p in <b, a>").unwrap();
        assert!(matches!(t, Term::Let { basis: Basis::Xi, .. }));
    }

    #[test]
    fn errors_have_positions() {
        let e = parse("Z x.\n  <x, >").unwrap_err();
        assert_eq!((e.line, e.col), (2, 7));
        assert!(parse("let <a, a> = Z p in a").is_err());
        assert!(parse("Z in. in").is_err());
        assert!(parse("x @ y").is_err());
    }
}
