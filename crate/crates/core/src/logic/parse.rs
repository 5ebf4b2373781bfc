//! Text format for diagrams.
//!
//! ```text
//! # comment
//! var x : O
//! var f : F
//! eval(f; x) = e2
//! !E(x, e0)
//! ```
//!
//! One declaration or literal per line. Constants are written `e<id>` and
//! refer to elements of the base structure; variable names match
//! `[A-Za-z_][A-Za-z0-9_]*` and must not collide with the constant
//! pattern. Diagrams are conjunctive: there is no disjunction in this
//! grammar.

use super::{Atom, Diagram, Literal, LogicError, Term};
use crate::structure::{ElemId, Sort};

struct Cursor<'a> {
    text: &'a [u8],
    pos: usize,
    line: usize,
    col: usize,
}

impl<'a> Cursor<'a> {
    fn new(text: &'a str, line: usize) -> Self {
        Cursor {
            text: text.as_bytes(),
            pos: 0,
            line,
            col: 1,
        }
    }

    fn err(&self, msg: impl Into<String>) -> LogicError {
        LogicError::Parse {
            line: self.line,
            col: self.col,
            msg: msg.into(),
        }
    }

    fn peek(&self) -> Option<u8> {
        self.text.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let c = self.peek()?;
        self.pos += 1;
        self.col += 1;
        Some(c)
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(b' ') | Some(b'\t')) {
            self.bump();
        }
    }

    fn eat(&mut self, c: u8) -> Result<(), LogicError> {
        self.skip_ws();
        match self.peek() {
            Some(got) if got == c => {
                self.bump();
                Ok(())
            }
            got => Err(self.err(format!(
                "expected {:?}, found {:?}",
                c as char,
                got.map(|g| g as char)
            ))),
        }
    }

    fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.pos >= self.text.len()
    }

    fn ident(&mut self) -> Result<String, LogicError> {
        self.skip_ws();
        let start = self.pos;
        match self.peek() {
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                self.bump();
            }
            _ => return Err(self.err("expected identifier")),
        }
        while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == b'_') {
            self.bump();
        }
        Ok(std::str::from_utf8(&self.text[start..self.pos])
            .unwrap()
            .to_string())
    }

    fn term(&mut self) -> Result<Term, LogicError> {
        let name = self.ident()?;
        if name == "eval" {
            self.eat(b'(')?;
            let mut fs = vec![self.term()?];
            loop {
                self.skip_ws();
                match self.peek() {
                    Some(b',') => {
                        self.bump();
                        fs.push(self.term()?);
                    }
                    Some(b';') => {
                        self.bump();
                        break;
                    }
                    got => {
                        return Err(self.err(format!(
                            "expected ',' or ';' in eval, found {:?}",
                            got.map(|g| g as char)
                        )))
                    }
                }
            }
            let o = self.term()?;
            self.eat(b')')?;
            return Ok(Term::eval(fs, o));
        }
        Ok(name_to_term(&name))
    }
}

fn name_to_term(name: &str) -> Term {
    if let Some(rest) = name.strip_prefix('e') {
        if !rest.is_empty() && rest.bytes().all(|c| c.is_ascii_digit()) {
            if let Ok(id) = rest.parse::<u32>() {
                return Term::Const(ElemId(id));
            }
        }
    }
    Term::var(name)
}

fn is_const_name(name: &str) -> bool {
    matches!(name_to_term(name), Term::Const(_))
}

/// Parses the diagram text format. Literals are normalized into the
/// diagram's canonical (sorted, deduplicated) order.
pub fn parse_diagram(text: &str) -> Result<Diagram, LogicError> {
    let mut diagram = Diagram::new([], []);
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = match raw.split_once('#') {
            Some((before, _)) => before,
            None => raw,
        };
        if line.trim().is_empty() {
            continue;
        }
        let trimmed = line.trim_start();
        if line.contains('|') {
            return Err(LogicError::Parse {
                line: lineno,
                col: line.find('|').unwrap() + 1,
                msg: "diagrams are conjunctive; no disjunction".to_string(),
            });
        }
        if let Some(rest) = trimmed.strip_prefix("var ") {
            let mut cur = Cursor::new(rest, lineno);
            let name = cur.ident()?;
            if is_const_name(&name) {
                return Err(cur.err(format!("variable name {name:?} matches the constant pattern")));
            }
            cur.eat(b':')?;
            let sort = match cur.ident()?.as_str() {
                "O" => Sort::O,
                "F" => Sort::F,
                other => return Err(cur.err(format!("unknown sort {other:?}"))),
            };
            if !cur.at_end() {
                return Err(cur.err("trailing input after declaration"));
            }
            diagram.declare(name, sort);
            continue;
        }
        let mut cur = Cursor::new(line, lineno);
        cur.skip_ws();
        let pos = if cur.peek() == Some(b'!') {
            cur.bump();
            false
        } else {
            true
        };
        cur.skip_ws();
        // Lookahead: `E(` starts a class atom, anything else is a term
        // equality.
        let atom = if cur.peek() == Some(b'E')
            && cur.text.get(cur.pos + 1) == Some(&b'(')
        {
            cur.bump();
            cur.bump();
            let a = cur.term()?;
            cur.eat(b',')?;
            let b = cur.term()?;
            cur.eat(b')')?;
            Atom::E(a, b)
        } else {
            let a = cur.term()?;
            cur.eat(b'=')?;
            let b = cur.term()?;
            Atom::Eq(a, b)
        };
        if !cur.at_end() {
            return Err(cur.err("trailing input after literal"));
        }
        diagram.push(Literal { pos, atom });
    }
    Ok(diagram)
}

/// Canonical text form; the inverse of [`parse_diagram`] on its image.
pub fn print_diagram(d: &Diagram) -> String {
    let mut out = String::new();
    for (name, sort) in d.vars() {
        out.push_str(&format!("var {name} : {sort}\n"));
    }
    for l in d.literals() {
        let neg = if l.pos { "" } else { "!" };
        match &l.atom {
            Atom::Eq(a, b) => out.push_str(&format!("{neg}{a} = {b}\n")),
            Atom::E(a, b) => out.push_str(&format!("{neg}E({a}, {b})\n")),
            Atom::SortIs(..) => {
                // Sort atoms have no surface syntax; they only arise
                // programmatically.
                unreachable!("sort atoms are not printable")
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::Rng;

    #[test]
    fn parse_simple_diagram() {
        let d = parse_diagram("var x : F\nvar b : O\neval(x; b) = b\n").unwrap();
        assert_eq!(d.vars().len(), 2);
        assert_eq!(d.literals().len(), 1);
        assert_eq!(
            d.literals()[0],
            Literal::eq(
                Term::eval(vec![Term::var("x")], Term::var("b")),
                Term::var("b")
            )
        );
    }

    #[test]
    fn parse_rejects_disjunction() {
        let e = parse_diagram("var x : F\nE(y,b) | eval(x;b)=b\n").unwrap_err();
        match e {
            LogicError::Parse { line, msg, .. } => {
                assert_eq!(line, 2);
                assert!(msg.contains("conjunctive"));
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn parse_reports_position() {
        let e = parse_diagram("eval(x; = b\n").unwrap_err();
        match e {
            LogicError::Parse { line, .. } => assert_eq!(line, 1),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn constants_need_the_e_prefix() {
        let d = parse_diagram("var x : O\nx = e12\n").unwrap();
        assert_eq!(
            d.literals()[0],
            Literal::eq(Term::var("x"), Term::Const(ElemId(12)))
        );
        // `e12x` is a variable, not a constant.
        let d = parse_diagram("var e12x : O\ne12x = e0\n").unwrap();
        assert_eq!(
            d.literals()[0],
            Literal::eq(Term::var("e12x"), Term::Const(ElemId(0)))
        );
        // Declaring a variable that looks like a constant is rejected.
        assert!(parse_diagram("var e3 : O\n").is_err());
    }

    fn random_diagram(rng: &mut Rng) -> Diagram {
        let n = 1 + rng.below(2);
        let mut d = Diagram::new([], []);
        d.declare("x", Sort::F);
        d.declare("y", Sort::F);
        d.declare("u", Sort::O);
        d.declare("v", Sort::O);
        let fvar = |rng: &mut Rng| {
            if rng.chance(1, 2) {
                Term::var("x")
            } else {
                Term::var("y")
            }
        };
        let ovar = |rng: &mut Rng| match rng.below(3) {
            0 => Term::var("u"),
            1 => Term::var("v"),
            _ => Term::Const(ElemId(rng.below(9) as u32)),
        };
        let oterm = |rng: &mut Rng| {
            if rng.chance(1, 2) {
                let fs = (0..n).map(|_| fvar(rng)).collect();
                Term::eval(fs, ovar(rng))
            } else {
                ovar(rng)
            }
        };
        for _ in 0..1 + rng.below(4) {
            let pos = rng.chance(2, 3);
            let atom = if rng.chance(1, 2) {
                Atom::Eq(oterm(rng), oterm(rng))
            } else {
                Atom::E(oterm(rng), oterm(rng))
            };
            d.push(Literal { pos, atom });
        }
        d
    }

    #[test]
    fn print_parse_round_trip() {
        let mut rng = Rng::new(5150);
        for _ in 0..1000 {
            let d = random_diagram(&mut rng);
            let text = print_diagram(&d);
            let back = parse_diagram(&text).unwrap();
            assert_eq!(back, d, "text:\n{text}");
            assert_eq!(print_diagram(&back), text);
        }
    }
}
