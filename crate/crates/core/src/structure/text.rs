//! Line-based text format for structures.
//!
//! ```text
//! # comment
//! tn 1
//! O: 0 1 2
//! F: 3
//! E: 0~1
//! eval: 3 | 0 -> 1
//! ```
//!
//! `E:` lines list generating pairs, one per line. `eval:` lines give
//! entries `f1 ... fn | o -> o'`; omitted entries default classwise to an
//! entry given on any class member, else to the class representative. The
//! loader totalizes the table; it does not check the selector axioms, so
//! callers can load a broken table and watch `validate` fail.

use std::fmt::Write as _;

use thiserror::Error;

use super::{ElemId, FinStructure, Sort, StructureBuilder};

#[derive(Debug, Error, PartialEq, Eq)]
#[error("line {line}: {msg}")]
pub struct ParseTnError {
    pub line: usize,
    pub msg: String,
}

fn err(line: usize, msg: impl Into<String>) -> ParseTnError {
    ParseTnError {
        line,
        msg: msg.into(),
    }
}

fn parse_id(tok: &str, line: usize) -> Result<ElemId, ParseTnError> {
    tok.parse::<u32>()
        .map(ElemId)
        .map_err(|_| err(line, format!("bad element id {tok:?}")))
}

impl FinStructure {
    /// Parses the line-based text format.
    pub fn parse_tn(text: &str) -> Result<FinStructure, ParseTnError> {
        let mut n: Option<usize> = None;
        let mut pending_e: Vec<(usize, ElemId, ElemId)> = Vec::new();
        let mut pending_eval: Vec<(usize, Vec<ElemId>, ElemId, ElemId)> = Vec::new();
        let mut o_ids: Vec<ElemId> = Vec::new();
        let mut f_ids: Vec<ElemId> = Vec::new();

        for (idx, raw) in text.lines().enumerate() {
            let lineno = idx + 1;
            let line = match raw.split_once('#') {
                Some((before, _)) => before.trim(),
                None => raw.trim(),
            };
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix("tn") {
                if n.is_some() {
                    return Err(err(lineno, "duplicate tn header"));
                }
                let v: usize = rest
                    .trim()
                    .parse()
                    .map_err(|_| err(lineno, "bad arity in tn header"))?;
                if v == 0 {
                    return Err(err(lineno, "arity must be at least 1"));
                }
                n = Some(v);
                continue;
            }
            if n.is_none() {
                return Err(err(lineno, "expected `tn <n>` header first"));
            }
            if let Some(rest) = line.strip_prefix("O:") {
                for tok in rest.split_whitespace() {
                    o_ids.push(parse_id(tok, lineno)?);
                }
            } else if let Some(rest) = line.strip_prefix("F:") {
                for tok in rest.split_whitespace() {
                    f_ids.push(parse_id(tok, lineno)?);
                }
            } else if let Some(rest) = line.strip_prefix("E:") {
                let (a, b) = rest
                    .trim()
                    .split_once('~')
                    .ok_or_else(|| err(lineno, "expected `E: id~id`"))?;
                pending_e.push((
                    lineno,
                    parse_id(a.trim(), lineno)?,
                    parse_id(b.trim(), lineno)?,
                ));
            } else if let Some(rest) = line.strip_prefix("eval:") {
                let (lhs, rhs) = rest
                    .split_once("->")
                    .ok_or_else(|| err(lineno, "expected `eval: fs | o -> o'`"))?;
                let (fs_part, o_part) = lhs
                    .split_once('|')
                    .ok_or_else(|| err(lineno, "expected `|` between tuple and argument"))?;
                let tuple: Vec<ElemId> = fs_part
                    .split_whitespace()
                    .map(|t| parse_id(t, lineno))
                    .collect::<Result<_, _>>()?;
                let o = parse_id(o_part.trim(), lineno)?;
                let v = parse_id(rhs.trim(), lineno)?;
                pending_eval.push((lineno, tuple, o, v));
            } else {
                return Err(err(lineno, format!("unrecognized line {line:?}")));
            }
        }

        let n = n.ok_or_else(|| err(text.lines().count().max(1), "missing tn header"))?;
        let mut b = StructureBuilder::new(n);
        for &o in &o_ids {
            b.add(o, Sort::O)
                .map_err(|e| err(0, e.to_string()))?;
        }
        for &f in &f_ids {
            b.add(f, Sort::F)
                .map_err(|e| err(0, e.to_string()))?;
        }
        for (lineno, x, y) in pending_e {
            b.relate(x, y).map_err(|e| err(lineno, e.to_string()))?;
        }
        for (lineno, tuple, o, v) in pending_eval {
            b.set_eval(tuple, o, v)
                .map_err(|e| err(lineno, e.to_string()))?;
        }
        b.build_totalized().map_err(|e| err(0, e.to_string()))
    }

    /// Canonical text form. Only non-default eval entries are emitted
    /// (classwise, at the representative), so for valid structures
    /// `parse_tn(to_tn(s)) == s`.
    pub fn to_tn(&self) -> String {
        let mut out = String::new();
        writeln!(out, "tn {}", self.n()).unwrap();
        let os: Vec<String> = self.o_elems().map(|e| e.to_string()).collect();
        let fs: Vec<String> = self.f_elems().map(|e| e.to_string()).collect();
        writeln!(out, "O:{}{}", if os.is_empty() { "" } else { " " }, os.join(" ")).unwrap();
        writeln!(out, "F:{}{}", if fs.is_empty() { "" } else { " " }, fs.join(" ")).unwrap();
        for (rep, members) in self.classes() {
            for &m in &members {
                if m != rep {
                    writeln!(out, "E: {rep}~{m}").unwrap();
                }
            }
        }
        for t in self.f_tuples() {
            for (rep, _) in self.classes() {
                if let Some(v) = self.eval_get(&t, rep) {
                    if v != rep {
                        let ts: Vec<String> = t.iter().map(|e| e.to_string()).collect();
                        writeln!(out, "eval: {} | {rep} -> {v}", ts.join(" ")).unwrap();
                    }
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::super::random_structure;
    use super::*;

    #[test]
    fn parse_basic() {
        let text = "# a structure\ntn 1\nO: 0 1 2\nF: 3\nE: 0~1\neval: 3 | 0 -> 1\n";
        let s = FinStructure::parse_tn(text).unwrap();
        assert_eq!(s.n(), 1);
        assert!(s.e_rel(ElemId(0), ElemId(1)));
        assert!(!s.e_rel(ElemId(0), ElemId(2)));
        // Given entry propagates over the class; absent entries default to
        // the representative.
        assert_eq!(s.eval_get(&[ElemId(3)], ElemId(0)), Some(ElemId(1)));
        assert_eq!(s.eval_get(&[ElemId(3)], ElemId(1)), Some(ElemId(1)));
        assert_eq!(s.eval_get(&[ElemId(3)], ElemId(2)), Some(ElemId(2)));
        assert!(s.validate().pass());
    }

    #[test]
    fn parse_reports_line_numbers() {
        let text = "tn 1\nO: 0\nnonsense here\n";
        let e = FinStructure::parse_tn(text).unwrap_err();
        assert_eq!(e.line, 3);
        let text = "tn 1\nO: x\n";
        let e = FinStructure::parse_tn(text).unwrap_err();
        assert_eq!(e.line, 2);
    }

    #[test]
    fn round_trip_random() {
        for seed in 0..50u64 {
            let s = random_structure(1 + (seed % 2) as usize, 4, 2, 2, seed).unwrap();
            let text = s.to_tn();
            let back = FinStructure::parse_tn(&text).unwrap();
            assert_eq!(back, s, "seed {seed}");
            assert_eq!(back.to_tn(), text);
        }
    }
}
