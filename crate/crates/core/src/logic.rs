//! Quantifier-free syntax over a structure: terms, literals, conjunctive
//! diagrams, normalization, evaluation, and a text format.
//!
//! Terms are variables, constants naming base elements, or `eval`
//! applications. Normalization removes nested `eval` from the object
//! position and strips `eval` out of class atoms, justified by the
//! equations `eval(fs, eval(gs, z)) = eval(fs, z)` and
//! `E(x, eval(gs, z)) <-> E(x, z)` which hold in every model.
//!
//! Diagrams are conjunctions of literals; disjunction lives a layer up,
//! where a disjunctive condition is a set of diagram templates whose
//! instances are distributed before querying the oracle.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::structure::{ElemId, FinStructure, Sort, SortedTuple};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LogicError {
    #[error("variable {0} is not declared")]
    UndeclaredVar(String),
    #[error("variable {0} has no assignment")]
    UnassignedVar(String),
    #[error("constant {0} does not resolve in the base structure")]
    UnknownConst(ElemId),
    #[error("term is ill-sorted: expected {expected}, got {got}")]
    IllSorted { expected: Sort, got: Sort },
    #[error("eval has {0} function arguments, ambient arity is {1}")]
    BadEvalArity(usize, usize),
    #[error("class atom between non-object terms")]
    ClassAtomSort,
    #[error("template expects {0} parameters, got {1}")]
    BadParamCount(usize, usize),
    #[error("line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Var(String),
    Const(ElemId),
    /// `eval(f1, ..., fn; o)`.
    Eval(Vec<Term>, Box<Term>),
}

impl Term {
    pub fn var(name: impl Into<String>) -> Term {
        Term::Var(name.into())
    }

    pub fn eval(fs: Vec<Term>, o: Term) -> Term {
        Term::Eval(fs, Box::new(o))
    }

    /// Sort of the term under a variable declaration context.
    pub fn sort(
        &self,
        vars: &BTreeMap<String, Sort>,
        base: &FinStructure,
    ) -> Result<Sort, LogicError> {
        match self {
            Term::Var(v) => vars
                .get(v)
                .copied()
                .ok_or_else(|| LogicError::UndeclaredVar(v.clone())),
            Term::Const(id) => base
                .sort_of(*id)
                .ok_or(LogicError::UnknownConst(*id)),
            Term::Eval(fs, o) => {
                if fs.len() != base.n() {
                    return Err(LogicError::BadEvalArity(fs.len(), base.n()));
                }
                for f in fs {
                    let s = f.sort(vars, base)?;
                    if s != Sort::F {
                        return Err(LogicError::IllSorted {
                            expected: Sort::F,
                            got: s,
                        });
                    }
                }
                let s = o.sort(vars, base)?;
                if s != Sort::O {
                    return Err(LogicError::IllSorted {
                        expected: Sort::O,
                        got: s,
                    });
                }
                Ok(Sort::O)
            }
        }
    }

    /// The innermost object term under `eval` wrappers.
    fn object_core(&self) -> &Term {
        match self {
            Term::Eval(_, o) => o.object_core(),
            t => t,
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "{v}"),
            Term::Const(id) => write!(f, "e{id}"),
            Term::Eval(fs, o) => {
                write!(f, "eval(")?;
                for (i, t) in fs.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{t}")?;
                }
                write!(f, ";{o})")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Atom {
    Eq(Term, Term),
    E(Term, Term),
    SortIs(Term, Sort),
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    pub pos: bool,
    pub atom: Atom,
}

impl Literal {
    pub fn eq(a: Term, b: Term) -> Literal {
        Literal {
            pos: true,
            atom: Atom::Eq(a, b),
        }
    }

    pub fn neq(a: Term, b: Term) -> Literal {
        Literal {
            pos: false,
            atom: Atom::Eq(a, b),
        }
    }

    pub fn e(a: Term, b: Term) -> Literal {
        Literal {
            pos: true,
            atom: Atom::E(a, b),
        }
    }

    pub fn not_e(a: Term, b: Term) -> Literal {
        Literal {
            pos: false,
            atom: Atom::E(a, b),
        }
    }

    pub fn negated(&self) -> Literal {
        Literal {
            pos: !self.pos,
            atom: self.atom.clone(),
        }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.pos {
            write!(f, "!")?;
        }
        match &self.atom {
            Atom::Eq(a, b) => write!(f, "{a} = {b}"),
            Atom::E(a, b) => write!(f, "E({a}, {b})"),
            Atom::SortIs(t, s) => write!(f, "sort({t}) = {s}"),
        }
    }
}

/// Rewrites `eval(fs, eval(gs, z))` to `eval(fs, z)`, recursively. The
/// result has no `eval` nested in the object position and the rewrite is
/// idempotent.
pub fn normalize_term(t: &Term) -> Term {
    match t {
        Term::Var(_) | Term::Const(_) => t.clone(),
        Term::Eval(fs, o) => Term::Eval(
            fs.clone(),
            Box::new(o.object_core().clone()),
        ),
    }
}

/// Normalizes both sides of an equality and strips `eval` wrappers out of
/// class atoms entirely.
pub fn normalize_literal(l: &Literal) -> Literal {
    let atom = match &l.atom {
        Atom::Eq(a, b) => Atom::Eq(normalize_term(a), normalize_term(b)),
        Atom::E(a, b) => Atom::E(a.object_core().clone(), b.object_core().clone()),
        Atom::SortIs(t, s) => Atom::SortIs(normalize_term(t), *s),
    };
    Literal { pos: l.pos, atom }
}

/// A conjunction of literals with declared variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagram {
    /// Declaration order matters for deterministic search.
    vars: Vec<(String, Sort)>,
    /// Stored sorted and deduplicated.
    lits: Vec<Literal>,
}

impl Diagram {
    pub fn new(
        vars: impl IntoIterator<Item = (String, Sort)>,
        lits: impl IntoIterator<Item = Literal>,
    ) -> Diagram {
        let mut out = Diagram {
            vars: Vec::new(),
            lits: Vec::new(),
        };
        for (name, sort) in vars {
            out.declare(name, sort);
        }
        for l in lits {
            out.push(l);
        }
        out
    }

    pub fn declare(&mut self, name: impl Into<String>, sort: Sort) {
        let name = name.into();
        if !self.vars.iter().any(|(n, _)| *n == name) {
            self.vars.push((name, sort));
        }
    }

    pub fn push(&mut self, lit: Literal) {
        match self.lits.binary_search(&lit) {
            Ok(_) => {}
            Err(pos) => self.lits.insert(pos, lit),
        }
    }

    pub fn vars(&self) -> &[(String, Sort)] {
        &self.vars
    }

    pub fn var_sorts(&self) -> BTreeMap<String, Sort> {
        self.vars.iter().cloned().collect()
    }

    pub fn literals(&self) -> &[Literal] {
        &self.lits
    }

    pub fn is_empty(&self) -> bool {
        self.lits.is_empty()
    }

    /// Sort-checks every literal against a base structure and verifies
    /// that constants resolve.
    pub fn check(&self, base: &FinStructure) -> Result<(), LogicError> {
        let ctx = self.var_sorts();
        for l in &self.lits {
            match &l.atom {
                Atom::Eq(a, b) => {
                    let sa = a.sort(&ctx, base)?;
                    let sb = b.sort(&ctx, base)?;
                    if sa != sb {
                        return Err(LogicError::IllSorted {
                            expected: sa,
                            got: sb,
                        });
                    }
                }
                Atom::E(a, b) => {
                    for t in [a, b] {
                        if t.sort(&ctx, base)? != Sort::O {
                            return Err(LogicError::ClassAtomSort);
                        }
                    }
                }
                Atom::SortIs(t, _) => {
                    t.sort(&ctx, base)?;
                }
            }
        }
        Ok(())
    }

    /// The normalized diagram.
    pub fn normalized(&self) -> Diagram {
        Diagram::new(
            self.vars.iter().cloned(),
            self.lits.iter().map(normalize_literal),
        )
    }

    /// Union of two diagrams: declarations merge, literals conjoin.
    pub fn conjoin(&self, other: &Diagram) -> Diagram {
        let mut out = self.clone();
        for (n, s) in &other.vars {
            out.declare(n.clone(), *s);
        }
        for l in &other.lits {
            out.push(l.clone());
        }
        out
    }

    pub fn merge_in(&mut self, lits: impl IntoIterator<Item = Literal>) {
        for l in lits {
            self.push(l);
        }
    }
}

/// Evaluates a term in a structure under an assignment.
pub fn eval_term(
    s: &FinStructure,
    asg: &BTreeMap<String, ElemId>,
    t: &Term,
) -> Result<ElemId, LogicError> {
    match t {
        Term::Var(v) => asg
            .get(v)
            .copied()
            .ok_or_else(|| LogicError::UnassignedVar(v.clone())),
        Term::Const(id) => {
            if s.contains(*id) {
                Ok(*id)
            } else {
                Err(LogicError::UnknownConst(*id))
            }
        }
        Term::Eval(fs, o) => {
            let tuple: Vec<ElemId> = fs
                .iter()
                .map(|f| eval_term(s, asg, f))
                .collect::<Result<_, _>>()?;
            let ov = eval_term(s, asg, o)?;
            s.eval_get(&tuple, ov)
                .ok_or(LogicError::UnknownConst(ov))
        }
    }
}

/// Truth of a literal in `s` under `asg`.
pub fn holds(
    s: &FinStructure,
    asg: &BTreeMap<String, ElemId>,
    l: &Literal,
) -> Result<bool, LogicError> {
    let truth = match &l.atom {
        Atom::Eq(a, b) => eval_term(s, asg, a)? == eval_term(s, asg, b)?,
        Atom::E(a, b) => {
            let va = eval_term(s, asg, a)?;
            let vb = eval_term(s, asg, b)?;
            s.e_rel(va, vb)
        }
        Atom::SortIs(t, sort) => {
            let v = eval_term(s, asg, t)?;
            s.sort_of(v) == Some(*sort)
        }
    };
    Ok(if l.pos { truth } else { !truth })
}

/// Truth of a whole diagram.
pub fn diagram_holds(
    s: &FinStructure,
    asg: &BTreeMap<String, ElemId>,
    d: &Diagram,
) -> Result<bool, LogicError> {
    for l in d.literals() {
        if !holds(s, asg, l)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A diagram with parameter slots, instantiated per parameter tuple.
///
/// Solution variables are shared across instantiations; parameter slots
/// are substituted by the elements of the argument tuple.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Template {
    vars: Vec<(String, Sort)>,
    params: Vec<(String, Sort)>,
    lits: Vec<Literal>,
}

impl Template {
    pub fn new(
        vars: impl IntoIterator<Item = (String, Sort)>,
        params: impl IntoIterator<Item = (String, Sort)>,
        lits: impl IntoIterator<Item = Literal>,
    ) -> Template {
        Template {
            vars: vars.into_iter().collect(),
            params: params.into_iter().collect(),
            lits: lits.into_iter().collect(),
        }
    }

    pub fn vars(&self) -> &[(String, Sort)] {
        &self.vars
    }

    pub fn params(&self) -> &[(String, Sort)] {
        &self.params
    }

    /// Substitutes the parameter tuple, producing the literal instances.
    pub fn instantiate(&self, args: &SortedTuple) -> Result<Vec<Literal>, LogicError> {
        if args.len() != self.params.len() {
            return Err(LogicError::BadParamCount(self.params.len(), args.len()));
        }
        let sub: BTreeMap<&str, ElemId> = self
            .params
            .iter()
            .map(|(n, _)| n.as_str())
            .zip(args.ids().iter().copied())
            .collect();
        Ok(self
            .lits
            .iter()
            .map(|l| Literal {
                pos: l.pos,
                atom: match &l.atom {
                    Atom::Eq(a, b) => Atom::Eq(substitute(a, &sub), substitute(b, &sub)),
                    Atom::E(a, b) => Atom::E(substitute(a, &sub), substitute(b, &sub)),
                    Atom::SortIs(t, s) => Atom::SortIs(substitute(t, &sub), *s),
                },
            })
            .collect())
    }

    /// Instantiates into a fresh diagram containing only the solution
    /// variables.
    pub fn instantiate_diagram(&self, args: &SortedTuple) -> Result<Diagram, LogicError> {
        Ok(Diagram::new(
            self.vars.iter().cloned(),
            self.instantiate(args)?,
        ))
    }
}

fn substitute(t: &Term, sub: &BTreeMap<&str, ElemId>) -> Term {
    match t {
        Term::Var(v) => match sub.get(v.as_str()) {
            Some(&id) => Term::Const(id),
            None => t.clone(),
        },
        Term::Const(_) => t.clone(),
        Term::Eval(fs, o) => Term::Eval(
            fs.iter().map(|f| substitute(f, sub)).collect(),
            Box::new(substitute(o, sub)),
        ),
    }
}

mod parse;
pub use parse::{parse_diagram, print_diagram};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structure::random_structure;
    use crate::rng::Rng;

    fn ctx1() -> (FinStructure, BTreeMap<String, Sort>) {
        let s = random_structure(1, 3, 2, 2, 4).unwrap();
        let mut vars = BTreeMap::new();
        vars.insert("x".to_string(), Sort::F);
        vars.insert("y".to_string(), Sort::F);
        vars.insert("z".to_string(), Sort::O);
        (s, vars)
    }

    #[test]
    fn normalize_collapses_nested_eval() {
        let t = Term::eval(
            vec![Term::var("x")],
            Term::eval(vec![Term::var("y")], Term::var("z")),
        );
        let expect = Term::eval(vec![Term::var("x")], Term::var("z"));
        assert_eq!(normalize_term(&t), expect);
        // Already-normal terms are fixed.
        assert_eq!(normalize_term(&Term::var("z")), Term::var("z"));
        // Two nesting levels collapse in one pass, and the pass is
        // idempotent.
        let deep = Term::eval(
            vec![Term::var("x")],
            Term::eval(
                vec![Term::var("y")],
                Term::eval(vec![Term::var("w")], Term::var("z")),
            ),
        );
        let norm = normalize_term(&deep);
        assert_eq!(norm, expect);
        assert_eq!(normalize_term(&norm), norm);
    }

    #[test]
    fn normalize_literal_strips_class_atoms() {
        let l = Literal::e(
            Term::var("u"),
            Term::eval(vec![Term::var("y")], Term::var("z")),
        );
        assert_eq!(
            normalize_literal(&l),
            Literal::e(Term::var("u"), Term::var("z"))
        );
        let both = Literal::e(
            Term::eval(vec![Term::var("x")], Term::var("u")),
            Term::eval(vec![Term::var("y")], Term::var("z")),
        );
        assert_eq!(
            normalize_literal(&both),
            Literal::e(Term::var("u"), Term::var("z"))
        );
        // Constants stay put.
        let l = Literal::not_e(Term::Const(ElemId(0)), Term::Const(ElemId(1)));
        assert_eq!(normalize_literal(&l), l);
    }

    #[test]
    fn holds_basics() {
        let (s, _) = ctx1();
        let asg: BTreeMap<String, ElemId> = [("z".to_string(), ElemId(0))].into();
        let refl = Literal::eq(Term::var("z"), Term::var("z"));
        assert!(holds(&s, &asg, &refl).unwrap());
        let mut b_in_class = None;
        for x in s.o_elems() {
            if x != ElemId(0) && s.e_rel(x, ElemId(0)) {
                b_in_class = Some(x);
            }
        }
        if let Some(b) = b_in_class {
            let l = Literal::e(Term::Const(ElemId(0)), Term::Const(b));
            assert!(holds(&s, &asg, &l).unwrap());
        }
        let missing = Literal::eq(Term::var("nope"), Term::var("z"));
        assert!(holds(&s, &asg, &missing).is_err());
    }

    fn random_term(rng: &mut Rng, s: &FinStructure, depth: usize, sort: Sort) -> Term {
        let os: Vec<ElemId> = s.o_elems().collect();
        let fs: Vec<ElemId> = s.f_elems().collect();
        match sort {
            Sort::F => {
                if rng.chance(1, 2) {
                    Term::var(["x", "y"][rng.below(2)])
                } else {
                    Term::Const(*rng.choose(&fs))
                }
            }
            Sort::O => {
                if depth > 0 && rng.chance(1, 2) {
                    let fterms = (0..s.n())
                        .map(|_| random_term(rng, s, 0, Sort::F))
                        .collect();
                    Term::eval(fterms, random_term(rng, s, depth - 1, Sort::O))
                } else if rng.chance(1, 2) {
                    Term::var("z")
                } else {
                    Term::Const(*rng.choose(&os))
                }
            }
        }
    }

    #[test]
    fn normalization_preserves_semantics() {
        // holds agrees with holds-after-normalization on random literals,
        // structures, and assignments.
        let mut rng = Rng::new(1234);
        for _ in 0..10_000 {
            let s = random_structure(1, 1 + rng.below(3), 1 + rng.below(2), 1, rng.next_u64())
                .unwrap();
            let os: Vec<ElemId> = s.o_elems().collect();
            let fs: Vec<ElemId> = s.f_elems().collect();
            let asg: BTreeMap<String, ElemId> = [
                ("x".to_string(), *rng.choose(&fs)),
                ("y".to_string(), *rng.choose(&fs)),
                ("z".to_string(), *rng.choose(&os)),
            ]
            .into();
            let a = random_term(&mut rng, &s, 3, Sort::O);
            let b = random_term(&mut rng, &s, 2, Sort::O);
            let lit = Literal {
                pos: rng.chance(1, 2),
                atom: if rng.chance(1, 2) {
                    Atom::Eq(a, b)
                } else {
                    Atom::E(a, b)
                },
            };
            let direct = holds(&s, &asg, &lit).unwrap();
            let normed = holds(&s, &asg, &normalize_literal(&lit)).unwrap();
            assert_eq!(direct, normed, "literal {lit}");
        }
    }

    #[test]
    fn template_instantiation() {
        let t = Template::new(
            [("x".to_string(), Sort::F)],
            [("p".to_string(), Sort::O)],
            [Literal::eq(
                Term::eval(vec![Term::var("x")], Term::var("p")),
                Term::var("p"),
            )],
        );
        let args = SortedTuple::new([ElemId(7)]);
        let lits = t.instantiate(&args).unwrap();
        assert_eq!(
            lits,
            vec![Literal::eq(
                Term::eval(vec![Term::var("x")], Term::Const(ElemId(7))),
                Term::Const(ElemId(7)),
            )]
        );
        let wrong = SortedTuple::new([ElemId(1), ElemId(2)]);
        assert!(t.instantiate(&wrong).is_err());
    }
}
