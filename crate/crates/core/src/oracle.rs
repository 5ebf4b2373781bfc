//! Bounded-search satisfiability of quantifier-free diagrams over a base
//! structure.
//!
//! A diagram is satisfiable over `base` exactly when some finite extension
//! of `base` realizes it. Quantifier elimination makes that absolute: the
//! witnessing extension embeds into the generic model over the base, and
//! conversely any realization generates a finite substructure within the
//! uniform bound. The search therefore branches over
//!
//! 1. each variable mapping to an existing element, an earlier fresh
//!    element, or a new fresh element of its sort;
//! 2. the class placement of each fresh object element: an existing class
//!    or a new one;
//! 3. the value of each eval entry mentioned by the diagram that the base
//!    does not already determine: an existing class member or a new
//!    element of the class.
//!
//! Everything else in the extension's eval table is completed canonically
//! (base values on base entries, class anchors elsewhere), which cannot
//! affect any literal: normalized literals only constrain the branched
//! entries. The first witness in this canonical branch order is returned,
//! so answers are deterministic.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::logic::{
    holds, Atom, Diagram, Literal, LogicError, Template, Term,
};
use crate::structure::{
    ElemId, FinStructure, Sort, SortedTuple, StructureBuilder, StructureError,
};

#[derive(Debug, Error)]
pub enum OracleError {
    #[error(transparent)]
    Logic(#[from] LogicError),
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error("k must satisfy 2 <= k <= |params|, got k = {k} with {params} parameters")]
    BadK { k: usize, params: usize },
    #[error("parameter tuple {0} does not match the template arity")]
    BadParams(String),
}

/// A satisfiability query: a diagram over a base structure.
#[derive(Debug, Clone)]
pub struct OracleQuery {
    base: FinStructure,
    diagram: Diagram,
}

impl OracleQuery {
    /// Normalizes the diagram and checks sorts and constants against the
    /// base.
    pub fn new(base: &FinStructure, diagram: &Diagram) -> Result<Self, OracleError> {
        let normalized = diagram.normalized();
        normalized.check(base)?;
        Ok(OracleQuery {
            base: base.clone(),
            diagram: normalized,
        })
    }

    pub fn base(&self) -> &FinStructure {
        &self.base
    }

    pub fn diagram(&self) -> &Diagram {
        &self.diagram
    }

    pub fn satisfiable(&self) -> SatResult {
        Searcher::new(&self.base, &self.diagram).run()
    }
}

/// A satisfying extension together with the variable assignment.
#[derive(Debug, Clone)]
pub struct Witness {
    pub extension: FinStructure,
    pub assignment: BTreeMap<String, ElemId>,
}

#[derive(Debug, Clone)]
pub enum SatResult {
    Sat(Witness),
    Unsat,
}

impl SatResult {
    pub fn is_sat(&self) -> bool {
        matches!(self, SatResult::Sat(_))
    }

    pub fn witness(&self) -> Option<&Witness> {
        match self {
            SatResult::Sat(w) => Some(w),
            SatResult::Unsat => None,
        }
    }
}

/// Decides satisfiability of `diagram` over `base`.
pub fn satisfiable(base: &FinStructure, diagram: &Diagram) -> Result<SatResult, OracleError> {
    Ok(OracleQuery::new(base, diagram)?.satisfiable())
}

struct Searcher<'a> {
    base: &'a FinStructure,
    vars: Vec<(String, Sort)>,
    lits: Vec<Literal>,
    /// Distinct eval occurrences in the normalized literals.
    eval_terms: Vec<(Vec<Term>, Term)>,
}

#[derive(Clone)]
struct State {
    asg: BTreeMap<String, ElemId>,
    /// Fresh elements created for variables, in creation order.
    fresh: Vec<(ElemId, Sort)>,
    /// Every object element (base, fresh, image) mapped to its class
    /// anchor: the base representative or the founding fresh element.
    anchor: BTreeMap<ElemId, ElemId>,
    /// Anchor -> ascending members.
    members: BTreeMap<ElemId, Vec<ElemId>>,
    /// Fresh elements created as eval images.
    images: Vec<ElemId>,
    /// (tuple, anchor) -> chosen value, for branched entries.
    choices: BTreeMap<(Vec<ElemId>, ElemId), ElemId>,
    next_id: u32,
}

impl State {
    fn place(&mut self, id: ElemId, anchor: ElemId) {
        self.anchor.insert(id, anchor);
        let members = self.members.entry(anchor).or_default();
        let pos = members.binary_search(&id).unwrap_err();
        members.insert(pos, id);
    }
}

impl<'a> Searcher<'a> {
    fn new(base: &'a FinStructure, diagram: &Diagram) -> Self {
        let lits: Vec<Literal> = diagram.literals().to_vec();
        let mut eval_terms: Vec<(Vec<Term>, Term)> = Vec::new();
        let mut visit = |t: &Term| {
            if let Term::Eval(fs, o) = t {
                let key = (fs.clone(), (**o).clone());
                if !eval_terms.contains(&key) {
                    eval_terms.push(key);
                }
            }
        };
        for l in &lits {
            match &l.atom {
                Atom::Eq(a, b) => {
                    visit(a);
                    visit(b);
                }
                // Normalization strips eval from class atoms and sort
                // atoms' truth only needs the core's sort.
                Atom::E(..) | Atom::SortIs(..) => {}
            }
        }
        eval_terms.sort();
        Searcher {
            base,
            vars: diagram.vars().to_vec(),
            lits,
            eval_terms,
        }
    }

    fn run(&self) -> SatResult {
        let mut state = State {
            asg: BTreeMap::new(),
            fresh: Vec::new(),
            anchor: BTreeMap::new(),
            members: BTreeMap::new(),
            images: Vec::new(),
            choices: BTreeMap::new(),
            next_id: self.base.fresh_id_base(),
        };
        for (rep, members) in self.base.classes() {
            for m in members {
                state.anchor.insert(m, rep);
            }
            state
                .members
                .insert(rep, self.base.class_members(rep));
        }
        match self.assign(0, &mut state) {
            Some(witness) => SatResult::Sat(witness),
            None => SatResult::Unsat,
        }
    }

    fn assign(&self, var_idx: usize, state: &mut State) -> Option<Witness> {
        if var_idx == self.vars.len() {
            if !self.quick_check(state) {
                return None;
            }
            let entries = self.free_entries(state);
            return self.choose(0, &entries, state);
        }
        let (name, sort) = &self.vars[var_idx];
        let mut candidates: Vec<ElemId> = self
            .base
            .ids()
            .filter(|&id| self.base.sort_of(id) == Some(*sort))
            .collect();
        candidates.extend(
            state
                .fresh
                .iter()
                .filter(|(_, s)| s == sort)
                .map(|&(id, _)| id),
        );
        for cand in candidates {
            let mut next = state.clone();
            next.asg.insert(name.clone(), cand);
            if !self.quick_check(&next) {
                continue;
            }
            if let Some(w) = self.assign(var_idx + 1, &mut next) {
                return Some(w);
            }
        }
        // A new fresh element of the right sort.
        let id = ElemId(state.next_id);
        match sort {
            Sort::F => {
                let mut next = state.clone();
                next.next_id += 1;
                next.fresh.push((id, Sort::F));
                next.asg.insert(name.clone(), id);
                if self.quick_check(&next) {
                    if let Some(w) = self.assign(var_idx + 1, &mut next) {
                        return Some(w);
                    }
                }
            }
            Sort::O => {
                // Branch over the class placement: every existing anchor
                // in ascending order, then a fresh class.
                let anchors: Vec<ElemId> = state.members.keys().copied().collect();
                for anchor in anchors {
                    let mut next = state.clone();
                    next.next_id += 1;
                    next.fresh.push((id, Sort::O));
                    next.asg.insert(name.clone(), id);
                    next.place(id, anchor);
                    if !self.quick_check(&next) {
                        continue;
                    }
                    if let Some(w) = self.assign(var_idx + 1, &mut next) {
                        return Some(w);
                    }
                }
                let mut next = state.clone();
                next.next_id += 1;
                next.fresh.push((id, Sort::O));
                next.asg.insert(name.clone(), id);
                next.place(id, id);
                if self.quick_check(&next) {
                    if let Some(w) = self.assign(var_idx + 1, &mut next) {
                        return Some(w);
                    }
                }
            }
        }
        None
    }

    /// Prunes on literals decidable from assignments and class placements
    /// alone (no eval terms involved).
    fn quick_check(&self, state: &State) -> bool {
        'lit: for l in &self.lits {
            let truth = match &l.atom {
                Atom::Eq(a, b) => {
                    let (va, vb) = match (self.simple_value(a, state), self.simple_value(b, state))
                    {
                        (Some(x), Some(y)) => (x, y),
                        _ => continue 'lit,
                    };
                    va == vb
                }
                Atom::E(a, b) => {
                    let (va, vb) = match (self.simple_value(a, state), self.simple_value(b, state))
                    {
                        (Some(x), Some(y)) => (x, y),
                        _ => continue 'lit,
                    };
                    match (state.anchor.get(&va), state.anchor.get(&vb)) {
                        (Some(x), Some(y)) => x == y,
                        _ => continue 'lit,
                    }
                }
                Atom::SortIs(t, sort) => {
                    let v = match self.simple_value(t, state) {
                        Some(v) => v,
                        None => continue 'lit,
                    };
                    let actual = self
                        .base
                        .sort_of(v)
                        .or_else(|| state.fresh.iter().find(|(id, _)| *id == v).map(|(_, s)| *s));
                    match actual {
                        Some(s) => s == *sort,
                        None => continue 'lit,
                    }
                }
            };
            if truth != l.pos {
                return false;
            }
        }
        true
    }

    /// Value of a variable or constant term under the current assignment.
    fn simple_value(&self, t: &Term, state: &State) -> Option<ElemId> {
        match t {
            Term::Const(id) => Some(*id),
            Term::Var(v) => state.asg.get(v).copied(),
            Term::Eval(..) => None,
        }
    }

    /// The branched entries: (tuple, anchor) keys of eval occurrences not
    /// already determined by the base table.
    fn free_entries(&self, state: &State) -> Vec<(Vec<ElemId>, ElemId)> {
        let mut out: Vec<(Vec<ElemId>, ElemId)> = Vec::new();
        for (fs, o) in &self.eval_terms {
            let tuple: Vec<ElemId> = fs
                .iter()
                .map(|f| self.simple_value(f, state).unwrap())
                .collect();
            let ov = self.simple_value(o, state).unwrap();
            let anchor = state.anchor[&ov];
            let base_determined = self.base.contains(anchor)
                && tuple.iter().all(|f| self.base.contains(*f));
            if base_determined {
                continue;
            }
            let key = (tuple, anchor);
            if !out.contains(&key) {
                out.push(key);
            }
        }
        out.sort();
        out
    }

    fn choose(
        &self,
        idx: usize,
        entries: &[(Vec<ElemId>, ElemId)],
        state: &mut State,
    ) -> Option<Witness> {
        if idx == entries.len() {
            return self.finalize(state);
        }
        let (tuple, anchor) = &entries[idx];
        let members = state.members[anchor].clone();
        for v in members {
            let mut next = state.clone();
            next.choices.insert((tuple.clone(), *anchor), v);
            if let Some(w) = self.choose(idx + 1, entries, &mut next) {
                return Some(w);
            }
        }
        // A new element of the class as the image.
        let img = ElemId(state.next_id);
        let mut next = state.clone();
        next.next_id += 1;
        next.images.push(img);
        next.place(img, *anchor);
        next.choices.insert((tuple.clone(), *anchor), img);
        self.choose(idx + 1, entries, &mut next)
    }

    /// Materializes the candidate extension and checks every literal.
    fn finalize(&self, state: &State) -> Option<Witness> {
        let ext = self.materialize(state)?;
        debug_assert!(ext.validate().pass(), "search produced a non-model");
        debug_assert!(ext.restricts_to(self.base), "extension moved the base");
        for l in &self.lits {
            if !holds(&ext, &state.asg, l).ok()? {
                return None;
            }
        }
        Some(Witness {
            extension: ext,
            assignment: state.asg.clone(),
        })
    }

    fn materialize(&self, state: &State) -> Option<FinStructure> {
        let mut b = StructureBuilder::extending(self.base);
        for &(id, sort) in &state.fresh {
            b.add(id, sort).ok()?;
        }
        for &img in &state.images {
            b.add(img, Sort::O).ok()?;
        }
        for (&id, &anchor) in &state.anchor {
            if id != anchor && !self.base.contains(id) {
                b.relate(anchor, id).ok()?;
            }
        }
        let probe = b.build_totalized().ok()?;
        let mut b = StructureBuilder::extending(&probe);
        for t in probe.f_tuples() {
            let all_base = t.iter().all(|f| self.base.contains(*f));
            for (anchor, members) in &state.members {
                let value = if all_base && self.base.contains(*anchor) {
                    self.base.eval_get(&t, *anchor).unwrap()
                } else if let Some(&v) = state.choices.get(&(t.clone(), *anchor)) {
                    v
                } else {
                    *anchor
                };
                for &m in members {
                    b.set_eval(t.clone(), m, value).ok()?;
                }
            }
        }
        b.build().ok()
    }
}

/// Truth of a conjunction over parameter tuples of disjunctive template
/// instances: distributes the disjunction and asks the oracle per branch.
pub fn consistent_set(
    base: &FinStructure,
    disjuncts: &[Template],
    params: &[SortedTuple],
) -> Result<bool, OracleError> {
    if disjuncts.is_empty() {
        return Ok(params.is_empty());
    }
    if params.is_empty() {
        return Ok(true);
    }
    let mut pick = vec![0usize; params.len()];
    loop {
        let mut diagram = Diagram::new([], []);
        for t in disjuncts {
            for (name, sort) in t.vars() {
                diagram.declare(name.clone(), *sort);
            }
        }
        for (i, p) in params.iter().enumerate() {
            let lits = disjuncts[pick[i]]
                .instantiate(p)
                .map_err(|_| OracleError::BadParams(p.to_string()))?;
            diagram.merge_in(lits);
        }
        if satisfiable(base, &diagram)?.is_sat() {
            return Ok(true);
        }
        // Next branch in the disjunction product.
        let mut pos = pick.len();
        let mut wrapped = true;
        while pos > 0 {
            pos -= 1;
            if pick[pos] + 1 < disjuncts.len() {
                pick[pos] += 1;
                pick[pos + 1..].fill(0);
                wrapped = false;
                break;
            }
            pick[pos] = 0;
        }
        if wrapped {
            return Ok(false);
        }
    }
}

/// True when every `k`-element subset of the instantiated family is
/// jointly unsatisfiable over the base.
pub fn k_inconsistent(
    base: &FinStructure,
    template: &Template,
    params: &[SortedTuple],
    k: usize,
) -> Result<bool, OracleError> {
    if k < 2 || k > params.len() {
        return Err(OracleError::BadK {
            k,
            params: params.len(),
        });
    }
    let mut subset: Vec<usize> = (0..k).collect();
    loop {
        let mut diagram = Diagram::new(template.vars().iter().cloned(), []);
        for &i in &subset {
            let lits = template
                .instantiate(&params[i])
                .map_err(|_| OracleError::BadParams(params[i].to_string()))?;
            diagram.merge_in(lits);
        }
        if satisfiable(base, &diagram)?.is_sat() {
            return Ok(false);
        }
        // Next k-subset in lexicographic order.
        let mut i = k;
        loop {
            if i == 0 {
                return Ok(true);
            }
            i -= 1;
            if subset[i] < params.len() - (k - i) {
                subset[i] += 1;
                for j in i + 1..k {
                    subset[j] = subset[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Least `k` within `2..=params.len()` at which the family is
/// `k`-inconsistent, if any.
pub fn least_inconsistency_degree(
    base: &FinStructure,
    template: &Template,
    params: &[SortedTuple],
) -> Result<Option<usize>, OracleError> {
    for k in 2..=params.len() {
        if k_inconsistent(base, template, params, k)? {
            return Ok(Some(k));
        }
    }
    Ok(None)
}
