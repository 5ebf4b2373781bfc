//! Finite two-sorted selector structures.
//!
//! A structure has object elements (sort `O`) carrying an equivalence
//! relation, function elements (sort `F`), and a total operation `eval`
//! sending an `F`-tuple of length `n` and an object to an object. The
//! axioms say each `eval(fs, -)` is a selector: it lands in the class of
//! its argument and is constant on classes. [`FinStructure::validate`]
//! checks exactly these axioms and never panics on bad input.
//!
//! Structures are immutable once built; every operation that "grows" a
//! structure returns a new one.

mod embed;
mod random;
mod text;

pub use embed::{embeddings, exists_embedding, extend_generated_map};
pub use random::{random_extension, random_structure, ExtensionSpec};
pub use text::ParseTnError;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::report::{Check, Report};

/// Opaque element identifier.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ElemId(pub u32);

impl fmt::Display for ElemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sort {
    O,
    F,
}

impl fmt::Display for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sort::O => write!(f, "O"),
            Sort::F => write!(f, "F"),
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum StructureError {
    #[error("unknown element {0}")]
    UnknownElement(ElemId),
    #[error("duplicate element {0}")]
    DuplicateElement(ElemId),
    #[error("element {0} has sort {1}, expected {2}")]
    WrongSort(ElemId, Sort, Sort),
    #[error("eval tuple has length {0}, expected {1}")]
    BadArity(usize, usize),
    #[error("eval table is missing an entry for ({0}, {1})")]
    MissingEval(String, ElemId),
    #[error("arity parameter must be at least 1")]
    BadN,
    #[error("tuple length mismatch: {0} vs {1}")]
    TupleLength(usize, usize),
    #[error("infeasible parameters: {0}")]
    Infeasible(String),
}

fn tuple_string(tuple: &[ElemId]) -> String {
    tuple
        .iter()
        .map(|e| e.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

/// A finite structure for the two-sorted selector language with
/// `n`-tuples of function elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinStructure {
    n: usize,
    sorts: BTreeMap<ElemId, Sort>,
    /// Each object element mapped to its class representative (least id).
    class_of: BTreeMap<ElemId, ElemId>,
    /// Total: every (F-tuple, object) pair has an entry.
    eval: BTreeMap<(Vec<ElemId>, ElemId), ElemId>,
}

impl FinStructure {
    /// The structure with no elements.
    pub fn empty(n: usize) -> Self {
        FinStructure {
            n,
            sorts: BTreeMap::new(),
            class_of: BTreeMap::new(),
            eval: BTreeMap::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.sorts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorts.is_empty()
    }

    pub fn contains(&self, id: ElemId) -> bool {
        self.sorts.contains_key(&id)
    }

    pub fn sort_of(&self, id: ElemId) -> Option<Sort> {
        self.sorts.get(&id).copied()
    }

    pub fn ids(&self) -> impl Iterator<Item = ElemId> + '_ {
        self.sorts.keys().copied()
    }

    pub fn id_set(&self) -> BTreeSet<ElemId> {
        self.sorts.keys().copied().collect()
    }

    pub fn o_elems(&self) -> impl Iterator<Item = ElemId> + '_ {
        self.sorts
            .iter()
            .filter(|(_, &s)| s == Sort::O)
            .map(|(&id, _)| id)
    }

    pub fn f_elems(&self) -> impl Iterator<Item = ElemId> + '_ {
        self.sorts
            .iter()
            .filter(|(_, &s)| s == Sort::F)
            .map(|(&id, _)| id)
    }

    pub fn max_id(&self) -> Option<ElemId> {
        self.sorts.keys().next_back().copied()
    }

    /// First id strictly above everything in the structure.
    pub fn fresh_id_base(&self) -> u32 {
        self.max_id().map(|e| e.0 + 1).unwrap_or(0)
    }

    /// All length-`n` tuples of function elements, in ascending order.
    pub fn f_tuples(&self) -> Vec<Vec<ElemId>> {
        let fs: Vec<ElemId> = self.f_elems().collect();
        let mut out = Vec::new();
        if fs.is_empty() {
            return out;
        }
        let mut idx = vec![0usize; self.n];
        loop {
            out.push(idx.iter().map(|&i| fs[i]).collect());
            let mut pos = self.n;
            let mut wrapped = true;
            while pos > 0 {
                pos -= 1;
                if idx[pos] + 1 < fs.len() {
                    idx[pos] += 1;
                    idx[pos + 1..].fill(0);
                    wrapped = false;
                    break;
                }
                idx[pos] = 0;
            }
            if wrapped {
                break;
            }
        }
        out
    }

    /// Class representative (least id of the class).
    pub fn class_rep(&self, id: ElemId) -> Option<ElemId> {
        self.class_of.get(&id).copied()
    }

    pub fn e_rel(&self, a: ElemId, b: ElemId) -> bool {
        match (self.class_of.get(&a), self.class_of.get(&b)) {
            (Some(ra), Some(rb)) => ra == rb,
            _ => false,
        }
    }

    /// Classes as representative -> ascending members.
    pub fn classes(&self) -> BTreeMap<ElemId, Vec<ElemId>> {
        let mut out: BTreeMap<ElemId, Vec<ElemId>> = BTreeMap::new();
        for (&id, &rep) in &self.class_of {
            out.entry(rep).or_default().push(id);
        }
        out
    }

    /// Members of the class of `id`, ascending.
    pub fn class_members(&self, id: ElemId) -> Vec<ElemId> {
        match self.class_of.get(&id) {
            None => Vec::new(),
            Some(rep) => self
                .class_of
                .iter()
                .filter(|(_, r)| *r == rep)
                .map(|(&m, _)| m)
                .collect(),
        }
    }

    pub fn eval_get(&self, tuple: &[ElemId], o: ElemId) -> Option<ElemId> {
        self.eval.get(&(tuple.to_vec(), o)).copied()
    }

    pub fn eval_entries(&self) -> impl Iterator<Item = (&Vec<ElemId>, ElemId, ElemId)> + '_ {
        self.eval.iter().map(|((t, o), &v)| (t, *o, v))
    }

    /// One least-id representative per class meeting `xs`.
    pub fn class_reps(&self, xs: &BTreeSet<ElemId>) -> Result<BTreeSet<ElemId>, StructureError> {
        let mut reps = BTreeSet::new();
        for &x in xs {
            match self.sorts.get(&x) {
                None => return Err(StructureError::UnknownElement(x)),
                Some(Sort::F) => {
                    return Err(StructureError::WrongSort(x, Sort::F, Sort::O))
                }
                Some(Sort::O) => {
                    reps.insert(self.class_of[&x]);
                }
            }
        }
        Ok(reps)
    }

    /// Checks the selector axioms and internal consistency. Never panics;
    /// a failing report names the offending entries.
    pub fn validate(&self) -> Report {
        let mut report = Report::new();
        // Sorts and the class partition cover exactly the object elements.
        let mut partition_ok = true;
        let mut partition_witness = String::new();
        for (&id, &sort) in &self.sorts {
            let in_partition = self.class_of.contains_key(&id);
            if (sort == Sort::O) != in_partition {
                partition_ok = false;
                partition_witness = format!("element {id} of sort {sort}");
                break;
            }
        }
        for (&id, &rep) in &self.class_of {
            if !self.sorts.contains_key(&id) || !self.sorts.contains_key(&rep) {
                partition_ok = false;
                partition_witness = format!("class entry {id}~{rep} off the universe");
                break;
            }
        }
        report.push(Check::from_bool(
            "sorts-partition",
            "sorts partition the universe and E relates only O-elements",
            partition_ok,
            partition_witness,
        ));

        // Totality of eval with well-sorted keys and values.
        let tuples = self.f_tuples();
        let os: Vec<ElemId> = self.o_elems().collect();
        let mut total_ok = true;
        let mut total_witness = String::new();
        'outer: for t in &tuples {
            for &o in &os {
                match self.eval_get(t, o) {
                    None => {
                        total_ok = false;
                        total_witness = format!("missing eval({}; {o})", tuple_string(t));
                        break 'outer;
                    }
                    Some(v) => {
                        if self.sorts.get(&v) != Some(&Sort::O) {
                            total_ok = false;
                            total_witness =
                                format!("eval({}; {o}) = {v} is not an O-element", tuple_string(t));
                            break 'outer;
                        }
                    }
                }
            }
        }
        for (t, o) in self.eval.keys() {
            if t.len() != self.n
                || t.iter().any(|f| self.sorts.get(f) != Some(&Sort::F))
                || self.sorts.get(o) != Some(&Sort::O)
            {
                total_ok = false;
                total_witness = format!("ill-sorted eval key ({}; {o})", tuple_string(t));
                break;
            }
        }
        report.push(Check::from_bool(
            "eval-total",
            "eval is a total well-sorted table",
            total_ok,
            total_witness,
        ));
        if !total_ok {
            return report;
        }

        // Selector axiom: eval(fs, b) stays in the class of b.
        let mut fix_ok = true;
        let mut fix_witness = String::new();
        'fix: for t in &tuples {
            for &o in &os {
                let v = self.eval_get(t, o).unwrap();
                if !self.e_rel(v, o) {
                    fix_ok = false;
                    fix_witness = format!("eval({}; {o}) = {v} leaves the class", tuple_string(t));
                    break 'fix;
                }
            }
        }
        report.push(Check::from_bool(
            "selector-in-class",
            "E(eval(fs,b), b) for every fs, b",
            fix_ok,
            fix_witness,
        ));

        // Selector axiom: eval(fs, -) is constant on classes.
        let mut const_ok = true;
        let mut const_witness = String::new();
        'cst: for t in &tuples {
            for (_, members) in self.classes() {
                let mut value = None;
                for &m in &members {
                    let v = self.eval_get(t, m).unwrap();
                    match value {
                        None => value = Some(v),
                        Some(w) if w != v => {
                            const_ok = false;
                            const_witness = format!(
                                "eval({}; -) takes values {w} and {v} on one class",
                                tuple_string(t)
                            );
                            break 'cst;
                        }
                        _ => {}
                    }
                }
            }
        }
        report.push(Check::from_bool(
            "selector-constant",
            "E(b,b') implies eval(fs,b) = eval(fs,b')",
            const_ok,
            const_witness,
        ));

        report
    }

    /// Id-set of the smallest substructure containing `xs`: close under
    /// eval applied to tuples and objects from the set.
    pub fn generated(&self, xs: &BTreeSet<ElemId>) -> Result<BTreeSet<ElemId>, StructureError> {
        for &x in xs {
            if !self.contains(x) {
                return Err(StructureError::UnknownElement(x));
            }
        }
        let mut set: BTreeSet<ElemId> = xs.clone();
        loop {
            let fs: Vec<ElemId> = set
                .iter()
                .copied()
                .filter(|&e| self.sorts[&e] == Sort::F)
                .collect();
            let os: Vec<ElemId> = set
                .iter()
                .copied()
                .filter(|&e| self.sorts[&e] == Sort::O)
                .collect();
            let mut grew = false;
            for t in tuples_over(&fs, self.n) {
                for &o in &os {
                    if let Some(v) = self.eval_get(&t, o) {
                        if set.insert(v) {
                            grew = true;
                        }
                    }
                }
            }
            if !grew {
                return Ok(set);
            }
        }
    }

    /// The substructure on a closed id-set, with classes and eval induced.
    pub fn substructure(&self, xs: &BTreeSet<ElemId>) -> Result<FinStructure, StructureError> {
        let closed = self.generated(xs)?;
        let mut b = StructureBuilder::new(self.n);
        for &x in &closed {
            b.add(x, self.sorts[&x])?;
        }
        let members: Vec<ElemId> = closed
            .iter()
            .copied()
            .filter(|&e| self.sorts[&e] == Sort::O)
            .collect();
        for i in 0..members.len() {
            for j in (i + 1)..members.len() {
                if self.e_rel(members[i], members[j]) {
                    b.relate(members[i], members[j])?;
                }
            }
        }
        let fs: Vec<ElemId> = closed
            .iter()
            .copied()
            .filter(|&e| self.sorts[&e] == Sort::F)
            .collect();
        for t in tuples_over(&fs, self.n) {
            for &o in &members {
                if let Some(v) = self.eval_get(&t, o) {
                    b.set_eval(t.clone(), o, v)?;
                }
            }
        }
        b.build()
    }

    /// The generated substructure of `xs` (closure happens inside).
    pub fn generated_substructure(
        &self,
        xs: &BTreeSet<ElemId>,
    ) -> Result<FinStructure, StructureError> {
        self.substructure(xs)
    }

    /// True when `other`'s universe is contained in this structure and
    /// sorts, classes (including non-relations), and eval agree on it.
    pub fn restricts_to(&self, other: &FinStructure) -> bool {
        if self.n != other.n {
            return false;
        }
        for (&id, &sort) in &other.sorts {
            if self.sorts.get(&id) != Some(&sort) {
                return false;
            }
        }
        let o_ids: Vec<ElemId> = other.o_elems().collect();
        for (i, &a) in o_ids.iter().enumerate() {
            for &b in &o_ids[i + 1..] {
                if self.e_rel(a, b) != other.e_rel(a, b) {
                    return false;
                }
            }
        }
        for t in other.f_tuples() {
            for &o in &o_ids {
                if self.eval_get(&t, o) != other.eval_get(&t, o) {
                    return false;
                }
            }
        }
        true
    }

    /// A copy of the structure along an injective renaming. Ids missing
    /// from the map keep their names; the result of the renaming must
    /// still be injective.
    pub fn relabel(&self, map: &BaseMap) -> Result<FinStructure, StructureError> {
        let rename = |id: ElemId| map.get(id).unwrap_or(id);
        let mut b = StructureBuilder::new(self.n);
        for (&id, &sort) in &self.sorts {
            b.add(rename(id), sort)?;
        }
        for (rep, members) in self.classes() {
            for &m in &members {
                if m != rep {
                    b.relate(rename(rep), rename(m))?;
                }
            }
        }
        for ((t, o), &v) in &self.eval {
            let t2: Vec<ElemId> = t.iter().map(|&f| rename(f)).collect();
            b.set_eval(t2, rename(*o), rename(v))?;
        }
        b.build()
    }

    /// Quantifier-free type equality over a parameter set: true when the
    /// map fixing the substructure generated by `c` pointwise and sending
    /// `a` to `b` extends to an isomorphism of generated substructures.
    pub fn equal_type_over(
        &self,
        c: &BTreeSet<ElemId>,
        a: &SortedTuple,
        b: &SortedTuple,
    ) -> Result<bool, StructureError> {
        if a.len() != b.len() {
            return Err(StructureError::TupleLength(a.len(), b.len()));
        }
        for (&x, &y) in a.ids().iter().zip(b.ids()) {
            let (sx, sy) = (self.sorts.get(&x), self.sorts.get(&y));
            match (sx, sy) {
                (Some(sx), Some(sy)) if sx == sy => {}
                (None, _) => return Err(StructureError::UnknownElement(x)),
                (_, None) => return Err(StructureError::UnknownElement(y)),
                (Some(&sx), Some(&sy)) => {
                    return Err(StructureError::WrongSort(y, sy, sx))
                }
            }
        }
        let closed_c = self.generated(c)?;
        let mut partial = BaseMap::new();
        for &x in &closed_c {
            partial.insert(x, x);
        }
        for (&x, &y) in a.ids().iter().zip(b.ids()) {
            match partial.get(x) {
                Some(img) if img != y => return Ok(false),
                _ => {
                    if !partial.insert(x, y) {
                        return Ok(false);
                    }
                }
            }
        }
        let mut dom_gens = closed_c.clone();
        dom_gens.extend(a.ids().iter().copied());
        let mut ran_gens = closed_c;
        ran_gens.extend(b.ids().iter().copied());
        let ran_closed = self.generated(&ran_gens)?;
        match extend_generated_map(self, self, &partial) {
            None => Ok(false),
            Some(full) => Ok(full.range() == ran_closed),
        }
    }
}

/// All length-`n` tuples over a slice, ascending.
pub(crate) fn tuples_over(items: &[ElemId], n: usize) -> Vec<Vec<ElemId>> {
    if items.is_empty() {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut idx = vec![0usize; n];
    loop {
        out.push(idx.iter().map(|&i| items[i]).collect());
        let mut pos = n;
        let mut wrapped = true;
        while pos > 0 {
            pos -= 1;
            if idx[pos] + 1 < items.len() {
                idx[pos] += 1;
                idx[pos + 1..].fill(0);
                wrapped = false;
                break;
            }
            idx[pos] = 0;
        }
        if wrapped {
            break;
        }
    }
    out
}

/// An ordered tuple of element ids. Sorts are those of the host structure.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct SortedTuple {
    ids: Vec<ElemId>,
}

impl SortedTuple {
    pub fn new(ids: impl IntoIterator<Item = ElemId>) -> Self {
        SortedTuple {
            ids: ids.into_iter().collect(),
        }
    }

    /// Validates that every id exists in `host`.
    pub fn checked(
        ids: impl IntoIterator<Item = ElemId>,
        host: &FinStructure,
    ) -> Result<Self, StructureError> {
        let t = SortedTuple::new(ids);
        for &id in &t.ids {
            if !host.contains(id) {
                return Err(StructureError::UnknownElement(id));
            }
        }
        Ok(t)
    }

    pub fn ids(&self) -> &[ElemId] {
        &self.ids
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn id_set(&self) -> BTreeSet<ElemId> {
        self.ids.iter().copied().collect()
    }

    pub fn sorts(&self, host: &FinStructure) -> Result<Vec<Sort>, StructureError> {
        self.ids
            .iter()
            .map(|&id| {
                host.sort_of(id)
                    .ok_or(StructureError::UnknownElement(id))
            })
            .collect()
    }
}

impl fmt::Display for SortedTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", tuple_string(&self.ids))
    }
}

/// An injective sort-respecting partial map between element sets.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BaseMap {
    map: BTreeMap<ElemId, ElemId>,
    inverse: BTreeMap<ElemId, ElemId>,
}

impl BaseMap {
    pub fn new() -> Self {
        BaseMap::default()
    }

    pub fn identity_on(ids: &BTreeSet<ElemId>) -> Self {
        let mut m = BaseMap::new();
        for &id in ids {
            m.insert(id, id);
        }
        m
    }

    /// Inserts a pair; returns false if it would break injectivity or
    /// contradict an existing pair.
    pub fn insert(&mut self, from: ElemId, to: ElemId) -> bool {
        match (self.map.get(&from), self.inverse.get(&to)) {
            (Some(&img), _) => img == to,
            (None, Some(_)) => false,
            (None, None) => {
                self.map.insert(from, to);
                self.inverse.insert(to, from);
                true
            }
        }
    }

    pub fn get(&self, from: ElemId) -> Option<ElemId> {
        self.map.get(&from).copied()
    }

    pub fn preimage(&self, to: ElemId) -> Option<ElemId> {
        self.inverse.get(&to).copied()
    }

    pub fn contains(&self, from: ElemId) -> bool {
        self.map.contains_key(&from)
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn domain(&self) -> BTreeSet<ElemId> {
        self.map.keys().copied().collect()
    }

    pub fn range(&self) -> BTreeSet<ElemId> {
        self.inverse.keys().copied().collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = (ElemId, ElemId)> + '_ {
        self.map.iter().map(|(&k, &v)| (k, v))
    }

    pub fn apply_tuple(&self, t: &[ElemId]) -> Option<Vec<ElemId>> {
        t.iter().map(|&e| self.get(e)).collect()
    }
}

/// Builder accumulating elements, class relations, and eval entries.
///
/// The class partition is maintained with a union-find over generating
/// pairs and frozen at build time.
pub struct StructureBuilder {
    n: usize,
    sorts: BTreeMap<ElemId, Sort>,
    relations: Vec<(ElemId, ElemId)>,
    eval: BTreeMap<(Vec<ElemId>, ElemId), ElemId>,
}

impl StructureBuilder {
    pub fn new(n: usize) -> Self {
        StructureBuilder {
            n,
            sorts: BTreeMap::new(),
            relations: Vec::new(),
            eval: BTreeMap::new(),
        }
    }

    /// Starts from an existing structure (extension-style construction).
    pub fn extending(s: &FinStructure) -> Self {
        let mut b = StructureBuilder::new(s.n);
        b.sorts = s.sorts.clone();
        for (rep, members) in s.classes() {
            for &m in &members {
                if m != rep {
                    b.relations.push((rep, m));
                }
            }
        }
        b.eval = s.eval.clone();
        b
    }

    pub fn add(&mut self, id: ElemId, sort: Sort) -> Result<&mut Self, StructureError> {
        if self.sorts.insert(id, sort).is_some() {
            return Err(StructureError::DuplicateElement(id));
        }
        Ok(self)
    }

    pub fn relate(&mut self, a: ElemId, b: ElemId) -> Result<&mut Self, StructureError> {
        for &e in &[a, b] {
            match self.sorts.get(&e) {
                None => return Err(StructureError::UnknownElement(e)),
                Some(Sort::F) => return Err(StructureError::WrongSort(e, Sort::F, Sort::O)),
                Some(Sort::O) => {}
            }
        }
        self.relations.push((a, b));
        Ok(self)
    }

    pub fn set_eval(
        &mut self,
        tuple: Vec<ElemId>,
        o: ElemId,
        value: ElemId,
    ) -> Result<&mut Self, StructureError> {
        if tuple.len() != self.n {
            return Err(StructureError::BadArity(tuple.len(), self.n));
        }
        for f in &tuple {
            match self.sorts.get(f) {
                None => return Err(StructureError::UnknownElement(*f)),
                Some(Sort::O) => return Err(StructureError::WrongSort(*f, Sort::O, Sort::F)),
                Some(Sort::F) => {}
            }
        }
        for &e in &[o, value] {
            match self.sorts.get(&e) {
                None => return Err(StructureError::UnknownElement(e)),
                Some(Sort::F) => return Err(StructureError::WrongSort(e, Sort::F, Sort::O)),
                Some(Sort::O) => {}
            }
        }
        self.eval.insert((tuple, o), value);
        Ok(self)
    }

    fn freeze_classes(&self) -> BTreeMap<ElemId, ElemId> {
        // Union-find keyed by id, least id becomes the representative.
        let mut parent: BTreeMap<ElemId, ElemId> = self
            .sorts
            .iter()
            .filter(|(_, &s)| s == Sort::O)
            .map(|(&id, _)| (id, id))
            .collect();
        fn find(parent: &mut BTreeMap<ElemId, ElemId>, mut x: ElemId) -> ElemId {
            while parent[&x] != x {
                let up = parent[&parent[&x]];
                parent.insert(x, up);
                x = up;
            }
            x
        }
        for &(a, b) in &self.relations {
            let ra = find(&mut parent, a);
            let rb = find(&mut parent, b);
            if ra != rb {
                let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
                parent.insert(hi, lo);
            }
        }
        let keys: Vec<ElemId> = parent.keys().copied().collect();
        keys.into_iter()
            .map(|id| {
                let rep = find(&mut parent, id);
                (id, rep)
            })
            .collect()
    }

    /// Builds, requiring a fully explicit eval table.
    pub fn build(self) -> Result<FinStructure, StructureError> {
        let class_of = self.freeze_classes();
        let s = FinStructure {
            n: self.n,
            sorts: self.sorts,
            class_of,
            eval: self.eval,
        };
        for t in s.f_tuples() {
            for o in s.o_elems().collect::<Vec<_>>() {
                if s.eval_get(&t, o).is_none() {
                    return Err(StructureError::MissingEval(tuple_string(&t), o));
                }
            }
        }
        Ok(s)
    }

    /// Builds, filling missing eval entries classwise: an entry given on
    /// any member of a class propagates to the whole class (least such
    /// member wins), and otherwise the class representative is used.
    pub fn build_totalized(self) -> Result<FinStructure, StructureError> {
        let class_of = self.freeze_classes();
        let mut s = FinStructure {
            n: self.n,
            sorts: self.sorts,
            class_of,
            eval: self.eval,
        };
        let tuples = s.f_tuples();
        let classes = s.classes();
        for t in &tuples {
            for (rep, members) in &classes {
                let given = members
                    .iter()
                    .find_map(|&m| s.eval_get(t, m).map(|v| (m, v)));
                let fill = match given {
                    Some((_, v)) => v,
                    None => *rep,
                };
                for &m in members {
                    s.eval
                        .entry((t.clone(), m))
                        .or_insert(fill);
                }
            }
        }
        Ok(s)
    }
}
