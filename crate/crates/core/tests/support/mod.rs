//! Independent oracles for the acceptance suite.
//!
//! Everything here re-derives expected answers from first principles with
//! code paths disjoint from the library implementation: trees are plain
//! value strings under prefix order, and satisfiability is decided by
//! enumerating whole extension structures and trying every assignment.

use kimlab_core::logic::{holds, Atom, Diagram, Term};
use kimlab_core::structure::StructureBuilder;
use kimlab_core::{ElemId, FinStructure, Sort};

// ---------------------------------------------------------------------
// Word trees: strings of naturals under prefix order
// ---------------------------------------------------------------------

/// A node of the string tree: values from the root outward.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Word(pub Vec<u32>);

impl Word {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_prefix_of(&self, other: &Word) -> bool {
        self.0.len() <= other.0.len() && other.0[..self.0.len()] == self.0[..]
    }

    pub fn meet(&self, other: &Word) -> Word {
        let common = self
            .0
            .iter()
            .zip(&other.0)
            .take_while(|(a, b)| a == b)
            .count();
        Word(self.0[..common].to_vec())
    }

    /// Lexicographic order with proper prefixes first.
    pub fn lex_cmp(&self, other: &Word) -> std::cmp::Ordering {
        for (a, b) in self.0.iter().zip(&other.0) {
            match a.cmp(b) {
                std::cmp::Ordering::Equal => continue,
                ord => return ord,
            }
        }
        self.0.len().cmp(&other.0.len())
    }
}

/// All words of length at most `alpha` over values below `branching`, in
/// (length, lex) order.
pub fn enumerate_words(alpha: u32, branching: u32) -> Vec<Word> {
    let mut out = vec![Word(Vec::new())];
    let mut layer: Vec<Word> = out.clone();
    for _ in 0..alpha {
        let mut next = Vec::new();
        for w in &layer {
            for v in 0..branching {
                let mut ext = w.0.clone();
                ext.push(v);
                next.push(Word(ext));
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

// ---------------------------------------------------------------------
// Naive satisfiability by whole-structure enumeration
// ---------------------------------------------------------------------

/// Decides satisfiability of a diagram over a base against a precomputed
/// extension list (see [`enumerate_extensions`]; the list depends only on
/// the base and the fresh-element budgets, so a corpus can share it).
///
/// The fresh-element budget is complete because a realization generates a
/// substructure whose new function part comes only from variable images
/// (the operation never produces function elements) and whose new object
/// part consists of variable images plus at most one eval image per eval
/// occurrence in the diagram.
pub fn naive_satisfiable_with(exts: &[FinStructure], base: &FinStructure, diagram: &Diagram) -> bool {
    let d = diagram.normalized();
    if d.check(base).is_err() {
        return false;
    }
    exts.iter().any(|ext| some_assignment_satisfies(ext, &d))
}

pub fn count_eval_occurrences(l: &kimlab_core::logic::Literal) -> usize {
    fn in_term(t: &Term) -> usize {
        match t {
            Term::Var(_) | Term::Const(_) => 0,
            Term::Eval(fs, o) => 1 + fs.iter().map(in_term).sum::<usize>() + in_term(o),
        }
    }
    match &l.atom {
        Atom::Eq(a, b) | Atom::E(a, b) => in_term(a) + in_term(b),
        Atom::SortIs(t, _) => in_term(t),
    }
}

fn some_assignment_satisfies(ext: &FinStructure, d: &Diagram) -> bool {
    let os: Vec<ElemId> = ext.o_elems().collect();
    let fs: Vec<ElemId> = ext.f_elems().collect();
    let domains: Vec<&[ElemId]> = d
        .vars()
        .iter()
        .map(|(_, s)| match s {
            Sort::O => os.as_slice(),
            Sort::F => fs.as_slice(),
        })
        .collect();
    if domains.iter().any(|dm| dm.is_empty()) && !d.vars().is_empty() {
        return false;
    }
    let mut idx = vec![0usize; domains.len()];
    loop {
        let asg: std::collections::BTreeMap<String, ElemId> = d
            .vars()
            .iter()
            .enumerate()
            .map(|(i, (name, _))| (name.clone(), domains[i][idx[i]]))
            .collect();
        if d.literals()
            .iter()
            .all(|l| holds(ext, &asg, l).unwrap_or(false))
        {
            return true;
        }
        let mut pos = idx.len();
        let mut wrapped = true;
        while pos > 0 {
            pos -= 1;
            if idx[pos] + 1 < domains[pos].len() {
                idx[pos] += 1;
                idx[pos + 1..].fill(0);
                wrapped = false;
                break;
            }
            idx[pos] = 0;
        }
        if wrapped || idx.is_empty() {
            return false;
        }
    }
}

/// Every valid extension of `base` with at most the given numbers of
/// fresh function and object elements.
pub fn enumerate_extensions(base: &FinStructure, max_f: usize, max_o: usize) -> Vec<FinStructure> {
    let mut out = Vec::new();
    let first_fresh = base.fresh_id_base();
    for n_f in 0..=max_f {
        for n_o in 0..=max_o {
            let f_ids: Vec<ElemId> = (0..n_f as u32).map(|i| ElemId(first_fresh + i)).collect();
            let o_ids: Vec<ElemId> = (0..n_o as u32)
                .map(|i| ElemId(first_fresh + n_f as u32 + i))
                .collect();
            // Class placements: each new object joins a base class or a
            // new block, new blocks named canonically by first member.
            let base_reps: Vec<ElemId> = base.classes().keys().copied().collect();
            let mut placements: Vec<Vec<usize>> = vec![Vec::new()];
            for k in 0..n_o {
                let mut next = Vec::new();
                for p in &placements {
                    let new_blocks = p
                        .iter()
                        .copied()
                        .filter(|&l| l >= base_reps.len())
                        .max()
                        .map(|l| l - base_reps.len() + 1)
                        .unwrap_or(0);
                    for label in 0..base_reps.len() + new_blocks + 1 {
                        let mut q = p.clone();
                        q.push(label);
                        next.push(q);
                    }
                    let _ = k;
                }
                placements = next;
            }
            for placement in &placements {
                let mut b = StructureBuilder::extending(base);
                for &f in &f_ids {
                    b.add(f, Sort::F).unwrap();
                }
                for &o in &o_ids {
                    b.add(o, Sort::O).unwrap();
                }
                for (i, &label) in placement.iter().enumerate() {
                    if label < base_reps.len() {
                        b.relate(base_reps[label], o_ids[i]).unwrap();
                    } else {
                        // Relate to the first member of the same new
                        // block, if any.
                        if let Some(j) = placement[..i].iter().position(|&l| l == label) {
                            b.relate(o_ids[j], o_ids[i]).unwrap();
                        }
                    }
                }
                let skeleton = match b.build_totalized() {
                    Ok(s) => s,
                    Err(_) => continue,
                };
                // Free entries: everything except base tuples on base
                // classes, which the extension property forces.
                let tuples = skeleton.f_tuples();
                let classes: Vec<(ElemId, Vec<ElemId>)> = skeleton.classes().into_iter().collect();
                let mut free: Vec<(usize, usize)> = Vec::new();
                for (ti, t) in tuples.iter().enumerate() {
                    let base_tuple = t.iter().all(|f| base.contains(*f));
                    for (ci, (rep, _)) in classes.iter().enumerate() {
                        let base_class = base.contains(*rep);
                        if !(base_tuple && base_class) {
                            free.push((ti, ci));
                        }
                    }
                }
                let mut choice = vec![0usize; free.len()];
                loop {
                    let mut bb = StructureBuilder::extending(&skeleton);
                    for (slot, &(ti, ci)) in free.iter().enumerate() {
                        let value = classes[ci].1[choice[slot]];
                        for &m in &classes[ci].1 {
                            bb.set_eval(tuples[ti].clone(), m, value).unwrap();
                        }
                    }
                    if let Ok(ext) = bb.build() {
                        if ext.validate().pass() && ext.restricts_to(base) {
                            out.push(ext);
                        }
                    }
                    let mut pos = free.len();
                    let mut wrapped = true;
                    while pos > 0 {
                        pos -= 1;
                        let (_, ci) = free[pos];
                        if choice[pos] + 1 < classes[ci].1.len() {
                            choice[pos] += 1;
                            choice[pos + 1..].fill(0);
                            wrapped = false;
                            break;
                        }
                        choice[pos] = 0;
                    }
                    if wrapped {
                        break;
                    }
                }
            }
        }
    }
    out
}

/// Structures pairwise non-isomorphic, filtered from the input.
pub fn dedupe_up_to_isomorphism(corpus: Vec<FinStructure>) -> Vec<FinStructure> {
    use kimlab_core::structure::{embeddings, BaseMap};
    let mut reps: Vec<FinStructure> = Vec::new();
    'next: for s in corpus {
        for r in &reps {
            if r.len() == s.len()
                && r.o_elems().count() == s.o_elems().count()
                && !embeddings(&s, r, &BaseMap::new()).is_empty()
                && !embeddings(r, &s, &BaseMap::new()).is_empty()
            {
                continue 'next;
            }
        }
        reps.push(s);
    }
    reps
}

/// The eval-closure bound `k^(n+1) + k`.
pub fn generation_bound(k: usize, n: usize) -> usize {
    k.pow(n as u32 + 1) + k
}
