//! Strong amalgamation of finite selector structures.
//!
//! Given a common substructure `A` of `B` and `C` with `B ∩ C = A`, the
//! amalgam lives on the plain union `B ∪ C`: the class relation is the
//! equivalence generated by both sides, and the eval table keeps each
//! side's values on its own tuples, sending everything else to a canonical
//! class representative. No elements are identified beyond `A`, which is
//! the strong amalgamation property.
//!
//! [`check_fraisse`] verifies closure under substructure, joint embedding,
//! strong amalgamation, and the uniform generation bound
//! `|<X>| <= k^(n+1) + k` either exhaustively on all structures up to a
//! size cap or on a random corpus.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::report::{Check, Report};
use crate::rng::Rng;
use crate::structure::{
    embeddings, random_structure, BaseMap, ElemId, FinStructure, Sort, StructureBuilder,
    StructureError,
};

#[derive(Debug, Error)]
pub enum AmalgamError {
    #[error("arity mismatch: {0} vs {1}")]
    ArityMismatch(usize, usize),
    #[error("base is not a substructure of the {side} factor: {witness}")]
    NotSubstructure { side: &'static str, witness: String },
    #[error("factors intersect outside the base: element {0}")]
    BadIntersection(ElemId),
    #[error("eval tables of the factors disagree on a merged class at ({0}; class of {1})")]
    EvalConflict(String, ElemId),
    #[error("exhaustive mode supports size caps up to 4, got {0}")]
    CapTooLarge(usize),
    #[error(transparent)]
    Structure(#[from] StructureError),
}

/// Two extensions of a common base, intersecting exactly in it.
#[derive(Debug, Clone)]
pub struct AmalgamInput {
    pub base: FinStructure,
    pub left: FinStructure,
    pub right: FinStructure,
}

impl AmalgamInput {
    pub fn new(
        base: FinStructure,
        left: FinStructure,
        right: FinStructure,
    ) -> Result<Self, AmalgamError> {
        let input = AmalgamInput { base, left, right };
        input.check()?;
        Ok(input)
    }

    fn check(&self) -> Result<(), AmalgamError> {
        if self.base.n() != self.left.n() {
            return Err(AmalgamError::ArityMismatch(self.base.n(), self.left.n()));
        }
        if self.base.n() != self.right.n() {
            return Err(AmalgamError::ArityMismatch(self.base.n(), self.right.n()));
        }
        for (side, s) in [("left", &self.left), ("right", &self.right)] {
            if !s.restricts_to(&self.base) {
                return Err(AmalgamError::NotSubstructure {
                    side,
                    witness: "restriction to the base ids differs from the base".to_string(),
                });
            }
        }
        let a_ids = self.base.id_set();
        let shared: BTreeSet<ElemId> = self
            .left
            .id_set()
            .intersection(&self.right.id_set())
            .copied()
            .collect();
        if shared != a_ids {
            let bad = shared
                .symmetric_difference(&a_ids)
                .next()
                .copied()
                .unwrap_or(ElemId(0));
            return Err(AmalgamError::BadIntersection(bad));
        }
        Ok(())
    }
}

/// The canonical strong amalgam on the universe `left ∪ right`.
///
/// Classes merge only through base classes. Each side keeps its own eval
/// values on its own tuples; tuples mixing both sides, and tuples applied
/// to classes their side cannot see, fix the canonical representative
/// (least base id of the class when the class meets the base, least id
/// otherwise). When both sides see a tuple and a merged class, their
/// values are required to agree, never assumed.
pub fn strong_amalgam(input: &AmalgamInput) -> Result<FinStructure, AmalgamError> {
    input.check()?;
    let (a, b, c) = (&input.base, &input.left, &input.right);
    let n = a.n();

    // Universe and the generated class relation.
    let mut builder = StructureBuilder::new(n);
    for id in b.ids() {
        builder.add(id, b.sort_of(id).unwrap())?;
    }
    for id in c.ids() {
        if !b.contains(id) {
            builder.add(id, c.sort_of(id).unwrap())?;
        }
    }
    for s in [b, c] {
        for (rep, members) in s.classes() {
            for &m in &members {
                if m != rep {
                    builder.relate(rep, m)?;
                }
            }
        }
    }
    let probe = builder.build_totalized()?;

    // Eval per (tuple, merged class).
    let mut builder = StructureBuilder::extending(&probe);
    let a_ids = a.id_set();
    for t in probe.f_tuples() {
        let t_in = |s: &FinStructure| t.iter().all(|f| s.contains(*f));
        for (_, members) in probe.classes() {
            let side_val = |s: &FinStructure| {
                if !t_in(s) {
                    return None;
                }
                members
                    .iter()
                    .copied()
                    .find(|m| s.contains(*m))
                    .map(|m| s.eval_get(&t, m).unwrap())
            };
            let b_val = side_val(b);
            let c_val = side_val(c);
            if let (Some(x), Some(y)) = (b_val, c_val) {
                if x != y {
                    return Err(AmalgamError::EvalConflict(
                        t.iter()
                            .map(|e| e.to_string())
                            .collect::<Vec<_>>()
                            .join(" "),
                        members[0],
                    ));
                }
            }
            let value = b_val.or(c_val).unwrap_or_else(|| {
                members
                    .iter()
                    .copied()
                    .find(|m| a_ids.contains(m))
                    .unwrap_or(members[0])
            });
            for &m in &members {
                builder.set_eval(t.clone(), m, value)?;
            }
        }
    }
    let d = builder.build()?;
    debug_assert!(d.validate().pass());
    Ok(d)
}

/// Joint embedding: the strong amalgam over the empty base. When the two
/// factors share ids, the right one is relabelled onto fresh ids first.
pub fn joint_embed(
    left: &FinStructure,
    right: &FinStructure,
) -> Result<FinStructure, AmalgamError> {
    if left.n() != right.n() {
        return Err(AmalgamError::ArityMismatch(left.n(), right.n()));
    }
    let disjoint = left
        .id_set()
        .intersection(&right.id_set())
        .next()
        .is_none();
    let shifted;
    let right = if disjoint {
        right
    } else {
        let offset = left.fresh_id_base().max(right.fresh_id_base());
        let mut map = BaseMap::new();
        for (i, id) in right.ids().enumerate() {
            map.insert(id, ElemId(offset + i as u32));
        }
        shifted = right.relabel(&map)?;
        &shifted
    };
    let input = AmalgamInput::new(FinStructure::empty(left.n()), left.clone(), right.clone())?;
    strong_amalgam(&input)
}

/// Every structure of the class with exactly `size` elements on the ids
/// `0..size`: all sort assignments, class partitions, and classwise eval
/// tables.
pub fn enumerate_class(n: usize, size: usize) -> Vec<FinStructure> {
    let ids: Vec<ElemId> = (0..size as u32).map(ElemId).collect();
    let mut out = Vec::new();
    for sort_mask in 0..(1u32 << size) {
        let sort_of = |id: &ElemId| -> Sort {
            if sort_mask >> id.0 & 1 == 1 {
                Sort::F
            } else {
                Sort::O
            }
        };
        let os: Vec<ElemId> = ids
            .iter()
            .copied()
            .filter(|i| sort_of(i) == Sort::O)
            .collect();
        // Partitions via restricted growth strings.
        let mut partitions: Vec<Vec<usize>> = vec![Vec::new()];
        for k in 0..os.len() {
            let mut next = Vec::new();
            for p in &partitions {
                let blocks = p.iter().copied().max().map(|m| m + 1).unwrap_or(0);
                for block in 0..=blocks.min(k) {
                    let mut q = p.clone();
                    q.push(block);
                    next.push(q);
                }
            }
            partitions = next;
        }
        for p in &partitions {
            let mut base = StructureBuilder::new(n);
            for &id in &ids {
                base.add(id, sort_of(&id)).unwrap();
            }
            for i in 0..os.len() {
                for j in (i + 1)..os.len() {
                    if p[i] == p[j] {
                        base.relate(os[i], os[j]).unwrap();
                    }
                }
            }
            let skeleton = base.build_totalized().unwrap();
            let tuples = skeleton.f_tuples();
            let classes: Vec<Vec<ElemId>> = skeleton.classes().into_values().collect();
            let slots: Vec<(usize, usize)> = (0..tuples.len())
                .flat_map(|t| (0..classes.len()).map(move |c| (t, c)))
                .collect();
            let mut choice = vec![0usize; slots.len()];
            loop {
                let mut b = StructureBuilder::extending(&skeleton);
                for (slot, &(t, c)) in slots.iter().enumerate() {
                    let value = classes[c][choice[slot]];
                    for &m in &classes[c] {
                        b.set_eval(tuples[t].clone(), m, value).unwrap();
                    }
                }
                let s = b.build().unwrap();
                out.push(s);
                let mut pos = slots.len();
                let mut wrapped = true;
                while pos > 0 {
                    pos -= 1;
                    let (_, cls) = slots[pos];
                    if choice[pos] + 1 < classes[cls].len() {
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
    out
}

#[derive(Debug, Clone, Copy)]
pub enum FraisseMode {
    Exhaustive,
    Randomized { samples: usize, seed: u64 },
}

/// Verifies the amalgamation-class properties up to a size cap.
pub fn check_fraisse(n: usize, size_cap: usize, mode: FraisseMode) -> Result<Report, AmalgamError> {
    match mode {
        FraisseMode::Exhaustive => {
            if size_cap > 4 {
                return Err(AmalgamError::CapTooLarge(size_cap));
            }
            let mut corpus = Vec::new();
            for size in 0..=size_cap {
                corpus.extend(enumerate_class(n, size));
            }
            Ok(exhaustive_report(n, &corpus))
        }
        FraisseMode::Randomized { samples, seed } => {
            Ok(randomized_report(n, size_cap, samples, seed))
        }
    }
}

/// Hereditary property, joint embedding, strong amalgamation, and the
/// uniform generation bound, checked on every combination drawn from the
/// corpus.
pub fn exhaustive_report(n: usize, corpus: &[FinStructure]) -> Report {
    let mut report = Report::new();

    let broken = corpus.iter().find(|s| !s.validate().pass());
    report.push(Check::from_bool(
        "corpus-valid",
        "every corpus structure satisfies the selector axioms",
        broken.is_none(),
        broken.map(|s| s.to_tn()).unwrap_or_default(),
    ));
    if !report.pass() {
        return report;
    }

    let (hp, bound) = hp_and_bound(n, corpus);
    report.push(hp);
    report.push(bound);

    // JEP on every ordered pair.
    let mut jep_ok = true;
    let mut jep_witness = String::new();
    'jep: for b in corpus {
        for c in corpus {
            match joint_embed(b, c) {
                Err(e) => {
                    jep_ok = false;
                    jep_witness = e.to_string();
                    break 'jep;
                }
                Ok(d) => {
                    if !d.validate().pass() || !d.restricts_to(b) {
                        jep_ok = false;
                        jep_witness = d.to_tn();
                        break 'jep;
                    }
                }
            }
        }
    }
    report.push(Check::from_bool(
        "jep",
        "any two structures embed jointly into one",
        jep_ok,
        jep_witness,
    ));

    // SAP over every base cut out of the left factor and every embedding
    // of it into the right factor.
    let mut sap_ok = true;
    let mut sap_witness = String::new();
    'sap: for b in corpus {
        let ids: Vec<ElemId> = b.ids().collect();
        for mask in 0..(1u64 << ids.len()) {
            let xs: BTreeSet<ElemId> = ids
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &id)| id)
                .collect();
            let base = match b.substructure(&xs) {
                Ok(a) => a,
                Err(_) => continue,
            };
            for c in corpus {
                for emb in embeddings(&base, c, &BaseMap::new()) {
                    if let Some(w) = sap_instance(&base, b, c, &emb) {
                        sap_ok = false;
                        sap_witness = w;
                        break 'sap;
                    }
                }
            }
        }
    }
    report.push(Check::from_bool(
        "sap",
        "amalgams exist, restrict to both factors, and identify nothing beyond the base",
        sap_ok,
        sap_witness,
    ));

    report
}

/// The randomized suite: sampled bases with sampled extension pairs.
pub fn randomized_report(n: usize, size_cap: usize, samples: usize, seed: u64) -> Report {
    let mut report = Report::new();
    let mut rng = Rng::new(seed);
    let mut ok = true;
    let mut witness = String::new();
    let mut bound_ok = true;
    let mut bound_witness = String::new();
    for _ in 0..samples {
        let o = 1 + rng.below(size_cap.max(1));
        let f = rng.below(size_cap.max(2) - 1);
        let classes = 1 + rng.below(o);
        let base = match random_structure(n, o, f, classes, rng.next_u64()) {
            Ok(s) => s,
            Err(e) => {
                ok = false;
                witness = e.to_string();
                break;
            }
        };
        // The generation bound on a random subset.
        let ids: Vec<ElemId> = base.ids().collect();
        let xs: BTreeSet<ElemId> = ids.iter().filter(|_| rng.chance(1, 2)).copied().collect();
        let k = xs.len();
        let closed = base.generated(&xs).unwrap();
        if closed.len() > k.pow(n as u32 + 1) + k {
            bound_ok = false;
            bound_witness = format!("|<X>| = {} for |X| = {k}", closed.len());
        }
        let grow = |rng: &mut Rng, hi_start: u32| {
            let spec = crate::structure::ExtensionSpec {
                extra_o: rng.below(3),
                extra_f: rng.below(2),
                new_classes: rng.below(3),
            };
            crate::structure::random_extension(&base, spec, rng).map(|s| {
                // Shift the new ids of the right factor out of the left's
                // range.
                let mut shift = BaseMap::new();
                let mut next = hi_start;
                for id in s.ids() {
                    if !base.contains(id) {
                        shift.insert(id, ElemId(next));
                        next += 1;
                    }
                }
                s.relabel(&shift).unwrap()
            })
        };
        let left = match grow(&mut rng, 1000) {
            Ok(s) => s,
            Err(e) => {
                ok = false;
                witness = e.to_string();
                break;
            }
        };
        let right = match grow(&mut rng, 2000) {
            Ok(s) => s,
            Err(e) => {
                ok = false;
                witness = e.to_string();
                break;
            }
        };
        let input = match AmalgamInput::new(base.clone(), left.clone(), right.clone()) {
            Ok(i) => i,
            Err(e) => {
                ok = false;
                witness = e.to_string();
                break;
            }
        };
        match strong_amalgam(&input) {
            Err(e) => {
                ok = false;
                witness = e.to_string();
                break;
            }
            Ok(d) => {
                if !d.validate().pass()
                    || !d.restricts_to(&left)
                    || !d.restricts_to(&right)
                    || cross_class_leak(&base, &left, &right, &d)
                {
                    ok = false;
                    witness = d.to_tn();
                    break;
                }
            }
        }
    }
    report.push(Check::from_bool(
        "sap-random",
        "random amalgams validate, restrict exactly, and merge classes only through the base",
        ok,
        witness,
    ));
    report.push(Check::from_bool(
        "size-bound",
        "|<X>| <= k^(n+1) + k on random generating sets",
        bound_ok,
        bound_witness,
    ));
    report
}

fn hp_and_bound(n: usize, corpus: &[FinStructure]) -> (Check, Check) {
    let mut hp_ok = true;
    let mut hp_witness = String::new();
    let mut bound_ok = true;
    let mut bound_witness = String::new();
    'hp: for s in corpus {
        let ids: Vec<ElemId> = s.ids().collect();
        for mask in 0..(1u64 << ids.len().min(12)) {
            let xs: BTreeSet<ElemId> = ids
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &id)| id)
                .collect();
            let k = xs.len();
            let sub = match s.substructure(&xs) {
                Ok(sub) => sub,
                Err(e) => {
                    hp_ok = false;
                    hp_witness = e.to_string();
                    break 'hp;
                }
            };
            if !sub.validate().pass() {
                hp_ok = false;
                hp_witness = sub.to_tn();
                break 'hp;
            }
            if sub.len() > k.pow(n as u32 + 1) + k {
                bound_ok = false;
                bound_witness = format!("|<X>| = {} for |X| = {k}", sub.len());
            }
        }
    }
    (
        Check::from_bool(
            "hp",
            "generated substructures are models of the class",
            hp_ok,
            hp_witness,
        ),
        Check::from_bool(
            "size-bound",
            "|<X>| <= k^(n+1) + k for every generating set of size k",
            bound_ok,
            bound_witness,
        ),
    )
}

/// Runs one amalgamation instance and returns a violation witness, if any.
fn sap_instance(
    base: &FinStructure,
    left: &FinStructure,
    c: &FinStructure,
    emb: &BaseMap,
) -> Option<String> {
    // Relabel the right factor so the embedded base sits identically and
    // everything else is fresh.
    let mut rename = BaseMap::new();
    let mut next = left.fresh_id_base().max(c.fresh_id_base());
    for id in c.ids() {
        match emb.preimage(id) {
            Some(pre) => {
                rename.insert(id, pre);
            }
            None => {
                rename.insert(id, ElemId(next));
                next += 1;
            }
        }
    }
    let right = match c.relabel(&rename) {
        Ok(r) => r,
        Err(e) => return Some(e.to_string()),
    };
    let input = match AmalgamInput::new(base.clone(), left.clone(), right.clone()) {
        Ok(i) => i,
        Err(e) => return Some(e.to_string()),
    };
    let d = match strong_amalgam(&input) {
        Ok(d) => d,
        Err(e) => return Some(e.to_string()),
    };
    if !d.validate().pass() {
        return Some(format!("amalgam fails validation:\n{}", d.to_tn()));
    }
    if !d.restricts_to(left) {
        return Some("restriction to the left factor differs".to_string());
    }
    if !d.restricts_to(&right) {
        return Some("restriction to the right factor differs".to_string());
    }
    if cross_class_leak(base, left, &right, &d) {
        return Some("classes of the two sides merge outside the base".to_string());
    }
    None
}

/// True when some left-side and right-side elements are related in `d`
/// without a common base-class witness.
fn cross_class_leak(
    base: &FinStructure,
    left: &FinStructure,
    right: &FinStructure,
    d: &FinStructure,
) -> bool {
    for x in left.o_elems() {
        if base.contains(x) {
            continue;
        }
        for y in right.o_elems() {
            if base.contains(y) {
                continue;
            }
            if d.e_rel(x, y) {
                let through = base.o_elems().any(|a| d.e_rel(a, x) && d.e_rel(a, y));
                if !through {
                    return true;
                }
            }
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_class_base() -> FinStructure {
        let mut b = StructureBuilder::new(1);
        b.add(ElemId(0), Sort::O).unwrap();
        b.add(ElemId(1), Sort::O).unwrap();
        b.add(ElemId(2), Sort::F).unwrap();
        b.set_eval(vec![ElemId(2)], ElemId(0), ElemId(0)).unwrap();
        b.set_eval(vec![ElemId(2)], ElemId(1), ElemId(1)).unwrap();
        b.build().unwrap()
    }

    #[test]
    fn degenerate_amalgam_is_the_base() {
        let a = two_class_base();
        let input = AmalgamInput::new(a.clone(), a.clone(), a.clone()).unwrap();
        let d = strong_amalgam(&input).unwrap();
        assert_eq!(d, a);
    }

    #[test]
    fn amalgam_merges_only_through_base() {
        let mut rng = Rng::new(5);
        for _ in 0..500 {
            let n = 1 + rng.below(2);
            let o = 1 + rng.below(3);
            let base = random_structure(n, o, rng.below(3), 1 + rng.below(o), rng.next_u64())
                .unwrap();
            let mut grow = |hi: u32| {
                let spec = crate::structure::ExtensionSpec {
                    extra_o: rng.below(3),
                    extra_f: rng.below(2),
                    new_classes: rng.below(2),
                };
                let s = crate::structure::random_extension(&base, spec, &mut rng).unwrap();
                let mut shift = BaseMap::new();
                let mut next = hi;
                for id in s.ids() {
                    if !base.contains(id) {
                        shift.insert(id, ElemId(next));
                        next += 1;
                    }
                }
                s.relabel(&shift).unwrap()
            };
            let left = grow(100);
            let right = grow(200);
            let input = AmalgamInput::new(base.clone(), left.clone(), right.clone()).unwrap();
            let d = strong_amalgam(&input).unwrap();
            assert!(d.validate().pass());
            assert!(d.restricts_to(&left));
            assert!(d.restricts_to(&right));
            assert!(!cross_class_leak(&base, &left, &right, &d));
        }
    }

    #[test]
    fn amalgam_is_symmetric_up_to_isomorphism() {
        let mut rng = Rng::new(9);
        for _ in 0..50 {
            let base = random_structure(1, 2, 1, 1, rng.next_u64()).unwrap();
            let mut grow = |hi: u32| {
                let spec = crate::structure::ExtensionSpec {
                    extra_o: 1 + rng.below(2),
                    extra_f: rng.below(2),
                    new_classes: rng.below(2),
                };
                let s = crate::structure::random_extension(&base, spec, &mut rng).unwrap();
                let mut shift = BaseMap::new();
                let mut next = hi;
                for id in s.ids() {
                    if !base.contains(id) {
                        shift.insert(id, ElemId(next));
                        next += 1;
                    }
                }
                s.relabel(&shift).unwrap()
            };
            let left = grow(100);
            let right = grow(200);
            let d1 = strong_amalgam(
                &AmalgamInput::new(base.clone(), left.clone(), right.clone()).unwrap(),
            )
            .unwrap();
            let d2 = strong_amalgam(
                &AmalgamInput::new(base.clone(), right.clone(), left.clone()).unwrap(),
            )
            .unwrap();
            // The two orders agree up to isomorphism over the base.
            let partial = BaseMap::identity_on(&base.id_set());
            assert!(
                !embeddings(&d1, &d2, &partial).is_empty(),
                "no isomorphism over the base"
            );
        }
    }

    #[test]
    fn joint_embed_examples() {
        // Two singleton object structures give two inequivalent points.
        let mut b = StructureBuilder::new(1);
        b.add(ElemId(0), Sort::O).unwrap();
        let s1 = b.build().unwrap();
        let d = joint_embed(&s1, &s1).unwrap();
        assert_eq!(d.o_elems().count(), 2);
        let os: Vec<ElemId> = d.o_elems().collect();
        assert!(!d.e_rel(os[0], os[1]));
        // Empty left factor returns the right one.
        let empty = FinStructure::empty(1);
        assert_eq!(joint_embed(&empty, &s1).unwrap(), s1);
        // Outputs validate on random pairs.
        let mut rng = Rng::new(11);
        for _ in 0..200 {
            let x = random_structure(1, 1 + rng.below(3), rng.below(3), 1, rng.next_u64())
                .unwrap();
            let y = random_structure(1, 1 + rng.below(3), rng.below(3), 1, rng.next_u64())
                .unwrap();
            let d = joint_embed(&x, &y).unwrap();
            assert!(d.validate().pass());
            assert!(d.restricts_to(&x));
        }
        // Arity mismatch is an error.
        let s2 = random_structure(2, 1, 1, 1, 0).unwrap();
        assert!(matches!(
            joint_embed(&s1, &s2),
            Err(AmalgamError::ArityMismatch(1, 2))
        ));
    }

    #[test]
    fn enumerate_class_small_counts() {
        // Size 0: the empty structure.
        assert_eq!(enumerate_class(1, 0).len(), 1);
        // Size 1: one object or one function element.
        assert_eq!(enumerate_class(1, 1).len(), 2);
        // Size 2: OO same class, OO distinct, OF, FO, FF.
        assert_eq!(enumerate_class(1, 2).len(), 5);
        for s in enumerate_class(1, 3) {
            assert!(s.validate().pass());
        }
    }

    #[test]
    fn exhaustive_cap_guard() {
        assert!(matches!(
            check_fraisse(1, 5, FraisseMode::Exhaustive),
            Err(AmalgamError::CapTooLarge(5))
        ));
    }

    #[test]
    fn fault_injection_fails_with_witness() {
        // A corpus containing a non-model is rejected up front.
        let mut b = StructureBuilder::new(1);
        b.add(ElemId(0), Sort::O).unwrap();
        b.add(ElemId(1), Sort::O).unwrap();
        b.add(ElemId(2), Sort::F).unwrap();
        b.set_eval(vec![ElemId(2)], ElemId(0), ElemId(1)).unwrap();
        b.set_eval(vec![ElemId(2)], ElemId(1), ElemId(1)).unwrap();
        let broken = b.build().unwrap();
        assert!(!broken.validate().pass());
        let report = exhaustive_report(1, &[broken]);
        assert!(!report.pass());
        let fail = report.failures().next().unwrap();
        assert_eq!(fail.name, "corpus-valid");
        assert!(fail.witness.is_some());
    }
}
