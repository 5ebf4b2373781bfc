//! Seeded random structures and random extensions.

use super::{ElemId, FinStructure, Sort, StructureBuilder, StructureError};
use crate::rng::Rng;

/// A random valid structure with the requested counts. Classes are
/// guaranteed nonempty, eval respects the selector axioms by construction,
/// and the output is deterministic per seed.
pub fn random_structure(
    n: usize,
    o_count: usize,
    f_count: usize,
    classes: usize,
    seed: u64,
) -> Result<FinStructure, StructureError> {
    if n == 0 {
        return Err(StructureError::BadN);
    }
    if classes > o_count || (o_count > 0 && classes == 0) {
        return Err(StructureError::Infeasible(format!(
            "{classes} classes for {o_count} object elements"
        )));
    }
    let mut rng = Rng::new(seed);
    let mut b = StructureBuilder::new(n);
    let o_ids: Vec<ElemId> = (0..o_count as u32).map(ElemId).collect();
    let f_ids: Vec<ElemId> = (o_count as u32..(o_count + f_count) as u32)
        .map(ElemId)
        .collect();
    for &o in &o_ids {
        b.add(o, Sort::O)?;
    }
    for &f in &f_ids {
        b.add(f, Sort::F)?;
    }
    // First `classes` objects anchor distinct classes; the rest join one
    // uniformly at random.
    for &o in o_ids.iter().skip(classes) {
        let anchor = o_ids[rng.below(classes)];
        b.relate(anchor, o)?;
    }
    let mut s = b.build_totalized()?;
    // Re-draw each eval entry uniformly from the class.
    let mut b = StructureBuilder::extending(&s);
    for t in s.f_tuples() {
        for (_, members) in s.classes() {
            let v = *rng.choose(&members);
            for &m in &members {
                b.set_eval(t.clone(), m, v)?;
            }
        }
    }
    s = b.build()?;
    debug_assert!(s.validate().pass());
    Ok(s)
}

/// How to grow a structure randomly.
#[derive(Debug, Clone, Copy)]
pub struct ExtensionSpec {
    pub extra_o: usize,
    pub extra_f: usize,
    /// Upper bound on new classes; the actual count depends on the draw.
    pub new_classes: usize,
}

/// A random extension of `s` on fresh ids. The result restricts to `s`
/// exactly: old entries are untouched, new members of old classes take the
/// old class value, and only genuinely new (tuple, class) entries are
/// drawn at random.
pub fn random_extension(
    s: &FinStructure,
    spec: ExtensionSpec,
    rng: &mut Rng,
) -> Result<FinStructure, StructureError> {
    let mut b = StructureBuilder::extending(s);
    let base = s.fresh_id_base();
    let new_o: Vec<ElemId> = (0..spec.extra_o as u32).map(|i| ElemId(base + i)).collect();
    let new_f: Vec<ElemId> = (0..spec.extra_f as u32)
        .map(|i| ElemId(base + spec.extra_o as u32 + i))
        .collect();
    for &o in &new_o {
        b.add(o, Sort::O)?;
    }
    for &f in &new_f {
        b.add(f, Sort::F)?;
    }
    // Class placement: join an existing class or found a new one, staying
    // within the new-class budget.
    let old_reps: Vec<ElemId> = s.classes().keys().copied().collect();
    let mut founders: Vec<ElemId> = Vec::new();
    for &o in &new_o {
        let mut choices: Vec<Option<ElemId>> = old_reps
            .iter()
            .chain(founders.iter())
            .map(|&r| Some(r))
            .collect();
        if founders.len() < spec.new_classes || choices.is_empty() {
            choices.push(None);
        }
        match *rng.choose(&choices) {
            Some(anchor) => {
                b.relate(anchor, o)?;
            }
            None => founders.push(o),
        }
    }
    // Fill new entries classwise at random; keep old entries authoritative
    // for old (tuple, class) pairs.
    let probe = b.build_totalized()?;
    let mut b = StructureBuilder::extending(&probe);
    let old_tuples = s.f_tuples();
    for t in probe.f_tuples() {
        let is_old_tuple = old_tuples.contains(&t);
        for (rep, members) in probe.classes() {
            let class_is_old = members.iter().any(|m| s.contains(*m));
            if is_old_tuple && class_is_old {
                // Old value propagates by constancy; build_totalized
                // already did this.
                continue;
            }
            let _ = rep;
            let v = *rng.choose(&members);
            for &m in &members {
                b.set_eval(t.clone(), m, v)?;
            }
        }
    }
    let out = b.build()?;
    debug_assert!(out.validate().pass());
    debug_assert!(out.restricts_to(s));
    Ok(out)
}
