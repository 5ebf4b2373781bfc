//! Embedding search between finite selector structures.
//!
//! An embedding preserves sorts, equality, the class relation and its
//! negation, and the eval table. [`embeddings`] backtracks over candidate
//! images in ascending id order, so the result order is deterministic.
//! [`extend_generated_map`] handles the common special case where the
//! domain is generated by the preassigned elements: there the extension is
//! forced, no search needed.

use std::collections::BTreeSet;

use super::{tuples_over, BaseMap, ElemId, FinStructure, Sort};

/// Checks every structural constraint between already-mapped elements that
/// involves `last`.
fn consistent_so_far(
    a: &FinStructure,
    b: &FinStructure,
    map: &BaseMap,
    last: ElemId,
) -> bool {
    let last_img = map.get(last).unwrap();
    if a.sort_of(last) != b.sort_of(last_img) {
        return false;
    }
    if a.sort_of(last) == Some(Sort::O) {
        for (x, y) in map.iter() {
            if a.sort_of(x) == Some(Sort::O) && a.e_rel(x, last) != b.e_rel(y, last_img) {
                return false;
            }
        }
    }
    // Eval entries fully inside the mapped set must commute.
    let mapped: Vec<ElemId> = map.domain().into_iter().collect();
    let fs: Vec<ElemId> = mapped
        .iter()
        .copied()
        .filter(|&e| a.sort_of(e) == Some(Sort::F))
        .collect();
    let os: Vec<ElemId> = mapped
        .iter()
        .copied()
        .filter(|&e| a.sort_of(e) == Some(Sort::O))
        .collect();
    for t in tuples_over(&fs, a.n()) {
        for &o in &os {
            if !t.contains(&last) && o != last {
                continue;
            }
            let v = match a.eval_get(&t, o) {
                Some(v) => v,
                None => continue,
            };
            // The value must be mapped consistently when it is in the
            // domain; when it is not yet mapped, the image value must be
            // available as its image later, so only check once mapped.
            let img_t = map.apply_tuple(&t).unwrap();
            let img_o = map.get(o).unwrap();
            let img_v = match b.eval_get(&img_t, img_o) {
                Some(w) => w,
                None => return false,
            };
            if let Some(mv) = map.get(v) {
                if mv != img_v {
                    return false;
                }
            } else if let Some(pre) = map.preimage(img_v) {
                // img_v is taken by something other than v.
                if pre != v {
                    return false;
                }
            }
        }
    }
    true
}

/// Full verification of an embedding (used on completed assignments).
fn is_embedding(a: &FinStructure, b: &FinStructure, map: &BaseMap) -> bool {
    for (x, y) in map.iter() {
        if a.sort_of(x) != b.sort_of(y) {
            return false;
        }
    }
    let os: Vec<ElemId> = a.o_elems().collect();
    for (i, &x) in os.iter().enumerate() {
        for &y in &os[i + 1..] {
            if a.e_rel(x, y) != b.e_rel(map.get(x).unwrap(), map.get(y).unwrap()) {
                return false;
            }
        }
    }
    for t in a.f_tuples() {
        for &o in &os {
            let v = match a.eval_get(&t, o) {
                Some(v) => v,
                None => return false,
            };
            let img = b.eval_get(&map.apply_tuple(&t).unwrap(), map.get(o).unwrap());
            if img != map.get(v) {
                return false;
            }
        }
    }
    true
}

fn search(
    a: &FinStructure,
    b: &FinStructure,
    order: &[ElemId],
    pos: usize,
    map: &mut BaseMap,
    out: &mut Vec<BaseMap>,
    stop_at_first: bool,
) -> bool {
    if pos == order.len() {
        if is_embedding(a, b, map) {
            out.push(map.clone());
            return stop_at_first;
        }
        return false;
    }
    let x = order[pos];
    if map.contains(x) {
        return search(a, b, order, pos + 1, map, out, stop_at_first);
    }
    let sort = a.sort_of(x).unwrap();
    let candidates: Vec<ElemId> = b
        .ids()
        .filter(|&y| b.sort_of(y) == Some(sort))
        .collect();
    for y in candidates {
        let mut next = map.clone();
        if !next.insert(x, y) {
            continue;
        }
        if !consistent_so_far(a, b, &next, x) {
            continue;
        }
        let done = search(a, b, order, pos + 1, &mut next, out, stop_at_first);
        if done {
            return true;
        }
    }
    false
}

/// All extensions of `partial` to full embeddings of `a` into `b`, in a
/// deterministic order. The partial map must already be sort-preserving
/// and injective; violations yield an empty result.
pub fn embeddings(a: &FinStructure, b: &FinStructure, partial: &BaseMap) -> Vec<BaseMap> {
    let mut out = Vec::new();
    let mut seed = partial.clone();
    for (x, _) in partial.iter() {
        if !a.contains(x) {
            return out;
        }
        if !consistent_so_far(a, b, &seed, x) {
            return out;
        }
    }
    let order: Vec<ElemId> = a.ids().collect();
    search(a, b, &order, 0, &mut seed, &mut out, false);
    out
}

/// Fast existence check.
pub fn exists_embedding(a: &FinStructure, b: &FinStructure, partial: &BaseMap) -> bool {
    let mut out = Vec::new();
    let mut seed = partial.clone();
    for (x, _) in partial.iter() {
        if !a.contains(x) || !consistent_so_far(a, b, &seed, x) {
            return false;
        }
    }
    let order: Vec<ElemId> = a.ids().collect();
    search(a, b, &order, 0, &mut seed, &mut out, true);
    !out.is_empty()
}

/// Extends a partial map to the substructure of `a` generated by its
/// domain. Values of eval force the extension, so the result is unique:
/// `None` when the forced extension breaks injectivity, sorts, classes,
/// or eval commutation.
pub fn extend_generated_map(
    a: &FinStructure,
    b: &FinStructure,
    partial: &BaseMap,
) -> Option<BaseMap> {
    let mut map = partial.clone();
    for (x, y) in map.iter() {
        if a.sort_of(x).is_none() || a.sort_of(x) != b.sort_of(y) {
            return None;
        }
    }
    loop {
        let fs: Vec<ElemId> = map
            .domain()
            .into_iter()
            .filter(|&e| a.sort_of(e) == Some(Sort::F))
            .collect();
        let os: Vec<ElemId> = map
            .domain()
            .into_iter()
            .filter(|&e| a.sort_of(e) == Some(Sort::O))
            .collect();
        let mut grew = false;
        for t in tuples_over(&fs, a.n()) {
            for &o in &os {
                let v = a.eval_get(&t, o)?;
                let img = b.eval_get(&map.apply_tuple(&t).unwrap(), map.get(o).unwrap())?;
                match map.get(v) {
                    Some(w) => {
                        if w != img {
                            return None;
                        }
                    }
                    None => {
                        if !map.insert(v, img) {
                            return None;
                        }
                        grew = true;
                    }
                }
            }
        }
        if !grew {
            break;
        }
    }
    // The closure is defined; verify it is an isomorphism onto its image.
    let dom: BTreeSet<ElemId> = map.domain();
    let os: Vec<ElemId> = dom
        .iter()
        .copied()
        .filter(|&e| a.sort_of(e) == Some(Sort::O))
        .collect();
    for (x, y) in map.iter() {
        if a.sort_of(x) != b.sort_of(y) {
            return None;
        }
    }
    for (i, &x) in os.iter().enumerate() {
        for &y in &os[i..] {
            if a.e_rel(x, y) != b.e_rel(map.get(x).unwrap(), map.get(y).unwrap()) {
                return None;
            }
        }
    }
    let fs: Vec<ElemId> = dom
        .iter()
        .copied()
        .filter(|&e| a.sort_of(e) == Some(Sort::F))
        .collect();
    for t in tuples_over(&fs, a.n()) {
        for &o in &os {
            let v = a.eval_get(&t, o)?;
            let img = b.eval_get(&map.apply_tuple(&t).unwrap(), map.get(o).unwrap())?;
            if map.get(v) != Some(img) {
                return None;
            }
        }
    }
    Some(map)
}
