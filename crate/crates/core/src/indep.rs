//! Definable closure, the intersection independence relation, generic
//! extensions, finite Morley sequences, and dividing checks along them.
//!
//! Definable closure in these structures is the generated substructure.
//! The independence relation holds between tuples `a` and `b` over a set
//! `C` when both the element intersection and the class intersection of
//! `dcl(aC)` and `dcl(bC)` fall inside `dcl(C)`.
//!
//! A generic extension adds fresh elements realizing the canonical
//! invariant behavior over an eval-closed base: new function elements fix
//! nothing outside the base and take fresh values on classes the base does
//! not see, and new object elements sit in fresh classes moved by nothing
//! outside the base. Iterating the construction over a growing ambient
//! (base fixed) yields a finite Morley-style sequence; dividing of a
//! template along such a sequence is measured by its least inconsistency
//! degree.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::logic::Template;
use crate::oracle::{consistent_set, least_inconsistency_degree, OracleError};
use crate::report::{Check, Report};
use crate::structure::{
    ElemId, FinStructure, Sort, SortedTuple, StructureBuilder, StructureError,
};

#[derive(Debug, Error)]
pub enum IndepError {
    #[error("generic extension is implemented for arity 1, ambient has {0}")]
    UnsupportedArity(usize),
    #[error("base is not eval-closed: missing {0}")]
    BaseNotClosed(ElemId),
    #[error("element {0} is not in the ambient structure")]
    UnknownElement(ElemId),
    #[error("parameter {0} lies in the base; its sequence is constant")]
    ParamInBase(ElemId),
    #[error("object parameter {0} is not the fixed point of base functions on its class")]
    NotGenericOverBase(ElemId),
    #[error("class anchor {0} does not meet the base")]
    AnchorOffBase(ElemId),
    #[error("sequence length is out of range")]
    BadLength,
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

/// Definable closure: the generated substructure's id-set.
pub fn dcl(
    ambient: &FinStructure,
    xs: &BTreeSet<ElemId>,
) -> Result<BTreeSet<ElemId>, StructureError> {
    ambient.generated(xs)
}

/// An independence query between two tuples over a parameter set.
#[derive(Debug, Clone)]
pub struct IndepQuery {
    pub a: SortedTuple,
    pub b: SortedTuple,
    pub over: BTreeSet<ElemId>,
}

/// Checks both defining clauses of the independence relation. A failing
/// check names the offending element or class.
pub fn indep_star(ambient: &FinStructure, query: &IndepQuery) -> Result<Report, StructureError> {
    let mut ac: BTreeSet<ElemId> = query.over.clone();
    ac.extend(query.a.ids().iter().copied());
    let mut bc: BTreeSet<ElemId> = query.over.clone();
    bc.extend(query.b.ids().iter().copied());
    let dcl_ac = dcl(ambient, &ac)?;
    let dcl_bc = dcl(ambient, &bc)?;
    let dcl_c = dcl(ambient, &query.over)?;

    let mut report = Report::new();

    let offender = dcl_ac.intersection(&dcl_bc).find(|id| !dcl_c.contains(id));
    report.push(Check::from_bool(
        "dcl-intersection",
        "dcl(aC) & dcl(bC) <= dcl(C)",
        offender.is_none(),
        offender
            .map(|id| format!("element {id}"))
            .unwrap_or_default(),
    ));

    let o_part = |xs: &BTreeSet<ElemId>| -> BTreeSet<ElemId> {
        xs.iter()
            .copied()
            .filter(|&id| ambient.sort_of(id) == Some(Sort::O))
            .collect()
    };
    let reps_ac = ambient.class_reps(&o_part(&dcl_ac))?;
    let reps_bc = ambient.class_reps(&o_part(&dcl_bc))?;
    let reps_c = ambient.class_reps(&o_part(&dcl_c))?;
    let off_class = reps_ac
        .intersection(&reps_bc)
        .find(|rep| !reps_c.contains(rep));
    report.push(Check::from_bool(
        "class-intersection",
        "dcl(aC)/E & dcl(bC)/E <= dcl(C)/E",
        off_class.is_none(),
        off_class
            .map(|rep| format!("class of {rep}"))
            .unwrap_or_default(),
    ));

    Ok(report)
}

/// Convenience wrapper returning a plain boolean.
pub fn independent(
    ambient: &FinStructure,
    a: &SortedTuple,
    b: &SortedTuple,
    over: &BTreeSet<ElemId>,
) -> Result<bool, StructureError> {
    Ok(indep_star(
        ambient,
        &IndepQuery {
            a: a.clone(),
            b: b.clone(),
            over: over.clone(),
        },
    )?
    .pass())
}

/// One coordinate of a generic tuple.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GenericVar {
    /// A fresh function element.
    F,
    /// A fresh object element in a fresh class.
    OFresh,
    /// A fresh object element joining the class of a base element.
    OInClass(ElemId),
}

/// A request for a generic tuple over an eval-closed base.
#[derive(Debug, Clone)]
pub struct GenericSpec {
    pub base: BTreeSet<ElemId>,
    pub vars: Vec<GenericVar>,
}

impl GenericSpec {
    fn check(&self, ambient: &FinStructure) -> Result<(), IndepError> {
        if ambient.n() != 1 {
            return Err(IndepError::UnsupportedArity(ambient.n()));
        }
        for &id in &self.base {
            if !ambient.contains(id) {
                return Err(IndepError::UnknownElement(id));
            }
        }
        let closed = ambient.generated(&self.base)?;
        if let Some(&extra) = closed.difference(&self.base).next() {
            return Err(IndepError::BaseNotClosed(extra));
        }
        for v in &self.vars {
            if let GenericVar::OInClass(anchor) = v {
                if ambient.sort_of(*anchor) != Some(Sort::O) {
                    return Err(IndepError::UnknownElement(*anchor));
                }
                if !self.base.contains(anchor) {
                    return Err(IndepError::AnchorOffBase(*anchor));
                }
            }
        }
        Ok(())
    }
}

/// Grows the ambient by a generic tuple over the spec's base.
///
/// For each ambient class `K`: a new function element maps `K` to its
/// least base member when `K` meets the base, and to a fresh member of `K`
/// otherwise (distinct across the new functions). A fresh-class object
/// element is fixed by base functions and moved to fresh classmates by all
/// others; a base-class object element is a fresh member of its class,
/// whose eval behavior the base already determines.
pub fn generic_extend(
    ambient: &FinStructure,
    spec: &GenericSpec,
) -> Result<(FinStructure, SortedTuple), IndepError> {
    spec.check(ambient)?;
    let mut next_id = ambient.fresh_id_base();
    let mut alloc = || {
        let id = ElemId(next_id);
        next_id += 1;
        id
    };

    let mut b = StructureBuilder::extending(ambient);
    let mut tuple: Vec<ElemId> = Vec::new();
    let mut new_fs: Vec<ElemId> = Vec::new();
    let mut fresh_founders: Vec<ElemId> = Vec::new();
    for v in &spec.vars {
        let id = alloc();
        tuple.push(id);
        match v {
            GenericVar::F => {
                b.add(id, Sort::F)?;
                new_fs.push(id);
            }
            GenericVar::OFresh => {
                b.add(id, Sort::O)?;
                fresh_founders.push(id);
            }
            GenericVar::OInClass(anchor) => {
                b.add(id, Sort::O)?;
                b.relate(*anchor, id)?;
            }
        }
    }

    // Entries to define: (function element, class anchor, value), where
    // `None` requests a fresh image in that class. Everything not listed
    // keeps its ambient value.
    let ambient_classes = ambient.classes();
    let ambient_fs: Vec<ElemId> = ambient.f_elems().collect();
    let mut entries: Vec<(ElemId, ElemId, Option<ElemId>)> = Vec::new();
    for &x in &new_fs {
        for (&rep, members) in &ambient_classes {
            let base_member = members.iter().copied().find(|m| spec.base.contains(m));
            entries.push((x, rep, base_member));
        }
    }
    for &y in &fresh_founders {
        for &f in &ambient_fs {
            if spec.base.contains(&f) {
                entries.push((f, y, Some(y)));
            } else {
                entries.push((f, y, None));
            }
        }
        for &x in &new_fs {
            entries.push((x, y, None));
        }
    }

    // Allocate requested images in deterministic entry order.
    let mut resolved: Vec<(ElemId, ElemId, ElemId)> = Vec::new();
    for (f, anchor, value) in entries {
        let v = match value {
            Some(v) => v,
            None => {
                let img = alloc();
                b.add(img, Sort::O)?;
                b.relate(anchor, img)?;
                img
            }
        };
        resolved.push((f, anchor, v));
    }

    // Materialize classwise: ambient entries first (they cover fresh
    // classmates of ambient classes by constancy), then the new entries.
    let probe = b.build_totalized()?;
    let mut b = StructureBuilder::extending(&probe);
    let grown_classes = probe.classes();
    for &f in &ambient_fs {
        for (&rep, members) in &grown_classes {
            if let Some(v) = ambient.eval_get(&[f], rep) {
                for &m in members {
                    b.set_eval(vec![f], m, v)?;
                }
            }
        }
    }
    for (f, anchor, v) in resolved {
        for &m in &grown_classes[&anchor] {
            b.set_eval(vec![f], m, v)?;
        }
    }
    let grown = b.build()?;
    debug_assert!(grown.validate().pass());
    debug_assert!(grown.restricts_to(ambient));
    Ok((grown, SortedTuple::new(tuple)))
}

/// A sequence of tuples, each generic over the base together with
/// everything before it. Returns the final grown ambient and the tuples.
pub fn morley_sequence(
    ambient: &FinStructure,
    spec: &GenericSpec,
    len: usize,
) -> Result<(FinStructure, Vec<SortedTuple>), IndepError> {
    if len == 0 {
        return Err(IndepError::BadLength);
    }
    let mut current = ambient.clone();
    let mut tuples = Vec::with_capacity(len);
    for _ in 0..len {
        let (grown, tuple) = generic_extend(&current, spec)?;
        current = grown;
        tuples.push(tuple);
    }
    Ok((current, tuples))
}

/// The generic spec a parameter tuple would realize over a base: function
/// coordinates become fresh function variables; object coordinates keep
/// their class when it meets the base and are fresh-class otherwise.
///
/// Every coordinate must lie outside the base, and fresh-class object
/// coordinates must be the fixed point of base functions on their class
/// (the canonical generic choice; the derived sequence then realizes the
/// same behavior).
pub fn derive_generic_spec(
    ambient: &FinStructure,
    b: &SortedTuple,
    base: &BTreeSet<ElemId>,
) -> Result<GenericSpec, IndepError> {
    let mut vars = Vec::new();
    for &id in b.ids() {
        let sort = ambient.sort_of(id).ok_or(IndepError::UnknownElement(id))?;
        if base.contains(&id) {
            return Err(IndepError::ParamInBase(id));
        }
        match sort {
            Sort::F => vars.push(GenericVar::F),
            Sort::O => {
                let members = ambient.class_members(id);
                let base_member = members.iter().copied().find(|m| base.contains(m));
                match base_member {
                    Some(anchor) => vars.push(GenericVar::OInClass(anchor)),
                    None => {
                        for f in ambient.f_elems() {
                            if base.contains(&f) && ambient.eval_get(&[f], id) != Some(id) {
                                return Err(IndepError::NotGenericOverBase(id));
                            }
                        }
                        vars.push(GenericVar::OFresh);
                    }
                }
            }
        }
    }
    Ok(GenericSpec {
        base: base.clone(),
        vars,
    })
}

/// Outcome of a dividing check along a generated generic sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DividingOutcome {
    pub len: usize,
    /// Whether all instances along the sequence are jointly satisfiable.
    pub consistent: bool,
    /// Least `k <= len` at which the instances are `k`-inconsistent.
    pub least_k: Option<usize>,
}

impl DividingOutcome {
    pub fn to_report(&self) -> Report {
        let mut r = Report::new();
        r.push(Check::from_bool(
            "sequence-consistency",
            format!(
                "the {} instances along the generic sequence are jointly satisfiable",
                self.len
            ),
            self.consistent,
            match self.least_k {
                Some(k) => format!("{k}-inconsistent"),
                None => String::new(),
            },
        ));
        r
    }
}

/// Instantiates the template along a generic sequence derived from `b`
/// over `base` and measures consistency and the least inconsistency
/// degree.
pub fn kim_divides(
    ambient: &FinStructure,
    template: &Template,
    b: &SortedTuple,
    base: &BTreeSet<ElemId>,
    len: usize,
) -> Result<DividingOutcome, IndepError> {
    if len < 2 {
        return Err(IndepError::BadLength);
    }
    let spec = derive_generic_spec(ambient, b, base)?;
    let (grown, tuples) = morley_sequence(ambient, &spec, len)?;
    let consistent = consistent_set(&grown, std::slice::from_ref(template), &tuples)?;
    let least_k = least_inconsistency_degree(&grown, template, &tuples)?;
    Ok(DividingOutcome {
        len,
        consistent,
        least_k,
    })
}
