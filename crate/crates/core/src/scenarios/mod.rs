//! End-to-end verifications of specific finite configurations.
//!
//! Each scenario builds its structures from scratch, then re-verifies
//! every claim through the raw primitives (the validator, the oracle, the
//! independence checks) rather than trusting intermediate construction
//! state. Scenarios are deterministic per seed and report through
//! [`ScenarioResult`].

use std::collections::BTreeSet;

use thiserror::Error;

use crate::amalgam::AmalgamError;
use crate::indep::{dcl, indep_star, IndepError, IndepQuery};
use crate::logic::{Literal, LogicError, Template, Term};
use crate::oracle::{consistent_set, k_inconsistent, OracleError};
use crate::report::{Check, Report};
use crate::rng::Rng;
use crate::structure::{
    extend_generated_map, random_extension, random_structure, BaseMap, ElemId, ExtensionSpec,
    FinStructure, Sort, SortedTuple, StructureBuilder, StructureError,
};

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("parameter out of range: {0}")]
    BadParam(String),
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Indep(#[from] IndepError),
    #[error(transparent)]
    Amalgam(#[from] AmalgamError),
    #[error(transparent)]
    Logic(#[from] LogicError),
}

/// Outcome of one scenario: an id and the structured report.
#[derive(Debug, Clone)]
pub struct ScenarioResult {
    pub scenario: String,
    pub report: Report,
}

impl ScenarioResult {
    fn new(id: &str, report: Report) -> Self {
        ScenarioResult {
            scenario: id.to_string(),
            report,
        }
    }

    pub fn pass(&self) -> bool {
        self.report.pass()
    }
}

/// Shared knobs for the scenario suite.
#[derive(Debug, Clone, Copy)]
pub struct ScenarioConfig {
    pub seed: u64,
    /// Sequence length for dividing checks.
    pub len: usize,
    /// Largest array dimension for the array scenario.
    pub m: usize,
    /// Random instances for the amalgamation scenario.
    pub samples: usize,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        ScenarioConfig {
            seed: 7,
            len: 4,
            m: 3,
            samples: 200,
        }
    }
}

/// All scenario ids, in the order `run_all` executes them.
pub const SCENARIO_IDS: &[&str] = &[
    "sop1-config",
    "not-cosimple",
    "forking-not-dividing",
    "no-universal-morley",
    "transitivity-failure",
    "independence-amalgam",
    "local-character",
];

/// Runs every scenario with the given configuration.
pub fn run_all(cfg: &ScenarioConfig) -> Result<Vec<ScenarioResult>, ScenarioError> {
    Ok(vec![
        verify_sop1_config()?,
        verify_not_cosimple_suite(cfg.m)?,
        verify_forking_not_dividing(cfg.len)?,
        verify_no_universal_morley(cfg.len)?,
        verify_transitivity_failure()?,
        verify_independence_amalgam(cfg.samples, cfg.seed)?,
        verify_local_character(cfg.seed)?,
    ])
}

/// Runs a single scenario by id.
pub fn run_one(id: &str, cfg: &ScenarioConfig) -> Result<ScenarioResult, ScenarioError> {
    match id {
        "sop1-config" => verify_sop1_config(),
        "not-cosimple" => verify_not_cosimple_suite(cfg.m),
        "forking-not-dividing" => verify_forking_not_dividing(cfg.len),
        "no-universal-morley" => verify_no_universal_morley(cfg.len),
        "transitivity-failure" => verify_transitivity_failure(),
        "independence-amalgam" => verify_independence_amalgam(cfg.samples, cfg.seed),
        "local-character" => verify_local_character(cfg.seed),
        other => Err(ScenarioError::BadParam(format!("unknown scenario {other:?}"))),
    }
}

// ---------------------------------------------------------------------
// Array configurations
// ---------------------------------------------------------------------

/// Checks a two-column array against the three configuration clauses:
/// row entries have equal types over the base plus all earlier rows, the
/// left column is jointly satisfiable, and the right column is
/// `k`-inconsistent.
pub fn sop1_config_check(
    ambient: &FinStructure,
    base: &BTreeSet<ElemId>,
    template: &Template,
    rows: &[(SortedTuple, SortedTuple)],
    k: usize,
) -> Result<ScenarioResult, ScenarioError> {
    let mut report = Report::new();
    let valid = ambient.validate();
    report.push(Check::from_bool(
        "ambient-valid",
        "the ambient structure satisfies the selector axioms",
        valid.pass(),
        valid
            .failures()
            .next()
            .map(|c| c.claim.clone())
            .unwrap_or_default(),
    ));
    if !report.pass() {
        return Ok(ScenarioResult::new("sop1-config", report));
    }
    for (l, r) in rows {
        if l.len() != r.len() {
            return Err(ScenarioError::BadParam(
                "row entries have different arities".to_string(),
            ));
        }
    }

    let mut type_ok = true;
    let mut type_witness = String::new();
    let mut context = base.clone();
    for (i, (left, right)) in rows.iter().enumerate() {
        if !ambient.equal_type_over(&context, left, right)? {
            type_ok = false;
            type_witness = format!("row {i}: {left} vs {right}");
            break;
        }
        context.extend(left.ids().iter().copied());
        context.extend(right.ids().iter().copied());
    }
    report.push(Check::from_bool(
        "row-type-equality",
        "c(i,0) and c(i,1) have equal types over the base and earlier rows",
        type_ok,
        type_witness,
    ));

    let left_col: Vec<SortedTuple> = rows.iter().map(|(l, _)| l.clone()).collect();
    let consistent = consistent_set(ambient, std::slice::from_ref(template), &left_col)?;
    report.push(Check::from_bool(
        "left-column-consistent",
        "the template instances along column 0 are jointly satisfiable",
        consistent,
        "",
    ));

    let right_col: Vec<SortedTuple> = rows.iter().map(|(_, r)| r.clone()).collect();
    let inconsistent = k_inconsistent(ambient, template, &right_col, k)?;
    report.push(Check::from_bool(
        "right-column-k-inconsistent",
        format!("the template instances along column 1 are {k}-inconsistent"),
        inconsistent,
        "",
    ));

    Ok(ScenarioResult::new("sop1-config", report))
}

/// The template `eval(x, p) = p` with a single object parameter.
fn fixed_point_template() -> Template {
    Template::new(
        [("x".to_string(), Sort::F)],
        [("p".to_string(), Sort::O)],
        [Literal::eq(
            Term::eval(vec![Term::var("x")], Term::var("p")),
            Term::var("p"),
        )],
    )
}

/// The template `E(y, p)` with a single object parameter.
fn class_template() -> Template {
    Template::new(
        [("y".to_string(), Sort::O)],
        [("p".to_string(), Sort::O)],
        [Literal::e(Term::var("y"), Term::var("p"))],
    )
}

/// Demonstrates the array checker: a genuine passing configuration, plus
/// the two canonical ways an array fails (identical columns break
/// inconsistency, mixed fresh/shared rows break type equality) and the
/// rejection of an invalid ambient.
pub fn verify_sop1_config() -> Result<ScenarioResult, ScenarioError> {
    let mut report = Report::new();
    let template = fixed_point_template();

    // A passing two-row configuration: left column spread over two
    // classes, right column inside one class.
    let amb = FinStructure::parse_tn("tn 1\nO: 0 1 2 3\nE: 1~2\nE: 1~3\n").unwrap();
    let rows = vec![
        (
            SortedTuple::new([ElemId(0)]),
            SortedTuple::new([ElemId(1)]),
        ),
        (
            SortedTuple::new([ElemId(2)]),
            SortedTuple::new([ElemId(3)]),
        ),
    ];
    let good = sop1_config_check(&amb, &BTreeSet::new(), &template, &rows, 2)?;
    report.push(Check::from_bool(
        "genuine-config-passes",
        "a two-row array with consistent left column and 2-inconsistent right column passes",
        good.pass(),
        good.report
            .failures()
            .next()
            .map(|c| c.name.clone())
            .unwrap_or_default(),
    ));

    // Identical columns: the right column inherits the left's
    // consistency, so the inconsistency clause must fail.
    let ident_amb = FinStructure::parse_tn("tn 1\nO: 0 1\n").unwrap();
    let ident_rows = vec![
        (
            SortedTuple::new([ElemId(0)]),
            SortedTuple::new([ElemId(0)]),
        ),
        (
            SortedTuple::new([ElemId(1)]),
            SortedTuple::new([ElemId(1)]),
        ),
    ];
    let ident = sop1_config_check(&ident_amb, &BTreeSet::new(), &template, &ident_rows, 2)?;
    let ident_fail_names: Vec<&str> = ident
        .report
        .failures()
        .map(|c| c.name.as_str())
        .collect();
    report.push(Check::from_bool(
        "identical-columns-rejected",
        "identical columns fail exactly the inconsistency clause",
        ident_fail_names == ["right-column-k-inconsistent"],
        format!("failing clauses: {ident_fail_names:?}"),
    ));

    // Fresh-class left entries with shared-class right entries: the type
    // clause fails from the second row on.
    let mixed_amb = FinStructure::parse_tn("tn 1\nO: 0 1 2 3\nE: 1~3\n").unwrap();
    let mixed_rows = vec![
        (
            SortedTuple::new([ElemId(0)]),
            SortedTuple::new([ElemId(1)]),
        ),
        (
            SortedTuple::new([ElemId(2)]),
            SortedTuple::new([ElemId(3)]),
        ),
    ];
    let mixed = sop1_config_check(&mixed_amb, &BTreeSet::new(), &class_template(), &mixed_rows, 2)?;
    report.push(Check::from_bool(
        "mixed-rows-rejected",
        "fresh-class versus shared-class rows fail the type-equality clause",
        mixed
            .report
            .failures()
            .any(|c| c.name == "row-type-equality"),
        "",
    ));

    // A broken eval table is rejected before any clause runs.
    let mut b = StructureBuilder::new(1);
    b.add(ElemId(0), Sort::O)?;
    b.add(ElemId(1), Sort::O)?;
    b.add(ElemId(2), Sort::F)?;
    b.set_eval(vec![ElemId(2)], ElemId(0), ElemId(1))?;
    b.set_eval(vec![ElemId(2)], ElemId(1), ElemId(1))?;
    let broken = b.build()?;
    let rejected = sop1_config_check(
        &broken,
        &BTreeSet::new(),
        &template,
        &[(
            SortedTuple::new([ElemId(0)]),
            SortedTuple::new([ElemId(0)]),
        )],
        2,
    );
    let rejected_at_validation = match rejected {
        Ok(res) => res.report.failures().any(|c| c.name == "ambient-valid"),
        Err(_) => false,
    };
    report.push(Check::from_bool(
        "invalid-ambient-rejected",
        "an array over a non-model is rejected at validation",
        rejected_at_validation,
        "",
    ));

    Ok(ScenarioResult::new("sop1-config", report))
}

// ---------------------------------------------------------------------
// The array of selector fixed points
// ---------------------------------------------------------------------

/// The m-by-m array structure: row `r` is one class holding the distinct
/// elements `a(r,0) .. a(r,m-1)`; different rows are inequivalent. Ids:
/// `a(r,j) = r*m + j`.
pub fn not_cosimple_array(m: usize) -> Result<FinStructure, ScenarioError> {
    if !(2..=5).contains(&m) {
        return Err(ScenarioError::BadParam(format!(
            "array dimension must be between 2 and 5, got {m}"
        )));
    }
    let mut b = StructureBuilder::new(1);
    for r in 0..m {
        for j in 0..m {
            b.add(ElemId((r * m + j) as u32), Sort::O)?;
        }
        for j in 1..m {
            b.relate(ElemId((r * m) as u32), ElemId((r * m + j) as u32))?;
        }
    }
    Ok(b.build_totalized()?)
}

/// Verifies the two array facts: instances along every row-selecting path
/// are jointly satisfiable, and every row is 2-inconsistent.
pub fn verify_not_cosimple(m: usize) -> Result<ScenarioResult, ScenarioError> {
    let ambient = not_cosimple_array(m)?;
    let entry = |r: usize, j: usize| SortedTuple::new([ElemId((r * m + j) as u32)]);
    verify_not_cosimple_on(&ambient, m, &entry)
}

/// The checks themselves, over a caller-provided array layout (used for
/// fault injection in tests).
pub fn verify_not_cosimple_on(
    ambient: &FinStructure,
    m: usize,
    entry: &dyn Fn(usize, usize) -> SortedTuple,
) -> Result<ScenarioResult, ScenarioError> {
    let template = fixed_point_template();
    let mut report = Report::new();
    let valid = ambient.validate();
    report.push(Check::from_bool(
        format!("m{m}-array-valid"),
        "the array structure satisfies the selector axioms",
        valid.pass(),
        "",
    ));

    // Every path: pick one column index per row.
    let mut path_ok = true;
    let mut path_witness = String::new();
    let mut pick = vec![0usize; m];
    'paths: loop {
        let params: Vec<SortedTuple> = (0..m).map(|r| entry(r, pick[r])).collect();
        if !consistent_set(ambient, std::slice::from_ref(&template), &params)? {
            path_ok = false;
            path_witness = format!("path {pick:?}");
            break 'paths;
        }
        let mut pos = m;
        let mut wrapped = true;
        while pos > 0 {
            pos -= 1;
            if pick[pos] + 1 < m {
                pick[pos] += 1;
                pick[pos + 1..].fill(0);
                wrapped = false;
                break;
            }
            pick[pos] = 0;
        }
        if wrapped {
            break;
        }
    }
    report.push(Check::from_bool(
        format!("m{m}-paths-consistent"),
        format!("all {} row-selecting paths give satisfiable families", m.pow(m as u32)),
        path_ok,
        path_witness,
    ));

    let mut rows_ok = true;
    let mut rows_witness = String::new();
    for r in 0..m {
        let row: Vec<SortedTuple> = (0..m).map(|j| entry(r, j)).collect();
        if !k_inconsistent(ambient, &template, &row, 2)? {
            rows_ok = false;
            rows_witness = format!("row {r}");
            break;
        }
    }
    report.push(Check::from_bool(
        format!("m{m}-rows-2-inconsistent"),
        "every row's family of instances is 2-inconsistent",
        rows_ok,
        rows_witness,
    ));

    Ok(ScenarioResult::new("not-cosimple", report))
}

/// Runs the array checks for every dimension from 2 up to `m_max`.
pub fn verify_not_cosimple_suite(m_max: usize) -> Result<ScenarioResult, ScenarioError> {
    let mut report = Report::new();
    for m in 2..=m_max.max(2) {
        report.merge(verify_not_cosimple(m)?.report);
    }
    Ok(ScenarioResult::new("not-cosimple", report))
}

// ---------------------------------------------------------------------
// Forking versus dividing
// ---------------------------------------------------------------------

/// The default base: two one-element classes and one function element.
pub fn default_base() -> FinStructure {
    FinStructure::parse_tn("tn 1\nO: 0 1\nF: 2\n").unwrap()
}

/// Extends the base by `count` fresh classes, each holding `size` fresh
/// non-fixed points plus one representative fixed by base functions.
/// Returns the grown structure and the points (per class, excluding the
/// representative).
fn add_generic_classes(
    base: &FinStructure,
    count: usize,
    size: usize,
) -> Result<(FinStructure, Vec<Vec<ElemId>>), ScenarioError> {
    let mut b = StructureBuilder::extending(base);
    let mut next = base.fresh_id_base();
    let mut classes = Vec::new();
    let mut reps = Vec::new();
    for _ in 0..count {
        let rep = ElemId(next);
        next += 1;
        b.add(rep, Sort::O)?;
        let mut members = Vec::new();
        for _ in 0..size {
            let p = ElemId(next);
            next += 1;
            b.add(p, Sort::O)?;
            b.relate(rep, p)?;
            members.push(p);
        }
        classes.push(members);
        reps.push(rep);
    }
    let probe = b.build_totalized()?;
    // Base functions fix the fresh representative on each new class.
    let mut b = StructureBuilder::extending(&probe);
    for t in base.f_tuples() {
        for (i, rep) in reps.iter().enumerate() {
            b.set_eval(t.clone(), *rep, *rep)?;
            for &p in &classes[i] {
                b.set_eval(t.clone(), p, *rep)?;
            }
        }
    }
    let grown = b.build()?;
    debug_assert!(grown.validate().pass());
    Ok((grown, classes))
}

/// Verifies the five facts behind the forking/dividing split for the
/// disjunction `eval(x, z) = z or E(y, z)`:
///
/// 1. the class disjunct is 2-inconsistent along an inequivalent sequence;
/// 2. the fixed-point disjunct is 2-inconsistent along an equivalent one;
/// 3. the disjunction stays satisfiable along the equivalent pattern;
/// 4. and along the inequivalent pattern;
/// 5. the exact four-parameter pattern `E(b0,b1), E(b2,b3), !E(b1,b2)` is
///    jointly unsatisfiable for the disjunction, while its three-parameter
///    weakening is satisfiable.
pub fn verify_forking_not_dividing(len: usize) -> Result<ScenarioResult, ScenarioError> {
    verify_forking_not_dividing_over(&default_base(), len)
}

/// As [`verify_forking_not_dividing`], over a caller-provided base.
pub fn verify_forking_not_dividing_over(
    base: &FinStructure,
    len: usize,
) -> Result<ScenarioResult, ScenarioError> {
    if len < 2 {
        return Err(ScenarioError::BadParam("sequence length must be >= 2".into()));
    }
    if !base.validate().pass() {
        return Err(ScenarioError::Precondition(
            "the base must satisfy the selector axioms".to_string(),
        ));
    }
    let base = base.clone();
    let mut report = Report::new();
    let fix = fixed_point_template();
    let class = class_template();
    let both = [fix.clone(), class.clone()];

    // Inequivalent pattern: one point in each of `len` fresh classes.
    let (amb_ineq, ineq_classes) = add_generic_classes(&base, len, 1)?;
    let ineq: Vec<SortedTuple> = ineq_classes
        .iter()
        .map(|c| SortedTuple::new([c[0]]))
        .collect();
    // Equivalent pattern: `len` points in a single fresh class.
    let (amb_eq, eq_classes) = add_generic_classes(&base, 1, len)?;
    let eq: Vec<SortedTuple> = eq_classes[0]
        .iter()
        .map(|&p| SortedTuple::new([p]))
        .collect();

    report.push(Check::from_bool(
        "class-disjunct-divides",
        "E(y, b_i) is 2-inconsistent along pairwise-inequivalent b_i",
        k_inconsistent(&amb_ineq, &class, &ineq, 2)?,
        "",
    ));
    report.push(Check::from_bool(
        "fixed-point-disjunct-divides",
        "eval(x, b_i) = b_i is 2-inconsistent along equivalent distinct b_i",
        k_inconsistent(&amb_eq, &fix, &eq, 2)?,
        "",
    ));
    report.push(Check::from_bool(
        "disjunction-survives-equivalent",
        "the disjunction is satisfiable along the equivalent pattern",
        consistent_set(&amb_eq, &both, &eq)?,
        "",
    ));
    report.push(Check::from_bool(
        "disjunction-survives-inequivalent",
        "the disjunction is satisfiable along the inequivalent pattern",
        consistent_set(&amb_ineq, &both, &ineq)?,
        "",
    ));

    // Quasi-dividing: two fresh classes with two points each.
    let (amb_q, q_classes) = add_generic_classes(&base, 2, 2)?;
    let b0 = q_classes[0][0];
    let b1 = q_classes[0][1];
    let b2 = q_classes[1][0];
    let b3 = q_classes[1][1];
    let quad: Vec<SortedTuple> = [b0, b1, b2, b3]
        .iter()
        .map(|&p| SortedTuple::new([p]))
        .collect();
    report.push(Check::from_bool(
        "quasi-dividing-pattern-unsat",
        "E(b0,b1) & E(b2,b3) & !E(b1,b2) makes the four disjunction instances unsatisfiable",
        !consistent_set(&amb_q, &both, &quad)?,
        "",
    ));
    report.push(Check::from_bool(
        "three-parameter-weakening-sat",
        "dropping b3 leaves the three instances satisfiable",
        consistent_set(&amb_q, &both, &quad[..3])?,
        "",
    ));
    // All four parameters in one class: the class disjunct absorbs them.
    let (amb_one, one_class) = add_generic_classes(&base, 1, 4)?;
    let four_eq: Vec<SortedTuple> = one_class[0]
        .iter()
        .map(|&p| SortedTuple::new([p]))
        .collect();
    report.push(Check::from_bool(
        "all-equivalent-pattern-sat",
        "with all four parameters equivalent the disjunction family is satisfiable",
        consistent_set(&amb_one, &both, &four_eq)?,
        "",
    ));

    // The pattern elements all realize the same type over the base.
    let mut types_ok = true;
    for p in [b1, b2, b3] {
        if !amb_q.equal_type_over(
            &base.id_set(),
            &SortedTuple::new([b0]),
            &SortedTuple::new([p]),
        )? {
            types_ok = false;
        }
    }
    report.push(Check::from_bool(
        "pattern-elements-type-equal",
        "the four pattern parameters realize one type over the base",
        types_ok,
        "",
    ));

    Ok(ScenarioResult::new("forking-not-dividing", report))
}

// ---------------------------------------------------------------------
// No universal sequence
// ---------------------------------------------------------------------

/// Certifies the dichotomy: the equivalent-pattern family for the class
/// formula is satisfiable while the inequivalent pattern kills it, and
/// symmetrically for the fixed-point formula. Each candidate pattern
/// therefore fails to witness the dividing of the other formula.
pub fn verify_no_universal_morley(len: usize) -> Result<ScenarioResult, ScenarioError> {
    verify_no_universal_morley_over(&default_base(), len)
}

/// As [`verify_no_universal_morley`], over a caller-provided base.
pub fn verify_no_universal_morley_over(
    base: &FinStructure,
    len: usize,
) -> Result<ScenarioResult, ScenarioError> {
    if len < 2 {
        return Err(ScenarioError::BadParam("sequence length must be >= 2".into()));
    }
    if !base.validate().pass() {
        return Err(ScenarioError::Precondition(
            "the base must satisfy the selector axioms".to_string(),
        ));
    }
    let base = base.clone();
    let mut report = Report::new();
    let fix = fixed_point_template();
    let class = class_template();

    let (amb_eq, eq_classes) = add_generic_classes(&base, 1, len)?;
    let eq: Vec<SortedTuple> = eq_classes[0]
        .iter()
        .map(|&p| SortedTuple::new([p]))
        .collect();
    let (amb_ineq, ineq_classes) = add_generic_classes(&base, len, 1)?;
    let ineq: Vec<SortedTuple> = ineq_classes
        .iter()
        .map(|c| SortedTuple::new([c[0]]))
        .collect();

    // All pattern elements realize one type over the base.
    let mut same_type = true;
    for t in eq.iter().skip(1) {
        same_type &= amb_eq.equal_type_over(&base.id_set(), &eq[0], t)?;
    }
    for t in ineq.iter().skip(1) {
        same_type &= amb_ineq.equal_type_over(&base.id_set(), &ineq[0], t)?;
    }
    report.push(Check::from_bool(
        "patterns-realize-one-type",
        "both candidate sequences consist of realizations of a single type over the base",
        same_type,
        "",
    ));

    report.push(Check::from_bool(
        "equivalent-pattern-class-sat",
        "E(x, b_i) is satisfiable along the equivalent pattern",
        consistent_set(&amb_eq, std::slice::from_ref(&class), &eq)?,
        "",
    ));
    report.push(Check::from_bool(
        "inequivalent-pattern-kills-class",
        "E(x, b_i) is 2-inconsistent along the inequivalent pattern",
        k_inconsistent(&amb_ineq, &class, &ineq, 2)?,
        "",
    ));
    report.push(Check::from_bool(
        "inequivalent-pattern-fixed-point-sat",
        "eval(x, b_i) = b_i is satisfiable along the inequivalent pattern",
        consistent_set(&amb_ineq, std::slice::from_ref(&fix), &ineq)?,
        "",
    ));
    report.push(Check::from_bool(
        "equivalent-pattern-kills-fixed-point",
        "eval(x, b_i) = b_i is 2-inconsistent along the equivalent pattern",
        k_inconsistent(&amb_eq, &fix, &eq, 2)?,
        "",
    ));

    Ok(ScenarioResult::new("no-universal-morley", report))
}

// ---------------------------------------------------------------------
// Transitivity failure
// ---------------------------------------------------------------------

/// The arity-2 witness structure: a base with class representatives
/// `m = 0`, `m0 = 1`, `m1 = 2` and a function element `h0 = 3`, extended
/// by `c = 4` in the class of `m` and function elements `f = 5`,
/// `g = 6`. The pair `(f, g)` maps the class of `m` to `c`; every other
/// new entry fixes the class representative. Passing `false` replaces the
/// distinguishing entry by the representative (the faulty variant used in
/// tests).
pub fn transitivity_structure(with_witness_entry: bool) -> Result<FinStructure, ScenarioError> {
    let mut b = StructureBuilder::new(2);
    for o in [0, 1, 2, 4] {
        b.add(ElemId(o), Sort::O)?;
    }
    b.relate(ElemId(0), ElemId(4))?;
    for f in [3, 5, 6] {
        b.add(ElemId(f), Sort::F)?;
    }
    let probe = b.build_totalized()?;
    let mut b = StructureBuilder::extending(&probe);
    // Defaults: every pair fixes the class representative.
    for t in probe.f_tuples() {
        for (rep, members) in probe.classes() {
            for &m in &members {
                b.set_eval(t.clone(), m, rep)?;
            }
        }
    }
    if with_witness_entry {
        for t in [[ElemId(5), ElemId(6)], [ElemId(6), ElemId(5)]] {
            for m in [ElemId(0), ElemId(4)] {
                b.set_eval(t.to_vec(), m, ElemId(4))?;
            }
        }
    }
    Ok(b.build()?)
}

/// Verifies the transitivity counterexample: the five closure equalities,
/// the two passing independence statements, the failing joint one, and
/// the type split between `f` and `g` over the larger base.
pub fn verify_transitivity_failure() -> Result<ScenarioResult, ScenarioError> {
    let s = transitivity_structure(true)?;
    let mut report = Report::new();

    let valid = s.validate();
    report.push(Check::from_bool(
        "construction-valid",
        "the witness structure satisfies the selector axioms",
        valid.pass(),
        "",
    ));

    let m: BTreeSet<ElemId> = [ElemId(0), ElemId(1), ElemId(2), ElemId(3)].into();
    let f = ElemId(5);
    let g = ElemId(6);
    let c = ElemId(4);
    let with = |xs: &[ElemId]| {
        let mut s = m.clone();
        s.extend(xs.iter().copied());
        s
    };
    let expect: [(&str, Vec<ElemId>, Vec<ElemId>); 5] = [
        ("dcl-fM", vec![f], vec![f]),
        ("dcl-gM", vec![g], vec![g]),
        ("dcl-cM", vec![c], vec![c]),
        ("dcl-fgM", vec![f, g], vec![f, g, c]),
        ("dcl-gcM", vec![g, c], vec![g, c]),
    ];
    let show = |xs: &[ElemId]| {
        xs.iter()
            .map(|x| x.to_string())
            .collect::<Vec<_>>()
            .join(", ")
    };
    for (name, gens, extra) in expect {
        let got = dcl(&s, &with(&gens))?;
        let want = with(&extra);
        report.push(Check::from_bool(
            name,
            format!("dcl adds exactly {{{}}} to the base", show(&extra)),
            got == want,
            format!(
                "got {{{}}}",
                show(&got.iter().copied().collect::<Vec<_>>())
            ),
        ));
    }

    let quer = |a: &[ElemId], b: &[ElemId]| IndepQuery {
        a: SortedTuple::new(a.iter().copied()),
        b: SortedTuple::new(b.iter().copied()),
        over: m.clone(),
    };
    report.push(Check::from_bool(
        "f-independent-of-gc",
        "f is independent from (g, c) over the base",
        indep_star(&s, &quer(&[f], &[g, c]))?.pass(),
        "",
    ));
    report.push(Check::from_bool(
        "g-independent-of-c",
        "g is independent from c over the base",
        indep_star(&s, &quer(&[g], &[c]))?.pass(),
        "",
    ));
    let joint = indep_star(&s, &quer(&[f, g], &[c]))?;
    let named_c = joint
        .failures()
        .any(|ch| ch.witness.as_deref() == Some("element 4"));
    report.push(Check::from_bool(
        "fg-dependent-on-c",
        "(f, g) is dependent on c over the base, witnessed by the shared image",
        !joint.pass() && named_c,
        "",
    ));

    // f and g are distinguishable over the base extended by (g, c).
    let over: BTreeSet<ElemId> = with(&[g, c]);
    let split = !s.equal_type_over(
        &over,
        &SortedTuple::new([f]),
        &SortedTuple::new([g]),
    )?;
    report.push(Check::from_bool(
        "type-split-over-gc",
        "f and g have different types over the base extended by (g, c)",
        split,
        "",
    ));

    Ok(ScenarioResult::new("transitivity-failure", report))
}

// ---------------------------------------------------------------------
// The independence amalgam
// ---------------------------------------------------------------------

/// Builds the amalgamated extension realizing a tuple that looks like `a`
/// over `B`, like `a2` over `C`, and is independent from both over `M`.
///
/// Preconditions (checked): `M` is eval-closed and contained in the
/// eval-closed sets `B` and `C`; `a` and `a2` have equal types over `M`
/// (via the forced isomorphism of generated substructures, which `sigma`
/// must agree with where defined); and the three independence statements
/// `a` from `B`, `a2` from `C`, `B` from `C`, all over `M`, hold.
#[allow(clippy::too_many_arguments)]
pub fn independence_amalgam(
    ambient: &FinStructure,
    m_ids: &BTreeSet<ElemId>,
    a: &SortedTuple,
    a2: &SortedTuple,
    b_ids: &BTreeSet<ElemId>,
    c_ids: &BTreeSet<ElemId>,
    sigma: &BaseMap,
) -> Result<(FinStructure, SortedTuple), ScenarioError> {
    let pre = |cond: bool, msg: &str| -> Result<(), ScenarioError> {
        if cond {
            Ok(())
        } else {
            Err(ScenarioError::Precondition(msg.to_string()))
        }
    };
    pre(
        m_ids.is_subset(b_ids) && m_ids.is_subset(c_ids),
        "the base must be contained in both sides",
    )?;
    for (name, set) in [("M", m_ids), ("B", b_ids), ("C", c_ids)] {
        let closed = ambient.generated(set)?;
        pre(&closed == set, &format!("{name} is not eval-closed"))?;
    }
    pre(a.len() == a2.len(), "the two tuples have different lengths")?;

    // The isomorphism over M sending a to a2 is forced on the generated
    // substructure; sigma must agree with it where both are defined.
    let mut partial = BaseMap::identity_on(m_ids);
    for (&x, &y) in a.ids().iter().zip(a2.ids()) {
        pre(partial.insert(x, y), "a cannot be matched with a2 over M")?;
    }
    let iso = extend_generated_map(ambient, ambient, &partial)
        .ok_or_else(|| ScenarioError::Precondition("a and a2 differ over M".to_string()))?;
    let mut am: BTreeSet<ElemId> = m_ids.clone();
    am.extend(a.ids().iter().copied());
    let dcl_am = dcl(ambient, &am)?;
    for (x, y) in sigma.iter() {
        if dcl_am.contains(&x) {
            pre(iso.get(x) == Some(y), "sigma disagrees with the forced isomorphism")?;
        }
    }

    let query = |a: &SortedTuple, b: &SortedTuple| IndepQuery {
        a: a.clone(),
        b: b.clone(),
        over: m_ids.clone(),
    };
    let b_tuple = SortedTuple::new(b_ids.iter().copied());
    let c_tuple = SortedTuple::new(c_ids.iter().copied());
    pre(
        indep_star(ambient, &query(a, &b_tuple))?.pass(),
        "a is not independent from B over M",
    )?;
    pre(
        indep_star(ambient, &query(a2, &c_tuple))?.pass(),
        "a2 is not independent from C over M",
    )?;
    pre(
        indep_star(ambient, &query(&b_tuple, &c_tuple))?.pass(),
        "B is not independent from C over M",
    )?;

    // Universe bookkeeping.
    let mut ab: BTreeSet<ElemId> = b_ids.clone();
    ab.extend(a.ids().iter().copied());
    let dcl_ab = dcl(ambient, &ab)?;
    let mut a2c: BTreeSet<ElemId> = c_ids.clone();
    a2c.extend(a2.ids().iter().copied());
    let dcl_a2c = dcl(ambient, &a2c)?;
    let mut bc: BTreeSet<ElemId> = b_ids.union(c_ids).copied().collect();
    bc = dcl(ambient, &bc)?;

    // iota0 renames dcl(aB) into B u U; iota1 renames dcl(a2C) into C u V,
    // gluing the two copies along the image of dcl(aM).
    let mut next = ambient.fresh_id_base();
    let mut iota0 = BaseMap::new();
    for &h in &dcl_ab {
        if b_ids.contains(&h) {
            iota0.insert(h, h);
        } else {
            iota0.insert(h, ElemId(next));
            next += 1;
        }
    }
    let mut iota1 = BaseMap::new();
    for &g in &dcl_a2c {
        if c_ids.contains(&g) {
            iota1.insert(g, g);
        } else if let Some(h) = iso.iter().find(|&(h, img)| img == g && dcl_am.contains(&h)).map(|(h, _)| h) {
            // Glue: the copy of sigma(h) is the copy of h.
            iota1.insert(g, iota0.get(h).unwrap());
        } else {
            iota1.insert(g, ElemId(next));
            next += 1;
        }
    }

    // Assemble the universe.
    let mut builder = StructureBuilder::new(ambient.n());
    let mut universe: BTreeSet<ElemId> = BTreeSet::new();
    for &id in &bc {
        builder.add(id, ambient.sort_of(id).unwrap())?;
        universe.insert(id);
    }
    for &h in &dcl_ab {
        let img = iota0.get(h).unwrap();
        if universe.insert(img) {
            builder.add(img, ambient.sort_of(h).unwrap())?;
        }
    }
    for &g in &dcl_a2c {
        let img = iota1.get(g).unwrap();
        if universe.insert(img) {
            builder.add(img, ambient.sort_of(g).unwrap())?;
        }
    }

    // Class relations from the three parts.
    let relate_part = |builder: &mut StructureBuilder,
                       part: &BTreeSet<ElemId>,
                       rename: &dyn Fn(ElemId) -> ElemId|
     -> Result<(), ScenarioError> {
        let os: Vec<ElemId> = part
            .iter()
            .copied()
            .filter(|&x| ambient.sort_of(x) == Some(Sort::O))
            .collect();
        for (i, &x) in os.iter().enumerate() {
            for &y in &os[i + 1..] {
                if ambient.e_rel(x, y) {
                    builder.relate(rename(x), rename(y))?;
                }
            }
        }
        Ok(())
    };
    relate_part(&mut builder, &bc, &|x| x)?;
    relate_part(&mut builder, &dcl_ab, &|x| iota0.get(x).unwrap())?;
    relate_part(&mut builder, &dcl_a2c, &|x| iota1.get(x).unwrap())?;
    let probe = builder.build_totalized()?;

    // Eval: union of the three pushed tables, checked for agreement, then
    // completed towards canonical representatives (base ids first).
    let mut entries: std::collections::BTreeMap<(Vec<ElemId>, ElemId), (ElemId, &'static str)> =
        std::collections::BTreeMap::new();
    let mut push_part = |part: &BTreeSet<ElemId>,
                         rename: &dyn Fn(ElemId) -> ElemId,
                         tag: &'static str|
     -> Result<(), ScenarioError> {
        let fs: Vec<ElemId> = part
            .iter()
            .copied()
            .filter(|&x| ambient.sort_of(x) == Some(Sort::F))
            .collect();
        let os: Vec<ElemId> = part
            .iter()
            .copied()
            .filter(|&x| ambient.sort_of(x) == Some(Sort::O))
            .collect();
        for t in crate::structure::tuples_over(&fs, ambient.n()) {
            for &o in &os {
                let v = ambient.eval_get(&t, o).unwrap();
                let rt: Vec<ElemId> = t.iter().map(|&f| rename(f)).collect();
                let anchor = probe.class_rep(rename(o)).unwrap();
                let rv = rename(v);
                if let Some((prev, prev_tag)) = entries.get(&(rt.clone(), anchor)) {
                    if *prev != rv {
                        return Err(ScenarioError::Precondition(format!(
                            "pushed eval tables disagree ({prev_tag} vs {tag})"
                        )));
                    }
                } else {
                    entries.insert((rt, anchor), (rv, tag));
                }
            }
        }
        Ok(())
    };
    push_part(&bc, &|x| x, "joint")?;
    push_part(&dcl_ab, &|x| iota0.get(x).unwrap(), "left")?;
    push_part(&dcl_a2c, &|x| iota1.get(x).unwrap(), "right")?;

    let mut builder = StructureBuilder::extending(&probe);
    for t in probe.f_tuples() {
        for (rep, members) in probe.classes() {
            let value = match entries.get(&(t.clone(), rep)) {
                Some((v, _)) => *v,
                None => members
                    .iter()
                    .copied()
                    .find(|x| m_ids.contains(x))
                    .unwrap_or(rep),
            };
            for &mm in &members {
                builder.set_eval(t.clone(), mm, value)?;
            }
        }
    }
    let d = builder.build()?;

    let a_star = SortedTuple::new(a.ids().iter().map(|&x| iota0.get(x).unwrap()));
    Ok((d, a_star))
}

/// Checks the three postconditions of [`independence_amalgam`] from raw
/// primitives.
#[allow(clippy::too_many_arguments)]
pub fn check_amalgam_postconditions(
    ambient: &FinStructure,
    d: &FinStructure,
    m_ids: &BTreeSet<ElemId>,
    a: &SortedTuple,
    a2: &SortedTuple,
    b_ids: &BTreeSet<ElemId>,
    c_ids: &BTreeSet<ElemId>,
    a_star: &SortedTuple,
) -> Result<Report, ScenarioError> {
    let mut report = Report::new();
    report.push(Check::from_bool(
        "amalgam-valid",
        "the amalgamated structure satisfies the selector axioms",
        d.validate().pass(),
        "",
    ));

    // Type over B matches a; type over C matches a2. Cross-structure:
    // map B pointwise, a_star to a, and extend over the generated
    // substructure.
    let cross = |side: &BTreeSet<ElemId>, target: &SortedTuple| -> Result<bool, ScenarioError> {
        let mut partial = BaseMap::identity_on(side);
        for (&x, &y) in a_star.ids().iter().zip(target.ids()) {
            if !partial.insert(x, y) && partial.get(x) != Some(y) {
                return Ok(false);
            }
        }
        let full = match extend_generated_map(d, ambient, &partial) {
            Some(map) => map,
            None => return Ok(false),
        };
        let mut gens: BTreeSet<ElemId> = side.clone();
        gens.extend(target.ids().iter().copied());
        Ok(full.range() == ambient.generated(&gens)?)
    };
    report.push(Check::from_bool(
        "type-over-left",
        "the new tuple has the same type as a over B",
        cross(b_ids, a)?,
        "",
    ));
    report.push(Check::from_bool(
        "type-over-right",
        "the new tuple has the same type as a2 over C",
        cross(c_ids, a2)?,
        "",
    ));

    let mut bc: BTreeSet<ElemId> = b_ids.union(c_ids).copied().collect();
    bc = d.generated(&bc)?;
    let q = IndepQuery {
        a: a_star.clone(),
        b: SortedTuple::new(bc.iter().copied()),
        over: m_ids.clone(),
    };
    report.push(Check::from_bool(
        "independent-from-both",
        "the new tuple is independent from B together with C over M",
        indep_star(d, &q)?.pass(),
        "",
    ));
    Ok(report)
}

/// A ready-made valid input for [`independence_amalgam`].
#[derive(Debug, Clone)]
pub struct AmalgamInstance {
    pub ambient: FinStructure,
    pub m_ids: BTreeSet<ElemId>,
    pub a: SortedTuple,
    pub a2: SortedTuple,
    pub b_ids: BTreeSet<ElemId>,
    pub c_ids: BTreeSet<ElemId>,
    pub sigma: BaseMap,
}

/// A random valid input for the amalgam, built by iterated strong
/// amalgamation so every precondition holds by construction.
pub fn random_amalgam_instance(n: usize, seed: u64) -> Result<AmalgamInstance, ScenarioError> {
    let mut rng = Rng::new(seed);
    let o = 1 + rng.below(2);
    let m = random_structure(n, o, 1, 1 + rng.below(o), rng.next_u64())?;

    let grow = |rng: &mut Rng, lo: u32, min_new: usize| -> Result<FinStructure, ScenarioError> {
        let spec = ExtensionSpec {
            extra_o: min_new + rng.below(2),
            extra_f: rng.below(2),
            new_classes: 1 + rng.below(2),
        };
        let s = random_extension(&m, spec, rng)?;
        let mut shift = BaseMap::new();
        let mut next = lo;
        for id in s.ids() {
            if !m.contains(id) {
                shift.insert(id, ElemId(next));
                next += 1;
            }
        }
        Ok(s.relabel(&shift)?)
    };
    let b_side = grow(&mut rng, 100, 0)?;
    let c_side = grow(&mut rng, 200, 0)?;
    let a_side = grow(&mut rng, 300, 1)?;
    // An isomorphic copy of the a-side over M on fresh ids.
    let mut copy_map = BaseMap::new();
    let mut next = 400;
    for id in a_side.ids() {
        if m.contains(id) {
            copy_map.insert(id, id);
        } else {
            copy_map.insert(id, ElemId(next));
            next += 1;
        }
    }
    let a2_side = a_side.relabel(&copy_map)?;
    // The tuple mixes fresh elements of the a-side with, at times, base
    // elements (whose copies are themselves).
    let mut tuple_ids: Vec<ElemId> = a_side.ids().filter(|id| !m.contains(*id)).collect();
    if rng.chance(1, 3) {
        let base_ids: Vec<ElemId> = m.ids().collect();
        tuple_ids.push(*rng.choose(&base_ids));
    }

    // One ambient containing all four extensions, glued over M.
    let d1 = crate::amalgam::strong_amalgam(&crate::amalgam::AmalgamInput::new(
        m.clone(),
        b_side.clone(),
        c_side.clone(),
    )?)?;
    let d2 = crate::amalgam::strong_amalgam(&crate::amalgam::AmalgamInput::new(
        m.clone(),
        d1,
        a_side.clone(),
    )?)?;
    let d3 = crate::amalgam::strong_amalgam(&crate::amalgam::AmalgamInput::new(
        m.clone(),
        d2,
        a2_side.clone(),
    )?)?;

    let a = SortedTuple::new(tuple_ids.iter().copied());
    let a2 = SortedTuple::new(tuple_ids.iter().map(|&x| copy_map.get(x).unwrap()));
    let mut sigma = BaseMap::identity_on(&m.id_set());
    for (x, y) in copy_map.iter() {
        sigma.insert(x, y);
    }
    Ok(AmalgamInstance {
        ambient: d3,
        m_ids: m.id_set(),
        a,
        a2,
        b_ids: b_side.id_set(),
        c_ids: c_side.id_set(),
        sigma,
    })
}

/// Runs random amalgam instances and checks every postcondition.
pub fn verify_independence_amalgam(
    samples: usize,
    seed: u64,
) -> Result<ScenarioResult, ScenarioError> {
    let mut report = Report::new();
    let mut ok = true;
    let mut witness = String::new();
    let mut rng = Rng::new(seed);
    for i in 0..samples {
        let n = 1 + (i % 2);
        let inst = random_amalgam_instance(n, rng.next_u64())?;
        let (d, a_star) = independence_amalgam(
            &inst.ambient,
            &inst.m_ids,
            &inst.a,
            &inst.a2,
            &inst.b_ids,
            &inst.c_ids,
            &inst.sigma,
        )?;
        let post = check_amalgam_postconditions(
            &inst.ambient,
            &d,
            &inst.m_ids,
            &inst.a,
            &inst.a2,
            &inst.b_ids,
            &inst.c_ids,
            &a_star,
        )?;
        if !post.pass() {
            ok = false;
            witness = format!(
                "instance {i}: {}",
                post.failures()
                    .map(|c| c.name.clone())
                    .collect::<Vec<_>>()
                    .join(", ")
            );
            break;
        }
    }
    report.push(Check::from_bool(
        "random-instances",
        format!("{samples} random amalgam instances satisfy all three postconditions"),
        ok,
        witness,
    ));

    // Degenerate instance: a inside M comes back unchanged.
    let m = random_structure(1, 2, 1, 2, 99)?;
    let a = SortedTuple::new([ElemId(0)]);
    let sigma = BaseMap::identity_on(&m.id_set());
    let (d, a_star) = independence_amalgam(
        &m,
        &m.id_set(),
        &a,
        &a,
        &m.id_set(),
        &m.id_set(),
        &sigma,
    )?;
    report.push(Check::from_bool(
        "degenerate-instance",
        "a tuple inside the base comes back unchanged",
        a_star == a && d.restricts_to(&m),
        "",
    ));

    // Violated precondition is reported as such.
    let bad = {
        let s = FinStructure::parse_tn("tn 1\nO: 0 1\nE: 0~1\n").unwrap();
        let a = SortedTuple::new([ElemId(0)]);
        let b: BTreeSet<ElemId> = s.id_set();
        independence_amalgam(
            &s,
            &BTreeSet::new(),
            &a,
            &a,
            &b,
            &b,
            &BaseMap::new(),
        )
    };
    report.push(Check::from_bool(
        "precondition-violation-rejected",
        "an input violating independence of the sides is rejected",
        matches!(bad, Err(ScenarioError::Precondition(_))),
        "",
    ));

    Ok(ScenarioResult::new("independence-amalgam", report))
}

// ---------------------------------------------------------------------
// Local character chains
// ---------------------------------------------------------------------

/// Iterates the two closure conditions until a fixpoint: each step adds
/// the part of `dcl(a M_i)` lying in `N` and a representative inside `N`
/// for every class that `dcl(a M_i)` and `N` share, then closes under
/// eval. Returns the chain and a certificate that the fixpoint `M`
/// satisfies both final inclusions.
pub fn local_character_chain(
    ambient: &FinStructure,
    n_ids: &BTreeSet<ElemId>,
    a: &SortedTuple,
    m0: &BTreeSet<ElemId>,
) -> Result<(Vec<BTreeSet<ElemId>>, Report), ScenarioError> {
    if !m0.is_subset(n_ids) {
        return Err(ScenarioError::Precondition(
            "the seed must be contained in N".to_string(),
        ));
    }
    let closed_n = ambient.generated(n_ids)?;
    if &closed_n != n_ids {
        return Err(ScenarioError::Precondition(
            "N must be eval-closed".to_string(),
        ));
    }
    let o_part = |xs: &BTreeSet<ElemId>| -> BTreeSet<ElemId> {
        xs.iter()
            .copied()
            .filter(|&x| ambient.sort_of(x) == Some(Sort::O))
            .collect()
    };

    let mut chain = vec![ambient.generated(m0)?];
    loop {
        let current = chain.last().unwrap().clone();
        let mut am: BTreeSet<ElemId> = current.clone();
        am.extend(a.ids().iter().copied());
        let dcl_am = dcl(ambient, &am)?;
        let mut next: BTreeSet<ElemId> = current.clone();
        next.extend(dcl_am.intersection(n_ids).copied());
        // A representative inside N for every class shared by dcl(aM)
        // and N.
        let reps_am = ambient.class_reps(&o_part(&dcl_am))?;
        for &x in &o_part(n_ids) {
            let rep = ambient.class_rep(x).unwrap();
            if reps_am.contains(&rep) {
                let least_in_n = ambient
                    .class_members(x)
                    .into_iter()
                    .find(|m| n_ids.contains(m))
                    .unwrap();
                next.insert(least_in_n);
            }
        }
        let next = ambient.generated(&next)?;
        if next == current {
            break;
        }
        chain.push(next);
    }

    let fixpoint = chain.last().unwrap().clone();
    let mut report = Report::new();
    let mut am: BTreeSet<ElemId> = fixpoint.clone();
    am.extend(a.ids().iter().copied());
    let dcl_am = dcl(ambient, &am)?;
    let leak = dcl_am
        .intersection(n_ids)
        .find(|x| !fixpoint.contains(x));
    report.push(Check::from_bool(
        "element-inclusion",
        "dcl(a M) & N <= M at the fixpoint",
        leak.is_none(),
        leak.map(|x| format!("element {x}")).unwrap_or_default(),
    ));
    let reps_am = ambient.class_reps(&o_part(&dcl_am))?;
    let reps_n = ambient.class_reps(&o_part(n_ids))?;
    let reps_m = ambient.class_reps(&o_part(&fixpoint))?;
    let class_leak = reps_am
        .intersection(&reps_n)
        .find(|r| !reps_m.contains(r));
    report.push(Check::from_bool(
        "class-inclusion",
        "dcl(a M)/E & N/E <= M/E at the fixpoint",
        class_leak.is_none(),
        class_leak
            .map(|r| format!("class of {r}"))
            .unwrap_or_default(),
    ));
    let monotone = chain.windows(2).all(|w| w[0].is_subset(&w[1]));
    report.push(Check::from_bool(
        "chain-monotone",
        "the chain grows monotonically to its fixpoint",
        monotone,
        "",
    ));
    Ok((chain, report))
}

/// Random local-character instances over seeded structures.
pub fn verify_local_character(seed: u64) -> Result<ScenarioResult, ScenarioError> {
    let mut report = Report::new();
    let mut rng = Rng::new(seed);
    let mut ok = true;
    let mut witness = String::new();
    let mut max_steps = 0usize;
    for i in 0..50 {
        let o = 6 + rng.below(12);
        let ambient = random_structure(
            1,
            o,
            2 + rng.below(4),
            1 + rng.below(o / 2 + 1),
            rng.next_u64(),
        )?;
        let all: Vec<ElemId> = ambient.ids().collect();
        let n_seed: BTreeSet<ElemId> = all.iter().filter(|_| rng.chance(2, 3)).copied().collect();
        let n_ids = ambient.generated(&n_seed)?;
        let a = SortedTuple::new([*rng.choose(&all)]);
        let m0: BTreeSet<ElemId> = n_ids.iter().filter(|_| rng.chance(1, 3)).copied().collect();
        let (chain, cert) = local_character_chain(&ambient, &n_ids, &a, &m0)?;
        max_steps = max_steps.max(chain.len() - 1);
        if !cert.pass() || chain.len() - 1 > n_ids.len() {
            ok = false;
            witness = format!("instance {i}");
            break;
        }
    }
    report.push(Check::from_bool(
        "random-chains-certify",
        "random chains reach a certified fixpoint within |N| steps",
        ok,
        witness,
    ));

    // Seed containing the tuple: fixpoint immediately.
    let ambient = random_structure(1, 4, 1, 2, seed)?;
    let n_ids = ambient.id_set();
    let a = SortedTuple::new([ElemId(0)]);
    let m0 = ambient.generated(&[ElemId(0)].into())?;
    let (chain, cert) = local_character_chain(&ambient, &n_ids, &a, &m0)?;
    report.push(Check::from_bool(
        "contained-tuple-is-immediate",
        "a tuple inside the closed seed gives a fixpoint at step 0",
        cert.pass() && chain.len() == 1,
        format!("chain length {}", chain.len()),
    ));

    Ok(ScenarioResult::new("local-character", report))
}

#[cfg(test)]
mod tests;
