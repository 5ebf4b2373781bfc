use super::*;

#[test]
fn sop1_demo_scenario_passes() {
    let res = verify_sop1_config().unwrap();
    assert!(res.pass(), "{}", res.report);
}

#[test]
fn not_cosimple_small_dimensions() {
    // m = 2: four paths consistent, both rows 2-inconsistent.
    let res = verify_not_cosimple(2).unwrap();
    assert!(res.pass(), "{}", res.report);
    // m = 3: twenty-seven paths, three rows.
    let res = verify_not_cosimple(3).unwrap();
    assert!(res.pass(), "{}", res.report);
    // Out-of-range dimensions are rejected.
    assert!(verify_not_cosimple(1).is_err());
    assert!(verify_not_cosimple(6).is_err());
}

#[test]
fn array_rows_have_one_representative_each() {
    for m in 2..=4usize {
        let ambient = not_cosimple_array(m).unwrap();
        let all: BTreeSet<ElemId> = ambient.o_elems().collect();
        let reps = ambient.class_reps(&all).unwrap();
        assert_eq!(reps.len(), m);
    }
}

#[test]
fn not_cosimple_fault_injection() {
    // Moving one entry into the wrong class breaks a row check and names
    // the violated fact.
    let m = 2;
    let ambient = not_cosimple_array(m).unwrap();
    let entry = move |r: usize, j: usize| {
        // Entry (1,1) is replaced by an element of row 0.
        if (r, j) == (1, 1) {
            SortedTuple::new([ElemId(1)])
        } else {
            SortedTuple::new([ElemId((r * m + j) as u32)])
        }
    };
    let res = verify_not_cosimple_on(&ambient, m, &entry).unwrap();
    assert!(!res.pass());
    let names: Vec<&str> = res.report.failures().map(|c| c.name.as_str()).collect();
    assert!(names.contains(&"m2-paths-consistent") || names.contains(&"m2-rows-2-inconsistent"));
}

#[test]
fn forking_not_dividing_scenario() {
    let res = verify_forking_not_dividing(4).unwrap();
    assert!(res.pass(), "{}", res.report);
    // The degenerate length is rejected.
    assert!(verify_forking_not_dividing(1).is_err());
}

#[test]
fn no_universal_morley_scenario() {
    for len in [2, 3] {
        let res = verify_no_universal_morley(len).unwrap();
        assert!(res.pass(), "len {len}:\n{}", res.report);
    }
}

#[test]
fn transitivity_scenario_passes() {
    let res = verify_transitivity_failure().unwrap();
    assert!(res.pass(), "{}", res.report);
}

#[test]
fn transitivity_structure_validates() {
    let s = transitivity_structure(true).unwrap();
    assert!(s.validate().pass());
    assert_eq!(s.n(), 2);
}

#[test]
fn transitivity_needs_the_witness_entry() {
    // With eval(f, g, -) fixing the representative instead of producing
    // the shared image, the joint dependence disappears and the scenario
    // check on it would fail.
    let s = transitivity_structure(false).unwrap();
    assert!(s.validate().pass());
    let m: BTreeSet<ElemId> = [ElemId(0), ElemId(1), ElemId(2), ElemId(3)].into();
    let q = IndepQuery {
        a: SortedTuple::new([ElemId(5), ElemId(6)]),
        b: SortedTuple::new([ElemId(4)]),
        over: m,
    };
    assert!(indep_star(&s, &q).unwrap().pass());
}

#[test]
fn independence_amalgam_scenario() {
    // A light run here; the acceptance suite does the full 200.
    let res = verify_independence_amalgam(25, 11).unwrap();
    assert!(res.pass(), "{}", res.report);
}

#[test]
fn independence_amalgam_rejects_bad_inputs() {
    // B not eval-closed.
    let s = FinStructure::parse_tn("tn 1\nO: 0 1\nF: 2\nE: 0~1\neval: 2 | 0 -> 1\n").unwrap();
    let a = SortedTuple::new([ElemId(1)]);
    let b: BTreeSet<ElemId> = [ElemId(0), ElemId(2)].into();
    let err = independence_amalgam(
        &s,
        &BTreeSet::new(),
        &a,
        &a,
        &b,
        &b,
        &BaseMap::new(),
    )
    .unwrap_err();
    assert!(matches!(err, ScenarioError::Precondition(_)));
    // Tuples of different types over M.
    let s2 = FinStructure::parse_tn("tn 1\nO: 0 1 2\nE: 0~1\n").unwrap();
    let err = independence_amalgam(
        &s2,
        &BTreeSet::new(),
        &SortedTuple::new([ElemId(0)]),
        &SortedTuple::new([ElemId(0), ElemId(1)]),
        &BTreeSet::new(),
        &BTreeSet::new(),
        &BaseMap::new(),
    )
    .unwrap_err();
    assert!(matches!(err, ScenarioError::Precondition(_)));
}

#[test]
fn local_character_scenario() {
    let res = verify_local_character(3).unwrap();
    assert!(res.pass(), "{}", res.report);
}

#[test]
fn local_character_chain_shapes() {
    let ambient = random_structure(1, 10, 3, 4, 42).unwrap();
    let n_ids = ambient.id_set();
    let a = SortedTuple::new([ElemId(0)]);
    // Empty seed still terminates with a certificate.
    let (chain, report) =
        local_character_chain(&ambient, &n_ids, &a, &BTreeSet::new()).unwrap();
    assert!(report.pass(), "{report}");
    assert!(chain.len() <= n_ids.len() + 1);
    // Seeds outside N are rejected.
    let small: BTreeSet<ElemId> = [ElemId(0)].into();
    let err = local_character_chain(&ambient, &small, &a, &n_ids);
    assert!(err.is_err());
}

#[test]
fn run_all_is_deterministic() {
    let cfg = ScenarioConfig {
        samples: 10,
        ..ScenarioConfig::default()
    };
    let first = run_all(&cfg).unwrap();
    let second = run_all(&cfg).unwrap();
    assert_eq!(first.len(), SCENARIO_IDS.len());
    for (a, b) in first.iter().zip(&second) {
        assert_eq!(a.scenario, b.scenario);
        assert_eq!(a.report, b.report);
        assert!(a.pass(), "{}: {}", a.scenario, a.report);
    }
    for (res, id) in first.iter().zip(SCENARIO_IDS) {
        assert_eq!(&res.scenario, id);
    }
}

#[test]
fn run_one_rejects_unknown_ids() {
    let cfg = ScenarioConfig::default();
    assert!(run_one("no-such-scenario", &cfg).is_err());
}

#[test]
fn forking_scenarios_accept_custom_bases() {
    // A richer base: three classes, two function elements.
    let base = random_structure(1, 5, 2, 3, 123).unwrap();
    let res = verify_forking_not_dividing_over(&base, 3).unwrap();
    assert!(res.pass(), "{}", res.report);
    let res = verify_no_universal_morley_over(&base, 3).unwrap();
    assert!(res.pass(), "{}", res.report);
    // Invalid bases are rejected up front.
    let mut b = StructureBuilder::new(1);
    b.add(ElemId(0), Sort::O).unwrap();
    b.add(ElemId(1), Sort::O).unwrap();
    b.add(ElemId(2), Sort::F).unwrap();
    b.set_eval(vec![ElemId(2)], ElemId(0), ElemId(1)).unwrap();
    b.set_eval(vec![ElemId(2)], ElemId(1), ElemId(1)).unwrap();
    let broken = b.build().unwrap();
    assert!(matches!(
        verify_forking_not_dividing_over(&broken, 3),
        Err(ScenarioError::Precondition(_))
    ));
}
