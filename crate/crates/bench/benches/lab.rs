use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use kimlab_core::amalgam::{strong_amalgam, AmalgamInput};
use kimlab_core::indep::{morley_sequence, GenericSpec, GenericVar};
use kimlab_core::logic::parse_diagram;
use kimlab_core::oracle::satisfiable;
use kimlab_core::rng::Rng;
use kimlab_core::structure::{random_extension, random_structure, BaseMap, ExtensionSpec};
use kimlab_core::tree::enumerate;
use kimlab_core::{ElemId, FinStructure};

fn tree_enumeration(c: &mut Criterion) {
    c.bench_function("tree_enum_alpha4_branch3", |b| {
        b.iter(|| enumerate(black_box(4), black_box(3)))
    });
}

fn oracle_queries(c: &mut Criterion) {
    let base = FinStructure::parse_tn("tn 1\nO: 0 1 2 3\nF: 5 6\nE: 0~1\nE: 0~2\n").unwrap();
    let sat = parse_diagram(
        "var x : F\nvar y : O\n!eval(x; e0) = e0\nE(y, e3)\n!y = e3\neval(x; y) = y\n",
    )
    .unwrap();
    let unsat =
        parse_diagram("var x : F\neval(x; e0) = e0\neval(x; e1) = e1\neval(x; e2) = e2\n").unwrap();
    c.bench_function("oracle_sat_two_vars", |b| {
        b.iter(|| satisfiable(black_box(&base), black_box(&sat)).unwrap())
    });
    c.bench_function("oracle_unsat_fixed_points", |b| {
        b.iter(|| satisfiable(black_box(&base), black_box(&unsat)).unwrap())
    });
}

fn amalgamation(c: &mut Criterion) {
    let mut rng = Rng::new(12);
    let base = random_structure(2, 3, 1, 2, 9).unwrap();
    let grow = |rng: &mut Rng, lo: u32| {
        let spec = ExtensionSpec {
            extra_o: 2,
            extra_f: 1,
            new_classes: 1,
        };
        let s = random_extension(&base, spec, rng).unwrap();
        let mut shift = BaseMap::new();
        let mut next = lo;
        for id in s.ids() {
            if !base.contains(id) {
                shift.insert(id, ElemId(next));
                next += 1;
            }
        }
        s.relabel(&shift).unwrap()
    };
    let left = grow(&mut rng, 100);
    let right = grow(&mut rng, 200);
    let input = AmalgamInput::new(base, left, right).unwrap();
    c.bench_function("strong_amalgam_n2_size6", |b| {
        b.iter(|| strong_amalgam(black_box(&input)).unwrap())
    });
}

fn generic_sequences(c: &mut Criterion) {
    let ambient = FinStructure::parse_tn("tn 1\nO: 0 1 2\nF: 3\nE: 0~1\n").unwrap();
    let spec = GenericSpec {
        base: ambient.id_set(),
        vars: vec![GenericVar::F, GenericVar::OFresh],
    };
    c.bench_function("morley_sequence_len4", |b| {
        b.iter(|| morley_sequence(black_box(&ambient), black_box(&spec), 4).unwrap())
    });
}

criterion_group!(
    benches,
    tree_enumeration,
    oracle_queries,
    amalgamation,
    generic_sequences
);
criterion_main!(benches);
