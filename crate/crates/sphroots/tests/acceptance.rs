//! One PASS/FAIL line per acceptance criterion.

mod common;

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_rational::Rational64 as Q;
use num_traits::{One, Zero};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};

use common::*;
use sphroots::degen::{add_degeneration_traced, press_left, StringOccupancy};
use sphroots::engine::{algorithm_c, base_solve, optimized_solve, spherical_roots, Branching, Mode, Tracked};
use sphroots::lattice::Sublattice;
use sphroots::subgroup::{lattice_in_root_coords, sm_decomposition, validate, weight_lattice, SphericalDatum, XiGen};

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn root_lattice(d: &SphericalDatum) -> Result<Sublattice, String> {
    let lat = weight_lattice(d, reg()).map_err(|e| e.to_string())?;
    Ok(Sublattice::new(d.rs().rank(), &lattice_in_root_coords(d, &lat)))
}

fn shared_class_in_a3() -> Outcome {
    let start = Instant::now();
    let d = datum("A3", &[1], &[&[1, 1, 0], &[0, 1, 1]], &[XiGen::Diff(0, 1)]);
    ensure(validate(&d, reg()).is_empty(), || "datum does not validate".into())?;
    let half = Q::new(1, 2);
    let expected = Sublattice::new(3, &[vec![Q::one(), Q::one(), Q::zero()], vec![half, Q::zero(), -half]]);
    let lat = root_lattice(&d)?;
    ensure(lat == expected && lat.rank() == 2, || format!("lattice {lat:?}"))?;
    let r = spherical_roots(&d, reg(), Mode::Base, Branching::All).map_err(|e| e.to_string())?;
    ensure(r.rays == set(&[&[1, 1, 0], &[0, 1, 1]]), || format!("sigma {:?}", r.rays))?;
    let took = start.elapsed();
    ensure(took < Duration::from_secs(1), || format!("took {took:?}"))?;
    Ok(format!("sigma {:?}, {took:?}", r.rays))
}

/// Per-block (node map, count) of the block-wise path, and the total of the generic per-block path.
fn block_counts(d: &SphericalDatum) -> Result<(Vec<(Vec<usize>, usize)>, usize, usize), String> {
    let o = optimized_solve(d, reg(), Branching::All).map_err(|e| e.to_string())?;
    let blocks = o.blocks.iter().map(|b| (b.embedding.node_map.clone(), b.degenerations)).collect();
    let mut generic = 0;
    for block in sm_decomposition(d) {
        let mut t = Tracked::new(d.clone(), block);
        algorithm_c(&mut t).map_err(|e| e.to_string())?;
        generic += t.degenerations;
    }
    Ok((blocks, o.degenerations, generic))
}

fn additive_pair_in_a3() -> Outcome {
    let d = datum("A3", &[0], &[&[1, 1, 0], &[1, 1, 1]], &[]);
    let lat = root_lattice(&d)?;
    ensure(lat == Sublattice::from_int(3, &[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]), || format!("lattice {lat:?}"))?;
    let r = spherical_roots(&d, reg(), Mode::Both, Branching::All).map_err(|e| e.to_string())?;
    ensure(r.rays == set(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]), || format!("sigma {:?}", r.rays))?;
    let n1 = set(&[&[0, 1, 1], &[0, 0, 1]]);
    let n2 = set(&[&[1, 1, 0], &[0, 1, 0]]);
    let mut first = Vec::new();
    for &l in &d.psi {
        first.push(add_degeneration_traced(&d, l).map_err(|e| e.to_string())?.datum);
    }
    let got: BTreeSet<BTreeSet<Vec<i64>>> = first.iter().map(hats).collect();
    ensure(got == [n1.clone(), n2.clone()].into_iter().collect(), || format!("first level {got:?}"))?;
    let expected_blocks = |n: &BTreeSet<Vec<i64>>| -> Vec<(Vec<usize>, usize)> {
        if *n == n1 {
            vec![(vec![1], 1), (vec![2], 0)]
        } else {
            vec![(vec![0], 1), (vec![1], 0)]
        }
    };
    let mut report = Vec::new();
    for n in &first {
        let (mut blocks, total, generic) = block_counts(n)?;
        blocks.sort();
        let mut want = expected_blocks(&hats(n));
        want.sort();
        ensure(blocks == want, || format!("blocks {blocks:?} on {n}"))?;
        ensure(total == 1 && generic == 2, || format!("block-wise {total} vs generic {generic} on {n}"))?;
        let b = base_solve(n, reg(), Branching::All).map_err(|e| e.to_string())?;
        let o = optimized_solve(n, reg(), Branching::All).map_err(|e| e.to_string())?;
        ensure(b.rays == o.rays, || format!("modes disagree on {n}"))?;
        report.push(format!("{total} vs {generic}"));
    }
    Ok(format!("sigma {:?}, counts {}", r.rays, report.join(", ")))
}

fn three_blocks_in_a6() -> Outcome {
    let d = datum("A6", &[0, 3], &[&[1, 1, 0, 0, 0, 0], &[1, 1, 1, 1, 1, 1], &[0, 0, 0, 1, 1, 1], &[0, 0, 0, 0, 0, 1]], &[]);
    let r = spherical_roots(&d, reg(), Mode::Optimized, Branching::All).map_err(|e| e.to_string())?;
    let want = set(&[&[1, 0, 0, 0, 0, 0], &[0, 1, 0, 0, 0, 0], &[0, 0, 1, 0, 0, 0], &[0, 0, 0, 1, 1, 0], &[0, 0, 0, 0, 0, 1]]);
    ensure(r.rays == want, || format!("sigma {:?}", r.rays))?;
    ensure(r.degenerations == 2, || format!("{} degenerations", r.degenerations))?;
    let mut types: Vec<(Vec<usize>, String)> = r.blocks.iter().map(|b| (b.embedding.node_map.clone(), b.embedding.sub_type.to_string())).collect();
    types.sort();
    let expected = vec![(vec![0, 1, 2], "A3".to_string()), (vec![3, 4], "A2".into()), (vec![5], "A1".into())];
    ensure(types == expected, || format!("blocks {types:?}"))?;
    Ok(format!("{} degenerations, blocks {types:?}", r.degenerations))
}

fn table_suite() -> Outcome {
    let start = Instant::now();
    let mut rows = 0;
    let mut cases = 0;
    for entry in &reg().primitives {
        let inst = entry.instances(8);
        if inst.is_empty() {
            continue;
        }
        rows += 1;
        for (n, node, params) in inst {
            let t = format!("{}{n}", entry.series.letter());
            let at = || format!("row {} {t} node {node}", entry.row);
            let d = primitive_datum(&t, node - 1);
            ensure(validate(&d, reg()).is_empty(), || format!("{}: does not validate", at()))?;
            let rk = entry.rk_at(&params).ok_or_else(|| format!("{}: no rk", at()))?;
            let lat = weight_lattice(&d, reg()).map_err(|e| format!("{}: {e}", at()))?;
            ensure(lat.rank() == rk, || format!("{}: lattice rank {} vs rk {rk}", at(), lat.rank()))?;
            let r = spherical_roots(&d, reg(), Mode::Base, Branching::All).map_err(|e| format!("{}: {e}", at()))?;
            ensure(r.roots.len() == rk, || format!("{}: {} roots vs rk {rk}", at(), r.roots.len()))?;
            for root in &r.roots {
                ensure(root.iter().all(|c| c.is_integer() && *c >= Q::zero()), || format!("{}: {root:?} not in Z+Pi", at()))?;
            }
            if rk == 1 {
                let mut e = vec![0; n];
                e[node - 1] = 1;
                let pi_l: Vec<usize> = (0..n).filter(|&i| i != node - 1).collect();
                let hat = d.hat(*d.psi.iter().next().unwrap());
                ensure(hat == brute_hat(&t, &pi_l, &e), || format!("{}: hat {hat:?} disagrees with grouping", at()))?;
                ensure(r.rays == [hat.clone()].into_iter().collect(), || format!("{}: sigma {:?} vs {hat:?}", at(), r.rays))?;
            }
            cases += 1;
        }
    }
    let took = start.elapsed();
    ensure(took < Duration::from_secs(10), || format!("took {took:?}"))?;
    Ok(format!("{rows} rows, {cases} instances, {took:?}"))
}

fn press_left_figure() -> Outcome {
    let at = |w: i64| ((6 - w) / 2) as usize;
    let s = StringOccupancy { top: vec![], p: 6, occupied: [-6, -2, 4].into_iter().map(at).collect() };
    let (t, _) = press_left(&s);
    let mut w = t.weights();
    w.sort();
    ensure(w == vec![-6, -4, -2], || format!("weights {w:?}"))?;
    Ok(format!("{w:?}"))
}

const CASES: u32 = 256;

fn run<S: Strategy>(name: &str, strategy: S, check: impl Fn(S::Value) -> Check) -> Result<(), String> {
    let mut runner = TestRunner::new(Config { cases: CASES, failure_persistence: None, ..Config::default() });
    runner.run(&strategy, |v| check(v).map_err(TestCaseError::fail)).map_err(|e| format!("{name}: {e}"))
}

fn pick<T>(v: &[T], i: usize) -> &T {
    &v[i % v.len()]
}

fn property_suites() -> Outcome {
    run("pair laws", (0..PAIR_LAW_TYPES.len(), 0u32..16, 0usize..200, 0usize..200), |(t, m, i, j)| {
        check_pair_laws(PAIR_LAW_TYPES[t], m, i, j)
    })?;
    run("normalize", (0usize..10_000, 0usize..2), |(i, w)| {
        check_normalize(if w == 0 { pick(class_corpus(), i) } else { pick(levi_corpus(), i) })
    })?;
    run("multiplicative rank", (0usize..10_000, 0usize..8), |(i, k)| check_mult(pick(class_corpus(), i), k))?;
    run("additive split", (0usize..10_000, 0usize..2), |(i, w)| {
        let d = if w == 0 { pick(levi_corpus(), i) } else { pick(strongly_solvable_corpus(), i) };
        if d.psi.len() < 2 {
            return Ok(());
        }
        check_add(d)
    })?;
    run("closure", (0usize..10_000, 0usize..3), |(i, w)| {
        let d = match w {
            0 => pick(class_corpus(), i),
            1 => pick(levi_corpus(), i),
            _ => pick(strongly_solvable_corpus(), i),
        };
        check_closure(d)
    })?;
    Ok(format!("5 suites x {CASES} cases"))
}

fn strongly_solvable() -> Outcome {
    let corpus = strongly_solvable_corpus();
    for d in corpus {
        check_strongly_solvable(d)?;
    }
    Ok(format!("{} data", corpus.len()))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 7] = [
        ("shared class in A3", shared_class_in_a3),
        ("additive pair in A3", additive_pair_in_a3),
        ("three blocks in A6", three_blocks_in_a6),
        ("primitive table", table_suite),
        ("press-left", press_left_figure),
        ("property suites", property_suites),
        ("strongly solvable corpus", strongly_solvable),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let out = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
        match out {
            Ok(note) => println!("PASS {} {name}: {note}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {} {name}: {why}", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
