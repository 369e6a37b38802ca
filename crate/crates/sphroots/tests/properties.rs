//! Randomized invariants of the datum layer and the degenerations.

mod common;

use proptest::prelude::*;

use common::*;

fn config() -> ProptestConfig {
    ProptestConfig { cases: 256, ..ProptestConfig::default() }
}

fn pick<T>(v: &[T], i: usize) -> &T {
    &v[i % v.len()]
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn c_root_pair_laws(t in 0usize..PAIR_LAW_TYPES.len(), mask in 0u32..16, i in 0usize..200, j in 0usize..200) {
        check_pair_laws(PAIR_LAW_TYPES[t], mask, i, j).map_err(TestCaseError::fail)?;
    }

    #[test]
    fn normalize_is_idempotent_and_keeps_classes(i in 0usize..10_000, which in 0usize..2) {
        let d = if which == 0 { pick(class_corpus(), i) } else { pick(levi_corpus(), i) };
        check_normalize(d).map_err(TestCaseError::fail)?;
    }

    #[test]
    fn multiplicative_step_drops_rank_by_one(i in 0usize..10_000, k in 0usize..8) {
        check_mult(pick(class_corpus(), i), k).map_err(TestCaseError::fail)?;
    }

    #[test]
    fn additive_step_splits_lattice(i in 0usize..10_000, which in 0usize..2) {
        let d = if which == 0 { pick(levi_corpus(), i) } else { pick(strongly_solvable_corpus(), i) };
        prop_assume!(d.psi.len() >= 2);
        check_add(d).map_err(TestCaseError::fail)?;
    }

    #[test]
    fn closure_holds_after_degenerations(i in 0usize..10_000, which in 0usize..3) {
        let d = match which {
            0 => pick(class_corpus(), i),
            1 => pick(levi_corpus(), i),
            _ => pick(strongly_solvable_corpus(), i),
        };
        prop_assume!(d.psi.len() >= 2);
        check_closure(d).map_err(TestCaseError::fail)?;
    }

    #[test]
    fn strongly_solvable_paths_agree(i in 0usize..10_000) {
        check_strongly_solvable(pick(strongly_solvable_corpus(), i)).map_err(TestCaseError::fail)?;
    }
}

#[test]
fn corpora_are_populated() {
    assert!(class_corpus().len() >= 20, "{}", class_corpus().len());
    assert!(levi_corpus().len() >= 50, "{}", levi_corpus().len());
    assert!(strongly_solvable_corpus().len() >= 50, "{}", strongly_solvable_corpus().len());
}
