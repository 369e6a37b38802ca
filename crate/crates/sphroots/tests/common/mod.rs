//! Shared test helpers: brute-force oracles, datum corpora and property checks.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::sync::{Arc, OnceLock};

use itertools::Itertools;
use num_rational::Rational64 as Q;
use num_traits::Zero;

use sphroots::degen::{add_degeneration_traced, mult_degeneration};
use sphroots::engine::{algorithm_d, base_solve, optimized_solve, Branching, Tracked};
use sphroots::lattice::{qvec, Sublattice};
use sphroots::levi::LeviDatum;
use sphroots::rootsystem::{build_root_system, LatticeModel, RootSystem, Series};
use sphroots::sphdata::Registry;
use sphroots::subgroup::{classes, closure_violations, normalize, sm_decomposition, validate, weight_lattice, SphericalDatum, XiGen};

pub fn reg() -> &'static Registry {
    Registry::builtin()
}

pub fn rs(t: &str) -> Arc<RootSystem> {
    Arc::new(build_root_system(&t.parse().unwrap(), LatticeModel::Sc))
}

pub fn datum(t: &str, pi_l: &[usize], psi: &[&[i64]], xi: &[XiGen]) -> SphericalDatum {
    let roots: Vec<Vec<i64>> = psi.iter().map(|r| r.to_vec()).collect();
    SphericalDatum::from_roots(rs(t), pi_l, &roots, xi).unwrap()
}

pub fn hats(d: &SphericalDatum) -> BTreeSet<Vec<i64>> {
    d.psi.iter().map(|&l| d.hat(l)).collect()
}

pub fn id_of(d: &SphericalDatum, hat: &[i64]) -> usize {
    *d.psi.iter().find(|&&l| d.hat(l) == hat).expect("hat present")
}

pub fn set(v: &[&[i64]]) -> BTreeSet<Vec<i64>> {
    v.iter().map(|r| r.to_vec()).collect()
}

pub fn lattice_root_coords(rows: &[Vec<Q>], n: usize) -> Sublattice {
    Sublattice::new(n, rows)
}

// ---------- Cartan matrices from Dynkin data, written out by hand ----------

/// Cartan matrix with entry (i, j) = <alpha_i, alpha_j coroot>, Bourbaki numbering.
pub fn hand_cartan(series: char, n: usize) -> Vec<Vec<i64>> {
    let mut c = vec![vec![0i64; n]; n];
    for (i, row) in c.iter_mut().enumerate() {
        row[i] = 2;
    }
    let mut link = |i: usize, j: usize, cij: i64, cji: i64| {
        c[i][j] = cij;
        c[j][i] = cji;
    };
    match series {
        'A' => (0..n.saturating_sub(1)).for_each(|i| link(i, i + 1, -1, -1)),
        'B' => {
            (0..n - 2).for_each(|i| link(i, i + 1, -1, -1));
            link(n - 2, n - 1, -2, -1);
        }
        'C' => {
            (0..n - 2).for_each(|i| link(i, i + 1, -1, -1));
            link(n - 2, n - 1, -1, -2);
        }
        'D' => {
            (0..n - 2).for_each(|i| link(i, i + 1, -1, -1));
            link(n - 3, n - 1, -1, -1);
        }
        'E' => {
            link(0, 2, -1, -1);
            link(1, 3, -1, -1);
            (2..n - 1).for_each(|i| link(i, i + 1, -1, -1));
        }
        'F' => {
            link(0, 1, -1, -1);
            link(1, 2, -2, -1);
            link(2, 3, -1, -1);
        }
        'G' => link(0, 1, -1, -3),
        _ => panic!("series {series}"),
    }
    c
}

/// Symmetrizer d with (alpha_i, alpha_j) = d_j * cartan[i][j], for a connected diagram.
fn symmetrizer(c: &[Vec<i64>]) -> Vec<Q> {
    let n = c.len();
    let mut d = vec![Q::zero(); n];
    d[0] = Q::from(1);
    let mut queue = VecDeque::from([0]);
    while let Some(i) = queue.pop_front() {
        for j in 0..n {
            if j != i && c[i][j] != 0 && d[j].is_zero() {
                d[j] = d[i] * Q::from(c[j][i]) / Q::from(c[i][j]);
                queue.push_back(j);
            }
        }
    }
    d
}

pub fn hand_form(c: &[Vec<i64>], x: &[i64], y: &[i64]) -> Q {
    let d = symmetrizer(c);
    let mut s = Q::zero();
    for i in 0..c.len() {
        for j in 0..c.len() {
            s += Q::from(x[i] * y[j] * c[i][j]) * d[j];
        }
    }
    s
}

/// All roots as the orbit of the simple roots under simple reflections.
pub fn weyl_orbit_roots(c: &[Vec<i64>]) -> BTreeSet<Vec<i64>> {
    let n = c.len();
    let mut seen = BTreeSet::new();
    let mut queue = VecDeque::new();
    for i in 0..n {
        let mut e = vec![0; n];
        e[i] = 1;
        seen.insert(e.clone());
        queue.push_back(e);
    }
    while let Some(b) = queue.pop_front() {
        for i in 0..n {
            let pair: i64 = (0..n).map(|j| b[j] * c[j][i]).sum();
            let mut r = b.clone();
            r[i] -= pair;
            if seen.insert(r.clone()) {
                queue.push_back(r);
            }
        }
    }
    seen
}

pub fn positive(roots: &BTreeSet<Vec<i64>>) -> Vec<Vec<i64>> {
    roots.iter().filter(|r| r.iter().all(|&x| x >= 0)).cloned().collect()
}

pub fn height(r: &[i64]) -> i64 {
    r.iter().sum()
}

/// Strongly orthogonal cascade in the nilradical of a cominuscule maximal parabolic.
/// Returns None when the node is not cominuscule.
pub fn cascade(series: char, n: usize, node: usize) -> Option<Vec<Vec<i64>>> {
    let c = hand_cartan(series, n);
    let roots = weyl_orbit_roots(&c);
    let pos = positive(&roots);
    let top = pos.iter().max_by_key(|r| height(r)).unwrap();
    if top[node] != 1 {
        return None;
    }
    let mut left: Vec<Vec<i64>> = pos.iter().filter(|r| r[node] == 1).cloned().collect();
    let mut out = Vec::new();
    while !left.is_empty() {
        let g = left.iter().max_by_key(|r| (height(r), (*r).clone())).unwrap().clone();
        left.retain(|b| {
            let plus: Vec<i64> = b.iter().zip(&g).map(|(x, y)| x + y).collect();
            let minus: Vec<i64> = b.iter().zip(&g).map(|(x, y)| x - y).collect();
            *b != g && hand_form(&c, b, &g).is_zero() && !roots.contains(&plus) && !roots.contains(&minus)
        });
        out.push(g);
    }
    Some(out)
}

/// The primitive datum of a maximal parabolic: Levi on all other nodes, one active root, K = L.
pub fn primitive_datum(t: &str, node: usize) -> SphericalDatum {
    let r = rs(t);
    let pi_l: Vec<usize> = (0..r.rank()).filter(|&i| i != node).collect();
    let mut e = vec![0; r.rank()];
    e[node] = 1;
    SphericalDatum::from_roots(r, &pi_l, &[e], &[]).unwrap()
}

/// Highest root of the fiber through a simple root, by brute-force grouping.
pub fn brute_hat(t: &str, pi_l: &[usize], root: &[i64]) -> Vec<i64> {
    let c = rs(t).cartan().to_vec();
    let roots = weyl_orbit_roots(&c);
    let outer: Vec<usize> = (0..c.len()).filter(|i| !pi_l.contains(i)).collect();
    let key = |r: &[i64]| -> Vec<i64> { outer.iter().map(|&i| r[i]).collect() };
    positive(&roots).into_iter().filter(|r| key(r) == key(root)).max_by_key(|r| height(r)).unwrap()
}

// ---------- corpora ----------

/// Repeatedly add the first part of every closure violation.
pub fn closure_complete(d: &SphericalDatum) -> SphericalDatum {
    let mut cur = d.clone();
    loop {
        let bad = closure_violations(&cur);
        let Some(sphroots::subgroup::Violation::Closure { parts, .. }) = bad.first() else { return cur };
        let ld = &cur.levi;
        let add = (0..ld.num_positive()).find(|&m| ld.hat(m) == parts.0).unwrap();
        let mut psi = cur.psi.clone();
        psi.insert(add);
        cur = cur.with_psi(psi);
    }
}

/// Closure-completed spherical data with trivial Levi in A2 to A4.
pub fn strongly_solvable_corpus() -> &'static Vec<SphericalDatum> {
    static C: OnceLock<Vec<SphericalDatum>> = OnceLock::new();
    C.get_or_init(|| {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for t in ["A2", "A3", "A4"] {
            let ld = Arc::new(LeviDatum::new(rs(t), &[]).unwrap());
            let m = ld.num_positive();
            for mask in 1u32..(1 << m) {
                let psi: BTreeSet<usize> = (0..m).filter(|i| mask >> i & 1 == 1).collect();
                let d = closure_complete(&SphericalDatum::new(ld.clone(), &[], psi));
                if seen.insert(d.key()) && validate(&d, reg()).is_empty() {
                    out.push(d);
                }
            }
        }
        out
    })
}

/// Valid data over small types with every Levi, up to three active roots, K = L.
pub fn levi_corpus() -> &'static Vec<SphericalDatum> {
    static C: OnceLock<Vec<SphericalDatum>> = OnceLock::new();
    C.get_or_init(|| {
        let mut out = Vec::new();
        for t in ["A2", "A3", "B2", "C3", "B3", "G2"] {
            let r = rs(t);
            for lmask in 0u32..(1 << r.rank()) - 1 {
                let pi_l: Vec<usize> = (0..r.rank()).filter(|i| lmask >> i & 1 == 1).collect();
                let ld = Arc::new(LeviDatum::new(r.clone(), &pi_l).unwrap());
                for k in 1..=3 {
                    for psi in (0..ld.num_positive()).combinations(k) {
                        let d = SphericalDatum::new(ld.clone(), &[], psi);
                        if closure_violations(&d).is_empty() && validate(&d, reg()).is_empty() {
                            out.push(d);
                        }
                    }
                }
            }
        }
        out
    })
}

/// Valid data with at least one class of two or more active roots.
pub fn class_corpus() -> &'static Vec<SphericalDatum> {
    static C: OnceLock<Vec<SphericalDatum>> = OnceLock::new();
    C.get_or_init(|| {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for t in ["A3", "A4", "B3", "C3", "B2", "G2"] {
            let r = rs(t);
            for lmask in 0u32..(1 << r.rank()) - 1 {
                let pi_l: Vec<usize> = (0..r.rank()).filter(|i| lmask >> i & 1 == 1).collect();
                let ld = Arc::new(LeviDatum::new(r.clone(), &pi_l).unwrap());
                for k in 2..=4 {
                    for psi in (0..ld.num_positive()).combinations(k) {
                        let probe = SphericalDatum::new(ld.clone(), &[], psi.iter().copied());
                        if !closure_violations(&probe).is_empty() {
                            continue;
                        }
                        // pairs that could be equivalent: equal pairings with the Levi coroots
                        let pairs: Vec<(usize, usize)> = psi
                            .iter()
                            .copied()
                            .tuple_combinations()
                            .filter(|&(a, b)| ld.hat_pairings(a) == ld.hat_pairings(b))
                            .collect();
                        for take in 1..=pairs.len().min(2) {
                            for chosen in pairs.iter().combinations(take) {
                                let gens: Vec<Vec<Q>> =
                                    chosen.iter().map(|&&(a, b)| ld.c_coords(&ld.sub(ld.weight(a), ld.weight(b)))).collect();
                                let d = SphericalDatum::new(ld.clone(), &gens, psi.iter().copied());
                                if classes(&d).psi0.is_empty() || !seen.insert(d.key()) {
                                    continue;
                                }
                                if validate(&d, reg()).is_empty() {
                                    out.push(d);
                                }
                            }
                        }
                    }
                }
            }
        }
        out
    })
}

// ---------- property checks shared by the proptest suite and the acceptance runner ----------

pub type Check = Result<(), String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

pub const PAIR_LAW_TYPES: [&str; 14] = ["A1", "A2", "A3", "A4", "B2", "B3", "B4", "C3", "C4", "D4", "G2", "F4", "A1xA2", "B2xA1"];

/// Sums and differences of C-roots along negative and positive pairings.
pub fn check_pair_laws(t: &str, lmask: u32, i: usize, j: usize) -> Check {
    let r = rs(t);
    let pi_l: Vec<usize> = (0..r.rank()).filter(|k| lmask >> k & 1 == 1).collect();
    if pi_l.len() == r.rank() {
        return Ok(());
    }
    let ld = LeviDatum::new(r, &pi_l).map_err(|e| e.to_string())?;
    let all: Vec<_> = ld.positive_c_roots().iter().chain(ld.negative_c_roots()).map(|m| m.weight.clone()).collect();
    let a = &all[i % all.len()];
    let b = &all[j % all.len()];
    let f = ld.c_form(a, b);
    if f < Q::zero() {
        let s = ld.add(a, b);
        ensure(ld.find(&s).is_some() || s.0.iter().all(|x| x.is_zero()), || format!("{t} {pi_l:?}: {a:?} + {b:?} not a C-root"))?;
    }
    if f > Q::zero() && a != b {
        let s = ld.sub(a, b);
        ensure(ld.find(&s).is_some(), || format!("{t} {pi_l:?}: {a:?} - {b:?} not a C-root"))?;
    }
    Ok(())
}

pub fn check_normalize(d: &SphericalDatum) -> Check {
    let n = normalize(d);
    ensure(normalize(&n).key() == n.key(), || format!("normalize not idempotent on {d}"))?;
    ensure(classes(&n).blocks == classes(d).blocks, || format!("classes move under normalize on {d}"))
}

pub fn lattice_rank(d: &SphericalDatum) -> Result<usize, String> {
    weight_lattice(&normalize(d), reg()).map(|l| l.rank()).map_err(|e| e.to_string())
}

/// A multiplicative step lowers the rank by exactly one and keeps the datum valid.
pub fn check_mult(d: &SphericalDatum, pick: usize) -> Check {
    let cl = classes(&normalize(d));
    let maxes: Vec<usize> = cl.psi0_max.iter().copied().collect();
    let l = maxes[pick % maxes.len()];
    let n = mult_degeneration(&normalize(d), l).map_err(|e| e.to_string())?;
    ensure(validate(&n, reg()).is_empty(), || format!("mult output invalid: {n}"))?;
    let (before, after) = (lattice_rank(d)?, lattice_rank(&n)?);
    ensure(after + 1 == before, || format!("rank {before} -> {after} on {d} at {:?}", d.hat(l)))
}

/// An additive step splits off the hat as a direct summand, and different roots give different lattices.
pub fn check_add(d: &SphericalDatum) -> Check {
    let rsys = d.rs();
    let whole = weight_lattice(d, reg()).map_err(|e| e.to_string())?;
    let mut seen: Vec<Sublattice> = Vec::new();
    for &l in &d.psi {
        let out = add_degeneration_traced(d, l).map_err(|e| e.to_string())?;
        ensure(validate(&out.datum, reg()).is_empty(), || format!("add output invalid: {}", out.datum))?;
        let part = weight_lattice(&out.datum, reg()).map_err(|e| e.to_string())?;
        let delta = Sublattice::new(rsys.rank(), &[rsys.to_lattice_coords(&qvec(&out.delta))]);
        ensure(part.sum(&delta) == whole && part.rank() + 1 == whole.rank(), || {
            format!("lattice does not split off {:?} on {d}", out.delta)
        })?;
        ensure(!seen.contains(&part), || format!("two additive steps give the same lattice on {d}"))?;
        seen.push(part);
    }
    Ok(())
}

/// Degeneration outputs pass the closure test; deleting a mandatory root breaks it.
pub fn check_closure(d: &SphericalDatum) -> Check {
    let n = normalize(d);
    let cl = classes(&n);
    let outs: Vec<SphericalDatum> = if cl.psi0.is_empty() {
        n.psi.iter().map(|&l| add_degeneration_traced(&n, l).map(|o| o.datum)).collect::<Result<_, _>>()
    } else {
        cl.psi0_max.iter().map(|&l| mult_degeneration(&n, l)).collect::<Result<_, _>>()
    }
    .map_err(|e| e.to_string())?;
    for o in &outs {
        ensure(closure_violations(o).is_empty(), || format!("closure fails on degeneration {o}"))?;
        mutate_check(o)?;
    }
    mutate_check(d)
}

fn mutate_check(d: &SphericalDatum) -> Check {
    let ld = &d.levi;
    for &l in &d.psi {
        for m in 0..ld.num_positive() {
            let Some(k) = ld.diff_positive(l, m) else { continue };
            let (a, b) = (d.psi.contains(&m), d.psi.contains(&k));
            if a != b {
                let mandatory = if a { m } else { k };
                let mut psi = d.psi.clone();
                psi.remove(&mandatory);
                let cut = d.with_psi(psi);
                ensure(!closure_violations(&cut).is_empty(), || format!("deleting {:?} from {d} went unnoticed", d.hat(mandatory)))?;
            }
        }
    }
    Ok(())
}

/// Block-wise and base rays agree; counts stay within the published bounds.
pub fn check_strongly_solvable(d: &SphericalDatum) -> Check {
    let b = base_solve(d, reg(), Branching::All).map_err(|e| e.to_string())?;
    let o = optimized_solve(d, reg(), Branching::All).map_err(|e| e.to_string())?;
    ensure(b.rays == o.rays, || format!("base {:?} vs optimized {:?} on {d}", b.rays, o.rays))?;
    let r = b.rays.len();
    let p = o.blocks.len();
    for blk in &o.blocks {
        ensure(blk.degenerations <= 3, || format!("block {:?} used {} steps on {d}", blk.block, blk.degenerations))?;
    }
    ensure(o.degenerations <= p * r - r, || format!("{} steps exceed p*r-r = {} on {d}", o.degenerations, p * r - r))?;
    Ok(())
}

/// Degeneration count of the block-wise path on every block.
pub fn d_counts(d: &SphericalDatum) -> Result<Vec<usize>, String> {
    let mut out = Vec::new();
    for block in sm_decomposition(d) {
        let mut t = Tracked::new(d.clone(), block);
        algorithm_d(&mut t).map_err(|e| e.to_string())?;
        out.push(t.degenerations);
    }
    Ok(out)
}

pub fn rank_histogram(c: &[SphericalDatum]) -> BTreeMap<usize, usize> {
    let mut h = BTreeMap::new();
    for d in c {
        *h.entry(d.psi.len()).or_insert(0) += 1;
    }
    h
}

pub fn series_char(s: Series) -> char {
    s.letter()
}
