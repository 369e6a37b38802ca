//! One-step degenerations of a spherical datum.
//!
//! A multiplicative step collapses one maximal active root inside its class.
//! An additive step tilts the annihilator of the subalgebra along the sl2
//! through the hat of an active root, pressing every occupied string toward
//! its low end.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::sync::Arc;

use num_rational::Rational64 as Q;
use num_traits::Zero;
use thiserror::Error;

use crate::levi::{CRoot, CWeight, LeviDatum, LeviError};
use crate::subgroup::{classes, Classes, SphericalDatum};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DegenError {
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("no increment chain from the class of {0:?} to a maximal class")]
    NoChain(Vec<i64>),
    #[error("postcondition violated: {0}")]
    Postcondition(String),
    #[error(transparent)]
    Levi(#[from] LeviError),
}

/// Increments leading a class into a maximal class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThetaChain {
    pub class: Vec<usize>,
    /// positive C-root ids added in order
    pub steps: Vec<usize>,
    pub theta: CWeight,
    /// the maximal class containing class + theta
    pub target: Vec<usize>,
}

fn shifted(ld: &LeviDatum, set: &[usize], by: &CWeight) -> Option<Vec<usize>> {
    set.iter().map(|&l| ld.find_positive(&ld.add(ld.weight(l), by))).collect()
}

/// Shortest chain of increments, smallest increment ids first on ties.
pub fn theta_chain(d: &SphericalDatum, cl: &Classes, class: &[usize]) -> Result<ThetaChain, DegenError> {
    let ld = &d.levi;
    let zero = CWeight(vec![Q::zero(); ld.rs().rank()]);
    let in_max_class = |set: &[usize]| {
        cl.blocks.iter().find(|b| b.len() >= 2 && b.iter().all(|x| cl.psi0_max.contains(x)) && set.iter().all(|x| b.contains(x))).cloned()
    };
    let in_psi0_class = |set: &[usize]| cl.blocks.iter().any(|b| b.len() >= 2 && set.iter().all(|x| b.contains(x)));
    let mut queue: VecDeque<(CWeight, Vec<usize>)> = VecDeque::new();
    let mut seen: BTreeSet<CWeight> = BTreeSet::new();
    queue.push_back((zero.clone(), Vec::new()));
    seen.insert(zero);
    while let Some((theta, steps)) = queue.pop_front() {
        let cur = shifted(ld, class, &theta).expect("states stay inside psi");
        if let Some(target) = in_max_class(&cur) {
            return Ok(ThetaChain { class: class.to_vec(), steps, theta, target });
        }
        for mu in 0..ld.num_positive() {
            let next = ld.add(&theta, ld.weight(mu));
            if seen.contains(&next) {
                continue;
            }
            if let Some(img) = shifted(ld, class, &next) {
                if img.iter().all(|x| d.psi.contains(x)) && in_psi0_class(&img) {
                    seen.insert(next.clone());
                    let mut s = steps.clone();
                    s.push(mu);
                    queue.push_back((next, s));
                }
            }
        }
    }
    Err(DegenError::NoChain(d.hat(class[0])))
}

/// Result of a multiplicative step together with the classes that lost an element.
#[derive(Clone, Debug)]
pub struct MultOutcome {
    pub datum: SphericalDatum,
    pub dropped: BTreeSet<usize>,
    pub chains: Vec<ThetaChain>,
}

pub fn mult_degeneration(d: &SphericalDatum, lambda: usize) -> Result<SphericalDatum, DegenError> {
    mult_degeneration_traced(d, lambda).map(|o| o.datum)
}

pub fn mult_degeneration_traced(d: &SphericalDatum, lambda: usize) -> Result<MultOutcome, DegenError> {
    let cl = classes(d);
    if !cl.psi0_max.contains(&lambda) {
        return Err(DegenError::Precondition("the chosen root is not a maximal element of a class of size two or more".into()));
    }
    let ld = &d.levi;
    let mut dropped = BTreeSet::new();
    let mut chains = Vec::new();
    for b in cl.blocks.iter().filter(|b| b.len() >= 2) {
        let chain = theta_chain(d, &cl, b)?;
        let lifted = shifted(ld, b, &chain.theta).expect("chain image");
        if let Some(pos) = lifted.iter().position(|&x| x == lambda) {
            dropped.insert(b[pos]);
        }
        chains.push(chain);
    }
    let psi: BTreeSet<usize> = d.psi.iter().copied().filter(|x| !dropped.contains(x)).collect();
    // xi from the remaining maximal elements, compared with the old equivalence
    let rest: Vec<usize> = cl.psi0_max.iter().copied().filter(|&x| x != lambda).collect();
    let mut gens = Vec::new();
    for (i, &a) in rest.iter().enumerate() {
        for &b in &rest[i + 1..] {
            if cl.class_of(a).contains(&b) {
                gens.push(ld.c_coords(&ld.sub(ld.weight(a), ld.weight(b))));
            }
        }
    }
    let datum = SphericalDatum::new(d.levi.clone(), &gens, psi);
    Ok(MultOutcome { datum, dropped, chains })
}

/// Occupied lines of one string, by position j (weight p - 2j).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StringOccupancy {
    pub top: Vec<i64>,
    pub p: i64,
    pub occupied: BTreeSet<usize>,
}

impl StringOccupancy {
    pub fn weights(&self) -> Vec<i64> {
        self.occupied.iter().map(|&j| self.p - 2 * j as i64).collect()
    }
}

/// Slide occupied lines to the lowest weights, keeping their order.
/// Returns the new occupancy and the position map.
pub fn press_left(s: &StringOccupancy) -> (StringOccupancy, Vec<(usize, usize)>) {
    let p = s.p as usize;
    let mut old: Vec<usize> = s.occupied.iter().copied().collect();
    old.sort_by(|a, b| b.cmp(a)); // ascending weight
    let map: Vec<(usize, usize)> = old.iter().enumerate().map(|(i, &j)| (j, p - i)).collect();
    let occupied = map.iter().map(|&(_, j)| j).collect();
    (StringOccupancy { top: s.top.clone(), p: s.p, occupied }, map)
}

/// Result of an additive step.
#[derive(Clone, Debug)]
pub struct AddOutcome {
    pub datum: SphericalDatum,
    pub delta: Vec<i64>,
    /// old root id -> new root id for every occupied line that stays a root line
    pub shift: HashMap<usize, usize>,
}

pub fn add_degeneration(d: &SphericalDatum, lambda: usize) -> Result<SphericalDatum, DegenError> {
    add_degeneration_traced(d, lambda).map(|o| o.datum)
}

pub fn add_degeneration_traced(d: &SphericalDatum, lambda: usize) -> Result<AddOutcome, DegenError> {
    if !d.psi.contains(&lambda) {
        return Err(DegenError::Precondition("the chosen root is not active".into()));
    }
    if !d.xi.is_zero() || !classes(d).psi0.is_empty() {
        return Err(DegenError::Precondition("additive steps need a normalized datum with no nontrivial classes".into()));
    }
    let ld = &d.levi;
    let rs = ld.rs().clone();
    let delta = ld.hat(lambda);
    let delta_id = rs.root_id(&delta).unwrap();
    let neg_delta_id = rs.negate_id(delta_id);
    let npos = rs.num_positive();

    let occupied = |id: usize| match ld.class_of_root(id) {
        Some(CRoot::Neg(_)) => true,
        Some(CRoot::Pos(c)) => d.psi.contains(&c),
        None => false,
    };

    let mut new_lines: BTreeSet<usize> = BTreeSet::new();
    let mut shift: HashMap<usize, usize> = HashMap::new();
    let mut visited = vec![false; rs.num_roots()];
    visited[delta_id] = true;
    visited[neg_delta_id] = true;
    // the delta string is delta, h_delta, -delta; both root lines are occupied and
    // press to h_delta and -delta
    new_lines.insert(neg_delta_id);
    shift.insert(neg_delta_id, neg_delta_id);

    for top_id in 0..rs.num_roots() {
        if visited[top_id] {
            continue;
        }
        let top = rs.root(top_id);
        let up: Vec<i64> = top.iter().zip(&delta).map(|(a, b)| a + b).collect();
        if rs.is_root(&up) {
            continue;
        }
        let p = rs.pairing_root(&top, &delta);
        let ids: Vec<usize> = (0..=p)
            .map(|j| {
                let v: Vec<i64> = top.iter().zip(&delta).map(|(a, b)| a - j * b).collect();
                rs.root_id(&v).expect("unbroken string")
            })
            .collect();
        for &i in &ids {
            visited[i] = true;
        }
        let occ = StringOccupancy { top, p, occupied: (0..ids.len()).filter(|&j| occupied(ids[j])).collect() };
        let (_, map) = press_left(&occ);
        for (from, to) in map {
            new_lines.insert(ids[to]);
            shift.insert(ids[from], ids[to]);
        }
    }
    if visited.iter().any(|v| !v) {
        return Err(DegenError::Postcondition("strings do not cover the roots".into()));
    }

    // lines inside the Levi are exactly the roots pairing negatively with delta
    for id in 0..rs.num_roots() {
        let r = rs.root(id);
        if ld.in_levi(&r) {
            let want = rs.form_int(&r, &delta) < 0;
            if new_lines.contains(&id) != want {
                return Err(DegenError::Postcondition(format!("Levi line {r:?}")));
            }
        } else if id >= npos && !new_lines.contains(&id) {
            return Err(DegenError::Postcondition(format!("lost the nilradical line {r:?}")));
        }
    }

    let pi_m: Vec<usize> = ld.pi_l().iter().copied().filter(|&i| {
        let mut e = vec![0i64; rs.rank()];
        e[i] = 1;
        rs.form_int(&e, &delta) == 0
    }).collect();
    let lm = Arc::new(LeviDatum::new(rs.clone(), &pi_m)?);
    let u_inf: BTreeSet<usize> = new_lines.iter().copied().filter(|&id| id < npos && !ld.in_levi(&rs.root(id))).collect();
    let mut psi = BTreeSet::new();
    for &id in &u_inf {
        match lm.class_of_root(id) {
            Some(CRoot::Pos(c)) => {
                psi.insert(c);
            }
            _ => return Err(DegenError::Postcondition("new line is not a positive C-root".into())),
        }
    }
    for &c in &psi {
        if lm.c_root(c).fiber.iter().any(|r| !u_inf.contains(r)) {
            return Err(DegenError::Postcondition(format!("partial fiber over {:?}", lm.hat(c))));
        }
    }
    let datum = SphericalDatum::new(lm.clone(), &[], psi);
    shift.retain(|from, _| *from != delta_id);
    Ok(AddOutcome { datum, delta, shift })
}

/// Image of a set of active roots under an additive step, as active roots of the result.
pub fn track(before: &SphericalDatum, outcome: &AddOutcome, set: &BTreeSet<usize>) -> Option<BTreeSet<usize>> {
    let after = &outcome.datum;
    let mut out = BTreeSet::new();
    for &l in set {
        for r in &before.levi.c_root(l).fiber {
            let to = *outcome.shift.get(r)?;
            match after.levi.class_of_root(to) {
                Some(CRoot::Pos(c)) if after.psi.contains(&c) => {
                    out.insert(c);
                }
                _ => return None,
            }
        }
    }
    Some(out)
}
