//! Standard Levi subgroups and the weights of their connected center.
//!
//! A character of the center is represented by the unique weight in its class
//! modulo the span of the Levi simple roots that is orthogonal to that span.
//! This only changes the Levi coordinates, so the remaining coordinates are
//! the restriction itself and are used as integral coordinates on X(C).

use std::collections::HashMap;
use std::sync::Arc;

use num_rational::Rational64 as Q;
use num_traits::Zero;
use thiserror::Error;

use crate::lattice::qmat_inverse;
use crate::rootsystem::{diagram_components, RootSystem};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LeviError {
    #[error("simple root index {0} out of range")]
    BadIndex(usize),
    #[error("fiber of {0:?} has no unique extremal root")]
    Fiber(Vec<i64>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CWeight(pub Vec<Q>);

/// Signed reference to a C-root.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CRoot {
    Pos(usize),
    Neg(usize),
}

/// The L-module spanned by the root spaces over one C-root.
#[derive(Clone, Debug)]
pub struct CModule {
    pub weight: CWeight,
    /// root ids in the fiber
    pub fiber: Vec<usize>,
    /// root id of the unique highest root of the fiber
    pub hat: usize,
    /// root id of the unique lowest root of the fiber
    pub lowest: usize,
    pub dim: usize,
}

#[derive(Debug)]
pub struct LeviDatum {
    rs: Arc<RootSystem>,
    pi_l: Vec<usize>,
    in_l: Vec<bool>,
    c_index: Vec<usize>,
    gram_inv: Vec<Vec<Q>>,
    positive: Vec<CModule>,
    negative: Vec<CModule>,
    lookup: HashMap<CWeight, CRoot>,
    root_class: Vec<Option<CRoot>>,
}

impl LeviDatum {
    pub fn new(rs: Arc<RootSystem>, pi_l: &[usize]) -> Result<Self, LeviError> {
        let n = rs.rank();
        let mut pi_l: Vec<usize> = pi_l.to_vec();
        pi_l.sort();
        pi_l.dedup();
        if let Some(&bad) = pi_l.iter().find(|&&i| i >= n) {
            return Err(LeviError::BadIndex(bad));
        }
        let mut in_l = vec![false; n];
        for &i in &pi_l {
            in_l[i] = true;
        }
        let c_index: Vec<usize> = (0..n).filter(|&i| !in_l[i]).collect();
        let gram: Vec<Vec<Q>> = pi_l
            .iter()
            .map(|&i| pi_l.iter().map(|&j| Q::from(rs.form_matrix()[i][j])).collect())
            .collect();
        let gram_inv = if pi_l.is_empty() { Vec::new() } else { qmat_inverse(&gram).expect("Gram matrix invertible") };

        let mut ld = LeviDatum {
            rs: rs.clone(),
            pi_l,
            in_l,
            c_index,
            gram_inv,
            positive: Vec::new(),
            negative: Vec::new(),
            lookup: HashMap::new(),
            root_class: vec![None; rs.num_roots()],
        };

        // group the positive roots outside the Levi by their restriction
        let mut groups: HashMap<CWeight, Vec<usize>> = HashMap::new();
        for id in 0..rs.num_positive() {
            let r = rs.root(id);
            if ld.in_levi(&r) {
                continue;
            }
            groups.entry(ld.restrict_int(&r)).or_default().push(id);
        }
        let mut keys: Vec<CWeight> = groups.keys().cloned().collect();
        keys.sort_by_key(|w| {
            let c = ld.c_coords(w);
            let h: Q = c.iter().sum();
            (h, c)
        });
        for (k, w) in keys.into_iter().enumerate() {
            let fiber = groups.remove(&w).unwrap();
            let m = ld.make_module(w.clone(), fiber)?;
            let negw = CWeight(w.0.iter().map(|x| -x).collect());
            let negfiber: Vec<usize> = m.fiber.iter().map(|&id| rs.negate_id(id)).collect();
            let nm = ld.make_module(negw.clone(), negfiber)?;
            for &id in &m.fiber {
                ld.root_class[id] = Some(CRoot::Pos(k));
            }
            for &id in &nm.fiber {
                ld.root_class[id] = Some(CRoot::Neg(k));
            }
            ld.lookup.insert(w, CRoot::Pos(k));
            ld.lookup.insert(negw, CRoot::Neg(k));
            ld.positive.push(m);
            ld.negative.push(nm);
        }
        Ok(ld)
    }

    fn make_module(&self, weight: CWeight, mut fiber: Vec<usize>) -> Result<CModule, LeviError> {
        fiber.sort();
        let roots: Vec<Vec<i64>> = fiber.iter().map(|&id| self.rs.root(id)).collect();
        let shifted = |r: &[i64], i: usize, s: i64| {
            let mut v = r.to_vec();
            v[i] += s;
            v
        };
        let tops: Vec<usize> = (0..fiber.len())
            .filter(|&k| self.pi_l.iter().all(|&i| !self.rs.is_root(&shifted(&roots[k], i, 1))))
            .collect();
        let bottoms: Vec<usize> = (0..fiber.len())
            .filter(|&k| self.pi_l.iter().all(|&i| !self.rs.is_root(&shifted(&roots[k], i, -1))))
            .collect();
        if tops.len() != 1 || bottoms.len() != 1 {
            return Err(LeviError::Fiber(roots[0].clone()));
        }
        Ok(CModule { weight, hat: fiber[tops[0]], lowest: fiber[bottoms[0]], dim: fiber.len(), fiber })
    }

    pub fn rs(&self) -> &Arc<RootSystem> {
        &self.rs
    }

    pub fn pi_l(&self) -> &[usize] {
        &self.pi_l
    }

    pub fn in_l(&self, i: usize) -> bool {
        self.in_l[i]
    }

    /// Simple roots outside the Levi; their coordinates are the C-coordinates.
    pub fn c_indices(&self) -> &[usize] {
        &self.c_index
    }

    pub fn c_dim(&self) -> usize {
        self.c_index.len()
    }

    pub fn in_levi(&self, root: &[i64]) -> bool {
        root.iter().enumerate().all(|(i, &c)| c == 0 || self.in_l[i])
    }

    pub fn restrict(&self, chi: &[Q]) -> CWeight {
        let mut v = chi.to_vec();
        if !self.pi_l.is_empty() {
            let b: Vec<Q> = self
                .pi_l
                .iter()
                .map(|&i| {
                    let mut e = vec![Q::zero(); self.rs.rank()];
                    e[i] = Q::from(1);
                    self.rs.form(chi, &e)
                })
                .collect();
            for (a, &i) in self.pi_l.iter().enumerate() {
                let c: Q = self.gram_inv[a].iter().zip(&b).map(|(x, y)| *x * *y).sum();
                v[i] -= c;
            }
        }
        CWeight(v)
    }

    pub fn restrict_int(&self, chi: &[i64]) -> CWeight {
        let q: Vec<Q> = chi.iter().map(|&x| Q::from(x)).collect();
        self.restrict(&q)
    }

    pub fn c_coords(&self, w: &CWeight) -> Vec<Q> {
        self.c_index.iter().map(|&i| w.0[i]).collect()
    }

    /// The C-weight with the given C-coordinates.
    pub fn from_c_coords(&self, c: &[Q]) -> CWeight {
        let mut v = vec![Q::zero(); self.rs.rank()];
        for (k, &i) in self.c_index.iter().enumerate() {
            v[i] = c[k];
        }
        self.restrict(&v)
    }

    pub fn c_form(&self, a: &CWeight, b: &CWeight) -> Q {
        self.rs.form(&a.0, &b.0)
    }

    pub fn num_positive(&self) -> usize {
        self.positive.len()
    }

    pub fn positive_c_roots(&self) -> &[CModule] {
        &self.positive
    }

    pub fn negative_c_roots(&self) -> &[CModule] {
        &self.negative
    }

    pub fn c_root(&self, id: usize) -> &CModule {
        &self.positive[id]
    }

    pub fn module(&self, r: CRoot) -> &CModule {
        match r {
            CRoot::Pos(i) => &self.positive[i],
            CRoot::Neg(i) => &self.negative[i],
        }
    }

    pub fn find(&self, w: &CWeight) -> Option<CRoot> {
        self.lookup.get(w).copied()
    }

    pub fn find_positive(&self, w: &CWeight) -> Option<usize> {
        match self.find(w) {
            Some(CRoot::Pos(i)) => Some(i),
            _ => None,
        }
    }

    /// C-root of a root id, or None for roots of the Levi.
    pub fn class_of_root(&self, root_id: usize) -> Option<CRoot> {
        self.root_class[root_id]
    }

    pub fn weight(&self, id: usize) -> &CWeight {
        &self.positive[id].weight
    }

    pub fn hat(&self, id: usize) -> Vec<i64> {
        self.rs.root(self.positive[id].hat)
    }

    pub fn lowest(&self, id: usize) -> Vec<i64> {
        self.rs.root(self.positive[id].lowest)
    }

    /// Pairings of the hat of a positive C-root with the Levi simple coroots.
    pub fn hat_pairings(&self, id: usize) -> Vec<i64> {
        let h = self.hat(id);
        self.pi_l.iter().map(|&i| self.rs.pairing_int(&h, i)).collect()
    }

    pub fn add(&self, a: &CWeight, b: &CWeight) -> CWeight {
        CWeight(a.0.iter().zip(&b.0).map(|(x, y)| x + y).collect())
    }

    pub fn sub(&self, a: &CWeight, b: &CWeight) -> CWeight {
        CWeight(a.0.iter().zip(&b.0).map(|(x, y)| x - y).collect())
    }

    /// Positive C-root equal to the difference of two positive C-roots.
    pub fn diff_positive(&self, a: usize, b: usize) -> Option<usize> {
        self.find_positive(&self.sub(self.weight(a), self.weight(b)))
    }

    /// Simple factors of the derived Levi, as sorted node lists.
    pub fn factors(&self) -> Vec<Vec<usize>> {
        diagram_components(self.rs.cartan(), &self.pi_l)
    }
}

/// Positive and negative C-root modules.
pub fn c_root_decomposition(ld: &LeviDatum) -> (&[CModule], &[CModule]) {
    (ld.positive_c_roots(), ld.negative_c_roots())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsystem::{build_root_system, LatticeModel};

    fn levi(t: &str, pi_l: &[usize]) -> LeviDatum {
        let rs = Arc::new(build_root_system(&t.parse().unwrap(), LatticeModel::Sc));
        LeviDatum::new(rs, pi_l).unwrap()
    }

    #[test]
    fn a3_middle_node() {
        let ld = levi("A3", &[1]);
        assert_eq!(ld.num_positive(), 3);
        let mut fibers: Vec<Vec<Vec<i64>>> = ld
            .positive_c_roots()
            .iter()
            .map(|m| {
                let mut f: Vec<Vec<i64>> = m.fiber.iter().map(|&i| ld.rs().root(i)).collect();
                f.sort();
                f
            })
            .collect();
        fibers.sort();
        assert_eq!(
            fibers,
            vec![
                vec![vec![0, 0, 1], vec![0, 1, 1]],
                vec![vec![1, 0, 0], vec![1, 1, 0]],
                vec![vec![1, 1, 1]],
            ]
        );
        for m in ld.positive_c_roots() {
            if m.dim == 2 {
                assert!(ld.rs().root(m.hat).iter().sum::<i64>() == 2);
            }
        }
    }

    #[test]
    fn empty_levi_gives_singletons() {
        let ld = levi("B3", &[]);
        assert_eq!(ld.num_positive(), 9);
        assert!(ld.positive_c_roots().iter().all(|m| m.dim == 1));
    }

    #[test]
    fn one_dimensional_center() {
        let ld = levi("A3", &[0, 1]);
        assert_eq!(ld.num_positive(), 1);
        assert_eq!(ld.hat(0), vec![1, 1, 1]);
        assert_eq!(ld.c_root(0).dim, 3);
    }

    #[test]
    fn restriction_keeps_outer_coordinates() {
        let ld = levi("B3", &[1]);
        let w = ld.restrict_int(&[1, 1, 1]);
        assert_eq!(ld.c_coords(&w), vec![Q::from(1), Q::from(1)]);
        let a2 = {
            let mut e = vec![Q::zero(); 3];
            e[1] = Q::from(1);
            e
        };
        assert_eq!(ld.rs().form(&w.0, &a2), Q::zero());
    }
}
