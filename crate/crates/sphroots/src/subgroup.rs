//! Spherical data: a Levi, a lattice cutting out the center of K, and the set
//! of active C-roots.

use std::collections::hash_map::DefaultHasher;
use std::collections::BTreeSet;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use num_rational::Rational64 as Q;
use num_traits::Zero;
use thiserror::Error;

use crate::lattice::{kernel, LinearMap, Sublattice};
use crate::levi::{LeviDatum, LeviError};
use crate::rootsystem::{RootSystem, RootSystemError};
use crate::sphdata::{self, module_components, Registry, SphDataError, SphericalModuleDescriptor};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SubgroupError {
    #[error("{0:?} is not a positive root outside the Levi")]
    NotActiveRoot(Vec<i64>),
    #[error("xi entry: {0}")]
    BadXi(String),
    #[error(transparent)]
    Levi(#[from] LeviError),
    #[error(transparent)]
    RootSystem(#[from] RootSystemError),
    #[error(transparent)]
    SphData(#[from] SphDataError),
}

#[derive(Clone, Debug)]
pub struct SphericalDatum {
    pub levi: Arc<LeviDatum>,
    /// saturated sublattice of the C-coordinates
    pub xi: Sublattice,
    /// positive C-root ids
    pub psi: BTreeSet<usize>,
}

/// A generator of the xi lattice as written in a datum file.
#[derive(Clone, Debug, PartialEq)]
pub enum XiGen {
    /// weight in simple-root coordinates
    Vector(Vec<Q>),
    /// difference of two entries of the psi list (0-based)
    Diff(usize, usize),
}

/// Hashable canonical form of a datum.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DatumKey {
    pub dtype: String,
    pub pi_l: Vec<usize>,
    pub hats: Vec<Vec<i64>>,
    pub xi: Sublattice,
}

impl SphericalDatum {
    pub fn new(levi: Arc<LeviDatum>, xi_gens: &[Vec<Q>], psi: impl IntoIterator<Item = usize>) -> Self {
        let xi = Sublattice::new(levi.c_dim(), xi_gens).saturate();
        SphericalDatum { levi, xi, psi: psi.into_iter().collect() }
    }

    /// Build from roots: each psi entry is any root of its fiber.
    pub fn from_roots(rs: Arc<RootSystem>, pi_l: &[usize], psi_roots: &[Vec<i64>], xi: &[XiGen]) -> Result<Self, SubgroupError> {
        let levi = Arc::new(LeviDatum::new(rs, pi_l)?);
        let mut ids = Vec::new();
        for r in psi_roots {
            if r.len() != levi.rs().rank() || !levi.rs().is_root(r) {
                return Err(SubgroupError::NotActiveRoot(r.clone()));
            }
            let id = levi.find_positive(&levi.restrict_int(r)).ok_or_else(|| SubgroupError::NotActiveRoot(r.clone()))?;
            ids.push(id);
        }
        let mut gens = Vec::new();
        for g in xi {
            let c = match g {
                XiGen::Vector(v) => {
                    if v.len() != levi.rs().rank() {
                        return Err(SubgroupError::BadXi(format!("expected {} coordinates", levi.rs().rank())));
                    }
                    levi.c_coords(&levi.restrict(v))
                }
                XiGen::Diff(a, b) => {
                    let (Some(&x), Some(&y)) = (ids.get(*a), ids.get(*b)) else {
                        return Err(SubgroupError::BadXi(format!("psi index out of range in {a}-{b}")));
                    };
                    levi.c_coords(&levi.sub(levi.weight(x), levi.weight(y)))
                }
            };
            gens.push(c);
        }
        Ok(SphericalDatum::new(levi, &gens, ids))
    }

    pub fn rs(&self) -> &Arc<RootSystem> {
        self.levi.rs()
    }

    pub fn hat(&self, id: usize) -> Vec<i64> {
        self.levi.hat(id)
    }

    pub fn with_psi(&self, psi: BTreeSet<usize>) -> Self {
        SphericalDatum { levi: self.levi.clone(), xi: self.xi.clone(), psi }
    }

    pub fn key(&self) -> DatumKey {
        let mut hats: Vec<Vec<i64>> = self.psi.iter().map(|&l| self.hat(l)).collect();
        hats.sort();
        DatumKey { dtype: self.rs().dtype.to_string(), pi_l: self.levi.pi_l().to_vec(), hats, xi: self.xi.clone() }
    }

    pub fn fingerprint(&self) -> u64 {
        let mut h = DefaultHasher::new();
        self.key().hash(&mut h);
        h.finish()
    }

    /// V* with one summand per class.
    pub fn descriptor(&self) -> SphericalModuleDescriptor {
        let reps: Vec<usize> = classes(self).blocks.iter().map(|b| b[0]).collect();
        SphericalModuleDescriptor { levi: self.levi.clone(), summands: reps, xi: self.xi.clone() }
    }

    /// Union of the supports of the hats of a set of active roots.
    pub fn support_of(&self, set: &BTreeSet<usize>) -> BTreeSet<usize> {
        set.iter().flat_map(|&l| RootSystem::support_int(&self.hat(l))).collect()
    }
}

impl fmt::Display for SphericalDatum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let levi: Vec<String> = self.levi.pi_l().iter().map(|i| (i + 1).to_string()).collect();
        let hats: Vec<String> = self.psi.iter().map(|&l| format!("{:?}", self.hat(l))).collect();
        write!(f, "{} levi {{{}}} psi {{{}}} xi rank {}", self.rs().dtype, levi.join(","), hats.join(" "), self.xi.rank())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Classes {
    /// equivalence classes of psi, each sorted, ordered by least element
    pub blocks: Vec<Vec<usize>>,
    pub psi0: BTreeSet<usize>,
    pub psi0_max: BTreeSet<usize>,
}

impl Classes {
    pub fn class_of(&self, l: usize) -> &[usize] {
        self.blocks.iter().find(|b| b.contains(&l)).expect("element of psi")
    }
}

pub fn equivalent(d: &SphericalDatum, a: usize, b: usize) -> bool {
    let ld = &d.levi;
    ld.hat_pairings(a) == ld.hat_pairings(b) && d.xi.contains(&ld.c_coords(&ld.sub(ld.weight(a), ld.weight(b))))
}

pub fn classes(d: &SphericalDatum) -> Classes {
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    for &l in &d.psi {
        match blocks.iter_mut().find(|b| equivalent(d, b[0], l)) {
            Some(b) => b.push(l),
            None => blocks.push(vec![l]),
        }
    }
    let psi0: BTreeSet<usize> = blocks.iter().filter(|b| b.len() >= 2).flatten().copied().collect();
    let ld = &d.levi;
    let psi0_max = psi0
        .iter()
        .copied()
        .filter(|&l| {
            !(0..ld.num_positive()).any(|m| matches!(ld.find_positive(&ld.add(ld.weight(l), ld.weight(m))), Some(s) if d.psi.contains(&s)))
        })
        .collect();
    Classes { blocks, psi0, psi0_max }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// an active root splits into two positive C-roots neither of which is active
    Closure { lambda: Vec<i64>, parts: (Vec<i64>, Vec<i64>) },
    /// two equivalent active roots differ by a C-root
    ClassRootDifference(Vec<i64>, Vec<i64>),
    ClassPositivePairing(Vec<i64>, Vec<i64>),
    /// a class meets the maximal elements without lying inside them
    MixedMaximalClass(Vec<Vec<i64>>),
    /// a class of size two or more cannot be shifted into a maximal class
    NoChainToMaximal(Vec<Vec<i64>>),
    /// shifting a class by an inactive root hits active roots in part of the class or in several classes
    ClassShiftSplits { class: Vec<Vec<i64>>, by: Vec<i64> },
    /// two maximal elements pair positively
    AcuteMaximal(Vec<i64>, Vec<i64>),
    XiNotSaturated,
    NotSpherical,
    UnknownModule(String),
    Registry(String),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Closure { lambda, parts } => write!(f, "closure: {lambda:?} = {:?} + {:?} with neither active", parts.0, parts.1),
            Violation::ClassRootDifference(a, b) => write!(f, "equivalent {a:?} and {b:?} differ by a C-root"),
            Violation::ClassPositivePairing(a, b) => write!(f, "equivalent {a:?} and {b:?} pair positively"),
            Violation::MixedMaximalClass(c) => write!(f, "class {c:?} is only partly maximal"),
            Violation::NoChainToMaximal(c) => write!(f, "class {c:?} has no chain to a maximal class"),
            Violation::ClassShiftSplits { class, by } => write!(f, "class {class:?} shifted by {by:?} splits"),
            Violation::AcuteMaximal(a, b) => write!(f, "maximal {a:?} and {b:?} pair positively"),
            Violation::XiNotSaturated => write!(f, "xi is not saturated"),
            Violation::NotSpherical => write!(f, "the module is not spherical"),
            Violation::UnknownModule(s) => write!(f, "unknown module component: {s}"),
            Violation::Registry(s) => write!(f, "registry: {s}"),
        }
    }
}

/// Closure violations only.
pub fn closure_violations(d: &SphericalDatum) -> Vec<Violation> {
    let ld = &d.levi;
    let mut out = Vec::new();
    for &l in &d.psi {
        for m in 0..ld.num_positive() {
            if let Some(n) = ld.diff_positive(l, m) {
                if m <= n && !d.psi.contains(&m) && !d.psi.contains(&n) {
                    out.push(Violation::Closure { lambda: d.hat(l), parts: (d.hat(m), d.hat(n)) });
                }
            }
        }
    }
    out
}

/// Every structural problem with the datum; empty means valid.
pub fn validate(d: &SphericalDatum, reg: &Registry) -> Vec<Violation> {
    let mut out = closure_violations(d);
    let ld = &d.levi;
    let cl = classes(d);
    for b in &cl.blocks {
        let inside = b.iter().filter(|l| cl.psi0_max.contains(l)).count();
        if inside > 0 && inside < b.len() {
            out.push(Violation::MixedMaximalClass(b.iter().map(|&l| d.hat(l)).collect()));
        } else if inside == 0 && b.len() >= 2 && crate::degen::theta_chain(d, &cl, b).is_err() {
            out.push(Violation::NoChainToMaximal(b.iter().map(|&l| d.hat(l)).collect()));
        }
    }
    for b in cl.blocks.iter().filter(|b| b.len() >= 2) {
        for mu in (0..ld.num_positive()).filter(|mu| !d.psi.contains(mu)) {
            let hits: Vec<usize> = b
                .iter()
                .filter_map(|&x| ld.find_positive(&ld.add(ld.weight(x), ld.weight(mu))))
                .filter(|y| d.psi.contains(y))
                .collect();
            if hits.is_empty() {
                continue;
            }
            let one_class = cl.blocks.iter().any(|c| hits.iter().all(|y| c.contains(y)));
            if hits.len() < b.len() || !one_class {
                out.push(Violation::ClassShiftSplits { class: b.iter().map(|&l| d.hat(l)).collect(), by: d.hat(mu) });
            }
        }
    }
    let maxes: Vec<usize> = cl.psi0_max.iter().copied().collect();
    for (i, &x) in maxes.iter().enumerate() {
        for &y in &maxes[i + 1..] {
            if ld.c_form(ld.weight(x), ld.weight(y)) > Q::zero() {
                out.push(Violation::AcuteMaximal(d.hat(x), d.hat(y)));
            }
        }
    }
    for b in cl.blocks {
        for (i, &x) in b.iter().enumerate() {
            for &y in &b[i + 1..] {
                if ld.find(&ld.sub(ld.weight(x), ld.weight(y))).is_some() {
                    out.push(Violation::ClassRootDifference(d.hat(x), d.hat(y)));
                }
                if ld.c_form(ld.weight(x), ld.weight(y)) > Q::zero() {
                    out.push(Violation::ClassPositivePairing(d.hat(x), d.hat(y)));
                }
            }
        }
    }
    if !d.xi.is_saturated() {
        out.push(Violation::XiNotSaturated);
    }
    if out.is_empty() {
        match sphdata::is_spherical(&d.descriptor(), reg) {
            Ok(true) => {}
            Ok(false) => out.push(Violation::NotSpherical),
            Err(SphDataError::UnknownModule(s)) => out.push(Violation::UnknownModule(s)),
            Err(e) => out.push(Violation::Registry(e.to_string())),
        }
    }
    out
}

/// Replace xi by the saturation of the differences of equivalent maximal elements.
pub fn normalize(d: &SphericalDatum) -> SphericalDatum {
    let cl = classes(d);
    let ld = &d.levi;
    let mut gens = Vec::new();
    for b in &cl.blocks {
        let maxes: Vec<usize> = b.iter().copied().filter(|l| cl.psi0_max.contains(l)).collect();
        for w in maxes.windows(2) {
            gens.push(ld.c_coords(&ld.sub(ld.weight(w[0]), ld.weight(w[1]))));
        }
    }
    SphericalDatum::new(d.levi.clone(), &gens, d.psi.iter().copied())
}

/// Restriction to K as a map on lattice coordinates of X(T).
pub fn restriction_on_lattice(d: &SphericalDatum) -> LinearMap {
    let rs = d.rs();
    let iota = sphdata::restriction_map(&d.levi, &d.xi);
    let basis = rs.lattice_basis_matrix();
    let n = rs.rank();
    let rows = iota
        .rows
        .iter()
        .map(|row| (0..n).map(|i| (0..n).map(|k| row[k] * basis[i][k]).sum()).collect())
        .collect();
    LinearMap::new(n, rows)
}

/// Weight lattice of G/H in lattice coordinates of X(T).
pub fn weight_lattice(d: &SphericalDatum, reg: &Registry) -> Result<Sublattice, SubgroupError> {
    let rs = d.rs();
    let ker = kernel(&restriction_on_lattice(d));
    let gens: Vec<Vec<Q>> = sphdata::free_generators(&d.descriptor(), reg)?
        .into_iter()
        .map(|(g, _)| rs.to_lattice_coords(&g))
        .collect();
    Ok(ker.sum(&Sublattice::new(rs.rank(), &gens)))
}

/// Lattice basis vectors rewritten in simple-root coordinates.
pub fn lattice_in_root_coords(d: &SphericalDatum, lat: &Sublattice) -> Vec<Vec<Q>> {
    lat.basis().iter().map(|b| d.rs().from_lattice_coords(b)).collect()
}

/// Components of psi linked through the Levi factors acting on them.
pub fn sm_decomposition(d: &SphericalDatum) -> Vec<BTreeSet<usize>> {
    let desc = SphericalModuleDescriptor { levi: d.levi.clone(), summands: d.psi.iter().copied().collect(), xi: d.xi.clone() };
    let mut out: Vec<BTreeSet<usize>> = module_components(&desc).into_iter().map(|c| c.summands.into_iter().collect()).collect();
    out.sort();
    out
}

/// Active roots outside the block whose hat support lies in the block's support.
pub fn upsilon(d: &SphericalDatum, block: &BTreeSet<usize>) -> BTreeSet<usize> {
    let supp = d.support_of(block);
    d.psi
        .iter()
        .copied()
        .filter(|m| !block.contains(m))
        .filter(|&m| RootSystem::support_int(&d.hat(m)).iter().all(|i| supp.contains(i)))
        .collect()
}

/// Elements nu of the set such that mu - nu is not a positive C-root for any other mu.
pub fn upper_elements(d: &SphericalDatum, set: &BTreeSet<usize>) -> BTreeSet<usize> {
    let ld = &d.levi;
    set.iter().copied().filter(|&nu| !set.iter().any(|&mu| mu != nu && ld.diff_positive(mu, nu).is_some())).collect()
}

/// The upper element with the lexicographically greatest hat.
pub fn choose_upper(d: &SphericalDatum, set: &BTreeSet<usize>) -> Option<usize> {
    upper_elements(d, set).into_iter().max_by_key(|&l| d.hat(l))
}
