//! Root systems in Bourbaki numbering.
//!
//! Weights are rational vectors over the simple roots. The invariant form is
//! scaled so that short roots have squared length 2.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_rational::Rational64 as Q;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lattice::{qmat_inverse, Sublattice};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RootSystemError {
    #[error("invalid Dynkin type {0}")]
    InvalidType(String),
    #[error("not a nonnegative integral root combination")]
    NotIntegralPositive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Series {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl Series {
    pub const ALL: [Series; 7] = [Series::A, Series::B, Series::C, Series::D, Series::E, Series::F, Series::G];

    pub fn letter(self) -> char {
        match self {
            Series::A => 'A',
            Series::B => 'B',
            Series::C => 'C',
            Series::D => 'D',
            Series::E => 'E',
            Series::F => 'F',
            Series::G => 'G',
        }
    }

    pub fn from_letter(c: char) -> Option<Series> {
        Series::ALL.into_iter().find(|s| s.letter() == c.to_ascii_uppercase())
    }

    pub fn admits(self, rank: usize) -> bool {
        match self {
            Series::A => rank >= 1,
            Series::B | Series::C => rank >= 2,
            Series::D => rank >= 3,
            Series::E => (6..=8).contains(&rank),
            Series::F => rank == 4,
            Series::G => rank == 2,
        }
    }
}

/// A semisimple type as a list of simple components.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DynkinType {
    pub components: Vec<(Series, usize)>,
}

impl DynkinType {
    pub fn new(components: Vec<(Series, usize)>) -> Result<Self, RootSystemError> {
        for &(s, r) in &components {
            if !s.admits(r) {
                return Err(RootSystemError::InvalidType(format!("{}{}", s.letter(), r)));
            }
        }
        Ok(DynkinType { components })
    }

    pub fn simple(series: Series, rank: usize) -> Result<Self, RootSystemError> {
        Self::new(vec![(series, rank)])
    }

    pub fn rank(&self) -> usize {
        self.components.iter().map(|c| c.1).sum()
    }

    pub fn is_simple(&self) -> bool {
        self.components.len() == 1
    }

    /// Offsets of each component in the concatenated numbering.
    pub fn offsets(&self) -> Vec<usize> {
        let mut out = Vec::new();
        let mut acc = 0;
        for c in &self.components {
            out.push(acc);
            acc += c.1;
        }
        out
    }
}

impl fmt::Display for DynkinType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.components.is_empty() {
            return write!(f, "trivial");
        }
        let parts: Vec<String> = self.components.iter().map(|(s, r)| format!("{}{}", s.letter(), r)).collect();
        write!(f, "{}", parts.join("x"))
    }
}

impl FromStr for DynkinType {
    type Err = RootSystemError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut comps = Vec::new();
        for part in s.split(['x', '+', '*']) {
            let part = part.trim();
            let mut chars = part.chars();
            let series = chars
                .next()
                .and_then(Series::from_letter)
                .ok_or_else(|| RootSystemError::InvalidType(s.to_string()))?;
            let rank: usize = chars.as_str().parse().map_err(|_| RootSystemError::InvalidType(s.to_string()))?;
            comps.push((series, rank));
        }
        DynkinType::new(comps)
    }
}

/// Half squared lengths and off-diagonal form entries of a simple type.
fn simple_form(series: Series, n: usize) -> Vec<Vec<i64>> {
    let mut half = vec![1i64; n];
    let mut edges: Vec<(usize, usize)> = Vec::new();
    match series {
        Series::A => edges.extend((1..n).map(|i| (i - 1, i))),
        Series::B => {
            for h in half.iter_mut().take(n - 1) {
                *h = 2;
            }
            edges.extend((1..n).map(|i| (i - 1, i)));
        }
        Series::C => {
            half[n - 1] = 2;
            edges.extend((1..n).map(|i| (i - 1, i)));
        }
        Series::D => {
            edges.extend((1..n - 1).map(|i| (i - 1, i)));
            edges.push((n - 3, n - 1));
        }
        Series::E => {
            edges.extend([(0, 2), (2, 3), (3, 4), (1, 3)]);
            edges.extend((5..n).map(|i| (i - 1, i)));
        }
        Series::F => {
            half = vec![2, 2, 1, 1];
            edges.extend([(0, 1), (1, 2), (2, 3)]);
        }
        Series::G => {
            half = vec![1, 3];
            edges.push((0, 1));
        }
    }
    let mut b = vec![vec![0i64; n]; n];
    for i in 0..n {
        b[i][i] = 2 * half[i];
    }
    for (i, j) in edges {
        // bonded simple roots pair to minus the larger half length
        let v = -half[i].max(half[j]);
        b[i][j] = v;
        b[j][i] = v;
    }
    b
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LatticeModel {
    /// Character lattice spanned by fundamental weights.
    #[serde(alias = "simply-connected")]
    Sc,
    /// Character lattice equal to the root lattice.
    Adjoint,
}

impl FromStr for LatticeModel {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "sc" | "simply-connected" => Ok(LatticeModel::Sc),
            "adjoint" | "ad" => Ok(LatticeModel::Adjoint),
            _ => Err(format!("unknown lattice model {s}")),
        }
    }
}

#[derive(Clone, Debug)]
pub struct RootSystem {
    pub dtype: DynkinType,
    pub lattice: LatticeModel,
    form: Vec<Vec<i64>>,
    cartan: Vec<Vec<i64>>,
    positive: Vec<Vec<i64>>,
    index: HashMap<Vec<i64>, usize>,
    fundamental: Vec<Vec<Q>>,
}

pub fn build_root_system(dtype: &DynkinType, lattice: LatticeModel) -> RootSystem {
    let n = dtype.rank();
    let mut form = vec![vec![0i64; n]; n];
    for (&(s, r), off) in dtype.components.iter().zip(dtype.offsets()) {
        let b = simple_form(s, r);
        for i in 0..r {
            for j in 0..r {
                form[off + i][off + j] = b[i][j];
            }
        }
    }
    let cartan: Vec<Vec<i64>> =
        (0..n).map(|i| (0..n).map(|j| 2 * form[i][j] / form[j][j]).collect()).collect();

    // positive roots by height, using unbroken strings through simple roots
    let mut positive: Vec<Vec<i64>> = Vec::new();
    let mut index: HashMap<Vec<i64>, usize> = HashMap::new();
    let mut layer: Vec<Vec<i64>> = (0..n)
        .map(|i| {
            let mut v = vec![0; n];
            v[i] = 1;
            v
        })
        .collect();
    while !layer.is_empty() {
        for r in &layer {
            index.insert(r.clone(), positive.len());
            positive.push(r.clone());
        }
        let mut next: Vec<Vec<i64>> = Vec::new();
        for r in &layer {
            for i in 0..n {
                let pair: i64 = (0..n).map(|k| r[k] * cartan[k][i]).sum();
                let mut p = 0;
                let mut down = r.clone();
                loop {
                    down[i] -= 1;
                    if index.contains_key(&down) {
                        p += 1;
                    } else {
                        break;
                    }
                }
                if p - pair > 0 {
                    let mut up = r.clone();
                    up[i] += 1;
                    if !next.contains(&up) {
                        next.push(up);
                    }
                }
            }
        }
        next.sort();
        layer = next;
    }
    let total = positive.len();
    let negs: Vec<Vec<i64>> = positive.iter().map(|r| r.iter().map(|x| -x).collect()).collect();
    for (k, r) in negs.into_iter().enumerate() {
        index.insert(r, total + k);
    }

    let cq: Vec<Vec<Q>> = cartan.iter().map(|row| row.iter().map(|&x| Q::from(x)).collect()).collect();
    let fundamental = if n == 0 { Vec::new() } else { qmat_inverse(&cq).expect("Cartan matrix is invertible") };

    RootSystem { dtype: dtype.clone(), lattice, form, cartan, positive, index, fundamental }
}

impl RootSystem {
    pub fn rank(&self) -> usize {
        self.cartan.len()
    }

    pub fn positive_roots(&self) -> &[Vec<i64>] {
        &self.positive
    }

    pub fn num_positive(&self) -> usize {
        self.positive.len()
    }

    /// All roots; ids below `num_positive` are positive, the rest their negatives in order.
    pub fn num_roots(&self) -> usize {
        2 * self.positive.len()
    }

    pub fn root(&self, id: usize) -> Vec<i64> {
        let n = self.positive.len();
        if id < n {
            self.positive[id].clone()
        } else {
            self.positive[id - n].iter().map(|x| -x).collect()
        }
    }

    pub fn root_id(&self, v: &[i64]) -> Option<usize> {
        self.index.get(v).copied()
    }

    pub fn is_root(&self, v: &[i64]) -> bool {
        self.index.contains_key(v)
    }

    pub fn negate_id(&self, id: usize) -> usize {
        let n = self.positive.len();
        if id < n {
            id + n
        } else {
            id - n
        }
    }

    pub fn cartan(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    pub fn form_matrix(&self) -> &[Vec<i64>] {
        &self.form
    }

    pub fn form_int(&self, x: &[i64], y: &[i64]) -> i64 {
        let n = self.rank();
        let mut s = 0;
        for i in 0..n {
            if x[i] == 0 {
                continue;
            }
            for j in 0..n {
                s += x[i] * self.form[i][j] * y[j];
            }
        }
        s
    }

    pub fn form(&self, x: &[Q], y: &[Q]) -> Q {
        let n = self.rank();
        let mut s = Q::zero();
        for i in 0..n {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..n {
                s += x[i] * Q::from(self.form[i][j]) * y[j];
            }
        }
        s
    }

    /// Pairing of a weight with the coroot of the i-th simple root.
    pub fn pairing(&self, chi: &[Q], i: usize) -> Q {
        (0..self.rank()).map(|k| chi[k] * Q::from(self.cartan[k][i])).sum()
    }

    pub fn pairing_int(&self, chi: &[i64], i: usize) -> i64 {
        (0..self.rank()).map(|k| chi[k] * self.cartan[k][i]).sum()
    }

    /// Pairing of a root-lattice vector with the coroot of an arbitrary root.
    pub fn pairing_root(&self, x: &[i64], root: &[i64]) -> i64 {
        2 * self.form_int(x, root) / self.form_int(root, root)
    }

    pub fn support(&self, beta: &[Q]) -> Result<Vec<usize>, RootSystemError> {
        let mut out = Vec::new();
        for (i, c) in beta.iter().enumerate() {
            if !c.is_integer() || *c < Q::zero() {
                return Err(RootSystemError::NotIntegralPositive);
            }
            if !c.is_zero() {
                out.push(i);
            }
        }
        Ok(out)
    }

    pub fn support_int(beta: &[i64]) -> Vec<usize> {
        beta.iter().enumerate().filter(|(_, &c)| c != 0).map(|(i, _)| i).collect()
    }

    /// The delta-string through gamma: its top, its length parameter and gamma's position.
    pub fn delta_string(&self, delta: &[i64], gamma: &[i64]) -> (Vec<i64>, i64, usize) {
        let neg: Vec<i64> = delta.iter().map(|x| -x).collect();
        if gamma == delta {
            return (delta.to_vec(), 2, 0);
        }
        if gamma == neg.as_slice() {
            return (delta.to_vec(), 2, 2);
        }
        let mut top = gamma.to_vec();
        let mut m = 0;
        loop {
            let up: Vec<i64> = top.iter().zip(delta).map(|(a, b)| a + b).collect();
            if self.is_root(&up) {
                top = up;
                m += 1;
            } else {
                break;
            }
        }
        let p = self.pairing_root(&top, delta);
        (top, p, m)
    }

    /// Fundamental weight in simple-root coordinates.
    pub fn fundamental_weight(&self, i: usize) -> Vec<Q> {
        self.fundamental[i].clone()
    }

    /// Coordinates of a weight in the basis of the chosen character lattice.
    pub fn to_lattice_coords(&self, chi: &[Q]) -> Vec<Q> {
        match self.lattice {
            LatticeModel::Adjoint => chi.to_vec(),
            LatticeModel::Sc => (0..self.rank()).map(|i| self.pairing(chi, i)).collect(),
        }
    }

    pub fn from_lattice_coords(&self, c: &[Q]) -> Vec<Q> {
        match self.lattice {
            LatticeModel::Adjoint => c.to_vec(),
            LatticeModel::Sc => {
                let n = self.rank();
                let mut out = vec![Q::zero(); n];
                for i in 0..n {
                    if c[i].is_zero() {
                        continue;
                    }
                    for k in 0..n {
                        out[k] += c[i] * self.fundamental[i][k];
                    }
                }
                out
            }
        }
    }

    /// Matrix whose rows are simple-root coordinates of the lattice basis vectors.
    pub fn lattice_basis_matrix(&self) -> Vec<Vec<Q>> {
        let n = self.rank();
        (0..n)
            .map(|i| {
                let mut e = vec![Q::zero(); n];
                e[i] = Q::one();
                self.from_lattice_coords(&e)
            })
            .collect()
    }

    pub fn in_character_lattice(&self, chi: &[Q]) -> bool {
        self.to_lattice_coords(chi).iter().all(|c| c.is_integer())
    }

    /// Root lattice as a sublattice of the character lattice (in lattice coordinates).
    pub fn root_lattice(&self) -> Sublattice {
        let n = self.rank();
        let gens: Vec<Vec<Q>> = (0..n)
            .map(|i| {
                let mut e = vec![Q::zero(); n];
                e[i] = Q::one();
                self.to_lattice_coords(&e)
            })
            .collect();
        Sublattice::new(n, &gens)
    }

    pub fn diagram_automorphisms(&self) -> Vec<Vec<usize>> {
        cartan_automorphisms(&self.cartan)
    }

    pub fn highest_root_of(&self, nodes: &[usize]) -> Option<Vec<i64>> {
        self.positive
            .iter()
            .filter(|r| r.iter().enumerate().all(|(i, &c)| c == 0 || nodes.contains(&i)))
            .max_by_key(|r| r.iter().sum::<i64>())
            .cloned()
    }
}

/// Permutations preserving a Cartan matrix.
pub fn cartan_automorphisms(cartan: &[Vec<i64>]) -> Vec<Vec<usize>> {
    let n = cartan.len();
    let mut out = Vec::new();
    let mut perm = vec![usize::MAX; n];
    let mut used = vec![false; n];
    fn rec(k: usize, c: &[Vec<i64>], d: &[Vec<i64>], perm: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>, first_only: bool) -> bool {
        let n = c.len();
        if k == n {
            out.push(perm.clone());
            return first_only;
        }
        for t in 0..n {
            if used[t] || c[k][k] != d[t][t] {
                continue;
            }
            if (0..k).all(|j| c[k][j] == d[t][perm[j]] && c[j][k] == d[perm[j]][t]) {
                perm[k] = t;
                used[t] = true;
                if rec(k + 1, c, d, perm, used, out, first_only) {
                    return true;
                }
                used[t] = false;
                perm[k] = usize::MAX;
            }
        }
        false
    }
    rec(0, cartan, cartan, &mut perm, &mut used, &mut out, false);
    out
}

/// A node bijection `map` with `source[i][j] == target[map[i]][map[j]]`, if one exists.
pub fn cartan_isomorphism(source: &[Vec<i64>], target: &[Vec<i64>]) -> Option<Vec<usize>> {
    if source.len() != target.len() {
        return None;
    }
    let n = source.len();
    let mut out = Vec::new();
    let mut perm = vec![usize::MAX; n];
    let mut used = vec![false; n];
    fn rec(k: usize, c: &[Vec<i64>], d: &[Vec<i64>], perm: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) -> bool {
        let n = c.len();
        if k == n {
            out.push(perm.clone());
            return true;
        }
        for t in 0..n {
            if used[t] || c[k][k] != d[t][t] {
                continue;
            }
            if (0..k).all(|j| c[k][j] == d[t][perm[j]] && c[j][k] == d[perm[j]][t]) {
                perm[k] = t;
                used[t] = true;
                if rec(k + 1, c, d, perm, used, out) {
                    return true;
                }
                used[t] = false;
            }
        }
        false
    }
    rec(0, source, target, &mut perm, &mut used, &mut out);
    out.pop()
}

pub fn simple_cartan(series: Series, rank: usize) -> Vec<Vec<i64>> {
    let b = simple_form(series, rank);
    (0..rank).map(|i| (0..rank).map(|j| 2 * b[i][j] / b[j][j]).collect()).collect()
}

/// Connected components of the Dynkin diagram restricted to `nodes`.
pub fn diagram_components(cartan: &[Vec<i64>], nodes: &[usize]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; cartan.len()];
    let mut out = Vec::new();
    for &s in nodes {
        if seen[s] {
            continue;
        }
        let mut comp = vec![s];
        seen[s] = true;
        let mut k = 0;
        while k < comp.len() {
            let a = comp[k];
            for &b in nodes {
                if !seen[b] && cartan[a][b] != 0 {
                    seen[b] = true;
                    comp.push(b);
                }
            }
            k += 1;
        }
        comp.sort();
        out.push(comp);
    }
    out.sort();
    out
}

/// Identify a connected sub-diagram. Returns its canonical type and, for each
/// given node, the Bourbaki index it plays. Series are tried in alphabetical
/// order, so a rank-2 double bond comes out as B2 and D3 comes out as A3.
pub fn identify_connected(cartan: &[Vec<i64>], nodes: &[usize]) -> Option<(Series, usize, Vec<usize>)> {
    let r = nodes.len();
    let sub: Vec<Vec<i64>> = nodes.iter().map(|&i| nodes.iter().map(|&j| cartan[i][j]).collect()).collect();
    for s in Series::ALL {
        if !s.admits(r) {
            continue;
        }
        if let Some(map) = cartan_isomorphism(&sub, &simple_cartan(s, r)) {
            return Some((s, r, map));
        }
    }
    None
}
