//! Sublattices of Q^n with a canonical Hermite basis, plus the small amount of
//! exact rational linear algebra the rest of the crate needs.

use num_integer::Integer;
use num_rational::Rational64 as Q;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("the ray does not meet the lattice")]
    RayMisses,
    #[error("zero direction")]
    ZeroDirection,
}

/// A finitely generated subgroup of Q^n, stored as its row Hermite normal form.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Sublattice {
    ambient: usize,
    basis: Vec<Vec<Q>>,
}

/// A Q-linear map Q^domain -> Q^rows.len(), acting on column vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearMap {
    pub domain: usize,
    pub rows: Vec<Vec<Q>>,
}

impl LinearMap {
    pub fn new(domain: usize, rows: Vec<Vec<Q>>) -> Self {
        debug_assert!(rows.iter().all(|r| r.len() == domain));
        LinearMap { domain, rows }
    }

    pub fn apply(&self, v: &[Q]) -> Vec<Q> {
        self.rows.iter().map(|r| dot(r, v)).collect()
    }

    pub fn codomain(&self) -> usize {
        self.rows.len()
    }
}

pub fn dot(a: &[Q], b: &[Q]) -> Q {
    a.iter().zip(b).map(|(x, y)| *x * *y).sum()
}

fn lcm_denominators<'a>(it: impl Iterator<Item = &'a Q>) -> i128 {
    let mut l: i128 = 1;
    for q in it {
        l = l.lcm(&(*q.denom() as i128));
    }
    l
}

fn to_q(x: i128) -> Q {
    Q::from(i64::try_from(x).expect("lattice entry overflow"))
}

/// Row Hermite normal form of an integer matrix; zero rows dropped.
pub fn hnf_rows(mut m: Vec<Vec<i128>>, ncols: usize) -> Vec<Vec<i128>> {
    let mut r = 0;
    for c in 0..ncols {
        if r == m.len() {
            break;
        }
        loop {
            let piv = (r..m.len()).filter(|&i| m[i][c] != 0).min_by_key(|&i| m[i][c].abs());
            let Some(p) = piv else { break };
            m.swap(r, p);
            let mut done = true;
            for i in r + 1..m.len() {
                if m[i][c] != 0 {
                    let q = m[i][c] / m[r][c];
                    let (head, tail) = m.split_at_mut(i);
                    for k in c..ncols {
                        tail[0][k] -= q * head[r][k];
                    }
                    if tail[0][c] != 0 {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if m[r][c] == 0 {
            continue;
        }
        if m[r][c] < 0 {
            for k in c..ncols {
                m[r][k] = -m[r][k];
            }
        }
        for i in 0..r {
            let q = Integer::div_floor(&m[i][c], &m[r][c]);
            if q != 0 {
                let (head, tail) = m.split_at_mut(r);
                for k in c..ncols {
                    head[i][k] -= q * tail[0][k];
                }
            }
        }
        r += 1;
    }
    m.truncate(r);
    m
}

/// Integer basis of {x in Z^n : A x = 0} for an integer matrix A with n columns.
pub fn integer_kernel(a: &[Vec<i128>], n: usize) -> Vec<Vec<i128>> {
    let m = a.len();
    // rows: (column j of A | e_j); reduce the first m columns
    let mut aug: Vec<Vec<i128>> = (0..n)
        .map(|j| {
            let mut row: Vec<i128> = (0..m).map(|i| a[i][j]).collect();
            row.extend((0..n).map(|k| i128::from(k == j)));
            row
        })
        .collect();
    let mut r = 0;
    for c in 0..m {
        loop {
            let piv = (r..n).filter(|&i| aug[i][c] != 0).min_by_key(|&i| aug[i][c].abs());
            let Some(p) = piv else { break };
            aug.swap(r, p);
            let mut done = true;
            for i in r + 1..n {
                if aug[i][c] != 0 {
                    let q = aug[i][c] / aug[r][c];
                    let (head, tail) = aug.split_at_mut(i);
                    for k in 0..m + n {
                        tail[0][k] -= q * head[r][k];
                    }
                    if tail[0][c] != 0 {
                        done = false;
                    }
                }
            }
            if done {
                r += 1;
                break;
            }
        }
        if r == n {
            break;
        }
    }
    aug.into_iter()
        .filter(|row| row[..m].iter().all(|&x| x == 0))
        .map(|row| row[m..].to_vec())
        .collect()
}

impl Sublattice {
    pub fn new(ambient: usize, gens: &[Vec<Q>]) -> Self {
        for g in gens {
            assert_eq!(g.len(), ambient, "generator length");
        }
        let d = lcm_denominators(gens.iter().flatten());
        let ints: Vec<Vec<i128>> = gens
            .iter()
            .map(|g| g.iter().map(|q| *q.numer() as i128 * (d / *q.denom() as i128)).collect())
            .collect();
        let h = hnf_rows(ints, ambient);
        let basis = h
            .into_iter()
            .map(|row| row.into_iter().map(|x| to_q(x) / to_q(d)).collect())
            .collect();
        Sublattice { ambient, basis }
    }

    pub fn from_int(ambient: usize, gens: &[Vec<i64>]) -> Self {
        let g: Vec<Vec<Q>> = gens.iter().map(|v| v.iter().map(|&x| Q::from(x)).collect()).collect();
        Self::new(ambient, &g)
    }

    pub fn zero(ambient: usize) -> Self {
        Sublattice { ambient, basis: Vec::new() }
    }

    pub fn full(ambient: usize) -> Self {
        let gens: Vec<Vec<Q>> = (0..ambient)
            .map(|i| (0..ambient).map(|j| if i == j { Q::one() } else { Q::zero() }).collect())
            .collect();
        Sublattice::new(ambient, &gens)
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn basis(&self) -> &[Vec<Q>] {
        &self.basis
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn sum(&self, other: &Sublattice) -> Sublattice {
        let mut g = self.basis.clone();
        g.extend(other.basis.iter().cloned());
        Sublattice::new(self.ambient, &g)
    }

    /// Rational coordinates of v in the basis, if v lies in the rational span.
    pub fn coordinates(&self, v: &[Q]) -> Option<Vec<Q>> {
        let mut rest = v.to_vec();
        let mut out = Vec::with_capacity(self.basis.len());
        for row in &self.basis {
            let c = row.iter().position(|x| !x.is_zero()).expect("nonzero basis row");
            let t = rest[c] / row[c];
            for k in 0..self.ambient {
                rest[k] -= t * row[k];
            }
            out.push(t);
        }
        if rest.iter().all(|x| x.is_zero()) {
            Some(out)
        } else {
            None
        }
    }

    pub fn contains(&self, v: &[Q]) -> bool {
        matches!(self.coordinates(v), Some(c) if c.iter().all(|x| x.is_integer()))
    }

    pub fn in_span(&self, v: &[Q]) -> bool {
        self.coordinates(v).is_some()
    }

    pub fn contains_lattice(&self, other: &Sublattice) -> bool {
        other.basis.iter().all(|b| self.contains(b))
    }

    /// Vectors spanning the annihilator of the rational span.
    pub fn annihilator(&self) -> Vec<Vec<Q>> {
        qmat_nullspace(&self.basis, self.ambient)
    }

    pub fn saturate(&self) -> Sublattice {
        let ann = self.annihilator();
        kernel(&LinearMap::new(self.ambient, ann))
    }

    pub fn is_saturated(&self) -> bool {
        self.saturate() == *self
    }

    /// The generator of the ray through `dir` in this lattice.
    pub fn primitive_on_ray(&self, dir: &[Q]) -> Result<Vec<Q>, LatticeError> {
        if dir.len() != self.ambient {
            return Err(LatticeError::Dimension { expected: self.ambient, got: dir.len() });
        }
        if dir.iter().all(|x| x.is_zero()) {
            return Err(LatticeError::ZeroDirection);
        }
        let coords = self.coordinates(dir).ok_or(LatticeError::RayMisses)?;
        // t*c_i integral for all i  <=>  t in lcm_i(den_i / |num_i|) Z
        let mut num: i64 = 1;
        let mut den: i64 = 0;
        for c in coords.iter().filter(|c| !c.is_zero()) {
            let (p, q) = (c.numer().abs(), *c.denom());
            num = num.lcm(&q);
            den = den.gcd(&p);
        }
        let t = Q::new(num, den);
        Ok(dir.iter().map(|x| *x * t).collect())
    }

    /// Index in Z^n, for a full-rank sublattice of Z^n.
    pub fn index_in_full(&self) -> Option<i64> {
        if self.rank() != self.ambient {
            return None;
        }
        let mut det = Q::one();
        for (i, row) in self.basis.iter().enumerate() {
            det *= row[i];
        }
        if det.is_integer() {
            Some(det.to_integer().abs())
        } else {
            None
        }
    }
}

pub fn rank(s: &Sublattice) -> usize {
    s.rank()
}

pub fn saturate(s: &Sublattice) -> Sublattice {
    s.saturate()
}

pub fn member(v: &[Q], s: &Sublattice) -> bool {
    s.contains(v)
}

pub fn primitive_on_ray(dir: &[Q], s: &Sublattice) -> Result<Vec<Q>, LatticeError> {
    s.primitive_on_ray(dir)
}

/// {v in Z^domain : f(v) in s}.
pub fn preimage(f: &LinearMap, s: &Sublattice) -> Sublattice {
    let m = f.domain;
    let b = s.rank();
    // solve f v - sum w_j b_j = 0 over the integers in (v, w)
    let mut eqs: Vec<Vec<i128>> = Vec::new();
    for (r, row) in f.rows.iter().enumerate() {
        let mut full: Vec<Q> = row.clone();
        full.extend(s.basis.iter().map(|bj| -bj[r]));
        let d = lcm_denominators(full.iter());
        eqs.push(full.iter().map(|q| *q.numer() as i128 * (d / *q.denom() as i128)).collect());
    }
    let ker = integer_kernel(&eqs, m + b);
    let gens: Vec<Vec<Q>> = ker.iter().map(|v| v[..m].iter().map(|&x| to_q(x)).collect()).collect();
    Sublattice::new(m, &gens)
}

pub fn kernel(f: &LinearMap) -> Sublattice {
    preimage(f, &Sublattice::zero(f.codomain()))
}

/// Reduced row echelon form over Q; returns (rows, pivot columns).
pub fn qmat_rref(rows: &[Vec<Q>], ncols: usize) -> (Vec<Vec<Q>>, Vec<usize>) {
    let mut m: Vec<Vec<Q>> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = Q::one() / m[r][c];
        for k in 0..ncols {
            m[r][k] *= inv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c];
                for k in 0..ncols {
                    let v = m[r][k];
                    m[i][k] -= f * v;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    m.truncate(r);
    (m, pivots)
}

pub fn qmat_rank(rows: &[Vec<Q>], ncols: usize) -> usize {
    qmat_rref(rows, ncols).1.len()
}

/// Basis of {x : rows . x = 0}.
pub fn qmat_nullspace(rows: &[Vec<Q>], ncols: usize) -> Vec<Vec<Q>> {
    let (m, piv) = qmat_rref(rows, ncols);
    let mut out = Vec::new();
    for free in (0..ncols).filter(|c| !piv.contains(c)) {
        let mut v = vec![Q::zero(); ncols];
        v[free] = Q::one();
        for (i, &p) in piv.iter().enumerate() {
            v[p] = -m[i][free];
        }
        out.push(v);
    }
    out
}

pub fn qmat_inverse(a: &[Vec<Q>]) -> Option<Vec<Vec<Q>>> {
    let n = a.len();
    let aug: Vec<Vec<Q>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Q::one() } else { Q::zero() }));
            r
        })
        .collect();
    let (m, piv) = qmat_rref(&aug, 2 * n);
    if piv.len() < n || piv[n - 1] != n - 1 {
        return None;
    }
    Some(m.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Solve A x = b for square invertible A.
pub fn qmat_solve(a: &[Vec<Q>], b: &[Q]) -> Option<Vec<Q>> {
    let inv = qmat_inverse(a)?;
    Some(inv.iter().map(|r| dot(r, b)).collect())
}

/// Primitive integral vector on the ray of a nonzero rational vector.
pub fn primitive_integral(v: &[Q]) -> Vec<i64> {
    let mut l: i64 = 1;
    for x in v {
        l = l.lcm(x.denom());
    }
    let ints: Vec<i64> = v.iter().map(|x| (*x * Q::from(l)).to_integer()).collect();
    let g = ints.iter().fold(0i64, |g, &x| g.gcd(&x));
    if g == 0 {
        return ints;
    }
    ints.into_iter().map(|x| x / g).collect()
}

pub fn qvec(v: &[i64]) -> Vec<Q> {
    v.iter().map(|&x| Q::from(x)).collect()
}

pub fn is_nonneg(v: &[Q]) -> bool {
    v.iter().all(|x| !x.is_negative())
}
