//! Spherical roots by recursive degeneration, with the block-wise shortcut.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use num_rational::Rational64 as Q;
use thiserror::Error;

use crate::degen::{self, AddOutcome, DegenError};
use crate::lattice::{primitive_integral, qvec, LatticeError};
use crate::levi::{CRoot, LeviDatum};
use crate::rootsystem::{build_root_system, diagram_components, identify_connected, DynkinType, RootSystem};
use crate::sphdata::{primitive_lookup, Registry};
use crate::subgroup::{
    choose_upper, classes, normalize, sm_decomposition, upsilon, validate, weight_lattice, SphericalDatum, SubgroupError, Violation,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EngineError {
    #[error("not spherical: {0}")]
    NotSpherical(String),
    #[error("unknown module: {0}")]
    UnknownModule(String),
    #[error("invalid datum: {}", .0.join("; "))]
    Invalid(Vec<String>),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("block lost while degenerating: {0}")]
    BlockTracking(String),
    #[error("blocks share the spherical root direction {0:?}")]
    DisjointnessViolation(Vec<i64>),
    #[error("base and optimized results differ: base {base:?}, optimized {optimized:?}")]
    ModeDisagreement { base: Vec<Vec<i64>>, optimized: Vec<Vec<i64>> },
    #[error("{0} spherical roots but the weight lattice has rank {1}")]
    RankMismatch(usize, usize),
    #[error(transparent)]
    Degen(#[from] DegenError),
    #[error(transparent)]
    Subgroup(#[from] SubgroupError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Branching {
    Two,
    #[default]
    All,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Base,
    Optimized,
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StepKind {
    Mult,
    Add,
    Reduce,
    Primitive,
    Normalize,
}

impl StepKind {
    pub fn as_str(self) -> &'static str {
        match self {
            StepKind::Mult => "mult",
            StepKind::Add => "add",
            StepKind::Reduce => "reduce",
            StepKind::Primitive => "primitive",
            StepKind::Normalize => "normalize",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceStep {
    pub kind: StepKind,
    /// hat of the root used, in the coordinates of the datum it acted on
    pub lambda: Option<Vec<i64>>,
    pub before: u64,
    pub after: u64,
    pub note: String,
}

impl fmt::Display for TraceStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:<9} {:016x} -> {:016x}", self.kind.as_str(), self.before, self.after)?;
        if let Some(l) = &self.lambda {
            write!(f, " at {l:?}")?;
        }
        if !self.note.is_empty() {
            write!(f, " ({})", self.note)?;
        }
        Ok(())
    }
}

/// Sub-diagram spanned by the supports of the active roots.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AmbientEmbedding {
    pub sub_type: DynkinType,
    /// node of the sub-diagram -> node of the original diagram
    pub node_map: Vec<usize>,
}

impl AmbientEmbedding {
    pub fn push_forward(&self, v: &[i64], ambient_rank: usize) -> Vec<i64> {
        let mut out = vec![0; ambient_rank];
        for (k, &x) in v.iter().enumerate() {
            out[self.node_map[k]] += x;
        }
        out
    }
}

/// Outcome of the block-wise reduction for one block.
#[derive(Clone, Debug)]
pub struct BlockReport {
    pub block: Vec<Vec<i64>>,
    pub embedding: AmbientEmbedding,
    pub degenerations: usize,
    pub rays: BTreeSet<Vec<i64>>,
}

#[derive(Clone, Debug, Default)]
pub struct SigmaResult {
    /// primitive integral directions over the original simple roots
    pub rays: BTreeSet<Vec<i64>>,
    /// lattice representatives in simple-root coordinates, filled at top level
    pub roots: Vec<Vec<Q>>,
    pub trace: Vec<TraceStep>,
    pub degenerations: usize,
    pub blocks: Vec<BlockReport>,
}

fn direction(v: &[i64]) -> Vec<i64> {
    primitive_integral(&qvec(v))
}

fn step(kind: StepKind, lambda: Option<Vec<i64>>, before: &SphericalDatum, after: &SphericalDatum, note: impl Into<String>) -> TraceStep {
    TraceStep { kind, lambda, before: before.fingerprint(), after: after.fingerprint(), note: note.into() }
}

/// Pass to the semisimple subgroup whose simple roots are the supports of the active roots.
pub fn reduce_ambient(d: &SphericalDatum) -> Result<(SphericalDatum, AmbientEmbedding), EngineError> {
    let rs = d.rs();
    let nodes: Vec<usize> = d.support_of(&d.psi).into_iter().collect();
    let mut comps = Vec::new();
    let mut node_map = Vec::new();
    for comp in diagram_components(rs.cartan(), &nodes) {
        let (series, rank, map) = identify_connected(rs.cartan(), &comp).expect("sub-diagrams of finite diagrams are finite");
        let offset = node_map.len();
        node_map.resize(offset + rank, 0);
        for (k, &b) in map.iter().enumerate() {
            node_map[offset + b] = comp[k];
        }
        comps.push((series, rank));
    }
    let sub_type = DynkinType::new(comps).map_err(SubgroupError::from)?;
    let sub_rs = Arc::new(build_root_system(&sub_type, rs.lattice));
    let back: HashMap<usize, usize> = node_map.iter().enumerate().map(|(k, &n)| (n, k)).collect();
    let mut pi_l: Vec<usize> = d.levi.pi_l().iter().filter_map(|i| back.get(i).copied()).collect();
    pi_l.sort();
    let levi = Arc::new(LeviDatum::new(sub_rs.clone(), &pi_l).map_err(SubgroupError::from)?);
    let pull = |v: &[i64]| -> Vec<i64> { node_map.iter().map(|&n| v[n]).collect() };
    let mut ids = HashMap::new();
    for &l in &d.psi {
        let hat = pull(&d.hat(l));
        let id = sub_rs.root_id(&hat).and_then(|r| levi.class_of_root(r));
        let Some(CRoot::Pos(id)) = id else {
            return Err(EngineError::Precondition(format!("active root {:?} does not survive the reduction", d.hat(l))));
        };
        ids.insert(l, id);
    }
    // xi is spanned by differences of active roots once normalized
    let psi: Vec<usize> = d.psi.iter().copied().collect();
    let mut gens = Vec::new();
    for (i, &a) in psi.iter().enumerate() {
        for &b in &psi[i + 1..] {
            let diff = d.levi.c_coords(&d.levi.sub(d.levi.weight(a), d.levi.weight(b)));
            if d.xi.contains(&diff) {
                gens.push(levi.c_coords(&levi.sub(levi.weight(ids[&a]), levi.weight(ids[&b]))));
            }
        }
    }
    let out = SphericalDatum::new(levi, &gens, ids.values().copied());
    Ok((out, AmbientEmbedding { sub_type, node_map }))
}

struct BaseSolver<'a> {
    reg: &'a Registry,
    branching: Branching,
    memo: HashMap<crate::subgroup::DatumKey, BTreeSet<Vec<i64>>>,
    trace: Vec<TraceStep>,
    degenerations: usize,
}

impl BaseSolver<'_> {
    fn pick(&self, d: &SphericalDatum, cands: impl IntoIterator<Item = usize>) -> Vec<usize> {
        let mut v: Vec<usize> = cands.into_iter().collect();
        v.sort_by_key(|&l| std::cmp::Reverse(d.hat(l)));
        if self.branching == Branching::Two {
            v.truncate(2);
        }
        v
    }

    fn solve(&mut self, input: &SphericalDatum) -> Result<BTreeSet<Vec<i64>>, EngineError> {
        let d = normalize(input);
        if d.xi != input.xi {
            self.trace.push(step(StepKind::Normalize, None, input, &d, ""));
        }
        let key = d.key();
        if let Some(r) = self.memo.get(&key) {
            return Ok(r.clone());
        }
        let n = d.rs().rank();
        let mut rays = BTreeSet::new();
        if d.psi.is_empty() {
        } else if d.psi.len() == 1 {
            let (sub, emb) = reduce_ambient(&d)?;
            self.trace.push(step(StepKind::Reduce, None, &d, &sub, format!("{} on {}", emb.sub_type, nodes_text(&emb.node_map))));
            for r in primitive_rays(&sub, self.reg)? {
                rays.insert(direction(&emb.push_forward(&r, n)));
            }
            self.trace.push(step(StepKind::Primitive, Some(sub.hat(*sub.psi.iter().next().unwrap())), &sub, &sub, ""));
        } else {
            let cl = classes(&d);
            if !cl.psi0.is_empty() {
                for l in self.pick(&d, cl.psi0_max.iter().copied()) {
                    let next = degen::mult_degeneration(&d, l)?;
                    self.degenerations += 1;
                    self.trace.push(step(StepKind::Mult, Some(d.hat(l)), &d, &next, ""));
                    rays.extend(self.solve(&next)?);
                }
            } else {
                for l in self.pick(&d, d.psi.iter().copied()) {
                    let next = degen::add_degeneration(&d, l)?;
                    self.degenerations += 1;
                    self.trace.push(step(StepKind::Add, Some(d.hat(l)), &d, &next, ""));
                    rays.extend(self.solve(&next)?);
                }
            }
        }
        self.memo.insert(key, rays.clone());
        Ok(rays)
    }
}

fn nodes_text(nodes: &[usize]) -> String {
    let v: Vec<String> = nodes.iter().map(|i| (i + 1).to_string()).collect();
    format!("{{{}}}", v.join(","))
}

/// Spherical roots of a reduced datum with a single active root.
fn primitive_rays(d: &SphericalDatum, reg: &Registry) -> Result<Vec<Vec<i64>>, EngineError> {
    let rs = d.rs();
    let l = *d.psi.iter().next().unwrap();
    let low = d.levi.lowest(l);
    let simple = RootSystem::support_int(&low);
    let describe = || format!("{} with Levi {} and active root {:?}", rs.dtype, nodes_text(d.levi.pi_l()), d.hat(l));
    if !rs.dtype.is_simple() || simple.len() != 1 || low[simple[0]] != 1 {
        return Err(EngineError::NotSpherical(describe()));
    }
    let node = simple[0];
    let expected: Vec<usize> = (0..rs.rank()).filter(|&i| i != node).collect();
    if d.levi.pi_l() != expected.as_slice() {
        return Err(EngineError::NotSpherical(describe()));
    }
    let case = primitive_lookup(reg, &rs.dtype, node).ok_or_else(|| EngineError::NotSpherical(describe()))?;
    Ok(case.sigma)
}

/// Rays of the spherical roots by the unoptimized recursion.
pub fn base_solve(d: &SphericalDatum, reg: &Registry, branching: Branching) -> Result<SigmaResult, EngineError> {
    let mut s = BaseSolver { reg, branching, memo: HashMap::new(), trace: Vec::new(), degenerations: 0 };
    let rays = s.solve(d)?;
    Ok(SigmaResult { rays, roots: Vec::new(), trace: s.trace, degenerations: s.degenerations, blocks: Vec::new() })
}

/// A datum together with one of its blocks, carried through additive steps.
#[derive(Clone, Debug)]
pub struct Tracked {
    pub datum: SphericalDatum,
    pub block: BTreeSet<usize>,
    pub degenerations: usize,
    pub trace: Vec<TraceStep>,
}

impl Tracked {
    pub fn new(datum: SphericalDatum, block: BTreeSet<usize>) -> Self {
        Tracked { datum, block, degenerations: 0, trace: Vec::new() }
    }

    fn hats(&self) -> Vec<Vec<i64>> {
        self.block.iter().map(|&l| self.datum.hat(l)).collect()
    }

    /// One additive step at `lambda`, following the block to its image.
    pub fn degenerate(&mut self, lambda: usize, note: &str) -> Result<(), EngineError> {
        let out: AddOutcome = degen::add_degeneration_traced(&self.datum, lambda)?;
        let image = degen::track(&self.datum, &out, &self.block)
            .ok_or_else(|| EngineError::BlockTracking(format!("{:?}", self.hats())))?;
        if !sm_decomposition(&out.datum).contains(&image) {
            return Err(EngineError::BlockTracking(format!("image of {:?} is not a block", self.hats())));
        }
        self.trace.push(step(StepKind::Add, Some(out.delta.clone()), &self.datum, &out.datum, note));
        self.datum = out.datum;
        self.block = image;
        self.degenerations += 1;
        Ok(())
    }
}

fn require_torus_free(d: &SphericalDatum) -> Result<(), EngineError> {
    if d.xi.is_zero() {
        Ok(())
    } else {
        Err(EngineError::Precondition("the central lattice must be zero".into()))
    }
}

/// Degenerate at upper elements of the roots supported inside the block until none remain.
pub fn algorithm_a(t: &mut Tracked) -> Result<(), EngineError> {
    require_torus_free(&t.datum)?;
    loop {
        let ups = upsilon(&t.datum, &t.block);
        let Some(l) = choose_upper(&t.datum, &ups) else { return Ok(()) };
        t.degenerate(l, "A")?;
    }
}

/// Degenerate at upper elements outside the block until only the block is left.
pub fn algorithm_b(t: &mut Tracked) -> Result<(), EngineError> {
    require_torus_free(&t.datum)?;
    loop {
        let rest: BTreeSet<usize> = t.datum.psi.difference(&t.block).copied().collect();
        let Some(l) = choose_upper(&t.datum, &rest) else { return Ok(()) };
        t.degenerate(l, "B")?;
    }
}

pub fn algorithm_c(t: &mut Tracked) -> Result<(), EngineError> {
    algorithm_a(t)?;
    algorithm_b(t)
}

/// Keep only the block and the roots supported inside it.
pub fn hat_datum(d: &SphericalDatum, block: &BTreeSet<usize>) -> Result<SphericalDatum, EngineError> {
    require_torus_free(d)?;
    let psi: BTreeSet<usize> = block.union(&upsilon(d, block)).copied().collect();
    let out = d.with_psi(psi);
    let bad = crate::subgroup::closure_violations(&out);
    if !bad.is_empty() {
        return Err(EngineError::Invalid(bad.iter().map(|v| v.to_string()).collect()));
    }
    Ok(out)
}

/// Reduce one block to a pair over a smaller group carrying the same spherical roots.
pub fn algorithm_d(t: &mut Tracked) -> Result<(SphericalDatum, AmbientEmbedding), EngineError> {
    loop {
        t.datum = hat_datum(&t.datum, &t.block)?;
        let ups = upsilon(&t.datum, &t.block);
        let Some(l) = choose_upper(&t.datum, &ups) else { break };
        t.degenerate(l, "D")?;
    }
    let (sub, emb) = reduce_ambient(&t.datum)?;
    t.trace.push(step(StepKind::Reduce, None, &t.datum, &sub, format!("{} on {}", emb.sub_type, nodes_text(&emb.node_map))));
    Ok((sub, emb))
}

/// Rays through the block decomposition: reduce every block and solve the pieces.
pub fn optimized_solve(d: &SphericalDatum, reg: &Registry, branching: Branching) -> Result<SigmaResult, EngineError> {
    let n = normalize(d);
    require_torus_free(&n)?;
    let rank = n.rs().rank();
    let mut res = SigmaResult::default();
    if n.xi != d.xi {
        res.trace.push(step(StepKind::Normalize, None, d, &n, ""));
    }
    for block in sm_decomposition(&n) {
        let hats: Vec<Vec<i64>> = block.iter().map(|&l| n.hat(l)).collect();
        let mut t = Tracked::new(n.clone(), block);
        let (sub, emb) = algorithm_d(&mut t)?;
        let inner = base_solve(&sub, reg, branching)?;
        let rays: BTreeSet<Vec<i64>> = inner.rays.iter().map(|r| direction(&emb.push_forward(r, rank))).collect();
        for r in &rays {
            if res.rays.contains(r) {
                return Err(EngineError::DisjointnessViolation(r.clone()));
            }
        }
        res.rays.extend(rays.iter().cloned());
        res.degenerations += t.degenerations;
        res.trace.extend(t.trace);
        res.blocks.push(BlockReport { block: hats, embedding: emb, degenerations: t.degenerations, rays });
    }
    res.blocks.sort_by_key(|b| b.embedding.node_map.iter().min().copied());
    Ok(res)
}

/// Whether the block-wise path applies.
pub fn optimized_applies(d: &SphericalDatum) -> bool {
    normalize(d).xi.is_zero()
}

fn violation_error(v: &[Violation]) -> EngineError {
    if let Some(x) = v.iter().find(|x| matches!(x, Violation::NotSpherical)) {
        return EngineError::NotSpherical(x.to_string());
    }
    if let Some(x) = v.iter().find(|x| matches!(x, Violation::UnknownModule(_))) {
        return EngineError::UnknownModule(x.to_string());
    }
    EngineError::Invalid(v.iter().map(|x| x.to_string()).collect())
}

/// Spherical roots as primitive elements of the weight lattice.
pub fn spherical_roots(d: &SphericalDatum, reg: &Registry, mode: Mode, branching: Branching) -> Result<SigmaResult, EngineError> {
    let bad = validate(d, reg);
    if !bad.is_empty() {
        return Err(violation_error(&bad));
    }
    let mut res = match mode {
        Mode::Base => base_solve(d, reg, branching)?,
        Mode::Optimized => optimized_solve(d, reg, branching)?,
        Mode::Both => {
            let b = base_solve(d, reg, branching)?;
            let o = optimized_solve(d, reg, branching)?;
            if b.rays != o.rays {
                return Err(EngineError::ModeDisagreement { base: b.rays.into_iter().collect(), optimized: o.rays.into_iter().collect() });
            }
            o
        }
    };
    let rs = d.rs();
    let lat = weight_lattice(d, reg)?;
    let mut roots = Vec::new();
    for r in &res.rays {
        let v = lat.primitive_on_ray(&rs.to_lattice_coords(&qvec(r)))?;
        roots.push(rs.from_lattice_coords(&v));
    }
    let expected = weight_lattice(&normalize(d), reg)?.rank();
    if roots.len() != expected {
        return Err(EngineError::RankMismatch(roots.len(), expected));
    }
    res.roots = roots;
    Ok(res)
}
