//! Spherical module registry and primitive-case lookup.
//!
//! A datum determines the module V* as the sum, over classes of active
//! C-roots, of the corresponding C-root modules. The module splits into
//! components linking summands to the simple Levi factors that act on them.
//! Each component is matched against the registry, which supplies the
//! generators of its weight monoid. The whole module is spherical for K iff
//! every component is and the restrictions of all generators to K stay
//! linearly independent.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;
use std::sync::{Arc, OnceLock};

use itertools::Itertools;
use num_rational::Rational64 as Q;
use num_traits::Zero;
use serde::Deserialize;
use thiserror::Error;

use crate::expr::{self, Env, Expr};
use crate::lattice::{qmat_rank, qmat_solve, LinearMap, Sublattice};
use crate::levi::LeviDatum;
use crate::rootsystem::{cartan_automorphisms, identify_connected, simple_cartan, DynkinType, Series};

const BUILTIN: &str = include_str!("../data/registry.toml");
const MAX_VAR: i64 = 24;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SphDataError {
    #[error("registry: {0}")]
    Registry(String),
    #[error("no registry entry decides the module component {0}")]
    UnknownModule(String),
    #[error("generator recipe {0} does not give a root-lattice weight")]
    Generator(String),
    #[error("the module is not spherical")]
    NotSpherical,
}

#[derive(Deserialize)]
struct RawRegistry {
    #[serde(default)]
    module: Vec<RawModule>,
    #[serde(default)]
    primitive: Vec<RawPrimitive>,
}

#[derive(Deserialize, Clone, Debug)]
struct RawModule {
    name: String,
    source: String,
    #[serde(default)]
    vars: Vec<String>,
    #[serde(default, rename = "where")]
    cond: Option<String>,
    factors: Vec<RawFactor>,
    summands: Vec<RawSummand>,
    #[serde(default)]
    chi: Option<String>,
    #[serde(default)]
    chi_when: Option<String>,
    generators: Vec<RawGenerator>,
}

#[derive(Deserialize, Clone, Debug)]
struct RawFactor {
    series: String,
    rank: String,
}

#[derive(Deserialize, Clone, Debug)]
struct RawSummand {
    weights: Vec<String>,
}

#[derive(Deserialize, Clone, Debug)]
pub struct RawGenerator {
    degree: Vec<String>,
    weights: Vec<String>,
    #[serde(default)]
    each: Option<Vec<String>>,
    #[serde(default)]
    when: Option<String>,
}

#[derive(Deserialize, Clone, Debug)]
struct RawPrimitive {
    row: u32,
    algebra: String,
    series: String,
    rank: String,
    node: String,
    #[serde(default)]
    vars: Vec<String>,
    #[serde(default, rename = "where")]
    cond: Option<String>,
    rk: String,
    sigma: Vec<RawSigma>,
}

#[derive(Deserialize, Clone, Debug)]
struct RawSigma {
    #[serde(default)]
    each: Option<Vec<String>>,
    terms: Vec<Vec<String>>,
}

#[derive(Clone, Debug)]
pub struct ModuleEntry {
    pub name: String,
    pub source: String,
    vars: Vec<String>,
    cond: Expr,
    factors: Vec<(Series, Expr)>,
    summands: Vec<Vec<String>>,
    chi_nonzero: bool,
    chi_when: Option<Expr>,
    generators: Vec<RawGenerator>,
    /// every admissible assignment, instantiated once at load
    instances: Vec<Instantiated>,
}

#[derive(Clone, Debug)]
pub struct PrimitiveEntry {
    pub row: u32,
    pub algebra: String,
    pub series: Series,
    pub constraints: String,
    vars: Vec<String>,
    rank: Expr,
    node: Expr,
    cond: Expr,
    rk: Expr,
    sigma: Vec<RawSigma>,
}

#[derive(Clone, Debug)]
pub struct Registry {
    pub modules: Vec<ModuleEntry>,
    pub primitives: Vec<PrimitiveEntry>,
}

fn parse_expr(s: &str, ctx: &str) -> Result<Expr, SphDataError> {
    expr::parse(s).map_err(|e| SphDataError::Registry(format!("{ctx}: {e}")))
}

fn parse_series(s: &str, ctx: &str) -> Result<Series, SphDataError> {
    let mut it = s.chars();
    match (it.next().and_then(Series::from_letter), it.next()) {
        (Some(x), None) => Ok(x),
        _ => Err(SphDataError::Registry(format!("{ctx}: unknown series {s}"))),
    }
}

/// All assignments of the given variables to 1..=MAX_VAR.
fn assignments(vars: &[String]) -> Vec<Env> {
    let mut out = vec![Env::new()];
    for v in vars {
        let mut next = Vec::new();
        for env in &out {
            for x in 1..=MAX_VAR {
                let mut e = env.clone();
                e.insert(v.clone(), x);
                next.push(e);
            }
        }
        out = next;
    }
    out
}

/// Expand an optional `[var, from, to]` repetition.
fn expand_each(each: &Option<Vec<String>>, env: &Env, ctx: &str) -> Result<Vec<Env>, SphDataError> {
    let Some(spec) = each else { return Ok(vec![env.clone()]) };
    if spec.len() != 3 {
        return Err(SphDataError::Registry(format!("{ctx}: each needs [var, from, to]")));
    }
    let from = parse_expr(&spec[1], ctx)?.eval(env).map_err(SphDataError::Registry)?;
    let to = parse_expr(&spec[2], ctx)?.eval(env).map_err(SphDataError::Registry)?;
    Ok((from..=to)
        .map(|x| {
            let mut e = env.clone();
            e.insert(spec[0].clone(), x);
            e
        })
        .collect())
}

impl Registry {
    pub fn builtin() -> &'static Registry {
        static REG: OnceLock<Registry> = OnceLock::new();
        REG.get_or_init(|| Registry::from_toml(BUILTIN).expect("built-in registry parses"))
    }

    pub fn load(path: &Path) -> Result<Registry, SphDataError> {
        let text = std::fs::read_to_string(path).map_err(|e| SphDataError::Registry(format!("{}: {e}", path.display())))?;
        Registry::from_toml(&text)
    }

    pub fn from_toml(text: &str) -> Result<Registry, SphDataError> {
        let raw: RawRegistry = toml::from_str(text).map_err(|e| SphDataError::Registry(e.to_string()))?;
        let mut modules = Vec::new();
        for m in raw.module {
            let ctx = m.name.clone();
            let factors = m
                .factors
                .iter()
                .map(|f| Ok((parse_series(&f.series, &ctx)?, parse_expr(&f.rank, &ctx)?)))
                .collect::<Result<Vec<_>, SphDataError>>()?;
            for s in &m.summands {
                if s.weights.len() != factors.len() {
                    return Err(SphDataError::Registry(format!("{ctx}: summand needs one weight per factor")));
                }
            }
            for g in &m.generators {
                if g.degree.len() != m.summands.len() || g.weights.len() != factors.len() {
                    return Err(SphDataError::Registry(format!("{ctx}: generator shape")));
                }
            }
            let chi_nonzero = match m.chi.as_deref() {
                None | Some("any") => false,
                Some("nonzero") => true,
                Some(other) => return Err(SphDataError::Registry(format!("{ctx}: chi {other}"))),
            };
            let mut entry = ModuleEntry {
                cond: parse_expr(m.cond.as_deref().unwrap_or("1"), &ctx)?,
                chi_when: m.chi_when.as_deref().map(|s| parse_expr(s, &ctx)).transpose()?,
                name: m.name,
                source: m.source,
                vars: m.vars,
                factors,
                summands: m.summands.into_iter().map(|s| s.weights).collect(),
                chi_nonzero,
                generators: m.generators,
                instances: Vec::new(),
            };
            entry.instances = assignments(&entry.vars).iter().filter_map(|env| instantiate(&entry, env)).collect();
            modules.push(entry);
        }
        let mut primitives = Vec::new();
        for p in raw.primitive {
            let ctx = format!("primitive row {}", p.row);
            primitives.push(PrimitiveEntry {
                row: p.row,
                algebra: p.algebra,
                series: parse_series(&p.series, &ctx)?,
                constraints: p.cond.clone().unwrap_or_default(),
                vars: p.vars,
                rank: parse_expr(&p.rank, &ctx)?,
                node: parse_expr(&p.node, &ctx)?,
                cond: parse_expr(p.cond.as_deref().unwrap_or("1"), &ctx)?,
                rk: parse_expr(&p.rk, &ctx)?,
                sigma: p.sigma,
            });
        }
        Ok(Registry { modules, primitives })
    }

    pub fn module(&self, name: &str) -> Option<&ModuleEntry> {
        self.modules.iter().find(|m| m.name == name)
    }
}

/// V* described by its summands (one positive C-root per class) and the
/// saturated lattice whose span cuts out the center of K.
#[derive(Clone, Debug)]
pub struct SphericalModuleDescriptor {
    pub levi: Arc<LeviDatum>,
    pub summands: Vec<usize>,
    pub xi: Sublattice,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorInfo {
    pub nodes: Vec<usize>,
    pub series: Series,
    pub rank: usize,
    /// Bourbaki index played by each entry of `nodes`.
    pub canon: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleComponent {
    pub factors: Vec<FactorInfo>,
    pub summands: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct ModuleMatch {
    pub entry: String,
    pub params: BTreeMap<String, i64>,
    /// Generator weights in simple-root coordinates.
    pub generators: Vec<Vec<Q>>,
    pub chi_required: bool,
}

#[derive(Clone, Debug)]
pub enum ComponentVerdict {
    Matched(ModuleMatch),
    /// Matched, but the center of K acts trivially where the entry needs it not to.
    ChiFails(ModuleMatch),
    /// A simple module missing from the classification.
    NoSimpleMatch,
    /// Too large to be spherical for any torus extension.
    TooLarge,
    Unknown,
}

#[derive(Clone, Debug)]
pub struct ModuleAnalysis {
    pub components: Vec<(ModuleComponent, ComponentVerdict)>,
    pub generators: Vec<Vec<Q>>,
    pub independent: bool,
}

impl ModuleAnalysis {
    pub fn spherical(&self) -> bool {
        self.independent && self.components.iter().all(|(_, v)| matches!(v, ComponentVerdict::Matched(_)))
    }
}

pub fn identify_factor(levi: &LeviDatum, nodes: &[usize]) -> FactorInfo {
    let (series, rank, canon) = identify_connected(levi.rs().cartan(), nodes).expect("connected Dynkin sub-diagram");
    FactorInfo { nodes: nodes.to_vec(), series, rank, canon }
}

/// Highest weight of a summand on a factor, in the factor's canonical numbering.
fn factor_weight(levi: &LeviDatum, f: &FactorInfo, summand: usize) -> Vec<i64> {
    let hat = levi.hat(summand);
    let mut out = vec![0i64; f.rank];
    for (k, &node) in f.nodes.iter().enumerate() {
        out[f.canon[k]] = levi.rs().pairing_int(&hat, node);
    }
    out
}

pub fn module_components(desc: &SphericalModuleDescriptor) -> Vec<ModuleComponent> {
    let levi = &desc.levi;
    let factors: Vec<FactorInfo> = levi.factors().iter().map(|nodes| identify_factor(levi, nodes)).collect();
    let acts = |f: &FactorInfo, s: usize| factor_weight(levi, f, s).iter().any(|&x| x != 0);
    let ns = desc.summands.len();
    // union-find over summands, linked through shared factors
    let mut parent: Vec<usize> = (0..ns).collect();
    fn root(p: &mut Vec<usize>, x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    let mut factor_owner: Vec<Option<usize>> = vec![None; factors.len()];
    for (fi, f) in factors.iter().enumerate() {
        for (si, &s) in desc.summands.iter().enumerate() {
            if acts(f, s) {
                match factor_owner[fi] {
                    None => factor_owner[fi] = Some(si),
                    Some(o) => {
                        let (a, b) = (root(&mut parent, o), root(&mut parent, si));
                        parent[a] = b;
                    }
                }
            }
        }
    }
    let mut groups: BTreeMap<usize, ModuleComponent> = BTreeMap::new();
    for si in 0..ns {
        let r = root(&mut parent, si);
        groups.entry(r).or_insert_with(|| ModuleComponent { factors: Vec::new(), summands: Vec::new() }).summands.push(desc.summands[si]);
    }
    for (fi, f) in factors.into_iter().enumerate() {
        if let Some(o) = factor_owner[fi] {
            let r = root(&mut parent, o);
            groups.get_mut(&r).unwrap().factors.push(f);
        }
    }
    let mut out: Vec<ModuleComponent> = groups.into_values().collect();
    for c in &mut out {
        c.summands.sort();
    }
    out.sort_by(|a, b| a.summands.cmp(&b.summands));
    out
}

/// Permutation action of a diagram automorphism on a weight vector.
fn act(sigma: &[usize], v: &[i64]) -> Vec<i64> {
    let mut out = vec![0i64; v.len()];
    for (i, &x) in v.iter().enumerate() {
        out[sigma[i]] = x;
    }
    out
}

#[derive(Clone, Debug)]
struct Instantiated {
    env: Env,
    /// per pattern factor: canonical series, rank, map entry node -> canonical node
    factors: Vec<(Series, usize, Vec<usize>)>,
}

fn instantiate(entry: &ModuleEntry, env: &Env) -> Option<Instantiated> {
    if !entry.cond.holds(env).ok()? {
        return None;
    }
    let mut factors = Vec::new();
    for (s, r) in &entry.factors {
        let r = r.eval(env).ok()?;
        if r < 1 || !s.admits(r as usize) {
            return None;
        }
        let r = r as usize;
        let nodes: Vec<usize> = (0..r).collect();
        let (cs, cr, map) = identify_connected(&simple_cartan(*s, r), &nodes)?;
        factors.push((cs, cr, map));
    }
    Some(Instantiated { env: env.clone(), factors })
}

fn entry_weight(spec: &str, inst: &Instantiated, k: usize, env: &Env) -> Result<Vec<i64>, SphDataError> {
    let (_, r, map) = &inst.factors[k];
    let w = expr::eval_weight(spec, env, *r).map_err(SphDataError::Registry)?;
    let mut out = vec![0i64; *r];
    for (i, &x) in w.iter().enumerate() {
        out[map[i]] = x;
    }
    Ok(out)
}

impl Registry {
    fn match_entry(&self, entry: &ModuleEntry, comp: &ModuleComponent, levi: &LeviDatum) -> Result<Option<ModuleMatch>, SphDataError> {
        let nf = comp.factors.len();
        let ns = comp.summands.len();
        if entry.factors.len() != nf || entry.summands.len() != ns {
            return Ok(None);
        }
        let actual: Vec<Vec<Vec<i64>>> = comp
            .summands
            .iter()
            .map(|&s| comp.factors.iter().map(|f| factor_weight(levi, f, s)).collect())
            .collect();
        let mut want: Vec<(Series, usize)> = comp.factors.iter().map(|f| (f.series, f.rank)).collect();
        want.sort();
        for inst in &entry.instances {
            let mut have: Vec<(Series, usize)> = inst.factors.iter().map(|f| (f.0, f.1)).collect();
            have.sort();
            if have != want {
                continue;
            }
            let env = &inst.env;
            for pi in (0..nf).permutations(nf) {
                if (0..nf).any(|k| {
                    let f = &comp.factors[pi[k]];
                    (inst.factors[k].0, inst.factors[k].1) != (f.series, f.rank)
                }) {
                    continue;
                }
                let ce: Vec<Vec<Vec<i64>>> = entry
                    .summands
                    .iter()
                    .map(|ws| (0..nf).map(|k| entry_weight(&ws[k], inst, k, env)).collect::<Result<Vec<_>, _>>())
                    .collect::<Result<Vec<_>, _>>()?;
                for tau in (0..ns).permutations(ns) {
                    let mut sigmas = Vec::new();
                    for k in 0..nf {
                        let f = &comp.factors[pi[k]];
                        let auts = cartan_automorphisms(&simple_cartan(f.series, f.rank));
                        let found = auts.into_iter().find(|s| (0..ns).all(|j| actual[tau[j]][pi[k]] == act(s, &ce[j][k])));
                        match found {
                            Some(s) => sigmas.push(s),
                            None => break,
                        }
                    }
                    if sigmas.len() == nf {
                        let generators = self.generators_for(entry, inst, comp, levi, &pi, &tau, &sigmas)?;
                        let chi_required = entry.chi_nonzero
                            && match &entry.chi_when {
                                None => true,
                                Some(e) => e.holds(env).map_err(SphDataError::Registry)?,
                            };
                        return Ok(Some(ModuleMatch {
                            entry: entry.name.clone(),
                            params: env.clone().into_iter().collect(),
                            generators,
                            chi_required,
                        }));
                    }
                }
            }
        }
        Ok(None)
    }

    #[allow(clippy::too_many_arguments)]
    fn generators_for(
        &self,
        entry: &ModuleEntry,
        inst: &Instantiated,
        comp: &ModuleComponent,
        levi: &LeviDatum,
        pi: &[usize],
        tau: &[usize],
        sigmas: &[Vec<usize>],
    ) -> Result<Vec<Vec<Q>>, SphDataError> {
        let mut out = Vec::new();
        for g in &entry.generators {
            for env in expand_each(&g.each, &inst.env, &entry.name)? {
                if let Some(w) = &g.when {
                    if !parse_expr(w, &entry.name)?.holds(&env).map_err(SphDataError::Registry)? {
                        continue;
                    }
                }
                let degrees: Vec<i64> = g
                    .degree
                    .iter()
                    .map(|d| parse_expr(d, &entry.name)?.eval(&env).map_err(SphDataError::Registry))
                    .collect::<Result<_, _>>()?;
                // target pairings on every Levi node; nodes outside this component pair to zero
                let mut target: BTreeMap<usize, i64> = levi.pi_l().iter().map(|&i| (i, 0)).collect();
                for k in 0..comp.factors.len() {
                    let f = &comp.factors[pi[k]];
                    let w = act(&sigmas[k], &entry_weight(&g.weights[k], inst, k, &env)?);
                    for (idx, &node) in f.nodes.iter().enumerate() {
                        target.insert(node, w[f.canon[idx]]);
                    }
                }
                let mut summed: Vec<(usize, i64)> = Vec::new();
                for (j, &d) in degrees.iter().enumerate() {
                    summed.push((comp.summands[tau[j]], d));
                }
                let w = lift_weight(levi, &summed, &target).ok_or_else(|| SphDataError::Generator(entry.name.clone()))?;
                if w.iter().all(|x| x.is_zero()) {
                    continue;
                }
                out.push(w);
            }
        }
        Ok(out)
    }
}

/// The weight whose C-part is sum d_j * lambda_j and whose Levi coroot
/// pairings are `target`. None unless it lies in the root lattice.
pub fn lift_weight(levi: &LeviDatum, summed: &[(usize, i64)], target: &BTreeMap<usize, i64>) -> Option<Vec<Q>> {
    let rs = levi.rs();
    let n = rs.rank();
    let mut base = vec![0i64; n];
    for &(s, d) in summed {
        for (b, h) in base.iter_mut().zip(levi.hat(s)) {
            *b += d * h;
        }
    }
    let pl = levi.pi_l();
    let mut w: Vec<Q> = base.iter().map(|&x| Q::from(x)).collect();
    if !pl.is_empty() {
        // w = base - sum b_a alpha_a with <w, alpha_i^vee> = target_i
        let a: Vec<Vec<Q>> = pl.iter().map(|&i| pl.iter().map(|&a| Q::from(rs.cartan()[a][i])).collect()).collect();
        let rhs: Vec<Q> = pl.iter().map(|&i| Q::from(rs.pairing_int(&base, i) - target[&i])).collect();
        let b = qmat_solve(&a, &rhs)?;
        for (k, &i) in pl.iter().enumerate() {
            w[i] -= b[k];
        }
    }
    if w.iter().all(|x| x.is_integer()) {
        Some(w)
    } else {
        None
    }
}

/// Restriction of weights to K, as a map on simple-root coordinates:
/// Levi coroot pairings, then the C-part modulo the span of `xi`.
pub fn restriction_map(levi: &LeviDatum, xi: &Sublattice) -> LinearMap {
    let rs = levi.rs();
    let n = rs.rank();
    let mut rows: Vec<Vec<Q>> = levi.pi_l().iter().map(|&i| (0..n).map(|k| Q::from(rs.cartan()[k][i])).collect()).collect();
    for y in xi.annihilator() {
        let mut row = vec![Q::zero(); n];
        for (k, &i) in levi.c_indices().iter().enumerate() {
            row[i] = y[k];
        }
        rows.push(row);
    }
    LinearMap::new(n, rows)
}

fn borel_dim(levi: &LeviDatum, comp: &ModuleComponent) -> usize {
    let mut d = comp.summands.len();
    for f in &comp.factors {
        let pos = levi
            .rs()
            .positive_roots()
            .iter()
            .filter(|r| r.iter().enumerate().all(|(i, &c)| c == 0 || f.nodes.contains(&i)))
            .count();
        d += pos + f.rank;
    }
    d
}

pub fn describe_component(levi: &LeviDatum, comp: &ModuleComponent) -> String {
    let fs: Vec<String> = comp.factors.iter().map(|f| format!("{}{}", f.series.letter(), f.rank)).collect();
    let ss: Vec<String> = comp
        .summands
        .iter()
        .map(|&s| {
            let w: Vec<String> = comp.factors.iter().map(|f| format!("{:?}", factor_weight(levi, f, s))).collect();
            format!("[{}]", w.join(" "))
        })
        .collect();
    format!("factors {} summands {}", if fs.is_empty() { "none".into() } else { fs.join("x") }, ss.join(" + "))
}

pub fn analyze(desc: &SphericalModuleDescriptor, reg: &Registry) -> Result<ModuleAnalysis, SphDataError> {
    let levi = &desc.levi;
    let mut components = Vec::new();
    let mut generators = Vec::new();
    for comp in module_components(desc) {
        let mut found = None;
        for entry in &reg.modules {
            if let Some(m) = reg.match_entry(entry, &comp, levi)? {
                found = Some(m);
                break;
            }
        }
        let verdict = match found {
            Some(m) => {
                generators.extend(m.generators.iter().cloned());
                let trivial_center = comp.summands.len() == 1 && desc.xi.in_span(&levi.c_coords(levi.weight(comp.summands[0])));
                if m.chi_required && trivial_center {
                    ComponentVerdict::ChiFails(m)
                } else {
                    ComponentVerdict::Matched(m)
                }
            }
            None => {
                let dim: usize = comp.summands.iter().map(|&s| levi.c_root(s).dim).sum();
                if comp.summands.len() == 1 {
                    ComponentVerdict::NoSimpleMatch
                } else if dim > borel_dim(levi, &comp) {
                    ComponentVerdict::TooLarge
                } else {
                    ComponentVerdict::Unknown
                }
            }
        };
        components.push((comp, verdict));
    }
    let iota = restriction_map(levi, &desc.xi);
    let images: Vec<Vec<Q>> = generators.iter().map(|g| iota.apply(g)).collect();
    let independent = qmat_rank(&images, iota.codomain()) == generators.len();
    Ok(ModuleAnalysis { components, generators, independent })
}

pub fn is_spherical(desc: &SphericalModuleDescriptor, reg: &Registry) -> Result<bool, SphDataError> {
    let a = analyze(desc, reg)?;
    let decided_no = a
        .components
        .iter()
        .any(|(_, v)| matches!(v, ComponentVerdict::ChiFails(_) | ComponentVerdict::NoSimpleMatch | ComponentVerdict::TooLarge));
    if decided_no {
        return Ok(false);
    }
    if let Some((c, _)) = a.components.iter().find(|(_, v)| matches!(v, ComponentVerdict::Unknown)) {
        return Err(SphDataError::UnknownModule(describe_component(&desc.levi, c)));
    }
    Ok(a.independent)
}

/// Generators of the weight monoid of V* with their restrictions to K.
pub fn free_generators(desc: &SphericalModuleDescriptor, reg: &Registry) -> Result<Vec<(Vec<Q>, Vec<Q>)>, SphDataError> {
    if !is_spherical(desc, reg)? {
        return Err(SphDataError::NotSpherical);
    }
    let a = analyze(desc, reg)?;
    let iota = restriction_map(&desc.levi, &desc.xi);
    Ok(a.generators.into_iter().map(|g| {
        let img = iota.apply(&g);
        (g, img)
    }).collect())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimitiveCase {
    pub row: u32,
    pub algebra: String,
    pub dtype: DynkinType,
    /// 0-based node as given to the lookup
    pub node: usize,
    pub rank: usize,
    pub params: BTreeMap<String, i64>,
    pub constraints: String,
    /// Spherical roots in simple-root coordinates of the queried node numbering.
    pub sigma: Vec<Vec<i64>>,
}

impl PrimitiveEntry {
    fn sigma_at(&self, env: &Env, rank: usize) -> Result<Vec<Vec<i64>>, SphDataError> {
        let ctx = format!("primitive row {}", self.row);
        let mut out = Vec::new();
        for fam in &self.sigma {
            for e in expand_each(&fam.each, env, &ctx)? {
                let mut v = vec![0i64; rank];
                for t in &fam.terms {
                    if t.len() != 3 {
                        return Err(SphDataError::Registry(format!("{ctx}: term needs [coef, from, to]")));
                    }
                    let ev = |s: &str| parse_expr(s, &ctx)?.eval(&e).map_err(SphDataError::Registry);
                    let (c, a, b) = (ev(&t[0])?, ev(&t[1])?, ev(&t[2])?);
                    for j in a..=b {
                        if j < 1 || j as usize > rank {
                            return Err(SphDataError::Registry(format!("{ctx}: index {j} out of range")));
                        }
                        v[j as usize - 1] += c;
                    }
                }
                out.push(v);
            }
        }
        Ok(out)
    }

    /// Parameter values for which this row is the pair (series rank, node), 1-based node.
    fn solve(&self, rank: usize, node1: usize) -> Option<Env> {
        assignments(&self.vars).into_iter().find(|env| {
            self.cond.holds(env).unwrap_or(false)
                && self.rank.eval(env).ok() == Some(rank as i64)
                && self.node.eval(env).ok() == Some(node1 as i64)
        })
    }

    /// Every (rank, 1-based node, parameters) with rank at most `max_rank`.
    pub fn instances(&self, max_rank: usize) -> Vec<(usize, usize, BTreeMap<String, i64>)> {
        let mut out = Vec::new();
        for env in assignments(&self.vars) {
            if !self.cond.holds(&env).unwrap_or(false) {
                continue;
            }
            let (Ok(r), Ok(a)) = (self.rank.eval(&env), self.node.eval(&env)) else { continue };
            if r < 1 || r as usize > max_rank || !self.series.admits(r as usize) || a < 1 || a > r {
                continue;
            }
            out.push((r as usize, a as usize, env.into_iter().collect()));
        }
        out.sort();
        out.dedup_by(|a, b| (a.0, a.1) == (b.0, b.1));
        out
    }

    pub fn rk_at(&self, params: &BTreeMap<String, i64>) -> Option<usize> {
        let env: Env = params.clone().into_iter().collect();
        self.rk.eval(&env).ok().map(|x| x as usize)
    }
}

/// Look up a primitive pair, trying every diagram automorphism.
pub fn primitive_lookup(reg: &Registry, dtype: &DynkinType, node: usize) -> Option<PrimitiveCase> {
    if !dtype.is_simple() {
        return None;
    }
    let (series, rank) = dtype.components[0];
    if series == Series::B && rank == 2 {
        // the table lists this algebra as C2, whose nodes come in the other order
        let c2 = DynkinType::simple(Series::C, 2).ok()?;
        let mut case = primitive_lookup(reg, &c2, 1 - node)?;
        case.dtype = dtype.clone();
        case.node = node;
        case.sigma = case.sigma.iter().map(|t| vec![t[1], t[0]]).collect();
        return Some(case);
    }
    let auts = cartan_automorphisms(&simple_cartan(series, rank));
    for entry in reg.primitives.iter().filter(|p| p.series == series) {
        for sigma in &auts {
            let target = sigma[node];
            let Some(env) = entry.solve(rank, target + 1) else { continue };
            let Ok(template) = entry.sigma_at(&env, rank) else { continue };
            // pull back along the automorphism
            let sigma_roots: Vec<Vec<i64>> = template.iter().map(|t| (0..rank).map(|j| t[sigma[j]]).collect()).collect();
            return Some(PrimitiveCase {
                row: entry.row,
                algebra: entry.algebra.clone(),
                dtype: dtype.clone(),
                node,
                rank: entry.rk.eval(&env).ok()? as usize,
                params: env.into_iter().collect(),
                constraints: entry.constraints.clone(),
                sigma: sigma_roots,
            });
        }
    }
    None
}

/// Set of summand ids per class representative, used by callers building descriptors.
pub fn summand_set(ids: impl IntoIterator<Item = usize>) -> Vec<usize> {
    ids.into_iter().collect::<BTreeSet<_>>().into_iter().collect()
}
