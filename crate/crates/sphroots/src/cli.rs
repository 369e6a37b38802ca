//! Command-line front end: datum files in, result documents out.

use std::io::Write;
use std::path::PathBuf;
use std::sync::Arc;
use std::time::Instant;

use clap::{Parser, ValueEnum};
use num_rational::Rational64 as Q;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::engine::{optimized_applies, spherical_roots, Branching, EngineError, Mode, SigmaResult};
use crate::rootsystem::{build_root_system, DynkinType, LatticeModel, Series};
use crate::sphdata::Registry;
use crate::subgroup::{lattice_in_root_coords, weight_lattice, SphericalDatum, XiGen};

pub const EXIT_OK: i32 = 0;
pub const EXIT_PARSE: i32 = 1;
pub const EXIT_NOT_SPHERICAL: i32 = 2;
pub const EXIT_UNKNOWN_MODULE: i32 = 3;
pub const EXIT_VALIDATION: i32 = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum AlgorithmArg {
    Base,
    Optimized,
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BranchingArg {
    Two,
    All,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum LatticeArg {
    Sc,
    Adjoint,
}

#[derive(Debug, Parser)]
#[command(name = "sphroots", about = "Spherical roots of a regularly embedded spherical subgroup")]
pub struct Args {
    /// datum file (TOML)
    pub input: PathBuf,
    /// defaults to both when the block-wise path applies, otherwise base
    #[arg(long, value_enum)]
    pub algorithm: Option<AlgorithmArg>,
    #[arg(long, value_enum, default_value = "all")]
    pub branching: BranchingArg,
    /// include the degeneration trace in the result
    #[arg(long)]
    pub trace: bool,
    /// overrides the lattice named in the datum file
    #[arg(long, value_enum)]
    pub lattice: Option<LatticeArg>,
    /// registry data file instead of the built-in one
    #[arg(long)]
    pub data: Option<PathBuf>,
    /// write the result here instead of stdout
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

/// A rational number as written in files: an integer or a "p/q" string.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Num {
    Int(i64),
    Text(String),
}

impl Num {
    pub fn from_q(q: Q) -> Num {
        if q.is_integer() {
            Num::Int(q.to_integer())
        } else {
            Num::Text(q.to_string())
        }
    }

    pub fn to_q(&self) -> Result<Q, String> {
        match self {
            Num::Int(n) => Ok(Q::from(*n)),
            Num::Text(s) => s.trim().parse::<Q>().map_err(|e| format!("bad rational {s:?}: {e}")),
        }
    }
}

fn nums(v: &[Q]) -> Vec<Num> {
    v.iter().map(|&q| Num::from_q(q)).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupComponent {
    pub series: String,
    pub rank: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "lowercase")]
pub enum XiEntry {
    /// 1-based positions in the psi list
    Diff([usize; 2]),
    Vector(Vec<Num>),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatumFile {
    pub group: Vec<GroupComponent>,
    #[serde(default = "default_lattice")]
    pub lattice: LatticeModel,
    /// 1-based simple-root indices
    #[serde(default)]
    pub levi: Vec<usize>,
    #[serde(default)]
    pub psi: Vec<Vec<i64>>,
    #[serde(default)]
    pub xi: Vec<XiEntry>,
}

fn default_lattice() -> LatticeModel {
    LatticeModel::Sc
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Parse(String),
    #[error(transparent)]
    Engine(#[from] EngineError),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) => EXIT_PARSE,
            CliError::Engine(EngineError::NotSpherical(_)) => EXIT_NOT_SPHERICAL,
            CliError::Engine(EngineError::UnknownModule(_)) => EXIT_UNKNOWN_MODULE,
            CliError::Engine(_) => EXIT_VALIDATION,
        }
    }
}

impl DatumFile {
    pub fn parse(text: &str) -> Result<DatumFile, CliError> {
        toml::from_str(text).map_err(|e| CliError::Parse(e.to_string()))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("datum files serialize")
    }

    pub fn dynkin_type(&self) -> Result<DynkinType, CliError> {
        let mut comps = Vec::new();
        for g in &self.group {
            let mut chars = g.series.chars();
            let series = match (chars.next().and_then(Series::from_letter), chars.next()) {
                (Some(s), None) => s,
                _ => return Err(CliError::Parse(format!("unknown series {:?}", g.series))),
            };
            comps.push((series, g.rank));
        }
        if comps.is_empty() {
            return Err(CliError::Parse("group is empty".into()));
        }
        DynkinType::new(comps).map_err(|e| CliError::Parse(e.to_string()))
    }

    pub fn to_datum(&self, lattice: Option<LatticeModel>) -> Result<SphericalDatum, CliError> {
        let dtype = self.dynkin_type()?;
        let n = dtype.rank();
        let rs = Arc::new(build_root_system(&dtype, lattice.unwrap_or(self.lattice)));
        let mut levi = Vec::new();
        for &i in &self.levi {
            if i == 0 || i > n {
                return Err(CliError::Parse(format!("levi index {i} out of range 1..={n}")));
            }
            levi.push(i - 1);
        }
        levi.sort();
        levi.dedup();
        let mut xi = Vec::new();
        for x in &self.xi {
            xi.push(match x {
                XiEntry::Diff([a, b]) => {
                    if *a == 0 || *b == 0 {
                        return Err(CliError::Parse("xi diff indices are 1-based".into()));
                    }
                    XiGen::Diff(a - 1, b - 1)
                }
                XiEntry::Vector(v) => XiGen::Vector(v.iter().map(Num::to_q).collect::<Result<_, _>>().map_err(CliError::Parse)?),
            });
        }
        SphericalDatum::from_roots(rs, &levi, &self.psi, &xi).map_err(|e| CliError::Parse(e.to_string()))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<Vec<i64>>,
    pub before: String,
    pub after: String,
    #[serde(skip_serializing_if = "String::is_empty", default)]
    pub note: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlockRecord {
    pub block: Vec<Vec<i64>>,
    pub group: String,
    /// 1-based nodes of the original diagram
    pub nodes: Vec<usize>,
    pub degenerations: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub seconds: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultFile {
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
    pub algorithm: String,
    pub rank: usize,
    pub spherical_roots: Vec<Vec<Num>>,
    pub weight_lattice_basis: Vec<Vec<Num>>,
    pub degenerations: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub blocks: Vec<BlockRecord>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub trace: Vec<TraceRecord>,
    pub timing: Timing,
}

fn mode_name(m: Mode) -> &'static str {
    match m {
        Mode::Base => "base",
        Mode::Optimized => "optimized",
        Mode::Both => "both",
    }
}

/// Run a datum through the engine and build the result document.
pub fn solve_file(datum: &DatumFile, args: &Args, reg: &Registry) -> Result<ResultFile, CliError> {
    let lattice = args.lattice.map(|l| match l {
        LatticeArg::Sc => LatticeModel::Sc,
        LatticeArg::Adjoint => LatticeModel::Adjoint,
    });
    let d = datum.to_datum(lattice)?;
    let mode = match args.algorithm {
        Some(AlgorithmArg::Base) => Mode::Base,
        Some(AlgorithmArg::Optimized) => Mode::Optimized,
        Some(AlgorithmArg::Both) => Mode::Both,
        None if optimized_applies(&d) => Mode::Both,
        None => Mode::Base,
    };
    let branching = match args.branching {
        BranchingArg::Two => Branching::Two,
        BranchingArg::All => Branching::All,
    };
    let start = Instant::now();
    let res: SigmaResult = spherical_roots(&d, reg, mode, branching)?;
    let lat = weight_lattice(&d, reg).map_err(EngineError::from)?;
    let seconds = start.elapsed().as_secs_f64();
    let mut roots = res.roots.clone();
    roots.sort_by(|a, b| b.cmp(a));
    let trace = if args.trace {
        res.trace
            .iter()
            .map(|s| TraceRecord {
                kind: s.kind.as_str().into(),
                lambda: s.lambda.clone(),
                before: format!("{:016x}", s.before),
                after: format!("{:016x}", s.after),
                note: s.note.clone(),
            })
            .collect()
    } else {
        Vec::new()
    };
    let blocks = res
        .blocks
        .iter()
        .map(|b| BlockRecord {
            block: b.block.clone(),
            group: b.embedding.sub_type.to_string(),
            nodes: b.embedding.node_map.iter().map(|i| i + 1).collect(),
            degenerations: b.degenerations,
        })
        .collect();
    Ok(ResultFile {
        status: "ok".into(),
        message: None,
        algorithm: mode_name(mode).into(),
        rank: roots.len(),
        spherical_roots: roots.iter().map(|r| nums(r)).collect(),
        weight_lattice_basis: lattice_in_root_coords(&d, &lat).iter().map(|r| nums(r)).collect(),
        degenerations: res.degenerations,
        blocks,
        trace,
        timing: Timing { seconds },
    })
}

fn failure(status: &str, e: &CliError) -> ResultFile {
    ResultFile {
        status: status.into(),
        message: Some(e.to_string()),
        algorithm: String::new(),
        rank: 0,
        spherical_roots: Vec::new(),
        weight_lattice_basis: Vec::new(),
        degenerations: 0,
        blocks: Vec::new(),
        trace: Vec::new(),
        timing: Timing { seconds: 0.0 },
    }
}

/// Parse arguments, run, and report; returns the exit code.
pub fn run_with_io(argv: &[String], out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let args = match Args::try_parse_from(argv) {
        Ok(a) => a,
        Err(e) => {
            let _ = write!(err, "{e}");
            return if e.use_stderr() { EXIT_PARSE } else { EXIT_OK };
        }
    };
    let owned;
    let reg = match &args.data {
        Some(p) => match Registry::load(p) {
            Ok(r) => {
                owned = r;
                &owned
            }
            Err(e) => {
                let _ = writeln!(err, "registry {}: {e}", p.display());
                return EXIT_PARSE;
            }
        },
        None => Registry::builtin(),
    };
    let outcome = std::fs::read_to_string(&args.input)
        .map_err(|e| CliError::Parse(format!("{}: {e}", args.input.display())))
        .and_then(|text| DatumFile::parse(&text).map_err(|e| CliError::Parse(format!("{}: {e}", args.input.display()))))
        .and_then(|datum| solve_file(&datum, &args, reg));
    let (doc, code) = match outcome {
        Ok(r) => (r, EXIT_OK),
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            let code = e.exit_code();
            if code == EXIT_PARSE {
                return code;
            }
            let status = match code {
                EXIT_NOT_SPHERICAL => "not-spherical",
                EXIT_UNKNOWN_MODULE => "unknown-module",
                _ => "invalid",
            };
            (failure(status, &e), code)
        }
    };
    let text = toml::to_string(&doc).expect("result documents serialize");
    let written = match &args.output {
        Some(p) => std::fs::write(p, &text).map_err(|e| e.to_string()),
        None => out.write_all(text.as_bytes()).map_err(|e| e.to_string()),
    };
    if let Err(e) = written {
        let _ = writeln!(err, "write failed: {e}");
        return EXIT_PARSE;
    }
    code
}

pub fn run() -> i32 {
    let argv: Vec<String> = std::env::args().collect();
    run_with_io(&argv, &mut std::io::stdout(), &mut std::io::stderr())
}

#[cfg(test)]
mod tests {
    use super::*;

    const FIRST: &str = r#"
group = [{ series = "A", rank = 3 }]
levi = [2]
psi = [[1, 1, 0], [0, 1, 1]]
xi = [{ diff = [1, 2] }]
"#;

    fn args(extra: &[&str]) -> Args {
        let mut v = vec!["sphroots", "x.toml"];
        v.extend_from_slice(extra);
        Args::try_parse_from(v).unwrap()
    }

    #[test]
    fn shared_class_roots() {
        let f = DatumFile::parse(FIRST).unwrap();
        let r = solve_file(&f, &args(&[]), Registry::builtin()).unwrap();
        assert_eq!(r.algorithm, "base");
        let roots: Vec<Vec<Num>> = vec![vec![Num::Int(1), Num::Int(1), Num::Int(0)], vec![Num::Int(0), Num::Int(1), Num::Int(1)]];
        assert_eq!(r.spherical_roots, roots);
        assert_eq!(r.rank, 2);
    }

    #[test]
    fn half_integral_basis_is_written_as_text() {
        let f = DatumFile::parse(FIRST).unwrap();
        let r = solve_file(&f, &args(&[]), Registry::builtin()).unwrap();
        let text = toml::to_string(&r).unwrap();
        assert!(text.contains("\"1/2\""), "{text}");
    }

    #[test]
    fn round_trip_is_stable() {
        let f = DatumFile::parse(FIRST).unwrap();
        let once = f.to_toml();
        assert_eq!(DatumFile::parse(&once).unwrap().to_toml(), once);
    }

    #[test]
    fn malformed_psi_is_a_parse_error() {
        let bad = FIRST.replace("[0, 1, 1]]", "[0, 1]]");
        let f = DatumFile::parse(&bad).unwrap();
        let e = f.to_datum(None).unwrap_err();
        assert_eq!(e.exit_code(), EXIT_PARSE);
        assert!(DatumFile::parse("group = 3").is_err());
    }

    #[test]
    fn rational_numbers() {
        assert_eq!(Num::Text("-1/2".into()).to_q().unwrap(), Q::new(-1, 2));
        assert_eq!(Num::from_q(Q::from(3)), Num::Int(3));
        assert!(Num::Text("x".into()).to_q().is_err());
    }
}
