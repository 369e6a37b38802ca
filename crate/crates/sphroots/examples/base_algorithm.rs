//! The recursive degeneration search with its trace.

use std::sync::Arc;

use sphroots::engine::{base_solve, Branching};
use sphroots::rootsystem::{build_root_system, LatticeModel};
use sphroots::sphdata::Registry;
use sphroots::subgroup::SphericalDatum;

fn main() {
    let rs = Arc::new(build_root_system(&"A3".parse().unwrap(), LatticeModel::Sc));
    let d = SphericalDatum::from_roots(rs, &[0], &[vec![1, 1, 0], vec![1, 1, 1]], &[]).unwrap();
    for branching in [Branching::All, Branching::Two] {
        let r = base_solve(&d, Registry::builtin(), branching).unwrap();
        println!("{branching:?}: rays {:?} after {} degenerations", r.rays, r.degenerations);
        for step in &r.trace {
            println!("  {step}");
        }
    }
}
