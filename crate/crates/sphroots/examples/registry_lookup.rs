//! Query the primitive-case table and the spherical-module registry.

use sphroots::rootsystem::DynkinType;
use sphroots::sphdata::{analyze, primitive_lookup, Registry};
use sphroots::subgroup::SphericalDatum;
use sphroots::rootsystem::{build_root_system, LatticeModel};
use std::sync::Arc;

fn main() {
    let reg = Registry::builtin();
    println!("{} module entries, {} primitive rows", reg.modules.len(), reg.primitives.len());

    for (name, node) in [("A4", 0), ("A4", 3), ("C3", 0), ("B2", 1), ("G2", 0), ("E6", 0), ("F4", 3)] {
        let t: DynkinType = name.parse().unwrap();
        match primitive_lookup(reg, &t, node) {
            Some(c) => println!("{name} node {}: {} rank {} sigma {:?}", node + 1, c.algebra, c.rank, c.sigma),
            None => println!("{name} node {}: not primitive", node + 1),
        }
    }

    let rs = Arc::new(build_root_system(&"A3".parse().unwrap(), LatticeModel::Sc));
    let d = SphericalDatum::from_roots(rs, &[0], &[vec![1, 1, 0], vec![1, 1, 1]], &[]).unwrap();
    let a = analyze(&d.descriptor(), reg).unwrap();
    println!("module of {d}: spherical {}, {} generators", a.spherical(), a.generators.len());
}
