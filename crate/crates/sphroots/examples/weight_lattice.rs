//! Classes, normalization and the weight lattice of a datum.

use std::sync::Arc;

use sphroots::rootsystem::{build_root_system, LatticeModel};
use sphroots::sphdata::Registry;
use sphroots::subgroup::{classes, lattice_in_root_coords, normalize, validate, weight_lattice, SphericalDatum, XiGen};

fn main() {
    let reg = Registry::builtin();
    let rs = Arc::new(build_root_system(&"A3".parse().unwrap(), LatticeModel::Sc));
    let d = SphericalDatum::from_roots(rs, &[1], &[vec![1, 1, 0], vec![0, 1, 1]], &[XiGen::Diff(0, 1)]).unwrap();
    println!("{d}");
    println!("violations: {:?}", validate(&d, reg));

    let cl = classes(&d);
    for b in &cl.blocks {
        println!("class {:?}", b.iter().map(|&l| d.hat(l)).collect::<Vec<_>>());
    }
    println!("maximal {:?}", cl.psi0_max.iter().map(|&l| d.hat(l)).collect::<Vec<_>>());
    println!("normalized: {}", normalize(&d));

    let lat = weight_lattice(&d, reg).unwrap();
    println!("weight lattice of rank {} in simple-root coordinates:", lat.rank());
    for v in lattice_in_root_coords(&d, &lat) {
        println!("  {}", v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" "));
    }

    let free = Arc::new(build_root_system(&"A3".parse().unwrap(), LatticeModel::Sc));
    let bad = SphericalDatum::from_roots(free, &[], &[vec![1, 1, 1]], &[]).unwrap();
    for v in validate(&bad, reg) {
        println!("{bad}: {v}");
    }
}
