//! Block-wise solving: split, reduce each block, solve small pieces.

use std::sync::Arc;

use sphroots::engine::{optimized_solve, spherical_roots, Branching, Mode};
use sphroots::rootsystem::{build_root_system, LatticeModel};
use sphroots::sphdata::Registry;
use sphroots::subgroup::{sm_decomposition, SphericalDatum};

fn main() {
    let reg = Registry::builtin();
    let rs = Arc::new(build_root_system(&"A6".parse().unwrap(), LatticeModel::Sc));
    let psi = [vec![1, 1, 0, 0, 0, 0], vec![1, 1, 1, 1, 1, 1], vec![0, 0, 0, 1, 1, 1], vec![0, 0, 0, 0, 0, 1]];
    let d = SphericalDatum::from_roots(rs, &[0, 3], &psi, &[]).unwrap();
    println!("{} blocks in {d}", sm_decomposition(&d).len());

    let r = optimized_solve(&d, reg, Branching::All).unwrap();
    for b in &r.blocks {
        let nodes: Vec<usize> = b.embedding.node_map.iter().map(|n| n + 1).collect();
        println!("block {:?}: {} on nodes {nodes:?}, {} degenerations, rays {:?}", b.block, b.embedding.sub_type, b.degenerations, b.rays);
    }
    println!("total {} degenerations", r.degenerations);

    let both = spherical_roots(&d, reg, Mode::Both, Branching::All).unwrap();
    println!("spherical roots {:?}", both.roots.iter().map(|v| v.iter().map(|x| x.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>());
}
