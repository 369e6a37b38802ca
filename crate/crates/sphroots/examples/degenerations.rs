//! One multiplicative step, one additive step and the press-left rule.

use std::sync::Arc;

use sphroots::degen::{add_degeneration_traced, mult_degeneration_traced, press_left, StringOccupancy};
use sphroots::rootsystem::{build_root_system, LatticeModel};
use sphroots::subgroup::{classes, normalize, SphericalDatum, XiGen};

fn main() {
    let rs = Arc::new(build_root_system(&"B3".parse().unwrap(), LatticeModel::Sc));
    let psi = [vec![0, 1, 1], vec![1, 1, 0], vec![0, 1, 2], vec![1, 1, 1]];
    let d = normalize(&SphericalDatum::from_roots(rs, &[1], &psi, &[XiGen::Diff(0, 1)]).unwrap());
    println!("start: {d}");
    for &l in &classes(&d).psi0_max {
        let out = mult_degeneration_traced(&d, l).unwrap();
        println!("multiplicative at {:?}: {}", d.hat(l), out.datum);
        for ch in &out.chains {
            let steps: Vec<_> = ch.steps.iter().map(|&s| d.hat(s)).collect();
            println!("  chain from {:?} via {steps:?}", d.hat(ch.class[0]));
        }
    }

    let rs = Arc::new(build_root_system(&"A3".parse().unwrap(), LatticeModel::Sc));
    let d = SphericalDatum::from_roots(rs, &[0], &[vec![1, 1, 0], vec![1, 1, 1]], &[]).unwrap();
    for &l in &d.psi {
        let out = add_degeneration_traced(&d, l).unwrap();
        println!("additive at {:?}: {}", out.delta, out.datum);
    }

    let s = StringOccupancy { top: vec![], p: 6, occupied: [6, 4, 1].into_iter().collect() };
    let (t, moves) = press_left(&s);
    println!("press-left {:?} -> {:?} via {moves:?}", s.weights(), t.weights());
}
