//! Build root systems, walk positive roots, strings and diagram symmetries.

use sphroots::rootsystem::{build_root_system, DynkinType, LatticeModel};

fn main() {
    for name in ["A3", "B3", "G2", "F4", "E6", "D4", "A1xA2"] {
        let t: DynkinType = name.parse().unwrap();
        let rs = build_root_system(&t, LatticeModel::Sc);
        let top = rs.positive_roots().iter().max_by_key(|r| r.iter().sum::<i64>()).unwrap();
        println!(
            "{t}: rank {}, {} positive roots, highest {top:?}, {} diagram automorphisms",
            rs.rank(),
            rs.num_positive(),
            rs.diagram_automorphisms().len()
        );
    }

    let b3 = build_root_system(&"B3".parse().unwrap(), LatticeModel::Sc);
    println!("B3 Cartan {:?}", b3.cartan());
    let (top, p, len) = b3.delta_string(&[0, 0, 1], &[0, 1, 0]);
    println!("alpha3-string through alpha2: top {top:?}, p = {p}, length {len}");
    println!("(alpha2+alpha3, alpha3) = {}", b3.form_int(&[0, 1, 1], &[0, 0, 1]));
}
